//! Two particles on a 1-D grid with a conservative potential that depends
//! only on their separation. Natural units, ħ = 1; energies are whatever the
//! caller feeds in (eV in the shipped examples).
//!
//! The module also derives the timing parameter: the rate at which
//! potential energy is exchanged with kinetic energy, divided by the
//! center-of-mass energy. Its running integral decides when reduction
//! steps fall due.

mod grid;
mod hamiltonian;
mod propagate;
mod scattering;
mod timing;

pub use grid::{GridSpec, PotentialTable, TwoParticleSystem};
pub use hamiltonian::{
    build_hamiltonian, interaction_expectation, kinetic_expectation, lowest_eigenvalue,
    momentum_expectation, GridHamiltonian,
};
pub use propagate::{unitary_step, FixedStep, Propagator, SPECTRAL_MAX_DIM};
pub use scattering::{simulate_scattering, simulate_scattering_with_table, wave_packet_pair, ScatteringConfig, ScatteringResult};
pub use timing::{
    accumulate_tau, interaction_timescale, shift_magnitude, shift_magnitudes, timing_rate,
    DueReduction, InteractionTrace, ShiftMagnitude, ShiftMode, TraceSample, HBAR_EV_S,
};
