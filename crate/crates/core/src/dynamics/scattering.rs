use super::{
    interaction_expectation, momentum_expectation, timing_rate, GridHamiltonian,
    GridSpec, InteractionTrace, PotentialTable, Propagator, TwoParticleSystem,
};
use crate::quantum::{StateVector, C64};
use crate::{Error, Result};

/// Product of two Gaussian packets, `(center, momentum, width)` each.
pub fn wave_packet_pair(
    sys: &TwoParticleSystem,
    first: (f64, f64, f64),
    second: (f64, f64, f64),
) -> Result<StateVector> {
    let packet = |(x0, k, sigma): (f64, f64, f64)| -> Vec<C64> {
        (0..sys.grid.n)
            .map(|i| {
                let x = sys.grid.position(i);
                let env = (-(x - x0).powi(2) / (4.0 * sigma * sigma)).exp();
                C64::from_polar(env, k * x)
            })
            .collect()
    };
    let (a, b) = (packet(first), packet(second));
    let amps = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
    StateVector::new(&sys.dims(), amps)?.normalize()
}

/// Head-on collision of two equal-mass packets against a Gaussian
/// repulsive core `V(d) = height * exp(-d^2 / (2 range^2))`.
///
/// The barrier is set relative to the center-of-mass energy by
/// `barrier_ratio`. At the default ratio of 2 the packets reflect and the
/// integrated timing parameter of the collision is about 0.94; a ratio of
/// 1 gives about 1.16.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringConfig {
    pub points: usize,
    pub dx: f64,
    pub mass: f64,
    /// Momentum of each packet, `+k` and `-k`.
    pub momentum: f64,
    pub width: f64,
    /// Initial distance between packet centers.
    pub separation: f64,
    pub barrier_ratio: f64,
    pub barrier_range: f64,
    pub dt: f64,
    pub max_time: f64,
    /// Rest energy of each particle, in the same units as the potential.
    pub rest_energy: f64,
    pub tau_step: f64,
}

impl Default for ScatteringConfig {
    fn default() -> Self {
        Self {
            points: GridSpec::DEFAULT_POINTS,
            dx: 1.0,
            mass: 1.0,
            momentum: 0.8,
            width: 4.0,
            separation: 30.0,
            barrier_ratio: 2.0,
            barrier_range: 3.0,
            dt: 0.05,
            max_time: 60.0,
            rest_energy: 5.11e5,
            tau_step: crate::collapse::CollapseParams::DEFAULT_TAU_STEP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScatteringResult {
    pub system: TwoParticleSystem,
    pub trace: InteractionTrace,
    /// Nonrelativistic energy in the center-of-mass frame.
    pub e_cm: f64,
    /// Rest energies plus `e_cm`.
    pub e_total_rel: f64,
    pub peak_interaction: f64,
    pub final_state: StateVector,
}

impl ScatteringResult {
    pub fn tau(&self) -> f64 {
        self.trace.tau()
    }
}

/// Runs the collision until the packets have separated again (`<V>` back
/// below 1% of its peak and falling) or `max_time` is reached.
pub fn simulate_scattering(cfg: &ScatteringConfig) -> Result<ScatteringResult> {
    if !(cfg.barrier_ratio >= 0.0) {
        return Err(Error::Input("scattering needs a nonnegative barrier".into()));
    }
    let relative_mass = cfg.mass / 2.0;
    let e_rel = cfg.momentum * cfg.momentum / (2.0 * relative_mass);
    let height = cfg.barrier_ratio * e_rel;
    let range = cfg.barrier_range;
    simulate_with_potential(cfg, |d| height * (-(d * d) / (2.0 * range * range)).exp())
}

/// As [`simulate_scattering`] with the interaction taken from a table;
/// `barrier_ratio` and `barrier_range` are ignored.
pub fn simulate_scattering_with_table(cfg: &ScatteringConfig, table: &PotentialTable) -> Result<ScatteringResult> {
    simulate_with_potential(cfg, |d| table.eval(d))
}

fn simulate_with_potential(cfg: &ScatteringConfig, potential: impl Fn(f64) -> f64) -> Result<ScatteringResult> {
    if !(cfg.dt > 0.0 && cfg.max_time > 0.0) {
        return Err(Error::Input("scattering needs positive dt and max_time".into()));
    }
    let grid = GridSpec::new(cfg.points, cfg.dx)?;
    let system = TwoParticleSystem::with_potential_fn(
        cfg.mass,
        cfg.mass,
        grid,
        potential,
        cfg.rest_energy,
        cfg.rest_energy,
    )?;
    let mid = grid.length() / 2.0;
    let mut state = wave_packet_pair(
        &system,
        (mid - cfg.separation / 2.0, cfg.momentum, cfg.width),
        (mid + cfg.separation / 2.0, -cfg.momentum, cfg.width),
    )?;

    let h = GridHamiltonian::new(&system);
    let kinetic = |s: &StateVector| -> f64 {
        let a = s.amplitudes().as_slice();
        a.iter().zip(h.apply_kinetic(a)).map(|(x, y)| (x.conj() * y).re).sum()
    };
    let (p1, p2) = momentum_expectation(&state, &system)?;
    let e_cm = h.expectation(&state)? - (p1 + p2).powi(2) / (2.0 * system.total_mass());
    let e_total_rel = system.rest_energy1 + system.rest_energy2 + e_cm;

    let propagator = Propagator::for_system(&system)?.fixed_step(cfg.dt)?;
    let mut v_prev = interaction_expectation(&state, &system)?;
    let mut trace = InteractionTrace::new(0.0, v_prev, kinetic(&state), cfg.tau_step)?;
    let mut peak = v_prev;
    let steps = (cfg.max_time / cfg.dt).ceil() as usize;
    for _ in 0..steps {
        state = propagator.apply(&state)?;
        let v = interaction_expectation(&state, &system)?;
        let rate = timing_rate((v - v_prev) / cfg.dt, e_cm)?;
        trace.accumulate(cfg.dt, rate, v, kinetic(&state))?;
        peak = peak.max(v);
        let separated = peak > 0.0 && v < 0.01 * peak && v < v_prev;
        v_prev = v;
        if separated {
            break;
        }
    }
    Ok(ScatteringResult {
        system,
        trace,
        e_cm,
        e_total_rel,
        peak_interaction: peak,
        final_state: state,
    })
}
