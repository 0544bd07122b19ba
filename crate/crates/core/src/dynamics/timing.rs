use crate::tolerance::SHIFT_MAGNITUDE_CEILING;
use crate::{Error, Result};

/// Reduced Planck constant in eV·s.
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;

/// `ħ / E` in seconds for an energy in eV: the time over which an
/// interaction of that strength completes.
pub fn interaction_timescale(energy_ev: f64) -> f64 {
    HBAR_EV_S / energy_ev
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftMagnitude {
    pub g: f64,
    /// `g` exceeds the ceiling expected for nonrelativistic interactions.
    pub calibration_warning: bool,
}

/// Size of one amplitude shift: `|<V>| / E_total`, where `E_total` is the
/// total relativistic energy (rest energies plus nonrelativistic energy).
pub fn shift_magnitude(v_exp: f64, e_total_rel: f64) -> Result<ShiftMagnitude> {
    if !(e_total_rel > 0.0) || !e_total_rel.is_finite() {
        return Err(Error::Input(format!(
            "total relativistic energy must be positive, got {e_total_rel}"
        )));
    }
    if !v_exp.is_finite() {
        return Err(Error::Input("interaction energy must be finite".into()));
    }
    let g = v_exp.abs() / e_total_rel;
    let calibration_warning = g > SHIFT_MAGNITUDE_CEILING;
    if calibration_warning {
        log::warn!("shift magnitude {g:e} exceeds {SHIFT_MAGNITUDE_CEILING:e}; check units");
    }
    Ok(ShiftMagnitude {
        g,
        calibration_warning,
    })
}

/// `dτ/dt = |d<V>/dt| / E_cm`.
pub fn timing_rate(dv_dt: f64, e_cm: f64) -> Result<f64> {
    if !(e_cm > 0.0) || !e_cm.is_finite() {
        return Err(Error::Input(format!(
            "center-of-mass energy must be positive, got {e_cm}"
        )));
    }
    Ok(dv_dt.abs() / e_cm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    /// `<V>`
    pub v: f64,
    /// `<T>`
    pub kinetic: f64,
    /// `dτ/dt` applied over the interval ending at `t`.
    pub rate: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DueReduction {
    /// Index of the sample during which τ crossed the threshold.
    pub sample: usize,
    /// 1-based count of reduction steps so far.
    pub step: u64,
}

/// Time series of the interaction and its accumulated timing parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionTrace {
    samples: Vec<TraceSample>,
    tau_step: f64,
    due: Vec<DueReduction>,
}

impl InteractionTrace {
    /// Empty trace at `t0` with `τ = 0`.
    pub fn new(t0: f64, v: f64, kinetic: f64, tau_step: f64) -> Result<Self> {
        if !(tau_step > 0.0 && tau_step.is_finite()) {
            return Err(Error::Input(format!("tau_step must be positive, got {tau_step}")));
        }
        Ok(Self {
            samples: vec![TraceSample {
                t: t0,
                v,
                kinetic,
                rate: 0.0,
                tau: 0.0,
            }],
            tau_step,
            due: Vec::new(),
        })
    }

    pub fn samples(&self) -> &[TraceSample] {
        &self.samples
    }

    pub fn last(&self) -> &TraceSample {
        self.samples.last().expect("trace always has a first sample")
    }

    pub fn tau(&self) -> f64 {
        self.last().tau
    }

    pub fn tau_step(&self) -> f64 {
        self.tau_step
    }

    pub fn due(&self) -> &[DueReduction] {
        &self.due
    }

    /// Advances by `dt` at constant `rate`, appending a sample with the new
    /// `<V>` and `<T>`. Returns how many reduction steps fell due.
    pub fn accumulate(&mut self, dt: f64, rate: f64, v: f64, kinetic: f64) -> Result<usize> {
        if !(dt >= 0.0) || !dt.is_finite() {
            return Err(Error::Input(format!("time step must be nonnegative, got {dt}")));
        }
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::Input(format!("timing rate must be nonnegative, got {rate}")));
        }
        if dt == 0.0 {
            return Ok(0);
        }
        let prev = *self.last();
        let tau = prev.tau + rate * dt;
        let before = (prev.tau / self.tau_step).floor() as u64;
        let after = (tau / self.tau_step).floor() as u64;
        let sample = self.samples.len();
        self.samples.push(TraceSample {
            t: prev.t + dt,
            v,
            kinetic,
            rate,
            tau,
        });
        for step in before + 1..=after {
            self.due.push(DueReduction { sample, step });
        }
        Ok((after - before) as usize)
    }
}

/// Functional form of [`InteractionTrace::accumulate`].
pub fn accumulate_tau(
    mut trace: InteractionTrace,
    dt: f64,
    rate: f64,
    v: f64,
    kinetic: f64,
) -> Result<InteractionTrace> {
    trace.accumulate(dt, rate, v, kinetic)?;
    Ok(trace)
}

/// Which `<V>` feeds the shift magnitude of each sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftMode {
    #[default]
    Instantaneous,
    /// The largest `|<V>|` seen anywhere in the trace.
    Peak,
}

pub fn shift_magnitudes(trace: &InteractionTrace, e_total_rel: f64, mode: ShiftMode) -> Result<Vec<f64>> {
    let peak = trace.samples.iter().map(|s| s.v.abs()).fold(0.0, f64::max);
    trace
        .samples
        .iter()
        .map(|s| {
            let v = match mode {
                ShiftMode::Instantaneous => s.v,
                ShiftMode::Peak => peak,
            };
            shift_magnitude(v, e_total_rel).map(|m| m.g)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn hydrogen_scale_shift() {
        let m = shift_magnitude(10.0, 5.11e5).unwrap();
        assert!((m.g - 1.957e-5).abs() < 5e-9, "{}", m.g);
        assert!(!m.calibration_warning);
        assert_eq!(shift_magnitude(0.0, 5.11e5).unwrap().g, 0.0);
        assert!(shift_magnitude(1e3, 5.11e5).unwrap().calibration_warning);
        assert!(shift_magnitude(1.0, 0.0).is_err());
        assert!(shift_magnitude(1.0, -3.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn shift_is_homogeneous(v in -1e3f64..1e3, e in 1e-3f64..1e6, k in -20i32..20) {
            let scale = f64::powi(2.0, k);
            let a = shift_magnitude(v, e).unwrap().g;
            let b = shift_magnitude(v * scale, e * scale).unwrap().g;
            proptest::prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn rate_examples() {
        assert_eq!(timing_rate(0.0, 3.0).unwrap(), 0.0);
        assert_eq!(timing_rate(-2.5, 5.0).unwrap(), timing_rate(2.5, 5.0).unwrap());
        assert!(timing_rate(1.0, 0.0).is_err());
    }

    #[test]
    fn harmonic_exchange_peak_rate() {
        // <V>(t) = E0 sin^2(wt) => d<V>/dt = E0 w sin(2wt), peak E0 w.
        let (e0, w) = (3.0, 2.0);
        let peak = timing_rate(e0 * w * (2.0 * w * (PI / (4.0 * w))).sin(), e0).unwrap();
        assert!((peak - w).abs() < 1e-12);
    }

    #[test]
    fn zero_rate_never_flags() {
        let mut t = InteractionTrace::new(0.0, 0.0, 1.0, 1.0 / 64.0).unwrap();
        for _ in 0..100 {
            t.accumulate(0.1, 0.0, 0.0, 1.0).unwrap();
        }
        assert_eq!(t.tau(), 0.0);
        assert!(t.due().is_empty());
    }

    #[test]
    fn constant_rate_integrates_linearly() {
        let (r, dt, steps) = (0.37, 0.01, 500);
        let mut t = InteractionTrace::new(0.0, 0.0, 0.0, 1.0 / 64.0).unwrap();
        for _ in 0..steps {
            t = accumulate_tau(t, dt, r, 0.0, 0.0).unwrap();
        }
        let total = dt * steps as f64;
        assert!((t.tau() - r * total).abs() < 1e-12);
        assert_eq!(t.due().len(), (r * total * 64.0).floor() as usize);
        let steps: Vec<u64> = t.due().iter().map(|d| d.step).collect();
        assert_eq!(steps, (1..=steps.len() as u64).collect::<Vec<_>>());
    }

    #[test]
    fn negative_dt_rejected() {
        let mut t = InteractionTrace::new(0.0, 0.0, 0.0, 0.1).unwrap();
        assert!(t.accumulate(-0.1, 1.0, 0.0, 0.0).is_err());
        assert!(InteractionTrace::new(0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn atomic_scale_time() {
        // One hartree (27.2 eV) sets the atomic unit of time, ~2.4e-17 s.
        let t = interaction_timescale(27.211_386);
        assert!((t - 2.4189e-17).abs() < 1e-20);
        assert_eq!(t.log10().round(), -17.0);
    }

    #[test]
    fn peak_mode_uses_trace_maximum() {
        let mut t = InteractionTrace::new(0.0, 0.0, 1.0, 0.1).unwrap();
        t.accumulate(1.0, 0.5, 2.0, 1.0).unwrap();
        t.accumulate(1.0, 0.5, -4.0, 1.0).unwrap();
        let inst = shift_magnitudes(&t, 100.0, ShiftMode::Instantaneous).unwrap();
        let peak = shift_magnitudes(&t, 100.0, ShiftMode::Peak).unwrap();
        assert_eq!(inst, vec![0.0, 0.02, 0.04]);
        assert_eq!(peak, vec![0.04; 3]);
    }
}
