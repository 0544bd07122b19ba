use collapse_lab::collapse::{resolve_weight, Branch, CollapseParams, GlobalStream};
use collapse_lab::dynamics::InteractionTrace;
use collapse_lab::experiments::ensemble;
use proptest::prelude::*;

fn win_frequency(w0: f64, delta: f64, n: u64, seed: u64) -> f64 {
    let params = CollapseParams::new(delta).unwrap();
    let wins = ensemble(n, |r| resolve_weight(w0, &params, &mut GlobalStream::substream(seed, r), None))
        .unwrap()
        .into_iter()
        .filter(|&b| b == Branch::Interacting)
        .count();
    wins as f64 / n as f64
}

#[test]
fn born_frequency_does_not_depend_on_step_size() {
    let (w0, n) = (0.3, 10_000);
    let coarse = win_frequency(w0, 0.01, n, 1);
    let fine = win_frequency(w0, 0.001, n, 2);
    let sigma = (2.0 * w0 * (1.0 - w0) / n as f64).sqrt();
    assert!((coarse - fine).abs() <= 3.0 * sigma, "{coarse} vs {fine}");
}

proptest! {
    #[test]
    fn tau_is_additive_over_partitions(
        pieces in prop::collection::vec((0.001f64..0.5, 0.0f64..3.0), 1..40),
        split in 0usize..40,
    ) {
        let split = split.min(pieces.len());
        let mut whole = InteractionTrace::new(0.0, 0.0, 0.0, 1.0 / 64.0).unwrap();
        for &(dt, rate) in &pieces {
            whole.accumulate(dt, rate, 0.0, 0.0).unwrap();
        }
        let part = |range: &[(f64, f64)]| {
            let mut t = InteractionTrace::new(0.0, 0.0, 0.0, 1.0 / 64.0).unwrap();
            for &(dt, rate) in range {
                t.accumulate(dt, rate, 0.0, 0.0).unwrap();
            }
            t.tau()
        };
        let sum = part(&pieces[..split]) + part(&pieces[split..]);
        prop_assert!((whole.tau() - sum).abs() <= 1e-10);
    }
}
