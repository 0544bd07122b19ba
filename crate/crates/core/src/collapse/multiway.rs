use super::{resolve_weight, Branch, CollapseParams, GlobalStream};
use crate::tolerance::ACCUMULATED;
use crate::{Error, Result};

/// Picks one of several branches by sequential pairwise contests.
///
/// Branches are visited in the given order. The current champion carries
/// the combined weight of every branch seen so far, and each newcomer
/// challenges it with relative weight `w_k / (S_{k-1} + w_k)`. Branch `i`
/// therefore survives with probability
/// `(w_i / S_i) * prod_{j > i} (S_{j-1} / S_j) = w_i`.
///
/// Returns the index of the winner.
pub fn multiway_collapse<L>(
    branches: &[(L, f64)],
    params: &CollapseParams,
    stream: &mut GlobalStream,
) -> Result<usize> {
    if branches.is_empty() {
        return Err(Error::Input("no branches to collapse".into()));
    }
    if let Some((i, w)) = branches
        .iter()
        .enumerate()
        .map(|(i, b)| (i, b.1))
        .find(|(_, w)| !(*w >= 0.0) || !w.is_finite())
    {
        return Err(Error::Input(format!("branch {i} has invalid weight {w}")));
    }
    let total: f64 = branches.iter().map(|b| b.1).sum();
    if (total - 1.0).abs() > ACCUMULATED {
        return Err(Error::Input(format!("branch weights sum to {total}, not 1")));
    }

    let mut champion: Option<usize> = None;
    let mut mass = 0.0;
    for (k, &(_, w)) in branches.iter().enumerate() {
        match champion {
            None if w > 0.0 => champion = Some(k),
            None => {}
            Some(_) if w > 0.0 => {
                let relative = (w / (mass + w)).min(1.0);
                if resolve_weight(relative, params, stream, None)? == Branch::Interacting {
                    champion = Some(k);
                }
            }
            Some(_) => {}
        }
        mass += w;
    }
    champion.ok_or_else(|| Error::Internal("no branch carried weight".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frequencies(weights: &[f64], n: u64, seed: u64) -> Vec<f64> {
        let branches: Vec<(usize, f64)> = weights.iter().copied().enumerate().collect();
        let params = CollapseParams::default();
        let mut counts = vec![0u64; weights.len()];
        for r in 0..n {
            let mut s = GlobalStream::substream(seed, r);
            counts[multiway_collapse(&branches, &params, &mut s).unwrap()] += 1;
        }
        counts.iter().map(|&c| c as f64 / n as f64).collect()
    }

    #[test]
    fn certain_branch() {
        let mut s = GlobalStream::new(0);
        let b = [("a", 1.0), ("b", 0.0), ("c", 0.0)];
        for _ in 0..100 {
            assert_eq!(multiway_collapse(&b, &CollapseParams::default(), &mut s).unwrap(), 0);
        }
        assert_eq!(s.counter(), 0);
        let late = [("a", 0.0), ("b", 0.0), ("c", 1.0)];
        assert_eq!(multiway_collapse(&late, &CollapseParams::default(), &mut s).unwrap(), 2);
    }

    #[test]
    fn uniform_four_way() {
        let f = frequencies(&[0.25; 4], 10_000, 10);
        for x in f {
            assert!((x - 0.25).abs() <= 0.013, "{x}");
        }
    }

    #[test]
    fn contest_order_does_not_matter() {
        // Oracle: each branch's survival probability telescopes to its weight,
        // so any ordering of the same weights yields the same distribution.
        let w = [0.2, 0.5, 0.3];
        let n = 10_000;
        let orders = [[0, 1, 2], [2, 0, 1], [1, 2, 0]];
        for (i, order) in orders.iter().enumerate() {
            let permuted: Vec<f64> = order.iter().map(|&k| w[k]).collect();
            let f = frequencies(&permuted, n, 20 + i as u64);
            for (pos, &k) in order.iter().enumerate() {
                let band = 3.0 * (w[k] * (1.0 - w[k]) / n as f64).sqrt();
                assert!((f[pos] - w[k]).abs() <= band, "order {order:?}: {f:?}");
            }
        }
    }

    #[test]
    fn rejects_bad_weights() {
        let mut s = GlobalStream::new(0);
        let p = CollapseParams::default();
        assert!(multiway_collapse(&[(0, -0.1), (1, 1.1)], &p, &mut s).is_err());
        assert!(multiway_collapse(&[(0, 0.5), (1, 0.4)], &p, &mut s).is_err());
        assert!(multiway_collapse::<u8>(&[], &p, &mut s).is_err());
    }
}
