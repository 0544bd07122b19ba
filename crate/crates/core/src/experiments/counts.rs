use crate::{Error, Result};

/// Measurement result of one party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(self) -> i64 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn from_sign(sign: i64) -> Result<Self> {
        match sign {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            other => Err(Error::Model(format!("response {other} is not +1 or -1"))),
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

/// Analyzer angles in radians: `a`, `a'` for party A and `b`, `b'` for B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettingsQuartet {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl SettingsQuartet {
    pub fn new(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Result<Self> {
        let q = Self { a, a_prime, b, b_prime };
        if [a, a_prime, b, b_prime].iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("analyzer angles must be finite".into()));
        }
        Ok(q)
    }

    /// `a = 0, a' = π/2, b = π/4, b' = 3π/4`.
    pub fn optimal() -> Self {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        Self {
            a: 0.0,
            a_prime: FRAC_PI_2,
            b: FRAC_PI_4,
            b_prime: 3.0 * FRAC_PI_4,
        }
    }

    pub fn a_setting(&self, i: usize) -> f64 {
        [self.a, self.a_prime][i]
    }

    pub fn b_setting(&self, j: usize) -> f64 {
        [self.b, self.b_prime][j]
    }
}

/// Tally of joint outcomes, `cells[a_setting][b_setting][outcome_a][outcome_b]`
/// with outcome index 0 for `+` and 1 for `-`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountTable {
    pub quartet: SettingsQuartet,
    cells: [[[[u64; 2]; 2]; 2]; 2],
}

impl CountTable {
    pub fn new(quartet: SettingsQuartet) -> Self {
        Self {
            quartet,
            cells: [[[[0; 2]; 2]; 2]; 2],
        }
    }

    pub fn record(&mut self, ai: usize, bi: usize, a: Outcome, b: Outcome) {
        self.cells[ai][bi][a.index()][b.index()] += 1;
    }

    pub fn add(&mut self, ai: usize, bi: usize, a: Outcome, b: Outcome, count: u64) {
        self.cells[ai][bi][a.index()][b.index()] += count;
    }

    pub fn get(&self, ai: usize, bi: usize, a: Outcome, b: Outcome) -> u64 {
        self.cells[ai][bi][a.index()][b.index()]
    }

    pub fn total(&self, ai: usize, bi: usize) -> u64 {
        self.cells[ai][bi].iter().flatten().sum()
    }

    pub fn merge(&mut self, other: &CountTable) {
        for ai in 0..2 {
            for bi in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        self.cells[ai][bi][x][y] += other.cells[ai][bi][x][y];
                    }
                }
            }
        }
    }

    /// Both parties' outcomes flipped.
    pub fn relabeled(&self) -> Self {
        let mut out = Self::new(self.quartet);
        for ai in 0..2 {
            for bi in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        out.cells[ai][bi][1 - x][1 - y] = self.cells[ai][bi][x][y];
                    }
                }
            }
        }
        out
    }

    /// Expected counts (rounded) for `n` trials per setting pair, from a
    /// joint probability `p(a_angle, b_angle, a_outcome, b_outcome)`.
    pub fn from_probabilities(
        quartet: SettingsQuartet,
        n: u64,
        p: impl Fn(f64, f64, Outcome, Outcome) -> f64,
    ) -> Self {
        let mut t = Self::new(quartet);
        for ai in 0..2 {
            for bi in 0..2 {
                for a in [Outcome::Plus, Outcome::Minus] {
                    for b in [Outcome::Plus, Outcome::Minus] {
                        let c = (p(quartet.a_setting(ai), quartet.b_setting(bi), a, b) * n as f64).round();
                        t.add(ai, bi, a, b, c as u64);
                    }
                }
            }
        }
        t
    }

    /// `E = (N++ + N-- - N+- - N-+) / N`.
    pub fn correlator(&self, ai: usize, bi: usize) -> Result<f64> {
        let total = self.total(ai, bi);
        if total == 0 {
            return Err(Error::InsufficientData(format!("setting pair ({ai}, {bi}) is empty")));
        }
        let c = &self.cells[ai][bi];
        let same = (c[0][0] + c[1][1]) as f64;
        let diff = (c[0][1] + c[1][0]) as f64;
        Ok((same - diff) / total as f64)
    }

    /// `Pr(A = + | a_i, b_j)`.
    pub fn marginal_a(&self, ai: usize, bi: usize) -> Result<f64> {
        let total = self.total(ai, bi);
        if total == 0 {
            return Err(Error::InsufficientData(format!("setting pair ({ai}, {bi}) is empty")));
        }
        let c = &self.cells[ai][bi];
        Ok((c[0][0] + c[0][1]) as f64 / total as f64)
    }

    /// `Pr(B = + | a_i, b_j)`.
    pub fn marginal_b(&self, ai: usize, bi: usize) -> Result<f64> {
        let total = self.total(ai, bi);
        if total == 0 {
            return Err(Error::InsufficientData(format!("setting pair ({ai}, {bi}) is empty")));
        }
        let c = &self.cells[ai][bi];
        Ok((c[0][0] + c[1][0]) as f64 / total as f64)
    }
}

/// Joint table of two independent outcomes, `[A][B]` with index 0 = `+`.
pub fn factorized_joint(p_a: f64, p_b: f64) -> Result<[[f64; 2]; 2]> {
    for p in [p_a, p_b] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Input(format!("probability {p} outside [0, 1]")));
        }
    }
    let a = [p_a, 1.0 - p_a];
    let b = [p_b, 1.0 - p_b];
    Ok([[a[0] * b[0], a[0] * b[1]], [a[1] * b[0], a[1] * b[1]]])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshValue {
    /// Largest `|E(a,b) + E(a,b') + E(a',b) + E(a',b')|` over the four
    /// placements of the single minus sign.
    pub s: f64,
    /// `E(a,b) + E(a,b') + E(a',b) - E(a',b')`.
    pub canonical: f64,
    /// Standard deviation of `s` from binomial noise in each correlator.
    pub sigma: f64,
    /// `correlators[i][j] = E(a_i, b_j)`.
    pub correlators: [[f64; 2]; 2],
}

pub fn chsh_statistic(counts: &CountTable) -> Result<ChshValue> {
    let mut e = [[0.0; 2]; 2];
    let mut variance = 0.0;
    for ai in 0..2 {
        for bi in 0..2 {
            e[ai][bi] = counts.correlator(ai, bi)?;
            variance += (1.0 - e[ai][bi] * e[ai][bi]) / counts.total(ai, bi) as f64;
        }
    }
    let sum = e[0][0] + e[0][1] + e[1][0] + e[1][1];
    let s = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .iter()
        .map(|&(i, j)| (sum - 2.0 * e[i][j]).abs())
        .fold(0.0, f64::max);
    Ok(ChshValue {
        s,
        canonical: sum - 2.0 * e[1][1],
        sigma: variance.sqrt(),
        correlators: e,
    })
}

/// Largest shift of one party's `+` marginal when only the other party's
/// setting changes.
pub fn no_signaling_check(counts: &CountTable) -> Result<f64> {
    let mut worst = 0.0f64;
    for ai in 0..2 {
        worst = worst.max((counts.marginal_a(ai, 0)? - counts.marginal_a(ai, 1)?).abs());
    }
    for bi in 0..2 {
        worst = worst.max((counts.marginal_b(0, bi)? - counts.marginal_b(1, bi)?).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Outcome::{Minus, Plus};

    fn singlet_probability(a: f64, b: f64, x: Outcome, y: Outcome) -> f64 {
        let same = x == y;
        let c = (a - b).cos();
        if same {
            (1.0 - c) / 4.0
        } else {
            (1.0 + c) / 4.0
        }
    }

    fn from_joint(joint: [[f64; 2]; 2], n: u64) -> CountTable {
        CountTable::from_probabilities(SettingsQuartet::optimal(), n, |_, _, x, y| {
            joint[x.index()][y.index()]
        })
    }

    #[test]
    fn factorized_examples() {
        assert_eq!(factorized_joint(0.5, 0.5).unwrap(), [[0.25; 2]; 2]);
        let j = factorized_joint(1.0, 0.3).unwrap();
        assert_eq!(j[0][0], 0.3);
        assert_eq!(j[1], [0.0, 0.0]);
        assert!(factorized_joint(1.2, 0.3).is_err());
        assert!(factorized_joint(0.2, -0.3).is_err());
    }

    proptest::proptest! {
        #[test]
        fn factorized_marginals_recover_inputs(p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
            let j = factorized_joint(p, q).unwrap();
            proptest::prop_assert!((j[0][0] + j[0][1] - p).abs() <= 1e-15);
            proptest::prop_assert!((j[0][0] + j[1][0] - q).abs() <= 1e-15);
        }
    }

    #[test]
    fn algebraic_maximum() {
        let mut t = CountTable::new(SettingsQuartet::optimal());
        for (ai, bi) in [(0, 0), (0, 1), (1, 0)] {
            t.add(ai, bi, Plus, Plus, 50);
            t.add(ai, bi, Minus, Minus, 50);
        }
        t.add(1, 1, Plus, Minus, 50);
        t.add(1, 1, Minus, Plus, 50);
        let v = chsh_statistic(&t).unwrap();
        assert_eq!(v.s, 4.0);
        assert_eq!(v.canonical, 4.0);
    }

    #[test]
    fn factorized_counts_give_zero() {
        let t = from_joint(factorized_joint(0.5, 0.5).unwrap(), 1000);
        assert_eq!(chsh_statistic(&t).unwrap().s, 0.0);
        assert_eq!(no_signaling_check(&t).unwrap(), 0.0);
    }

    #[test]
    fn constant_outcomes_give_two() {
        let mut t = CountTable::new(SettingsQuartet::optimal());
        for ai in 0..2 {
            for bi in 0..2 {
                t.add(ai, bi, Plus, Plus, 10);
            }
        }
        let v = chsh_statistic(&t).unwrap();
        assert_eq!(v.s, 2.0);
        assert_eq!(v.canonical, 2.0);
    }

    #[test]
    fn singlet_expected_counts_reach_tsirelson() {
        // Oracle: E(a, b) = -cos(a - b) in closed form.
        let q = SettingsQuartet::optimal();
        let e = |a: f64, b: f64| -(a - b).cos();
        let oracle = (e(q.a, q.b) - e(q.a, q.b_prime)).abs() + (e(q.a_prime, q.b) + e(q.a_prime, q.b_prime)).abs();
        assert!((oracle - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        let t = CountTable::from_probabilities(q, 100_000_000, singlet_probability);
        let v = chsh_statistic(&t).unwrap();
        assert!((v.s - oracle).abs() < 1e-6, "{}", v.s);
    }

    #[test]
    fn empty_pair_is_insufficient() {
        let mut t = CountTable::new(SettingsQuartet::optimal());
        t.add(0, 0, Plus, Plus, 1);
        assert!(matches!(chsh_statistic(&t), Err(Error::InsufficientData(_))));
        assert!(matches!(no_signaling_check(&t), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn injected_signal_detected() {
        let mut t = CountTable::new(SettingsQuartet::optimal());
        // Pr(A=+|a,b) = 0.6, Pr(A=+|a,b') = 0.4; everything else balanced.
        t.add(0, 0, Plus, Plus, 30);
        t.add(0, 0, Plus, Minus, 30);
        t.add(0, 0, Minus, Plus, 20);
        t.add(0, 0, Minus, Minus, 20);
        t.add(0, 1, Plus, Plus, 20);
        t.add(0, 1, Plus, Minus, 20);
        t.add(0, 1, Minus, Plus, 30);
        t.add(0, 1, Minus, Minus, 30);
        for bi in 0..2 {
            for x in [Plus, Minus] {
                for y in [Plus, Minus] {
                    t.add(1, bi, x, y, 25);
                }
            }
        }
        let d = no_signaling_check(&t).unwrap();
        assert!((d - 0.2).abs() < 1e-15, "{d}");
    }

    #[test]
    fn relabeling_preserves_statistic() {
        let mut t = CountTable::new(SettingsQuartet::optimal());
        let mut k = 3;
        for ai in 0..2 {
            for bi in 0..2 {
                for x in [Plus, Minus] {
                    for y in [Plus, Minus] {
                        k = (k * 7 + 5) % 97;
                        t.add(ai, bi, x, y, k + 1);
                    }
                }
            }
        }
        assert_eq!(chsh_statistic(&t).unwrap(), chsh_statistic(&t.relabeled()).unwrap());
    }
}
