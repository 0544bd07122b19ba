use std::f64::consts::TAU;

use super::{ensemble, CountTable, Outcome, SettingsQuartet};
use crate::collapse::GlobalStream;
use crate::Result;

/// Local hidden-variable model. Each response sees only its own setting and
/// the shared hidden value, so the joint outcome probabilities factorize
/// given `λ` by construction.
pub trait LhvModel: Sync {
    type Lambda;

    fn sample(&self, stream: &mut GlobalStream) -> Self::Lambda;
    /// Must return +1 or -1.
    fn response_a(&self, setting: f64, lambda: &Self::Lambda) -> i64;
    /// Must return +1 or -1.
    fn response_b(&self, setting: f64, lambda: &Self::Lambda) -> i64;

    /// Shared experimental context. Descriptive only.
    fn context(&self) -> &str {
        ""
    }
}

fn sign(x: f64) -> i64 {
    if x >= 0.0 {
        1
    } else {
        -1
    }
}

/// `A = sign(cos(a - λ))`, `B = -sign(cos(b - λ))`, `λ` uniform on the circle.
#[derive(Debug, Clone, Copy, Default)]
pub struct SignCosineModel;

impl LhvModel for SignCosineModel {
    type Lambda = f64;

    fn sample(&self, stream: &mut GlobalStream) -> f64 {
        stream.draw_uniform() * TAU
    }

    fn response_a(&self, setting: f64, lambda: &f64) -> i64 {
        sign((setting - lambda).cos())
    }

    fn response_b(&self, setting: f64, lambda: &f64) -> i64 {
        -sign((setting - lambda).cos())
    }

    fn context(&self) -> &str {
        "sign-cosine"
    }
}

/// Both parties always answer with fixed values.
#[derive(Debug, Clone, Copy)]
pub struct ConstantModel {
    pub a: i64,
    pub b: i64,
}

impl LhvModel for ConstantModel {
    type Lambda = ();

    fn sample(&self, _: &mut GlobalStream) {}

    fn response_a(&self, _: f64, _: &()) -> i64 {
        self.a
    }

    fn response_b(&self, _: f64, _: &()) -> i64 {
        self.b
    }
}

/// Two independent fair coins carried in `λ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FairCoinModel;

impl LhvModel for FairCoinModel {
    type Lambda = (bool, bool);

    fn sample(&self, stream: &mut GlobalStream) -> (bool, bool) {
        (stream.draw_bit(), stream.draw_bit())
    }

    fn response_a(&self, _: f64, l: &(bool, bool)) -> i64 {
        if l.0 {
            1
        } else {
            -1
        }
    }

    fn response_b(&self, _: f64, l: &(bool, bool)) -> i64 {
        if l.1 {
            1
        } else {
            -1
        }
    }
}

/// Family of deterministic-plus-local-noise models:
/// `A = sign(cos(fa·(a − θ)) + ba)`, flipped when the local noise draw
/// `ua < na`; likewise for B with its own parameters. `λ = (θ, ua, ub)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricModel {
    pub freq_a: f64,
    pub bias_a: f64,
    pub noise_a: f64,
    pub freq_b: f64,
    pub bias_b: f64,
    pub noise_b: f64,
    pub anti: bool,
}

impl LhvModel for ParametricModel {
    type Lambda = (f64, f64, f64);

    fn sample(&self, stream: &mut GlobalStream) -> (f64, f64, f64) {
        (stream.draw_uniform() * TAU, stream.draw_uniform(), stream.draw_uniform())
    }

    fn response_a(&self, setting: f64, l: &(f64, f64, f64)) -> i64 {
        let r = sign((self.freq_a * (setting - l.0)).cos() + self.bias_a);
        if l.1 < self.noise_a {
            -r
        } else {
            r
        }
    }

    fn response_b(&self, setting: f64, l: &(f64, f64, f64)) -> i64 {
        let r = sign((self.freq_b * (setting - l.0)).cos() + self.bias_b);
        let r = if self.anti { -r } else { r };
        if l.2 < self.noise_b {
            -r
        } else {
            r
        }
    }

    fn context(&self) -> &str {
        "parametric"
    }
}

/// `count` parametric models with parameters drawn from `seed`.
pub fn randomized_models(count: usize, seed: u64) -> Vec<ParametricModel> {
    let mut g = GlobalStream::substream(seed, u64::MAX);
    (0..count)
        .map(|_| ParametricModel {
            freq_a: 1.0 + (g.draw_uniform() * 3.0).floor(),
            bias_a: g.draw_uniform() - 0.5,
            noise_a: 0.2 * g.draw_uniform(),
            freq_b: 1.0 + (g.draw_uniform() * 3.0).floor(),
            bias_b: g.draw_uniform() - 0.5,
            noise_b: 0.2 * g.draw_uniform(),
            anti: g.draw_bit(),
        })
        .collect()
}

/// Runs `n_per_pair` trials for each of the four setting pairs, drawing a
/// fresh `λ` per trial from substream `pair * n_per_pair + trial`.
pub fn lhv_run<M: LhvModel>(
    model: &M,
    quartet: &SettingsQuartet,
    n_per_pair: u64,
    seed: u64,
) -> Result<CountTable> {
    let outcomes = ensemble(4 * n_per_pair, |r| {
        let pair = (r / n_per_pair.max(1)) as usize;
        let (ai, bi) = (pair / 2, pair % 2);
        let mut stream = GlobalStream::substream(seed, r);
        let lambda = model.sample(&mut stream);
        let a = Outcome::from_sign(model.response_a(quartet.a_setting(ai), &lambda))?;
        let b = Outcome::from_sign(model.response_b(quartet.b_setting(bi), &lambda))?;
        Ok((ai, bi, a, b))
    })?;
    let mut table = CountTable::new(*quartet);
    for (ai, bi, a, b) in outcomes {
        table.record(ai, bi, a, b);
    }
    Ok(table)
}
