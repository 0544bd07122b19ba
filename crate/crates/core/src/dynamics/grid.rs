use std::path::Path;

use crate::{Error, Result};

/// Uniform grid with the wavefunction pinned to zero just outside both ends.
///
/// Point `i` sits at `(i + 1) * dx`; the walls are at `0` and `(n + 1) * dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub dx: f64,
}

impl GridSpec {
    pub const MIN_POINTS: usize = 8;
    pub const DEFAULT_POINTS: usize = 64;
    pub const MAX_POINTS: usize = 64;

    pub fn new(n: usize, dx: f64) -> Result<Self> {
        if !(Self::MIN_POINTS..=Self::MAX_POINTS).contains(&n) {
            return Err(Error::Input(format!(
                "grid needs {}..={} points per axis, got {n}",
                Self::MIN_POINTS,
                Self::MAX_POINTS
            )));
        }
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::Input(format!("grid spacing must be positive, got {dx}")));
        }
        Ok(Self { n, dx })
    }

    pub fn position(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.dx
    }

    /// Wall-to-wall length.
    pub fn length(&self) -> f64 {
        (self.n + 1) as f64 * self.dx
    }
}

/// Two-column `(distance, energy)` table, linearly interpolated and held
/// constant beyond its end points.
///
/// Text format: one `distance energy` pair per line, separated by
/// whitespace or a comma; blank lines and lines starting with `#` are
/// ignored; distances strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialTable {
    points: Vec<(f64, f64)>,
}

impl PotentialTable {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Input("potential table is empty".into()));
        }
        if points.iter().any(|(d, v)| !d.is_finite() || !v.is_finite()) {
            return Err(Error::Input("potential table has non-finite entries".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Input("potential distances must be strictly increasing".into()));
        }
        Ok(Self { points })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            let parse = |f: &str| {
                f.parse::<f64>().map_err(|_| {
                    Error::Input(format!("potential table line {}: bad number `{f}`", lineno + 1))
                })
            };
            match fields.as_slice() {
                [d, v] => points.push((parse(d)?, parse(v)?)),
                _ => {
                    return Err(Error::Input(format!(
                        "potential table line {}: expected two columns",
                        lineno + 1
                    )))
                }
            }
        }
        Self::new(points)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn eval(&self, d: f64) -> f64 {
        let pts = &self.points;
        let first = pts[0];
        let last = pts[pts.len() - 1];
        if d <= first.0 {
            return first.1;
        }
        if d >= last.0 {
            return last.1;
        }
        let k = pts.partition_point(|p| p.0 <= d);
        let (d0, v0) = pts[k - 1];
        let (d1, v1) = pts[k];
        v0 + (v1 - v0) * (d - d0) / (d1 - d0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleSystem {
    pub m1: f64,
    pub m2: f64,
    pub grid: GridSpec,
    /// `potential[k] = V(k * dx)`, for every grid separation `k` in `0..n`.
    potential: Vec<f64>,
    pub rest_energy1: f64,
    pub rest_energy2: f64,
}

impl TwoParticleSystem {
    pub fn new(
        m1: f64,
        m2: f64,
        grid: GridSpec,
        potential: Vec<f64>,
        rest_energy1: f64,
        rest_energy2: f64,
    ) -> Result<Self> {
        if !(m1 > 0.0 && m2 > 0.0 && m1.is_finite() && m2.is_finite()) {
            return Err(Error::Input(format!("masses must be positive, got {m1}, {m2}")));
        }
        if potential.len() != grid.n {
            return Err(Error::Dimension(format!(
                "potential needs {} separations, got {}",
                grid.n,
                potential.len()
            )));
        }
        if potential.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("potential has non-finite entries".into()));
        }
        if !(rest_energy1 >= 0.0 && rest_energy2 >= 0.0) {
            return Err(Error::Input("rest energies must be nonnegative".into()));
        }
        Ok(Self {
            m1,
            m2,
            grid,
            potential,
            rest_energy1,
            rest_energy2,
        })
    }

    /// Samples `v(d)` at every grid separation.
    pub fn with_potential_fn(
        m1: f64,
        m2: f64,
        grid: GridSpec,
        v: impl Fn(f64) -> f64,
        rest_energy1: f64,
        rest_energy2: f64,
    ) -> Result<Self> {
        let table = (0..grid.n).map(|k| v(k as f64 * grid.dx)).collect();
        Self::new(m1, m2, grid, table, rest_energy1, rest_energy2)
    }

    pub fn with_table(
        m1: f64,
        m2: f64,
        grid: GridSpec,
        table: &PotentialTable,
        rest_energy1: f64,
        rest_energy2: f64,
    ) -> Result<Self> {
        Self::with_potential_fn(m1, m2, grid, |d| table.eval(d), rest_energy1, rest_energy2)
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// `V(|x1 - x2|)` at joint grid point `(i1, i2)`.
    pub fn potential_at(&self, i1: usize, i2: usize) -> f64 {
        self.potential[i1.abs_diff(i2)]
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.grid.n, self.grid.n]
    }

    pub fn total_mass(&self) -> f64 {
        self.m1 + self.m2
    }

    pub fn reduced_mass(&self) -> f64 {
        self.m1 * self.m2 / (self.m1 + self.m2)
    }
}
