//! Domain vocabulary: boundary functions on the unit cube, equidistant box
//! partitions, and per-cell analytic profiles (infimum, supremum, mean).
//!
//! Every boundary in the catalog carries exact bounds and admits closed-form
//! cell profiles, so downstream statistical checks compare simulation output
//! against values that are far more accurate than Monte Carlo noise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used by the constructor's dense-grid sanity check.
const GRID_CHECK_TOL: f64 = 1e-9;
/// Tolerance on periodic endpoint matching for smooth periodic kinds.
const PERIODIC_TOL: f64 = 1e-12;

/// Parametric family of a boundary function on `[0,1]^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryKind {
    /// `f(x) = level`, any dimension.
    Constant { level: f64 },
    /// `f(x) = a + b x`, one-dimensional.
    Linear { a: f64, b: f64 },
    /// `f(x) = base + amplitude sin(2 pi frequency x)`, one-dimensional,
    /// periodic with matching derivative at the endpoints.
    Sine { base: f64, amplitude: f64, frequency: u32 },
    /// `f(x) = base + |x - center|^alpha`, one-dimensional cusp of Hölder
    /// exponent `alpha` in (0, 1].
    HolderCusp { base: f64, alpha: f64, center: f64 },
    /// `f(x) = base + amplitude * prod_j sin(pi x_j)`, dimension >= 2.
    ProductSine { base: f64, amplitude: f64, dim: u32 },
}

/// Smoothness class a boundary belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Smoothness {
    /// Hölder continuous with the given exponent in (0, 1].
    Holder { alpha: f64 },
    /// Twice continuously differentiable and periodic on the unit interval.
    C2Periodic,
}

/// A validated boundary function together with its analytic metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundarySpec {
    kind: BoundaryKind,
    dim: u32,
    smoothness: Smoothness,
    /// Essential infimum of `f` over the unit cube (strictly positive).
    inf: f64,
    /// Essential supremum of `f` over the unit cube.
    sup: f64,
}

impl BoundarySpec {
    /// Validate a boundary description and derive its metadata.
    pub fn new(kind: BoundaryKind, dim: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidBoundary("dimension must be positive".into()));
        }
        let (inf, sup, smoothness) = match kind {
            BoundaryKind::Constant { level } => {
                require(level > 0.0, "constant level must be positive")?;
                (level, level, Smoothness::Holder { alpha: 1.0 })
            }
            BoundaryKind::Linear { a, b } => {
                require(dim == 1, "linear boundary is one-dimensional")?;
                let lo = a.min(a + b);
                let hi = a.max(a + b);
                require(lo > 0.0, "linear boundary must stay positive on [0,1]")?;
                (lo, hi, Smoothness::Holder { alpha: 1.0 })
            }
            BoundaryKind::Sine {
                base,
                amplitude,
                frequency,
            } => {
                require(dim == 1, "sine boundary is one-dimensional")?;
                require(frequency >= 1, "sine frequency must be at least 1")?;
                require(
                    base - amplitude.abs() > 0.0,
                    "sine boundary must stay positive: base must exceed |amplitude|",
                )?;
                (base - amplitude.abs(), base + amplitude.abs(), Smoothness::C2Periodic)
            }
            BoundaryKind::HolderCusp { base, alpha, center } => {
                require(dim == 1, "cusp boundary is one-dimensional")?;
                require(base > 0.0, "cusp base must be positive")?;
                require(alpha > 0.0 && alpha <= 1.0, "cusp exponent must lie in (0,1]")?;
                require((0.0..=1.0).contains(&center), "cusp center must lie in [0,1]")?;
                let reach = center.max(1.0 - center);
                (base, base + reach.powf(alpha), Smoothness::Holder { alpha })
            }
            BoundaryKind::ProductSine { base, amplitude, dim: d } => {
                require(d >= 2, "product-sine boundary needs dimension >= 2")?;
                require(d == dim, "product-sine dimension must match spec dimension")?;
                require(base > 0.0, "product-sine base must be positive")?;
                require(amplitude >= 0.0, "product-sine amplitude must be nonnegative")?;
                (base, base + amplitude, Smoothness::Holder { alpha: 1.0 })
            }
        };
        let spec = Self {
            kind,
            dim,
            smoothness,
            inf,
            sup,
        };
        spec.check_on_grid()?;
        spec.check_periodicity()?;
        Ok(spec)
    }

    pub fn kind(&self) -> &BoundaryKind {
        &self.kind
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    /// Essential infimum of the boundary.
    pub fn inf(&self) -> f64 {
        self.inf
    }

    /// Essential supremum of the boundary.
    pub fn sup(&self) -> f64 {
        self.sup
    }

    /// Hölder exponent used by schedule rules: 1 for the smooth classes.
    pub fn holder_alpha(&self) -> f64 {
        match self.smoothness {
            Smoothness::Holder { alpha } => alpha,
            Smoothness::C2Periodic => 1.0,
        }
    }

    /// Evaluate the boundary at a point of the closed unit cube.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim as usize {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len() as u32,
            });
        }
        if x.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(Error::OutsideDomain(x.to_vec()));
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluate without domain checks. Used on internally generated points.
    pub fn eval_unchecked(&self, x: &[f64]) -> f64 {
        match self.kind {
            BoundaryKind::Constant { level } => level,
            BoundaryKind::Linear { a, b } => a + b * x[0],
            BoundaryKind::Sine {
                base,
                amplitude,
                frequency,
            } => base + amplitude * (2.0 * std::f64::consts::PI * frequency as f64 * x[0]).sin(),
            BoundaryKind::HolderCusp { base, alpha, center } => {
                base + (x[0] - center).abs().powf(alpha)
            }
            BoundaryKind::ProductSine { base, amplitude, .. } => {
                let prod: f64 = x
                    .iter()
                    .map(|&v| (std::f64::consts::PI * v).sin())
                    .product();
                base + amplitude * prod
            }
        }
    }

    /// Closed-form integral of `f` over the unit cube.
    pub fn integral(&self) -> f64 {
        match self.kind {
            BoundaryKind::Constant { level } => level,
            BoundaryKind::Linear { a, b } => a + 0.5 * b,
            BoundaryKind::Sine {
                base,
                amplitude,
                frequency,
            } => {
                // Whole periods integrate to zero.
                let w = 2.0 * std::f64::consts::PI * frequency as f64;
                base + amplitude * (1.0 - w.cos()) / w
            }
            BoundaryKind::HolderCusp { base, alpha, center } => {
                let p = alpha + 1.0;
                base + (center.powf(p) + (1.0 - center).powf(p)) / p
            }
            BoundaryKind::ProductSine {
                base,
                amplitude,
                dim,
            } => base + amplitude * (2.0 / std::f64::consts::PI).powi(dim as i32),
        }
    }

    fn check_on_grid(&self) -> Result<()> {
        let per_axis: usize = if self.dim == 1 { 4097 } else { 33 };
        let mut idx = vec![0usize; self.dim as usize];
        let mut x = vec![0.0f64; self.dim as usize];
        loop {
            for (j, &i) in idx.iter().enumerate() {
                x[j] = i as f64 / (per_axis - 1) as f64;
            }
            let v = self.eval_unchecked(&x);
            if v < self.inf - GRID_CHECK_TOL || v > self.sup + GRID_CHECK_TOL {
                return Err(Error::InvalidBoundary(format!(
                    "boundary leaves its declared range at {x:?}: f = {v}, bounds [{}, {}]",
                    self.inf, self.sup
                )));
            }
            // Odometer increment over the grid.
            let mut j = 0;
            loop {
                idx[j] += 1;
                if idx[j] < per_axis {
                    break;
                }
                idx[j] = 0;
                j += 1;
                if j == self.dim as usize {
                    return Ok(());
                }
            }
        }
    }

    fn check_periodicity(&self) -> Result<()> {
        if self.smoothness != Smoothness::C2Periodic {
            return Ok(());
        }
        let f0 = self.eval_unchecked(&[0.0]);
        let f1 = self.eval_unchecked(&[1.0]);
        if (f0 - f1).abs() > PERIODIC_TOL * f0.abs().max(1.0) {
            return Err(Error::InvalidBoundary(format!(
                "periodic boundary has f(0) = {f0} != f(1) = {f1}"
            )));
        }
        if let BoundaryKind::Sine {
            amplitude,
            frequency,
            ..
        } = self.kind
        {
            let w = 2.0 * std::f64::consts::PI * frequency as f64;
            let d0 = amplitude * w; // cos(0) = 1
            let d1 = amplitude * w * w.cos();
            if (d0 - d1).abs() > PERIODIC_TOL * d0.abs().max(1.0) {
                return Err(Error::InvalidBoundary(
                    "periodic boundary has mismatched endpoint derivatives".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Evaluate a boundary at a point; free-function form of [`BoundarySpec::eval`].
pub fn eval_boundary(spec: &BoundarySpec, x: &[f64]) -> Result<f64> {
    spec.eval(x)
}

/// Equidistant partition of `[0,1]^d` into `k` axis-aligned boxes, `k^(1/d)`
/// per axis. Each cell has measure exactly `1/k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Partition {
    k: u64,
    dim: u32,
    side: u64,
}

impl Partition {
    /// Build a partition; `k` must be a perfect `d`-th power.
    pub fn new(k: u64, dim: u32) -> Result<Self> {
        if dim == 0 || k == 0 {
            return Err(Error::InadmissibleCellCount { k, dim });
        }
        let side = integer_root(k, dim).ok_or(Error::InadmissibleCellCount { k, dim })?;
        Ok(Self { k, dim, side })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Cells per axis, `k^(1/d)`.
    pub fn side(&self) -> u64 {
        self.side
    }

    /// Measure of one cell, `1/k`.
    pub fn nu(&self) -> f64 {
        1.0 / self.k as f64
    }

    /// Axis-aligned bounds `(lo_j, hi_j)` of cell `r`.
    ///
    /// Cells are indexed from 0 in row-major order: axis 0 is the most
    /// significant digit of the base-`side` decomposition of `r`.
    pub fn cell_box(&self, r: u64) -> Vec<(f64, f64)> {
        debug_assert!(r < self.k);
        let mut out = vec![(0.0, 0.0); self.dim as usize];
        let mut rest = r;
        for j in (0..self.dim as usize).rev() {
            let digit = rest % self.side;
            rest /= self.side;
            out[j] = (
                digit as f64 / self.side as f64,
                (digit + 1) as f64 / self.side as f64,
            );
        }
        out
    }

    /// Center of cell `r`.
    pub fn cell_center(&self, r: u64) -> Vec<f64> {
        self.cell_box(r)
            .into_iter()
            .map(|(lo, hi)| 0.5 * (lo + hi))
            .collect()
    }

    /// Index of the cell containing `x`.
    ///
    /// Interior cell edges belong to the cell on their right/upper side;
    /// coordinates equal to 1 map into the last cell along that axis.
    pub fn cell_index(&self, x: &[f64]) -> Result<u64> {
        if x.len() != self.dim as usize {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len() as u32,
            });
        }
        let mut r = 0u64;
        for &v in x {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::OutsideDomain(x.to_vec()));
            }
            let digit = ((v * self.side as f64).floor() as u64).min(self.side - 1);
            r = r * self.side + digit;
        }
        Ok(r)
    }
}

/// Largest integer `s` with `s^dim == k`, if any.
fn integer_root(k: u64, dim: u32) -> Option<u64> {
    if dim == 1 {
        return Some(k);
    }
    let guess = (k as f64).powf(1.0 / dim as f64).round() as u64;
    for s in guess.saturating_sub(1)..=guess + 1 {
        if s > 0 && checked_pow(s, dim) == Some(k) {
            return Some(s);
        }
    }
    None
}

fn checked_pow(s: u64, dim: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..dim {
        acc = acc.checked_mul(s)?;
    }
    Some(acc)
}

/// Per-cell infimum, supremum and mean of a boundary over a partition,
/// together with the oscillation aggregates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellProfile {
    /// Infimum of `f` on each cell.
    pub inf: Vec<f64>,
    /// Supremum of `f` on each cell.
    pub sup: Vec<f64>,
    /// Mean value of `f` on each cell.
    pub mean: Vec<f64>,
    /// Largest cell oscillation `max_r (sup_r - inf_r)`.
    pub oscillation: f64,
    /// Measure-scaled oscillation `max_r nu_r (sup_r - inf_r)`; equals
    /// `oscillation / k` on an equidistant partition.
    pub scaled_oscillation: f64,
}

/// Compute the analytic per-cell profile of a boundary.
pub fn profile_cells(spec: &BoundarySpec, part: &Partition) -> Result<CellProfile> {
    if spec.dim() != part.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: part.dim(),
        });
    }
    let k = part.k();
    let mut inf = Vec::with_capacity(k as usize);
    let mut sup = Vec::with_capacity(k as usize);
    let mut mean = Vec::with_capacity(k as usize);
    for r in 0..k {
        let cell = part.cell_box(r);
        let (lo, hi, avg) = profile_one_cell(spec, &cell);
        inf.push(lo);
        sup.push(hi);
        mean.push(avg);
    }
    let oscillation = inf
        .iter()
        .zip(&sup)
        .map(|(l, h)| h - l)
        .fold(0.0f64, f64::max);
    let scaled_oscillation = oscillation * part.nu();
    Ok(CellProfile {
        inf,
        sup,
        mean,
        oscillation,
        scaled_oscillation,
    })
}

fn profile_one_cell(spec: &BoundarySpec, cell: &[(f64, f64)]) -> (f64, f64, f64) {
    match *spec.kind() {
        BoundaryKind::Constant { level } => (level, level, level),
        BoundaryKind::Linear { a, b } => {
            let (lo, hi) = cell[0];
            let f_lo = a + b * lo;
            let f_hi = a + b * hi;
            (f_lo.min(f_hi), f_lo.max(f_hi), a + b * 0.5 * (lo + hi))
        }
        BoundaryKind::Sine {
            base,
            amplitude,
            frequency,
        } => {
            let (lo, hi) = cell[0];
            let w = 2.0 * std::f64::consts::PI * frequency as f64;
            let f = |x: f64| base + amplitude * (w * x).sin();
            let mut min = f(lo).min(f(hi));
            let mut max = f(lo).max(f(hi));
            // Interior critical points x = (2j + 1) / (4 frequency).
            let denom = 4.0 * frequency as f64;
            let j_lo = (lo * denom / 2.0 - 0.5).floor() as i64 - 1;
            let j_hi = (hi * denom / 2.0).ceil() as i64 + 1;
            for j in j_lo..=j_hi {
                let x = (2 * j + 1) as f64 / denom;
                if x > lo && x < hi {
                    let v = f(x);
                    min = min.min(v);
                    max = max.max(v);
                }
            }
            let avg = base + amplitude * ((w * lo).cos() - (w * hi).cos()) / (w * (hi - lo));
            (min, max, avg)
        }
        BoundaryKind::HolderCusp { base, alpha, center } => {
            let (lo, hi) = cell[0];
            let d_lo = (lo - center).abs();
            let d_hi = (hi - center).abs();
            let min = if center >= lo && center <= hi {
                base
            } else {
                base + d_lo.min(d_hi).powf(alpha)
            };
            let max = base + d_lo.max(d_hi).powf(alpha);
            // Antiderivative of |u|^alpha is sign(u) |u|^(alpha+1) / (alpha+1).
            let p = alpha + 1.0;
            let anti = |u: f64| u.signum() * u.abs().powf(p) / p;
            let avg = base + (anti(hi - center) - anti(lo - center)) / (hi - lo);
            (min, max, avg)
        }
        BoundaryKind::ProductSine {
            base, amplitude, ..
        } => {
            // Per-axis factor sin(pi x) is nonnegative and unimodal on [0,1],
            // so extrema of the product factorize.
            let pi = std::f64::consts::PI;
            let mut prod_min = 1.0;
            let mut prod_max = 1.0;
            let mut prod_avg = 1.0;
            for &(lo, hi) in cell {
                let s_lo = (pi * lo).sin();
                let s_hi = (pi * hi).sin();
                prod_min *= s_lo.min(s_hi);
                prod_max *= if lo <= 0.5 && 0.5 <= hi {
                    1.0
                } else {
                    s_lo.max(s_hi)
                };
                prod_avg *= ((pi * lo).cos() - (pi * hi).cos()) / (pi * (hi - lo));
            }
            (
                base + amplitude * prod_min,
                base + amplitude * prod_max,
                base + amplitude * prod_avg,
            )
        }
    }
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidBoundary(msg.into()))
    }
}
