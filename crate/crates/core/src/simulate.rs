//! Exact simulation of the point process under a boundary.
//!
//! The process on the hypograph `S = {(x, y): 0 <= y <= f(x)}` with
//! intensity `n c` per unit volume is drawn by thinning: a Poisson number
//! of points is scattered uniformly on the bounding box
//! `[0,1]^d x [0, sup f]` and those above the boundary are discarded.
//! This is exact for every boundary in the catalog and needs no per-cell
//! conditioning.
//!
//! Replicate seeds are derived from a master seed by an invertible 64-bit
//! mix, so results are identical no matter how replicates are scheduled
//! across worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::BoundarySpec;
use crate::poisson;

/// Largest admissible bounding-box mean `n * c * sup f`.
const MAX_BOX_MEAN: f64 = 1e10;

/// One realization of the point process.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessSample {
    dim: u32,
    /// Point coordinates, point-major: `xs[i*d..(i+1)*d]` is the i-th point.
    xs: Vec<f64>,
    /// Ordinates, one per point.
    ys: Vec<f64>,
    /// Sample-size index the intensity was scaled by.
    pub n: u64,
    /// Intensity constant.
    pub c: f64,
    /// Seed this realization was drawn from.
    pub seed: u64,
    /// Replicate number within an experiment (0 for standalone samples).
    pub replicate_id: u64,
}

impl ProcessSample {
    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Number of retained points, `N(S)`.
    pub fn total(&self) -> u64 {
        self.ys.len() as u64
    }

    /// Coordinates and ordinate of point `i`.
    pub fn point(&self, i: usize) -> (&[f64], f64) {
        let d = self.dim as usize;
        (&self.xs[i * d..(i + 1) * d], self.ys[i])
    }

    /// Iterate over `(x, y)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        let d = self.dim as usize;
        self.xs.chunks_exact(d).zip(self.ys.iter().copied())
    }

    /// Assemble a sample from externally supplied points, validating that
    /// every coordinate lies in the unit cube and ordinates are nonnegative.
    pub fn from_points(
        dim: u32,
        points: &[(Vec<f64>, f64)],
        n: u64,
        c: f64,
    ) -> Result<Self> {
        let mut xs = Vec::with_capacity(points.len() * dim as usize);
        let mut ys = Vec::with_capacity(points.len());
        for (x, y) in points {
            if x.len() != dim as usize {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: x.len() as u32,
                });
            }
            if x.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
                return Err(Error::Data(format!(
                    "point {x:?} lies outside the unit cube"
                )));
            }
            if !y.is_finite() || *y < 0.0 {
                return Err(Error::Data(format!("ordinate {y} is not a finite nonnegative value")));
            }
            xs.extend_from_slice(x);
            ys.push(*y);
        }
        Ok(Self {
            dim,
            xs,
            ys,
            n,
            c,
            seed: 0,
            replicate_id: 0,
        })
    }
}

/// Draw one realization with intensity index `n`, constant `c`, and the
/// given seed. Deterministic: the same arguments give the same sample.
pub fn sample_process(spec: &BoundarySpec, n: u64, c: f64, seed: u64) -> Result<ProcessSample> {
    if n == 0 || !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "need n >= 1 and finite c > 0, got n = {n}, c = {c}"
        )));
    }
    let box_mean = n as f64 * c * spec.sup();
    if !box_mean.is_finite() || box_mean > MAX_BOX_MEAN {
        return Err(Error::InvalidConfig(format!(
            "bounding-box mean n*c*sup(f) = {box_mean} exceeds the sampler range {MAX_BOX_MEAN}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_box = poisson::sample(&mut rng, box_mean);
    let d = spec.dim() as usize;
    let sup = spec.sup();

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut x = vec![0.0f64; d];
    for _ in 0..n_box {
        for slot in x.iter_mut() {
            *slot = rng.gen::<f64>();
        }
        let y = sup * rng.gen::<f64>();
        if y <= spec.eval_unchecked(&x) {
            xs.extend_from_slice(&x);
            ys.push(y);
        }
    }
    Ok(ProcessSample {
        dim: spec.dim(),
        xs,
        ys,
        n,
        c,
        seed,
        replicate_id: 0,
    })
}

/// Draw replicate `replicate_id` of an experiment with the given master seed.
pub fn sample_replicate(
    spec: &BoundarySpec,
    n: u64,
    c: f64,
    master_seed: u64,
    replicate_id: u64,
) -> Result<ProcessSample> {
    let seed = derive_replicate_seed(master_seed, replicate_id);
    let mut sample = sample_process(spec, n, c, seed)?;
    sample.replicate_id = replicate_id;
    Ok(sample)
}

/// Derive the seed of one replicate from the master seed.
///
/// The id is spread by the golden-ratio multiplier (a bijection of the
/// 64-bit integers), xored into the master, and finalized by the splitmix64
/// mixer. Distinct ids therefore never collide for a fixed master seed, and
/// the result does not depend on scheduling.
pub fn derive_replicate_seed(master: u64, replicate_id: u64) -> u64 {
    splitmix64(master ^ replicate_id.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
