//! Reduction of a point sample over a partition into per-cell statistics:
//! counts, maxima, and bias-corrected rescaled maxima.

use crate::error::{Error, Result};
use crate::model::Partition;
use crate::simulate::ProcessSample;

/// Per-cell statistics consumed by the estimators.
///
/// For a cell with count `N_r` and maximum ordinate `ymax_r`, the
/// bias-corrected rescaled maximum is
/// `xi_r = (1 + 1/N_r) * n * c * nu_r * ymax_r`, with empty cells
/// contributing zero throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct CellStats {
    /// Point count per cell.
    pub counts: Vec<u64>,
    /// Largest ordinate per cell; 0 for empty cells.
    pub ymax: Vec<f64>,
    /// Bias-corrected rescaled maxima; 0 for empty cells.
    pub xi: Vec<f64>,
    /// Sample-size index.
    pub n: u64,
    /// Intensity constant.
    pub c: f64,
    /// Cell count of the partition.
    pub k: u64,
    /// Total number of points, `N(S)`.
    pub total: u64,
}

impl CellStats {
    /// Cell measure `1/k`.
    pub fn nu(&self) -> f64 {
        1.0 / self.k as f64
    }

    /// Bias-corrected cell value `(1 + 1/N_r) * ymax_r`, zero when empty.
    pub fn corrected_max(&self, r: usize) -> f64 {
        if self.counts[r] == 0 {
            0.0
        } else {
            (1.0 + 1.0 / self.counts[r] as f64) * self.ymax[r]
        }
    }
}

/// Reduce a sample over a partition in a single pass.
///
/// Points sitting exactly on an interior cell edge belong to the
/// right/upper cell; coordinates equal to 1 map to the last cell.
pub fn reduce_cells(sample: &ProcessSample, part: &Partition) -> Result<CellStats> {
    if sample.dim() != part.dim() {
        return Err(Error::DimensionMismatch {
            expected: part.dim(),
            got: sample.dim(),
        });
    }
    let k = part.k() as usize;
    let mut counts = vec![0u64; k];
    let mut ymax = vec![0.0f64; k];
    for (x, y) in sample.iter() {
        let r = part
            .cell_index(x)
            .map_err(|_| Error::Data(format!("sample point {x:?} lies outside the unit cube")))?
            as usize;
        counts[r] += 1;
        if y > ymax[r] {
            ymax[r] = y;
        }
    }
    let scale = sample.n as f64 * sample.c * part.nu();
    let xi = counts
        .iter()
        .zip(&ymax)
        .map(|(&n_r, &y_r)| {
            if n_r == 0 {
                0.0
            } else {
                (1.0 + 1.0 / n_r as f64) * scale * y_r
            }
        })
        .collect();
    Ok(CellStats {
        counts,
        ymax,
        xi,
        n: sample.n,
        c: sample.c,
        k: part.k(),
        total: sample.total(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BoundaryKind, BoundarySpec};
    use crate::simulate::{sample_process, ProcessSample};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample_from(points: &[(f64, f64)], n: u64, c: f64) -> ProcessSample {
        let pts: Vec<(Vec<f64>, f64)> = points.iter().map(|&(x, y)| (vec![x], y)).collect();
        ProcessSample::from_points(1, &pts, n, c).unwrap()
    }

    #[test]
    fn hand_computed_single_cell() {
        let sample = sample_from(&[(0.2, 0.3), (0.5, 0.9), (0.7, 0.6)], 10, 1.0);
        let part = Partition::new(1, 1).unwrap();
        let stats = reduce_cells(&sample, &part).unwrap();
        assert_eq!(stats.counts, vec![3]);
        assert_abs_diff_eq!(stats.ymax[0], 0.9);
        // (1 + 1/3) * 10 * 1 * 1 * 0.9 = 12
        assert_abs_diff_eq!(stats.xi[0], 12.0, epsilon = 1e-12);
        assert_eq!(stats.total, 3);
    }

    #[test]
    fn empty_sample_is_all_zero() {
        let sample = sample_from(&[], 10, 1.0);
        let part = Partition::new(4, 1).unwrap();
        let stats = reduce_cells(&sample, &part).unwrap();
        assert!(stats.counts.iter().all(|&c| c == 0));
        assert!(stats.ymax.iter().all(|&y| y == 0.0));
        assert!(stats.xi.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn midline_assignment_goes_right() {
        let sample = sample_from(&[(0.49, 0.5), (0.51, 0.7)], 10, 1.0);
        let part = Partition::new(2, 1).unwrap();
        let stats = reduce_cells(&sample, &part).unwrap();
        assert_eq!(stats.counts, vec![1, 1]);
        assert_abs_diff_eq!(stats.ymax[0], 0.5);
        assert_abs_diff_eq!(stats.ymax[1], 0.7);
    }

    #[test]
    fn totals_add_up() {
        let spec = BoundarySpec::new(BoundaryKind::Constant { level: 1.0 }, 1).unwrap();
        let sample = sample_process(&spec, 500, 1.0, 11).unwrap();
        let part = Partition::new(25, 1).unwrap();
        let stats = reduce_cells(&sample, &part).unwrap();
        assert_eq!(stats.counts.iter().sum::<u64>(), sample.total());
        for r in 0..25 {
            if stats.counts[r] >= 1 {
                // xi >= n c nu ymax whenever the cell is occupied
                assert!(stats.xi[r] >= 500.0 * stats.nu() * stats.ymax[r]);
            } else {
                assert_eq!(stats.ymax[r], 0.0);
                assert_eq!(stats.xi[r], 0.0);
            }
        }
    }

    #[test]
    fn matches_brute_force_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for trial in 0..1000 {
            let k = [1u64, 2, 4, 5, 10][trial % 5];
            let part = Partition::new(k, 1).unwrap();
            let npts = rng.gen_range(0..40);
            let pts: Vec<(f64, f64)> = (0..npts)
                .map(|_| (rng.gen::<f64>(), rng.gen::<f64>() * 2.0))
                .collect();
            let sample = sample_from(&pts, 50, 1.0);
            let stats = reduce_cells(&sample, &part).unwrap();
            // Brute force: filter and max per cell.
            for r in 0..k {
                let (lo, hi) = part.cell_box(r)[0];
                let in_cell = |x: f64| {
                    if r == k - 1 {
                        x >= lo && x <= hi
                    } else {
                        x >= lo && x < hi
                    }
                };
                let cell_pts: Vec<f64> = pts
                    .iter()
                    .filter(|(x, _)| in_cell(*x))
                    .map(|&(_, y)| y)
                    .collect();
                assert_eq!(stats.counts[r as usize], cell_pts.len() as u64);
                let expect_max = cell_pts.iter().copied().fold(0.0f64, f64::max);
                assert_eq!(stats.ymax[r as usize], expect_max);
            }
        }
    }

    #[test]
    fn permutation_invariance() {
        let mut pts = vec![(0.1, 0.2), (0.15, 0.9), (0.6, 0.4), (0.62, 0.41), (0.99, 1.3)];
        let part = Partition::new(5, 1).unwrap();
        let base = reduce_cells(&sample_from(&pts, 20, 1.0), &part).unwrap();
        pts.reverse();
        let flipped = reduce_cells(&sample_from(&pts, 20, 1.0), &part).unwrap();
        assert_eq!(base, flipped);
        pts.swap(0, 2);
        let swapped = reduce_cells(&sample_from(&pts, 20, 1.0), &part).unwrap();
        assert_eq!(base, swapped);
    }
}
