//! Poisson variate generation.
//!
//! Sequential-search inversion below mean 30 and Hörmann's transformed
//! rejection with squeeze (PTRS) above. Both are exact samplers; no
//! normal approximation enters at any mean, so goodness-of-fit checks on
//! simulated processes test the model and not the generator.

use rand::Rng;
use statrs::function::gamma::ln_gamma;

const INVERSION_CUTOFF: f64 = 30.0;

/// Draw one Poisson variate with the given mean.
///
/// Panics if `mean` is negative or non-finite; mean 0 returns 0.
pub fn sample<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    assert!(mean.is_finite() && mean >= 0.0, "invalid Poisson mean {mean}");
    if mean == 0.0 {
        0
    } else if mean < INVERSION_CUTOFF {
        sample_inversion(rng, mean)
    } else {
        sample_ptrs(rng, mean)
    }
}

/// Inversion by sequential search over the CDF. One uniform per draw.
fn sample_inversion<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    let u: f64 = rng.gen();
    let mut k = 0u64;
    let mut pmf = (-mean).exp();
    let mut cdf = pmf;
    // The loop bound is far beyond any mass reachable below the cutoff.
    while u > cdf && k < 1000 {
        k += 1;
        pmf *= mean / k as f64;
        cdf += pmf;
    }
    k
}

/// PTRS: transformed rejection with squeeze steps.
fn sample_ptrs<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    let b = 0.931 + 2.53 * mean.sqrt();
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let v_r = 0.9277 - 3.6224 / (b - 2.0);
    let ln_mean = mean.ln();

    loop {
        let u: f64 = rng.gen::<f64>() - 0.5;
        let v: f64 = rng.gen();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();

        if us >= 0.07 && v <= v_r {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let accept = (v * inv_alpha / (a / (us * us) + b)).ln()
            <= -mean + k * ln_mean - ln_gamma(k + 1.0);
        if accept {
            return k as u64;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    fn chi_square_vs_poisson(mean: f64, draws: usize, seed: u64) -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Bin the support, lumping tails so every expected count is >= 5.
        let sd = mean.sqrt();
        let lo = ((mean - 6.0 * sd).floor().max(0.0)) as u64;
        let hi = (mean + 6.0 * sd).ceil() as u64;
        let nbins = (hi - lo + 2) as usize;
        let mut observed = vec![0u64; nbins];
        for _ in 0..draws {
            let k = sample(&mut rng, mean);
            let idx = if k < lo {
                0
            } else if k > hi {
                nbins - 1
            } else {
                (k - lo + 1) as usize
            };
            observed[idx] += 1;
        }
        // Expected probabilities from the pmf, tails aggregated.
        let mut pmf = (-mean).exp();
        let mut below = 0.0;
        let mut probs = vec![0.0; nbins];
        for k in 0..lo {
            below += pmf;
            pmf *= mean / (k + 1) as f64;
        }
        probs[0] = below;
        let mut inside = below;
        for k in lo..=hi {
            probs[(k - lo + 1) as usize] = pmf;
            inside += pmf;
            pmf *= mean / (k + 1) as f64;
        }
        probs[nbins - 1] = (1.0 - inside).max(0.0);

        // Merge sparse bins into neighbours.
        let mut merged_obs = Vec::new();
        let mut merged_p = Vec::new();
        let mut acc_o = 0.0;
        let mut acc_p = 0.0;
        for i in 0..nbins {
            acc_o += observed[i] as f64;
            acc_p += probs[i];
            if acc_p * draws as f64 >= 5.0 {
                merged_obs.push(acc_o);
                merged_p.push(acc_p);
                acc_o = 0.0;
                acc_p = 0.0;
            }
        }
        if acc_p > 0.0 {
            if let (Some(o), Some(p)) = (merged_obs.last_mut(), merged_p.last_mut()) {
                *o += acc_o;
                *p += acc_p;
            }
        }
        let mut stat = 0.0;
        for (o, p) in merged_obs.iter().zip(&merged_p) {
            let e = p * draws as f64;
            stat += (o - e) * (o - e) / e;
        }
        let dof = (merged_obs.len() - 1) as f64;
        let crit = ChiSquared::new(dof).unwrap().inverse_cdf(0.999);
        (stat, crit)
    }

    #[test]
    fn inversion_regime_fits_the_pmf() {
        let (stat, crit) = chi_square_vs_poisson(5.0, 200_000, 01);
        assert!(stat < crit, "chi-square {stat} >= critical {crit}");
    }

    #[test]
    fn rejection_regime_fits_the_pmf() {
        let (stat, crit) = chi_square_vs_poisson(50.0, 200_000, 02);
        assert!(stat < crit, "chi-square {stat} >= critical {crit}");
    }

    #[test]
    fn moments_track_the_mean_at_large_lambda() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mean = 4000.0;
        let draws = 20_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..draws {
            let k = sample(&mut rng, mean) as f64;
            sum += k;
            sumsq += k * k;
        }
        let m = sum / draws as f64;
        let v = sumsq / draws as f64 - m * m;
        // 4 standard errors of slack on each.
        assert!((m - mean).abs() < 4.0 * (mean / draws as f64).sqrt());
        assert!((v - mean).abs() < 4.0 * mean * (2.0 / draws as f64).sqrt());
    }

    #[test]
    fn zero_mean_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample(&mut rng, 0.0), 0);
    }
}
