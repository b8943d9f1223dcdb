//! Synthetic experiment drivers: each generates a dataset, pushes it
//! through the landscape pipeline in parallel, and reduces the norms to
//! the experiment's headline statistic.

use rayon::prelude::*;
use serde::Serialize;
use tda_core::landscape::Norm;
use tda_core::pipeline::{window_norms, SeriesMatrix};
use tda_core::synth::{
    gamma_modulated_clouds, noisy_henon, white_noise_ramp, GammaCloud, GammaConfig, HenonConfig,
    WhiteNoiseCloud, WhiteNoiseConfig,
};

use crate::error::{Error, Result};

/// Norms evaluated by every experiment, in column order.
pub const EXPERIMENT_NORMS: [Norm; 2] = [Norm::L1, Norm::L2];

/// Least-squares line fit with its coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Fits `y = slope * x + intercept` by least squares.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::invalid(format!(
            "line fit needs two equal-length samples of at least 2 points, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::invalid("line fit input must be finite"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("line fit needs varying x values"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let e = b - (slope * a + intercept);
            e * e
        })
        .sum();
    let ss_tot: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    let r2 = if ss_tot == 0.0 {
        // A constant target hit exactly is a perfect fit; anything else
        // explains nothing.
        if ss_res < 1e-300 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(LineFit {
        slope,
        intercept,
        r2,
    })
}

fn parallel_norms<T: Sync>(
    items: &[T],
    cloud: impl Fn(&T) -> Result<Vec<f64>> + Sync + Send,
) -> Result<Vec<Vec<f64>>> {
    items.par_iter().map(cloud).collect()
}

/// White noise ramp outcome: per-cloud norms plus the per-level means and
/// the linearity checks the experiment exists to make.
#[derive(Debug, Clone, PartialEq)]
pub struct WhiteNoiseRun {
    pub config: WhiteNoiseConfig,
    /// Generated clouds, realization-major.
    pub clouds: Vec<WhiteNoiseCloud>,
    /// Per-cloud norms in [`EXPERIMENT_NORMS`] order, same order as `clouds`.
    pub norms: Vec<Vec<f64>>,
    /// Mean norms per sigma level, averaged over realizations.
    pub mean_l1: Vec<f64>,
    pub mean_l2: Vec<f64>,
    /// Mean L1 norm against sigma squared.
    pub l1_fit: LineFit,
    /// Mean L2 norm against sigma to the 3/2.
    pub l2_fit: LineFit,
}

/// Runs the white noise ramp. The check of interest: the mean L1 norm
/// grows linearly in the variance (and L2 in sigma^1.5), because scaling a
/// cloud by F scales every landscape by F and its L^p norm by F^(1+1/p).
pub fn white_noise_experiment(cfg: &WhiteNoiseConfig) -> Result<WhiteNoiseRun> {
    let clouds = white_noise_ramp(cfg)?;
    let norms = parallel_norms(&clouds, |c| Ok(window_norms(&c.cloud, &EXPERIMENT_NORMS)?))?;

    let n_levels = cfg.sigma_levels.len();
    let mut sums = vec![[0.0f64; 2]; n_levels];
    let mut counts = vec![0usize; n_levels];
    for (cloud, ns) in clouds.iter().zip(&norms) {
        sums[cloud.level_index][0] += ns[0];
        sums[cloud.level_index][1] += ns[1];
        counts[cloud.level_index] += 1;
    }
    let mean_l1: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, c)| s[0] / *c as f64)
        .collect();
    let mean_l2: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, c)| s[1] / *c as f64)
        .collect();

    let variances: Vec<f64> = cfg.sigma_levels.iter().map(|s| s * s).collect();
    let sigma15: Vec<f64> = cfg.sigma_levels.iter().map(|s| s.powf(1.5)).collect();
    let l1_fit = fit_line(&variances, &mean_l1)?;
    let l2_fit = fit_line(&sigma15, &mean_l2)?;

    Ok(WhiteNoiseRun {
        config: cfg.clone(),
        clouds,
        norms,
        mean_l1,
        mean_l2,
        l1_fit,
        l2_fit,
    })
}

/// Gamma mixture outcome across repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaRun {
    pub config: GammaConfig,
    pub repetitions: usize,
    /// Clouds of all repetitions concatenated, repetition-major; the
    /// repetition of cloud i is `i / config.alpha_schedule.len()`.
    pub clouds: Vec<GammaCloud>,
    /// Per-cloud norms in [`EXPERIMENT_NORMS`] order.
    pub norms: Vec<Vec<f64>>,
    /// Per schedule step, L1 norm averaged over repetitions.
    pub per_step_mean_l1: Vec<f64>,
    /// Steps whose alpha still sits on the schedule's leading plateau.
    pub early_steps: usize,
    /// Late-band over early-band mean L1, one entry per repetition; empty
    /// when the schedule never leaves its plateau.
    pub per_rep_ratio: Vec<f64>,
    /// Mean of `per_rep_ratio`, when it exists.
    pub mean_ratio: Option<f64>,
}

/// Runs the Gamma-modulated cloud experiment `repetitions` times on
/// consecutive RNG streams. The headline statistic compares the mean L1
/// norm after the shape parameter starts falling against the mean while
/// it holds its initial plateau.
pub fn gamma_experiment(cfg: &GammaConfig, repetitions: usize) -> Result<GammaRun> {
    if repetitions == 0 {
        return Err(Error::invalid("at least one repetition required"));
    }
    let n_steps = cfg.alpha_schedule.len();
    let mut clouds = Vec::with_capacity(repetitions * n_steps);
    for rep in 0..repetitions {
        let rep_cfg = GammaConfig {
            stream: cfg.stream + rep as u64,
            ..cfg.clone()
        };
        clouds.extend(gamma_modulated_clouds(&rep_cfg)?);
    }
    let norms = parallel_norms(&clouds, |c| Ok(window_norms(&c.cloud, &EXPERIMENT_NORMS)?))?;

    let mut per_step_mean_l1 = vec![0.0f64; n_steps];
    for (i, ns) in norms.iter().enumerate() {
        per_step_mean_l1[i % n_steps] += ns[0] / repetitions as f64;
    }

    let first = cfg.alpha_schedule[0];
    let early_steps = cfg
        .alpha_schedule
        .iter()
        .take_while(|a| **a == first)
        .count();
    let mut per_rep_ratio = Vec::new();
    if early_steps < n_steps {
        for rep in 0..repetitions {
            let l1 = |range: core::ops::Range<usize>| -> f64 {
                let len = range.len();
                range.map(|t| norms[rep * n_steps + t][0]).sum::<f64>() / len as f64
            };
            let early = l1(0..early_steps);
            let late = l1(early_steps..n_steps);
            per_rep_ratio.push(if early == 0.0 {
                f64::INFINITY
            } else {
                late / early
            });
        }
    }
    let mean_ratio = if per_rep_ratio.is_empty() {
        None
    } else {
        Some(per_rep_ratio.iter().sum::<f64>() / per_rep_ratio.len() as f64)
    };

    Ok(GammaRun {
        config: cfg.clone(),
        repetitions,
        clouds,
        norms,
        per_step_mean_l1,
        early_steps,
        per_rep_ratio,
        mean_ratio,
    })
}

/// Parameter values of the four-series chaos-onset run.
pub const HENON_QUARTET: [f64; 4] = [0.27, 0.28, 0.29, 0.30];

/// Parameter band treated as pre-onset when averaging norms.
pub const HENON_EARLY_BAND: (f64, f64) = (0.0, 0.8);
/// Parameter band treated as post-onset.
pub const HENON_LATE_BAND: (f64, f64) = (1.1, f64::INFINITY);

/// Chaos-onset run outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct HenonRun {
    /// Parameter b per column of `series`.
    pub bs: Vec<f64>,
    /// The four x series as columns, one row per step.
    pub series: SeriesMatrix,
    /// Ramp parameter in effect at each step (shared by all columns).
    pub a_values: Vec<f64>,
    /// Divergence restarts per column.
    pub restarts: Vec<Vec<usize>>,
    pub window: usize,
    /// Per-window norms in [`EXPERIMENT_NORMS`] order.
    pub norms: Vec<Vec<f64>>,
    /// Ramp parameter at each window's last row.
    pub window_a: Vec<f64>,
    /// Mean L1 norm over windows ending in the early band.
    pub early_mean_l1: f64,
    /// Mean L1 norm over windows ending in the late band.
    pub late_mean_l1: f64,
    /// `late_mean_l1 / early_mean_l1`.
    pub ratio: f64,
}

/// Runs the chaos-onset experiment: four noisy series over the same
/// parameter ramp, one per value in [`HENON_QUARTET`], combined into a
/// four-column series and scanned with sliding window norms. Chaos sets
/// in near a = 1.06, so windows in the late band should carry much larger
/// norms than windows in the early band.
pub fn henon_experiment(cfg: &HenonConfig, window: usize) -> Result<HenonRun> {
    let mut columns = Vec::with_capacity(HENON_QUARTET.len());
    let mut restarts = Vec::with_capacity(HENON_QUARTET.len());
    let mut a_values = Vec::new();
    for (j, &b) in HENON_QUARTET.iter().enumerate() {
        let run = noisy_henon(&HenonConfig {
            b,
            stream: cfg.stream + j as u64,
            ..cfg.clone()
        })?;
        if j == 0 {
            a_values = run.a;
        }
        columns.push(run.x);
        restarts.push(run.restarts);
    }
    let series = SeriesMatrix::from_columns(&columns)?;
    let n_windows = series.n_windows(window)?;
    let norms: Vec<Vec<f64>> = (0..n_windows)
        .into_par_iter()
        .map(|start| -> Result<Vec<f64>> {
            let cloud = series.window_cloud(start, window)?;
            Ok(window_norms(&cloud, &EXPERIMENT_NORMS)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let window_a: Vec<f64> = (0..n_windows).map(|s| a_values[s + window - 1]).collect();

    let band_mean = |lo: f64, hi: f64| -> f64 {
        let mut sum = 0.0;
        let mut count = 0usize;
        for (a, ns) in window_a.iter().zip(&norms) {
            if *a >= lo && *a <= hi {
                sum += ns[0];
                count += 1;
            }
        }
        if count == 0 {
            f64::NAN
        } else {
            sum / count as f64
        }
    };
    let early_mean_l1 = band_mean(HENON_EARLY_BAND.0, HENON_EARLY_BAND.1);
    let late_mean_l1 = band_mean(HENON_LATE_BAND.0, HENON_LATE_BAND.1);
    let ratio = late_mean_l1 / early_mean_l1;

    Ok(HenonRun {
        bs: HENON_QUARTET.to_vec(),
        series,
        a_values,
        restarts,
        window,
        norms,
        window_a,
        early_mean_l1,
        late_mean_l1,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn line_fit_recovers_exact_lines() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let fit = fit_line(&x, &y).unwrap();
        assert_relative_eq!(fit.slope, 2.0, max_relative = 1e-14);
        assert_relative_eq!(fit.intercept, 1.0, max_relative = 1e-14);
        assert_relative_eq!(fit.r2, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn line_fit_flags_scatter_and_rejects_degenerate_input() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [1.0, 3.0, 2.0, 5.0, 3.5];
        let fit = fit_line(&x, &y).unwrap();
        assert!(fit.r2 < 1.0 && fit.r2 > 0.0, "{fit:?}");

        assert!(fit_line(&[1.0, 1.0], &[2.0, 3.0]).is_err());
        assert!(fit_line(&[1.0], &[2.0]).is_err());
        assert!(fit_line(&[1.0, 2.0], &[2.0]).is_err());
        assert!(fit_line(&[1.0, f64::NAN], &[2.0, 3.0]).is_err());
    }

    #[test]
    fn constant_target_r2_is_binary() {
        let flat = fit_line(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0]).unwrap();
        assert_eq!(flat.slope, 0.0);
        assert_eq!(flat.r2, 1.0);
    }

    fn small_white_noise() -> WhiteNoiseConfig {
        WhiteNoiseConfig {
            sigma_levels: vec![1.0, 2.0, 3.0],
            points: 25,
            dim: 3,
            jitter: 0.05,
            realizations: 4,
            seed: 7,
        }
    }

    #[test]
    fn white_noise_run_shape_and_norm_consistency() {
        let cfg = small_white_noise();
        let run = white_noise_experiment(&cfg).unwrap();
        assert_eq!(run.clouds.len(), 12);
        assert_eq!(run.norms.len(), 12);
        assert_eq!(run.mean_l1.len(), 3);
        let direct = window_norms(&run.clouds[5].cloud, &EXPERIMENT_NORMS).unwrap();
        assert_eq!(run.norms[5], direct);
        // Norm magnitudes track the deviation ramp even in a tiny run.
        assert!(
            run.mean_l1[0] < run.mean_l1[1] && run.mean_l1[1] < run.mean_l1[2],
            "{:?}",
            run.mean_l1
        );
        assert!(run.l1_fit.slope > 0.0);
    }

    #[test]
    fn white_noise_run_is_deterministic() {
        let cfg = small_white_noise();
        let a = white_noise_experiment(&cfg).unwrap();
        let b = white_noise_experiment(&cfg).unwrap();
        assert_eq!(a.norms, b.norms);
        assert_eq!(a.l1_fit, b.l1_fit);
    }

    fn small_gamma() -> GammaConfig {
        GammaConfig {
            alpha_schedule: vec![6.0, 6.0, 6.0, 2.0, 1.0],
            beta: 1.0,
            dim: 3,
            points_per_cloud: 25,
            precision_set_size: 25,
            seed: 11,
            stream: 0,
        }
    }

    #[test]
    fn gamma_run_shape_and_band_split() {
        let cfg = small_gamma();
        let run = gamma_experiment(&cfg, 3).unwrap();
        assert_eq!(run.clouds.len(), 15);
        assert_eq!(run.norms.len(), 15);
        assert_eq!(run.per_step_mean_l1.len(), 5);
        assert_eq!(run.early_steps, 3);
        assert_eq!(run.per_rep_ratio.len(), 3);
        assert!(run.mean_ratio.is_some());
        // Per-step means really are the average over repetitions.
        let want = (run.norms[0][0] + run.norms[5][0] + run.norms[10][0]) / 3.0;
        assert_relative_eq!(run.per_step_mean_l1[0], want, max_relative = 1e-12);
    }

    #[test]
    fn gamma_plateau_only_schedule_has_no_ratio() {
        let cfg = GammaConfig {
            alpha_schedule: vec![4.0, 4.0],
            ..small_gamma()
        };
        let run = gamma_experiment(&cfg, 2).unwrap();
        assert_eq!(run.early_steps, 2);
        assert!(run.per_rep_ratio.is_empty());
        assert!(run.mean_ratio.is_none());
    }

    #[test]
    fn gamma_run_is_deterministic_and_rep_streams_differ() {
        let cfg = small_gamma();
        let a = gamma_experiment(&cfg, 2).unwrap();
        let b = gamma_experiment(&cfg, 2).unwrap();
        assert_eq!(a.norms, b.norms);
        // Different repetitions see different draws.
        assert_ne!(a.norms[0], a.norms[5]);
    }

    fn coarse_henon() -> HenonConfig {
        // 700 steps across the full ramp keeps the test fast while leaving
        // both parameter bands populated.
        HenonConfig {
            dt: 1.4 / 700.0,
            ..HenonConfig::default()
        }
    }

    #[test]
    fn henon_run_covers_both_bands_and_detects_onset() {
        let run = henon_experiment(&coarse_henon(), 25).unwrap();
        assert_eq!(run.series.n_cols(), 4);
        assert_eq!(run.series.n_rows(), 700);
        assert_eq!(run.norms.len(), run.window_a.len());
        assert_eq!(run.norms.len(), 700 - 25 + 1);
        assert!(run.window_a.windows(2).all(|w| w[0] <= w[1]));
        assert!(run.early_mean_l1.is_finite() && run.early_mean_l1 >= 0.0);
        assert!(run.late_mean_l1.is_finite());
        // The post-onset band carries visibly larger norms even in a
        // coarse run; the calibrated threshold lives in the acceptance
        // suite, not here.
        assert!(run.ratio > 1.0, "ratio {}", run.ratio);
    }

    #[test]
    fn henon_window_parameters_align_with_window_ends() {
        let run = henon_experiment(&coarse_henon(), 25).unwrap();
        assert_eq!(run.window_a[0], run.a_values[24]);
        assert_eq!(*run.window_a.last().unwrap(), *run.a_values.last().unwrap());
    }
}
