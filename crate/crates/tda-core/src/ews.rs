//! Classical early-warning indicators and the Mann-Kendall trend test.
//!
//! Critical slowing down ahead of a transition shows up as rising variance,
//! rising lag 1 autocorrelation and a drift of spectral power towards low
//! frequencies. These are computed over rolling windows of a univariate
//! series; the Mann-Kendall test then quantifies how monotone an indicator
//! (or any series) is over a chosen span.

use alloc::vec::Vec;

use crate::error::Error;

/// Configuration of the rolling indicator scan.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorConfig {
    /// Rolling window length, at least 4.
    pub window: usize,
    /// Fraction of the spectrum counted as "low frequency": the lowest
    /// `ceil(fraction * window / 2)` non-zero frequencies. In (0, 0.5].
    pub low_freq_fraction: f64,
    /// Taper each detrended window with a Hann window before the DFT.
    pub hann: bool,
}

impl Default for IndicatorConfig {
    fn default() -> Self {
        IndicatorConfig {
            window: 500,
            low_freq_fraction: 0.1,
            hann: false,
        }
    }
}

/// Rolling indicators, one value per window; window i covers input rows
/// i .. i + window. `degenerate[i]` flags windows with zero variance,
/// whose autocorrelation is reported as 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RollingIndicators {
    pub variance: Vec<f64>,
    pub acf1: Vec<f64>,
    pub low_freq_power: Vec<f64>,
    pub degenerate: Vec<bool>,
}

impl RollingIndicators {
    pub fn len(&self) -> usize {
        self.variance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variance.is_empty()
    }
}

/// Computes variance, lag 1 autocorrelation and mean low-frequency
/// periodogram power over every sliding window of the series.
///
/// Each window is linearly detrended (and optionally Hann tapered) before
/// its periodogram `I(k) = |DFT(k)|^2 / n` is averaged over the lowest
/// `ceil(fraction * n / 2)` non-zero frequencies. Variance is the unbiased
/// sample variance; autocorrelation uses the window mean.
pub fn rolling_indicators(
    series: &[f64],
    cfg: &IndicatorConfig,
) -> Result<RollingIndicators, Error> {
    #[allow(unused_imports)]
    use num_traits::Float;
    if let Some(bad) = series.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue { row: bad, col: 0 });
    }
    let w = cfg.window;
    if w < 4 {
        return Err(Error::InvalidConfig(alloc::format!(
            "indicator window must be at least 4, got {w}"
        )));
    }
    if w > series.len() {
        return Err(Error::InsufficientData {
            required: w,
            available: series.len(),
        });
    }
    if !(cfg.low_freq_fraction > 0.0 && cfg.low_freq_fraction <= 0.5) {
        return Err(Error::InvalidConfig(alloc::format!(
            "low frequency fraction must be in (0, 0.5], got {}",
            cfg.low_freq_fraction
        )));
    }

    let wf = w as f64;
    let m = ((cfg.low_freq_fraction * wf / 2.0).ceil() as usize)
        .min(w / 2)
        .max(1);

    // DFT basis for the m lowest non-zero frequencies, shared by windows.
    let mut cos_t = alloc::vec![0.0; m * w];
    let mut sin_t = alloc::vec![0.0; m * w];
    for k in 1..=m {
        for t in 0..w {
            let phase = core::f64::consts::TAU * (k as f64) * (t as f64) / wf;
            cos_t[(k - 1) * w + t] = phase.cos();
            sin_t[(k - 1) * w + t] = phase.sin();
        }
    }
    let taper: Option<Vec<f64>> = cfg.hann.then(|| {
        (0..w)
            .map(|t| 0.5 * (1.0 - (core::f64::consts::TAU * t as f64 / (wf - 1.0)).cos()))
            .collect()
    });

    // Detrend regressors are fixed: t = 0 .. w-1.
    let st = wf * (wf - 1.0) / 2.0;
    let stt = (wf - 1.0) * wf * (2.0 * wf - 1.0) / 6.0;

    let n_windows = series.len() - w + 1;
    let mut out = RollingIndicators {
        variance: Vec::with_capacity(n_windows),
        acf1: Vec::with_capacity(n_windows),
        low_freq_power: Vec::with_capacity(n_windows),
        degenerate: Vec::with_capacity(n_windows),
    };
    let mut resid = alloc::vec![0.0; w];
    for start in 0..n_windows {
        let win = &series[start..start + w];
        let mean = win.iter().sum::<f64>() / wf;

        let mut ss = 0.0;
        let mut lag = 0.0;
        for t in 0..w {
            let e = win[t] - mean;
            ss += e * e;
            if t + 1 < w {
                lag += e * (win[t + 1] - mean);
            }
        }
        let variance = ss / (wf - 1.0);
        let degenerate = ss == 0.0;
        let acf1 = if degenerate { 0.0 } else { lag / ss };

        let sx: f64 = win.iter().sum();
        let sxt: f64 = win.iter().enumerate().map(|(t, v)| v * t as f64).sum();
        let slope = (wf * sxt - st * sx) / (wf * stt - st * st);
        let intercept = (sx - slope * st) / wf;
        for t in 0..w {
            resid[t] = win[t] - (intercept + slope * t as f64);
            if let Some(h) = &taper {
                resid[t] *= h[t];
            }
        }
        let mut power = 0.0;
        for k in 0..m {
            let mut re = 0.0;
            let mut im = 0.0;
            for t in 0..w {
                re += resid[t] * cos_t[k * w + t];
                im += resid[t] * sin_t[k * w + t];
            }
            power += (re * re + im * im) / wf;
        }
        out.variance.push(variance);
        out.acf1.push(acf1);
        out.low_freq_power.push(power / m as f64);
        out.degenerate.push(degenerate);
    }
    Ok(out)
}

/// Result of the Mann-Kendall monotone trend test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendReport {
    /// Kendall's tau-b between the series and time, in [-1, 1].
    pub tau: f64,
    /// Raw score: signs of all pairwise forward differences, summed.
    pub s_statistic: i64,
    /// Normal approximation score with tie correction and continuity
    /// correction.
    pub z_score: f64,
    /// Two-sided p-value of `z_score`.
    pub p_value: f64,
    /// Number of observations tested.
    pub span: usize,
}

/// Mann-Kendall trend test of a series against time.
///
/// `tau` is +1 for strictly increasing input, -1 for strictly decreasing,
/// 0 with p-value 1 for constant input. The variance of S uses the usual
/// tie correction; the z score applies a continuity correction.
pub fn mann_kendall(series: &[f64]) -> Result<TrendReport, Error> {
    #[allow(unused_imports)]
    use num_traits::Float;
    if let Some(bad) = series.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue { row: bad, col: 0 });
    }
    let n = series.len();
    if n < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            available: n,
        });
    }

    let mut s: i64 = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += match series[j]
                .partial_cmp(&series[i])
                .expect("values are finite")
            {
                core::cmp::Ordering::Greater => 1,
                core::cmp::Ordering::Less => -1,
                core::cmp::Ordering::Equal => 0,
            };
        }
    }

    // Tie groups among the values; time has no ties.
    let mut sorted: Vec<f64> = series.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mut tie_pairs = 0.0;
    let mut tie_var = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        if t > 1.0 {
            tie_pairs += t * (t - 1.0) / 2.0;
            tie_var += t * (t - 1.0) * (2.0 * t + 5.0);
        }
        i = j;
    }

    let nf = n as f64;
    let n0 = nf * (nf - 1.0) / 2.0;
    let denom = ((n0 - tie_pairs) * n0).sqrt();
    let tau = if denom > 0.0 { s as f64 / denom } else { 0.0 };

    let var_s = (nf * (nf - 1.0) * (2.0 * nf + 5.0) - tie_var) / 18.0;
    let z_score = if var_s > 0.0 && s != 0 {
        let shrunk = if s > 0 {
            s as f64 - 1.0
        } else {
            s as f64 + 1.0
        };
        shrunk / var_s.sqrt()
    } else {
        0.0
    };
    let p_value = libm::erfc(z_score.abs() / core::f64::consts::SQRT_2);

    Ok(TrendReport {
        tau,
        s_statistic: s,
        z_score,
        p_value,
        span: n,
    })
}
