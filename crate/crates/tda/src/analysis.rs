//! Drivers tying dated series to the sliding window machinery: landscape
//! norms per window, rolling indicators, and pre-event trend tests.

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tda_core::ews::{mann_kendall, rolling_indicators, IndicatorConfig, TrendReport};
use tda_core::landscape::Norm;
use tda_core::pipeline::{window_norms, zscored};

use crate::error::{Error, Result};
use crate::series::{IndicatorSeries, MultiSeries, NormSeries};

/// Sliding window norm computation settings.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOptions {
    /// Window length in rows; each window becomes one point cloud.
    pub window: usize,
    /// Landscape norms to evaluate per window, in output column order.
    pub norms: Vec<Norm>,
    /// Standardise each window's columns to zero mean and unit variance
    /// before building the cloud.
    pub zscore: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            window: 50,
            norms: vec![Norm::L1, Norm::L2],
            zscore: false,
        }
    }
}

/// Computes landscape norms for every sliding window of a multivariate
/// series. Windows are independent, so they run in parallel; the output
/// order is the window order regardless of scheduling. Each result row is
/// dated by the last row of its window.
pub fn norm_series(series: &MultiSeries, opts: &AnalyzeOptions) -> Result<NormSeries> {
    if opts.norms.is_empty() {
        return Err(Error::invalid("at least one norm required"));
    }
    let n_windows = series.matrix().n_windows(opts.window)?;
    let values: Vec<Vec<f64>> = (0..n_windows)
        .into_par_iter()
        .map(|start| -> Result<Vec<f64>> {
            let cloud = series.matrix().window_cloud(start, opts.window)?;
            let cloud = if opts.zscore { zscored(&cloud) } else { cloud };
            Ok(window_norms(&cloud, &opts.norms)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NormSeries {
        dates: series.dates()[opts.window - 1..].to_vec(),
        labels: opts.norms.iter().map(|n| n.label().to_string()).collect(),
        values,
    })
}

/// Computes rolling indicators over one dated column, dating each window
/// by its last row.
pub fn indicator_series(
    dates: &[NaiveDate],
    values: &[f64],
    cfg: &IndicatorConfig,
) -> Result<IndicatorSeries> {
    if dates.len() != values.len() {
        return Err(Error::invalid(format!(
            "{} dates against {} values",
            dates.len(),
            values.len()
        )));
    }
    let indicators = rolling_indicators(values, cfg)?;
    Ok(IndicatorSeries {
        dates: dates[cfg.window - 1..].to_vec(),
        variance: indicators.variance,
        low_freq_power: indicators.low_freq_power,
        acf1: indicators.acf1,
    })
}

/// One trend test result, serialised into report JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendJson {
    /// Name of the tested series.
    pub indicator: String,
    pub tau: f64,
    pub s: i64,
    pub z: f64,
    pub p_value: f64,
    /// Number of points tested.
    pub span: usize,
    /// Event the window ends before, when one was given.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub event_date: Option<String>,
}

fn trend_json(indicator: &str, report: TrendReport, event: Option<NaiveDate>) -> TrendJson {
    TrendJson {
        indicator: indicator.to_string(),
        tau: report.tau,
        s: report.s_statistic,
        z: report.z_score,
        p_value: report.p_value,
        span: report.span,
        event_date: event.map(|d| d.format("%Y-%m-%d").to_string()),
    }
}

/// Index range `[start, end)` of the points a trend test covers: rows
/// strictly before `event` (all rows when absent), truncated to the last
/// `span` of them when a span is given.
fn trend_range(
    dates: &[NaiveDate],
    event: Option<NaiveDate>,
    span: Option<usize>,
) -> Result<(usize, usize)> {
    let end = match event {
        Some(e) => {
            let (first, last) = match (dates.first(), dates.last()) {
                (Some(f), Some(l)) => (*f, *l),
                _ => return Err(Error::invalid("no data rows to test")),
            };
            if e < first || e > last {
                return Err(Error::invalid(format!(
                    "event date {e} is outside the series range {first}..{last}"
                )));
            }
            dates.partition_point(|d| *d < e)
        }
        None => dates.len(),
    };
    let start = match span {
        Some(s) => {
            if s < 2 {
                return Err(Error::invalid("span must be at least 2"));
            }
            if end < s {
                return Err(Error::invalid(format!(
                    "trend span {s} exceeds the {end} points available{}",
                    match event {
                        Some(e) => format!(" before {e}"),
                        None => String::new(),
                    }
                )));
            }
            end - s
        }
        None => 0,
    };
    if end - start < 2 {
        return Err(Error::invalid(format!(
            "trend test needs at least 2 points, found {}",
            end - start
        )));
    }
    Ok((start, end))
}

/// Runs the trend test on each indicator column over the rows selected by
/// `event` and `span`.
pub fn pre_event_trends(
    indicators: &IndicatorSeries,
    event: Option<NaiveDate>,
    span: Option<usize>,
) -> Result<Vec<TrendJson>> {
    let (start, end) = trend_range(&indicators.dates, event, span)?;
    indicators
        .columns()
        .iter()
        .map(|(label, column)| Ok(trend_json(label, mann_kendall(&column[start..end])?, event)))
        .collect()
}

/// Runs the trend test on a single named column.
pub fn column_trend(
    dates: &[NaiveDate],
    values: &[f64],
    label: &str,
    event: Option<NaiveDate>,
    span: Option<usize>,
) -> Result<TrendJson> {
    if dates.len() != values.len() {
        return Err(Error::invalid(format!(
            "{} dates against {} values",
            dates.len(),
            values.len()
        )));
    }
    let (start, end) = trend_range(dates, event, span)?;
    Ok(trend_json(label, mann_kendall(&values[start..end])?, event))
}
