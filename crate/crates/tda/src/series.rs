//! Dated series containers and log return alignment.

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use tda_core::pipeline::SeriesMatrix;

use crate::error::{Error, Result};

/// A multivariate series: strictly increasing dates, one labelled column
/// per component, and the numeric matrix itself.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSeries {
    labels: Vec<String>,
    dates: Vec<NaiveDate>,
    matrix: SeriesMatrix,
}

impl MultiSeries {
    pub fn new(labels: Vec<String>, dates: Vec<NaiveDate>, matrix: SeriesMatrix) -> Result<Self> {
        if labels.len() != matrix.n_cols() {
            return Err(Error::invalid(format!(
                "{} labels for {} columns",
                labels.len(),
                matrix.n_cols()
            )));
        }
        if dates.len() != matrix.n_rows() {
            return Err(Error::invalid(format!(
                "{} dates for {} rows",
                dates.len(),
                matrix.n_rows()
            )));
        }
        if let Some(w) = dates.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "dates must be strictly increasing, {} is not after {}",
                w[1], w[0]
            )));
        }
        Ok(MultiSeries {
            labels,
            dates,
            matrix,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn matrix(&self) -> &SeriesMatrix {
        &self.matrix
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.n_cols()
    }

    /// One column by label.
    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let c = self.labels.iter().position(|l| l == label)?;
        Some((0..self.n_rows()).map(|r| self.matrix.row(r)[c]).collect())
    }
}

/// One named price history keyed by date.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    name: String,
    prices: BTreeMap<NaiveDate, f64>,
}

impl PriceSeries {
    /// Collects dated prices, rejecting duplicate dates.
    pub fn from_pairs(name: impl Into<String>, pairs: Vec<(NaiveDate, f64)>) -> Result<Self> {
        let name = name.into();
        let mut prices = BTreeMap::new();
        for (date, value) in pairs {
            if prices.insert(date, value).is_some() {
                return Err(Error::invalid(format!("{name}: duplicate date {date}")));
            }
        }
        Ok(PriceSeries { name, prices })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }
}

/// Aligns price series on their common dates and turns them into a log
/// return matrix: row t is `ln(P_t / P_{t-1})` per series, dated at `t`.
///
/// At least two series and two common dates are required, and every price
/// on a common date must be strictly positive.
pub fn log_returns(series: &[PriceSeries]) -> Result<MultiSeries> {
    if series.len() < 2 {
        return Err(Error::invalid(format!(
            "log returns need at least 2 price series, got {}",
            series.len()
        )));
    }
    let mut common: BTreeSet<NaiveDate> = series[0].prices.keys().copied().collect();
    for s in &series[1..] {
        let keys: BTreeSet<NaiveDate> = s.prices.keys().copied().collect();
        common = common.intersection(&keys).copied().collect();
    }
    let dates: Vec<NaiveDate> = common.into_iter().collect();
    if dates.len() < 2 {
        return Err(Error::invalid(format!(
            "price series share only {} common dates, need at least 2",
            dates.len()
        )));
    }
    for s in series {
        for d in &dates {
            let p = s.prices[d];
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::invalid(format!(
                    "{}: price {p} on {d} is not strictly positive",
                    s.name
                )));
            }
        }
    }

    let mut data = Vec::with_capacity((dates.len() - 1) * series.len());
    for t in 1..dates.len() {
        for s in series {
            data.push((s.prices[&dates[t]] / s.prices[&dates[t - 1]]).ln());
        }
    }
    let labels = series.iter().map(|s| s.name.clone()).collect();
    let matrix = SeriesMatrix::new(data, series.len())?;
    MultiSeries::new(labels, dates[1..].to_vec(), matrix)
}

/// A norm series: one row per sliding window, dated by the window's last
/// observation, with one column per requested norm label.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSeries {
    pub dates: Vec<NaiveDate>,
    pub labels: Vec<String>,
    /// `values[i][j]` is norm j of window i.
    pub values: Vec<Vec<f64>>,
}

/// Rolling early-warning indicators, dated by each window's last
/// observation.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSeries {
    pub dates: Vec<NaiveDate>,
    pub variance: Vec<f64>,
    pub low_freq_power: Vec<f64>,
    pub acf1: Vec<f64>,
}

impl IndicatorSeries {
    /// Indicator columns by name, in file order.
    pub fn columns(&self) -> [(&'static str, &[f64]); 3] {
        [
            ("variance", self.variance.as_slice()),
            ("low_freq_power", self.low_freq_power.as_slice()),
            ("acf1", self.acf1.as_slice()),
        ]
    }
}
