//! Sliding-window point clouds and their landscape norm series.
//!
//! A multivariate series with d components becomes a sequence of point
//! clouds in R^d: window i collects rows i .. i + w. Each cloud's degree 1
//! persistence landscape is summarised by its L^p norms, giving one norm
//! series per p across all windows.

use alloc::vec::Vec;

use crate::error::Error;
use crate::geometry::PointCloud;
use crate::landscape::{Norm, PersistenceLandscape};
use crate::persistence::{compute_persistence, Filtration};

/// A dense row-major matrix of finite observations: one row per time step,
/// one column per series component. At least two columns, so that windows
/// form genuinely multidimensional clouds.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMatrix {
    data: Vec<f64>,
    n_cols: usize,
}

impl SeriesMatrix {
    pub fn new(data: Vec<f64>, n_cols: usize) -> Result<Self, Error> {
        if n_cols < 2 {
            return Err(Error::InvalidConfig(alloc::format!(
                "series matrix needs at least 2 columns, got {n_cols}"
            )));
        }
        if data.is_empty() || !data.len().is_multiple_of(n_cols) {
            return Err(Error::InsufficientData {
                required: n_cols,
                available: data.len(),
            });
        }
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                row: bad / n_cols,
                col: bad % n_cols,
            });
        }
        Ok(SeriesMatrix { data, n_cols })
    }

    /// Builds a matrix from equal-length columns.
    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self, Error> {
        let n_cols = cols.len();
        let n_rows = cols.first().map(Vec::len).unwrap_or(0);
        if n_cols < 2 {
            return Err(Error::InvalidConfig(alloc::format!(
                "series matrix needs at least 2 columns, got {n_cols}"
            )));
        }
        if cols.iter().any(|c| c.len() != n_rows) {
            return Err(Error::InvalidConfig(alloc::string::String::from(
                "columns differ in length",
            )));
        }
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in 0..n_rows {
            for col in cols {
                data.push(col[r]);
            }
        }
        SeriesMatrix::new(data, n_cols)
    }

    pub fn n_rows(&self) -> usize {
        self.data.len() / self.n_cols
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    /// Number of sliding windows of length `window`, `n_rows - window + 1`.
    pub fn n_windows(&self, window: usize) -> Result<usize, Error> {
        check_window(window, self.n_rows())?;
        Ok(self.n_rows() - window + 1)
    }

    /// The point cloud of rows `start .. start + window`.
    pub fn window_cloud(&self, start: usize, window: usize) -> Result<PointCloud, Error> {
        check_window(window, self.n_rows())?;
        if start + window > self.n_rows() {
            return Err(Error::InsufficientData {
                required: start + window,
                available: self.n_rows(),
            });
        }
        let slice = &self.data[start * self.n_cols..(start + window) * self.n_cols];
        PointCloud::from_flat(slice.to_vec(), self.n_cols)
    }
}

fn check_window(window: usize, n_rows: usize) -> Result<(), Error> {
    if window < 2 {
        return Err(Error::InvalidConfig(alloc::format!(
            "window must be at least 2, got {window}"
        )));
    }
    if window > n_rows {
        return Err(Error::InsufficientData {
            required: window,
            available: n_rows,
        });
    }
    Ok(())
}

/// Standardises each coordinate of the cloud to zero mean and unit sample
/// standard deviation. A constant coordinate becomes identically zero.
pub fn zscored(cloud: &PointCloud) -> PointCloud {
    #[allow(unused_imports)]
    use num_traits::Float;
    let n = cloud.len();
    let d = cloud.dim();
    let mut out = alloc::vec![0.0; n * d];
    for c in 0..d {
        let mut mean = 0.0;
        for i in 0..n {
            mean += cloud.point(i)[c];
        }
        mean /= n as f64;
        let mut var = 0.0;
        for i in 0..n {
            let e = cloud.point(i)[c] - mean;
            var += e * e;
        }
        let sd = if n > 1 {
            (var / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        for i in 0..n {
            out[i * d + c] = if sd > 0.0 {
                (cloud.point(i)[c] - mean) / sd
            } else {
                0.0
            };
        }
    }
    PointCloud::from_flat(out, d).expect("standardised cloud stays finite")
}

/// Degree 1 landscape norms of one window's point cloud, in the order the
/// norms were requested. The full Rips filtration (no threshold, simplices
/// up to dimension 2) is reduced once and shared by all requested norms.
pub fn window_norms(cloud: &PointCloud, norms: &[Norm]) -> Result<Vec<f64>, Error> {
    let filtration = Filtration::rips(&cloud.distance_matrix(), 2, None)?;
    let diagram = compute_persistence(&filtration)?;
    let landscape = PersistenceLandscape::from_diagram(&diagram, 1);
    Ok(norms.iter().map(|&p| landscape.lp_norm(p)).collect())
}

/// Norm series over all sliding windows: `result[i][j]` is the j-th
/// requested norm of window i. Single threaded; callers that want
/// parallelism fan out over `window_cloud` + `window_norms` themselves.
pub fn sliding_norms(
    matrix: &SeriesMatrix,
    window: usize,
    norms: &[Norm],
    zscore: bool,
) -> Result<Vec<Vec<f64>>, Error> {
    let n_windows = matrix.n_windows(window)?;
    let mut out = Vec::with_capacity(n_windows);
    for start in 0..n_windows {
        let mut cloud = matrix.window_cloud(start, window)?;
        if zscore {
            cloud = zscored(&cloud);
        }
        out.push(window_norms(&cloud, norms)?);
    }
    Ok(out)
}

/// Min-max normalisation onto [0, 1], used when series of different
/// magnitude are drawn on a common axis. Constant input has no range to
/// normalise by and is rejected.
pub fn normalize_minmax(values: &[f64]) -> Result<Vec<f64>, Error> {
    if values.is_empty() {
        return Err(Error::InsufficientData {
            required: 1,
            available: 0,
        });
    }
    if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue { row: bad, col: 0 });
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == min {
        return Err(Error::ConstantSeries);
    }
    Ok(values.iter().map(|v| (v - min) / (max - min)).collect())
}
