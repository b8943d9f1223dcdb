//! Point clouds and their Euclidean distance matrices.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::Error;

/// A finite set of points in `R^dim`, stored row major.
///
/// Every coordinate is finite; constructors reject NaN and infinities so the
/// rest of the crate never has to re-check.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    data: Vec<f64>,
    dim: usize,
}

impl PointCloud {
    /// Builds a cloud from one row per point.
    ///
    /// All rows must share the same non-zero length and at least one point
    /// is required.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, Error> {
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || dim == 0 {
            return Err(Error::InsufficientData {
                required: 1,
                available: 0,
            });
        }
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidConfig(alloc::format!(
                    "point {i} has {} coordinates, expected {dim}",
                    row.len()
                )));
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFiniteCoordinate { point: i });
            }
            data.extend_from_slice(row);
        }
        Ok(PointCloud { data, dim })
    }

    /// Builds a cloud from a flat row-major buffer of `len * dim` values.
    pub fn from_flat(data: Vec<f64>, dim: usize) -> Result<Self, Error> {
        if dim == 0 || data.is_empty() || !data.len().is_multiple_of(dim) {
            return Err(Error::InsufficientData {
                required: dim.max(1),
                available: data.len(),
            });
        }
        if let Some(bad) = data.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate { point: bad / dim });
        }
        Ok(PointCloud { data, dim })
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    /// True when the cloud holds no points. Never true for a constructed
    /// cloud; present to satisfy the usual `len`/`is_empty` pairing.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinates of point `i`.
    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Iterates over points in index order.
    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    /// Flat row-major view of all coordinates.
    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Dense matrix of pairwise Euclidean distances.
    pub fn distance_matrix(&self) -> DistanceMatrix {
        let n = self.len();
        let mut entries = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(self.point(i), self.point(j));
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        DistanceMatrix { n, entries }
    }

    /// Returns the cloud with every coordinate multiplied by `factor`.
    ///
    /// Pairwise distances scale by exactly the same factor, which is what
    /// the diagram and landscape scaling laws are checked against.
    pub fn scaled(&self, factor: f64) -> Result<Self, Error> {
        if !factor.is_finite() || factor <= 0.0 {
            return Err(Error::InvalidScale { factor });
        }
        let data = self.data.iter().map(|c| c * factor).collect();
        Ok(PointCloud {
            data,
            dim: self.dim,
        })
    }

    /// Adds an independent uniform draw from `[-magnitude, magnitude]` to
    /// every coordinate, using a ChaCha12 generator seeded with `seed`.
    ///
    /// Each point moves by at most `magnitude * sqrt(dim)` in Euclidean
    /// norm, so pairwise distances change by at most twice that.
    pub fn perturbed(&self, magnitude: f64, seed: u64) -> Result<Self, Error> {
        if !magnitude.is_finite() || magnitude < 0.0 {
            return Err(Error::InvalidMagnitude { magnitude });
        }
        if magnitude == 0.0 {
            return Ok(self.clone());
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let data = self
            .data
            .iter()
            .map(|c| c + rng.random_range(-magnitude..=magnitude))
            .collect();
        Ok(PointCloud {
            data,
            dim: self.dim,
        })
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    #[allow(unused_imports)]
    use num_traits::Float;
    acc.sqrt()
}

/// Symmetric matrix of pairwise distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a matrix directly from `n * n` row-major entries.
    ///
    /// Intended for tests and for metrics other than Euclidean; entries
    /// must be finite, non-negative, symmetric, with a zero diagonal.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self, Error> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::InsufficientData {
                required: n * n,
                available: entries.len(),
            });
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::InvalidConfig(alloc::format!(
                    "non-zero diagonal at {i}"
                )));
            }
            for j in 0..n {
                let d = entries[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::NonFiniteValue { row: i, col: j });
                }
                if d != entries[j * n + i] {
                    return Err(Error::InvalidConfig(alloc::format!(
                        "asymmetric entries at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(DistanceMatrix { n, entries })
    }

    /// Number of points the matrix describes.
    pub fn len(&self) -> usize {
        self.n
    }

    /// True when the matrix is empty; never true for a constructed matrix.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Distance between points `i` and `j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Largest pairwise distance, zero for a single point.
    pub fn diameter(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }
}
