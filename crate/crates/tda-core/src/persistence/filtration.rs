//! Vietoris-Rips filtration construction.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::Error;
use crate::geometry::DistanceMatrix;

/// One simplex of dimension 0, 1 or 2 with its appearance value.
///
/// Vertices are sorted ascending; unused slots are padded with `u32::MAX`
/// so that lexicographic comparison of the array orders lower dimensional
/// prefixes consistently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiltrationSimplex {
    verts: [u32; 3],
    dim: u8,
    appearance: f64,
}

impl FiltrationSimplex {
    pub fn vertex(v: u32) -> Self {
        FiltrationSimplex {
            verts: [v, u32::MAX, u32::MAX],
            dim: 0,
            appearance: 0.0,
        }
    }

    pub fn edge(mut a: u32, mut b: u32, appearance: f64) -> Self {
        if a > b {
            core::mem::swap(&mut a, &mut b);
        }
        FiltrationSimplex {
            verts: [a, b, u32::MAX],
            dim: 1,
            appearance,
        }
    }

    pub fn triangle(a: u32, b: u32, c: u32, appearance: f64) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable();
        FiltrationSimplex {
            verts: v,
            dim: 2,
            appearance,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn appearance(&self) -> f64 {
        self.appearance
    }

    /// Vertex ids, `dim + 1` of them.
    pub fn vertices(&self) -> &[u32] {
        &self.verts[..=self.dim as usize]
    }

    /// Total order of the filtration: appearance, then dimension, then
    /// lexicographic vertex ids. Faces always precede cofaces under this
    /// order because a face never appears later and has lower dimension.
    pub fn order(&self, other: &Self) -> Ordering {
        self.appearance
            .total_cmp(&other.appearance)
            .then(self.dim.cmp(&other.dim))
            .then(self.verts.cmp(&other.verts))
    }
}

/// A sorted list of simplices forming a filtration, plus the data the
/// reduction needs to assign deaths to classes that never die.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    simplices: Vec<FiltrationSimplex>,
    n_vertices: usize,
    max_value: f64,
}

impl Filtration {
    /// Builds the Vietoris-Rips filtration of a distance matrix.
    ///
    /// Vertices appear at 0. An edge appears at its distance; with a
    /// threshold only edges strictly below it are included, so threshold 0
    /// keeps vertices alone. Without a threshold every edge is included.
    /// With `max_dim == 2`, a triangle appears at the largest of its three
    /// edge distances; `max_dim == 1` stops at edges, any other value is
    /// rejected. `max_value` records the diameter of the input regardless
    /// of the threshold; it caps the deaths of essential classes.
    pub fn rips(
        dm: &DistanceMatrix,
        max_dim: usize,
        threshold: Option<f64>,
    ) -> Result<Self, Error> {
        if !(1..=2).contains(&max_dim) {
            return Err(Error::UnsupportedDimension { requested: max_dim });
        }
        if let Some(t) = threshold {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidThreshold { threshold: t });
            }
        }
        let n = dm.len();
        let keep = |d: f64| threshold.is_none_or(|t| d < t);
        let mut simplices = Vec::with_capacity(n + n * (n - 1) / 2);
        for v in 0..n {
            simplices.push(FiltrationSimplex::vertex(v as u32));
        }
        let mut edge_in = alloc::vec![false; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = dm.get(i, j);
                if keep(d) {
                    edge_in[i * n + j] = true;
                    simplices.push(FiltrationSimplex::edge(i as u32, j as u32, d));
                }
            }
        }
        if max_dim == 2 {
            for i in 0..n {
                for j in (i + 1)..n {
                    if !edge_in[i * n + j] {
                        continue;
                    }
                    let dij = dm.get(i, j);
                    for k in (j + 1)..n {
                        if edge_in[i * n + k] && edge_in[j * n + k] {
                            let app = dij.max(dm.get(i, k)).max(dm.get(j, k));
                            simplices.push(FiltrationSimplex::triangle(
                                i as u32, j as u32, k as u32, app,
                            ));
                        }
                    }
                }
            }
        }
        simplices.sort_unstable_by(|a, b| a.order(b));
        Ok(Filtration {
            simplices,
            n_vertices: n,
            max_value: dm.diameter(),
        })
    }

    /// Builds a filtration from explicit simplices, for tests and for
    /// diagram inputs that do not come from a metric. Sorts the input.
    pub fn from_simplices(
        mut simplices: Vec<FiltrationSimplex>,
        n_vertices: usize,
        max_value: f64,
    ) -> Self {
        simplices.sort_unstable_by(|a, b| a.order(b));
        Filtration {
            simplices,
            n_vertices,
            max_value,
        }
    }

    /// Test seam: builds the structure exactly as given, without sorting.
    #[cfg(test)]
    pub(crate) fn from_parts_unchecked(
        simplices: Vec<FiltrationSimplex>,
        n_vertices: usize,
        max_value: f64,
    ) -> Self {
        Filtration {
            simplices,
            n_vertices,
            max_value,
        }
    }

    pub fn simplices(&self) -> &[FiltrationSimplex] {
        &self.simplices
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Death value assigned to essential classes.
    pub fn max_value(&self) -> f64 {
        self.max_value
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Verifies the sort order; the reduction refuses unsorted input.
    pub(crate) fn check_sorted(&self) -> Result<(), Error> {
        for pair in self.simplices.windows(2) {
            if pair[0].order(&pair[1]) == Ordering::Greater {
                return Err(Error::InconsistentFiltration("simplices out of order"));
            }
        }
        Ok(())
    }
}
