//! Boundary matrix reduction over GF(2) with clearing.
//!
//! Columns are reduced per dimension: triangle columns first, which pairs
//! edges with the triangles that kill their cycles, then the remaining edge
//! columns, which pair vertices with the edges that merge components. An
//! edge used as a pivot in the triangle pass cannot create a cycle of its
//! own, so its column is cleared and never reduced.

use alloc::vec::Vec;

use crate::error::Error;
use crate::persistence::filtration::Filtration;

/// One birth-death pair of a persistence diagram.
///
/// `essential` marks classes that never die within the filtration; their
/// `death` is reported as the filtration's `max_value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramPoint {
    pub birth: f64,
    pub death: f64,
    pub dim: usize,
    pub essential: bool,
}

impl DiagramPoint {
    /// Lifetime of the class.
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

/// A persistence diagram: multiset of points, sorted by dimension, birth,
/// death for reproducible output.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagram {
    points: Vec<DiagramPoint>,
}

impl Diagram {
    pub fn from_points(mut points: Vec<DiagramPoint>) -> Self {
        sort_points(&mut points);
        Diagram { points }
    }

    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    /// Points of one homological dimension.
    pub fn points_in_dim(&self, dim: usize) -> impl Iterator<Item = &DiagramPoint> {
        self.points.iter().filter(move |p| p.dim == dim)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn sort_points(points: &mut [DiagramPoint]) {
    points.sort_unstable_by(|a, b| {
        a.dim
            .cmp(&b.dim)
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
            .then(a.essential.cmp(&b.essential))
    });
}

/// Symmetric difference of two ascending index lists; entries present in
/// both cancel, which is addition of columns over GF(2).
fn xor_columns(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Reduces one boundary column against the stored pivot columns. Returns
/// the reduced column, empty when the chain is a cycle.
fn reduce_column(mut col: Vec<u32>, stored: &[Option<Vec<u32>>]) -> Vec<u32> {
    while let Some(&pivot) = col.last() {
        match &stored[pivot as usize] {
            Some(other) => col = xor_columns(&col, other),
            None => break,
        }
    }
    col
}

/// Computes the persistence diagram of a sorted filtration.
///
/// Degree 0 and degree 1 classes are reported. Finite pairs with zero
/// persistence are dropped; essential classes are always kept, with death
/// set to the filtration's `max_value`. Unsorted input, a coface listed
/// before one of its faces, a missing face or duplicate simplices are
/// internal consistency errors.
pub fn compute_persistence(filtration: &Filtration) -> Result<Diagram, Error> {
    filtration.check_sorted()?;
    let simplices = filtration.simplices();
    let n = filtration.n_vertices();
    let n_cols = simplices.len();

    // Column index of every vertex and edge, for boundary lookups.
    const NONE: u32 = u32::MAX;
    let mut vertex_col = alloc::vec![NONE; n];
    let mut edge_col = alloc::vec![NONE; n * n];
    for (c, s) in simplices.iter().enumerate() {
        let vs = s.vertices();
        if vs.iter().any(|&v| v as usize >= n) {
            return Err(Error::InconsistentFiltration("vertex id out of range"));
        }
        match s.dim() {
            0 => {
                let v = vs[0] as usize;
                if vertex_col[v] != NONE {
                    return Err(Error::InconsistentFiltration("duplicate vertex"));
                }
                vertex_col[v] = c as u32;
            }
            1 => {
                let slot = vs[0] as usize * n + vs[1] as usize;
                if edge_col[slot] != NONE {
                    return Err(Error::InconsistentFiltration("duplicate edge"));
                }
                edge_col[slot] = c as u32;
            }
            _ => {}
        }
    }

    let order_ok = |face: u32, coface: usize| -> Result<u32, Error> {
        if face == NONE {
            Err(Error::InconsistentFiltration("missing face"))
        } else if face as usize >= coface {
            Err(Error::InconsistentFiltration("coface precedes face"))
        } else {
            Ok(face)
        }
    };

    let mut points = Vec::new();
    let mut stored: Vec<Option<Vec<u32>>> = alloc::vec![None; n_cols];
    let mut cleared = alloc::vec![false; n_cols];

    // Triangle columns: pairs (edge, triangle) give degree 1 classes.
    for (c, s) in simplices.iter().enumerate() {
        if s.dim() != 2 {
            continue;
        }
        let vs = s.vertices();
        let mut boundary = [
            order_ok(edge_col[vs[0] as usize * n + vs[1] as usize], c)?,
            order_ok(edge_col[vs[0] as usize * n + vs[2] as usize], c)?,
            order_ok(edge_col[vs[1] as usize * n + vs[2] as usize], c)?,
        ];
        boundary.sort_unstable();
        let col = reduce_column(boundary.to_vec(), &stored);
        if let Some(&pivot) = col.last() {
            let birth = simplices[pivot as usize].appearance();
            let death = s.appearance();
            cleared[pivot as usize] = true;
            stored[pivot as usize] = Some(col);
            if death > birth {
                points.push(DiagramPoint {
                    birth,
                    death,
                    dim: 1,
                    essential: false,
                });
            }
        }
        // An empty column creates a degree 2 class, outside this crate's
        // range of reported dimensions.
    }

    // Edge columns not cleared above: pairs (vertex, edge) give degree 0
    // classes, cycles that no triangle ever fills give essential degree 1.
    let mut stored0: Vec<Option<Vec<u32>>> = alloc::vec![None; n_cols];
    let mut vertex_paired = alloc::vec![false; n_cols];
    for (c, s) in simplices.iter().enumerate() {
        if s.dim() != 1 || cleared[c] {
            continue;
        }
        let vs = s.vertices();
        let mut boundary = [
            order_ok(vertex_col[vs[0] as usize], c)?,
            order_ok(vertex_col[vs[1] as usize], c)?,
        ];
        boundary.sort_unstable();
        let col = reduce_column(boundary.to_vec(), &stored0);
        match col.last() {
            Some(&pivot) => {
                let birth = simplices[pivot as usize].appearance();
                let death = s.appearance();
                vertex_paired[pivot as usize] = true;
                stored0[pivot as usize] = Some(col);
                if death > birth {
                    points.push(DiagramPoint {
                        birth,
                        death,
                        dim: 0,
                        essential: false,
                    });
                }
            }
            None => {
                points.push(DiagramPoint {
                    birth: s.appearance(),
                    death: filtration.max_value(),
                    dim: 1,
                    essential: true,
                });
            }
        }
    }

    // Vertices never paired with an edge are essential components.
    for (c, s) in simplices.iter().enumerate() {
        if s.dim() == 0 && !vertex_paired[c] {
            points.push(DiagramPoint {
                birth: s.appearance(),
                death: filtration.max_value(),
                dim: 0,
                essential: true,
            });
        }
    }

    sort_points(&mut points);
    Ok(Diagram { points })
}
