//! Independent persistence oracle for small clouds (at most 8 points).
//!
//! Shares no code with the library's reduction: pairs come from tracking
//! ranks of inclusion-induced maps between homology groups over GF(2),
//! using bitmask linear algebra. For filtration values v_a < v_b, the
//! number of classes born at v_a and dying at v_b is
//!
//!   mu(a, b) = [beta(a, b-1) - beta(a, b)] - [beta(a-1, b-1) - beta(a-1, b)]
//!
//! where beta(i, j) is the rank of H(K_i) -> H(K_j), computed as
//! dim Z(K_i) - dim(Z(K_i) ∩ B(K_j)). Classes surviving the final complex
//! are essential. Values are taken per distinct filtration value, so pairs
//! with equal birth and death never appear, matching the library's
//! dropping of zero-persistence pairs.

use tda_core::geometry::DistanceMatrix;

const MAX_POINTS: usize = 8;

/// Rank of a set of GF(2) columns.
fn gf2_rank(cols: impl IntoIterator<Item = u64>) -> usize {
    let mut pivot = [0u64; 64];
    let mut rank = 0;
    for mut v in cols {
        while v != 0 {
            let lead = 63 - v.leading_zeros() as usize;
            if pivot[lead] == 0 {
                pivot[lead] = v;
                rank += 1;
                break;
            }
            v ^= pivot[lead];
        }
    }
    rank
}

/// Basis of the kernel of a GF(2) matrix given as (column, tag) pairs; the
/// tag carries the combination of input columns a reduced column stands
/// for, so fully cancelled columns yield kernel vectors in tag space.
fn gf2_kernel(cols: &[(u64, u64)]) -> Vec<u64> {
    let mut pivot = [(0u64, 0u64); 64];
    let mut kernel = Vec::new();
    for &(col, tag) in cols {
        let (mut c, mut t) = (col, tag);
        loop {
            if c == 0 {
                kernel.push(t);
                break;
            }
            let lead = 63 - c.leading_zeros() as usize;
            if pivot[lead].0 == 0 {
                pivot[lead] = (c, t);
                break;
            }
            c ^= pivot[lead].0;
            t ^= pivot[lead].1;
        }
    }
    kernel
}

/// Persistence pairs as plain values: finite (birth, death, dim) and
/// essential (birth, dim).
#[derive(Debug, Clone, PartialEq)]
pub struct OraclePairs {
    pub finite: Vec<(f64, f64, usize)>,
    pub essential: Vec<(f64, usize)>,
}

impl OraclePairs {
    pub fn sorted(mut self) -> Self {
        self.finite.sort_by(|a, b| {
            a.2.cmp(&b.2)
                .then(a.0.total_cmp(&b.0))
                .then(a.1.total_cmp(&b.1))
        });
        self.essential
            .sort_by(|a, b| a.1.cmp(&b.1).then(a.0.total_cmp(&b.0)));
        self
    }
}

/// Persistence of the full Rips filtration (vertices, all edges, all
/// triangles) of a distance matrix, dimensions 0 and 1.
pub fn rips_persistence(dm: &DistanceMatrix) -> OraclePairs {
    let n = dm.len();
    assert!(
        (1..=MAX_POINTS).contains(&n),
        "oracle handles 1..=8 points, got {n}"
    );

    // Edges in lexicographic vertex order; triangles appear at their
    // largest pairwise distance.
    let mut edge_index = [[usize::MAX; MAX_POINTS]; MAX_POINTS];
    let mut edges: Vec<(f64, u64)> = Vec::new(); // (value, vertex mask)
    for (a, row) in edge_index.iter_mut().enumerate().take(n) {
        for (b, slot) in row.iter_mut().enumerate().take(n).skip(a + 1) {
            *slot = edges.len();
            edges.push((dm.get(a, b), 1 << a | 1 << b));
        }
    }
    let mut triangles: Vec<(f64, u64)> = Vec::new(); // (value, edge mask)
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                let value = dm.get(a, b).max(dm.get(a, c)).max(dm.get(b, c));
                let mask = 1u64 << edge_index[a][b] | 1 << edge_index[a][c] | 1 << edge_index[b][c];
                triangles.push((value, mask));
            }
        }
    }

    // Distinct filtration values; vertices enter at 0, and every triangle
    // value is one of its edge values.
    let mut values: Vec<f64> = vec![0.0];
    values.extend(edges.iter().map(|e| e.0));
    values.sort_by(f64::total_cmp);
    values.dedup_by(|a, b| a == b);
    let m = values.len();

    // Per value index: rank of the vertex boundaries of present edges, a
    // cycle basis (kernel of the edge boundary map, tagged by edge masks),
    // and the raw triangle boundaries present.
    let mut rank_d1 = vec![0usize; m];
    let mut cycles: Vec<Vec<u64>> = Vec::with_capacity(m);
    let mut tri_cols: Vec<Vec<u64>> = Vec::with_capacity(m);
    let mut rank_d2 = vec![0usize; m];
    for (t, &v) in values.iter().enumerate() {
        let present: Vec<(u64, u64)> = edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.0 <= v)
            .map(|(i, e)| (e.1, 1u64 << i))
            .collect();
        rank_d1[t] = gf2_rank(present.iter().map(|p| p.0));
        cycles.push(gf2_kernel(&present));
        let tris: Vec<u64> = triangles.iter().filter(|t| t.0 <= v).map(|t| t.1).collect();
        rank_d2[t] = gf2_rank(tris.iter().copied());
        tri_cols.push(tris);
    }

    let mut finite = Vec::new();
    let mut essential = Vec::new();

    // Dimension 0: every class is born at 0; deaths happen where the rank
    // of the edge boundary map grows. Survivors are the final components.
    for b in 1..m {
        for _ in 0..(rank_d1[b] - rank_d1[b - 1]) {
            finite.push((0.0, values[b], 0));
        }
    }
    for _ in 0..(n - rank_d1[m - 1]) {
        essential.push((0.0, 0));
    }

    // Dimension 1: beta(i, j) = rank(Z_i ∪ B_j) - rank(B_j).
    let beta = |i: usize, j: usize| -> usize {
        let all = cycles[i].iter().copied().chain(tri_cols[j].iter().copied());
        gf2_rank(all) - rank_d2[j]
    };
    let mut beta_table = vec![vec![0usize; m]; m];
    for (i, row) in beta_table.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate().skip(i) {
            *slot = beta(i, j);
        }
    }
    for a in 0..m {
        for b in (a + 1)..m {
            let newer = beta_table[a][b - 1] - beta_table[a][b];
            let older = if a > 0 {
                beta_table[a - 1][b - 1] - beta_table[a - 1][b]
            } else {
                0
            };
            for _ in 0..(newer - older) {
                finite.push((values[a], values[b], 1));
            }
        }
        let survive = beta_table[a][m - 1];
        let survive_older = if a > 0 { beta_table[a - 1][m - 1] } else { 0 };
        for _ in 0..(survive - survive_older) {
            essential.push((values[a], 1));
        }
    }

    OraclePairs { finite, essential }.sorted()
}
