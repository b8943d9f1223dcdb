//! Bottleneck distance between persistence diagrams.
//!
//! The distance is the smallest `eps` admitting a perfect matching between
//! the two diagrams where a finite point may match a finite point of the
//! other diagram (sup-norm cost) or its own diagonal projection (half its
//! persistence), and essential points match essential points only. The
//! exact value is found by binary search over the finitely many candidate
//! costs, testing feasibility with an augmenting path matching.

use alloc::vec::Vec;

use crate::persistence::reduction::Diagram;

#[derive(Clone, Copy)]
struct P {
    birth: f64,
    death: f64,
}

fn sup_cost(a: P, b: P) -> f64 {
    let db = (a.birth - b.birth).abs();
    let dd = (a.death - b.death).abs();
    db.max(dd)
}

fn diag_cost(p: P) -> f64 {
    (p.death - p.birth) / 2.0
}

struct Instance {
    a_fin: Vec<P>,
    b_fin: Vec<P>,
    a_ess: Vec<P>,
    b_ess: Vec<P>,
}

impl Instance {
    fn left_len(&self) -> usize {
        self.a_fin.len() + self.b_fin.len() + self.a_ess.len()
    }

    fn right_len(&self) -> usize {
        self.b_fin.len() + self.a_fin.len() + self.b_ess.len()
    }

    /// Edge test for the matching graph at tolerance `eps`. Left side is
    /// `a_fin ++ diagonal slots for b_fin ++ a_ess`, right side is
    /// `b_fin ++ diagonal slots for a_fin ++ b_ess`.
    fn allowed(&self, l: usize, r: usize, eps: f64) -> bool {
        let (ma, nb) = (self.a_fin.len(), self.b_fin.len());
        if l < ma {
            if r < nb {
                sup_cost(self.a_fin[l], self.b_fin[r]) <= eps
            } else if r < nb + ma {
                diag_cost(self.a_fin[l]) <= eps
            } else {
                false
            }
        } else if l < ma + nb {
            if r < nb {
                diag_cost(self.b_fin[r]) <= eps
            } else {
                r < nb + ma
            }
        } else if r >= nb + ma {
            sup_cost(self.a_ess[l - ma - nb], self.b_ess[r - nb - ma]) <= eps
        } else {
            false
        }
    }

    fn augment(&self, l: usize, eps: f64, seen: &mut [bool], match_r: &mut [usize]) -> bool {
        for r in 0..self.right_len() {
            if seen[r] || !self.allowed(l, r, eps) {
                continue;
            }
            seen[r] = true;
            if match_r[r] == usize::MAX || self.augment(match_r[r], eps, seen, match_r) {
                match_r[r] = l;
                return true;
            }
        }
        false
    }

    fn feasible(&self, eps: f64) -> bool {
        let mut match_r = alloc::vec![usize::MAX; self.right_len()];
        for l in 0..self.left_len() {
            let mut seen = alloc::vec![false; self.right_len()];
            if !self.augment(l, eps, &mut seen, &mut match_r) {
                return false;
            }
        }
        true
    }
}

/// Bottleneck distance between the degree `dim` points of two diagrams.
///
/// Finite points may be matched to the diagonal; essential points must be
/// matched to essential points, so diagrams with different essential
/// counts in this degree are infinitely far apart.
pub fn bottleneck_distance(a: &Diagram, b: &Diagram, dim: usize) -> f64 {
    let split = |d: &Diagram, essential: bool| -> Vec<P> {
        d.points_in_dim(dim)
            .filter(|p| p.essential == essential)
            .map(|p| P {
                birth: p.birth,
                death: p.death,
            })
            .collect()
    };
    let inst = Instance {
        a_fin: split(a, false),
        b_fin: split(b, false),
        a_ess: split(a, true),
        b_ess: split(b, true),
    };
    if inst.a_ess.len() != inst.b_ess.len() {
        return f64::INFINITY;
    }
    if inst.left_len() == 0 {
        return 0.0;
    }

    // Every optimal eps is one of the pairwise costs or a diagonal cost.
    let mut candidates = Vec::new();
    candidates.push(0.0);
    for &p in &inst.a_fin {
        candidates.push(diag_cost(p));
        for &q in &inst.b_fin {
            candidates.push(sup_cost(p, q));
        }
    }
    for &q in &inst.b_fin {
        candidates.push(diag_cost(q));
    }
    for &p in &inst.a_ess {
        for &q in &inst.b_ess {
            candidates.push(sup_cost(p, q));
        }
    }
    candidates.sort_unstable_by(f64::total_cmp);
    candidates.dedup();

    // The largest candidate always admits a perfect matching; find the
    // smallest one that does.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if inst.feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}
