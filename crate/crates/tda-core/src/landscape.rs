//! Persistence landscapes and their L^p norms.
//!
//! A diagram point (b, d) contributes the tent function rising with slope 1
//! from b, peaking at (b + d) / 2 with height (d - b) / 2, and falling back
//! to zero at d. Level k of the landscape is the pointwise k-th largest
//! tent value. Levels are stored as sorted polylines over their critical
//! points: tent endpoints, tent peaks and tent crossings. Between those
//! abscissas every level is linear, so evaluation, norms and distances are
//! exact up to rounding.

use alloc::vec::Vec;

use crate::error::Error;
use crate::persistence::Diagram;

/// Which L^p norm to take of a landscape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    L1,
    L2,
}

impl Norm {
    /// Lower-case label used in file headers and CLI flags.
    pub fn label(&self) -> &'static str {
        match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
        }
    }
}

impl core::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "l1" | "L1" => Ok(Norm::L1),
            "l2" | "L2" => Ok(Norm::L2),
            other => Err(Error::InvalidConfig(alloc::format!(
                "unknown norm '{other}', expected l1 or l2"
            ))),
        }
    }
}

#[derive(Clone, Copy)]
struct Tent {
    b: f64,
    d: f64,
}

impl Tent {
    fn mid(&self) -> f64 {
        (self.b + self.d) / 2.0
    }

    fn eval(&self, x: f64) -> f64 {
        let v = (x - self.b).min(self.d - x);
        v.max(0.0)
    }
}

/// A persistence landscape: level polylines `levels[k]`, zero based, each a
/// sorted list of (x, y) vertices with y >= 0. Outside its vertex range a
/// level is identically zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceLandscape {
    levels: Vec<Vec<(f64, f64)>>,
}

impl PersistenceLandscape {
    /// Landscape of the finite degree `dim` points of a diagram.
    pub fn from_diagram(diagram: &Diagram, dim: usize) -> Self {
        let intervals: Vec<(f64, f64)> = diagram
            .points_in_dim(dim)
            .filter(|p| !p.essential)
            .map(|p| (p.birth, p.death))
            .collect();
        Self::from_intervals(&intervals)
    }

    /// Landscape of explicit (birth, death) intervals. Intervals with
    /// death <= birth contribute nothing and are skipped.
    pub fn from_intervals(intervals: &[(f64, f64)]) -> Self {
        let tents: Vec<Tent> = intervals
            .iter()
            .filter(|(b, d)| d > b)
            .map(|&(b, d)| Tent { b, d })
            .collect();
        if tents.is_empty() {
            return PersistenceLandscape::default();
        }

        // Critical abscissas: endpoints, peaks, and crossings of one
        // tent's rising edge with another's falling edge.
        let mut xs = Vec::with_capacity(3 * tents.len());
        for t in &tents {
            xs.push(t.b);
            xs.push(t.mid());
            xs.push(t.d);
        }
        for up in &tents {
            for down in &tents {
                let x = (up.b + down.d) / 2.0;
                if x >= up.b && x <= up.mid() && x >= down.mid() && x <= down.d {
                    xs.push(x);
                }
            }
        }
        xs.sort_unstable_by(f64::total_cmp);
        xs.dedup();

        // Sorted tent values per abscissa; the deepest positive stack
        // determines the number of levels.
        let mut columns: Vec<Vec<f64>> = Vec::with_capacity(xs.len());
        let mut n_levels = 0;
        for &x in &xs {
            let mut vals: Vec<f64> = tents
                .iter()
                .map(|t| t.eval(x))
                .filter(|v| *v > 0.0)
                .collect();
            vals.sort_unstable_by(|a, b| b.total_cmp(a));
            n_levels = n_levels.max(vals.len());
            columns.push(vals);
        }

        let levels = (0..n_levels)
            .map(|k| {
                let pts: Vec<(f64, f64)> = xs
                    .iter()
                    .zip(&columns)
                    .map(|(&x, col)| (x, col.get(k).copied().unwrap_or(0.0)))
                    .collect();
                simplify(pts)
            })
            .collect();
        PersistenceLandscape { levels }
    }

    /// Number of non-zero levels.
    pub fn levels(&self) -> usize {
        self.levels.len()
    }

    /// Vertices of level `k` (zero based, level 0 is the pointwise max).
    pub fn level(&self, k: usize) -> &[(f64, f64)] {
        self.levels.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Value of level `k` at `x`; zero outside the level's support and for
    /// levels beyond the last.
    pub fn evaluate(&self, k: usize, x: f64) -> f64 {
        let Some(pts) = self.levels.get(k) else {
            return 0.0;
        };
        evaluate_polyline(pts, x)
    }

    /// The landscape norm: sum the level integrals of |y|^p, then take the
    /// p-th root. Computed in closed form per linear segment.
    pub fn lp_norm(&self, norm: Norm) -> f64 {
        #[allow(unused_imports)]
        use num_traits::Float;
        let mut acc = 0.0;
        for pts in &self.levels {
            for w in pts.windows(2) {
                let (x0, y0) = w[0];
                let (x1, y1) = w[1];
                let h = x1 - x0;
                acc += match norm {
                    Norm::L1 => h * (y0 + y1) / 2.0,
                    Norm::L2 => h * (y0 * y0 + y0 * y1 + y1 * y1) / 3.0,
                };
            }
        }
        match norm {
            Norm::L1 => acc,
            Norm::L2 => acc.sqrt(),
        }
    }

    /// Supremum over all levels and abscissas of |a - b|. The difference
    /// of two polylines is piecewise linear with breakpoints among the two
    /// vertex sets, so scanning those abscissas is exact.
    pub fn sup_distance(a: &Self, b: &Self) -> f64 {
        let n = a.levels.len().max(b.levels.len());
        let mut best = 0.0_f64;
        for k in 0..n {
            for &(x, _) in a.level(k).iter().chain(b.level(k)) {
                let diff = (a.evaluate(k, x) - b.evaluate(k, x)).abs();
                best = best.max(diff);
            }
        }
        best
    }
}

fn evaluate_polyline(pts: &[(f64, f64)], x: f64) -> f64 {
    if pts.is_empty() || x < pts[0].0 || x > pts[pts.len() - 1].0 {
        return 0.0;
    }
    let i = pts.partition_point(|&(px, _)| px <= x);
    if i == 0 {
        return pts[0].1;
    }
    if i == pts.len() {
        return pts[pts.len() - 1].1;
    }
    let (x0, y0) = pts[i - 1];
    let (x1, y1) = pts[i];
    if x == x0 {
        return y0;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Removes exactly collinear interior vertices and squeezes leading and
/// trailing zero runs down to a single zero vertex on each side.
fn simplify(pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for p in pts {
        while out.len() >= 2 {
            let a = out[out.len() - 2];
            let b = out[out.len() - 1];
            let collinear = (b.1 - a.1) * (p.0 - a.0) == (p.1 - a.1) * (b.0 - a.0);
            if collinear {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    while out.len() >= 2 && out[0].1 == 0.0 && out[1].1 == 0.0 {
        out.remove(0);
    }
    while out.len() >= 2 && out[out.len() - 1].1 == 0.0 && out[out.len() - 2].1 == 0.0 {
        out.pop();
    }
    out
}
