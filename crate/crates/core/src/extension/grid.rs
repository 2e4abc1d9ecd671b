//! Brute-force verification oracle for one-dimensional inner problems.
//!
//! Deliberately shares nothing with the reduction beyond the residual
//! evaluator. The gradient (and, for the Lipschitz-Hessian family, the
//! Hessian entry) of the new point is gridded and refined around the best
//! cells until the step falls below `min_step`; at every grid point the new
//! value is found by golden section. Every residual is affine in that value,
//! so the worst violation is convex piecewise linear along it and the line
//! search is exact, which keeps thin diagonal valleys of the joint problem
//! resolvable.

use alloc::vec::Vec;
use libm::sqrt;

use super::{ExtensionGap, Method};
use crate::constraints::{check_pair, eval_points};
use crate::data::{Dataset, Point};
use crate::family::ConstraintFamily;
use crate::{Error, Result};

/// Grid resolution and bounds; zero half-widths mean "derive from the data".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridOptions {
    pub resolution: usize,
    pub min_step: f64,
    pub keep: usize,
    pub expansions: usize,
    pub g_half_width: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            resolution: 201,
            min_step: 1e-6,
            keep: 8,
            expansions: 4,
            g_half_width: 0.0,
        }
    }
}

/// Cap on same-scale refinement moves per expansion round.
const MAX_SLIDES: usize = 400;

struct Objective<'a> {
    family: &'a ConstraintFamily,
    s: &'a Dataset,
    x: f64,
    f_range: (f64, f64),
}

impl Objective<'_> {
    /// Worst violation at the full candidate `(f, g[, h])`.
    fn worst(&self, f: f64, gh: &[f64]) -> f64 {
        let (xs, gs) = ([self.x], [gh[0]]);
        let new = Point {
            x: &xs,
            f,
            g: &gs,
            hess: gh.get(1).copied(),
        };
        let mut worst = f64::NEG_INFINITY;
        for t in self.s {
            let a = t.view();
            for r in [
                eval_points(self.family, new, a),
                eval_points(self.family, a, new),
            ] {
                worst = worst.max(-r.min());
            }
        }
        worst
    }

    /// `min_f worst(f, gh)` by golden section over `f_range`.
    fn at(&self, gh: &[f64]) -> (f64, f64) {
        let r = 0.5 * (sqrt(5.0) - 1.0);
        let (mut a, mut b) = self.f_range;
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let (mut fc, mut fd) = (self.worst(c, gh), self.worst(d, gh));
        for _ in 0..200 {
            if b - a <= 1e-14 * (1.0 + a.abs() + b.abs()) {
                break;
            }
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = self.worst(c, gh);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = self.worst(d, gh);
            }
        }
        if fc <= fd {
            (fc, c)
        } else {
            (fd, d)
        }
    }
}

type Box2 = ([f64; 2], [f64; 2]);

/// `(g[, h], value, f)` of a grid point.
type Cand = ([f64; 2], f64, f64);

/// Evaluates a regular grid of `n` points per axis on `[lo, hi]` and returns
/// the `keep` best points.
fn scan(obj: &Objective<'_>, (lo, hi): Box2, dims: usize, n: usize, keep: usize) -> Vec<Cand> {
    let step: Vec<f64> = (0..dims)
        .map(|k| (hi[k] - lo[k]) / (n - 1) as f64)
        .collect();
    let total = n.pow(dims as u32);
    let mut best: Vec<Cand> = Vec::with_capacity(keep + 1);
    let mut p = [0.0; 2];
    for idx in 0..total {
        let mut rest = idx;
        for k in 0..dims {
            p[k] = lo[k] + step[k] * (rest % n) as f64;
            rest /= n;
        }
        let (v, f) = obj.at(&p[..dims]);
        if best.len() < keep || v < best[best.len() - 1].1 {
            let pos = best.partition_point(|e| e.1 <= v);
            best.insert(pos, (p, v, f));
            best.truncate(keep);
        }
    }
    best
}

/// Full `(f, g[, h])` brute-force minimax at a scalar probe point.
pub fn grid_oracle_gap(
    s: &Dataset,
    x: f64,
    family: &ConstraintFamily,
    opts: &GridOptions,
) -> Result<ExtensionGap> {
    if s.dim() != 1 {
        return Err(Error::UnsupportedDimension {
            dim: s.dim(),
            reason: "the grid oracle is one-dimensional",
        });
    }
    let lh = matches!(family, ConstraintFamily::LipschitzHessian { .. });
    for t in s {
        check_pair(family, t.view(), t.view())?;
    }
    let dims = if lh { 2 } else { 1 };

    let fmin = s.iter().map(|t| t.f).fold(f64::INFINITY, f64::min);
    let fmax = s.iter().map(|t| t.f).fold(f64::NEG_INFINITY, f64::max);
    let span = (fmax - fmin).max(1.0);
    let gmax = s.iter().map(|t| t.g[0].abs()).fold(1.0, f64::max);
    let hmax = s
        .iter()
        .filter_map(|t| t.hess)
        .map(f64::abs)
        .fold(1.0, f64::max);
    let f_center = 0.5 * (fmin + fmax);
    let mut f_half = 0.5 * (fmax - fmin) + 10.0 * span;
    let mut half = [
        if opts.g_half_width > 0.0 {
            opts.g_half_width
        } else {
            10.0 * gmax
        },
        10.0 * hmax,
    ];
    let n = if lh {
        opts.resolution.min(61)
    } else {
        opts.resolution
    };
    // refinement box of `reach` cells around each candidate, `fine` points per axis
    let (reach, fine) = if lh { (3.0, 13) } else { (5.0, 41) };

    for round in 0..=opts.expansions {
        let obj = Objective {
            family,
            s,
            x,
            f_range: (f_center - f_half, f_center + f_half),
        };
        let lo = [-half[0], -half[1]];
        let hi = [half[0], half[1]];
        let mut step: Vec<f64> = (0..dims)
            .map(|k| (hi[k] - lo[k]) / (n - 1) as f64)
            .collect();
        let mut cands = scan(&obj, (lo, hi), dims, n, opts.keep);
        let mut slides = 0;
        while step.iter().any(|&h| h > opts.min_step) {
            let mut next: Vec<Cand> = Vec::new();
            for (p, _, _) in &cands {
                let mut blo = [0.0; 2];
                let mut bhi = [0.0; 2];
                for k in 0..dims {
                    blo[k] = (p[k] - reach * step[k]).max(lo[k]);
                    bhi[k] = (p[k] + reach * step[k]).min(hi[k]);
                }
                next.extend(scan(&obj, (blo, bhi), dims, fine, opts.keep));
            }
            next.extend(cands.iter().copied());
            next.sort_by(|a, b| a.1.total_cmp(&b.1));
            next.dedup_by(|a, b| a.0 == b.0);
            next.truncate(opts.keep);
            // a best point on the rim of every box means the minimum lies
            // further out; slide at this scale before shrinking
            let q = next[0].0;
            let on_rim = cands.iter().all(|(p, _, _)| {
                (0..dims).any(|k| {
                    (q[k] - p[k]).abs() >= (reach - 1e-9) * step[k] && q[k] > lo[k] && q[k] < hi[k]
                })
            });
            cands = next;
            if on_rim && slides < MAX_SLIDES {
                slides += 1;
            } else {
                step.iter_mut()
                    .for_each(|h| *h *= 2.0 * reach / (fine - 1) as f64);
            }
        }
        let (p, tau, f) = cands[0];
        let on_edge = (0..dims).any(|k| {
            let eps = 1e-9 * half[k];
            p[k] - lo[k] <= eps || hi[k] - p[k] <= eps
        }) || (f - f_center).abs() >= (1.0 - 1e-9) * f_half;
        if !on_edge || tau <= 0.0 {
            return Ok(ExtensionGap {
                tau_star: tau,
                witness_f: f,
                witness_g: alloc::vec![p[0]],
                witness_hess: if lh { Some(p[1]) } else { None },
                method: Method::GridOracle,
            });
        }
        if round < opts.expansions {
            half.iter_mut().for_each(|h| *h *= 2.0);
            f_half *= 2.0;
        }
    }
    Err(Error::UnboundedWitness)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_data_is_extensible() {
        let s = Dataset::from_scalars(&[(0.0, 0.0, -1.0), (1.0, 0.0, 1.0)]).unwrap();
        let gap =
            grid_oracle_gap(&s, 0.4, &ConstraintFamily::Convex, &GridOptions::default()).unwrap();
        assert!(gap.tau_star <= 1e-6);
    }

    #[test]
    fn lipschitz_hessian_row_is_positive() {
        let s = Dataset::new(alloc::vec![
            crate::data::DataTriple::scalar(0.0, 0.0, 0.0).with_hess(0.0),
            crate::data::DataTriple::scalar(1.0, -1.0 / 6.0, 0.0).with_hess(0.0),
        ])
        .unwrap();
        let gap = grid_oracle_gap(
            &s,
            0.5,
            &ConstraintFamily::LipschitzHessian { m: 1.0 },
            &GridOptions::default(),
        )
        .unwrap();
        assert!(gap.tau_star > 1e-3, "{}", gap.tau_star);
        assert!(gap.witness_hess.is_some());
    }
}
