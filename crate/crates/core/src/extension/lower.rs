//! Second-order-cone lowering of the inner problem for concave families.
//!
//! Every violation `-p` of a concave family, seen as a function of the new
//! point's `(f, g)`, has the form
//! `sigma f + a'g + c + q |g|^2 + r |g - g1|` with `q, r >= 0`. The
//! coefficients are read off numerically and checked against a direct
//! evaluation before anything is handed to a solver.

use alloc::vec::Vec;

use crate::conic::{Cone, ConicProgram};
use crate::constraints::eval_points;
use crate::data::{Dataset, Point};
use crate::family::ConstraintFamily;
use crate::vecops::{dist, norm2};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub sigma: f64,
    pub a: Vec<f64>,
    pub c: f64,
    pub q: f64,
    pub norm: Option<Vec<f64>>,
}

impl Term {
    fn value(&self, f: f64, g: &[f64]) -> f64 {
        let mut v = self.sigma * f + self.c + self.q * norm2(g);
        v += self.a.iter().zip(g).map(|(a, g)| a * g).sum::<f64>();
        if let Some(g1) = &self.norm {
            v += dist(g, g1);
        }
        v
    }
}

/// Component `k` of direction `forward` (new point first) is a norm term
/// centred at the returned gradient.
fn norm_center(
    family: &ConstraintFamily,
    forward: bool,
    k: usize,
    anchor_g: &[f64],
) -> Option<Vec<f64>> {
    match family {
        ConstraintFamily::SmoothConvexWeak { .. } if k == 1 => Some(anchor_g.to_vec()),
        ConstraintFamily::WeaklyConvexBounded { .. } if k == 1 && forward => {
            Some(alloc::vec![0.0; anchor_g.len()])
        }
        _ => None,
    }
}

pub(crate) fn terms(family: &ConstraintFamily, s: &Dataset, x: &[f64]) -> Result<Vec<Term>> {
    let d = x.len();
    let mut out = Vec::new();
    let mut g = alloc::vec![0.0; d];
    for t in s {
        let anchor = t.view();
        for forward in [true, false] {
            let eval = |f: f64, g: &[f64]| {
                let p = Point {
                    x,
                    f,
                    g,
                    hess: None,
                };
                if forward {
                    eval_points(family, p, anchor)
                } else {
                    eval_points(family, anchor, p)
                }
            };
            let arity = eval(0.0, &g).len();
            for k in 0..arity {
                let v = |f: f64, g: &[f64]| -eval(f, g).components()[k];
                g.iter_mut().for_each(|e| *e = 0.0);
                let sigma = v(1.0, &g) - v(0.0, &g);
                let term = if let Some(g1) = norm_center(family, forward, k, &t.g) {
                    Term {
                        sigma,
                        a: alloc::vec![0.0; d],
                        c: v(0.0, &g1),
                        q: 0.0,
                        norm: Some(g1),
                    }
                } else {
                    let c = v(0.0, &g);
                    let mut a = alloc::vec![0.0; d];
                    let mut q = 0.0;
                    for e in 0..d {
                        g[e] = 1.0;
                        let plus = v(0.0, &g);
                        g[e] = -1.0;
                        let minus = v(0.0, &g);
                        g[e] = 0.0;
                        a[e] = 0.5 * (plus - minus);
                        q = 0.5 * (plus + minus) - c;
                    }
                    Term {
                        sigma,
                        a,
                        c,
                        q,
                        norm: None,
                    }
                };
                if term.q < -1e-12 {
                    return Err(Error::UnsupportedDimension {
                        dim: d,
                        reason: "violation is not convex in g",
                    });
                }
                // probe away from every special point
                for (e, slot) in g.iter_mut().enumerate() {
                    *slot = 0.37 + 0.61 * e as f64 - 0.05 * (e * e) as f64;
                }
                let direct = v(0.7, &g);
                let model = term.value(0.7, &g);
                if (direct - model).abs() > 1e-8 * (1.0 + direct.abs()) {
                    return Err(Error::UnsupportedDimension {
                        dim: d,
                        reason: "residual is not of second-order-cone type",
                    });
                }
                out.push(term);
            }
        }
    }
    Ok(out)
}

/// Column layout of the lowered program.
pub(crate) struct Layout {
    pub d: usize,
    pub norms: usize,
}

impl Layout {
    pub const TAU: usize = 0;
    pub const F: usize = 1;
    pub fn g(&self, k: usize) -> usize {
        2 + k
    }
    pub fn w(&self) -> usize {
        2 + self.d
    }
    pub fn u(&self, k: usize) -> usize {
        3 + self.d + k
    }
    pub fn n(&self) -> usize {
        3 + self.d + self.norms
    }
}

/// `min tau` s.t. every term is at most `tau`, `|g|^2 <= w`, norm epigraphs,
/// `f` in its window and `g` in a box of half-width `g_box`.
pub(crate) fn lower(
    terms: &[Term],
    d: usize,
    f_window: (f64, f64),
    g_box: f64,
) -> (ConicProgram, Layout) {
    let lay = Layout {
        d,
        norms: terms.iter().filter(|t| t.norm.is_some()).count(),
    };
    let mut p = ConicProgram::new(lay.n());
    p.c[Layout::TAU] = 1.0;
    let mut nonneg = 0;
    let mut u = 0;
    for t in terms {
        let mut row = alloc::vec![(Layout::TAU, -1.0), (Layout::F, t.sigma), (lay.w(), t.q)];
        row.extend(t.a.iter().enumerate().map(|(k, &a)| (lay.g(k), a)));
        if t.norm.is_some() {
            row.push((lay.u(u), 1.0));
            u += 1;
        }
        p.push_row(&row, -t.c);
        nonneg += 1;
    }
    p.push_row(&[(Layout::F, -1.0)], -f_window.0);
    p.push_row(&[(Layout::F, 1.0)], f_window.1);
    nonneg += 2;
    for k in 0..d {
        p.push_row(&[(lay.g(k), -1.0)], g_box);
        p.push_row(&[(lay.g(k), 1.0)], g_box);
        nonneg += 2;
    }
    p.cones.push(Cone::Nonneg(nonneg));
    // (w + 1, w - 1, 2g) in the second-order cone
    p.push_row(&[(lay.w(), -1.0)], 1.0);
    p.push_row(&[(lay.w(), -1.0)], -1.0);
    for k in 0..d {
        p.push_row(&[(lay.g(k), -2.0)], 0.0);
    }
    p.cones.push(Cone::SecondOrder(d + 2));
    let mut u = 0;
    for t in terms {
        if let Some(g1) = &t.norm {
            p.push_row(&[(lay.u(u), -1.0)], 0.0);
            for (k, gk) in g1.iter().enumerate() {
                p.push_row(&[(lay.g(k), -1.0)], -gk);
            }
            p.cones.push(Cone::SecondOrder(d + 1));
            u += 1;
        }
    }
    (p, lay)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DataTriple;
    use crate::family::GramCoefficients;

    fn sample() -> Dataset {
        Dataset::new(alloc::vec![
            DataTriple::new(alloc::vec![0.1, -0.4], 0.3, alloc::vec![0.5, 0.2]),
            DataTriple::new(alloc::vec![0.9, 0.6], 1.1, alloc::vec![-0.3, 0.4]),
        ])
        .unwrap()
    }

    #[test]
    fn concave_families_lower_exactly() {
        let s = sample();
        let x = [0.2, 0.3];
        for fam in [
            ConstraintFamily::Convex,
            ConstraintFamily::SmoothConvexWeak { l: 2.0 },
            ConstraintFamily::SmoothConvexTight { l: 2.0 },
            ConstraintFamily::SmoothStronglyConvex { mu: 0.5, l: 2.0 },
            ConstraintFamily::QuadraticClass { mu: 1.0, m: 0.5 },
            ConstraintFamily::WeaklyConvexBounded { mu: 1.0, b: 1.0 },
            ConstraintFamily::ConsistForm {
                alpha: 0.5,
                beta: 0.1,
                gamma: 0.3,
            },
            ConstraintFamily::UniformlyConvex { mu: 1.0, p: 3.0 },
            ConstraintFamily::HolderSmooth {
                l: 1.0,
                alpha: 0.5,
                exponent: 1.5,
            },
            ConstraintFamily::GramLinearGeneral(GramCoefficients::smooth_strongly_convex(0.0, 1.0)),
        ] {
            let ts = terms(&fam, &s, &x).unwrap();
            assert_eq!(ts.len(), 2 * s.len() * fam.arity(), "{fam}");
        }
    }

    #[test]
    fn nonconvex_violation_is_rejected() {
        let fam = ConstraintFamily::SmoothPL {
            l: 1.0,
            mu: 0.5,
            f_star: 0.0,
        };
        assert!(terms(&fam, &sample(), &[0.2, 0.3]).is_err());
    }

    #[test]
    fn program_shape_is_consistent() {
        let fam = ConstraintFamily::SmoothConvexWeak { l: 1.0 };
        let ts = terms(&fam, &sample(), &[0.0, 0.0]).unwrap();
        let (p, lay) = lower(&ts, 2, (-10.0, 10.0), 5.0);
        p.check().unwrap();
        assert_eq!(lay.norms, 4);
    }
}
