//! The inner problem with the new value eliminated.
//!
//! Every supported residual is affine in the value `f` of the new point,
//! with a slope that does not depend on its gradient. For a fixed gradient
//! (and Hessian entry), each violation is a line `sigma f + beta` and
//! `min_f max_k` of those lines has a closed form: the best pairing of an
//! increasing with a decreasing line, or the largest flat line. What is left
//! is a problem in `g` alone, convex whenever every component is concave.

use alloc::vec::Vec;
use core::cell::RefCell;

use crate::constraints::eval_points;
use crate::data::{Dataset, Point};
use crate::family::ConstraintFamily;

const FLAT: f64 = 1e-12;
const PHI: f64 = 0.618_033_988_749_894_9;

pub(crate) struct Reduced<'a> {
    family: &'a ConstraintFamily,
    s: &'a Dataset,
    x: &'a [f64],
    pub f_window: (f64, f64),
    lines: RefCell<Vec<(f64, f64)>>,
}

/// Value of the reduced problem at one gradient.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Eval {
    pub tau: f64,
    pub f: f64,
}

impl<'a> Reduced<'a> {
    pub fn new(family: &'a ConstraintFamily, s: &'a Dataset, x: &'a [f64]) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut reach = 1.0f64;
        for t in s {
            lo = lo.min(t.f);
            hi = hi.max(t.f);
            let dx = crate::vecops::dist(&t.x, x);
            reach = reach
                .max(crate::vecops::norm(&t.g) * dx)
                .max(dx * dx)
                .max(dx);
        }
        let pad = 1e3 * (1.0 + (hi - lo) + reach + lo.abs().max(hi.abs()));
        Reduced {
            family,
            s,
            x,
            f_window: (lo - pad, hi + pad),
            lines: RefCell::new(Vec::new()),
        }
    }

    fn fill_lines(&self, g: &[f64], h: Option<f64>) {
        let mut lines = self.lines.borrow_mut();
        lines.clear();
        let at = |f: f64| Point {
            x: self.x,
            f,
            g,
            hess: h,
        };
        for t in self.s {
            let anchor = t.view();
            for forward in [true, false] {
                let (r0, r1) = if forward {
                    (
                        eval_points(self.family, at(0.0), anchor),
                        eval_points(self.family, at(1.0), anchor),
                    )
                } else {
                    (
                        eval_points(self.family, anchor, at(0.0)),
                        eval_points(self.family, anchor, at(1.0)),
                    )
                };
                for (c0, c1) in r0.components().iter().zip(r1.components()) {
                    // violation = -(s f + c)
                    let slope = c1 - c0;
                    let sigma = if slope.abs() <= FLAT { 0.0 } else { -slope };
                    lines.push((sigma, -c0));
                }
            }
        }
    }

    /// Largest violation at a fully specified candidate.
    pub fn violation(&self, f: f64, g: &[f64], h: Option<f64>) -> f64 {
        self.fill_lines(g, h);
        self.lines
            .borrow()
            .iter()
            .map(|&(s, b)| s * f + b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `min_f max_k (sigma_k f + beta_k)` over the value window.
    pub fn eval(&self, g: &[f64], h: Option<f64>) -> Eval {
        self.fill_lines(g, h);
        let lines = self.lines.borrow();
        let (mut has_inc, mut has_dec) = (false, false);
        let mut best = (f64::NEG_INFINITY, f64::NAN);
        for &(sp, bp) in lines.iter().filter(|l| l.0 > 0.0) {
            has_inc = true;
            for &(sn, bn) in lines.iter().filter(|l| l.0 < 0.0) {
                has_dec = true;
                let v = (sp * bn - sn * bp) / (sp - sn);
                if v > best.0 {
                    best = (v, (bn - bp) / (sp - sn));
                }
            }
        }
        has_dec |= lines.iter().any(|l| l.0 < 0.0);
        let (lo, hi) = self.f_window;
        let f = match (has_inc, has_dec) {
            (true, true) => best.1.clamp(lo, hi),
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => 0.5 * (lo + hi),
        };
        let tau = lines
            .iter()
            .map(|&(s, b)| s * f + b)
            .fold(f64::NEG_INFINITY, f64::max);
        Eval { tau, f }
    }
}

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
pub(crate) fn golden(
    mut fun: impl FnMut(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    let mut a = hi - PHI * (hi - lo);
    let mut b = lo + PHI * (hi - lo);
    let (mut fa, mut fb) = (fun(a), fun(b));
    while hi - lo > tol {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - PHI * (hi - lo);
            fa = fun(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + PHI * (hi - lo);
            fb = fun(b);
        }
    }
    let mut best = if fa <= fb { (a, fa) } else { (b, fb) };
    for end in [lo, hi] {
        let v = fun(end);
        if v < best.1 {
            best = (end, v);
        }
    }
    best
}

/// Dense scan followed by golden refinement of the best local minima.
pub(crate) fn scan_min(
    mut fun: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    samples: usize,
    tol: f64,
) -> (f64, f64) {
    let step = (hi - lo) / (samples - 1) as f64;
    let vals: Vec<f64> = (0..samples).map(|k| fun(lo + step * k as f64)).collect();
    let mut minima: Vec<usize> = (0..samples)
        .filter(|&k| {
            let left = k == 0 || vals[k] <= vals[k - 1];
            let right = k + 1 == samples || vals[k] <= vals[k + 1];
            left && right
        })
        .collect();
    minima.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    minima.truncate(8);
    let mut best = (lo, f64::INFINITY);
    for k in minima {
        let a = lo + step * k.saturating_sub(1) as f64;
        let b = (lo + step * (k + 1) as f64).min(hi);
        let cand = golden(&mut fun, a, b, tol);
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

/// Outcome of a bracketed 1-D minimization.
pub(crate) struct Bracketed {
    pub arg: f64,
    pub value: f64,
    pub on_boundary: bool,
}

/// Minimizes on `[-half, half]`, doubling the bracket up to four times while
/// the minimizer sits on its edge.
pub(crate) fn bracketed(
    mut minimize: impl FnMut(f64, f64) -> (f64, f64),
    center: f64,
    mut half: f64,
) -> Bracketed {
    let mut expansions = 0;
    loop {
        let (lo, hi) = (center - half, center + half);
        let (arg, value) = minimize(lo, hi);
        let edge = 1e-6 * half;
        let on_boundary = arg - lo <= edge || hi - arg <= edge;
        if !on_boundary || expansions == 4 {
            return Bracketed {
                arg,
                value,
                on_boundary,
            };
        }
        half *= 2.0;
        expansions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, v) = golden(|t| (t - 0.3) * (t - 0.3) + 1.0, -5.0, 5.0, 1e-10);
        // argmin accuracy is limited to about sqrt(eps) on a flat vertex
        assert!((x - 0.3).abs() < 1e-6 && (v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scan_picks_global_of_double_well() {
        let f = |t: f64| (t * t - 1.0) * (t * t - 1.0) + 0.1 * t;
        let (x, _) = scan_min(f, -3.0, 3.0, 601, 1e-10);
        assert!((x + 1.0).abs() < 0.05);
    }

    #[test]
    fn pairing_formula_on_two_lines() {
        // max(f - 1, -f - 3) is minimized at f = -1 with value -2
        let s = Dataset::from_scalars(&[(0.0, 0.0, 0.0)]).unwrap();
        let fam = ConstraintFamily::Convex;
        let r = Reduced::new(&fam, &s, &[0.0]);
        r.lines.borrow_mut().clear();
        let e = r.eval(&[0.0], None);
        // single point at the probe: violation max(f - 0, 0 - f) -> tau = 0 at f = 0
        assert_eq!((e.tau, e.f), (0.0, 0.0));
    }
}
