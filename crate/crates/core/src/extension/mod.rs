//! Pointwise extensibility: closed-form extenders and the extension gap
//! `tau* = min_{f, g} max_i max(-p^{xi}, -p^{ix})`.
//!
//! `tau* <= 0` means the dataset can be extended at `x`; a positive value
//! certifies that it cannot.

mod extenders;
mod grid;
mod lower;
mod project;
pub(crate) mod reduce;

use alloc::vec::Vec;

pub use extenders::{extend_convex, extend_quadratic, extend_wc_tight, quadratic_from_anchor};
pub use grid::{grid_oracle_gap, GridOptions};
pub use project::{project_ball, BallSpec};

use crate::conic::{ConicBackend, SolveStatus};
use crate::constraints::{check_pair, satisfies};
use crate::data::Dataset;
use crate::family::{ConstraintFamily, ProblemConfig};
use crate::{Error, Result};
use reduce::{bracketed, golden, scan_min, Reduced};

/// How an [`ExtensionGap`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Witness built by the family's extender; certifies `tau* <= 0`.
    ClosedForm,
    /// Exact convex solve (golden section in one dimension, SOCP otherwise).
    ConicSolve,
    /// Dense scan of a nonconvex one-dimensional problem, or the brute-force oracle.
    GridOracle,
}

/// Value of the inner problem and a witness attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionGap {
    pub tau_star: f64,
    pub witness_f: f64,
    pub witness_g: Vec<f64>,
    pub witness_hess: Option<f64>,
    pub method: Method,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapOptions {
    /// Reject infeasible input datasets up front.
    pub check_feasibility: bool,
    pub tol: f64,
    pub force_method: Option<Method>,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions {
            check_feasibility: true,
            tol: ProblemConfig::DEFAULT_TOLERANCE,
            force_method: None,
        }
    }
}

impl GapOptions {
    /// Raw gaps: no feasibility check on the input.
    pub fn unchecked() -> Self {
        GapOptions {
            check_feasibility: false,
            ..Self::default()
        }
    }
}

/// Whether every violation is convex in the new `(f, g)`.
pub fn is_concave(family: &ConstraintFamily) -> bool {
    match family {
        ConstraintFamily::WeaklyConvexBoundedTight { .. } | ConstraintFamily::SmoothPL { .. } => {
            false
        }
        ConstraintFamily::GramLinearGeneral(c) => c.b >= 0.0 && c.c >= 0.0,
        ConstraintFamily::ConsistForm { alpha, .. } => *alpha >= 0.0,
        _ => true,
    }
}

/// Computes the extension gap at `x`.
///
/// A backend is needed only for concave families in dimension two or more.
pub fn extension_gap(
    s: &Dataset,
    x: &[f64],
    family: &ConstraintFamily,
    opts: &GapOptions,
    backend: Option<&dyn ConicBackend>,
) -> Result<ExtensionGap> {
    if x.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: x.len(),
        });
    }
    for t in s {
        check_pair(family, t.view(), t.view())?;
    }
    let feasible = if opts.check_feasibility || needs_feasibility(family) {
        let sat = satisfies(family, s, opts.tol)?;
        if opts.check_feasibility && !sat.ok {
            return Err(Error::InputNotFeasible(sat.worst));
        }
        sat.ok
    } else {
        false
    };
    let d = s.dim();
    let method = match opts.force_method {
        Some(m) => m,
        None if feasible && closed_form(family, s, x).is_some() => Method::ClosedForm,
        None if is_concave(family) => Method::ConicSolve,
        None if d == 1 => Method::GridOracle,
        None => {
            return Err(Error::UnsupportedDimension {
                dim: d,
                reason: "nonconvex inner problem in several dimensions",
            })
        }
    };
    let red = Reduced::new(family, s, x);
    match method {
        Method::ClosedForm => {
            let (f, g) = closed_form(family, s, x).ok_or(Error::UnsupportedDimension {
                dim: d,
                reason: "no closed-form extender for this family",
            })?;
            let tau = red.violation(f, &g, None);
            Ok(ExtensionGap {
                tau_star: tau,
                witness_f: f,
                witness_g: g,
                witness_hess: None,
                method,
            })
        }
        Method::ConicSolve if !is_concave(family) => Err(Error::UnsupportedDimension {
            dim: d,
            reason: "violations are not jointly convex",
        }),
        Method::ConicSolve if d == 1 => one_dim(&red, s, x, family, false),
        Method::ConicSolve => socp(&red, s, x, family, backend.ok_or(Error::BackendRequired)?),
        Method::GridOracle if d == 1 => one_dim(&red, s, x, family, true),
        Method::GridOracle => Err(Error::UnsupportedDimension {
            dim: d,
            reason: "the grid oracle is one-dimensional",
        }),
    }
}

fn needs_feasibility(family: &ConstraintFamily) -> bool {
    matches!(family, ConstraintFamily::WeaklyConvexBoundedTight { .. })
}

/// Extender output for families that have one, from a feasible dataset.
fn closed_form(family: &ConstraintFamily, s: &Dataset, x: &[f64]) -> Option<(f64, Vec<f64>)> {
    match *family {
        ConstraintFamily::Convex => Some(extenders::convex_unchecked(s, x)),
        ConstraintFamily::QuadraticClass { mu, .. } => Some(quadratic_from_anchor(s, x, mu, 0)),
        ConstraintFamily::WeaklyConvexBoundedTight { mu, b } if mu > 0.0 => {
            Some(extenders::wc_tight_unchecked(s, x, mu, b))
        }
        _ => None,
    }
}

fn scales(s: &Dataset, x: &[f64]) -> (f64, f64) {
    let mut g = 1.0f64;
    let mut h = 1.0f64;
    for t in s {
        g = g
            .max(crate::vecops::norm(&t.g))
            .max(crate::vecops::dist(&t.x, x));
        h = h.max(t.hess.map_or(0.0, f64::abs));
    }
    (10.0 * g, 10.0 * h)
}

fn one_dim(
    red: &Reduced<'_>,
    s: &Dataset,
    x: &[f64],
    family: &ConstraintFamily,
    scan: bool,
) -> Result<ExtensionGap> {
    let (g_half, h_half) = scales(s, x);
    let lh = matches!(family, ConstraintFamily::LipschitzHessian { .. });
    let tol = |lo: f64, hi: f64| 1e-11 * (hi - lo).max(1.0);
    let method = if scan {
        Method::GridOracle
    } else {
        Method::ConicSolve
    };

    // best Hessian entry for a given gradient, and whether it sat on the edge
    let inner = |g: f64| -> (f64, f64, bool) {
        if !lh {
            return (red.eval(&[g], None).tau, 0.0, false);
        }
        let b = bracketed(
            |lo, hi| golden(|h| red.eval(&[g], Some(h)).tau, lo, hi, tol(lo, hi)),
            0.0,
            h_half,
        );
        (b.value, b.arg, b.on_boundary)
    };
    let outer = |lo: f64, hi: f64| {
        let phi = |g: f64| inner(g).0;
        if scan {
            scan_min(phi, lo, hi, 4001, tol(lo, hi))
        } else {
            golden(phi, lo, hi, tol(lo, hi))
        }
    };
    let b = bracketed(outer, 0.0, g_half);
    let (_, h, h_edge) = inner(b.arg);
    let hess = if lh { Some(h) } else { None };
    let e = red.eval(&[b.arg], hess);
    if (b.on_boundary || h_edge) && e.tau > 0.0 {
        return Err(Error::UnboundedWitness);
    }
    Ok(ExtensionGap {
        tau_star: e.tau,
        witness_f: e.f,
        witness_g: alloc::vec![b.arg],
        witness_hess: hess,
        method,
    })
}

fn socp(
    red: &Reduced<'_>,
    s: &Dataset,
    x: &[f64],
    family: &ConstraintFamily,
    backend: &dyn ConicBackend,
) -> Result<ExtensionGap> {
    let d = x.len();
    let terms = lower::terms(family, s, x)?;
    let (g_half, _) = scales(s, x);
    let g_box = 100.0 * g_half;
    let (program, lay) = lower::lower(&terms, d, red.f_window, g_box);
    let sol = backend.solve_conic(&program)?;
    match sol.status {
        SolveStatus::Optimal | SolveStatus::Inaccurate => {}
        other => {
            return Err(Error::SolverFailure(alloc::format!(
                "inner SOCP ended with {other:?}"
            )))
        }
    }
    let g: Vec<f64> = (0..d).map(|k| sol.x[lay.g(k)]).collect();
    let e = red.eval(&g, None);
    if g.iter().any(|v| v.abs() >= 0.999 * g_box) && e.tau > 0.0 {
        return Err(Error::UnboundedWitness);
    }
    Ok(ExtensionGap {
        tau_star: e.tau,
        witness_f: e.f,
        witness_g: g,
        witness_hess: None,
        method: Method::ConicSolve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DataTriple;

    fn ds(p: &[(f64, f64, f64)]) -> Dataset {
        Dataset::from_scalars(p).unwrap()
    }

    const WC: ConstraintFamily = ConstraintFamily::WeaklyConvexBounded { mu: 1.0, b: 1.0 };
    const WCT: ConstraintFamily = ConstraintFamily::WeaklyConvexBoundedTight { mu: 1.0, b: 1.0 };

    #[test]
    fn convex_single_point_is_closed_form() {
        let gap = extension_gap(
            &ds(&[(0.0, 0.0, 1.0)]),
            &[5.0],
            &ConstraintFamily::Convex,
            &GapOptions::default(),
            None,
        )
        .unwrap();
        assert_eq!(gap.method, Method::ClosedForm);
        assert!(gap.tau_star <= 0.0);
    }

    #[test]
    fn tight_family_rejects_two_point_dataset() {
        let s = ds(&[(0.0, 0.0, 1.0), (3.0, -1.5, 1.0)]);
        assert!(matches!(
            extension_gap(&s, &[2.0], &WCT, &GapOptions::default(), None),
            Err(Error::InputNotFeasible(_))
        ));
    }

    #[test]
    fn tight_single_point_extends() {
        let gap = extension_gap(
            &ds(&[(0.2, 0.1, -0.6)]),
            &[-3.0],
            &WCT,
            &GapOptions::default(),
            None,
        )
        .unwrap();
        assert!(gap.tau_star <= 1e-12);
    }

    #[test]
    fn weakly_convex_row_gap_is_zero_at_printed_probe() {
        let s = ds(&[(0.0, 0.0, 1.0), (3.0, -1.5, 1.0)]);
        let gap = extension_gap(&s, &[2.0], &WC, &GapOptions::default(), None).unwrap();
        assert_eq!(gap.method, Method::ConicSolve);
        assert!(gap.tau_star.abs() < 1e-9, "{}", gap.tau_star);
        let shifted = extension_gap(&s, &[2.5], &WC, &GapOptions::default(), None).unwrap();
        assert!(
            (shifted.tau_star - 0.1).abs() < 1e-7,
            "{}",
            shifted.tau_star
        );
    }

    #[test]
    fn lipschitz_hessian_row_is_positive() {
        let s = Dataset::new(alloc::vec![
            DataTriple::scalar(0.0, 0.0, 0.0).with_hess(0.0),
            DataTriple::scalar(1.0, -1.0 / 6.0, 0.0).with_hess(0.0),
        ])
        .unwrap();
        let gap = extension_gap(
            &s,
            &[0.5],
            &ConstraintFamily::LipschitzHessian { m: 1.0 },
            &GapOptions::default(),
            None,
        )
        .unwrap();
        assert!(gap.tau_star > 1e-3);
        assert!(gap.witness_hess.is_some());
    }

    #[test]
    fn witness_reproduces_tau() {
        let s = ds(&[(0.0, 0.0, 0.5), (1.0, 0.2, -0.3), (-0.7, 0.4, -0.9)]);
        let gap = extension_gap(&s, &[0.4], &WC, &GapOptions::unchecked(), None).unwrap();
        let red = Reduced::new(&WC, &s, &[0.4]);
        let again = red.violation(gap.witness_f, &gap.witness_g, None);
        assert!((again - gap.tau_star).abs() < 1e-12);
    }

    #[test]
    fn several_dimensions_need_a_backend() {
        let s = Dataset::new(alloc::vec![DataTriple::new(
            alloc::vec![0.0, 0.0],
            0.0,
            alloc::vec![0.5, 0.0]
        )])
        .unwrap();
        assert!(matches!(
            extension_gap(&s, &[1.0, 1.0], &WC, &GapOptions::default(), None),
            Err(Error::BackendRequired)
        ));
    }
}
