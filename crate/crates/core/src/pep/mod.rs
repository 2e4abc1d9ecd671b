//! Gram-lifted performance-estimation problems and analytic baselines.

mod gd;
mod gram;
mod wc;

use alloc::string::String;
use alloc::vec::Vec;

use libm::sqrt;

pub use gd::{build_gd_pep, GdVariant};
pub use gram::{GramForm, LabelledPoint, SdpConstraint, SdpInstance, SdpSolution, Sel, Sense};
pub use wc::{build_wc_pep, c_index};

use crate::conic::SolveStatus;
use crate::data::DataTriple;
use crate::family::ConstraintFamily;
use crate::{Error, Result};

/// Which weakly convex characterization the PEP imposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WcVariant {
    /// Value inequality plus `|g| <= B`, without projection variables.
    Classical,
    /// Classical constraints written in the tight layout with every
    /// projection pinned to its target point; for cross-checks only.
    ClassicalPinned,
    /// Value inequality with projection variables and their norm bounds.
    Tight,
}

impl WcVariant {
    /// Family whose residuals the recovered points must satisfy.
    pub fn family(self, mu: f64, b: f64) -> ConstraintFamily {
        match self {
            WcVariant::Tight => ConstraintFamily::WeaklyConvexBoundedTight { mu, b },
            _ => ConstraintFamily::WeaklyConvexBounded { mu, b },
        }
    }
}

/// Subgradient method `x_{i+1} = x_i - h g_i`, measured by the mean squared
/// Moreau-envelope gradient over `N + 1` iterates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PepSpec {
    pub n: usize,
    pub h: f64,
    pub mu: f64,
    pub b: f64,
    pub rho: f64,
    pub r2: f64,
    pub variant: WcVariant,
}

impl PepSpec {
    pub fn validate(&self) -> Result<()> {
        let pos = [self.h, self.mu, self.b, self.rho, self.r2];
        if self.n == 0 || pos.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::ParameterOutOfDomain(alloc::format!(
                "PEP needs N >= 1 and positive h, mu, B, rho, R^2; got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Solved PEP.
#[derive(Clone, Debug, PartialEq)]
pub struct PepResult {
    pub bound: f64,
    pub status: SolveStatus,
    pub gram: Vec<f64>,
    pub fvals: Vec<f64>,
    /// Columns `P_k` with `G = P'P`.
    pub recovered_points: Option<Vec<Vec<f64>>>,
    pub duals: Option<Vec<f64>>,
}

/// `(h, bound)` of the classical analysis:
/// `h = R mu / (B sqrt(N+1))`, `bound = 4 B R / (mu sqrt(N+1))`.
pub fn baseline_classical(n: usize, mu: f64, b: f64, r: f64) -> (f64, f64) {
    let s = sqrt(n as f64 + 1.0);
    (r * mu / (b * s), 4.0 * b * r / (mu * s))
}

/// `(h, bound)` of the earlier PEP-based analysis, as printed:
/// `h = sqrt(4 (R mu/B)(N+1) + 1) / (2(N+1))` and
/// `bound = B^2 (2 sqrt(4 (R^2 mu^2/B^2)(N+1) + 1) - 1) / (mu^2 (N+1))`.
pub fn baseline_prior_pep(n: usize, mu: f64, b: f64, r: f64) -> (f64, f64) {
    let m = n as f64 + 1.0;
    let h = sqrt(4.0 * (r * mu / b) * m + 1.0) / (2.0 * m);
    let bound =
        b * b * (2.0 * sqrt(4.0 * (r * r * mu * mu / (b * b)) * m + 1.0) - 1.0) / (mu * mu * m);
    (h, bound)
}

/// Triples `(label, x, f, g)` of the labelled points, rebuilt from a Gram
/// factor and the values.
pub fn rebuild_points(
    inst: &SdpInstance,
    cols: &[Vec<f64>],
    fvals: &[f64],
) -> Vec<(String, DataTriple)> {
    inst.points
        .iter()
        .map(|p| {
            let f = p.f.map_or(0.0, |k| fvals[k]);
            (
                p.label.clone(),
                DataTriple::new(p.x.combine(cols), f, p.g.combine(cols)),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_baseline_values() {
        let (h, b) = baseline_classical(3, 1.0, 1.0, sqrt(0.125));
        assert!((h - 0.176_776_695).abs() < 1e-8);
        assert!((b - sqrt(0.5)).abs() < 1e-8);
    }

    #[test]
    fn prior_baseline_value() {
        let (_, b) = baseline_prior_pep(3, 1.0, 1.0, sqrt(0.125));
        assert!((b - (2.0 * sqrt(3.0) - 1.0) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn classical_bound_hits_cap_at_printed_minimal_n() {
        // N = (4R/(mu B))^2 - 1 with R = 1 gives N = 15
        let (_, b) = baseline_classical(15, 1.0, 1.0, 1.0);
        assert!((b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spec_validation() {
        let s = PepSpec {
            n: 0,
            h: 0.1,
            mu: 1.0,
            b: 1.0,
            rho: 2.0,
            r2: 0.125,
            variant: WcVariant::Tight,
        };
        assert!(s.validate().is_err());
        assert!(PepSpec { n: 1, ..s }.validate().is_ok());
    }
}
