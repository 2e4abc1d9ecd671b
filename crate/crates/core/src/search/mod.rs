//! Counterexamples to interpolability: certification, randomized search and
//! the published table instances.

mod hunt;
mod tables;

use alloc::vec::Vec;

pub use hunt::{feasible_value_interval, find_counterexample};
pub use tables::{table_rows, table_suite, RowOutcome, Table, TableParams, TableRow};

use crate::conic::ConicBackend;
use crate::constraints::satisfies;
use crate::data::Dataset;
use crate::extension::{extension_gap, grid_oracle_gap, GapOptions, GridOptions};
use crate::family::ConstraintFamily;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Provenance {
    PaperTable,
    Found,
}

/// A feasible dataset together with a probe point where it cannot be extended.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub s: Dataset,
    pub x: Vec<f64>,
    pub tau_star: f64,
    /// Brute-force confirmation, present for one-dimensional data.
    pub oracle_tau: Option<f64>,
    pub family: ConstraintFamily,
    pub provenance: Provenance,
}

/// Outcome of a search; the trace records every improvement of the best gap.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    pub best: Option<Counterexample>,
    pub best_tau: f64,
    /// Dataset and probe with the largest gap seen, certified or not.
    pub incumbent: Option<(Dataset, Vec<f64>)>,
    pub iterations: usize,
    pub trace: Vec<(usize, f64)>,
}

/// Re-checks feasibility and a positive gap from scratch.
///
/// One-dimensional data is additionally confirmed by the grid oracle; both
/// values must exceed `tol`.
pub fn verify_counterexample(
    s: &Dataset,
    x: &[f64],
    family: &ConstraintFamily,
    tol: f64,
    backend: Option<&dyn ConicBackend>,
) -> Result<Counterexample> {
    let sat = satisfies(family, s, crate::family::ProblemConfig::DEFAULT_TOLERANCE)?;
    if !sat.ok {
        return Err(Error::DatasetInfeasible(sat.worst));
    }
    let gap = extension_gap(s, x, family, &GapOptions::unchecked(), backend)?;
    if gap.tau_star <= tol {
        return Err(Error::Extensible { tau: gap.tau_star });
    }
    let oracle_tau = if s.dim() == 1 {
        let oracle = grid_oracle_gap(s, x[0], family, &GridOptions::default())?;
        if oracle.tau_star <= tol {
            return Err(Error::Extensible {
                tau: oracle.tau_star,
            });
        }
        Some(oracle.tau_star)
    } else {
        None
    };
    Ok(Counterexample {
        s: s.clone(),
        x: x.to_vec(),
        tau_star: gap.tau_star,
        oracle_tau,
        family: *family,
        provenance: Provenance::Found,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_point_is_extensible() {
        let s = Dataset::from_scalars(&[(0.0, 0.0, 1.0)]).unwrap();
        assert!(matches!(
            verify_counterexample(&s, &[5.0], &ConstraintFamily::Convex, 1e-6, None),
            Err(Error::Extensible { .. })
        ));
    }

    #[test]
    fn infeasible_dataset_is_no_counterexample() {
        let s = Dataset::from_scalars(&[(0.0, 0.0, 1.0), (1.0, 0.0, 1.0)]).unwrap();
        assert!(matches!(
            verify_counterexample(&s, &[0.5], &ConstraintFamily::Convex, 1e-6, None),
            Err(Error::DatasetInfeasible(_))
        ));
    }

    #[test]
    fn uniformly_convex_row_is_certified() {
        let (mu, p) = (1.0, 3.0);
        let s = Dataset::from_scalars(&[
            (0.0, 0.0, 0.0),
            (2.0, mu * libm::pow(2.0, p) / p, mu * libm::pow(2.0, p) / p),
            (
                1.0,
                mu * (libm::pow(2.0, p - 1.0) - 1.0) / p,
                mu * libm::pow(2.0, p - 1.0) / p,
            ),
        ])
        .unwrap();
        let fam = ConstraintFamily::UniformlyConvex { mu, p };
        let c = verify_counterexample(&s, &[0.1], &fam, 1e-6, None).unwrap();
        assert!(c.tau_star > 1e-6 && c.oracle_tau.unwrap() > 1e-6);
    }
}
