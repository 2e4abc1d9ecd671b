//! Adapter to the Clarabel interior-point solver.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettings, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};
use interp_core::conic::{
    Capabilities, Cone, ConicBackend, ConicProgram, ConicSolution, SolveStatus,
};
use interp_core::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Clarabel {
    pub tol: f64,
    pub max_iter: u32,
}

impl Default for Clarabel {
    fn default() -> Self {
        Clarabel {
            tol: 1e-9,
            max_iter: 200,
        }
    }
}

fn cone(c: &Cone) -> SupportedConeT<f64> {
    match *c {
        Cone::Zero(n) => SupportedConeT::ZeroConeT(n),
        Cone::Nonneg(n) => SupportedConeT::NonnegativeConeT(n),
        Cone::SecondOrder(n) => SupportedConeT::SecondOrderConeT(n),
        Cone::PsdTriangle(n) => SupportedConeT::PSDTriangleConeT(n),
    }
}

fn status(s: SolverStatus) -> SolveStatus {
    match s {
        SolverStatus::Solved => SolveStatus::Optimal,
        SolverStatus::AlmostSolved => SolveStatus::Inaccurate,
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
            SolveStatus::Infeasible
        }
        SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => SolveStatus::Unbounded,
        _ => SolveStatus::Failed,
    }
}

impl ConicBackend for Clarabel {
    fn name(&self) -> &str {
        "clarabel"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            nonneg: true,
            soc: true,
            psd: true,
        }
    }

    fn tolerance(&self) -> f64 {
        self.tol
    }

    fn solve_conic(&self, p: &ConicProgram) -> Result<ConicSolution> {
        p.check()?;
        let (rows, cols, vals) = (
            p.a.iter().map(|e| e.0).collect(),
            p.a.iter().map(|e| e.1).collect(),
            p.a.iter().map(|e| e.2).collect(),
        );
        let a = CscMatrix::new_from_triplets(p.rows(), p.n, rows, cols, vals);
        let q = CscMatrix::zeros((p.n, p.n));
        let cones: Vec<_> = p.cones.iter().map(cone).collect();
        let settings = DefaultSettings {
            verbose: false,
            tol_gap_abs: self.tol,
            tol_gap_rel: self.tol,
            tol_feas: self.tol,
            max_iter: self.max_iter,
            ..DefaultSettings::default()
        };
        let mut solver = DefaultSolver::new(&q, &p.c, &a, &p.b, &cones, settings)
            .map_err(|e| Error::SolverFailure(format!("clarabel setup: {e}")))?;
        solver.solve();
        let s = &solver.solution;
        Ok(ConicSolution {
            status: status(s.status),
            x: s.x.clone(),
            z: s.z.clone(),
            objective: s.obj_val,
            primal_residual: s.r_prim,
            dual_residual: s.r_dual,
            gap: (s.obj_val - s.obj_val_dual).abs(),
        })
    }
}
