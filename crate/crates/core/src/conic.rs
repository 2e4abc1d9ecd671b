//! Solver-agnostic conic programs and the backend interface.
//!
//! Programs use the standard form `min c'x s.t. Ax + s = b, s ∈ K` with `K`
//! a product of zero, nonnegative, second-order and PSD-triangle cones, in
//! row order. PSD-triangle blocks of order `n` are vectorized column-wise
//! over the upper triangle with off-diagonal entries scaled by `sqrt(2)`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::pep::{SdpInstance, SdpSolution};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cone {
    Zero(usize),
    Nonneg(usize),
    /// `(t, w)` with `|w| <= t`; the size counts `t`.
    SecondOrder(usize),
    /// Order of the matrix, not the vector length.
    PsdTriangle(usize),
}

impl Cone {
    pub fn dim(&self) -> usize {
        match *self {
            Cone::Zero(n) | Cone::Nonneg(n) | Cone::SecondOrder(n) => n,
            Cone::PsdTriangle(n) => n * (n + 1) / 2,
        }
    }
}

/// `min c'x s.t. Ax + s = b, s ∈ K`, with `A` in triplet form.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConicProgram {
    pub n: usize,
    pub c: Vec<f64>,
    pub a: Vec<(usize, usize, f64)>,
    pub b: Vec<f64>,
    pub cones: Vec<Cone>,
}

impl ConicProgram {
    pub fn new(n: usize) -> Self {
        ConicProgram {
            n,
            c: alloc::vec![0.0; n],
            ..Default::default()
        }
    }

    pub fn rows(&self) -> usize {
        self.b.len()
    }

    /// Appends a row `a'x + s = b` and returns its index; the caller
    /// registers the cone covering it.
    pub fn push_row(&mut self, coeffs: &[(usize, f64)], b: f64) -> usize {
        let r = self.b.len();
        for &(j, v) in coeffs {
            if v != 0.0 {
                self.a.push((r, j, v));
            }
        }
        self.b.push(b);
        r
    }

    /// Consistency between the cone list and the row count.
    pub fn check(&self) -> Result<()> {
        let rows: usize = self.cones.iter().map(Cone::dim).sum();
        if rows != self.b.len() || self.c.len() != self.n {
            return Err(Error::SolverFailure(String::from(
                "malformed conic program",
            )));
        }
        if self.a.iter().any(|&(r, j, _)| r >= rows || j >= self.n) {
            return Err(Error::SolverFailure(String::from(
                "constraint entry out of range",
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    Inaccurate,
    Failed,
}

/// Primal/dual point returned by a backend.
#[derive(Clone, Debug, PartialEq)]
pub struct ConicSolution {
    pub status: SolveStatus,
    pub x: Vec<f64>,
    /// Dual variables, one per row.
    pub z: Vec<f64>,
    pub objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Capabilities {
    pub nonneg: bool,
    pub soc: bool,
    pub psd: bool,
}

/// An external or in-house conic solver.
pub trait ConicBackend {
    fn name(&self) -> &str;

    fn capabilities(&self) -> Capabilities;

    /// Absolute accuracy targeted on objective values.
    fn tolerance(&self) -> f64 {
        1e-8
    }

    fn solve_conic(&self, _program: &ConicProgram) -> Result<ConicSolution> {
        Err(Error::SolverFailure(alloc::format!(
            "{} does not accept generic conic programs",
            self.name()
        )))
    }

    /// Solves a Gram-lifted SDP. The default lowers it to a conic program.
    fn solve_sdp(&self, instance: &SdpInstance) -> Result<SdpSolution> {
        if !self.capabilities().psd {
            return Err(Error::SolverFailure(alloc::format!(
                "{} has no PSD support",
                self.name()
            )));
        }
        let lowered = instance.to_conic();
        let sol = self.solve_conic(&lowered)?;
        Ok(instance.solution_from_conic(&sol))
    }
}
