//! Selector vectors, Gram forms and the generic SDP instance.

use alloc::string::String;
use alloc::vec::Vec;

use libm::sqrt;

use crate::conic::{Cone, ConicProgram, ConicSolution, SolveStatus};

/// Sparse vector over the Gram basis: `sum c_k e_k`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sel(pub Vec<(usize, f64)>);

impl Sel {
    pub fn zero() -> Self {
        Sel(Vec::new())
    }

    pub fn unit(k: usize) -> Self {
        Sel(alloc::vec![(k, 1.0)])
    }

    fn merged(mut v: Vec<(usize, f64)>) -> Self {
        v.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(v.len());
        for (k, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == k => last.1 += c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|e| e.1 != 0.0);
        Sel(out)
    }

    pub fn add(&self, other: &Sel) -> Sel {
        Sel::merged(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn sub(&self, other: &Sel) -> Sel {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, a: f64) -> Sel {
        Sel::merged(self.0.iter().map(|&(k, c)| (k, a * c)).collect())
    }

    pub fn dense(&self, n: usize) -> Vec<f64> {
        let mut v = alloc::vec![0.0; n];
        for &(k, c) in &self.0 {
            v[k] += c;
        }
        v
    }

    /// `sum c_k P_k` for column vectors `P_k`.
    pub fn combine(&self, cols: &[Vec<f64>]) -> Vec<f64> {
        let r = cols.first().map_or(0, Vec::len);
        let mut v = alloc::vec![0.0; r];
        for &(k, c) in &self.0 {
            for (a, b) in v.iter_mut().zip(&cols[k]) {
                *a += c * b;
            }
        }
        v
    }
}

/// `sum coef * <u, v>_G`, i.e. `<sum coef sym(u v'), G>`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GramForm(pub Vec<(f64, Sel, Sel)>);

impl GramForm {
    pub fn new() -> Self {
        GramForm(Vec::new())
    }

    pub fn sq(coef: f64, u: Sel) -> Self {
        GramForm(alloc::vec![(coef, u.clone(), u)])
    }

    pub fn inner(coef: f64, u: Sel, v: Sel) -> Self {
        GramForm(alloc::vec![(coef, u, v)])
    }

    pub fn plus(mut self, other: GramForm) -> Self {
        self.0.extend(other.0);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dense symmetric matrix, row-major.
    pub fn matrix(&self, n: usize) -> Vec<f64> {
        let mut m = alloc::vec![0.0; n * n];
        for (c, u, v) in &self.0 {
            for &(i, a) in &u.0 {
                for &(j, b) in &v.0 {
                    let w = 0.5 * c * a * b;
                    m[i * n + j] += w;
                    m[j * n + i] += w;
                }
            }
        }
        m
    }

    /// Value at a dense row-major Gram matrix.
    pub fn eval(&self, gram: &[f64], n: usize) -> f64 {
        let mut s = 0.0;
        for (c, u, v) in &self.0 {
            for &(i, a) in &u.0 {
                for &(j, b) in &v.0 {
                    s += c * a * b * gram[i * n + j];
                }
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// `<A, G> + a'F  (sense)  rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpConstraint {
    pub label: String,
    pub gram: GramForm,
    pub fvals: Vec<(usize, f64)>,
    pub rhs: f64,
    pub sense: Sense,
}

impl SdpConstraint {
    pub fn lhs(&self, gram: &[f64], n: usize, fvals: &[f64]) -> f64 {
        self.gram.eval(gram, n) + self.fvals.iter().map(|&(k, c)| c * fvals[k]).sum::<f64>()
    }

    /// Signed slack; nonnegative when satisfied.
    pub fn slack(&self, gram: &[f64], n: usize, fvals: &[f64]) -> f64 {
        let l = self.lhs(gram, n, fvals);
        match self.sense {
            Sense::Le => self.rhs - l,
            Sense::Ge => l - self.rhs,
            Sense::Eq => -(l - self.rhs).abs(),
        }
    }
}

/// A named point of the lifted problem: position and gradient as selector
/// vectors, value as an index into `F` (`None` for the normalized optimum).
#[derive(Clone, Debug, PartialEq)]
pub struct LabelledPoint {
    pub label: String,
    pub x: Sel,
    pub g: Sel,
    pub f: Option<usize>,
}

/// `max <C, G> + c'F` subject to the constraints and `G ⪰ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpInstance {
    pub gram_dim: usize,
    pub n_fvals: usize,
    pub objective: GramForm,
    pub objective_f: Vec<(usize, f64)>,
    pub constraints: Vec<SdpConstraint>,
    pub points: Vec<LabelledPoint>,
}

/// Primal point of an [`SdpInstance`].
#[derive(Clone, Debug, PartialEq)]
pub struct SdpSolution {
    pub status: SolveStatus,
    pub bound: f64,
    /// Row-major `gram_dim x gram_dim`.
    pub gram: Vec<f64>,
    pub fvals: Vec<f64>,
    /// One multiplier per constraint when the backend reports them.
    pub duals: Option<Vec<f64>>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
}

/// Index of `(i, j)`, `i <= j`, in the column-wise upper-triangle vector.
fn tri(i: usize, j: usize) -> usize {
    j * (j + 1) / 2 + i
}

impl SdpInstance {
    pub fn svec_len(&self) -> usize {
        self.gram_dim * (self.gram_dim + 1) / 2
    }

    /// `svec` of a Gram form (off-diagonals scaled by `sqrt 2`).
    fn svec_row(&self, form: &GramForm) -> Vec<(usize, f64)> {
        let n = self.gram_dim;
        let m = form.matrix(n);
        let mut out = Vec::new();
        for j in 0..n {
            for i in 0..=j {
                let v = m[i * n + j];
                if v != 0.0 {
                    out.push((tri(i, j), if i == j { v } else { sqrt(2.0) * v }));
                }
            }
        }
        out
    }

    /// Lowers to `min c'x, Ax + s = b, s ∈ K` over `x = (svec G, F)`.
    ///
    /// Rows are ordered equalities, inequalities, then the PSD block; the
    /// objective is negated.
    pub fn to_conic(&self) -> ConicProgram {
        let nv = self.svec_len();
        let mut p = ConicProgram::new(nv + self.n_fvals);
        for (k, v) in self.svec_row(&self.objective) {
            p.c[k] = -v;
        }
        for &(k, v) in &self.objective_f {
            p.c[nv + k] -= v;
        }
        let mut eq = 0;
        let mut ineq = 0;
        for pass in [true, false] {
            for c in self
                .constraints
                .iter()
                .filter(|c| (c.sense == Sense::Eq) == pass)
            {
                let sign = if c.sense == Sense::Ge { -1.0 } else { 1.0 };
                let mut row: Vec<(usize, f64)> = self
                    .svec_row(&c.gram)
                    .into_iter()
                    .map(|(k, v)| (k, sign * v))
                    .collect();
                row.extend(c.fvals.iter().map(|&(k, v)| (nv + k, sign * v)));
                p.push_row(&row, sign * c.rhs);
                if pass {
                    eq += 1;
                } else {
                    ineq += 1;
                }
            }
        }
        if eq > 0 {
            p.cones.push(Cone::Zero(eq));
        }
        if ineq > 0 {
            p.cones.push(Cone::Nonneg(ineq));
        }
        for k in 0..nv {
            p.push_row(&[(k, -1.0)], 0.0);
        }
        p.cones.push(Cone::PsdTriangle(self.gram_dim));
        p
    }

    /// Reads a conic solution of [`SdpInstance::to_conic`] back.
    pub fn solution_from_conic(&self, sol: &ConicSolution) -> SdpSolution {
        let n = self.gram_dim;
        let nv = self.svec_len();
        let mut gram = alloc::vec![0.0; n * n];
        if sol.x.len() >= nv + self.n_fvals {
            for j in 0..n {
                for i in 0..=j {
                    let v = sol.x[tri(i, j)];
                    let v = if i == j { v } else { v / sqrt(2.0) };
                    gram[i * n + j] = v;
                    gram[j * n + i] = v;
                }
            }
        }
        let fvals = sol
            .x
            .get(nv..nv + self.n_fvals)
            .map_or_else(|| alloc::vec![0.0; self.n_fvals], <[f64]>::to_vec);
        // multipliers in the original constraint order
        let duals = (sol.z.len() >= self.constraints.len()).then(|| {
            let mut d = alloc::vec![0.0; self.constraints.len()];
            let mut row = 0;
            for pass in [true, false] {
                for (k, c) in self.constraints.iter().enumerate() {
                    if (c.sense == Sense::Eq) == pass {
                        d[k] = sol.z[row];
                        row += 1;
                    }
                }
            }
            d
        });
        SdpSolution {
            status: sol.status,
            bound: -sol.objective,
            gram,
            fvals,
            duals,
            primal_residual: sol.primal_residual,
            dual_residual: sol.dual_residual,
            gap: sol.gap,
        }
    }

    /// Objective at a given point.
    pub fn objective_value(&self, gram: &[f64], fvals: &[f64]) -> f64 {
        self.objective.eval(gram, self.gram_dim)
            + self
                .objective_f
                .iter()
                .map(|&(k, c)| c * fvals[k])
                .sum::<f64>()
    }

    /// Most negative constraint slack at a given point.
    pub fn worst_slack(&self, gram: &[f64], fvals: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.slack(gram, self.gram_dim, fvals))
            .fold(f64::INFINITY, f64::min)
    }

    /// Every emitted matrix is symmetric by construction; this checks the
    /// dense expansion anyway.
    pub fn is_symmetric(&self) -> bool {
        let n = self.gram_dim;
        core::iter::once(&self.objective)
            .chain(self.constraints.iter().map(|c| &c.gram))
            .all(|f| {
                let m = f.matrix(n);
                (0..n).all(|i| (0..i).all(|j| m[i * n + j] == m[j * n + i]))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selector_algebra() {
        let a = Sel::unit(0).sub(&Sel::unit(2).scale(0.5));
        let b = a.add(&Sel::unit(2).scale(0.5));
        assert_eq!(b, Sel::unit(0));
        assert_eq!(a.dense(3), alloc::vec![1.0, 0.0, -0.5]);
    }

    #[test]
    fn gram_form_matches_dense_matrix() {
        let f =
            GramForm::inner(2.0, Sel::unit(0), Sel::unit(1)).plus(GramForm::sq(1.0, Sel::unit(1)));
        let m = f.matrix(2);
        assert_eq!(m, alloc::vec![0.0, 1.0, 1.0, 1.0]);
        let g = [2.0, 0.5, 0.5, 3.0];
        assert_eq!(f.eval(&g, 2), 2.0 * 0.5 + 3.0);
    }

    #[test]
    fn conic_lowering_round_trips() {
        let inst = SdpInstance {
            gram_dim: 2,
            n_fvals: 1,
            objective: GramForm::inner(1.0, Sel::unit(0), Sel::unit(1)),
            objective_f: alloc::vec![],
            constraints: alloc::vec![SdpConstraint {
                label: "diag".into(),
                gram: GramForm::sq(1.0, Sel::unit(0)),
                fvals: alloc::vec![(0, 1.0)],
                rhs: 1.0,
                sense: Sense::Eq,
            }],
            points: alloc::vec![],
        };
        let p = inst.to_conic();
        p.check().unwrap();
        assert_eq!(p.rows(), 1 + 3);
        let sol = ConicSolution {
            status: SolveStatus::Optimal,
            x: alloc::vec![1.0, sqrt(2.0) * 0.25, 2.0, 0.0],
            z: alloc::vec![0.5, 0.0, 0.0, 0.0],
            objective: -0.5,
            primal_residual: 0.0,
            dual_residual: 0.0,
            gap: 0.0,
        };
        let s = inst.solution_from_conic(&sol);
        assert!((s.gram[1] - 0.25).abs() < 1e-15 && s.bound == 0.5);
        assert_eq!(s.duals.unwrap(), alloc::vec![0.5]);
    }
}
