//! Primal-dual interior-point method for Gram-lifted SDPs.
//!
//! Works on `min <C,X> + c_f'F  s.t.  A(X) + A_f F + slack = b`, `X ⪰ 0`,
//! one nonnegative slack per inequality. Constraint matrices stay in their
//! sparse low-rank form `sum c sym(u v')`, so the Schur complement costs
//! `O(m^2 r^2 nnz)` instead of needing dense `n x n` data per row. Search
//! direction is HKM with a Mehrotra predictor-corrector; free variables are
//! handled through the augmented Schur system.

use interp_core::conic::{Capabilities, ConicBackend, SolveStatus};
use interp_core::pep::{SdpInstance, SdpSolution, Sense};
use interp_core::Result;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

/// Tuning knobs of [`Ipm`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ipm {
    pub tol: f64,
    pub max_iter: usize,
    /// Safeguard `tr(G) <= T`, with `T` relative to the largest right-hand
    /// side. PEPs often have unbounded feasible sets (the initial iterate can
    /// drift away from the optimum at no cost), which leaves the dual without
    /// interior points. A solution whose safeguard multiplier is nonzero is
    /// reported as inaccurate.
    pub trace_bound: Option<f64>,
}

impl Default for Ipm {
    fn default() -> Self {
        Ipm {
            tol: 1e-7,
            max_iter: 150,
            trace_bound: Some(1e3),
        }
    }
}

/// `w p q'` term of a factored product.
type RankOne = (f64, DVector<f64>, DVector<f64>);

struct Term {
    c: f64,
    u: Vec<(usize, f64)>,
    v: Vec<(usize, f64)>,
}

struct Row {
    terms: Vec<Term>,
    f: Vec<(usize, f64)>,
    b: f64,
    /// Index into the slack vector and its sign.
    slack: Option<(usize, f64)>,
    scale: f64,
}

struct Problem {
    n: usize,
    nf: usize,
    ns: usize,
    rows: Vec<Row>,
    c: DMatrix<f64>,
    cf: DVector<f64>,
}

fn sparse_dot(u: &[(usize, f64)], p: &DVector<f64>) -> f64 {
    u.iter().map(|&(k, a)| a * p[k]).sum()
}

fn mat_sel(m: &DMatrix<f64>, u: &[(usize, f64)]) -> DVector<f64> {
    let mut out = DVector::zeros(m.nrows());
    for &(k, a) in u {
        out.axpy(a, &m.column(k), 1.0);
    }
    out
}

fn sym(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

impl Problem {
    fn new(inst: &SdpInstance, trace_bound: Option<f64>) -> Self {
        let n = inst.gram_dim;
        let mut ns = 0;
        let mut rows: Vec<Row> = inst
            .constraints
            .iter()
            .map(|con| {
                let terms: Vec<Term> = con
                    .gram
                    .0
                    .iter()
                    .filter(|(c, u, v)| *c != 0.0 && !u.0.is_empty() && !v.0.is_empty())
                    .map(|(c, u, v)| Term {
                        c: *c,
                        u: u.0.clone(),
                        v: v.0.clone(),
                    })
                    .collect();
                let dense = con.gram.matrix(n);
                let norm = (dense.iter().map(|v| v * v).sum::<f64>()
                    + con.fvals.iter().map(|f| f.1 * f.1).sum::<f64>())
                .sqrt();
                let scale = if norm > 0.0 { norm } else { 1.0 };
                let slack = match con.sense {
                    Sense::Eq => None,
                    Sense::Le => Some((ns, 1.0 / scale)),
                    Sense::Ge => Some((ns, -1.0 / scale)),
                };
                if slack.is_some() {
                    ns += 1;
                }
                Row {
                    terms: terms
                        .into_iter()
                        .map(|t| Term {
                            c: t.c / scale,
                            ..t
                        })
                        .collect(),
                    f: con.fvals.iter().map(|&(k, v)| (k, v / scale)).collect(),
                    b: con.rhs / scale,
                    slack,
                    scale,
                }
            })
            .collect();
        if let Some(t) = trace_bound {
            let top = inst
                .constraints
                .iter()
                .map(|c| c.rhs.abs())
                .fold(1.0, f64::max);
            let scale = (n as f64).sqrt();
            rows.push(Row {
                terms: (0..n)
                    .map(|k| Term {
                        c: 1.0 / scale,
                        u: vec![(k, 1.0)],
                        v: vec![(k, 1.0)],
                    })
                    .collect(),
                f: Vec::new(),
                b: t * top / scale,
                slack: Some((ns, 1.0 / scale)),
                scale,
            });
            ns += 1;
        }
        let c = -DMatrix::from_row_slice(n, n, &inst.objective.matrix(n));
        let mut cf = DVector::zeros(inst.n_fvals);
        for &(k, v) in &inst.objective_f {
            cf[k] -= v;
        }
        Problem {
            n,
            nf: inst.n_fvals,
            ns,
            rows,
            c,
            cf,
        }
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    /// `A(X) + A_f F + A_s s`.
    fn apply(&self, x: &DMatrix<f64>, f: &DVector<f64>, s: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.m(),
            self.rows.iter().map(|r| {
                let mut v = 0.0;
                for t in &r.terms {
                    for &(i, a) in &t.u {
                        for &(j, b) in &t.v {
                            v += t.c * a * b * x[(i, j)];
                        }
                    }
                }
                v += r.f.iter().map(|&(k, a)| a * f[k]).sum::<f64>();
                if let Some((k, sg)) = r.slack {
                    v += sg * s[k];
                }
                v
            }),
        )
    }

    /// `sum y_i A_i`.
    fn adjoint(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for (r, &yi) in self.rows.iter().zip(y.iter()) {
            if yi == 0.0 {
                continue;
            }
            for t in &r.terms {
                for &(i, a) in &t.u {
                    for &(j, b) in &t.v {
                        let w = 0.5 * yi * t.c * a * b;
                        out[(i, j)] += w;
                        out[(j, i)] += w;
                    }
                }
            }
        }
        out
    }

    fn adjoint_f(&self, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.nf);
        for (r, &yi) in self.rows.iter().zip(y.iter()) {
            for &(k, a) in &r.f {
                out[k] += a * yi;
            }
        }
        out
    }

    fn adjoint_s(&self, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.ns);
        for (r, &yi) in self.rows.iter().zip(y.iter()) {
            if let Some((k, sg)) = r.slack {
                out[k] += sg * yi;
            }
        }
        out
    }

    fn b(&self) -> DVector<f64> {
        DVector::from_iterator(self.m(), self.rows.iter().map(|r| r.b))
    }

    /// `M_ij = tr(A_i X A_j Z^-1)`.
    fn schur(&self, x: &DMatrix<f64>, zi: &DMatrix<f64>) -> DMatrix<f64> {
        let m = self.m();
        // rank-one factors of X A_j Z^-1 = sum w p q'
        let factors: Vec<Vec<RankOne>> = self
            .rows
            .par_iter()
            .map(|r| {
                let mut out = Vec::with_capacity(2 * r.terms.len());
                for t in &r.terms {
                    let (xu, xv) = (mat_sel(x, &t.u), mat_sel(x, &t.v));
                    let (zu, zv) = (mat_sel(zi, &t.u), mat_sel(zi, &t.v));
                    out.push((0.5 * t.c, xu, zv));
                    out.push((0.5 * t.c, xv, zu));
                }
                out
            })
            .collect();
        let cols: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|j| {
                let fj = &factors[j];
                (0..m)
                    .map(|i| {
                        if i > j {
                            return 0.0;
                        }
                        let mut s = 0.0;
                        for t in &self.rows[i].terms {
                            for (w, p, q) in fj {
                                s += 0.5
                                    * t.c
                                    * w
                                    * (sparse_dot(&t.u, p) * sparse_dot(&t.v, q)
                                        + sparse_dot(&t.v, p) * sparse_dot(&t.u, q));
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let mut out = DMatrix::zeros(m, m);
        for j in 0..m {
            for i in 0..=j {
                out[(i, j)] = cols[j][i];
                out[(j, i)] = cols[j][i];
            }
        }
        out
    }
}

/// Largest step `a` with `X + a D ⪰ 0`, capped at `1e6`.
fn psd_step(x: &DMatrix<f64>, d: &DMatrix<f64>) -> Option<f64> {
    let l = x.clone().cholesky()?.l();
    let li_d = l.solve_lower_triangular(d)?;
    let w = l.solve_lower_triangular(&li_d.transpose())?;
    let lam = sym(w).symmetric_eigenvalues().min();
    Some(if lam >= 0.0 {
        1e6
    } else {
        (-1.0 / lam).min(1e6)
    })
}

fn lp_step(x: &DVector<f64>, d: &DVector<f64>) -> f64 {
    x.iter()
        .zip(d.iter())
        .filter(|(_, &di)| di < 0.0)
        .map(|(&xi, &di)| -xi / di)
        .fold(1e6, f64::min)
}

#[derive(Clone)]
struct Point {
    x: DMatrix<f64>,
    f: DVector<f64>,
    s: DVector<f64>,
    y: DVector<f64>,
    z: DMatrix<f64>,
    zs: DVector<f64>,
}

struct Dir {
    x: DMatrix<f64>,
    f: DVector<f64>,
    s: DVector<f64>,
    y: DVector<f64>,
    z: DMatrix<f64>,
    zs: DVector<f64>,
}

/// Augmented Schur system with one step of iterative refinement.
struct Kkt {
    mat: DMatrix<f64>,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl Kkt {
    fn solve(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        let mut x = self.lu.solve(rhs)?;
        for _ in 0..2 {
            let r = rhs - &self.mat * &x;
            x += self.lu.solve(&r)?;
        }
        Some(x)
    }
}

struct Residuals {
    p: DVector<f64>,
    d: DMatrix<f64>,
    ds: DVector<f64>,
    df: DVector<f64>,
}

impl Ipm {
    fn residuals(pr: &Problem, pt: &Point, b: &DVector<f64>) -> Residuals {
        Residuals {
            p: b - pr.apply(&pt.x, &pt.f, &pt.s),
            d: &pr.c - pr.adjoint(&pt.y) - &pt.z,
            ds: -pr.adjoint_s(&pt.y) - &pt.zs,
            df: &pr.cf - pr.adjoint_f(&pt.y),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn direction(
        pr: &Problem,
        pt: &Point,
        res: &Residuals,
        zi: &DMatrix<f64>,
        kkt: &Kkt,
        target: f64,
        corr: Option<(&DMatrix<f64>, &DVector<f64>)>,
    ) -> Option<Dir> {
        // complementarity targets: X Z -> target I - corr, s z -> target - corr
        let mut rc = DMatrix::identity(pr.n, pr.n) * target - &pt.x * &pt.z;
        let mut rcs =
            DVector::from_iterator(pr.ns, (0..pr.ns).map(|k| target - pt.s[k] * pt.zs[k]));
        if let Some((cx, cs)) = corr {
            rc -= cx;
            rcs -= cs;
        }
        // ΔX = (rc - X ΔZ) Z^-1 with ΔZ = R_d - A*(Δy); split off the Δy part
        let h = sym((&rc - &pt.x * &res.d) * zi);
        let hs = DVector::from_iterator(
            pr.ns,
            (0..pr.ns).map(|k| (rcs[k] - pt.s[k] * res.ds[k]) / pt.zs[k]),
        );
        let zero_f = DVector::zeros(pr.nf);
        let rhs_p = &res.p - pr.apply(&h, &zero_f, &hs);
        let mut rhs = DVector::zeros(pr.m() + pr.nf);
        rhs.rows_mut(0, pr.m()).copy_from(&rhs_p);
        rhs.rows_mut(pr.m(), pr.nf).copy_from(&res.df);
        let sol = kkt.solve(&rhs)?;
        let dy = sol.rows(0, pr.m()).into_owned();
        let df = sol.rows(pr.m(), pr.nf).into_owned();
        let dz = &res.d - pr.adjoint(&dy);
        let dx = sym((&rc - &pt.x * &dz) * zi);
        let dzs = &res.ds - pr.adjoint_s(&dy);
        let dxs = DVector::from_iterator(
            pr.ns,
            (0..pr.ns).map(|k| (rcs[k] - pt.s[k] * dzs[k]) / pt.zs[k]),
        );
        Some(Dir {
            x: dx,
            f: df,
            s: dxs,
            y: dy,
            z: dz,
            zs: dzs,
        })
    }

    fn steps(pt: &Point, d: &Dir) -> Option<(f64, f64)> {
        let ap = psd_step(&pt.x, &d.x)?.min(lp_step(&pt.s, &d.s));
        let ad = psd_step(&pt.z, &d.z)?.min(lp_step(&pt.zs, &d.zs));
        Some((ap, ad))
    }

    pub fn solve(&self, inst: &SdpInstance) -> Result<SdpSolution> {
        let pr = Problem::new(inst, self.trace_bound);
        let (n, m) = (pr.n, pr.m());
        let nu = (n + pr.ns) as f64;
        let b = pr.b();
        let bnorm = b.norm();
        let cnorm = pr.c.norm() + pr.cf.norm();
        let xi = 10.0f64.max((n as f64).sqrt()).max(bnorm);
        let eta = 10.0f64.max((n as f64).sqrt()).max(cnorm);
        let mut pt = Point {
            x: DMatrix::identity(n, n) * xi,
            f: DVector::zeros(pr.nf),
            s: DVector::from_element(pr.ns, xi),
            y: DVector::zeros(m),
            z: DMatrix::identity(n, n) * eta,
            zs: DVector::from_element(pr.ns, eta),
        };
        let mut status = SolveStatus::Failed;
        let mut stats = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
        // best iterate by the worst of the three measures, and stall count
        let mut best: Option<(f64, Point, (f64, f64, f64))> = None;
        let mut stalled = 0;
        for _ in 0..self.max_iter {
            let res = Self::residuals(&pr, &pt, &b);
            let pobj = pr.c.dot(&pt.x) + pr.cf.dot(&pt.f);
            let dobj = b.dot(&pt.y);
            let pinf = res.p.norm() / (1.0 + bnorm);
            let dinf = (res.d.norm() + res.ds.norm() + res.df.norm()) / (1.0 + cnorm);
            let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
            stats = (pinf, dinf, gap);
            let merit = pinf.max(dinf).max(gap);
            if best.as_ref().is_none_or(|b| merit < b.0) {
                best = Some((merit, pt.clone(), stats));
                stalled = 0;
            } else {
                stalled += 1;
            }
            if merit < self.tol {
                status = SolveStatus::Optimal;
                break;
            }
            if stalled > 10 {
                break;
            }
            if pt.x.norm() > 1e12 || pt.y.norm() > 1e12 {
                status = if pt.y.norm() > pt.x.norm() {
                    SolveStatus::Infeasible
                } else {
                    SolveStatus::Unbounded
                };
                break;
            }
            let mu = (pt.x.dot(&pt.z) + pt.s.dot(&pt.zs)) / nu;
            let Some(zc) = pt.z.clone().cholesky() else {
                break;
            };
            let zi = zc.inverse();
            let mut kkt = DMatrix::zeros(m + pr.nf, m + pr.nf);
            let mut schur = pr.schur(&pt.x, &zi);
            for (i, r) in pr.rows.iter().enumerate() {
                if let Some((k, sg)) = r.slack {
                    schur[(i, i)] += sg * sg * pt.s[k] / pt.zs[k];
                }
            }
            kkt.view_mut((0, 0), (m, m)).copy_from(&schur);
            for (i, r) in pr.rows.iter().enumerate() {
                for &(k, a) in &r.f {
                    kkt[(i, m + k)] += a;
                    kkt[(m + k, i)] += a;
                }
            }
            let lu = Kkt {
                lu: kkt.clone().lu(),
                mat: kkt,
            };
            let Some(pred) = Self::direction(&pr, &pt, &res, &zi, &lu, 0.0, None) else {
                break;
            };
            let Some((ap, ad)) = Self::steps(&pt, &pred) else {
                break;
            };
            let (ap, ad) = (ap.min(1.0), ad.min(1.0));
            let mu_aff = ((&pt.x + &pred.x * ap).dot(&(&pt.z + &pred.z * ad))
                + (&pt.s + &pred.s * ap).dot(&(&pt.zs + &pred.zs * ad)))
                / nu;
            let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
            let cx = &pred.x * &pred.z;
            let cs = pred.s.component_mul(&pred.zs);
            let Some(dir) = Self::direction(&pr, &pt, &res, &zi, &lu, sigma * mu, Some((&cx, &cs)))
            else {
                break;
            };
            let Some((ap, ad)) = Self::steps(&pt, &dir) else {
                break;
            };
            let gamma = 0.9 + 0.09 * ap.min(ad).min(1.0);
            let (ap, ad) = ((gamma * ap).min(1.0), (gamma * ad).min(1.0));
            pt.x += &dir.x * ap;
            pt.x = sym(pt.x.clone());
            pt.f += &dir.f * ap;
            pt.s += &dir.s * ap;
            pt.y += &dir.y * ad;
            pt.z += &dir.z * ad;
            pt.z = sym(pt.z.clone());
            pt.zs += &dir.zs * ad;
        }
        if status != SolveStatus::Optimal {
            if let Some((_, p, st)) = best {
                (pt, stats) = (p, st);
            }
        }
        if status == SolveStatus::Failed && stats.0 < 1e-5 && stats.1 < 1e-5 && stats.2 < 1e-5 {
            status = SolveStatus::Inaccurate;
        }
        let gram: Vec<f64> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| pt.x[(i, j)])
            .collect();
        let fvals: Vec<f64> = pt.f.iter().copied().collect();
        let k = inst.constraints.len();
        if self.trace_bound.is_some() && status == SolveStatus::Optimal {
            let r = &pr.rows[k];
            let lambda = -pt.y[k] / r.scale;
            if lambda * r.b * r.scale > 1e-6 * (1.0 + inst.objective_value(&gram, &fvals).abs()) {
                status = SolveStatus::Inaccurate;
            }
        }
        let duals = pr.rows[..k]
            .iter()
            .zip(pt.y.iter())
            .map(|(r, &yi)| match r.slack {
                Some((_, sg)) => -sg.signum() * yi / r.scale,
                None => yi / r.scale,
            })
            .collect();
        Ok(SdpSolution {
            status,
            bound: inst.objective_value(&gram, &fvals),
            gram,
            fvals,
            duals: Some(duals),
            primal_residual: stats.0,
            dual_residual: stats.1,
            gap: stats.2,
        })
    }
}

impl ConicBackend for Ipm {
    fn name(&self) -> &str {
        "ipm"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            nonneg: true,
            soc: false,
            psd: true,
        }
    }

    fn tolerance(&self) -> f64 {
        self.tol
    }

    fn solve_sdp(&self, instance: &SdpInstance) -> Result<SdpSolution> {
        self.solve(instance)
    }
}
