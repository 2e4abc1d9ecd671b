//! SDP backends, PEP solving and Gram recovery.

mod clarabel;
mod dump;
mod ipm;

use interp_core::conic::{ConicBackend, SolveStatus};
use interp_core::pep::{build_wc_pep, rebuild_points, PepResult, PepSpec, SdpInstance};
use interp_core::{satisfies, DataTriple, Dataset, Error, Result, Satisfaction};
use nalgebra::{DMatrix, SymmetricEigen};

pub use self::clarabel::Clarabel;
pub use dump::write_instance;
pub use ipm::Ipm;

/// Eigenvalues below `-NEG_EIG_TOL * max(1, λ_max)` are an error rather than
/// roundoff.
pub const NEG_EIG_TOL: f64 = 1e-7;

/// Columns `P_k` with `G ≈ P'P`, one row per retained eigenvalue.
pub fn factor_gram(gram: &[f64], n: usize) -> Result<Vec<Vec<f64>>> {
    let g = DMatrix::from_row_slice(n, n, gram);
    let g = (&g + g.transpose()) * 0.5;
    let eig = SymmetricEigen::new(g);
    let top = eig.eigenvalues.max().max(1.0);
    let lo = eig.eigenvalues.min();
    if lo < -NEG_EIG_TOL * top {
        return Err(Error::InaccurateSolution(format!(
            "Gram matrix has eigenvalue {lo:e}"
        )));
    }
    let keep: Vec<usize> = (0..n)
        .filter(|&k| eig.eigenvalues[k] > 1e-12 * top)
        .collect();
    Ok((0..n)
        .map(|col| {
            keep.iter()
                .map(|&k| eig.eigenvalues[k].sqrt() * eig.eigenvectors[(col, k)])
                .collect()
        })
        .collect())
}

/// Solves any instance and factors its Gram matrix.
pub fn solve_instance(inst: &SdpInstance, backend: &dyn ConicBackend) -> Result<PepResult> {
    let sol = backend.solve_sdp(inst)?;
    match sol.status {
        SolveStatus::Optimal | SolveStatus::Inaccurate => {}
        s => {
            return Err(Error::SolverFailure(format!(
                "{} returned {s:?}",
                backend.name()
            )))
        }
    }
    let recovered_points = factor_gram(&sol.gram, inst.gram_dim).ok();
    Ok(PepResult {
        bound: sol.bound,
        status: sol.status,
        gram: sol.gram,
        fvals: sol.fvals,
        recovered_points,
        duals: sol.duals,
    })
}

/// Builds and solves the weakly convex PEP.
pub fn solve_pep(spec: &PepSpec, backend: &dyn ConicBackend) -> Result<PepResult> {
    spec.validate()?;
    solve_instance(&build_wc_pep(spec), backend)
}

/// Labelled triples rebuilt from a solved instance.
pub fn recovered_triples(inst: &SdpInstance, res: &PepResult) -> Result<Vec<(String, DataTriple)>> {
    let cols = match &res.recovered_points {
        Some(c) => c.clone(),
        None => factor_gram(&res.gram, inst.gram_dim)?,
    };
    Ok(rebuild_points(inst, &cols, &res.fvals))
}

/// Residual check of the recovered points under the variant's family.
pub fn check_recovered(spec: &PepSpec, res: &PepResult, tol: f64) -> Result<Satisfaction> {
    let inst = build_wc_pep(spec);
    let triples = recovered_triples(&inst, res)?
        .into_iter()
        .map(|(_, t)| t)
        .collect();
    satisfies(
        &spec.variant.family(spec.mu, spec.b),
        &Dataset::new(triples)?,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use interp_core::pep::{build_gd_pep, GdVariant, WcVariant};

    #[test]
    fn factor_round_trip() {
        let p = [[1.0, 2.0, 0.0], [0.5, -1.0, 3.0]];
        let n = 3;
        let g: Vec<f64> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| p[0][i] * p[0][j] + p[1][i] * p[1][j])
            .collect();
        let cols = factor_gram(&g, n).unwrap();
        for i in 0..n {
            for j in 0..n {
                let v: f64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
                assert!((v - g[i * n + j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn indefinite_gram_is_rejected() {
        assert!(factor_gram(&[1.0, 0.0, 0.0, -0.1], 2).is_err());
    }

    #[test]
    fn one_step_gradient_descent_matches_known_bound() {
        // N = 1, alpha = 1/L: L R^2 / (4N + 2) = 1/6
        let inst = build_gd_pep(1, 1.0, 1.0, 1.0, GdVariant::Tight);
        let r = solve_instance(&inst, &Ipm::default()).unwrap();
        assert!((r.bound - 1.0 / 6.0).abs() < 1e-6, "{}", r.bound);
    }

    #[test]
    fn backends_agree_on_small_wc_instance() {
        let spec = PepSpec {
            n: 1,
            h: 0.25,
            mu: 1.0,
            b: 1.0,
            rho: 2.0,
            r2: 0.125,
            variant: WcVariant::Tight,
        };
        let a = solve_pep(&spec, &Ipm::default()).unwrap();
        let b = solve_pep(&spec, &Clarabel::default()).unwrap();
        assert!(
            (a.bound - b.bound).abs() < 1e-6,
            "{} vs {}",
            a.bound,
            b.bound
        );
    }
}
