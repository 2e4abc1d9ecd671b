//! Published counterexample instances, instantiated for concrete parameters.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use libm::{pow, sqrt};

use super::{verify_counterexample, Counterexample, Provenance};
use crate::data::{DataTriple, Dataset};
use crate::family::ConstraintFamily;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    /// Classical characterizations of five function classes.
    Table1,
    /// Consist form with `alpha = 0`, indexed by `gamma`.
    Table3,
    /// Consist form with `alpha > 0`, indexed by `beta`.
    Table4,
}

impl Table {
    pub const ALL: [Table; 3] = [Table::Table1, Table::Table3, Table::Table4];

    pub fn parse(s: &str) -> Option<Table> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "table1" | "t1" => Some(Table::Table1),
            "3" | "table3" | "t3" => Some(Table::Table3),
            "4" | "table4" | "t4" => Some(Table::Table4),
            _ => None,
        }
    }
}

/// Values substituted for the symbols in the tables.
#[derive(Clone, Debug, PartialEq)]
pub struct TableParams {
    pub mu: f64,
    pub b: f64,
    pub l: f64,
    pub m: f64,
    /// Uniform-convexity exponent.
    pub p: f64,
    pub holder_alpha: f64,
    /// Exponent on the Hölder upper model; the table prints `p`.
    pub holder_exponent: f64,
    pub t3_beta: f64,
    pub t3_gammas: Vec<f64>,
    pub t4_alpha: f64,
    pub t4_gamma: f64,
    pub t4_betas: Vec<f64>,
}

impl Default for TableParams {
    fn default() -> Self {
        TableParams {
            mu: 1.0,
            b: 1.0,
            l: 1.0,
            m: 1.0,
            p: 3.0,
            holder_alpha: 0.5,
            holder_exponent: 3.0,
            t3_beta: 0.0,
            t3_gammas: alloc::vec![-1.0, 2.0, 0.3, 0.75],
            t4_alpha: 1.0,
            t4_gamma: 0.0,
            t4_betas: alloc::vec![-0.1, 0.2, 0.03],
        }
    }
}

/// One instantiated row.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub id: String,
    pub family: ConstraintFamily,
    pub s: Dataset,
    pub x: Vec<f64>,
}

/// Verification outcome of one row.
#[derive(Clone, Debug)]
pub struct RowOutcome {
    pub id: String,
    pub row: Option<TableRow>,
    pub result: Result<Counterexample>,
}

fn row(id: String, family: ConstraintFamily, pts: &[(f64, f64, f64)], x: f64) -> Result<TableRow> {
    family.validate()?;
    let s = Dataset::from_scalars(pts)?.dedup_exact();
    Ok(TableRow {
        id,
        family,
        s,
        x: alloc::vec![x],
    })
}

fn table1(p: &TableParams) -> Vec<(String, Result<TableRow>)> {
    let (mu, b, l, m) = (p.mu, p.b, p.l, p.m);
    let mut out = Vec::new();

    let id = String::from("T1/weakly-convex");
    let fam = ConstraintFamily::WeaklyConvexBounded { mu, b };
    out.push((
        id.clone(),
        row(
            id,
            fam,
            &[(0.0, 0.0, b), (2.0 * b / mu + 1.0, mu / 2.0 - 2.0 * b, b)],
            2.0 * b / mu,
        ),
    ));

    let id = String::from("T1/uniformly-convex");
    let e = p.p;
    let fam = ConstraintFamily::UniformlyConvex { mu, p: e };
    let top = mu * pow(2.0, e) / e;
    let mid = (
        1.0,
        mu * (pow(2.0, e - 1.0) - 1.0) / e,
        mu * pow(2.0, e - 1.0) / e,
    );
    out.push((
        id.clone(),
        row(id, fam, &[(0.0, 0.0, 0.0), (2.0, top, top), mid], 0.1),
    ));

    let id = String::from("T1/holder");
    let a = p.holder_alpha;
    let fam = ConstraintFamily::HolderSmooth {
        l,
        alpha: a,
        exponent: p.holder_exponent,
    };
    let c = l * pow(1.0 + 1.0 / a, a);
    let pts = [
        (0.0, 0.0, 0.0),
        (2.0, c, c),
        (1.0, c / 2.0 - l / (a + 1.0), c / 2.0),
    ];
    out.push((id.clone(), row(id, fam, &pts, 0.5)));

    let id = String::from("T1/smooth-pl");
    let fam = ConstraintFamily::SmoothPL {
        l,
        mu: l / 2.0,
        f_star: 0.0,
    };
    out.push((
        id.clone(),
        row(id, fam, &[(0.0, 0.0, 0.0), (1.0, l / 2.0, l)], 0.5),
    ));

    let id = String::from("T1/lipschitz-hessian");
    let fam = ConstraintFamily::LipschitzHessian { m };
    let lh = || -> Result<TableRow> {
        fam.validate()?;
        let s = Dataset::new(alloc::vec![
            DataTriple::scalar(0.0, 0.0, 0.0).with_hess(0.0),
            DataTriple::scalar(1.0, -m / 6.0, 0.0).with_hess(0.0),
        ])?;
        Ok(TableRow {
            id: id.clone(),
            family: fam,
            s,
            x: alloc::vec![0.5],
        })
    };
    out.push((id.clone(), lh()));
    out
}

fn table3(p: &TableParams) -> Vec<(String, Result<TableRow>)> {
    let beta = p.t3_beta;
    p.t3_gammas
        .iter()
        .map(|&gamma| {
            let id = format!("T3/gamma={gamma}");
            let fam = ConstraintFamily::ConsistForm {
                alpha: 0.0,
                beta,
                gamma,
            };
            let q = beta / (1.0 - 2.0 * gamma);
            let r = if gamma < 0.0 {
                let t = (-1.0, q - 1.0 + gamma, -2.0 * q);
                row(id.clone(), fam, &[(0.0, 0.0, 1.0), t, t], -0.5)
            } else if gamma > 1.0 {
                row(
                    id.clone(),
                    fam,
                    &[(0.0, 0.0, 1.0), (-1.0, q - 1.0 - gamma, -2.0 * q + 2.0)],
                    -0.5,
                )
            } else if gamma > 0.0 && gamma <= 0.5 {
                let pts = [
                    (0.0, 0.0, 1.0),
                    (-1.0, q - 1.0 + gamma, -2.0 * q),
                    (-1.1, q - 1.0 + gamma, -2.0 * q + 1.0),
                ];
                row(id.clone(), fam, &pts, -0.5)
            } else if gamma > 0.5 && gamma < 1.0 {
                let pts = [
                    (0.0, 0.0, 1.0),
                    (-1.0, q - 1.0 - gamma, -2.0 * q + 2.0),
                    (-1.1, q - 1.0 - gamma, -2.0 * q + 1.0),
                ];
                row(id.clone(), fam, &pts, -0.5)
            } else {
                Err(Error::ParameterOutOfDomain(format!(
                    "no row for gamma = {gamma}"
                )))
            };
            (id, r)
        })
        .collect()
}

fn table4(p: &TableParams) -> Vec<(String, Result<TableRow>)> {
    let (alpha, gamma) = (p.t4_alpha, p.t4_gamma);
    p.t4_betas
        .iter()
        .map(|&beta| {
            let id = format!("T4/beta={beta}");
            let fam = ConstraintFamily::ConsistForm { alpha, beta, gamma };
            let r = (1.0 - 2.0 * gamma) / (4.0 * alpha);
            let pair = [(0.0, 0.0, 0.0), (1.0, -beta + (1.0 - gamma) * r - r * r, r)];
            let threshold = 1.0 / (16.0 * alpha * alpha);
            let out = if beta < 0.0 {
                row(id.clone(), fam, &pair, 0.5)
            } else if beta > threshold {
                let den = 16.0 * alpha * alpha * beta - 1.0;
                if den == 0.0 {
                    Err(Error::ParameterOutOfDomain(String::from(
                        "probe formula is singular",
                    )))
                } else {
                    row(id.clone(), fam, &pair, 1.0 / den + 1.0)
                }
            } else if beta > 0.0 {
                let k = (1.0 - 2.0 * gamma) * (1.0 - 2.0 * gamma) - 16.0 * alpha * beta;
                let sk = sqrt(k);
                let t = (
                    4.0 * alpha,
                    1.0 - 4.0 * gamma + 2.0 * gamma * gamma + (1.0 - gamma) * sk,
                    1.0 - 2.0 * gamma + sk,
                );
                if k <= 0.0 {
                    Err(Error::ParameterOutOfDomain(format!(
                        "K = {k} must be positive"
                    )))
                } else {
                    row(
                        id.clone(),
                        fam,
                        &[(0.0, 0.0, 0.0), t],
                        2.0 * alpha * (1.0 + 1.0 / k),
                    )
                }
            } else {
                Err(Error::ParameterOutOfDomain(format!(
                    "no row for beta = {beta}"
                )))
            };
            (id, out)
        })
        .collect()
}

/// Instantiates every row of a table; rows whose formulas break return an error.
pub fn table_rows(which: Table, params: &TableParams) -> Vec<(String, Result<TableRow>)> {
    match which {
        Table::Table1 => table1(params),
        Table::Table3 => table3(params),
        Table::Table4 => table4(params),
    }
}

/// Verifies every row; failures come back as [`Error::RowFailed`].
pub fn table_suite(which: Table, params: &TableParams, tol: f64) -> Vec<RowOutcome> {
    table_rows(which, params)
        .into_iter()
        .map(|(id, r)| {
            let failed = |e: Error| Error::RowFailed {
                row: id.clone(),
                reason: alloc::boxed::Box::new(e),
            };
            match r {
                Ok(tr) => {
                    let result = verify_counterexample(&tr.s, &tr.x, &tr.family, tol, None)
                        .map(|mut c| {
                            c.provenance = Provenance::PaperTable;
                            c
                        })
                        .map_err(failed);
                    RowOutcome {
                        id: id.clone(),
                        row: Some(tr),
                        result,
                    }
                }
                Err(e) => RowOutcome {
                    id: id.clone(),
                    row: None,
                    result: Err(failed(e)),
                },
            }
        })
        .collect()
}
