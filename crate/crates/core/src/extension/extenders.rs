//! Closed-form extensions for the families where one is known.

use alloc::vec::Vec;

use super::project::{project_ball, BallSpec};
use crate::constraints::satisfies;
use crate::data::Dataset;
use crate::family::{ConstraintFamily, ProblemConfig};
use crate::vecops::{dist2, dot_diff};
use crate::{Error, Result};

fn require_feasible(family: &ConstraintFamily, s: &Dataset, x: &[f64]) -> Result<()> {
    if x.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: x.len(),
        });
    }
    let sat = satisfies(family, s, ProblemConfig::DEFAULT_TOLERANCE)?;
    if !sat.ok {
        return Err(Error::InputNotFeasible(sat.worst));
    }
    Ok(())
}

/// Index of the first maximum.
fn argmax(values: impl Iterator<Item = f64>) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (k, v) in values.enumerate() {
        if v > best.1 {
            best = (k, v);
        }
    }
    best
}

/// Max-of-supports extension: `f = max_i f_i + <g_i, x - x_i>`, `g = g_{i*}`.
pub fn extend_convex(s: &Dataset, x: &[f64]) -> Result<(f64, Vec<f64>)> {
    require_feasible(&ConstraintFamily::Convex, s, x)?;
    Ok(convex_unchecked(s, x))
}

pub(crate) fn convex_unchecked(s: &Dataset, x: &[f64]) -> (f64, Vec<f64>) {
    let (k, f) = argmax(s.iter().map(|t| t.f + dot_diff(&t.g, x, &t.x)));
    (f, s.triples()[k].g.clone())
}

/// Extension of the tight weakly convex constraint: with `C_i` the
/// projection of `x` onto the critical ball of triple `i`,
/// `f = max_i f_i + <g_i, x - x_i> - mu/2 |x - x_i|^2 + mu/2 |x - C_i|^2`
/// and `g = g_{i*} + mu (x_{i*} - C_{i*})`.
pub fn extend_wc_tight(s: &Dataset, x: &[f64], mu: f64, b: f64) -> Result<(f64, Vec<f64>)> {
    if mu.is_nan() || mu <= 0.0 {
        return Err(Error::ParameterOutOfDomain(alloc::format!(
            "extension needs mu > 0, got {mu}"
        )));
    }
    require_feasible(&ConstraintFamily::WeaklyConvexBoundedTight { mu, b }, s, x)?;
    Ok(wc_tight_unchecked(s, x, mu, b))
}

pub(crate) fn wc_tight_unchecked(s: &Dataset, x: &[f64], mu: f64, b: f64) -> (f64, Vec<f64>) {
    let projections: Vec<Vec<f64>> = s
        .iter()
        .map(|t| project_ball(x, &BallSpec::critical(&t.x, &t.g, mu, b)))
        .collect();
    let (k, f) = argmax(s.iter().zip(&projections).map(|(t, c)| {
        t.f + dot_diff(&t.g, x, &t.x) - 0.5 * mu * dist2(x, &t.x) + 0.5 * mu * dist2(x, c)
    }));
    let t = &s.triples()[k];
    let c = &projections[k];
    let g =
        t.g.iter()
            .zip(t.x.iter().zip(c))
            .map(|(g, (xi, c))| g + mu * (xi - c))
            .collect();
    (f, g)
}

/// Extension of the quadratic class from anchor `i`:
/// `g = g_i + mu (x - x_i)`, `f = f_i + <g + g_i, x - x_i>/2`.
pub fn extend_quadratic(s: &Dataset, x: &[f64], mu: f64, m: f64) -> Result<(f64, Vec<f64>)> {
    require_feasible(&ConstraintFamily::QuadraticClass { mu, m }, s, x)?;
    Ok(quadratic_from_anchor(s, x, mu, 0))
}

/// Same as [`extend_quadratic`] from an explicit anchor; no feasibility check.
pub fn quadratic_from_anchor(s: &Dataset, x: &[f64], mu: f64, anchor: usize) -> (f64, Vec<f64>) {
    let t = &s.triples()[anchor];
    let g: Vec<f64> =
        t.g.iter()
            .zip(x.iter().zip(&t.x))
            .map(|(g, (x, xi))| g + mu * (x - xi))
            .collect();
    let mut f = t.f;
    for k in 0..x.len() {
        f += 0.5 * (g[k] + t.g[k]) * (x[k] - t.x[k]);
    }
    (f, g)
}
