//! Parameter sweeps over the weakly convex PEP, with the analytic baselines
//! alongside, and the gradient-descent calibration run.

use std::io::Write;

use interp_core::conic::ConicBackend;
use interp_core::pep::{
    baseline_classical, baseline_prior_pep, build_gd_pep, GdVariant, PepSpec, WcVariant,
};
use interp_core::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::sdp::{solve_instance, solve_pep};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepRule {
    Classical,
    Prior,
    Fixed(f64),
}

impl StepRule {
    pub fn parse(s: &str) -> Option<StepRule> {
        match s {
            "classical" => Some(StepRule::Classical),
            "prior" => Some(StepRule::Prior),
            _ => s
                .parse()
                .ok()
                .filter(|h: &f64| *h > 0.0)
                .map(StepRule::Fixed),
        }
    }

    pub fn label(self) -> String {
        match self {
            StepRule::Classical => "classical".into(),
            StepRule::Prior => "prior".into(),
            StepRule::Fixed(h) => h.to_string(),
        }
    }
}

/// Problem constants shared by every row of a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepParams {
    pub mu: f64,
    pub b: f64,
    pub rho: f64,
    pub r2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub rule: String,
    pub h: f64,
    pub tight: Option<f64>,
    pub classical: Option<f64>,
    pub baseline_classical: f64,
    pub baseline_prior: f64,
}

impl SweepRow {
    pub fn baseline_min(&self) -> f64 {
        self.baseline_classical.min(self.baseline_prior)
    }
}

/// Solves the requested variants for every `N`; rows come back in input
/// order regardless of scheduling.
pub fn pep_sweep(
    ns: &[usize],
    rule: StepRule,
    p: SweepParams,
    variants: &[WcVariant],
    backend: &(dyn ConicBackend + Sync),
) -> Result<Vec<SweepRow>> {
    let r = p.r2.sqrt();
    ns.par_iter()
        .map(|&n| {
            let (hc, bc) = baseline_classical(n, p.mu, p.b, r);
            let (hp, bp) = baseline_prior_pep(n, p.mu, p.b, r);
            let h = match rule {
                StepRule::Classical => hc,
                StepRule::Prior => hp,
                StepRule::Fixed(h) => h,
            };
            let solve = |variant| -> Result<Option<f64>> {
                if !variants.contains(&variant) {
                    return Ok(None);
                }
                let spec = PepSpec {
                    n,
                    h,
                    mu: p.mu,
                    b: p.b,
                    rho: p.rho,
                    r2: p.r2,
                    variant,
                };
                Ok(Some(solve_pep(&spec, backend)?.bound))
            };
            Ok(SweepRow {
                n,
                rule: rule.label(),
                h,
                tight: solve(WcVariant::Tight)?,
                classical: solve(WcVariant::Classical)?,
                baseline_classical: bc,
                baseline_prior: bp,
            })
        })
        .collect()
}

pub const SWEEP_HEADER: [&str; 7] = [
    "N", "h_rule", "h", "tight", "classical", "baseline_classical", "baseline_prior",
];

pub fn write_csv<W: Write>(rows: &[SweepRow], w: W) -> anyhow::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SWEEP_HEADER)?;
    let opt = |v: Option<f64>| v.map_or_else(String::new, |v| v.to_string());
    for r in rows {
        out.write_record([
            r.n.to_string(),
            r.rule.clone(),
            r.h.to_string(),
            opt(r.tight),
            opt(r.classical),
            r.baseline_classical.to_string(),
            r.baseline_prior.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Gradient descent on 1-smooth convex functions with `|x0|^2 <= 1`, eight
/// steps of `1/8`. This horizon reproduces the 1/6 and 1/4 pair (tight and
/// weak characterizations).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GdCalibration {
    pub n: usize,
    pub alpha: f64,
    pub l: f64,
    pub r2: f64,
}

pub const GD_CALIBRATION: GdCalibration = GdCalibration {
    n: 8,
    alpha: 0.125,
    l: 1.0,
    r2: 1.0,
};

/// `(tight, weak)` bounds on `f_N - f*`.
pub fn gd_bounds(c: GdCalibration, backend: &dyn ConicBackend) -> Result<(f64, f64)> {
    let run =
        |v| solve_instance(&build_gd_pep(c.n, c.l, c.r2, c.alpha, v), backend).map(|r| r.bound);
    let (t, w) = (run(GdVariant::Tight)?, run(GdVariant::Weak)?);
    if !(t.is_finite() && w.is_finite()) {
        return Err(Error::SolverFailure("non-finite calibration bound".into()));
    }
    Ok((t, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_rules_parse() {
        assert_eq!(StepRule::parse("classical"), Some(StepRule::Classical));
        assert_eq!(StepRule::parse("0.25"), Some(StepRule::Fixed(0.25)));
        assert_eq!(StepRule::parse("-1"), None);
        assert_eq!(StepRule::parse("fast"), None);
    }

    #[test]
    fn csv_layout_is_frozen() {
        let row = SweepRow {
            n: 1,
            rule: "classical".into(),
            h: 0.25,
            tight: Some(0.5),
            classical: None,
            baseline_classical: 1.0,
            baseline_prior: 0.75,
        };
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "N,h_rule,h,tight,classical,baseline_classical,baseline_prior\n1,classical,0.25,0.5,,1,0.75\n"
        );
    }
}
