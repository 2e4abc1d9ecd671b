//! Randomized multi-start hill climbing over `(S, x)`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::{verify_counterexample, SearchReport};
use crate::conic::ConicBackend;
use crate::constraints::eval_points;
use crate::data::{DataTriple, Dataset};
use crate::extension::{
    extend_convex, extend_quadratic, extend_wc_tight, extension_gap, GapOptions,
};
use crate::family::{ConstraintFamily, ProblemConfig};
use crate::vecops::norm;
use crate::{Error, Result};

const BOX: f64 = 2.0;
const PATIENCE: usize = 20;

/// Interval of values `f` that keeps `others ∪ {t}` feasible, with `t.f`
/// ignored. `None` when empty.
pub fn feasible_value_interval(
    family: &ConstraintFamily,
    others: &[DataTriple],
    t: &DataTriple,
    tol: f64,
) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut at0 = t.clone();
    at0.f = 0.0;
    let mut at1 = t.clone();
    at1.f = 1.0;
    let mut add = |r0: &[f64], r1: &[f64]| -> bool {
        for (c0, c1) in r0.iter().zip(r1) {
            let s = c1 - c0;
            if s.abs() <= 1e-12 {
                if *c0 < -tol {
                    return false;
                }
            } else if s > 0.0 {
                lo = lo.max(-c0 / s);
            } else {
                hi = hi.min(-c0 / s);
            }
        }
        true
    };
    let (v0, v1) = (at0.view(), at1.view());
    let ok = add(
        eval_points(family, v0, v0).components(),
        eval_points(family, v1, v1).components(),
    ) && others.iter().all(|o| {
        let w = o.view();
        add(
            eval_points(family, v0, w).components(),
            eval_points(family, v1, w).components(),
        ) && add(
            eval_points(family, w, v0).components(),
            eval_points(family, w, v1).components(),
        )
    });
    (ok && lo <= hi).then_some((lo, hi))
}

fn gradient_bound(family: &ConstraintFamily) -> Option<f64> {
    match *family {
        ConstraintFamily::WeaklyConvexBounded { b, .. }
        | ConstraintFamily::WeaklyConvexBoundedTight { b, .. } => Some(b),
        _ => None,
    }
}

struct Hunter<'a> {
    family: &'a ConstraintFamily,
    d: usize,
    tol: f64,
    rng: ChaCha8Rng,
    backend: Option<&'a dyn ConicBackend>,
}

impl Hunter<'_> {
    fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    fn jitter(&mut self, v: &mut [f64], step: f64) {
        for e in v {
            *e += step * self.normal();
        }
    }

    fn point(&mut self) -> Vec<f64> {
        (0..self.d)
            .map(|_| self.rng.random_range(-BOX..BOX))
            .collect()
    }

    fn gradient(&mut self) -> Vec<f64> {
        let mut g: Vec<f64> = (0..self.d).map(|_| self.normal()).collect();
        if let Some(b) = gradient_bound(self.family) {
            let r = self.rng.random::<f64>() * b / norm(&g).max(1e-300);
            g.iter_mut().for_each(|v| *v *= r);
        }
        g
    }

    fn value_in(&mut self, (lo, hi): (f64, f64)) -> f64 {
        let e: f64 = Exp1.sample(&mut self.rng);
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => lo + (hi - lo) * self.rng.random::<f64>(),
            (true, false) => lo + e,
            (false, true) => hi - e,
            (false, false) => self.normal(),
        }
    }

    fn extend(&self, s: &Dataset, x: &[f64]) -> Option<(f64, Vec<f64>)> {
        match *self.family {
            ConstraintFamily::Convex => extend_convex(s, x).ok(),
            ConstraintFamily::QuadraticClass { mu, m } => extend_quadratic(s, x, mu, m).ok(),
            ConstraintFamily::WeaklyConvexBoundedTight { mu, b } if mu > 0.0 => {
                extend_wc_tight(s, x, mu, b).ok()
            }
            _ => None,
        }
    }

    /// Grows a feasible dataset one triple at a time.
    fn sample(&mut self, n: usize) -> Option<Dataset> {
        let mut triples: Vec<DataTriple> = Vec::with_capacity(n);
        'grow: while triples.len() < n {
            let x = self.point();
            let use_extender = !triples.is_empty() && self.rng.random::<f64>() < 0.5;
            if use_extender {
                let s = Dataset::new(triples.clone()).ok()?;
                if let Some((f, g)) = self.extend(&s, &x) {
                    triples.push(DataTriple::new(x, f, g));
                    continue;
                }
            }
            for _ in 0..20 {
                let mut t = DataTriple::new(x.clone(), 0.0, self.gradient());
                if let ConstraintFamily::LipschitzHessian { .. } = self.family {
                    t.hess = Some(self.normal());
                }
                if let Some(iv) = feasible_value_interval(self.family, &triples, &t, self.tol) {
                    t.f = self.value_in(iv);
                    triples.push(t);
                    continue 'grow;
                }
            }
            let s = Dataset::new(triples.clone()).ok();
            match s.and_then(|s| self.extend(&s, &x)) {
                Some((f, g)) => triples.push(DataTriple::new(x, f, g)),
                None => return None,
            }
        }
        Dataset::new(triples).ok()
    }

    fn gap(&self, s: &Dataset, x: &[f64]) -> Option<f64> {
        let opts = GapOptions {
            check_feasibility: false,
            tol: self.tol,
            force_method: None,
        };
        extension_gap(s, x, self.family, &opts, self.backend)
            .ok()
            .map(|g| g.tau_star)
    }

    /// Random move of one triple (with value repair) or of the probe.
    fn perturb(&mut self, s: &Dataset, x: &[f64], step: f64) -> Option<(Dataset, Vec<f64>)> {
        let k = self.rng.random_range(0..=s.len());
        if k == s.len() {
            let x2 = x.iter().map(|v| v + step * self.normal()).collect();
            return Some((s.clone(), x2));
        }
        let mut t = s.triples()[k].clone();
        match self.rng.random_range(0..3) {
            0 => self.jitter(&mut t.x, step),
            1 => self.jitter(&mut t.g, step),
            _ => t.f += step * self.normal(),
        }
        if let Some(h) = t.hess.as_mut() {
            *h += step * self.normal();
        }
        let others: Vec<DataTriple> = s
            .triples()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, t)| t.clone())
            .collect();
        let (lo, hi) = feasible_value_interval(self.family, &others, &t, 0.0)?;
        t.f = t.f.clamp(lo, hi);
        let mut v = s.triples().to_vec();
        v[k] = t;
        Some((Dataset::new(v).ok()?, x.to_vec()))
    }
}

/// Searches for a dataset of `n` triples in dimension `d` that cannot be
/// extended at some probe point.
///
/// Returns the report when a certified counterexample was found, otherwise
/// [`Error::BudgetExhausted`] carrying it. Deterministic for a given seed.
pub fn find_counterexample(
    family: &ConstraintFamily,
    n: usize,
    d: usize,
    config: &ProblemConfig,
    backend: Option<&dyn ConicBackend>,
) -> Result<SearchReport> {
    if n == 0 || d == 0 {
        return Err(Error::EmptyDataset);
    }
    family.validate()?;
    let mut h = Hunter {
        family,
        d,
        tol: config.tolerance,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        backend,
    };
    let mut report = SearchReport {
        best: None,
        best_tau: f64::NEG_INFINITY,
        incumbent: None,
        iterations: 0,
        trace: Vec::new(),
    };
    let mut misses = 0;
    while report.iterations < config.budget && misses < config.budget {
        let Some(mut s) = h.sample(n) else {
            misses += 1;
            continue;
        };
        let mut x = h.point();
        let Some(mut tau) = h.gap(&s, &x) else {
            misses += 1;
            continue;
        };
        report.iterations += 1;
        let mut step = 0.5;
        let mut rejects = 0;
        loop {
            if tau > report.best_tau {
                report.best_tau = tau;
                report.incumbent = Some((s.clone(), x.clone()));
                report.trace.push((report.iterations, tau));
            }
            if report.iterations >= config.budget || step < 1e-5 {
                break;
            }
            let cand = h.perturb(&s, &x, step);
            let accepted = match cand {
                Some((s2, x2)) => {
                    report.iterations += 1;
                    match h.gap(&s2, &x2) {
                        Some(t2) if t2 >= tau => {
                            let better = t2 > tau;
                            (s, x, tau) = (s2, x2, t2);
                            better
                        }
                        _ => false,
                    }
                }
                None => {
                    misses += 1;
                    false
                }
            };
            if accepted {
                rejects = 0;
            } else {
                rejects += 1;
                if rejects >= PATIENCE {
                    step *= 0.5;
                    rejects = 0;
                }
            }
            if misses >= config.budget {
                break;
            }
        }
    }
    if report.best_tau > config.tolerance {
        if let Some((s, x)) = &report.incumbent {
            if let Ok(c) = verify_counterexample(s, x, family, config.tolerance, backend) {
                report.best = Some(c);
                return Ok(report);
            }
        }
    }
    Err(Error::BudgetExhausted(alloc::boxed::Box::new(report)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_for_convex_pair() {
        // with (0, 0, 1) fixed, a point at x = 1 with g = 2 needs f in [1, 2]
        let others = [DataTriple::scalar(0.0, 0.0, 1.0)];
        let (lo, hi) = feasible_value_interval(
            &ConstraintFamily::Convex,
            &others,
            &DataTriple::scalar(1.0, 0.0, 2.0),
            0.0,
        )
        .unwrap();
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
        assert!(feasible_value_interval(
            &ConstraintFamily::Convex,
            &others,
            &DataTriple::scalar(1.0, 0.0, 0.5),
            0.0
        )
        .is_none());
    }

    #[test]
    fn gradient_bound_empties_interval() {
        let wc = ConstraintFamily::WeaklyConvexBounded { mu: 1.0, b: 1.0 };
        assert!(
            feasible_value_interval(&wc, &[], &DataTriple::scalar(0.0, 0.0, 1.5), 0.0).is_none()
        );
    }

    #[test]
    fn search_is_reproducible() {
        let fam = ConstraintFamily::WeaklyConvexBounded { mu: 1.0, b: 1.0 };
        let cfg = ProblemConfig::new(fam).with_seed(3).with_budget(300);
        let a = find_counterexample(&fam, 2, 1, &cfg, None);
        let b = find_counterexample(&fam, 2, 1, &cfg, None);
        let (ra, rb) = match (a, b) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(Error::BudgetExhausted(a)), Err(Error::BudgetExhausted(b))) => (*a, *b),
            _ => panic!("runs diverged"),
        };
        assert_eq!(ra.trace, rb.trace);
        assert!(ra.trace.windows(2).all(|w| w[0].1 <= w[1].1));
    }
}
