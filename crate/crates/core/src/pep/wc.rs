//! Subgradient method on weakly convex functions with bounded subgradients.
//!
//! Gram basis: `[x0, g_0..g_N, gy_0..gy_N, C_pq for every ordered pair]`
//! over the labelled points `x_0..x_N, y_0..y_N, star`. Values: `f_i` at
//! `i`, `fy_i` at `N + 1 + i`; the optimum is normalized to `x = g = f = 0`.

use alloc::format;
use alloc::vec::Vec;

use super::gram::{GramForm, LabelledPoint, SdpConstraint, SdpInstance, Sel, Sense};
use super::{PepSpec, WcVariant};

/// Column of `C_pq` among `P` points, or `None` for `p == q`.
pub fn c_index(base: usize, npts: usize, p: usize, q: usize) -> Option<usize> {
    if p == q {
        return None;
    }
    let q_rank = if q > p { q - 1 } else { q };
    Some(base + p * (npts - 1) + q_rank)
}

pub fn build_wc_pep(spec: &PepSpec) -> SdpInstance {
    let n = spec.n;
    let m = n + 1;
    let npts = 2 * m + 1;
    let base = 1 + 2 * m;
    let with_c = !matches!(spec.variant, WcVariant::Classical);
    let gram_dim = if with_c {
        base + npts * (npts - 1)
    } else {
        base
    };

    let mut points = Vec::with_capacity(npts);
    let mut x = Sel::unit(0);
    let mut xs = Vec::with_capacity(m);
    for i in 0..m {
        xs.push(x.clone());
        points.push(LabelledPoint {
            label: format!("x{i}"),
            x: x.clone(),
            g: Sel::unit(1 + i),
            f: Some(i),
        });
        x = x.sub(&Sel::unit(1 + i).scale(spec.h));
    }
    for (i, xi) in xs.iter().enumerate() {
        let gy = Sel::unit(1 + m + i);
        let y = xi.sub(&gy.scale(1.0 / spec.rho));
        points.push(LabelledPoint {
            label: format!("y{i}"),
            x: y,
            g: gy,
            f: Some(m + i),
        });
    }
    points.push(LabelledPoint {
        label: "star".into(),
        x: Sel::zero(),
        g: Sel::zero(),
        f: None,
    });

    let (mu, b) = (spec.mu, spec.b);
    let mut cons = Vec::new();
    for (p, pp) in points.iter().enumerate() {
        for (q, pq) in points.iter().enumerate() {
            if p == q {
                continue;
            }
            // f_q - f_p - <g_p, x_q - x_p> + mu/2 |x_p - x_q|^2 [- mu/2 |x_q - C|^2] >= 0
            let dx = pq.x.sub(&pp.x);
            let mut gram =
                GramForm::inner(-1.0, pp.g.clone(), dx.clone()).plus(GramForm::sq(0.5 * mu, dx));
            let c = match spec.variant {
                WcVariant::Classical => None,
                WcVariant::ClassicalPinned => Some(pq.x.clone()),
                WcVariant::Tight => Some(Sel::unit(
                    c_index(base, npts, p, q).expect("distinct points"),
                )),
            };
            if let Some(c) = &c {
                gram = gram.plus(GramForm::sq(-0.5 * mu, pq.x.sub(c)));
            }
            let mut fvals = Vec::new();
            if let Some(k) = pq.f {
                fvals.push((k, 1.0));
            }
            if let Some(k) = pp.f {
                fvals.push((k, -1.0));
            }
            cons.push(SdpConstraint {
                label: format!("A[{},{}]", pp.label, pq.label),
                gram,
                fvals,
                rhs: 0.0,
                sense: Sense::Ge,
            });
            if let (WcVariant::Tight, Some(c)) = (spec.variant, c) {
                // |g_p + mu (x_p - C)|^2 <= B^2
                let v = pp.g.add(&pp.x.sub(&c).scale(mu));
                cons.push(SdpConstraint {
                    label: format!("E[{},{}]", pp.label, pq.label),
                    gram: GramForm::sq(1.0, v),
                    fvals: Vec::new(),
                    rhs: b * b,
                    sense: Sense::Le,
                });
            }
        }
    }
    for pt in points.iter().filter(|p| p.f.is_some()) {
        cons.push(SdpConstraint {
            label: format!("H[{}]", pt.label),
            gram: GramForm::sq(1.0, pt.g.clone()),
            fvals: Vec::new(),
            rhs: b * b,
            sense: Sense::Le,
        });
    }
    // fy_0 + rho/2 |x_0 - y_0|^2 <= R^2
    let d0 = xs[0].sub(&points[m].x);
    cons.push(SdpConstraint {
        label: "init".into(),
        gram: GramForm::sq(0.5 * spec.rho, d0),
        fvals: alloc::vec![(m, 1.0)],
        rhs: spec.r2,
        sense: Sense::Le,
    });
    for pt in points.iter().filter(|p| p.f.is_some()) {
        cons.push(SdpConstraint {
            label: format!("opt[{}]", pt.label),
            gram: GramForm::new(),
            fvals: alloc::vec![(pt.f.expect("filtered"), 1.0)],
            rhs: 0.0,
            sense: Sense::Ge,
        });
    }
    // (1/(N+1)) sum |gy_i|^2 = (rho^2/(N+1)) sum |x_i - y_i|^2
    let mut objective = GramForm::new();
    for i in 0..m {
        objective = objective.plus(GramForm::sq(1.0 / m as f64, Sel::unit(1 + m + i)));
    }
    SdpInstance {
        gram_dim,
        n_fvals: 2 * m,
        objective,
        objective_f: Vec::new(),
        constraints: cons,
        points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, variant: WcVariant) -> PepSpec {
        PepSpec {
            n,
            h: 0.2,
            mu: 1.0,
            b: 1.0,
            rho: 2.0,
            r2: 0.125,
            variant,
        }
    }

    #[test]
    fn pair_index_is_a_bijection() {
        for npts in [3, 5, 9] {
            let mut seen = alloc::vec![false; npts * (npts - 1)];
            for p in 0..npts {
                for q in 0..npts {
                    if let Some(k) = c_index(0, npts, p, q) {
                        assert!(!seen[k]);
                        seen[k] = true;
                    }
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn tight_layout_for_one_step() {
        let inst = build_wc_pep(&spec(1, WcVariant::Tight));
        assert_eq!(inst.gram_dim, 25);
        assert_eq!(inst.n_fvals, 4);
        // ordered pairs: 5 * 4, each with a value and an E constraint
        assert_eq!(inst.constraints.len(), 2 * 20 + 4 + 1 + 4);
        assert!(inst.is_symmetric());
    }

    #[test]
    fn classical_has_no_projection_columns() {
        let inst = build_wc_pep(&spec(2, WcVariant::Classical));
        assert_eq!(inst.gram_dim, 1 + 2 * 3);
        assert!(inst.constraints.iter().all(|c| !c.label.starts_with('E')));
        assert_eq!(
            inst.constraints
                .iter()
                .filter(|c| c.label.starts_with('H'))
                .count(),
            6
        );
        assert_eq!(
            inst.constraints
                .iter()
                .filter(|c| c.label.starts_with('A'))
                .count(),
            7 * 6
        );
    }

    #[test]
    fn initial_term_is_rank_one() {
        let inst = build_wc_pep(&spec(3, WcVariant::Tight));
        let init = inst.constraints.iter().find(|c| c.label == "init").unwrap();
        let (coef, u, v) = &init.gram.0[0];
        assert_eq!(init.gram.0.len(), 1);
        assert_eq!(u, v);
        // x0 - y0 = gy_0 / rho
        assert_eq!(u, &Sel::unit(1 + 4).scale(0.5));
        assert_eq!(*coef, 1.0);
    }
}
