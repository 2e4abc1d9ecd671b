//! Gradient descent on L-smooth convex functions, the calibration instance.
//!
//! Gram basis `[x0, g_0..g_N]`, values `f_0..f_N`, optimum at the origin.

use alloc::format;
use alloc::vec::Vec;

use super::gram::{GramForm, LabelledPoint, SdpConstraint, SdpInstance, Sel, Sense};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GdVariant {
    /// Convexity plus `|g_i - g_j| <= L |x_i - x_j|`.
    Weak,
    /// `f_i >= f_j + <g_j, x_i - x_j> + |g_i - g_j|^2 / (2L)`.
    Tight,
}

/// `max f_N` over `N` steps `x_{i+1} = x_i - alpha g_i` from `|x_0|^2 <= R^2`.
pub fn build_gd_pep(n: usize, l: f64, r2: f64, alpha: f64, variant: GdVariant) -> SdpInstance {
    let m = n + 1;
    let mut points = Vec::with_capacity(m + 1);
    let mut x = Sel::unit(0);
    for i in 0..m {
        points.push(LabelledPoint {
            label: format!("x{i}"),
            x: x.clone(),
            g: Sel::unit(1 + i),
            f: Some(i),
        });
        x = x.sub(&Sel::unit(1 + i).scale(alpha));
    }
    points.push(LabelledPoint {
        label: "star".into(),
        x: Sel::zero(),
        g: Sel::zero(),
        f: None,
    });

    let fdiff = |i: &LabelledPoint, j: &LabelledPoint| {
        // f_j - f_i
        let mut v = Vec::new();
        if let Some(k) = j.f {
            v.push((k, 1.0));
        }
        if let Some(k) = i.f {
            v.push((k, -1.0));
        }
        v
    };
    let mut cons = Vec::new();
    for (a, pi) in points.iter().enumerate() {
        for (b, pj) in points.iter().enumerate() {
            if a == b {
                continue;
            }
            // f_j - f_i - <g_i, x_j - x_i> [- |g_i - g_j|^2 / (2L)] >= 0
            let mut gram = GramForm::inner(-1.0, pi.g.clone(), pj.x.sub(&pi.x));
            if variant == GdVariant::Tight {
                gram = gram.plus(GramForm::sq(-0.5 / l, pi.g.sub(&pj.g)));
            }
            cons.push(SdpConstraint {
                label: format!("interp[{},{}]", pi.label, pj.label),
                gram,
                fvals: fdiff(pi, pj),
                rhs: 0.0,
                sense: Sense::Ge,
            });
            if variant == GdVariant::Weak && a < b {
                let gram =
                    GramForm::sq(1.0, pi.g.sub(&pj.g)).plus(GramForm::sq(-l * l, pi.x.sub(&pj.x)));
                cons.push(SdpConstraint {
                    label: format!("lip[{},{}]", pi.label, pj.label),
                    gram,
                    fvals: Vec::new(),
                    rhs: 0.0,
                    sense: Sense::Le,
                });
            }
        }
    }
    cons.push(SdpConstraint {
        label: "init".into(),
        gram: GramForm::sq(1.0, Sel::unit(0)),
        fvals: Vec::new(),
        rhs: r2,
        sense: Sense::Le,
    });
    SdpInstance {
        gram_dim: 1 + m,
        n_fvals: m,
        objective: GramForm::new(),
        objective_f: alloc::vec![(n, 1.0)],
        constraints: cons,
        points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_counts() {
        let t = build_gd_pep(2, 1.0, 1.0, 1.0, GdVariant::Tight);
        assert_eq!(t.constraints.len(), 4 * 3 + 1);
        let w = build_gd_pep(2, 1.0, 1.0, 1.0, GdVariant::Weak);
        assert_eq!(w.constraints.len(), 4 * 3 + 6 + 1);
        assert_eq!(w.gram_dim, 4);
    }
}
