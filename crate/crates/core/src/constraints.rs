//! Pairwise constraint residuals `p^{ij}` and dataset satisfaction.
//!
//! A residual is satisfied when every component is nonnegative. Families
//! built from a lower model of `f` around the point supplying the gradient
//! (convexity, weak convexity, uniform convexity, the Hölder and PL upper
//! models, the Lipschitz-Hessian model) use the first argument `i` as that
//! point. The Gram-linear families read `f_i >= f_j + ...` literally.

use libm::{fabs, pow, sqrt};

use crate::data::{DataTriple, Dataset, Point};
use crate::family::ConstraintFamily;
use crate::vecops::{dist, dist2, dot, dot_diff, norm, norm2};
use crate::{Error, Result};

/// Signed residual of one ordered pair; at most four components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    len: usize,
    vals: [f64; 4],
}

impl Residual {
    fn of(vals: &[f64]) -> Self {
        let mut r = Residual {
            len: vals.len(),
            vals: [0.0; 4],
        };
        r.vals[..vals.len()].copy_from_slice(vals);
        r
    }

    pub fn components(&self) -> &[f64] {
        &self.vals[..self.len]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Smallest component (the binding one).
    pub fn min(&self) -> f64 {
        self.components()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_satisfied(&self, tol: f64) -> bool {
        self.min() >= -tol
    }
}

impl ConstraintFamily {
    /// Number of residual components `ℓ`.
    pub fn arity(&self) -> usize {
        match self {
            ConstraintFamily::WeaklyConvexBounded { .. }
            | ConstraintFamily::SmoothConvexWeak { .. }
            | ConstraintFamily::LipschitzHessian { .. } => 2,
            ConstraintFamily::WeaklyConvexBoundedTight { .. } => 3,
            ConstraintFamily::SmoothPL { .. } => 4,
            _ => 1,
        }
    }
}

/// Evaluates `p^{ij}`.
pub fn eval_pairwise(
    family: &ConstraintFamily,
    i: &DataTriple,
    j: &DataTriple,
) -> Result<Residual> {
    check_pair(family, i.view(), j.view())?;
    Ok(eval_points(family, i.view(), j.view()))
}

pub(crate) fn check_pair(family: &ConstraintFamily, i: Point<'_>, j: Point<'_>) -> Result<()> {
    let d = i.x.len();
    for v in [i.g, j.x, j.g] {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
    }
    if let ConstraintFamily::LipschitzHessian { .. } = family {
        if d != 1 {
            return Err(Error::UnsupportedDimension {
                dim: d,
                reason: "Lipschitz-Hessian data is scalar",
            });
        }
        if i.hess.is_none() || j.hess.is_none() {
            return Err(Error::MissingHessian);
        }
    }
    Ok(())
}

/// Unchecked evaluation; dimensions and Hessian presence must already hold.
pub(crate) fn eval_points(family: &ConstraintFamily, i: Point<'_>, j: Point<'_>) -> Residual {
    match *family {
        ConstraintFamily::Convex => Residual::of(&[lower_linear(i, j)]),
        ConstraintFamily::SmoothConvexWeak { l } => {
            Residual::of(&[lower_linear(i, j), l * dist(i.x, j.x) - dist(i.g, j.g)])
        }
        ConstraintFamily::SmoothConvexTight { l } => {
            Residual::of(&[lower_linear(i, j) - dist2(i.g, j.g) / (2.0 * l)])
        }
        ConstraintFamily::SmoothStronglyConvex { mu, l } => {
            let k = 1.0 / (l - mu);
            // <L g_j - mu g_i, x_i - x_j>
            let cross = l * dot_diff(j.g, i.x, j.x) - mu * dot_diff(i.g, i.x, j.x);
            let r = i.f
                - j.f
                - k * cross
                - 0.5 * k * dist2(i.g, j.g)
                - 0.5 * mu * l * k * dist2(i.x, j.x);
            Residual::of(&[r])
        }
        ConstraintFamily::QuadraticClass { mu, m } => {
            let mut avg = 0.0;
            let mut dev = 0.0;
            for t in 0..i.x.len() {
                let dx = i.x[t] - j.x[t];
                avg += 0.5 * (i.g[t] + j.g[t]) * dx;
                let e = i.g[t] - j.g[t] - mu * dx;
                dev += e * e;
            }
            Residual::of(&[i.f - j.f - avg - m * dev])
        }
        ConstraintFamily::WeaklyConvexBounded { mu, b } => Residual::of(&[
            lower_linear(i, j) + 0.5 * mu * dist2(i.x, j.x),
            b - norm(i.g),
        ]),
        ConstraintFamily::WeaklyConvexBoundedTight { mu, b } => wc_tight(mu, b, i, j),
        ConstraintFamily::GramLinearGeneral(c) => {
            let rhs = c.b * norm2(i.g)
                + c.c * norm2(j.g)
                + c.d() * dot(j.g, i.g)
                + c.e * norm2(i.x)
                + c.f * norm2(j.x)
                + c.g() * dot(i.x, j.x)
                + c.h * dot(i.g, i.x)
                + c.i * dot(i.g, j.x)
                + c.j * dot(j.g, i.x)
                + c.k() * dot(j.g, j.x);
            Residual::of(&[i.f - j.f - rhs])
        }
        ConstraintFamily::ConsistForm { alpha, beta, gamma } => {
            let mut lin = 0.0;
            for t in 0..i.x.len() {
                lin += (gamma * i.g[t] + (1.0 - gamma) * j.g[t]) * (i.x[t] - j.x[t]);
            }
            let r = i.f - j.f - lin - alpha * dist2(i.g, j.g) - beta * dist2(i.x, j.x);
            Residual::of(&[r])
        }
        ConstraintFamily::UniformlyConvex { mu, p } => {
            Residual::of(&[lower_linear(i, j) - mu / p * pow(dist(i.x, j.x), p)])
        }
        ConstraintFamily::HolderSmooth { l, alpha, exponent } => {
            let up = l / (alpha + 1.0) * pow(dist(i.x, j.x), exponent);
            Residual::of(&[up - lower_linear(i, j)])
        }
        ConstraintFamily::SmoothPL { l, mu, f_star } => Residual::of(&[
            0.5 * l * dist2(i.x, j.x) - lower_linear(i, j),
            norm2(i.g) - 2.0 * mu * (i.f - f_star),
            i.f - f_star,
            j.f - f_star,
        ]),
        ConstraintFamily::LipschitzHessian { m } => {
            let d = j.x[0] - i.x[0];
            let h = i.hess.unwrap_or(0.0);
            let e = j.f - i.f - i.g[0] * d - 0.5 * h * d * d;
            let cap = m / 6.0 * fabs(d * d * d);
            Residual::of(&[cap - e, cap + e])
        }
    }
}

/// `f_j - f_i - <g_i, x_j - x_i>`
#[inline]
fn lower_linear(i: Point<'_>, j: Point<'_>) -> f64 {
    j.f - i.f - dot_diff(i.g, j.x, i.x)
}

/// Tight weakly convex residual with `C_ij` the projection of `x_j` onto the
/// ball of center `x_i + g_i/mu` and radius `B/mu`.
fn wc_tight(mu: f64, b: f64, i: Point<'_>, j: Point<'_>) -> Residual {
    let classical = lower_linear(i, j) + 0.5 * mu * dist2(i.x, j.x);
    if mu <= 0.0 {
        let gb = b - norm(i.g);
        return Residual::of(&[classical, gb, gb]);
    }
    let radius = b / mu;
    // w = x_j - center
    let mut r2 = 0.0;
    for t in 0..i.x.len() {
        let w = j.x[t] - i.x[t] - i.g[t] / mu;
        r2 += w * w;
    }
    let r = sqrt(r2);
    let scale = if r > radius { radius / r } else { 1.0 };
    let mut gap2 = 0.0;
    for t in 0..i.x.len() {
        let center = i.x[t] + i.g[t] / mu;
        let c = center + scale * (j.x[t] - center);
        let v = i.g[t] + mu * (i.x[t] - c);
        gap2 += v * v;
    }
    let excess = (r - radius).max(0.0);
    Residual::of(&[
        classical - 0.5 * mu * excess * excess,
        b - sqrt(gap2),
        b - norm(i.g),
    ])
}

/// Location and value of the most violated component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Worst {
    pub i: usize,
    pub j: usize,
    pub component: usize,
    pub value: f64,
}

/// Outcome of [`satisfies`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Satisfaction {
    pub ok: bool,
    pub worst: Worst,
}

/// Checks every ordered pair `(i, j)`, self pairs included.
pub fn satisfies(family: &ConstraintFamily, s: &Dataset, tol: f64) -> Result<Satisfaction> {
    let mut worst = Worst {
        i: 0,
        j: 0,
        component: 0,
        value: f64::INFINITY,
    };
    for (a, ti) in s.iter().enumerate() {
        for (b, tj) in s.iter().enumerate() {
            let r = eval_pairwise(family, ti, tj)?;
            for (k, &v) in r.components().iter().enumerate() {
                if v < worst.value {
                    worst = Worst {
                        i: a,
                        j: b,
                        component: k,
                        value: v,
                    };
                }
            }
        }
    }
    Ok(Satisfaction {
        ok: worst.value >= -tol,
        worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::GramCoefficients;

    fn t(x: f64, f: f64, g: f64) -> DataTriple {
        DataTriple::scalar(x, f, g)
    }

    const WC: ConstraintFamily = ConstraintFamily::WeaklyConvexBounded { mu: 1.0, b: 1.0 };
    const WCT: ConstraintFamily = ConstraintFamily::WeaklyConvexBoundedTight { mu: 1.0, b: 1.0 };

    #[test]
    fn convex_boundary_for_affine() {
        let r = eval_pairwise(
            &ConstraintFamily::Convex,
            &t(0.0, 0.0, 1.0),
            &t(1.0, 1.0, 1.0),
        )
        .unwrap();
        assert_eq!(r.components(), &[0.0]);
    }

    #[test]
    fn tight_value_component_on_two_point_pair() {
        let r = eval_pairwise(&WCT, &t(0.0, 0.0, 1.0), &t(3.0, -1.5, 1.0)).unwrap();
        assert!((r.components()[0] + 0.5).abs() < 1e-12);
        assert!(r.components()[1] >= -1e-12 && r.components()[2] >= 0.0);
    }

    #[test]
    fn classical_accepts_two_point_pair() {
        let s = Dataset::from_scalars(&[(0.0, 0.0, 1.0), (3.0, -1.5, 1.0)]).unwrap();
        assert!(satisfies(&WC, &s, 1e-12).unwrap().ok);
        let tight = satisfies(&WCT, &s, 1e-8).unwrap();
        assert!(!tight.ok);
        assert_eq!(
            (tight.worst.i, tight.worst.j, tight.worst.component),
            (0, 1, 0)
        );
        assert!((tight.worst.value + 0.5).abs() < 1e-12);
    }

    #[test]
    fn pl_table_dataset_is_feasible() {
        let pl = ConstraintFamily::SmoothPL {
            l: 1.0,
            mu: 0.5,
            f_star: 0.0,
        };
        let s = Dataset::from_scalars(&[(0.0, 0.0, 0.0), (1.0, 0.5, 1.0)]).unwrap();
        assert!(satisfies(&pl, &s, 1e-12).unwrap().ok);
        assert_eq!(pl.arity(), 4);
    }

    #[test]
    fn squared_norm_samples_are_convex() {
        let mut seed = 7u64;
        let mut next = || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let pts: alloc::vec::Vec<_> = (0..20)
            .map(|_| {
                let x: alloc::vec::Vec<f64> = (0..3).map(|_| next()).collect();
                let g = x.iter().map(|v| 2.0 * v).collect();
                DataTriple::new(x.clone(), norm2(&x), g)
            })
            .collect();
        let s = Dataset::new(pts).unwrap();
        assert!(satisfies(&ConstraintFamily::Convex, &s, 1e-12).unwrap().ok);
    }

    #[test]
    fn lipschitz_hessian_requires_hessian_and_scalar_data() {
        let lh = ConstraintFamily::LipschitzHessian { m: 1.0 };
        assert!(matches!(
            eval_pairwise(&lh, &t(0.0, 0.0, 0.0), &t(1.0, 0.0, 0.0)),
            Err(Error::MissingHessian)
        ));
        let a = DataTriple::new(alloc::vec![0.0, 0.0], 0.0, alloc::vec![0.0, 0.0]).with_hess(0.0);
        assert!(matches!(
            eval_pairwise(&lh, &a, &a),
            Err(Error::UnsupportedDimension { .. })
        ));
        let r = eval_pairwise(
            &lh,
            &t(0.0, 0.0, 0.0).with_hess(0.0),
            &t(1.0, -1.0 / 6.0, 0.0).with_hess(0.0),
        )
        .unwrap();
        assert!(r.min().abs() < 1e-15);
    }

    #[test]
    fn gram_linear_matches_strongly_convex() {
        let (mu, l) = (0.3, 2.0);
        let gram =
            ConstraintFamily::GramLinearGeneral(GramCoefficients::smooth_strongly_convex(mu, l));
        let ssc = ConstraintFamily::SmoothStronglyConvex { mu, l };
        let a = DataTriple::new(alloc::vec![0.2, -1.0], 0.7, alloc::vec![1.5, 0.1]);
        let b = DataTriple::new(alloc::vec![-0.4, 0.9], -0.2, alloc::vec![0.3, -2.0]);
        let x = eval_pairwise(&gram, &a, &b).unwrap().min();
        let y = eval_pairwise(&ssc, &a, &b).unwrap().min();
        assert!((x - y).abs() < 1e-12);
    }

    #[test]
    fn gram_linear_with_j_one_is_convexity() {
        let gram = ConstraintFamily::GramLinearGeneral(GramCoefficients {
            j: 1.0,
            ..Default::default()
        });
        let a = DataTriple::new(alloc::vec![0.2, -1.0], 0.7, alloc::vec![1.5, 0.1]);
        let b = DataTriple::new(alloc::vec![-0.4, 0.9], -0.2, alloc::vec![0.3, -2.0]);
        let x = eval_pairwise(&gram, &a, &b).unwrap().min();
        // f_i >= f_j + <g_j, x_i - x_j> is convexity with j supplying the gradient
        let y = eval_pairwise(&ConstraintFamily::Convex, &b, &a)
            .unwrap()
            .min();
        assert!((x - y).abs() < 1e-12);
    }

    #[test]
    fn self_pairs_vanish_for_gram_linear_forms() {
        let a = DataTriple::new(alloc::vec![0.2, -1.0], 0.7, alloc::vec![1.5, 0.1]);
        let gc = GramCoefficients {
            b: 0.4,
            c: -1.0,
            e: 2.0,
            f: 0.5,
            h: 1.0,
            i: -3.0,
            j: 0.25,
        };
        for fam in [
            ConstraintFamily::GramLinearGeneral(gc),
            ConstraintFamily::ConsistForm {
                alpha: 1.0,
                beta: 0.2,
                gamma: 0.3,
            },
            ConstraintFamily::QuadraticClass { mu: 1.0, m: 2.0 },
            ConstraintFamily::SmoothStronglyConvex { mu: -1.0, l: 1.0 },
        ] {
            assert!(
                eval_pairwise(&fam, &a, &a).unwrap().min().abs() < 1e-12,
                "{fam}"
            );
        }
    }
}
