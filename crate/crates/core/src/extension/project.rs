use alloc::vec::Vec;

use crate::vecops::dist;

/// Closed ball `{y : |y - center| <= radius}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallSpec {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl BallSpec {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        BallSpec { center, radius }
    }

    /// Ball of center `x + g/mu` and radius `B/mu` used by the tight
    /// weakly convex constraint.
    pub fn critical(x: &[f64], g: &[f64], mu: f64, b: f64) -> Self {
        let center = x.iter().zip(g).map(|(x, g)| x + g / mu).collect();
        BallSpec {
            center,
            radius: b / mu,
        }
    }
}

/// Euclidean projection of `y` onto `ball`.
pub fn project_ball(y: &[f64], ball: &BallSpec) -> Vec<f64> {
    let r = dist(y, &ball.center);
    if r <= ball.radius {
        return y.to_vec();
    }
    let s = ball.radius / r;
    ball.center
        .iter()
        .zip(y)
        .map(|(c, y)| c + s * (y - c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn outside_point_lands_on_sphere() {
        assert_eq!(
            project_ball(&[3.0], &BallSpec::new(vec![1.0], 1.0)),
            vec![2.0]
        );
    }

    #[test]
    fn interior_and_boundary_points_are_fixed() {
        assert_eq!(
            project_ball(&[0.5], &BallSpec::new(vec![1.0], 1.0)),
            vec![0.5]
        );
        assert_eq!(
            project_ball(&[3.0, 4.0], &BallSpec::new(vec![0.0, 0.0], 5.0)),
            vec![3.0, 4.0]
        );
    }

    #[test]
    fn zero_radius_returns_center() {
        assert_eq!(
            project_ball(&[7.0, -1.0], &BallSpec::new(vec![1.0, 2.0], 0.0)),
            vec![1.0, 2.0]
        );
    }
}
