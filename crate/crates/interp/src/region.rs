//! Admissible values of a second point next to a fixed anchor.
//!
//! For each `g` on a grid, the set of `f` keeping `{anchor, (x, f, g)}`
//! feasible is an interval; its ends are located by bisection on the sign of
//! the worst residual, so any family can be compared with any other.

use std::io::Write;

use anyhow::ensure;
use interp_core::search::feasible_value_interval;
use interp_core::{satisfies, ConstraintFamily, DataTriple, Dataset};
use serde::Serialize;

/// Search half-width for `f`; interval ends beyond it are reported infinite.
const WINDOW: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionRow {
    pub g: f64,
    pub a: Option<(f64, f64)>,
    pub b: Option<(f64, f64)>,
}

fn feasible(
    family: &ConstraintFamily,
    anchor: &DataTriple,
    x: f64,
    f: f64,
    g: f64,
    tol: f64,
) -> bool {
    let Ok(s) = Dataset::new(vec![anchor.clone(), DataTriple::scalar(x, f, g)]) else {
        return false;
    };
    satisfies(family, &s, tol).is_ok_and(|r| r.ok)
}

fn seed(family: &ConstraintFamily, anchor: &DataTriple, x: f64, g: f64, tol: f64) -> Option<f64> {
    let probe = DataTriple::scalar(x, 0.0, g);
    let guess = feasible_value_interval(family, std::slice::from_ref(anchor), &probe, tol).map(
        |(lo, hi)| match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo + 1.0,
            (false, true) => hi - 1.0,
            (false, false) => 0.0,
        },
    );
    let ok = |f: f64| feasible(family, anchor, x, f, g, tol);
    if let Some(f) = guess.filter(|&f| ok(f)) {
        return Some(f);
    }
    // fallback scan for families whose residuals are not affine in f
    let n = 4001;
    (0..n)
        .map(|k| -100.0 + 200.0 * k as f64 / (n - 1) as f64)
        .find(|&f| ok(f))
}

/// Moves from the feasible `f0` in direction `dir` until the residual sign
/// flips, then bisects the bracket.
fn edge(ok: impl Fn(f64) -> bool, f0: f64, dir: f64) -> f64 {
    let mut step = 1.0;
    let mut inside = f0;
    let mut outside = loop {
        let f = f0 + dir * step;
        if !ok(f) {
            break f;
        }
        inside = f;
        if step > WINDOW {
            return dir * f64::INFINITY;
        }
        step *= 2.0;
    };
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if ok(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// Interval of admissible `f` at `(x, g)`, `None` when empty.
pub fn f_interval(
    family: &ConstraintFamily,
    anchor: &DataTriple,
    x: f64,
    g: f64,
    tol: f64,
) -> Option<(f64, f64)> {
    let f0 = seed(family, anchor, x, g, tol)?;
    let ok = |f: f64| feasible(family, anchor, x, f, g, tol);
    Some((edge(ok, f0, -1.0), edge(ok, f0, 1.0)))
}

/// Intervals under two families on `steps + 1` equispaced values of `g`.
pub fn run_region(
    anchor: &DataTriple,
    x: f64,
    fam_a: &ConstraintFamily,
    fam_b: &ConstraintFamily,
    (g_min, g_max): (f64, f64),
    steps: usize,
    tol: f64,
) -> anyhow::Result<Vec<RegionRow>> {
    ensure!(anchor.dim() == 1, "region export is one-dimensional");
    ensure!(
        steps >= 1 && g_min <= g_max,
        "need g_min <= g_max and at least one step"
    );
    Ok((0..=steps)
        .map(|k| {
            let g = g_min + (g_max - g_min) * k as f64 / steps as f64;
            RegionRow {
                g,
                a: f_interval(fam_a, anchor, x, g, tol),
                b: f_interval(fam_b, anchor, x, g, tol),
            }
        })
        .collect())
}

/// Whether every interval under `b` lies inside the one under `a`.
pub fn contained(rows: &[RegionRow], slack: f64) -> bool {
    rows.iter().all(|r| match (r.a, r.b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some((alo, ahi)), Some((blo, bhi))) => alo <= blo + slack && bhi <= ahi + slack,
    })
}

/// Largest admissible value under each family over the grid.
pub fn max_f(rows: &[RegionRow]) -> (f64, f64) {
    let top = |sel: fn(&RegionRow) -> Option<(f64, f64)>| {
        rows.iter()
            .filter_map(sel)
            .map(|i| i.1)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    (top(|r| r.a), top(|r| r.b))
}

pub const CSV_HEADER: [&str; 5] = ["g", "f_min_A", "f_max_A", "f_min_B", "f_max_B"];

pub fn write_csv<W: Write>(rows: &[RegionRow], w: W) -> anyhow::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    let pair = |i: Option<(f64, f64)>| i.unwrap_or((f64::NAN, f64::NAN));
    for r in rows {
        let (a0, a1) = pair(r.a);
        let (b0, b1) = pair(r.b);
        out.write_record([r.g, a0, a1, b0, b1].map(|v| v.to_string()))?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_interval_by_hand() {
        // anchor (0, 0, 1), point at x = 1 with g = 2: 1 <= f <= 2
        let (lo, hi) = f_interval(
            &ConstraintFamily::Convex,
            &DataTriple::scalar(0.0, 0.0, 1.0),
            1.0,
            2.0,
            0.0,
        )
        .unwrap();
        assert!((lo - 1.0).abs() < 1e-9 && (hi - 2.0).abs() < 1e-9);
        assert!(f_interval(
            &ConstraintFamily::Convex,
            &DataTriple::scalar(0.0, 0.0, 1.0),
            1.0,
            0.5,
            0.0
        )
        .is_none());
    }

    #[test]
    fn empty_rows_print_nan() {
        let rows = [RegionRow {
            g: 0.5,
            a: Some((1.0, 2.0)),
            b: None,
        }];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "g,f_min_A,f_max_A,f_min_B,f_max_B\n0.5,1,2,NaN,NaN\n"
        );
    }
}
