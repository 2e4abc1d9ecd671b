use interp::sdp::{solve_instance, solve_pep, Clarabel, Ipm};
use interp_core::pep::{baseline_classical, build_gd_pep, GdVariant, PepSpec, WcVariant};

fn spec(n: usize, h: f64, variant: WcVariant) -> PepSpec {
    PepSpec {
        n,
        h,
        mu: 1.0,
        b: 1.0,
        rho: 2.0,
        r2: 0.125,
        variant,
    }
}

#[test]
fn tight_bound_never_exceeds_classical_across_steps() {
    let ipm = Ipm::default();
    for k in 1..=10 {
        let h = 0.05 * k as f64;
        let t = solve_pep(&spec(5, h, WcVariant::Tight), &ipm)
            .unwrap()
            .bound;
        let c = solve_pep(&spec(5, h, WcVariant::Classical), &ipm)
            .unwrap()
            .bound;
        assert!(t <= c + 1e-5, "h = {h}: tight {t} > classical {c}");
        assert!(c <= 1.0 + 1e-5, "h = {h}: {c} above the trivial cap");
    }
}

#[test]
fn tight_gd_bound_is_below_weak() {
    let ipm = Ipm::default();
    for n in 1..=4 {
        let alpha = 1.0 / n as f64;
        let run = |v| {
            solve_instance(&build_gd_pep(n, 1.0, 1.0, alpha, v), &ipm)
                .unwrap()
                .bound
        };
        let (tight, weak) = (run(GdVariant::Tight), run(GdVariant::Weak));
        assert!(tight <= weak + 1e-6, "N = {n}: {tight} > {weak}");
        // total step one: the tight bound is 1/6 at every horizon
        assert!((tight - 1.0 / 6.0).abs() < 1e-5, "N = {n}: {tight}");
    }
}

#[test]
fn backends_agree_at_two_steps() {
    let (h, _) = baseline_classical(2, 1.0, 1.0, 0.125f64.sqrt());
    for variant in [WcVariant::Tight, WcVariant::Classical] {
        let a = solve_pep(&spec(2, h, variant), &Ipm::default())
            .unwrap()
            .bound;
        let b = solve_pep(&spec(2, h, variant), &Clarabel::default())
            .unwrap()
            .bound;
        assert!((a - b).abs() < 1e-5, "{variant:?}: ipm {a} vs clarabel {b}");
    }
}

#[test]
fn reference_values() {
    // cross-checked against an independent modelling-layer solve
    let ipm = Ipm::default();
    for (n, tight, classical) in [(1, 0.482422, 0.5), (3, 0.415289, 0.439023)] {
        let (h, _) = baseline_classical(n, 1.0, 1.0, 0.125f64.sqrt());
        let t = solve_pep(&spec(n, h, WcVariant::Tight), &ipm)
            .unwrap()
            .bound;
        let c = solve_pep(&spec(n, h, WcVariant::Classical), &ipm)
            .unwrap()
            .bound;
        assert!((t - tight).abs() < 1e-5, "N = {n}: tight {t}");
        assert!((c - classical).abs() < 1e-5, "N = {n}: classical {c}");
    }
}
