//! Cross-module invariants: independent-oracle checks and property tests
//! that go beyond the per-module unit suites.

use fracdyn::analysis::two_scroll_equilibria;
use fracdyn::chaos::chaos_order_threshold;
use fracdyn::core::{two_scroll_field, two_scroll_jacobian};
use fracdyn::stability::{matignon_commensurate, routh_hurwitz_fractional, CubicCoefficients, Verdict};
use fracdyn::{solve_pece, Complex64, Order, SolverConfig, State, SystemModel, SystemParams};
use nalgebra::{DMatrix, Vector3};
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Closed-form equilibria vs brute-force enumeration
// ---------------------------------------------------------------------------

/// Minimal Newton iteration written directly against the field and Jacobian,
/// independent of `analysis::newton_refine`.
fn grid_newton(p: &SystemParams, start: [f64; 3]) -> Option<[f64; 3]> {
    let mut x = Vector3::new(start[0], start[1], start[2]);
    for _ in 0..80 {
        let s = State::from_xyz(x[0], x[1], x[2]);
        let f = two_scroll_field(&s, p).ok()?;
        let fv = Vector3::new(f[0], f[1], f[2]);
        if fv.norm() < 1e-11 {
            return Some([x[0], x[1], x[2]]);
        }
        let j = two_scroll_jacobian(&s, p).ok()?;
        let delta = j.lu().solve(&(-fv))?;
        x += delta;
        if !x.iter().all(|c| c.is_finite()) || x.norm() > 1e6 {
            return None;
        }
    }
    None
}

#[test]
fn brute_force_enumeration_finds_no_extra_equilibria() {
    let p = SystemParams::default();
    let closed_form = two_scroll_equilibria(&p).unwrap().reports;

    let mut found: Vec<[f64; 3]> = Vec::new();
    let n = 10;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let coord = |idx: usize| -10.0 + 20.0 * (idx as f64) / ((n - 1) as f64);
                if let Some(root) = grid_newton(&p, [coord(i), coord(j), coord(k)]) {
                    let fresh = found.iter().all(|r| {
                        let d2: f64 =
                            r.iter().zip(root.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
                        d2.sqrt() > 1e-5
                    });
                    if fresh {
                        found.push(root);
                    }
                }
            }
        }
    }

    assert!(!found.is_empty(), "grid search found nothing");
    for root in &found {
        let matched = closed_form.iter().any(|r| {
            let d2: f64 = r
                .point
                .iter()
                .zip(root.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            d2.sqrt() < 1e-5
        });
        assert!(matched, "brute-force root {root:?} is missing from the closed-form list");
    }
}

// ---------------------------------------------------------------------------
// Solver convergence and the integer-order limit
// ---------------------------------------------------------------------------

/// Classical RK4 on dx/dt = f(x); reference for the alpha -> 1 limit.
fn rk4(model: &SystemModel, x0: &[f64], h: f64, steps: usize) -> Vec<f64> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let eval = |x: &[f64], out: &mut Vec<f64>| {
        let s = State::new(x.to_vec()).unwrap();
        let f = model.eval(&s).unwrap();
        out.copy_from_slice(f.as_slice());
    };
    for _ in 0..steps {
        eval(&x, &mut k1);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        eval(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        eval(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = x[i] + h * k3[i];
        }
        eval(&tmp, &mut k4);
        for i in 0..n {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    x
}

#[test]
fn near_integer_order_matches_rk4_reference() {
    let model = SystemModel::two_scroll(SystemParams::default());
    let x0 = State::from_xyz(5.0, -2.0, 1.0);
    let h = 1e-3;
    let alpha = Order::new(999_999_999, 1_000_000_000).unwrap();
    let cfg = SolverConfig::commensurate(h, 1.0, alpha, 3).unwrap();
    let pece = solve_pece(&model, &x0, &cfg).unwrap();
    let reference = rk4(&model, x0.as_slice(), h, 1000);
    for (got, want) in pece.last().iter().zip(reference.iter()) {
        assert!(
            (got - want).abs() < 1e-3,
            "alpha -> 1 limit: PECE {got} vs RK4 {want}"
        );
    }
}

#[test]
fn halving_the_step_converges_with_order_at_least_one() {
    // Fractional linear decay with a Mittag-Leffler limit; successive
    // Richardson differences must shrink at observed order >= 1.
    let model = SystemModel::new(1, |x, out| out[0] = -x[0]);
    let x0 = State::new(vec![1.0]).unwrap();
    let alpha = Order::new(1, 2).unwrap();
    let mut finals = Vec::new();
    for h in [0.02, 0.01, 0.005] {
        let cfg = SolverConfig::commensurate(h, 1.0, alpha, 1).unwrap();
        finals.push(solve_pece(&model, &x0, &cfg).unwrap().last()[0]);
    }
    let d1 = (finals[0] - finals[1]).abs();
    let d2 = (finals[1] - finals[2]).abs();
    assert!(d2 > 0.0, "successive refinements identical");
    let observed_order = (d1 / d2).log2();
    assert!(
        observed_order >= 1.0,
        "observed convergence order {observed_order:.3} below 1 (d1 = {d1:.3e}, d2 = {d2:.3e})"
    );
}

// ---------------------------------------------------------------------------
// Routh-Hurwitz vs Matignon across orders
// ---------------------------------------------------------------------------

#[test]
fn routh_hurwitz_never_contradicts_matignon() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut compared = 0;
    while compared < 200 {
        let c = CubicCoefficients::new(
            rng.random_range(-6.0..6.0),
            rng.random_range(-6.0..6.0),
            rng.random_range(-6.0..6.0),
        )
        .unwrap();
        let alpha = rng.random_range(0.05..1.0f64);
        // Realize the cubic as its companion matrix for the Matignon side.
        let companion = DMatrix::from_fn(3, 3, |r, col| c.companion()[(r, col)]);
        let rh = routh_hurwitz_fractional(&c, alpha).unwrap();
        let mat = matignon_commensurate(&companion, alpha).unwrap();
        let definite = |v: Verdict| v != Verdict::Inconclusive && v != Verdict::Stable;
        if definite(rh.verdict) && definite(mat.verdict) {
            assert_eq!(
                rh.verdict, mat.verdict,
                "cubic ({}, {}, {}) at alpha {alpha}",
                c.a1, c.a2, c.a3
            );
            compared += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Property tests
// ---------------------------------------------------------------------------

fn spectrum_strategy() -> impl Strategy<Value = Vec<Complex64>> {
    // One real eigenvalue plus a conjugate pair, spanning both stable and
    // unstable configurations.
    (
        -10.0..10.0f64,
        -10.0..10.0f64,
        0.01..10.0f64,
    )
        .prop_map(|(a, b, c)| {
            vec![
                Complex64::new(a, 0.0),
                Complex64::new(b, c),
                Complex64::new(b, -c),
            ]
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chaos_threshold_is_scale_invariant(
        eigs in spectrum_strategy(),
        scale in 0.01..100.0f64,
    ) {
        let scaled: Vec<Complex64> = eigs.iter().map(|e| e * scale).collect();
        let t0 = chaos_order_threshold(&eigs);
        let t1 = chaos_order_threshold(&scaled);
        prop_assert!((t0 - t1).abs() < 1e-12, "{t0} vs {t1}");
    }

    #[test]
    fn chaos_threshold_formulations_agree(eigs in spectrum_strategy()) {
        // Route A: (2/pi) * arctan(|Im|/Re) maximized over unstable complex
        // eigenvalues. Route B: complement form via the minimal angle to the
        // imaginary axis, (2/pi) * (pi/2 - min arctan(Re/|Im|)).
        let unstable: Vec<&Complex64> = eigs
            .iter()
            .filter(|e| e.re > 1e-9 && e.im.abs() > 1e-9)
            .collect();
        prop_assume!(!unstable.is_empty());
        let has_real_unstable = eigs.iter().any(|e| e.re > 1e-9 && e.im.abs() <= 1e-9);
        prop_assume!(!has_real_unstable);

        let route_a = chaos_order_threshold(&eigs);
        let min_axis_angle = unstable
            .iter()
            .map(|e| (e.re / e.im.abs()).atan())
            .fold(f64::INFINITY, f64::min);
        let route_b =
            (2.0 / std::f64::consts::PI) * (std::f64::consts::FRAC_PI_2 - min_axis_angle);
        prop_assert!((route_a - route_b).abs() < 1e-12, "{route_a} vs {route_b}");
    }

    #[test]
    fn matignon_stability_is_monotone_in_alpha(
        entries in proptest::collection::vec(-3.0..3.0f64, 9),
        alpha in 0.1..1.0f64,
        shrink in 0.1..0.999f64,
    ) {
        let m = DMatrix::from_row_slice(3, 3, &entries);
        let at_alpha = matignon_commensurate(&m, alpha).unwrap();
        prop_assume!(at_alpha.verdict == Verdict::AsymptoticallyStable);
        // Shrinking the order widens the stability sector.
        let smaller = alpha * shrink;
        let at_smaller = matignon_commensurate(&m, smaller).unwrap();
        prop_assert_eq!(at_smaller.verdict, Verdict::AsymptoticallyStable);
    }

    #[test]
    fn jacobian_matches_finite_differences_everywhere(
        x in -10.0..10.0f64,
        y in -10.0..10.0f64,
        z in -10.0..10.0f64,
    ) {
        let p = SystemParams::default();
        let s = State::from_xyz(x, y, z);
        let j = two_scroll_jacobian(&s, &p).unwrap();
        let h = 1e-6;
        for col in 0..3 {
            let mut plus = [x, y, z];
            let mut minus = [x, y, z];
            plus[col] += h;
            minus[col] -= h;
            let fp = two_scroll_field(&State::from_xyz(plus[0], plus[1], plus[2]), &p).unwrap();
            let fm = two_scroll_field(&State::from_xyz(minus[0], minus[1], minus[2]), &p).unwrap();
            for row in 0..3 {
                let fd = (fp[row] - fm[row]) / (2.0 * h);
                let scale = j[(row, col)].abs().max(1.0);
                prop_assert!(
                    (j[(row, col)] - fd).abs() / scale < 1e-6,
                    "({row},{col}): {} vs {}", j[(row, col)], fd
                );
            }
        }
    }
}
