use proptest::prelude::*;

use noma_core::analytic::laplace::{laplace_closed, laplace_quadrature};
use noma_core::analytic::{
    lambda_kernel_exact, lambda_kernel_paper, outage_o1, outage_o2, outage_oma, psi_values, InterferenceEnv, Kernel,
    LinkBudget, PsiValues,
};
use noma_core::channel::{class_probability, BlockageParams, LinkClass, PathLossParams};
use noma_core::geometry::{to_polar, Position, Road};
use noma_core::pointprocess::PppConfig;
use noma_core::scenario::{Destination, NomaParams, Scenario};

fn road() -> impl Strategy<Value = Road> {
    prop_oneof![Just(Road::X), Just(Road::Y)]
}

fn position() -> impl Strategy<Value = Position> {
    (-400.0..400.0f64, -400.0..400.0f64).prop_map(|(x, y)| Position::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplace_is_a_decreasing_probability(
        pos in position(), road in road(), s in 1e-2..1e6f64, lambda in 1e-5..1e-2f64, p in 0.05..1.0f64,
        alpha in 2.0..4.5f64,
    ) {
        let n = to_polar(pos);
        let l = laplace_quadrature(s, p, lambda, alpha, n, road).unwrap();
        prop_assert!(l > 0.0 && l <= 1.0);
        prop_assert!(laplace_quadrature(2.0 * s, p, lambda, alpha, n, road).unwrap() <= l);
        prop_assert!(laplace_quadrature(s, p, 2.0 * lambda, alpha, n, road).unwrap() <= l);
        prop_assert!(laplace_quadrature(s, p * 0.5, lambda, alpha, n, road).unwrap() >= l);
    }

    #[test]
    fn closed_form_matches_quadrature(
        pos in position(), road in road(), s in 1e-2..1e7f64, lambda in 1e-5..1e-2f64,
    ) {
        let n = to_polar(pos);
        let c = laplace_closed(s, 1.0, lambda, n, road);
        let q = laplace_quadrature(s, 1.0, lambda, 2.0, n, road).unwrap();
        prop_assert!(((q - c) / c).abs() <= 1e-6);
    }

    #[test]
    fn kernels_agree_when_m_is_one(
        pos in position(), lambdas in prop::array::uniform4(0.0..5e-3f64), psi in 0.05..30.0f64,
        r in 5.0..200.0f64, alpha_nlos in 2.5..4.5f64,
    ) {
        let env = InterferenceEnv {
            ppp: PppConfig {
                lambda_x_los: lambdas[0], lambda_x_nlos: lambdas[1],
                lambda_y_los: lambdas[2], lambda_y_nlos: lambdas[3],
                p: 1.0, window: 1e4,
            },
            path_loss: PathLossParams { alpha_los: 2.0, alpha_nlos },
            receiver: to_polar(pos),
        };
        let link = LinkBudget { m: 1, psi, mu: 1.0, r, alpha: alpha_nlos, upsilon: 1e-3 };
        let a = lambda_kernel_paper(&link, &env).unwrap();
        let b = lambda_kernel_exact(&link, &env).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn outages_are_probabilities(
        lambda in 0.0..1e-2f64, a1 in 0.55..0.95f64, r1 in 0.05..1.5f64, r2 in 0.05..2.0f64,
    ) {
        let mut sc = Scenario::default().with_lambda(lambda);
        sc.noma = NomaParams { a1, a2: 1.0 - a1, rate1: r1, rate2: r2 };
        for kernel in [Kernel::Paper, Kernel::Exact] {
            for v in [
                outage_o1(&sc, kernel).unwrap(),
                outage_o2(&sc, kernel).unwrap(),
                outage_oma(&sc, Destination::D1, kernel).unwrap(),
                outage_oma(&sc, Destination::D2, kernel).unwrap(),
            ] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn weak_user_never_better_on_symmetric_geometry(
        lambda in 1e-5..1e-2f64, a1 in 0.55..0.95f64, r1 in 0.05..1.0f64, extra in 0.0..1.0f64,
    ) {
        let mut sc = Scenario::default().with_lambda(lambda);
        sc.noma = NomaParams { a1, a2: 1.0 - a1, rate1: r1, rate2: r1 + extra };
        prop_assert!(outage_o2(&sc, Kernel::Exact).unwrap() >= outage_o1(&sc, Kernel::Exact).unwrap());
    }

    #[test]
    fn degenerate_split_is_exactly_one(lambda in 0.0..1e-2f64, a1 in 0.55..0.95f64, r2 in 0.05..4.0f64) {
        // rate1 chosen so that 2^(2 R1) - 1 >= a1 / a2
        let rate1 = 0.5 * (1.0 + a1 / (1.0 - a1)).log2() + 1e-9;
        let mut sc = Scenario::default().with_lambda(lambda);
        sc.noma = NomaParams { a1, a2: 1.0 - a1, rate1, rate2: r2 };
        let degenerate = matches!(psi_values(&sc.noma), PsiValues::Degenerate { .. });
        prop_assert!(degenerate);
        prop_assert_eq!(outage_o1(&sc, Kernel::Exact).unwrap(), 1.0);
        prop_assert_eq!(outage_o2(&sc, Kernel::Paper).unwrap(), 1.0);
    }

    #[test]
    fn class_weights_close(r in 0.0..5000.0f64, beta in 0.0..0.1f64) {
        let b = BlockageParams { beta };
        let sum = class_probability(LinkClass::Los, r, b).unwrap() + class_probability(LinkClass::Nlos, r, b).unwrap();
        prop_assert_eq!(sum, 1.0);
    }
}

#[test]
fn outage_nondecreasing_over_density_grid() {
    let base = Scenario::default();
    for kernel in [Kernel::Paper, Kernel::Exact] {
        let mut prev = [0.0; 4];
        for i in 0..10 {
            let sc = base.with_lambda(1e-4 * 100f64.powf(i as f64 / 9.0));
            let now = [
                outage_o1(&sc, kernel).unwrap(),
                outage_o2(&sc, kernel).unwrap(),
                outage_oma(&sc, Destination::D1, kernel).unwrap(),
                outage_oma(&sc, Destination::D2, kernel).unwrap(),
            ];
            for k in 0..4 {
                assert!(now[k] >= prev[k], "{kernel:?} output {k} at step {i}");
            }
            prev = now;
        }
    }
}

#[test]
fn high_rate_weak_user_prefers_noma() {
    let mut sc = Scenario::default();
    sc.noma = NomaParams { a1: 0.9, a2: 0.1, rate1: 1.2, rate2: 4.0 };
    for lambda in [1e-5, 1e-4, 1e-3] {
        let s = sc.with_lambda(lambda);
        assert!(outage_oma(&s, Destination::D2, Kernel::Exact).unwrap() >= outage_o2(&s, Kernel::Exact).unwrap());
    }
}
