//! Fast deterministic self-checks of the analytic layer, run by the
//! `validate` subcommand.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::laplace::{exponent_integral, laplace_closed, laplace_quadrature};
use crate::analytic::{lambda_kernel_exact, lambda_kernel_paper, outage_o1, outage_o2, InterferenceEnv, Kernel, LinkBudget};
use crate::channel::{class_probability, gamma_ccdf, BlockageParams, LinkClass, PathLossParams};
use crate::error::Result;
use crate::geometry::{to_polar, NodePolar, Position, Road};
use crate::pointprocess::PppConfig;
use crate::quadrature::{integrate, Tolerance};
use crate::scenario::{NomaParams, Scenario};
use crate::taylor::factorial;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome { name, passed: worst <= tol, detail: format!("worst {worst:.3e} (tolerance {tol:.0e})") }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

fn receivers() -> [NodePolar; 4] {
    [
        NodePolar::AT_ORIGIN,
        to_polar(Position::new(50.0, 0.0)),
        to_polar(Position::new(100.0, 10.0)),
        to_polar(Position::new(-30.0, 75.0)),
    ]
}

fn laplace_bounds() -> Result<CheckOutcome> {
    let mut bad = 0usize;
    let n = to_polar(Position::new(100.0, 10.0));
    for road in Road::ALL {
        for alpha in [2.0, 4.0] {
            let mut prev = 1.0;
            for i in 0..25 {
                let s = 10f64.powf(-2.0 + 8.0 * i as f64 / 24.0);
                let l = laplace_quadrature(s, 1.0, 1e-3, alpha, n, road)?;
                if !(l > 0.0 && l < prev) {
                    bad += 1;
                }
                prev = l;
            }
            if laplace_quadrature(0.0, 1.0, 1e-3, alpha, n, road)? != 1.0 {
                bad += 1;
            }
        }
    }
    Ok(CheckOutcome { name: "laplace bounds and monotonicity", passed: bad == 0, detail: format!("{bad} violations") })
}

fn closed_vs_quadrature() -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for (i, n) in receivers().into_iter().enumerate() {
        for road in Road::ALL {
            for j in 0..6 {
                let s = 10f64.powf(-1.0 + j as f64 + 0.3 * i as f64);
                let lambda = 1e-3 * (1 + j) as f64;
                let c = laplace_closed(s, 1.0, lambda, n, road);
                let q = laplace_quadrature(s, 1.0, lambda, 2.0, n, road)?;
                worst = worst.max(rel(q, c));
            }
        }
    }
    Ok(outcome("alpha=2 closed form vs quadrature", worst, 1e-6))
}

fn alpha4_oracle() -> Result<CheckOutcome> {
    let oracle = std::f64::consts::PI * std::f64::consts::SQRT_2 / 2.0;
    let j = exponent_integral(1.0, 4.0, NodePolar::AT_ORIGIN, Road::X)?;
    Ok(outcome("alpha=4 integral vs pi*sqrt(2)/2", rel(j, oracle), 1e-8))
}

fn kernel_m1_equivalence() -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let env = InterferenceEnv {
            ppp: PppConfig {
                lambda_x_los: rng.random_range(0.0..5e-3),
                lambda_x_nlos: rng.random_range(0.0..5e-3),
                lambda_y_los: rng.random_range(0.0..5e-3),
                lambda_y_nlos: rng.random_range(0.0..5e-3),
                p: rng.random_range(0.1..1.0),
                window: 1e4,
            },
            path_loss: PathLossParams { alpha_los: 2.0, alpha_nlos: rng.random_range(2.5..4.5) },
            receiver: to_polar(Position::new(rng.random_range(-200.0..200.0), rng.random_range(-50.0..50.0))),
        };
        let link = LinkBudget {
            m: 1,
            psi: rng.random_range(0.1..20.0),
            mu: 1.0,
            r: rng.random_range(10.0..150.0),
            alpha: 2.0,
            upsilon: 2.5e-3,
        };
        worst = worst.max((lambda_kernel_paper(&link, &env)? - lambda_kernel_exact(&link, &env)?).abs());
    }
    Ok(outcome("paper and exact kernels agree at m=1", worst, 1e-12))
}

fn degenerate_exactness() -> Result<CheckOutcome> {
    let mut bad = 0;
    for (a1, rate1) in [(0.8, 1.2), (0.75, 1.0), (0.6, 2.0)] {
        let mut sc = Scenario::default();
        sc.noma = NomaParams { a1, a2: 1.0 - a1, rate1, rate2: 4.0 };
        for lambda in [0.0, 1e-4, 1e-2] {
            let sc = sc.with_lambda(lambda);
            for kernel in [Kernel::Paper, Kernel::Exact] {
                if outage_o1(&sc, kernel)? != 1.0 || outage_o2(&sc, kernel)? != 1.0 {
                    bad += 1;
                }
            }
        }
    }
    Ok(CheckOutcome { name: "degenerate split gives outage exactly 1", passed: bad == 0, detail: format!("{bad} violations") })
}

fn monotone_in_density() -> Result<CheckOutcome> {
    let base = Scenario::default();
    let mut bad = 0;
    let mut prev = [0.0; 2];
    for i in 0..10 {
        let sc = base.with_lambda(1e-4 * 10f64.powf(2.0 * i as f64 / 9.0));
        let o = [outage_o1(&sc, Kernel::Exact)?, outage_o2(&sc, Kernel::Exact)?];
        if o[0] < prev[0] || o[1] < prev[1] {
            bad += 1;
        }
        prev = o;
    }
    Ok(CheckOutcome { name: "outage nondecreasing in density", passed: bad == 0, detail: format!("{bad} violations") })
}

fn blockage_closure() -> Result<CheckOutcome> {
    let b = BlockageParams { beta: 9.5e-3 };
    let mut bad = 0;
    for i in 0..200 {
        let r = 0.5 + 2.5 * i as f64;
        if class_probability(LinkClass::Los, r, b)? + class_probability(LinkClass::Nlos, r, b)? != 1.0 {
            bad += 1;
        }
    }
    Ok(CheckOutcome { name: "LOS and NLOS weights sum to 1", passed: bad == 0, detail: format!("{bad} violations") })
}

fn exponential_sum_identity() -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for m in 1..=4u32 {
        for x in [0.01, 0.3, 1.0, 2.5, 7.0] {
            // 1 - ∫₀^{mx} t^{m-1} e^{-t} / (m-1)! dt
            let pdf = |t: f64| t.powi(m as i32 - 1) * (-t).exp() / factorial(m as usize - 1);
            let cdf = integrate(pdf, 0.0, m as f64 * x, Tolerance { abs: 1e-15, rel: 1e-14 })?.value;
            worst = worst.max((gamma_ccdf(m, 1.0, x) - (1.0 - cdf)).abs());
        }
    }
    Ok(outcome("integer-m exponential sum vs gamma integral", worst, 1e-10))
}

pub fn run_invariant_suite() -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        laplace_bounds()?,
        closed_vs_quadrature()?,
        alpha4_oracle()?,
        kernel_m1_equivalence()?,
        degenerate_exactness()?,
        monotone_in_density()?,
        blockage_closure()?,
        exponential_sum_identity()?,
    ])
}
