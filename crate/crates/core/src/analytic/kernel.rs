//! The per-hop success kernel Λ.
//!
//! For a link with Nakagami parameter `m`, the success probability
//! `P(|h|² r^(-α) Υ ≥ Ψ Υ I)` expands, through the integer-`m` exponential
//! sum, into Laplace-transform derivatives of the interference evaluated
//! at `s = m Ψ r^α / μ`.

use crate::channel::{LinkClass, PathLossParams};
use crate::error::Result;
use crate::geometry::{NodePolar, Road};
use crate::pointprocess::{PppConfig, PROCESSES};
use crate::taylor::{binomial, factorial, TaylorScalar};

use super::laplace::laplace_taylor;

/// Which form of Λ to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Kernel {
    /// Per-class factorized form with binomial derivative sums. Exact
    /// only for `m = 1`.
    Paper,
    /// Derivatives of the full four-component product.
    #[default]
    Exact,
}

impl Kernel {
    pub fn as_str(self) -> &'static str {
        match self {
            Kernel::Paper => "paper",
            Kernel::Exact => "exact",
        }
    }
}

/// The desired link of a hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub m: u32,
    pub psi: f64,
    pub mu: f64,
    /// Link length, meters.
    pub r: f64,
    pub alpha: f64,
    pub upsilon: f64,
}

impl LinkBudget {
    /// `Ω = m Ψ / (μ r^(-α) Υ)`.
    pub fn omega(&self) -> f64 {
        self.m as f64 * self.psi / (self.mu * self.r.powf(-self.alpha) * self.upsilon)
    }

    /// Argument of the unit-gain transforms: the interference carries the
    /// same Υ as the signal, so `L_{ΥI}(Ω) = L_I(Ω Υ)`.
    pub fn laplace_argument(&self) -> f64 {
        self.omega() * self.upsilon
    }
}

/// Interference seen by one receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceEnv {
    pub ppp: PppConfig,
    pub path_loss: PathLossParams,
    pub receiver: NodePolar,
}

impl InterferenceEnv {
    pub fn component_taylor(&self, road: Road, class: LinkClass, order: usize, s: f64) -> Result<TaylorScalar> {
        laplace_taylor(
            order,
            s,
            self.ppp.p,
            self.ppp.intensity(road, class),
            self.path_loss.alpha(class),
            self.receiver,
            road,
        )
    }

    /// Taylor expansion of the transform of the total interference.
    pub fn total_taylor(&self, order: usize, s: f64) -> Result<TaylorScalar> {
        let mut acc = TaylorScalar::constant(1.0, order);
        for (road, class) in PROCESSES {
            acc = &acc * &self.component_taylor(road, class, order, s)?;
        }
        Ok(acc)
    }
}

fn clamp_probability(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

/// Λ factorized over the link classes:
/// `∏_K Σ_k (-Ω)^k / k! Σ_n C(k, n) L_X^(k-n)(Ω) L_Y^(n)(Ω)`.
pub fn lambda_kernel_paper(link: &LinkBudget, env: &InterferenceEnv) -> Result<f64> {
    let s = link.laplace_argument();
    let order = link.m as usize - 1;
    let mut out = 1.0;
    for class in LinkClass::ALL {
        let lx = env.component_taylor(Road::X, class, order, s)?;
        let ly = env.component_taylor(Road::Y, class, order, s)?;
        let mut sum = 0.0;
        for k in 0..=order {
            let mut leibniz = 0.0;
            for n in 0..=k {
                leibniz += binomial(k, n) * lx.derivative(k - n) * ly.derivative(n);
            }
            sum += (-s).powi(k as i32) / factorial(k) * leibniz;
        }
        out *= sum;
    }
    Ok(clamp_probability(out))
}

/// Λ without cross-class factorization:
/// `Σ_k (-Ω)^k / k! · d^k/dΩ^k ∏_c L_c(Ω)` over all four components.
pub fn lambda_kernel_exact(link: &LinkBudget, env: &InterferenceEnv) -> Result<f64> {
    let s = link.laplace_argument();
    let order = link.m as usize - 1;
    let total = env.total_taylor(order, s)?;
    let sum: f64 = (0..=order).map(|k| (-s).powi(k as i32) * total.coeff(k)).sum();
    Ok(clamp_probability(sum))
}

pub fn lambda_kernel(kernel: Kernel, link: &LinkBudget, env: &InterferenceEnv) -> Result<f64> {
    match kernel {
        Kernel::Paper => lambda_kernel_paper(link, env),
        Kernel::Exact => lambda_kernel_exact(link, env),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::gamma_ccdf;
    use crate::geometry::to_polar;
    use crate::geometry::Position;

    fn env(lambda: f64, receiver: Position) -> InterferenceEnv {
        InterferenceEnv {
            ppp: PppConfig::uniform(lambda, 1.0, 1e4),
            path_loss: PathLossParams { alpha_los: 2.0, alpha_nlos: 4.0 },
            receiver: to_polar(receiver),
        }
    }

    fn link(m: u32, psi: f64) -> LinkBudget {
        LinkBudget { m, psi, mu: 1.0, r: 50.0, alpha: 2.0, upsilon: 2.5e-3 }
    }

    #[test]
    fn omega_folds_upsilon() {
        let l = link(2, 5.0 / 3.0);
        assert!((l.laplace_argument() - 2.0 * 5.0 / 3.0 * 2500.0).abs() < 1e-9);
    }

    #[test]
    fn no_interference_means_certain_success() {
        let e = env(0.0, Position::new(50.0, 0.0));
        for m in 1..=4 {
            assert_eq!(lambda_kernel_paper(&link(m, 3.0), &e).unwrap(), 1.0);
            assert_eq!(lambda_kernel_exact(&link(m, 3.0), &e).unwrap(), 1.0);
        }
    }

    #[test]
    fn m1_is_a_plain_product() {
        let e = env(1e-3, Position::new(100.0, 10.0));
        let l = link(1, 15.0);
        let s = l.laplace_argument();
        let mut prod = 1.0;
        for (road, class) in PROCESSES {
            prod *= e.component_taylor(road, class, 0, s).unwrap().value();
        }
        let paper = lambda_kernel_paper(&l, &e).unwrap();
        let exact = lambda_kernel_exact(&l, &e).unwrap();
        assert!((paper - prod).abs() < 1e-15);
        assert!((exact - paper).abs() < 1e-12);
    }

    #[test]
    fn kernels_differ_for_m2() {
        let e = env(1e-3, Position::new(50.0, 0.0));
        let l = link(2, 5.0 / 3.0);
        let paper = lambda_kernel_paper(&l, &e).unwrap();
        let exact = lambda_kernel_exact(&l, &e).unwrap();
        assert!(paper > 0.0 && paper < 1.0 && exact > 0.0 && exact < 1.0);
        assert!((paper - exact).abs() > 1e-6);
    }

    #[test]
    fn deterministic_interference_reduces_to_gamma_ccdf() {
        // L(s) = e^{-a s} is the transform of a point mass at I = a
        let a = 0.37;
        let m = 3u32;
        let s: f64 = 4.2;
        let mut coeffs = vec![0.0; m as usize];
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c = (-a * s).exp() * (-a).powi(k as i32) / factorial(k);
        }
        let t = TaylorScalar::from_coeffs(coeffs);
        let sum: f64 = (0..m as usize).map(|k| (-s).powi(k as i32) * t.coeff(k)).sum();
        assert!((sum - gamma_ccdf(m, m as f64, a * s)).abs() < 1e-14);
    }

    #[test]
    fn decreasing_in_threshold() {
        let e = env(1e-3, Position::new(100.0, -10.0));
        let mut prev = 1.0;
        for i in 1..=20 {
            let v = lambda_kernel_exact(&link(2, 0.5 * i as f64), &e).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }
}
