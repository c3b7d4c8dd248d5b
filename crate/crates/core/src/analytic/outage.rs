//! End-to-end outage of the two-hop decode-and-forward chain.
//!
//! Phases use independent interference, so the end-to-end success is the
//! product of the per-hop successes, each mixed over the LOS/NLOS state of
//! its link.

use crate::channel::LinkClass;
use crate::error::Result;
use crate::scenario::{Destination, Receiver, Scenario};

use super::kernel::{lambda_kernel, InterferenceEnv, Kernel, LinkBudget};
use super::thresholds::{psi_values, threshold, PsiValues, Scheme};

pub fn interference_env(sc: &Scenario, rx: Receiver) -> InterferenceEnv {
    InterferenceEnv { ppp: sc.ppp, path_loss: sc.path_loss, receiver: sc.polar(rx) }
}

pub fn link_budget(sc: &Scenario, rx: Receiver, class: LinkClass, psi: f64) -> LinkBudget {
    LinkBudget {
        m: sc.fading.m(class),
        psi,
        mu: sc.fading.mu,
        r: sc.link_length(rx),
        alpha: sc.path_loss.alpha(class),
        upsilon: sc.upsilon(),
    }
}

/// Success probability of the hop into `rx` at SIR requirement `psi`.
pub fn hop_success(sc: &Scenario, rx: Receiver, psi: f64, kernel: Kernel) -> Result<f64> {
    let env = interference_env(sc, rx);
    let mut sum = 0.0;
    let mut certain = true;
    for class in LinkClass::ALL {
        let w = sc.link_class_probability(rx, class);
        if w == 0.0 {
            continue;
        }
        let lambda = lambda_kernel(kernel, &link_budget(sc, rx, class, psi), &env)?;
        certain &= lambda == 1.0;
        sum += w * lambda;
    }
    // the two weights need not add to exactly 1.0 in floating point
    Ok(if certain { 1.0 } else { sum.min(1.0) })
}

pub fn success_o1(sc: &Scenario, kernel: Kernel) -> Result<f64> {
    match psi_values(&sc.noma) {
        PsiValues::Degenerate { .. } => Ok(0.0),
        PsiValues::Feasible(t) => {
            Ok(hop_success(sc, Receiver::Relay, t.psi1, kernel)? * hop_success(sc, Receiver::D1, t.psi1, kernel)?)
        }
    }
}

pub fn success_o2(sc: &Scenario, kernel: Kernel) -> Result<f64> {
    match psi_values(&sc.noma) {
        PsiValues::Degenerate { .. } => Ok(0.0),
        PsiValues::Feasible(t) => Ok(hop_success(sc, Receiver::Relay, t.psi_max, kernel)?
            * hop_success(sc, Receiver::D2, t.psi_max, kernel)?),
    }
}

/// Orthogonal baseline: the destination gets its own slots at full power,
/// so each hop needs `SIR ≥ 2^(4R) - 1`.
pub fn success_oma(sc: &Scenario, dest: Destination, kernel: Kernel) -> Result<f64> {
    let rate = match dest {
        Destination::D1 => sc.noma.rate1,
        Destination::D2 => sc.noma.rate2,
    };
    let theta = threshold(rate, Scheme::Oma);
    Ok(hop_success(sc, Receiver::Relay, theta, kernel)? * hop_success(sc, dest.receiver(), theta, kernel)?)
}

pub fn outage_o1(sc: &Scenario, kernel: Kernel) -> Result<f64> {
    Ok(1.0 - success_o1(sc, kernel)?)
}

pub fn outage_o2(sc: &Scenario, kernel: Kernel) -> Result<f64> {
    Ok(1.0 - success_o2(sc, kernel)?)
}

pub fn outage_oma(sc: &Scenario, dest: Destination, kernel: Kernel) -> Result<f64> {
    Ok(1.0 - success_oma(sc, dest, kernel)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::NomaParams;

    #[test]
    fn no_interference_no_outage() {
        let sc = Scenario::default().with_lambda(0.0);
        for kernel in [Kernel::Paper, Kernel::Exact] {
            assert_eq!(outage_o1(&sc, kernel).unwrap(), 0.0);
            assert_eq!(outage_o2(&sc, kernel).unwrap(), 0.0);
            assert_eq!(outage_oma(&sc, Destination::D1, kernel).unwrap(), 0.0);
            assert_eq!(outage_oma(&sc, Destination::D2, kernel).unwrap(), 0.0);
        }
    }

    #[test]
    fn degenerate_split_is_certain_outage() {
        let mut sc = Scenario::default();
        sc.noma = NomaParams { a1: 0.8, a2: 0.2, rate1: 1.2, rate2: 4.0 };
        assert_eq!(outage_o1(&sc, Kernel::Exact).unwrap(), 1.0);
        assert_eq!(outage_o2(&sc, Kernel::Paper).unwrap(), 1.0);
        let zero = sc.with_lambda(0.0);
        assert_eq!(outage_o1(&zero, Kernel::Exact).unwrap(), 1.0);
    }

    #[test]
    fn weak_user_does_no_better_on_symmetric_geometry() {
        let sc = Scenario::default();
        for kernel in [Kernel::Paper, Kernel::Exact] {
            assert!(outage_o2(&sc, kernel).unwrap() >= outage_o1(&sc, kernel).unwrap());
        }
    }

    #[test]
    fn nondecreasing_in_density() {
        let base = Scenario::default();
        let mut prev = (0.0, 0.0);
        for i in 0..10 {
            let sc = base.with_lambda(1e-4 * 10f64.powf(2.0 * i as f64 / 9.0));
            let o = (outage_o1(&sc, Kernel::Exact).unwrap(), outage_o2(&sc, Kernel::Exact).unwrap());
            assert!(o.0 >= prev.0 && o.1 >= prev.1);
            prev = o;
        }
    }

    #[test]
    fn oma_baseline_threshold() {
        let mut sc = Scenario::default();
        sc.noma.rate1 = 0.25;
        let direct = hop_success(&sc, Receiver::Relay, 1.0, Kernel::Exact).unwrap()
            * hop_success(&sc, Receiver::D1, 1.0, Kernel::Exact).unwrap();
        assert_eq!(success_oma(&sc, Destination::D1, Kernel::Exact).unwrap(), direct);
    }
}
