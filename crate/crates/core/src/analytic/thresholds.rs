//! Decoding thresholds for the NOMA and OMA schemes.

use crate::scenario::NomaParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Noma,
    Oma,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Noma => "noma",
            Scheme::Oma => "oma",
        }
    }
}

/// SIR threshold for a target rate. Cooperative NOMA spends two slots per
/// message, cooperative OMA four.
pub fn threshold(rate: f64, scheme: Scheme) -> f64 {
    let slots = match scheme {
        Scheme::Noma => 2.0,
        Scheme::Oma => 4.0,
    };
    (slots * rate).exp2() - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirThresholds {
    pub theta1: f64,
    pub theta2: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub psi_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsiValues {
    Feasible(SirThresholds),
    /// `Θ₁ ≥ a₁/a₂`: the strong message can never be decoded, whatever
    /// the interference.
    Degenerate { theta1: f64, theta2: f64, limit: f64 },
}

impl PsiValues {
    pub fn feasible(&self) -> Option<&SirThresholds> {
        match self {
            PsiValues::Feasible(t) => Some(t),
            PsiValues::Degenerate { .. } => None,
        }
    }
}

pub fn psi_values(n: &NomaParams) -> PsiValues {
    let theta1 = threshold(n.rate1, Scheme::Noma);
    let theta2 = threshold(n.rate2, Scheme::Noma);
    let limit = n.a1 / n.a2;
    if theta1 >= limit {
        return PsiValues::Degenerate { theta1, theta2, limit };
    }
    let psi1 = theta1 / (n.a1 - theta1 * n.a2);
    let psi2 = theta2 / n.a2;
    PsiValues::Feasible(SirThresholds { theta1, theta2, psi1, psi2, psi_max: psi1.max(psi2) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noma(a1: f64, rate1: f64, rate2: f64) -> NomaParams {
        NomaParams { a1, a2: 1.0 - a1, rate1, rate2 }
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(threshold(1.0, Scheme::Noma), 3.0);
        assert_eq!(threshold(1.0, Scheme::Oma), 15.0);
        assert_eq!(threshold(0.25, Scheme::Oma), 1.0);
        let tiny = threshold(1e-9, Scheme::Noma);
        assert!(tiny > 0.0 && tiny < 1e-8);
    }

    #[test]
    fn psi_examples() {
        let t = *psi_values(&noma(0.8, 0.5, 1.0)).feasible().unwrap();
        assert!((t.theta1 - 1.0).abs() < 1e-15);
        assert!((t.psi1 - 5.0 / 3.0).abs() < 1e-12);
        assert!((t.psi2 - 15.0).abs() < 1e-12);
        assert_eq!(t.psi_max, t.psi2);

        let t = *psi_values(&noma(0.8, 1.0, 1.0)).feasible().unwrap();
        assert!((t.psi1 - 15.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_at_the_limit() {
        // Θ₁ = 3 = a₁/a₂ exactly
        let n = NomaParams { a1: 0.75, a2: 0.25, rate1: 1.0, rate2: 1.0 };
        assert_eq!(psi_values(&n), PsiValues::Degenerate { theta1: 3.0, theta2: 3.0, limit: 3.0 });
        assert!(psi_values(&noma(0.8, 1.2, 4.0)).feasible().is_none());
        assert!(psi_values(&noma(0.9, 1.2, 4.0)).feasible().is_some());
    }
}
