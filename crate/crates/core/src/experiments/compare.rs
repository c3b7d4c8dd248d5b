//! Closed forms against the simulator for one configuration.

use crate::analytic::{outage_o1, outage_o2, outage_oma, Kernel, Scheme};
use crate::error::Result;
use crate::montecarlo::estimate;
use crate::scenario::Destination;

use super::config::ScenarioConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRecord {
    pub scheme: Scheme,
    pub destination: Destination,
    pub analytic_paper: f64,
    pub analytic_exact: f64,
    pub mc_p_hat: f64,
    pub mc_std_err: f64,
    pub trials: u64,
    /// `(analytic_exact - p̂) / std_err`; 0 when both sides agree exactly.
    pub z_score_exact: f64,
    pub gap_paper_exact: f64,
}

pub fn z_score(analytic: f64, p_hat: f64, std_err: f64) -> f64 {
    let diff = analytic - p_hat;
    if diff == 0.0 {
        0.0
    } else if std_err == 0.0 {
        diff.signum() * f64::INFINITY
    } else {
        diff / std_err
    }
}

/// One record per destination for every scheme in `cfg.scheme`.
pub fn compare(cfg: &ScenarioConfig, trials: u64) -> Result<Vec<ComparisonRecord>> {
    cfg.validate()?;
    let sc = &cfg.scenario;
    let mut out = Vec::new();
    for scheme in cfg.scheme.schemes() {
        let analytic = |kernel: Kernel| -> Result<[f64; 2]> {
            Ok(match scheme {
                Scheme::Noma => [outage_o1(sc, kernel)?, outage_o2(sc, kernel)?],
                Scheme::Oma => [outage_oma(sc, Destination::D1, kernel)?, outage_oma(sc, Destination::D2, kernel)?],
            })
        };
        let paper = analytic(Kernel::Paper)?;
        let exact = analytic(Kernel::Exact)?;
        let rep = estimate(sc, scheme, trials, cfg.master_seed)?;
        for (i, (dest, mc)) in [(Destination::D1, rep.o1), (Destination::D2, rep.o2)].into_iter().enumerate() {
            out.push(ComparisonRecord {
                scheme,
                destination: dest,
                analytic_paper: paper[i],
                analytic_exact: exact[i],
                mc_p_hat: mc.p_hat,
                mc_std_err: mc.std_err,
                trials,
                z_score_exact: z_score(exact[i], mc.p_hat, mc.std_err),
                gap_paper_exact: paper[i] - exact[i],
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::NomaParams;

    #[test]
    fn z_score_conventions() {
        assert_eq!(z_score(0.0, 0.0, 0.0), 0.0);
        assert_eq!(z_score(1.0, 1.0, 0.0), 0.0);
        assert_eq!(z_score(0.5, 0.4, 0.0), f64::INFINITY);
        assert_eq!(z_score(0.3, 0.4, 0.0), f64::NEG_INFINITY);
        assert!((z_score(0.5, 0.4, 0.05) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn no_interference_all_zero() {
        let mut cfg = ScenarioConfig::default();
        cfg.scenario = cfg.scenario.with_lambda(0.0);
        for r in compare(&cfg, 500).unwrap() {
            assert_eq!((r.analytic_paper, r.analytic_exact, r.mc_p_hat, r.z_score_exact), (0.0, 0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn degenerate_split_all_one() {
        let mut cfg = ScenarioConfig::default();
        cfg.scenario.noma = NomaParams { a1: 0.8, a2: 0.2, rate1: 1.2, rate2: 4.0 };
        let recs = compare(&cfg, 500).unwrap();
        assert_eq!(recs.len(), 2);
        for r in recs {
            assert_eq!((r.analytic_paper, r.analytic_exact, r.mc_p_hat), (1.0, 1.0, 1.0));
            assert_eq!(r.z_score_exact, 0.0);
        }
    }
}
