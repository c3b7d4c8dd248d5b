//! Monte Carlo estimation of the outage events.
//!
//! Each trial draws the link classes, the link fading and one independent
//! interference realization per transmission slot, then evaluates the
//! outage events on the resulting SIRs. Trial `i` uses ChaCha stream `i`
//! under a key derived from the master seed, so the estimate does not
//! depend on how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::laplace::laplace_exponent;
use crate::analytic::{psi_values, threshold, PsiValues, Scheme};
use crate::channel::{sample_link_power_fading, LinkClass, PathLossParams};
use crate::error::Result;
use crate::geometry::NodePolar;
use crate::pointprocess::{draw_realization_with_windows, InterferenceRealization, MarkedProcess, PROCESSES};
use crate::scenario::{LinkMode, NomaParams, Receiver, Scenario};

/// Where a probability came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    AnalyticPaper,
    AnalyticExact,
    MonteCarlo,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::AnalyticPaper => "analytic-paper",
            Provenance::AnalyticExact => "analytic-exact",
            Provenance::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub trials: u64,
    pub std_err: f64,
    pub seed: u64,
    pub provenance: Provenance,
}

impl OutageEstimate {
    pub fn from_counts(hits: u64, trials: u64, seed: u64) -> Self {
        let p_hat = hits as f64 / trials as f64;
        Self {
            p_hat,
            trials,
            std_err: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
            seed,
            provenance: Provenance::MonteCarlo,
        }
    }

    pub fn analytic(value: f64, provenance: Provenance) -> Self {
        Self { p_hat: value, trials: 0, std_err: 0.0, seed: 0, provenance }
    }
}

/// SIRs at the relay after the first slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaySirs {
    /// For decoding the D1 message, D2's treated as noise.
    pub r1: f64,
    /// For decoding the D2 message after SIC.
    pub r2: f64,
}

/// SIRs at the destinations after the second slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DestinationSirs {
    pub d1: f64,
    /// D2 decoding the D1 message before SIC.
    pub d2_1: f64,
    pub d2: f64,
}

fn superposed_sirs(signal: f64, interference: f64, noma: &NomaParams) -> (f64, f64) {
    let strong = signal * noma.a1 / (signal * noma.a2 + interference);
    let weak = if interference == 0.0 {
        f64::INFINITY
    } else {
        signal * noma.a2 / interference
    };
    (strong, weak)
}

/// `signal` and `interference` are received powers (Υ included on both).
pub fn relay_sirs(signal: f64, interference: f64, noma: &NomaParams) -> RelaySirs {
    let (r1, r2) = superposed_sirs(signal, interference, noma);
    RelaySirs { r1, r2 }
}

pub fn destination_sirs(signal_d1: f64, interference_d1: f64, signal_d2: f64, interference_d2: f64, noma: &NomaParams) -> DestinationSirs {
    let (d1, _) = superposed_sirs(signal_d1, interference_d1, noma);
    let (d2_1, d2) = superposed_sirs(signal_d2, interference_d2, noma);
    DestinationSirs { d1, d2_1, d2 }
}

/// Decoding thresholds as used by the simulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventThresholds {
    pub theta1: f64,
    pub theta2: f64,
    /// `Θ₁ ≥ a₁/a₂`: the strong message is never decodable.
    pub degenerate: bool,
}

impl EventThresholds {
    pub fn noma(noma: &NomaParams) -> Self {
        match psi_values(noma) {
            PsiValues::Feasible(t) => Self { theta1: t.theta1, theta2: t.theta2, degenerate: false },
            PsiValues::Degenerate { theta1, theta2, .. } => Self { theta1, theta2, degenerate: true },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub o1: bool,
    pub o2: bool,
    pub o_r1: bool,
    pub o_d1: bool,
    pub o_r2: bool,
    pub o_d2: bool,
    /// Classes of the S-R, R-D1 and R-D2 links.
    pub classes: [LinkClass; 3],
}

pub fn evaluate_outage_events(
    relay: &RelaySirs,
    dest: &DestinationSirs,
    th: &EventThresholds,
    classes: [LinkClass; 3],
) -> TrialOutcome {
    // SIR_R1 ≤ a₁/a₂ ≤ Θ₁ when degenerate; equality is a null event
    let fails_strong = |sir: f64| th.degenerate || sir < th.theta1;
    let o_r1 = fails_strong(relay.r1);
    let o_d1 = fails_strong(dest.d1);
    let o_r2 = fails_strong(relay.r1) || relay.r2 < th.theta2;
    let o_d2 = fails_strong(dest.d2_1) || dest.d2 < th.theta2;
    TrialOutcome { o1: o_r1 || o_d1, o2: o_r2 || o_d2, o_r1, o_d1, o_r2, o_d2, classes }
}

/// Unit-gain interference power from one process at a receiver.
fn process_interference(proc: &MarkedProcess, slot: usize, alpha: f64, h2: f64, c: f64) -> f64 {
    let mut total = 0.0;
    for (i, (&t, &on)) in proc.positions.iter().zip(&proc.active).enumerate() {
        if !on {
            continue;
        }
        let d2 = h2 + (t - c) * (t - c);
        let gain = if alpha == 2.0 {
            1.0 / d2
        } else if alpha == 4.0 {
            1.0 / (d2 * d2)
        } else {
            d2.powf(-0.5 * alpha)
        };
        total += proc.fading(i, slot) * gain;
    }
    total
}

/// Interference power at `receiver` from one (road, class) process, Υ
/// included. `slot` selects the receiver's fading marks.
pub fn component_interference(
    receiver: NodePolar,
    real: &InterferenceRealization,
    process: usize,
    slot: usize,
    path_loss: &PathLossParams,
    upsilon: f64,
) -> f64 {
    let (road, class) = PROCESSES[process];
    let h = receiver.offset_from(road);
    let c = receiver.projection_on(road);
    upsilon * process_interference(&real.processes[process], slot, path_loss.alpha(class), h * h, c)
}

/// `(I_X, I_Y)` at `receiver`, each summed over both classes.
pub fn aggregate_interference(
    receiver: NodePolar,
    real: &InterferenceRealization,
    slot: usize,
    path_loss: &PathLossParams,
    upsilon: f64,
) -> (f64, f64) {
    let comp = |i| component_interference(receiver, real, i, slot, path_loss, upsilon);
    (comp(0) + comp(1), comp(2) + comp(3))
}

/// Truncation bias allowed per process, in standard errors.
const TAIL_BUDGET: f64 = 0.25;

/// Per-process half-widths of the simulated road segments.
///
/// Each window is at least `sc.ppp.window` and wide enough that the
/// mean-field interference beyond it, `ΔE ≤ 2 p λ s (L - |c|)^(1-α) / (α - 1)`,
/// is small against the sampling error `trials` can resolve, at every
/// transform argument `s` the scheme evaluates.
pub fn plan_windows(sc: &Scenario, scheme: Scheme, trials: u64) -> Result<[f64; 4]> {
    let mut windows = [sc.ppp.window; 4];
    let probes = window_probes(sc, scheme);
    let p = sc.ppp.p;
    for (idx, (road, class)) in PROCESSES.into_iter().enumerate() {
        let lambda = sc.ppp.intensity(road, class);
        if p * lambda == 0.0 {
            continue;
        }
        let alpha = sc.path_loss.alpha(class);
        for probe in &probes {
            let env_total: f64 = PROCESSES
                .iter()
                .map(|&(r, k)| laplace_exponent(probe.s, p, sc.ppp.intensity(r, k), sc.path_loss.alpha(k), probe.rx, r))
                .sum::<Result<f64>>()?;
            let lam_hop = ((1.0 + env_total).powi(probe.m as i32 - 1) * (-env_total).exp()).min(1.0);
            let spread = (1.0 - lam_hop).max(1e-3);
            let allowed = TAIL_BUDGET * (spread / (lam_hop.max(1e-300) * trials as f64)).sqrt();
            let c = probe.rx.projection_on(road).abs();
            let reach = (2.0 * p * lambda * probe.s / ((alpha - 1.0) * allowed)).powf(1.0 / (alpha - 1.0));
            windows[idx] = windows[idx].max(c + reach);
        }
    }
    Ok(windows)
}

struct Probe {
    rx: NodePolar,
    s: f64,
    m: u32,
}

fn window_probes(sc: &Scenario, scheme: Scheme) -> Vec<Probe> {
    let psis: Vec<(Receiver, f64)> = match scheme {
        Scheme::Noma => match psi_values(&sc.noma) {
            PsiValues::Degenerate { .. } => Vec::new(),
            PsiValues::Feasible(t) => vec![
                (Receiver::Relay, t.psi1),
                (Receiver::Relay, t.psi_max),
                (Receiver::D1, t.psi1),
                (Receiver::D2, t.psi_max),
            ],
        },
        Scheme::Oma => {
            let t1 = threshold(sc.noma.rate1, Scheme::Oma);
            let t2 = threshold(sc.noma.rate2, Scheme::Oma);
            vec![(Receiver::Relay, t1), (Receiver::Relay, t2), (Receiver::D1, t1), (Receiver::D2, t2)]
        }
    };
    let mut out = Vec::new();
    for (rx, psi) in psis {
        for class in LinkClass::ALL {
            if sc.link_class_probability(rx, class) == 0.0 {
                continue;
            }
            let m = sc.fading.m(class);
            let s = m as f64 * psi * sc.link_length(rx).powf(sc.path_loss.alpha(class)) / sc.fading.mu;
            out.push(Probe { rx: sc.polar(rx), s, m });
        }
    }
    out
}

/// A drawn desired link: its class and received power (Υ included).
#[derive(Debug, Clone, Copy)]
struct DrawnLink {
    class: LinkClass,
    power: f64,
}

/// Shared, precomputed per-run quantities.
struct Sim<'a> {
    sc: &'a Scenario,
    windows: [f64; 4],
    upsilon: f64,
    polar: [NodePolar; 3],
}

impl<'a> Sim<'a> {
    fn new(sc: &'a Scenario, windows: [f64; 4]) -> Self {
        Self {
            sc,
            windows,
            upsilon: sc.upsilon(),
            polar: [sc.polar(Receiver::Relay), sc.polar(Receiver::D1), sc.polar(Receiver::D2)],
        }
    }

    fn draw_link<R: Rng>(&self, rx: Receiver, rng: &mut R) -> DrawnLink {
        let sc = self.sc;
        let u: f64 = rng.random();
        let class = match sc.link_mode {
            LinkMode::ForceLos => LinkClass::Los,
            LinkMode::ForceNlos => LinkClass::Nlos,
            LinkMode::Blockage => {
                if u < sc.link_class_probability(rx, LinkClass::Los) {
                    LinkClass::Los
                } else {
                    LinkClass::Nlos
                }
            }
        };
        let fading = sample_link_power_fading(sc.fading.m(class), sc.fading.mu, rng);
        let r = sc.link_length(rx);
        DrawnLink { class, power: self.upsilon * fading * r.powf(-sc.path_loss.alpha(class)) }
    }

    /// Total interference at each of `receivers` in one fresh slot.
    fn slot_interference<R: Rng, const N: usize>(&self, receivers: [Receiver; N], rng: &mut R) -> [f64; N] {
        let real = draw_realization_with_windows(&self.sc.ppp, self.windows, N, rng);
        let mut out = [0.0; N];
        for (slot, rx) in receivers.into_iter().enumerate() {
            let (ix, iy) = aggregate_interference(self.polar[rx.index()], &real, slot, &self.sc.path_loss, self.upsilon);
            out[slot] = ix + iy;
        }
        out
    }

    fn noma_trial<R: Rng>(&self, th: &EventThresholds, rng: &mut R) -> TrialOutcome {
        let noma = &self.sc.noma;
        let sr = self.draw_link(Receiver::Relay, rng);
        let rd1 = self.draw_link(Receiver::D1, rng);
        let rd2 = self.draw_link(Receiver::D2, rng);
        let [i_r] = self.slot_interference([Receiver::Relay], rng);
        let [i_d1, i_d2] = self.slot_interference([Receiver::D1, Receiver::D2], rng);
        let relay = relay_sirs(sr.power, i_r, noma);
        let dest = destination_sirs(rd1.power, i_d1, rd2.power, i_d2, noma);
        evaluate_outage_events(&relay, &dest, th, [sr.class, rd1.class, rd2.class])
    }

    /// Outage of the orthogonal chain towards D1 and towards D2, each in
    /// its own two slots.
    fn oma_trial<R: Rng>(&self, thetas: [f64; 2], rng: &mut R) -> [bool; 2] {
        let mut out = [false; 2];
        for (i, rx) in [Receiver::D1, Receiver::D2].into_iter().enumerate() {
            let sr = self.draw_link(Receiver::Relay, rng);
            let rd = self.draw_link(rx, rng);
            let [i_r] = self.slot_interference([Receiver::Relay], rng);
            let [i_d] = self.slot_interference([rx], rng);
            out[i] = sir(sr.power, i_r) < thetas[i] || sir(rd.power, i_d) < thetas[i];
        }
        out
    }
}

fn sir(signal: f64, interference: f64) -> f64 {
    if interference == 0.0 {
        f64::INFINITY
    } else {
        signal / interference
    }
}

/// The RNG for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Event counts over a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EventCounts {
    pub trials: u64,
    pub o1: u64,
    pub o2: u64,
    pub o_r1: u64,
    pub o_d1: u64,
    pub o_r2: u64,
    pub o_d2: u64,
}

impl EventCounts {
    fn add(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.o1 += other.o1;
        self.o2 += other.o2;
        self.o_r1 += other.o_r1;
        self.o_d1 += other.o_d1;
        self.o_r2 += other.o_r2;
        self.o_d2 += other.o_d2;
        self
    }

    fn from_outcome(t: &TrialOutcome) -> Self {
        Self {
            trials: 1,
            o1: t.o1 as u64,
            o2: t.o2 as u64,
            o_r1: t.o_r1 as u64,
            o_d1: t.o_d1 as u64,
            o_r2: t.o_r2 as u64,
            o_d2: t.o_d2 as u64,
        }
    }
}

/// Result of a simulation run. For OMA, `o1` and `o2` are the outages of
/// the D1 and D2 chains and the per-hop counts stay zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationReport {
    pub o1: OutageEstimate,
    pub o2: OutageEstimate,
    pub counts: EventCounts,
    pub windows: [f64; 4],
}

pub fn estimate(sc: &Scenario, scheme: Scheme, trials: u64, seed: u64) -> Result<SimulationReport> {
    sc.validate()?;
    if trials == 0 {
        return Err(crate::Error::validation("trials", "need at least one trial"));
    }
    let windows = plan_windows(sc, scheme, trials)?;
    estimate_with_windows(sc, scheme, trials, seed, windows)
}

pub fn estimate_with_windows(
    sc: &Scenario,
    scheme: Scheme,
    trials: u64,
    seed: u64,
    windows: [f64; 4],
) -> Result<SimulationReport> {
    sc.validate()?;
    if trials == 0 {
        return Err(crate::Error::validation("trials", "need at least one trial"));
    }
    let sim = Sim::new(sc, windows);
    let counts = match scheme {
        Scheme::Noma => {
            let th = EventThresholds::noma(&sc.noma);
            (0..trials)
                .into_par_iter()
                .map(|t| EventCounts::from_outcome(&sim.noma_trial(&th, &mut trial_rng(seed, t))))
                .reduce(EventCounts::default, EventCounts::add)
        }
        Scheme::Oma => {
            let thetas = [threshold(sc.noma.rate1, Scheme::Oma), threshold(sc.noma.rate2, Scheme::Oma)];
            (0..trials)
                .into_par_iter()
                .map(|t| {
                    let [a, b] = sim.oma_trial(thetas, &mut trial_rng(seed, t));
                    EventCounts { trials: 1, o1: a as u64, o2: b as u64, ..Default::default() }
                })
                .reduce(EventCounts::default, EventCounts::add)
        }
    };
    Ok(SimulationReport {
        o1: OutageEstimate::from_counts(counts.o1, trials, seed),
        o2: OutageEstimate::from_counts(counts.o2, trials, seed),
        counts,
        windows,
    })
}

/// Per-trial outcomes of a NOMA run, for checking the event algebra.
pub fn noma_outcomes(sc: &Scenario, trials: u64, seed: u64) -> Result<Vec<TrialOutcome>> {
    sc.validate()?;
    let windows = plan_windows(sc, Scheme::Noma, trials.max(1))?;
    let sim = Sim::new(sc, windows);
    let th = EventThresholds::noma(&sc.noma);
    Ok((0..trials).map(|t| sim.noma_trial(&th, &mut trial_rng(seed, t))).collect())
}
