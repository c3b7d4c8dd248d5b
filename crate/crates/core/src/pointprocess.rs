//! Interferer point processes on the two roads.
//!
//! Each road carries two independent 1D homogeneous PPPs, one per
//! blockage class. Points are generated outward from the intersection
//! (increasing |t|) so that a realization on `[-L, L]` is a prefix of the
//! realization on `[-2L, 2L]` drawn from the same stream. Positions, ALOHA
//! marks and fading marks come from separate child streams for the same
//! reason.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::channel::{sample_interferer_power_fading, LinkClass};
use crate::error::{Error, Result};
use crate::geometry::Road;

/// Default half-width of the simulated road segments, meters.
pub const DEFAULT_WINDOW: f64 = 10_000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PppConfig {
    pub lambda_x_los: f64,
    pub lambda_x_nlos: f64,
    pub lambda_y_los: f64,
    pub lambda_y_nlos: f64,
    /// ALOHA access probability.
    pub p: f64,
    /// Half-width `L` of the simulated segment `[-L, L]`.
    pub window: f64,
}

impl PppConfig {
    pub fn uniform(lambda: f64, p: f64, window: f64) -> Self {
        Self {
            lambda_x_los: lambda,
            lambda_x_nlos: lambda,
            lambda_y_los: lambda,
            lambda_y_nlos: lambda,
            p,
            window,
        }
    }

    pub fn intensity(&self, road: Road, class: LinkClass) -> f64 {
        match (road, class) {
            (Road::X, LinkClass::Los) => self.lambda_x_los,
            (Road::X, LinkClass::Nlos) => self.lambda_x_nlos,
            (Road::Y, LinkClass::Los) => self.lambda_y_los,
            (Road::Y, LinkClass::Nlos) => self.lambda_y_nlos,
        }
    }

    pub fn set_intensity(&mut self, road: Road, class: LinkClass, lambda: f64) {
        let slot = match (road, class) {
            (Road::X, LinkClass::Los) => &mut self.lambda_x_los,
            (Road::X, LinkClass::Nlos) => &mut self.lambda_x_nlos,
            (Road::Y, LinkClass::Los) => &mut self.lambda_y_los,
            (Road::Y, LinkClass::Nlos) => &mut self.lambda_y_nlos,
        };
        *slot = lambda;
    }

    /// Multiply all four intensities by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = *self;
        for (road, class) in PROCESSES {
            out.set_intensity(road, class, self.intensity(road, class) * factor);
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        for (key, v) in [
            ("lambda_x_los", self.lambda_x_los),
            ("lambda_x_nlos", self.lambda_x_nlos),
            ("lambda_y_los", self.lambda_y_los),
            ("lambda_y_nlos", self.lambda_y_nlos),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::validation(key, format!("intensity must be finite and >= 0, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::validation("p", format!("access probability must lie in [0, 1], got {}", self.p)));
        }
        if !(self.window > 0.0 && self.window.is_finite()) {
            return Err(Error::validation("window", format!("window must be > 0, got {}", self.window)));
        }
        Ok(())
    }
}

/// The four (road, class) interferer processes in a fixed order.
pub const PROCESSES: [(Road, LinkClass); 4] = [
    (Road::X, LinkClass::Los),
    (Road::X, LinkClass::Nlos),
    (Road::Y, LinkClass::Los),
    (Road::Y, LinkClass::Nlos),
];

pub fn process_index(road: Road, class: LinkClass) -> usize {
    match (road, class) {
        (Road::X, LinkClass::Los) => 0,
        (Road::X, LinkClass::Nlos) => 1,
        (Road::Y, LinkClass::Los) => 2,
        (Road::Y, LinkClass::Nlos) => 3,
    }
}

/// Sample a homogeneous PPP of intensity `lambda` on `[-window, window]`.
///
/// Points come out ordered by distance to the origin: radii are the
/// arrival times of a rate-`2λ` Poisson process and each point lands on
/// either side with probability 1/2.
pub fn sample_ppp_segment<R: Rng + ?Sized>(lambda: f64, window: f64, rng: &mut R) -> Vec<f64> {
    let mut points = Vec::new();
    if lambda <= 0.0 {
        return points;
    }
    let rate = 2.0 * lambda;
    let mut radius = 0.0;
    loop {
        let gap: f64 = Exp1.sample(rng);
        radius += gap / rate;
        if radius > window {
            break;
        }
        let side = if rng.random::<bool>() { 1.0 } else { -1.0 };
        points.push(side * radius);
    }
    points
}

/// Independently mark each point active with probability `p`.
pub fn aloha_thin<R: Rng + ?Sized>(points: &[f64], p: f64, rng: &mut R) -> Vec<bool> {
    if p >= 1.0 || p <= 0.0 {
        return vec![p >= 1.0; points.len()];
    }
    points.iter().map(|_| rng.random::<f64>() < p).collect()
}

/// One marked interferer process: positions along its road, ALOHA marks,
/// and unit-mean exponential fading marks toward each receiver
/// (`fading[i * receivers + j]` belongs to point `i`, receiver `j`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MarkedProcess {
    pub positions: Vec<f64>,
    pub active: Vec<bool>,
    pub fading: Vec<f64>,
    pub receivers: usize,
}

impl MarkedProcess {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn fading(&self, point: usize, receiver: usize) -> f64 {
        self.fading[point * self.receivers + receiver]
    }
}

/// One draw of the four interferer processes for a single time slot.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InterferenceRealization {
    pub processes: [MarkedProcess; 4],
}

impl InterferenceRealization {
    pub fn process(&self, road: Road, class: LinkClass) -> &MarkedProcess {
        &self.processes[process_index(road, class)]
    }

    pub fn total_points(&self) -> usize {
        self.processes.iter().map(MarkedProcess::len).sum()
    }
}

/// Draw a realization with fading marks toward `receivers` receivers.
///
/// `windows` gives the half-width per process (indexed like [`PROCESSES`]);
/// pass `[cfg.window; 4]` for a uniform segment. The parent `rng` is
/// advanced by a fixed amount regardless of the windows.
pub fn draw_realization_with_windows<R: Rng>(
    cfg: &PppConfig,
    windows: [f64; 4],
    receivers: usize,
    rng: &mut R,
) -> InterferenceRealization {
    let mut out = InterferenceRealization::default();
    for (idx, (road, class)) in PROCESSES.into_iter().enumerate() {
        let mut pos_rng = ChaCha8Rng::from_rng(rng);
        let mut access_rng = ChaCha8Rng::from_rng(rng);
        let mut fading_rng = ChaCha8Rng::from_rng(rng);

        let positions = sample_ppp_segment(cfg.intensity(road, class), windows[idx], &mut pos_rng);
        let active = aloha_thin(&positions, cfg.p, &mut access_rng);
        let fading = (0..positions.len() * receivers)
            .map(|_| sample_interferer_power_fading(&mut fading_rng))
            .collect();
        out.processes[idx] = MarkedProcess { positions, active, fading, receivers };
    }
    out
}

/// Draw a realization on `[-cfg.window, cfg.window]` with fading marks for
/// the three receivers R, D1, D2.
pub fn draw_realization<R: Rng>(cfg: &PppConfig, rng: &mut R) -> InterferenceRealization {
    draw_realization_with_windows(cfg, [cfg.window; 4], 3, rng)
}
