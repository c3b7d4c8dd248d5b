//! The physical model shared by the closed-form and simulated evaluations.

use std::f64::consts::PI;

use crate::channel::{
    class_probability, BeamParams, BlockageParams, FadingParams, LinkClass, PathLossParams,
};
use crate::error::{Error, Result};
use crate::geometry::{distance, to_polar, NodePolar, Position};
use crate::pointprocess::{PppConfig, DEFAULT_WINDOW};

/// Power split and target rates of the two NOMA users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NomaParams {
    pub a1: f64,
    pub a2: f64,
    /// Target rate of D1, bits/s/Hz.
    pub rate1: f64,
    /// Target rate of D2, bits/s/Hz.
    pub rate2: f64,
}

/// How the S-R and R-D link classes are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinkMode {
    /// LOS with probability exp(-β r), NLOS otherwise.
    #[default]
    Blockage,
    ForceLos,
    ForceNlos,
}

impl LinkMode {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkMode::Blockage => "blockage",
            LinkMode::ForceLos => "los",
            LinkMode::ForceNlos => "nlos",
        }
    }
}

/// The receiving end of a transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Receiver {
    Relay,
    D1,
    D2,
}

impl Receiver {
    pub const ALL: [Receiver; 3] = [Receiver::Relay, Receiver::D1, Receiver::D2];

    pub fn index(self) -> usize {
        match self {
            Receiver::Relay => 0,
            Receiver::D1 => 1,
            Receiver::D2 => 2,
        }
    }
}

/// One of the two destinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Destination {
    D1,
    D2,
}

impl Destination {
    pub fn receiver(self) -> Receiver {
        match self {
            Destination::D1 => Receiver::D1,
            Destination::D2 => Receiver::D2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Destination::D1 => "d1",
            Destination::D2 => "d2",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub source: Position,
    pub relay: Position,
    pub d1: Position,
    pub d2: Position,
    pub noma: NomaParams,
    pub path_loss: PathLossParams,
    pub fading: FadingParams,
    pub blockage: BlockageParams,
    pub beam: BeamParams,
    pub ppp: PppConfig,
    pub link_mode: LinkMode,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            source: Position::new(0.0, 0.0),
            relay: Position::new(50.0, 0.0),
            d1: Position::new(100.0, 10.0),
            d2: Position::new(100.0, -10.0),
            noma: NomaParams { a1: 0.8, a2: 0.2, rate1: 0.25, rate2: 0.5 },
            path_loss: PathLossParams { alpha_los: 2.0, alpha_nlos: 4.0 },
            fading: FadingParams { m_los: 2, m_nlos: 1, mu: 1.0 },
            blockage: BlockageParams { beta: 9.5e-3 },
            beam: BeamParams {
                g_max: 10f64.powf(1.8),
                g_min: 10f64.powf(-0.2),
                phi: PI / 6.0,
                carrier_freq: 30e9,
            },
            ppp: PppConfig::uniform(1e-3, 1.0, DEFAULT_WINDOW),
            link_mode: LinkMode::Blockage,
        }
    }
}

impl Scenario {
    pub fn position(&self, rx: Receiver) -> Position {
        match rx {
            Receiver::Relay => self.relay,
            Receiver::D1 => self.d1,
            Receiver::D2 => self.d2,
        }
    }

    pub fn polar(&self, rx: Receiver) -> NodePolar {
        to_polar(self.position(rx))
    }

    /// Transmitter feeding `rx`: the source for the relay, the relay for
    /// the destinations.
    pub fn transmitter(&self, rx: Receiver) -> Position {
        match rx {
            Receiver::Relay => self.source,
            Receiver::D1 | Receiver::D2 => self.relay,
        }
    }

    pub fn link_length(&self, rx: Receiver) -> f64 {
        distance(self.transmitter(rx), self.position(rx))
    }

    /// Probability that the link into `rx` is in `class`.
    pub fn link_class_probability(&self, rx: Receiver, class: LinkClass) -> f64 {
        match (self.link_mode, class) {
            (LinkMode::Blockage, _) => class_probability(class, self.link_length(rx), self.blockage)
                .expect("link lengths are validated positive"),
            (LinkMode::ForceLos, LinkClass::Los) | (LinkMode::ForceNlos, LinkClass::Nlos) => 1.0,
            _ => 0.0,
        }
    }

    pub fn upsilon(&self) -> f64 {
        crate::channel::upsilon(self.beam)
    }

    /// Set all four interferer intensities to `lambda`.
    pub fn with_lambda(&self, lambda: f64) -> Self {
        let mut out = self.clone();
        out.ppp = PppConfig::uniform(lambda, self.ppp.p, self.ppp.window);
        out
    }

    pub fn validate(&self) -> Result<()> {
        for (key, p) in [("s", self.source), ("r", self.relay), ("d1", self.d1), ("d2", self.d2)] {
            if !p.is_finite() {
                return Err(Error::validation(key, "position must be finite"));
            }
        }
        for (key, rx) in [("r", Receiver::Relay), ("d1", Receiver::D1), ("d2", Receiver::D2)] {
            if !(self.link_length(rx) > 0.0) {
                return Err(Error::validation(key, "node coincides with its transmitter"));
            }
        }

        let n = &self.noma;
        if !(n.a2 > 0.0 && n.a1 >= n.a2) {
            return Err(Error::validation("a1", format!("need a1 >= a2 > 0, got a1={} a2={}", n.a1, n.a2)));
        }
        if (n.a1 + n.a2 - 1.0).abs() > 1e-12 {
            return Err(Error::validation("a2", format!("a1 + a2 must equal 1, got {}", n.a1 + n.a2)));
        }
        for (key, r) in [("rate1", n.rate1), ("rate2", n.rate2)] {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::validation(key, format!("rate must be > 0, got {r}")));
            }
        }

        let pl = &self.path_loss;
        if !(pl.alpha_los > 1.0) {
            return Err(Error::validation("alpha_los", format!("path-loss exponent must exceed 1, got {}", pl.alpha_los)));
        }
        if !(pl.alpha_nlos >= pl.alpha_los) {
            return Err(Error::validation("alpha_nlos", format!("need alpha_nlos >= alpha_los, got {}", pl.alpha_nlos)));
        }

        if self.fading.m_los < 1 {
            return Err(Error::validation("m_los", "integer Nakagami parameter required (>= 1)"));
        }
        if self.fading.m_nlos < 1 {
            return Err(Error::validation("m_nlos", "integer Nakagami parameter required (>= 1)"));
        }
        if !(self.fading.mu > 0.0) {
            return Err(Error::validation("mu", format!("average power must be > 0, got {}", self.fading.mu)));
        }
        if !(self.blockage.beta >= 0.0 && self.blockage.beta.is_finite()) {
            return Err(Error::validation("beta", format!("blockage rate must be >= 0, got {}", self.blockage.beta)));
        }

        let b = &self.beam;
        if !(b.g_min > 0.0) {
            return Err(Error::validation("g_min_dbi", "gain must be positive"));
        }
        if !(b.g_max >= b.g_min) {
            return Err(Error::validation("g_max_dbi", "need g_max >= g_min"));
        }
        if !(b.phi > 0.0 && b.phi < 2.0 * PI) {
            return Err(Error::validation("phi", format!("beamwidth must lie in (0, 2π), got {}", b.phi)));
        }
        if !(b.carrier_freq > 0.0 && b.carrier_freq.is_finite()) {
            return Err(Error::validation("carrier_freq", "carrier frequency must be > 0"));
        }
        self.ppp.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let sc = Scenario::default();
        sc.validate().unwrap();
        assert_eq!(sc.link_length(Receiver::Relay), 50.0);
        assert!((sc.link_length(Receiver::D1) - 2600f64.sqrt()).abs() < 1e-12);
        assert_eq!(sc.link_length(Receiver::D1), sc.link_length(Receiver::D2));
    }

    #[test]
    fn rejects_bad_power_split() {
        let mut sc = Scenario::default();
        sc.noma.a1 = 0.7;
        let err = sc.validate().unwrap_err().to_string();
        assert!(err.contains("a2"), "{err}");
    }

    #[test]
    fn rejects_divergent_exponent() {
        let mut sc = Scenario::default();
        sc.path_loss.alpha_los = 1.0;
        assert!(sc.validate().unwrap_err().to_string().contains("alpha_los"));
    }

    #[test]
    fn forced_modes_are_degenerate_weights() {
        let mut sc = Scenario::default();
        sc.link_mode = LinkMode::ForceNlos;
        assert_eq!(sc.link_class_probability(Receiver::D1, LinkClass::Los), 0.0);
        assert_eq!(sc.link_class_probability(Receiver::D1, LinkClass::Nlos), 1.0);
    }
}
