//! Blockage, antenna gain, path loss and fading.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Link state with respect to building blockage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkClass {
    Los,
    Nlos,
}

impl LinkClass {
    pub const ALL: [LinkClass; 2] = [LinkClass::Los, LinkClass::Nlos];

    pub fn as_str(self) -> &'static str {
        match self {
            LinkClass::Los => "los",
            LinkClass::Nlos => "nlos",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockageParams {
    /// Blockage rate β, 1/m.
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParams {
    pub g_max: f64,
    pub g_min: f64,
    /// Half-power beamwidth, radians.
    pub phi: f64,
    /// Carrier frequency, Hz.
    pub carrier_freq: f64,
}

impl BeamParams {
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq
    }
}

/// Nakagami parameters of the S-R and R-D links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingParams {
    pub m_los: u32,
    pub m_nlos: u32,
    /// Average received power μ.
    pub mu: f64,
}

impl FadingParams {
    pub fn m(&self, class: LinkClass) -> u32 {
        match class {
            LinkClass::Los => self.m_los,
            LinkClass::Nlos => self.m_nlos,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossParams {
    pub alpha_los: f64,
    pub alpha_nlos: f64,
}

impl PathLossParams {
    pub fn alpha(&self, class: LinkClass) -> f64 {
        match class {
            LinkClass::Los => self.alpha_los,
            LinkClass::Nlos => self.alpha_nlos,
        }
    }
}

pub fn los_probability(r: f64, b: BlockageParams) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::validation("r", format!("link distance must be >= 0, got {r}")));
    }
    Ok((-b.beta * r).exp())
}

/// Probability that a link of length `r` is in `class`.
pub fn class_probability(class: LinkClass, r: f64, b: BlockageParams) -> Result<f64> {
    let los = los_probability(r, b)?;
    Ok(match class {
        LinkClass::Los => los,
        LinkClass::Nlos => 1.0 - los,
    })
}

/// Two-level sectored antenna pattern.
pub fn directional_gain(omega: f64, b: BeamParams) -> f64 {
    // wrap to (-π, π]
    let mut w = omega.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    if w.abs() <= b.phi / 2.0 {
        b.g_max
    } else {
        b.g_min
    }
}

/// Link-budget constant Υ = G_max² λ² / (4π)² under perfect beam alignment.
pub fn upsilon(b: BeamParams) -> f64 {
    let wl = b.wavelength();
    b.g_max * b.g_max * wl * wl / (16.0 * PI * PI)
}

pub fn path_loss(r: f64, alpha: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::validation("r", format!("path loss is singular at r = {r}")));
    }
    Ok(r.powf(-alpha))
}

/// One draw of the link power gain |h|² ~ Gamma(m, μ/m).
pub fn sample_link_power_fading<R: Rng + ?Sized>(m: u32, mu: f64, rng: &mut R) -> f64 {
    if m == 1 {
        let e: f64 = Exp1.sample(rng);
        return mu * e;
    }
    let shape = m as f64;
    Gamma::new(shape, mu / shape)
        .expect("positive gamma parameters")
        .sample(rng)
}

/// Rayleigh power gain of an interfering link: unit-mean exponential.
pub fn sample_interferer_power_fading<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

/// P(|h|² > x) for |h|² ~ Gamma(m, μ/m), via the finite exponential sum that
/// holds for integer `m`.
pub fn gamma_ccdf(m: u32, mu: f64, x: f64) -> f64 {
    assert!(m >= 1, "Nakagami parameter must be >= 1");
    if x <= 0.0 {
        return 1.0;
    }
    let z = m as f64 * x / mu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..m {
        term *= z / k as f64;
        sum += term;
    }
    (-z).exp() * sum
}

/// Accept a Nakagami parameter only when it is a positive integer.
pub fn integer_nakagami(key: &str, m: f64) -> Result<u32> {
    if m.is_finite() && m >= 1.0 && m.fract() == 0.0 && m <= u32::MAX as f64 {
        Ok(m as u32)
    } else {
        Err(Error::validation(
            key,
            format!("integer Nakagami parameter required (>= 1), got {m}"),
        ))
    }
}
