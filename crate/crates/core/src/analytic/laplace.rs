//! Laplace transforms of the interference from one road.
//!
//! All transforms here are for unit-gain interference `Σ |h|² r^(-α)`; the
//! link-budget constant Υ multiplies signal and interference alike, so
//! callers fold it into the evaluation point (`L_{ΥI}(s) = L_I(Υ s)`).
//!
//! With exponential fading and ALOHA thinning the PGFL gives
//! `L(s) = exp(-p λ J(s))` with `J(s) = ∫_ℝ s / (s + d(t)^α) dt`,
//! `d(t)` the receiver-to-road-point distance.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{NodePolar, Road};
use crate::quadrature::{integrate_half_line, Tolerance};
use crate::taylor::TaylorScalar;

const EXPONENT_TOL: Tolerance = Tolerance { abs: 0.0, rel: 1e-13 };

/// Closed-form transform for α = 2.
pub fn laplace_closed(s: f64, p: f64, lambda: f64, n: NodePolar, road: Road) -> f64 {
    if s == 0.0 || p * lambda == 0.0 {
        return 1.0;
    }
    (-exponent_alpha2(s, p * lambda, n.offset_from(road))).exp()
}

fn exponent_alpha2(s: f64, density: f64, offset: f64) -> f64 {
    density * PI * s / (offset * offset + s).sqrt()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 {
        Ok(())
    } else {
        Err(Error::validation("alpha", format!("interference integral diverges for alpha = {alpha} <= 1")))
    }
}

/// `J(s) = ∫_ℝ 1 / (1 + d(t)^α / s) dt`, by quadrature.
pub fn exponent_integral(s: f64, alpha: f64, n: NodePolar, road: Road) -> Result<f64> {
    check_alpha(alpha)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let h2 = n.offset_from(road).powi(2);
    let f = |u: f64| {
        let w = (h2 + u * u).powf(alpha / 2.0);
        s / (s + w)
    };
    // symmetric about the projection point
    Ok(2.0 * integrate_half_line(f, split_point(s, alpha, h2), EXPONENT_TOL)?.value)
}

fn split_point(s: f64, alpha: f64, h2: f64) -> f64 {
    s.powf(1.0 / alpha).max(h2.sqrt()).max(1e-6)
}

/// Transform for a general exponent, by quadrature of the PGFL exponent.
pub fn laplace_quadrature(s: f64, p: f64, lambda: f64, alpha: f64, n: NodePolar, road: Road) -> Result<f64> {
    check_alpha(alpha)?;
    if s == 0.0 || p * lambda == 0.0 {
        return Ok(1.0);
    }
    Ok((-p * lambda * exponent_integral(s, alpha, n, road)?).exp())
}

/// `-ln L(s) = p λ J(s)`; closed form for α = 2, quadrature otherwise.
pub fn laplace_exponent(s: f64, p: f64, lambda: f64, alpha: f64, n: NodePolar, road: Road) -> Result<f64> {
    check_alpha(alpha)?;
    if s == 0.0 || p * lambda == 0.0 {
        return Ok(0.0);
    }
    if alpha == 2.0 {
        return Ok(exponent_alpha2(s, p * lambda, n.offset_from(road)));
    }
    Ok(p * lambda * exponent_integral(s, alpha, n, road)?)
}

/// Mean-field tail of the exponent beyond `|t| > window` on a road
/// segment: an upper bound on what truncating the road to `[-window,
/// window]` drops from `p λ J(s)`.
pub fn truncated_tail_bound(s: f64, p: f64, lambda: f64, alpha: f64, n: NodePolar, road: Road, window: f64) -> f64 {
    let reach = window - n.projection_on(road).abs();
    if reach <= 0.0 {
        return f64::INFINITY;
    }
    2.0 * p * lambda * s * reach.powf(1.0 - alpha) / (alpha - 1.0)
}

/// Taylor coefficients of `s ↦ L(s)` up to `order` around `s`.
///
/// α = 2 goes through the closed form; other exponents differentiate under
/// the integral sign, one quadrature per coefficient.
pub fn laplace_taylor(
    order: usize,
    s: f64,
    p: f64,
    lambda: f64,
    alpha: f64,
    n: NodePolar,
    road: Road,
) -> Result<TaylorScalar> {
    check_alpha(alpha)?;
    if !(s >= 0.0) {
        return Err(Error::validation("s", format!("evaluation point must be >= 0, got {s}")));
    }
    let density = p * lambda;
    if density == 0.0 {
        return Ok(TaylorScalar::constant(1.0, order));
    }
    let exponent = if alpha == 2.0 {
        exponent_taylor_alpha2(order, s, density, n.offset_from(road))?
    } else {
        exponent_integral_taylor(order, s, alpha, n, road)?.scale(density)
    };
    Ok((-&exponent).exp())
}

fn exponent_taylor_alpha2(order: usize, s: f64, density: f64, offset: f64) -> Result<TaylorScalar> {
    let var = TaylorScalar::variable(s, order);
    let base = &var + offset * offset;
    if base.value() == 0.0 {
        if order == 0 {
            return Ok(TaylorScalar::constant(0.0, 0));
        }
        return Err(Error::validation("s", "transform is not differentiable at s = 0 for a receiver on the road"));
    }
    Ok((&var * &base.powf(-0.5)).scale(density * PI))
}

/// Taylor coefficients of `J` at `s`: `J_0 = ∫ s/(s+w)`,
/// `J_j = (-1)^(j+1) ∫ w/(s+w)^(j+1)` for `j ≥ 1`, with `w = d^α`.
pub fn exponent_integral_taylor(order: usize, s: f64, alpha: f64, n: NodePolar, road: Road) -> Result<TaylorScalar> {
    check_alpha(alpha)?;
    let h2 = n.offset_from(road).powi(2);
    let split = split_point(s, alpha, h2);
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(if s == 0.0 { 0.0 } else { exponent_integral(s, alpha, n, road)? });
    for j in 1..=order {
        if s == 0.0 && h2 == 0.0 {
            return Err(Error::validation("s", "derivative diverges at s = 0 for a receiver on the road"));
        }
        let power = (j + 1) as i32;
        let f = |u: f64| {
            let w = (h2 + u * u).powf(alpha / 2.0);
            w / (s + w).powi(power)
        };
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        coeffs.push(sign * 2.0 * integrate_half_line(f, split, EXPONENT_TOL)?.value);
    }
    Ok(TaylorScalar::from_coeffs(coeffs))
}

/// Derivative of order `k` of the α = 2 transform in bracket form: the
/// first-derivative bracket raised to the `k`-th power
/// times the transform. Exact for `k ≤ 1` only.
pub fn laplace_derivative_bracket_form(k: usize, s: f64, p: f64, lambda: f64, n: NodePolar, road: Road) -> f64 {
    let density = p * lambda;
    let h2 = n.offset_from(road).powi(2);
    let bracket = -density * PI / (h2 + s).sqrt() + 0.5 * density * PI * s / (h2 + s).powf(1.5);
    bracket.powi(k as i32) * laplace_closed(s, p, lambda, n, road)
}
