//! Truncated Taylor arithmetic.
//!
//! A [`TaylorScalar`] of order `K` stores `c_0..=c_K` with
//! `f(s0 + ε) = Σ c_k ε^k + O(ε^{K+1})`, so the `k`-th derivative at `s0` is
//! `k! · c_k`. Every operation is exact up to the truncation order.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorScalar {
    coeffs: Vec<f64>,
}

impl TaylorScalar {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The independent variable expanded around `at`.
    pub fn variable(at: f64, order: usize) -> Self {
        let mut t = Self::constant(at, order);
        if order >= 1 {
            t.coeffs[1] = 1.0;
        }
        t
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a Taylor scalar needs at least c_0");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs[k]
    }

    /// `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        self.coeffs[k] * factorial(k)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    pub fn exp(&self) -> Self {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let mut b = vec![0.0; n];
        b[0] = a[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * b[k - j]).sum();
            b[k] = s / k as f64;
        }
        Self { coeffs: b }
    }

    /// `self^r` for a real exponent; requires a nonzero value.
    pub fn powf(&self, r: f64) -> Self {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        assert!(a[0] != 0.0, "powf expansion needs a nonzero base");
        let mut b = vec![0.0; n];
        b[0] = a[0].powf(r);
        for k in 1..n {
            let s: f64 = (1..=k)
                .map(|j| ((r + 1.0) * j as f64 - k as f64) * a[j] * b[k - j])
                .sum();
            b[k] = s / (k as f64 * a[0]);
        }
        Self { coeffs: b }
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Self {
        self.powf(-1.0)
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "mismatched Taylor orders");
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Add for &TaylorScalar {
    type Output = TaylorScalar;
    fn add(self, rhs: &TaylorScalar) -> TaylorScalar {
        self.check_order(rhs);
        TaylorScalar {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &TaylorScalar {
    type Output = TaylorScalar;
    fn sub(self, rhs: &TaylorScalar) -> TaylorScalar {
        self.check_order(rhs);
        TaylorScalar {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &TaylorScalar {
    type Output = TaylorScalar;
    fn mul(self, rhs: &TaylorScalar) -> TaylorScalar {
        self.check_order(rhs);
        let n = self.coeffs.len();
        let mut c = vec![0.0; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs[..n - i].iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        TaylorScalar { coeffs: c }
    }
}

impl Add<f64> for &TaylorScalar {
    type Output = TaylorScalar;
    fn add(self, rhs: f64) -> TaylorScalar {
        let mut out = self.clone();
        out.coeffs[0] += rhs;
        out
    }
}

impl Neg for &TaylorScalar {
    type Output = TaylorScalar;
    fn neg(self) -> TaylorScalar {
        self.scale(-1.0)
    }
}

impl Add for TaylorScalar {
    type Output = TaylorScalar;
    fn add(self, rhs: TaylorScalar) -> TaylorScalar {
        &self + &rhs
    }
}

impl Mul for TaylorScalar {
    type Output = TaylorScalar;
    fn mul(self, rhs: TaylorScalar) -> TaylorScalar {
        &self * &rhs
    }
}
