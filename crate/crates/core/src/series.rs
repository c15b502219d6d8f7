//! Truncated power series with complex coefficients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation order for Bohr-sum work.
pub const BOHR_ORDER: usize = 2000;
/// Default truncation order for compositions.
pub const COMPOSITION_ORDER: usize = 200;

/// A power series `c_0 + c_1 z + ... + c_M z^M` truncated at order `M`.
///
/// Values are immutable; every operation returns a new series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for PowerSeries {
    type Error = Error;

    fn try_from(coeffs: Vec<Complex64>) -> Result<Self> {
        PowerSeries::new(coeffs)
    }
}

impl From<PowerSeries> for Vec<Complex64> {
    fn from(s: PowerSeries) -> Self {
        s.coeffs
    }
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoefficient { index });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real<I: IntoIterator<Item = f64>>(coeffs: I) -> Result<Self> {
        Self::new(coeffs.into_iter().map(Complex64::from).collect())
    }

    /// Builds the series of order `order` whose m-th coefficient is `f(m)`.
    pub fn from_fn<F: FnMut(usize) -> Complex64>(order: usize, f: F) -> Result<Self> {
        Self::new((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    /// `c * z^power`, truncated at `order` (zero if `power > order`).
    pub fn monomial(c: Complex64, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    pub fn identity(order: usize) -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), 1, order)
    }

    pub(crate) fn from_vec_unchecked(coeffs: Vec<Complex64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^m`; zero beyond the truncation order.
    pub fn coeff(&self, m: usize) -> Complex64 {
        self.coeffs.get(m).copied().unwrap_or_default()
    }

    /// Index of the first nonzero coefficient, or `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != Complex64::default())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::default());
        Self { coeffs }
    }

    /// Returns a copy with `delta` added to the coefficient of `z^m`.
    pub fn perturbed(&self, m: usize, delta: Complex64) -> Self {
        let mut coeffs = self.coeffs.clone();
        if let Some(c) = coeffs.get_mut(m) {
            *c += delta;
        }
        Self { coeffs }
    }

    /// Horner evaluation at a point of the closed unit disc.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_point(z, 1.0, true)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, c| acc * z + c)
    }

    /// Cauchy product truncated to the smaller of the two orders.
    pub fn product(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![Complex64::default(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if *a == Complex64::default() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Term-wise antiderivative vanishing at the origin; the order grows by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::default());
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| c / (m as f64 + 1.0)),
        );
        Self { coeffs }
    }

    /// Term-wise derivative; the order shrinks by one (an order-0 series maps to zero).
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, c)| c * m as f64)
            .collect();
        Self { coeffs }
    }

    /// Coefficients of `self(psi(z))`, truncated to the common order.
    ///
    /// `psi(0)` must vanish. Powers of `psi` are accumulated with their known
    /// zero prefix skipped, so the cost is roughly `M^3 / (6 v)` for an inner
    /// series of valuation `v`.
    pub fn compose(&self, psi: &Self) -> Result<Self> {
        let c0 = psi.coeffs[0];
        if c0 != Complex64::default() {
            return Err(Error::CompositionOrigin { re: c0.re, im: c0.im });
        }
        let order = self.order().min(psi.order());
        let mut out = vec![Complex64::default(); order + 1];
        out[0] = self.coeffs[0];
        let Some(v) = psi.valuation() else {
            return Ok(Self { coeffs: out });
        };
        let support: Vec<(usize, Complex64)> = psi.coeffs[..=order]
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, c)| *c != Complex64::default())
            .collect();
        // power holds psi^j; its first nonzero index is at least j * v.
        let mut power = psi.coeffs[..=order].to_vec();
        let mut j = 1;
        while j * v <= order {
            let cj = self.coeffs[j];
            if cj != Complex64::default() {
                for m in j * v..=order {
                    out[m] += cj * power[m];
                }
            }
            if (j + 1) * v > order {
                break;
            }
            let mut next = vec![Complex64::default(); order + 1];
            for m in (j + 1) * v..=order {
                let mut acc = Complex64::default();
                for &(i, c) in support.iter().take_while(|(i, _)| *i <= m - j * v) {
                    acc += c * power[m - i];
                }
                next[m] = acc;
            }
            power = next;
            j += 1;
        }
        Ok(Self { coeffs: out })
    }
}

pub(crate) fn check_point(z: Complex64, limit: f64, closed: bool) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::NonFinitePoint { re: z.re, im: z.im });
    }
    let modulus = z.norm();
    if modulus > limit || (!closed && modulus >= limit) {
        return Err(Error::OutsideDisc { modulus, limit });
    }
    Ok(())
}

/// A harmonic map `f = h + conj(g)` held as two truncated series of equal order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicMap {
    h: PowerSeries,
    g: PowerSeries,
}

impl HarmonicMap {
    pub fn new(h: PowerSeries, g: PowerSeries) -> Result<Self> {
        if h.order() != g.order() {
            return Err(Error::OrderMismatch {
                h: h.order(),
                g: g.order(),
            });
        }
        if g.coeffs[0] != Complex64::default() {
            return Err(Error::CoAnalyticOrigin);
        }
        Ok(Self { h, g })
    }

    /// The analytic map `h` viewed as a harmonic map with `g = 0`.
    pub fn analytic(h: PowerSeries) -> Self {
        let g = PowerSeries::zero(h.order());
        Self { h, g }
    }

    pub fn h(&self) -> &PowerSeries {
        &self.h
    }

    pub fn g(&self) -> &PowerSeries {
        &self.g
    }

    pub fn order(&self) -> usize {
        self.h.order()
    }

    /// `h(0) = 0` and `h'(0) = 1`.
    pub fn is_normalized(&self) -> bool {
        is_normalized(&self.h)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_point(z, 1.0, false)?;
        Ok(self.h.eval_unchecked(z) + self.g.eval_unchecked(z).conj())
    }

}

pub(crate) fn is_normalized(h: &PowerSeries) -> bool {
    h.order() >= 1
        && h.coeff(0) == Complex64::default()
        && h.coeff(1) == Complex64::new(1.0, 0.0)
}

/// Closed-form tails `sum_{m > M} w(m) r^m` for the growth models used in
/// truncation bounds.
pub mod tail {
    /// `sum_{m > M} r^m`.
    pub fn geometric(r: f64, m: usize) -> f64 {
        r.powi(m as i32 + 1) / (1.0 - r)
    }

    /// `sum_{m > M} m r^m`.
    pub fn linear(r: f64, m: usize) -> f64 {
        let mf = m as f64;
        r.powi(m as i32 + 1) * (mf + 1.0 - mf * r) / (1.0 - r).powi(2)
    }

    /// `sum_{m > M} m^2 r^m`.
    pub fn quadratic(r: f64, m: usize) -> f64 {
        let mf = m as f64;
        let n = mf + 1.0;
        let num = n * n - (2.0 * mf * mf + 2.0 * mf - 1.0) * r + mf * mf * r * r;
        r.powi(m as i32 + 1) * num / (1.0 - r).powi(3)
    }
}
