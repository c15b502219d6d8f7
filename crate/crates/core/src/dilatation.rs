//! Co-analytic parts from prescribed dilatations `w = g' / h'`.
//!
//! Two families are supported: monomials `k e^{i theta} z^n` and the Möbius
//! maps `(a + z) / (1 + a z)` and `(a - z) / (1 - a z)`. Both are solved term
//! by term from `g' = w h'`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{is_normalized, HarmonicMap, PowerSeries};

/// Dilatation `k e^{i theta} z^n`.
///
/// `k = 1` is admitted for the sense-preserving limit case; `theta` is stored
/// reduced to `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonomialDilatation {
    k: f64,
    theta: f64,
    n: u32,
}

impl MonomialDilatation {
    pub fn new(k: f64, theta: f64, n: u32) -> Result<Self> {
        if !(k > 0.0 && k <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "k",
                value: k,
                reason: "must lie in (0, 1]",
            });
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "must be finite",
            });
        }
        if n < 1 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                reason: "must be at least 1",
            });
        }
        Ok(Self {
            k,
            theta: theta.rem_euclid(TAU),
            n,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        Complex64::from_polar(self.k, self.theta) * z.powu(self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MobiusSign {
    /// `(a + z) / (1 + a z)`
    Plus,
    /// `(a - z) / (1 - a z)`
    Minus,
}

impl MobiusSign {
    fn factor(self) -> f64 {
        match self {
            MobiusSign::Plus => 1.0,
            MobiusSign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusDilatation {
    a: f64,
    sign: MobiusSign,
}

impl MobiusDilatation {
    pub fn new(a: f64, sign: MobiusSign) -> Result<Self> {
        if !(a.abs() < 1.0) {
            return Err(Error::InvalidParameter {
                name: "a",
                value: a,
                reason: "must satisfy |a| < 1",
            });
        }
        Ok(Self { a, sign })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn sign(&self) -> MobiusSign {
        self.sign
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let s = self.sign.factor();
        (self.a + s * z) / (1.0 + s * self.a * z)
    }
}

fn require_normalized(h: &PowerSeries) -> Result<()> {
    if is_normalized(h) {
        Ok(())
    } else {
        Err(Error::NotNormalized)
    }
}

/// Solves `g' = k e^{i theta} z^n h'` with `g(0) = 0`:
/// `b_{m+n} = k e^{i theta} m / (m + n) a_m`.
pub fn g_from_monomial(h: &PowerSeries, d: &MonomialDilatation) -> Result<PowerSeries> {
    require_normalized(h)?;
    let n = d.n as usize;
    let order = h.order();
    if order < n + 1 {
        return Err(Error::OrderTooSmall {
            order,
            required: n + 1,
        });
    }
    let rot = Complex64::from_polar(d.k, d.theta);
    let mut b = vec![Complex64::default(); order + 1];
    for m in 1..=order - n {
        b[m + n] = rot * h.coeff(m) * (m as f64 / (m + n) as f64);
    }
    Ok(PowerSeries::from_vec_unchecked(b))
}

/// Solves `g' (1 ± a z) = (a ± z) h'` by the recurrence
/// `m b_m ± a (m-1) b_{m-1} = a m a_m ± (m-1) a_{m-1}`, `b_1 = a a_1`.
pub fn g_from_mobius(h: &PowerSeries, d: &MobiusDilatation) -> Result<PowerSeries> {
    require_normalized(h)?;
    let (a, s) = (d.a, d.sign.factor());
    let order = h.order();
    let mut b = vec![Complex64::default(); order + 1];
    b[1] = a * h.coeff(1);
    for m in 2..=order {
        let mf = m as f64;
        let prev = mf - 1.0;
        let rhs = a * mf * h.coeff(m) + s * prev * h.coeff(m - 1) - s * a * prev * b[m - 1];
        b[m] = rhs / mf;
    }
    Ok(PowerSeries::from_vec_unchecked(b))
}

/// Harmonic map with analytic part `h` and the co-analytic part induced by `d`.
pub fn monomial_map(h: PowerSeries, d: &MonomialDilatation) -> Result<HarmonicMap> {
    let g = g_from_monomial(&h, d)?;
    HarmonicMap::new(h, g)
}

pub fn mobius_map(h: PowerSeries, d: &MobiusDilatation) -> Result<HarmonicMap> {
    let g = g_from_mobius(&h, d)?;
    HarmonicMap::new(h, g)
}

/// Sample points on `rings` circles of radius up to `max_radius`, `angles` per circle.
pub fn disc_grid(max_radius: f64, rings: usize, angles: usize) -> Vec<Complex64> {
    let mut pts = vec![Complex64::default()];
    for i in 1..=rings {
        let rho = max_radius * i as f64 / rings as f64;
        pts.extend(
            (0..angles).map(|j| Complex64::from_polar(rho, TAU * j as f64 / angles as f64)),
        );
    }
    pts
}

/// `max |g'(z) - w(z) h'(z)|` over the sample points.
pub fn dilatation_residual<W>(f: &HarmonicMap, w: W, grid: &[Complex64]) -> Result<f64>
where
    W: Fn(Complex64) -> Complex64,
{
    let dh = f.h().differentiate();
    let dg = f.g().differentiate();
    let mut worst = 0.0f64;
    for &z in grid {
        let r = (dg.eval(z)? - w(z) * dh.eval(z)?).norm();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// `max |g'(z) / h'(z)|` over the sample points, the pointwise dilatation modulus.
pub fn max_dilatation(f: &HarmonicMap, grid: &[Complex64]) -> Result<f64> {
    let dh = f.h().differentiate();
    let dg = f.g().differentiate();
    let mut worst = 0.0f64;
    for &z in grid {
        worst = worst.max((dg.eval(z)? / dh.eval(z)?).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn koebe(order: usize) -> PowerSeries {
        PowerSeries::from_real((0..=order).map(|m| m as f64)).unwrap()
    }

    /// g' = w h' by explicit geometric expansion of w, then integration.
    fn mobius_oracle(h: &PowerSeries, a: f64) -> PowerSeries {
        let order = h.order();
        let w = PowerSeries::from_real((0..=order).map(|j| match j {
            0 => a,
            _ => (-a).powi(j as i32 - 1) * (1.0 - a * a),
        }))
        .unwrap();
        w.product(&h.differentiate()).integrate()
    }

    #[test]
    fn parameter_validation() {
        assert!(MonomialDilatation::new(0.0, 0.0, 1).is_err());
        assert!(MonomialDilatation::new(1.2, 0.0, 1).is_err());
        assert!(MonomialDilatation::new(0.5, 0.0, 0).is_err());
        assert!(MonomialDilatation::new(1.0, 0.0, 1).is_ok());
        let d = MonomialDilatation::new(0.5, -FRAC_PI_2, 1).unwrap();
        assert!((d.theta() - 3.0 * FRAC_PI_2).abs() < 1e-15);
        assert!(MobiusDilatation::new(1.0, MobiusSign::Plus).is_err());
        assert!(MobiusDilatation::new(-0.999, MobiusSign::Minus).is_ok());
        let not_normalized = PowerSeries::from_real([0.0, 2.0, 1.0]).unwrap();
        let d = MonomialDilatation::new(0.5, 0.0, 1).unwrap();
        assert_eq!(g_from_monomial(&not_normalized, &d), Err(Error::NotNormalized));
        assert!(matches!(
            g_from_monomial(&PowerSeries::identity(2), &MonomialDilatation::new(0.5, 0.0, 2).unwrap()),
            Err(Error::OrderTooSmall { .. })
        ));
    }

    #[test]
    fn monomial_on_koebe_matches_f0() {
        let d = MonomialDilatation::new(1.0, 0.0, 1).unwrap();
        let g = g_from_monomial(&koebe(50), &d).unwrap();
        assert_eq!(g.coeff(0), c(0.0));
        assert_eq!(g.coeff(1), c(0.0));
        assert_eq!(g.coeff(2), c(0.5));
        assert!((g.coeff(3).re - 4.0 / 3.0).abs() < 1e-15);
        for m in 1..=50 {
            let expected = ((m - 1) * (m - 1)) as f64 / m as f64;
            assert!((g.coeff(m).re - expected).abs() <= 1e-15 * expected.max(1.0));
        }
    }

    #[test]
    fn monomial_on_identity_is_single_term() {
        for n in 1..5u32 {
            let d = MonomialDilatation::new(0.4, 1.1, n).unwrap();
            let g = g_from_monomial(&PowerSeries::identity(8), &d).unwrap();
            let expected = Complex64::from_polar(0.4, 1.1) / (n as f64 + 1.0);
            for m in 0..=8 {
                let want = if m == n as usize + 1 { expected } else { c(0.0) };
                assert!((g.coeff(m) - want).norm() < 1e-16);
            }
        }
    }

    #[test]
    fn monomial_rotated_coefficient() {
        let d = MonomialDilatation::new(1.0 / 3.0, FRAC_PI_2, 2).unwrap();
        let g = g_from_monomial(&koebe(20), &d).unwrap();
        assert!((g.coeff(4) - Complex64::new(0.0, 1.0 / 3.0)).norm() < 1e-15);
        // series-ODE oracle: g' - w h' vanishes coefficient-wise up to the truncation
        let w = PowerSeries::monomial(Complex64::from_polar(1.0 / 3.0, FRAC_PI_2), 2, 19);
        let rhs = w.product(&koebe(20).differentiate());
        let lhs = g.differentiate();
        for m in 0..=19 {
            assert!((lhs.coeff(m) - rhs.coeff(m)).norm() < 1e-12);
        }
    }

    #[test]
    fn mobius_on_identity() {
        for &a in &[-0.7, 0.0, 0.25, 0.6] {
            let d = MobiusDilatation::new(a, MobiusSign::Plus).unwrap();
            let g = g_from_mobius(&PowerSeries::identity(10), &d).unwrap();
            assert!((g.coeff(1).re - a).abs() < 1e-16);
            assert!((g.coeff(2).re - (1.0 - a * a) / 2.0).abs() < 1e-16);
            assert!((g.coeff(3).re + a * (1.0 - a * a) / 3.0).abs() < 1e-16);
        }
        let d = MobiusDilatation::new(0.0, MobiusSign::Plus).unwrap();
        let g = g_from_mobius(&PowerSeries::identity(6), &d).unwrap();
        assert_eq!(g, PowerSeries::from_real([0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0]).unwrap());
    }

    #[test]
    fn mobius_recurrence_matches_series_oracle() {
        for &a in &[-0.9, -0.5, 0.0, 0.3, 0.5, 0.7] {
            let h = koebe(60);
            let d = MobiusDilatation::new(a, MobiusSign::Plus).unwrap();
            let g = g_from_mobius(&h, &d).unwrap();
            let oracle = mobius_oracle(&h, a);
            for m in 1..=50 {
                let (x, y) = (g.coeff(m), oracle.coeff(m));
                assert!((x - y).norm() <= 1e-12 * y.norm(), "a={a} m={m}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn minus_variant_is_plus_variant_with_negated_parameter() {
        let h = koebe(100);
        for &a in &[-0.8, -0.2, 0.4, 0.9] {
            let plus = g_from_mobius(&h, &MobiusDilatation::new(a, MobiusSign::Plus).unwrap()).unwrap();
            let minus =
                g_from_mobius(&h, &MobiusDilatation::new(-a, MobiusSign::Minus).unwrap()).unwrap();
            for m in 0..=100 {
                let (p, q) = (plus.coeff(m).norm(), minus.coeff(m).norm());
                assert!((p - q).abs() <= 1e-12 * p.max(1.0));
            }
        }
        // with the same parameter the moduli differ already at m = 2
        let plus = g_from_mobius(&h, &MobiusDilatation::new(0.5, MobiusSign::Plus).unwrap()).unwrap();
        let minus = g_from_mobius(&h, &MobiusDilatation::new(0.5, MobiusSign::Minus).unwrap()).unwrap();
        assert!((plus.coeff(2).re - 1.375).abs() < 1e-15);
        assert!((minus.coeff(2).re - 0.625).abs() < 1e-15);
    }

    #[test]
    fn residuals() {
        let grid = disc_grid(0.5, 8, 32);
        let d = MonomialDilatation::new(0.6, FRAC_PI_2, 3).unwrap();
        let f = monomial_map(koebe(500), &d).unwrap();
        assert!(dilatation_residual(&f, |z| d.eval(z), &grid).unwrap() <= 1e-10);

        let f = HarmonicMap::analytic(koebe(50));
        assert_eq!(dilatation_residual(&f, |_| c(0.0), &grid).unwrap(), 0.0);

        let d = MobiusDilatation::new(0.3, MobiusSign::Plus).unwrap();
        let f = mobius_map(koebe(500), &d).unwrap();
        assert!(dilatation_residual(&f, |z| d.eval(z), &grid).unwrap() <= 1e-10);
        let d = MobiusDilatation::new(-0.6, MobiusSign::Minus).unwrap();
        let f = mobius_map(koebe(500), &d).unwrap();
        assert!(dilatation_residual(&f, |z| d.eval(z), &grid).unwrap() <= 1e-10);
    }

    #[test]
    fn dilatation_bounded_by_k_on_circle() {
        let circle: Vec<Complex64> = (0..64)
            .map(|j| Complex64::from_polar(0.9, TAU * j as f64 / 64.0))
            .collect();
        for &k in &[0.1, 0.5, 0.9] {
            for n in 1..=4 {
                let d = MonomialDilatation::new(k, 0.7, n).unwrap();
                let f = monomial_map(koebe(2000), &d).unwrap();
                assert!(max_dilatation(&f, &circle).unwrap() <= k + 1e-9);
            }
        }
    }
}
