//! The named extremal maps, as coefficient sequences and closed forms.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{check_point, HarmonicMap, PowerSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapName {
    /// `z / (1 - z)^2`
    #[serde(rename = "koebe_analytic")]
    KoebeAnalytic,
    /// `z / (1 - z)`
    #[serde(rename = "half_plane_analytic")]
    HalfPlaneAnalytic,
    /// Harmonic Koebe function, extremal for maps convex in one direction.
    #[serde(rename = "harmonic_koebe_K")]
    HarmonicKoebe,
    /// Harmonic half-plane map, extremal for convex harmonic maps.
    #[serde(rename = "half_plane_L")]
    HalfPlaneL,
    /// Koebe analytic part with dilatation `z`.
    #[serde(rename = "f0_sharp")]
    F0Sharp,
    /// `z/(1-z)^2 + k conj(z/(1-z)^2)`
    #[serde(rename = "p_k")]
    Pk,
    /// `z/(1-z) + k conj(z/(1-z))`
    #[serde(rename = "q_k")]
    Qk,
}

impl MapName {
    pub const ALL: [MapName; 7] = [
        MapName::KoebeAnalytic,
        MapName::HalfPlaneAnalytic,
        MapName::HarmonicKoebe,
        MapName::HalfPlaneL,
        MapName::F0Sharp,
        MapName::Pk,
        MapName::Qk,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MapName::KoebeAnalytic => "koebe_analytic",
            MapName::HalfPlaneAnalytic => "half_plane_analytic",
            MapName::HarmonicKoebe => "harmonic_koebe_K",
            MapName::HalfPlaneL => "half_plane_L",
            MapName::F0Sharp => "f0_sharp",
            MapName::Pk => "p_k",
            MapName::Qk => "q_k",
        }
    }

    pub fn takes_k(self) -> bool {
        matches!(self, MapName::Pk | MapName::Qk)
    }
}

impl fmt::Display for MapName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MapName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "koebe" => return Ok(MapName::KoebeAnalytic),
            "half_plane" => return Ok(MapName::HalfPlaneAnalytic),
            "K" => return Ok(MapName::HarmonicKoebe),
            "L" => return Ok(MapName::HalfPlaneL),
            "f0" => return Ok(MapName::F0Sharp),
            _ => {}
        }
        MapName::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "map",
                name: s.to_string(),
            })
    }
}

/// A catalog map with its parameter and truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NamedMap {
    name: MapName,
    k: Option<f64>,
    order: usize,
}

impl NamedMap {
    pub fn new(name: MapName, k: Option<f64>, order: usize) -> Result<Self> {
        match (name.takes_k(), k) {
            (true, None) => {
                return Err(Error::Incompatible(format!("map {name} requires a k parameter")))
            }
            (false, Some(_)) => {
                return Err(Error::Incompatible(format!("map {name} takes no k parameter")))
            }
            (true, Some(k)) if !(0.0..1.0).contains(&k) => {
                return Err(Error::InvalidParameter {
                    name: "k",
                    value: k,
                    reason: "must lie in [0, 1)",
                })
            }
            _ => {}
        }
        if order < 1 {
            return Err(Error::OrderTooSmall { order, required: 1 });
        }
        Ok(Self { name, k, order })
    }

    pub fn simple(name: MapName, order: usize) -> Result<Self> {
        Self::new(name, None, order)
    }

    pub fn name(&self) -> MapName {
        self.name
    }

    pub fn k(&self) -> Option<f64> {
        self.k
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient moduli pair `(a_m, b_m)` of the map.
    pub fn coefficients(&self, m: usize) -> (f64, f64) {
        let mf = m as f64;
        if m == 0 {
            return (0.0, 0.0);
        }
        let k = self.k.unwrap_or(0.0);
        match self.name {
            MapName::KoebeAnalytic => (mf, 0.0),
            MapName::HalfPlaneAnalytic => (1.0, 0.0),
            MapName::HarmonicKoebe => (
                (mf + 1.0) * (2.0 * mf + 1.0) / 6.0,
                (mf - 1.0) * (2.0 * mf - 1.0) / 6.0,
            ),
            MapName::HalfPlaneL => ((mf + 1.0) / 2.0, (1.0 - mf) / 2.0),
            MapName::F0Sharp => (mf, (mf - 1.0) * (mf - 1.0) / mf),
            MapName::Pk => (mf, k * mf),
            MapName::Qk => (1.0, k),
        }
    }

    pub fn build(&self) -> HarmonicMap {
        let mut h = Vec::with_capacity(self.order + 1);
        let mut g = Vec::with_capacity(self.order + 1);
        for m in 0..=self.order {
            let (a, b) = self.coefficients(m);
            h.push(Complex64::new(a, 0.0));
            g.push(Complex64::new(b, 0.0));
        }
        HarmonicMap::new(
            PowerSeries::from_vec_unchecked(h),
            PowerSeries::from_vec_unchecked(g),
        )
        .expect("catalog coefficients are well formed")
    }

    /// Constant `C` with `|a_m| + |b_m| <= C m^2` for every `m >= 1`.
    pub fn tail_constant(&self) -> f64 {
        match self.name {
            MapName::KoebeAnalytic | MapName::F0Sharp | MapName::Pk | MapName::Qk => 2.0,
            MapName::HalfPlaneAnalytic | MapName::HarmonicKoebe | MapName::HalfPlaneL => 1.0,
        }
    }

    /// Closed-form value `h(z) + conj(g(z))` for `|z| < 1`.
    pub fn closed_form_eval(&self, z: Complex64) -> Result<Complex64> {
        check_point(z, 1.0, false)?;
        let one = Complex64::new(1.0, 0.0);
        let w = one - z;
        let koebe = z / (w * w);
        let half = z / w;
        let k = self.k.unwrap_or(0.0);
        let (h, g) = match self.name {
            MapName::KoebeAnalytic => (koebe, Complex64::default()),
            MapName::HalfPlaneAnalytic => (half, Complex64::default()),
            MapName::HarmonicKoebe => {
                let w3 = w * w * w;
                let z2 = z * z;
                let z3 = z2 * z;
                ((z - z2 / 2.0 + z3 / 6.0) / w3, (z2 / 2.0 + z3 / 6.0) / w3)
            }
            MapName::HalfPlaneL => ((half + koebe) / 2.0, (half - koebe) / 2.0),
            MapName::F0Sharp => (koebe, koebe - 2.0 * half - w.ln()),
            MapName::Pk => (koebe, k * koebe),
            MapName::Qk => (half, k * half),
        };
        Ok(h + g.conj())
    }
}

impl fmt::Display for NamedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "{}(k={})", self.name, k),
            None => write!(f, "{}", self.name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::BOHR_ORDER;
    use std::f64::consts::TAU;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn all_maps(order: usize) -> Vec<NamedMap> {
        MapName::ALL
            .into_iter()
            .map(|n| NamedMap::new(n, n.takes_k().then_some(0.5), order).unwrap())
            .collect()
    }

    #[test]
    fn names_round_trip() {
        for n in MapName::ALL {
            assert_eq!(n.as_str().parse::<MapName>().unwrap(), n);
        }
        assert_eq!("f0".parse::<MapName>().unwrap(), MapName::F0Sharp);
        assert!("bogus".parse::<MapName>().is_err());
    }

    #[test]
    fn k_parameter_rules() {
        assert!(NamedMap::new(MapName::Pk, None, 10).is_err());
        assert!(NamedMap::new(MapName::KoebeAnalytic, Some(0.5), 10).is_err());
        assert!(NamedMap::new(MapName::Qk, Some(1.0), 10).is_err());
        assert!(NamedMap::new(MapName::Qk, Some(0.0), 10).is_ok());
    }

    #[test]
    fn named_coefficients() {
        let k = NamedMap::simple(MapName::HarmonicKoebe, 10).unwrap().build();
        assert_eq!(k.h().coeff(2), c(2.5));
        assert_eq!(k.g().coeff(2), c(0.5));
        let l = NamedMap::simple(MapName::HalfPlaneL, 10).unwrap().build();
        assert_eq!((l.h().coeff(1), l.g().coeff(1)), (c(1.0), c(0.0)));
        for m in all_maps(10) {
            assert!(m.build().is_normalized(), "{m}");
        }
    }

    #[test]
    fn f0_matches_monomial_dilatation() {
        use crate::dilatation::{g_from_monomial, MonomialDilatation};
        let f0 = NamedMap::simple(MapName::F0Sharp, 300).unwrap().build();
        let koebe = NamedMap::simple(MapName::KoebeAnalytic, 300).unwrap().build();
        let d = MonomialDilatation::new(1.0, 0.0, 1).unwrap();
        let g = g_from_monomial(koebe.h(), &d).unwrap();
        for m in 0..=300 {
            let (x, y) = (g.coeff(m).re, f0.g().coeff(m).re);
            assert!((x - y).abs() <= 2.0 * f64::EPSILON * y.abs(), "m={m}");
        }
    }

    #[test]
    fn coefficient_bounds_attained() {
        let k = NamedMap::simple(MapName::HarmonicKoebe, 200).unwrap();
        let l = NamedMap::simple(MapName::HalfPlaneL, 200).unwrap();
        let koebe = NamedMap::simple(MapName::KoebeAnalytic, 200).unwrap();
        for m in 2..=200usize {
            let mf = m as f64;
            let (a, b) = k.coefficients(m);
            assert_eq!(a, (mf + 1.0) * (2.0 * mf + 1.0) / 6.0);
            assert_eq!(b.abs(), (mf - 1.0) * (2.0 * mf - 1.0) / 6.0);
            let (a, b) = l.coefficients(m);
            assert_eq!(a, (mf + 1.0) / 2.0);
            assert_eq!(b.abs(), (mf - 1.0) / 2.0);
            assert_eq!(koebe.coefficients(m).0, mf);
        }
    }

    #[test]
    fn tail_constants_dominate_growth() {
        for m in all_maps(10) {
            for j in 1..5000usize {
                let (a, b) = m.coefficients(j);
                assert!(a.abs() + b.abs() <= m.tail_constant() * (j * j) as f64, "{m} j={j}");
            }
        }
    }

    #[test]
    fn closed_form_values() {
        let koebe = NamedMap::simple(MapName::KoebeAnalytic, 10).unwrap();
        let v = koebe.closed_form_eval(c(-0.999)).unwrap();
        assert!((v.re - (-0.999 / (1.999f64 * 1.999))).abs() < 1e-15);
        assert!((v.re + 0.25).abs() < 1e-6);

        let f0 = NamedMap::simple(MapName::F0Sharp, 10).unwrap();
        let v = f0.closed_form_eval(c(0.1)).unwrap();
        let direct = 2.0 * 0.1 / 0.81 - 0.2 / 0.9 - 0.9f64.ln();
        assert!((v.re - direct).abs() < 1e-15);
        assert!((v.re - 0.130_051_8).abs() < 1e-7);
        assert_eq!(v.im, 0.0);

        for m in all_maps(10) {
            assert_eq!(m.closed_form_eval(c(0.0)).unwrap(), c(0.0));
            assert!(m.closed_form_eval(c(1.0)).is_err());
        }
    }

    #[test]
    fn closed_form_agrees_with_series() {
        for m in all_maps(BOHR_ORDER) {
            let f = m.build();
            for j in 0..32 {
                let z = Complex64::from_polar(0.3, TAU * j as f64 / 32.0);
                let d = (m.closed_form_eval(z).unwrap() - f.eval(z).unwrap()).norm();
                assert!(d <= 1e-10, "{m}: {d}");
            }
        }
    }
}
