//! Majorant functions and closed-form radii for every radius problem.
//!
//! Root-defined majorants are exposed in increasing orientation: negative
//! below the radius, zero at it, positive above.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::tail;

/// Quasiconformality constant `K >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Quasiconformal(f64);

impl Quasiconformal {
    pub fn new(big_k: f64) -> Result<Self> {
        if big_k.is_finite() && big_k >= 1.0 {
            Ok(Self(big_k))
        } else {
            Err(Error::InvalidParameter {
                name: "K",
                value: big_k,
                reason: "must be finite and at least 1",
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Dilatation bound `k = (K - 1) / (K + 1)`.
    pub fn dilatation_bound(self) -> f64 {
        (self.0 - 1.0) / (self.0 + 1.0)
    }
}

impl TryFrom<f64> for Quasiconformal {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Quasiconformal> for f64 {
    fn from(q: Quasiconformal) -> f64 {
        q.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum RadiusProblem {
    Thm11Univalent,
    Thm11Convex,
    Thm12Quasi { big_k: Quasiconformal },
    Thm12QuasiConvex { big_k: Quasiconformal },
    Thm22Bohr,
    Thm23Quasi { big_k: Quasiconformal },
    Thm23QuasiConvex { big_k: Quasiconformal },
    Thm23Subordination { big_k: Quasiconformal },
    Thm23SubordinationConvex { big_k: Quasiconformal },
    Thm24Monomial { k: f64, n: u32 },
    Cor25Monomial { n: u32 },
    Thm27Mobius,
    Thm29ConvexDirection,
    Thm210ConvexDirectionS0,
    Thm211Convex,
}

/// Raw selector parameters, as read from a command line.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ProblemParams {
    pub big_k: Option<f64>,
    pub k: Option<f64>,
    pub n: Option<u32>,
}

impl RadiusProblem {
    pub const NAMES: [&'static str; 15] = [
        "thm11",
        "thm11_convex",
        "thm12",
        "thm12_convex",
        "thm22",
        "thm23",
        "thm23_convex",
        "thm23_sub",
        "thm23_sub_convex",
        "thm24",
        "cor25",
        "thm27",
        "thm29",
        "thm210",
        "thm211",
    ];

    pub fn thm24(k: f64, n: u32) -> Result<Self> {
        if !(k > 0.0 && k <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "k",
                value: k,
                reason: "must lie in (0, 1]",
            });
        }
        check_n(n)?;
        Ok(RadiusProblem::Thm24Monomial { k, n })
    }

    pub fn cor25(n: u32) -> Result<Self> {
        check_n(n)?;
        Ok(RadiusProblem::Cor25Monomial { n })
    }

    /// Resolves a stable selector name plus parameters; unused parameters are rejected.
    pub fn from_selector(name: &str, p: ProblemParams) -> Result<Self> {
        use RadiusProblem::*;
        let needs_big_k = matches!(
            name,
            "thm12" | "thm12_convex" | "thm23" | "thm23_convex" | "thm23_sub" | "thm23_sub_convex"
        );
        let needs_k = name == "thm24";
        let needs_n = matches!(name, "thm24" | "cor25");
        if !Self::NAMES.contains(&name) {
            return Err(Error::UnknownName {
                kind: "theorem",
                name: name.to_string(),
            });
        }
        let missing = |what: &str| Error::Incompatible(format!("theorem {name} requires {what}"));
        let extra = |what: &str| Error::Incompatible(format!("theorem {name} takes no {what}"));
        if needs_big_k != p.big_k.is_some() {
            return Err(if needs_big_k { missing("--K") } else { extra("--K") });
        }
        if needs_k != p.k.is_some() {
            return Err(if needs_k { missing("--k") } else { extra("--k") });
        }
        if needs_n != p.n.is_some() {
            return Err(if needs_n { missing("--n") } else { extra("--n") });
        }
        let q = || Quasiconformal::new(p.big_k.unwrap_or(f64::NAN));
        Ok(match name {
            "thm11" => Thm11Univalent,
            "thm11_convex" => Thm11Convex,
            "thm12" => Thm12Quasi { big_k: q()? },
            "thm12_convex" => Thm12QuasiConvex { big_k: q()? },
            "thm22" => Thm22Bohr,
            "thm23" => Thm23Quasi { big_k: q()? },
            "thm23_convex" => Thm23QuasiConvex { big_k: q()? },
            "thm23_sub" => Thm23Subordination { big_k: q()? },
            "thm23_sub_convex" => Thm23SubordinationConvex { big_k: q()? },
            "thm24" => Self::thm24(p.k.unwrap_or(f64::NAN), p.n.unwrap_or(0))?,
            "cor25" => Self::cor25(p.n.unwrap_or(0))?,
            "thm27" => Thm27Mobius,
            "thm29" => Thm29ConvexDirection,
            "thm210" => Thm210ConvexDirectionS0,
            _ => Thm211Convex,
        })
    }

    pub fn selector(&self) -> &'static str {
        use RadiusProblem::*;
        match self {
            Thm11Univalent => "thm11",
            Thm11Convex => "thm11_convex",
            Thm12Quasi { .. } => "thm12",
            Thm12QuasiConvex { .. } => "thm12_convex",
            Thm22Bohr => "thm22",
            Thm23Quasi { .. } => "thm23",
            Thm23QuasiConvex { .. } => "thm23_convex",
            Thm23Subordination { .. } => "thm23_sub",
            Thm23SubordinationConvex { .. } => "thm23_sub_convex",
            Thm24Monomial { .. } => "thm24",
            Cor25Monomial { .. } => "cor25",
            Thm27Mobius => "thm27",
            Thm29ConvexDirection => "thm29",
            Thm210ConvexDirectionS0 => "thm210",
            Thm211Convex => "thm211",
        }
    }

    pub fn is_root_defined(&self) -> bool {
        use RadiusProblem::*;
        matches!(
            self,
            Thm24Monomial { .. }
                | Cor25Monomial { .. }
                | Thm27Mobius
                | Thm29ConvexDirection
                | Thm210ConvexDirectionS0
                | Thm211Convex
        )
    }

    /// Right-hand side of the Bohr inequality when it is a fixed number.
    ///
    /// Distance-normalized problems use the distance from the origin to the
    /// boundary of the extremal image: 1/4 for Koebe-type maps, 1/2 for
    /// half-plane maps. The Möbius problem's bound `1 + |a|` depends on the
    /// dilatation and is supplied by the caller, so it returns `None`.
    pub fn default_bound(&self) -> Option<f64> {
        use RadiusProblem::*;
        match self {
            Thm11Univalent | Thm12Quasi { .. } => Some(0.25),
            Thm11Convex | Thm12QuasiConvex { .. } => Some(0.5),
            Thm27Mobius => None,
            _ => Some(1.0),
        }
    }

    /// Evaluates the majorant at `r in [0, 1)`.
    pub fn majorant_value(&self, r: f64) -> Result<f64> {
        use RadiusProblem::*;
        if !(0.0..1.0).contains(&r) {
            return Err(Error::RadiusOutOfRange { r });
        }
        let s = 1.0 - r;
        Ok(match *self {
            Thm24Monomial { k, n } => monomial_majorant(k, n, r),
            Cor25Monomial { n } => monomial_majorant(1.0, n, r),
            Thm27Mobius => ((r - 3.0) * r + 5.0) * r - 1.0,
            Thm29ConvexDirection => 2.0 * r / (s * s) + r / s - 1.0,
            Thm210ConvexDirectionS0 => 2.0 * r * (r + 1.0) / (3.0 * s * s * s) + r / (3.0 * s) - 1.0,
            Thm211Convex => r / (s * s) - 1.0,
            _ => return Err(Error::NoMajorant(self.to_string())),
        })
    }

    /// Closed-form radius, where one exists.
    pub fn closed_form_radius(&self) -> Option<f64> {
        use RadiusProblem::*;
        let third = 1.0 / 3.0;
        match *self {
            Thm11Univalent => Some(3.0 - 8f64.sqrt()),
            Thm11Convex | Thm22Bohr => Some(third),
            Thm12Quasi { big_k } => Some(quasi_radius(big_k.value())),
            Thm12QuasiConvex { big_k } => {
                let kk = big_k.value();
                Some((kk + 1.0) / (5.0 * kk + 1.0))
            }
            Thm23Quasi { big_k } => Some(normalized_quasi_radius(big_k.value())),
            Thm23QuasiConvex { big_k } => Some(normalized_convex_radius(big_k.value())),
            Thm23Subordination { big_k } => Some(third.min(normalized_quasi_radius(big_k.value()))),
            Thm23SubordinationConvex { big_k } => {
                Some(third.min(normalized_convex_radius(big_k.value())))
            }
            Thm29ConvexDirection => Some((5.0 - 17f64.sqrt()) / 4.0),
            Thm211Convex => Some((3.0 - 5f64.sqrt()) / 2.0),
            Thm24Monomial { .. } | Cor25Monomial { .. } | Thm27Mobius | Thm210ConvexDirectionS0 => {
                None
            }
        }
    }
}

impl fmt::Display for RadiusProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use RadiusProblem::*;
        let name = self.selector();
        match self {
            Thm12Quasi { big_k }
            | Thm12QuasiConvex { big_k }
            | Thm23Quasi { big_k }
            | Thm23QuasiConvex { big_k }
            | Thm23Subordination { big_k }
            | Thm23SubordinationConvex { big_k } => write!(f, "{name}(K={})", big_k.value()),
            Thm24Monomial { k, n } => write!(f, "{name}(k={k}, n={n})"),
            Cor25Monomial { n } => write!(f, "{name}(n={n})"),
            _ => f.write_str(name),
        }
    }
}

fn check_n(n: u32) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "n",
            value: n as f64,
            reason: "must be at least 1",
        })
    }
}

/// `(k+1) r/(1-r)^2 - 2nk r/(1-r) - k n^2 log(1-r) - 1`
fn monomial_majorant(k: f64, n: u32, r: f64) -> f64 {
    let s = 1.0 - r;
    let nf = n as f64;
    (k + 1.0) * r / (s * s) - 2.0 * nf * k * r / s - k * nf * nf * (-r).ln_1p() - 1.0
}

// The radii below are the smaller roots of quadratics; they are written in
// rationalized form to avoid cancellation for large K.

/// `(5K + 1 - sqrt(8K(3K + 1))) / (K + 1)`
fn quasi_radius(kk: f64) -> f64 {
    (kk + 1.0) / (5.0 * kk + 1.0 + (8.0 * kk * (3.0 * kk + 1.0)).sqrt())
}

/// `(2K + 1 - sqrt(K(3K + 2))) / (K + 1)`
fn normalized_quasi_radius(kk: f64) -> f64 {
    (kk + 1.0) / (2.0 * kk + 1.0 + (kk * (3.0 * kk + 2.0)).sqrt())
}

fn normalized_convex_radius(kk: f64) -> f64 {
    (kk + 1.0) / (3.0 * kk + 1.0)
}

/// Series/closed-form pairs appearing in the majorant computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorantIdentity {
    /// `sum m r^m = r / (1 - r)^2`
    SumMRm,
    /// `sum r^m = r / (1 - r)`
    SumRm,
    /// `sum r^m / m = -log(1 - r)`
    SumRmOverM,
    /// `sum m (m + 1) r^m = r(1+r)/(1-r)^3 + r/(1-r)^2`
    SumMMplus1Rm,
    /// `sum (2m^2 + 1)/3 r^m = 2r(1+r)/(3(1-r)^3) + r/(3(1-r))`
    Sum2m2plus1Over3Rm,
}

impl MajorantIdentity {
    pub const ALL: [MajorantIdentity; 5] = [
        MajorantIdentity::SumMRm,
        MajorantIdentity::SumRm,
        MajorantIdentity::SumRmOverM,
        MajorantIdentity::SumMMplus1Rm,
        MajorantIdentity::Sum2m2plus1Over3Rm,
    ];

    pub fn coefficient(self, m: usize) -> f64 {
        let mf = m as f64;
        match self {
            MajorantIdentity::SumMRm => mf,
            MajorantIdentity::SumRm => 1.0,
            MajorantIdentity::SumRmOverM => 1.0 / mf,
            MajorantIdentity::SumMMplus1Rm => mf * (mf + 1.0),
            MajorantIdentity::Sum2m2plus1Over3Rm => (2.0 * mf * mf + 1.0) / 3.0,
        }
    }

    pub fn closed_form(self, r: f64) -> f64 {
        let s = 1.0 - r;
        match self {
            MajorantIdentity::SumMRm => r / (s * s),
            MajorantIdentity::SumRm => r / s,
            MajorantIdentity::SumRmOverM => -(-r).ln_1p(),
            MajorantIdentity::SumMMplus1Rm => r * (1.0 + r) / (s * s * s) + r / (s * s),
            MajorantIdentity::Sum2m2plus1Over3Rm => {
                2.0 * r * (1.0 + r) / (3.0 * s * s * s) + r / (3.0 * s)
            }
        }
    }

    pub fn truncated_sum(self, r: f64, terms: usize) -> f64 {
        let mut rm = 1.0;
        let mut sum = 0.0;
        for m in 1..=terms {
            rm *= r;
            sum += self.coefficient(m) * rm;
        }
        sum
    }

    /// Upper bound on the omitted tail, from `coefficient(m) <= 2 m^2`.
    pub fn tail_bound(self, r: f64, terms: usize) -> f64 {
        2.0 * tail::quadratic(r, terms)
    }

    /// `|truncated sum - closed form|` for `r in [0, 0.95]`.
    pub fn check(self, r: f64, terms: usize) -> Result<f64> {
        if !(0.0..=0.95).contains(&r) {
            return Err(Error::RadiusOutOfRange { r });
        }
        Ok((self.truncated_sum(r, terms) - self.closed_form(r)).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qc(v: f64) -> Quasiconformal {
        Quasiconformal::new(v).unwrap()
    }

    #[test]
    fn selectors_round_trip() {
        let p = ProblemParams {
            big_k: Some(3.0),
            k: Some(0.5),
            n: Some(2),
        };
        for name in RadiusProblem::NAMES {
            let q = ProblemParams {
                big_k: p.big_k.filter(|_| {
                    matches!(
                        name,
                        "thm12" | "thm12_convex" | "thm23" | "thm23_convex" | "thm23_sub" | "thm23_sub_convex"
                    )
                }),
                k: p.k.filter(|_| name == "thm24"),
                n: p.n.filter(|_| matches!(name, "thm24" | "cor25")),
            };
            let prob = RadiusProblem::from_selector(name, q).unwrap();
            assert_eq!(prob.selector(), name);
            let json = serde_json::to_string(&prob).unwrap();
            assert_eq!(serde_json::from_str::<RadiusProblem>(&json).unwrap(), prob);
        }
        assert!(RadiusProblem::from_selector("thm12", ProblemParams::default()).is_err());
        assert!(RadiusProblem::from_selector("thm211", p).is_err());
        assert!(RadiusProblem::from_selector("nope", ProblemParams::default()).is_err());
        assert!(RadiusProblem::thm24(0.0, 1).is_err());
        assert!(RadiusProblem::cor25(0).is_err());
        assert!(Quasiconformal::new(0.5).is_err());
        assert!(serde_json::from_str::<RadiusProblem>(r#"{"variant":"thm12_quasi","big_k":0.2}"#).is_err());
    }

    #[test]
    fn majorant_examples() {
        let p = RadiusProblem::thm24(0.5, 1).unwrap();
        assert_eq!(p.majorant_value(0.0).unwrap(), -1.0);
        let r0 = (3.0 - 5f64.sqrt()) / 2.0;
        assert!(RadiusProblem::Thm211Convex.majorant_value(r0).unwrap().abs() < 1e-12);
        assert!(RadiusProblem::Thm27Mobius.majorant_value(0.2291).unwrap().abs() < 5e-4);
        assert!(matches!(
            RadiusProblem::Thm11Univalent.majorant_value(0.1),
            Err(Error::NoMajorant(_))
        ));
        assert!(RadiusProblem::Thm211Convex.majorant_value(1.0).is_err());
        assert!(RadiusProblem::Thm211Convex.majorant_value(-0.1).is_err());
    }

    #[test]
    fn series_majorants_share_roots_with_polynomials() {
        // sign(series form) = sign(polynomial) because the denominators are positive
        for i in 1..999 {
            let r = i as f64 / 1000.0;
            let m29 = RadiusProblem::Thm29ConvexDirection.majorant_value(r).unwrap();
            let p29 = -(2.0 * r * r - 5.0 * r + 1.0);
            assert_eq!(m29 > 0.0, p29 > 0.0, "r={r}");
            let m210 = RadiusProblem::Thm210ConvexDirectionS0.majorant_value(r).unwrap();
            let p210 = 4.0 * r.powi(3) - 9.0 * r * r + 12.0 * r - 3.0;
            assert!((m210 - p210 / (3.0 * (1.0 - r).powi(3))).abs() < 1e-9 * (1.0 + m210.abs()));
        }
    }

    #[test]
    fn closed_forms() {
        let r = RadiusProblem::Thm11Univalent.closed_form_radius().unwrap();
        assert!((r - 0.171_572_875_253_809_9).abs() < 1e-15);
        let r = RadiusProblem::Thm12Quasi { big_k: qc(1.0) }.closed_form_radius().unwrap();
        assert!((r - (6.0 - 32f64.sqrt()) / 2.0).abs() < 1e-15);
        let r = RadiusProblem::Thm23Quasi { big_k: qc(1.0) }.closed_form_radius().unwrap();
        assert!((r - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
        let r = RadiusProblem::Thm29ConvexDirection.closed_form_radius().unwrap();
        assert!((r - 0.2192).abs() < 1e-4);
        assert!(RadiusProblem::Thm27Mobius.closed_form_radius().is_none());
        assert!(RadiusProblem::cor25(2).unwrap().closed_form_radius().is_none());
        let r = RadiusProblem::Thm23SubordinationConvex { big_k: qc(3.0) }
            .closed_form_radius()
            .unwrap();
        assert_eq!(r, 1.0 / 3.0);
        assert_eq!(
            RadiusProblem::Thm12QuasiConvex { big_k: qc(1.0) }.closed_form_radius(),
            Some(1.0 / 3.0)
        );
    }

    #[test]
    fn rationalized_radii_match_textbook_formulas() {
        for i in 0..=200 {
            let kk = 1.0 + i as f64 * 0.5;
            let lit12 = (5.0 * kk + 1.0 - (8.0 * kk * (3.0 * kk + 1.0)).sqrt()) / (kk + 1.0);
            let lit23 = (2.0 * kk + 1.0 - (kk * (3.0 * kk + 2.0)).sqrt()) / (kk + 1.0);
            assert!((quasi_radius(kk) - lit12).abs() < 1e-13);
            assert!((normalized_quasi_radius(kk) - lit23).abs() < 1e-13);
        }
    }

    #[test]
    fn large_k_limit_and_monotonicity() {
        let r = RadiusProblem::Thm12Quasi { big_k: qc(1e6) }.closed_form_radius().unwrap();
        assert!((r - (5.0 - 24f64.sqrt())).abs() < 1e-5);
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let kk = 1.0 + 99.0 * i as f64 / 199.0;
            let r = RadiusProblem::Thm12Quasi { big_k: qc(kk) }.closed_form_radius().unwrap();
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn min_rule_for_subordination() {
        for i in 0..100 {
            let big_k = qc(1.0 + i as f64 * 0.37);
            let base = RadiusProblem::Thm23Quasi { big_k }.closed_form_radius().unwrap();
            let sub = RadiusProblem::Thm23Subordination { big_k }.closed_form_radius().unwrap();
            assert_eq!(sub, base.min(1.0 / 3.0));
        }
    }

    #[test]
    fn identities() {
        let id = MajorantIdentity::SumMRm;
        assert!(id.check(0.5, 200).unwrap() <= 1e-12);
        assert!(MajorantIdentity::SumRmOverM.check(0.5, 2000).unwrap() <= 1e-12);
        assert!((MajorantIdentity::SumRmOverM.closed_form(0.5) - 2f64.ln()).abs() < 1e-15);
        assert!(MajorantIdentity::SumMMplus1Rm.check(0.2291, 2000).unwrap() <= 1e-12);
        assert!(id.check(0.96, 10).is_err());
        for ident in MajorantIdentity::ALL {
            for &r in &[0.0, 0.1, 0.3, 0.5, 0.8, 0.95] {
                for &terms in &[20usize, 100, 2000] {
                    let dev = ident.check(r, terms).unwrap();
                    let bound = ident.tail_bound(r, terms);
                    let slack = 1e-12 * ident.closed_form(r).max(1.0);
                    assert!(dev <= bound + slack, "{ident:?} r={r} M={terms}: {dev} > {bound}");
                }
            }
        }
    }
}
