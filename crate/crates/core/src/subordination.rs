//! Subordination `f o psi` by Schwarz functions, and the domination check
//! `sum |b_m| r^m <= sum |a_m| r^m` for `r <= 1/3`.

use std::f64::consts::TAU;
use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bohr::{profile_up_to, BohrProfile, BohrSubject};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::radius::RadiusProblem;
use crate::series::{HarmonicMap, PowerSeries, COMPOSITION_ORDER};
use crate::solver::{min_rule_radius, DEFAULT_WIDTH_TOL};

pub const MAX_BLASCHKE_ZEROS: usize = 8;
/// Radius of the circle used for the numerical Schwarz check.
pub const SCHWARZ_CHECK_RADIUS: f64 = 0.999;
pub const SCHWARZ_CHECK_POINTS: usize = 256;
pub const SCHWARZ_CHECK_TOL: f64 = 1e-6;
/// Zeros of random Blaschke factors stay inside this disc.
const ZERO_RADIUS: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchwarzConstruction {
    /// `c z`
    ScaledIdentity { c: Complex64 },
    /// `c z^j`
    Monomial { c: Complex64, j: usize },
    /// `e^{i rotation} z prod (z - w) / (1 - conj(w) z)`
    BlaschkeProduct { zeros: Vec<Complex64>, rotation: f64 },
}

impl SchwarzConstruction {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            SchwarzConstruction::ScaledIdentity { c } => c * z,
            SchwarzConstruction::Monomial { c, j } => c * z.powu(*j as u32),
            SchwarzConstruction::BlaschkeProduct { zeros, rotation } => zeros.iter().fold(
                Complex64::from_polar(1.0, *rotation) * z,
                |acc, w| acc * (z - w) / (1.0 - w.conj() * z),
            ),
        }
    }

    fn series(&self, order: usize) -> PowerSeries {
        match self {
            SchwarzConstruction::ScaledIdentity { c } => PowerSeries::monomial(*c, 1, order),
            SchwarzConstruction::Monomial { c, j } => PowerSeries::monomial(*c, *j, order),
            SchwarzConstruction::BlaschkeProduct { zeros, rotation } => {
                let start = PowerSeries::monomial(Complex64::from_polar(1.0, *rotation), 1, order);
                zeros
                    .iter()
                    .fold(start, |acc, w| acc.product(&blaschke_factor(*w, order)))
            }
        }
    }
}

/// `(z - w) / (1 - conj(w) z) = -w + sum_{j>=1} (1 - |w|^2) conj(w)^{j-1} z^j`
fn blaschke_factor(w: Complex64, order: usize) -> PowerSeries {
    let scale = 1.0 - w.norm_sqr();
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(-w);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 1..=order {
        coeffs.push(scale * p);
        p *= w.conj();
    }
    PowerSeries::from_vec_unchecked(coeffs)
}

/// An analytic self-map of the disc fixing the origin, with its series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchwarzFunction {
    series: PowerSeries,
    construction: SchwarzConstruction,
}

impl SchwarzFunction {
    pub fn new(construction: SchwarzConstruction, order: usize) -> Result<Self> {
        match &construction {
            SchwarzConstruction::ScaledIdentity { c } | SchwarzConstruction::Monomial { c, .. }
                if !(c.norm() <= 1.0) =>
            {
                return Err(Error::InvalidParameter {
                    name: "c",
                    value: c.norm(),
                    reason: "modulus must be at most 1",
                })
            }
            SchwarzConstruction::Monomial { j: 0, .. } => {
                return Err(Error::InvalidParameter {
                    name: "j",
                    value: 0.0,
                    reason: "must be at least 1",
                })
            }
            SchwarzConstruction::BlaschkeProduct { zeros, rotation } => {
                if zeros.len() > MAX_BLASCHKE_ZEROS {
                    return Err(Error::InvalidParameter {
                        name: "degree",
                        value: zeros.len() as f64,
                        reason: "at most 8 Blaschke zeros",
                    });
                }
                if let Some(w) = zeros.iter().find(|w| !(w.norm() < 1.0)) {
                    return Err(Error::InvalidParameter {
                        name: "zero",
                        value: w.norm(),
                        reason: "Blaschke zeros must lie in the open disc",
                    });
                }
                if !rotation.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "rotation",
                        value: *rotation,
                        reason: "must be finite",
                    });
                }
            }
            _ => {}
        }
        let series = construction.series(order);
        let psi = Self {
            series,
            construction,
        };
        let sup = psi.sup_on_check_circle();
        if psi.series.coeff(0) != Complex64::default() || sup > 1.0 + SCHWARZ_CHECK_TOL {
            return Err(Error::SchwarzCheck { sup });
        }
        Ok(psi)
    }

    pub fn identity(order: usize) -> Self {
        Self::rotation(0.0, order)
    }

    pub fn rotation(alpha: f64, order: usize) -> Self {
        Self::new(
            SchwarzConstruction::ScaledIdentity {
                c: Complex64::from_polar(1.0, alpha),
            },
            order,
        )
        .expect("rotations are Schwarz functions")
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    pub fn construction(&self) -> &SchwarzConstruction {
        &self.construction
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.construction.eval(z)
    }

    /// `max |psi|` over the check circle, from the closed form.
    pub fn sup_on_check_circle(&self) -> f64 {
        (0..SCHWARZ_CHECK_POINTS)
            .map(|j| {
                let z = Complex64::from_polar(
                    SCHWARZ_CHECK_RADIUS,
                    TAU * j as f64 / SCHWARZ_CHECK_POINTS as f64,
                );
                self.eval(z).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Seeded random Blaschke product `e^{i alpha} z prod_{j<degree} (z - w_j)/(1 - conj(w_j) z)`.
pub fn random_schwarz(seed: u64, degree: usize, order: usize) -> Result<SchwarzFunction> {
    if degree > MAX_BLASCHKE_ZEROS {
        return Err(Error::InvalidParameter {
            name: "degree",
            value: degree as f64,
            reason: "must be at most 8",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rotation = rng.gen_range(0.0..TAU);
    let zeros = (0..degree)
        .map(|_| {
            let rho = ZERO_RADIUS * rng.gen::<f64>().sqrt();
            Complex64::from_polar(rho, rng.gen_range(0.0..TAU))
        })
        .collect();
    SchwarzFunction::new(SchwarzConstruction::BlaschkeProduct { zeros, rotation }, order)
}

/// Composition with a Schwarz function, component-wise for harmonic maps.
pub trait Subordinate: Sized {
    fn subordinate(&self, psi: &SchwarzFunction) -> Result<Self>;
}

impl Subordinate for PowerSeries {
    fn subordinate(&self, psi: &SchwarzFunction) -> Result<Self> {
        self.compose(psi.series())
    }
}

impl Subordinate for HarmonicMap {
    fn subordinate(&self, psi: &SchwarzFunction) -> Result<Self> {
        HarmonicMap::new(
            self.h().compose(psi.series())?,
            self.g().compose(psi.series())?,
        )
    }
}

/// Domination slack `min_r (sum |a_m| r^m - sum |b_m| r^m)` for `b = f o psi`.
pub fn check_domination(f: &PowerSeries, psi: &SchwarzFunction, r_grid: &[f64], terms: usize) -> Result<f64> {
    if let Some(&r) = r_grid.iter().find(|&&r| !(r > 0.0 && r <= 1.0 / 3.0)) {
        return Err(Error::RadiusOutOfRange { r });
    }
    let sub = f.subordinate(psi)?;
    if terms > sub.order() {
        return Err(Error::OrderTooSmall {
            order: sub.order(),
            required: terms,
        });
    }
    let (a, b) = (f.coeffs(), sub.coeffs());
    Ok(r_grid
        .iter()
        .map(|&r| {
            let mut rm = 1.0;
            let mut margin = 0.0;
            for m in 0..=terms {
                margin += (a[m].norm() - b[m].norm()) * rm;
                rm *= r;
            }
            margin
        })
        .fold(f64::INFINITY, f64::min))
}

/// Profile of a subordinate harmonic map below `min(1/3, base radius)` against bound 1.
pub fn check_harmonic_subordination_bound(
    f1: &BohrSubject,
    p: &RadiusProblem,
    margin: f64,
    grid_size: usize,
) -> Result<BohrProfile> {
    let radius = min_rule_radius(p, DEFAULT_WIDTH_TOL)?;
    profile_up_to(f1, Some(*p), radius, 1.0, margin, grid_size, Exec::default())
}

/// Grid `(0, 1/3]` with `points` equally spaced radii.
pub fn domination_grid(points: usize) -> Vec<f64> {
    (1..=points).map(|i| i as f64 / (3 * points) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignRecord {
    pub seed: u64,
    pub psi: SchwarzConstruction,
    pub map: String,
    pub worst_margin: f64,
}

/// Seeded domination campaign over a set of analytic maps.
#[derive(Debug, Clone)]
pub struct DominationCampaign {
    pub seeds: Range<u64>,
    pub order: usize,
    pub r_grid: Vec<f64>,
    pub maps: Vec<(String, PowerSeries)>,
}

impl DominationCampaign {
    /// Koebe and half-plane maps, composition order 200, 32-point grid up to 1/3.
    pub fn standard(seeds: Range<u64>) -> Self {
        let order = COMPOSITION_ORDER;
        let koebe = PowerSeries::from_real((0..=order).map(|m| m as f64)).expect("finite");
        let half = PowerSeries::from_real((0..=order).map(|m| if m == 0 { 0.0 } else { 1.0 }))
            .expect("finite");
        Self {
            seeds,
            order,
            r_grid: domination_grid(32),
            maps: vec![
                ("koebe_analytic".to_string(), koebe),
                ("half_plane_analytic".to_string(), half),
            ],
        }
    }

    /// Blaschke degree cycles through 1..=8 with the seed.
    pub fn degree_for(seed: u64) -> usize {
        1 + (seed % MAX_BLASCHKE_ZEROS as u64) as usize
    }

    /// Records in seed order, then map order.
    pub fn run(&self, exec: Exec) -> Result<Vec<CampaignRecord>> {
        let seeds: Vec<u64> = self.seeds.clone().collect();
        let per_seed = exec.map(&seeds, |&seed| -> Result<Vec<CampaignRecord>> {
            let psi = random_schwarz(seed, Self::degree_for(seed), self.order)?;
            self.maps
                .iter()
                .map(|(name, f)| {
                    Ok(CampaignRecord {
                        seed,
                        psi: psi.construction().clone(),
                        map: name.clone(),
                        worst_margin: check_domination(f, &psi, &self.r_grid, self.order)?,
                    })
                })
                .collect()
        });
        let mut out = Vec::with_capacity(seeds.len() * self.maps.len());
        for recs in per_seed {
            out.extend(recs?);
        }
        Ok(out)
    }
}
