//! Bohr sums `sum |a_m| r^m + sum |b_m| r^m` with closed-form tail bounds.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::NamedMap;
use crate::error::{Error, Result};
use crate::format::sig;
use crate::par::Exec;
use crate::radius::RadiusProblem;
use crate::series::{tail, HarmonicMap};
use crate::solver::{radius_of, DEFAULT_WIDTH_TOL};

pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_MARGIN: f64 = 1e-3;

/// A harmonic map paired with a growth constant `C` such that
/// `|a_m| + |b_m| <= C m^2` beyond the truncation order.
#[derive(Debug, Clone, PartialEq)]
pub struct BohrSubject {
    pub id: String,
    pub map: HarmonicMap,
    pub tail_constant: f64,
}

impl BohrSubject {
    pub fn new(id: impl Into<String>, map: HarmonicMap, tail_constant: f64) -> Self {
        Self {
            id: id.into(),
            map,
            tail_constant,
        }
    }

    pub fn named(named: &NamedMap) -> Self {
        Self::new(named.to_string(), named.build(), named.tail_constant())
    }

    /// Truncated Bohr sum over all available coefficients.
    pub fn partial_sum(&self, r: f64) -> Result<(f64, f64)> {
        bohr_partial_sum(&self.map, r, self.map.order(), self.tail_constant)
    }
}

/// `(sum_{m=1}^{M} (|a_m| + |b_m|) r^m, C sum_{m>M} m^2 r^m)`.
pub fn bohr_partial_sum(f: &HarmonicMap, r: f64, terms: usize, tail_constant: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::RadiusOutOfRange { r });
    }
    if terms > f.order() {
        return Err(Error::OrderTooSmall {
            order: f.order(),
            required: terms,
        });
    }
    let (h, g) = (f.h().coeffs(), f.g().coeffs());
    let mut rm = 1.0;
    let mut sum = 0.0;
    for m in 1..=terms {
        rm *= r;
        if rm == 0.0 {
            break;
        }
        sum += (h[m].norm() + g[m].norm()) * rm;
    }
    Ok((sum, tail_constant * tail::quadratic(r, terms)))
}

/// Grid of partial sums against a fixed bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BohrProfile {
    pub map_id: String,
    pub problem: Option<RadiusProblem>,
    pub radius: f64,
    pub r_grid: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub tail_bounds: Vec<f64>,
    pub bound: f64,
    pub verdicts: Vec<bool>,
}

impl BohrProfile {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|&v| v)
    }

    /// Smallest `bound - (sum + tail)` over the grid.
    pub fn worst_slack(&self) -> f64 {
        self.partial_sums
            .iter()
            .zip(&self.tail_bounds)
            .map(|(s, t)| self.bound - s - t)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,partial_sum,tail_bound,bound,verdict\n");
        for i in 0..self.r_grid.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                sig(self.r_grid[i]),
                sig(self.partial_sums[i]),
                sig(self.tail_bounds[i]),
                sig(self.bound),
                if self.verdicts[i] { "pass" } else { "fail" }
            );
        }
        out
    }
}

/// Profile of `subject` over `grid_size` points of `(0, radius - margin]`
/// against `bound`.
pub fn profile_up_to(
    subject: &BohrSubject,
    problem: Option<RadiusProblem>,
    radius: f64,
    bound: f64,
    margin: f64,
    grid_size: usize,
    exec: Exec,
) -> Result<BohrProfile> {
    if !(margin > 0.0) {
        return Err(Error::InvalidParameter {
            name: "margin",
            value: margin,
            reason: "must be positive",
        });
    }
    if grid_size == 0 {
        return Err(Error::InvalidParameter {
            name: "grid_size",
            value: 0.0,
            reason: "must be positive",
        });
    }
    let top = radius - margin;
    if !(top > 0.0) {
        return Err(Error::RadiusOutOfRange { r: top });
    }
    let r_grid: Vec<f64> = (1..=grid_size)
        .map(|i| top * i as f64 / grid_size as f64)
        .collect();
    let rows = exec.map(&r_grid, |&r| subject.partial_sum(r));
    let mut partial_sums = Vec::with_capacity(grid_size);
    let mut tail_bounds = Vec::with_capacity(grid_size);
    let mut verdicts = Vec::with_capacity(grid_size);
    for row in rows {
        let (s, t) = row?;
        verdicts.push(s + t <= bound);
        partial_sums.push(s);
        tail_bounds.push(t);
    }
    Ok(BohrProfile {
        map_id: subject.id.clone(),
        problem,
        radius,
        r_grid,
        partial_sums,
        tail_bounds,
        bound,
        verdicts,
    })
}

/// Checks the Bohr inequality below the problem's radius.
pub fn verify_inequality(
    subject: &BohrSubject,
    p: &RadiusProblem,
    bound: f64,
    margin: f64,
    grid_size: usize,
) -> Result<BohrProfile> {
    let radius = radius_of(p, DEFAULT_WIDTH_TOL)?;
    profile_up_to(subject, Some(*p), radius, bound, margin, grid_size, Exec::default())
}

/// `sum(r0 + epsilon) - bound`; positive when the radius cannot be enlarged
/// for this map. The tail is omitted, so the sum is a lower bound.
pub fn sharpness_scan(subject: &BohrSubject, p: &RadiusProblem, bound: f64, epsilon: f64) -> Result<f64> {
    let r = radius_of(p, DEFAULT_WIDTH_TOL)? + epsilon;
    if r >= 1.0 {
        return Err(Error::RadiusOutOfRange { r });
    }
    Ok(subject.partial_sum(r)?.0 - bound)
}

/// Largest modulus on a sampled circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReach {
    pub max_mod: f64,
    /// Angle where the maximum is attained.
    pub argmax: f64,
    /// `1 - max_mod`: distance left to the unit circle.
    pub gap: f64,
}

/// Points `f(r e^{it})` for `samples` equally spaced `t`, starting at `t = 0`.
pub fn image_curve<F>(f: F, r: f64, samples: usize, exec: Exec) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync + Send,
{
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::RadiusOutOfRange { r });
    }
    exec.map_range(samples, |j| {
        f(Complex64::from_polar(r, TAU * j as f64 / samples as f64))
    })
    .into_iter()
    .collect()
}

pub fn boundary_reach<F>(f: F, r: f64, samples: usize) -> Result<BoundaryReach>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync + Send,
{
    if samples < 64 {
        return Err(Error::InvalidParameter {
            name: "samples",
            value: samples as f64,
            reason: "must be at least 64",
        });
    }
    let pts = image_curve(f, r, samples, Exec::default())?;
    Ok(reach_of(&pts))
}

pub fn reach_of(pts: &[Complex64]) -> BoundaryReach {
    let (idx, max_mod) = pts
        .iter()
        .map(|w| w.norm())
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, m)| if m > best.1 { (i, m) } else { best });
    BoundaryReach {
        max_mod,
        argmax: TAU * idx as f64 / pts.len() as f64,
        gap: 1.0 - max_mod,
    }
}
