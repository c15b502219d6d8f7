//! Certified bracketed root-finding for the radius equations.
//!
//! The solver keeps a sign-changing bracket `f(lo) < 0 < f(hi)` at every
//! step. Iterations alternate a false-position step, clamped to the interior
//! of the bracket, with a bisection step, so the width at least halves every
//! two iterations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::radius::RadiusProblem;

pub const DEFAULT_WIDTH_TOL: f64 = 1e-13;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;
/// Initial bracket; the majorants diverge at `r = 1`.
pub const INITIAL_BRACKET: (f64, f64) = (1e-9, 1.0 - 1e-9);
pub const MONOTONE_SCAN_POINTS: usize = 1000;
const MAX_ITERATIONS: usize = 400;

/// Evidence for a root: the final bracket, the residual and, for radius
/// problems, whether a monotone scan of the majorant succeeded.
///
/// Closed-form radii are wrapped in a degenerate certificate with
/// `lo == root == hi` and zero iterations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootCertificate {
    pub problem: Option<RadiusProblem>,
    pub lo: f64,
    pub hi: f64,
    pub root: f64,
    pub residual: f64,
    pub iterations: usize,
    pub monotone_checked: bool,
}

impl RootCertificate {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.iterations == 0 && self.lo == self.hi
    }

    /// Re-evaluates `f` at the bracket and the root and checks the certificate invariants.
    pub fn validate<F: Fn(f64) -> f64>(&self, f: F, width_tol: f64, residual_tol: f64) -> bool {
        if self.is_degenerate() {
            return self.lo == self.root && self.root == self.hi;
        }
        self.lo < self.root
            && self.root < self.hi
            && self.width() <= width_tol
            && f(self.lo) < 0.0
            && f(self.hi) > 0.0
            && (f(self.root).abs() - self.residual).abs() <= f64::EPSILON * self.residual.max(1.0)
            && self.residual <= residual_tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub width_tol: f64,
    pub residual_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            width_tol: DEFAULT_WIDTH_TOL,
            residual_tol: DEFAULT_RESIDUAL_TOL,
        }
    }
}

impl SolverConfig {
    /// Width tolerance `width_tol`; the residual tolerance grows in proportion
    /// when the width is coarser than the default.
    pub fn with_tol(width_tol: f64) -> Self {
        Self {
            width_tol,
            residual_tol: DEFAULT_RESIDUAL_TOL * (width_tol / DEFAULT_WIDTH_TOL).max(1.0),
        }
    }
}

fn eval_checked<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteValue { x, value: v })
    }
}

/// Narrows `[lo, hi]` around a sign change of `f` until the width is at most `tol`.
pub fn bracket_root<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<RootCertificate>
where
    F: Fn(f64) -> f64,
{
    bracket_root_with(f, lo, hi, &SolverConfig::with_tol(tol))
}

pub fn bracket_root_with<F>(f: F, lo: f64, hi: f64, cfg: &SolverConfig) -> Result<RootCertificate>
where
    F: Fn(f64) -> f64,
{
    if !(cfg.width_tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: cfg.width_tol,
            reason: "must be positive",
        });
    }
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = eval_checked(&f, lo)?;
    let f_hi = eval_checked(&f, hi)?;
    if !(lo < hi && f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::BracketInvalid { lo, hi, f_lo, f_hi });
    }
    // false-position steps stay this far from the endpoints, so the final
    // bracket keeps a representable midpoint
    let guard = 0.25 * cfg.width_tol;
    // Illinois weights for the retained endpoint values
    let (mut w_lo, mut w_hi) = (f_lo, f_hi);
    let mut last_side = 0i8;
    let mut iterations = 0;
    while hi - lo > cfg.width_tol {
        if iterations >= MAX_ITERATIONS {
            return Err(Error::ToleranceUnreachable {
                width: hi - lo,
                tol: cfg.width_tol,
            });
        }
        let mid = 0.5 * (lo + hi);
        let x = if iterations % 2 == 0 {
            let secant = lo - w_lo * (hi - lo) / (w_hi - w_lo);
            if secant.is_finite() {
                secant.clamp(lo + guard, hi - guard)
            } else {
                mid
            }
        } else {
            mid
        };
        if !(x > lo && x < hi) {
            // no representable point strictly inside the bracket
            return Err(Error::ToleranceUnreachable {
                width: hi - lo,
                tol: cfg.width_tol,
            });
        }
        let fx = eval_checked(&f, x)?;
        iterations += 1;
        if fx < 0.0 {
            lo = x;
            w_lo = fx;
            if last_side < 0 {
                w_hi *= 0.5;
            }
            last_side = -1;
        } else if fx > 0.0 {
            hi = x;
            w_hi = fx;
            if last_side > 0 {
                w_lo *= 0.5;
            }
            last_side = 1;
        } else {
            let (l, h) = tighten_around_zero(&f, lo, x, hi, cfg.width_tol)?;
            lo = l;
            hi = h;
            break;
        }
    }
    let root = 0.5 * (lo + hi);
    if !(root > lo && root < hi) {
        return Err(Error::ToleranceUnreachable {
            width: hi - lo,
            tol: cfg.width_tol,
        });
    }
    let residual = eval_checked(&f, root)?.abs();
    if residual > cfg.residual_tol {
        return Err(Error::ResidualTooLarge {
            root,
            residual,
            tol: cfg.residual_tol,
        });
    }
    Ok(RootCertificate {
        problem: None,
        lo,
        hi,
        root,
        residual,
        iterations,
        monotone_checked: false,
    })
}

/// An exact zero was hit at `x`; find points within `tol / 4` on either side
/// that keep strict signs, falling back to the current endpoints.
fn tighten_around_zero<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    x: f64,
    hi: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let side = |target: f64, end: f64, negative: bool| -> Result<Option<f64>> {
        let mut step = 0.25 * tol;
        for _ in 0..64 {
            let p = target + step * if negative { -1.0 } else { 1.0 };
            if (negative && p <= end) || (!negative && p >= end) {
                return Ok(Some(end));
            }
            let v = eval_checked(f, p)?;
            if (negative && v < 0.0) || (!negative && v > 0.0) {
                return Ok(Some(p));
            }
            step *= 0.5;
        }
        Ok(None)
    };
    match (side(x, lo, true)?, side(x, hi, false)?) {
        (Some(l), Some(h)) if h - l <= tol => Ok((l, h)),
        _ => Err(Error::ToleranceUnreachable {
            width: hi - lo,
            tol,
        }),
    }
}

/// Strict increase of `f` on `points` equally spaced points of `[lo, hi]`.
pub fn monotone_scan<F>(f: F, lo: f64, hi: f64, points: usize, exec: Exec) -> bool
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let step = (hi - lo) / (points - 1) as f64;
    let values = exec.map_range(points, |i| f(lo + step * i as f64));
    values.windows(2).all(|w| w[0] < w[1])
}

fn majorant_fn(p: RadiusProblem) -> impl Fn(f64) -> f64 + Sync + Send {
    move |r| p.majorant_value(r).unwrap_or(f64::NAN)
}

/// Certified radius for a problem.
///
/// Root-defined problems are solved on the initial bracket and scanned for
/// monotonicity; the rest wrap their closed-form value.
pub fn solve_radius(p: &RadiusProblem, tol: f64) -> Result<RootCertificate> {
    solve_radius_with(p, &SolverConfig::with_tol(tol), Exec::default())
}

pub fn solve_radius_with(p: &RadiusProblem, cfg: &SolverConfig, exec: Exec) -> Result<RootCertificate> {
    if !p.is_root_defined() {
        let root = p
            .closed_form_radius()
            .expect("problems without a majorant have closed forms");
        return Ok(RootCertificate {
            problem: Some(*p),
            lo: root,
            hi: root,
            root,
            residual: 0.0,
            iterations: 0,
            monotone_checked: false,
        });
    }
    let f = majorant_fn(*p);
    let (lo, hi) = INITIAL_BRACKET;
    let mut cert = bracket_root_with(&f, lo, hi, cfg)?;
    cert.problem = Some(*p);
    cert.monotone_checked = monotone_scan(&f, lo, hi, MONOTONE_SCAN_POINTS, exec);
    Ok(cert)
}

/// Radius value only: the certified root or the closed form.
pub fn radius_of(p: &RadiusProblem, tol: f64) -> Result<f64> {
    Ok(solve_radius(p, tol)?.root)
}

/// `min(1/3, base radius)` for the problems whose subordination class
/// combines a base radius with the 1/3 domination radius.
pub fn min_rule_radius(p: &RadiusProblem, tol: f64) -> Result<f64> {
    use RadiusProblem::*;
    match p {
        Thm24Monomial { .. }
        | Cor25Monomial { .. }
        | Thm23Quasi { .. }
        | Thm23QuasiConvex { .. }
        | Thm23Subordination { .. }
        | Thm23SubordinationConvex { .. } => Ok(radius_of(p, tol)?.min(1.0 / 3.0)),
        _ => Err(Error::Incompatible(format!(
            "{p} has no subordination min rule"
        ))),
    }
}
