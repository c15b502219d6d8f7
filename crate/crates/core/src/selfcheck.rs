//! Aggregated invariant suite.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::bohr::{bohr_partial_sum, boundary_reach, sharpness_scan, BohrSubject};
use crate::catalog::{MapName, NamedMap};
use crate::dilatation::{g_from_mobius, g_from_monomial, MobiusDilatation, MobiusSign, MonomialDilatation};
use crate::error::Result;
use crate::par::Exec;
use crate::radius::{Quasiconformal, RadiusProblem};
use crate::series::{PowerSeries, BOHR_ORDER};
use crate::solver::{monotone_scan, radius_of, solve_radius, DEFAULT_WIDTH_TOL};
use crate::subordination::DominationCampaign;

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SelfCheckOptions {
    /// Smaller campaign and grids.
    pub quick: bool,
    /// Shift one catalog coefficient by 1e-3 before checking (mutation sanity check).
    pub perturb: bool,
}

pub const PERTURBATION: f64 = 1e-3;

/// Every root-defined problem over `k in {0.1, 0.5, 0.9, 1}`, `n in 1..=4`.
pub fn root_defined_lattice() -> Vec<RadiusProblem> {
    let mut out = Vec::new();
    for &k in &[0.1, 0.5, 0.9, 1.0] {
        for n in 1..=4 {
            out.push(RadiusProblem::thm24(k, n).expect("lattice parameters are valid"));
        }
    }
    out.extend((1..=4).map(|n| RadiusProblem::cor25(n).expect("n >= 1")));
    out.extend([
        RadiusProblem::Thm27Mobius,
        RadiusProblem::Thm29ConvexDirection,
        RadiusProblem::Thm210ConvexDirectionS0,
        RadiusProblem::Thm211Convex,
    ]);
    out
}

/// Strictly increasing on `points` points of `(0, 0.99)` with exactly one sign change.
pub fn majorant_shape_ok(p: &RadiusProblem, points: usize, exec: Exec) -> bool {
    let f = |r: f64| p.majorant_value(r).unwrap_or(f64::NAN);
    let (lo, hi) = (0.99 / (points + 1) as f64, 0.99 * points as f64 / (points + 1) as f64);
    let values = exec.map_range(points, |i| f(lo + (hi - lo) * i as f64 / (points - 1) as f64));
    let increasing = values.windows(2).all(|w| w[0] < w[1]);
    let changes = values.windows(2).filter(|w| (w[0] < 0.0) != (w[1] < 0.0)).count();
    increasing && changes == 1 && monotone_scan(f, lo, hi, points, exec)
}

fn outcome(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name, passed, detail }
}

fn half_plane_l(order: usize, perturb: bool) -> BohrSubject {
    let mut s = BohrSubject::named(&NamedMap::simple(MapName::HalfPlaneL, order).expect("valid"));
    if perturb {
        let h = s.map.h().perturbed(2, Complex64::new(PERTURBATION, 0.0));
        s.map = crate::series::HarmonicMap::new(h, s.map.g().clone()).expect("same order");
    }
    s
}

pub fn run(opts: SelfCheckOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();

    // series round trip and composition consistency
    {
        let s = PowerSeries::from_real((0..=40).map(|m| ((m * 7919) % 101) as f64 - 50.0))?;
        let rt = s.integrate().differentiate() == s;
        let f = PowerSeries::from_real((0..=200).map(|m| (m + 1) as f64))?;
        let psi = PowerSeries::from_real((0..=200).map(|m| if m == 0 { 0.0 } else { 0.5f64.powi(m) }))?;
        let comp = f.compose(&psi)?;
        let worst = (0..16)
            .map(|j| {
                let z = Complex64::from_polar(0.3, TAU * j as f64 / 16.0);
                (comp.eval_unchecked(z) - f.eval_unchecked(psi.eval_unchecked(z))).norm()
            })
            .fold(0.0, f64::max);
        out.push(outcome("series_round_trip", rt, String::new()));
        out.push(outcome("composition_evaluation", worst < 1e-9, format!("max deviation {worst:e}")));
    }

    // dilatation recurrences
    {
        let koebe = NamedMap::simple(MapName::KoebeAnalytic, 60)?.build();
        let mut worst = 0.0f64;
        for &a in &[-0.9, -0.5, 0.0, 0.3, 0.7] {
            let g = g_from_mobius(koebe.h(), &MobiusDilatation::new(a, MobiusSign::Plus)?)?;
            let w = PowerSeries::from_real((0..=60).map(|j| match j {
                0 => a,
                _ => (-a).powi(j - 1) * (1.0 - a * a),
            }))?;
            let oracle = w.product(&koebe.h().differentiate()).integrate();
            for m in 1..=50 {
                worst = worst.max((g.coeff(m) - oracle.coeff(m)).norm() / oracle.coeff(m).norm());
            }
        }
        out.push(outcome("mobius_oracle", worst <= 1e-12, format!("max relative error {worst:e}")));

        let g = g_from_monomial(koebe.h(), &MonomialDilatation::new(1.0, 0.0, 1)?)?;
        let f0 = NamedMap::simple(MapName::F0Sharp, 60)?.build();
        let worst = (0..=60)
            .map(|m| (g.coeff(m) - f0.g().coeff(m)).norm())
            .fold(0.0, f64::max);
        out.push(outcome("monomial_reproduces_f0", worst <= 1e-13, format!("max deviation {worst:e}")));
    }

    // catalog bounds and closed forms
    {
        let l = half_plane_l(200, opts.perturb);
        let k = NamedMap::simple(MapName::HarmonicKoebe, 200)?;
        let mut ok = true;
        for m in 2..=200usize {
            let mf = m as f64;
            let (a, b) = k.coefficients(m);
            ok &= a == (mf + 1.0) * (2.0 * mf + 1.0) / 6.0 && b == (mf - 1.0) * (2.0 * mf - 1.0) / 6.0;
            ok &= l.map.h().coeff(m).norm() == (mf + 1.0) / 2.0 && l.map.g().coeff(m).norm() == (mf - 1.0) / 2.0;
        }
        out.push(outcome("coefficient_bounds_attained", ok, String::new()));

        let order = if opts.quick { 400 } else { BOHR_ORDER };
        let mut worst = 0.0f64;
        for name in MapName::ALL {
            let named = NamedMap::new(name, name.takes_k().then_some(0.5), order)?;
            let f = named.build();
            for j in 0..32 {
                let z = Complex64::from_polar(0.3, TAU * j as f64 / 32.0);
                worst = worst.max((named.closed_form_eval(z)? - f.eval(z)?).norm());
            }
        }
        out.push(outcome("closed_form_agreement", worst <= 1e-10, format!("max deviation {worst:e}")));
    }

    // majorants and radii
    {
        let points = if opts.quick { 200 } else { 1000 };
        let bad: Vec<String> = root_defined_lattice()
            .iter()
            .filter(|p| !majorant_shape_ok(p, points, Exec::default()))
            .map(|p| p.to_string())
            .collect();
        out.push(outcome("majorant_monotone_single_root", bad.is_empty(), bad.join(", ")));

        let k1 = Quasiconformal::new(1.0)?;
        let r12 = RadiusProblem::Thm12Quasi { big_k: k1 }.closed_form_radius().unwrap_or(f64::NAN);
        let r23 = RadiusProblem::Thm23Quasi { big_k: k1 }.closed_form_radius().unwrap_or(f64::NAN);
        let limits = (r12 - (3.0 - 8f64.sqrt())).abs() < 1e-12 && (r23 - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12;
        out.push(outcome("quasiconformal_limits", limits, String::new()));

        let roots: Vec<f64> = (1..=8)
            .map(|n| radius_of(&RadiusProblem::cor25(n)?, DEFAULT_WIDTH_TOL))
            .collect::<Result<_>>()?;
        out.push(outcome(
            "monomial_radii_decrease",
            roots.windows(2).all(|w| w[1] < w[0]),
            format!("{roots:?}"),
        ));

        let mut agree = true;
        for p in [RadiusProblem::Thm29ConvexDirection, RadiusProblem::Thm211Convex] {
            let cert = solve_radius(&p, DEFAULT_WIDTH_TOL)?;
            agree &= (cert.root - p.closed_form_radius().unwrap_or(f64::NAN)).abs() < 1e-10 && cert.monotone_checked;
        }
        out.push(outcome("solver_matches_closed_forms", agree, String::new()));
    }

    // extremal equality and sharpness
    {
        let cases = [
            (half_plane_l(BOHR_ORDER, opts.perturb), RadiusProblem::Thm211Convex),
            (
                BohrSubject::named(&NamedMap::simple(MapName::HarmonicKoebe, BOHR_ORDER)?),
                RadiusProblem::Thm210ConvexDirectionS0,
            ),
            (
                BohrSubject::named(&NamedMap::simple(MapName::F0Sharp, BOHR_ORDER)?),
                RadiusProblem::cor25(1)?,
            ),
        ];
        for (subject, p) in &cases {
            let r0 = radius_of(p, DEFAULT_WIDTH_TOL)?;
            let (sum, tail) = subject.partial_sum(r0)?;
            let excess = sharpness_scan(subject, p, 1.0, 0.01)?;
            let passed = (sum + tail - 1.0).abs() <= 1e-9 && excess > 0.0;
            out.push(outcome(
                "extremal_equality",
                passed,
                format!("{} at {p}: sum {sum:.15}, excess {excess:.6}", subject.id),
            ));
        }

        let mut sound = true;
        for name in MapName::ALL {
            let s = BohrSubject::named(&NamedMap::new(name, name.takes_k().then_some(0.7), 400)?);
            for &r in &[0.1, 0.3, 0.6, 0.9] {
                let (short, t) = bohr_partial_sum(&s.map, r, 200, s.tail_constant)?;
                let (long, _) = bohr_partial_sum(&s.map, r, 400, s.tail_constant)?;
                sound &= short <= long && long <= short + t + 1e-12 * long;
            }
        }
        out.push(outcome("tail_soundness", sound, String::new()));
    }

    // subordination campaign
    {
        let seeds = if opts.quick { 0..20 } else { 0..200 };
        let records = DominationCampaign::standard(seeds).run(Exec::default())?;
        let worst = records.iter().map(|r| r.worst_margin).fold(f64::INFINITY, f64::min);
        out.push(outcome(
            "domination_campaign",
            worst >= -1e-9,
            format!("{} compositions, worst margin {worst:e}", records.len()),
        ));
    }

    // figure maps touch the unit circle at their radii
    {
        let f0 = NamedMap::simple(MapName::F0Sharp, 1)?;
        let r0 = radius_of(&RadiusProblem::cor25(1)?, DEFAULT_WIDTH_TOL)?;
        let a = boundary_reach(|z| f0.closed_form_eval(z), r0, 4096)?;
        let k = NamedMap::simple(MapName::HarmonicKoebe, 1)?;
        let r1 = radius_of(&RadiusProblem::Thm210ConvexDirectionS0, DEFAULT_WIDTH_TOL)?;
        let b = boundary_reach(|z| k.closed_form_eval(z), r1, 4096)?;
        out.push(outcome(
            "figure_tangency",
            a.gap.abs() < 1e-9 && b.gap.abs() < 1e-9,
            format!("f0 max {:.12}, K max {:.12}", a.max_mod, b.max_mod),
        ));
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let outcomes = run(SelfCheckOptions { quick: true, perturb: false }).unwrap();
        for o in &outcomes {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
    }

    #[test]
    fn perturbation_is_detected() {
        let outcomes = run(SelfCheckOptions { quick: true, perturb: true }).unwrap();
        let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
        assert!(failed.contains(&"extremal_equality"), "{failed:?}");
    }
}
