//! The `bohr` command line.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bohr::{profile_up_to, reach_of, image_curve, sharpness_scan, BohrSubject, DEFAULT_GRID, DEFAULT_MARGIN};
use crate::catalog::{MapName, NamedMap};
use crate::dilatation::{mobius_map, monomial_map, MobiusDilatation, MobiusSign, MonomialDilatation};
use crate::error::{Error, Result};
use crate::format::{round_json, sig};
use crate::par::Exec;
use crate::radius::{ProblemParams, RadiusProblem};
use crate::selfcheck::{self, SelfCheckOptions};
use crate::series::{BOHR_ORDER, COMPOSITION_ORDER};
use crate::solver::{solve_radius_with, SolverConfig, DEFAULT_WIDTH_TOL};
use crate::subordination::DominationCampaign;

const CAMPAIGN_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "bohr",
    version,
    about = "Bohr radii for univalent harmonic mappings: certified radii, inequality profiles, figure data",
    after_help = "Environment:\n  BOHR_TOL  default bracket-width tolerance for root solving (default 1e-13)"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Plain)]
    pub format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Theorem selector: thm11, thm11_convex, thm12, thm12_convex, thm22, thm23,
    /// thm23_convex, thm23_sub, thm23_sub_convex, thm24, cor25, thm27, thm29, thm210, thm211.
    #[arg(long)]
    pub theorem: String,
    /// Quasiconformality constant K >= 1.
    #[arg(long = "K")]
    pub big_k: Option<f64>,
    /// Dilatation amplitude k (thm24) or catalog parameter k (p_k, q_k).
    #[arg(long)]
    pub k: Option<f64>,
    /// Dilatation exponent n (thm24, cor25).
    #[arg(long)]
    pub n: Option<u32>,
}

#[derive(Debug, Args)]
pub struct TolArg {
    /// Bracket-width tolerance.
    #[arg(long, env = "BOHR_TOL", default_value_t = DEFAULT_WIDTH_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// Catalog map: koebe_analytic, half_plane_analytic, harmonic_koebe_K, half_plane_L, f0_sharp, p_k, q_k.
    #[arg(long)]
    pub map: String,
    /// Möbius dilatation parameter a (thm27 with koebe_analytic).
    #[arg(long)]
    pub a: Option<f64>,
    /// Möbius variant.
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,
    /// Override the inequality's right-hand side.
    #[arg(long)]
    pub bound: Option<f64>,
    /// Truncation order.
    #[arg(long, default_value_t = BOHR_ORDER)]
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified radius for one theorem.
    Radius {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Radii of the monomial-dilatation family for n = 1..max-n.
    Table {
        #[arg(long, default_value_t = 4)]
        max_n: u32,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Bohr-sum profile below the radius; fails if any grid point exceeds the bound.
    Verify {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Bohr sum just above the radius minus the bound; fails unless positive.
    Sharpness {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
    },
    /// Image of the circle |z| = r as CSV points.
    ImageCurve {
        #[arg(long)]
        map: String,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 4096)]
        samples: usize,
    },
    /// Seeded Blaschke-product compositions checking coefficient domination up to r = 1/3.
    SubordinationCampaign {
        #[arg(long, default_value_t = 200)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        #[arg(long, default_value_t = COMPOSITION_ORDER)]
        order: usize,
    },
    /// Run the invariant suite.
    Selfcheck {
        /// Reduced grids and campaign.
        #[arg(long)]
        quick: bool,
        /// Perturb a catalog coefficient by 1e-3; the suite must then fail.
        #[arg(long, hide = true)]
        perturb: bool,
    },
}

/// Rendered output and exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub success: bool,
}

fn problem_from(args: &ProblemArgs, k_belongs_to_problem: bool) -> Result<RadiusProblem> {
    RadiusProblem::from_selector(
        &args.theorem,
        ProblemParams {
            big_k: args.big_k,
            k: args.k.filter(|_| k_belongs_to_problem),
            n: args.n,
        },
    )
}

/// Map/theorem pairing: the subject, its default bound and whether the map
/// is extremal for the theorem.
pub struct Pairing {
    pub subject: BohrSubject,
    pub problem: RadiusProblem,
    pub bound: f64,
    pub extremal: bool,
}

pub fn pair(map: &MapArgs, problem: &ProblemArgs) -> Result<Pairing> {
    use RadiusProblem::*;
    let name: MapName = map.map.parse()?;
    let p = problem_from(problem, !name.takes_k())?;
    let map_k = if name.takes_k() { problem.k } else { None };
    let named = NamedMap::new(name, map_k, map.order)?;
    if map.a.is_some() && !matches!(p, Thm27Mobius) {
        return Err(Error::Incompatible("--a applies only to thm27".into()));
    }
    let incompatible = || {
        Error::Incompatible(format!(
            "map {name} is not covered by {p}; see `bohr verify --help` and the README compatibility table"
        ))
    };
    let koebe_h = || NamedMap::simple(MapName::KoebeAnalytic, map.order).map(|m| m.build().h().clone());
    let mut bound = p.default_bound();
    let (subject, extremal) = match (name, p) {
        (MapName::KoebeAnalytic, Thm11Univalent) => (BohrSubject::named(&named), true),
        (MapName::KoebeAnalytic, Thm22Bohr) => (BohrSubject::named(&named), false),
        (MapName::KoebeAnalytic, Thm24Monomial { k, n }) => {
            let d = MonomialDilatation::new(k, 0.0, n)?;
            let id = format!("koebe_analytic+monomial(k={k},n={n})");
            (BohrSubject::new(id, monomial_map(koebe_h()?, &d)?, 2.0), n == 1)
        }
        (MapName::KoebeAnalytic, Cor25Monomial { n }) => {
            let d = MonomialDilatation::new(1.0, 0.0, n)?;
            let id = format!("koebe_analytic+monomial(k=1,n={n})");
            (BohrSubject::new(id, monomial_map(koebe_h()?, &d)?, 2.0), n == 1)
        }
        (MapName::KoebeAnalytic, Thm27Mobius) => {
            let a = map
                .a
                .ok_or_else(|| Error::Incompatible("thm27 with koebe_analytic requires --a".into()))?;
            let sign = match map.sign {
                SignArg::Plus => MobiusSign::Plus,
                SignArg::Minus => MobiusSign::Minus,
            };
            let d = MobiusDilatation::new(a, sign)?;
            bound = Some(1.0 + a.abs());
            let id = format!("koebe_analytic+mobius(a={a})");
            // |b_m| <= 3m: the dilatation's coefficient moduli sum to 1 + 2|a|
            (BohrSubject::new(id, mobius_map(koebe_h()?, &d)?, 4.0), false)
        }
        (MapName::HalfPlaneAnalytic, Thm11Convex) => (BohrSubject::named(&named), true),
        (MapName::HalfPlaneAnalytic, Thm22Bohr | Thm29ConvexDirection) => (BohrSubject::named(&named), false),
        (MapName::Pk, Thm12Quasi { big_k } | Thm23Quasi { big_k } | Thm23Subordination { big_k })
        | (MapName::Qk, Thm12QuasiConvex { big_k } | Thm23QuasiConvex { big_k } | Thm23SubordinationConvex { big_k }) => {
            let k = map_k.unwrap_or_default();
            let limit = big_k.dilatation_bound();
            if k > limit + 1e-12 {
                return Err(Error::Incompatible(format!(
                    "{name} with k = {k} is not K-quasiconformal for K = {} (needs k <= {limit})",
                    big_k.value()
                )));
            }
            let extremal = (k - limit).abs() <= 1e-12
                && matches!(p, Thm12Quasi { .. } | Thm23Quasi { .. } | Thm12QuasiConvex { .. } | Thm23QuasiConvex { .. });
            (BohrSubject::named(&named), extremal)
        }
        (MapName::HarmonicKoebe, Thm210ConvexDirectionS0) => (BohrSubject::named(&named), true),
        (MapName::HalfPlaneL, Thm211Convex) => (BohrSubject::named(&named), true),
        (MapName::HalfPlaneL, Thm210ConvexDirectionS0) => (BohrSubject::named(&named), false),
        (MapName::F0Sharp, Cor25Monomial { n: 1 }) => (BohrSubject::named(&named), true),
        (MapName::F0Sharp, Thm24Monomial { k: 1.0, n: 1 }) => (BohrSubject::named(&named), true),
        _ => return Err(incompatible()),
    };
    let bound = map.bound.or(bound).ok_or_else(|| Error::Incompatible(format!("{p} needs --bound")))?;
    Ok(Pairing {
        subject,
        problem: p,
        bound,
        extremal,
    })
}

fn header(pairs: &[(&str, String)]) -> String {
    let mut s = String::from("#");
    for (k, v) in pairs {
        let _ = write!(s, " {k}={v}");
    }
    s.push('\n');
    s
}

fn params_json(pairs: &[(&str, String)]) -> Value {
    Value::Object(pairs.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect())
}

fn json_text(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&round_json(v)).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Radius { problem, tol } => {
            let p = problem_from(problem, true)?;
            let cert = solve_radius_with(&p, &SolverConfig::with_tol(tol.tol), Exec::default())?;
            let params = [
                ("command", "radius".to_string()),
                ("theorem", p.to_string()),
                ("tol", format!("{:e}", tol.tol)),
            ];
            let text = match format {
                Format::Json => json_text(json!({"params": params_json(&params), "certificate": cert})),
                Format::Csv => {
                    let mut s = header(&params);
                    s.push_str("problem,lo,hi,root,residual,iterations,monotone_checked\n");
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{}",
                        p,
                        sig(cert.lo),
                        sig(cert.hi),
                        sig(cert.root),
                        sig(cert.residual),
                        cert.iterations,
                        cert.monotone_checked
                    );
                    s
                }
                Format::Plain => {
                    let mut s = header(&params);
                    let _ = writeln!(s, "problem           {p}");
                    let _ = writeln!(s, "root              {}", sig(cert.root));
                    let _ = writeln!(s, "bracket           [{}, {}]", sig(cert.lo), sig(cert.hi));
                    let _ = writeln!(s, "residual          {}", sig(cert.residual));
                    let _ = writeln!(s, "iterations        {}", cert.iterations);
                    let _ = writeln!(s, "monotone_checked  {}", cert.monotone_checked);
                    s
                }
            };
            Ok(Outcome { text, success: true })
        }
        Command::Table { max_n, tol } => {
            if *max_n < 1 {
                return Err(Error::InvalidParameter {
                    name: "max-n",
                    value: 0.0,
                    reason: "must be at least 1",
                });
            }
            let problems: Vec<RadiusProblem> = (1..=*max_n).map(RadiusProblem::cor25).collect::<Result<_>>()?;
            let cfg = SolverConfig::with_tol(tol.tol);
            let certs = Exec::default()
                .map(&problems, |p| solve_radius_with(p, &cfg, Exec::Sequential))
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let decreasing = certs.windows(2).all(|w| w[1].root < w[0].root);
            let params = [
                ("command", "table".to_string()),
                ("max_n", max_n.to_string()),
                ("tol", format!("{:e}", tol.tol)),
            ];
            let text = match format {
                Format::Json => {
                    let rows: Vec<Value> = certs
                        .iter()
                        .enumerate()
                        .map(|(i, c)| json!({"n": i + 1, "root": c.root, "certificate": c}))
                        .collect();
                    json_text(json!({"params": params_json(&params), "rows": rows, "strictly_decreasing": decreasing}))
                }
                Format::Csv | Format::Plain => {
                    let mut s = header(&params);
                    let sep = if format == Format::Csv { "," } else { "  " };
                    let _ = writeln!(s, "n{sep}root{sep}root_4dp");
                    for (i, c) in certs.iter().enumerate() {
                        let _ = writeln!(s, "{}{sep}{}{sep}{:.4}", i + 1, sig(c.root), c.root);
                    }
                    s
                }
            };
            Ok(Outcome { text, success: decreasing })
        }
        Command::Verify { map, problem, margin, grid } => {
            let pairing = pair(map, problem)?;
            let cert = solve_radius_with(&pairing.problem, &SolverConfig::default(), Exec::default())?;
            let profile = profile_up_to(
                &pairing.subject,
                Some(pairing.problem),
                cert.root,
                pairing.bound,
                *margin,
                *grid,
                Exec::default(),
            )?;
            let params = [
                ("command", "verify".to_string()),
                ("map", pairing.subject.id.clone()),
                ("theorem", pairing.problem.to_string()),
                ("radius", sig(cert.root)),
                ("bound", pairing.bound.to_string()),
                ("margin", margin.to_string()),
                ("grid", grid.to_string()),
                ("order", map.order.to_string()),
            ];
            let pass = profile.all_pass();
            let text = match format {
                Format::Json => json_text(json!({"params": params_json(&params), "all_pass": pass, "profile": profile})),
                Format::Csv => header(&params) + &profile.to_csv(),
                Format::Plain => {
                    let mut s = header(&params);
                    let _ = writeln!(
                        s,
                        "{} of {} grid points pass; worst slack {}",
                        profile.verdicts.iter().filter(|v| **v).count(),
                        profile.verdicts.len(),
                        sig(profile.worst_slack())
                    );
                    s
                }
            };
            Ok(Outcome { text, success: pass })
        }
        Command::Sharpness { map, problem, epsilon } => {
            let pairing = pair(map, problem)?;
            if !pairing.extremal {
                return Err(Error::Incompatible(format!(
                    "{} is not extremal for {}",
                    pairing.subject.id, pairing.problem
                )));
            }
            let excess = sharpness_scan(&pairing.subject, &pairing.problem, pairing.bound, *epsilon)?;
            let params = [
                ("command", "sharpness".to_string()),
                ("map", pairing.subject.id.clone()),
                ("theorem", pairing.problem.to_string()),
                ("bound", pairing.bound.to_string()),
                ("epsilon", epsilon.to_string()),
            ];
            let text = match format {
                Format::Json => json_text(json!({"params": params_json(&params), "excess": excess})),
                Format::Csv => header(&params) + &format!("excess\n{}\n", sig(excess)),
                Format::Plain => header(&params) + &format!("excess {}\n", sig(excess)),
            };
            Ok(Outcome { text, success: excess > 0.0 })
        }
        Command::ImageCurve { map, k, r, samples } => {
            let named = NamedMap::new(map.parse()?, *k, 1)?;
            if *samples < 1 {
                return Err(Error::InvalidParameter {
                    name: "samples",
                    value: 0.0,
                    reason: "must be positive",
                });
            }
            let pts = image_curve(|z| named.closed_form_eval(z), *r, *samples, Exec::default())?;
            let reach = reach_of(&pts);
            let text = match format {
                Format::Json => {
                    let points: Vec<[f64; 2]> = pts.iter().map(|w| [w.re, w.im]).collect();
                    json_text(json!({
                        "params": {"map": named.to_string(), "r": r.to_string(), "samples": samples.to_string()},
                        "max_mod": reach.max_mod,
                        "points": points,
                    }))
                }
                Format::Csv | Format::Plain => {
                    let mut s = format!(
                        "# map={} r={} samples={} max_mod={}\nre,im\n",
                        named,
                        r,
                        samples,
                        sig(reach.max_mod)
                    );
                    for w in &pts {
                        let _ = writeln!(s, "{},{}", sig(w.re), sig(w.im));
                    }
                    s
                }
            };
            Ok(Outcome { text, success: true })
        }
        Command::SubordinationCampaign { seeds, first_seed, order } => {
            let mut campaign = DominationCampaign::standard(*first_seed..first_seed + seeds);
            if *order != campaign.order {
                campaign = DominationCampaign {
                    order: *order,
                    maps: campaign.maps.into_iter().map(|(n, f)| (n, f.truncate(*order))).collect(),
                    ..campaign
                };
            }
            let records = campaign.run(Exec::default())?;
            let worst = records.iter().map(|r| r.worst_margin).fold(f64::INFINITY, f64::min);
            let pass = worst >= -CAMPAIGN_TOL;
            let params = [
                ("command", "subordination-campaign".to_string()),
                ("seeds", seeds.to_string()),
                ("first_seed", first_seed.to_string()),
                ("order", order.to_string()),
                ("r_max", sig(1.0 / 3.0)),
            ];
            let text = match format {
                Format::Json => json_text(json!({
                    "params": params_json(&params),
                    "worst_margin": worst,
                    "all_pass": pass,
                    "records": records,
                })),
                Format::Csv => {
                    let mut s = header(&params);
                    s.push_str("seed,map,degree,worst_margin\n");
                    for r in &records {
                        let _ = writeln!(
                            s,
                            "{},{},{},{}",
                            r.seed,
                            r.map,
                            DominationCampaign::degree_for(r.seed),
                            sig(r.worst_margin)
                        );
                    }
                    s
                }
                Format::Plain => {
                    header(&params)
                        + &format!(
                            "{} compositions, worst margin {}, {}\n",
                            records.len(),
                            sig(worst),
                            if pass { "pass" } else { "FAIL" }
                        )
                }
            };
            Ok(Outcome { text, success: pass })
        }
        Command::Selfcheck { quick, perturb } => {
            let outcomes = selfcheck::run(SelfCheckOptions {
                quick: *quick,
                perturb: *perturb,
            })?;
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let params = [
                ("command", "selfcheck".to_string()),
                ("quick", quick.to_string()),
                ("perturb", perturb.to_string()),
            ];
            let text = match format {
                Format::Json => json_text(json!({
                    "params": params_json(&params),
                    "passed": outcomes.len() - failed,
                    "failed": failed,
                    "checks": outcomes,
                })),
                Format::Csv | Format::Plain => {
                    let mut s = header(&params);
                    for o in &outcomes {
                        let _ = writeln!(s, "{} {} {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
                    }
                    let _ = writeln!(s, "{} passed, {} failed", outcomes.len() - failed, failed);
                    s
                }
            };
            Ok(Outcome { text, success: failed == 0 })
        }
    }
}

/// Parses arguments, runs the command and writes its output; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &outcome.text),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(outcome.text.as_bytes())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            if outcome.success {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<Outcome> {
        let cli = Cli::try_parse_from(std::iter::once("bohr").chain(args.iter().copied())).expect("parses");
        execute(&cli)
    }

    #[test]
    fn rejects_unknown_flags() {
        assert!(Cli::try_parse_from(["bohr", "table", "--bogus"]).is_err());
    }

    #[test]
    fn incompatible_pairings() {
        assert!(matches!(
            run(&["verify", "--map", "harmonic_koebe_K", "--theorem", "thm211"]),
            Err(Error::Incompatible(_))
        ));
        assert!(run(&["verify", "--map", "p_k", "--k", "0.9", "--theorem", "thm12", "--K", "3"]).is_err());
        assert!(run(&["sharpness", "--map", "half_plane_L", "--theorem", "thm210"]).is_err());
        assert!(run(&["verify", "--map", "koebe_analytic", "--theorem", "thm27"]).is_err());
        assert!(run(&["verify", "--map", "koebe_analytic", "--theorem", "thm11", "--a", "0.2"]).is_err());
    }

    #[test]
    fn mobius_and_monomial_pairings() {
        let out = run(&["verify", "--map", "koebe_analytic", "--theorem", "thm27", "--a", "0.3", "--grid", "32"]).unwrap();
        assert!(out.success, "{}", out.text);
        assert!(out.text.contains("bound=1.3"));
        let out = run(&["verify", "--map", "koebe_analytic", "--theorem", "thm24", "--k", "0.5", "--n", "2", "--grid", "32"])
            .unwrap();
        assert!(out.success, "{}", out.text);
        let out = run(&["sharpness", "--map", "koebe_analytic", "--theorem", "thm24", "--k", "0.5", "--n", "1"]).unwrap();
        assert!(out.success);
    }

    #[test]
    fn image_curve_real_axis_point() {
        let out = run(&["image-curve", "--map", "koebe_analytic", "--r", "0.5", "--samples", "64"]).unwrap();
        let mut lines = out.text.lines();
        assert!(lines.next().unwrap().starts_with("# map=koebe_analytic r=0.5 samples=64 max_mod="));
        assert_eq!(lines.next().unwrap(), "re,im");
        assert_eq!(lines.next().unwrap(), "2.00000000000,0");
        assert_eq!(lines.count(), 63);
    }
}
