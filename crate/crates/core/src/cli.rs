//! The `crvol` command line: argument parsing, pipelines per subcommand, and
//! exit codes (0 success, 2 usage, 3 config or parse, 4 numerical).

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cgb::renormalized_cgb;
use crate::crgeom::{build_mesh, evaluate_mesh, BoundaryMesh, PointRecord};
use crate::dsl::{builtin_domain, builtin_from_str, load_domain_spec, parse_expression, DomainSpec};
use crate::error::{CrError, Result};
use crate::expand::{expansion_from, predicted_c, v_integrals};
use crate::jets::C64;
use crate::renorm::{self, ball, check_special_phi, conformal_anomaly, fit_volume_expansion, parse_samples, sample_volumes};
use crate::report::{emit_report, BallRow, Format, Integrals, InvariantSummary, PointRow, RunReport, Stats};

/// Volume samples per fit.
const FIT_SAMPLES: usize = 16;
const DEFAULT_WINDOW: (f64, f64) = (-0.5, -0.05);

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Table,
    #[value(alias = "json")]
    Structured,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "crvol", version, about = "Boundary invariants, renormalized volume and Chern-Gauss-Bonnet checks for domains in C^2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Domain configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Built-in domain such as `unit_ball` or `bumped_ball(0.05,2)`.
    #[arg(long, global = true)]
    domain: Option<String>,
    /// Hopf mesh resolution per axis.
    #[arg(long, global = true)]
    mesh: Option<usize>,
    /// Jet order.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Fit window `a,b` with a, b < 0.
    #[arg(long = "eps-window", global = true, allow_hyphen_values = true)]
    eps_window: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: FormatArg,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Boundary invariants and the predicted c₀, c₁, L of a domain.
    Analyze,
    /// Closed-form ball profiles, fitted renormalized volume and the Chern-Gauss-Bonnet ledger.
    BallReport,
    /// Conformal anomaly of a rescaling `e^{2Υ}θ` by three routes.
    Anomaly {
        /// Real expression in z, w for Υ.
        #[arg(long, allow_hyphen_values = true)]
        upsilon: String,
    },
    /// Renormalized Chern-Gauss-Bonnet ledger.
    Cgb {
        /// Hopf resolution per axis for the interior integral.
        #[arg(long, default_value_t = 4)]
        interior: usize,
    },
    /// Fit the volume expansion to `(ε, Vol)` samples from a file.
    Fit { samples: PathBuf },
}

/// Exit code and the text for each stream.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_object(kind: &str, message: &str, code: i32) -> String {
    let v = json!({ "error": { "kind": kind, "message": message, "exit_code": code } });
    format!("{v}\n")
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: e.to_string(), stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: error_object("usage", e.to_string().trim(), 2) },
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let format = match cli.format {
                FormatArg::Table => Format::Table,
                FormatArg::Structured => Format::Structured,
                FormatArg::Csv => Format::Csv,
            };
            let text = emit_report(&report, format);
            match &cli.out {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => Outcome { code: 0, stdout: String::new(), stderr: String::new() },
                    Err(e) => {
                        let err = CrError::Config { field: "out".into(), message: format!("{}: {e}", path.display()) };
                        failure(&err)
                    }
                },
                None => Outcome { code: 0, stdout: text, stderr: String::new() },
            }
        }
        Err(e) => failure(&e),
    }
}

fn failure(e: &CrError) -> Outcome {
    let code = e.exit_code();
    Outcome { code, stdout: String::new(), stderr: error_object(e.kind(), &e.to_string(), code) }
}

fn parse_window(text: Option<&str>) -> Result<(f64, f64)> {
    let Some(text) = text else { return Ok(DEFAULT_WINDOW) };
    let bad = || CrError::Config { field: "eps-window".into(), message: format!("expected `a,b` with a, b < 0, got {text:?}") };
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a < 0.0 && b < 0.0 && a != b) {
        return Err(bad());
    }
    Ok((a.min(b), a.max(b)))
}

fn resolve_domain(cli: &Cli, fallback: &str) -> Result<DomainSpec> {
    let mut spec = match (&cli.config, &cli.domain) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CrError::Config { field: "config".into(), message: format!("{}: {e}", path.display()) })?;
            load_domain_spec(&text)?
        }
        (None, Some(name)) => builtin_from_str(name)?,
        (None, None) => builtin_from_str(fallback)?,
    };
    if let Some(n) = cli.mesh {
        if n == 0 {
            return Err(CrError::Config { field: "mesh".into(), message: "mesh must be positive".into() });
        }
        spec = spec.with_mesh([n, n, n]);
    }
    if let Some(k) = cli.order {
        spec = spec.with_order(k);
    }
    Ok(spec)
}

fn common_parameters(report: &mut RunReport, spec: &DomainSpec) {
    report.domain = Some(spec.name.clone());
    report.parameters.insert("rho".into(), spec.rho.to_string());
    report.parameters.insert("mesh".into(), format!("{}x{}x{}", spec.mesh[0], spec.mesh[1], spec.mesh[2]));
    report.parameters.insert("jet_order".into(), spec.jet_order.to_string());
    report.tolerances.insert("structure_residual".into(), crate::crgeom::STRUCTURE_TOL);
}

struct Evaluated {
    mesh: BoundaryMesh,
    records: Vec<PointRecord>,
}

fn evaluate(spec: &DomainSpec, report: &mut RunReport) -> Result<Evaluated> {
    let t = Instant::now();
    let mesh = build_mesh(spec, spec.mesh)?;
    let records = evaluate_mesh(spec, &mesh)?;
    report.wall_times.push(("boundary".into(), t.elapsed().as_secs_f64()));
    let v2: Vec<f64> = records.iter().map(|r| expansion_from(r.scal, &r.derived).v[2]).collect();
    report.invariants = Some(InvariantSummary {
        points: mesh.len(),
        scal: Stats::of(&records.iter().map(|r| r.scal).collect::<Vec<_>>()),
        abs_a2: Stats::of(&records.iter().map(|r| r.a11.norm_sqr()).collect::<Vec<_>>()),
        v2: Stats::of(&v2),
        max_structure_residual: records.iter().map(|r| r.residual).fold(0.0, f64::max),
    });
    report.points = mesh
        .nodes
        .iter()
        .zip(&records)
        .zip(&v2)
        .map(|((n, r), &v)| PointRow { eta: n.eta, xi1: n.xi1, xi2: n.xi2, scal: r.scal, a_re: r.a11.re, a_im: r.a11.im, v2: v })
        .collect();
    Ok(Evaluated { mesh, records })
}

/// `c₀, c₁, L` on the mesh, with L's uncertainty from a coarser mesh.
fn integrals(spec: &DomainSpec, ev: &Evaluated, report: &mut RunReport) -> Result<Integrals> {
    let t = Instant::now();
    let fine = v_integrals(&ev.mesh, &ev.records);
    let coarse_res = spec.mesh.map(|n| (2 * n / 3).max(4));
    let coarse_mesh = build_mesh(spec, coarse_res)?;
    let coarse = v_integrals(&coarse_mesh, &evaluate_mesh(spec, &coarse_mesh)?);
    report.wall_times.push(("coarse_mesh".into(), t.elapsed().as_secs_f64()));
    let (c0, c1) = predicted_c(&fine);
    let floor = 64.0 * f64::EPSILON * fine.l_scale;
    Ok(Integrals {
        c0,
        c1,
        l: fine.l,
        l_uncertainty: (fine.l - coarse.l).abs().max(floor),
        l_scale: fine.l_scale,
        contact_volume: ev.mesh.measure(),
    })
}

fn volume_fit(spec: &DomainSpec, window: (f64, f64), report: &mut RunReport) -> Result<renorm::VolumeExpansion> {
    let t = Instant::now();
    let samples = sample_volumes(spec, window, FIT_SAMPLES)?;
    let fit = fit_volume_expansion(&samples)?;
    report.wall_times.push(("volume".into(), t.elapsed().as_secs_f64()));
    report.parameters.insert("eps_window".into(), format!("{},{}", window.0, window.1));
    report.renormalized_volume = Some(fit.v);
    report.volume_fit = Some(fit.clone());
    Ok(fit)
}

/// Deterministic sample of boundary and interior points for the special-φ check.
fn special_phi_points(mesh: &BoundaryMesh) -> (Vec<(C64, C64)>, Vec<(C64, C64)>) {
    let step = (mesh.len() / 50).max(1);
    let boundary: Vec<_> = mesh.nodes.iter().step_by(step).map(|n| n.p).collect();
    let interior = mesh
        .nodes
        .iter()
        .step_by(step)
        .enumerate()
        .map(|(k, n)| {
            let s = 0.1 + 0.85 * ((k as f64 * 0.618034) % 1.0);
            (n.p.0 * s, n.p.1 * s)
        })
        .collect();
    (boundary, interior)
}

fn execute(cli: &Cli) -> Result<RunReport> {
    let window = parse_window(cli.eps_window.as_deref())?;
    match &cli.command {
        Command::Analyze => {
            let spec = resolve_domain(cli, "unit_ball")?;
            let mut report = RunReport::new("analyze");
            common_parameters(&mut report, &spec);
            let ev = evaluate(&spec, &mut report)?;
            report.integrals = Some(integrals(&spec, &ev, &mut report)?);
            if spec.special_phi.is_some() {
                let (b, i) = special_phi_points(&ev.mesh);
                report.special_phi = Some(check_special_phi(&spec, &b, &i)?);
                report.tolerances.insert("special_phi".into(), renorm::SPECIAL_PHI_TOL);
                volume_fit(&spec, window, &mut report)?;
            }
            Ok(report)
        }
        Command::BallReport => {
            let spec = match cli.mesh {
                Some(n) => builtin_domain("unit_ball", &[])?.with_mesh([n, n, n]),
                None => builtin_domain("unit_ball", &[])?,
            };
            let spec = match cli.order {
                Some(k) => spec.with_order(k),
                None => spec,
            };
            let mut report = RunReport::new("ball-report");
            common_parameters(&mut report, &spec);
            let mut rows = Vec::new();
            for phi in [-3.5, -3.0, -2.0, -1.0, -0.5, -0.1, 0.0] {
                rows.push(BallRow {
                    phi,
                    radius: ball::radius_of_phi(phi)?,
                    h_tilde: ball::h_tilde(phi)?,
                    r: ball::transverse_r(phi)?,
                    s: ball::s_factor(phi)?,
                    dv_profile: ball::dv_profile(phi)?,
                });
            }
            report.ball_profile = Some(rows);
            let ev = evaluate(&spec, &mut report)?;
            let fine = v_integrals(&ev.mesh, &ev.records);
            let (c0, c1) = predicted_c(&fine);
            report.integrals = Some(Integrals {
                c0,
                c1,
                l: fine.l,
                l_uncertainty: 64.0 * f64::EPSILON * fine.l_scale,
                l_scale: fine.l_scale,
                contact_volume: ev.mesh.measure(),
            });
            let fit = volume_fit(&spec, window, &mut report)?;
            let t = Instant::now();
            report.ledger = Some(renormalized_cgb(&spec, fit.v, &ev.mesh, &ev.records, [4, 4, 4])?);
            report.wall_times.push(("cgb".into(), t.elapsed().as_secs_f64()));
            Ok(report)
        }
        Command::Anomaly { upsilon } => {
            let spec = resolve_domain(cli, "unit_ball")?;
            let ups = parse_expression(upsilon)?;
            let mut report = RunReport::new("anomaly");
            common_parameters(&mut report, &spec);
            report.parameters.insert("upsilon".into(), ups.to_string());
            let ev = evaluate(&spec, &mut report)?;
            let t = Instant::now();
            report.anomaly = Some(conformal_anomaly(&ev.mesh, &ev.records, &ups)?);
            report.wall_times.push(("anomaly".into(), t.elapsed().as_secs_f64()));
            Ok(report)
        }
        Command::Cgb { interior } => {
            let spec = resolve_domain(cli, "unit_ball")?;
            let mut report = RunReport::new("cgb");
            common_parameters(&mut report, &spec);
            let ev = evaluate(&spec, &mut report)?;
            let fit = volume_fit(&spec, window, &mut report)?;
            let t = Instant::now();
            let n = (*interior).max(1);
            report.ledger = Some(renormalized_cgb(&spec, fit.v, &ev.mesh, &ev.records, [n, n, n])?);
            report.wall_times.push(("cgb".into(), t.elapsed().as_secs_f64()));
            Ok(report)
        }
        Command::Fit { samples } => {
            let text = std::fs::read_to_string(samples)
                .map_err(|e| CrError::Config { field: "samples".into(), message: format!("{}: {e}", samples.display()) })?;
            let mut report = RunReport::new("fit");
            report.parameters.insert("samples".into(), samples.display().to_string());
            let fit = fit_volume_expansion(&parse_samples(&text)?)?;
            report.renormalized_volume = Some(fit.v);
            report.volume_fit = Some(fit);
            Ok(report)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parsing() {
        assert_eq!(parse_window(None).unwrap(), DEFAULT_WINDOW);
        assert_eq!(parse_window(Some("-0.05,-0.5")).unwrap(), (-0.5, -0.05));
        assert!(parse_window(Some("0.1,-0.5")).is_err());
        assert!(parse_window(Some("x")).is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let o = run(["crvol", "frobnicate"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("\"usage\""));
    }

    #[test]
    fn bad_domain_exits_three() {
        let o = run(["crvol", "analyze", "--domain", "torus(1)"]);
        assert_eq!(o.code, 3);
        let v: serde_json::Value = serde_json::from_str(&o.stderr).unwrap();
        assert_eq!(v["error"]["kind"], "unknown_domain");
    }

    #[test]
    fn unsupported_volume_exits_four() {
        let o = run(["crvol", "cgb", "--domain", "ellipsoid(1,1.2)", "--mesh", "4"]);
        assert_eq!(o.code, 4, "{o:?}");
    }
}
