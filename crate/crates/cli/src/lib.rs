//! Command-line front end for `se2sr-core`.
//!
//! [`run`] parses arguments, writes the artifact to the given writer (or to
//! `--out`) and returns the process exit code.

pub mod config;
pub mod output;
pub mod plot;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use se2sr_core::cut::{r11_curve, r12_curve};
use se2sr_core::selftest::{self, SelftestConfig};
use se2sr_core::synthesis::{sample_caustic, sample_sphere, sample_wavefront, solve_with};
use se2sr_core::exponential::exp_trajectory_with_tol;
use se2sr_core::{conj_time, cut_time, Covector, Multiplicity, Pose};

use config::{Overrides, RunConfig};
use output::{point_rows, points_json, trajectory_json, trajectory_rows, write_csv, write_json};
use output::{CUT_LOCUS_HEADER, POINT_HEADER, TRAJECTORY_HEADER};
use plot::Section;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] se2sr_core::Error),
    #[error("configuration: {0}")]
    Config(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("self-test failed: {0}")]
    Selftest(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use se2sr_core::Error as E;
        match self {
            CliError::Core(E::NoRoot(_) | E::Convergence(_)) | CliError::Selftest(_) => EXIT_SOLVER,
            CliError::Core(_) | CliError::Parse { .. } | CliError::Io(_) => EXIT_DOMAIN,
            CliError::Config(_) | CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
    Svg,
}

#[derive(Parser, Debug)]
#[command(name = "se2sr", version, about = "Sub-Riemannian geodesics on SE(2)")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the artifact to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Read angle arguments (`--theta`, `--gamma`) in degrees.
    #[arg(long, global = true)]
    degrees: bool,
    #[arg(long, global = true)]
    exp_tol: Option<f64>,
    #[arg(long, global = true)]
    solver_tol: Option<f64>,
    /// Samples per trajectory.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    max_starts: Option<usize>,
    /// Default grid size of the sampling commands.
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CovectorArgs {
    /// Pendulum angle (radians unless --degrees).
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
    /// Pendulum velocity.
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
}

#[derive(Args, Debug)]
struct PoseArgs {
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[arg(long, allow_negative_numbers = true)]
    y: f64,
    /// Heading (radians unless --degrees).
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Geodesic trajectory `Exp(lambda, s)` for `s` in `[0, t]`.
    Exp {
        #[command(flatten)]
        lambda: CovectorArgs,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// Optimal geodesics from the identity to a pose.
    Synth {
        #[command(flatten)]
        pose: PoseArgs,
        /// Report every optimal geodesic, not only the first.
        #[arg(long)]
        all: bool,
    },
    /// Sub-Riemannian distance from the identity.
    Dist {
        #[command(flatten)]
        pose: PoseArgs,
    },
    /// Cut time of a covector.
    Cuttime {
        #[command(flatten)]
        lambda: CovectorArgs,
    },
    /// First conjugate time of a covector.
    Conjtime {
        #[command(flatten)]
        lambda: CovectorArgs,
    },
    /// Boundary curves R11 and R12 of the cut locus on a theta grid.
    Cutlocus {
        #[arg(long)]
        n: Option<usize>,
    },
    /// First conjugate points over a covector grid.
    Caustic {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Sample of the sphere of radius R.
    Sphere {
        #[arg(long, allow_negative_numbers = true)]
        radius: f64,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Sample of the wavefront of radius R.
    Front {
        #[arg(long, allow_negative_numbers = true)]
        radius: f64,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Render a CSV produced by cutlocus, caustic, sphere or front as SVG.
    Plot {
        #[arg(long, value_enum)]
        section: Section,
        #[arg(long)]
        input: PathBuf,
        /// Slice angle of the sphere section.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        /// Half-width of the sphere slice.
        #[arg(long, default_value_t = 0.05)]
        band: f64,
    },
    /// Randomized invariant checks over all modules.
    Selftest {
        /// Multiplier on the default sample counts.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
}

struct Ctx {
    cfg: RunConfig,
    format: Option<Format>,
    degrees: bool,
}

impl Ctx {
    fn angle(&self, a: f64) -> f64 {
        if self.degrees {
            a.to_radians()
        } else {
            a
        }
    }

    fn covector(&self, a: &CovectorArgs) -> Covector {
        Covector::new(self.angle(a.gamma), a.c)
    }

    fn pose(&self, a: &PoseArgs) -> Pose {
        Pose::new(a.x, a.y, self.angle(a.theta))
    }

    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(CliError::Usage(format!(
                "format {} is not available here (use one of {})",
                name(f),
                allowed.iter().map(|f| name(*f)).collect::<Vec<_>>().join(", ")
            )))
        }
    }
}

fn name(f: Format) -> &'static str {
    match f {
        Format::Text => "text",
        Format::Csv => "csv",
        Format::Json => "json",
        Format::Svg => "svg",
    }
}

fn scalar(ctx: &Ctx, out: &mut dyn Write, key: &str, value: f64) -> Result<(), CliError> {
    match ctx.format(Format::Text, &[Format::Text, Format::Csv, Format::Json])? {
        Format::Text => writeln!(out, "{value}")?,
        Format::Csv => write_csv(out, [key], [[value]])?,
        _ => write_json(out, &BTreeMap::from([(key, value)]))?,
    }
    Ok(())
}

fn points(ctx: &Ctx, out: &mut dyn Write, meta: serde_json::Value, pts: &[Pose]) -> Result<(), CliError> {
    match ctx.format(Format::Csv, &[Format::Csv, Format::Json])? {
        Format::Csv => write_csv(out, POINT_HEADER, point_rows(pts))?,
        _ => {
            let mut v = meta;
            v["points"] = serde_json::to_value(points_json(pts)).map_err(std::io::Error::other)?;
            write_json(out, &v)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SolutionJson {
    gamma: f64,
    c: f64,
    t: f64,
    residual: f64,
    certified: bool,
    path: Vec<output::SampleJson>,
}

fn cut_locus_rows(n: usize) -> Result<Vec<[f64; 3]>, CliError> {
    // cell centres: both curves are undefined or infinite at theta = +-pi
    (0..n.max(2))
        .map(|i| {
            let th = -PI + 2.0 * PI * (i as f64 + 0.5) / n.max(2) as f64;
            Ok([th, r11_curve(th.abs())?, r12_curve(th.abs())?])
        })
        .collect()
}

fn execute(cmd: &Command, ctx: &Ctx, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    match cmd {
        Command::Exp { lambda, t } => {
            let l = ctx.covector(lambda);
            let traj = exp_trajectory_with_tol(l, *t, cfg.samples, cfg.exp_tol)?;
            match ctx.format(Format::Csv, &[Format::Csv, Format::Json])? {
                Format::Csv => write_csv(out, TRAJECTORY_HEADER, trajectory_rows(&traj))?,
                _ => write_json(
                    out,
                    &json!({"gamma": l.gamma(), "c": l.c(), "t": t, "samples": trajectory_json(&traj)}),
                )?,
            }
        }
        Command::Synth { pose, all } => {
            let q = ctx.pose(pose);
            let r = solve_with(q, &cfg.solver())?;
            let keep = if *all { r.solutions.len() } else { 1 };
            match ctx.format(Format::Json, &[Format::Json, Format::Csv])? {
                Format::Csv => {
                    if *all && r.solutions.len() > 1 {
                        return Err(CliError::Usage("--all needs --format json".into()));
                    }
                    write_csv(out, TRAJECTORY_HEADER, trajectory_rows(&r.solutions[0].trajectory))?;
                }
                _ => {
                    let sols: Vec<SolutionJson> = r
                        .solutions
                        .iter()
                        .take(keep)
                        .map(|s| SolutionJson {
                            gamma: s.lambda.gamma(),
                            c: s.lambda.c(),
                            t: s.t,
                            residual: s.endpoint_residual,
                            certified: s.certified,
                            path: trajectory_json(&s.trajectory),
                        })
                        .collect();
                    let multiplicity = match r.multiplicity {
                        Multiplicity::Unique => "unique",
                        Multiplicity::MaxwellPair => "maxwell_pair",
                    };
                    write_json(
                        out,
                        &json!({
                            "target": {"x": q.x, "y": q.y, "theta": q.theta},
                            "distance": r.distance,
                            "multiplicity": multiplicity,
                            "warning": r.warning,
                            "solutions": sols,
                        }),
                    )?;
                }
            }
        }
        Command::Dist { pose } => {
            let d = solve_with(ctx.pose(pose), &cfg.solver())?.distance;
            scalar(ctx, out, "distance", d)?;
        }
        Command::Cuttime { lambda } => scalar(ctx, out, "cut_time", cut_time(ctx.covector(lambda)))?,
        Command::Conjtime { lambda } => scalar(ctx, out, "conj_time", conj_time(ctx.covector(lambda))?)?,
        Command::Cutlocus { n } => {
            let rows = cut_locus_rows(n.unwrap_or(cfg.grid * 8))?;
            match ctx.format(Format::Csv, &[Format::Csv, Format::Json, Format::Svg])? {
                Format::Csv => write_csv(out, CUT_LOCUS_HEADER, rows)?,
                Format::Svg => {
                    let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
                    out.write_all(plot::cut_locus(&rows).as_bytes())?;
                }
                _ => {
                    let v: Vec<_> = rows.iter().map(|r| json!({"theta": r[0], "R11": r[1], "R12": r[2]})).collect();
                    write_json(out, &json!({ "rows": v }))?;
                }
            }
        }
        Command::Caustic { n } => {
            let pts = sample_caustic(n.unwrap_or(cfg.grid))?;
            points(ctx, out, json!({}), &pts)?;
        }
        Command::Sphere { radius, n } => {
            let pts = sample_sphere(*radius, n.unwrap_or(cfg.grid))?;
            points(ctx, out, json!({ "radius": radius }), &pts)?;
        }
        Command::Front { radius, n } => {
            let pts = sample_wavefront(*radius, n.unwrap_or(cfg.grid))?;
            points(ctx, out, json!({ "radius": radius }), &pts)?;
        }
        Command::Plot { section, input, theta, band } => {
            ctx.format(Format::Svg, &[Format::Svg])?;
            let text = std::fs::read_to_string(input)?;
            let svg = match section {
                Section::CutLocus => plot::cut_locus(&plot::read_table(&text, &CUT_LOCUS_HEADER)?),
                Section::Caustic => plot::caustic(&plot::read_table(&text, &POINT_HEADER)?),
                Section::Sphere => plot::sphere(&plot::read_table(&text, &POINT_HEADER)?, ctx.angle(*theta), *band),
            };
            out.write_all(svg.as_bytes())?;
        }
        Command::Selftest { scale } => {
            if !(*scale > 0.0) {
                return Err(CliError::Usage("--scale must be positive".into()));
            }
            let reports = selftest::run(&SelftestConfig { seed: cfg.seed, scale: *scale });
            match ctx.format(Format::Text, &[Format::Text, Format::Json])? {
                Format::Text => {
                    for r in &reports {
                        let status = if r.passed { "PASS" } else { "FAIL" };
                        writeln!(out, "{status} {}: {} samples, worst {:.3e} (bound {:.0e})", r.name, r.samples, r.worst, r.bound)?;
                    }
                }
                _ => {
                    let v: Vec<_> = reports
                        .iter()
                        .map(|r| json!({"name": r.name, "passed": r.passed, "samples": r.samples, "worst": r.worst, "bound": r.bound}))
                        .collect();
                    write_json(out, &json!({ "checks": v }))?;
                }
            }
            let failed: Vec<_> = reports.iter().filter(|r| !r.passed).map(|r| r.name).collect();
            if !failed.is_empty() {
                return Err(CliError::Selftest(failed.join(", ")));
            }
        }
    }
    Ok(())
}

fn configure(cli: &Cli, env: &BTreeMap<String, String>) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    cfg.apply_env(env)?;
    cfg.apply_overrides(&Overrides {
        exp_tol: cli.exp_tol,
        solver_tol: cli.solver_tol,
        samples: cli.samples,
        max_starts: cli.max_starts,
        grid: cli.grid,
        seed: cli.seed,
    });
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the command line `args` (including the program name) with the given
/// environment and returns the exit code.
pub fn run<I, T>(args: I, env: &BTreeMap<String, String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = configure(&cli, env).and_then(|cfg| {
        let ctx = Ctx { cfg, format: cli.format, degrees: cli.degrees };
        let mut buf = Vec::new();
        let r = execute(&cli.command, &ctx, &mut buf);
        // partial output is still useful for a failing self-test report
        match &cli.out {
            Some(path) => std::fs::write(path, &buf)?,
            None => stdout.write_all(&buf)?,
        }
        r
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "se2sr: {e}");
            e.exit_code()
        }
    }
}
