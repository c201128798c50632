//! Command-line surface. Every command prints one JSON report to stdout;
//! diagnostics go to stderr. Exit codes: 0 computed and asserted checks
//! passed, 1 computed but a check failed (the report carries witnesses),
//! 2 usage or input error.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::analysis::{analyze_map, bound_check_isosceles, geometry_report, LinearMap};
use crate::constructions::thalesian_decompose;
use crate::derivatives::{numeric_one_sided, rho, rho_minus, rho_plus, rho_star, Branch};

use crate::error::{Error, Result};
use crate::norms::NormedSpace;
use crate::orthogonality::{is_orthogonal, sample_orthogonal_set, Flavor};
use crate::report::to_json_string;
use crate::suite::{default_norm_table, load_norm_table, run_suite, Profile};
use crate::vector::{Seed, Tolerance, Vector};

#[derive(Parser)]
#[command(
    name = "rhostar",
    version,
    about = "Norm derivatives and orthogonality relations in finite-dimensional real normed spaces",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    /// Absolute tolerance for residual decisions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    abs_tol: f64,
    /// Relative tolerance for residual decisions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    rel_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate rho_-, rho_+, rho and rho_star for a vector pair.
    Eval {
        /// Norm: l1 | linf | lp:<p> | wlp:<p>:<w1,...> | poly:<path.csv> | polyrows:<...>
        #[arg(long)]
        norm: String,
        #[arg(long)]
        dim: usize,
        /// Comma-separated coordinates, or @path to read them from a file.
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Also evaluate the defining limits numerically as a cross-check.
        #[arg(long)]
        numeric: bool,
    },
    /// Decide an orthogonality relation; exits 1 when it does not hold.
    Orth {
        #[arg(long)]
        norm: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// One of b, i, rho_minus, rho_plus, rho, rho_star, s.
        #[arg(long)]
        flavor: String,
        /// First spanning vector of a 2-D section: scan the residual profile
        /// over directions cos(theta) u + sin(theta) v. Requires --scan-v.
        #[arg(long)]
        scan_u: Option<String>,
        /// Second spanning vector of the section.
        #[arg(long)]
        scan_v: Option<String>,
        /// Angular grid resolution of the scan.
        #[arg(long, default_value_t = 64)]
        resolution: usize,
    },
    /// Thalesian decomposition: y with x perp y and x+y perp lambda*x-y
    /// in the rho_star sense; exits 1 when the residuals fail.
    Decompose {
        #[arg(long)]
        norm: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        x: String,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Operator analysis: norm estimates, similarity, rho_star preservation,
    /// scaling residual and the isosceles bound; exits 1 when preservation
    /// fails.
    MapAnalyze {
        #[arg(long)]
        norm: String,
        #[arg(long)]
        dim: usize,
        /// Row-major matrix entries (rows = codomain dim), or @path.
        #[arg(long)]
        matrix: String,
        /// Codomain norm; defaults to --norm.
        #[arg(long)]
        to_norm: Option<String>,
        /// Codomain dimension; defaults to --dim.
        #[arg(long)]
        to_dim: Option<usize>,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Smoothness classification with relation-inclusion tables.
    Smoothness {
        #[arg(long)]
        norm: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Parallelogram-law delta estimate and moduli of convexity/smoothness.
    Geometry {
        #[arg(long)]
        norm: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "0.5,1.0,1.5,2.0")]
        eps_grid: String,
        #[arg(long, default_value = "0.1,0.25,0.5,1.0")]
        t_grid: String,
    },
    /// Norm-equivalence constants and the rho_star comparison bound;
    /// exits 1 when the corrected bound fails.
    CompareNorms {
        #[arg(long)]
        norm1: String,
        #[arg(long)]
        norm2: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the seeded property suite; exits 1 when any property fails.
    Suite {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// quick or full.
        #[arg(long, default_value = "quick")]
        profile: String,
        /// JSON norm table overriding the built-in one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version to stdout with exit 0, usage errors
            // to stderr with exit 2
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let tol = Tolerance {
        abs_tol: cli.abs_tol,
        rel_tol: cli.rel_tol,
        ..Tolerance::default()
    };
    match execute(&cli.command, &tol, started) {
        Ok((report, code)) => {
            println!("{}", to_json_string(&report));
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn parse_vector_arg(flag: &str, raw: &str, dim: usize) -> Result<Vector> {
    let coords = parse_floats_arg(flag, raw)?;
    let v = Vector::new(coords).map_err(|e| Error::Parse(format!("--{flag}: {e}")))?;
    if v.dim() != dim {
        return Err(Error::Parse(format!(
            "--{flag}: expected {dim} coordinates, got {}",
            v.dim()
        )));
    }
    Ok(v)
}

fn parse_floats_arg(flag: &str, raw: &str) -> Result<Vec<f64>> {
    let text = if let Some(path) = raw.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("--{flag}: cannot read {path}: {e}")))?
    } else {
        raw.to_string()
    };
    text.split([',', ' ', '\n', '\t'])
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("--{flag}: bad float {s:?}: {e}")))
        })
        .collect()
}

fn parse_space(flag: &str, grammar: &str, dim: usize) -> Result<NormedSpace> {
    NormedSpace::parse(grammar, dim).map_err(|e| Error::Parse(format!("--{flag}: {e}")))
}

fn assemble(
    command: &str,
    inputs: Value,
    results: Value,
    residuals: Value,
    tol: &Tolerance,
    seed: Option<u64>,
    started: Instant,
) -> Value {
    json!({
        "command": command,
        "inputs": inputs,
        "results": results,
        "residuals": residuals,
        "tolerances": serde_json::to_value(tol).expect("tolerance"),
        "seed": seed,
        "wall_time_ms": started.elapsed().as_secs_f64() * 1e3,
    })
}

fn execute(command: &Command, tol: &Tolerance, started: Instant) -> Result<(Value, i32)> {
    match command {
        Command::Eval {
            norm,
            dim,
            x,
            y,
            numeric,
        } => {
            let space = parse_space("norm", norm, *dim)?;
            let xv = parse_vector_arg("x", x, *dim)?;
            let yv = parse_vector_arg("y", y, *dim)?;
            let minus = rho_minus(&space, &xv, &yv)?;
            let plus = rho_plus(&space, &xv, &yv)?;
            let mut results = json!({
                "rho_minus": minus,
                "rho_plus": plus,
                "rho": rho(&space, &xv, &yv)?,
                "rho_star": rho_star(&space, &xv, &yv)?,
                "norm_x": space.norm(&xv)?,
                "norm_y": space.norm(&yv)?,
            });
            if *numeric {
                let nm = numeric_one_sided(&space, &xv, &yv, Branch::Minus, tol)?;
                let np = numeric_one_sided(&space, &xv, &yv, Branch::Plus, tol)?;
                results["numeric_rho_minus"] = serde_json::to_value(&nm)?;
                results["numeric_rho_plus"] = serde_json::to_value(&np)?;
            }
            let inputs = json!({"norm": norm, "dim": dim, "x": xv, "y": yv, "numeric": numeric});
            Ok((
                assemble("eval", inputs, results, json!({}), tol, None, started),
                0,
            ))
        }
        Command::Orth {
            norm,
            dim,
            x,
            y,
            flavor,
            scan_u,
            scan_v,
            resolution,
        } => {
            let space = parse_space("norm", norm, *dim)?;
            let xv = parse_vector_arg("x", x, *dim)?;
            let yv = parse_vector_arg("y", y, *dim)?;
            let fl: Flavor = flavor
                .parse()
                .map_err(|e| Error::Parse(format!("--flavor: {e}")))?;
            let verdict = is_orthogonal(&space, &xv, &yv, fl, tol)?;
            let code = if verdict.holds { 0 } else { 1 };
            let mut results = serde_json::to_value(&verdict)?;
            match (scan_u, scan_v) {
                (Some(u), Some(vv)) => {
                    let uv = parse_vector_arg("scan-u", u, *dim)?;
                    let vvv = parse_vector_arg("scan-v", vv, *dim)?;
                    let scan =
                        sample_orthogonal_set(&space, &xv, &uv, &vvv, fl, *resolution, tol)?;
                    let angles: Vec<f64> = scan.samples.iter().map(|s| s.angle).collect();
                    let profile: Vec<f64> =
                        scan.samples.iter().map(|s| s.signed_residual).collect();
                    results["scan"] = json!({
                        "angles": angles,
                        "signed_residuals": profile,
                        "zero_cells": scan.zero_cells,
                    });
                }
                (None, None) => {}
                _ => {
                    return Err(Error::Parse(
                        "--scan-u and --scan-v must be given together".into(),
                    ))
                }
            }
            let inputs = json!({"norm": norm, "dim": dim, "x": xv, "y": yv, "flavor": fl.name()});
            let residuals = json!({"residual": verdict.residual, "scale": verdict.scale});
            Ok((
                assemble("orth", inputs, results, residuals, tol, None, started),
                code,
            ))
        }
        Command::Decompose {
            norm,
            dim,
            x,
            lambda,
            seed,
        } => {
            let space = parse_space("norm", norm, *dim)?;
            let xv = parse_vector_arg("x", x, *dim)?;
            if !(lambda.is_finite() && *lambda >= 0.0) {
                return Err(Error::Parse("--lambda: must be finite and >= 0".into()));
            }
            let d = thalesian_decompose(&space, &xv, *lambda, Seed(*seed), tol)?;
            let code = if d.holds { 0 } else { 1 };
            let inputs = json!({"norm": norm, "dim": dim, "x": xv, "lambda": lambda});
            let residuals = json!({
                "first": d.residual_first,
                "second": d.residual_second,
                "scale_first": d.scale_first,
                "scale_second": d.scale_second,
            });
            Ok((
                assemble(
                    "decompose",
                    inputs,
                    serde_json::to_value(&d)?,
                    residuals,
                    tol,
                    Some(*seed),
                    started,
                ),
                code,
            ))
        }
        Command::MapAnalyze {
            norm,
            dim,
            matrix,
            to_norm,
            to_dim,
            samples,
            seed,
        } => {
            let domain = parse_space("norm", norm, *dim)?;
            let out_dim = to_dim.unwrap_or(*dim);
            let codomain = match to_norm {
                Some(g) => parse_space("to-norm", g, out_dim)?,
                None => parse_space("norm", norm, out_dim)?,
            };
            let entries = parse_floats_arg("matrix", matrix)?;
            if entries.len() != out_dim * dim {
                return Err(Error::Parse(format!(
                    "--matrix: expected {} row-major entries ({out_dim}x{dim}), got {}",
                    out_dim * dim,
                    entries.len()
                )));
            }
            let rows: Vec<Vec<f64>> = entries.chunks(*dim).map(|c| c.to_vec()).collect();
            let map = LinearMap::new(rows, domain, codomain)?;
            let analysis = analyze_map(&map, *samples, Seed(*seed), tol)?;
            let bound = bound_check_isosceles(&map, *samples, Seed(*seed), tol)?;
            let code = if analysis.preserves_rho_star.holds { 0 } else { 1 };
            let inputs = json!({
                "norm": norm, "dim": dim, "matrix": entries,
                "to_norm": to_norm, "to_dim": to_dim, "samples": samples,
            });
            let residuals = json!({
                "similarity": analysis.similarity.residual,
                "preserves_rho_star": analysis.preserves_rho_star.residual,
                "scaling": analysis.scaling_residual,
            });
            let results = json!({
                "analysis": analysis,
                "isosceles_bound": bound,
            });
            Ok((
                assemble("map-analyze", inputs, results, residuals, tol, Some(*seed), started),
                code,
            ))
        }
        Command::Smoothness {
            norm,
            dim,
            samples,
            seed,
        } => {
            let space = parse_space("norm", norm, *dim)?;
            let report = crate::analysis::smoothness_report(&space, *samples, Seed(*seed), tol)?;
            let inputs = json!({"norm": norm, "dim": dim, "samples": samples});
            let residuals = json!({
                "max_gap": report.smooth.residual,
                "scale": report.smooth.scale,
            });
            Ok((
                assemble(
                    "smoothness",
                    inputs,
                    serde_json::to_value(&report)?,
                    residuals,
                    tol,
                    Some(*seed),
                    started,
                ),
                0,
            ))
        }
        Command::Geometry {
            norm,
            dim,
            samples,
            seed,
            eps_grid,
            t_grid,
        } => {
            let space = parse_space("norm", norm, *dim)?;
            let eps = parse_floats_arg("eps-grid", eps_grid)?;
            let ts = parse_floats_arg("t-grid", t_grid)?;
            let report = geometry_report(&space, &eps, &ts, *samples, Seed(*seed))?;
            let inputs = json!({
                "norm": norm, "dim": dim, "samples": samples,
                "eps_grid": eps, "t_grid": ts,
            });
            let residuals = json!({"delta_min_feasible": report.delta.delta_min_feasible});
            Ok((
                assemble(
                    "geometry",
                    inputs,
                    serde_json::to_value(&report)?,
                    residuals,
                    tol,
                    Some(*seed),
                    started,
                ),
                0,
            ))
        }
        Command::CompareNorms {
            norm1,
            norm2,
            dim,
            samples,
            seed,
        } => {
            let s1 = parse_space("norm1", norm1, *dim)?;
            let s2 = parse_space("norm2", norm2, *dim)?;
            let report = crate::analysis::norm_comparison_alpha(&s1, &s2, *samples, Seed(*seed))?;
            let code = if report.bound_holds.holds { 0 } else { 1 };
            let inputs = json!({"norm1": norm1, "norm2": norm2, "dim": dim, "samples": samples});
            let residuals = json!({
                "bound_violation": report.bound_holds.residual,
                "proportionality": report.proportional.residual,
            });
            Ok((
                assemble(
                    "compare-norms",
                    inputs,
                    serde_json::to_value(&report)?,
                    residuals,
                    tol,
                    Some(*seed),
                    started,
                ),
                code,
            ))
        }
        Command::Suite {
            seed,
            profile,
            table,
        } => {
            let profile: Profile = profile
                .parse()
                .map_err(|e| Error::Parse(format!("--profile: {e}")))?;
            let entries = match table {
                Some(path) => load_norm_table(path)?,
                None => default_norm_table(),
            };
            let report = run_suite(Seed(*seed), profile, &entries)?;
            let code = if report.all_pass { 0 } else { 1 };
            for p in &report.properties {
                eprintln!(
                    "{} {} (worst residual {:.3e})",
                    if p.pass { "PASS" } else { "FAIL" },
                    p.name,
                    p.worst_residual
                );
            }
            let inputs = json!({
                "profile": profile.name(),
                "table": entries,
            });
            let residuals = json!({});
            Ok((
                assemble(
                    "suite",
                    inputs,
                    serde_json::to_value(&report)?,
                    residuals,
                    tol,
                    Some(*seed),
                    started,
                ),
                code,
            ))
        }
    }
}
