//! The `prolate` command line.

pub mod config;

use std::io::Write;

use clap::{Parser, Subcommand};
use num_complex::Complex64 as C64;
use serde::Serialize;

use prolate_core::boundary_algebra::{
    boundary_condition_matrix, boundary_kernel, self_orthogonality_residual, subspace_from_unitary, UnitaryMatrix2,
};
use prolate_core::endpoint_forms::{boundary_values_from_samples, BoundaryValues, Endpoint};
use prolate_core::extension_solver::{default_window, eigenvalues_scan_with, ScanOptions};
use prolate_core::legendre::prolate_spectrum;
use prolate_core::report::{
    boundary_residual, csv_string, format_sig, galerkin_report, read_samples, shooting_report, to_json,
};
use prolate_core::verify::run_all;
use prolate_core::{Error, Result};

use config::{Flags, Format, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECKS_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Points at which `pswf` samples eigenfunctions.
pub const PSWF_SAMPLES: usize = 201;

#[derive(Debug, Parser)]
#[command(
    name = "prolate",
    version,
    about = "Self-adjoint extensions of the prolate operator on (-a, a)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues of the extension L_U.
    Spectrum,
    /// Eigenvalues and sampled eigenfunctions of the distinguished extension (prolate spheroidal wave functions).
    Pswf,
    /// Boundary values (b, c) at both endpoints of a sampled function.
    Boundary {
        /// CSV file with columns t,re[,im].
        input: std::path::PathBuf,
    },
    /// Run the invariant checks of every module.
    Verify,
    /// Print B(U) and the basis of the boundary subspace for U.
    Classify,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: String,
    exit_code: i32,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INVALID
    }
}

fn wants_csv(args: &[String]) -> bool {
    args.windows(2).any(|w| w[0] == "--format" && w[1] == "csv") || args.iter().any(|a| a == "--format=csv")
}

fn report_error(e: &Error, format: Format) -> i32 {
    let code = exit_code(e);
    match format {
        Format::Json => {
            let r = ErrorReport {
                error: e.kind(),
                message: e.to_string(),
                exit_code: code,
            };
            eprintln!("{}", serde_json::to_string(&r).expect("error report serializes"));
        }
        Format::Csv => eprintln!("error: {} ({})", e, e.kind()),
    }
    code
}

/// Parse `argv` (program name first), run, and return the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let args: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            if wants_csv(&args) {
                eprint!("{e}");
            } else {
                let r = ErrorReport {
                    error: "InvalidArguments",
                    message: e.kind().to_string(),
                    exit_code: EXIT_INVALID,
                };
                eprintln!("{}", serde_json::to_string(&r).expect("error report serializes"));
                eprint!("{}", e.render());
            }
            return EXIT_INVALID;
        }
    };
    let fallback = cli
        .flags
        .format
        .unwrap_or(if wants_csv(&args) { Format::Csv } else { Format::Json });
    let cfg = match cli.flags.resolve() {
        Ok(c) => c,
        Err(e) => return report_error(&e, fallback),
    };
    match run(&cli.command, &cfg) {
        Ok((text, code)) => match emit(&cfg, &text) {
            Ok(()) => code,
            Err(e) => report_error(&e, cfg.format),
        },
        Err(e) => report_error(&e, cfg.format),
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::InvalidInput(e.to_string()))
        }
    }
}

fn run(cmd: &Command, cfg: &RunConfig) -> Result<(String, i32)> {
    match cmd {
        Command::Spectrum => spectrum(cfg).map(|s| (s, EXIT_OK)),
        Command::Pswf => pswf(cfg).map(|s| (s, EXIT_OK)),
        Command::Boundary { input } => {
            let text =
                std::fs::read_to_string(input).map_err(|e| Error::InvalidInput(format!("{}: {e}", input.display())))?;
            boundary(cfg, &text).map(|s| (s, EXIT_OK))
        }
        Command::Verify => verify(cfg),
        Command::Classify => classify(cfg).map(|s| (s, EXIT_OK)),
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

/// `spectrum`: Galerkin for `U = I`, shooting otherwise.
pub fn spectrum(cfg: &RunConfig) -> Result<String> {
    let (a, n) = (cfg.a, cfg.n_modes);
    let explicit = cfg.range.0.is_some() || cfg.range.1.is_some();
    let (dlo, dhi) = default_window(a, n);
    let (lo, hi) = (cfg.range.0.unwrap_or(dlo), cfg.range.1.unwrap_or(dhi));
    if lo >= hi {
        return Err(Error::InvalidInput(format!("empty range [{lo}, {hi}]")));
    }
    let report = if cfg.unitary.is_identity(1e-14) {
        let mut pairs = prolate_spectrum(cfg.truncation_for(n), a, n)?;
        if explicit {
            // all Galerkin eigenvalues in the window, extending the mode count as needed
            let mut m = n;
            while pairs.last().is_some_and(|p| p.lambda < hi) {
                m *= 2;
                pairs = prolate_spectrum(cfg.truncation_for(m), a, m)?;
            }
            pairs.retain(|p| p.lambda >= lo && p.lambda <= hi);
        }
        galerkin_report(a, &pairs)
    } else {
        let opts = ScanOptions {
            tol: cfg.tol("scan"),
            double_root_tol: cfg.tol("double_root"),
            ..ScanOptions::default()
        };
        let mut found = eigenvalues_scan_with(&cfg.unitary, a, lo, hi, &opts)?;
        if !explicit {
            let mut count = 0usize;
            found.retain(|e| {
                let keep = count < n;
                count += e.multiplicity as usize;
                keep
            });
        }
        shooting_report(opts.op, &cfg.unitary, a, &found)?
    };
    Ok(match cfg.format {
        Format::Json => with_newline(to_json(&report)?),
        Format::Csv => report.to_csv(),
    })
}

#[derive(Serialize)]
struct PswfReport {
    a: f64,
    truncation: usize,
    eigenvalues: Vec<f64>,
    residuals: Vec<f64>,
    t: Vec<f64>,
    /// `eigenfunctions[k][i]` is `chi_{k+1}(t[i])`, unit `L^2` norm, first nonzero Legendre coefficient positive.
    eigenfunctions: Vec<Vec<f64>>,
}

/// `pswf`: certified eigenpairs and eigenfunctions on `PSWF_SAMPLES` equispaced points.
pub fn pswf(cfg: &RunConfig) -> Result<String> {
    let (a, n) = (cfg.a, cfg.n_modes);
    let truncation = cfg.truncation_for(n);
    let pairs = prolate_spectrum(truncation, a, n)?;
    let t: Vec<f64> = (0..PSWF_SAMPLES)
        .map(|i| -a + 2.0 * a * i as f64 / (PSWF_SAMPLES - 1) as f64)
        .collect();
    match cfg.format {
        Format::Json => {
            let r = PswfReport {
                a,
                truncation,
                eigenvalues: pairs.iter().map(|p| p.lambda).collect(),
                residuals: pairs.iter().map(|p| p.residual).collect(),
                eigenfunctions: pairs
                    .iter()
                    .map(|p| t.iter().map(|&s| p.eigenfunction.eval(s).re).collect())
                    .collect(),
                t,
            };
            Ok(with_newline(to_json(&r)?))
        }
        Format::Csv => Ok(csv_string(
            &["k", "lambda", "t", "chi"],
            pairs.iter().enumerate().flat_map(|(k, p)| {
                t.iter()
                    .map(move |&s| vec![(k + 1) as f64, p.lambda, s, p.eigenfunction.eval(s).re])
            }),
        )),
    }
}

#[derive(Serialize)]
struct BoundaryReport {
    a: f64,
    #[serde(rename = "U")]
    unitary: UnitaryMatrix2,
    boundary_values: BoundaryValues,
    /// `|B(U) q| / |B(U)|`; zero when the sampled function satisfies the boundary condition of `U`.
    residual: f64,
}

/// `boundary`: fit `(b, c)` at both endpoints from CSV samples `t,re[,im]`.
pub fn boundary(cfg: &RunConfig, text: &str) -> Result<String> {
    let (t, x) = read_samples(text)?;
    let a = cfg.a;
    if let Some(bad) = t.iter().find(|s| !(s.abs() < a)) {
        return Err(Error::InvalidInput(format!("sample point {bad} outside (-{a}, {a})")));
    }
    let mut bv = BoundaryValues::default();
    for ep in [Endpoint::MinusA, Endpoint::PlusA] {
        let (b, c) = boundary_values_from_samples(&t, &x, ep, a)?;
        bv.set(ep, b, c);
    }
    let residual = boundary_residual(&cfg.unitary, &bv);
    match cfg.format {
        Format::Json => Ok(with_newline(to_json(&BoundaryReport {
            a,
            unitary: cfg.unitary,
            boundary_values: bv,
            residual,
        })?)),
        Format::Csv => Ok(csv_string(
            &["endpoint", "b_re", "b_im", "c_re", "c_im"],
            [(-1.0, bv.b_minus, bv.c_minus), (1.0, bv.b_plus, bv.c_plus)]
                .map(|(e, b, c)| vec![e * a, b.re, b.im, c.re, c.im]),
        )),
    }
}

/// `verify`: exit 0 when every check passes, 1 otherwise.
pub fn verify(cfg: &RunConfig) -> Result<(String, i32)> {
    let report = run_all(cfg.a);
    for c in report.failures() {
        eprintln!("FAIL {}: {} {} {} {}", c.id, c.value, c.relation, c.tolerance, c.detail);
    }
    let code = if report.passed { EXIT_OK } else { EXIT_CHECKS_FAILED };
    let text = match cfg.format {
        Format::Json => with_newline(to_json(&report)?),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::InvalidInput(e.to_string());
            w.write_record(["id", "passed", "value", "relation", "tolerance", "detail"])
                .map_err(io)?;
            for c in &report.checks {
                w.write_record([
                    c.id.clone(),
                    c.passed.to_string(),
                    format_sig(c.value),
                    c.relation.clone(),
                    format_sig(c.tolerance),
                    c.detail.clone(),
                ])
                .map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?).expect("utf-8 csv")
        }
    };
    Ok((text, code))
}

#[derive(Serialize)]
struct ClassifyReport {
    #[serde(rename = "U")]
    unitary: UnitaryMatrix2,
    /// Rows of `B(U)` acting on `(b_-a, c_-a, b_a, c_a)`.
    boundary_matrix: Vec<Vec<C64>>,
    /// `v^1(U), v^2(U)` in `(alpha_-, beta_-, alpha_+, beta_+)` coordinates.
    subspace: Vec<Vec<C64>>,
    self_orthogonality_residual: f64,
    /// Orthonormal basis of `ker B(U)`: boundary values admitted by the extension.
    admissible_boundary_values: Vec<Vec<C64>>,
}

/// `classify`: `B(U)`, the subspace basis and the admissible boundary values.
pub fn classify(cfg: &RunConfig) -> Result<String> {
    let u = cfg.unitary;
    let b = boundary_condition_matrix(&u);
    let s = subspace_from_unitary(&u);
    let r = ClassifyReport {
        unitary: u,
        boundary_matrix: (0..2).map(|i| (0..4).map(|j| b[(i, j)]).collect()).collect(),
        subspace: {
            let (v1, v2) = s.vectors();
            [v1, v2]
        }
        .iter()
        .map(|v| v.as_array().to_vec())
        .collect(),
        self_orthogonality_residual: self_orthogonality_residual(&s),
        admissible_boundary_values: boundary_kernel(&u).iter().map(|q| q.to_vec()).collect(),
    };
    match cfg.format {
        Format::Json => Ok(with_newline(to_json(&r)?)),
        Format::Csv => {
            let rows = r
                .boundary_matrix
                .iter()
                .enumerate()
                .map(|(i, row)| (0.0, i, row))
                .chain(r.subspace.iter().enumerate().map(|(i, row)| (1.0, i, row)))
                .chain(
                    r.admissible_boundary_values
                        .iter()
                        .enumerate()
                        .map(|(i, row)| (2.0, i, row)),
                )
                .flat_map(|(kind, i, row)| {
                    row.iter()
                        .enumerate()
                        .map(move |(j, z)| vec![kind, (i + 1) as f64, (j + 1) as f64, z.re, z.im])
                })
                .collect::<Vec<_>>();
            Ok(csv_string(&["block", "row", "col", "re", "im"], rows))
        }
    }
}
