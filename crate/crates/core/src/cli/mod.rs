//! `gfl` command line.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 when a certificate or
//! lemma check fails on valid input.

mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bspline::bspline;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::obstruction::{certify_conj1, certify_conj2, hat, verify_certificate, ObstructionCertificate};
use crate::scanner::{scan_region, sweep_hyperbola_conj1, sweep_hyperbola_conj2, write_csv, ScanConfig, ScanRegion};

pub use report::{lemma_report, Check, LemmaReport, Status};

#[derive(Debug, Parser)]
#[command(name = "gfl", version, about = "Exact non-frame certificates and frame-set scans for B-spline Gabor systems")]
pub struct Cli {
    /// Write results to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and verify an exact non-frame certificate.
    Certify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), required_unless_present = "verify")]
        conjecture: Option<u8>,
        #[arg(long, required_unless_present = "verify")]
        m: Option<u32>,
        #[arg(long, required_unless_present = "verify")]
        k: Option<u32>,
        /// Time shift for conjecture 1; defaults to 1/(2m+1).
        #[arg(long, value_parser = parse_rational)]
        a: Option<Rational>,
        /// Re-check a certificate JSON file instead of building one.
        #[arg(long, conflicts_with_all = ["conjecture", "m", "k", "a"])]
        verify: Option<PathBuf>,
    },
    /// Check the lemma identities for one parameter pair.
    Lemmas {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = parse_rational)]
        a: Option<Rational>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        conjecture: u8,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Scan a rectangle of lattice parameters.
    Scan {
        /// LO:HI:STEPS for a.
        #[arg(long, value_parser = parse_range)]
        a: (Rational, Rational, usize),
        /// LO:HI:STEPS for b.
        #[arg(long, value_parser = parse_range)]
        b: (Rational, Rational, usize),
        #[arg(long, default_value_t = 64)]
        cap: u64,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Sweep one of the obstruction hyperbolas.
    Hyperbola {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        conjecture: u8,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate the B-spline of the given order exactly.
    Eval {
        #[arg(long)]
        order: u32,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        x: Rational,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    Rational::parse(s).map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> std::result::Result<(Rational, Rational, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, steps] = parts.as_slice() else {
        return Err(format!("expected LO:HI:STEPS, got {s:?}"));
    };
    let steps: usize = steps.trim().parse().map_err(|_| format!("bad step count {steps:?}"))?;
    if steps == 0 {
        return Err("step count must be positive".into());
    }
    Ok((parse_rational(lo)?, parse_rational(hi)?, steps))
}

/// Outcome of a command: text to emit and the exit code it implies.
struct Output {
    body: String,
    code: i32,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, code: 0 }
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn require_format(format: Format, allowed: &[Format], command: &str) -> Result<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{command} does not support --format {format:?}").to_lowercase()))
    }
}

fn execute(command: Command) -> Result<Output> {
    match command {
        Command::Certify {
            conjecture,
            m,
            k,
            a,
            verify,
        } => {
            if let Some(path) = verify {
                let cert: ObstructionCertificate = serde_json::from_str(&fs::read_to_string(path)?)?;
                let ok = verify_certificate(&cert);
                let body = json(&serde_json::json!({ "verified": ok }))?;
                return Ok(Output {
                    body,
                    code: if ok { 0 } else { 1 },
                });
            }
            let (conjecture, m, k) = (conjecture.unwrap_or(1), m.unwrap_or(0), k.unwrap_or(0));
            let cert = match conjecture {
                1 => {
                    let a = a.unwrap_or_else(|| Rational::frac(1, 2 * i64::from(m) + 1));
                    certify_conj1(m, k, &a)?
                }
                _ => {
                    if a.is_some() {
                        return Err(Error::InvalidParams("--a does not apply to conjecture 2".into()));
                    }
                    certify_conj2(m, k)?
                }
            };
            Ok(Output::ok(json(&cert)?))
        }
        Command::Lemmas {
            m,
            k,
            a,
            conjecture,
            format,
        } => {
            require_format(format, &[Format::Text, Format::Json], "lemmas")?;
            let rep = lemma_report(conjecture, m, k, a)?;
            let body = if format == Format::Json { json(&rep)? } else { rep.to_text() };
            Ok(Output {
                body,
                code: if rep.all_passed { 0 } else { 2 },
            })
        }
        Command::Scan {
            a,
            b,
            cap,
            grid,
            format,
        } => {
            require_format(format, &[Format::Csv, Format::Json], "scan")?;
            let region = ScanRegion {
                a_min: a.0,
                a_max: a.1,
                a_steps: a.2,
                b_min: b.0,
                b_max: b.1,
                b_steps: b.2,
                grid_n: grid,
                rational_denominator_cap: cap,
            };
            let records = scan_region(hat(), &region, &ScanConfig::default())?;
            log::info!("scan finished: {} records", records.len());
            records_body(&records, format).map(Output::ok)
        }
        Command::Hyperbola {
            conjecture,
            m,
            k,
            samples,
            grid,
            format,
        } => {
            if conjecture == 1 {
                require_format(format, &[Format::Json], "hyperbola --conjecture 1")?;
                let certs = sweep_hyperbola_conj1(m, k, samples)?;
                log::info!("hyperbola sweep finished: {} certificates", certs.len());
                Ok(Output::ok(json(&certs)?))
            } else {
                require_format(format, &[Format::Csv, Format::Json], "hyperbola --conjecture 2")?;
                if grid == 0 {
                    return Err(Error::InvalidParams("grid must be positive".into()));
                }
                let records = sweep_hyperbola_conj2(m, k, samples, grid, &ScanConfig::default())?;
                log::info!("hyperbola sweep finished: {} records", records.len());
                records_body(&records, format).map(Output::ok)
            }
        }
        Command::Eval { order, x, format } => {
            require_format(format, &[Format::Text, Format::Json], "eval")?;
            let value = bspline(order)?.eval_exact(&x);
            let body = if format == Format::Json {
                json(&serde_json::json!({ "order": order, "x": x, "value": value }))?
            } else {
                format!("{value}\n")
            };
            Ok(Output::ok(body))
        }
    }
}

fn records_body(records: &[crate::scanner::ScanRecord], format: Format) -> Result<String> {
    if format == Format::Json {
        return json(&records);
    }
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CertificateFailed { .. } | Error::LemmaViolation(_) => 2,
        _ => 1,
    }
}

fn configure_threads() {
    let Ok(value) = std::env::var("GFL_THREADS") else { return };
    match value.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
                log::debug!("thread pool already configured");
            }
        }
        _ => log::warn!("ignoring GFL_THREADS={value:?}"),
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    configure_threads();
    let output = match execute(cli.command) {
        Ok(output) => output,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::CertificateFailed { matrix, .. } = &e {
                if let Ok(m) = serde_json::to_string(matrix) {
                    eprintln!("matrix: {m}");
                }
            }
            return exit_code(&e);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &output.body),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(output.body.as_bytes()).and_then(|_| stdout.flush())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 1;
    }
    output.code
}
