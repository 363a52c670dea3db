//! `tricontract` command-line front-end.
//!
//! Exit status: 0 for a contraction or plain success, 1 when the input is
//! not a contraction (or fuzzing found a disagreement), 2 on any error.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use tricontract::criteria::{beta_disk_3x3, check_contraction_3x3, check_contraction_4x4, gamma_disk, Disk};
use tricontract::fuzz::{run_fuzz, Distribution};
use tricontract::json::{dense_value, parse_document, parse_matrix, parse_matrix_without_corner, record_value, Record};
use tricontract::mobius::{mobius_transform_dense, mobius_transform_triangular};
use tricontract::parrott::gamma_disk_via_parrott;
use tricontract::{is_contraction_oracle, operator_norm, ComplexScalar, Tolerances, Verdict};

/// Largest disagreement tolerated between the closed-form disk and the one
/// obtained by completing the Möbius image.
const CROSS_CHECK_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "tricontract", version, about = "Contraction tests for small upper-triangular complex matrices")]
struct Cli {
    /// Band for equality conditions such as |omega| = 1.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_boundary: f64,
    /// Eigenvalue floor for semidefiniteness.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_psd: f64,
    /// Slack allowed below zero on inequality residuals.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_residual: f64,
    /// Emit a single JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a 3x3 or 4x4 record is a contraction.
    Check {
        /// JSON record, or `-` for stdin.
        file: PathBuf,
        /// Reject records of any other size.
        #[arg(long, value_parser = ["3", "4"])]
        size: Option<String>,
    },
    /// Admissible corner entries for a record whose corner is omitted.
    Disk {
        file: PathBuf,
        /// Recompute the 4x4 disk by corner completion of the Möbius image.
        #[arg(long)]
        cross_check: bool,
    },
    /// Compare the 4x4 criterion with the eigenvalue oracle on random input.
    Fuzz {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "uniform-ball")]
        dist: Distribution,
    },
    /// Apply the Möbius map M_omega to a 4x4 record.
    Mobius {
        /// Parameter as `re,im`, inside the unit disk.
        #[arg(allow_hyphen_values = true)]
        omega: String,
        file: PathBuf,
        /// Also print the result of the dense linear-solve path.
        #[arg(long)]
        dense: bool,
    },
    /// Operator norm of a record or of a `{"dense": ...}` matrix.
    Norm { file: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Core(tricontract::Error),
    Io(PathBuf, io::Error),
    Usage(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(path, e) => write!(f, "cannot read {}: {e}", path.display()),
            Failure::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<tricontract::Error> for Failure {
    fn from(e: tricontract::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<bool, Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(path.to_path_buf(), e))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn complex_json(z: ComplexScalar) -> Value {
    json!([z.re, z.im])
}

fn verdict_json(v: &Verdict) -> Value {
    serde_json::to_value(v).expect("verdicts serialise")
}

fn print_verdict(title: &str, v: &Verdict) {
    println!(
        "{title}: {} (branch {})",
        if v.is_contraction { "contraction" } else { "not a contraction" },
        v.branch
    );
    for (label, r) in &v.residuals {
        println!("  {label:<18} {r:+.6e}");
    }
    for note in &v.notes {
        println!("  note: {note}");
    }
}

fn cmd_check(file: &Path, size: Option<&str>, tol: &Tolerances, as_json: bool) -> Outcome {
    let record = parse_matrix(&read_input(file)?)?;
    if let Some(size) = size {
        if size != record.size().to_string() {
            return Err(Failure::Usage(format!(
                "expected a {size}x{size} record, found {0}x{0}",
                record.size()
            )));
        }
    }
    let verdict = match &record {
        Record::Tri3(t) => check_contraction_3x3(t, tol)?,
        Record::Tri4(t) => check_contraction_4x4(t, tol)?,
    };
    let oracle = is_contraction_oracle(&record.to_dense(), tol)?;
    let agree = verdict.is_contraction == oracle.is_contraction;
    if as_json {
        println!(
            "{}",
            json!({
                "size": record.size(),
                "verdict": verdict_json(&verdict),
                "oracle": verdict_json(&oracle),
                "agree": agree,
            })
        );
    } else {
        print_verdict("criterion", &verdict);
        print_verdict("oracle", &oracle);
        println!("agree: {}", if agree { "yes" } else { "no" });
    }
    Ok(verdict.is_contraction)
}

fn disk_json(d: &Disk) -> Value {
    if d.empty {
        json!({ "empty": true, "notes": d.notes })
    } else {
        json!({
            "empty": false,
            "center": complex_json(d.center),
            "radius": d.radius,
            "notes": d.notes,
        })
    }
}

fn print_disk(label: &str, d: &Disk) {
    if d.empty {
        println!("{label}: EMPTY ({})", d.notes.join("; "));
    } else {
        println!(
            "{label}: center ({}, {}) radius {}",
            d.center.re, d.center.im, d.radius
        );
        for note in &d.notes {
            println!("  note: {note}");
        }
    }
}

fn cmd_disk(file: &Path, cross_check: bool, tol: &Tolerances, as_json: bool) -> Outcome {
    let record = parse_matrix_without_corner(&read_input(file)?)?;
    let (label, disk) = match &record {
        Record::Tri3(t) => ("beta", beta_disk_3x3(t, tol)?),
        Record::Tri4(t) => ("gamma", gamma_disk(t, tol)?),
    };
    let other = match (&record, cross_check) {
        (Record::Tri4(t), true) => Some(gamma_disk_via_parrott(t, tol)?),
        (Record::Tri3(_), true) => {
            return Err(Failure::Usage("--cross-check applies to 4x4 records only".into()))
        }
        _ => None,
    };
    let consistent = other.as_ref().map(|o| {
        o.empty == disk.empty
            && (disk.empty
                || ((o.center - disk.center).norm() <= CROSS_CHECK_TOL
                    && (o.radius - disk.radius).abs() <= CROSS_CHECK_TOL))
    });

    if as_json {
        let mut out = json!({ "entry": label, "disk": disk_json(&disk) });
        if let (Some(o), Some(ok)) = (&other, consistent) {
            out["cross_check"] = json!({ "disk": disk_json(o), "consistent": ok });
        }
        println!("{out}");
    } else {
        print_disk(label, &disk);
        if let (Some(o), Some(ok)) = (&other, consistent) {
            print_disk("completion", o);
            println!("cross-check: {}", if ok { "consistent" } else { "MISMATCH" });
        }
    }
    if consistent == Some(false) {
        return Err(Failure::Usage(
            "closed-form disk and completion disk disagree".into(),
        ));
    }
    Ok(!disk.empty)
}

fn cmd_fuzz(trials: u64, seed: u64, dist: Distribution, tol: &Tolerances, as_json: bool) -> Outcome {
    let report = run_fuzz(trials, seed, dist, tol)?;
    if as_json {
        println!("{}", serde_json::to_string(&report).expect("reports serialise"));
    } else {
        println!("distribution: {}", report.distribution);
        println!("seed: {}", report.seed);
        println!("trials: {}", report.trials);
        println!("agreements: {}", report.agreements);
        println!("skipped_in_band: {}", report.skipped_in_band);
        println!("disagreements: {}", report.disagreements.len());
        for d in &report.disagreements {
            println!(
                "  trial {}: criterion {} ({}), oracle {}, margin {:+.3e}",
                d.trial,
                d.criterion.is_contraction,
                d.criterion.branch,
                d.oracle.is_contraction,
                d.margin
            );
            println!("    input {}", record_value(&Record::Tri4(d.input)));
        }
        println!("elapsed: {:.3} s", report.elapsed);
    }
    Ok(report.disagreements.is_empty())
}

fn parse_omega(text: &str) -> Result<ComplexScalar, Failure> {
    let bad = || Failure::Usage(format!("omega must be `re,im`, got `{text}`"));
    let (re, im) = text.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    let omega = ComplexScalar::new(re, im);
    if !omega.is_finite() || omega.norm() >= 1.0 {
        return Err(Failure::Usage(format!(
            "omega must lie in the open unit disk, got |omega| = {}",
            omega.norm()
        )));
    }
    Ok(omega)
}

fn cmd_mobius(omega: &str, file: &Path, dense: bool, as_json: bool) -> Outcome {
    let omega = parse_omega(omega)?;
    let t = match parse_matrix(&read_input(file)?)? {
        Record::Tri4(t) => t,
        Record::Tri3(_) => return Err(Failure::Usage("mobius expects a 4x4 record".into())),
    };
    let image = Record::Tri4(mobius_transform_triangular(omega, &t)?);
    let dense_image = if dense {
        Some(mobius_transform_dense(omega, &t.to_dense())?)
    } else {
        None
    };
    let gap = dense_image.as_ref().map(|m| image.to_dense().max_abs_diff(m));
    if as_json {
        let mut out = json!({ "result": record_value(&image) });
        if let (Some(m), Some(gap)) = (&dense_image, gap) {
            out["dense"] = dense_value(m)["dense"].clone();
            out["max_abs_diff"] = json!(gap);
        }
        println!("{out}");
    } else {
        println!("{}", record_value(&image));
        if let (Some(m), Some(gap)) = (&dense_image, gap) {
            println!("{}", dense_value(m));
            println!("max_abs_diff: {gap:.3e}");
        }
    }
    Ok(true)
}

fn format_norm(n: f64) -> String {
    if n == 0.0 {
        "0".to_string()
    } else {
        format!("{n:.15}")
    }
}

fn cmd_norm(file: &Path, as_json: bool) -> Outcome {
    let doc = parse_document(&read_input(file)?)?;
    let n = operator_norm(&doc.to_dense())?;
    if as_json {
        println!("{}", json!({ "norm": n }));
    } else {
        println!("{}", format_norm(n));
    }
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    let tol = Tolerances::new(cli.tol_boundary, cli.tol_psd, cli.tol_residual)?;
    match cli.command {
        Command::Check { file, size } => cmd_check(&file, size.as_deref(), &tol, cli.json),
        Command::Disk { file, cross_check } => cmd_disk(&file, cross_check, &tol, cli.json),
        Command::Fuzz { trials, seed, dist } => cmd_fuzz(trials, seed, dist, &tol, cli.json),
        Command::Mobius { omega, file, dense } => cmd_mobius(&omega, &file, dense, cli.json),
        Command::Norm { file } => cmd_norm(&file, cli.json),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors and 0 for --help/--version
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(true)) => ExitCode::SUCCESS,
        Ok(Ok(false)) => ExitCode::from(1),
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
