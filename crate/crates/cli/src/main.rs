use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use fgl_neron::lattice::{IntMatrix, TorusSpec};
use fgl_neron::pipeline::{
    compare_reports, complete, render_text, verify_report, Check, CompareMode, CompletionReport, Config, Status,
    DEFAULT_BUDGET,
};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "fgl-neron", version, about = "Formal group laws of Neron models of tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Computes and checks the completion of a torus given as a JSON spec.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        degree: u32,
        /// Largest estimated term count for the restricted law `Phi`.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Writes to standard output when absent.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Re-checks a JSON report against its embedded data and a recomputation.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Tests two reports for a strong isomorphism or a homomorphism with given linear part.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::StrongIso)]
        mode: Mode,
        /// JSON integer matrix `D` (rows = dim b, cols = dim a), required for `hom`.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    StrongIso,
    Hom,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_USAGE, message: message.to_string() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        let tag = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        match &c.witness {
            Some(w) => println!("[{tag}] {}: {w}", c.name),
            None => println!("[{tag}] {}", c.name),
        }
    }
}

fn exit_for(passed: bool) -> u8 {
    if passed {
        0
    } else {
        EXIT_FAIL
    }
}

fn compute(input: &Path, degree: u32, budget: u64, output: Option<&Path>, format: Format) -> Result<u8, Failure> {
    let spec = TorusSpec::from_json(&read(input)?).map_err(usage)?;
    let start = Instant::now();
    let report = complete(&spec, Config::new(degree).with_budget(budget)).map_err(usage)?;
    eprintln!("computed in {:.2?}", start.elapsed());
    let text = match format {
        Format::Json => report.to_json(),
        Format::Text => render_text(&report),
    };
    match output {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    for c in report.checks.iter().filter(|c| c.failed()) {
        eprintln!("failed: {} {}", c.name, c.witness.as_deref().unwrap_or(""));
    }
    Ok(exit_for(report.passed()))
}

fn verify(input: &Path) -> Result<u8, Failure> {
    let report = CompletionReport::from_json(&read(input)?).map_err(usage)?;
    let start = Instant::now();
    let outcome = verify_report(&report);
    eprintln!("verified in {:.2?}", start.elapsed());
    print_checks(&outcome.checks);
    Ok(exit_for(outcome.passed()))
}

fn compare(a: &Path, b: &Path, mode: Mode, matrix: Option<&Path>) -> Result<u8, Failure> {
    let ra = CompletionReport::from_json(&read(a)?).map_err(usage)?;
    let rb = CompletionReport::from_json(&read(b)?).map_err(usage)?;
    let mode = match (mode, matrix) {
        (Mode::StrongIso, None) => CompareMode::StrongIso,
        (Mode::StrongIso, Some(_)) => return Err(usage("--matrix applies only to --mode hom")),
        (Mode::Hom, None) => return Err(usage("--mode hom needs --matrix")),
        (Mode::Hom, Some(path)) => {
            let m: IntMatrix =
                serde_json::from_str(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            CompareMode::Hom(m)
        }
    };
    let start = Instant::now();
    let checks = compare_reports(&ra, &rb, &mode).map_err(usage)?;
    eprintln!("compared in {:.2?}", start.elapsed());
    print_checks(&checks);
    Ok(exit_for(checks.iter().all(|c| !c.failed())))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("FGL_NERON_THREADS") else {
        return Ok(());
    };
    let n: usize = value.parse().map_err(|_| usage(format!("FGL_NERON_THREADS={value:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(usage)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Compute { input, degree, budget, output, format } => {
            compute(input, *degree, *budget, output.as_deref(), *format)
        }
        Command::Verify { input } => verify(input),
        Command::Compare { a, b, mode, matrix } => compare(a, b, *mode, matrix.as_deref()),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
