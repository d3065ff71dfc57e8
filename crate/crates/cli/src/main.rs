use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use weylforge_core::io::{parse_instance, run_job, CheckKind, Command, Format, JobError, JobOutput};
use weylforge_core::theorems::property_suite;

#[derive(Parser)]
#[command(name = "weylforge", version, about = "Highest-weight and Weyl modules over map algebras g ⊗ A")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    #[value(name = "T1")]
    T1,
    #[value(name = "tw")]
    Tw,
    #[value(name = "max")]
    Max,
    #[value(name = "l1")]
    L1,
    #[value(name = "remark")]
    Remark,
}

#[derive(clap::Args)]
struct Common {
    /// Instance file (JSON).
    #[arg(long)]
    instance: PathBuf,
    /// Height bound; overrides the instance.
    #[arg(long)]
    height: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    format: Fmt,
    /// Write data here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Positive roots with multiplicities up to a height.
    Roots(Common),
    /// Codimension, coprimality and quotient basis of cofinite ideals.
    Ideal(Common),
    /// Truncated character of M(ψ, I) from the product formula.
    Char(Common),
    /// Weight-space dimensions of an explicitly constructed module.
    Module(Common),
    /// Verify one of the tensor product statements on an instance.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        check: CheckArg,
    },
    /// Randomized property checks (Bezout/CRT, action axiom, product formula).
    Proptest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), JobError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| JobError::Invalid(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<JobOutput, JobError> {
    let (cmd, common) = match cli.cmd {
        Cmd::Roots(c) => (Command::Roots, c),
        Cmd::Ideal(c) => (Command::Ideal, c),
        Cmd::Char(c) => (Command::Char, c),
        Cmd::Module(c) => (Command::Module, c),
        Cmd::Verify { common, check } => {
            let k = match check {
                CheckArg::T1 => CheckKind::T1,
                CheckArg::Tw => CheckKind::Tw,
                CheckArg::Max => CheckKind::Max,
                CheckArg::L1 => CheckKind::L1,
                CheckArg::Remark => CheckKind::Remark,
            };
            (Command::Verify(k), common)
        }
        Cmd::Proptest { seed, out } => {
            let report = property_suite(seed).map_err(JobError::from)?;
            let mut text = serde_json::to_string_pretty(&report.to_json()).unwrap();
            text.push('\n');
            emit(&text, out.as_ref())?;
            eprintln!("proptest: {} ms", report.elapsed_ms);
            return Ok(JobOutput { text: String::new(), pass: report.pass() });
        }
    };
    let raw = std::fs::read_to_string(&common.instance)
        .map_err(|e| JobError::Invalid(format!("cannot read {}: {e}", common.instance.display())))?;
    let inst = parse_instance(&raw)?;
    let format = match common.format {
        Fmt::Json => Format::Json,
        Fmt::Csv => Format::Csv,
    };
    let out = run_job(cmd, &inst, common.height, format)?;
    emit(&out.text, common.out.as_ref())?;
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) if out.pass => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
