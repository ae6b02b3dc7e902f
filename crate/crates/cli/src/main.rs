use std::path::PathBuf;
use std::process::ExitCode;

use blockzxz::circuit::Lowering;
use blockzxz::{Form, Variant};
use blockzxz_cli::{run, InputKind, RunConfig};
use clap::{ArgGroup, Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormArg {
    Bzxz,
    Bxzx,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LoweringArg {
    U2,
    NegatorPhasor,
    ClassicalAuto,
}

/// Compile a unitary matrix or a reversible truth table into a circuit of
/// controlled single-qubit gates.
#[derive(Debug, Parser)]
#[command(name = "blockzxz", version)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "truth_table"])))]
struct Args {
    /// Matrix file: dimension line, optional `scale p/q`, one row per line.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Truth table: lines `<input bits> <output bits>`.
    #[arg(long, value_name = "FILE")]
    truth_table: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "bzxz")]
    form: FormArg,
    #[arg(long, value_enum, default_value = "1")]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "classical-auto")]
    lowering: LoweringArg,
    /// Maximum Heron steps per polar decomposition.
    #[arg(long, default_value_t = 100)]
    heron_iters: usize,
    /// Reconstruction tolerance per dimension.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Tolerance for the input and factor unitarity checks.
    #[arg(long, default_value_t = 1e-10)]
    unitarity_tol: f64,
    /// Add block identity residuals to the report.
    #[arg(long)]
    check_identities: bool,
    /// Seed for the preconditioning fallback.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Circuit file (stdout if omitted).
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Report file (stderr if omitted).
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
    /// Also export OpenQASM 2.0.
    #[arg(long, value_name = "FILE")]
    qasm: Option<PathBuf>,
    /// Decimals for matrices in the report.
    #[arg(long, default_value_t = 2)]
    precision: usize,
}

impl Args {
    fn into_config(self) -> RunConfig {
        let (path, kind) = match (self.input, self.truth_table) {
            (Some(p), _) => (p, InputKind::Matrix),
            (None, Some(p)) => (p, InputKind::TruthTable),
            (None, None) => unreachable!("clap enforces one source"),
        };
        let mut cfg = RunConfig::new(path, kind);
        cfg.form = match self.form {
            FormArg::Bzxz => Form::Bzxz,
            FormArg::Bxzx => Form::Bxzx,
        };
        cfg.variant = match self.variant {
            VariantArg::One => Variant::V1,
            VariantArg::Two => Variant::V2,
        };
        cfg.lowering = match self.lowering {
            LoweringArg::U2 => Lowering::U2,
            LoweringArg::NegatorPhasor => Lowering::NegatorPhasor,
            LoweringArg::ClassicalAuto => Lowering::ClassicalAuto,
        };
        cfg.heron_iters = self.heron_iters;
        cfg.residual_tol = self.tol;
        cfg.unitarity_tol = self.unitarity_tol;
        cfg.check_identities = self.check_identities;
        cfg.seed = self.seed;
        cfg.output_path = self.output;
        cfg.report_path = self.report;
        cfg.qasm_path = self.qasm;
        cfg.precision = self.precision;
        cfg
    }
}

fn write_or(path: &Option<PathBuf>, text: &str, fallback: impl FnOnce(&str)) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            fallback(text);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cfg = Args::parse().into_config();
    let outcome = run(&cfg);
    if let Some(e) = &outcome.error {
        eprintln!("error: {e}");
        return ExitCode::from(outcome.status.code() as u8);
    }
    let mut io = Ok(());
    if let Some(c) = &outcome.circuit {
        io = io.and(write_or(&cfg.output_path, c, |t| print!("{t}")));
    }
    if let Some(r) = &outcome.report {
        io = io.and(write_or(&cfg.report_path, r, |t| eprint!("{t}")));
    }
    if let (Some(q), Some(_)) = (&outcome.qasm, &cfg.qasm_path) {
        io = io.and(write_or(&cfg.qasm_path, q, |_| {}));
    }
    if let Err(e) = io {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.status.code() as u8)
}
