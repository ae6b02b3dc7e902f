//! Library side of the `blockzxz` command: configuration, the run itself
//! and report rendering. `main.rs` only parses flags and writes files.

use std::fmt::Write as _;
use std::path::PathBuf;

use blockzxz::circuit::{
    evaluate_circuit, format_circuit, gate_counts_for, synthesize_with_report, to_qasm, Lowering,
    Synthesis, SynthesisOptions,
};
use blockzxz::classical::{birkhoff_block_zxz, parse_truth_table};
use blockzxz::decompose::decompose;
use blockzxz::linalg::{frobenius_distance, parse_matrix};
use blockzxz::verify::{check_block_identities_with, IdentityReport};
use blockzxz::{BlockFactors, CMatrix, DecomposeOptions, Error, Form, UnitaryMatrix, Variant};
use num_complex::Complex64;

/// Pass mark for the block identities listed with `--check-identities`.
pub const IDENTITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Matrix,
    TruthTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub input_kind: InputKind,
    pub form: Form,
    pub variant: Variant,
    pub lowering: Lowering,
    pub heron_iters: usize,
    /// Input and factor unitarity tolerance.
    pub unitarity_tol: f64,
    /// Per-dimension reconstruction tolerance: the run succeeds iff the
    /// circuit misses the input by at most `residual_tol · dim`.
    pub residual_tol: f64,
    pub check_identities: bool,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub report_path: Option<PathBuf>,
    pub qasm_path: Option<PathBuf>,
    /// Decimals used for matrices in the human-readable report.
    pub precision: usize,
}

impl RunConfig {
    pub fn new(input_path: impl Into<PathBuf>, input_kind: InputKind) -> Self {
        Self {
            input_path: input_path.into(),
            input_kind,
            form: Form::Bzxz,
            variant: Variant::V1,
            lowering: Lowering::ClassicalAuto,
            heron_iters: 100,
            unitarity_tol: 1e-10,
            residual_tol: 1e-8,
            check_identities: false,
            seed: 0,
            output_path: None,
            report_path: None,
            qasm_path: None,
            precision: 2,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [("unitarity tolerance", self.unitarity_tol), ("residual tolerance", self.residual_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if self.heron_iters == 0 {
            return Err("--heron-iters must be at least 1".into());
        }
        Ok(())
    }

    fn decompose_options(&self) -> DecomposeOptions {
        let mut o = DecomposeOptions {
            unitarity_tol: self.unitarity_tol,
            seed: self.seed,
            ..DecomposeOptions::default()
        };
        o.polar.max_iter = self.heron_iters;
        o
    }
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    ResidualExceeded = 1,
    BadInput = 2,
    NotUnitary = 3,
    DecompositionFailed = 4,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn of_error(e: &Error) -> Self {
        match e {
            Error::NotUnitary { .. } => Status::NotUnitary,
            Error::DecompositionFailed { .. } => Status::DecompositionFailed,
            _ => Status::BadInput,
        }
    }
}

/// Everything a run produces. On failure only `status` and `error` are set.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub circuit: Option<String>,
    pub report: Option<String>,
    pub qasm: Option<String>,
    pub error: Option<String>,
}

impl Outcome {
    fn failed(status: Status, message: String) -> Self {
        Self {
            status,
            circuit: None,
            report: None,
            qasm: None,
            error: Some(message),
        }
    }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    if let Err(m) = cfg.validate() {
        return Outcome::failed(Status::BadInput, m);
    }
    let text = match std::fs::read_to_string(&cfg.input_path) {
        Ok(t) => t,
        Err(e) => {
            return Outcome::failed(
                Status::BadInput,
                format!("cannot read {}: {e}", cfg.input_path.display()),
            )
        }
    };
    match run_text(cfg, &text) {
        Ok(o) => o,
        Err(e) => Outcome::failed(
            Status::of_error(&e),
            format!("{}: {e}", cfg.input_path.display()),
        ),
    }
}

/// [`run`] on already-loaded input text.
pub fn run_text(cfg: &RunConfig, text: &str) -> Result<Outcome, Error> {
    let m = match cfg.input_kind {
        InputKind::Matrix => parse_matrix(text)?,
        InputKind::TruthTable => parse_truth_table(text)?.matrix(),
    };
    let u = UnitaryMatrix::with_tolerance(m, cfg.unitarity_tol)?;
    let opts = SynthesisOptions {
        form: cfg.form,
        variant: cfg.variant,
        lowering: cfg.lowering,
        decompose: cfg.decompose_options(),
        diagonal_fan: true,
    };
    let synth = synthesize_with_report(&u, &opts)?;
    let top = top_factors(&u, cfg, &synth)?;
    let identities = if cfg.check_identities {
        let polar = cfg.decompose_options().polar;
        Some(check_block_identities_with(&u, IDENTITY_TOL, &polar)?)
    } else {
        None
    };
    let residual = frobenius_distance(&evaluate_circuit(&synth.circuit), u.entries())?;
    let threshold = cfg.residual_tol * u.dim() as f64;
    let status = if residual <= threshold {
        Status::Ok
    } else {
        Status::ResidualExceeded
    };
    let report = render_report(cfg, &u, &synth, top.as_ref(), identities.as_ref(), residual, threshold, status);
    let qasm = match cfg.qasm_path {
        Some(_) => Some(to_qasm(&synth.circuit)?),
        None => None,
    };
    Ok(Outcome {
        status,
        circuit: Some(format_circuit(&synth.circuit)),
        report: Some(report),
        qasm,
        error: None,
    })
}

/// First-level factors shown in the report.
fn top_factors(u: &UnitaryMatrix, cfg: &RunConfig, synth: &Synthesis) -> Result<Option<BlockFactors>, Error> {
    if synth.classical {
        return birkhoff_block_zxz(u).map(Some);
    }
    decompose(u, cfg.form, cfg.variant, &cfg.decompose_options()).map(Some)
}

fn fallback_name(s: &Synthesis) -> &'static str {
    if s.preconditioning_fired() {
        "preconditioned"
    } else if s.spectral_fallbacks > 0 {
        "spectral"
    } else {
        "none"
    }
}

pub fn form_name(f: Form) -> &'static str {
    match f {
        Form::Bzxz => "bzxz",
        Form::Bxzx => "bxzx",
    }
}

pub fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::V1 => "1",
        Variant::V2 => "2",
    }
}

pub fn lowering_name(l: Lowering) -> &'static str {
    match l {
        Lowering::U2 => "u2",
        Lowering::NegatorPhasor => "negator-phasor",
        Lowering::ClassicalAuto => "classical-auto",
    }
}

fn round(x: f64, precision: usize) -> f64 {
    let scale = 10f64.powi(precision as i32);
    let r = (x * scale).round() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// `a+bi` with both parts rounded to `precision` decimals.
pub fn format_entry(z: Complex64, precision: usize) -> String {
    let (re, im) = (round(z.re, precision), round(z.im, precision));
    let sign = if im < 0.0 { '-' } else { '+' };
    format!("{re:.precision$}{sign}{:.precision$}i", im.abs())
}

pub fn format_rounded(m: &CMatrix, precision: usize) -> String {
    let cells: Vec<Vec<String>> = (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| format_entry(m[(r, c)], precision)).collect())
        .collect();
    let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(0);
    let mut out = String::new();
    for row in cells {
        out.push_str("   ");
        for cell in row {
            write!(out, " {cell:>width$}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn render_report(
    cfg: &RunConfig,
    u: &UnitaryMatrix,
    synth: &Synthesis,
    top: Option<&BlockFactors>,
    identities: Option<&IdentityReport>,
    residual: f64,
    threshold: f64,
    status: Status,
) -> String {
    let wires = synth.circuit.wires();
    let census = synth.census();
    let predicted = gate_counts_for(cfg.form, wires as u32);
    let mut r = String::new();
    writeln!(r, "blockzxz report").unwrap();
    writeln!(r, "input: {}", cfg.input_path.display()).unwrap();
    writeln!(r, "dimension: {} ({wires} wires)", u.dim()).unwrap();
    writeln!(
        r,
        "form: {}  variant: {}  lowering: {}",
        form_name(cfg.form),
        variant_name(cfg.variant),
        lowering_name(cfg.lowering)
    )
    .unwrap();
    writeln!(r, "path: {}", if synth.classical { "classical" } else { "generic" }).unwrap();

    if let Some(f) = top {
        let names = match f.form {
            Form::Bzxz => ["A", "B", "C", "D"],
            Form::Bxzx => ["A'", "B'", "C'", "D'"],
        };
        writeln!(r, "\ntop-level factors").unwrap();
        for (name, m) in names.iter().zip([&f.a, &f.b, &f.c, &f.d]) {
            writeln!(r, "  {name} =").unwrap();
            r.push_str(&format_rounded(m.entries(), cfg.precision));
        }
        if let Some(pc) = &f.preconditioning {
            writeln!(r, "  preconditioned with seed {}", pc.seed).unwrap();
        }
    }

    writeln!(r, "\ngate census (observed / predicted for a full recursion)").unwrap();
    writeln!(r, "  hadamard  {:>6} / {}", census.hadamard, predicted.h).unwrap();
    writeln!(r, "  generic   {:>6} / {}", census.generic, predicted.g).unwrap();
    writeln!(r, "  negator   {:>6}", census.negator).unwrap();
    writeln!(r, "  not       {:>6}", census.not).unwrap();
    writeln!(r, "  phasor    {:>6}", census.phasor).unwrap();
    writeln!(r, "  elided    {:>6}", census.elided).unwrap();
    writeln!(r, "  total     {:>6}", census.total()).unwrap();

    writeln!(r, "\nreconstruction residual {residual:.3e} (threshold {threshold:.3e})").unwrap();
    if synth.preconditioning_fired() {
        writeln!(r, "fallback preconditioning applied, seed {}", cfg.seed).unwrap();
    }
    if let Some(rep) = identities {
        writeln!(r, "\nblock identities (tolerance {:.1e})", rep.tolerance).unwrap();
        for (name, v) in &rep.residuals {
            writeln!(r, "  {name:<20} {v:.3e}").unwrap();
        }
        for name in &rep.not_applicable {
            writeln!(r, "  {name:<20} n/a (singular block)").unwrap();
        }
    }

    writeln!(r, "\n[summary]").unwrap();
    writeln!(r, "status={}", if status == Status::Ok { "ok" } else { "residual-exceeded" }).unwrap();
    writeln!(r, "residual={residual:e}").unwrap();
    writeln!(r, "threshold={threshold:e}").unwrap();
    writeln!(r, "form={}", form_name(cfg.form)).unwrap();
    writeln!(r, "variant={}", variant_name(cfg.variant)).unwrap();
    writeln!(r, "lowering={}", lowering_name(cfg.lowering)).unwrap();
    writeln!(r, "classical={}", synth.classical).unwrap();
    writeln!(r, "wires={wires}").unwrap();
    writeln!(r, "h={}", census.hadamard).unwrap();
    writeln!(r, "g={}", census.generic).unwrap();
    writeln!(r, "h_predicted={}", predicted.h).unwrap();
    writeln!(r, "g_predicted={}", predicted.g).unwrap();
    writeln!(r, "negators={}", census.negators_total()).unwrap();
    writeln!(r, "nots={}", census.not).unwrap();
    writeln!(r, "phasors={}", census.phasor).unwrap();
    writeln!(r, "elided={}", census.elided).unwrap();
    writeln!(r, "gates={}", synth.circuit.len()).unwrap();
    writeln!(r, "fallback={}", fallback_name(synth)).unwrap();
    writeln!(r, "seed={}", cfg.seed).unwrap();
    if let Some(rep) = identities {
        writeln!(r, "identities_passed={}", rep.passed).unwrap();
        for (name, v) in &rep.residuals {
            writeln!(r, "identity.{name}={v:e}").unwrap();
        }
    }
    r
}

/// Reads the `key=value` lines of a report.
pub fn summary_values(report: &str) -> std::collections::BTreeMap<String, String> {
    report
        .lines()
        .skip_while(|l| *l != "[summary]")
        .skip(1)
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}
