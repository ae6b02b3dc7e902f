//! Circuit text format and a QASM exporter.
//!
//! ```text
//! wires 2
//! U2 1 0 0 0 0 0 1 0 t1 c+0
//! H t0
//! NEG 0 1 t0 c-1
//! PH 0.5 0.8660254037844386 t1
//! NOT t0 c+1
//! ```
//!
//! One gate per line in application order. `U2` takes the row-major
//! entries as `re im` pairs. Controls are `c+<wire>` (fires on 1) or
//! `c-<wire>` (fires on 0).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use super::{Circuit, Control, Gate, GateKind, Polarity};
use crate::decompose::u2_parameters;
use crate::error::{Error, Result};
use crate::linalg::Mat2;

pub fn format_circuit(c: &Circuit) -> String {
    let mut out = format!("wires {}\n", c.wires());
    for g in c.gates() {
        match g.kind {
            GateKind::Hadamard => out.push('H'),
            GateKind::Not => out.push_str("NOT"),
            GateKind::Identity => out.push_str("ID"),
            GateKind::Negator(z) => write!(out, "NEG {} {}", z.re, z.im).unwrap(),
            GateKind::Phasor(z) => write!(out, "PH {} {}", z.re, z.im).unwrap(),
            GateKind::U2(m) => {
                out.push_str("U2");
                for r in 0..2 {
                    for col in 0..2 {
                        write!(out, " {} {}", m[(r, col)].re, m[(r, col)].im).unwrap();
                    }
                }
            }
        }
        write!(out, " t{}", g.target).unwrap();
        for c in &g.controls {
            let sign = match c.polarity {
                Polarity::Positive => '+',
                Polarity::Negative => '-',
            };
            write!(out, " c{sign}{}", c.wire).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty circuit file"))?;
    let wires: usize = header
        .strip_prefix("wires")
        .and_then(|w| w.trim().parse().ok())
        .filter(|&w| w > 0)
        .ok_or_else(|| Error::parse(line_no, format!("expected `wires <w>`, found `{header}`")))?;
    let mut c = Circuit::new(wires);
    for (line_no, line) in lines {
        let gate = parse_gate(line).map_err(|m| Error::parse(line_no, m))?;
        c.push(gate).map_err(|e| Error::parse(line_no, e.to_string()))?;
    }
    Ok(c)
}

fn parse_gate(line: &str) -> std::result::Result<Gate, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let float = |k: usize| -> std::result::Result<f64, String> {
        toks.get(k)
            .ok_or_else(|| format!("missing number in `{line}`"))?
            .parse()
            .map_err(|_| format!("bad number `{}`", toks[k]))
    };
    let (kind, rest) = match toks[0] {
        "H" => (GateKind::Hadamard, 1),
        "NOT" => (GateKind::Not, 1),
        "ID" => (GateKind::Identity, 1),
        "NEG" => (GateKind::Negator(Complex64::new(float(1)?, float(2)?)), 3),
        "PH" => (GateKind::Phasor(Complex64::new(float(1)?, float(2)?)), 3),
        "U2" => {
            let mut z = [Complex64::new(0.0, 0.0); 4];
            for (k, e) in z.iter_mut().enumerate() {
                *e = Complex64::new(float(1 + 2 * k)?, float(2 + 2 * k)?);
            }
            (GateKind::U2(Mat2::new(z[0], z[1], z[2], z[3])), 9)
        }
        other => return Err(format!("unknown gate `{other}`")),
    };
    let target = toks
        .get(rest)
        .and_then(|t| t.strip_prefix('t'))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| format!("expected `t<wire>` in `{line}`"))?;
    let controls = toks[rest + 1..]
        .iter()
        .map(|t| {
            let (polarity, wire) = if let Some(w) = t.strip_prefix("c+") {
                (Polarity::Positive, w)
            } else if let Some(w) = t.strip_prefix("c-") {
                (Polarity::Negative, w)
            } else {
                return Err(format!("bad control `{t}`"));
            };
            let wire = wire.parse().map_err(|_| format!("bad control `{t}`"))?;
            Ok(Control { wire, polarity })
        })
        .collect::<std::result::Result<_, String>>()?;
    Ok(Gate::controlled(kind, target, controls))
}

/// OpenQASM 2.0 text. Gates with standard library equivalents (`h`, `x`,
/// `u1`, `u3`, `ch`, `cx`, `ccx`, `cu1`) are written directly; other
/// controlled gates become opaque declarations named after their kind and
/// control count. Negative controls are wrapped in `x` gates. Global phases
/// of uncontrolled U2 gates are dropped.
pub fn to_qasm(c: &Circuit) -> Result<String> {
    let mut decls = BTreeMap::new();
    let mut body = String::new();
    for g in c.gates() {
        let flips: Vec<usize> = g
            .controls
            .iter()
            .filter(|c| c.polarity == Polarity::Negative)
            .map(|c| c.wire)
            .collect();
        for w in &flips {
            writeln!(body, "x q[{w}];").unwrap();
        }
        let mut qargs: Vec<String> = g.controls.iter().map(|c| format!("q[{}]", c.wire)).collect();
        qargs.push(format!("q[{}]", g.target));
        let qargs = qargs.join(",");
        let k = g.controls.len();
        let (name, params): (&str, Vec<f64>) = match g.kind {
            GateKind::Identity => ("id", vec![]),
            GateKind::Hadamard => ("h", vec![]),
            GateKind::Not => ("x", vec![]),
            GateKind::Phasor(d) => ("u1", vec![d.arg()]),
            GateKind::Negator(z) => ("neg", vec![z.arg()]),
            GateKind::U2(m) => {
                let p = u2_parameters(&m)?;
                let pi = std::f64::consts::PI;
                ("u3", vec![2.0 * p.phi, pi - p.chi - p.psi, p.chi - p.psi + pi])
            }
        };
        let params_text = if params.is_empty() {
            String::new()
        } else {
            let p: Vec<String> = params.iter().map(|x| x.to_string()).collect();
            format!("({})", p.join(","))
        };
        let t = g.target;
        let std_name = match (name, k) {
            ("id" | "h" | "x" | "u1" | "u3", 0) => Some(name.to_string()),
            ("h", 1) => Some("ch".into()),
            ("x", 1) => Some("cx".into()),
            ("x", 2) => Some("ccx".into()),
            ("u1", 1) => Some("cu1".into()),
            _ => None,
        };
        match (std_name, name) {
            (Some(n), _) => writeln!(body, "{n}{params_text} {qargs};").unwrap(),
            (None, "neg") if k == 0 => {
                writeln!(body, "h q[{t}];\nu1{params_text} q[{t}];\nh q[{t}];").unwrap()
            }
            (None, _) => {
                let custom = format!("c{k}_{name}");
                let formal: Vec<String> = (0..params.len()).map(|i| format!("p{i}")).collect();
                let mut args: Vec<String> = (0..k).map(|i| format!("a{i}")).collect();
                args.push("t".into());
                let formal = if formal.is_empty() {
                    String::new()
                } else {
                    format!("({})", formal.join(","))
                };
                decls.insert(
                    custom.clone(),
                    format!("opaque {custom}{formal} {};", args.join(",")),
                );
                writeln!(body, "{custom}{params_text} {qargs};").unwrap();
            }
        }
        for w in &flips {
            writeln!(body, "x q[{w}];").unwrap();
        }
    }
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    for d in decls.values() {
        out.push_str(d);
        out.push('\n');
    }
    writeln!(out, "qreg q[{}];", c.wires()).unwrap();
    out.push_str(&body);
    Ok(out)
}
