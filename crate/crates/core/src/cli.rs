//! Command-line front end: problem documents in, report documents out.
//!
//! A problem document is a JSON object naming a Fredholm module, a symbol
//! (an even-length list of matrix letters), and a task. Complex numbers are
//! `[re, im]` pairs, Laurent elements are `[degree, re, im]` triples, and
//! matrix entries are row-major. Reports are JSON on stdout; exit codes:
//! 0 success, 2 residual breach, 64 bad document, 65 window overflow,
//! 66 precondition failure.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Algebra, AlgebraElement, MatrixOverA};
use crate::character::{branch_difference, multiplicative_character, LodaySymbol};
use crate::error::{Error, Result};
use crate::fredholm::FredholmModule;
use crate::verify::{run_suite, SuiteReport};
use crate::{C64, OpMatrix};

// ---------------------------------------------------------------------------
// Problem documents.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    Toeplitz {
        half_window: i64,
    },
    Commuting {
        generator: Vec<Vec<[f64; 2]>>,
        projection: Vec<Vec<[f64; 2]>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ElementSpec {
    /// `[degree, re, im]` triples.
    Laurent(Vec<(i64, f64, f64)>),
    /// coefficients in the module's generator, ascending degree.
    Poly(Vec<[f64; 2]>),
    /// values on the slots of a pointwise algebra.
    Pointwise(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LetterSpec {
    Scalar(ElementSpec),
    Matrix { size: usize, entries: Vec<ElementSpec> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskSpec {
    Character,
    Verify { suite: String },
    Branch { alternate: Vec<LetterSpec> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub module: ModuleSpec,
    #[serde(default)]
    pub symbol: Vec<LetterSpec>,
    pub task: TaskSpec,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Parse a problem document, reporting the position of any syntax error.
pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    // two passes so syntax and schema errors both carry line/column info
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))?;
    serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))
}

fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<OpMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("numeric matrix must be square".into()));
    }
    Ok(OpMatrix::from_fn(n, n, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

pub fn build_module(spec: &ModuleSpec) -> Result<FredholmModule> {
    match spec {
        ModuleSpec::Toeplitz { half_window } => FredholmModule::toeplitz(*half_window),
        ModuleSpec::Commuting { generator, projection } => FredholmModule::commuting(
            matrix_from_rows(generator)?,
            matrix_from_rows(projection)?,
        ),
    }
}

fn build_element(spec: &ElementSpec, alg: &Algebra) -> Result<AlgebraElement> {
    match spec {
        ElementSpec::Laurent(triples) => Ok(AlgebraElement::laurent(
            triples.iter().map(|&(d, re, im)| (d, C64::new(re, im))),
        )),
        ElementSpec::Poly(coeffs) => AlgebraElement::poly(
            alg,
            coeffs.iter().map(|&[re, im]| C64::new(re, im)).collect(),
        ),
        ElementSpec::Pointwise(values) => Ok(AlgebraElement::pointwise(
            values.iter().map(|&[re, im]| C64::new(re, im)).collect(),
        )),
    }
}

fn build_letter(spec: &LetterSpec, alg: &Algebra) -> Result<MatrixOverA> {
    match spec {
        LetterSpec::Scalar(e) => Ok(MatrixOverA::scalar(build_element(e, alg)?)),
        LetterSpec::Matrix { size, entries } => {
            let elems = entries
                .iter()
                .map(|e| build_element(e, alg))
                .collect::<Result<Vec<_>>>()?;
            MatrixOverA::from_entries(alg.clone(), *size, elems)
        }
    }
}

pub fn build_symbol(letters: &[LetterSpec], alg: &Algebra) -> Result<LodaySymbol> {
    let built = letters
        .iter()
        .map(|l| build_letter(l, alg))
        .collect::<Result<Vec<_>>>()?;
    LodaySymbol::new(built)
}

// ---------------------------------------------------------------------------
// Report documents.
// ---------------------------------------------------------------------------

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeReport {
    pub direction: [f64; 2],
    pub quotient: i64,
    pub representative: [f64; 2],
    pub coordinate: f64,
    pub nearest_multiple: i64,
    pub nearest_distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterReport {
    pub p: usize,
    pub via_chern: [f64; 2],
    pub via_commutators: [f64; 2],
    pub path_residual: f64,
    pub term_scale: f64,
    pub lattice: LatticeReport,
    pub residual_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchReport {
    pub lattice_multiple: i64,
    pub lattice_distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub task: String,
    pub seed: u64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<CharacterReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<BranchReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<SuiteReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

/// Run one problem document. Returns the report together with the exit code
/// the process should finish with.
pub fn run_problem(spec: &ProblemSpec, seed: u64, tol: f64) -> Result<(Report, i32)> {
    let seed = spec.seed.unwrap_or(seed);
    let tol = spec.tol.unwrap_or(tol);
    match &spec.task {
        TaskSpec::Character => {
            let module = build_module(&spec.module)?;
            let symbol = build_symbol(&spec.symbol, module.algebra())?;
            let value = multiplicative_character(&module, &symbol)?;
            let residual_ok = value.path_residual <= tol * value.term_scale.max(1.0);
            let report = Report {
                task: "character".into(),
                seed,
                tol,
                character: Some(CharacterReport {
                    p: value.p,
                    via_chern: pair(value.via_chern),
                    via_commutators: pair(value.via_commutators),
                    path_residual: value.path_residual,
                    term_scale: value.term_scale,
                    lattice: LatticeReport {
                        direction: pair(value.lattice.direction),
                        quotient: value.lattice.quotient,
                        representative: pair(value.lattice.representative),
                        coordinate: value.lattice.coordinate,
                        nearest_multiple: value.lattice.nearest_multiple,
                        nearest_distance: value.lattice.nearest_distance,
                    },
                    residual_ok,
                }),
                branch: None,
                suites: None,
                timing_ms: None,
            };
            Ok((report, if residual_ok { 0 } else { 2 }))
        }
        TaskSpec::Branch { alternate } => {
            let module = build_module(&spec.module)?;
            let symbol = build_symbol(&spec.symbol, module.algebra())?;
            let other = build_symbol(alternate, module.algebra())?;
            let (multiple, distance) = branch_difference(&module, &symbol, &other)?;
            let ok = distance <= tol.max(1e-6);
            let report = Report {
                task: "branch".into(),
                seed,
                tol,
                character: None,
                branch: Some(BranchReport {
                    lattice_multiple: multiple,
                    lattice_distance: distance,
                }),
                suites: None,
                timing_ms: None,
            };
            Ok((report, if ok { 0 } else { 2 }))
        }
        TaskSpec::Verify { suite } => {
            let report = run_verify(suite, seed, tol)?;
            let code = if report.suites.as_ref().unwrap().iter().all(|s| s.passed) {
                0
            } else {
                1
            };
            Ok((report, code))
        }
    }
}

/// Run a named identity suite without a problem document.
pub fn run_verify(suite: &str, seed: u64, tol: f64) -> Result<Report> {
    let suites = vec![run_suite(suite, seed, tol)?];
    Ok(Report {
        task: format!("verify:{suite}"),
        seed,
        tol,
        character: None,
        branch: None,
        suites: Some(suites),
        timing_ms: None,
    })
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::UnknownSuite(_) => 64,
        Error::WindowOverflow { .. } => 65,
        Error::Precondition(_) => 66,
        _ => 64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOEPLITZ_WINDING: &str = r#"{
        "module": {"kind": "toeplitz", "half_window": 16},
        "symbol": [
            {"laurent": [[1, 1.0, 0.0]]},
            {"laurent": [[-1, 1.0, 0.0]]}
        ],
        "task": {"character": null}
    }"#;

    #[test]
    fn character_task_runs_the_winding_example() {
        let spec = parse_problem(TOEPLITZ_WINDING).unwrap();
        let (report, code) = run_problem(&spec, 1, 1e-10).unwrap();
        assert_eq!(code, 0);
        let c = report.character.unwrap();
        assert!((c.via_commutators[0] - 1.0).abs() < 1e-12);
        assert!(c.via_commutators[1].abs() < 1e-12);
        assert_eq!(c.lattice.nearest_multiple, 0);
    }

    #[test]
    fn malformed_document_reports_position() {
        let err = parse_problem("{\n  \"module\": ,\n}").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.contains("line 2"), "{msg}"),
            other => panic!("wrong error {other:?}"),
        }
        assert_eq!(exit_code_for(&Error::Parse("x".into())), 64);
    }

    #[test]
    fn verify_task_reports_suite_table() {
        let report = run_verify("combinatorics", 5, 1e-10).unwrap();
        let suites = report.suites.unwrap();
        assert!(suites[0].passed);
        assert!(!suites[0].checks.is_empty());
    }
}
