//! Unique decodability of a code *for a given source*.
//!
//! A code is uniquely decodable for a source when no two different
//! sequences the source can produce share an encoding. This is weaker than
//! classic unique decodability, so Kraft's inequality need not hold. The
//! generalized necessary condition is `rho(Q) <= 1`, where `Q[i][j]` is
//! `D^{-l_j}` on allowed transitions and zero elsewhere (see
//! [`build_q_moore`] and [`build_q_mealy`]). That condition is necessary
//! only; [`test_unique_decodability`] decides the question exactly.

mod brute;
mod decode;
mod search;
mod spectral;

use serde::Serialize;

pub use brute::{brute_force_ud, count_by_code_length};
pub use decode::decode;
pub use search::test_unique_decodability;
pub use spectral::{spectral_radius, DEFAULT_TOLERANCE as DEFAULT_SPECTRAL_TOLERANCE};

use crate::code::{Code, Codebook, SymbolCode};
use crate::error::{invalid, Result};
use crate::format::Source;
use crate::graph;
use crate::source::{MealySource, MooreMarkovSource, SymbolSequence};

/// Slack on `rho <= 1`: the boundary case `rho = 1` is reached exactly by
/// decodable codes and must not be lost to rounding.
pub const RHO_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QForm {
    Moore,
    Mealy,
}

/// The nonnegative test matrix of the generalized Kraft condition.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    pub entries: Vec<Vec<f64>>,
    pub radix: u8,
    pub form: QForm,
}

impl QMatrix {
    pub fn spectral_radius(&self, tol: f64) -> Result<f64> {
        spectral_radius(&self.entries, tol)
    }

    /// Zero the rows and columns of states outside `keep`.
    fn restricted(&self, keep: &[bool]) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &v)| if keep[i] && keep[j] { v } else { 0.0 })
                    .collect()
            })
            .collect()
    }
}

fn check_cover(code: &Codebook, alphabet_len: usize) -> Result<Vec<usize>> {
    if code.words().len() != alphabet_len {
        return Err(invalid(format!(
            "code has {} words for an alphabet of {alphabet_len} symbols",
            code.words().len()
        )));
    }
    Ok(code.lengths())
}

/// `Q[i][j] = D^{-l_j}` where `P[i][j] > 0`, else 0.
pub fn build_q_moore(source: &MooreMarkovSource, code: &Codebook) -> Result<QMatrix> {
    let lengths = check_cover(code, source.len())?;
    let d = code.radix() as f64;
    let entries = source
        .transition()
        .iter()
        .map(|row| {
            row.iter()
                .zip(&lengths)
                .map(|(&p, &l)| if p > 0.0 { d.powi(-(l as i32)) } else { 0.0 })
                .collect()
        })
        .collect();
    Ok(QMatrix {
        entries,
        radix: code.radix(),
        form: QForm::Moore,
    })
}

/// `Q[i][j] = sum over h in O_ij of D^{-l_h}`.
pub fn build_q_mealy(source: &MealySource, code: &Codebook) -> Result<QMatrix> {
    let lengths = check_cover(code, source.alphabet().len())?;
    let d = code.radix() as f64;
    let q = source.states().len();
    let entries = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| {
                    source
                        .outputs(i, j)
                        .iter()
                        .map(|&h| d.powi(-(lengths[h] as i32)))
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(QMatrix {
        entries,
        radix: code.radix(),
        form: QForm::Mealy,
    })
}

/// Result of the generalized Kraft test. `passes == false` proves the code
/// is not uniquely decodable for the source; `passes == true` proves nothing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NecessaryCondition {
    pub rho: f64,
    pub passes: bool,
}

impl NecessaryCondition {
    fn from_rho(rho: f64) -> Self {
        NecessaryCondition {
            rho,
            passes: rho <= 1.0 + RHO_TOLERANCE,
        }
    }
}

/// Spectral radius of `Q` over the symbols the source can actually reach
/// from its initial distribution. For irreducible sources this is `rho(Q)`.
pub fn check_necessary_condition(
    source: &MooreMarkovSource,
    code: &Codebook,
) -> Result<NecessaryCondition> {
    let q = build_q_moore(source, code)?;
    let rho = spectral_radius(
        &q.restricted(&source.reachable_symbols()),
        DEFAULT_SPECTRAL_TOLERANCE,
    )?;
    Ok(NecessaryCondition::from_rho(rho))
}

/// Mealy-form counterpart of [`check_necessary_condition`], restricted to
/// states reachable from the initial states.
pub fn check_necessary_condition_mealy(
    source: &MealySource,
    code: &Codebook,
) -> Result<NecessaryCondition> {
    let q = build_q_mealy(source, code)?;
    let reach = graph::reachable(&q.entries, source.initial_states().iter().copied());
    let rho = spectral_radius(&q.restricted(&reach), DEFAULT_SPECTRAL_TOLERANCE)?;
    Ok(NecessaryCondition::from_rho(rho))
}

/// Two different producible sequences with equal encodings, stored in
/// lexicographic order of symbol indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub first: SymbolSequence,
    pub second: SymbolSequence,
}

impl Witness {
    pub fn new(a: SymbolSequence, b: SymbolSequence) -> Self {
        if a <= b {
            Witness {
                first: a,
                second: b,
            }
        } else {
            Witness {
                first: b,
                second: a,
            }
        }
    }

    /// Mechanical check: both producible, different, same encoding.
    pub fn is_valid<C: SymbolCode + ?Sized>(&self, source: &MooreMarkovSource, code: &C) -> bool {
        self.first != self.second
            && source.is_producible(&self.first).unwrap_or(false)
            && source.is_producible(&self.second).unwrap_or(false)
            && matches!((code.encode(&self.first), code.encode(&self.second)), (Ok(a), Ok(b)) if a == b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodabilityVerdict {
    pub decodable: bool,
    pub witness: Option<Witness>,
}

impl DecodabilityVerdict {
    pub(crate) fn decodable() -> Self {
        DecodabilityVerdict {
            decodable: true,
            witness: None,
        }
    }

    pub(crate) fn ambiguous(w: Witness) -> Self {
        DecodabilityVerdict {
            decodable: false,
            witness: Some(w),
        }
    }
}

/// JSON report combining the Kraft sum, the spectral test and the exact
/// verdict. Fields that do not apply to the inputs are omitted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kraft_sum: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passes_necessary: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decodable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[Vec<String>; 2]>,
}

impl AnalysisReport {
    /// Negative when the code is shown not decodable or fails the test.
    pub fn is_negative(&self) -> bool {
        self.decodable == Some(false) || self.passes_necessary == Some(false)
    }
}

/// Run every applicable analysis for `code` over `source`.
///
/// Fixed codebooks get the Kraft sum and the spectral test; the exact
/// decodability test needs a Moore-form source.
pub fn analyze(source: &Source, code: &Code) -> Result<AnalysisReport> {
    let mut report = AnalysisReport {
        kraft_sum: None,
        rho: None,
        passes_necessary: None,
        decodable: None,
        witness: None,
    };
    if let Some(book) = code.as_codebook() {
        report.kraft_sum = Some(book.kraft_sum());
        let cond = match source {
            Source::Moore(s) => check_necessary_condition(s, book)?,
            Source::Mealy(s) => check_necessary_condition_mealy(s, book)?,
        };
        report.rho = Some(cond.rho);
        report.passes_necessary = Some(cond.passes);
    }
    if let Source::Moore(s) = source {
        let verdict = test_unique_decodability(s, code)?;
        report.decodable = Some(verdict.decodable);
        report.witness = verdict
            .witness
            .map(|w| [s.symbol_names(&w.first), s.symbol_names(&w.second)]);
    }
    Ok(report)
}
