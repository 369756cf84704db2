//! Constrained information sources.
//!
//! Two models are provided:
//!
//! - [`MooreMarkovSource`]: a first-order Markov chain whose states are the
//!   source symbols. The chain emits the symbol of every state it visits.
//! - [`MealySource`]: a finite-state source whose symbols label transitions
//!   between states. Only the support (which symbols are possible on which
//!   transition) is modelled, since that is all the decodability conditions
//!   depend on.
//!
//! Symbol sequences are represented as vectors of alphabet indices
//! ([`SymbolSequence`]); helpers convert to and from symbol names.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::graph;

/// A finite sequence of source symbols, as indices into the alphabet.
pub type SymbolSequence = Vec<usize>;

/// Row-sum and probability-sum tolerance applied after parsing.
pub const STOCHASTIC_TOLERANCE: f64 = 1e-12;

/// Upper bound on the number of sequences any enumeration may produce.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

pub const DEFAULT_STATIONARY_TOLERANCE: f64 = 1e-12;
const STATIONARY_MAX_ITERATIONS: usize = 1_000_000;

/// One violated invariant found by validation.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    EmptyAlphabet,
    DuplicateSymbol {
        symbol: String,
    },
    NotSquare {
        rows: usize,
        expected: usize,
    },
    RowLength {
        row: usize,
        len: usize,
        expected: usize,
    },
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: f64,
    },
    RowSum {
        row: usize,
        sum: f64,
    },
    InitialLength {
        len: usize,
        expected: usize,
    },
    InitialEntryOutOfRange {
        index: usize,
        value: f64,
    },
    InitialSum {
        sum: f64,
    },
    DuplicateState {
        state: String,
    },
    UnknownState {
        state: String,
    },
    UnknownTransitionSymbol {
        from: String,
        to: String,
        symbol: String,
    },
    DuplicateTransitionSymbol {
        from: String,
        to: String,
        symbol: String,
    },
    NoInitialState,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ValidationIssue::*;
        match self {
            EmptyAlphabet => write!(f, "alphabet is empty"),
            DuplicateSymbol { symbol } => write!(f, "symbol `{symbol}` appears more than once"),
            NotSquare { rows, expected } => {
                write!(f, "transition matrix has {rows} rows, expected {expected}")
            }
            RowLength { row, len, expected } => {
                write!(
                    f,
                    "transition row {row} has {len} entries, expected {expected}"
                )
            }
            EntryOutOfRange { row, col, value } => {
                write!(f, "transition[{row}][{col}] = {value} is not a probability")
            }
            RowSum { row, sum } => write!(f, "transition row {row} sums to {sum}, not 1"),
            InitialLength { len, expected } => {
                write!(
                    f,
                    "initial distribution has {len} entries, expected {expected}"
                )
            }
            InitialEntryOutOfRange { index, value } => {
                write!(f, "initial[{index}] = {value} is not a probability")
            }
            InitialSum { sum } => write!(f, "initial distribution sums to {sum}, not 1"),
            DuplicateState { state } => write!(f, "state `{state}` appears more than once"),
            UnknownState { state } => write!(f, "unknown state `{state}`"),
            UnknownTransitionSymbol { from, to, symbol } => {
                write!(
                    f,
                    "transition {from} -> {to} emits `{symbol}`, which is not in the alphabet"
                )
            }
            DuplicateTransitionSymbol { from, to, symbol } => {
                write!(
                    f,
                    "transition {from} -> {to} lists `{symbol}` more than once"
                )
            }
            NoInitialState => write!(f, "no initial state"),
        }
    }
}

/// Outcome of validating a source description.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }

    fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            let msgs: Vec<String> = self.issues.iter().map(|i| i.to_string()).collect();
            Err(invalid(msgs.join("; ")))
        }
    }
}

fn is_probability(p: f64) -> bool {
    p.is_finite() && (0.0..=1.0).contains(&p)
}

fn check_distinct(
    names: &[String],
    issue: impl Fn(String) -> ValidationIssue,
    out: &mut Vec<ValidationIssue>,
) {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            out.push(issue(n.clone()));
        }
    }
}

/// Check the invariants of a Moore-form source without constructing it.
pub fn validate_moore(
    alphabet: &[String],
    transition: &[Vec<f64>],
    initial: &[f64],
) -> ValidationReport {
    let mut issues = Vec::new();
    let m = alphabet.len();
    if m == 0 {
        issues.push(ValidationIssue::EmptyAlphabet);
    }
    check_distinct(
        alphabet,
        |symbol| ValidationIssue::DuplicateSymbol { symbol },
        &mut issues,
    );

    if transition.len() != m {
        issues.push(ValidationIssue::NotSquare {
            rows: transition.len(),
            expected: m,
        });
    }
    for (row, entries) in transition.iter().enumerate() {
        if entries.len() != m {
            issues.push(ValidationIssue::RowLength {
                row,
                len: entries.len(),
                expected: m,
            });
        }
        for (col, &value) in entries.iter().enumerate() {
            if !is_probability(value) {
                issues.push(ValidationIssue::EntryOutOfRange { row, col, value });
            }
        }
        let sum: f64 = entries.iter().sum();
        if !((sum - 1.0).abs() <= STOCHASTIC_TOLERANCE) {
            issues.push(ValidationIssue::RowSum { row, sum });
        }
    }

    if initial.len() != m {
        issues.push(ValidationIssue::InitialLength {
            len: initial.len(),
            expected: m,
        });
    }
    for (index, &value) in initial.iter().enumerate() {
        if !is_probability(value) {
            issues.push(ValidationIssue::InitialEntryOutOfRange { index, value });
        }
    }
    let sum: f64 = initial.iter().sum();
    if !((sum - 1.0).abs() <= STOCHASTIC_TOLERANCE) {
        issues.push(ValidationIssue::InitialSum { sum });
    }
    ValidationReport { issues }
}

/// Resolve symbol names against an alphabet.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl SymbolTable {
    fn new(names: Vec<String>) -> Self {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        SymbolTable { names, index }
    }

    pub(crate) fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub(crate) fn names(&self) -> &[String] {
        &self.names
    }

    pub(crate) fn parse_text(&self, text: &str) -> Result<SymbolSequence> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        let separated = text.contains(|c: char| c.is_whitespace() || c == ',');
        if separated {
            text.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| self.index_of(s))
                .collect()
        } else if self.names.iter().all(|n| n.chars().count() == 1) {
            text.chars()
                .map(|c| self.index_of(&c.to_string()))
                .collect()
        } else {
            Ok(vec![self.index_of(text)?])
        }
    }

    pub(crate) fn format(&self, seq: &[usize]) -> String {
        let single = self.names.iter().all(|n| n.chars().count() == 1);
        let parts: Vec<&str> = seq.iter().map(|&i| self.names[i].as_str()).collect();
        if single {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn entropy_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// First-order Markov source in Moore form: one symbol per state.
#[derive(Debug, Clone, PartialEq)]
pub struct MooreMarkovSource {
    symbols: SymbolTable,
    transition: Vec<Vec<f64>>,
    initial: Vec<f64>,
}

impl MooreMarkovSource {
    pub fn new(
        alphabet: Vec<String>,
        transition: Vec<Vec<f64>>,
        initial: Vec<f64>,
    ) -> Result<Self> {
        validate_moore(&alphabet, &transition, &initial).into_result()?;
        Ok(MooreMarkovSource {
            symbols: SymbolTable::new(alphabet),
            transition,
            initial,
        })
    }

    /// Source started from the uniform distribution.
    pub fn with_uniform_start(alphabet: Vec<String>, transition: Vec<Vec<f64>>) -> Result<Self> {
        let m = alphabet.len().max(1);
        let initial = vec![1.0 / m as f64; alphabet.len()];
        Self::new(alphabet, transition, initial)
    }

    pub fn alphabet(&self) -> &[String] {
        self.symbols.names()
    }

    pub fn len(&self) -> usize {
        self.transition.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transition.is_empty()
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    /// Whether `next` may follow `prev`; `None` stands for the start of a sequence.
    pub fn allows(&self, prev: Option<usize>, next: usize) -> bool {
        match prev {
            None => self.initial[next] > 0.0,
            Some(p) => self.transition[p][next] > 0.0,
        }
    }

    pub fn symbol_index(&self, name: &str) -> Result<usize> {
        self.symbols.index_of(name)
    }

    pub fn parse_symbols<S: AsRef<str>>(&self, names: &[S]) -> Result<SymbolSequence> {
        names
            .iter()
            .map(|n| self.symbols.index_of(n.as_ref()))
            .collect()
    }

    /// Parse text into symbols: whitespace/comma separated names, or one
    /// character per symbol when every symbol name is a single character.
    pub fn parse_text(&self, text: &str) -> Result<SymbolSequence> {
        self.symbols.parse_text(text)
    }

    pub fn format_sequence(&self, seq: &[usize]) -> String {
        self.symbols.format(seq)
    }

    pub fn symbol_names(&self, seq: &[usize]) -> Vec<String> {
        seq.iter().map(|&i| self.alphabet()[i].clone()).collect()
    }

    fn check_indices(&self, seq: &[usize]) -> Result<()> {
        match seq.iter().find(|&&s| s >= self.len()) {
            Some(&index) => Err(Error::SymbolOutOfRange {
                index,
                size: self.len(),
            }),
            None => Ok(()),
        }
    }

    /// True iff the sequence has positive probability, including the
    /// initial distribution. The empty sequence is producible.
    pub fn is_producible(&self, seq: &[usize]) -> Result<bool> {
        self.check_indices(seq)?;
        let mut prev = None;
        for &s in seq {
            if !self.allows(prev, s) {
                return Ok(false);
            }
            prev = Some(s);
        }
        Ok(true)
    }

    /// True iff some finite sequence cannot be produced. For a first-order
    /// chain it suffices to look at starts and adjacent pairs.
    pub fn is_constrained(&self) -> bool {
        self.initial.contains(&0.0) || self.transition.iter().flatten().any(|&p| p == 0.0)
    }

    pub fn is_irreducible(&self) -> bool {
        graph::is_strongly_connected(&self.transition)
    }

    /// Symbols that occur in at least one producible sequence.
    pub fn reachable_symbols(&self) -> Vec<bool> {
        let starts = (0..self.len()).filter(|&i| self.initial[i] > 0.0);
        graph::reachable(&self.transition, starts)
    }

    /// Stationary distribution of an irreducible chain, computed by power
    /// iteration on the lazy chain `(I + P) / 2` (same fixed point, no
    /// periodic oscillation). Stops once `max |πP - π| <= tol`.
    pub fn stationary_distribution(&self, tol: f64) -> Result<Vec<f64>> {
        if !(tol > 0.0) {
            return Err(invalid("tolerance must be positive"));
        }
        if !self.is_irreducible() {
            return Err(Error::Reducible);
        }
        let m = self.len();
        let mut pi = vec![1.0 / m as f64; m];
        let mut residual = f64::INFINITY;
        for _ in 0..STATIONARY_MAX_ITERATIONS {
            let next = self.step(&pi);
            residual = next
                .iter()
                .zip(&pi)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if residual <= tol {
                return Ok(pi);
            }
            let mut lazy: Vec<f64> = pi.iter().zip(&next).map(|(a, b)| 0.5 * (a + b)).collect();
            let total: f64 = lazy.iter().sum();
            lazy.iter_mut().for_each(|x| *x /= total);
            pi = lazy;
        }
        Err(Error::NoConvergence {
            iterations: STATIONARY_MAX_ITERATIONS,
            lower: 0.0,
            upper: residual,
        })
    }

    /// One step of the forward marginal recursion: `p -> p P`.
    pub fn step(&self, p: &[f64]) -> Vec<f64> {
        let m = self.len();
        let mut out = vec![0.0; m];
        for (i, &pi) in p.iter().enumerate() {
            if pi == 0.0 {
                continue;
            }
            for (o, &pij) in out.iter_mut().zip(&self.transition[i]) {
                *o += pi * pij;
            }
        }
        out
    }

    /// Marginal distributions of `X_1, ..., X_n`.
    pub fn marginals(&self, n: usize) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(n);
        if n == 0 {
            return out;
        }
        out.push(self.initial.clone());
        while out.len() < n {
            let next = self.step(out.last().unwrap());
            out.push(next);
        }
        out
    }

    fn row_entropies(&self) -> Vec<f64> {
        self.transition.iter().map(|r| entropy_bits(r)).collect()
    }

    /// Joint entropy `H(X_1, ..., X_n)` in bits by the chain rule over the
    /// forward marginals. Exact for non-stationary starts; `n = 0` gives 0.
    pub fn joint_entropy(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let rows = self.row_entropies();
        let mut h = entropy_bits(&self.initial);
        let mut p = self.initial.clone();
        for _ in 2..=n {
            h += p.iter().zip(&rows).map(|(a, b)| a * b).sum::<f64>();
            p = self.step(&p);
        }
        h
    }

    /// Entropy rate in bits per symbol, `sum_x pi(x) H(P[x, .])`.
    pub fn entropy_rate(&self) -> Result<f64> {
        let pi = self.stationary_distribution(DEFAULT_STATIONARY_TOLERANCE)?;
        Ok(pi
            .iter()
            .zip(self.row_entropies())
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Draw a length-`n` trajectory by inverse-CDF sampling. Deterministic in `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> SymbolSequence {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(n, &mut rng)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> SymbolSequence {
        let mut out = Vec::with_capacity(n);
        let mut dist = &self.initial;
        for _ in 0..n {
            let s = inverse_cdf(dist, rng.random::<f64>());
            out.push(s);
            dist = &self.transition[s];
        }
        out
    }

    /// Number of producible sequences of length `n`, saturating at `u128::MAX`.
    pub fn count_producible(&self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        let m = self.len();
        let mut counts: Vec<u128> = self.initial.iter().map(|&p| (p > 0.0) as u128).collect();
        for _ in 1..n {
            let mut next = vec![0u128; m];
            for (i, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (j, &p) in self.transition[i].iter().enumerate() {
                    if p > 0.0 {
                        next[j] = next[j].saturating_add(c);
                    }
                }
            }
            counts = next;
        }
        counts.into_iter().fold(0u128, |a, b| a.saturating_add(b))
    }

    /// All producible sequences of length exactly `n`, in lexicographic
    /// order of the alphabet.
    pub fn enumerate_producible(&self, n: usize) -> Result<Vec<SymbolSequence>> {
        let count = self.count_producible(n);
        if count > ENUMERATION_LIMIT {
            return Err(Error::EnumerationLimit {
                count,
                limit: ENUMERATION_LIMIT,
            });
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut current = Vec::with_capacity(n);
        self.extend_producible(n, &mut current, &mut |s| out.push(s.to_vec()));
        Ok(out)
    }

    /// Depth-first walk over producible sequences of length `n`.
    pub(crate) fn extend_producible(
        &self,
        n: usize,
        current: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if current.len() == n {
            visit(current);
            return;
        }
        let prev = current.last().copied();
        for s in 0..self.len() {
            if self.allows(prev, s) {
                current.push(s);
                self.extend_producible(n, current, visit);
                current.pop();
            }
        }
    }
}

fn inverse_cdf(dist: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in dist.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last_positive = i;
            if u < acc {
                return i;
            }
        }
    }
    // Rounding left the cumulative sum just below 1.
    last_positive
}

/// One transition of a Mealy source as written in a source file.
#[derive(Debug, Clone, PartialEq)]
pub struct MealyTransition {
    pub from: String,
    pub to: String,
    pub symbols: Vec<String>,
}

/// Check the invariants of a Mealy-form source without constructing it.
pub fn validate_mealy(
    states: &[String],
    alphabet: &[String],
    transitions: &[MealyTransition],
    initial_states: &[String],
) -> ValidationReport {
    let mut issues = Vec::new();
    if alphabet.is_empty() {
        issues.push(ValidationIssue::EmptyAlphabet);
    }
    check_distinct(
        alphabet,
        |symbol| ValidationIssue::DuplicateSymbol { symbol },
        &mut issues,
    );
    check_distinct(
        states,
        |state| ValidationIssue::DuplicateState { state },
        &mut issues,
    );
    let state_set: BTreeSet<&str> = states.iter().map(String::as_str).collect();
    let symbol_set: BTreeSet<&str> = alphabet.iter().map(String::as_str).collect();
    let unknown = |s: &String, issues: &mut Vec<ValidationIssue>| {
        if !state_set.contains(s.as_str()) {
            issues.push(ValidationIssue::UnknownState { state: s.clone() });
        }
    };
    let mut listed: HashMap<(&str, &str), BTreeSet<&str>> = HashMap::new();
    for t in transitions {
        unknown(&t.from, &mut issues);
        unknown(&t.to, &mut issues);
        let emitted = listed.entry((t.from.as_str(), t.to.as_str())).or_default();
        for sym in &t.symbols {
            if !symbol_set.contains(sym.as_str()) {
                issues.push(ValidationIssue::UnknownTransitionSymbol {
                    from: t.from.clone(),
                    to: t.to.clone(),
                    symbol: sym.clone(),
                });
            }
            if !emitted.insert(sym.as_str()) {
                issues.push(ValidationIssue::DuplicateTransitionSymbol {
                    from: t.from.clone(),
                    to: t.to.clone(),
                    symbol: sym.clone(),
                });
            }
        }
    }
    if initial_states.is_empty() {
        issues.push(ValidationIssue::NoInitialState);
    }
    for s in initial_states {
        unknown(s, &mut issues);
    }
    ValidationReport { issues }
}

/// Finite-state source in Mealy form: symbols are emitted on transitions.
#[derive(Debug, Clone, PartialEq)]
pub struct MealySource {
    states: Vec<String>,
    symbols: SymbolTable,
    /// `outputs[i][j]` is the sorted set of symbols emitted on `i -> j`.
    outputs: Vec<Vec<Vec<usize>>>,
    initial_states: Vec<usize>,
}

impl MealySource {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        transitions: &[MealyTransition],
        initial_states: &[String],
    ) -> Result<Self> {
        validate_mealy(&states, &alphabet, transitions, initial_states).into_result()?;
        let state_ix: HashMap<&str, usize> = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let symbols = SymbolTable::new(alphabet);
        let q = states.len();
        let mut outputs = vec![vec![Vec::new(); q]; q];
        for t in transitions {
            let cell: &mut Vec<usize> =
                &mut outputs[state_ix[t.from.as_str()]][state_ix[t.to.as_str()]];
            for sym in &t.symbols {
                cell.push(symbols.index_of(sym)?);
            }
            cell.sort_unstable();
        }
        let mut initial: Vec<usize> = initial_states
            .iter()
            .map(|s| state_ix[s.as_str()])
            .collect();
        initial.sort_unstable();
        initial.dedup();
        Ok(MealySource {
            states,
            symbols,
            outputs,
            initial_states: initial,
        })
    }

    /// Mealy view of a Moore source: one state per symbol (the last symbol
    /// emitted), with `i -> j` emitting `j` whenever `P[i][j] > 0`.
    pub fn from_moore(source: &MooreMarkovSource) -> Self {
        let m = source.len();
        let outputs = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if source.transition()[i][j] > 0.0 {
                            vec![j]
                        } else {
                            Vec::new()
                        }
                    })
                    .collect()
            })
            .collect();
        MealySource {
            states: source.alphabet().to_vec(),
            symbols: source.symbols.clone(),
            outputs,
            initial_states: (0..m).filter(|&i| source.initial()[i] > 0.0).collect(),
        }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        self.symbols.names()
    }

    pub fn initial_states(&self) -> &[usize] {
        &self.initial_states
    }

    pub fn outputs(&self, from: usize, to: usize) -> &[usize] {
        &self.outputs[from][to]
    }
}
