//! Symbol codes: fixed codebooks and state-dependent codes.
//!
//! Codewords are stored unpacked, one `u8` digit per code letter, over the
//! alphabet `{0, ..., D-1}`. Textual digit strings use `0-9a-z`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::source::MooreMarkovSource;

pub const MAX_RADIX: u8 = 36;

/// Parse a textual digit string. Whitespace is ignored.
pub fn parse_digits(text: &str, radix: u8) -> Result<Vec<u8>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| {
            c.to_digit(radix as u32)
                .map(|d| d as u8)
                .ok_or(Error::InvalidDigit { digit: c, radix })
        })
        .collect()
}

pub fn format_digits(digits: &[u8]) -> String {
    digits
        .iter()
        .map(|&d| char::from_digit(d as u32, MAX_RADIX as u32).expect("digit below 36"))
        .collect()
}

fn check_radix(radix: u8) -> Result<()> {
    if (2..=MAX_RADIX).contains(&radix) {
        Ok(())
    } else {
        Err(invalid(format!("radix {radix} outside 2..={MAX_RADIX}")))
    }
}

/// A nonempty codeword over `{0, ..., D-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(digits: Vec<u8>, radix: u8) -> Result<Self> {
        if digits.is_empty() {
            return Err(invalid("codewords must be nonempty"));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= radix) {
            return Err(invalid(format!("digit {d} not below radix {radix}")));
        }
        Ok(Word(digits))
    }

    pub fn parse(text: &str, radix: u8) -> Result<Self> {
        Self::new(parse_digits(text, radix)?, radix)
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_digits(&self.0))
    }
}

/// True iff no word is a prefix of (or equal to) another.
pub fn is_prefix_free<'a>(words: impl IntoIterator<Item = &'a Word>) -> bool {
    let mut sorted: Vec<&Word> = words.into_iter().collect();
    sorted.sort();
    sorted.windows(2).all(|w| !w[1].0.starts_with(&w[0].0))
}

/// Anything that assigns a codeword to a symbol given the previous symbol
/// (`None` at the start of a sequence).
pub trait SymbolCode {
    fn radix(&self) -> u8;

    fn word(&self, previous: Option<usize>, symbol: usize) -> Option<&Word>;

    fn word_or_err(&self, previous: Option<usize>, symbol: usize) -> Result<&Word> {
        self.word(previous, symbol)
            .ok_or(Error::MissingWord { previous, symbol })
    }

    /// Concatenate the codewords of `seq`.
    fn encode(&self, seq: &[usize]) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        let mut prev = None;
        for &s in seq {
            out.extend_from_slice(self.word_or_err(prev, s)?.digits());
            prev = Some(s);
        }
        Ok(out)
    }

    fn encoded_len(&self, seq: &[usize]) -> Result<usize> {
        let mut prev = None;
        let mut total = 0;
        for &s in seq {
            total += self.word_or_err(prev, s)?.len();
            prev = Some(s);
        }
        Ok(total)
    }
}

/// `sum_i D^{-l_i}` as an exact fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KraftFraction {
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl KraftFraction {
    pub fn cmp_one(&self) -> Ordering {
        self.numerator.cmp(&self.denominator)
    }

    pub fn to_f64(&self) -> f64 {
        // Both sides stay below 2^256, well inside f64 range.
        self.numerator.to_f64().unwrap_or(f64::INFINITY)
            / self.denominator.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Exact Kraft sum when `D <= 16` and every length is at most 64.
pub fn kraft_fraction(radix: u8, lengths: &[usize]) -> Option<KraftFraction> {
    if radix > 16 || lengths.iter().any(|&l| l > 64) {
        return None;
    }
    let max = lengths.iter().copied().max().unwrap_or(0);
    let d = BigUint::from(radix);
    let denominator = num_traits::pow(d.clone(), max);
    let numerator = lengths.iter().fold(BigUint::zero(), |acc, &l| {
        acc + num_traits::pow(d.clone(), max - l)
    });
    Some(KraftFraction {
        numerator,
        denominator: if denominator.is_zero() {
            BigUint::one()
        } else {
            denominator
        },
    })
}

/// Kraft sum, exact where [`kraft_fraction`] applies and otherwise summed in
/// floating point from the shortest length up.
pub fn kraft_sum(radix: u8, lengths: &[usize]) -> f64 {
    if let Some(f) = kraft_fraction(radix, lengths) {
        return f.to_f64();
    }
    let mut sorted = lengths.to_vec();
    sorted.sort_unstable();
    let d = radix as f64;
    sorted.iter().map(|&l| d.powi(-(l as i32))).sum()
}

/// A fixed symbol-to-codeword map, one word per alphabet symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    radix: u8,
    words: Vec<Word>,
}

impl Codebook {
    pub fn new(radix: u8, words: Vec<Word>) -> Result<Self> {
        check_radix(radix)?;
        if words.is_empty() {
            return Err(invalid("a codebook needs at least one word"));
        }
        for w in &words {
            if let Some(&d) = w.0.iter().find(|&&d| d >= radix) {
                return Err(invalid(format!(
                    "word {w} has digit {d} not below radix {radix}"
                )));
            }
        }
        Ok(Codebook { radix, words })
    }

    /// Build from textual words, in alphabet order.
    pub fn from_strs(radix: u8, words: &[&str]) -> Result<Self> {
        check_radix(radix)?;
        let words = words
            .iter()
            .map(|w| Word::parse(w, radix))
            .collect::<Result<_>>()?;
        Self::new(radix, words)
    }

    /// Build from a symbol-name map, ordered by `alphabet`.
    pub fn from_map(
        radix: u8,
        alphabet: &[String],
        words: &BTreeMap<String, String>,
    ) -> Result<Self> {
        check_radix(radix)?;
        if let Some(extra) = words.keys().find(|k| !alphabet.contains(k)) {
            return Err(Error::UnknownSymbol(extra.clone()));
        }
        let words = alphabet
            .iter()
            .enumerate()
            .map(|(i, sym)| {
                let text = words.get(sym).ok_or(Error::MissingWord {
                    previous: None,
                    symbol: i,
                })?;
                Word::parse(text, radix)
            })
            .collect::<Result<_>>()?;
        Self::new(radix, words)
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.words.iter().map(Word::len).collect()
    }

    pub fn kraft_sum(&self) -> f64 {
        kraft_sum(self.radix, &self.lengths())
    }

    pub fn kraft_fraction(&self) -> Option<KraftFraction> {
        kraft_fraction(self.radix, &self.lengths())
    }

    /// Kraft's inequality, compared exactly whenever possible.
    pub fn satisfies_kraft(&self) -> bool {
        match self.kraft_fraction() {
            Some(f) => f.cmp_one() != Ordering::Greater,
            None => self.kraft_sum() <= 1.0,
        }
    }

    pub fn is_prefix_free(&self) -> bool {
        is_prefix_free(&self.words)
    }
}

impl SymbolCode for Codebook {
    fn radix(&self) -> u8 {
        self.radix
    }

    fn word(&self, _previous: Option<usize>, symbol: usize) -> Option<&Word> {
        self.words.get(symbol)
    }
}

/// A code whose word for each symbol depends on the previous symbol.
/// Within every context the defined words must be prefix-free.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDependentCode {
    radix: u8,
    initial: Vec<Option<Word>>,
    by_previous: Vec<Vec<Option<Word>>>,
}

impl StateDependentCode {
    pub fn new(
        radix: u8,
        initial: Vec<Option<Word>>,
        by_previous: Vec<Vec<Option<Word>>>,
    ) -> Result<Self> {
        check_radix(radix)?;
        let m = initial.len();
        if by_previous.len() != m || by_previous.iter().any(|r| r.len() != m) {
            return Err(invalid("state-dependent code tables must be m x m"));
        }
        let contexts = std::iter::once((None, &initial))
            .chain(by_previous.iter().enumerate().map(|(i, r)| (Some(i), r)));
        for (ctx, row) in contexts {
            for w in row.iter().flatten() {
                if let Some(&d) = w.0.iter().find(|&&d| d >= radix) {
                    return Err(invalid(format!(
                        "word {w} has digit {d} not below radix {radix}"
                    )));
                }
            }
            if !is_prefix_free(row.iter().flatten()) {
                return Err(invalid(format!(
                    "words in context {ctx:?} are not prefix-free"
                )));
            }
        }
        Ok(StateDependentCode {
            radix,
            initial,
            by_previous,
        })
    }

    /// Assign canonical words from lengths: within each context, symbols are
    /// taken by increasing length then alphabet order, and words count
    /// upward from zero (a canonical prefix code). For equal lengths this is
    /// plain counting in alphabet order.
    pub fn canonical(
        radix: u8,
        initial: &[Option<usize>],
        by_previous: &[Vec<Option<usize>>],
    ) -> Result<Self> {
        check_radix(radix)?;
        let initial_words = canonical_words(radix, initial)?;
        let by_previous = by_previous
            .iter()
            .map(|row| canonical_words(radix, row))
            .collect::<Result<_>>()?;
        Self::new(radix, initial_words, by_previous)
    }

    /// The natural code for a source whose initial and transition
    /// probabilities are all negative powers of `radix`: each symbol gets
    /// `log_D(1/p)` digits in its context.
    pub fn for_dyadic_source(source: &MooreMarkovSource, radix: u8) -> Result<Self> {
        check_radix(radix)?;
        let len_of = |p: f64| -> Result<Option<usize>> {
            if p == 0.0 {
                return Ok(None);
            }
            let l = -p.ln() / (radix as f64).ln();
            let r = l.round();
            if (l - r).abs() > 1e-9 || r < 1.0 {
                return Err(invalid(format!(
                    "probability {p} is not a positive power of 1/{radix}"
                )));
            }
            Ok(Some(r as usize))
        };
        let initial = source
            .initial()
            .iter()
            .map(|&p| len_of(p))
            .collect::<Result<Vec<_>>>()?;
        let by_previous = source
            .transition()
            .iter()
            .map(|row| row.iter().map(|&p| len_of(p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::canonical(radix, &initial, &by_previous)
    }

    pub fn initial_words(&self) -> &[Option<Word>] {
        &self.initial
    }

    pub fn successor_words(&self) -> &[Vec<Option<Word>>] {
        &self.by_previous
    }

    pub fn alphabet_len(&self) -> usize {
        self.initial.len()
    }

    /// Check that every start and transition the source can take has a word.
    pub fn check_covers(&self, source: &MooreMarkovSource) -> Result<()> {
        if source.len() != self.alphabet_len() {
            return Err(invalid("code and source alphabets differ in size"));
        }
        for x in 0..source.len() {
            if source.allows(None, x) && self.initial[x].is_none() {
                return Err(Error::MissingWord {
                    previous: None,
                    symbol: x,
                });
            }
            for y in 0..source.len() {
                if source.allows(Some(x), y) && self.by_previous[x][y].is_none() {
                    return Err(Error::MissingWord {
                        previous: Some(x),
                        symbol: y,
                    });
                }
            }
        }
        Ok(())
    }
}

fn canonical_words(radix: u8, lengths: &[Option<usize>]) -> Result<Vec<Option<Word>>> {
    let mut order: Vec<(usize, usize)> = lengths
        .iter()
        .enumerate()
        .filter_map(|(i, l)| l.map(|l| (l, i)))
        .collect();
    if let Some(&(0, _)) = order.iter().min() {
        return Err(invalid("codeword lengths must be positive"));
    }
    let ls: Vec<usize> = order.iter().map(|&(l, _)| l).collect();
    if kraft_sum(radix, &ls) > 1.0 + 1e-12 {
        return Err(invalid(
            "lengths violate Kraft's inequality; no prefix code exists",
        ));
    }
    order.sort_unstable();
    let mut out = vec![None; lengths.len()];
    // Counter held as base-D digits so long words cannot overflow.
    let mut counter: Vec<u8> = Vec::new();
    for (k, &(len, sym)) in order.iter().enumerate() {
        if k > 0 {
            increment(&mut counter, radix);
        }
        counter.resize(len, 0);
        out[sym] = Some(Word(counter.clone()));
    }
    Ok(out)
}

fn increment(digits: &mut [u8], radix: u8) {
    for d in digits.iter_mut().rev() {
        if *d + 1 < radix {
            *d += 1;
            return;
        }
        *d = 0;
    }
}

impl SymbolCode for StateDependentCode {
    fn radix(&self) -> u8 {
        self.radix
    }

    fn word(&self, previous: Option<usize>, symbol: usize) -> Option<&Word> {
        match previous {
            None => self.initial.get(symbol)?.as_ref(),
            Some(p) => self.by_previous.get(p)?.get(symbol)?.as_ref(),
        }
    }
}

/// Either kind of code, as loaded from a code file.
#[derive(Debug, Clone, PartialEq)]
pub enum Code {
    Fixed(Codebook),
    StateDependent(StateDependentCode),
}

impl Code {
    pub fn as_codebook(&self) -> Option<&Codebook> {
        match self {
            Code::Fixed(c) => Some(c),
            Code::StateDependent(_) => None,
        }
    }
}

impl SymbolCode for Code {
    fn radix(&self) -> u8 {
        match self {
            Code::Fixed(c) => c.radix(),
            Code::StateDependent(c) => c.radix(),
        }
    }

    fn word(&self, previous: Option<usize>, symbol: usize) -> Option<&Word> {
        match self {
            Code::Fixed(c) => c.word(previous, symbol),
            Code::StateDependent(c) => c.word(previous, symbol),
        }
    }
}

/// Exact `E[l(X_1 ... X_n)]` from the forward marginals of `source`.
/// Words are only required where the source has positive probability.
pub fn expected_length<C: SymbolCode + ?Sized>(
    code: &C,
    source: &MooreMarkovSource,
    n: usize,
) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let m = source.len();
    let mut total = 0.0;
    for x in 0..m {
        let p = source.initial()[x];
        if p > 0.0 {
            total += p * code.word_or_err(None, x)?.len() as f64;
        }
    }
    let mut marginal = source.initial().to_vec();
    for _ in 2..=n {
        for (y, &py) in marginal.iter().enumerate() {
            if py == 0.0 {
                continue;
            }
            for (x, &pyx) in source.transition()[y].iter().enumerate() {
                if pyx > 0.0 {
                    total += py * pyx * code.word_or_err(Some(y), x)?.len() as f64;
                }
            }
        }
        marginal = source.step(&marginal);
    }
    Ok(total)
}
