//! JSON documents for sources, codes and channels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::capacity::{ChannelSpec, ChannelTransition};
use crate::code::{Code, Codebook, StateDependentCode, SymbolCode, Word};
use crate::error::{invalid, Error, Result};
use crate::source::{
    validate_mealy, validate_moore, MealySource, MealyTransition, MooreMarkovSource,
    ValidationReport,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionDoc {
    pub from: String,
    pub to: String,
    pub symbols: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceDoc {
    Moore {
        alphabet: Vec<String>,
        transition: Vec<Vec<f64>>,
        initial: Vec<f64>,
    },
    Mealy {
        states: Vec<String>,
        alphabet: Vec<String>,
        transitions: Vec<TransitionDoc>,
        initial_states: Vec<String>,
    },
}

/// A loaded source of either form.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Moore(MooreMarkovSource),
    Mealy(MealySource),
}

impl Source {
    pub fn alphabet(&self) -> &[String] {
        match self {
            Source::Moore(s) => s.alphabet(),
            Source::Mealy(s) => s.alphabet(),
        }
    }

    pub fn as_moore(&self) -> Result<&MooreMarkovSource> {
        match self {
            Source::Moore(s) => Ok(s),
            Source::Mealy(_) => Err(invalid(
                "this operation needs a Moore-form (kind = \"moore\") source",
            )),
        }
    }
}

fn mealy_transitions(docs: &[TransitionDoc]) -> Vec<MealyTransition> {
    docs.iter()
        .map(|t| MealyTransition {
            from: t.from.clone(),
            to: t.to.clone(),
            symbols: t.symbols.clone(),
        })
        .collect()
}

impl SourceDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(format!("source file: {e}")))
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            SourceDoc::Moore {
                alphabet,
                transition,
                initial,
            } => validate_moore(alphabet, transition, initial),
            SourceDoc::Mealy {
                states,
                alphabet,
                transitions,
                initial_states,
            } => validate_mealy(
                states,
                alphabet,
                &mealy_transitions(transitions),
                initial_states,
            ),
        }
    }

    pub fn build(self) -> Result<Source> {
        match self {
            SourceDoc::Moore {
                alphabet,
                transition,
                initial,
            } => Ok(Source::Moore(MooreMarkovSource::new(
                alphabet, transition, initial,
            )?)),
            SourceDoc::Mealy {
                states,
                alphabet,
                transitions,
                initial_states,
            } => Ok(Source::Mealy(MealySource::new(
                states,
                alphabet,
                &mealy_transitions(&transitions),
                &initial_states,
            )?)),
        }
    }
}

impl From<&MooreMarkovSource> for SourceDoc {
    fn from(s: &MooreMarkovSource) -> Self {
        SourceDoc::Moore {
            alphabet: s.alphabet().to_vec(),
            transition: s.transition().to_vec(),
            initial: s.initial().to_vec(),
        }
    }
}

pub fn load_source(text: &str) -> Result<Source> {
    SourceDoc::from_json(text)?.build()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CodeDoc {
    Codebook {
        radix: u8,
        words: BTreeMap<String, String>,
    },
    StateDependent {
        radix: u8,
        initial: BTreeMap<String, String>,
        by_previous: BTreeMap<String, BTreeMap<String, String>>,
    },
}

fn word_table(
    radix: u8,
    alphabet: &[String],
    words: &BTreeMap<String, String>,
) -> Result<Vec<Option<Word>>> {
    if let Some(extra) = words.keys().find(|k| !alphabet.contains(k)) {
        return Err(Error::UnknownSymbol(extra.clone()));
    }
    alphabet
        .iter()
        .map(|sym| words.get(sym).map(|w| Word::parse(w, radix)).transpose())
        .collect()
}

impl CodeDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(format!("code file: {e}")))
    }

    /// Resolve symbol names against the source alphabet.
    pub fn build(&self, alphabet: &[String]) -> Result<Code> {
        match self {
            CodeDoc::Codebook { radix, words } => {
                Ok(Code::Fixed(Codebook::from_map(*radix, alphabet, words)?))
            }
            CodeDoc::StateDependent {
                radix,
                initial,
                by_previous,
            } => {
                if let Some(extra) = by_previous.keys().find(|k| !alphabet.contains(k)) {
                    return Err(Error::UnknownSymbol(extra.clone()));
                }
                let empty = BTreeMap::new();
                let initial = word_table(*radix, alphabet, initial)?;
                let rows = alphabet
                    .iter()
                    .map(|prev| {
                        word_table(*radix, alphabet, by_previous.get(prev).unwrap_or(&empty))
                    })
                    .collect::<Result<_>>()?;
                Ok(Code::StateDependent(StateDependentCode::new(
                    *radix, initial, rows,
                )?))
            }
        }
    }

    pub fn from_code(code: &Code, alphabet: &[String]) -> Self {
        let table =
            |row: &mut dyn Iterator<Item = (usize, Option<&Word>)>| -> BTreeMap<String, String> {
                row.filter_map(|(i, w)| w.map(|w| (alphabet[i].clone(), w.to_string())))
                    .collect()
            };
        match code {
            Code::Fixed(c) => CodeDoc::Codebook {
                radix: c.radix(),
                words: table(&mut c.words().iter().enumerate().map(|(i, w)| (i, Some(w)))),
            },
            Code::StateDependent(c) => CodeDoc::StateDependent {
                radix: c.radix(),
                initial: table(
                    &mut c
                        .initial_words()
                        .iter()
                        .enumerate()
                        .map(|(i, w)| (i, w.as_ref())),
                ),
                by_previous: c
                    .successor_words()
                    .iter()
                    .enumerate()
                    .map(|(p, row)| {
                        (
                            alphabet[p].clone(),
                            table(&mut row.iter().enumerate().map(|(i, w)| (i, w.as_ref()))),
                        )
                    })
                    .collect(),
            },
        }
    }
}

pub fn load_code(text: &str, alphabet: &[String]) -> Result<Code> {
    CodeDoc::from_json(text)?.build(alphabet)
}

/// A state reference in a channel file: an index or a state name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelTransitionDoc {
    pub from: StateRef,
    pub to: StateRef,
    pub durations: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelDoc {
    Unconstrained {
        durations: Vec<f64>,
    },
    FiniteState {
        states: Vec<String>,
        transitions: Vec<ChannelTransitionDoc>,
    },
}

impl ChannelDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(format!("channel file: {e}")))
    }

    pub fn build(&self) -> Result<ChannelSpec> {
        match self {
            ChannelDoc::Unconstrained { durations } => {
                ChannelSpec::unconstrained(durations.clone())
            }
            ChannelDoc::FiniteState {
                states,
                transitions,
            } => {
                let resolve = |r: &StateRef| -> Result<usize> {
                    match r {
                        StateRef::Index(i) if *i < states.len() => Ok(*i),
                        StateRef::Index(i) => Err(invalid(format!("state index {i} out of range"))),
                        StateRef::Name(n) => states
                            .iter()
                            .position(|s| s == n)
                            .ok_or_else(|| invalid(format!("unknown state `{n}`"))),
                    }
                };
                let ts = transitions
                    .iter()
                    .map(|t| {
                        Ok(ChannelTransition {
                            from: resolve(&t.from)?,
                            to: resolve(&t.to)?,
                            durations: t.durations.clone(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                ChannelSpec::finite_state(states.len(), ts)
            }
        }
    }
}

pub fn load_channel(text: &str) -> Result<ChannelSpec> {
    ChannelDoc::from_json(text)?.build()
}
