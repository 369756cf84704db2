//! Lossless coding over constrained sources.
//!
//! A constrained source cannot emit some finite symbol sequences. For such
//! sources a code can be uniquely decodable *for the source* while failing
//! Kraft's inequality, and its expected length can fall below the joint
//! entropy of the symbols it encodes. This crate provides:
//!
//! - [`source`]: Moore and Mealy source models, producibility, entropy,
//!   stationary distributions and sampling;
//! - [`code`]: fixed and state-dependent codes, Kraft sums, exact expected
//!   lengths;
//! - [`decodability`]: the spectral-radius condition `rho(Q) <= 1`, an exact
//!   decodability test with witnesses, a bounded brute-force oracle and a
//!   trellis decoder;
//! - [`capacity`]: noiseless channel capacities and their equivalence with
//!   the Kraft-type conditions;
//! - [`simulate`]: seeded Monte Carlo checks of expected lengths;
//! - [`format`]: the JSON file formats; [`example`]: bundled example data;
//!   [`sweep`]: seeded random families for cross-checks.

pub mod capacity;
pub mod code;
pub mod decodability;
pub mod error;
pub mod example;
pub mod format;
mod graph;
pub mod simulate;
pub mod source;
pub mod sweep;

pub use capacity::{Capacity, ChannelSpec, ChannelTransition};
pub use code::{expected_length, Code, Codebook, StateDependentCode, SymbolCode, Word};
pub use decodability::{
    analyze, brute_force_ud, check_necessary_condition, count_by_code_length, decode,
    test_unique_decodability, AnalysisReport, DecodabilityVerdict, NecessaryCondition, QMatrix,
    Witness,
};
pub use error::{Error, Result};
pub use format::Source;
pub use source::{MealySource, MooreMarkovSource, SymbolSequence};
