//! The four-symbol constrained source used throughout the crate's examples,
//! with its two binary codes and an unconstrained variant.
//!
//! The source on `{A, B, C, D}` never moves from `A` to `B`/`D` or from `B`
//! to `A`/`C`. The fixed "alternative" code `A->0, B->1, C->01, D->10` is not
//! uniquely decodable in the classic sense (`AB` and `C` both give `01`) but
//! is decodable for this source, with expected length `1.5 n` against a
//! joint entropy of `2 + 1.5 (n - 1)`.

use crate::capacity::ChannelSpec;
use crate::code::{Codebook, StateDependentCode};
use crate::format::{load_channel, load_code, load_source};
use crate::source::MooreMarkovSource;

pub const SOURCE_JSON: &str = include_str!("../data/source.json");
pub const FULL_SUPPORT_SOURCE_JSON: &str = include_str!("../data/full_support_source.json");
pub const ALTERNATIVE_CODE_JSON: &str = include_str!("../data/alternative_code.json");
pub const CLASSIC_CODE_JSON: &str = include_str!("../data/classic_code.json");
pub const CHANNEL_JSON: &str = include_str!("../data/channel.json");

fn moore(json: &str) -> MooreMarkovSource {
    load_source(json)
        .and_then(|s| s.as_moore().cloned())
        .expect("bundled source is valid")
}

/// The constrained source, started from its (uniform) stationary law.
pub fn source() -> MooreMarkovSource {
    moore(SOURCE_JSON)
}

/// Same alphabet, every transition allowed with probability 1/4.
pub fn full_support_source() -> MooreMarkovSource {
    moore(FULL_SUPPORT_SOURCE_JSON)
}

pub fn alternative_code() -> Codebook {
    load_code(ALTERNATIVE_CODE_JSON, source().alphabet())
        .ok()
        .and_then(|c| c.as_codebook().cloned())
        .expect("bundled code is valid")
}

/// State-dependent code with two digits for the first symbol, then one digit
/// after `A`/`B` and two after `C`/`D`.
pub fn classic_code() -> StateDependentCode {
    match load_code(CLASSIC_CODE_JSON, source().alphabet()).expect("bundled code is valid") {
        crate::code::Code::StateDependent(c) => c,
        crate::code::Code::Fixed(_) => unreachable!("classic code is state dependent"),
    }
}

/// The source's transition graph with the alternative code's lengths as
/// symbol durations.
pub fn channel() -> ChannelSpec {
    load_channel(CHANNEL_JSON).expect("bundled channel is valid")
}
