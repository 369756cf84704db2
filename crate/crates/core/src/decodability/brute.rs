//! Bounded-exhaustive oracles.

use std::collections::{BTreeMap, HashMap};

use super::{DecodabilityVerdict, Witness};
use crate::code::SymbolCode;
use crate::error::{Error, Result};
use crate::source::{MooreMarkovSource, ENUMERATION_LIMIT};

/// Encode every producible sequence of length `1..=max_symbols` and report
/// the first two that share an encoding.
///
/// A "decodable" answer only means no collision exists among sequences up
/// to the bound; longer sequences are not examined.
pub fn brute_force_ud<C: SymbolCode + ?Sized>(
    source: &MooreMarkovSource,
    code: &C,
    max_symbols: usize,
) -> Result<DecodabilityVerdict> {
    let total = (1..=max_symbols).fold(0u128, |acc, k| {
        acc.saturating_add(source.count_producible(k))
    });
    if total > ENUMERATION_LIMIT {
        return Err(Error::EnumerationLimit {
            count: total,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut seen: HashMap<Vec<u8>, Vec<usize>> = HashMap::with_capacity(total as usize);
    let mut failure = None;
    let mut collision = None;
    let mut current = Vec::with_capacity(max_symbols);
    for k in 1..=max_symbols {
        source.extend_producible(k, &mut current, &mut |seq| {
            if collision.is_some() || failure.is_some() {
                return;
            }
            match code.encode(seq) {
                Err(e) => failure = Some(e),
                Ok(digits) => match seen.get(&digits) {
                    Some(other) => collision = Some(Witness::new(other.clone(), seq.to_vec())),
                    None => {
                        seen.insert(digits, seq.to_vec());
                    }
                },
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if let Some(w) = collision {
            return Ok(DecodabilityVerdict::ambiguous(w));
        }
    }
    Ok(DecodabilityVerdict::decodable())
}

/// `N(r)`: how many producible sequences of exactly `k` symbols encode to
/// `r` digits. Computed by dynamic programming over (last symbol, length).
pub fn count_by_code_length<C: SymbolCode + ?Sized>(
    source: &MooreMarkovSource,
    code: &C,
    k: usize,
) -> Result<BTreeMap<usize, u64>> {
    let m = source.len();
    // layer[last] maps encoded length -> count
    let mut layer: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); m];
    if k == 0 {
        return Ok(BTreeMap::from([(0, 1)]));
    }
    for s in 0..m {
        if source.allows(None, s) {
            layer[s].insert(code.word_or_err(None, s)?.len(), 1);
        }
    }
    for _ in 1..k {
        let mut next: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); m];
        for (prev, counts) in layer.iter().enumerate() {
            if counts.is_empty() {
                continue;
            }
            for s in 0..m {
                if !source.allows(Some(prev), s) {
                    continue;
                }
                let l = code.word_or_err(Some(prev), s)?.len();
                for (&r, &c) in counts {
                    let slot = next[s].entry(r + l).or_insert(0);
                    *slot = slot.checked_add(c).ok_or(Error::CountOverflow)?;
                }
            }
        }
        layer = next;
    }
    let mut out = BTreeMap::new();
    for counts in layer {
        for (r, c) in counts {
            let slot = out.entry(r).or_insert(0u64);
            *slot = slot.checked_add(c).ok_or(Error::CountOverflow)?;
        }
    }
    Ok(out)
}
