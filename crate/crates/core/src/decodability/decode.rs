//! Trellis decoder for codes that are uniquely decodable for a source.
//!
//! Nodes are `(digit offset, last symbol)`. Every node keeps the number of
//! parses reaching it (saturated at two) and up to two incoming edges, which
//! is enough to recover either the unique parse or two distinct ones.

use crate::code::SymbolCode;
use crate::error::{Error, Result};
use crate::source::{MooreMarkovSource, SymbolSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct NodeRef {
    offset: usize,
    /// `None` is the start node at offset 0.
    last: Option<usize>,
}

#[derive(Debug, Clone, Default)]
struct Cell {
    count: u8,
    parents: Vec<NodeRef>,
}

struct Trellis {
    cells: Vec<Vec<Cell>>,
}

impl Trellis {
    fn cell(&self, node: NodeRef) -> &Cell {
        &self.cells[node.offset][node.last.expect("start node has no cell")]
    }

    fn count(&self, node: NodeRef) -> u8 {
        match node.last {
            None => 1,
            Some(_) => self.cell(node).count,
        }
    }

    fn add(&mut self, to: NodeRef, from: NodeRef) {
        let c = self.count(from);
        let cell = &mut self.cells[to.offset][to.last.unwrap()];
        cell.count = (cell.count + c).min(2);
        if cell.parents.len() < 2 {
            cell.parents.push(from);
        }
    }

    fn one_parse(&self, mut node: NodeRef) -> SymbolSequence {
        let mut out = Vec::new();
        while let Some(s) = node.last {
            out.push(s);
            node = self.cell(node).parents[0];
        }
        out.reverse();
        out
    }

    fn two_parses(&self, node: NodeRef) -> (SymbolSequence, SymbolSequence) {
        let cell = self.cell(node);
        let sym = node.last.unwrap();
        let (mut a, mut b) = if cell.parents.len() >= 2 {
            (
                self.one_parse(cell.parents[0]),
                self.one_parse(cell.parents[1]),
            )
        } else {
            self.two_parses(cell.parents[0])
        };
        a.push(sym);
        b.push(sym);
        (a, b)
    }
}

/// Recover the producible sequence whose encoding is `digits`.
///
/// Fails with [`Error::NoParse`] if there is none and with
/// [`Error::AmbiguousParse`] (carrying two parses) if there are several,
/// which means the code is not uniquely decodable for the source.
pub fn decode<C: SymbolCode + ?Sized>(
    source: &MooreMarkovSource,
    code: &C,
    digits: &[u8],
) -> Result<SymbolSequence> {
    let m = source.len();
    let n = digits.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut trellis = Trellis {
        cells: vec![vec![Cell::default(); m]; n + 1],
    };
    let start = NodeRef {
        offset: 0,
        last: None,
    };
    let mut frontier = vec![start];
    for offset in 0..n {
        if offset > 0 {
            frontier = (0..m)
                .map(|s| NodeRef {
                    offset,
                    last: Some(s),
                })
                .filter(|&node| trellis.count(node) > 0)
                .collect();
        }
        for from in frontier.drain(..) {
            for s in 0..m {
                if !source.allows(from.last, s) {
                    continue;
                }
                let w = code.word_or_err(from.last, s)?.digits();
                if digits[offset..].starts_with(w) {
                    let to = NodeRef {
                        offset: offset + w.len(),
                        last: Some(s),
                    };
                    trellis.add(to, from);
                }
            }
        }
    }
    let finals: Vec<NodeRef> = (0..m)
        .map(|s| NodeRef {
            offset: n,
            last: Some(s),
        })
        .filter(|&node| trellis.count(node) > 0)
        .collect();
    let total: u32 = finals.iter().map(|&f| trellis.count(f) as u32).sum();
    match total {
        0 => Err(Error::NoParse),
        1 => Ok(trellis.one_parse(finals[0])),
        _ => {
            let (first, second) = match finals.iter().find(|&&f| trellis.count(f) >= 2) {
                Some(&f) => trellis.two_parses(f),
                None => (trellis.one_parse(finals[0]), trellis.one_parse(finals[1])),
            };
            Err(Error::AmbiguousParse { first, second })
        }
    }
}
