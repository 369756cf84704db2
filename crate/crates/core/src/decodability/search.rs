//! Exact unique-decodability test for a code over a Moore source.
//!
//! This extends the Sardinas-Patterson idea to sources whose sequences are
//! restricted by a transition graph. Two candidate parses of the same digit
//! string are grown in lockstep; a search state records
//!
//! - the last symbol of each parse (the Markov context of each),
//! - the dangling digits `d` that the parse in front has emitted but the one
//!   behind has not matched yet (always a proper suffix of some codeword),
//! - which of the two parses is in front.
//!
//! Before the parses separate they are equal, and only the shared last
//! symbol matters. The parse behind is extended by any symbol the source
//! allows whose codeword is consistent with `d`. Reaching `d = ε` after the
//! parses have separated means two different producible sequences with the
//! same encoding. The state space is finite, so breadth-first search decides
//! the question; parent links give back a witness pair.

use std::collections::{HashMap, VecDeque};

use super::{DecodabilityVerdict, Witness};
use crate::code::SymbolCode;
use crate::error::Result;
use crate::source::MooreMarkovSource;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    /// Both parses are the same producible sequence ending in `last`.
    Agreed { last: usize },
    Diverged {
        ahead_last: usize,
        behind_last: usize,
        pending: Vec<u8>,
        first_ahead: bool,
    },
}

/// Symbols appended to the first and second parse along one edge.
#[derive(Debug, Clone, Copy)]
struct Append {
    first: Option<usize>,
    second: Option<usize>,
}

struct Search<'a, C: ?Sized> {
    source: &'a MooreMarkovSource,
    code: &'a C,
    parent: HashMap<Node, (Option<Node>, Append)>,
    queue: VecDeque<Node>,
}

impl<'a, C: SymbolCode + ?Sized> Search<'a, C> {
    fn allowed(&self, ctx: Option<usize>) -> impl Iterator<Item = usize> + 'a {
        let source = self.source;
        (0..source.len()).filter(move |&s| source.allows(ctx, s))
    }

    fn push(&mut self, node: Node, from: Option<&Node>, step: Append) {
        if !self.parent.contains_key(&node) {
            self.parent.insert(node.clone(), (from.cloned(), step));
            self.queue.push_back(node);
        }
    }

    fn witness(&self, from: Option<&Node>, last: Append) -> Witness {
        let mut steps = vec![last];
        let mut cur = from.cloned();
        while let Some(node) = cur {
            let (prev, step) = &self.parent[&node];
            steps.push(*step);
            cur = prev.clone();
        }
        let (mut first, mut second) = (Vec::new(), Vec::new());
        for step in steps.iter().rev() {
            first.extend(step.first);
            second.extend(step.second);
        }
        Witness::new(first, second)
    }

    /// Both parses take one symbol from context `ctx`.
    fn branch(&mut self, ctx: Option<usize>, from: Option<&Node>) -> Result<Option<Witness>> {
        let symbols: Vec<usize> = self.allowed(ctx).collect();
        for &a in &symbols {
            for &b in &symbols {
                let step = Append {
                    first: Some(a),
                    second: Some(b),
                };
                if a == b {
                    self.push(Node::Agreed { last: a }, from, step);
                    continue;
                }
                let wa = self.code.word_or_err(ctx, a)?.digits();
                let wb = self.code.word_or_err(ctx, b)?.digits();
                // The reversed pair (b, a) covers the case where wb is shorter.
                if !wb.starts_with(wa) {
                    continue;
                }
                if wa.len() == wb.len() {
                    return Ok(Some(self.witness(from, step)));
                }
                let node = Node::Diverged {
                    ahead_last: b,
                    behind_last: a,
                    pending: wb[wa.len()..].to_vec(),
                    first_ahead: false,
                };
                self.push(node, from, step);
            }
        }
        Ok(None)
    }

    fn advance(&mut self, node: &Node) -> Result<Option<Witness>> {
        let Node::Diverged {
            ahead_last,
            behind_last,
            pending,
            first_ahead,
        } = node
        else {
            unreachable!("advance is only called on diverged states")
        };
        let symbols: Vec<usize> = self.allowed(Some(*behind_last)).collect();
        for s in symbols {
            let w = self.code.word_or_err(Some(*behind_last), s)?.digits();
            let step = if *first_ahead {
                Append {
                    first: None,
                    second: Some(s),
                }
            } else {
                Append {
                    first: Some(s),
                    second: None,
                }
            };
            if w == pending.as_slice() {
                return Ok(Some(self.witness(Some(node), step)));
            } else if pending.starts_with(w) {
                let next = Node::Diverged {
                    ahead_last: *ahead_last,
                    behind_last: s,
                    pending: pending[w.len()..].to_vec(),
                    first_ahead: *first_ahead,
                };
                self.push(next, Some(node), step);
            } else if w.starts_with(pending) {
                let next = Node::Diverged {
                    ahead_last: s,
                    behind_last: *ahead_last,
                    pending: w[pending.len()..].to_vec(),
                    first_ahead: !*first_ahead,
                };
                self.push(next, Some(node), step);
            }
        }
        Ok(None)
    }
}

/// Decide whether two different producible sequences can share an encoding.
pub fn test_unique_decodability<C: SymbolCode + ?Sized>(
    source: &MooreMarkovSource,
    code: &C,
) -> Result<DecodabilityVerdict> {
    let mut search = Search {
        source,
        code,
        parent: HashMap::new(),
        queue: VecDeque::new(),
    };
    if let Some(w) = search.branch(None, None)? {
        return Ok(DecodabilityVerdict::ambiguous(w));
    }
    while let Some(node) = search.queue.pop_front() {
        let found = match node {
            Node::Agreed { last } => search.branch(Some(last), Some(&node))?,
            Node::Diverged { .. } => search.advance(&node)?,
        };
        if let Some(w) = found {
            return Ok(DecodabilityVerdict::ambiguous(w));
        }
    }
    Ok(DecodabilityVerdict::decodable())
}
