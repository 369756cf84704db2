//! Capacity of discrete noiseless channels.
//!
//! For an unconstrained channel with symbol durations `t_1..t_m` the
//! capacity is `log2 X0`, `X0` the largest real root of
//! `sum_i X^{-t_i} = 1`. For a finite-state channel with durations
//! `b_ij^(s)` it is `log2 W0`, `W0` the largest real root of
//! `det(Q(W) - I) = 0` where `Q(W)_ij = sum_s W^{-b_ij^(s)}`.
//!
//! On a strongly connected graph `rho(Q(W))` is strictly decreasing in `W`,
//! and the largest determinant root is the point where the Perron root
//! crosses 1. That crossing is found by bisection, which works equally for
//! non-integer durations and avoids expanding the determinant.

use serde::Serialize;

use crate::code::{Codebook, SymbolCode};
use crate::decodability::{build_q_moore, spectral_radius, RHO_TOLERANCE};
use crate::error::{invalid, Error, Result};
use crate::graph;
use crate::source::MooreMarkovSource;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTransition {
    pub from: usize,
    pub to: usize,
    pub durations: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Unconstrained {
        durations: Vec<f64>,
    },
    FiniteState {
        states: usize,
        transitions: Vec<ChannelTransition>,
    },
}

fn check_durations(durations: &[f64]) -> Result<()> {
    if durations.is_empty() {
        return Err(invalid("at least one symbol duration is required"));
    }
    match durations.iter().find(|&&t| !(t.is_finite() && t > 0.0)) {
        Some(t) => Err(invalid(format!(
            "duration {t} is not a positive finite number"
        ))),
        None => Ok(()),
    }
}

impl ChannelSpec {
    pub fn unconstrained(durations: Vec<f64>) -> Result<Self> {
        check_durations(&durations)?;
        Ok(ChannelSpec::Unconstrained { durations })
    }

    pub fn finite_state(states: usize, transitions: Vec<ChannelTransition>) -> Result<Self> {
        if transitions.is_empty() {
            return Err(invalid(
                "a finite-state channel needs at least one transition",
            ));
        }
        for t in &transitions {
            if t.from >= states || t.to >= states {
                return Err(invalid(format!(
                    "transition {} -> {} names a missing state",
                    t.from, t.to
                )));
            }
            check_durations(&t.durations)?;
        }
        Ok(ChannelSpec::FiniteState {
            states,
            transitions,
        })
    }

    /// The channel whose states are source symbols, with an edge `i -> j`
    /// of duration `l_j` for every allowed transition.
    pub fn from_source_and_code(source: &MooreMarkovSource, code: &Codebook) -> Result<Self> {
        let m = source.len();
        if code.words().len() != m {
            return Err(invalid("code and source alphabets differ in size"));
        }
        let lengths = code.lengths();
        let transitions = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .filter(|&(i, j)| source.transition()[i][j] > 0.0)
            .map(|(from, to)| ChannelTransition {
                from,
                to,
                durations: vec![lengths[to] as f64],
            })
            .collect();
        Self::finite_state(m, transitions)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Capacity {
    pub root: f64,
    pub capacity_bits: f64,
    /// `|det(Q(W0) - I)|`, reported for finite-state channels as a cross-check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determinant_residual: Option<f64>,
}

impl Capacity {
    fn from_root(root: f64) -> Self {
        Capacity {
            root,
            capacity_bits: root.log2(),
            determinant_residual: None,
        }
    }
}

/// Bisection for the root of a function that is positive at `lo`, nonpositive
/// at `hi` and decreasing in between. Returns early on an exact zero.
fn bisect(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    if f(hi)? == 0.0 {
        return Ok(hi);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid)?;
        if v == 0.0 {
            return Ok(mid);
        } else if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Capacity of an unconstrained channel, in bits per unit time.
pub fn unconstrained_capacity(durations: &[f64], tol: f64) -> Result<Capacity> {
    check_durations(durations)?;
    if !(tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    if durations.len() == 1 {
        // X^{-t} < 1 for every X > 1: the root is X0 = 1.
        return Ok(Capacity::from_root(1.0));
    }
    let f =
        |x: f64| -> Result<f64> { Ok(durations.iter().map(|&t| x.powf(-t)).sum::<f64>() - 1.0) };
    let t_min = durations.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = (durations.len() as f64).powf(1.0 / t_min).max(2.0);
    while f(hi)? > 0.0 {
        hi *= 2.0;
    }
    bisect(1.0, hi, tol, f).map(Capacity::from_root)
}

fn q_of_w(states: usize, transitions: &[ChannelTransition], w: f64) -> Vec<Vec<f64>> {
    let mut q = vec![vec![0.0; states]; states];
    for t in transitions {
        q[t.from][t.to] += t.durations.iter().map(|&b| w.powf(-b)).sum::<f64>();
    }
    q
}

/// Capacity of a finite-state channel, in bits per unit time. The graph
/// restricted to states that carry transitions must be strongly connected.
pub fn finite_state_capacity(
    states: usize,
    transitions: &[ChannelTransition],
    tol: f64,
) -> Result<Capacity> {
    if !(tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    if transitions.is_empty() {
        return Err(invalid(
            "a finite-state channel needs at least one transition",
        ));
    }
    let mut active = vec![false; states];
    for t in transitions {
        check_durations(&t.durations)?;
        if t.from >= states || t.to >= states {
            return Err(invalid(format!(
                "transition {} -> {} names a missing state",
                t.from, t.to
            )));
        }
        active[t.from] = true;
        active[t.to] = true;
    }
    // Re-index onto the active states.
    let index: Vec<Option<usize>> = active
        .iter()
        .scan(0, |next, &a| {
            Some(a.then(|| {
                *next += 1;
                *next - 1
            }))
        })
        .collect();
    let n = active.iter().filter(|&&a| a).count();
    let local: Vec<ChannelTransition> = transitions
        .iter()
        .map(|t| ChannelTransition {
            from: index[t.from].unwrap(),
            to: index[t.to].unwrap(),
            durations: t.durations.clone(),
        })
        .collect();
    if !graph::is_strongly_connected(&q_of_w(n, &local, 1.0)) {
        return Err(Error::NotStronglyConnected);
    }

    let rho_tol = (tol * 0.1).max(1e-14);
    let g = |w: f64| -> Result<f64> { Ok(spectral_radius(&q_of_w(n, &local, w), rho_tol)? - 1.0) };

    let root = if g(1.0)? <= rho_tol {
        1.0
    } else {
        let b_min = local
            .iter()
            .flat_map(|t| t.durations.iter().copied())
            .fold(f64::INFINITY, f64::min);
        let mut row_counts = vec![0usize; n];
        for t in &local {
            row_counts[t.from] += t.durations.len();
        }
        let r_max = *row_counts.iter().max().unwrap() as f64;
        let mut hi = r_max.powf(1.0 / b_min).max(2.0);
        while g(hi)? > 0.0 {
            hi *= 2.0;
        }
        bisect(1.0, hi, tol, g)?
    };

    let mut q = nalgebra::DMatrix::from_fn(n, n, |i, j| q_of_w(n, &local, root)[i][j]);
    q -= nalgebra::DMatrix::identity(n, n);
    Ok(Capacity {
        determinant_residual: Some(q.determinant().abs()),
        ..Capacity::from_root(root)
    })
}

/// Dispatch on the channel kind.
pub fn capacity(spec: &ChannelSpec, tol: f64) -> Result<Capacity> {
    match spec {
        ChannelSpec::Unconstrained { durations } => unconstrained_capacity(durations, tol),
        ChannelSpec::FiniteState {
            states,
            transitions,
        } => finite_state_capacity(*states, transitions, tol),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Equivalence {
    pub rho: f64,
    pub capacity: f64,
    pub consistent: bool,
}

/// Compare the spectral test `rho(Q) <= 1` with the statement that the
/// channel built from the source graph and the codeword lengths has
/// capacity at most `log2 D`. The two must agree.
pub fn verify_mcmillan_capacity_equivalence(
    source: &MooreMarkovSource,
    code: &Codebook,
) -> Result<Equivalence> {
    if !source.is_irreducible() {
        return Err(Error::NotStronglyConnected);
    }
    let rho = build_q_moore(source, code)?
        .spectral_radius(crate::decodability::DEFAULT_SPECTRAL_TOLERANCE)?;
    let ChannelSpec::FiniteState {
        states,
        transitions,
    } = ChannelSpec::from_source_and_code(source, code)?
    else {
        unreachable!()
    };
    let cap = finite_state_capacity(states, &transitions, DEFAULT_TOLERANCE)?.capacity_bits;
    let log_d = (code.radix() as f64).log2();
    Ok(Equivalence {
        rho,
        capacity: cap,
        consistent: (rho <= 1.0 + RHO_TOLERANCE) == (cap <= log_d + RHO_TOLERANCE),
    })
}
