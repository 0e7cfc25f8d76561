//! Belief-interval dominance decision over singletons.
//!
//! A singleton `θ` is chosen only when `Bel(θ) > Pl(θ')` holds strictly for
//! every other singleton `θ'`. Otherwise the outcome is
//! [`DecisionKind::Indeterminate`]. The whole-frame fallback (`Bel(Θ) = 1 >
//! Pl(∅) = 0`) always holds and carries no information, so it is not part of
//! the outcome space. Comparisons are exact; near-ties stay indeterminate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::Subset;
use crate::mass::MassFunction;
use crate::measures::{belief_interval, BeliefInterval};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "element", rename_all = "lowercase")]
pub enum DecisionKind {
    /// Index of the chosen frame element.
    Singleton(usize),
    Indeterminate,
}

/// One pairwise test `Bel(candidate) > Pl(rival)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison<T> {
    pub candidate: usize,
    pub rival: usize,
    pub bel: T,
    pub pl: T,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionOutcome<T> {
    pub kind: DecisionKind,
    /// One interval per frame element, in frame order.
    pub intervals: Vec<BeliefInterval<T>>,
    /// For a singleton outcome, the inequalities that held for the winner;
    /// otherwise every comparison that failed.
    pub justification: Vec<Comparison<T>>,
}

impl<T> DecisionOutcome<T> {
    pub fn is_indeterminate(&self) -> bool {
        self.kind == DecisionKind::Indeterminate
    }
}

pub fn decide<T: Scalar>(m: &MassFunction<T>) -> Result<DecisionOutcome<T>> {
    let n = m.frame().len();
    if n < 2 {
        return Err(Error::TooFewAlternatives(n));
    }
    let intervals = (0..n)
        .map(|i| belief_interval(m, Subset::from_bits(1 << i)))
        .collect::<Result<Vec<_>>>()?;

    let mut failed = Vec::new();
    let mut winner = None;
    for (candidate, ci) in intervals.iter().enumerate() {
        let comparisons: Vec<Comparison<T>> = intervals
            .iter()
            .enumerate()
            .filter(|(rival, _)| *rival != candidate)
            .map(|(rival, ri)| Comparison {
                candidate,
                rival,
                bel: ci.bel,
                pl: ri.pl,
                holds: ci.bel > ri.pl,
            })
            .collect();
        if comparisons.iter().all(|c| c.holds) {
            // Bel ≤ Pl for every element rules out a second winner.
            winner = Some((candidate, comparisons));
            break;
        }
        failed.extend(comparisons.into_iter().filter(|c| !c.holds));
    }

    Ok(match winner {
        Some((index, held)) => DecisionOutcome {
            kind: DecisionKind::Singleton(index),
            intervals,
            justification: held,
        },
        None => DecisionOutcome {
            kind: DecisionKind::Indeterminate,
            intervals,
            justification: failed,
        },
    })
}
