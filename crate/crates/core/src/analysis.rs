//! Associativity residuals, all-orders divergence, and randomized
//! counter-example search.
//!
//! Random work is seeded per trial (one ChaCha stream per trial index), so
//! results are identical no matter how rayon schedules the trials.

use std::sync::Arc;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::decision::{decide, DecisionKind};
use crate::error::{Error, Result};
use crate::frame::{Frame, Subset};
use crate::mass::MassFunction;
use crate::rules::{fuse_refs, RuleSpec};
use crate::scalar::Scalar;

/// Above this many sources, [`order_sweep`] samples permutations instead of
/// enumerating them.
pub const EXHAUSTIVE_ORDER_LIMIT: usize = 7;

/// Number of permutations examined when sampling (`7!`).
pub const SAMPLED_ORDERS: usize = 5040;

/// Seed used by [`order_sweep`] when it has to sample.
pub const DEFAULT_SWEEP_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq)]
pub struct AssociativityResult<T> {
    /// `(a ⊕ b) ⊕ c`
    pub left: MassFunction<T>,
    /// `a ⊕ (b ⊕ c)`
    pub right: MassFunction<T>,
    pub linf_gap: T,
    /// Subset where `linf_gap` is attained.
    pub linf_at: Subset,
    pub l1_gap: T,
}

pub fn check_associativity<T: Scalar>(
    rule: &RuleSpec<T>,
    a: &MassFunction<T>,
    b: &MassFunction<T>,
    c: &MassFunction<T>,
) -> Result<AssociativityResult<T>> {
    let grouping = |name: &'static str| {
        move |e: Error| Error::Grouping {
            grouping: name,
            source: Box::new(e),
        }
    };
    let left = rule
        .combine(a, b)
        .and_then(|ab| rule.combine(&ab, c))
        .map_err(grouping("left"))?;
    let right = rule
        .combine(b, c)
        .and_then(|bc| rule.combine(a, &bc))
        .map_err(grouping("right"))?;
    let (linf_gap, linf_at) = left.linf_distance(&right)?;
    let l1_gap = left.l1_distance(&right)?;
    Ok(AssociativityResult {
        left,
        right,
        linf_gap,
        linf_at,
        l1_gap,
    })
}

/// Result of fusing the sources in one particular order.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderEntry<T> {
    /// Source indices in fold order.
    pub permutation: Vec<usize>,
    pub outcome: Result<MassFunction<T>>,
    /// `None` when the fold failed or the frame is too small to decide on.
    pub decision: Option<DecisionKind>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderSensitivityReport<T> {
    pub rule: RuleSpec<T>,
    /// False when permutations were sampled rather than enumerated.
    pub exhaustive: bool,
    pub orders: Vec<OrderEntry<T>>,
    /// Largest L∞ distance between any two successful fused results.
    pub max_pairwise_linf: T,
    /// Subset where `max_pairwise_linf` is attained.
    pub max_pairwise_at: Subset,
    /// True iff every successful order yields the same decision.
    pub decision_agreement: bool,
}

impl<T: Scalar> OrderSensitivityReport<T> {
    pub fn failed(&self) -> usize {
        self.orders.iter().filter(|o| o.outcome.is_err()).count()
    }

    pub fn result_for(&self, permutation: &[usize]) -> Option<&MassFunction<T>> {
        self.orders
            .iter()
            .find(|o| o.permutation == permutation)
            .and_then(|o| o.outcome.as_ref().ok())
    }
}

/// Left-fold fusion of `sources` under every ordering (or a seeded sample of
/// [`SAMPLED_ORDERS`] orderings beyond [`EXHAUSTIVE_ORDER_LIMIT`] sources).
pub fn order_sweep<T: Scalar>(rule: &RuleSpec<T>, sources: &[MassFunction<T>]) -> Result<OrderSensitivityReport<T>> {
    order_sweep_seeded(rule, sources, DEFAULT_SWEEP_SEED)
}

pub fn order_sweep_seeded<T: Scalar>(
    rule: &RuleSpec<T>,
    sources: &[MassFunction<T>],
    seed: u64,
) -> Result<OrderSensitivityReport<T>> {
    let n = sources.len();
    if n < 2 {
        return Err(Error::NoSources);
    }
    for s in &sources[1..] {
        sources[0].same_frame(s)?;
    }
    let exhaustive = n <= EXHAUSTIVE_ORDER_LIMIT;
    let permutations: Vec<Vec<usize>> = if exhaustive {
        (0..n).permutations(n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLED_ORDERS)
            .map(|_| {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect()
    };

    let orders: Vec<OrderEntry<T>> = permutations
        .into_par_iter()
        .map(|permutation| {
            let ordered: Vec<&MassFunction<T>> = permutation.iter().map(|&i| &sources[i]).collect();
            let outcome = fuse_refs(rule, &ordered);
            let decision = outcome.as_ref().ok().and_then(|m| decide(m).ok()).map(|d| d.kind);
            OrderEntry {
                permutation,
                outcome,
                decision,
            }
        })
        .collect();

    let fused: Vec<&MassFunction<T>> = orders.iter().filter_map(|o| o.outcome.as_ref().ok()).collect();
    let (max_pairwise_linf, max_pairwise_at) = max_spread(sources[0].frame(), &fused);
    let decision_agreement = orders
        .iter()
        .filter(|o| o.outcome.is_ok())
        .map(|o| o.decision)
        .all_equal();

    Ok(OrderSensitivityReport {
        rule: *rule,
        exhaustive,
        orders,
        max_pairwise_linf,
        max_pairwise_at,
        decision_agreement,
    })
}

/// `max_{i,j} |r_i(X) - r_j(X)|` maximized over X equals the per-subset
/// range `max_i r_i(X) - min_i r_i(X)`, which avoids the quadratic pair loop.
fn max_spread<T: Scalar>(frame: &Frame, results: &[&MassFunction<T>]) -> (T, Subset) {
    let mut best = (T::zero(), Subset::EMPTY);
    if results.len() < 2 {
        return best;
    }
    let mut subsets: Vec<Subset> = results.iter().flat_map(|m| m.focal_elements()).collect();
    subsets.sort_unstable();
    subsets.dedup();
    debug_assert!(subsets.iter().all(|s| frame.contains(*s)));
    for s in subsets {
        let (lo, hi) = results.iter().map(|m| m.mass(s)).fold((T::one(), T::zero()), |(lo, hi), v| {
            (lo.min_of(v), hi.max_of(v))
        });
        if hi - lo > best.0 {
            best = (hi - lo, s);
        }
    }
    best
}

/// One sweep report per KRC `lambda`.
pub fn order_sweep_lambdas<T: Scalar>(
    lambdas: &[T],
    sources: &[MassFunction<T>],
) -> Result<Vec<OrderSensitivityReport<T>>> {
    lambdas
        .iter()
        .map(|&l| order_sweep(&RuleSpec::krc(l)?, sources))
        .collect()
}

/// Draws a mass function uniformly from the simplex over all non-empty
/// subsets: one standard-exponential weight per subset, normalized.
pub fn random_mass<T: Scalar, R: Rng + ?Sized>(frame: &Arc<Frame>, rng: &mut R) -> MassFunction<T> {
    let weights: Vec<(Subset, f64)> = frame
        .nonempty_subsets()
        .map(|s| (s, Exp1.sample(&mut *rng)))
        .collect();
    let total: f64 = weights.iter().map(|(_, w)| w).sum();
    let masses = weights
        .into_iter()
        .map(|(s, w)| (s, T::from_f64_lossy(w / total)));
    MassFunction::new(frame.clone(), masses).expect("normalized exponential weights form a valid assignment")
}

/// Independent RNG for one trial of a seeded experiment.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterExample<T> {
    pub trial: usize,
    pub triple: [MassFunction<T>; 3],
    pub result: AssociativityResult<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport<T> {
    pub rule: RuleSpec<T>,
    pub trials: usize,
    pub seed: u64,
    /// Trials where some step totally conflicted.
    pub skipped: usize,
    /// Triple with the largest associativity gap, lowest trial index on ties.
    pub best: Option<CounterExample<T>>,
}

impl<T: Scalar> SearchReport<T> {
    pub fn best_gap(&self) -> T {
        self.best.as_ref().map_or_else(T::zero, |b| b.result.linf_gap)
    }
}

/// Random search for the triple that most violates associativity.
pub fn search_counterexamples<T: Scalar>(
    rule: &RuleSpec<T>,
    frame: &Arc<Frame>,
    trials: usize,
    seed: u64,
) -> SearchReport<T> {
    let outcomes: Vec<Option<CounterExample<T>>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial as u64);
            let triple: [MassFunction<T>; 3] = std::array::from_fn(|_| random_mass(frame, &mut rng));
            check_associativity(rule, &triple[0], &triple[1], &triple[2])
                .ok()
                .map(|result| CounterExample { trial, triple, result })
        })
        .collect();

    let skipped = outcomes.iter().filter(|o| o.is_none()).count();
    let best = outcomes.into_iter().flatten().fold(None, |best: Option<CounterExample<T>>, cand| match best {
        Some(b) if b.result.linf_gap >= cand.result.linf_gap => Some(b),
        _ => Some(cand),
    });
    SearchReport {
        rule: *rule,
        trials,
        seed,
        skipped,
        best,
    }
}

/// One KRC search per `lambda`, all with the same seed.
pub fn search_lambda_sweep<T: Scalar>(
    lambdas: &[T],
    frame: &Arc<Frame>,
    trials: usize,
    seed: u64,
) -> Result<Vec<SearchReport<T>>> {
    lambdas
        .iter()
        .map(|&l| Ok(search_counterexamples(&RuleSpec::krc(l)?, frame, trials, seed)))
        .collect()
}
