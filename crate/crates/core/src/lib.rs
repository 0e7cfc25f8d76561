//! Combination of basic belief assignments under Dempster's rule and Kenn's
//! rule (KRC), with belief/plausibility measures, a belief-interval decision
//! procedure, and tooling that measures how much the fusion order matters.
//!
//! All algorithms are generic over [`Scalar`]; the aliases below fix the
//! common choices.
//!
//! ```
//! use belief_fusion::{Frame, MassFunctionF64, RuleSpecF64, fuse_sequential};
//!
//! let frame = Frame::shared(["A", "B"]).unwrap();
//! let m = |a, b, ab| {
//!     MassFunctionF64::from_labels(
//!         frame.clone(),
//!         [(vec!["A"], a), (vec!["B"], b), (vec!["A", "B"], ab)],
//!     )
//!     .unwrap()
//! };
//! let sources = [m(0.2, 0.7, 0.1), m(0.8, 0.1, 0.1), m(0.4, 0.3, 0.3)];
//! let rule = RuleSpecF64::krc(0.2).unwrap();
//! let fused = fuse_sequential(&rule, &sources).unwrap();
//! assert!((fused.mass(frame.singleton(0).unwrap()) - 0.4339).abs() < 5e-4);
//! ```

pub mod analysis;
pub mod cli;
pub mod decision;
pub mod error;
pub mod frame;
pub mod io;
pub mod mass;
pub mod measures;
pub mod rules;
pub mod scalar;

pub use analysis::{
    check_associativity, order_sweep, order_sweep_seeded, random_mass, search_counterexamples,
    AssociativityResult, OrderSensitivityReport, SearchReport,
};
pub use decision::{decide, DecisionKind, DecisionOutcome};
pub use error::{Error, Result};
pub use frame::{Frame, Subset, MAX_FRAME_SIZE};
pub use mass::{CombinationIntermediate, MassFunction};
pub use measures::{bel, belief_interval, pl, uncertainty, BeliefInterval};
pub use rules::{conflict_degree, conjunctive, dempster, fuse_sequential, krc, RuleKind, RuleSpec};
pub use scalar::Scalar;

/// Exact rational masses.
pub type Exact = num_rational::Rational64;

pub type MassFunctionF64 = MassFunction<f64>;
pub type MassFunctionF32 = MassFunction<f32>;
pub type MassFunctionExact = MassFunction<Exact>;

pub type RuleSpecF64 = RuleSpec<f64>;
pub type RuleSpecF32 = RuleSpec<f32>;
pub type RuleSpecExact = RuleSpec<Exact>;

pub type BeliefIntervalF64 = BeliefInterval<f64>;
pub type DecisionOutcomeF64 = DecisionOutcome<f64>;
pub type AssociativityResultF64 = AssociativityResult<f64>;
pub type OrderSensitivityReportF64 = OrderSensitivityReport<f64>;
pub type CombinationIntermediateF64 = CombinationIntermediate<f64>;
