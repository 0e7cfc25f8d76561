//! Combination rules: the conjunctive product, Dempster's rule, and Kenn's
//! rule (KRC), plus explicit left-fold fusion of several sources.
//!
//! KRC divides the conjunctive mass of every proper non-empty subset by
//! `1 - lambda * K` and hands whatever is left to the whole frame. At
//! `lambda = 1` it coincides with Dempster's rule; below that it is
//! commutative but not associative, which is why n-ary fusion here never
//! picks an order on the caller's behalf.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Subset;
use crate::mass::{CombinationIntermediate, MassFunction};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Dempster,
    Krc,
    Conjunctive,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::Dempster => "dempster",
            RuleKind::Krc => "krc",
            RuleKind::Conjunctive => "conjunctive",
        })
    }
}

/// A binary combination rule. `lambda` only matters for [`RuleKind::Krc`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuleSpec<T> {
    kind: RuleKind,
    lambda: T,
}

impl<T: Scalar> RuleSpec<T> {
    pub fn new(kind: RuleKind, lambda: T) -> Result<Self> {
        match kind {
            RuleKind::Krc => Self::krc(lambda),
            RuleKind::Dempster => Ok(Self::dempster()),
            RuleKind::Conjunctive => Ok(Self::conjunctive()),
        }
    }

    pub fn dempster() -> Self {
        RuleSpec {
            kind: RuleKind::Dempster,
            lambda: T::one(),
        }
    }

    pub fn conjunctive() -> Self {
        RuleSpec {
            kind: RuleKind::Conjunctive,
            lambda: T::zero(),
        }
    }

    pub fn krc(lambda: T) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(RuleSpec {
            kind: RuleKind::Krc,
            lambda,
        })
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn combine(&self, a: &MassFunction<T>, b: &MassFunction<T>) -> Result<MassFunction<T>> {
        match self.kind {
            RuleKind::Dempster => dempster(a, b),
            RuleKind::Krc => krc(a, b, self.lambda),
            RuleKind::Conjunctive => {
                let product = conjunctive(a, b)?;
                let conflict = product.conflict();
                if conflict > T::zero() {
                    return Err(Error::UnnormalizedConjunction(conflict.to_f64_lossy()));
                }
                MassFunction::from_rule_output(a.frame().clone(), product.into_masses())
            }
        }
    }
}

impl<T: Scalar> fmt::Display for RuleSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RuleKind::Krc => write!(f, "krc(lambda={})", self.lambda),
            kind => write!(f, "{kind}"),
        }
    }
}

fn check_lambda<T: Scalar>(lambda: T) -> Result<()> {
    if !lambda.is_finite_value() || lambda < T::zero() || lambda > T::one() {
        return Err(Error::LambdaOutOfRange(lambda.to_f64_lossy()));
    }
    Ok(())
}

/// Unnormalized conjunctive product; mass on `∅` is the conflict.
pub fn conjunctive<T: Scalar>(a: &MassFunction<T>, b: &MassFunction<T>) -> Result<CombinationIntermediate<T>> {
    a.same_frame(b)?;
    let mut masses: BTreeMap<Subset, T> = BTreeMap::new();
    for (x, mx) in a.iter() {
        for (y, my) in b.iter() {
            let entry = masses.entry(x.intersect(y)).or_insert_with(T::zero);
            *entry = *entry + mx * my;
        }
    }
    Ok(CombinationIntermediate::new(a.frame().clone(), masses))
}

/// Degree of conflict `K` between two assignments.
pub fn conflict_degree<T: Scalar>(a: &MassFunction<T>, b: &MassFunction<T>) -> Result<T> {
    a.same_frame(b)?;
    let mut k = T::zero();
    for (x, mx) in a.iter() {
        for (y, my) in b.iter() {
            if !x.intersects(y) {
                k = k + mx * my;
            }
        }
    }
    Ok(k)
}

/// `1 - lambda K`, evaluated as `(1 - K) + (1 - lambda) K` with `1 - K` taken
/// as the summed non-conflicting product mass. Near total conflict this keeps
/// the normalized output summing to one instead of inheriting the cancellation
/// error of `1 - K`.
fn denominator<T: Scalar>(product: &CombinationIntermediate<T>, lambda: T) -> Result<T> {
    let conflict = product.conflict();
    let agreeing = product
        .iter()
        .filter(|(s, _)| !s.is_empty())
        .fold(T::zero(), |acc, (_, m)| acc + m);
    let denom = agreeing + (T::one() - lambda) * conflict;
    if denom <= T::conflict_guard() {
        return Err(Error::TotalConflict {
            denominator: denom.to_f64_lossy(),
        });
    }
    Ok(denom)
}

/// Dempster's rule: conjunctive product with the conflict normalized away.
pub fn dempster<T: Scalar>(a: &MassFunction<T>, b: &MassFunction<T>) -> Result<MassFunction<T>> {
    let product = conjunctive(a, b)?;
    let denom = denominator(&product, T::one())?;
    let frame = product.frame().clone();
    let masses = product
        .into_masses()
        .into_iter()
        .filter(|(s, _)| !s.is_empty())
        .map(|(s, m)| (s, m / denom))
        .collect();
    MassFunction::from_rule_output(frame, masses)
}

/// Kenn's rule with tuning parameter `lambda ∈ [0, 1]`.
///
/// Proper non-empty subsets receive `conj(X) / (1 - lambda K)`; the whole
/// frame always takes the remainder `1 - Σ m(X)`, which is non-negative for
/// every admissible `lambda`.
pub fn krc<T: Scalar>(a: &MassFunction<T>, b: &MassFunction<T>, lambda: T) -> Result<MassFunction<T>> {
    check_lambda(lambda)?;
    let product = conjunctive(a, b)?;
    let denom = denominator(&product, lambda)?;
    let frame = product.frame().clone();
    let full = frame.full();

    let mut masses: BTreeMap<Subset, T> = product
        .into_masses()
        .into_iter()
        .filter(|(s, _)| !s.is_empty() && *s != full)
        .map(|(s, m)| (s, m / denom))
        .collect();
    let assigned = masses.values().fold(T::zero(), |acc, m| acc + *m);
    let mut remainder = T::one() - assigned;
    if remainder.abs() <= T::rounding_slack() {
        remainder = T::zero();
    }
    masses.insert(full, remainder);
    MassFunction::from_rule_output(frame, masses)
}

/// Left fold of `rule` over `sources` in the given order.
///
/// A single source is returned unchanged. Errors carry the index of the
/// source whose combination failed (1 for the first combination).
pub fn fuse_sequential<T: Scalar>(rule: &RuleSpec<T>, sources: &[MassFunction<T>]) -> Result<MassFunction<T>> {
    let (first, rest) = sources.split_first().ok_or(Error::NoSources)?;
    rest.iter().enumerate().try_fold(first.clone(), |acc, (i, next)| {
        rule.combine(&acc, next).map_err(|e| e.at_step(i + 1))
    })
}

/// [`fuse_sequential`] over borrowed sources, e.g. a permutation of a
/// shared pool.
pub fn fuse_refs<T: Scalar>(rule: &RuleSpec<T>, sources: &[&MassFunction<T>]) -> Result<MassFunction<T>> {
    let (first, rest) = sources.split_first().ok_or(Error::NoSources)?;
    rest.iter().enumerate().try_fold((*first).clone(), |acc, (i, next)| {
        rule.combine(&acc, next).map_err(|e| e.at_step(i + 1))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Frame;
    use num_rational::Rational64;
    use std::sync::Arc;

    fn ab() -> Arc<Frame> {
        Frame::shared(["A", "B"]).unwrap()
    }

    fn bba(frame: &Arc<Frame>, a: f64, b: f64, ab: f64) -> MassFunction<f64> {
        MassFunction::new(
            frame.clone(),
            [(Subset::from_bits(1), a), (Subset::from_bits(2), b), (Subset::from_bits(3), ab)],
        )
        .unwrap()
    }

    #[test]
    fn total_conflict_for_disjoint_certainties() {
        let frame = ab();
        let a = MassFunction::new(frame.clone(), [(Subset::from_bits(1), 1.0)]).unwrap();
        let b = MassFunction::new(frame.clone(), [(Subset::from_bits(2), 1.0)]).unwrap();
        let product = conjunctive(&a, &b).unwrap();
        assert_eq!(product.conflict(), 1.0);
        assert_eq!(product.iter().count(), 1);
        assert!(matches!(dempster(&a, &b), Err(Error::TotalConflict { .. })));
        assert!(matches!(krc(&a, &b, 1.0), Err(Error::TotalConflict { .. })));
        // below lambda = 1 the conflict is absorbed by the frame
        let m = krc(&a, &b, 0.5).unwrap();
        assert!(m.is_vacuous());
    }

    #[test]
    fn guard_threshold() {
        // 1 - K just above the guard is still combinable
        let frame = ab();
        let eps = 1e-11;
        let a = MassFunction::new(frame.clone(), [(Subset::from_bits(1), 1.0 - eps), (frame.full(), eps)]).unwrap();
        let b = MassFunction::new(frame.clone(), [(Subset::from_bits(2), 1.0)]).unwrap();
        assert!(dempster(&a, &b).is_ok());
        let tiny = 1e-13;
        let a = MassFunction::new(frame.clone(), [(Subset::from_bits(1), 1.0 - tiny), (frame.full(), tiny)]).unwrap();
        assert!(matches!(dempster(&a, &b), Err(Error::TotalConflict { .. })));
    }

    #[test]
    fn lambda_range() {
        let frame = ab();
        let v = MassFunction::<f64>::vacuous(frame);
        assert!(matches!(krc(&v, &v, 1.5), Err(Error::LambdaOutOfRange(_))));
        assert!(matches!(krc(&v, &v, -0.1), Err(Error::LambdaOutOfRange(_))));
        assert!(RuleSpec::krc(f64::NAN).is_err());
        assert!(RuleSpec::new(RuleKind::Krc, 0.2).is_ok());
    }

    #[test]
    fn frame_mismatch() {
        let a = MassFunction::<f64>::vacuous(ab());
        let b = MassFunction::<f64>::vacuous(Frame::shared(["A", "C"]).unwrap());
        assert_eq!(conjunctive(&a, &b), Err(Error::FrameMismatch));
        assert_eq!(conflict_degree(&a, &b), Err(Error::FrameMismatch));
        assert_eq!(dempster(&a, &b), Err(Error::FrameMismatch));
    }

    #[test]
    fn vacuous_is_neutral() {
        let frame = ab();
        let m = bba(&frame, 0.2, 0.7, 0.1);
        let v = MassFunction::vacuous(frame.clone());
        let product = conjunctive(&m, &v).unwrap();
        assert_eq!(product.conflict(), 0.0);
        assert_eq!(conflict_degree(&m, &v).unwrap(), 0.0);
        for lambda in [0.0, 0.2, 0.5, 1.0] {
            let fused = krc(&m, &v, lambda).unwrap();
            assert!(fused.linf_distance(&m).unwrap().0 < 1e-15);
        }
        assert!(dempster(&m, &v).unwrap().linf_distance(&m).unwrap().0 < 1e-15);
    }

    #[test]
    fn conjunctive_rule_chains_only_without_conflict() {
        let frame = ab();
        let m = bba(&frame, 0.2, 0.7, 0.1);
        let v = MassFunction::vacuous(frame.clone());
        let rule = RuleSpec::conjunctive();
        assert_eq!(rule.combine(&m, &v).unwrap(), m);
        let err = rule.combine(&m, &m).unwrap_err();
        assert!(matches!(err, Error::UnnormalizedConjunction(_)));
        assert!(err.is_rule_failure());
    }

    #[test]
    fn fold_reports_step() {
        let frame = ab();
        let v = MassFunction::vacuous(frame.clone());
        let a = MassFunction::new(frame.clone(), [(Subset::from_bits(1), 1.0)]).unwrap();
        let b = MassFunction::new(frame.clone(), [(Subset::from_bits(2), 1.0)]).unwrap();
        let err = fuse_sequential(&RuleSpec::dempster(), &[v.clone(), a, b]).unwrap_err();
        match err {
            Error::AtStep { step, source } => {
                assert_eq!(step, 2);
                assert!(matches!(*source, Error::TotalConflict { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(fuse_sequential::<f64>(&RuleSpec::dempster(), &[]), Err(Error::NoSources));
        assert_eq!(fuse_sequential(&RuleSpec::dempster(), std::slice::from_ref(&v)).unwrap(), v);
    }

    #[test]
    fn single_element_frame() {
        let frame = Frame::shared(["A"]).unwrap();
        let v = MassFunction::<f64>::vacuous(frame);
        let fused = krc(&v, &v, 0.3).unwrap();
        assert!(fused.is_vacuous());
    }

    #[test]
    fn exact_arithmetic_on_the_worked_example() {
        let frame = ab();
        let r = |n, d| Rational64::new(n, d);
        let m = |a, b, ab| {
            MassFunction::new(
                frame.clone(),
                [(Subset::from_bits(1), a), (Subset::from_bits(2), b), (Subset::from_bits(3), ab)],
            )
            .unwrap()
        };
        let m1 = m(r(2, 10), r(7, 10), r(1, 10));
        let m2 = m(r(8, 10), r(1, 10), r(1, 10));
        let m3 = m(r(4, 10), r(3, 10), r(3, 10));
        assert_eq!(conflict_degree(&m1, &m2).unwrap(), r(58, 100));
        assert_eq!(conflict_degree(&m2, &m3).unwrap(), r(28, 100));
        let product = conjunctive(&m1, &m2).unwrap();
        assert_eq!(product.mass(Subset::from_bits(1)), r(26, 100));
        assert_eq!(product.mass(Subset::from_bits(2)), r(15, 100));
        assert_eq!(product.mass(Subset::from_bits(3)), r(1, 100));

        let lambda = r(1, 5);
        let m12 = krc(&m1, &m2, lambda).unwrap();
        // 0.26 / (1 - 0.2 * 0.58) = 0.26 / 0.884
        assert_eq!(m12.mass(Subset::from_bits(1)), r(26, 100) / r(884, 1000));
        assert_eq!(m12.total(), r(1, 1));

        let left = krc(&m12, &m3, lambda).unwrap();
        let right = krc(&m1, &krc(&m2, &m3, lambda).unwrap(), lambda).unwrap();
        assert_ne!(left, right);
        assert_eq!(dempster(&dempster(&m1, &m2).unwrap(), &m3).unwrap(), dempster(&m1, &dempster(&m2, &m3).unwrap()).unwrap());
        assert_eq!(krc(&m1, &m2, r(1, 1)).unwrap(), dempster(&m1, &m2).unwrap());
    }

    #[test]
    fn single_precision_path() {
        let frame = ab();
        let m1 = MassFunction::new(
            frame.clone(),
            [(Subset::from_bits(1), 0.2f32), (Subset::from_bits(2), 0.7), (Subset::from_bits(3), 0.1)],
        )
        .unwrap();
        let m2 = MassFunction::new(
            frame.clone(),
            [(Subset::from_bits(1), 0.8f32), (Subset::from_bits(2), 0.1), (Subset::from_bits(3), 0.1)],
        )
        .unwrap();
        let m12 = krc(&m1, &m2, 0.2).unwrap();
        assert!((m12.mass(Subset::from_bits(1)) - 0.2941).abs() < 5e-4);
    }
}
