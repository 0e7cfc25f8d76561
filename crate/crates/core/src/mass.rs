//! Validated mass functions (basic belief assignments) and the raw
//! conjunctive product that precedes normalization.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::{Frame, Subset};
use crate::scalar::Scalar;

/// A normalized basic belief assignment.
///
/// Masses are stored sparsely; the stored key set is exactly the set of focal
/// elements. `m(∅) = 0` and the total is one within
/// [`Scalar::norm_tolerance`].
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction<T> {
    frame: Arc<Frame>,
    masses: BTreeMap<Subset, T>,
}

impl<T: Scalar> MassFunction<T> {
    /// Validates and builds an assignment. Zero-mass entries are dropped.
    pub fn new<I>(frame: Arc<Frame>, assignments: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, T)>,
    {
        let masses = collect_masses(&frame, assignments, false)?;
        let total = sum(masses.values().copied());
        check_total(total)?;
        Ok(MassFunction { frame, masses })
    }

    /// Builds an assignment from label lists, e.g. `(["A", "B"], 0.1)` for `A∪B`.
    pub fn from_labels<I, L, S>(frame: Arc<Frame>, assignments: I) -> Result<Self>
    where
        I: IntoIterator<Item = (L, T)>,
        L: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let pairs = assignments
            .into_iter()
            .map(|(labels, mass)| Ok((frame.subset_from_labels(labels)?, mass)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frame, pairs)
    }

    /// Like [`MassFunction::new`] but rescales the masses to sum to one.
    /// Inputs may be any finite non-negative weights. Returns the assignment
    /// together with the applied scaling factor.
    pub fn renormalized<I>(frame: Arc<Frame>, assignments: I) -> Result<(Self, T)>
    where
        I: IntoIterator<Item = (Subset, T)>,
    {
        let mut masses = collect_masses(&frame, assignments, true)?;
        let total = sum(masses.values().copied());
        if total <= T::zero() {
            return Err(Error::ZeroTotal);
        }
        let scale = T::one() / total;
        for mass in masses.values_mut() {
            *mass = *mass * scale;
        }
        check_total(sum(masses.values().copied()))?;
        Ok((MassFunction { frame, masses }, scale))
    }

    /// Total ignorance: all mass on the whole frame.
    pub fn vacuous(frame: Arc<Frame>) -> Self {
        let full = frame.full();
        MassFunction {
            frame,
            masses: BTreeMap::from([(full, T::one())]),
        }
    }

    /// Builds a rule output. Entries at or below zero are dropped; the total is
    /// still checked so that a broken rule cannot leak an invalid assignment.
    pub(crate) fn from_rule_output(frame: Arc<Frame>, masses: BTreeMap<Subset, T>) -> Result<Self> {
        let masses: BTreeMap<Subset, T> = masses
            .into_iter()
            .filter(|(s, m)| !s.is_empty() && *m > T::zero())
            .collect();
        check_total(sum(masses.values().copied()))?;
        Ok(MassFunction { frame, masses })
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn mass(&self, subset: Subset) -> T {
        self.masses.get(&subset).copied().unwrap_or_else(T::zero)
    }

    pub fn focal_elements(&self) -> impl Iterator<Item = Subset> + '_ {
        self.masses.keys().copied()
    }

    /// `(focal element, mass)` pairs in increasing mask order.
    pub fn iter(&self) -> impl Iterator<Item = (Subset, T)> + '_ {
        self.masses.iter().map(|(s, m)| (*s, *m))
    }

    pub fn focal_count(&self) -> usize {
        self.masses.len()
    }

    pub fn total(&self) -> T {
        sum(self.masses.values().copied())
    }

    /// True iff every focal element is a singleton.
    pub fn is_bayesian(&self) -> bool {
        self.masses.keys().all(|s| s.is_singleton())
    }

    pub fn is_vacuous(&self) -> bool {
        self.masses.len() == 1 && self.masses.contains_key(&self.frame.full())
    }

    /// Mass of every subset in mask order, `∅` included.
    pub fn dense(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.frame.power_set_size()];
        for (s, m) in self.iter() {
            out[s.bits() as usize] = m;
        }
        out
    }

    pub fn same_frame(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.frame, &other.frame) || self.frame == other.frame {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    /// Largest absolute mass difference over the full power set, with the
    /// subset where it is attained (the lowest mask on ties).
    pub fn linf_distance(&self, other: &Self) -> Result<(T, Subset)> {
        self.same_frame(other)?;
        let mut best = (T::zero(), Subset::EMPTY);
        for s in self.union_of_keys(other) {
            let diff = (self.mass(s) - other.mass(s)).abs();
            if diff > best.0 {
                best = (diff, s);
            }
        }
        Ok(best)
    }

    /// Sum of absolute mass differences over the full power set.
    pub fn l1_distance(&self, other: &Self) -> Result<T> {
        self.same_frame(other)?;
        Ok(sum(self
            .union_of_keys(other)
            .map(|s| (self.mass(s) - other.mass(s)).abs())))
    }

    // Subsets absent from both maps carry zero mass in both and contribute nothing.
    fn union_of_keys<'a>(&'a self, other: &'a Self) -> impl Iterator<Item = Subset> + 'a {
        let mut keys: Vec<Subset> = self.masses.keys().chain(other.masses.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
    }
}

/// Output of the unnormalized conjunctive product of two assignments.
///
/// Mass may sit on `∅`; that entry is the degree of conflict.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinationIntermediate<T> {
    frame: Arc<Frame>,
    masses: BTreeMap<Subset, T>,
}

impl<T: Scalar> CombinationIntermediate<T> {
    pub(crate) fn new(frame: Arc<Frame>, masses: BTreeMap<Subset, T>) -> Self {
        CombinationIntermediate { frame, masses }
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    /// Mass landing on `∅`.
    pub fn conflict(&self) -> T {
        self.mass(Subset::EMPTY)
    }

    pub fn mass(&self, subset: Subset) -> T {
        self.masses.get(&subset).copied().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Subset, T)> + '_ {
        self.masses.iter().map(|(s, m)| (*s, *m))
    }

    pub fn total(&self) -> T {
        sum(self.masses.values().copied())
    }

    pub(crate) fn into_masses(self) -> BTreeMap<Subset, T> {
        self.masses
    }
}

pub(crate) fn sum<T: Scalar>(values: impl Iterator<Item = T>) -> T {
    values.fold(T::zero(), |acc, v| acc + v)
}

fn collect_masses<T, I>(frame: &Frame, assignments: I, weights: bool) -> Result<BTreeMap<Subset, T>>
where
    T: Scalar,
    I: IntoIterator<Item = (Subset, T)>,
{
    let mut masses = BTreeMap::new();
    for (subset, mass) in assignments {
        frame.check(subset)?;
        if !mass.is_finite_value() || mass < T::zero() || (!weights && mass > T::one()) {
            return Err(Error::InvalidMass {
                subset: frame.subset_name(subset),
                mass: mass.to_f64_lossy(),
            });
        }
        if masses.contains_key(&subset) {
            return Err(Error::DuplicateSubset(frame.subset_name(subset)));
        }
        if subset.is_empty() {
            if mass > T::zero() {
                return Err(Error::MassOnEmptySet(mass.to_f64_lossy()));
            }
            continue;
        }
        masses.insert(subset, mass);
    }
    // Zero entries are dropped only after the duplicate check has seen them.
    masses.retain(|_, m| *m > T::zero());
    Ok(masses)
}

fn check_total<T: Scalar>(total: T) -> Result<()> {
    let deviation = (total - T::one()).abs();
    if deviation > T::norm_tolerance() {
        return Err(Error::NotNormalized {
            total: total.to_f64_lossy(),
            deviation: deviation.to_f64_lossy(),
        });
    }
    Ok(())
}
