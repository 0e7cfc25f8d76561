//! Belief, plausibility and the belief interval `[Bel, Pl]`.
//!
//! Each query sums directly over the focal elements of the assignment.

use serde::Serialize;

use crate::error::Result;
use crate::frame::Subset;
use crate::mass::MassFunction;
use crate::scalar::Scalar;

/// Lower and upper bounds on the unknown probability of a subset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeliefInterval<T> {
    pub subset: Subset,
    pub bel: T,
    pub pl: T,
    /// `pl - bel`, the uncertainty on the subset.
    pub width: T,
}

/// Total mass of focal elements contained in `subset`.
pub fn bel<T: Scalar>(m: &MassFunction<T>, subset: Subset) -> Result<T> {
    m.frame().check(subset)?;
    Ok(m.iter()
        .filter(|(focal, _)| focal.is_subset_of(subset))
        .fold(T::zero(), |acc, (_, mass)| acc + mass))
}

/// Total mass of focal elements intersecting `subset`.
pub fn pl<T: Scalar>(m: &MassFunction<T>, subset: Subset) -> Result<T> {
    m.frame().check(subset)?;
    Ok(m.iter()
        .filter(|(focal, _)| focal.intersects(subset))
        .fold(T::zero(), |acc, (_, mass)| acc + mass))
}

/// Uncertainty width `Pl(X) - Bel(X)`.
pub fn uncertainty<T: Scalar>(m: &MassFunction<T>, subset: Subset) -> Result<T> {
    belief_interval(m, subset).map(|i| i.width)
}

pub fn belief_interval<T: Scalar>(m: &MassFunction<T>, subset: Subset) -> Result<BeliefInterval<T>> {
    let bel = bel(m, subset)?;
    let pl = pl(m, subset)?;
    Ok(BeliefInterval {
        subset,
        bel,
        pl,
        width: pl - bel,
    })
}
