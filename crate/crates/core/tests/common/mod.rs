//! Brute-force oracles shared by the integration tests. They work on dense
//! power-set vectors (index = subset mask) and never call the crate's
//! combination or measure code.

#![allow(dead_code)]

use std::sync::Arc;

use belief_fusion::analysis::{random_mass, trial_rng};
use belief_fusion::{Frame, MassFunction, Subset};

pub fn frame(n: usize) -> Arc<Frame> {
    let labels: Vec<String> = (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect();
    Frame::shared(labels).unwrap()
}

pub fn worked_example() -> (Arc<Frame>, [MassFunction<f64>; 3]) {
    let f = frame(2);
    let m = |a: f64, b: f64, ab: f64| {
        MassFunction::new(
            f.clone(),
            [(Subset::from_bits(1), a), (Subset::from_bits(2), b), (Subset::from_bits(3), ab)],
        )
        .unwrap()
    };
    let sources = [m(0.2, 0.7, 0.1), m(0.8, 0.1, 0.1), m(0.4, 0.3, 0.3)];
    (f, sources)
}

pub fn random_triple(f: &Arc<Frame>, seed: u64, index: u64) -> [MassFunction<f64>; 3] {
    let mut rng = trial_rng(seed, index);
    std::array::from_fn(|_| random_mass(f, &mut rng))
}

/// Dense conjunctive product over every pair of subsets, ∅ included.
pub fn dense_conjunctive(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    for (x, ma) in a.iter().enumerate() {
        for (y, mb) in b.iter().enumerate() {
            out[x & y] += ma * mb;
        }
    }
    out
}

/// Dempster's rule over dense vectors.
pub fn dense_dempster(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut product = dense_conjunctive(a, b);
    let k = product[0];
    product[0] = 0.0;
    product.iter().map(|m| m / (1.0 - k)).collect()
}

/// Global normalized product of three sources: one pass over all focal
/// triples, single normalization at the end.
pub fn global_dempster3(a: &[f64], b: &[f64], c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    for (x, ma) in a.iter().enumerate() {
        for (y, mb) in b.iter().enumerate() {
            for (z, mc) in c.iter().enumerate() {
                out[x & y & z] += ma * mb * mc;
            }
        }
    }
    let k = out[0];
    out[0] = 0.0;
    out.iter().map(|m| m / (1.0 - k)).collect()
}

/// Belief table: for every subset, the sum over all its subsets.
pub fn dense_bel(m: &[f64]) -> Vec<f64> {
    (0..m.len())
        .map(|x| (0..m.len()).filter(|y| y & !x == 0).map(|y| m[y]).sum())
        .collect()
}

/// Plausibility table: for every subset, the sum over subsets meeting it.
pub fn dense_pl(m: &[f64]) -> Vec<f64> {
    (0..m.len())
        .map(|x| (0..m.len()).filter(|y| y & x != 0).map(|y| m[y]).sum())
        .collect()
}

pub fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
