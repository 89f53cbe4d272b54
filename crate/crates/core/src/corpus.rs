//! Seeded random instances: potentials, trees and step weights.
//!
//! Every generator draws from a `ChaCha8Rng`, so a seed fixes the whole
//! instance on every platform.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::potential::SymmetricPotential;
use crate::tree::{TailRule, TreeDescriptor};
use crate::trial::TrialFunction;
use crate::weight::{StepTail, StepWeight};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Piecewise-constant potentials with `1..=max_pieces` pieces of depth in
/// `depth` covering a random subinterval of `support`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PotentialSpec {
    pub max_pieces: usize,
    pub depth: (f64, f64),
    pub support: (f64, f64),
}

impl Default for PotentialSpec {
    fn default() -> Self {
        Self {
            max_pieces: 6,
            depth: (0.1, 10.0),
            support: (0.0, 8.0),
        }
    }
}

pub fn random_potential(rng: &mut ChaCha8Rng, spec: &PotentialSpec) -> Result<SymmetricPotential> {
    let pieces = rng.gen_range(1..=spec.max_pieces.max(1));
    let (lo, hi) = spec.support;
    let mut cuts: Vec<f64> = (0..=pieces).map(|_| rng.gen_range(lo..hi)).collect();
    cuts.sort_by(f64::total_cmp);
    if rng.gen_bool(0.5) {
        cuts[0] = lo;
    }
    cuts.dedup_by(|a, b| *a - *b < 1e-3);
    if cuts.len() < 2 {
        cuts = vec![lo, (lo + 0.5).min(hi)];
    }
    let values = (0..cuts.len() - 1).map(|_| rng.gen_range(spec.depth.0..=spec.depth.1)).collect();
    SymmetricPotential::piecewise(cuts, values)
}

/// Regular trees with `1..=max_generations` explicit vertices (branching
/// from `branches`) followed by a homogeneous tail.
pub fn random_tree(rng: &mut ChaCha8Rng, max_generations: usize, branches: &[u32]) -> Result<TreeDescriptor> {
    let n = rng.gen_range(1..=max_generations.max(1));
    let mut r = 0.0;
    let mut prefix = Vec::with_capacity(n);
    for _ in 0..n {
        r += rng.gen_range(0.4..2.0);
        prefix.push((r, branches[rng.gen_range(0..branches.len())]));
    }
    let tail = TailRule::Homogeneous {
        edge_length: rng.gen_range(0.5..2.0),
        branch: branches[rng.gen_range(0..branches.len())],
    };
    TreeDescriptor::build(&prefix, tail)
}

/// Step weights with 1–4 explicit jumps. Transient ones end in a
/// geometric tail with growth factor above the length ratio; recurrent
/// ones end in a constant tail.
pub fn random_step_weight(rng: &mut ChaCha8Rng, transient: bool) -> Result<StepWeight> {
    let n = rng.gen_range(1..=4);
    let mut knots = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n + 1);
    let mut t = 0.0;
    values.push(rng.gen_range(0.5..2.0));
    for _ in 0..n {
        t += rng.gen_range(0.3..2.0);
        knots.push(t);
        values.push(rng.gen_range(0.5..4.0));
    }
    let tail = if transient {
        let ratio = rng.gen_range(1.0..2.0);
        StepTail::Geometric {
            first_length: rng.gen_range(0.5..2.0),
            ratio,
            factor: ratio * rng.gen_range(1.5..3.0),
        }
    } else {
        StepTail::Constant
    };
    StepWeight::new(0.0, knots, values, tail)
}

/// Piecewise-linear trial functions with 2–8 random interior nodes on a
/// support of length between 10^{-1.5} and 10², vanishing at the right end.
pub fn random_trial(rng: &mut ChaCha8Rng) -> Result<TrialFunction> {
    let n = rng.gen_range(2..=8);
    let len = 10f64.powf(rng.gen_range(-1.5..2.0));
    let mut nodes: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..len)).collect();
    nodes.push(len);
    if rng.gen_bool(0.5) {
        nodes.push(0.0);
    }
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|a, b| *a - *b < 1e-6 * len);
    let mut values: Vec<f64> = (0..nodes.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    *values.last_mut().unwrap() = 0.0;
    TrialFunction::piecewise_linear(nodes, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let a = random_potential(&mut rng(7), &PotentialSpec::default()).unwrap();
        let b = random_potential(&mut rng(7), &PotentialSpec::default()).unwrap();
        for t in [0.1, 1.3, 4.4, 7.9] {
            assert_eq!(a.value(t), b.value(t));
        }
        let s = PotentialSpec::default();
        let mut r = rng(3);
        for _ in 0..50 {
            let v = random_potential(&mut r, &s).unwrap();
            assert!(v.support_end() <= 8.0);
            assert!((0..80).all(|i| {
                let x = v.value(i as f64 * 0.1);
                x == 0.0 || (0.1..=10.0).contains(&x)
            }));
        }
    }

    #[test]
    fn transient_weights() {
        let mut r = rng(11);
        for _ in 0..20 {
            let w: crate::weight::Weight = random_step_weight(&mut r, true).unwrap().into();
            assert!(w.is_transient());
            let w: crate::weight::Weight = random_step_weight(&mut r, false).unwrap().into();
            assert!(!w.is_transient());
        }
    }
}
