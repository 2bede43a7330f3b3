//! Seeded random walks through flag-like moves, recording the invariant
//! after every step.

use std::fmt;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cocycle::PartialCocycle;
use crate::complex::StratifiedTriangulation;
use crate::cyclotomic::{format_rational, CyclotomicSum};
use crate::moves::{apply, sites, MoveDescriptor, MoveKind};
use crate::parcel::Parcel;
use crate::statesum::{twisted_invariant_with, untwisted_invariant_with, StateSumError, SumOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkConfig {
    pub seed: u64,
    pub steps: usize,
    /// Moves that add a vertex are rejected once the complex has this many.
    pub max_vertices: usize,
    /// Rejection-sampling budget per step.
    pub max_attempts: usize,
    pub parallel: bool,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig { seed: 0, steps: 200, max_vertices: 10, max_attempts: 10_000, parallel: false }
    }
}

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("no applicable move found after {attempts} attempts at step {step}")]
    Stuck { step: usize, attempts: usize },
    #[error(transparent)]
    StateSum(#[from] StateSumError),
}

/// Value of either state sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantValue {
    Untwisted(BigRational),
    Twisted(CyclotomicSum),
}

impl InvariantValue {
    pub fn compute(
        t: &StratifiedTriangulation,
        p: &Parcel,
        alpha: Option<&PartialCocycle>,
        opts: SumOptions,
    ) -> Result<Self, StateSumError> {
        Ok(match alpha {
            None => InvariantValue::Untwisted(untwisted_invariant_with(t, p, opts)?),
            Some(a) => InvariantValue::Twisted(twisted_invariant_with(t, p, a, opts)?),
        })
    }

    pub fn as_cyclotomic(&self) -> CyclotomicSum {
        match self {
            InvariantValue::Untwisted(r) => CyclotomicSum::from_rational(r, 1),
            InvariantValue::Twisted(c) => c.clone(),
        }
    }

    pub fn decimal(&self) -> String {
        self.as_cyclotomic().decimal()
    }
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantValue::Untwisted(r) => f.write_str(&format_rational(r)),
            InvariantValue::Twisted(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WalkEntry {
    /// `None` for the starting triangulation.
    pub step: Option<MoveDescriptor>,
    pub value: InvariantValue,
}

impl fmt::Display for WalkEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.step {
            Some(m) => write!(f, "{m} -> {}", self.value),
            None => write!(f, "START -> {}", self.value),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Walk {
    pub entries: Vec<WalkEntry>,
    pub last: StratifiedTriangulation,
}

impl Walk {
    /// Index of the first entry whose value differs from the start.
    pub fn first_divergence(&self) -> Option<usize> {
        let first = &self.entries.first()?.value;
        self.entries.iter().position(|e| &e.value != first)
    }
}

/// Picks one random applicable move: a kind uniformly, then a site
/// uniformly, retried until something applies.
pub fn random_move(
    t: &StratifiedTriangulation,
    rng: &mut impl Rng,
    max_vertices: usize,
    max_attempts: usize,
) -> Option<(MoveDescriptor, StratifiedTriangulation)> {
    for _ in 0..max_attempts {
        let kind = MoveKind::WALK[rng.gen_range(0..MoveKind::WALK.len())];
        if kind.adds_vertex() && t.vertex_count() >= max_vertices {
            continue;
        }
        let candidates = sites(t, kind);
        if candidates.is_empty() {
            continue;
        }
        let m = candidates[rng.gen_range(0..candidates.len())].clone();
        if let Ok(next) = apply(t, &m) {
            return Some((m, next));
        }
    }
    None
}

/// Only the move sequence, without evaluating anything.
pub fn random_moves(
    t: &StratifiedTriangulation,
    cfg: &WalkConfig,
) -> Result<Vec<(MoveDescriptor, StratifiedTriangulation)>, WalkError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut current = t.clone();
    let mut out = Vec::with_capacity(cfg.steps);
    for step in 0..cfg.steps {
        let (m, next) = random_move(&current, &mut rng, cfg.max_vertices, cfg.max_attempts)
            .ok_or(WalkError::Stuck { step, attempts: cfg.max_attempts })?;
        out.push((m, next.clone()));
        current = next;
    }
    Ok(out)
}

/// Performs `cfg.steps` random moves and evaluates the invariant (twisted
/// if `alpha` is given) before the first and after every move.
pub fn random_walk(
    t: &StratifiedTriangulation,
    p: &Parcel,
    alpha: Option<&PartialCocycle>,
    cfg: &WalkConfig,
) -> Result<Walk, WalkError> {
    let opts = SumOptions { parallel: cfg.parallel };
    let mut entries = vec![WalkEntry { step: None, value: InvariantValue::compute(t, p, alpha, opts)? }];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut current = t.clone();
    for step in 0..cfg.steps {
        let (m, next) = random_move(&current, &mut rng, cfg.max_vertices, cfg.max_attempts)
            .ok_or(WalkError::Stuck { step, attempts: cfg.max_attempts })?;
        let value = InvariantValue::compute(&next, p, alpha, opts)?;
        entries.push(WalkEntry { step: Some(m), value });
        current = next;
    }
    Ok(Walk { entries, last: current })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::s3_join_fixture;

    #[test]
    fn zero_steps_is_a_singleton() {
        let t = s3_join_fixture();
        let cfg = WalkConfig { steps: 0, ..WalkConfig::default() };
        let walk = random_walk(&t, &Parcel::trivial(), None, &cfg).unwrap();
        assert_eq!(walk.entries.len(), 1);
        assert_eq!(walk.entries[0].to_string(), "START -> 1/1");
    }

    #[test]
    fn same_seed_same_moves() {
        let t = s3_join_fixture();
        let cfg = WalkConfig { seed: 11, steps: 25, ..WalkConfig::default() };
        let a: Vec<_> = random_moves(&t, &cfg).unwrap().into_iter().map(|x| x.0).collect();
        let b: Vec<_> = random_moves(&t, &cfg).unwrap().into_iter().map(|x| x.0).collect();
        assert_eq!(a, b);
        let other = WalkConfig { seed: 12, ..cfg };
        let c: Vec<_> = random_moves(&t, &other).unwrap().into_iter().map(|x| x.0).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn vertex_cap_is_respected() {
        let t = s3_join_fixture();
        let cfg = WalkConfig { seed: 3, steps: 60, max_vertices: 8, ..WalkConfig::default() };
        for (_, u) in random_moves(&t, &cfg).unwrap() {
            assert!(u.vertex_count() <= 8);
            assert!(u.validate().is_empty());
        }
    }
}
