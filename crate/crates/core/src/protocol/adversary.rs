//! Byzantine behaviour of faulty processes.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Scenario;
use crate::geometry::Point;
use crate::graph::ProcessId;
use crate::Rational;

/// Number of grid steps used by [`AdversaryStrategy::RandomInRange`]: values
/// are drawn from `mu + (U - mu) * k / RANDOM_GRID`.
pub const RANDOM_GRID: u32 = 1000;

/// What a faulty process sends. Targets not covered by a per-edge table get
/// nothing, which receivers read as `e_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdversaryStrategy {
    /// Sends nothing.
    Silent,
    /// A fixed point per target.
    Equivocate(BTreeMap<ProcessId, Point>),
    /// `e_i` (with `e_i` carrying `2 epsilon` in coordinate `i`, `e_0` the
    /// origin) to every target assigned block `i`, every round.
    FixedPartition(BTreeMap<ProcessId, usize>),
    /// Independent uniform grid points of `[mu, U]^d` on every edge.
    RandomInRange,
    /// Scripted `(round, target) -> point`.
    Custom(BTreeMap<(u64, ProcessId), Point>),
}

impl AdversaryStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            AdversaryStrategy::Silent => "silent",
            AdversaryStrategy::Equivocate(_) => "equivocate",
            AdversaryStrategy::FixedPartition(_) => "fixed-partition",
            AdversaryStrategy::RandomInRange => "random",
            AdversaryStrategy::Custom(_) => "custom",
        }
    }

    /// The callback implementing this strategy for faulty process `id`.
    pub fn build(&self, seed: u64, id: ProcessId) -> Box<dyn Adversary> {
        match self {
            AdversaryStrategy::RandomInRange => Box::new(RandomInRange::new(seed, id)),
            other => Box::new(Scripted(other.clone())),
        }
    }
}

/// `e_i`: the origin for `i = 0`, else `2 epsilon` in coordinate `i`.
pub fn partition_point(d: usize, i: usize, epsilon: &Rational) -> Point {
    if i == 0 {
        Point::origin(d)
    } else {
        Point::axis(d, i, epsilon * Rational::from_integer(BigInt::from(2)))
    }
}

/// Everything a faulty process may look at when choosing a message.
pub struct AdversaryView<'a> {
    pub scenario: &'a Scenario,
    /// Round being played (1-based).
    pub round: u64,
    /// Fault-free states at the end of the previous round.
    pub states: &'a BTreeMap<ProcessId, Point>,
}

/// A faulty process. `None` is an omission.
pub trait Adversary: Send {
    fn message(&mut self, view: &AdversaryView<'_>, from: ProcessId, to: ProcessId) -> Option<Point>;
}

struct Scripted(AdversaryStrategy);

impl Adversary for Scripted {
    fn message(&mut self, view: &AdversaryView<'_>, _from: ProcessId, to: ProcessId) -> Option<Point> {
        let s = view.scenario;
        match &self.0 {
            AdversaryStrategy::Silent | AdversaryStrategy::RandomInRange => None,
            AdversaryStrategy::Equivocate(table) => table.get(&to).cloned(),
            AdversaryStrategy::FixedPartition(blocks) => blocks
                .get(&to)
                .map(|&i| partition_point(s.d, i, &s.epsilon)),
            AdversaryStrategy::Custom(script) => script.get(&(view.round, to)).cloned(),
        }
    }
}

struct RandomInRange {
    rng: ChaCha8Rng,
}

impl RandomInRange {
    fn new(seed: u64, id: ProcessId) -> Self {
        let stream = seed ^ (id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        RandomInRange {
            rng: ChaCha8Rng::seed_from_u64(stream),
        }
    }
}

impl Adversary for RandomInRange {
    fn message(&mut self, view: &AdversaryView<'_>, _from: ProcessId, _to: ProcessId) -> Option<Point> {
        let s = view.scenario;
        let width = &s.upper - &s.mu;
        let grid = Rational::from_integer(RANDOM_GRID.into());
        let coords = (0..s.d)
            .map(|_| {
                let k = self.rng.random_range(0..=RANDOM_GRID);
                if width.is_zero() {
                    s.mu.clone()
                } else {
                    &s.mu + &width * Rational::from_integer(k.into()) / &grid
                }
            })
            .collect();
        Some(Point::new(coords).expect("d >= 1"))
    }
}

impl fmt::Display for AdversaryStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
