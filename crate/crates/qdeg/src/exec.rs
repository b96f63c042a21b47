//! Execution contexts for randomized algorithms: single sampled runs and
//! exact enumeration of every measurement-outcome branch.
//!
//! Algorithms are written against [`RunCtx`]; the only source of randomness
//! they may use is [`RunCtx::choose`], which picks one index from a finite
//! outcome distribution. A sampled run draws the index from a seeded PRNG;
//! an enumerated run replays the algorithm once per branch, forcing a
//! different outcome prefix each time, and collects the exact leaf
//! distribution.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Query totals for one branch, kept separately so callers can report both
/// Grover-iterate applications and verification queries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct QueryCounts {
    pub grover: u64,
    pub verify: u64,
}

impl QueryCounts {
    pub fn total(&self) -> u64 {
        self.grover + self.verify
    }
}

/// How measurement outcomes over solution indices are grouped into branches.
///
/// `ByIdentity` forks one branch per solution index; `ByCount` pools all
/// solutions into a single branch represented by the lowest-index solution.
/// Pooling is exact whenever the continuation depends only on *how many*
/// solutions were found, which holds for symmetric targets: the Grover
/// dynamics treat all effective solutions identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pooling {
    ByIdentity,
    ByCount,
}

trait Chooser {
    fn choose(&mut self, probs: &[f64]) -> usize;
}

/// Execution context threaded through every randomized operation.
pub struct RunCtx<'a> {
    chooser: &'a mut dyn Chooser,
    pub pooling: Pooling,
}

impl<'a> RunCtx<'a> {
    /// Resolve one measurement with the given outcome-class probabilities.
    /// Returns the index of the class taken on this branch.
    pub fn choose(&mut self, probs: &[f64]) -> usize {
        debug_assert!(!probs.is_empty());
        if probs.len() == 1 {
            return 0;
        }
        self.chooser.choose(probs)
    }
}

struct SampledChooser {
    rng: ChaCha8Rng,
}

impl Chooser for SampledChooser {
    fn choose(&mut self, probs: &[f64]) -> usize {
        let total: f64 = probs.iter().sum();
        let mut u = self.rng.gen::<f64>() * total;
        for (i, &p) in probs.iter().enumerate() {
            u -= p;
            if u <= 0.0 {
                return i;
            }
        }
        probs.len() - 1
    }
}

/// Replays a forced outcome prefix, then completes the run along the first
/// positive-probability outcome at every later choice point, recording the
/// full distributions so the driver can spawn the sibling branches.
struct ReplayChooser {
    forced: Vec<usize>,
    trace: Vec<Vec<f64>>,
    picks: Vec<usize>,
    prob: f64,
}

impl ReplayChooser {
    fn new(forced: Vec<usize>) -> Self {
        Self {
            forced,
            trace: Vec::new(),
            picks: Vec::new(),
            prob: 1.0,
        }
    }
}

impl Chooser for ReplayChooser {
    fn choose(&mut self, probs: &[f64]) -> usize {
        let depth = self.trace.len();
        let pick = if depth < self.forced.len() {
            self.forced[depth]
        } else {
            probs.iter().position(|&p| p > 0.0).unwrap_or(0)
        };
        self.trace.push(probs.to_vec());
        self.picks.push(pick);
        self.prob *= probs[pick];
        pick
    }
}

/// One terminal outcome of an enumerated run.
#[derive(Debug, Clone)]
pub struct Leaf<R> {
    pub value: R,
    pub probability: f64,
    pub queries: QueryCounts,
}

/// The exact outcome distribution of a randomized algorithm: every
/// measurement path with positive probability, plus any mass dropped by the
/// pruning threshold.
#[derive(Debug, Clone)]
pub struct BranchTree<R> {
    pub leaves: Vec<Leaf<R>>,
    pub pruned_mass: f64,
}

impl<R> BranchTree<R> {
    pub fn total_mass(&self) -> f64 {
        self.leaves.iter().map(|l| l.probability).sum()
    }

    /// Probability mass of leaves satisfying `pred`.
    pub fn mass_where(&self, mut pred: impl FnMut(&R) -> bool) -> f64 {
        self.leaves
            .iter()
            .filter(|l| pred(&l.value))
            .map(|l| l.probability)
            .sum()
    }

    pub fn max_total_queries(&self) -> u64 {
        self.leaves.iter().map(|l| l.queries.total()).max().unwrap_or(0)
    }

    pub fn max_grover_queries(&self) -> u64 {
        self.leaves.iter().map(|l| l.queries.grover).max().unwrap_or(0)
    }
}

/// Configuration for branch enumeration.
#[derive(Debug, Clone, Copy)]
pub struct EnumConfig {
    /// Branches whose accumulated probability falls at or below this value
    /// are dropped and their mass recorded in `pruned_mass`. The default 0
    /// prunes only genuinely impossible outcomes.
    pub prune_threshold: f64,
    /// Hard cap on the number of leaves explored.
    pub max_leaves: usize,
    pub pooling: Pooling,
}

impl Default for EnumConfig {
    fn default() -> Self {
        Self {
            prune_threshold: 0.0,
            max_leaves: 4_000_000,
            pooling: Pooling::ByIdentity,
        }
    }
}

impl EnumConfig {
    pub fn pooled() -> Self {
        Self {
            pooling: Pooling::ByCount,
            ..Self::default()
        }
    }
}

/// Draw a single execution of `algo` using a deterministic stream seeded by
/// `seed`. Identical seeds yield identical transcripts.
pub fn run_sampled<R>(
    seed: u64,
    pooling: Pooling,
    mut algo: impl FnMut(&mut RunCtx) -> Result<(R, QueryCounts)>,
) -> Result<(R, QueryCounts)> {
    let mut chooser = SampledChooser {
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let mut ctx = RunCtx {
        chooser: &mut chooser,
        pooling,
    };
    algo(&mut ctx)
}

/// Enumerate every measurement branch of `algo` and return the exact
/// outcome distribution.
///
/// `algo` is replayed once per leaf; it must be a pure function of the
/// choice sequence (build any mutable state, e.g. the oracle, inside the
/// closure).
pub fn run_enumerated<R>(
    cfg: &EnumConfig,
    mut algo: impl FnMut(&mut RunCtx) -> Result<(R, QueryCounts)>,
) -> Result<BranchTree<R>> {
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    let mut leaves: Vec<Leaf<R>> = Vec::new();
    let mut pruned_mass = 0.0;

    while let Some(prefix) = stack.pop() {
        let mut chooser = ReplayChooser::new(prefix);
        let (value, queries) = {
            let mut ctx = RunCtx {
                chooser: &mut chooser,
                pooling: cfg.pooling,
            };
            algo(&mut ctx)?
        };
        let prefix_len = chooser.forced.len();

        // Spawn the sibling branches at every choice point past the prefix.
        let mut base = chooser.prob;
        for t in (prefix_len..chooser.trace.len()).rev() {
            // Probability of the path up to (not including) choice t.
            base = if chooser.trace[t][chooser.picks[t]] > 0.0 {
                base / chooser.trace[t][chooser.picks[t]]
            } else {
                // Recompute from scratch; cannot divide by zero.
                chooser.picks[..t]
                    .iter()
                    .zip(&chooser.trace)
                    .map(|(&p, d)| d[p])
                    .product()
            };
            for (i, &p) in chooser.trace[t].iter().enumerate() {
                if i == chooser.picks[t] || p <= 0.0 {
                    continue;
                }
                let mass = base * p;
                if mass <= cfg.prune_threshold {
                    pruned_mass += mass;
                    continue;
                }
                let mut child = chooser.picks[..t].to_vec();
                child.push(i);
                stack.push(child);
            }
        }

        if chooser.prob > 0.0 {
            leaves.push(Leaf {
                value,
                probability: chooser.prob,
                queries,
            });
        }
        if leaves.len() > cfg.max_leaves {
            let partial: f64 = leaves.iter().map(|l| l.probability).sum();
            return Err(Error::Resource {
                reason: format!("branch enumeration exceeded {} leaves", cfg.max_leaves),
                partial_mass: partial,
            });
        }
    }

    Ok(BranchTree {
        leaves,
        pruned_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin_pair(ctx: &mut RunCtx) -> Result<((usize, usize), QueryCounts)> {
        let a = ctx.choose(&[0.25, 0.75]);
        let b = ctx.choose(&[0.5, 0.5]);
        Ok(((a, b), QueryCounts::default()))
    }

    #[test]
    fn enumerates_all_branches() {
        let tree = run_enumerated(&EnumConfig::default(), coin_pair).unwrap();
        assert_eq!(tree.leaves.len(), 4);
        assert!((tree.total_mass() - 1.0).abs() < 1e-12);
        let m = tree.mass_where(|&(a, _)| a == 1);
        assert!((m - 0.75).abs() < 1e-12);
    }

    #[test]
    fn zero_probability_branches_are_skipped() {
        let tree = run_enumerated(&EnumConfig::default(), |ctx| {
            let a = ctx.choose(&[0.0, 1.0]);
            Ok((a, QueryCounts::default()))
        })
        .unwrap();
        assert_eq!(tree.leaves.len(), 1);
        assert_eq!(tree.leaves[0].value, 1);
    }

    #[test]
    fn same_seed_same_transcript() {
        let run = |seed| {
            run_sampled(seed, Pooling::ByIdentity, |ctx| {
                let mut v = Vec::new();
                for _ in 0..20 {
                    v.push(ctx.choose(&[0.3, 0.3, 0.4]));
                }
                Ok((v, QueryCounts::default()))
            })
            .unwrap()
            .0
        };
        assert_eq!(run(7), run(7));
        assert_ne!(run(7), run(8));
    }

    #[test]
    fn leaf_budget_reports_partial_mass() {
        let cfg = EnumConfig {
            max_leaves: 3,
            ..EnumConfig::default()
        };
        let err = run_enumerated(&cfg, |ctx| {
            let mut w = 0usize;
            for _ in 0..3 {
                w += ctx.choose(&[0.5, 0.5]);
            }
            Ok((w, QueryCounts::default()))
        })
        .unwrap_err();
        match err {
            Error::Resource { partial_mass, .. } => assert!(partial_mass > 0.0),
            other => panic!("expected resource error, got {other}"),
        }
    }

    #[test]
    fn pruning_records_dropped_mass() {
        let cfg = EnumConfig {
            prune_threshold: 0.3,
            ..EnumConfig::default()
        };
        let tree = run_enumerated(&cfg, |ctx| {
            let a = ctx.choose(&[0.8, 0.2]);
            Ok((a, QueryCounts::default()))
        })
        .unwrap();
        assert_eq!(tree.leaves.len(), 1);
        assert!((tree.pruned_mass - 0.2).abs() < 1e-12);
        assert!((tree.total_mass() + tree.pruned_mass - 1.0).abs() < 1e-12);
    }
}
