//! The 4-step eps-error algorithm for functions that are constant on the
//! middle Hamming-weight band {t, ..., n-t}: find up to t ones exactly,
//! search for one more with eps/2 error, then the same for zeros. When the
//! weight is outside the band the input is recovered completely.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exec::{run_enumerated, BranchTree, EnumConfig, Pooling, QueryCounts, RunCtx};
use crate::grover::{
    eps_error_budget, eps_error_grover, find_all, find_all_grover_budget, PhaseOracle,
};
use crate::symfun::{jump_parameter, SymmetricFunction};

/// Verdict of the weight classification, carrying the fully recovered input
/// in the two extreme regimes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightClassification {
    /// |x| < t believed; the bits found to be 1 (x is fully known).
    Low(Vec<bool>),
    /// t <= |x| <= n - t believed.
    Middle,
    /// |x| > n - t believed; the reconstructed input (x is fully known).
    High(Vec<bool>),
}

impl WeightClassification {
    /// The input this verdict claims, when it claims one.
    pub fn recovered(&self) -> Option<&[bool]> {
        match self {
            WeightClassification::Low(x) | WeightClassification::High(x) => Some(x),
            WeightClassification::Middle => None,
        }
    }
}

fn bits_from_ones(n: usize, ones: &BTreeSet<usize>) -> Vec<bool> {
    (1..=n).map(|i| ones.contains(&i)).collect()
}

fn bits_from_zeros(n: usize, zeros: &BTreeSet<usize>) -> Vec<bool> {
    (1..=n).map(|i| !zeros.contains(&i)).collect()
}

/// Distinguish |x| < t, middle, |x| > n-t with error probability at most
/// eps, recovering x completely in the two extreme cases.
///
/// Steps 1-2 search for 1s (find_all with budget t, then eps/2-error Grover
/// with the finds crossed out); steps 3-4 repeat on the flipped oracle for
/// 0s with a fresh crossing-out set.
pub fn classify_weight(
    oracle: &mut PhaseOracle,
    t: usize,
    eps: f64,
    ctx: &mut RunCtx,
) -> Result<WeightClassification> {
    let pooling = ctx.pooling;
    classify_weight_pooled(oracle, t, eps, ctx, pooling, pooling)
}

/// Like [`classify_weight`], but with separate outcome-pooling modes for
/// the 1-search and the 0-search. Count pooling is exact only when the
/// downstream use of the recovered input is weight-symmetric on that side.
pub fn classify_weight_pooled(
    oracle: &mut PhaseOracle,
    t: usize,
    eps: f64,
    ctx: &mut RunCtx,
    pooling_ones: Pooling,
    pooling_zeros: Pooling,
) -> Result<WeightClassification> {
    let n = oracle.n();
    if t < 1 || t > n / 2 + 1 {
        return Err(Error::Parameter(format!(
            "t = {t} out of range 1..={}",
            n / 2 + 1
        )));
    }
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::Parameter(format!("eps {eps} out of range (0, 1)")));
    }

    // Steps 1-2: ones.
    oracle.set_flipped(false);
    ctx.pooling = pooling_ones;
    let ones = find_all(oracle, t, ctx)?.found;
    let extra_one = eps_error_grover(oracle, eps / 2.0, ctx)?;

    // Steps 3-4: zeros, separate crossing-out set.
    oracle.set_flipped(true);
    ctx.pooling = pooling_zeros;
    let zeros = find_all(oracle, t, ctx)?.found;
    let extra_zero = eps_error_grover(oracle, eps / 2.0, ctx)?;
    oracle.set_flipped(false);

    if ones.len() < t && extra_one.is_none() {
        Ok(WeightClassification::Low(bits_from_ones(n, &ones)))
    } else if zeros.len() < t && extra_zero.is_none() {
        Ok(WeightClassification::High(bits_from_zeros(n, &zeros)))
    } else {
        Ok(WeightClassification::Middle)
    }
}

/// Compute f(x) with error probability at most eps for any non-constant
/// symmetric f whose oracle matches its input length.
pub fn compute_symmetric(
    f: &SymmetricFunction,
    oracle: &mut PhaseOracle,
    eps: f64,
    ctx: &mut RunCtx,
) -> Result<u8> {
    let n = oracle.n();
    if f.n() != n {
        return Err(Error::Parameter(format!(
            "function on {} bits, oracle on {n}",
            f.n()
        )));
    }
    let t = jump_parameter(f)?;
    // The middle constant; arbitrary when the band {t..n-t} is empty, which
    // is only reached on branches already charged to the error budget.
    let middle = if t <= n - t { f.value_at_weight(t) } else { 0 };
    match classify_weight(oracle, t, eps, ctx)? {
        WeightClassification::Low(x) | WeightClassification::High(x) => Ok(f.eval(&x)),
        WeightClassification::Middle => Ok(middle),
    }
}

/// A possibly non-symmetric promise function: arbitrary below weight t and
/// above weight n-t (given by complete tables keyed on the input mask),
/// constant in between.
#[derive(Debug, Clone)]
pub struct PromiseFunction {
    pub n: usize,
    pub t: usize,
    pub low: BTreeMap<u64, u8>,
    pub high: BTreeMap<u64, u8>,
    pub middle: u8,
}

fn mask_of(bits: &[bool]) -> u64 {
    bits.iter()
        .enumerate()
        .fold(0u64, |m, (i, &b)| if b { m | 1 << i } else { m })
}

impl PromiseFunction {
    /// Check table completeness: every mask with weight < t must appear in
    /// `low`, every mask with weight > n-t in `high`.
    pub fn validate(&self) -> Result<()> {
        if self.n > 24 {
            return Err(Error::Parameter("promise tables limited to n <= 24".into()));
        }
        for mask in 0u64..(1 << self.n) {
            let w = mask.count_ones() as usize;
            if w < self.t && !self.low.contains_key(&mask) {
                return Err(Error::Specification(format!(
                    "low table missing entry for mask {mask:#b}"
                )));
            }
            if w > self.n - self.t && !self.high.contains_key(&mask) {
                return Err(Error::Specification(format!(
                    "high table missing entry for mask {mask:#b}"
                )));
            }
        }
        Ok(())
    }

    /// Ground-truth evaluation.
    pub fn eval(&self, x: &[bool]) -> Result<u8> {
        let w = x.iter().filter(|&&b| b).count();
        let mask = mask_of(x);
        if w < self.t {
            self.low.get(&mask).copied().ok_or_else(|| {
                Error::Specification(format!("low table missing entry for mask {mask:#b}"))
            })
        } else if w > self.n - self.t {
            self.high.get(&mask).copied().ok_or_else(|| {
                Error::Specification(format!("high table missing entry for mask {mask:#b}"))
            })
        } else {
            Ok(self.middle)
        }
    }

    fn table_is_symmetric(table: &BTreeMap<u64, u8>) -> bool {
        let mut by_weight: BTreeMap<u32, u8> = BTreeMap::new();
        for (&mask, &v) in table {
            match by_weight.insert(mask.count_ones(), v) {
                Some(prev) if prev != v => return false,
                _ => {}
            }
        }
        true
    }

    /// Pooling modes that are exact for this function's tables: identities
    /// matter on a side only when its table is weight-asymmetric.
    pub fn exact_pooling(&self) -> (Pooling, Pooling) {
        let ones = if Self::table_is_symmetric(&self.low) {
            Pooling::ByCount
        } else {
            Pooling::ByIdentity
        };
        let zeros = if Self::table_is_symmetric(&self.high) {
            Pooling::ByCount
        } else {
            Pooling::ByIdentity
        };
        (ones, zeros)
    }
}

/// Compute a promise function with error probability at most eps; the low
/// and high regimes use the recovered input, the middle its constant.
pub fn compute_promise(
    pf: &PromiseFunction,
    oracle: &mut PhaseOracle,
    eps: f64,
    ctx: &mut RunCtx,
) -> Result<u8> {
    if pf.n != oracle.n() {
        return Err(Error::Parameter(format!(
            "promise function on {} bits, oracle on {}",
            pf.n,
            oracle.n()
        )));
    }
    pf.validate()?;
    let (pool_ones, pool_zeros) = pf.exact_pooling();
    match classify_weight_pooled(oracle, pf.t, eps, ctx, pool_ones, pool_zeros)? {
        WeightClassification::Low(x) => {
            let mask = mask_of(&x);
            pf.low.get(&mask).copied().ok_or_else(|| {
                Error::Specification(format!("low table missing entry for mask {mask:#b}"))
            })
        }
        WeightClassification::High(x) => {
            let mask = mask_of(&x);
            pf.high.get(&mask).copied().ok_or_else(|| {
                Error::Specification(format!("high table missing entry for mask {mask:#b}"))
            })
        }
        WeightClassification::Middle => Ok(pf.middle),
    }
}

/// Worst-case total query ceiling (Grover plus verification) of one
/// classify_weight / compute_symmetric run: two find_all passes and two
/// eps/2-error searches, none of which can exceed its full schedule.
pub fn query_budget(n: usize, t: usize, eps: f64) -> u64 {
    let find_all_part = find_all_grover_budget(n, t) + t as u64;
    2 * find_all_part + 2 * eps_error_budget(n, eps / 2.0)
}

/// Exact per-input behaviour of a run over one input: total error mass,
/// worst-branch query totals, leaf count, and pruned mass.
#[derive(Debug, Clone)]
pub struct AlgorithmReport {
    pub error_mass: f64,
    pub max_queries: QueryCounts,
    pub leaf_count: usize,
    pub pruned_mass: f64,
}

fn report_from_tree(tree: &BranchTree<u8>, expected: u8) -> AlgorithmReport {
    // Leaf probabilities are products of floats; clamp the -1e-16s away.
    let error_mass = tree.mass_where(|&out| out != expected).max(0.0);
    let max_queries = tree
        .leaves
        .iter()
        .max_by_key(|l| l.queries.total())
        .map(|l| l.queries)
        .unwrap_or_default();
    AlgorithmReport {
        error_mass,
        max_queries,
        leaf_count: tree.leaves.len(),
        pruned_mass: tree.pruned_mass,
    }
}

/// Branch-enumerate compute_symmetric on one input and compare against the
/// direct evaluation of f.
pub fn enumerate_symmetric_input(
    f: &SymmetricFunction,
    mask: u64,
    eps: f64,
    cfg: &EnumConfig,
) -> Result<AlgorithmReport> {
    let n = f.n();
    let tree = run_enumerated(cfg, |ctx| {
        let mut oracle = PhaseOracle::from_mask(n, mask);
        let out = compute_symmetric(f, &mut oracle, eps, ctx)?;
        Ok((out, oracle.query_counts()))
    })?;
    let expected = f.value_at_weight(mask.count_ones() as usize);
    Ok(report_from_tree(&tree, expected))
}

/// Branch-enumerate compute_promise on one input.
pub fn enumerate_promise_input(
    pf: &PromiseFunction,
    mask: u64,
    eps: f64,
    cfg: &EnumConfig,
) -> Result<AlgorithmReport> {
    let n = pf.n;
    let x: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
    let expected = pf.eval(&x)?;
    let tree = run_enumerated(cfg, |ctx| {
        let mut oracle = PhaseOracle::from_mask(n, mask);
        let out = compute_promise(pf, &mut oracle, eps, ctx)?;
        Ok((out, oracle.query_counts()))
    })?;
    Ok(report_from_tree(&tree, expected))
}
