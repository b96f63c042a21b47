//! Exact state-vector simulation of phase-oracle Grover search and its
//! variants: exact Grover (probability-1 when the solution count is known),
//! usual Grover (halving schedule), eps-error Grover, and find-all with
//! crossing out. All amplitudes are real; the state carries one dummy
//! coordinate used by the exact variant's amplitude padding.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::{Pooling, RunCtx};

/// A queryable input string with a crossing-out overlay and query counters.
///
/// An index is an *effective solution* when it is not crossed out and its
/// bit (complemented if `flipped` is set) is 1. Crossed-out indices are
/// never solutions, which is what prevents rediscovery in find-all.
#[derive(Debug, Clone)]
pub struct PhaseOracle {
    x: Vec<bool>,
    pub crossed: BTreeSet<usize>,
    pub flipped: bool,
    grover_queries: u64,
    verify_queries: u64,
}

impl PhaseOracle {
    /// Build an oracle over a 1-indexed input string.
    pub fn new(x: Vec<bool>) -> Self {
        Self {
            x,
            crossed: BTreeSet::new(),
            flipped: false,
            grover_queries: 0,
            verify_queries: 0,
        }
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self::new((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn is_solution(&self, i: usize) -> bool {
        debug_assert!((1..=self.n()).contains(&i));
        !self.crossed.contains(&i) && (self.x[i - 1] ^ self.flipped)
    }

    /// Effective solutions in increasing index order.
    pub fn solutions(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.is_solution(i)).collect()
    }

    pub fn solution_count(&self) -> usize {
        (1..=self.n()).filter(|&i| self.is_solution(i)).count()
    }

    /// Verify a measured candidate with one extra query.
    pub fn verify(&mut self, candidate: Option<usize>) -> bool {
        self.verify_queries += 1;
        candidate.is_some_and(|i| self.is_solution(i))
    }

    pub fn grover_queries(&self) -> u64 {
        self.grover_queries
    }

    pub fn verify_queries(&self) -> u64 {
        self.verify_queries
    }

    /// Total oracle applications (iterates plus verifications).
    pub fn queries(&self) -> u64 {
        self.grover_queries + self.verify_queries
    }

    pub fn query_counts(&self) -> crate::exec::QueryCounts {
        crate::exec::QueryCounts {
            grover: self.grover_queries,
            verify: self.verify_queries,
        }
    }

    /// Switch between searching for 1s and for 0s; the crossing-out overlay
    /// is reset because it applies to one search polarity only.
    pub fn set_flipped(&mut self, flipped: bool) {
        self.flipped = flipped;
        self.crossed.clear();
    }
}

/// Real amplitudes over indices 1..n plus one dummy coordinate (last).
/// The dummy never counts as a solution.
#[derive(Debug, Clone)]
pub struct SearchState {
    amp: Vec<f64>,
}

impl SearchState {
    /// Uniform superposition over the n real indices, dummy at 0.
    pub fn uniform(n: usize) -> Self {
        let a = 1.0 / (n as f64).sqrt();
        let mut amp = vec![a; n + 1];
        amp[n] = 0.0;
        Self { amp }
    }

    /// Padded start state: amplitude sqrt(gamma) on the dummy coordinate and
    /// the rest spread uniformly over the real indices.
    pub fn padded(n: usize, gamma: f64) -> Self {
        let a = ((1.0 - gamma) / n as f64).sqrt();
        let mut amp = vec![a; n + 1];
        amp[n] = gamma.sqrt();
        Self { amp }
    }

    pub fn n(&self) -> usize {
        self.amp.len() - 1
    }

    /// Squared amplitude of index i (1-based); `None` gives the dummy.
    pub fn probability(&self, i: Option<usize>) -> f64 {
        match i {
            Some(i) => self.amp[i - 1] * self.amp[i - 1],
            None => self.amp[self.n()] * self.amp[self.n()],
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amp.iter().map(|a| a * a).sum()
    }

    /// Total probability mass on effective solutions.
    pub fn solution_mass(&self, oracle: &PhaseOracle) -> f64 {
        oracle
            .solutions()
            .iter()
            .map(|&i| self.amp[i - 1] * self.amp[i - 1])
            .sum()
    }
}

/// One Grover iterate G: oracle phase flip on effective solutions followed
/// by reflection about `start`. Costs one query.
pub fn iterate_about(state: &mut SearchState, oracle: &mut PhaseOracle, start: &SearchState) {
    let n = state.n();
    for i in 1..=n {
        if oracle.is_solution(i) {
            state.amp[i - 1] = -state.amp[i - 1];
        }
    }
    oracle.grover_queries += 1;
    let dot: f64 = state
        .amp
        .iter()
        .zip(&start.amp)
        .map(|(a, s)| a * s)
        .sum();
    for (a, s) in state.amp.iter_mut().zip(&start.amp) {
        *a = 2.0 * dot * s - *a;
    }
}

/// The textbook iterate: reflection about the uniform start state.
pub fn grover_iterate(state: &mut SearchState, oracle: &mut PhaseOracle) {
    let start = SearchState::uniform(state.n());
    iterate_about(state, oracle, &start);
}

/// Probability that measuring after T iterates of plain Grover yields a
/// solution: sin^2((2T+1) arcsin(sqrt(k/n))).
pub fn success_probability(n: usize, k: usize, t_iters: u64) -> f64 {
    assert!(k <= n && n > 0);
    let theta = (k as f64 / n as f64).sqrt().asin();
    let s = ((2 * t_iters + 1) as f64 * theta).sin();
    s * s
}

/// Iteration count used by the exact variant for an assumed solution count.
pub fn exact_iterations(n: usize, k_assumed: usize) -> u64 {
    debug_assert!(k_assumed >= 1 && k_assumed <= n);
    let theta = (k_assumed as f64 / n as f64).sqrt().asin();
    let raw = PI / (4.0 * theta) - 0.5;
    (raw - 1e-9).ceil().max(0.0) as u64
}

/// Dummy-coordinate weight that makes the padded rotation angle exactly
/// pi/(4T+2), so T iterates land on the solution subspace exactly.
fn exact_gamma(n: usize, k_assumed: usize, t_iters: u64) -> f64 {
    let target = (PI / (4 * t_iters + 2) as f64).sin();
    let gamma = 1.0 - n as f64 * target * target / k_assumed as f64;
    gamma.clamp(0.0, 1.0)
}

/// Outcome of measuring a search state, already grouped into branch classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measured {
    /// An effective solution index (a pooled representative under
    /// `Pooling::ByCount`).
    Solution(usize),
    /// Any non-solution index or the dummy coordinate.
    Other,
}

impl Measured {
    pub fn candidate(&self) -> Option<usize> {
        match self {
            Measured::Solution(i) => Some(*i),
            Measured::Other => None,
        }
    }
}

/// Measure the state in the computational basis, grouping outcomes by what
/// the continuation can depend on: individual solutions (or their pooled
/// count class) versus everything else.
pub fn measure_search(state: &SearchState, oracle: &PhaseOracle, ctx: &mut RunCtx) -> Measured {
    let solutions = oracle.solutions();
    let sol_mass: f64 = solutions
        .iter()
        .map(|&i| state.probability(Some(i)))
        .sum();
    let other_mass = (state.norm_sq() - sol_mass).max(0.0);
    match ctx.pooling {
        Pooling::ByCount => {
            let probs = [sol_mass, other_mass];
            if solutions.is_empty() || ctx.choose(&probs) == 1 {
                Measured::Other
            } else {
                Measured::Solution(solutions[0])
            }
        }
        Pooling::ByIdentity => {
            let mut probs: Vec<f64> = solutions
                .iter()
                .map(|&i| state.probability(Some(i)))
                .collect();
            probs.push(other_mass);
            let pick = ctx.choose(&probs);
            if pick == solutions.len() {
                Measured::Other
            } else {
                Measured::Solution(solutions[pick])
            }
        }
    }
}

/// Exact Grover: tuned for exactly `k_assumed` solutions via amplitude
/// padding; finds one with probability 1 when the assumption is correct.
/// Uses at most ceil((pi/4) sqrt(n/k_assumed)) queries. The caller verifies
/// the measured candidate.
pub fn exact_grover(oracle: &mut PhaseOracle, k_assumed: usize, ctx: &mut RunCtx) -> Result<Measured> {
    let n = oracle.n();
    if k_assumed == 0 || k_assumed > n {
        return Err(Error::Parameter(format!(
            "assumed solution count {k_assumed} out of range 1..={n}"
        )));
    }
    let t_iters = exact_iterations(n, k_assumed);
    let gamma = exact_gamma(n, k_assumed, t_iters);
    let start = SearchState::padded(n, gamma);
    let mut state = start.clone();
    for _ in 0..t_iters {
        iterate_about(&mut state, oracle, &start);
    }
    Ok(measure_search(&state, oracle, ctx))
}

/// Assumed-count schedule for usual Grover: n/2, n/4, ... down to
/// max(1, t_min).
pub fn halving_schedule(n: usize, t_min: usize) -> Vec<usize> {
    let floor = t_min.max(1).min(n);
    let mut schedule = Vec::new();
    let mut a = n / 2;
    while a > floor {
        schedule.push(a);
        a /= 2;
    }
    schedule.push(floor);
    schedule
}

/// Usual Grover: one halving pass over assumed counts, each candidate
/// verified with one extra query; on failure the pass repeats once. Finds a
/// verified solution with probability >= 1/2 whenever at least `t_min`
/// effective solutions exist.
pub fn usual_grover(
    oracle: &mut PhaseOracle,
    t_min: usize,
    ctx: &mut RunCtx,
) -> Result<Option<usize>> {
    if t_min == 0 {
        return Err(Error::Parameter("t_min must be >= 1".into()));
    }
    for _pass in 0..2 {
        for &assumed in &halving_schedule(oracle.n(), t_min) {
            let measured = exact_grover(oracle, assumed, ctx)?;
            let candidate = measured.candidate();
            if oracle.verify(candidate) {
                return Ok(candidate);
            }
        }
    }
    Ok(None)
}

/// Number of phase-1 exact passes for eps-error Grover.
pub fn eps_error_phase1_passes(eps: f64) -> usize {
    ((1.0 / eps).log2().ceil() as usize).max(1)
}

/// Number of phase-2 usual-Grover repetitions for eps-error Grover.
pub fn eps_error_phase2_reps(eps: f64) -> usize {
    ((2.0 / eps).log2().ceil() as usize).max(1)
}

/// eps-error Grover: exact passes for assumed counts 1..ceil(log2(1/eps)),
/// then repeated usual Grover assuming at least that many solutions. Finds
/// a verified solution with probability >= 1 - eps when one exists; returns
/// `None` with probability 1 when none exists.
pub fn eps_error_grover(
    oracle: &mut PhaseOracle,
    eps: f64,
    ctx: &mut RunCtx,
) -> Result<Option<usize>> {
    if !(0.0 < eps && eps < 0.5) {
        return Err(Error::Parameter(format!("eps {eps} out of range (0, 1/2)")));
    }
    let n = oracle.n();
    let passes = eps_error_phase1_passes(eps);
    for k_assumed in 1..=passes.min(n) {
        let measured = exact_grover(oracle, k_assumed, ctx)?;
        let candidate = measured.candidate();
        if oracle.verify(candidate) {
            return Ok(candidate);
        }
    }
    for _ in 0..eps_error_phase2_reps(eps) {
        if let Some(i) = usual_grover(oracle, passes, ctx)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Result of a find-all run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FindAllResult {
    pub found: BTreeSet<usize>,
    /// Whether "assumed count upper-bounds the remaining solutions" held at
    /// the start of every executed run on this branch. Guaranteed when the
    /// initial effective count is at most t.
    pub invariant_ok: bool,
}

/// Find all effective solutions with probability 1, given an upper bound
/// `t` on their number: run exact Grover with assumed counts t, t-1, ..., 1,
/// verify each candidate, and cross out what is found.
pub fn find_all(oracle: &mut PhaseOracle, t: usize, ctx: &mut RunCtx) -> Result<FindAllResult> {
    if t < 1 {
        return Err(Error::Parameter("find_all needs t >= 1".into()));
    }
    let n = oracle.n();
    let mut found = BTreeSet::new();
    let mut invariant_ok = true;
    for run in 0..t {
        let assumed = t - run;
        // Skip rule: an assumed count larger than the remaining search space
        // cannot be right, and costs nothing to rule out.
        if assumed > n - oracle.crossed.len() {
            continue;
        }
        if oracle.solution_count() > assumed {
            invariant_ok = false;
        }
        let measured = exact_grover(oracle, assumed, ctx)?;
        let candidate = measured.candidate();
        if oracle.verify(candidate) {
            let i = candidate.expect("verified candidate");
            oracle.crossed.insert(i);
            found.insert(i);
        }
    }
    Ok(FindAllResult {
        found,
        invariant_ok,
    })
}

/// Worst-case Grover-query ceiling of one find_all call (verifications are
/// counted separately, at most t of them).
pub fn find_all_grover_budget(n: usize, t: usize) -> u64 {
    (1..=t.min(n)).map(|i| exact_iterations(n, i)).sum()
}

/// Worst-case Grover+verify query ceiling of one usual_grover call.
pub fn usual_grover_budget(n: usize, t_min: usize) -> u64 {
    let pass: u64 = halving_schedule(n, t_min)
        .iter()
        .map(|&a| exact_iterations(n, a) + 1)
        .sum();
    2 * pass
}

/// Worst-case Grover+verify query ceiling of one eps_error_grover call.
pub fn eps_error_budget(n: usize, eps: f64) -> u64 {
    let passes = eps_error_phase1_passes(eps);
    let phase1: u64 = (1..=passes.min(n))
        .map(|k| exact_iterations(n, k) + 1)
        .sum();
    phase1 + eps_error_phase2_reps(eps) as u64 * usual_grover_budget(n, passes)
}
