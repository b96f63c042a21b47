//! Ground-truth approximate degrees: exact discrete minimax approximation
//! of a spectrum by low-degree polynomials (an LP in the Chebyshev basis on
//! [0, n]), binary search for the eps-approximate degree, and the
//! upper/lower-bound consistency checks plus scaling-band reports.

mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{EnumConfig, QueryCounts};
use crate::polyx::{acceptance_surface, UnivariatePoly};
use crate::qsym::compute_symmetric;
use crate::symfun::{embed_or, jump_parameter, make_named, Family, SymmetricFunction};

/// Feasibility slack on e* <= eps decisions; degree answers are integers,
/// so this only matters at razor-thin boundaries.
pub const EPS_FEASIBILITY_TOL: f64 = 1e-9;

/// Degree-j Chebyshev polynomial mapped to [0, n], evaluated at k.
pub fn chebyshev_at(j: usize, k: f64, n: usize) -> f64 {
    let u = (2.0 * k / n as f64 - 1.0).clamp(-1.0, 1.0);
    // Recurrence; exact enough for j <= n <= 64 and |u| <= 1.
    let mut t0 = 1.0;
    let mut t1 = u;
    match j {
        0 => t0,
        1 => t1,
        _ => {
            for _ in 2..=j {
                let t2 = 2.0 * u * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
            t1
        }
    }
}

/// Outcome of one minimax solve at a fixed degree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinimaxResult {
    pub degree: usize,
    pub e_star: f64,
    pub witness: UnivariatePoly,
    /// Equioscillation points (weight, sign of the error), when at least
    /// degree + 2 alternations are present.
    pub certificate: Vec<(usize, i8)>,
}

/// Exact minimum over degree <= d univariate polynomials of
/// max_k |q(k) - spectrum[k]|, solved at the n+1 weight points.
pub fn minimax_error(f: &SymmetricFunction, d: usize) -> Result<MinimaxResult> {
    let n = f.n();
    if d > n {
        return Err(Error::Parameter(format!("degree {d} exceeds n = {n}")));
    }
    // Variables: c_j split into u_j - v_j (j = 0..d), then e.
    // Constraints per weight k: +-(sum_j c_j Tj(k) - s_k) <= e.
    let nv = 2 * (d + 1) + 1;
    let e_idx = nv - 1;
    let mut a = Vec::with_capacity(2 * (n + 1));
    let mut b = Vec::with_capacity(2 * (n + 1));
    for k in 0..=n {
        let s = f.value_at_weight(k) as f64;
        let t_row: Vec<f64> = (0..=d).map(|j| chebyshev_at(j, k as f64, n)).collect();
        for sign in [1.0, -1.0] {
            let mut row = vec![0.0; nv];
            for (j, &tj) in t_row.iter().enumerate() {
                row[2 * j] = sign * tj;
                row[2 * j + 1] = -sign * tj;
            }
            row[e_idx] = -1.0;
            a.push(row);
            b.push(sign * s);
        }
    }
    let mut costs = vec![0.0; nv];
    costs[e_idx] = 1.0;
    let sol = simplex::solve(&costs, &a, &b)
        .map_err(|e| Error::Numerical(format!("minimax LP (n={n}, d={d}): {e}")))?;
    let coeffs: Vec<f64> = (0..=d).map(|j| sol.x[2 * j] - sol.x[2 * j + 1]).collect();
    let witness = UnivariatePoly::new(n, coeffs);
    let e_star = sol.objective.max(0.0);
    let certificate = equioscillation_points(f, &witness, e_star, d);
    Ok(MinimaxResult {
        degree: d,
        e_star,
        witness,
        certificate,
    })
}

/// Alternating near-extremal error points of the witness; returned only
/// when a full d+2 alternation is present.
fn equioscillation_points(
    f: &SymmetricFunction,
    witness: &UnivariatePoly,
    e_star: f64,
    d: usize,
) -> Vec<(usize, i8)> {
    let n = f.n();
    let tol = 1e-7 * e_star.max(1e-3);
    let mut points = Vec::new();
    for k in 0..=n {
        let err = witness.eval(k as f64) - f.value_at_weight(k) as f64;
        if err.abs() >= e_star - tol && e_star > tol {
            let sign = if err >= 0.0 { 1i8 } else { -1 };
            match points.last() {
                Some(&(_, s)) if s == sign => {}
                _ => points.push((k, sign)),
            }
        }
    }
    if points.len() >= d + 2 {
        points
    } else {
        Vec::new()
    }
}

/// Smallest degree d with minimax error at most eps (plus feasibility
/// slack), by binary search over the nonincreasing error curve.
pub fn approx_degree(f: &SymmetricFunction, eps: f64) -> Result<usize> {
    if !(0.0..0.5).contains(&eps) {
        return Err(Error::Parameter(format!("eps {eps} out of range [0, 1/2)")));
    }
    let n = f.n();
    let feasible = |d: usize| -> Result<bool> {
        Ok(minimax_error(f, d)?.e_star <= eps + EPS_FEASIBILITY_TOL)
    };
    let mut lo = 0; // smallest untested candidate
    let mut hi = n; // known feasible (interpolation is exact at d = n)
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(hi)
}

/// Outcome of the OR-embedding lower-bound consistency check.
#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundReport {
    /// Size of the embedded OR; `None` on the Paturi-regime path (t >= n/4).
    pub m: Option<usize>,
    pub passed: bool,
    pub deg_eps: usize,
    pub deg_13: usize,
}

/// Check the lower-bound mechanics: restriction monotonicity against the
/// embedded OR (when t < n/4), and deg_eps >= deg_{1/3} in every regime.
pub fn lower_bound_check(f: &SymmetricFunction, eps: f64) -> Result<LowerBoundReport> {
    let t = jump_parameter(f)?;
    let n = f.n();
    let deg_eps = approx_degree(f, eps)?;
    let deg_13 = approx_degree(f, 1.0 / 3.0)?;
    if 4 * t >= n {
        return Ok(LowerBoundReport {
            m: None,
            passed: deg_eps >= deg_13,
            deg_eps,
            deg_13,
        });
    }
    let emb = embed_or(f)?;
    let or_m = make_named(Family::Or, emb.m)?;
    let deg_or = approx_degree(&or_m, eps)?;
    Ok(LowerBoundReport {
        m: Some(emb.m),
        passed: deg_eps >= deg_or && deg_eps >= deg_13,
        deg_eps,
        deg_13,
    })
}

/// Outcome of the constructive upper-bound check.
#[derive(Debug, Clone, Serialize)]
pub struct UpperBoundReport {
    pub deg_lp: usize,
    /// 2 x (max oracle applications over all branches and inputs).
    pub two_t: u64,
    /// Whether the acceptance surface eps-approximates f on every input.
    pub poly_ok: bool,
    /// Whether deg_lp <= two_t.
    pub degree_ok: bool,
    pub max_queries: QueryCounts,
}

/// Run the 4-step algorithm on every input, check that its acceptance
/// surface eps-approximates f, and compare the LP ground truth against the
/// 2T degree bound the algorithm implies.
pub fn upper_bound_check(f: &SymmetricFunction, eps: f64, budget: usize) -> Result<UpperBoundReport> {
    let n = f.n();
    let surface = acceptance_surface(n, budget, &EnumConfig::pooled(), |mask, ctx| {
        let mut oracle = crate::grover::PhaseOracle::from_mask(n, mask);
        let out = compute_symmetric(f, &mut oracle, eps, ctx)?;
        Ok((out, oracle.query_counts()))
    })?;
    let mut poly_ok = true;
    for (mask, &p) in surface.table.values.iter().enumerate() {
        let fx = f.value_at_weight((mask as u64).count_ones() as usize) as f64;
        if (p - fx).abs() > eps + 1e-9 {
            poly_ok = false;
        }
    }
    let two_t = 2 * surface.max_queries.total();
    let deg_lp = approx_degree(f, eps)?;
    Ok(UpperBoundReport {
        deg_lp,
        two_t,
        poly_ok,
        degree_ok: (deg_lp as u64) <= two_t,
        max_queries: surface.max_queries,
    })
}

/// One grid point of a scaling study.
#[derive(Debug, Clone, Serialize)]
pub struct BandRow {
    pub family: String,
    pub n: usize,
    pub t: usize,
    pub eps: f64,
    pub deg_eps: usize,
    pub deg_13: usize,
    /// deg_eps / (deg_13 + sqrt(n ln(1/eps))).
    pub ratio: f64,
    /// deg_13 / sqrt(t n), the Paturi-shape ratio.
    pub paturi_ratio: f64,
    pub e_star: f64,
}

/// Scaling-band report over a family grid.
#[derive(Debug, Clone, Serialize)]
pub struct BandReport {
    pub rows: Vec<BandRow>,
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// deg_eps nondecreasing in n at fixed eps.
    pub monotone_in_n: bool,
    /// deg_eps nonincreasing in eps at fixed n.
    pub monotone_in_inv_eps: bool,
}

/// Compute the ratio deg_eps / (deg_13 + sqrt(n ln(1/eps))) over the grid.
/// Natural logarithms throughout. Refuses eps outside [2^-n, 1/3].
pub fn theorem_band(family: Family, n_grid: &[usize], eps_grid: &[f64]) -> Result<BandReport> {
    let mut rows = Vec::new();
    for &n in n_grid {
        for &eps in eps_grid {
            if eps < 2f64.powi(-(n as i32)) || eps > 1.0 / 3.0 + 1e-12 {
                return Err(Error::Parameter(format!(
                    "eps = {eps} outside [2^-{n}, 1/3]"
                )));
            }
            let f = make_named(family, n)?;
            let t = jump_parameter(&f)?;
            let deg_13 = approx_degree(&f, 1.0 / 3.0)?;
            let deg_eps = approx_degree(&f, eps)?;
            let e_star = minimax_error(&f, deg_eps)?.e_star;
            let denom = deg_13 as f64 + (n as f64 * (1.0 / eps).ln()).sqrt();
            rows.push(BandRow {
                family: family.to_string(),
                n,
                t,
                eps,
                deg_eps,
                deg_13,
                ratio: deg_eps as f64 / denom,
                paturi_ratio: deg_13 as f64 / ((t * n) as f64).sqrt(),
                e_star,
            });
        }
    }
    let ratio_min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let ratio_max = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let mut monotone_in_n = true;
    let mut monotone_in_inv_eps = true;
    for a in &rows {
        for b in &rows {
            if a.eps == b.eps && a.n < b.n && a.deg_eps > b.deg_eps {
                monotone_in_n = false;
            }
            if a.n == b.n && a.eps > b.eps && a.deg_eps > b.deg_eps {
                monotone_in_inv_eps = false;
            }
        }
    }
    Ok(BandReport {
        rows,
        ratio_min,
        ratio_max,
        monotone_in_n,
        monotone_in_inv_eps,
    })
}
