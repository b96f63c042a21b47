//! Polynomial extraction: acceptance probability of a simulated algorithm
//! as a multilinear polynomial (via the Möbius transform over the Boolean
//! cube), degree computation, and symmetrization to a univariate polynomial
//! on [0, n] stored in the Chebyshev basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{run_enumerated, EnumConfig, QueryCounts, RunCtx};

/// Default cap on n for full-cube enumeration. Overridable per call and via
/// the CLI's `QDEG_BUDGET`.
pub const DEFAULT_ENUM_BUDGET: usize = 10;

/// A real table over {0,1}^n indexed by input mask (bit i of the mask is
/// input variable i+1).
#[derive(Debug, Clone)]
pub struct CubeTable {
    pub n: usize,
    pub values: Vec<f64>,
}

impl CubeTable {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != 1 << n {
            return Err(Error::Parameter(format!(
                "table over {{0,1}}^{n} needs {} entries, got {}",
                1usize << n,
                values.len()
            )));
        }
        Ok(Self { n, values })
    }
}

/// Exact acceptance probabilities of a randomized algorithm on every input,
/// plus the worst-branch query count over the whole cube.
#[derive(Debug, Clone)]
pub struct Surface {
    pub table: CubeTable,
    pub max_queries: QueryCounts,
}

/// Branch-enumerate `algo` on every input of the cube; entry `mask` is the
/// exact probability that the algorithm outputs 1 on that input.
pub fn acceptance_surface(
    n: usize,
    budget: usize,
    cfg: &EnumConfig,
    mut algo: impl FnMut(u64, &mut RunCtx) -> Result<(u8, QueryCounts)>,
) -> Result<Surface> {
    if n > budget {
        return Err(Error::Resource {
            reason: format!("n = {n} exceeds enumeration budget {budget}"),
            partial_mass: 0.0,
        });
    }
    let mut values = Vec::with_capacity(1 << n);
    let mut max_queries = QueryCounts::default();
    for mask in 0u64..(1 << n) {
        let tree = run_enumerated(cfg, |ctx| algo(mask, ctx))?;
        values.push(tree.mass_where(|&out| out == 1));
        for leaf in &tree.leaves {
            if leaf.queries.total() > max_queries.total() {
                max_queries = leaf.queries;
            }
        }
    }
    Ok(Surface {
        table: CubeTable::new(n, values)?,
        max_queries,
    })
}

/// A multilinear polynomial in the monomial-by-subset basis: coefficient
/// `coeffs[mask]` multiplies the monomial over the variables in `mask`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultilinearPoly {
    pub n: usize,
    pub coeffs: Vec<f64>,
}

impl MultilinearPoly {
    /// Evaluate at a Boolean point given as a mask.
    pub fn eval_mask(&self, x: u64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(s, _)| (*s as u64) & !x == 0)
            .map(|(_, &a)| a)
            .sum()
    }

    /// Evaluate at a real point.
    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(s, &a)| {
                a * (0..self.n)
                    .filter(|i| s >> i & 1 == 1)
                    .map(|i| x[i])
                    .product::<f64>()
            })
            .sum()
    }
}

/// Möbius transform: the unique multilinear coefficients reproducing the
/// table, a_S = sum over T subset of S of (-1)^{|S \ T|} values(T).
pub fn mobius_transform(table: &CubeTable) -> MultilinearPoly {
    let n = table.n;
    let mut a = table.values.clone();
    for bit in 0..n {
        let step = 1usize << bit;
        for mask in 0..a.len() {
            if mask & step != 0 {
                a[mask] -= a[mask ^ step];
            }
        }
    }
    MultilinearPoly { n, coeffs: a }
}

/// Largest |S| with |a_S| > tol (exact degree when tol = 0).
pub fn poly_degree(p: &MultilinearPoly, tol: f64) -> usize {
    p.coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| a.abs() > tol)
        .map(|(s, _)| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// A univariate polynomial on [0, n] stored as Chebyshev coefficients:
/// q(x) = sum_j c_j T_j(2x/n - 1).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnivariatePoly {
    pub n: usize,
    pub coeffs: Vec<f64>,
}

impl UnivariatePoly {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty() && coeffs.len() <= n + 1);
        Self { n, coeffs }
    }

    /// Clenshaw evaluation of sum_j c_j T_j(u) at u = 2x/n - 1.
    pub fn eval(&self, x: f64) -> f64 {
        let u = 2.0 * x / self.n as f64 - 1.0;
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * u * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + u * b1 - b2
    }

    /// Interpolate through the n+1 integer nodes 0..n: Newton forward
    /// differences first, then conversion to the Chebyshev basis by exact
    /// re-expansion at Chebyshev nodes.
    pub fn interpolate(values: &[f64]) -> Self {
        let n = values.len() - 1;
        // Newton forward-difference coefficients at nodes 0, 1, ..., n.
        let mut diffs = values.to_vec();
        let mut newton = Vec::with_capacity(n + 1);
        for j in 0..=n {
            newton.push(diffs[0]);
            for i in 0..n - j {
                diffs[i] = diffs[i + 1] - diffs[i];
            }
        }
        // Horner over the factorial basis:
        // q(x) = sum_j newton[j]/j! * x(x-1)...(x-j+1).
        let eval_newton = |x: f64| -> f64 {
            let mut acc = newton[n] / factorial(n);
            for j in (0..n).rev() {
                acc = acc * (x - j as f64) + newton[j] / factorial(j);
            }
            acc
        };
        // Chebyshev coefficients from values at the Chebyshev nodes of the
        // first kind mapped to [0, n]; exact for degree <= n.
        let m = n + 1;
        let node_vals: Vec<f64> = (0..m)
            .map(|i| {
                let u = ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * m) as f64).cos();
                eval_newton((u + 1.0) * n as f64 / 2.0)
            })
            .collect();
        let coeffs: Vec<f64> = (0..m)
            .map(|j| {
                let scale = if j == 0 { 1.0 } else { 2.0 } / m as f64;
                scale
                    * (0..m)
                        .map(|i| {
                            let angle = (2 * i + 1) as f64 * j as f64 * std::f64::consts::PI
                                / (2 * m) as f64;
                            node_vals[i] * angle.cos()
                        })
                        .sum::<f64>()
            })
            .collect();
        Self { n, coeffs }
    }

    /// Degree read off the trailing finite differences of the values at the
    /// integer nodes: the largest d whose d-th forward difference exceeds
    /// the tolerance.
    pub fn degree(&self, tol: f64) -> usize {
        let values: Vec<f64> = (0..=self.n).map(|k| self.eval(k as f64)).collect();
        degree_by_differences(&values, tol)
    }
}

fn factorial(j: usize) -> f64 {
    (1..=j).map(|i| i as f64).product()
}

/// Degree of the interpolant through `values` at nodes 0..n, by forward
/// finite differences with tolerance.
pub fn degree_by_differences(values: &[f64], tol: f64) -> usize {
    let mut diffs = values.to_vec();
    let n = values.len() - 1;
    let mut degree = 0;
    for d in 1..=n {
        for i in 0..=(n - d) {
            diffs[i] = diffs[i + 1] - diffs[i];
        }
        if diffs[..=(n - d)].iter().any(|v| v.abs() > tol) {
            degree = d;
        }
    }
    degree
}

/// Average the table over each Hamming-weight class and interpolate: the
/// symmetrization q with q(k) = mean of p over |x| = k.
pub fn symmetrize(table: &CubeTable) -> UnivariatePoly {
    let n = table.n;
    let mut sums = vec![0.0f64; n + 1];
    let mut counts = vec![0u64; n + 1];
    for (mask, &v) in table.values.iter().enumerate() {
        let w = (mask as u64).count_ones() as usize;
        sums[w] += v;
        counts[w] += 1;
    }
    let averages: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect();
    UnivariatePoly::interpolate(&averages)
}

/// Exact degree of a symmetric function's spectrum interpolant, by integer
/// finite differences (exact arithmetic, n <= 62).
pub fn exact_degree(f: &crate::symfun::SymmetricFunction) -> usize {
    let mut diffs: Vec<i128> = f.spectrum().iter().map(|&b| i128::from(b)).collect();
    let n = f.n();
    let mut degree = 0;
    for d in 1..=n {
        for i in 0..=(n - d) {
            diffs[i] = diffs[i + 1] - diffs[i];
        }
        if diffs[..=(n - d)].iter().any(|&v| v != 0) {
            degree = d;
        }
    }
    degree
}

/// Serialized polynomial dump: basis tag, coefficients, and the tolerance
/// metadata used when reading degrees off the coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyDump {
    pub basis: String,
    pub n: usize,
    pub coefficients: Vec<f64>,
    pub coefficient_tolerance: f64,
    pub degree: usize,
}

impl PolyDump {
    pub fn from_multilinear(p: &MultilinearPoly, tol: f64) -> Self {
        Self {
            basis: "monomial-by-subset".into(),
            n: p.n,
            coefficients: p.coeffs.clone(),
            coefficient_tolerance: tol,
            degree: poly_degree(p, tol),
        }
    }

    pub fn from_univariate(q: &UnivariatePoly, tol: f64) -> Self {
        Self {
            basis: "chebyshev[0,n]".into(),
            n: q.n,
            coefficients: q.coeffs.clone(),
            coefficient_tolerance: tol,
            degree: q.degree(tol),
        }
    }
}
