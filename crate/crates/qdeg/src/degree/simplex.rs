//! Small dense two-phase primal simplex with Bland's anti-cycling rule, for
//! problems of the form: minimize c'x subject to Ax <= b, x >= 0 (b may be
//! negative). Sized for the minimax LPs here: ~130 rows, ~400 columns.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const MAX_ITERS: usize = 50_000;

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

struct Tableau {
    /// m rows by (ncols + 1); last column is the right-hand side.
    rows: Vec<Vec<f64>>,
    /// The initial rows, kept for periodic refactorization.
    orig: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncols: usize,
}

/// Pivots between full refactorizations; bounds drift accumulation.
const REFACTOR_EVERY: usize = 48;

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.ncols]
    }

    /// Rebuild `rows` as B^{-1} times the original system, discarding the
    /// rounding error accumulated by successive pivots. Gauss-Jordan with
    /// partial pivoting on the basis columns.
    fn refactor(&mut self) {
        let m = self.orig.len();
        let width = self.ncols + 1;
        let mut aug: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut r = Vec::with_capacity(m + width);
                for &j in &self.basis {
                    r.push(self.orig[i][j]);
                }
                r.extend_from_slice(&self.orig[i]);
                r
            })
            .collect();
        for col in 0..m {
            let piv = (col..m)
                .max_by(|&a, &b| aug[a][col].abs().total_cmp(&aug[b][col].abs()))
                .unwrap();
            aug.swap(col, piv);
            let p = aug[col][col];
            for v in aug[col].iter_mut() {
                *v /= p;
            }
            let prow = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r == col {
                    continue;
                }
                let f = row[col];
                if f != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&prow) {
                        *v -= f * pv;
                    }
                }
            }
        }
        // After reduction, row r carries basis variable basis[r].
        for (row, a) in self.rows.iter_mut().zip(&aug) {
            *row = a[m..].to_vec();
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col];
            if factor == 0.0 {
                continue;
            }
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
        }
        self.basis[row] = col;
    }

    /// Run primal simplex on the given costs until optimal. Dantzig's rule
    /// (most negative reduced cost) by default; after a long degenerate
    /// stall, Bland's rule (smallest index) until the objective moves again.
    /// `allowed` masks columns that may enter the basis. `stop_below` is a
    /// known lower bound on the objective: once reached there is nothing
    /// left to gain, which keeps phase 1 from churning on noise-level
    /// reduced costs at its zero optimum.
    fn optimize(&mut self, costs: &[f64], allowed: &[bool], stop_below: Option<f64>) -> Result<()> {
        let m = self.rows.len();
        let objective = |t: &Tableau| -> f64 {
            (0..m).map(|i| costs[t.basis[i]] * t.rhs(i)).sum()
        };
        let mut stall = 0usize;
        let mut last_obj = objective(self);
        if stop_below.is_some_and(|lb| last_obj <= lb) {
            return Ok(());
        }
        for iter in 0..MAX_ITERS {
            if iter > 0 && iter % REFACTOR_EVERY == 0 {
                self.refactor();
            }
            if iter % 500 == 0 && std::env::var_os("QDEG_LP_DEBUG").is_some() {
                eprintln!("iter {iter}: obj {:.6e}, stall {stall}", objective(self));
            }
            // Reduced costs from scratch each iteration: r_j = c_j - y'A_j
            // with y read off the basic costs.
            let bland = stall > 4 * m;
            let mut entering = None;
            let mut best = -PIVOT_TOL;
            'cols: for j in 0..self.ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut r = costs[j];
                for i in 0..m {
                    r -= costs[self.basis[i]] * self.rows[i][j];
                }
                if r < -PIVOT_TOL {
                    if bland {
                        entering = Some(j);
                        break 'cols; // smallest eligible index
                    }
                    if r < best {
                        best = r;
                        entering = Some(j);
                    }
                }
            }
            let Some(col) = entering else {
                return Ok(());
            };
            // Ratio test; Bland tie-break on the smallest basis variable.
            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = self.rows[i][col];
                if a > PIVOT_TOL {
                    // rhs can dip a hair below zero from rounding; treat it
                    // as zero so degenerate pivots stay degenerate.
                    let ratio = (self.rhs(i) / a).max(0.0);
                    let better = match leaving {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - PIVOT_TOL
                                || (ratio < lr + PIVOT_TOL && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leaving else {
                return Err(Error::Numerical("LP is unbounded".into()));
            };
            self.pivot(row, col);
            let obj = objective(self);
            if stop_below.is_some_and(|lb| obj <= lb) {
                return Ok(());
            }
            if obj < last_obj - 1e-12 {
                stall = 0;
            } else {
                stall += 1;
            }
            last_obj = obj;
        }
        Err(Error::Numerical(format!(
            "simplex failed to converge within {MAX_ITERS} iterations"
        )))
    }
}

/// Minimize `c . x` subject to `a x <= b`, `x >= 0`.
pub fn solve(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let m = a.len();
    let nv = c.len();
    assert_eq!(b.len(), m);
    let n_art = b.iter().filter(|&&bi| bi < 0.0).count();
    let ncols = nv + m + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = nv + m;
    for i in 0..m {
        let mut row = vec![0.0; ncols + 1];
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..nv {
            row[j] = flip * a[i][j];
        }
        row[nv + i] = flip; // slack
        row[ncols] = flip * b[i];
        if b[i] < 0.0 {
            row[art] = 1.0;
            basis.push(art);
            art += 1;
        } else {
            basis.push(nv + i);
        }
        rows.push(row);
    }
    let orig = rows.clone();
    let mut t = Tableau {
        rows,
        orig,
        basis,
        ncols,
    };

    if n_art > 0 {
        let mut phase1 = vec![0.0; ncols];
        for cost in phase1.iter_mut().skip(nv + m) {
            *cost = 1.0;
        }
        let allowed = vec![true; ncols];
        t.optimize(&phase1, &allowed, Some(1e-10))?;
        t.refactor();
        let infeas: f64 = t
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &j)| j >= nv + m)
            .map(|(i, _)| t.rhs(i))
            .sum();
        if infeas > 1e-7 {
            return Err(Error::Numerical(format!(
                "phase 1 ended infeasible (residual {infeas:.3e})"
            )));
        }
        // Drive any degenerate artificial out of the basis.
        for i in 0..m {
            if t.basis[i] >= nv + m {
                if let Some(j) = (0..nv + m).find(|&j| t.rows[i][j].abs() > PIVOT_TOL) {
                    t.pivot(i, j);
                }
            }
        }
    }

    let mut phase2 = vec![0.0; ncols];
    phase2[..nv].copy_from_slice(c);
    let mut allowed = vec![true; ncols];
    for flag in allowed.iter_mut().skip(nv + m) {
        *flag = false;
    }
    t.optimize(&phase2, &allowed, None)?;
    t.refactor();

    let mut x = vec![0.0; nv];
    for (i, &j) in t.basis.iter().enumerate() {
        if j < nv {
            x[j] = t.rhs(i);
        }
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(LpSolution { x, objective })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_lp() {
        // min -x - y st x + y <= 4, x <= 2 → x=2, y=2, obj -4.
        let sol = solve(
            &[-1.0, -1.0],
            &[vec![1.0, 1.0], vec![1.0, 0.0]],
            &[4.0, 2.0],
        )
        .unwrap();
        assert!((sol.objective + 4.0).abs() < 1e-9);
        assert!((sol.x[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn negative_rhs_needs_phase1() {
        // min x st -x <= -3 → x = 3.
        let sol = solve(&[1.0], &[vec![-1.0]], &[-3.0]).unwrap();
        assert!((sol.objective - 3.0).abs() < 1e-9);
    }

    #[test]
    fn unbounded_is_reported() {
        // min -x, no binding constraint.
        let r = solve(&[-1.0], &[vec![-1.0]], &[0.0]);
        assert!(matches!(r, Err(Error::Numerical(_))));
    }

    #[test]
    fn degenerate_cycling_guard() {
        // Classic degenerate instance; Bland's rule must terminate.
        let sol = solve(
            &[-0.75, 150.0, -0.02, 6.0],
            &[
                vec![0.25, -60.0, -0.04, 9.0],
                vec![0.5, -90.0, -0.02, 3.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            &[0.0, 0.0, 1.0],
        )
        .unwrap();
        assert!((sol.objective + 0.05).abs() < 1e-9);
    }
}
