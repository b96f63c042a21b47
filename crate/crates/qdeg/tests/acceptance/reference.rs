//! Independent brute-force minimax solver used to cross-check the LP.
//!
//! Over a finite point set, the best degree-d approximation error equals the
//! largest levelled error over all (d+2)-point references (de la Vallee
//! Poussin / Chebyshev alternation for Haar systems). Each reference yields
//! a small linear system: interpolate with alternating offsets +-E and read
//! off |E|. Exponential in n, which is fine at n <= 6.

/// Solve a dense linear system by Gaussian elimination with partial
/// pivoting. Returns `None` when the system is (near-)singular.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let m = b.len();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let pivot_row = a[col].clone();
        let pivot_b = b[col];
        for (row, br) in a.iter_mut().zip(b.iter_mut()).skip(col + 1) {
            let f = row[col] / pivot_row[col];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *v -= f * pv;
                }
                *br -= f * pivot_b;
            }
        }
    }
    let mut x = vec![0.0; m];
    for r in (0..m).rev() {
        let mut v = b[r];
        for j in r + 1..m {
            v -= a[r][j] * x[j];
        }
        x[r] = v / a[r][r];
    }
    Some(x)
}

/// Levelled error of one reference: polynomial of degree `d` through the
/// points with alternating offsets +-E; returns |E|.
fn levelled_error(spectrum: &[u8], points: &[usize], d: usize) -> Option<f64> {
    let m = points.len();
    debug_assert_eq!(m, d + 2);
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for (i, &k) in points.iter().enumerate() {
        let mut row = Vec::with_capacity(m);
        let mut pow = 1.0;
        for _ in 0..=d {
            row.push(pow);
            pow *= k as f64;
        }
        row.push(if i % 2 == 0 { 1.0 } else { -1.0 });
        a.push(row);
        b.push(spectrum[k] as f64);
    }
    solve_dense(a, b).map(|x| x[m - 1].abs())
}

/// Best degree-d minimax error over the weights 0..=n, by exhaustive
/// reference enumeration.
pub fn reference_minimax(spectrum: &[u8], d: usize) -> f64 {
    let n = spectrum.len() - 1;
    if d + 2 > n + 1 {
        return 0.0; // interpolation is exact
    }
    let mut idx: Vec<usize> = (0..d + 2).collect();
    let mut best = 0.0f64;
    loop {
        if let Some(e) = levelled_error(spectrum, &idx, d) {
            best = best.max(e);
        }
        // Next (d+2)-combination of {0..=n} in lexicographic order.
        let m = idx.len();
        let mut i = m;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < n - (m - 1 - i) {
                idx[i] += 1;
                for j in i + 1..m {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
