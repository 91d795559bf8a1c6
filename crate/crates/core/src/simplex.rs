//! Dense tableau simplex for small problems of the form
//! `maximize c·x subject to A x <= b, x >= 0` with `b >= 0`.
//!
//! The origin is always feasible, so a single phase suffices. Bland's rule
//! picks entering and leaving variables, which rules out cycling on the
//! degenerate problems the root-basis witness search produces.

use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Unbounded,
}

/// Solves the LP. Panics if shapes disagree or some `b_i < 0`.
pub fn maximize<T: Scalar>(c: &[T], a: &Matrix<T>, b: &[T], tol: T) -> LpOutcome<T> {
    let m = a.rows();
    let n = a.cols();
    assert_eq!(c.len(), n);
    assert_eq!(b.len(), m);
    assert!(b.iter().all(|&bi| bi >= T::zero()), "origin must be feasible");

    // Columns: n structural, m slack, then rhs.
    let width = n + m + 1;
    let mut tab = Matrix::zeros(m + 1, width);
    for i in 0..m {
        for j in 0..n {
            tab[(i, j)] = a[(i, j)];
        }
        tab[(i, n + i)] = T::one();
        tab[(i, width - 1)] = b[i];
    }
    // Objective row holds reduced costs -c.
    for j in 0..n {
        tab[(m, j)] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Bland: lowest-index column with negative reduced cost.
        let Some(enter) = (0..n + m).find(|&j| tab[(m, j)] < -tol) else {
            break;
        };
        // Ratio test; ties broken by lowest basic variable index.
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            let coef = tab[(i, enter)];
            if coef > tol {
                let ratio = tab[(i, width - 1)] / coef;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((r, best)) => {
                        if ratio < best - tol || ((ratio - best).abs() <= tol && basis[i] < basis[r]) {
                            Some((i, ratio))
                        } else {
                            Some((r, best))
                        }
                    }
                };
            }
        }
        let Some((row, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        pivot(&mut tab, row, enter);
        basis[row] = enter;
    }

    let mut x = vec![T::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab[(i, width - 1)];
        }
    }
    LpOutcome::Optimal { value: tab[(m, width - 1)], x }
}

fn pivot<T: Scalar>(tab: &mut Matrix<T>, row: usize, col: usize) {
    let width = tab.cols();
    let p = tab[(row, col)];
    for j in 0..width {
        tab[(row, j)] = tab[(row, j)] / p;
    }
    for i in 0..tab.rows() {
        if i == row {
            continue;
        }
        let f = tab[(i, col)];
        if f != T::zero() {
            for j in 0..width {
                let v = tab[(row, j)];
                tab[(i, j)] = tab[(i, j)] - f * v;
            }
        }
    }
}
