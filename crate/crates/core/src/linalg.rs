//! Fraction-free (Bareiss) elimination over exact integers.

use crate::scalar::ExactInteger;

/// Determinant of a square matrix given row by row.
///
/// Every intermediate division in the Bareiss recurrence is exact, so the
/// computation never leaves the integers. Panics if the matrix is not
/// square.
pub fn bareiss_determinant<T: ExactInteger>(rows: &[Vec<T>]) -> T {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return T::one();
    }
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let mut sign_flipped = false;
    let mut prev_pivot = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flipped = !sign_flipped;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                debug_assert!(num.is_multiple_of(&prev_pivot));
                m[i][j] = num / prev_pivot.clone();
            }
            m[i][k] = T::zero();
        }
        prev_pivot = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flipped {
        -det
    } else {
        det
    }
}
