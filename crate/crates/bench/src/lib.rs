//! Deterministic fixtures for the benchmarks.

use hermpf::{Matrix, Rational};

/// 2m×2m alternating matrix with small pseudo-random integer entries.
pub fn alternating(m: usize) -> Matrix<Rational> {
    let n = 2 * m;
    let mut a = Matrix::<Rational>::zeros(n, n);
    let mut x: i64 = 7;
    for i in 0..n {
        for j in i + 1..n {
            x = (x * 48271) % 2147483647;
            let v = Rational::from_int(x % 11 - 5);
            a.set(j, i, -v.clone());
            a.set(i, j, v);
        }
    }
    a
}
