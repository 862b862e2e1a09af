//! Benchmark fixtures for the chargroup engine.

use chargroup::IntegerMatrix;

/// A dense `n x n` integer matrix with small, non-trivially structured entries.
pub fn dense_matrix(n: usize) -> IntegerMatrix {
    let rows: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| ((i * 7 + j * 13 + i * j) % 11) as i64 - 5).collect()).collect();
    IntegerMatrix::from_i64(&rows)
}
