//! Fixtures and strategies shared by the unit tests.

use num_complex::Complex;
use proptest::prelude::*;

use crate::matcore::ComplexMatrix;

pub fn fix1() -> (ComplexMatrix, ComplexMatrix) {
    (
        ComplexMatrix::from_real_rows(&[[1., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., 0., 1.]]),
        ComplexMatrix::from_real_rows(&[[0., 0., 1.], [0., 1., 1.], [1., 1., 1.], [0., 0., 0.]]),
    )
}

pub fn fix2() -> (ComplexMatrix, ComplexMatrix) {
    (
        ComplexMatrix::from_real_rows(&[[1., 1., 0.], [0., 1., 0.], [0., 0., 1.], [0., 0., 0.]]),
        ComplexMatrix::from_real_rows(&[[1., 0., 1., 0.], [0., 0., 1., 0.], [0., 0., 0., 1.]]),
    )
}

pub fn fix3_b() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[2., 1., 0., 0.], [1., 1., 0., 0.], [0., 0., 0., 0.], [0., 0., 0., 0.]])
}

pub fn jordan(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| Complex::new(if j == i + 1 { 1.0 } else { 0.0 }, 0.0))
}

fn small_int() -> impl Strategy<Value = i32> {
    prop_oneof![3 => Just(0), 2 => -1i32..=1, 1 => -3i32..=3]
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(small_int(), rows * cols)
        .prop_map(move |v| ComplexMatrix::from_fn(rows, cols, |i, j| Complex::new(v[i * cols + j] as f64, 0.0)))
}

/// `L M L^{-1}` with `L` unit lower triangular and `M = [[T, S], [0, N]]`,
/// `N` strictly upper triangular. Integer entries throughout, so the
/// product is exact.
pub fn arb_structured_square(max: usize) -> impl Strategy<Value = ComplexMatrix> {
    structured(max, true)
}

/// As [`arb_structured_square`] with `T` nonsingular upper triangular and
/// `N = 0`, so the index is at most one.
pub fn arb_index_one(max: usize) -> impl Strategy<Value = ComplexMatrix> {
    structured(max, false)
}

fn structured(max: usize, nilpotent: bool) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max)
        .prop_flat_map(|n| (Just(n), 0..=n))
        .prop_flat_map(|(n, t)| (Just((n, t)), int_matrix(n, n), prop::collection::vec(-1i32..=1, n * n)))
        .prop_map(move |((n, t), m, l)| {
            let zero = Complex::new(0.0, 0.0);
            let m = ComplexMatrix::from_fn(n, n, |i, j| match (nilpotent, i < t) {
                (true, _) if i >= t && j <= i => zero,
                (false, false) => zero,
                // T upper triangular with a nonzero diagonal
                (false, true) if j < i => zero,
                (false, true) if j == i && m[(i, i)] == zero => Complex::new(1.0, 0.0),
                _ => m[(i, j)],
            });
            let lower = ComplexMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => Complex::new(1.0, 0.0),
                std::cmp::Ordering::Greater => Complex::new(l[i * n + j] as f64, 0.0),
                std::cmp::Ordering::Less => zero,
            });
            let inv = unit_lower_inverse(&lower);
            &(&lower * &m) * &inv
        })
}

fn unit_lower_inverse(l: &ComplexMatrix) -> ComplexMatrix {
    let n = l.rows();
    let mut inv = ComplexMatrix::identity(n);
    for j in 0..n {
        for i in j + 1..n {
            let mut acc = Complex::new(0.0, 0.0);
            for k in j..i {
                acc += l[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = -acc;
        }
    }
    inv
}

/// `(A, W)` with `W ≠ 0`; about half of the weights are rank-deficient
/// products `XY` with a thin inner dimension.
pub fn arb_pair(max: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (1..=max, 1..=max, any::<bool>())
        .prop_flat_map(|(p, n, deficient)| {
            let inner = if deficient { 1.max(p.min(n) / 2) } else { p.max(n) };
            (int_matrix(p, n), int_matrix(n, inner), int_matrix(inner, p))
        })
        .prop_map(|(a, x, y)| {
            let mut w = &x * &y;
            if w.max_norm() == 0.0 {
                w[(0, 0)] = Complex::new(1.0, 0.0);
            }
            (a, w)
        })
}

/// `R(X) = R(Y)`: equal ranks and nearly parallel dominant bases. Plain
/// inclusion into `R(X)` is ill-conditioned in f64 when `X` has small
/// singular values; the dominant subspace is not.
pub fn same_range(x: &ComplexMatrix, y: &ComplexMatrix) -> bool {
    use crate::matcore::{range_basis_with_rank, rank, Tolerance};
    let tol = Tolerance::default();
    let r = rank(y, &tol);
    if rank(x, &tol) != r {
        return false;
    }
    let (bx, by) = (range_basis_with_rank(x, r), range_basis_with_rank(y, r));
    by.inclusion_residual(bx.matrix()) < 1e-6 && bx.inclusion_residual(by.matrix()) < 1e-6
}
