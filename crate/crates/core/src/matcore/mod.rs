//! Matrix value type and the spectral primitives everything else is built
//! on: rank, Moore–Penrose inverse, index, orthogonal projectors and
//! subspace tests.
//!
//! Rank decisions use a relative singular-value cutoff
//! `σ > rank_rtol · σ_max · max(rows, cols)`. Ranks of matrix powers are
//! never read off an explicitly formed high power; [`PowerChain`] tracks an
//! orthonormal basis of `R(A^j)` one multiplication at a time, so every rank
//! decision is made on a matrix conditioned like `A` itself.

pub mod kernels;
pub mod matrix;
pub mod scalar;

use num_traits::Zero;

use crate::error::{shape_err, Result};
pub use kernels::Svd;
pub use matrix::{ComplexMatrix, Matrix};
pub use scalar::{DoubleDouble, Real};

/// Numerical thresholds shared by every module.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// Relative singular-value cutoff for rank decisions.
    pub rank_rtol: f64,
    /// Scale-relative threshold for matrix equality and residual checks.
    pub eq_atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rank_rtol: 1e-11, eq_atol: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(rank_rtol: f64, eq_atol: f64) -> Self {
        Tolerance { rank_rtol, eq_atol }
    }

    fn cutoff<R: Real>(&self, sigma_max: R, dims: (usize, usize)) -> R {
        sigma_max * R::from_f64(self.rank_rtol * dims.0.max(dims.1).max(1) as f64)
    }
}

/// Orthonormal basis of a subspace, stored as the columns of a matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis<R: Real = f64> {
    matrix: Matrix<R>,
}

impl<R: Real> SubspaceBasis<R> {
    /// Wraps columns that are already orthonormal.
    pub fn from_orthonormal(matrix: Matrix<R>) -> Self {
        SubspaceBasis { matrix }
    }

    pub fn full(n: usize) -> Self {
        SubspaceBasis { matrix: Matrix::identity(n) }
    }

    pub fn matrix(&self) -> &Matrix<R> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Orthogonal projector `B B*`.
    pub fn projector(&self) -> Matrix<R> {
        &self.matrix * &self.matrix.adjoint()
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> SubspaceBasis<R> {
        let n = self.ambient_dim();
        let d = self.dim();
        if d == 0 {
            return SubspaceBasis::full(n);
        }
        let (q, _) = kernels::householder_qr(&self.matrix);
        SubspaceBasis { matrix: q.columns(d, n - d) }
    }

    /// `‖(I − P)X‖_max / max(1, ‖X‖_max)`: how far the columns of `x`
    /// stick out of the subspace.
    pub fn inclusion_residual(&self, x: &Matrix<R>) -> f64 {
        let outside = x - &(&self.matrix * &(&self.matrix.adjoint() * x));
        outside.max_norm().to_f64() / x.max_norm().to_f64().max(1.0)
    }

    /// `R(X) ⊆ self`.
    pub fn contains(&self, x: &Matrix<R>, tol: &Tolerance) -> bool {
        self.inclusion_residual(x) <= tol.eq_atol
    }

    /// Equality of subspaces by mutual inclusion.
    pub fn same_subspace(&self, other: &SubspaceBasis<R>, tol: &Tolerance) -> bool {
        self.dim() == other.dim() && self.contains(&other.matrix, tol) && other.contains(&self.matrix, tol)
    }
}

/// Orthonormal bases of `R(A^0) ⊇ R(A^1) ⊇ … ⊇ R(A^k)`, `k = Ind(A)`.
#[derive(Clone, Debug)]
pub struct PowerChain<R: Real = f64> {
    bases: Vec<SubspaceBasis<R>>,
}

impl<R: Real> PowerChain<R> {
    pub fn new(a: &Matrix<R>, tol: &Tolerance) -> Self {
        assert!(a.is_square(), "power chain of a non-square matrix");
        let n = a.rows();
        let sigma_a = kernels::svd(a).largest();
        let cutoff = tol.cutoff(sigma_a, (n, n));
        let mut bases = vec![SubspaceBasis::full(n)];
        loop {
            let current = bases.last().expect("chain starts non-empty");
            let d = current.dim();
            if d == 0 {
                break;
            }
            let image = a * current.matrix();
            let f = kernels::svd(&image);
            let r = if sigma_a == R::zero() { 0 } else { f.count_above(cutoff) };
            if r == d {
                break;
            }
            bases.push(SubspaceBasis { matrix: f.u.columns(0, r) });
        }
        PowerChain { bases }
    }

    /// `Ind(A)`.
    pub fn index(&self) -> usize {
        self.bases.len() - 1
    }

    /// Orthonormal basis of `R(A^ℓ)`.
    pub fn range_of_power(&self, exp: usize) -> &SubspaceBasis<R> {
        &self.bases[exp.min(self.index())]
    }

    /// `rk(A^ℓ)`.
    pub fn rank_of_power(&self, exp: usize) -> usize {
        self.range_of_power(exp).dim()
    }

    /// `rk(A^k)` for `k = Ind(A)`: the size of the core part.
    pub fn core_rank(&self) -> usize {
        self.rank_of_power(self.index())
    }

    /// `P_{A^ℓ}` built from the tracked basis.
    pub fn projector(&self, exp: usize) -> Matrix<R> {
        self.range_of_power(exp).projector()
    }
}

pub fn svd<R: Real>(m: &Matrix<R>) -> Svd<R> {
    kernels::svd(m)
}

/// Numerical rank; 0 for the zero matrix.
pub fn rank<R: Real>(m: &Matrix<R>, tol: &Tolerance) -> usize {
    if m.is_empty() {
        return 0;
    }
    let f = kernels::svd(m);
    if f.largest() == R::zero() {
        return 0;
    }
    f.count_above(tol.cutoff(f.largest(), m.shape()))
}

/// Moore–Penrose inverse with the tolerance's rank cutoff.
pub fn pinv<R: Real>(m: &Matrix<R>, tol: &Tolerance) -> Matrix<R> {
    let f = kernels::svd(m);
    let r = if f.largest() == R::zero() { 0 } else { f.count_above(tol.cutoff(f.largest(), m.shape())) };
    pinv_from_svd(&f, r, m.shape())
}

/// Moore–Penrose inverse of a matrix whose rank `r` is known a priori.
///
/// Used for powers `M^ℓ`, whose rank is pinned down by a [`PowerChain`] but
/// whose smallest nonzero singular values may sit far below any fixed
/// relative cutoff.
pub fn pinv_with_rank<R: Real>(m: &Matrix<R>, r: usize) -> Matrix<R> {
    let f = kernels::svd(m);
    pinv_from_svd(&f, r.min(f.s.len()), m.shape())
}

fn pinv_from_svd<R: Real>(f: &Svd<R>, r: usize, (rows, cols): (usize, usize)) -> Matrix<R> {
    let mut out = Matrix::zeros(cols, rows);
    for l in 0..r {
        let inv = R::one() / f.s[l];
        for i in 0..cols {
            let vi = f.v[(i, l)].scale(inv);
            if vi.is_zero() {
                continue;
            }
            for j in 0..rows {
                out[(i, j)] = out[(i, j)] + vi * f.u[(j, l)].conj();
            }
        }
    }
    out
}

/// Orthonormal basis of `R(M)` using the tolerance's rank cutoff.
pub fn range_basis<R: Real>(m: &Matrix<R>, tol: &Tolerance) -> SubspaceBasis<R> {
    let r = rank(m, tol);
    range_basis_with_rank(m, r)
}

/// Orthonormal basis of `R(M)` keeping the `r` dominant directions.
pub fn range_basis_with_rank<R: Real>(m: &Matrix<R>, r: usize) -> SubspaceBasis<R> {
    let f = kernels::svd(m);
    SubspaceBasis { matrix: f.u.columns(0, r.min(f.s.len())) }
}

/// `Ind(A)`: smallest `k ≥ 0` with `rk(A^k) = rk(A^{k+1})`.
pub fn index<R: Real>(a: &Matrix<R>, tol: &Tolerance) -> Result<usize> {
    if !a.is_square() {
        return Err(shape_err("index", (a.rows(), a.rows()), a.shape()));
    }
    Ok(PowerChain::new(a, tol).index())
}

/// `P_M = M M^†`.
pub fn range_projector<R: Real>(m: &Matrix<R>, tol: &Tolerance) -> Matrix<R> {
    m * &pinv(m, tol)
}

/// `R(X) ⊆ R(Y)`.
pub fn range_inclusion<R: Real>(x: &Matrix<R>, y: &Matrix<R>, tol: &Tolerance) -> Result<bool> {
    if x.rows() != y.rows() {
        return Err(shape_err("range_inclusion", (y.rows(), x.cols()), x.shape()));
    }
    let p = range_projector(y, tol);
    let outside = x - &(&p * x);
    Ok(outside.max_norm().to_f64() <= tol.eq_atol * x.max_norm().to_f64().max(1.0))
}

/// Scale-relative equality: `‖A − B‖_max ≤ eq_atol · max(1, ‖A‖_max, ‖B‖_max)`.
pub fn matrix_eq<R: Real>(a: &Matrix<R>, b: &Matrix<R>, tol: &Tolerance) -> Result<bool> {
    Ok(relative_distance(a, b)? <= tol.eq_atol)
}

/// `‖A − B‖_max / max(1, ‖A‖_max, ‖B‖_max)`.
pub fn relative_distance<R: Real>(a: &Matrix<R>, b: &Matrix<R>) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(shape_err("matrix_eq", a.shape(), b.shape()));
    }
    let scale = a.max_norm().max(b.max_norm()).to_f64().max(1.0);
    Ok((a - b).max_norm().to_f64() / scale)
}

/// `N(M1) = N(M2)` via `rk([M1; M2]) = rk(M1) = rk(M2)`.
pub fn same_null_space<R: Real>(m1: &Matrix<R>, m2: &Matrix<R>, tol: &Tolerance) -> Result<bool> {
    if m1.cols() != m2.cols() {
        return Err(shape_err("same_null_space", (m2.rows(), m1.cols()), m2.shape()));
    }
    let r1 = rank(m1, tol);
    let r2 = rank(m2, tol);
    let stacked = rank(&m1.vstack(m2), tol);
    Ok(r1 == r2 && r1 == stacked)
}

#[cfg(test)]
pub(crate) fn real<R: Real>(x: f64) -> num_complex::Complex<R> {
    num_complex::Complex::new(R::from_f64(x), R::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use proptest::prelude::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn fix1_a() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[[1., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., 0., 1.]])
    }

    fn fix1_w() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[[0., 0., 1.], [0., 1., 1.], [1., 1., 1.], [0., 0., 0.]])
    }

    fn jordan(n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |i, j| if j == i + 1 { real(1.0) } else { Complex::zero() })
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&ComplexMatrix::identity(3), &tol()), 3);
        assert_eq!(rank(&ComplexMatrix::zeros(2, 5), &tol()), 0);
        // Gaussian elimination: rows (0,0,1),(0,1,1),(1,1,1) are independent
        assert_eq!(rank(&fix1_w(), &tol()), 3);
    }

    #[test]
    fn pinv_examples() {
        let i4 = ComplexMatrix::identity(4);
        assert!(matrix_eq(&pinv(&i4, &tol()), &i4, &tol()).unwrap());
        let d = ComplexMatrix::from_real_rows(&[[2., 0.], [0., 0.]]);
        let want = ComplexMatrix::from_real_rows(&[[0.5, 0.], [0., 0.]]);
        assert!(matrix_eq(&pinv(&d, &tol()), &want, &tol()).unwrap());
        let a = fix1_a();
        let x = pinv(&a, &tol());
        assert_penrose(&a, &x, 1e-10);
    }

    fn assert_penrose(a: &ComplexMatrix, x: &ComplexMatrix, eps: f64) {
        let ax = a * x;
        let xa = x * a;
        assert!((&(&ax * a) - a).max_norm() < eps);
        assert!((&(&xa * x) - x).max_norm() < eps);
        assert!((&ax.adjoint() - &ax).max_norm() < eps);
        assert!((&xa.adjoint() - &xa).max_norm() < eps);
    }

    #[test]
    fn index_examples() {
        assert_eq!(index(&ComplexMatrix::identity(3), &tol()).unwrap(), 0);
        assert_eq!(index(&jordan(3), &tol()).unwrap(), 3);
        let wa = &fix1_w() * &fix1_a();
        assert_eq!(index(&wa, &tol()).unwrap(), 3);
        let aw = &fix1_a() * &fix1_w();
        assert_eq!(index(&aw, &tol()).unwrap(), 2);
        assert_eq!(index(&ComplexMatrix::zeros(2, 2), &tol()).unwrap(), 1);
        assert!(index(&fix1_a(), &tol()).is_err());
    }

    #[test]
    fn projector_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert!(matrix_eq(&range_projector(&i2, &tol()), &i2, &tol()).unwrap());
        let z = ComplexMatrix::zeros(3, 3);
        assert_eq!(range_projector(&z, &tol()), z);
        let e1 = ComplexMatrix::column_vector(&[1., 0.]);
        let want = ComplexMatrix::from_real_rows(&[[1., 0.], [0., 0.]]);
        assert!(matrix_eq(&range_projector(&e1, &tol()), &want, &tol()).unwrap());
    }

    #[test]
    fn inclusion_and_equality_examples() {
        let a = fix1_a();
        assert!(range_inclusion(&a, &a, &tol()).unwrap());
        assert!(!range_inclusion(&ComplexMatrix::identity(2), &ComplexMatrix::zeros(2, 2), &tol()).unwrap());
        let i3 = ComplexMatrix::identity(3);
        assert!(matrix_eq(&i3, &i3, &tol()).unwrap());
        assert!(!matrix_eq(&i3, &i3.scale(real(2.0)), &tol()).unwrap());
        assert!(matrix_eq(&i3, &a, &tol()).is_err());
    }

    #[test]
    fn power_chain_tracks_ranks() {
        let j = jordan(4);
        let chain = PowerChain::new(&j, &tol());
        assert_eq!(chain.index(), 4);
        for l in 0..6 {
            assert_eq!(chain.rank_of_power(l), 4usize.saturating_sub(l));
            assert_eq!(chain.rank_of_power(l), rank(&j.pow(l), &tol()));
        }
    }

    #[test]
    fn complement_is_orthogonal() {
        let b = range_basis(&fix1_w(), &tol());
        let c = b.complement();
        assert_eq!(b.dim() + c.dim(), 4);
        assert!((b.matrix().adjoint() * c.matrix().clone()).max_norm() < 1e-14);
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = ComplexMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            prop::collection::vec((-3i32..=3, -3i32..=3), r * c).prop_map(move |v| {
                let data = v.into_iter().map(|(a, b)| Complex::new(a as f64, b as f64)).collect();
                ComplexMatrix::from_entries(r, c, data).unwrap()
            })
        })
    }

    fn arb_square(max: usize) -> impl Strategy<Value = ComplexMatrix> {
        (1..=max).prop_flat_map(|n| {
            prop::collection::vec(-2i32..=2, n * n)
                .prop_map(move |v| ComplexMatrix::from_fn(n, n, |i, j| real(v[i * n + j] as f64)))
        })
    }

    proptest! {
        #[test]
        fn penrose_equations_and_involution(m in arb_matrix(6)) {
            let x = pinv(&m, &tol());
            let scale = m.max_norm().max(1.0);
            let ax = &m * &x;
            let xa = &x * &m;
            prop_assert!((&(&ax * &m) - &m).max_norm() < 1e-9 * scale);
            prop_assert!((&(&xa * &x) - &x).max_norm() < 1e-9 * x.max_norm().max(1.0));
            prop_assert!((&ax.adjoint() - &ax).max_norm() < 1e-9);
            prop_assert!((&xa.adjoint() - &xa).max_norm() < 1e-9);
            prop_assert!(matrix_eq(&pinv(&x, &tol()), &m, &tol()).unwrap());
        }

        #[test]
        fn projector_is_hermitian_idempotent_with_rank_trace(m in arb_matrix(6)) {
            let p = range_projector(&m, &tol());
            prop_assert!((&p.adjoint() - &p).max_norm() < 1e-9);
            prop_assert!((&(&p * &p) - &p).max_norm() < 1e-9);
            let tr = p.trace();
            prop_assert!((tr.re - rank(&m, &tol()) as f64).abs() < 1e-9);
            prop_assert!(tr.im.abs() < 1e-9);
        }

        #[test]
        fn index_is_bounded_and_ranks_stabilize(a in arb_square(6)) {
            let k = index(&a, &tol()).unwrap();
            prop_assert!(k <= a.rows());
            let rk = rank(&a.pow(k), &tol());
            for j in 0..3 {
                prop_assert_eq!(rank(&a.pow(k + j), &tol()), rk);
            }
            let chain = PowerChain::new(&a, &tol());
            for l in 0..=k + 1 {
                prop_assert_eq!(chain.rank_of_power(l), rank(&a.pow(l), &tol()));
            }
        }

        // N(A) = N(B) ⇒ N(AC) = N(BC)
        #[test]
        fn equal_null_spaces_survive_right_multiplication(
            a in arb_matrix(5),
            s in prop::collection::vec(-3i32..=3, 25),
            c in prop::collection::vec(-3i32..=3, 25),
        ) {
            // B = S·A with S invertible has N(B) = N(A)
            let r = a.rows();
            let mut sm = ComplexMatrix::from_fn(r, r, |i, j| real(s[i * 5 + j] as f64));
            for i in 0..r {
                sm[(i, i)] = real(20.0);
            }
            let b = &sm * &a;
            prop_assume!(same_null_space(&a, &b, &tol()).unwrap());
            let n = a.cols();
            let cm = ComplexMatrix::from_fn(n, 3, |i, j| real(c[i * 5 + j] as f64));
            prop_assert!(same_null_space(&(&a * &cm), &(&b * &cm), &tol()).unwrap());
        }
    }
}
