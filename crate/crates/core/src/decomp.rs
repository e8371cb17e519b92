//! Core-EP decomposition of a square matrix and the simultaneous unitary
//! block upper triangularization of a pair `(A, W)`.
//!
//! A square `A` of index `k` is written as
//!
//! ```text
//! A = U [[T, S], [0, N]] U*
//! ```
//!
//! with `T` (`t×t`, `t = rk(A^k)`) nonsingular and `N` nilpotent of index
//! `k`. The first `t` columns of `U` are an orthonormal basis of `R(A^k)`
//! and the rest span its orthogonal complement. `A` maps `R(A^k)` onto
//! itself, so the lower-left block vanishes.
//!
//! For a pair `A ∈ C^{p×n}`, `W ∈ C^{n×p}` the unitaries come from the
//! core-EP decompositions of `AW` (giving `U`) and `WA` (giving `V`). Since
//! `A·R((WA)^k) ⊆ R((AW)^k)` and `W·R((AW)^k) ⊆ R((WA)^k)`, both `U*AV` and
//! `V*WU` are block upper triangular.

use crate::error::{shape_err, Error, Result};
use crate::matcore::{kernels, pinv_with_rank, rank, Matrix, PowerChain, Real, Tolerance};

/// `A = U [[T, S], [0, N]] U*`.
#[derive(Clone, Debug)]
pub struct CoreEpFactors<R: Real = f64> {
    pub u: Matrix<R>,
    pub t_block: Matrix<R>,
    pub s_block: Matrix<R>,
    pub n_block: Matrix<R>,
    /// Size of the nonsingular block, `rk(A^k)`.
    pub t: usize,
    /// `Ind(A)`.
    pub index: usize,
}

impl<R: Real> CoreEpFactors<R> {
    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    /// Columns of `U` spanning `R(A^k)`.
    pub fn core_basis(&self) -> Matrix<R> {
        self.u.columns(0, self.t)
    }

    /// `U [[T, S], [0, N]] U*`.
    pub fn reconstruct(&self) -> Matrix<R> {
        let lower = Matrix::zeros(self.dim() - self.t, self.t);
        let middle = Matrix::from_blocks(&self.t_block, &self.s_block, &lower, &self.n_block);
        &(&self.u * &middle) * &self.u.adjoint()
    }

    /// `T^{-1}`; `T` is nonsingular by construction.
    pub fn t_inverse(&self) -> Result<Matrix<R>> {
        kernels::inverse(&self.t_block).ok_or(Error::Singular { what: "core block T" })
    }

    /// `Σ_{j=0}^{ℓ-1} T^j S N^{ℓ-1-j}`, the upper-right block of
    /// `U* A^ℓ U`.
    pub fn power_sum(&self, exp: usize) -> Matrix<R> {
        let mut acc = Matrix::zeros(self.t, self.dim() - self.t);
        if exp == 0 {
            return acc;
        }
        let mut t_pow = Matrix::identity(self.t);
        for j in 0..exp {
            let term = &(&t_pow * &self.s_block) * &self.n_block.pow(exp - 1 - j);
            acc = acc + term;
            t_pow = &t_pow * &self.t_block;
        }
        acc
    }

    /// `P_{N^ℓ}`, truncated at `rk(A^ℓ) − t` from the power chain of the
    /// whole triangle.
    pub(crate) fn trailing_power_projector(&self, exp: usize, tol: &Tolerance) -> Matrix<R> {
        let lower = Matrix::zeros(self.dim() - self.t, self.t);
        let triangle = Matrix::from_blocks(&self.t_block, &self.s_block, &lower, &self.n_block);
        let r = PowerChain::new(&triangle, tol).rank_of_power(exp) - self.t;
        let n_pow = self.n_block.pow(exp);
        &n_pow * &pinv_with_rank(&n_pow, r)
    }

    /// Wraps `U [[X11, X12], [0, 0]] U*`.
    pub(crate) fn embed_top(&self, x11: &Matrix<R>, x12: &Matrix<R>) -> Matrix<R> {
        let n = self.dim();
        let bottom = Matrix::zeros(n - self.t, n);
        let middle = x11.hstack(x12).vstack(&bottom);
        &(&self.u * &middle) * &self.u.adjoint()
    }
}

/// Core-EP decomposition of a square matrix.
pub fn core_ep_decompose<R: Real>(a: &Matrix<R>, tol: &Tolerance) -> Result<CoreEpFactors<R>> {
    if !a.is_square() {
        return Err(shape_err("core_ep_decompose", (a.rows(), a.rows()), a.shape()));
    }
    let n = a.rows();
    let chain = PowerChain::new(a, tol);
    let index = chain.index();
    let core = chain.range_of_power(index);
    let t = core.dim();
    let u = core.matrix().hstack(core.complement().matrix());
    let m = &(&u.adjoint() * a) * &u;

    let lower_left = m.block(t, 0, n - t, t);
    check_vanishing("U*AU", &lower_left, a, tol)?;

    let factors = CoreEpFactors {
        t_block: m.block(0, 0, t, t),
        s_block: m.block(0, t, t, n - t),
        n_block: m.block(t, t, n - t, n - t),
        u,
        t,
        index,
    };
    factors.t_inverse()?;
    Ok(factors)
}

fn check_vanishing<R: Real>(which: &'static str, block: &Matrix<R>, scale: &Matrix<R>, tol: &Tolerance) -> Result<()> {
    let norm = block.max_norm().to_f64();
    if norm > tol.eq_atol * scale.max_norm().to_f64().max(1.0) {
        return Err(Error::NotTriangular { which, norm });
    }
    Ok(())
}

/// Which of the two square products a set of factors describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductSide {
    /// `AW ∈ C^{p×p}`
    AW,
    /// `WA ∈ C^{n×n}`
    WA,
}

/// `A = U [[A1, A2], [0, A3]] V*` and `W = V [[W1, W2], [0, W3]] U*`.
#[derive(Clone, Debug)]
pub struct WeightedPairFactors<R: Real = f64> {
    pub u: Matrix<R>,
    pub v: Matrix<R>,
    pub a1: Matrix<R>,
    pub a2: Matrix<R>,
    pub a3: Matrix<R>,
    pub w1: Matrix<R>,
    pub w2: Matrix<R>,
    pub w3: Matrix<R>,
    pub t: usize,
    pub index_aw: usize,
    pub index_wa: usize,
}

impl<R: Real> WeightedPairFactors<R> {
    /// `k = max{Ind(AW), Ind(WA)}`.
    pub fn k(&self) -> usize {
        self.index_aw.max(self.index_wa)
    }

    pub fn assemble_a(&self) -> Matrix<R> {
        let lower = Matrix::zeros(self.a3.rows(), self.t);
        let mid = Matrix::from_blocks(&self.a1, &self.a2, &lower, &self.a3);
        &(&self.u * &mid) * &self.v.adjoint()
    }

    pub fn assemble_w(&self) -> Matrix<R> {
        let lower = Matrix::zeros(self.w3.rows(), self.t);
        let mid = Matrix::from_blocks(&self.w1, &self.w2, &lower, &self.w3);
        &(&self.v * &mid) * &self.u.adjoint()
    }

    /// Core-EP factors of `AW` (in `U`) or `WA` (in `V`) read off the
    /// blocks: `AW = U [[A1W1, A1W2 + A2W3], [0, A3W3]] U*` and
    /// `WA = V [[W1A1, W1A2 + W2A3], [0, W3A3]] V*`.
    pub fn product_factors(&self, side: ProductSide) -> CoreEpFactors<R> {
        match side {
            ProductSide::AW => CoreEpFactors {
                u: self.u.clone(),
                t_block: &self.a1 * &self.w1,
                s_block: &self.a1 * &self.w2 + &self.a2 * &self.w3,
                n_block: &self.a3 * &self.w3,
                t: self.t,
                index: self.index_aw,
            },
            ProductSide::WA => CoreEpFactors {
                u: self.v.clone(),
                t_block: &self.w1 * &self.a1,
                s_block: &self.w1 * &self.a2 + &self.w2 * &self.a3,
                n_block: &self.w3 * &self.a3,
                t: self.t,
                index: self.index_wa,
            },
        }
    }

    /// `(S̃_ℓ, T̃_ℓ)`: upper-right blocks of `(AW)^ℓ` and `(WA)^ℓ`.
    pub fn tilde_sums(&self, exp: usize) -> (Matrix<R>, Matrix<R>) {
        assert!(exp >= 1, "tilde sums are defined for ℓ ≥ 1");
        (self.product_factors(ProductSide::AW).power_sum(exp), self.product_factors(ProductSide::WA).power_sum(exp))
    }

    /// `(AW)^ℓ` or `(WA)^ℓ` assembled from the block powers and the tilde
    /// sums.
    pub fn power_from_blocks(&self, side: ProductSide, exp: usize) -> Matrix<R> {
        let f = self.product_factors(side);
        let top_right = f.power_sum(exp);
        let lower = Matrix::zeros(f.dim() - f.t, f.t);
        let mid = Matrix::from_blocks(&f.t_block.pow(exp), &top_right, &lower, &f.n_block.pow(exp));
        &(&f.u * &mid) * &f.u.adjoint()
    }
}

/// Simultaneous unitary block upper triangularization of `(A, W)`.
pub fn weighted_pair_decompose<R: Real>(
    a: &Matrix<R>,
    w: &Matrix<R>,
    tol: &Tolerance,
) -> Result<WeightedPairFactors<R>> {
    let (p, n) = a.shape();
    if w.shape() != (n, p) {
        return Err(shape_err("weighted_pair_decompose (W)", (n, p), w.shape()));
    }
    if w.max_norm().to_f64() <= tol.eq_atol {
        return Err(Error::ZeroWeight);
    }
    let fa = core_ep_decompose(&(a * w), tol)?;
    let fw = core_ep_decompose(&(w * a), tol)?;
    if fa.t != fw.t {
        return Err(Error::RankMismatch { rank_aw: fa.t, rank_wa: fw.t });
    }
    let t = fa.t;
    let (u, v) = (fa.u, fw.u);

    let am = &(&u.adjoint() * a) * &v;
    let wm = &(&v.adjoint() * w) * &u;
    check_vanishing("U*AV", &am.block(t, 0, p - t, t), a, tol)?;
    check_vanishing("V*WU", &wm.block(t, 0, n - t, t), w, tol)?;

    let factors = WeightedPairFactors {
        a1: am.block(0, 0, t, t),
        a2: am.block(0, t, t, n - t),
        a3: am.block(t, t, p - t, n - t),
        w1: wm.block(0, 0, t, t),
        w2: wm.block(0, t, t, p - t),
        w3: wm.block(t, t, n - t, p - t),
        u,
        v,
        t,
        index_aw: fa.index,
        index_wa: fw.index,
    };
    if kernels::inverse(&factors.a1).is_none() {
        return Err(Error::Singular { what: "block A1" });
    }
    if kernels::inverse(&factors.w1).is_none() {
        return Err(Error::Singular { what: "block W1" });
    }
    Ok(factors)
}

/// Moore–Penrose inverse of `U [[A1, A2], [0, A3]] V*` from the four-block
/// formula with `Ω = (A1A1* + A2(I − Q_{A3})A2*)^{-1}`.
pub fn block_triangular_pinv<R: Real>(
    a1: &Matrix<R>,
    a2: &Matrix<R>,
    a3: &Matrix<R>,
    u: &Matrix<R>,
    v: &Matrix<R>,
    tol: &Tolerance,
) -> Result<Matrix<R>> {
    let a3_pinv = trailing_pinv(a1, a2, a3, tol)?;
    let q_comp = Matrix::identity(a3.cols()) - &a3_pinv * a3;
    let gram = &(a1 * &a1.adjoint()) + &(&(a2 * &q_comp) * &a2.adjoint());
    let omega = kernels::inverse(&gram).ok_or(Error::Singular { what: "Ω" })?;

    let a1h_omega = &a1.adjoint() * &omega;
    let tail = a2 * &a3_pinv;
    let lower_left = &(&q_comp * &a2.adjoint()) * &omega;
    let top = a1h_omega.hstack(&-(&a1h_omega * &tail));
    let bottom = lower_left.hstack(&(&a3_pinv - &(&lower_left * &tail)));
    Ok(&(v * &top.vstack(&bottom)) * &u.adjoint())
}

/// `P_A = U diag(I_t, P_{A3}) U*` for a block triangular `A`.
pub fn block_triangular_projector<R: Real>(
    a1: &Matrix<R>,
    a2: &Matrix<R>,
    a3: &Matrix<R>,
    u: &Matrix<R>,
    tol: &Tolerance,
) -> Result<Matrix<R>> {
    let t = a1.rows();
    let p3 = trailing_projector(a1, a2, a3, tol)?;
    let zeros_tr = Matrix::zeros(t, p3.cols());
    let zeros_bl = Matrix::zeros(p3.rows(), t);
    let mid = Matrix::from_blocks(&Matrix::identity(t), &zeros_tr, &zeros_bl, &p3);
    Ok(&(u * &mid) * &u.adjoint())
}

/// `P_{A3}` for the trailing block of `[[A1, A2], [0, A3]]` with `A1`
/// nonsingular.
fn trailing_projector<R: Real>(a1: &Matrix<R>, a2: &Matrix<R>, a3: &Matrix<R>, tol: &Tolerance) -> Result<Matrix<R>> {
    Ok(a3 * &trailing_pinv(a1, a2, a3, tol)?)
}

// rk(A3) = rk(A) − t when A1 is invertible.
fn trailing_pinv<R: Real>(a1: &Matrix<R>, a2: &Matrix<R>, a3: &Matrix<R>, tol: &Tolerance) -> Result<Matrix<R>> {
    let t = a1.rows();
    if !a1.is_square() || a2.rows() != t || a3.cols() != a2.cols() {
        return Err(shape_err("block triangle", (t, t), a1.shape()));
    }
    let triangle = Matrix::from_blocks(a1, a2, &Matrix::zeros(a3.rows(), t), a3);
    let total = rank(&triangle, tol);
    if total < t || rank(a1, tol) < t {
        return Err(Error::Singular { what: "block A1" });
    }
    Ok(pinv_with_rank(a3, total - t))
}
