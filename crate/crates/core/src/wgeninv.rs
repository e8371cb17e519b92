//! Weighted generalized inverses of a rectangular `A ∈ C^{p×n}` with weight
//! `W ∈ C^{n×p}`.
//!
//! The default routes:
//!
//! ```text
//! A^{d,W}    = A [(WA)^d]^2
//! A^{⊕†,W}   = A [(WA)^{⊕†}]^2
//! A^{ⓦ_m,W}  = (A^{⊕†,W} W)^{m+1} (AW)^{m-1} A
//! A^{#_m,W}  = A^{ⓦ_m,W} P_{(WA)^m}
//! ```
//!
//! [`w_m_weak_core_rep`] evaluates the same inverse through any of the
//! alternative representations in [`RepresentationVariant`].

use std::fmt;
use std::str::FromStr;

use crate::decomp::{weighted_pair_decompose, ProductSide, WeightedPairFactors};
use crate::error::{shape_err, Error, Result};
use crate::geninv::{bt_inverse_with_rank, core_ep, drazin, m_weak_group};
use crate::matcore::{kernels, pinv_with_rank, range_basis_with_rank, Matrix, PowerChain, Real, Tolerance};

/// A validated `(A, W, m)` triple together with its indices.
#[derive(Clone, Debug)]
pub struct WeightedProblem<R: Real = f64> {
    a: Matrix<R>,
    w: Matrix<R>,
    m: usize,
    index_aw: usize,
    index_wa: usize,
    tol: Tolerance,
}

impl<R: Real> WeightedProblem<R> {
    /// Fails on mismatched shapes, a weight with no entry above `eq_atol`,
    /// or `m = 0`.
    pub fn new(a: Matrix<R>, w: Matrix<R>, m: usize, tol: Tolerance) -> Result<Self> {
        let (p, n) = a.shape();
        if w.shape() != (n, p) {
            return Err(shape_err("weight", (n, p), w.shape()));
        }
        if w.max_norm().to_f64() <= tol.eq_atol {
            return Err(Error::ZeroWeight);
        }
        if m == 0 {
            return Err(Error::InvalidOrder);
        }
        let index_aw = PowerChain::new(&(&a * &w), &tol).index();
        let index_wa = PowerChain::new(&(&w * &a), &tol).index();
        Ok(Self { a, w, m, index_aw, index_wa, tol })
    }

    /// The same pair with a different order `m`.
    pub fn with_order(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidOrder);
        }
        Ok(Self { m, ..self.clone() })
    }

    pub fn a(&self) -> &Matrix<R> {
        &self.a
    }

    pub fn w(&self) -> &Matrix<R> {
        &self.w
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `k = max{Ind(AW), Ind(WA)}`.
    pub fn k(&self) -> usize {
        self.index_aw.max(self.index_wa)
    }

    pub fn index_aw(&self) -> usize {
        self.index_aw
    }

    pub fn index_wa(&self) -> usize {
        self.index_wa
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    /// `(p, n)` with `A ∈ C^{p×n}`.
    pub fn shape(&self) -> (usize, usize) {
        self.a.shape()
    }

    pub fn aw(&self) -> Matrix<R> {
        &self.a * &self.w
    }

    pub fn wa(&self) -> Matrix<R> {
        &self.w * &self.a
    }

    pub fn waw(&self) -> Matrix<R> {
        &(&self.w * &self.a) * &self.w
    }

    pub fn wa_chain(&self) -> PowerChain<R> {
        PowerChain::new(&self.wa(), &self.tol)
    }

    pub fn aw_chain(&self) -> PowerChain<R> {
        PowerChain::new(&self.aw(), &self.tol)
    }

    pub fn decompose(&self) -> Result<WeightedPairFactors<R>> {
        weighted_pair_decompose(&self.a, &self.w, &self.tol)
    }
}

/// W-weighted Drazin inverse `A [(WA)^d]^2`.
pub fn w_drazin<R: Real>(p: &WeightedProblem<R>) -> Result<Matrix<R>> {
    let d = drazin(&p.wa(), &p.tol)?;
    Ok(&p.a * &(&d * &d))
}

/// The dual form `[(AW)^d]^2 A`.
pub fn w_drazin_dual<R: Real>(p: &WeightedProblem<R>) -> Result<Matrix<R>> {
    let d = drazin(&p.aw(), &p.tol)?;
    Ok(&(&d * &d) * &p.a)
}

/// W-weighted core-EP inverse `A [(WA)^{⊕†}]^2`.
pub fn w_core_ep<R: Real>(p: &WeightedProblem<R>) -> Result<Matrix<R>> {
    let c = core_ep(&p.wa(), &p.tol)?;
    Ok(&p.a * &(&c * &c))
}

/// W-weighted m-weak group inverse, evaluated in block form from the
/// weighted core-EP decomposition. Equals
/// `(A^{⊕†,W} W)^{m+1} (AW)^{m-1} A`; see [`w_m_weak_group_power`].
pub fn w_m_weak_group<R: Real>(p: &WeightedProblem<R>) -> Result<Matrix<R>> {
    let f = p.decompose()?;
    block_form(&f, p.m, CanonicalForm::First, false, &p.tol)
}

/// `(A^{⊕†,W} W)^{m+1} (AW)^{m-1} A` evaluated literally. Loses accuracy
/// when the nonzero spectrum of `WA` is spread out.
pub fn w_m_weak_group_power<R: Real>(p: &WeightedProblem<R>) -> Result<Matrix<R>> {
    let cw = &w_core_ep(p)? * &p.w;
    Ok(&(&cw.pow(p.m + 1) * &p.aw().pow(p.m - 1)) * &p.a)
}

/// W-weighted m-weak core inverse `A^{ⓦ_m,W} P_{(WA)^m}`, evaluated in
/// block form.
pub fn w_m_weak_core<R: Real>(p: &WeightedProblem<R>) -> Result<Matrix<R>> {
    w_m_weak_core_canonical(p, CanonicalForm::First)
}

/// `(WAW·X, X·WAW)` for `X = A^{#_m,W}`; oblique projectors onto
/// `R((WA)^k)` and `R((AW)^k)`.
pub fn w_m_weak_core_projectors<R: Real>(p: &WeightedProblem<R>) -> Result<(Matrix<R>, Matrix<R>)> {
    let x = w_m_weak_core(p)?;
    let waw = p.waw();
    Ok((&waw * &x, &x * &waw))
}

/// One of the equivalent formulas for `A^{#_m,W}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepresentationVariant {
    /// `A^{ⓦ_m,W} P_{(WA)^m}`
    Definition,
    /// `(A^{⊕†,W} W)^{m+1} (AW)^{m-1} A P_{(WA)^m}`
    PropA,
    /// `A [(WA)^{⊕†}]^{m+2} (WA)^m P_{(WA)^m}`
    PropB,
    /// `A (WA)^{⊕†} (WA)^{ⓦ_m} P_{(WA)^m}`
    PropC,
    /// `A [(WA)^d]^{m+2} P_{(WA)^k} (WA)^m P_{(WA)^m}`
    PropD,
    /// `A (WA)^k [(WA)^{k+m+2}]^† (WA)^m P_{(WA)^m}`
    PropE,
    /// `A (WA)^k [(WA)^{k+m+2}]^† (WA)^{2m} [(WA)^m]^†`
    PropF,
    /// `A [(WA)^d]^{m+2} P_{(WA)^k} [((WA)^m)^⋄]^†` with the BT inverse
    /// `M^⋄ = (M P_M)^†`
    PropG,
    /// `(AW)^k A [(WA)^{k+m+2}]^† (WA)^m P_{(WA)^m}`
    PropH,
    /// `Y WAW A^{#_m,W}` with `Y = A^{⊕†,W}`
    PropI,
    /// `(AW)^k ([(WA)^k]^* (WA)^{m+k+1} W)^† [(WA)^k]^* (WA)^{2m} [(WA)^m]^†`
    Urquhart,
    /// Block form from the weighted core-EP decomposition
    /// (see [`CanonicalForm::First`]).
    Canonical,
}

impl RepresentationVariant {
    pub const ALL: [Self; 12] = [
        Self::Definition,
        Self::PropA,
        Self::PropB,
        Self::PropC,
        Self::PropD,
        Self::PropE,
        Self::PropF,
        Self::PropG,
        Self::PropH,
        Self::PropI,
        Self::Urquhart,
        Self::Canonical,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Self::Definition => "definition",
            Self::PropA => "prop_a",
            Self::PropB => "prop_b",
            Self::PropC => "prop_c",
            Self::PropD => "prop_d",
            Self::PropE => "prop_e",
            Self::PropF => "prop_f",
            Self::PropG => "prop_g",
            Self::PropH => "prop_h",
            Self::PropI => "prop_i",
            Self::Urquhart => "urquhart",
            Self::Canonical => "canonical",
        }
    }
}

impl fmt::Display for RepresentationVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for RepresentationVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|v| v.tag() == s).ok_or_else(|| Error::UnknownVariant(s.to_string()))
    }
}

/// `A^{#_m,W}` through the chosen representation.
///
/// Pseudoinverses of powers of `WA` are truncated at their known ranks:
/// `rk((WA)^ℓ) = t` for `ℓ ≥ k`, and the Urquhart inner product has rank
/// `t` as well.
pub fn w_m_weak_core_rep<R: Real>(p: &WeightedProblem<R>, variant: RepresentationVariant) -> Result<Matrix<R>> {
    use RepresentationVariant as V;
    let (m, k) = (p.m, p.k());
    let a = &p.a;
    let wa = p.wa();
    let chain = p.wa_chain();
    let t = chain.core_rank();
    let proj_m = chain.projector(m);
    let proj_k = chain.projector(k);
    let high_pinv = || pinv_with_rank(&wa.pow(k + m + 2), t);
    let pinv_m = || pinv_with_rank(&wa.pow(m), chain.rank_of_power(m));

    let x = match variant {
        V::Definition => &w_m_weak_group_power(p)? * &proj_m,
        V::PropA => {
            let cw = &w_core_ep(p)? * &p.w;
            &(&(&cw.pow(m + 1) * &p.aw().pow(m - 1)) * a) * &proj_m
        }
        V::PropB => {
            let c = core_ep(&wa, &p.tol)?;
            &(&(a * &c.pow(m + 2)) * &wa.pow(m)) * &proj_m
        }
        V::PropC => {
            let c = core_ep(&wa, &p.tol)?;
            let g = m_weak_group(&wa, m, &p.tol)?;
            &(&(a * &c) * &g) * &proj_m
        }
        V::PropD => {
            let d = drazin(&wa, &p.tol)?;
            &(&(&(a * &d.pow(m + 2)) * &proj_k) * &wa.pow(m)) * &proj_m
        }
        V::PropE => &(&(&(a * &wa.pow(k)) * &high_pinv()) * &wa.pow(m)) * &proj_m,
        V::PropF => &(&(&(a * &wa.pow(k)) * &high_pinv()) * &wa.pow(2 * m)) * &pinv_m(),
        V::PropG => {
            let d = drazin(&wa, &p.tol)?;
            let bt = bt_inverse_with_rank(&wa.pow(m), chain.rank_of_power(m), chain.rank_of_power(2 * m));
            let bt_pinv = pinv_with_rank(&bt, chain.rank_of_power(2 * m));
            &(&(a * &d.pow(m + 2)) * &proj_k) * &bt_pinv
        }
        V::PropH => &(&(&(&p.aw().pow(k) * a) * &high_pinv()) * &wa.pow(m)) * &proj_m,
        V::PropI => w_m_weak_core_via_outer(p, &w_core_ep(p)?)?,
        V::Urquhart => {
            let wak = wa.pow(k);
            let inner = &(&wak.adjoint() * &wa.pow(m + k + 1)) * &p.w;
            let head = &p.aw().pow(k) * &pinv_with_rank(&inner, t);
            &(&(&head * &wak.adjoint()) * &wa.pow(2 * m)) * &pinv_m()
        }
        V::Canonical => w_m_weak_core_canonical(p, CanonicalForm::First)?,
    };
    Ok(x)
}

/// `Y WAW A^{#_m,W}` for an outer inverse `Y` of `WAW` with
/// `R(Y) = R((AW)^k)`; `A^{d,W}`, `A^{⊕†,W}` and `A^{ⓦ_m,W}` all qualify.
pub fn w_m_weak_core_via_outer<R: Real>(p: &WeightedProblem<R>, y: &Matrix<R>) -> Result<Matrix<R>> {
    if y.shape() != p.a.shape() {
        return Err(shape_err("outer inverse Y", p.a.shape(), y.shape()));
    }
    Ok(&(y * &p.waw()) * &w_m_weak_core(p)?)
}

/// The two algebraically equal block forms of `A^{#_m,W}`; they differ in
/// the order of the factors in the upper-right block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalForm {
    /// `(A1W1)^{-(m+1)} W1^{-1} T̃_m P_{(W3A3)^m}`
    First,
    /// `W1^{-1} (W1A1)^{-(m+1)} T̃_m P_{(W3A3)^m}`
    Second,
}

/// `U [[(W1A1W1)^{-1}, ·], [0, 0]] V*` from the weighted core-EP
/// decomposition.
pub fn w_m_weak_core_canonical<R: Real>(p: &WeightedProblem<R>, form: CanonicalForm) -> Result<Matrix<R>> {
    let f = p.decompose()?;
    w_m_weak_core_from_factors(&f, p.m, form, &p.tol)
}

pub fn w_m_weak_core_from_factors<R: Real>(
    f: &WeightedPairFactors<R>,
    m: usize,
    form: CanonicalForm,
    tol: &Tolerance,
) -> Result<Matrix<R>> {
    block_form(f, m, form, true, tol)
}

/// Shared block evaluation; without the trailing projector this is the
/// m-weak group inverse.
fn block_form<R: Real>(
    f: &WeightedPairFactors<R>,
    m: usize,
    form: CanonicalForm,
    project: bool,
    tol: &Tolerance,
) -> Result<Matrix<R>> {
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    let singular = |what| move || Error::Singular { what };
    let w1_inv = kernels::inverse(&f.w1).ok_or_else(singular("block W1"))?;
    let w1a1 = &f.w1 * &f.a1;
    let (_, t_tilde) = f.tilde_sums(m);

    let top_left = kernels::inverse(&(&w1a1 * &f.w1)).ok_or_else(singular("block W1A1W1"))?;
    let lead = match form {
        CanonicalForm::First => {
            let a1w1_inv = kernels::inverse(&(&f.a1 * &f.w1)).ok_or_else(singular("block A1W1"))?;
            &a1w1_inv.pow(m + 1) * &w1_inv
        }
        CanonicalForm::Second => {
            let w1a1_inv = kernels::inverse(&w1a1).ok_or_else(singular("block W1A1"))?;
            &w1_inv * &w1a1_inv.pow(m + 1)
        }
    };
    let mut top_right = &lead * &t_tilde;
    if project {
        top_right = &top_right * &f.product_factors(ProductSide::WA).trailing_power_projector(m, tol);
    }
    let (p_dim, n_dim) = (f.u.rows(), f.v.rows());
    let middle = top_left.hstack(&top_right).vstack(&Matrix::zeros(p_dim - f.t, n_dim));
    Ok(&(&f.u * &middle) * &f.v.adjoint())
}

/// `A^{⊕†,W} = U [[(W1A1W1)^{-1}, 0], [0, 0]] V*`.
pub fn w_core_ep_from_factors<R: Real>(f: &WeightedPairFactors<R>) -> Result<Matrix<R>> {
    let top_left = kernels::inverse(&(&(&f.w1 * &f.a1) * &f.w1)).ok_or(Error::Singular { what: "block W1A1W1" })?;
    let (p_dim, n_dim) = (f.u.rows(), f.v.rows());
    let middle = top_left.hstack(&Matrix::zeros(f.t, n_dim - f.t)).vstack(&Matrix::zeros(p_dim - f.t, n_dim));
    Ok(&(&f.u * &middle) * &f.v.adjoint())
}

/// `(WAW P_{(AW)^k})^†`, the least-squares characterization of
/// `A^{⊕†,W}`.
pub fn w_core_ep_pinv_form<R: Real>(p: &WeightedProblem<R>) -> Matrix<R> {
    let chain = p.aw_chain();
    let t = chain.core_rank();
    let proj = range_basis_with_rank(chain.range_of_power(p.k()).matrix(), t).projector();
    pinv_with_rank(&(&p.waw() * &proj), t)
}
