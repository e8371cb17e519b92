//! Generalized inverses of square matrices.
//!
//! Every inverse here is read off the core-EP decomposition
//! `A = U [[T, S], [0, N]] U*`:
//!
//! ```text
//! A^d      = U [[T^{-1}, T^{-(k+1)} Σ_k],          [0, 0]] U*
//! A^{⊕†}   = U [[T^{-1}, 0],                        [0, 0]] U*
//! A^{ⓦ_m}  = U [[T^{-1}, T^{-(m+1)} Σ_m],          [0, 0]] U*
//! A^{#_m}  = U [[T^{-1}, T^{-(m+1)} Σ_m P_{N^m}],  [0, 0]] U*
//! ```
//!
//! where `Σ_ℓ = Σ_{j<ℓ} T^j S N^{ℓ-1-j}` is the upper-right block of
//! `U* A^ℓ U`.

use std::fmt;
use std::str::FromStr;

use crate::decomp::{core_ep_decompose, CoreEpFactors};
use crate::error::{Error, Result};
use crate::matcore::{pinv, pinv_with_rank, range_projector, rank, Matrix, PowerChain, Real, Tolerance};

/// Drazin inverse: the unique `X` with `XA^{k+1} = A^k`, `XAX = X`,
/// `AX = XA`.
pub fn drazin<R: Real>(a: &Matrix<R>, tol: &Tolerance) -> Result<Matrix<R>> {
    drazin_from_factors(&core_ep_decompose(a, tol)?)
}

pub fn drazin_from_factors<R: Real>(f: &CoreEpFactors<R>) -> Result<Matrix<R>> {
    tail_form(f, f.index, None)
}

/// Group inverse; the Drazin inverse of a matrix of index at most one.
pub fn group_inverse<R: Real>(a: &Matrix<R>, tol: &Tolerance) -> Result<Matrix<R>> {
    let f = core_ep_decompose(a, tol)?;
    if f.index > 1 {
        return Err(Error::IndexTooLarge { index: f.index });
    }
    drazin_from_factors(&f)
}

/// Core-EP inverse: `XAX = X` and `R(X) = R(X*) = R(A^k)`.
pub fn core_ep<R: Real>(a: &Matrix<R>, tol: &Tolerance) -> Result<Matrix<R>> {
    core_ep_from_factors(&core_ep_decompose(a, tol)?)
}

pub fn core_ep_from_factors<R: Real>(f: &CoreEpFactors<R>) -> Result<Matrix<R>> {
    let zero = Matrix::zeros(f.t, f.dim() - f.t);
    Ok(f.embed_top(&f.t_inverse()?, &zero))
}

/// Core inverse `A^# A A^†`, defined for index at most one.
pub fn core_inverse<R: Real>(a: &Matrix<R>, tol: &Tolerance) -> Result<Matrix<R>> {
    let group = group_inverse(a, tol)?;
    Ok(&(&group * a) * &pinv(a, tol))
}

/// BT inverse `(A P_A)^†`.
pub fn bt_inverse<R: Real>(a: &Matrix<R>, tol: &Tolerance) -> Result<Matrix<R>> {
    if !a.is_square() {
        return Err(crate::error::shape_err("bt_inverse", (a.rows(), a.rows()), a.shape()));
    }
    let ap = a * &range_projector(a, tol);
    let r = rank(&ap, tol);
    Ok(pinv_with_rank(&ap, r))
}

/// BT inverse when `rk(A P_A) = rk(A^2)` is already known.
pub(crate) fn bt_inverse_with_rank<R: Real>(a: &Matrix<R>, rank_a: usize, rank_a2: usize) -> Matrix<R> {
    let p = crate::matcore::range_basis_with_rank(a, rank_a).projector();
    pinv_with_rank(&(a * &p), rank_a2)
}

/// m-weak group inverse `(A^{⊕†})^{m+1} A^m`.
pub fn m_weak_group<R: Real>(a: &Matrix<R>, m: usize, tol: &Tolerance) -> Result<Matrix<R>> {
    check_order(m)?;
    tail_form(&core_ep_decompose(a, tol)?, m, None)
}

pub fn m_weak_group_from_factors<R: Real>(f: &CoreEpFactors<R>, m: usize) -> Result<Matrix<R>> {
    check_order(m)?;
    tail_form(f, m, None)
}

/// m-weak core inverse `A^{ⓦ_m} P_{A^m}`.
pub fn m_weak_core<R: Real>(a: &Matrix<R>, m: usize, tol: &Tolerance) -> Result<Matrix<R>> {
    check_order(m)?;
    let f = core_ep_decompose(a, tol)?;
    let chain = PowerChain::new(a, tol);
    Ok(&tail_form(&f, m, None)? * &chain.projector(m))
}

/// m-weak core inverse from its block form
/// `U [[T^{-1}, T^{-(m+1)} Σ_m P_{N^m}], [0, 0]] U*`.
pub fn m_weak_core_canonical<R: Real>(f: &CoreEpFactors<R>, m: usize, tol: &Tolerance) -> Result<Matrix<R>> {
    check_order(m)?;
    tail_form(f, m, Some(&f.trailing_power_projector(m, tol)))
}

// U [[T^{-1}, T^{-(ℓ+1)} Σ_ℓ Q], [0, 0]] U*
fn tail_form<R: Real>(f: &CoreEpFactors<R>, exp: usize, right: Option<&Matrix<R>>) -> Result<Matrix<R>> {
    let t_inv = f.t_inverse()?;
    let mut top_right = &t_inv.pow(exp + 1) * &f.power_sum(exp);
    if let Some(q) = right {
        top_right = &top_right * q;
    }
    Ok(f.embed_top(&t_inv, &top_right))
}

fn check_order(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    Ok(())
}

/// Names one of the square inverses; the m-indexed kinds carry their order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareInverseKind {
    Drazin,
    Group,
    Core,
    CoreEp,
    Bt,
    MWeakGroup(usize),
    MWeakCore(usize),
}

impl SquareInverseKind {
    pub fn compute<R: Real>(self, a: &Matrix<R>, tol: &Tolerance) -> Result<Matrix<R>> {
        match self {
            Self::Drazin => drazin(a, tol),
            Self::Group => group_inverse(a, tol),
            Self::Core => core_inverse(a, tol),
            Self::CoreEp => core_ep(a, tol),
            Self::Bt => bt_inverse(a, tol),
            Self::MWeakGroup(m) => m_weak_group(a, m, tol),
            Self::MWeakCore(m) => m_weak_core(a, m, tol),
        }
    }

    pub fn order(self) -> Option<usize> {
        match self {
            Self::MWeakGroup(m) | Self::MWeakCore(m) => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for SquareInverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Drazin => f.write_str("drazin"),
            Self::Group => f.write_str("group"),
            Self::Core => f.write_str("core"),
            Self::CoreEp => f.write_str("core_ep"),
            Self::Bt => f.write_str("bt"),
            Self::MWeakGroup(m) => write!(f, "m_weak_group:{m}"),
            Self::MWeakCore(m) => write!(f, "m_weak_core:{m}"),
        }
    }
}

/// Parses `drazin`, `core_ep`, `m_weak_core:2` and so on.
impl FromStr for SquareInverseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tag, order) = match s.split_once(':') {
            Some((tag, m)) => (tag, Some(m.parse::<usize>().map_err(|_| Error::InvalidOrder)?)),
            None => (s, None),
        };
        let kind = match (tag, order) {
            ("drazin", None) => Self::Drazin,
            ("group", None) => Self::Group,
            ("core", None) => Self::Core,
            ("core_ep", None) => Self::CoreEp,
            ("bt", None) => Self::Bt,
            ("m_weak_group", Some(m)) => Self::MWeakGroup(m),
            ("m_weak_core", Some(m)) => Self::MWeakCore(m),
            ("m_weak_group" | "m_weak_core", None) => return Err(Error::InvalidOrder),
            _ => return Err(Error::UnknownVariant(s.to_string())),
        };
        if kind.order() == Some(0) {
            return Err(Error::InvalidOrder);
        }
        Ok(kind)
    }
}
