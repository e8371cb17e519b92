//! Residuals of the defining equations, reported by `compute --verbose`.

use winverse::geninv::{core_ep, m_weak_group, SquareInverseKind};
use winverse::matcore::{index, pinv, relative_distance, PowerChain};
use winverse::verify::{check_square_m_weak_core, check_thm31};
use winverse::wgeninv::{w_core_ep, WeightedProblem};
use winverse::{Matrix, Real, Result, Tolerance};

use crate::InverseKind;

type Residuals = Vec<(String, f64)>;

fn entry<R: Real>(label: &str, lhs: &Matrix<R>, rhs: &Matrix<R>) -> Result<(String, f64)> {
    Ok((label.to_string(), relative_distance(lhs, rhs)?))
}

pub fn square<R: Real>(kind: InverseKind, a: &Matrix<R>, x: &Matrix<R>, tol: &Tolerance) -> Result<Residuals> {
    let ax = a * x;
    let xa = x * a;
    let outer = entry("XAX = X", &(&xa * x), x)?;
    let commute = entry("AX = XA", &ax, &xa)?;
    let hermitian = entry("(AX)* = AX", &ax.adjoint(), &ax)?;
    let k = || index(a, tol);
    Ok(match kind {
        InverseKind::Pinv => {
            vec![entry("AXA = A", &(&ax * a), a)?, outer, hermitian, entry("(XA)* = XA", &xa.adjoint(), &xa)?]
        }
        InverseKind::Square(SquareInverseKind::Drazin) => {
            let k = k()?;
            vec![outer, commute, entry("XA^(k+1) = A^k", &(x * &a.pow(k + 1)), &a.pow(k))?]
        }
        InverseKind::Square(SquareInverseKind::Group) => vec![entry("AXA = A", &(&ax * a), a)?, outer, commute],
        InverseKind::Square(SquareInverseKind::Core) => {
            vec![entry("AX = A A^†", &ax, &(a * &pinv(a, tol)))?, entry("AX^2 = X", &(&ax * x), x)?]
        }
        InverseKind::Square(SquareInverseKind::CoreEp) => {
            let k = k()?;
            vec![
                entry("XA^(k+1) = A^k", &(x * &a.pow(k + 1)), &a.pow(k))?,
                entry("AX^2 = X", &(&ax * x), x)?,
                hermitian,
            ]
        }
        InverseKind::Square(SquareInverseKind::Bt) => {
            let target = pinv(&(&(a * a) * &pinv(a, tol)), tol);
            vec![entry("X = (A^2 A^†)^†", x, &target)?]
        }
        InverseKind::Square(SquareInverseKind::MWeakGroup(m)) => {
            let cep = core_ep(a, tol)?;
            vec![entry("AX^2 = X", &(&ax * x), x)?, entry("AX = (A^ⓓ)^m A^m", &ax, &(&cep.pow(m) * &a.pow(m)))?]
        }
        InverseKind::Square(SquareInverseKind::MWeakCore(m)) => check_square_m_weak_core(a, m, x, tol)?.residuals,
        _ => Vec::new(),
    })
}

pub fn weighted<R: Real>(kind: InverseKind, p: &WeightedProblem<R>, x: &Matrix<R>) -> Result<Residuals> {
    let k = p.k();
    let aw = p.aw();
    let xwawx = &(x * &p.waw()) * x;
    Ok(match kind {
        InverseKind::WDrazin => vec![
            entry("XWAWX = X", &xwawx, x)?,
            entry("AWX = XWA", &(&aw * x), &(x * &p.wa()))?,
            entry("XW(AW)^(k+1) = (AW)^k", &(&(x * p.w()) * &aw.pow(k + 1)), &aw.pow(k))?,
        ],
        InverseKind::WCoreEp => {
            let proj = PowerChain::new(&p.wa(), p.tol()).projector(k);
            vec![entry("XWAWX = X", &xwawx, x)?, entry("WAWX = P_(WA)^k", &(&p.waw() * x), &proj)?]
        }
        InverseKind::WMwg(m) => {
            let cep = w_core_ep(p)?;
            let wa_group = m_weak_group(&p.wa(), m, p.tol())?;
            let awx = &aw * x;
            vec![
                entry("AWXWX = X", &(&(&awx * p.w()) * x), x)?,
                entry("AWX = (A^ⓓ,W W)^m (AW)^(m-1) A", &awx, &(&(&(&cep * p.w()).pow(m) * &aw.pow(m - 1)) * p.a()))?,
                entry("AWX = A(WA)^ⓦm", &awx, &(p.a() * &wa_group))?,
            ]
        }
        InverseKind::WMwc(_) => check_thm31(p, x)?.residuals,
        _ => Vec::new(),
    })
}
