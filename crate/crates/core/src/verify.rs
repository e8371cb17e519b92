//! Certificates: does a candidate `X` satisfy one of the systems whose
//! unique solution is `A^{#_m,W}`?
//!
//! Equation residuals are `‖LHS − RHS‖_max / max(1, ‖X‖_max, ‖A‖_max‖W‖_max)`;
//! subspace clauses report `0` when they hold and `1` when they do not.

use std::fmt;
use std::str::FromStr;

use crate::error::{shape_err, Error, Result};
use crate::geninv::{core_ep, m_weak_core};
use crate::matcore::{range_basis_with_rank, rank, Matrix, PowerChain, Real, SubspaceBasis, Tolerance};
use crate::wgeninv::{w_m_weak_group, WeightedProblem};

/// The characterizing systems a candidate can be checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemId {
    /// `XWAWX = X`, `AWX = A(WA)^{#_m}`, `XWA = A^{ⓦ_m,W} P_{(WA)^m} WA`
    Thm31,
    /// `AWX = A(WA)^{#_m}`, `R(X) ⊆ R((AW)^k)`
    Thm32,
    /// `WAWX = WA(WA)^{#_m}`, `R(X) ⊆ R((AW)^k)`
    Thm33,
    /// `AWX = A(WA)^{#_m}`, `AWXWX = X`
    Thm34,
    /// `XWAWX = X` with `R(X) = R((AW)^k)` and
    /// `N(X) = N([(WA)^k]^* (WA)^m P_{(WA)^m})`
    Outer,
}

impl SystemId {
    pub const ALL: [SystemId; 5] = [Self::Thm31, Self::Thm32, Self::Thm33, Self::Thm34, Self::Outer];

    pub fn check<R: Real>(self, p: &WeightedProblem<R>, x: &Matrix<R>) -> Result<CertificateReport> {
        match self {
            Self::Thm31 => check_thm31(p, x),
            Self::Thm32 => check_thm32(p, x),
            Self::Thm33 => check_thm33(p, x),
            Self::Thm34 => check_thm34(p, x),
            Self::Outer => check_outer_inverse(p, x),
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Thm31 => "thm31",
            Self::Thm32 => "thm32",
            Self::Thm33 => "thm33",
            Self::Thm34 => "thm34",
            Self::Outer => "outer",
        })
    }
}

impl FromStr for SystemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|id| id.to_string() == s).ok_or_else(|| Error::UnknownVariant(s.to_string()))
    }
}

/// Per-equation residuals of one certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport {
    pub system_id: String,
    pub residuals: Vec<(String, f64)>,
    pub satisfied: bool,
    pub tol_used: Tolerance,
}

impl CertificateReport {
    fn new(system_id: impl Into<String>, residuals: Vec<(String, f64)>, tol: &Tolerance) -> Self {
        let satisfied = residuals.iter().all(|(_, r)| *r <= tol.eq_atol);
        CertificateReport { system_id: system_id.into(), residuals, satisfied, tol_used: *tol }
    }

    /// Labels of the clauses above tolerance.
    pub fn failing(&self) -> Vec<&str> {
        self.residuals.iter().filter(|(_, r)| *r > self.tol_used.eq_atol).map(|(label, _)| label.as_str()).collect()
    }
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.satisfied { "satisfied" } else { "not satisfied" };
        writeln!(f, "{}: {verdict} (eq_atol {:e})", self.system_id, self.tol_used.eq_atol)?;
        for (label, r) in &self.residuals {
            writeln!(f, "  {label:<40} {r:.3e}")?;
        }
        Ok(())
    }
}

struct Context<'a, R: Real> {
    p: &'a WeightedProblem<R>,
    x: &'a Matrix<R>,
    scale: f64,
}

impl<'a, R: Real> Context<'a, R> {
    fn new(p: &'a WeightedProblem<R>, x: &'a Matrix<R>) -> Result<Self> {
        if x.shape() != p.shape() {
            return Err(shape_err("candidate X", p.shape(), x.shape()));
        }
        let a_w = p.a().max_norm().to_f64() * p.w().max_norm().to_f64();
        let scale = x.max_norm().to_f64().max(a_w).max(1.0);
        Ok(Context { p, x, scale })
    }

    fn residual(&self, lhs: &Matrix<R>, rhs: &Matrix<R>) -> f64 {
        (lhs - rhs).max_norm().to_f64() / self.scale
    }

    fn wa_core(&self) -> Result<Matrix<R>> {
        m_weak_core(&self.p.wa(), self.p.m(), self.p.tol())
    }

    fn aw_k(&self) -> SubspaceBasis<R> {
        self.p.aw_chain().range_of_power(self.p.k()).clone()
    }

    fn flag(holds: bool) -> f64 {
        if holds {
            0.0
        } else {
            1.0
        }
    }

    fn outer(&self) -> (String, f64) {
        let x = self.x;
        ("XWAWX = X".into(), self.residual(&(&(x * &self.p.waw()) * x), x))
    }

    fn aw_equation(&self, wa_core: &Matrix<R>) -> (String, f64) {
        let lhs = &self.p.aw() * self.x;
        ("AWX = A(WA)^#m".into(), self.residual(&lhs, &(self.p.a() * wa_core)))
    }

    fn range_inclusion(&self) -> (String, f64) {
        let holds = self.aw_k().contains(self.x, self.p.tol());
        ("R(X) ⊆ R((AW)^k)".into(), Self::flag(holds))
    }
}

/// `XWAWX = X`, `AWX = A(WA)^{#_m}`, `XWA = A^{ⓦ_m,W} P_{(WA)^m} WA`.
pub fn check_thm31<R: Real>(p: &WeightedProblem<R>, x: &Matrix<R>) -> Result<CertificateReport> {
    let c = Context::new(p, x)?;
    let wa = p.wa();
    let target = &(&w_m_weak_group(p)? * &p.wa_chain().projector(p.m())) * &wa;
    let residuals = vec![
        c.outer(),
        c.aw_equation(&c.wa_core()?),
        ("XWA = A^wm,W P_(WA)^m WA".into(), c.residual(&(x * &wa), &target)),
    ];
    Ok(CertificateReport::new(SystemId::Thm31.to_string(), residuals, p.tol()))
}

/// `AWX = A(WA)^{#_m}` and `R(X) ⊆ R((AW)^k)`.
pub fn check_thm32<R: Real>(p: &WeightedProblem<R>, x: &Matrix<R>) -> Result<CertificateReport> {
    let c = Context::new(p, x)?;
    let residuals = vec![c.aw_equation(&c.wa_core()?), c.range_inclusion()];
    Ok(CertificateReport::new(SystemId::Thm32.to_string(), residuals, p.tol()))
}

/// `WAWX = WA(WA)^{#_m}` and `R(X) ⊆ R((AW)^k)`.
pub fn check_thm33<R: Real>(p: &WeightedProblem<R>, x: &Matrix<R>) -> Result<CertificateReport> {
    let c = Context::new(p, x)?;
    let wa = p.wa();
    let lhs = &p.waw() * x;
    let residuals = vec![("WAWX = WA(WA)^#m".into(), c.residual(&lhs, &(&wa * &c.wa_core()?))), c.range_inclusion()];
    Ok(CertificateReport::new(SystemId::Thm33.to_string(), residuals, p.tol()))
}

/// `AWX = A(WA)^{#_m}` and `AWXWX = X`.
pub fn check_thm34<R: Real>(p: &WeightedProblem<R>, x: &Matrix<R>) -> Result<CertificateReport> {
    let c = Context::new(p, x)?;
    let xw = x * p.w();
    let lhs = &(&p.aw() * &xw) * x;
    let residuals = vec![c.aw_equation(&c.wa_core()?), ("AWXWX = X".into(), c.residual(&lhs, x))];
    Ok(CertificateReport::new(SystemId::Thm34.to_string(), residuals, p.tol()))
}

/// `X` is the outer inverse of `WAW` with range `R((AW)^k)` and null space
/// `N([(WA)^k]^* (WA)^m P_{(WA)^m})`.
///
/// Both subspaces have dimension `t = rk((AW)^k)`, so each equality is
/// checked as `rk(X) = t` plus one inclusion; the null spaces are compared
/// through the row spaces `R(X^*)` and `R(G^*)`.
pub fn check_outer_inverse<R: Real>(p: &WeightedProblem<R>, x: &Matrix<R>) -> Result<CertificateReport> {
    let c = Context::new(p, x)?;
    let tol = p.tol();
    let aw_k = c.aw_k();
    let t = aw_k.dim();
    let same_rank = rank(x, tol) == t;

    let chain = p.wa_chain();
    let wa = p.wa();
    let g = &(&wa.pow(p.k()).adjoint() * &wa.pow(p.m())) * &chain.projector(p.m());
    let row_space_g = range_basis_with_rank(&g.adjoint(), t);

    let residuals = vec![
        c.outer(),
        ("R(X) = R((AW)^k)".into(), Context::<R>::flag(same_rank && aw_k.contains(x, tol))),
        ("N(X) = N((WA)^k* (WA)^m P)".into(), Context::<R>::flag(same_rank && row_space_g.contains(&x.adjoint(), tol))),
    ];
    Ok(CertificateReport::new(SystemId::Outer.to_string(), residuals, tol))
}

/// The square characterizations of `A^{#_m}`, all checked at once:
/// `XAX = X` with `AX = (A^{⊕†})^m A^m P_{A^m}` and
/// `XA = (A^{⊕†})^{m+1} A^m P_{A^m} A`; `R(X) ⊆ R(A^k)`; `AX² = X`.
pub fn check_square_m_weak_core<R: Real>(
    a: &Matrix<R>,
    m: usize,
    x: &Matrix<R>,
    tol: &Tolerance,
) -> Result<CertificateReport> {
    if !a.is_square() {
        return Err(shape_err("square certificate (A)", (a.rows(), a.rows()), a.shape()));
    }
    if x.shape() != a.shape() {
        return Err(shape_err("square certificate (X)", a.shape(), x.shape()));
    }
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    let scale = x.max_norm().to_f64().max(a.max_norm().to_f64()).max(1.0);
    let res = |l: &Matrix<R>, r: &Matrix<R>| (l - r).max_norm().to_f64() / scale;
    let chain = PowerChain::new(a, tol);
    let cep = core_ep(a, tol)?;
    let right = &a.pow(m) * &chain.projector(m);
    let ax_target = &cep.pow(m) * &right;
    let xa_target = &(&cep.pow(m + 1) * &right) * a;
    let inside = chain.range_of_power(chain.index()).contains(x, tol);

    let residuals = vec![
        ("XAX = X".to_string(), res(&(&(x * a) * x), x)),
        ("AX = (A^cep)^m A^m P_A^m".to_string(), res(&(a * x), &ax_target)),
        ("XA = (A^cep)^(m+1) A^m P_A^m A".to_string(), res(&(x * a), &xa_target)),
        ("R(X) ⊆ R(A^k)".to_string(), if inside { 0.0 } else { 1.0 }),
        ("AX² = X".to_string(), res(&(a * &(x * x)), x)),
    ];
    Ok(CertificateReport::new("square", residuals, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{pinv, ComplexMatrix, DoubleDouble};
    use crate::test_support::*;
    use crate::wgeninv::{w_core_ep, w_drazin, w_m_weak_core};
    use num_complex::Complex;
    use proptest::prelude::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn problem((a, w): (ComplexMatrix, ComplexMatrix), m: usize) -> WeightedProblem {
        WeightedProblem::new(a, w, m, tol()).unwrap()
    }

    fn dd((a, w): (ComplexMatrix, ComplexMatrix), m: usize) -> WeightedProblem<DoubleDouble> {
        WeightedProblem::new(a.cast(), w.cast(), m, tol()).unwrap()
    }

    #[test]
    fn system_ids_round_trip() {
        for id in SystemId::ALL {
            assert_eq!(id.to_string().parse::<SystemId>().unwrap(), id);
        }
        assert!("thm35".parse::<SystemId>().is_err());
    }

    #[test]
    fn fix1_certificates() {
        let p = problem(fix1(), 2);
        let x = w_m_weak_core(&p).unwrap();
        for id in SystemId::ALL {
            let report = id.check(&p, &x).unwrap();
            assert!(report.satisfied, "{report}");
        }
        // A^{d,W} and A^{⊕†,W} differ from A^{#_2,W} here
        let drazin = w_drazin(&p).unwrap();
        assert!(!check_thm32(&p, &drazin).unwrap().satisfied);
        assert!(!check_thm34(&p, &drazin).unwrap().satisfied);
        let cep = w_core_ep(&p).unwrap();
        let outer = check_outer_inverse(&p, &cep).unwrap();
        assert_eq!(outer.failing(), vec!["N(X) = N((WA)^k* (WA)^m P)"]);
    }

    #[test]
    fn zero_candidate_fails_when_the_inverse_is_nonzero() {
        let p = problem(fix2(), 2);
        let zero = ComplexMatrix::zeros(4, 3);
        assert!(!check_thm31(&p, &zero).unwrap().satisfied);
    }

    #[test]
    fn all_zero_system_is_satisfied() {
        let (_, w) = fix1();
        let p = problem((ComplexMatrix::zeros(3, 4), w), 1);
        let zero = ComplexMatrix::zeros(3, 4);
        assert!(check_thm34(&p, &zero).unwrap().satisfied);
        assert!(check_outer_inverse(&p, &zero).unwrap().satisfied);
    }

    #[test]
    fn column_outside_the_range_breaks_inclusion() {
        let p = problem(fix1(), 2);
        let mut x = w_m_weak_core(&p).unwrap();
        // R((AW)^k) is spanned by e_2 for FIX1
        x[(0, 3)] = Complex::new(1.0, 0.0);
        let report = check_thm32(&p, &x).unwrap();
        assert!(report.failing().contains(&"R(X) ⊆ R((AW)^k)"));
    }

    #[test]
    fn large_order_recovers_the_core_ep_system() {
        let p = problem(fix1(), 5);
        assert!(check_thm33(&p, &w_core_ep(&p).unwrap()).unwrap().satisfied);
    }

    #[test]
    fn square_nonsingular_reduction() {
        let a = ComplexMatrix::from_real_rows(&[[2., 1.], [1., 1.]]);
        let p = WeightedProblem::new(a.clone(), ComplexMatrix::identity(2), 1, tol()).unwrap();
        let inv = pinv(&a, &tol());
        assert!(check_thm32(&p, &inv).unwrap().satisfied);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let p = problem(fix1(), 2);
        assert!(matches!(check_thm31(&p, &ComplexMatrix::zeros(4, 3)), Err(Error::Shape { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn soundness_and_discrimination(
            (a, w) in arb_pair(5),
            m in 1usize..4,
            noise in prop::collection::vec(-1.0f64..1.0, 25),
        ) {
            let p = dd((a, w), m);
            let x = w_m_weak_core(&p).unwrap();
            for id in SystemId::ALL {
                let report = id.check(&p, &x).unwrap();
                prop_assert!(report.satisfied, "{}", report);
            }
            let e = ComplexMatrix::from_fn(x.rows(), x.cols(), |i, j| Complex::new(noise[i * 5 + j], 0.0)).cast::<DoubleDouble>();
            prop_assume!(x.max_norm().to_f64() > 0.0 && e.max_norm().to_f64() > 0.1);
            let factor = x.max_norm() * DoubleDouble::from(1e-3) / e.max_norm();
            let perturbed = &x + &e.scale(Complex::new(factor, DoubleDouble::from(0.0)));
            prop_assert!(SystemId::ALL.iter().any(|id| !id.check(&p, &perturbed).unwrap().satisfied));
        }

        #[test]
        fn square_characterizations(a in arb_structured_square(5), m in 1usize..4) {
            let a = a.cast::<DoubleDouble>();
            let x = m_weak_core(&a, m, &tol()).unwrap();
            let report = check_square_m_weak_core(&a, m, &x, &tol()).unwrap();
            prop_assert!(report.satisfied, "{}", report);
        }
    }
}
