//! General solutions of the linear equations solved by `A^{#_m,W}`.
//!
//! Each solver returns the distinguished particular solution, the factor
//! that maps a free parameter into the homogeneous part, and the residual of
//! the assembled solution measured on the original equation.

use std::fmt;
use std::str::FromStr;

use crate::error::{shape_err, Error, Result};
use crate::matcore::{pinv_with_rank, Matrix, Real};
use crate::wgeninv::{w_m_weak_core, w_m_weak_group, WeightedProblem};

/// The three solvable equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Equation {
    /// `[(WA)^k]^* (WA)^{m+1} W x = [(WA)^k]^* (WA)^{2m} [(WA)^m]^† b`
    RightNormal,
    /// `G WAW x = G b` with `G = [(WA)^k]^* (WA)^{2m} [(WA)^m]^†`
    RightProjected,
    /// `X W (AW)^{k+1} = B (AW)^k`
    LeftPower,
}

impl Equation {
    pub const ALL: [Equation; 3] = [Self::RightNormal, Self::RightProjected, Self::LeftPower];

    fn label(self) -> &'static str {
        match self {
            Self::RightNormal => "right-normal",
            Self::RightProjected => "right-projected",
            Self::LeftPower => "left-power",
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|e| e.label() == s).ok_or_else(|| Error::UnknownVariant(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult<R: Real = f64> {
    pub equation: Equation,
    /// `A^{#_m,W} b`, or `B A^{#_m,W}` for the left equation.
    pub particular: Matrix<R>,
    /// `H` with general solution `particular + H y`, or `particular + Y H`
    /// for the left equation.
    pub homogeneous_projector: Matrix<R>,
    /// The solution assembled from the given parameter (zero by default).
    pub solution: Matrix<R>,
    /// Scale-relative residual of `solution` in the original equation.
    pub residual: f64,
    /// The solution that lies in `R((AW)^k)`, when the equation has one.
    pub unique_in_range: Option<Matrix<R>>,
}

impl<R: Real> SolveResult<R> {
    /// Scale-relative distance from `candidate` to the family
    /// `particular + H y` (or `particular + Y H`). `H` is idempotent, so the
    /// best parameter is `candidate − particular` itself.
    pub fn parametrization_residual(&self, candidate: &Matrix<R>) -> Result<f64> {
        if candidate.shape() != self.particular.shape() {
            return Err(shape_err("candidate solution", self.particular.shape(), candidate.shape()));
        }
        let diff = candidate - &self.particular;
        let h = &self.homogeneous_projector;
        let reached = match self.equation {
            Equation::LeftPower => &diff * h,
            _ => h * &diff,
        };
        let scale = candidate.max_norm().to_f64().max(self.particular.max_norm().to_f64()).max(1.0);
        Ok((&reached - &diff).max_norm().to_f64() / scale)
    }
}

/// Left operator and right-hand side of a right-acting equation.
pub fn right_equation<R: Real>(
    p: &WeightedProblem<R>,
    equation: Equation,
    b: &Matrix<R>,
) -> Result<(Matrix<R>, Matrix<R>)> {
    let (m, k) = (p.m(), p.k());
    let wa = p.wa();
    let chain = p.wa_chain();
    let head = wa.pow(k).adjoint();
    let g = &(&head * &wa.pow(2 * m)) * &pinv_with_rank(&wa.pow(m), chain.rank_of_power(m));
    let op = match equation {
        Equation::RightNormal => &(&head * &wa.pow(m + 1)) * p.w(),
        Equation::RightProjected => &g * &p.waw(),
        Equation::LeftPower => return Err(Error::UnknownVariant(equation.to_string())),
    };
    Ok((op, &g * b))
}

/// `[(WA)^k]^* (WA)^{m+1} W x = [(WA)^k]^* (WA)^{2m} [(WA)^m]^† b`, solved by
/// `x = A^{#_m,W} b + (I_p − A^{ⓦ_m,W} WAW) y`.
pub fn solve_right_normal<R: Real>(
    p: &WeightedProblem<R>,
    b: &Matrix<R>,
    y: Option<&Matrix<R>>,
) -> Result<SolveResult<R>> {
    let h = Matrix::identity(p.shape().0) - &(&w_m_weak_group(p)? * &p.waw());
    solve_right(p, Equation::RightNormal, b, y, h)
}

/// `G WAW x = G b` for `G = [(WA)^k]^* (WA)^{2m} [(WA)^m]^†`, solved by
/// `x = A^{#_m,W} b + (I_p − A^{#_m,W} WAW) y`.
pub fn solve_right_projected<R: Real>(
    p: &WeightedProblem<R>,
    b: &Matrix<R>,
    y: Option<&Matrix<R>>,
) -> Result<SolveResult<R>> {
    let h = Matrix::identity(p.shape().0) - &(&w_m_weak_core(p)? * &p.waw());
    solve_right(p, Equation::RightProjected, b, y, h)
}

fn solve_right<R: Real>(
    p: &WeightedProblem<R>,
    equation: Equation,
    b: &Matrix<R>,
    y: Option<&Matrix<R>>,
    h: Matrix<R>,
) -> Result<SolveResult<R>> {
    let (rows, cols) = p.shape();
    if b.shape() != (cols, 1) {
        return Err(shape_err("right-hand side b", (cols, 1), b.shape()));
    }
    if let Some(y) = y {
        if y.shape() != (rows, 1) {
            return Err(shape_err("parameter y", (rows, 1), y.shape()));
        }
    }
    let particular = &w_m_weak_core(p)? * b;
    let solution = match y {
        Some(y) => &particular + &(&h * y),
        None => particular.clone(),
    };
    let (op, rhs) = right_equation(p, equation, b)?;
    let residual = relative_residual(&(&op * &solution), &rhs, op.max_norm().to_f64() * solution.max_norm().to_f64());
    check(equation, residual, p)?;
    let in_range = p.aw_chain().range_of_power(p.k()).contains(&particular, p.tol());
    Ok(SolveResult {
        equation,
        unique_in_range: in_range.then(|| particular.clone()),
        particular,
        homogeneous_projector: h,
        solution,
        residual,
    })
}

/// `X W (AW)^{k+1} = B (AW)^k`, solved by
/// `X = B A^{#_m,W} + Y (I_n − WAW A^{#_m,W})` with `Y` of size `p×n`.
pub fn solve_left_power<R: Real>(
    p: &WeightedProblem<R>,
    b: &Matrix<R>,
    y: Option<&Matrix<R>>,
) -> Result<SolveResult<R>> {
    let (rows, cols) = p.shape();
    if b.shape() != (rows, rows) {
        return Err(shape_err("right-hand side B", (rows, rows), b.shape()));
    }
    if let Some(y) = y {
        if y.shape() != (rows, cols) {
            return Err(shape_err("parameter Y", (rows, cols), y.shape()));
        }
    }
    let x = w_m_weak_core(p)?;
    let h = Matrix::identity(cols) - &(&p.waw() * &x);
    let particular = b * &x;
    let solution = match y {
        Some(y) => &particular + &(y * &h),
        None => particular.clone(),
    };
    let aw_k = p.aw().pow(p.k());
    let right = &(p.w() * &p.aw()) * &aw_k;
    let rhs = b * &aw_k;
    let scale = solution.max_norm().to_f64() * right.max_norm().to_f64();
    let residual = relative_residual(&(&solution * &right), &rhs, scale);
    check(Equation::LeftPower, residual, p)?;
    Ok(SolveResult {
        equation: Equation::LeftPower,
        particular,
        homogeneous_projector: h,
        solution,
        residual,
        unique_in_range: None,
    })
}

fn relative_residual<R: Real>(lhs: &Matrix<R>, rhs: &Matrix<R>, lhs_scale: f64) -> f64 {
    let scale = lhs_scale.max(rhs.max_norm().to_f64()).max(1.0);
    (lhs - rhs).max_norm().to_f64() / scale
}

fn check<R: Real>(equation: Equation, residual: f64, p: &WeightedProblem<R>) -> Result<()> {
    let tol = p.tol().eq_atol;
    if residual > tol {
        return Err(Error::Residual { equation: equation.label(), residual, tol });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geninv::m_weak_core;
    use crate::matcore::{rank, svd, ComplexMatrix, DoubleDouble, Tolerance};
    use crate::test_support::*;
    use num_complex::Complex;
    use proptest::prelude::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn problem((a, w): (ComplexMatrix, ComplexMatrix), m: usize) -> WeightedProblem {
        WeightedProblem::new(a, w, m, tol()).unwrap()
    }

    fn vector(v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::column_vector(v)
    }

    #[test]
    fn equation_names_round_trip() {
        for e in Equation::ALL {
            assert_eq!(e.to_string().parse::<Equation>().unwrap(), e);
        }
        assert!("left".parse::<Equation>().is_err());
    }

    #[test]
    fn zero_right_hand_side() {
        let p = problem(fix1(), 2);
        let y = vector(&[1., -2., 3.]);
        let r = solve_right_normal(&p, &ComplexMatrix::zeros(4, 1), Some(&y)).unwrap();
        assert_eq!(r.particular.max_norm(), 0.0);
        let (op, _) = right_equation(&p, Equation::RightNormal, &ComplexMatrix::zeros(4, 1)).unwrap();
        assert!((&op * &r.solution).max_norm() < 1e-12);
        let r = solve_right_projected(&p, &ComplexMatrix::zeros(4, 1), None).unwrap();
        assert_eq!(r.particular.max_norm(), 0.0);
    }

    #[test]
    fn fix1_right_normal() {
        let p = problem(fix1(), 2);
        let r = solve_right_normal(&p, &ComplexMatrix::unit_vector(4, 1), Some(&vector(&[0.3, -1.2, 2.5]))).unwrap();
        assert!(r.residual < 1e-9);
        assert!(r.unique_in_range.is_some());
    }

    #[test]
    fn right_hand_side_in_the_power_range() {
        // for b ∈ R((WA)^m) the right side is [(WA)^k]^* (WA)^m b
        let p = problem(fix1(), 2);
        let wa = p.wa();
        let b = &wa.pow(2) * &vector(&[1., 2., -1., 0.5]);
        let r = solve_right_normal(&p, &b, None).unwrap();
        let (op, _) = right_equation(&p, Equation::RightNormal, &b).unwrap();
        let rhs = &(&wa.pow(p.k()).adjoint() * &wa.pow(2)) * &b;
        assert!((&(&op * &r.solution) - &rhs).max_norm() < 1e-9);
    }

    #[test]
    fn fix2_right_projected_with_two_parameters() {
        let p = problem(fix2(), 2);
        let b = ComplexMatrix::unit_vector(3, 0);
        let r1 = solve_right_projected(&p, &b, Some(&vector(&[1., 0., -1., 2.]))).unwrap();
        let r2 = solve_right_projected(&p, &b, Some(&vector(&[-3., 1., 0.5, 0.]))).unwrap();
        assert!(r1.residual < 1e-9 && r2.residual < 1e-9);
        let (op, _) = right_equation(&p, Equation::RightProjected, &b).unwrap();
        assert!((&op * &(&r1.solution - &r2.solution)).max_norm() < 1e-9);
    }

    #[test]
    fn fix3_left_power() {
        let p = problem(fix2(), 2);
        let b = fix3_b();
        let r = solve_left_power(&p, &b, None).unwrap();
        let expected_x = ComplexMatrix::from_real_rows(&[[2., 0., 0.], [1., 0., 0.], [0., 0., 0.], [0., 0., 0.]]);
        assert!((&r.particular - &expected_x).max_norm() < 1e-12);
        let product = &(&r.solution * p.w()) * &p.aw().pow(p.k() + 1);
        let expected =
            ComplexMatrix::from_real_rows(&[[2., 0., 4., 4.], [1., 0., 2., 2.], [0., 0., 0., 0.], [0., 0., 0., 0.]]);
        assert!((&product - &expected).max_norm() < 1e-9);
        assert!((&(&b * &p.aw().pow(p.k())) - &expected).max_norm() < 1e-12);
    }

    #[test]
    fn fix3_free_parameter_pattern() {
        let p = problem(fix2(), 2);
        let y = ComplexMatrix::from_fn(4, 3, |i, j| Complex::new((3 * i + j) as f64 + 0.5, 0.0));
        let r = solve_left_power(&p, &fix3_b(), Some(&y)).unwrap();
        let h = ComplexMatrix::from_real_rows(&[[0., 0., 0.], [0., 1., 0.], [0., 0., 1.]]);
        assert!((&r.homogeneous_projector - &h).max_norm() < 1e-12);
        for i in 0..4 {
            let first = if i == 0 {
                2.0
            } else if i == 1 {
                1.0
            } else {
                0.0
            };
            assert!((r.solution[(i, 0)] - Complex::new(first, 0.0)).norm() < 1e-12);
            for j in 1..3 {
                assert!((r.solution[(i, j)] - y[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_b_left() {
        let p = problem(fix2(), 2);
        let y = ComplexMatrix::from_fn(4, 3, |i, j| Complex::new(i as f64 - j as f64, 1.0));
        let r = solve_left_power(&p, &ComplexMatrix::zeros(4, 4), Some(&y)).unwrap();
        assert_eq!(r.particular.max_norm(), 0.0);
        let product = &(&r.solution * p.w()) * &p.aw().pow(p.k() + 1);
        assert!(product.max_norm() < 1e-12);
    }

    #[test]
    fn shape_errors() {
        let p = problem(fix1(), 2);
        assert!(matches!(solve_right_normal(&p, &vector(&[1., 2.]), None), Err(Error::Shape { .. })));
        assert!(matches!(solve_left_power(&p, &ComplexMatrix::zeros(3, 4), None), Err(Error::Shape { .. })));
        let y = ComplexMatrix::zeros(3, 3);
        assert!(matches!(solve_left_power(&p, &ComplexMatrix::zeros(3, 3), Some(&y)), Err(Error::Shape { .. })));
    }

    // orthogonal projector onto N(op), from an SVD independent of the solver
    fn null_projector(op: &Matrix<DoubleDouble>, dim: usize) -> Matrix<DoubleDouble> {
        let f = svd(&op.adjoint());
        let r = f.count_above(f.largest() * DoubleDouble::from(1e-20));
        let row_space = f.u.columns(0, r);
        Matrix::identity(dim) - &(&row_space * &row_space.adjoint())
    }

    fn to_dd(v: &[f64], rows: usize, cols: usize) -> Matrix<DoubleDouble> {
        ComplexMatrix::from_fn(rows, cols, |i, j| Complex::new(v[(i * cols + j) % v.len()], 0.0)).cast()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn completeness_and_uniqueness(
            (a, w) in arb_pair(5),
            m in 1usize..4,
            v in prop::collection::vec(-2.0f64..2.0, 25),
        ) {
            let p = WeightedProblem::new(a.cast::<DoubleDouble>(), w.cast::<DoubleDouble>(), m, tol()).unwrap();
            let (rows, cols) = p.shape();
            let b = to_dd(&v, cols, 1);
            for eq in [Equation::RightNormal, Equation::RightProjected] {
                let solve = if eq == Equation::RightNormal { solve_right_normal } else { solve_right_projected };
                let r = solve(&p, &b, Some(&to_dd(&v[3..], rows, 1))).unwrap();
                prop_assert!(r.residual <= 1e-9);
                // any solution, built from the null space of the operator
                let (op, _) = right_equation(&p, eq, &b).unwrap();
                let other = &r.particular + &(&null_projector(&op, rows) * &to_dd(&v[7..], rows, 1));
                prop_assert!(r.parametrization_residual(&other).unwrap() <= 1e-9);
                // uniqueness in R((AW)^k): the operator is injective there
                prop_assert!(r.unique_in_range.is_some());
                let basis = p.aw_chain().range_of_power(p.k()).matrix().clone();
                prop_assert_eq!(rank(&(&op * &basis), &Tolerance::new(1e-24, 1e-9)), basis.cols());
                prop_assert!((&r.homogeneous_projector * &basis).max_norm().to_f64() <= 1e-20 * r.homogeneous_projector.max_norm().to_f64().max(1.0));
            }
            let bb = to_dd(&v, rows, rows);
            let r = solve_left_power(&p, &bb, Some(&to_dd(&v[5..], rows, cols))).unwrap();
            prop_assert!(r.residual <= 1e-9);
            let right = &(p.w() * &p.aw()) * &p.aw().pow(p.k());
            let null_left = null_projector(&right.adjoint(), cols);
            let other = &r.particular + &(&to_dd(&v[2..], rows, cols) * &null_left);
            prop_assert!(r.parametrization_residual(&other).unwrap() <= 1e-9);
        }

        #[test]
        fn square_reductions(a in arb_structured_square(5), m in 1usize..4, v in prop::collection::vec(-2.0f64..2.0, 25)) {
            let a = a.cast::<DoubleDouble>();
            let n = a.rows();
            let p = WeightedProblem::new(a.clone(), Matrix::identity(n), m, tol()).unwrap();
            let core = m_weak_core(&a, m, &tol()).unwrap();
            let b = to_dd(&v, n, 1);
            let r = solve_right_normal(&p, &b, None).unwrap();
            prop_assert!((&r.particular - &(&core * &b)).max_norm().to_f64() <= 1e-9 * (1.0 + core.max_norm().to_f64()));
            let k = p.k();
            let pinv_m = crate::matcore::pinv(&a.pow(m), &tol());
            let lhs = &(&a.pow(k).adjoint() * &a.pow(m + 1)) * &r.particular;
            let rhs = &(&(&a.pow(k).adjoint() * &a.pow(2 * m)) * &pinv_m) * &b;
            prop_assert!((&lhs - &rhs).max_norm().to_f64() <= 1e-9 * (1.0 + rhs.max_norm().to_f64() + lhs.max_norm().to_f64()));
            let bb = to_dd(&v, n, n);
            let left = solve_left_power(&p, &bb, None).unwrap();
            let lhs = &left.particular * &a.pow(k + 1);
            let rhs = &bb * &a.pow(k);
            prop_assert!((&lhs - &rhs).max_norm().to_f64() <= 1e-9 * (1.0 + rhs.max_norm().to_f64()));
        }
    }
}
