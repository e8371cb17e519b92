//! Real scalar types the library can compute in.
//!
//! Everything in this crate is generic over [`Real`]. Two implementations
//! ship: `f64` and [`DoubleDouble`] (a ~106-bit significand built from a pair
//! of `f64`s). The weighted representations take pseudoinverses of high
//! matrix powers, whose singular values spread like `cond^ℓ`; double-double
//! keeps those formulas accurate far past the point where `f64` gives up.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_complex::Complex;
use num_traits::Num;
use twofloat::TwoFloat;

/// Double-double real: an unevaluated sum `hi + lo` of two `f64`s.
///
/// Addition, multiplication and square root come from `twofloat`. Division
/// is done here: `twofloat` forms the reciprocal residual `1 − b·(1/b)`
/// without a fused multiply-add, which leaves quotients with only `f64`
/// accuracy. The replacement refines the quotient with two correction
/// steps computed from exact double-double residuals.
#[derive(Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct DoubleDouble(TwoFloat);

impl DoubleDouble {
    pub fn new(x: f64) -> Self {
        DoubleDouble(TwoFloat::from(x))
    }

    pub fn hi(self) -> f64 {
        self.0.hi()
    }

    pub fn lo(self) -> f64 {
        self.0.lo()
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble::new(x)
    }
}

impl Debug for DoubleDouble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi(), self.lo())
    }
}

impl Display for DoubleDouble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        Display::fmt(&self.0, f)
    }
}

macro_rules! delegate_op {
    ($tr:ident, $method:ident, $atr:ident, $amethod:ident) => {
        impl std::ops::$tr for DoubleDouble {
            type Output = DoubleDouble;
            #[inline]
            fn $method(self, rhs: DoubleDouble) -> DoubleDouble {
                DoubleDouble(std::ops::$tr::$method(self.0, rhs.0))
            }
        }
        impl $atr for DoubleDouble {
            #[inline]
            fn $amethod(&mut self, rhs: DoubleDouble) {
                *self = std::ops::$tr::$method(*self, rhs);
            }
        }
    };
}

delegate_op!(Add, add, AddAssign, add_assign);
delegate_op!(Sub, sub, SubAssign, sub_assign);
delegate_op!(Mul, mul, MulAssign, mul_assign);

impl std::ops::Div for DoubleDouble {
    type Output = DoubleDouble;

    #[inline]
    fn div(self, rhs: DoubleDouble) -> DoubleDouble {
        let (a, b) = (self.0, rhs.0);
        let q1 = a.hi() / b.hi();
        if !q1.is_finite() || q1 == 0.0 {
            return DoubleDouble::new(q1);
        }
        let r = a - b * q1;
        let q2 = r.hi() / b.hi();
        let r = r - b * q2;
        let q3 = r.hi() / b.hi();
        DoubleDouble(TwoFloat::new_add(q1, q2) + q3)
    }
}

impl DivAssign for DoubleDouble {
    #[inline]
    fn div_assign(&mut self, rhs: DoubleDouble) {
        *self = *self / rhs;
    }
}

impl std::ops::Rem for DoubleDouble {
    type Output = DoubleDouble;

    fn rem(self, rhs: DoubleDouble) -> DoubleDouble {
        let quotient = (self / rhs).0.trunc();
        DoubleDouble(self.0 - quotient * rhs.0)
    }
}

impl Neg for DoubleDouble {
    type Output = DoubleDouble;

    #[inline]
    fn neg(self) -> DoubleDouble {
        DoubleDouble(-self.0)
    }
}

impl num_traits::Zero for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble::new(0.0)
    }

    fn is_zero(&self) -> bool {
        self.hi() == 0.0
    }
}

impl num_traits::One for DoubleDouble {
    fn one() -> Self {
        DoubleDouble::new(1.0)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = <TwoFloat as Num>::FromStrRadixErr;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        TwoFloat::from_str_radix(s, radix).map(DoubleDouble)
    }
}

pub trait Real:
    Copy
    + Num
    + Neg<Output = Self>
    + PartialOrd
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Unit roundoff of the type, as an `f64`.
    const EPSILON: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;

    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    const EPSILON: f64 = f64::EPSILON;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

impl Real for DoubleDouble {
    // 2^-104
    const EPSILON: f64 = 4.930380657631324e-32;

    #[inline]
    fn from_f64(x: f64) -> Self {
        DoubleDouble::new(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self.hi() + self.lo()
    }
    #[inline]
    fn sqrt(self) -> Self {
        if self.hi() <= 0.0 {
            return DoubleDouble::new(0.0);
        }
        DoubleDouble(self.0.sqrt())
    }
    #[inline]
    fn abs(self) -> Self {
        DoubleDouble(self.0.abs())
    }
}

/// Modulus `|z|` without the `Float` bound `Complex::norm` wants.
#[inline]
pub fn modulus<R: Real>(z: Complex<R>) -> R {
    let (re, im) = (z.re.abs(), z.im.abs());
    let big = re.max(im);
    if big == R::zero() {
        return big;
    }
    let (a, b) = (re / big, im / big);
    big * (a * a + b * b).sqrt()
}

#[inline]
pub fn cplx<R: Real>(re: f64, im: f64) -> Complex<R> {
    Complex::new(R::from_f64(re), R::from_f64(im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_double_carries_extra_bits() {
        let one = DoubleDouble::from_f64(1.0);
        let tiny = DoubleDouble::from_f64(1e-20);
        let sum = one + tiny;
        assert!(sum - one > DoubleDouble::from_f64(0.0));
        assert_eq!(1.0f64 + 1e-20 - 1.0, 0.0);
    }

    #[test]
    fn modulus_matches_hypot() {
        let z: Complex<f64> = cplx(3.0, -4.0);
        assert_eq!(modulus(z), 5.0);
        let zd: Complex<DoubleDouble> = cplx(3.0, 4.0);
        assert!((modulus(zd).to_f64() - 5.0).abs() < 1e-15);
        assert_eq!(modulus(Complex::<f64>::new(0.0, 0.0)), 0.0);
    }

    #[test]
    fn double_double_division_is_accurate() {
        // (1/3)·3 and 9/9 land within a few units of 2^-104
        let three = DoubleDouble::new(3.0);
        let third = DoubleDouble::new(1.0) / three;
        assert!((third * three - DoubleDouble::new(1.0)).abs().to_f64() < 1e-31);
        let nine = DoubleDouble::new(9.0);
        assert_eq!(nine / nine, DoubleDouble::new(1.0));
        let x = DoubleDouble::new(2.0) / DoubleDouble::new(7.0);
        let y = DoubleDouble::new(0.1) / three;
        assert!(((x / y) * y - x).abs().to_f64() < 1e-31);
        assert!(!(DoubleDouble::new(1.0) / DoubleDouble::new(0.0)).to_f64().is_finite());
    }

    #[test]
    fn double_double_sqrt_is_accurate() {
        let two = DoubleDouble::from_f64(2.0);
        let r = Real::sqrt(two);
        let err = (r * r - two).abs();
        assert!(err.to_f64() < 1e-30);
    }
}
