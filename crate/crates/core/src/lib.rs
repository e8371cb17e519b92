//! The W-weighted m-weak core inverse of rectangular complex matrices and
//! the tower of generalized inverses it is built from.

pub mod decomp;
pub mod error;
pub mod geninv;
pub mod matcore;
pub mod solve;
pub mod verify;
pub mod wgeninv;

#[cfg(test)]
pub(crate) mod test_support;

pub use decomp::{CoreEpFactors, ProductSide, WeightedPairFactors};
pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, DoubleDouble, Matrix, Real, SubspaceBasis, Tolerance};
