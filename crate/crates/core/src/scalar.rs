//! Coefficient rings for Grassmann elements.
//!
//! Everything numeric runs over `Complex<f64>`. The algebraic property suites
//! also run over exact complex rationals so that identities such as
//! multiplicativity of the Berezinian can be checked with zero residual.

use core::fmt::Debug;
use core::ops::Neg;

use num_complex::Complex;
use num_traits::Num;

/// Real coefficient field underlying a complex [`Scalar`].
pub trait Real: Clone + PartialEq + Debug + Num + Neg<Output = Self> {
    /// Lossy conversion used only for pivot selection and diagnostics.
    fn to_f64_lossy(&self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

#[cfg(feature = "exact")]
impl Real for num_rational::BigRational {
    fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Coefficient type of a Grassmann element.
pub trait Scalar: Clone + PartialEq + Debug + Num + Neg<Output = Self> {
    /// Complex conjugate.
    fn conj(&self) -> Self;
    /// A cheap size estimate (`|re| + |im|`), used to choose pivots.
    fn magnitude(&self) -> f64;
}

impl<R: Real> Scalar for Complex<R> {
    #[inline]
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    #[inline]
    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64_lossy();
        let im = self.im.to_f64_lossy();
        libm::fabs(re) + libm::fabs(im)
    }
}

/// Exact complex rationals.
#[cfg(feature = "exact")]
pub type ExactComplex = Complex<num_rational::BigRational>;

/// Builds an exact complex rational from integer real and imaginary parts.
#[cfg(feature = "exact")]
pub fn exact(re: i64, im: i64) -> ExactComplex {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    Complex::new(
        BigRational::from_integer(BigInt::from(re)),
        BigRational::from_integer(BigInt::from(im)),
    )
}
