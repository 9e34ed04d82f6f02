//! Complex Gamma, reciprocal Gamma, log-Gamma and Barnes G.
//!
//! Γ uses a Lanczos approximation (g = 7, nine terms) evaluated in log space
//! on `Re z ≥ 1/2` and the reflection formula elsewhere. `log Γ` uses the
//! Stirling series pulled back by the recurrence so that it lands on the
//! branch continuous on `ℂ \ (−∞, 0]` and real on the positive axis. Barnes G
//! uses its own asymptotic series pulled back by `G(z+1) = G(z) Γ(z)`.

use core::f64::consts::PI;
use core::fmt;
use core::ops::{Mul, MulAssign};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpecialError {
    /// `z` is a non-positive integer.
    Pole { z: Complex64 },
    /// Double factorial of a negative even integer.
    NegativeEvenDoubleFactorial { n: i64 },
}

impl fmt::Display for SpecialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialError::Pole { z } => write!(f, "pole of Gamma at {z}"),
            SpecialError::NegativeEvenDoubleFactorial { n } => {
                write!(f, "double factorial undefined at {n}")
            }
        }
    }
}

impl core::error::Error for SpecialError {}

/// A complex value that remembers whether it is an exact zero produced by a
/// zero of an entire function (1/Γ or G) at an integer argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticValue {
    value: Complex64,
    is_exact_zero: bool,
}

impl AnalyticValue {
    pub const EXACT_ZERO: AnalyticValue = AnalyticValue {
        value: Complex64::new(0.0, 0.0),
        is_exact_zero: true,
    };

    pub const ONE: AnalyticValue = AnalyticValue {
        value: Complex64::new(1.0, 0.0),
        is_exact_zero: false,
    };

    /// An ordinary (possibly numerically zero) value.
    pub fn new(value: Complex64) -> Self {
        AnalyticValue {
            value,
            is_exact_zero: false,
        }
    }

    pub fn real(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0))
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        self.value
    }

    #[inline]
    pub fn is_exact_zero(&self) -> bool {
        self.is_exact_zero
    }
}

impl From<Complex64> for AnalyticValue {
    fn from(value: Complex64) -> Self {
        AnalyticValue::new(value)
    }
}

impl Mul for AnalyticValue {
    type Output = AnalyticValue;

    fn mul(self, rhs: AnalyticValue) -> AnalyticValue {
        if self.is_exact_zero || rhs.is_exact_zero {
            AnalyticValue::EXACT_ZERO
        } else {
            AnalyticValue::new(self.value * rhs.value)
        }
    }
}

impl Mul<Complex64> for AnalyticValue {
    type Output = AnalyticValue;

    fn mul(self, rhs: Complex64) -> AnalyticValue {
        self * AnalyticValue::new(rhs)
    }
}

impl Mul<f64> for AnalyticValue {
    type Output = AnalyticValue;

    fn mul(self, rhs: f64) -> AnalyticValue {
        self * AnalyticValue::real(rhs)
    }
}

impl MulAssign for AnalyticValue {
    fn mul_assign(&mut self, rhs: AnalyticValue) {
        *self = *self * rhs;
    }
}

impl core::iter::Product for AnalyticValue {
    fn product<I: Iterator<Item = AnalyticValue>>(iter: I) -> Self {
        iter.fold(AnalyticValue::ONE, Mul::mul)
    }
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `ζ'(−1)`.
#[allow(clippy::excessive_precision)]
const ZETA_PRIME_MINUS_ONE: f64 = -0.165_421_143_700_450_929_213_919_660_243;

/// B₂, B₄, …, B₂₂.
const BERNOULLI_EVEN: [f64; 11] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
];

/// Below this modulus the asymptotic series are pulled back by recurrence.
const ASYMPTOTIC_THRESHOLD: f64 = 16.0;

/// `Some(n)` when `z` is exactly the integer `n`.
pub fn as_integer(z: Complex64) -> Option<i64> {
    (z.im == 0.0 && z.re == libm::round(z.re) && libm::fabs(z.re) < 9.0e15).then_some(z.re as i64)
}

fn is_pole(z: Complex64) -> bool {
    matches!(as_integer(z), Some(n) if n <= 0)
}

fn factorial(n: u64) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `log Γ(z)` on `Re z ≥ 1/2` from the Lanczos sum. Only `exp` of this is
/// meaningful; the imaginary part may differ from the principal branch by
/// a multiple of 2π.
fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let x = z - 1.0;
    let mut t = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        t += c / (x + i as f64);
    }
    let w = x + LANCZOS_G + 0.5;
    (x + 0.5) * w.ln() - w + t.ln() + HALF_LN_2PI
}

/// `sin(π z)` with exact zeros at integers.
fn sin_pi(z: Complex64) -> Complex64 {
    if as_integer(z).is_some() {
        return Complex64::new(0.0, 0.0);
    }
    // Reduce the real part modulo 2 to keep the argument small.
    let r = z.re - 2.0 * libm::floor(z.re / 2.0);
    (Complex64::new(r, z.im) * PI).sin()
}

/// The Gamma function.
pub fn gamma(z: Complex64) -> Result<AnalyticValue, SpecialError> {
    if let Some(n) = as_integer(z) {
        if n <= 0 {
            return Err(SpecialError::Pole { z });
        }
        if n <= 171 {
            return Ok(AnalyticValue::real(factorial(n as u64 - 1)));
        }
    }
    if z.re >= 0.5 {
        Ok(AnalyticValue::new(lanczos_ln_gamma(z).exp()))
    } else {
        let w = 1.0 - z;
        let denom = sin_pi(z) * lanczos_ln_gamma(w).exp();
        Ok(AnalyticValue::new(PI / denom))
    }
}

/// `1/Γ(z)`, an entire function; exact zero at non-positive integers.
pub fn reciprocal_gamma(z: Complex64) -> AnalyticValue {
    if let Some(n) = as_integer(z) {
        if n <= 0 {
            return AnalyticValue::EXACT_ZERO;
        }
        if n <= 171 {
            return AnalyticValue::real(1.0 / factorial(n as u64 - 1));
        }
    }
    if z.re >= 0.5 {
        AnalyticValue::new((-lanczos_ln_gamma(z)).exp())
    } else {
        let w = 1.0 - z;
        AnalyticValue::new(sin_pi(z) * lanczos_ln_gamma(w).exp() / PI)
    }
}

/// Stirling series for `log Γ(z)`, valid for large `|z|` off the negative axis.
fn stirling_ln_gamma(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, &b) in BERNOULLI_EVEN.iter().enumerate().take(10) {
        let k = (k + 1) as f64;
        sum += pow * (b / (2.0 * k * (2.0 * k - 1.0)));
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + sum
}

/// `log Γ(z)` on the branch continuous on `ℂ \ (−∞, 0]` and real for `z > 0`.
/// On the negative real axis the branch is the limit from above.
pub fn log_gamma(z: Complex64) -> Result<Complex64, SpecialError> {
    if is_pole(z) {
        return Err(SpecialError::Pole { z });
    }
    if let Some(n) = as_integer(z) {
        if n <= 171 {
            return Ok(Complex64::new(libm::log(factorial(n as u64 - 1)), 0.0));
        }
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < ASYMPTOTIC_THRESHOLD || w.re < 0.0 {
        shift += principal_ln(w);
        w += 1.0;
    }
    Ok(stirling_ln_gamma(w) - shift)
}

/// Principal logarithm with the negative real axis mapped to `+iπ`.
fn principal_ln(w: Complex64) -> Complex64 {
    if w.im == 0.0 && w.re < 0.0 {
        Complex64::new(libm::log(-w.re), PI)
    } else {
        w.ln()
    }
}

/// `log G(z + 1)` for large `|z|`.
fn barnes_asymptotic(z: Complex64) -> Complex64 {
    let ln_z = z.ln();
    let z2 = z * z;
    let inv2 = (z2).inv();
    let mut pow = inv2;
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, &b) in BERNOULLI_EVEN.iter().enumerate().skip(1).take(9) {
        // term k uses B_{2k+2} / (4k(k+1) z^{2k})
        let kf = k as f64;
        sum += pow * (b / (4.0 * kf * (kf + 1.0)));
        pow *= inv2;
    }
    z2 * 0.5 * ln_z - z2 * 0.75 + z * HALF_LN_2PI - ln_z / 12.0 + ZETA_PRIME_MINUS_ONE + sum
}

/// Barnes G: `G(1) = 1`, `G(z+1) = G(z) Γ(z)`. Exact zero at non-positive
/// integers.
pub fn barnes_g(z: Complex64) -> AnalyticValue {
    if let Some(n) = as_integer(z) {
        if n <= 0 {
            return AnalyticValue::EXACT_ZERO;
        }
        if n <= 60 {
            let mut g = 1.0;
            let mut fact = 1.0;
            for k in 1..n - 1 {
                fact *= k as f64;
                g *= fact;
            }
            return AnalyticValue::real(g);
        }
    }
    // log G(z) = log G(z + M) − Σ_{k<M} log Γ(z + k)
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while (w - 1.0).norm() < ASYMPTOTIC_THRESHOLD || w.re < 1.0 {
        let lg = if w.re >= 0.5 {
            lanczos_ln_gamma(w)
        } else {
            log_gamma(w).expect("non-integer argument")
        };
        shift += lg;
        w += 1.0;
    }
    AnalyticValue::new((barnes_asymptotic(w - 1.0) - shift).exp())
}

/// Order of the zero of `1/Γ` at `z` (1 at non-positive integers, else 0).
pub fn reciprocal_gamma_zero_order(z: Complex64) -> u32 {
    u32::from(is_pole(z))
}

/// Order of the zero of `G` at `z`: `k + 1` at `z = −k`, else 0.
pub fn barnes_g_zero_order(z: Complex64) -> u32 {
    match as_integer(z) {
        Some(n) if n <= 0 => (1 - n) as u32,
        _ => 0,
    }
}

/// `n!!` for integers `n ≥ −1` and negative odd `n`, via
/// `n!! = 2^{n/2} (2/π)^{(1 − cos πn)/4} Γ(n/2 + 1)`.
pub fn double_factorial(n: i64) -> Result<f64, SpecialError> {
    if n < -1 && n % 2 == 0 {
        return Err(SpecialError::NegativeEvenDoubleFactorial { n });
    }
    if (-1..=40).contains(&n) {
        let mut acc = 1.0;
        let mut k = n;
        while k > 1 {
            acc *= k as f64;
            k -= 2;
        }
        return Ok(acc);
    }
    let half = n as f64 / 2.0;
    let g = gamma(Complex64::new(half + 1.0, 0.0))?.value().re;
    let odd_factor = if n % 2 == 0 {
        1.0
    } else {
        libm::sqrt(2.0 / PI)
    };
    Ok(libm::pow(2.0, half) * odd_factor * g)
}
