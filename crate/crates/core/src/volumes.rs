//! Closed-form volumes of superspheres, complex projective superspaces,
//! complex Stiefel and Grassmann supermanifolds and the unitary supergroup.
//!
//! Every volume factors as `g_D · 𝒱`, where `g_D` depends only on the
//! superdimension `D` and the normalized volume `𝒱` is an analytic function
//! of index-type variables such as `z = n − m`.

use core::f64::consts::PI;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_complex::Complex64;

use crate::special::{barnes_g, barnes_g_zero_order, gamma, reciprocal_gamma, AnalyticValue};

/// An element `n|m` of `ℤ[Π]/(Π² − 1)`, written `n + mΠ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SuperDimension {
    pub even: i64,
    pub odd: i64,
}

impl SuperDimension {
    pub const fn new(even: i64, odd: i64) -> Self {
        SuperDimension { even, odd }
    }

    /// `Π = 0|1`.
    pub const PI: SuperDimension = SuperDimension::new(0, 1);

    /// The ring map `n|m ↦ n − m`.
    pub fn index(self) -> i64 {
        self.even - self.odd
    }

    pub fn scale(self, k: i64) -> Self {
        SuperDimension::new(k * self.even, k * self.odd)
    }
}

impl fmt::Display for SuperDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.even, self.odd)
    }
}

impl Add for SuperDimension {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        SuperDimension::new(self.even + rhs.even, self.odd + rhs.odd)
    }
}

impl Sub for SuperDimension {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        SuperDimension::new(self.even - rhs.even, self.odd - rhs.odd)
    }
}

impl Neg for SuperDimension {
    type Output = Self;
    fn neg(self) -> Self {
        SuperDimension::new(-self.even, -self.odd)
    }
}

impl Mul for SuperDimension {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        SuperDimension::new(
            self.even * rhs.even + self.odd * rhs.odd,
            self.even * rhs.odd + self.odd * rhs.even,
        )
    }
}

/// `g_{n|m} = (√π)ⁿ (√2)ᵐ`.
pub fn gaussian_factor(d: SuperDimension) -> f64 {
    libm::pow(PI, d.even as f64 / 2.0) * libm::pow(2.0, d.odd as f64 / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Sphere,
    ComplexProjective,
    Stiefel,
    Grassmannian,
    UnitaryGroup,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Sphere,
        Family::ComplexProjective,
        Family::Stiefel,
        Family::Grassmannian,
        Family::UnitaryGroup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Sphere => "sphere",
            Family::ComplexProjective => "cp",
            Family::Stiefel => "stiefel",
            Family::Grassmannian => "grassmannian",
            Family::UnitaryGroup => "unitary_group",
        }
    }

    /// Whether the family takes the `(r, s)` frame parameters.
    pub fn has_frame(self) -> bool {
        matches!(self, Family::Stiefel | Family::Grassmannian)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = VolumeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .or(match s {
                "unitary" => Some(Family::UnitaryGroup),
                _ => None,
            })
            .ok_or(VolumeError::UnknownFamily)
    }
}

/// Families of normalized analytic volume functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalizedFamily {
    /// `𝒱(S; R, z) = R^z · 2√π / Γ((z+1)/2)`.
    Sphere,
    /// `𝒱(CP; R, z) = R^{2z} / Γ(z+1)`.
    ComplexProjective,
    /// `𝒱(CV; R, z, w) = R^{w(2z−w)} (2√π)^w G(z−w+1)/G(z+1)`.
    Stiefel,
    /// `𝒱(CG; R, z, w) = R^{2w(z−w)} G(w+1) G(z−w+1)/G(z+1)`.
    Grassmannian,
}

impl NormalizedFamily {
    pub fn needs_w(self) -> bool {
        matches!(
            self,
            NormalizedFamily::Stiefel | NormalizedFamily::Grassmannian
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VolumeError {
    InvalidRadius(f64),
    /// `r ≤ n` and `s ≤ m` are violated.
    FrameOutOfRange {
        n: u32,
        m: u32,
        r: u32,
        s: u32,
    },
    UnknownFamily,
    MissingW,
    /// The normalized function has a pole at these arguments.
    Pole,
    /// Numerator and denominator vanish to the same order and no entire
    /// rearrangement applies.
    Indeterminate,
}

impl fmt::Display for VolumeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VolumeError::InvalidRadius(r) => {
                write!(f, "radius must be positive and finite, got {r}")
            }
            VolumeError::FrameOutOfRange { n, m, r, s } => {
                write!(f, "frame {r}|{s} does not fit in {n}|{m}")
            }
            VolumeError::UnknownFamily => f.write_str("unknown family"),
            VolumeError::MissingW => f.write_str("this family needs a second argument w"),
            VolumeError::Pole => f.write_str("pole of the normalized volume"),
            VolumeError::Indeterminate => f.write_str("indeterminate ratio of Barnes G zeros"),
        }
    }
}

impl core::error::Error for VolumeError {}

/// A volume together with its dimension data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeValue {
    pub value: Complex64,
    pub is_exact_zero: bool,
    pub dimension: SuperDimension,
    pub index: i64,
    pub gaussian_factor: f64,
    /// The formula behind this value is not proven.
    pub conjectural: bool,
}

impl VolumeValue {
    fn from_parts(analytic: AnalyticValue, dimension: SuperDimension) -> Self {
        VolumeValue {
            value: analytic.value(),
            is_exact_zero: analytic.is_exact_zero(),
            dimension,
            index: dimension.index(),
            gaussian_factor: gaussian_factor(dimension),
            conjectural: false,
        }
    }

    pub fn normalized_value(&self) -> Complex64 {
        self.value / self.gaussian_factor
    }
}

/// A supermanifold from one of the supported families.
///
/// Sphere `S^{n|2m}` uses `(n, m)`; `CP^{n|m}` is the projectivization of
/// `ℂ^{n+1|m}`; Stiefel and Grassmann use `r|s` frames in `ℂ^{n|m}`;
/// `U(n|m)` uses `(n, m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldSpec {
    pub family: Family,
    pub n: u32,
    pub m: u32,
    pub r: u32,
    pub s: u32,
    pub radius: f64,
}

impl ManifoldSpec {
    pub fn new(
        family: Family,
        n: u32,
        m: u32,
        r: u32,
        s: u32,
        radius: f64,
    ) -> Result<Self, VolumeError> {
        let spec = ManifoldSpec {
            family,
            n,
            m,
            r: if family.has_frame() { r } else { 0 },
            s: if family.has_frame() { s } else { 0 },
            radius,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), VolumeError> {
        check_radius(self.radius)?;
        if self.family.has_frame() {
            check_frame(self.n, self.m, self.r, self.s)?;
        }
        Ok(())
    }

    pub fn with_radius(self, radius: f64) -> Self {
        ManifoldSpec { radius, ..self }
    }
}

fn check_radius(r: f64) -> Result<(), VolumeError> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(VolumeError::InvalidRadius(r))
    }
}

fn check_frame(n: u32, m: u32, r: u32, s: u32) -> Result<(), VolumeError> {
    if r <= n && s <= m {
        Ok(())
    } else {
        Err(VolumeError::FrameOutOfRange { n, m, r, s })
    }
}

fn dim(n: u32, m: u32) -> SuperDimension {
    SuperDimension::new(n as i64, m as i64)
}

pub fn sphere_dimension(n: u32, m: u32) -> SuperDimension {
    dim(n, 2 * m)
}

pub fn cp_dimension(n: u32, m: u32) -> SuperDimension {
    dim(2 * n, 2 * m)
}

/// `(r|s)(2(n|m) − (r|s))`.
pub fn stiefel_dimension(n: u32, m: u32, r: u32, s: u32) -> SuperDimension {
    let frame = dim(r, s);
    frame * (dim(n, m).scale(2) - frame)
}

/// `2(r|s)((n|m) − (r|s))`.
pub fn grassmannian_dimension(n: u32, m: u32, r: u32, s: u32) -> SuperDimension {
    let frame = dim(r, s);
    (frame * (dim(n, m) - frame)).scale(2)
}

/// `(n|m)²`.
pub fn unitary_dimension(n: u32, m: u32) -> SuperDimension {
    dim(n, m) * dim(n, m)
}

pub fn dimension_of(spec: &ManifoldSpec) -> SuperDimension {
    let ManifoldSpec { n, m, r, s, .. } = *spec;
    match spec.family {
        Family::Sphere => sphere_dimension(n, m),
        Family::ComplexProjective => cp_dimension(n, m),
        Family::Stiefel => stiefel_dimension(n, m, r, s),
        Family::Grassmannian => grassmannian_dimension(n, m, r, s),
        Family::UnitaryGroup => unitary_dimension(n, m),
    }
}

pub fn index_of(spec: &ManifoldSpec) -> i64 {
    dimension_of(spec).index()
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `Rᶻ` on the principal branch.
fn radius_pow(radius: f64, z: Complex64) -> Complex64 {
    (z * libm::log(radius)).exp()
}

/// `vol S^{n|2m} = 2 R^{n−2m} π^{(n+1)/2} 2ᵐ / Γ((n+1)/2 − m)`.
pub fn sphere_volume(n: u32, m: u32, radius: f64) -> Result<VolumeValue, VolumeError> {
    check_radius(radius)?;
    let index = n as i32 - 2 * m as i32;
    let prefactor = 2.0
        * libm::pow(radius, index as f64)
        * libm::pow(PI, (n as f64 + 1.0) / 2.0)
        * libm::pow(2.0, m as f64);
    let rg = reciprocal_gamma(real((n as f64 + 1.0) / 2.0 - m as f64));
    Ok(VolumeValue::from_parts(
        rg * prefactor,
        sphere_dimension(n, m),
    ))
}

/// `vol CP^{n|m} = R^{2(n−m)} πⁿ 2ᵐ / Γ(n − m + 1)`.
pub fn cp_volume(n: u32, m: u32, radius: f64) -> Result<VolumeValue, VolumeError> {
    check_radius(radius)?;
    let z = n as f64 - m as f64;
    let prefactor = libm::pow(radius, 2.0 * z) * libm::pow(PI, n as f64) * libm::pow(2.0, m as f64);
    let rg = reciprocal_gamma(real(z + 1.0));
    Ok(VolumeValue::from_parts(rg * prefactor, cp_dimension(n, m)))
}

/// Volume of `V_{r|s}(ℂ^{n|m})`: exact zero when `r > 0` and `s > 0`,
/// `g_D 𝒱(CV; R, n−m, r)` when `s = 0`, and the parity-reversed manifold
/// `V_{s|0}(ℂ^{m|n})` when `r = 0`.
pub fn stiefel_volume(
    n: u32,
    m: u32,
    r: u32,
    s: u32,
    radius: f64,
) -> Result<VolumeValue, VolumeError> {
    check_radius(radius)?;
    check_frame(n, m, r, s)?;
    let dimension = stiefel_dimension(n, m, r, s);
    if r > 0 && s > 0 {
        return Ok(VolumeValue::from_parts(
            AnalyticValue::EXACT_ZERO,
            dimension,
        ));
    }
    if r == 0 && s > 0 {
        return stiefel_volume(m, n, s, 0, radius);
    }
    let z = real(n as f64 - m as f64);
    let normalized = normalized_volume(NormalizedFamily::Stiefel, z, Some(real(r as f64)), radius)?;
    Ok(VolumeValue::from_parts(
        normalized * gaussian_factor(dimension),
        dimension,
    ))
}

/// `vol S^{2n−1|2m} · vol S^{2n−3|2m} ⋯ vol S^{2(n−r)+1|2m}`.
pub fn stiefel_volume_product(
    n: u32,
    m: u32,
    r: u32,
    radius: f64,
) -> Result<VolumeValue, VolumeError> {
    check_radius(radius)?;
    check_frame(n, m, r, 0)?;
    let mut acc = AnalyticValue::ONE;
    for k in 1..=r {
        let sphere = sphere_volume(2 * (n - k) + 1, m, radius)?;
        acc *= if sphere.is_exact_zero {
            AnalyticValue::EXACT_ZERO
        } else {
            AnalyticValue::new(sphere.value)
        };
    }
    Ok(VolumeValue::from_parts(acc, stiefel_dimension(n, m, r, 0)))
}

/// `vol G_{r|s}(ℂ^{n|m}) = g_D 𝒱(CG; R, n−m, r−s)`, which is conjectural.
/// When `r < s` the parity-reversed manifold `G_{s|r}(ℂ^{m|n})` is used.
pub fn grassmannian_volume(
    n: u32,
    m: u32,
    r: u32,
    s: u32,
    radius: f64,
) -> Result<VolumeValue, VolumeError> {
    check_radius(radius)?;
    check_frame(n, m, r, s)?;
    if r < s {
        return grassmannian_volume(m, n, s, r, radius);
    }
    let dimension = grassmannian_dimension(n, m, r, s);
    let z = real(n as f64 - m as f64);
    let w = real(r as f64 - s as f64);
    let normalized = normalized_volume(NormalizedFamily::Grassmannian, z, Some(w), radius)?;
    let mut out = VolumeValue::from_parts(normalized * gaussian_factor(dimension), dimension);
    out.conjectural = true;
    Ok(out)
}

/// `vol U(n|m) = vol V_{n|m}(ℂ^{n|m})`.
pub fn unitary_volume(n: u32, m: u32, radius: f64) -> Result<VolumeValue, VolumeError> {
    stiefel_volume(n, m, n, m, radius)
}

/// Volume of any supported manifold.
pub fn volume(spec: &ManifoldSpec) -> Result<VolumeValue, VolumeError> {
    let ManifoldSpec {
        n, m, r, s, radius, ..
    } = *spec;
    match spec.family {
        Family::Sphere => sphere_volume(n, m, radius),
        Family::ComplexProjective => cp_volume(n, m, radius),
        Family::Stiefel => stiefel_volume(n, m, r, s, radius),
        Family::Grassmannian => grassmannian_volume(n, m, r, s, radius),
        Family::UnitaryGroup => unitary_volume(n, m, radius),
    }
}

/// `Some(k)` when `w` is the non-negative integer `k`.
fn as_natural(w: Complex64) -> Option<u32> {
    crate::special::as_integer(w)
        .filter(|&k| (0..=i64::from(u16::MAX)).contains(&k))
        .map(|k| k as u32)
}

/// `G(z−w+1)/G(z+1)`. For natural `w` this equals the entire product
/// `∏_{k<w} 1/Γ(z−k)`; otherwise zeros of numerator and denominator are
/// counted before dividing.
fn barnes_ratio(z: Complex64, w: Complex64) -> Result<AnalyticValue, VolumeError> {
    if let Some(k) = as_natural(w) {
        return Ok((0..k).map(|j| reciprocal_gamma(z - j as f64)).product());
    }
    let num = z - w + 1.0;
    let den = z + 1.0;
    let (on, od) = (barnes_g_zero_order(num), barnes_g_zero_order(den));
    if on > od {
        return Ok(AnalyticValue::EXACT_ZERO);
    }
    if on < od {
        return Err(VolumeError::Pole);
    }
    if on > 0 {
        // Both arguments are integers, so w is a negative integer:
        // G(z−w+1)/G(z+1) = ∏_{k<−w} Γ(z+1+k).
        let steps = crate::special::as_integer(w)
            .map(|k| -k)
            .ok_or(VolumeError::Indeterminate)?;
        let mut acc = AnalyticValue::ONE;
        for k in 0..steps {
            acc *= gamma(den + k as f64).map_err(|_| VolumeError::Pole)?;
        }
        return Ok(acc);
    }
    Ok(AnalyticValue::new(
        barnes_g(num).value() / barnes_g(den).value(),
    ))
}

/// The normalized volume functions evaluated at complex index variables.
pub fn normalized_volume(
    family: NormalizedFamily,
    z: Complex64,
    w: Option<Complex64>,
    radius: f64,
) -> Result<AnalyticValue, VolumeError> {
    check_radius(radius)?;
    let two_sqrt_pi = 2.0 * libm::sqrt(PI);
    match family {
        NormalizedFamily::Sphere => {
            Ok(reciprocal_gamma((z + 1.0) / 2.0) * (radius_pow(radius, z) * two_sqrt_pi))
        }
        NormalizedFamily::ComplexProjective => {
            Ok(reciprocal_gamma(z + 1.0) * radius_pow(radius, 2.0 * z))
        }
        NormalizedFamily::Stiefel => {
            let w = w.ok_or(VolumeError::MissingW)?;
            let scale = radius_pow(radius, w * (2.0 * z - w)) * (w * libm::log(two_sqrt_pi)).exp();
            Ok(barnes_ratio(z, w)? * scale)
        }
        NormalizedFamily::Grassmannian => {
            let w = w.ok_or(VolumeError::MissingW)?;
            let scale = radius_pow(radius, 2.0 * w * (z - w));
            let gw = barnes_g(w + 1.0);
            let ratio = match barnes_ratio(z, w) {
                // G(w+1) vanishes and the ratio blows up: the product is
                // symmetric under w ↔ z − w, so try the mirrored split.
                Err(VolumeError::Pole) if gw.is_exact_zero() => {
                    let mirrored = z - w;
                    let gm = barnes_g(mirrored + 1.0);
                    if gm.is_exact_zero() {
                        return Err(VolumeError::Indeterminate);
                    }
                    return Ok(gm * barnes_ratio(z, mirrored)? * scale);
                }
                other => other?,
            };
            Ok(gw * ratio * scale)
        }
    }
}
