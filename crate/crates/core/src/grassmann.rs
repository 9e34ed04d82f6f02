//! Finite Grassmann algebras `Λ_N` over the complex numbers.
//!
//! An element is a sparse map from generator subsets to coefficients. Subsets
//! are bitmasks; a mask stands for the product of its generators in ascending
//! index order, so `0b101` is `θ₀θ₂`. Products reorder generators by counting
//! transpositions.
//!
//! Berezin integration follows the normalization
//! `∫ D(θ¹,…,θᵏ) θᵏ⋯θ¹ = 1`, which gives `∫ D(θ¹,θ²) exp(−2θ¹θ²) = 2`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::One;

use crate::scalar::Scalar;

/// Largest supported number of odd generators.
pub const MAX_GENERATORS: usize = 16;

/// Which side an odd derivative acts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Z₂-grading of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    /// Mixed even and odd components.
    Inhomogeneous,
}

impl Parity {
    /// Parity of a product of homogeneous factors; `None` if either factor is
    /// inhomogeneous.
    pub fn combine(self, other: Parity) -> Option<Parity> {
        match (self, other) {
            (Parity::Even, Parity::Even) | (Parity::Odd, Parity::Odd) => Some(Parity::Even),
            (Parity::Even, Parity::Odd) | (Parity::Odd, Parity::Even) => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn from_bit(odd: bool) -> Parity {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// How complex conjugation treats products of odd elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjugationRule {
    /// `(ab)* = a*b*`. With this rule `θθ̄` is imaginary, so `iθθ̄` and
    /// `w·w̄ + iθ·θ̄` are real.
    Preserving,
    /// `(ab)* = b*a*`.
    Reversing,
}

/// Conjugation convention used by the rest of the crate.
pub const CONJUGATION_RULE: ConjugationRule = ConjugationRule::Preserving;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrassmannError {
    TooManyGenerators { requested: usize },
    GeneratorOutOfRange { index: usize, generators: usize },
    MismatchedGenerators { left: usize, right: usize },
    DuplicateGenerator(usize),
    NotEven,
    NotOdd,
    NonInvertible,
    InsufficientDerivatives { needed: usize, supplied: usize },
    UnpairedGenerator(usize),
    InvalidPairing,
}

impl fmt::Display for GrassmannError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrassmannError::TooManyGenerators { requested } => write!(
                f,
                "{requested} generators requested, at most {MAX_GENERATORS} supported"
            ),
            GrassmannError::GeneratorOutOfRange { index, generators } => {
                write!(f, "generator {index} out of range for Λ_{generators}")
            }
            GrassmannError::MismatchedGenerators { left, right } => {
                write!(f, "mismatched algebras Λ_{left} and Λ_{right}")
            }
            GrassmannError::DuplicateGenerator(i) => write!(f, "generator {i} listed twice"),
            GrassmannError::NotEven => f.write_str("element is not even"),
            GrassmannError::NotOdd => f.write_str("element is not odd"),
            GrassmannError::NonInvertible => f.write_str("non-invertible: body is zero"),
            GrassmannError::InsufficientDerivatives { needed, supplied } => write!(
                f,
                "need derivatives up to order {needed}, only {supplied} supplied"
            ),
            GrassmannError::UnpairedGenerator(i) => {
                write!(f, "generator {i} has no conjugation partner")
            }
            GrassmannError::InvalidPairing => f.write_str("pairing is not an involution"),
        }
    }
}

impl core::error::Error for GrassmannError {}

/// A validated generator count `N ≤ MAX_GENERATORS`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generators(u8);

impl Generators {
    pub fn new(n: usize) -> Result<Self, GrassmannError> {
        if n > MAX_GENERATORS {
            return Err(GrassmannError::TooManyGenerators { requested: n });
        }
        Ok(Generators(n as u8))
    }

    #[inline]
    pub fn count(self) -> usize {
        self.0 as usize
    }

    /// Mask with every generator set.
    #[inline]
    pub fn full_mask(self) -> u32 {
        (1u32 << self.0) - 1
    }

    fn check(self, index: usize) -> Result<(), GrassmannError> {
        if index < self.count() {
            Ok(())
        } else {
            Err(GrassmannError::GeneratorOutOfRange {
                index,
                generators: self.count(),
            })
        }
    }
}

/// True when reordering the concatenation `mask_a · mask_b` into ascending
/// order takes an odd number of transpositions.
#[inline]
fn merge_is_odd(mask_a: u32, mask_b: u32) -> bool {
    let mut count = 0u32;
    let mut rest = mask_b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        count += mask_a.checked_shr(j + 1).unwrap_or(0).count_ones();
        rest &= rest - 1;
    }
    count & 1 == 1
}

/// Sign of the permutation sorting `seq` (distinct entries) ascending.
fn sort_sign_is_odd(seq: &[usize]) -> bool {
    let mut inversions = 0usize;
    for (i, a) in seq.iter().enumerate() {
        inversions += seq[i + 1..].iter().filter(|b| *b < a).count();
    }
    inversions & 1 == 1
}

/// An element of `Λ_N`. Terms are kept sorted by mask with no zero
/// coefficients, so structural equality is algebraic equality.
#[derive(Clone, PartialEq)]
pub struct GrassmannElement<S = Complex64> {
    generators: Generators,
    terms: Vec<(u32, S)>,
}

impl<S: Scalar> fmt::Debug for GrassmannElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ{}[", self.generators.count())?;
        for (k, (mask, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c:?})")?;
            let mut m = *mask;
            while m != 0 {
                write!(f, "θ{}", m.trailing_zeros())?;
                m &= m - 1;
            }
        }
        f.write_str("]")
    }
}

impl<S: Scalar> GrassmannElement<S> {
    pub fn zero(generators: Generators) -> Self {
        GrassmannElement {
            generators,
            terms: Vec::new(),
        }
    }

    pub fn one(generators: Generators) -> Self {
        Self::scalar(generators, S::one())
    }

    pub fn scalar(generators: Generators, value: S) -> Self {
        let terms = if value.is_zero() {
            Vec::new()
        } else {
            alloc::vec![(0, value)]
        };
        GrassmannElement { generators, terms }
    }

    /// The generator `θ_index`.
    pub fn generator(generators: Generators, index: usize) -> Result<Self, GrassmannError> {
        generators.check(index)?;
        Ok(GrassmannElement {
            generators,
            terms: alloc::vec![(1u32 << index, S::one())],
        })
    }

    /// The monomial `c·θ_{i₁}⋯θ_{i_k}` with the generators in the given order.
    pub fn monomial(
        generators: Generators,
        indices: &[usize],
        coefficient: S,
    ) -> Result<Self, GrassmannError> {
        let mut mask = 0u32;
        for &i in indices {
            generators.check(i)?;
            if mask & (1 << i) != 0 {
                return Ok(Self::zero(generators));
            }
            mask |= 1 << i;
        }
        let c = if sort_sign_is_odd(indices) {
            -coefficient
        } else {
            coefficient
        };
        Ok(Self::from_sorted(generators, alloc::vec![(mask, c)]))
    }

    /// Builds an element from `(mask, coefficient)` pairs; repeated masks
    /// are summed.
    pub fn from_terms<I>(generators: Generators, terms: I) -> Result<Self, GrassmannError>
    where
        I: IntoIterator<Item = (u32, S)>,
    {
        let full = generators.full_mask();
        let mut raw: Vec<(u32, S)> = Vec::new();
        for (mask, c) in terms {
            if mask & !full != 0 {
                let index = (31 - (mask & !full).leading_zeros()) as usize;
                return Err(GrassmannError::GeneratorOutOfRange {
                    index,
                    generators: generators.count(),
                });
            }
            raw.push((mask, c));
        }
        Ok(Self::from_unsorted(generators, raw))
    }

    fn from_sorted(generators: Generators, mut terms: Vec<(u32, S)>) -> Self {
        terms.retain(|(_, c)| !c.is_zero());
        GrassmannElement { generators, terms }
    }

    fn from_unsorted(generators: Generators, mut raw: Vec<(u32, S)>) -> Self {
        raw.sort_unstable_by_key(|(m, _)| *m);
        let mut terms: Vec<(u32, S)> = Vec::with_capacity(raw.len());
        for (mask, c) in raw {
            match terms.last_mut() {
                Some((last, acc)) if *last == mask => *acc = acc.clone() + c,
                _ => terms.push((mask, c)),
            }
        }
        Self::from_sorted(generators, terms)
    }

    #[inline]
    pub fn generators(&self) -> Generators {
        self.generators
    }

    #[inline]
    pub fn num_generators(&self) -> usize {
        self.generators.count()
    }

    /// Nonzero terms in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &S)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, mask: u32) -> S {
        match self.terms.binary_search_by_key(&mask, |(m, _)| *m) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the empty monomial.
    pub fn body(&self) -> S {
        match self.terms.first() {
            Some((0, c)) => c.clone(),
            _ => S::zero(),
        }
    }

    /// Everything except the body.
    pub fn soul(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| *m != 0)
            .cloned()
            .collect();
        GrassmannElement {
            generators: self.generators,
            terms,
        }
    }

    pub fn body_soul(&self) -> (S, Self) {
        (self.body(), self.soul())
    }

    /// Parity of the element; zero counts as even.
    pub fn parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for (m, _) in &self.terms {
            if m.count_ones() & 1 == 1 {
                odd = true;
            } else {
                even = true;
            }
        }
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Inhomogeneous,
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn is_odd(&self) -> bool {
        self.is_zero() || self.parity() == Parity::Odd
    }

    /// Projection onto the even or odd component.
    pub fn component(&self, parity_odd: bool) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| (m.count_ones() & 1 == 1) == parity_odd)
            .cloned()
            .collect();
        GrassmannElement {
            generators: self.generators,
            terms,
        }
    }

    pub fn scale(&self, factor: &S) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, c.clone() * factor.clone()))
            .collect();
        Self::from_sorted(self.generators, terms)
    }

    fn ensure_same(&self, other: &Self) -> Result<(), GrassmannError> {
        if self.generators == other.generators {
            Ok(())
        } else {
            Err(GrassmannError::MismatchedGenerators {
                left: self.num_generators(),
                right: other.num_generators(),
            })
        }
    }

    fn merge_with(&self, other: &Self, negate_other: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        let take_b = |c: &S| if negate_other { -c.clone() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                core::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push((b[j].0, take_b(&b[j].1)));
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1.clone() + take_b(&b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, c)| (*m, take_b(c))));
        Self::from_sorted(self.generators, out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, GrassmannError> {
        self.ensure_same(other)?;
        Ok(self.merge_with(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, GrassmannError> {
        self.ensure_same(other)?;
        Ok(self.merge_with(other, true))
    }

    /// Supercommutative product.
    pub fn product(&self, other: &Self) -> Result<Self, GrassmannError> {
        self.ensure_same(other)?;
        Ok(self.product_unchecked(other))
    }

    fn product_unchecked(&self, other: &Self) -> Self {
        if self.terms.is_empty() || other.terms.is_empty() {
            return Self::zero(self.generators);
        }
        if other.terms.len() == 1 && other.terms[0].0 == 0 {
            return self.scale(&other.terms[0].1);
        }
        if self.terms.len() == 1 && self.terms[0].0 == 0 {
            return other.scale(&self.terms[0].1);
        }
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let c = ca.clone() * cb.clone();
                let c = if merge_is_odd(*ma, *mb) { -c } else { c };
                raw.push((ma | mb, c));
            }
        }
        Self::from_unsorted(self.generators, raw)
    }

    /// `self^k` with `self^0 = 1`.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.generators);
        for _ in 0..k {
            acc = acc.product_unchecked(self);
        }
        acc
    }

    /// Evaluates `f(self)` from the Taylor coefficients `f(x₀), f′(x₀), …`
    /// at `x₀ = body(self)`. The series terminates because the soul is
    /// nilpotent, so the result is exact.
    pub fn taylor_lift(&self, derivatives: &[S]) -> Result<Self, GrassmannError> {
        if !self.is_even() {
            return Err(GrassmannError::NotEven);
        }
        let soul = self.soul();
        let mut result = Self::zero(self.generators);
        let mut power = Self::one(self.generators);
        let mut factorial = S::one();
        let mut j = 0usize;
        loop {
            if power.is_zero() {
                return Ok(result);
            }
            let Some(d) = derivatives.get(j) else {
                return Err(GrassmannError::InsufficientDerivatives {
                    needed: self.nilpotency_order() + 1,
                    supplied: derivatives.len(),
                });
            };
            result = result.merge_with(&power.scale(&(d.clone() / factorial.clone())), false);
            j += 1;
            factorial = factorial * Self::small_integer(j);
            power = power.product_unchecked(&soul);
        }
    }

    fn small_integer(k: usize) -> S {
        let mut acc = S::zero();
        for _ in 0..k {
            acc = acc + S::one();
        }
        acc
    }

    /// Smallest `k` with `soul^(k+1) = 0`.
    pub fn nilpotency_order(&self) -> usize {
        let soul = self.soul();
        let mut power = soul.clone();
        let mut k = 0;
        while !power.is_zero() {
            k += 1;
            power = power.product_unchecked(&soul);
        }
        k
    }

    /// Left or right derivative with respect to the odd generator `index`.
    pub fn odd_derivative(&self, index: usize, side: Side) -> Result<Self, GrassmannError> {
        self.generators.check(index)?;
        Ok(self.odd_derivative_unchecked(index, side))
    }

    fn odd_derivative_unchecked(&self, index: usize, side: Side) -> Self {
        let bit = 1u32 << index;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m & bit != 0)
            .map(|(m, c)| {
                let passed = match side {
                    Side::Left => m & (bit - 1),
                    Side::Right => m.checked_shr(index as u32 + 1).unwrap_or(0),
                };
                let c = if passed.count_ones() & 1 == 1 {
                    -c.clone()
                } else {
                    c.clone()
                };
                (m & !bit, c)
            })
            .collect();
        GrassmannElement {
            generators: self.generators,
            terms,
        }
    }

    /// Berezin integral `∫ D(θ_{g₁},…,θ_{g_k})`: picks the coefficient of
    /// `θ_{g_k}⋯θ_{g₁}` and leaves an element in the remaining generators.
    pub fn berezin_integrate(&self, generators: &[usize]) -> Result<Self, GrassmannError> {
        let mut seen = 0u32;
        for &g in generators {
            self.generators.check(g)?;
            if seen & (1 << g) != 0 {
                return Err(GrassmannError::DuplicateGenerator(g));
            }
            seen |= 1 << g;
        }
        let mut acc = self.clone();
        for &g in generators.iter().rev() {
            acc = acc.odd_derivative_unchecked(g, Side::Left);
        }
        Ok(acc)
    }

    /// Exact inverse of an element with invertible body.
    pub fn even_inverse(&self) -> Result<Self, GrassmannError> {
        let body = self.body();
        if body.is_zero() {
            return Err(GrassmannError::NonInvertible);
        }
        let inv_body = S::one() / body;
        // a⁻¹ = b⁻¹ Σ (−s/b)^j, terminating by nilpotency.
        let step = self.soul().scale(&(-inv_body.clone()));
        let mut result = Self::zero(self.generators);
        let mut power = Self::one(self.generators);
        while !power.is_zero() {
            result = result.merge_with(&power, false);
            power = power.product_unchecked(&step);
        }
        Ok(result.scale(&inv_body))
    }

    /// Complex conjugation swapping each generator with its partner.
    pub fn conjugate(
        &self,
        pairing: &Pairing,
        rule: ConjugationRule,
    ) -> Result<Self, GrassmannError> {
        if pairing.generators != self.generators {
            return Err(GrassmannError::MismatchedGenerators {
                left: self.num_generators(),
                right: pairing.generators.count(),
            });
        }
        let mut raw = Vec::with_capacity(self.terms.len());
        let mut images: Vec<usize> = Vec::with_capacity(MAX_GENERATORS);
        for (mask, c) in &self.terms {
            images.clear();
            let mut m = *mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                images.push(pairing.partner(i)?);
                m &= m - 1;
            }
            if rule == ConjugationRule::Reversing {
                images.reverse();
            }
            let image_mask = images.iter().fold(0u32, |acc, i| acc | (1 << i));
            let c = c.conj();
            let c = if sort_sign_is_odd(&images) { -c } else { c };
            raw.push((image_mask, c));
        }
        Ok(Self::from_unsorted(self.generators, raw))
    }

    /// Conjugates coefficients only; this is conjugation when every
    /// generator is real.
    pub fn conjugate_coefficients(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (*m, c.conj())).collect();
        GrassmannElement {
            generators: self.generators,
            terms,
        }
    }

    /// Algebra homomorphism sending `θ_i ↦ images[i]`. Images must be odd
    /// so that anticommutation relations are respected.
    pub fn substitute(&self, images: &[Self]) -> Result<Self, GrassmannError> {
        if images.len() != self.num_generators() {
            return Err(GrassmannError::MismatchedGenerators {
                left: self.num_generators(),
                right: images.len(),
            });
        }
        let target = images
            .first()
            .map(|e| e.generators)
            .unwrap_or(self.generators);
        for img in images {
            if img.generators != target {
                return Err(GrassmannError::MismatchedGenerators {
                    left: target.count(),
                    right: img.num_generators(),
                });
            }
            if !img.is_odd() {
                return Err(GrassmannError::NotOdd);
            }
        }
        let mut result = GrassmannElement::zero(target);
        for (mask, c) in &self.terms {
            let mut term = GrassmannElement::scalar(target, c.clone());
            let mut m = *mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                term = term.product_unchecked(&images[i]);
                m &= m - 1;
            }
            result = result.merge_with(&term, false);
        }
        Ok(result)
    }

    /// Re-embeds the element into `Λ_target`, which must contain every
    /// generator in use.
    pub fn embed(&self, target: Generators) -> Result<Self, GrassmannError> {
        let full = target.full_mask();
        if let Some((m, _)) = self.terms.iter().find(|(m, _)| m & !full != 0) {
            let index = (31 - (m & !full).leading_zeros()) as usize;
            return Err(GrassmannError::GeneratorOutOfRange {
                index,
                generators: target.count(),
            });
        }
        Ok(GrassmannElement {
            generators: target,
            terms: self.terms.clone(),
        })
    }
}

impl GrassmannElement<Complex64> {
    /// `f(self)` where `derivatives(x₀, k)` returns `f(x₀), …, f⁽ᵏ⁾(x₀)`.
    pub fn lift_with<F>(&self, derivatives: F) -> Result<Self, GrassmannError>
    where
        F: FnOnce(Complex64, usize) -> Vec<Complex64>,
    {
        let order = self.num_generators() / 2;
        let derivs = derivatives(self.body(), order);
        self.taylor_lift(&derivs)
    }

    /// `self^p` on the principal branch at the body.
    pub fn powc(&self, p: Complex64) -> Result<Self, GrassmannError> {
        self.lift_with(|x0, k| {
            let mut out = Vec::with_capacity(k + 1);
            let mut coeff = Complex64::one();
            for j in 0..=k {
                out.push(coeff * x0.powc(p - j as f64));
                coeff *= p - j as f64;
            }
            out
        })
    }

    pub fn sqrt(&self) -> Result<Self, GrassmannError> {
        self.powc(Complex64::new(0.5, 0.0))
    }

    pub fn exp(&self) -> Result<Self, GrassmannError> {
        self.lift_with(|x0, k| alloc::vec![x0.exp(); k + 1])
    }

    pub fn cos(&self) -> Result<Self, GrassmannError> {
        self.lift_with(|x0, k| {
            let (s, c) = (x0.sin(), x0.cos());
            (0..=k).map(|j| [c, -s, -c, s][j % 4]).collect()
        })
    }

    pub fn sin(&self) -> Result<Self, GrassmannError> {
        self.lift_with(|x0, k| {
            let (s, c) = (x0.sin(), x0.cos());
            (0..=k).map(|j| [s, c, -s, -c][j % 4]).collect()
        })
    }

    /// Largest coefficient modulus.
    pub fn max_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise difference; `∞` for mismatched algebras.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        match self.try_sub(other) {
            Ok(d) => d.max_norm(),
            Err(_) => f64::INFINITY,
        }
    }
}

/// Pairing of generators into conjugate partners `θ ↔ θ̄`. A generator
/// paired with itself is real.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    generators: Generators,
    partner: Vec<Option<usize>>,
}

impl Pairing {
    pub fn new(generators: Generators, pairs: &[(usize, usize)]) -> Result<Self, GrassmannError> {
        let mut partner = alloc::vec![None; generators.count()];
        for &(a, b) in pairs {
            generators.check(a)?;
            generators.check(b)?;
            if partner[a].is_some() || partner[b].is_some() {
                return Err(GrassmannError::InvalidPairing);
            }
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        Ok(Pairing {
            generators,
            partner,
        })
    }

    /// Every generator real.
    pub fn real(generators: Generators) -> Self {
        Pairing {
            generators,
            partner: (0..generators.count()).map(Some).collect(),
        }
    }

    pub fn partner(&self, index: usize) -> Result<usize, GrassmannError> {
        self.partner
            .get(index)
            .copied()
            .flatten()
            .ok_or(GrassmannError::UnpairedGenerator(index))
    }
}

impl<S: Scalar> Add for GrassmannElement<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<S: Scalar> Add for &GrassmannElement<S> {
    type Output = GrassmannElement<S>;
    /// Panics on mismatched algebras; use [`GrassmannElement::try_add`] to
    /// handle that case.
    fn add(self, rhs: Self) -> GrassmannElement<S> {
        self.try_add(rhs)
            .expect("adding elements of different algebras")
    }
}

impl<S: Scalar> AddAssign<&GrassmannElement<S>> for GrassmannElement<S> {
    fn add_assign(&mut self, rhs: &GrassmannElement<S>) {
        *self = &*self + rhs;
    }
}

impl<S: Scalar> Sub for GrassmannElement<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<S: Scalar> Sub for &GrassmannElement<S> {
    type Output = GrassmannElement<S>;
    fn sub(self, rhs: Self) -> GrassmannElement<S> {
        self.try_sub(rhs)
            .expect("subtracting elements of different algebras")
    }
}

impl<S: Scalar> SubAssign<&GrassmannElement<S>> for GrassmannElement<S> {
    fn sub_assign(&mut self, rhs: &GrassmannElement<S>) {
        *self = &*self - rhs;
    }
}

impl<S: Scalar> Mul for GrassmannElement<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<S: Scalar> Mul for &GrassmannElement<S> {
    type Output = GrassmannElement<S>;
    /// Panics on mismatched algebras; use [`GrassmannElement::product`] to
    /// handle that case.
    fn mul(self, rhs: Self) -> GrassmannElement<S> {
        self.product(rhs)
            .expect("multiplying elements of different algebras")
    }
}

impl<S: Scalar> Neg for GrassmannElement<S> {
    type Output = Self;
    fn neg(self) -> Self {
        -&self
    }
}

impl<S: Scalar> Neg for &GrassmannElement<S> {
    type Output = GrassmannElement<S>;
    fn neg(self) -> GrassmannElement<S> {
        GrassmannElement {
            generators: self.generators,
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    type E = GrassmannElement;

    fn g(n: usize) -> Generators {
        Generators::new(n).unwrap()
    }

    fn th(n: usize, i: usize) -> E {
        E::generator(g(n), i).unwrap()
    }

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn nilpotent_and_anticommuting() {
        let t1 = th(2, 0);
        let t2 = th(2, 1);
        assert!((&t1 * &t1).is_zero());
        let t12 = E::from_terms(g(2), [(0b11, c(1.0, 0.0))]).unwrap();
        assert_eq!(&t1 * &t2, t12);
        assert_eq!(&t2 * &t1, -t12);
    }

    #[test]
    fn one_plus_pair_times_one_minus_pair() {
        let p = &th(2, 0) * &th(2, 1);
        let one = E::one(g(2));
        assert_eq!(&(&one + &p) * &(&one - &p), one);
    }

    #[test]
    fn body_soul_examples() {
        let a = E::from_terms(g(2), [(0, c(3.0, 0.0)), (0b11, c(2.0, 0.0))]).unwrap();
        let (b, s) = a.body_soul();
        assert_eq!(b, c(3.0, 0.0));
        assert_eq!(s, E::from_terms(g(2), [(0b11, c(2.0, 0.0))]).unwrap());
        let (b, s) = E::zero(g(2)).body_soul();
        assert_eq!(b, c(0.0, 0.0));
        assert!(s.is_zero());
        let (b, s) = th(2, 0).body_soul();
        assert_eq!(b, c(0.0, 0.0));
        assert_eq!(s, th(2, 0));
    }

    #[test]
    fn mismatched_algebras_rejected() {
        assert_eq!(
            th(2, 0).product(&th(3, 0)),
            Err(GrassmannError::MismatchedGenerators { left: 2, right: 3 })
        );
        assert!(Generators::new(17).is_err());
        assert!(E::generator(g(2), 2).is_err());
    }

    #[test]
    fn taylor_lift_examples() {
        // 1/x at 1 applied to 1 + iθθ̄
        let n = g(2);
        let tt = E::monomial(n, &[0, 1], c(0.0, 1.0)).unwrap();
        let a = &E::one(n) + &tt;
        let inv = a
            .taylor_lift(&[c(1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)])
            .unwrap();
        assert_eq!(inv, &E::one(n) - &tt);

        let four = E::scalar(n, c(4.0, 0.0));
        assert_eq!(
            four.taylor_lift(&[c(2.0, 0.0)]).unwrap(),
            E::scalar(n, c(2.0, 0.0))
        );

        let pair = &th(2, 0) * &th(2, 1);
        let e = pair.taylor_lift(&[c(1.0, 0.0); 3]).unwrap();
        assert_eq!(e, &E::one(n) + &pair);
    }

    #[test]
    fn taylor_lift_errors() {
        assert_eq!(
            th(2, 0).taylor_lift(&[c(1.0, 0.0)]),
            Err(GrassmannError::NotEven)
        );
        let pair = &th(2, 0) * &th(2, 1);
        assert!(matches!(
            pair.taylor_lift(&[c(1.0, 0.0)]),
            Err(GrassmannError::InsufficientDerivatives {
                needed: 2,
                supplied: 1
            })
        ));
    }

    #[test]
    fn berezin_examples() {
        let n = g(1);
        let f = &E::scalar(n, c(2.0, 0.0)) + &E::monomial(n, &[0], c(5.0, 0.0)).unwrap();
        assert_eq!(
            f.berezin_integrate(&[0]).unwrap(),
            E::scalar(n, c(5.0, 0.0))
        );
        assert!(E::one(n).berezin_integrate(&[0]).unwrap().is_zero());

        let n2 = g(2);
        let gauss = E::monomial(n2, &[0, 1], c(-2.0, 0.0))
            .unwrap()
            .exp()
            .unwrap();
        assert_eq!(
            gauss.berezin_integrate(&[0, 1]).unwrap(),
            E::scalar(n2, c(2.0, 0.0))
        );

        // normalization: ∫D(θ¹,θ²) θ²θ¹ = 1
        let top = E::monomial(n2, &[1, 0], c(1.0, 0.0)).unwrap();
        assert_eq!(top.berezin_integrate(&[0, 1]).unwrap(), E::one(n2));
        assert_eq!(
            top.berezin_integrate(&[0, 0]),
            Err(GrassmannError::DuplicateGenerator(0))
        );
    }

    #[test]
    fn odd_derivative_examples() {
        let t = th(2, 0);
        assert_eq!(t.odd_derivative(0, Side::Left).unwrap(), E::one(g(2)));
        assert!(E::scalar(g(2), c(3.0, 0.0))
            .odd_derivative(0, Side::Left)
            .unwrap()
            .is_zero());
        let t2t1 = E::monomial(g(2), &[1, 0], c(1.0, 0.0)).unwrap();
        assert_eq!(t2t1.odd_derivative(0, Side::Left).unwrap(), -th(2, 1));
        assert_eq!(t2t1.odd_derivative(0, Side::Right).unwrap(), th(2, 1));
    }

    #[test]
    fn even_inverse_examples() {
        let n = g(2);
        let tt = E::monomial(n, &[0, 1], c(0.0, 1.0)).unwrap();
        let a = &E::one(n) + &tt;
        assert_eq!(a.even_inverse().unwrap(), &E::one(n) - &tt);
        assert_eq!(
            E::scalar(n, c(2.0, 0.0)).even_inverse().unwrap(),
            E::scalar(n, c(0.5, 0.0))
        );
        let pair = &th(2, 0) * &th(2, 1);
        assert_eq!(pair.even_inverse(), Err(GrassmannError::NonInvertible));
    }

    #[test]
    fn conjugation_convention() {
        let n = g(2);
        let pairing = Pairing::new(n, &[(0, 1)]).unwrap();
        let theta = th(2, 0);
        assert_eq!(
            theta.conjugate(&pairing, CONJUGATION_RULE).unwrap(),
            th(2, 1)
        );

        let i_tt = E::monomial(n, &[0, 1], c(0.0, 1.0)).unwrap();
        assert_eq!(
            i_tt.conjugate(&pairing, ConjugationRule::Preserving)
                .unwrap(),
            i_tt
        );
        assert_eq!(
            i_tt.conjugate(&pairing, ConjugationRule::Reversing)
                .unwrap(),
            -&i_tt
        );

        let a = &(&E::scalar(n, c(1.0, 2.0)) + &th(2, 1)) + &i_tt.scale(&c(0.5, -3.0));
        for rule in [ConjugationRule::Preserving, ConjugationRule::Reversing] {
            let twice = a
                .conjugate(&pairing, rule)
                .unwrap()
                .conjugate(&pairing, rule)
                .unwrap();
            assert_eq!(twice, a);
        }

        let unpaired = Pairing::new(g(2), &[]).unwrap();
        assert_eq!(
            theta.conjugate(&unpaired, CONJUGATION_RULE),
            Err(GrassmannError::UnpairedGenerator(0))
        );
        assert_eq!(
            Pairing::new(g(3), &[(0, 1), (1, 2)]),
            Err(GrassmannError::InvalidPairing)
        );
    }

    #[test]
    fn real_odd_pair_metric_term_is_real() {
        // θ = ξ + iη gives iθθ̄ = 2ξη, real under the preserving rule.
        let n = g(2);
        let xi = th(2, 0);
        let eta = th(2, 1);
        let theta = &xi + &eta.scale(&c(0.0, 1.0));
        let theta_bar = theta
            .conjugate(&Pairing::real(n), CONJUGATION_RULE)
            .unwrap();
        assert_eq!(theta_bar, &xi - &eta.scale(&c(0.0, 1.0)));
        let term = (&theta * &theta_bar).scale(&c(0.0, 1.0));
        assert_eq!(term, (&xi * &eta).scale(&c(2.0, 0.0)));
        assert_eq!(
            term.conjugate(&Pairing::real(n), CONJUGATION_RULE).unwrap(),
            term
        );
    }

    #[test]
    fn substitution_is_a_homomorphism() {
        let n = g(3);
        let a = E::from_terms(n, [(0b011, c(1.0, 0.5)), (0b100, c(2.0, 0.0))]).unwrap();
        let b = E::from_terms(n, [(0, c(0.5, 0.0)), (0b101, c(-1.0, 1.0))]).unwrap();
        let images = [
            &th(3, 1) + &th(3, 2),
            th(3, 0).scale(&c(2.0, 0.0)),
            &th(3, 2) - &th(3, 0),
        ];
        let lhs = (&a * &b).substitute(&images).unwrap();
        let rhs = &a.substitute(&images).unwrap() * &b.substitute(&images).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
        assert_eq!(
            a.substitute(&[E::one(n), th(3, 0), th(3, 1)]),
            Err(GrassmannError::NotOdd)
        );
    }

    #[test]
    fn parity_of_products() {
        let odd = th(3, 0);
        let even = &E::one(g(3)) + &(&th(3, 1) * &th(3, 2));
        assert_eq!(odd.parity(), Parity::Odd);
        assert_eq!(even.parity(), Parity::Even);
        assert_eq!((&odd + &even).parity(), Parity::Inhomogeneous);
        assert_eq!(
            (&odd * &even).parity(),
            odd.parity().combine(even.parity()).unwrap()
        );
        assert_eq!(E::zero(g(3)).parity(), Parity::Even);
    }

    #[test]
    fn analytic_lifts() {
        let n = g(2);
        let pair = &th(2, 0) * &th(2, 1);
        let x = &E::scalar(n, c(0.3, 0.0)) + &pair;
        let s = x.sin().unwrap();
        let co = x.cos().unwrap();
        let one = &(&s * &s) + &(&co * &co);
        assert!(one.max_abs_diff(&E::one(n)) < 1e-15);
        let r = E::scalar(n, c(4.0, 0.0)) + pair.clone();
        let root = r.sqrt().unwrap();
        assert!((&root * &root).max_abs_diff(&r) < 1e-15);
    }
}
