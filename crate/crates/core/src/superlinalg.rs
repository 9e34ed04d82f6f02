//! Square block supermatrices over a Grassmann algebra and the Berezinian.
//!
//! A `(p|q)` supermatrix has rows and columns split into `p` even and `q`
//! odd positions:
//!
//! ```text
//!     ⎡ A  B ⎤   A: p×p   B: p×q
//!     ⎣ C  D ⎦   C: q×p   D: q×q
//! ```
//!
//! An even supermatrix has even entries in `A` and `D` and odd entries in
//! `B` and `C`. Odd supermatrices (such as `∂g/∂θ`) swap those parities and
//! are supported for products only.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::grassmann::{Generators, GrassmannElement, GrassmannError, Parity};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    WrongEntryCount {
        expected: usize,
        found: usize,
    },
    ParityViolation {
        row: usize,
        col: usize,
    },
    NotEven,
    /// The numeric body of a block that must be inverted is singular.
    NonInvertible,
    /// Neither diagonal block has an invertible body.
    NoInvertibleBlock,
    NonPositiveBody,
    Grassmann(GrassmannError),
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::ShapeMismatch { left, right } => write!(
                f,
                "shape mismatch: ({}|{}) vs ({}|{})",
                left.0, left.1, right.0, right.1
            ),
            LinalgError::WrongEntryCount { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            LinalgError::ParityViolation { row, col } => {
                write!(f, "entry ({row}, {col}) has the wrong parity")
            }
            LinalgError::NotEven => f.write_str("supermatrix is not even"),
            LinalgError::NonInvertible => f.write_str("non-invertible: singular body"),
            LinalgError::NoInvertibleBlock => {
                f.write_str("no diagonal block with an invertible body")
            }
            LinalgError::NonPositiveBody => f.write_str("Berezinian body is not positive"),
            LinalgError::Grassmann(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for LinalgError {}

impl From<GrassmannError> for LinalgError {
    fn from(e: GrassmannError) -> Self {
        LinalgError::Grassmann(e)
    }
}

type Elem<S> = GrassmannElement<S>;

/// Dense row-major matrix of Grassmann elements with no parity constraint.
#[derive(Clone, PartialEq)]
struct Dense<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<Elem<S>>,
}

impl<S: Scalar> Dense<S> {
    fn zeros(rows: usize, cols: usize, gens: Generators) -> Self {
        Dense {
            rows,
            cols,
            data: alloc::vec![Elem::zero(gens); rows * cols],
        }
    }

    fn identity(n: usize, gens: Generators) -> Self {
        let mut m = Self::zeros(n, n, gens);
        for i in 0..n {
            m.data[i * n + i] = Elem::one(gens);
        }
        m
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> &Elem<S> {
        &self.data[i * self.cols + j]
    }

    fn mul(&self, other: &Self, gens: Generators) -> Self {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Option<Elem<S>> = None;
                for k in 0..self.cols {
                    let term = self.at(i, k) * other.at(k, j);
                    acc = Some(match acc {
                        Some(a) => &a + &term,
                        None => term,
                    });
                }
                out.push(acc.unwrap_or_else(|| Elem::zero(gens)));
            }
        }
        Dense {
            rows: self.rows,
            cols: other.cols,
            data: out,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        Dense {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn neg(&self) -> Self {
        Dense {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    fn pivot_row(&self, col: usize, from: usize) -> Option<usize> {
        (from..self.rows)
            .filter(|&r| !self.at(r, col).body().is_zero())
            .max_by(|&a, &b| {
                let ma = self.at(a, col).body().magnitude();
                let mb = self.at(b, col).body().magnitude();
                ma.partial_cmp(&mb).unwrap_or(core::cmp::Ordering::Equal)
            })
    }

    /// Determinant of a square matrix with mutually commuting (even)
    /// entries. Elimination uses pivots with invertible body; when the body
    /// is singular the determinant is nilpotent and is obtained by cofactor
    /// expansion instead.
    fn det(&self, gens: Generators) -> Result<Elem<S>, GrassmannError> {
        let n = self.rows;
        if n == 0 {
            return Ok(Elem::one(gens));
        }
        let mut m = self.clone();
        let mut det = Elem::one(gens);
        for k in 0..n {
            let Some(p) = m.pivot_row(k, k) else {
                return Ok(self.det_cofactor(gens));
            };
            if p != k {
                for j in 0..n {
                    m.data.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = m.at(k, k).clone();
            let inv = pivot.even_inverse()?;
            det = &det * &pivot;
            for i in k + 1..n {
                let factor = m.at(i, k) * &inv;
                if factor.is_zero() {
                    continue;
                }
                for j in k..n {
                    let update = &factor * m.at(k, j);
                    m.data[i * n + j] = m.at(i, j) - &update;
                }
            }
        }
        Ok(det)
    }

    fn det_cofactor(&self, gens: Generators) -> Elem<S> {
        let n = self.rows;
        if n == 0 {
            return Elem::one(gens);
        }
        if n == 1 {
            return self.data[0].clone();
        }
        let mut acc = Elem::zero(gens);
        for j in 0..n {
            let entry = self.at(0, j);
            if entry.is_zero() {
                continue;
            }
            let mut minor = Dense {
                rows: n - 1,
                cols: n - 1,
                data: Vec::with_capacity((n - 1) * (n - 1)),
            };
            for r in 1..n {
                for c in (0..n).filter(|&c| c != j) {
                    minor.data.push(self.at(r, c).clone());
                }
            }
            let term = entry * &minor.det_cofactor(gens);
            acc = if j % 2 == 0 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        acc
    }

    /// Gauss-Jordan inverse of a square matrix with even entries.
    fn inverse(&self, gens: Generators) -> Result<Self, LinalgError> {
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n, gens);
        for k in 0..n {
            let p = m.pivot_row(k, k).ok_or(LinalgError::NonInvertible)?;
            if p != k {
                for j in 0..n {
                    m.data.swap(k * n + j, p * n + j);
                    inv.data.swap(k * n + j, p * n + j);
                }
            }
            let pivot_inv = m.at(k, k).even_inverse()?;
            for j in 0..n {
                m.data[k * n + j] = &pivot_inv * m.at(k, j);
                inv.data[k * n + j] = &pivot_inv * inv.at(k, j);
            }
            for i in (0..n).filter(|&i| i != k) {
                let factor = m.at(i, k).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let um = &factor * m.at(k, j);
                    let ui = &factor * inv.at(k, j);
                    m.data[i * n + j] = m.at(i, j) - &um;
                    inv.data[i * n + j] = inv.at(i, j) - &ui;
                }
            }
        }
        Ok(inv)
    }
}

/// Square `(p|q)×(p|q)` supermatrix.
#[derive(Clone, PartialEq)]
pub struct SuperMatrix<S: Scalar = Complex64> {
    even_dim: usize,
    odd_dim: usize,
    generators: Generators,
    parity: Parity,
    entries: Vec<Elem<S>>,
}

impl<S: Scalar> fmt::Debug for SuperMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "SuperMatrix({}|{}, {:?}) [",
            self.even_dim, self.odd_dim, self.parity
        )?;
        let n = self.size();
        for i in 0..n {
            write!(f, "  ")?;
            for j in 0..n {
                write!(f, "{:?}  ", self.entries[i * n + j])?;
            }
            writeln!(f)?;
        }
        f.write_str("]")
    }
}

impl<S: Scalar> SuperMatrix<S> {
    /// Builds an even supermatrix from row-major entries, checking that every
    /// entry has the parity its block requires.
    pub fn new(
        even_dim: usize,
        odd_dim: usize,
        generators: Generators,
        entries: Vec<Elem<S>>,
    ) -> Result<Self, LinalgError> {
        Self::with_parity(even_dim, odd_dim, generators, Parity::Even, entries)
    }

    /// Builds an even or odd supermatrix.
    pub fn with_parity(
        even_dim: usize,
        odd_dim: usize,
        generators: Generators,
        parity: Parity,
        entries: Vec<Elem<S>>,
    ) -> Result<Self, LinalgError> {
        let n = even_dim + odd_dim;
        if entries.len() != n * n {
            return Err(LinalgError::WrongEntryCount {
                expected: n * n,
                found: entries.len(),
            });
        }
        let shift = match parity {
            Parity::Even => false,
            Parity::Odd => true,
            Parity::Inhomogeneous => return Err(LinalgError::NotEven),
        };
        for i in 0..n {
            for j in 0..n {
                let e = &entries[i * n + j];
                if e.generators() != generators {
                    return Err(GrassmannError::MismatchedGenerators {
                        left: generators.count(),
                        right: e.num_generators(),
                    }
                    .into());
                }
                let want_odd = ((i >= even_dim) ^ (j >= even_dim)) ^ shift;
                let ok = if want_odd { e.is_odd() } else { e.is_even() };
                if !ok {
                    return Err(LinalgError::ParityViolation { row: i, col: j });
                }
            }
        }
        Ok(SuperMatrix {
            even_dim,
            odd_dim,
            generators,
            parity,
            entries,
        })
    }

    pub fn identity(even_dim: usize, odd_dim: usize, generators: Generators) -> Self {
        let d = Dense::identity(even_dim + odd_dim, generators);
        SuperMatrix {
            even_dim,
            odd_dim,
            generators,
            parity: Parity::Even,
            entries: d.data,
        }
    }

    /// Diagonal matrix with numeric entries.
    pub fn diagonal(generators: Generators, even: &[S], odd: &[S]) -> Self {
        let n = even.len() + odd.len();
        let mut entries = alloc::vec![Elem::zero(generators); n * n];
        for (i, v) in even.iter().chain(odd).enumerate() {
            entries[i * n + i] = Elem::scalar(generators, v.clone());
        }
        SuperMatrix {
            even_dim: even.len(),
            odd_dim: odd.len(),
            generators,
            parity: Parity::Even,
            entries,
        }
    }

    /// Assembles `[[A, B], [C, D]]` from row-major blocks.
    pub fn from_blocks(
        even_dim: usize,
        odd_dim: usize,
        generators: Generators,
        a: Vec<Elem<S>>,
        b: Vec<Elem<S>>,
        c: Vec<Elem<S>>,
        d: Vec<Elem<S>>,
    ) -> Result<Self, LinalgError> {
        let (p, q) = (even_dim, odd_dim);
        for (block, expected) in [(&a, p * p), (&b, p * q), (&c, q * p), (&d, q * q)] {
            if block.len() != expected {
                return Err(LinalgError::WrongEntryCount {
                    expected,
                    found: block.len(),
                });
            }
        }
        let n = p + q;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = match (i < p, j < p) {
                    (true, true) => &a[i * p + j],
                    (true, false) => &b[i * q + (j - p)],
                    (false, true) => &c[(i - p) * p + j],
                    (false, false) => &d[(i - p) * q + (j - p)],
                };
                entries.push(e.clone());
            }
        }
        Self::new(p, q, generators, entries)
    }

    #[inline]
    pub fn even_dim(&self) -> usize {
        self.even_dim
    }

    #[inline]
    pub fn odd_dim(&self) -> usize {
        self.odd_dim
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.even_dim + self.odd_dim
    }

    pub fn generators(&self) -> Generators {
        self.generators
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn get(&self, row: usize, col: usize) -> &Elem<S> {
        &self.entries[row * self.size() + col]
    }

    pub fn entries(&self) -> &[Elem<S>] {
        &self.entries
    }

    /// Row parity: `false` for the first `p` rows.
    #[inline]
    pub fn index_is_odd(&self, index: usize) -> bool {
        index >= self.even_dim
    }

    fn block(&self, rows: core::ops::Range<usize>, cols: core::ops::Range<usize>) -> Dense<S> {
        let n = self.size();
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for i in rows.clone() {
            for j in cols.clone() {
                data.push(self.entries[i * n + j].clone());
            }
        }
        Dense {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    fn blocks(&self) -> [Dense<S>; 4] {
        let (p, n) = (self.even_dim, self.size());
        [
            self.block(0..p, 0..p),
            self.block(0..p, p..n),
            self.block(p..n, 0..p),
            self.block(p..n, p..n),
        ]
    }

    fn assemble(&self, parity: Parity, [a, b, c, d]: [Dense<S>; 4]) -> Self {
        let (p, n) = (self.even_dim, self.size());
        let q = self.odd_dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = match (i < p, j < p) {
                    (true, true) => a.at(i, j),
                    (true, false) => b.at(i, j - p),
                    (false, true) => c.at(i - p, j),
                    (false, false) => d.at(i - p, j - p),
                };
                entries.push(e.clone());
            }
        }
        debug_assert_eq!(q, n - p);
        SuperMatrix {
            even_dim: p,
            odd_dim: q,
            generators: self.generators,
            parity,
            entries,
        }
    }

    fn ensure_even(&self) -> Result<(), LinalgError> {
        if self.parity == Parity::Even {
            Ok(())
        } else {
            Err(LinalgError::NotEven)
        }
    }

    /// Matrix product over the Grassmann algebra.
    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if (self.even_dim, self.odd_dim) != (other.even_dim, other.odd_dim) {
            return Err(LinalgError::ShapeMismatch {
                left: (self.even_dim, self.odd_dim),
                right: (other.even_dim, other.odd_dim),
            });
        }
        if self.generators != other.generators {
            return Err(GrassmannError::MismatchedGenerators {
                left: self.generators.count(),
                right: other.generators.count(),
            }
            .into());
        }
        let n = self.size();
        let lhs = Dense {
            rows: n,
            cols: n,
            data: self.entries.clone(),
        };
        let rhs = Dense {
            rows: n,
            cols: n,
            data: other.entries.clone(),
        };
        let parity = self
            .parity
            .combine(other.parity)
            .ok_or(LinalgError::NotEven)?;
        Ok(SuperMatrix {
            even_dim: self.even_dim,
            odd_dim: self.odd_dim,
            generators: self.generators,
            parity,
            entries: lhs.mul(&rhs, self.generators).data,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_entries(other, |a, b| a.try_add(b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_entries(other, |a, b| a.try_sub(b))
    }

    fn zip_entries<F>(&self, other: &Self, f: F) -> Result<Self, LinalgError>
    where
        F: Fn(&Elem<S>, &Elem<S>) -> Result<Elem<S>, GrassmannError>,
    {
        if (self.even_dim, self.odd_dim, self.parity)
            != (other.even_dim, other.odd_dim, other.parity)
        {
            return Err(LinalgError::ShapeMismatch {
                left: (self.even_dim, self.odd_dim),
                right: (other.even_dim, other.odd_dim),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SuperMatrix {
            entries,
            ..self.clone()
        })
    }

    /// Exact inverse by block elimination. Requires invertible bodies of both
    /// diagonal blocks.
    pub fn inverse(&self) -> Result<Self, LinalgError> {
        self.ensure_even()?;
        let gens = self.generators;
        let [a, b, c, d] = self.blocks();
        let a_inv = a.inverse(gens)?;
        // Schur complement S = D − C A⁻¹ B; its body equals the body of D.
        let a_inv_b = a_inv.mul(&b, gens);
        let schur = d.sub(&c.mul(&a_inv_b, gens));
        let s_inv = schur.inverse(gens)?;
        let c_a_inv = c.mul(&a_inv, gens);
        let top_right = a_inv_b.mul(&s_inv, gens).neg();
        let bottom_left = s_inv.mul(&c_a_inv, gens).neg();
        let top_left = {
            let corr = a_inv_b.mul(&s_inv, gens).mul(&c_a_inv, gens);
            let n = a_inv.data.len();
            let mut out = a_inv.clone();
            for k in 0..n {
                out.data[k] = a_inv.data[k].try_add(&corr.data[k])?;
            }
            out
        };
        Ok(self.assemble(Parity::Even, [top_left, top_right, bottom_left, s_inv]))
    }

    /// `[[A, B], [C, D]]ᵀ = [[Aᵗ, Cᵗ], [−Bᵗ, Dᵗ]]`.
    pub fn supertranspose(&self) -> Self {
        let (p, n) = (self.even_dim, self.size());
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = &self.entries[j * n + i];
                entries.push(if i >= p && j < p { -e } else { e.clone() });
            }
        }
        SuperMatrix {
            entries,
            ..self.clone()
        }
    }

    /// `Ber = det(A − B D⁻¹ C) / det D`.
    pub fn berezinian_via_odd_block(&self) -> Result<Elem<S>, LinalgError> {
        self.ensure_even()?;
        let gens = self.generators;
        let [a, b, c, d] = self.blocks();
        let d_inv = d.inverse(gens)?;
        let reduced = a.sub(&b.mul(&d_inv, gens).mul(&c, gens));
        let num = reduced.det(gens)?;
        let den = d.det(gens)?;
        Ok(&num * &den.even_inverse()?)
    }

    /// `Ber = det A / det(D − C A⁻¹ B)`.
    pub fn berezinian_via_even_block(&self) -> Result<Elem<S>, LinalgError> {
        self.ensure_even()?;
        let gens = self.generators;
        let [a, b, c, d] = self.blocks();
        let a_inv = a.inverse(gens)?;
        let reduced = d.sub(&c.mul(&a_inv, gens).mul(&b, gens));
        let num = a.det(gens)?;
        let den = reduced
            .det(gens)?
            .even_inverse()
            .map_err(|_| LinalgError::NonInvertible)?;
        Ok(&num * &den)
    }

    /// The Berezinian, using the odd-block formula when `body(D)` is
    /// invertible and the even-block formula otherwise.
    pub fn berezinian(&self) -> Result<Elem<S>, LinalgError> {
        match self.berezinian_via_odd_block() {
            Err(LinalgError::NonInvertible) => match self.berezinian_via_even_block() {
                Err(LinalgError::NonInvertible) => Err(LinalgError::NoInvertibleBlock),
                other => other,
            },
            other => other,
        }
    }

    /// Re-embeds every entry into a larger algebra.
    pub fn embed(&self, target: Generators) -> Result<Self, LinalgError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.embed(target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SuperMatrix {
            generators: target,
            entries,
            ..self.clone()
        })
    }

    /// Applies `f` to every entry; the caller is responsible for keeping
    /// block parities intact.
    pub fn map_entries<F>(&self, f: F) -> Result<Self, LinalgError>
    where
        F: Fn(&Elem<S>) -> Elem<S>,
    {
        let entries = self.entries.iter().map(f).collect();
        Self::with_parity(
            self.even_dim,
            self.odd_dim,
            self.generators,
            self.parity,
            entries,
        )
    }
}

impl SuperMatrix<Complex64> {
    /// Largest entrywise deviation from `g_ab = (−1)^{ãb̃} g_ba`.
    pub fn supersymmetry_residual(&self) -> f64 {
        let n = self.size();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let sign_odd = self.index_is_odd(i) && self.index_is_odd(j);
                let mirrored = if sign_odd {
                    -self.get(j, i)
                } else {
                    self.get(j, i).clone()
                };
                worst = worst.max(self.get(i, j).max_abs_diff(&mirrored));
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.size() != other.size() {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

/// Density `√Ber(g)` multiplying the coordinate volume element `D(x|ξ)`.
/// The square root is taken on the branch with positive body.
pub fn sqrt_berezinian_volume_density(
    g: &SuperMatrix<Complex64>,
) -> Result<GrassmannElement<Complex64>, LinalgError> {
    let ber = g.berezinian()?;
    let body = ber.body();
    if body.re.is_nan() || body.re <= 0.0 || body.im.abs() > 1e-12 * body.re {
        return Err(LinalgError::NonPositiveBody);
    }
    Ok(ber.sqrt()?)
}
