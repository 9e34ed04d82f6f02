//! Coordinate charts of supermanifolds embedded in flat superspace, and the
//! induced (pullback) metric.
//!
//! The ambient superspace `ℝ^{N|2M}` carries `Σ (dxᴬ)² + 2 Σ dξʲ dηʲ`. Its
//! odd coordinates are listed in pairs `(ξ¹, η¹, ξ², η², …)`.

use std::sync::Arc;

use num_complex::Complex64;
use supervol_core::{
    sqrt_berezinian_volume_density, Generators, GrassmannElement, Side, SuperMatrix,
};

use crate::error::OracleError;
use crate::quadrature::Interval;

pub type Element = GrassmannElement<Complex64>;

/// Flat ambient superspace `ℝ^{even | 2·odd_pairs}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmbientSpace {
    pub even: usize,
    pub odd_pairs: usize,
}

impl AmbientSpace {
    pub fn dimension(&self) -> usize {
        self.even + 2 * self.odd_pairs
    }

    /// `G_AB`: identity on even coordinates, `[[0, −1], [1, 0]]` on each
    /// odd pair, so that `xᴬ G_AB (−1)^{B̃} xᴮ = Σ x² + 2 Σ ξη`.
    pub fn metric_entry(&self, a: usize, b: usize) -> f64 {
        if a < self.even || b < self.even {
            return if a == b { 1.0 } else { 0.0 };
        }
        let (pa, pb) = (a - self.even, b - self.even);
        if pa / 2 != pb / 2 || pa == pb {
            return 0.0;
        }
        if pa % 2 == 0 {
            -1.0
        } else {
            1.0
        }
    }

    fn is_odd(&self, a: usize) -> bool {
        a >= self.even
    }
}

/// A named even coordinate and the interval it ranges over.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenCoordinate {
    pub name: String,
    pub domain: Interval,
}

impl EvenCoordinate {
    pub fn new(name: impl Into<String>, lower: f64, upper: f64) -> Self {
        EvenCoordinate {
            name: name.into(),
            domain: Interval::new(lower, upper),
        }
    }
}

/// `Φ(gens, x)`: ambient coordinates of the chart point with even
/// coordinates `x` and odd coordinates the first generators of `gens`.
pub type Embedding =
    dyn Fn(Generators, &[Element]) -> Result<Vec<Element>, OracleError> + Send + Sync;

/// A chart `ℝ^{p|q} ⊃ U → M ⊂ ℝ^{N|2M}`.
#[derive(Clone)]
pub struct SuperChart {
    pub even_coords: Vec<EvenCoordinate>,
    pub odd_count: usize,
    pub ambient: AmbientSpace,
    embedding: Arc<Embedding>,
}

impl std::fmt::Debug for SuperChart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SuperChart")
            .field("even_coords", &self.even_coords)
            .field("odd_count", &self.odd_count)
            .field("ambient", &self.ambient)
            .finish_non_exhaustive()
    }
}

impl SuperChart {
    pub fn new<F>(
        even_coords: Vec<EvenCoordinate>,
        odd_count: usize,
        ambient: AmbientSpace,
        embedding: F,
    ) -> Self
    where
        F: Fn(Generators, &[Element]) -> Result<Vec<Element>, OracleError> + Send + Sync + 'static,
    {
        SuperChart {
            even_coords,
            odd_count,
            ambient,
            embedding: Arc::new(embedding),
        }
    }

    pub fn even_dim(&self) -> usize {
        self.even_coords.len()
    }

    pub fn domain(&self) -> Vec<Interval> {
        self.even_coords.iter().map(|c| c.domain).collect()
    }

    /// The algebra of the odd chart coordinates.
    pub fn generators(&self) -> Result<Generators, OracleError> {
        Ok(Generators::new(self.odd_count)?)
    }

    /// Ambient coordinates at `point`, in the chart algebra.
    pub fn embed(&self, point: &[f64]) -> Result<Vec<Element>, OracleError> {
        let gens = self.generators()?;
        let x: Vec<Element> = point
            .iter()
            .map(|&v| Element::scalar(gens, Complex64::new(v, 0.0)))
            .collect();
        self.call(gens, &x)
    }

    fn call(&self, gens: Generators, x: &[Element]) -> Result<Vec<Element>, OracleError> {
        if x.len() != self.even_dim() {
            return Err(OracleError::InvalidParameters(format!(
                "chart expects {} even coordinates, got {}",
                self.even_dim(),
                x.len()
            )));
        }
        let out = (self.embedding)(gens, x)?;
        if out.len() != self.ambient.dimension() {
            return Err(OracleError::InvalidParameters(format!(
                "embedding returned {} coordinates for a {}-dimensional ambient space",
                out.len(),
                self.ambient.dimension()
            )));
        }
        Ok(out)
    }

    /// `∂_a xᴬ` for every chart coordinate `a` (even first, then odd) and
    /// ambient coordinate `A`, as elements of the chart algebra.
    pub fn jacobian(&self, point: &[f64]) -> Result<Vec<Vec<Element>>, OracleError> {
        let k = self.odd_count;
        let gens = self.generators()?;
        let mut rows = even_partials(gens, point, |g, x| self.call(g, x))?;
        let phi = self.embed(point)?;
        for i in 0..k {
            let row = phi
                .iter()
                .map(|c| c.odd_derivative(i, Side::Left))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(rows)
    }
}

/// `∂_a f` at `point` for every even coordinate `a`, exactly: `f` is
/// evaluated at `x + ε₁ε₂ e_a` with an auxiliary odd pair on the top two
/// generators, and the `ε₁ε₂` coefficient is read off.
pub fn even_partials<F>(
    gens: Generators,
    point: &[f64],
    f: F,
) -> Result<Vec<Vec<Element>>, OracleError>
where
    F: Fn(Generators, &[Element]) -> Result<Vec<Element>, OracleError>,
{
    let k = gens.count();
    let aug = Generators::new(k + 2)?;
    let eps = &Element::generator(aug, k)? * &Element::generator(aug, k + 1)?;
    let base: Vec<Element> = point
        .iter()
        .map(|&v| Element::scalar(aug, Complex64::new(v, 0.0)))
        .collect();
    let mut rows = Vec::with_capacity(point.len());
    for a in 0..point.len() {
        let mut shifted = base.clone();
        shifted[a] = &shifted[a] + &eps;
        let row = f(aug, &shifted)?
            .iter()
            .map(|c| {
                let d = c
                    .odd_derivative(k + 1, Side::Right)?
                    .odd_derivative(k, Side::Right)?;
                restrict(&d, gens)
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Drops the top generators of `e`, which must not occur in it.
fn restrict(e: &Element, gens: Generators) -> Result<Element, OracleError> {
    Ok(Element::from_terms(gens, e.terms().map(|(m, c)| (m, *c)))?)
}

/// Induced metric `g_{ab} = Σ (−1)^{Ã(B̃+b̃)} (∂_a xᴬ)(∂_b xᴮ) G_AB` at a
/// chart point, as a `(p|q)` supermatrix over the chart algebra.
pub fn pullback_metric(chart: &SuperChart, point: &[f64]) -> Result<SuperMatrix, OracleError> {
    let gens = chart.generators()?;
    let jac = chart.jacobian(point)?;
    let p = chart.even_dim();
    let n = p + chart.odd_count;
    let amb = chart.ambient;
    let mut entries = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let b_odd = b >= p;
            let mut acc = Element::zero(gens);
            for big_a in 0..amb.dimension() {
                for big_b in 0..amb.dimension() {
                    let g = amb.metric_entry(big_a, big_b);
                    if g == 0.0 {
                        continue;
                    }
                    let a_odd = amb.is_odd(big_a);
                    let sign = if a_odd && (amb.is_odd(big_b) ^ b_odd) {
                        -g
                    } else {
                        g
                    };
                    let term = &jac[a][big_a] * &jac[b][big_b];
                    acc += &term.scale(&Complex64::new(sign, 0.0));
                }
            }
            entries.push(acc);
        }
    }
    Ok(SuperMatrix::new(p, chart.odd_count, gens, entries)?)
}

/// `√Ber g` at a chart point, before Berezin integration.
pub fn volume_density(chart: &SuperChart, point: &[f64]) -> Result<Element, OracleError> {
    let g = pullback_metric(chart, point)?;
    Ok(sqrt_berezinian_volume_density(&g)?)
}

/// `∫ D(θ₁,…,θ_q) √Ber g` at a chart point.
pub fn integrated_density(chart: &SuperChart, point: &[f64]) -> Result<Complex64, OracleError> {
    let density = volume_density(chart, point)?;
    let all: Vec<usize> = (0..chart.odd_count).collect();
    Ok(density.berezin_integrate(&all)?.body())
}
