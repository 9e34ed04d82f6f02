//! Brute-force evaluations of super volumes: odd variables are integrated
//! exactly in the Grassmann algebra, even variables by quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use supervol_core::scalar::{exact, ExactComplex};
use supervol_core::{
    cp_volume, gaussian_factor, normalized_volume, sphere_volume, Generators, GrassmannElement,
    NormalizedFamily, Parity, Scalar, Side, SuperDimension, SuperMatrix,
};

use crate::chart::{
    even_partials, integrated_density, AmbientSpace, Element, EvenCoordinate, SuperChart,
};
use crate::error::OracleError;
use crate::quadrature::{
    integrate, tensor_integrate, tensor_integrate_vec, Interval, QuadratureSpec, Scheme,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// An oracle estimate with its cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: Complex64,
    /// Integrand evaluations spent on the even variables.
    pub evaluations: usize,
    pub nodes_per_axis: usize,
}

fn check_bounds(what: &str, n: u32, max_n: u32, m: u32, max_m: u32) -> Result<(), OracleError> {
    if n > max_n || m > max_m {
        return Err(OracleError::InvalidParameters(format!(
            "{what} oracle supports n ≤ {max_n}, m ≤ {max_m}; got n = {n}, m = {m}"
        )));
    }
    Ok(())
}

fn check_radius(radius: f64) -> Result<(), OracleError> {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        Err(OracleError::InvalidParameters(format!(
            "radius must be positive and finite, got {radius}"
        )))
    }
}

/// `2 Σⱼ ξʲηʲ` with `(ξʲ, ηʲ)` the generators `(2j, 2j+1)`.
fn odd_square(gens: Generators, pairs: usize) -> Result<Element, OracleError> {
    let mut acc = Element::zero(gens);
    for j in 0..pairs {
        let xi = Element::generator(gens, 2 * j)?;
        let eta = Element::generator(gens, 2 * j + 1)?;
        acc += &(&xi * &eta).scale(&c(2.0));
    }
    Ok(acc)
}

fn all_generators(count: usize) -> Vec<usize> {
    (0..count).collect()
}

// ---------------------------------------------------------------------------
// Gaussian integrals

/// `Q(x) = Σ xᵃ Q_ab (−1)^{b̃} xᵇ` on `ℝ^{n|2m}` split by degree in the even
/// variables after the whitening `x = L⁻ᵀy`, where `L Lᵀ` is the body of
/// the even block. Odd coordinates occupy the first `2m` generators and the
/// coefficient algebra of `Q` is shifted above them.
struct WhitenedForm {
    quadratic: Vec<Vec<Element>>,
    linear: Vec<Element>,
    constant: Element,
    jacobian: f64,
}

/// Lower Cholesky factor of a real symmetric positive definite matrix.
fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

/// `L⁻ᵀ` for lower-triangular `L`.
fn inverse_transpose_lower(l: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = l.len();
    // columns of L⁻¹ by forward substitution
    let mut inv = vec![vec![0.0; n]; n];
    #[allow(clippy::needless_range_loop)]
    for col in 0..n {
        for i in 0..n {
            let rhs = if i == col { 1.0 } else { 0.0 };
            let s: f64 = (0..i).map(|k| l[i][k] * inv[k][col]).sum();
            inv[i][col] = (rhs - s) / l[i][i];
        }
    }
    (0..n)
        .map(|i| (0..n).map(|j| inv[j][i]).collect())
        .collect()
}

fn shift_into(e: &Element, target: Generators, shift: usize) -> Result<Element, OracleError> {
    Ok(Element::from_terms(
        target,
        e.terms().map(|(mask, v)| (mask << shift, *v)),
    )?)
}

impl WhitenedForm {
    fn new(q: &SuperMatrix) -> Result<Self, OracleError> {
        let n = q.even_dim();
        let odd = q.odd_dim();
        let total = Generators::new(odd + q.generators().count())?;
        let lift = |e: &Element| shift_into(e, total, odd);
        let entry = |a: usize, b: usize| lift(q.get(a, b));

        let mut body = vec![vec![0.0; n]; n];
        for (a, row) in body.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                let z = q.get(a, b).body();
                if z.im.abs() > 1e-12 * z.norm().max(1.0) {
                    return Err(OracleError::NotPositiveDefinite);
                }
                *v = z.re;
            }
        }
        let l = cholesky(&body).ok_or(OracleError::NotPositiveDefinite)?;
        let m = inverse_transpose_lower(&l);
        let jacobian = 1.0 / (0..n).map(|i| l[i][i]).product::<f64>();

        let theta: Vec<Element> = (0..odd)
            .map(|i| Element::generator(total, i))
            .collect::<Result<_, _>>()?;

        // x-linear part: xᵃ(−Q_ai θⁱ + θⁱ Q_ia)
        let mut linear_x = Vec::with_capacity(n);
        for a in 0..n {
            let mut acc = Element::zero(total);
            for (i, th) in theta.iter().enumerate() {
                acc -= &(&entry(a, n + i)? * th);
                acc += &(th * &entry(n + i, a)?);
            }
            linear_x.push(acc);
        }
        let mut constant = Element::zero(total);
        for (i, ti) in theta.iter().enumerate() {
            for (j, tj) in theta.iter().enumerate() {
                constant -= &(&(ti * &entry(n + i, n + j)?) * tj);
            }
        }

        let even: Vec<Vec<Element>> = (0..n)
            .map(|a| (0..n).map(|b| entry(a, b)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        let mut quadratic = vec![vec![Element::zero(total); n]; n];
        let mut linear = vec![Element::zero(total); n];
        for cc in 0..n {
            for a in 0..n {
                if m[a][cc] == 0.0 {
                    continue;
                }
                linear[cc] += &linear_x[a].scale(&c(m[a][cc]));
                for d in 0..n {
                    for b in 0..n {
                        let w = m[a][cc] * m[b][d];
                        if w != 0.0 {
                            quadratic[cc][d] += &even[a][b].scale(&c(w));
                        }
                    }
                }
            }
        }
        Ok(WhitenedForm {
            quadratic,
            linear,
            constant,
            jacobian,
        })
    }

    fn at(&self, y: &[f64]) -> Element {
        let mut acc = self.constant.clone();
        for (cc, yc) in y.iter().enumerate() {
            acc += &self.linear[cc].scale(&c(*yc));
            for (d, yd) in y.iter().enumerate() {
                acc += &self.quadratic[cc][d].scale(&c(yc * yd));
            }
        }
        acc
    }
}

/// Half-width of the box used for whitened Gaussian integrals; the body
/// `e^{−|y|²}` is below `1e−18` outside it.
pub const GAUSSIAN_BOX: f64 = 6.5;

/// Result of [`gaussian_super_integral`]: an element of the coefficient
/// algebra of `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianIntegral {
    pub value: Element,
    pub evaluations: usize,
    pub nodes_per_axis: usize,
}

/// `∫ e^{−Q(x)} Dx` over `ℝ^{n|2m}` for an even supersymmetric `Q` whose
/// coefficients may live in a Grassmann algebra of parameters.
pub fn gaussian_super_integral(
    q: &SuperMatrix,
    quad: &QuadratureSpec,
) -> Result<GaussianIntegral, OracleError> {
    quad.validate()?;
    if q.parity() != Parity::Even {
        return Err(OracleError::InvalidParameters(
            "quadratic form must be even".into(),
        ));
    }
    if q.odd_dim() % 2 != 0 {
        return Err(OracleError::InvalidParameters(
            "odd dimension must be even for a non-degenerate form".into(),
        ));
    }
    let form = WhitenedForm::new(q)?;
    let odd = q.odd_dim();
    let params = q.generators();
    let width = 1usize << params.count();
    let odd_gens = all_generators(odd);
    let axes = vec![Interval::new(-GAUSSIAN_BOX, GAUSSIAN_BOX); q.even_dim()];
    let (values, evaluations) = tensor_integrate_vec(&axes, quad.nodes_per_axis, width, &|y| {
        let integrand = (-form.at(y)).exp()?.berezin_integrate(&odd_gens)?;
        let mut out = vec![Complex64::new(0.0, 0.0); width];
        for (mask, v) in integrand.terms() {
            out[(mask >> odd) as usize] = *v;
        }
        Ok(out)
    })?;
    let value = Element::from_terms(
        params,
        values
            .into_iter()
            .enumerate()
            .map(|(mask, v)| (mask as u32, v * form.jacobian)),
    )?;
    Ok(GaussianIntegral {
        value,
        evaluations,
        nodes_per_axis: quad.nodes_per_axis,
    })
}

/// `g_{n|2m} Ber(Q)^{−1/2}`.
pub fn gaussian_closed_form(q: &SuperMatrix) -> Result<Element, OracleError> {
    let g = gaussian_factor(SuperDimension::new(q.even_dim() as i64, q.odd_dim() as i64));
    Ok(q.berezinian()?.powc(c(-0.5))?.scale(&c(g)))
}

/// A random admissible quadratic form on `ℝ^{n|2m}` with coefficients in
/// the Grassmann algebra of two odd parameters `p₀, p₁`: positive definite
/// even body, odd body `SᵀJS` with `det S > 0`, nilpotent corrections
/// proportional to `p₀p₁` and odd mixed entries.
pub fn random_admissible_quadratic<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
) -> Result<SuperMatrix, OracleError> {
    let params = Generators::new(2)?;
    let p0 = Element::generator(params, 0)?;
    let p1 = Element::generator(params, 1)?;
    let p01 = &p0 * &p1;
    let size = n + 2 * m;
    let mut entries = vec![Element::zero(params); size * size];
    let set =
        |entries: &mut Vec<Element>, a: usize, b: usize, e: Element| entries[a * size + b] = e;

    // even block: B Bᵀ + I/2 plus p₀p₁·(symmetric)
    let b: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    for i in 0..n {
        for j in 0..=i {
            let mut v: f64 = (0..n).map(|k| b[i][k] * b[j][k]).sum();
            if i == j {
                v += 0.5;
            }
            let e = Element::scalar(params, c(v)) + p01.scale(&c(rng.gen_range(-0.5..0.5)));
            set(&mut entries, i, j, e.clone());
            set(&mut entries, j, i, e);
        }
    }

    // odd block: SᵀJS with det S > 0, plus p₀p₁·(antisymmetric)
    let k = 2 * m;
    if k > 0 {
        let mut s: Vec<Vec<f64>>;
        loop {
            s = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| rng.gen_range(-1.0..1.0) + if i == j { 1.0 } else { 0.0 })
                        .collect()
                })
                .collect();
            let d = det_real(&s);
            if d.abs() > 0.2 {
                if d < 0.0 {
                    for v in s[0].iter_mut() {
                        *v = -*v;
                    }
                }
                break;
            }
        }
        let j_std = |a: usize, b: usize| -> f64 {
            if a / 2 != b / 2 || a == b {
                0.0
            } else if a % 2 == 0 {
                -1.0
            } else {
                1.0
            }
        };
        for i in 0..k {
            for jj in 0..k {
                let mut v = 0.0;
                for a in 0..k {
                    for bb in 0..k {
                        v += s[a][i] * j_std(a, bb) * s[bb][jj];
                    }
                }
                if i < jj {
                    let nil = rng.gen_range(-0.5..0.5);
                    let e = Element::scalar(params, c(v)) + p01.scale(&c(nil));
                    let e_t = Element::scalar(params, c(-v)) - p01.scale(&c(nil));
                    set(&mut entries, n + i, n + jj, e);
                    set(&mut entries, n + jj, n + i, e_t);
                }
            }
        }
    }

    // mixed blocks: odd entries, Q_ai = Q_ia
    for a in 0..n {
        for i in 0..k {
            let e = p0.scale(&c(rng.gen_range(-1.0..1.0))) + p1.scale(&c(rng.gen_range(-1.0..1.0)));
            set(&mut entries, a, n + i, e.clone());
            set(&mut entries, n + i, a, e);
        }
    }
    Ok(SuperMatrix::new(n, k, params, entries)?)
}

fn det_real(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let p = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap_or(col);
        if m[p][col] == 0.0 {
            return 0.0;
        }
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            let (upper, lower) = m.split_at_mut(r);
            for (x, y) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= f * y;
            }
        }
    }
    det
}

// ---------------------------------------------------------------------------
// Superspheres

fn falling(a: f64, j: u32) -> f64 {
    (0..j).map(|k| a - k as f64).product()
}

/// `vol S^{n|2m}_R` from `2R ∫ δ((x,x) + 2ξ·η − R²) Dx` over `ℝ^{n+1|2m}`.
/// The δ is Taylor-expanded in the nilpotent `s = 2ξ·η`; after the radial
/// reduction each order is `∫₀^∞ rⁿ δ⁽ʲ⁾(r² − R²) dr = ½(−1)ʲ (d/du)ʲ u^{(n−1)/2}` at `u = R²`.
pub fn sphere_volume_delta(
    n: u32,
    m: u32,
    radius: f64,
    quad: &QuadratureSpec,
) -> Result<OracleValue, OracleError> {
    check_bounds("sphere δ", n, 4, m, 2)?;
    check_radius(radius)?;
    quad.validate()?;
    let pairs = m as usize;
    let gens = Generators::new(2 * pairs)?;
    let s = odd_square(gens, pairs)?;
    let classical = sphere_volume(n, 0, 1.0)?.value;
    let a = (n as f64 - 1.0) / 2.0;
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..=m {
        // s^j / j!
        let mut unit = vec![c(0.0); m as usize + 1];
        unit[j as usize] = c(1.0);
        let coefficient = s
            .taylor_lift(&unit)?
            .berezin_integrate(&all_generators(2 * pairs))?
            .body();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let radial = 0.5 * sign * falling(a, j) * radius.powf(n as f64 - 1.0 - 2.0 * j as f64);
        total += coefficient * classical * radial;
    }
    Ok(OracleValue {
        value: total * (2.0 * radius),
        evaluations: 0,
        nodes_per_axis: quad.nodes_per_axis,
    })
}

/// Hyperspherical chart of `S^{n|2m}_R ⊂ ℝ^{n+1|2m}`: `x = ρ ω(φ)` with
/// `ρ = √(R² − 2ξ·η)`, `φ₁…φ_{n−1} ∈ [0, π]`, `φₙ ∈ [0, 2π]`. For `n = 0`
/// there are no angles and `sign` picks the point `x = ±ρ`.
pub fn sphere_chart(n: u32, m: u32, radius: f64, sign: f64) -> SuperChart {
    let n = n as usize;
    let pairs = m as usize;
    let coords = (0..n)
        .map(|k| {
            let upper = if k + 1 == n { 2.0 * PI } else { PI };
            EvenCoordinate::new(format!("phi{}", k + 1), 0.0, upper)
        })
        .collect();
    SuperChart::new(
        coords,
        2 * pairs,
        AmbientSpace {
            even: n + 1,
            odd_pairs: pairs,
        },
        move |gens, phi| {
            let s = odd_square(gens, pairs)?;
            let r2 = Element::scalar(gens, c(radius * radius)) - s;
            let body = r2.body().re;
            if body <= 0.0 {
                return Err(OracleError::NonDifferentiable { body });
            }
            let rho = r2.sqrt()?.scale(&c(sign));
            let mut out = Vec::with_capacity(n + 1 + 2 * pairs);
            let mut prefix = rho;
            for p in phi {
                out.push(&prefix * &p.cos()?);
                prefix = &prefix * &p.sin()?;
            }
            out.push(prefix);
            for g in 0..2 * pairs {
                out.push(Element::generator(gens, g)?);
            }
            Ok(out)
        },
    )
}

/// `vol S^{n|2m}_R` by integrating the induced Riemannian density of the
/// hyperspherical chart.
pub fn sphere_volume_chart(
    n: u32,
    m: u32,
    radius: f64,
    quad: &QuadratureSpec,
) -> Result<OracleValue, OracleError> {
    check_bounds("sphere chart", n, 3, m, 2)?;
    check_radius(radius)?;
    quad.validate()?;
    if n == 0 {
        let mut value = c(0.0);
        for sign in [1.0, -1.0] {
            value += integrated_density(&sphere_chart(0, m, radius, sign), &[])?;
        }
        return Ok(OracleValue {
            value,
            evaluations: 2,
            nodes_per_axis: quad.nodes_per_axis,
        });
    }
    let chart = sphere_chart(n, m, radius, 1.0);
    let integral = integrate(&chart.domain(), quad, &|p| integrated_density(&chart, p))?;
    Ok(OracleValue {
        value: integral.value,
        evaluations: integral.evaluations,
        nodes_per_axis: quad.nodes_per_axis,
    })
}

// ---------------------------------------------------------------------------
// Complex projective superspaces

/// Real-coordinate factor of the affine Fubini–Study density of
/// `CP^{n|m}`: `(i/2)^{n−m} Ber ∂(w, w̄ | θ, θ̄)/∂(x, y | ξ, η)` with
/// `w = x + iy`, `θ = ξ + iη`.
pub fn cp_orientation_factor(n: u32, m: u32) -> Result<Complex64, OracleError> {
    let (n, m) = (n as usize, m as usize);
    let gens = Generators::new(0)?;
    let block = [c(1.0), I, c(1.0), -I];
    let dense = |k: usize| -> Vec<Element> {
        let mut rows = vec![Element::zero(gens); 4 * k * k];
        for j in 0..k {
            for (idx, v) in block.iter().enumerate() {
                rows[(2 * j + idx / 2) * 2 * k + 2 * j + idx % 2] = Element::scalar(gens, *v);
            }
        }
        rows
    };
    let zero_block = |r: usize, cc: usize| vec![Element::zero(gens); r * cc];
    let jac = SuperMatrix::from_blocks(
        2 * n,
        2 * m,
        gens,
        dense(n),
        zero_block(2 * n, 2 * m),
        zero_block(2 * m, 2 * n),
        dense(m),
    )?;
    let ber = jac.berezinian()?.body();
    Ok(ber * (I / 2.0).powi(n as i32 - m as i32))
}

/// `∫ D(ξ, η) R^{2(n−m)} N^{−(n−m+1)}` in real coordinates, as a function of
/// `t = |w|²`, with `N = 1 + |w|² + iθ·θ̄ = 1 + t + 2ξ·η`.
fn cp_fiber_density(
    n: u32,
    m: u32,
    radius: f64,
    t: f64,
    factor: Complex64,
) -> Result<Complex64, OracleError> {
    let pairs = m as usize;
    let gens = Generators::new(2 * pairs)?;
    let big_n = Element::scalar(gens, c(1.0 + t)) + odd_square(gens, pairs)?;
    let exponent = -(n as f64 - m as f64 + 1.0);
    let density = big_n
        .powc(c(exponent))?
        .scale(&(factor * radius.powf(2.0 * (n as f64 - m as f64))));
    Ok(density
        .berezin_integrate(&all_generators(2 * pairs))?
        .body())
}

/// `vol CP^{n|m}_R` from the affine-chart density. With a radial scheme
/// `∫_{ℂⁿ} f(|w|²) = πⁿ/(n−1)! ∫₀^∞ t^{n−1} f(t) dt` and `t = u/(1−u)`; other
/// schemes integrate `|w_j| = tan(πu_j/2)`, `u_j = 1 − (1 − v_j)³` per coordinate, using the phase
/// invariance `d²w_j = 2π r_j dr_j`.
pub fn cp_volume_chart(
    n: u32,
    m: u32,
    radius: f64,
    quad: &QuadratureSpec,
) -> Result<OracleValue, OracleError> {
    check_bounds("CP chart", n, 2, m, 2)?;
    check_radius(radius)?;
    quad.validate()?;
    let factor = cp_orientation_factor(n, m)?;
    if n == 0 {
        return Ok(OracleValue {
            value: cp_fiber_density(n, m, radius, 0.0, factor)?,
            evaluations: 1,
            nodes_per_axis: quad.nodes_per_axis,
        });
    }
    let integral = if quad.scheme == Scheme::RadialReduction {
        let norm = PI.powi(n as i32) / (1..n).map(f64::from).product::<f64>();
        let f = |u: &[f64]| -> Result<Complex64, OracleError> {
            let t = u[0] / (1.0 - u[0]);
            let jac = 1.0 / ((1.0 - u[0]) * (1.0 - u[0]));
            Ok(cp_fiber_density(n, m, radius, t, factor)? * (norm * t.powi(n as i32 - 1) * jac))
        };
        tensor_integrate(&[Interval::new(0.0, 1.0)], quad.nodes_per_axis, &f)?
    } else {
        let f = |u: &[f64]| -> Result<Complex64, OracleError> {
            let mut t = 0.0;
            let mut weight = 1.0;
            for &vj in u {
                // grading u = 1 − (1−v)³ flattens the corner at infinity
                let uj = 1.0 - (1.0 - vj).powi(3);
                let du = 3.0 * (1.0 - vj).powi(2);
                let arg = PI * uj / 2.0;
                let r = arg.tan();
                let dr = du * PI / 2.0 / (arg.cos() * arg.cos());
                t += r * r;
                weight *= 2.0 * PI * r * dr;
            }
            Ok(cp_fiber_density(n, m, radius, t, factor)? * weight)
        };
        integrate(&vec![Interval::new(0.0, 1.0); n as usize], quad, &f)?
    };
    Ok(OracleValue {
        value: integral.value,
        evaluations: integral.evaluations,
        nodes_per_axis: quad.nodes_per_axis,
    })
}

// ---------------------------------------------------------------------------
// U(1|1)

/// `g(α, β | θ)` from `e^{iα}`, `e^{−iα}`, `e^{iβ}`, with `θ`, `θ̄` the
/// generators 0 and 1.
fn u11_entries<S: Scalar>(
    gens: Generators,
    ea: &GrassmannElement<S>,
    ea_inv: &GrassmannElement<S>,
    eb: &GrassmannElement<S>,
    i: &S,
) -> Result<Vec<GrassmannElement<S>>, OracleError> {
    let theta = GrassmannElement::generator(gens, 0)?;
    let theta_bar = GrassmannElement::generator(gens, 1)?;
    let one = GrassmannElement::one(gens);
    let half_i = i.clone() / (S::one() + S::one());
    let tt = (&theta * &theta_bar).scale(&half_i);
    Ok(vec![
        ea * &(&one + &tt),
        theta,
        &theta_bar.scale(i) * eb,
        &(ea_inv * &(&one - &tt)) * eb,
    ])
}

/// Expands each `X_μ = (∂_μ g) g⁻¹` as `a e₁ + b e₂ + c ε₁ + d ε₂`. Returns
/// the coefficient supermatrix (rows `μ`, columns the basis) and the
/// entrywise differences between the expansion and `X_μ`.
#[allow(clippy::type_complexity)]
fn u11_expand<S: Scalar>(
    g: &SuperMatrix<S>,
    derivatives: &[SuperMatrix<S>],
    i: &S,
) -> Result<(SuperMatrix<S>, Vec<GrassmannElement<S>>), OracleError> {
    let gens = g.generators();
    let g_inv = g.inverse()?;
    let minus_i = -i.clone();
    let half = S::one() / (S::one() + S::one());
    let mut coefficients = Vec::with_capacity(16);
    let mut residuals = Vec::with_capacity(16);
    for d in derivatives {
        let x = d.matmul(&g_inv)?;
        let (x00, x01, x10, x11) = (x.get(0, 0), x.get(0, 1), x.get(1, 0), x.get(1, 1));
        let a = x00.scale(&minus_i);
        let b = x11.scale(&minus_i);
        let dd = (x10 - &x01.scale(i)).scale(&half);
        let cc = x01 - &dd.scale(i);
        let rebuilt = [
            a.scale(i),
            &cc + &dd.scale(i),
            &cc.scale(i) + &dd,
            b.scale(i),
        ];
        for (r, orig) in rebuilt.iter().zip([x00, x01, x10, x11]) {
            residuals.push(r - orig);
        }
        coefficients.extend([a, b, cc, dd]);
    }
    Ok((SuperMatrix::new(2, 2, gens, coefficients)?, residuals))
}

fn odd_derivatives<S: Scalar>(
    gens: Generators,
    entries: &[GrassmannElement<S>],
) -> Result<Vec<SuperMatrix<S>>, OracleError> {
    (0..2)
        .map(|odd| {
            let row = entries
                .iter()
                .map(|e| e.odd_derivative(odd, Side::Left))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SuperMatrix::with_parity(1, 1, gens, Parity::Odd, row)?)
        })
        .collect()
}

/// Maurer–Cartan data of `U(1|1)` at one point `(α, β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct U11Sample {
    pub alpha: f64,
    pub beta: f64,
    /// Coefficients of `(∂_μ g) g⁻¹` in the basis `(e₁, e₂ | ε₁, ε₂)`; rows
    /// `μ = (α, β | θ, θ̄)`.
    pub coefficients: SuperMatrix,
    pub density: Element,
    /// Largest deviation of `g g⁻¹` from the identity.
    pub inverse_residual: f64,
    /// Largest deviation of the basis expansion from `(∂_μ g) g⁻¹`.
    pub basis_residual: f64,
}

/// `(∂_μ g) g⁻¹` and its basis coefficients at `(α, β)`.
pub fn u11_sample(alpha: f64, beta: f64) -> Result<U11Sample, OracleError> {
    let gens = Generators::new(2)?;
    let build = |gens: Generators, a: &Element, b: &Element| {
        u11_entries(
            gens,
            &a.scale(&I).exp()?,
            &a.scale(&-I).exp()?,
            &b.scale(&I).exp()?,
            &I,
        )
    };
    let entries = build(
        gens,
        &Element::scalar(gens, c(alpha)),
        &Element::scalar(gens, c(beta)),
    )?;
    let g = SuperMatrix::new(1, 1, gens, entries.clone())?;
    let inverse_residual = g
        .matmul(&g.inverse()?)?
        .max_abs_diff(&SuperMatrix::identity(1, 1, gens));

    let mut derivatives = even_partials(gens, &[alpha, beta], |aug, x| build(aug, &x[0], &x[1]))?
        .into_iter()
        .map(|row| SuperMatrix::new(1, 1, gens, row))
        .collect::<Result<Vec<_>, _>>()?;
    derivatives.extend(odd_derivatives(gens, &entries)?);

    let (coefficients, residuals) = u11_expand(&g, &derivatives, &I)?;
    let basis_residual = residuals.iter().map(Element::max_norm).fold(0.0, f64::max);
    if basis_residual > 1e-10 {
        return Err(OracleError::BasisResidual(basis_residual));
    }
    let density = coefficients.berezinian()?;
    Ok(U11Sample {
        alpha,
        beta,
        coefficients,
        density,
        inverse_residual,
        basis_residual,
    })
}

/// Exact Maurer–Cartan density at a quarter-turn point `(α, β) = (πa/2, πb/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct U11ExactSample {
    pub quarter_turns: (u8, u8),
    pub density: GrassmannElement<ExactComplex>,
    /// `g g⁻¹ = 1` and the basis expansion reproduce `(∂_μ g) g⁻¹` exactly.
    pub exact_identities: bool,
}

/// Runs the Maurer–Cartan computation over exact complex rationals. At
/// quarter turns `e^{iα} ∈ {±1, ±i}` and `e^{i(α + ε)} = e^{iα}(1 + iε)`
/// for the nilpotent `ε = ε₁ε₂`, so no rounding occurs.
pub fn u11_exact_sample(a: u8, b: u8) -> Result<U11ExactSample, OracleError> {
    type E = GrassmannElement<ExactComplex>;
    let i = exact(0, 1);
    let cis = |k: i32| -> ExactComplex {
        [exact(1, 0), exact(0, 1), exact(-1, 0), exact(0, -1)][k.rem_euclid(4) as usize].clone()
    };
    let (ka, kb) = (i32::from(a), i32::from(b));
    let gens = Generators::new(2)?;
    let aug = Generators::new(4)?;

    // e^{±iα}, e^{iβ} with an optional ε₁ε₂ shift of α or β
    let phases = |gens: Generators, shift: Option<usize>| -> Result<[E; 3], OracleError> {
        let one = E::one(gens);
        let eps = match shift {
            Some(_) => &E::generator(gens, 2)? * &E::generator(gens, 3)?,
            None => E::zero(gens),
        };
        let bump = |sign: i64, on: bool| -> E {
            if on {
                &one + &eps.scale(&exact(0, sign))
            } else {
                one.clone()
            }
        };
        Ok([
            bump(1, shift == Some(0)).scale(&cis(ka)),
            bump(-1, shift == Some(0)).scale(&cis(-ka)),
            bump(1, shift == Some(1)).scale(&cis(kb)),
        ])
    };

    let [ea, ea_inv, eb] = phases(gens, None)?;
    let entries = u11_entries(gens, &ea, &ea_inv, &eb, &i)?;
    let g = SuperMatrix::new(1, 1, gens, entries.clone())?;
    let inverse_ok = g.matmul(&g.inverse()?)? == SuperMatrix::identity(1, 1, gens);

    let mut derivatives = Vec::with_capacity(4);
    for coord in 0..2 {
        let [ea, ea_inv, eb] = phases(aug, Some(coord))?;
        let row = u11_entries(aug, &ea, &ea_inv, &eb, &i)?
            .iter()
            .map(|e| {
                let d = e
                    .odd_derivative(3, Side::Right)?
                    .odd_derivative(2, Side::Right)?;
                Ok(E::from_terms(gens, d.terms().map(|(m, v)| (m, v.clone())))?)
            })
            .collect::<Result<Vec<_>, OracleError>>()?;
        derivatives.push(SuperMatrix::new(1, 1, gens, row)?);
    }
    derivatives.extend(odd_derivatives(gens, &entries)?);

    let (coefficients, residuals) = u11_expand(&g, &derivatives, &i)?;
    Ok(U11ExactSample {
        quarter_turns: (a, b),
        density: coefficients.berezinian()?,
        exact_identities: inverse_ok && residuals.iter().all(E::is_zero),
    })
}

/// Invariant density of `U(1|1)` and its total integral.
#[derive(Debug, Clone, PartialEq)]
pub struct U11Report {
    pub samples: Vec<U11Sample>,
    /// Exact densities at the 16 quarter-turn points.
    pub exact_samples: Vec<U11ExactSample>,
    /// `∫dα dβ ∫D(θ, θ̄) Ber` over `[0, 2π]²`.
    pub total_volume: Complex64,
    pub evaluations: usize,
}

impl U11Report {
    /// The density at the first sample.
    pub fn density(&self) -> &Element {
        &self.samples[0].density
    }

    /// Largest spread of the density across samples.
    pub fn density_spread(&self) -> f64 {
        let first = self.density();
        self.samples
            .iter()
            .map(|s| s.density.max_abs_diff(first))
            .fold(0.0, f64::max)
    }

    /// Every exact sample has vanishing `θθ̄` coefficient, so the Berezin
    /// integral of the density is exactly zero there.
    pub fn exact_top_term_vanishes(&self) -> bool {
        self.exact_samples.iter().all(|s| {
            s.exact_identities
                && s.density
                    .berezin_integrate(&[0, 1])
                    .is_ok_and(|t| t.is_zero())
        })
    }

    pub fn max_inverse_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.inverse_residual)
            .fold(0.0, f64::max)
    }
}

/// Samples the Maurer–Cartan density on a `nodes × nodes` Gauss–Legendre grid
/// of `[0, 2π]²` and integrates it.
pub fn u11_maurer_cartan_with(nodes: usize) -> Result<U11Report, OracleError> {
    QuadratureSpec::tensor(nodes).validate()?;
    let axes = [Interval::new(0.0, 2.0 * PI), Interval::new(0.0, 2.0 * PI)];
    let samples = std::sync::Mutex::new(Vec::new());
    let integral = tensor_integrate(&axes, nodes, &|p| {
        let s = u11_sample(p[0], p[1])?;
        let top = s.density.berezin_integrate(&[0, 1])?.body();
        samples.lock().expect("sample lock poisoned").push(s);
        Ok(top)
    })?;
    let mut samples = samples.into_inner().expect("sample lock poisoned");
    samples.sort_by(|a, b| {
        (a.alpha, a.beta)
            .partial_cmp(&(b.alpha, b.beta))
            .expect("finite angles")
    });
    let mut exact_samples = Vec::with_capacity(16);
    for a in 0..4 {
        for b in 0..4 {
            exact_samples.push(u11_exact_sample(a, b)?);
        }
    }
    Ok(U11Report {
        samples,
        exact_samples,
        total_volume: integral.value,
        evaluations: integral.evaluations,
    })
}

pub fn u11_maurer_cartan() -> Result<U11Report, OracleError> {
    u11_maurer_cartan_with(8)
}

// ---------------------------------------------------------------------------
// Hopf fibration

/// Closed-form and normalized-level checks of `S^{2n+1|2m} → CP^{n|m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfReport {
    pub sphere: Complex64,
    pub cp_times_circle: Complex64,
    pub both_exact_zero: bool,
    pub closed_form_rel_err: f64,
    /// Largest relative error of `𝒱(S; R, 2z+1) = 𝒱(CP; R, z) 𝒱(S; R, 1)`.
    pub identity_max_rel_err: f64,
    pub samples: usize,
    pub pass: bool,
}

fn rel_err(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Compares `vol S^{2n+1|2m}_R` with `2πR vol CP^{n|m}_R` and the normalized
/// identity at `samples` random `|z| ≤ 5`.
pub fn hopf_factorization_report<R: Rng + ?Sized>(
    n: u32,
    m: u32,
    radius: f64,
    samples: usize,
    rng: &mut R,
) -> Result<HopfReport, OracleError> {
    check_radius(radius)?;
    let sphere = sphere_volume(2 * n + 1, m, radius)?;
    let cp = cp_volume(n, m, radius)?;
    let rhs = cp.value * (2.0 * PI * radius);
    let both_exact_zero = sphere.is_exact_zero && cp.is_exact_zero;
    let zero_mismatch = sphere.is_exact_zero != cp.is_exact_zero;
    let closed_form_rel_err = if both_exact_zero {
        0.0
    } else {
        rel_err(sphere.value, rhs)
    };

    let s1 = normalized_volume(NormalizedFamily::Sphere, c(1.0), None, radius)?;
    let mut identity_max_rel_err: f64 = 0.0;
    let mut identity_zero_mismatch = false;
    for _ in 0..samples {
        let z = loop {
            let z = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            if z.norm() <= 5.0 {
                break z;
            }
        };
        let lhs = normalized_volume(NormalizedFamily::Sphere, z * 2.0 + 1.0, None, radius)?;
        let right = normalized_volume(NormalizedFamily::ComplexProjective, z, None, radius)? * s1;
        identity_zero_mismatch |= lhs.is_exact_zero() != right.is_exact_zero();
        identity_max_rel_err = identity_max_rel_err.max(rel_err(lhs.value(), right.value()));
    }
    let pass = !zero_mismatch
        && !identity_zero_mismatch
        && closed_form_rel_err <= 1e-12
        && identity_max_rel_err <= 1e-10;
    Ok(HopfReport {
        sphere: sphere.value,
        cp_times_circle: rhs,
        both_exact_zero,
        closed_form_rel_err,
        identity_max_rel_err,
        samples,
        pass,
    })
}

pub fn hopf_factorization_check(n: u32, m: u32, radius: f64) -> Result<bool, OracleError> {
    use rand::SeedableRng;
    let mut rng =
        rand::rngs::StdRng::seed_from_u64(0x4f0f_u64 ^ (u64::from(n) << 8) ^ u64::from(m));
    Ok(hopf_factorization_report(n, m, radius, 100, &mut rng)?.pass)
}

/// Hopf chart of `S^{3|2}_R ⊂ ℂ^{2|1} = ℝ^{4|2}` over the affine chart of
/// `CP^{1|1}`: coordinates `(φ, x, y | ξ, η)` with `w = x + iy`,
/// `θ = ξ + iη` and `(z⁰, z¹ | ζ) = R e^{iφ} (1, w | θ)/√N`.
pub fn hopf_chart(radius: f64) -> SuperChart {
    SuperChart::new(
        vec![
            EvenCoordinate::new("phi", 0.0, 2.0 * PI),
            EvenCoordinate::new("x", f64::NEG_INFINITY, f64::INFINITY),
            EvenCoordinate::new("y", f64::NEG_INFINITY, f64::INFINITY),
        ],
        2,
        AmbientSpace {
            even: 4,
            odd_pairs: 1,
        },
        move |gens, v| {
            let (phi, x, y) = (&v[0], &v[1], &v[2]);
            let xi = Element::generator(gens, 0)?;
            let eta = Element::generator(gens, 1)?;
            let w = x + &y.scale(&I);
            let theta = &xi + &eta.scale(&I);
            let big_n = &(&Element::one(gens) + &(x * x)) + &(&(y * y) + &odd_square(gens, 1)?);
            let scale = &phi.scale(&I).exp()? * &big_n.powc(c(-0.5))?;
            let scale = scale.scale(&c(radius));
            let z0 = scale.clone();
            let z1 = &scale * &w;
            let zeta = &scale * &theta;
            let re = |e: &Element| (e + &e.conjugate_coefficients()).scale(&c(0.5));
            let im = |e: &Element| (e - &e.conjugate_coefficients()).scale(&(-I / 2.0));
            Ok(vec![
                re(&z0),
                im(&z0),
                re(&z1),
                im(&z1),
                re(&zeta),
                im(&zeta),
            ])
        },
    )
}

/// `R^{2(n−m)} N^{−(n−m+1)}` for `CP^{1|1}` (so `N^{−1}`) at `w = x + iy`
/// in real coordinates, as a Grassmann element in `(ξ, η)`.
pub fn cp11_density(x: f64, y: f64) -> Result<Element, OracleError> {
    let gens = Generators::new(2)?;
    let big_n = Element::scalar(gens, c(1.0 + x * x + y * y)) + odd_square(gens, 1)?;
    Ok(big_n.powc(c(-1.0))?.scale(&cp_orientation_factor(1, 1)?))
}

/// Largest pointwise deviation between `√Ber` of the Hopf chart of
/// `S^{3|2}_R` and `R · dV(CP^{1|1})` at the given `(φ, x, y)` points.
pub fn cavalieri_residual(radius: f64, points: &[[f64; 3]]) -> Result<f64, OracleError> {
    let chart = hopf_chart(radius);
    let mut worst: f64 = 0.0;
    for p in points {
        let sphere = crate::chart::volume_density(&chart, p)?;
        let base = cp11_density(p[1], p[2])?.scale(&c(radius));
        worst = worst.max(sphere.max_abs_diff(&base));
    }
    Ok(worst)
}
