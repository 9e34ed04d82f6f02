//! Gauss–Legendre quadrature over boxes, with tensor-product and
//! p-refinement (node doubling) schemes.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::OracleError;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of `P_n` by Newton iteration from the Chebyshev-like guess
    /// `cos(π(i − 1/4)/(n + 1/2))`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let nodes = self.nodes.iter().map(|x| mid + half * x).collect();
        let weights = self.weights.iter().map(|w| half * w).collect();
        (nodes, weights)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `(P_n(x), P_n′(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: (f64, f64), x: f64) -> (f64, f64) {
    let (sum, comp) = acc;
    let t = sum + x;
    let c = if sum.abs() >= x.abs() {
        (sum - t) + x
    } else {
        (x - t) + sum
    };
    (t, comp + c)
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        self.re = neumaier(self.re, z.re);
        self.im = neumaier(self.im, z.im);
    }

    pub fn merge(mut self, other: CompensatedSum) -> CompensatedSum {
        self.add(Complex64::new(other.re.0, other.im.0));
        self.add(Complex64::new(other.re.1, other.im.1));
        self
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Fixed tensor-product Gauss–Legendre rule.
    TensorGaussLegendre,
    /// Tensor rule whose node count is doubled until two successive
    /// estimates agree to the requested tolerance.
    Adaptive,
    /// Integrands invariant under rotations are reduced to one radial axis.
    RadialReduction,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::TensorGaussLegendre => "tensor",
            Scheme::Adaptive => "adaptive",
            Scheme::RadialReduction => "radial",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tensor" => Ok(Scheme::TensorGaussLegendre),
            "adaptive" => Ok(Scheme::Adaptive),
            "radial" => Ok(Scheme::RadialReduction),
            _ => Err(OracleError::InvalidQuadrature(format!(
                "unknown scheme {s:?}"
            ))),
        }
    }
}

/// Plan for integrating over the even variables of a chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub nodes_per_axis: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper bound on doublings for [`Scheme::Adaptive`].
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            scheme: Scheme::TensorGaussLegendre,
            nodes_per_axis: 32,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_refinements: 4,
        }
    }
}

impl QuadratureSpec {
    pub fn tensor(nodes_per_axis: usize) -> Self {
        QuadratureSpec {
            nodes_per_axis,
            ..Self::default()
        }
    }

    pub fn adaptive(nodes_per_axis: usize, tol: f64) -> Self {
        QuadratureSpec {
            scheme: Scheme::Adaptive,
            nodes_per_axis,
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }

    pub fn radial(nodes_per_axis: usize) -> Self {
        QuadratureSpec {
            scheme: Scheme::RadialReduction,
            nodes_per_axis,
            ..Self::default()
        }
    }

    pub fn with_nodes(self, nodes_per_axis: usize) -> Self {
        QuadratureSpec {
            nodes_per_axis,
            ..self
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if self.nodes_per_axis < 2 {
            return Err(OracleError::InvalidQuadrature(format!(
                "nodes_per_axis must be at least 2, got {}",
                self.nodes_per_axis
            )));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(OracleError::InvalidQuadrature(
                "tolerances must be positive".into(),
            ));
        }
        Ok(())
    }

    fn accepts(&self, estimate: Complex64, previous: Complex64) -> bool {
        (estimate - previous).norm() <= self.abs_tol.max(self.rel_tol * estimate.norm())
    }
}

/// One integration axis `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub const fn new(lower: f64, upper: f64) -> Self {
        Interval { lower, upper }
    }
}

/// Result of a quadrature run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    /// Total integrand evaluations.
    pub evaluations: usize,
}

/// Tensor-product Gauss–Legendre rule with `nodes` points per axis. The
/// outermost axis is distributed over the rayon pool.
pub fn tensor_integrate<F>(axes: &[Interval], nodes: usize, f: &F) -> Result<Integral, OracleError>
where
    F: Fn(&[f64]) -> Result<Complex64, OracleError> + Sync,
{
    let (values, evaluations) = tensor_integrate_vec(axes, nodes, 1, &|x: &[f64]| Ok(vec![f(x)?]))?;
    Ok(Integral {
        value: values[0],
        evaluations,
    })
}

/// Componentwise tensor rule for integrands returning `width` values.
/// Returns the integrals and the number of integrand evaluations.
pub fn tensor_integrate_vec<F>(
    axes: &[Interval],
    nodes: usize,
    width: usize,
    f: &F,
) -> Result<(Vec<Complex64>, usize), OracleError>
where
    F: Fn(&[f64]) -> Result<Vec<Complex64>, OracleError> + Sync,
{
    let check = |v: Vec<Complex64>| {
        if v.len() == width {
            Ok(v)
        } else {
            Err(OracleError::InvalidParameters(format!(
                "integrand returned {} components, expected {width}",
                v.len()
            )))
        }
    };
    if axes.is_empty() {
        return Ok((check(f(&[])?)?, 1));
    }
    let gl = GaussLegendre::new(nodes);
    let mapped: Vec<(Vec<f64>, Vec<f64>)> = axes
        .iter()
        .map(|ax| gl.on_interval(ax.lower, ax.upper))
        .collect();
    let dim = axes.len();
    let inner_count: usize = nodes.pow((dim - 1) as u32);
    let zero = || vec![CompensatedSum::default(); width];
    let sums = (0..nodes)
        .into_par_iter()
        .map(|i0| -> Result<Vec<CompensatedSum>, OracleError> {
            let mut point = vec![0.0; dim];
            let mut acc = zero();
            point[0] = mapped[0].0[i0];
            for flat in 0..inner_count {
                let mut weight = mapped[0].1[i0];
                let mut rest = flat;
                for (d, (xs, ws)) in mapped.iter().enumerate().skip(1) {
                    let k = rest % nodes;
                    rest /= nodes;
                    point[d] = xs[k];
                    weight *= ws[k];
                }
                for (a, v) in acc.iter_mut().zip(check(f(&point)?)?) {
                    a.add(v * weight);
                }
            }
            Ok(acc)
        })
        .try_reduce(zero, |a, b| {
            Ok(a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect())
        })?;
    Ok((
        sums.iter().map(CompensatedSum::value).collect(),
        nodes.pow(dim as u32),
    ))
}

/// Integrates over a box according to `spec`. Radial reduction is the
/// caller's job; here it behaves like the tensor scheme on the reduced axes.
pub fn integrate<F>(
    axes: &[Interval],
    spec: &QuadratureSpec,
    f: &F,
) -> Result<Integral, OracleError>
where
    F: Fn(&[f64]) -> Result<Complex64, OracleError> + Sync,
{
    spec.validate()?;
    match spec.scheme {
        Scheme::TensorGaussLegendre | Scheme::RadialReduction => {
            tensor_integrate(axes, spec.nodes_per_axis, f)
        }
        Scheme::Adaptive => {
            let mut nodes = spec.nodes_per_axis;
            let mut previous = tensor_integrate(axes, nodes, f)?;
            let mut evaluations = previous.evaluations;
            if axes.is_empty() {
                return Ok(previous);
            }
            for _ in 0..spec.max_refinements {
                nodes *= 2;
                let next = tensor_integrate(axes, nodes, f)?;
                evaluations += next.evaluations;
                if spec.accepts(next.value, previous.value) {
                    return Ok(Integral {
                        value: next.value,
                        evaluations,
                    });
                }
                previous = next;
            }
            Err(OracleError::NonConvergence {
                nodes_per_axis: nodes,
                last_estimate: previous.value.re,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for n in 1..=20 {
            let gl = GaussLegendre::new(n);
            for k in 0..2 * n {
                let approx: f64 = gl
                    .nodes()
                    .iter()
                    .zip(gl.weights())
                    .map(|(x, w)| w * x.powi(k as i32))
                    .sum();
                let exact = if k % 2 == 1 {
                    0.0
                } else {
                    2.0 / (k as f64 + 1.0)
                };
                assert!((approx - exact).abs() < 1e-14, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn nodes_are_sorted_and_weights_positive() {
        let gl = GaussLegendre::new(64);
        assert!(gl.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(gl.weights().iter().all(|&w| w > 0.0));
        let total: f64 = gl.weights().iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn tensor_rule_on_a_box() {
        let axes = [
            Interval::new(0.0, 1.0),
            Interval::new(-1.0, 2.0),
            Interval::new(0.0, 3.0),
        ];
        let f = |x: &[f64]| Ok(Complex64::new(x[0] * x[1] * x[1] + x[2], 0.0));
        let out = tensor_integrate(&axes, 4, &f).unwrap();
        // ∫₀¹∫₋₁²∫₀³ (x y² + z) = 3·(1/2)(3) + 3·(9/2)
        assert!((out.value.re - (4.5 + 13.5)).abs() < 1e-12);
        assert_eq!(out.evaluations, 64);
    }

    #[test]
    fn zero_dimensional_integral_is_a_point_evaluation() {
        let out = tensor_integrate(&[], 8, &|_: &[f64]| Ok(Complex64::new(3.0, -1.0))).unwrap();
        assert_eq!(out.value, Complex64::new(3.0, -1.0));
        assert_eq!(out.evaluations, 1);
    }

    #[test]
    fn adaptive_scheme_converges_and_reports_failure() {
        let axes = [Interval::new(0.0, std::f64::consts::PI)];
        let f = |x: &[f64]| Ok(Complex64::new(x[0].sin().powi(7), 0.0));
        let out = integrate(&axes, &QuadratureSpec::adaptive(4, 1e-12), &f).unwrap();
        assert!((out.value.re - 32.0 / 35.0).abs() < 1e-12);
        let rough = |x: &[f64]| Ok(Complex64::new(x[0].sqrt(), 0.0));
        let spec = QuadratureSpec {
            max_refinements: 1,
            ..QuadratureSpec::adaptive(2, 1e-15)
        };
        assert!(matches!(
            integrate(&[Interval::new(0.0, 1.0)], &spec, &rough),
            Err(OracleError::NonConvergence { .. })
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::tensor(1).validate().is_err());
        let bad = QuadratureSpec {
            abs_tol: 0.0,
            ..QuadratureSpec::default()
        };
        assert!(bad.validate().is_err());
        assert!(QuadratureSpec::default().validate().is_ok());
    }

    #[test]
    fn compensated_sum_beats_naive_summation() {
        let mut acc = CompensatedSum::default();
        acc.add(Complex64::new(1.0, 0.0));
        for _ in 0..10 {
            acc.add(Complex64::new(1e-16, 0.0));
        }
        assert!((acc.value().re - (1.0 + 1e-15)).abs() < 1e-16);
    }
}
