//! Text and JSON renderings of volumes, verification runs and Grassmann
//! elements.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use supervol_core::{Family, ManifoldSpec, VolumeValue};

use crate::chart::Element;
use crate::error::OracleError;

/// C-style `%.15g`.
pub fn format_real(x: f64) -> String {
    format_g(x, 15)
}

/// `%.{precision}g`.
pub fn format_g(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let p = precision.max(1);
    // exponent after rounding to p significant digits
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `re+imi` (or `re-imi`) with 15 significant digits.
pub fn format_complex(z: Complex64) -> String {
    let im = format_real(z.im.abs());
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{im}i", format_real(z.re))
}

/// Real part alone when the imaginary part vanishes, else `re+imi`.
pub fn format_value(z: Complex64) -> String {
    if z.im == 0.0 {
        format_real(z.re)
    } else {
        format_complex(z)
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also with `j`).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim().replace(' ', "");
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    let bad = || format!("cannot parse {s:?} as a complex number (expected a, bi or a+bi)");
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent or leading
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// JSON form of a closed-form volume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub family: String,
    pub n: u32,
    pub m: u32,
    pub r: u32,
    pub s: u32,
    #[serde(rename = "R")]
    pub radius: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub exact_zero: bool,
    pub index: i64,
    pub gaussian_factor: f64,
    pub conjectural: bool,
}

impl VolumeReport {
    pub fn new(spec: &ManifoldSpec, v: &VolumeValue) -> Self {
        VolumeReport {
            family: spec.family.name().to_string(),
            n: spec.n,
            m: spec.m,
            r: spec.r,
            s: spec.s,
            radius: spec.radius,
            value_re: v.value.re,
            value_im: v.value.im,
            exact_zero: v.is_exact_zero,
            index: v.index,
            gaussian_factor: v.gaussian_factor,
            conjectural: v.conjectural,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }

    /// One `key=value` line.
    pub fn to_text(&self) -> String {
        let family: Family = self.family.parse().expect("report family is valid");
        let frame = if family.has_frame() {
            format!(" r={} s={}", self.r, self.s)
        } else {
            String::new()
        };
        format!(
            "family={} n={} m={}{frame} R={} value={} exact_zero={} index={} gaussian_factor={} conjectural={}",
            self.family,
            self.n,
            self.m,
            format_real(self.radius),
            format_value(self.value()),
            self.exact_zero,
            self.index,
            format_real(self.gaussian_factor),
            self.conjectural
        )
    }
}

/// Outcome of comparing a closed form with an oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub nodes: usize,
    pub elapsed_ms: f64,
    pub pass: bool,
}

impl VerificationReport {
    /// `pass` iff `|oracle − closed| ≤ max(abs_tol, rel_tol·|closed|)`.
    pub fn compare(
        case: impl Into<String>,
        closed_form: Complex64,
        oracle: Complex64,
        abs_tol: f64,
        rel_tol: f64,
    ) -> Self {
        let abs_err = (oracle - closed_form).norm();
        let scale = closed_form.norm();
        let rel_err = if scale > 0.0 {
            abs_err / scale
        } else {
            abs_err
        };
        VerificationReport {
            case: case.into(),
            closed_form: closed_form.re,
            oracle: oracle.re,
            abs_err,
            rel_err,
            nodes: 0,
            elapsed_ms: 0.0,
            pass: abs_err <= abs_tol.max(rel_tol * scale),
        }
    }

    pub fn with_cost(mut self, nodes: usize, elapsed_ms: f64) -> Self {
        self.nodes = nodes;
        self.elapsed_ms = elapsed_ms;
        self
    }

    pub fn to_text(&self) -> String {
        format!(
            "{} case={} closed_form={} oracle={} abs_err={} rel_err={} nodes={} elapsed_ms={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.case,
            format_real(self.closed_form),
            format_real(self.oracle),
            format_g(self.abs_err, 3),
            format_g(self.rel_err, 3),
            self.nodes,
            format_g(self.elapsed_ms, 4)
        )
    }
}

/// JSON form of a normalized volume function value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedReport {
    pub family: String,
    pub z_re: f64,
    pub z_im: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub w_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub w_im: Option<f64>,
    #[serde(rename = "R")]
    pub radius: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub exact_zero: bool,
}

impl NormalizedReport {
    pub fn to_text(&self) -> String {
        let w = match (self.w_re, self.w_im) {
            (Some(re), Some(im)) => format!(" w={}", format_complex(Complex64::new(re, im))),
            _ => String::new(),
        };
        format!(
            "family={} z={}{w} R={} value={} exact_zero={}",
            self.family,
            format_complex(Complex64::new(self.z_re, self.z_im)),
            format_real(self.radius),
            format_complex(Complex64::new(self.value_re, self.value_im)),
            self.exact_zero
        )
    }
}

/// One term `c·θ^{mask}` of a Grassmann element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermReport {
    pub mask: u32,
    pub re: f64,
    pub im: f64,
}

/// JSON form of a Grassmann element: generator count and sparse terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementReport {
    #[serde(rename = "N")]
    pub generators: usize,
    pub terms: Vec<TermReport>,
}

impl From<&Element> for ElementReport {
    fn from(e: &Element) -> Self {
        ElementReport {
            generators: e.num_generators(),
            terms: e
                .terms()
                .map(|(mask, v)| TermReport {
                    mask,
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        }
    }
}

impl ElementReport {
    pub fn to_element(&self) -> Result<Element, OracleError> {
        let gens = supervol_core::Generators::new(self.generators)?;
        Ok(Element::from_terms(
            gens,
            self.terms
                .iter()
                .map(|t| (t.mask, Complex64::new(t.re, t.im))),
        )?)
    }

    /// `c₀ + c₁ θ0θ1 + …` with 15-digit coefficients.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|t| {
                let coeff = format!("({})", format_complex(Complex64::new(t.re, t.im)));
                if t.mask == 0 {
                    coeff
                } else {
                    let gens: Vec<String> = (0..32)
                        .filter(|k| t.mask & (1 << k) != 0)
                        .map(|k| format!("θ{k}"))
                        .collect();
                    format!("{coeff}{}", gens.join(""))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
