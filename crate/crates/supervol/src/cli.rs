//! The `supervol` command line: `volume`, `normalized`, `verify`, `table`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use supervol_core::{
    cp_volume, normalized_volume, sphere_volume, volume, Family, ManifoldSpec, NormalizedFamily,
    VolumeError,
};

use crate::error::OracleError;
use crate::oracles::{
    cavalieri_residual, cp_volume_chart, gaussian_closed_form, gaussian_super_integral,
    hopf_factorization_report, random_admissible_quadratic, sphere_volume_chart,
    sphere_volume_delta, u11_maurer_cartan_with,
};
use crate::quadrature::QuadratureSpec;
use crate::report::{
    format_real, parse_complex, ElementReport, NormalizedReport, VerificationReport, VolumeReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest number of cells `table` will produce.
pub const MAX_TABLE_CELLS: usize = 10_000;

/// Absolute tolerance used by `verify` for exact-zero targets.
pub const ZERO_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "supervol",
    version,
    about = "Volumes of supermanifolds: closed forms, oracles and tables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form volume of a supermanifold.
    Volume(VolumeArgs),
    /// Normalized volume function at complex arguments.
    Normalized(NormalizedArgs),
    /// Compare a closed form with an independent oracle.
    Verify(VerifyArgs),
    /// Grid of closed-form volumes.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|_| {
        format!("unknown family {s:?}; expected sphere, cp, stiefel, grassmannian or unitary_group")
    })
}

fn parse_radius(s: &str) -> Result<f64, String> {
    let r: f64 = s
        .parse()
        .map_err(|_| format!("radius {s:?} is not a number"))?;
    if r.is_finite() && r > 0.0 {
        Ok(r)
    } else {
        Err(format!("radius must be positive and finite, got {s}"))
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s
        .parse()
        .map_err(|_| format!("tolerance {s:?} is not a number"))?;
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(format!("tolerance must be positive, got {s}"))
    }
}

fn parse_nodes(s: &str) -> Result<usize, String> {
    let n: usize = s
        .parse()
        .map_err(|_| format!("node count {s:?} is not an integer"))?;
    if n >= 2 {
        Ok(n)
    } else {
        Err(format!("node count must be at least 2, got {n}"))
    }
}

/// `a..b` (inclusive) or a single `a`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let bad = || format!("cannot parse {s:?} as a range; expected a..b or a single integer");
    match s.split_once("..") {
        Some((a, b)) => {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(format!("range {s} is empty"));
            }
            Ok(a..=b)
        }
        None => {
            let a: u32 = s.trim().parse().map_err(|_| bad())?;
            Ok(a..=a)
        }
    }
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[arg(value_parser = parse_family)]
    pub family: Family,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long, default_value_t = 0)]
    pub r: u32,
    #[arg(long, default_value_t = 0)]
    pub s: u32,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true, value_parser = parse_radius)]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizedKind {
    Sphere,
    Cp,
    Stiefel,
    Grassmannian,
}

impl NormalizedKind {
    fn family(self) -> NormalizedFamily {
        match self {
            NormalizedKind::Sphere => NormalizedFamily::Sphere,
            NormalizedKind::Cp => NormalizedFamily::ComplexProjective,
            NormalizedKind::Stiefel => NormalizedFamily::Stiefel,
            NormalizedKind::Grassmannian => NormalizedFamily::Grassmannian,
        }
    }

    fn name(self) -> &'static str {
        match self {
            NormalizedKind::Sphere => "sphere",
            NormalizedKind::Cp => "cp",
            NormalizedKind::Stiefel => "stiefel",
            NormalizedKind::Grassmannian => "grassmannian",
        }
    }
}

#[derive(Debug, Args)]
pub struct NormalizedArgs {
    #[arg(value_enum)]
    pub family: NormalizedKind,
    /// First index variable, e.g. `2`, `0.5-1.5i`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub z: Complex64,
    /// Second index variable (Stiefel and Grassmannian only).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub w: Option<Complex64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true, value_parser = parse_radius)]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyCase {
    /// Supersphere against the induced-metric chart oracle.
    Sphere,
    /// Supersphere against the δ-function oracle.
    SphereDelta,
    /// Complex projective superspace against the Fubini–Study chart oracle.
    Cp,
    /// Random Gaussian integral on ℝ^{n|2m} against g·Ber^{−1/2}.
    Gaussian,
    /// Maurer–Cartan density and total volume of U(1|1).
    U11,
    /// Hopf factorization of sphere volumes.
    Hopf,
    /// Pointwise density factorization on the Hopf chart of S^{3|2}.
    Cavalieri,
}

impl VerifyCase {
    fn name(self) -> &'static str {
        match self {
            VerifyCase::Sphere => "sphere",
            VerifyCase::SphereDelta => "sphere-delta",
            VerifyCase::Cp => "cp",
            VerifyCase::Gaussian => "gaussian",
            VerifyCase::U11 => "u11",
            VerifyCase::Hopf => "hopf",
            VerifyCase::Cavalieri => "cavalieri",
        }
    }

    fn default_nodes(self, n: u32) -> usize {
        match self {
            VerifyCase::Sphere | VerifyCase::SphereDelta => 16,
            VerifyCase::Cp => 32,
            VerifyCase::Gaussian => {
                if n >= 3 {
                    40
                } else {
                    48
                }
            }
            VerifyCase::U11 => 8,
            VerifyCase::Hopf => 100,
            VerifyCase::Cavalieri => 4,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub case: VerifyCase,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true, value_parser = parse_radius)]
    pub radius: f64,
    /// Quadrature nodes per axis (sample count for `hopf`).
    #[arg(long, value_parser = parse_nodes)]
    pub nodes: Option<usize>,
    /// Relative tolerance.
    #[arg(long, default_value_t = 1e-6, value_parser = parse_tol)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(value_parser = parse_family)]
    pub family: Family,
    #[arg(long, default_value = "0..3", value_parser = parse_range)]
    pub n: RangeInclusive<u32>,
    #[arg(long, default_value = "0..2", value_parser = parse_range)]
    pub m: RangeInclusive<u32>,
    #[arg(long, default_value = "0", value_parser = parse_range)]
    pub r: RangeInclusive<u32>,
    #[arg(long, default_value = "0", value_parser = parse_range)]
    pub s: RangeInclusive<u32>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true, value_parser = parse_radius)]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Applies `SUPERVOL_THREADS` to the global rayon pool.
pub fn configure_threads(value: Option<&str>) -> Result<(), String> {
    let Some(v) = value else { return Ok(()) };
    let threads: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("SUPERVOL_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("cannot configure thread pool: {e}"))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if shown { out } else { err };
            let _ = write!(sink, "{e}");
            return if shown { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let result = match cli.command {
        Command::Volume(a) => run_volume(&a, out),
        Command::Normalized(a) => run_normalized(&a, out),
        Command::Verify(a) => run_verify(&a, out),
        Command::Table(a) => run_table(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Mismatch(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_MISMATCH
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_MISMATCH
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Mismatch(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<VolumeError> for Failure {
    fn from(e: VolumeError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::InvalidParameters(_)
            | OracleError::InvalidQuadrature(_)
            | OracleError::Volume(_) => Failure::Usage(e.to_string()),
            other => Failure::Mismatch(other.to_string()),
        }
    }
}

fn emit_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string(value).map_err(|e| Failure::Io(e.into()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn run_volume(a: &VolumeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let spec = ManifoldSpec::new(a.family, a.n, a.m, a.r, a.s, a.radius)?;
    if !a.family.has_frame() && (a.r != 0 || a.s != 0) {
        return Err(Failure::Usage(format!(
            "--r/--s apply only to stiefel and grassmannian, not {}",
            a.family.name()
        )));
    }
    let v = volume(&spec)?;
    let report = VolumeReport::new(&spec, &v);
    match a.format {
        Format::Text => writeln!(out, "{}", report.to_text())?,
        Format::Json => emit_json(out, &report)?,
    }
    Ok(EXIT_OK)
}

fn run_normalized(a: &NormalizedArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let needs_w = a.family.family().needs_w();
    if needs_w && a.w.is_none() {
        return Err(Failure::Usage(format!("{} needs --w", a.family.name())));
    }
    if !needs_w && a.w.is_some() {
        return Err(Failure::Usage(format!("{} takes no --w", a.family.name())));
    }
    let v = normalized_volume(a.family.family(), a.z, a.w, a.radius)?;
    let report = NormalizedReport {
        family: a.family.name().into(),
        z_re: a.z.re,
        z_im: a.z.im,
        w_re: a.w.map(|w| w.re),
        w_im: a.w.map(|w| w.im),
        radius: a.radius,
        value_re: v.value().re,
        value_im: v.value().im,
        exact_zero: v.is_exact_zero(),
    };
    match a.format {
        Format::Text => writeln!(out, "{}", report.to_text())?,
        Format::Json => emit_json(out, &report)?,
    }
    Ok(EXIT_OK)
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Runs one verification case and returns its report plus extra text lines.
pub fn verify_case(a: &VerifyArgs) -> Result<(VerificationReport, Vec<String>), OracleError> {
    let nodes = a.nodes.unwrap_or_else(|| a.case.default_nodes(a.n));
    let (n, m, radius) = (a.n, a.m, a.radius);
    let name = format!("{} n={n} m={m} R={}", a.case.name(), format_real(radius));
    let start = Instant::now();
    let mut notes = Vec::new();
    let report = match a.case {
        VerifyCase::Sphere | VerifyCase::SphereDelta => {
            let closed = sphere_volume(n, m, radius)?;
            let quad = QuadratureSpec::tensor(nodes);
            let oracle = if a.case == VerifyCase::Sphere {
                sphere_volume_chart(n, m, radius, &quad)?
            } else {
                sphere_volume_delta(n, m, radius, &quad)?
            };
            VerificationReport::compare(name, closed.value, oracle.value, ZERO_TOL, a.tol)
                .with_cost(oracle.nodes_per_axis, elapsed_ms(start))
        }
        VerifyCase::Cp => {
            let closed = cp_volume(n, m, radius)?;
            let oracle = cp_volume_chart(n, m, radius, &QuadratureSpec::radial(nodes))?;
            VerificationReport::compare(name, closed.value, oracle.value, ZERO_TOL, a.tol)
                .with_cost(oracle.nodes_per_axis, elapsed_ms(start))
        }
        VerifyCase::Gaussian => {
            if n > 3 || m > 2 {
                return Err(OracleError::InvalidParameters(format!(
                    "gaussian case supports n ≤ 3, m ≤ 2; got n = {n}, m = {m}"
                )));
            }
            let seed = 0x5eed_0000 ^ (u64::from(n) << 4) ^ u64::from(m);
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let q = random_admissible_quadratic(&mut rng, n as usize, m as usize)?;
            let got = gaussian_super_integral(&q, &QuadratureSpec::tensor(nodes))?;
            let want = gaussian_closed_form(&q)?;
            let abs_err = got.value.max_abs_diff(&want);
            let rel_err = abs_err / want.max_norm();
            notes.push(format!(
                "oracle   = {}",
                ElementReport::from(&got.value).to_text()
            ));
            notes.push(format!(
                "expected = {}",
                ElementReport::from(&want).to_text()
            ));
            let mut r =
                VerificationReport::compare(name, want.body(), got.value.body(), ZERO_TOL, a.tol);
            r.abs_err = abs_err;
            r.rel_err = rel_err;
            r.pass = rel_err <= a.tol;
            r.with_cost(nodes, elapsed_ms(start))
        }
        VerifyCase::U11 => {
            let report = u11_maurer_cartan_with(nodes)?;
            let density = report.density();
            let modulus_ok = (density.body().norm() - 2.0).abs() <= 1e-12;
            let constant = report.density_spread() <= 1e-12;
            let exact_zero = report.exact_top_term_vanishes();
            notes.push(format!(
                "density = {}",
                ElementReport::from(density).to_text()
            ));
            notes.push(format!(
                "density modulus 2: {modulus_ok}; constant over samples: {constant}; exact top term vanishes: {exact_zero}"
            ));
            let mut r = VerificationReport::compare(
                name,
                Complex64::new(0.0, 0.0),
                report.total_volume,
                1e-12,
                a.tol,
            );
            r.pass &= modulus_ok && constant && exact_zero;
            r.with_cost(nodes, elapsed_ms(start))
        }
        VerifyCase::Hopf => {
            let mut rng =
                rand::rngs::StdRng::seed_from_u64(0x0f0f ^ u64::from(n) ^ (u64::from(m) << 8));
            let h = hopf_factorization_report(n, m, radius, nodes, &mut rng)?;
            notes.push(format!(
                "exact zero on both sides: {}; normalized identity max rel err {:e} over {} samples",
                h.both_exact_zero, h.identity_max_rel_err, h.samples
            ));
            let mut r = VerificationReport::compare(name, h.sphere, h.cp_times_circle, 0.0, 1e-12);
            r.pass = h.pass;
            r.with_cost(nodes, elapsed_ms(start))
        }
        VerifyCase::Cavalieri => {
            let k = nodes;
            let mut points = Vec::with_capacity(k * k * k);
            for i in 0..k {
                for j in 0..k {
                    for l in 0..k {
                        let f = |t: usize| (t as f64 + 0.5) / k as f64;
                        points.push([
                            2.0 * std::f64::consts::PI * f(i),
                            4.0 * f(j) - 2.0,
                            4.0 * f(l) - 2.0,
                        ]);
                    }
                }
            }
            let residual = cavalieri_residual(radius, &points)?;
            let name = format!("cavalieri R={}", format_real(radius));
            VerificationReport::compare(
                name,
                Complex64::new(0.0, 0.0),
                Complex64::new(residual, 0.0),
                1e-10,
                a.tol,
            )
            .with_cost(nodes, elapsed_ms(start))
        }
    };
    Ok((report, notes))
}

fn run_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let (report, notes) = verify_case(a)?;
    match a.format {
        Format::Text => {
            writeln!(out, "{}", report.to_text())?;
            for line in notes {
                writeln!(out, "  {line}")?;
            }
        }
        Format::Json => emit_json(out, &report)?,
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_MISMATCH })
}

fn run_table(a: &TableArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let frame = a.family.has_frame();
    let len = |r: &RangeInclusive<u32>| (*r.end() - *r.start()) as usize + 1;
    if !frame && (a.r != (0..=0) || a.s != (0..=0)) {
        return Err(Failure::Usage(format!(
            "--r/--s apply only to stiefel and grassmannian, not {}",
            a.family.name()
        )));
    }
    let cells = len(&a.n)
        .saturating_mul(len(&a.m))
        .saturating_mul(len(&a.r))
        .saturating_mul(len(&a.s));
    if cells > MAX_TABLE_CELLS {
        return Err(Failure::Usage(format!(
            "table has {cells} cells; the limit is {MAX_TABLE_CELLS}"
        )));
    }
    let mut rows = Vec::with_capacity(cells);
    for n in a.n.clone() {
        for m in a.m.clone() {
            for r in a.r.clone() {
                for s in a.s.clone() {
                    if r > n || s > m {
                        continue;
                    }
                    let spec = ManifoldSpec::new(a.family, n, m, r, s, a.radius)?;
                    let v = volume(&spec)?;
                    rows.push(VolumeReport::new(&spec, &v));
                }
            }
        }
    }
    match a.format {
        Format::Json => emit_json(out, &rows)?,
        Format::Text => {
            if frame {
                writeln!(
                    out,
                    "{:>3} {:>3} {:>3} {:>3}  {:>24}  {:>5}  zero",
                    "n", "m", "r", "s", "volume", "index"
                )?;
            } else {
                writeln!(
                    out,
                    "{:>3} {:>3}  {:>24}  {:>5}  zero",
                    "n", "m", "volume", "index"
                )?;
            }
            for row in &rows {
                let value = crate::report::format_value(row.value());
                let mark = if row.exact_zero { "exact" } else { "" };
                if frame {
                    writeln!(
                        out,
                        "{:>3} {:>3} {:>3} {:>3}  {:>24}  {:>5}  {mark}",
                        row.n, row.m, row.r, row.s, value, row.index
                    )?;
                } else {
                    writeln!(
                        out,
                        "{:>3} {:>3}  {:>24}  {:>5}  {mark}",
                        row.n, row.m, value, row.index
                    )?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["supervol"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0..5").unwrap(), 0..=5);
        assert_eq!(parse_range("3").unwrap(), 3..=3);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("a..2").is_err());
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = run_str(&["volume", "sphere", "--bogus", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--bogus"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verify"));
    }

    #[test]
    fn thread_variable_is_validated() {
        assert!(configure_threads(None).is_ok());
        assert!(configure_threads(Some("0")).is_err());
        assert!(configure_threads(Some("many")).is_err());
    }
}
