//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on failure.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use supervol::oracles::*;
use supervol::quadrature::QuadratureSpec;
use supervol_core::scalar::{exact, ExactComplex};
use supervol_core::{
    barnes_g, cp_volume, gamma, reciprocal_gamma, sphere_volume, stiefel_volume,
    stiefel_volume_product, volume, Family, Generators, GrassmannElement, ManifoldSpec,
    SuperMatrix,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cp11_radius_independent() -> Outcome {
    let mut worst_closed: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for radius in [0.5, 1.0, 2.0] {
        let closed = cp_volume(1, 1, radius).map_err(|e| e.to_string())?;
        worst_closed = worst_closed.max(rel(closed.value, c(2.0 * PI)));
        for quad in [QuadratureSpec::radial(24), QuadratureSpec::tensor(64)] {
            let start = Instant::now();
            let v = cp_volume_chart(1, 1, radius, &quad).map_err(|e| e.to_string())?;
            slowest = slowest.max(start.elapsed());
            worst_oracle = worst_oracle.max(rel(v.value, c(2.0 * PI)));
        }
    }
    ensure(worst_closed <= 1e-14, || {
        format!("closed form rel err {worst_closed:e}")
    })?;
    ensure(worst_oracle <= 1e-6, || {
        format!("chart oracle rel err {worst_oracle:e}")
    })?;
    ensure(slowest <= Duration::from_secs(10), || {
        format!("oracle run took {slowest:?}")
    })?;
    Ok(format!(
        "closed {worst_closed:.1e}, oracle {worst_oracle:.1e}, slowest run {:.0} ms",
        slowest.as_secs_f64() * 1e3
    ))
}

fn berezin_theorem() -> Outcome {
    let mut cases = 0;
    for n in 1..=3 {
        for m in 1..=3 {
            for r in 1..=n {
                for s in 1..=m {
                    let v = stiefel_volume(n, m, r, s, 1.0).map_err(|e| e.to_string())?;
                    ensure(v.is_exact_zero && v.value == c(0.0), || {
                        format!("V_{{{r}|{s}}}(C^{{{n}|{m}}}) = {}", v.value)
                    })?;
                    cases += 1;
                }
            }
        }
    }
    let u = u11_maurer_cartan().map_err(|e| e.to_string())?;
    let modulus = u.density().body().norm();
    ensure((modulus - 2.0).abs() <= 1e-12, || {
        format!("|density| = {modulus}")
    })?;
    ensure(u.density_spread() <= 1e-12, || {
        format!("density spread {:e}", u.density_spread())
    })?;
    ensure(u.exact_top_term_vanishes(), || {
        "exact top term does not vanish".into()
    })?;
    let minus_2i =
        GrassmannElement::scalar(Generators::new(2).expect("two generators"), exact(0, -2));
    ensure(
        u.exact_samples.iter().all(|s| s.density == minus_2i),
        || "exact density is not -2i".into(),
    )?;
    ensure(u.total_volume.norm() <= 1e-12, || {
        format!("sampled total {}", u.total_volume)
    })?;
    Ok(format!(
        "{cases} Stiefel zeros; U(1|1) density -2i (f64 modulus error {:.0e}), \
         exactly -2i with zero top term on {} rational samples",
        (modulus - 2.0).abs(),
        u.exact_samples.len()
    ))
}

fn sphere_two_oracles() -> Outcome {
    let start = Instant::now();
    let quad = QuadratureSpec::tensor(16);
    let mut worst: f64 = 0.0;
    for n in 0..=3 {
        for m in 0..=2 {
            let closed = sphere_volume(n, m, 1.3).map_err(|e| e.to_string())?;
            let delta = sphere_volume_delta(n, m, 1.3, &quad)
                .map_err(|e| e.to_string())?
                .value;
            let chart = sphere_volume_chart(n, m, 1.3, &quad)
                .map_err(|e| e.to_string())?
                .value;
            for (name, v) in [("delta", delta), ("chart", chart)] {
                if closed.is_exact_zero {
                    ensure(v.norm() <= 1e-8, || {
                        format!("S^{{{n}|{}}} {name}: {v} not ~0", 2 * m)
                    })?;
                } else {
                    let e = rel(v, closed.value);
                    worst = worst.max(e);
                    ensure(e <= 1e-6, || {
                        format!("S^{{{n}|{}}} {name}: rel err {e:e}", 2 * m)
                    })?;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(120), || {
        format!("suite took {elapsed:?}")
    })?;
    Ok(format!(
        "12 cases × 2 oracles, worst rel err {worst:.1e}, {:.1} s",
        elapsed.as_secs_f64()
    ))
}

fn gaussians() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x6a55);
    let mut worst: f64 = 0.0;
    for case in 0..50 {
        let n = rng.gen_range(0..=3);
        let m = rng.gen_range(0..=2);
        let q = random_admissible_quadratic(&mut rng, n, m).map_err(|e| e.to_string())?;
        let nodes = if n == 3 { 40 } else { 48 };
        let got = gaussian_super_integral(&q, &QuadratureSpec::tensor(nodes))
            .map_err(|e| e.to_string())?;
        let want = gaussian_closed_form(&q).map_err(|e| e.to_string())?;
        let e = got.value.max_abs_diff(&want) / want.max_norm();
        worst = worst.max(e);
        ensure(e <= 1e-8, || {
            format!("case {case} on R^{{{n}|{}}}: rel err {e:e}", 2 * m)
        })?;
    }
    Ok(format!("50 quadratics, worst rel err {worst:.1e}"))
}

fn hopf() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x40f);
    let mut worst: f64 = 0.0;
    for radius in [0.5, 1.0, 2.0] {
        let h =
            hopf_factorization_report(1, 0, radius, 100, &mut rng).map_err(|e| e.to_string())?;
        worst = worst.max(h.identity_max_rel_err);
        ensure(h.pass, || {
            format!("R={radius}: rel err {:e}", h.identity_max_rel_err)
        })?;
    }
    Ok(format!("300 random z, worst rel err {worst:.1e}"))
}

fn scaling_law() -> Outcome {
    let mut specs = Vec::new();
    for n in 0..=4 {
        for m in 0..=3 {
            specs.push((Family::Sphere, n, m, 0, 0));
            specs.push((Family::ComplexProjective, n, m, 0, 0));
            specs.push((Family::UnitaryGroup, n, m, 0, 0));
            for r in 0..=n {
                for s in 0..=m {
                    if r + s > 0 && n <= 3 && m <= 2 {
                        specs.push((Family::Stiefel, n, m, r, s));
                        specs.push((Family::Grassmannian, n, m, r, s));
                    }
                }
            }
        }
    }
    let mut cases = 0;
    let mut worst: f64 = 0.0;
    for (family, n, m, r, s) in specs {
        let base = ManifoldSpec::new(family, n, m, r, s, 1.0).map_err(|e| e.to_string())?;
        let at_one = volume(&base).map_err(|e| e.to_string())?;
        for radius in [0.3, 0.5, 2.0, 3.7] {
            let v = volume(&base.with_radius(radius)).map_err(|e| e.to_string())?;
            let expect = at_one.value * radius.powi(v.index as i32);
            ensure(v.is_exact_zero == at_one.is_exact_zero, || {
                format!("{base:?}: zero flag changes with R")
            })?;
            if !v.is_exact_zero {
                let e = rel(v.value, expect);
                worst = worst.max(e);
                ensure(e <= 1e-12, || {
                    format!("{base:?} at R={radius}: rel err {e:e}")
                })?;
            }
            cases += 1;
        }
    }
    ensure(cases >= 100, || format!("only {cases} cases"))?;
    Ok(format!(
        "{cases} cases over 5 families, worst rel err {worst:.1e}"
    ))
}

type E = GrassmannElement<ExactComplex>;

fn random_exact(rng: &mut StdRng, gens: Generators, odd: bool, body: Option<i64>) -> E {
    let mut terms = Vec::new();
    if let Some(b) = body {
        terms.push((0u32, exact(b, rng.gen_range(-1..=1))));
    }
    for _ in 0..3 {
        let mask = rng.gen::<u32>() & gens.full_mask();
        if mask == 0 || (mask.count_ones() % 2 == 1) != odd {
            continue;
        }
        terms.push((mask, exact(rng.gen_range(-3..=3), rng.gen_range(-2..=2))));
    }
    E::from_terms(gens, terms).expect("masks within the algebra")
}

fn random_exact_matrix(
    rng: &mut StdRng,
    p: usize,
    q: usize,
    gens: Generators,
) -> SuperMatrix<ExactComplex> {
    let n = p + q;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let odd = (i < p) != (j < p);
            let body = match (odd, i == j) {
                (true, _) => None,
                (false, true) => Some(rng.gen_range(4..=7)),
                (false, false) => Some(rng.gen_range(-1..=1)),
            };
            entries.push(random_exact(rng, gens, odd, body));
        }
    }
    SuperMatrix::new(p, q, gens, entries).expect("square even supermatrix")
}

fn berezinian_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xbe7);
    let mut done = 0;
    while done < 200 {
        let (p, q) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        if p + q == 0 {
            continue;
        }
        let gens = Generators::new(rng.gen_range(0..=6)).expect("N ≤ 6");
        let a = random_exact_matrix(&mut rng, p, q, gens);
        let b = random_exact_matrix(&mut rng, p, q, gens);
        let err = |e: supervol_core::LinalgError| e.to_string();
        let ber_a = a.berezinian().map_err(err)?;
        let ber_ab = a.matmul(&b).map_err(err)?.berezinian().map_err(err)?;
        let product = &ber_a * &b.berezinian().map_err(err)?;
        ensure((&ber_ab - &product).is_zero(), || {
            format!("multiplicativity fails for {p}|{q}, N={}", gens.count())
        })?;
        let ber_t = a.supertranspose().berezinian().map_err(err)?;
        ensure((&ber_t - &ber_a).is_zero(), || {
            format!("supertranspose changes Ber for {p}|{q}")
        })?;
        let via_a = a.berezinian_via_even_block().map_err(err)?;
        let via_d = a.berezinian_via_odd_block().map_err(err)?;
        ensure((&via_a - &via_d).is_zero(), || {
            format!("block formulas differ for {p}|{q}")
        })?;
        done += 1;
    }
    Ok("200 exact matrices, all residuals identically zero".into())
}

fn special_functions() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5f);
    let (mut rec, mut refl, mut barnes): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..500 {
        let z = Complex64::new(rng.gen_range(-6.0..6.0), rng.gen_range(-4.0..4.0));
        let g = |w: Complex64| gamma(w).map(|v| v.value()).map_err(|e| e.to_string());
        rec = rec.max(rel(g(z + 1.0)?, z * g(z)?));
        let pi_over = c(PI) / (z * PI).sin();
        refl = refl.max(rel(g(z)? * g(1.0 - z)?, pi_over));
        barnes = barnes.max(rel(barnes_g(z + 1.0).value(), barnes_g(z).value() * g(z)?));
    }
    ensure(rec <= 1e-10, || format!("Γ recurrence {rec:e}"))?;
    ensure(refl <= 1e-10, || format!("Γ reflection {refl:e}"))?;
    ensure(barnes <= 1e-9, || format!("G recursion {barnes:e}"))?;
    for (k, want) in [(1, 1.0), (2, 1.0), (3, 1.0), (4, 2.0), (5, 12.0)] {
        let v = barnes_g(c(k as f64)).value();
        ensure((v - want).norm() <= 1e-12, || format!("G({k}) = {v}"))?;
    }
    for k in 0..=8 {
        let z = c(-(k as f64));
        ensure(reciprocal_gamma(z).is_exact_zero(), || {
            format!("1/Γ({}) not exact zero", -k)
        })?;
        ensure(barnes_g(z).is_exact_zero(), || {
            format!("G({}) not exact zero", -k)
        })?;
        ensure(gamma(z).is_err(), || format!("Γ({}) should be a pole", -k))?;
    }
    Ok(format!(
        "recurrence {rec:.1e}, reflection {refl:.1e}, Barnes {barnes:.1e}"
    ))
}

fn classical_values() -> Outcome {
    let spheres = [2.0, 2.0 * PI, 4.0 * PI, 2.0 * PI * PI, 8.0 * PI * PI / 3.0];
    for (n, want) in spheres.iter().enumerate() {
        let v = sphere_volume(n as u32, 0, 1.0)
            .map_err(|e| e.to_string())?
            .value;
        ensure(rel(v, c(*want)) <= 1e-13, || {
            format!("S^{n} = {v}, want {want}")
        })?;
    }
    let mut factorial = 1.0;
    for n in 0..=5u32 {
        if n > 0 {
            factorial *= n as f64;
        }
        let want = PI.powi(n as i32) / factorial;
        let v = cp_volume(n, 0, 1.0).map_err(|e| e.to_string())?.value;
        ensure(rel(v, c(want)) <= 1e-13, || {
            format!("CP^{n} = {v}, want {want}")
        })?;
    }
    let u2 = stiefel_volume_product(2, 0, 2, 1.0)
        .map_err(|e| e.to_string())?
        .value;
    ensure(rel(u2, c(4.0 * PI.powi(3))) <= 1e-13, || {
        format!("vol U(2) = {u2}")
    })?;
    Ok("S⁰..S⁴, CP⁰..CP⁵ and U(2) = 4π³".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("cp11-radius-independent", cp11_radius_independent),
        ("berezin-theorem", berezin_theorem),
        ("sphere-two-oracles", sphere_two_oracles),
        ("gaussian-law", gaussians),
        ("hopf-identity", hopf),
        ("scaling-law", scaling_law),
        ("berezinian-properties", berezinian_suite),
        ("special-functions", special_functions),
        ("classical-values", classical_values),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.2} s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{secs:.2} s]", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
