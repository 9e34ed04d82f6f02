use num_complex::Complex64;
use proptest::prelude::*;
use supervol::chart::Element;
use supervol::report::{format_complex, format_real, parse_complex, ElementReport};
use supervol_core::Generators;

proptest! {
    #[test]
    fn element_json_round_trips(n in 0usize..6, coeffs in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 64)) {
        let gens = Generators::new(n).unwrap();
        let e = Element::from_terms(
            gens,
            coeffs.iter().take(1 << n).enumerate().map(|(m, &(re, im))| (m as u32, Complex64::new(re, im))),
        ).unwrap();
        let report = ElementReport::from(&e);
        let json = serde_json::to_string(&report).unwrap();
        let back: ElementReport = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.to_element().unwrap(), e);
    }

    #[test]
    fn fifteen_digit_output_is_accurate(x in -1e300f64..1e300) {
        let printed: f64 = format_real(x).parse().unwrap();
        prop_assert!((printed - x).abs() <= 1e-14 * x.abs());
    }

    #[test]
    fn complex_output_parses_back(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let z = Complex64::new(re, im);
        let back = parse_complex(&format_complex(z)).unwrap();
        prop_assert!((back - z).norm() <= 1e-14 * z.norm().max(1e-300));
    }
}

#[test]
fn element_schema_keys() {
    let gens = Generators::new(2).unwrap();
    let e = Element::scalar(gens, Complex64::new(0.0, -2.0));
    let v: serde_json::Value = serde_json::to_value(ElementReport::from(&e)).unwrap();
    assert_eq!(v["N"], 2);
    assert_eq!(v["terms"][0]["mask"], 0);
    assert_eq!(v["terms"][0]["im"], -2.0);
}
