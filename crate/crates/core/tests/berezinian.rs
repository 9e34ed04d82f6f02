//! Berezinian identities over exact complex rationals: every residual must
//! be identically zero.

use proptest::prelude::*;
use supervol_core::scalar::{exact, ExactComplex};
use supervol_core::{Generators, GrassmannElement, SuperMatrix};

type E = GrassmannElement<ExactComplex>;
type M = SuperMatrix<ExactComplex>;

/// Draws integers from a fixed pool, cycling.
struct Pool<'a> {
    values: &'a [i64],
    at: usize,
}

impl Pool<'_> {
    fn next(&mut self) -> i64 {
        let v = self.values[self.at % self.values.len()];
        self.at += 1;
        v
    }
}

fn random_element(pool: &mut Pool, gens: Generators, odd: bool, body: Option<i64>) -> E {
    let mut terms = Vec::new();
    if let Some(b) = body {
        terms.push((0u32, exact(b, pool.next() % 2)));
    }
    for _ in 0..3 {
        let mask = (pool.next().unsigned_abs() as u32) & gens.full_mask();
        if mask == 0 || (mask.count_ones() % 2 == 1) != odd {
            continue;
        }
        terms.push((mask, exact(pool.next() % 4, pool.next() % 3)));
    }
    E::from_terms(gens, terms).unwrap()
}

/// An even supermatrix whose diagonal blocks have invertible bodies.
fn random_matrix(pool: &mut Pool, p: usize, q: usize, gens: Generators) -> M {
    let n = p + q;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let odd = (i < p) != (j < p);
            let body = if odd {
                None
            } else if i == j {
                Some(5 + pool.next().rem_euclid(3))
            } else {
                Some(pool.next() % 2)
            };
            entries.push(random_element(pool, gens, odd, body));
        }
    }
    M::new(p, q, gens, entries).unwrap()
}

fn shapes() -> impl Strategy<Value = (usize, usize, usize, Vec<i64>)> {
    (0usize..=3, 0usize..=3, 0usize..=6)
        .prop_filter("non-empty", |(p, q, _)| p + q > 0)
        .prop_flat_map(|(p, q, n)| {
            (
                Just(p),
                Just(q),
                Just(n),
                prop::collection::vec(-1000i64..1000, 64),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn berezinian_is_multiplicative((p, q, n, values) in shapes()) {
        let gens = Generators::new(n).unwrap();
        let mut pool = Pool { values: &values, at: 0 };
        let a = random_matrix(&mut pool, p, q, gens);
        let b = random_matrix(&mut pool, p, q, gens);
        let ab = a.matmul(&b).unwrap();
        let lhs = ab.berezinian().unwrap();
        let rhs = &a.berezinian().unwrap() * &b.berezinian().unwrap();
        prop_assert!((&lhs - &rhs).is_zero());
    }

    #[test]
    fn block_formulas_agree((p, q, n, values) in shapes()) {
        let gens = Generators::new(n).unwrap();
        let mut pool = Pool { values: &values, at: 0 };
        let a = random_matrix(&mut pool, p, q, gens);
        let via_d = a.berezinian_via_odd_block().unwrap();
        let via_a = a.berezinian_via_even_block().unwrap();
        prop_assert!((&via_d - &via_a).is_zero());
    }

    #[test]
    fn supertranspose_preserves_berezinian((p, q, n, values) in shapes()) {
        let gens = Generators::new(n).unwrap();
        let mut pool = Pool { values: &values, at: 0 };
        let a = random_matrix(&mut pool, p, q, gens);
        let t = a.supertranspose();
        prop_assert!((&t.berezinian().unwrap() - &a.berezinian().unwrap()).is_zero());
        let t4 = t.supertranspose().supertranspose().supertranspose();
        prop_assert_eq!(t4, a);
    }

    #[test]
    fn inverse_is_two_sided((p, q, n, values) in shapes()) {
        let gens = Generators::new(n).unwrap();
        let mut pool = Pool { values: &values, at: 0 };
        let a = random_matrix(&mut pool, p, q, gens);
        let inv = a.inverse().unwrap();
        let id = M::identity(p, q, gens);
        prop_assert_eq!(a.matmul(&inv).unwrap(), id.clone());
        prop_assert_eq!(inv.matmul(&a).unwrap(), id);
        let ber_inv = inv.berezinian().unwrap();
        prop_assert!((&(&ber_inv * &a.berezinian().unwrap()) - &E::one(gens)).is_zero());
    }
}
