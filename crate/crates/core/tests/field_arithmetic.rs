use agcolor::field::{prime_power, Field, FieldError, Op};
use agcolor::{FieldElement, Limits};
use proptest::prelude::*;

fn el(i: u32) -> FieldElement {
    FieldElement::from_index(i)
}

const ORDERS: [u64; 18] = [
    2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32,
];

#[test]
fn axioms_hold_exhaustively_up_to_nine() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let f = Field::of_order(q).unwrap();
        let all: Vec<FieldElement> = f.elements().collect();
        for &a in &all {
            assert_eq!(f.add(a, FieldElement::ZERO), a);
            assert_eq!(f.mul(a, FieldElement::ONE), a);
            assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            }
            for &b in &all {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.add(f.sub(a, b), b), a);
                for &c in &all {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)), "q={q}");
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)), "q={q}");
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c)),
                        "q={q}"
                    );
                }
            }
        }
    }
}

/// GF(p) arithmetic checked against integer arithmetic mod p.
#[test]
fn prime_fields_agree_with_modular_integers() {
    for p in [2u32, 3, 5, 7, 11, 13, 31] {
        let f = Field::new(p, 1).unwrap();
        for a in 0..p {
            for b in 0..p {
                assert_eq!(f.add(el(a), el(b)).index(), (a + b) % p);
                assert_eq!(f.mul(el(a), el(b)).index(), (a * b) % p);
            }
        }
    }
}

/// GF(2^m) multiplication checked against carry-less multiplication reduced
/// by the field's own modulus.
#[test]
fn binary_fields_agree_with_carryless_products() {
    for m in 2..=5u32 {
        let f = Field::new(2, m).unwrap();
        let modulus: u32 = f.modulus().iter().enumerate().map(|(i, &c)| c << i).sum();
        let q = 1u32 << m;
        for a in 0..q {
            for b in 0..q {
                let mut prod = 0u32;
                for i in 0..m {
                    if b >> i & 1 == 1 {
                        prod ^= a << i;
                    }
                }
                for i in (m..2 * m).rev() {
                    if prod >> i & 1 == 1 {
                        prod ^= modulus << (i - m);
                    }
                }
                assert_eq!(f.mul(el(a), el(b)).index(), prod);
                assert_eq!(f.add(el(a), el(b)).index(), a ^ b);
            }
        }
    }
}

#[test]
fn multiplicative_group_is_cyclic() {
    for q in ORDERS {
        let f = Field::of_order(q).unwrap();
        let g = f.primitive_element();
        assert_eq!(f.multiplicative_order(g), Some(q as u32 - 1), "q={q}");
        let powers: std::collections::BTreeSet<u32> =
            (0..q - 1).map(|e| f.pow(g, e).index()).collect();
        assert_eq!(powers.len() as u64, q - 1);
    }
}

#[test]
fn moduli_are_monic_irreducible_and_least() {
    assert_eq!(Field::new(2, 1).unwrap().modulus(), &[0, 1]);
    assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
    assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    // independent check: a quadratic or cubic is irreducible iff it has no
    // root, and every monic candidate lexicographically below the chosen
    // modulus (constant term compared first) has one
    for (p, m) in [
        (2u32, 2u32),
        (2, 3),
        (3, 2),
        (3, 3),
        (5, 2),
        (5, 3),
        (7, 2),
        (7, 3),
    ] {
        let f = Field::with_limits(
            p,
            m,
            &Limits {
                max_q: 343,
                ..Limits::default()
            },
        )
        .unwrap();
        let chosen: Vec<u32> = f.modulus().to_vec();
        let has_root =
            |c: &[u32]| (0..p).any(|x| c.iter().rev().fold(0u32, |acc, &k| (acc * x + k) % p) == 0);
        assert!(!has_root(&chosen));
        let key = |c: &[u32]| c[..m as usize].to_vec();
        for t in 0..p.pow(m) {
            let mut c = vec![0u32; m as usize + 1];
            let mut x = t;
            for i in (0..m as usize).rev() {
                c[i] = x % p;
                x /= p;
            }
            c[m as usize] = 1;
            if key(&c) < key(&chosen) {
                assert!(
                    has_root(&c),
                    "GF({p}^{m}): {c:?} is irreducible and smaller"
                );
            }
        }
    }
}

#[test]
fn examples_and_errors() {
    let f5 = Field::new(5, 1).unwrap();
    assert_eq!(f5.mul(el(2), el(3)), el(1));
    assert_eq!(f5.inv(el(2)), Ok(el(3)));
    let f4 = Field::new(2, 2).unwrap();
    assert_eq!(f4.mul(el(2), el(2)), el(3));
    assert_eq!(
        f4.arith(el(3), el(0), Op::Div),
        Err(FieldError::DivisionByZero)
    );
    assert_eq!(f4.inv(el(0)), Err(FieldError::DivisionByZero));
    assert_eq!(Field::new(6, 1), Err(FieldError::NotPrime(6)));
    assert!(matches!(
        Field::of_order(64),
        Err(FieldError::TooLarge { .. })
    ));
    assert_eq!(prime_power(12), None);
    assert_eq!(prime_power(27), Some((3, 3)));
}

fn field_and_triple() -> impl Strategy<Value = (u64, u32, u32, u32)> {
    prop::sample::select(&[11u64, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32][..])
        .prop_flat_map(|q| (Just(q), 0..q as u32, 0..q as u32, 0..q as u32))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn axioms_hold_on_random_triples((q, a, b, c) in field_and_triple()) {
        let f = Field::of_order(q).unwrap();
        let (a, b, c) = (el(a), el(b), el(c));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        if !b.is_zero() {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        }
    }
}
