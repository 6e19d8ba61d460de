use agcolor::bounds::{
    bounds_table, chromatic_index, construction_count, line_count, lower_bounds, psi_upper, to_csv,
    BoundsRow,
};
use agcolor::{AffineSpace, Field, Method};
use proptest::prelude::*;

/// Floor of (√r + c)/d by scanning integers, for small r.
fn floor_radical(r: u128, c: u128, d: u128) -> u128 {
    let mut s = 0u128;
    while (s + 1) * (s + 1) <= r {
        s += 1;
    }
    // (s + c)/d floors the same as (√r + c)/d because c, d are integers
    (s + c) / d
}

#[test]
fn radical_bound_by_direct_evaluation() {
    for (n, q) in [
        (3u32, 2u128),
        (4, 2),
        (3, 3),
        (5, 2),
        (4, 3),
        (3, 4),
        (6, 2),
    ] {
        let v = q.pow(n);
        let c = (q * q + 1) * (q - 1);
        let r = 4 * v * (v - 1) * (v - q * q) + c * c;
        let expected = floor_radical(r, c, 2 * (q - 1));
        assert_eq!(psi_upper(n, q as u64).unwrap().exact, expected, "({n},{q})");
    }
    assert_eq!(psi_upper(3, 2).unwrap().exact, 17);
    assert_eq!(psi_upper(4, 2).unwrap().exact, 56);
}

#[test]
fn chromatic_examples() {
    assert_eq!(chromatic_index(2, 3).unwrap(), 4);
    assert_eq!(chromatic_index(3, 2).unwrap(), 7);
    for q in [2u64, 4, 5] {
        assert_eq!(chromatic_index(2, q).unwrap(), q as u128 + 1);
    }
}

#[test]
fn lower_bound_examples() {
    let b = lower_bounds(4, 2).unwrap();
    assert_eq!((b.psi, b.alpha), (29, Some(24)));
    let b = lower_bounds(3, 2).unwrap();
    assert_eq!(b.alpha, Some(10));
    assert_eq!(b.psi_odd_formula, Some(9));
    let b = lower_bounds(2, 3).unwrap();
    assert_eq!((b.psi, b.alpha), (8, Some(4)));
    assert_eq!(lower_bounds(5, 2).unwrap().alpha, None);
}

#[test]
fn odd_formula_specializes_to_q_cubed_plus_one() {
    for q in [2u64, 3, 4] {
        assert_eq!(
            lower_bounds(3, q).unwrap().psi_odd_formula,
            Some(q as u128 * q as u128 * q as u128 + 1)
        );
    }
}

#[test]
fn exact_is_at_most_simplified() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for n in 3..=8u32 {
            let u = psi_upper(n, q).unwrap();
            assert!(u.exact <= u.simplified, "({n},{q}): {u:?}");
        }
    }
}

#[test]
fn line_counts_match_enumeration() {
    for (n, q) in [(2usize, 2u64), (2, 3), (3, 2), (4, 2), (3, 3)] {
        let s = AffineSpace::new(n, &Field::of_order(q).unwrap()).unwrap();
        assert_eq!(line_count(n as u32, q).unwrap(), s.num_lines() as u128);
        assert_eq!(
            chromatic_index(n as u32, q).unwrap(),
            s.num_directions() as u128
        );
    }
}

#[test]
fn table_rows() {
    let rows = bounds_table(&[2, 3, 4, 5], &[2, 3]).unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(BoundsRow::is_consistent));
    for r in rows.iter().filter(|r| r.n == 2) {
        let q = r.q as u128;
        assert_eq!(r.plane_exact_psi, Some((q + 1) * (q + 1) / 2));
        assert_eq!(r.plane_exact_alpha, Some(q + 1));
    }
    let csv = to_csv(&rows);
    assert_eq!(csv.lines().count(), 9);
    assert!(csv.starts_with(
        "n,q,v,lines,chromatic,psi_lower,alpha_lower,psi_upper_exact,psi_upper_simplified,plane_exact_psi,plane_exact_alpha\n"
    ));
    assert!(csv.contains("\n3,2,8,28,7,10,10,17,18,,\n"));
}

#[test]
fn construction_counts_match_lower_bounds() {
    for q in [2u64, 3, 4] {
        assert_eq!(
            construction_count(Method::EvenPseudo, 4, q),
            Some(lower_bounds(4, q).unwrap().psi)
        );
        assert_eq!(
            construction_count(Method::EvenAchromatic, 4, q),
            lower_bounds(4, q).unwrap().alpha
        );
        assert_eq!(
            construction_count(Method::Ag3Achromatic, 3, q),
            lower_bounds(3, q).unwrap().alpha
        );
        assert_eq!(
            construction_count(Method::OddPseudo, 5, q),
            Some(lower_bounds(5, q).unwrap().psi)
        );
    }
    assert_eq!(construction_count(Method::EvenPseudo, 3, 2), None);
}

proptest! {
    #[test]
    fn rows_are_consistent(n in 2u32..=8, q in prop::sample::select(&[2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 32][..])) {
        let row = agcolor::bounds::bounds_row(n, q).unwrap();
        prop_assert!(row.is_consistent());
    }
}
