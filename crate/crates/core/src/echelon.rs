//! Row reduction over a finite field.

use crate::field::{Field, FieldElement};

pub type Row = Vec<FieldElement>;

/// Reduced row echelon form of the row space spanned by `rows`, zero rows
/// dropped. Two row spaces are equal iff their reduced forms are equal.
pub fn rref(field: &Field, rows: &[Row]) -> Vec<Row> {
    let mut m: Vec<Row> = rows.to_vec();
    let width = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = field.inv(m[rank][col]).expect("pivot is nonzero");
        for x in m[rank].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(factor, p));
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    m.truncate(rank);
    m
}

pub fn rank(field: &Field, rows: &[Row]) -> usize {
    rref(field, rows).len()
}

/// Reduces `v` against an RREF basis; the result is zero iff `v` lies in
/// the row space.
pub fn reduce(field: &Field, basis: &[Row], v: &[FieldElement]) -> Row {
    let mut out = v.to_vec();
    for row in basis {
        let col = row
            .iter()
            .position(|x| !x.is_zero())
            .expect("basis rows are nonzero");
        let factor = out[col];
        if !factor.is_zero() {
            for (x, &b) in out.iter_mut().zip(row) {
                *x = field.sub(*x, field.mul(factor, b));
            }
        }
    }
    out
}

pub fn contains(field: &Field, basis: &[Row], v: &[FieldElement]) -> bool {
    reduce(field, basis, v).iter().all(|x| x.is_zero())
}

/// Intersection of two row spaces (Zassenhaus), returned in RREF.
pub fn intersect(field: &Field, a: &[Row], b: &[Row], width: usize) -> Vec<Row> {
    let zero = FieldElement::ZERO;
    let mut block: Vec<Row> = Vec::with_capacity(a.len() + b.len());
    for r in a {
        block.push(r.iter().chain(r.iter()).copied().collect());
    }
    for r in b {
        block.push(
            r.iter()
                .copied()
                .chain(std::iter::repeat_n(zero, width))
                .collect(),
        );
    }
    let reduced = rref(field, &block);
    let meet: Vec<Row> = reduced
        .into_iter()
        .filter(|r| r[..width].iter().all(|x| x.is_zero()))
        .map(|r| r[width..].to_vec())
        .collect();
    rref(field, &meet)
}

/// Every nonzero vector of the row space with first nonzero coefficient
/// one: the projective points of the span, in lexicographic order.
pub fn normalized_vectors(field: &Field, basis: &[Row]) -> Vec<Row> {
    let q = field.order() as u64;
    let d = basis.len();
    let width = basis.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for t in 1..q.pow(d as u32) {
        let mut coeffs = vec![FieldElement::ZERO; d];
        let mut x = t;
        for c in coeffs.iter_mut().rev() {
            *c = FieldElement::from_index((x % q) as u32);
            x /= q;
        }
        // RREF rows have distinct leading columns, so the first nonzero
        // coefficient controls the first nonzero coordinate
        if coeffs.iter().find(|c| !c.is_zero()) != Some(&FieldElement::ONE) {
            continue;
        }
        let mut v = vec![FieldElement::ZERO; width];
        for (c, row) in coeffs.iter().zip(basis) {
            if c.is_zero() {
                continue;
            }
            for (x, &b) in v.iter_mut().zip(row) {
                *x = field.add(*x, field.mul(*c, b));
            }
        }
        out.push(v);
    }
    out.sort();
    out
}

/// Scales `v` so its first nonzero entry is one. Returns `None` for zero.
pub fn normalize(field: &Field, v: &[FieldElement]) -> Option<Row> {
    let lead = *v.iter().find(|x| !x.is_zero())?;
    let inv = field.inv(lead).ok()?;
    Some(v.iter().map(|&x| field.mul(x, inv)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[u32]) -> Row {
        v.iter().map(|&x| FieldElement::from_index(x)).collect()
    }

    #[test]
    fn rref_is_canonical() {
        let f = Field::new(3, 1).unwrap();
        let a = rref(&f, &[row(&[1, 2, 0]), row(&[0, 1, 1])]);
        let b = rref(&f, &[row(&[1, 0, 1]), row(&[2, 1, 0])]);
        assert_eq!(a, b);
        assert_eq!(a, vec![row(&[1, 0, 1]), row(&[0, 1, 1])]);
    }

    #[test]
    fn intersection_of_planes_is_a_line() {
        let f = Field::new(2, 1).unwrap();
        let a = rref(
            &f,
            &[row(&[1, 0, 0, 0]), row(&[0, 1, 0, 0]), row(&[0, 0, 1, 0])],
        );
        let b = rref(
            &f,
            &[row(&[0, 0, 0, 1]), row(&[0, 1, 0, 0]), row(&[0, 0, 1, 0])],
        );
        let m = intersect(&f, &a, &b, 4);
        assert_eq!(m, vec![row(&[0, 1, 0, 0]), row(&[0, 0, 1, 0])]);
    }

    #[test]
    fn normalized_vectors_count() {
        let f = Field::new(3, 1).unwrap();
        let basis = rref(&f, &[row(&[1, 0, 0]), row(&[0, 1, 0]), row(&[0, 0, 1])]);
        assert_eq!(normalized_vectors(&f, &basis).len(), 13);
    }
}
