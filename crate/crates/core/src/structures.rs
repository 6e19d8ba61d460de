//! Spreads, good partitions, perfect difference sets and transversals.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};
use thiserror::Error;

use crate::echelon::{self, Row};
use crate::field::{ExtensionField, Field, FieldElement};
use crate::space::{Ambient, ProjectivePoint, ProjectiveSpace, SpaceError, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("parameter k must be at least 1")]
    ZeroK,
    #[error("subspaces are not skew")]
    NotSkew,
    #[error("subspace dimensions {0} and {1} are not complementary in the ambient space")]
    NotComplementary(usize, usize),
    #[error("the point lies on one of the subspaces")]
    PointOnSubspace,
    #[error("invalid structure: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> StructureError {
    StructureError::Invalid(msg.into())
}

pub(crate) fn indices(row: &[FieldElement]) -> Vec<u32> {
    row.iter().map(|x| x.index()).collect()
}

pub(crate) fn basis_json(s: &Subspace) -> Value {
    Value::from(s.basis().iter().map(|r| indices(r)).collect::<Vec<_>>())
}

fn unit(n: usize, i: usize) -> Row {
    let mut r = vec![FieldElement::ZERO; n];
    r[i] = FieldElement::ONE;
    r
}

/// A (k-1)-spread of PG(2k-1,q).
#[derive(Debug, Clone)]
pub struct Spread {
    pub k: usize,
    pub members: Vec<Subspace>,
    pub point_index: BTreeMap<ProjectivePoint, usize>,
}

/// The regular spread of PG(2k-1,q) obtained by field reduction: the
/// GF(q^k)-points of PG(1,q^k) read as (k-1)-subspaces over GF(q).
/// Members are sorted by their canonical bases.
pub fn build_spread(k: usize, field: &Field) -> Result<Spread, StructureError> {
    if k == 0 {
        return Err(StructureError::ZeroK);
    }
    let ambient = Ambient::projective(2 * k - 1);
    let ext = ExtensionField::new(field, k);
    let q = field.order() as u64;
    let ext_elements: Vec<Row> = (0..q.pow(k as u32))
        .map(|mut t| {
            let mut v = vec![FieldElement::ZERO; k];
            for c in v.iter_mut() {
                *c = FieldElement::from_index((t % q) as u32);
                t /= q;
            }
            v
        })
        .collect();
    let powers: Vec<Row> = (0..k).map(|i| unit(k, i)).collect();

    let mut heads: Vec<(Row, Row)> = ext_elements
        .iter()
        .map(|b| (ext.one(), b.clone()))
        .collect();
    heads.push((vec![FieldElement::ZERO; k], ext.one()));

    let mut members = Vec::with_capacity(heads.len());
    for (a, b) in heads {
        let rows: Vec<Row> = powers
            .iter()
            .map(|xi| {
                let mut r = ext.mul(&a, xi);
                r.extend(ext.mul(&b, xi));
                r
            })
            .collect();
        members.push(Subspace::from_vectors(field, ambient, &rows)?);
    }
    members.sort_by(|x, y| x.basis().cmp(y.basis()));

    let mut point_index = BTreeMap::new();
    for (i, m) in members.iter().enumerate() {
        for p in m.points(field) {
            point_index.insert(p, i);
        }
    }
    let spread = Spread {
        k,
        members,
        point_index,
    };
    spread.validate(field)?;
    Ok(spread)
}

impl Spread {
    pub fn member_of(&self, p: &ProjectivePoint) -> Option<usize> {
        self.point_index.get(p).copied()
    }

    /// Checks cardinality, member sizes, pairwise disjointness and cover,
    /// directly from the point sets.
    pub fn validate(&self, field: &Field) -> Result<(), StructureError> {
        let q = field.order() as u64;
        let k = self.k as u32;
        if self.members.len() as u64 != q.pow(k) + 1 {
            return Err(invalid(format!(
                "{} members, expected q^k+1",
                self.members.len()
            )));
        }
        let member_size = (q.pow(k) - 1) / (q - 1);
        let mut seen = BTreeSet::new();
        for m in &self.members {
            if m.dim() + 1 != self.k {
                return Err(invalid("member of wrong dimension"));
            }
            let pts = m.points(field);
            if pts.len() as u64 != member_size {
                return Err(invalid("member of wrong size"));
            }
            for p in pts {
                if !seen.insert(p) {
                    return Err(invalid("members are not disjoint"));
                }
            }
        }
        let total = (q.pow(2 * k) - 1) / (q - 1);
        if seen.len() as u64 != total {
            return Err(invalid("members do not cover the space"));
        }
        Ok(())
    }

    pub fn to_json(&self, field: &Field) -> Value {
        json!({
            "field": field.descriptor(),
            "k": self.k,
            "members": self.members.iter().map(basis_json).collect::<Vec<_>>(),
        })
    }
}

/// The partition {Q} ∪ A ∪ B of PG(2k,q) with assigned subspaces S(P):
/// k-dimensional for A, (k-1)-dimensional for B, and S(a) ∩ S(b) empty.
#[derive(Debug, Clone)]
pub struct GoodPartition {
    pub k: usize,
    pub q_point: ProjectivePoint,
    pub a: Vec<ProjectivePoint>,
    pub b: Vec<ProjectivePoint>,
    pub assigned: BTreeMap<ProjectivePoint, Subspace>,
}

struct Partial {
    a: Vec<ProjectivePoint>,
    b: Vec<ProjectivePoint>,
    assigned: BTreeMap<ProjectivePoint, Subspace>,
}

/// Builds a good partition of PG(2k,q) around `q_point` by induction on k.
///
/// The base case uses the pencil of lines through Q. Each step takes a
/// codimension-2 subspace Π through Q carrying a good partition, the pencil
/// of hyperplanes on Π, and lifts the assigned subspaces into those
/// hyperplanes. Free choices of points are lexicographically least.
pub fn build_good_partition(
    k: usize,
    field: &Field,
    q_point: &ProjectivePoint,
) -> Result<GoodPartition, StructureError> {
    if k == 0 {
        return Err(StructureError::ZeroK);
    }
    let n = 2 * k;
    let ambient = Ambient::projective(n);
    if q_point.coords.len() != n + 1 {
        return Err(SpaceError::Length {
            got: q_point.coords.len(),
            expected: n + 1,
        }
        .into());
    }
    let q_point = ProjectivePoint::new(field, &q_point.coords)?;

    // basis of the whole space with Q first
    let mut basis = vec![q_point.coords.clone()];
    for i in 0..=n {
        let mut trial = basis.clone();
        trial.push(unit(n + 1, i));
        if echelon::rank(field, &trial) == trial.len() {
            basis = trial;
        }
    }
    let part = partition_in(field, ambient, &basis, k)?;
    let gp = GoodPartition {
        k,
        q_point,
        a: part.a,
        b: part.b,
        assigned: part.assigned,
    };
    gp.validate(field)?;
    Ok(gp)
}

fn partition_in(
    field: &Field,
    ambient: Ambient,
    basis: &[Row],
    k: usize,
) -> Result<Partial, StructureError> {
    let span = |rows: &[Row]| Subspace::from_vectors(field, ambient, rows);
    let whole = span(basis)?;
    let q_point = ProjectivePoint {
        coords: basis[0].clone(),
    };
    let q_sub = span(&basis[..1])?;

    if k == 1 {
        let l0 = span(&basis[..2])?;
        let l0_points: BTreeSet<ProjectivePoint> = l0.points(field).into_iter().collect();
        let mut assigned = BTreeMap::new();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for p in whole.points(field) {
            if p == q_point {
                continue;
            }
            let ps = Subspace::from_point(field, ambient, &p)?;
            if l0_points.contains(&p) {
                assigned.insert(p.clone(), ps);
                b.push(p);
            } else {
                assigned.insert(p.clone(), Subspace::span(field, &[&ps, &q_sub])?);
                a.push(p);
            }
        }
        return Ok(Partial { a, b, assigned });
    }

    let dim = basis.len();
    let inner = partition_in(field, ambient, &basis[..dim - 2], k - 1)?;
    let pi = span(&basis[..dim - 2])?;
    let h0 = span(&basis[..dim - 1])?;
    let in_pi = |p: &ProjectivePoint| pi.contains_point(field, p);
    let in_h0 = |p: &ProjectivePoint| h0.contains_point(field, p);

    let all = whole.points(field);
    let new_b: Vec<ProjectivePoint> = all
        .iter()
        .filter(|p| in_h0(p) && !in_pi(p))
        .cloned()
        .collect();
    let new_a: Vec<ProjectivePoint> = all.iter().filter(|p| !in_h0(p)).cloned().collect();
    let lift_a = new_a
        .first()
        .ok_or_else(|| invalid("empty hyperplane pencil"))?;
    let lift_b = new_b
        .first()
        .ok_or_else(|| invalid("empty hyperplane pencil"))?;
    let ref_a = inner
        .a
        .first()
        .ok_or_else(|| invalid("empty A in inner partition"))?;
    let ref_b = inner
        .b
        .first()
        .ok_or_else(|| invalid("empty B in inner partition"))?;
    let lift_a = Subspace::from_point(field, ambient, lift_a)?;
    let lift_b = Subspace::from_point(field, ambient, lift_b)?;

    let mut assigned = BTreeMap::new();
    for p in &inner.a {
        assigned.insert(
            p.clone(),
            Subspace::span(field, &[&inner.assigned[p], &lift_a])?,
        );
    }
    for p in &new_a {
        let ps = Subspace::from_point(field, ambient, p)?;
        assigned.insert(
            p.clone(),
            Subspace::span(field, &[&ps, &inner.assigned[ref_a]])?,
        );
    }
    for p in &inner.b {
        assigned.insert(
            p.clone(),
            Subspace::span(field, &[&inner.assigned[p], &lift_b])?,
        );
    }
    for p in &new_b {
        let ps = Subspace::from_point(field, ambient, p)?;
        assigned.insert(
            p.clone(),
            Subspace::span(field, &[&ps, &inner.assigned[ref_b]])?,
        );
    }
    let mut a = inner.a;
    a.extend(new_a);
    let mut b = inner.b;
    b.extend(new_b);
    Ok(Partial { a, b, assigned })
}

impl GoodPartition {
    pub fn subspace_of(&self, p: &ProjectivePoint) -> Option<&Subspace> {
        self.assigned.get(p)
    }

    /// Checks every defining property exhaustively.
    pub fn validate(&self, field: &Field) -> Result<(), StructureError> {
        let q = field.order() as u64;
        let k = self.k as u32;
        let base = (q.pow(2 * k) - 1) / (q * q - 1);
        if self.a.len() as u64 != q * q * base {
            return Err(invalid(format!(
                "|A| = {}, expected {}",
                self.a.len(),
                q * q * base
            )));
        }
        if self.b.len() as u64 != q * base {
            return Err(invalid(format!(
                "|B| = {}, expected {}",
                self.b.len(),
                q * base
            )));
        }
        let space = ProjectiveSpace::new(2 * self.k, field)?;
        let mut all: BTreeSet<&ProjectivePoint> = BTreeSet::new();
        all.insert(&self.q_point);
        for p in self.a.iter().chain(&self.b) {
            if !all.insert(p) {
                return Err(invalid("parts overlap"));
            }
        }
        if all.len() != space.points().len() {
            return Err(invalid("parts do not cover the space"));
        }
        for (list, dim) in [(&self.a, self.k), (&self.b, self.k - 1)] {
            for p in list {
                let s = self
                    .assigned
                    .get(p)
                    .ok_or_else(|| invalid("point without subspace"))?;
                if s.dim() != dim {
                    return Err(invalid("assigned subspace has wrong dimension"));
                }
                if !s.contains_point(field, p) {
                    return Err(invalid("point not on its assigned subspace"));
                }
            }
        }
        for a in &self.a {
            let sa = &self.assigned[a];
            for b in &self.b {
                if sa.intersect(field, &self.assigned[b])?.is_some() {
                    return Err(invalid("S(a) meets S(b)"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self, field: &Field) -> Value {
        let entry = |p: &ProjectivePoint| json!({ "point": indices(&p.coords), "subspace": basis_json(&self.assigned[p]) });
        json!({
            "field": field.descriptor(),
            "k": self.k,
            "q_point": indices(&self.q_point.coords),
            "a": self.a.iter().map(entry).collect::<Vec<_>>(),
            "b": self.b.iter().map(entry).collect::<Vec<_>>(),
        })
    }
}

/// A perfect difference set in Z_v, v = q^2+q+1, normalized so that 0 and 1
/// are members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceSet {
    pub q: u64,
    pub v: u64,
    pub elements: Vec<u64>,
}

impl DifferenceSet {
    /// Differences distinct and the translates form a projective plane.
    pub fn validate(&self) -> Result<(), StructureError> {
        let v = self.v;
        if self.elements.len() as u64 != self.q + 1 {
            return Err(invalid("wrong number of elements"));
        }
        let mut diffs = BTreeSet::new();
        for &a in &self.elements {
            for &b in &self.elements {
                if a != b && !diffs.insert((a + v - b) % v) {
                    return Err(invalid(format!("difference {} repeats", (a + v - b) % v)));
                }
            }
        }
        let lines = self.lines();
        let mut count = vec![0u32; (v * v) as usize];
        for line in &lines {
            for &x in line {
                for &y in line {
                    if x < y {
                        count[(x * v + y) as usize] += 1;
                    }
                }
            }
        }
        for x in 0..v {
            for y in x + 1..v {
                if count[(x * v + y) as usize] != 1 {
                    return Err(invalid(format!("points {x},{y} not on exactly one line")));
                }
            }
        }
        Ok(())
    }

    /// The translates D + j, j = 0..v-1, each sorted.
    pub fn lines(&self) -> Vec<Vec<u64>> {
        (0..self.v)
            .map(|j| {
                let mut l: Vec<u64> = self.elements.iter().map(|&d| (d + j) % self.v).collect();
                l.sort_unstable();
                l
            })
            .collect()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&(x % self.v)).is_ok()
    }
}

/// PG(2,q) labelled by Z_v so that the lines are exactly the translates of
/// a difference set: `points[x]` is the point carrying label `x`.
#[derive(Debug, Clone)]
pub struct CyclicPlane {
    pub set: DifferenceSet,
    pub points: Vec<ProjectivePoint>,
}

impl CyclicPlane {
    pub fn label_of(&self, p: &ProjectivePoint) -> Option<u64> {
        self.points.iter().position(|x| x == p).map(|i| i as u64)
    }

    /// Line D + j as a subspace of PG(2,q).
    pub fn line(&self, field: &Field, j: u64) -> Subspace {
        let v = self.set.v;
        let rows: Vec<Row> = self
            .set
            .elements
            .iter()
            .map(|&d| self.points[((d + j) % v) as usize].coords.clone())
            .collect();
        Subspace::from_vectors(field, Ambient::projective(2), &rows).expect("nonzero points")
    }
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    (1..m).find(|&x| (a * x) % m == 1)
}

/// Singer construction: with ω primitive in GF(q^3), the labels x whose
/// points ⟨ω^x⟩ lie on the line ⟨1, ω⟩ form a perfect difference set. The
/// set (and labelling) is then normalized to the lexicographically least
/// image under x ↦ (x − a)·s with 0, 1 in the result.
pub fn cyclic_plane(field: &Field) -> Result<CyclicPlane, StructureError> {
    let q = field.order() as u64;
    let v = q * q + q + 1;
    let ext = ExtensionField::primitive(field, 3);
    let omega = ext.generator();

    let mut raw_points = Vec::with_capacity(v as usize);
    let mut raw = Vec::new();
    let mut w = ext.one();
    for x in 0..v {
        raw_points.push(ProjectivePoint::new(field, &w)?);
        if w[2].is_zero() {
            raw.push(x);
        }
        w = ext.mul(&w, &omega);
    }

    let mut best: Option<(Vec<u64>, u64, u64)> = None;
    for &a in &raw {
        for &b in &raw {
            if a == b {
                continue;
            }
            let Some(s) = inverse_mod((b + v - a) % v, v) else {
                continue;
            };
            let mut img: Vec<u64> = raw.iter().map(|&x| ((x + v - a) % v) * s % v).collect();
            img.sort_unstable();
            if best.as_ref().is_none_or(|(bset, _, _)| img < *bset) {
                best = Some((img, a, s));
            }
        }
    }
    let (elements, a, s) = best.expect("raw set contains 0 and 1");
    let s_inv = inverse_mod(s, v).expect("s is a unit");
    let points = (0..v)
        .map(|y| raw_points[((y * s_inv + a) % v) as usize].clone())
        .collect();
    let plane = CyclicPlane {
        set: DifferenceSet { q, v, elements },
        points,
    };
    plane.set.validate()?;
    if !labels_are_collinear(field, &plane) {
        return Err(invalid("cyclic labelling does not preserve collinearity"));
    }
    Ok(plane)
}

fn labels_are_collinear(field: &Field, plane: &CyclicPlane) -> bool {
    (0..plane.set.v).all(|j| plane.line(field, j).dim() == 1)
}

/// The normalized perfect difference set of order q.
/// Falls back to exhaustive search for v ≤ 133 if the algebraic
/// construction does not validate.
pub fn singer_difference_set(field: &Field) -> Result<DifferenceSet, StructureError> {
    let q = field.order() as u64;
    match cyclic_plane(field) {
        Ok(plane) => Ok(plane.set),
        Err(e) if q * q + q < 133 => search_difference_set(q).ok_or(e),
        Err(e) => Err(e),
    }
}

/// Exhaustive search for the lexicographically least perfect difference
/// set containing 0 and 1 mod q^2+q+1. Practical for v up to about 133.
pub fn search_difference_set(q: u64) -> Option<DifferenceSet> {
    let v = q * q + q + 1;
    let mut used = vec![false; v as usize];
    used[1] = true;
    used[(v - 1) as usize] = true;
    let mut set = vec![0u64, 1];

    fn extend(set: &mut Vec<u64>, used: &mut [bool], v: u64, want: usize) -> bool {
        if set.len() == want {
            return true;
        }
        let start = set.last().unwrap() + 1;
        for c in start..v {
            let diffs: Vec<u64> = set
                .iter()
                .flat_map(|&d| [(c + v - d) % v, (d + v - c) % v])
                .collect();
            let mut uniq = diffs.clone();
            uniq.sort_unstable();
            uniq.dedup();
            if uniq.len() != diffs.len() || diffs.iter().any(|&x| used[x as usize]) {
                continue;
            }
            for &x in &diffs {
                used[x as usize] = true;
            }
            set.push(c);
            if extend(set, used, v, want) {
                return true;
            }
            set.pop();
            for &x in &diffs {
                used[x as usize] = false;
            }
        }
        false
    }

    extend(&mut set, &mut used, v, (q + 1) as usize).then_some(DifferenceSet {
        q,
        v,
        elements: set,
    })
}

/// The unique line through `p` meeting both of two skew subspaces of
/// complementary dimension, computed as ⟨p, S1⟩ ∩ ⟨p, S2⟩.
pub fn transversal(
    field: &Field,
    p: &ProjectivePoint,
    s1: &Subspace,
    s2: &Subspace,
) -> Result<Subspace, StructureError> {
    let ambient = s1.ambient();
    if s2.ambient() != ambient {
        return Err(SpaceError::MixedAmbient.into());
    }
    if s1.dim() + s2.dim() + 1 != ambient.n {
        return Err(StructureError::NotComplementary(s1.dim(), s2.dim()));
    }
    if s1.intersect(field, s2)?.is_some() {
        return Err(StructureError::NotSkew);
    }
    if s1.contains_point(field, p) || s2.contains_point(field, p) {
        return Err(StructureError::PointOnSubspace);
    }
    let ps = Subspace::from_point(field, ambient, p)?;
    let a = Subspace::span(field, &[&ps, s1])?;
    let b = Subspace::span(field, &[&ps, s2])?;
    let line = a
        .intersect(field, &b)?
        .ok_or_else(|| invalid("empty transversal"))?;
    if line.dim() != 1 {
        return Err(invalid("transversal is not a line"));
    }
    Ok(line)
}

/// The single point where a line meets a subspace it is not contained in.
pub fn meet_point(
    field: &Field,
    line: &Subspace,
    s: &Subspace,
) -> Result<ProjectivePoint, StructureError> {
    let m = line
        .intersect(field, s)?
        .ok_or_else(|| invalid("line misses subspace"))?;
    if m.dim() != 0 {
        return Err(invalid("line meets subspace in more than a point"));
    }
    Ok(ProjectivePoint::new(field, &m.basis()[0])?)
}

impl DifferenceSet {
    pub fn to_json(&self) -> Value {
        json!({ "q": self.q, "v": self.v, "elements": self.elements })
    }
}
