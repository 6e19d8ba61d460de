//! AG(n,q) and PG(n,q): points, canonical lines, subspaces and incidence.
//!
//! The hyperplane at infinity is always `x_n = 0` in homogeneous
//! coordinates `(x_0 : ... : x_n)`, and the affine point `(a_1, ..., a_n)`
//! embeds as `(a_1 : ... : a_n : 1)`. Directions of affine lines are the
//! points of that hyperplane, written with their first `n` coordinates.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::echelon::{self, Row};
use crate::field::{Field, FieldDescriptor, FieldElement, FieldError};
use crate::Limits;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension {n} outside the supported range 1..={max}")]
    Dimension { n: usize, max: usize },
    #[error("space has {points} points, above the limit {limit}")]
    TooLarge { points: u64, limit: u64 },
    #[error("a line needs two distinct points")]
    SamePoint,
    #[error("coordinate vector has length {got}, expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("inputs live in different ambient spaces")]
    MixedAmbient,
    #[error("subspace lies entirely in the hyperplane at infinity")]
    AtInfinity,
    #[error("span of an empty set")]
    Empty,
    #[error("malformed line id {0:?}")]
    BadLineId(String),
    #[error("line id {0:?} is not a canonical line of this space")]
    UnknownLine(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Affine,
    Projective,
}

/// The space a subspace lives in: `AG(n,q)` or `PG(n,q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ambient {
    pub kind: SpaceKind,
    pub n: usize,
}

impl Ambient {
    pub fn affine(n: usize) -> Self {
        Ambient {
            kind: SpaceKind::Affine,
            n,
        }
    }

    pub fn projective(n: usize) -> Self {
        Ambient {
            kind: SpaceKind::Projective,
            n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub kind: SpaceKind,
    pub n: usize,
    pub field: FieldDescriptor,
}

impl SpaceDescriptor {
    pub fn affine(n: usize, field: &Field) -> Self {
        SpaceDescriptor {
            kind: SpaceKind::Affine,
            n,
            field: field.descriptor(),
        }
    }

    pub fn projective(n: usize, field: &Field) -> Self {
        SpaceDescriptor {
            kind: SpaceKind::Projective,
            n,
            field: field.descriptor(),
        }
    }

    pub fn order(&self) -> u64 {
        (self.field.p as u64).pow(self.field.m)
    }

    /// Points of the space in lexicographic order, as coordinate vectors
    /// (`n` affine coordinates, or `n+1` normalized homogeneous ones).
    pub fn enumerate_points(&self) -> Result<Vec<Vec<FieldElement>>, SpaceError> {
        let field = Field::from_descriptor(&self.field)?;
        match self.kind {
            SpaceKind::Affine => {
                let space = AffineSpace::new(self.n, &field)?;
                Ok((0..space.num_points() as u32)
                    .map(|p| space.point_coords(p))
                    .collect())
            }
            SpaceKind::Projective => {
                let space = ProjectiveSpace::new(self.n, &field)?;
                Ok(space.points().iter().map(|p| p.coords.clone()).collect())
            }
        }
    }
}

fn check_size(n: usize, points: Option<u64>, limits: &Limits) -> Result<(), SpaceError> {
    if n == 0 || n > limits.max_n {
        return Err(SpaceError::Dimension {
            n,
            max: limits.max_n,
        });
    }
    match points {
        Some(p) if p <= limits.max_points => Ok(()),
        p => Err(SpaceError::TooLarge {
            points: p.unwrap_or(u64::MAX),
            limit: limits.max_points,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AffinePoint {
    pub coords: Vec<FieldElement>,
}

/// Homogeneous coordinates normalized so the first nonzero entry is one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProjectivePoint {
    pub coords: Vec<FieldElement>,
}

impl ProjectivePoint {
    pub fn new(field: &Field, coords: &[FieldElement]) -> Result<Self, SpaceError> {
        echelon::normalize(field, coords)
            .map(|coords| ProjectivePoint { coords })
            .ok_or(SpaceError::ZeroVector)
    }

    pub fn from_affine(p: &AffinePoint) -> Self {
        let mut coords = p.coords.clone();
        coords.push(FieldElement::ONE);
        ProjectivePoint { coords }
    }

    pub fn is_at_infinity(&self) -> bool {
        self.coords.last().is_some_and(|x| x.is_zero())
    }

    /// The affine point, if this point is not at infinity.
    pub fn to_affine(&self, field: &Field) -> Option<AffinePoint> {
        let last = *self.coords.last()?;
        let inv = field.inv(last).ok()?;
        let n = self.coords.len() - 1;
        Some(AffinePoint {
            coords: self.coords[..n]
                .iter()
                .map(|&x| field.mul(x, inv))
                .collect(),
        })
    }
}

fn join(v: &[FieldElement]) -> String {
    v.iter()
        .map(|x| x.index().to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// An affine line in canonical form: its direction (a point at infinity,
/// first nonzero coordinate one) and its lexicographically least point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineLine {
    pub direction: Vec<FieldElement>,
    pub base: AffinePoint,
}

impl AffineLine {
    /// Stable textual id, `d:<direction indices>|b:<base indices>`.
    pub fn id(&self) -> String {
        format!("d:{}|b:{}", join(&self.direction), join(&self.base.coords))
    }

    /// Parses an id without checking canonicity; see
    /// [`AffineSpace::parse_line_id`] for that.
    pub fn parse_id(id: &str) -> Result<AffineLine, SpaceError> {
        let bad = || SpaceError::BadLineId(id.to_string());
        let (d, b) = id.split_once('|').ok_or_else(bad)?;
        let d = d.strip_prefix("d:").ok_or_else(bad)?;
        let b = b.strip_prefix("b:").ok_or_else(bad)?;
        let parse = |s: &str| -> Result<Vec<FieldElement>, SpaceError> {
            s.split(',')
                .map(|t| {
                    t.parse::<u32>()
                        .map(FieldElement::from_index)
                        .map_err(|_| bad())
                })
                .collect()
        };
        let direction = parse(d)?;
        let base = AffinePoint { coords: parse(b)? };
        if direction.len() != base.coords.len() {
            return Err(bad());
        }
        Ok(AffineLine { direction, base })
    }

    pub fn point_at_infinity(&self) -> ProjectivePoint {
        let mut coords = self.direction.clone();
        coords.push(FieldElement::ZERO);
        ProjectivePoint { coords }
    }
}

impl fmt::Display for AffineLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// A subspace of PG(n,q), or the projective closure of an affine subspace
/// of AG(n,q), stored as the reduced row echelon basis of its underlying
/// vector subspace of `GF(q)^(n+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: Ambient,
    basis: Vec<Row>,
}

impl Subspace {
    /// Builds the span of the given homogeneous vectors.
    pub fn from_vectors(
        field: &Field,
        ambient: Ambient,
        vectors: &[Row],
    ) -> Result<Self, SpaceError> {
        if vectors.is_empty() {
            return Err(SpaceError::Empty);
        }
        for v in vectors {
            if v.len() != ambient.n + 1 {
                return Err(SpaceError::Length {
                    got: v.len(),
                    expected: ambient.n + 1,
                });
            }
        }
        let basis = echelon::rref(field, vectors);
        if basis.is_empty() {
            return Err(SpaceError::ZeroVector);
        }
        let s = Subspace { ambient, basis };
        if ambient.kind == SpaceKind::Affine && s.is_at_infinity() {
            return Err(SpaceError::AtInfinity);
        }
        Ok(s)
    }

    pub fn from_point(
        field: &Field,
        ambient: Ambient,
        p: &ProjectivePoint,
    ) -> Result<Self, SpaceError> {
        Self::from_vectors(field, ambient, std::slice::from_ref(&p.coords))
    }

    pub fn from_affine_points(
        field: &Field,
        n: usize,
        pts: &[AffinePoint],
    ) -> Result<Self, SpaceError> {
        let rows: Vec<Row> = pts
            .iter()
            .map(|p| ProjectivePoint::from_affine(p).coords)
            .collect();
        Self::from_vectors(field, Ambient::affine(n), &rows)
    }

    /// The smallest subspace containing all inputs.
    pub fn span(field: &Field, parts: &[&Subspace]) -> Result<Self, SpaceError> {
        let first = parts.first().ok_or(SpaceError::Empty)?;
        if parts.iter().any(|s| s.ambient != first.ambient) {
            return Err(SpaceError::MixedAmbient);
        }
        let rows: Vec<Row> = parts.iter().flat_map(|s| s.basis.iter().cloned()).collect();
        Self::from_vectors(field, first.ambient, &rows)
    }

    /// Intersection, or `None` when empty. In an affine ambient the result
    /// is `None` whenever the projective intersection lies at infinity.
    pub fn intersect(
        &self,
        field: &Field,
        other: &Subspace,
    ) -> Result<Option<Subspace>, SpaceError> {
        if self.ambient != other.ambient {
            return Err(SpaceError::MixedAmbient);
        }
        let basis = echelon::intersect(field, &self.basis, &other.basis, self.ambient.n + 1);
        if basis.is_empty() {
            return Ok(None);
        }
        let s = Subspace {
            ambient: self.ambient,
            basis,
        };
        if self.ambient.kind == SpaceKind::Affine && s.is_at_infinity() {
            return Ok(None);
        }
        Ok(Some(s))
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn basis(&self) -> &[Row] {
        &self.basis
    }

    /// Projective dimension (affine dimension for affine subspaces).
    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn is_at_infinity(&self) -> bool {
        let last = self.ambient.n;
        self.basis.iter().all(|r| r[last].is_zero())
    }

    pub fn contains_point(&self, field: &Field, p: &ProjectivePoint) -> bool {
        echelon::contains(field, &self.basis, &p.coords)
    }

    pub fn contains(&self, field: &Field, other: &Subspace) -> bool {
        other
            .basis
            .iter()
            .all(|r| echelon::contains(field, &self.basis, r))
    }

    /// All projective points, in lexicographic order.
    pub fn points(&self, field: &Field) -> Vec<ProjectivePoint> {
        echelon::normalized_vectors(field, &self.basis)
            .into_iter()
            .map(|coords| ProjectivePoint { coords })
            .collect()
    }

    /// Affine points of the subspace, in lexicographic order.
    pub fn affine_points(&self, field: &Field) -> Vec<AffinePoint> {
        let mut out: Vec<AffinePoint> = self
            .points(field)
            .iter()
            .filter_map(|p| p.to_affine(field))
            .collect();
        out.sort();
        out
    }

    /// The part of this subspace inside the hyperplane at infinity.
    pub fn at_infinity(&self, field: &Field) -> Option<Subspace> {
        let n = self.ambient.n;
        let mut e = vec![FieldElement::ZERO; n + 1];
        e[n] = FieldElement::ONE;
        let mut hyper = Vec::new();
        for i in 0..n {
            let mut r = vec![FieldElement::ZERO; n + 1];
            r[i] = FieldElement::ONE;
            hyper.push(r);
        }
        let basis = echelon::intersect(field, &self.basis, &hyper, n + 1);
        (!basis.is_empty()).then(|| Subspace {
            ambient: Ambient::projective(n),
            basis,
        })
    }

    /// Reinterprets an affine subspace as a subspace of PG(n,q).
    pub fn projective_closure(&self) -> Subspace {
        Subspace {
            ambient: Ambient::projective(self.ambient.n),
            basis: self.basis.clone(),
        }
    }

    /// Restriction of a projective subspace to AG(n,q).
    pub fn affine_part(&self) -> Result<Subspace, SpaceError> {
        if self.is_at_infinity() {
            return Err(SpaceError::AtInfinity);
        }
        Ok(Subspace {
            ambient: Ambient::affine(self.ambient.n),
            basis: self.basis.clone(),
        })
    }
}

/// The hyperplane at infinity of PG(n,q).
pub fn hyperplane_at_infinity(field: &Field, n: usize) -> Subspace {
    let rows: Vec<Row> = (0..n)
        .map(|i| {
            let mut r = vec![FieldElement::ZERO; n + 1];
            r[i] = FieldElement::ONE;
            r
        })
        .collect();
    Subspace::from_vectors(field, Ambient::projective(n), &rows).expect("n >= 1")
}

/// Canonical line of an [`AffineSpace`]: direction index, least point and
/// all points (sorted ids).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineRecord {
    pub direction: u32,
    pub base: u32,
    pub points: Vec<u32>,
}

/// AG(n,q) with every point, direction and line enumerated.
///
/// Points are identified by ids in `0..q^n`: the coordinate vector read as
/// a base-`q` number with the first coordinate most significant, so id
/// order is lexicographic order. Lines are sorted by `(direction, base)`.
#[derive(Debug, Clone)]
pub struct AffineSpace {
    field: Field,
    n: usize,
    num_points: u32,
    directions: Vec<Row>,
    dir_index: HashMap<Row, u32>,
    lines: Vec<LineRecord>,
    line_of: Vec<u32>,
}

impl AffineSpace {
    pub fn new(n: usize, field: &Field) -> Result<Self, SpaceError> {
        Self::with_limits(n, field, &Limits::default())
    }

    pub fn with_limits(n: usize, field: &Field, limits: &Limits) -> Result<Self, SpaceError> {
        let q = field.order() as u64;
        let points = q.checked_pow(n as u32);
        check_size(n, points, limits)?;
        let num_points = points.unwrap() as u32;

        let mut full = Vec::new();
        for i in 0..n {
            let mut r = vec![FieldElement::ZERO; n];
            r[i] = FieldElement::ONE;
            full.push(r);
        }
        let directions = echelon::normalized_vectors(field, &full);
        let dir_index: HashMap<Row, u32> = directions
            .iter()
            .enumerate()
            .map(|(i, d)| (d.clone(), i as u32))
            .collect();

        let mut space = AffineSpace {
            field: field.clone(),
            n,
            num_points,
            directions,
            dir_index,
            lines: Vec::new(),
            line_of: Vec::new(),
        };
        let nd = space.directions.len();
        let mut line_of = vec![u32::MAX; num_points as usize * nd];
        let mut lines = Vec::new();
        for d in 0..nd {
            let dir = space.directions[d].clone();
            for p in 0..num_points {
                if line_of[p as usize * nd + d] != u32::MAX {
                    continue;
                }
                let mut pts: Vec<u32> = field
                    .elements()
                    .map(|t| space.translate(p, &dir, t))
                    .collect();
                pts.sort_unstable();
                for &x in &pts {
                    line_of[x as usize * nd + d] = lines.len() as u32;
                }
                lines.push(LineRecord {
                    direction: d as u32,
                    base: pts[0],
                    points: pts,
                });
            }
        }
        space.lines = lines;
        space.line_of = line_of;
        Ok(space)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor::affine(self.n, &self.field)
    }

    pub fn num_points(&self) -> usize {
        self.num_points as usize
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn num_directions(&self) -> usize {
        self.directions.len()
    }

    pub fn point_coords(&self, id: u32) -> Row {
        let q = self.q();
        let mut out = vec![FieldElement::ZERO; self.n];
        let mut x = id;
        for c in out.iter_mut().rev() {
            *c = FieldElement::from_index(x % q);
            x /= q;
        }
        out
    }

    pub fn point_id(&self, coords: &[FieldElement]) -> u32 {
        coords.iter().fold(0, |acc, c| acc * self.q() + c.index())
    }

    pub fn point(&self, id: u32) -> AffinePoint {
        AffinePoint {
            coords: self.point_coords(id),
        }
    }

    /// `p + t * v`.
    pub fn translate(&self, p: u32, v: &[FieldElement], t: FieldElement) -> u32 {
        let f = &self.field;
        let c: Row = self
            .point_coords(p)
            .iter()
            .zip(v)
            .map(|(&a, &b)| f.add(a, f.mul(t, b)))
            .collect();
        self.point_id(&c)
    }

    pub fn directions(&self) -> &[Row] {
        &self.directions
    }

    /// Index of the direction of a nonzero vector (normalized first).
    pub fn direction_index(&self, v: &[FieldElement]) -> Option<u32> {
        let norm = echelon::normalize(&self.field, v)?;
        self.dir_index.get(&norm).copied()
    }

    pub fn lines(&self) -> &[LineRecord] {
        &self.lines
    }

    pub fn line_record(&self, idx: usize) -> &LineRecord {
        &self.lines[idx]
    }

    pub fn line(&self, idx: usize) -> AffineLine {
        let rec = &self.lines[idx];
        AffineLine {
            direction: self.directions[rec.direction as usize].clone(),
            base: self.point(rec.base),
        }
    }

    pub fn line_id(&self, idx: usize) -> String {
        self.line(idx).id()
    }

    /// Index of a canonical line, or `None` if it is not one.
    pub fn line_index(&self, line: &AffineLine) -> Option<usize> {
        if line.base.coords.len() != self.n
            || line.base.coords.iter().any(|c| c.index() >= self.q())
        {
            return None;
        }
        let d = *self.dir_index.get(&line.direction)?;
        let base = self.point_id(&line.base.coords);
        let idx = self.line_with_direction(base, d);
        (self.lines[idx].base == base).then_some(idx)
    }

    pub fn parse_line_id(&self, id: &str) -> Result<usize, SpaceError> {
        let line = AffineLine::parse_id(id)?;
        self.line_index(&line)
            .ok_or_else(|| SpaceError::UnknownLine(id.to_string()))
    }

    /// The line through point `p` with direction index `d`.
    pub fn line_with_direction(&self, p: u32, d: u32) -> usize {
        self.line_of[p as usize * self.directions.len() + d as usize] as usize
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, p: u32, q: u32) -> Result<usize, SpaceError> {
        if p == q {
            return Err(SpaceError::SamePoint);
        }
        let f = &self.field;
        let diff: Row = self
            .point_coords(q)
            .iter()
            .zip(self.point_coords(p))
            .map(|(&a, b)| f.sub(a, b))
            .collect();
        let d = self.direction_index(&diff).expect("distinct points differ");
        Ok(self.line_with_direction(p, d))
    }

    pub fn line_through_points(
        &self,
        p: &AffinePoint,
        q: &AffinePoint,
    ) -> Result<AffineLine, SpaceError> {
        for x in [p, q] {
            if x.coords.len() != self.n {
                return Err(SpaceError::Length {
                    got: x.coords.len(),
                    expected: self.n,
                });
            }
        }
        let idx = self.line_through(self.point_id(&p.coords), self.point_id(&q.coords))?;
        Ok(self.line(idx))
    }

    /// Lines through a point, one per direction, in direction order.
    pub fn lines_through(&self, p: u32) -> Vec<usize> {
        (0..self.directions.len() as u32)
            .map(|d| self.line_with_direction(p, d))
            .collect()
    }

    pub fn lines_with_direction(&self, d: u32) -> Vec<usize> {
        (0..self.lines.len())
            .filter(|&i| self.lines[i].direction == d)
            .collect()
    }

    /// Point sets of every line, for code that must not depend on this
    /// module's structure.
    pub fn line_point_sets(&self) -> Vec<Vec<u32>> {
        self.lines.iter().map(|l| l.points.clone()).collect()
    }

    /// The affine flat `p + W`, sorted, for `W` spanned by `basis` (vectors
    /// of length `n`).
    pub fn coset(&self, p: u32, basis: &[Row]) -> Vec<u32> {
        let mut pts = vec![p];
        for v in basis {
            let mut next = Vec::with_capacity(pts.len() * self.q() as usize);
            for &x in &pts {
                for t in self.field.elements() {
                    next.push(self.translate(x, v, t));
                }
            }
            pts = next;
        }
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    /// The parallel class of flats with direction space `W`, each flat
    /// sorted, flats ordered by their least point.
    pub fn parallel_flats(&self, basis: &[Row]) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.num_points()];
        let mut out = Vec::new();
        for p in 0..self.num_points {
            if seen[p as usize] {
                continue;
            }
            let flat = self.coset(p, basis);
            for &x in &flat {
                seen[x as usize] = true;
            }
            out.push(flat);
        }
        out
    }

    /// Lines with direction `d` contained in a flat whose direction space
    /// contains `d`, in base order.
    pub fn lines_in_flat(&self, flat: &[u32], d: u32) -> Vec<usize> {
        let mut out: Vec<usize> = flat
            .iter()
            .map(|&p| self.line_with_direction(p, d))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn projective_closure(&self, idx: usize) -> Subspace {
        let line = self.line(idx);
        let rows = vec![
            ProjectivePoint::from_affine(&line.base).coords,
            line.point_at_infinity().coords,
        ];
        Subspace::from_vectors(&self.field, Ambient::projective(self.n), &rows).expect("valid line")
    }

    /// Affine part of a projective line, as a canonical line index.
    pub fn affine_line(&self, s: &Subspace) -> Result<usize, SpaceError> {
        if s.dim() != 1 {
            return Err(SpaceError::Length {
                got: s.dim(),
                expected: 1,
            });
        }
        let pts = s.affine_points(&self.field);
        if pts.is_empty() {
            return Err(SpaceError::AtInfinity);
        }
        self.line_through(self.point_id(&pts[0].coords), self.point_id(&pts[1].coords))
    }
}

/// PG(n,q) with its points enumerated in lexicographic order.
#[derive(Debug, Clone)]
pub struct ProjectiveSpace {
    field: Field,
    n: usize,
    points: Vec<ProjectivePoint>,
    index: HashMap<Row, u32>,
}

impl ProjectiveSpace {
    pub fn new(n: usize, field: &Field) -> Result<Self, SpaceError> {
        let limits = Limits::default();
        let q = field.order() as u64;
        let count = q.checked_pow(n as u32 + 1).map(|x| (x - 1) / (q - 1));
        check_size(n, count, &limits)?;
        let whole = Subspace::from_vectors(
            field,
            Ambient::projective(n),
            &(0..=n)
                .map(|i| {
                    let mut r = vec![FieldElement::ZERO; n + 1];
                    r[i] = FieldElement::ONE;
                    r
                })
                .collect::<Vec<_>>(),
        )?;
        let points = whole.points(field);
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.coords.clone(), i as u32))
            .collect();
        Ok(ProjectiveSpace {
            field: field.clone(),
            n,
            points,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient(&self) -> Ambient {
        Ambient::projective(self.n)
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn point_index(&self, p: &ProjectivePoint) -> Option<u32> {
        self.index.get(&p.coords).copied()
    }

    pub fn line_through(
        &self,
        p: &ProjectivePoint,
        q: &ProjectivePoint,
    ) -> Result<Subspace, SpaceError> {
        if p == q {
            return Err(SpaceError::SamePoint);
        }
        Subspace::from_vectors(
            &self.field,
            self.ambient(),
            &[p.coords.clone(), q.coords.clone()],
        )
    }

    /// Every line of the space, as sorted point-index lists.
    pub fn lines(&self) -> Vec<Vec<u32>> {
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                let l = self.line_through(&self.points[i], &self.points[j]).unwrap();
                let mut pts: Vec<u32> = l
                    .points(&self.field)
                    .iter()
                    .map(|p| self.index[&p.coords])
                    .collect();
                pts.sort_unstable();
                seen.insert(pts);
            }
        }
        seen.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[u32]) -> Row {
        v.iter().map(|&x| FieldElement::from_index(x)).collect()
    }

    #[test]
    fn point_counts() {
        let f2 = Field::new(2, 1).unwrap();
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(
            SpaceDescriptor::affine(2, &f2)
                .enumerate_points()
                .unwrap()
                .len(),
            4
        );
        assert_eq!(
            SpaceDescriptor::projective(2, &f2)
                .enumerate_points()
                .unwrap()
                .len(),
            7
        );
        assert_eq!(
            SpaceDescriptor::affine(3, &f3)
                .enumerate_points()
                .unwrap()
                .len(),
            27
        );
    }

    #[test]
    fn line_through_examples() {
        let f2 = Field::new(2, 1).unwrap();
        let ag = AffineSpace::new(2, &f2).unwrap();
        let p = AffinePoint { coords: e(&[0, 0]) };
        let q = AffinePoint { coords: e(&[1, 1]) };
        let l = ag.line_through_points(&p, &q).unwrap();
        assert_eq!(l.base, p);
        assert_eq!(l.direction, e(&[1, 1]));
        assert_eq!(l, ag.line_through_points(&q, &p).unwrap());
        assert_eq!(ag.line_through_points(&p, &p), Err(SpaceError::SamePoint));

        let f3 = Field::new(3, 1).unwrap();
        let ag3 = AffineSpace::new(2, &f3).unwrap();
        let idx = ag3
            .line_through(ag3.point_id(&e(&[0, 0])), ag3.point_id(&e(&[0, 1])))
            .unwrap();
        let pts: Vec<Row> = ag3
            .line_record(idx)
            .points
            .iter()
            .map(|&p| ag3.point_coords(p))
            .collect();
        assert_eq!(pts, vec![e(&[0, 0]), e(&[0, 1]), e(&[0, 2])]);
    }

    #[test]
    fn line_counts() {
        let f2 = Field::new(2, 1).unwrap();
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(AffineSpace::new(2, &f3).unwrap().num_lines(), 12);
        assert_eq!(AffineSpace::new(4, &f2).unwrap().num_lines(), 120);
        let ag = AffineSpace::new(3, &f2).unwrap();
        assert_eq!(
            ag.lines().iter().filter(|l| l.points.contains(&5)).count(),
            7
        );
    }

    #[test]
    fn line_id_round_trip() {
        let f = Field::new(2, 2).unwrap();
        let ag = AffineSpace::new(3, &f).unwrap();
        for i in 0..ag.num_lines() {
            let id = ag.line_id(i);
            assert_eq!(ag.parse_line_id(&id).unwrap(), i);
            assert_eq!(AffineLine::parse_id(&id).unwrap().id(), id);
        }
        // base not the least point of its line
        assert!(matches!(
            ag.parse_line_id("d:0,0,1|b:0,0,1"),
            Err(SpaceError::UnknownLine(_))
        ));
        assert!(matches!(
            ag.parse_line_id("garbage"),
            Err(SpaceError::BadLineId(_))
        ));
    }

    #[test]
    fn span_examples() {
        let f = Field::new(2, 1).unwrap();
        let amb = Ambient::projective(3);
        let p = Subspace::from_vectors(&f, amb, &[e(&[1, 0, 0, 0])]).unwrap();
        assert_eq!(p.dim(), 0);
        let l1 = Subspace::from_vectors(&f, amb, &[e(&[1, 0, 0, 0]), e(&[0, 1, 0, 0])]).unwrap();
        let l2 = Subspace::from_vectors(&f, amb, &[e(&[0, 0, 1, 0]), e(&[0, 0, 0, 1])]).unwrap();
        assert_eq!(Subspace::span(&f, &[&l1, &l2]).unwrap().dim(), 3);
        assert_eq!(Subspace::span(&f, &[&l1, &p]).unwrap(), l1);
        let other = Subspace::from_vectors(&f, Ambient::projective(2), &[e(&[1, 0, 0])]).unwrap();
        assert_eq!(
            Subspace::span(&f, &[&l1, &other]),
            Err(SpaceError::MixedAmbient)
        );
    }

    #[test]
    fn complementary_subspaces_meet_in_one_affine_point() {
        // PG(4,2): two planes meeting the hyperplane x4 = 0 in skew lines
        let f = Field::new(2, 1).unwrap();
        let amb = Ambient::projective(4);
        let a = Subspace::from_vectors(
            &f,
            amb,
            &[
                e(&[1, 0, 0, 0, 0]),
                e(&[0, 1, 0, 0, 0]),
                e(&[0, 0, 0, 0, 1]),
            ],
        )
        .unwrap();
        let b = Subspace::from_vectors(
            &f,
            amb,
            &[
                e(&[0, 0, 1, 0, 0]),
                e(&[0, 0, 0, 1, 0]),
                e(&[1, 1, 1, 1, 1]),
            ],
        )
        .unwrap();
        let inf_a = a.at_infinity(&f).unwrap();
        let inf_b = b.at_infinity(&f).unwrap();
        assert!(inf_a.intersect(&f, &inf_b).unwrap().is_none());
        let meet = a.intersect(&f, &b).unwrap().unwrap();
        assert_eq!(meet.dim(), 0);
        assert_eq!(meet.affine_points(&f).len(), 1);
        assert_eq!(a.intersect(&f, &a).unwrap().unwrap(), a);
    }

    #[test]
    fn parallel_lines_are_disjoint_and_share_infinity() {
        let f = Field::new(3, 1).unwrap();
        let ag = AffineSpace::new(2, &f).unwrap();
        let same_dir = ag.lines_with_direction(0);
        let (a, b) = (same_dir[0], same_dir[1]);
        let ca = ag.projective_closure(a).affine_part().unwrap();
        let cb = ag.projective_closure(b).affine_part().unwrap();
        assert!(ca.intersect(&f, &cb).unwrap().is_none());
        let pa = ag.projective_closure(a);
        let pb = ag.projective_closure(b);
        let meet = pa.intersect(&f, &pb).unwrap().unwrap();
        assert_eq!(meet.points(&f), vec![ag.line(a).point_at_infinity()]);
    }

    #[test]
    fn closure_round_trip() {
        let f = Field::new(2, 1).unwrap();
        let ag = AffineSpace::new(2, &f).unwrap();
        for i in 0..ag.num_lines() {
            let c = ag.projective_closure(i);
            assert_eq!(c.points(&f).len(), 3);
            assert!(c.contains_point(&f, &ag.line(i).point_at_infinity()));
            assert_eq!(ag.affine_line(&c).unwrap(), i);
        }
        let h = hyperplane_at_infinity(&f, 3);
        assert_eq!(h.affine_part(), Err(SpaceError::AtInfinity));
    }

    #[test]
    fn projective_plane_lines() {
        let f = Field::new(2, 1).unwrap();
        let pg = ProjectiveSpace::new(2, &f).unwrap();
        let lines = pg.lines();
        assert_eq!(lines.len(), 7);
        assert!(lines.iter().all(|l| l.len() == 3));
    }
}
