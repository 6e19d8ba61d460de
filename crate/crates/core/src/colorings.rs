//! Line colorings of AG(n,q).
//!
//! Every construction returns a [`Coloring`]: a partition of the canonical
//! line list of an [`AffineSpace`] into named color classes, together with
//! a [`ConstructionTrace`] recording the scaffolding that produced it.
//!
//! | method             | space           | classes                                   | proper |
//! |--------------------|-----------------|-------------------------------------------|--------|
//! | `chromatic`        | AG(n,q), n ≥ 2  | (q^n−1)/(q−1)                             | yes    |
//! | `plane-achromatic` | AG(2,q)         | q+1                                       | yes    |
//! | `plane-pseudo`     | AG(2,q)         | ⌊(q+1)²/2⌋                                | no     |
//! | `even-pseudo`      | AG(2k,q), k ≥ 2 | q^k(q^2k−1)/(2(q−1)), or q^k(q^2k−q)/(2(q−1))+1 for even q | no |
//! | `odd-pseudo`       | AG(2k+1,q)      | q^(k+2)(q^2k−1)/(q²−1)+1                  | no     |
//! | `even-achromatic`  | AG(2k,q), k ≥ 2 | ((q^k+1−ε)/3·(q^k+2)+ε)·(q^k−1)/(q−1)     | yes    |
//! | `ag3-achromatic`   | AG(3,q)         | q(q+1)²/2+1                               | yes    |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::Field;
use crate::space::{AffineSpace, ProjectivePoint, SpaceDescriptor, SpaceError, SpaceKind};
use crate::structures::{self, basis_json, indices, StructureError};
use crate::verify;

#[derive(Debug, Error)]
pub enum ColoringError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("{method} requires {requirement}")]
    Incompatible {
        method: Method,
        requirement: &'static str,
    },
    #[error("classes do not partition the lines: {0}")]
    NotAPartition(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("malformed coloring file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Chromatic,
    PlaneAchromatic,
    PlanePseudo,
    EvenPseudo,
    OddPseudo,
    EvenAchromatic,
    Ag3Achromatic,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Chromatic,
        Method::PlaneAchromatic,
        Method::PlanePseudo,
        Method::EvenPseudo,
        Method::OddPseudo,
        Method::EvenAchromatic,
        Method::Ag3Achromatic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Chromatic => "chromatic",
            Method::PlaneAchromatic => "plane-achromatic",
            Method::PlanePseudo => "plane-pseudo",
            Method::EvenPseudo => "even-pseudo",
            Method::OddPseudo => "odd-pseudo",
            Method::EvenAchromatic => "even-achromatic",
            Method::Ag3Achromatic => "ag3-achromatic",
        }
    }

    /// Whether the construction yields a proper coloring.
    pub fn is_proper(self) -> bool {
        !matches!(
            self,
            Method::PlanePseudo | Method::EvenPseudo | Method::OddPseudo
        )
    }

    pub fn check_dimension(self, n: usize) -> Result<(), ColoringError> {
        let requirement = match self {
            Method::Chromatic if n < 2 => "n >= 2",
            Method::PlaneAchromatic | Method::PlanePseudo if n != 2 => "n = 2",
            Method::EvenPseudo | Method::EvenAchromatic if !n.is_multiple_of(2) => "even n >= 4",
            Method::EvenPseudo | Method::EvenAchromatic if n < 4 => "even n >= 4",
            Method::OddPseudo if n % 2 != 1 || n < 3 => "odd n >= 3",
            Method::Ag3Achromatic if n != 3 => "n = 3",
            _ => return Ok(()),
        };
        Err(ColoringError::Incompatible {
            method: self,
            requirement,
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorClass {
    pub id: String,
    /// Sorted indices into [`AffineSpace::lines`].
    pub lines: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceRecord {
    pub class: String,
    pub tag: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub construction: String,
    pub parameters: Value,
    pub scaffolding: Value,
    pub provenance: Vec<ProvenanceRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coloring {
    pub space: SpaceDescriptor,
    pub classes: Vec<ColorClass>,
    pub trace: ConstructionTrace,
}

#[derive(Serialize, Deserialize)]
struct ClassFile {
    id: String,
    lines: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ColoringFile {
    space: SpaceDescriptor,
    construction: String,
    classes: Vec<ClassFile>,
    trace: ConstructionTrace,
}

impl Coloring {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn construction(&self) -> &str {
        &self.trace.construction
    }

    /// Class sizes, keyed by size.
    pub fn size_census(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for c in &self.classes {
            *out.entry(c.lines.len()).or_insert(0) += 1;
        }
        out
    }

    /// Checks that classes are nonempty, disjoint and cover every line.
    pub fn check_partition(&self, space: &AffineSpace) -> Result<(), ColoringError> {
        let mut owner: Vec<Option<usize>> = vec![None; space.num_lines()];
        for (ci, class) in self.classes.iter().enumerate() {
            if class.lines.is_empty() {
                return Err(ColoringError::NotAPartition(format!(
                    "class {} is empty",
                    class.id
                )));
            }
            for &l in &class.lines {
                let slot = owner.get_mut(l).ok_or_else(|| {
                    ColoringError::NotAPartition(format!("line index {l} out of range"))
                })?;
                if let Some(prev) = *slot {
                    return Err(ColoringError::NotAPartition(format!(
                        "line {} is in classes {} and {}",
                        space.line_id(l),
                        self.classes[prev].id,
                        class.id
                    )));
                }
                *slot = Some(ci);
            }
        }
        if let Some(l) = owner.iter().position(|o| o.is_none()) {
            return Err(ColoringError::NotAPartition(format!(
                "line {} is uncolored",
                space.line_id(l)
            )));
        }
        Ok(())
    }

    pub fn to_json(&self, space: &AffineSpace) -> Value {
        serde_json::to_value(self.to_file(space)).expect("serializable")
    }

    pub fn to_json_string(&self, space: &AffineSpace) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file(space)).expect("serializable");
        s.push('\n');
        s
    }

    fn to_file(&self, space: &AffineSpace) -> ColoringFile {
        ColoringFile {
            space: self.space.clone(),
            construction: self.trace.construction.clone(),
            classes: self
                .classes
                .iter()
                .map(|c| ClassFile {
                    id: c.id.clone(),
                    lines: c.lines.iter().map(|&l| space.line_id(l)).collect(),
                })
                .collect(),
            trace: self.trace.clone(),
        }
    }

    /// Parses a coloring file and rebuilds its space. Line ids must be
    /// canonical lines of the space; partition defects are left for
    /// [`Coloring::check_partition`] to report.
    pub fn from_json_str(text: &str) -> Result<(Coloring, AffineSpace), ColoringError> {
        let file: ColoringFile =
            serde_json::from_str(text).map_err(|e| ColoringError::Parse(e.to_string()))?;
        if file.space.kind != SpaceKind::Affine {
            return Err(ColoringError::Parse(
                "colorings live in affine spaces".into(),
            ));
        }
        let field = Field::from_descriptor(&file.space.field).map_err(SpaceError::from)?;
        let space = AffineSpace::new(file.space.n, &field)?;
        let mut classes = Vec::with_capacity(file.classes.len());
        for c in file.classes {
            let mut lines = c
                .lines
                .iter()
                .map(|id| space.parse_line_id(id))
                .collect::<Result<Vec<_>, _>>()?;
            lines.sort_unstable();
            classes.push(ColorClass { id: c.id, lines });
        }
        let mut trace = file.trace;
        trace.construction = file.construction;
        Ok((
            Coloring {
                space: file.space,
                classes,
                trace,
            },
            space,
        ))
    }
}

struct Builder {
    classes: Vec<ColorClass>,
    provenance: Vec<ProvenanceRecord>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            classes: Vec::new(),
            provenance: Vec::new(),
        }
    }

    fn push(&mut self, id: String, tag: String, mut lines: Vec<usize>) {
        lines.sort_unstable();
        lines.dedup();
        self.provenance.push(ProvenanceRecord {
            class: id.clone(),
            tag,
        });
        self.classes.push(ColorClass { id, lines });
    }

    fn finish(
        self,
        space: &AffineSpace,
        method: Method,
        parameters: Value,
        scaffolding: Value,
    ) -> Result<Coloring, ColoringError> {
        let coloring = Coloring {
            space: space.descriptor(),
            classes: self.classes,
            trace: ConstructionTrace {
                construction: method.name().to_string(),
                parameters,
                scaffolding,
                provenance: self.provenance,
            },
        };
        coloring.check_partition(space)?;
        Ok(coloring)
    }
}

fn fail(msg: impl Into<String>) -> ColoringError {
    ColoringError::Construction(msg.into())
}

fn direction_of(space: &AffineSpace, p: &ProjectivePoint) -> Result<u32, ColoringError> {
    space
        .direction_index(&p.coords)
        .ok_or_else(|| fail("point is not a direction of the space"))
}

fn dir_json(space: &AffineSpace, d: u32) -> Value {
    Value::from(indices(&space.directions()[d as usize]))
}

/// Builds the coloring named by `method` on AG(n,q).
pub fn construct(
    method: Method,
    n: usize,
    field: &Field,
) -> Result<(AffineSpace, Coloring), ColoringError> {
    method.check_dimension(n)?;
    let space = AffineSpace::new(n, field)?;
    let coloring = match method {
        Method::Chromatic => chromatic_parallel(&space)?,
        Method::PlaneAchromatic => plane_achromatic(&space)?,
        Method::PlanePseudo => plane_pseudo(&space)?,
        Method::EvenPseudo => even_pseudo(&space)?,
        Method::OddPseudo => odd_pseudo(&space)?,
        Method::EvenAchromatic => even_achromatic(&space)?,
        Method::Ag3Achromatic => ag3_achromatic(&space)?,
    };
    Ok((space, coloring))
}

fn parallel_classes(space: &AffineSpace, method: Method) -> Result<Coloring, ColoringError> {
    let mut b = Builder::new();
    for d in 0..space.num_directions() as u32 {
        b.push(
            format!("S_{}", d + 1),
            format!(
                "parallel class of direction {:?}",
                indices(&space.directions()[d as usize])
            ),
            space.lines_with_direction(d),
        );
    }
    b.finish(
        space,
        method,
        json!({ "n": space.n(), "q": space.q() }),
        json!({}),
    )
}

/// One class per parallel class.
pub fn chromatic_parallel(space: &AffineSpace) -> Result<Coloring, ColoringError> {
    Method::Chromatic.check_dimension(space.n())?;
    parallel_classes(space, Method::Chromatic)
}

/// The q+1 parallel classes of the plane.
pub fn plane_achromatic(space: &AffineSpace) -> Result<Coloring, ColoringError> {
    Method::PlaneAchromatic.check_dimension(space.n())?;
    parallel_classes(space, Method::PlaneAchromatic)
}

/// ⌊(q+1)²/2⌋ classes on AG(2,q): the q+1 lines through the origin as
/// singletons, and the remaining lines, listed so that neighbours are never
/// parallel, grouped in consecutive pairs (the odd leftover joins the last
/// pair when q is even).
pub fn plane_pseudo(space: &AffineSpace) -> Result<Coloring, ColoringError> {
    Method::PlanePseudo.check_dimension(space.n())?;
    let q = space.q() as usize;
    let through_p = space.lines_through(0);
    let rest: Vec<Vec<usize>> = (0..=q)
        .map(|i| {
            space
                .lines_with_direction(i as u32)
                .into_iter()
                .filter(|&l| l != through_p[i])
                .collect()
        })
        .collect();
    // ell[m(q+1) + i] = m-th line of parallel class i other than e_i
    let mut ell = Vec::with_capacity(q * q - 1);
    for m in 0..q - 1 {
        for class in &rest {
            ell.push(class[m]);
        }
    }

    let pairs = (q * q - 1) / 2;
    let mut indexed: Vec<(usize, String, Vec<usize>)> = Vec::new();
    for (k, &e) in through_p.iter().enumerate() {
        let idx = 2 * (k + 1);
        indexed.push((
            idx,
            format!("e_{}: line through the origin", k + 1),
            vec![e],
        ));
    }
    for k in 1..=pairs {
        let mut lines = vec![ell[2 * k - 2], ell[2 * k - 1]];
        let mut tag = format!("pair (l_{}, l_{})", 2 * k - 1, 2 * k);
        if q.is_multiple_of(2) && k == pairs {
            lines.push(ell[q * q - 2]);
            tag.push_str(&format!(" plus l_{}", q * q - 1));
        }
        indexed.push((2 * k - 1, tag, lines));
    }
    indexed.sort_by_key(|(i, _, _)| *i);

    let mut b = Builder::new();
    for (i, tag, lines) in indexed {
        b.push(format!("C_{i}"), tag, lines);
    }
    let scaffolding = json!({
        "p": indices(&space.point_coords(0)),
        "e": through_p.iter().map(|&l| space.line_id(l)).collect::<Vec<_>>(),
        "l": ell.iter().map(|&l| space.line_id(l)).collect::<Vec<_>>(),
    });
    b.finish(
        space,
        Method::PlanePseudo,
        json!({ "n": 2, "q": q }),
        scaffolding,
    )
}

/// Pairs the points of the spread members so that no pair lies in a single
/// member. Members are given as lists of directions. For even q the first
/// point of the first member is left out.
fn spread_pairing(members: &[Vec<u32>], q_even: bool) -> Result<Vec<(u32, u32)>, ColoringError> {
    let mut pairs = Vec::new();
    if !q_even {
        for i in (0..members.len()).step_by(2) {
            pairs.extend(
                members[i]
                    .iter()
                    .copied()
                    .zip(members[i + 1].iter().copied()),
            );
        }
        return Ok(pairs);
    }
    let u = members[0].len();
    if u.is_multiple_of(2) {
        return Err(fail("member size must be odd for even q"));
    }
    let p = |i: usize, j: usize| members[i - 1][j - 1];
    pairs.push((p(2, 1), p(3, 1)));
    for j in (2..u).step_by(2) {
        pairs.push((p(1, j), p(2, j)));
        pairs.push((p(2, j + 1), p(3, j + 1)));
        pairs.push((p(1, j + 1), p(3, j)));
    }
    for i in (4..members.len()).step_by(2) {
        for j in 1..=u {
            pairs.push((p(i, j), p(i + 1, j)));
        }
    }
    Ok(pairs)
}

/// Complete, improper coloring of AG(2k,q) from a (k−1)-spread of the
/// hyperplane at infinity and a pairing of its points across members.
pub fn even_pseudo(space: &AffineSpace) -> Result<Coloring, ColoringError> {
    let n = space.n();
    Method::EvenPseudo.check_dimension(n)?;
    let k = n / 2;
    let field = space.field();
    let q = space.q();
    let spread = structures::build_spread(k, field)?;

    let mut member_dirs = Vec::new();
    for m in &spread.members {
        member_dirs.push(
            m.points(field)
                .iter()
                .map(|p| direction_of(space, p))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let member_of_dir: BTreeMap<u32, usize> = member_dirs
        .iter()
        .enumerate()
        .flat_map(|(i, ds)| ds.iter().map(move |&d| (d, i)))
        .collect();
    let flats: Vec<Vec<Vec<u32>>> = spread
        .members
        .iter()
        .map(|m| space.parallel_flats(m.basis()))
        .collect();

    let q_even = q.is_multiple_of(2);
    let pairs = spread_pairing(&member_dirs, q_even)?;
    let mut b = Builder::new();
    if q_even {
        let special = member_dirs[0][0];
        b.push(
            "C_1".into(),
            format!(
                "all lines with point at infinity {:?}",
                indices(&space.directions()[special as usize])
            ),
            space.lines_with_direction(special),
        );
    }
    for &(u, v) in &pairs {
        let (mu, mv) = (member_of_dir[&u], member_of_dir[&v]);
        if mu == mv {
            return Err(fail("paired points lie in the same spread member"));
        }
        for (i, (fu, fv)) in flats[mu].iter().zip(&flats[mv]).enumerate() {
            let mut lines = space.lines_in_flat(fu, u);
            lines.extend(space.lines_in_flat(fv, v));
            b.push(
                format!("C_U{}_V{}_i{}", u + 1, v + 1, i + 1),
                format!("C_{{U,V,i}}: U=dir {}, V=dir {}, i={}", u + 1, v + 1, i + 1),
                lines,
            );
        }
    }
    let scaffolding = json!({
        "spread": spread.to_json(field),
        "pairing": pairs.iter().map(|&(u, v)| json!([dir_json(space, u), dir_json(space, v)])).collect::<Vec<_>>(),
    });
    b.finish(
        space,
        Method::EvenPseudo,
        json!({ "n": n, "q": q, "k": k }),
        scaffolding,
    )
}

/// Complete, improper coloring of AG(2k+1,q) from a good partition of the
/// hyperplane at infinity.
pub fn odd_pseudo(space: &AffineSpace) -> Result<Coloring, ColoringError> {
    let n = space.n();
    Method::OddPseudo.check_dimension(n)?;
    let k = (n - 1) / 2;
    let field = space.field();
    let q = space.q() as usize;

    // least point of PG(2k,q) is (0 : ... : 0 : 1)
    let mut qc = vec![crate::FieldElement::ZERO; n];
    qc[n - 1] = crate::FieldElement::ONE;
    let q_point = ProjectivePoint::new(field, &qc)?;
    let gp = structures::build_good_partition(k, field, &q_point)?;

    let qk = q.pow(k as u32);
    let s = gp.b.len();
    if gp.a.len() != q * s {
        return Err(fail("good partition sizes are not in ratio q"));
    }
    let mut b = Builder::new();
    let q_dir = direction_of(space, &q_point)?;
    b.push(
        "C_1".into(),
        format!(
            "all lines with point at infinity Q = {:?}",
            indices(&q_point.coords)
        ),
        space.lines_with_direction(q_dir),
    );
    for j in 0..s {
        let r = &gp.b[j];
        let r_dir = direction_of(space, r)?;
        let b_flats = space.parallel_flats(gp.assigned[r].basis());
        if b_flats.len() != q * qk {
            return Err(fail("unexpected number of k-flats on S(R)"));
        }
        for i in 0..q {
            let p = &gp.a[j * q + i];
            let p_dir = direction_of(space, p)?;
            let a_flats = space.parallel_flats(gp.assigned[p].basis());
            if a_flats.len() != qk {
                return Err(fail("unexpected number of (k+1)-flats on S(P)"));
            }
            for m in 0..qk {
                let mut lines = space.lines_in_flat(&a_flats[m], p_dir);
                lines.extend(space.lines_in_flat(&b_flats[i * qk + m], r_dir));
                b.push(
                    format!("C_{}_{}_{}", i + 1, j + 1, m + 1),
                    format!(
                        "C_{{i,j,m}}: flat {} of A(P_{}) with flat {} of B(R_{})",
                        m + 1,
                        j * q + i + 1,
                        i * qk + m + 1,
                        j + 1
                    ),
                    lines,
                );
            }
        }
    }
    let scaffolding = json!({ "good_partition": gp.to_json(field) });
    b.finish(
        space,
        Method::OddPseudo,
        json!({ "n": n, "q": q, "k": k }),
        scaffolding,
    )
}

/// Proper and complete coloring of AG(2k,q), k ≥ 2, from triples of spread
/// members (e, f, g) with an auxiliary member d.
///
/// Per triple: D_1..D_u are the points of d; the transversal through D_i
/// to e and g meets them in E_i and G_i; the transversal through D_i to f
/// and g meets f in F_{i+1} (cyclically); M_1..M_{q^k} are the points of
/// the first flat on d, and the i-th flats on e, f, g are those through
/// M_i. Leftover members contribute one class per point.
pub fn even_achromatic(space: &AffineSpace) -> Result<Coloring, ColoringError> {
    let n = space.n();
    Method::EvenAchromatic.check_dimension(n)?;
    let k = n / 2;
    let field = space.field();
    let q = space.q() as usize;
    let spread = structures::build_spread(k, field)?;
    let members = &spread.members;
    let count = members.len();
    let eps = count % 3;
    let triples = (count - eps) / 3;
    let qk = q.pow(k as u32);

    let flats: Vec<Vec<Vec<u32>>> = members
        .iter()
        .map(|m| space.parallel_flats(m.basis()))
        .collect();
    let flat_of = |mi: usize, p: u32| -> usize {
        flats[mi]
            .iter()
            .position(|f| f.binary_search(&p).is_ok())
            .expect("flats partition the points")
    };

    let mut b = Builder::new();
    let mut triple_json = Vec::new();
    for t in 0..triples {
        let (ei, fi, gi, di) = (3 * t, 3 * t + 1, 3 * t + 2, (3 * t + 3) % count);
        let (e, f, g, d) = (&members[ei], &members[fi], &members[gi], &members[di]);
        let d_points = d.points(field);
        let u = d_points.len();
        let mut e_pts = Vec::with_capacity(u);
        let mut g_pts = Vec::with_capacity(u);
        let mut f_pts = vec![None; u];
        for (i, dp) in d_points.iter().enumerate() {
            let line = structures::transversal(field, dp, e, g)?;
            e_pts.push(structures::meet_point(field, &line, e)?);
            g_pts.push(structures::meet_point(field, &line, g)?);
            let line = structures::transversal(field, dp, f, g)?;
            f_pts[(i + 1) % u] = Some(structures::meet_point(field, &line, f)?);
        }
        let f_pts: Vec<ProjectivePoint> = f_pts
            .into_iter()
            .map(|p| p.expect("every slot filled"))
            .collect();
        for pts in [&e_pts, &f_pts, &g_pts] {
            let mut sorted = pts.to_vec();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != u {
                return Err(fail("transversal numbering is not a bijection"));
            }
        }
        let e_dir = e_pts
            .iter()
            .map(|p| direction_of(space, p))
            .collect::<Result<Vec<_>, _>>()?;
        let f_dir = f_pts
            .iter()
            .map(|p| direction_of(space, p))
            .collect::<Result<Vec<_>, _>>()?;
        let g_dir = g_pts
            .iter()
            .map(|p| direction_of(space, p))
            .collect::<Result<Vec<_>, _>>()?;

        let m_pts = &flats[di][0];
        let e_flat: Vec<usize> = m_pts.iter().map(|&m| flat_of(ei, m)).collect();
        let f_flat: Vec<usize> = m_pts.iter().map(|&m| flat_of(fi, m)).collect();
        let g_flat: Vec<usize> = m_pts.iter().map(|&m| flat_of(gi, m)).collect();

        for i in 0..u {
            let lines = m_pts
                .iter()
                .map(|&m| space.line_with_direction(m, e_dir[i]))
                .collect();
            b.push(
                format!("B0_t{}_i{}", t + 1, i + 1),
                format!("B^{{{},0}}: lines E_{}M_j", i + 1, i + 1),
                lines,
            );
            let lines = m_pts
                .iter()
                .map(|&m| space.line_with_direction(m, f_dir[i]))
                .collect();
            b.push(
                format!("B1_t{}_i{}", t + 1, i + 1),
                format!("B^{{{},1}}: lines F_{}M_j", i + 1, i + 1),
                lines,
            );
        }
        for (i, &m) in m_pts.iter().enumerate().take(qk) {
            for j in 0..u {
                let skip_e = space.line_with_direction(m, e_dir[j]);
                let skip_f = space.line_with_direction(m, f_dir[j]);
                let mut lines: Vec<usize> = space
                    .lines_in_flat(&flats[ei][e_flat[i]], e_dir[j])
                    .into_iter()
                    .filter(|&l| l != skip_e)
                    .collect();
                lines.extend(
                    space
                        .lines_in_flat(&flats[fi][f_flat[i]], f_dir[j])
                        .into_iter()
                        .filter(|&l| l != skip_f),
                );
                lines.extend(space.lines_in_flat(&flats[gi][g_flat[i]], g_dir[j]));
                b.push(
                    format!("C_t{}_i{}_j{}", t + 1, i + 1, j + 1),
                    format!(
                        "C^{{{},{}}}: flats through M_{} with directions E_{}, F_{}, G_{}",
                        i + 1,
                        j + 1,
                        i + 1,
                        j + 1,
                        j + 1,
                        j + 1
                    ),
                    lines,
                );
            }
        }
        let pts = |v: &[ProjectivePoint]| v.iter().map(|p| indices(&p.coords)).collect::<Vec<_>>();
        triple_json.push(json!({
            "e": ei + 1, "f": fi + 1, "g": gi + 1, "d": di + 1,
            "D": pts(&d_points), "E": pts(&e_pts), "F": pts(&f_pts), "G": pts(&g_pts),
            "M": m_pts.iter().map(|&m| indices(&space.point_coords(m))).collect::<Vec<_>>(),
        }));
    }
    let leftover: Vec<usize> = (3 * triples..count).collect();
    for &li in &leftover {
        for p in members[li].points(field) {
            let d = direction_of(space, &p)?;
            b.push(
                format!("D_P{}", d + 1),
                format!(
                    "D^P: all lines with point at infinity {:?} on leftover member {}",
                    indices(&p.coords),
                    li + 1
                ),
                space.lines_with_direction(d),
            );
        }
    }
    let scaffolding = json!({
        "spread": spread.to_json(field),
        "epsilon": eps,
        "u": (qk - 1) / (q - 1),
        "triples": triple_json,
        "leftover_members": leftover.iter().map(|i| i + 1).collect::<Vec<_>>(),
    });
    b.finish(
        space,
        Method::EvenAchromatic,
        json!({ "n": n, "q": q, "k": k }),
        scaffolding,
    )
}

/// Proper and complete coloring of AG(3,q) with q(q+1)²/2 + 1 classes from
/// the cyclic model of the plane at infinity.
///
/// Points P_x carry labels x ∈ Z_v and the lines are ℓ_x = D + x, so ℓ_x and
/// ℓ_{x+1} share P_{x+1}. For x = 0, 2, …, v−3 the q planes on ℓ_x and on
/// ℓ_{x+1} are matched through a plane W whose line at infinity is
/// ℓ_{x+1−d}, another line through P_{x+1}; the line e_j where matched
/// planes meet then lies in W. The offset d ranges over D \ {0, 1} and the
/// first offset whose coloring certifies proper and complete is kept.
pub fn ag3_achromatic(space: &AffineSpace) -> Result<Coloring, ColoringError> {
    Method::Ag3Achromatic.check_dimension(space.n())?;
    let field = space.field();
    let plane = structures::cyclic_plane(field)?;
    let v = plane.set.v;
    let mut candidates: Vec<u64> = plane
        .set
        .elements
        .iter()
        .copied()
        .filter(|&d| d > 1)
        .collect();
    candidates.sort_unstable();
    let mut tried = Vec::new();
    for &d in &candidates {
        match ag3_with_offset(space, &plane, d) {
            Ok(c) => {
                let proper = verify::is_proper(space, &c).holds;
                let complete = verify::is_complete(space, &c).holds;
                if proper && complete {
                    return Ok(c);
                }
                tried.push(format!("d={d}: proper={proper}, complete={complete}"));
            }
            Err(e) => tried.push(format!("d={d}: {e}")),
        }
    }
    Err(fail(format!(
        "no offset in D certified (v = {v}): {}",
        tried.join("; ")
    )))
}

fn ag3_with_offset(
    space: &AffineSpace,
    plane: &structures::CyclicPlane,
    d: u64,
) -> Result<Coloring, ColoringError> {
    let field = space.field();
    let v = plane.set.v;
    let dirs: Vec<u32> = plane
        .points
        .iter()
        .map(|p| direction_of(space, p))
        .collect::<Result<_, _>>()?;
    let line_flats = |x: u64| space.parallel_flats(plane.line(field, x % v).basis());

    let mut b = Builder::new();
    let mut w_lines = Vec::new();
    let mut removed_from = BTreeMap::new();
    for x in (0..v - 1).step_by(2) {
        let (px, py) = (dirs[x as usize], dirs[x as usize + 1]);
        let w_label = (x + 1 + v - d) % v;
        let w = space.coset(0, plane.line(field, w_label).basis());
        let flats_x = line_flats(x);
        let flats_y = line_flats(x + 1);
        let mut e_lines = Vec::with_capacity(flats_x.len());
        let mut matched = Vec::with_capacity(flats_x.len());
        for fx in &flats_x {
            let inter: Vec<u32> = fx
                .iter()
                .copied()
                .filter(|p| w.binary_search(p).is_ok())
                .collect();
            if inter.len() < 2 {
                return Err(fail("plane W does not meet a plane on l_x in a line"));
            }
            let fy = flats_y
                .iter()
                .position(|f| f.binary_search(&inter[0]).is_ok())
                .expect("flats partition the points");
            let e = space.line_through(inter[0], inter[1])?;
            let rec = space.line_record(e);
            let on_both = rec
                .points
                .iter()
                .all(|p| fx.binary_search(p).is_ok() && flats_y[fy].binary_search(p).is_ok());
            if !on_both || rec.points != inter || matched.contains(&fy) {
                return Err(fail("matched planes do not meet in a line of W"));
            }
            matched.push(fy);
            e_lines.push(e);
        }
        let i = x + 1;
        b.push(
            format!("C0_i{i}"),
            format!("C^{i}_0: lines e^{i}_j in W_{i}"),
            e_lines.clone(),
        );
        for (j, fx) in flats_x.iter().enumerate() {
            let side_x = space.lines_in_flat(fx, px);
            let side_y = space.lines_in_flat(&flats_y[matched[j]], py);
            let e = e_lines[j];
            let side = if side_y.contains(&e) {
                "P_{i+1}"
            } else if side_x.contains(&e) {
                "P_i"
            } else {
                "none"
            };
            *removed_from.entry(side).or_insert(0usize) += 1;
            let lines = side_x
                .into_iter()
                .chain(side_y)
                .filter(|&l| l != e)
                .collect();
            b.push(
                format!("C_i{}_j{}", i, j + 1),
                format!("C^{i}_{}: direction P_{i} in plane {} on l_{i}, direction P_{} in its matched plane, minus e^{i}_{}", j + 1, j + 1, i + 1, j + 1),
                lines,
            );
        }
        w_lines.push(json!({ "i": i, "w_line_label": w_label }));
    }
    let last = dirs[(v - 1) as usize];
    b.push(
        "C_v".into(),
        format!("C^v: all lines with point at infinity P_{v}"),
        space.lines_with_direction(last),
    );

    let scaffolding = json!({
        "difference_set": plane.set.to_json(),
        "offset_d": d,
        "labels": plane.points.iter().map(|p| indices(&p.coords)).collect::<Vec<_>>(),
        "w_planes": w_lines,
        "e_removed_from": removed_from,
        "line_at_infinity_basis": (0..v).map(|x| basis_json(&plane.line(field, x))).collect::<Vec<_>>(),
    });
    b.finish(
        space,
        Method::Ag3Achromatic,
        json!({ "n": 3, "q": space.q() }),
        scaffolding,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(method: Method, n: usize, q: u64) -> (AffineSpace, Coloring) {
        construct(method, n, &Field::of_order(q).unwrap()).unwrap()
    }

    #[test]
    fn chromatic_counts() {
        assert_eq!(build(Method::Chromatic, 2, 3).1.class_count(), 4);
        assert_eq!(build(Method::Chromatic, 3, 2).1.class_count(), 7);
        assert_eq!(build(Method::Chromatic, 2, 2).1.class_count(), 3);
        let (_, c) = build(Method::Chromatic, 2, 3);
        assert!(c.classes.iter().all(|cl| cl.lines.len() == 3));
    }

    #[test]
    fn plane_pseudo_counts() {
        for (q, want) in [(2, 4), (3, 8), (4, 12), (5, 18)] {
            assert_eq!(build(Method::PlanePseudo, 2, q).1.class_count(), want);
        }
    }

    #[test]
    fn method_dimension_checks() {
        let f = Field::new(2, 1).unwrap();
        let err = construct(Method::EvenPseudo, 3, &f).unwrap_err();
        assert!(
            err.to_string().contains("even-pseudo requires even n"),
            "{err}"
        );
        assert!(construct(Method::Ag3Achromatic, 4, &f).is_err());
        assert!(construct(Method::OddPseudo, 4, &f).is_err());
        assert!(construct(Method::PlanePseudo, 3, &f).is_err());
    }

    #[test]
    fn even_q_pairing_is_perfect() {
        // member size u = 3 (q = 2, k = 2)
        let members: Vec<Vec<u32>> = (0..5)
            .map(|i| (0..3).map(|j| i * 3 + j).collect())
            .collect();
        let pairs = spread_pairing(&members, true).unwrap();
        let mut used: Vec<u32> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        used.sort_unstable();
        assert_eq!(used, (1..15).collect::<Vec<_>>());
        assert!(pairs.iter().all(|&(a, b)| a / 3 != b / 3));
    }

    #[test]
    fn json_round_trip() {
        let (space, c) = build(Method::OddPseudo, 3, 2);
        let text = c.to_json_string(&space);
        let (back, _) = Coloring::from_json_str(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json_string(&space), text);
    }

    #[test]
    fn method_names_parse() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("nope".parse::<Method>().is_err());
    }
}
