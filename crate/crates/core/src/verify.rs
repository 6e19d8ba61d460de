//! Certification of line colorings, with lexicographically first witnesses.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds;
use crate::colorings::Coloring;
use crate::space::{AffineSpace, SpaceDescriptor};
use crate::structures::indices;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("the line set is empty")]
    Empty,
    #[error("line index {0} is not a line of the space")]
    UnknownLine(usize),
}

/// Two lines of one class sharing a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperWitness {
    pub class: String,
    pub lines: [String; 2],
    pub point: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperCheck {
    pub holds: bool,
    pub witness: Option<ProperWitness>,
}

/// Two classes with no pair of intersecting lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteWitness {
    pub classes: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteCheck {
    pub holds: bool,
    pub witness: Option<CompleteWitness>,
}

fn class_ranges(space: &AffineSpace, c: &Coloring) -> Vec<Vec<usize>> {
    c.classes
        .iter()
        .map(|cl| {
            cl.lines
                .iter()
                .copied()
                .filter(|&l| l < space.num_lines())
                .collect()
        })
        .collect()
}

/// Within every class, all line pairs are disjoint. The witness is the first
/// offending (class, line, line) in class order then line index order.
pub fn is_proper(space: &AffineSpace, c: &Coloring) -> ProperCheck {
    let mut at_point: Vec<Vec<usize>> = vec![Vec::new(); space.num_points()];
    for (ci, lines) in class_ranges(space, c).iter().enumerate() {
        for &l in lines {
            for &p in &space.line_record(l).points {
                at_point[p as usize].push(l);
            }
        }
        for &a in lines {
            let mut best: Option<(usize, u32)> = None;
            for &p in &space.line_record(a).points {
                if let Some(&b) = at_point[p as usize].iter().find(|&&b| b > a) {
                    if best.is_none_or(|(x, _)| b < x) {
                        best = Some((b, p));
                    }
                }
            }
            if let Some((b, p)) = best {
                return ProperCheck {
                    holds: false,
                    witness: Some(ProperWitness {
                        class: c.classes[ci].id.clone(),
                        lines: [space.line_id(a), space.line_id(b)],
                        point: indices(&space.point_coords(p)),
                    }),
                };
            }
        }
        for &l in lines {
            for &p in &space.line_record(l).points {
                at_point[p as usize].clear();
            }
        }
    }
    ProperCheck {
        holds: true,
        witness: None,
    }
}

/// Every pair of distinct classes contains two intersecting lines. Pairs
/// are marked in one pass over the classes present at each point; the
/// witness is the first unmarked pair in class order.
pub fn is_complete(space: &AffineSpace, c: &Coloring) -> CompleteCheck {
    let k = c.classes.len();
    let mut owner = vec![usize::MAX; space.num_lines()];
    for (ci, lines) in class_ranges(space, c).iter().enumerate() {
        for &l in lines {
            owner[l] = ci;
        }
    }
    let mut met = vec![false; k * k];
    let mut here = Vec::new();
    for p in 0..space.num_points() as u32 {
        here.clear();
        here.extend(
            space
                .lines_through(p)
                .into_iter()
                .map(|l| owner[l])
                .filter(|&o| o != usize::MAX),
        );
        here.sort_unstable();
        here.dedup();
        for (i, &a) in here.iter().enumerate() {
            for &b in &here[i + 1..] {
                met[a * k + b] = true;
            }
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            if !met[a * k + b] {
                return CompleteCheck {
                    holds: false,
                    witness: Some(CompleteWitness {
                        classes: [c.classes[a].id.clone(), c.classes[b].id.clone()],
                    }),
                };
            }
        }
    }
    CompleteCheck {
        holds: true,
        witness: None,
    }
}

/// Number of lines meeting at least one line of `lines`. Members of the set
/// are counted only when `include_members` is set.
pub fn count_meeting_lines(
    space: &AffineSpace,
    lines: &[usize],
    include_members: bool,
) -> Result<usize, VerifyError> {
    if lines.is_empty() {
        return Err(VerifyError::Empty);
    }
    let mut member = vec![false; space.num_lines()];
    let mut covered = vec![false; space.num_points()];
    for &l in lines {
        if l >= space.num_lines() {
            return Err(VerifyError::UnknownLine(l));
        }
        member[l] = true;
        for &p in &space.line_record(l).points {
            covered[p as usize] = true;
        }
    }
    Ok((0..space.num_lines())
        .filter(|&l| include_members || !member[l])
        .filter(|&l| {
            space
                .line_record(l)
                .points
                .iter()
                .any(|&p| covered[p as usize])
        })
        .count())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Proper,
    Complete,
}

impl std::str::FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "proper" => Ok(Check::Proper),
            "complete" => Ok(Check::Complete),
            _ => Err(format!("unknown check {s:?} (expected proper or complete)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCheck {
    pub holds: bool,
    pub error: Option<String>,
}

/// Class count set against the closed forms for the space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub class_count: u128,
    pub chromatic: u128,
    pub psi_upper_exact: u128,
    pub within_psi_upper: bool,
    /// Closed-form class count of the named construction, when known.
    pub expected: Option<u128>,
    pub matches_expected: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub space: SpaceDescriptor,
    pub construction: String,
    pub class_count: usize,
    pub partition: PartitionCheck,
    pub proper: Option<ProperCheck>,
    pub complete: Option<CompleteCheck>,
    /// Number of classes of each size.
    pub class_sizes: BTreeMap<usize, usize>,
    pub chain: Option<ChainCheck>,
}

impl VerificationReport {
    /// Partition holds and every requested check holds.
    pub fn passed(&self) -> bool {
        self.partition.holds
            && self.proper.as_ref().is_none_or(|c| c.holds)
            && self.complete.as_ref().is_none_or(|c| c.holds)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

/// Runs the partition check and the requested property checks. Property
/// checks are skipped when the classes do not partition the lines.
pub fn verify_coloring(space: &AffineSpace, c: &Coloring, checks: &[Check]) -> VerificationReport {
    let partition = match c.check_partition(space) {
        Ok(()) => PartitionCheck {
            holds: true,
            error: None,
        },
        Err(e) => PartitionCheck {
            holds: false,
            error: Some(e.to_string()),
        },
    };
    let run = partition.holds;
    let proper = (run && checks.contains(&Check::Proper)).then(|| is_proper(space, c));
    let complete = (run && checks.contains(&Check::Complete)).then(|| is_complete(space, c));
    VerificationReport {
        space: c.space.clone(),
        construction: c.construction().to_string(),
        class_count: c.class_count(),
        partition,
        proper,
        complete,
        class_sizes: c.size_census(),
        chain: chain_check(space, c),
    }
}

fn chain_check(space: &AffineSpace, c: &Coloring) -> Option<ChainCheck> {
    let (n, q) = (space.n() as u32, space.q() as u64);
    let chromatic = bounds::chromatic_index(n, q).ok()?;
    let psi_upper_exact = bounds::psi_upper(n, q).ok()?.exact;
    let class_count = c.class_count() as u128;
    let expected = c
        .construction()
        .parse()
        .ok()
        .and_then(|m| bounds::construction_count(m, n, q));
    Some(ChainCheck {
        class_count,
        chromatic,
        psi_upper_exact,
        within_psi_upper: class_count <= psi_upper_exact,
        expected,
        matches_expected: expected.map(|e| e == class_count),
    })
}
