//! Exact chromatic, achromatic and pseudoachromatic indices of small line
//! sets by branch and bound.
//!
//! The search sees only point sets: two lines are adjacent when they share
//! a point. Nothing here depends on how the lines were produced.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("the line set is empty")]
    Empty,
    #[error("{got} lines, the search handles at most {max}")]
    TooManyLines { got: usize, max: usize },
    #[error("line {0} has no points")]
    EmptyLine(usize),
}

pub const MAX_LINES: usize = 64;

/// Lines as vertices, adjacency "shares at least one point".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionGraph {
    adj: Vec<u64>,
}

impl IntersectionGraph {
    pub fn from_point_sets(lines: &[Vec<u32>]) -> Result<Self, OracleError> {
        if lines.is_empty() {
            return Err(OracleError::Empty);
        }
        if lines.len() > MAX_LINES {
            return Err(OracleError::TooManyLines {
                got: lines.len(),
                max: MAX_LINES,
            });
        }
        if let Some(i) = lines.iter().position(|l| l.is_empty()) {
            return Err(OracleError::EmptyLine(i));
        }
        let mut adj = vec![0u64; lines.len()];
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if lines[i].iter().any(|p| lines[j].contains(p)) {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        Ok(IntersectionGraph { adj })
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adj[a].count_ones() as usize
    }

    pub fn neighbours(&self, a: usize) -> u64 {
        self.adj[a]
    }

    fn edges(&self) -> usize {
        self.adj
            .iter()
            .map(|a| a.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    fn max_degree(&self) -> usize {
        (0..self.len()).map(|a| self.degree(a)).max().unwrap_or(0)
    }

    /// A clique found greedily from every start vertex.
    fn greedy_clique(&self) -> usize {
        let mut best = 1;
        for start in 0..self.len() {
            let mut cand = self.adj[start];
            let mut size = 1;
            while cand != 0 {
                let v = cand.trailing_zeros() as usize;
                size += 1;
                cand &= self.adj[v];
            }
            best = best.max(size);
        }
        best
    }
}

/// Search limits. The node limit makes results reproducible; the time
/// limit keeps interactive use bounded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(n: u64) -> Self {
        Budget {
            max_nodes: Some(n),
            max_time: None,
        }
    }

    pub fn seconds(s: f64) -> Self {
        Budget {
            max_nodes: None,
            max_time: Some(Duration::from_secs_f64(s)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Index {
    Chi,
    Alpha,
    Psi,
}

impl std::str::FromStr for Index {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chi" => Ok(Index::Chi),
            "alpha" => Ok(Index::Alpha),
            "psi" => Ok(Index::Psi),
            _ => Err(format!("unknown index {s:?} (expected chi, alpha or psi)")),
        }
    }
}

/// The index lies in `[lower, upper]`; `exact` iff the two agree because
/// the search finished. The witness attains the bound on the optimizing
/// side (`lower` for a maximum, `upper` for a minimum).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub index: Index,
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub witness: Vec<Vec<usize>>,
    pub nodes: u64,
}

impl OracleResult {
    pub fn value(&self) -> Option<usize> {
        self.exact.then_some(self.lower)
    }
}

pub fn exact_index(g: &IntersectionGraph, index: Index, budget: Budget) -> OracleResult {
    match index {
        Index::Chi => exact_chromatic(g, budget),
        Index::Alpha => exact_achromatic(g, budget),
        Index::Psi => exact_pseudoachromatic(g, budget),
    }
}

struct Clock {
    budget: Budget,
    start: Instant,
    nodes: u64,
    out: bool,
}

impl Clock {
    fn new(budget: Budget) -> Self {
        Clock {
            budget,
            start: Instant::now(),
            nodes: 0,
            out: false,
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.budget.max_nodes.is_some_and(|m| self.nodes > m) {
            self.out = true;
        }
        if self.nodes.is_multiple_of(4096)
            && self
                .budget
                .max_time
                .is_some_and(|t| self.start.elapsed() > t)
        {
            self.out = true;
        }
        !self.out
    }
}

fn all_lines(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn masks_to_classes(masks: &[u64]) -> Vec<Vec<usize>> {
    masks
        .iter()
        .map(|&m| (0..64).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

struct MaxSearch<'a> {
    g: &'a IntersectionGraph,
    proper: bool,
    members: Vec<u64>,
    reach: Vec<u64>,
    best: usize,
    best_masks: Vec<u64>,
    clock: Clock,
}

impl MaxSearch<'_> {
    fn met(&self, a: usize, b: usize) -> bool {
        self.reach[a] & self.members[b] != 0
    }

    /// Size of a greedy maximal matching on the pairs of classes that do
    /// not yet meet. Each matched pair needs its own remaining line placed
    /// in an existing class.
    fn unmet_matching(&self) -> usize {
        let k = self.members.len();
        let mut used = 0u64;
        let mut m = 0;
        for a in 0..k {
            if used >> a & 1 == 1 {
                continue;
            }
            if let Some(b) = (a + 1..k).find(|&b| used >> b & 1 == 0 && !self.met(a, b)) {
                used |= 1 << a | 1 << b;
                m += 1;
            }
        }
        m
    }

    fn complete(&self) -> bool {
        let k = self.members.len();
        (0..k).all(|a| (a + 1..k).all(|b| self.met(a, b)))
    }

    fn go(&mut self, line: usize) {
        if !self.clock.tick() {
            return;
        }
        let n = self.g.len();
        let k = self.members.len();
        if line == n {
            if k > self.best && self.complete() {
                self.best = k;
                self.best_masks = self.members.clone();
            }
            return;
        }
        let remaining = n - line;
        if k + remaining - self.unmet_matching().min(remaining) <= self.best {
            return;
        }
        let bit = 1u64 << line;
        let nb = self.g.neighbours(line);

        self.members.push(bit);
        self.reach.push(nb);
        self.go(line + 1);
        self.members.pop();
        self.reach.pop();

        for c in 0..k {
            if self.proper && nb & self.members[c] != 0 {
                continue;
            }
            self.members[c] |= bit;
            let saved = self.reach[c];
            self.reach[c] |= nb;
            self.go(line + 1);
            self.members[c] &= !bit;
            self.reach[c] = saved;
            if self.clock.out {
                return;
            }
        }
    }
}

/// Largest k with a k-class partition of the lines whose classes pairwise
/// contain adjacent lines, and whose classes are independent if `proper`.
fn max_complete(g: &IntersectionGraph, proper: bool, index: Index, budget: Budget) -> OracleResult {
    let mut search = MaxSearch {
        g,
        proper,
        members: Vec::new(),
        reach: Vec::new(),
        // a single class holding every line is always complete
        best: usize::from(!proper),
        best_masks: if proper {
            Vec::new()
        } else {
            vec![all_lines(g.len())]
        },
        clock: Clock::new(budget),
    };
    search.go(0);
    let exact = !search.clock.out;
    let upper = if exact {
        search.best
    } else {
        static_upper(g).max(search.best)
    };
    OracleResult {
        index,
        lower: search.best,
        upper,
        exact,
        witness: masks_to_classes(&search.best_masks),
        nodes: search.clock.nodes,
    }
}

/// A bound valid for any complete partition: k(k−1)/2 pairs need distinct
/// adjacent line pairs, and a smallest class (at most ⌊N/k⌋ lines) must
/// reach the k−1 other classes through its neighbours.
fn static_upper(g: &IntersectionGraph) -> usize {
    let n = g.len();
    let (e, d) = (g.edges(), g.max_degree());
    (1..=n)
        .rev()
        .find(|&k| k * (k - 1) / 2 <= e && k - 1 <= (n / k) * d)
        .unwrap_or(1)
}

/// ψ′: largest number of classes in a complete partition.
pub fn exact_pseudoachromatic(g: &IntersectionGraph, budget: Budget) -> OracleResult {
    max_complete(g, false, Index::Psi, budget)
}

/// α′: largest number of classes in a complete partition into independent
/// sets.
pub fn exact_achromatic(g: &IntersectionGraph, budget: Budget) -> OracleResult {
    max_complete(g, true, Index::Alpha, budget)
}

struct MinSearch<'a> {
    g: &'a IntersectionGraph,
    members: Vec<u64>,
    best: usize,
    best_masks: Vec<u64>,
    floor: usize,
    clock: Clock,
}

impl MinSearch<'_> {
    fn go(&mut self, line: usize) {
        if !self.clock.tick() || self.best == self.floor {
            return;
        }
        let k = self.members.len();
        if line == self.g.len() {
            if k < self.best {
                self.best = k;
                self.best_masks = self.members.clone();
            }
            return;
        }
        let bit = 1u64 << line;
        let nb = self.g.neighbours(line);
        for c in 0..k {
            if nb & self.members[c] == 0 {
                self.members[c] |= bit;
                self.go(line + 1);
                self.members[c] &= !bit;
                if self.clock.out || self.best == self.floor {
                    return;
                }
            }
        }
        if k + 1 < self.best {
            self.members.push(bit);
            self.go(line + 1);
            self.members.pop();
        }
    }
}

/// χ′: fewest classes in a partition into independent sets.
pub fn exact_chromatic(g: &IntersectionGraph, budget: Budget) -> OracleResult {
    let floor = g.greedy_clique();
    let mut search = MinSearch {
        g,
        members: Vec::new(),
        best: g.len() + 1,
        best_masks: Vec::new(),
        floor,
        clock: Clock::new(budget),
    };
    search.go(0);
    let finished = !search.clock.out || search.best == floor;
    let upper = search.best.min(g.len());
    let lower = if finished { upper } else { floor };
    OracleResult {
        index: Index::Chi,
        lower,
        upper,
        exact: finished,
        witness: masks_to_classes(&search.best_masks),
        nodes: search.clock.nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> IntersectionGraph {
        IntersectionGraph::from_point_sets(&[vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap()
    }

    #[test]
    fn triangle_indices() {
        let g = triangle();
        assert_eq!(
            exact_pseudoachromatic(&g, Budget::unlimited()).value(),
            Some(3)
        );
        assert_eq!(exact_achromatic(&g, Budget::unlimited()).value(), Some(3));
        assert_eq!(exact_chromatic(&g, Budget::unlimited()).value(), Some(3));
    }

    #[test]
    fn two_disjoint_lines() {
        let g = IntersectionGraph::from_point_sets(&[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(
            exact_pseudoachromatic(&g, Budget::unlimited()).value(),
            Some(1)
        );
        assert_eq!(exact_chromatic(&g, Budget::unlimited()).value(), Some(1));
    }

    #[test]
    fn tiny_budget_gives_interval() {
        let lines: Vec<Vec<u32>> = (0..12u32)
            .map(|i| vec![i % 4, 4 + i / 4, 8 + (i % 3)])
            .collect();
        let g = IntersectionGraph::from_point_sets(&lines).unwrap();
        let r = exact_pseudoachromatic(&g, Budget::nodes(5));
        assert!(!r.exact);
        assert!(r.lower <= r.upper);
        assert_eq!(r.value(), None);
    }

    #[test]
    fn input_errors() {
        assert_eq!(
            IntersectionGraph::from_point_sets(&[]),
            Err(OracleError::Empty)
        );
        let many = vec![vec![0]; 65];
        assert!(matches!(
            IntersectionGraph::from_point_sets(&many),
            Err(OracleError::TooManyLines { got: 65, .. })
        ));
    }
}
