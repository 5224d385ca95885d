//! Brute-force ground truth on tiny geometries: exact maximum t-intersecting
//! families by clique search on the intersection graph, greedy maximal
//! extensions, and a heuristic probe for the largest non-pencil families.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::counting::{ExampleId, Params};
use crate::error::{Error, Result};
use crate::families::{cover_analysis, make_example, Anchors, Family, Psi};
use crate::geometry::{enumerate_subspaces, AmbientSpace, SpaceKind};
use crate::subspace::Subspace;

/// Default cap on the number of k-spaces the oracles will enumerate.
pub const ENUMERATION_CAP: u64 = 200_000;

#[derive(Debug, Clone)]
pub struct CliqueResult {
    pub size: usize,
    /// Lexicographically least optimum clique (best found on cutoff).
    pub witness: Family,
    /// True iff the branch-and-bound ran to completion within the budget.
    pub optimal: bool,
}

/// Dense bitset adjacency.
struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl Graph {
    fn new(n: usize) -> Graph {
        let words = n.div_ceil(64);
        Graph {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a * self.words + b / 64] |= 1 << (b % 64);
        self.adj[b * self.words + a / 64] |= 1 << (a % 64);
    }

    fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }
}

struct CliqueSearch<'g> {
    g: &'g Graph,
    best_size: usize,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    cutoff: bool,
    /// When set, stop as soon as a clique of this size is found.
    target: Option<usize>,
    found: bool,
}

impl<'g> CliqueSearch<'g> {
    fn new(g: &'g Graph, budget: u64) -> CliqueSearch<'g> {
        CliqueSearch {
            g,
            best_size: 0,
            best: Vec::new(),
            nodes: 0,
            budget,
            cutoff: false,
            target: None,
            found: false,
        }
    }

    /// Greedy coloring of `cand`; returns candidates reordered by ascending
    /// color along with their color numbers (a clique upper bound).
    fn color_sort(&self, cand: &[usize]) -> Vec<(usize, usize)> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in cand {
            let slot = classes
                .iter()
                .position(|class| class.iter().all(|&u| !self.g.has_edge(u, v)));
            match slot {
                Some(i) => classes[i].push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut out = Vec::with_capacity(cand.len());
        for (color, class) in classes.iter().enumerate() {
            for &v in class {
                out.push((v, color + 1));
            }
        }
        out
    }

    fn expand(&mut self, clique: &mut Vec<usize>, cand: Vec<usize>) {
        if self.cutoff || self.found {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.cutoff = true;
            return;
        }
        if cand.is_empty() {
            if clique.len() > self.best_size {
                self.best_size = clique.len();
                self.best = clique.clone();
                if Some(self.best_size) == self.target {
                    self.found = true;
                }
            }
            return;
        }
        let colored = self.color_sort(&cand);
        for i in (0..colored.len()).rev() {
            let (v, color) = colored[i];
            if clique.len() + color <= self.best_size {
                return;
            }
            let sub: Vec<usize> = colored[..i]
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| self.g.has_edge(u, v))
                .collect();
            clique.push(v);
            if clique.len() > self.best_size && sub.is_empty() {
                self.best_size = clique.len();
                self.best = clique.clone();
                if Some(self.best_size) == self.target {
                    self.found = true;
                }
            }
            self.expand(clique, sub);
            clique.pop();
            if self.cutoff || self.found {
                return;
            }
        }
    }
}

fn intersection_graph(space: &AmbientSpace, vertices: &[Subspace], t: i64) -> Graph {
    let mut g = Graph::new(vertices.len());
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if space
                .intersection_dim(&vertices[i], &vertices[j])
                .map(|d| d >= t)
                .unwrap_or(false)
            {
                g.add_edge(i, j);
            }
        }
    }
    g
}

fn enumerate_vertices(space: &AmbientSpace, k: i64) -> Result<Vec<Subspace>> {
    let mut vertices: Vec<Subspace> = enumerate_subspaces(space, k)?.collect();
    if vertices.len() as u64 > ENUMERATION_CAP {
        return Err(Error::TooLarge(vertices.len() as u64, ENUMERATION_CAP));
    }
    vertices.sort();
    Ok(vertices)
}

/// Is a clique of the given size reachable inside `cand`?
fn exists_clique(g: &Graph, cand: Vec<usize>, need: usize, budget: u64) -> bool {
    if need == 0 {
        return true;
    }
    let mut s = CliqueSearch::new(g, budget);
    s.best_size = need - 1;
    s.target = Some(need);
    let mut clique = Vec::new();
    s.expand(&mut clique, cand);
    s.found
}

/// Exact maximum t-intersecting family of k-spaces, by branch and bound
/// with a greedy coloring bound. Deterministic; sequential by design so the
/// result is identical for every thread count.
pub fn max_clique(
    space: &AmbientSpace,
    k: i64,
    t: i64,
    budget: Option<u64>,
) -> Result<CliqueResult> {
    let vertices = enumerate_vertices(space, k)?;
    let g = intersection_graph(space, &vertices, t);
    let budget = budget.unwrap_or(u64::MAX);
    let mut s = CliqueSearch::new(&g, budget);
    let mut clique = Vec::new();
    s.expand(&mut clique, (0..g.n).collect());
    let optimal = !s.cutoff;
    let size = s.best_size;
    let chosen = if optimal {
        // Second pass: lexicographically least clique of the optimum size,
        // built greedily with exact feasibility queries.
        let mut chosen: Vec<usize> = Vec::new();
        let mut cand: Vec<usize> = (0..g.n).collect();
        while chosen.len() < size {
            let mut advanced = false;
            for idx in 0..cand.len() {
                let v = cand[idx];
                let sub: Vec<usize> = cand[idx + 1..]
                    .iter()
                    .copied()
                    .filter(|&u| g.has_edge(u, v))
                    .collect();
                if exists_clique(&g, sub.clone(), size - chosen.len() - 1, u64::MAX) {
                    chosen.push(v);
                    cand = sub;
                    advanced = true;
                    break;
                }
            }
            assert!(advanced, "optimum size must stay reachable");
        }
        chosen
    } else {
        s.best
    };
    let witness = Family::new(
        space.clone(),
        k,
        chosen.into_iter().map(|i| vertices[i].clone()).collect(),
    )?;
    Ok(CliqueResult {
        size,
        witness,
        optimal,
    })
}

/// Greedy deterministic completion of a t-intersecting family to a maximal
/// one, scanning candidate k-spaces in canonical order.
pub fn extend_to_maximal(fam: &Family, t: i64) -> Result<Family> {
    if !crate::families::is_pairwise_t_intersecting(fam, t).holds {
        return Err(Error::NotIntersecting);
    }
    let candidates = enumerate_vertices(&fam.space, fam.k)?;
    let mut members = fam.members.clone();
    for c in candidates {
        if members.contains(&c) {
            continue;
        }
        let fits = members.iter().all(|m| {
            fam.space
                .intersection_dim(&c, m)
                .map(|d| d >= t)
                .unwrap_or(false)
        });
        if fits {
            members.push(c);
        }
    }
    Family::new(fam.space.clone(), fam.k, members)
}

/// Seeding strategy for the non-pencil probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seeding {
    /// All t-intersecting unordered pairs of k-spaces.
    Pairs,
    /// Pairs plus every single k-space.
    Exhaustive,
}

impl std::str::FromStr for Seeding {
    type Err = Error;
    fn from_str(s: &str) -> Result<Seeding> {
        match s {
            "pairs" => Ok(Seeding::Pairs),
            "exhaustive" => Ok(Seeding::Exhaustive),
            _ => Err(Error::ParseError(format!("unknown seeding strategy: {s}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeWitness {
    /// Size of the maximal family (serialized member count).
    pub size: usize,
    /// Projective dimension of the span of all members.
    pub span_dim: i64,
    /// The example the witness coincides with, if anchors realizing it were
    /// recovered.
    pub matches_example: Option<ExampleId>,
    #[serde(skip)]
    pub family: Family,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    /// Sizes of the distinct non-pencil maximal families reached, with
    /// multiplicity.
    pub histogram: BTreeMap<usize, usize>,
    /// Largest non-pencil maximal size observed (0 when none).
    pub max_size: usize,
    /// The maximum-size non-pencil families, in canonical order.
    pub witnesses: Vec<ProbeWitness>,
    /// Always true: seeds need not exhaust all maximal families, so the
    /// probe is falsification power, not proof.
    pub heuristic: bool,
}

/// A family is a t-pencil (or contained in one) iff all members share a
/// common subspace of dimension >= t that is admissible for the geometry.
pub fn is_pencil_like(fam: &Family, t: i64) -> bool {
    let Some(first) = fam.members.first() else {
        return true;
    };
    let mut core = first.clone();
    for m in &fam.members[1..] {
        match core.meet(m) {
            Ok(w) => core = w,
            Err(_) => return false,
        }
        if core.proj_dim() < t {
            return false;
        }
    }
    fam.space.kind == SpaceKind::Pg || fam.space.is_affine_subspace(&core)
}

fn span_of(fam: &Family) -> Result<Subspace> {
    let mut span = Subspace::empty(fam.space.field.clone(), fam.space.n);
    for m in &fam.members {
        span = span.join(m)?;
    }
    Ok(span)
}

/// Try to recognize `fam` as one of the paper's examples by recovering
/// anchors from the family itself.
fn recognize_example(fam: &Family, t: i64) -> Option<ExampleId> {
    let params = Params::new(fam.space.q(), fam.space.n as i64, fam.k, t);
    let two_type = match fam.space.kind {
        SpaceKind::Pg => ExampleId::P2,
        SpaceKind::Ag => ExampleId::A2,
    };
    // Γ-based shape: the (t+1)-covers span a (t+2)-space.
    if t + 1 <= fam.k {
        if let Ok(report) = cover_analysis(fam, t, t + 1) {
            if report.psi == Psi::Found(t + 1) && !report.covers.is_empty() {
                if let Ok(gamma) = span_of(&report.covers) {
                    if gamma.proj_dim() == t + 2 {
                        if let Ok(candidate) = make_example(
                            two_type,
                            &fam.space,
                            params,
                            Some(Anchors::TwoType { gamma }),
                        ) {
                            if candidate == *fam {
                                return Some(two_type);
                            }
                        }
                    }
                }
            }
        }
    }
    // One-type shape: a t-space δ on most members, and a member π meeting δ
    // in a (t-1)-space.
    let one_type = match fam.space.kind {
        SpaceKind::Pg => ExampleId::P1,
        SpaceKind::Ag => ExampleId::A1,
    };
    let mut delta_counts: BTreeMap<Subspace, usize> = BTreeMap::new();
    for (i, a) in fam.members.iter().enumerate() {
        for b in &fam.members[i + 1..] {
            if let Ok(w) = a.meet(b) {
                if w.proj_dim() == t {
                    *delta_counts.entry(w).or_insert(0) += 1;
                }
            }
        }
    }
    let delta = delta_counts
        .into_iter()
        .max_by_key(|(s, c)| (*c, std::cmp::Reverse(s.clone())))
        .map(|(s, _)| s)?;
    let pi = fam
        .members
        .iter()
        .find(|m| m.meet(&delta).map(|w| w.proj_dim()) == Ok(t - 1))?
        .clone();
    if let Ok(candidate) = make_example(
        one_type,
        &fam.space,
        params,
        Some(Anchors::OneType { delta, pi }),
    ) {
        if candidate == *fam {
            return Some(one_type);
        }
    }
    None
}

/// Extend non-pencil seeds to maximal families and report the size
/// distribution and the largest non-pencil families reached. Heuristic by
/// construction.
pub fn second_largest_probe(
    space: &AmbientSpace,
    k: i64,
    t: i64,
    seeding: Seeding,
    budget: Option<u64>,
) -> Result<ProbeReport> {
    let vertices = enumerate_vertices(space, k)?;
    let mut seeds: Vec<Vec<Subspace>> = Vec::new();
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            if space.intersection_dim(a, b).map(|d| d >= t).unwrap_or(false) {
                seeds.push(vec![a.clone(), b.clone()]);
            }
        }
    }
    if seeding == Seeding::Exhaustive {
        seeds.extend(vertices.iter().map(|v| vec![v.clone()]));
    }
    if let Some(limit) = budget {
        seeds.truncate(limit as usize);
    }
    let mut reached: Vec<Family> = Vec::new();
    for seed in seeds {
        let fam = Family::new(space.clone(), k, seed)?;
        let maximal = extend_to_maximal(&fam, t)?;
        if !is_pencil_like(&maximal, t) {
            reached.push(maximal);
        }
    }
    reached.sort_by(|a, b| a.members.cmp(&b.members));
    reached.dedup();
    let mut histogram = BTreeMap::new();
    for fam in &reached {
        *histogram.entry(fam.len()).or_insert(0) += 1;
    }
    let max_size = reached.iter().map(Family::len).max().unwrap_or(0);
    let witnesses = reached
        .iter()
        .filter(|f| f.len() == max_size)
        .map(|f| {
            Ok(ProbeWitness {
                size: f.len(),
                span_dim: span_of(f)?.proj_dim(),
                matches_example: recognize_example(f, t),
                family: f.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProbeReport {
        histogram,
        max_size,
        witnesses,
        heuristic: true,
    })
}
