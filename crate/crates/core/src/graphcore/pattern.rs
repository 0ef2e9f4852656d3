//! Small pattern graphs `L` and exhaustive embedding-based queries against a host.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::graph::LabeledGraph;
use crate::clique::{max_clique, BitMatrix};
use crate::error::{Error, Result};

/// Default node budget for embedding enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 32;

const MAX_PATTERN_ORDER: usize = 10;

/// A fixed small graph `L` with its order, size, chromatic number and
/// automorphism count cached.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LabeledGraph", into = "LabeledGraph")]
pub struct PatternGraph {
    graph: LabeledGraph,
    chromatic: usize,
    automorphisms: u64,
}

impl PatternGraph {
    pub fn new(graph: LabeledGraph) -> Result<Self> {
        let chromatic = chromatic_number(&graph)?;
        let masks = graph.neighbor_masks()?;
        let emb = Embedder::new(&masks, &masks);
        let mut automorphisms = 0u64;
        let mut budget = u64::MAX;
        let _ = emb.for_each(u64::MAX, &mut budget, &mut |_| {
            automorphisms += 1;
            ControlFlow::Continue(())
        })?;
        Ok(PatternGraph { graph, chromatic, automorphisms })
    }

    pub fn complete(r: usize) -> Self {
        Self::new(LabeledGraph::complete(r)).expect("small complete graph")
    }

    /// Path on `r` vertices.
    pub fn path(r: usize) -> Self {
        let g = LabeledGraph::from_edges(r, (1..r).map(|i| (i - 1, i))).expect("path edges");
        Self::new(g).expect("small path")
    }

    pub fn cycle(r: usize) -> Self {
        assert!(r >= 3);
        let g = LabeledGraph::from_edges(r, (0..r).map(|i| (i, (i + 1) % r))).expect("cycle edges");
        Self::new(g).expect("small cycle")
    }

    pub fn complete_bipartite(s: usize, t: usize) -> Self {
        let edges = (0..s).flat_map(|a| (0..t).map(move |b| (a, s + b)));
        Self::new(LabeledGraph::from_edges(s + t, edges).expect("bipartite edges")).expect("small K_st")
    }

    /// Parses `K3`, `C5`, `P4`, `S5` (star with 5 leaves), `K2,3`, or a graph line.
    pub fn parse(spec: &str) -> Result<Self> {
        let s = spec.trim();
        if s.starts_with("n=") {
            return Self::new(LabeledGraph::parse_line(s)?);
        }
        let bad = || Error::usage(format!("unrecognized pattern {spec:?}"));
        let (kind, rest) = s.split_at(1.min(s.len()));
        let num = |x: &str| x.parse::<usize>().map_err(|_| bad());
        let check = |r: usize| if (1..=MAX_PATTERN_ORDER).contains(&r) { Ok(r) } else { Err(bad()) };
        match kind {
            "K" if rest.contains(',') => {
                let (a, b) = rest.split_once(',').unwrap();
                let (a, b) = (num(a)?, num(b)?);
                check(a + b)?;
                Ok(Self::complete_bipartite(a, b))
            }
            "K" => Ok(Self::complete(check(num(rest)?)?)),
            "C" => {
                let r = check(num(rest)?)?;
                if r < 3 {
                    return Err(bad());
                }
                Ok(Self::cycle(r))
            }
            "P" => Ok(Self::path(check(num(rest)?)?)),
            "S" => {
                let k = num(rest)?;
                check(k + 1)?;
                Ok(Self::complete_bipartite(1, k))
            }
            _ => Err(bad()),
        }
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.graph.n()
    }

    pub fn size(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn chromatic_number(&self) -> usize {
        self.chromatic
    }

    pub fn automorphism_count(&self) -> u64 {
        self.automorphisms
    }

    pub fn is_complete(&self) -> bool {
        self.size() == self.graph.slot_count()
    }
}

impl TryFrom<LabeledGraph> for PatternGraph {
    type Error = Error;

    fn try_from(g: LabeledGraph) -> Result<Self> {
        Self::new(g)
    }
}

impl From<PatternGraph> for LabeledGraph {
    fn from(p: PatternGraph) -> Self {
        p.graph
    }
}

impl fmt::Debug for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern(v={}, e={}, chi={}, {})", self.order(), self.size(), self.chromatic, self.graph.to_line())
    }
}

/// Backtracking enumerator of injective edge-preserving maps pattern -> host.
pub(crate) struct Embedder<'a> {
    host: &'a [u64],
    order: Vec<usize>,
    /// For each position in `order`, the earlier positions adjacent in the pattern.
    back: Vec<Vec<usize>>,
    /// Allowed host vertices per position.
    domains: Vec<u64>,
}

impl<'a> Embedder<'a> {
    pub(crate) fn new(pattern: &[u64], host: &'a [u64]) -> Self {
        let k = pattern.len();
        let mut order = Vec::with_capacity(k);
        let mut placed = 0u64;
        while order.len() < k {
            let next = (0..k)
                .filter(|&v| placed >> v & 1 == 0)
                .max_by_key(|&v| ((pattern[v] & placed).count_ones(), pattern[v].count_ones(), usize::MAX - v))
                .unwrap();
            order.push(next);
            placed |= 1 << next;
        }
        let back = (0..k)
            .map(|i| (0..i).filter(|&j| pattern[order[i]] >> order[j] & 1 == 1).collect())
            .collect();
        Embedder { host, order, back, domains: vec![u64::MAX; k] }
    }

    /// Forces pattern vertex `a` onto host vertex `x`.
    pub(crate) fn pin(mut self, a: usize, x: usize) -> Self {
        let pos = self.order.iter().position(|&v| v == a).expect("pattern vertex");
        self.domains[pos] = 1 << x;
        self
    }

    /// Calls `f` with the image of each pattern vertex for every embedding whose
    /// image lies in `allowed`. `budget` is decremented once per search node.
    pub(crate) fn for_each<F>(&self, allowed: u64, budget: &mut u64, f: &mut F) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let n = self.host.len();
        let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut images = vec![0usize; self.order.len()];
        let mut by_vertex = vec![0usize; self.order.len()];
        self.rec(0, allowed & full, &mut images, &mut by_vertex, budget, f)
    }

    fn rec<F>(
        &self,
        pos: usize,
        free: u64,
        images: &mut [usize],
        by_vertex: &mut [usize],
        budget: &mut u64,
        f: &mut F,
    ) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if *budget == 0 {
            return Err(Error::resource("embedding enumeration budget exhausted"));
        }
        *budget -= 1;
        if pos == self.order.len() {
            return Ok(f(by_vertex));
        }
        let mut cand = free & self.domains[pos];
        for &j in &self.back[pos] {
            cand &= self.host[images[j]];
        }
        while cand != 0 {
            let h = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            images[pos] = h;
            by_vertex[self.order[pos]] = h;
            if self.rec(pos + 1, free & !(1 << h), images, by_vertex, budget, f)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

fn host_masks(g: &LabeledGraph) -> Result<Vec<u64>> {
    g.neighbor_masks()
        .map_err(|_| Error::resource(format!("host has {} vertices; pattern search supports n <= 64", g.n())))
}

/// Number of subgraphs of `g` isomorphic to `l` (embeddings divided by `|Aut(L)|`).
pub fn count_copies(g: &LabeledGraph, l: &PatternGraph) -> Result<u64> {
    count_copies_within(g, l, DEFAULT_ENUMERATION_BUDGET)
}

pub fn count_copies_within(g: &LabeledGraph, l: &PatternGraph, budget: u64) -> Result<u64> {
    if l.order() > g.n() {
        return Ok(0);
    }
    let host = host_masks(g)?;
    let pat = l.graph.neighbor_masks()?;
    let mut embeddings = 0u64;
    let mut budget = budget;
    let _ = Embedder::new(&pat, &host).for_each(u64::MAX, &mut budget, &mut |_| {
        embeddings += 1;
        ControlFlow::Continue(())
    })?;
    Ok(embeddings / l.automorphisms)
}

/// Vertex set of some copy of `l` avoiding the vertices in `forbidden`.
pub fn find_copy_avoiding(g: &LabeledGraph, l: &PatternGraph, forbidden: u64) -> Result<Option<u64>> {
    if l.order() > g.n() {
        return Ok(None);
    }
    let host = host_masks(g)?;
    let pat = l.graph.neighbor_masks()?;
    let mut found = None;
    let mut budget = DEFAULT_ENUMERATION_BUDGET;
    let _ = Embedder::new(&pat, &host).for_each(!forbidden, &mut budget, &mut |img| {
        found = Some(img.iter().fold(0u64, |m, &v| m | 1 << v));
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// True iff `g` has a copy of `l` that uses the edge `{u, v}`.
pub fn has_copy_through_edge(g: &LabeledGraph, l: &PatternGraph, u: usize, v: usize) -> Result<bool> {
    let host = host_masks(g)?;
    if !g.has_edge(u, v) {
        return Ok(false);
    }
    let pat = l.graph.neighbor_masks()?;
    let mut budget = DEFAULT_ENUMERATION_BUDGET;
    for (a, b) in l.graph.edges() {
        for (x, y) in [(u, v), (v, u)] {
            let emb = Embedder::new(&pat, &host).pin(a, x).pin(b, y);
            let flow = emb.for_each(u64::MAX, &mut budget, &mut |_| ControlFlow::Break(()))?;
            if flow.is_break() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// How a disjoint-copy count was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountBound {
    Exact,
    LowerBound,
}

/// Maximum number of pairwise vertex-disjoint copies of `l` in `g`.
///
/// Exact when the set-packing search completes within `exact_budget` nodes;
/// otherwise the better of the greedy packing and the partial search, flagged
/// as a lower bound.
pub fn max_disjoint_copies(g: &LabeledGraph, l: &PatternGraph, exact_budget: u64) -> Result<(usize, CountBound)> {
    if l.order() > g.n() {
        return Ok((0, CountBound::Exact));
    }
    let greedy = greedy_disjoint_copies(g, l)?;
    if greedy == g.n() / l.order() {
        return Ok((greedy, CountBound::Exact));
    }
    let host = host_masks(g)?;
    let pat = l.graph.neighbor_masks()?;
    let mut sets = BTreeSet::new();
    let mut budget = exact_budget;
    let enumerated = Embedder::new(&pat, &host).for_each(u64::MAX, &mut budget, &mut |img| {
        sets.insert(img.iter().fold(0u64, |m, &v| m | 1 << v));
        ControlFlow::Continue(())
    });
    if enumerated.is_err() {
        return Ok((greedy, CountBound::LowerBound));
    }
    let sets: Vec<u64> = sets.into_iter().collect();
    let mut disjoint = BitMatrix::new(sets.len());
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i] & sets[j] == 0 {
                disjoint.set_symmetric(i, j);
            }
        }
    }
    let out = max_clique(&disjoint, budget.max(1));
    let best = out.clique.len().max(greedy);
    Ok((best, if out.exact { CountBound::Exact } else { CountBound::LowerBound }))
}

/// Repeatedly takes the first copy found among unused vertices.
pub fn greedy_disjoint_copies(g: &LabeledGraph, l: &PatternGraph) -> Result<usize> {
    let mut used = 0u64;
    let mut count = 0;
    while let Some(set) = find_copy_avoiding(g, l, used)? {
        used |= set;
        count += 1;
    }
    Ok(count)
}

/// True iff `g` contains `K_{s,t}` as a (not necessarily induced) subgraph.
pub fn contains_kst(g: &LabeledGraph, s: usize, t: usize) -> Result<bool> {
    contains_kst_within(g, s, t, DEFAULT_ENUMERATION_BUDGET)
}

pub fn contains_kst_within(g: &LabeledGraph, s: usize, t: usize, budget: u64) -> Result<bool> {
    if s == 0 || s > t {
        return Err(Error::usage(format!("K_{{s,t}} query needs 1 <= s <= t, got s={s}, t={t}")));
    }
    if s + t > g.n() {
        return Ok(false);
    }
    let masks = host_masks(g)?;
    let n = g.n();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut budget = budget;

    // Enumerate s-subsets in increasing order, carrying their common neighborhood.
    fn rec(masks: &[u64], start: usize, left: usize, common: u64, t: usize, budget: &mut u64) -> Result<bool> {
        if *budget == 0 {
            return Err(Error::resource("K_{s,t} enumeration budget exhausted"));
        }
        *budget -= 1;
        if (common.count_ones() as usize) < t {
            return Ok(false);
        }
        if left == 0 {
            return Ok(true);
        }
        for v in start..masks.len() {
            if rec(masks, v + 1, left - 1, common & masks[v], t, budget)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    rec(&masks, 0, s, full, t, &mut budget)
}

/// Exact chromatic number by trying `k = 1, 2, ...` colorings exhaustively.
pub fn chromatic_number(l: &LabeledGraph) -> Result<usize> {
    let n = l.n();
    if n > MAX_PATTERN_ORDER {
        return Err(Error::resource(format!(
            "chromatic number search supports at most {MAX_PATTERN_ORDER} vertices, got {n}"
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    let adj = l.adjacency_lists();
    let mut colors = vec![usize::MAX; n];

    fn colorable(v: usize, k: usize, adj: &[Vec<usize>], colors: &mut [usize]) -> bool {
        if v == adj.len() {
            return true;
        }
        // Symmetry: vertex v may only open one new color.
        let used = colors[..v].iter().copied().max().map_or(0, |c| c + 1);
        for c in 0..k.min(used + 1) {
            if adj[v].iter().all(|&w| colors[w] != c) {
                colors[v] = c;
                if colorable(v + 1, k, adj, colors) {
                    return true;
                }
            }
        }
        colors[v] = usize::MAX;
        false
    }

    Ok((1..=n).find(|&k| colorable(0, k, &adj, &mut colors)).unwrap_or(n))
}
