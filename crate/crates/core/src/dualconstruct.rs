//! Blocker graphs: hosts none of whose subgraph differences lie in a class.
//!
//! Every pairwise XOR of subgraphs of `H` is again a subgraph of `H`, so for a
//! monotone class that `H` avoids, the `2^e(H)` subgraphs of `H` form a dual
//! family and `log2 M <= C(n,2) - e(H)`.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artifact::{check_format_version, FORMAT_VERSION};
use crate::bincode::binomial;
use crate::error::{Error, Result};
use crate::graphcore::{
    contains_kst, count_copies, has_copy_through_edge, max_disjoint_copies, pair_count, CountBound, LabeledGraph,
    PatternGraph, DEFAULT_ENUMERATION_BUDGET,
};
use crate::predicate::Predicate;
use crate::rng::{substream, Rng};

/// Largest `n` for brute-force Turán numbers.
pub const MAX_BRUTEFORCE_N: usize = 10;
const BRUTEFORCE_BUDGET: u64 = 1 << 28;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomStats {
    pub seed: u64,
    pub retry: u64,
    pub t: usize,
    pub delta: f64,
    pub sampled_edges: usize,
    pub copies_observed: u64,
    pub edges_deleted: usize,
    pub expected_copies: f64,
    pub edge_floor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockerReport {
    pub format_version: u32,
    pub host: LabeledGraph,
    pub predicate: Option<Predicate>,
    pub edge_count: usize,
    pub dual_log_bound: usize,
    /// The host fails the predicate, so no difference of its subgraphs satisfies it.
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copies: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_disjoint: Option<(usize, CountBound)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_edge_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomStats>,
}

impl BlockerReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: BlockerReport = serde_json::from_str(s)?;
        check_format_version(r.format_version)?;
        Ok(r)
    }
}

/// `C(n,2) - e(H)`, with the blocker property checked when a predicate is given.
pub fn dual_bound(host: &LabeledGraph, predicate: Option<&Predicate>) -> Result<BlockerReport> {
    let verified = match predicate {
        Some(p) => !p.evaluate(host)?,
        None => false,
    };
    Ok(BlockerReport {
        format_version: FORMAT_VERSION,
        host: host.clone(),
        predicate: predicate.cloned(),
        edge_count: host.edge_count(),
        dual_log_bound: pair_count(host.n()) - host.edge_count(),
        verified,
        copies: None,
        max_disjoint: None,
        expected_edge_count: None,
        random: None,
    })
}

/// Complete `parts`-partite graph with contiguous blocks of balanced sizes.
pub fn turan_graph(n: usize, parts: usize) -> Result<LabeledGraph> {
    if parts == 0 {
        return Err(Error::usage("Turán graph needs at least one part"));
    }
    let block = |v: usize| v * parts / n.max(1);
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| block(u) != block(v));
    LabeledGraph::from_edges(n, edges)
}

/// Maximum edge count of an `l`-free graph on `n` vertices, with a witness,
/// by branch and bound over the edges in canonical order.
pub fn turan_ex_bruteforce_within(n: usize, l: &PatternGraph, budget: u64) -> Result<(usize, LabeledGraph)> {
    if n > MAX_BRUTEFORCE_N {
        return Err(Error::usage(format!("brute-force Turán numbers support n <= {MAX_BRUTEFORCE_N}")));
    }
    if l.size() == 0 {
        return Err(Error::usage("the pattern needs at least one edge"));
    }
    struct Search<'a> {
        l: &'a PatternGraph,
        edges: Vec<(usize, usize)>,
        g: LabeledGraph,
        best: usize,
        best_graph: LabeledGraph,
        budget: u64,
    }
    impl Search<'_> {
        fn run(&mut self, idx: usize, count: usize) -> Result<()> {
            if count + (self.edges.len() - idx) <= self.best && idx > 0 {
                return Ok(());
            }
            if self.budget == 0 {
                return Err(Error::resource(format!("Turán search budget exhausted at {} edges", self.best)));
            }
            self.budget -= 1;
            if idx == self.edges.len() {
                self.best = count;
                self.best_graph = self.g.clone();
                return Ok(());
            }
            let (u, v) = self.edges[idx];
            self.g.add_edge(u, v)?;
            if !has_copy_through_edge(&self.g, self.l, u, v)? {
                self.run(idx + 1, count + 1)?;
            }
            self.g.remove_edge(u, v)?;
            self.run(idx + 1, count)
        }
    }
    let mut s = Search {
        l,
        edges: (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect(),
        g: LabeledGraph::empty(n),
        best: 0,
        best_graph: LabeledGraph::empty(n),
        budget,
    };
    s.run(0, 0)?;
    Ok((s.best, s.best_graph))
}

/// Exact `ex(n, L)` for `n <= 10`.
pub fn turan_ex_bruteforce(n: usize, l: &PatternGraph) -> Result<usize> {
    turan_ex_bruteforce_within(n, l, BRUTEFORCE_BUDGET).map(|(e, _)| e)
}

/// An extremal `l`-free graph: the Turán graph for complete `l`, brute force otherwise.
pub fn extremal_free_graph(n: usize, l: &PatternGraph) -> Result<LabeledGraph> {
    if l.size() == 0 {
        return Err(Error::usage("the pattern needs at least one edge"));
    }
    if l.is_complete() {
        return turan_graph(n, l.order() - 1);
    }
    if n > MAX_BRUTEFORCE_N {
        return Err(Error::usage(format!(
            "no extremal graph for a non-complete pattern beyond n = {MAX_BRUTEFORCE_N}"
        )));
    }
    turan_ex_bruteforce_within(n, l, BRUTEFORCE_BUDGET).map(|(_, g)| g)
}

/// Host with fewer than `k` copies of `l`: an extremal `l`-free graph plus
/// every edge (in canonical order) whose addition keeps the count below `k`.
pub fn build_kcopy_blocker(n: usize, l: &PatternGraph, k: usize) -> Result<BlockerReport> {
    if k == 0 {
        return Err(Error::usage("copy threshold k must be positive"));
    }
    let mut host = extremal_free_graph(n, l)?;
    for u in 0..n {
        for v in u + 1..n {
            if host.has_edge(u, v) {
                continue;
            }
            host.add_edge(u, v)?;
            if count_copies(&host, l)? >= k as u64 {
                host.remove_edge(u, v)?;
            }
        }
    }
    let copies = count_copies(&host, l)?;
    let predicate = Predicate::KCopies { pattern: l.clone(), k };
    let mut report = dual_bound(&host, None)?;
    report.predicate = Some(predicate);
    report.verified = copies < k as u64;
    report.copies = Some(copies);
    Ok(report)
}

/// Host whose copies of `l` all meet the clique `S = {0..k-2}`: `S` joined to
/// everything, plus an extremal `l`-free graph on the remaining vertices.
pub fn build_kdisjoint_blocker(n: usize, l: &PatternGraph, k: usize) -> Result<BlockerReport> {
    if k == 0 || k > n {
        return Err(Error::usage(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let s = k - 1;
    let rest = extremal_free_graph(n - s, l)?;
    let mut host = LabeledGraph::empty(n);
    for u in 0..s {
        for v in u + 1..n {
            host.add_edge(u, v)?;
        }
    }
    for (u, v) in rest.edges() {
        host.add_edge(u + s, v + s)?;
    }
    let closed_form = pair_count(s) + s * (n - s) + rest.edge_count();
    let disjoint = max_disjoint_copies(&host, l, DEFAULT_ENUMERATION_BUDGET)?;
    let mut report = dual_bound(&host, None)?;
    report.predicate = Some(Predicate::KDisjoint { pattern: l.clone(), k });
    report.verified = disjoint.1 == CountBound::Exact && disjoint.0 < k;
    report.max_disjoint = Some(disjoint);
    report.expected_edge_count = Some(closed_form);
    Ok(report)
}

/// `E[X] = C(n,2t) C(2t,t) delta^(t^2) / 2`, the expected number of `K_{t,t}`
/// copies in `G(n, delta)`.
pub fn expected_ktt_copies(n: usize, t: usize, delta: f64) -> f64 {
    0.5 * binomial(n as u64, 2 * t as u64) as f64 * binomial(2 * t as u64, t as u64) as f64 * delta.powi((t * t) as i32)
}

/// The asymptotic setting `t = c log2 n`, `delta = 2^(-2/c)`, where `delta^t = n^-2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KttSetting {
    pub t: f64,
    pub delta: f64,
    pub delta_pow_t: f64,
}

pub fn ktt_setting(n: usize, c: f64) -> KttSetting {
    let t = c * (n as f64).log2();
    let delta = (-2.0 / c).exp2();
    KttSetting { t, delta, delta_pow_t: delta.powf(t) }
}

/// Binomial random graph `G(n, p)`.
pub fn gnp(n: usize, p: f64, rng: &mut Rng) -> LabeledGraph {
    let mut g = LabeledGraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    g
}

/// Every `K_{t,t}` in `g` as `(A, B)` vertex masks with `min A < min B`,
/// ordered by vertex set and then by `A`.
pub fn ktt_copies(g: &LabeledGraph, t: usize, budget: u64) -> Result<Vec<(u64, u64)>> {
    let masks = g.neighbor_masks().map_err(|_| Error::usage("K_{t,t} enumeration supports n <= 64"))?;
    let n = g.n();
    let mut out = Vec::new();
    let mut budget = budget;
    fn subsets(pool: u64, left: usize, acc: u64, f: &mut dyn FnMut(u64) -> Result<()>) -> Result<()> {
        if left == 0 {
            return f(acc);
        }
        let mut p = pool;
        while p != 0 {
            let v = p.trailing_zeros();
            p &= p - 1;
            subsets(p, left - 1, acc | 1 << v, f)?;
        }
        Ok(())
    }
    #[allow(clippy::too_many_arguments)]
    fn sides(masks: &[u64], start: usize, left: usize, a: u64, common: u64, t: usize, budget: &mut u64, out: &mut Vec<(u64, u64)>) -> Result<()> {
        if *budget == 0 {
            return Err(Error::resource("K_{t,t} enumeration budget exhausted"));
        }
        *budget -= 1;
        if (common.count_ones() as usize) < t {
            return Ok(());
        }
        if left == 0 {
            let min_a = a.trailing_zeros();
            let pool = common & !((2u64 << min_a) - 1);
            return subsets(pool, t, 0, &mut |b| {
                out.push((a, b));
                Ok(())
            });
        }
        for v in start..masks.len() {
            sides(masks, v + 1, left - 1, a | 1 << v, common & masks[v], t, budget, out)?;
        }
        Ok(())
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    sides(&masks, 0, t, 0, full, t, &mut budget, &mut out)?;
    let key = |&(a, b): &(u64, u64)| {
        let set = a | b;
        let verts: Vec<u32> = (0..64).filter(|&v| set >> v & 1 == 1).collect();
        let av: Vec<u32> = (0..64).filter(|&v| a >> v & 1 == 1).collect();
        (verts, av)
    };
    out.sort_by_cached_key(key);
    Ok(out)
}

fn ktt_attempt(n: usize, t: usize, delta: f64, seed: u64, retry: u64) -> Result<(LabeledGraph, RandomStats)> {
    let run_seed = seed.wrapping_add(retry);
    let mut rng = substream(run_seed, 0);
    let mut g = gnp(n, delta, &mut rng);
    let sampled = g.edge_count();
    let copies = ktt_copies(&g, t, DEFAULT_ENUMERATION_BUDGET)?;
    let mut deleted = 0;
    for &(a, b) in &copies {
        let mut least = None;
        let mut intact = true;
        'scan: for u in (0..n).filter(|&u| (a | b) >> u & 1 == 1) {
            for v in (u + 1..n).filter(|&v| (a | b) >> v & 1 == 1) {
                let crossing = (a >> u & 1) != (a >> v & 1);
                if crossing {
                    if !g.has_edge(u, v) {
                        intact = false;
                        break 'scan;
                    }
                    least.get_or_insert((u, v));
                }
            }
        }
        if intact {
            let (u, v) = least.expect("K_{t,t} has edges");
            g.remove_edge(u, v)?;
            deleted += 1;
        }
    }
    let stats = RandomStats {
        seed: run_seed,
        retry,
        t,
        delta,
        sampled_edges: sampled,
        copies_observed: copies.len() as u64,
        edges_deleted: deleted,
        expected_copies: expected_ktt_copies(n, t, delta),
        edge_floor: delta * pair_count(n) as f64 - copies.len() as f64,
    };
    Ok((g, stats))
}

/// Deletion method: sample `G(n, delta)`, delete the least surviving edge of
/// each `K_{t,t}` copy, accept when the result is verified `K_{t,t}`-free and
/// keeps at least `delta C(n,2) - X` edges. Retry `i` uses seed `seed + i`.
pub fn random_ktt_free(n: usize, t: usize, delta: f64, seed: u64, retries: u64) -> Result<BlockerReport> {
    if t == 0 || 2 * t > n {
        return Err(Error::usage(format!("need 1 <= t <= n/2, got n={n}, t={t}")));
    }
    if n > 64 {
        return Err(Error::usage("random K_{t,t}-free hosts support n <= 64"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::usage(format!("delta must lie in (0,1), got {delta}")));
    }
    let accepted = (0..retries)
        .into_par_iter()
        .map(|r| -> Result<Option<(LabeledGraph, RandomStats)>> {
            let (g, stats) = ktt_attempt(n, t, delta, seed, r)?;
            let ok = !contains_kst(&g, t, t)? && g.edge_count() as f64 >= stats.edge_floor;
            Ok(ok.then_some((g, stats)))
        })
        .find_first(|o| !matches!(o, Ok(None)));
    match accepted {
        Some(Ok(Some((g, stats)))) => {
            let mut report = dual_bound(&g, None)?;
            report.predicate = Some(Predicate::ContainsKst { s: t, t });
            report.verified = true;
            report.random = Some(stats);
            Ok(report)
        }
        Some(Err(e)) => Err(e),
        _ => Err(Error::NotFound(format!(
            "no accepted K_{{{t},{t}}}-free graph in {retries} retries (E[X] = {:.3})",
            expected_ktt_copies(n, t, delta)
        ))),
    }
}

/// Bipartite pattern on `A ∪ B`; edges are `(a, b)` index pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartitePattern {
    pub a: usize,
    pub b: usize,
    pub edges: Vec<(usize, usize)>,
}

impl BipartitePattern {
    pub fn new(a: usize, b: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if a + b == 0 {
            return Err(Error::usage("pattern needs at least one vertex"));
        }
        if edges.iter().any(|&(x, y)| x >= a || y >= b) {
            return Err(Error::usage("pattern edge out of range"));
        }
        let p = BipartitePattern { a, b, edges };
        if !p.is_connected() {
            return Err(Error::usage("pattern must be connected"));
        }
        Ok(p)
    }

    /// Path on `order` vertices alternating between `B` (even positions) and `A`.
    pub fn path(order: usize) -> Result<Self> {
        let b = order.div_ceil(2);
        let a = order / 2;
        let edges = (0..a).flat_map(|i| [(i, i), (i, i + 1)]).filter(|&(_, y)| y < b).collect();
        Self::new(a, b, edges)
    }

    pub fn order(&self) -> usize {
        self.a + self.b
    }

    pub fn max_left_degree(&self) -> usize {
        (0..self.a).map(|x| self.edges.iter().filter(|e| e.0 == x).count()).max().unwrap_or(0)
    }

    fn is_connected(&self) -> bool {
        let n = self.order();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut comps = n;
        for &(x, y) in &self.edges {
            let (r1, r2) = (find(&mut parent, x), find(&mut parent, self.a + y));
            if r1 != r2 {
                parent[r1] = r2;
                comps -= 1;
            }
        }
        comps == 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrcParams {
    pub alpha: f64,
    pub t: usize,
    pub r: usize,
    pub m: usize,
    pub u: usize,
    pub epsilon: f64,
}

impl DrcParams {
    /// `alpha^t n - C(n,r) (m/n)^t`, the guaranteed expected size of the pruned set.
    pub fn expected_surplus(&self, n: usize) -> f64 {
        self.alpha.powi(self.t as i32) * n as f64
            - binomial(n as u64, self.r as u64) as f64 * (self.m as f64 / n as f64).powi(self.t as i32)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrcEmbedding {
    /// Images of `A` vertices, then of `B` vertices.
    pub phi: Vec<usize>,
    pub retry: u64,
    pub pruned_set_size: usize,
}

struct Rows {
    stride: usize,
    bits: Vec<u64>,
}

impl Rows {
    fn new(g: &LabeledGraph) -> Self {
        let n = g.n();
        let stride = n.div_ceil(64);
        let mut bits = vec![0u64; n * stride];
        for (u, v) in g.edges() {
            bits[u * stride + v / 64] |= 1 << (v % 64);
            bits[v * stride + u / 64] |= 1 << (u % 64);
        }
        Rows { stride, bits }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.stride..(v + 1) * self.stride]
    }

    fn common(&self, vs: &[usize]) -> Vec<u64> {
        let mut acc = vec![u64::MAX; self.stride];
        for &v in vs {
            for (a, r) in acc.iter_mut().zip(self.row(v)) {
                *a &= r;
            }
        }
        acc
    }
}

fn drc_attempt(rows: &Rows, n: usize, pattern: &BipartitePattern, params: &DrcParams, seed: u64) -> Option<(Vec<usize>, usize)> {
    let mut rng = substream(seed, 0);
    let draws: Vec<usize> = (0..params.t).map(|_| rng.gen_range(0..n)).collect();
    let common = rows.common(&draws);
    let mut u: Vec<usize> = (0..n).filter(|&v| common[v / 64] >> (v % 64) & 1 == 1).collect();

    // One pass over r-subsets in lexicographic order, dropping the largest
    // vertex of each subset with fewer than m common neighbours.
    let mut alive = vec![true; u.len()];
    fn prune(rows: &Rows, u: &[usize], alive: &mut [bool], start: usize, chosen: &mut Vec<usize>, r: usize, m: usize) {
        if chosen.len() == r {
            let verts: Vec<usize> = chosen.iter().map(|&i| u[i]).collect();
            let c: usize = rows.common(&verts).iter().map(|w| w.count_ones() as usize).sum();
            if c < m {
                alive[*chosen.last().expect("r >= 1")] = false;
            }
            return;
        }
        for i in start..u.len() {
            if !alive[i] {
                continue;
            }
            chosen.push(i);
            prune(rows, u, alive, i + 1, chosen, r, m);
            chosen.pop();
            if chosen.iter().any(|&j| !alive[j]) {
                return;
            }
        }
    }
    prune(rows, &u, &mut alive, 0, &mut Vec::new(), params.r, params.m);
    u = u.into_iter().zip(&alive).filter(|(_, &a)| a).map(|(v, _)| v).collect();
    if u.len() < pattern.b {
        return None;
    }
    let mut phi = vec![usize::MAX; pattern.order()];
    let mut used = vec![false; n];
    for y in 0..pattern.b {
        phi[pattern.a + y] = u[y];
        used[u[y]] = true;
    }
    for x in 0..pattern.a {
        let nbrs: Vec<usize> = pattern.edges.iter().filter(|e| e.0 == x).map(|e| phi[pattern.a + e.1]).collect();
        let cand = rows.common(&nbrs);
        let pick = (0..n).find(|&v| !used[v] && cand[v / 64] >> (v % 64) & 1 == 1)?;
        phi[x] = pick;
        used[pick] = true;
    }
    Some((phi, u.len()))
}

/// Embeds `pattern` into the dense graph `g` by dependent random choice.
/// Retry `i` uses seed `seed + i`; the lowest successful retry wins.
pub fn drc_embed(g: &LabeledGraph, pattern: &BipartitePattern, params: &DrcParams, seed: u64, retries: u64) -> Result<DrcEmbedding> {
    let n = g.n();
    if !(params.alpha > 0.0 && params.alpha < 1.0) {
        return Err(Error::usage(format!("alpha must lie in (0,1), got {}", params.alpha)));
    }
    if params.r == 0 || params.t == 0 {
        return Err(Error::usage("t and r must be positive"));
    }
    if (g.edge_count() as f64) < params.alpha / 2.0 * (n * n) as f64 {
        return Err(Error::usage(format!(
            "host has {} edges, below (alpha/2) n^2 = {:.1}",
            g.edge_count(),
            params.alpha / 2.0 * (n * n) as f64
        )));
    }
    if pattern.max_left_degree() > params.r {
        return Err(Error::usage(format!("pattern left degree {} exceeds r = {}", pattern.max_left_degree(), params.r)));
    }
    if pattern.order() > params.m || pattern.b > params.u {
        return Err(Error::usage("need v(L) <= m and |B| <= u"));
    }
    let surplus = params.expected_surplus(n);
    if surplus < params.u as f64 {
        return Err(Error::usage(format!(
            "alpha^t n - C(n,r)(m/n)^t = {surplus:.2} is below u = {}",
            params.u
        )));
    }
    let rows = Rows::new(g);
    let hit = (0..retries)
        .into_par_iter()
        .map(|r| drc_attempt(&rows, n, pattern, params, seed.wrapping_add(r)).map(|x| (r, x)))
        .find_first(Option::is_some)
        .flatten();
    let Some((retry, (phi, size))) = hit else {
        return Err(Error::NotFound(format!("no embedding in {retries} retries")));
    };
    let mut seen = vec![false; n];
    for &v in &phi {
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::Internal("embedding is not injective".into()));
        }
    }
    for &(x, y) in &pattern.edges {
        if !g.has_edge(phi[x], phi[pattern.a + y]) {
            return Err(Error::Internal(format!("pattern edge ({x}, {y}) maps to a non-edge")));
        }
    }
    Ok(DrcEmbedding { phi, retry, pruned_set_size: size })
}
