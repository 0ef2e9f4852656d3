//! Connected-difference families on torus grids.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artifact::{check_format_version, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::graphcore::{is_spanning_connected, LabeledGraph};
use crate::rng::substream;

/// No connected-difference family on a 4-regular host exceeds `2^4` members.
pub const GRID_FAMILY_LIMIT: usize = 16;
const STEPS_PER_RESTART: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub m: usize,
    pub n: usize,
}

impl GridSpec {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 3 || n < 3 {
            return Err(Error::usage(format!("torus grid needs m, n >= 3, got {m}x{n}")));
        }
        Ok(GridSpec { m, n })
    }

    pub fn vertex(&self, r: usize, c: usize) -> usize {
        r * self.n + c
    }

    pub fn order(&self) -> usize {
        self.m * self.n
    }

    /// The four torus neighbours of `v`.
    pub fn neighbors(&self, v: usize) -> [usize; 4] {
        let (r, c) = (v / self.n, v % self.n);
        [
            self.vertex(r, (c + 1) % self.n),
            self.vertex(r, (c + self.n - 1) % self.n),
            self.vertex((r + 1) % self.m, c),
            self.vertex((r + self.m - 1) % self.m, c),
        ]
    }

    pub fn host(&self) -> LabeledGraph {
        let mut g = LabeledGraph::empty(self.order());
        for v in 0..self.order() {
            for w in self.neighbors(v) {
                g.add_edge(v, w).expect("distinct torus neighbours");
            }
        }
        g
    }
}

/// Torus grid `G_{m,n}` with vertex `(r, c)` labeled `r*n + c`.
pub fn grid_graph(m: usize, n: usize) -> Result<LabeledGraph> {
    Ok(GridSpec::new(m, n)?.host())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridFamily {
    pub format_version: u32,
    pub spec: GridSpec,
    pub members: Vec<LabeledGraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear_basis: Option<Vec<LabeledGraph>>,
}

impl GridFamily {
    pub fn new(spec: GridSpec, members: Vec<LabeledGraph>) -> Self {
        GridFamily { format_version: FORMAT_VERSION, spec, members, linear_basis: None }
    }

    /// All `2^dim` XOR combinations of `basis`, combination `i` at position `i`.
    pub fn from_basis(spec: GridSpec, basis: Vec<LabeledGraph>) -> Self {
        let members = (0u64..1 << basis.len())
            .map(|c| {
                let mut g = LabeledGraph::empty(spec.order());
                for (i, b) in basis.iter().enumerate() {
                    if c >> i & 1 == 1 {
                        g.xor_assign(b);
                    }
                }
                g
            })
            .collect();
        GridFamily { format_version: FORMAT_VERSION, spec, members, linear_basis: Some(basis) }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: GridFamily = serde_json::from_str(s)?;
        check_format_version(f.format_version)?;
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundViolation {
    TooManyMembers { count: usize },
    SameTrace { first: usize, second: usize, trace: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub probe: usize,
    /// Bit `i` of a trace is set when the member contains the edge to the probe's `i`-th neighbour.
    pub traces: Vec<u8>,
    pub violation: Option<BoundViolation>,
}

impl BoundCheck {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Compares members' edge traces around `probe`; two equal traces make the
/// probe isolated in their difference, and five bits cannot separate 17 members.
pub fn neighborhood_bound_check(family: &GridFamily, probe: usize) -> Result<BoundCheck> {
    let spec = family.spec;
    if probe >= spec.order() {
        return Err(Error::usage(format!("probe {probe} is not a vertex of the {}x{} grid", spec.m, spec.n)));
    }
    let nbrs = spec.neighbors(probe);
    let traces: Vec<u8> = family
        .members
        .iter()
        .map(|g| nbrs.iter().enumerate().fold(0u8, |t, (i, &w)| t | u8::from(g.has_edge(probe, w)) << i))
        .collect();
    let mut violation = None;
    'outer: for i in 0..traces.len() {
        for j in i + 1..traces.len() {
            if traces[i] == traces[j] {
                violation = Some(BoundViolation::SameTrace { first: i, second: j, trace: traces[i] });
                break 'outer;
            }
        }
    }
    if family.members.len() > GRID_FAMILY_LIMIT {
        violation = Some(BoundViolation::TooManyMembers { count: family.members.len() });
    }
    Ok(BoundCheck { probe, traces, violation })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridVerification {
    pub pairs_checked: usize,
    pub failures: Vec<String>,
}

impl GridVerification {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every member is a spanning subgraph of the host and every pairwise XOR is connected.
pub fn verify_grid_family(family: &GridFamily) -> GridVerification {
    let host = family.spec.host();
    let mut failures = Vec::new();
    for (i, g) in family.members.iter().enumerate() {
        if g.n() != host.n() || !g.is_subgraph_of(&host) {
            failures.push(format!("member {i} is not a subgraph of the host"));
        }
    }
    let pairs: Vec<(usize, usize)> =
        (0..family.members.len()).flat_map(|i| (i + 1..family.members.len()).map(move |j| (i, j))).collect();
    if failures.is_empty() {
        for &(i, j) in &pairs {
            let d = family.members[i].symdiff(&family.members[j]).expect("same n");
            if !is_spanning_connected(&d) {
                failures.push(format!("members {i} and {j} have a disconnected difference"));
            }
        }
    }
    GridVerification { pairs_checked: pairs.len(), failures }
}

/// Number of nonzero XOR combinations of `basis` that are spanning connected.
fn connected_combinations(basis: &[LabeledGraph]) -> usize {
    let n = basis[0].n();
    (1u64..1 << basis.len())
        .filter(|&c| {
            let mut g = LabeledGraph::empty(n);
            for (i, b) in basis.iter().enumerate() {
                if c >> i & 1 == 1 {
                    g.xor_assign(b);
                }
            }
            is_spanning_connected(&g)
        })
        .count()
}

/// Host minus random edges whose removal keeps it connected.
fn random_spanning_connected(host: &LabeledGraph, rng: &mut crate::rng::Rng) -> LabeledGraph {
    let mut g = host.clone();
    let mut edges: Vec<(usize, usize)> = host.edges().collect();
    rand::seq::SliceRandom::shuffle(edges.as_mut_slice(), rng);
    for (u, v) in edges {
        if rng.gen_bool(0.5) {
            g.remove_edge(u, v).expect("in range");
            if !is_spanning_connected(&g) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    g
}

fn search_restart(spec: GridSpec, dim: usize, seed: u64) -> Option<Vec<LabeledGraph>> {
    let host = spec.host();
    let edges: Vec<(usize, usize)> = host.edges().collect();
    let mut rng = substream(seed, 0);
    let mut basis: Vec<LabeledGraph> = (0..dim).map(|_| random_spanning_connected(&host, &mut rng)).collect();
    let target = (1usize << dim) - 1;
    let mut score = connected_combinations(&basis);
    for _ in 0..STEPS_PER_RESTART {
        // A dependent basis has the empty graph among its combinations, so a full score implies independence.
        if score == target {
            return Some(basis);
        }
        let i = rng.gen_range(0..dim);
        let (u, v) = edges[rng.gen_range(0..edges.len())];
        let toggle = |g: &mut LabeledGraph| {
            if g.has_edge(u, v) {
                g.remove_edge(u, v).expect("in range");
            } else {
                g.add_edge(u, v).expect("in range");
            }
        };
        toggle(&mut basis[i]);
        let s = connected_combinations(&basis);
        if s >= score {
            score = s;
        } else {
            toggle(&mut basis[i]);
        }
    }
    (score == target).then_some(basis)
}

/// Searches for `dim` generators whose nonzero XOR combinations are all
/// spanning connected. Restart `i` uses seed `seed + i`; lowest success wins.
pub fn search_grid_family(spec: GridSpec, dim: usize, seed: u64, restarts: u64) -> Result<GridFamily> {
    if dim > 4 {
        return Err(Error::NotFound(format!(
            "a family of 2^{dim} members cannot exist: every connected-difference family on a torus grid has at most 2^4 = {GRID_FAMILY_LIMIT} members"
        )));
    }
    if dim == 0 {
        return Ok(GridFamily::from_basis(spec, Vec::new()));
    }
    let found = (0..restarts)
        .into_par_iter()
        .map(|r| search_restart(spec, dim, seed.wrapping_add(r)))
        .find_first(Option::is_some)
        .flatten();
    match found {
        Some(basis) => {
            let family = GridFamily::from_basis(spec, basis);
            let check = verify_grid_family(&family);
            if !check.ok() {
                return Err(Error::Internal(format!("search produced an invalid family: {}", check.failures[0])));
            }
            Ok(family)
        }
        None => Err(Error::NotFound(format!("no {dim}-dimensional family found in {restarts} restarts"))),
    }
}
