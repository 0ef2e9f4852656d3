//! Families of graphs whose pairwise differences contain spanning trees with a
//! prescribed number of leaves.
//!
//! A member is indexed by a set `S` of matchings from a restricted matching
//! system; it is the union of those matchings plus, in the partitioned variant,
//! a layer `H` of edges taken from a reserved matching and chosen by the part
//! that `S` falls in.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artifact::{check_format_version, FORMAT_VERSION};
use crate::bincode::{even_d4_linear, gv_greedy, hamming_code, syndrome, BinaryCode, ScanOrder};
use crate::error::{Error, Result};
use crate::factorize::{restrict_to_n, OneFactorization, RestrictedMatchingSystem};
use crate::gf2;
use crate::graphcore::LabeledGraph;
use crate::rng::substream;

/// Largest family that [`roster`] will materialize.
pub const ROSTER_LIMIT: u128 = 1 << 16;
/// Largest `n` for which greedy coloring is offered.
pub const GREEDY_COLORING_MAX_N: usize = 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coloring {
    Greedy,
    Syndrome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    GvPartition,
    Hamming,
}

#[derive(Clone, Debug)]
enum Parts {
    /// No H layer: every member is a plain matching union.
    Single,
    /// Part id of each even mask, indexed by the mask itself.
    Greedy(Vec<u16>),
    /// Sorted reachable syndromes of the coloring code.
    Syndrome { code: BinaryCode, ids: Vec<u64> },
}

#[derive(Clone, Debug)]
pub struct TreeCodeParams {
    variant: Variant,
    n: usize,
    leaves: usize,
    matchings: RestrictedMatchingSystem,
    reserved: Option<usize>,
    coloring: Option<Coloring>,
    parts: Parts,
    parts_needed: usize,
    h_code: Option<BinaryCode>,
    h_words: Vec<u64>,
    /// Even-weight Hamming subcode indexing the members of the hamming variant.
    index_code: Option<BinaryCode>,
}

/// Where the extra edges of a certificate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtraSource {
    None,
    ReservedMatching,
    Matching(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCertificate {
    pub first: u64,
    pub second: u64,
    pub tree: LabeledGraph,
    pub path_matchings: (usize, usize),
    pub extra_source: ExtraSource,
    pub extra_edges_used: Vec<(usize, usize)>,
}

fn mask_below(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn bits_of(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            return None;
        }
        let b = x.trailing_zeros() as usize;
        x &= x - 1;
        Some(b)
    })
}

/// Greedy proper coloring of the "distance exactly 2" graph on even masks of
/// `len` bits, visiting masks in ascending order.
fn greedy_distance_two_coloring(len: usize) -> Vec<u16> {
    let mut color = vec![u16::MAX; 1 << len];
    for s in 0u64..1 << len {
        if s.count_ones() % 2 == 1 {
            continue;
        }
        let mut used: u128 = 0;
        for a in 0..len {
            for b in a + 1..len {
                let t = (s ^ (1 << a) ^ (1 << b)) as usize;
                if t < s as usize {
                    used |= 1u128 << color[t];
                }
            }
        }
        color[s as usize] = (!used).trailing_zeros() as u16;
    }
    color
}

/// Sorted syndromes attained by even-weight vectors of the code length.
fn reachable_even_syndromes(code: &BinaryCode) -> Result<Vec<u64>> {
    let m = code.length();
    let s0 = syndrome(code, 1)?;
    let gens: Vec<u64> = (1..m).map(|j| syndrome(code, 1 << j).map(|s| s ^ s0)).collect::<Result<_>>()?;
    let basis: Vec<u64> = gf2::rref(&gens).into_iter().map(|(r, _)| r).collect();
    let mut ids: Vec<u64> = (0..1u64 << basis.len()).map(|c| gf2::combine(&basis, c)).collect();
    ids.sort_unstable();
    Ok(ids)
}

fn binomial2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Partitioned family of size `2^(n-2)` with `leaves`-leaf spanning trees in
/// every pairwise difference. The H code is a greedy code of length `(n-1)/2`
/// and distance `3*leaves-5`, scanned in seeded-random order when `seed` is given.
pub fn build_treecode(
    n: usize,
    leaves: usize,
    factorization: &OneFactorization,
    coloring: Coloring,
    seed: Option<u64>,
) -> Result<TreeCodeParams> {
    check_gv_shape(n, leaves, factorization)?;
    if leaves == 2 {
        return assemble(n, leaves, factorization, coloring, None);
    }
    let needed = parts_needed(n, coloring)?;
    let (m, d) = ((n - 1) / 2, 3 * leaves - 5);
    if d > m {
        return Err(Error::Infeasible {
            needed,
            available: 1,
            detail: format!("no two words of length {m} are {d} apart"),
        });
    }
    let order = seed.map_or(ScanOrder::Lexicographic, ScanOrder::SeededRandom);
    let code = gv_greedy(m, d, order, Some(needed))?.code;
    assemble(n, leaves, factorization, coloring, Some(code))
}

/// As [`build_treecode`], with a caller-supplied H code.
pub fn build_treecode_with_code(
    n: usize,
    leaves: usize,
    factorization: &OneFactorization,
    coloring: Coloring,
    h_code: BinaryCode,
) -> Result<TreeCodeParams> {
    check_gv_shape(n, leaves, factorization)?;
    if leaves == 2 {
        return Err(Error::usage("two-leaf families take no H code"));
    }
    assemble(n, leaves, factorization, coloring, Some(h_code))
}

fn check_gv_shape(n: usize, leaves: usize, f: &OneFactorization) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) || n > 64 {
        return Err(Error::usage(format!("n must be odd with 3 <= n <= 64, got {n}")));
    }
    if leaves < 2 {
        return Err(Error::usage(format!("leaf target must be at least 2, got {leaves}")));
    }
    if f.order() != n + 1 {
        return Err(Error::usage(format!("need a factorization of K_{}, got K_{}", n + 1, f.order())));
    }
    Ok(())
}

fn parts_needed(n: usize, coloring: Coloring) -> Result<usize> {
    match coloring {
        Coloring::Greedy if n > GREEDY_COLORING_MAX_N => {
            Err(Error::usage(format!("greedy coloring is limited to n <= {GREEDY_COLORING_MAX_N}")))
        }
        Coloring::Greedy => Ok(binomial2(n - 1) + 1),
        Coloring::Syndrome => Ok(reachable_even_syndromes(&even_d4_linear(n - 1)?)?.len()),
    }
}

fn assemble(
    n: usize,
    leaves: usize,
    factorization: &OneFactorization,
    coloring: Coloring,
    h_code: Option<BinaryCode>,
) -> Result<TreeCodeParams> {
    let matchings = restrict_to_n(factorization)?;
    let Some(h_code) = h_code else {
        return Ok(TreeCodeParams {
            variant: Variant::GvPartition,
            n,
            leaves,
            matchings,
            reserved: None,
            coloring: None,
            parts: Parts::Single,
            parts_needed: 1,
            h_code: None,
            h_words: Vec::new(),
            index_code: None,
        });
    };
    let (m, d) = ((n - 1) / 2, 3 * leaves - 5);
    if h_code.length() != m {
        return Err(Error::usage(format!("H code must have length {m}, got {}", h_code.length())));
    }
    if h_code.word_count() >= 2 && h_code.distance_claim() < d {
        return Err(Error::usage(format!("H code claims distance {}, need {d}", h_code.distance_claim())));
    }
    let parts = match coloring {
        Coloring::Greedy => {
            if n > GREEDY_COLORING_MAX_N {
                return Err(Error::usage(format!("greedy coloring is limited to n <= {GREEDY_COLORING_MAX_N}")));
            }
            Parts::Greedy(greedy_distance_two_coloring(n - 1))
        }
        Coloring::Syndrome => {
            let code = even_d4_linear(n - 1)?;
            let ids = reachable_even_syndromes(&code)?;
            Parts::Syndrome { code, ids }
        }
    };
    let needed = parts_needed(n, coloring)?;
    if h_code.word_count() < needed as u128 {
        return Err(Error::Infeasible {
            needed,
            available: h_code.word_count() as usize,
            detail: format!("H code of length {m} and distance {d} has too few words for the parts"),
        });
    }
    let h_words = (0..needed as u64).map(|i| h_code.word(i)).collect();
    Ok(TreeCodeParams {
        variant: Variant::GvPartition,
        n,
        leaves,
        matchings,
        reserved: Some(n - 1),
        coloring: Some(coloring),
        parts,
        parts_needed: needed,
        h_code: Some(h_code),
        h_words,
        index_code: None,
    })
}

/// Largest leaf target of the Hamming variant on `n` vertices.
pub fn hamming_leaf_limit(n: usize) -> usize {
    (n + 9) / 6
}

/// Family of size `2^(n-k-1)` on `n = 2^k - 1` vertices indexed by the
/// even-weight words of the Hamming code; all `n` matchings index members.
pub fn build_hamming_treecode(k: usize, leaves: usize, factorization: &OneFactorization) -> Result<TreeCodeParams> {
    let hamming = hamming_code(k)?;
    let n = hamming.length();
    let limit = hamming_leaf_limit(n);
    if leaves < 3 || leaves > limit {
        return Err(Error::usage(format!(
            "leaf target {leaves} is outside [3, (n+9)/6] = [3, {limit}] for n = {n}"
        )));
    }
    if factorization.order() != n + 1 {
        return Err(Error::usage(format!("need a factorization of K_{}, got K_{}", n + 1, factorization.order())));
    }
    let mut checks = hamming.linear().expect("linear").parity_checks.clone();
    checks.push(mask_below(n));
    let basis = gf2::nullspace(&checks, n);
    let index_code = BinaryCode::from_basis(n, &basis, 4)?;
    Ok(TreeCodeParams {
        variant: Variant::Hamming,
        n,
        leaves,
        matchings: restrict_to_n(factorization)?,
        reserved: None,
        coloring: None,
        parts: Parts::Single,
        parts_needed: 1,
        h_code: None,
        h_words: Vec::new(),
        index_code: Some(index_code),
    })
}

impl TreeCodeParams {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    pub fn matchings(&self) -> &RestrictedMatchingSystem {
        &self.matchings
    }

    pub fn reserved(&self) -> Option<usize> {
        self.reserved
    }

    pub fn coloring(&self) -> Option<Coloring> {
        self.coloring
    }

    pub fn parts_needed(&self) -> usize {
        self.parts_needed
    }

    pub fn h_code(&self) -> Option<&BinaryCode> {
        self.h_code.as_ref()
    }

    pub fn index_code(&self) -> Option<&BinaryCode> {
        self.index_code.as_ref()
    }

    /// Base-2 logarithm of the family size.
    pub fn family_log2(&self) -> usize {
        match &self.index_code {
            Some(c) => c.dimension().expect("linear"),
            None => self.n - 2,
        }
    }

    pub fn family_size(&self) -> u128 {
        1u128 << self.family_log2()
    }

    /// Member id of rank `r` in `0..family_size()`.
    pub fn member_id(&self, rank: u128) -> Result<u64> {
        if rank >= self.family_size() {
            return Err(Error::usage(format!("rank {rank} is outside the family of size {}", self.family_size())));
        }
        let r = rank as u64;
        Ok(match &self.index_code {
            Some(c) => c.word(r),
            None => r << 1 | gf2::parity(r),
        })
    }

    fn check_id(&self, id: u64) -> Result<()> {
        match &self.index_code {
            Some(c) if !c.contains(id) => {
                Err(Error::usage(format!("{id:#x} is not an even-weight Hamming codeword")))
            }
            Some(_) => Ok(()),
            None if id & !mask_below(self.n - 1) != 0 => {
                Err(Error::usage(format!("member id {id:#x} uses a matching outside 0..{}", self.n - 1)))
            }
            None if id.count_ones() % 2 == 1 => Err(Error::usage(format!("member id {id:#x} has odd weight"))),
            None => Ok(()),
        }
    }

    /// Part id of member `id` (0 when there is no H layer).
    pub fn part_of(&self, id: u64) -> Result<u64> {
        self.check_id(id)?;
        Ok(match &self.parts {
            Parts::Single => 0,
            Parts::Greedy(colors) => colors[id as usize] as u64,
            Parts::Syndrome { code, .. } => syndrome(code, id)?,
        })
    }

    fn part_rank(&self, id: u64) -> Result<usize> {
        let part = self.part_of(id)?;
        Ok(match &self.parts {
            Parts::Syndrome { ids, .. } => ids.binary_search(&part).map_err(|_| Error::Internal(format!("unlisted syndrome {part}")))?,
            _ => part as usize,
        })
    }

    /// The H-code word attached to member `id`, if any.
    pub fn h_word(&self, id: u64) -> Result<Option<u64>> {
        if self.h_code.is_none() {
            self.check_id(id)?;
            return Ok(None);
        }
        Ok(Some(self.h_words[self.part_rank(id)?]))
    }

    fn h_layer(&self, word: u64) -> LabeledGraph {
        let reserved = self.reserved.expect("H layer needs a reserved matching");
        let edges = self.matchings.matching(reserved).edges().enumerate().filter(|&(j, _)| word >> j & 1 == 1).map(|(_, e)| e);
        LabeledGraph::from_edges(self.n, edges).expect("matching edges are valid")
    }

    pub fn member(&self, id: u64) -> Result<LabeledGraph> {
        let h = self.h_word(id)?;
        let mut g = match h {
            Some(w) => self.h_layer(w),
            None => LabeledGraph::empty(self.n),
        };
        for i in bits_of(id) {
            g.xor_assign(self.matchings.matching(i));
        }
        Ok(g)
    }

    pub fn roster(&self) -> Result<Vec<LabeledGraph>> {
        if self.family_size() > ROSTER_LIMIT {
            return Err(Error::resource(format!("family of size 2^{} is too large to list", self.family_log2())));
        }
        (0..self.family_size()).map(|r| self.member(self.member_id(r)?)).collect()
    }

    /// Certificate that `member(a) ⊕ member(b)` contains a spanning tree with
    /// exactly `leaves` leaves, re-checked by [`check_certificate`].
    pub fn verify_pair(&self, a: u64, b: u64) -> Result<PairCertificate> {
        if a == b {
            return Err(Error::usage("a pair needs two distinct members"));
        }
        let diff = self.member(a)?.symdiff(&self.member(b)?)?;
        let idx = a ^ b;
        let mut used = bits_of(idx);
        let (p, q) = match (used.next(), used.next()) {
            (Some(p), Some(q)) => (p, q),
            _ => return Err(Error::Internal(format!("members {a:#x} and {b:#x} differ in fewer than two matchings"))),
        };
        let path = self.matchings.union_path(p, q)?;
        let (source, extra) = if self.leaves == 2 {
            (ExtraSource::None, Vec::new())
        } else {
            match (self.h_word(a)?, self.h_word(b)?) {
                (Some(x), Some(y)) if x != y => {
                    (ExtraSource::ReservedMatching, self.h_layer(x ^ y).edges().collect())
                }
                _ => {
                    let c = used.next().ok_or_else(|| {
                        Error::Internal(format!("same-part members {a:#x} and {b:#x} differ in only two matchings"))
                    })?;
                    (ExtraSource::Matching(c), self.matchings.matching(c).edges().collect())
                }
            }
        };
        let (tree, trace) = augment_to_leaves_traced(&path, &extra, self.leaves).map_err(|e| {
            Error::Verification(format!("pair ({a:#x}, {b:#x}) path M_{p}+M_{q} source {source:?}: {e}"))
        })?;
        let cert = PairCertificate {
            first: a,
            second: b,
            tree,
            path_matchings: (p, q),
            extra_source: source,
            extra_edges_used: trace.rounds.iter().map(|r| r.added).collect(),
        };
        check_certificate(&diff, &cert.tree, self.leaves)
            .map_err(|e| Error::Verification(format!("pair ({a:#x}, {b:#x}): {e}; certificate {cert:?}")))?;
        Ok(cert)
    }

    /// `samples` uniformly random distinct member pairs.
    pub fn sample_pairs(&self, samples: usize, seed: u64) -> Vec<(u64, u64)> {
        use rand::Rng;
        let size = self.family_size();
        let mut rng = substream(seed, 1);
        (0..samples)
            .map(|_| {
                let x = rng.gen_range(0..size);
                let mut y = rng.gen_range(0..size - 1);
                if y >= x {
                    y += 1;
                }
                (self.member_id(x).expect("in range"), self.member_id(y).expect("in range"))
            })
            .collect()
    }

    /// Certificates for `pairs`, computed in parallel, in input order.
    pub fn certify_pairs(&self, pairs: &[(u64, u64)]) -> Vec<Result<PairCertificate>> {
        pairs.par_iter().map(|&(a, b)| self.verify_pair(a, b)).collect()
    }

    /// Verifies `pairs` in parallel; failures keep the input order.
    pub fn verify_pairs(&self, pairs: &[(u64, u64)]) -> PairReport {
        Self::summarize(pairs, self.certify_pairs(pairs))
    }

    pub fn summarize(pairs: &[(u64, u64)], outcomes: Vec<Result<PairCertificate>>) -> PairReport {
        let mut report = PairReport { checked: pairs.len(), passed: 0, failures: Vec::new() };
        for (&(a, b), o) in pairs.iter().zip(outcomes) {
            match o {
                Ok(_) => report.passed += 1,
                Err(e) => report.failures.push(PairFailure { first: a, second: b, reason: e.to_string() }),
            }
        }
        report
    }

    /// Generator description sufficient to rebuild these parameters.
    pub fn generator(&self, prime_p: Option<usize>, h_code_file: Option<String>, seed: Option<u64>) -> GeneratorFile {
        GeneratorFile {
            format_version: FORMAT_VERSION,
            variant: self.variant,
            n: self.n,
            leaves: self.leaves,
            prime_p,
            coloring: self.coloring,
            h_code_file,
            seed,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairFailure {
    pub first: u64,
    pub second: u64,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairReport {
    pub checked: usize,
    pub passed: usize,
    pub failures: Vec<PairFailure>,
}

impl PairReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub format_version: u32,
    pub variant: Variant,
    pub n: usize,
    #[serde(rename = "ℓ", alias = "leaves")]
    pub leaves: usize,
    pub prime_p: Option<usize>,
    pub coloring: Option<Coloring>,
    pub h_code_file: Option<String>,
    pub seed: Option<u64>,
}

impl GeneratorFile {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: GeneratorFile = serde_json::from_str(s)?;
        check_format_version(g.format_version)?;
        Ok(g)
    }

    /// Rebuilds the parameters; `h_code` is the loaded `h_code_file`, if any.
    pub fn build(&self, factorization: &OneFactorization, h_code: Option<BinaryCode>) -> Result<TreeCodeParams> {
        match self.variant {
            Variant::Hamming => {
                let k = (self.n + 1).trailing_zeros() as usize;
                if (self.n + 1).count_ones() != 1 {
                    return Err(Error::Format(format!("hamming variant needs n = 2^k - 1, got {}", self.n)));
                }
                build_hamming_treecode(k, self.leaves, factorization)
            }
            Variant::GvPartition => {
                let coloring = self.coloring.unwrap_or(Coloring::Syndrome);
                match h_code {
                    Some(code) => build_treecode_with_code(self.n, self.leaves, factorization, coloring, code),
                    None => build_treecode(self.n, self.leaves, factorization, coloring, self.seed),
                }
            }
        }
    }
}

/// Per-round record of [`augment_to_leaves_traced`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentRound {
    pub added: (usize, usize),
    pub removed: (usize, usize),
    pub extra_consumed: usize,
    pub leaves_after: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AugmentTrace {
    pub dropped_at_end: Option<(usize, usize)>,
    pub rounds: Vec<AugmentRound>,
}

/// Turns the Hamiltonian path `path` into a spanning tree with exactly
/// `leaves` leaves using the vertex-disjoint chords `extra`.
pub fn augment_to_leaves(path: &[usize], extra: &[(usize, usize)], leaves: usize) -> Result<LabeledGraph> {
    augment_to_leaves_traced(path, extra, leaves).map(|(t, _)| t)
}

/// [`augment_to_leaves`] with per-round invariant checks and a trace.
///
/// Each round must raise the leaf count by one and consume at most three chords.
pub fn augment_to_leaves_traced(
    path: &[usize],
    extra: &[(usize, usize)],
    leaves: usize,
) -> Result<(LabeledGraph, AugmentTrace)> {
    let n = path.len();
    if leaves < 2 {
        return Err(Error::usage(format!("leaf target must be at least 2, got {leaves}")));
    }
    if n < 2 {
        return Err(Error::usage("a path needs at least two vertices"));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in path.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::usage("path must visit each vertex 0..n exactly once"));
        }
        pos[v] = i;
    }
    let mut touched = vec![false; n];
    let mut chords: Vec<(usize, usize)> = Vec::with_capacity(extra.len());
    for &(u, v) in extra {
        if u >= n || v >= n || u == v {
            return Err(Error::usage(format!("extra edge ({u}, {v}) is not an edge on {n} vertices")));
        }
        if touched[u] || touched[v] {
            return Err(Error::usage("extra edges must be pairwise vertex-disjoint"));
        }
        touched[u] = true;
        touched[v] = true;
        let (i, j) = (pos[u].min(pos[v]), pos[u].max(pos[v]));
        if j == i + 1 {
            return Err(Error::usage(format!("extra edge ({u}, {v}) is a path edge")));
        }
        chords.push((i, j));
    }

    let mut tree = LabeledGraph::empty(n);
    let mut degree = vec![2usize; n];
    degree[path[0]] = 1;
    degree[path[n - 1]] = 1;
    for w in path.windows(2) {
        tree.add_edge(w[0], w[1])?;
    }
    let mut leaf_count = 2;
    let mut trace = AugmentTrace::default();

    if let Some(k) = chords.iter().position(|&(_, j)| j == n - 1) {
        let (i, j) = chords.remove(k);
        trace.dropped_at_end = Some((path[i], path[j]));
    }
    chords.sort_unstable();
    let mut alive = vec![true; chords.len()];
    let mut cursor = 0;
    for _ in 0..leaves - 2 {
        while cursor < chords.len() && !alive[cursor] {
            cursor += 1;
        }
        if cursor == chords.len() {
            return Err(Error::Internal(format!(
                "extra edges ran out after {} of {} rounds",
                trace.rounds.len(),
                leaves - 2
            )));
        }
        let (i, j) = chords[cursor];
        alive[cursor] = false;
        let mut consumed = 1;
        for (k, &(a, b)) in chords.iter().enumerate() {
            if alive[k] && [a, b].iter().any(|&x| x == i + 1 || x == j - 1) {
                alive[k] = false;
                consumed += 1;
            }
        }
        let (vi, vi1, vj) = (path[i], path[i + 1], path[j]);
        tree.add_edge(vi, vj)?;
        tree.remove_edge(vi, vi1)?;
        for (v, delta) in [(vj, 1isize), (vi1, -1)] {
            let before = degree[v];
            degree[v] = before.checked_add_signed(delta).expect("degree stays positive");
            if before == 1 {
                leaf_count -= 1;
            }
            if degree[v] == 1 {
                leaf_count += 1;
            }
        }
        let expected = trace.rounds.last().map_or(2, |r| r.leaves_after) + 1;
        if leaf_count != expected || consumed > 3 {
            return Err(Error::Internal(format!(
                "round {} with chord ({vi}, {vj}) gave {leaf_count} leaves (expected {expected}) and consumed {consumed} chords",
                trace.rounds.len() + 1
            )));
        }
        trace.rounds.push(AugmentRound { added: (vi, vj), removed: (vi, vi1), extra_consumed: consumed, leaves_after: leaf_count });
    }
    Ok((tree, trace))
}

/// Independent check that `tree` is a spanning tree of `host` with exactly
/// `leaves` leaves, by union-find over its edges.
pub fn check_certificate(host: &LabeledGraph, tree: &LabeledGraph, leaves: usize) -> std::result::Result<(), String> {
    let n = host.n();
    if tree.n() != n {
        return Err(format!("tree has {} vertices, host has {n}", tree.n()));
    }
    if tree.words().iter().zip(host.words()).any(|(t, h)| t & !h != 0) {
        return Err("tree uses an edge outside the symmetric difference".into());
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut degree = vec![0usize; n];
    let mut edges = 0;
    for (u, v) in tree.edges() {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            return Err(format!("edge ({u}, {v}) closes a cycle"));
        }
        parent[ru] = rv;
        degree[u] += 1;
        degree[v] += 1;
        edges += 1;
    }
    if edges + 1 != n {
        return Err(format!("{edges} edges cannot span {n} vertices as a tree"));
    }
    let found = degree.iter().filter(|&&d| d == 1).count();
    if found != leaves {
        return Err(format!("tree has {found} leaves, expected {leaves}"));
    }
    Ok(())
}
