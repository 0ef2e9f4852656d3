//! Perfect 1-factorizations of complete graphs and their restriction to
//! near-perfect matchings on one vertex fewer.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artifact::{check_format_version, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::graphcore::{hamiltonian_path_order, is_hamiltonian_cycle, is_hamiltonian_path, LabeledGraph};

/// A partition of `E(K_order)` into `order - 1` perfect matchings.
///
/// Construction does not check anything; run [`verify_perfect`] before relying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneFactorization {
    order: usize,
    factors: Vec<LabeledGraph>,
}

#[derive(Serialize, Deserialize)]
struct FactorizationFile {
    format_version: u32,
    order: usize,
    factors: Vec<LabeledGraph>,
}

impl OneFactorization {
    pub fn new(order: usize, factors: Vec<LabeledGraph>) -> Self {
        OneFactorization { order, factors }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn factors(&self) -> &[LabeledGraph] {
        &self.factors
    }

    pub fn to_json(&self) -> Result<String> {
        let file = FactorizationFile {
            format_version: FORMAT_VERSION,
            order: self.order,
            factors: self.factors.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: FactorizationFile = serde_json::from_str(s)?;
        check_format_version(file.format_version)?;
        Ok(OneFactorization { order: file.order, factors: file.factors })
    }
}

/// The first invariant a candidate factorization violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorizationDefect {
    BadOrder(usize),
    FactorCount { expected: usize, found: usize },
    WrongVertexCount { factor: usize },
    NotPerfectMatching { factor: usize },
    Overlap { first: usize, second: usize },
    NotCovering,
    NotHamiltonian { first: usize, second: usize },
}

impl fmt::Display for FactorizationDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FactorizationDefect::*;
        match self {
            BadOrder(m) => write!(f, "order {m} is not an even number >= 4"),
            FactorCount { expected, found } => write!(f, "expected {expected} factors, found {found}"),
            WrongVertexCount { factor } => write!(f, "factor {factor} lives on the wrong vertex set"),
            NotPerfectMatching { factor } => write!(f, "factor {factor} is not a perfect matching"),
            Overlap { first, second } => write!(f, "factors {first} and {second} share an edge (partition violated)"),
            NotCovering => write!(f, "factors do not cover every edge (partition violated)"),
            NotHamiltonian { first, second } => {
                write!(f, "union of factors {first} and {second} is not a Hamiltonian cycle")
            }
        }
    }
}

impl std::error::Error for FactorizationDefect {}

/// Checks matching, partition and perfection; reports the lowest-indexed failure.
pub fn verify_perfect(f: &OneFactorization) -> Result<(), FactorizationDefect> {
    use FactorizationDefect::*;
    let m = f.order;
    if m < 4 || m % 2 == 1 {
        return Err(BadOrder(m));
    }
    if f.factors.len() != m - 1 {
        return Err(FactorCount { expected: m - 1, found: f.factors.len() });
    }
    for (i, factor) in f.factors.iter().enumerate() {
        if factor.n() != m {
            return Err(WrongVertexCount { factor: i });
        }
        if factor.degrees().degrees.iter().any(|&d| d != 1) {
            return Err(NotPerfectMatching { factor: i });
        }
    }
    let mut cover = LabeledGraph::empty(m);
    for (i, factor) in f.factors.iter().enumerate() {
        if !cover.is_disjoint_from(factor) {
            let first = (0..i).find(|&j| !f.factors[j].is_disjoint_from(factor)).unwrap();
            return Err(Overlap { first, second: i });
        }
        cover.xor_assign(factor);
    }
    if cover != LabeledGraph::complete(m) {
        return Err(NotCovering);
    }
    let pairs: Vec<(usize, usize)> = (0..m - 1).flat_map(|a| (a + 1..m - 1).map(move |b| (a, b))).collect();
    let bad = pairs.par_iter().find_first(|&&(a, b)| {
        let u = f.factors[a].union(&f.factors[b]).expect("same order");
        !is_hamiltonian_cycle(&u)
    });
    match bad {
        Some(&(first, second)) => Err(NotHamiltonian { first, second }),
        None => Ok(()),
    }
}

/// The patterned (round-robin) factorization of `K_m` on `Z_{m-1}` plus a point
/// at infinity labeled `m - 1`: factor `i` is `{∞, i}` together with
/// `{i + k, i - k}` for `k = 1..(m-2)/2`, arithmetic mod `m - 1`.
///
/// Perfect when `m - 1` is prime; not in general.
pub fn patterned_factorization(m: usize) -> Result<OneFactorization> {
    if m < 4 || m % 2 == 1 || m > 64 {
        return Err(Error::usage(format!("patterned factorization needs even 4 <= m <= 64, got {m}")));
    }
    let p = m - 1;
    let factors = (0..p)
        .map(|i| {
            let mut edges = vec![(p, i)];
            for k in 1..=(p - 1) / 2 {
                edges.push(((i + k) % p, (i + p - k) % p));
            }
            LabeledGraph::from_edges(m, edges).expect("labels in range")
        })
        .collect();
    Ok(OneFactorization::new(m, factors))
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Kotzig's perfect 1-factorization of `K_{p+1}` for an odd prime `p`.
///
/// The result is re-verified before it is returned.
pub fn kotzig_p1f(p: usize) -> Result<OneFactorization> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::usage(format!("kotzig_p1f needs an odd prime, got {p}")));
    }
    if p + 1 > 64 {
        return Err(Error::usage(format!("order p + 1 = {} exceeds 64", p + 1)));
    }
    let f = patterned_factorization(p + 1)?;
    verify_perfect(&f).map_err(|d| Error::Internal(format!("Kotzig construction for p = {p}: {d}")))?;
    Ok(f)
}

struct P1fSearch {
    m: usize,
    factors: Vec<Vec<usize>>,
    current: Vec<usize>,
    used: Vec<u64>,
    nodes: u64,
    budget: u64,
}

const UNMATCHED: usize = usize::MAX;

impl P1fSearch {
    /// Would matching `a` with `b` in the current factor close a cycle shorter
    /// than `m` with some completed factor?
    fn closes_short_cycle(&self, a: usize, b: usize) -> bool {
        for f in &self.factors {
            let mut len = 1;
            let mut x = a;
            loop {
                x = f[x];
                len += 1;
                let y = self.current[x];
                if y == UNMATCHED {
                    break;
                }
                x = y;
                len += 1;
            }
            if x == b && len < self.m {
                return true;
            }
        }
        false
    }

    fn place(&mut self, a: usize, b: usize) {
        self.current[a] = b;
        self.current[b] = a;
        self.used[a] |= 1 << b;
        self.used[b] |= 1 << a;
    }

    fn unplace(&mut self, a: usize, b: usize) {
        self.current[a] = UNMATCHED;
        self.current[b] = UNMATCHED;
        self.used[a] &= !(1 << b);
        self.used[b] &= !(1 << a);
    }

    /// Fills the current factor from its smallest unmatched vertex, then opens the next one.
    fn extend(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let Some(a) = (0..self.m).find(|&v| self.current[v] == UNMATCHED) else {
            return self.next_factor();
        };
        for b in a + 1..self.m {
            if self.current[b] != UNMATCHED || self.used[a] >> b & 1 == 1 || self.closes_short_cycle(a, b) {
                continue;
            }
            self.place(a, b);
            match self.extend() {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.unplace(a, b);
        }
        Some(false)
    }

    fn next_factor(&mut self) -> Option<bool> {
        let done = std::mem::replace(&mut self.current, vec![UNMATCHED; self.m]);
        self.factors.push(done);
        let k = self.factors.len();
        if k == self.m - 1 {
            return Some(true);
        }
        // Factor k is the one containing {0, k + 1}.
        let b = k + 1;
        let result = if self.used[0] >> b & 1 == 0 && !self.closes_short_cycle(0, b) {
            self.place(0, b);
            let r = self.extend();
            if r == Some(false) {
                self.unplace(0, b);
            }
            r
        } else {
            Some(false)
        };
        if result == Some(false) {
            self.current = self.factors.pop().unwrap();
        }
        result
    }
}

/// Backtracking search for a perfect 1-factorization of `K_m`, `4 <= m <= 14`.
///
/// Factor 0 is fixed to `{01, 23, 45, ...}` and factor `k` to the one holding
/// edge `{0, k+1}`. Returns `Ok(None)` when `budget` search nodes are spent.
pub fn search_p1f(m: usize, budget: u64) -> Result<Option<OneFactorization>> {
    if m % 2 == 1 {
        return Err(Error::usage(format!("perfect 1-factorizations need even order, got {m}")));
    }
    if !(4..=14).contains(&m) {
        return Err(Error::usage(format!("search_p1f supports 4 <= m <= 14, got {m}")));
    }
    let mut s = P1fSearch {
        m,
        factors: Vec::new(),
        current: vec![UNMATCHED; m],
        used: vec![0; m],
        nodes: 0,
        budget,
    };
    for a in (0..m).step_by(2) {
        s.place(a, a + 1);
    }
    match s.next_factor() {
        Some(true) => {}
        Some(false) => return Err(Error::Internal(format!("search space for K_{m} exhausted without a P1F"))),
        None => return Ok(None),
    }
    let factors = s
        .factors
        .iter()
        .map(|f| LabeledGraph::from_edges(m, (0..m).filter(|&v| v < f[v]).map(|v| (v, f[v]))))
        .collect::<Result<Vec<_>>>()?;
    let result = OneFactorization::new(m, factors);
    verify_perfect(&result).map_err(|d| Error::Internal(format!("search produced a defective factorization: {d}")))?;
    Ok(Some(result))
}

/// Near-perfect matchings on `n` vertices (n odd) whose pairwise unions are
/// Hamiltonian paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedMatchingSystem {
    n: usize,
    matchings: Vec<LabeledGraph>,
}

impl RestrictedMatchingSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matchings(&self) -> &[LabeledGraph] {
        &self.matchings
    }

    pub fn matching(&self, i: usize) -> &LabeledGraph {
        &self.matchings[i]
    }

    /// The single vertex not covered by matching `i`.
    pub fn missed_vertex(&self, i: usize) -> usize {
        let deg = self.matchings[i].degrees();
        deg.degrees.iter().position(|&d| d == 0).expect("near-perfect matching")
    }

    /// Vertex order of the Hamiltonian path `M_a ∪ M_b`, from its smaller endpoint.
    pub fn union_path(&self, a: usize, b: usize) -> Result<Vec<usize>> {
        let u = self.matchings[a].union(&self.matchings[b])?;
        hamiltonian_path_order(&u)
            .ok_or_else(|| Error::Internal(format!("M_{a} ∪ M_{b} is not a Hamiltonian path")))
    }
}

/// Deletes the highest-labeled vertex (and its edge) from every factor.
///
/// The input must pass [`verify_perfect`]; the output is re-certified.
pub fn restrict_to_n(f: &OneFactorization) -> Result<RestrictedMatchingSystem> {
    verify_perfect(f).map_err(|d| Error::usage(format!("restriction needs a perfect 1-factorization: {d}")))?;
    let n = f.order - 1;
    let matchings: Vec<LabeledGraph> = f
        .factors
        .iter()
        .map(|g| LabeledGraph::from_edges(n, g.edges().filter(|&(_, v)| v < n)))
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let bad = pairs.par_iter().find_first(|&&(a, b)| {
        !is_hamiltonian_path(&matchings[a].union(&matchings[b]).expect("same n"))
    });
    if let Some((a, b)) = bad {
        return Err(Error::Verification(format!("restricted M_{a} ∪ M_{b} is not a Hamiltonian path")));
    }
    Ok(RestrictedMatchingSystem { n, matchings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::is_spanning_connected;

    /// Independent perfection checker: every pair-union is connected, 2-regular,
    /// and traverses exactly m vertices when walked.
    fn independent_perfect(f: &OneFactorization) -> bool {
        let m = f.order();
        let fs = f.factors();
        if fs.len() != m - 1 {
            return false;
        }
        let mut all = LabeledGraph::empty(m);
        for g in fs {
            if g.edge_count() != m / 2 || !g.is_disjoint_from(&all) {
                return false;
            }
            all = all.union(g).unwrap();
        }
        for a in 0..fs.len() {
            for b in a + 1..fs.len() {
                let u = fs[a].union(&fs[b]).unwrap();
                if !u.degrees().degrees.iter().all(|&d| d == 2) || !is_spanning_connected(&u) {
                    return false;
                }
                let adj = u.adjacency_lists();
                let (mut prev, mut cur, mut len) = (usize::MAX, 0, 0);
                loop {
                    let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
                    prev = cur;
                    cur = next;
                    len += 1;
                    if cur == 0 {
                        break;
                    }
                }
                if len != m {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn kotzig_p3_matches_hand_construction() {
        let f = kotzig_p1f(3).unwrap();
        // ∞ = 3: F0 = {∞0, 12}, F1 = {∞1, 20}, F2 = {∞2, 01}
        let expect = [
            LabeledGraph::from_edges(4, [(3, 0), (1, 2)]).unwrap(),
            LabeledGraph::from_edges(4, [(3, 1), (2, 0)]).unwrap(),
            LabeledGraph::from_edges(4, [(3, 2), (0, 1)]).unwrap(),
        ];
        assert_eq!(f.factors(), &expect);
        assert!(verify_perfect(&f).is_ok());
    }

    #[test]
    fn kotzig_small_primes_and_errors() {
        assert_eq!(kotzig_p1f(5).unwrap().factors().len(), 5);
        assert!(verify_perfect(&kotzig_p1f(7).unwrap()).is_ok());
        assert!(matches!(kotzig_p1f(4), Err(Error::Usage(_))));
        assert!(matches!(kotzig_p1f(9), Err(Error::Usage(_))));
        assert!(matches!(kotzig_p1f(2), Err(Error::Usage(_))));
        assert!(matches!(kotzig_p1f(67), Err(Error::Usage(_))));
    }

    #[test]
    fn kotzig_all_primes_to_61() {
        for p in (3..=61).filter(|&p| is_prime(p)) {
            assert!(verify_perfect(&kotzig_p1f(p).unwrap()).is_ok(), "p = {p}");
        }
    }

    #[test]
    fn duplicated_factor_is_a_partition_failure() {
        let f = kotzig_p1f(3).unwrap();
        let mut factors = f.factors().to_vec();
        factors[2] = factors[0].clone();
        let bad = OneFactorization::new(4, factors);
        assert_eq!(verify_perfect(&bad), Err(FactorizationDefect::Overlap { first: 0, second: 2 }));
    }

    #[test]
    fn round_robin_k10_is_not_perfect() {
        // Z_9 is not a field; some pair-union splits into short cycles.
        let f = patterned_factorization(10).unwrap();
        assert!(matches!(verify_perfect(&f), Err(FactorizationDefect::NotHamiltonian { .. })));
        assert!(!independent_perfect(&f));
        // On K_8 the same construction is Kotzig's (7 is prime) and is perfect.
        assert!(verify_perfect(&patterned_factorization(8).unwrap()).is_ok());
    }

    #[test]
    fn verifier_agrees_with_independent_checker() {
        for m in [4, 6, 8, 10, 12, 14, 16] {
            let f = patterned_factorization(m).unwrap();
            assert_eq!(verify_perfect(&f).is_ok(), independent_perfect(&f), "m = {m}");
        }
        let f = kotzig_p1f(5).unwrap();
        let mut factors = f.factors().to_vec();
        factors.swap(0, 1);
        factors[0] = LabeledGraph::empty(6);
        assert!(!verify_perfect(&OneFactorization::new(6, factors.clone())).is_ok());
        assert!(!independent_perfect(&OneFactorization::new(6, factors)));
    }

    #[test]
    fn search_small_orders() {
        let f4 = search_p1f(4, 1 << 20).unwrap().unwrap();
        assert!(independent_perfect(&f4));
        let f6 = search_p1f(6, 1 << 20).unwrap().unwrap();
        assert!(independent_perfect(&f6));
        let f8 = search_p1f(8, 1 << 24).unwrap().unwrap();
        assert!(verify_perfect(&f8).is_ok());
        assert!(matches!(search_p1f(5, 100), Err(Error::Usage(_))));
        assert!(matches!(search_p1f(16, 100), Err(Error::Usage(_))));
        assert!(search_p1f(10, 3).unwrap().is_none());
    }

    #[test]
    fn k4_has_a_unique_one_factorization() {
        // Only three perfect matchings of K_4 exist, so every 1-factorization uses all of them.
        let f = search_p1f(4, 1 << 10).unwrap().unwrap();
        let mut got: Vec<_> = f.factors().to_vec();
        got.sort();
        let mut want = kotzig_p1f(3).unwrap().factors().to_vec();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn restriction_examples() {
        let r = restrict_to_n(&kotzig_p1f(3).unwrap()).unwrap();
        assert_eq!(r.n(), 3);
        assert!(r.matchings().iter().all(|m| m.edge_count() == 1));
        let r5 = restrict_to_n(&kotzig_p1f(5).unwrap()).unwrap();
        for a in 0..5 {
            assert_eq!(r5.missed_vertex(a), a);
            for b in a + 1..5 {
                assert!(is_hamiltonian_path(&r5.matching(a).union(r5.matching(b)).unwrap()));
            }
        }
        let bad = patterned_factorization(10).unwrap();
        assert!(matches!(restrict_to_n(&bad), Err(Error::Usage(_))));
    }

    #[test]
    fn restricted_matchings_are_disjoint_and_sized() {
        let r = restrict_to_n(&kotzig_p1f(13).unwrap()).unwrap();
        for (i, m) in r.matchings().iter().enumerate() {
            assert_eq!(m.edge_count(), 6);
            assert_eq!(r.missed_vertex(i), i);
            for other in &r.matchings()[i + 1..] {
                assert!(m.is_disjoint_from(other));
            }
        }
        let path = r.union_path(2, 7).unwrap();
        assert_eq!(path.len(), 13);
        assert_eq!(path[0], 2);
        assert_eq!(*path.last().unwrap(), 7);
    }

    #[test]
    fn json_round_trip_and_version_gate() {
        let f = kotzig_p1f(5).unwrap();
        let s = f.to_json().unwrap();
        assert_eq!(OneFactorization::from_json(&s).unwrap(), f);
        let bumped = s.replace("\"format_version\": 1", "\"format_version\": 9");
        assert!(matches!(OneFactorization::from_json(&bumped), Err(Error::Format(_))));
    }
}
