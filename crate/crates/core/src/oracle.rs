//! Exhaustive ground truth for tiny vertex counts.
//!
//! The compatibility relation between two graphs depends only on their XOR,
//! so an optimal family may be assumed to contain the empty graph. Its other
//! members are then a clique among the graphs that themselves satisfy (or,
//! for the dual, violate) the predicate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artifact::{check_format_version, FORMAT_VERSION};
use crate::clique::{max_clique, BitMatrix};
use crate::error::{Error, Result};
use crate::graphcore::{pair_count, LabeledGraph};
use crate::predicate::Predicate;

/// Largest `n` for the clique computations.
pub const MAX_CLIQUE_N: usize = 5;
/// Largest `n` for bad-graph counting.
pub const MAX_COUNT_N: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyOptimum {
    pub size: usize,
    pub witness: Vec<LabeledGraph>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub format_version: u32,
    pub n: usize,
    pub predicate: Predicate,
    pub m_exact: usize,
    pub witness_family: Vec<LabeledGraph>,
    pub d_exact: Option<usize>,
    pub bad_count: Option<u64>,
    pub greedy_log2_bound: Option<f64>,
}

impl OracleResult {
    /// `M * D <= 2^C(n,2)` when both are known.
    pub fn product_bound_holds(&self) -> Option<bool> {
        self.d_exact.map(|d| (self.m_exact as u128) * (d as u128) <= 1u128 << pair_count(self.n))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: OracleResult = serde_json::from_str(s)?;
        check_format_version(r.format_version)?;
        Ok(r)
    }
}

fn graph_of(n: usize, x: u64) -> LabeledGraph {
    LabeledGraph::from_words(n, vec![x]).expect("x fits C(n,2) bits")
}

/// Predicate value of every graph on `n` vertices, indexed by edge bits.
pub fn predicate_table(n: usize, predicate: &Predicate) -> Result<Vec<bool>> {
    if n > MAX_COUNT_N {
        return Err(Error::usage(format!("exhaustive tables support n <= {MAX_COUNT_N}, got {n}")));
    }
    let total = 1u64 << pair_count(n);
    (0..total).into_par_iter().map(|x| predicate.evaluate(&graph_of(n, x))).collect()
}

fn best_family(n: usize, table: &[bool], want: bool, budget: u64) -> Result<FamilyOptimum> {
    let mut candidates: Vec<u64> = (1..table.len() as u64).filter(|&x| table[x as usize] == want).collect();
    candidates.sort_by_key(|&x| (x.count_ones(), x));
    let mut adj = BitMatrix::new(candidates.len());
    for i in 0..candidates.len() {
        for j in i + 1..candidates.len() {
            if table[(candidates[i] ^ candidates[j]) as usize] == want {
                adj.set_symmetric(i, j);
            }
        }
    }
    let out = max_clique(&adj, budget);
    if !out.exact {
        return Err(Error::resource(format!(
            "clique budget exhausted; best family found has size {}",
            out.clique.len() + 1
        )));
    }
    let mut members = vec![0u64];
    members.extend(out.clique.iter().map(|&i| candidates[i]));
    members.sort_unstable();
    Ok(FamilyOptimum { size: members.len(), witness: members.into_iter().map(|x| graph_of(n, x)).collect() })
}

fn check_clique_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_CLIQUE_N {
        return Err(Error::usage(format!("exact family sizes support 1 <= n <= {MAX_CLIQUE_N}, got {n}")));
    }
    Ok(())
}

/// Largest family whose pairwise differences all satisfy `predicate`.
pub fn exact_mf(n: usize, predicate: &Predicate, budget: u64) -> Result<FamilyOptimum> {
    check_clique_n(n)?;
    best_family(n, &predicate_table(n, predicate)?, true, budget)
}

/// Largest family none of whose pairwise differences satisfies `predicate`.
pub fn exact_df(n: usize, predicate: &Predicate, budget: u64) -> Result<FamilyOptimum> {
    check_clique_n(n)?;
    best_family(n, &predicate_table(n, predicate)?, false, budget)
}

/// Number of graphs on `n` vertices that fail `predicate`.
pub fn count_bad_graphs(n: usize, predicate: &Predicate) -> Result<u64> {
    Ok(predicate_table(n, predicate)?.iter().filter(|&&b| !b).count() as u64)
}

/// `C(n,2) - log2(bad + 1)`: the independence-number floor on `log2 M`.
pub fn greedy_rate_lower_bound(n: usize, predicate: &Predicate) -> Result<f64> {
    let bad = count_bad_graphs(n, predicate)?;
    Ok(pair_count(n) as f64 - ((bad + 1) as f64).log2())
}

/// Pairwise check that every difference within `family` satisfies `predicate`.
pub fn is_good_family(family: &[LabeledGraph], predicate: &Predicate) -> Result<bool> {
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            if !predicate.evaluate(&a.symdiff(b)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Runs every oracle computation for `(n, predicate)`. The dual and the bad
/// count are skipped where `n` is out of their range.
pub fn oracle_report(n: usize, predicate: &Predicate, budget: u64) -> Result<OracleResult> {
    check_clique_n(n)?;
    let table = predicate_table(n, predicate)?;
    let m = best_family(n, &table, true, budget)?;
    if !is_good_family(&m.witness, predicate)? {
        return Err(Error::Internal("optimal witness failed re-verification".into()));
    }
    let d = best_family(n, &table, false, budget)?;
    let bad = table.iter().filter(|&&b| !b).count() as u64;
    let result = OracleResult {
        format_version: FORMAT_VERSION,
        n,
        predicate: predicate.clone(),
        m_exact: m.size,
        witness_family: m.witness,
        d_exact: Some(d.size),
        bad_count: Some(bad),
        greedy_log2_bound: Some(pair_count(n) as f64 - ((bad + 1) as f64).log2()),
    };
    if result.product_bound_holds() == Some(false) {
        return Err(Error::Verification(format!("M * D = {} * {} exceeds 2^C(n,2)", m.size, d.size)));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::{is_spanning_connected, PatternGraph};

    const BUDGET: u64 = 1 << 26;

    fn tri() -> Predicate {
        Predicate::ContainsPattern { pattern: PatternGraph::complete(3) }
    }

    #[test]
    fn connected_closed_form() {
        for n in 2..=4 {
            assert_eq!(exact_mf(n, &Predicate::Connected, BUDGET).unwrap().size, 1 << (n - 1));
        }
        let m3 = exact_mf(3, &Predicate::Connected, BUDGET).unwrap();
        assert!(m3.witness.iter().skip(1).all(|g| g.edge_count() == 2));
        assert_eq!(exact_df(3, &Predicate::Connected, BUDGET).unwrap().size, 2);
    }

    #[test]
    fn triangle_values() {
        let m = exact_mf(3, &tri(), BUDGET).unwrap();
        assert_eq!(m.size, 2);
        assert_eq!(m.witness[0].symdiff(&m.witness[1]).unwrap(), LabeledGraph::complete(3));
        assert_eq!(exact_df(3, &tri(), BUDGET).unwrap().size, 4);
        assert_eq!(count_bad_graphs(3, &tri()).unwrap(), 7);
        assert_eq!(count_bad_graphs(3, &Predicate::Connected).unwrap(), 4);
        assert_eq!(greedy_rate_lower_bound(3, &tri()).unwrap(), 0.0);
        let b4 = greedy_rate_lower_bound(4, &tri()).unwrap();
        assert!((b4 - (6.0 - 42f64.log2())).abs() < 1e-12);
        assert!(exact_mf(4, &tri(), BUDGET).unwrap().size as f64 >= b4.exp2());
    }

    #[test]
    fn triangle_free_count_oracle() {
        // Independent count: a 4-vertex graph is triangle-free iff no 3-set spans all its edges.
        let mut free = 0;
        for x in 0u64..64 {
            let g = graph_of(4, x);
            let has = (0..4).any(|a| (a + 1..4).any(|b| (b + 1..4).any(|c| g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c))));
            free += u64::from(!has);
        }
        assert_eq!(free, 41);
        assert_eq!(count_bad_graphs(4, &tri()).unwrap(), 41);
    }

    #[test]
    fn product_bound_over_suite() {
        let suite = [
            Predicate::Connected,
            tri(),
            Predicate::KCopies { pattern: PatternGraph::complete(2), k: 2 },
            Predicate::KDisjoint { pattern: PatternGraph::complete(2), k: 2 },
            Predicate::SpanningTreeLeaves { leaves: 2 },
            Predicate::ContainsKst { s: 1, t: 2 },
        ];
        for p in &suite {
            for n in 2..=4 {
                let r = oracle_report(n, p, BUDGET).unwrap();
                assert_eq!(r.product_bound_holds(), Some(true), "{p} n={n}");
                assert!(r.m_exact as f64 >= r.greedy_log2_bound.unwrap().exp2() - 1e-9);
                assert!(is_good_family(&r.witness_family, p).unwrap());
            }
        }
        let r = oracle_report(3, &Predicate::Connected, BUDGET).unwrap();
        assert_eq!(r.m_exact * r.d_exact.unwrap(), 8);
    }

    #[test]
    fn all_true_predicate() {
        let p = Predicate::ContainsKst { s: 1, t: 1 };
        // Every nonempty graph contains an edge; the empty XOR never arises between distinct members.
        assert_eq!(exact_df(3, &p, BUDGET).unwrap().size, 1);
        assert_eq!(count_bad_graphs(3, &p).unwrap(), 1);
        assert!(predicate_table(3, &Predicate::Connected).unwrap().iter().enumerate().all(|(x, &b)| b == is_spanning_connected(&graph_of(3, x as u64))));
    }

    #[test]
    fn rejects_large_n() {
        assert!(matches!(exact_mf(6, &Predicate::Connected, BUDGET), Err(Error::Usage(_))));
        assert!(matches!(count_bad_graphs(7, &Predicate::Connected), Err(Error::Usage(_))));
    }

    #[test]
    fn report_json_round_trip() {
        let r = oracle_report(3, &tri(), BUDGET).unwrap();
        assert_eq!(OracleResult::from_json(&r.to_json().unwrap()).unwrap(), r);
    }
}
