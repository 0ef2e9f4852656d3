//! Graph classes tested on symmetric differences.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{
    contains_kst, count_copies, find_copy_avoiding, is_spanning_connected, max_disjoint_copies, CountBound,
    LabeledGraph, PatternGraph, DEFAULT_ENUMERATION_BUDGET,
};

/// Membership test for a class of graphs on a fixed vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Predicate {
    Connected,
    ContainsPattern { pattern: PatternGraph },
    KCopies { pattern: PatternGraph, k: usize },
    KDisjoint { pattern: PatternGraph, k: usize },
    SpanningTreeLeaves { leaves: usize },
    ContainsKst { s: usize, t: usize },
}

impl Predicate {
    pub fn evaluate(&self, g: &LabeledGraph) -> Result<bool> {
        match self {
            Predicate::Connected => Ok(is_spanning_connected(g)),
            Predicate::ContainsPattern { pattern } => Ok(find_copy_avoiding(g, pattern, 0)?.is_some()),
            Predicate::KCopies { pattern, k } => Ok(count_copies(g, pattern)? >= *k as u64),
            Predicate::KDisjoint { pattern, k } => {
                let (found, bound) = max_disjoint_copies(g, pattern, DEFAULT_ENUMERATION_BUDGET)?;
                match bound {
                    _ if found >= *k => Ok(true),
                    CountBound::Exact => Ok(false),
                    CountBound::LowerBound => Err(Error::resource("disjoint-copy search budget exhausted")),
                }
            }
            Predicate::SpanningTreeLeaves { leaves } => has_spanning_tree_with_leaves(g, *leaves),
            Predicate::ContainsKst { s, t } => contains_kst(g, *s, *t),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Connected => write!(f, "connected"),
            Predicate::ContainsPattern { pattern } => write!(f, "contains {}", pattern.graph()),
            Predicate::KCopies { pattern, k } => write!(f, ">= {k} copies of {}", pattern.graph()),
            Predicate::KDisjoint { pattern, k } => write!(f, ">= {k} disjoint copies of {}", pattern.graph()),
            Predicate::SpanningTreeLeaves { leaves } => write!(f, "spanning tree with {leaves} leaves"),
            Predicate::ContainsKst { s, t } => write!(f, "contains K_{{{s},{t}}}"),
        }
    }
}

/// Exhaustive search over `(n-1)`-edge subsets of `g`.
fn has_spanning_tree_with_leaves(g: &LabeledGraph, leaves: usize) -> Result<bool> {
    let n = g.n();
    if n <= 1 {
        return Ok(leaves == 0);
    }
    if !is_spanning_connected(g) {
        return Ok(false);
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    if edges.len() > 28 {
        return Err(Error::resource("spanning-tree enumeration supports at most 28 edges"));
    }

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }
    // Chooses tree edges in index order; a union-find snapshot per level keeps it simple.
    fn rec(edges: &[(usize, usize)], start: usize, left: usize, parent: &mut Vec<usize>, degree: &mut Vec<usize>, leaves: usize) -> bool {
        if left == 0 {
            return degree.iter().filter(|&&d| d == 1).count() == leaves;
        }
        for k in start..=edges.len() - left {
            let (u, v) = edges[k];
            let (ru, rv) = (find(parent, u), find(parent, v));
            if ru == rv {
                continue;
            }
            let saved = parent.clone();
            parent[ru] = rv;
            degree[u] += 1;
            degree[v] += 1;
            let hit = rec(edges, k + 1, left - 1, parent, degree, leaves);
            degree[u] -= 1;
            degree[v] -= 1;
            *parent = saved;
            if hit {
                return true;
            }
        }
        false
    }
    let mut parent: Vec<usize> = (0..n).collect();
    let mut degree = vec![0; n];
    Ok(rec(&edges, 0, n - 1, &mut parent, &mut degree, leaves))
}
