//! Connectivity and tree shape queries.

use super::graph::LabeledGraph;

/// True iff all `n` vertices lie in a single component.
///
/// Isolated vertices disqualify a graph: connectivity is always spanning.
pub fn is_spanning_connected(g: &LabeledGraph) -> bool {
    let n = g.n();
    if n <= 1 {
        return true;
    }
    if n <= 64 {
        let masks = g.neighbor_masks().expect("n <= 64");
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= masks[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        return seen == full;
    }
    let adj = g.adjacency_lists();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Number of leaves if `t` is a spanning tree, `None` otherwise.
///
/// A single vertex is a tree with no leaves.
pub fn spanning_tree_leaf_count(t: &LabeledGraph) -> Option<usize> {
    let n = t.n();
    if n == 0 || t.edge_count() != n - 1 || !is_spanning_connected(t) {
        return None;
    }
    Some(t.degrees().count_of(1))
}

/// A spanning path through all `n` vertices.
pub fn is_hamiltonian_path(g: &LabeledGraph) -> bool {
    g.n() >= 2 && spanning_tree_leaf_count(g) == Some(2)
}

/// A single cycle through all `n >= 3` vertices.
pub fn is_hamiltonian_cycle(g: &LabeledGraph) -> bool {
    let n = g.n();
    n >= 3 && g.edge_count() == n && g.degrees().degrees.iter().all(|&d| d == 2) && is_spanning_connected(g)
}

/// Vertices of a Hamiltonian path in order, starting at the smaller-labeled endpoint.
pub fn hamiltonian_path_order(g: &LabeledGraph) -> Option<Vec<usize>> {
    if !is_hamiltonian_path(g) {
        return None;
    }
    let adj = g.adjacency_lists();
    let start = (0..g.n()).find(|&v| adj[v].len() == 1)?;
    let mut order = Vec::with_capacity(g.n());
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        order.push(cur);
        match adj[cur].iter().copied().find(|&w| w != prev) {
            Some(next) if order.len() < g.n() => {
                prev = cur;
                cur = next;
            }
            _ => break,
        }
    }
    Some(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> LabeledGraph {
        LabeledGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn cycle(n: usize) -> LabeledGraph {
        LabeledGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn connectivity_examples() {
        assert!(is_spanning_connected(&path(5)));
        let tri = LabeledGraph::from_edges(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!is_spanning_connected(&tri));
        assert!(is_spanning_connected(&LabeledGraph::empty(1)));
        assert!(!is_spanning_connected(&LabeledGraph::empty(2)));
    }

    #[test]
    fn connectivity_large_n_uses_lists() {
        let n = 100;
        assert!(is_spanning_connected(&path(n)));
        let mut g = path(n);
        g.remove_edge(49, 50).unwrap();
        assert!(!is_spanning_connected(&g));
    }

    #[test]
    fn leaf_count_examples() {
        assert_eq!(spanning_tree_leaf_count(&path(6)), Some(2));
        let star = LabeledGraph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
        assert_eq!(spanning_tree_leaf_count(&star), Some(5));
        assert_eq!(spanning_tree_leaf_count(&cycle(5)), None);
        // n-1 edges but disconnected
        let g = LabeledGraph::from_edges(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(spanning_tree_leaf_count(&g), None);
    }

    /// Two-leaf spanning trees are exactly Hamiltonian paths: compare against
    /// a brute-force path test over every edge subset for n <= 6.
    #[test]
    fn two_leaves_iff_hamiltonian_path_exhaustive() {
        for n in 2..=6usize {
            let slots = n * (n - 1) / 2;
            for mask in 0u64..(1 << slots) {
                let g = LabeledGraph::from_words(n, vec![mask]).unwrap();
                let brute = brute_hamiltonian_path(&g);
                assert_eq!(spanning_tree_leaf_count(&g) == Some(2), brute && g.edge_count() == n - 1, "{g:?}");
            }
        }
    }

    fn brute_hamiltonian_path(g: &LabeledGraph) -> bool {
        fn perms(k: usize, cur: &mut Vec<usize>, used: &mut [bool], g: &LabeledGraph) -> bool {
            if cur.len() == k {
                return true;
            }
            for v in 0..k {
                if !used[v] && cur.last().is_none_or(|&u| g.has_edge(u, v)) {
                    used[v] = true;
                    cur.push(v);
                    if perms(k, cur, used, g) {
                        return true;
                    }
                    cur.pop();
                    used[v] = false;
                }
            }
            false
        }
        perms(g.n(), &mut Vec::new(), &mut vec![false; g.n()], g)
    }

    #[test]
    fn path_order_walks_from_smaller_endpoint() {
        let g = LabeledGraph::from_edges(5, [(4, 2), (2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(hamiltonian_path_order(&g).unwrap(), vec![1, 3, 0, 2, 4]);
        assert!(hamiltonian_path_order(&cycle(5)).is_none());
    }

    #[test]
    fn hamiltonian_cycle_check() {
        assert!(is_hamiltonian_cycle(&cycle(6)));
        let two_triangles =
            LabeledGraph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!is_hamiltonian_cycle(&two_triangles));
    }
}
