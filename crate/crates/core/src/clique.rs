//! Exact maximum clique by branch and bound with greedy-coloring bounds.

/// Square bit matrix used as an adjacency relation.
#[derive(Clone, Debug)]
pub struct BitMatrix {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let stride = n.div_ceil(64).max(1);
        BitMatrix { n, stride, bits: vec![0; n * stride] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn set_symmetric(&mut self, u: usize, v: usize) {
        self.bits[u * self.stride + v / 64] |= 1 << (v % 64);
        self.bits[v * self.stride + u / 64] |= 1 << (u % 64);
    }

    pub fn get(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.stride..(u + 1) * self.stride]
    }
}

/// Result of a clique search. `exact` is false when the node budget ran out,
/// in which case `clique` is the best found so far.
#[derive(Clone, Debug)]
pub struct CliqueOutcome {
    pub clique: Vec<usize>,
    pub exact: bool,
    pub nodes: u64,
}

struct Search<'a> {
    adj: &'a BitMatrix,
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

fn first_bit(set: &[u64]) -> Option<usize> {
    set.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

impl Search<'_> {
    /// Greedy sequential coloring of `cand`; returns vertices in non-decreasing color order.
    fn color_sort(&self, cand: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = cand.to_vec();
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut color = 0;
        while uncolored.iter().any(|&w| w != 0) {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = first_bit(&q) {
                q[v / 64] &= !(1 << (v % 64));
                uncolored[v / 64] &= !(1 << (v % 64));
                for (qw, rw) in q.iter_mut().zip(self.adj.row(v)) {
                    *qw &= !rw;
                }
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }

    fn expand(&mut self, mut cand: Vec<u64>) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let (order, colors) = self.color_sort(&cand);
        for idx in (0..order.len()).rev() {
            if self.current.len() + colors[idx] <= self.best.len() || self.exhausted {
                return;
            }
            let v = order[idx];
            self.current.push(v);
            let next: Vec<u64> = cand.iter().zip(self.adj.row(v)).map(|(c, r)| c & r).collect();
            if next.iter().all(|&w| w == 0) {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            cand[v / 64] &= !(1 << (v % 64));
        }
    }
}

/// Maximum clique of `adj`, exploring at most `budget` search nodes.
///
/// The returned clique is sorted ascending. Deterministic for a given matrix.
pub fn max_clique(adj: &BitMatrix, budget: u64) -> CliqueOutcome {
    let mut cand = vec![0u64; adj.stride];
    for v in 0..adj.n {
        cand[v / 64] |= 1 << (v % 64);
    }
    let mut s = Search {
        adj,
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        budget,
        exhausted: false,
    };
    if adj.n > 0 {
        s.expand(cand);
    }
    let mut clique = s.best;
    clique.sort_unstable();
    CliqueOutcome { clique, exact: !s.exhausted, nodes: s.nodes }
}
