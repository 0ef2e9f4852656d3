//! Labeled graphs on `{0..n-1}` stored as a bitset over the `C(n,2)` canonical edge slots.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of unordered vertex pairs on `n` vertices.
#[inline]
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[inline]
fn raw_index(u: usize, v: usize, n: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Canonical slot of the pair `{u, v}`: lexicographic by `(min, max)`.
pub fn edge_index(u: usize, v: usize, n: usize) -> Result<usize> {
    if u >= n || v >= n {
        return Err(Error::usage(format!("vertex out of range: ({u}, {v}) with n = {n}")));
    }
    if u == v {
        return Err(Error::usage(format!("loop at vertex {u} has no edge slot")));
    }
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    Ok(raw_index(a, b, n))
}

/// Inverse of [`edge_index`].
pub fn edge_from_index(index: usize, n: usize) -> Result<(usize, usize)> {
    if index >= pair_count(n) {
        return Err(Error::usage(format!("edge index {index} out of range for n = {n}")));
    }
    let mut u = 0;
    let mut row_start = 0;
    loop {
        let row_len = n - u - 1;
        if index < row_start + row_len {
            return Ok((u, u + 1 + index - row_start));
        }
        row_start += row_len;
        u += 1;
    }
}

/// A simple undirected graph on the vertex set `{0..n-1}`.
///
/// Bit `edge_index(u, v, n)` is set iff `{u, v}` is an edge. Bits past `C(n,2)` are
/// always clear, so derived `Eq`/`Hash` agree with edge-set equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledGraph {
    n: usize,
    words: Vec<u64>,
}

impl LabeledGraph {
    pub fn empty(n: usize) -> Self {
        LabeledGraph {
            n,
            words: vec![0; pair_count(n).div_ceil(64)],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        let slots = pair_count(n);
        for (i, w) in g.words.iter_mut().enumerate() {
            let lo = i * 64;
            let hi = (lo + 64).min(slots);
            *w = if hi - lo == 64 { u64::MAX } else { (1u64 << (hi - lo)) - 1 };
        }
        g
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            let i = edge_index(u, v, n)?;
            g.set_slot(i);
        }
        Ok(g)
    }

    /// Builds a graph from per-vertex neighbor masks (`n <= 64`).
    pub fn from_neighbor_masks(masks: &[u64]) -> Result<Self> {
        let n = masks.len();
        if n > 64 {
            return Err(Error::usage("neighbor masks only support n <= 64"));
        }
        let mut g = Self::empty(n);
        for (u, &mask) in masks.iter().enumerate().take(n) {
            let mut m = if u + 1 >= 64 { 0 } else { mask >> (u + 1) << (u + 1) };
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                g.set_slot(raw_index(u, v, n));
            }
        }
        Ok(g)
    }

    /// Builds a graph from raw slot words; bits past `C(n,2)` must be clear.
    pub fn from_words(n: usize, words: Vec<u64>) -> Result<Self> {
        let g = LabeledGraph { n, words };
        if g.words.len() != pair_count(n).div_ceil(64) {
            return Err(Error::Format(format!("expected {} words for n = {n}", pair_count(n).div_ceil(64))));
        }
        let slots = pair_count(n);
        if !slots.is_multiple_of(64) {
            if let Some(&last) = g.words.last() {
                if last >> (slots % 64) != 0 {
                    return Err(Error::Format("bits set past the last edge slot".into()));
                }
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn slot_count(&self) -> usize {
        pair_count(self.n)
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn slot(&self, index: usize) -> bool {
        self.words[index / 64] >> (index % 64) & 1 == 1
    }

    #[inline]
    fn set_slot(&mut self, index: usize) {
        self.words[index / 64] |= 1 << (index % 64);
    }

    #[inline]
    fn clear_slot(&mut self, index: usize) {
        self.words[index / 64] &= !(1 << (index % 64));
    }

    /// Panics on out-of-range vertices; use [`edge_index`] for checked access.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.slot(edge_index(u, v, self.n).expect("vertex out of range"))
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let i = edge_index(u, v, self.n)?;
        self.set_slot(i);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let i = edge_index(u, v, self.n)?;
        self.clear_slot(i);
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Set slot indices in ascending order.
    pub fn slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    /// Edges `(u, v)` with `u < v`, in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        let mut u = 0usize;
        let mut row_end = n.saturating_sub(1);
        let mut row_start = 0usize;
        self.slots().map(move |i| {
            while i >= row_end {
                u += 1;
                row_start = row_end;
                row_end += n - u - 1;
            }
            (u, u + 1 + i - row_start)
        })
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::usage(format!(
                "graphs live on different vertex sets (n = {} vs n = {})",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Symmetric difference: the edges in exactly one of the two graphs.
    pub fn symdiff(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect();
        Ok(LabeledGraph { n: self.n, words })
    }

    /// In-place symmetric difference. Panics if the vertex counts differ.
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.n, other.n, "xor of graphs on different vertex sets");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        Ok(LabeledGraph { n: self.n, words })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Ok(LabeledGraph { n: self.n, words })
    }

    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn complement(&self) -> Self {
        let full = Self::complete(self.n);
        let words = self.words.iter().zip(&full.words).map(|(a, f)| !a & f).collect();
        LabeledGraph { n: self.n, words }
    }

    pub fn degrees(&self) -> DegreeProfile {
        let mut degrees = vec![0; self.n];
        for (u, v) in self.edges() {
            degrees[u] += 1;
            degrees[v] += 1;
        }
        DegreeProfile { degrees }
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (u, v) in self.edges() {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Per-vertex neighbor bitmasks; only defined for `n <= 64`.
    pub fn neighbor_masks(&self) -> Result<Vec<u64>> {
        if self.n > 64 {
            return Err(Error::usage(format!("neighbor masks need n <= 64, got {}", self.n)));
        }
        let mut masks = vec![0u64; self.n];
        for (u, v) in self.edges() {
            masks[u] |= 1 << v;
            masks[v] |= 1 << u;
        }
        Ok(masks)
    }

    /// Relabels vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::usage("permutation length must equal n"));
        }
        Self::from_edges(self.n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Copies this graph onto `n >= self.n()` vertices, adding isolated vertices.
    pub fn embedded_in(&self, n: usize) -> Result<Self> {
        if n < self.n {
            return Err(Error::usage("cannot embed into fewer vertices"));
        }
        Self::from_edges(n, self.edges())
    }

    /// The `n=<n> edges=<hex>` line form.
    pub fn to_line(&self) -> String {
        format!("n={} edges={}", self.n, self.edges_hex())
    }

    /// Edge bitset as hex, most significant nibble first, zero padded to
    /// `ceil(C(n,2)/4)` digits; slot 0 is the least significant bit.
    pub fn edges_hex(&self) -> String {
        bits_to_hex(&self.words, self.slot_count())
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        let mut parts = line.split_whitespace();
        let (Some(np), Some(ep), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Format(format!("expected `n=<n> edges=<hex>`, got {line:?}")));
        };
        let n: usize = np
            .strip_prefix("n=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format(format!("bad vertex count field {np:?}")))?;
        let hex = ep
            .strip_prefix("edges=")
            .ok_or_else(|| Error::Format(format!("bad edge field {ep:?}")))?;
        let words = hex_to_bits(hex, pair_count(n))?;
        Self::from_words(n, words)
    }
}

/// Hex encoding shared by graphs and code words: `len` bits, position 0 in the
/// least significant bit of the last digit.
pub fn bits_to_hex(words: &[u64], len: usize) -> String {
    let digits = len.div_ceil(4);
    let mut s = String::with_capacity(digits);
    for k in (0..digits).rev() {
        let bit = k * 4;
        let nibble = (words[bit / 64] >> (bit % 64)) & 0xf;
        s.push(char::from_digit(nibble as u32, 16).unwrap());
    }
    s
}

/// Inverse of [`bits_to_hex`]; rejects wrong lengths and bits past `len`.
pub fn hex_to_bits(hex: &str, len: usize) -> Result<Vec<u64>> {
    let digits = len.div_ceil(4);
    if hex.len() != digits {
        return Err(Error::Format(format!("expected {digits} hex digits for {len} bits, got {}", hex.len())));
    }
    let mut words = vec![0u64; len.div_ceil(64)];
    for (pos, c) in hex.chars().enumerate() {
        let nibble = c
            .to_digit(16)
            .ok_or_else(|| Error::Format(format!("invalid hex digit {c:?}")))? as u64;
        let bit = (digits - 1 - pos) * 4;
        if nibble != 0 && bit + (64 - nibble.leading_zeros() as usize) > len {
            return Err(Error::Format("hex sets bits past the last position".into()));
        }
        words[bit / 64] |= nibble << (bit % 64);
    }
    Ok(words)
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledGraph(n={}, {:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

impl FromStr for LabeledGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_line(s)
    }
}

impl Serialize for LabeledGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_line())
    }
}

impl<'de> Deserialize<'de> for LabeledGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse_line(&s).map_err(serde::de::Error::custom)
    }
}

/// Vertex degrees of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub degrees: Vec<usize>,
}

impl DegreeProfile {
    pub fn total(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn max(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn count_of(&self, d: usize) -> usize {
        self.degrees.iter().filter(|&&x| x == d).count()
    }
}
