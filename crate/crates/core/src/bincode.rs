//! Binary block codes used as scaffolding by the graph constructions.
//!
//! Words are packed into `u64` with position 0 in the least significant bit,
//! so code lengths are limited to 64.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artifact::{check_format_version, FORMAT_VERSION};
use crate::clique::{max_clique, BitMatrix};
use crate::error::{Error, Result};
use crate::gf2;
use crate::graphcore::{bits_to_hex, hex_to_bits};
use crate::rng::substream;

/// Longest code that [`gv_greedy`] will scan exhaustively.
pub const MAX_GV_LENGTH: usize = 26;

const SPAN_ENUMERATION_LIMIT: usize = 22;
const PAIR_BUDGET: u128 = 1 << 36;

/// A linear code given by a basis and the parity checks that cut it out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearStructure {
    pub basis: Vec<u64>,
    pub parity_checks: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Words {
    Explicit(Vec<u64>),
    Linear(LinearStructure),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCode {
    length: usize,
    distance_claim: usize,
    words: Words,
}

fn length_mask(length: usize) -> u64 {
    if length == 64 {
        u64::MAX
    } else {
        (1u64 << length) - 1
    }
}

impl BinaryCode {
    /// An explicit code; checks distinctness, length and the distance claim.
    pub fn from_words(length: usize, words: Vec<u64>, distance_claim: usize) -> Result<Self> {
        if length == 0 || length > 64 {
            return Err(Error::usage(format!("code length must be 1..=64, got {length}")));
        }
        let mask = length_mask(length);
        if words.iter().any(|&w| w & !mask != 0) {
            return Err(Error::usage(format!("a word is longer than {length} bits")));
        }
        let mut sorted = words.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != words.len() {
            return Err(Error::usage("code words must be distinct"));
        }
        let code = BinaryCode { length, distance_claim, words: Words::Explicit(words) };
        code.check_claim()?;
        Ok(code)
    }

    /// The span of `basis` (rows need not be independent).
    pub fn from_basis(length: usize, basis: &[u64], distance_claim: usize) -> Result<Self> {
        if length == 0 || length > 64 {
            return Err(Error::usage(format!("code length must be 1..=64, got {length}")));
        }
        if basis.iter().any(|&w| w & !length_mask(length) != 0) {
            return Err(Error::usage(format!("a basis vector is longer than {length} bits")));
        }
        let basis: Vec<u64> = gf2::rref(basis).into_iter().map(|(r, _)| r).collect();
        let parity_checks = gf2::nullspace(&basis, length);
        let code = BinaryCode {
            length,
            distance_claim,
            words: Words::Linear(LinearStructure { basis, parity_checks }),
        };
        code.check_claim()?;
        Ok(code)
    }

    fn from_parity_checks(length: usize, parity_checks: Vec<u64>, distance_claim: usize) -> Self {
        let basis = gf2::nullspace(&parity_checks, length);
        BinaryCode {
            length,
            distance_claim,
            words: Words::Linear(LinearStructure { basis, parity_checks }),
        }
    }

    fn check_claim(&self) -> Result<()> {
        if self.word_count() < 2 {
            return Ok(());
        }
        let d = verify_min_distance(self)?;
        if d < self.distance_claim {
            return Err(Error::Verification(format!(
                "minimum distance {d} is below the claimed {}",
                self.distance_claim
            )));
        }
        Ok(())
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn distance_claim(&self) -> usize {
        self.distance_claim
    }

    pub fn linear(&self) -> Option<&LinearStructure> {
        match &self.words {
            Words::Linear(l) => Some(l),
            Words::Explicit(_) => None,
        }
    }

    pub fn dimension(&self) -> Option<usize> {
        self.linear().map(|l| l.basis.len())
    }

    pub fn word_count(&self) -> u128 {
        match &self.words {
            Words::Explicit(w) => w.len() as u128,
            Words::Linear(l) => 1u128 << l.basis.len(),
        }
    }

    /// Word `i`: scan order for explicit codes, basis combination `i` for linear ones.
    pub fn word(&self, i: u64) -> u64 {
        match &self.words {
            Words::Explicit(w) => w[i as usize],
            Words::Linear(l) => gf2::combine(&l.basis, i),
        }
    }

    /// All words, materialized. Refuses linear codes of dimension above 24.
    pub fn words(&self) -> Result<Vec<u64>> {
        match &self.words {
            Words::Explicit(w) => Ok(w.clone()),
            Words::Linear(l) if l.basis.len() <= 24 => {
                Ok((0..1u64 << l.basis.len()).map(|i| gf2::combine(&l.basis, i)).collect())
            }
            Words::Linear(l) => Err(Error::resource(format!(
                "refusing to materialize 2^{} code words",
                l.basis.len()
            ))),
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        match &self.words {
            Words::Explicit(w) => w.contains(&v),
            Words::Linear(l) => v & !length_mask(self.length) == 0 && l.parity_checks.iter().all(|&r| gf2::parity(r & v) == 0),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let hex = |w: u64| bits_to_hex(&[w], self.length);
        let (words, linear_basis) = match &self.words {
            Words::Explicit(w) => (w.iter().map(|&x| hex(x)).collect(), None),
            Words::Linear(l) => {
                let words = if l.basis.len() <= 12 { self.words()?.into_iter().map(hex).collect() } else { Vec::new() };
                (words, Some(l.basis.iter().map(|&b| hex(b)).collect()))
            }
        };
        let file = CodeFile {
            format_version: FORMAT_VERSION,
            length: self.length,
            distance_claim: self.distance_claim,
            words,
            linear_basis,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Loads and re-verifies a code file.
    pub fn from_json(s: &str) -> Result<Self> {
        let file: CodeFile = serde_json::from_str(s)?;
        check_format_version(file.format_version)?;
        let parse = |h: &String| hex_to_bits(h, file.length).map(|w| w[0]);
        let words: Vec<u64> = file.words.iter().map(parse).collect::<Result<_>>()?;
        match file.linear_basis {
            Some(basis) => {
                let basis: Vec<u64> = basis.iter().map(parse).collect::<Result<_>>()?;
                let code = Self::from_basis(file.length, &basis, file.distance_claim)?;
                if !words.is_empty() && (words.len() as u128 != code.word_count() || !words.iter().all(|&w| code.contains(w))) {
                    return Err(Error::Format("listed words disagree with the linear basis".into()));
                }
                Ok(code)
            }
            None => Self::from_words(file.length, words, file.distance_claim),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CodeFile {
    format_version: u32,
    length: usize,
    distance_claim: usize,
    words: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    linear_basis: Option<Vec<String>>,
}

/// Order in which [`gv_greedy`] visits `{0,1}^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanOrder {
    Lexicographic,
    SeededRandom(u64),
}

/// Output of [`gv_greedy`]; `shortfall` is set when a finite target was missed.
#[derive(Clone, Debug)]
pub struct GreedyCode {
    pub code: BinaryCode,
    pub shortfall: Option<usize>,
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Hamming-ball volume `sum_{i<d} C(m, i)`.
pub fn ball_volume(m: usize, d: usize) -> u128 {
    (0..d).map(|i| binomial(m as u64, i as u64)).sum()
}

/// Smallest size a full greedy scan can produce: `ceil(2^m / ball_volume(m, d))`.
pub fn gv_guarantee(m: usize, d: usize) -> u128 {
    let v = ball_volume(m, d);
    (1u128 << m).div_ceil(v)
}

/// Every vector of weight `< d` in `{0,1}^m`.
fn ball_patterns(m: usize, d: usize) -> Vec<u64> {
    let mut out = vec![0u64];
    let mut frontier = vec![(0u64, 0usize)];
    for _ in 1..d {
        let mut next = Vec::new();
        for &(v, start) in &frontier {
            for b in start..m {
                let w = v | 1 << b;
                out.push(w);
                next.push((w, b + 1));
            }
        }
        frontier = next;
    }
    out
}

/// Greedy Gilbert–Varshamov code: admit each scanned word at distance `>= d`
/// from every admitted one, stopping at `target` if given.
pub fn gv_greedy(m: usize, d: usize, order: ScanOrder, target: Option<usize>) -> Result<GreedyCode> {
    if d == 0 || d > m {
        return Err(Error::usage(format!("need 1 <= d <= m, got m={m}, d={d}")));
    }
    if m > MAX_GV_LENGTH {
        return Err(Error::usage(format!("greedy scan supports m <= {MAX_GV_LENGTH}, got {m}")));
    }
    let total = 1usize << m;
    let patterns = ball_patterns(m, d);
    let mut blocked = vec![0u64; total.div_ceil(64)];
    let mut words = Vec::new();
    let mut admit = |x: u64, words: &mut Vec<u64>| {
        if blocked[x as usize / 64] >> (x % 64) & 1 == 1 {
            return;
        }
        words.push(x);
        for &e in &patterns {
            let y = (x ^ e) as usize;
            blocked[y / 64] |= 1 << (y % 64);
        }
    };
    let goal = target.unwrap_or(usize::MAX);
    match order {
        ScanOrder::Lexicographic => {
            for x in 0..total as u64 {
                if words.len() >= goal {
                    break;
                }
                admit(x, &mut words);
            }
        }
        ScanOrder::SeededRandom(seed) => {
            let mut perm: Vec<u32> = (0..total as u32).collect();
            perm.shuffle(&mut substream(seed, 0));
            for &x in &perm {
                if words.len() >= goal {
                    break;
                }
                admit(x as u64, &mut words);
            }
        }
    }
    let shortfall = target.filter(|&t| words.len() < t).map(|t| t - words.len());
    let code = BinaryCode { length: m, distance_claim: d, words: Words::Explicit(words) };
    Ok(GreedyCode { code, shortfall })
}

/// Hamming code of length `2^k - 1`: parity-check column `j` is `j + 1` in binary.
pub fn hamming_code(k: usize) -> Result<BinaryCode> {
    if !(2..=6).contains(&k) {
        return Err(Error::usage(format!("hamming_code needs 2 <= k <= 6, got {k}")));
    }
    let len = (1usize << k) - 1;
    let rows = (0..k)
        .map(|r| (0..len).filter(|&j| (j + 1) >> r & 1 == 1).fold(0u64, |m, j| m | 1 << j))
        .collect();
    Ok(BinaryCode::from_parity_checks(len, rows, 3))
}

/// Even-weight linear code of length `m` with minimum distance `>= 4`.
///
/// Parity check 0 is the all-ones row; checks `1..=r` give the binary digits of
/// the column index, where `2^r >= m`. This is the extended Hamming code of
/// length `2^r` shortened to `m` columns.
pub fn even_d4_linear(m: usize) -> Result<BinaryCode> {
    if !(4..=64).contains(&m) {
        return Err(Error::usage(format!("even_d4_linear needs 4 <= m <= 64, got {m}")));
    }
    let r = (2..).find(|&r| 1usize << r >= m).unwrap();
    let mut rows = vec![length_mask(m)];
    for s in 0..r {
        rows.push((0..m).filter(|&j| j >> s & 1 == 1).fold(0u64, |acc, j| acc | 1 << j));
    }
    Ok(BinaryCode::from_parity_checks(m, rows, 4))
}

/// Packed syndrome: bit `s` is the parity of `v` against parity check `s`.
pub fn syndrome(code: &BinaryCode, v: u64) -> Result<u64> {
    let lin = code.linear().ok_or_else(|| Error::usage("syndrome needs a linear code"))?;
    if v & !length_mask(code.length) != 0 {
        return Err(Error::usage(format!("vector is longer than the code length {}", code.length)));
    }
    Ok(lin
        .parity_checks
        .iter()
        .enumerate()
        .fold(0u64, |acc, (s, &r)| acc | gf2::parity(r & v) << s))
}

/// Exact minimum distance: all pairs for explicit codes, minimum nonzero weight
/// for linear ones (span enumeration or a dependent-column search).
pub fn verify_min_distance(code: &BinaryCode) -> Result<usize> {
    match &code.words {
        Words::Explicit(words) => {
            let k = words.len() as u128;
            if k < 2 {
                return Err(Error::usage("minimum distance needs at least two words"));
            }
            if k * (k - 1) / 2 > PAIR_BUDGET {
                return Err(Error::resource(format!("{k} words exceed the pair budget")));
            }
            Ok((0..words.len())
                .into_par_iter()
                .map(|i| {
                    words[i + 1..].iter().map(|&w| (w ^ words[i]).count_ones() as usize).min().unwrap_or(usize::MAX)
                })
                .min()
                .unwrap())
        }
        Words::Linear(l) => {
            if l.basis.is_empty() {
                return Err(Error::usage("the zero code has no nonzero word"));
            }
            if l.basis.len() <= SPAN_ENUMERATION_LIMIT {
                Ok(min_weight_by_span(&l.basis))
            } else {
                min_weight_by_columns(code.length, &l.parity_checks)
            }
        }
    }
}

/// Minimum nonzero weight, visiting the span in Gray-code order.
pub fn min_weight_by_span(basis: &[u64]) -> usize {
    let mut acc = 0u64;
    let mut best = usize::MAX;
    for i in 1u64..1 << basis.len() {
        acc ^= basis[i.trailing_zeros() as usize];
        best = best.min(acc.count_ones() as usize);
    }
    best
}

/// Minimum distance as the fewest parity-check columns summing to zero.
pub fn min_weight_by_columns(length: usize, parity_checks: &[u64]) -> Result<usize> {
    let cols: Vec<u64> = (0..length)
        .map(|j| parity_checks.iter().enumerate().fold(0u64, |acc, (s, &r)| acc | (r >> j & 1) << s))
        .collect();
    fn search(cols: &[u64], start: usize, left: usize, acc: u64, budget: &mut u64) -> Result<bool> {
        if left == 0 {
            return Ok(acc == 0);
        }
        for j in start..=cols.len() - left {
            if *budget == 0 {
                return Err(Error::resource("dependent-column search budget exhausted"));
            }
            *budget -= 1;
            if search(cols, j + 1, left - 1, acc ^ cols[j], budget)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let mut budget: u64 = 1 << 32;
    for w in 1..=length {
        if search(&cols, 0, w, 0, &mut budget)? {
            return Ok(w);
        }
    }
    Err(Error::usage("code has no nonzero word"))
}

/// Largest code of length `m` and distance `d`, by exhaustive maximum clique
/// over all `2^m` words. Tiny lengths only.
pub fn max_code_size_exhaustive(m: usize, d: usize, budget: u64) -> Result<usize> {
    if m > 10 {
        return Err(Error::usage("exhaustive code search supports m <= 10"));
    }
    let n = 1usize << m;
    let mut adj = BitMatrix::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if ((a ^ b) as u64).count_ones() as usize >= d {
                adj.set_symmetric(a, b);
            }
        }
    }
    let out = max_clique(&adj, budget);
    if !out.exact {
        return Err(Error::resource(format!("A({m},{d}) search budget exhausted at {}", out.clique.len())));
    }
    Ok(out.clique.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gv_examples() {
        let c = gv_greedy(4, 3, ScanOrder::Lexicographic, None).unwrap();
        assert_eq!(c.code.words().unwrap(), vec![0b0000, 0b0111]);
        let c = gv_greedy(3, 3, ScanOrder::Lexicographic, None).unwrap();
        assert_eq!(c.code.words().unwrap(), vec![0b000, 0b111]);
        assert_eq!(ball_volume(18, 4), 988);
        let c = gv_greedy(18, 4, ScanOrder::Lexicographic, None).unwrap();
        assert!(c.code.word_count() >= 266);
        assert!(gv_greedy(3, 4, ScanOrder::Lexicographic, None).is_err());
    }

    #[test]
    fn gv_target_and_shortfall() {
        let c = gv_greedy(10, 4, ScanOrder::Lexicographic, Some(5)).unwrap();
        assert_eq!(c.code.word_count(), 5);
        assert_eq!(c.shortfall, None);
        let c = gv_greedy(6, 4, ScanOrder::Lexicographic, Some(10)).unwrap();
        assert_eq!(c.shortfall, Some(6));
        assert_eq!(c.code.word_count(), 4);
    }

    #[test]
    fn gv_matches_naive_greedy() {
        for (m, d) in [(5, 2), (7, 3), (8, 4), (9, 5)] {
            let mut naive: Vec<u64> = Vec::new();
            for x in 0..1u64 << m {
                if naive.iter().all(|&w| ((w ^ x).count_ones() as usize) >= d) {
                    naive.push(x);
                }
            }
            let c = gv_greedy(m, d, ScanOrder::Lexicographic, None).unwrap();
            assert_eq!(c.code.words().unwrap(), naive);
        }
    }

    #[test]
    fn gv_meets_sphere_covering_bound() {
        for m in (4..=18).step_by(2) {
            for d in 2..=7.min(m) {
                for order in [ScanOrder::Lexicographic, ScanOrder::SeededRandom(3)] {
                    let c = gv_greedy(m, d, order, None).unwrap();
                    assert!(c.code.word_count() >= gv_guarantee(m, d), "m={m} d={d}");
                    if (2..=4096).contains(&c.code.word_count()) {
                        assert!(verify_min_distance(&c.code).unwrap() >= d);
                    }
                }
            }
        }
    }

    #[test]
    fn seeded_order_is_reproducible() {
        let a = gv_greedy(12, 4, ScanOrder::SeededRandom(9), None).unwrap();
        let b = gv_greedy(12, 4, ScanOrder::SeededRandom(9), None).unwrap();
        assert_eq!(a.code, b.code);
    }

    #[test]
    fn exhaustive_optimum_small() {
        assert_eq!(max_code_size_exhaustive(4, 3, 1 << 24).unwrap(), 2);
        assert_eq!(max_code_size_exhaustive(6, 4, 1 << 24).unwrap(), 4);
    }

    #[test]
    fn hamming_examples() {
        let h2 = hamming_code(2).unwrap();
        assert_eq!(h2.words().unwrap().iter().copied().collect::<std::collections::BTreeSet<_>>(), [0, 0b111].into());
        let h3 = hamming_code(3).unwrap();
        assert_eq!(h3.word_count(), 16);
        let explicit = BinaryCode::from_words(7, h3.words().unwrap(), 3).unwrap();
        assert_eq!(verify_min_distance(&explicit).unwrap(), 3);
        let h4 = hamming_code(4).unwrap();
        assert_eq!(h4.word_count(), 1 << 11);
        assert_eq!(verify_min_distance(&h4).unwrap(), 3);
        assert!(hamming_code(1).is_err());
        for k in 2..=6 {
            assert_eq!(hamming_code(k).unwrap().word_count(), 1u128 << ((1 << k) - 1 - k));
        }
    }

    #[test]
    fn span_and_column_routes_agree() {
        for code in [hamming_code(3).unwrap(), hamming_code(4).unwrap(), even_d4_linear(8).unwrap(), even_d4_linear(13).unwrap()] {
            let l = code.linear().unwrap();
            assert_eq!(min_weight_by_span(&l.basis), min_weight_by_columns(code.length(), &l.parity_checks).unwrap());
        }
    }

    #[test]
    fn even_d4_examples() {
        let c8 = even_d4_linear(8).unwrap();
        assert_eq!(c8.dimension(), Some(4));
        assert_eq!(verify_min_distance(&c8).unwrap(), 4);
        let c4 = even_d4_linear(4).unwrap();
        assert!(c4.contains(0) && c4.contains(0b1111));
        assert_eq!(c4.word_count(), 2);
        let c36 = even_d4_linear(36).unwrap();
        assert!(c36.dimension().unwrap() >= 29);
        assert!(c36.linear().unwrap().parity_checks.len() <= 7);
        assert!(verify_min_distance(&c36).unwrap() >= 4);
        assert!(even_d4_linear(3).is_err());
    }

    #[test]
    fn syndrome_examples() {
        let c8 = even_d4_linear(8).unwrap();
        for w in c8.words().unwrap() {
            assert_eq!(syndrome(&c8, w).unwrap(), 0);
        }
        // Position 0 alone: column 0 of the check matrix is (1, 0, 0, 0).
        assert_eq!(syndrome(&c8, 1).unwrap(), 0b0001);
        assert_eq!(syndrome(&c8, 1 << 5).unwrap(), 0b1011);
        assert!(syndrome(&c8, 1 << 8).is_err());
        let explicit = gv_greedy(5, 2, ScanOrder::Lexicographic, None).unwrap().code;
        assert!(syndrome(&explicit, 1).is_err());
    }

    #[test]
    fn code_file_round_trip() {
        for code in [gv_greedy(9, 3, ScanOrder::Lexicographic, None).unwrap().code, hamming_code(3).unwrap(), even_d4_linear(36).unwrap()] {
            let s = code.to_json().unwrap();
            let back = BinaryCode::from_json(&s).unwrap();
            assert_eq!(back.length(), code.length());
            assert_eq!(back.word_count(), code.word_count());
            if code.linear().is_none() {
                assert_eq!(back, code);
            }
        }
    }

    #[test]
    fn false_distance_claim_is_rejected() {
        assert!(matches!(BinaryCode::from_words(4, vec![0b0000, 0b0011, 0b1100], 3), Err(Error::Verification(_))));
        let c = BinaryCode::from_words(4, vec![0b0000, 0b0011, 0b1100], 2).unwrap();
        assert_eq!(verify_min_distance(&c).unwrap(), 2);
        assert_eq!(verify_min_distance(&BinaryCode::from_words(3, vec![0, 7], 3).unwrap()).unwrap(), 3);
    }

    proptest! {
        #[test]
        fn equal_syndromes_are_four_apart(m in 4usize..=40, a in any::<u64>(), b in any::<u64>()) {
            let code = even_d4_linear(m).unwrap();
            let mask = length_mask(m);
            let (a, b) = (a & mask, b & mask);
            let sa = syndrome(&code, a).unwrap();
            let sb = syndrome(&code, b).unwrap();
            prop_assert_eq!(sa == sb, code.contains(a ^ b));
            if sa == sb && a != b {
                prop_assert!((a ^ b).count_ones() >= 4);
            }
        }

        #[test]
        fn syndrome_is_coset_invariant(m in 4usize..=40, v in any::<u64>(), coeffs in any::<u64>()) {
            let code = even_d4_linear(m).unwrap();
            let v = v & length_mask(m);
            let l = code.linear().unwrap();
            let c = gf2::combine(&l.basis, coeffs & ((1u64 << l.basis.len()) - 1));
            prop_assert_eq!(syndrome(&code, v).unwrap(), syndrome(&code, v ^ c).unwrap());
            if c != 0 {
                prop_assert!(c.count_ones().is_multiple_of(2) && c.count_ones() >= 4);
            }
        }
    }
}
