//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use graphcode::bincode::{gv_greedy, ScanOrder};
use graphcode::dualconstruct::{
    build_kcopy_blocker, build_kdisjoint_blocker, drc_embed, gnp, random_ktt_free, turan_ex_bruteforce,
    BipartitePattern, DrcParams,
};
use graphcode::factorize::{kotzig_p1f, restrict_to_n, verify_perfect};
use graphcode::graphcore::{contains_kst, pair_count, LabeledGraph, PatternGraph};
use graphcode::gridcode::{neighborhood_bound_check, search_grid_family, GridSpec};
use graphcode::oracle::{exact_df, exact_mf};
use graphcode::predicate::Predicate;
use graphcode::rng::substream;
use graphcode::treecode::{augment_to_leaves_traced, build_hamming_treecode, build_treecode, Coloring, TreeCodeParams};
use graphcode::Error;
use rand::seq::SliceRandom;
use rand::Rng;
use sha2::{Digest, Sha256};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn adjacency(g: &LabeledGraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.n()];
    for (u, v) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// Walks the unique cycle through vertex 0 and counts its length.
fn hamiltonian_cycle(g: &LabeledGraph) -> bool {
    let adj = adjacency(g);
    if adj.iter().any(|a| a.len() != 2) {
        return false;
    }
    let (mut prev, mut cur, mut len) = (0, adj[0][0], 1);
    while cur != 0 {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
        len += 1;
    }
    len == g.n()
}

/// Spanning tree check by DFS; returns the leaf count.
fn tree_leaves(t: &LabeledGraph) -> Option<usize> {
    let n = t.n();
    if t.edge_count() + 1 != n {
        return None;
    }
    let adj = adjacency(t);
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    (reached == n).then(|| adj.iter().filter(|a| a.len() == 1).count())
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, format!("took {elapsed:.1?}, limit {limit:?}"))
}

fn c1() -> Check {
    let start = Instant::now();
    let primes = [3, 5, 7, 11, 13, 19, 23, 31, 37, 43, 53, 61];
    let mut unions = 0;
    for p in primes {
        let f = kotzig_p1f(p).map_err(|e| e.to_string())?;
        verify_perfect(&f).map_err(|d| format!("p={p}: {d}"))?;
        let fs = f.factors();
        ensure(fs.len() == p, format!("p={p}: {} factors", fs.len()))?;
        for a in 0..p {
            for b in a + 1..p {
                ensure(hamiltonian_cycle(&fs[a].union(&fs[b]).unwrap()), format!("p={p}: F{a} + F{b} is not a Hamiltonian cycle"))?;
                unions += 1;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("{} primes, {unions} pair unions are Hamiltonian cycles", primes.len()))
}

fn c2() -> Check {
    let f = kotzig_p1f(37).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let r = restrict_to_n(&f).map_err(|e| e.to_string())?;
    let mut paths = 0;
    for a in 0..37 {
        for b in a + 1..37 {
            let u = r.matching(a).union(r.matching(b)).unwrap();
            ensure(u.n() == 37 && tree_leaves(&u) == Some(2), format!("M{a} + M{b} is not a Hamiltonian path"))?;
            paths += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    ensure(paths == 666, format!("{paths} unions"))?;
    Ok("666/666 restricted unions are Hamiltonian paths on 37 vertices".into())
}

fn check_pairs(p: &TreeCodeParams, pairs: &[(u64, u64)], leaves: usize) -> Result<usize, String> {
    let certs = p.certify_pairs(pairs);
    let mut ok = 0;
    for (&(a, b), c) in pairs.iter().zip(certs) {
        let c = c.map_err(|e| e.to_string())?;
        let d = p.member(a).unwrap().symdiff(&p.member(b).unwrap()).unwrap();
        ensure(c.tree.is_subgraph_of(&d), format!("tree not inside XOR for ({a:#x}, {b:#x})"))?;
        ensure(tree_leaves(&c.tree) == Some(leaves), format!("wrong tree for ({a:#x}, {b:#x})"))?;
        ok += 1;
    }
    Ok(ok)
}

fn c3() -> Check {
    let start = Instant::now();
    let f = kotzig_p1f(37).map_err(|e| e.to_string())?;
    let p = build_treecode(37, 3, &f, Coloring::Syndrome, None).map_err(|e| e.to_string())?;
    let gv = gv_greedy(18, 4, ScanOrder::Lexicographic, None).unwrap().code.word_count();
    ensure(p.parts_needed() <= 128 && 128 <= gv && gv >= 266, format!("parts {} gv {gv}", p.parts_needed()))?;
    ensure(p.family_log2() == 35 && p.family_size() == 1 << 35, "family size is not 2^35")?;
    let ok = check_pairs(&p, &p.sample_pairs(500, 2026), 3)?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{} parts, {gv} GV words, family 2^35, {ok}/500 certificates", p.parts_needed()))
}

fn c4() -> Check {
    let start = Instant::now();
    let f = kotzig_p1f(31).map_err(|e| e.to_string())?;
    let p = build_hamming_treecode(5, 6, &f).map_err(|e| e.to_string())?;
    ensure(p.family_size() == 1 << 25, "family size is not 2^25")?;
    let ok = check_pairs(&p, &p.sample_pairs(500, 2026), 6)?;
    let rejected = matches!(build_hamming_treecode(5, 7, &f), Err(Error::Usage(_)));
    ensure(rejected, "leaf target 7 was accepted")?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("family 2^25, {ok}/500 six-leaf certificates, leaf target 7 rejected"))
}

fn c5() -> Check {
    let start = Instant::now();
    let mut rng = substream(55, 0);
    let mut instances = 0;
    while instances < 10_000 {
        let n = rng.gen_range(4..=51);
        let mut path: Vec<usize> = (0..n).collect();
        path.shuffle(&mut rng);
        let mut pos = vec![0; n];
        for (i, &v) in path.iter().enumerate() {
            pos[v] = i;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let want = rng.gen_range(0..=n / 2);
        let mut free = vec![true; n];
        let mut extra = Vec::new();
        for &u in &order {
            if extra.len() == want || !free[u] {
                continue;
            }
            if let Some(&v) = order.iter().find(|&&v| v != u && free[v] && pos[u].abs_diff(pos[v]) > 1) {
                free[u] = false;
                free[v] = false;
                extra.push((u, v));
            }
        }
        let max_leaves = (extra.len() + 5) / 3;
        if max_leaves < 2 {
            continue;
        }
        let leaves = rng.gen_range(2..=max_leaves);
        let (t, trace) = augment_to_leaves_traced(&path, &extra, leaves).map_err(|e| format!("n={n}, leaves={leaves}: {e}"))?;
        ensure(trace.rounds.iter().all(|r| r.extra_consumed <= 3), "a round consumed more than 3 chords")?;
        ensure(tree_leaves(&t) == Some(leaves), format!("n={n}: expected {leaves} leaves"))?;
        instances += 1;
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok("10000 instances, exact leaf counts, round invariants held".into())
}

fn c6() -> Check {
    let start = Instant::now();
    let spec = GridSpec::new(3, 3).unwrap();
    let fam = search_grid_family(spec, 4, 6, 4096).map_err(|e| e.to_string())?;
    ensure(fam.members.len() == 16, "family is not 16 members")?;
    let mut pairs = 0;
    for i in 0..16 {
        for j in i + 1..16 {
            let d = fam.members[i].symdiff(&fam.members[j]).unwrap();
            let adj = adjacency(&d);
            let mut seen = [false; 9];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !std::mem::replace(&mut seen[w], true) {
                        stack.push(w);
                    }
                }
            }
            ensure(seen.iter().all(|&s| s), format!("members {i}, {j}: disconnected difference"))?;
            pairs += 1;
        }
    }
    let check = neighborhood_bound_check(&fam, 0).map_err(|e| e.to_string())?;
    ensure(check.ok(), "bound check failed on the found family")?;
    let mut traces = check.traces.clone();
    traces.sort_unstable();
    ensure(traces == (0..16).collect::<Vec<u8>>(), "traces do not exhaust the 16 subsets")?;
    within(start.elapsed(), Duration::from_secs(600))?;
    Ok(format!("16 members, {pairs}/120 connected differences, all 16 probe traces used so no 17th member fits"))
}

fn c7() -> Check {
    let start = Instant::now();
    const B: u64 = 1 << 30;
    for n in 2..=4 {
        let m = exact_mf(n, &Predicate::Connected, B).map_err(|e| e.to_string())?.size;
        ensure(m == 1 << (n - 1), format!("M(connected, {n}) = {m}"))?;
    }
    let suite = [
        Predicate::Connected,
        Predicate::ContainsPattern { pattern: PatternGraph::complete(3) },
        Predicate::KCopies { pattern: PatternGraph::complete(2), k: 3 },
        Predicate::KDisjoint { pattern: PatternGraph::complete(2), k: 2 },
        Predicate::SpanningTreeLeaves { leaves: 2 },
        Predicate::ContainsKst { s: 1, t: 2 },
    ];
    let mut checked = 0;
    for p in &suite {
        for n in 2..=4 {
            let m = exact_mf(n, p, B).map_err(|e| e.to_string())?.size as u128;
            let d = exact_df(n, p, B).map_err(|e| e.to_string())?.size as u128;
            ensure(m * d <= 1 << pair_count(n), format!("{p} n={n}: {m} * {d}"))?;
            checked += 1;
        }
    }
    let m3 = exact_mf(3, &Predicate::Connected, B).unwrap().size;
    let d3 = exact_df(3, &Predicate::Connected, B).unwrap().size;
    ensure(m3 * d3 == 8, "no equality at n=3")?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("M = 2^(n-1) for n = 2..4; M*D bound on {checked} cases; 4*2 = 8 at n=3"))
}

fn c8() -> Check {
    let start = Instant::now();
    let big = gv_greedy(18, 4, ScanOrder::Lexicographic, None).unwrap().code.word_count();
    ensure(big >= 266, format!("gv(18,4) = {big}"))?;
    let small = gv_greedy(4, 3, ScanOrder::Lexicographic, None).unwrap().code.word_count();
    // Exhaustive A(4,3): largest subset of {0,1}^4 with pairwise distance >= 3.
    let mut best = 0;
    for set in 0u32..1 << 16 {
        let words: Vec<u32> = (0..16).filter(|w| set >> w & 1 == 1).collect();
        if words.len() > best && words.iter().enumerate().all(|(i, a)| words[i + 1..].iter().all(|b| (a ^ b).count_ones() >= 3)) {
            best = words.len();
        }
    }
    ensure(small == 2 && best == 2, format!("gv(4,3) = {small}, A(4,3) = {best}"))?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("gv(18,4) = {big} >= 266; gv(4,3) = A(4,3) = 2"))
}

fn c9() -> Check {
    let start = Instant::now();
    let k3 = PatternGraph::complete(3);
    let ex7 = turan_ex_bruteforce(7, &k3).map_err(|e| e.to_string())?;
    let r = build_kdisjoint_blocker(8, &k3, 2).map_err(|e| e.to_string())?;
    ensure(ex7 == 12 && r.edge_count == 7 + ex7 && r.edge_count == 19, format!("{} edges, ex(7,K3) = {ex7}", r.edge_count))?;
    let h = &r.host;
    let mut triangles = Vec::new();
    for a in 0..8 {
        for b in a + 1..8 {
            for c in b + 1..8 {
                if h.has_edge(a, b) && h.has_edge(b, c) && h.has_edge(a, c) {
                    triangles.push((1u32 << a) | (1 << b) | (1 << c));
                }
            }
        }
    }
    let two_disjoint = triangles.iter().any(|x| triangles.iter().any(|y| x & y == 0));
    ensure(!triangles.is_empty() && !two_disjoint, "max disjoint triangles is not 1")?;
    ensure(r.dual_log_bound == 28 - 19, "kdisjoint dual bound")?;
    let ex6 = turan_ex_bruteforce(6, &k3).map_err(|e| e.to_string())?;
    let c = build_kcopy_blocker(6, &k3, 1).map_err(|e| e.to_string())?;
    ensure(ex6 == 9 && c.edge_count == 9 && c.dual_log_bound == 6, format!("kcopy {} edges", c.edge_count))?;
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok("kdisjoint 0 + 7 + 12 = 19 edges, 1 disjoint triangle; kcopy 9 = ex(6,K3); bounds 9 and 6".into())
}

fn c10() -> Check {
    let start = Instant::now();
    let r = random_ktt_free(64, 3, 0.125, 10, 20).map_err(|e| e.to_string())?;
    let s = r.random.clone().ok_or("no statistics")?;
    ensure(!contains_kst(&r.host, 3, 3).unwrap(), "result contains K_{3,3}")?;
    let floor = 0.125 * 2016.0 - s.copies_observed as f64;
    ensure(r.edge_count as f64 >= floor, format!("{} edges below {floor}", r.edge_count))?;
    let binom = |n: u64, k: u64| (0..k).fold(1.0f64, |a, i| a * (n - i) as f64 / (i + 1) as f64);
    let closed = 0.5 * binom(64, 6) * binom(6, 3) * 0.125f64.powi(9);
    ensure((s.expected_copies - closed).abs() <= 1e-9 * closed, format!("E[X] = {} vs {closed}", s.expected_copies))?;
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!("retry {}: {} edges >= {floor:.1}, K_(3,3)-free, E[X] = {closed:.6}", s.retry, r.edge_count))
}

fn c11() -> Check {
    let start = Instant::now();
    let g = gnp(2000, 0.5, &mut substream(11, 0));
    let pattern = BipartitePattern::path(20).unwrap();
    let params = DrcParams { alpha: 0.49, t: 2, r: 2, m: 20, u: 10, epsilon: 0.5 };
    let e = drc_embed(&g, &pattern, &params, 11, 10).map_err(|e| e.to_string())?;
    for &(x, y) in &pattern.edges {
        ensure(g.has_edge(e.phi[x], e.phi[pattern.a + y]), "pattern edge maps to a non-edge")?;
    }
    let mut img = e.phi.clone();
    img.sort_unstable();
    img.dedup();
    ensure(img.len() == 20, "embedding is not injective")?;
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!("20-vertex pattern embedded on retry {} (pruned set {})", e.retry, e.pruned_set_size))
}

fn artifact_hashes(dir: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        if name.ends_with(".manifest.json") {
            continue;
        }
        let digest = Sha256::digest(std::fs::read(&path).unwrap());
        out.insert(name, digest.iter().map(|b| format!("{b:02x}")).collect());
    }
    out
}

fn c12() -> Check {
    let bin = env!("CARGO_BIN_EXE_graphcode");
    let runs: Vec<Vec<&str>> = vec![
        vec!["p1f", "--p", "37", "--verify"],
        vec!["treecode", "--n", "37", "-l", "3", "--samples", "500"],
        vec!["treecode", "--variant", "hamming", "--k", "5", "-l", "6", "--samples", "500"],
        vec!["codes", "gv", "--m", "18", "--d", "4", "--order", "random"],
        vec!["oracle", "--n", "4", "--predicate", "connected"],
        vec!["grid", "search", "--m", "3", "--n", "3", "--dim", "4"],
        vec!["blocker", "--predicate", "kdisjoint", "--n", "8", "--k", "2"],
        vec!["blocker", "--predicate", "kcopy", "--n", "6", "--k", "1"],
        vec!["blocker", "--predicate", "ktt", "--n", "64", "--t", "3", "--delta", "0.125"],
        vec!["rates", "--scenario", "biclique", "--c", "2"],
    ];
    let mut hashes = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        for args in &runs {
            let status = Command::new(bin).args(["--seed", "7", "--out"]).arg(dir.path()).args(args).output().unwrap();
            ensure(status.status.success(), format!("{args:?} exited with {:?}", status.status.code()))?;
        }
        let gen = dir.path().join("treecode-n37-l3.gen.json");
        let status = Command::new(bin)
            .args(["--seed", "7", "--out"])
            .arg(dir.path())
            .args(["verify-treecode", "--samples", "500", "--gen"])
            .arg(&gen)
            .output()
            .unwrap();
        ensure(status.status.success(), "verify-treecode failed")?;
        hashes.push(artifact_hashes(dir.path()));
    }
    ensure(hashes[0] == hashes[1], "artifact hashes differ between runs")?;
    Ok(format!("{} artifacts byte-identical across two seeded runs", hashes[0].len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("perfect 1-factorizations for 12 primes", c1),
        ("restricted matchings give Hamiltonian paths (p = 37)", c2),
        ("partitioned tree code, n = 37, 3 leaves", c3),
        ("Hamming tree code, n = 31, 6 leaves", c4),
        ("augmentation micro-suite", c5),
        ("16-member grid family on G(3,3)", c6),
        ("oracle closed form and M*D bound", c7),
        ("greedy code sizes", c8),
        ("blocker constructions", c9),
        ("random K(3,3)-free deletion", c10),
        ("dependent random choice embedding", c11),
        ("deterministic artifacts", c12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
