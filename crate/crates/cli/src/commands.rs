use std::path::Path;

use graphcode::bincode::{even_d4_linear, gv_greedy, hamming_code, verify_min_distance, BinaryCode, ScanOrder};
use graphcode::dualconstruct::{build_kcopy_blocker, build_kdisjoint_blocker, random_ktt_free, BlockerReport};
use graphcode::factorize::{is_prime, kotzig_p1f, restrict_to_n, search_p1f, verify_perfect, OneFactorization};
use graphcode::gridcode::{grid_graph, neighborhood_bound_check, search_grid_family, verify_grid_family, GridFamily, GridSpec};
use graphcode::oracle::oracle_report;
use graphcode::predicate::Predicate;
use graphcode::rates::{rates, Scenario};
use graphcode::treecode::{build_hamming_treecode, build_treecode, build_treecode_with_code, Coloring, GeneratorFile, TreeCodeParams, Variant};
use graphcode::{Error, PatternGraph, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::manifest::{read, Output};

const P1F_SEARCH_BUDGET: u64 = 1 << 30;
const CLIQUE_BUDGET: u64 = 1 << 34;

/// Result of one command, before the manifest is written.
pub struct Outcome {
    pub stem: String,
    pub parameters: Value,
    pub summary: Value,
    pub lines: Vec<String>,
    pub passed: usize,
    pub failed: usize,
}

impl Outcome {
    fn new(stem: impl Into<String>, parameters: Value) -> Self {
        Outcome { stem: stem.into(), parameters, summary: json!({}), lines: Vec::new(), passed: 0, failed: 0 }
    }

    fn check(&mut self, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

pub fn run(cmd: &Command, seed: Option<u64>, out: &mut Output) -> Result<Outcome> {
    match cmd {
        Command::P1f(a) => p1f(a, out),
        Command::Treecode(a) => treecode(a, seed, out),
        Command::VerifyTreecode(a) => verify_treecode(a, seed, out),
        Command::Blocker(a) => blocker(a, seed, out),
        Command::Oracle(a) => oracle(a, out),
        Command::Grid(a) => grid(a, seed, out),
        Command::Codes(a) => codes(a, seed, out),
        Command::Rates(a) => rate(a, out),
    }
}

fn p1f(a: &P1fArgs, out: &mut Output) -> Result<Outcome> {
    let f = match (a.p, a.order) {
        (Some(p), _) => kotzig_p1f(p)?,
        (None, Some(m)) => search_p1f(m, P1F_SEARCH_BUDGET)?
            .ok_or_else(|| Error::NotFound(format!("no perfect 1-factorization of K_{m} within the search budget")))?,
        (None, None) => return Err(Error::Usage("give --p or --order".into())),
    };
    let m = f.order();
    let mut o = Outcome::new(format!("p1f-K{m}"), json!({ "p": a.p, "order": a.order, "verify": a.verify }));
    let perfect = verify_perfect(&f);
    o.check(perfect.is_ok());
    o.lines.push(match &perfect {
        Ok(()) => format!("K_{m}: {} factors, all {} pair unions are Hamiltonian cycles", m - 1, (m - 1) * (m - 2) / 2),
        Err(d) => format!("K_{m}: not perfect: {d}"),
    });
    if a.verify && perfect.is_ok() {
        let r = restrict_to_n(&f);
        o.check(r.is_ok());
        o.lines.push(match &r {
            Ok(_) => format!("restriction to {} vertices: every pair union is a Hamiltonian path", m - 1),
            Err(e) => format!("restriction failed: {e}"),
        });
    }
    out.write(&format!("{}.json", o.stem), &f.to_json()?)?;
    o.summary = json!({ "order": m, "perfect": perfect.is_ok() });
    Ok(o)
}

/// A perfect 1-factorization of `K_{n+1}` and the prime it came from, if any.
fn factorization_for(n: usize) -> Result<(OneFactorization, Option<usize>)> {
    if is_prime(n) && n > 2 {
        return Ok((kotzig_p1f(n)?, Some(n)));
    }
    if n < 14 {
        if let Some(f) = search_p1f(n + 1, P1F_SEARCH_BUDGET)? {
            return Ok((f, None));
        }
    }
    Err(Error::NotFound(format!("no perfect 1-factorization of K_{} available (n must be prime or n + 1 <= 14)", n + 1)))
}

fn treecode(a: &TreecodeArgs, seed: Option<u64>, out: &mut Output) -> Result<Outcome> {
    let (params, stem, prime_p, h_file) = match a.variant {
        VariantArg::Hamming => {
            let k = a.k.ok_or_else(|| Error::Usage("the hamming variant needs --k".into()))?;
            let n = (1usize << k.min(6)) - 1;
            let (f, p) = factorization_for(n)?;
            (build_hamming_treecode(k, a.leaves, &f)?, format!("treecode-hamming-k{k}-l{}", a.leaves), p, None)
        }
        VariantArg::GvPartition => {
            let n = a.n.ok_or_else(|| Error::Usage("the gv-partition variant needs --n".into()))?;
            let (f, p) = factorization_for(n)?;
            let coloring = match a.coloring {
                ColoringArg::Syndrome => Coloring::Syndrome,
                ColoringArg::Greedy => Coloring::Greedy,
            };
            let stem = format!("treecode-n{n}-l{}", a.leaves);
            let params = match &a.h_code_file {
                Some(path) => build_treecode_with_code(n, a.leaves, &f, coloring, BinaryCode::from_json(&read(path)?)?)?,
                None => build_treecode(n, a.leaves, &f, coloring, seed)?,
            };
            let h_file = match params.h_code() {
                Some(code) => {
                    let name = format!("{stem}.hcode.json");
                    out.write(&name, &code.to_json()?)?;
                    Some(name)
                }
                None => None,
            };
            (params, stem, p, h_file)
        }
    };
    let g = params.generator(prime_p, h_file, seed);
    out.write(&format!("{stem}.gen.json"), &g.to_json()?)?;
    let mut o = Outcome::new(stem.clone(), serde_json::to_value(&g)?);
    o.lines.push(format!(
        "n = {}, {} leaves: family of size 2^{} ({} parts)",
        params.n(),
        params.leaves(),
        params.family_log2(),
        params.parts_needed()
    ));
    if a.roster {
        let members = params.roster()?;
        let text: Vec<String> = members.iter().map(|m| m.to_line()).collect();
        out.write(&format!("{stem}.roster.txt"), &text.join("\n"))?;
    }
    if let Some(samples) = a.samples {
        verify_sample(&params, samples, seed.unwrap_or(0), &stem, out, &mut o)?;
    }
    o.summary = json!({
        "n": params.n(),
        "leaves": params.leaves(),
        "family_log2": params.family_log2(),
        "parts": params.parts_needed(),
        "passed": o.passed,
        "failed": o.failed,
    });
    Ok(o)
}

#[derive(Serialize)]
struct CertificateEntry {
    first: String,
    second: String,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn verify_sample(params: &TreeCodeParams, samples: usize, seed: u64, stem: &str, out: &mut Output, o: &mut Outcome) -> Result<()> {
    let pairs = params.sample_pairs(samples, seed);
    let certs = params.certify_pairs(&pairs);
    let entries: Vec<CertificateEntry> = pairs
        .iter()
        .zip(&certs)
        .map(|(&(a, b), c)| CertificateEntry {
            first: format!("{a:#x}"),
            second: format!("{b:#x}"),
            ok: c.is_ok(),
            tree: c.as_ref().ok().map(|c| c.tree.to_line()),
            error: c.as_ref().err().map(|e| e.to_string()),
        })
        .collect();
    let report = TreeCodeParams::summarize(&pairs, certs);
    o.passed += report.passed;
    o.failed += report.failures.len();
    o.lines.push(format!("{}/{} certificates verified", report.passed, report.checked));
    for f in report.failures.iter().take(5) {
        o.lines.push(format!("  failed ({:#x}, {:#x}): {}", f.first, f.second, f.reason));
    }
    let log = json!({
        "format_version": graphcode::FORMAT_VERSION,
        "samples": samples,
        "seed": seed,
        "passed": report.passed,
        "failed": report.failures.len(),
        "certificates": entries,
    });
    out.write(&format!("{stem}.verify-s{seed}-{samples}.json"), &to_json(&log)?)?;
    Ok(())
}

fn verify_treecode(a: &VerifyTreecodeArgs, seed: Option<u64>, out: &mut Output) -> Result<Outcome> {
    let g = GeneratorFile::from_json(&read(&a.r#gen)?)?;
    let f = match g.prime_p {
        Some(p) if p != g.n => return Err(Error::Format(format!("prime_p {p} does not match n = {}", g.n))),
        Some(p) => kotzig_p1f(p)?,
        None => factorization_for(g.n)?.0,
    };
    let h_code = match (&g.h_code_file, g.variant) {
        (Some(name), Variant::GvPartition) => {
            let base = a.r#gen.parent().unwrap_or(Path::new("."));
            Some(BinaryCode::from_json(&read(&base.join(name))?)?)
        }
        _ => None,
    };
    let params = g.build(&f, h_code)?;
    let stem = a.r#gen.file_name().and_then(|s| s.to_str()).unwrap_or("treecode").trim_end_matches(".json").trim_end_matches(".gen").to_string();
    let seed = seed.unwrap_or(0);
    let mut o = Outcome::new(format!("{stem}.verify"), json!({ "gen": a.r#gen, "samples": a.samples }));
    verify_sample(&params, a.samples, seed, &stem, out, &mut o)?;
    o.summary = json!({ "samples": a.samples, "passed": o.passed, "failed": o.failed });
    Ok(o)
}

fn blocker(a: &BlockerArgs, seed: Option<u64>, out: &mut Output) -> Result<Outcome> {
    let l = PatternGraph::parse(&a.pattern)?;
    let (report, stem): (BlockerReport, String) = match a.predicate {
        BlockerKind::Kcopy => (build_kcopy_blocker(a.n, &l, a.k)?, format!("blocker-kcopy-n{}-k{}", a.n, a.k)),
        BlockerKind::Kdisjoint => (build_kdisjoint_blocker(a.n, &l, a.k)?, format!("blocker-kdisjoint-n{}-k{}", a.n, a.k)),
        BlockerKind::Ktt => (
            random_ktt_free(a.n, a.t, a.delta, seed.unwrap_or(0), a.retries)?,
            format!("blocker-ktt-n{}-t{}", a.n, a.t),
        ),
    };
    let mut o = Outcome::new(stem.clone(), json!({
        "predicate": format!("{:?}", a.predicate).to_lowercase(),
        "n": a.n, "pattern": a.pattern, "k": a.k, "t": a.t, "delta": a.delta, "retries": a.retries,
    }));
    o.check(report.verified);
    out.write(&format!("{stem}.json"), &report.to_json()?)?;
    out.write(&format!("{stem}.host.txt"), &report.host.to_line())?;
    o.lines.push(format!(
        "host with {} edges: log2 M <= C(n,2) - e(H) = {}; blocker property {}",
        report.edge_count,
        report.dual_log_bound,
        if report.verified { "verified" } else { "FAILS" }
    ));
    if let Some((d, bound)) = report.max_disjoint {
        o.lines.push(format!("max disjoint copies: {d} ({bound:?})"));
    }
    if let Some(s) = &report.random {
        o.lines.push(format!("retry {}: {} copies observed, E[X] = {:.6}", s.retry, s.copies_observed, s.expected_copies));
    }
    o.summary = serde_json::to_value(&report)?;
    Ok(o)
}

fn predicate_from(a: &OracleArgs) -> Result<Predicate> {
    let pattern = || PatternGraph::parse(&a.pattern);
    Ok(match a.predicate {
        PredicateKind::Connected => Predicate::Connected,
        PredicateKind::Contains => Predicate::ContainsPattern { pattern: pattern()? },
        PredicateKind::Kcopies => Predicate::KCopies { pattern: pattern()?, k: a.k },
        PredicateKind::Kdisjoint => Predicate::KDisjoint { pattern: pattern()?, k: a.k },
        PredicateKind::Leaves => Predicate::SpanningTreeLeaves { leaves: a.leaves },
        PredicateKind::Kst => Predicate::ContainsKst { s: a.s, t: a.t },
    })
}

fn oracle(a: &OracleArgs, out: &mut Output) -> Result<Outcome> {
    let p = predicate_from(a)?;
    let r = oracle_report(a.n, &p, CLIQUE_BUDGET)?;
    let stem = format!("oracle-{}-n{}", format!("{:?}", a.predicate).to_lowercase(), a.n);
    let mut o = Outcome::new(stem.clone(), json!({ "n": a.n, "predicate": p }));
    o.check(r.product_bound_holds() != Some(false));
    out.write(&format!("{stem}.json"), &r.to_json()?)?;
    o.lines.push(format!(
        "{p} on {} vertices: M = {}, D = {}, bad graphs = {}",
        a.n,
        r.m_exact,
        r.d_exact.map_or("-".into(), |d| d.to_string()),
        r.bad_count.map_or("-".into(), |b| b.to_string())
    ));
    o.summary = serde_json::to_value(&r)?;
    Ok(o)
}

fn grid(a: &GridArgs, seed: Option<u64>, out: &mut Output) -> Result<Outcome> {
    match &a.action {
        GridAction::Build { m, n } => {
            let g = grid_graph(*m, *n)?;
            let stem = format!("grid-{m}x{n}");
            out.write(&format!("{stem}.host.txt"), &g.to_line())?;
            let mut o = Outcome::new(stem, json!({ "m": m, "n": n }));
            o.lines.push(format!("torus grid {m}x{n}: {} vertices, {} edges", g.n(), g.edge_count()));
            o.summary = json!({ "vertices": g.n(), "edges": g.edge_count() });
            Ok(o)
        }
        GridAction::Search { m, n, dim, restarts } => {
            let spec = GridSpec::new(*m, *n)?;
            let fam = search_grid_family(spec, *dim, seed.unwrap_or(0), *restarts)?;
            let stem = format!("grid-{m}x{n}-d{dim}");
            out.write(&format!("{stem}.json"), &fam.to_json()?)?;
            let mut o = Outcome::new(stem, json!({ "m": m, "n": n, "dim": dim, "restarts": restarts }));
            grid_checks(&fam, 0, &mut o)?;
            Ok(o)
        }
        GridAction::Verify { file, probe } => {
            let fam = GridFamily::from_json(&read(file)?)?;
            let mut o = Outcome::new("grid-verify", json!({ "file": file, "probe": probe }));
            grid_checks(&fam, *probe, &mut o)?;
            Ok(o)
        }
    }
}

fn grid_checks(fam: &GridFamily, probe: usize, o: &mut Outcome) -> Result<()> {
    let v = verify_grid_family(fam);
    let b = neighborhood_bound_check(fam, probe)?;
    o.check(v.ok());
    o.check(b.ok());
    o.lines.push(format!(
        "{} members, {} pairwise differences checked, {} disconnected",
        fam.members.len(),
        v.pairs_checked,
        v.failures.len()
    ));
    o.lines.push(match &b.violation {
        None => format!("probe {probe}: all neighbour traces distinct (at most 16 members possible)"),
        Some(x) => format!("probe {probe}: bound violated: {x:?}"),
    });
    o.summary = json!({ "members": fam.members.len(), "pairs_checked": v.pairs_checked, "failures": v.failures, "bound": b });
    Ok(())
}

fn codes(a: &CodesArgs, seed: Option<u64>, out: &mut Output) -> Result<Outcome> {
    let (code, stem, shortfall) = match &a.kind {
        CodeKind::Gv { m, d, order, target } => {
            let order = match order {
                OrderArg::Lex => ScanOrder::Lexicographic,
                OrderArg::Random => ScanOrder::SeededRandom(seed.unwrap_or(0)),
            };
            let g = gv_greedy(*m, *d, order, *target)?;
            (g.code, format!("code-gv-m{m}-d{d}"), g.shortfall)
        }
        CodeKind::Hamming { k } => (hamming_code(*k)?, format!("code-hamming-k{k}"), None),
        CodeKind::Even { m } => (even_d4_linear(*m)?, format!("code-even-m{m}"), None),
    };
    let mut o = Outcome::new(stem.clone(), json!({ "code": format!("{:?}", a.kind) }));
    let distance = if code.word_count() >= 2 { Some(verify_min_distance(&code)?) } else { None };
    o.check(distance.is_none_or(|d| d >= code.distance_claim()));
    out.write(&format!("{stem}.json"), &code.to_json()?)?;
    o.lines.push(format!(
        "length {}, {} words, minimum distance {}",
        code.length(),
        code.word_count(),
        distance.map_or("-".into(), |d| d.to_string())
    ));
    if let Some(s) = shortfall {
        o.lines.push(format!("target missed by {s} words"));
    }
    o.summary = json!({ "length": code.length(), "words": code.word_count() as f64, "distance": distance, "shortfall": shortfall });
    Ok(o)
}

fn rate(a: &RatesArgs, out: &mut Output) -> Result<Outcome> {
    let l = PatternGraph::parse(&a.pattern)?;
    let scenario = match a.scenario {
        ScenarioArg::Contains => Scenario::ContainsPattern,
        ScenarioArg::Copies => Scenario::ManyCopies { c: a.c },
        ScenarioArg::Disjoint => Scenario::DisjointCopies { c: a.c },
        ScenarioArg::Biclique => Scenario::Biclique { c: a.c },
    };
    let r = rates(&l, scenario, None)?;
    let stem = format!("rates-{}", format!("{:?}", a.scenario).to_lowercase());
    out.write(&format!("{stem}.json"), &to_json(&r)?)?;
    let mut o = Outcome::new(stem, json!({ "pattern": a.pattern, "scenario": r.scenario }));
    o.lines.push(format!("{}: {:.6}", r.label, r.asymptotic_value));
    o.summary = serde_json::to_value(&r)?;
    Ok(o)
}
