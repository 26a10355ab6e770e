use std::fmt::Write as _;
use std::path::Path;

use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use ifam_core::compress::monotone_check;
use ifam_core::construct::{kkk_check, named_family, Construction};
use ifam_core::io::{parse_family_with, serialize_family, ParseOptions};
use ifam_core::layer2::{
    bound_sweep, crossover_csv, crossover_table, max_p2, quasi_graph, Layer2Graph, QuasiKind,
};
use ifam_core::probability::{mc_estimate, parse_rational, probability_eval, ProbabilityResult};
use ifam_core::profile::intersecting_profile;
use ifam_core::report::format_rational;
use ifam_core::search::{exhaustive_max_multi, Restriction, SearchOptions};
use ifam_core::verify::{run_suite, Suite, VerifyParams};
use ifam_core::{apply_compression, CompressionDescriptor, SetFamily};

use crate::Outcome;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn ok(report: Value, text: String) -> Result<Outcome, String> {
    Ok(Outcome { report, text, ok: true })
}

fn read_family(path: &Path, allow_empty: bool) -> Result<SetFamily, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_family_with(&text, ParseOptions { allow_empty }).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn profile(path: &Path, allow_empty: bool, s: Option<usize>) -> Result<Outcome, String> {
    let family = read_family(path, allow_empty)?;
    let profile = intersecting_profile(&family).map_err(|e| e.to_string())?;
    match s {
        Some(s) => {
            let c = profile.get(s);
            ok(
                json!({ "n": profile.n, "N": profile.size, "s": s, "count": c.to_string() }),
                format!("c_{s} = {c}\n"),
            )
        }
        None => {
            let mut text = format!("n = {}, N = {}\n", profile.n, profile.size);
            for (s, c) in profile.counts.iter().enumerate() {
                let _ = writeln!(text, "c_{s} = {c}");
            }
            ok(to_value(&profile), text)
        }
    }
}

pub fn prob(path: &Path, allow_empty: bool, p: &str, mc: Option<u64>, seed: u64) -> Result<Outcome, String> {
    let family = read_family(path, allow_empty)?;
    let p = parse_rational(p).map_err(|e| e.to_string())?;
    let result = match mc {
        Some(trials) => {
            let pf = p.to_f64().ok_or_else(|| format!("p = {p} is not representable"))?;
            mc_estimate(&family, pf, trials, seed)
        }
        None => probability_eval(&family, &p),
    }
    .map_err(|e| e.to_string())?;
    let text = match &result {
        ProbabilityResult::Exact { exact, .. } => {
            format!("P = {} ~ {:.12}\n", format_rational(exact), exact.to_f64().unwrap_or(f64::NAN))
        }
        ProbabilityResult::Estimate { estimate, stderr, trials, seed, .. } => {
            format!("P ~ {estimate:.6} +- {stderr:.6} ({trials} trials, seed {seed})\n")
        }
    };
    ok(to_value(&result), text)
}

pub fn compress(path: &Path, allow_empty: bool, op: &str, check: bool) -> Result<Outcome, String> {
    let family = read_family(path, allow_empty)?;
    let c: CompressionDescriptor = op.parse().map_err(|e: ifam_core::CompressionError| e.to_string())?;
    let after = apply_compression(&family, &c).map_err(|e| e.to_string())?;
    let mut report = json!({ "descriptor": c.to_string(), "family": after });
    let mut text = serialize_family(&after);
    let mut passed = true;
    if check {
        let mono = monotone_check(&family, &c, 0..=family.len()).map_err(|e| e.to_string())?;
        for d in &mono.deltas {
            let _ = writeln!(text, "# c_{}: {} -> {} ({:+})", d.s, d.before, d.after, d.delta);
        }
        if mono.falsified {
            text.push_str("# FALSIFICATION: some c_s decreased\n");
        }
        passed = !mono.falsified;
        report["monotone"] = to_value(&mono);
    }
    Ok(Outcome { report, text, ok: passed })
}

pub fn search(n: u32, size: usize, s_list: &[usize], restrict: &str, budget: u64) -> Result<Outcome, String> {
    let restriction: Restriction = restrict.parse()?;
    if budget == 0 {
        return Err("--budget must be positive".into());
    }
    let opts = SearchOptions { budget, ..SearchOptions::default() };
    let reports = exhaustive_max_multi(n, size, s_list, restriction, &opts).map_err(|e| e.to_string())?;
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(
            text,
            "n = {}, N = {}, s = {}: max c_s = {} ({} optima, {} scanned, restriction {})",
            r.n,
            r.size,
            r.s,
            r.max_count,
            r.optima.len(),
            r.families_scanned,
            r.restriction
        );
        if let Some(note) = &r.note {
            let _ = writeln!(text, "# {note}");
        }
        for (k, f) in r.optima.iter().enumerate() {
            let _ = writeln!(text, "# optimum {}", k + 1);
            text.push_str(&serialize_family(f));
        }
    }
    let report = if reports.len() == 1 { to_value(&reports[0]) } else { to_value(&reports) };
    ok(report, text)
}

pub enum Layer2Mode<'a> {
    Quasi { i: usize, kind: &'a str },
    Census(&'a Path),
    Max(usize),
    Crossover,
    /// Sweep up to and including this ground size.
    Bound(u32),
}

fn graph_text(g: &Layer2Graph) -> String {
    let census = g.census();
    let a: Vec<String> = census.a.iter().map(ToString::to_string).collect();
    format!(
        "edges = {}, p2 = {}, degrees = {:?}\nstars a_r = [{}], triangles b = {}\n",
        g.edges().len(),
        g.p2_count(),
        g.degrees(),
        a.join(", "),
        census.b
    )
}

fn graph_report(g: &Layer2Graph) -> Value {
    json!({
        "graph": g,
        "family": g.to_family(),
        "p2": g.p2_count(),
        "census": g.census(),
    })
}

pub fn layer2(n: u32, mode: Layer2Mode<'_>) -> Result<Outcome, String> {
    match mode {
        Layer2Mode::Quasi { i, kind } => {
            let kind: QuasiKind = kind.parse()?;
            let g = quasi_graph(n, i, kind).map_err(|e| e.to_string())?;
            let mut text = graph_text(&g);
            text.push_str(&serialize_family(&g.to_family()));
            let mut report = graph_report(&g);
            report["kind"] = json!(kind.to_string());
            ok(report, text)
        }
        Layer2Mode::Census(path) => {
            let family = read_family(path, false)?;
            if family.n() != n {
                return Err(format!("{} is over [{}], not [{n}]", path.display(), family.n()));
            }
            let g = Layer2Graph::from_family(&family.layer_part(2)).map_err(|e| e.to_string())?;
            ok(graph_report(&g), graph_text(&g))
        }
        Layer2Mode::Max(i) => {
            let m = max_p2(n, i).map_err(|e| e.to_string())?;
            let mut text =
                format!("n = {n}, i = {i}: max p2 = {} ({} optima, {} scanned)\n", m.value, m.optima.len(), m.scanned);
            for (k, f) in m.optima.iter().enumerate() {
                let _ = writeln!(text, "# optimum {}", k + 1);
                text.push_str(&serialize_family(f));
            }
            ok(to_value(&m), text)
        }
        Layer2Mode::Crossover => {
            let rows = crossover_table(n).map_err(|e| e.to_string())?;
            ok(json!({ "n": n, "rows": rows }), crossover_csv(&rows))
        }
        Layer2Mode::Bound(to) => {
            if n < 4 || to < n {
                return Err(format!("bound needs 4 <= n <= M, got n = {n}, M = {to}"));
            }
            let rows = bound_sweep(n..=to);
            let one = num_rational::BigRational::one();
            let mut text = String::from("n,value,approx,below_one\n");
            let mut values = Vec::new();
            for (k, v) in &rows {
                let approx = v.to_f64().unwrap_or(f64::NAN);
                let _ = writeln!(text, "{k},{},{approx:.6},{}", format_rational(v), *v < one);
                values.push(json!({ "n": k, "value": format_rational(v), "approx": approx, "below_one": *v < one }));
            }
            ok(json!({ "rows": values }), text)
        }
    }
}

pub fn construct(name: &str, n: u32, size: Option<u128>) -> Result<Outcome, String> {
    let name: Construction = name.parse().map_err(|e: ifam_core::construct::ConstructError| e.to_string())?;
    let family = named_family(name, n, size).map_err(|e| e.to_string())?;
    let mut report = json!({ "name": name.name(), "n": n, "N": family.len(), "family": family });
    if n <= 30 {
        report["complementary_pairs"] = to_value(&kkk_check(&family));
    }
    ok(report, serialize_family(&family))
}

pub fn verify(
    suite: &str,
    n: u32,
    s_list: &[usize],
    ell: Option<u32>,
    r: Option<u32>,
    trials: usize,
    seed: u64,
) -> Result<Outcome, String> {
    let suite: Suite = suite.parse()?;
    let params = VerifyParams { n, s_list: s_list.to_vec(), ell, r, trials, seed };
    let report = run_suite(suite, &params).map_err(|e| e.to_string())?;
    let passed = report.cells.iter().filter(|c| c.status == ifam_core::verify::Status::Pass).count();
    let mut text = format!(
        "suite {} at n = {n}: {} ({passed}/{} cells pass)\n",
        report.suite,
        report.overall,
        report.cells.len()
    );
    for c in report.cells.iter().filter(|c| c.status != ifam_core::verify::Status::Pass) {
        let _ = writeln!(text, "FAIL {}", c.params);
    }
    Ok(Outcome { report: to_value(&report), text, ok: report.passed() })
}
