//! Subcommand bodies. Each builds a text report and a structured report and
//! hands the selected one to [`Output`].

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use modkernel::kernel::{self, KernelTest};
use modkernel::report::{self, RowStatus, VerifyConfig};
use modkernel::{format, galois, lambda, ModularData, SL2NMatrix};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::render::{self, int, rational};
use crate::{Format, Source, SweepArgs};

/// Improved conductor bounds quoted for small `r`.
const PUBLISHED_IMPROVED_BOUND: &[(u64, u64)] = &[(2, 240), (3, 5040), (4, 10080), (5, 1_441_440)];

pub struct Output {
    format: Format,
    path: Option<PathBuf>,
}

impl Output {
    pub fn new(format: Format, path: Option<PathBuf>) -> Self {
        Output { format, path }
    }

    fn emit(&self, command: &str, text: &str, body: Value) -> Result<()> {
        let s = match self.format {
            Format::Text => text.to_string(),
            Format::Json => render::to_string(&render::envelope(command, body)),
        };
        match &self.path {
            Some(p) => std::fs::write(p, s).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{s}");
                Ok(())
            }
        }
    }
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn header(md: &ModularData, source: &Source) -> (String, Value) {
    let text = format!(
        "source: {}\nprimaries: {}\nN = {}  N0 = {}  e = N/N0 = {}\ncentral charge c = {}\n",
        source.describe(),
        md.dim(),
        md.order_of_t(),
        md.n_zero(),
        md.ratio_e(),
        md.central_charge()
    );
    let body = json!({
        "source": source.describe(),
        "primaries": int(md.dim()),
        "conductor": int(md.order_of_t()),
        "n0": int(md.n_zero()),
        "ratio": int(md.ratio_e()),
        "central_charge": rational(md.central_charge()),
    });
    (text, body)
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Some(x), Value::Object(y)) = (a.as_object_mut(), b) {
        x.extend(y);
    }
    a
}

pub fn analyze(out: &Output, source: &Source, save: Option<&Path>) -> Result<ExitCode> {
    let md = source.load()?;
    let (mut text, head) = header(&md, source);

    text.push_str("primaries and twists:\n");
    let mut primaries = Vec::new();
    for (label, t) in md.labels().iter().zip(md.t_exponents()) {
        let _ = writeln!(text, "  {:>3}  {:<10} t = {}", label.index, label.name, t);
        primaries.push(json!({ "label": label.name, "t": rational(t) }));
    }

    text.push_str("S matrix:\n");
    let s_rows: Vec<Value> = md
        .s()
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            for (j, x) in row.iter().enumerate() {
                let _ = writeln!(text, "  S[{i}][{j}] = {x}");
            }
            Value::Array(row.iter().map(|x| Value::String(x.to_string())).collect())
        })
        .collect();

    let axioms = md.axiom_report();
    let axioms_ok = axioms.iter().all(|(_, r)| r.is_ok());
    text.push_str("axioms:\n");
    let mut axiom_json = Vec::new();
    for (axiom, r) in &axioms {
        match r {
            Ok(()) => {
                let _ = writeln!(text, "  {axiom}: ok");
                axiom_json.push(json!({ "axiom": axiom.to_string(), "ok": true }));
            }
            Err(e) => {
                let _ = writeln!(text, "  {axiom}: FAILED ({e})");
                axiom_json.push(json!({ "axiom": axiom.to_string(), "ok": false, "error": e.to_string() }));
            }
        }
    }

    let fusion_json = match md.fusion() {
        Ok(f) => {
            text.push_str("fusion (nonzero N_pqr, p <= q <= r):\n");
            let mut entries = Vec::new();
            for p in 0..f.dim() {
                for q in p..f.dim() {
                    for r in q..f.dim() {
                        let v = f.get(p, q, r);
                        if v != 0 {
                            let _ = writeln!(text, "  N[{p}][{q}][{r}] = {v}");
                            entries.push(json!([int(p), int(q), int(r), int(v)]));
                        }
                    }
                }
            }
            Value::Array(entries)
        }
        Err(_) => Value::Null,
    };
    let _ = writeln!(text, "result: {}", if axioms_ok { "valid" } else { "INVALID" });

    if let Some(path) = save {
        format::save(&md, path).with_context(|| format!("saving {}", path.display()))?;
    }
    let body = merge(
        head,
        json!({
            "twists": primaries,
            "s_matrix": s_rows,
            "axioms": axiom_json,
            "fusion": fusion_json,
            "valid": axioms_ok,
        }),
    );
    out.emit("analyze", &text, body)?;
    Ok(status(axioms_ok))
}

pub fn galois(out: &Output, source: &Source) -> Result<ExitCode> {
    let md = source.load()?;
    md.validate()?;
    let (mut text, head) = header(&md, source);
    let rows = galois::galois_table(&md)?;
    let ok = rows.iter().all(|r| r.gtcom);
    text.push_str("l    G_l (cycles, signs)                    gtcom\n");
    let mut rows_json = Vec::new();
    for r in &rows {
        let signs: String = r.g.signs().iter().map(|&s| if s < 0 { '-' } else { '+' }).collect();
        let _ = writeln!(
            text,
            "{:<4} {:<28} {:<12} {}",
            r.l,
            r.g.cycles(),
            signs,
            if r.gtcom { "ok" } else { "FAILED" }
        );
        rows_json.push(json!({
            "l": int(r.l),
            "permutation": r.g.perm().iter().map(int).collect::<Vec<_>>(),
            "signs": r.g.signs().iter().map(int).collect::<Vec<_>>(),
            "cycles": r.g.cycles(),
            "gtcom": r.gtcom,
        }));
    }
    out.emit("galois", &text, merge(head, json!({ "rows": rows_json, "all_pass": ok })))?;
    Ok(status(ok))
}

fn tally_lines(text: &mut String, name: &str, passed: usize, failed: usize, witness: Option<&String>) -> Value {
    let mark = if failed == 0 { "PASS" } else { "FAIL" };
    let _ = write!(text, "  {mark} {name:<28} passed {passed:>6}  failed {failed:>6}");
    if let Some(w) = witness {
        let _ = write!(text, "  witness: {w}");
    }
    text.push('\n');
    json!({
        "name": name,
        "passed": int(passed),
        "failed": int(failed),
        "witness": witness,
    })
}

pub fn lambda_check(out: &Output, source: &Source, sweep: &SweepArgs) -> Result<ExitCode> {
    let md = source.load()?;
    md.validate()?;
    let (mut text, head) = header(&md, source);
    let tallies = lambda::lemma_suite(&md, &sweep.config());
    let ok = tallies.iter().all(|t| t.all_passed());
    text.push_str("identities:\n");
    let rows: Vec<Value> = tallies
        .iter()
        .map(|t| tally_lines(&mut text, t.name, t.passed, t.failed, t.witness.as_ref()))
        .collect();
    out.emit("lambda-check", &text, merge(head, json!({ "identities": rows, "all_pass": ok })))?;
    Ok(status(ok))
}

pub fn kernel(
    out: &Output,
    source: &Source,
    budget: u128,
    emit_generators: bool,
    json_path: Option<&Path>,
    test_matrix: &[String],
) -> Result<ExitCode> {
    let md = source.load()?;
    md.validate()?;
    let n = md.order_of_t();
    let tests = test_matrix
        .iter()
        .map(|s| SL2NMatrix::parse(s, n).with_context(|| format!("parsing --test-matrix {s:?}")))
        .collect::<Result<Vec<_>>>()?;
    let (mut text, head) = header(&md, source);
    let report = kernel::kernel_image(&md, budget)?;
    let _ = writeln!(text, "|SL(2, Z/{n})| = {}", modkernel::sl2::sl2n_order(n));
    let _ = writeln!(text, "index |mu_N(K)| = {}", report.order);
    let _ = writeln!(text, "center: {}", report.center.describe());
    let _ = writeln!(text, "derived subgroup: {}", report.derived.describe());
    let _ = writeln!(text, "generators needed: {}", report.generators.len());
    if emit_generators {
        for g in &report.generators {
            let _ = writeln!(text, "  {g}");
        }
    }
    let test = KernelTest::new(&md)?;
    let mut membership = Vec::new();
    for m in &tests {
        let inside = test.contains(m);
        let _ = writeln!(text, "{m} in kernel: {inside}");
        membership.push(json!({ "matrix": render::matrix(m), "in_kernel": inside }));
    }
    let _ = writeln!(text, "time: {:.3} s", report.seconds);

    let body = merge(
        head,
        json!({
            "group_order": int(modkernel::sl2::sl2n_order(n)),
            "index": int(report.order),
            "center": render::structure(&report.center),
            "derived": render::structure(&report.derived),
            "generators": report.generators.iter().map(render::matrix).collect::<Vec<_>>(),
            "membership": membership,
        }),
    );
    if let Some(path) = json_path {
        let s = render::to_string(&render::envelope("kernel", body.clone()));
        std::fs::write(path, s).with_context(|| format!("writing {}", path.display()))?;
    }
    out.emit("kernel", &text, body)?;
    Ok(ExitCode::SUCCESS)
}

pub fn table(out: &Output, models: Option<Vec<(u64, u64)>>, budget: u128, sweep: Option<u64>) -> Result<ExitCode> {
    let models = models.unwrap_or_else(|| report::PUBLISHED_TABLE.iter().map(|r| (r.0, r.1)).collect());
    let rows = report::run_table(&models, budget)?;
    let mut text = String::from("p   q   N      N/N0  index   published        status\n");
    let mut all_match = true;
    let mut rows_json = Vec::new();
    for r in &rows {
        let published = report::published_row(r.p, r.q);
        let matches = published.map(|(pn, pe, pi)| {
            pn == r.conductor && pe == r.ratio && r.index.is_none_or(|i| i == pi)
        });
        if matches == Some(false) {
            all_match = false;
        }
        let index = r.index.map_or("-".to_string(), |i| i.to_string());
        let pub_s = published.map_or("-".to_string(), |(a, b, c)| format!("{a};{b};{c}"));
        let verdict = match (r.status, matches) {
            (_, Some(false)) => "MISMATCH",
            (RowStatus::SkippedBudget, _) => "skipped-budget",
            (RowStatus::Computed, Some(true)) => "match",
            (RowStatus::Computed, None) => "computed",
        };
        let _ = writeln!(
            text,
            "{:<3} {:<3} {:<6} {:<5} {:<7} {:<16} {}",
            r.p, r.q, r.conductor, r.ratio, index, pub_s, verdict
        );
        rows_json.push(json!({
            "p": int(r.p),
            "q": int(r.q),
            "conductor": int(r.conductor),
            "ratio": int(r.ratio),
            "index": r.index.map(int),
            "group_order": int(r.group_order),
            "status": r.status.as_str(),
            "published": published.map(|(a, b, c)| json!([int(a), int(b), int(c)])),
            "matches_published": matches,
        }));
    }

    let mut sweep_json = Value::Null;
    if let Some(max_pq) = sweep {
        let sw = report::arithmetic_sweep(max_pq)?;
        let bad: Vec<_> = sw.iter().filter(|r| !r.all()).collect();
        all_match &= bad.is_empty();
        let _ = writeln!(
            text,
            "arithmetic sweep (p q <= {max_pq}): {} models, {} violations",
            sw.len(),
            bad.len()
        );
        for r in &bad {
            let _ = writeln!(text, "  violation at M({},{}): {:?}", r.p, r.q, r);
        }
        sweep_json = json!({
            "max_pq": int(max_pq),
            "models": int(sw.len()),
            "violations": bad.iter().map(|r| json!([int(r.p), int(r.q)])).collect::<Vec<_>>(),
        });
    }
    out.emit(
        "table",
        &text,
        json!({
            "budget": int(budget),
            "rows": rows_json,
            "sweep": sweep_json,
            "all_match": all_match,
        }),
    )?;
    Ok(status(all_match))
}

pub fn bound(out: &Output, rs: &[u64]) -> Result<ExitCode> {
    let rs: Vec<u64> = if rs.is_empty() { (1..=5).collect() } else { rs.to_vec() };
    let mut text = String::from("r   naive N(r)             improved    improved | naive\n");
    let mut rows = Vec::new();
    for &r in &rs {
        let naive = kernel::conductor_bound_naive(r);
        let improved = PUBLISHED_IMPROVED_BOUND.iter().find(|x| x.0 == r).map(|x| x.1);
        let divides = match (&naive, improved) {
            (Ok(n), Some(i)) => Some((n % i).is_zero()),
            _ => None,
        };
        let naive_s = match &naive {
            Ok(n) => n.to_string(),
            Err(e) => format!("unavailable ({e})"),
        };
        let _ = writeln!(
            text,
            "{:<3} {:<22} {:<11} {}",
            r,
            naive_s,
            improved.map_or("-".into(), |i| i.to_string()),
            divides.map_or("-".into(), |d: bool| d.to_string())
        );
        rows.push(json!({
            "r": int(r),
            "naive": naive.as_ref().ok().map(int),
            "error": naive.as_ref().err().map(|e| e.to_string()),
            "improved_published": improved.map(int),
            "improved_divides_naive": divides,
        }));
    }
    out.emit("bound", &text, json!({ "rows": rows }))?;
    Ok(ExitCode::SUCCESS)
}

pub fn verify(out: &Output, source: &Source, sweep: &SweepArgs, budget: u128) -> Result<ExitCode> {
    let md = source.load()?;
    let (mut text, head) = header(&md, source);
    let cfg = VerifyConfig {
        budget,
        sweep: sweep.config(),
        seed: sweep.seed,
        ..VerifyConfig::default()
    };
    let suites = report::run_verify(&md, &cfg);
    let ok = suites.iter().all(|s| s.ok());
    text.push_str("suites:\n");
    let rows: Vec<Value> = suites
        .iter()
        .map(|s| tally_lines(&mut text, &s.name, s.passed, s.failed, s.witness.as_ref()))
        .collect();
    let _ = writeln!(text, "result: {}", if ok { "all suites pass" } else { "FAILURES" });
    out.emit("verify", &text, merge(head, json!({ "suites": rows, "all_pass": ok })))?;
    Ok(status(ok))
}
