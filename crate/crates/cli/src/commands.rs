use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Map, Value};

use ringlab_core::constructions::integers_oracle;
use ringlab_core::dsl::{build, parse_group_expr, parse_ring_expr};
use ringlab_core::invariants::{
    center, idempotents, jacobson_radical, n_potents, nilpotents, units, uu_exponent_of,
};
use ringlab_core::predicates::explore::ExploreRequest;
use ringlab_core::predicates::{
    explore_group_rings, is_n_uu_any, is_nil_clean, is_pi_uu_any, is_strongly_n_nil_clean, nil_clean_decompose,
    pi_regular_decompose, run_suite, strongly_n_nil_clean_decompose, Corpus, SuiteId,
};
use ringlab_core::{Code, FiniteRing, RingHandle, Verdict};

use crate::args::{Cli, Command, DecomposeKind, Format, ListKind};
use crate::config::{usage, CliError, RunConfig};

type CmdResult = Result<ExitCode, CliError>;

pub fn run(cli: Cli) -> CmdResult {
    let cfg = RunConfig::from_args(&cli.global)?;
    // A second initialisation in the same process fails harmlessly.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global();
    match cli.command {
        Command::Classify { expr } => classify(&cfg, &expr),
        Command::Table { inject_fault } => table(&cfg, inject_fault.as_deref()),
        Command::Verify { suite } => verify(&cfg, &suite),
        Command::List { kind, expr, n } => list(&cfg, kind, &expr, n),
        Command::Decompose {
            expr,
            element,
            kind,
            n,
        } => decompose(&cfg, &expr, &element, kind, n),
        Command::Explore {
            bases,
            groups,
            p_groups_only,
            ring_limit,
        } => explore(&cfg, bases, groups, p_groups_only, ring_limit),
    }
}

fn ring(cfg: &RunConfig, expr: &str) -> Result<RingHandle, CliError> {
    build(expr, &cfg.guard()).map_err(usage)
}

fn finite<'a>(h: &'a RingHandle, what: &str) -> Result<&'a Arc<FiniteRing>, CliError> {
    match h {
        RingHandle::Finite(r) => Ok(r),
        RingHandle::Integers => Err(usage(format!("{what} needs element enumeration; not available for Z"))),
    }
}

fn mark(v: &Value) -> String {
    match v {
        Value::Bool(true) => "✓".into(),
        Value::Bool(false) => "✗".into(),
        Value::Null => "n/a".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn with_config(v: impl Serialize, cfg: &RunConfig) -> Value {
    let mut v = serde_json::to_value(v).expect("report serialises");
    if let Value::Object(m) = &mut v {
        m.insert("config".into(), cfg.echo());
    }
    v
}

fn write_json(out: &mut dyn Write, v: &Value, pretty: bool) -> Result<(), CliError> {
    if pretty {
        serde_json::to_writer_pretty(&mut *out, v).map_err(|e| CliError::Io(e.into()))?;
    } else {
        serde_json::to_writer(&mut *out, v).map_err(|e| CliError::Io(e.into()))?;
    }
    writeln!(out)?;
    Ok(())
}

/// Emits a flat report: text as aligned key/value lines, JSON as one object.
fn emit_report(cfg: &RunConfig, report: Map<String, Value>) -> Result<(), CliError> {
    let mut out = cfg.writer()?;
    match cfg.format_or(Format::Text) {
        Format::Text => {
            let width = report.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            for (k, v) in &report {
                match v {
                    Value::Object(inner) => {
                        writeln!(out, "{k}")?;
                        let iw = inner.keys().map(|k| k.chars().count()).max().unwrap_or(0);
                        for (ik, iv) in inner {
                            writeln!(out, "  {ik:<iw$}  {}", mark(iv))?;
                        }
                    }
                    _ => writeln!(out, "{k:<width$}  {}", mark(v))?,
                }
            }
        }
        Format::Json => write_json(&mut out, &with_config(&report, cfg), true)?,
        Format::Jsonl => write_json(&mut out, &with_config(&report, cfg), false)?,
    }
    out.flush()?;
    Ok(())
}

fn classify(cfg: &RunConfig, expr: &str) -> CmdResult {
    let h = ring(cfg, expr)?;
    let ns: Vec<u64> = cfg.ns().into_iter().filter(|&n| n >= 2).collect();
    let mut m = Map::new();
    m.insert("ring".into(), h.label().into());
    let mut classes = Map::new();
    for (name, n) in [("UU", 1), ("2-UU", 2), ("3-UU", 3), ("6-UU", 6), ("8-UU", 8)] {
        classes.insert(name.into(), is_n_uu_any(&h, n).holds.into());
    }
    classes.insert("pi-UU".into(), is_pi_uu_any(&h).holds.into());
    match &h {
        RingHandle::Integers => {
            let z = integers_oracle();
            m.insert("size".into(), "infinite".into());
            m.insert("characteristic".into(), z.characteristic().into());
            m.insert("units".into(), z.units().len().into());
            m.insert("nilpotents".into(), z.nilpotents().len().into());
            m.insert("idempotents".into(), Value::Null);
            m.insert("radical".into(), Value::Null);
            classes.insert("nil-clean".into(), Value::Null);
            classes.insert("strongly nil-clean".into(), Value::Null);
            for &n in &ns {
                classes.insert(format!("strongly {n}-nil-clean"), Value::Null);
            }
        }
        RingHandle::Finite(r) => {
            m.insert("size".into(), r.size().into());
            m.insert("characteristic".into(), r.characteristic().into());
            m.insert("units".into(), units(r).len().into());
            m.insert("nilpotents".into(), nilpotents(r).len().into());
            m.insert("idempotents".into(), idempotents(r).len().into());
            m.insert("radical".into(), jacobson_radical(r).len().into());
            classes.insert("nil-clean".into(), is_nil_clean(r).holds.into());
            classes.insert("strongly nil-clean".into(), is_strongly_n_nil_clean(r, 2).holds.into());
            for &n in &ns {
                classes.insert(format!("strongly {n}-nil-clean"), is_strongly_n_nil_clean(r, n).holds.into());
            }
        }
    }
    m.insert("uu_exponent".into(), uu_exponent_of(&h).into());
    m.insert("classes".into(), Value::Object(classes));
    emit_report(cfg, m)?;
    Ok(ExitCode::SUCCESS)
}

const TABLE_ROWS: [(&str, &str); 5] = [
    ("Z", "Z"),
    ("Z_5", "Z(5)"),
    ("Z_7", "Z(7)"),
    ("M_2(Z_2)", "M(2,Z(2))"),
    ("M_2(Z_3)", "M(2,Z(3))"),
];
/// Column label and exponent; `None` is the π-UU column.
const TABLE_COLUMNS: [(&str, Option<u64>); 6] = [
    ("2-UU", Some(2)),
    ("3-UU", Some(3)),
    ("UU", Some(1)),
    ("π-UU", None),
    ("6-UU", Some(6)),
    ("8-UU", Some(8)),
];
/// The published table.
const TABLE_EXPECTED: [[bool; 6]; 5] = [
    [true, false, false, true, true, true],
    [false, false, false, true, false, true],
    [false, false, false, true, true, false],
    [false, true, false, true, true, false],
    [false, false, false, true, false, true],
];

fn table_index<T>(key: &str, labels: &[(&str, T)]) -> Option<usize> {
    key.parse::<usize>()
        .ok()
        .filter(|&i| i < labels.len())
        .or_else(|| labels.iter().position(|(l, _)| *l == key))
}

fn table(cfg: &RunConfig, fault: Option<&str>) -> CmdResult {
    let fault = match fault {
        None => None,
        Some(f) => {
            let (r, c) = f
                .split_once(':')
                .ok_or_else(|| usage("--inject-fault expects ROW:COLUMN"))?;
            let r = table_index(r, &TABLE_ROWS).ok_or_else(|| usage(format!("unknown table row '{r}'")))?;
            let c = table_index(c, &TABLE_COLUMNS).ok_or_else(|| usage(format!("unknown table column '{c}'")))?;
            Some((r, c))
        }
    };
    let mut computed = [[false; 6]; 5];
    for (i, (_, expr)) in TABLE_ROWS.iter().enumerate() {
        let h = ring(cfg, expr)?;
        for (j, (_, n)) in TABLE_COLUMNS.iter().enumerate() {
            computed[i][j] = match n {
                Some(n) => is_n_uu_any(&h, *n).holds,
                None => is_pi_uu_any(&h).holds,
            };
        }
    }
    if let Some((r, c)) = fault {
        computed[r][c] = !computed[r][c];
    }
    let mut mismatches = Vec::new();
    for i in 0..5 {
        for j in 0..6 {
            if computed[i][j] != TABLE_EXPECTED[i][j] {
                mismatches.push((i, j));
            }
        }
    }
    let matches = 30 - mismatches.len();
    let tick = |b: bool| if b { "✓" } else { "✗" };
    let mut out = cfg.writer()?;
    match cfg.format_or(Format::Text) {
        Format::Text => {
            write!(out, "{:<10}", "ring")?;
            for (c, _) in TABLE_COLUMNS {
                write!(out, " {c:>5}")?;
            }
            writeln!(out)?;
            for (i, (label, _)) in TABLE_ROWS.iter().enumerate() {
                write!(out, "{label:<10}")?;
                for j in 0..6 {
                    write!(out, " {:>5}", tick(computed[i][j]))?;
                }
                writeln!(out)?;
            }
            writeln!(out, "{matches}/30 cells match")?;
        }
        Format::Json => {
            let v = json!({
                "rows": TABLE_ROWS.iter().map(|r| r.0).collect::<Vec<_>>(),
                "columns": TABLE_COLUMNS.iter().map(|c| c.0).collect::<Vec<_>>(),
                "computed": computed,
                "expected": TABLE_EXPECTED,
                "matches": matches,
                "mismatches": mismatches.iter().map(|&(i, j)| json!({
                    "row": TABLE_ROWS[i].0, "column": TABLE_COLUMNS[j].0,
                    "computed": computed[i][j], "expected": TABLE_EXPECTED[i][j],
                })).collect::<Vec<_>>(),
                "config": cfg.echo(),
            });
            write_json(&mut out, &v, true)?;
        }
        Format::Jsonl => {
            for i in 0..5 {
                for j in 0..6 {
                    let v = json!({
                        "row": TABLE_ROWS[i].0, "column": TABLE_COLUMNS[j].0,
                        "computed": computed[i][j], "expected": TABLE_EXPECTED[i][j],
                        "match": computed[i][j] == TABLE_EXPECTED[i][j],
                        "config": cfg.echo(),
                    });
                    write_json(&mut out, &v, false)?;
                }
            }
        }
    }
    out.flush()?;
    for &(i, j) in &mismatches {
        eprintln!(
            "cell mismatch: {} / {}: computed {}, expected {}",
            TABLE_ROWS[i].0,
            TABLE_COLUMNS[j].0,
            tick(computed[i][j]),
            tick(TABLE_EXPECTED[i][j])
        );
    }
    Ok(if mismatches.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn load_corpus(cfg: &RunConfig) -> Result<Corpus, CliError> {
    let guard = cfg.guard();
    match &cfg.corpus {
        None => Ok(Corpus::builtin(&guard)),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            Corpus::from_text(&text, &guard).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
    }
}

fn verify(cfg: &RunConfig, suite: &str) -> CmdResult {
    let ids: Vec<SuiteId> = if suite.eq_ignore_ascii_case("all") {
        SuiteId::ALL.to_vec()
    } else {
        vec![suite.parse::<SuiteId>().map_err(usage)?]
    };
    let corpus = load_corpus(cfg)?;
    let guard = cfg.guard();
    let ns = cfg.ns();
    let format = cfg.format_or(Format::Jsonl);
    let mut out = cfg.writer()?;
    let mut all_hold = true;
    let mut json_suites = Vec::new();
    for id in ids {
        let start = std::time::Instant::now();
        let res = run_suite(id, &corpus, &ns, &guard);
        all_hold &= res.holds();
        match format {
            Format::Jsonl => {
                for r in &res.records {
                    write_json(&mut out, &with_config(r, cfg), false)?;
                }
            }
            Format::Json => json_suites.push(json!({
                "suite": id.name(),
                "holds": res.holds(),
                "failures": res.failures,
                "records": res.records,
            })),
            Format::Text => {
                writeln!(
                    out,
                    "{} {:<18} {} records, {} skipped, {} ms",
                    if res.holds() { "PASS" } else { "FAIL" },
                    id.name(),
                    res.records.len(),
                    res.skipped(),
                    start.elapsed().as_millis()
                )?;
                for f in &res.failures {
                    writeln!(out, "    {f}")?;
                }
            }
        }
        out.flush()?;
        for f in &res.failures {
            eprintln!("{} failed on {f}", id.name());
        }
    }
    if format == Format::Json {
        write_json(&mut out, &json!({ "suites": json_suites, "config": cfg.echo() }), true)?;
    }
    out.flush()?;
    Ok(if all_hold { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn list(cfg: &RunConfig, kind: ListKind, expr: &str, n: u64) -> CmdResult {
    let h = ring(cfg, expr)?;
    let name = format!("{kind:?}").to_lowercase();
    // (code, rendering) pairs; for Z the codes are the integers themselves.
    let items: Vec<(i64, String)> = match (&h, kind) {
        (RingHandle::Integers, ListKind::Units) => {
            integers_oracle().units().iter().map(|&u| (u, u.to_string())).collect()
        }
        (RingHandle::Integers, ListKind::Nilpotents) => {
            integers_oracle().nilpotents().iter().map(|&u| (u, u.to_string())).collect()
        }
        (RingHandle::Integers, _) => return Err(usage(format!("list {name} needs element enumeration; not available for Z"))),
        (RingHandle::Finite(r), _) => {
            if kind == ListKind::Npotents && n < 2 {
                return Err(usage("npotents needs --n >= 2"));
            }
            let codes: Vec<Code> = match kind {
                ListKind::Units => units(r).list().to_vec(),
                ListKind::Nilpotents => nilpotents(r).to_vec(),
                ListKind::Idempotents => idempotents(r).to_vec(),
                ListKind::Radical => jacobson_radical(r).elements(),
                ListKind::Center => center(r).to_vec(),
                ListKind::Npotents => n_potents(r, n).to_vec(),
            };
            codes.into_iter().map(|c| (c as i64, r.render(c))).collect()
        }
    };
    let integers = matches!(h, RingHandle::Integers);
    let mut out = cfg.writer()?;
    match cfg.format_or(Format::Text) {
        Format::Text => {
            for (c, s) in &items {
                if integers {
                    writeln!(out, "{s}")?;
                } else {
                    writeln!(out, "#{c}\t{s}")?;
                }
            }
        }
        f => {
            let v = json!({
                "ring": h.label(),
                "kind": name,
                "count": items.len(),
                "elements": items.iter().map(|(c, s)| json!({"code": c, "render": s})).collect::<Vec<_>>(),
                "config": cfg.echo(),
            });
            write_json(&mut out, &v, f == Format::Json)?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn decompose(cfg: &RunConfig, expr: &str, element: &str, kind: DecomposeKind, n: u64) -> CmdResult {
    let h = ring(cfg, expr)?;
    let r = finite(&h, "decompose")?;
    let code: u64 = element
        .trim()
        .trim_start_matches('#')
        .parse()
        .map_err(|_| usage(format!("bad element code '{element}'")))?;
    let a = r.elem(code).map_err(usage)?.code;
    let (kind_name, v): (&str, Verdict) = match kind {
        DecomposeKind::Nilclean => ("nilclean", nil_clean_decompose(r, a)),
        DecomposeKind::NNilclean => {
            if n < 2 {
                return Err(usage("n-nilclean needs --n >= 2"));
            }
            ("n-nilclean", strongly_n_nil_clean_decompose(r, a, n))
        }
        DecomposeKind::Piregular => match pi_regular_decompose(r, a) {
            Ok(v) => ("piregular", v),
            Err(e) => {
                eprintln!("ringlab: internal error: {e}");
                return Ok(ExitCode::from(1));
            }
        },
    };
    let mut out = cfg.writer()?;
    match cfg.format_or(Format::Text) {
        Format::Text => {
            if v.holds {
                let parts: Vec<String> = v.witness.iter().map(|w| format!("{}={}", w.role, w.value)).collect();
                writeln!(out, "{}", parts.join(" "))?;
            } else {
                writeln!(out, "none")?;
            }
        }
        f => {
            let witness: Map<String, Value> = v.witness.iter().map(|w| (w.role.clone(), w.value.into())).collect();
            let j = json!({
                "ring": r.label(),
                "element": a,
                "kind": kind_name,
                "n": if kind == DecomposeKind::NNilclean { Some(n) } else { None },
                "found": v.holds,
                "witness": witness,
                "config": cfg.echo(),
            });
            write_json(&mut out, &j, f == Format::Json)?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn explore(
    cfg: &RunConfig,
    bases: Option<Vec<String>>,
    groups: Option<Vec<String>>,
    p_groups_only: bool,
    ring_limit: usize,
) -> CmdResult {
    let mut req = ExploreRequest {
        ns: cfg.ns(),
        max_ring_size: ring_limit,
        p_groups_only,
        ..ExploreRequest::default()
    };
    let nonblank = |v: Vec<String>| -> Vec<String> {
        v.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
    };
    if let Some(b) = bases {
        req.bases = nonblank(b)
            .iter()
            .map(|s| parse_ring_expr(s))
            .collect::<Result<_, _>>()
            .map_err(usage)?;
    }
    if let Some(g) = groups {
        req.groups = nonblank(g)
            .iter()
            .map(|s| parse_group_expr(s))
            .collect::<Result<_, _>>()
            .map_err(usage)?;
    }
    let records = explore_group_rings(&req, &cfg.guard()).map_err(usage)?;
    let mut out = cfg.writer()?;
    match cfg.format_or(Format::Jsonl) {
        Format::Jsonl => {
            for r in &records {
                write_json(&mut out, &with_config(r, cfg), false)?;
            }
        }
        Format::Json => write_json(&mut out, &json!({ "records": records, "config": cfg.echo() }), true)?,
        Format::Text => {
            writeln!(out, "{:<28} {:>6} {:>5} {:>8} {:>8}", "ring", "|G|", "char", "d(R)", "d(RG)")?;
            for r in &records {
                let d = match (r.uu_exponent_ring, &r.skipped) {
                    (Some(d), _) => d.to_string(),
                    (None, _) => "skipped".into(),
                };
                writeln!(
                    out,
                    "{:<28} {:>6} {:>5} {:>8} {:>8}",
                    r.ring, r.group_order, r.characteristic, r.uu_exponent_base, d
                )?;
            }
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}
