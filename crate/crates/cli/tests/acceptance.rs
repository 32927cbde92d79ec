//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Drives the built `ringlab` binary end to end.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn ringlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringlab"))
        .args(args)
        .env_remove("RINGLAB_MAX_SIZE")
        .output()
        .expect("ringlab runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn jsonl(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSONL line"))
        .collect()
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Every record holds and none was skipped.
fn all_records_hold(recs: &[Value]) -> Result<(), String> {
    for r in recs {
        ensure(r.get("skipped").is_none(), format!("{} {} skipped", r["suite"], r["ring"]))?;
        ensure(r["holds"] == true, format!("{} failed on {}: {}", r["suite"], r["ring"], r["witness"]))?;
    }
    Ok(())
}

fn table_reproduction() -> Check {
    let o = ringlab(&["table", "--format", "json"]);
    ensure(o.status.code() == Some(0), format!("exit {:?}", o.status.code()))?;
    let v: Value = serde_json::from_str(&stdout(&o)).map_err(|e| e.to_string())?;
    ensure(v["matches"] == 30, format!("{} cells match", v["matches"]))?;
    ensure(v["computed"] == v["expected"], "computed table differs")?;
    Ok("30/30 cells".into())
}

fn matrix_examples() -> Check {
    let mut got = Vec::new();
    for (expr, want) in [("M(2,Z(2))", 3), ("M(2,Z(3))", 8)] {
        let o = ringlab(&["classify", expr, "--format", "json", "--n-range", "2..2"]);
        ensure(o.status.success(), format!("classify {expr} failed"))?;
        let v: Value = serde_json::from_str(&stdout(&o)).map_err(|e| e.to_string())?;
        ensure(v["uu_exponent"] == want, format!("{expr}: uu_exponent {}", v["uu_exponent"]))?;
        got.push(format!("{expr} -> {want}"));
    }
    Ok(got.join(", "))
}

fn matrix_lcm() -> Check {
    let o = ringlab(&["verify", "MATRIX-LCM"]);
    let recs = jsonl(&o);
    ensure(o.status.success(), "suite failed")?;
    ensure(recs.len() == 9, format!("{} instances", recs.len()))?;
    all_records_hold(&recs)?;
    for r in &recs {
        ensure(r["conditions"]["uu_exponent"] == r["conditions"]["lcm"], format!("{}", r["ring"]))?;
    }
    Ok("9 (q,m) instances".into())
}

fn thm1_equivalence() -> Check {
    let o = ringlab(&["verify", "THM1-EQUIV", "--n-range", "2..9"]);
    let recs = jsonl(&o);
    ensure(o.status.success(), "suite failed")?;
    ensure(recs.len() == 40, format!("{} corpus rings", recs.len()))?;
    all_records_hold(&recs)?;
    Ok(format!("{} rings x n in 2..9", recs.len()))
}

fn negative_matrices() -> Check {
    let o = ringlab(&["verify", "NEG-MATRIX"]);
    let recs = jsonl(&o);
    ensure(o.status.success(), "suite failed")?;
    all_records_hold(&recs)?;
    let want = [
        ("M(2,Z(2))", [4, 5]),
        ("M(2,Z(3))", [4, 5]),
        ("M(2,Z(4))", [4, 5]),
        ("M(3,Z(2))", [3, 6]),
        ("M(3,Z(3))", [3, 6]),
    ];
    ensure(recs.len() == want.len(), format!("{} instances", recs.len()))?;
    for (r, (ring, ns)) in recs.iter().zip(want) {
        ensure(r["ring"] == ring && r["ns"] == serde_json::json!(ns), format!("unexpected record {}", r["ring"]))?;
        ensure(r["conditions"]["n_uu"] == serde_json::json!([false, false]), format!("{ring} is n-UU"))?;
    }
    Ok("5 matrix rings, all not n-UU".into())
}

const CLOSURE_SUITES: [&str; 11] = [
    "DIV-UU",
    "GCD-UU",
    "CLOSURE-PROD",
    "CLOSURE-CORNER",
    "NILQUOT",
    "ODD-2NIL",
    "ODD-SPLIT",
    "SNC-NC",
    "PROP-UU",
    "THM2-CONSTRUCTIVE",
    "MORITA",
];

fn closure_suites() -> Check {
    let mut total = 0;
    for s in CLOSURE_SUITES {
        let o = ringlab(&["verify", s, "--n-range", "1..12"]);
        let recs = jsonl(&o);
        ensure(o.status.success(), format!("{s} failed"))?;
        ensure(!recs.is_empty(), format!("{s} produced no records"))?;
        all_records_hold(&recs)?;
        total += recs.len();
    }
    Ok(format!("11 suites, {total} records, 0 failures"))
}

fn group_rings() -> Check {
    let o = ringlab(&["verify", "GROUPRING-SUF", "--n-range", "1..1"]);
    let recs = jsonl(&o);
    ensure(o.status.success(), "GROUPRING-SUF failed")?;
    all_records_hold(&recs)?;
    for ring in ["GR(Z(2),C(2))", "GR(Z(2),C(4))", "GR(Z(4),C(2))", "GR(Z(2),Q8)"] {
        let r = recs
            .iter()
            .find(|r| r["ring"] == ring)
            .ok_or(format!("{ring} missing"))?;
        ensure(r["conditions"]["ring_uu"] == true, format!("{ring} is not UU"))?;
    }
    for s in ["GROUPRING-NEC", "UNIPO"] {
        let o = ringlab(&["verify", s]);
        let recs = jsonl(&o);
        ensure(o.status.success(), format!("{s} failed"))?;
        ensure(!recs.is_empty(), format!("{s} produced no records"))?;
        all_records_hold(&recs)?;
    }
    Ok("four pairs UU; necessity and unipotence corpus-wide".into())
}

fn strip_elapsed(text: &str) -> Vec<Value> {
    text.lines()
        .map(|l| {
            let mut v: Value = serde_json::from_str(l).expect("JSONL line");
            v.as_object_mut().expect("record").remove("elapsed_ms");
            v
        })
        .collect()
}

fn determinism() -> Check {
    let a = ringlab(&["verify", "all", "--threads", "1"]);
    let b = ringlab(&["verify", "all", "--threads", "8"]);
    ensure(a.status.success() && b.status.success(), "verify all failed")?;
    let (ta, tb) = (stdout(&a), stdout(&b));
    let (ra, rb) = (strip_elapsed(&ta), strip_elapsed(&tb));
    ensure(ra.len() == rb.len(), format!("{} vs {} records", ra.len(), rb.len()))?;
    for (i, (x, y)) in ra.iter().zip(&rb).enumerate() {
        ensure(x == y, format!("record {i} differs"))?;
    }
    // Byte-level: blank out the elapsed field text and compare.
    let blank = |t: &str| {
        t.lines()
            .map(|l| {
                let i = l.find("\"elapsed_ms\":").expect("elapsed field");
                let j = l[i + 13..].find(|c: char| !c.is_ascii_digit()).map_or(l.len(), |k| i + 13 + k);
                format!("{}{}", &l[..i], &l[j..])
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    ensure(blank(&ta) == blank(&tb), "JSONL bytes differ outside elapsed_ms")?;
    Ok(format!("{} records identical", ra.len()))
}

fn list_codes(kind: &str, expr: &str) -> Result<Vec<u64>, String> {
    let o = ringlab(&["list", kind, expr, "--format", "json"]);
    ensure(o.status.success(), format!("list {kind} {expr} failed"))?;
    let v: Value = serde_json::from_str(&stdout(&o)).map_err(|e| e.to_string())?;
    Ok(v["elements"]
        .as_array()
        .ok_or("no elements")?
        .iter()
        .map(|e| e["code"].as_u64().unwrap())
        .collect())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn oracle_spot_checks() -> Check {
    // Units of Z_12: residues coprime to 12.
    let oracle: Vec<u64> = (0..12).filter(|&a| gcd(a, 12) == 1).collect();
    let got = list_codes("units", "Z(12)")?;
    ensure(got == oracle && got == [1, 5, 7, 11], format!("units(Z_12) = {got:?}"))?;
    // J(Z_12): a with 1 - r a a unit for every r.
    let oracle: Vec<u64> = (0..12)
        .filter(|&a| (0..12).all(|r| gcd((1 + 12 * 12 - r * a % 12) % 12, 12) == 1))
        .collect();
    let got = list_codes("radical", "Z(12)")?;
    ensure(got == oracle && got == [0, 6], format!("J(Z_12) = {got:?}"))?;
    // Nilpotents of Z_8: a^3 = 0 mod 8 suffices.
    let oracle: Vec<u64> = (0..8).filter(|&a| a * a * a % 8 == 0).collect();
    let got = list_codes("nilpotents", "Z(8)")?;
    ensure(got == oracle && got == [0, 2, 4, 6], format!("nil(Z_8) = {got:?}"))?;
    // GL_2(F_2): 2x2 bit matrices with odd determinant.
    let oracle = (0u32..16)
        .filter(|m| {
            let b = |i: u32| (m >> i) & 1;
            (b(0) * b(3) + b(1) * b(2)) % 2 == 1
        })
        .count();
    let got = list_codes("units", "M(2,Z(2))")?.len();
    ensure(got == oracle && got == 6, format!("|U(M_2(Z_2))| = {got}"))?;
    Ok("units(Z_12), J(Z_12), nil(Z_8), |U(M_2(Z_2))|".into())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 9] = [
        ("table reproduction", Duration::from_secs(5), table_reproduction),
        ("matrix uu-exponents", Duration::from_secs(10), matrix_examples),
        ("matrix lcm criterion", Duration::from_secs(60), matrix_lcm),
        ("six-condition equivalence", Duration::from_secs(180), thm1_equivalence),
        ("negative matrix examples", Duration::from_secs(60), negative_matrices),
        ("closure and quotient suites", Duration::from_secs(300), closure_suites),
        ("group rings and unipotence", Duration::from_secs(120), group_rings),
        ("thread-count determinism", Duration::from_secs(600), determinism),
        ("oracle spot-checks", Duration::from_secs(60), oracle_spot_checks),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = check();
        let took = start.elapsed();
        let res = match res {
            Ok(detail) if took > *limit => Err(format!("{detail}; took {took:.1?}, limit {limit:?}")),
            other => other,
        };
        match res {
            Ok(detail) => println!("[PASS] {}. {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
