//! Acceptance suite: one `PASS`/`FAIL` line per criterion, with timings.
//! Runs without the libtest harness so the lines are always shown; exits
//! nonzero when any criterion fails.

use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use fewroots_certify::haas_fast_alpha;
use fewroots_chambers::{axis_intersections, feature_bounds, shear_bound_univariate, vertical_tangents};
use fewroots_core::rational::{int, parse_rational, rat};
use fewroots_core::sturm::isolate_real_roots;
use fewroots_core::{Rational, UniPoly};
use fewroots_haas::FIVE_POINTS;
use fewroots_toric::{curve_for, nullspace_sum_zero, SupportConfig};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const PRINTED_CUSPS: [f64; 3] = [1.41544129863, 1.41666026637, 1.41951679775];
const PRINTED_AXIS_HIT: f64 = 1.24487176148;
const PRINTED_NODES: [f64; 10] = [
    1.41767594900,
    1.41790510558,
    1.41821476967,
    1.43683087662,
    1.47813022442,
    1.48488178680,
    1.59316011321,
    1.60149022139,
    2.45494131563,
    2.47089273858,
];

type Verdict = Result<String, String>;

struct Run {
    code: i32,
    json: Value,
    stderr: String,
}

fn fewroots(args: &[&str]) -> Result<Run, String> {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_fewroots"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot run fewroots: {e}"))?;
    let stderr = String::from_utf8_lossy(&stderr).into_owned();
    let json =
        serde_json::from_slice(&stdout).map_err(|e| format!("fewroots {}: {e}; stderr: {stderr}", args.join(" ")))?;
    Ok(Run { code: status.code().unwrap_or(-1), json, stderr })
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {:.2?}, limit {limit:?}", elapsed))
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn counterexample() -> Verdict {
    let t = Instant::now();
    let r = fewroots(&["haas", "--a", "44/31", "--b", "44/31", "--d", "3"])?;
    let elapsed = t.elapsed();
    ensure(r.code == 0, || format!("exit {}: {}", r.code, r.stderr))?;
    ensure(r.json["signature"] == serde_json::json!([5, 0, 0, 0]), || format!("signature {}", r.json["signature"]))?;
    let reference = &r.json["reference"];
    let certs = reference["certificates"].as_array().ok_or("no reference certificates")?;
    ensure(certs.len() == 5, || format!("{} certificates", certs.len()))?;
    let mut worst: f64 = 0.0;
    for c in certs {
        let alpha = f(&c["alpha_ub"]);
        ensure(c["certified"] == true && alpha < 0.03, || format!("uncertified start {}", c["z0"]))?;
        for x in c["z0"].as_array().ok_or("no z0")? {
            let v = parse_rational(x.as_str().unwrap_or("")).map_err(|e| e.to_string())?;
            ensure(v > int(0), || format!("start {} off the positive quadrant", c["z0"]))?;
        }
        worst = worst.max(alpha);
    }
    ensure(reference["distinct"] == true, || "basins overlap".into())?;
    ensure(r.json["distinct"] == true, || "solver roots not distinct".into())?;
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("5 distinct positive roots, max alpha_ub {worst:.2e}, {elapsed:.2?}"))
}

fn fast_path() -> Verdict {
    let t = Instant::now();
    for p in FIVE_POINTS {
        let z = p.map(|s| {
            let (int_part, frac) = s.split_once('.').expect("decimal point");
            parse_rational(&format!("{int_part}.{}", &frac[..6])).expect("decimal")
        });
        ensure(haas_fast_alpha(&z).map_err(|e| e.to_string())?, || format!("fast path rejects {z:?}"))?;
    }
    let elapsed = t.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("all five 6-digit points accepted, {elapsed:.2?}"))
}

fn signature_table() -> Verdict {
    let t = Instant::now();
    let r = fewroots(&["haas", "--table"])?;
    let elapsed = t.elapsed();
    ensure(r.code == 0, || format!("exit {}: {}", r.code, r.stderr))?;
    let rows = r.json["table"].as_array().ok_or("no table")?;
    ensure(rows.len() == 13, || format!("{} rows", rows.len()))?;
    for row in rows {
        ensure(row["found"] == row["expected"], || {
            format!("(a, b) = ({}, {}): printed {} found {}", row["a"], row["b"], row["printed"], row["found"])
        })?;
    }
    for (a, b, printed) in [("2", "2", [3, 2, 2, 2]), ("-1", "5", [1, 0, 0, 2])] {
        let hit = rows.iter().any(|row| row["a"] == a && row["b"] == b && row["printed"] == serde_json::json!(printed));
        ensure(hit, || format!("row ({a}, {b}) -> {printed:?} missing"))?;
    }
    within(elapsed, Duration::from_secs(300))?;
    Ok(format!("13/13 rows, {elapsed:.2?}"))
}

struct Chambers {
    json: Value,
    code: i32,
    stderr: String,
    elapsed: Duration,
}

fn chambers_run() -> Result<Chambers, String> {
    let t = Instant::now();
    let r = fewroots(&["chambers", "--haas", "3"])?;
    Ok(Chambers { elapsed: t.elapsed(), json: r.json, code: r.code, stderr: r.stderr })
}

fn matches_sorted(found: &mut [f64], printed: &[f64], tol: f64) -> Result<f64, String> {
    ensure(found.len() == printed.len(), || format!("{} values, expected {}", found.len(), printed.len()))?;
    found.sort_by(f64::total_cmp);
    let mut worst: f64 = 0.0;
    for (x, p) in found.iter().zip(printed) {
        ensure((x - p).abs() <= tol, || format!("{x} vs {p}"))?;
        worst = worst.max((x - p).abs());
    }
    Ok(worst)
}

fn critical_values(c: &Result<Chambers, String>) -> Verdict {
    let c = c.as_ref().map_err(Clone::clone)?;
    ensure(c.code == 0, || format!("exit {}: {}", c.code, c.stderr))?;
    let a = |v: &Value| f(&v[0]);
    let mut cusps: Vec<f64> = c.json["cusps"].as_array().ok_or("no cusps")?.iter().map(a).collect();
    let cusp_dev = matches_sorted(&mut cusps, &PRINTED_CUSPS, 1e-8).map_err(|e| format!("cusps: {e}"))?;
    let mut nodes: Vec<f64> = c.json["nodes"].as_array().ok_or("no nodes")?.iter().map(a).collect();
    let node_dev = matches_sorted(&mut nodes, &PRINTED_NODES, 1e-6).map_err(|e| format!("nodes: {e}"))?;
    let hits = c.json["critical"]["axis_hits"].as_array().ok_or("no axis hits")?;
    let finite: Vec<f64> = hits
        .iter()
        .flat_map(|h| h["limits"].as_array().cloned().unwrap_or_default())
        .filter_map(|l| l.get("finite").map(|e| 0.5 * (f(&e["lo"]) + f(&e["hi"]))))
        .collect();
    let axis_dev = finite.iter().map(|x| (x - PRINTED_AXIS_HIT).abs()).fold(f64::INFINITY, f64::min);
    ensure(axis_dev <= 1e-8, || format!("a-axis hit: closest finite limit off by {axis_dev:e} in {finite:?}"))?;
    within(c.elapsed, Duration::from_secs(600))?;
    Ok(format!(
        "cusps off by <= {cusp_dev:.1e}, axis hit by {axis_dev:.1e}, 10 nodes by <= {node_dev:.1e}, {:.2?}",
        c.elapsed
    ))
}

fn census(c: &Result<Chambers, String>) -> Verdict {
    let c = c.as_ref().map_err(Clone::clone)?;
    if c.code == 2 {
        return Err(format!("incomplete atlas: {}", c.stderr.trim()));
    }
    ensure(c.code == 0, || format!("exit {}: {}", c.code, c.stderr))?;
    let quadrants = c.json["census"].as_array().ok_or("no census")?;
    let by_label = |label: &str| quadrants.iter().find(|q| q["label"] == label);
    let counts = |label: &str| -> Result<[u64; 3], String> {
        let q = by_label(label).ok_or_else(|| format!("no {label} quadrant"))?;
        Ok([&q["chambers"], &q["bounded"], &q["unbounded"]].map(|v| v.as_u64().unwrap_or(u64::MAX)))
    };
    let targets = [("++", [15, 10, 5]), ("--", [1, 0, 1]), ("+-", [2, 0, 2]), ("-+", [2, 0, 2])];
    for (label, want) in targets {
        let got = counts(label)?;
        ensure(got[0] == want[0] && (label != "++" || got == want), || {
            format!("{label}: {} chambers ({} bounded, {} unbounded), expected {want:?}", got[0], got[1], got[2])
        })?;
    }
    let pieces = c.json["refinement_pieces"].as_u64().ok_or("no refinement count")?;
    ensure(pieces == 125, || format!("refinement has {pieces} pieces, expected 125"))?;
    let topological = by_label("++").and_then(|q| q["topologically_unbounded"].as_u64()).unwrap_or(0);
    Ok(format!(
        "++ 15 (10 bounded, 5 unbounded by recession cone; {topological} reach infinity), -- 1, +- 2, -+ 2, \
         refinement 125"
    ))
}

fn e3_geometry() -> Verdict {
    let t = Instant::now();
    let r = fewroots(&["haas", "--e3"])?;
    let elapsed = t.elapsed();
    ensure(r.code == 0, || format!("exit {}: {}", r.code, r.stderr))?;
    let e3 = &r.json["e3"];
    let area = [f(&e3["hull_area"][0]), f(&e3["hull_area"][1])];
    ensure(area[0] > 5.69e-7 && area[1] < 5.701e-7, || format!("hull area {area:?}"))?;
    let vertices = e3["vertices"].as_array().ok_or("no vertices")?;
    ensure(vertices.len() == 4, || format!("{} vertices", vertices.len()))?;
    let worst = vertices.iter().map(|v| f(&v["deviation"])).fold(0.0, f64::max);
    ensure(worst <= 1e-9, || format!("vertex deviation {worst:e}"))?;
    let p = &e3["probability"];
    let convention = p["convention"].as_str().unwrap_or("");
    ensure(!convention.is_empty(), || "no convention tag".into())?;
    ensure(f(&p["printed"]) == 1.936e-9, || format!("printed value not flagged: {}", p["printed"]))?;
    ensure(p["printed_reproduced"].is_boolean(), || "printed value not compared".into())?;
    Ok(format!(
        "area [{:.6e}, {:.6e}], vertices off by <= {worst:.1e}, bound [{:.4e}, {:.4e}] ({convention}); 1.936e-9 flagged, \
         reproduced under this convention: {}, under the squared normalisation: {}, {elapsed:.2?}",
        area[0],
        area[1],
        f(&p["bound"][0]),
        f(&p["bound"][1]),
        p["printed_reproduced"],
        p["printed_matches_squared_normalisation"]
    ))
}

fn bounds() -> Verdict {
    let r = fewroots(&["bound", "--n", "3"])?;
    ensure(r.code == 0, || format!("exit {}: {}", r.code, r.stderr))?;
    let floor = |k: &str| r.json[k]["floor"].as_str().map(str::to_owned).ok_or_else(|| format!("no {k} variant"));
    let (square, cube) = (floor("square")?, floor("cube")?);
    let note = if cube == "237920" {
        "cubic floor 237920".to_string()
    } else {
        ensure(r.stderr.contains(&cube) && r.stderr.contains("237920"), || {
            format!("cubic floor {cube} differs from 237920 and the discrepancy was not printed")
        })?;
        format!("cubic floor {cube}, discrepancy printed: {}", r.stderr.trim())
    };
    for n in 1..=20u64 {
        ensure(shear_bound_univariate(n) == n + 1, || format!("k = 1 shear bound at n = {n}"))?;
    }
    Ok(format!("square floor {square}, {note}, k = 1 shear bound n + 1 for n in 1..=20"))
}

fn random_config(rng: &mut ChaCha8Rng) -> (usize, SupportConfig) {
    loop {
        let n = rng.gen_range(1..=3usize);
        let pts: Vec<Vec<i64>> = (0..n + 3).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        if let Some(c) = SupportConfig::new(n, pts).ok().and_then(|c| c.normalize().ok()) {
            return (n, c);
        }
    }
}

fn sign_scan(p: &UniPoly, lo: i64, hi: i64) -> usize {
    let (mut changes, mut last) = (0, 0i8);
    for k in (4 * lo)..=(4 * hi) {
        let s = p.sign_at(&(rat(k, 4) + rat(1, 8)));
        if last != 0 && s != 0 && s != last {
            changes += 1;
        }
        if s != 0 {
            last = s;
        }
    }
    changes
}

fn property_suites() -> Verdict {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let zero = BigInt::from(0);
    let (mut checked, mut drawn) = (0, 0);
    while checked < 100 {
        drawn += 1;
        ensure(drawn < 10_000, || format!("only {checked} usable configurations in {drawn} draws"))?;
        let (n, c) = random_config(&mut rng);
        let basis = nullspace_sum_zero(&c).map_err(|e| e.to_string())?;
        ensure(basis.len() == 2, || format!("nullspace of dimension {} for {:?}", basis.len(), c.points))?;
        for u in &basis {
            ensure(u.iter().sum::<BigInt>() == zero, || format!("nullspace vector {u:?} does not sum to zero"))?;
            for r in 0..n {
                let s: BigInt = u.iter().zip(&c.points).map(|(x, p)| x * BigInt::from(p[r])).sum();
                ensure(s == zero, || format!("nullspace vector {u:?} not orthogonal to row {r}"))?;
            }
        }
        let Ok(curve) = curve_for(&c, None) else { continue };
        for j in 0..2 {
            let s: Rational = (0..c.len()).map(|i| curve.exponents[(j, i)].clone()).sum();
            ensure(s == int(0), || format!("exponent row {j} sums to {s} for {:?}", c.points))?;
        }
        let (Ok(hits), Ok(vts)) = (axis_intersections(&curve), vertical_tangents(&curve)) else { continue };
        let b = feature_bounds(n as u64).map_err(|e| e.to_string())?;
        let m0 = hits.iter().filter(|h| h.meets_x_axis()).count() as u64;
        let m1 = vts.iter().filter(|v| v.is_cusp).count() as u64;
        let m2 = (vts.len() + hits.iter().filter(|h| h.is_vertical_asymptote()).count()) as u64;
        ensure(m0 <= b.axis && m1 <= b.cusps && m2 <= b.vertical, || {
            format!("n = {n}: (M0, M1, M2) = ({m0}, {m1}, {m2}) for {:?}", c.points)
        })?;
        checked += 1;
    }
    for case in 0..1000 {
        let real_roots = rng.gen_range(0..=6usize);
        let mut roots: Vec<i64> = Vec::new();
        while roots.len() < real_roots {
            let r = rng.gen_range(-40..=40i64);
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        let mut p = UniPoly::constant(int(rng.gen_range(1..=9)));
        for &r in &roots {
            p = &p * &UniPoly::from_ints(&[-r, 2]);
        }
        for _ in 0..rng.gen_range(0..=(8 - real_roots) / 2) {
            let (c, b) = (rng.gen_range(1..=12i64), rng.gen_range(-3..=3i64));
            p = &p * &UniPoly::from_ints(&[b * b + c, b, 1]);
        }
        let iso = isolate_real_roots(&p).map_err(|e| e.to_string())?.len();
        let scan = sign_scan(&p, -21, 21);
        ensure(iso == scan && iso == real_roots, || {
            format!("case {case}: Sturm {iso}, scan {scan}, built {real_roots}")
        })?;
    }
    Ok(format!(
        "feature, nullspace and row-sum checks on 100 configurations ({drawn} drawn), Sturm = sign scan on 1000 polynomials, {:.2?}",
        t.elapsed()
    ))
}

const DECLARED: &str = "not reproduced at desk scale: the symbolic 58-term discriminant expansion and the 5-day \
Groebner basis verification (replaced by criteria 1-5), and factoring the degree-1260 eliminant (replaced by the \
parametric route)";

fn main() -> ExitCode {
    let chambers = chambers_run();
    let results: [(&str, Verdict); 8] = [
        ("counter-example", counterexample()),
        ("fast path", fast_path()),
        ("signature table", signature_table()),
        ("critical values", critical_values(&chambers)),
        ("chamber census", census(&chambers)),
        ("five-root chamber", e3_geometry()),
        ("bounds", bounds()),
        ("property suites", property_suites()),
    ];
    let mut failed = 0;
    for (i, (name, verdict)) in results.iter().enumerate() {
        match verdict {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("DECLARED 9 {DECLARED}");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
