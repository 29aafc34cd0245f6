use std::path::Path;

use fewroots_certify::{certify_distinct, certify_point, haas_fast_alpha, AlphaCertificate, SparseSystem};
use fewroots_chambers::bounds::PRINTED_HEXANOMIAL_BOUND;
use fewroots_chambers::{
    bound_report, build_atlas, sample_curve, AtlasOptions, ChamberAtlas, ChartedCurve, CriticalSet, FeatureCounts,
    NodeOptions,
};
use fewroots_core::rational::{parse_rational, rat};
use fewroots_core::Rational;
use fewroots_haas::{
    count_roots_quadrants, e3_geometry, emptiness_probe, signature_table, CountOptions, E3Geometry, HaasSystem,
    ProbeReport, QuadrantSignature, TableRow, FIVE_POINTS,
};
use fewroots_toric::cell::odd_cell;
use fewroots_toric::{
    find_odd_cell, genericity_check, integer_exponents, parametrize, reduced_curve, ReducedCurve, SupportConfig,
};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use crate::args::{BoundArgs, CertifyArgs, ChambersArgs, Cli, Command, ConfigArgs, HaasArgs};
use crate::error::CliError;
use crate::svg::{emit_svg, Window};

/// A finished report. `partial` is set when some part of it could not be
/// verified, which maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub json: String,
    pub partial: Option<String>,
}

impl Outcome {
    fn new<T: Serialize>(report: &T, partial: Option<String>) -> Self {
        Outcome { json: serde_json::to_string_pretty(report).expect("reports serialize") + "\n", partial }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let (outcome, out) = match &cli.command {
        Command::OddCell(a) => (odd_cell_cmd(a)?, &a.out),
        Command::HkParam(a) => (hk_param_cmd(a)?, &a.out),
        Command::Chambers(a) => (chambers_cmd(a)?, &a.config.out),
        Command::Certify(a) => (certify_cmd(a)?, &a.out),
        Command::Haas(a) => (haas_cmd(a)?, &a.out),
        Command::Bound(a) => (bound_cmd(a)?, &a.out),
    };
    if let Some(path) = out {
        write(path, &outcome.json)?;
    }
    Ok(outcome)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn strings(r: &[Rational]) -> Vec<String> {
    r.iter().map(ToString::to_string).collect()
}

/// The configuration, normalized, plus Haas-specific defaults for the odd
/// cell and chamber signs.
struct Loaded {
    config: SupportConfig,
    cell: Option<Vec<usize>>,
    haas_d: Option<u32>,
}

fn load(a: &ConfigArgs) -> Result<Loaded, CliError> {
    let (raw, default_origin, default_cell) = match (&a.config, a.haas) {
        (_, Some(d)) => (HaasSystem::cayley(d)?.embedded, Some(0), Some(fewroots_haas::system::ODD_CELL.to_vec())),
        (Some(path), None) => {
            let text = read(path)?;
            let v: Value = serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
            let c = if v.get("system").is_some() {
                fewroots_toric::supports::cayley_from_system_json(&text)?.embedded
            } else {
                SupportConfig::from_json(&text)?
            };
            (c, None, None)
        }
        (None, None) => return Err(input("one of --config or --haas is required")),
    };
    let config = match a.origin.or(default_origin) {
        Some(o) => raw.with_origin(o)?,
        None => raw.normalize()?,
    };
    Ok(Loaded { config, cell: a.cell.clone().or(default_cell), haas_d: a.haas })
}

fn curve_of(l: &Loaded) -> Result<ReducedCurve, CliError> {
    let cell = match &l.cell {
        Some(ix) => odd_cell(&l.config, ix)?,
        None => find_odd_cell(&l.config)?,
    };
    Ok(reduced_curve(parametrize(&l.config)?, cell)?)
}

#[derive(Serialize)]
struct CellReport {
    indices: Vec<usize>,
    labels: Vec<usize>,
    complement: Vec<usize>,
    det: String,
    exponent_block: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct OddCellReport<'a> {
    config: &'a SupportConfig,
    facets: Option<fewroots_toric::FacetReport>,
    facets_error: Option<String>,
    cell: CellReport,
}

fn odd_cell_cmd(a: &ConfigArgs) -> Result<Outcome, CliError> {
    let l = load(a)?;
    let cell = match &l.cell {
        Some(ix) => odd_cell(&l.config, ix)?,
        None => find_odd_cell(&l.config)?,
    };
    let (facets, facets_error) = match genericity_check(&l.config) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let block = &cell.exponent_block;
    let report = OddCellReport {
        config: &l.config,
        facets,
        facets_error,
        cell: CellReport {
            labels: cell.labels(),
            indices: cell.indices.clone(),
            complement: cell.complement.clone(),
            det: cell.det.to_string(),
            exponent_block: (0..block.rows()).map(|i| strings(block.row(i))).collect(),
        },
    };
    Ok(Outcome::new(&report, None))
}

#[derive(Serialize)]
struct FormReport {
    slope: String,
    constant: String,
}

#[derive(Serialize)]
struct HkReport {
    cell: Vec<usize>,
    u1: Vec<String>,
    u2: Vec<String>,
    forms: Vec<FormReport>,
    exponents: Vec<Vec<String>>,
    denominator: String,
    integer_exponents: Vec<Vec<String>>,
    rows_sum_to_zero: bool,
}

fn hk_param_cmd(a: &ConfigArgs) -> Result<Outcome, CliError> {
    let curve = curve_of(&load(a)?)?;
    let e = &curve.exponents;
    let (den, rows) = integer_exponents(&curve);
    let report = HkReport {
        cell: curve.cell.indices.clone(),
        u1: curve.forms.u1.iter().map(ToString::to_string).collect(),
        u2: curve.forms.u2.iter().map(ToString::to_string).collect(),
        forms: curve
            .forms
            .forms
            .iter()
            .map(|f| FormReport { slope: f.slope.to_string(), constant: f.constant.to_string() })
            .collect(),
        exponents: (0..e.rows()).map(|i| strings(e.row(i))).collect(),
        denominator: den.to_string(),
        rows_sum_to_zero: (0..e.rows()).all(|i| e.row(i).iter().sum::<Rational>() == Rational::from_integer(0.into())),
        integer_exponents: rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
    };
    Ok(Outcome::new(&report, None))
}

#[derive(Serialize)]
struct ChambersReport<'a> {
    chamber_signs: [i8; 2],
    features: FeatureCounts,
    /// Chamber coordinates of the cusps and nodes.
    cusps: Vec<[f64; 2]>,
    nodes: Vec<[f64; 2]>,
    #[serde(flatten)]
    atlas: &'a ChamberAtlas,
}

#[derive(Serialize)]
struct PartialChambers<'a> {
    features: FeatureCounts,
    critical: &'a CriticalSet,
    reason: String,
}

fn chamber_point(signs: [i8; 2], p: [f64; 2]) -> [f64; 2] {
    [f64::from(signs[0]) * p[0], f64::from(signs[1]) * p[1]]
}

fn default_window(points: &[[f64; 2]], log_scale: bool) -> Window {
    let pts: Vec<[f64; 2]> = if log_scale {
        points.iter().filter(|p| p[0] > 0.0 && p[1] > 0.0).map(|p| [p[0].ln(), p[1].ln()]).collect()
    } else {
        points.to_vec()
    };
    if pts.is_empty() {
        return Window::square(-3.0, 3.0);
    }
    let lo = pts.iter().fold([f64::INFINITY; 2], |m, p| [m[0].min(p[0]), m[1].min(p[1])]);
    let hi = pts.iter().fold([f64::NEG_INFINITY; 2], |m, p| [m[0].max(p[0]), m[1].max(p[1])]);
    let pad = ((hi[0] - lo[0]).max(hi[1] - lo[1]) * 0.5).max(0.5);
    Window { x: [lo[0] - pad, hi[0] + pad], y: [lo[1] - pad, hi[1] + pad] }
}

fn chambers_cmd(a: &ChambersArgs) -> Result<Outcome, CliError> {
    if !(a.precision > 0.0 && a.precision < 1.0) {
        return Err(input(format!("precision must lie in (0, 1), got {}", a.precision)));
    }
    let l = load(&a.config)?;
    let curve = curve_of(&l)?;
    let signs = match (&a.signs, l.haas_d) {
        (Some(s), _) => match s.as_slice() {
            [x, y] if x.abs() == 1 && y.abs() == 1 => [*x, *y],
            _ => return Err(input("--signs takes two entries, each 1 or -1")),
        },
        (None, Some(_)) => HaasSystem::chamber_signs(&curve)?,
        (None, None) => [1, 1],
    };
    let critical = CriticalSet::compute(&curve, &NodeOptions::with_precision(a.precision))?;
    let features = critical.counts();
    if !critical.unresolved.is_empty() {
        let reason = format!("{} node region(s) unresolved at precision {}", critical.unresolved.len(), a.precision);
        let report = PartialChambers { features, critical: &critical, reason: reason.clone() };
        return Ok(Outcome::new(&report, Some(reason)));
    }
    let cusps: Vec<[f64; 2]> = critical.cusps().map(|c| chamber_point(signs, c.point())).collect();
    let nodes: Vec<[f64; 2]> = critical.nodes.iter().map(|n| chamber_point(signs, n.point())).collect();
    let atlas = build_atlas(&curve, critical, &AtlasOptions { chamber_signs: signs })?;

    if let Some(path) = &a.svg {
        let window = match &a.window {
            Some(w) if w.len() == 4 => Window { x: [w[0], w[1]], y: [w[2], w[3]] },
            Some(_) => return Err(input("--window takes xmin,xmax,ymin,ymax")),
            None => default_window(&[cusps.clone(), nodes.clone()].concat(), a.log),
        };
        let lines = sample_curve(&ChartedCurve::new(&curve)?, 4000, 30.0);
        write(path, &emit_svg(Some(&atlas), &lines, signs, window, a.log)?)?;
    }
    let report = ChambersReport { chamber_signs: signs, features, cusps, nodes, atlas: &atlas };
    Ok(Outcome::new(&report, None))
}

fn parse_points(text: &str) -> Result<Vec<Vec<Rational>>, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| input(e.to_string()))?;
    let list = match &v {
        Value::Object(m) => m.get("points").ok_or_else(|| input("expected a \"points\" field"))?,
        other => other,
    };
    let rows = list.as_array().ok_or_else(|| input("points must be a list"))?;
    rows.iter()
        .map(|row| {
            let coords = row.as_array().ok_or_else(|| input("each point must be a list"))?;
            coords
                .iter()
                .map(|c| {
                    let text = match c {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => return Err(input(format!("bad coordinate {c}"))),
                    };
                    Ok(parse_rational(&text)?)
                })
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct CertifyReport {
    certificates: Vec<AlphaCertificate>,
    all_certified: bool,
    distinct: bool,
}

fn certify_all(f: &SparseSystem, points: &[Vec<Rational>]) -> Result<CertifyReport, CliError> {
    f.require_square()?;
    let certificates: Vec<AlphaCertificate> = points.iter().map(|z| certify_point(f, z)).collect::<Result<_, _>>()?;
    Ok(CertifyReport {
        all_certified: certificates.iter().all(|c| c.certified),
        distinct: certify_distinct(&certificates),
        certificates,
    })
}

fn certify_cmd(a: &CertifyArgs) -> Result<Outcome, CliError> {
    let f = SparseSystem::from_json(&read(&a.system)?)?;
    let points = parse_points(&read(&a.points)?)?;
    let report = certify_all(&f, &points)?;
    let partial = (!report.all_certified).then(|| "some points did not certify".to_string());
    Ok(Outcome::new(&report, partial))
}

#[derive(Serialize)]
struct RootReport {
    point: [f64; 2],
    quadrant: &'static str,
}

#[derive(Serialize)]
struct ReferenceReport {
    points: Vec<Vec<String>>,
    #[serde(flatten)]
    certify: CertifyReport,
    /// The specialised test on the same points truncated to six decimals.
    fast_alpha_six_digits: Option<Vec<bool>>,
}

#[derive(Serialize)]
struct HaasReport {
    a: String,
    b: String,
    d: u32,
    signature: QuadrantSignature,
    quadrants: [&'static str; 4],
    distinct: bool,
    resultant_degree: usize,
    roots: Vec<RootReport>,
    certificates: Vec<AlphaCertificate>,
    reference: Option<ReferenceReport>,
    table: Option<Vec<TableRow>>,
    e3: Option<E3Geometry>,
    probe: Option<ProbeReport>,
}

fn truncate_digits(s: &str, digits: usize) -> String {
    match s.find('.') {
        Some(i) => s[..(i + 1 + digits).min(s.len())].to_string(),
        None => s.to_string(),
    }
}

fn parse_adata(text: &str) -> Result<Vec<BigInt>, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| input(e.to_string()))?;
    let list = v.as_array().ok_or_else(|| input("--adata must be a JSON list"))?;
    list.iter()
        .map(|c| {
            let t = match c {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(input(format!("bad coefficient {c}"))),
            };
            let r = parse_rational(&t)?;
            if !r.is_integer() {
                return Err(input(format!("coefficient {t} is not an integer")));
            }
            Ok(r.to_integer())
        })
        .collect()
}

fn haas_cmd(a: &HaasArgs) -> Result<Outcome, CliError> {
    let (pa, pb) = (parse_rational(&a.a)?, parse_rational(&a.b)?);
    let h = HaasSystem::new(pa.clone(), pb.clone(), a.d)?;
    let opts = CountOptions::default();
    let rc = count_roots_quadrants(&h, &opts)?;
    let mut issues = Vec::new();
    if !rc.distinct {
        issues.push("found roots are not certified distinct".to_string());
    }

    let is_counterexample = pa == rat(44, 31) && pb == rat(44, 31) && a.d == 3;
    let reference = match (&a.points, is_counterexample) {
        (Some(path), _) => Some((parse_points(&read(path)?)?, false)),
        (None, true) => {
            let pts =
                FIVE_POINTS.iter().map(|p| p.iter().map(|s| parse_rational(s)).collect()).collect::<Result<_, _>>()?;
            Some((pts, true))
        }
        (None, false) => None,
    };
    let reference = match reference {
        Some((points, printed)) => {
            let certify = certify_all(&h.sparse(), &points)?;
            if !certify.all_certified || !certify.distinct {
                issues.push("reference points did not all certify as distinct roots".into());
            }
            let fast = if printed {
                let six: Vec<bool> = FIVE_POINTS
                    .iter()
                    .map(|p| {
                        let z =
                            [parse_rational(&truncate_digits(p[0], 6))?, parse_rational(&truncate_digits(p[1], 6))?];
                        Ok(haas_fast_alpha(&z)?)
                    })
                    .collect::<Result<_, CliError>>()?;
                Some(six)
            } else {
                None
            };
            Some(ReferenceReport {
                points: points.iter().map(|p| strings(p)).collect(),
                certify,
                fast_alpha_six_digits: fast,
            })
        }
        None => None,
    };

    let table = if a.table { Some(signature_table(&opts)?) } else { None };
    if let Some(rows) = &table {
        for r in rows.iter().filter(|r| !r.matches()) {
            issues.push(format!("table row {} expected {} found {}", r.region, r.expected, r.found));
        }
    }
    let adata = a.adata.as_deref().map(|p| read(p).and_then(|t| parse_adata(&t))).transpose()?;
    let e3 = if a.e3 || adata.is_some() { Some(e3_geometry(adata.as_deref())?) } else { None };
    let probe = a.probe.map(|d| emptiness_probe(d, &opts)).transpose()?;

    let report = HaasReport {
        a: pa.to_string(),
        b: pb.to_string(),
        d: a.d,
        signature: rc.signature,
        quadrants: QuadrantSignature::LABELS,
        distinct: rc.distinct,
        resultant_degree: rc.resultant_degree,
        roots: rc.roots.iter().map(|r| RootReport { point: r.point, quadrant: r.quadrant }).collect(),
        certificates: rc.roots.iter().map(|r| r.certificate.clone()).collect(),
        reference,
        table,
        e3,
        probe,
    };
    let partial = (!issues.is_empty()).then(|| issues.join("; "));
    Ok(Outcome::new(&report, partial))
}

fn bound_cmd(a: &BoundArgs) -> Result<Outcome, CliError> {
    let expected = a.expected.or((a.n == 3).then_some(PRINTED_HEXANOMIAL_BOUND));
    let report = bound_report(a.n, expected)?;
    if let Some(d) = &report.discrepancy {
        eprintln!("discrepancy: {d}");
    }
    Ok(Outcome::new(&report, None))
}
