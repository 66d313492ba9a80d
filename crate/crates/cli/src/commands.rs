use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context};
use hyperrigid::geom::{polar_angle, Vec2};
use hyperrigid::motion::rigidity_bound_sets;
use hyperrigid::operator::{
    deviation_search, shift_control_family, symmetry_family, symmetry_identity_residual, validate_measure, Atom, CMat,
    Carrier, Complex64, SearchConfig,
};
use hyperrigid::{
    angle_partition, center_body, extreme_parameters, perimeter, polar_point, verify, wot_sot_metrics, BodyKind,
    BodySpec, CircleInterval, ConvexBody, Error, ExtremeSet, MeasureKind, OperatorMeasure, Shrink,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{fmt_num, Report};
use crate::Family;

/// A report, and the reason for exit status 2 if verification failed.
pub struct Outcome {
    pub report: Report,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self { report, failure: None }
    }
}

enum Loaded {
    Body {
        body: ConvexBody,
        offset: Vec2,
    },
    /// Zero-area input: every continuous function on the two endpoints is affine.
    Segment,
}

fn load_body(path: &Path, tol: f64) -> anyhow::Result<Loaded> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec: BodySpec = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let body = match ConvexBody::from_spec(&spec) {
        Ok(b) => b.with_tolerance(tol),
        Err(Error::EmptyInterior) => return Ok(Loaded::Segment),
        Err(e) => return Err(e).with_context(|| format!("building body from {}", path.display())),
    };
    if body.is_centered() {
        return Ok(Loaded::Body { body, offset: Vec2::zeros() });
    }
    let (body, offset) = center_body(&body)?;
    Ok(Loaded::Body { body, offset })
}

fn segment_outcome() -> Outcome {
    let json = json!({
        "body": "segment",
        "trivially_rigid": true,
        "note": "zero-area body: every continuous function on the endpoints is affine",
    });
    Outcome::ok(
        Report::json(json).with_table(vec!["body", "trivially_rigid"], vec![vec!["segment".into(), "true".into()]]),
    )
}

fn split(pairs: &[(f64, f64)]) -> anyhow::Result<Vec<CircleInterval>> {
    let mut out = Vec::new();
    for &(a, b) in pairs {
        out.extend(CircleInterval::split_wrapping(a, b)?);
    }
    Ok(out)
}

fn interval_json(iv: &CircleInterval) -> Value {
    json!({ "lo": iv.lo(), "hi": iv.hi() })
}

pub fn body(path: &Path, samples: usize, tol: f64) -> anyhow::Result<Outcome> {
    let Loaded::Body { body, offset } = load_body(path, tol)? else {
        return Ok(segment_outcome());
    };
    ensure!(samples > 0, "--samples must be positive");
    let extreme = match extreme_parameters(&body) {
        ExtremeSet::All => json!("all"),
        ExtremeSet::Finite(ts) => Value::Array(
            ts.iter()
                .map(|&t| {
                    let p = polar_point(&body, t).point;
                    json!({ "t": t, "x": p.x, "y": p.y })
                })
                .collect(),
        ),
    };
    let kind = match body.kind() {
        BodyKind::Polygon => "polygon",
        BodyKind::Disc => "disc",
        BodyKind::Ellipse => "ellipse",
    };
    let json = json!({
        "L": perimeter(&body),
        "kind": kind,
        "offset": [offset.x, offset.y],
        "extreme_points": extreme,
        "tol": body.tol(),
    });
    let rows = (0..samples)
        .map(|k| {
            let t = TAU * k as f64 / samples as f64;
            let p = polar_point(&body, t).point;
            vec![fmt_num(t), fmt_num(p.x), fmt_num(p.y)]
        })
        .collect();
    Ok(Outcome::ok(Report::json(json).with_table(vec!["t", "x", "y"], rows)))
}

pub fn partition(path: &Path, i: &[(f64, f64)], eps: f64, tol: f64) -> anyhow::Result<Outcome> {
    let Loaded::Body { body, .. } = load_body(path, tol)? else {
        return Ok(segment_outcome());
    };
    let mut pieces = Vec::new();
    let mut rows = Vec::new();
    for (k, iv) in split(i)?.iter().enumerate() {
        let p = angle_partition(&body, iv, eps)?;
        rows.extend(p.knots.iter().map(|&t| vec![k.to_string(), fmt_num(t)]));
        pieces.push(json!({ "lo": iv.lo(), "hi": iv.hi(), "knots": p.knots }));
    }
    let json = json!({ "epsilon": eps, "pieces": pieces });
    Ok(Outcome::ok(Report::json(json).with_table(vec!["piece", "knot"], rows)))
}

pub enum Epsilon {
    Fixed(f64),
    /// Solve `ε·L/c = target`.
    Target(f64),
}

/// What remains of one piece of `I` after separating it from `J`.
struct Resolved {
    piece: CircleInterval,
    interval: Option<CircleInterval>,
    c: Option<f64>,
    shrink: Value,
}

fn shrink_trace(body: &ConvexBody, piece: &CircleInterval, js: &[CircleInterval]) -> Vec<Value> {
    let Some(hull) = extreme_parameters(body).extreme_hull(piece, body.tol()) else {
        return Vec::new();
    };
    let mut trace = Vec::new();
    let mut n: u64 = 8;
    while n <= hyperrigid::motion::SHRINK_LIMIT {
        let (lo, hi) = (hull.lo() + 1.0 / n as f64, hull.hi() - 1.0 / n as f64);
        if let Ok(cand) = CircleInterval::new(lo, hi) {
            let c = hyperrigid::motion::dist_to_support_union_sets(body, &cand, js).unwrap_or(f64::NAN);
            trace.push(json!({ "n": n, "lo": lo, "hi": hi, "c": c }));
        }
        n *= 2;
    }
    trace
}

fn resolve(body: &ConvexBody, piece: CircleInterval, js: &[CircleInterval]) -> anyhow::Result<Result<Resolved, Value>> {
    let tol = body.tol();
    if piece.len() > 0.0 {
        let c = hyperrigid::motion::dist_to_support_union_sets(body, &piece, js)?;
        if c > tol {
            return Ok(Ok(Resolved { piece, interval: Some(piece), c: Some(c), shrink: Value::Null }));
        }
    }
    let shrink = match hyperrigid::shrink_interval(body, &piece, js, &[]) {
        Ok(s) => s,
        Err(Error::ShrinkExhausted { .. }) => {
            return Ok(Err(json!({
                "piece": interval_json(&piece),
                "trace": shrink_trace(body, &piece, js),
            })))
        }
        Err(e) => return Err(e.into()),
    };
    let (interval, c) = match &shrink {
        Shrink::Separated { c } => (Some(piece), Some(*c)),
        Shrink::NoExtremePoints | Shrink::Singleton { .. } => (None, None),
        Shrink::Shrunk { interval, c, .. } => (Some(*interval), Some(*c)),
    };
    Ok(Ok(Resolved { piece, interval, c, shrink: serde_json::to_value(&shrink)? }))
}

pub fn bound(path: &Path, i: &[(f64, f64)], j: &[(f64, f64)], eps: Epsilon, tol: f64) -> anyhow::Result<Outcome> {
    let Loaded::Body { body, .. } = load_body(path, tol)? else {
        return Ok(segment_outcome());
    };
    let (is, js) = (split(i)?, split(j)?);
    for a in &is {
        for b in &js {
            ensure!(a.is_disjoint(b), "I piece [{}, {}] meets J piece [{}, {}]", a.lo(), a.hi(), b.lo(), b.hi());
        }
    }
    let length = perimeter(&body);
    let mut resolved = Vec::new();
    for piece in is {
        match resolve(&body, piece, &js)? {
            Ok(r) => resolved.push(r),
            Err(trace) => {
                let json = json!({ "status": "unresolved", "L": length, "step2": trace });
                let msg = format!(
                    "c <= {} on [{}, {}] for every shrink 1/n; trace in report",
                    body.tol(),
                    piece.lo(),
                    piece.hi()
                );
                return Ok(Outcome { report: Report::json(json), failure: Some(msg) });
            }
        }
    }
    let c = resolved.iter().filter_map(|r| r.c).reduce(f64::min);
    let epsilon = match eps {
        Epsilon::Fixed(e) => e,
        Epsilon::Target(t) => {
            ensure!(t.is_finite() && t > 0.0, "--target must be positive, got {t}");
            match c {
                Some(c) => t * c / length,
                None => t.min(1.0),
            }
        }
    };
    ensure!(epsilon > 0.0 && epsilon < std::f64::consts::FRAC_PI_2, "epsilon {epsilon} must lie in (0, π/2)");

    let mut pieces = Vec::new();
    let mut rows = Vec::new();
    let mut chord_bound = 0.0;
    for r in &resolved {
        let mut entry = json!({ "piece": interval_json(&r.piece), "shrink": r.shrink });
        if let Some(iv) = r.interval {
            let rb = rigidity_bound_sets(&body, &iv, &js, epsilon)?;
            chord_bound += rb.bound;
            for row in &rb.table.rows {
                rows.push([row.lo, row.hi, row.chord, row.sup, row.ratio].iter().map(|&x| fmt_num(x)).collect());
            }
            entry["interval"] = interval_json(&iv);
            entry["c"] = json!(rb.c);
            entry["chord_bound"] = json!(rb.bound);
            entry["rows"] = serde_json::to_value(&rb.table.rows)?;
        }
        pieces.push(entry);
    }
    let json = json!({
        "L": length,
        "c": c,
        "epsilon": epsilon,
        "bound": c.map_or(0.0, |c| epsilon * length / c),
        "chord_bound": chord_bound,
        "pieces": pieces,
    });
    Ok(Outcome::ok(Report::json(json).with_table(vec!["t_n", "t_next", "chord", "sup", "ratio"], rows)))
}

pub fn verify(suite: &str, seed: u64) -> anyhow::Result<Outcome> {
    let reports = if suite == "all" {
        verify::run_all(seed)
    } else {
        match verify::run_suite(suite, seed) {
            Some(r) => vec![r],
            None => bail!("unknown suite `{suite}`; expected all or one of {}", verify::SUITES.join(", ")),
        }
    };
    let failure = reports.iter().find(|r| !r.passed()).map(|r| {
        format!(
            "suite {} failed {} of {} checks: {}",
            r.suite,
            r.failures,
            r.checks,
            r.first_failure.as_deref().unwrap_or("")
        )
    });
    let rows = reports.iter().map(|r| vec![r.suite.clone(), r.checks.to_string(), r.failures.to_string()]).collect();
    let json = json!({ "seed": seed, "passed": failure.is_none(), "suites": reports });
    Ok(Outcome { report: Report::json(json).with_table(vec!["suite", "checks", "failures"], rows), failure })
}

pub struct RigidityArgs {
    pub body: Option<PathBuf>,
    pub pvm: Option<PathBuf>,
    pub intervals: Vec<(f64, f64)>,
    pub sites: usize,
    pub cfg: SearchConfig,
    pub threshold: f64,
}

fn load_pvm(path: &Path, shift: Vec2, body: Option<&ConvexBody>) -> anyhow::Result<OperatorMeasure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let m = OperatorMeasure::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    ensure!(m.kind == MeasureKind::Pvm, "{} is not a pvm", path.display());
    let atoms = m.atoms().iter().map(|a| Atom { site: a.site + shift, weight: a.weight.clone() }).collect();
    let m = OperatorMeasure::new(MeasureKind::Pvm, m.dimension(), atoms)?;
    let diag = validate_measure(&m, body);
    ensure!(diag.valid && diag.is_pvm, "{}: {}", path.display(), diag.issues.join("; "));
    Ok(m)
}

pub fn rigidity(args: &RigidityArgs, tol: f64) -> anyhow::Result<Outcome> {
    let loaded = args.body.as_deref().map(|p| load_body(p, tol)).transpose()?;
    let (body, offset) = match loaded {
        Some(Loaded::Segment) => return Ok(segment_outcome()),
        Some(Loaded::Body { body, offset }) => (Some(body), offset),
        None => (None, Vec2::zeros()),
    };
    let pvm = match (&args.pvm, &body) {
        (Some(p), b) => load_pvm(p, offset, b.as_ref())?,
        (None, Some(b)) => {
            let sites: Vec<Vec2> = match b.kind() {
                BodyKind::Polygon => b.vertices().to_vec(),
                _ => {
                    ensure!(args.sites > 0, "--sites must be positive");
                    (0..args.sites).map(|k| polar_point(b, TAU * k as f64 / args.sites as f64).point).collect()
                }
            };
            OperatorMeasure::diagonal_pvm(&sites)
        }
        (None, None) => bail!("need --body or --pvm"),
    };
    ensure!(args.threshold >= 0.0, "--threshold must be nonnegative");
    let intervals = split(&args.intervals)?;
    let in_f = |z: Vec2| intervals.iter().any(|iv| iv.contains(polar_angle(z), 0.0));
    let sites: Vec<Vec2> = pvm.atoms().iter().map(|a| a.site).collect();
    let dev = deviation_search(&sites, &pvm, &in_f, &args.cfg)?;
    let rigid = dev.max <= args.threshold;
    let mut json = json!({
        "deviation": dev.max,
        "threshold": args.threshold,
        "rigid": rigid,
        "residual": dev.residual,
        "per_restart": dev.per_restart,
        "steps": dev.steps,
        "sites": sites.len(),
        "in_set": sites.iter().filter(|&&z| in_f(z)).count(),
        "dimension": pvm.dimension(),
        "seed": args.cfg.seed,
    });
    if !rigid {
        json["witness"] = serde_json::to_value(dev.witness.to_spec())?;
    }
    let rows = dev.per_restart.iter().enumerate().map(|(k, d)| vec![k.to_string(), fmt_num(*d)]).collect();
    let failure = (!rigid).then(|| format!("deviation {} exceeds threshold {}", dev.max, args.threshold));
    Ok(Outcome { report: Report::json(json).with_table(vec!["restart", "deviation"], rows), failure })
}

const METRIC_TOL: f64 = 1e-9;

pub fn wotsot(family: Family, dim: usize, count: usize, seed: u64) -> anyhow::Result<Outcome> {
    ensure!(dim > 0, "--dim must be positive");
    let mut failures = Vec::new();
    let (name, rows, extra) = match family {
        Family::Shift => {
            ensure!(count > 0, "--count must be positive");
            let rows = wot_sot_metrics(&shift_control_family(dim, count), &CMat::zeros(dim, dim), None)?;
            for r in &rows {
                if r.d_w > 2f64.powi(1 - r.index as i32) {
                    failures.push(format!("d_W = {} at n = {}", r.d_w, r.index));
                }
                if r.d_s < 0.25 {
                    failures.push(format!("d_S = {} at n = {}", r.d_s, r.index));
                }
            }
            ("shift", rows, json!({}))
        }
        Family::Symmetry => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let signs: Vec<f64> = (0..dim).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
            let (fam, limit) = symmetry_family(&signs);
            let carrier = Carrier::Points(vec![Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0)]);
            let rows = wot_sot_metrics(&fam, &limit, Some(&carrier))?;
            let mut max_res: f64 = 0.0;
            for (a_n, r) in fam.iter().zip(&rows) {
                for k in 0..dim {
                    let e = nalgebra::DVector::from_fn(dim, |i, _| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0));
                    max_res = max_res.max(symmetry_identity_residual(a_n, &limit, &e));
                    let d = (a_n - &limit) * &e;
                    if d.norm_squared() > 2.0 * d.dotc(&(&limit * &e)).norm() + METRIC_TOL {
                        failures.push(format!("strong distance not controlled at n = {}", r.index));
                    }
                }
            }
            if max_res > METRIC_TOL {
                failures.push(format!("identity residual {max_res:e}"));
            }
            ("symmetry", rows, json!({ "max_identity_residual": max_res, "seed": seed }))
        }
    };
    let table = rows.iter().map(|r| vec![r.index.to_string(), fmt_num(r.d_w), fmt_num(r.d_s)]).collect();
    let mut json = json!({
        "family": name,
        "dim": dim,
        "rows": rows,
        "passed": failures.is_empty(),
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut json, extra) {
        m.extend(e);
    }
    let failure = failures.first().map(|f| format!("{} family check failed: {f}", name));
    Ok(Outcome { report: Report::json(json).with_table(vec!["n", "d_w", "d_s"], table), failure })
}
