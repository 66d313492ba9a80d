//! Randomized invariant suites, one per module, driven by a single seed.
//!
//! Each suite counts checks and failures and keeps the first failure message.
//! Reports contain no timings so that equal seeds give equal reports.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angle::{angle, angle_partition, AngleCase};
use crate::body::{convex_hull, minkowski_functional, polar_point, BodyKind, ConvexBody};
use crate::geom::{orient, unit, vec2, Vec2};
use crate::interval::CircleInterval;
use crate::motion::{
    chord_motion, dist_to_support_union, im_inf_on_set, im_sup_on_arc, normalized_affine, upper_bound_partition,
};
use crate::operator::{
    barycenter_rigidity, brown_inequality, compression_chain, d_strong, d_weak, deviation_search, mixed_povm,
    random_psd, random_pvm, random_unitary, shift_control_family, symmetry_family, symmetry_identity_residual,
    wot_sot_metrics, CMat, Carrier, Complex64, OperatorMeasure, SearchConfig,
};
use crate::random::{random_body, random_disc, random_ellipse, random_interval_pair, random_polygon};
use crate::tangent::{one_sided_derivative, signed_side, support_line, Side};

pub const SUITES: [&str; 5] = ["body", "tangent", "angle", "motion", "operator"];

const TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        Self { suite: suite.into(), checks: 0, failures: 0, first_failure: None }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(msg());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Run one suite by name; `None` for an unknown name.
pub fn run_suite(name: &str, seed: u64) -> Option<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Some(match name {
        "body" => body_suite(&mut rng),
        "tangent" => tangent_suite(&mut rng),
        "angle" => angle_suite(&mut rng),
        "motion" => motion_suite(&mut rng),
        "operator" => operator_suite(&mut rng, seed),
        _ => return None,
    })
}

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITES.iter().filter_map(|s| run_suite(s, seed)).collect()
}

fn boundary_samples(body: &ConvexBody) -> Vec<Vec2> {
    match body.kind() {
        BodyKind::Polygon => body.vertices().to_vec(),
        _ => (0..360).map(|k| polar_point(body, TAU * k as f64 / 360.0).point).collect(),
    }
}

/// Hull vertices by testing every ordered pair as a candidate edge.
pub fn brute_force_hull(points: &[Vec2], tol: f64) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = Vec::new();
    for &p in points {
        if !pts.iter().any(|q| (q - p).norm() <= tol) {
            pts.push(p);
        }
    }
    let mut out: Vec<Vec2> = Vec::new();
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            if i == j {
                continue;
            }
            let (a, b) = (pts[i], pts[j]);
            let edge = pts.iter().enumerate().all(|(k, &q)| {
                if k == i || k == j {
                    return true;
                }
                let o = orient(a, b, q);
                o > tol || (o.abs() <= tol && (q - a).dot(&(b - a)) > 0.0 && (q - b).dot(&(a - b)) > 0.0)
            });
            if edge {
                for v in [a, b] {
                    if !out.iter().any(|q| (q - v).norm() <= tol) {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

fn body_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut r = SuiteReport::new("body");
    for _ in 0..50 {
        let body = random_body(rng, 12);
        for _ in 0..20 {
            let x = vec2(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let y = vec2(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let lam = rng.random_range(0.01..10.0);
            let (fx, fy) = (minkowski_functional(&body, x), minkowski_functional(&body, y));
            let fl = minkowski_functional(&body, x * lam);
            r.check((fl - lam * fx).abs() <= TOL * (1.0 + lam * fx), || format!("homogeneity at {x:?}"));
            let fs = minkowski_functional(&body, x + y);
            r.check(fs <= fx + fy + TOL, || format!("subadditivity at {x:?}, {y:?}"));
        }
        for _ in 0..200 {
            let t = rng.random::<f64>() * TAU;
            let p = polar_point(&body, t).point;
            r.check((minkowski_functional(&body, p) - 1.0).abs() <= TOL, || format!("f_K(p({t})) != 1"));
            let q = polar_point(&body, t + TAU).point;
            r.check((q - p).norm() <= 1e-14 * p.norm().max(1.0), || format!("periodicity at {t}"));
        }
        // t + 2π is exact for these, so the reduced parameter is t itself
        for k in 0..96 {
            let t = k as f64 / 64.0;
            r.check(polar_point(&body, t + TAU).point == polar_point(&body, t).point, || {
                format!("exact periodicity at {t}")
            });
        }
    }
    for _ in 0..50 {
        let n = rng.random_range(3..=12);
        let pts: Vec<Vec2> = (0..n).map(|_| vec2(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let Ok(hull) = convex_hull(&pts, TOL) else {
            continue;
        };
        let oracle = brute_force_hull(&pts, TOL);
        let same = hull.len() == oracle.len() && hull.iter().all(|v| oracle.iter().any(|w| (v - w).norm() <= TOL));
        r.check(same, || format!("hull mismatch on {pts:?}"));
    }
    r
}

fn tangent_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut r = SuiteReport::new("tangent");
    for _ in 0..200 {
        let body = random_body(rng, 12);
        let samples = boundary_samples(&body);
        for _ in 0..5 {
            let t = rng.random::<f64>() * TAU;
            let side = if rng.random::<bool>() { Side::Plus } else { Side::Minus };
            let line = support_line(&body, t, side);
            let dir = line.direction.norm();
            let worst = samples.iter().map(|&z| signed_side(&line, z) / dir).fold(f64::INFINITY, f64::min);
            r.check(worst >= -TOL, || format!("support side slack {worst:e} at t={t}"));
            r.check(signed_side(&line, Vec2::zeros()) >= 0.0, || format!("origin right of tangent at t={t}"));
            let speed = one_sided_derivative(&body, t, side).norm();
            r.check(speed >= 1.0 / minkowski_functional(&body, unit(t)) - TOL, || format!("speed bound at t={t}"));
        }
        if body.kind() == BodyKind::Polygon {
            let h = 1e-6;
            for v in body.vertices() {
                let t = crate::geom::polar_angle(*v);
                let before = one_sided_derivative(&body, t - h, Side::Plus);
                let after = one_sided_derivative(&body, t + h, Side::Minus);
                let minus = one_sided_derivative(&body, t, Side::Minus);
                let plus = one_sided_derivative(&body, t, Side::Plus);
                r.check((before - minus).norm() <= 1e-4 * minus.norm().max(1.0), || format!("left limit at {t}"));
                r.check((after - plus).norm() <= 1e-4 * plus.norm().max(1.0), || format!("right limit at {t}"));
            }
        }
        let f = |s: f64| minkowski_functional(&body, vec2(1.0, s));
        for _ in 0..5 {
            let mut u = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            u.sort_by(f64::total_cmp);
            let [a, x, b] = u;
            if x - a < 1e-3 || b - x < 1e-3 {
                continue;
            }
            let (q1, q2, q3) = ((f(x) - f(a)) / (x - a), (f(b) - f(a)) / (b - a), (f(b) - f(x)) / (b - x));
            r.check(q1 <= q2 + TOL && q2 <= q3 + TOL, || format!("secant inequality at {a}, {x}, {b}"));
        }
    }
    r
}

fn angle_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut r = SuiteReport::new("angle");
    for _ in 0..40 {
        let body = random_body(rng, 12);
        for _ in 0..20 {
            let s = rng.random::<f64>() * TAU;
            let t = rng.random::<f64>() * TAU;
            let a = angle(&body, s, t);
            r.check(a == angle(&body, t, s), || format!("asymmetric at {s}, {t}"));
            r.check((0.0..=PI).contains(&a.value), || format!("out of range at {s}, {t}"));
        }
        if body.kind() == BodyKind::Polygon {
            let params: Vec<f64> = body.vertices().iter().map(|v| crate::geom::polar_angle(*v)).collect();
            let sum: f64 = params.iter().map(|&t| PI - angle(&body, t, t).value).sum();
            r.check((sum - TAU).abs() <= TOL, || format!("exterior angle sum {sum}"));
            for w in params.windows(2) {
                let (s, t) = (w[0] + 0.3 * (w[1] - w[0]), w[0] + 0.7 * (w[1] - w[0]));
                r.check(angle(&body, s, t).case == AngleCase::EqualLines, || format!("face rule at {s}, {t}"));
            }
        } else {
            let t = rng.random_range(0.5..TAU - 0.5);
            let at = angle(&body, t, t).value;
            let mut prev = f64::INFINITY;
            for n in 4..=20 {
                let h = 0.5f64.powi(n);
                let gap = (angle(&body, t - h, t + h).value - at).abs();
                r.check(gap <= prev + TOL, || format!("continuity not monotone at t={t}, n={n}"));
                prev = gap;
            }
        }
        let (i, _) = random_interval_pair(rng, 0.05);
        for eps in [0.3, 0.1] {
            match angle_partition(&body, &i, eps) {
                Ok(p) => r.check(p.is_valid(&body, &i), || format!("invalid partition of {i:?}")),
                Err(e) => r.check(false, || format!("partition failed: {e}")),
            }
        }
    }
    let disc = random_disc(rng);
    for _ in 0..50 {
        let t = rng.random::<f64>() * 5.0;
        let (s, u) = (t + rng.random::<f64>() * 0.1, t + 0.1 + rng.random::<f64>() * 0.5);
        r.check(angle(&disc, s, u).value >= PI - (u - s) - TOL, || format!("collapse on disc at {s}, {u}"));
    }
    r
}

fn motion_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut r = SuiteReport::new("motion");
    for _ in 0..200 {
        let body = random_body(rng, 12);
        let (i, j) = random_interval_pair(rng, 0.05);
        let Ok(g) = chord_motion(&body, &i) else {
            continue;
        };
        for _ in 0..5 {
            let x = vec2(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let y = vec2(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let d = ((g.apply(x) - g.apply(y)).norm() - (x - y).norm()).abs();
            r.check(d <= 1e-12 * (1.0 + (x - y).norm()), || format!("isometry defect {d:e}"));
        }
        let ga = g.apply(polar_point(&body, i.lo()).point);
        let gb = g.apply(polar_point(&body, i.hi()).point);
        r.check(ga.y.abs() <= 1e-12 && gb.norm() <= 1e-12 && ga.x < 0.0, || format!("anchors {ga:?} {gb:?}"));
        for t in i.samples(64) {
            let im = g.apply(polar_point(&body, t).point).y;
            r.check(im <= TOL, || format!("arc above chord at t={t}"));
        }
        let Ok(c) = dist_to_support_union(&body, &i, &j) else {
            continue;
        };
        let inf = im_inf_on_set(&body, &g, &j);
        r.check(inf >= c - TOL, || format!("inf {inf} < c {c} for {i:?} {j:?}"));
        let (a, b) = (i.lo() + 0.25 * i.len() * rng.random::<f64>(), i.hi() - 0.25 * i.len() * rng.random::<f64>());
        if let Ok(inner) = CircleInterval::new(a, b) {
            if let Ok(ci) = dist_to_support_union(&body, &inner, &j) {
                r.check(c <= ci + TOL, || format!("nested monotonicity {c} > {ci}"));
            }
        }
        if let Ok(gt) = normalized_affine(&body, &i, &j) {
            let f = gt.function;
            let min_j = j.samples(64).map(|t| f.eval(polar_point(&body, t).point)).fold(f64::INFINITY, f64::min);
            r.check(min_j >= 1.0 - TOL, || format!("g̃ < 1 on p(J): {min_j}"));
            let all = (0..256).map(|k| f.eval(polar_point(&body, TAU * k as f64 / 256.0).point));
            let min_k = all.fold(f64::INFINITY, f64::min);
            r.check(min_k >= -TOL, || format!("g̃ < 0 on boundary: {min_k}"));
            let max_i = i.samples(64).map(|t| f.eval(polar_point(&body, t).point)).fold(0.0, f64::max);
            r.check(max_i <= gt.ratio() + TOL, || format!("g̃ above ratio on p(I): {max_i}"));
        }
        let eps = [0.3, 0.1, 0.01][rng.random_range(0..3)];
        if let Ok(tab) = upper_bound_partition(&body, &i, eps) {
            for row in &tab.rows {
                r.check(row.sup <= eps * row.chord + TOL, || format!("segment ratio {} > {eps}", row.ratio));
                let seg = CircleInterval::new(row.lo, row.hi).expect("row");
                let gs = chord_motion(&body, &seg).expect("row chord");
                let resup = im_sup_on_arc(&body, &gs, &seg);
                r.check((resup - row.sup).abs() <= TOL, || "sup table not reproducible".into());
            }
        }
    }
    r
}

fn operator_suite(rng: &mut ChaCha8Rng, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("operator");
    for _ in 0..100 {
        let n = rng.random_range(2..=12);
        let a = random_psd(n, rng.random_range(1..=n), rng);
        let u = random_unitary(n, rng);
        let mut cuts: Vec<usize> = (1..n).filter(|_| rng.random::<bool>()).collect();
        cuts.insert(0, 0);
        cuts.push(n);
        let blocks: Vec<CMat> = cuts
            .windows(2)
            .map(|w| {
                let cols = u.columns(w[0], w[1] - w[0]);
                cols * cols.adjoint()
            })
            .collect();
        match brown_inequality(&a, &blocks) {
            Ok(rep) => r.check(rep.holds(TOL), || format!("brown {} > {}", rep.lhs, rep.rhs)),
            Err(e) => r.check(false, || format!("brown: {e}")),
        }
    }

    let disc = crate::body::ConvexBody::disc(Vec2::zeros(), 1.0).expect("unit disc");
    let i = CircleInterval::new(0.0, PI / 2.0).expect("I");
    let j = CircleInterval::new(PI, 1.5 * PI).expect("J");
    for _ in 0..10 {
        let pvm = random_pvm(&disc, &[i, j], 8, rng).expect("pvm on disc");
        let povm = mixed_povm(&pvm, 1e-10, rng);
        for eps in [1e-1, 1e-2, 1e-3] {
            match compression_chain(&disc, &pvm, &povm, &i, &j, eps) {
                Ok(rep) => r.check(rep.holds && rep.norm <= TAU * eps / rep.c, || format!("chain at eps={eps}")),
                Err(e) => r.check(false, || format!("chain: {e}")),
            }
        }
    }
    let ellipse = random_ellipse(rng);
    let poly = random_polygon(rng, 8);
    for body in [ellipse, poly] {
        let (bi, bj) = random_interval_pair(rng, 0.3);
        let Ok(pvm) = random_pvm(&body, &[bi, bj], 4, rng) else {
            continue;
        };
        let povm = mixed_povm(&pvm, 1e-10, rng);
        match compression_chain(&body, &pvm, &povm, &bi, &bj, 0.1) {
            Ok(rep) => r.check(rep.holds, || format!("chain on random body {bi:?} {bj:?}")),
            Err(e) => r.check(matches!(e, crate::Error::ShrinkExhausted { .. }), || format!("chain: {e}")),
        }
    }

    let diamond = [vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(-1.0, 0.0), vec2(0.0, -1.0)];
    for &v in &diamond {
        let ok = barycenter_rigidity(&diamond, v).map(|b| b.unique).unwrap_or(false);
        r.check(ok, || format!("vertex {v:?} not rigid"));
    }
    let center = barycenter_rigidity(&diamond, Vec2::zeros()).map(|b| b.vertices.len()).unwrap_or(0);
    r.check(center >= 2, || "center has a unique representing measure".into());

    let cfg = SearchConfig { restarts: 10, seed, iterations: 100 };
    let pvm = OperatorMeasure::diagonal_pvm(&diamond);
    let v0 = diamond[0];
    match deviation_search(&diamond, &pvm, &|z| z == v0, &cfg) {
        Ok(d) => r.check(d.max <= 1e-6, || format!("diamond deviation {}", d.max)),
        Err(e) => r.check(false, || format!("search: {e}")),
    }
    let grid = [vec2(-1.0, 0.0), Vec2::zeros(), vec2(1.0, 0.0)];
    match deviation_search(&grid, &OperatorMeasure::dirac(Vec2::zeros(), 1), &|z| z == Vec2::zeros(), &cfg) {
        Ok(d) => r.check(d.max >= 0.1, || format!("segment control deviation {}", d.max)),
        Err(e) => r.check(false, || format!("search: {e}")),
    }

    let zero = CMat::zeros(64, 64);
    if let Ok(rows) = wot_sot_metrics(&shift_control_family(64, 32), &zero, None) {
        for row in rows {
            r.check(row.d_w <= 2f64.powi(1 - row.index as i32), || format!("d_W at n={}", row.index));
            r.check(row.d_s >= 0.25, || format!("d_S at n={}", row.index));
        }
    }
    let dim = 32;
    let signs: Vec<f64> = (0..dim).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let (family, limit) = symmetry_family(&signs);
    let carrier = Carrier::Points(vec![vec2(-1.0, 0.0), vec2(1.0, 0.0)]);
    match wot_sot_metrics(&family, &limit, Some(&carrier)) {
        Ok(rows) => {
            for (row, a_n) in rows.iter().zip(&family) {
                for k in 0..dim {
                    let e = nalgebra::DVector::from_fn(dim, |i, _| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0));
                    let res = symmetry_identity_residual(a_n, &limit, &e);
                    r.check(res <= TOL, || format!("symmetry identity residual {res:e}"));
                    let diff = ((a_n - &limit) * &e).norm_squared();
                    let weak = ((a_n - &limit) * &e).dotc(&(&limit * &e)).norm();
                    r.check(diff <= 2.0 * weak + TOL, || format!("SOT not controlled at n={}", row.index));
                }
                r.check(d_weak(a_n, &limit) == row.d_w && d_strong(a_n, &limit) == row.d_s, || {
                    "metric mismatch".into()
                });
            }
            r.check(rows.windows(2).all(|w| w[1].d_w <= w[0].d_w && w[1].d_s <= w[0].d_s), || "not monotone".into());
            r.check(rows.last().is_some_and(|l| l.d_s == 0.0), || "family does not reach its limit".into());
        }
        Err(e) => r.check(false, || format!("symmetry family: {e}")),
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_hull_drops_interior_and_collinear() {
        let pts = [vec2(0.0, 0.0), vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(0.2, 0.2), vec2(0.5, 0.0)];
        let h = brute_force_hull(&pts, 1e-12);
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn all_suites_pass() {
        for rep in run_all(7) {
            assert!(rep.passed(), "{rep:?}");
            assert!(rep.checks > 0);
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", 1).is_none());
    }
}
