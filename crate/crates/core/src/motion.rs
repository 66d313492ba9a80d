//! Chord motions `g_I`, the normalized affine functions `g̃_I`, and the
//! upper/lower estimates that combine into the rigidity bound `ε·L/c`.
//!
//! `g_I` is the rotation-plus-translation that sends `p(b)` to the origin and
//! `p(a)` onto the negative real axis. The arc `p([a, b])` then lies in the
//! closed lower half-plane and the rest of the boundary in the upper one.
//! All distances are measured to full lines, never to clipped segments.

use serde::{Deserialize, Serialize};

use crate::angle::{angle_partition, check_epsilon, Partition};
use crate::body::{extreme_parameters, perimeter, polar_point, ConvexBody, Shape};
use crate::error::{Error, Result};
use crate::geom::{Line, Vec2};
use crate::interval::CircleInterval;
use crate::tangent::{support_line, Side};

/// Samples of the bracketing pass before golden-section refinement on smooth arcs.
pub const BRACKET_SAMPLES: usize = 256;

/// Orientation-preserving isometry `z ↦ e^{iθ} z + c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidMotion {
    pub rotation: f64,
    pub translation: [f64; 2],
    #[serde(skip)]
    cos: f64,
    #[serde(skip)]
    sin: f64,
}

impl RigidMotion {
    pub fn new(rotation: f64, translation: Vec2) -> Self {
        let (sin, cos) = rotation.sin_cos();
        Self { rotation, translation: [translation.x, translation.y], cos, sin }
    }

    pub fn identity() -> Self {
        Self::new(0.0, Vec2::zeros())
    }

    #[inline]
    pub fn apply(&self, z: Vec2) -> Vec2 {
        Vec2::new(
            self.cos * z.x - self.sin * z.y + self.translation[0],
            self.sin * z.x + self.cos * z.y + self.translation[1],
        )
    }

    /// `Im(g(z))` as an affine function of `z`.
    pub fn imaginary_part(&self) -> AffineFunction {
        AffineFunction { a: self.sin, b: self.cos, c: self.translation[1] }
    }
}

/// `(x, y) ↦ a x + b y + c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineFunction {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl AffineFunction {
    #[inline]
    pub fn eval(&self, z: Vec2) -> f64 {
        self.a * z.x + self.b * z.y + self.c
    }

    /// Signed distance to the line, positive on its left.
    pub fn from_line(line: &Line) -> Self {
        let d = line.direction / line.direction.norm();
        // <z - base, i d> = -d.y (z.x - bx) + d.x (z.y - by)
        Self { a: -d.y, b: d.x, c: d.y * line.base.x - d.x * line.base.y }
    }
}

/// The rigid motion flattening the chord `[p(a), p(b)]` onto `(-|chord|, 0) .. (0, 0)`.
pub fn chord_motion(body: &ConvexBody, interval: &CircleInterval) -> Result<RigidMotion> {
    let (a, b) = (interval.lo(), interval.hi());
    let pa = polar_point(body, a).point;
    let pb = polar_point(body, b).point;
    let d = pb - pa;
    let len = d.norm();
    if len <= body.tol() {
        return Err(Error::DegenerateChord { lo: a, hi: b });
    }
    let (cos, sin) = (d.x / len, -d.y / len);
    let rotation = sin.atan2(cos);
    let rot_b = Vec2::new(cos * pb.x - sin * pb.y, sin * pb.x + cos * pb.y);
    Ok(RigidMotion { rotation, translation: [-rot_b.x, -rot_b.y], cos, sin })
}

#[derive(Clone, Copy, PartialEq)]
enum Extremum {
    Max,
    Min,
}

/// Extremum of `|f(p(t))|` over `t ∈ interval` for an affine `f`.
///
/// Polygons: `f` is affine along edges, so the extremes sit at the endpoints
/// and the vertices in between (a sign change along an edge gives min `0`).
/// Smooth bodies: a bracketing pass followed by golden-section refinement.
fn arc_extremum(body: &ConvexBody, interval: &CircleInterval, f: &AffineFunction, mode: Extremum) -> f64 {
    let value = |t: f64| f.eval(polar_point(body, t).point);
    let (a, b) = (interval.lo(), interval.hi());
    if interval.is_singleton() {
        return value(a).abs();
    }
    let pick = |x: f64, y: f64| match mode {
        Extremum::Max => x.max(y),
        Extremum::Min => x.min(y),
    };
    match &body.shape {
        Shape::Polygon(_) => {
            let mut ts = vec![a];
            if let Some(inner) = extreme_parameters(body).within(interval, 0.0) {
                ts.extend(inner.into_iter().filter(|&t| t > a && t < b));
            }
            ts.push(b);
            let vals: Vec<f64> = ts.iter().map(|&t| value(t)).collect();
            if mode == Extremum::Min && vals.windows(2).any(|w| w[0] * w[1] <= 0.0) {
                return 0.0;
            }
            vals.iter().map(|v| v.abs()).fold(if mode == Extremum::Max { 0.0 } else { f64::INFINITY }, pick)
        }
        Shape::Ellipse(_) => {
            let n = BRACKET_SAMPLES;
            let ts: Vec<f64> = interval.samples(n).collect();
            let vals: Vec<f64> = ts.iter().map(|&t| value(t)).collect();
            if mode == Extremum::Min && vals.windows(2).any(|w| w[0] * w[1] <= 0.0) {
                return 0.0;
            }
            let abs: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
            let best = (0..abs.len())
                .reduce(|i, j| if pick(abs[i], abs[j]) == abs[j] && abs[j] != abs[i] { j } else { i })
                .unwrap();
            let lo = ts[best.saturating_sub(1)];
            let hi = ts[(best + 1).min(n)];
            let refined = golden(|t| value(t).abs(), lo, hi, mode);
            pick(abs[best], refined)
        }
    }
}

fn golden(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mode: Extremum) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let better = |x: f64, y: f64| match mode {
        Extremum::Max => x > y,
        Extremum::Min => x < y,
    };
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo < 1e-14 {
            break;
        }
        if better(f1, f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let (fl, fh) = (f(lo), f(hi));
    [f1, f2, fl, fh].into_iter().fold(f1, |acc, v| if better(v, acc) { v } else { acc })
}

/// `‖Im(g)‖_{p(I),∞}`.
pub fn im_sup_on_arc(body: &ConvexBody, motion: &RigidMotion, interval: &CircleInterval) -> f64 {
    arc_extremum(body, interval, &motion.imaginary_part(), Extremum::Max)
}

/// `inf_{p(J)} |Im(g)|`.
pub fn im_inf_on_set(body: &ConvexBody, motion: &RigidMotion, j: &CircleInterval) -> f64 {
    arc_extremum(body, j, &motion.imaginary_part(), Extremum::Min)
}

/// Distance from the arc `p(J)` to a full line.
pub fn arc_line_distance(body: &ConvexBody, j: &CircleInterval, line: &Line) -> f64 {
    arc_extremum(body, j, &AffineFunction::from_line(line), Extremum::Min)
}

/// The three lines `∂⁺_{p(α)}`, `∂⁻_{p(β)}`, `[p(α):p(β)]` of `I = [α, β]`.
pub fn support_union(body: &ConvexBody, i: &CircleInterval) -> [Line; 3] {
    let (alpha, beta) = (i.lo(), i.hi());
    let plus = support_line(body, alpha, Side::Plus);
    let minus = support_line(body, beta, Side::Minus);
    [plus.line(), minus.line(), Line::through(plus.base, minus.base)]
}

/// `c = dist(p(J), ∂⁺_{p(α)} ∪ ∂⁻_{p(β)} ∪ [p(α):p(β)])`.
pub fn dist_to_support_union(body: &ConvexBody, i: &CircleInterval, j: &CircleInterval) -> Result<f64> {
    dist_to_support_union_sets(body, i, std::slice::from_ref(j))
}

/// As [`dist_to_support_union`] with `J` a finite union of intervals.
pub fn dist_to_support_union_sets(body: &ConvexBody, i: &CircleInterval, js: &[CircleInterval]) -> Result<f64> {
    check_pair(i, js)?;
    let lines = support_union(body, i);
    Ok(js.iter().flat_map(|j| lines.iter().map(move |l| arc_line_distance(body, j, l))).fold(f64::INFINITY, f64::min))
}

fn check_pair(i: &CircleInterval, js: &[CircleInterval]) -> Result<()> {
    if i.len() <= 0.0 {
        return Err(Error::InvalidInterval { lo: i.lo(), hi: i.hi(), reason: "I must have positive length" });
    }
    if let Some(j) = js.iter().find(|j| !i.is_disjoint(j)) {
        return Err(Error::InvalidInterval { lo: j.lo(), hi: j.hi(), reason: "J must be disjoint from I" });
    }
    Ok(())
}

/// `g̃_I` together with the two quantities it is built from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedAffine {
    pub function: AffineFunction,
    /// `‖Im(g_I)‖_{p(I),∞}`.
    pub sup_on_i: f64,
    /// `inf_{p(J)} |Im(g_I)|`.
    pub inf_on_j: f64,
}

impl NormalizedAffine {
    /// Upper bound of `g̃_I` on `p(I)`.
    pub fn ratio(&self) -> f64 {
        self.sup_on_i / self.inf_on_j
    }
}

/// `g̃_I = (Im(g_I) + ‖Im(g_I)‖_{p(I),∞}) / inf_{p(J)} |Im(g_I)|`.
pub fn normalized_affine(body: &ConvexBody, i: &CircleInterval, j: &CircleInterval) -> Result<NormalizedAffine> {
    normalized_affine_sets(body, i, std::slice::from_ref(j))
}

pub fn normalized_affine_sets(
    body: &ConvexBody,
    i: &CircleInterval,
    js: &[CircleInterval],
) -> Result<NormalizedAffine> {
    let g = chord_motion(body, i)?;
    let sup = im_sup_on_arc(body, &g, i);
    let inf = js.iter().map(|j| im_inf_on_set(body, &g, j)).fold(f64::INFINITY, f64::min);
    if inf <= body.tol() {
        return Err(Error::SupportContact { c: inf });
    }
    let im = g.imaginary_part();
    Ok(NormalizedAffine {
        function: AffineFunction { a: im.a / inf, b: im.b / inf, c: (im.c + sup) / inf },
        sup_on_i: sup,
        inf_on_j: inf,
    })
}

/// One row of the per-segment upper-bound table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentRow {
    pub lo: f64,
    pub hi: f64,
    pub chord: f64,
    pub sup: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundTable {
    pub partition: Partition,
    pub rows: Vec<SegmentRow>,
}

impl UpperBoundTable {
    pub fn chord_sum(&self) -> f64 {
        self.rows.iter().map(|r| r.chord).sum()
    }
}

/// Partition `interval` so that every segment has `sup|Im g| <= ε |chord|`.
///
/// The angle partition is taken at `ε' = arctan ε`, since each segment's ratio
/// is at most `tan(π - ∢) <= tan ε'`.
pub fn upper_bound_partition(body: &ConvexBody, interval: &CircleInterval, epsilon: f64) -> Result<UpperBoundTable> {
    check_epsilon(epsilon)?;
    let partition = angle_partition(body, interval, epsilon.atan())?;
    let rows = partition
        .segments()
        .map(|seg| {
            let pa = polar_point(body, seg.lo()).point;
            let pb = polar_point(body, seg.hi()).point;
            let chord = (pb - pa).norm();
            let g = chord_motion(body, &seg)?;
            let sup = im_sup_on_arc(body, &g, &seg);
            Ok(SegmentRow { lo: seg.lo(), hi: seg.hi(), chord, sup, ratio: sup / chord })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UpperBoundTable { partition, rows })
}

/// Result of the rigidity bound for one interval `I`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityBound {
    /// `Σ (ε/c)|p(tₙ) - p(tₙ₊₁)|`.
    pub bound: f64,
    pub c: f64,
    /// Perimeter `L`.
    pub length: f64,
    pub epsilon: f64,
    pub table: UpperBoundTable,
}

impl RigidityBound {
    /// `ε·L/c`, which dominates [`RigidityBound::bound`].
    pub fn cap(&self) -> f64 {
        self.epsilon * self.length / self.c
    }
}

/// Bound on `‖π(χ_{p(I)}) φ(χ_{p(J)}) π(χ_{p(I)})‖` from the partition of `I`.
pub fn rigidity_bound(
    body: &ConvexBody,
    i: &CircleInterval,
    j: &CircleInterval,
    epsilon: f64,
) -> Result<RigidityBound> {
    rigidity_bound_sets(body, i, std::slice::from_ref(j), epsilon)
}

pub fn rigidity_bound_sets(
    body: &ConvexBody,
    i: &CircleInterval,
    js: &[CircleInterval],
    epsilon: f64,
) -> Result<RigidityBound> {
    check_epsilon(epsilon)?;
    let c = dist_to_support_union_sets(body, i, js)?;
    if c <= body.tol() {
        return Err(Error::SupportContact { c });
    }
    let table = upper_bound_partition(body, i, epsilon)?;
    let bound = epsilon / c * table.chord_sum();
    Ok(RigidityBound { bound, c, length: perimeter(body), epsilon, table })
}

/// Outcome of separating `I` from `J` by shrinking `I` towards its extreme points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Shrink {
    /// Already `c > tol`; nothing to do.
    Separated { c: f64 },
    /// `p(I)` carries no extreme point, so `π(χ_{p(I)}) = 0`.
    NoExtremePoints,
    /// A single extreme point; handled by barycenter rigidity.
    Singleton { t: f64 },
    /// `Ĩ_n = [ã + 1/n, b̃ - 1/n]` with `c > tol`. The endpoints `ã`, `b̃`
    /// are extreme and are handled as singletons.
    Shrunk { hull: CircleInterval, interval: CircleInterval, n: u64, c: f64 },
}

/// Largest `n` tried before giving up.
pub const SHRINK_LIMIT: u64 = 1 << 40;

/// Replace `I` by `conv{p⁻¹(p(I) ∩ ex K)}` and move its endpoints inward by
/// `1/n`, doubling `n` from 8, until `c > tol`.
///
/// Every parameter in `keep` that lies strictly inside the extreme hull (and
/// every interior polygon vertex) must end up inside the shrunk interval.
pub fn shrink_interval(body: &ConvexBody, i: &CircleInterval, js: &[CircleInterval], keep: &[f64]) -> Result<Shrink> {
    let tol = body.tol();
    if i.len() > 0.0 {
        let c = dist_to_support_union_sets(body, i, js)?;
        if c > tol {
            return Ok(Shrink::Separated { c });
        }
    }
    let ex = extreme_parameters(body);
    let Some(hull) = ex.extreme_hull(i, tol) else {
        return Ok(Shrink::NoExtremePoints);
    };
    if hull.is_singleton() {
        return Ok(Shrink::Singleton { t: hull.lo() });
    }
    let (a, b) = (hull.lo(), hull.hi());
    let mut inner: Vec<f64> = keep.iter().copied().filter(|&t| t > a && t < b).collect();
    if let Some(vs) = ex.within(&hull, 0.0) {
        inner.extend(vs.into_iter().filter(|&t| t > a && t < b));
    }
    let mut n: u64 = 8;
    while n <= SHRINK_LIMIT {
        let step = 1.0 / n as f64;
        let (lo, hi) = (a + step, b - step);
        if lo < hi && inner.iter().all(|&t| t >= lo && t <= hi) {
            let cand = CircleInterval::new(lo, hi)?;
            let c = dist_to_support_union_sets(body, &cand, js)?;
            if c > tol {
                return Ok(Shrink::Shrunk { hull, interval: cand, n, c });
            }
        }
        n *= 2;
    }
    Err(Error::ShrinkExhausted { n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vec2;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};

    fn diamond() -> ConvexBody {
        ConvexBody::polygon(&[vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(-1.0, 0.0), vec2(0.0, -1.0)]).unwrap()
    }

    fn disc() -> ConvexBody {
        ConvexBody::disc(Vec2::zeros(), 1.0).unwrap()
    }

    fn iv(a: f64, b: f64) -> CircleInterval {
        CircleInterval::new(a, b).unwrap()
    }

    #[test]
    fn disc_quarter_motion() {
        let g = chord_motion(&disc(), &iv(0.0, FRAC_PI_2)).unwrap();
        assert!((g.rotation + 0.75 * PI).abs() < 1e-15);
        assert!(g.apply(vec2(0.0, 1.0)).norm() < 1e-15);
        assert!((g.apply(vec2(1.0, 0.0)) - vec2(-SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn motion_of_flattened_chord_is_identity() {
        // once a chord has been moved into place, its motion is the identity
        let d = disc();
        let i = iv(0.3, 1.1);
        let g = chord_motion(&d, &i).unwrap();
        let pa = g.apply(polar_point(&d, 0.3).point);
        let pb = g.apply(polar_point(&d, 1.1).point);
        let again = {
            let dir = pb - pa;
            let len = dir.norm();
            let (cos, sin) = (dir.x / len, -dir.y / len);
            RigidMotion::new(sin.atan2(cos), -Vec2::new(cos * pb.x - sin * pb.y, sin * pb.x + cos * pb.y))
        };
        assert!(again.rotation.abs() < 1e-15);
        assert!((again.apply(vec2(0.7, -0.2)) - vec2(0.7, -0.2)).norm() < 1e-15);
        let id = RigidMotion::identity();
        assert_eq!(id.apply(vec2(0.7, -0.2)), vec2(0.7, -0.2));
    }

    #[test]
    fn diamond_face_motion() {
        let d = diamond();
        let i = iv(0.0, FRAC_PI_2);
        let g = chord_motion(&d, &i).unwrap();
        assert!(g.apply(vec2(0.0, 1.0)).norm() < 1e-15);
        assert!((g.apply(vec2(1.0, 0.0)) - vec2(-SQRT_2, 0.0)).norm() < 1e-15);
        assert!(im_sup_on_arc(&d, &g, &i) < 1e-15);
    }

    #[test]
    fn arc_sups() {
        let i = iv(0.0, FRAC_PI_2);
        let g = chord_motion(&disc(), &i).unwrap();
        assert!((im_sup_on_arc(&disc(), &g, &i) - (1.0 - SQRT_2 / 2.0)).abs() < 1e-12);
        let i = iv(0.0, PI);
        let g = chord_motion(&diamond(), &i).unwrap();
        assert!((im_sup_on_arc(&diamond(), &g, &i) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn set_infs() {
        let g = chord_motion(&disc(), &iv(0.0, FRAC_PI_2)).unwrap();
        assert!((im_inf_on_set(&disc(), &g, &iv(PI, 1.5 * PI)) - SQRT_2).abs() < 1e-12);
        let g = chord_motion(&diamond(), &iv(0.0, FRAC_PI_2)).unwrap();
        assert!((im_inf_on_set(&diamond(), &g, &CircleInterval::singleton(PI).unwrap()) - SQRT_2).abs() < 1e-15);
        // J adjacent to I crosses the chord line
        let g = chord_motion(&disc(), &iv(0.0, 0.5)).unwrap();
        assert_eq!(im_inf_on_set(&disc(), &g, &iv(0.5, 1.0)), 0.0);
    }

    #[test]
    fn support_union_distances() {
        let c = dist_to_support_union(&disc(), &iv(0.0, FRAC_PI_2), &iv(PI, 1.5 * PI)).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
        let c = dist_to_support_union(&diamond(), &iv(0.0, FRAC_PI_2), &iv(PI, 1.5 * PI)).unwrap();
        assert!((c - SQRT_2).abs() < 1e-15);
        // J endpoint (-1, 0) lies on ∂⁻ of p(π/2 + 0.3), the line through (0,1) and (-1,0)
        let c = dist_to_support_union(&diamond(), &iv(0.0, FRAC_PI_2 + 0.3), &iv(PI, 1.5 * PI)).unwrap();
        assert!(c < 1e-15);
        assert!(dist_to_support_union(&disc(), &iv(0.0, 1.0), &iv(1.0, 2.0)).is_err());
    }

    #[test]
    fn lines_not_segments() {
        // the chord segment from p(0) to p(0.4) is far from p(J), its line is not
        let d = diamond();
        let c = dist_to_support_union(&d, &iv(0.1, 0.4), &iv(FRAC_PI_2 + 0.1, PI)).unwrap();
        // p(J) is on the edge from (0,1) to (-1,0); the nearest point of the
        // line x + y = 1 is at distance |x + y - 1|/√2 at (0,1) → 0 at t = π/2,
        // J starts just after π/2 so c is small but positive
        let near = polar_point(&d, FRAC_PI_2 + 0.1).point;
        assert!((c - (1.0 - near.x - near.y).abs() / SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn normalized_affine_examples() {
        let n = normalized_affine(&disc(), &iv(0.0, FRAC_PI_2), &iv(PI, 1.5 * PI)).unwrap();
        assert!((n.ratio() - (1.0 - SQRT_2 / 2.0) / SQRT_2).abs() < 1e-12);
        let pb = polar_point(&disc(), FRAC_PI_2).point;
        assert!((n.function.eval(pb) - n.ratio()).abs() < 1e-15);

        let n = normalized_affine(&diamond(), &iv(0.0, FRAC_PI_2), &iv(PI, 1.5 * PI)).unwrap();
        assert_eq!(n.sup_on_i, 0.0);
        assert!(n.function.eval(vec2(0.5, 0.5)).abs() < 1e-15);
        assert!(n.function.eval(vec2(-1.0, 0.0)) >= 1.0 - 1e-15);

        let err = normalized_affine(&disc(), &iv(0.0, 0.5), &iv(0.6, 0.7));
        assert!(err.is_ok());
    }

    #[test]
    fn upper_bounds() {
        let t = upper_bound_partition(&disc(), &iv(0.0, FRAC_PI_2), 0.1).unwrap();
        assert!(t.rows.iter().all(|r| r.ratio <= 0.1));
        let t = upper_bound_partition(&diamond(), &iv(0.0, FRAC_PI_2), 0.1).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].sup, 0.0);
        let t = upper_bound_partition(&disc(), &iv(0.0, PI), 0.05).unwrap();
        assert!(t.chord_sum() <= TAU);
        assert!(t.rows.iter().all(|r| r.ratio <= 0.05));
    }

    #[test]
    fn disc_rigidity_bound() {
        let b = rigidity_bound(&disc(), &iv(0.0, FRAC_PI_2), &iv(PI, 1.5 * PI), 0.01).unwrap();
        assert!((b.c - 1.0).abs() < 1e-12);
        assert!((b.length - TAU).abs() < 1e-15);
        assert!(b.bound <= 0.01 * TAU + 1e-12);
        let b2 = rigidity_bound(&disc(), &iv(0.0, FRAC_PI_2), &iv(PI, 1.5 * PI), 0.001).unwrap();
        assert!(b2.bound <= 0.001 * TAU + 1e-12);
        assert!(b2.bound < b.bound);
        let f = rigidity_bound(&diamond(), &iv(0.0, FRAC_PI_2), &iv(PI, 1.5 * PI), 0.01).unwrap();
        assert!(f.table.rows.iter().all(|r| r.sup == 0.0));
    }

    #[test]
    fn contact_needs_shrink() {
        let d = diamond();
        let i = iv(0.0, FRAC_PI_2 + 0.3);
        let j = iv(PI, 1.5 * PI);
        assert!(matches!(rigidity_bound(&d, &i, &j, 0.1), Err(Error::SupportContact { .. })));
        match shrink_interval(&d, &i, &[j], &[]).unwrap() {
            Shrink::Shrunk { hull, interval, n, c } => {
                assert_eq!((hull.lo(), hull.hi()), (0.0, FRAC_PI_2));
                assert_eq!(n, 8);
                assert!((interval.lo() - 0.125).abs() < 1e-15);
                assert!((c - SQRT_2).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let s = shrink_interval(&d, &iv(0.1, 0.5), &[iv(FRAC_PI_2, PI)], &[]).unwrap();
        assert_eq!(s, Shrink::NoExtremePoints);
        let s = shrink_interval(&d, &iv(0.1, 2.0), &[iv(3.0, 4.0)], &[]).unwrap();
        assert!(matches!(s, Shrink::Separated { .. } | Shrink::Singleton { .. }));
    }
}
