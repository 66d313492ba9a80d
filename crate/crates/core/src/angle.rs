//! The angle `∢(s, t)` between `∂⁺_{p(s)}` and `∂⁻_{p(t)}` and the
//! partitions of a parameter interval into pieces of angle at least `π - ε`.
//!
//! For `s <= t` the classifier has four outcomes:
//!
//! | lines                                   | value                         |
//! |-----------------------------------------|-------------------------------|
//! | parallel, disjoint                      | `0`                           |
//! | identical                               | `π`                           |
//! | meet at `z`, arc inside `△(p(s),z,p(t))` | `arccos<p'₋(t), -p'₊(s)>`    |
//! | meet at `z`, arc leaves the triangle    | `0`                           |
//!
//! and `∢(s, t) = ∢(t, s)` for `s > t`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::body::{polar_point, ConvexBody, Shape};
use crate::error::{Error, Result};
use crate::geom::{cross, in_triangle, vector_angle, Vec2};
use crate::interval::CircleInterval;
use crate::tangent::{support_line, Side};

/// Arc samples used by the arc-in-triangle test on smooth bodies.
pub const ARC_SAMPLES: usize = 64;

/// Bisection depth after which [`angle_partition`] gives up.
pub const MAX_DEPTH: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleCase {
    ParallelDisjoint,
    EqualLines,
    ProperIntersection,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleResult {
    /// Radians in `[0, π]`.
    pub value: f64,
    pub case: AngleCase,
    /// Intersection point `z`; set only for [`AngleCase::ProperIntersection`].
    pub apex: Option<Vec2>,
}

/// `∢(s, t)`.
pub fn angle(body: &ConvexBody, s: f64, t: f64) -> AngleResult {
    let (s, t) = if s <= t { (s, t) } else { (t, s) };
    let tol = body.tol();
    let l1 = support_line(body, s, Side::Plus);
    let l2 = support_line(body, t, Side::Minus);
    let (d1, d2) = (l1.direction, l2.direction);

    if cross(d1, d2).abs() <= tol * d1.norm() * d2.norm() {
        return if l1.line().distance(l2.base) <= tol {
            AngleResult { value: PI, case: AngleCase::EqualLines, apex: None }
        } else {
            AngleResult { value: 0.0, case: AngleCase::ParallelDisjoint, apex: None }
        };
    }

    let z = l1.line().intersect(&l2.line(), 0.0).expect("non-parallel lines meet");
    let (ps, pt) = (l1.base, l2.base);
    let inside = arc_points(body, s, t).all(|q| in_triangle(q, ps, z, pt, tol));
    if inside {
        AngleResult { value: vector_angle(d2, -d1), case: AngleCase::ProperIntersection, apex: Some(z) }
    } else {
        AngleResult { value: 0.0, case: AngleCase::Outside, apex: None }
    }
}

/// Points that decide whether `p([s, t])` lies in a convex set: the
/// endpoints plus the polygon vertices in between, or a uniform sample on
/// smooth bodies.
fn arc_points(body: &ConvexBody, s: f64, t: f64) -> Box<dyn Iterator<Item = Vec2> + '_> {
    match &body.shape {
        Shape::Polygon(p) => {
            let ends = [polar_point(body, s).point, polar_point(body, t).point];
            let inner = p.params.iter().enumerate().flat_map(move |(j, &q)| {
                [q, q + TAU].into_iter().filter(move |&c| c > s && c < t).map(move |_| p.vertices[j])
            });
            Box::new(ends.into_iter().chain(inner))
        }
        Shape::Ellipse(_) => Box::new((0..=ARC_SAMPLES).map(move |k| {
            let u = if k == ARC_SAMPLES { t } else { s + (t - s) * k as f64 / ARC_SAMPLES as f64 };
            polar_point(body, u).point
        })),
    }
}

/// Knots `a = t₀ < … < t_m = b` with `∢(tₙ, tₙ₊₁) >= π - ε`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub knots: Vec<f64>,
    pub epsilon: f64,
}

impl Partition {
    pub fn segments(&self) -> impl Iterator<Item = CircleInterval> + '_ {
        self.knots.windows(2).map(|w| CircleInterval::new(w[0], w[1]).expect("increasing knots"))
    }

    pub fn len(&self) -> usize {
        self.knots.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Re-check every invariant against `angle`.
    pub fn is_valid(&self, body: &ConvexBody, interval: &CircleInterval) -> bool {
        let k = &self.knots;
        k.len() >= 2
            && k[0] == interval.lo()
            && k[k.len() - 1] == interval.hi()
            && k.windows(2).all(|w| w[0] < w[1])
            && k.windows(2).all(|w| angle(body, w[0], w[1]).value >= PI - self.epsilon)
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(epsilon))
    }
}

/// Partition `interval` so that consecutive knots have angle `>= π - ε`.
///
/// Corners of angle `<= π - ε` inside the interval are seeded as knots; every
/// remaining gap is bisected until it passes.
pub fn angle_partition(body: &ConvexBody, interval: &CircleInterval, epsilon: f64) -> Result<Partition> {
    check_epsilon(epsilon)?;
    if interval.len() <= 0.0 {
        return Err(Error::InvalidInterval {
            lo: interval.lo(),
            hi: interval.hi(),
            reason: "partition needs positive length",
        });
    }
    body.assert_centered();
    let (a, b) = (interval.lo(), interval.hi());
    let threshold = PI - epsilon;

    let mut seeds = vec![a];
    if let Shape::Polygon(p) = &body.shape {
        let mut corners: Vec<f64> = p
            .params
            .iter()
            .flat_map(|&q| [q, q + TAU])
            .filter(|&c| c > a && c < b)
            .filter(|&c| angle(body, c, c).value <= threshold)
            .collect();
        corners.sort_by(f64::total_cmp);
        seeds.extend(corners);
    }
    seeds.push(b);

    let mut knots = vec![a];
    for w in seeds.windows(2) {
        refine(body, w[0], w[1], threshold, 0, &mut knots)?;
    }
    Ok(Partition { knots, epsilon })
}

fn refine(body: &ConvexBody, lo: f64, hi: f64, threshold: f64, depth: usize, out: &mut Vec<f64>) -> Result<()> {
    if angle(body, lo, hi).value >= threshold {
        out.push(hi);
        return Ok(());
    }
    if depth >= MAX_DEPTH {
        return Err(Error::PartitionDepth { lo, hi, depth });
    }
    let mid = 0.5 * (lo + hi);
    refine(body, lo, mid, threshold, depth + 1, out)?;
    refine(body, mid, hi, threshold, depth + 1, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vec2;
    use std::f64::consts::FRAC_PI_2;

    fn diamond() -> ConvexBody {
        ConvexBody::polygon(&[vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(-1.0, 0.0), vec2(0.0, -1.0)]).unwrap()
    }

    fn disc() -> ConvexBody {
        ConvexBody::disc(Vec2::zeros(), 1.0).unwrap()
    }

    #[test]
    fn disc_quarter() {
        let r = angle(&disc(), 0.0, FRAC_PI_2);
        assert_eq!(r.case, AngleCase::ProperIntersection);
        assert!((r.value - FRAC_PI_2).abs() < 1e-14);
        assert!((r.apex.unwrap() - vec2(1.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn diamond_corner_and_face() {
        let r = angle(&diamond(), 0.0, 0.0);
        assert_eq!(r.case, AngleCase::ProperIntersection);
        assert!((r.value - FRAC_PI_2).abs() < 1e-15);
        let r = angle(&diamond(), 0.1, 0.4);
        assert_eq!(r.case, AngleCase::EqualLines);
        assert_eq!(r.value, PI);
    }

    #[test]
    fn antipodal_disc_tangents() {
        let r = angle(&disc(), 0.0, PI);
        assert_eq!(r.case, AngleCase::ParallelDisjoint);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn wide_disc_arc_is_outside() {
        let r = angle(&disc(), 0.0, 4.0);
        assert_eq!(r.case, AngleCase::Outside);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn symmetric() {
        let a = angle(&disc(), 0.3, 1.2);
        let b = angle(&disc(), 1.2, 0.3);
        assert_eq!(a, b);
    }

    #[test]
    fn smooth_point_is_straight() {
        let r = angle(&disc(), 1.0, 1.0);
        assert_eq!(r.case, AngleCase::EqualLines);
    }

    #[test]
    fn disc_partition() {
        let i = CircleInterval::new(0.0, FRAC_PI_2).unwrap();
        let p = angle_partition(&disc(), &i, 0.2).unwrap();
        assert_eq!(p.len(), 8);
        assert!(p.knots.windows(2).all(|w| w[1] - w[0] <= 0.2));
        assert!(p.is_valid(&disc(), &i));
    }

    #[test]
    fn diamond_partitions() {
        let i = CircleInterval::new(0.0, FRAC_PI_2).unwrap();
        let p = angle_partition(&diamond(), &i, 1.5).unwrap();
        assert_eq!(p.knots, vec![0.0, FRAC_PI_2]);
        let i = CircleInterval::new(0.0, PI).unwrap();
        let p = angle_partition(&diamond(), &i, 0.3).unwrap();
        assert_eq!(p.knots.len(), 3);
        assert!((p.knots[1] - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn bad_epsilon() {
        let i = CircleInterval::new(0.0, 1.0).unwrap();
        assert!(matches!(angle_partition(&disc(), &i, 0.0), Err(Error::InvalidEpsilon(_))));
        assert!(matches!(angle_partition(&disc(), &i, 2.0), Err(Error::InvalidEpsilon(_))));
        let s = CircleInterval::singleton(1.0).unwrap();
        assert!(angle_partition(&disc(), &s, 0.1).is_err());
    }
}
