//! One-sided derivatives of the polar parameterization and the supporting
//! lines `∂±_{p(t)}` built from them.
//!
//! Derivatives are exact per representation. On a polygon edge with line
//! `<n, x> = h` the parameterization is `p(t) = h e(t) / <n, e(t)>`, whose
//! derivative is `h / <n, e(t)>² · d` with `d` the edge direction. At a
//! vertex `v` this reduces to `|v|² / h · d`, taking the outgoing edge for
//! the plus side and the incoming edge for the minus side. Ellipses use
//! implicit differentiation of `G(r(t) e(t)) = 0`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::body::{polar_point, ConvexBody, Location, Shape};
use crate::geom::{perp, unit, wrap_angle, Line, Vec2};
use crate::interval::CircleInterval;

/// Which one-sided derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

/// What a [`SupportLine`] was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineKind {
    Plus,
    Minus,
    Chord,
}

impl From<Side> for LineKind {
    fn from(s: Side) -> Self {
        match s {
            Side::Plus => LineKind::Plus,
            Side::Minus => LineKind::Minus,
        }
    }
}

/// Oriented line through a boundary point. Directions are not normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportLine {
    pub base: Vec2,
    pub direction: Vec2,
    pub kind: LineKind,
}

impl SupportLine {
    /// The line `[p(a) : p(b)]` oriented from `p(a)` to `p(b)`.
    pub fn chord(body: &ConvexBody, a: f64, b: f64) -> Self {
        let pa = polar_point(body, a).point;
        let pb = polar_point(body, b).point;
        Self { base: pa, direction: pb - pa, kind: LineKind::Chord }
    }

    pub fn line(&self) -> Line {
        Line::new(self.base, self.direction)
    }
}

/// `p'₊(t)` or `p'₋(t)`, oriented counterclockwise.
pub fn one_sided_derivative(body: &ConvexBody, t: f64, side: Side) -> Vec2 {
    body.assert_centered();
    let tw = wrap_angle(t);
    match &body.shape {
        Shape::Polygon(p) => {
            let m = p.vertices.len();
            match p.locate(tw) {
                Location::Vertex(j) => {
                    let k = match side {
                        Side::Plus => j,
                        Side::Minus => (j + m - 1) % m,
                    };
                    let v = p.vertices[j];
                    let e = &p.edges[k];
                    e.direction * (v.norm_squared() / e.offset)
                }
                Location::Edge(k) => {
                    let e = &p.edges[k];
                    let ne = e.normal.dot(&unit(tw));
                    e.direction * (e.offset / (ne * ne))
                }
            }
        }
        Shape::Ellipse(_) => {
            let e = unit(tw);
            let ep = perp(e);
            let x = polar_point(body, tw).point;
            let r = x.norm();
            let g = body.ellipse_gradient(x).expect("ellipse");
            let dr = -r * g.dot(&ep) / g.dot(&e);
            e * dr + ep * r
        }
    }
}

/// Supporting line `∂±_{p(t)} = {p(t) + s p'±(t)}`.
pub fn support_line(body: &ConvexBody, t: f64, side: Side) -> SupportLine {
    SupportLine { base: polar_point(body, t).point, direction: one_sided_derivative(body, t, side), kind: side.into() }
}

/// `<z - base, i·direction>`; nonnegative on the side of the body.
pub fn signed_side(line: &SupportLine, z: Vec2) -> f64 {
    (z - line.base).dot(&perp(line.direction))
}

/// Maximal parameter interval around `t` whose image lies in one edge.
///
/// Extreme points give the singleton `[t, t]`. For the polygon edge that
/// crosses the positive x-axis, the piece on the same side of the seam as `t`
/// is returned.
pub fn face_interval(body: &ConvexBody, t: f64) -> CircleInterval {
    body.assert_centered();
    let tw = wrap_angle(t);
    let single = |s: f64| CircleInterval::singleton(s).expect("wrapped parameter");
    match &body.shape {
        Shape::Ellipse(_) => single(tw),
        Shape::Polygon(p) => {
            let m = p.params.len();
            match p.locate(tw) {
                Location::Vertex(j) => single(p.params[j]),
                Location::Edge(k) if k + 1 < m => {
                    CircleInterval::new(p.params[k], p.params[k + 1]).expect("sorted params")
                }
                Location::Edge(_) => {
                    if tw >= p.params[m - 1] {
                        CircleInterval::new(p.params[m - 1], TAU).expect("sorted params")
                    } else {
                        CircleInterval::new(0.0, p.params[0]).expect("sorted params")
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::minkowski_functional;
    use crate::geom::vec2;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn diamond() -> ConvexBody {
        ConvexBody::polygon(&[vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(-1.0, 0.0), vec2(0.0, -1.0)]).unwrap()
    }

    fn disc() -> ConvexBody {
        ConvexBody::disc(Vec2::zeros(), 1.0).unwrap()
    }

    #[test]
    fn disc_derivative() {
        for k in 0..20 {
            let t = 0.31 * k as f64;
            let want = vec2(-t.sin(), t.cos());
            for side in [Side::Plus, Side::Minus] {
                assert!((one_sided_derivative(&disc(), t, side) - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn diamond_corner_derivatives() {
        assert_eq!(one_sided_derivative(&diamond(), 0.0, Side::Plus), vec2(-1.0, 1.0));
        assert_eq!(one_sided_derivative(&diamond(), 0.0, Side::Minus), vec2(1.0, 1.0));
    }

    #[test]
    fn diamond_edge_derivative_matches_formula() {
        // d/dt [(0,1) + (1,-1)/(1 + tan t)] = -sec²t/(1+tan t)² (1,-1)
        let t = FRAC_PI_4;
        let s = -(1.0 / t.cos().powi(2)) / (1.0 + t.tan()).powi(2);
        let want = vec2(s, -s);
        for side in [Side::Plus, Side::Minus] {
            let d = one_sided_derivative(&diamond(), t, side);
            assert!((d - want).norm() < 1e-14, "{d:?} vs {want:?}");
        }
    }

    #[test]
    fn support_lines_of_examples() {
        let l = support_line(&disc(), 0.0, Side::Plus);
        assert_eq!(l.base, vec2(1.0, 0.0));
        assert!(l.direction.x.abs() < 1e-15);

        let plus = support_line(&diamond(), 0.0, Side::Plus);
        assert_eq!(signed_side(&plus, vec2(0.0, 1.0)), 0.0);
        assert_eq!(signed_side(&plus, vec2(1.0, 0.0)), 0.0);
        let minus = support_line(&diamond(), 0.0, Side::Minus);
        assert_eq!(minus.base, vec2(1.0, 0.0));
        assert_eq!(signed_side(&minus, vec2(0.0, -1.0)), 0.0);
    }

    #[test]
    fn side_test() {
        let l = support_line(&disc(), 0.0, Side::Plus);
        assert!((signed_side(&l, Vec2::zeros()) - 1.0).abs() < 1e-15);
        assert_eq!(signed_side(&l, l.base), 0.0);
        let plus = support_line(&diamond(), 0.0, Side::Plus);
        assert!(signed_side(&plus, vec2(1.0, 1.0)) < 0.0);
    }

    #[test]
    fn faces() {
        let f = face_interval(&diamond(), FRAC_PI_4);
        assert_eq!((f.lo(), f.hi()), (0.0, FRAC_PI_2));
        let f = face_interval(&diamond(), 0.0);
        assert!(f.is_singleton() && f.lo() == 0.0);
        let f = face_interval(&disc(), 1.3);
        assert!(f.is_singleton() && f.lo() == 1.3);
        let f = face_interval(&diamond(), 5.0);
        assert!((f.lo() - 3.0 * FRAC_PI_2).abs() < 1e-15 && f.hi() == TAU);
        // wrap edge of a rotated square
        let sq = ConvexBody::polygon(&[vec2(1.0, 1.0), vec2(-1.0, 1.0), vec2(-1.0, -1.0), vec2(1.0, -1.0)]).unwrap();
        let f = face_interval(&sq, 0.1);
        assert!(f.lo() == 0.0 && (f.hi() - FRAC_PI_4).abs() < 1e-15);
        let f = face_interval(&sq, 6.0);
        assert!((f.lo() - 7.0 * FRAC_PI_4).abs() < 1e-15 && f.hi() == TAU);
        let _ = PI;
    }

    #[test]
    fn speed_bound_on_ellipse() {
        let e = ConvexBody::ellipse(vec2(0.3, -0.2), vec2(2.0, 0.7)).unwrap();
        for k in 0..100 {
            let t = 0.0628 * k as f64;
            let d = one_sided_derivative(&e, t, Side::Plus);
            assert!(d.norm() >= 1.0 / minkowski_functional(&e, unit(t)) - 1e-12);
        }
    }
}
