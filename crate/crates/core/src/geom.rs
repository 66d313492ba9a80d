//! Plane primitives shared by every module.
//!
//! Points and vectors are `nalgebra::Vector2<f64>`. The plane is identified
//! with the complex numbers, so `perp(v)` is multiplication by `i`.

use std::f64::consts::TAU;

pub use nalgebra::Vector2;

/// A point or vector in the plane.
pub type Vec2 = Vector2<f64>;

/// Default tolerance for geometric predicates on exact representations.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Environment variable that overrides [`DEFAULT_TOL`] in the CLI.
pub const TOL_ENV: &str = "HYPERRIGID_TOL";

#[inline]
pub fn vec2(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

/// `(cos t, sin t)`.
#[inline]
pub fn unit(t: f64) -> Vec2 {
    let (s, c) = t.sin_cos();
    Vec2::new(c, s)
}

/// Multiplication by `i`: `(x, y) -> (-y, x)`.
#[inline]
pub fn perp(v: Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

/// z-component of `a x b`.
#[inline]
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Reduce an angle into `[0, 2π)`.
#[inline]
pub fn wrap_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Polar angle of `v` in `[0, 2π)`.
#[inline]
pub fn polar_angle(v: Vec2) -> f64 {
    wrap_angle(v.y.atan2(v.x))
}

/// Oriented line `{base + s * direction}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub base: Vec2,
    pub direction: Vec2,
}

impl Line {
    pub fn new(base: Vec2, direction: Vec2) -> Self {
        Self { base, direction }
    }

    pub fn through(a: Vec2, b: Vec2) -> Self {
        Self::new(a, b - a)
    }

    /// `<z - base, i * direction>`; nonnegative to the left of the line.
    #[inline]
    pub fn side(&self, z: Vec2) -> f64 {
        (z - self.base).dot(&perp(self.direction))
    }

    /// Signed Euclidean distance, positive on the left.
    #[inline]
    pub fn signed_distance(&self, z: Vec2) -> f64 {
        self.side(z) / self.direction.norm()
    }

    #[inline]
    pub fn distance(&self, z: Vec2) -> f64 {
        self.signed_distance(z).abs()
    }

    /// Unique intersection point, or `None` when the directions are parallel
    /// within `tol` (relative to `|d1||d2|`).
    pub fn intersect(&self, other: &Line, tol: f64) -> Option<Vec2> {
        let d1 = self.direction;
        let d2 = other.direction;
        let den = cross(d1, d2);
        if den.abs() <= tol * d1.norm() * d2.norm() {
            return None;
        }
        let s = cross(other.base - self.base, d2) / den;
        Some(self.base + d1 * s)
    }
}

/// Orientation of the triangle `(a, b, c)`: twice its signed area.
#[inline]
pub fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    cross(b - a, c - a)
}

/// Closed-triangle membership with an absolute distance tolerance.
///
/// Degenerate (collinear) triangles are treated as the segment spanned by the
/// two farthest corners.
pub fn in_triangle(q: Vec2, a: Vec2, b: Vec2, c: Vec2, tol: f64) -> bool {
    let area2 = orient(a, b, c);
    let scale = (b - a).norm().max((c - a).norm()).max((c - b).norm());
    if scale <= tol {
        return (q - a).norm() <= tol;
    }
    if area2.abs() <= tol * scale {
        let (p0, p1) = [(a, b), (a, c), (b, c)]
            .into_iter()
            .max_by(|x, y| (x.1 - x.0).norm().total_cmp(&(y.1 - y.0).norm()))
            .unwrap();
        return segment_distance(q, p0, p1) <= tol;
    }
    let sign = area2.signum();
    [(a, b), (b, c), (c, a)].iter().all(|&(u, v)| {
        let len = (v - u).norm();
        len <= tol || sign * cross(v - u, q - u) / len >= -tol
    })
}

/// Distance from `q` to the closed segment `[a, b]`.
pub fn segment_distance(q: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return (q - a).norm();
    }
    let s = ((q - a).dot(&d) / len2).clamp(0.0, 1.0);
    (q - (a + d * s)).norm()
}

/// Angle at `apex` in the triangle `(a, apex, b)`, in `[0, π]`.
pub fn corner_angle(a: Vec2, apex: Vec2, b: Vec2) -> f64 {
    vector_angle(a - apex, b - apex)
}

/// Unsigned angle between two nonzero vectors, in `[0, π]`.
pub fn vector_angle(u: Vec2, v: Vec2) -> f64 {
    cross(u, v).abs().atan2(u.dot(&v))
}
