//! Planar compact convex bodies: ingestion, centering, the Minkowski gauge,
//! the polar parameterization of the boundary, extreme points and perimeter.
//!
//! Three representations are supported. Polygons carry a precomputed table
//! of vertex parameters (polar angles of the vertices, increasing), so a
//! parameter `t` is mapped to its edge or vertex by binary search. Discs and
//! axis-aligned ellipses use closed forms.
//!
//! All boundary queries assume the body is *centered*, i.e. the origin lies
//! strictly inside. [`center_body`] produces such a body.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{cross, polar_angle, unit, wrap_angle, Vec2, DEFAULT_TOL};
use crate::interval::CircleInterval;

/// Parameters closer than this to a vertex parameter are treated as the vertex.
pub const VERTEX_SNAP: f64 = 1e-12;

/// Successive chord sums must agree to this before the ellipse perimeter is accepted.
const PERIMETER_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyKind {
    Polygon,
    Disc,
    Ellipse,
}

/// On-disk body description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BodySpec {
    Polygon { vertices: Vec<[f64; 2]> },
    Disc { center: [f64; 2], radius: f64 },
    Ellipse { center: [f64; 2], radii: [f64; 2] },
    Cloud { points: Vec<[f64; 2]> },
}

/// One polygon edge from vertex `k` to vertex `k + 1`.
///
/// `normal = (d.y, -d.x)` is the unnormalized outward normal and
/// `offset = <normal, v_k> = v_k x v_{k+1}`, so the edge line is
/// `<normal, x> = offset`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Edge {
    pub direction: Vec2,
    pub normal: Vec2,
    pub offset: f64,
}

#[derive(Clone, Debug)]
pub(crate) struct Polygon {
    /// Counterclockwise, strictly convex. When centered, rotated so that
    /// `params` is increasing.
    pub vertices: Vec<Vec2>,
    pub edges: Vec<Edge>,
    /// Polar angle of each vertex in `[0, 2π)`; meaningful only when centered.
    pub params: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Ellipse {
    pub center: Vec2,
    pub radii: Vec2,
}

#[derive(Clone, Debug)]
pub(crate) enum Shape {
    Polygon(Polygon),
    Ellipse(Ellipse),
}

/// Where a parameter lands on the boundary of a polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Location {
    Vertex(usize),
    /// Open edge from vertex `k` to vertex `k + 1`.
    Edge(usize),
}

/// A planar compact convex body with nonempty interior.
#[derive(Clone, Debug)]
pub struct ConvexBody {
    kind: BodyKind,
    pub(crate) shape: Shape,
    centered: bool,
    tol: f64,
    perimeter: OnceLock<f64>,
}

/// A boundary point `p(t)` together with its parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPoint {
    pub t: f64,
    pub point: Vec2,
}

/// Parameters `t` for which `p(t)` is an extreme point.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtremeSet {
    /// Polygon vertices, increasing in `[0, 2π)`.
    Finite(Vec<f64>),
    /// Strictly convex body: every boundary point is extreme.
    All,
}

impl ExtremeSet {
    pub fn contains(&self, t: f64, tol: f64) -> bool {
        match self {
            ExtremeSet::All => true,
            ExtremeSet::Finite(ts) => {
                let t = wrap_angle(t);
                ts.iter().any(|&s| {
                    let d = (s - t).abs();
                    d <= tol || (TAU - d) <= tol
                })
            }
        }
    }

    /// Parameters of extreme points inside `interval` (closed, circular).
    pub fn within(&self, interval: &CircleInterval, tol: f64) -> Option<Vec<f64>> {
        match self {
            ExtremeSet::All => None,
            ExtremeSet::Finite(ts) => {
                let mut out: Vec<f64> = Vec::new();
                for &s in ts {
                    for cand in [s, s + TAU] {
                        if cand >= interval.lo() - tol && cand <= interval.hi() + tol {
                            out.push(cand.clamp(interval.lo(), interval.hi()));
                        }
                    }
                }
                out.sort_by(f64::total_cmp);
                out.dedup();
                Some(out)
            }
        }
    }

    /// `conv{p⁻¹(p(I) ∩ ex(K))} ⊆ I`: the smallest subinterval of `I` that
    /// carries every extreme point of `p(I)`. `None` when there is none.
    pub fn extreme_hull(&self, interval: &CircleInterval, tol: f64) -> Option<CircleInterval> {
        match self.within(interval, tol) {
            None => Some(*interval),
            Some(ts) if ts.is_empty() => None,
            Some(ts) => CircleInterval::new(ts[0], ts[ts.len() - 1]).ok(),
        }
    }
}

impl ConvexBody {
    pub fn polygon(vertices: &[Vec2]) -> Result<Self> {
        let hull = convex_hull(vertices, DEFAULT_TOL)?;
        // every input point must be on the hull boundary: a point strictly
        // inside means the polygon was not convex
        for &v in vertices {
            if strictly_inside(&hull, v, DEFAULT_TOL) {
                return Err(Error::InvalidBody(format!("polygon is not convex: ({}, {}) is interior", v.x, v.y)));
            }
        }
        Ok(Self::from_hull(hull))
    }

    /// Convex hull of an arbitrary point cloud.
    pub fn cloud(points: &[Vec2]) -> Result<Self> {
        Ok(Self::from_hull(convex_hull(points, DEFAULT_TOL)?))
    }

    pub fn disc(center: Vec2, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) || !center.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidBody(format!("disc radius must be positive, got {radius}")));
        }
        Ok(Self::from_ellipse(BodyKind::Disc, center, Vec2::new(radius, radius)))
    }

    pub fn ellipse(center: Vec2, radii: Vec2) -> Result<Self> {
        if !radii.iter().all(|r| r.is_finite() && *r > 0.0) || !center.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidBody(format!("ellipse radii must be positive, got ({}, {})", radii.x, radii.y)));
        }
        Ok(Self::from_ellipse(BodyKind::Ellipse, center, radii))
    }

    pub fn from_spec(spec: &BodySpec) -> Result<Self> {
        let pts = |v: &[[f64; 2]]| -> Result<Vec<Vec2>> {
            v.iter()
                .map(|p| {
                    if p.iter().all(|c| c.is_finite()) {
                        Ok(Vec2::new(p[0], p[1]))
                    } else {
                        Err(Error::Parse("non-finite coordinate".into()))
                    }
                })
                .collect()
        };
        match spec {
            BodySpec::Polygon { vertices } => Self::polygon(&pts(vertices)?),
            BodySpec::Cloud { points } => Self::cloud(&pts(points)?),
            BodySpec::Disc { center, radius } => Self::disc(Vec2::new(center[0], center[1]), *radius),
            BodySpec::Ellipse { center, radii } => {
                Self::ellipse(Vec2::new(center[0], center[1]), Vec2::new(radii[0], radii[1]))
            }
        }
    }

    fn from_hull(vertices: Vec<Vec2>) -> Self {
        let poly = build_polygon(vertices);
        let centered = poly_centered(&poly, DEFAULT_TOL);
        Self {
            kind: BodyKind::Polygon,
            shape: Shape::Polygon(poly),
            centered,
            tol: DEFAULT_TOL,
            perimeter: OnceLock::new(),
        }
    }

    fn from_ellipse(kind: BodyKind, center: Vec2, radii: Vec2) -> Self {
        let e = Ellipse { center, radii };
        let centered = ellipse_value(&e, Vec2::zeros()) < -DEFAULT_TOL;
        Self { kind, shape: Shape::Ellipse(e), centered, tol: DEFAULT_TOL, perimeter: OnceLock::new() }
    }

    /// Same body with a different predicate tolerance.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.centered = match &self.shape {
            Shape::Polygon(p) => poly_centered(p, tol),
            Shape::Ellipse(e) => ellipse_value(e, Vec2::zeros()) < -tol,
        };
        self
    }

    #[inline]
    pub fn kind(&self) -> BodyKind {
        self.kind
    }

    #[inline]
    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Whether the origin lies strictly inside.
    #[inline]
    pub fn is_centered(&self) -> bool {
        self.centered
    }

    /// Polygon vertices (counterclockwise); empty for smooth bodies.
    pub fn vertices(&self) -> &[Vec2] {
        match &self.shape {
            Shape::Polygon(p) => &p.vertices,
            Shape::Ellipse(_) => &[],
        }
    }

    /// Vertex (area) centroid; the center for discs and ellipses.
    pub fn centroid(&self) -> Vec2 {
        match &self.shape {
            Shape::Ellipse(e) => e.center,
            Shape::Polygon(p) => polygon_centroid(&p.vertices),
        }
    }

    /// The translated body `{y + offset : y ∈ K}`.
    pub fn translated(&self, offset: Vec2) -> Self {
        let body = match &self.shape {
            Shape::Polygon(p) => Self::from_hull(p.vertices.iter().map(|v| v + offset).collect()),
            Shape::Ellipse(e) => Self::from_ellipse(self.kind, e.center + offset, e.radii),
        };
        body.with_tolerance(self.tol)
    }

    /// Signed slack of the origin: minimum distance to the boundary lines,
    /// negative when the origin is outside.
    pub fn origin_slack(&self) -> f64 {
        match &self.shape {
            Shape::Polygon(p) => p.edges.iter().map(|e| e.offset / e.normal.norm()).fold(f64::INFINITY, f64::min),
            Shape::Ellipse(e) => -ellipse_value(e, Vec2::zeros()),
        }
    }

    pub(crate) fn assert_centered(&self) {
        assert!(self.centered, "boundary queries need a centered body (origin slack {:e})", self.origin_slack());
    }

    #[cfg(test)]
    pub(crate) fn polygon_data(&self) -> Option<&Polygon> {
        match &self.shape {
            Shape::Polygon(p) => Some(p),
            Shape::Ellipse(_) => None,
        }
    }

    /// `∇G(x)` for the implicit ellipse equation `G(x) = |A x - w|² - 1`.
    pub(crate) fn ellipse_gradient(&self, x: Vec2) -> Option<Vec2> {
        match &self.shape {
            Shape::Ellipse(e) => {
                let u = Vec2::new((x.x - e.center.x) / e.radii.x, (x.y - e.center.y) / e.radii.y);
                Some(Vec2::new(2.0 * u.x / e.radii.x, 2.0 * u.y / e.radii.y))
            }
            Shape::Polygon(_) => None,
        }
    }
}

impl Polygon {
    pub fn locate(&self, t: f64) -> Location {
        let t = wrap_angle(t);
        let m = self.params.len();
        // snap onto vertices, including the seam at 0 == 2π
        let k = self.params.partition_point(|&s| s <= t);
        for j in [k.wrapping_sub(1), k] {
            let j = j.min(m - 1);
            let d = (self.params[j] - t).abs();
            if d <= VERTEX_SNAP || TAU - d <= VERTEX_SNAP {
                return Location::Vertex(j);
            }
        }
        let d0 = (self.params[0] + TAU - t).abs();
        if d0 <= VERTEX_SNAP {
            return Location::Vertex(0);
        }
        if k == 0 {
            Location::Edge(m - 1)
        } else {
            Location::Edge(k - 1)
        }
    }
}

/// Parse a JSON body description and build the body.
pub fn ingest_body(text: &str) -> Result<ConvexBody> {
    let spec: BodySpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    ConvexBody::from_spec(&spec)
}

/// Translate the body so that its centroid sits at the origin.
///
/// Returns the centered body and the applied translation.
pub fn center_body(body: &ConvexBody) -> Result<(ConvexBody, Vec2)> {
    let c = body.centroid();
    if !c.iter().all(|v| v.is_finite()) {
        return Err(Error::EmptyInterior);
    }
    let offset = -c;
    let centered = body.translated(offset);
    if !centered.is_centered() {
        return Err(Error::NotCentered { slack: centered.origin_slack() });
    }
    Ok((centered, offset))
}

/// Minkowski gauge `f_K(x) = inf{r > 0 : x ∈ rK}`.
pub fn minkowski_functional(body: &ConvexBody, x: Vec2) -> f64 {
    body.assert_centered();
    if x.x == 0.0 && x.y == 0.0 {
        return 0.0;
    }
    match &body.shape {
        Shape::Polygon(p) => p.edges.iter().map(|e| e.normal.dot(&x) / e.offset).fold(0.0, f64::max),
        Shape::Ellipse(e) => ellipse_gauge(e, x),
    }
}

/// Polar parameterization `p(t) = e^{it} / f_K(e^{it})`.
pub fn polar_point(body: &ConvexBody, t: f64) -> BoundaryPoint {
    body.assert_centered();
    let tw = wrap_angle(t);
    let point = match &body.shape {
        Shape::Polygon(p) => match p.locate(tw) {
            Location::Vertex(j) => p.vertices[j],
            Location::Edge(k) => {
                let e = unit(tw);
                let edge = &p.edges[k];
                e * (edge.offset / edge.normal.dot(&e))
            }
        },
        Shape::Ellipse(el) => {
            let e = unit(tw);
            e / ellipse_gauge(el, e)
        }
    };
    BoundaryPoint { t, point }
}

/// Parameters of the extreme points.
pub fn extreme_parameters(body: &ConvexBody) -> ExtremeSet {
    body.assert_centered();
    match &body.shape {
        Shape::Polygon(p) => ExtremeSet::Finite(p.params.clone()),
        Shape::Ellipse(_) => ExtremeSet::All,
    }
}

/// Arc length of the boundary.
pub fn perimeter(body: &ConvexBody) -> f64 {
    *body.perimeter.get_or_init(|| match &body.shape {
        Shape::Polygon(p) => p.edges.iter().map(|e| e.direction.norm()).sum(),
        Shape::Ellipse(e) if body.kind == BodyKind::Disc => TAU * e.radii.x,
        Shape::Ellipse(e) => ellipse_chord_perimeter(e.radii.x, e.radii.y, PERIMETER_TOL),
    })
}

/// Inscribed-polygon perimeter of an ellipse, doubling the vertex count until
/// successive values agree to `tol`. Increases monotonically towards the
/// true length.
pub fn ellipse_chord_perimeter(a: f64, b: f64, tol: f64) -> f64 {
    let chord_sum = |n: usize| -> f64 {
        let pt = |k: usize| {
            let th = TAU * k as f64 / n as f64;
            Vec2::new(a * th.cos(), b * th.sin())
        };
        (0..n).map(|k| (pt(k + 1) - pt(k)).norm()).sum()
    };
    let mut n = 64;
    let mut prev = chord_sum(n);
    loop {
        n *= 2;
        let next = chord_sum(n);
        if (next - prev).abs() < tol || n >= 1 << 24 {
            return next;
        }
        prev = next;
    }
}

fn ellipse_value(e: &Ellipse, x: Vec2) -> f64 {
    let u = Vec2::new((x.x - e.center.x) / e.radii.x, (x.y - e.center.y) / e.radii.y);
    u.norm_squared() - 1.0
}

/// Gauge of an axis-aligned ellipse with arbitrary interior center.
///
/// In the coordinates `u = A x`, `w = A c` the body is the unit disc around
/// `w`, and `f(x) = λ` solves `|u - λw| = λ`.
fn ellipse_gauge(e: &Ellipse, x: Vec2) -> f64 {
    let u = Vec2::new(x.x / e.radii.x, x.y / e.radii.y);
    let w = Vec2::new(e.center.x / e.radii.x, e.center.y / e.radii.y);
    let uu = u.norm_squared();
    if uu == 0.0 {
        return 0.0;
    }
    if w.x == 0.0 && w.y == 0.0 {
        return uu.sqrt();
    }
    let q = u.dot(&w);
    let k = 1.0 - w.norm_squared();
    let root = (q * q + k * uu).sqrt();
    // rationalized root avoids cancellation when q < 0
    if q + root > 0.0 {
        uu / (q + root)
    } else {
        (root - q) / k
    }
}

fn build_polygon(mut vertices: Vec<Vec2>) -> Polygon {
    let m = vertices.len();
    let raw: Vec<f64> = vertices.iter().map(|&v| polar_angle(v)).collect();
    // rotate so the vertex with the smallest polar angle comes first; for a
    // centered body the angles are then increasing
    let start = (0..m).min_by(|&i, &j| raw[i].total_cmp(&raw[j])).unwrap_or(0);
    vertices.rotate_left(start);
    let params: Vec<f64> = vertices.iter().map(|&v| polar_angle(v)).collect();
    let edges = (0..m)
        .map(|k| {
            let a = vertices[k];
            let b = vertices[(k + 1) % m];
            let d = b - a;
            Edge { direction: d, normal: Vec2::new(d.y, -d.x), offset: cross(a, b) }
        })
        .collect();
    Polygon { vertices, edges, params }
}

fn poly_centered(p: &Polygon, tol: f64) -> bool {
    p.edges.iter().all(|e| e.offset / e.normal.norm() > tol)
}

fn polygon_centroid(v: &[Vec2]) -> Vec2 {
    let m = v.len();
    let mut a2 = 0.0;
    let mut c = Vec2::zeros();
    for k in 0..m {
        let (p, q) = (v[k], v[(k + 1) % m]);
        let w = cross(p, q);
        a2 += w;
        c += (p + q) * w;
    }
    c / (3.0 * a2)
}

fn strictly_inside(hull: &[Vec2], q: Vec2, tol: f64) -> bool {
    let m = hull.len();
    (0..m).all(|k| {
        let (a, b) = (hull[k], hull[(k + 1) % m]);
        cross(b - a, q - a) > tol * (b - a).norm()
    })
}

/// Andrew's monotone chain. Returns counterclockwise strictly convex hull
/// vertices; near-collinear points (relative tolerance) are dropped.
pub fn convex_hull(points: &[Vec2], tol: f64) -> Result<Vec<Vec2>> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| (*a - *b).norm() <= tol);
    if pts.len() < 3 {
        return Err(if pts.len() == 2 { Error::EmptyInterior } else { Error::TooFewPoints(pts.len()) });
    }
    let turns_left = |o: Vec2, a: Vec2, b: Vec2| {
        let (u, v) = (a - o, b - o);
        cross(u, v) > tol * u.norm() * v.norm()
    };
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && !turns_left(hull[hull.len() - 2], hull[hull.len() - 1], p) {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(Error::EmptyInterior);
    }
    Ok(hull)
}
