//! Seeded generators of bodies and interval configurations for experiments.

use std::f64::consts::TAU;

use rand::Rng;

use crate::body::{center_body, ConvexBody};
use crate::geom::Vec2;
use crate::interval::CircleInterval;

/// Centered convex polygon with 3 to `max_vertices` vertices in roughly
/// star-shaped position around the origin.
pub fn random_polygon<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize) -> ConvexBody {
    let max_vertices = max_vertices.max(3);
    loop {
        let n = rng.random_range(3..=max_vertices);
        let mut angles: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * TAU).collect();
        angles.sort_by(f64::total_cmp);
        let pts: Vec<Vec2> = angles.iter().map(|&t| Vec2::new(t.cos(), t.sin()) * rng.random_range(0.4..1.6)).collect();
        let shift = Vec2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let pts: Vec<Vec2> = pts.iter().map(|p| p + shift).collect();
        if let Ok(body) = ConvexBody::cloud(&pts) {
            if let Ok((centered, _)) = center_body(&body) {
                if centered.origin_slack() > 1e-3 {
                    return centered;
                }
            }
        }
    }
}

pub fn random_disc<R: Rng + ?Sized>(rng: &mut R) -> ConvexBody {
    let c = Vec2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    let body = ConvexBody::disc(c, rng.random_range(0.5..2.0)).expect("positive radius");
    center_body(&body).expect("disc has interior").0
}

pub fn random_ellipse<R: Rng + ?Sized>(rng: &mut R) -> ConvexBody {
    let c = Vec2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    let radii = Vec2::new(rng.random_range(0.3..2.5), rng.random_range(0.3..2.5));
    let body = ConvexBody::ellipse(c, radii).expect("positive radii");
    center_body(&body).expect("ellipse has interior").0
}

/// Polygon (half the time), disc or ellipse, centered.
pub fn random_body<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize) -> ConvexBody {
    match rng.random_range(0..4) {
        0 | 1 => random_polygon(rng, max_vertices),
        2 => random_disc(rng),
        _ => random_ellipse(rng),
    }
}

/// Disjoint non-wrapping intervals `(I, J)`, each of length at least `min_len`
/// and separated by at least `min_len` on the circle.
pub fn random_interval_pair<R: Rng + ?Sized>(rng: &mut R, min_len: f64) -> (CircleInterval, CircleInterval) {
    loop {
        let mut u: Vec<f64> = (0..4).map(|_| rng.random::<f64>() * TAU).collect();
        u.sort_by(f64::total_cmp);
        let gaps_ok = u.windows(2).all(|w| w[1] - w[0] >= min_len) && u[0] + TAU - u[3] >= min_len;
        if !gaps_ok {
            continue;
        }
        let a = CircleInterval::new(u[0], u[1]).expect("sorted");
        let b = CircleInterval::new(u[2], u[3]).expect("sorted");
        return if rng.random::<bool>() { (a, b) } else { (b, a) };
    }
}
