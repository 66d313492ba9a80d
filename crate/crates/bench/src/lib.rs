//! Bodies and measures shared by the benchmarks in `benches/`.

use hyperrigid::geom::{vec2, Vec2};
use hyperrigid::ConvexBody;

pub fn disc() -> ConvexBody {
    ConvexBody::disc(Vec2::zeros(), 1.0).expect("unit disc")
}

pub fn ellipse() -> ConvexBody {
    ConvexBody::ellipse(Vec2::zeros(), vec2(2.0, 0.5)).expect("ellipse")
}

pub fn diamond() -> ConvexBody {
    ConvexBody::polygon(&diamond_vertices()).expect("diamond")
}

pub fn diamond_vertices() -> [Vec2; 4] {
    [vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(-1.0, 0.0), vec2(0.0, -1.0)]
}

/// Regular `n`-gon inscribed in the unit circle, slightly rotated so that no
/// vertex sits at parameter 0.
pub fn regular_polygon(n: usize) -> ConvexBody {
    let pts: Vec<Vec2> = (0..n)
        .map(|k| {
            let t = 0.1 + std::f64::consts::TAU * k as f64 / n as f64;
            vec2(t.cos(), t.sin())
        })
        .collect();
    ConvexBody::polygon(&pts).expect("regular polygon")
}
