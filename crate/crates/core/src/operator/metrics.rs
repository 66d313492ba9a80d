use serde::{Deserialize, Serialize};

use super::linalg::{real, CMat, Complex64};
use crate::body::{polar_point, BodyKind, ConvexBody};
use crate::error::{Error, Result};
use crate::geom::{polar_angle, Vec2};

/// Eigenvalues must lie this close to the carrier.
const SPECTRUM_TOL: f64 = 1e-8;

/// `Σ_{i,j} 2^{-i-j} |<(S - T) e_j, e_i>|`, indices from 1.
pub fn d_weak(s: &CMat, t: &CMat) -> f64 {
    let d = s - t;
    let mut total = 0.0;
    for j in 0..d.ncols() {
        for i in 0..d.nrows() {
            total += d[(i, j)].norm() * 0.5f64.powi((i + j + 2) as i32);
        }
    }
    total
}

/// `Σ_j 2^{-j} ‖(S - T) e_j‖`, indices from 1.
pub fn d_strong(s: &CMat, t: &CMat) -> f64 {
    let d = s - t;
    d.column_iter().enumerate().map(|(j, col)| col.norm() * 0.5f64.powi(j as i32 + 1)).sum()
}

/// Where spectra of the rigid family must live.
#[derive(Clone, Debug)]
pub enum Carrier {
    /// `ex(K)` of a centered body.
    Body(ConvexBody),
    /// A finite set of points.
    Points(Vec<Vec2>),
}

impl Carrier {
    pub fn distance(&self, z: Vec2) -> f64 {
        let nearest = |pts: &[Vec2]| pts.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min);
        match self {
            Carrier::Points(pts) => nearest(pts),
            Carrier::Body(k) if k.kind() == BodyKind::Polygon => nearest(k.vertices()),
            Carrier::Body(k) => {
                if z.norm() == 0.0 {
                    return nearest(&[polar_point(k, 0.0).point]);
                }
                (polar_point(k, polar_angle(z)).point - z).norm()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    /// Position in the family, from 1.
    pub index: usize,
    pub d_w: f64,
    pub d_s: f64,
}

/// `(d_W, d_S)` of every member against `limit`. With a carrier, each member
/// is first checked to have its spectrum in the carrier.
pub fn wot_sot_metrics(family: &[CMat], limit: &CMat, carrier: Option<&Carrier>) -> Result<Vec<MetricRow>> {
    family
        .iter()
        .enumerate()
        .map(|(k, a)| {
            if a.shape() != limit.shape() {
                return Err(Error::DimensionMismatch(a.nrows(), limit.nrows()));
            }
            if let Some(c) = carrier {
                check_spectrum(a, c)?;
            }
            Ok(MetricRow { index: k + 1, d_w: d_weak(a, limit), d_s: d_strong(a, limit) })
        })
        .collect()
}

fn check_spectrum(a: &CMat, carrier: &Carrier) -> Result<()> {
    let eig = a.clone().try_schur(f64::EPSILON, 0).and_then(|s| s.eigenvalues()).ok_or(Error::Spectrum {
        re: f64::NAN,
        im: f64::NAN,
        dist: f64::INFINITY,
    })?;
    for z in eig.iter() {
        let dist = carrier.distance(Vec2::new(z.re, z.im));
        if dist > SPECTRUM_TOL {
            return Err(Error::Spectrum { re: z.re, im: z.im, dist });
        }
    }
    Ok(())
}

/// `A_n = (Sⁿ + S*ⁿ)/2` for the truncated unilateral shift `S e_j = e_{j+1}`, `n = 1..=count`.
pub fn shift_control_family(dim: usize, count: usize) -> Vec<CMat> {
    (1..=count)
        .map(|n| CMat::from_fn(dim, dim, |i, j| if i.abs_diff(j) == n { real(0.5) } else { Complex64::new(0.0, 0.0) }))
        .collect()
}

/// Diagonal symmetries `Aₙ` agreeing with `A = diag(signs)` on the first `n`
/// coordinates and flipped after, `n = 1..=len`. Returns `(family, A)`.
pub fn symmetry_family(signs: &[f64]) -> (Vec<CMat>, CMat) {
    let dim = signs.len();
    let diag = |s: &[f64]| CMat::from_diagonal(&nalgebra::DVector::from_iterator(dim, s.iter().map(|&x| real(x))));
    let family = (1..=dim)
        .map(|n| {
            let s: Vec<f64> = signs.iter().enumerate().map(|(k, &x)| if k < n { x } else { -x }).collect();
            diag(&s)
        })
        .collect();
    (family, diag(signs))
}

/// `|‖(Aₙ - A)x‖² - (‖x‖² + ‖Ax‖² - 2 Re<Aₙx, Ax>)|`; zero whenever `Aₙ` is an isometry.
pub fn symmetry_identity_residual(a_n: &CMat, a: &CMat, x: &nalgebra::DVector<Complex64>) -> f64 {
    let lhs = ((a_n - a) * x).norm_squared();
    let ax = a * x;
    let cross = (a_n * x).dotc(&ax).re;
    let rhs = x.norm_squared() + ax.norm_squared() - 2.0 * cross;
    (lhs - rhs).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vec2;
    use nalgebra::DVector;

    #[test]
    fn control_family_separates_topologies() {
        let fam = shift_control_family(64, 32);
        let zero = CMat::zeros(64, 64);
        let rows = wot_sot_metrics(&fam, &zero, None).unwrap();
        for r in &rows {
            assert!(r.d_w <= 2f64.powi(1 - r.index as i32), "{r:?}");
            assert!(r.d_s >= 0.25, "{r:?}");
        }
    }

    #[test]
    fn constant_family() {
        let a = shift_control_family(8, 1).remove(0);
        let rows = wot_sot_metrics(&[a.clone(), a.clone()], &a, None).unwrap();
        assert!(rows.iter().all(|r| r.d_w == 0.0 && r.d_s == 0.0));
    }

    #[test]
    fn weights_are_one_based() {
        let mut e = CMat::zeros(3, 3);
        e[(0, 0)] = real(1.0);
        assert_eq!(d_weak(&e, &CMat::zeros(3, 3)), 0.25);
        assert_eq!(d_strong(&e, &CMat::zeros(3, 3)), 0.5);
    }

    #[test]
    fn spectrum_check() {
        let diag = |v: &[f64]| CMat::from_diagonal(&DVector::from_iterator(v.len(), v.iter().map(|&x| real(x))));
        let seg = Carrier::Points(vec![vec2(-1.0, 0.0), vec2(1.0, 0.0)]);
        assert!(wot_sot_metrics(&[diag(&[1.0, -1.0])], &diag(&[1.0, 1.0]), Some(&seg)).is_ok());
        let bad = wot_sot_metrics(&[diag(&[1.0, 0.5])], &diag(&[1.0, 1.0]), Some(&seg));
        assert!(matches!(bad, Err(Error::Spectrum { .. })));
        let disc = Carrier::Body(ConvexBody::disc(Vec2::zeros(), 1.0).unwrap());
        assert!(disc.distance(vec2(0.6, 0.8)) < 1e-15);
        assert!((disc.distance(vec2(0.3, 0.4)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identity_for_symmetries() {
        let a = CMat::from_diagonal(&DVector::from_vec(vec![real(1.0), real(-1.0), real(1.0)]));
        let an = CMat::from_diagonal(&DVector::from_vec(vec![real(1.0), real(1.0), real(-1.0)]));
        let x = DVector::from_vec(vec![real(0.3), Complex64::new(0.1, -2.0), real(1.5)]);
        assert!(symmetry_identity_residual(&an, &a, &x) < 1e-12);
    }
}
