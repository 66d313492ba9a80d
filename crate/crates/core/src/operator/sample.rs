//! Random measures for experiments.

use rand::Rng;

use super::linalg::{random_unitary, real, spectral_norm};
use super::measure::{Atom, MeasureKind, OperatorMeasure};
use crate::body::{extreme_parameters, polar_point, ConvexBody};
use crate::error::{Error, Result};
use crate::interval::CircleInterval;

/// PVM with `dim` rank-one atom projections onto a random orthonormal basis,
/// each at a random extreme point of `p(arc)` for a randomly chosen arc.
pub fn random_pvm<R: Rng + ?Sized>(
    body: &ConvexBody,
    arcs: &[CircleInterval],
    dim: usize,
    rng: &mut R,
) -> Result<OperatorMeasure> {
    if arcs.is_empty() {
        return Err(Error::InvalidMeasure("need at least one arc".into()));
    }
    let ex = extreme_parameters(body);
    let v = random_unitary(dim, rng);
    let atoms = (0..dim)
        .map(|k| {
            let arc = &arcs[rng.random_range(0..arcs.len())];
            let t = match ex.within(arc, 0.0) {
                None => arc.lo() + (0.05 + 0.9 * rng.random::<f64>()) * arc.len(),
                Some(ts) if ts.is_empty() => {
                    return Err(Error::InvalidMeasure("arc carries no extreme point".into()));
                }
                Some(ts) => ts[rng.random_range(0..ts.len())],
            };
            let col = v.column(k);
            Ok(Atom { site: polar_point(body, t).point, weight: col * col.adjoint() })
        })
        .collect::<Result<Vec<_>>>()?;
    OperatorMeasure::new(MeasureKind::Pvm, dim, atoms)
}

/// `φ = (1 - η) π + η U π U*` for a random unitary `U`, with `η` chosen so the
/// first-moment residual against `π` equals `residual` (or `η = 1/2` if `U`
/// happens to preserve the moments).
pub fn mixed_povm<R: Rng + ?Sized>(pvm: &OperatorMeasure, residual: f64, rng: &mut R) -> OperatorMeasure {
    let n = pvm.dimension();
    let u = random_unitary(n, rng);
    let (zx, zy) = pvm.first_moments();
    let conj = |m: &super::CMat| &u * m * u.adjoint();
    let gap = spectral_norm(&(conj(&zx) - &zx)).max(spectral_norm(&(conj(&zy) - &zy)));
    let eta = if gap > 0.0 { (residual / gap).min(0.5) } else { 0.5 };
    let atoms = pvm
        .atoms()
        .iter()
        .map(|a| Atom { site: a.site, weight: &a.weight * real(1.0 - eta) + conj(&a.weight) * real(eta) })
        .collect();
    OperatorMeasure::new(MeasureKind::Povm, n, atoms).expect("same shape as pvm")
}
