use nalgebra::{DMatrix, DVector, Matrix3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linalg::{max_abs_eigenvalue, min_eigenvalue, real, spectral_norm, CMat, Complex64};
use super::measure::{apply_indicator, moment_residual, Atom, MeasureKind, MomentResidual, OperatorMeasure};
use crate::error::{Error, Result};
use crate::geom::Vec2;

const FEAS_TOL: f64 = 1e-10;

/// Feasible set of `{w >= 0, Σ w = 1, Σ w·site = target}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Barycenter {
    /// The feasible set is a single point.
    pub unique: bool,
    /// Vertices of the feasible polytope, as full weight vectors.
    pub vertices: Vec<Vec<f64>>,
    /// `(min, max)` of each weight over the feasible set.
    pub ranges: Vec<(f64, f64)>,
}

impl Barycenter {
    /// Two distinct feasible measures, when they exist.
    pub fn witnesses(&self) -> Option<(&[f64], &[f64])> {
        match self.vertices.as_slice() {
            [a, b, ..] => Some((a, b)),
            _ => None,
        }
    }
}

/// Probability measures on `sites` with barycenter `target`, by enumeration of
/// basic feasible solutions (supports of at most three affinely independent sites).
pub fn barycenter_rigidity(sites: &[Vec2], target: Vec2) -> Result<Barycenter> {
    let m = sites.len();
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut push = |support: &[usize]| {
        if let Some(w) = basic_solution(sites, support, target) {
            let mut full = vec![0.0; m];
            for (&k, &x) in support.iter().zip(&w) {
                full[k] = x;
            }
            if !vertices.iter().any(|v| v.iter().zip(&full).all(|(a, b)| (a - b).abs() <= 1e-9)) {
                vertices.push(full);
            }
        }
    };
    for a in 0..m {
        push(&[a]);
        for b in a + 1..m {
            push(&[a, b]);
            for c in b + 1..m {
                push(&[a, b, c]);
            }
        }
    }
    if vertices.is_empty() {
        return Err(Error::Infeasible);
    }
    let ranges = (0..m)
        .map(|k| {
            vertices.iter().map(|v| v[k]).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
        })
        .collect();
    Ok(Barycenter { unique: vertices.len() == 1, vertices, ranges })
}

fn basic_solution(sites: &[Vec2], support: &[usize], target: Vec2) -> Option<Vec<f64>> {
    let k = support.len();
    let a = DMatrix::from_fn(3, k, |r, c| {
        let s = sites[support[c]];
        [1.0, s.x, s.y][r]
    });
    let b = DVector::from_vec(vec![1.0, target.x, target.y]);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.iter().filter(|&&s| s > 1e-12 * smax.max(1.0)).count() < k {
        return None;
    }
    let w = svd.solve(&b, 1e-12 * smax.max(1.0)).ok()?;
    if (&a * &w - &b).norm() > FEAS_TOL || w.iter().any(|&x| x < -FEAS_TOL) {
        return None;
    }
    Some(w.iter().map(|&x| if x.abs() < 1e-13 { 0.0 } else { x.max(0.0) }).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub seed: u64,
    /// Ascent steps per restart.
    pub iterations: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { restarts: 50, seed: 7, iterations: 200 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Deviation {
    /// Largest `‖φ(χ_F) - π(χ_F)‖` found.
    pub max: f64,
    /// POVM on the grid attaining `max`.
    pub witness: OperatorMeasure,
    pub residual: MomentResidual,
    /// Best value of each restart.
    pub per_restart: Vec<f64>,
    pub steps: usize,
}

/// Search for a POVM on the `sites` grid that agrees with `pvm` on `A(K)` but
/// differs from it on the set `F`.
///
/// Each restart starts from a feasible point `Σ_k λ⁽ᵏ⁾ ⊗ P_k`, where `λ⁽ᵏ⁾` is a
/// random probability measure on the grid with barycenter at the k-th PVM
/// site, and ascends `‖φ(χ_F) - π(χ_F)‖` along its gradient projected onto
/// the moment constraints, with a backtracking step that keeps every atom PSD.
pub fn deviation_search(
    sites: &[Vec2],
    pvm: &OperatorMeasure,
    in_f: &dyn Fn(Vec2) -> bool,
    config: &SearchConfig,
) -> Result<Deviation> {
    let n = pvm.dimension();
    let m = sites.len();
    let bary = pvm.atoms().iter().map(|a| barycenter_rigidity(sites, a.site)).collect::<Result<Vec<_>>>()?;
    let target = apply_indicator(pvm, in_f);
    let mask: Vec<bool> = sites.iter().map(|&s| in_f(s)).collect();
    let proj = MomentProjector::new(sites);

    let objective = |q: &[CMat]| -> (f64, DVector<Complex64>) {
        let mut d = -target.clone();
        for (w, _) in q.iter().zip(&mask).filter(|(_, &f)| f) {
            d += w;
        }
        let (lam, v) = max_abs_eigenvalue(&d);
        (lam, v)
    };

    let mut best: Option<(f64, Vec<CMat>)> = None;
    let mut per_restart = Vec::with_capacity(config.restarts);
    let mut steps = 0;
    for r in 0..config.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(0x9E37_79B9).wrapping_add(r as u64));
        let mut q = vec![CMat::zeros(n, n); m];
        for (atom, b) in pvm.atoms().iter().zip(&bary) {
            let mix: Vec<f64> = b.vertices.iter().map(|_| rng.random::<f64>() + 1e-3).collect();
            let total: f64 = mix.iter().sum();
            for (v, &c) in b.vertices.iter().zip(&mix) {
                for (s, &w) in v.iter().enumerate() {
                    if w > 0.0 {
                        q[s] += &atom.weight * real(w * c / total);
                    }
                }
            }
        }

        let (mut val, mut vec) = objective(&q);
        let mut step: f64 = 1.0;
        for _ in 0..config.iterations {
            let (sign, v) =
                if val.abs() > 1e-14 { (val.signum(), vec.clone()) } else { (1.0, random_unit(n, &mut rng)) };
            let g = &v * v.adjoint() * real(sign);
            let mut dir: Vec<CMat> = mask.iter().map(|&f| if f { g.clone() } else { CMat::zeros(n, n) }).collect();
            proj.project(&mut dir);
            let scale = dir.iter().map(spectral_norm).fold(0.0, f64::max);
            if scale < 1e-13 {
                break;
            }
            let mut moved = false;
            step = (step * 4.0).min(1.0);
            for _ in 0..60 {
                let cand: Vec<CMat> = q.iter().zip(&dir).map(|(w, d)| w + d * real(step / scale)).collect();
                if cand.iter().all(|w| min_eigenvalue(w) >= -1e-14) {
                    let (cv, cvec) = objective(&cand);
                    if cv.abs() > val.abs() + 1e-15 {
                        q = cand;
                        val = cv;
                        vec = cvec;
                        moved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            steps += 1;
            if !moved {
                break;
            }
        }
        per_restart.push(val.abs());
        if best.as_ref().is_none_or(|(b, _)| val.abs() > *b) {
            best = Some((val.abs(), q));
        }
    }

    let (max, q) = best.expect("at least one restart");
    let atoms = sites.iter().zip(q).map(|(&site, weight)| Atom { site, weight }).collect();
    let witness = OperatorMeasure::new(MeasureKind::Povm, n, atoms)?;
    let residual = moment_residual(&witness, pvm)?;
    Ok(Deviation { max, witness, residual, per_restart, steps })
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> DVector<Complex64> {
    let v = DVector::from_fn(n, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let norm = v.norm();
    v / real(norm)
}

/// Orthogonal projection of `(D_s)` onto `{Σ D_s = 0, Σ x_s D_s = 0, Σ y_s D_s = 0}`.
struct MomentProjector {
    coeffs: Vec<[f64; 3]>,
    gram_pinv: Matrix3<f64>,
}

impl MomentProjector {
    fn new(sites: &[Vec2]) -> Self {
        let coeffs: Vec<[f64; 3]> = sites.iter().map(|s| [1.0, s.x, s.y]).collect();
        let mut gram = Matrix3::zeros();
        for a in &coeffs {
            for i in 0..3 {
                for j in 0..3 {
                    gram[(i, j)] += a[i] * a[j];
                }
            }
        }
        let gram_pinv = gram.pseudo_inverse(1e-12).expect("pseudo-inverse of a symmetric matrix");
        Self { coeffs, gram_pinv }
    }

    fn project(&self, d: &mut [CMat]) {
        let (r, c) = d[0].shape();
        let mut t = [CMat::zeros(r, c), CMat::zeros(r, c), CMat::zeros(r, c)];
        for (a, ds) in self.coeffs.iter().zip(d.iter()) {
            for k in 0..3 {
                t[k] += ds * real(a[k]);
            }
        }
        let lam: Vec<CMat> = (0..3)
            .map(|i| (0..3).fold(CMat::zeros(r, c), |acc, j| acc + &t[j] * real(self.gram_pinv[(i, j)])))
            .collect();
        for (a, ds) in self.coeffs.iter().zip(d.iter_mut()) {
            for k in 0..3 {
                *ds -= &lam[k] * real(a[k]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vec2;

    fn diamond() -> Vec<Vec2> {
        vec![vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(-1.0, 0.0), vec2(0.0, -1.0)]
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn vertex_target_is_dirac() {
        for (k, &v) in diamond().iter().enumerate() {
            let b = barycenter_rigidity(&diamond(), v).unwrap();
            assert!(b.unique);
            let mut want = vec![0.0; 4];
            want[k] = 1.0;
            assert!(close(&b.vertices[0], &want));
        }
    }

    #[test]
    fn center_is_not_rigid() {
        let b = barycenter_rigidity(&diamond(), Vec2::zeros()).unwrap();
        assert!(!b.unique);
        assert!(b.vertices.iter().any(|v| close(v, &[0.5, 0.0, 0.5, 0.0])));
        assert!(b.vertices.iter().any(|v| close(v, &[0.0, 0.5, 0.0, 0.5])));
        assert!(b.ranges[0].0 == 0.0 && (b.ranges[0].1 - 0.5).abs() < 1e-12);
        assert!(b.witnesses().is_some());
    }

    #[test]
    fn single_site_and_infeasible() {
        let b = barycenter_rigidity(&[vec2(1.0, 0.0)], vec2(1.0, 0.0)).unwrap();
        assert!(b.unique);
        assert_eq!(b.vertices, vec![vec![1.0]]);
        assert_eq!(barycenter_rigidity(&diamond(), vec2(2.0, 0.0)), Err(Error::Infeasible));
    }

    #[test]
    fn projector_kills_moments() {
        let sites = vec![vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(-1.0, 0.0), vec2(0.0, -1.0), vec2(0.6, 0.8)];
        let p = MomentProjector::new(&sites);
        let mut d: Vec<CMat> = (0..5).map(|k| CMat::identity(2, 2) * real(k as f64 + 1.0)).collect();
        p.project(&mut d);
        let sum = d.iter().fold(CMat::zeros(2, 2), |a, b| a + b);
        let mx = d.iter().zip(&sites).fold(CMat::zeros(2, 2), |a, (b, s)| a + b * real(s.x));
        assert!(spectral_norm(&sum) < 1e-12 && spectral_norm(&mx) < 1e-12);
    }

    #[test]
    fn diamond_is_rigid() {
        let pvm = OperatorMeasure::diagonal_pvm(&diamond());
        let v0 = diamond()[0];
        let cfg = SearchConfig { restarts: 5, seed: 7, iterations: 50 };
        let d = deviation_search(&diamond(), &pvm, &|z| z == v0, &cfg).unwrap();
        assert!(d.max <= 1e-6, "{}", d.max);
    }

    #[test]
    fn segment_control_deviates() {
        let grid = vec![vec2(-1.0, 0.0), vec2(0.0, 0.0), vec2(1.0, 0.0)];
        let pvm = OperatorMeasure::dirac(Vec2::zeros(), 1);
        let cfg = SearchConfig { restarts: 3, seed: 7, iterations: 50 };
        let d = deviation_search(&grid, &pvm, &|z| z == Vec2::zeros(), &cfg).unwrap();
        assert!((d.max - 1.0).abs() < 1e-9, "{}", d.max);
        assert!(d.residual.max() < 1e-12);
    }
}
