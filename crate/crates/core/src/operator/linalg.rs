use nalgebra::{DMatrix, DVector, SymmetricEigen};
pub use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;

/// Absolute accuracy expected from the eigenvalue routines on unit-scale input.
pub const SPECTRAL_TOL: f64 = 1e-11;

/// Eigenvalues (ascending) and orthonormal eigenvectors of the Hermitian part of `a`.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let h = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, 0).expect("eigen iteration");
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(a.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn min_eigenvalue(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    hermitian_eigen(a).0[0]
}

/// Largest `|λ|` of the Hermitian part, with a unit eigenvector attaining it.
pub fn max_abs_eigenvalue(a: &CMat) -> (f64, DVector<Complex64>) {
    let (vals, vecs) = hermitian_eigen(a);
    let n = vals.len();
    let (lo, hi) = (vals[0], vals[n - 1]);
    if hi.abs() >= lo.abs() {
        (hi, vecs.column(n - 1).into_owned())
    } else {
        (lo, vecs.column(0).into_owned())
    }
}

/// Operator norm, `sqrt(λ_max(A* A))`.
pub fn spectral_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let g = a.adjoint() * a;
    let (vals, _) = hermitian_eigen(&g);
    vals[vals.len() - 1].max(0.0).sqrt()
}

pub fn is_psd(a: &CMat, tol: f64) -> bool {
    min_eigenvalue(a) >= -tol
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed unitary (QR of a complex Gaussian matrix with phase fix).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| gaussian(rng));
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `G G*` for a complex Gaussian `n × rank` matrix.
pub fn random_psd<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(n, rank, |_, _| gaussian(rng));
    &g * g.adjoint()
}

pub(crate) fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Largest entry modulus.
pub(crate) fn max_entry(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
