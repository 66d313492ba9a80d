use serde::{Deserialize, Serialize};

use super::linalg::{max_entry, min_eigenvalue, real, spectral_norm, CMat, Complex64};
use crate::body::{extreme_parameters, polar_point, ConvexBody};
use crate::error::{Error, Result};
use crate::geom::{polar_angle, Vec2, DEFAULT_TOL};

/// Residual allowed on each measure invariant.
const MEASURE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Pvm,
    Povm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub site: Vec2,
    pub weight: CMat,
}

/// Finite atomic matrix-valued measure on `ex(K)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMeasure {
    pub kind: MeasureKind,
    dimension: usize,
    atoms: Vec<Atom>,
}

/// On-disk form: weights are rows of `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub dimension: usize,
    pub atoms: Vec<AtomSpec>,
    pub kind: MeasureKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub site: [f64; 2],
    pub weight: Vec<Vec<[f64; 2]>>,
}

impl OperatorMeasure {
    pub fn new(kind: MeasureKind, dimension: usize, atoms: Vec<Atom>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidMeasure("dimension must be positive".into()));
        }
        for a in &atoms {
            if a.weight.shape() != (dimension, dimension) {
                return Err(Error::DimensionMismatch(dimension, a.weight.nrows().max(a.weight.ncols())));
            }
            if !a.site.iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidMeasure("non-finite site".into()));
            }
        }
        Ok(Self { kind, dimension, atoms })
    }

    /// PVM whose k-th atom is `e_k e_k*` at `sites[k]`.
    pub fn diagonal_pvm(sites: &[Vec2]) -> Self {
        let n = sites.len();
        let atoms = sites
            .iter()
            .enumerate()
            .map(|(k, &site)| {
                let mut w = CMat::zeros(n, n);
                w[(k, k)] = real(1.0);
                Atom { site, weight: w }
            })
            .collect();
        Self { kind: MeasureKind::Pvm, dimension: n, atoms }
    }

    /// Point mass `I ⊗ δ_site`.
    pub fn dirac(site: Vec2, dimension: usize) -> Self {
        Self {
            kind: MeasureKind::Pvm,
            dimension,
            atoms: vec![Atom { site, weight: CMat::identity(dimension, dimension) }],
        }
    }

    pub fn from_spec(spec: &MeasureSpec) -> Result<Self> {
        let n = spec.dimension;
        let atoms = spec
            .atoms
            .iter()
            .map(|a| {
                if a.weight.len() != n || a.weight.iter().any(|row| row.len() != n) {
                    return Err(Error::InvalidMeasure(format!("weight must be {n}x{n}")));
                }
                let w = CMat::from_fn(n, n, |i, j| Complex64::new(a.weight[i][j][0], a.weight[i][j][1]));
                Ok(Atom { site: Vec2::new(a.site[0], a.site[1]), weight: w })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec.kind, n, atoms)
    }

    pub fn to_spec(&self) -> MeasureSpec {
        MeasureSpec {
            dimension: self.dimension,
            kind: self.kind,
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomSpec {
                    site: [a.site.x, a.site.y],
                    weight: (0..self.dimension)
                        .map(|i| (0..self.dimension).map(|j| [a.weight[(i, j)].re, a.weight[(i, j)].im]).collect())
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: MeasureSpec = serde_json::from_str(text).map_err(|e| Error::InvalidMeasure(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// `μ(1)`.
    pub fn total(&self) -> CMat {
        apply_function(self, |_| 1.0)
    }

    /// `(μ(Re z), μ(Im z))`.
    pub fn first_moments(&self) -> (CMat, CMat) {
        (apply_function(self, |z| z.x), apply_function(self, |z| z.y))
    }
}

/// `μ(F ∩ sites)` for the indicator of `F`.
pub fn apply_indicator(m: &OperatorMeasure, in_f: impl Fn(Vec2) -> bool) -> CMat {
    let n = m.dimension;
    m.atoms.iter().filter(|a| in_f(a.site)).fold(CMat::zeros(n, n), |acc, a| acc + &a.weight)
}

/// `Σ f(site) · weight`.
pub fn apply_function(m: &OperatorMeasure, f: impl Fn(Vec2) -> f64) -> CMat {
    let n = m.dimension;
    m.atoms.iter().fold(CMat::zeros(n, n), |acc, a| acc + &a.weight * real(f(a.site)))
}

/// Parameter `t` with `p(t) = site` and `p(t)` extreme, if any.
pub fn site_parameter(body: &ConvexBody, site: Vec2) -> Option<f64> {
    if site.norm() == 0.0 {
        return None;
    }
    let t = polar_angle(site);
    let on_boundary = (polar_point(body, t).point - site).norm() <= DEFAULT_TOL * site.norm().max(1.0);
    (on_boundary && extreme_parameters(body).contains(t, DEFAULT_TOL)).then_some(t)
}

/// All invariant residuals of a measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `‖Σ W - I‖`.
    pub unit: f64,
    pub min_eigenvalue: f64,
    /// `max ‖W - W*‖`.
    pub hermitian: f64,
    /// `max ‖W² - W‖`.
    pub projection: f64,
    /// `max_{i≠j} ‖W_i W_j‖`.
    pub orthogonality: f64,
    /// Atoms whose site is not an extreme point of the body (if one was given).
    pub off_support: usize,
    pub is_pvm: bool,
    pub valid: bool,
    pub issues: Vec<String>,
}

pub fn validate_measure(m: &OperatorMeasure, body: Option<&ConvexBody>) -> Diagnostics {
    let n = m.dimension;
    let unit = spectral_norm(&(m.total() - CMat::identity(n, n)));
    let hermitian = m.atoms.iter().map(|a| max_entry(&(&a.weight - a.weight.adjoint()))).fold(0.0, f64::max);
    let min_eig = m.atoms.iter().map(|a| min_eigenvalue(&a.weight)).fold(f64::INFINITY, f64::min);
    let min_eig = if min_eig.is_finite() { min_eig } else { 0.0 };
    let projection = m.atoms.iter().map(|a| spectral_norm(&(&a.weight * &a.weight - &a.weight))).fold(0.0, f64::max);
    let mut orthogonality: f64 = 0.0;
    for (i, a) in m.atoms.iter().enumerate() {
        for b in &m.atoms[i + 1..] {
            orthogonality = orthogonality.max(spectral_norm(&(&a.weight * &b.weight)));
        }
    }
    let off_support = body.map_or(0, |k| m.atoms.iter().filter(|a| site_parameter(k, a.site).is_none()).count());

    let is_pvm = projection <= MEASURE_TOL && orthogonality <= MEASURE_TOL;
    let mut issues = Vec::new();
    if unit > MEASURE_TOL {
        issues.push(format!("weights sum to identity only up to {unit:e}"));
    }
    if hermitian > MEASURE_TOL {
        issues.push(format!("weight not Hermitian ({hermitian:e})"));
    }
    if min_eig < -MEASURE_TOL {
        issues.push(format!("weight not PSD (min eigenvalue {min_eig:e})"));
    }
    if m.kind == MeasureKind::Pvm && !is_pvm {
        issues.push(format!(
            "tagged pvm but weights are not orthogonal projections (projection {projection:e}, orthogonality {orthogonality:e})"
        ));
    }
    if off_support > 0 {
        issues.push(format!("{off_support} site(s) outside ex(K)"));
    }
    Diagnostics {
        unit,
        min_eigenvalue: min_eig,
        hermitian,
        projection,
        orthogonality,
        off_support,
        is_pvm,
        valid: issues.is_empty(),
        issues,
    }
}

/// Agreement of a POVM with a PVM on `A(K) = span{1, Re z, Im z}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentResidual {
    /// `‖φ(1) - I‖`.
    pub unit: f64,
    /// `max(‖φ(Re z) - π(Re z)‖, ‖φ(Im z) - π(Im z)‖)`.
    pub affine: f64,
}

impl MomentResidual {
    pub fn max(&self) -> f64 {
        self.unit.max(self.affine)
    }
}

pub fn moment_residual(povm: &OperatorMeasure, pvm: &OperatorMeasure) -> Result<MomentResidual> {
    if povm.dimension != pvm.dimension {
        return Err(Error::DimensionMismatch(povm.dimension, pvm.dimension));
    }
    let n = povm.dimension;
    let unit = spectral_norm(&(povm.total() - CMat::identity(n, n)));
    let (qx, qy) = povm.first_moments();
    let (px, py) = pvm.first_moments();
    let affine = spectral_norm(&(qx - px)).max(spectral_norm(&(qy - py)));
    Ok(MomentResidual { unit, affine })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vec2;

    fn half_povm() -> OperatorMeasure {
        let half = CMat::identity(2, 2) * real(0.5);
        OperatorMeasure::new(
            MeasureKind::Povm,
            2,
            vec![Atom { site: vec2(1.0, 0.0), weight: half.clone() }, Atom { site: vec2(-1.0, 0.0), weight: half }],
        )
        .unwrap()
    }

    #[test]
    fn diagonal_pvm_is_clean() {
        let m = OperatorMeasure::diagonal_pvm(&[vec2(1.0, 0.0), vec2(-1.0, 0.0)]);
        let d = validate_measure(&m, None);
        assert!(d.valid && d.is_pvm);
        assert_eq!((d.unit, d.projection, d.orthogonality), (0.0, 0.0, 0.0));
    }

    #[test]
    fn half_identity_is_povm_not_pvm() {
        let d = validate_measure(&half_povm(), None);
        assert!(d.valid && !d.is_pvm);
        assert!((d.projection - 0.25).abs() < 1e-12);
    }

    #[test]
    fn unit_residual() {
        let m = OperatorMeasure::new(
            MeasureKind::Povm,
            3,
            vec![Atom { site: vec2(1.0, 0.0), weight: CMat::identity(3, 3) * real(0.9) }],
        )
        .unwrap();
        let d = validate_measure(&m, None);
        assert!((d.unit - 0.1).abs() < 1e-12);
        assert!(!d.valid);
    }

    #[test]
    fn apply() {
        let m = OperatorMeasure::diagonal_pvm(&[vec2(1.0, 0.0), vec2(-1.0, 0.0)]);
        let e = apply_indicator(&m, |z| z == vec2(1.0, 0.0));
        assert_eq!(e, m.atoms()[0].weight);
        assert_eq!(apply_function(&m, |_| 1.0), CMat::identity(2, 2));
        assert_eq!(apply_function(&half_povm(), |z| z.x), CMat::zeros(2, 2));
    }

    #[test]
    fn moments() {
        let pvm = OperatorMeasure::dirac(vec2(1.0, 0.0), 1);
        let povm = OperatorMeasure::new(
            MeasureKind::Povm,
            1,
            vec![
                Atom { site: vec2(1.0, 0.0), weight: CMat::identity(1, 1) * real(0.5) },
                Atom { site: vec2(-1.0, 0.0), weight: CMat::identity(1, 1) * real(0.5) },
            ],
        )
        .unwrap();
        let r = moment_residual(&povm, &pvm).unwrap();
        assert_eq!(r.unit, 0.0);
        assert!((r.affine - 1.0).abs() < 1e-12);
        assert_eq!(moment_residual(&pvm, &pvm).unwrap().max(), 0.0);
        let other = OperatorMeasure::dirac(vec2(1.0, 0.0), 2);
        assert!(matches!(moment_residual(&other, &pvm), Err(Error::DimensionMismatch(2, 1))));
    }

    #[test]
    fn diamond_vertex_weights() {
        let verts = [vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(-1.0, 0.0), vec2(0.0, -1.0)];
        let one = CMat::identity(1, 1);
        let atoms = verts
            .iter()
            .enumerate()
            .map(|(k, &site)| Atom { site, weight: &one * real(if k == 0 { 1.0 } else { 0.0 }) })
            .collect();
        let povm = OperatorMeasure::new(MeasureKind::Povm, 1, atoms).unwrap();
        let pvm = OperatorMeasure::dirac(verts[0], 1);
        assert_eq!(moment_residual(&povm, &pvm).unwrap().max(), 0.0);
    }

    #[test]
    fn json_round_trip_and_support() {
        let diamond = ConvexBody::polygon(&[vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(-1.0, 0.0), vec2(0.0, -1.0)]).unwrap();
        let m = OperatorMeasure::diagonal_pvm(&[vec2(0.0, 1.0), vec2(0.5, 0.5)]);
        let text = serde_json::to_string(&m.to_spec()).unwrap();
        let back = OperatorMeasure::from_json(&text).unwrap();
        assert_eq!(back, m);
        let d = validate_measure(&m, Some(&diamond));
        assert_eq!(d.off_support, 1);
        assert!(!d.valid);
        assert!(OperatorMeasure::from_json(
            r#"{"dimension":2,"kind":"pvm","atoms":[{"site":[1,0],"weight":[[[1,0]]]}]}"#
        )
        .is_err());
    }
}
