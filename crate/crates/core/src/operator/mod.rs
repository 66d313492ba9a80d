//! Finite-dimensional operator models on `C(ex(K))`.
//!
//! A unital *-homomorphism is a finite atomic projection-valued measure
//! ([`OperatorMeasure`] of kind `pvm`); a u.c.p. map is a finite atomic POVM.
//! Agreement on `A(K)` is agreement of the zeroth and first moments.

mod chain;
mod linalg;
mod measure;
mod metrics;
mod rigidity;
mod sample;

pub use chain::{brown_inequality, compression_chain, BrownReport, ChainReport, SegmentCheck, ShrinkTerm};
pub use linalg::{
    hermitian_eigen, is_psd, max_abs_eigenvalue, min_eigenvalue, random_hermitian, random_psd, random_unitary,
    spectral_norm, CMat, Complex64, SPECTRAL_TOL,
};
pub use measure::{
    apply_function, apply_indicator, moment_residual, site_parameter, validate_measure, Atom, Diagnostics, MeasureKind,
    MeasureSpec, MomentResidual, OperatorMeasure,
};
pub use metrics::{
    d_strong, d_weak, shift_control_family, symmetry_family, symmetry_identity_residual, wot_sot_metrics, Carrier,
    MetricRow,
};
pub use rigidity::{barycenter_rigidity, deviation_search, Barycenter, Deviation, SearchConfig};
pub use sample::{mixed_povm, random_pvm};
