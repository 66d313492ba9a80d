//! Constructive geometry of planar compact convex bodies and finite-dimensional
//! checks of the rigidity of the affine functions `A(K)` inside `C(ex(K))`.
//!
//! The geometric half ([`body`], [`tangent`], [`angle`], [`motion`]) builds the
//! polar parameterization `p(t)` of the boundary, its one-sided derivatives,
//! the supporting lines `∂±_{p(t)}`, the angle function `∢(s, t)` with its
//! partitions, and the chord motions `g_I` whose estimates combine into the
//! bound `‖π(χ_{p(I)}) φ(χ_{p(J)}) π(χ_{p(I)})‖ <= ε·L/c`.
//!
//! The [`operator`] half models unital *-homomorphisms and u.c.p. maps on
//! `C(ex(K))` by finite atomic PVMs and POVMs and verifies the bound chain,
//! barycenter rigidity, a hyperrigidity probe, and WOT/SOT metric experiments.

pub mod angle;
pub mod body;
pub mod error;
pub mod geom;
pub mod interval;
pub mod motion;
pub mod operator;
pub mod random;
pub mod tangent;
pub mod verify;

pub use angle::{angle, angle_partition, AngleCase, AngleResult, Partition};
pub use body::{
    center_body, extreme_parameters, ingest_body, minkowski_functional, perimeter, polar_point, BodyKind, BodySpec,
    BoundaryPoint, ConvexBody, ExtremeSet,
};
pub use error::{Error, Result};
pub use geom::{Line, Vec2, DEFAULT_TOL};
pub use interval::CircleInterval;
pub use motion::{
    chord_motion, dist_to_support_union, im_inf_on_set, im_sup_on_arc, normalized_affine, rigidity_bound,
    shrink_interval, upper_bound_partition, AffineFunction, NormalizedAffine, RigidMotion, RigidityBound, Shrink,
    UpperBoundTable,
};
pub use operator::{
    apply_function, apply_indicator, barycenter_rigidity, brown_inequality, compression_chain, deviation_search,
    moment_residual, validate_measure, wot_sot_metrics, MeasureKind, MomentResidual, OperatorMeasure,
};
pub use tangent::{face_interval, one_sided_derivative, signed_side, support_line, LineKind, Side, SupportLine};
