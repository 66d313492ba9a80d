use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::linalg::{min_eigenvalue, real, spectral_norm, CMat};
use super::measure::{
    apply_function, moment_residual, site_parameter, validate_measure, MomentResidual, OperatorMeasure,
};
use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::interval::CircleInterval;
use crate::motion::{normalized_affine, rigidity_bound, shrink_interval, Shrink};

/// PSD orderings may fail by this much before the chain is rejected.
const ORDER_TOL: f64 = 1e-9;

/// Moment residual above which a POVM is not considered to agree with the PVM on `A(K)`.
const MAX_RESIDUAL: f64 = 1e-8;

const PROJ_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrownReport {
    /// `‖A‖`.
    pub lhs: f64,
    /// `Σ ‖P_i A P_i‖`.
    pub rhs: f64,
    pub terms: Vec<f64>,
}

impl BrownReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs <= self.rhs + tol
    }
}

/// Both sides of `‖A‖ <= Σ ‖P_i A P_i‖` for positive `A` and an orthogonal
/// decomposition `Σ P_i = I`.
pub fn brown_inequality(a: &CMat, projections: &[CMat]) -> Result<BrownReport> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch(a.nrows(), a.ncols()));
    }
    let lam = min_eigenvalue(a);
    if lam < -PROJ_TOL {
        return Err(Error::NotPsd(lam));
    }
    let mut sum = CMat::zeros(n, n);
    for (i, p) in projections.iter().enumerate() {
        if p.shape() != (n, n) {
            return Err(Error::DimensionMismatch(n, p.nrows()));
        }
        if spectral_norm(&(p * p - p)) > PROJ_TOL || spectral_norm(&(p - p.adjoint())) > PROJ_TOL {
            return Err(Error::InvalidMeasure(format!("block {i} is not an orthogonal projection")));
        }
        sum += p;
    }
    if spectral_norm(&(sum - CMat::identity(n, n))) > PROJ_TOL {
        return Err(Error::InvalidMeasure("projections do not sum to the identity".into()));
    }
    let terms: Vec<f64> = projections.iter().map(|p| spectral_norm(&(p * a * p))).collect();
    Ok(BrownReport { lhs: spectral_norm(a), rhs: terms.iter().sum(), terms })
}

/// Per-segment view of the chain
/// `P φ(χ_J) P ⪯ P φ(g̃) P = π(g̃ χ) ⪯ (sup/inf) P` with `P = π(χ_{p([tₙ, tₙ₊₁))})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentCheck {
    pub lo: f64,
    pub hi: f64,
    /// PVM atoms carried by the segment.
    pub atoms: usize,
    /// `sup/inf`, the bound on `g̃` over the segment.
    pub ratio: f64,
    /// `‖P φ(χ_J) P‖`.
    pub term: f64,
    /// `λ_min(P φ(g̃) P - P φ(χ_J) P)`.
    pub dominance: f64,
    /// `‖P φ(g̃) P - π(g̃ χ)‖`; zero up to the moment residual.
    pub equality: f64,
    /// `λ_min((sup/inf) P - π(g̃ χ))`.
    pub ceiling: f64,
    /// `λ_min((sup/inf) P - P φ(χ_J) P)`, the end-to-end ordering.
    pub ordering: f64,
}

/// Extreme endpoint left over by the shrink of `I`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShrinkTerm {
    pub t: f64,
    pub atoms: usize,
    /// `‖π(χ_{p(t)}) φ(χ_J) π(χ_{p(t)})‖`.
    pub term: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    /// `‖π(χ_{p(I)}) φ(χ_{p(J)}) π(χ_{p(I)})‖`.
    pub norm: f64,
    /// `Σ (ε/c)|chordₙ|` over the (possibly shrunk) interval; 0 if nothing is left.
    pub bound: f64,
    /// `ε L / c`.
    pub cap: f64,
    pub c: f64,
    pub epsilon: f64,
    pub residual: MomentResidual,
    pub shrink: Shrink,
    pub segments: Vec<SegmentCheck>,
    pub endpoints: Vec<ShrinkTerm>,
    /// `Σ` segment terms plus endpoint terms.
    pub brown_sum: f64,
    /// Slack owed to the moment residual in the equality step.
    pub slack: f64,
    pub holds: bool,
}

/// Measure every link of the bound chain for `M = π(χ_{p(I)}) φ(χ_{p(J)}) π(χ_{p(I)})`.
pub fn compression_chain(
    body: &ConvexBody,
    pvm: &OperatorMeasure,
    povm: &OperatorMeasure,
    i: &CircleInterval,
    j: &CircleInterval,
    epsilon: f64,
) -> Result<ChainReport> {
    let residual = moment_residual(povm, pvm)?;
    if residual.max() > MAX_RESIDUAL {
        return Err(Error::MomentResidual(residual.max()));
    }
    let diag = validate_measure(pvm, Some(body));
    if !diag.is_pvm || !diag.valid {
        return Err(Error::InvalidMeasure(format!("pvm: {}", diag.issues.join("; "))));
    }
    let diag = validate_measure(povm, Some(body));
    if !diag.valid {
        return Err(Error::InvalidMeasure(format!("povm: {}", diag.issues.join("; "))));
    }
    if !i.is_disjoint(j) {
        return Err(Error::InvalidInterval { lo: j.lo(), hi: j.hi(), reason: "J must be disjoint from I" });
    }
    let tol = body.tol();
    let n = pvm.dimension();
    let params = |m: &OperatorMeasure| -> Vec<f64> {
        m.atoms().iter().map(|a| site_parameter(body, a.site).expect("validated site")).collect()
    };
    let (pt, qt) = (params(pvm), params(povm));

    let pvm_sum = |keep: &dyn Fn(f64) -> bool| -> (CMat, usize) {
        let mut p = CMat::zeros(n, n);
        let mut count = 0;
        for (a, &t) in pvm.atoms().iter().zip(&pt) {
            if keep(t) {
                p += &a.weight;
                count += 1;
            }
        }
        (p, count)
    };
    let phi_j = povm
        .atoms()
        .iter()
        .zip(&qt)
        .filter(|(_, &t)| j.contains(t, tol))
        .fold(CMat::zeros(n, n), |acc, (a, _)| acc + &a.weight);

    let (p_i, _) = pvm_sum(&|t| i.contains(t, tol));
    let norm = spectral_norm(&(&p_i * &phi_j * &p_i));

    let keep: Vec<f64> = pt.iter().map(|&t| lift(t, i)).filter(|&t| i.contains(t, tol)).collect();
    let shrink = shrink_interval(body, i, std::slice::from_ref(j), &keep)?;
    let (work, ends) = match &shrink {
        Shrink::Separated { .. } => (Some(*i), vec![]),
        Shrink::NoExtremePoints => (None, vec![]),
        Shrink::Singleton { t } => (None, vec![*t]),
        Shrink::Shrunk { hull, interval, .. } => (Some(*interval), vec![hull.lo(), hull.hi()]),
    };

    let endpoints: Vec<ShrinkTerm> = ends
        .iter()
        .map(|&e| {
            let (p, atoms) = pvm_sum(&|t| circ_dist(t, e) <= tol);
            ShrinkTerm { t: e, atoms, term: spectral_norm(&(&p * &phi_j * &p)) }
        })
        .collect();

    let (mut bound, mut cap, mut c, mut segments, mut slack) = (0.0, 0.0, f64::INFINITY, Vec::new(), 0.0);
    if let Some(w) = work {
        let rb = rigidity_bound(body, &w, j, epsilon)?;
        bound = rb.bound;
        cap = rb.cap();
        c = rb.c;
        let knots = &rb.table.partition.knots;
        let last = knots.len() - 2;
        for (k, win) in knots.windows(2).enumerate() {
            let (lo, hi) = (win[0], win[1]);
            let seg = CircleInterval::new(lo, hi)?;
            let member = |t: f64| {
                let t = lift(t, &w);
                t >= lo - tol && (t < hi - tol || (k == last && t <= hi + tol))
            };
            let (p, atoms) = pvm_sum(&member);
            let g = normalized_affine(body, &seg, j)?;
            let f = g.function;
            let ratio = g.ratio();
            let lhs = &p * &phi_j * &p;
            let mid = &p * apply_function(povm, |z| f.eval(z)) * &p;
            let pi_g = pvm
                .atoms()
                .iter()
                .zip(&pt)
                .filter(|(_, &t)| member(t))
                .fold(CMat::zeros(n, n), |acc, (a, _)| acc + &a.weight * real(f.eval(a.site)));
            let top = &p * real(ratio);
            slack += (f.a.abs() + f.b.abs()) * residual.affine + f.c.abs() * residual.unit;
            segments.push(SegmentCheck {
                lo,
                hi,
                atoms,
                ratio,
                term: spectral_norm(&lhs),
                dominance: min_eigenvalue(&(&mid - &lhs)),
                equality: spectral_norm(&(&mid - &pi_g)),
                ceiling: min_eigenvalue(&(&top - &pi_g)),
                ordering: min_eigenvalue(&(&top - &lhs)),
            });
        }
    }

    let brown_sum: f64 = segments.iter().map(|s| s.term).sum::<f64>() + endpoints.iter().map(|e| e.term).sum::<f64>();
    let end_sum: f64 = endpoints.iter().map(|e| e.term).sum();
    let holds = segments.iter().all(|s| {
        s.dominance >= -ORDER_TOL
            && s.equality <= ORDER_TOL + slack
            && s.ceiling >= -ORDER_TOL
            && s.ordering >= -ORDER_TOL - slack
            && s.term <= s.ratio + ORDER_TOL + slack
    }) && norm <= brown_sum + ORDER_TOL
        && norm <= bound + end_sum + ORDER_TOL + slack;

    Ok(ChainReport { norm, bound, cap, c, epsilon, residual, shrink, segments, endpoints, brown_sum, slack, holds })
}

/// Representative of `t` in `[lo, lo + 2π)` relative to `w`.
fn lift(t: f64, w: &CircleInterval) -> f64 {
    if t < w.lo() - 1e-12 {
        t + TAU
    } else {
        t
    }
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}
