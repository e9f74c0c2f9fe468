//! The rank-2 locus of `F = (H, I, C)` and its two pieces
//!
//! ```text
//! M1 = { (x1, y1, x2, −x1 y1 / x2, −y1² / x2²) : x2 ≠ 0 }
//! M2 = { (x1, 0, 0, y2, −y2² / x1²)            : x1 ≠ 0 }
//! ```
//!
//! The union is invariant; neither piece is on its own.

use nalgebra::SMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::{integrate, IntegrationFailure, IntegratorConfig, Trajectory};
use crate::system::{grad_c, grad_h, grad_i, State5};

pub type JacobianF = SMatrix<f64, 3, 5>;

/// Rows `∇H`, `∇I`, `∇C`.
pub fn jacobian_f(p: &State5) -> JacobianF {
    let rows = [grad_h(p), grad_i(p), grad_c(p)];
    JacobianF::from_fn(|i, j| rows[i][j])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    /// Descending.
    pub singular_values: [f64; 3],
    pub rank: usize,
    pub tol_used: f64,
}

/// Relative singular-value threshold for the numerical rank.
pub const RANK_RTOL: f64 = 1e-10;
const RANK_FLOOR: f64 = 1e-14;

pub fn rank_f(p: &State5) -> RankReport {
    let svd = jacobian_f(p).svd_unordered(false, false);
    let mut sv = [svd.singular_values[0], svd.singular_values[1], svd.singular_values[2]];
    sv.sort_by(|a, b| b.total_cmp(a));
    let tol_used = (sv[0] * RANK_RTOL).max(RANK_FLOOR);
    RankReport {
        singular_values: sv,
        rank: sv.iter().filter(|&&s| s > tol_used).count(),
        tol_used,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct M1Point {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
}

impl M1Point {
    pub fn new(x1: f64, y1: f64, x2: f64) -> Result<Self> {
        if !(x1.is_finite() && y1.is_finite() && x2.is_finite()) {
            return Err(Error::NonFinite("M1 point"));
        }
        if x2 == 0.0 {
            return Err(Error::domain("M1 requires x2 ≠ 0"));
        }
        Ok(M1Point { x1, y1, x2 })
    }

    pub fn from_state(p: &State5) -> Result<Self> {
        M1Point::new(p.x1, p.y1, p.x2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct M2Point {
    pub x1: f64,
    pub y2: f64,
}

impl M2Point {
    pub fn new(x1: f64, y2: f64) -> Result<Self> {
        if !(x1.is_finite() && y2.is_finite()) {
            return Err(Error::NonFinite("M2 point"));
        }
        if x1 == 0.0 {
            return Err(Error::domain("M2 requires x1 ≠ 0"));
        }
        Ok(M2Point { x1, y2 })
    }
}

pub fn m1_embed(q: &M1Point) -> State5 {
    State5::new(q.x1, q.y1, q.x2, -q.x1 * q.y1 / q.x2, -q.y1 * q.y1 / (q.x2 * q.x2))
}

pub fn m2_embed(q: &M2Point) -> State5 {
    State5::new(q.x1, 0.0, 0.0, q.y2, -q.y2 * q.y2 / (q.x1 * q.x1))
}

/// Scaled residuals of the cleared-denominator equations
/// `y2 x2 + x1 y1 = 0` and `z x2² + y1² = 0`.
pub fn m1_defect(p: &State5) -> f64 {
    let n2 = p.norm() * p.norm();
    let a = (p.y2 * p.x2 + p.x1 * p.y1).abs() / (1.0 + n2);
    let b = (p.z * p.x2 * p.x2 + p.y1 * p.y1).abs() / (1.0 + n2 * p.norm());
    a.max(b)
}

/// Scaled residuals of `y1 = 0`, `x2 = 0` and `z x1² + y2² = 0`.
pub fn m2_defect(p: &State5) -> f64 {
    let n3 = p.norm().powi(3);
    p.y1.abs()
        .max(p.x2.abs())
        .max((p.z * p.x1 * p.x1 + p.y2 * p.y2).abs() / (1.0 + n3))
}

pub fn m1_membership(p: &State5, tol: f64) -> bool {
    p.x2.abs() > tol && m1_defect(p) <= tol
}

pub fn m2_membership(p: &State5, tol: f64) -> bool {
    p.x1.abs() > tol && m2_defect(p) <= tol
}

/// The flow restricted to `M1`: `(ẋ1, ẏ1, ẋ2)`.
pub fn m1_reduced_field(q: &M1Point) -> Result<[f64; 3]> {
    if q.x2 == 0.0 {
        return Err(Error::Singularity("M1 flow is singular at x2 = 0".into()));
    }
    let r = q.y1 / q.x2;
    Ok([q.y1, -q.x1 * q.y1 * r / q.x2, -q.x1 * r])
}

/// Derivative of [`m1_embed`] with respect to `(x1, y1, x2)`; rows follow `State5` order.
pub fn m1_embedding_jacobian(q: &M1Point) -> [[f64; 3]; 5] {
    let (x1, y1, x2) = (q.x1, q.y1, q.x2);
    [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [-y1 / x2, -x1 / x2, x1 * y1 / (x2 * x2)],
        [0.0, -2.0 * y1 / (x2 * x2), 2.0 * y1 * y1 / (x2 * x2 * x2)],
    ]
}

/// `(f1, f2) = (x1² + x2², y1 / x2)`
pub fn m1_conserved(q: &M1Point) -> Result<(f64, f64)> {
    if q.x2 == 0.0 {
        return Err(Error::Singularity("f2 = y1/x2 is singular at x2 = 0".into()));
    }
    Ok((q.x1 * q.x1 + q.x2 * q.x2, q.y1 / q.x2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    /// Largest `min(m1_defect, m2_defect)` over the samples.
    pub max_distance_to_union: f64,
    /// Sign changes of `x2` between consecutive samples.
    pub puncture_count: usize,
    pub samples: usize,
}

/// Counts sign changes, skipping samples that are exactly zero.
pub fn count_sign_changes(values: impl IntoIterator<Item = f64>) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

pub fn probe_trajectory(traj: &Trajectory) -> ProbeReport {
    let max_distance_to_union = traj
        .states
        .iter()
        .map(|p| m1_defect(p).min(m2_defect(p)))
        .fold(0.0, f64::max);
    ProbeReport {
        max_distance_to_union,
        puncture_count: count_sign_changes(traj.states.iter().map(|p| p.x2)),
        samples: traj.len(),
    }
}

/// Integrates the full system from `m1_embed(q0)` and measures how far the
/// orbit strays from `M1 ∪ M2`.
pub fn invariance_probe(
    q0: &M1Point,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> std::result::Result<ProbeReport, IntegrationFailure<Trajectory>> {
    let cfg = cfg.with_t_end(t_end);
    let traj = integrate(&m1_embed(q0), &cfg)?;
    Ok(probe_trajectory(&traj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::vector_field;

    #[test]
    fn jacobian_examples() {
        let j = jacobian_f(&State5::ORIGIN);
        let mut want = JacobianF::zeros();
        want[(2, 4)] = 1.0;
        assert_eq!(j, want);
        assert_eq!(rank_f(&State5::ORIGIN).rank, 1);
        assert_eq!(rank_f(&State5::new(0.0, 0.0, 0.0, 0.0, 3.0)).rank, 1);
        assert_eq!(rank_f(&State5::new(1.0, 2.0, 3.0, 4.0, 5.0)).rank, 3);
    }

    #[test]
    fn rank_on_the_two_pieces() {
        let p = m1_embed(&M1Point::new(1.0, 1.0, 1.0).unwrap());
        assert_eq!(p, State5::new(1.0, 1.0, 1.0, -1.0, -1.0));
        assert_eq!(rank_f(&p).rank, 2);
        let p = m2_embed(&M2Point::new(2.0, 1.0).unwrap());
        assert_eq!(p, State5::new(2.0, 0.0, 0.0, 1.0, -0.25));
        assert_eq!(rank_f(&p).rank, 2);
    }

    #[test]
    fn rank_report_is_sorted() {
        let r = rank_f(&State5::new(0.3, -2.0, 1.5, 0.1, 0.7));
        assert!(r.singular_values[0] >= r.singular_values[1]);
        assert!(r.singular_values[1] >= r.singular_values[2]);
        assert!(r.singular_values[2] >= 0.0);
    }

    #[test]
    fn embeddings_and_membership() {
        assert_eq!(m2_embed(&M2Point::new(1.0, 0.0).unwrap()), State5::new(1.0, 0.0, 0.0, 0.0, 0.0));
        assert!(!m1_membership(&State5::new(1.0, 2.0, 3.0, 4.0, 5.0), 1e-9));
        assert!(m1_membership(&m1_embed(&M1Point::new(0.4, -1.2, 0.9).unwrap()), 1e-9));
        assert!(m2_membership(&m2_embed(&M2Point::new(-0.7, 1.5).unwrap()), 1e-9));
        assert!(!m2_membership(&m1_embed(&M1Point::new(0.4, -1.2, 0.9).unwrap()), 1e-9));
        assert!(M1Point::new(1.0, 1.0, 0.0).is_err());
        assert!(M2Point::new(0.0, 1.0).is_err());
    }

    #[test]
    fn reduced_field_examples() {
        assert_eq!(m1_reduced_field(&M1Point::new(1.0, 1.0, 1.0).unwrap()).unwrap(), [1.0, -1.0, -1.0]);
        assert_eq!(m1_reduced_field(&M1Point::new(0.3, 0.0, -2.0).unwrap()).unwrap(), [0.0, 0.0, 0.0]);
        let bad = M1Point { x1: 1.0, y1: 1.0, x2: 0.0 };
        assert!(matches!(m1_reduced_field(&bad), Err(Error::Singularity(_))));
        assert!(m1_conserved(&bad).is_err());
    }

    #[test]
    fn reduced_field_is_tangent() {
        for q in [
            M1Point::new(1.0, 1.0, 1.0).unwrap(),
            M1Point::new(-0.6, 1.7, 0.45).unwrap(),
            M1Point::new(1.9, -0.3, -1.2).unwrap(),
        ] {
            let v = m1_reduced_field(&q).unwrap();
            let d = m1_embedding_jacobian(&q);
            let pushed: [f64; 5] = std::array::from_fn(|r| (0..3).map(|k| d[r][k] * v[k]).sum());
            let full = vector_field(&m1_embed(&q)).unwrap().to_array();
            for r in 0..5 {
                assert!((pushed[r] - full[r]).abs() < 1e-13, "row {r}: {} vs {}", pushed[r], full[r]);
            }
        }
    }

    #[test]
    fn conserved_examples() {
        assert_eq!(m1_conserved(&M1Point::new(1.0, 1.0, 1.0).unwrap()).unwrap(), (2.0, 1.0));
        // ∇f1·v and ∇f2·v vanish.
        let q = M1Point::new(2.0, 1.0, 1.0).unwrap();
        let [dx1, dy1, dx2] = m1_reduced_field(&q).unwrap();
        assert_eq!(2.0 * q.x1 * dx1 + 2.0 * q.x2 * dx2, 0.0);
        assert_eq!(dy1 / q.x2 - q.y1 * dx2 / (q.x2 * q.x2), 0.0);
    }

    #[test]
    fn sign_changes() {
        assert_eq!(count_sign_changes([1.0, 0.5, -0.2, -1.0, 0.0, 2.0]), 2);
        assert_eq!(count_sign_changes([0.0, 0.0]), 0);
        assert_eq!(count_sign_changes([]), 0);
    }

    #[test]
    fn probe_from_equilibrium() {
        let q = M1Point::new(0.5, 0.0, 1.0).unwrap();
        let r = invariance_probe(&q, 5.0, &IntegratorConfig::rk45(1e-10, 5.0)).unwrap();
        assert_eq!(r.max_distance_to_union, 0.0);
        assert_eq!(r.puncture_count, 0);
    }
}
