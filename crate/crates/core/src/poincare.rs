//! The Poincaré half-plane `{q₂ > 0}` as a Lagrangian system with
//! `L = (q̇₁² + q̇₂²) / (2 q₂²)`.

use crate::error::{Error, Result};
use crate::lagrangian::{LagrangianSystem, State};

const DOMAIN: &str = "half-plane q2 > 0";

/// The half-plane Lagrangian. Geodesics are its natural motions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PoincareHalfPlane;

pub fn make_poincare_system() -> PoincareHalfPlane {
    PoincareHalfPlane
}

impl LagrangianSystem<2> for PoincareHalfPlane {
    fn lagrangian(&self, _t: f64, q: &[f64; 2], v: &[f64; 2]) -> f64 {
        (v[0] * v[0] + v[1] * v[1]) / (2.0 * q[1] * q[1])
    }

    fn dl_dq(&self, _t: f64, q: &[f64; 2], v: &[f64; 2]) -> [f64; 2] {
        [0.0, -(v[0] * v[0] + v[1] * v[1]) / (q[1] * q[1] * q[1])]
    }

    fn dl_dv(&self, _t: f64, q: &[f64; 2], v: &[f64; 2]) -> [f64; 2] {
        let q2sq = q[1] * q[1];
        [v[0] / q2sq, v[1] / q2sq]
    }

    fn acceleration(&self, _t: f64, q: &[f64; 2], v: &[f64; 2]) -> [f64; 2] {
        [2.0 * v[0] * v[1] / q[1], (v[1] * v[1] - v[0] * v[0]) / q[1]]
    }

    fn boundary_distance(&self, q: &[f64; 2]) -> f64 {
        q[1]
    }

    fn domain_ok(&self, q: &[f64; 2]) -> bool {
        q[1] > 0.0
    }

    fn domain_description(&self) -> &'static str {
        DOMAIN
    }
}

fn check(s: &State<2>) -> Result<()> {
    if s.q[1] > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            domain: DOMAIN,
            position: s.q.to_vec(),
        })
    }
}

/// Energy `(v₁² + v₂²) / (2 q₂²)`.
pub fn poincare_energy(s: &State<2>) -> Result<f64> {
    check(s)?;
    Ok(PoincareHalfPlane.lagrangian(s.t, &s.q, &s.v))
}

/// Horizontal momentum `v₁ / q₂²`, conserved because `L` does not depend
/// on `q₁`.
pub fn poincare_momentum(s: &State<2>) -> Result<f64> {
    check(s)?;
    Ok(s.v[0] / (s.q[1] * s.q[1]))
}
