//! Nonlocal constants of motion for Lagrangian systems, applied to the
//! geodesics of the Poincaré half-plane.
//!
//! - [`lagrangian`]: generic systems, energy and discrete Euler–Lagrange residuals
//! - [`poincare`]: the half-plane Lagrangian and its first integrals `E`, `p`
//! - [`integrator`]: fixed-step RK4 and cumulative quadrature on a shared grid
//! - [`nonlocal`]: the nonlocal constant for arbitrary variation fields
//! - [`geodesic`]: closed-form geodesics and their classification

pub mod error;
pub mod geodesic;
pub mod integrator;
pub mod lagrangian;
pub mod nonlocal;
pub mod poincare;

pub use error::{Error, Result};
pub use geodesic::{
    circle_residual, classify, eval_q1, eval_q2, eval_state, fit_params, sample_closed_form,
    GeodesicParams, GeodesicShape,
};
pub use integrator::{cumulative_integral, integrate_el, IntegrationConfig};
pub use lagrangian::{
    el_residual, energy, max_abs_component, partials_mismatch, FiniteDifferenceSystem,
    LagrangianSystem, State, Trajectory,
};
pub use nonlocal::{
    check_linear_ode, nonlocal_constant, nonlocal_terms, q1_translation_field,
    q2_nonlocal_closed_form, q2_translation_field, DriftReport, NonlocalTerms, VariationField,
};
pub use poincare::{make_poincare_system, poincare_energy, poincare_momentum, PoincareHalfPlane};
