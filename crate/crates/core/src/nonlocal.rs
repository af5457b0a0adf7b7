//! Nonlocal constants of motion.
//!
//! Given a solution `q(t)` of the Euler–Lagrange equations and any smooth
//! family of perturbed motions `q_λ(t)` with `q_0 = q`, the quantity
//!
//! ```text
//! ∂L/∂q̇ · w(t)  −  ∫_{t0}^{t} ( ∂L/∂q · w + ∂L/∂q̇ · ẇ ) ds,     w = ∂q_λ/∂λ |_{λ=0}
//! ```
//!
//! is constant in `t`. The family enters only through its variation field
//! `w`, so that is all a [`VariationField`] carries. When the family is a
//! symmetry of `L` the integrand vanishes and the constant is an ordinary
//! first integral; otherwise it depends on the whole history since `t0`.
//!
//! For the half-plane the `q₂`-translation family gives, on shell,
//! `−d/dt(1/q₂) + 2E ∫ 1/q₂ ds`, whose time derivative is the linear ODE
//! `−(1/q₂)'' + 2E (1/q₂) = 0` checked by [`check_linear_ode`].

use std::fmt;

use crate::error::{Error, Result};
use crate::integrator::cumulative_integral;
use crate::lagrangian::{LagrangianSystem, State, Trajectory};
use crate::poincare::poincare_energy;

type FieldFn<const N: usize> = dyn Fn(f64, &State<N>) -> [f64; N] + Send + Sync;

/// First-order variation `w(t, state)` of a family of perturbed motions.
pub struct VariationField<const N: usize> {
    label: String,
    w: Box<FieldFn<N>>,
}

impl<const N: usize> VariationField<N> {
    pub fn new<F>(label: impl Into<String>, w: F) -> Self
    where
        F: Fn(f64, &State<N>) -> [f64; N] + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            w: Box::new(w),
        }
    }

    /// The field that is identically zero (the trivial family `q_λ = q`).
    pub fn zero() -> Self {
        Self::new("zero", |_, _| [0.0; N])
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, t: f64, s: &State<N>) -> [f64; N] {
        (self.w)(t, s)
    }
}

impl<const N: usize> fmt::Debug for VariationField<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VariationField")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

/// `q_λ = (q₁ + λ, q₂)`: a symmetry of the half-plane Lagrangian.
pub fn q1_translation_field() -> VariationField<2> {
    VariationField::new("q1-translation", |_, _| [1.0, 0.0])
}

/// `q_λ = (q₁, q₂ + λ)`: not a symmetry, yet its nonlocal constant separates
/// the equation for `1/q₂`.
pub fn q2_translation_field() -> VariationField<2> {
    VariationField::new("q2-translation", |_, _| [0.0, 1.0])
}

/// How far a sequence that should be constant strays from its first value.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftReport {
    pub values: Vec<f64>,
    /// `max |values[k] − values[0]|`
    pub max_drift: f64,
    /// `max(1, max |values[k]|)`
    pub scale: f64,
    pub relative_drift: f64,
}

impl DriftReport {
    pub fn from_values(values: Vec<f64>) -> Self {
        let first = values.first().copied().unwrap_or(0.0);
        let max_drift = values.iter().map(|x| (x - first).abs()).fold(0.0, f64::max);
        let scale = values.iter().map(|x| x.abs()).fold(1.0, f64::max);
        Self {
            relative_drift: max_drift / scale,
            max_drift,
            scale,
            values,
        }
    }

    /// Value at the start of the trajectory.
    pub fn initial(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// The pieces of the nonlocal constant at every grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlocalTerms {
    /// `∂L/∂q̇ · w`
    pub boundary: Vec<f64>,
    /// `∂L/∂q · w + ∂L/∂q̇ · ẇ`, the λ-derivative of `L` along the family.
    pub integrand: Vec<f64>,
    /// Running integral of `integrand` from the first grid point.
    pub integral: Vec<f64>,
}

impl NonlocalTerms {
    pub fn values(&self) -> Vec<f64> {
        self.boundary
            .iter()
            .zip(&self.integral)
            .map(|(b, i)| b - i)
            .collect()
    }
}

/// Time derivative of sampled vectors on a uniform grid.
///
/// Five-point central differences inside and five-point one-sided stencils at
/// the two ends on each side, all fourth order. Short grids fall back to
/// three-point (second order) stencils, and two samples get a plain slope.
fn grid_derivative<const N: usize>(w: &[[f64; N]], h: f64) -> Vec<[f64; N]> {
    let n = w.len();
    if n == 2 {
        let d = std::array::from_fn(|i| (w[1][i] - w[0][i]) / h);
        return vec![d, d];
    }
    if n < 5 {
        return (0..n)
            .map(|k| {
                std::array::from_fn(|i| match k {
                    0 => (-3.0 * w[0][i] + 4.0 * w[1][i] - w[2][i]) / (2.0 * h),
                    k if k == n - 1 => {
                        (3.0 * w[k][i] - 4.0 * w[k - 1][i] + w[k - 2][i]) / (2.0 * h)
                    }
                    k => (w[k + 1][i] - w[k - 1][i]) / (2.0 * h),
                })
            })
            .collect();
    }
    // one-sided weights (×12h) at samples 0 and 1, over samples 0..=4
    const START: [[f64; 5]; 2] = [
        [-25.0, 48.0, -36.0, 16.0, -3.0],
        [-3.0, -10.0, 18.0, -6.0, 1.0],
    ];
    let forward = |k0: usize, row: &[f64; 5], i: usize| -> f64 {
        row.iter()
            .enumerate()
            .map(|(j, c)| c * w[k0 + j][i])
            .sum::<f64>()
            / (12.0 * h)
    };
    let backward = |k0: usize, row: &[f64; 5], i: usize| -> f64 {
        -row.iter()
            .enumerate()
            .map(|(j, c)| c * w[k0 - j][i])
            .sum::<f64>()
            / (12.0 * h)
    };
    (0..n)
        .map(|k| {
            std::array::from_fn(|i| match k {
                0 => forward(0, &START[0], i),
                1 => forward(0, &START[1], i),
                k if k == n - 1 => backward(n - 1, &START[0], i),
                k if k == n - 2 => backward(n - 1, &START[1], i),
                k => {
                    (w[k - 2][i] - 8.0 * w[k - 1][i] + 8.0 * w[k + 1][i] - w[k + 2][i]) / (12.0 * h)
                }
            })
        })
        .collect()
}

fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Boundary term, integrand and running integral of the nonlocal constant
/// for `field` along `traj`. The integral always starts at the trajectory's
/// first grid point.
pub fn nonlocal_terms<const N: usize, S>(
    system: &S,
    traj: &Trajectory<N>,
    field: &VariationField<N>,
) -> Result<NonlocalTerms>
where
    S: LagrangianSystem<N> + ?Sized,
{
    let states = traj.states();
    for s in states {
        system.check_domain(&s.q)?;
    }
    let w: Vec<[f64; N]> = states.iter().map(|s| field.eval(s.t, s)).collect();
    let w_dot = grid_derivative(&w, traj.h());

    let mut boundary = Vec::with_capacity(states.len());
    let mut integrand = Vec::with_capacity(states.len());
    for ((s, wk), wdk) in states.iter().zip(&w).zip(&w_dot) {
        let p = system.dl_dv(s.t, &s.q, &s.v);
        let f = system.dl_dq(s.t, &s.q, &s.v);
        let b = dot(&p, wk);
        let g = dot(&f, wk) + dot(&p, wdk);
        if !(b.is_finite() && g.is_finite()) {
            return Err(Error::NonFinite { t: s.t });
        }
        boundary.push(b);
        integrand.push(g);
    }
    let integral = cumulative_integral(&integrand, traj.h())?;
    Ok(NonlocalTerms {
        boundary,
        integrand,
        integral,
    })
}

/// Evaluates the nonlocal constant of motion of `field` at every grid time
/// and reports its drift.
pub fn nonlocal_constant<const N: usize, S>(
    system: &S,
    traj: &Trajectory<N>,
    field: &VariationField<N>,
) -> Result<DriftReport>
where
    S: LagrangianSystem<N> + ?Sized,
{
    Ok(DriftReport::from_values(
        nonlocal_terms(system, traj, field)?.values(),
    ))
}

/// The `q₂`-translation constant in its on-shell form
/// `v₂/q₂² + 2E ∫ 1/q₂ ds`, with `E` taken at the first sample.
pub fn q2_nonlocal_closed_form(traj: &Trajectory<2>) -> Result<DriftReport> {
    let states = traj.states();
    let energy = poincare_energy(&states[0])?;
    let mut inv_q2 = Vec::with_capacity(states.len());
    let mut boundary = Vec::with_capacity(states.len());
    for s in states {
        poincare_energy(s)?;
        inv_q2.push(1.0 / s.q[1]);
        boundary.push(s.v[1] / (s.q[1] * s.q[1]));
    }
    let integral = cumulative_integral(&inv_q2, traj.h())?;
    Ok(DriftReport::from_values(
        boundary
            .iter()
            .zip(&integral)
            .map(|(b, i)| b + 2.0 * energy * i)
            .collect(),
    ))
}

/// Residual of `−u'' + 2E u = 0` for `u = 1/q₂` at interior grid points, with
/// `u''` by central second differences and `E` from the first sample.
pub fn check_linear_ode(traj: &Trajectory<2>) -> Result<Vec<f64>> {
    let states = traj.states();
    if states.len() < 3 {
        return Err(Error::Size {
            needed: 3,
            got: states.len(),
        });
    }
    let energy = poincare_energy(&states[0])?;
    let u = states
        .iter()
        .map(|s| poincare_energy(s).map(|_| 1.0 / s.q[1]))
        .collect::<Result<Vec<_>>>()?;
    let h2 = traj.h() * traj.h();
    Ok(u.windows(3)
        .map(|w| -(w[2] - 2.0 * w[1] + w[0]) / h2 + 2.0 * energy * w[1])
        .collect())
}
