//! Fixed-step RK4 for the Euler–Lagrange equations and cumulative quadrature
//! on the same uniform grid.

use crate::error::{Error, Result};
use crate::lagrangian::{grid_time, LagrangianSystem, State, Trajectory};

/// Step size, end time and singularity margin for [`integrate_el`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    pub h: f64,
    pub t1: f64,
    /// Stage points closer than this to the domain boundary abort the run.
    pub min_q_margin: f64,
}

impl IntegrationConfig {
    pub const DEFAULT_MARGIN: f64 = 1e-9;

    pub fn new(h: f64, t1: f64) -> Self {
        Self {
            h,
            t1,
            min_q_margin: Self::DEFAULT_MARGIN,
        }
    }

    pub fn with_margin(self, min_q_margin: f64) -> Self {
        Self {
            min_q_margin,
            ..self
        }
    }

    /// Number of RK4 steps from `t0` to `t1`: `(t1 − t0)/h` rounded.
    pub fn steps(&self, t0: f64) -> Result<usize> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "h must be > 0, got {}",
                self.h
            )));
        }
        if !(self.t1.is_finite() && self.t1 > t0) {
            return Err(Error::InvalidConfig(format!(
                "t1 must exceed t0 = {t0}, got {}",
                self.t1
            )));
        }
        if self.min_q_margin.is_nan() || self.min_q_margin < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "min_q_margin must be >= 0, got {}",
                self.min_q_margin
            )));
        }
        let n = ((self.t1 - t0) / self.h).round();
        if n < 2.0 || n > u32::MAX as f64 {
            return Err(Error::InvalidConfig(format!(
                "(t1 - t0)/h = {} steps; need at least 2",
                n
            )));
        }
        Ok(n as usize)
    }
}

fn axpy<const N: usize>(y: &[f64; N], a: f64, x: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + a * x[i])
}

/// Integrates `(q̇, v̇) = (v, acceleration(t, q, v))` with classical RK4 and
/// fixed step `cfg.h`, starting from `s0` at `s0.t`.
///
/// Any stage point outside the domain, or within `cfg.min_q_margin` of its
/// boundary, aborts the run with [`Error::Singularity`]. No partial
/// trajectory is returned.
pub fn integrate_el<const N: usize, S>(
    system: &S,
    s0: &State<N>,
    cfg: &IntegrationConfig,
) -> Result<Trajectory<N>>
where
    S: LagrangianSystem<N> + ?Sized,
{
    if !s0.is_finite() {
        return Err(Error::NonFinite { t: s0.t });
    }
    system.check_domain(&s0.q)?;
    let steps = cfg.steps(s0.t)?;
    let (t0, h) = (s0.t, cfg.h);

    let guard = |t: f64, q: &[f64; N]| -> Result<()> {
        if q.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        if !system.domain_ok(q) || system.boundary_distance(q) <= cfg.min_q_margin {
            return Err(Error::Singularity {
                domain: system.domain_description(),
                t,
            });
        }
        Ok(())
    };
    let rhs = |t: f64, q: &[f64; N], v: &[f64; N]| -> Result<[f64; N]> {
        guard(t, q)?;
        let a = system.acceleration(t, q, v);
        if a.iter().chain(v.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        Ok(a)
    };

    let mut states = Vec::with_capacity(steps + 1);
    states.push(State { t: t0, ..*s0 });
    let (mut q, mut v) = (s0.q, s0.v);
    for k in 0..steps {
        let t = grid_time(t0, h, k);
        let tm = t + 0.5 * h;
        let t_next = grid_time(t0, h, k + 1);

        let k1v = rhs(t, &q, &v)?;
        let k1q = v;
        let (q2, v2) = (axpy(&q, 0.5 * h, &k1q), axpy(&v, 0.5 * h, &k1v));
        let k2v = rhs(tm, &q2, &v2)?;
        let k2q = v2;
        let (q3, v3) = (axpy(&q, 0.5 * h, &k2q), axpy(&v, 0.5 * h, &k2v));
        let k3v = rhs(tm, &q3, &v3)?;
        let k3q = v3;
        let (q4, v4) = (axpy(&q, h, &k3q), axpy(&v, h, &k3v));
        let k4v = rhs(t_next, &q4, &v4)?;
        let k4q = v4;

        q = std::array::from_fn(|i| {
            q[i] + h / 6.0 * (k1q[i] + 2.0 * k2q[i] + 2.0 * k3q[i] + k4q[i])
        });
        v = std::array::from_fn(|i| {
            v[i] + h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i])
        });
        guard(t_next, &q)?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { t: t_next });
        }
        states.push(State { t: t_next, q, v });
    }
    Trajectory::new(t0, h, states)
}

/// Running integral `I[k] ≈ ∫ f` over the first `k` panels of a uniform
/// grid, `I[0] = 0`.
///
/// Even indices carry composite Simpson sums (O(h⁴)); each odd index adds one
/// trapezoid panel to the preceding even value. With a single panel the
/// result is the plain trapezoid.
pub fn cumulative_integral(values: &[f64], h: f64) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::Size {
            needed: 2,
            got: values.len(),
        });
    }
    let mut out = Vec::with_capacity(values.len());
    out.push(0.0);
    let mut even = 0.0;
    for k in 1..values.len() {
        if k % 2 == 1 {
            out.push(even + 0.5 * h * (values[k - 1] + values[k]));
        } else {
            even += h / 3.0 * (values[k - 2] + 4.0 * values[k - 1] + values[k]);
            out.push(even);
        }
    }
    Ok(out)
}
