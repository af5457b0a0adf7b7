//! Generic time-dependent Lagrangian systems in `N` degrees of freedom.
//!
//! A system supplies `L(t, q, v)`, its two partial gradients and the
//! Euler–Lagrange equations solved for the acceleration. Everything here is
//! plain value data; the operations are pure functions.

use crate::error::{Error, Result};

/// One point of the phase flow: time, position and velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State<const N: usize> {
    pub t: f64,
    pub q: [f64; N],
    pub v: [f64; N],
}

impl<const N: usize> State<N> {
    const NONEMPTY: () = assert!(N >= 1, "a state needs at least one degree of freedom");

    /// Builds a state, rejecting NaN and infinite components.
    pub fn new(t: f64, q: [f64; N], v: [f64; N]) -> Result<Self> {
        let () = Self::NONEMPTY;
        let s = Self { t, q, v };
        if !s.is_finite() {
            return Err(Error::InvalidState(format!(
                "non-finite component in t={t}, q={q:?}, v={v:?}"
            )));
        }
        Ok(s)
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite()
            && self.q.iter().all(|x| x.is_finite())
            && self.v.iter().all(|x| x.is_finite())
    }

    /// Same position and velocity at another time.
    pub fn at_time(self, t: f64) -> Self {
        Self { t, ..self }
    }
}

/// A solution sampled on the uniform grid `t0 + k·h`, `k = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    t0: f64,
    h: f64,
    states: Vec<State<N>>,
}

/// Grid time of sample `k`. Always computed from `t0`, never accumulated.
pub fn grid_time(t0: f64, h: f64, k: usize) -> f64 {
    t0 + k as f64 * h
}

impl<const N: usize> Trajectory<N> {
    /// Wraps already-sampled states, checking the grid invariant exactly.
    pub fn new(t0: f64, h: f64, states: Vec<State<N>>) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) || !t0.is_finite() {
            return Err(Error::InvalidTrajectory(format!(
                "grid needs finite t0 and h > 0, got t0={t0}, h={h}"
            )));
        }
        if states.len() < 2 {
            return Err(Error::Size {
                needed: 2,
                got: states.len(),
            });
        }
        for (k, s) in states.iter().enumerate() {
            if s.t != grid_time(t0, h, k) {
                return Err(Error::InvalidTrajectory(format!(
                    "sample {k} has t={} but the grid expects {}",
                    s.t,
                    grid_time(t0, h, k)
                )));
            }
            if !s.is_finite() {
                return Err(Error::NonFinite { t: s.t });
            }
        }
        Ok(Self { t0, h, states })
    }

    /// Samples `steps + 1` grid points of a known motion `t -> (q, v)`.
    pub fn sample<F>(t0: f64, h: f64, steps: usize, mut motion: F) -> Result<Self>
    where
        F: FnMut(f64) -> ([f64; N], [f64; N]),
    {
        let states = (0..=steps)
            .map(|k| {
                let t = grid_time(t0, h, k);
                let (q, v) = motion(t);
                State { t, q, v }
            })
            .collect();
        Self::new(t0, h, states)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn states(&self) -> &[State<N>] {
        &self.states
    }

    /// Number of samples (`steps + 1`).
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first(&self) -> &State<N> {
        &self.states[0]
    }

    pub fn last(&self) -> &State<N> {
        &self.states[self.states.len() - 1]
    }

    pub fn into_states(self) -> Vec<State<N>> {
        self.states
    }
}

/// A second-order Lagrangian system.
///
/// Implementors provide analytic partials. [`FiniteDifferenceSystem`] covers
/// the case where only `L` and the acceleration are known.
pub trait LagrangianSystem<const N: usize> {
    fn lagrangian(&self, t: f64, q: &[f64; N], v: &[f64; N]) -> f64;

    fn dl_dq(&self, t: f64, q: &[f64; N], v: &[f64; N]) -> [f64; N];

    fn dl_dv(&self, t: f64, q: &[f64; N], v: &[f64; N]) -> [f64; N];

    /// The Euler–Lagrange equations solved explicitly for `q̈`.
    fn acceleration(&self, t: f64, q: &[f64; N], v: &[f64; N]) -> [f64; N];

    /// Distance from `q` to the edge of the configuration domain, used by the
    /// integrator's singularity guard. Unbounded domains return infinity.
    fn boundary_distance(&self, _q: &[f64; N]) -> f64 {
        f64::INFINITY
    }

    fn domain_ok(&self, q: &[f64; N]) -> bool {
        self.boundary_distance(q) > 0.0
    }

    /// Short human-readable description of the admissible domain.
    fn domain_description(&self) -> &'static str {
        "admissible configurations"
    }

    /// Returns a domain error unless `q` is admissible.
    fn check_domain(&self, q: &[f64; N]) -> Result<()> {
        if self.domain_ok(q) {
            Ok(())
        } else {
            Err(Error::Domain {
                domain: self.domain_description(),
                position: q.to_vec(),
            })
        }
    }
}

fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `∂L/∂q̇ · q̇ − L` at `s`.
///
/// This is the conserved energy only for time-independent Lagrangians; the
/// formula is evaluated regardless.
pub fn energy<const N: usize, S>(system: &S, s: &State<N>) -> Result<f64>
where
    S: LagrangianSystem<N> + ?Sized,
{
    system.check_domain(&s.q)?;
    let p = system.dl_dv(s.t, &s.q, &s.v);
    Ok(dot(&p, &s.v) - system.lagrangian(s.t, &s.q, &s.v))
}

/// Discrete Euler–Lagrange residual `d/dt ∂L/∂q̇ − ∂L/∂q` at every interior
/// grid point, with the time derivative taken by central differences.
///
/// Endpoints are excluded, so the result has `len − 2` entries.
pub fn el_residual<const N: usize, S>(system: &S, traj: &Trajectory<N>) -> Result<Vec<[f64; N]>>
where
    S: LagrangianSystem<N> + ?Sized,
{
    let states = traj.states();
    if states.len() < 3 {
        return Err(Error::Size {
            needed: 3,
            got: states.len(),
        });
    }
    for s in states {
        system.check_domain(&s.q)?;
    }
    let momenta: Vec<[f64; N]> = states
        .iter()
        .map(|s| system.dl_dv(s.t, &s.q, &s.v))
        .collect();
    let two_h = 2.0 * traj.h();
    Ok((1..states.len() - 1)
        .map(|k| {
            let s = &states[k];
            let force = system.dl_dq(s.t, &s.q, &s.v);
            std::array::from_fn(|i| (momenta[k + 1][i] - momenta[k - 1][i]) / two_h - force[i])
        })
        .collect())
}

/// Largest absolute component over a sequence of residual vectors.
pub fn max_abs_component<const N: usize>(residuals: &[[f64; N]]) -> f64 {
    residuals
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn fd_step(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

/// Central finite-difference gradients `(∂L/∂q, ∂L/∂v)` of a scalar Lagrangian,
/// with step `1e-6 · max(1, |component|)`.
pub fn finite_difference_partials<const N: usize, F>(
    lagrangian: F,
    t: f64,
    q: &[f64; N],
    v: &[f64; N],
) -> ([f64; N], [f64; N])
where
    F: Fn(f64, &[f64; N], &[f64; N]) -> f64,
{
    let mut dq = [0.0; N];
    let mut dv = [0.0; N];
    for i in 0..N {
        let step = fd_step(q[i]);
        let (mut plus, mut minus) = (*q, *q);
        plus[i] += step;
        minus[i] -= step;
        dq[i] = (lagrangian(t, &plus, v) - lagrangian(t, &minus, v)) / (plus[i] - minus[i]);

        let step = fd_step(v[i]);
        let (mut plus, mut minus) = (*v, *v);
        plus[i] += step;
        minus[i] -= step;
        dv[i] = (lagrangian(t, q, &plus) - lagrangian(t, q, &minus)) / (plus[i] - minus[i]);
    }
    (dq, dv)
}

/// Self-test for analytic partials: the largest relative disagreement
/// between `dl_dq`/`dl_dv` and central finite differences of `lagrangian`.
///
/// Each component error is divided by `max(1, |analytic|)`.
pub fn partials_mismatch<const N: usize, S>(system: &S, s: &State<N>) -> f64
where
    S: LagrangianSystem<N> + ?Sized,
{
    let (fd_q, fd_v) =
        finite_difference_partials(|t, q, v| system.lagrangian(t, q, v), s.t, &s.q, &s.v);
    let an_q = system.dl_dq(s.t, &s.q, &s.v);
    let an_v = system.dl_dv(s.t, &s.q, &s.v);
    an_q.iter()
        .zip(&fd_q)
        .chain(an_v.iter().zip(&fd_v))
        .map(|(a, f)| (a - f).abs() / a.abs().max(1.0))
        .fold(0.0, f64::max)
}

type ScalarFn<const N: usize> = dyn Fn(f64, &[f64; N], &[f64; N]) -> f64 + Send + Sync;
type VectorFn<const N: usize> = dyn Fn(f64, &[f64; N], &[f64; N]) -> [f64; N] + Send + Sync;
type DomainFn<const N: usize> = dyn Fn(&[f64; N]) -> bool + Send + Sync;

/// A system given only by its Lagrangian and acceleration map; the partials
/// are central finite differences.
pub struct FiniteDifferenceSystem<const N: usize> {
    lagrangian: Box<ScalarFn<N>>,
    acceleration: Box<VectorFn<N>>,
    domain: Option<Box<DomainFn<N>>>,
}

impl<const N: usize> FiniteDifferenceSystem<N> {
    pub fn new<L, A>(lagrangian: L, acceleration: A) -> Self
    where
        L: Fn(f64, &[f64; N], &[f64; N]) -> f64 + Send + Sync + 'static,
        A: Fn(f64, &[f64; N], &[f64; N]) -> [f64; N] + Send + Sync + 'static,
    {
        Self {
            lagrangian: Box::new(lagrangian),
            acceleration: Box::new(acceleration),
            domain: None,
        }
    }

    /// Restricts the configuration domain to positions accepted by `pred`.
    pub fn with_domain<D>(mut self, pred: D) -> Self
    where
        D: Fn(&[f64; N]) -> bool + Send + Sync + 'static,
    {
        self.domain = Some(Box::new(pred));
        self
    }
}

impl<const N: usize> std::fmt::Debug for FiniteDifferenceSystem<N> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteDifferenceSystem")
            .field("n", &N)
            .field("restricted_domain", &self.domain.is_some())
            .finish()
    }
}

impl<const N: usize> LagrangianSystem<N> for FiniteDifferenceSystem<N> {
    fn lagrangian(&self, t: f64, q: &[f64; N], v: &[f64; N]) -> f64 {
        (self.lagrangian)(t, q, v)
    }

    fn dl_dq(&self, t: f64, q: &[f64; N], v: &[f64; N]) -> [f64; N] {
        finite_difference_partials(&*self.lagrangian, t, q, v).0
    }

    fn dl_dv(&self, t: f64, q: &[f64; N], v: &[f64; N]) -> [f64; N] {
        finite_difference_partials(&*self.lagrangian, t, q, v).1
    }

    fn acceleration(&self, t: f64, q: &[f64; N], v: &[f64; N]) -> [f64; N] {
        (self.acceleration)(t, q, v)
    }

    fn domain_ok(&self, q: &[f64; N]) -> bool {
        self.domain.as_ref().is_none_or(|pred| pred(q))
    }
}
