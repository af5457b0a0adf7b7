//! Closed-form geodesics of the half-plane.
//!
//! With `a = √(2E)` every nonconstant geodesic is
//!
//! ```text
//! q₂(t) = 1 / (c₁ e^{a t} + c₂ e^{−a t})
//! q₁(t) = c₃ − p / (2 c₁ a (c₂ + c₁ e^{2 a t}))        (p ≠ 0)
//! ```
//!
//! subject to `8 c₁ c₂ E = p²`. For `p ≠ 0` the orbit is the half-circle
//! centred at `c₃ − p / (2 c₁ c₂ √(8E))` with radius `√(2E)/|p|`; for `p = 0`
//! it is a vertical half-line.

use crate::error::{Error, Result};
use crate::lagrangian::{State, Trajectory};
use crate::poincare::{poincare_energy, poincare_momentum};

/// Parameters of a geodesic.
///
/// `c3` is the horizontal integration constant when `p ≠ 0`, and the
/// constant abscissa `q₁` when `p = 0`. `origin` is the position the
/// parameters were fitted from; it locates the point geodesic when `E = 0`,
/// which is stored with `c1 = c2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicParams {
    pub energy: f64,
    pub momentum: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub origin: [f64; 2],
}

/// What a geodesic traces out in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeodesicShape {
    Point { x: f64, y: f64 },
    VerticalLine { x: f64 },
    HalfCircle { center: f64, radius: f64 },
}

impl GeodesicParams {
    /// `√(2E)`, the exponential rate.
    pub fn rate(&self) -> f64 {
        (2.0 * self.energy).sqrt()
    }

    pub fn is_rest(&self) -> bool {
        self.energy == 0.0
    }

    /// Relative violation of `8 c₁ c₂ E = p²`.
    pub fn condition_residual(&self) -> f64 {
        let p2 = self.momentum * self.momentum;
        (8.0 * self.c1 * self.c2 * self.energy - p2).abs() / p2.max(1.0)
    }

    /// Checks every parameter invariant.
    pub fn validate(&self) -> Result<()> {
        let all = [self.energy, self.momentum, self.c1, self.c2, self.c3];
        if all.iter().chain(&self.origin).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "non-finite parameter in {self:?}"
            )));
        }
        if self.energy < 0.0 {
            return Err(Error::InvalidParams(format!("E = {} < 0", self.energy)));
        }
        if self.is_rest() {
            if self.momentum != 0.0 || self.c1 != 0.0 || self.c2 != 0.0 {
                return Err(Error::InvalidParams(
                    "E = 0 requires p = c1 = c2 = 0".into(),
                ));
            }
            return Ok(());
        }
        if self.c1 < 0.0
            || self.c2 < 0.0
            || (self.c1 + self.c2).is_nan()
            || self.c1 + self.c2 <= 0.0
        {
            return Err(Error::InvalidParams(format!(
                "need c1, c2 >= 0 and c1 + c2 > 0, got c1 = {}, c2 = {}",
                self.c1, self.c2
            )));
        }
        if self.condition_residual() > 1e-10 {
            return Err(Error::InvalidParams(format!(
                "8 c1 c2 E = {} differs from p^2 = {}",
                8.0 * self.c1 * self.c2 * self.energy,
                self.momentum * self.momentum
            )));
        }
        if self.momentum == 0.0 && self.c1 * self.c2 != 0.0 {
            return Err(Error::InvalidParams(
                "p = 0 requires c1 = 0 or c2 = 0".into(),
            ));
        }
        if self.momentum != 0.0 && (self.c1 == 0.0 || self.c2 == 0.0) {
            return Err(Error::InvalidParams(
                "p != 0 requires c1 > 0 and c2 > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Recovers the geodesic through `s0`, taking `s0` as the state at `t = 0`.
///
/// `c₁ + c₂ = 1/q₂` and `c₁ − c₂ = −q̇₂ / (q₂² √(2E))` follow from `q₂` and
/// `q̇₂` at zero. The smaller coefficient is taken from `c₁c₂ = p²/(8E)`,
/// which avoids cancellation when `|p|` is small.
pub fn fit_params(s0: &State<2>) -> Result<GeodesicParams> {
    let energy = poincare_energy(s0)?;
    let momentum = poincare_momentum(s0)?;
    let [q1, q2] = s0.q;
    let rest = GeodesicParams {
        energy,
        momentum,
        c1: 0.0,
        c2: 0.0,
        c3: q1,
        origin: s0.q,
    };
    if energy == 0.0 {
        return Ok(rest);
    }
    let rate = (2.0 * energy).sqrt();
    let sum = 1.0 / q2;

    if momentum == 0.0 {
        // q₂ = e^{±at}/c: rising q₂ keeps only the decaying exponential
        let (c1, c2) = if s0.v[1] > 0.0 {
            (0.0, sum)
        } else {
            (sum, 0.0)
        };
        return Ok(GeodesicParams { c1, c2, ..rest });
    }

    let diff = -s0.v[1] / (q2 * q2 * rate);
    let product = momentum * momentum / (8.0 * energy);
    let (c1, c2) = if diff >= 0.0 {
        let c1 = 0.5 * (sum + diff);
        (c1, product / c1)
    } else {
        let c2 = 0.5 * (sum - diff);
        (product / c2, c2)
    };
    let c3 = q1 + momentum / (2.0 * c1 * rate * (c2 + c1));
    Ok(GeodesicParams { c1, c2, c3, ..rest })
}

fn require_motion(params: &GeodesicParams) -> Result<()> {
    if params.energy > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(
            "the closed form needs E > 0; E = 0 is a point".into(),
        ))
    }
}

/// `q₂` and the log-derivative ratio `(c₁e^{at} − c₂e^{−at}) / (c₁e^{at} + c₂e^{−at})`,
/// evaluated without forming the growing exponential.
fn q2_and_ratio(params: &GeodesicParams, t: f64) -> (f64, f64) {
    let (c1, c2) = (params.c1, params.c2);
    let x = params.rate() * t;
    if c1 == 0.0 {
        (x.exp() / c2, -1.0)
    } else if c2 == 0.0 {
        ((-x).exp() / c1, 1.0)
    } else if x >= 0.0 {
        let r = c2 * (-2.0 * x).exp();
        ((-x).exp() / (c1 + r), (c1 - r) / (c1 + r))
    } else {
        let r = c1 * (2.0 * x).exp();
        (x.exp() / (r + c2), (r - c2) / (r + c2))
    }
}

/// `q₂(t) = (c₁ e^{at} + c₂ e^{−at})^{−1}`.
pub fn eval_q2(params: &GeodesicParams, t: f64) -> Result<f64> {
    require_motion(params)?;
    Ok(q2_and_ratio(params, t).0)
}

/// `q₁(t) = c₃ − p / (2 c₁ a (c₂ + c₁ e^{2at}))`, defined only for `p ≠ 0`.
pub fn eval_q1(params: &GeodesicParams, t: f64) -> Result<f64> {
    require_motion(params)?;
    if params.momentum == 0.0 {
        return Err(Error::InvalidParams(
            "q1 is constant when p = 0; use c3".into(),
        ));
    }
    let a = params.rate();
    let (c1, c2) = (params.c1, params.c2);
    Ok(params.c3 - params.momentum / (2.0 * c1 * a * (c2 + c1 * (2.0 * a * t).exp())))
}

/// Position and velocity on the geodesic at time `t`, for any `E`.
///
/// Velocity comes from `q̇₁ = p q₂²` and the derivative of the `q₂` formula.
pub fn eval_state(params: &GeodesicParams, t: f64) -> Result<State<2>> {
    if params.is_rest() {
        return State::new(t, params.origin, [0.0, 0.0]);
    }
    require_motion(params)?;
    let (q2, ratio) = q2_and_ratio(params, t);
    let q1 = if params.momentum == 0.0 {
        params.c3
    } else {
        eval_q1(params, t)?
    };
    let v1 = params.momentum * q2 * q2;
    let v2 = -params.rate() * q2 * ratio;
    State::new(t, [q1, q2], [v1, v2])
}

/// Samples the closed form on the grid `t0 + k·h`, `k = 0..=steps`.
pub fn sample_closed_form(
    params: &GeodesicParams,
    t0: f64,
    h: f64,
    steps: usize,
) -> Result<Trajectory<2>> {
    params.validate()?;
    let mut failure = None;
    let traj = Trajectory::sample(t0, h, steps, |t| match eval_state(params, t) {
        Ok(s) => (s.q, s.v),
        Err(e) => {
            failure.get_or_insert(e);
            ([f64::NAN; 2], [f64::NAN; 2])
        }
    });
    match failure {
        Some(e) => Err(e),
        None => traj,
    }
}

/// Classifies the orbit as a point, vertical half-line or half-circle.
pub fn classify(params: &GeodesicParams) -> Result<GeodesicShape> {
    params.validate()?;
    if params.is_rest() {
        let [x, y] = params.origin;
        return Ok(GeodesicShape::Point { x, y });
    }
    if params.momentum == 0.0 {
        return Ok(GeodesicShape::VerticalLine { x: params.c3 });
    }
    let p = params.momentum;
    let center = params.c3 - p / (2.0 * params.c1 * params.c2 * (8.0 * params.energy).sqrt());
    let radius = params.rate() / p.abs();
    Ok(GeodesicShape::HalfCircle { center, radius })
}

/// Largest deviation of the sampled positions from `shape`: relative
/// `|(q₁ − c)² + q₂² − r²| / r²` for a half-circle, `|q₁ − x|` for a line.
pub fn circle_residual(traj: &Trajectory<2>, shape: &GeodesicShape) -> Result<f64> {
    let states = traj.states();
    match *shape {
        GeodesicShape::HalfCircle { center, radius } => {
            let r2 = radius * radius;
            Ok(states
                .iter()
                .map(|s| {
                    let dx = s.q[0] - center;
                    (dx * dx + s.q[1] * s.q[1] - r2).abs() / r2
                })
                .fold(0.0, f64::max))
        }
        GeodesicShape::VerticalLine { x } => Ok(states
            .iter()
            .map(|s| (s.q[0] - x).abs())
            .fold(0.0, f64::max)),
        GeodesicShape::Point { .. } => Err(Error::InvalidShape(
            "a point geodesic has no orbit to compare against".into(),
        )),
    }
}
