use std::io::Write;

use anyhow::{Context, Result};
use nonlocal_motion::{
    check_linear_ode, classify, fit_params, integrate_el, nonlocal_constant, poincare_energy,
    poincare_momentum, q1_translation_field, q2_nonlocal_closed_form, q2_translation_field,
    DriftReport, GeodesicShape, IntegrationConfig, PoincareHalfPlane, Trajectory, VariationField,
};

use crate::args::RunSpec;

pub const DRIFT_TOLERANCE: f64 = 1e-5;
pub const ODE_TOLERANCE: f64 = 1e-3;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn run(spec: &RunSpec) -> Result<Trajectory<2>> {
    let s0 = spec.initial_state()?;
    Ok(integrate_el(
        &PoincareHalfPlane,
        &s0,
        &IntegrationConfig::new(spec.h, spec.t1),
    )?)
}

pub fn integrate(spec: &RunSpec, out: &mut impl Write) -> Result<()> {
    let traj = run(spec)?;
    writeln!(out, "t,q1,q2,v1,v2,E,p")?;
    for s in traj.states() {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            sci(s.t),
            sci(s.q[0]),
            sci(s.q[1]),
            sci(s.v[0]),
            sci(s.v[1]),
            sci(poincare_energy(s)?),
            sci(poincare_momentum(s)?)
        )?;
    }
    Ok(())
}

/// Field used by `verify` as an example with no symmetry behind it.
fn trig_field() -> VariationField<2> {
    VariationField::new("trig (sin t, cos t)", |t, _| [t.sin(), t.cos()])
}

struct Check {
    name: String,
    metric: &'static str,
    value: f64,
    tolerance: f64,
}

impl Check {
    fn drift(name: impl Into<String>, report: &DriftReport) -> Self {
        Self {
            name: name.into(),
            metric: "relative_drift",
            value: report.relative_drift,
            tolerance: DRIFT_TOLERANCE,
        }
    }

    fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

/// Runs every drift check and returns whether all passed.
pub fn verify(spec: &RunSpec, out: &mut impl Write) -> Result<bool> {
    let traj = run(spec)?;
    let s0 = traj.first();
    let energy = poincare_energy(s0)?;
    let momentum = poincare_momentum(s0)?;
    writeln!(out, "E={energy} p={momentum} steps={}", traj.len() - 1)?;

    let series = |f: fn(&nonlocal_motion::State<2>) -> nonlocal_motion::Result<f64>| {
        traj.states()
            .iter()
            .map(f)
            .collect::<nonlocal_motion::Result<Vec<f64>>>()
            .map(DriftReport::from_values)
    };
    let system = PoincareHalfPlane;
    let mut checks = vec![
        Check::drift("energy E", &series(poincare_energy)?),
        Check::drift("momentum p", &series(poincare_momentum)?),
    ];
    for field in [q1_translation_field(), q2_translation_field(), trig_field()] {
        let report = nonlocal_constant(&system, &traj, &field)?;
        checks.push(Check::drift(format!("nonlocal {}", field.label()), &report));
    }
    checks.push(Check::drift(
        "q2 closed form",
        &q2_nonlocal_closed_form(&traj)?,
    ));
    let ode = check_linear_ode(&traj)?;
    checks.push(Check {
        name: "linear ODE in 1/q2".into(),
        metric: "max_residual",
        value: ode.iter().fold(0.0, |m, r| m.max(r.abs())),
        tolerance: ODE_TOLERANCE,
    });

    for c in &checks {
        writeln!(
            out,
            "{:<30} {}={:.3e} tol={:e} {}",
            c.name,
            c.metric,
            c.value,
            c.tolerance,
            if c.passed() { "ok" } else { "FAIL" }
        )?;
    }
    let all = checks.iter().all(Check::passed);
    writeln!(out, "result: {}", if all { "pass" } else { "fail" })?;
    Ok(all)
}

pub fn geodesic(spec: &RunSpec, out: &mut impl Write) -> Result<()> {
    // closed-form time is measured from the initial state
    let s0 = spec.initial_state()?.at_time(0.0);
    let params = fit_params(&s0)?;
    writeln!(
        out,
        "E={} p={} c1={} c2={} c3={}",
        params.energy, params.momentum, params.c1, params.c2, params.c3
    )?;
    let line = match classify(&params).context("classifying geodesic")? {
        GeodesicShape::Point { x, y } => format!("point ({x},{y})"),
        GeodesicShape::VerticalLine { x } => format!("vertical-line x={x}"),
        GeodesicShape::HalfCircle { center, radius } => {
            format!("half-circle center={center} radius={radius}")
        }
    };
    writeln!(out, "{line}")?;
    Ok(())
}
