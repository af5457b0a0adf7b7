//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p nonlocal-motion-cli --test acceptance`.

use std::fmt::Write as _;
use std::process::Command;

use nonlocal_motion::{
    check_linear_ode, circle_residual, classify, fit_params, integrate_el, nonlocal_constant,
    nonlocal_terms, poincare_energy, poincare_momentum, q1_translation_field,
    q2_nonlocal_closed_form, q2_translation_field, GeodesicShape, IntegrationConfig,
    PoincareHalfPlane, State, Trajectory, VariationField,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const H: f64 = 1e-3;
const T1: f64 = 5.0;
const SEED: u64 = 0x5eed_2021;

const TOL_NONLOCAL_DRIFT: f64 = 1e-5;
const TOL_MOMENTUM_BOUNDARY: f64 = 1e-12;
const TOL_SYMMETRY_INTEGRAND: f64 = 1e-10;
const TOL_CLOSED_FORM_AGREEMENT: f64 = 2e-6;
const TOL_LINEAR_ODE: f64 = 1e-4;
const ORDER_RATIO: (f64, f64) = (3.0, 5.0);
const TOL_CIRCLE: f64 = 1e-8;
const TOL_RADIUS: f64 = 1e-12;
const TOL_VERTICAL_Q1: f64 = 1e-12;
const TOL_VERTICAL_Q2: f64 = 1e-8;
const TOL_CONDITION: f64 = 1e-10;
const TOL_CONSERVATION: f64 = 1e-8;
const TOL_BENCHMARK_ENDPOINT: f64 = 1e-8;
const TOL_SVG: f64 = 1e-3;

/// Initial states drawn from q₁ ∈ [−10, 10], q₂ ∈ [0.1, 10], v ∈ [−5, 5]².
fn random_state(rng: &mut ChaCha8Rng) -> State<2> {
    State::new(
        0.0,
        [rng.gen_range(-10.0..10.0), rng.gen_range(0.1..10.0)],
        [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)],
    )
    .unwrap()
}

fn rate(s: &State<2>) -> f64 {
    (2.0 * poincare_energy(s).unwrap()).sqrt()
}

fn rk4(s0: &State<2>, h: f64) -> nonlocal_motion::Result<Trajectory<2>> {
    integrate_el(&PoincareHalfPlane, s0, &IntegrationConfig::new(h, T1))
}

fn random_field(rng: &mut ChaCha8Rng, trig: bool) -> VariationField<2> {
    if trig {
        let (a, w, ph): ([f64; 2], [f64; 2], [f64; 2]) = (
            [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
            [rng.gen_range(0.5..4.0), rng.gen_range(0.5..4.0)],
            [rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3)],
        );
        VariationField::new("trig", move |t, _| {
            [
                a[0] * (w[0] * t + ph[0]).sin(),
                a[1] * (w[1] * t + ph[1]).sin(),
            ]
        })
    } else {
        let c: [[f64; 4]; 2] =
            std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        VariationField::new("poly", move |t, _| {
            std::array::from_fn(|i| c[i][0] + t * (c[i][1] + t * (c[i][2] + t * c[i][3])))
        })
    }
}

/// Relative drift of `E` and `p` along a run, each measured against
/// `max(1, |value at t0|)`.
fn conservation_drift(traj: &Trajectory<2>) -> f64 {
    let s0 = traj.first();
    let (e0, p0) = (poincare_energy(s0).unwrap(), poincare_momentum(s0).unwrap());
    traj.states()
        .iter()
        .map(|s| {
            let de = (poincare_energy(s).unwrap() - e0).abs() / e0.max(1.0);
            let dp = (poincare_momentum(s).unwrap() - p0).abs() / p0.abs().max(1.0);
            de.max(dp)
        })
        .fold(0.0, f64::max)
}

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

/// Tally of per-case results inside one criterion.
#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn outcome(self, summary: String) -> Outcome {
        let mut detail = format!(
            "{}/{} cases pass; {summary}",
            self.cases - self.failures.len(),
            self.cases
        );
        for f in self.failures.iter().take(5) {
            let _ = write!(detail, "\n      - {f}");
        }
        if self.failures.len() > 5 {
            let _ = write!(detail, "\n      - ... {} more", self.failures.len() - 5);
        }
        Outcome::new(self.failures.is_empty(), detail)
    }
}

/// Every RK4 run made by criteria 1-5, for the conservation criterion.
#[derive(Default)]
struct RunLog {
    runs: Vec<(String, Result<f64, String>)>,
}

impl RunLog {
    fn record(&mut self, label: String, run: &nonlocal_motion::Result<Trajectory<2>>) {
        let entry = match run {
            Ok(traj) => Ok(conservation_drift(traj)),
            Err(e) => Err(e.to_string()),
        };
        self.runs.push((label, entry));
    }
}

fn criterion_1(log: &mut RunLog) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut tally = Tally::default();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let s0 = random_state(&mut rng);
        let fields: Vec<_> = (0..10)
            .map(|j| random_field(&mut rng, j % 2 == 1))
            .collect();
        let run = rk4(&s0, H);
        log.record(format!("c1 state {i}"), &run);
        let traj = match run {
            Ok(t) => t,
            Err(e) => {
                for _ in &fields {
                    tally.check(false, || {
                        format!(
                            "state {i} q={:?} v={:?} (√(2E)·T = {:.1}): {e}",
                            s0.q,
                            s0.v,
                            rate(&s0) * T1
                        )
                    });
                }
                continue;
            }
        };
        for f in &fields {
            let drift = nonlocal_constant(&PoincareHalfPlane, &traj, f)
                .map(|r| r.relative_drift)
                .unwrap_or(f64::INFINITY);
            worst = worst.max(if drift.is_finite() { drift } else { worst });
            tally.check(drift <= TOL_NONLOCAL_DRIFT, || {
                format!(
                    "state {i} q={:?} v={:?} (√(2E)·T = {:.1}) field {}: relative drift {drift:.2e}",
                    s0.q,
                    s0.v,
                    rate(&s0) * T1,
                    f.label()
                )
            });
        }
    }
    tally.outcome(format!(
        "tolerance {TOL_NONLOCAL_DRIFT:e}; largest drift {worst:.2e}"
    ))
}

fn criterion_2(log: &mut RunLog) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut states = vec![State::new(0.0, [0.0, 1.0], [1.0, 0.0]).unwrap()];
    states.extend((0..20).map(|_| random_state(&mut rng)));
    let mut tally = Tally::default();
    let field = q1_translation_field();
    for (i, s0) in states.iter().enumerate() {
        let run = rk4(s0, H);
        log.record(format!("c2 state {i}"), &run);
        let traj = match run {
            Ok(t) => t,
            Err(e) => {
                tally.check(false, || format!("state {i}: {e}"));
                continue;
            }
        };
        let terms = nonlocal_terms(&PoincareHalfPlane, &traj, &field).unwrap();
        let boundary_err = traj
            .states()
            .iter()
            .zip(&terms.boundary)
            .map(|(s, b)| (b - poincare_momentum(s).unwrap()).abs())
            .fold(0.0, f64::max);
        let integrand = terms.integrand.iter().fold(0.0_f64, |m, g| m.max(g.abs()));
        tally.check(
            boundary_err <= TOL_MOMENTUM_BOUNDARY && integrand <= TOL_SYMMETRY_INTEGRAND,
            || {
                format!(
                    "state {i}: |boundary − p| = {boundary_err:.2e}, |integrand| = {integrand:.2e}"
                )
            },
        );
    }
    tally.outcome(format!(
        "boundary term vs p within {TOL_MOMENTUM_BOUNDARY:e}, integrand within {TOL_SYMMETRY_INTEGRAND:e}"
    ))
}

fn criterion_3(log: &mut RunLog) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut tally = Tally::default();
    for i in 0..20 {
        let s0 = random_state(&mut rng);
        let run = rk4(&s0, H);
        log.record(format!("c3 geodesic {i}"), &run);
        let traj = match run {
            Ok(t) => t,
            Err(e) => {
                tally.check(false, || {
                    format!(
                        "geodesic {i} q={:?} v={:?} (√(2E)·T = {:.1}): {e}",
                        s0.q,
                        s0.v,
                        rate(&s0) * T1
                    )
                });
                continue;
            }
        };
        let generic =
            nonlocal_constant(&PoincareHalfPlane, &traj, &q2_translation_field()).unwrap();
        let closed = q2_nonlocal_closed_form(&traj).unwrap();
        let scale = generic.scale.max(closed.scale);
        let gap = generic
            .values
            .iter()
            .zip(&closed.values)
            .map(|(a, b)| (a - b).abs() / scale)
            .fold(0.0, f64::max);
        tally.check(gap <= TOL_CLOSED_FORM_AGREEMENT, || {
            format!(
                "geodesic {i} q={:?} v={:?} (√(2E)·T = {:.1}): relative gap {gap:.2e}",
                s0.q,
                s0.v,
                rate(&s0) * T1
            )
        });
    }
    tally.outcome(format!("pointwise tolerance {TOL_CLOSED_FORM_AGREEMENT:e}"))
}

fn criterion_4(log: &mut RunLog) -> Outcome {
    let geodesics = [
        ([0.0, 1.0], [1.0, 0.0]),
        ([0.0, 1.0], [0.0, 1.0]),
        ([0.0, 1.0], [0.0, -1.0]),
        ([2.0, 0.5], [0.3, -0.2]),
        ([-1.0, 3.0], [1.0, 1.0]),
        ([4.0, 2.0], [-1.5, 0.5]),
    ];
    let mut tally = Tally::default();
    let mut summary = String::new();
    for (i, (q, v)) in geodesics.into_iter().enumerate() {
        let s0 = State::new(0.0, q, v).unwrap();
        let max_residual = |h: f64, log: &mut RunLog| -> Result<f64, String> {
            let run = rk4(&s0, h);
            log.record(format!("c4 geodesic {i} h={h}"), &run);
            let traj = run.map_err(|e| e.to_string())?;
            Ok(check_linear_ode(&traj)
                .map_err(|e| e.to_string())?
                .iter()
                .fold(0.0, |m, r| m.max(r.abs())))
        };
        match (max_residual(H, log), max_residual(H / 2.0, log)) {
            (Ok(coarse), Ok(fine)) => {
                let ratio = coarse / fine;
                let _ = write!(summary, " {ratio:.2}");
                tally.check(
                    coarse <= TOL_LINEAR_ODE && (ORDER_RATIO.0..=ORDER_RATIO.1).contains(&ratio),
                    || format!("q={q:?} v={v:?}: max residual {coarse:.2e}, ratio {ratio:.2}"),
                );
            }
            (a, b) => tally.check(false, || format!("q={q:?} v={v:?}: {a:?} {b:?}")),
        }
    }
    tally.outcome(format!(
        "max residual ≤ {TOL_LINEAR_ODE:e}, halving ratios{summary} in [{}, {}]",
        ORDER_RATIO.0, ORDER_RATIO.1
    ))
}

fn criterion_5(log: &mut RunLog, fitted: &mut Vec<nonlocal_motion::GeodesicParams>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut tally = Tally::default();
    let mut worst_circle: f64 = 0.0;
    let mut generic = 0;
    while generic < 1000 {
        let s0 = random_state(&mut rng);
        if poincare_energy(&s0).unwrap() == 0.0 || poincare_momentum(&s0).unwrap() == 0.0 {
            continue;
        }
        generic += 1;
        let params = fit_params(&s0).unwrap();
        fitted.push(params);
        let shape = classify(&params).unwrap();
        let GeodesicShape::HalfCircle { radius, .. } = shape else {
            tally.check(false, || {
                format!("q={:?} v={:?}: classified as {shape:?}", s0.q, s0.v)
            });
            continue;
        };
        let expected = (2.0 * params.energy).sqrt() / params.momentum.abs();
        tally.check((radius - expected).abs() <= TOL_RADIUS * expected, || {
            format!("q={:?} v={:?}: radius {radius} vs {expected}", s0.q, s0.v)
        });
        let run = rk4(&s0, H);
        log.record(format!("c5 state {generic}"), &run);
        match run {
            Ok(traj) => {
                let res = circle_residual(&traj, &shape).unwrap();
                worst_circle = worst_circle.max(res);
                tally.check(res <= TOL_CIRCLE, || {
                    format!("q={:?} v={:?}: circle residual {res:.2e}", s0.q, s0.v)
                });
            }
            Err(e) => tally.check(false, || {
                format!(
                    "q={:?} v={:?} (√(2E)·T = {:.1}): {e}",
                    s0.q,
                    s0.v,
                    rate(&s0) * T1
                )
            }),
        }
    }

    // vertical geodesics: p = 0
    for i in 0..100 {
        let mut s0 = random_state(&mut rng);
        s0.v[0] = 0.0;
        if s0.v[1] == 0.0 {
            continue;
        }
        let params = fit_params(&s0).unwrap();
        fitted.push(params);
        let run = rk4(&s0, H);
        log.record(format!("c5 vertical {i}"), &run);
        let traj = match run {
            Ok(t) => t,
            Err(e) => {
                tally.check(false, || {
                    format!(
                        "vertical q={:?} v={:?} (√(2E)·T = {:.1}): {e}",
                        s0.q,
                        s0.v,
                        rate(&s0) * T1
                    )
                });
                continue;
            }
        };
        let a = (2.0 * params.energy).sqrt();
        let c = 1.0 / s0.q[1];
        let sign = s0.v[1].signum();
        let (mut dq1, mut dq2) = (0.0_f64, 0.0_f64);
        for s in traj.states() {
            dq1 = dq1.max((s.q[0] - s0.q[0]).abs());
            let exact = (sign * s.t * a).exp() / c;
            dq2 = dq2.max((s.q[1] - exact).abs() / exact);
        }
        tally.check(dq1 <= TOL_VERTICAL_Q1 && dq2 <= TOL_VERTICAL_Q2, || {
            format!(
                "vertical q={:?} v={:?} (√(2E)·T = {:.1}): q1 drift {dq1:.2e}, q2 relative error {dq2:.2e}",
                s0.q,
                s0.v,
                a * T1
            )
        });
    }
    tally.outcome(format!(
        "circle residual ≤ {TOL_CIRCLE:e} (largest {worst_circle:.2e}), radius within {TOL_RADIUS:e}, \
         vertical q1 within {TOL_VERTICAL_Q1:e} and q2 within {TOL_VERTICAL_Q2:e}"
    ))
}

fn criterion_6(fitted: &[nonlocal_motion::GeodesicParams]) -> Outcome {
    let mut tally = Tally::default();
    let mut worst: f64 = 0.0;
    let benchmark = fit_params(&State::new(0.0, [0.0, 1.0], [1.0, 0.0]).unwrap()).unwrap();
    for p in fitted.iter().chain(std::iter::once(&benchmark)) {
        let lhs = 8.0 * p.c1 * p.c2 * p.energy;
        let p2 = p.momentum * p.momentum;
        let err = (lhs - p2).abs() / p2.max(1.0);
        worst = worst.max(err);
        tally.check(err <= TOL_CONDITION, || {
            format!("{p:?}: |8c1c2E − p²| = {err:.2e}")
        });
    }
    tally.outcome(format!(
        "tolerance {TOL_CONDITION:e}·max(1,p²); largest {worst:.2e}"
    ))
}

fn criterion_7(log: &RunLog) -> Outcome {
    let mut tally = Tally::default();
    let mut worst: f64 = 0.0;
    for (label, entry) in &log.runs {
        match entry {
            Ok(d) => {
                worst = worst.max(*d);
                tally.check(*d <= TOL_CONSERVATION, || format!("{label}: drift {d:.2e}"));
            }
            Err(e) => tally.check(false, || format!("{label}: run aborted ({e})")),
        }
    }
    tally.outcome(format!(
        "tolerance {TOL_CONSERVATION:e} relative; largest drift over completed runs {worst:.2e}"
    ))
}

fn criterion_8() -> Outcome {
    let s0 = State::new(0.0, [0.0, 1.0], [1.0, 0.0]).unwrap();
    let p = fit_params(&s0).unwrap();
    let exact = (p.energy, p.momentum, p.c1, p.c2, p.c3) == (0.5, 1.0, 0.5, 0.5, 1.0);
    let shape = classify(&p).unwrap();
    let circle = shape
        == GeodesicShape::HalfCircle {
            center: 0.0,
            radius: 1.0,
        };
    let traj = rk4(&s0, H).unwrap();
    let end = traj.last();
    let err = (end.q[0] - 5f64.tanh())
        .abs()
        .max((end.q[1] - 1.0 / 5f64.cosh()).abs());
    Outcome::new(
        exact && circle && end.t == T1 && err <= TOL_BENCHMARK_ENDPOINT,
        format!(
            "E={} p={} c1={} c2={} c3={} shape={shape:?}; endpoint error {err:.2e} (tol {TOL_BENCHMARK_ENDPOINT:e})",
            p.energy, p.momentum, p.c1, p.c2, p.c3
        ),
    )
}

fn nlmotion(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_nlmotion"))
        .args(args)
        .output()
        .expect("failed to launch nlmotion")
}

fn criterion_9() -> Outcome {
    let mut notes = Vec::new();
    let verify = nlmotion(&["verify", "--q", "0,1", "--v", "1,0"]);
    let verify_ok = verify.status.code() == Some(0);
    notes.push(format!("verify exit {:?}", verify.status.code()));

    let domain = nlmotion(&["integrate", "--q", "0,-1", "--v", "1,0"]);
    let stderr = String::from_utf8_lossy(&domain.stderr);
    let domain_ok = domain.status.code() == Some(2) && stderr.contains("q2 > 0");
    notes.push(format!("domain violation exit {:?}", domain.status.code()));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("geodesic.svg");
    let plot = nlmotion(&[
        "plot",
        "--spec",
        "0,1,1,0",
        "--t0",
        "-5",
        "--t1",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    let svg_ok = plot.status.code() == Some(0)
        && match check_svg(&std::fs::read_to_string(&path).unwrap_or_default()) {
            Ok(dev) => {
                notes.push(format!("svg max deviation {dev:.2e} of plot scale"));
                dev <= TOL_SVG
            }
            Err(e) => {
                notes.push(format!("svg check failed: {e}"));
                false
            }
        };
    Outcome::new(verify_ok && domain_ok && svg_ok, notes.join(", "))
}

/// Largest distance of any plotted point from the unit half-circle about the
/// origin, relative to the larger side of the plotted region.
fn check_svg(text: &str) -> Result<f64, String> {
    let doc = roxmltree::Document::parse(text).map_err(|e| e.to_string())?;
    let meta = doc
        .descendants()
        .find(|n| n.has_tag_name("metadata"))
        .and_then(|n| n.text())
        .ok_or("no metadata")?;
    let field = |key: &str| -> Result<f64, String> {
        meta.split_whitespace()
            .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
            .ok_or(format!("no {key}"))?
            .parse()
            .map_err(|e| format!("{key}: {e}"))
    };
    let (x_lo, y_hi, scale) = (field("x_lo")?, field("y_hi")?, field("scale")?);
    let root = doc.root_element();
    let extent = |attr: &str| -> Result<f64, String> {
        root.attribute(attr)
            .ok_or(format!("no {attr}"))?
            .parse::<f64>()
            .map_err(|e| e.to_string())
    };
    let plot_scale = extent("width")?.max(extent("height")?) / scale;

    let polylines: Vec<_> = doc
        .descendants()
        .filter(|n| n.has_tag_name("polyline"))
        .collect();
    if polylines.len() != 1 {
        return Err(format!("expected one polyline, found {}", polylines.len()));
    }
    let points = polylines[0].attribute("points").ok_or("no points")?;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for pair in points.split_whitespace() {
        let (px, py) = pair.split_once(',').ok_or("bad point")?;
        let px: f64 = px.parse().map_err(|_| "bad x")?;
        let py: f64 = py.parse().map_err(|_| "bad y")?;
        let (x, y) = (px / scale + x_lo, y_hi - py / scale);
        worst = worst.max(((x * x + y * y).sqrt() - 1.0).abs());
        count += 1;
    }
    if count < 200 {
        return Err(format!("only {count} samples"));
    }
    Ok(worst / plot_scale)
}

fn main() {
    let mut log = RunLog::default();
    let mut fitted = Vec::new();
    let results: Vec<(&str, Outcome)> = vec![
        (
            "1 nonlocal constant is constant for arbitrary families",
            criterion_1(&mut log),
        ),
        (
            "2 q1-translation reproduces the momentum p",
            criterion_2(&mut log),
        ),
        (
            "3 on-shell q2 form agrees with the generic constant",
            criterion_3(&mut log),
        ),
        (
            "4 linear ODE in 1/q2 holds with O(h^2) residual",
            criterion_4(&mut log),
        ),
        (
            "5 geodesics are half-circles or vertical half-lines",
            criterion_5(&mut log, &mut fitted),
        ),
        (
            "6 8 c1 c2 E = p^2 for fitted parameters",
            criterion_6(&fitted),
        ),
        ("7 E and p conserved along every RK4 run", criterion_7(&log)),
        ("8 benchmark geodesic from q=(0,1), v=(1,0)", criterion_8()),
        ("9 CLI contract", criterion_9()),
    ];

    let mut failed = 0;
    for (name, outcome) in &results {
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {name}\n      {}", outcome.detail);
        if !outcome.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
