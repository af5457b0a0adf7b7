use clap::{Args, Parser, Subcommand};
use nonlocal_motion::State;

#[derive(Debug, Parser)]
#[command(
    name = "nlmotion",
    version,
    about = "Geodesics of the Poincaré half-plane and their nonlocal constants of motion"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the geodesic equations with RK4 and print the samples as CSV.
    Integrate(RunArgs),
    /// Check conservation of E, p and the nonlocal constants along an RK4 run.
    Verify(RunArgs),
    /// Print the closed-form parameters and the shape of a geodesic.
    Geodesic(RunArgs),
    /// Draw one or more geodesics as an SVG figure.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Window {
    /// Step size.
    #[arg(long, default_value_t = 1e-3, value_parser = parse_finite)]
    pub h: f64,
    /// Start time; the initial state is taken at this time.
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_hyphen_values = true)]
    pub t0: f64,
    /// End time.
    #[arg(long, default_value_t = 5.0, value_parser = parse_finite, allow_hyphen_values = true)]
    pub t1: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Initial position `q1,q2`.
    #[arg(long, default_value = "0,1", value_parser = parse_pair, allow_hyphen_values = true)]
    pub q: [f64; 2],
    /// Initial velocity `v1,v2`.
    #[arg(long, default_value = "1,0", value_parser = parse_pair, allow_hyphen_values = true)]
    pub v: [f64; 2],
    #[command(flatten)]
    pub window: Window,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// One geodesic as `q1,q2,v1,v2`. Repeat for several.
    #[arg(long = "spec", value_parser = parse_quad, allow_hyphen_values = true)]
    pub specs: Vec<[f64; 4]>,
    /// Output SVG path.
    #[arg(long)]
    pub out: std::path::PathBuf,
    #[command(flatten)]
    pub window: Window,
}

/// A validated request: initial state plus time window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSpec {
    pub q: [f64; 2],
    pub v: [f64; 2],
    pub h: f64,
    pub t0: f64,
    pub t1: f64,
}

impl RunSpec {
    /// Checks the window. The `q2 > 0` domain is left to the library, which
    /// reports it as a runtime error.
    pub fn new(q: [f64; 2], v: [f64; 2], window: &Window) -> Result<Self, String> {
        if window.h <= 0.0 {
            return Err(format!("--h must be > 0, got {}", window.h));
        }
        if window.t1 <= window.t0 {
            return Err(format!(
                "--t1 ({}) must be greater than --t0 ({})",
                window.t1, window.t0
            ));
        }
        Ok(Self {
            q,
            v,
            h: window.h,
            t0: window.t0,
            t1: window.t1,
        })
    }

    pub fn initial_state(&self) -> nonlocal_motion::Result<State<2>> {
        State::new(self.t0, self.q, self.v)
    }
}

fn parse_finite(s: &str) -> Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got `{s}`"));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = parse_finite(part)?;
    }
    Ok(out)
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    parse_list(s)
}

fn parse_quad(s: &str) -> Result<[f64; 4], String> {
    parse_list(s)
}
