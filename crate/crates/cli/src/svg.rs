//! Deterministic SVG rendering of geodesics sampled from their closed form.

use std::fmt::Write;

use nonlocal_motion::{eval_state, fit_params, State};

pub const SAMPLES: usize = 400;
const CANVAS: f64 = 800.0;
const MARGIN: f64 = 0.1;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#7f7f7f",
];

/// Data-to-pixel map: `X = (x − x_lo)·scale`, `Y = (y_hi − y)·scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub x_lo: f64,
    pub y_hi: f64,
    pub scale: f64,
    pub width: f64,
    pub height: f64,
}

impl Viewport {
    /// Fits all points plus the x-axis, padded by 10% on every side, with the
    /// same scale on both axes so circles stay round.
    pub fn fit(curves: &[Vec<[f64; 2]>]) -> Self {
        let pts = curves.iter().flatten();
        let (mut x_min, mut x_max, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY, 0.0_f64);
        for p in pts {
            x_min = x_min.min(p[0]);
            x_max = x_max.max(p[0]);
            y_max = y_max.max(p[1]);
        }
        let mut dx = x_max - x_min;
        let mut dy = y_max;
        if dx.is_nan() || dx <= 0.0 {
            dx = dy.max(1.0);
            x_min -= 0.5 * dx;
        }
        if dy <= 0.0 {
            dy = dx;
        }
        let (span_x, span_y) = ((1.0 + 2.0 * MARGIN) * dx, (1.0 + 2.0 * MARGIN) * dy);
        let scale = CANVAS / span_x.max(span_y);
        Self {
            x_lo: x_min - MARGIN * dx,
            y_hi: y_max + MARGIN * dy,
            scale,
            width: span_x * scale,
            height: span_y * scale,
        }
    }

    pub fn to_pixel(self, p: [f64; 2]) -> [f64; 2] {
        [
            (p[0] - self.x_lo) * self.scale,
            (self.y_hi - p[1]) * self.scale,
        ]
    }

    #[cfg(test)]
    pub fn to_data(self, px: [f64; 2]) -> [f64; 2] {
        [
            px[0] / self.scale + self.x_lo,
            self.y_hi - px[1] / self.scale,
        ]
    }
}

/// Positions on the geodesic through `s0` at `SAMPLES` evenly spaced times in
/// `[t0, t1]`; `s0` is the state at `t0`.
pub fn sample_geodesic(s0: &State<2>, t0: f64, t1: f64) -> nonlocal_motion::Result<Vec<[f64; 2]>> {
    let params = fit_params(&s0.at_time(0.0))?;
    params.validate()?;
    (0..SAMPLES)
        .map(|k| {
            let tau = (t1 - t0) * k as f64 / (SAMPLES - 1) as f64;
            eval_state(&params, tau).map(|s| s.q)
        })
        .collect()
}

fn stroke(i: usize) -> String {
    if let Some(c) = PALETTE.get(i) {
        return (*c).to_string();
    }
    // golden-angle hues beyond the palette
    let hue = (i as f64 * 137.507_764_050_037_85) % 360.0;
    let (s, v) = (0.75, 0.8);
    let c = v * s;
    let x = c * (1.0 - ((hue / 60.0) % 2.0 - 1.0).abs());
    let (r, g, b) = match (hue / 60.0) as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let byte = |u: f64| ((u + m) * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", byte(r), byte(g), byte(b))
}

/// Renders the curves as a standalone SVG 1.1 document.
pub fn render(curves: &[Vec<[f64; 2]>]) -> String {
    let vp = Viewport::fit(curves);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = vp.width,
        h = vp.height
    );
    let _ = writeln!(svg, "<title>Geodesics in the Poincare half-plane</title>");
    let _ = writeln!(
        svg,
        "<metadata>x_lo={:.16e} y_hi={:.16e} scale={:.16e}</metadata>",
        vp.x_lo, vp.y_hi, vp.scale
    );
    let _ = writeln!(
        svg,
        r##"<rect x="0" y="0" width="{:.3}" height="{:.3}" fill="#ffffff"/>"##,
        vp.width, vp.height
    );
    let axis_y = vp.to_pixel([0.0, 0.0])[1];
    let _ = writeln!(
        svg,
        r##"<line x1="0.000" y1="{axis_y:.3}" x2="{:.3}" y2="{axis_y:.3}" stroke="#000000" stroke-width="1.5"/>"##,
        vp.width
    );
    for (i, curve) in curves.iter().enumerate() {
        let points: Vec<String> = curve
            .iter()
            .map(|p| {
                let [x, y] = vp.to_pixel(*p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
            stroke(i),
            points.join(" ")
        );
    }
    svg.push_str("</svg>\n");
    svg
}
