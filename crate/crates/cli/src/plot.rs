//! Minimal hand-rolled SVG line charts: three stacked panels showing the
//! state trajectories, the held input profile, and the inter-sample
//! intervals of a run. No plotting dependency; the output is deterministic
//! for a given result.

use samplab::SimResult;
use std::fmt::Write;

const WIDTH: f64 = 860.0;
const PANEL_H: f64 = 200.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 16.0;
const GAP: f64 = 46.0;
const TOP: f64 = 28.0;
const MAX_POINTS: usize = 2000;

const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2",
];

struct Panel {
    y_top: f64,
    t_min: f64,
    t_max: f64,
    v_min: f64,
    v_max: f64,
}

impl Panel {
    fn new(y_top: f64, t_min: f64, t_max: f64, values: impl Iterator<Item = f64>) -> Self {
        let mut v_min = f64::INFINITY;
        let mut v_max = f64::NEG_INFINITY;
        for v in values {
            v_min = v_min.min(v);
            v_max = v_max.max(v);
        }
        if !v_min.is_finite() {
            v_min = 0.0;
            v_max = 1.0;
        }
        if v_max - v_min < 1e-300 {
            let pad = v_min.abs().max(1.0) * 0.1;
            v_min -= pad;
            v_max += pad;
        }
        let t_max = if t_max > t_min { t_max } else { t_min + 1.0 };
        Self {
            y_top,
            t_min,
            t_max,
            v_min,
            v_max,
        }
    }

    fn x(&self, t: f64) -> f64 {
        MARGIN_L + (t - self.t_min) / (self.t_max - self.t_min) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn y(&self, v: f64) -> f64 {
        self.y_top + PANEL_H - (v - self.v_min) / (self.v_max - self.v_min) * PANEL_H
    }

    fn frame(&self, out: &mut String, title: &str) {
        let (x0, x1) = (MARGIN_L, WIDTH - MARGIN_R);
        let (y0, y1) = (self.y_top, self.y_top + PANEL_H);
        let _ = writeln!(
            out,
            "<rect x=\"{x0:.1}\" y=\"{y0:.1}\" width=\"{w:.1}\" height=\"{h:.1}\" \
             fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>",
            w = x1 - x0,
            h = PANEL_H,
        );
        let _ = writeln!(
            out,
            "<text x=\"{x0:.1}\" y=\"{ty:.1}\" font-family=\"monospace\" font-size=\"13\">{title}</text>",
            ty = y0 - 7.0,
        );
        // min/max labels on both axes
        let _ = writeln!(
            out,
            "<text x=\"{lx:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"10\" \
             text-anchor=\"end\">{:.3e}</text>",
            y0 + 10.0,
            self.v_max,
            lx = x0 - 4.0,
        );
        let _ = writeln!(
            out,
            "<text x=\"{lx:.1}\" y=\"{y1:.1}\" font-family=\"monospace\" font-size=\"10\" \
             text-anchor=\"end\">{:.3e}</text>",
            self.v_min,
            lx = x0 - 4.0,
        );
        let _ = writeln!(
            out,
            "<text x=\"{x0:.1}\" y=\"{ly:.1}\" font-family=\"monospace\" font-size=\"10\">{:.2}</text>",
            self.t_min,
            ly = y1 + 13.0,
        );
        let _ = writeln!(
            out,
            "<text x=\"{x1:.1}\" y=\"{ly:.1}\" font-family=\"monospace\" font-size=\"10\" \
             text-anchor=\"end\">{:.2}</text>",
            self.t_max,
            ly = y1 + 13.0,
        );
        // zero gridline when zero is inside the range
        if self.v_min < 0.0 && self.v_max > 0.0 {
            let yz = self.y(0.0);
            let _ = writeln!(
                out,
                "<line x1=\"{x0:.1}\" y1=\"{yz:.1}\" x2=\"{x1:.1}\" y2=\"{yz:.1}\" \
                 stroke=\"#bbb\" stroke-width=\"0.5\"/>"
            );
        }
    }

    fn polyline(&self, out: &mut String, pts: &[(f64, f64)], color: &str) {
        if pts.is_empty() {
            return;
        }
        let mut d = String::with_capacity(pts.len() * 14);
        for (i, (t, v)) in pts.iter().enumerate() {
            let _ = write!(
                d,
                "{}{:.2},{:.2}",
                if i == 0 { "" } else { " " },
                self.x(*t),
                self.y(*v)
            );
        }
        let _ = writeln!(
            out,
            "<polyline points=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"/>"
        );
    }
}

fn stride(len: usize) -> usize {
    len.div_ceil(MAX_POINTS).max(1)
}

/// Series extraction with even downsampling; the final row is always kept so
/// the plotted trajectory ends where the run ended.
fn sample<F: Fn(usize) -> (f64, f64)>(len: usize, get: F) -> Vec<(f64, f64)> {
    if len == 0 {
        return Vec::new();
    }
    let s = stride(len);
    let mut pts: Vec<(f64, f64)> = (0..len).step_by(s).map(&get).collect();
    if !(len - 1).is_multiple_of(s) {
        pts.push(get(len - 1));
    }
    pts
}

/// Renders the three-panel chart for a simulation result.
pub fn render(result: &SimResult) -> String {
    let rows = &result.trace.rows;
    let n_w = result.trace.n_w;
    let n_u = result.trace.n_u;
    let t_min = rows.first().map_or(0.0, |r| r.t);
    let t_max = rows.last().map_or(1.0, |r| r.t);
    let height = TOP + 3.0 * PANEL_H + 2.0 * GAP + 26.0;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {WIDTH:.0} {height:.0}\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");

    let states = Panel::new(
        TOP,
        t_min,
        t_max,
        rows.iter().flat_map(|r| r.w.iter().copied()),
    );
    states.frame(&mut out, "state trajectories");
    for j in 0..n_w {
        let pts = sample(rows.len(), |i| (rows[i].t, rows[i].w[j]));
        states.polyline(&mut out, &pts, PALETTE[j % PALETTE.len()]);
    }

    let inputs = Panel::new(
        TOP + PANEL_H + GAP,
        t_min,
        t_max,
        rows.iter().flat_map(|r| r.u.iter().copied()),
    );
    inputs.frame(&mut out, "input profile (held)");
    for j in 0..n_u {
        let pts = sample(rows.len(), |i| (rows[i].t, rows[i].u[j]));
        inputs.polyline(&mut out, &pts, PALETTE[j % PALETTE.len()]);
    }

    let ev = &result.events;
    let intervals = Panel::new(
        TOP + 2.0 * (PANEL_H + GAP),
        t_min,
        t_max,
        ev.iter().map(|e| e.interval),
    );
    intervals.frame(&mut out, "inter-sample intervals");
    let pts = sample(ev.len(), |i| (ev[i].t_k, ev[i].interval));
    intervals.polyline(&mut out, &pts, PALETTE[0]);
    for (t, v) in &pts {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.6\" fill=\"{}\"/>",
            intervals.x(*t),
            intervals.y(*v),
            PALETTE[0],
        );
    }

    out.push_str("</svg>\n");
    out
}
