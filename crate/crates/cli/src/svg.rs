//! Direct SVG 1.1 rendering of a phase portrait.

use std::f64::consts::PI;
use std::fmt::Write;

use nontwist::flow::Window;
use nontwist::hamiltonian::{Equilibrium, Stability};
use nontwist::{Trace, TraceSource};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;

struct Viewport {
    w: Window,
}

impl Viewport {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.w.x_min) / (self.w.x_max - self.w.x_min) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.w.y_min) / (self.w.y_max - self.w.y_min) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn colour(source: TraceSource) -> &'static str {
    match source {
        TraceSource::Separatrix => "#c0392b",
        TraceSource::Contour => "#2c7a3f",
        TraceSource::Flow | TraceSource::MapOrbit => "#34495e",
    }
}

// Points of one polyline. Where a trace wraps around the cylinder the line detours
// outside the clip rectangle so the jump is not drawn.
fn polyline_points(view: &Viewport, t: &Trace) -> String {
    let (left, right) = (-MARGIN, WIDTH + MARGIN);
    let above = -MARGIN;
    let mut out = String::new();
    let mut prev: Option<(f64, f64)> = None;
    for q in &t.points {
        if let Some((px, py)) = prev {
            if (q.x - px).abs() > PI {
                let (exit, enter) = if q.x < px { (right, left) } else { (left, right) };
                for (sx, sy) in [(exit, view.py(py)), (exit, above), (enter, above), (enter, view.py(q.y))] {
                    let _ = write!(out, "{sx:.2},{sy:.2} ");
                }
            }
        }
        let _ = write!(out, "{:.2},{:.2} ", view.px(q.x), view.py(q.y));
        prev = Some((q.x, q.y));
    }
    out.pop();
    out
}

/// One `polyline` per trace, a marker per equilibrium, dashed symmetry lines at `x = 0` and `x = pi`.
pub fn render(w: &Window, traces: &[Trace], equilibria: &[Equilibrium], title: &str) -> String {
    let view = Viewport { w: *w };
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, "<title>{title}</title>");
    let (x0, y0) = (view.px(w.x_min), view.py(w.y_max));
    let (cw, ch) = (view.px(w.x_max) - x0, view.py(w.y_min) - y0);
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="plot"><rect x="{x0:.2}" y="{y0:.2}" width="{cw:.2}" height="{ch:.2}"/></clipPath></defs>"#
    );
    let _ =
        writeln!(s, r#"<rect x="{x0:.2}" y="{y0:.2}" width="{cw:.2}" height="{ch:.2}" fill="white" stroke="black"/>"#);
    let _ = writeln!(s, r#"<g clip-path="url(#plot)">"#);
    for x in [0.0, PI] {
        if x >= w.x_min && x <= w.x_max {
            let px = view.px(x);
            let _ = writeln!(
                s,
                r##"<line class="symmetry" x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="#999" stroke-dasharray="6,4"/>"##,
                y0 + ch
            );
        }
    }
    for (i, t) in traces.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<polyline id="trace-{i}" class="{}" fill="none" stroke="{}" stroke-width="0.8" points="{}"/>"#,
            t.source.as_str(),
            colour(t.source),
            polyline_points(&view, t)
        );
    }
    for e in equilibria {
        if !w.contains_y(e.position.y) {
            continue;
        }
        let (cx, cy) = (view.px(e.position.x), view.py(e.position.y));
        let marker = match e.stability {
            Stability::Elliptic => {
                format!(r#"<circle class="elliptic" cx="{cx:.2}" cy="{cy:.2}" r="4" fill="white" stroke="black"/>"#)
            }
            Stability::Hyperbolic => format!(
                r#"<path class="hyperbolic" d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="black" stroke-width="2"/>"#,
                cx - 5.0,
                cy - 5.0,
                cx + 5.0,
                cy + 5.0,
                cx - 5.0,
                cy + 5.0,
                cx + 5.0,
                cy - 5.0
            ),
            Stability::Degenerate => {
                format!(r#"<circle class="degenerate" cx="{cx:.2}" cy="{cy:.2}" r="4" fill="black"/>"#)
            }
        };
        let _ = writeln!(s, "{marker}");
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" font-family="sans-serif">{}</text>"#,
            cx + 6.0,
            cy - 6.0,
            e.label.as_str()
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif" text-anchor="middle">x</text>"#,
        WIDTH / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(s, r#"<text x="12" y="{:.2}" font-size="12" font-family="sans-serif">y</text>"#, HEIGHT / 2.0);
    let _ = writeln!(s, "</svg>");
    s
}
