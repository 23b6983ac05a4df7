//! Marching squares on a regular grid.

use std::collections::HashMap;

use super::Window;
use crate::hamiltonian::energy;
use crate::trace::{Trace, TraceMeta, TraceSource};
use crate::{Params, PhasePoint, Result};

/// A polyline in fractional grid coordinates `(i, j)`; closed loops repeat their first point.
pub type Polyline = Vec<(f64, f64)>;

/// Edge identifiers: horizontal edges `(i, j)-(i+1, j)` first, then vertical edges `(i, j)-(i, j+1)`.
struct Edges {
    nx: usize,
    ny: usize,
}

impl Edges {
    fn horizontal(&self, i: usize, j: usize) -> usize {
        j * (self.nx - 1) + i
    }

    fn vertical(&self, i: usize, j: usize) -> usize {
        (self.nx - 1) * self.ny + j * self.nx + i
    }
}

/// Extracts the `level` set of a field sampled row-major (`values[j * nx + i]`).
///
/// A node counts as inside when its value is strictly above `level`. Crossings are placed by
/// linear interpolation along cell edges; ambiguous saddle cells are resolved by the cell mean.
pub fn march(values: &[f64], nx: usize, ny: usize, level: f64) -> Vec<Polyline> {
    assert_eq!(values.len(), nx * ny, "field size does not match grid");
    if nx < 2 || ny < 2 {
        return Vec::new();
    }
    let edges = Edges { nx, ny };
    let v = |i: usize, j: usize| values[j * nx + i];
    let above = |i: usize, j: usize| v(i, j) > level;

    let mut crossings: HashMap<usize, (f64, f64)> = HashMap::new();
    let mut crossing = |id: usize, (i0, j0): (usize, usize), (i1, j1): (usize, usize)| {
        crossings.entry(id).or_insert_with(|| {
            let (a, b) = (v(i0, j0), v(i1, j1));
            let t = ((level - a) / (b - a)).clamp(0.0, 1.0);
            (i0 as f64 + t * (i1 as f64 - i0 as f64), j0 as f64 + t * (j1 as f64 - j0 as f64))
        });
        id
    };

    let mut segments: Vec<(usize, usize)> = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            // corners counter-clockwise from (i, j)
            let c = [above(i, j), above(i + 1, j), above(i + 1, j + 1), above(i, j + 1)];
            let case = c.iter().enumerate().fold(0u8, |m, (n, &on)| m | ((on as u8) << n));
            if case == 0 || case == 15 {
                continue;
            }
            let bottom = || (edges.horizontal(i, j), (i, j), (i + 1, j));
            let right = || (edges.vertical(i + 1, j), (i + 1, j), (i + 1, j + 1));
            let top = || (edges.horizontal(i, j + 1), (i, j + 1), (i + 1, j + 1));
            let left = || (edges.vertical(i, j), (i, j), (i, j + 1));
            let mut seg = |e0: (usize, (usize, usize), (usize, usize)), e1: (usize, (usize, usize), (usize, usize))| {
                let a = crossing(e0.0, e0.1, e0.2);
                let b = crossing(e1.0, e1.1, e1.2);
                segments.push((a, b));
            };
            // edges adjacent to each corner
            let corner_edges = [(bottom(), left()), (bottom(), right()), (right(), top()), (top(), left())];
            match case {
                5 | 10 => {
                    let mean = 0.25 * (v(i, j) + v(i + 1, j) + v(i + 1, j + 1) + v(i, j + 1));
                    let centre_above = mean > level;
                    // cut off the corners whose class differs from the centre
                    for (n, &on) in c.iter().enumerate() {
                        if on != centre_above {
                            let (e0, e1) = corner_edges[n];
                            seg(e0, e1);
                        }
                    }
                }
                _ => {
                    let mut crossed = Vec::with_capacity(2);
                    if c[0] != c[1] {
                        crossed.push(bottom());
                    }
                    if c[1] != c[2] {
                        crossed.push(right());
                    }
                    if c[2] != c[3] {
                        crossed.push(top());
                    }
                    if c[3] != c[0] {
                        crossed.push(left());
                    }
                    debug_assert_eq!(crossed.len(), 2);
                    seg(crossed[0], crossed[1]);
                }
            }
        }
    }

    link(&segments, &crossings)
}

fn link(segments: &[(usize, usize)], crossings: &HashMap<usize, (f64, f64)>) -> Vec<Polyline> {
    let mut by_edge: HashMap<usize, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        by_edge.entry(a).or_default().push(s);
        by_edge.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();

    let walk = |start_seg: usize, start_edge: usize, used: &mut [bool]| {
        let mut line = vec![crossings[&start_edge]];
        let (mut seg, mut edge) = (start_seg, start_edge);
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            edge = if a == edge { b } else { a };
            line.push(crossings[&edge]);
            match by_edge[&edge].iter().find(|&&s| !used[s]) {
                Some(&next) => seg = next,
                None => break,
            }
        }
        line
    };

    // open polylines start at edges touched by a single segment; iterate in a fixed order
    let mut ends: Vec<usize> = by_edge.iter().filter(|(_, s)| s.len() == 1).map(|(&e, _)| e).collect();
    ends.sort_unstable();
    for e in ends {
        let s = by_edge[&e][0];
        if !used[s] {
            out.push(walk(s, e, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            out.push(walk(s, segments[s].0, &mut used));
        }
    }
    out
}

/// Level set `H(x, y) = h` over the window, one trace per connected polyline.
pub fn level_curves(p: &Params, h: f64, w: &super::Window) -> Result<Vec<Trace>> {
    w.validate()?;
    let (dx, dy) = (w.dx(), w.dy());
    let mut values = Vec::with_capacity(w.nx * w.ny);
    for j in 0..w.ny {
        let y = w.y_min + j as f64 * dy;
        for i in 0..w.nx {
            let x = w.x_min + i as f64 * dx;
            values.push(energy(p, PhasePoint { x, y }).0);
        }
    }
    let mut meta = TraceMeta::new(*p);
    meta.window = Some(*w);
    Ok(march(&values, w.nx, w.ny, h)
        .into_iter()
        .map(|line| {
            let points =
                line.into_iter().map(|(gi, gj)| PhasePoint::new(w.x_min + gi * dx, w.y_min + gj * dy)).collect();
            Trace::new(TraceSource::Contour, meta.clone(), points)
        })
        .collect())
}

/// Largest variation of `H` over any single grid cell; the accuracy bound for contour points.
pub fn cell_variation(p: &Params, w: &Window) -> f64 {
    let (dx, dy) = (w.dx(), w.dy());
    let mut worst: f64 = 0.0;
    for j in 0..w.ny - 1 {
        for i in 0..w.nx - 1 {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
                .map(|(a, b)| energy(p, PhasePoint { x: w.x_min + a as f64 * dx, y: w.y_min + b as f64 * dy }).0);
            let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = corners.iter().copied().fold(f64::INFINITY, f64::min);
            worst = worst.max(hi - lo);
        }
    }
    worst
}
