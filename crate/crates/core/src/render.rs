//! SVG drawings of an embedded cycle: polygon outline, labelled points, cycle
//! edges, and a ring at every crossing that contributes to the fitness.

use std::fmt::Write as _;

use crate::ga::Chromosome;
use crate::geom::{folds_at, on_segment, raw_intersect, raw_properly_cross, Point};
use crate::instance::Instance;

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 24.0;

/// One contact counted by the fitness, located for drawing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingMarker {
    pub x: f64,
    pub y: f64,
    pub against_polygon: bool,
}

fn contact_point(a: Point, b: Point, c: Point, d: Point) -> (f64, f64) {
    if raw_properly_cross(a, b, c, d) {
        let (rx, ry) = ((b.x - a.x) as f64, (b.y - a.y) as f64);
        let (sx, sy) = ((d.x - c.x) as f64, (d.y - c.y) as f64);
        let denom = rx * sy - ry * sx;
        let t = ((c.x - a.x) as f64 * sy - (c.y - a.y) as f64 * sx) / denom;
        return (a.x as f64 + t * rx, a.y as f64 + t * ry);
    }
    let p = [c, d, a, b]
        .into_iter()
        .zip([(a, b), (a, b), (c, d), (c, d)])
        .find(|&(p, (u, v))| on_segment(p, u, v))
        .map_or(a, |(p, _)| p);
    (p.x as f64, p.y as f64)
}

/// Every pair counted in `c1` and `c2`, in counting order.
pub fn crossing_markers(instance: &Instance, chrom: &Chromosome) -> Vec<CrossingMarker> {
    let order = chrom.order();
    let n = order.len();
    let at = |k: usize| instance.points[order[k % n]];
    let mut out = Vec::new();
    for i in 0..n {
        let (a, b) = (at(i), at(i + 1));
        if folds_at(a, b, at(i + 2)) {
            out.push(CrossingMarker { x: b.x as f64, y: b.y as f64, against_polygon: false });
        }
        let last = if i == 0 { n - 1 } else { n };
        for j in (i + 2)..last {
            let (c, d) = (at(j), at(j + 1));
            if raw_intersect(a, b, c, d) {
                let (x, y) = contact_point(a, b, c, d);
                out.push(CrossingMarker { x, y, against_polygon: false });
            }
        }
    }
    for i in 0..n {
        let (a, b) = (at(i), at(i + 1));
        for (c, d) in instance.polygon.sides() {
            if raw_intersect(a, b, c, d) {
                let (x, y) = contact_point(a, b, c, d);
                out.push(CrossingMarker { x, y, against_polygon: true });
            }
        }
    }
    out
}

struct Canvas {
    min_x: f64,
    max_y: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Canvas {
    fn fit(instance: &Instance) -> Self {
        let (lo, hi) = instance.polygon.bounding_box();
        let w = (hi.x - lo.x).max(1) as f64;
        let h = (hi.y - lo.y).max(1) as f64;
        let scale = (CANVAS - 2.0 * MARGIN) / w.max(h);
        Canvas {
            min_x: lo.x as f64,
            max_y: hi.y as f64,
            scale,
            width: w * scale + 2.0 * MARGIN,
            height: h * scale + 2.0 * MARGIN,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (MARGIN + (x - self.min_x) * self.scale, MARGIN + (self.max_y - y) * self.scale)
    }

    fn point_list<'a>(&self, pts: impl Iterator<Item = &'a Point>) -> String {
        pts.map(|p| {
            let (x, y) = self.map(p.x as f64, p.y as f64);
            format!("{x:.2},{y:.2}")
        })
        .collect::<Vec<_>>()
        .join(" ")
    }
}

pub fn render_svg(instance: &Instance, chrom: &Chromosome) -> String {
    let canvas = Canvas::fit(instance);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#,
        w = canvas.width,
        h = canvas.height
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<polygon class="boundary" points="{}" fill="#eef2f5" stroke="#2d3e50" stroke-width="2"/>"##,
        canvas.point_list(instance.polygon.vertices().iter())
    );
    let cycle = chrom.order().iter().map(|&i| &instance.points[i]);
    let _ = writeln!(
        s,
        r##"<polygon class="cycle" points="{}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##,
        canvas.point_list(cycle)
    );

    let markers = crossing_markers(instance, chrom);
    let _ = writeln!(s, r#"<g class="crossings">"#);
    for m in &markers {
        let (x, y) = canvas.map(m.x, m.y);
        let color = if m.against_polygon { "#d62728" } else { "#ff7f0e" };
        let _ = writeln!(
            s,
            r#"<circle class="crossing" cx="{x:.2}" cy="{y:.2}" r="6" fill="none" stroke="{color}" stroke-width="2"/>"#
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g class="points" font-family="sans-serif" font-size="10">"#);
    for (i, p) in instance.points.iter().enumerate() {
        let (x, y) = canvas.map(p.x as f64, p.y as f64);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{i}</text>"#, x + 4.0, y - 4.0);
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
