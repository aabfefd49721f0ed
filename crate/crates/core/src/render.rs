//! Deterministic SVG drawings of base diagrams.
//!
//! Element classes: `outline`, `interior` (filled lattice dots), `boundary`
//! (small lattice dots), `node` (circled dot), `cut` (dashed segment from a
//! node to its anchor vertex). Coordinates are exact rationals rounded to
//! three decimals, so identical input always renders identical bytes.

use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::diagram::{ClosedBase, Diagram};
use crate::rat::{Rat, RatPoint};

/// Pixels per lattice unit.
const SCALE: i64 = 40;
/// Blank lattice units around the bounding box.
const MARGIN: i64 = 1;

/// Exact decimal with three places, rounded half up.
fn fmt_coord(r: &Rat) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let scaled = r.abs() * Rat::from_int(1000) + Rat::new(1, 2);
    let n: BigInt = scaled.floor();
    let (q, m) = n.div_mod_floor(&BigInt::from(1000));
    if m == BigInt::from(0) {
        return if q == BigInt::from(0) {
            "0".into()
        } else {
            format!("{sign}{q}")
        };
    }
    let frac = format!("{m:0>3}");
    format!("{sign}{q}.{}", frac.trim_end_matches('0'))
}

/// Maps lattice coordinates to the canvas, flipping `y` so that up is up.
struct Frame {
    x0: i64,
    y1: i64,
    dx: i64,
}

impl Frame {
    fn x(&self, v: &Rat) -> String {
        fmt_coord(&((v - Rat::from_int(self.x0 - MARGIN - self.dx)) * Rat::from_int(SCALE)))
    }

    fn y(&self, v: &Rat) -> String {
        fmt_coord(&((Rat::from_int(self.y1 + MARGIN) - v) * Rat::from_int(SCALE)))
    }

    fn xy(&self, p: &RatPoint) -> (String, String) {
        (self.x(&p.x), self.y(&p.y))
    }
}

fn draw(out: &mut String, d: &Diagram, frame: &Frame) {
    let pts: Vec<String> = d
        .polygon
        .vertices()
        .iter()
        .map(|v| {
            let (x, y) = frame.xy(v);
            format!("{x},{y}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polygon class="outline" points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        pts.join(" ")
    );

    let lattice = d.polygon.lattice_points();
    let node_spots: Vec<RatPoint> = d.nodes.iter().map(|n| n.position.clone()).collect();
    for p in &lattice.interior {
        let rp = p.to_rat();
        if node_spots.contains(&rp) {
            continue;
        }
        let (x, y) = frame.xy(&rp);
        let _ = writeln!(
            out,
            r#"<circle class="interior" cx="{x}" cy="{y}" r="4" fill="black"/>"#
        );
    }
    for p in &lattice.boundary {
        let (x, y) = frame.xy(&p.to_rat());
        let _ = writeln!(
            out,
            r#"<circle class="boundary" cx="{x}" cy="{y}" r="2" fill="gray"/>"#
        );
    }

    let mut nodes: Vec<_> = d.nodes.iter().collect();
    nodes.sort_by(|a, b| a.position.cmp(&b.position));
    for n in nodes {
        let (ax, ay) = frame.xy(&n.cut_anchor);
        let (x, y) = frame.xy(&n.position);
        let _ = writeln!(
            out,
            r#"<line class="cut" x1="{x}" y1="{y}" x2="{ax}" y2="{ay}" stroke="black" stroke-dasharray="4 3"/>"#
        );
        let _ = writeln!(
            out,
            r#"<g class="node"><circle cx="{x}" cy="{y}" r="6" fill="white" stroke="black"/><circle cx="{x}" cy="{y}" r="2" fill="black"/></g>"#
        );
    }
}

fn document(width: i64, height: i64, body: &str) -> String {
    let (w, h) = (width * SCALE, height * SCALE);
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n{body}</svg>\n"
    )
}

pub fn render_diagram(d: &Diagram) -> String {
    let (x0, y0, x1, y1) = d.polygon.lattice_bbox();
    let frame = Frame { x0, y1, dx: 0 };
    let mut body = String::new();
    draw(&mut body, d, &frame);
    document(x1 - x0 + 2 * MARGIN, y1 - y0 + 2 * MARGIN, &body)
}

/// Both halves side by side, `half_a` on the left.
pub fn render_closed(c: &ClosedBase) -> String {
    let (ax0, ay0, ax1, ay1) = c.half_a.polygon.lattice_bbox();
    let (bx0, by0, bx1, by1) = c.half_b.polygon.lattice_bbox();
    let (y0, y1) = (ay0.min(by0), ay1.max(by1));
    let wa = ax1 - ax0 + 2 * MARGIN;
    let wb = bx1 - bx0 + 2 * MARGIN;
    let mut body = String::new();
    draw(&mut body, &c.half_a, &Frame { x0: ax0, y1, dx: 0 });
    draw(
        &mut body,
        &c.half_b,
        &Frame {
            x0: bx0,
            y1,
            dx: wa,
        },
    );
    document(wa + wb, y1 - y0 + 2 * MARGIN, &body)
}
