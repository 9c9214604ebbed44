//! Static SVG rendering of a cloud and its depth contours.

use std::fmt::Write;

use zonoid_depth::{convex_hull_2d, ContourPolyline};

pub struct Figure<'a> {
    pub points: &'a [[f64; 2]],
    pub mean: [f64; 2],
    pub contours: &'a [ContourPolyline],
    pub size: u32,
    pub show_hull: bool,
    pub show_mean: bool,
}

const MARGIN: f64 = 24.0;

struct Frame {
    min: [f64; 2],
    scale: f64,
    offset: [f64; 2],
    size: f64,
}

impl Frame {
    fn fit(fig: &Figure) -> Frame {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        let all = fig.points.iter().chain(fig.contours.iter().flat_map(|c| c.vertices.iter()));
        for p in all.chain(std::iter::once(&fig.mean)) {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        let size = fig.size as f64;
        let span = [(max[0] - min[0]).max(1e-12), (max[1] - min[1]).max(1e-12)];
        let scale = (size - 2.0 * MARGIN) / span[0].max(span[1]);
        // Center the shorter axis.
        let offset = [
            MARGIN + 0.5 * (size - 2.0 * MARGIN - scale * span[0]),
            MARGIN + 0.5 * (size - 2.0 * MARGIN - scale * span[1]),
        ];
        Frame { min, scale, offset, size }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        let x = self.offset[0] + self.scale * (p[0] - self.min[0]);
        let y = self.size - (self.offset[1] + self.scale * (p[1] - self.min[1]));
        (x, y)
    }
}

/// Blue for the outermost level through red for the innermost.
fn level_color(i: usize, count: usize) -> String {
    let t = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.0 };
    let mix = |a: f64, b: f64| (a + t * (b - a)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(33.0, 215.0), mix(102.0, 48.0), mix(172.0, 39.0))
}

pub fn render(fig: &Figure) -> String {
    let frame = Frame::fit(fig);
    let mut out = String::new();
    let s = fig.size;
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#
    );
    let _ = writeln!(out, r#"<rect width="{s}" height="{s}" fill="white"/>"#);

    let _ = writeln!(out, r#"<g fill="none" stroke-width="1.5" stroke-linecap="round" stroke-linejoin="round">"#);
    for (i, c) in fig.contours.iter().enumerate() {
        let mut d = String::new();
        for (k, v) in c.vertices.iter().enumerate() {
            let (x, y) = frame.map(*v);
            let _ = write!(d, "{}{x:.2} {y:.2} ", if k == 0 { "M" } else { "L" });
        }
        d.push('Z');
        let _ = writeln!(
            out,
            r#"<path d="{d}" stroke="{}" data-level="{}"/>"#,
            level_color(i, fig.contours.len()),
            c.level
        );
    }
    let _ = writeln!(out, "</g>");

    if fig.show_hull {
        let mut hull = convex_hull_2d(fig.points);
        if let Some(&first) = hull.first() {
            hull.push(first);
        }
        let coords: Vec<String> = hull
            .iter()
            .map(|p| {
                let (x, y) = frame.map(*p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="gray" stroke-width="1" stroke-dasharray="5 4"/>"#,
            coords.join(" ")
        );
    }

    let _ = writeln!(out, r#"<g fill="none" stroke="black" stroke-width="0.8">"#);
    for p in fig.points {
        let (x, y) = frame.map(*p);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.2"/>"#);
    }
    let _ = writeln!(out, "</g>");

    if fig.show_mean {
        let (x, y) = frame.map(fig.mean);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="black"/>"#);
    }
    out.push_str("</svg>\n");
    out
}
