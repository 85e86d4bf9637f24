//! SVG picture of a traced relator: the walk, its hull, simple vertices and
//! visit counts at hull vertices.

use std::fmt::Write;

use crate::bns::{BnsVerdict, HullPolygon, LatticePath, Point};

const CELL: i64 = 24;
const MARGIN: i64 = 32;

pub fn render_svg(path: &LatticePath, hull: &HullPolygon, verdict: &BnsVerdict) -> String {
    let all = path.points.iter().chain(&hull.vertices);
    let (min_x, max_x, min_y, max_y) = all.fold((0, 0, 0, 0), |(a, b, c, d), p| {
        (a.min(p.x), b.max(p.x), c.min(p.y), d.max(p.y))
    });
    let width = (max_x - min_x) * CELL + 2 * MARGIN;
    let height = (max_y - min_y) * CELL + 2 * MARGIN;
    // y grows upward in the lattice, downward in SVG
    let sx = |p: &Point| (p.x - min_x) * CELL + MARGIN;
    let sy = |p: &Point| (max_y - p.y) * CELL + MARGIN;
    let coords = |pts: &mut dyn Iterator<Item = &Point>| {
        pts.map(|p| format!("{},{}", sx(p), sy(p))).collect::<Vec<_>>().join(" ")
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        out,
        r#"  <title>relator walk: {} steps, {} hull vertices, {}</title>"#,
        path.len(),
        hull.vertices.len(),
        if verdict.empty { "EMPTY" } else { "NONEMPTY" }
    );
    let _ = writeln!(
        out,
        r##"  <polygon class="hull" points="{}" fill="#eef3fb" stroke="#3465a4" stroke-width="2"/>"##,
        coords(&mut hull.vertices.iter())
    );
    let _ = writeln!(
        out,
        r##"  <polyline class="path" points="{}" fill="none" stroke="#333333" stroke-width="1.5" stroke-linejoin="round"/>"##,
        coords(&mut path.points.iter())
    );
    let origin = Point::ORIGIN;
    let _ = writeln!(
        out,
        r##"  <rect class="origin" x="{}" y="{}" width="6" height="6" fill="#333333"/>"##,
        sx(&origin) - 3,
        sy(&origin) - 3
    );
    for p in &verdict.simple_vertices {
        let _ = writeln!(
            out,
            r##"  <circle class="simple-vertex" cx="{}" cy="{}" r="5" fill="#cc0000"/>"##,
            sx(p),
            sy(p)
        );
    }
    for m in &verdict.multiplicities {
        let _ = writeln!(
            out,
            r#"  <text class="visits" x="{}" y="{}" font-size="11" font-family="monospace">{}</text>"#,
            sx(&m.vertex) + 6,
            sy(&m.vertex) - 6,
            m.visits
        );
    }
    out.push_str("</svg>\n");
    out
}
