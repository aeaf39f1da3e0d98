//! Deterministic SVG figures: an oblique projection of the drawing with
//! labeled vertices and straight edge segments.

use std::fmt::Write as _;

use crate::engine::Embedding;
use crate::graph::Graph;

/// Oblique projection constants: a point (x, y, z) lands at
/// (x + 0.35 z, y + 0.20 z). Purely presentational.
const DEPTH_X: f64 = 0.35;
const DEPTH_Y: f64 = 0.20;
const SCALE: f64 = 28.0;
const MARGIN: f64 = 30.0;
const VERTEX_RADIUS: f64 = 7.0;

fn project(p: [i64; 3]) -> (f64, f64) {
    (p[0] as f64 + DEPTH_X * p[2] as f64, p[1] as f64 + DEPTH_Y * p[2] as f64)
}

/// Renders an embedding as a standalone SVG document. With a graph, edges
/// are drawn as line elements; without one, only the labeled points appear.
/// Identical inputs produce identical bytes.
pub fn render_svg(embedding: &Embedding, graph: Option<&Graph>) -> String {
    let projected: Vec<(f64, f64)> = embedding
        .points
        .iter()
        .map(|&p| project(p.into()))
        .collect();
    let (mut min_x, mut max_x, mut min_y, mut max_y) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &(x, y) in &projected {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let width = (max_x - min_x) * SCALE + 2.0 * MARGIN;
    let height = (max_y - min_y) * SCALE + 2.0 * MARGIN;
    // SVG y grows downward; flip so larger grid y is higher on the page
    let place = |&(x, y): &(f64, f64)| {
        (MARGIN + (x - min_x) * SCALE, MARGIN + (max_y - y) * SCALE)
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:.2} {height:.2}" width="{width:.2}" height="{height:.2}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(g) = graph {
        let _ = writeln!(svg, r##"<g stroke="#444444" stroke-width="1.5">"##);
        for &(u, v) in g.edges() {
            let (x1, y1) = place(&projected[u as usize]);
            let (x2, y2) = place(&projected[v as usize]);
            let _ = writeln!(
                svg,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    for (v, pt) in projected.iter().enumerate() {
        let (cx, cy) = place(pt);
        let _ = writeln!(
            svg,
            r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="{VERTEX_RADIUS}" fill="#2b6cb0" stroke="white" stroke-width="1"/>"##
        );
        let _ = writeln!(
            svg,
            r#"<text x="{cx:.2}" y="{:.2}" font-size="7" text-anchor="middle" fill="white" font-family="sans-serif">{v}</text>"#,
            cy + 2.5
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GridPoint;

    #[test]
    fn single_vertex_has_one_labeled_circle() {
        let emb = Embedding { m: 1, points: vec![GridPoint::new(0, 0, 0)] };
        let svg = render_svg(&emb, None);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(svg.matches("<text").count(), 1);
        assert_eq!(svg.matches("<line").count(), 0);
    }

    #[test]
    fn k4_has_four_circles_six_lines() {
        let g = Graph::parse("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3").unwrap();
        let emb = Embedding {
            m: 2,
            points: vec![
                GridPoint::new(0, 0, 0),
                GridPoint::new(1, 0, 0),
                GridPoint::new(0, 1, 0),
                GridPoint::new(0, 0, 1),
            ],
        };
        let svg = render_svg(&emb, Some(&g));
        assert_eq!(svg.matches("<circle").count(), 4);
        assert_eq!(svg.matches("<line").count(), 6);
    }

    #[test]
    fn rendering_is_deterministic() {
        let g = Graph::parse("3 2\n0 1\n1 2").unwrap();
        let emb = Embedding {
            m: 4,
            points: vec![
                GridPoint::new(0, 0, 3),
                GridPoint::new(2, 1, 0),
                GridPoint::new(3, 3, 2),
            ],
        };
        assert_eq!(render_svg(&emb, Some(&g)), render_svg(&emb, Some(&g)));
    }
}
