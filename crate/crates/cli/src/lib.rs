//! Scenes and SVG output for the gasket models.
//!
//! Geometry stays exact until serialization; coordinates are rounded once,
//! to [`PRECISION`] decimal digits, when the document is written. The y axis
//! is flipped so that the figures appear upright.

use std::fmt::Write as _;

use gasket_core::gasket::{big_gasket, build_e, vertices_b, LatticeTriangle};
use gasket_core::verifier::derive_geometry;
use gasket_core::{GasketUnion, Point, Similitude, TriPoint};
use thiserror::Error;

/// Largest render depth accepted.
pub const MAX_DEPTH: u32 = 12;
/// Decimal digits written for every coordinate.
pub const PRECISION: usize = 9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("render depth {0} exceeds the limit of {MAX_DEPTH}")]
    DepthTooLarge(u32),
    #[error("unknown figure {0:?}; expected 1..8, A<n> or B<n> with n >= -3")]
    UnknownFigure(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayerKind {
    /// Gasket pieces drawn as their approximant triangles, at the scene
    /// depth unless overridden.
    Union {
        union: GasketUnion,
        depth: Option<u32>,
    },
    Outline(LatticeTriangle),
    Markers(Vec<(String, Point)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub kind: LayerKind,
    /// CSS class of the layer's group.
    pub style: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scene {
    pub title: String,
    pub layers: Vec<Layer>,
}

impl Scene {
    pub fn new(title: &str) -> Scene {
        Scene { title: title.to_string(), layers: Vec::new() }
    }

    pub fn union(mut self, union: GasketUnion, depth: Option<u32>, style: &str) -> Scene {
        self.layers.push(Layer { kind: LayerKind::Union { union, depth }, style: style.into() });
        self
    }

    pub fn outline(mut self, tri: LatticeTriangle, style: &str) -> Scene {
        self.layers.push(Layer { kind: LayerKind::Outline(tri), style: style.into() });
        self
    }

    pub fn markers(mut self, points: Vec<(String, Point)>, style: &str) -> Scene {
        self.layers.push(Layer { kind: LayerKind::Markers(points), style: style.into() });
        self
    }
}

fn approximant(t: &LatticeTriangle, depth: u32, out: &mut Vec<LatticeTriangle>) {
    if depth == 0 {
        out.push(*t);
    } else {
        for c in t.children() {
            approximant(&c, depth - 1, out);
        }
    }
}

enum Shape {
    Polygon([(f64, f64); 3]),
    Marker(String, (f64, f64)),
}

const STYLE: &str = "polygon{stroke-linejoin:round}\
.piece{fill:#8c5a2b;stroke:none}\
.big{fill:#d9c7a1;stroke:none}\
.outline{fill:none;stroke:#1f4e9c}\
.marker{fill:#b3261e}\
text{font-family:sans-serif;fill:#222}";

/// Render a scene as an SVG document. Byte-stable for identical input.
pub fn render_svg(scene: &Scene, depth: u32) -> Result<String, RenderError> {
    if depth > MAX_DEPTH {
        return Err(RenderError::DepthTooLarge(depth));
    }
    let mut groups: Vec<(String, Vec<Shape>)> = Vec::new();
    for layer in &scene.layers {
        let mut shapes = Vec::new();
        match &layer.kind {
            LayerKind::Union { union, depth: own } => {
                let d = own.unwrap_or(depth);
                if d > MAX_DEPTH {
                    return Err(RenderError::DepthTooLarge(d));
                }
                let mut tris = Vec::new();
                for p in union.pieces() {
                    approximant(&p.tri, d, &mut tris);
                }
                shapes.extend(tris.iter().map(|t| Shape::Polygon(t.vertex_points().map(|p| p.to_f64()))));
            }
            LayerKind::Outline(t) => shapes.push(Shape::Polygon(t.vertex_points().map(|p| p.to_f64()))),
            LayerKind::Markers(pts) => shapes.extend(pts.iter().map(|(l, p)| Shape::Marker(l.clone(), p.to_f64()))),
        }
        groups.push((layer.style.clone(), shapes));
    }

    let pts = groups.iter().flat_map(|(_, s)| s).flat_map(|s| match s {
        Shape::Polygon(v) => v.to_vec(),
        Shape::Marker(_, p) => vec![*p],
    });
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let size = (x1 - x0).max(y1 - y0).max(1e-9);
    let pad = size * 0.04;
    let stroke = size * 0.002;
    let radius = size * 0.006;
    let fmt = |v: f64| format!("{v:.PRECISION$}");
    // flip y so that the model's upward direction points up on screen
    let flip = |(x, y): (f64, f64)| (x, y1 - y + y0);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        fmt(x0 - pad),
        fmt(y0 - pad),
        fmt(x1 - x0 + 2.0 * pad),
        fmt(y1 - y0 + 2.0 * pad)
    );
    let _ = writeln!(svg, "<title>{}</title>", scene.title);
    let _ = writeln!(svg, "<style>{STYLE}.outline{{stroke-width:{}}}</style>", fmt(stroke));
    for (style, shapes) in &groups {
        let _ = writeln!(svg, r#"<g class="{style}">"#);
        for s in shapes {
            match s {
                Shape::Polygon(v) => {
                    let coords: Vec<String> =
                        v.iter().map(|&p| flip(p)).map(|(x, y)| format!("{},{}", fmt(x), fmt(y))).collect();
                    let _ = writeln!(svg, r#"<polygon points="{}"/>"#, coords.join(" "));
                }
                Shape::Marker(label, p) => {
                    let (x, y) = flip(*p);
                    let _ = writeln!(
                        svg,
                        r#"<circle class="marker" cx="{}" cy="{}" r="{}"/>"#,
                        fmt(x),
                        fmt(y),
                        fmt(radius)
                    );
                    if !label.is_empty() {
                        let _ = writeln!(
                            svg,
                            r#"<text x="{}" y="{}" font-size="{}">{label}</text>"#,
                            fmt(x + radius * 1.5),
                            fmt(y - radius * 1.5),
                            fmt(radius * 4.0)
                        );
                    }
                }
            }
        }
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn shift(u: &GasketUnion, dx: i64) -> GasketUnion {
    let f = Similitude::homothety(0, TriPoint::new(2 * dx, 0, 1).expect("lattice point"));
    GasketUnion::new(u.pieces().iter().map(|p| p.image(&f)))
}

fn shift_point(p: &Point, dx: i64) -> Point {
    p.add(&Point::lattice(dx, 1, 0, 1))
}

fn a_scene(n: i32) -> Scene {
    Scene::new(&format!("A_{n}")).union(GasketUnion::new([big_gasket()]), Some((n + 3) as u32), "big")
}

fn b_scene(n: i32) -> Scene {
    let pts = vertices_b(n).iter().map(|v| (String::new(), v.to_point())).collect();
    Scene::new(&format!("B_{n}")).outline(big_gasket().tri, "outline").markers(pts, "marker")
}

fn marked_e() -> Scene {
    let (m, _) = derive_geometry().expect("geometry derives");
    let labels = [&m.p1, &m.p2, &m.p3, &m.p4, &m.p5, &m.p6, &m.p7, &m.p8];
    let pts = labels.iter().enumerate().map(|(i, p)| (format!("P{}", i + 1), (*p).clone())).collect();
    Scene::new("five gaskets in a line")
        .union(build_e(5), None, "piece")
        .outline(m.tri_145, "outline")
        .outline(m.tri_678, "outline")
        .markers(pts, "marker")
}

fn cell_subdivision() -> Scene {
    let t = LatticeTriangle::unit();
    let [bl, top, br] = t.vertices();
    let names = [
        ("Q1", top),
        ("Q2", bl.midpoint(&top)),
        ("Q3", top.midpoint(&br)),
        ("Q4", bl),
        ("Q5", bl.midpoint(&br)),
        ("Q6", br),
    ];
    let mut s = Scene::new("cell and its three sub-cells").outline(t, "outline");
    for c in t.children() {
        s = s.outline(c, "outline");
    }
    s.markers(names.iter().map(|(l, p)| (l.to_string(), p.to_point())).collect(), "marker")
}

/// Scene for a named figure: `1`..`8`, `A<n>` or `B<n>` (`n >= -3`).
///
/// 1-3: one to three gaskets in a line; 4: five gaskets with the marked
/// points and triangles; 5: the five gaskets inside the big gasket of side
/// 8; 6 and 7: the first four approximants and their vertex sets; 8: a cell
/// with its sub-cells and the points Q1..Q6.
pub fn figure(name: &str) -> Result<Scene, RenderError> {
    let unknown = || RenderError::UnknownFigure(name.to_string());
    let level = |rest: &str| rest.parse::<i32>().ok().filter(|&n| (-3..=(MAX_DEPTH as i32 - 3)).contains(&n));
    if let Some(rest) = name.strip_prefix('A') {
        return level(rest).map(a_scene).ok_or_else(unknown);
    }
    if let Some(rest) = name.strip_prefix('B') {
        return level(rest).filter(|&n| n <= 6).map(b_scene).ok_or_else(unknown);
    }
    let scene = match name {
        "1" => Scene::new("one gasket").union(build_e(1), None, "piece"),
        "2" => Scene::new("two gaskets in a line").union(build_e(2), None, "piece"),
        "3" => Scene::new("three gaskets in a line").union(build_e(3), None, "piece"),
        "4" => marked_e(),
        "5" => Scene::new("five gaskets inside the big gasket")
            .union(GasketUnion::new([big_gasket()]), None, "big")
            .union(build_e(5), None, "piece"),
        "6" => (-3..=0).fold(Scene::new("A_-3, A_-2, A_-1, A_0"), |s, n| {
            let u = shift(&GasketUnion::new([big_gasket()]), 9 * (n as i64 + 3));
            s.union(u, Some((n + 3) as u32), "big")
        }),
        "7" => (-3..=0).fold(Scene::new("B_-3, B_-2, B_-1, B_0"), |s, n| {
            let dx = 9 * (n as i64 + 3);
            let pts = vertices_b(n).iter().map(|v| (String::new(), shift_point(&v.to_point(), dx))).collect();
            s.markers(pts, "marker")
        }),
        "8" => cell_subdivision(),
        _ => return Err(unknown()),
    };
    Ok(scene)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polygons(svg: &str) -> usize {
        svg.matches("<polygon").count()
    }

    #[test]
    fn approximant_counts() {
        assert_eq!(polygons(&render_svg(&figure("A-3").unwrap(), 0).unwrap()), 1);
        assert_eq!(polygons(&render_svg(&figure("A0").unwrap(), 0).unwrap()), 27);
        assert_eq!(polygons(&render_svg(&figure("6").unwrap(), 0).unwrap()), 1 + 3 + 9 + 27);
    }

    #[test]
    fn e_in_c() {
        let s = figure("5").unwrap();
        let counts: Vec<usize> = s
            .layers
            .iter()
            .map(|l| match &l.kind {
                LayerKind::Union { union, .. } => union.len(),
                _ => 0,
            })
            .collect();
        assert_eq!(counts, [1, 5]);
        let svg = render_svg(&s, 2).unwrap();
        assert_eq!(polygons(&svg), 9 + 45);
    }

    #[test]
    fn depth_guard() {
        assert_eq!(render_svg(&figure("1").unwrap(), 13), Err(RenderError::DepthTooLarge(13)));
        assert!(figure("A10").is_err());
        assert!(figure("9").is_err());
    }

    #[test]
    fn stable_output() {
        let s = figure("4").unwrap();
        assert_eq!(render_svg(&s, 3).unwrap(), render_svg(&s, 3).unwrap());
        let svg = render_svg(&s, 3).unwrap();
        assert!(svg.contains(">P8</text>"));
        assert!(svg.contains("<title>five gaskets in a line</title>"));
    }

    #[test]
    fn coordinates_flip_and_round() {
        let svg = render_svg(&figure("1").unwrap(), 0).unwrap();
        assert!(svg.contains("0.500000000,0.000000000"), "{svg}");
        assert!(svg.contains("0.000000000,0.866025404"));
    }
}
