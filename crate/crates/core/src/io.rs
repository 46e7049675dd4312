//! Output writers: placements JSON and SVG previews.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::greedy::Placement;
use crate::raster::{Mark, MarkGeometry};
use crate::scalar::Scalar;
use crate::scene::Scene;

#[derive(Serialize)]
#[serde(rename_all = "camelCase", bound(serialize = "T: Scalar"))]
struct PlacementDocument<'a, T> {
    engine: &'a str,
    placed: usize,
    omitted: usize,
    placements: &'a [Placement<T>],
}

/// Writes `{"engine", "placed", "omitted", "placements"}` as pretty JSON.
pub fn write_placements<T: Scalar, W: Write>(
    engine: &str,
    placements: &[Placement<T>],
    mut out: W,
) -> Result<()> {
    let placed = placements.iter().filter(|p| p.is_placed()).count();
    let doc = PlacementDocument {
        engine,
        placed,
        omitted: placements.len() - placed,
        placements,
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn mark_svg<T: Scalar>(s: &mut String, m: &Mark<T>) {
    let op = m.opacity;
    match &m.geometry {
        MarkGeometry::Point { center, radius } => {
            let _ = writeln!(
                s,
                r#"    <circle cx="{}" cy="{}" r="{}" fill-opacity="{op}"/>"#,
                center.x, center.y, radius
            );
        }
        MarkGeometry::Polyline {
            vertices,
            stroke_width,
        } => {
            let pts: Vec<String> = vertices.iter().map(|p| format!("{},{}", p.x, p.y)).collect();
            let _ = writeln!(
                s,
                r#"    <polyline points="{}" fill="none" stroke="black" stroke-width="{stroke_width}" stroke-opacity="{op}"/>"#,
                pts.join(" ")
            );
        }
        MarkGeometry::Rect { rect, filled } => {
            let style = if *filled {
                format!(r#"fill-opacity="{op}""#)
            } else {
                format!(r#"fill="none" stroke="black" stroke-opacity="{op}""#)
            };
            let _ = writeln!(
                s,
                r#"    <rect x="{}" y="{}" width="{}" height="{}" {style}/>"#,
                rect.x0,
                rect.y0,
                rect.width(),
                rect.height()
            );
        }
        MarkGeometry::TextBox { rect, text } => {
            let _ = writeln!(
                s,
                r#"    <rect x="{}" y="{}" width="{}" height="{}" fill="red" fill-opacity="{op}"/>"#,
                rect.x0,
                rect.y0,
                rect.width(),
                rect.height()
            );
            if let Some(t) = text {
                let _ = writeln!(
                    s,
                    r#"    <text x="{}" y="{}" font-size="{}">{}</text>"#,
                    rect.x0,
                    rect.y1,
                    rect.height(),
                    escape(t)
                );
            }
        }
        MarkGeometry::AreaBoundary { area } => {
            let (lower, upper) = area.boundary_lines();
            let pts: Vec<String> = lower
                .iter()
                .chain(upper.iter().rev())
                .map(|p| format!("{},{}", p.x, p.y))
                .collect();
            let _ = writeln!(
                s,
                r#"    <polygon points="{}" fill="none" stroke="black" stroke-opacity="{op}"/>"#,
                pts.join(" ")
            );
        }
    }
}

/// SVG preview: one `<g>` per mark group, areas, then labels drawn as their
/// exact pixel rects with the text inside.
pub fn render_svg<T: Scalar>(scene: &Scene<T>, placements: &[Placement<T>]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = scene.width,
        h = scene.height
    );
    let mut groups: Vec<&str> = Vec::new();
    for m in &scene.marks {
        if !groups.contains(&m.group.as_str()) {
            groups.push(&m.group);
        }
    }
    for g in groups {
        let _ = writeln!(s, r#"  <g class="{}">"#, escape(g));
        for m in scene.marks.iter().filter(|m| m.group == g) {
            mark_svg(&mut s, m);
        }
        s.push_str("  </g>\n");
    }
    if !scene.areas.is_empty() {
        s.push_str("  <g class=\"areas\">\n");
        for a in &scene.areas {
            mark_svg(&mut s, &Mark::area_boundary(a.clone()));
        }
        s.push_str("  </g>\n");
    }
    s.push_str("  <g class=\"labels\">\n");
    for p in placements {
        let (Some(r), Some(item)) = (p.rect, scene.items.get(p.item_id)) else {
            continue;
        };
        let _ = writeln!(
            s,
            r#"    <rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="steelblue"/>"#,
            r.x0,
            r.y0,
            r.width(),
            r.height()
        );
        let _ = writeln!(
            s,
            r#"    <text x="{}" y="{}" font-size="{}" textLength="{}" lengthAdjust="spacingAndGlyphs">{}</text>"#,
            r.x0,
            r.y1 + 1,
            r.height(),
            r.width(),
            escape(&item.text)
        );
    }
    s.push_str("  </g>\n</svg>\n");
    s
}
