//! Rasterization of chart marks onto an [`OccupancyBitmap`].
//!
//! The default [`Coverage::Conservative`] mode marks every pixel whose closed
//! unit square touches the mark geometry (strokes and discs are closed sets,
//! distances compared with `<=`). [`Coverage::CenterSampled`] marks a pixel
//! only when its center lies inside the geometry; the particle baselines use
//! it to reproduce plain image-based sampling.
//!
//! Paths are rasterized with round caps and joins: a stroke of width `w` is
//! the set of points within `w / 2` of some segment.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::area::AreaSeries;
use crate::bitmap::OccupancyBitmap;
use crate::error::{Error, Result};
use crate::geom::{
    pixel_center, pixel_square, point_segment_distance, segment_box_distance, PixelRect, Point,
    Rect,
};
use crate::scalar::Scalar;

/// Pixel grid that rasterizers write into.
pub trait RasterTarget {
    fn width(&self) -> i64;
    fn height(&self) -> i64;
    /// Marks row `y`, columns `[x0, x1]`, clipped to the grid.
    fn mark_range(&mut self, y: i64, x0: i64, x1: i64);
    /// Marks a filled rect; targets may skip rows as long as any query of
    /// height `>= min_label_height` still meets a marked row.
    fn mark_rect(&mut self, r: &PixelRect, min_label_height: i64);
}

impl RasterTarget for OccupancyBitmap {
    fn width(&self) -> i64 {
        OccupancyBitmap::width(self)
    }

    fn height(&self) -> i64 {
        OccupancyBitmap::height(self)
    }

    fn mark_range(&mut self, y: i64, x0: i64, x1: i64) {
        OccupancyBitmap::mark_range(self, y, x0, x1)
    }

    fn mark_rect(&mut self, r: &PixelRect, min_label_height: i64) {
        OccupancyBitmap::mark_rect(self, r, min_label_height)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coverage {
    #[default]
    Conservative,
    CenterSampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MarkKind {
    Point,
    Polyline,
    Rect,
    AreaBoundary,
    TextBox,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MarkGeometry<T> {
    Point { center: Point<T>, radius: T },
    Polyline { vertices: Vec<Point<T>>, stroke_width: T },
    Rect { rect: Rect<T>, filled: bool },
    AreaBoundary { area: AreaSeries<T> },
    TextBox { rect: Rect<T>, text: Option<String> },
}

/// A graphical mark labels may have to avoid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawMark<T>",
    into = "RawMark<T>",
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct Mark<T> {
    pub geometry: MarkGeometry<T>,
    /// Avoid-group tag.
    pub group: String,
    pub opacity: T,
}

impl<T: Scalar> Mark<T> {
    pub fn new(geometry: MarkGeometry<T>) -> Self {
        Mark {
            geometry,
            group: String::new(),
            opacity: T::one(),
        }
    }

    pub fn point(center: Point<T>, radius: T) -> Self {
        Self::new(MarkGeometry::Point { center, radius })
    }

    pub fn polyline(vertices: Vec<Point<T>>, stroke_width: T) -> Self {
        Self::new(MarkGeometry::Polyline {
            vertices,
            stroke_width,
        })
    }

    pub fn rect(rect: Rect<T>, filled: bool) -> Self {
        Self::new(MarkGeometry::Rect { rect, filled })
    }

    pub fn text_box(rect: Rect<T>, text: Option<String>) -> Self {
        Self::new(MarkGeometry::TextBox { rect, text })
    }

    pub fn area_boundary(area: AreaSeries<T>) -> Self {
        Self::new(MarkGeometry::AreaBoundary { area })
    }

    pub fn in_group(mut self, group: impl Into<String>) -> Self {
        self.group = group.into();
        self
    }

    pub fn with_opacity(mut self, opacity: T) -> Self {
        self.opacity = opacity;
        self
    }

    pub fn kind(&self) -> MarkKind {
        match self.geometry {
            MarkGeometry::Point { .. } => MarkKind::Point,
            MarkGeometry::Polyline { .. } => MarkKind::Polyline,
            MarkGeometry::Rect { .. } => MarkKind::Rect,
            MarkGeometry::AreaBoundary { .. } => MarkKind::AreaBoundary,
            MarkGeometry::TextBox { .. } => MarkKind::TextBox,
        }
    }

    pub fn is_visible(&self) -> bool {
        self.opacity > T::zero()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.opacity >= T::zero() && self.opacity <= T::one()) {
            return Err(Error::invalid(format!("opacity {} outside [0, 1]", self.opacity)));
        }
        match &self.geometry {
            MarkGeometry::Point { radius, .. } if !(*radius >= T::zero()) => {
                Err(Error::invalid("point radius must be non-negative"))
            }
            MarkGeometry::Polyline {
                vertices,
                stroke_width,
            } => {
                if vertices.len() < 2 {
                    Err(Error::invalid("polyline needs at least two vertices"))
                } else if !(*stroke_width > T::zero()) {
                    Err(Error::invalid("polyline stroke width must be positive"))
                } else {
                    Ok(())
                }
            }
            MarkGeometry::Rect { rect, .. } | MarkGeometry::TextBox { rect, .. }
                if !rect.is_valid() =>
            {
                Err(Error::invalid("rect corners must satisfy x0 <= x1, y0 <= y1"))
            }
            MarkGeometry::AreaBoundary { area } => area.validate(),
            _ => Ok(()),
        }
    }

    /// Exact bounding box of the mark geometry, strokes included.
    pub fn bounds(&self) -> Rect<T> {
        match &self.geometry {
            MarkGeometry::Point { center, radius } => {
                Rect::new(center.x, center.y, center.x, center.y).inflated(*radius)
            }
            MarkGeometry::Polyline {
                vertices,
                stroke_width,
            } => Rect::bounding(vertices.iter().copied())
                .unwrap_or_default()
                .inflated(*stroke_width * T::HALF),
            MarkGeometry::Rect { rect, .. } | MarkGeometry::TextBox { rect, .. } => *rect,
            MarkGeometry::AreaBoundary { area } => area.bounds().inflated(T::HALF),
        }
    }

    /// Bounding box of the pixels conservative rasterization marks.
    pub fn pixel_bounds(&self) -> PixelRect {
        PixelRect::touching(&self.bounds())
    }

    pub fn translated(&self, dx: T, dy: T) -> Self {
        let geometry = match &self.geometry {
            MarkGeometry::Point { center, radius } => MarkGeometry::Point {
                center: center.translated(dx, dy),
                radius: *radius,
            },
            MarkGeometry::Polyline {
                vertices,
                stroke_width,
            } => MarkGeometry::Polyline {
                vertices: vertices.iter().map(|p| p.translated(dx, dy)).collect(),
                stroke_width: *stroke_width,
            },
            MarkGeometry::Rect { rect, filled } => MarkGeometry::Rect {
                rect: rect.translated(dx, dy),
                filled: *filled,
            },
            MarkGeometry::AreaBoundary { area } => MarkGeometry::AreaBoundary {
                area: area.translated(dx, dy),
            },
            MarkGeometry::TextBox { rect, text } => MarkGeometry::TextBox {
                rect: rect.translated(dx, dy),
                text: text.clone(),
            },
        };
        Mark {
            geometry,
            group: self.group.clone(),
            opacity: self.opacity,
        }
    }
}

/// Flat wire form of [`Mark`]; validated on conversion.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(
    rename_all = "camelCase",
    deny_unknown_fields,
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct RawMark<T> {
    kind: MarkKind,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    opacity: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<Point<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Point<T>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stroke_width: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rect: Option<Rect<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    filled: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pairs: Option<AreaSeries<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    text: Option<String>,
}

fn required<V>(v: Option<V>, kind: MarkKind, field: &str) -> Result<V, String> {
    v.ok_or_else(|| format!("{kind:?} mark requires `{field}`"))
}

impl<T: Scalar> TryFrom<RawMark<T>> for Mark<T> {
    type Error = String;

    fn try_from(raw: RawMark<T>) -> Result<Self, String> {
        let kind = raw.kind;
        let present = [
            ("center", raw.center.is_some()),
            ("radius", raw.radius.is_some()),
            ("vertices", raw.vertices.is_some()),
            ("strokeWidth", raw.stroke_width.is_some()),
            ("rect", raw.rect.is_some()),
            ("filled", raw.filled.is_some()),
            ("pairs", raw.pairs.is_some()),
            ("text", raw.text.is_some()),
        ];
        let allowed: &[&str] = match kind {
            MarkKind::Point => &["center", "radius"],
            MarkKind::Polyline => &["vertices", "strokeWidth"],
            MarkKind::Rect => &["rect", "filled"],
            MarkKind::AreaBoundary => &["pairs"],
            MarkKind::TextBox => &["rect", "text"],
        };
        if let Some((name, _)) = present
            .iter()
            .find(|(name, set)| *set && !allowed.contains(name))
        {
            return Err(format!("field `{name}` is not valid for {kind:?} marks"));
        }
        let geometry = match kind {
            MarkKind::Point => MarkGeometry::Point {
                center: required(raw.center, kind, "center")?,
                radius: raw.radius.unwrap_or_else(T::zero),
            },
            MarkKind::Polyline => MarkGeometry::Polyline {
                vertices: required(raw.vertices, kind, "vertices")?,
                stroke_width: raw.stroke_width.unwrap_or_else(T::one),
            },
            MarkKind::Rect => MarkGeometry::Rect {
                rect: required(raw.rect, kind, "rect")?,
                filled: raw.filled.unwrap_or(true),
            },
            MarkKind::AreaBoundary => MarkGeometry::AreaBoundary {
                area: required(raw.pairs, kind, "pairs")?,
            },
            MarkKind::TextBox => MarkGeometry::TextBox {
                rect: required(raw.rect, kind, "rect")?,
                text: raw.text,
            },
        };
        let mark = Mark {
            geometry,
            group: raw.group,
            opacity: raw.opacity.unwrap_or_else(T::one),
        };
        mark.validate().map_err(|e| e.to_string())?;
        Ok(mark)
    }
}

impl<T: Scalar> From<Mark<T>> for RawMark<T> {
    fn from(m: Mark<T>) -> Self {
        let mut raw = RawMark {
            kind: m.kind(),
            group: m.group,
            opacity: (m.opacity != T::one()).then_some(m.opacity),
            center: None,
            radius: None,
            vertices: None,
            stroke_width: None,
            rect: None,
            filled: None,
            pairs: None,
            text: None,
        };
        match m.geometry {
            MarkGeometry::Point { center, radius } => {
                raw.center = Some(center);
                raw.radius = Some(radius);
            }
            MarkGeometry::Polyline {
                vertices,
                stroke_width,
            } => {
                raw.vertices = Some(vertices);
                raw.stroke_width = Some(stroke_width);
            }
            MarkGeometry::Rect { rect, filled } => {
                raw.rect = Some(rect);
                raw.filled = Some(filled);
            }
            MarkGeometry::AreaBoundary { area } => raw.pairs = Some(area),
            MarkGeometry::TextBox { rect, text } => {
                raw.rect = Some(rect);
                raw.text = text;
            }
        }
        raw
    }
}

/// Whether pixel `(x, y)` belongs to the stroke of segment `ab` with half
/// width `half_width` under `coverage`.
pub fn segment_covers<T: Scalar>(
    coverage: Coverage,
    a: Point<T>,
    b: Point<T>,
    half_width: T,
    x: i64,
    y: i64,
) -> bool {
    match coverage {
        Coverage::Conservative => segment_box_distance(a, b, &pixel_square(x, y)) <= half_width,
        Coverage::CenterSampled => point_segment_distance(pixel_center(x, y), a, b) <= half_width,
    }
}

/// The set of points within `radius` of segment `ab`.
struct Capsule<T> {
    a: Point<T>,
    b: Point<T>,
    radius: T,
    /// Edges of the segment's rectangle body as `(p, q, dx/dy)`; empty for
    /// a degenerate segment.
    edges: Vec<(Point<T>, Point<T>, T)>,
}

impl<T: Scalar> Capsule<T> {
    fn new(a: Point<T>, b: Point<T>, radius: T) -> Self {
        let dx = b.x - a.x;
        let dy = b.y - a.y;
        let len = dx.hypot(dy);
        let mut edges = Vec::with_capacity(4);
        if len > T::zero() {
            let nx = -dy / len * radius;
            let ny = dx / len * radius;
            let quad = [
                Point::new(a.x + nx, a.y + ny),
                Point::new(b.x + nx, b.y + ny),
                Point::new(b.x - nx, b.y - ny),
                Point::new(a.x - nx, a.y - ny),
            ];
            for i in 0..4 {
                let (p, q) = (quad[i], quad[(i + 1) % 4]);
                let inv = if p.y == q.y { T::zero() } else { (q.x - p.x) / (q.y - p.y) };
                edges.push((p, q, inv));
            }
        }
        Capsule { a, b, radius, edges }
    }

    /// X-extent on the horizontal line `y`.
    fn row_interval(&self, y: T) -> Option<(T, T)> {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        let mut push = |x: T| {
            lo = lo.min(x);
            hi = hi.max(x);
        };
        let r = self.radius;
        for p in [self.a, self.b] {
            let dy = y - p.y;
            if dy.abs() <= r {
                let s = (r * r - dy * dy).max(T::zero()).sqrt();
                push(p.x - s);
                push(p.x + s);
            }
        }
        for &(p, q, inv) in &self.edges {
            if p.y == q.y {
                if p.y == y {
                    push(p.x);
                    push(q.x);
                }
            } else if (p.y - y) * (q.y - y) <= T::zero() {
                push(p.x + (y - p.y) * inv);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// Marks the stroke of one segment row by row.
///
/// Center sampling takes the capsule's extent on the row's center line.
/// Conservative coverage takes its extent over the whole row strip, which is
/// the hull of the extents on the strip's two edges and of the capsule's
/// leftmost/rightmost points when they fall inside the strip. The radius is
/// inflated by a hair so rounding never drops a touched pixel.
fn rasterize_segment<T: Scalar, B: RasterTarget + ?Sized>(
    b: &mut B,
    p: Point<T>,
    q: Point<T>,
    half_width: T,
    coverage: Coverage,
) {
    let last_col = b.width() - 1;
    match coverage {
        Coverage::CenterSampled => {
            let r = half_width;
            let capsule = Capsule::new(p, q, r);
            let row0 = (p.y.min(q.y) - r - T::HALF).ceil_i64().max(0);
            let row1 = (p.y.max(q.y) + r - T::HALF).floor_i64().min(b.height() - 1);
            for y in row0..=row1 {
                let cy = T::from_i64_lossy(y) + T::HALF;
                if let Some((xl, xr)) = capsule.row_interval(cy) {
                    let lo = (xl - T::HALF).ceil_i64().max(0);
                    let hi = (xr - T::HALF).floor_i64().min(last_col);
                    if lo <= hi {
                        b.mark_range(y, lo, hi);
                    }
                }
            }
        }
        Coverage::Conservative => {
            let r = half_width + T::lit(1e-9);
            let row0 = ((p.y.min(q.y) - r).ceil_i64() - 1).max(0);
            let row1 = (p.y.max(q.y) + r).floor_i64().min(b.height() - 1);
            let capsule = Capsule::new(p, q, r);
            let mut edge = capsule.row_interval(T::from_i64_lossy(row0));
            for y in row0..=row1 {
                let top = T::from_i64_lossy(y);
                let bottom = top + T::one();
                let next = capsule.row_interval(bottom);
                let mut lo = T::infinity();
                let mut hi = T::neg_infinity();
                for (xl, xr) in [edge, next].into_iter().flatten() {
                    lo = lo.min(xl);
                    hi = hi.max(xr);
                }
                edge = next;
                for e in [p, q] {
                    if e.y >= top && e.y <= bottom {
                        lo = lo.min(e.x - r);
                        hi = hi.max(e.x + r);
                    }
                }
                if lo > hi {
                    continue;
                }
                let x0 = (lo.ceil_i64() - 1).max(0);
                let x1 = hi.floor_i64().min(last_col);
                if x0 <= x1 {
                    b.mark_range(y, x0, x1);
                }
            }
        }
    }
}

pub fn rasterize_point<T: Scalar, B: RasterTarget + ?Sized>(b: &mut B, center: Point<T>, radius: T) {
    rasterize_point_with(b, center, radius, Coverage::Conservative);
}

pub fn rasterize_point_with<T: Scalar, B: RasterTarget + ?Sized>(
    b: &mut B,
    center: Point<T>,
    radius: T,
    coverage: Coverage,
) {
    rasterize_segment(b, center, center, radius.max(T::zero()), coverage);
}

pub fn rasterize_polyline<T: Scalar, B: RasterTarget + ?Sized>(
    b: &mut B,
    vertices: &[Point<T>],
    stroke_width: T,
) -> Result<()> {
    rasterize_polyline_with(b, vertices, stroke_width, Coverage::Conservative)
}

pub fn rasterize_polyline_with<T: Scalar, B: RasterTarget + ?Sized>(
    b: &mut B,
    vertices: &[Point<T>],
    stroke_width: T,
    coverage: Coverage,
) -> Result<()> {
    if vertices.len() < 2 {
        return Err(Error::invalid("polyline needs at least two vertices"));
    }
    stroke_path(b, vertices, stroke_width * T::HALF, coverage);
    Ok(())
}

fn stroke_path<T: Scalar, B: RasterTarget + ?Sized>(
    b: &mut B,
    vertices: &[Point<T>],
    half_width: T,
    coverage: Coverage,
) {
    for w in vertices.windows(2) {
        rasterize_segment(b, w[0], w[1], half_width, coverage);
    }
}

/// Pixels covered by a filled rect under `coverage`.
pub fn rect_pixels<T: Scalar>(r: &Rect<T>, coverage: Coverage) -> PixelRect {
    match coverage {
        Coverage::Conservative => PixelRect::touching(r),
        Coverage::CenterSampled => PixelRect::new(
            (r.x0 - T::HALF).ceil_i64(),
            (r.y0 - T::HALF).ceil_i64(),
            (r.x1 - T::HALF).floor_i64(),
            (r.y1 - T::HALF).floor_i64(),
        ),
    }
}

/// Filled rects are written with [`OccupancyBitmap::mark_rect`] using
/// `min_label_height`; outlines mark the pixels touching the four edges.
pub fn rasterize_rect<T: Scalar, B: RasterTarget + ?Sized>(
    b: &mut B,
    r: &Rect<T>,
    filled: bool,
    min_label_height: i64,
) {
    rasterize_rect_with(b, r, filled, min_label_height, Coverage::Conservative);
}

pub fn rasterize_rect_with<T: Scalar, B: RasterTarget + ?Sized>(
    b: &mut B,
    r: &Rect<T>,
    filled: bool,
    min_label_height: i64,
    coverage: Coverage,
) {
    if !r.is_valid() {
        return;
    }
    if filled {
        b.mark_rect(&rect_pixels(r, coverage), min_label_height);
    } else {
        let ring = [
            Point::new(r.x0, r.y0),
            Point::new(r.x1, r.y0),
            Point::new(r.x1, r.y1),
            Point::new(r.x0, r.y1),
            Point::new(r.x0, r.y0),
        ];
        stroke_path(b, &ring, T::zero(), coverage);
    }
}

/// Upper and lower boundary lines of an area, stroke width 1.
pub fn rasterize_area_boundary<T: Scalar, B: RasterTarget + ?Sized>(
    b: &mut B,
    area: &AreaSeries<T>,
    coverage: Coverage,
) {
    let (lower, upper) = area.boundary_lines();
    for line in [lower, upper] {
        if line.len() == 1 {
            rasterize_segment(b, line[0], line[0], T::HALF, coverage);
        } else {
            stroke_path(b, &line, T::HALF, coverage);
        }
    }
}

/// Rasterizes a single mark; transparent marks occupy nothing.
pub fn rasterize_mark<T: Scalar, B: RasterTarget + ?Sized>(
    b: &mut B,
    mark: &Mark<T>,
    min_label_height: i64,
    coverage: Coverage,
) -> Result<()> {
    if !mark.is_visible() {
        return Ok(());
    }
    match &mark.geometry {
        MarkGeometry::Point { center, radius } => {
            rasterize_point_with(b, *center, *radius, coverage)
        }
        MarkGeometry::Polyline {
            vertices,
            stroke_width,
        } => rasterize_polyline_with(b, vertices, *stroke_width, coverage)?,
        MarkGeometry::Rect { rect, filled } => {
            rasterize_rect_with(b, rect, *filled, min_label_height, coverage)
        }
        MarkGeometry::TextBox { rect, .. } => {
            rasterize_rect_with(b, rect, true, min_label_height, coverage)
        }
        MarkGeometry::AreaBoundary { area } => rasterize_area_boundary(b, area, coverage),
    }
    Ok(())
}

/// Rasterizes every mark whose group is in `groups`.
pub fn rasterize_scene<T: Scalar, B: RasterTarget + ?Sized>(
    b: &mut B,
    marks: &[Mark<T>],
    groups: &BTreeSet<String>,
    min_label_height: i64,
) -> Result<()> {
    for mark in marks.iter().filter(|m| groups.contains(&m.group)) {
        rasterize_mark(b, mark, min_label_height, Coverage::Conservative)?;
    }
    Ok(())
}
