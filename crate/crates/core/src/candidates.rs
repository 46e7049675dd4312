//! Candidate label positions.
//!
//! A candidate is an anchor direction relative to the base mark's pixel
//! bounding box plus an outward offset. Outer candidates sit just outside the
//! box (offset 0 means touching it); `inner` candidates sit inside against the
//! anchored edge. Diagonal anchors split the offset evenly across both axes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{PixelRect, PixelSize, Point, Rect};
use crate::scalar::Scalar;

/// Offset used by the built-in position lists.
pub const DEFAULT_OFFSET: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnchorDirection {
    TopLeft,
    Top,
    TopRight,
    Right,
    BottomRight,
    Bottom,
    BottomLeft,
    Left,
    Middle,
}

impl AnchorDirection {
    pub const ALL: [AnchorDirection; 9] = [
        AnchorDirection::TopLeft,
        AnchorDirection::Top,
        AnchorDirection::TopRight,
        AnchorDirection::Right,
        AnchorDirection::BottomRight,
        AnchorDirection::Bottom,
        AnchorDirection::BottomLeft,
        AnchorDirection::Left,
        AnchorDirection::Middle,
    ];

    /// Default preference order of the 8-position model.
    pub const EIGHT_POSITION: [AnchorDirection; 8] = [
        AnchorDirection::TopRight,
        AnchorDirection::Top,
        AnchorDirection::TopLeft,
        AnchorDirection::Left,
        AnchorDirection::BottomLeft,
        AnchorDirection::Bottom,
        AnchorDirection::BottomRight,
        AnchorDirection::Right,
    ];

    /// The four corner positions.
    pub const FOUR_POSITION: [AnchorDirection; 4] = [
        AnchorDirection::TopRight,
        AnchorDirection::TopLeft,
        AnchorDirection::BottomLeft,
        AnchorDirection::BottomRight,
    ];

    /// Unit direction `(dx, dy)`, y pointing down.
    pub const fn direction(self) -> (i64, i64) {
        match self {
            AnchorDirection::TopLeft => (-1, -1),
            AnchorDirection::Top => (0, -1),
            AnchorDirection::TopRight => (1, -1),
            AnchorDirection::Right => (1, 0),
            AnchorDirection::BottomRight => (1, 1),
            AnchorDirection::Bottom => (0, 1),
            AnchorDirection::BottomLeft => (-1, 1),
            AnchorDirection::Left => (-1, 0),
            AnchorDirection::Middle => (0, 0),
        }
    }

    pub const fn is_diagonal(self) -> bool {
        let (dx, dy) = self.direction();
        dx != 0 && dy != 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    rename_all = "camelCase",
    deny_unknown_fields,
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct CandidatePosition<T> {
    pub anchor: AnchorDirection,
    #[serde(default = "T::zero")]
    pub offset: T,
    /// Place inside the base box against the anchored edge.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inner: bool,
}

impl<T: Scalar> CandidatePosition<T> {
    pub fn new(anchor: AnchorDirection, offset: T) -> Self {
        CandidatePosition {
            anchor,
            offset,
            inner: false,
        }
    }

    pub fn inner(anchor: AnchorDirection, offset: T) -> Self {
        CandidatePosition {
            anchor,
            offset,
            inner: true,
        }
    }

    pub fn bounds(&self, base: &PixelRect, size: PixelSize) -> PixelRect {
        if self.inner {
            inner_label_bounds(self.anchor, self.offset, base, size)
        } else {
            label_bounds(self.anchor, self.offset, base, size)
        }
    }
}

/// Per-axis pixel displacement for `offset` along `anchor`.
fn axis_offset<T: Scalar>(anchor: AnchorDirection, offset: T) -> i64 {
    let offset = offset.max(T::zero());
    if anchor.is_diagonal() {
        (offset * T::FRAC_1_SQRT_2()).floor_i64()
    } else {
        offset.floor_i64()
    }
}

fn centered_start(lo: i64, hi: i64, len: i64) -> i64 {
    (lo + hi + 1 - len).div_euclid(2)
}

/// The label rectangle placed outside `base` in the `anchor` direction,
/// pushed out by `offset`. `Middle` centers on `base` and ignores the offset.
pub fn label_bounds<T: Scalar>(
    anchor: AnchorDirection,
    offset: T,
    base: &PixelRect,
    size: PixelSize,
) -> PixelRect {
    let (dx, dy) = anchor.direction();
    let d = axis_offset(anchor, offset);
    let x0 = match dx {
        -1 => base.x0 - d - size.width,
        1 => base.x1 + 1 + d,
        _ => centered_start(base.x0, base.x1, size.width),
    };
    let y0 = match dy {
        -1 => base.y0 - d - size.height,
        1 => base.y1 + 1 + d,
        _ => centered_start(base.y0, base.y1, size.height),
    };
    PixelRect::with_size(x0, y0, size)
}

/// The label rectangle inside `base`, against the anchored edge(s).
pub fn inner_label_bounds<T: Scalar>(
    anchor: AnchorDirection,
    offset: T,
    base: &PixelRect,
    size: PixelSize,
) -> PixelRect {
    let (dx, dy) = anchor.direction();
    let d = axis_offset(anchor, offset);
    let x0 = match dx {
        -1 => base.x0 + d,
        1 => base.x1 - d - size.width + 1,
        _ => centered_start(base.x0, base.x1, size.width),
    };
    let y0 = match dy {
        -1 => base.y0 + d,
        1 => base.y1 - d - size.height + 1,
        _ => centered_start(base.y0, base.y1, size.height),
    };
    PixelRect::with_size(x0, y0, size)
}

/// Candidate rects in preference order.
pub fn candidate_sequence<T: Scalar>(
    base: &PixelRect,
    size: PixelSize,
    positions: &[CandidatePosition<T>],
) -> Result<Vec<PixelRect>> {
    if positions.is_empty() {
        return Err(Error::invalid("candidate position list is empty"));
    }
    Ok(positions.iter().map(|p| p.bounds(base, size)).collect())
}

/// The 8-position model at a uniform offset.
pub fn eight_positions<T: Scalar>(offset: T) -> Vec<CandidatePosition<T>> {
    AnchorDirection::EIGHT_POSITION
        .iter()
        .map(|&a| CandidatePosition::new(a, offset))
        .collect()
}

pub fn four_positions<T: Scalar>(offset: T) -> Vec<CandidatePosition<T>> {
    AnchorDirection::FOUR_POSITION
        .iter()
        .map(|&a| CandidatePosition::new(a, offset))
        .collect()
}

/// Pairs parallel anchor and offset lists. A single offset applies to every
/// anchor; otherwise both lists must have the same length.
pub fn zip_parallel<T: Scalar>(
    anchors: &[AnchorDirection],
    offsets: &[T],
) -> Result<Vec<CandidatePosition<T>>> {
    match offsets.len() {
        0 => Ok(anchors
            .iter()
            .map(|&a| CandidatePosition::new(a, T::zero()))
            .collect()),
        1 => Ok(anchors
            .iter()
            .map(|&a| CandidatePosition::new(a, offsets[0]))
            .collect()),
        n if n == anchors.len() => Ok(anchors
            .iter()
            .zip(offsets)
            .map(|(&a, &o)| CandidatePosition::new(a, o))
            .collect()),
        n => Err(Error::invalid(format!(
            "{} anchors cannot be paired with {n} offsets",
            anchors.len()
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineAnchor {
    Begin,
    #[default]
    End,
}

impl LineAnchor {
    pub const fn directions(self) -> [AnchorDirection; 3] {
        match self {
            LineAnchor::End => [
                AnchorDirection::TopRight,
                AnchorDirection::Right,
                AnchorDirection::BottomRight,
            ],
            LineAnchor::Begin => [
                AnchorDirection::TopLeft,
                AnchorDirection::Left,
                AnchorDirection::BottomLeft,
            ],
        }
    }
}

/// Pixel box of a line's stroke around its begin or end vertex.
pub fn line_end_base<T: Scalar>(
    line: &[Point<T>],
    stroke_width: T,
    anchor: LineAnchor,
) -> Result<PixelRect> {
    let v = match anchor {
        LineAnchor::Begin => line.first(),
        LineAnchor::End => line.last(),
    }
    .ok_or_else(|| Error::invalid("line has no vertices"))?;
    let half = stroke_width.max(T::zero()) * T::HALF;
    Ok(PixelRect::touching(&Rect::new(v.x, v.y, v.x, v.y).inflated(half)))
}

/// Candidates at the end (top-right, right, bottom-right of the last vertex)
/// or the beginning (top-left, left, bottom-left of the first vertex).
pub fn line_end_candidates<T: Scalar>(
    line: &[Point<T>],
    stroke_width: T,
    anchor: LineAnchor,
    size: PixelSize,
    offset: T,
) -> Result<Vec<(CandidatePosition<T>, PixelRect)>> {
    let base = line_end_base(line, stroke_width, anchor)?;
    Ok(anchor
        .directions()
        .iter()
        .map(|&a| {
            let p = CandidatePosition::new(a, offset);
            (p, p.bounds(&base, size))
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Vertical,
    Horizontal,
}

impl Orientation {
    /// Longer axis of a bar's box.
    pub fn of_bar(base: &PixelRect) -> Orientation {
        if base.height() >= base.width() {
            Orientation::Vertical
        } else {
            Orientation::Horizontal
        }
    }
}

/// How labels of a mark type are positioned when no positions are configured.
#[derive(Debug, Clone, PartialEq)]
pub enum DefaultStrategy<T> {
    Positions(Vec<CandidatePosition<T>>),
    LineEnd,
    Area,
}

pub const MARK_TYPES: [&str; 7] = ["bar", "line", "rect", "circle", "point", "square", "area"];

pub fn default_positions<T: Scalar>(
    mark_type: &str,
    orient: Orientation,
) -> Result<DefaultStrategy<T>> {
    let offset = T::lit(DEFAULT_OFFSET);
    Ok(match mark_type {
        "bar" => {
            let a = match orient {
                Orientation::Vertical => AnchorDirection::Top,
                Orientation::Horizontal => AnchorDirection::Right,
            };
            DefaultStrategy::Positions(vec![
                CandidatePosition::new(a, offset),
                CandidatePosition::inner(a, offset),
            ])
        }
        "line" => DefaultStrategy::LineEnd,
        "rect" => DefaultStrategy::Positions(vec![CandidatePosition::new(
            AnchorDirection::Middle,
            T::zero(),
        )]),
        "circle" | "point" | "square" => DefaultStrategy::Positions(eight_positions(offset)),
        "area" => DefaultStrategy::Area,
        other => {
            return Err(Error::invalid(format!(
                "unknown mark type `{other}`, expected one of {MARK_TYPES:?}"
            )))
        }
    })
}

/// Side of a base box for the discretized slider model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Top,
    Right,
    Bottom,
    Left,
}

/// Slider candidates along one side of `base`: the label touches the side
/// (pushed out by `offset`) and slides along it in steps of `step` pixels,
/// centered first, then alternating outward (+step, -step, +2step, ...), as
/// long as it still overlaps the side's extent.
pub fn slider_candidates(
    base: &PixelRect,
    size: PixelSize,
    side: Side,
    step: i64,
    offset: i64,
) -> Vec<PixelRect> {
    let step = step.max(1);
    let horizontal = matches!(side, Side::Top | Side::Bottom);
    let (lo, hi, len) = if horizontal {
        (base.x0, base.x1, size.width)
    } else {
        (base.y0, base.y1, size.height)
    };
    // Slide range keeps at least one pixel of overlap with [lo, hi].
    let (min_start, max_start) = (lo - len + 1, hi);
    let center = centered_start(lo, hi, len);
    let fixed = match side {
        Side::Top => base.y0 - offset - size.height,
        Side::Bottom => base.y1 + 1 + offset,
        Side::Left => base.x0 - offset - size.width,
        Side::Right => base.x1 + 1 + offset,
    };
    let mut starts = vec![center];
    let mut k = 1;
    loop {
        let mut any = false;
        for s in [center + k * step, center - k * step] {
            if (min_start..=max_start).contains(&s) {
                starts.push(s);
                any = true;
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    starts
        .into_iter()
        .map(|s| {
            if horizontal {
                PixelRect::with_size(s, fixed, size)
            } else {
                PixelRect::with_size(fixed, s, size)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: PixelRect = PixelRect::new(10, 10, 14, 14);

    #[test]
    fn top_anchor_centers_and_touches() {
        let r = label_bounds(AnchorDirection::Top, 0.0, &BASE, PixelSize::new(8, 4));
        assert_eq!(r, PixelRect::new(8, 6, 15, 9));
    }

    #[test]
    fn middle_ignores_offset() {
        let size = PixelSize::new(3, 3);
        let a = label_bounds(AnchorDirection::Middle, 0.0, &BASE, size);
        let b = label_bounds(AnchorDirection::Middle, 9.0, &BASE, size);
        assert_eq!(a, b);
        assert_eq!(a, PixelRect::new(11, 11, 13, 13));
    }

    #[test]
    fn offsets_push_outward() {
        let size = PixelSize::new(4, 2);
        let r = label_bounds(AnchorDirection::Right, 3.0, &BASE, size);
        assert_eq!(r.x0, BASE.x1 + 4);
        let r = label_bounds(AnchorDirection::TopLeft, 3.0, &BASE, size);
        // 3 / sqrt(2) = 2.12 -> 2 pixels on each axis.
        assert_eq!((r.x1, r.y1), (BASE.x0 - 3, BASE.y0 - 3));
    }

    #[test]
    fn inner_positions_stay_inside() {
        let bar = PixelRect::new(0, 0, 9, 49);
        let r = inner_label_bounds(AnchorDirection::Top, 1.0, &bar, PixelSize::new(6, 4));
        assert!(bar.contains_rect(&r));
        assert_eq!(r.y0, 1);
    }

    #[test]
    fn default_strategies() {
        assert_eq!(
            default_positions::<f64>("rect", Orientation::Vertical).unwrap(),
            DefaultStrategy::Positions(vec![CandidatePosition::new(AnchorDirection::Middle, 0.0)])
        );
        let DefaultStrategy::Positions(p) =
            default_positions::<f64>("point", Orientation::Vertical).unwrap()
        else {
            panic!()
        };
        let anchors: Vec<_> = p.iter().map(|c| c.anchor).collect();
        assert_eq!(anchors, AnchorDirection::EIGHT_POSITION.to_vec());
        let DefaultStrategy::Positions(p) =
            default_positions::<f64>("bar", Orientation::Vertical).unwrap()
        else {
            panic!()
        };
        assert_eq!(p[0].anchor, AnchorDirection::Top);
        assert!(!p[0].inner && p[1].inner);
        assert_eq!(
            default_positions::<f64>("line", Orientation::Vertical).unwrap(),
            DefaultStrategy::LineEnd
        );
        assert!(default_positions::<f64>("pie", Orientation::Vertical).is_err());
    }

    #[test]
    fn sequence_keeps_order_and_rejects_empty() {
        let pos = four_positions(0.0f64);
        let rects = candidate_sequence(&BASE, PixelSize::new(2, 2), &pos).unwrap();
        assert_eq!(rects.len(), 4);
        assert_eq!(rects[0], label_bounds(AnchorDirection::TopRight, 0.0, &BASE, PixelSize::new(2, 2)));
        let single = [CandidatePosition::new(AnchorDirection::Left, 0.0f64)];
        assert_eq!(candidate_sequence(&BASE, PixelSize::new(2, 2), &single).unwrap().len(), 1);
        assert!(candidate_sequence::<f64>(&BASE, PixelSize::new(2, 2), &[]).is_err());
    }

    #[test]
    fn line_end_mirrors_begin() {
        let line = [Point::new(0.5, 5.5), Point::new(20.5, 9.5)];
        let size = PixelSize::new(6, 3);
        let end = line_end_candidates(&line, 1.0, LineAnchor::End, size, 0.0).unwrap();
        let anchors: Vec<_> = end.iter().map(|c| c.0.anchor).collect();
        assert_eq!(
            anchors,
            [AnchorDirection::TopRight, AnchorDirection::Right, AnchorDirection::BottomRight]
        );
        assert!(end.iter().all(|(_, r)| r.x0 > 20));
        let begin = line_end_candidates(&line, 1.0, LineAnchor::Begin, size, 0.0).unwrap();
        assert!(begin.iter().all(|(_, r)| r.x1 < 0));
        let dot = [Point::new(3.5, 3.5)];
        let a = line_end_base(&dot, 1.0, LineAnchor::Begin).unwrap();
        let b = line_end_base(&dot, 1.0, LineAnchor::End).unwrap();
        assert_eq!(a, b);
        assert!(line_end_candidates::<f64>(&[], 1.0, LineAnchor::End, size, 0.0).is_err());
    }

    #[test]
    fn parallel_lists() {
        let a = [AnchorDirection::Top, AnchorDirection::Left];
        assert_eq!(zip_parallel(&a, &[2.0]).unwrap()[1].offset, 2.0);
        assert_eq!(zip_parallel(&a, &[2.0, 3.0]).unwrap()[1].offset, 3.0);
        assert!(zip_parallel(&a, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn slider_is_center_outward() {
        let rects = slider_candidates(&BASE, PixelSize::new(4, 2), Side::Top, 2, 0);
        let xs: Vec<i64> = rects.iter().map(|r| r.x0).collect();
        assert_eq!(xs, vec![10, 12, 8, 14]);
        assert!(rects.iter().all(|r| r.y1 == BASE.y0 - 1));
        assert!(rects.iter().all(|r| r.x1 >= BASE.x0 && r.x0 <= BASE.x1));
    }
}
