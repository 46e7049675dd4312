//! Stacked-area labeling.
//!
//! Each area is a run of `(x, yLower, yUpper)` pairs; its boundaries are the
//! piecewise-linear lines through the lower and upper values. A label is
//! centered on the candidate pixel that admits the tallest label-shaped
//! rectangle clear of all boundaries and previously placed labels
//! ([`fit_scale`]). Candidates are either every interior pixel
//! ([`AreaMethod::FloodFill`]) or only the vertical runs at the data points
//! ([`AreaMethod::ReducedSearch`]).

use serde::{Deserialize, Serialize};

use crate::bitmap::OccupancyBitmap;
use crate::error::{Error, Result};
use crate::geom::{PixelRect, PixelSize, Point, Rect};
use crate::greedy::{AreaMethod, Placement};
use crate::raster::{rasterize_area_boundary, Coverage};
use crate::scalar::Scalar;

/// Lower and upper boundary of an area at one horizontal position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    from = "[T; 3]",
    into = "[T; 3]",
    bound(serialize = "T: Serialize + Copy", deserialize = "T: Deserialize<'de>")
)]
pub struct AreaPair<T> {
    pub x: T,
    pub y_lower: T,
    pub y_upper: T,
}

impl<T> From<[T; 3]> for AreaPair<T> {
    fn from([x, y_lower, y_upper]: [T; 3]) -> Self {
        AreaPair {
            x,
            y_lower,
            y_upper,
        }
    }
}

impl<T> From<AreaPair<T>> for [T; 3] {
    fn from(p: AreaPair<T>) -> Self {
        [p.x, p.y_lower, p.y_upper]
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(
    transparent,
    bound(serialize = "T: Serialize + Copy", deserialize = "T: Deserialize<'de>")
)]
pub struct AreaSeries<T> {
    pub pairs: Vec<AreaPair<T>>,
}

impl<T: Scalar> AreaSeries<T> {
    pub fn new(pairs: Vec<AreaPair<T>>) -> Result<Self> {
        let s = AreaSeries { pairs };
        s.validate()?;
        Ok(s)
    }

    pub fn from_triples(triples: &[[T; 3]]) -> Result<Self> {
        Self::new(triples.iter().map(|&t| t.into()).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.pairs.is_empty() {
            return Err(Error::invalid("area needs at least one pair"));
        }
        if self.pairs.windows(2).any(|w| !(w[0].x < w[1].x)) {
            return Err(Error::invalid("area x values must be strictly increasing"));
        }
        if self.pairs.iter().any(|p| !(p.y_lower <= p.y_upper)) {
            return Err(Error::invalid("area pairs need yLower <= yUpper"));
        }
        Ok(())
    }

    pub fn bounds(&self) -> Rect<T> {
        let mut r = Rect::bounding(
            self.pairs
                .iter()
                .flat_map(|p| [Point::new(p.x, p.y_lower), Point::new(p.x, p.y_upper)]),
        )
        .unwrap_or_default();
        r.y0 = r.y0.min(r.y1);
        r
    }

    pub fn translated(&self, dx: T, dy: T) -> Self {
        AreaSeries {
            pairs: self
                .pairs
                .iter()
                .map(|p| AreaPair {
                    x: p.x + dx,
                    y_lower: p.y_lower + dy,
                    y_upper: p.y_upper + dy,
                })
                .collect(),
        }
    }

    /// `(lower, upper)` boundary polylines.
    pub fn boundary_lines(&self) -> (Vec<Point<T>>, Vec<Point<T>>) {
        let lower = self.pairs.iter().map(|p| Point::new(p.x, p.y_lower)).collect();
        let upper = self.pairs.iter().map(|p| Point::new(p.x, p.y_upper)).collect();
        (lower, upper)
    }

    /// Linearly interpolated `(lower, upper)` at `x`; `None` outside the pair range.
    pub fn bounds_at(&self, x: T) -> Option<(T, T)> {
        let first = self.pairs.first()?;
        let last = self.pairs.last()?;
        if x < first.x || x > last.x {
            return None;
        }
        let i = self.pairs.partition_point(|p| p.x < x);
        if i == 0 {
            return Some((first.y_lower, first.y_upper));
        }
        let (a, b) = (self.pairs[i - 1], self.pairs[i]);
        let t = (x - a.x) / (b.x - a.x);
        Some((
            a.y_lower + t * (b.y_lower - a.y_lower),
            a.y_upper + t * (b.y_upper - a.y_upper),
        ))
    }

    /// Pixel columns whose centers fall inside the pair range.
    fn columns(&self) -> std::ops::RangeInclusive<i64> {
        let first = self.pairs[0].x;
        let last = self.pairs[self.pairs.len() - 1].x;
        (first - T::HALF).ceil_i64()..=(last - T::HALF).floor_i64()
    }

    /// Pixels whose centers lie strictly between the boundaries, in
    /// column-major order (x, then y ascending).
    pub fn interior_pixels(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for x in self.columns() {
            let cx = T::from_i64_lossy(x) + T::HALF;
            let Some((lo, hi)) = self.bounds_at(cx) else {
                continue;
            };
            for y in (lo - T::HALF).floor_i64()..=(hi - T::HALF).ceil_i64() {
                let cy = T::from_i64_lossy(y) + T::HALF;
                if lo < cy && cy < hi {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Whether the center of pixel `(x, y)` lies in the closed area.
    pub fn contains_pixel_center(&self, x: i64, y: i64) -> bool {
        let cx = T::from_i64_lossy(x) + T::HALF;
        let cy = T::from_i64_lossy(y) + T::HALF;
        self.bounds_at(cx).is_some_and(|(lo, hi)| lo <= cy && cy <= hi)
    }

    /// One vertical pixel run per pair: the column whose center is nearest
    /// the pair's x (kept inside the pair range), rows whose centers lie in
    /// the closed boundary interval there. Endpoints are included.
    pub fn reduced_search_pixels(&self) -> Vec<(i64, i64)> {
        let cols = self.columns();
        if cols.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut last_col = None;
        for p in &self.pairs {
            let x = p.x.floor_i64().clamp(*cols.start(), *cols.end());
            if last_col == Some(x) {
                continue;
            }
            last_col = Some(x);
            let cx = T::from_i64_lossy(x) + T::HALF;
            let Some((lo, hi)) = self.bounds_at(cx) else {
                continue;
            };
            for y in (lo - T::HALF).ceil_i64()..=(hi - T::HALF).floor_i64() {
                out.push((x, y));
            }
        }
        out
    }

    /// The pair with the largest vertical extent (first on ties).
    pub fn widest_pair(&self) -> &AreaPair<T> {
        let mut best = &self.pairs[0];
        for p in &self.pairs[1..] {
            if p.y_upper - p.y_lower > best.y_upper - best.y_lower {
                best = p;
            }
        }
        best
    }
}

/// Rectangle of height `h` and width `round(h * aspect)` (at least 1)
/// centered on pixel `center`.
pub fn fit_rect<T: Scalar>(center: (i64, i64), aspect: T, h: i64) -> PixelRect {
    let w = (T::from_i64_lossy(h) * aspect).round().to_i64().unwrap_or(1).max(1);
    PixelRect::centered(
        T::from_i64_lossy(center.0) + T::HALF,
        T::from_i64_lossy(center.1) + T::HALF,
        PixelSize::new(w, h),
    )
}

/// Largest integral height `h <= max_h` whose [`fit_rect`] is unoccupied,
/// by binary search. Height 0 always fits, so an occupied center yields 0.
pub fn fit_scale<T: Scalar>(b: &OccupancyBitmap, center: (i64, i64), aspect: T, max_h: i64) -> i64 {
    let (mut lo, mut hi) = (0, max_h.max(0));
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if b.rect_occupied(&fit_rect(center, aspect, mid)) {
            hi = mid - 1;
        } else {
            lo = mid;
        }
    }
    lo
}

fn fits<T: Scalar>(b: &OccupancyBitmap, center: (i64, i64), aspect: T, h: i64) -> bool {
    !b.rect_occupied(&fit_rect(center, aspect, h))
}

pub fn rasterize_area_boundaries<T: Scalar>(b: &mut OccupancyBitmap, areas: &[AreaSeries<T>]) {
    for area in areas {
        rasterize_area_boundary(b, area, Coverage::Conservative);
    }
}

/// A label to be centered inside one area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaLabel {
    pub item_id: usize,
    pub area: usize,
    pub size: PixelSize,
}

/// Best candidate center: highest score, then smallest x, then smallest y.
fn best_center<T: Scalar>(
    scores: &OccupancyBitmap,
    candidates: &mut [(i64, i64)],
    aspect: T,
    max_h: i64,
) -> Option<((i64, i64), i64)> {
    candidates.sort_unstable();
    let mut best: Option<((i64, i64), i64)> = None;
    for &c in candidates.iter() {
        let floor = best.map_or(0, |(_, s)| s);
        if best.is_some() && (floor >= max_h || !fits(scores, c, aspect, floor + 1)) {
            continue;
        }
        let s = fit_scale(scores, c, aspect, max_h);
        if best.is_none() || s > floor {
            best = Some((c, s));
        }
    }
    best
}

/// Candidate centers of one area for `method`.
pub fn candidate_centers<T: Scalar>(area: &AreaSeries<T>, method: AreaMethod) -> Vec<(i64, i64)> {
    match method {
        AreaMethod::FloodFill => area.interior_pixels(),
        AreaMethod::ReducedSearch => area.reduced_search_pixels(),
        AreaMethod::Naive => Vec::new(),
    }
}

/// Places one label per area, in input order.
///
/// The score bitmap holds all boundaries plus placed labels; a label that
/// cannot fit inside its area is still placed at its best center as long as
/// it stays clear of earlier labels.
pub fn place_area_labels<T: Scalar>(
    width: i64,
    height: i64,
    areas: &[AreaSeries<T>],
    labels: &[AreaLabel],
    method: AreaMethod,
    word_bits: u32,
) -> Result<Vec<Placement<T>>> {
    let mut scores = OccupancyBitmap::new(width, height, word_bits)?;
    let mut placed = OccupancyBitmap::new(width, height, word_bits)?;
    rasterize_area_boundaries(&mut scores, areas);

    let mut out = Vec::with_capacity(labels.len());
    for label in labels {
        let area = areas
            .get(label.area)
            .ok_or_else(|| Error::invalid(format!("label references missing area {}", label.area)))?;
        if method == AreaMethod::Naive {
            let p = area.widest_pair();
            let rect = PixelRect::centered(p.x, (p.y_lower + p.y_upper) * T::HALF, label.size);
            out.push(Placement::placed(label.item_id, rect, None, None));
            continue;
        }
        let aspect = T::from_i64_lossy(label.size.width) / T::from_i64_lossy(label.size.height);
        let max_h = area.bounds().height().ceil_i64().max(1);
        let mut candidates = candidate_centers(area, method);
        let Some((center, score)) = best_center(&scores, &mut candidates, aspect, max_h) else {
            out.push(Placement::omitted(label.item_id, Some("area has no candidate pixels")));
            continue;
        };
        let rect = PixelRect::centered(
            T::from_i64_lossy(center.0) + T::HALF,
            T::from_i64_lossy(center.1) + T::HALF,
            label.size,
        );
        if score < label.size.height && placed.rect_occupied(&rect) {
            out.push(Placement::omitted(label.item_id, Some("overlaps an earlier area label")));
            continue;
        }
        scores.fill_rect(&rect);
        placed.fill_rect(&rect);
        let mut p = Placement::placed(label.item_id, rect, None, None);
        p.score = Some(score);
        out.push(p);
    }
    Ok(out)
}
