//! One-pass greedy label placement.
//!
//! 1. Rasterize the marks labels must avoid into an occupancy bitmap.
//! 2. For each item in sort order, walk its candidates in preference order,
//!    take the first one whose rect is free, and mark that rect occupied.
//!
//! Placements are never revisited. The control flow is shared with the
//! particle baselines through [`OccupancyIndex`].

use std::collections::BTreeSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bitmap::{OccupancyBitmap, DEFAULT_WORD_BITS};
use crate::candidates::{
    default_positions, zip_parallel, AnchorDirection, CandidatePosition, DefaultStrategy,
    LineAnchor, Orientation, DEFAULT_OFFSET, MARK_TYPES,
};
use crate::error::{Error, Result};
use crate::geom::{PixelRect, PixelSize};
use crate::raster::{rasterize_mark, Coverage, Mark, MarkGeometry, MarkKind};
use crate::scalar::Scalar;
use crate::scene::Scene;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AreaMethod {
    FloodFill,
    #[default]
    ReducedSearch,
    Naive,
}

/// Order in which items are placed. Ties keep input order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SortOrder {
    #[default]
    Input,
    /// Highest priority first; items without a priority go last.
    Priority,
    PriorityAscending,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    rename_all = "camelCase",
    deny_unknown_fields,
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct LabelConfig<T> {
    /// Candidate positions in preference order; defaults depend on the mark type.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<CandidatePosition<T>>>,
    /// Parallel anchor list, paired with `offset` (alternative to `positions`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<AnchorDirection>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<Vec<T>>,
    /// Labels must avoid all base marks.
    #[serde(default = "default_true")]
    pub avoid_base_mark: bool,
    /// Mark groups labels must avoid in addition to base marks.
    #[serde(default)]
    pub avoid: Vec<String>,
    #[serde(default)]
    pub line_anchor: LineAnchor,
    #[serde(default)]
    pub method: AreaMethod,
    /// Pixels labels may extend past the chart on every side.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub padding: Option<T>,
    #[serde(default)]
    pub sort: SortOrder,
    /// Mark type of the base marks (`bar`, `line`, `rect`, `point`, ...).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mark_type: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orient: Option<Orientation>,
}

fn default_true() -> bool {
    true
}

impl<T: Scalar> Default for LabelConfig<T> {
    fn default() -> Self {
        LabelConfig {
            positions: None,
            anchor: None,
            offset: None,
            avoid_base_mark: true,
            avoid: Vec::new(),
            line_anchor: LineAnchor::End,
            method: AreaMethod::ReducedSearch,
            padding: None,
            sort: SortOrder::Input,
            mark_type: None,
            orient: None,
        }
    }
}

impl<T: Scalar> LabelConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if let Some(p) = self.padding {
            if !(p >= T::zero()) {
                return Err(Error::invalid("padding must be non-negative"));
            }
        }
        if self.positions.is_some() && (self.anchor.is_some() || self.offset.is_some()) {
            return Err(Error::invalid(
                "use either `positions` or `anchor`/`offset`, not both",
            ));
        }
        if let Some(positions) = self.explicit_positions()? {
            if positions.is_empty() {
                return Err(Error::invalid("position list is empty"));
            }
            if positions.iter().any(|p| !(p.offset >= T::zero())) {
                return Err(Error::invalid("offsets must be non-negative"));
            }
        }
        if let Some(t) = &self.mark_type {
            if !MARK_TYPES.contains(&t.as_str()) {
                return Err(Error::invalid(format!("unknown mark type `{t}`")));
            }
        }
        Ok(())
    }

    /// Configured positions, zipping Vega-style parallel lists when given.
    pub fn explicit_positions(&self) -> Result<Option<Vec<CandidatePosition<T>>>> {
        if let Some(p) = &self.positions {
            return Ok(Some(p.clone()));
        }
        match (&self.anchor, &self.offset) {
            (Some(a), o) => Ok(Some(zip_parallel(a, o.as_deref().unwrap_or(&[]))?)),
            (None, Some(o)) => Ok(Some(zip_parallel(
                &AnchorDirection::EIGHT_POSITION,
                o,
            )?)),
            (None, None) => Ok(None),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlacementStatus {
    Placed,
    Omitted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    rename_all = "camelCase",
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct Placement<T> {
    pub item_id: usize,
    pub status: PlacementStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rect: Option<PixelRect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor_used: Option<CandidatePosition<T>>,
    /// Index of the chosen candidate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<usize>,
    /// Fitted height for area labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl<T: Scalar> Placement<T> {
    pub fn placed(
        item_id: usize,
        rect: PixelRect,
        anchor_used: Option<CandidatePosition<T>>,
        candidate: Option<usize>,
    ) -> Self {
        Placement {
            item_id,
            status: PlacementStatus::Placed,
            rect: Some(rect),
            anchor_used,
            candidate,
            score: None,
            diagnostic: None,
        }
    }

    pub fn omitted(item_id: usize, diagnostic: Option<&str>) -> Self {
        Placement {
            item_id,
            status: PlacementStatus::Omitted,
            rect: None,
            anchor_used: None,
            candidate: None,
            score: None,
            diagnostic: diagnostic.map(str::to_owned),
        }
    }

    pub fn is_placed(&self) -> bool {
        self.status == PlacementStatus::Placed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventResult {
    Placed,
    Occupied,
    OutOfBounds,
}

/// One candidate test. Rects are in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlacementEvent {
    pub item_id: usize,
    pub candidate: usize,
    pub rect: PixelRect,
    pub result: EventResult,
}

/// Writes events as JSON lines.
pub fn write_event_log<W: Write>(events: &[PlacementEvent], mut out: W) -> Result<()> {
    for e in events {
        serde_json::to_writer(&mut out, e)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Occupancy structure consulted by the greedy loop.
pub trait OccupancyIndex {
    fn is_free(&self, rect: &PixelRect) -> bool;
    fn occupy(&mut self, rect: &PixelRect);
}

/// The occupancy bitmap as a greedy index; labels are written with row skipping.
#[derive(Debug, Clone)]
pub struct BitmapIndex {
    pub bitmap: OccupancyBitmap,
    pub min_label_height: i64,
}

impl OccupancyIndex for BitmapIndex {
    fn is_free(&self, rect: &PixelRect) -> bool {
        !self.bitmap.rect_occupied(rect)
    }

    fn occupy(&mut self, rect: &PixelRect) {
        self.bitmap.mark_rect(rect, self.min_label_height);
    }
}

/// One item's ordered candidates, in padded coordinates.
#[derive(Debug, Clone)]
pub struct Job<T> {
    pub item_id: usize,
    pub size: PixelSize,
    pub candidates: Vec<(CandidatePosition<T>, PixelRect)>,
}

/// Everything a greedy engine needs, with the chart padded and translated so
/// the padded area starts at pixel `(0, 0)`.
#[derive(Debug, Clone)]
pub struct PreparedRun<T> {
    pub pad: i64,
    pub width: i64,
    pub height: i64,
    /// Marks to avoid, translated into padded coordinates.
    pub avoid_marks: Vec<Mark<T>>,
    /// Mark items in placement order.
    pub jobs: Vec<Job<T>>,
    /// Items rejected before placement (e.g. larger than the padded chart).
    pub rejected: Vec<Placement<T>>,
    pub min_label_height: i64,
    pub min_label_width: i64,
    pub max_label_extent: i64,
}

impl<T: Scalar> PreparedRun<T> {
    pub fn bounds(&self) -> PixelRect {
        PixelRect::new(0, 0, self.width - 1, self.height - 1)
    }
}

fn inferred_mark_type<T: Scalar>(mark: &Mark<T>) -> Result<&'static str> {
    match mark.kind() {
        MarkKind::Point => Ok("point"),
        MarkKind::Polyline => Ok("line"),
        MarkKind::Rect | MarkKind::TextBox => Ok("rect"),
        MarkKind::AreaBoundary => Err(Error::invalid(
            "area labels must reference `areas`, not an areaBoundary mark",
        )),
    }
}

/// Effective padding in whole pixels.
pub fn effective_padding<T: Scalar>(scene: &Scene<T>, config: &LabelConfig<T>) -> i64 {
    if let Some(p) = config.padding {
        return p.ceil_i64().max(0);
    }
    let has_lines = scene.items.iter().any(|item| {
        let ty = config.mark_type.as_deref().or_else(|| {
            item.mark
                .and_then(|m| scene.marks.get(m))
                .and_then(|m| inferred_mark_type(m).ok())
        });
        item.mark.is_some() && ty == Some("line")
    });
    if !has_lines {
        return 0;
    }
    let extent = match config.orient.unwrap_or(Orientation::Vertical) {
        Orientation::Vertical => scene.width,
        Orientation::Horizontal => scene.height,
    };
    (T::from_i64_lossy(extent) * T::lit(0.2)).ceil_i64()
}

/// Marks avoided by labels: the configured groups plus, if `avoidBaseMark`,
/// every base mark; without it base marks are left out entirely.
pub fn avoided_mark_indices<T: Scalar>(scene: &Scene<T>, config: &LabelConfig<T>) -> Vec<usize> {
    let groups: BTreeSet<&str> = config.avoid.iter().map(String::as_str).collect();
    let base: BTreeSet<usize> = scene.items.iter().filter_map(|i| i.mark).collect();
    (0..scene.marks.len())
        .filter(|i| {
            if base.contains(i) {
                config.avoid_base_mark
            } else {
                groups.contains(scene.marks[*i].group.as_str())
            }
        })
        .collect()
}

fn sorted_items<T: Scalar>(scene: &Scene<T>, order: SortOrder) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..scene.items.len()).collect();
    let prio = |i: usize| scene.items[i].priority;
    match order {
        SortOrder::Input => {}
        SortOrder::Priority => ids.sort_by(|&a, &b| match (prio(a), prio(b)) {
            (Some(x), Some(y)) => y.partial_cmp(&x).unwrap_or(std::cmp::Ordering::Equal),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        }),
        SortOrder::PriorityAscending => ids.sort_by(|&a, &b| match (prio(a), prio(b)) {
            (Some(x), Some(y)) => x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        }),
        SortOrder::Text => ids.sort_by(|&a, &b| scene.items[a].text.cmp(&scene.items[b].text)),
    }
    ids
}

/// Builds candidates for every mark item of `scene`.
pub fn prepare<T: Scalar>(scene: &Scene<T>, config: &LabelConfig<T>) -> Result<PreparedRun<T>> {
    config.validate()?;
    let pad = effective_padding(scene, config);
    let shift = T::from_i64_lossy(pad);
    let width = scene.width + 2 * pad;
    let height = scene.height + 2 * pad;
    let bounds = PixelRect::new(0, 0, width - 1, height - 1);
    let explicit = config.explicit_positions()?;

    let avoid_marks = avoided_mark_indices(scene, config)
        .into_iter()
        .map(|i| scene.marks[i].translated(shift, shift))
        .collect();

    let mut jobs = Vec::new();
    let mut rejected = Vec::new();
    for item_id in sorted_items(scene, config.sort) {
        let item = &scene.items[item_id];
        let Some(mark_id) = item.mark else {
            continue;
        };
        let mark = scene
            .marks
            .get(mark_id)
            .ok_or_else(|| Error::invalid(format!("item {item_id} references missing mark")))?
            .translated(shift, shift);
        let size = scene.label_size(item);
        if size.width > width || size.height > height {
            rejected.push(Placement::omitted(
                item_id,
                Some("label is larger than the padded chart"),
            ));
            continue;
        }
        let mark_type = match &config.mark_type {
            Some(t) => t.as_str(),
            None => inferred_mark_type(&mark)?,
        };
        let line = match &mark.geometry {
            MarkGeometry::Polyline {
                vertices,
                stroke_width,
            } if mark_type == "line" => Some((vertices, *stroke_width)),
            _ => None,
        };
        let base = match line {
            Some((vertices, stroke)) => {
                crate::candidates::line_end_base(vertices, stroke, config.line_anchor)?
            }
            None => mark.pixel_bounds(),
        };
        let positions = match &explicit {
            Some(p) => p.clone(),
            None => {
                let orient = config.orient.unwrap_or_else(|| Orientation::of_bar(&base));
                match default_positions::<T>(mark_type, orient)? {
                    DefaultStrategy::Positions(p) => p,
                    DefaultStrategy::LineEnd => config
                        .line_anchor
                        .directions()
                        .iter()
                        .map(|&a| CandidatePosition::new(a, T::lit(DEFAULT_OFFSET)))
                        .collect(),
                    DefaultStrategy::Area => {
                        return Err(Error::invalid(format!(
                            "item {item_id}: area labels must reference `areas`"
                        )))
                    }
                }
            }
        };
        let candidates = positions
            .into_iter()
            .map(|p| (p, p.bounds(&base, size)))
            .collect();
        jobs.push(Job {
            item_id,
            size,
            candidates,
        });
    }
    debug_assert!(jobs
        .iter()
        .all(|j: &Job<T>| j.candidates.iter().all(|(_, r)| r.size() == j.size)));

    let min_label_height = jobs.iter().map(|j| j.size.height).min().unwrap_or(1);
    let min_label_width = jobs.iter().map(|j| j.size.width).min().unwrap_or(1);
    let max_label_extent = jobs
        .iter()
        .map(|j| j.size.width.max(j.size.height))
        .max()
        .unwrap_or(1);
    let _ = bounds;
    Ok(PreparedRun {
        pad,
        width,
        height,
        avoid_marks,
        jobs,
        rejected,
        min_label_height,
        min_label_width,
        max_label_extent,
    })
}

/// Runs the greedy loop over `prep.jobs` against `index`. Returned rects and
/// events are in chart coordinates; placements are sorted by item id.
pub fn run_greedy<T: Scalar, I: OccupancyIndex>(
    prep: &PreparedRun<T>,
    index: &mut I,
    mut events: Option<&mut Vec<PlacementEvent>>,
) -> Vec<Placement<T>> {
    let bounds = prep.bounds();
    let mut out = prep.rejected.clone();
    for job in &prep.jobs {
        let mut chosen = None;
        for (k, (pos, rect)) in job.candidates.iter().enumerate() {
            let result = if !bounds.contains_rect(rect) {
                EventResult::OutOfBounds
            } else if index.is_free(rect) {
                EventResult::Placed
            } else {
                EventResult::Occupied
            };
            if let Some(log) = events.as_deref_mut() {
                log.push(PlacementEvent {
                    item_id: job.item_id,
                    candidate: k,
                    rect: rect.translated(-prep.pad, -prep.pad),
                    result,
                });
            }
            if result == EventResult::Placed {
                index.occupy(rect);
                chosen = Some((k, *pos, *rect));
                break;
            }
        }
        out.push(match chosen {
            Some((k, pos, rect)) => Placement::placed(
                job.item_id,
                rect.translated(-prep.pad, -prep.pad),
                Some(pos),
                Some(k),
            ),
            None => Placement::omitted(job.item_id, None),
        });
    }
    out.sort_by_key(|p| p.item_id);
    out
}

/// Rasterizes the avoided marks of a prepared run (step 1).
pub fn avoid_bitmap<T: Scalar>(prep: &PreparedRun<T>, word_bits: u32) -> Result<OccupancyBitmap> {
    let mut bitmap = OccupancyBitmap::new(prep.width, prep.height, word_bits)?;
    for mark in &prep.avoid_marks {
        rasterize_mark(&mut bitmap, mark, prep.min_label_height, Coverage::Conservative)?;
    }
    Ok(bitmap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreedyOptions {
    pub word_bits: u32,
    pub record_events: bool,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions {
            word_bits: DEFAULT_WORD_BITS,
            record_events: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GreedyRun<T> {
    pub placements: Vec<Placement<T>>,
    pub events: Vec<PlacementEvent>,
    /// Final bitmap in padded coordinates.
    pub bitmap: OccupancyBitmap,
    pub pad: i64,
}

pub fn place_labels_greedy<T: Scalar>(
    scene: &Scene<T>,
    config: &LabelConfig<T>,
) -> Result<Vec<Placement<T>>> {
    Ok(place_labels_greedy_with(scene, config, GreedyOptions::default())?.placements)
}

pub fn place_labels_greedy_with<T: Scalar>(
    scene: &Scene<T>,
    config: &LabelConfig<T>,
    options: GreedyOptions,
) -> Result<GreedyRun<T>> {
    let prep = prepare(scene, config)?;
    let mut index = BitmapIndex {
        bitmap: avoid_bitmap(&prep, options.word_bits)?,
        min_label_height: prep.min_label_height,
    };
    let mut events = Vec::new();
    let placements = run_greedy(
        &prep,
        &mut index,
        options.record_events.then_some(&mut events),
    );
    Ok(GreedyRun {
        placements,
        events,
        bitmap: index.bitmap,
        pad: prep.pad,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::scene::LabelItem;

    fn one_point_scene() -> Scene<f64> {
        let mut s = Scene::new(100, 80);
        let m = s.push_mark(Mark::point(Point::new(50.5, 40.5), 2.0));
        s.push_item(LabelItem::for_mark("ABC", m).with_size(12.0, 6.0));
        s
    }

    #[test]
    fn unobstructed_point_takes_first_preference() {
        let s = one_point_scene();
        let p = place_labels_greedy(&s, &s.config).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p[0].is_placed());
        assert_eq!(p[0].anchor_used.unwrap().anchor, AnchorDirection::TopRight);
        assert_eq!(p[0].candidate, Some(0));
    }

    #[test]
    fn oversized_label_is_omitted_with_diagnostic() {
        let mut s = one_point_scene();
        s.items[0].size = Some([500.0, 6.0]);
        let p = place_labels_greedy(&s, &s.config).unwrap();
        assert!(!p[0].is_placed());
        assert!(p[0].diagnostic.is_some());
    }

    #[test]
    fn candidates_off_chart_are_skipped() {
        let mut s = Scene::new(40, 40);
        let m = s.push_mark(Mark::point(Point::new(38.5, 1.5), 1.0));
        s.push_item(LabelItem::for_mark("x", m).with_size(6.0, 4.0));
        let run = place_labels_greedy_with(
            &s,
            &s.config,
            GreedyOptions {
                record_events: true,
                ..Default::default()
            },
        )
        .unwrap();
        let p = &run.placements[0];
        assert_eq!(p.anchor_used.unwrap().anchor, AnchorDirection::BottomLeft);
        assert!(run.events[..4]
            .iter()
            .all(|e| e.result == EventResult::OutOfBounds));
    }

    #[test]
    fn padding_lets_labels_leave_the_chart() {
        let mut s = Scene::new(40, 40);
        let m = s.push_mark(Mark::point(Point::new(38.5, 1.5), 1.0));
        s.push_item(LabelItem::for_mark("x", m).with_size(6.0, 4.0));
        let mut cfg = s.config.clone();
        cfg.padding = Some(10.0);
        let p = place_labels_greedy(&s, &cfg).unwrap();
        assert_eq!(p[0].anchor_used.unwrap().anchor, AnchorDirection::TopRight);
        let r = p[0].rect.unwrap();
        assert!(r.x1 >= 40 && r.y0 < 0);
    }

    #[test]
    fn line_charts_default_to_end_labels_with_padding() {
        let mut s = Scene::new(100, 50);
        let m = s.push_mark(Mark::polyline(
            vec![Point::new(0.0, 40.0), Point::new(99.0, 10.0)],
            1.0,
        ));
        s.push_item(LabelItem::for_mark("series", m).with_size(16.0, 8.0));
        assert_eq!(effective_padding(&s, &s.config), 20);
        let p = place_labels_greedy(&s, &s.config).unwrap();
        assert_eq!(p[0].anchor_used.unwrap().anchor, AnchorDirection::TopRight);
        assert!(p[0].rect.unwrap().x0 > 99);
    }

    #[test]
    fn avoid_groups_select_marks() {
        let mut s = one_point_scene();
        s.push_mark(Mark::point(Point::new(10.0, 10.0), 1.0).in_group("other"));
        s.push_mark(Mark::point(Point::new(20.0, 10.0), 1.0).in_group("ignored"));
        let mut cfg = s.config.clone();
        cfg.avoid = vec!["other".into()];
        assert_eq!(avoided_mark_indices(&s, &cfg), vec![0, 1]);
        cfg.avoid_base_mark = false;
        assert_eq!(avoided_mark_indices(&s, &cfg), vec![1]);
    }

    #[test]
    fn priority_sort() {
        let mut s = Scene::<f64>::new(10, 10);
        for (i, p) in [Some(1.0), None, Some(5.0)].into_iter().enumerate() {
            let mut item = LabelItem::for_mark(format!("{i}"), 0);
            item.priority = p;
            s.push_item(item);
        }
        assert_eq!(sorted_items(&s, SortOrder::Priority), vec![2, 0, 1]);
        assert_eq!(sorted_items(&s, SortOrder::PriorityAscending), vec![0, 2, 1]);
        assert_eq!(sorted_items(&s, SortOrder::Input), vec![0, 1, 2]);
    }

    #[test]
    fn vega_parallel_lists_in_config() {
        let cfg: LabelConfig<f64> =
            serde_json::from_str(r#"{"anchor": ["left", "right"], "offset": [2]}"#).unwrap();
        let p = cfg.explicit_positions().unwrap().unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[1].offset, 2.0);
        let bad: LabelConfig<f64> =
            serde_json::from_str(r#"{"positions": [{"anchor": "top"}], "offset": [1]}"#).unwrap();
        assert!(bad.validate().is_err());
    }
}
