//! Scene documents: chart size, marks, labelable items and areas.
//!
//! ```json
//! {
//!   "width": 400, "height": 300,
//!   "marks": [{"kind": "point", "center": [12.5, 40], "radius": 3, "group": "points"}],
//!   "items": [{"text": "1975", "mark": 0, "fontSize": 10}],
//!   "areas": [[[0, 10, 40], [50, 12, 60]]],
//!   "fontMetric": {"charWidthFactor": 0.6, "fontSize": 11},
//!   "config": {"avoid": ["points"], "padding": 0}
//! }
//! ```
//!
//! Unknown fields are rejected everywhere.

use serde::{Deserialize, Serialize};

use crate::area::AreaSeries;
use crate::error::{Error, Result};
use crate::geom::PixelSize;
use crate::greedy::LabelConfig;
use crate::raster::Mark;
use crate::scalar::Scalar;

/// Synthetic text metric: width = chars × factor × font size, height = font size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    rename_all = "camelCase",
    deny_unknown_fields,
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct FontMetric<T> {
    #[serde(default = "FontMetric::<T>::default_factor")]
    pub char_width_factor: T,
    #[serde(default = "FontMetric::<T>::default_font_size")]
    pub font_size: T,
}

impl<T: Scalar> FontMetric<T> {
    fn default_factor() -> T {
        T::lit(0.6)
    }

    fn default_font_size() -> T {
        T::lit(11.0)
    }

    pub fn label_size(&self, text: &str, font_size: Option<T>) -> PixelSize {
        let fs = font_size.unwrap_or(self.font_size);
        let chars = T::from_usize(text.chars().count()).unwrap_or_else(T::zero);
        PixelSize::new(
            (chars * self.char_width_factor * fs).ceil_i64().max(1),
            fs.ceil_i64().max(1),
        )
    }
}

impl<T: Scalar> Default for FontMetric<T> {
    fn default() -> Self {
        FontMetric {
            char_width_factor: Self::default_factor(),
            font_size: Self::default_font_size(),
        }
    }
}

/// One label to place: attached either to a mark or to an area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    rename_all = "camelCase",
    deny_unknown_fields,
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct LabelItem<T> {
    pub text: String,
    /// Index of the base mark.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mark: Option<usize>,
    /// Index of the area, for stacked-area labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub font_size: Option<T>,
    /// Explicit `[width, height]`, overriding the font metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<[T; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priority: Option<T>,
}

impl<T: Scalar> LabelItem<T> {
    pub fn for_mark(text: impl Into<String>, mark: usize) -> Self {
        LabelItem {
            text: text.into(),
            mark: Some(mark),
            area: None,
            font_size: None,
            size: None,
            priority: None,
        }
    }

    pub fn for_area(text: impl Into<String>, area: usize) -> Self {
        LabelItem {
            area: Some(area),
            mark: None,
            ..Self::for_mark(text, 0)
        }
    }

    pub fn with_size(mut self, width: T, height: T) -> Self {
        self.size = Some([width, height]);
        self
    }

    pub fn with_font_size(mut self, font_size: T) -> Self {
        self.font_size = Some(font_size);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    rename_all = "camelCase",
    deny_unknown_fields,
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct Scene<T> {
    pub width: i64,
    pub height: i64,
    #[serde(default)]
    pub marks: Vec<Mark<T>>,
    #[serde(default)]
    pub items: Vec<LabelItem<T>>,
    #[serde(default)]
    pub areas: Vec<AreaSeries<T>>,
    #[serde(default)]
    pub font_metric: FontMetric<T>,
    #[serde(default)]
    pub config: LabelConfig<T>,
}

impl<T: Scalar> Scene<T> {
    pub fn new(width: i64, height: i64) -> Self {
        Scene {
            width,
            height,
            marks: Vec::new(),
            items: Vec::new(),
            areas: Vec::new(),
            font_metric: FontMetric::default(),
            config: LabelConfig::default(),
        }
    }

    /// Appends a mark and returns its index.
    pub fn push_mark(&mut self, mark: Mark<T>) -> usize {
        self.marks.push(mark);
        self.marks.len() - 1
    }

    pub fn push_item(&mut self, item: LabelItem<T>) -> usize {
        self.items.push(item);
        self.items.len() - 1
    }

    pub fn label_size(&self, item: &LabelItem<T>) -> PixelSize {
        match item.size {
            Some([w, h]) => PixelSize::new(w.ceil_i64().max(1), h.ceil_i64().max(1)),
            None => self.font_metric.label_size(&item.text, item.font_size),
        }
    }

    /// Checks cross-references and geometry; errors carry a JSON path.
    pub fn validate(&self) -> Result<()> {
        let schema = |path: String, message: String| Error::Schema { path, message };
        if self.width < 1 || self.height < 1 {
            return Err(schema(
                "width".into(),
                format!("chart must be at least 1x1, got {}x{}", self.width, self.height),
            ));
        }
        for (i, m) in self.marks.iter().enumerate() {
            m.validate()
                .map_err(|e| schema(format!("marks[{i}]"), e.to_string()))?;
        }
        for (i, a) in self.areas.iter().enumerate() {
            a.validate()
                .map_err(|e| schema(format!("areas[{i}]"), e.to_string()))?;
        }
        for (i, item) in self.items.iter().enumerate() {
            match (item.mark, item.area) {
                (Some(m), None) if m < self.marks.len() => {}
                (None, Some(a)) if a < self.areas.len() => {}
                (Some(m), None) => {
                    return Err(schema(format!("items[{i}].mark"), format!("no mark {m}")))
                }
                (None, Some(a)) => {
                    return Err(schema(format!("items[{i}].area"), format!("no area {a}")))
                }
                _ => {
                    return Err(schema(
                        format!("items[{i}]"),
                        "item must reference exactly one of `mark` or `area`".into(),
                    ))
                }
            }
            if let Some([w, h]) = item.size {
                if !(w > T::zero() && h > T::zero()) {
                    return Err(schema(
                        format!("items[{i}].size"),
                        "label size must be positive".into(),
                    ));
                }
            }
            if let Some(fs) = item.font_size {
                if !(fs > T::zero()) {
                    return Err(schema(
                        format!("items[{i}].fontSize"),
                        "font size must be positive".into(),
                    ));
                }
            }
        }
        self.config
            .validate()
            .map_err(|e| schema("config".into(), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serialization is infallible")
    }
}

/// Parses and validates a scene document.
pub fn parse_scene<T: Scalar>(document: &str) -> Result<Scene<T>> {
    let de = &mut serde_json::Deserializer::from_str(document);
    let scene: Scene<T> = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    scene.validate()?;
    Ok(scene)
}
