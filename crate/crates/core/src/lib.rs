//! Label placement with a word-packed occupancy bitmap.
//!
//! Marks are conservatively rasterized into an [`OccupancyBitmap`]; labels
//! are then placed greedily, each candidate rect checked and written with a
//! handful of masked word operations. Particle-based baselines and a
//! benchmark harness are included for comparison.
//!
//! Continuous geometry is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`.

// `!(x >= 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod area;
pub mod bench;
pub mod bitmap;
pub mod candidates;
pub mod engine;
pub mod error;
pub mod geom;
pub mod greedy;
pub mod io;
pub mod particle;
pub mod raster;
pub mod scalar;
pub mod scene;

pub use bitmap::OccupancyBitmap;
pub use candidates::{AnchorDirection, LineAnchor, Orientation};
pub use engine::{label_scene, Engine, LabelOptions, LabelOutput};
pub use error::{Error, Result};
pub use geom::{PixelRect, PixelSize};
pub use greedy::{AreaMethod, EventResult, PlacementEvent, PlacementStatus, SortOrder};
pub use particle::ParticleVariant;
pub use raster::{Coverage, MarkKind};
pub use scalar::Scalar;
pub use scene::parse_scene;

pub type Point = geom::Point<f64>;
pub type Rect = geom::Rect<f64>;
pub type Mark = raster::Mark<f64>;
pub type MarkGeometry = raster::MarkGeometry<f64>;
pub type Scene = scene::Scene<f64>;
pub type LabelItem = scene::LabelItem<f64>;
pub type LabelConfig = greedy::LabelConfig<f64>;
pub type Placement = greedy::Placement<f64>;
pub type CandidatePosition = candidates::CandidatePosition<f64>;
pub type AreaSeries = area::AreaSeries<f64>;
