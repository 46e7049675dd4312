//! Runs a whole scene: mark labels through the chosen engine, area labels
//! through the area placer, merged in item order.

use std::fmt;
use std::str::FromStr;

use crate::area::{place_area_labels, AreaLabel};
use crate::bitmap::{OccupancyBitmap, DEFAULT_WORD_BITS};
use crate::error::{Error, Result};
use crate::greedy::{place_labels_greedy_with, GreedyOptions, Placement, PlacementEvent};
use crate::particle::{place_labels_particle_with, ParticleVariant};
use crate::scalar::Scalar;
use crate::scene::Scene;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Bitmap,
    Particle,
    ParticleImproved,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Bitmap, Engine::Particle, Engine::ParticleImproved];

    pub const fn name(self) -> &'static str {
        match self {
            Engine::Bitmap => "bitmap",
            Engine::Particle => "particle",
            Engine::ParticleImproved => "particle-improved",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown engine `{s}`, expected bitmap, particle or particle-improved"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelOptions {
    pub word_bits: u32,
    pub record_events: bool,
}

impl Default for LabelOptions {
    fn default() -> Self {
        LabelOptions {
            word_bits: DEFAULT_WORD_BITS,
            record_events: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LabelOutput<T> {
    /// One entry per item, sorted by item id.
    pub placements: Vec<Placement<T>>,
    pub events: Vec<PlacementEvent>,
    /// Final bitmap of the bitmap engine, in padded coordinates.
    pub bitmap: Option<OccupancyBitmap>,
    pub pad: i64,
}

pub fn label_scene<T: Scalar>(
    scene: &Scene<T>,
    engine: Engine,
    options: LabelOptions,
) -> Result<LabelOutput<T>> {
    scene.validate()?;
    let config = &scene.config;
    let (mut placements, events, bitmap, pad) = match engine {
        Engine::Bitmap => {
            let run = place_labels_greedy_with(
                scene,
                config,
                GreedyOptions {
                    word_bits: options.word_bits,
                    record_events: options.record_events,
                },
            )?;
            (run.placements, run.events, Some(run.bitmap), run.pad)
        }
        Engine::Particle | Engine::ParticleImproved => {
            let variant = if engine == Engine::Particle {
                ParticleVariant::Original
            } else {
                ParticleVariant::Improved
            };
            let run = place_labels_particle_with(scene, config, variant, options.record_events)?;
            (run.placements, run.events, None, 0)
        }
    };

    let area_labels: Vec<AreaLabel> = scene
        .items
        .iter()
        .enumerate()
        .filter_map(|(item_id, item)| {
            item.area.map(|area| AreaLabel {
                item_id,
                area,
                size: scene.label_size(item),
            })
        })
        .collect();
    if !area_labels.is_empty() {
        placements.extend(place_area_labels(
            scene.width,
            scene.height,
            &scene.areas,
            &area_labels,
            config.method,
            options.word_bits,
        )?);
        placements.sort_by_key(|p| p.item_id);
    }
    Ok(LabelOutput {
        placements,
        events,
        bitmap,
        pad,
    })
}
