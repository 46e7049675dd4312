//! Synthetic airport-map benchmark: engines × chart widths, median runtime
//! and label counts.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::geom::{Point, Rect};
use crate::greedy::{place_labels_greedy, Placement};
use crate::particle::{place_labels_particle, ParticleVariant};
use crate::raster::Mark;
use crate::scene::{LabelItem, Scene};

pub const AIRPORTS: usize = 3320;
pub const ROUTES: usize = 56;

const CLUSTERS: usize = 24;
const LABEL_FONT_SIZE: f64 = 10.0;

/// A clustered, map-like scene: route polylines from a hub, black route
/// endpoints with pre-placed red label boxes, jittered outline polylines and
/// gray points to be labeled. All groups are avoided.
pub fn gen_synthetic_map(
    n_points: usize,
    n_routes: usize,
    width: i64,
    seed: u64,
) -> Result<Scene<f64>> {
    if n_points == 0 || n_routes >= n_points {
        return Err(Error::invalid(format!(
            "need 0 <= routes < points, got {n_routes} routes for {n_points} points"
        )));
    }
    if width < 8 {
        return Err(Error::invalid("width must be at least 8 pixels"));
    }
    let height = width * 5 / 8;
    let (w, h) = (width as f64, height as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let clusters: Vec<(f64, f64, f64)> = (0..CLUSTERS)
        .map(|_| {
            (
                rng.gen_range(0.08..0.92),
                rng.gen_range(0.1..0.9),
                rng.gen_range(0.02..0.09),
            )
        })
        .collect();
    let mut points = vec![Point::new(0.12 * w, 0.18 * h)];
    while points.len() < n_points {
        let (u, v) = if rng.gen_bool(0.15) {
            (rng.gen_range(0.02..0.98), rng.gen_range(0.02..0.98))
        } else {
            let (cx, cy, s) = clusters[rng.gen_range(0..CLUSTERS)];
            let n = Normal::new(0.0, s).expect("positive sigma");
            (cx + n.sample(&mut rng), cy + n.sample(&mut rng) * 1.6)
        };
        if (0.01..0.99).contains(&u) && (0.01..0.99).contains(&v) {
            points.push(Point::new((u * w).floor() + 0.5, (v * h).floor() + 0.5));
        }
    }

    let mut scene = Scene::new(width, height);
    scene.config.avoid = ["outlines", "routes", "route-points", "red-labels", "points"]
        .map(String::from)
        .to_vec();

    if n_routes > 0 {
        add_outlines(&mut scene, &mut rng, w, h);
    }

    // Route destinations are the points farthest down the list so the hub
    // stays at index 0 and labelable points keep a stable order.
    let hub = points[0];
    let dests = &points[n_points - n_routes..];
    for &d in dests {
        let mid = Point::new(
            (hub.x + d.x) * 0.5,
            (hub.y + d.y) * 0.5 - 0.04 * (d.x - hub.x).abs(),
        );
        scene.push_mark(Mark::polyline(vec![hub, mid, d], 1.0).in_group("routes"));
    }
    for &p in std::iter::once(&hub).chain(dests) {
        scene.push_mark(Mark::point(p, 2.5).in_group("route-points"));
        let text = code(&mut rng);
        let size = scene.font_metric.label_size(&text, Some(LABEL_FONT_SIZE));
        let r = Rect::new(
            p.x + 3.0,
            p.y - 3.0 - size.height as f64,
            p.x + 3.0 + size.width as f64,
            p.y - 3.0,
        );
        scene.push_mark(Mark::text_box(r, Some(text)).in_group("red-labels"));
    }
    for &p in &points[1..n_points - n_routes] {
        let m = scene.push_mark(Mark::point(p, 2.0).in_group("points"));
        let text = code(&mut rng);
        scene.push_item(LabelItem::for_mark(text, m).with_font_size(LABEL_FONT_SIZE));
    }
    Ok(scene)
}

fn code(rng: &mut ChaCha8Rng) -> String {
    (0..3).map(|_| rng.gen_range(b'A'..=b'Z') as char).collect()
}

/// Jittered polylines on a coarse grid, standing in for state borders.
fn add_outlines(scene: &mut Scene<f64>, rng: &mut ChaCha8Rng, w: f64, h: f64) {
    const ROWS: usize = 6;
    const COLS: usize = 9;
    const STEPS: usize = 40;
    let jitter = 0.01 * w.min(h * 1.6);
    for r in 1..ROWS {
        let y = h * r as f64 / ROWS as f64;
        let line = (0..=STEPS)
            .map(|i| {
                Point::new(
                    w * i as f64 / STEPS as f64,
                    (y + rng.gen_range(-jitter..jitter)).clamp(0.0, h),
                )
            })
            .collect();
        scene.push_mark(Mark::polyline(line, 1.0).in_group("outlines"));
    }
    for c in 1..COLS {
        let x = w * c as f64 / COLS as f64;
        let line = (0..=STEPS)
            .map(|i| {
                Point::new(
                    (x + rng.gen_range(-jitter..jitter)).clamp(0.0, w),
                    h * i as f64 / STEPS as f64,
                )
            })
            .collect();
        scene.push_mark(Mark::polyline(line, 1.0).in_group("outlines"));
    }
}

/// Rasterization/sampling plus placement for one engine.
pub fn run_engine(scene: &Scene<f64>, engine: Engine) -> Result<Vec<Placement<f64>>> {
    match engine {
        Engine::Bitmap => place_labels_greedy(scene, &scene.config),
        Engine::Particle => place_labels_particle(scene, &scene.config, ParticleVariant::Original),
        Engine::ParticleImproved => {
            place_labels_particle(scene, &scene.config, ParticleVariant::Improved)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub engine: Engine,
    pub width: i64,
    pub median_ms: f64,
    pub labels_placed: usize,
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct BenchError {
    pub engine: Engine,
    pub width: i64,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub errors: Vec<BenchError>,
}

impl BenchReport {
    pub fn row(&self, engine: Engine, width: i64) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.engine == engine && r.width == width)
    }

    /// CSV with header `engine,width,median_ms,labels_placed,reps,seed`.
    /// Failed cells keep their row with empty measurements.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "engine,width,median_ms,labels_placed,reps,seed")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{:.3},{},{},{}",
                r.engine, r.width, r.median_ms, r.labels_placed, r.reps, r.seed
            )?;
        }
        for e in &self.errors {
            writeln!(out, "{},{},,,,", e.engine, e.width)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub engines: Vec<Engine>,
    pub widths: Vec<i64>,
    pub reps: usize,
    pub seed: u64,
    pub points: usize,
    pub routes: usize,
    /// Run engines of one width on separate threads.
    pub parallel: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            engines: Engine::ALL.to_vec(),
            widths: vec![1000, 2000, 4000, 8000],
            reps: 20,
            seed: 7,
            points: AIRPORTS,
            routes: ROUTES,
            parallel: false,
        }
    }
}

pub fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) * 0.5
    }
}

/// Times `reps` runs of one engine; label counts must agree across runs.
pub fn bench_cell(scene: &Scene<f64>, engine: Engine, reps: usize) -> Result<(f64, usize)> {
    let mut cell = Cell::new(engine);
    for _ in 0..reps {
        cell.run(scene)?;
    }
    cell.finish()
}

/// Accumulates timed runs of one engine on one scene.
struct Cell {
    engine: Engine,
    times: Vec<f64>,
    count: Option<usize>,
}

impl Cell {
    fn new(engine: Engine) -> Self {
        Cell {
            engine,
            times: Vec::new(),
            count: None,
        }
    }

    fn run(&mut self, scene: &Scene<f64>) -> Result<()> {
        let start = Instant::now();
        let placements = run_engine(scene, self.engine)?;
        self.times.push(start.elapsed().as_secs_f64() * 1e3);
        let placed = placements.iter().filter(|p| p.is_placed()).count();
        match self.count {
            Some(c) if c != placed => Err(Error::invalid(format!(
                "label count changed between runs: {c} then {placed}"
            ))),
            _ => {
                self.count = Some(placed);
                Ok(())
            }
        }
    }

    fn finish(mut self) -> Result<(f64, usize)> {
        Ok((median(&mut self.times), self.count.unwrap_or(0)))
    }
}

/// Sequential cells: after one untimed warm-up run per engine, repetitions
/// are interleaved across engines so slow drift in machine load affects all
/// engines alike. A failing engine is dropped from the remaining rounds.
fn bench_width_sequential(
    scene: &Scene<f64>,
    engines: &[Engine],
    reps: usize,
) -> Vec<(Engine, Result<(f64, usize)>)> {
    let mut cells: Vec<(Cell, Option<Error>)> = engines
        .iter()
        .map(|&e| {
            let err = run_engine(scene, e).err();
            (Cell::new(e), err)
        })
        .collect();
    for _ in 0..reps {
        for (cell, err) in cells.iter_mut().filter(|(_, e)| e.is_none()) {
            if let Err(e) = cell.run(scene) {
                *err = Some(e);
            }
        }
    }
    cells
        .into_iter()
        .map(|(cell, err)| {
            let engine = cell.engine;
            (engine, match err {
                Some(e) => Err(e),
                None => cell.finish(),
            })
        })
        .collect()
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    if config.reps == 0 {
        return Err(Error::invalid("reps must be at least 1"));
    }
    if config.engines.is_empty() || config.widths.is_empty() {
        return Err(Error::invalid("need at least one engine and one width"));
    }
    let mut report = BenchReport::default();
    for &width in &config.widths {
        let scene = gen_synthetic_map(config.points, config.routes, width, config.seed)?;
        let results: Vec<(Engine, Result<(f64, usize)>)> = if config.parallel {
            std::thread::scope(|s| {
                let handles: Vec<_> = config
                    .engines
                    .iter()
                    .map(|&e| {
                        let scene = &scene;
                        (e, s.spawn(move || bench_cell(scene, e, config.reps)))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|(e, h)| {
                        let r = h
                            .join()
                            .unwrap_or_else(|_| Err(Error::invalid("benchmark thread panicked")));
                        (e, r)
                    })
                    .collect()
            })
        } else {
            bench_width_sequential(&scene, &config.engines, config.reps)
        };
        for (engine, r) in results {
            match r {
                Ok((median_ms, labels_placed)) => report.rows.push(BenchRow {
                    engine,
                    width,
                    median_ms,
                    labels_placed,
                    reps: config.reps,
                    seed: config.seed,
                }),
                Err(e) => report.errors.push(BenchError {
                    engine,
                    width,
                    message: e.to_string(),
                }),
            }
        }
    }
    Ok(report)
}
