//! Acceptance criteria, one line of output each.
//!
//! Runs without the libtest harness so every criterion reports even when an
//! earlier one fails. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use occlabel::area::{fit_rect, fit_scale, place_area_labels, rasterize_area_boundaries, AreaLabel};
use occlabel::bench::{gen_synthetic_map, run_bench, run_engine, BenchConfig, AIRPORTS, ROUTES};
use occlabel::bitmap::{OccupancyBitmap, SUPPORTED_WORD_BITS};
use occlabel::candidates::{AnchorDirection, CandidatePosition};
use occlabel::engine::{label_scene, Engine, LabelOptions};
use occlabel::geom::{point_box_distance, segment_box_distance, PixelRect, PixelSize, Point, Rect};
use occlabel::greedy::{avoided_mark_indices, prepare, AreaMethod, SortOrder};
use occlabel::io::write_placements;
use occlabel::particle::{build_index, ParticleVariant};
use occlabel::raster::{Mark, MarkGeometry};
use occlabel::scene::{LabelItem, Scene};
use occlabel::AreaSeries;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("bitmap matches boolean matrix", bitmap_equivalence),
        ("word masks of the worked example", worked_example),
        ("row skipping never hides a rect", row_skipping),
        ("no label covers an avoided mark", no_overlap),
        ("improved sampling is conservative", improved_sampling),
        ("label counts agree across engines", label_counts),
        ("bitmap outpaces improved particles", speedup),
        ("flood fill finds the best area fit", area_fit),
        ("output is deterministic", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {tag}: {name}: {detail} ({secs:.1}s)", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// Criterion 1 ---------------------------------------------------------------

/// Boolean matrix with a summed-area table for rect queries.
struct Matrix {
    w: i64,
    h: i64,
    cells: Vec<bool>,
    sums: Vec<u32>,
}

impl Matrix {
    fn new(w: i64, h: i64) -> Self {
        Matrix {
            w,
            h,
            cells: vec![false; (w * h) as usize],
            sums: Vec::new(),
        }
    }

    fn set(&mut self, x: i64, y: i64) {
        if x >= 0 && y >= 0 && x < self.w && y < self.h {
            self.cells[(y * self.w + x) as usize] = true;
        }
    }

    fn get(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && x < self.w && y < self.h && self.cells[(y * self.w + x) as usize]
    }

    fn build_sums(&mut self) {
        let sw = (self.w + 1) as usize;
        self.sums = vec![0; sw * (self.h + 1) as usize];
        for y in 0..self.h as usize {
            for x in 0..self.w as usize {
                let v = self.cells[y * self.w as usize + x] as u32;
                self.sums[(y + 1) * sw + x + 1] =
                    v + self.sums[y * sw + x + 1] + self.sums[(y + 1) * sw + x] - self.sums[y * sw + x];
            }
        }
    }

    fn any_in(&self, r: &PixelRect) -> bool {
        let (x0, y0) = (r.x0.max(0), r.y0.max(0));
        let (x1, y1) = (r.x1.min(self.w - 1), r.y1.min(self.h - 1));
        if x0 > x1 || y0 > y1 {
            return false;
        }
        let sw = (self.w + 1) as usize;
        let s = |x: i64, y: i64| self.sums[y as usize * sw + x as usize];
        s(x1 + 1, y1 + 1) + s(x0, y0) > s(x0, y1 + 1) + s(x1 + 1, y0)
    }
}

fn bitmap_equivalence() -> Outcome {
    const W: i64 = 256;
    const H: i64 = 160;
    const WORKLOADS: usize = 1000;
    const QUERIES: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0usize;
    let mut first = None;
    for wl in 0..WORKLOADS {
        let wb = SUPPORTED_WORD_BITS[wl % SUPPORTED_WORD_BITS.len()];
        let mut b = OccupancyBitmap::new(W, H, wb).map_err(|e| e.to_string())?;
        let mut m = Matrix::new(W, H);
        for _ in 0..rng.gen_range(5..60) {
            match rng.gen_range(0..3) {
                0 => {
                    let (x, y) = (rng.gen_range(-2..W + 2), rng.gen_range(-2..H + 2));
                    b.set_pixel(x, y);
                    m.set(x, y);
                }
                1 => {
                    let y = rng.gen_range(-2..H + 2);
                    let x0 = rng.gen_range(-8..W + 8);
                    let x1 = x0 + rng.gen_range(0..W / 2);
                    b.mark_range(y, x0, x1);
                    for x in x0..=x1 {
                        m.set(x, y);
                    }
                }
                _ => {
                    let x0 = rng.gen_range(-8..W);
                    let y0 = rng.gen_range(-8..H);
                    let r = PixelRect::new(x0, y0, x0 + rng.gen_range(0..40), y0 + rng.gen_range(0..30));
                    // Minimum label height 1: every row is written.
                    b.mark_rect(&r, 1);
                    for (x, y) in r.pixels() {
                        m.set(x, y);
                    }
                }
            }
        }
        m.build_sums();
        for q in 0..QUERIES {
            let x0 = rng.gen_range(-4..W + 4);
            let y0 = rng.gen_range(-4..H + 4);
            let (got, expect, what) = if q % 2 == 0 {
                let x1 = x0 + rng.gen_range(0..W / 3);
                let got = b.range_occupied(y0, x0, x1);
                let expect = (x0..=x1).any(|x| m.get(x, y0));
                (got, expect, format!("range y={y0} [{x0},{x1}]"))
            } else {
                let r = PixelRect::new(x0, y0, x0 + rng.gen_range(0..48), y0 + rng.gen_range(0..32));
                (b.rect_occupied(&r), m.any_in(&r), format!("rect {r:?}"))
            };
            if got != expect {
                mismatches += 1;
                first.get_or_insert_with(|| format!("workload {wl} (word bits {wb}) {what}"));
            }
        }
        for y in 0..H {
            for x in 0..W {
                if b.get(x, y) != m.get(x, y) {
                    mismatches += 1;
                    first.get_or_insert_with(|| format!("workload {wl} pixel ({x},{y})"));
                }
            }
        }
    }
    let queries = WORKLOADS * QUERIES;
    let msg = format!("{WORKLOADS} workloads, {queries} queries, {mismatches} mismatches");
    match first {
        None => Ok(msg),
        Some(f) => Err(format!("{msg}; first: {f}")),
    }
}

// Criterion 2 ---------------------------------------------------------------

fn worked_example() -> Outcome {
    let mut b = OccupancyBitmap::new(16, 6, 4).map_err(|e| e.to_string())?;
    b.set_pixel(14, 1);
    b.set_pixel(15, 1);
    let masks = b.range_masks(1, 2, 12);
    let got: Vec<(usize, u64)> = masks.iter().map(|m| (m.index, m.mask)).collect();
    check(
        got == [(4, 0b0011), (5, 0b1111), (6, 0b1111), (7, 0b1000)],
        || format!("masks {got:?}"),
    )?;
    let word = b.words()[7];
    check(word == 0b0011, || format!("last word {word:04b}"))?;
    let lookup = word & masks[3].mask;
    check(lookup == 0 && !b.range_occupied(1, 2, 12), || format!("lookup {lookup:04b}"))?;
    b.mark_range(1, 2, 12);
    let updated = b.words()[7];
    check(updated == 0b1011, || format!("updated word {updated:04b}"))?;
    Ok(format!(
        "masks 0011 1111 1111 1000, lookup {word:04b} & {:04b} = {lookup:04b}, update {updated:04b}",
        masks[3].mask
    ))
}

// Criterion 3 ---------------------------------------------------------------

/// Every marked rect on a 64x64 grid, every minimum height, every window of
/// exactly that height meeting the rect (including windows hanging off the
/// grid). Taller windows contain one of these, so they are covered too.
fn row_skipping() -> Outcome {
    const N: i64 = 64;
    let columns = [(0, N - 1), (20, 20), (5, 40)];
    let mut windows = 0u64;
    for &(x0, x1) in &columns {
        for y0 in 0..N {
            for y1 in y0..N {
                let r = PixelRect::new(x0, y0, x1, y1);
                for m in 1..=N {
                    let mut b = OccupancyBitmap::new(N, N, 64).map_err(|e| e.to_string())?;
                    b.mark_rect(&r, m);
                    for a in y0 - m + 1..=y1 {
                        let hits_left = PixelRect::new(x0, a, x0, a + m - 1);
                        let hits_right = PixelRect::new(x1, a, x1 + 3, a + m - 1);
                        windows += 1;
                        if !b.rect_occupied(&hits_left) || !b.rect_occupied(&hits_right) {
                            return Err(format!(
                                "rect {r:?} with minimum height {m} missed by window rows {a}..={}",
                                a + m - 1
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{windows} windows over all rects and heights, none missed"))
}

// Criterion 4 ---------------------------------------------------------------

/// Whether the closed unit square of pixel `(x, y)` comes within the mark's
/// coverage, computed directly from geometry.
fn pixel_covered(mark: &Mark<f64>, x: i64, y: i64) -> bool {
    let sq = Rect::new(x as f64, y as f64, x as f64 + 1.0, y as f64 + 1.0);
    let touches = |r: &Rect<f64>| sq.x1 >= r.x0 && sq.x0 <= r.x1 && sq.y1 >= r.y0 && sq.y0 <= r.y1;
    match &mark.geometry {
        MarkGeometry::Point { center, radius } => point_box_distance(*center, &sq) <= *radius,
        MarkGeometry::Polyline {
            vertices,
            stroke_width,
        } => {
            let half = stroke_width / 2.0;
            if vertices.len() == 1 {
                return point_box_distance(vertices[0], &sq) <= half;
            }
            vertices
                .windows(2)
                .any(|s| segment_box_distance(s[0], s[1], &sq) <= half)
        }
        MarkGeometry::Rect { rect, filled: true } | MarkGeometry::TextBox { rect, .. } => touches(rect),
        MarkGeometry::Rect { rect, filled: false } => {
            let c = [
                Point::new(rect.x0, rect.y0),
                Point::new(rect.x1, rect.y0),
                Point::new(rect.x1, rect.y1),
                Point::new(rect.x0, rect.y1),
            ];
            (0..4).any(|i| segment_box_distance(c[i], c[(i + 1) % 4], &sq) <= 0.0)
        }
        MarkGeometry::AreaBoundary { area } => {
            let (lower, upper) = area.boundary_lines();
            [lower, upper].iter().any(|l| {
                if l.len() == 1 {
                    point_box_distance(l[0], &sq) <= 0.5
                } else {
                    l.windows(2).any(|s| segment_box_distance(s[0], s[1], &sq) <= 0.5)
                }
            })
        }
    }
}

fn mark_extent(mark: &Mark<f64>) -> Rect<f64> {
    let b = mark.bounds();
    let grow = match &mark.geometry {
        MarkGeometry::Polyline { stroke_width, .. } => stroke_width / 2.0,
        MarkGeometry::AreaBoundary { .. } => 0.5,
        _ => 0.0,
    };
    b.inflated(grow + 1.0)
}

fn random_scene(rng: &mut ChaCha8Rng) -> Scene<f64> {
    let (w, h) = (rng.gen_range(120..800), rng.gen_range(100..600));
    let mut s = Scene::new(w, h);
    let pt = |rng: &mut ChaCha8Rng| Point::new(rng.gen_range(0.0..w as f64), rng.gen_range(0.0..h as f64));
    for i in 0..rng.gen_range(0..=500) {
        let m = s.push_mark(Mark::point(pt(rng), rng.gen_range(0.0..4.0)).in_group("points"));
        let len = rng.gen_range(1..6);
        let text: String = (0..len).map(|k| (b'a' + ((i + k) % 26) as u8) as char).collect();
        let item = LabelItem::for_mark(text, m).with_font_size(rng.gen_range(7.0..14.0));
        s.push_item(item);
    }
    for _ in 0..rng.gen_range(0..=20) {
        let verts = (0..rng.gen_range(2..8)).map(|_| pt(rng)).collect();
        let m = s.push_mark(Mark::polyline(verts, rng.gen_range(0.5..3.0)).in_group("lines"));
        if rng.gen_bool(0.5) {
            s.push_item(LabelItem::for_mark("series", m));
        }
    }
    for _ in 0..rng.gen_range(0..4) {
        let p = pt(rng);
        let r = Rect::new(p.x, p.y, p.x + rng.gen_range(2.0..40.0), p.y + rng.gen_range(2.0..30.0));
        s.push_mark(Mark::rect(r, rng.gen_bool(0.5)).in_group("boxes"));
    }
    for _ in 0..rng.gen_range(0..4) {
        let p = pt(rng);
        let r = Rect::new(p.x, p.y, p.x + rng.gen_range(6.0..30.0), p.y + rng.gen_range(4.0..12.0));
        s.push_mark(Mark::text_box(r, Some("note".into())).in_group("notes"));
    }
    s.config.avoid = ["points", "lines", "boxes", "notes"]
        .iter()
        .filter(|_| rng.gen_bool(0.7))
        .map(|g| g.to_string())
        .collect();
    s.config.avoid_base_mark = rng.gen_bool(0.8);
    if rng.gen_bool(0.5) {
        s.config.padding = Some(rng.gen_range(0.0..12.0));
    }
    s.config.sort = [SortOrder::Input, SortOrder::Text][rng.gen_range(0..2)];
    s
}

/// Checks one engine's placements: pairwise disjoint, and no label pixel
/// within coverage of an avoided visible mark.
fn audit(scene: &Scene<f64>, engine: Engine) -> Result<usize, String> {
    let out = label_scene(scene, engine, LabelOptions::default()).map_err(|e| e.to_string())?;
    let rects: Vec<PixelRect> = out.placements.iter().filter_map(|p| p.rect).collect();
    let mut sorted: Vec<&PixelRect> = rects.iter().collect();
    sorted.sort_by_key(|r| r.x0);
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            if b.x0 > a.x1 {
                break;
            }
            if a.intersects(b) {
                return Err(format!("{engine}: labels {a:?} and {b:?} overlap"));
            }
        }
    }
    let avoided: Vec<(&Mark<f64>, Rect<f64>)> = avoided_mark_indices(scene, &scene.config)
        .into_iter()
        .map(|i| &scene.marks[i])
        .filter(|m| m.is_visible())
        .map(|m| (m, mark_extent(m)))
        .collect();
    for r in &rects {
        let rr = r.to_rect::<f64>();
        for (m, ext) in &avoided {
            if ext.x1 < rr.x0 || ext.x0 > rr.x1 || ext.y1 < rr.y0 || ext.y0 > rr.y1 {
                continue;
            }
            if let Some((x, y)) = r.pixels().find(|&(x, y)| pixel_covered(m, x, y)) {
                return Err(format!("{engine}: label {r:?} covers pixel ({x},{y}) of {:?}", m.geometry));
            }
        }
    }
    Ok(rects.len())
}

fn no_overlap() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut labels = 0;
    for i in 0..200 {
        let s = random_scene(&mut rng);
        labels += audit(&s, Engine::Bitmap).map_err(|e| format!("scene {i}: {e}"))?;
    }
    let map = gen_synthetic_map(AIRPORTS, ROUTES, 1000, 7).map_err(|e| e.to_string())?;
    let map_labels = audit(&map, Engine::Bitmap).map_err(|e| format!("synthetic map: {e}"))?;
    Ok(format!(
        "200 random scenes ({labels} labels) and the synthetic map at width 1000 ({map_labels} labels) clean"
    ))
}

// Criterion 5 ---------------------------------------------------------------

fn improved_sampling() -> Outcome {
    let sweep = improved_sweep()?;
    let witness = witness()?;
    Ok(format!("{sweep}; {witness}"))
}

/// Every rect at least as large as the smallest label that overlaps an
/// occupied pixel contains an improved particle.
fn improved_sweep() -> Outcome {
    const N: i64 = 40;
    let mut s = Scene::new(N, N);
    let marks = [
        Mark::point(Point::new(10.3, 12.7), 3.0),
        Mark::polyline(
            vec![Point::new(2.2, 30.1), Point::new(18.7, 22.4), Point::new(37.5, 35.2)],
            1.5,
        ),
        Mark::rect(Rect::new(25.2, 5.5, 33.8, 14.1), true),
        Mark::rect(Rect::new(4.5, 3.5, 14.5, 8.5), false),
        Mark::point(Point::new(30.6, 26.2), 0.4),
        Mark::text_box(Rect::new(20.0, 16.0, 31.0, 19.5), None),
    ];
    for m in marks {
        s.push_mark(m.in_group("m"));
    }
    s.push_item(LabelItem::for_mark("a", 0).with_size(3.0, 2.0));
    s.push_item(LabelItem::for_mark("b", 2).with_size(5.0, 4.0));
    s.config.avoid = vec!["m".into()];
    s.config.padding = Some(0.0);
    let prep = prepare(&s, &s.config).map_err(|e| e.to_string())?;
    let (wmin, hmin) = (prep.min_label_width, prep.min_label_height);
    check((wmin, hmin) == (3, 2), || format!("unexpected minimum label size {wmin}x{hmin}"))?;
    let index = build_index(&prep, ParticleVariant::Improved).map_err(|e| e.to_string())?;

    let mut occ = Matrix::new(N, N);
    for y in 0..N {
        for x in 0..N {
            if s.marks.iter().any(|m| pixel_covered(m, x, y)) {
                occ.set(x, y);
            }
        }
    }
    occ.build_sums();
    let (mut overlapping, mut checked) = (0u64, 0u64);
    for y0 in 0..N {
        for x0 in 0..N {
            for y1 in y0 + hmin - 1..N {
                for x1 in x0 + wmin - 1..N {
                    let r = PixelRect::new(x0, y0, x1, y1);
                    checked += 1;
                    if !occ.any_in(&r) {
                        continue;
                    }
                    overlapping += 1;
                    if !index.grid.any_in(&r.to_rect()) {
                        return Err(format!("rect {r:?} overlaps a mark but holds no particle"));
                    }
                }
            }
        }
    }
    Ok(format!(
        "{overlapping} of {checked} rects overlap marks, all hold particles ({} particles)",
        index.grid.len()
    ))
}

/// A label sitting just below a stroke: center sampling misses the stroke's
/// lower edge, conservative coverage does not.
fn witness() -> Outcome {
    let mut s = Scene::new(40, 20);
    s.push_mark(Mark::polyline(vec![Point::new(0.0, 3.8), Point::new(40.0, 3.8)], 1.0).in_group("lines"));
    let base = s.push_mark(Mark::point(Point::new(10.5, 9.5), 0.0));
    s.push_item(LabelItem::for_mark("w", base).with_size(6.0, 4.0));
    s.config.avoid = vec!["lines".into()];
    s.config.positions = Some(vec![CandidatePosition::new(AnchorDirection::Top, 1.0)]);
    let run = |e| {
        label_scene(&s, e, LabelOptions::default())
            .map(|o| o.placements[0].rect)
            .map_err(|e| e.to_string())
    };
    let original = run(Engine::Particle)?;
    let improved = run(Engine::ParticleImproved)?;
    let bitmap = run(Engine::Bitmap)?;
    let Some(r) = original else {
        return Err("original particles rejected the witness label".into());
    };
    let depth = 0.5 - segment_box_distance(Point::new(0.0, 3.8), Point::new(40.0, 3.8), &r.to_rect());
    check(depth > 0.0, || format!("witness label {r:?} does not overlap the stroke"))?;
    check(improved.is_none(), || format!("improved particles placed {improved:?}"))?;
    check(bitmap.is_none(), || format!("bitmap placed {bitmap:?}"))?;
    Ok(format!(
        "witness: original places {r:?} overlapping the stroke by {depth:.2}px, improved and bitmap reject it"
    ))
}

// Criterion 6 ---------------------------------------------------------------

fn label_counts() -> Outcome {
    let mut parts = Vec::new();
    for width in [1000, 2000] {
        let scene = gen_synthetic_map(AIRPORTS, ROUTES, width, 7).map_err(|e| e.to_string())?;
        let count = |e| -> Result<usize, String> {
            Ok(run_engine(&scene, e)
                .map_err(|e| e.to_string())?
                .iter()
                .filter(|p| p.is_placed())
                .count())
        };
        let bitmap = count(Engine::Bitmap)?;
        let improved = count(Engine::ParticleImproved)?;
        let diff = (bitmap as f64 - improved as f64).abs() / improved.max(1) as f64;
        parts.push(format!("width {width}: bitmap {bitmap}, improved {improved}"));
        check(diff <= 0.05, || format!("width {width}: {bitmap} vs {improved} differ by {:.1}%", diff * 100.0))?;
    }
    Ok(parts.join("; "))
}

// Criterion 7 ---------------------------------------------------------------

fn speedup() -> Outcome {
    let config = BenchConfig {
        engines: vec![Engine::Bitmap, Engine::ParticleImproved],
        widths: vec![2000, 4000, 8000],
        reps: 20,
        ..BenchConfig::default()
    };
    let report = run_bench(&config).map_err(|e| e.to_string())?;
    let mut gaps = Vec::new();
    let mut parts = Vec::new();
    for &w in &config.widths {
        let t = |e| {
            report
                .row(e, w)
                .map(|r| r.median_ms)
                .ok_or_else(|| format!("no timing for {e} at width {w}"))
        };
        let (b, p) = (t(Engine::Bitmap)?, t(Engine::ParticleImproved)?);
        let gap = 1.0 - b / p;
        parts.push(format!("{w}: {b:.1}ms vs {p:.1}ms gap {gap:.2}"));
        gaps.push((w, gap));
    }
    let summary = parts.join(", ");
    for &(w, g) in &gaps {
        check(g > 0.0, || format!("bitmap not faster at width {w}: {summary}"))?;
        if w >= 4000 {
            check(g >= 0.10, || format!("gap below 10% at width {w}: {summary}"))?;
        }
    }
    check(gaps.windows(2).all(|p| p[1].1 >= p[0].1), || {
        format!("gap shrinks with width: {summary}")
    })?;
    Ok(summary)
}

// Criterion 8 ---------------------------------------------------------------

fn area_fit() -> Outcome {
    let (w, h) = (48i64, 40i64);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut strict_gains = 0;
    for i in 0..100 {
        let n = rng.gen_range(2..=6);
        let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..w as f64)).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        if xs.len() < 2 {
            xs = vec![2.0, 40.0];
        }
        let triples: Vec<[f64; 3]> = xs
            .iter()
            .map(|&x| {
                let lo = rng.gen_range(2.0..18.0);
                [x, lo, lo + rng.gen_range(2.0..20.0)]
            })
            .collect();
        let area = AreaSeries::from_triples(&triples).map_err(|e| e.to_string())?;
        let size = PixelSize::new(rng.gen_range(2..14), rng.gen_range(2..8));
        let label = [AreaLabel {
            item_id: 0,
            area: 0,
            size,
        }];
        let areas = std::slice::from_ref(&area);
        let score = |m| -> Result<Option<i64>, String> {
            Ok(place_area_labels(w, h, areas, &label, m, 64).map_err(|e| e.to_string())?[0].score)
        };
        let flood = score(AreaMethod::FloodFill)?;
        let reduced = score(AreaMethod::ReducedSearch)?;

        let mut bounds = OccupancyBitmap::new(w, h, 64).map_err(|e| e.to_string())?;
        rasterize_area_boundaries(&mut bounds, areas);
        let aspect = size.width as f64 / size.height as f64;
        let max_h = (area.bounds().height().ceil() as i64).max(1);
        let mut best = None;
        for c in area.interior_pixels() {
            let mut s = 0;
            while s < max_h && !bounds.rect_occupied(&fit_rect(c, aspect, s + 1)) {
                s += 1;
            }
            let fs = fit_scale(&bounds, c, aspect, max_h);
            check(fs == s, || format!("area {i}: fit scale {fs} at {c:?}, linear search {s}"))?;
            best = best.max(Some(s));
        }
        check(flood == best, || format!("area {i}: flood fill scored {flood:?}, best is {best:?}"))?;
        check(reduced <= flood, || format!("area {i}: reduced {reduced:?} beats flood {flood:?}"))?;
        if reduced < flood {
            strict_gains += 1;
        }
    }
    Ok(format!(
        "100 areas optimal under exhaustive search, flood fill beats reduced search on {strict_gains}"
    ))
}

// Criterion 9 ---------------------------------------------------------------

fn determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut mixed = random_scene(&mut rng);
    let a = mixed.areas.len();
    mixed.areas.push(
        AreaSeries::from_triples(&[[0.0, 10.0, 40.0], [60.0, 20.0, 70.0], [110.0, 5.0, 30.0]])
            .map_err(|e| e.to_string())?,
    );
    mixed.push_item(LabelItem::for_area("stack", a));
    mixed.config.method = AreaMethod::FloodFill;
    let scenes = [
        ("synthetic map", gen_synthetic_map(AIRPORTS, ROUTES, 1000, 7).map_err(|e| e.to_string())?),
        ("mixed scene", mixed),
    ];
    for (name, scene) in &scenes {
        for engine in Engine::ALL {
            let mut first: Option<Vec<u8>> = None;
            for run in 0..5 {
                let out = label_scene(scene, engine, LabelOptions::default()).map_err(|e| e.to_string())?;
                let mut buf = Vec::new();
                write_placements(engine.name(), &out.placements, &mut buf).map_err(|e| e.to_string())?;
                match &first {
                    None => first = Some(buf),
                    Some(f) => check(*f == buf, || format!("{name}, {engine}: run {run} differs"))?,
                }
            }
        }
    }
    Ok("5 runs per engine on 2 scenes byte-identical".into())
}
