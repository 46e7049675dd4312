//! Particle-based placement baselines.
//!
//! Both samplers render the avoided marks into a byte-per-pixel image, read
//! it back, and store the resulting point particles in a uniform grid. A
//! candidate is rejected when any particle lies strictly inside its rect.
//!
//! The original sampler puts one particle at the center of each pixel whose
//! center a mark covers, so a label may still overlap a mark by up to half a
//! pixel. The improved sampler renders every pixel a mark touches and puts
//! particles on the corners of those pixels, but only on the outline of the
//! covered region and on a lattice whose stride is the smallest label
//! width/height. Any label at least that large (and at least two pixels
//! each way) that overlaps a covered pixel then has a particle inside it.

use crate::error::{Error, Result};
use crate::geom::{Point, PixelRect, Rect};
use crate::greedy::{prepare, run_greedy, LabelConfig, OccupancyIndex, Placement, PlacementEvent, PreparedRun};
use crate::raster::{rasterize_mark, Coverage, Mark, RasterTarget};
use crate::scalar::Scalar;
use crate::scene::Scene;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParticleVariant {
    Original,
    Improved,
}

/// Byte-per-pixel coverage image, standing in for the rendered image that
/// image-based sampling reads back pixel by pixel.
#[derive(Debug, Clone)]
pub struct CoverageImage {
    width: i64,
    height: i64,
    alpha: Vec<u8>,
}

impl CoverageImage {
    pub fn new(width: i64, height: i64) -> Result<Self> {
        if width < 1 || height < 1 {
            return Err(Error::invalid(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        let len = usize::try_from(width)
            .ok()
            .zip(usize::try_from(height).ok())
            .and_then(|(w, h)| w.checked_mul(h))
            .ok_or_else(|| Error::invalid("image too large"))?;
        Ok(CoverageImage {
            width,
            height,
            alpha: vec![0; len],
        })
    }

    /// Renders `marks` under `coverage`.
    pub fn render<T: Scalar>(
        width: i64,
        height: i64,
        marks: &[Mark<T>],
        coverage: Coverage,
    ) -> Result<Self> {
        let mut img = CoverageImage::new(width, height)?;
        for m in marks {
            rasterize_mark(&mut img, m, 1, coverage)?;
        }
        Ok(img)
    }

    pub fn get(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && x < self.width
            && y < self.height
            && self.alpha[(y * self.width + x) as usize] != 0
    }

    fn row(&self, y: i64) -> &[u8] {
        let w = self.width as usize;
        &self.alpha[y as usize * w..(y as usize + 1) * w]
    }
}

impl RasterTarget for CoverageImage {
    fn width(&self) -> i64 {
        self.width
    }

    fn height(&self) -> i64 {
        self.height
    }

    fn mark_range(&mut self, y: i64, x0: i64, x1: i64) {
        if y < 0 || y >= self.height {
            return;
        }
        let (lo, hi) = (x0.max(0), x1.min(self.width - 1));
        if lo <= hi {
            let base = (y * self.width) as usize;
            self.alpha[base + lo as usize..=base + hi as usize].fill(u8::MAX);
        }
    }

    /// Images are painted in full; `min_label_height` is ignored.
    fn mark_rect(&mut self, r: &PixelRect, _min_label_height: i64) {
        for y in r.y0..=r.y1 {
            self.mark_range(y, r.x0, r.x1);
        }
    }
}

/// One particle per pixel whose center a mark covers.
pub fn sample_original<T: Scalar>(
    marks: &[Mark<T>],
    width: i64,
    height: i64,
) -> Result<Vec<Point<T>>> {
    let img = CoverageImage::render(width, height, marks, Coverage::CenterSampled)?;
    let mut out = Vec::new();
    for y in 0..height {
        for (x, &a) in img.row(y).iter().enumerate() {
            if a != 0 {
                out.push(center(x as i64, y));
            }
        }
    }
    Ok(out)
}

/// Corners of every touched pixel that lies on the outline of the covered
/// region or on the `min_width` × `min_height` lattice, deduplicated, in
/// row-major order.
pub fn sample_improved<T: Scalar>(
    marks: &[Mark<T>],
    width: i64,
    height: i64,
    min_width: i64,
    min_height: i64,
) -> Result<Vec<Point<T>>> {
    let img = CoverageImage::render(width, height, marks, Coverage::Conservative)?;
    let (sx, sy) = (min_width.max(1), min_height.max(1));
    let w = width as usize;
    let empty = vec![0u8; w];
    // Sample columns of the previous and current pixel rows; corner row `cy`
    // touches pixel rows `cy - 1` and `cy`.
    let mut above: Vec<usize> = Vec::new();
    let mut here: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for cy in 0..=height {
        here.clear();
        if cy < height {
            let y = cy;
            let row = img.row(y);
            let up = if y > 0 { img.row(y - 1) } else { &empty[..] };
            let down = if y + 1 < height { img.row(y + 1) } else { &empty[..] };
            let lattice_row = y % sy == 0;
            for (x, &a) in row.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let interior = x > 0
                    && x + 1 < w
                    && row[x - 1] != 0
                    && row[x + 1] != 0
                    && up[x] != 0
                    && down[x] != 0;
                if !interior || (lattice_row && x as i64 % sx == 0) {
                    here.push(x);
                }
            }
        }
        // Merge the two sorted column lists into corner columns.
        let (mut i, mut j) = (0, 0);
        let mut last: Option<usize> = None;
        while i < above.len() || j < here.len() {
            let x = if j >= here.len() || (i < above.len() && above[i] <= here[j]) {
                i += 1;
                above[i - 1]
            } else {
                j += 1;
                here[j - 1]
            };
            for cx in [x, x + 1] {
                if last.is_none_or(|l| cx > l) {
                    out.push(Point::new(T::from_i64_lossy(cx as i64), T::from_i64_lossy(cy)));
                    last = Some(cx);
                }
            }
        }
        std::mem::swap(&mut above, &mut here);
    }
    Ok(out)
}

/// Particles representing a placed label.
pub fn label_particles<T: Scalar>(
    rect: &PixelRect,
    variant: ParticleVariant,
    min_width: i64,
    min_height: i64,
) -> Vec<Point<T>> {
    match variant {
        ParticleVariant::Original => rect.pixels().map(|(x, y)| center(x, y)).collect(),
        ParticleVariant::Improved => {
            // Corners of the border pixels are the two outermost corner rings;
            // interior lattice pixels add their own corners.
            let (w, h) = (rect.width() + 1, rect.height() + 1);
            let mut hit = vec![false; (w * h) as usize];
            let mut add = |x: i64, y: i64| {
                for (cx, cy) in [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)] {
                    hit[(cy * w + cx) as usize] = true;
                }
            };
            let (pw, ph) = (rect.width(), rect.height());
            for y in 0..ph {
                for x in 0..pw {
                    let border = x == 0 || y == 0 || x == pw - 1 || y == ph - 1;
                    if border || (x % min_width.max(1) == 0 && y % min_height.max(1) == 0) {
                        add(x, y);
                    }
                }
            }
            let mut out = Vec::new();
            for cy in 0..h {
                for cx in 0..w {
                    if hit[(cy * w + cx) as usize] {
                        out.push(Point::new(
                            T::from_i64_lossy(rect.x0 + cx),
                            T::from_i64_lossy(rect.y0 + cy),
                        ));
                    }
                }
            }
            out
        }
    }
}

fn center<T: Scalar>(x: i64, y: i64) -> Point<T> {
    Point::new(
        T::from_i64_lossy(x) + T::HALF,
        T::from_i64_lossy(y) + T::HALF,
    )
}

/// Uniform grid over the chart; points outside it fall into the edge cells.
#[derive(Debug, Clone)]
pub struct ParticleGrid<T> {
    cell: T,
    cols: i64,
    rows: i64,
    cells: Vec<Vec<Point<T>>>,
    len: usize,
}

impl<T: Scalar> ParticleGrid<T> {
    pub fn new(width: i64, height: i64, cell_size: i64) -> Self {
        let cs = cell_size.max(1);
        let cols = (width.max(1) + cs - 1) / cs + 1;
        let rows = (height.max(1) + cs - 1) / cs + 1;
        ParticleGrid {
            cell: T::from_i64_lossy(cs),
            cols,
            rows,
            cells: vec![Vec::new(); (cols * rows) as usize],
            len: 0,
        }
    }

    fn cell_of(&self, x: T, y: T) -> (i64, i64) {
        (
            (x / self.cell).floor_i64().clamp(0, self.cols - 1),
            (y / self.cell).floor_i64().clamp(0, self.rows - 1),
        )
    }

    pub fn insert(&mut self, p: Point<T>) {
        let (cx, cy) = self.cell_of(p.x, p.y);
        self.cells[(cy * self.cols + cx) as usize].push(p);
        self.len += 1;
    }

    pub fn extend<I: IntoIterator<Item = Point<T>>>(&mut self, points: I) {
        for p in points {
            self.insert(p);
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// True when some particle lies strictly inside `r`.
    pub fn any_in(&self, r: &Rect<T>) -> bool {
        let (cx0, cy0) = self.cell_of(r.x0, r.y0);
        let (cx1, cy1) = self.cell_of(r.x1, r.y1);
        for cy in cy0..=cy1 {
            for cx in cx0..=cx1 {
                if self.cells[(cy * self.cols + cx) as usize]
                    .iter()
                    .any(|p| p.x > r.x0 && p.x < r.x1 && p.y > r.y0 && p.y < r.y1)
                {
                    return true;
                }
            }
        }
        false
    }

    pub fn points(&self) -> impl Iterator<Item = &Point<T>> {
        self.cells.iter().flatten()
    }
}

#[derive(Debug, Clone)]
pub struct ParticleIndex<T> {
    pub grid: ParticleGrid<T>,
    pub variant: ParticleVariant,
    pub min_label_width: i64,
    pub min_label_height: i64,
}

impl<T: Scalar> OccupancyIndex for ParticleIndex<T> {
    fn is_free(&self, rect: &PixelRect) -> bool {
        !self.grid.any_in(&rect.to_rect())
    }

    fn occupy(&mut self, rect: &PixelRect) {
        self.grid.extend(label_particles(
            rect,
            self.variant,
            self.min_label_width,
            self.min_label_height,
        ));
    }
}

/// Samples the avoided marks of a prepared run into a grid.
pub fn build_index<T: Scalar>(prep: &PreparedRun<T>, variant: ParticleVariant) -> Result<ParticleIndex<T>> {
    let points = match variant {
        ParticleVariant::Original => sample_original(&prep.avoid_marks, prep.width, prep.height)?,
        ParticleVariant::Improved => sample_improved(
            &prep.avoid_marks,
            prep.width,
            prep.height,
            prep.min_label_width,
            prep.min_label_height,
        )?,
    };
    let mut grid = ParticleGrid::new(prep.width, prep.height, prep.max_label_extent);
    grid.extend(points);
    Ok(ParticleIndex {
        grid,
        variant,
        min_label_width: prep.min_label_width,
        min_label_height: prep.min_label_height,
    })
}

#[derive(Debug, Clone)]
pub struct ParticleRun<T> {
    pub placements: Vec<Placement<T>>,
    pub events: Vec<PlacementEvent>,
    /// Particles sampled from marks, before any label is placed.
    pub mark_particles: usize,
}

pub fn place_labels_particle<T: Scalar>(
    scene: &Scene<T>,
    config: &LabelConfig<T>,
    variant: ParticleVariant,
) -> Result<Vec<Placement<T>>> {
    Ok(place_labels_particle_with(scene, config, variant, false)?.placements)
}

pub fn place_labels_particle_with<T: Scalar>(
    scene: &Scene<T>,
    config: &LabelConfig<T>,
    variant: ParticleVariant,
    record_events: bool,
) -> Result<ParticleRun<T>> {
    let prep = prepare(scene, config)?;
    let mut index = build_index(&prep, variant)?;
    let mark_particles = index.grid.len();
    let mut events = Vec::new();
    let placements = run_greedy(&prep, &mut index, record_events.then_some(&mut events));
    Ok(ParticleRun {
        placements,
        events,
        mark_particles,
    })
}
