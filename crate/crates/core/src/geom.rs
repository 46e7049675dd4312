//! Continuous chart geometry and integral pixel rectangles.
//!
//! Pixel `(x, y)` covers the closed unit square `[x, x+1] × [y, y+1]` of the
//! continuous plane; its center is `(x + 0.5, y + 0.5)`.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(
    from = "[T; 2]",
    into = "[T; 2]",
    bound(serialize = "T: Serialize + Copy", deserialize = "T: Deserialize<'de>")
)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point<T> {
    pub const fn new(x: T, y: T) -> Self {
        Point { x, y }
    }
}

impl<T> From<[T; 2]> for Point<T> {
    fn from([x, y]: [T; 2]) -> Self {
        Point { x, y }
    }
}

impl<T> From<Point<T>> for [T; 2] {
    fn from(p: Point<T>) -> Self {
        [p.x, p.y]
    }
}

impl<T: Scalar> Point<T> {
    pub fn translated(self, dx: T, dy: T) -> Self {
        Point::new(self.x + dx, self.y + dy)
    }

    pub fn distance(self, other: Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Axis-aligned continuous rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(
    from = "[T; 4]",
    into = "[T; 4]",
    bound(serialize = "T: Serialize + Copy", deserialize = "T: Deserialize<'de>")
)]
pub struct Rect<T> {
    pub x0: T,
    pub y0: T,
    pub x1: T,
    pub y1: T,
}

impl<T> From<[T; 4]> for Rect<T> {
    fn from([x0, y0, x1, y1]: [T; 4]) -> Self {
        Rect { x0, y0, x1, y1 }
    }
}

impl<T> From<Rect<T>> for [T; 4] {
    fn from(r: Rect<T>) -> Self {
        [r.x0, r.y0, r.x1, r.y1]
    }
}

impl<T: Scalar> Rect<T> {
    pub fn new(x0: T, y0: T, x1: T, y1: T) -> Self {
        Rect { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> T {
        self.x1 - self.x0
    }

    pub fn height(&self) -> T {
        self.y1 - self.y0
    }

    pub fn is_valid(&self) -> bool {
        self.x0 <= self.x1 && self.y0 <= self.y1
    }

    pub fn inflated(&self, by: T) -> Self {
        Rect::new(self.x0 - by, self.y0 - by, self.x1 + by, self.y1 + by)
    }

    pub fn translated(&self, dx: T, dy: T) -> Self {
        Rect::new(self.x0 + dx, self.y0 + dy, self.x1 + dx, self.y1 + dy)
    }

    /// Bounding box of a point set; `None` when empty.
    pub fn bounding<I: IntoIterator<Item = Point<T>>>(points: I) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut r = Rect::new(first.x, first.y, first.x, first.y);
        for p in it {
            r.x0 = r.x0.min(p.x);
            r.y0 = r.y0.min(p.y);
            r.x1 = r.x1.max(p.x);
            r.y1 = r.y1.max(p.y);
        }
        Some(r)
    }

    /// Closed containment.
    pub fn contains(&self, p: Point<T>) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }
}

/// Integral label size in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PixelSize {
    pub width: i64,
    pub height: i64,
}

impl PixelSize {
    pub const fn new(width: i64, height: i64) -> Self {
        PixelSize { width, height }
    }
}

/// Inclusive rectangle of pixels: columns `x0..=x1`, rows `y0..=y1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 4]", into = "[i64; 4]")]
pub struct PixelRect {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl From<[i64; 4]> for PixelRect {
    fn from([x0, y0, x1, y1]: [i64; 4]) -> Self {
        PixelRect { x0, y0, x1, y1 }
    }
}

impl From<PixelRect> for [i64; 4] {
    fn from(r: PixelRect) -> Self {
        [r.x0, r.y0, r.x1, r.y1]
    }
}

impl PixelRect {
    pub const fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Self {
        PixelRect { x0, y0, x1, y1 }
    }

    /// Rectangle of `size` whose top-left pixel is `(x0, y0)`.
    pub const fn with_size(x0: i64, y0: i64, size: PixelSize) -> Self {
        PixelRect::new(x0, y0, x0 + size.width - 1, y0 + size.height - 1)
    }

    pub const fn width(&self) -> i64 {
        self.x1 - self.x0 + 1
    }

    pub const fn height(&self) -> i64 {
        self.y1 - self.y0 + 1
    }

    pub const fn size(&self) -> PixelSize {
        PixelSize::new(self.width(), self.height())
    }

    pub const fn is_empty(&self) -> bool {
        self.x1 < self.x0 || self.y1 < self.y0
    }

    pub fn area(&self) -> i64 {
        if self.is_empty() {
            0
        } else {
            self.width() * self.height()
        }
    }

    pub fn intersects(&self, other: &PixelRect) -> bool {
        !self.is_empty()
            && !other.is_empty()
            && self.x0 <= other.x1
            && other.x0 <= self.x1
            && self.y0 <= other.y1
            && other.y0 <= self.y1
    }

    pub fn contains_rect(&self, other: &PixelRect) -> bool {
        other.x0 >= self.x0 && other.x1 <= self.x1 && other.y0 >= self.y0 && other.y1 <= self.y1
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    pub fn intersection(&self, other: &PixelRect) -> PixelRect {
        PixelRect::new(
            self.x0.max(other.x0),
            self.y0.max(other.y0),
            self.x1.min(other.x1),
            self.y1.min(other.y1),
        )
    }

    pub const fn translated(&self, dx: i64, dy: i64) -> PixelRect {
        PixelRect::new(self.x0 + dx, self.y0 + dy, self.x1 + dx, self.y1 + dy)
    }

    /// The continuous area covered by these pixels.
    pub fn to_rect<T: Scalar>(&self) -> Rect<T> {
        Rect::new(
            T::from_i64_lossy(self.x0),
            T::from_i64_lossy(self.y0),
            T::from_i64_lossy(self.x1 + 1),
            T::from_i64_lossy(self.y1 + 1),
        )
    }

    /// Every pixel whose closed unit square touches the closed rect `r`.
    pub fn touching<T: Scalar>(r: &Rect<T>) -> PixelRect {
        PixelRect::new(
            (r.x0 - T::one()).ceil_i64(),
            (r.y0 - T::one()).ceil_i64(),
            r.x1.floor_i64(),
            r.y1.floor_i64(),
        )
    }

    /// Rectangle of `size` centered on the continuous point `(cx, cy)`,
    /// snapping the top-left corner toward negative infinity.
    pub fn centered<T: Scalar>(cx: T, cy: T, size: PixelSize) -> PixelRect {
        let x0 = (cx - T::from_i64_lossy(size.width) * T::HALF).floor_i64();
        let y0 = (cy - T::from_i64_lossy(size.height) * T::HALF).floor_i64();
        PixelRect::with_size(x0, y0, size)
    }

    pub fn pixels(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.y0..=self.y1).flat_map(move |y| (self.x0..=self.x1).map(move |x| (x, y)))
    }
}

/// Euclidean distance from `p` to the closed segment `ab`.
pub fn point_segment_distance<T: Scalar>(p: Point<T>, a: Point<T>, b: Point<T>) -> T {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len2 = dx * dx + dy * dy;
    if len2 == T::zero() {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2)
        .max(T::zero())
        .min(T::one());
    p.distance(Point::new(a.x + t * dx, a.y + t * dy))
}

/// Euclidean distance from `p` to the closed axis-aligned box `r`.
pub fn point_box_distance<T: Scalar>(p: Point<T>, r: &Rect<T>) -> T {
    let dx = (r.x0 - p.x).max(p.x - r.x1).max(T::zero());
    let dy = (r.y0 - p.y).max(p.y - r.y1).max(T::zero());
    dx.hypot(dy)
}

/// Whether the closed segment `ab` touches the closed box `r` (Liang-Barsky).
pub fn segment_intersects_box<T: Scalar>(a: Point<T>, b: Point<T>, r: &Rect<T>) -> bool {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let mut t0 = T::zero();
    let mut t1 = T::one();
    for (p, q) in [
        (-dx, a.x - r.x0),
        (dx, r.x1 - a.x),
        (-dy, a.y - r.y0),
        (dy, r.y1 - a.y),
    ] {
        if p == T::zero() {
            if q < T::zero() {
                return false;
            }
        } else {
            let t = q / p;
            if p < T::zero() {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
            if t0 > t1 {
                return false;
            }
        }
    }
    true
}

/// Distance between the closed segment `ab` and the closed box `r`.
pub fn segment_box_distance<T: Scalar>(a: Point<T>, b: Point<T>, r: &Rect<T>) -> T {
    if segment_intersects_box(a, b, r) {
        return T::zero();
    }
    let corners = [
        Point::new(r.x0, r.y0),
        Point::new(r.x1, r.y0),
        Point::new(r.x0, r.y1),
        Point::new(r.x1, r.y1),
    ];
    corners
        .iter()
        .map(|&c| point_segment_distance(c, a, b))
        .fold(point_box_distance(a, r).min(point_box_distance(b, r)), T::min)
}

/// The closed unit square of pixel `(x, y)`.
pub fn pixel_square<T: Scalar>(x: i64, y: i64) -> Rect<T> {
    PixelRect::new(x, y, x, y).to_rect()
}

/// Pixel center.
pub fn pixel_center<T: Scalar>(x: i64, y: i64) -> Point<T> {
    Point::new(
        T::from_i64_lossy(x) + T::HALF,
        T::from_i64_lossy(y) + T::HALF,
    )
}
