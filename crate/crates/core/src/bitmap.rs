//! Word-packed occupancy bitmap.
//!
//! Pixel `(x, y)` of a `width × height` chart lives at flat bit position
//! `p = y * width + x`: bit `p mod n` of word `p / n`, where `n` is the word
//! width. Bits are ordered most-significant-first inside a word, so pixel
//! offset `k` is stored at bit `n - 1 - k`. Row ranges decompose into words
//! that are fully covered (compared or assigned whole) and at most two edge
//! words that are masked with AND (lookup) or OR (update).

use std::io::Write;

use crate::error::{Error, Result};
use crate::geom::PixelRect;

/// Word widths accepted by [`OccupancyBitmap::new`]. Width 4 exists so small
/// worked examples can be checked nibble by nibble.
pub const SUPPORTED_WORD_BITS: [u32; 5] = [4, 8, 16, 32, 64];

/// Widest native unsigned integer.
pub const DEFAULT_WORD_BITS: u32 = u64::BITS;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyBitmap {
    width: usize,
    height: usize,
    word_bits: u32,
    words: Vec<u64>,
}

/// One storage word touched by a row range, with the in-range bits set in `mask`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordMask {
    pub index: usize,
    pub mask: u64,
    /// The whole word lies inside the range.
    pub full: bool,
}

impl OccupancyBitmap {
    pub fn new(width: i64, height: i64, word_bits: u32) -> Result<Self> {
        if width < 1 || height < 1 {
            return Err(Error::invalid(format!(
                "bitmap dimensions must be positive, got {width}x{height}"
            )));
        }
        if !SUPPORTED_WORD_BITS.contains(&word_bits) {
            return Err(Error::invalid(format!(
                "word width {word_bits} not in {SUPPORTED_WORD_BITS:?}"
            )));
        }
        let (width, height) = (width as usize, height as usize);
        let bits = width
            .checked_mul(height)
            .ok_or_else(|| Error::invalid("bitmap too large"))?;
        let len = bits.div_ceil(word_bits as usize);
        Ok(OccupancyBitmap {
            width,
            height,
            word_bits,
            words: vec![0; len],
        })
    }

    pub fn with_default_words(width: i64, height: i64) -> Result<Self> {
        Self::new(width, height, DEFAULT_WORD_BITS)
    }

    pub fn width(&self) -> i64 {
        self.width as i64
    }

    pub fn height(&self) -> i64 {
        self.height as i64
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }

    /// Raw storage; only the low `word_bits` bits of each entry are used.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn bounds(&self) -> PixelRect {
        PixelRect::new(0, 0, self.width() - 1, self.height() - 1)
    }

    #[inline]
    fn full_word(&self) -> u64 {
        u64::MAX >> (64 - self.word_bits)
    }

    /// Mask selecting offsets `a..=b` (MSB-first) of a word.
    #[inline]
    fn span_mask(&self, a: u32, b: u32) -> u64 {
        let len = b - a + 1;
        let low = u64::MAX >> (64 - len);
        low << (self.word_bits - 1 - b)
    }

    #[inline]
    fn locate(&self, x: usize, y: usize) -> (usize, u32) {
        // Word widths are powers of two.
        let pos = y * self.width + x;
        let shift = self.word_bits.trailing_zeros();
        (pos >> shift, (pos & (self.word_bits as usize - 1)) as u32)
    }

    fn in_bounds(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    /// Clips a row range; `None` when nothing of it lies on the chart.
    #[inline]
    fn clip_range(&self, y: i64, x0: i64, x1: i64) -> Option<(usize, usize, usize)> {
        if y < 0 || y as usize >= self.height {
            return None;
        }
        let lo = x0.max(0);
        let hi = x1.min(self.width as i64 - 1);
        if lo > hi {
            return None;
        }
        Some((y as usize, lo as usize, hi as usize))
    }

    pub fn get(&self, x: i64, y: i64) -> bool {
        if !self.in_bounds(x, y) {
            return false;
        }
        let (w, k) = self.locate(x as usize, y as usize);
        self.words[w] & (1 << (self.word_bits - 1 - k)) != 0
    }

    /// Marks one pixel; coordinates off the chart are ignored.
    pub fn set_pixel(&mut self, x: i64, y: i64) {
        if !self.in_bounds(x, y) {
            return;
        }
        let (w, k) = self.locate(x as usize, y as usize);
        self.words[w] |= 1 << (self.word_bits - 1 - k);
    }

    /// Decomposes the row range `[x0, x1]` of row `y` (after clipping) into
    /// the storage words it touches.
    pub fn range_masks(&self, y: i64, x0: i64, x1: i64) -> Vec<WordMask> {
        let Some((y, x0, x1)) = self.clip_range(y, x0, x1) else {
            return Vec::new();
        };
        let (ws, a) = self.locate(x0, y);
        let (we, b) = self.locate(x1, y);
        let last = self.word_bits - 1;
        if ws == we {
            let mask = self.span_mask(a, b);
            return vec![WordMask {
                index: ws,
                mask,
                full: mask == self.full_word(),
            }];
        }
        let mut out = Vec::with_capacity(we - ws + 1);
        out.push(WordMask {
            index: ws,
            mask: self.span_mask(a, last),
            full: a == 0,
        });
        for index in ws + 1..we {
            out.push(WordMask {
                index,
                mask: self.full_word(),
                full: true,
            });
        }
        out.push(WordMask {
            index: we,
            mask: self.span_mask(0, b),
            full: b == last,
        });
        out
    }

    /// Whether any pixel of row `y` in columns `[x0, x1]` is occupied.
    pub fn range_occupied(&self, y: i64, x0: i64, x1: i64) -> bool {
        let Some((y, x0, x1)) = self.clip_range(y, x0, x1) else {
            return false;
        };
        let (ws, a) = self.locate(x0, y);
        let (we, b) = self.locate(x1, y);
        if ws == we {
            return self.words[ws] & self.span_mask(a, b) != 0;
        }
        if self.words[ws] & self.span_mask(a, self.word_bits - 1) != 0 {
            return true;
        }
        if self.words[ws + 1..we].iter().any(|&w| w != 0) {
            return true;
        }
        self.words[we] & self.span_mask(0, b) != 0
    }

    /// Marks row `y`, columns `[x0, x1]`; bits outside the range are kept.
    pub fn mark_range(&mut self, y: i64, x0: i64, x1: i64) {
        let Some((y, x0, x1)) = self.clip_range(y, x0, x1) else {
            return;
        };
        let (ws, a) = self.locate(x0, y);
        let (we, b) = self.locate(x1, y);
        if ws == we {
            self.words[ws] |= self.span_mask(a, b);
            return;
        }
        let full = self.full_word();
        self.words[ws] |= self.span_mask(a, self.word_bits - 1);
        self.words[ws + 1..we].fill(full);
        self.words[we] |= self.span_mask(0, b);
    }

    /// Whether any pixel of `r` is occupied. Every row is inspected.
    pub fn rect_occupied(&self, r: &PixelRect) -> bool {
        let y0 = r.y0.max(0);
        let y1 = r.y1.min(self.height() - 1);
        (y0..=y1).any(|y| self.range_occupied(y, r.x0, r.x1))
    }

    /// Marks `r` as occupied, writing only its first row, its last row and
    /// every `min_label_height`-th row in between (counted from the top of
    /// the clipped rect). Any query of height `>= min_label_height` that
    /// intersects `r` still hits a written row.
    pub fn mark_rect(&mut self, r: &PixelRect, min_label_height: i64) {
        let clipped = r.intersection(&self.bounds());
        if clipped.is_empty() {
            return;
        }
        let step = min_label_height.max(1) as usize;
        for y in (clipped.y0..clipped.y1).step_by(step) {
            self.mark_range(y, clipped.x0, clipped.x1);
        }
        self.mark_range(clipped.y1, clipped.x0, clipped.x1);
    }

    /// Marks every row of `r`.
    pub fn fill_rect(&mut self, r: &PixelRect) {
        self.mark_rect(r, 1);
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_clear(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Calls `f(x, y)` for every occupied pixel in row-major order.
    pub fn for_each_occupied(&self, mut f: impl FnMut(i64, i64)) {
        let n = self.word_bits as usize;
        for (i, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let lead = bits.leading_zeros() as usize - (64 - n);
                bits &= !(1u64 << (n - 1 - lead));
                let pos = i * n + lead;
                f((pos % self.width) as i64, (pos / self.width) as i64);
            }
        }
    }

    /// Plain PGM (P2): one sample per pixel, 0 = free, 1 = occupied.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "P2")?;
        writeln!(out, "{} {}", self.width, self.height)?;
        writeln!(out, "1")?;
        let mut line = String::with_capacity(self.width * 2);
        for y in 0..self.height() {
            line.clear();
            for x in 0..self.width() {
                if x > 0 {
                    line.push(' ');
                }
                line.push(if self.get(x, y) { '1' } else { '0' });
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_pgm(&self) -> String {
        let mut buf = Vec::new();
        self.write_pgm(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("PGM output is ASCII")
    }
}
