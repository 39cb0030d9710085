//! Core domain types: weighted points, the viewport, and the two raster
//! surfaces every renderer works on (a floating-point alpha accumulation
//! plane and the final 8-bit RGBA image).

use crate::error::{Error, Result};

/// One observation: a geographic position plus a weight in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedPoint {
    /// Degrees east, `[-180, 180]`.
    pub lon: f64,
    /// Degrees north, restricted to the Web Mercator valid range.
    pub lat: f64,
    /// Unitless weight in `[0, 1]` after ingestion.
    pub weight: f64,
}

impl WeightedPoint {
    pub fn new(lon: f64, lat: f64, weight: f64) -> Self {
        Self { lon, lat, weight }
    }
}

/// An ordered sequence of weighted points. Input order is preserved because
/// aggregation tie-breaking depends on it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointSet {
    points: Vec<WeightedPoint>,
}

impl PointSet {
    pub fn new(points: Vec<WeightedPoint>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, WeightedPoint> {
        self.points.iter()
    }

    pub fn as_slice(&self) -> &[WeightedPoint] {
        &self.points
    }
}

impl FromIterator<WeightedPoint> for PointSet {
    fn from_iter<T: IntoIterator<Item = WeightedPoint>>(iter: T) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// A point already projected onto the raster, in continuous pixel
/// coordinates. Column `x` grows right, row `y` grows down; pixel `(i, j)`
/// covers `[i, i+1) x [j, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelPoint {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
}

impl PixelPoint {
    pub fn new(x: f64, y: f64, weight: f64) -> Self {
        Self { x, y, weight }
    }
}

/// Clamp a weight into `[0, 1]`.
///
/// Non-finite weights are rejected; callers doing ingestion attach the
/// offending record to the error.
pub fn clamp_weight(w: f64) -> Result<f64> {
    if !w.is_finite() {
        return Err(Error::Ingest(format!("weight {w} is not finite")));
    }
    Ok(w.clamp(0.0, 1.0))
}

/// The output window: a projected bounding box in meters mapped onto a
/// `width_px x height_px` pixel grid, row 0 at the top (`max_y`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
    width_px: u32,
    height_px: u32,
}

impl Viewport {
    /// Build a viewport, rejecting degenerate boxes and zero-sized rasters.
    pub fn new(bbox: (f64, f64, f64, f64), width_px: u32, height_px: u32) -> Result<Self> {
        let (min_x, min_y, max_x, max_y) = bbox;
        if !(min_x.is_finite() && min_y.is_finite() && max_x.is_finite() && max_y.is_finite()) {
            return Err(Error::Config("bounding box must be finite".into()));
        }
        if max_x <= min_x || max_y <= min_y {
            return Err(Error::Config(format!(
                "degenerate bounding box ({min_x}, {min_y}, {max_x}, {max_y})"
            )));
        }
        if width_px == 0 || height_px == 0 {
            return Err(Error::Config("raster dimensions must be at least 1x1".into()));
        }
        Ok(Self {
            min_x,
            min_y,
            max_x,
            max_y,
            width_px,
            height_px,
        })
    }

    pub fn bbox(&self) -> (f64, f64, f64, f64) {
        (self.min_x, self.min_y, self.max_x, self.max_y)
    }

    pub fn min_x(&self) -> f64 {
        self.min_x
    }

    pub fn min_y(&self) -> f64 {
        self.min_y
    }

    pub fn max_x(&self) -> f64 {
        self.max_x
    }

    pub fn max_y(&self) -> f64 {
        self.max_y
    }

    pub fn width_px(&self) -> u32 {
        self.width_px
    }

    pub fn height_px(&self) -> u32 {
        self.height_px
    }

    pub fn span_x(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn span_y(&self) -> f64 {
        self.max_y - self.min_y
    }
}

/// Dense row-major accumulation surface holding per-pixel opacity in `[0, 1]`.
///
/// This is where stamp drawings composite before any color is assigned;
/// the hilomap low/high/all buffers are planes too. Values stay in `[0, 1]`
/// under every compositing sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaPlane {
    width: u32,
    height: u32,
    values: Vec<f64>,
}

impl AlphaPlane {
    /// All-zero plane of the given dimensions.
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            values: vec![0.0; width as usize * height as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    fn index(&self, x: u32, y: u32) -> usize {
        y as usize * self.width as usize + x as usize
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> f64 {
        self.values[self.index(x, y)]
    }

    /// Overwrite one pixel's value, clamped into `[0, 1]`.
    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: f64) {
        let i = self.index(x, y);
        self.values[i] = value.clamp(0.0, 1.0);
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Largest absolute per-pixel difference between two planes of equal size.
    pub fn max_abs_diff(&self, other: &AlphaPlane) -> f64 {
        assert_eq!(self.width, other.width);
        assert_eq!(self.height, other.height);
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Final output image: dense row-major 8-bit RGBA.
///
/// Fully transparent pixels carry no color: `A = 0` implies `R = G = B = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbaRaster {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl RgbaRaster {
    /// Fully transparent raster.
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            pixels: vec![0; width as usize * height as usize * 4],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    fn index(&self, x: u32, y: u32) -> usize {
        (y as usize * self.width as usize + x as usize) * 4
    }

    #[inline]
    pub fn pixel(&self, x: u32, y: u32) -> [u8; 4] {
        let i = self.index(x, y);
        [
            self.pixels[i],
            self.pixels[i + 1],
            self.pixels[i + 2],
            self.pixels[i + 3],
        ]
    }

    /// Write one pixel. A zero-alpha write zeroes the color channels so the
    /// transparency invariant cannot be broken.
    #[inline]
    pub fn set_pixel(&mut self, x: u32, y: u32, rgba: [u8; 4]) {
        let i = self.index(x, y);
        if rgba[3] == 0 {
            self.pixels[i..i + 4].copy_from_slice(&[0, 0, 0, 0]);
        } else {
            self.pixels[i..i + 4].copy_from_slice(&rgba);
        }
    }

    /// Raw row-major RGBA bytes.
    pub fn data(&self) -> &[u8] {
        &self.pixels
    }
}
