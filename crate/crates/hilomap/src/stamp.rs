//! The circle stamp: the one rasterized shape every point-overlay renderer
//! draws, plus the alpha compositing rule used to accumulate drawings.
//!
//! A stamp is the indicator of a disc of the given radius, optionally
//! softened by a truncated Gaussian blur. Blur of `b` pixels convolves with
//! a normalized Gaussian of `sigma = b / 2` truncated at `+-b` pixels and
//! renormalized, so the stamp side is exactly `2 * (radius + blur) + 1`.

use crate::error::{Error, Result};
use crate::types::AlphaPlane;

/// Stamp geometry: disc radius and blur reach, both in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StampParams {
    radius: u32,
    blur: u32,
}

impl StampParams {
    pub fn new(radius: u32, blur: u32) -> Result<Self> {
        if radius < 1 {
            return Err(Error::Config("stamp radius must be at least 1".into()));
        }
        Ok(Self { radius, blur })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn blur(&self) -> u32 {
        self.blur
    }

    /// Chebyshev reach of the stamp from its center, `radius + blur`.
    pub fn footprint(&self) -> u32 {
        self.radius + self.blur
    }
}

/// How stamp drawings accumulate on an [`AlphaPlane`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composite {
    /// `a' = a_s + a_d * (1 - a_s)`; the multi-draw closed form is
    /// `1 - prod(1 - a_i)`. Matches canvas-style shape drawing.
    SourceOver,
    /// `a' = min(1, a_d + a_s)`.
    SaturatingAdd,
}

impl Composite {
    #[inline]
    pub fn apply(&self, dst: f64, src: f64) -> f64 {
        let out = match self {
            Composite::SourceOver => src + dst * (1.0 - src),
            Composite::SaturatingAdd => dst + src,
        };
        out.clamp(0.0, 1.0)
    }
}

impl std::str::FromStr for Composite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "source-over" => Ok(Composite::SourceOver),
            "saturating-add" => Ok(Composite::SaturatingAdd),
            other => Err(Error::Config(format!(
                "unknown composite '{other}', want source-over or saturating-add"
            ))),
        }
    }
}

/// The rasterized circle that gets blitted once per drawn point.
#[derive(Debug, Clone, PartialEq)]
pub struct Stamp {
    params: StampParams,
    extent: i64,
    side: usize,
    values: Vec<f64>,
}

impl Stamp {
    /// Build the stamp for the given parameters with the default blur
    /// kernel (`sigma = blur / 2`, truncated at `+-blur`).
    pub fn build(params: StampParams) -> Self {
        let blur = params.blur();
        Self::build_with_kernel(params, blur as f64 / 2.0, blur)
    }

    /// Build with an explicit Gaussian width and truncation reach. The
    /// truncation may not exceed the declared blur, which fixes the stamp
    /// side.
    pub fn build_with_kernel(params: StampParams, sigma: f64, truncate: u32) -> Self {
        assert!(
            truncate <= params.blur(),
            "kernel truncation {} exceeds blur {}",
            truncate,
            params.blur()
        );
        let extent = params.footprint() as i64;
        let side = (2 * extent + 1) as usize;
        let mut values = vec![0.0f64; side * side];

        let r2 = (params.radius() as i64).pow(2);
        for dy in -extent..=extent {
            for dx in -extent..=extent {
                if dx * dx + dy * dy <= r2 {
                    values[((dy + extent) * (2 * extent + 1) + dx + extent) as usize] = 1.0;
                }
            }
        }

        if params.blur() > 0 && truncate > 0 && sigma > 0.0 {
            let kernel = half_gaussian(sigma, truncate);
            values = convolve_rows(&values, side, &kernel);
            values = transpose(&values, side);
            values = convolve_rows(&values, side, &kernel);
            values = transpose(&values, side);
            for v in &mut values {
                *v = v.clamp(0.0, 1.0);
            }
        }

        Self {
            params,
            extent,
            side,
            values,
        }
    }

    pub fn params(&self) -> StampParams {
        self.params
    }

    /// Chebyshev reach from the center cell.
    pub fn extent(&self) -> i64 {
        self.extent
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Value at the given offset from the center; zero outside the stamp.
    #[inline]
    pub fn value(&self, dx: i64, dy: i64) -> f64 {
        if dx.abs() > self.extent || dy.abs() > self.extent {
            return 0.0;
        }
        self.values[((dy + self.extent) * self.side as i64 + dx + self.extent) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Whether a stamp anchored at `(cx, cy)` overlaps a `width x height`
    /// raster at all. Anything failing this is culled without a blit.
    pub fn touches(&self, cx: i64, cy: i64, width: u32, height: u32) -> bool {
        cx + self.extent >= 0
            && cx - self.extent < width as i64
            && cy + self.extent >= 0
            && cy - self.extent < height as i64
    }
}

/// Normalized half kernel: `kernel[t]` for offsets `0..=truncate` with
/// `kernel[0] + 2 * sum(kernel[1..]) = 1`.
fn half_gaussian(sigma: f64, truncate: u32) -> Vec<f64> {
    let mut kernel: Vec<f64> = (0..=truncate as i64)
        .map(|t| (-((t * t) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total = kernel[0] + 2.0 * kernel[1..].iter().sum::<f64>();
    for k in &mut kernel {
        *k /= total;
    }
    kernel
}

/// One horizontal pass of the separable blur. Offsets are summed in
/// symmetric pairs so a mirror-symmetric input stays bitwise symmetric.
fn convolve_rows(values: &[f64], side: usize, kernel: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0f64; values.len()];
    let reach = kernel.len() - 1;
    for y in 0..side {
        let row = &values[y * side..(y + 1) * side];
        for x in 0..side {
            let mut acc = kernel[0] * row[x];
            for t in 1..=reach {
                let left = if x >= t { row[x - t] } else { 0.0 };
                let right = if x + t < side { row[x + t] } else { 0.0 };
                acc += kernel[t] * (left + right);
            }
            out[y * side + x] = acc;
        }
    }
    out
}

fn transpose(values: &[f64], side: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; values.len()];
    for y in 0..side {
        for x in 0..side {
            out[x * side + y] = values[y * side + x];
        }
    }
    out
}

/// Composite a stamp onto the plane with its center at the pixel containing
/// the continuous position `center`. Off-plane cells are silently clipped.
pub fn blit(plane: &mut AlphaPlane, stamp: &Stamp, center: (f64, f64), opacity: f64, mode: Composite) {
    blit_at(
        plane,
        stamp,
        center.0.floor() as i64,
        center.1.floor() as i64,
        opacity,
        mode,
    )
}

/// Composite a stamp anchored at an integer pixel.
pub fn blit_at(plane: &mut AlphaPlane, stamp: &Stamp, cx: i64, cy: i64, opacity: f64, mode: Composite) {
    debug_assert!((0.0..=1.0).contains(&opacity));
    if opacity <= 0.0 {
        return;
    }
    let width = plane.width() as i64;
    let height = plane.height() as i64;
    let ext = stamp.extent();
    let side = stamp.side() as i64;

    let y0 = (cy - ext).max(0);
    let y1 = (cy + ext).min(height - 1);
    let x0 = (cx - ext).max(0);
    let x1 = (cx + ext).min(width - 1);
    if y0 > y1 || x0 > x1 {
        return;
    }

    let stamp_values = stamp.values();
    let plane_width = plane.width() as usize;
    let values = plane.values_mut();
    for py in y0..=y1 {
        let sy = py - cy + ext;
        let stamp_row = &stamp_values[(sy * side) as usize..(sy * side + side) as usize];
        let plane_row = &mut values[py as usize * plane_width..(py as usize + 1) * plane_width];
        for px in x0..=x1 {
            let sx = (px - cx + ext) as usize;
            let src = opacity * stamp_row[sx];
            let dst = plane_row[px as usize];
            plane_row[px as usize] = mode.apply(dst, src);
        }
    }
}
