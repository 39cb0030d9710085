//! The point-overlay renderers: direct, indirect, and hilomap.
//!
//! All three share one drawing model. Step 1 composites circle stamps onto
//! floating-point alpha planes (opacity carries weight); step 2 quantizes
//! each pixel's accumulated alpha to a byte exactly once and looks its color
//! up in a gradient table. Direct draws every point; indirect first
//! aggregates points onto a coarse heat grid and draws one representative
//! per cell, bounding the number of drawings by the grid size instead of the
//! point count.
//!
//! Hilomap highlights both low and high weight extremes on a diverging
//! gradient. Representatives are the per-cell points furthest from the
//! neutral weight; three stamp passes build a low plane (weights at or below
//! neutral, opacity `(neutral - w) * 2`), a high plane (weights above
//! neutral, opacity `(w - neutral) * 2`), and an all plane (every
//! representative at opacity `|w - neutral| * 2`) that supplies output
//! transparency. Coloring maps each pixel to
//! `w_color = 128 + (alpha_high - alpha_low) / 2`, rounded half-up and
//! clamped to `[0, 255]`, so balanced low/high overlap lands exactly on the
//! neutral color while one-sided extremes reach the gradient's ends.

use crate::error::{Error, Result};
use crate::gradient::GradientLut;
use crate::grid::HeatGrid;
use crate::projection::project_points;
use crate::stamp::{blit_at, Composite, Stamp, StampParams};
use crate::types::{AlphaPlane, PixelPoint, PointSet, RgbaRaster, Viewport};

/// Rendering algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Direct,
    Indirect,
    Hilomap,
    /// Slow interpolation reference; see the `oracle` module.
    Idw,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Direct => "direct",
            Mode::Indirect => "indirect",
            Mode::Hilomap => "hilomap",
            Mode::Idw => "idw",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Mode::Direct),
            "indirect" => Ok(Mode::Indirect),
            "hilomap" => Ok(Mode::Hilomap),
            "idw" => Ok(Mode::Idw),
            other => Err(Error::Config(format!(
                "unknown mode '{other}', want direct, indirect, hilomap, or idw"
            ))),
        }
    }
}

/// Everything a render needs besides the data and the viewport.
#[derive(Debug, Clone)]
pub struct RenderConfig {
    pub mode: Mode,
    pub stamp: StampParams,
    pub gradient: GradientLut,
    /// Heat grid cell edge in pixels.
    pub cell_size: u32,
    /// Opacity floor applied to direct/indirect drawings.
    pub min_opacity: f64,
    /// Weight from which hilomap measures extremity.
    pub neutral: f64,
    pub composite: Composite,
}

impl RenderConfig {
    /// Config with mode-appropriate defaults: the diverging gradient for
    /// hilomap and the heat ramp otherwise, cell size of half the radius,
    /// no opacity floor, neutral 0.5, source-over compositing.
    pub fn new(mode: Mode, stamp: StampParams) -> Self {
        let gradient = match mode {
            Mode::Hilomap => GradientLut::diverging(),
            _ => GradientLut::heat(),
        };
        Self {
            mode,
            stamp,
            gradient,
            cell_size: default_cell_size(&stamp),
            min_opacity: 0.0,
            neutral: 0.5,
            composite: Composite::SourceOver,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cell_size < 1 {
            return Err(Error::Config("cell size must be at least 1".into()));
        }
        if !(self.neutral > 0.0 && self.neutral < 1.0) {
            return Err(Error::Config(format!(
                "neutral weight {} must lie strictly inside (0, 1)",
                self.neutral
            )));
        }
        if !(0.0..=1.0).contains(&self.min_opacity) {
            return Err(Error::Config(format!(
                "min opacity {} outside [0, 1]",
                self.min_opacity
            )));
        }
        Ok(())
    }
}

/// Default heat grid cell edge: half the stamp radius, at least one pixel.
pub fn default_cell_size(stamp: &StampParams) -> u32 {
    (stamp.radius() / 2).max(1)
}

/// Instrumentation for one render.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderStats {
    /// Input points.
    pub points: usize,
    /// Occupied heat grid cells, for the aggregating modes.
    pub cells: Option<usize>,
    /// Exact number of stamp drawings performed (hilomap counts all three
    /// passes).
    pub blits: usize,
}

/// A finished render: the image plus its instrumentation.
#[derive(Debug, Clone)]
pub struct RenderedMap {
    pub raster: RgbaRaster,
    pub stats: RenderStats,
}

#[inline]
fn draw_opacity(weight: f64, min_opacity: f64) -> f64 {
    weight.clamp(0.0, 1.0).max(min_opacity)
}

/// Step 1 of direct rendering: composite one stamp per point onto an alpha
/// plane, opacity `max(clamp(w), min_opacity)`. Points whose stamp cannot
/// touch the raster are culled. Returns the plane and the blit count.
pub fn accumulate(
    points: &[PixelPoint],
    width_px: u32,
    height_px: u32,
    stamp: &Stamp,
    min_opacity: f64,
    composite: Composite,
) -> (AlphaPlane, usize) {
    let mut plane = AlphaPlane::new(width_px, height_px);
    let mut blits = 0;
    for p in points {
        let cx = p.x.floor() as i64;
        let cy = p.y.floor() as i64;
        if !stamp.touches(cx, cy, width_px, height_px) {
            continue;
        }
        blit_at(
            &mut plane,
            stamp,
            cx,
            cy,
            draw_opacity(p.weight, min_opacity),
            composite,
        );
        blits += 1;
    }
    (plane, blits)
}

/// Step 2: quantize each pixel's alpha to a byte and color it through the
/// gradient. Pixels quantizing to zero stay fully transparent.
pub fn colorize(plane: &AlphaPlane, gradient: &GradientLut) -> RgbaRaster {
    let mut raster = RgbaRaster::new(plane.width(), plane.height());
    for y in 0..plane.height() {
        for x in 0..plane.width() {
            let alpha = (255.0 * plane.get(x, y)).round() as u8;
            if alpha > 0 {
                let [r, g, b] = gradient.color(alpha);
                raster.set_pixel(x, y, [r, g, b, alpha]);
            }
        }
    }
    raster
}

/// Direct point overlay: one stamp per input point, then coloring.
pub fn render_direct(points: &PointSet, viewport: &Viewport, cfg: &RenderConfig) -> Result<RenderedMap> {
    cfg.validate()?;
    let pixel_points = project_points(points, viewport)?;
    Ok(render_direct_px(&pixel_points, viewport, cfg))
}

/// Direct point overlay over already-projected points.
pub fn render_direct_px(points: &[PixelPoint], viewport: &Viewport, cfg: &RenderConfig) -> RenderedMap {
    let stamp = Stamp::build(cfg.stamp);
    let (plane, blits) = accumulate(
        points,
        viewport.width_px(),
        viewport.height_px(),
        &stamp,
        cfg.min_opacity,
        cfg.composite,
    );
    RenderedMap {
        raster: colorize(&plane, &cfg.gradient),
        stats: RenderStats {
            points: points.len(),
            cells: None,
            blits,
        },
    }
}

/// Aggregate points onto the heat grid with the weighted-sum strategy.
pub fn aggregate_indirect(points: &PointSet, viewport: &Viewport, cfg: &RenderConfig) -> Result<HeatGrid> {
    cfg.validate()?;
    let pixel_points = project_points(points, viewport)?;
    Ok(HeatGrid::aggregate_weighted_sum(
        &pixel_points,
        viewport.width_px(),
        viewport.height_px(),
        cfg.cell_size,
    ))
}

/// Indirect point overlay: aggregate, then direct-render the
/// representatives. The blit count is bounded by the occupied cell count,
/// independent of how many points went in.
pub fn render_indirect(points: &PointSet, viewport: &Viewport, cfg: &RenderConfig) -> Result<RenderedMap> {
    let grid = aggregate_indirect(points, viewport, cfg)?;
    let reps: Vec<PixelPoint> = grid.representatives().copied().collect();
    let mut rendered = render_direct_px(&reps, viewport, cfg);
    rendered.stats = RenderStats {
        points: points.len(),
        cells: Some(grid.len()),
        blits: rendered.stats.blits,
    };
    Ok(rendered)
}

/// Aggregate points onto the heat grid keeping the per-cell point furthest
/// from the neutral weight.
pub fn aggregate_hilomap(points: &PointSet, viewport: &Viewport, cfg: &RenderConfig) -> Result<HeatGrid> {
    cfg.validate()?;
    let pixel_points = project_points(points, viewport)?;
    Ok(HeatGrid::aggregate_furthest_from(
        &pixel_points,
        viewport.width_px(),
        viewport.height_px(),
        cfg.cell_size,
        cfg.neutral,
    ))
}

/// The three alpha buffers hilomap accumulates before coloring.
#[derive(Debug, Clone)]
pub struct HilomapPlanes {
    /// Drawings of representatives with `w <= neutral`.
    pub low: AlphaPlane,
    /// Drawings of representatives with `w > neutral`.
    pub high: AlphaPlane,
    /// Drawings of every representative; supplies output transparency.
    pub all: AlphaPlane,
}

#[inline]
fn extremity_opacity(delta: f64) -> f64 {
    (delta * 2.0).clamp(0.0, 1.0)
}

/// Run hilomap's three stamp passes over finalized representatives.
/// Returns the planes and the total blit count (low + high + all).
pub fn hilomap_planes(
    reps: &[PixelPoint],
    width_px: u32,
    height_px: u32,
    stamp: &Stamp,
    neutral: f64,
    composite: Composite,
) -> (HilomapPlanes, usize) {
    let mut low = AlphaPlane::new(width_px, height_px);
    let mut high = AlphaPlane::new(width_px, height_px);
    let mut all = AlphaPlane::new(width_px, height_px);
    let mut blits = 0;
    for rep in reps {
        let cx = rep.x.floor() as i64;
        let cy = rep.y.floor() as i64;
        if !stamp.touches(cx, cy, width_px, height_px) {
            continue;
        }
        if rep.weight <= neutral {
            blit_at(&mut low, stamp, cx, cy, extremity_opacity(neutral - rep.weight), composite);
        } else {
            blit_at(&mut high, stamp, cx, cy, extremity_opacity(rep.weight - neutral), composite);
        }
        blit_at(
            &mut all,
            stamp,
            cx,
            cy,
            extremity_opacity((rep.weight - neutral).abs()),
            composite,
        );
        blits += 2;
    }
    (HilomapPlanes { low, high, all }, blits)
}

/// The diverging color index for one pixel:
/// `clamp(round(128 + (alpha_high - alpha_low) / 2), 0, 255)`, where the
/// alphas are the unquantized plane values scaled to `[0, 255]` and rounding
/// is half-up.
#[inline]
pub fn hilomap_color_index(low: f64, high: f64) -> u8 {
    let alpha_low = 255.0 * low;
    let alpha_high = 255.0 * high;
    (128.0 + (alpha_high - alpha_low) / 2.0).round().clamp(0.0, 255.0) as u8
}

/// Hilomap coloring: per pixel, the gradient color at the diverging index,
/// with output transparency taken from the all plane.
pub fn colorize_hilomap(planes: &HilomapPlanes, gradient: &GradientLut) -> RgbaRaster {
    let mut raster = RgbaRaster::new(planes.all.width(), planes.all.height());
    for y in 0..planes.all.height() {
        for x in 0..planes.all.width() {
            let alpha = (255.0 * planes.all.get(x, y)).round() as u8;
            if alpha > 0 {
                let idx = hilomap_color_index(planes.low.get(x, y), planes.high.get(x, y));
                let [r, g, b] = gradient.color(idx);
                raster.set_pixel(x, y, [r, g, b, alpha]);
            }
        }
    }
    raster
}

/// The full hilomap render: aggregate, three drawing passes, coloring.
pub fn render_hilomap(points: &PointSet, viewport: &Viewport, cfg: &RenderConfig) -> Result<RenderedMap> {
    let grid = aggregate_hilomap(points, viewport, cfg)?;
    let reps: Vec<PixelPoint> = grid.representatives().copied().collect();
    let stamp = Stamp::build(cfg.stamp);
    let (planes, blits) = hilomap_planes(
        &reps,
        viewport.width_px(),
        viewport.height_px(),
        &stamp,
        cfg.neutral,
        cfg.composite,
    );
    Ok(RenderedMap {
        raster: colorize_hilomap(&planes, &cfg.gradient),
        stats: RenderStats {
            points: points.len(),
            cells: Some(grid.len()),
            blits,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::WeightedPoint;

    fn viewport(width: u32, height: u32) -> Viewport {
        Viewport::new((0.0, 0.0, width as f64, height as f64), width, height).unwrap()
    }

    fn config(mode: Mode, radius: u32, blur: u32) -> RenderConfig {
        RenderConfig::new(mode, StampParams::new(radius, blur).unwrap())
    }

    fn pp(x: f64, y: f64, w: f64) -> PixelPoint {
        PixelPoint::new(x, y, w)
    }

    #[test]
    fn direct_single_full_weight_point() {
        let v = viewport(32, 32);
        let cfg = config(Mode::Direct, 4, 0);
        let rendered = render_direct_px(&[pp(16.5, 16.5, 1.0)], &v, &cfg);
        let want_rgb = cfg.gradient.color(255);
        for dy in -4i64..=4 {
            for dx in -4i64..=4 {
                let px = rendered.raster.pixel((16 + dx) as u32, (16 + dy) as u32);
                if dx * dx + dy * dy <= 16 {
                    assert_eq!(px[3], 255);
                    assert_eq!([px[0], px[1], px[2]], want_rgb);
                } else {
                    assert_eq!(px, [0, 0, 0, 0]);
                }
            }
        }
        assert_eq!(rendered.stats.blits, 1);
    }

    #[test]
    fn direct_non_overlapping_points_render_independently() {
        let v = viewport(64, 16);
        let cfg = config(Mode::Direct, 3, 0);
        let rendered = render_direct_px(&[pp(10.5, 8.5, 0.3), pp(50.5, 8.5, 0.8)], &v, &cfg);
        let a = rendered.raster.pixel(10, 8);
        let b = rendered.raster.pixel(50, 8);
        assert_eq!(a[3], (255.0f64 * 0.3).round() as u8);
        assert_eq!(b[3], (255.0f64 * 0.8).round() as u8);
    }

    #[test]
    fn direct_blur_fades_center_to_boundary() {
        let v = viewport(32, 32);
        let cfg = config(Mode::Direct, 4, 4);
        let rendered = render_direct_px(&[pp(16.5, 16.5, 1.0)], &v, &cfg);
        let center = rendered.raster.pixel(16, 16)[3];
        let edge = rendered.raster.pixel(16 + 7, 16)[3];
        assert!(center > edge, "{center} vs {edge}");
        assert!(edge > 0);
    }

    #[test]
    fn direct_coincident_half_weights_compose() {
        let v = viewport(16, 16);
        let cfg = config(Mode::Direct, 2, 0);
        let rendered = render_direct_px(&[pp(8.5, 8.5, 0.5), pp(8.5, 8.5, 0.5)], &v, &cfg);
        // 1 - (1 - 0.5)^2 = 0.75, quantized to round(191.25)
        assert_eq!(rendered.raster.pixel(8, 8)[3], 191);
    }

    #[test]
    fn direct_empty_set_is_transparent() {
        let v = viewport(8, 8);
        let cfg = config(Mode::Direct, 2, 0);
        let rendered = render_direct(&PointSet::default(), &v, &cfg).unwrap();
        assert!(rendered.raster.data().iter().all(|&b| b == 0));
        assert_eq!(rendered.stats.blits, 0);
    }

    #[test]
    fn direct_respects_min_opacity() {
        let v = viewport(16, 16);
        let mut cfg = config(Mode::Direct, 2, 0);
        cfg.min_opacity = 0.2;
        let rendered = render_direct_px(&[pp(8.5, 8.5, 0.0)], &v, &cfg);
        assert_eq!(rendered.raster.pixel(8, 8)[3], (255.0f64 * 0.2).round() as u8);
    }

    #[test]
    fn indirect_blits_bounded_by_cells() {
        let v = viewport(100, 100);
        let mut cfg = config(Mode::Indirect, 2, 0);
        cfg.cell_size = 10;
        // 10k points over a 10x10 grid of cells
        let points: Vec<PixelPoint> = (0..10_000)
            .map(|i| {
                let x = (i % 100) as f64 + 0.5;
                let y = (i / 100) as f64 + 0.5;
                pp(x, y, 0.4)
            })
            .collect();
        let grid = HeatGrid::aggregate_weighted_sum(&points, 100, 100, 10);
        assert_eq!(grid.len(), 100);
        let reps: Vec<PixelPoint> = grid.representatives().copied().collect();
        let rendered = render_direct_px(&reps, &v, &cfg);
        assert!(rendered.stats.blits <= 100);
    }

    #[test]
    fn indirect_singleton_equals_direct_bit_for_bit() {
        let points = PointSet::new(vec![WeightedPoint::new(0.01, 0.01, 0.7)]);
        let v = Viewport::new((-2000.0, -2000.0, 2000.0, 2000.0), 64, 64).unwrap();
        let cfg = config(Mode::Indirect, 4, 2);
        let direct = render_direct(&points, &v, &cfg).unwrap();
        let indirect = render_indirect(&points, &v, &cfg).unwrap();
        assert_eq!(direct.raster, indirect.raster);
        assert_eq!(indirect.stats.cells, Some(1));
    }

    #[test]
    fn hilomap_coincident_extremes_neutralize_exactly() {
        let stamp = Stamp::build(StampParams::new(4, 3).unwrap());
        let reps = [pp(16.5, 16.5, 0.1), pp(16.5, 16.5, 0.9)];
        let (planes, blits) = hilomap_planes(&reps, 32, 32, &stamp, 0.5, Composite::SourceOver);
        assert_eq!(blits, 4);
        for y in 0..32 {
            for x in 0..32 {
                if planes.all.get(x, y) > 0.0 {
                    assert_eq!(
                        hilomap_color_index(planes.low.get(x, y), planes.high.get(x, y)),
                        128,
                        "pixel ({x}, {y})"
                    );
                }
            }
        }
    }

    #[test]
    fn hilomap_low_extreme_hits_index_one() {
        let stamp = Stamp::build(StampParams::new(3, 0).unwrap());
        let (planes, _) = hilomap_planes(&[pp(8.5, 8.5, 0.0)], 16, 16, &stamp, 0.5, Composite::SourceOver);
        for y in 0..16 {
            for x in 0..16 {
                if planes.all.get(x, y) > 0.0 {
                    // alpha_low = 255, alpha_high = 0: round(0.5) = 1
                    assert_eq!(hilomap_color_index(planes.low.get(x, y), planes.high.get(x, y)), 1);
                }
            }
        }
    }

    #[test]
    fn hilomap_high_extreme_hits_index_255_fully_opaque() {
        let stamp = Stamp::build(StampParams::new(3, 0).unwrap());
        let (planes, _) = hilomap_planes(&[pp(8.5, 8.5, 1.0)], 16, 16, &stamp, 0.5, Composite::SourceOver);
        let raster = colorize_hilomap(&planes, &GradientLut::diverging());
        for y in 0..16u32 {
            for x in 0..16u32 {
                if planes.all.get(x, y) > 0.0 {
                    assert_eq!(hilomap_color_index(planes.low.get(x, y), planes.high.get(x, y)), 255);
                    assert_eq!(raster.pixel(x, y)[3], 255);
                }
            }
        }
    }

    #[test]
    fn hilomap_neutral_weight_draws_nothing_but_counts() {
        let stamp = Stamp::build(StampParams::new(3, 0).unwrap());
        let (planes, blits) = hilomap_planes(&[pp(8.5, 8.5, 0.5)], 16, 16, &stamp, 0.5, Composite::SourceOver);
        assert_eq!(blits, 2);
        assert!(planes.all.values().iter().all(|&v| v == 0.0));
        assert!(planes.low.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn hilomap_blit_count_is_twice_the_cells() {
        let points = PointSet::new(vec![
            WeightedPoint::new(0.01, 0.01, 0.1),
            WeightedPoint::new(0.02, 0.02, 0.9),
            WeightedPoint::new(-0.02, -0.02, 0.6),
        ]);
        let v = Viewport::new((-4000.0, -4000.0, 4000.0, 4000.0), 64, 64).unwrap();
        let mut cfg = config(Mode::Hilomap, 3, 0);
        cfg.cell_size = 4;
        let rendered = render_hilomap(&points, &v, &cfg).unwrap();
        let cells = rendered.stats.cells.unwrap();
        assert_eq!(rendered.stats.blits, 2 * cells);
    }

    #[test]
    fn neutral_cancellation_is_exact_for_equal_planes() {
        for a in [0.0, 0.1, 0.33, 0.5, 0.77, 1.0] {
            assert_eq!(hilomap_color_index(a, a), 128);
        }
    }

    #[test]
    fn config_validation_rejects_bad_values() {
        let mut cfg = config(Mode::Direct, 2, 0);
        cfg.cell_size = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = config(Mode::Hilomap, 2, 0);
        cfg.neutral = 1.0;
        assert!(cfg.validate().is_err());
        let mut cfg = config(Mode::Direct, 2, 0);
        cfg.min_opacity = 1.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn default_cell_size_tracks_radius() {
        assert_eq!(default_cell_size(&StampParams::new(10, 5).unwrap()), 5);
        assert_eq!(default_cell_size(&StampParams::new(1, 0).unwrap()), 1);
    }
}
