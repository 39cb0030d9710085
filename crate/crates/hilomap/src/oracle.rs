//! Slow reference renderers used to check the fast paths.
//!
//! `render_idw` is the interpolation-based baseline: every pixel scans every
//! point, which costs O(m * n * k) but is obviously correct.
//! `brute_force_overlay_alpha` evaluates the source-over closed form
//! `1 - prod(1 - opacity_i * stamp_i)` directly per pixel, independent of
//! the sequential blit path. Neither is optimized; that is the point.

use crate::error::{Error, Result};
use crate::projection::project_points;
use crate::render::{RenderConfig, RenderStats, RenderedMap};
use crate::stamp::{Composite, Stamp};
use crate::types::{AlphaPlane, PixelPoint, PointSet, RgbaRaster, Viewport};

/// Distance below which a pixel is considered coincident with a point and
/// takes its weight outright (first such point in input order wins).
const SINGULARITY_EPS: f64 = 1e-9;

/// Inverse-distance-weighted value plane over already-projected points.
/// Distances are measured from pixel centers. Every value is a convex
/// combination of the input weights.
pub fn idw_plane(points: &[PixelPoint], width_px: u32, height_px: u32, power: f64) -> Result<AlphaPlane> {
    if points.is_empty() {
        return Err(Error::Render("idw interpolation needs at least one point".into()));
    }
    if !(power > 0.0) {
        return Err(Error::Config(format!("idw power {power} must be positive")));
    }
    let (mut w_min, mut w_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        w_min = w_min.min(p.weight);
        w_max = w_max.max(p.weight);
    }

    let mut plane = AlphaPlane::new(width_px, height_px);
    for y in 0..height_px {
        let cy = y as f64 + 0.5;
        for x in 0..width_px {
            let cx = x as f64 + 0.5;
            let mut numerator = 0.0;
            let mut denominator = 0.0;
            let mut coincident = None;
            for p in points {
                let d = ((p.x - cx).powi(2) + (p.y - cy).powi(2)).sqrt();
                if d < SINGULARITY_EPS {
                    coincident = Some(p.weight);
                    break;
                }
                let inv = 1.0 / d.powf(power);
                numerator += p.weight * inv;
                denominator += inv;
            }
            let value = match coincident {
                Some(w) => w,
                // clamp keeps the convex-hull property exact under rounding
                None => (numerator / denominator).clamp(w_min, w_max),
            };
            plane.set(x, y, value);
        }
    }
    Ok(plane)
}

/// The interpolation-based reference renderer. Every pixel gets a value, so
/// the output is opaque everywhere; colors come from the gradient at
/// `round(255 * value)`.
pub fn render_idw(
    points: &PointSet,
    viewport: &Viewport,
    cfg: &RenderConfig,
    power: f64,
) -> Result<RenderedMap> {
    cfg.validate()?;
    let pixel_points = project_points(points, viewport)?;
    let plane = idw_plane(&pixel_points, viewport.width_px(), viewport.height_px(), power)?;
    let mut raster = RgbaRaster::new(plane.width(), plane.height());
    for y in 0..plane.height() {
        for x in 0..plane.width() {
            let idx = (255.0 * plane.get(x, y)).round() as u8;
            let [r, g, b] = cfg.gradient.color(idx);
            raster.set_pixel(x, y, [r, g, b, 255]);
        }
    }
    Ok(RenderedMap {
        raster,
        stats: RenderStats {
            points: points.len(),
            cells: None,
            blits: 0,
        },
    })
}

/// Per-pixel closed-form evaluation of the direct overlay's accumulation
/// plane, in O(m * n * k).
pub fn brute_force_overlay_alpha(points: &PointSet, viewport: &Viewport, cfg: &RenderConfig) -> Result<AlphaPlane> {
    if cfg.composite != Composite::SourceOver {
        return Err(Error::Config(
            "the closed-form overlay oracle only models source-over".into(),
        ));
    }
    cfg.validate()?;
    let pixel_points = project_points(points, viewport)?;
    let stamp = Stamp::build(cfg.stamp);
    Ok(brute_force_overlay_alpha_px(
        &pixel_points,
        viewport.width_px(),
        viewport.height_px(),
        &stamp,
        cfg.min_opacity,
    ))
}

/// Closed-form evaluation over already-projected points.
pub fn brute_force_overlay_alpha_px(
    points: &[PixelPoint],
    width_px: u32,
    height_px: u32,
    stamp: &Stamp,
    min_opacity: f64,
) -> AlphaPlane {
    let anchored: Vec<(i64, i64, f64)> = points
        .iter()
        .map(|p| {
            (
                p.x.floor() as i64,
                p.y.floor() as i64,
                p.weight.clamp(0.0, 1.0).max(min_opacity),
            )
        })
        .collect();
    let mut plane = AlphaPlane::new(width_px, height_px);
    for y in 0..height_px {
        for x in 0..width_px {
            let mut transparent = 1.0;
            for &(ax, ay, opacity) in &anchored {
                let coverage = stamp.value(x as i64 - ax, y as i64 - ay);
                transparent *= 1.0 - opacity * coverage;
            }
            plane.set(x, y, 1.0 - transparent);
        }
    }
    plane
}
