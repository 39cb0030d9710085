//! Spherical Web Mercator projection and the world-to-pixel transforms.
//!
//! Forward projection of (lon, lat) degrees onto meters:
//! `x = R * lon_rad`, `y = R * ln(tan(pi/4 + lat_rad/2))` with
//! `R = 6378137`. Pixel mapping is the linear map of the viewport bounding
//! box onto `[0, width] x [0, height]`, row 0 at `max_y`.

use crate::error::{Error, Result};
use crate::stamp::StampParams;
use crate::types::{PixelPoint, PointSet, Viewport, WeightedPoint};

/// Web Mercator sphere radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_378_137.0;

/// Latitude bound of the projectable range, degrees.
pub const MAX_LAT_DEG: f64 = 85.06;

/// A position in projected meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MercatorPoint {
    /// Meters east of the prime meridian.
    pub x: f64,
    /// Meters north of the equator.
    pub y: f64,
}

/// Project a geographic position onto the Mercator plane.
pub fn lonlat_to_mercator(p: &WeightedPoint) -> Result<MercatorPoint> {
    if !p.lat.is_finite() || p.lat.abs() > MAX_LAT_DEG {
        return Err(Error::Projection(format!(
            "latitude {} outside [{}, {}]",
            p.lat, -MAX_LAT_DEG, MAX_LAT_DEG
        )));
    }
    let lon_rad = p.lon.to_radians();
    let lat_rad = p.lat.to_radians();
    Ok(MercatorPoint {
        x: EARTH_RADIUS_M * lon_rad,
        y: EARTH_RADIUS_M * (std::f64::consts::FRAC_PI_4 + lat_rad / 2.0).tan().ln(),
    })
}

/// Inverse of [`lonlat_to_mercator`], returning (lon, lat) degrees.
pub fn mercator_to_lonlat(q: &MercatorPoint) -> (f64, f64) {
    let lon = (q.x / EARTH_RADIUS_M).to_degrees();
    let lat = (2.0 * (q.y / EARTH_RADIUS_M).exp().atan() - std::f64::consts::FRAC_PI_2).to_degrees();
    (lon, lat)
}

/// Map projected meters into continuous pixel coordinates.
///
/// Points outside the bounding box yield out-of-range pixel coordinates;
/// renderers cull them against the stamp footprint.
#[inline]
pub fn mercator_to_pixel(q: &MercatorPoint, v: &Viewport) -> (f64, f64) {
    let col = (q.x - v.min_x()) / v.span_x() * v.width_px() as f64;
    let row = (v.max_y() - q.y) / v.span_y() * v.height_px() as f64;
    (col, row)
}

/// Bucket a continuous pixel position into a heat grid cell. Negative
/// indices are valid and culled later.
#[inline]
pub fn pixel_to_heatcell(col: f64, row: f64, cell_size: u32) -> (i64, i64) {
    let cs = cell_size as f64;
    ((col / cs).floor() as i64, (row / cs).floor() as i64)
}

/// Project a whole point set into pixel space, preserving order.
pub fn project_points(points: &PointSet, v: &Viewport) -> Result<Vec<PixelPoint>> {
    points
        .iter()
        .map(|p| {
            let m = lonlat_to_mercator(p)?;
            let (x, y) = mercator_to_pixel(&m, v);
            Ok(PixelPoint::new(x, y, p.weight))
        })
        .collect()
}

/// Derive a viewport from the data: the projected bounding box of the
/// points, padded on every side by the stamp footprint (radius + blur)
/// expressed in meters at the raster's scale.
pub fn viewport_from_data(
    points: &PointSet,
    width_px: u32,
    height_px: u32,
    stamp: &StampParams,
) -> Result<Viewport> {
    if points.is_empty() {
        return Err(Error::Config(
            "cannot derive a bounding box from an empty point set".into(),
        ));
    }
    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for p in points.iter() {
        let m = lonlat_to_mercator(p)?;
        min_x = min_x.min(m.x);
        max_x = max_x.max(m.x);
        min_y = min_y.min(m.y);
        max_y = max_y.max(m.y);
    }
    // Degenerate spans (single point, single row/column) fall back to one
    // meter per pixel before padding.
    if max_x - min_x <= 0.0 {
        let c = min_x;
        min_x = c - width_px as f64 / 2.0;
        max_x = c + width_px as f64 / 2.0;
    }
    if max_y - min_y <= 0.0 {
        let c = min_y;
        min_y = c - height_px as f64 / 2.0;
        max_y = c + height_px as f64 / 2.0;
    }
    let footprint = stamp.footprint() as f64;
    let pad_x = footprint * (max_x - min_x) / width_px as f64;
    let pad_y = footprint * (max_y - min_y) / height_px as f64;
    Viewport::new(
        (min_x - pad_x, min_y - pad_y, max_x + pad_x, max_y + pad_y),
        width_px,
        height_px,
    )
}
