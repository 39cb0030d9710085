//! Point-overlay heatmap rasterization.
//!
//! Turns weighted geographic point sets into RGBA rasters using one-pass
//! stamp drawing instead of per-pixel interpolation. Three renderers share
//! the machinery:
//!
//! - **direct**: one circle stamp per point, alpha-composited, then colored
//!   through a gradient table;
//! - **indirect**: points are first aggregated onto a coarse heat grid and
//!   one representative is drawn per occupied cell, so drawing cost is
//!   bounded by the grid size, not the point count;
//! - **hilomap**: an indirect variant for data with both low and high
//!   extremes; per-cell representatives are the points furthest from a
//!   neutral weight, drawn onto separate low/high planes and colored on a
//!   diverging gradient where balanced overlap neutralizes to the middle.
//!
//! A deliberately slow inverse-distance-weighting renderer and a
//! closed-form compositing evaluator live in [`oracle`] for reference and
//! testing. [`io`] loads CSV/GeoJSON points and writes PNG/PAM rasters;
//! [`synth`] generates seeded synthetic weight datasets.

pub mod error;
pub mod gradient;
pub mod grid;
pub mod io;
pub mod oracle;
pub mod projection;
pub mod render;
pub mod stamp;
pub mod synth;
pub mod types;

pub use error::{Error, Result};
pub use gradient::{ColorStop, GradientLut};
pub use grid::HeatGrid;
pub use render::{
    render_direct, render_hilomap, render_indirect, Mode, RenderConfig, RenderStats, RenderedMap,
};
pub use stamp::{Composite, Stamp, StampParams};
pub use types::{clamp_weight, AlphaPlane, PixelPoint, PointSet, RgbaRaster, Viewport, WeightedPoint};
