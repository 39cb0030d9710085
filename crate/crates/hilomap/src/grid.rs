//! The coarse heat grid that indirect renderers aggregate points onto.
//!
//! Each occupied cell holds a single representative point. Two aggregation
//! strategies exist: weighted-sum (representative at the weight-averaged
//! position, weight equal to the cell's weight sum) and furthest-from-neutral
//! (the single most extreme point is copied verbatim).

use std::collections::BTreeMap;

use crate::projection::pixel_to_heatcell;
use crate::types::PixelPoint;

/// Sparse aggregation grid, cells keyed by `(cx, cy)`. Cell indices may be
/// negative for points projecting outside the raster; their representatives
/// are culled at draw time if the stamp cannot touch the raster.
#[derive(Debug, Clone)]
pub struct HeatGrid {
    cols: u32,
    rows: u32,
    cell_size: u32,
    // keyed (cy, cx) so iteration is row-major and deterministic
    cells: BTreeMap<(i64, i64), PixelPoint>,
}

// Weighted accumulator for one cell. Singleton cells are finalized by
// copying the point verbatim, which keeps aggregation of a single point an
// exact identity.
#[derive(Debug, Clone, Copy)]
struct CellAccum {
    sum_w: f64,
    sum_wx: f64,
    sum_wy: f64,
    count: usize,
    first: PixelPoint,
}

impl HeatGrid {
    /// Weighted-sum aggregation: each point adds `w` to its cell's weight
    /// and `w * (x, y)` to the coordinate accumulators. A finalized cell's
    /// representative sits at the weighted average position and carries the
    /// weight sum (clamped only at draw time). Cells whose weight sum is
    /// not positive are dropped.
    pub fn aggregate_weighted_sum(
        points: &[PixelPoint],
        width_px: u32,
        height_px: u32,
        cell_size: u32,
    ) -> Self {
        let mut accum: BTreeMap<(i64, i64), CellAccum> = BTreeMap::new();
        for p in points {
            let (cx, cy) = pixel_to_heatcell(p.x, p.y, cell_size);
            let a = accum.entry((cy, cx)).or_insert(CellAccum {
                sum_w: 0.0,
                sum_wx: 0.0,
                sum_wy: 0.0,
                count: 0,
                first: *p,
            });
            a.sum_w += p.weight;
            a.sum_wx += p.weight * p.x;
            a.sum_wy += p.weight * p.y;
            a.count += 1;
        }
        let cells = accum
            .into_iter()
            .filter(|(_, a)| a.sum_w > 0.0)
            .map(|(key, a)| {
                let rep = if a.count == 1 {
                    a.first
                } else {
                    PixelPoint::new(a.sum_wx / a.sum_w, a.sum_wy / a.sum_w, a.sum_w)
                };
                (key, rep)
            })
            .collect();
        Self::from_cells(cells, width_px, height_px, cell_size)
    }

    /// Furthest-from-neutral aggregation: a cell keeps the single point
    /// maximizing `|w - neutral|`, replaced only on strict inequality so the
    /// first point wins ties in input order. Every cell that received at
    /// least one point is retained, even at weight zero or exactly neutral.
    pub fn aggregate_furthest_from(
        points: &[PixelPoint],
        width_px: u32,
        height_px: u32,
        cell_size: u32,
        neutral: f64,
    ) -> Self {
        let mut cells: BTreeMap<(i64, i64), PixelPoint> = BTreeMap::new();
        for p in points {
            let (cx, cy) = pixel_to_heatcell(p.x, p.y, cell_size);
            cells
                .entry((cy, cx))
                .and_modify(|rep| {
                    if (p.weight - neutral).abs() > (rep.weight - neutral).abs() {
                        *rep = *p;
                    }
                })
                .or_insert(*p);
        }
        Self::from_cells(cells, width_px, height_px, cell_size)
    }

    fn from_cells(
        cells: BTreeMap<(i64, i64), PixelPoint>,
        width_px: u32,
        height_px: u32,
        cell_size: u32,
    ) -> Self {
        Self {
            cols: width_px.div_ceil(cell_size),
            rows: height_px.div_ceil(cell_size),
            cell_size,
            cells,
        }
    }

    /// Nominal grid columns over the raster (occupied cells may lie outside).
    pub fn cols(&self) -> u32 {
        self.cols
    }

    pub fn rows(&self) -> u32 {
        self.rows
    }

    pub fn cell_size(&self) -> u32 {
        self.cell_size
    }

    /// Number of occupied cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, cx: i64, cy: i64) -> Option<&PixelPoint> {
        self.cells.get(&(cy, cx))
    }

    /// Finalized representatives in row-major cell order.
    pub fn representatives(&self) -> impl Iterator<Item = &PixelPoint> {
        self.cells.values()
    }
}
