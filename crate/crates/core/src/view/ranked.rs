//! Area-proportional ranked strips.
//!
//! Cells are laid out along `[0, 1]` with lengths proportional to their area
//! and split into `N` equal rows. Row `i` covers `[i/N, (i+1)/N)`; a cell
//! contributes to a row only when the overlap has positive length, so a cell
//! ending exactly on a row boundary belongs to the row below the boundary
//! only. Row 0 holds the start of the layout, which is the highest level when
//! cells are ranked.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::CellId;
use crate::num::Real;

pub const DEFAULT_MATRIX_ROWS: usize = 256;
pub const DEFAULT_PANE_ROWS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    #[default]
    Max,
    Min,
    /// Overlap-length-weighted mean of the contributing levels.
    Mean,
}

impl FromStr for Reduction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "max" => Ok(Self::Max),
            "min" => Ok(Self::Min),
            "mean" => Ok(Self::Mean),
            other => Err(format!("unknown reduction {other:?} (expected max, min or mean)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedStrip<T> {
    /// Cells in layout order.
    pub order: Vec<CellId>,
    /// Reduced level per row; `None` only for rows no cell overlaps.
    pub values: Vec<Option<T>>,
    /// Cells overlapping each row, in layout order.
    pub contributors: Vec<Vec<CellId>>,
}

impl<T> RankedStrip<T> {
    pub fn rows(&self) -> usize {
        self.values.len()
    }

    /// Rows whose contributor set contains any cell accepted by `pred`.
    pub fn rows_touching(&self, mut pred: impl FnMut(CellId) -> bool) -> Vec<usize> {
        (0..self.contributors.len()).filter(|&r| self.contributors[r].iter().any(|&c| pred(c))).collect()
    }
}

/// Sorts `(cell, level)` pairs by level descending, ties by cell id ascending.
pub fn rank_cells<T: Real>(items: &mut [(CellId, T)]) {
    items.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal).then(a.0.cmp(&b.0)));
}

/// Ranked strip over `items` (`(cell, level)`), with `area(cell)` giving
/// each cell's layout length.
pub fn ranked_strip<T: Real>(
    items: &[(CellId, T)],
    area: impl Fn(CellId) -> T,
    rows: usize,
    reduction: Reduction,
) -> RankedStrip<T> {
    let mut sorted = items.to_vec();
    rank_cells(&mut sorted);
    layout_strip(&sorted, area, rows, reduction)
}

/// Lays out `items` in the given order without sorting.
pub fn layout_strip<T: Real>(
    items: &[(CellId, T)],
    area: impl Fn(CellId) -> T,
    rows: usize,
    reduction: Reduction,
) -> RankedStrip<T> {
    let rows = rows.max(1);
    let n = T::from_usize_lossy(rows);
    let mut values: Vec<Option<T>> = vec![None; rows];
    let mut weights = vec![T::zero(); rows];
    let mut contributors: Vec<Vec<CellId>> = vec![Vec::new(); rows];
    let total: T = items.iter().map(|&(c, _)| area(c)).sum();
    let mut start = T::zero();
    for &(cell, level) in items {
        let end = start + area(cell);
        if end > start {
            // scaled endpoints in row units; rows r with r < end·N/A and r + 1 > start·N/A
            let s = start * n / total;
            let e = end * n / total;
            let first = s.floor().to_usize().unwrap_or(0).min(rows - 1);
            let last = (e.ceil().to_usize().unwrap_or(rows).max(1) - 1).min(rows - 1);
            for r in first..=last {
                let r_lo = T::from_usize_lossy(r);
                let overlap = e.min(r_lo + T::one()) - s.max(r_lo);
                if !(overlap > T::zero()) {
                    continue;
                }
                contributors[r].push(cell);
                values[r] = Some(match (values[r], reduction) {
                    (None, Reduction::Mean) => level * overlap,
                    (None, _) => level,
                    (Some(v), Reduction::Max) => v.max(level),
                    (Some(v), Reduction::Min) => v.min(level),
                    (Some(v), Reduction::Mean) => v + level * overlap,
                });
                weights[r] = weights[r] + overlap;
            }
        }
        start = end;
    }
    if reduction == Reduction::Mean {
        for (v, w) in values.iter_mut().zip(&weights) {
            *v = v.map(|sum| sum / *w);
        }
    }
    RankedStrip { order: items.iter().map(|&(c, _)| c).collect(), values, contributors }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell_fills_all_rows() {
        let s = ranked_strip(&[(7, 80.0)], |_| 2.0, 4, Reduction::Max);
        assert_eq!(s.values, vec![Some(80.0); 4]);
        assert!(s.contributors.iter().all(|c| c == &vec![7]));
    }

    #[test]
    fn two_equal_cells_sorted_descending() {
        let s = ranked_strip(&[(0, 60.0), (1, 80.0)], |_| 1.0, 2, Reduction::Max);
        assert_eq!(s.values, vec![Some(80.0), Some(60.0)]);
        assert_eq!(s.contributors, vec![vec![1], vec![0]]);
    }

    #[test]
    fn boundary_cell_belongs_below() {
        let areas = [1.0, 1.0, 2.0];
        let s = ranked_strip(&[(0, 90.0), (1, 70.0), (2, 50.0)], |c| areas[c], 2, Reduction::Max);
        assert_eq!(s.values, vec![Some(90.0), Some(50.0)]);
        assert_eq!(s.contributors, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn ties_break_by_cell_id() {
        let s = ranked_strip(&[(5, 70.0), (2, 70.0), (9, 71.0)], |_| 1.0, 3, Reduction::Max);
        assert_eq!(s.order, vec![9, 2, 5]);
    }

    #[test]
    fn more_rows_than_cells_reproduces_sequence() {
        let levels = [61.0, 75.0, 68.0, 90.0];
        let items: Vec<_> = levels.iter().copied().enumerate().collect();
        let s = ranked_strip(&items, |_| 1.0, 4, Reduction::Max);
        assert_eq!(s.values, vec![Some(90.0), Some(75.0), Some(68.0), Some(61.0)]);
        let s8 = ranked_strip(&items, |_| 1.0, 8, Reduction::Min);
        let expect: Vec<_> = [90.0, 90.0, 75.0, 75.0, 68.0, 68.0, 61.0, 61.0].map(Some).to_vec();
        assert_eq!(s8.values, expect);
    }

    #[test]
    fn mean_reduction_weights_by_overlap() {
        let areas = [1.0, 3.0];
        let s = ranked_strip(&[(0, 80.0), (1, 60.0)], |c| areas[c], 2, Reduction::Mean);
        assert_eq!(s.values, vec![Some(70.0), Some(60.0)]);
    }
}
