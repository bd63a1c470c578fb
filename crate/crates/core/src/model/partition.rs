//! Spatial hierarchy: named, disjoint cell groups plus the implicit TOTAL.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::mesh::CellId;

pub const TOTAL: &str = "TOTAL";

/// Row index in region order; `RegionId(0)` is always TOTAL.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RegionId(pub usize);

impl RegionId {
    pub const TOTAL: RegionId = RegionId(0);

    pub fn is_total(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub name: String,
    pub cells: Vec<CellId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("region {region} references cell {cell}, but the mesh has {count} cells")]
    CellOutOfRange { region: String, cell: CellId, count: usize },
    #[error("cell {cell} belongs to both {first} and {second}")]
    Overlap { cell: CellId, first: String, second: String },
    #[error("partition not exhaustive: {missing} cell(s) unassigned, first is {first}")]
    NotExhaustive { missing: usize, first: CellId },
    #[error("duplicate region name {0}")]
    DuplicateName(String),
    #[error("invalid region name {0:?}")]
    BadName(String),
}

/// Ordered list of disjoint regions covering every cell.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RegionPartition {
    pub regions: Vec<Region>,
}

impl RegionPartition {
    pub fn new(regions: Vec<Region>) -> Self {
        Self { regions }
    }

    /// Builds a partition from a per-cell region name, keeping first-seen order
    /// unless `order` lists names explicitly.
    pub fn from_assignment<'a>(
        assignment: impl IntoIterator<Item = (CellId, &'a str)>,
        order: &[&str],
    ) -> Self {
        let mut regions: Vec<Region> = order
            .iter()
            .map(|n| Region { name: n.to_string(), cells: Vec::new() })
            .collect();
        for (cell, name) in assignment {
            match regions.iter_mut().find(|r| r.name == name) {
                Some(r) => r.cells.push(cell),
                None => regions.push(Region { name: name.to_string(), cells: vec![cell] }),
            }
        }
        for r in &mut regions {
            r.cells.sort_unstable();
        }
        Self { regions }
    }

    /// Number of rows including TOTAL.
    pub fn row_count(&self) -> usize {
        self.regions.len() + 1
    }

    pub fn ids(&self) -> impl Iterator<Item = RegionId> {
        (0..self.row_count()).map(RegionId)
    }

    pub fn name(&self, id: RegionId) -> &str {
        if id.is_total() {
            TOTAL
        } else {
            &self.regions[id.0 - 1].name
        }
    }

    pub fn find(&self, name: &str) -> Option<RegionId> {
        if name == TOTAL {
            return Some(RegionId::TOTAL);
        }
        self.regions.iter().position(|r| r.name == name).map(|i| RegionId(i + 1))
    }

    /// Region of every cell, `None` for unassigned cells.
    pub fn region_of_cells(&self, cell_count: usize) -> Vec<Option<RegionId>> {
        let mut owner = vec![None; cell_count];
        for (i, r) in self.regions.iter().enumerate() {
            for &c in &r.cells {
                if c < cell_count && owner[c].is_none() {
                    owner[c] = Some(RegionId(i + 1));
                }
            }
        }
        owner
    }

    pub fn check(&self, cell_count: usize) -> Vec<PartitionError> {
        let mut errors = Vec::new();
        let mut owner: Vec<Option<usize>> = vec![None; cell_count];
        for (i, r) in self.regions.iter().enumerate() {
            if r.name.is_empty() || r.name == TOTAL || r.name.contains(',') || r.name.trim() != r.name {
                errors.push(PartitionError::BadName(r.name.clone()));
            }
            if self.regions[..i].iter().any(|o| o.name == r.name) {
                errors.push(PartitionError::DuplicateName(r.name.clone()));
            }
            for &cell in &r.cells {
                if cell >= cell_count {
                    errors.push(PartitionError::CellOutOfRange {
                        region: r.name.clone(),
                        cell,
                        count: cell_count,
                    });
                    continue;
                }
                match owner[cell] {
                    Some(prev) => errors.push(PartitionError::Overlap {
                        cell,
                        first: self.regions[prev].name.clone(),
                        second: r.name.clone(),
                    }),
                    None => owner[cell] = Some(i),
                }
            }
        }
        let missing: Vec<CellId> = (0..cell_count).filter(|&c| owner[c].is_none()).collect();
        if let Some(&first) = missing.first() {
            errors.push(PartitionError::NotExhaustive { missing: missing.len(), first });
        }
        errors
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(name: &str, cells: &[CellId]) -> Region {
        Region { name: name.into(), cells: cells.to_vec() }
    }

    #[test]
    fn total_is_first_row() {
        let p = RegionPartition::new(vec![region("FRONT", &[0, 1]), region("REAR", &[2])]);
        assert_eq!(p.row_count(), 3);
        assert_eq!(p.name(RegionId(0)), TOTAL);
        assert_eq!(p.name(RegionId(2)), "REAR");
        assert_eq!(p.find("TOTAL"), Some(RegionId::TOTAL));
        assert_eq!(p.find("FRONT"), Some(RegionId(1)));
        assert_eq!(p.find("TOP"), None);
        assert!(p.check(3).is_empty());
    }

    #[test]
    fn detects_overlap_gap_and_range() {
        let p = RegionPartition::new(vec![region("A", &[0, 1]), region("B", &[1, 9])]);
        let errs = p.check(4);
        assert!(errs.iter().any(|e| matches!(e, PartitionError::Overlap { cell: 1, .. })));
        assert!(errs.iter().any(|e| matches!(e, PartitionError::CellOutOfRange { cell: 9, .. })));
        assert!(errs
            .iter()
            .any(|e| matches!(e, PartitionError::NotExhaustive { missing: 2, first: 2 })));
    }

    #[test]
    fn rejects_reserved_and_duplicate_names() {
        let p = RegionPartition::new(vec![region("TOTAL", &[0]), region("X", &[1]), region("X", &[2])]);
        let errs = p.check(3);
        assert!(errs.contains(&PartitionError::BadName("TOTAL".into())));
        assert!(errs.contains(&PartitionError::DuplicateName("X".into())));
    }

    #[test]
    fn assignment_respects_order() {
        let p = RegionPartition::from_assignment([(0, "TOP"), (1, "FRONT"), (2, "TOP")], &["FRONT"]);
        assert_eq!(p.regions[0].name, "FRONT");
        assert_eq!(p.regions[1].cells, vec![0, 2]);
    }
}
