//! Surface mesh: vertices, polygonal cells, and the geometry derived from them.

use std::collections::HashMap;

use thiserror::Error;

use crate::num::Real;

pub type CellId = usize;

/// A 3D point or vector in meters.
pub type Point3<T> = [T; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("cell {cell} references vertex {vertex}, but the mesh has {count} vertices")]
    VertexOutOfRange { cell: CellId, vertex: usize, count: usize },
    #[error("cell {cell} has {count} vertices; only triangles and quads are supported")]
    BadArity { cell: CellId, count: usize },
    #[error("cell {cell} repeats vertex {vertex}")]
    RepeatedVertex { cell: CellId, vertex: usize },
}

/// Outer surface of the simulated structure.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh<T> {
    pub vertices: Vec<Point3<T>>,
    /// Vertex-index polygons, triangles or quads, 0-based.
    pub cells: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGeometry<T> {
    pub area: T,
    pub centroid: Point3<T>,
}

/// Symmetric, irreflexive edge adjacency between cells.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Adjacency {
    neighbors: Vec<Vec<CellId>>,
    /// Edges shared by more than two cells.
    pub non_manifold_edges: usize,
}

impl Adjacency {
    pub fn neighbors(&self, cell: CellId) -> &[CellId] {
        &self.neighbors[cell]
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn degree(&self, cell: CellId) -> usize {
        self.neighbors[cell].len()
    }
}

fn sub<T: Real>(a: Point3<T>, b: Point3<T>) -> Point3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross<T: Real>(a: Point3<T>, b: Point3<T>) -> Point3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm<T: Real>(a: Point3<T>) -> T {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Area of the triangle `a b c`: half the magnitude of the edge cross product.
pub fn triangle_area<T: Real>(a: Point3<T>, b: Point3<T>, c: Point3<T>) -> T {
    T::lit(0.5) * norm(cross(sub(b, a), sub(c, a)))
}

impl<T: Real> SurfaceMesh<T> {
    pub fn new(vertices: Vec<Point3<T>>, cells: Vec<Vec<usize>>) -> Self {
        Self { vertices, cells }
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Checks index range, arity and vertex distinctness of every cell.
    pub fn check_topology(&self) -> Vec<MeshError> {
        let mut errors = Vec::new();
        let count = self.vertices.len();
        for (cell, poly) in self.cells.iter().enumerate() {
            if poly.len() != 3 && poly.len() != 4 {
                errors.push(MeshError::BadArity { cell, count: poly.len() });
            }
            for &vertex in poly {
                if vertex >= count {
                    errors.push(MeshError::VertexOutOfRange { cell, vertex, count });
                }
            }
            for (i, &v) in poly.iter().enumerate() {
                if poly[..i].contains(&v) {
                    errors.push(MeshError::RepeatedVertex { cell, vertex: v });
                    break;
                }
            }
        }
        errors
    }

    /// Area and centroid of every cell. Quads are split along 0-2.
    pub fn cell_geometry(&self) -> Result<Vec<CellGeometry<T>>, MeshError> {
        if let Some(err) = self.check_topology().into_iter().next() {
            return Err(err);
        }
        Ok(self.cells.iter().map(|poly| self.polygon_geometry(poly)).collect())
    }

    fn polygon_geometry(&self, poly: &[usize]) -> CellGeometry<T> {
        let p = |i: usize| self.vertices[poly[i]];
        let third = T::lit(1.0 / 3.0);
        let tri_centroid = |a: Point3<T>, b: Point3<T>, c: Point3<T>| {
            [
                (a[0] + b[0] + c[0]) * third,
                (a[1] + b[1] + c[1]) * third,
                (a[2] + b[2] + c[2]) * third,
            ]
        };
        let mut tris = vec![(p(0), p(1), p(2))];
        if poly.len() == 4 {
            tris.push((p(0), p(2), p(3)));
        }
        let mut area = T::zero();
        let mut weighted = [T::zero(); 3];
        for &(a, b, c) in &tris {
            let ta = triangle_area(a, b, c);
            let tc = tri_centroid(a, b, c);
            area = area + ta;
            for k in 0..3 {
                weighted[k] = weighted[k] + ta * tc[k];
            }
        }
        let centroid = if area > T::zero() {
            weighted.map(|w| w / area)
        } else {
            let n = T::from_usize_lossy(poly.len());
            let mut mean = [T::zero(); 3];
            for &v in poly {
                for (k, m) in mean.iter_mut().enumerate() {
                    *m = *m + self.vertices[v][k];
                }
            }
            mean.map(|m| m / n)
        };
        CellGeometry { area, centroid }
    }

    /// Cells are adjacent iff they share an unordered vertex-pair edge.
    pub fn build_adjacency(&self) -> Result<Adjacency, MeshError> {
        if let Some(err) = self.check_topology().into_iter().next() {
            return Err(err);
        }
        let mut edges: HashMap<(usize, usize), Vec<CellId>> = HashMap::new();
        for (cell, poly) in self.cells.iter().enumerate() {
            for i in 0..poly.len() {
                let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
                let key = if a < b { (a, b) } else { (b, a) };
                edges.entry(key).or_default().push(cell);
            }
        }
        let mut neighbors = vec![Vec::new(); self.cells.len()];
        let mut non_manifold_edges = 0;
        for incident in edges.values() {
            if incident.len() > 2 {
                non_manifold_edges += 1;
            }
            for (i, &a) in incident.iter().enumerate() {
                for &b in &incident[i + 1..] {
                    if a != b {
                        neighbors[a].push(b);
                        neighbors[b].push(a);
                    }
                }
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        if non_manifold_edges > 0 {
            log::warn!("mesh has {non_manifold_edges} non-manifold edges");
        }
        Ok(Adjacency { neighbors, non_manifold_edges })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn heron(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
        let d = |p: [f64; 3], q: [f64; 3]| {
            ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
        };
        let (x, y, z) = (d(a, b), d(b, c), d(c, a));
        let s = 0.5 * (x + y + z);
        (s * (s - x) * (s - y) * (s - z)).max(0.0).sqrt()
    }

    #[test]
    fn right_triangle() {
        let mesh = SurfaceMesh::new(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![vec![0, 1, 2]],
        );
        let g = mesh.cell_geometry().unwrap();
        assert_abs_diff_eq!(g[0].area, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g[0].centroid[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g[0].centroid[1], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g[0].centroid[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn unit_square_quad() {
        let mesh = SurfaceMesh::new(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
            vec![vec![0, 1, 2, 3]],
        );
        let g = mesh.cell_geometry().unwrap();
        assert_abs_diff_eq!(g[0].area, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g[0].centroid[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g[0].centroid[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn f32_geometry() {
        let mesh = SurfaceMesh::<f32>::new(
            vec![[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 2.0, 0.0]],
            vec![vec![0, 1, 2]],
        );
        assert_eq!(mesh.cell_geometry().unwrap()[0].area, 2.0f32);
    }

    #[test]
    fn topology_errors() {
        let mesh = SurfaceMesh::new(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![vec![0, 1, 3], vec![0, 1], vec![0, 1, 1]],
        );
        let errs = mesh.check_topology();
        assert_eq!(errs.len(), 3);
        assert!(matches!(errs[0], MeshError::VertexOutOfRange { cell: 0, vertex: 3, count: 3 }));
        assert!(matches!(errs[1], MeshError::BadArity { cell: 1, count: 2 }));
        assert!(matches!(errs[2], MeshError::RepeatedVertex { cell: 2, vertex: 1 }));
        assert!(mesh.cell_geometry().is_err());
    }

    #[test]
    fn shared_edge_and_shared_vertex() {
        let verts = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [1.0, 1.0, 0.0],
            [2.0, 2.0, 0.0],
            [2.0, 1.0, 0.0],
        ];
        // 0 and 1 share edge 1-2; 2 touches 1 only at vertex 3
        let mesh = SurfaceMesh::new(verts, vec![vec![0, 1, 2], vec![1, 3, 2], vec![3, 5, 4]]);
        let adj = mesh.build_adjacency().unwrap();
        assert_eq!(adj.neighbors(0), &[1]);
        assert_eq!(adj.neighbors(1), &[0]);
        assert!(adj.neighbors(2).is_empty());
        assert_eq!(adj.non_manifold_edges, 0);
    }

    #[test]
    fn non_manifold_edge_links_all_pairs() {
        let verts = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
        ];
        let mesh = SurfaceMesh::new(verts, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]);
        let adj = mesh.build_adjacency().unwrap();
        assert_eq!(adj.non_manifold_edges, 1);
        assert_eq!(adj.neighbors(0), &[1, 2]);
        assert_eq!(adj.neighbors(1), &[0, 2]);
        assert_eq!(adj.neighbors(2), &[0, 1]);
    }

    #[test]
    fn random_triangles_match_heron_tightly() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let mut p = || [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
            let (a, b, c) = (p(), p(), p());
            let oracle = heron(a, b, c);
            // skip slivers where Heron itself is ill-conditioned
            if oracle < 1e-3 {
                continue;
            }
            assert_abs_diff_eq!(triangle_area(a, b, c), oracle, epsilon = 1e-12);
        }
    }
}
