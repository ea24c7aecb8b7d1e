use nalgebra::{Rotation3, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// A closed polygon in R^3. The edge from the last vertex back to the first is implied.
///
/// Construction checks that there are at least three vertices, that every
/// coordinate is finite, and that consecutive vertices (cyclically) are distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec3>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec3>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidInput(format!(
                "polygon needs at least 3 vertices, got {n}"
            )));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidInput(format!("vertex {i} is not finite")));
            }
        }
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::InvalidInput(format!("edge {i} has zero length")));
            }
        }
        Ok(Polygon { vertices })
    }

    pub fn from_coords<I>(coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = [f64; 3]>,
    {
        Polygon::new(
            coords
                .into_iter()
                .map(|[x, y, z]| Vec3::new(x, y, z))
                .collect(),
        )
    }

    /// Number of vertices (equal to the number of edges).
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vec3> {
        self.vertices
    }

    /// Vertex with cyclic indexing.
    pub fn vertex(&self, i: isize) -> Vec3 {
        let n = self.len() as isize;
        self.vertices[i.rem_euclid(n) as usize]
    }

    /// Endpoints of edge `i`, running from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (Vec3, Vec3) {
        let n = self.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn edge_vector(&self, i: usize) -> Vec3 {
        let (a, b) = self.edge(i);
        b - a
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.edge_vector(i).norm()).collect()
    }

    pub fn centroid(&self) -> Vec3 {
        self.vertices.iter().sum::<Vec3>() / self.len() as f64
    }

    pub fn bounding_box_diagonal(&self) -> f64 {
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (hi - lo).norm()
    }

    /// Uniform scaling about the centroid.
    pub fn scaled(&self, factor: f64) -> Polygon {
        let c = self.centroid();
        self.map_vertices(|v| c + (v - c) * factor)
    }

    pub fn translated(&self, offset: Vec3) -> Polygon {
        self.map_vertices(|v| v + offset)
    }

    pub fn rotated(&self, rotation: &Rotation3<f64>) -> Polygon {
        self.map_vertices(|v| rotation * v)
    }

    /// Reflection through the plane z = 0 (the mirror image).
    pub fn mirrored(&self) -> Polygon {
        self.map_vertices(|v| Vec3::new(v.x, v.y, -v.z))
    }

    /// Same vertices traversed in the opposite direction.
    pub fn reversed(&self) -> Polygon {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polygon { vertices }
    }

    /// Same cyclic vertex sequence starting at `start`.
    pub fn relabeled(&self, start: usize) -> Polygon {
        let mut vertices = self.vertices.clone();
        vertices.rotate_left(start % self.len());
        Polygon { vertices }
    }

    pub(crate) fn map_vertices(&self, f: impl Fn(Vec3) -> Vec3) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_vertices_unchecked(vertices: Vec<Vec3>) -> Polygon {
        debug_assert!(vertices.len() >= 3);
        Polygon { vertices }
    }

    /// Flattened coordinates `[x0, y0, z0, x1, ...]`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.vertices.iter().flat_map(|v| [v.x, v.y, v.z]).collect()
    }

    /// Displaces every vertex by `scale * direction[3i..3i+3]`.
    pub(crate) fn displaced(&self, direction: &[f64], scale: f64) -> Polygon {
        debug_assert_eq!(direction.len(), 3 * self.len());
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v + Vec3::new(direction[3 * i], direction[3 * i + 1], direction[3 * i + 2]) * scale
            })
            .collect();
        Polygon { vertices }
    }
}

