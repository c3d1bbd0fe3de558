//! Conforming triangulations of the unit square with internal-face adjacency.
//!
//! The structured family splits an n×n grid of squares along the same
//! diagonal, which makes refinement n → 2n nested and keeps axis-aligned
//! boxes with corners on grid lines exactly element-resolved.

use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};

/// An internal face (edge shared by exactly two triangles).
///
/// `vertices` is the directed edge as it appears counterclockwise in the
/// `left` triangle, so `normal` (the outward normal of `left`) points from
/// `left` into `right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InternalFace {
    pub vertices: [usize; 2],
    pub left: usize,
    pub right: usize,
    pub normal: [f64; 2],
    pub length: f64,
}

/// Axis-aligned box; a triangle belongs to the region iff its barycenter
/// lies inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Region {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Region { x0, x1, y0, y1 }
    }

    /// The whole unit square.
    pub fn full() -> Self {
        Region::new(0.0, 1.0, 0.0, 1.0)
    }

    pub fn is_full(&self) -> bool {
        self.x0 <= 0.0 && self.x1 >= 1.0 && self.y0 <= 0.0 && self.y1 >= 1.0
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0).max(0.0) * (self.y1 - self.y0).max(0.0)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    /// True if all four corners sit on grid lines of the n×n mesh.
    pub fn is_grid_aligned(&self, n: usize) -> bool {
        let on_line = |v: f64| (v * n as f64 - (v * n as f64).round()).abs() <= 1e-9;
        on_line(self.x0) && on_line(self.x1) && on_line(self.y0) && on_line(self.y1)
    }
}

/// Conforming triangulation with precomputed face adjacency.
#[derive(Debug, Clone)]
pub struct TriMesh {
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    internal_faces: Vec<InternalFace>,
    boundary_vertex: Vec<bool>,
    h: f64,
    /// Set for the structured family; enables O(1) point location.
    grid_n: Option<usize>,
}

impl TriMesh {
    /// Builds a mesh from raw vertices and counterclockwise triangles,
    /// deriving faces, boundary flags and h. Fails on non-conforming input.
    pub fn from_raw(vertices: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v >= vertices.len() {
                    return Err(Error::MeshStructure(format!(
                        "triangle {t} references missing vertex {v}"
                    )));
                }
            }
            if signed_area(&vertices, tri) <= 0.0 {
                return Err(Error::MeshStructure(format!(
                    "triangle {t} is degenerate or clockwise"
                )));
            }
        }
        let internal_faces = collect_internal_faces(&vertices, &triangles)?;
        let mut boundary_vertex = vec![false; vertices.len()];
        for (edge, tris) in edge_incidence(&triangles) {
            if tris.1.is_none() {
                boundary_vertex[edge.0] = true;
                boundary_vertex[edge.1] = true;
            }
        }
        let h = triangles
            .iter()
            .map(|t| diameter(&vertices, t))
            .fold(0.0, f64::max);
        Ok(TriMesh {
            vertices,
            triangles,
            internal_faces,
            boundary_vertex,
            h,
            grid_n: None,
        })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn internal_faces(&self) -> &[InternalFace] {
        &self.internal_faces
    }

    pub fn boundary_vertex_flags(&self) -> &[bool] {
        &self.boundary_vertex
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    /// Max element diameter.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Subdivisions per side for structured meshes.
    pub fn grid_n(&self) -> Option<usize> {
        self.grid_n
    }

    pub fn triangle_corners(&self, t: usize) -> [[f64; 2]; 3] {
        let tri = self.triangles[t];
        [
            self.vertices[tri[0]],
            self.vertices[tri[1]],
            self.vertices[tri[2]],
        ]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        signed_area(&self.vertices, &self.triangles[t])
    }

    pub fn barycenter(&self, t: usize) -> [f64; 2] {
        let p = self.triangle_corners(t);
        [
            (p[0][0] + p[1][0] + p[2][0]) / 3.0,
            (p[0][1] + p[1][1] + p[2][1]) / 3.0,
        ]
    }

    /// Constant gradients of the three nodal basis functions on triangle `t`.
    pub fn p1_gradients(&self, t: usize) -> [[f64; 2]; 3] {
        let p = self.triangle_corners(t);
        let two_a = 2.0 * signed_area(&self.vertices, &self.triangles[t]);
        // ∇λ_i is the inward-rotated opposite edge over twice the area.
        [
            [(p[1][1] - p[2][1]) / two_a, (p[2][0] - p[1][0]) / two_a],
            [(p[2][1] - p[0][1]) / two_a, (p[0][0] - p[2][0]) / two_a],
            [(p[0][1] - p[1][1]) / two_a, (p[1][0] - p[0][0]) / two_a],
        ]
    }

    /// Locates the triangle containing (x, y) on a structured mesh and
    /// returns its index with barycentric coordinates.
    pub fn locate(&self, x: f64, y: f64) -> Result<(usize, [f64; 3])> {
        let n = self.grid_n.ok_or_else(|| {
            Error::InvalidArgument("point location requires a structured mesh".into())
        })? as f64;
        let clamp = |v: f64| v.clamp(0.0, 1.0 - 1e-13);
        let (xc, yc) = (clamp(x), clamp(y));
        let i = (xc * n).floor().min(n - 1.0) as usize;
        let j = (yc * n).floor().min(n - 1.0) as usize;
        let nn = self.grid_n.unwrap();
        // Local coordinates in the cell decide the diagonal side.
        let lx = xc * n - i as f64;
        let ly = yc * n - j as f64;
        let cell = 2 * (j * nn + i);
        let t = if lx >= ly { cell } else { cell + 1 };
        let p = self.triangle_corners(t);
        let a = signed_area(&self.vertices, &self.triangles[t]);
        let l0 = ((p[1][0] - x) * (p[2][1] - y) - (p[2][0] - x) * (p[1][1] - y)) / (2.0 * a);
        let l1 = ((p[2][0] - x) * (p[0][1] - y) - (p[0][0] - x) * (p[2][1] - y)) / (2.0 * a);
        Ok((t, [l0, l1, 1.0 - l0 - l1]))
    }

    /// Writes the debug dump: "nv nt nf", vertices, triangles, face records.
    pub fn write_dump<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(
            w,
            "{} {} {}",
            self.n_vertices(),
            self.n_triangles(),
            self.internal_faces.len()
        )?;
        for v in &self.vertices {
            writeln!(w, "{} {}", v[0], v[1])?;
        }
        for t in &self.triangles {
            writeln!(w, "{} {} {}", t[0], t[1], t[2])?;
        }
        for f in &self.internal_faces {
            writeln!(
                w,
                "{} {} {} {} {} {} {}",
                f.vertices[0], f.vertices[1], f.left, f.right, f.normal[0], f.normal[1], f.length
            )?;
        }
        Ok(())
    }
}

fn signed_area(vertices: &[[f64; 2]], tri: &[usize; 3]) -> f64 {
    let [a, b, c] = [vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]];
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

fn diameter(vertices: &[[f64; 2]], tri: &[usize; 3]) -> f64 {
    let p = [vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]];
    let d = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    d(p[0], p[1]).max(d(p[1], p[2])).max(d(p[2], p[0]))
}

type EdgeUse = ((usize, usize), (usize, Option<usize>));

/// Maps each undirected edge to the one or two triangles using it.
fn edge_incidence(triangles: &[[usize; 3]]) -> Vec<EdgeUse> {
    let mut map: HashMap<(usize, usize), (usize, Option<usize>)> = HashMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for e in 0..3 {
            let (a, b) = (tri[e], tri[(e + 1) % 3]);
            let key = (a.min(b), a.max(b));
            map.entry(key)
                .and_modify(|slot| slot.1 = Some(t))
                .or_insert((t, None));
        }
    }
    let mut v: Vec<EdgeUse> = map.into_iter().collect();
    v.sort_by_key(|(k, _)| *k);
    v
}

/// Derives the internal-face list. Errors if an edge is used by more than
/// two triangles.
pub fn collect_internal_faces(
    vertices: &[[f64; 2]],
    triangles: &[[usize; 3]],
) -> Result<Vec<InternalFace>> {
    let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
    for tri in triangles {
        for e in 0..3 {
            let (a, b) = (tri[e], tri[(e + 1) % 3]);
            *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }
    if let Some((edge, c)) = counts.iter().find(|(_, &c)| c > 2) {
        return Err(Error::MeshStructure(format!(
            "edge {edge:?} shared by {c} triangles"
        )));
    }

    // First triangle registering the directed edge (a→b CCW) becomes `left`.
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for e in 0..3 {
            let (a, b) = (tri[e], tri[(e + 1) % 3]);
            if directed.insert((a, b), t).is_some() {
                return Err(Error::MeshStructure(format!(
                    "directed edge ({a},{b}) appears twice; inconsistent orientation"
                )));
            }
        }
    }

    let mut faces = Vec::new();
    let mut keys: Vec<(usize, usize)> = directed.keys().copied().collect();
    keys.sort_unstable();
    for (a, b) in keys {
        if a > b {
            continue; // handled from the (b, a) side below
        }
        let left = directed[&(a, b)];
        let Some(&right) = directed.get(&(b, a)) else {
            continue; // boundary edge
        };
        let pa = vertices[a];
        let pb = vertices[b];
        let dx = pb[0] - pa[0];
        let dy = pb[1] - pa[1];
        let len = (dx * dx + dy * dy).sqrt();
        faces.push(InternalFace {
            vertices: [a, b],
            left,
            right,
            // outward normal of `left` along its CCW edge a→b
            normal: [dy / len, -dx / len],
            length: len,
        });
    }
    Ok(faces)
}

/// Builds the structured n×n mesh of the unit square, every cell split along
/// the diagonal from its lower-left to its upper-right corner.
pub fn build_structured_mesh(n: usize) -> Result<TriMesh> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 subdivisions per side, got {n}"
        )));
    }
    let np = n + 1;
    let mut vertices = Vec::with_capacity(np * np);
    for j in 0..np {
        for i in 0..np {
            vertices.push([i as f64 / n as f64, j as f64 / n as f64]);
        }
    }
    let idx = |i: usize, j: usize| j * np + i;
    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            triangles.push([a, b, c]); // below the diagonal a–c
            triangles.push([a, c, d]); // above
        }
    }
    let mut mesh = TriMesh::from_raw(vertices, triangles)?;
    mesh.grid_n = Some(n);
    Ok(mesh)
}

/// Indices of the triangles whose barycenter lies in `r`, ascending.
pub fn triangles_in_region(mesh: &TriMesh, r: &Region) -> Vec<usize> {
    (0..mesh.n_triangles())
        .filter(|&t| {
            let c = mesh.barycenter(t);
            r.contains(c[0], c[1])
        })
        .collect()
}
