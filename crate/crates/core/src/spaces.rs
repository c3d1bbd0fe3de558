//! P1 spaces, degree-of-freedom maps, time grids and space-time coefficient
//! fields.
//!
//! Primal unknowns are continuous piecewise-linear in time; dual unknowns are
//! piecewise-constant in time. Spatially both live on P1 triangles, the dual
//! always with homogeneous Dirichlet conditions.

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::linalg;
use crate::mesh::TriMesh;
use crate::quadrature::{bary_to_xy, TRI_RADON_7};

pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// All vertices carry a dof.
    Full,
    /// Boundary vertices are constrained to zero.
    Dirichlet,
}

/// Vertex-to-dof numbering for one of the two spatial spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofMap {
    kind: SpaceKind,
    vertex_to_dof: Vec<Option<usize>>,
    dof_to_vertex: Vec<usize>,
}

impl DofMap {
    pub fn new(mesh: &TriMesh, kind: SpaceKind) -> Self {
        let mut vertex_to_dof = vec![None; mesh.n_vertices()];
        let mut dof_to_vertex = Vec::new();
        for v in 0..mesh.n_vertices() {
            if kind == SpaceKind::Dirichlet && mesh.is_boundary_vertex(v) {
                continue;
            }
            vertex_to_dof[v] = Some(dof_to_vertex.len());
            dof_to_vertex.push(v);
        }
        DofMap {
            kind,
            vertex_to_dof,
            dof_to_vertex,
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn n_dofs(&self) -> usize {
        self.dof_to_vertex.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_to_dof.len()
    }

    pub fn dof_of_vertex(&self, v: usize) -> Option<usize> {
        self.vertex_to_dof[v]
    }

    pub fn vertex_of_dof(&self, d: usize) -> usize {
        self.dof_to_vertex[d]
    }

    /// Dof vector → per-vertex values (zeros at constrained vertices).
    pub fn expand(&self, dofs: &[f64]) -> Vec<f64> {
        assert_eq!(dofs.len(), self.n_dofs());
        let mut out = vec![0.0; self.vertex_to_dof.len()];
        for (d, &v) in self.dof_to_vertex.iter().enumerate() {
            out[v] = dofs[d];
        }
        out
    }

    /// Per-vertex values → dof vector (drops constrained vertices).
    pub fn restrict(&self, vertex_values: &[f64]) -> Vec<f64> {
        assert_eq!(vertex_values.len(), self.vertex_to_dof.len());
        self.dof_to_vertex.iter().map(|&v| vertex_values[v]).collect()
    }
}

/// Uniform partition of (0, T) into slabs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_final: f64,
    n_slabs: usize,
}

impl TimeGrid {
    pub fn new(t_final: f64, n_slabs: usize) -> Result<Self> {
        if !(t_final > 0.0) || n_slabs == 0 {
            return Err(Error::InvalidArgument(format!(
                "time grid needs T > 0 and at least one slab, got T={t_final}, N={n_slabs}"
            )));
        }
        Ok(TimeGrid { t_final, n_slabs })
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn n_slabs(&self) -> usize {
        self.n_slabs
    }

    pub fn n_nodes(&self) -> usize {
        self.n_slabs + 1
    }

    pub fn tau(&self) -> f64 {
        self.t_final / self.n_slabs as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        self.t_final * k as f64 / self.n_slabs as f64
    }

    pub fn midpoint(&self, slab: usize) -> f64 {
        self.t_final * (slab as f64 + 0.5) / self.n_slabs as f64
    }

    /// Index of the grid node equal to `t`, if any.
    pub fn node_index(&self, t: f64) -> Option<usize> {
        let k = (t / self.tau()).round();
        if k < 0.0 || k > self.n_slabs as f64 {
            return None;
        }
        let k = k as usize;
        ((self.node(k) - t).abs() <= 1e-10 * self.t_final.max(1.0)).then_some(k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeBasis {
    /// Continuous piecewise-linear; coefficients at time nodes.
    P1Continuous,
    /// Piecewise-constant; coefficients per slab.
    P0Slabwise,
}

impl TimeBasis {
    pub fn n_rows(&self, grid: &TimeGrid) -> usize {
        match self {
            TimeBasis::P1Continuous => grid.n_nodes(),
            TimeBasis::P0Slabwise => grid.n_slabs(),
        }
    }
}

/// Coefficient tensor of a space-time finite element function.
///
/// Rows follow the time basis, columns the spatial dof map. The flat layout
/// (time-major) matches the unknown ordering of the assembled systems.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    pub basis: TimeBasis,
    pub dofs: DofMap,
    pub coeffs: Array2<f64>,
}

impl SpaceTimeField {
    pub fn zeros(basis: TimeBasis, dofs: DofMap, grid: &TimeGrid) -> Self {
        let rows = basis.n_rows(grid);
        let cols = dofs.n_dofs();
        SpaceTimeField {
            basis,
            dofs,
            coeffs: Array2::zeros((rows, cols)),
        }
    }

    pub fn from_flat(basis: TimeBasis, dofs: DofMap, grid: &TimeGrid, flat: Vec<f64>) -> Result<Self> {
        let rows = basis.n_rows(grid);
        let cols = dofs.n_dofs();
        if flat.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "flat length {} does not match {rows}×{cols}",
                flat.len()
            )));
        }
        let coeffs = Array2::from_shape_vec((rows, cols), flat)
            .expect("shape checked above");
        Ok(SpaceTimeField { basis, dofs, coeffs })
    }

    pub fn n_rows(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn row(&self, k: usize) -> ArrayView1<'_, f64> {
        self.coeffs.row(k)
    }

    /// Time-major flattened coefficients.
    pub fn flat(&self) -> &[f64] {
        self.coeffs.as_slice().expect("standard layout")
    }

    /// Per-vertex values of row `k` (zeros at constrained vertices).
    pub fn vertex_row(&self, k: usize) -> Vec<f64> {
        self.dofs.expand(self.row(k).as_slice().expect("contiguous row"))
    }
}

/// Samples a smooth function at the nodal points of the target space.
///
/// P1-in-time fields sample at time nodes, P0 fields at slab midpoints. A
/// Dirichlet target requires `f` to vanish on the boundary at every sampled
/// time.
pub fn nodal_interpolate(
    f: &dyn Fn(f64, f64, f64) -> f64,
    mesh: &TriMesh,
    grid: &TimeGrid,
    kind: SpaceKind,
    basis: TimeBasis,
) -> Result<SpaceTimeField> {
    let dofs = DofMap::new(mesh, kind);
    let mut field = SpaceTimeField::zeros(basis, dofs, grid);
    let times: Vec<f64> = match basis {
        TimeBasis::P1Continuous => (0..grid.n_nodes()).map(|k| grid.node(k)).collect(),
        TimeBasis::P0Slabwise => (0..grid.n_slabs()).map(|k| grid.midpoint(k)).collect(),
    };
    for (k, &t) in times.iter().enumerate() {
        if kind == SpaceKind::Dirichlet {
            for v in 0..mesh.n_vertices() {
                if mesh.is_boundary_vertex(v) {
                    let p = mesh.vertices()[v];
                    let val = f(t, p[0], p[1]);
                    if val.abs() > BOUNDARY_TOL {
                        return Err(Error::BoundaryViolation {
                            field: "interpolation target".into(),
                            value: val.abs(),
                            tol: BOUNDARY_TOL,
                        });
                    }
                }
            }
        }
        for d in 0..field.dofs.n_dofs() {
            let p = mesh.vertices()[field.dofs.vertex_of_dof(d)];
            field.coeffs[(k, d)] = f(t, p[0], p[1]);
        }
    }
    Ok(field)
}

/// Spatial-only nodal interpolation.
pub fn interpolate_spatial(f: &dyn Fn(f64, f64) -> f64, mesh: &TriMesh, dofs: &DofMap) -> Vec<f64> {
    (0..dofs.n_dofs())
        .map(|d| {
            let p = mesh.vertices()[dofs.vertex_of_dof(d)];
            f(p[0], p[1])
        })
        .collect()
}

/// Exact slabwise time derivative of a P1-in-time field.
pub fn time_derivative(u: &SpaceTimeField, grid: &TimeGrid) -> Result<SpaceTimeField> {
    if u.basis != TimeBasis::P1Continuous {
        return Err(Error::InvalidArgument(
            "time derivative needs a P1-in-time field".into(),
        ));
    }
    let tau = grid.tau();
    let mut out = SpaceTimeField::zeros(TimeBasis::P0Slabwise, u.dofs.clone(), grid);
    for k in 0..grid.n_slabs() {
        let hi = u.coeffs.row(k + 1);
        let lo = u.coeffs.row(k);
        let mut row = out.coeffs.row_mut(k);
        row.assign(&(&hi - &lo));
        row.mapv_inplace(|v| v / tau);
    }
    Ok(out)
}

/// Stiffness-orthogonal projection onto the Dirichlet space.
///
/// Factors the Dirichlet stiffness once; reuse for repeated projections.
pub struct RitzProjector {
    map: DofMap,
    chol: linalg::Chol,
}

impl RitzProjector {
    pub fn new(mesh: &TriMesh) -> Result<Self> {
        let map = DofMap::new(mesh, SpaceKind::Dirichlet);
        if map.n_dofs() == 0 {
            return Err(Error::DegenerateMesh(
                "no interior vertices; Dirichlet stiffness is empty".into(),
            ));
        }
        let k = crate::forms::stiffness_matrix(mesh, &map, &map, None)?;
        let chol = linalg::cholesky(&k).map_err(|_| {
            Error::DegenerateMesh("Dirichlet stiffness is not positive definite".into())
        })?;
        Ok(RitzProjector { map, chol })
    }

    pub fn map(&self) -> &DofMap {
        &self.map
    }

    /// Projects a function given by its gradient; returns dof coefficients.
    pub fn project(&self, mesh: &TriMesh, grad_f: &dyn Fn(f64, f64) -> [f64; 2]) -> Vec<f64> {
        let mut rhs = vec![0.0; self.map.n_dofs()];
        for t in 0..mesh.n_triangles() {
            let corners = mesh.triangle_corners(t);
            let area = mesh.triangle_area(t);
            let grads = mesh.p1_gradients(t);
            let tri = mesh.triangles()[t];
            for q in &TRI_RADON_7 {
                let xy = bary_to_xy(&corners, q.lambda);
                let g = grad_f(xy[0], xy[1]);
                for (loc, &v) in tri.iter().enumerate() {
                    if let Some(d) = self.map.dof_of_vertex(v) {
                        rhs[d] += area * q.weight * (g[0] * grads[loc][0] + g[1] * grads[loc][1]);
                    }
                }
            }
        }
        linalg::solve_chol(&self.chol, &rhs)
    }
}

/// One-shot Ritz projection of a smooth function with vanishing boundary
/// values; returns coefficients in the Dirichlet space.
pub fn ritz_project(
    grad_f: &dyn Fn(f64, f64) -> [f64; 2],
    mesh: &TriMesh,
) -> Result<Vec<f64>> {
    let proj = RitzProjector::new(mesh)?;
    Ok(proj.project(mesh, grad_f))
}

/// Evaluates a P1 function given by per-vertex values at a point of a
/// structured mesh.
pub fn eval_p1(mesh: &TriMesh, vertex_values: &[f64], x: f64, y: f64) -> Result<f64> {
    let (t, l) = mesh.locate(x, y)?;
    let tri = mesh.triangles()[t];
    Ok(l[0] * vertex_values[tri[0]] + l[1] * vertex_values[tri[1]] + l[2] * vertex_values[tri[2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_structured_mesh;
    use std::f64::consts::PI;

    #[test]
    fn dof_counts() {
        let mesh = build_structured_mesh(4).unwrap();
        let full = DofMap::new(&mesh, SpaceKind::Full);
        let dir = DofMap::new(&mesh, SpaceKind::Dirichlet);
        assert_eq!(full.n_dofs(), 25);
        assert_eq!(dir.n_dofs(), 9);
        // bijection onto 0..n_dofs
        for d in 0..dir.n_dofs() {
            assert_eq!(dir.dof_of_vertex(dir.vertex_of_dof(d)), Some(d));
        }
    }

    #[test]
    fn grid_nodes_are_uniform() {
        let grid = TimeGrid::new(0.5, 7).unwrap();
        for k in 0..grid.n_slabs() {
            let gap = grid.node(k + 1) - grid.node(k);
            assert!((gap - grid.tau()).abs() < 1e-14);
        }
        assert_eq!(grid.node_index(grid.node(3)), Some(3));
        assert_eq!(grid.node_index(0.33), None);
    }

    #[test]
    fn interpolation_reproduces_affine() {
        let mesh = build_structured_mesh(2).unwrap();
        let grid = TimeGrid::new(1.0, 2).unwrap();
        let f = nodal_interpolate(&|_, x, _| x, &mesh, &grid, SpaceKind::Full, TimeBasis::P1Continuous)
            .unwrap();
        for k in 0..grid.n_nodes() {
            for d in 0..f.dofs.n_dofs() {
                let p = mesh.vertices()[f.dofs.vertex_of_dof(d)];
                assert_eq!(f.coeffs[(k, d)], p[0]);
            }
        }
    }

    #[test]
    fn interpolation_is_a_projection() {
        let mesh = build_structured_mesh(4).unwrap();
        let grid = TimeGrid::new(1.0, 3).unwrap();
        let f = nodal_interpolate(
            &|t, x, y| (1.0 + t) * (x * x + 0.5 * y),
            &mesh,
            &grid,
            SpaceKind::Full,
            TimeBasis::P1Continuous,
        )
        .unwrap();
        // re-interpolating the discrete function returns it bit-identically
        let g = |t: f64, x: f64, y: f64| {
            let grid = TimeGrid::new(1.0, 3).unwrap();
            let k = grid.node_index(t).unwrap();
            eval_p1(&mesh, &f.vertex_row(k), x, y).unwrap()
        };
        let f2 = nodal_interpolate(&g, &mesh, &grid, SpaceKind::Full, TimeBasis::P1Continuous).unwrap();
        assert_eq!(f.coeffs, f2.coeffs);
    }

    #[test]
    fn dirichlet_target_rejects_nonzero_boundary() {
        let mesh = build_structured_mesh(2).unwrap();
        let grid = TimeGrid::new(1.0, 1).unwrap();
        let r = nodal_interpolate(&|_, x, _| x, &mesh, &grid, SpaceKind::Dirichlet, TimeBasis::P1Continuous);
        assert!(matches!(r, Err(Error::BoundaryViolation { .. })));
    }

    #[test]
    fn zero_function_interpolates_to_zero() {
        let mesh = build_structured_mesh(2).unwrap();
        let grid = TimeGrid::new(1.0, 2).unwrap();
        let f = nodal_interpolate(&|_, _, _| 0.0, &mesh, &grid, SpaceKind::Dirichlet, TimeBasis::P0Slabwise)
            .unwrap();
        assert!(f.coeffs.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn time_derivative_exact() {
        let mesh = build_structured_mesh(2).unwrap();
        let grid = TimeGrid::new(2.0, 4).unwrap();
        // constant in time → zero derivative
        let c = nodal_interpolate(&|_, x, y| x + y, &mesh, &grid, SpaceKind::Full, TimeBasis::P1Continuous)
            .unwrap();
        let dc = time_derivative(&c, &grid).unwrap();
        assert!(dc.coeffs.iter().all(|&v| v.abs() < 1e-14));
        // linear slope s = 3 everywhere
        let l = nodal_interpolate(&|t, _, _| 3.0 * t, &mesh, &grid, SpaceKind::Full, TimeBasis::P1Continuous)
            .unwrap();
        let dl = time_derivative(&l, &grid).unwrap();
        assert!(dl.coeffs.iter().all(|&v| (v - 3.0).abs() < 1e-12));
        // telescoping: τ·Σ slabs = endpoint difference
        let q = nodal_interpolate(
            &|t, x, y| t * t * (1.0 + x) - y * t,
            &mesh,
            &grid,
            SpaceKind::Full,
            TimeBasis::P1Continuous,
        )
        .unwrap();
        let dq = time_derivative(&q, &grid).unwrap();
        for d in 0..q.dofs.n_dofs() {
            let sum: f64 = (0..grid.n_slabs()).map(|k| dq.coeffs[(k, d)] * grid.tau()).sum();
            let diff = q.coeffs[(grid.n_slabs(), d)] - q.coeffs[(0, d)];
            assert!((sum - diff).abs() < 1e-12);
        }
        // P0 input is rejected
        assert!(time_derivative(&dq, &grid).is_err());
    }

    #[test]
    fn ritz_projection_is_identity_on_discrete_functions() {
        let mesh = build_structured_mesh(4).unwrap();
        let proj = RitzProjector::new(&mesh).unwrap();
        // hat function at an interior vertex: project its own gradient field
        let map = proj.map().clone();
        let target = 4; // some interior dof
        let hat_vertex = map.vertex_of_dof(target);
        let mut nodal = vec![0.0; mesh.n_vertices()];
        nodal[hat_vertex] = 1.0;
        // gradient of the hat as a mesh-aware closure
        let mesh2 = mesh.clone();
        let nodal2 = nodal.clone();
        let grad = move |x: f64, y: f64| -> [f64; 2] {
            // interior-point gradient of the P1 function
            let (t, _) = mesh2.locate(x, y).unwrap();
            let tri = mesh2.triangles()[t];
            let grads = mesh2.p1_gradients(t);
            let mut g = [0.0, 0.0];
            for (loc, &v) in tri.iter().enumerate() {
                g[0] += nodal2[v] * grads[loc][0];
                g[1] += nodal2[v] * grads[loc][1];
            }
            g
        };
        let coeffs = proj.project(&mesh, &grad);
        for (d, &c) in coeffs.iter().enumerate() {
            let expect = if d == target { 1.0 } else { 0.0 };
            assert!(
                (c - expect).abs() < 1e-11,
                "dof {d}: got {c}, expected {expect}"
            );
        }
    }

    #[test]
    fn ritz_projection_orthogonality_residual() {
        let mesh = build_structured_mesh(16).unwrap();
        let proj = RitzProjector::new(&mesh).unwrap();
        let grad = |x: f64, y: f64| -> [f64; 2] {
            [
                PI * (PI * x).cos() * (PI * y).sin(),
                PI * (PI * x).sin() * (PI * y).cos(),
            ]
        };
        let coeffs = proj.project(&mesh, &grad);
        // residual of the defining equations: K c - rhs ≈ 0 by construction;
        // instead check the projection against nodal interpolation error decay
        let map = proj.map();
        let nodal = interpolate_spatial(&|x, y| (PI * x).sin() * (PI * y).sin(), &mesh, map);
        let k = crate::forms::stiffness_matrix(&mesh, map, map, None).unwrap();
        let diff: Vec<f64> = coeffs.iter().zip(&nodal).map(|(a, b)| a - b).collect();
        let energy = crate::linalg::quad_form(&k, &diff, &diff).sqrt();
        // Ritz and nodal interpolant are O(h) apart in energy
        assert!(energy < 0.2, "energy gap {energy}");
    }
}
