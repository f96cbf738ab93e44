//! Continuous piecewise-linear (P1) finite element spaces with essential
//! boundary conditions, and the coarse-to-fine prolongation that embeds the
//! trial space into the test space.

use std::sync::Arc;

use crate::mesh::{BoundaryTag, ParentMap, Point, TriMesh, VertexOrigin};
use crate::sparse::SparseMatrix;
use crate::{Error, Result, ScalarFn};

/// Selects the boundary tags carrying essential (Dirichlet) conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcSelector {
    constrained: Vec<BoundaryTag>,
}

impl BcSelector {
    pub fn new(tags: &[BoundaryTag]) -> Self {
        let mut constrained = tags.to_vec();
        constrained.sort();
        constrained.dedup();
        Self { constrained }
    }

    /// Constrains the whole boundary.
    pub fn all() -> Self {
        Self::new(&BoundaryTag::ALL)
    }

    pub fn none() -> Self {
        Self::new(&[])
    }

    pub fn constrains(&self, tag: BoundaryTag) -> bool {
        self.constrained.contains(&tag)
    }

    pub fn tags(&self) -> &[BoundaryTag] {
        &self.constrained
    }
}

/// P1 nodal space over a triangle mesh with a free/constrained partition of
/// the vertices. Total DOFs = all vertices; free DOFs exclude vertices on
/// constrained boundary pieces.
#[derive(Clone, Debug)]
pub struct FeSpace {
    pub mesh: Arc<TriMesh>,
    pub bc: BcSelector,
    /// Unconstrained vertex ids, ascending.
    pub free_dofs: Vec<usize>,
    /// Inverse of `free_dofs`: vertex id to slot in free vectors.
    free_index: Vec<Option<usize>>,
    /// Prescribed value per vertex; zero at free vertices.
    pub dirichlet_values: Vec<f64>,
}

impl FeSpace {
    pub fn total_dofs(&self) -> usize {
        self.mesh.n_vertices()
    }

    pub fn n_free(&self) -> usize {
        self.free_dofs.len()
    }

    pub fn is_constrained(&self, vertex: usize) -> bool {
        self.free_index[vertex].is_none()
    }

    pub fn free_index(&self, vertex: usize) -> Option<usize> {
        self.free_index[vertex]
    }

    /// Scatters a free-DOF vector into a total-DOF vector, filling
    /// constrained entries with their Dirichlet values.
    pub fn expand(&self, free: &[f64]) -> Vec<f64> {
        assert_eq!(free.len(), self.n_free(), "free vector length mismatch");
        let mut total = self.dirichlet_values.clone();
        for (slot, &v) in self.free_dofs.iter().enumerate() {
            total[v] = free[slot];
        }
        total
    }

    /// Gathers the free entries of a total-DOF vector.
    pub fn restrict(&self, total: &[f64]) -> Vec<f64> {
        assert_eq!(total.len(), self.total_dofs(), "total vector length mismatch");
        self.free_dofs.iter().map(|&v| total[v]).collect()
    }

    /// Nodal interpolant of a scalar field, over all vertices.
    pub fn interpolate(&self, f: &dyn Fn(Point) -> f64) -> Vec<f64> {
        self.mesh.vertices.iter().map(|&p| f(p)).collect()
    }
}

/// Builds a P1 space: vertices on constrained boundary edges become
/// constrained DOFs, with values interpolated from `dirichlet_data`
/// (zero when absent).
pub fn build_space(
    mesh: Arc<TriMesh>,
    bc: &BcSelector,
    dirichlet_data: Option<&ScalarFn>,
) -> Result<FeSpace> {
    let present = mesh.boundary_tags();
    for &tag in bc.tags() {
        if !present.contains(&tag) {
            return Err(Error::InvalidInput(format!(
                "boundary tag `{tag}` not present in the mesh"
            )));
        }
    }
    let n = mesh.n_vertices();
    let mut constrained = vec![false; n];
    for be in &mesh.boundary_edges {
        if bc.constrains(be.tag) {
            constrained[be.vertices[0]] = true;
            constrained[be.vertices[1]] = true;
        }
    }
    let mut free_dofs = Vec::new();
    let mut free_index = vec![None; n];
    let mut dirichlet_values = vec![0.0; n];
    for v in 0..n {
        if constrained[v] {
            if let Some(g) = dirichlet_data {
                dirichlet_values[v] = g(mesh.vertices[v]);
            }
        } else {
            free_index[v] = Some(free_dofs.len());
            free_dofs.push(v);
        }
    }
    Ok(FeSpace {
        mesh,
        bc: bc.clone(),
        free_dofs,
        free_index,
        dirichlet_values,
    })
}

/// Linear map from coarse total-DOF vectors to fine total-DOF vectors that
/// represents the same piecewise-linear function exactly.
#[derive(Clone, Debug)]
pub struct Prolongation {
    pub matrix: SparseMatrix,
}

fn one_level_prolongation(n_coarse: usize, pm: &ParentMap) -> SparseMatrix {
    let mut triplets = Vec::with_capacity(pm.vertex_origin.len() * 2);
    for (fine, origin) in pm.vertex_origin.iter().enumerate() {
        match *origin {
            VertexOrigin::Coarse(c) => triplets.push((fine, c, 1.0)),
            VertexOrigin::EdgeMidpoint(a, b) => {
                triplets.push((fine, a, 0.5));
                triplets.push((fine, b, 0.5));
            }
        }
    }
    SparseMatrix::from_triplets(pm.vertex_origin.len(), n_coarse, &triplets)
}

/// Builds the prolongation along a chain of refinements from the coarse
/// space's mesh to the fine space's mesh. An empty chain yields the identity
/// (trial space equal to test space).
pub fn build_prolongation(
    coarse: &FeSpace,
    fine: &FeSpace,
    chain: &[ParentMap],
) -> Result<Prolongation> {
    if chain.is_empty() {
        if coarse.total_dofs() != fine.total_dofs() {
            return Err(Error::InvalidInput(
                "empty refinement chain but spaces differ in size".into(),
            ));
        }
        return Ok(Prolongation {
            matrix: SparseMatrix::identity(coarse.total_dofs()),
        });
    }
    let mut sizes = vec![coarse.total_dofs()];
    for pm in chain {
        sizes.push(pm.vertex_origin.len());
    }
    if *sizes.last().unwrap() != fine.total_dofs() {
        return Err(Error::InvalidInput(format!(
            "refinement chain produces {} vertices, fine space has {}",
            sizes.last().unwrap(),
            fine.total_dofs()
        )));
    }
    for (level, pm) in chain.iter().enumerate() {
        let consistent = pm.vertex_origin.iter().all(|o| match *o {
            VertexOrigin::Coarse(c) => c < sizes[level],
            VertexOrigin::EdgeMidpoint(a, b) => a < sizes[level] && b < sizes[level],
        });
        if !consistent {
            return Err(Error::InvalidInput(
                "refinement chain does not match the coarse mesh".into(),
            ));
        }
    }
    let mut matrix = one_level_prolongation(sizes[0], &chain[0]);
    for (level, pm) in chain.iter().enumerate().skip(1) {
        matrix = one_level_prolongation(sizes[level], pm).matmul(&matrix);
    }
    Ok(Prolongation { matrix })
}

/// Evaluates the P1 function with the given total-DOF coefficients at a
/// point, by barycentric interpolation in the containing triangle.
pub fn eval(space: &FeSpace, coeffs: &[f64], point: Point) -> Result<f64> {
    if coeffs.len() != space.total_dofs() {
        return Err(Error::InvalidInput(format!(
            "coefficient vector has {} entries, space has {} DOFs",
            coeffs.len(),
            space.total_dofs()
        )));
    }
    let mesh = &space.mesh;
    for t in 0..mesh.n_triangles() {
        let bary = mesh.barycentric(t, point);
        if bary.iter().all(|&l| l >= -1e-12) {
            let v = mesh.triangles[t].vertices;
            return Ok(bary[0] * coeffs[v[0]] + bary[1] * coeffs[v[1]] + bary[2] * coeffs[v[2]]);
        }
    }
    Err(Error::InvalidInput(format!(
        "point ({}, {}) lies outside the mesh",
        point[0], point[1]
    )))
}
