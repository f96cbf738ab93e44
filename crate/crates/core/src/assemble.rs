//! Quadrature, element matrices, and global assembly of the saddle-point
//! blocks for the three problem families.
//!
//! Everything is assembled on the fine (test) mesh. The coarse trial space
//! enters only through the prolongation: `B = (fine B-form) · P`, restricted
//! to free rows and columns, so no cross-mesh quadrature is ever needed and
//! the nesting `X_H ⊂ Y_h` is exact.

use crate::mesh::Point;
use crate::problems::ExactSolution;
use crate::space::{BcSelector, FeSpace, Prolongation};
use crate::sparse::SparseMatrix;
use crate::{Error, Result, ScalarFn};

/// The three problem families. The kind decides which bilinear forms the
/// blocks `A` and `B` discretize:
///
/// * `Poisson`: `A = B` = full-gradient stiffness.
/// * `Heat`: `A` = x-derivative stiffness, `B` = `A` + time convection.
/// * `Wave`: `A` = full-gradient stiffness, `B` = x-stiffness minus
///   t-stiffness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    Poisson,
    Heat,
    Wave,
}

/// Computational domain of a benchmark problem, used to build initial meshes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    LShape,
    Rect { x: (f64, f64), y: (f64, f64) },
}

/// One benchmark problem: bilinear-form kind, source, essential conditions
/// for ansatz and test spaces, and optionally the exact solution.
pub struct ProblemDef {
    pub kind: ProblemKind,
    pub name: &'static str,
    pub domain: Domain,
    pub source: Box<ScalarFn>,
    pub exact: Option<ExactSolution>,
    /// Essential conditions of the ansatz space `X_H`.
    pub x_bc: BcSelector,
    /// Essential conditions of the test space `Y_h`.
    pub y_bc: BcSelector,
    /// Dirichlet data interpolated on the constrained ansatz vertices.
    pub dirichlet: Option<Box<ScalarFn>>,
    /// Dörfler parameter the experiments use for this problem.
    pub default_theta: f64,
}

/// Symmetric quadrature rule on the reference triangle in barycentric
/// coordinates; weights sum to one and are scaled by the triangle area.
#[derive(Clone, Debug)]
pub struct QuadRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

/// Gauss rules exact for polynomials of the given degree (1, 2, or 4).
pub fn quad_rule(degree: usize) -> Result<QuadRule> {
    let third = 1.0 / 3.0;
    match degree {
        1 => Ok(QuadRule {
            points: vec![[third, third, third]],
            weights: vec![1.0],
        }),
        2 => Ok(QuadRule {
            points: vec![[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]],
            weights: vec![third, third, third],
        }),
        4 => {
            let a = 0.445_948_490_915_964_9;
            let wa = 0.223_381_589_678_011_5;
            let b = 0.091_576_213_509_770_74;
            let wb = third - wa;
            let orbit = |c: f64| {
                [
                    [c, c, 1.0 - 2.0 * c],
                    [c, 1.0 - 2.0 * c, c],
                    [1.0 - 2.0 * c, c, c],
                ]
            };
            let mut points = orbit(a).to_vec();
            points.extend_from_slice(&orbit(b));
            Ok(QuadRule {
                points,
                weights: vec![wa, wa, wa, wb, wb, wb],
            })
        }
        _ => Err(Error::InvalidInput(format!(
            "unsupported quadrature degree {degree} (expected 1, 2, or 4)"
        ))),
    }
}

/// Signed area and constant P1 gradients of a triangle.
fn geometry(coords: &[Point; 3]) -> Result<(f64, [[f64; 2]; 3])> {
    let [p0, p1, p2] = *coords;
    let double_area =
        (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    if double_area.abs() < f64::MIN_POSITIVE * 4.0 || double_area == 0.0 {
        return Err(Error::InvalidInput("degenerate (zero-area) triangle".into()));
    }
    let grads = [
        [(p1[1] - p2[1]) / double_area, (p2[0] - p1[0]) / double_area],
        [(p2[1] - p0[1]) / double_area, (p0[0] - p2[0]) / double_area],
        [(p0[1] - p1[1]) / double_area, (p1[0] - p0[0]) / double_area],
    ];
    Ok((0.5 * double_area, grads))
}

/// Element matrix of the `A` form: full-gradient stiffness for Poisson and
/// wave, x-derivative stiffness for heat.
pub fn local_a(kind: ProblemKind, coords: &[Point; 3]) -> Result<[[f64; 3]; 3]> {
    let (area, g) = geometry(coords)?;
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = match kind {
                ProblemKind::Poisson | ProblemKind::Wave => {
                    area * (g[i][0] * g[j][0] + g[i][1] * g[j][1])
                }
                ProblemKind::Heat => area * g[i][0] * g[j][0],
            };
        }
    }
    Ok(k)
}

/// Element matrix of the `B` form; rows are test functions, columns trial
/// functions.
pub fn local_b(kind: ProblemKind, coords: &[Point; 3]) -> Result<[[f64; 3]; 3]> {
    let (area, g) = geometry(coords)?;
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = match kind {
                ProblemKind::Poisson => area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]),
                // ∫ ∂_t φ_j ψ_i + ∫ ∂_x φ_j ∂_x ψ_i with ∫ ψ_i = area/3
                ProblemKind::Heat => area * (g[i][0] * g[j][0] + g[j][1] / 3.0),
                ProblemKind::Wave => area * (g[i][0] * g[j][0] - g[i][1] * g[j][1]),
            };
        }
    }
    Ok(k)
}

/// Heat time-convection element matrix `∫ ∂_t φ_j ψ_i`, kept separate for
/// the discrete X-norm.
fn local_convection(coords: &[Point; 3]) -> Result<[[f64; 3]; 3]> {
    let (area, g) = geometry(coords)?;
    let mut k = [[0.0; 3]; 3];
    for row in &mut k {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = area * g[j][1] / 3.0;
        }
    }
    Ok(k)
}

/// Assembled saddle-point blocks on free DOFs.
///
/// `a` is `M_Y × M_Y`, `b` is `M_Y × M_X`; `f` holds the load and `g` the
/// Dirichlet-lift contribution, so the first block equation reads
/// `A p + B u = f + g`. `a_trial` is the `A` form restricted to the trial
/// space (through the prolongation), and `convection` the heat `∂_t` block.
pub struct AssembledSystem {
    pub a: SparseMatrix,
    pub b: SparseMatrix,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub a_trial: SparseMatrix,
    pub convection: Option<SparseMatrix>,
    pub kind: ProblemKind,
}

impl AssembledSystem {
    pub fn n_free_test(&self) -> usize {
        self.a.rows()
    }

    pub fn n_free_trial(&self) -> usize {
        self.b.cols()
    }
}

/// Assembles `A`, `B`, and the load for the given problem on the fine (test)
/// mesh, injecting the coarse trial space through the prolongation.
pub fn assemble_system(
    problem: &ProblemDef,
    trial: &FeSpace,
    test: &FeSpace,
    prolongation: &Prolongation,
    quad: &QuadRule,
) -> Result<AssembledSystem> {
    let p = &prolongation.matrix;
    if p.rows() != test.total_dofs() || p.cols() != trial.total_dofs() {
        return Err(Error::InvalidInput(format!(
            "prolongation is {}x{}, expected {}x{}",
            p.rows(),
            p.cols(),
            test.total_dofs(),
            trial.total_dofs()
        )));
    }
    if trial.bc != problem.x_bc || test.bc != problem.y_bc {
        return Err(Error::InvalidInput(
            "space boundary conditions do not match the problem".into(),
        ));
    }

    let mesh = &test.mesh;
    let n_total = test.total_dofs();
    let n_tris = mesh.n_triangles();
    let mut a_triplets = Vec::with_capacity(9 * n_tris);
    let mut b_triplets = Vec::with_capacity(9 * n_tris);
    let mut c_triplets = Vec::with_capacity(9 * n_tris);
    let mut load = vec![0.0; n_total];

    for t in 0..n_tris {
        let coords = mesh.triangle_coords(t);
        let verts = mesh.triangles[t].vertices;
        let ka = local_a(problem.kind, &coords)?;
        let kb = local_b(problem.kind, &coords)?;
        let kc = if problem.kind == ProblemKind::Heat {
            Some(local_convection(&coords)?)
        } else {
            None
        };
        for i in 0..3 {
            for j in 0..3 {
                a_triplets.push((verts[i], verts[j], ka[i][j]));
                b_triplets.push((verts[i], verts[j], kb[i][j]));
                if let Some(kc) = &kc {
                    c_triplets.push((verts[i], verts[j], kc[i][j]));
                }
            }
        }
        let area = mesh.triangle_area(t);
        for (q, bary) in quad.points.iter().enumerate() {
            let x = [
                bary[0] * coords[0][0] + bary[1] * coords[1][0] + bary[2] * coords[2][0],
                bary[0] * coords[0][1] + bary[1] * coords[1][1] + bary[2] * coords[2][1],
            ];
            let fx = (problem.source)(x);
            let w = quad.weights[q] * area;
            for i in 0..3 {
                load[verts[i]] += w * fx * bary[i];
            }
        }
    }

    let a_ff = SparseMatrix::from_triplets(n_total, n_total, &a_triplets);
    let b_ff = SparseMatrix::from_triplets(n_total, n_total, &b_triplets);
    let b_tot = b_ff.matmul(p);
    let a_tr_tot = p.transpose().matmul(&a_ff.matmul(p));

    let test_free = &test.free_dofs;
    let trial_free = &trial.free_dofs;
    let a = a_ff.restrict(test_free, test_free);
    let b = b_tot.restrict(test_free, trial_free);
    let a_trial = a_tr_tot.restrict(trial_free, trial_free);
    let convection = if problem.kind == ProblemKind::Heat {
        let c_ff = SparseMatrix::from_triplets(n_total, n_total, &c_triplets);
        Some(c_ff.matmul(p).restrict(test_free, trial_free))
    } else {
        None
    };

    debug_assert!(a.symmetry_defect() <= 1e-13 * a.max_abs().max(1.0));

    // move the Dirichlet lifts of both spaces to the right-hand side
    let mut lift = b_tot.matvec(&trial.dirichlet_values);
    let test_lift = a_ff.matvec(&test.dirichlet_values);
    for (l, t) in lift.iter_mut().zip(test_lift) {
        *l += t;
    }
    let f = test_free.iter().map(|&v| load[v]).collect();
    let g = test_free.iter().map(|&v| -lift[v]).collect();

    Ok(AssembledSystem {
        a,
        b,
        f,
        g,
        a_trial,
        convection,
        kind: problem.kind,
    })
}
