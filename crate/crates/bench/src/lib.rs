//! Benchmark fixtures: prebuilt meshes and systems shared by the criterion
//! targets.

use std::sync::Arc;

use lsfem::mesh::{uniform_refine, uniform_refine_times, TriMesh};
use lsfem::space::{build_prolongation, build_space};
use lsfem::{assemble_system, quad_rule, AssembledSystem, ProblemDef};

/// Coarse mesh of the given problem refined `levels` times.
pub fn refined_mesh(problem: &ProblemDef, levels: usize) -> TriMesh {
    let mut mesh = lsfem::problems::initial_mesh(problem, None).unwrap();
    for _ in 0..levels {
        mesh = uniform_refine(&mesh).0;
    }
    mesh
}

/// Assembles the h = H/2 system for a problem on the given coarse mesh.
pub fn assembled(problem: &ProblemDef, coarse: TriMesh) -> AssembledSystem {
    let coarse = Arc::new(coarse);
    let (fine, chain) = uniform_refine_times(&coarse, 1);
    let trial = build_space(
        Arc::clone(&coarse),
        &problem.x_bc,
        problem.dirichlet.as_deref(),
    )
    .unwrap();
    let test = build_space(Arc::new(fine), &problem.y_bc, None).unwrap();
    let p = build_prolongation(&trial, &test, &chain).unwrap();
    assemble_system(problem, &trial, &test, &p, &quad_rule(4).unwrap()).unwrap()
}
