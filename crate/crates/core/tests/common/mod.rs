//! Shared helpers for the integration suites: a dense brute-force solver for
//! the full saddle block system (independent of the Schur path it checks)
//! and a bundle that assembles one study level.
#![allow(dead_code)] // each test binary uses its own subset

use std::sync::Arc;

use lsfem::mesh::{uniform_refine_times, ParentMap, TriMesh};
use lsfem::space::{build_prolongation, build_space, FeSpace};
use lsfem::{assemble_system, quad_rule, AssembledSystem, ProblemDef, RefineRatio};

/// Gaussian elimination with partial pivoting; the test-side oracle.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())
            .unwrap();
        a.swap(k, pivot);
        b.swap(k, pivot);
        assert!(a[k][k].abs() > 1e-300, "singular dense system");
        for i in k + 1..n {
            let factor = a[i][k] / a[k][k];
            if factor == 0.0 {
                continue;
            }
            for j in k..n {
                a[i][j] -= factor * a[k][j];
            }
            b[i] -= factor * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in i + 1..n {
            acc -= a[i][j] * x[j];
        }
        x[i] = acc / a[i][i];
    }
    x
}

/// Brute-force solve of the full block system `[[A, B], [Bᵀ, 0]]`.
pub fn solve_block_dense(sys: &AssembledSystem) -> (Vec<f64>, Vec<f64>) {
    let ny = sys.n_free_test();
    let nx = sys.n_free_trial();
    let n = ny + nx;
    let mut dense = vec![vec![0.0; n]; n];
    for (r, c, v) in sys.a.entries() {
        dense[r][c] += v;
    }
    for (r, c, v) in sys.b.entries() {
        dense[r][ny + c] += v;
        dense[ny + c][r] += v;
    }
    let mut rhs = vec![0.0; n];
    for i in 0..ny {
        rhs[i] = sys.f[i] + sys.g[i];
    }
    let x = dense_solve(dense, rhs);
    (x[..ny].to_vec(), x[ny..].to_vec())
}

/// Everything one study level assembles.
pub struct Level {
    pub coarse: Arc<TriMesh>,
    pub fine: Arc<TriMesh>,
    pub chain: Vec<ParentMap>,
    pub trial: FeSpace,
    pub test: FeSpace,
    pub sys: AssembledSystem,
}

pub fn build_level(problem: &ProblemDef, coarse: Arc<TriMesh>, ratio: RefineRatio) -> Level {
    let refinements = match ratio {
        RefineRatio::Half => 1,
        RefineRatio::Quarter => 2,
    };
    let (fine, chain) = uniform_refine_times(&coarse, refinements);
    let fine = Arc::new(fine);
    let trial = build_space(
        Arc::clone(&coarse),
        &problem.x_bc,
        problem.dirichlet.as_deref(),
    )
    .unwrap();
    let test = build_space(Arc::clone(&fine), &problem.y_bc, None).unwrap();
    let prolongation = build_prolongation(&trial, &test, &chain).unwrap();
    let sys = assemble_system(problem, &trial, &test, &prolongation, &quad_rule(4).unwrap())
        .unwrap();
    Level {
        coarse,
        fine,
        chain,
        trial,
        test,
        sys,
    }
}

/// Deterministic pseudo-random stream (splitmix-style) for test sampling.
pub struct Rng(pub u64);

impl Rng {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
