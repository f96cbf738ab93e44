//! Saddle-point solver built on the Schur complement.
//!
//! `A` is factored once (sparse Cholesky); the trial variable solves
//! `Bᵀ A⁻¹ B u = Bᵀ A⁻¹ (f + g)` by conjugate gradients where every operator
//! application costs one `A`-solve and two sparse products, and the adjoint
//! follows as `p = A⁻¹ (f + g - B u)`. The module also provides the discrete
//! norm machinery (`‖·‖_Y`, the heat `‖·‖_{X,h}`) and an inf-sup-constant
//! diagnostic via inverse power iteration on the pencil
//! `(Bᵀ A⁻¹ B) v = λ X v`.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Llt, SymbolicLlt};
use faer::sparse::{SparseColMat, Triplet};
use faer::Side;

use crate::assemble::AssembledSystem;
use crate::sparse::SparseMatrix;
use crate::{Error, Result};

/// Cholesky factorization handle for a symmetric positive definite matrix.
pub struct SpdFactor {
    n: usize,
    llt: Llt<usize, f64>,
}

/// Factors a symmetric positive definite matrix; an indefinite matrix is
/// reported as [`Error::NotSpd`], which doubles as the SPD test used by the
/// assembly invariants.
pub fn factor_spd(a: &SparseMatrix) -> Result<SpdFactor> {
    a.require_square()?;
    let scale = a.max_abs().max(1.0);
    if a.symmetry_defect() > 1e-12 * scale {
        return Err(Error::InvalidInput("matrix is not symmetric".into()));
    }
    let triplets: Vec<Triplet<usize, usize, f64>> = a
        .entries()
        .map(|(r, c, v)| Triplet::new(r, c, v))
        .collect();
    let mat = SparseColMat::try_new_from_triplets(a.rows(), a.rows(), &triplets)
        .map_err(|e| Error::InvalidInput(format!("sparse conversion failed: {e:?}")))?;
    let symbolic = SymbolicLlt::try_new(mat.symbolic(), Side::Lower)
        .map_err(|e| Error::InvalidInput(format!("symbolic factorization failed: {e:?}")))?;
    let llt =
        Llt::try_new_with_symbolic(symbolic, mat.as_ref(), Side::Lower).map_err(|_| Error::NotSpd)?;
    Ok(SpdFactor { n: a.rows(), llt })
}

impl SpdFactor {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "rhs length mismatch");
        if self.n == 0 {
            return Vec::new();
        }
        let rhs = faer::Mat::from_fn(self.n, 1, |i, _| b[i]);
        let x = self.llt.solve(&rhs);
        (0..self.n).map(|i| x[(i, 0)]).collect()
    }
}

/// Solution of the saddle-point system with block residual norms.
#[derive(Clone, Debug)]
pub struct SaddleSolution {
    /// Adjoint coefficients on the free test DOFs.
    pub p: Vec<f64>,
    /// Primal coefficients on the free trial DOFs.
    pub u: Vec<f64>,
    /// Euclidean norm of `A p + B u - (f + g)`.
    pub residual_p: f64,
    /// Euclidean norm of `Bᵀ p`.
    pub residual_u: f64,
    /// Schur CG iterations.
    pub iterations: usize,
    /// Norm of the Schur right-hand side, the scale of the stopping test.
    pub schur_rhs_norm: f64,
}

pub(crate) struct CgResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub rel_residual: f64,
    pub converged: bool,
}

/// Plain conjugate gradients on an SPD operator, stopping at
/// `‖r‖ ≤ rel_tol · ‖rhs‖`. The observer sees every iterate.
pub(crate) fn conjugate_gradient(
    apply: &dyn Fn(&[f64]) -> Vec<f64>,
    rhs: &[f64],
    rel_tol: f64,
    max_iter: usize,
    mut observer: Option<&mut dyn FnMut(&[f64])>,
) -> CgResult {
    let n = rhs.len();
    let rhs_norm = norm(rhs);
    let mut x = vec![0.0; n];
    if n == 0 || rhs_norm == 0.0 {
        return CgResult {
            x,
            iterations: 0,
            rel_residual: 0.0,
            converged: true,
        };
    }
    let mut r = rhs.to_vec();
    let mut d = r.clone();
    let mut rr = dot(&r, &r);
    let target = rel_tol * rhs_norm;
    for it in 0..max_iter {
        if rr.sqrt() <= target {
            return CgResult {
                x,
                iterations: it,
                rel_residual: rr.sqrt() / rhs_norm,
                converged: true,
            };
        }
        let ad = apply(&d);
        let dad = dot(&d, &ad);
        if !(dad > 0.0) {
            // operator not positive definite along d, or exact stagnation
            break;
        }
        let alpha = rr / dad;
        for i in 0..n {
            x[i] += alpha * d[i];
            r[i] -= alpha * ad[i];
        }
        if let Some(obs) = observer.as_deref_mut() {
            obs(&x);
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            d[i] = r[i] + beta * d[i];
        }
    }
    CgResult {
        rel_residual: rr.sqrt() / rhs_norm,
        converged: rr.sqrt() <= target,
        iterations: max_iter,
        x,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Reusable solver state: the assembled system plus the `A` factorization.
pub struct SaddleSolver<'a> {
    sys: &'a AssembledSystem,
    factor: SpdFactor,
}

impl<'a> SaddleSolver<'a> {
    pub fn new(sys: &'a AssembledSystem) -> Result<Self> {
        let factor = factor_spd(&sys.a)?;
        Ok(SaddleSolver { sys, factor })
    }

    pub fn system(&self) -> &AssembledSystem {
        self.sys
    }

    pub fn factor(&self) -> &SpdFactor {
        &self.factor
    }

    /// `f + g`, the effective first-block right-hand side.
    pub fn rhs_effective(&self) -> Vec<f64> {
        self.sys.f.iter().zip(&self.sys.g).map(|(a, b)| a + b).collect()
    }

    /// Applies the Schur complement `Bᵀ A⁻¹ B`.
    pub fn apply_schur(&self, v: &[f64]) -> Vec<f64> {
        let bv = self.sys.b.matvec(v);
        let aibv = self.factor.solve(&bv);
        self.sys.b.matvec_transpose(&aibv)
    }

    /// Solves the saddle system by Schur-complement CG.
    pub fn solve(&self, tol: f64) -> Result<SaddleSolution> {
        if !(tol > 0.0 && tol <= 1e-6) {
            return Err(Error::InvalidInput(format!(
                "solver tolerance {tol:e} outside (0, 1e-6]"
            )));
        }
        let rhs_eff = self.rhs_effective();
        let schur_rhs = self.sys.b.matvec_transpose(&self.factor.solve(&rhs_eff));
        let schur_rhs_norm = norm(&schur_rhs);
        let m_x = self.sys.n_free_trial();
        let cap = 10 * m_x.max(1);
        let apply = |v: &[f64]| self.apply_schur(v);
        let cg = conjugate_gradient(&apply, &schur_rhs, tol, cap, None);

        let finish = |u: Vec<f64>, iterations: usize| {
            let bu = self.sys.b.matvec(&u);
            let mut resid = rhs_eff.clone();
            for i in 0..resid.len() {
                resid[i] -= bu[i];
            }
            let p = self.factor.solve(&resid);
            let ap = multiply_into(&self.sys.a, &p);
            let residual_p = (0..resid.len())
                .map(|i| (ap[i] + bu[i] - rhs_eff[i]).powi(2))
                .sum::<f64>()
                .sqrt();
            let residual_u = norm(&self.sys.b.matvec_transpose(&p));
            SaddleSolution {
                p,
                u,
                residual_p,
                residual_u,
                iterations,
                schur_rhs_norm,
            }
        };

        if cg.converged {
            Ok(finish(cg.x, cg.iterations))
        } else {
            let iterations = cg.iterations;
            let residual = cg.rel_residual;
            Err(Error::CgStall {
                iterations,
                residual,
                best: Box::new(finish(cg.x, iterations)),
            })
        }
    }

    /// Discrete heat norm `‖u‖_{X,h} = √(‖u‖_Y² + ‖w‖_Y²)` where `w ∈ Y_h`
    /// is the Riesz lift of `∂_t u`: `A w = C u`.
    pub fn discrete_x_norm(&self, u: &[f64]) -> Result<f64> {
        let convection = self.sys.convection.as_ref().ok_or_else(|| {
            Error::InvalidInput("discrete X-norm needs the heat time-convection block".into())
        })?;
        if u.len() != self.sys.n_free_trial() {
            return Err(Error::InvalidInput(format!(
                "vector has {} entries, trial space has {}",
                u.len(),
                self.sys.n_free_trial()
            )));
        }
        let cu = convection.matvec(u);
        let w = self.factor.solve(&cu);
        let trial_part = self.sys.a_trial.quadratic_form(u, u);
        // ‖w‖_Y² = wᵀ A w = wᵀ (C u) since A w = C u
        let lift_part = dot(&w, &cu);
        Ok((trial_part + lift_part).max(0.0).sqrt())
    }

    /// Smallest generalized singular value of `B` against the given trial
    /// norm: `√λ_min` of `(Bᵀ A⁻¹ B) v = λ X v` by inverse power iteration
    /// (1e-8 relative eigenvalue change).
    pub fn infsup_constant(&self, x_norm: &dyn SymmetricOp) -> Result<f64> {
        let n = self.sys.n_free_trial();
        if x_norm.dim() != n {
            return Err(Error::InvalidInput(format!(
                "X-norm operator has dimension {}, trial space has {}",
                x_norm.dim(),
                n
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput(
                "inf-sup constant undefined without free trial DOFs".into(),
            ));
        }
        // deterministic pseudo-random start vector
        let mut state = 0x853c49e6748fea9bu64;
        let mut v: Vec<f64> = (0..n)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
            })
            .collect();
        let apply = |w: &[f64]| self.apply_schur(w);
        let mut lambda_old = f64::INFINITY;
        let max_outer = 500;
        for _ in 0..max_outer {
            let y = x_norm.apply(&v);
            let cg = conjugate_gradient(&apply, &y, 1e-12, 10 * n.max(10), None);
            if !cg.converged {
                return Err(Error::NoConvergence {
                    what: "inner Schur solve of the inf-sup iteration",
                    iterations: cg.iterations,
                });
            }
            let w = cg.x;
            // S w = X v, so wᵀ S w = wᵀ X v
            let num = dot(&w, &y);
            let xw = x_norm.apply(&w);
            let den = dot(&w, &xw);
            if !(den > 0.0) {
                return Err(Error::InvalidInput(
                    "X-norm operator is not positive definite".into(),
                ));
            }
            let lambda = num / den;
            let scale = den.sqrt();
            v = w.iter().map(|&wi| wi / scale).collect();
            if (lambda - lambda_old).abs() <= 1e-8 * lambda.abs() {
                return Ok(lambda.max(0.0).sqrt());
            }
            lambda_old = lambda;
        }
        Err(Error::NoConvergence {
            what: "inf-sup inverse power iteration",
            iterations: max_outer,
        })
    }
}

fn multiply_into(a: &SparseMatrix, x: &[f64]) -> Vec<f64> {
    a.matvec(x)
}

/// Solves the saddle system, factoring `A` internally.
pub fn solve_saddle(sys: &AssembledSystem, tol: f64) -> Result<SaddleSolution> {
    SaddleSolver::new(sys)?.solve(tol)
}

/// `‖q‖_Y = √(qᵀ A q)`, guarded to return 0 for tiny negative round-off.
pub fn y_norm(a: &SparseMatrix, q: &[f64]) -> Result<f64> {
    if q.len() != a.cols() || a.rows() != a.cols() {
        return Err(Error::InvalidInput(format!(
            "y_norm: vector of length {} against {}x{} matrix",
            q.len(),
            a.rows(),
            a.cols()
        )));
    }
    let quad = a.quadratic_form(q, q);
    let qq = dot(q, q);
    let guard = -1e-14 * qq * a.max_abs();
    debug_assert!(quad >= guard, "quadratic form {quad} below round-off guard");
    Ok(quad.max(0.0).sqrt())
}

/// Discrete heat norm, factoring `A` internally; see
/// [`SaddleSolver::discrete_x_norm`].
pub fn discrete_x_norm(sys: &AssembledSystem, u: &[f64]) -> Result<f64> {
    SaddleSolver::new(sys)?.discrete_x_norm(u)
}

/// Symmetric positive (semi)definite operator for the inf-sup pencil.
pub trait SymmetricOp {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Vec<f64>;
}

impl SymmetricOp for SparseMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matvec(x)
    }
}

/// The heat `‖·‖_{X,h}` quadratic form `a_trial + Cᵀ A⁻¹ C`, applied
/// implicitly (one `A`-solve per application).
pub struct XhNormOp<'a> {
    pub a_trial: &'a SparseMatrix,
    pub convection: &'a SparseMatrix,
    pub factor: &'a SpdFactor,
}

impl SymmetricOp for XhNormOp<'_> {
    fn dim(&self) -> usize {
        self.a_trial.rows()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let cu = self.convection.matvec(x);
        let w = self.factor.solve(&cu);
        let mut out = self.a_trial.matvec(x);
        let back = self.convection.matvec_transpose(&w);
        for i in 0..out.len() {
            out[i] += back[i];
        }
        out
    }
}

/// Inf-sup diagnostic with an explicit X-norm matrix, factoring `A`
/// internally; see [`SaddleSolver::infsup_constant`].
pub fn infsup_constant(sys: &AssembledSystem, x_norm_matrix: &SparseMatrix) -> Result<f64> {
    SaddleSolver::new(sys)?.infsup_constant(x_norm_matrix)
}
