//! The a posteriori error estimator `‖p_h‖_Y`, its element-local indicators,
//! Dörfler marking, and the adaptive solve–estimate–mark–refine loop.
//!
//! Indicators live on the fine mesh (`p_h` is a test-space function); the
//! marking operates on coarse elements with indicators summed over all fine
//! descendants. The fine mesh is always re-derived from the coarse mesh by
//! one (`h = H/2`) or two (`h = H/4`) uniform refinements, never refined
//! independently, so the nesting stays exact.

use std::sync::Arc;

use crate::assemble::{assemble_system, quad_rule, ProblemDef, ProblemKind};
use crate::mesh::{bisect, uniform_refine, uniform_refine_times, ParentMap, TriMesh};
use crate::problems::compute_errors;
use crate::solver::{SaddleSolver, SymmetricOp, XhNormOp};
use crate::space::{build_prolongation, build_space};
use crate::{Error, Result};

/// Per-element squared indicators on the fine mesh and their aggregation to
/// coarse elements.
#[derive(Clone, Debug)]
pub struct IndicatorField {
    /// `η²_{h,ℓ}` per fine triangle.
    pub fine_eta_sq: Vec<f64>,
    /// `η²_{H,j}` per coarse triangle: sum over fine descendants.
    pub coarse_eta_sq: Vec<f64>,
    /// `Σ η²`, the squared estimator.
    pub total: f64,
}

/// Integrates the squared Y-gradient of the P1 function `p` per fine
/// triangle (the gradient is constant, so the integral is exact) and
/// aggregates through the refinement chain. The heat indicator uses only the
/// x-derivative, Poisson and wave the full gradient.
pub fn local_indicators(
    kind: ProblemKind,
    fine_mesh: &TriMesh,
    p: &[f64],
    chain: &[ParentMap],
    n_coarse_triangles: usize,
) -> Result<IndicatorField> {
    if p.len() != fine_mesh.n_vertices() {
        return Err(Error::InvalidInput(format!(
            "p has {} entries, fine mesh has {} vertices",
            p.len(),
            fine_mesh.n_vertices()
        )));
    }
    let mut fine_eta_sq = vec![0.0; fine_mesh.n_triangles()];
    for t in 0..fine_mesh.n_triangles() {
        let [p0, p1, p2] = fine_mesh.triangle_coords(t);
        let verts = fine_mesh.triangles[t].vertices;
        let double_area =
            (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
        let grads = [
            [(p1[1] - p2[1]) / double_area, (p2[0] - p1[0]) / double_area],
            [(p2[1] - p0[1]) / double_area, (p0[0] - p2[0]) / double_area],
            [(p0[1] - p1[1]) / double_area, (p1[0] - p0[0]) / double_area],
        ];
        let mut grad = [0.0, 0.0];
        for i in 0..3 {
            grad[0] += p[verts[i]] * grads[i][0];
            grad[1] += p[verts[i]] * grads[i][1];
        }
        let grad_sq = match kind {
            ProblemKind::Heat => grad[0] * grad[0],
            ProblemKind::Poisson | ProblemKind::Wave => {
                grad[0] * grad[0] + grad[1] * grad[1]
            }
        };
        fine_eta_sq[t] = grad_sq * (0.5 * double_area);
    }
    let mut coarse_eta_sq = vec![0.0; n_coarse_triangles];
    for (t, &eta) in fine_eta_sq.iter().enumerate() {
        coarse_eta_sq[ParentMap::trace_to_root(chain, t)] += eta;
    }
    let total = fine_eta_sq.iter().sum();
    Ok(IndicatorField {
        fine_eta_sq,
        coarse_eta_sq,
        total,
    })
}

/// Dörfler marking on squared indicators: the smallest set (greedy from the
/// largest indicator, ties broken by ascending element id) whose sum reaches
/// `theta` times the total. All-zero indicators yield the empty set.
pub fn dorfler_mark(coarse_eta_sq: &[f64], theta: f64) -> Result<Vec<usize>> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "Dörfler parameter {theta} outside (0, 1]"
        )));
    }
    if coarse_eta_sq.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidInput(
            "indicators must be finite and nonnegative".into(),
        ));
    }
    let mut order: Vec<usize> = (0..coarse_eta_sq.len()).collect();
    order.sort_by(|&a, &b| {
        coarse_eta_sq[b]
            .partial_cmp(&coarse_eta_sq[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    // accumulate the total in the same order so that theta = 1 marks exactly
    // the nonzero indicators
    let total: f64 = order.iter().map(|&i| coarse_eta_sq[i]).sum();
    if total == 0.0 {
        return Ok(Vec::new());
    }
    let threshold = theta * total;
    let mut marked = Vec::new();
    let mut acc = 0.0;
    for &i in &order {
        if acc >= threshold {
            break;
        }
        acc += coarse_eta_sq[i];
        marked.push(i);
    }
    marked.sort_unstable();
    Ok(marked)
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Mesh-size ratio between test and trial space: `h = H/2` or `h = H/4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RefineRatio {
    Half,
    Quarter,
}

impl RefineRatio {
    fn levels(self) -> usize {
        match self {
            RefineRatio::Half => 1,
            RefineRatio::Quarter => 2,
        }
    }
}

/// Refinement strategy of a convergence study.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Uniform,
    Adaptive,
}

/// Study configuration.
#[derive(Clone, Debug)]
pub struct AdaptiveConfig {
    /// Dörfler parameter in (0, 1].
    pub theta: f64,
    pub max_levels: usize,
    /// Stop once the coarse mesh reaches this many vertices.
    pub max_dofs: usize,
    pub refine_ratio: RefineRatio,
    pub solver_tol: f64,
    /// Compute the inf-sup diagnostic per level (skipped for wave problems,
    /// whose trial norm is not computable).
    pub compute_infsup: bool,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        AdaptiveConfig {
            theta: 0.5,
            max_levels: 12,
            max_dofs: 200_000,
            refine_ratio: RefineRatio::Half,
            solver_tol: 1e-10,
            compute_infsup: false,
        }
    }
}

/// One row of the convergence tables.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub level: usize,
    /// Total coarse vertices (the `nv` table column).
    pub total_dofs_coarse: usize,
    /// Free trial DOFs (the `ndof` table column).
    pub free_dofs_coarse: usize,
    pub free_dofs_fine: usize,
    pub error_l2: Option<f64>,
    pub error_energy: Option<f64>,
    /// `‖p_h‖_Y`, the a posteriori estimator.
    pub estimator: f64,
    pub infsup: Option<f64>,
}

/// A study that failed mid-loop still reports the completed levels.
#[derive(Debug)]
pub struct StudyError {
    pub records: Vec<RunRecord>,
    pub source: Error,
}

impl std::fmt::Display for StudyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "study aborted after {} levels: {}",
            self.records.len(),
            self.source
        )
    }
}

impl std::error::Error for StudyError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

struct LevelOutput {
    record: RunRecord,
    indicators: IndicatorField,
}

fn run_level(
    problem: &ProblemDef,
    coarse: &Arc<TriMesh>,
    config: &AdaptiveConfig,
    level: usize,
) -> Result<LevelOutput> {
    let (fine_mesh, chain) = uniform_refine_times(coarse, config.refine_ratio.levels());
    let fine_mesh = Arc::new(fine_mesh);
    let trial = build_space(Arc::clone(coarse), &problem.x_bc, problem.dirichlet.as_deref())?;
    let test = build_space(Arc::clone(&fine_mesh), &problem.y_bc, None)?;
    let prolongation = build_prolongation(&trial, &test, &chain)?;
    let quad = quad_rule(4)?;
    let sys = assemble_system(problem, &trial, &test, &prolongation, &quad)?;
    let solver = SaddleSolver::new(&sys)?;
    let solution = solver.solve(config.solver_tol)?;

    let p_total = test.expand(&solution.p);
    let indicators = local_indicators(
        problem.kind,
        &fine_mesh,
        &p_total,
        &chain,
        coarse.n_triangles(),
    )?;
    let estimator = indicators.total.max(0.0).sqrt();

    let (error_l2, error_energy) = match &problem.exact {
        Some(exact) => {
            let u_total = trial.expand(&solution.u);
            let (l2, energy) = compute_errors(&trial, &u_total, exact, problem.kind)?;
            (Some(l2), Some(energy))
        }
        None => (None, None),
    };

    let infsup = if config.compute_infsup && sys.n_free_trial() > 0 {
        match problem.kind {
            ProblemKind::Poisson => Some(solver.infsup_constant(&sys.a_trial)?),
            ProblemKind::Heat => {
                let op = XhNormOp {
                    a_trial: &sys.a_trial,
                    convection: sys.convection.as_ref().expect("heat system has convection"),
                    factor: solver.factor(),
                };
                Some(solver.infsup_constant(&op as &dyn SymmetricOp)?)
            }
            ProblemKind::Wave => None,
        }
    } else {
        None
    };

    Ok(LevelOutput {
        record: RunRecord {
            level,
            total_dofs_coarse: coarse.n_vertices(),
            free_dofs_coarse: trial.n_free(),
            free_dofs_fine: test.n_free(),
            error_l2,
            error_energy,
            estimator,
            infsup,
        },
        indicators,
    })
}

/// Runs a full study; the hook sees the coarse mesh of every level (the CLI
/// uses it to dump SVG snapshots).
pub fn run_study(
    problem: &ProblemDef,
    initial_mesh: &TriMesh,
    config: &AdaptiveConfig,
    mode: Mode,
    mut on_level: Option<&mut dyn FnMut(usize, &TriMesh)>,
) -> std::result::Result<Vec<RunRecord>, StudyError> {
    let fail = |records: Vec<RunRecord>, source: Error| StudyError { records, source };
    if !(config.theta > 0.0 && config.theta <= 1.0) {
        return Err(fail(
            Vec::new(),
            Error::InvalidInput(format!("theta {} outside (0, 1]", config.theta)),
        ));
    }
    if config.max_levels == 0 {
        return Err(fail(
            Vec::new(),
            Error::InvalidInput("max_levels must be at least 1".into()),
        ));
    }
    let mut coarse = Arc::new(initial_mesh.clone());
    let mut records: Vec<RunRecord> = Vec::new();
    loop {
        let level = records.len();
        let out = match run_level(problem, &coarse, config, level) {
            Ok(out) => out,
            Err(e) => return Err(fail(records, e)),
        };
        if let Some(hook) = on_level.as_deref_mut() {
            hook(level, &coarse);
        }
        records.push(out.record);
        if records.len() >= config.max_levels || coarse.n_vertices() >= config.max_dofs {
            return Ok(records);
        }
        coarse = match mode {
            Mode::Uniform => Arc::new(uniform_refine(&coarse).0),
            Mode::Adaptive => {
                let marked = match dorfler_mark(&out.indicators.coarse_eta_sq, config.theta) {
                    Ok(m) => m,
                    Err(e) => return Err(fail(records, e)),
                };
                if marked.is_empty() {
                    return Ok(records);
                }
                Arc::new(bisect(&coarse, &marked).0)
            }
        };
    }
}

/// Solve–estimate–mark–refine with Dörfler marking and newest vertex
/// bisection.
pub fn adaptive_solve(
    problem: &ProblemDef,
    initial_mesh: &TriMesh,
    config: &AdaptiveConfig,
) -> std::result::Result<Vec<RunRecord>, StudyError> {
    run_study(problem, initial_mesh, config, Mode::Adaptive, None)
}

/// The same loop with uniform refinement of the coarse mesh.
pub fn uniform_solve(
    problem: &ProblemDef,
    initial_mesh: &TriMesh,
    config: &AdaptiveConfig,
) -> std::result::Result<Vec<RunRecord>, StudyError> {
    run_study(problem, initial_mesh, config, Mode::Uniform, None)
}
