//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `--nocapture`).
//!
//! Convergence slopes are least-squares fits of log-value against
//! log-(coarse vertices) over the trailing window `nv >= nv_max / 20`; for a
//! uniform study (DOF factor 16 per level) that is exactly the last three
//! levels, and for adaptive studies it spans the equivalent trailing decade
//! so the fit is not at the mercy of single-level noise.
//!
//! Three checks are known to fail for this discretization and are left red
//! on purpose, with the measured values in the failure message:
//!
//! * criterion 3, uniform half: the discontinuous-source study converges at
//!   about -0.44 (confirmed against nested reference solutions in both the
//!   Y-norm and the X,h-norm, across several initial grids), not at the
//!   literature's reduced -0.25, so the reduced-rate band cannot hold;
//! * criterion 4: the incompatible-data estimator matches the reference
//!   magnitudes closely but at desk scale decays at about -0.13 uniform /
//!   -0.4 adaptive, far steeper than the tiny reference exponents;
//! * criterion 5, adaptive energy halves: the wave H1 error under adaptive
//!   NVB refinement resolves the moving front in multi-level plateaus and
//!   its trailing-window slope has not yet settled at -1/2 within the
//!   desk-scale DOF budget (the per-level slopes reach -0.5 at the end of
//!   the runs; the estimator slopes do sit in the band).

mod common;

use std::sync::Arc;

use common::{build_level, solve_block_dense};
use lsfem::mesh::{make_rect_mesh, uniform_refine};
use lsfem::problems;
use lsfem::space::{build_prolongation, build_space};
use lsfem::{
    adaptive_solve, assemble_system, factor_spd, fit_log_slope, quad_rule, solve_saddle,
    uniform_solve, y_norm, AdaptiveConfig, BcSelector, ProblemDef, ProblemKind, RefineRatio,
    RunRecord, SaddleSolver, SymmetricOp,
};
use once_cell::sync::Lazy;

fn study(
    problem: &ProblemDef,
    mode_adaptive: bool,
    config: AdaptiveConfig,
    dims: Option<(usize, usize)>,
) -> Vec<RunRecord> {
    let initial = problems::initial_mesh(problem, dims).unwrap();
    let run = if mode_adaptive { adaptive_solve } else { uniform_solve };
    run(problem, &initial, &config).unwrap_or_else(|e| panic!("study failed: {e}"))
}

/// Slope over the trailing window `nv >= nv_max / 20`.
fn trailing_slope(records: &[RunRecord], get: impl Fn(&RunRecord) -> Option<f64>) -> f64 {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| get(r).map(|v| (r.total_dofs_coarse as f64, v)))
        .filter(|&(_, v)| v.is_finite() && v > 0.0)
        .collect();
    let nv_max = pts.last().expect("nonempty study").0;
    let tail: Vec<(f64, f64)> = pts.into_iter().filter(|&(nv, _)| nv >= nv_max / 20.0).collect();
    assert!(tail.len() >= 2, "not enough levels for a slope fit");
    fit_log_slope(&tail)
}

fn check(criterion: &str, ok: bool, detail: String) {
    if ok {
        println!("criterion {criterion}: PASS — {detail}");
    } else {
        println!("criterion {criterion}: FAIL — {detail}");
        panic!("criterion {criterion} failed: {detail}");
    }
}

static LSHAPE_UNIFORM: Lazy<Vec<RunRecord>> = Lazy::new(|| {
    let problem = problems::poisson_lshape();
    study(&problem, false, AdaptiveConfig { max_levels: 8, ..Default::default() }, None)
});

static LSHAPE_ADAPTIVE: Lazy<Vec<RunRecord>> = Lazy::new(|| {
    let problem = problems::poisson_lshape();
    study(
        &problem,
        true,
        AdaptiveConfig { max_levels: 60, max_dofs: 30_000, ..Default::default() },
        None,
    )
});

static HEAT_UNIFORM: Lazy<Vec<RunRecord>> = Lazy::new(|| {
    let problem = problems::heat_smooth();
    study(&problem, false, AdaptiveConfig { max_levels: 6, ..Default::default() }, None)
});

static HEAT_ADAPTIVE: Lazy<Vec<RunRecord>> = Lazy::new(|| {
    let problem = problems::heat_smooth();
    study(
        &problem,
        true,
        AdaptiveConfig { max_levels: 60, max_dofs: 6_000, ..Default::default() },
        None,
    )
});

#[test]
fn c01_poisson_lshape_rates() {
    let uniform_energy = trailing_slope(&LSHAPE_UNIFORM, |r| r.error_energy);
    let adaptive_energy = trailing_slope(&LSHAPE_ADAPTIVE, |r| r.error_energy);
    let adaptive_l2 = trailing_slope(&LSHAPE_ADAPTIVE, |r| r.error_l2);
    check(
        "1",
        (uniform_energy + 1.0 / 3.0).abs() <= 0.05
            && (adaptive_energy + 0.5).abs() <= 0.05
            && (adaptive_l2 + 1.0).abs() <= 0.1,
        format!(
            "L-shape slopes: uniform energy {uniform_energy:.4} (target -1/3±0.05), \
             adaptive energy {adaptive_energy:.4} (target -1/2±0.05), \
             adaptive L2 {adaptive_l2:.4} (target -1±0.1)"
        ),
    );
}

#[test]
fn c02_heat_smooth_table_reproduction() {
    let uniform_energy = trailing_slope(&HEAT_UNIFORM, |r| r.error_energy);
    let target = 7.84e-2; // reference uniform error at its level 5
    let uniform_cross = HEAT_UNIFORM
        .iter()
        .find(|r| r.error_energy.unwrap() <= target)
        .expect("uniform run reaches the target error");
    let adaptive_cross = HEAT_ADAPTIVE
        .iter()
        .find(|r| r.error_energy.unwrap() <= target)
        .expect("adaptive run reaches the target error");
    let ratio = adaptive_cross.total_dofs_coarse as f64 / uniform_cross.total_dofs_coarse as f64;
    // the uniform error at the crossing level matches the reference within x2
    let factor = uniform_cross.error_energy.unwrap() / target;
    check(
        "2",
        (uniform_energy + 0.5).abs() <= 0.05 && ratio <= 0.60 && (0.5..=2.0).contains(&factor),
        format!(
            "heat uniform slope {uniform_energy:.4} (target -1/2±0.05); adaptive reaches \
             {target:.3e} at nv={} vs uniform nv={} (ratio {ratio:.3} ≤ 0.6); uniform error \
             there {:.3e} within factor 2 of the reference",
            adaptive_cross.total_dofs_coarse,
            uniform_cross.total_dofs_coarse,
            uniform_cross.error_energy.unwrap(),
        ),
    );
}

#[test]
fn c03_heat_discontinuous_estimator_rates() {
    let problem = problems::heat_discontinuous();
    let uniform = study(&problem, false, AdaptiveConfig { max_levels: 7, ..Default::default() }, None);
    let adaptive = study(
        &problem,
        true,
        AdaptiveConfig { max_levels: 60, max_dofs: 25_000, ..Default::default() },
        None,
    );
    let s_uniform = trailing_slope(&uniform, |r| Some(r.estimator));
    let s_adaptive = trailing_slope(&adaptive, |r| Some(r.estimator));
    check(
        "3",
        (s_uniform + 0.25).abs() <= 0.05 && (s_adaptive + 0.5).abs() <= 0.07,
        format!(
            "discontinuous-source estimator slopes: uniform {s_uniform:.4} (target -1/4±0.05), \
             adaptive {s_adaptive:.4} (target -1/2±0.07)"
        ),
    );
}

#[test]
fn c04_heat_incompatible_estimator_rates() {
    let problem = problems::heat_incompatible();
    let uniform = study(&problem, false, AdaptiveConfig { max_levels: 7, ..Default::default() }, None);
    let adaptive = study(
        &problem,
        true,
        AdaptiveConfig {
            theta: problem.default_theta,
            max_levels: 80,
            max_dofs: 20_000,
            ..Default::default()
        },
        None,
    );
    let s_uniform = trailing_slope(&uniform, |r| Some(r.estimator));
    let s_adaptive = trailing_slope(&adaptive, |r| Some(r.estimator));
    // ±50% relative around the tiny reference exponents
    check(
        "4",
        (-0.06..=-0.02).contains(&s_uniform) && (-0.12..=-0.04).contains(&s_adaptive),
        format!(
            "incompatible-data estimator slopes: uniform {s_uniform:.4} (target -0.04±50%), \
             adaptive {s_adaptive:.4} (target -0.08±50%)"
        ),
    );
}

#[test]
fn c05_wave_smooth_rates() {
    let problem = problems::wave_smooth();
    let mut results = Vec::new();
    for (ratio, label) in [(RefineRatio::Half, "h=H/2"), (RefineRatio::Quarter, "h=H/4")] {
        let uniform = study(
            &problem,
            false,
            AdaptiveConfig { max_levels: 6, refine_ratio: ratio, ..Default::default() },
            None,
        );
        let max_dofs = match ratio {
            RefineRatio::Half => 20_000,
            RefineRatio::Quarter => 14_000,
        };
        let adaptive = study(
            &problem,
            true,
            AdaptiveConfig { max_levels: 60, max_dofs, refine_ratio: ratio, ..Default::default() },
            None,
        );
        for (records, mode) in [(&uniform, "uniform"), (&adaptive, "adaptive")] {
            let energy = trailing_slope(records, |r| r.error_energy);
            let eta = trailing_slope(records, |r| Some(r.estimator));
            results.push((format!("{label} {mode}"), energy, eta));
        }
    }
    let ok = results
        .iter()
        .all(|(_, energy, eta)| (energy + 0.5).abs() <= 0.07 && (eta + 0.5).abs() <= 0.07);
    let detail = results
        .iter()
        .map(|(label, energy, eta)| format!("{label}: energy {energy:.4}, eta {eta:.4}"))
        .collect::<Vec<_>>()
        .join("; ");
    check("5", ok, format!("wave slopes (target -1/2±0.07 each): {detail}"));
}

#[test]
fn c06_estimator_efficiency_poisson() {
    let mut worst: f64 = f64::NEG_INFINITY;
    for records in [&*LSHAPE_UNIFORM, &*LSHAPE_ADAPTIVE] {
        for r in records.iter() {
            let gap = r.estimator - r.error_energy.unwrap();
            worst = worst.max(gap);
            assert!(
                gap <= 1e-8,
                "efficiency violated at level {}: η = {:.6e} > error {:.6e}",
                r.level,
                r.estimator,
                r.error_energy.unwrap()
            );
        }
    }
    check(
        "6",
        true,
        format!("‖p_h‖_Y ≤ energy error + 1e-8 at every L-shape level (worst gap {worst:.2e})"),
    );
}

#[test]
fn c07_square_system_degeneracy() {
    // Poisson with trial space = test space: B is square and nonsingular,
    // the adjoint vanishes, and u matches the standard Galerkin solve
    let problem = ProblemDef {
        kind: ProblemKind::Poisson,
        name: "poisson_square",
        domain: lsfem::assemble::Domain::Rect { x: (0.0, 1.0), y: (0.0, 1.0) },
        source: Box::new(|_| 1.0),
        exact: None,
        x_bc: BcSelector::all(),
        y_bc: BcSelector::all(),
        dirichlet: None,
        default_theta: 0.5,
    };
    let mesh = Arc::new(make_rect_mesh((0.0, 1.0), (0.0, 1.0), 8, 8).unwrap());
    let space = build_space(Arc::clone(&mesh), &problem.x_bc, None).unwrap();
    let identity = build_prolongation(&space, &space, &[]).unwrap();
    let sys = assemble_system(&problem, &space, &space, &identity, &quad_rule(4).unwrap()).unwrap();
    let tol = 1e-10;
    let sol = solve_saddle(&sys, tol).unwrap();

    let rhs: Vec<f64> = sys.f.iter().zip(&sys.g).map(|(a, b)| a + b).collect();
    let rhs_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
    let p_norm = y_norm(&sys.a, &sol.p).unwrap();

    let u_galerkin = factor_spd(&sys.a).unwrap().solve(&rhs);
    let diff = sol
        .u
        .iter()
        .zip(&u_galerkin)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    let u_scale = u_galerkin.iter().map(|v| v * v).sum::<f64>().sqrt();
    check(
        "7",
        p_norm <= 1e-9 * rhs_norm.max(1.0) && diff <= 1e-8 * u_scale,
        format!(
            "trial = test: ‖p_h‖_Y = {p_norm:.2e} (≤ 1e-9 scale), \
             ‖u - u_galerkin‖ = {diff:.2e} (tolerance-level)"
        ),
    );
}

#[test]
fn c08_dense_oracle_equivalence() {
    let mut detail = Vec::new();
    for name in problems::PROBLEM_NAMES {
        let problem = problems::by_name(name).unwrap();
        // refine until the trial space is nontrivial but stays below 50 DOFs
        let mut coarse = problems::initial_mesh(&problem, None).unwrap();
        let mut level = build_level(&problem, Arc::new(coarse.clone()), RefineRatio::Half);
        while level.sys.n_free_trial() == 0 {
            coarse = uniform_refine(&coarse).0;
            level = build_level(&problem, Arc::new(coarse.clone()), RefineRatio::Half);
        }
        assert!(
            (1..=50).contains(&level.sys.n_free_trial()),
            "{name}: oracle mesh has {} trial DOFs",
            level.sys.n_free_trial()
        );
        let sol = solve_saddle(&level.sys, 1e-12).unwrap();
        let (p_dense, u_dense) = solve_block_dense(&level.sys);
        let rel = |got: &[f64], want: &[f64]| -> f64 {
            let err: f64 = got.iter().zip(want).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let scale: f64 = want.iter().map(|v| v * v).sum::<f64>().sqrt();
            err / scale.max(1e-12)
        };
        let (eu, ep) = (rel(&sol.u, &u_dense), rel(&sol.p, &p_dense));
        assert!(
            eu <= 1e-8 && ep <= 1e-8,
            "{name}: Schur vs dense: u {eu:.2e}, p {ep:.2e}"
        );
        detail.push(format!("{name} ({} DOFs): u {eu:.1e}, p {ep:.1e}", level.sys.n_free_trial()));
    }
    check("8", true, format!("Schur = dense block solve to 1e-8: {}", detail.join("; ")));
}

#[test]
fn c09_infsup_diagnostics() {
    // Poisson, trial = test: constant exactly 1
    let problem = ProblemDef {
        kind: ProblemKind::Poisson,
        name: "poisson_square",
        domain: lsfem::assemble::Domain::Rect { x: (0.0, 1.0), y: (0.0, 1.0) },
        source: Box::new(|_| 1.0),
        exact: None,
        x_bc: BcSelector::all(),
        y_bc: BcSelector::all(),
        dirichlet: None,
        default_theta: 0.5,
    };
    let mesh = Arc::new(make_rect_mesh((0.0, 1.0), (0.0, 1.0), 6, 6).unwrap());
    let space = build_space(Arc::clone(&mesh), &problem.x_bc, None).unwrap();
    let identity = build_prolongation(&space, &space, &[]).unwrap();
    let sys = assemble_system(&problem, &space, &space, &identity, &quad_rule(4).unwrap()).unwrap();
    let c_poisson = lsfem::infsup_constant(&sys, &sys.a).unwrap();

    // heat nested pair: constant >= 1 - 1e-6 on three successive meshes
    let heat = problems::heat_smooth();
    let mut heat_constants = Vec::new();
    let mut coarse = Arc::new(problems::initial_mesh(&heat, None).unwrap());
    for _ in 0..3 {
        let level = build_level(&heat, Arc::clone(&coarse), RefineRatio::Half);
        let solver = SaddleSolver::new(&level.sys).unwrap();
        let op = lsfem::solver::XhNormOp {
            a_trial: &level.sys.a_trial,
            convection: level.sys.convection.as_ref().unwrap(),
            factor: solver.factor(),
        };
        heat_constants.push(solver.infsup_constant(&op as &dyn SymmetricOp).unwrap());
        coarse = Arc::new(uniform_refine(&coarse).0);
    }
    check(
        "9",
        (c_poisson - 1.0).abs() <= 1e-8 && heat_constants.iter().all(|&c| c >= 1.0 - 1e-6),
        format!(
            "Poisson trial=test constant {c_poisson:.10} (= 1 ± 1e-8); heat nested constants \
             {heat_constants:?} (each ≥ 1 - 1e-6)"
        ),
    );
}

#[test]
fn c10_property_suites() {
    // the full suites live in tests/properties.rs and the per-module unit
    // tests, all part of this workspace's test run; this sweep re-executes
    // one representative check per module invariant family
    let mesh = problems::initial_mesh(&problems::poisson_lshape(), None).unwrap();
    let (fine, pm) = lsfem::bisect(&mesh, &[0, 1]);
    fine.validate().unwrap();
    assert!((fine.total_area() - mesh.total_area()).abs() <= 1e-12 * mesh.total_area());
    assert_eq!(pm.child_to_parent.len(), fine.n_triangles());

    let space = build_space(Arc::new(fine), &BcSelector::none(), None).unwrap();
    let ones = vec![1.0; space.total_dofs()];
    assert!((lsfem::space::eval(&space, &ones, [-0.4, 0.3]).unwrap() - 1.0).abs() < 1e-12);

    let heat = problems::heat_smooth();
    let level = build_level(&heat, Arc::new(problems::initial_mesh(&heat, None).unwrap()), RefineRatio::Half);
    assert!(level.sys.a.symmetry_defect() <= 1e-13 * level.sys.a.max_abs());
    factor_spd(&level.sys.a).unwrap();

    let sol = solve_saddle(&level.sys, 1e-10).unwrap();
    let p_total = level.test.expand(&sol.p);
    let ind = lsfem::local_indicators(heat.kind, &level.fine, &p_total, &level.chain, level.coarse.n_triangles()).unwrap();
    let coarse_sum: f64 = ind.coarse_eta_sq.iter().sum();
    assert!((coarse_sum - ind.total).abs() <= 1e-12 * ind.total.max(1e-300));

    let marked = lsfem::dorfler_mark(&ind.coarse_eta_sq, 0.5).unwrap();
    let total: f64 = ind.coarse_eta_sq.iter().sum();
    let sum: f64 = marked.iter().map(|&i| ind.coarse_eta_sq[i]).sum();
    assert!(sum >= 0.5 * total);
    let smallest = marked
        .iter()
        .copied()
        .min_by(|&a, &b| ind.coarse_eta_sq[a].partial_cmp(&ind.coarse_eta_sq[b]).unwrap())
        .unwrap();
    assert!(sum - ind.coarse_eta_sq[smallest] < 0.5 * total);

    let exact = heat.exact.as_ref().unwrap();
    let fd = problems::fd_gradient(&*exact.value, [1.3, 2.1], 1e-6);
    let g = (exact.gradient)([1.3, 2.1]);
    assert!(((fd[0] - g[0]).powi(2) + (fd[1] - g[1]).powi(2)).sqrt() < 1e-6 * (1.0 + g[0].hypot(g[1])));

    check(
        "10",
        true,
        "module invariant sweep passed (full suites in tests/properties.rs and unit tests)".into(),
    );
}
