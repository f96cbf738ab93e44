//! Flat key=value run configuration (one pair per line, `#` comments).

use lsfem::{AdaptiveConfig, Mode, ProblemDef, RefineRatio};

pub struct RunConfig {
    pub problem: ProblemDef,
    pub mode: Mode,
    pub adaptive: AdaptiveConfig,
    pub initial_mesh: Option<(usize, usize)>,
    pub table: bool,
    pub svg_meshes: bool,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, String> {
        let mut problem: Option<ProblemDef> = None;
        let mut mode: Option<Mode> = None;
        let mut theta: Option<f64> = None;
        let mut refine_ratio = RefineRatio::Half;
        let mut max_levels = 8usize;
        let mut max_dofs = 200_000usize;
        let mut solver_tol = 1e-10;
        let mut initial_mesh = None;
        let mut table = true;
        let mut svg_meshes = false;
        let mut infsup = false;

        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let n = idx + 1;
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {n}: expected key=value, got `{line}`"))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "problem" => {
                    problem = Some(lsfem::problems::by_name(value).ok_or_else(|| {
                        format!(
                            "line {n}: field `problem`: unknown problem `{value}` (expected one of {})",
                            lsfem::problems::PROBLEM_NAMES.join(", ")
                        )
                    })?);
                }
                "mode" => {
                    mode = Some(match value {
                        "uniform" => Mode::Uniform,
                        "adaptive" => Mode::Adaptive,
                        _ => {
                            return Err(format!(
                                "line {n}: field `mode`: expected uniform or adaptive, got `{value}`"
                            ))
                        }
                    });
                }
                "theta" => {
                    let v: f64 = value
                        .parse()
                        .map_err(|_| format!("line {n}: field `theta`: not a number: `{value}`"))?;
                    if !(v > 0.0 && v <= 1.0) {
                        return Err(format!("line {n}: field `theta`: {v} outside (0, 1]"));
                    }
                    theta = Some(v);
                }
                "refine_ratio" => {
                    refine_ratio = match value {
                        "half" => RefineRatio::Half,
                        "quarter" => RefineRatio::Quarter,
                        _ => {
                            return Err(format!(
                                "line {n}: field `refine_ratio`: expected half or quarter, got `{value}`"
                            ))
                        }
                    };
                }
                "max_levels" => {
                    max_levels = value.parse().map_err(|_| {
                        format!("line {n}: field `max_levels`: not a count: `{value}`")
                    })?;
                    if max_levels == 0 {
                        return Err(format!("line {n}: field `max_levels`: must be at least 1"));
                    }
                }
                "max_dofs" => {
                    max_dofs = value.parse().map_err(|_| {
                        format!("line {n}: field `max_dofs`: not a count: `{value}`")
                    })?;
                }
                "solver_tol" => {
                    solver_tol = value.parse().map_err(|_| {
                        format!("line {n}: field `solver_tol`: not a number: `{value}`")
                    })?;
                    if !(solver_tol > 0.0 && solver_tol <= 1e-6) {
                        return Err(format!(
                            "line {n}: field `solver_tol`: {solver_tol:e} outside (0, 1e-6]"
                        ));
                    }
                }
                "initial_mesh" => {
                    let (nx, ny) = value.split_once('x').ok_or_else(|| {
                        format!("line {n}: field `initial_mesh`: expected NxM, got `{value}`")
                    })?;
                    let parse = |s: &str| {
                        s.trim().parse::<usize>().map_err(|_| {
                            format!("line {n}: field `initial_mesh`: bad count `{s}`")
                        })
                    };
                    initial_mesh = Some((parse(nx)?, parse(ny)?));
                }
                "outputs" => {
                    table = false;
                    for flag in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        match flag {
                            "table" => table = true,
                            "svg_meshes" => svg_meshes = true,
                            "infsup" => infsup = true,
                            _ => {
                                return Err(format!(
                                    "line {n}: field `outputs`: unknown flag `{flag}`"
                                ))
                            }
                        }
                    }
                }
                _ => return Err(format!("line {n}: unknown field `{key}`")),
            }
        }

        let problem = problem.ok_or("missing required field `problem`")?;
        let mode = mode.ok_or("missing required field `mode`")?;
        let theta = theta.unwrap_or(problem.default_theta);
        Ok(RunConfig {
            adaptive: AdaptiveConfig {
                theta,
                max_levels,
                max_dofs,
                refine_ratio,
                solver_tol,
                compute_infsup: infsup,
            },
            problem,
            mode,
            initial_mesh,
            table,
            svg_meshes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg = RunConfig::parse(
            "# study\nproblem = heat_smooth\nmode = adaptive\ntheta = 0.7\n\
             refine_ratio = quarter\nmax_levels = 9\nmax_dofs = 1234\n\
             initial_mesh = 2x4\noutputs = table,svg_meshes,infsup\n",
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::Adaptive);
        assert_eq!(cfg.adaptive.theta, 0.7);
        assert_eq!(cfg.adaptive.refine_ratio, RefineRatio::Quarter);
        assert_eq!(cfg.adaptive.max_levels, 9);
        assert_eq!(cfg.adaptive.max_dofs, 1234);
        assert_eq!(cfg.initial_mesh, Some((2, 4)));
        assert!(cfg.table && cfg.svg_meshes && cfg.adaptive.compute_infsup);
    }

    #[test]
    fn theta_defaults_per_problem() {
        let cfg = RunConfig::parse("problem = heat_incompatible\nmode = adaptive\n").unwrap();
        assert_eq!(cfg.adaptive.theta, 0.9);
        let cfg = RunConfig::parse("problem = heat_smooth\nmode = adaptive\n").unwrap();
        assert_eq!(cfg.adaptive.theta, 0.5);
    }

    #[test]
    fn errors_name_the_field() {
        let err = RunConfig::parse("problem = nope\nmode = uniform\n").err().unwrap();
        assert!(err.contains("`problem`"), "{err}");
        let err = RunConfig::parse("problem = heat_smooth\nmode = uniform\nwhat = 1\n").err().unwrap();
        assert!(err.contains("`what`"), "{err}");
        let err = RunConfig::parse("problem = heat_smooth\n").err().unwrap();
        assert!(err.contains("`mode`"), "{err}");
    }
}
