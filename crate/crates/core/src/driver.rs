//! Run orchestration: set up a problem/method pair, solve it, and drive
//! the parameter sweeps behind the layer-containment and super-penalty
//! experiments.
//!
//! A [`RunConfig`] fully determines a computation. `run_single` performs
//! one solve; when the mixed method runs, it also solves the pure
//! discontinuous reference on the same mesh and records how far the two
//! solutions are apart, which is the quantity the epsilon sweep tracks.
//! `run_superpenalty_sweep` instead compares a penalized pure
//! discontinuous discretization against the mixed solution as the penalty
//! on the continuous skeleton grows, and `run_convergence_study` measures
//! L2 orders under mesh refinement.

use crate::assembly::{self, AssemblyError, DgParameters};
use crate::linalg::{LinalgError, SolveReport, SolveStatus};
use crate::mesh::{Mesh, MeshError, RegionSpec};
use crate::postprocess::{DiscreteField, PostprocessError, SweepRecord};
use crate::problems::ProblemSpec;
use crate::space::{DofMap, MethodKind, SpaceError};
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

/// Which of the built-in problems to solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleKind {
    /// Corner-layer problem on the unit square.
    Example1,
    /// Interior-layer problem on `(-1,1)^2`.
    Example2,
    /// Layer-free linear solution, reproduced exactly by every method.
    ManufacturedLinear,
}

impl ExampleKind {
    pub fn problem(&self, epsilon: f64) -> ProblemSpec {
        match self {
            ExampleKind::Example1 => ProblemSpec::example1(epsilon),
            ExampleKind::Example2 => ProblemSpec::example2(epsilon),
            ExampleKind::ManufacturedLinear => ProblemSpec::manufactured_linear(epsilon),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExampleKind::Example1 => "example1",
            ExampleKind::Example2 => "example2",
            ExampleKind::ManufacturedLinear => "manufactured",
        }
    }
}

impl FromStr for ExampleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<ExampleKind, String> {
        match s {
            "example1" => Ok(ExampleKind::Example1),
            "example2" => Ok(ExampleKind::Example2),
            "manufactured" => Ok(ExampleKind::ManufacturedLinear),
            other => Err(format!(
                "unknown example `{other}` (expected example1, example2, or manufactured)"
            )),
        }
    }
}

#[derive(Debug, Error)]
pub enum DriverError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Postprocess(#[from] PostprocessError),
    #[error("{0} requires the mixed method, got {1:?}")]
    NeedsMixedMethod(&'static str, MethodKind),
    #[error("sweep lists must not be empty")]
    EmptySweep,
}

/// Complete description of one computation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub example: ExampleKind,
    pub method: MethodKind,
    /// Polynomial degree per direction, `1..=3`.
    pub degree: usize,
    pub nx: usize,
    pub ny: usize,
    pub epsilon: f64,
    /// Symmetrization switch of the face terms: `+1` symmetric, `0`
    /// incomplete, `-1` nonsymmetric (the default, which needs no minimal
    /// penalty for stability).
    pub theta: f64,
    /// Penalty coefficient; `None` uses the degree default `10 k^2`.
    pub sigma: Option<f64>,
    /// Penalty override on the continuous skeleton (super-penalty runs).
    pub sigma_continuous: Option<f64>,
    /// Continuous-region layout; `None` uses the problem's default.
    pub region: Option<RegionSpec>,
    /// Relative residual the direct solver must certify.
    pub solver_tol: f64,
    /// Diffusion coefficients visited by the epsilon sweep.
    pub epsilons: Vec<f64>,
    /// Continuous-skeleton penalties visited by the super-penalty sweep.
    pub sigma_sweep: Vec<f64>,
    /// Mesh sizes (elements per direction) of the convergence study.
    pub sweep_meshes: Vec<usize>,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            example: ExampleKind::Example1,
            method: MethodKind::Cdg,
            degree: 1,
            nx: 32,
            ny: 32,
            epsilon: 1e-6,
            theta: -1.0,
            sigma: None,
            sigma_continuous: None,
            region: None,
            solver_tol: 1e-10,
            epsilons: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8],
            sigma_sweep: vec![1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7],
            sweep_meshes: vec![8, 16, 32, 64],
        }
    }
}

impl RunConfig {
    pub fn dg_parameters(&self) -> DgParameters {
        DgParameters {
            theta: self.theta,
            sigma: self
                .sigma
                .unwrap_or(10.0 * (self.degree * self.degree) as f64),
            sigma_continuous: self.sigma_continuous,
        }
    }

    /// Build and classify the mesh this configuration asks for.
    fn build_mesh(&self, problem: &ProblemSpec) -> Result<Mesh, MeshError> {
        let mut mesh = Mesh::structured(problem.domain, self.nx, self.ny)?;
        let region = self
            .region
            .clone()
            .unwrap_or_else(|| problem.default_region.clone());
        mesh.classify_regions(&region);
        let advection = problem.advection.clone();
        mesh.classify_boundary_flow(move |p| advection(p));
        Ok(mesh)
    }
}

/// Result of one solve.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub solution: DiscreteField,
    /// Pure discontinuous solution on the same mesh; present for mixed
    /// runs, where the sweeps compare the two methods.
    pub companion: Option<DiscreteField>,
    pub report: SolveReport,
    pub record: SweepRecord,
}

fn status_str(ok: bool) -> String {
    if ok { "converged" } else { "breakdown" }.into()
}

fn solve_on(
    mesh: &Arc<Mesh>,
    method: MethodKind,
    config: &RunConfig,
    problem: &ProblemSpec,
    params: &DgParameters,
) -> Result<(DiscreteField, SolveReport), DriverError> {
    let dofmap = Arc::new(DofMap::build(mesh, config.degree, method)?);
    let system = assembly::assemble_system(mesh, &dofmap, problem, params)?;
    log::info!(
        "{} / {:?}: {} x {} mesh, {} DoFs",
        problem.name,
        method,
        config.nx,
        config.ny,
        dofmap.num_dofs()
    );
    let (x, report) = system.matrix.solve(&system.rhs, config.solver_tol)?;
    if report.status != SolveStatus::Converged {
        log::warn!(
            "{} / {:?}: solver reported breakdown (residual {:e})",
            problem.name,
            method,
            report.residual
        );
    }
    let field = DiscreteField::new(mesh.clone(), dofmap, x)?;
    Ok((field, report))
}

/// Solve the configured problem once. Mixed-method runs also solve the
/// pure discontinuous discretization on the same mesh and record the
/// difference norms between the two solutions.
pub fn run_single(config: &RunConfig) -> Result<RunResult, DriverError> {
    let problem = config.example.problem(config.epsilon);
    let mesh = Arc::new(config.build_mesh(&problem)?);
    let params = config.dg_parameters();

    let (solution, report) = solve_on(&mesh, config.method, config, &problem, &params)?;
    let main_ok = report.status == SolveStatus::Converged;

    let (companion, companion_ok) = if config.method == MethodKind::Cdg {
        // The reference discretization drops any super-penalty override.
        let dg_params = DgParameters {
            sigma_continuous: None,
            ..params
        };
        let (field, dg_report) = solve_on(&mesh, MethodKind::Dg, config, &problem, &dg_params)?;
        let ok = dg_report.status == SolveStatus::Converged;
        (Some(field), ok)
    } else {
        (None, true)
    };

    let (l2_error, linf_error) = match (&problem.exact, main_ok) {
        (Some(exact), true) => {
            let e = exact.clone();
            let l2 = solution.l2_error(|p| e(p));
            let linf = solution.linf_error(|p| e(p));
            (l2, linf)
        }
        _ => (f64::NAN, f64::NAN),
    };
    let (l2_diff, linf_diff) = match (&companion, main_ok && companion_ok) {
        (Some(dg), true) => (solution.l2_diff(dg)?, solution.linf_diff(dg)?),
        _ => (f64::NAN, f64::NAN),
    };

    Ok(RunResult {
        record: SweepRecord {
            parameter: config.epsilon,
            l2_error,
            linf_error,
            l2_diff,
            linf_diff,
            status: status_str(main_ok && companion_ok),
        },
        solution,
        companion,
        report,
    })
}

/// Solve the mixed method across the configured diffusion coefficients,
/// one record per epsilon. A solver breakdown at one epsilon is recorded
/// in its row and does not abort the sweep.
pub fn run_epsilon_sweep(config: &RunConfig) -> Result<Vec<SweepRecord>, DriverError> {
    if config.method != MethodKind::Cdg {
        return Err(DriverError::NeedsMixedMethod("epsilon sweep", config.method));
    }
    if config.epsilons.is_empty() {
        return Err(DriverError::EmptySweep);
    }
    let mut records = Vec::with_capacity(config.epsilons.len());
    for &eps in &config.epsilons {
        let mut cfg = config.clone();
        cfg.epsilon = eps;
        records.push(run_single(&cfg)?.record);
    }
    Ok(records)
}

/// Compare penalized pure discontinuous solves against the mixed
/// reference solution: for each penalty in `sigma_sweep`, the whole
/// continuous skeleton (its boundary included) is penalized by that value
/// while the discontinuous skeleton keeps the base penalty. The records'
/// diff norms measure the distance to the mixed solution, which the
/// growing penalty drives to zero.
pub fn run_superpenalty_sweep(config: &RunConfig) -> Result<Vec<SweepRecord>, DriverError> {
    if config.method != MethodKind::Cdg {
        return Err(DriverError::NeedsMixedMethod(
            "super-penalty sweep",
            config.method,
        ));
    }
    if config.sigma_sweep.is_empty() {
        return Err(DriverError::EmptySweep);
    }
    let problem = config.example.problem(config.epsilon);
    let mesh = Arc::new(config.build_mesh(&problem)?);
    let base = DgParameters {
        sigma_continuous: None,
        ..config.dg_parameters()
    };

    let (reference, ref_report) = solve_on(&mesh, MethodKind::Cdg, config, &problem, &base)?;
    let ref_ok = ref_report.status == SolveStatus::Converged;

    let mut records = Vec::with_capacity(config.sigma_sweep.len());
    for &sigma_c in &config.sigma_sweep {
        let params = DgParameters {
            sigma_continuous: Some(sigma_c),
            ..base
        };
        let (field, report) = solve_on(&mesh, MethodKind::Dg, config, &problem, &params)?;
        let ok = report.status == SolveStatus::Converged;
        let (l2_error, linf_error) = match (&problem.exact, ok) {
            (Some(exact), true) => {
                let e = exact.clone();
                (field.l2_error(|p| e(p)), field.linf_error(|p| e(p)))
            }
            _ => (f64::NAN, f64::NAN),
        };
        let (l2_diff, linf_diff) = if ok && ref_ok {
            (field.l2_diff(&reference)?, field.linf_diff(&reference)?)
        } else {
            (f64::NAN, f64::NAN)
        };
        records.push(SweepRecord {
            parameter: sigma_c,
            l2_error,
            linf_error,
            l2_diff,
            linf_diff,
            status: status_str(ok && ref_ok),
        });
    }
    Ok(records)
}

/// Errors and observed L2 orders under uniform refinement.
#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    pub meshes: Vec<usize>,
    pub l2_errors: Vec<f64>,
    pub linf_errors: Vec<f64>,
    /// Observed order between consecutive meshes, `meshes.len() - 1`
    /// entries.
    pub l2_orders: Vec<f64>,
}

/// Solve on each mesh in `sweep_meshes` and report L2 errors and their
/// observed orders. Requires a problem with an exact solution.
pub fn run_convergence_study(config: &RunConfig) -> Result<ConvergenceStudy, DriverError> {
    if config.sweep_meshes.is_empty() {
        return Err(DriverError::EmptySweep);
    }
    let mut l2_errors = Vec::with_capacity(config.sweep_meshes.len());
    let mut linf_errors = Vec::with_capacity(config.sweep_meshes.len());
    for &n in &config.sweep_meshes {
        let mut cfg = config.clone();
        cfg.nx = n;
        cfg.ny = n;
        let result = run_single(&cfg)?;
        l2_errors.push(result.record.l2_error);
        linf_errors.push(result.record.linf_error);
    }
    let l2_orders = observed_orders(&l2_errors, &config.sweep_meshes);
    Ok(ConvergenceStudy {
        meshes: config.sweep_meshes.clone(),
        l2_errors,
        linf_errors,
        l2_orders,
    })
}

/// Observed convergence orders from errors on a sequence of meshes:
/// `log(e_i / e_{i+1}) / log(n_{i+1} / n_i)`.
pub fn observed_orders(errors: &[f64], meshes: &[usize]) -> Vec<f64> {
    errors
        .windows(2)
        .zip(meshes.windows(2))
        .map(|(e, n)| (e[0] / e[1]).ln() / (n[1] as f64 / n[0] as f64).ln())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{Point2, RectRegion};

    fn small_config() -> RunConfig {
        RunConfig {
            example: ExampleKind::ManufacturedLinear,
            method: MethodKind::Cg,
            nx: 4,
            ny: 4,
            epsilon: 1e-2,
            ..RunConfig::default()
        }
    }

    #[test]
    fn linear_problem_is_solved_exactly() {
        for method in [MethodKind::Cg, MethodKind::Dg, MethodKind::Cdg] {
            let config = RunConfig {
                method,
                ..small_config()
            };
            let result = run_single(&config).unwrap();
            assert_eq!(result.record.status, "converged");
            assert!(
                result.record.l2_error < 1e-9,
                "{method:?}: {}",
                result.record.l2_error
            );
            assert!(result.record.linf_error < 1e-9);
        }
    }

    #[test]
    fn mixed_run_carries_a_companion() {
        let config = RunConfig {
            example: ExampleKind::Example1,
            method: MethodKind::Cdg,
            nx: 8,
            ny: 8,
            epsilon: 1e-2,
            ..RunConfig::default()
        };
        let result = run_single(&config).unwrap();
        assert!(result.companion.is_some());
        assert!(result.record.l2_diff.is_finite());
        assert!(result.record.linf_diff.is_finite());
        assert!(result.record.l2_error.is_finite());
        let config = RunConfig {
            method: MethodKind::Cg,
            ..config
        };
        let result = run_single(&config).unwrap();
        assert!(result.companion.is_none());
        assert!(result.record.l2_diff.is_nan());
    }

    #[test]
    fn epsilon_sweep_produces_one_record_per_epsilon() {
        let config = RunConfig {
            example: ExampleKind::Example1,
            method: MethodKind::Cdg,
            nx: 4,
            ny: 4,
            epsilons: vec![1e-1, 1e-3, 1e-5],
            ..RunConfig::default()
        };
        let records = run_epsilon_sweep(&config).unwrap();
        assert_eq!(records.len(), 3);
        for (r, &eps) in records.iter().zip(&config.epsilons) {
            assert_eq!(r.parameter, eps);
            assert_eq!(r.status, "converged");
            assert!(r.linf_diff.is_finite());
        }
    }

    #[test]
    fn epsilon_sweep_requires_the_mixed_method() {
        let config = RunConfig {
            method: MethodKind::Dg,
            ..RunConfig::default()
        };
        assert!(matches!(
            run_epsilon_sweep(&config),
            Err(DriverError::NeedsMixedMethod(_, MethodKind::Dg))
        ));
        let config = RunConfig {
            epsilons: vec![],
            ..RunConfig::default()
        };
        assert!(matches!(
            run_epsilon_sweep(&config),
            Err(DriverError::EmptySweep)
        ));
    }

    #[test]
    fn superpenalty_drives_dg_toward_the_mixed_solution() {
        // The boundary layer must sit entirely inside the discontinuous
        // region: the penalized continuous faces then carry boundary data
        // the trace space represents (here up to an exp(-25) tail), which
        // is exactly when the large-penalty limit coincides with the mixed
        // method.  The layer's interior tail still leaves unrepresentable
        // curvature in the continuous region, so the baseline difference
        // against the plain discontinuous solve is far above solver noise.
        let region = RegionSpec::new(vec![RectRegion::half_open(
            Point2::new(0.0, 0.0),
            Point2::new(0.75, 0.75),
        )]);
        let config = RunConfig {
            example: ExampleKind::Example1,
            method: MethodKind::Cdg,
            nx: 4,
            ny: 4,
            epsilon: 1e-2,
            region: Some(region),
            sigma_sweep: vec![1e1, 1e4, 1e7],
            ..RunConfig::default()
        };
        let records = run_superpenalty_sweep(&config).unwrap();
        assert_eq!(records.len(), 3);
        for pair in records.windows(2) {
            assert!(
                pair[1].linf_diff < pair[0].linf_diff,
                "difference did not decrease: {} -> {}",
                pair[0].linf_diff,
                pair[1].linf_diff
            );
        }
        let first = records.first().unwrap().linf_diff;
        let last = records.last().unwrap().linf_diff;
        assert!(first.is_finite() && last.is_finite());
        // Observed: 1.05e-1 -> 6.69e-4 -> 6.73e-7, a 1/sigma_c decay.
        assert!(first > 1e-2, "baseline difference at noise level: {first}");
        assert!(
            last < first / 1e4,
            "penalty limit not reached: {first} -> {last}"
        );
    }

    #[test]
    fn convergence_study_sees_second_order() {
        let config = RunConfig {
            example: ExampleKind::Example2,
            method: MethodKind::Cg,
            epsilon: 1.0,
            sweep_meshes: vec![4, 8, 16],
            ..RunConfig::default()
        };
        let study = run_convergence_study(&config).unwrap();
        assert_eq!(study.l2_errors.len(), 3);
        assert_eq!(study.l2_orders.len(), 2);
        for (i, &order) in study.l2_orders.iter().enumerate() {
            assert!(
                (order - 2.0).abs() < 0.35,
                "order {i}: {order}"
            );
        }
    }

    #[test]
    fn observed_orders_formula() {
        let orders = observed_orders(&[1.0, 0.25, 0.0625], &[4, 8, 16]);
        assert_eq!(orders.len(), 2);
        assert!((orders[0] - 2.0).abs() < 1e-14);
        assert!((orders[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn example_kinds_parse_and_name() {
        assert_eq!("example1".parse::<ExampleKind>(), Ok(ExampleKind::Example1));
        assert_eq!("example2".parse::<ExampleKind>(), Ok(ExampleKind::Example2));
        assert_eq!(
            "manufactured".parse::<ExampleKind>(),
            Ok(ExampleKind::ManufacturedLinear)
        );
        assert!("example3".parse::<ExampleKind>().is_err());
        assert_eq!(ExampleKind::Example2.name(), "example2");
    }

    #[test]
    fn default_penalty_scales_with_degree() {
        let mut config = RunConfig::default();
        config.degree = 3;
        assert_eq!(config.dg_parameters().sigma, 90.0);
        config.sigma = Some(7.0);
        assert_eq!(config.dg_parameters().sigma, 7.0);
    }

    #[test]
    fn invalid_mesh_size_propagates() {
        let config = RunConfig {
            nx: 0,
            ..small_config()
        };
        assert!(matches!(run_single(&config), Err(DriverError::Mesh(_))));
    }
}
