//! Prepared fixtures for the performance benchmarks: a classified mesh,
//! a numbered DoF map, and the assembled system for each discretization,
//! so individual pipeline stages can be timed in isolation.

use cdg_core::assembly::assemble_system;
use cdg_core::driver::RunConfig;
use cdg_core::{
    DgParameters, DofMap, ExampleKind, LinearSystem, Mesh, MethodKind, ProblemSpec,
};

pub struct Fixture {
    pub problem: ProblemSpec,
    pub mesh: Mesh,
    pub dofmap: DofMap,
    pub params: DgParameters,
}

impl Fixture {
    /// Boundary-layer problem on an `n`-by-`n` bilinear mesh with the
    /// problem's own continuous region.
    pub fn layer(method: MethodKind, n: usize, epsilon: f64) -> Fixture {
        let problem = ExampleKind::Example1.problem(epsilon);
        let mut mesh = Mesh::structured(problem.domain, n, n).expect("valid mesh");
        mesh.classify_regions(&problem.default_region);
        let advection = problem.advection.clone();
        mesh.classify_boundary_flow(move |p| advection(p));
        let dofmap = DofMap::build(&mesh, 1, method).expect("valid degree");
        Fixture {
            problem,
            mesh,
            dofmap,
            params: DgParameters::nipg(1),
        }
    }

    pub fn assemble(&self) -> LinearSystem {
        assemble_system(&self.mesh, &self.dofmap, &self.problem, &self.params)
            .expect("assembly on a matching mesh/DoF pair")
    }
}

/// Configuration for the end-to-end timing: one mixed-method solve of the
/// boundary-layer problem.
pub fn end_to_end_config(n: usize) -> RunConfig {
    RunConfig {
        example: ExampleKind::Example1,
        method: MethodKind::Cdg,
        nx: n,
        ny: n,
        epsilon: 1e-3,
        ..RunConfig::default()
    }
}
