//! Continuous-discontinuous Galerkin (cdG) finite element solver for the
//! stationary advection-diffusion equation
//!
//! ```text
//!     -eps * lap(u) + b . grad(u) = f   in Omega,
//!                               u = g   on the boundary,
//! ```
//!
//! on structured quadrilateral meshes. The mesh is split into a continuous
//! region (conforming Lagrange elements with shared nodes) and a
//! discontinuous region (element-private nodes coupled by interior-penalty
//! and upwind face terms). Pure cG and pure dG are available as the two
//! degenerate cases of the same machinery, plus a super-penalty dG mode
//! that drives the dG solution towards the cdG one by inflating the
//! penalty on the continuous part of the skeleton.
//!
//! Modules follow the pipeline: [`mesh`] builds and classifies the grid,
//! [`element`] provides reference bases and quadrature, [`space`] numbers
//! degrees of freedom, [`assembly`] builds the linear system, [`linalg`]
//! solves it, [`problems`] is the catalog of coefficient bundles,
//! [`postprocess`] evaluates fields and norms, and [`driver`] orchestrates
//! single runs and parameter sweeps.

pub mod assembly;
pub mod driver;
pub mod element;
pub mod linalg;
pub mod mesh;
pub mod postprocess;
pub mod problems;
pub mod space;

pub use assembly::{DgParameters, LinearSystem};
pub use driver::{ExampleKind, RunConfig};
pub use linalg::{SolveReport, SolveStatus, SparseMatrix};
pub use mesh::{Face, FaceKind, FlowTag, Mesh, Point2, RectRegion, Region, RegionSpec};
pub use postprocess::{DiscreteField, SweepRecord};
pub use problems::ProblemSpec;
pub use space::{DofClass, DofMap, MethodKind};
