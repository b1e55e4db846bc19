//! Assembly of the discrete advection-diffusion systems for all three
//! methods: conforming Galerkin, interior-penalty discontinuous Galerkin,
//! and the mixed method that couples the two across an interface.
//!
//! The bilinear form has three layers:
//!
//! * volume terms on every element:
//!   `eps grad(u).grad(v) - (b.grad(v)) u - (div b) u v`,
//!   the advection written in its integrated-by-parts form;
//! * interior face terms on the discontinuous part of the skeleton
//!   (interface faces included):
//!   `sigma (eps/h) [u].[v] - {eps grad u}.[v] - theta {eps grad v}.[u]`
//!   plus the upwind flux `(b.n+) (v+ - v-) u_up`;
//! * weak Dirichlet terms on boundary faces of discontinuous elements:
//!   the one-sided versions of the same penalty and consistency terms,
//!   an outflow term `(b.n) u v`, and the matching data terms on the
//!   right-hand side.
//!
//! `theta = +1` gives the symmetric interior penalty variant (the matrix
//! is symmetric when `b = 0`), `theta = 0` the incomplete one, and
//! `theta = -1` the nonsymmetric one.
//!
//! Jumps follow the convention `[v] = v+ n+ + v- n-` with `n+` the stored
//! face normal (out of the plus element), and averages are arithmetic
//! means of the two traces; on a boundary face the jump degenerates to
//! `v n` and the average to the single trace. Which faces receive which
//! treatment is decided by the method's effective face classification, so
//! a conforming run has no face terms at all and a pure discontinuous run
//! penalizes every face. Boundary faces the method treats as conforming
//! get no weak terms; their nodes are pinned by `apply_strong_dirichlet`
//! through symmetric elimination instead.

use crate::element::{CellGeometry, GaussLegendre, LagrangeBasis, QuadratureRule};
use crate::linalg::SparseMatrix;
use crate::mesh::{FaceKind, Mesh, Point2};
use crate::problems::ProblemSpec;
use crate::space::DofMap;
use std::collections::BTreeSet;
use thiserror::Error;

/// Penalty and symmetrization parameters of the face terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DgParameters {
    /// Symmetrization switch: `+1` symmetric, `0` incomplete, `-1`
    /// nonsymmetric.
    pub theta: f64,
    /// Penalty coefficient on the discontinuous skeleton and its boundary.
    pub sigma: f64,
    /// Override penalty for faces tagged continuous, used by the
    /// super-penalty experiment: a pure discontinuous discretization with
    /// `sigma_continuous` large recovers the mixed method in the limit.
    /// `None` applies `sigma` everywhere.
    pub sigma_continuous: Option<f64>,
}

impl DgParameters {
    /// Symmetric variant with the standard degree-scaled penalty
    /// `sigma = 10 k^2`.
    pub fn sipg(degree: usize) -> DgParameters {
        DgParameters {
            theta: 1.0,
            sigma: 10.0 * (degree * degree) as f64,
            sigma_continuous: None,
        }
    }

    /// Nonsymmetric variant, same penalty scaling.
    pub fn nipg(degree: usize) -> DgParameters {
        DgParameters {
            theta: -1.0,
            ..DgParameters::sipg(degree)
        }
    }

    /// Incomplete variant, same penalty scaling.
    pub fn iipg(degree: usize) -> DgParameters {
        DgParameters {
            theta: 0.0,
            ..DgParameters::sipg(degree)
        }
    }

    pub fn with_superpenalty(mut self, sigma_continuous: f64) -> DgParameters {
        self.sigma_continuous = Some(sigma_continuous);
        self
    }

    /// Penalty coefficient for a face, decided by its *mesh* tag: the
    /// super-penalty override targets faces of the continuous skeleton
    /// even when the method treats them as discontinuous.
    pub fn penalty_for(&self, tagged: FaceKind) -> f64 {
        match (self.sigma_continuous, tagged) {
            (Some(sc), FaceKind::InteriorContinuous | FaceKind::BoundaryContinuous) => sc,
            _ => self.sigma,
        }
    }
}

/// Assembled sparse system `A x = b`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub matrix: SparseMatrix,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("mesh has {mesh} elements but the DoF map was built for {dofmap}")]
    MeshDofMismatch { mesh: usize, dofmap: usize },
}

/// Upwind trace for the advective flux: the value from the side the flow
/// leaves. A tie (`b.n = 0`) takes the plus side; the flux weight is zero
/// there, so the choice only fixes a convention.
pub fn upwind_value(bn_plus: f64, plus: f64, minus: f64) -> f64 {
    if bn_plus >= 0.0 {
        plus
    } else {
        minus
    }
}

/// All `(row, col)` pairs assembly may fill: every within-element pair,
/// plus every cross pair of the two elements of each face the method
/// integrates over. The assembled matrix stores a subset of this set.
pub fn sparsity_pattern(mesh: &Mesh, dofmap: &DofMap) -> BTreeSet<(usize, usize)> {
    let mut pattern = BTreeSet::new();
    for elem in &mesh.elements {
        let dofs = dofmap.element_dofs(elem.id);
        for &i in dofs {
            for &j in dofs {
                pattern.insert((i, j));
            }
        }
    }
    for face in &mesh.faces {
        let kind = dofmap.method().effective_face_kind(face.kind);
        if !kind.is_discontinuous_skeleton() {
            continue;
        }
        let Some(minus) = face.minus_element else {
            continue;
        };
        let plus_dofs = dofmap.element_dofs(face.plus_element);
        let minus_dofs = dofmap.element_dofs(minus);
        for &i in plus_dofs.iter().chain(minus_dofs) {
            for &j in plus_dofs.iter().chain(minus_dofs) {
                pattern.insert((i, j));
            }
        }
    }
    pattern
}

/// One trace function on a face: its global DoF, value, physical
/// gradient, and jump sign (`+1` from the plus side, `-1` from the minus
/// side).
struct FaceTrace {
    dof: usize,
    value: f64,
    grad: [f64; 2],
    sign: f64,
}

/// Assemble the full system without strong boundary treatment: volume
/// terms everywhere, face and weak-boundary terms where the method's
/// effective classification asks for them.
pub fn assemble(
    mesh: &Mesh,
    dofmap: &DofMap,
    problem: &ProblemSpec,
    params: &DgParameters,
) -> Result<LinearSystem, AssemblyError> {
    if mesh.elements.len() != dofmap.element_count() {
        return Err(AssemblyError::MeshDofMismatch {
            mesh: mesh.elements.len(),
            dofmap: dofmap.element_count(),
        });
    }
    let k = dofmap.degree();
    let basis = LagrangeBasis::new(k).expect("DofMap validated the degree");
    let line = GaussLegendre::new(k + 2).expect("k + 2 is within the supported range");
    let vol_rule = QuadratureRule::tensor(&line);
    let n_local = basis.len();
    let eps = problem.epsilon;
    let method = dofmap.method();

    let mut matrix = SparseMatrix::new(dofmap.num_dofs());
    let mut rhs = vec![0.0; dofmap.num_dofs()];

    // Reference basis tables at the volume quadrature points, shared by
    // every element.
    let vol_phi: Vec<Vec<f64>> = vol_rule.points.iter().map(|&p| basis.eval_all(p)).collect();
    let vol_dphi: Vec<Vec<[f64; 2]>> =
        vol_rule.points.iter().map(|&p| basis.grad_all(p)).collect();

    // Volume pass.
    for elem in &mesh.elements {
        let geo = CellGeometry::from_element(elem);
        let dofs = dofmap.element_dofs(elem.id);
        let jac = geo.jacobian_det();
        for (q, &r) in vol_rule.points.iter().enumerate() {
            let w = vol_rule.weights[q] * jac;
            let x = geo.map_point(r);
            let b = (problem.advection)(x);
            let div_b = (problem.advection_div)(x);
            let f = (problem.forcing)(x);
            let phi = &vol_phi[q];
            let grads: Vec<[f64; 2]> = vol_dphi[q].iter().map(|&g| geo.map_gradient(g)).collect();
            for i in 0..n_local {
                rhs[dofs[i]] += w * f * phi[i];
                let b_dot_dv = b[0] * grads[i][0] + b[1] * grads[i][1];
                for j in 0..n_local {
                    let diffusion = eps * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
                    let advection = -b_dot_dv * phi[j] - div_b * phi[j] * phi[i];
                    matrix.add(dofs[i], dofs[j], w * (diffusion + advection));
                }
            }
        }
    }

    // Face passes.
    let mut traces: Vec<FaceTrace> = Vec::new();
    for face in &mesh.faces {
        let kind = method.effective_face_kind(face.kind);
        let sigma = params.penalty_for(face.kind);
        let a = mesh.vertices[face.vertex_ids[0]];
        let b_pt = mesh.vertices[face.vertex_ids[1]];
        let normal = face.normal;
        let h_e = face.length;

        match kind {
            FaceKind::InteriorContinuous | FaceKind::BoundaryContinuous => continue,
            FaceKind::InteriorDiscontinuous | FaceKind::InterfaceJ => {
                let minus = face
                    .minus_element
                    .expect("interior face kinds only occur on interior faces");
                let geo_p = CellGeometry::from_element(&mesh.elements[face.plus_element]);
                let geo_m = CellGeometry::from_element(&mesh.elements[minus]);
                let dofs_p = dofmap.element_dofs(face.plus_element);
                let dofs_m = dofmap.element_dofs(minus);
                for (q, &t) in line.points.iter().enumerate() {
                    let w = line.weights[q] * h_e;
                    let x = Point2::new(a.x + t * (b_pt.x - a.x), a.y + t * (b_pt.y - a.y));
                    let adv = (problem.advection)(x);
                    let bn = adv[0] * normal[0] + adv[1] * normal[1];

                    traces.clear();
                    for (geo, dofs, sign) in
                        [(geo_p, dofs_p, 1.0f64), (geo_m, dofs_m, -1.0f64)]
                    {
                        let r = clamp_ref(geo.unmap_point(x));
                        for i in 0..n_local {
                            traces.push(FaceTrace {
                                dof: dofs[i],
                                value: basis.eval(i, r),
                                grad: geo.map_gradient(basis.grad(i, r)),
                                sign,
                            });
                        }
                    }

                    for ti in &traces {
                        // Test-side factors: jump sign and normal flux.
                        let jump_i = ti.sign * ti.value;
                        let flux_i = 0.5 * eps * (ti.grad[0] * normal[0] + ti.grad[1] * normal[1]);
                        for tj in &traces {
                            let jump_j = tj.sign * tj.value;
                            let flux_j =
                                0.5 * eps * (tj.grad[0] * normal[0] + tj.grad[1] * normal[1]);
                            let penalty = sigma * (eps / h_e) * jump_i * jump_j;
                            let consistency = -flux_j * jump_i - params.theta * flux_i * jump_j;
                            // Upwind advective flux: test jump times the
                            // trial trace from the upwind side.
                            let up = upwind_value(
                                bn,
                                if tj.sign > 0.0 { tj.value } else { 0.0 },
                                if tj.sign < 0.0 { tj.value } else { 0.0 },
                            );
                            let advect = bn * jump_i * up;
                            matrix.add(ti.dof, tj.dof, w * (penalty + consistency + advect));
                        }
                    }
                }
            }
            FaceKind::BoundaryDiscontinuous => {
                let geo = CellGeometry::from_element(&mesh.elements[face.plus_element]);
                let dofs = dofmap.element_dofs(face.plus_element);
                let mid = mesh.face_midpoint(face);
                let b_mid = (problem.advection)(mid);
                let inflow = b_mid[0] * normal[0] + b_mid[1] * normal[1] <= 0.0;
                for (q, &t) in line.points.iter().enumerate() {
                    let w = line.weights[q] * h_e;
                    let x = Point2::new(a.x + t * (b_pt.x - a.x), a.y + t * (b_pt.y - a.y));
                    let adv = (problem.advection)(x);
                    let bn = adv[0] * normal[0] + adv[1] * normal[1];
                    let g = (problem.dirichlet)(x);
                    let r = clamp_ref(geo.unmap_point(x));
                    let phi: Vec<f64> = (0..n_local).map(|i| basis.eval(i, r)).collect();
                    let flux: Vec<f64> = (0..n_local)
                        .map(|i| {
                            let gr = geo.map_gradient(basis.grad(i, r));
                            eps * (gr[0] * normal[0] + gr[1] * normal[1])
                        })
                        .collect();
                    for i in 0..n_local {
                        // Data terms mirror the boundary part of the form,
                        // so the scheme stays consistent for smooth data.
                        rhs[dofs[i]] += w
                            * g
                            * (sigma * (eps / h_e) * phi[i] - params.theta * flux[i]);
                        if inflow {
                            rhs[dofs[i]] -= w * bn * g * phi[i];
                        }
                        for j in 0..n_local {
                            let penalty = sigma * (eps / h_e) * phi[i] * phi[j];
                            let consistency =
                                -flux[j] * phi[i] - params.theta * flux[i] * phi[j];
                            let advect = if inflow { 0.0 } else { bn * phi[j] * phi[i] };
                            matrix.add(dofs[i], dofs[j], w * (penalty + consistency + advect));
                        }
                    }
                }
            }
        }
    }

    Ok(LinearSystem { matrix, rhs })
}

/// Interpolate the Dirichlet data at every strongly constrained boundary
/// node and eliminate those DoFs symmetrically.
pub fn apply_strong_dirichlet(
    system: &mut LinearSystem,
    mesh: &Mesh,
    dofmap: &DofMap,
    problem: &ProblemSpec,
) {
    let constraints: Vec<(usize, f64)> = dofmap
        .strong_boundary_dofs(mesh)
        .into_iter()
        .map(|dof| (dof, (problem.dirichlet)(dofmap.dof_point(dof))))
        .collect();
    system
        .matrix
        .eliminate_dirichlet(&mut system.rhs, &constraints);
}

/// Full assembly: weak terms everywhere the method asks for them, strong
/// Dirichlet nodes eliminated.
pub fn assemble_system(
    mesh: &Mesh,
    dofmap: &DofMap,
    problem: &ProblemSpec,
    params: &DgParameters,
) -> Result<LinearSystem, AssemblyError> {
    let mut system = assemble(mesh, dofmap, problem, params)?;
    apply_strong_dirichlet(&mut system, mesh, dofmap, problem);
    Ok(system)
}

/// Snap reference coordinates onto `[0,1]^2`; face points sit on an edge
/// up to one or two ulps of mapping roundoff.
fn clamp_ref(r: [f64; 2]) -> [f64; 2] {
    [r[0].clamp(0.0, 1.0), r[1].clamp(0.0, 1.0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{Mesh, RectRegion, RegionSpec};
    use crate::space::{DofMap, MethodKind};
    use std::sync::Arc;

    /// Pure diffusion problem with unit coefficient, `f = 1`, `g = 0`.
    fn poisson_unit() -> ProblemSpec {
        let mut p = ProblemSpec::manufactured_linear(1.0);
        p.name = "poisson-unit".into();
        p.advection = Arc::new(|_| [0.0, 0.0]);
        p.forcing = Arc::new(|_| 1.0);
        p.dirichlet = Arc::new(|_| 0.0);
        p.exact = None;
        p.exact_gradient = None;
        p
    }

    fn dense(m: &SparseMatrix) -> Vec<Vec<f64>> {
        let n = m.nrows();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for (j, v) in m.row(i) {
                a[i][j] = v;
            }
        }
        a
    }

    /// Pivots of the (unpivoted) LDL^T factorization; all positive iff the
    /// symmetric matrix is positive definite.
    fn ldlt_pivots(mut a: Vec<Vec<f64>>) -> Vec<f64> {
        let n = a.len();
        let mut pivots = Vec::with_capacity(n);
        for c in 0..n {
            let d = a[c][c];
            pivots.push(d);
            if d == 0.0 {
                break;
            }
            for r in c + 1..n {
                let f = a[r][c] / d;
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
        pivots
    }

    #[test]
    fn unit_cell_stiffness_matches_hand_values() {
        // Single Q1 cell, pure diffusion. The reference stiffness matrix
        // (lexicographic nodes) has 2/3 on the diagonal, -1/6 for
        // edge-adjacent pairs and -1/3 for the diagonal pair.
        let mesh = Mesh::structured((Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)), 1, 1).unwrap();
        let dofmap = DofMap::build(&mesh, 1, MethodKind::Cg).unwrap();
        let system = assemble(&mesh, &dofmap, &poisson_unit(), &DgParameters::sipg(1)).unwrap();
        let expect = [
            [2.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0, -1.0 / 3.0],
            [-1.0 / 6.0, 2.0 / 3.0, -1.0 / 3.0, -1.0 / 6.0],
            [-1.0 / 6.0, -1.0 / 3.0, 2.0 / 3.0, -1.0 / 6.0],
            [-1.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0, 2.0 / 3.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!(
                    (system.matrix.get(i, j) - expect[i][j]).abs() < 1e-14,
                    "({i},{j}): {} vs {}",
                    system.matrix.get(i, j),
                    expect[i][j]
                );
            }
            // f = 1 load: each node gets the quarter-cell volume.
            assert!((system.rhs[i] - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn dg_unit_cell_diagonal_matches_hand_value() {
        // One cell under the pure discontinuous method, sigma = 10,
        // symmetric variant. Node (0,0) collects: volume 2/3, and from each of the
        // left and bottom faces sigma/3 - 1/3 - 1/3. Total 2*sigma/3 - 2/3 = 6.
        let mesh = Mesh::structured((Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)), 1, 1).unwrap();
        let dofmap = DofMap::build(&mesh, 1, MethodKind::Dg).unwrap();
        let system = assemble(&mesh, &dofmap, &poisson_unit(), &DgParameters::sipg(1)).unwrap();
        assert!((system.matrix.get(0, 0) - 6.0).abs() < 1e-13);
        assert!((system.rhs[0] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn dg_interface_entries_match_hand_values() {
        // Two unit cells sharing the face x = 1, sigma = 10, symmetric
        // variant, pure diffusion. For the two face nodes at y = 0 (dof 1 on the
        // plus side, dof 4 on the minus side):
        //   coupling = -sigma/3 + 1/6 + 1/6 = (1 - sigma)/3 = -3,
        //   diagonal = 2/3 + (sigma/3 - 1/3) + (sigma/3 - 2/3) = 19/3,
        // the diagonal collecting volume, shared-face, and bottom-boundary
        // contributions.
        let mesh = Mesh::structured((Point2::new(0.0, 0.0), Point2::new(2.0, 1.0)), 2, 1).unwrap();
        let dofmap = DofMap::build(&mesh, 1, MethodKind::Dg).unwrap();
        let system = assemble(&mesh, &dofmap, &poisson_unit(), &DgParameters::sipg(1)).unwrap();
        assert!((system.matrix.get(1, 4) - (-3.0)).abs() < 1e-13);
        assert!((system.matrix.get(4, 1) - (-3.0)).abs() < 1e-13);
        assert!((system.matrix.get(1, 1) - 19.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn two_element_dg_system_is_spd() {
        // Symmetric variant of pure diffusion must give a symmetric
        // positive definite 8-DoF system (weak boundary terms included).
        let mesh = Mesh::structured((Point2::new(0.0, 0.0), Point2::new(2.0, 1.0)), 2, 1).unwrap();
        let dofmap = DofMap::build(&mesh, 1, MethodKind::Dg).unwrap();
        let system = assemble(&mesh, &dofmap, &poisson_unit(), &DgParameters::sipg(1)).unwrap();
        assert_eq!(dofmap.num_dofs(), 8);
        assert!(system.matrix.max_asymmetry() < 1e-13);
        let pivots = ldlt_pivots(dense(&system.matrix));
        assert_eq!(pivots.len(), 8);
        assert!(pivots.iter().all(|&p| p > 0.0), "pivots: {pivots:?}");
    }

    #[test]
    fn mixed_method_sipg_matrix_is_symmetric() {
        let mut mesh =
            Mesh::structured((Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)), 4, 4).unwrap();
        mesh.classify_regions(&RegionSpec::new(vec![RectRegion::half_open(
            Point2::new(0.0, 0.0),
            Point2::new(0.75, 0.75),
        )]));
        let dofmap = DofMap::build(&mesh, 2, MethodKind::Cdg).unwrap();
        let system = assemble(&mesh, &dofmap, &poisson_unit(), &DgParameters::sipg(2)).unwrap();
        assert!(system.matrix.max_asymmetry() < 1e-12);
    }

    #[test]
    fn conforming_assembly_ignores_region_tags() {
        // The conforming method must produce the same matrix whether or
        // not the mesh carries a nontrivial region split.
        let problem = ProblemSpec::example1(1e-2);
        let mut tagged =
            Mesh::structured((Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)), 4, 4).unwrap();
        tagged.classify_regions(&RegionSpec::new(vec![RectRegion::half_open(
            Point2::new(0.0, 0.0),
            Point2::new(0.5, 1.0),
        )]));
        let untagged =
            Mesh::structured((Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)), 4, 4).unwrap();
        let params = DgParameters::sipg(1);
        let map_t = DofMap::build(&tagged, 1, MethodKind::Cg).unwrap();
        let map_u = DofMap::build(&untagged, 1, MethodKind::Cg).unwrap();
        let sys_t = assemble_system(&tagged, &map_t, &problem, &params).unwrap();
        let sys_u = assemble_system(&untagged, &map_u, &problem, &params).unwrap();
        for i in 0..sys_t.matrix.nrows() {
            assert!((sys_t.rhs[i] - sys_u.rhs[i]).abs() < 1e-15);
            for (j, v) in sys_t.matrix.row(i) {
                assert!((v - sys_u.matrix.get(i, j)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn upwind_tie_takes_plus_side() {
        assert_eq!(upwind_value(0.0, 2.5, -1.0), 2.5);
        assert_eq!(upwind_value(1e-9, 2.5, -1.0), 2.5);
        assert_eq!(upwind_value(-1e-9, 2.5, -1.0), -1.0);
    }

    #[test]
    fn sparsity_pattern_two_cell_conforming() {
        // Two Q1 cells sharing an edge: rows couple {4,6,4,4,6,4} giving
        // 28 ordered pairs, the brute-force count over both element blocks.
        let mesh = Mesh::structured((Point2::new(0.0, 0.0), Point2::new(2.0, 1.0)), 2, 1).unwrap();
        let dofmap = DofMap::build(&mesh, 1, MethodKind::Cg).unwrap();
        let pattern = sparsity_pattern(&mesh, &dofmap);
        assert_eq!(pattern.len(), 28);
    }

    #[test]
    fn sparsity_pattern_contains_assembled_entries() {
        let mut mesh =
            Mesh::structured((Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)), 3, 3).unwrap();
        mesh.classify_regions(&RegionSpec::new(vec![RectRegion::half_open(
            Point2::new(0.0, 0.0),
            Point2::new(0.67, 1.0),
        )]));
        let problem = ProblemSpec::example1(1e-3);
        for method in [MethodKind::Cg, MethodKind::Dg, MethodKind::Cdg] {
            for k in 1..=2 {
                let dofmap = DofMap::build(&mesh, k, method).unwrap();
                let pattern = sparsity_pattern(&mesh, &dofmap);
                let system =
                    assemble(&mesh, &dofmap, &problem, &DgParameters::sipg(k)).unwrap();
                for i in 0..system.matrix.nrows() {
                    for (j, _) in system.matrix.row(i) {
                        assert!(
                            pattern.contains(&(i, j)),
                            "entry ({i},{j}) outside the predicted pattern"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn dg_coupling_widens_the_pattern() {
        let mesh = Mesh::structured((Point2::new(0.0, 0.0), Point2::new(2.0, 1.0)), 2, 1).unwrap();
        let cg = DofMap::build(&mesh, 1, MethodKind::Cg).unwrap();
        let dg = DofMap::build(&mesh, 1, MethodKind::Dg).unwrap();
        let cg_pairs = sparsity_pattern(&mesh, &cg).len();
        let dg_pairs = sparsity_pattern(&mesh, &dg).len();
        // All 64 cross-element pairs appear for the broken space.
        assert_eq!(dg_pairs, 64);
        assert!(cg_pairs < dg_pairs);
    }

    #[test]
    fn linear_solution_is_reproduced_by_all_methods() {
        // The exact solution lies in every trial space, so each method
        // must return it to solver precision; this exercises every term of
        // the bilinear form against every other (a sign error anywhere
        // breaks consistency and shows up here).
        let problem = ProblemSpec::manufactured_linear(1e-3);
        let mut mesh =
            Mesh::structured((Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)), 2, 2).unwrap();
        mesh.classify_regions(&problem.default_region);
        let exact = problem.exact.clone().unwrap();
        for method in [MethodKind::Cg, MethodKind::Dg, MethodKind::Cdg] {
            for k in 1..=3 {
                let dofmap = DofMap::build(&mesh, k, method).unwrap();
                let params = DgParameters::sipg(k);
                let system = assemble_system(&mesh, &dofmap, &problem, &params).unwrap();
                let (x, report) = system.matrix.solve(&system.rhs, 1e-10).unwrap();
                assert_eq!(report.status, crate::linalg::SolveStatus::Converged);
                for dof in 0..dofmap.num_dofs() {
                    let err = (x[dof] - exact(dofmap.dof_point(dof))).abs();
                    assert!(
                        err < 1e-9,
                        "{method:?} k={k} dof {dof}: error {err}"
                    );
                }
            }
        }
    }

    #[test]
    fn nonsymmetric_variant_reproduces_linears_too() {
        let problem = ProblemSpec::manufactured_linear(0.5);
        let mut mesh =
            Mesh::structured((Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)), 3, 3).unwrap();
        mesh.classify_regions(&problem.default_region);
        let exact = problem.exact.clone().unwrap();
        for params in [DgParameters::nipg(1), DgParameters::iipg(1)] {
            let dofmap = DofMap::build(&mesh, 1, MethodKind::Cdg).unwrap();
            let system = assemble_system(&mesh, &dofmap, &problem, &params).unwrap();
            let (x, _) = system.matrix.solve(&system.rhs, 1e-10).unwrap();
            for dof in 0..dofmap.num_dofs() {
                let err = (x[dof] - exact(dofmap.dof_point(dof))).abs();
                assert!(err < 1e-9, "theta={} dof {dof}: {err}", params.theta);
            }
        }
    }

    #[test]
    fn superpenalty_override_targets_continuous_faces() {
        let params = DgParameters::sipg(1).with_superpenalty(1e6);
        assert_eq!(params.penalty_for(FaceKind::InteriorContinuous), 1e6);
        assert_eq!(params.penalty_for(FaceKind::BoundaryContinuous), 1e6);
        assert_eq!(params.penalty_for(FaceKind::InteriorDiscontinuous), 10.0);
        assert_eq!(params.penalty_for(FaceKind::InterfaceJ), 10.0);
        assert_eq!(params.penalty_for(FaceKind::BoundaryDiscontinuous), 10.0);
        let plain = DgParameters::sipg(2);
        assert_eq!(plain.penalty_for(FaceKind::InteriorContinuous), 40.0);
    }

    #[test]
    fn mismatched_dofmap_is_rejected(){
        let mesh_a = Mesh::structured((Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)), 2, 2).unwrap();
        let mesh_b = Mesh::structured((Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)), 3, 3).unwrap();
        let dofmap = DofMap::build(&mesh_b, 1, MethodKind::Cg).unwrap();
        let problem = ProblemSpec::manufactured_linear(1.0);
        assert!(matches!(
            assemble(&mesh_a, &dofmap, &problem, &DgParameters::sipg(1)),
            Err(AssemblyError::MeshDofMismatch { .. })
        ));
    }

    #[test]
    fn strong_dirichlet_pins_boundary_nodes() {
        let problem = ProblemSpec::example1(1e-2);
        let mesh = Mesh::structured((Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)), 4, 4).unwrap();
        let dofmap = DofMap::build(&mesh, 1, MethodKind::Cg).unwrap();
        let system = assemble_system(&mesh, &dofmap, &problem, &DgParameters::sipg(1)).unwrap();
        let (x, _) = system.matrix.solve(&system.rhs, 1e-10).unwrap();
        let g = &problem.dirichlet;
        for &dof in &dofmap.strong_boundary_dofs(&mesh) {
            let expected = g(dofmap.dof_point(dof));
            assert!((x[dof] - expected).abs() < 1e-12);
        }
    }
}
