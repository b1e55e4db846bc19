//! Degree-of-freedom numbering for the continuous, discontinuous and mixed
//! Galerkin spaces on a structured quad mesh.
//!
//! The mixed space glues a conforming `Q_k` space on the continuous region
//! to an element-private (broken) `Q_k` space on the discontinuous region.
//! Shared conforming DoFs live on the global `(k*nx+1) x (k*ny+1)` node
//! lattice and are numbered first, by ascending lattice index
//! `gy*(k*nx+1) + gx`; element-private DoFs follow, element by element in
//! element-id order with local nodes in lexicographic order. Two adjacent
//! continuous elements therefore share the `k+1` DoFs on their common
//! face, while discontinuous elements own all of their DoFs outright.

use crate::mesh::{FaceKind, Mesh, Point2, Region};
use std::collections::BTreeSet;
use thiserror::Error;

/// Which discretization the DoF numbering serves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodKind {
    /// Conforming Galerkin everywhere; every element shares lattice DoFs.
    Cg,
    /// Discontinuous Galerkin everywhere; every element owns private DoFs.
    Dg,
    /// Conforming on the continuous region, broken on the discontinuous
    /// region, glued by interface penalty terms.
    Cdg,
}

impl MethodKind {
    /// Region an element is treated as having under this method. `Cg` and
    /// `Dg` override the mesh tags; `Cdg` honors them.
    pub fn effective_region(&self, tagged: Region) -> Region {
        match self {
            MethodKind::Cg => Region::Continuous,
            MethodKind::Dg => Region::Discontinuous,
            MethodKind::Cdg => tagged,
        }
    }

    /// Face classification as seen by this method: `Cg` treats the whole
    /// skeleton as continuous, `Dg` as discontinuous, `Cdg` uses the tags.
    pub fn effective_face_kind(&self, tagged: FaceKind) -> FaceKind {
        match self {
            MethodKind::Cg => match tagged {
                k if k.is_boundary() => FaceKind::BoundaryContinuous,
                _ => FaceKind::InteriorContinuous,
            },
            MethodKind::Dg => match tagged {
                k if k.is_boundary() => FaceKind::BoundaryDiscontinuous,
                _ => FaceKind::InteriorDiscontinuous,
            },
            MethodKind::Cdg => tagged,
        }
    }
}

impl std::str::FromStr for MethodKind {
    type Err = String;

    fn from_str(s: &str) -> Result<MethodKind, String> {
        match s {
            "cg" => Ok(MethodKind::Cg),
            "dg" => Ok(MethodKind::Dg),
            "cdg" => Ok(MethodKind::Cdg),
            other => Err(format!("unknown method `{other}` (expected cg, dg, or cdg)")),
        }
    }
}

/// Ownership class of a degree of freedom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DofClass {
    /// Conforming DoF on the global node lattice, shared between the
    /// continuous elements that touch it.
    SharedContinuous,
    /// Broken DoF owned by exactly one discontinuous element.
    PrivateDiscontinuous,
}

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("polynomial degree must be between 1 and 3, got {0}")]
    UnsupportedDegree(usize),
}

/// Global DoF numbering: per-element connectivity, DoF coordinates, and
/// the shared/private split.
#[derive(Clone, Debug)]
pub struct DofMap {
    method: MethodKind,
    degree: usize,
    num_shared: usize,
    num_dofs: usize,
    element_dofs: Vec<Vec<usize>>,
    dof_points: Vec<Point2>,
}

impl DofMap {
    /// Number the DoFs of `mesh` for the given method and degree.
    pub fn build(mesh: &Mesh, degree: usize, method: MethodKind) -> Result<DofMap, SpaceError> {
        if degree == 0 || degree > 3 {
            return Err(SpaceError::UnsupportedDegree(degree));
        }
        let k = degree;
        let gnx = k * mesh.nx + 1;
        let gny = k * mesh.ny + 1;
        let lattice_id = |gx: usize, gy: usize| gy * gnx + gx;

        // Lattice nodes touched by at least one effectively continuous element.
        let mut used = vec![false; gnx * gny];
        for elem in &mesh.elements {
            if method.effective_region(elem.region) != Region::Continuous {
                continue;
            }
            let ex = elem.id % mesh.nx;
            let ey = elem.id / mesh.nx;
            for b in 0..=k {
                for a in 0..=k {
                    used[lattice_id(k * ex + a, k * ey + b)] = true;
                }
            }
        }

        // Shared DoFs numbered by ascending lattice index.
        let mut lattice_to_dof = vec![usize::MAX; gnx * gny];
        let mut num_shared = 0;
        for (lid, &u) in used.iter().enumerate() {
            if u {
                lattice_to_dof[lid] = num_shared;
                num_shared += 1;
            }
        }

        let (hx, hy) = mesh.spacing();
        let node_point = |gx: usize, gy: usize| {
            Point2::new(
                mesh.bounds.0.x + gx as f64 * hx / k as f64,
                mesh.bounds.0.y + gy as f64 * hy / k as f64,
            )
        };

        let mut dof_points = vec![Point2::new(0.0, 0.0); num_shared];
        for gy in 0..gny {
            for gx in 0..gnx {
                let dof = lattice_to_dof[lattice_id(gx, gy)];
                if dof != usize::MAX {
                    dof_points[dof] = node_point(gx, gy);
                }
            }
        }

        // Private DoFs appended element by element.
        let mut next = num_shared;
        let mut element_dofs = Vec::with_capacity(mesh.elements.len());
        for elem in &mesh.elements {
            let ex = elem.id % mesh.nx;
            let ey = elem.id / mesh.nx;
            let mut dofs = Vec::with_capacity((k + 1) * (k + 1));
            if method.effective_region(elem.region) == Region::Continuous {
                for b in 0..=k {
                    for a in 0..=k {
                        dofs.push(lattice_to_dof[lattice_id(k * ex + a, k * ey + b)]);
                    }
                }
            } else {
                for b in 0..=k {
                    for a in 0..=k {
                        dofs.push(next);
                        next += 1;
                        dof_points.push(node_point(k * ex + a, k * ey + b));
                    }
                }
            }
            element_dofs.push(dofs);
        }

        Ok(DofMap {
            method,
            degree,
            num_shared,
            num_dofs: next,
            element_dofs,
            dof_points,
        })
    }

    pub fn method(&self) -> MethodKind {
        self.method
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_dofs(&self) -> usize {
        self.num_dofs
    }

    pub fn num_shared_dofs(&self) -> usize {
        self.num_shared
    }

    pub fn num_private_dofs(&self) -> usize {
        self.num_dofs - self.num_shared
    }

    /// Global DoFs of element `eid`, local nodes in lexicographic order.
    pub fn element_dofs(&self, eid: usize) -> &[usize] {
        &self.element_dofs[eid]
    }

    /// Number of elements the map was built over.
    pub fn element_count(&self) -> usize {
        self.element_dofs.len()
    }

    pub fn dof_class(&self, dof: usize) -> DofClass {
        if dof < self.num_shared {
            DofClass::SharedContinuous
        } else {
            DofClass::PrivateDiscontinuous
        }
    }

    /// Coordinates of the Lagrange node carrying `dof`.
    pub fn dof_point(&self, dof: usize) -> Point2 {
        self.dof_points[dof]
    }

    /// DoFs pinned by strong Dirichlet data: the nodes of every boundary
    /// face the method treats as continuous. Pure dG imposes all boundary
    /// data weakly, so its list is empty.
    pub fn strong_boundary_dofs(&self, mesh: &Mesh) -> Vec<usize> {
        let k = self.degree;
        let mut set = BTreeSet::new();
        for face in &mesh.faces {
            if !face.is_boundary() {
                continue;
            }
            if self.method.effective_face_kind(face.kind) != FaceKind::BoundaryContinuous {
                continue;
            }
            let dofs = self.element_dofs(face.plus_element);
            // Local edge of the owning element, from the outward normal.
            let locals: Vec<usize> = if face.normal[0] < 0.0 {
                (0..=k).map(|b| b * (k + 1)).collect()
            } else if face.normal[0] > 0.0 {
                (0..=k).map(|b| b * (k + 1) + k).collect()
            } else if face.normal[1] < 0.0 {
                (0..=k).collect()
            } else {
                (0..=k).map(|a| k * (k + 1) + a).collect()
            };
            for l in locals {
                set.insert(dofs[l]);
            }
        }
        set.into_iter().collect()
    }
}
