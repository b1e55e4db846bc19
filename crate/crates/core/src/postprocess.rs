//! Evaluation and output of discrete solutions: norms against reference
//! functions, differences between fields, legacy VTK export, and the CSV
//! records written by the parameter sweeps.
//!
//! A [`DiscreteField`] owns solution coefficients together with the mesh
//! and DoF map they were computed on. Evaluation is element-local and
//! one-sided: a point on an inter-element line is evaluated in the element
//! `Mesh::locate` assigns (the upper-right neighbor), which makes point
//! evaluation of discontinuous fields deterministic.
//!
//! Norms are measured discretely. The L2 norm uses the `(k+2)^2`-point
//! Gauss rule per element; the max norm scans a per-element lattice of
//! those same quadrature points plus the four corners, which is where
//! discontinuous overshoots live.

use crate::element::{CellGeometry, GaussLegendre, LagrangeBasis, QuadratureRule};
use crate::mesh::{Mesh, Point2, Region};
use crate::space::DofMap;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PostprocessError {
    #[error("field has {got} coefficients but the DoF map defines {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("fields live on different meshes")]
    MeshMismatch,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("CSV line {line}: {message}")]
    CsvFormat { line: usize, message: String },
}

/// A finite element function: coefficients bound to their mesh and DoF map.
#[derive(Clone, Debug)]
pub struct DiscreteField {
    mesh: Arc<Mesh>,
    dofmap: Arc<DofMap>,
    coefficients: Vec<f64>,
    basis: LagrangeBasis,
}

impl DiscreteField {
    pub fn new(
        mesh: Arc<Mesh>,
        dofmap: Arc<DofMap>,
        coefficients: Vec<f64>,
    ) -> Result<DiscreteField, PostprocessError> {
        if coefficients.len() != dofmap.num_dofs() {
            return Err(PostprocessError::LengthMismatch {
                expected: dofmap.num_dofs(),
                got: coefficients.len(),
            });
        }
        let basis = LagrangeBasis::new(dofmap.degree()).expect("DofMap validated the degree");
        Ok(DiscreteField {
            mesh,
            dofmap,
            coefficients,
            basis,
        })
    }

    /// Nodal interpolant of `f`: each DoF takes the value of `f` at its
    /// node.
    pub fn interpolate<F>(mesh: Arc<Mesh>, dofmap: Arc<DofMap>, f: F) -> DiscreteField
    where
        F: Fn(Point2) -> f64,
    {
        let coefficients = (0..dofmap.num_dofs())
            .map(|d| f(dofmap.dof_point(d)))
            .collect();
        DiscreteField::new(mesh, dofmap, coefficients).expect("lengths match by construction")
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn dofmap(&self) -> &Arc<DofMap> {
        &self.dofmap
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Evaluate inside element `eid` at the physical point `p` (clamped
    /// onto the element), using that element's one-sided values.
    pub fn eval_in(&self, eid: usize, p: Point2) -> f64 {
        let geo = CellGeometry::from_element(&self.mesh.elements[eid]);
        let r = geo.unmap_point(p);
        let r = [r[0].clamp(0.0, 1.0), r[1].clamp(0.0, 1.0)];
        let dofs = self.dofmap.element_dofs(eid);
        (0..self.basis.len())
            .map(|i| self.coefficients[dofs[i]] * self.basis.eval(i, r))
            .sum()
    }

    /// Evaluate at `p`, locating the owning element first. Points outside
    /// the domain are clamped into the nearest boundary element.
    pub fn eval(&self, p: Point2) -> f64 {
        self.eval_in(self.mesh.locate(p), p)
    }

    fn same_mesh(&self, other: &DiscreteField) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh)
            || (self.mesh.bounds == other.mesh.bounds
                && self.mesh.nx == other.mesh.nx
                && self.mesh.ny == other.mesh.ny)
    }

    /// L2 norm of `u_h - f` by per-element Gauss quadrature.
    pub fn l2_error<F>(&self, f: F) -> f64
    where
        F: Fn(Point2) -> f64,
    {
        let rule = self.quad_rule();
        let mut total = 0.0;
        for elem in &self.mesh.elements {
            let geo = CellGeometry::from_element(elem);
            let jac = geo.jacobian_det();
            for (q, &r) in rule.points.iter().enumerate() {
                let x = geo.map_point(r);
                let d = self.eval_in(elem.id, x) - f(x);
                total += rule.weights[q] * jac * d * d;
            }
        }
        total.sqrt()
    }

    /// L2 norm of the difference to another field on the same mesh. The
    /// fields may use different methods (and so different DoF maps).
    pub fn l2_diff(&self, other: &DiscreteField) -> Result<f64, PostprocessError> {
        if !self.same_mesh(other) {
            return Err(PostprocessError::MeshMismatch);
        }
        let rule = self.quad_rule();
        let mut total = 0.0;
        for elem in &self.mesh.elements {
            let geo = CellGeometry::from_element(elem);
            let jac = geo.jacobian_det();
            for (q, &r) in rule.points.iter().enumerate() {
                let x = geo.map_point(r);
                let d = self.eval_in(elem.id, x) - other.eval_in(elem.id, x);
                total += rule.weights[q] * jac * d * d;
            }
        }
        Ok(total.sqrt())
    }

    /// Max norm of `u_h - f` over the evaluation lattice.
    pub fn linf_error<F>(&self, f: F) -> f64
    where
        F: Fn(Point2) -> f64,
    {
        self.fold_lattice(0.0, |acc, eid, x| {
            acc.max((self.eval_in(eid, x) - f(x)).abs())
        })
    }

    /// Max-norm difference to another field on the same mesh.
    pub fn linf_diff(&self, other: &DiscreteField) -> Result<f64, PostprocessError> {
        if !self.same_mesh(other) {
            return Err(PostprocessError::MeshMismatch);
        }
        Ok(self.fold_lattice(0.0, |acc, eid, x| {
            acc.max((self.eval_in(eid, x) - other.eval_in(eid, x)).abs())
        }))
    }

    /// Smallest and largest field value over the evaluation lattice; the
    /// raw material for overshoot and undershoot measurements.
    pub fn range_on_lattice(&self) -> (f64, f64) {
        let r = self.fold_lattice((f64::INFINITY, f64::NEG_INFINITY), |acc, eid, x| {
            let v = self.eval_in(eid, x);
            (acc.0.min(v), acc.1.max(v))
        });
        r
    }

    /// Like [`range_on_lattice`](Self::range_on_lattice), but restricted
    /// to elements carrying the given region tag. Measures whether
    /// oscillations stay out of one part of the mesh. Returns
    /// `(inf, -inf)` when no element has the tag.
    pub fn range_on_region(&self, region: Region) -> (f64, f64) {
        self.fold_lattice((f64::INFINITY, f64::NEG_INFINITY), |acc, eid, x| {
            if self.mesh.elements[eid].region == region {
                let v = self.eval_in(eid, x);
                (acc.0.min(v), acc.1.max(v))
            } else {
                acc
            }
        })
    }

    fn quad_rule(&self) -> QuadratureRule {
        let line = GaussLegendre::new(self.dofmap.degree() + 2)
            .expect("degree + 2 is within the supported range");
        QuadratureRule::tensor(&line)
    }

    /// Fold over the evaluation lattice: the volume quadrature points of
    /// every element plus its four corners, each evaluated one-sided in
    /// that element.
    fn fold_lattice<T, F>(&self, init: T, mut f: F) -> T
    where
        F: FnMut(T, usize, Point2) -> T,
    {
        let rule = self.quad_rule();
        let corners = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let mut acc = init;
        for elem in &self.mesh.elements {
            let geo = CellGeometry::from_element(elem);
            for &r in rule.points.iter().chain(corners.iter()) {
                acc = f(acc, elem.id, geo.map_point(r));
            }
        }
        acc
    }

    /// Write the field as a legacy ASCII VTK unstructured grid. Every quad
    /// gets its own four corner points with one-sided values, so jumps of
    /// discontinuous solutions stay visible instead of being averaged
    /// away. Higher-degree fields are exported through their corner
    /// values.
    pub fn write_vtk<W: Write>(&self, mut w: W) -> Result<(), PostprocessError> {
        let nelem = self.mesh.elements.len();
        writeln!(w, "# vtk DataFile Version 3.0")?;
        writeln!(w, "advection-diffusion solution")?;
        writeln!(w, "ASCII")?;
        writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
        writeln!(w, "POINTS {} double", 4 * nelem)?;
        let corners = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        for elem in &self.mesh.elements {
            let geo = CellGeometry::from_element(elem);
            for &r in &corners {
                let p = geo.map_point(r);
                writeln!(w, "{:.12e} {:.12e} 0.0", p.x, p.y)?;
            }
        }
        writeln!(w, "CELLS {} {}", nelem, 5 * nelem)?;
        for e in 0..nelem {
            writeln!(w, "4 {} {} {} {}", 4 * e, 4 * e + 1, 4 * e + 2, 4 * e + 3)?;
        }
        writeln!(w, "CELL_TYPES {nelem}")?;
        for _ in 0..nelem {
            writeln!(w, "9")?;
        }
        writeln!(w, "POINT_DATA {}", 4 * nelem)?;
        writeln!(w, "SCALARS u double 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for elem in &self.mesh.elements {
            let geo = CellGeometry::from_element(elem);
            for &r in &corners {
                writeln!(w, "{:.12e}", self.eval_in(elem.id, geo.map_point(r)))?;
            }
        }
        Ok(())
    }

    pub fn write_vtk_file<P: AsRef<Path>>(&self, path: P) -> Result<(), PostprocessError> {
        let file = std::fs::File::create(path)?;
        self.write_vtk(std::io::BufWriter::new(file))
    }
}

/// One row of a parameter sweep: the solve at one parameter value
/// together with its error and method-difference norms.
///
/// `parameter` is the swept quantity: the diffusion coefficient for an
/// epsilon sweep, the continuous-skeleton penalty for a super-penalty
/// sweep. Error norms compare against the exact solution (NaN when none
/// exists); diff norms compare the two methods the sweep pits against
/// each other. `status` records the solver outcome, so a failed solve
/// still leaves a row.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub parameter: f64,
    pub l2_error: f64,
    pub linf_error: f64,
    pub l2_diff: f64,
    pub linf_diff: f64,
    pub status: String,
}

const CSV_HEADER: &str = "parameter,l2_error,linf_error,l2_diff,linf_diff,status";

/// Write sweep records as CSV. Floats carry 17 significant digits, which
/// round-trips every f64 bit-exactly through `read_csv`.
pub fn write_csv<W: Write>(records: &[SweepRecord], mut w: W) -> Result<(), PostprocessError> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            r.parameter, r.l2_error, r.linf_error, r.l2_diff, r.linf_diff, r.status
        )?;
    }
    Ok(())
}

pub fn write_csv_file<P: AsRef<Path>>(
    records: &[SweepRecord],
    path: P,
) -> Result<(), PostprocessError> {
    let file = std::fs::File::create(path)?;
    write_csv(records, std::io::BufWriter::new(file))
}

/// Parse CSV written by [`write_csv`].
pub fn read_csv<R: BufRead>(r: R) -> Result<Vec<SweepRecord>, PostprocessError> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines.next().ok_or(PostprocessError::CsvFormat {
        line: 1,
        message: "empty input".into(),
    })?;
    let header = header?;
    if header.trim_end() != CSV_HEADER {
        return Err(PostprocessError::CsvFormat {
            line: 1,
            message: format!("unexpected header `{header}`"),
        });
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(PostprocessError::CsvFormat {
                line: idx + 1,
                message: format!("expected 6 fields, got {}", fields.len()),
            });
        }
        let num = |s: &str, name: &str| {
            s.parse::<f64>().map_err(|e| PostprocessError::CsvFormat {
                line: idx + 1,
                message: format!("bad {name} `{s}`: {e}"),
            })
        };
        records.push(SweepRecord {
            parameter: num(fields[0], "parameter")?,
            l2_error: num(fields[1], "l2_error")?,
            linf_error: num(fields[2], "linf_error")?,
            l2_diff: num(fields[3], "l2_diff")?,
            linf_diff: num(fields[4], "linf_diff")?,
            status: fields[5].to_string(),
        });
    }
    Ok(records)
}

pub fn read_csv_file<P: AsRef<Path>>(path: P) -> Result<Vec<SweepRecord>, PostprocessError> {
    let file = std::fs::File::open(path)?;
    read_csv(std::io::BufReader::new(file))
}
