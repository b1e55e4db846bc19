//! Structured quadrilateral meshes with region tags and a fully classified
//! face skeleton.
//!
//! Elements carry a `Continuous`/`Discontinuous` region tag. Faces are
//! classified into the continuous interior skeleton, the discontinuous
//! interior skeleton, the interface between the two regions, and the two
//! boundary variants; boundary faces additionally carry an inflow/outflow
//! tag derived from the sign of `b . n`. Interface faces count as part of
//! the discontinuous skeleton throughout the crate.
//!
//! Face orientation convention: `normal` points out of `plus_element`. For
//! interior faces the plus side is the adjacent element with the smaller
//! index, so orientation is deterministic across runs.

use thiserror::Error;

/// A point in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Element region tag: where the continuous or the discontinuous method applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Continuous,
    Discontinuous,
}

/// Face classification over the mesh skeleton.
///
/// `InteriorContinuous` faces sit between two continuous elements,
/// `InteriorDiscontinuous` between two discontinuous elements, and
/// `InterfaceJ` between one of each. Boundary faces take the tag of their
/// single neighbor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceKind {
    InteriorContinuous,
    InteriorDiscontinuous,
    InterfaceJ,
    BoundaryContinuous,
    BoundaryDiscontinuous,
}

impl FaceKind {
    pub fn is_boundary(&self) -> bool {
        matches!(
            self,
            FaceKind::BoundaryContinuous | FaceKind::BoundaryDiscontinuous
        )
    }

    /// True for faces belonging to the discontinuous part of the interior
    /// skeleton (interface faces included).
    pub fn is_discontinuous_skeleton(&self) -> bool {
        matches!(
            self,
            FaceKind::InteriorDiscontinuous | FaceKind::InterfaceJ
        )
    }
}

/// Inflow/outflow tag for boundary faces: inflow where `b . n <= 0`,
/// outflow where `b . n > 0`, decided at the face midpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowTag {
    Inflow,
    Outflow,
}

/// An axis-aligned rectangular element.
#[derive(Clone, Debug)]
pub struct ElementCell {
    pub id: usize,
    /// Corner vertex indices in counterclockwise order starting at the
    /// lower-left corner.
    pub vertex_ids: [usize; 4],
    pub region: Region,
    pub lower_corner: Point2,
    pub upper_corner: Point2,
    /// Element diameter: the diagonal length of the rectangle.
    pub diameter: f64,
}

impl ElementCell {
    pub fn centroid(&self) -> Point2 {
        Point2::new(
            0.5 * (self.lower_corner.x + self.upper_corner.x),
            0.5 * (self.lower_corner.y + self.upper_corner.y),
        )
    }

    pub fn extent(&self) -> (f64, f64) {
        (
            self.upper_corner.x - self.lower_corner.x,
            self.upper_corner.y - self.lower_corner.y,
        )
    }
}

/// A mesh edge with adjacency, orientation and classification data.
#[derive(Clone, Debug)]
pub struct Face {
    pub id: usize,
    /// Endpoint vertex indices, ordered by ascending coordinate along the face.
    pub vertex_ids: [usize; 2],
    pub plus_element: usize,
    /// Absent on boundary faces.
    pub minus_element: Option<usize>,
    /// Unit normal pointing out of `plus_element`; axis-aligned.
    pub normal: [f64; 2],
    /// Edge length.
    pub length: f64,
    pub kind: FaceKind,
    /// Present on boundary faces once `classify_boundary_flow` has run.
    pub flow: Option<FlowTag>,
}

impl Face {
    pub fn is_boundary(&self) -> bool {
        self.minus_element.is_none()
    }
}

/// One axis-aligned rectangle of a region specification, with per-edge
/// open/closed bounds so half-open region definitions round-trip exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct RectRegion {
    pub lower: Point2,
    pub upper: Point2,
    /// Whether the lower bound is included, per axis (x, y).
    pub lower_closed: [bool; 2],
    /// Whether the upper bound is included, per axis (x, y).
    pub upper_closed: [bool; 2],
}

impl RectRegion {
    /// Closed rectangle `[lower, upper] x [lower, upper]`.
    pub fn closed(lower: Point2, upper: Point2) -> Self {
        RectRegion {
            lower,
            upper,
            lower_closed: [true, true],
            upper_closed: [true, true],
        }
    }

    /// Half-open rectangle `[lower, upper) x [lower, upper)`.
    pub fn half_open(lower: Point2, upper: Point2) -> Self {
        RectRegion {
            lower,
            upper,
            lower_closed: [true, true],
            upper_closed: [false, false],
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        let lo = |v: f64, bound: f64, closed: bool| if closed { v >= bound } else { v > bound };
        let hi = |v: f64, bound: f64, closed: bool| if closed { v <= bound } else { v < bound };
        lo(p.x, self.lower.x, self.lower_closed[0])
            && hi(p.x, self.upper.x, self.upper_closed[0])
            && lo(p.y, self.lower.y, self.lower_closed[1])
            && hi(p.y, self.upper.y, self.upper_closed[1])
    }
}

/// The continuous region as a union of axis-aligned rectangles. Everything
/// outside is discontinuous; an empty union tags the whole mesh
/// discontinuous and a union covering the domain tags it continuous.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RegionSpec {
    pub rectangles: Vec<RectRegion>,
}

impl RegionSpec {
    pub fn new(rectangles: Vec<RectRegion>) -> Self {
        RegionSpec { rectangles }
    }

    /// Empty continuous region: every element becomes discontinuous.
    pub fn empty() -> Self {
        RegionSpec { rectangles: Vec::new() }
    }

    /// Continuous region covering the whole domain.
    pub fn whole(bounds: (Point2, Point2)) -> Self {
        RegionSpec {
            rectangles: vec![RectRegion::closed(bounds.0, bounds.1)],
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.rectangles.iter().any(|r| r.contains(p))
    }
}

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("mesh bounds are degenerate: ({0:?}, {1:?})")]
    DegenerateBounds(Point2, Point2),
    #[error("element counts must be at least 1, got nx={0}, ny={1}")]
    InvalidCounts(usize, usize),
    #[error("mesh bounds must be finite")]
    NonFiniteBounds,
}

/// Structured quadrilateral mesh with tagged elements and classified skeleton.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub bounds: (Point2, Point2),
    pub nx: usize,
    pub ny: usize,
    pub vertices: Vec<Point2>,
    pub elements: Vec<ElementCell>,
    pub faces: Vec<Face>,
}

impl Mesh {
    /// Build a structured `nx` x `ny` mesh of the rectangle spanned by
    /// `bounds`. All elements start tagged `Continuous`; faces carry
    /// geometry but no flow tags until `classify_boundary_flow` runs.
    pub fn structured(bounds: (Point2, Point2), nx: usize, ny: usize) -> Result<Mesh, MeshError> {
        let (lo, hi) = bounds;
        if !(lo.x.is_finite() && lo.y.is_finite() && hi.x.is_finite() && hi.y.is_finite()) {
            return Err(MeshError::NonFiniteBounds);
        }
        if hi.x <= lo.x || hi.y <= lo.y {
            return Err(MeshError::DegenerateBounds(lo, hi));
        }
        if nx == 0 || ny == 0 {
            return Err(MeshError::InvalidCounts(nx, ny));
        }

        let hx = (hi.x - lo.x) / nx as f64;
        let hy = (hi.y - lo.y) / ny as f64;

        let vid = |i: usize, j: usize| j * (nx + 1) + i;
        let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                vertices.push(Point2::new(lo.x + i as f64 * hx, lo.y + j as f64 * hy));
            }
        }

        let mut elements = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let lower = vertices[vid(i, j)];
                let upper = vertices[vid(i + 1, j + 1)];
                elements.push(ElementCell {
                    id: j * nx + i,
                    vertex_ids: [vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)],
                    region: Region::Continuous,
                    lower_corner: lower,
                    upper_corner: upper,
                    diameter: lower.distance(&upper),
                });
            }
        }

        let eid = |i: usize, j: usize| j * nx + i;
        let mut faces = Vec::with_capacity(nx * (ny + 1) + ny * (nx + 1));

        // Vertical faces on grid lines x = const: neighbors left/right.
        for j in 0..ny {
            for i in 0..=nx {
                let left = (i > 0).then(|| eid(i - 1, j));
                let right = (i < nx).then(|| eid(i, j));
                let (plus, minus, normal) = match (left, right) {
                    (Some(l), Some(r)) => (l, Some(r), [1.0, 0.0]),
                    (Some(l), None) => (l, None, [1.0, 0.0]),
                    (None, Some(r)) => (r, None, [-1.0, 0.0]),
                    (None, None) => unreachable!(),
                };
                faces.push(Face {
                    id: faces.len(),
                    vertex_ids: [vid(i, j), vid(i, j + 1)],
                    plus_element: plus,
                    minus_element: minus,
                    normal,
                    length: hy,
                    kind: FaceKind::InteriorContinuous,
                    flow: None,
                });
            }
        }

        // Horizontal faces on grid lines y = const: neighbors below/above.
        for j in 0..=ny {
            for i in 0..nx {
                let below = (j > 0).then(|| eid(i, j - 1));
                let above = (j < ny).then(|| eid(i, j));
                let (plus, minus, normal) = match (below, above) {
                    (Some(b), Some(a)) => (b, Some(a), [0.0, 1.0]),
                    (Some(b), None) => (b, None, [0.0, 1.0]),
                    (None, Some(a)) => (a, None, [0.0, -1.0]),
                    (None, None) => unreachable!(),
                };
                faces.push(Face {
                    id: faces.len(),
                    vertex_ids: [vid(i, j), vid(i + 1, j)],
                    plus_element: plus,
                    minus_element: minus,
                    normal,
                    length: hx,
                    kind: FaceKind::InteriorContinuous,
                    flow: None,
                });
            }
        }

        let mut mesh = Mesh {
            bounds,
            nx,
            ny,
            vertices,
            elements,
            faces,
        };
        // Default tagging: everything continuous.
        mesh.classify_regions(&RegionSpec::whole(bounds));
        Ok(mesh)
    }

    /// Tag each element by whether its centroid lies in the continuous
    /// region, then reclassify every face from the adjacent tags.
    /// Classification is idempotent for a fixed spec.
    pub fn classify_regions(&mut self, spec: &RegionSpec) {
        for elem in &mut self.elements {
            elem.region = if spec.contains(elem.centroid()) {
                Region::Continuous
            } else {
                Region::Discontinuous
            };
        }
        self.reclassify_faces();
    }

    fn reclassify_faces(&mut self) {
        for face in &mut self.faces {
            let plus = self.elements[face.plus_element].region;
            face.kind = match face.minus_element {
                Some(minus) => match (plus, self.elements[minus].region) {
                    (Region::Continuous, Region::Continuous) => FaceKind::InteriorContinuous,
                    (Region::Discontinuous, Region::Discontinuous) => {
                        FaceKind::InteriorDiscontinuous
                    }
                    _ => FaceKind::InterfaceJ,
                },
                None => match plus {
                    Region::Continuous => FaceKind::BoundaryContinuous,
                    Region::Discontinuous => FaceKind::BoundaryDiscontinuous,
                },
            };
        }
    }

    /// Tag every boundary face inflow or outflow from the sign of `b . n`
    /// at the face midpoint. For an advection field whose normal component
    /// changes sign along a face, the midpoint sign decides the whole face.
    pub fn classify_boundary_flow<F>(&mut self, advection: F)
    where
        F: Fn(Point2) -> [f64; 2],
    {
        for face in &mut self.faces {
            if !face.is_boundary() {
                face.flow = None;
                continue;
            }
            let a = self.vertices[face.vertex_ids[0]];
            let b = self.vertices[face.vertex_ids[1]];
            let mid = Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
            let vel = advection(mid);
            let bn = vel[0] * face.normal[0] + vel[1] * face.normal[1];
            face.flow = Some(if bn <= 0.0 {
                FlowTag::Inflow
            } else {
                FlowTag::Outflow
            });
        }
    }

    pub fn face_midpoint(&self, face: &Face) -> Point2 {
        let a = self.vertices[face.vertex_ids[0]];
        let b = self.vertices[face.vertex_ids[1]];
        Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))
    }

    /// Element extents, identical for every element of a structured mesh.
    pub fn spacing(&self) -> (f64, f64) {
        (
            (self.bounds.1.x - self.bounds.0.x) / self.nx as f64,
            (self.bounds.1.y - self.bounds.0.y) / self.ny as f64,
        )
    }

    /// Index of the element containing `p`, by floor division with clamping.
    /// Points on an interior grid line belong to the element on their
    /// upper-right side; points on the domain boundary are clamped inward.
    pub fn locate(&self, p: Point2) -> usize {
        let (hx, hy) = self.spacing();
        let i = (((p.x - self.bounds.0.x) / hx).floor() as isize).clamp(0, self.nx as isize - 1);
        let j = (((p.y - self.bounds.0.y) / hy).floor() as isize).clamp(0, self.ny as isize - 1);
        j as usize * self.nx + i as usize
    }

    pub fn count_regions(&self) -> (usize, usize) {
        let cont = self
            .elements
            .iter()
            .filter(|e| e.region == Region::Continuous)
            .count();
        (cont, self.elements.len() - cont)
    }

    pub fn count_face_kinds(&self) -> FaceKindCounts {
        let mut c = FaceKindCounts::default();
        for f in &self.faces {
            match f.kind {
                FaceKind::InteriorContinuous => c.interior_continuous += 1,
                FaceKind::InteriorDiscontinuous => c.interior_discontinuous += 1,
                FaceKind::InterfaceJ => c.interface += 1,
                FaceKind::BoundaryContinuous => c.boundary_continuous += 1,
                FaceKind::BoundaryDiscontinuous => c.boundary_discontinuous += 1,
            }
        }
        c
    }
}

/// Face counts per skeleton class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FaceKindCounts {
    pub interior_continuous: usize,
    pub interior_discontinuous: usize,
    pub interface: usize,
    pub boundary_continuous: usize,
    pub boundary_discontinuous: usize,
}

impl FaceKindCounts {
    pub fn total(&self) -> usize {
        self.interior_continuous
            + self.interior_discontinuous
            + self.interface
            + self.boundary_continuous
            + self.boundary_discontinuous
    }

    pub fn boundary(&self) -> usize {
        self.boundary_continuous + self.boundary_discontinuous
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square(n: usize) -> Mesh {
        Mesh::structured((Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)), n, n).unwrap()
    }

    /// Region of the first numerical example: continuous everywhere except
    /// one element layer along the top and right sides of the unit square.
    pub(crate) fn example1_region() -> RegionSpec {
        RegionSpec::new(vec![RectRegion::half_open(
            Point2::new(0.0, 0.0),
            Point2::new(31.0 / 32.0, 31.0 / 32.0),
        )])
    }

    #[test]
    fn single_cell_counts() {
        let mesh = unit_square(1);
        assert_eq!(mesh.elements.len(), 1);
        assert_eq!(mesh.vertices.len(), 4);
        assert_eq!(mesh.faces.len(), 4);
        assert!(mesh.faces.iter().all(|f| f.is_boundary()));
    }

    #[test]
    fn two_by_two_counts() {
        let mesh = unit_square(2);
        assert_eq!(mesh.elements.len(), 4);
        assert_eq!(mesh.vertices.len(), 9);
        assert_eq!(mesh.faces.len(), 12);
        let interior = mesh.faces.iter().filter(|f| !f.is_boundary()).count();
        assert_eq!(interior, 4);
        assert_eq!(mesh.faces.len() - interior, 8);
    }

    #[test]
    fn paper_grid_has_1024_elements() {
        let mesh = unit_square(32);
        assert_eq!(mesh.elements.len(), 1024);
    }

    #[test]
    fn face_count_formula_holds() {
        for (nx, ny) in [(1, 1), (2, 3), (5, 2), (7, 7)] {
            let mesh =
                Mesh::structured((Point2::new(0.0, 0.0), Point2::new(2.0, 1.0)), nx, ny).unwrap();
            assert_eq!(mesh.faces.len(), nx * (ny + 1) + ny * (nx + 1));
            assert_eq!(mesh.vertices.len(), (nx + 1) * (ny + 1));
        }
    }

    #[test]
    fn degenerate_inputs_rejected() {
        let p = Point2::new(0.0, 0.0);
        assert!(Mesh::structured((p, p), 1, 1).is_err());
        assert!(Mesh::structured((Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)), 1, 1).is_err());
        assert!(Mesh::structured((p, Point2::new(1.0, 1.0)), 0, 1).is_err());
        assert!(Mesh::structured((p, Point2::new(1.0, 1.0)), 1, 0).is_err());
    }

    #[test]
    fn example1_region_classification() {
        let mut mesh = unit_square(32);
        mesh.classify_regions(&example1_region());
        let (cont, disc) = mesh.count_regions();
        assert_eq!(cont, 961);
        assert_eq!(disc, 63);
        let counts = mesh.count_face_kinds();
        assert_eq!(counts.interface, 62);
    }

    #[test]
    fn whole_domain_region_is_pure_continuous() {
        let mut mesh = unit_square(4);
        mesh.classify_regions(&RegionSpec::whole(mesh.bounds));
        let (cont, disc) = mesh.count_regions();
        assert_eq!(cont, 16);
        assert_eq!(disc, 0);
        assert!(mesh.faces.iter().all(|f| matches!(
            f.kind,
            FaceKind::InteriorContinuous | FaceKind::BoundaryContinuous
        )));
    }

    #[test]
    fn empty_region_is_pure_discontinuous() {
        let mut mesh = unit_square(3);
        mesh.classify_regions(&RegionSpec::empty());
        let (cont, disc) = mesh.count_regions();
        assert_eq!(cont, 0);
        assert_eq!(disc, 9);
    }

    #[test]
    fn example2_band_classification() {
        let mut mesh =
            Mesh::structured((Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0)), 32, 32).unwrap();
        // Continuous off a band of half-width one element around x = 0.
        let spec = RegionSpec::new(vec![
            RectRegion {
                lower: Point2::new(-1.0, -1.0),
                upper: Point2::new(-0.0625, 1.0),
                lower_closed: [true, true],
                upper_closed: [false, true],
            },
            RectRegion {
                lower: Point2::new(0.0625, -1.0),
                upper: Point2::new(1.0, 1.0),
                lower_closed: [false, true],
                upper_closed: [true, true],
            },
        ]);
        mesh.classify_regions(&spec);
        let (_, disc) = mesh.count_regions();
        assert_eq!(disc, 64);
    }

    #[test]
    fn boundary_flow_constant_field() {
        let mut mesh = unit_square(2);
        mesh.classify_boundary_flow(|_| [1.0, 1.0]);
        for face in &mesh.faces {
            if !face.is_boundary() {
                assert!(face.flow.is_none());
                continue;
            }
            let bn = face.normal[0] + face.normal[1];
            let expected = if bn <= 0.0 { FlowTag::Inflow } else { FlowTag::Outflow };
            assert_eq!(face.flow, Some(expected));
        }
        // Bottom face: n = (0,-1), b.n = -1 -> inflow; right face: n = (1,0) -> outflow.
        let bottom = mesh
            .faces
            .iter()
            .find(|f| f.is_boundary() && f.normal == [0.0, -1.0])
            .unwrap();
        assert_eq!(bottom.flow, Some(FlowTag::Inflow));
        let right = mesh
            .faces
            .iter()
            .find(|f| f.is_boundary() && f.normal == [1.0, 0.0])
            .unwrap();
        assert_eq!(right.flow, Some(FlowTag::Outflow));
    }

    #[test]
    fn boundary_flow_rotational_field() {
        let mut mesh =
            Mesh::structured((Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0)), 4, 4).unwrap();
        mesh.classify_boundary_flow(|p| [-p.x, p.y]);
        for face in &mesh.faces {
            let Some(flow) = face.flow else { continue };
            if face.normal[0] != 0.0 {
                // Side walls x = +-1: b.n = -x*nx = -1 everywhere.
                assert_eq!(flow, FlowTag::Inflow);
            } else {
                // Top and bottom y = +-1: b.n = y*ny = 1 everywhere.
                assert_eq!(flow, FlowTag::Outflow);
            }
        }
    }

    #[test]
    fn flow_tags_partition_boundary() {
        let mut mesh = unit_square(3);
        mesh.classify_boundary_flow(|p| [p.y - 0.5, 0.3]);
        for face in &mesh.faces {
            assert_eq!(face.flow.is_some(), face.is_boundary());
        }
    }

    #[test]
    fn interface_faces_have_mixed_neighbors() {
        let mut mesh = unit_square(32);
        mesh.classify_regions(&example1_region());
        for face in &mesh.faces {
            if face.kind == FaceKind::InterfaceJ {
                let a = mesh.elements[face.plus_element].region;
                let b = mesh.elements[face.minus_element.unwrap()].region;
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn normal_points_from_plus_to_minus() {
        let mesh = unit_square(4);
        for face in &mesh.faces {
            let plus_c = mesh.elements[face.plus_element].centroid();
            match face.minus_element {
                Some(minus) => {
                    let minus_c = mesh.elements[minus].centroid();
                    let d = [minus_c.x - plus_c.x, minus_c.y - plus_c.y];
                    assert!(face.normal[0] * d[0] + face.normal[1] * d[1] > 0.0);
                    assert!(face.plus_element < minus);
                }
                None => {
                    let mid = mesh.face_midpoint(face);
                    let d = [mid.x - plus_c.x, mid.y - plus_c.y];
                    assert!(face.normal[0] * d[0] + face.normal[1] * d[1] > 0.0);
                }
            }
            let norm = face.normal[0].hypot(face.normal[1]);
            assert!((norm - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn classification_is_idempotent() {
        let mut mesh = unit_square(8);
        let spec = RegionSpec::new(vec![RectRegion::half_open(
            Point2::new(0.0, 0.0),
            Point2::new(0.6, 0.8),
        )]);
        mesh.classify_regions(&spec);
        let kinds: Vec<FaceKind> = mesh.faces.iter().map(|f| f.kind).collect();
        let regions: Vec<Region> = mesh.elements.iter().map(|e| e.region).collect();
        mesh.classify_regions(&spec);
        assert_eq!(kinds, mesh.faces.iter().map(|f| f.kind).collect::<Vec<_>>());
        assert_eq!(
            regions,
            mesh.elements.iter().map(|e| e.region).collect::<Vec<_>>()
        );
    }

    #[test]
    fn locate_points() {
        let mesh = unit_square(4);
        assert_eq!(mesh.locate(Point2::new(0.1, 0.1)), 0);
        assert_eq!(mesh.locate(Point2::new(0.9, 0.9)), 15);
        // Interior grid line: upper-right element wins.
        assert_eq!(mesh.locate(Point2::new(0.25, 0.1)), 1);
        // Domain boundary: clamped inward.
        assert_eq!(mesh.locate(Point2::new(1.0, 1.0)), 15);
    }

    proptest::proptest! {
        #[test]
        fn skeleton_partition_property(
            nx in 1usize..10,
            ny in 1usize..10,
            x0 in 0.0f64..0.5,
            y0 in 0.0f64..0.5,
            w in 0.1f64..1.0,
            h in 0.1f64..1.0,
        ) {
            let mut mesh = Mesh::structured(
                (Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)), nx, ny).unwrap();
            let spec = RegionSpec::new(vec![RectRegion::half_open(
                Point2::new(x0, y0),
                Point2::new((x0 + w).min(1.0), (y0 + h).min(1.0)),
            )]);
            mesh.classify_regions(&spec);
            let counts = mesh.count_face_kinds();
            proptest::prop_assert_eq!(counts.total(), mesh.faces.len());
            proptest::prop_assert_eq!(counts.boundary(), 2 * nx + 2 * ny);
            for face in &mesh.faces {
                if face.kind == FaceKind::InterfaceJ {
                    let a = mesh.elements[face.plus_element].region;
                    let b = mesh.elements[face.minus_element.unwrap()].region;
                    proptest::prop_assert_ne!(a, b);
                }
            }
        }
    }
}
