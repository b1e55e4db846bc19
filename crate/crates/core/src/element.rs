//! Reference element machinery: Gauss-Legendre quadrature, tensor-product
//! Lagrange bases on the unit square, and the affine map to physical cells.
//!
//! Everything lives on the reference square `[0,1]^2`. Basis functions are
//! the equispaced Lagrange polynomials of degree `k` per direction (the
//! `Q_k` family, `k = 1..=3`), with nodes numbered lexicographically: node
//! `(a, b)` has index `b*(k+1) + a` and sits at `(a/k, b/k)`.

use crate::mesh::{ElementCell, Point2};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ElementError {
    #[error("polynomial degree must be between 1 and 3, got {0}")]
    UnsupportedDegree(usize),
    #[error("quadrature point count must be between 1 and 10, got {0}")]
    UnsupportedQuadrature(usize),
}

/// One-dimensional Gauss-Legendre rule on `[0, 1]`, exact for polynomials
/// of degree `2n - 1`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `n` points, `1 <= n <= 10`. Nodes are the roots of the
    /// Legendre polynomial `P_n`, found by Newton iteration from the
    /// Chebyshev-based initial guess, then mapped from `[-1,1]` to `[0,1]`.
    pub fn new(n: usize) -> Result<GaussLegendre, ElementError> {
        if n == 0 || n > 10 {
            return Err(ElementError::UnsupportedQuadrature(n));
        }
        let mut points = vec![0.0; n];
        let mut weights = vec![0.0; n];
        // Roots come in symmetric pairs; solve for the lower half.
        for i in 0..(n + 1) / 2 {
            let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            points[i] = 0.5 * (x + 1.0);
            weights[i] = 0.5 * w;
            points[n - 1 - i] = 0.5 * (1.0 - x);
            weights[n - 1 - i] = 0.5 * w;
        }
        Ok(GaussLegendre { points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Value and derivative of the Legendre polynomial `P_n` at `x` on `[-1,1]`,
/// by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for m in 2..=n {
        let p2 = ((2 * m - 1) as f64 * x * p1 - (m - 1) as f64 * p0) / m as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor-product quadrature on the reference square: the 1D rule applied
/// per direction.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn tensor(rule: &GaussLegendre) -> QuadratureRule {
        let n = rule.len();
        let mut points = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                points.push([rule.points[i], rule.points[j]]);
                weights.push(rule.weights[i] * rule.weights[j]);
            }
        }
        QuadratureRule { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Equispaced Lagrange basis of degree `k` on `[0,1]`, evaluated via the
/// barycentric-free product formula (small `k`, so stability is not a
/// concern).
fn lagrange_1d(k: usize, node: usize, x: f64) -> f64 {
    let mut v = 1.0;
    let xn = node as f64 / k as f64;
    for m in 0..=k {
        if m == node {
            continue;
        }
        let xm = m as f64 / k as f64;
        v *= (x - xm) / (xn - xm);
    }
    v
}

fn lagrange_1d_deriv(k: usize, node: usize, x: f64) -> f64 {
    let xn = node as f64 / k as f64;
    let mut sum = 0.0;
    for l in 0..=k {
        if l == node {
            continue;
        }
        let xl = l as f64 / k as f64;
        let mut term = 1.0 / (xn - xl);
        for m in 0..=k {
            if m == node || m == l {
                continue;
            }
            let xm = m as f64 / k as f64;
            term *= (x - xm) / (xn - xm);
        }
        sum += term;
    }
    sum
}

/// Scalar `Q_k` basis on the reference square.
#[derive(Clone, Debug)]
pub struct LagrangeBasis {
    pub degree: usize,
}

impl LagrangeBasis {
    pub fn new(degree: usize) -> Result<LagrangeBasis, ElementError> {
        if degree == 0 || degree > 3 {
            return Err(ElementError::UnsupportedDegree(degree));
        }
        Ok(LagrangeBasis { degree })
    }

    /// Number of basis functions, `(k+1)^2`.
    pub fn len(&self) -> usize {
        (self.degree + 1) * (self.degree + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Reference coordinates of node `idx`.
    pub fn node(&self, idx: usize) -> [f64; 2] {
        let k = self.degree;
        let a = idx % (k + 1);
        let b = idx / (k + 1);
        [a as f64 / k as f64, b as f64 / k as f64]
    }

    pub fn eval(&self, idx: usize, p: [f64; 2]) -> f64 {
        let k = self.degree;
        let a = idx % (k + 1);
        let b = idx / (k + 1);
        lagrange_1d(k, a, p[0]) * lagrange_1d(k, b, p[1])
    }

    /// Gradient in reference coordinates.
    pub fn grad(&self, idx: usize, p: [f64; 2]) -> [f64; 2] {
        let k = self.degree;
        let a = idx % (k + 1);
        let b = idx / (k + 1);
        [
            lagrange_1d_deriv(k, a, p[0]) * lagrange_1d(k, b, p[1]),
            lagrange_1d(k, a, p[0]) * lagrange_1d_deriv(k, b, p[1]),
        ]
    }

    /// Evaluate every basis function at `p`.
    pub fn eval_all(&self, p: [f64; 2]) -> Vec<f64> {
        (0..self.len()).map(|i| self.eval(i, p)).collect()
    }

    /// Evaluate every reference gradient at `p`.
    pub fn grad_all(&self, p: [f64; 2]) -> Vec<[f64; 2]> {
        (0..self.len()).map(|i| self.grad(i, p)).collect()
    }
}

/// Affine map between the reference square and an axis-aligned physical
/// cell. The Jacobian is the diagonal `(dx, dy)`, so gradients transform
/// by componentwise division.
#[derive(Clone, Copy, Debug)]
pub struct CellGeometry {
    pub lower: Point2,
    pub dx: f64,
    pub dy: f64,
}

impl CellGeometry {
    pub fn from_element(elem: &ElementCell) -> CellGeometry {
        let (dx, dy) = elem.extent();
        CellGeometry {
            lower: elem.lower_corner,
            dx,
            dy,
        }
    }

    pub fn map_point(&self, r: [f64; 2]) -> Point2 {
        Point2::new(self.lower.x + r[0] * self.dx, self.lower.y + r[1] * self.dy)
    }

    /// Pull a physical point back to reference coordinates.
    pub fn unmap_point(&self, p: Point2) -> [f64; 2] {
        [(p.x - self.lower.x) / self.dx, (p.y - self.lower.y) / self.dy]
    }

    /// Push a reference gradient forward to a physical gradient.
    pub fn map_gradient(&self, g: [f64; 2]) -> [f64; 2] {
        [g[0] / self.dx, g[1] / self.dy]
    }

    pub fn jacobian_det(&self) -> f64 {
        self.dx * self.dy
    }
}
