//! Strictly convex polygons and their quality measurements.
//!
//! [`Polygon`] enforces counterclockwise orientation, strict convexity and
//! distinct vertices at construction; everything else in the crate builds on
//! those invariants. Measurements exposed here: diameter, inscribed-ball
//! diameter (via the Chebyshev center), interior angles, and the aggregate
//! [`GeometricReport`] with threshold verdicts for the four element-quality
//! conditions (bounded aspect ratio, minimum edge length, minimum and maximum
//! angle).

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Strict-convexity tolerance for cross products, relative to diam².
pub const EPS_CONVEX_REL: f64 = 1e-12;
/// Tolerance of the inscribed-ball solver, relative to diam.
pub const EPS_LP_REL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertex(usize, usize),
    #[error("polygon is not strictly convex at vertex {0}")]
    NonConvex(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFiniteVertex(usize),
    #[error("affine map is singular")]
    SingularMap,
    #[error("invalid threshold: {0}")]
    InvalidThreshold(&'static str),
}

/// A point of the plane; also used as a 2-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product `self × o`.
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }

    /// Counterclockwise perpendicular `(-y, x)`.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point2 {
    type Output = Point2;
    fn div(self, s: f64) -> Point2 {
        Point2::new(self.x / s, self.y / s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

// Points serialize as `[x, y]` pairs so vertex lists read naturally in JSON.
impl Serialize for Point2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.x)?;
        t.serialize_element(&self.y)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Point2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[f64; 2]>::deserialize(d)?;
        if !(x.is_finite() && y.is_finite()) {
            return Err(D::Error::custom("non-finite coordinate"));
        }
        Ok(Point2::new(x, y))
    }
}

/// Affine map `x ↦ L·x + t` with a 2×2 linear part in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub linear: [[f64; 2]; 2],
    pub translation: Point2,
}

impl AffineMap {
    pub fn new(linear: [[f64; 2]; 2], translation: Point2) -> Self {
        Self {
            linear,
            translation,
        }
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new([[c, -s], [s, c]], Point2::new(0.0, 0.0))
    }

    pub fn uniform_scale(h: f64) -> Self {
        Self::new([[h, 0.0], [0.0, h]], Point2::new(0.0, 0.0))
    }

    pub fn translation(t: Point2) -> Self {
        Self::new([[1.0, 0.0], [0.0, 1.0]], t)
    }

    pub fn det(&self) -> f64 {
        self.linear[0][0] * self.linear[1][1] - self.linear[0][1] * self.linear[1][0]
    }

    /// Invertibility test, scale-aware: |det| must exceed 1e-12 times the
    /// squared magnitude of the largest entry.
    pub fn is_invertible(&self) -> bool {
        let scale = self
            .linear
            .iter()
            .flatten()
            .fold(0.0_f64, |m, &v| m.max(v.abs()));
        scale > 0.0 && self.det().abs() > 1e-12 * scale * scale
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.linear[0][0] * p.x + self.linear[0][1] * p.y + self.translation.x,
            self.linear[1][0] * p.x + self.linear[1][1] * p.y + self.translation.y,
        )
    }
}

/// A validated, strictly convex polygon with counterclockwise vertices.
///
/// Index arithmetic is cyclic throughout the crate: the predecessor of
/// vertex 0 is vertex n-1 and the successor of vertex n-1 is vertex 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    /// Validates a vertex list into a polygon.
    ///
    /// Clockwise input is reversed rather than rejected. Strict convexity is
    /// tested with cross products against `EPS_CONVEX_REL · diam²`, so the
    /// degeneracy threshold follows the polygon's own scale.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(GeometryError::NonFiniteVertex(i));
            }
        }
        let diam = max_pairwise_distance(&vertices);
        let eps = EPS_CONVEX_REL * diam * diam;
        for i in 0..n {
            for j in (i + 1)..n {
                if (vertices[i] - vertices[j]).norm_sq() <= eps {
                    return Err(GeometryError::DuplicateVertex(i, j));
                }
            }
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if (b - a).cross(c - b) <= eps {
                return Err(GeometryError::NonConvex((i + 1) % n));
            }
        }
        Ok(Self { vertices })
    }

    /// Axis-aligned rectangle `[0,w] × [0,h]`.
    pub fn rectangle(w: f64, h: f64) -> Result<Self, GeometryError> {
        Self::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(w, 0.0),
            Point2::new(w, h),
            Point2::new(0.0, h),
        ])
    }

    /// Axis-aligned square `[0,h]²`.
    pub fn square(h: f64) -> Result<Self, GeometryError> {
        Self::rectangle(h, h)
    }

    /// Regular n-gon with circumradius `radius`, centered at the origin.
    pub fn regular(n: usize, radius: f64) -> Result<Self, GeometryError> {
        let verts = (0..n)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / n as f64;
                Point2::new(radius * theta.cos(), radius * theta.sin())
            })
            .collect();
        Self::new(verts)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Cyclic vertex access.
    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i % self.vertices.len()]
    }

    /// Positive area by the shoelace formula.
    pub fn area(&self) -> f64 {
        0.5 * signed_area(&self.vertices)
    }

    /// Arithmetic mean of the vertices; interior by convexity.
    pub fn centroid(&self) -> Point2 {
        let sum = self
            .vertices
            .iter()
            .fold(Point2::new(0.0, 0.0), |acc, &v| acc + v);
        sum / self.vertices.len() as f64
    }

    /// Largest pairwise vertex distance. Convexity makes vertex pairs
    /// sufficient, and n stays small here, so the O(n²) scan is fine.
    pub fn diameter(&self) -> f64 {
        max_pairwise_distance(&self.vertices)
    }

    /// Smallest pairwise vertex distance.
    pub fn min_vertex_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                best = best.min(self.vertices[i].dist(self.vertices[j]));
            }
        }
        best
    }

    /// Signed distance from `p` to the boundary: the minimum over edges of
    /// the inward distance to the edge line. Positive strictly inside,
    /// negative outside.
    pub fn boundary_distance(&self, p: Point2) -> f64 {
        let n = self.vertices.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let a = self.vertices[i];
            let e = self.vertices[(i + 1) % n] - a;
            best = best.min(e.cross(p - a) / e.norm());
        }
        best
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.boundary_distance(p) >= -tol
    }

    /// Chebyshev center: the interior point maximizing the distance to the
    /// boundary, together with that distance (the inradius).
    ///
    /// The maximizer solves a linear program in (cx, cy, r); its optimum is
    /// attained where three edge constraints are active, so we enumerate all
    /// edge triples, intersect their bisector planes, and keep the candidate
    /// center with the largest inward distance. The centroid seeds the search
    /// so the result is always feasible.
    pub fn chebyshev_center(&self) -> (Point2, f64) {
        let n = self.vertices.len();
        let mut normals = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.vertices[i];
            let e = self.vertices[(i + 1) % n] - a;
            let nh = e.perp() / e.norm();
            normals.push(nh);
            offsets.push(nh.dot(a));
        }
        let inward = |c: Point2| {
            normals
                .iter()
                .zip(&offsets)
                .map(|(nh, off)| nh.dot(c) - off)
                .fold(f64::INFINITY, f64::min)
        };

        let mut best_c = self.centroid();
        let mut best_r = inward(best_c);
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let a = [
                        [normals[i].x, normals[i].y, -1.0],
                        [normals[j].x, normals[j].y, -1.0],
                        [normals[k].x, normals[k].y, -1.0],
                    ];
                    let rhs = [offsets[i], offsets[j], offsets[k]];
                    if let Some([cx, cy, _]) = solve3(a, rhs) {
                        let c = Point2::new(cx, cy);
                        let r = inward(c);
                        if r > best_r {
                            best_c = c;
                            best_r = r;
                        }
                    }
                }
            }
        }
        (best_c, best_r)
    }

    /// Diameter of the largest inscribed ball, 2·inradius.
    pub fn inscribed_ball_diameter(&self) -> f64 {
        2.0 * self.chebyshev_center().1
    }

    /// Interior angles per vertex, each in (0, π).
    ///
    /// Computed from atan2 of cross/dot of the two edge vectors leaving the
    /// vertex; this stays accurate where acos would cancel, near 0 and π.
    pub fn interior_angles(&self) -> Vec<f64> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let v = self.vertices[i];
                let to_prev = self.vertices[(i + n - 1) % n] - v;
                let to_next = self.vertices[(i + 1) % n] - v;
                to_next.cross(to_prev).atan2(to_next.dot(to_prev))
            })
            .collect()
    }

    /// All quality metrics in one pass.
    pub fn quality_report(&self) -> GeometricReport {
        let diam = self.diameter();
        let rho = self.inscribed_ball_diameter();
        let angles = self.interior_angles();
        let psi_max = angles.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let psi_min = angles.iter().cloned().fold(f64::INFINITY, f64::min);
        GeometricReport {
            diam,
            rho,
            sigma: diam / rho,
            d_m: self.min_vertex_distance() / diam,
            psi_max,
            psi_min,
            angles,
        }
    }

    /// Maps every vertex and re-validates; orientation flips are corrected
    /// by the constructor.
    pub fn apply_affine(&self, m: &AffineMap) -> Result<Polygon, GeometryError> {
        if !m.is_invertible() {
            return Err(GeometryError::SingularMap);
        }
        Polygon::new(self.vertices.iter().map(|&v| m.apply(v)).collect())
    }
}

fn max_pairwise_distance(vertices: &[Point2]) -> f64 {
    let mut best = 0.0_f64;
    for i in 0..vertices.len() {
        for j in (i + 1)..vertices.len() {
            best = best.max(vertices[i].dist(vertices[j]));
        }
    }
    best
}

/// Twice the signed area; positive for counterclockwise order.
fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        s += vertices[i].cross(vertices[(i + 1) % n]);
    }
    s
}

/// Solves a 3×3 linear system by Cramer's rule; `None` when near singular.
fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = det3(a);
    if det.abs() < 1e-14 {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut m = a;
        for row in 0..3 {
            m[row][col] = b[row];
        }
        *slot = det3(m) / det;
    }
    Some(out)
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Measured quality metrics of one polygon.
///
/// `sigma = diam/rho` is the aspect ratio; `d_m` the smallest pairwise vertex
/// distance relative to the diameter; `psi_M`/`psi_m` the extreme interior
/// angles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometricReport {
    pub diam: f64,
    pub rho: f64,
    pub sigma: f64,
    pub d_m: f64,
    #[serde(rename = "psi_M")]
    pub psi_max: f64,
    #[serde(rename = "psi_m")]
    pub psi_min: f64,
    pub angles: Vec<f64>,
}

/// Thresholds for the four quality conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionThresholds {
    /// Aspect ratio cap σ̄.
    #[serde(rename = "sigma")]
    pub sigma_max: f64,
    /// Relative minimum vertex distance floor d̄_m.
    #[serde(rename = "d_m")]
    pub d_m_min: f64,
    /// Minimum interior angle floor ψ̄_m.
    #[serde(rename = "psi_m")]
    pub psi_min: f64,
    /// Maximum interior angle cap ψ̄_M, strictly below π.
    #[serde(rename = "psi_M")]
    pub psi_max: f64,
}

/// Literal inequality tests of a report against thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub barp_holds: bool,
    pub melp_holds: bool,
    pub mac_holds: bool,
    #[serde(rename = "MAC_holds")]
    pub max_angle_holds: bool,
}

/// Evaluates the four condition inequalities against `thresholds`.
pub fn check_conditions(
    report: &GeometricReport,
    thresholds: &ConditionThresholds,
) -> Result<ConditionVerdict, GeometryError> {
    if !(thresholds.sigma_max > 0.0) {
        return Err(GeometryError::InvalidThreshold("sigma must be positive"));
    }
    if !(thresholds.d_m_min > 0.0) {
        return Err(GeometryError::InvalidThreshold("d_m must be positive"));
    }
    if !(thresholds.psi_min > 0.0) {
        return Err(GeometryError::InvalidThreshold("psi_m must be positive"));
    }
    if !(thresholds.psi_max > 0.0 && thresholds.psi_max < std::f64::consts::PI) {
        return Err(GeometryError::InvalidThreshold(
            "psi_M must lie in (0, pi)",
        ));
    }
    Ok(ConditionVerdict {
        barp_holds: report.sigma <= thresholds.sigma_max,
        melp_holds: report.d_m >= thresholds.d_m_min,
        mac_holds: report.psi_min >= thresholds.psi_min,
        max_angle_holds: report.psi_max <= thresholds.psi_max,
    })
}
