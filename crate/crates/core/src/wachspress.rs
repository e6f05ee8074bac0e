//! Wachspress basis functions on strictly convex polygons.
//!
//! The canonical evaluator is the area-product form
//! `w_i(x) = B_i · Π_{j∉{i,i-1}} A_j(x)`, a polynomial that is finite on the
//! whole closed polygon and interpolates exactly at vertices. The rational
//! cotangent form is provided as an independent route for strictly interior
//! points; both normalize to the same coordinates. Gradients are analytic,
//! obtained by the product rule over the affine triangle areas.
//!
//! Evaluation runs on a copy of the polygon rescaled to unit diameter: the
//! coordinates are invariant under that similarity, and the rescaling keeps
//! the (n-2)-fold area products away from overflow and underflow.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Point2, Polygon};

/// Interior margin for the cotangent form and gradients, relative to diam.
pub const EPS_INT_REL: f64 = 1e-10;
/// Outside tolerance for closure membership, relative to diam².
pub const EPS_OUTSIDE_REL: f64 = 1e-12;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum WachspressError {
    #[error("point lies outside the polygon (negative area against edge {edge})")]
    OutsidePolygon { edge: usize },
    #[error("point is within {distance:e} of the boundary; form requires a strictly interior point")]
    BoundaryPoint { distance: f64 },
    #[error("weight normalization degenerated (non-positive weight sum)")]
    DegenerateNormalization,
}

/// Which algebraic route computes the weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// Area-product weights; defined on the closed polygon.
    Area,
    /// Cotangent weights; strictly interior points only.
    Cotangent,
}

/// Signed triangle areas entering the weight products, in original units.
///
/// `a[i]` is the area of the triangle (x, v_i, v_{i+1}), positive for
/// interior x; `b[i]` the area of (v_{i-1}, v_i, v_{i+1}); `grad_a[i]` the
/// constant gradient of `a[i]`, exactly `perp(v_{i+1} - v_i) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleAreas {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub grad_a: Vec<Point2>,
}

/// One basis evaluation at a query point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisEvaluation {
    pub point: Point2,
    pub weights: Vec<f64>,
    pub coords: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grads: Option<Vec<Point2>>,
}

/// Per-polygon evaluator with the immutable precomputed tables
/// (rescaled vertices, `B_i`, `∇A_i`, edge data).
#[derive(Debug, Clone)]
pub struct WachspressEvaluator {
    verts: Vec<Point2>,
    scaled: Vec<Point2>,
    center: Point2,
    diam: f64,
    b_scaled: Vec<f64>,
    grad_a_scaled: Vec<Point2>,
    edge_normal: Vec<Point2>,
    edge_offset: Vec<f64>,
}

impl WachspressEvaluator {
    pub fn new(polygon: &Polygon) -> Self {
        let verts = polygon.vertices().to_vec();
        let n = verts.len();
        let center = polygon.centroid();
        let diam = polygon.diameter();
        let scaled: Vec<Point2> = verts.iter().map(|&v| (v - center) / diam).collect();
        let mut b_scaled = Vec::with_capacity(n);
        let mut grad_a_scaled = Vec::with_capacity(n);
        let mut edge_normal = Vec::with_capacity(n);
        let mut edge_offset = Vec::with_capacity(n);
        for i in 0..n {
            let prev = scaled[(i + n - 1) % n];
            let cur = scaled[i];
            let next = scaled[(i + 1) % n];
            b_scaled.push(0.5 * (cur - prev).cross(next - prev));
            let e = next - cur;
            grad_a_scaled.push(e.perp() * 0.5);
            let nh = e.perp() / e.norm();
            edge_normal.push(nh);
            edge_offset.push(nh.dot(cur));
        }
        Self {
            verts,
            scaled,
            center,
            diam,
            b_scaled,
            grad_a_scaled,
            edge_normal,
            edge_offset,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn diameter(&self) -> f64 {
        self.diam
    }

    fn to_scaled(&self, x: Point2) -> Point2 {
        (x - self.center) / self.diam
    }

    /// Signed boundary distance in scaled (unit-diameter) units.
    fn boundary_distance_scaled(&self, xs: Point2) -> f64 {
        self.edge_normal
            .iter()
            .zip(&self.edge_offset)
            .map(|(nh, off)| nh.dot(xs) - off)
            .fold(f64::INFINITY, f64::min)
    }

    fn areas_scaled(&self, xs: Point2) -> Vec<f64> {
        let n = self.scaled.len();
        (0..n)
            .map(|i| 0.5 * (self.scaled[i] - xs).cross(self.scaled[(i + 1) % n] - xs))
            .collect()
    }

    /// Triangle areas in original units.
    pub fn triangle_areas(&self, x: Point2) -> TriangleAreas {
        let n = self.verts.len();
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        let mut grad_a = Vec::with_capacity(n);
        for i in 0..n {
            let prev = self.verts[(i + n - 1) % n];
            let cur = self.verts[i];
            let next = self.verts[(i + 1) % n];
            a.push(0.5 * (cur - x).cross(next - x));
            b.push(0.5 * (cur - prev).cross(next - prev));
            grad_a.push((next - cur).perp() * 0.5);
        }
        TriangleAreas { a, b, grad_a }
    }

    fn weights_scaled(&self, areas: &[f64]) -> Vec<f64> {
        let n = areas.len();
        let mut w = Vec::with_capacity(n);
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let mut wi = self.b_scaled[i];
            for (j, &aj) in areas.iter().enumerate() {
                if j != i && j != prev {
                    wi *= aj;
                }
            }
            w.push(wi);
        }
        w
    }

    /// Area-product weights in original units. The point must lie in the
    /// closed polygon up to the scaled outside tolerance.
    pub fn weights(&self, x: Point2) -> Result<Vec<f64>, WachspressError> {
        let areas = self.areas_scaled(self.to_scaled(x));
        if let Some(edge) = areas.iter().position(|&a| a < -EPS_OUTSIDE_REL) {
            return Err(WachspressError::OutsidePolygon { edge });
        }
        let unit = self.diam.powi(2 * (self.verts.len() as i32 - 1));
        Ok(self
            .weights_scaled(&areas)
            .into_iter()
            .map(|w| w * unit)
            .collect())
    }

    /// Cotangent-form weights, computed from cross and dot products without
    /// extracting angles. Singular at vertices, hence interior-only.
    pub fn weights_cotangent(&self, x: Point2) -> Result<Vec<f64>, WachspressError> {
        self.require_interior(x)?;
        let n = self.verts.len();
        let mut w = Vec::with_capacity(n);
        for i in 0..n {
            let v = self.verts[i];
            let d = x - v;
            let e_next = self.verts[(i + 1) % n] - v;
            let e_prev = self.verts[(i + n - 1) % n] - v;
            let cot_alpha = d.dot(e_next) / e_next.cross(d);
            let cot_delta = d.dot(e_prev) / d.cross(e_prev);
            w.push((cot_alpha + cot_delta) / d.norm_sq());
        }
        Ok(w)
    }

    fn require_interior(&self, x: Point2) -> Result<(), WachspressError> {
        let dist = self.boundary_distance_scaled(self.to_scaled(x));
        if dist <= EPS_INT_REL {
            return Err(WachspressError::BoundaryPoint {
                distance: dist * self.diam,
            });
        }
        Ok(())
    }

    /// Normalized coordinates through either form.
    pub fn coordinates(&self, x: Point2, form: Form) -> Result<BasisEvaluation, WachspressError> {
        let weights = match form {
            Form::Area => self.weights(x)?,
            Form::Cotangent => self.weights_cotangent(x)?,
        };
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) {
            return Err(WachspressError::DegenerateNormalization);
        }
        let coords = weights.iter().map(|w| w / sum).collect();
        Ok(BasisEvaluation {
            point: x,
            weights,
            coords,
            grads: None,
        })
    }

    /// Analytic coordinate gradients at a strictly interior point.
    pub fn gradients(&self, x: Point2) -> Result<Vec<Point2>, WachspressError> {
        self.require_interior(x)?;
        let (_, grads) = self.coords_and_grads_unchecked(x);
        Ok(grads)
    }

    /// Coordinates and gradients without the interior-margin check.
    ///
    /// The rational expressions are well defined on the closed polygon away
    /// from vertices; quadrature nodes always satisfy that, so the hot path
    /// skips the guard.
    pub(crate) fn coords_and_grads_unchecked(&self, x: Point2) -> (Vec<f64>, Vec<Point2>) {
        let xs = self.to_scaled(x);
        let areas = self.areas_scaled(xs);
        let n = areas.len();
        let m = n - 2;
        let mut w = vec![0.0; n];
        let mut gw = vec![Point2::new(0.0, 0.0); n];
        let mut idx: Vec<usize> = Vec::with_capacity(m);
        let mut pre: Vec<f64> = Vec::with_capacity(m + 1);
        let mut suf: Vec<f64> = vec![0.0; m + 1];
        for i in 0..n {
            let prev = (i + n - 1) % n;
            idx.clear();
            idx.extend((0..n).filter(|&j| j != i && j != prev));
            // Prefix/suffix products give every leave-one-out product in O(m)
            // without divisions, so vanishing areas on the boundary are safe.
            pre.clear();
            pre.push(1.0);
            for t in 0..m {
                let last = pre[t];
                pre.push(last * areas[idx[t]]);
            }
            suf[m] = 1.0;
            for t in (0..m).rev() {
                suf[t] = suf[t + 1] * areas[idx[t]];
            }
            w[i] = self.b_scaled[i] * pre[m];
            let mut g = Point2::new(0.0, 0.0);
            for t in 0..m {
                g = g + self.grad_a_scaled[idx[t]] * (pre[t] * suf[t + 1]);
            }
            gw[i] = g * self.b_scaled[i];
        }
        let sum: f64 = w.iter().sum();
        let gsum = gw
            .iter()
            .fold(Point2::new(0.0, 0.0), |acc, &g| acc + g);
        let coords: Vec<f64> = w.iter().map(|wi| wi / sum).collect();
        let grads = coords
            .iter()
            .zip(&gw)
            // Chain rule back to original units: d/dx = (1/diam) d/dx_scaled.
            .map(|(&li, &gi)| (gi - gsum * li) / (sum * self.diam))
            .collect();
        (coords, grads)
    }

    /// Coordinates without the interior/closure checks; same caveats as
    /// [`Self::coords_and_grads_unchecked`].
    pub(crate) fn coords_unchecked(&self, x: Point2) -> Vec<f64> {
        let areas = self.areas_scaled(self.to_scaled(x));
        let w = self.weights_scaled(&areas);
        let sum: f64 = w.iter().sum();
        w.into_iter().map(|wi| wi / sum).collect()
    }
}

/// Triangle areas at `x` (one-shot convenience wrapper).
pub fn triangle_areas(polygon: &Polygon, x: Point2) -> TriangleAreas {
    WachspressEvaluator::new(polygon).triangle_areas(x)
}

/// Area-product weights at `x`.
pub fn weights_area_form(polygon: &Polygon, x: Point2) -> Result<Vec<f64>, WachspressError> {
    WachspressEvaluator::new(polygon).weights(x)
}

/// Cotangent-form weights at a strictly interior `x`.
pub fn weights_cotangent_form(polygon: &Polygon, x: Point2) -> Result<Vec<f64>, WachspressError> {
    WachspressEvaluator::new(polygon).weights_cotangent(x)
}

/// Normalized coordinates at `x` through the chosen form.
pub fn coordinates(
    polygon: &Polygon,
    x: Point2,
    form: Form,
) -> Result<BasisEvaluation, WachspressError> {
    WachspressEvaluator::new(polygon).coordinates(x, form)
}

/// Analytic coordinate gradients at a strictly interior `x`.
pub fn coordinate_gradients(polygon: &Polygon, x: Point2) -> Result<Vec<Point2>, WachspressError> {
    WachspressEvaluator::new(polygon).gradients(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn unit_square() -> Polygon {
        Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]).unwrap()
    }

    fn kite(s: f64) -> Polygon {
        Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(s, s), p(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn square_center_areas() {
        let t = triangle_areas(&unit_square(), p(0.5, 0.5));
        for i in 0..4 {
            assert!((t.a[i] - 0.25).abs() < 1e-15);
            assert!((t.b[i] - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn square_corner_areas() {
        let t = triangle_areas(&unit_square(), p(0.0, 0.0));
        assert_eq!(t.a[0], 0.0);
        assert_eq!(t.a[3], 0.0);
        assert!((t.a[1] - 0.5).abs() < 1e-15);
        assert!((t.a[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn area_gradients_are_half_perp_edges() {
        let poly = kite(0.75);
        let t = triangle_areas(&poly, p(0.4, 0.4));
        for i in 0..4 {
            let e = poly.vertex(i + 1) - poly.vertex(i);
            let expected = e.perp() * 0.5;
            assert_eq!(t.grad_a[i], expected);
        }
    }

    #[test]
    fn kite_areas_match_hand_computation() {
        // Direct cross-product arithmetic for v=(0,0),(1,0),(.75,.75),(0,1)
        // at x=(0.4,0.4).
        let t = triangle_areas(&kite(0.75), p(0.4, 0.4));
        let expect_a = [0.2, 0.175, 0.175, 0.2];
        let expect_b = [0.5, 0.375, 0.25, 0.375];
        for i in 0..4 {
            assert!((t.a[i] - expect_a[i]).abs() < 1e-15, "a[{i}]={}", t.a[i]);
            assert!((t.b[i] - expect_b[i]).abs() < 1e-15, "b[{i}]={}", t.b[i]);
        }
    }

    #[test]
    fn square_center_weights() {
        let w = weights_area_form(&unit_square(), p(0.5, 0.5)).unwrap();
        for wi in w {
            assert!((wi - 1.0 / 32.0).abs() < 1e-15);
        }
    }

    #[test]
    fn vertex_weights_select_single_basis() {
        let poly = kite(0.6);
        for j in 0..4 {
            let w = weights_area_form(&poly, poly.vertex(j)).unwrap();
            for (i, wi) in w.iter().enumerate() {
                if i == j {
                    assert!(*wi > 0.0);
                } else {
                    assert_eq!(*wi, 0.0, "w[{i}] at vertex {j}");
                }
            }
        }
    }

    #[test]
    fn kite_weights_match_independent_shoelace() {
        // Independent route: raw shoelace areas and the literal product
        // formula, no shared code with the evaluator.
        let s = 0.6;
        let poly = kite(s);
        let x = p(0.3, 0.5);
        let tri = |a: Point2, b: Point2, c: Point2| {
            0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))
        };
        let vs = poly.vertices();
        let a: Vec<f64> = (0..4).map(|i| tri(x, vs[i], vs[(i + 1) % 4])).collect();
        let b: Vec<f64> = (0..4)
            .map(|i| tri(vs[(i + 3) % 4], vs[i], vs[(i + 1) % 4]).abs())
            .collect();
        let expected: Vec<f64> = (0..4)
            .map(|i| {
                let mut w = b[i];
                for j in 0..4 {
                    if j != i && j != (i + 3) % 4 {
                        w *= a[j];
                    }
                }
                w
            })
            .collect();
        let got = weights_area_form(&poly, x).unwrap();
        for i in 0..4 {
            assert!(
                (got[i] - expected[i]).abs() <= 1e-14 * expected[i].abs(),
                "w[{i}]: got {} expected {}",
                got[i],
                expected[i]
            );
        }
    }

    #[test]
    fn outside_point_is_rejected() {
        let err = weights_area_form(&unit_square(), p(1.5, 0.5)).unwrap_err();
        assert!(matches!(err, WachspressError::OutsidePolygon { .. }));
        assert!(matches!(
            coordinates(&unit_square(), p(-0.2, 0.5), Form::Area),
            Err(WachspressError::OutsidePolygon { .. })
        ));
    }

    #[test]
    fn square_center_coordinates() {
        for form in [Form::Area, Form::Cotangent] {
            let e = coordinates(&unit_square(), p(0.5, 0.5), form).unwrap();
            for li in &e.coords {
                assert!((li - 0.25).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cotangent_weights_equal_at_square_center() {
        let w = weights_cotangent_form(&unit_square(), p(0.5, 0.5)).unwrap();
        for wi in &w {
            assert!((wi - w[0]).abs() < 1e-14);
        }
    }

    #[test]
    fn forms_agree_on_interior_points() {
        for (poly, pts) in [
            (unit_square(), vec![p(0.5, 0.25), p(0.1, 0.7), p(0.9, 0.9)]),
            (kite(0.6), vec![p(0.3, 0.5), p(0.1, 0.1), p(0.5, 0.3)]),
        ] {
            for x in pts {
                let area = coordinates(&poly, x, Form::Area).unwrap().coords;
                let cot = coordinates(&poly, x, Form::Cotangent).unwrap().coords;
                for i in 0..area.len() {
                    assert!(
                        (area[i] - cot[i]).abs() <= 1e-10 * area[i].abs().max(1e-30),
                        "lambda[{i}] area={} cot={}",
                        area[i],
                        cot[i]
                    );
                }
            }
        }
    }

    #[test]
    fn cotangent_form_rejects_boundary() {
        let sq = unit_square();
        assert!(matches!(
            weights_cotangent_form(&sq, p(0.0, 0.0)),
            Err(WachspressError::BoundaryPoint { .. })
        ));
        assert!(matches!(
            weights_cotangent_form(&sq, p(0.5, 0.0)),
            Err(WachspressError::BoundaryPoint { .. })
        ));
        assert!(matches!(
            coordinate_gradients(&sq, p(0.5, 1.0)),
            Err(WachspressError::BoundaryPoint { .. })
        ));
    }

    #[test]
    fn vertex_coordinates_are_kronecker_delta() {
        for poly in [unit_square(), kite(0.51), Polygon::regular(6, 1.0).unwrap()] {
            for j in 0..poly.vertex_count() {
                let e = coordinates(&poly, poly.vertex(j), Form::Area).unwrap();
                for (i, li) in e.coords.iter().enumerate() {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((li - expected).abs() <= 1e-14, "lambda[{i}](v_{j}) = {li}");
                }
            }
        }
    }

    #[test]
    fn edge_restriction_is_linear() {
        let poly = kite(0.7);
        for i in 0..4 {
            let a = poly.vertex(i);
            let b = poly.vertex(i + 1);
            for t in [0.2, 0.5, 0.8] {
                let x = a + (b - a) * t;
                let e = coordinates(&poly, x, Form::Area).unwrap();
                for (k, lk) in e.coords.iter().enumerate() {
                    let expected = if k == i {
                        1.0 - t
                    } else if k == (i + 1) % 4 {
                        t
                    } else {
                        0.0
                    };
                    assert!(
                        (lk - expected).abs() < 1e-12,
                        "edge {i} t={t} lambda[{k}]={lk}"
                    );
                }
            }
        }
    }

    #[test]
    fn square_center_gradients_match_bilinear_hats() {
        let g = coordinate_gradients(&unit_square(), p(0.5, 0.5)).unwrap();
        let expected = [
            p(-0.5, -0.5),
            p(0.5, -0.5),
            p(0.5, 0.5),
            p(-0.5, 0.5),
        ];
        for i in 0..4 {
            assert!((g[i] - expected[i]).norm() < 1e-13, "grad[{i}] = {:?}", g[i]);
        }
    }

    #[test]
    fn gradients_match_central_differences() {
        let poly = kite(0.63);
        let diam = poly.diameter();
        let h = 1e-6 * diam;
        for x in [p(0.3, 0.4), p(0.15, 0.7), p(0.5, 0.35)] {
            let g = coordinate_gradients(&poly, x).unwrap();
            let at = |q: Point2| coordinates(&poly, q, Form::Area).unwrap().coords;
            for i in 0..4 {
                let gx = (at(p(x.x + h, x.y))[i] - at(p(x.x - h, x.y))[i]) / (2.0 * h);
                let gy = (at(p(x.x, x.y + h))[i] - at(p(x.x, x.y - h))[i]) / (2.0 * h);
                let fd = p(gx, gy);
                let denom = g[i].norm().max(fd.norm()).max(1e-12);
                assert!(
                    (g[i] - fd).norm() / denom <= 1e-6,
                    "grad[{i}] analytic {:?} fd {:?}",
                    g[i],
                    fd
                );
            }
        }
    }

    #[test]
    fn gradient_sums_vanish_and_linear_precision_differentiates() {
        let poly = Polygon::regular(7, 1.3).unwrap();
        let x = p(0.21, -0.17);
        let g = coordinate_gradients(&poly, x).unwrap();
        let gsum = g.iter().fold(p(0.0, 0.0), |acc, &v| acc + v);
        assert!(gsum.norm() < 1e-9);
        // Σ v_i ⊗ ∇λ_i = identity.
        let mut m = [[0.0; 2]; 2];
        for (i, gi) in g.iter().enumerate() {
            let v = poly.vertex(i);
            m[0][0] += v.x * gi.x;
            m[0][1] += v.x * gi.y;
            m[1][0] += v.y * gi.x;
            m[1][1] += v.y * gi.y;
        }
        assert!((m[0][0] - 1.0).abs() < 1e-8);
        assert!((m[1][1] - 1.0).abs() < 1e-8);
        assert!(m[0][1].abs() < 1e-8);
        assert!(m[1][0].abs() < 1e-8);
    }

    #[test]
    fn triangle_coordinates_are_classical_barycentric() {
        let tri = Polygon::new(vec![p(0.1, 0.2), p(1.3, 0.4), p(0.5, 1.7)]).unwrap();
        let vs = tri.vertices();
        let total = tri.area();
        for x in [p(0.6, 0.7), p(0.4, 0.5), p(0.8, 0.9)] {
            let lam = coordinates(&tri, x, Form::Area).unwrap().coords;
            let sub = |a: Point2, b: Point2| 0.5 * (a - x).cross(b - x) / total;
            let expected = [sub(vs[1], vs[2]), sub(vs[2], vs[0]), sub(vs[0], vs[1])];
            for i in 0..3 {
                assert!((lam[i] - expected[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn partition_of_unity_and_linear_precision_hold() {
        let poly = kite(0.55);
        for x in [p(0.2, 0.3), p(0.45, 0.45), p(0.05, 0.8)] {
            let e = coordinates(&poly, x, Form::Area).unwrap();
            let sum: f64 = e.coords.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            let recon = e
                .coords
                .iter()
                .enumerate()
                .fold(p(0.0, 0.0), |acc, (i, &li)| acc + poly.vertex(i) * li);
            assert!((recon - x).norm() <= 1e-11 * poly.diameter());
        }
    }
}
