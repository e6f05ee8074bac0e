//! First-order vertex interpolation and Sobolev-norm error reports.
//!
//! The interpolant of a scalar field u on a polygon is `Iu = Σ u(v_i) λ_i`
//! with the Wachspress coordinates λ_i; its gradient follows from the
//! analytic coordinate gradients. Error norms are computed by adaptive
//! quadrature, and the report carries the dimensionless ratio
//! `‖u - Iu‖_{H¹} / (diam · |u|_{H²})` whose boundedness (or divergence)
//! the experiment families probe.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::geometry::{Point2, Polygon};
use crate::quadrature::{self, QuadratureError};
use crate::wachspress::{WachspressError, WachspressEvaluator};

/// Default relative tolerance for the norm integrals.
pub const DEFAULT_NORM_TOL: f64 = 1e-7;
/// Below this, |u|_{H²} is treated as zero and the ratio is undefined.
pub const ZERO_H2_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum InterpError {
    #[error("scalar field `{0}` has no hessian")]
    MissingHessian(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Wachspress(#[from] WachspressError),
}

/// Symmetric 2×2 second-derivative matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hessian {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

type ValueFn = dyn Fn(Point2) -> f64 + Send + Sync;
type GradFn = dyn Fn(Point2) -> Point2 + Send + Sync;
type HessFn = dyn Fn(Point2) -> Hessian + Send + Sync;

/// A scalar test function with analytic gradient and optional hessian.
#[derive(Clone)]
pub struct ScalarField {
    label: String,
    value: Arc<ValueFn>,
    gradient: Arc<GradFn>,
    hessian: Option<Arc<HessFn>>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("label", &self.label)
            .field("has_hessian", &self.hessian.is_some())
            .finish()
    }
}

impl ScalarField {
    pub fn new(
        label: impl Into<String>,
        value: impl Fn(Point2) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(Point2) -> Point2 + Send + Sync + 'static,
        hessian: Option<Arc<HessFn>>,
    ) -> Self {
        Self {
            label: label.into(),
            value: Arc::new(value),
            gradient: Arc::new(gradient),
            hessian,
        }
    }

    fn builtin(
        label: &str,
        value: impl Fn(Point2) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(Point2) -> Point2 + Send + Sync + 'static,
        hessian: impl Fn(Point2) -> Hessian + Send + Sync + 'static,
    ) -> Self {
        let field = Self::new(label, value, gradient, Some(Arc::new(hessian)));
        field.assert_gradient_consistency();
        field
    }

    /// u = x(1-x).
    pub fn x_one_minus_x() -> Self {
        Self::builtin(
            "x(1-x)",
            |p| p.x * (1.0 - p.x),
            |p| Point2::new(1.0 - 2.0 * p.x, 0.0),
            |_| Hessian {
                xx: -2.0,
                xy: 0.0,
                yy: 0.0,
            },
        )
    }

    /// u = x².
    pub fn x_squared() -> Self {
        Self::builtin(
            "x^2",
            |p| p.x * p.x,
            |p| Point2::new(2.0 * p.x, 0.0),
            |_| Hessian {
                xx: 2.0,
                xy: 0.0,
                yy: 0.0,
            },
        )
    }

    /// u = xy.
    pub fn xy() -> Self {
        Self::builtin(
            "xy",
            |p| p.x * p.y,
            |p| Point2::new(p.y, p.x),
            |_| Hessian {
                xx: 0.0,
                xy: 1.0,
                yy: 0.0,
            },
        )
    }

    /// u = sin x · cos y.
    pub fn sin_cos() -> Self {
        Self::builtin(
            "sin(x)cos(y)",
            |p| p.x.sin() * p.y.cos(),
            |p| Point2::new(p.x.cos() * p.y.cos(), -p.x.sin() * p.y.sin()),
            |p| Hessian {
                xx: -p.x.sin() * p.y.cos(),
                xy: -p.x.cos() * p.y.sin(),
                yy: -p.x.sin() * p.y.cos(),
            },
        )
    }

    /// u = c0 + c1·x + c2·y.
    pub fn affine(c0: f64, c1: f64, c2: f64) -> Self {
        Self::builtin(
            format!("{c0} + {c1} x + {c2} y").as_str(),
            move |p| c0 + c1 * p.x + c2 * p.y,
            move |_| Point2::new(c1, c2),
            |_| Hessian {
                xx: 0.0,
                xy: 0.0,
                yy: 0.0,
            },
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self, p: Point2) -> f64 {
        (self.value)(p)
    }

    pub fn gradient(&self, p: Point2) -> Point2 {
        (self.gradient)(p)
    }

    pub fn hessian(&self, p: Point2) -> Option<Hessian> {
        self.hessian.as_ref().map(|h| h(p))
    }

    pub fn has_hessian(&self) -> bool {
        self.hessian.is_some()
    }

    /// Central-difference check of the stated gradient at a few fixed points.
    fn assert_gradient_consistency(&self) {
        let h = 1e-6;
        // Deterministic low-discrepancy-ish probe points.
        let pts = [
            Point2::new(0.31, 0.47),
            Point2::new(-0.82, 0.15),
            Point2::new(1.27, -0.64),
        ];
        for p in pts {
            let gx = (self.value(Point2::new(p.x + h, p.y)) - self.value(Point2::new(p.x - h, p.y)))
                / (2.0 * h);
            let gy = (self.value(Point2::new(p.x, p.y + h)) - self.value(Point2::new(p.x, p.y - h)))
                / (2.0 * h);
            let g = self.gradient(p);
            let denom = g.norm().max(1.0);
            assert!(
                (g - Point2::new(gx, gy)).norm() / denom <= 1e-6,
                "gradient of `{}` inconsistent with finite differences at {p:?}",
                self.label
            );
        }
    }
}

/// The interpolant `Iu` as an evaluable field with gradient.
#[derive(Debug, Clone)]
pub struct Interpolant {
    evaluator: WachspressEvaluator,
    vertex_values: Vec<f64>,
}

impl Interpolant {
    pub fn vertex_values(&self) -> &[f64] {
        &self.vertex_values
    }

    /// Value on the closed polygon.
    pub fn value(&self, x: Point2) -> f64 {
        self.evaluator
            .coords_unchecked(x)
            .iter()
            .zip(&self.vertex_values)
            .map(|(l, u)| l * u)
            .sum()
    }

    /// Gradient, valid away from vertices; quadrature only queries interior
    /// points.
    pub fn gradient(&self, x: Point2) -> Point2 {
        let (_, grads) = self.evaluator.coords_and_grads_unchecked(x);
        grads
            .iter()
            .zip(&self.vertex_values)
            .fold(Point2::new(0.0, 0.0), |acc, (&g, &u)| acc + g * u)
    }
}

/// Builds the first-order interpolant of `u` on `polygon`.
pub fn interpolate(polygon: &Polygon, u: &ScalarField) -> Interpolant {
    Interpolant {
        evaluator: WachspressEvaluator::new(polygon),
        vertex_values: polygon.vertices().iter().map(|&v| u.value(v)).collect(),
    }
}

/// ‖u - Iu‖_{L²(Ω)}.
pub fn l2_error(polygon: &Polygon, u: &ScalarField, tol: f64) -> Result<f64, InterpError> {
    let ip = interpolate(polygon, u);
    let r = quadrature::integrate(
        polygon,
        |x| {
            let d = u.value(x) - ip.value(x);
            d * d
        },
        tol,
    )?;
    Ok(r.value.max(0.0).sqrt())
}

/// |u - Iu|_{H¹(Ω)}, the L² norm of the gradient error.
pub fn h1_seminorm_error(polygon: &Polygon, u: &ScalarField, tol: f64) -> Result<f64, InterpError> {
    let ip = interpolate(polygon, u);
    let r = quadrature::integrate(
        polygon,
        |x| (u.gradient(x) - ip.gradient(x)).norm_sq(),
        tol,
    )?;
    Ok(r.value.max(0.0).sqrt())
}

/// Full H¹ error, √(L²² + H¹-semi²).
pub fn h1_error(polygon: &Polygon, u: &ScalarField, tol: f64) -> Result<f64, InterpError> {
    let l2 = l2_error(polygon, u, tol)?;
    let semi = h1_seminorm_error(polygon, u, tol)?;
    Ok(l2.hypot(semi))
}

/// |u|_{H²(Ω)} = √∫ (u_xx² + 2 u_xy² + u_yy²).
pub fn h2_seminorm(polygon: &Polygon, u: &ScalarField, tol: f64) -> Result<f64, InterpError> {
    if !u.has_hessian() {
        return Err(InterpError::MissingHessian(u.label().to_string()));
    }
    let r = quadrature::integrate(
        polygon,
        |x| {
            let h = u.hessian(x).expect("hessian checked above");
            h.xx * h.xx + 2.0 * h.xy * h.xy + h.yy * h.yy
        },
        tol,
    )?;
    Ok(r.value.max(0.0).sqrt())
}

/// All error norms of one (polygon, field) pair.
///
/// `ratio` is `h1_error / (diam · h2_semi)`, absent when |u|_{H²} vanishes
/// (affine u).
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub l2_error: f64,
    pub h1_semi_error: f64,
    pub h1_error: f64,
    pub h2_semi: f64,
    pub diam: f64,
    pub ratio: Option<f64>,
}

pub fn error_report(polygon: &Polygon, u: &ScalarField, tol: f64) -> Result<ErrorReport, InterpError> {
    let l2 = l2_error(polygon, u, tol)?;
    let semi = h1_seminorm_error(polygon, u, tol)?;
    let h1 = l2.hypot(semi);
    let h2 = h2_seminorm(polygon, u, tol)?;
    let diam = polygon.diameter();
    let ratio = (h2 >= ZERO_H2_THRESHOLD).then(|| h1 / (diam * h2));
    Ok(ErrorReport {
        l2_error: l2,
        h1_semi_error: semi,
        h1_error: h1,
        h2_semi: h2,
        diam,
        ratio,
    })
}
