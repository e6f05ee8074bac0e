//! Wachspress barycentric coordinates on strictly convex polygons, the
//! geometric quality conditions governing their interpolation behavior, and
//! an experiment harness measuring first-order interpolation error.
//!
//! Module map:
//! - [`geometry`]: validated convex polygons, diameter / inscribed ball /
//!   angle measurements, condition verdicts.
//! - [`wachspress`]: basis weights, normalized coordinates and analytic
//!   gradients in two algebraic forms.
//! - [`quadrature`]: adaptive integration over polygons via fan triangulation
//!   and a fixed high-order triangle rule.
//! - [`interperror`]: the vertex interpolation operator and Sobolev-norm
//!   error reports.
//! - [`experiments`]: polygon families, closed-form coordinate oracles,
//!   analytic error lower bounds, parameter sweeps and rate fitting.
//! - [`io`]: text and JSON polygon ingestion for the CLI.

pub mod experiments;
pub mod geometry;
pub mod interperror;
pub mod io;
pub mod quadrature;
pub mod wachspress;

pub use geometry::{
    check_conditions, AffineMap, ConditionThresholds, ConditionVerdict, GeometricReport,
    GeometryError, Point2, Polygon,
};
pub use interperror::{error_report, interpolate, ErrorReport, InterpError, ScalarField};
pub use quadrature::{integrate, IntegrationResult, QuadratureError, TriangleRule};
pub use wachspress::{coordinates, BasisEvaluation, Form, WachspressError, WachspressEvaluator};
