//! Parameter-sweep harness: the quadrilateral families with one degenerating
//! quality condition, closed-form coordinate oracles on them, analytic lower
//! bounds for the interpolation error, benign control families, CSV
//! emission, and log-log rate fitting.
//!
//! Family overview (parameter `s`):
//! - `cex1`: (0,0), (1,0), (s,s), (0,1) for 1/2 < s < 1. Pairwise vertex
//!   distances stay ≥ diam/2 while the angle at (s,s) tends to π as
//!   s → 1/2⁺; the H¹ interpolation error ratio diverges for u = x(1-x).
//! - `cex2`: (0,0), (1,0), (1-s^¼, s), (0,s) for 0 < s < (1/2)⁴. The edge
//!   ‖v₁-v₄‖ = s collapses relative to diam ~ 1; the ratio diverges for
//!   u = x².
//! - `f1`: (0,0), (1,0), (s,1-s), (0,1-s) for 0 < s < 1: bounded aspect
//!   ratio and max angle exactly 3π/4, but the top edge length s collapses.
//! - `f2`: same shape as `cex1`: bounded aspect ratio and d_m ≥ 1/2, but the
//!   max angle degenerates.
//! - `benign-square` / `benign-ngon`: scaled squares and regular n-gons, the
//!   control group on which the error ratio stays bounded.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{GeometryError, Point2, Polygon};
use crate::interperror::{self, InterpError, ScalarField};
use crate::wachspress::{WachspressError, WachspressEvaluator};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("parameter s={s} outside the admissible range {range} of family {family}")]
    ParamOutOfRange {
        family: Family,
        s: f64,
        range: &'static str,
    },
    #[error("grid resolution must be positive")]
    InvalidGrid,
    #[error("rate fit needs strictly positive data")]
    NonPositiveData,
    #[error("rate fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("rate fit abscissae are all equal")]
    DegenerateAbscissa,
    #[error("x and y data lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("column `{0}` not found in CSV header")]
    UnknownColumn(String),
    #[error("CSV parse error on line {line}: {reason}")]
    CsvParse { line: usize, reason: String },
    #[error("family benign-ngon needs a vertex count between 3 and 64")]
    MissingSides,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Wachspress(#[from] WachspressError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Cex1,
    Cex2,
    F1,
    F2,
    BenignSquare,
    BenignNgon,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Cex1 => "cex1",
            Family::Cex2 => "cex2",
            Family::F1 => "f1",
            Family::F2 => "f2",
            Family::BenignSquare => "benign-square",
            Family::BenignNgon => "benign-ngon",
        }
    }

    /// Builds the family member at parameter `s` (`sides` only for n-gons).
    pub fn polygon(&self, s: f64, sides: Option<usize>) -> Result<Polygon, ExperimentError> {
        match self {
            Family::Cex1 => cex1_polygon(s),
            Family::Cex2 => cex2_polygon(s),
            Family::F1 => f1_polygon(s),
            Family::F2 => f2_polygon(s),
            Family::BenignSquare => {
                check_range(*self, s, s.is_finite() && s > 0.0, "(0, inf)")?;
                Ok(Polygon::square(s)?)
            }
            Family::BenignNgon => {
                check_range(*self, s, s.is_finite() && s > 0.0, "(0, inf)")?;
                let n = sides.ok_or(ExperimentError::MissingSides)?;
                if !(3..=64).contains(&n) {
                    return Err(ExperimentError::MissingSides);
                }
                Ok(Polygon::regular(n, s)?)
            }
        }
    }

    /// Parameter grid used when the caller does not supply one.
    pub fn default_grid(&self) -> Vec<f64> {
        match self {
            Family::Cex1 | Family::F2 => (2..=10).map(|k| 0.5 + 2f64.powi(-k)).collect(),
            Family::Cex2 => (3..=8).map(|k| 4f64.powi(-k)).collect(),
            Family::F1 => (1..=10).map(|k| 2f64.powi(-k)).collect(),
            Family::BenignSquare | Family::BenignNgon => vec![1.0, 0.5, 0.25, 0.125],
        }
    }

    /// Test function measured along the family's sweep.
    pub fn default_function(&self) -> BuiltinField {
        match self {
            Family::Cex1 => BuiltinField::XTimesOneMinusX,
            Family::Cex2 | Family::F1 | Family::F2 => BuiltinField::XSquared,
            Family::BenignSquare | Family::BenignNgon => BuiltinField::SinXCosY,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cex1" => Ok(Family::Cex1),
            "cex2" => Ok(Family::Cex2),
            "f1" => Ok(Family::F1),
            "f2" => Ok(Family::F2),
            "benign-square" => Ok(Family::BenignSquare),
            "benign-ngon" => Ok(Family::BenignNgon),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

/// Built-in test functions selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinField {
    XTimesOneMinusX,
    XSquared,
    XY,
    SinXCosY,
}

impl BuiltinField {
    pub fn name(&self) -> &'static str {
        match self {
            BuiltinField::XTimesOneMinusX => "x1mx",
            BuiltinField::XSquared => "x2",
            BuiltinField::XY => "xy",
            BuiltinField::SinXCosY => "sincos",
        }
    }

    pub fn to_field(self) -> ScalarField {
        match self {
            BuiltinField::XTimesOneMinusX => ScalarField::x_one_minus_x(),
            BuiltinField::XSquared => ScalarField::x_squared(),
            BuiltinField::XY => ScalarField::xy(),
            BuiltinField::SinXCosY => ScalarField::sin_cos(),
        }
    }
}

impl FromStr for BuiltinField {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x1mx" => Ok(BuiltinField::XTimesOneMinusX),
            "x2" => Ok(BuiltinField::XSquared),
            "xy" => Ok(BuiltinField::XY),
            "sincos" => Ok(BuiltinField::SinXCosY),
            other => Err(format!("unknown function `{other}`")),
        }
    }
}

fn check_range(
    family: Family,
    s: f64,
    ok: bool,
    range: &'static str,
) -> Result<(), ExperimentError> {
    if ok {
        Ok(())
    } else {
        Err(ExperimentError::ParamOutOfRange { family, s, range })
    }
}

/// Quadrilateral (0,0), (1,0), (s,s), (0,1) for 1/2 < s < 1.
pub fn cex1_polygon(s: f64) -> Result<Polygon, ExperimentError> {
    check_range(Family::Cex1, s, s > 0.5 && s < 1.0, "(1/2, 1)")?;
    Ok(Polygon::new(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(s, s),
        Point2::new(0.0, 1.0),
    ])?)
}

/// Quadrilateral (0,0), (1,0), (1-s^¼, s), (0,s) for 0 < s < (1/2)⁴.
pub fn cex2_polygon(s: f64) -> Result<Polygon, ExperimentError> {
    check_range(Family::Cex2, s, s > 0.0 && s < 0.0625, "(0, 1/16)")?;
    Ok(Polygon::new(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0 - s.powf(0.25), s),
        Point2::new(0.0, s),
    ])?)
}

/// Quadrilateral (0,0), (1,0), (s,1-s), (0,1-s) for 0 < s < 1.
pub fn f1_polygon(s: f64) -> Result<Polygon, ExperimentError> {
    check_range(Family::F1, s, s > 0.0 && s < 1.0, "(0, 1)")?;
    Ok(Polygon::new(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(s, 1.0 - s),
        Point2::new(0.0, 1.0 - s),
    ])?)
}

/// Quadrilateral (0,0), (1,0), (s,s), (0,1) for 1/2 < s < 1.
pub fn f2_polygon(s: f64) -> Result<Polygon, ExperimentError> {
    check_range(Family::F2, s, s > 0.5 && s < 1.0, "(1/2, 1)")?;
    Ok(Polygon::new(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(s, s),
        Point2::new(0.0, 1.0),
    ])?)
}

/// Closed form of λ₃ on the `cex1` quadrilateral:
/// λ₃(x,y) = (2s-1)x/s · y/((s-1)(x+y)+s).
pub fn oracle_lambda_cex1(s: f64, x: Point2) -> Result<f64, ExperimentError> {
    check_range(Family::Cex1, s, s > 0.5 && s < 1.0, "(1/2, 1)")?;
    let denom = (s - 1.0) * (x.x + x.y) + s;
    Ok((2.0 * s - 1.0) * x.x / s * (x.y / denom))
}

/// y-derivative of the λ₃ closed form on `cex1`:
/// ∂λ₃/∂y = (2s-1)x/s · ((s-1)x+s)/((s-1)(x+y)+s)².
pub fn oracle_dlambda3_dy_cex1(s: f64, x: Point2) -> Result<f64, ExperimentError> {
    check_range(Family::Cex1, s, s > 0.5 && s < 1.0, "(1/2, 1)")?;
    let denom = (s - 1.0) * (x.x + x.y) + s;
    Ok((2.0 * s - 1.0) * x.x / s * (((s - 1.0) * x.x + s) / (denom * denom)))
}

/// Closed forms of (λ₂, λ₃) on the `cex2` quadrilateral with a = 1-s^¼:
/// λ₂ = x(s-y)/(s+y(a-1)), λ₃ = xy/(s+y(a-1)).
pub fn oracle_lambda_cex2(s: f64, x: Point2) -> Result<(f64, f64), ExperimentError> {
    check_range(Family::Cex2, s, s > 0.0 && s < 0.0625, "(0, 1/16)")?;
    let a = 1.0 - s.powf(0.25);
    let denom = s + x.y * (a - 1.0);
    Ok((x.x * (s - x.y) / denom, x.x * x.y / denom))
}

/// Analytic lower bound for |u-Iu|_{H¹} on `cex1` with u = x(1-x):
/// s(1-s)·√((3s-1)²/(2¹⁰ s³ (2s-1))). Diverges like (2s-1)^(-1/2).
pub fn cex1_lower_bound(s: f64) -> Result<f64, ExperimentError> {
    check_range(Family::Cex1, s, s > 0.5 && s < 1.0, "(1/2, 1)")?;
    let t = 3.0 * s - 1.0;
    Ok(s * (1.0 - s) * (t * t / (1024.0 * s.powi(3) * (2.0 * s - 1.0))).sqrt())
}

/// Analytic lower bound for |u-Iu|_{H¹} on `cex2` with u = x²:
/// √((1-s^¼)³/(8·√s)). Diverges like s^(-1/4).
pub fn cex2_lower_bound(s: f64) -> Result<f64, ExperimentError> {
    check_range(Family::Cex2, s, s > 0.0 && s < 0.0625, "(0, 1/16)")?;
    let a = 1.0 - s.powf(0.25);
    Ok((a.powi(3) / (8.0 * s.sqrt())).sqrt())
}

/// Verifies that the implemented gradient satisfies the pointwise bound
/// ∂λ₃/∂y ≥ (3s-1)/(8s(2s-1)) - 1e-9 on an interior grid of the triangle
/// T_s = {(1/4,3/4), (1/2,1/2), (1/2,(3s-1)/(2s))}.
pub fn pointwise_bound_check_cex1(s: f64, grid: usize) -> Result<bool, ExperimentError> {
    if grid == 0 {
        return Err(ExperimentError::InvalidGrid);
    }
    let poly = cex1_polygon(s)?;
    let ev = WachspressEvaluator::new(&poly);
    let t1 = Point2::new(0.25, 0.75);
    let t2 = Point2::new(0.5, 0.5);
    let t3 = Point2::new(0.5, (3.0 * s - 1.0) / (2.0 * s));
    let bound = (3.0 * s - 1.0) / (8.0 * s * (2.0 * s - 1.0));
    for i in 0..grid {
        for j in 0..grid {
            let u = (i as f64 + 0.5) / grid as f64;
            let v = (j as f64 + 0.5) / grid as f64;
            // Collapsed-square barycentric map; strictly interior to T_s.
            let p = t1 * (1.0 - u) + t2 * (u * (1.0 - v)) + t3 * (u * v);
            let grads = ev.gradients(p)?;
            if grads[2].y < bound - 1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One sweep configuration: which family, which parameters, which function.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub family: Family,
    pub s_values: Vec<f64>,
    /// Test function; `None` selects the family default.
    pub function: Option<BuiltinField>,
    /// Vertex count, required for `benign-ngon`.
    pub sides: Option<usize>,
}

impl FamilySpec {
    /// Validates every grid value against the family's admissible range.
    pub fn new(
        family: Family,
        s_values: Vec<f64>,
        function: Option<BuiltinField>,
        sides: Option<usize>,
    ) -> Result<Self, ExperimentError> {
        if family == Family::BenignNgon {
            let n = sides.ok_or(ExperimentError::MissingSides)?;
            if !(3..=64).contains(&n) {
                return Err(ExperimentError::MissingSides);
            }
        }
        for &s in &s_values {
            family.polygon(s, sides.or(Some(3)))?;
        }
        Ok(Self {
            family,
            s_values,
            function,
            sides,
        })
    }

    pub fn with_default_grid(
        family: Family,
        function: Option<BuiltinField>,
        sides: Option<usize>,
    ) -> Result<Self, ExperimentError> {
        Self::new(family, family.default_grid(), function, sides)
    }

    pub fn resolved_function(&self) -> BuiltinField {
        self.function.unwrap_or_else(|| self.family.default_function())
    }
}

/// One sweep row: geometry metrics, error norms, and the analytic bound
/// where the family has one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub s: f64,
    pub diam: f64,
    pub sigma: f64,
    pub d_m: f64,
    #[serde(rename = "psi_M")]
    pub psi_max: f64,
    #[serde(rename = "psi_m")]
    pub psi_min: f64,
    pub l2_error: f64,
    pub h1_semi_error: f64,
    pub h1_error: f64,
    pub h2_semi: f64,
    pub ratio: Option<f64>,
    pub lower_bound: Option<f64>,
}

/// Sweep outcome for one parameter; failures stay inline so the sweep
/// continues past them.
#[derive(Debug)]
pub struct SweepRow {
    pub s: f64,
    pub outcome: Result<SweepRecord, ExperimentError>,
}

/// Tightened tolerance near the degenerate end of the counterexample grids.
fn row_tolerance(family: Family, s: f64, tol: f64) -> f64 {
    match family {
        Family::Cex1 | Family::F2 if s - 0.5 <= 1.0 / 64.0 => tol.min(1e-8),
        Family::Cex2 if s <= 4f64.powi(-6) => tol.min(1e-8),
        _ => tol,
    }
}

fn sweep_one(spec: &FamilySpec, s: f64, tol: f64) -> Result<SweepRecord, ExperimentError> {
    let poly = spec.family.polygon(s, spec.sides)?;
    let quality = poly.quality_report();
    let u = spec.resolved_function().to_field();
    let report = interperror::error_report(&poly, &u, row_tolerance(spec.family, s, tol))?;
    let lower_bound = match spec.family {
        Family::Cex1 => Some(cex1_lower_bound(s)?),
        Family::Cex2 => Some(cex2_lower_bound(s)?),
        _ => None,
    };
    Ok(SweepRecord {
        s,
        diam: quality.diam,
        sigma: quality.sigma,
        d_m: quality.d_m,
        psi_max: quality.psi_max,
        psi_min: quality.psi_min,
        l2_error: report.l2_error,
        h1_semi_error: report.h1_semi_error,
        h1_error: report.h1_error,
        h2_semi: report.h2_semi,
        ratio: report.ratio,
        lower_bound,
    })
}

/// Runs the sweep; rows are ordered by `s` ascending for determinism.
pub fn run_sweep(spec: &FamilySpec, tol: f64) -> Vec<SweepRow> {
    let mut s_values = spec.s_values.clone();
    s_values.sort_by(f64::total_cmp);
    s_values
        .into_iter()
        .map(|s| SweepRow {
            s,
            outcome: sweep_one(spec, s, tol),
        })
        .collect()
}

/// Fixed CSV column order; golden files depend on it.
pub const SWEEP_CSV_HEADER: &str =
    "s,diam,sigma,d_m,psi_M,psi_m,l2_error,h1_semi_error,h1_error,h2_semi,ratio,paper_lower_bound";

/// Serializes sweep rows to CSV. Reals print as shortest round-trip
/// decimals; absent values (failed rows, undefined ratio, no bound) are
/// empty fields.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in rows {
        match &row.outcome {
            Ok(r) => {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.s,
                    r.diam,
                    r.sigma,
                    r.d_m,
                    r.psi_max,
                    r.psi_min,
                    r.l2_error,
                    r.h1_semi_error,
                    r.h1_error,
                    r.h2_semi,
                    opt(r.ratio),
                    opt(r.lower_bound),
                ));
            }
            Err(_) => {
                out.push_str(&format!("{},,,,,,,,,,,\n", row.s));
            }
        }
    }
    out
}

/// Extracts two columns from sweep CSV text by header name, skipping rows
/// where either field is empty.
pub fn csv_columns(
    text: &str,
    x_col: &str,
    y_col: &str,
) -> Result<(Vec<f64>, Vec<f64>), ExperimentError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(ExperimentError::CsvParse {
        line: 1,
        reason: "empty file".into(),
    })?;
    let cols: Vec<&str> = header.split(',').collect();
    let find = |name: &str| {
        cols.iter()
            .position(|c| *c == name)
            .ok_or_else(|| ExperimentError::UnknownColumn(name.to_string()))
    };
    let xi = find(x_col)?;
    let yi = find(y_col)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let get = |i: usize| -> Result<Option<f64>, ExperimentError> {
            match fields.get(i).map(|f| f.trim()) {
                None | Some("") => Ok(None),
                Some(f) => f.parse::<f64>().map(Some).map_err(|e| {
                    ExperimentError::CsvParse {
                        line: idx + 1,
                        reason: e.to_string(),
                    }
                }),
            }
        };
        if let (Some(x), Some(y)) = (get(xi)?, get(yi)?) {
            xs.push(x);
            ys.push(y);
        }
    }
    Ok((xs, ys))
}

/// Least-squares fit of log y against log x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_rate(xs: &[f64], ys: &[f64]) -> Result<RateFit, ExperimentError> {
    if xs.len() != ys.len() {
        return Err(ExperimentError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 3 {
        return Err(ExperimentError::TooFewPoints(xs.len()));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(ExperimentError::NonPositiveData);
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return Err(ExperimentError::DegenerateAbscissa);
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let sst: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    let r_squared = if sst > 0.0 {
        (1.0 - sse / sst).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Deterministic random polygon and point generators for property tests and
/// empirical condition checks.
pub mod sampling {
    use rand::seq::SliceRandom;
    use rand::Rng;

    use crate::geometry::{Point2, Polygon};

    /// Random strictly convex polygon with exactly `n` vertices, built from
    /// random edge vectors sorted by angle; retries the rare draws that
    /// collapse to fewer vertices or collinear edges.
    pub fn random_convex_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Polygon {
        assert!(n >= 3, "need at least 3 vertices");
        loop {
            if let Ok(poly) = Polygon::new(convex_vertex_walk(rng, n)) {
                if poly.vertex_count() == n {
                    return poly;
                }
            }
        }
    }

    fn convex_vertex_walk<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Point2> {
        let sorted_uniforms = |rng: &mut R| {
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            v.sort_by(f64::total_cmp);
            v
        };
        // Split each coordinate's increments into two monotone chains; the
        // resulting deltas sum to zero in both coordinates.
        let deltas = |vals: &[f64], rng: &mut R| {
            let mut up = vals[0];
            let mut down = vals[0];
            let mut out = Vec::with_capacity(n);
            for &v in &vals[1..n - 1] {
                if rng.gen::<bool>() {
                    out.push(v - up);
                    up = v;
                } else {
                    out.push(down - v);
                    down = v;
                }
            }
            out.push(vals[n - 1] - up);
            out.push(down - vals[n - 1]);
            out
        };
        let xs = sorted_uniforms(rng);
        let ys = sorted_uniforms(rng);
        let dx = deltas(&xs, rng);
        let mut dy = deltas(&ys, rng);
        dy.shuffle(rng);
        let mut edges: Vec<Point2> = dx
            .into_iter()
            .zip(dy)
            .map(|(x, y)| Point2::new(x, y))
            .collect();
        edges.sort_by(|a, b| a.y.atan2(a.x).total_cmp(&b.y.atan2(b.x)));
        let mut vertices = Vec::with_capacity(n);
        let mut cursor = Point2::new(0.0, 0.0);
        for e in edges {
            vertices.push(cursor);
            cursor = cursor + e;
        }
        vertices
    }

    /// Uniform rejection sample of an interior point at relative boundary
    /// margin `margin_frac · diam`.
    pub fn random_interior_point<R: Rng + ?Sized>(
        rng: &mut R,
        polygon: &Polygon,
        margin_frac: f64,
    ) -> Point2 {
        let (mut lo, mut hi) = (
            Point2::new(f64::INFINITY, f64::INFINITY),
            Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for v in polygon.vertices() {
            lo = Point2::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point2::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        let margin = margin_frac * polygon.diameter();
        for _ in 0..100_000 {
            let p = Point2::new(
                rng.gen_range(lo.x..=hi.x),
                rng.gen_range(lo.y..=hi.y),
            );
            if polygon.boundary_distance(p) >= margin {
                return p;
            }
        }
        polygon.centroid()
    }
}
