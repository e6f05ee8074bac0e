//! Adaptive integration over convex polygons.
//!
//! The polygon is fanned into triangles around its centroid; a fixed
//! high-order triangle rule integrates each cell, the difference against one
//! level of 4-way refinement serves as the local error estimate, and the
//! worst cell is split greedily until the global estimate meets the relative
//! tolerance or the cell cap trips. Integrands must be pure functions;
//! cells are visited and summed in a fixed order (with compensated final
//! summation), so results are deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::geometry::{Point2, Polygon};

/// Hard cap on the number of leaf cells per integral.
pub const CELL_CAP: usize = 200_000;
/// Polynomial exactness degree of the default rule.
pub const DEFAULT_RULE_DEGREE: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("cell cap reached with estimate {error_estimate:e} on value {value:e} ({cells_used} cells); integrand is close to singular")]
    CellCapExceeded {
        value: f64,
        error_estimate: f64,
        cells_used: usize,
    },
    #[error("integrand returned a non-finite sample")]
    NonFiniteSample,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub a: Point2,
    pub b: Point2,
    pub c: Point2,
}

impl Triangle {
    pub fn new(a: Point2, b: Point2, c: Point2) -> Self {
        Self { a, b, c }
    }

    pub fn signed_area(&self) -> f64 {
        0.5 * (self.b - self.a).cross(self.c - self.a)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// Point at barycentric coordinates (b1, b2, b3).
    pub fn point(&self, bary: [f64; 3]) -> Point2 {
        self.a * bary[0] + self.b * bary[1] + self.c * bary[2]
    }

    /// Uniform 4-way split through the edge midpoints.
    pub fn split4(&self) -> [Triangle; 4] {
        let mab = (self.a + self.b) * 0.5;
        let mbc = (self.b + self.c) * 0.5;
        let mca = (self.c + self.a) * 0.5;
        [
            Triangle::new(self.a, mab, mca),
            Triangle::new(mab, self.b, mbc),
            Triangle::new(mca, mbc, self.c),
            Triangle::new(mab, mbc, mca),
        ]
    }
}

/// Fixed triangle rule: barycentric nodes with weights normalized to sum 1,
/// so an integral over a physical triangle is `area · Σ w_q f(x_q)`.
///
/// Built as a conical product rule: Gauss-Legendre points in the collapsed
/// square, with the Jacobi factor folded into the weights. All nodes are
/// strictly interior and all weights positive; coefficients are computed at
/// construction instead of transcribed from tables.
#[derive(Debug, Clone)]
pub struct TriangleRule {
    degree: usize,
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl TriangleRule {
    /// Rule with polynomial exactness at least `degree` (≥ 1).
    pub fn of_degree(degree: usize) -> Self {
        assert!(degree >= 1, "rule degree must be at least 1");
        // u-direction carries the extra Jacobian factor (1-u), hence one
        // more point than plain 1D exactness would need.
        let n_u = (degree + 3) / 2;
        let n_v = (degree + 2) / 2;
        let (xu, wu) = gauss_legendre_unit(n_u);
        let (xv, wv) = gauss_legendre_unit(n_v);
        let mut nodes = Vec::with_capacity(n_u * n_v);
        let mut weights = Vec::with_capacity(n_u * n_v);
        for (&u, &wui) in xu.iter().zip(&wu) {
            for (&v, &wvj) in xv.iter().zip(&wv) {
                let x = u;
                let y = v * (1.0 - u);
                nodes.push([1.0 - x - y, x, y]);
                weights.push(wui * wvj * (1.0 - u));
            }
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Self {
            degree: (2 * n_u - 2).min(2 * n_v - 1).min(degree.max(1)).max(degree),
            nodes,
            weights,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Single-pass rule application over one triangle.
    pub fn integrate_triangle<F: Fn(Point2) -> f64>(&self, tri: &Triangle, f: &F) -> f64 {
        let mut s = 0.0;
        for (node, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(tri.point(*node));
        }
        tri.area() * s
    }

    /// Rule application returning both the integral and the L1 surrogate
    /// `area · Σ w |f|` used for the roundoff floor.
    fn apply<F: Fn(Point2) -> f64>(&self, tri: &Triangle, f: &F) -> (f64, f64) {
        let mut s = 0.0;
        let mut sa = 0.0;
        for (node, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(tri.point(*node));
            s += w * v;
            sa += w * v.abs();
        }
        let area = tri.area();
        (area * s, area * sa)
    }
}

fn default_rule() -> &'static TriangleRule {
    static RULE: OnceLock<TriangleRule> = OnceLock::new();
    RULE.get_or_init(|| TriangleRule::of_degree(DEFAULT_RULE_DEGREE))
}

/// Gauss-Legendre nodes/weights on [0,1] via Newton on the recurrence.
fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..64 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = if n == 1 {
                1.0
            } else {
                nf * (x * p1 - p0) / (x * x - 1.0)
            };
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th root from the top; mirror for the full set.
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    // Map [-1,1] to [0,1].
    for x in &mut nodes {
        *x = 0.5 * (*x + 1.0);
    }
    for w in &mut weights {
        *w *= 0.5;
    }
    (nodes, weights)
}

/// Fan triangulation around the centroid: n triangles (c, v_i, v_{i+1}).
pub fn triangulate_fan(polygon: &Polygon) -> Vec<Triangle> {
    let c = polygon.centroid();
    let n = polygon.vertex_count();
    (0..n)
        .map(|i| Triangle::new(c, polygon.vertex(i), polygon.vertex(i + 1)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationResult {
    pub value: f64,
    pub error_estimate: f64,
    pub cells_used: usize,
}

struct Cell {
    tri: Triangle,
    children_coarse: [f64; 4],
    refined: f64,
    est: f64,
    l1: f64,
    alive: bool,
}

struct HeapEntry {
    est: f64,
    seq: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Larger estimate first; older cell wins ties for determinism.
        self.est
            .total_cmp(&other.est)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Neumaier-compensated sum in slice order.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Adaptive integral of `f` over the polygon with relative tolerance `tol`.
///
/// Uses the default degree-12 rule and [`CELL_CAP`].
pub fn integrate<F: Fn(Point2) -> f64>(
    polygon: &Polygon,
    f: F,
    tol: f64,
) -> Result<IntegrationResult, QuadratureError> {
    integrate_with_rule(polygon, f, tol, default_rule(), CELL_CAP)
}

/// Adaptive integral with an explicit rule and cell cap.
pub fn integrate_with_rule<F: Fn(Point2) -> f64>(
    polygon: &Polygon,
    f: F,
    tol: f64,
    rule: &TriangleRule,
    cell_cap: usize,
) -> Result<IntegrationResult, QuadratureError> {
    assert!(tol > 0.0 && tol.is_finite(), "tolerance must be positive");
    let mut cells: Vec<Cell> = Vec::new();
    let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
    let mut value = 0.0;
    let mut est = 0.0;
    let mut l1 = 0.0;
    let mut alive = 0usize;

    let push_cell = |tri: Triangle,
                         coarse: Option<f64>,
                         cells: &mut Vec<Cell>,
                         heap: &mut BinaryHeap<HeapEntry>|
     -> Result<(f64, f64, f64), QuadratureError> {
        let (coarse, _) = match coarse {
            Some(c) => (c, 0.0),
            None => rule.apply(&tri, &f),
        };
        let kids = tri.split4();
        let mut children_coarse = [0.0; 4];
        let mut refined = 0.0;
        let mut cl1 = 0.0;
        for (k, kid) in kids.iter().enumerate() {
            let (v, a) = rule.apply(kid, &f);
            children_coarse[k] = v;
            refined += v;
            cl1 += a;
        }
        if !(coarse.is_finite() && refined.is_finite() && cl1.is_finite()) {
            return Err(QuadratureError::NonFiniteSample);
        }
        let cest = (coarse - refined).abs();
        heap.push(HeapEntry {
            est: cest,
            seq: cells.len(),
        });
        cells.push(Cell {
            tri,
            children_coarse,
            refined,
            est: cest,
            l1: cl1,
            alive: true,
        });
        Ok((refined, cest, cl1))
    };

    for tri in triangulate_fan(polygon) {
        let (v, e, a) = push_cell(tri, None, &mut cells, &mut heap)?;
        value += v;
        est += e;
        l1 += a;
        alive += 1;
    }

    let converged = |value: f64, est: f64, l1: f64| {
        // The absolute floor lets integrals at roundoff level (for example, of
        // an interpolation error that is exactly zero) terminate.
        est <= tol * value.abs() || est <= f64::EPSILON * (1.0 + l1)
    };

    while !converged(value, est, l1) {
        if alive >= cell_cap {
            let (v, e) = final_sums(&cells);
            return Err(QuadratureError::CellCapExceeded {
                value: v,
                error_estimate: e,
                cells_used: alive,
            });
        }
        let worst = loop {
            match heap.pop() {
                Some(entry) if cells[entry.seq].alive && cells[entry.seq].est == entry.est => {
                    break Some(entry.seq)
                }
                Some(_) => continue,
                None => break None,
            }
        };
        let Some(idx) = worst else { break };
        let parent_tris = cells[idx].tri.split4();
        let parent_children = cells[idx].children_coarse;
        cells[idx].alive = false;
        value -= cells[idx].refined;
        est -= cells[idx].est;
        l1 -= cells[idx].l1;
        alive -= 1;
        for (k, kid) in parent_tris.into_iter().enumerate() {
            let (v, e, a) = push_cell(kid, Some(parent_children[k]), &mut cells, &mut heap)?;
            value += v;
            est += e;
            l1 += a;
            alive += 1;
        }
    }

    let (value, error_estimate) = final_sums(&cells);
    Ok(IntegrationResult {
        value,
        error_estimate,
        cells_used: alive,
    })
}

fn final_sums(cells: &[Cell]) -> (f64, f64) {
    let value = compensated_sum(cells.iter().filter(|c| c.alive).map(|c| c.refined));
    let est = compensated_sum(cells.iter().filter(|c| c.alive).map(|c| c.est));
    (value, est)
}
