//! Shared property checks over randomly sampled convex polygons.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wachspress::experiments::sampling;
use wachspress::geometry::{AffineMap, Point2, Polygon};
use wachspress::wachspress::{coordinate_gradients, coordinates, Form};

pub struct PropertyStats {
    pub polygons: usize,
    pub points: usize,
}

/// Runs the full basis property suite over `polygon_count` random convex
/// polygons with 3..=8 vertices: partition of unity, non-negativity, linear
/// precision and completeness, vertex interpolation, affine invariance,
/// gradient-vs-finite-difference agreement, and cotangent/area form
/// agreement. Panics on the first violation.
pub fn run_property_suite(seed: u64, polygon_count: usize) -> PropertyStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points_checked = 0usize;
    for poly_idx in 0..polygon_count {
        let n = 3 + poly_idx % 6;
        let poly = sampling::random_convex_polygon(&mut rng, n);
        let diam = poly.diameter();
        let ell = (
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let ell_at = |q: Point2| ell.0 + ell.1 * q.x + ell.2 * q.y;
        let ell_scale = poly
            .vertices()
            .iter()
            .map(|&v| ell_at(v).abs())
            .fold(1.0_f64, f64::max);

        // Orientation-preserving affine map for the invariance check.
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let scale = rng.gen_range(0.5..2.0);
        let shear = rng.gen_range(-1.0..1.0);
        let (st, ct) = theta.sin_cos();
        let map = AffineMap::new(
            [
                [scale * (ct + shear * st), scale * (shear * ct - st)],
                [scale * st, scale * ct],
            ],
            Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
        assert!(map.det() > 0.0);
        let mapped = poly.apply_affine(&map).unwrap();

        for pt_idx in 0..100 {
            let x = sampling::random_interior_point(&mut rng, &poly, 1e-6);
            points_checked += 1;
            let eval = coordinates(&poly, x, Form::Area).unwrap();
            let lam = &eval.coords;

            let sum: f64 = lam.iter().sum();
            assert!((sum - 1.0).abs() <= 1e-12, "partition of unity: {sum}");
            for (i, &li) in lam.iter().enumerate() {
                assert!(li >= -1e-12, "negativity at basis {i}: {li}");
            }
            let recon = lam
                .iter()
                .enumerate()
                .fold(Point2::new(0.0, 0.0), |acc, (i, &li)| {
                    acc + poly.vertex(i) * li
                });
            assert!(
                (recon - x).norm() <= 1e-11 * diam,
                "linear precision: {:?} vs {:?}",
                recon,
                x
            );
            let interp: f64 = lam
                .iter()
                .enumerate()
                .map(|(i, &li)| ell_at(poly.vertex(i)) * li)
                .sum();
            assert!(
                (interp - ell_at(x)).abs() <= 1e-11 * ell_scale,
                "linear completeness: {interp} vs {}",
                ell_at(x)
            );

            // Affine invariance on a subsample.
            if pt_idx % 10 == 0 {
                let lam_mapped = coordinates(&mapped, map.apply(x), Form::Area)
                    .unwrap()
                    .coords;
                for i in 0..lam.len() {
                    assert!(
                        (lam[i] - lam_mapped[i]).abs() <= 1e-10,
                        "affine invariance at basis {i}: {} vs {}",
                        lam[i],
                        lam_mapped[i]
                    );
                }
            }
        }

        // Vertex interpolation is exact.
        for j in 0..n {
            let lam = coordinates(&poly, poly.vertex(j), Form::Area).unwrap().coords;
            for (i, &li) in lam.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((li - expect).abs() <= 1e-14, "delta property ({i},{j}): {li}");
            }
        }

        // Form agreement and gradients, away from the boundary.
        for _ in 0..10 {
            let x = sampling::random_interior_point(&mut rng, &poly, 0.01);
            let area = coordinates(&poly, x, Form::Area).unwrap().coords;
            let cot = coordinates(&poly, x, Form::Cotangent).unwrap().coords;
            for i in 0..n {
                assert!(
                    (area[i] - cot[i]).abs() <= 1e-10 * area[i].abs().max(1e-14),
                    "form agreement at basis {i}: {} vs {}",
                    area[i],
                    cot[i]
                );
            }

            let grads = coordinate_gradients(&poly, x).unwrap();
            let gsum = grads.iter().fold(Point2::new(0.0, 0.0), |a, &g| a + g);
            assert!(gsum.norm() <= 1e-9 / diam.min(1.0), "gradient sum {gsum:?}");
            let h = 1e-6 * diam;
            let lam_at = |q: Point2| coordinates(&poly, q, Form::Area).unwrap().coords;
            let (xp, xm) = (lam_at(Point2::new(x.x + h, x.y)), lam_at(Point2::new(x.x - h, x.y)));
            let (yp, ym) = (lam_at(Point2::new(x.x, x.y + h)), lam_at(Point2::new(x.x, x.y - h)));
            for i in 0..n {
                let fd = Point2::new((xp[i] - xm[i]) / (2.0 * h), (yp[i] - ym[i]) / (2.0 * h));
                let denom = grads[i].norm().max(fd.norm());
                if denom > 1e-12 / diam {
                    assert!(
                        (grads[i] - fd).norm() / denom <= 1e-6,
                        "gradient fd mismatch at basis {i}: {:?} vs {:?}",
                        grads[i],
                        fd
                    );
                }
            }
        }

        // Triangles reduce to classical barycentric coordinates.
        if n == 3 {
            let total = poly.area();
            let vs = poly.vertices().to_vec();
            for _ in 0..5 {
                let x = sampling::random_interior_point(&mut rng, &poly, 1e-6);
                let lam = coordinates(&poly, x, Form::Area).unwrap().coords;
                let sub = |a: Point2, b: Point2| 0.5 * (a - x).cross(b - x) / total;
                let expect = [sub(vs[1], vs[2]), sub(vs[2], vs[0]), sub(vs[0], vs[1])];
                for i in 0..3 {
                    assert!(
                        (lam[i] - expect[i]).abs() <= 1e-12,
                        "barycentric mismatch {i}: {} vs {}",
                        lam[i],
                        expect[i]
                    );
                }
            }
        }

        // Interior angles close up.
        let angle_sum: f64 = poly.interior_angles().iter().sum();
        assert!((angle_sum - (n as f64 - 2.0) * std::f64::consts::PI).abs() <= 1e-9);
    }
    PropertyStats {
        polygons: polygon_count,
        points: points_checked,
    }
}
