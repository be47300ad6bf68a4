use std::collections::HashMap;

use num_complex::Complex64;

use super::BoundaryMesh;
use crate::clifford::ComplexVector;
use crate::error::{Error, Result};

type V3 = [f64; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(a: V3) -> V3 {
    let r = dot(a, a).sqrt();
    [a[0] / r, a[1] / r, a[2] / r]
}

/// Area of the spherical triangle with unit vertices `a, b, c` (Van Oosterom–Strackee).
fn spherical_area(a: V3, b: V3, c: V3) -> f64 {
    let num = dot(a, cross(b, c)).abs();
    let den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * num.atan2(den)
}

fn icosahedron() -> (Vec<V3>, Vec<[usize; 3]>) {
    let p = (1.0 + 5f64.sqrt()) / 2.0;
    let verts = [
        [-1.0, p, 0.0],
        [1.0, p, 0.0],
        [-1.0, -p, 0.0],
        [1.0, -p, 0.0],
        [0.0, -1.0, p],
        [0.0, 1.0, p],
        [0.0, -1.0, -p],
        [0.0, 1.0, -p],
        [p, 0.0, -1.0],
        [p, 0.0, 1.0],
        [-p, 0.0, -1.0],
        [-p, 0.0, 1.0],
    ]
    .into_iter()
    .map(normalize)
    .collect();
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (verts, faces)
}

fn subdivide(verts: &mut Vec<V3>, faces: &[[usize; 3]]) -> Vec<[usize; 3]> {
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    let mut mid = |a: usize, b: usize, verts: &mut Vec<V3>| {
        let key = (a.min(b), a.max(b));
        *midpoints.entry(key).or_insert_with(|| {
            let (p, q) = (verts[a], verts[b]);
            verts.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
            verts.len() - 1
        })
    };
    let mut out = Vec::with_capacity(4 * faces.len());
    for &[a, b, c] in faces {
        let ab = mid(a, b, verts);
        let bc = mid(b, c, verts);
        let ca = mid(c, a, verts);
        out.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
    }
    out
}

/// Node count of the icosphere after `level` subdivisions.
pub(crate) fn icosphere_count(level: u32) -> usize {
    10 * 4usize.pow(level) + 2
}

/// Spherical Voronoi area of every vertex: each triangle is split into three
/// kites through its circumcentre and the edge midpoints.
fn voronoi_areas(verts: &[V3], faces: &[[usize; 3]]) -> Vec<f64> {
    let mut area = vec![0.0; verts.len()];
    for &[a, b, c] in faces {
        let (pa, pb, pc) = (verts[a], verts[b], verts[c]);
        let mut o = normalize(cross(sub(pb, pa), sub(pc, pa)));
        if dot(o, pa) < 0.0 {
            o = [-o[0], -o[1], -o[2]];
        }
        let mid = |p: V3, q: V3| normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]);
        let (mab, mbc, mca) = (mid(pa, pb), mid(pb, pc), mid(pc, pa));
        area[a] += spherical_area(pa, mab, o) + spherical_area(pa, o, mca);
        area[b] += spherical_area(pb, mbc, o) + spherical_area(pb, o, mab);
        area[c] += spherical_area(pc, mca, o) + spherical_area(pc, o, mbc);
    }
    area
}

pub(crate) fn icosphere(target: usize, radius: f64) -> Result<BoundaryMesh> {
    if target < icosphere_count(0) {
        return Err(Error::TooFewNodes {
            min: icosphere_count(0),
            got: target,
        });
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let level = (0..8u32)
        .min_by_key(|&l| (icosphere_count(l) as i64 - target as i64).unsigned_abs())
        .expect("non-empty range");
    let (mut verts, mut faces) = icosahedron();
    for _ in 0..level {
        faces = subdivide(&mut verts, &faces);
    }
    let areas = voronoi_areas(&verts, &faces);
    let mut neighbors = vec![Vec::new(); verts.len()];
    let mut h = 0.0f64;
    for &[a, b, c] in &faces {
        for (p, q) in [(a, b), (b, c), (c, a)] {
            if !neighbors[p].contains(&q) {
                neighbors[p].push(q);
                neighbors[q].push(p);
            }
            let d = sub(verts[p], verts[q]);
            h = h.max(radius * dot(d, d).sqrt());
        }
    }
    let nodes: Vec<ComplexVector> = verts
        .iter()
        .map(|v| ComplexVector::from_real(&[radius * v[0], radius * v[1], radius * v[2]]))
        .collect::<Result<_>>()?;
    let normals: Vec<ComplexVector> = verts.iter().map(|v| ComplexVector::from_real(v)).collect::<Result<_>>()?;
    let sigma_abs: Vec<f64> = areas.iter().map(|a| a * radius * radius).collect();
    Ok(BoundaryMesh {
        n: 3,
        nodes,
        normals,
        sigma: sigma_abs.iter().map(|&w| Complex64::new(w, 0.0)).collect(),
        sigma_abs,
        interior_seed: ComplexVector::zero(3),
        exterior_seed: ComplexVector::axis(3, 1, 3.0 * radius),
        h,
        curve: None,
        neighbors,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn rejects_tiny_targets() {
        assert!(matches!(icosphere(11, 1.0), Err(Error::TooFewNodes { min: 12, got: 11 })));
    }

    #[test]
    fn picks_nearest_subdivision_level() {
        assert_eq!(icosphere(12, 1.0).unwrap().len(), 12);
        assert_eq!(icosphere(600, 1.0).unwrap().len(), 642);
        assert_eq!(icosphere(2562, 1.0).unwrap().len(), 2562);
    }

    #[test]
    fn voronoi_weights_tile_the_sphere() {
        for target in [12, 162, 2562] {
            let m = icosphere(target, 1.0).unwrap();
            assert!((m.total_measure() - 4.0 * PI).abs() < 1e-10);
            assert!(m.sigma_abs.iter().all(|&w| w > 0.0));
        }
        let m = icosphere(642, 2.0).unwrap();
        assert!((m.total_measure() - 16.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn first_moment_vanishes_and_normals_are_radial() {
        let m = icosphere(2562, 1.0).unwrap();
        let mut moment = [0.0; 3];
        for (z, w) in m.nodes.iter().zip(&m.sigma_abs) {
            for (acc, c) in moment.iter_mut().zip(z.components()) {
                *acc += c.re * w;
            }
        }
        assert!(moment.iter().all(|x| x.abs() < 1e-10));
        for (z, nv) in m.nodes.iter().zip(&m.normals) {
            assert!((*z - *nv).norm() < 1e-15);
        }
    }

    #[test]
    fn smooth_integrand_converges() {
        // ∫ exp(x_1) dσ = 2π (e - 1/e) on the unit sphere
        let exact = 2.0 * PI * (1f64.exp() - (-1f64).exp());
        let err = |target| {
            let m = icosphere(target, 1.0).unwrap();
            let s: f64 = m.nodes.iter().zip(&m.sigma_abs).map(|(z, w)| z.components()[0].re.exp() * w).sum();
            (s - exact).abs()
        };
        let (a, b) = (err(162), err(642));
        assert!(b < a && b < 1e-2, "{a} {b}");
    }
}
