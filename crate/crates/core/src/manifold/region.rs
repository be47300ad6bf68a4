use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BoundaryMesh, CurveShape};
use crate::clifford::{omega, ComplexVector, NULL_TOL};
use crate::error::{Error, Result};
use crate::quadrature::halton;

/// Minimum number of deterministic samples used to certify a cone.
pub const CONE_SAMPLES: usize = 64;

const ANGLE_SCHEDULE: [f64; 5] = [PI / 3.0, PI / 4.0, PI / 6.0, PI / 8.0, PI / 12.0];
const RADIUS_SCHEDULE: [f64; 6] = [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// Cell of harmonicity `M†`.
    Interior,
    /// Exterior cell `M†′`.
    Exterior,
    NearBoundary,
    /// Off the barrier, but not connected to either seed by the test.
    Unresolved,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathRegion {
    Interior,
    Exterior,
}

impl PathRegion {
    pub fn region(self) -> Region {
        match self {
            PathRegion::Interior => Region::Interior,
            PathRegion::Exterior => Region::Exterior,
        }
    }
}

fn alpha(z: &[Complex64]) -> Complex64 {
    z[0] + Complex64::i() * z[1]
}

fn beta(z: &[Complex64]) -> Complex64 {
    z[0] - Complex64::i() * z[1]
}

struct Winding {
    turns: f64,
    closest: f64,
}

fn arc_winding(
    shape: &CurveShape,
    proj: fn(&[Complex64]) -> Complex64,
    q: Complex64,
    (t0, t1): (f64, f64),
    (a, b): (Complex64, Complex64),
    depth: u32,
    closest: &mut f64,
) -> f64 {
    let len = (b - a).norm();
    let d = (a - q).norm().min((b - q).norm());
    *closest = closest.min(d);
    if depth >= 48 || d > 2.0 * len {
        return ((b - q) / (a - q)).arg();
    }
    let tm = 0.5 * (t0 + t1);
    let m = proj(&shape.point(tm));
    arc_winding(shape, proj, q, (t0, tm), (a, m), depth + 1, closest)
        + arc_winding(shape, proj, q, (tm, t1), (m, b), depth + 1, closest)
}

/// Winding number of the planar curve `proj(∂M)` about `q`, refining along the
/// analytic parametrization when one is available.
fn winding(mesh: &BoundaryMesh, proj: fn(&[Complex64]) -> Complex64, q: Complex64) -> Winding {
    let n = mesh.len();
    let shape = mesh.curve.as_ref().and_then(|c| c.shape.as_ref());
    let dtheta = 2.0 * PI / n as f64;
    let pts: Vec<Complex64> = mesh.nodes.iter().map(|z| proj(z.components())).collect();
    let mut total = 0.0;
    let mut closest = f64::INFINITY;
    for j in 0..n {
        let (a, b) = (pts[j], pts[(j + 1) % n]);
        total += match shape {
            Some(s) => {
                let t0 = j as f64 * dtheta;
                arc_winding(s, proj, q, (t0, t0 + dtheta), (a, b), 0, &mut closest)
            }
            None => {
                closest = closest.min((a - q).norm());
                ((b - q) / (a - q)).arg()
            }
        };
    }
    Winding {
        turns: total / (2.0 * PI),
        closest,
    }
}

fn on_barrier(u: &ComplexVector, mesh: &BoundaryMesh, tol: f64) -> bool {
    mesh.nodes.iter().any(|z| {
        let d = *u - *z;
        d.square().norm() <= tol * (1.0 + d.norm_sqr())
    })
}

fn winding_class(u: &ComplexVector, mesh: &BoundaryMesh, tol: f64) -> Option<(i64, i64)> {
    let c = u.components();
    let scale = 1.0 + u.norm();
    let mut out = [0i64; 2];
    for (slot, proj) in out.iter_mut().zip([alpha as fn(&[Complex64]) -> Complex64, beta]) {
        let w = winding(mesh, proj, proj(c));
        if w.closest <= tol.sqrt() * scale || (w.turns - w.turns.round()).abs() > 0.25 {
            return None;
        }
        *slot = w.turns.round() as i64;
    }
    Some((out[0], out[1]))
}

/// Solid-angle indicator of a closed real surface: 1 inside, 0 outside.
fn gauss_indicator(x: &ComplexVector, mesh: &BoundaryMesh) -> f64 {
    let n = mesh.n;
    let s: f64 = mesh
        .nodes
        .iter()
        .zip(&mesh.normals)
        .zip(&mesh.sigma_abs)
        .map(|((z, nv), w)| {
            let d = *z - *x;
            d.real_inner(nv) / d.norm().powi(n as i32) * w
        })
        .sum();
    s / omega(n)
}

fn nearest(x: &ComplexVector, mesh: &BoundaryMesh) -> (usize, f64) {
    mesh.nodes
        .iter()
        .enumerate()
        .map(|(i, z)| (i, (*z - *x).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty mesh")
}

/// Side of a real surface and a conservative distance to it.
fn real_side(x: &ComplexVector, mesh: &BoundaryMesh) -> (Region, f64) {
    let (i, d) = nearest(x, mesh);
    if d < 3.0 * mesh.h {
        let off = (*x - mesh.nodes[i]).real_inner(&mesh.unit_normal(i));
        let side = if off < 0.0 { Region::Interior } else { Region::Exterior };
        (side, d.min(off.abs()))
    } else {
        let side = if gauss_indicator(x, mesh) > 0.5 {
            Region::Interior
        } else {
            Region::Exterior
        };
        (side, d - mesh.h)
    }
}

/// Classifies `u` against the cells of harmonicity using the default barrier tolerance.
pub fn region_membership(u: &ComplexVector, mesh: &BoundaryMesh) -> Region {
    region_membership_with_tol(u, mesh, NULL_TOL)
}

/// Classifies `u`: first the null-cone barrier test against every node, then a
/// connection test to the interior or exterior seed.
///
/// For `n = 2` the null cone of `z` is `{α(u) = α(z)} ∪ {β(u) = β(z)}` with
/// `α = u_1 + i u_2`, `β = u_1 - i u_2`, so the components of the complement are
/// labelled by the winding numbers of `α(∂M)` about `α(u)` and of `β(∂M)` about
/// `β(u)`. For real surfaces in higher dimension, `u = x + iy` is connected to
/// the real point `x` whenever `||y||` stays below the distance from `x` to `∂M`.
pub fn region_membership_with_tol(u: &ComplexVector, mesh: &BoundaryMesh, tol: f64) -> Region {
    if u.n() != mesh.n || on_barrier(u, mesh, tol) {
        return if u.n() != mesh.n { Region::Unresolved } else { Region::NearBoundary };
    }
    if mesh.n == 2 {
        let Some(cls) = winding_class(u, mesh, tol) else {
            return Region::NearBoundary;
        };
        if Some(cls) == winding_class(&mesh.interior_seed, mesh, tol) {
            Region::Interior
        } else if Some(cls) == winding_class(&mesh.exterior_seed, mesh, tol) {
            Region::Exterior
        } else {
            Region::Unresolved
        }
    } else {
        if !mesh.is_real() {
            return Region::Unresolved;
        }
        let (side, dist) = real_side(&u.re(), mesh);
        if u.is_real() || u.im().norm() < 0.99 * dist {
            side
        } else {
            Region::Unresolved
        }
    }
}

/// Truncated cone `Γ(w, u, α, r)`: points `z` with `0 < ||z - w|| < r` whose
/// angle to the axis `u` in `R^{2n}` is below `α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cone {
    pub apex: ComplexVector,
    pub axis: ComplexVector,
    pub half_angle: f64,
    pub radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeParams {
    pub half_angle: f64,
    pub radius: f64,
}

impl Cone {
    pub fn new(apex: ComplexVector, axis: ComplexVector, half_angle: f64, radius: f64) -> Result<Self> {
        if apex.n() != axis.n() {
            return Err(Error::DimensionMismatch(apex.n(), axis.n()));
        }
        if !(half_angle > 0.0 && half_angle < PI / 2.0) {
            return Err(Error::InvalidArgument(format!("half-angle {half_angle} outside (0, π/2)")));
        }
        if !(radius > 0.0) || axis.norm() == 0.0 {
            return Err(Error::InvalidArgument("cone needs a positive radius and non-zero axis".into()));
        }
        Ok(Self {
            apex,
            axis,
            half_angle,
            radius,
        })
    }

    pub fn contains(&self, z: &ComplexVector) -> bool {
        let d = *z - self.apex;
        let rho = d.norm();
        rho > 0.0 && rho < self.radius && d.real_inner(&self.axis) > rho * self.axis.norm() * self.half_angle.cos()
    }

    /// Deterministic Halton sample of the cone: radius with the `ρ^{1/(2n)}` law,
    /// polar angle with uniform cosine, transverse direction from the remaining
    /// coordinates. Each call with a larger `count` extends the previous set.
    pub fn samples(&self, count: usize) -> Vec<ComplexVector> {
        let n = self.apex.n();
        let dim = 2 * n;
        let axis = self.axis.scale(1.0 / self.axis.norm());
        let cos_a = self.half_angle.cos();
        let mut out = Vec::with_capacity(count);
        let mut index = 1;
        while out.len() < count {
            let h = halton(index, dim + 2);
            index += 1;
            let rho = self.radius * h[0].powf(1.0 / dim as f64);
            let cphi = cos_a + (1.0 - cos_a) * h[1];
            let comps: Vec<Complex64> =
                (0..n).map(|j| Complex64::new(2.0 * h[2 + 2 * j] - 1.0, 2.0 * h[3 + 2 * j] - 1.0)).collect();
            let g = ComplexVector::new(&comps).expect("cone dimension");
            let perp = g - axis.scale(g.real_inner(&axis));
            if perp.norm() < 1e-8 {
                continue;
            }
            let perp = perp.scale(1.0 / perp.norm());
            let dir = axis.scale(cphi) + perp.scale((1.0 - cphi * cphi).max(0.0).sqrt());
            out.push(self.apex + dir.scale(rho));
        }
        out
    }
}

fn cone_fits(mesh: &BoundaryMesh, half_angle: f64, radius: f64) -> bool {
    (0..mesh.len()).into_par_iter().all(|i| {
        let cone = Cone {
            apex: mesh.nodes[i],
            axis: -mesh.unit_normal(i),
            half_angle,
            radius,
        };
        cone.samples(CONE_SAMPLES)
            .iter()
            .all(|z| region_membership(z, mesh) == Region::Interior)
    })
}

fn scale_of(mesh: &BoundaryMesh) -> f64 {
    mesh.nodes
        .iter()
        .map(|z| (*z - mesh.interior_seed).norm())
        .fold(0.0, f64::max)
}

/// Largest `(α, r)` of a fixed schedule (angles first, then radii in units of
/// the mesh radius about the interior seed) whose inward cones at every node
/// sample entirely inside `M†`.
pub fn cone_parameters(mesh: &BoundaryMesh) -> Result<ConeParams> {
    let scale = scale_of(mesh);
    for &half_angle in &ANGLE_SCHEDULE {
        for &r in &RADIUS_SCHEDULE {
            if cone_fits(mesh, half_angle, r * scale) {
                return Ok(ConeParams {
                    half_angle,
                    radius: r * scale,
                });
            }
        }
    }
    Err(Error::NoValidCone)
}

/// Straight path to a boundary node along its normal, sampled at `s_k = r 2^{-k}`.
#[derive(Clone, Debug, Serialize)]
pub struct ApproachPath {
    pub target: usize,
    pub apex: ComplexVector,
    /// Unit vector in `R^{2n}` from the apex into the requested region.
    pub direction: ComplexVector,
    pub region: PathRegion,
    pub radius: f64,
    pub distances: Vec<f64>,
}

impl ApproachPath {
    pub fn point(&self, k: usize) -> ComplexVector {
        self.apex + self.direction.scale(self.distances[k])
    }

    pub fn points(&self) -> Vec<ComplexVector> {
        (0..self.distances.len()).map(|k| self.point(k)).collect()
    }

    /// Path parameters `t_k = 1 - s_k / r`, increasing towards 1.
    pub fn parameters(&self) -> Vec<f64> {
        self.distances.iter().map(|s| 1.0 - s / self.radius).collect()
    }
}

/// Builds the path `w ∓ s n̂_w`, `k = 0..=depth`, and checks every sample.
pub fn approach_path(
    mesh: &BoundaryMesh,
    node: usize,
    region: PathRegion,
    cone: &ConeParams,
    depth: usize,
) -> Result<ApproachPath> {
    if node >= mesh.len() {
        return Err(Error::InvalidArgument(format!("node {node} out of range")));
    }
    let nhat = mesh.unit_normal(node);
    let direction = match region {
        PathRegion::Interior => -nhat,
        PathRegion::Exterior => nhat,
    };
    let path = ApproachPath {
        target: node,
        apex: mesh.nodes[node],
        direction,
        region,
        radius: cone.radius,
        distances: (0..=depth).map(|k| cone.radius * 0.5f64.powi(k as i32)).collect(),
    };
    for (step, z) in path.points().iter().enumerate() {
        if region_membership(z, mesh) != region.region() {
            return Err(Error::PathOutsideRegion { node, step });
        }
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_seeds_and_nodes() {
        let m = BoundaryMesh::circle(64, 1.0).unwrap();
        assert_eq!(region_membership(&ComplexVector::zero(2), &m), Region::Interior);
        assert_eq!(region_membership(&ComplexVector::axis(2, 1, 3.0), &m), Region::Exterior);
        assert_eq!(region_membership(&m.nodes[1], &m), Region::NearBoundary);
    }

    #[test]
    fn circle_classification_between_nodes() {
        let m = BoundaryMesh::circle(16, 1.0).unwrap();
        let th: f64 = PI / 16.0;
        for (r, want) in [(0.999, Region::Interior), (1.001, Region::Exterior)] {
            let u = ComplexVector::from_real(&[r * th.cos(), r * th.sin()]).unwrap();
            assert_eq!(region_membership(&u, &m), want);
        }
    }

    #[test]
    fn complex_points_of_the_lie_ball() {
        // for the unit disk, M† = {|α| < 1, |β| < 1}
        let m = BoundaryMesh::circle(64, 1.0).unwrap();
        let inside = ComplexVector::new(&[Complex64::new(0.3, 0.2), Complex64::new(0.1, -0.3)]).unwrap();
        assert_eq!(region_membership(&inside, &m), Region::Interior);
        // α = 0, β = 2
        let mixed = ComplexVector::new(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]).unwrap();
        assert_eq!(region_membership(&mixed, &m), Region::Unresolved);
    }

    #[test]
    fn sphere_real_and_complex_points() {
        let m = BoundaryMesh::sphere(642, 1.0).unwrap();
        assert_eq!(region_membership(&ComplexVector::zero(3), &m), Region::Interior);
        assert_eq!(region_membership(&ComplexVector::axis(3, 2, 1.5), &m), Region::Exterior);
        let u = ComplexVector::new(&[Complex64::new(0.2, 0.3), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.1)]).unwrap();
        assert_eq!(region_membership(&u, &m), Region::Interior);
    }

    #[test]
    fn cone_membership_and_axis_scaling() {
        let apex = ComplexVector::from_real(&[1.0, 0.0]).unwrap();
        let axis = ComplexVector::from_real(&[-1.0, 0.0]).unwrap();
        let c = Cone::new(apex, axis, PI / 4.0, 0.5).unwrap();
        let c2 = Cone::new(apex, axis.scale(7.5), PI / 4.0, 0.5).unwrap();
        for s in c.samples(200) {
            assert!(c.contains(&s));
            assert!(c2.contains(&s));
        }
        assert!(!c.contains(&apex));
        assert!(!c.contains(&ComplexVector::from_real(&[0.4, 0.0]).unwrap()));
        assert!(!c.contains(&ComplexVector::from_real(&[0.8, 0.3]).unwrap()));
        assert!(c.contains(&ComplexVector::from_real(&[0.8, 0.1]).unwrap()));
    }

    #[test]
    fn cone_samples_extend_monotonically() {
        let c = Cone::new(ComplexVector::zero(2), ComplexVector::axis(2, 1, 1.0), 0.5, 1.0).unwrap();
        let a = c.samples(64);
        let b = c.samples(128);
        assert_eq!(&b[..64], &a[..]);
    }

    #[test]
    fn unit_circle_admits_quarter_cones() {
        let m = BoundaryMesh::circle(64, 1.0).unwrap();
        let p = cone_parameters(&m).unwrap();
        assert!(p.half_angle >= PI / 4.0 - 1e-12 && p.radius >= 0.5, "{p:?}");
        // sixty-degree cones leave the cell through the imaginary directions
        assert!(!cone_fits(&m, PI / 3.0, 0.25));
    }

    #[test]
    fn deformed_curve_admits_some_cone() {
        let m = BoundaryMesh::deformed_curve(64, 0.05, 2).unwrap();
        let p = cone_parameters(&m).unwrap();
        assert!(p.radius > 0.0 && p.half_angle > 0.0);
    }

    #[test]
    fn approach_paths_on_the_circle() {
        let m = BoundaryMesh::circle(64, 1.0).unwrap();
        let cone = ConeParams {
            half_angle: PI / 4.0,
            radius: 0.5,
        };
        let p = approach_path(&m, 5, PathRegion::Interior, &cone, 10).unwrap();
        assert_eq!(p.distances.len(), 11);
        assert!((p.distances[10] - 0.5 / 1024.0).abs() < 1e-18);
        assert!(((p.point(10) - m.nodes[5]).norm() - 0.5 / 1024.0).abs() < 1e-15);
        let q = approach_path(&m, 5, PathRegion::Exterior, &cone, 10).unwrap();
        assert!(q.point(0).norm() > 1.0);
        assert!(p.parameters().windows(2).all(|w| w[0] < w[1]));
    }
}
