use std::f64::consts::PI;

use num_complex::Complex64;

use super::BoundaryMesh;
use crate::clifford::ComplexVector;
use crate::error::{Error, Result};

pub(crate) const MIN_CURVE_NODES: usize = 8;

type C2 = [Complex64; 2];

/// Closed curve data kept alongside a mesh: derivative `dz/dθ` at each node
/// (nodes sit at `θ_j = 2πj/N`) and, when known, the analytic shape.
#[derive(Clone, Debug)]
pub struct ClosedCurve {
    pub tangents: Vec<ComplexVector>,
    pub shape: Option<CurveShape>,
}

/// Analytic curves in `C^2` parametrized by `θ ∈ [0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveShape {
    Circle {
        radius: f64,
    },
    /// `(1 + i ε cos kθ)(cos θ, sin θ)`
    Deformed {
        eps: f64,
        mode: u32,
    },
    /// Preimage of `base` under `z -> (z + a)^{-1}`, i.e. `u^{-1} - a`.
    Kelvin {
        base: Box<CurveShape>,
        a: [Complex64; 2],
    },
}

fn dot(a: &C2, b: &C2) -> Complex64 {
    a[0] * b[0] + a[1] * b[1]
}

impl CurveShape {
    pub fn point(&self, theta: f64) -> C2 {
        let (s, c) = theta.sin_cos();
        match self {
            CurveShape::Circle { radius } => [Complex64::new(radius * c, 0.0), Complex64::new(radius * s, 0.0)],
            CurveShape::Deformed { eps, mode } => {
                let f = Complex64::new(1.0, eps * (*mode as f64 * theta).cos());
                [f * c, f * s]
            }
            CurveShape::Kelvin { base, a } => {
                let u = base.point(theta);
                let q = dot(&u, &u);
                [-u[0] / q - a[0], -u[1] / q - a[1]]
            }
        }
    }

    pub fn tangent(&self, theta: f64) -> C2 {
        let (s, c) = theta.sin_cos();
        match self {
            CurveShape::Circle { radius } => [Complex64::new(-radius * s, 0.0), Complex64::new(radius * c, 0.0)],
            CurveShape::Deformed { eps, mode } => {
                let k = *mode as f64;
                let f = Complex64::new(1.0, eps * (k * theta).cos());
                let df = Complex64::new(0.0, -eps * k * (k * theta).sin());
                [df * c - f * s, df * s + f * c]
            }
            CurveShape::Kelvin { base, .. } => {
                let u = base.point(theta);
                let du = base.tangent(theta);
                let q = dot(&u, &u);
                let dq = 2.0 * dot(&u, &du);
                // d/dθ (-u/q) = -u'/q + u q'/q^2
                [-du[0] / q + u[0] * dq / (q * q), -du[1] / q + u[1] * dq / (q * q)]
            }
        }
    }

    fn seeds(&self, nodes: &[ComplexVector]) -> (ComplexVector, ComplexVector) {
        match self {
            CurveShape::Circle { radius } => (ComplexVector::zero(2), ComplexVector::axis(2, 1, 3.0 * radius)),
            CurveShape::Deformed { .. } => (ComplexVector::zero(2), ComplexVector::axis(2, 1, 3.0)),
            CurveShape::Kelvin { .. } => {
                let mut c = [0.0; 2];
                let mut xmax = f64::NEG_INFINITY;
                let mut xmin = f64::INFINITY;
                for z in nodes {
                    let (x, y) = (z.components()[0].re, z.components()[1].re);
                    c[0] += x;
                    c[1] += y;
                    xmax = xmax.max(x);
                    xmin = xmin.min(x);
                }
                c[0] /= nodes.len() as f64;
                c[1] /= nodes.len() as f64;
                let inside = ComplexVector::from_real(&c).expect("n = 2");
                let outside = ComplexVector::from_real(&[xmax + 2.0 * (xmax - xmin), c[1]]).expect("n = 2");
                (inside, outside)
            }
        }
    }
}

pub(crate) fn check_count(count: usize) -> Result<()> {
    if count < MIN_CURVE_NODES {
        return Err(Error::TooFewNodes {
            min: MIN_CURVE_NODES,
            got: count,
        });
    }
    Ok(())
}

pub(crate) fn max_spacing(nodes: &[ComplexVector]) -> f64 {
    let n = nodes.len();
    (0..n).map(|j| (nodes[(j + 1) % n] - nodes[j]).norm()).fold(0.0, f64::max)
}

/// Square roots of `t·t` along the curve, continued from the principal branch
/// at `θ = 0` so that the line element varies continuously.
pub(crate) fn continuous_line_elements(tangents: &[ComplexVector]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(tangents.len());
    for t in tangents {
        let mut s = t.dot(t).sqrt();
        if let Some(prev) = out.last() {
            if (s - prev).norm() > (-s - prev).norm() {
                s = -s;
            }
        }
        out.push(s);
    }
    out
}

/// Parametric tangents recovered from stored normals and weights,
/// `t = (-(nσ)_2, (nσ)_1) / Δθ`, for meshes read back without their curve data.
pub(crate) fn tangents_from_weights(normals: &[ComplexVector], sigma: &[Complex64]) -> Result<Vec<ComplexVector>> {
    let dtheta = 2.0 * PI / normals.len() as f64;
    normals
        .iter()
        .zip(sigma)
        .map(|(n, s)| {
            let c = n.components();
            ComplexVector::new(&[-c[1] * s / dtheta, c[0] * s / dtheta])
        })
        .collect()
}

/// Builds a curve mesh from nodes and parametric tangents: `n σ = (t_2, -t_1) Δθ`
/// with `σ = sqrt(t·t) Δθ`.
pub(crate) fn mesh_from_samples(
    nodes: Vec<ComplexVector>,
    tangents: Vec<ComplexVector>,
    shape: Option<CurveShape>,
    seeds: (ComplexVector, ComplexVector),
) -> Result<BoundaryMesh> {
    check_count(nodes.len())?;
    let dtheta = 2.0 * PI / nodes.len() as f64;
    let line = continuous_line_elements(&tangents);
    let mut normals = Vec::with_capacity(nodes.len());
    let mut sigma = Vec::with_capacity(nodes.len());
    for (t, s) in tangents.iter().zip(&line) {
        if s.norm() == 0.0 {
            return Err(Error::NullVector { square_abs: 0.0 });
        }
        let tc = t.components();
        normals.push(ComplexVector::new(&[tc[1] / s, -tc[0] / s])?);
        sigma.push(s * dtheta);
    }
    let sigma_abs = sigma.iter().map(|s| s.norm()).collect();
    let h = max_spacing(&nodes);
    Ok(BoundaryMesh {
        n: 2,
        nodes,
        normals,
        sigma,
        sigma_abs,
        interior_seed: seeds.0,
        exterior_seed: seeds.1,
        h,
        curve: Some(ClosedCurve { tangents, shape }),
        neighbors: Vec::new(),
    })
}

pub(crate) fn mesh_from_shape(count: usize, shape: CurveShape) -> Result<BoundaryMesh> {
    check_count(count)?;
    let dtheta = 2.0 * PI / count as f64;
    let mut nodes = Vec::with_capacity(count);
    let mut tangents = Vec::with_capacity(count);
    for j in 0..count {
        let th = j as f64 * dtheta;
        nodes.push(ComplexVector::new(&shape.point(th))?);
        tangents.push(ComplexVector::new(&shape.tangent(th))?);
    }
    let seeds = shape.seeds(&nodes);
    mesh_from_samples(nodes, tangents, Some(shape), seeds)
}
