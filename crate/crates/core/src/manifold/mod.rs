//! Discretized boundaries of domain manifolds in `C^n`.
//!
//! A [`BoundaryMesh`] carries quadrature nodes, complex normals orthogonal to the
//! complexified tangent space under `<z, w> = Σ z_j w_j`, the complex measure
//! weights `σ_j` and their moduli `|σ|_j`. Closed curves (`n = 2`) additionally
//! keep their parametrization so that operators can use tangential differences
//! and near-boundary quadrature can refine along the curve.

mod curve;
mod region;
mod sphere;
mod validate;

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::ComplexVector;
use crate::error::{Error, Result};

pub use curve::{ClosedCurve, CurveShape};
pub use region::{
    approach_path, cone_parameters, region_membership, ApproachPath, Cone, ConeParams, PathRegion, Region,
    CONE_SAMPLES,
};
pub use validate::{validate_domain_manifold, ValidationFailure, ValidationKind, ValidationReport, DEFAULT_MARGIN};

pub(crate) mod serde_complex {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

/// Discretized `∂M`. Field order matches the JSON mesh format.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryMesh {
    pub n: usize,
    pub nodes: Vec<ComplexVector>,
    pub normals: Vec<ComplexVector>,
    #[serde(with = "serde_complex")]
    pub sigma: Vec<Complex64>,
    pub sigma_abs: Vec<f64>,
    pub interior_seed: ComplexVector,
    pub exterior_seed: ComplexVector,
    pub h: f64,
    #[serde(skip)]
    pub curve: Option<ClosedCurve>,
    #[serde(skip)]
    pub neighbors: Vec<Vec<usize>>,
}

impl BoundaryMesh {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of Clifford coefficients per node, `2^n`.
    pub fn blades(&self) -> usize {
        1 << self.n
    }

    pub fn is_real(&self) -> bool {
        self.nodes.iter().all(|z| z.is_real())
            && self.normals.iter().all(|z| z.is_real())
            && self.sigma.iter().all(|s| s.im == 0.0)
    }

    pub fn total_measure(&self) -> f64 {
        self.sigma_abs.iter().sum()
    }

    /// Largest `R^{2n}` distance between two nodes.
    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for (i, a) in self.nodes.iter().enumerate() {
            for b in &self.nodes[i + 1..] {
                d = d.max((*a - *b).norm());
            }
        }
        d
    }

    /// Normal rescaled to unit length in `R^{2n}`.
    pub fn unit_normal(&self, i: usize) -> ComplexVector {
        let nv = self.normals[i];
        nv.scale(1.0 / nv.norm())
    }

    /// Mesh neighbours of node `i`: curve predecessor/successor, triangulation
    /// neighbours, or (for meshes read from disk) the nearest nodes.
    pub fn neighbors_of(&self, i: usize) -> Vec<usize> {
        if self.curve.is_some() {
            let n = self.len();
            return vec![(i + n - 1) % n, (i + 1) % n];
        }
        if let Some(nb) = self.neighbors.get(i) {
            if !nb.is_empty() {
                return nb.clone();
            }
        }
        let k = 2 * (self.n - 1);
        let mut d: Vec<(f64, usize)> = self
            .nodes
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(j, z)| ((*z - self.nodes[i]).norm(), j))
            .collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0));
        d.into_iter().take(k).map(|(_, j)| j).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let mut mesh: Self = serde_json::from_str(s)?;
        mesh.check_consistency()?;
        if mesh.n == 2 {
            mesh.curve = Some(ClosedCurve {
                tangents: curve::tangents_from_weights(&mesh.normals, &mesh.sigma)?,
                shape: None,
            });
        }
        Ok(mesh)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn check_consistency(&self) -> Result<()> {
        crate::clifford::check_dim(self.n)?;
        let len = self.nodes.len();
        for other in [self.normals.len(), self.sigma.len(), self.sigma_abs.len()] {
            if other != len {
                return Err(Error::DimensionMismatch(other, len));
            }
        }
        for z in self.nodes.iter().chain(&self.normals) {
            if z.n() != self.n {
                return Err(Error::DimensionMismatch(z.n(), self.n));
            }
        }
        Ok(())
    }

    /// Unit circle-type mesh: `n = 2`, `N` equispaced nodes on the circle of radius `R`,
    /// trapezoid weights `2πR/N`.
    pub fn circle(count: usize, radius: f64) -> Result<Self> {
        curve::check_count(count)?;
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        let dtheta = 2.0 * PI / count as f64;
        let w = radius * dtheta;
        let mut nodes = Vec::with_capacity(count);
        let mut normals = Vec::with_capacity(count);
        let mut tangents = Vec::with_capacity(count);
        for j in 0..count {
            let t = j as f64 * dtheta;
            let (s, c) = t.sin_cos();
            nodes.push(ComplexVector::from_real(&[radius * c, radius * s])?);
            normals.push(ComplexVector::from_real(&[c, s])?);
            tangents.push(ComplexVector::from_real(&[-radius * s, radius * c])?);
        }
        let mut mesh = Self {
            n: 2,
            nodes,
            normals,
            sigma: vec![Complex64::new(w, 0.0); count],
            sigma_abs: vec![w; count],
            interior_seed: ComplexVector::zero(2),
            exterior_seed: ComplexVector::axis(2, 1, 3.0 * radius),
            h: 0.0,
            curve: Some(ClosedCurve {
                tangents,
                shape: Some(CurveShape::Circle { radius }),
            }),
            neighbors: Vec::new(),
        };
        mesh.h = curve::max_spacing(&mesh.nodes);
        Ok(mesh)
    }

    /// Unit circle pushed into `C^2` along its normal by `i ε cos(kθ)`:
    /// `z(θ) = (1 + i ε cos kθ)(cos θ, sin θ)`.
    ///
    /// Normals and weights come from the complex-bilinear line element, so that
    /// `n_j σ_j = (t_2, -t_1) Δθ` with `t = dz/dθ`. The result must pass
    /// [`validate_domain_manifold`] with the default margin.
    pub fn deformed_curve(count: usize, eps: f64, mode: u32) -> Result<Self> {
        let shape = CurveShape::Deformed { eps, mode };
        let mesh = curve::mesh_from_shape(count, shape)?;
        validate_domain_manifold(&mesh, DEFAULT_MARGIN).map_err(Error::ValidationFailed)?;
        Ok(mesh)
    }

    /// Curve mesh with `count` equispaced parameter nodes on an analytic shape.
    /// Not validated.
    pub fn from_shape(count: usize, shape: CurveShape) -> Result<Self> {
        curve::mesh_from_shape(count, shape)
    }

    /// Icosahedral sphere in `R^3 ⊂ C^3` with spherical-Voronoi weights.
    pub fn sphere(target_nodes: usize, radius: f64) -> Result<Self> {
        sphere::icosphere(target_nodes, radius)
    }
}
