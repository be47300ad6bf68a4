//! Kelvin inversion `ψ(z) = (z + a)^{-1}` and the covariance of the Cauchy
//! integral under it.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clifford::{cauchy_kernel, vector_inverse, ComplexVector, Multivector};
use crate::error::{Error, Result};
use crate::manifold::{BoundaryMesh, CurveShape};
use crate::operators::BoundaryFunction;

/// Gap below which an intertwining reading counts as an identity.
pub const INTERTWINING_TOL: f64 = 1e-10;

/// `ψ(z) = (z + a)^{-1}` between a source curve `∂M` and its preimage
/// `∂ψ^{-1}(M) = {u^{-1} - a : u ∈ ∂M}`.
///
/// Image nodes are the exact preimages of the source nodes (same parameter
/// values), and their weights come from the analytic preimage curve.
#[derive(Clone, Debug)]
pub struct KelvinMap {
    a: ComplexVector,
    source: Arc<BoundaryMesh>,
    image: Arc<BoundaryMesh>,
}

impl KelvinMap {
    pub fn new(source: &Arc<BoundaryMesh>, a: ComplexVector) -> Result<Self> {
        let shape = source
            .curve
            .as_ref()
            .and_then(|c| c.shape.clone())
            .ok_or_else(|| Error::InvalidArgument("Kelvin images need a curve with a known shape".into()))?;
        if a.n() != 2 {
            return Err(Error::DimensionMismatch(a.n(), 2));
        }
        for u in &source.nodes {
            vector_inverse(u)?;
        }
        let c = a.components();
        let image = BoundaryMesh::from_shape(
            source.len(),
            CurveShape::Kelvin {
                base: Box::new(shape),
                a: [c[0], c[1]],
            },
        )?;
        for z in &image.nodes {
            vector_inverse(&(*z + a))?;
        }
        Ok(Self {
            a,
            source: Arc::clone(source),
            image: Arc::new(image),
        })
    }

    pub fn a(&self) -> &ComplexVector {
        &self.a
    }

    pub fn source(&self) -> &Arc<BoundaryMesh> {
        &self.source
    }

    pub fn image(&self) -> &Arc<BoundaryMesh> {
        &self.image
    }

    /// `ψ(z) = (z + a)^{-1}`
    pub fn forward(&self, z: &ComplexVector) -> Result<ComplexVector> {
        vector_inverse(&(*z + self.a))
    }

    /// `ψ^{-1}(u) = u^{-1} - a`
    pub fn inverse(&self, u: &ComplexVector) -> Result<ComplexVector> {
        Ok(vector_inverse(u)? - self.a)
    }
}

/// `(G(z + a) g(ψ(z)))` at the image nodes.
pub fn transplant(g: &BoundaryFunction, map: &KelvinMap) -> Result<BoundaryFunction> {
    if !Arc::ptr_eq(g.mesh(), &map.source) && g.mesh().nodes != map.source.nodes {
        return Err(Error::MeshMismatch);
    }
    let values = map
        .image
        .nodes
        .iter()
        .zip(g.values())
        .map(|(z, v)| Ok(cauchy_kernel(&(*z + map.a))?.to_multivector() * *v))
        .collect::<Result<_>>()?;
    BoundaryFunction::new(&map.image, values)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IsometryCheck {
    pub norm_source: f64,
    pub norm_image: f64,
    pub gap: f64,
}

/// `‖g‖` on `∂M` against `‖G(z + a) g(ψ(z))‖` on the image.
pub fn isometry_check(g: &BoundaryFunction, map: &KelvinMap) -> Result<IsometryCheck> {
    let norm_source = g.l2_norm();
    let norm_image = transplant(g, map)?.l2_norm();
    Ok(IsometryCheck {
        norm_source,
        norm_image,
        gap: (norm_image - norm_source).abs() / norm_source.max(f64::MIN_POSITIVE),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CovarianceCheck {
    pub lhs: Multivector,
    pub rhs: Multivector,
    pub gap: f64,
}

/// `Σ f(u) n(u) g(u) σ(u)` on `∂M` against
/// `Σ f(ψ(z)) G(z + a) n(z) G(z + a) g(ψ(z)) σ(z)` on the image.
pub fn covariance_check(f: &BoundaryFunction, g: &BoundaryFunction, map: &KelvinMap) -> Result<CovarianceCheck> {
    if !f.same_mesh(g) {
        return Err(Error::MeshMismatch);
    }
    let src = &map.source;
    let img = &map.image;
    let mut lhs = Multivector::zero(2);
    let mut rhs = Multivector::zero(2);
    for j in 0..src.len() {
        let (fv, gv) = (f.values()[j], g.values()[j]);
        lhs += fv * src.normals[j].to_multivector() * gv * src.sigma[j];
        let k = cauchy_kernel(&(img.nodes[j] + map.a))?.to_multivector();
        rhs += fv * k * img.normals[j].to_multivector() * k * gv * img.sigma[j];
    }
    let scale = lhs.norm().max(rhs.norm()).max(f.l2_norm() * g.l2_norm()).max(f64::MIN_POSITIVE);
    Ok(CovarianceCheck {
        gap: (lhs - rhs).norm() / scale,
        lhs,
        rhs,
    })
}

/// Largest relative gaps of the four readings of
/// `G(v - u) = G(w)^{-1} G(w - z) G(z)^{-1}` with `u = ψ(z)`, `v = ψ(w)`:
/// the outer factors at `w, z` (literal) or `w + a, z + a` (shifted), and the
/// middle factor as written or with its argument reversed.
#[derive(Clone, Debug, Serialize)]
pub struct IntertwiningCheck {
    pub a: ComplexVector,
    pub samples: usize,
    pub skipped: usize,
    pub literal: f64,
    pub shifted: f64,
    pub literal_reversed: f64,
    pub shifted_reversed: f64,
    /// Readings whose gap is below [`INTERTWINING_TOL`], or `"none"`.
    pub operative_reading: String,
}

fn kernel_inverse(z: &ComplexVector) -> Result<Multivector> {
    Ok(vector_inverse(&cauchy_kernel(z)?)?.to_multivector())
}

fn pair_gaps(a: &ComplexVector, w: &ComplexVector, z: &ComplexVector) -> Result<[f64; 4]> {
    let (v, u) = (vector_inverse(&(*w + *a))?, vector_inverse(&(*z + *a))?);
    let lhs = cauchy_kernel(&(v - u))?.to_multivector();
    let mid = cauchy_kernel(&(*w - *z))?.to_multivector();
    let mid_rev = cauchy_kernel(&(*z - *w))?.to_multivector();
    let (lw, lz) = (kernel_inverse(w)?, kernel_inverse(z)?);
    let (sw, sz) = (kernel_inverse(&(*w + *a))?, kernel_inverse(&(*z + *a))?);
    let scale = lhs.norm().max(f64::MIN_POSITIVE);
    let gap = |rhs: Multivector| (lhs - rhs).norm() / scale;
    Ok([gap(lw * mid * lz), gap(sw * mid * sz), gap(lw * mid_rev * lz), gap(sw * mid_rev * sz)])
}

/// Evaluates every reading on `samples` seeded real pairs in `[-1, 1]^2`;
/// degenerate pairs (coincident or null arguments) are skipped and counted.
pub fn kernel_intertwining_check(a: &ComplexVector, samples: usize, seed: u64) -> Result<IntertwiningCheck> {
    if a.n() != 2 {
        return Err(Error::DimensionMismatch(a.n(), 2));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point = || ComplexVector::from_real(&[rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).expect("n = 2");
    let mut worst = [0.0f64; 4];
    let mut skipped = 0;
    for _ in 0..samples {
        let (w, z) = (point(), point());
        match pair_gaps(a, &w, &z) {
            Ok(g) => {
                for k in 0..4 {
                    worst[k] = worst[k].max(g[k]);
                }
            }
            Err(Error::NullVector { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let names = ["literal", "shifted", "literal_reversed", "shifted_reversed"];
    let operative: Vec<&str> = names
        .iter()
        .zip(worst)
        .filter(|(_, g)| *g <= INTERTWINING_TOL && samples > skipped)
        .map(|(n, _)| *n)
        .collect();
    Ok(IntertwiningCheck {
        a: *a,
        samples,
        skipped,
        literal: worst[0],
        shifted: worst[1],
        literal_reversed: worst[2],
        shifted_reversed: worst[3],
        operative_reading: if operative.is_empty() {
            "none".into()
        } else {
            operative.join(",")
        },
    })
}

/// One line of a Möbius report.
#[derive(Clone, Debug, Serialize)]
pub struct MobiusEntry {
    pub check: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub gap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_refined: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operative_reading: Option<String>,
}

/// Isometry and covariance gaps on a circle of `count` and `2 count` nodes,
/// plus the intertwining readings at `a` and at `a = 0`.
pub fn mobius_report(count: usize, a: &ComplexVector, samples: usize, seed: u64) -> Result<Vec<MobiusEntry>> {
    let meshes = [
        Arc::new(BoundaryMesh::circle(count, 1.0)?),
        Arc::new(BoundaryMesh::circle(2 * count, 1.0)?),
    ];
    let mut iso = Vec::new();
    let mut cov = Vec::new();
    for mesh in &meshes {
        let map = KelvinMap::new(mesh, *a)?;
        let one = BoundaryFunction::constant(mesh, Multivector::one(2));
        iso.push(isometry_check(&one, &map)?.gap);
        cov.push(covariance_check(&one, &one, &map)?.gap);
    }
    let entry = |check: &str, g: &[f64]| MobiusEntry {
        check: check.into(),
        n: count,
        gap: g[0],
        gap_refined: Some(g[1]),
        operative_reading: None,
    };
    let mut out = vec![entry("isometry", &iso), entry("covariance", &cov)];
    for (name, shift) in [("intertwining", *a), ("intertwining_a0", ComplexVector::zero(2))] {
        let c = kernel_intertwining_check(&shift, samples, seed)?;
        let best = [c.literal, c.shifted, c.literal_reversed, c.shifted_reversed]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        out.push(MobiusEntry {
            check: name.into(),
            n: samples,
            gap: best,
            gap_refined: None,
            operative_reading: Some(c.operative_reading),
        });
    }
    Ok(out)
}
