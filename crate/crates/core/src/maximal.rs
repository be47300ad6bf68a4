//! Discrete Hardy–Littlewood and non-tangential maximal functions, and
//! empirical constants for the associated norm inequalities.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::{cauchy_kernel, omega, Multivector};
use crate::error::{Error, Result};
use crate::manifold::{BoundaryMesh, Cone, ConeParams};
use crate::operators::{assemble_singular_cauchy, BoundaryFunction, CauchyEvaluator};

/// Geometric radius schedule `2h, 4h, ...` capped by the diameter, which is
/// always included.
pub fn default_radii(mesh: &BoundaryMesh) -> Vec<f64> {
    let diam = mesh.diameter();
    let mut r = 2.0 * mesh.h;
    let mut out = Vec::new();
    while r < diam {
        out.push(r);
        r *= 2.0;
    }
    out.push(diam);
    out
}

/// Sorted distances from node `i` with the matching `|σ|` weights.
fn sorted_neighbourhood(mesh: &BoundaryMesh, i: usize) -> (Vec<f64>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..mesh.len()).collect();
    let dist: Vec<f64> = mesh.nodes.iter().map(|z| (*z - mesh.nodes[i]).norm()).collect();
    idx.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
    (idx.iter().map(|&j| dist[j]).collect(), idx)
}

/// `M(f)(w_i) = max_r (Σ_{|z_j - w_i| <= r} ‖f_j‖ |σ_j|) / (Σ_{|z_j - w_i| <= r} |σ_j|)`
/// over the schedule, with balls in the Euclidean metric of `R^{2n}`.
pub fn maximal_function(f: &BoundaryFunction, radii: &[f64]) -> Result<Vec<f64>> {
    if radii.is_empty() {
        return Err(Error::InvalidArgument("radius schedule is empty".into()));
    }
    let mesh = f.mesh();
    let norms: Vec<f64> = f.values().iter().map(Multivector::norm).collect();
    (0..mesh.len())
        .into_par_iter()
        .map(|i| {
            let (dist, idx) = sorted_neighbourhood(mesh, i);
            let mut best = 0.0f64;
            for &r in radii {
                let inside = dist.partition_point(|&d| d <= r);
                if inside < 2 {
                    return Err(Error::EmptyBall { node: i, radius: r });
                }
                let (mut num, mut den) = (0.0, 0.0);
                for &j in &idx[..inside] {
                    num += norms[j] * mesh.sigma_abs[j];
                    den += mesh.sigma_abs[j];
                }
                best = best.max(num / den);
            }
            Ok(best)
        })
        .collect()
}

/// Per-node non-tangential maximal values with the number of cone samples
/// skipped for sitting on the boundary barrier.
#[derive(Clone, Debug, Serialize)]
pub struct Nontangential {
    pub values: Vec<f64>,
    pub samples_per_cone: usize,
    pub skipped: usize,
}

/// `N(f)(w) = max ‖C f(z)‖` over a low-discrepancy sample of the truncated
/// inward cone at every node. A lower bound for the supremum.
pub fn nontangential_maximal(f: &BoundaryFunction, cone: &ConeParams, samples_per_cone: usize) -> Result<Nontangential> {
    Ok(nontangential_maximal_many(std::slice::from_ref(f), cone, samples_per_cone)?.remove(0))
}

/// [`nontangential_maximal`] for several functions on one mesh, sharing the
/// cone samples and kernel evaluations.
pub fn nontangential_maximal_many(
    fs: &[BoundaryFunction],
    cone: &ConeParams,
    samples_per_cone: usize,
) -> Result<Vec<Nontangential>> {
    let eval = CauchyEvaluator::new_many(fs)?;
    let mesh = fs[0].mesh();
    let per_node: Vec<(Vec<f64>, usize)> = (0..mesh.len())
        .into_par_iter()
        .map(|i| {
            let c = Cone::new(mesh.nodes[i], -mesh.unit_normal(i), cone.half_angle, cone.radius)?;
            let mut best = vec![0.0f64; fs.len()];
            let mut skipped = 0;
            for z in c.samples(samples_per_cone) {
                match eval.eval_many(&z) {
                    Ok(v) => {
                        for (b, v) in best.iter_mut().zip(v) {
                            *b = b.max(v.norm());
                        }
                    }
                    Err(Error::NearBoundary) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok((best, skipped))
        })
        .collect::<Result<_>>()?;
    let skipped = per_node.iter().map(|p| p.1).sum();
    Ok((0..fs.len())
        .map(|k| Nontangential {
            values: per_node.iter().map(|p| p.0[k]).collect(),
            samples_per_cone,
            skipped,
        })
        .collect())
}

/// `sup_ε ‖(1/ω) Σ_{|z_j - w_i| >= ε} G(w_i - z_j) n_j f_j σ_j‖` over the schedule.
pub fn truncated_cauchy_sup(f: &BoundaryFunction, radii: &[f64]) -> Result<Vec<f64>> {
    let mesh = f.mesh();
    let inv = 1.0 / omega(mesh.n);
    (0..mesh.len())
        .into_par_iter()
        .map(|i| {
            let (dist, idx) = sorted_neighbourhood(mesh, i);
            // tail sums from the far end so each radius costs one lookup
            let mut tail = vec![Multivector::zero(mesh.n); idx.len() + 1];
            for p in (0..idx.len()).rev() {
                let j = idx[p];
                tail[p] = tail[p + 1];
                if j != i {
                    let g = cauchy_kernel(&(mesh.nodes[i] - mesh.nodes[j]))?.to_multivector();
                    tail[p] += g * mesh.normals[j].to_multivector() * f.values()[j] * (mesh.sigma[j] * inv);
                }
            }
            Ok(radii
                .iter()
                .map(|&r| tail[dist.partition_point(|&d| d < r)].norm())
                .fold(0.0, f64::max))
        })
        .collect()
}

fn lp_norm(values: &[f64], weights: &[f64], p: f64) -> f64 {
    values.iter().zip(weights).map(|(v, w)| v.powf(p) * w).sum::<f64>().powf(1.0 / p)
}

#[derive(Clone, Debug, Serialize)]
pub struct MaximalReport {
    pub maximal: Vec<f64>,
    pub nontangential: Vec<f64>,
    pub cotlar: Vec<f64>,
    pub norm_f: f64,
    pub norm_maximal: f64,
    pub norm_nontangential: f64,
    /// `‖M(f)‖ / ‖f‖`
    pub c_m: f64,
    /// `‖N(f)‖ / ‖f‖`
    pub c_n: f64,
    pub cotlar_max: f64,
    /// `(p, ‖M(f)‖_p / ‖f‖_p)` for `p ∈ {1.5, 2, 3}`.
    pub lp_ratios: Vec<(f64, f64)>,
    pub samples_per_cone: usize,
    pub skipped_samples: usize,
}

impl MaximalReport {
    pub fn compute(f: &BoundaryFunction, radii: &[f64], cone: &ConeParams, samples_per_cone: usize) -> Result<Self> {
        let mesh = f.mesh();
        let maximal = maximal_function(f, radii)?;
        let nt = nontangential_maximal(f, cone, samples_per_cone)?;
        let cf = assemble_singular_cauchy(mesh)?.apply(f)?;
        Self::assemble(f, maximal, nt, &cf, radii)
    }

    fn assemble(f: &BoundaryFunction, maximal: Vec<f64>, nt: Nontangential, cf: &BoundaryFunction, radii: &[f64]) -> Result<Self> {
        let w = &f.mesh().sigma_abs;
        let m_cf = maximal_function(cf, radii)?;
        let truncated = truncated_cauchy_sup(f, radii)?;
        let cotlar: Vec<f64> = (0..f.len()).map(|i| truncated[i] / (m_cf[i] + maximal[i])).collect();
        let fnorm: Vec<f64> = f.values().iter().map(Multivector::norm).collect();
        let norm_f = f.l2_norm();
        let norm_maximal = lp_norm(&maximal, w, 2.0);
        let norm_nontangential = lp_norm(&nt.values, w, 2.0);
        let lp_ratios = [1.5, 2.0, 3.0]
            .iter()
            .map(|&p| (p, lp_norm(&maximal, w, p) / lp_norm(&fnorm, w, p)))
            .collect();
        Ok(Self {
            cotlar_max: cotlar.iter().copied().fold(0.0, f64::max),
            maximal,
            nontangential: nt.values,
            cotlar,
            norm_f,
            norm_maximal,
            norm_nontangential,
            c_m: norm_maximal / norm_f,
            c_n: norm_nontangential / norm_f,
            lp_ratios,
            samples_per_cone: nt.samples_per_cone,
            skipped_samples: nt.skipped,
        })
    }

    /// CSV `node,M,N,cotlar_ratio`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("node,M,N,cotlar_ratio\n");
        for i in 0..self.maximal.len() {
            s.push_str(&format!(
                "{i},{:.17e},{:.17e},{:.17e}\n",
                self.maximal[i], self.nontangential[i], self.cotlar[i]
            ));
        }
        s
    }
}

/// Compact summary of a report family.
#[derive(Clone, Debug, Serialize)]
pub struct MaximalSummary {
    pub nodes: usize,
    pub functions: usize,
    pub seed: u64,
    pub c_m: Vec<f64>,
    pub c_n: Vec<f64>,
    pub c_m_max: f64,
    pub c_n_max: f64,
    pub cotlar_max: f64,
    pub all_cotlar_finite: bool,
}

impl MaximalSummary {
    pub fn new(reports: &[MaximalReport], nodes: usize, seed: u64) -> Self {
        let c_m: Vec<f64> = reports.iter().map(|r| r.c_m).collect();
        let c_n: Vec<f64> = reports.iter().map(|r| r.c_n).collect();
        Self {
            nodes,
            functions: reports.len(),
            seed,
            c_m_max: c_m.iter().copied().fold(0.0, f64::max),
            c_n_max: c_n.iter().copied().fold(0.0, f64::max),
            cotlar_max: reports.iter().map(|r| r.cotlar_max).fold(0.0, f64::max),
            all_cotlar_finite: reports.iter().all(|r| r.cotlar.iter().all(|c| c.is_finite())),
            c_m,
            c_n,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

const TEST_BAND: i64 = 4;

/// `count` random band-limited functions. Coefficients depend only on `seed`,
/// so the same functions are sampled on every resolution of a geometry: on
/// closed curves trigonometric polynomials of degree 4 in the parameter,
/// elsewhere quadratic polynomials in the coordinates, with Gaussian
/// Clifford coefficients.
pub fn random_test_functions(mesh: &Arc<BoundaryMesh>, count: usize, seed: u64) -> Vec<BoundaryFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = mesh.blades();
    let mut gauss = move || Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let (n, len) = (mesh.n, mesh.len());
    (0..count)
        .map(|_| {
            if mesh.curve.is_some() {
                let terms: Vec<(i64, Multivector)> = (-TEST_BAND..=TEST_BAND)
                    .map(|k| {
                        let c: Vec<Complex64> = (0..d).map(|_| gauss()).collect();
                        (k, Multivector::from_coeffs(n, &c).expect("blade count"))
                    })
                    .collect();
                let dt = 2.0 * std::f64::consts::PI / len as f64;
                BoundaryFunction::from_fn(mesh, |j, _| {
                    terms.iter().fold(Multivector::zero(n), |acc, (k, c)| {
                        acc + *c * Complex64::from_polar(1.0, *k as f64 * j as f64 * dt)
                    })
                })
            } else {
                let constant = Multivector::from_coeffs(n, &(0..d).map(|_| gauss()).collect::<Vec<_>>()).expect("blade count");
                let linear: Vec<Multivector> = (0..n)
                    .map(|_| Multivector::from_coeffs(n, &(0..d).map(|_| gauss()).collect::<Vec<_>>()).expect("blade count"))
                    .collect();
                let quad: Vec<Multivector> = (0..n * n)
                    .map(|_| Multivector::from_coeffs(n, &(0..d).map(|_| gauss()).collect::<Vec<_>>()).expect("blade count"))
                    .collect();
                BoundaryFunction::from_fn(mesh, |_, z| {
                    let x = z.components();
                    let mut acc = constant;
                    for a in 0..n {
                        acc += linear[a] * x[a];
                        for b in 0..n {
                            acc += quad[a * n + b] * (x[a] * x[b]);
                        }
                    }
                    acc
                })
            }
        })
        .collect()
}

/// Reports for `count` seeded random test functions on one mesh.
pub fn bound_diagnostics(
    mesh: &Arc<BoundaryMesh>,
    count: usize,
    seed: u64,
    cone: &ConeParams,
    samples_per_cone: usize,
) -> Result<Vec<MaximalReport>> {
    let radii = default_radii(mesh);
    let cauchy = assemble_singular_cauchy(mesh)?;
    let fs = random_test_functions(mesh, count, seed);
    if fs.is_empty() {
        return Ok(Vec::new());
    }
    let nts = nontangential_maximal_many(&fs, cone, samples_per_cone)?;
    fs.iter()
        .zip(nts)
        .map(|(f, nt)| {
            let maximal = maximal_function(f, &radii)?;
            let cf = cauchy.apply(f)?;
            MaximalReport::assemble(f, maximal, nt, &cf, &radii)
        })
        .collect()
}
