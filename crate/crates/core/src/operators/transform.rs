use num_complex::Complex64;

use super::BoundaryFunction;
use crate::clifford::{cauchy_kernel, omega, ComplexVector, Multivector};
use crate::error::{Error, Result};
use crate::fourier::TrigInterpolant;
use crate::manifold::CurveShape;
use crate::quadrature::Panel;

const ORDER: usize = 16;
/// Targets farther than this many mesh widths from every node use the node rule.
const FAR: f64 = 8.0;
const MAX_DEPTH: usize = 40;
const TOL: f64 = 1e-13;

/// Interior or exterior Cauchy transform `(1/ω) Σ_j G(u - z_j) n_j f_j σ_j` by the
/// node rule. Accurate when `u` is several mesh widths away from the boundary;
/// use [`CauchyEvaluator`] otherwise.
pub fn cauchy_transform(f: &BoundaryFunction, u: &ComplexVector) -> Result<Multivector> {
    let mesh = f.mesh();
    if u.n() != mesh.n {
        return Err(Error::DimensionMismatch(u.n(), mesh.n));
    }
    let mut acc = Multivector::zero(mesh.n);
    for (j, z) in mesh.nodes.iter().enumerate() {
        let g = cauchy_kernel(&(*u - *z)).map_err(near)?;
        acc += (g.to_multivector() * mesh.normals[j].to_multivector()) * f.values()[j] * mesh.sigma[j];
    }
    Ok(acc * (1.0 / omega(mesh.n)))
}

fn near(e: Error) -> Error {
    match e {
        Error::NullVector { .. } => Error::NearBoundary,
        e => e,
    }
}

/// Distance-like size of `w` that vanishes on the null cone: `|w·w|^{1/2}`.
fn null_distance(w: &ComplexVector) -> f64 {
    w.dot(w).norm().sqrt()
}

struct PanelData {
    shape: CurveShape,
    dtheta: f64,
    panel_len: f64,
    /// Gauss–Legendre nodes in `[0, 1]`, ascending, with weights.
    rule: Vec<(f64, f64)>,
    /// Barycentric weights of the nodes.
    bary: Vec<f64>,
    /// Each density at every panel node, panel-major.
    values: Vec<Vec<Multivector>>,
    points: Vec<ComplexVector>,
    /// `(t_2, -t_1)` at every panel node, so that `n dσ = perp dθ`.
    perp: Vec<Multivector>,
}

/// Cauchy transforms of one or more boundary functions on a common mesh at
/// many targets, accurate up to the boundary.
///
/// On curves with a known analytic shape the densities are resampled on
/// Gauss–Legendre panels through their trigonometric interpolants; panels
/// close to the target (in the null-cone distance) are refined adaptively.
/// Elsewhere, and for far targets, the node rule is used. Kernel and geometry
/// evaluations are shared by all densities.
pub struct CauchyEvaluator {
    fs: Vec<BoundaryFunction>,
    scales: Vec<f64>,
    panels: Option<PanelData>,
}

impl CauchyEvaluator {
    pub fn new(f: &BoundaryFunction) -> Result<Self> {
        Self::new_many(std::slice::from_ref(f))
    }

    pub fn new_many(fs: &[BoundaryFunction]) -> Result<Self> {
        let first = fs.first().ok_or_else(|| Error::InvalidArgument("no boundary functions".into()))?;
        if fs.iter().any(|g| !first.same_mesh(g)) {
            return Err(Error::MeshMismatch);
        }
        let shape = first.mesh().curve.as_ref().and_then(|c| c.shape.clone());
        let panels = match shape {
            Some(shape) => Some(PanelData::new(fs, shape)?),
            None => None,
        };
        let scales = fs
            .iter()
            .map(|f| f.values().iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE))
            .collect();
        Ok(Self {
            fs: fs.to_vec(),
            scales,
            panels,
        })
    }

    pub fn function(&self) -> &BoundaryFunction {
        &self.fs[0]
    }

    pub fn functions(&self) -> &[BoundaryFunction] {
        &self.fs
    }

    /// Transform of the first function.
    pub fn eval(&self, u: &ComplexVector) -> Result<Multivector> {
        Ok(self.eval_many(u)?[0])
    }

    /// Transforms of all functions, in order.
    pub fn eval_many(&self, u: &ComplexVector) -> Result<Vec<Multivector>> {
        let mesh = self.fs[0].mesh();
        if u.n() != mesh.n {
            return Err(Error::DimensionMismatch(u.n(), mesh.n));
        }
        let d = mesh.nodes.iter().map(|z| null_distance(&(*u - *z))).fold(f64::INFINITY, f64::min);
        match &self.panels {
            Some(p) if d < FAR * mesh.h => p.eval(u, &self.scales),
            _ => {
                let inv = 1.0 / omega(mesh.n);
                let mut acc = vec![Multivector::zero(mesh.n); self.fs.len()];
                for (j, z) in mesh.nodes.iter().enumerate() {
                    let k = cauchy_kernel(&(*u - *z)).map_err(near)?.to_multivector()
                        * mesh.normals[j].to_multivector()
                        * (mesh.sigma[j] * inv);
                    for (a, f) in acc.iter_mut().zip(&self.fs) {
                        *a += k * f.values()[j];
                    }
                }
                Ok(acc)
            }
        }
    }
}

impl PanelData {
    fn new(fs: &[BoundaryFunction], shape: CurveShape) -> Result<Self> {
        let mesh = fs[0].mesh();
        let (count, d) = (mesh.len(), mesh.blades());
        let dtheta = 2.0 * std::f64::consts::PI / count as f64;
        let mut rule: Vec<(f64, f64)> = Panel::new(ORDER).on(0.0, 1.0).collect();
        rule.sort_by(|a, b| a.0.total_cmp(&b.0));
        let bary = rule
            .iter()
            .enumerate()
            .map(|(q, &(x, w))| {
                // (1 - t^2) w for t = 2x - 1 in [-1, 1]
                let t = 2.0 * x - 1.0;
                let s = ((1.0 - t * t) * 2.0 * w).sqrt();
                if q % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .collect();
        let mut points = Vec::with_capacity(count * ORDER);
        let mut perp = Vec::with_capacity(count * ORDER);
        for j in 0..count {
            for &(x, _) in &rule {
                let (z, t) = geometry(&shape, (j as f64 + x) * dtheta)?;
                points.push(z);
                perp.push(t);
            }
        }
        let values = fs
            .iter()
            .map(|f| {
                let shifted: Vec<Vec<Vec<Complex64>>> = {
                    let interps: Vec<TrigInterpolant> = (0..d)
                        .map(|b| TrigInterpolant::new(&f.values().iter().map(|v| v.coeffs()[b]).collect::<Vec<_>>()))
                        .collect();
                    rule.iter()
                        .map(|&(x, _)| interps.iter().map(|ip| ip.shifted(x * dtheta)).collect())
                        .collect()
                };
                let mut out = Vec::with_capacity(count * ORDER);
                for j in 0..count {
                    for q in 0..ORDER {
                        let coeffs: Vec<Complex64> = (0..d).map(|b| shifted[q][b][j]).collect();
                        out.push(Multivector::from_coeffs(mesh.n, &coeffs)?);
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let panel_len = dtheta * perp.iter().map(|p| p.norm()).fold(0.0, f64::max);
        Ok(Self {
            shape,
            dtheta,
            panel_len,
            rule,
            bary,
            values,
            points,
            perp,
        })
    }

    fn panel_count(&self) -> usize {
        self.points.len() / ORDER
    }

    /// Interpolation weights on the panel nodes for local coordinate `s ∈ [0, 1]`.
    fn weights(&self, s: f64) -> [f64; ORDER] {
        let mut w = [0.0; ORDER];
        let mut den = 0.0;
        for (q, &(x, _)) in self.rule.iter().enumerate() {
            let diff = s - x;
            if diff == 0.0 {
                let mut hit = [0.0; ORDER];
                hit[q] = 1.0;
                return hit;
            }
            w[q] = self.bary[q] / diff;
            den += w[q];
        }
        w.map(|c| c / den)
    }

    fn eval(&self, u: &ComplexVector, scales: &[f64]) -> Result<Vec<Multivector>> {
        let n = u.n();
        let mut acc = vec![Multivector::zero(n); self.values.len()];
        for j in 0..self.panel_count() {
            let range = j * ORDER..(j + 1) * ORDER;
            let closest = self.points[range.clone()]
                .iter()
                .map(|z| null_distance(&(*u - *z)))
                .fold(f64::INFINITY, f64::min);
            if closest > 2.0 * self.panel_len {
                for (q, k) in range.enumerate() {
                    let g = cauchy_kernel(&(*u - self.points[k])).map_err(near)?.to_multivector()
                        * self.perp[k]
                        * (self.rule[q].1 * self.dtheta);
                    for (a, v) in acc.iter_mut().zip(&self.values) {
                        *a += g * v[k];
                    }
                }
            } else {
                let whole = self.gauss(u, j, 0.0, 1.0)?;
                for (a, v) in acc.iter_mut().zip(self.adaptive(u, j, 0.0, 1.0, whole, scales, 0)?) {
                    *a += v;
                }
            }
        }
        let inv = 1.0 / omega(n);
        Ok(acc.into_iter().map(|a| a * inv).collect())
    }

    fn gauss(&self, u: &ComplexVector, j: usize, a: f64, b: f64) -> Result<Vec<Multivector>> {
        let mut acc = vec![Multivector::zero(u.n()); self.values.len()];
        for &(x, w) in &self.rule {
            let s = a + (b - a) * x;
            let (z, perp) = geometry(&self.shape, (j as f64 + s) * self.dtheta)?;
            let g = cauchy_kernel(&(*u - z)).map_err(near)?.to_multivector() * perp * (w * (b - a) * self.dtheta);
            let weights = self.weights(s);
            for (out, vals) in acc.iter_mut().zip(&self.values) {
                let vals = &vals[j * ORDER..(j + 1) * ORDER];
                let mut density = Multivector::zero(u.n());
                for (c, v) in weights.iter().zip(vals) {
                    if *c != 0.0 {
                        density += *v * *c;
                    }
                }
                *out += g * density;
            }
        }
        Ok(acc)
    }

    #[allow(clippy::too_many_arguments)]
    fn adaptive(
        &self,
        u: &ComplexVector,
        j: usize,
        a: f64,
        b: f64,
        whole: Vec<Multivector>,
        scales: &[f64],
        depth: usize,
    ) -> Result<Vec<Multivector>> {
        let m = 0.5 * (a + b);
        let left = self.gauss(u, j, a, m)?;
        let right = self.gauss(u, j, m, b)?;
        let converged = whole
            .iter()
            .zip(left.iter().zip(&right))
            .zip(scales)
            .all(|((w, (l, r)), s)| (*w - (*l + *r)).norm() <= TOL * s);
        if converged || depth >= MAX_DEPTH {
            return Ok(left.into_iter().zip(right).map(|(l, r)| l + r).collect());
        }
        let l = self.adaptive(u, j, a, m, left, scales, depth + 1)?;
        let r = self.adaptive(u, j, m, b, right, scales, depth + 1)?;
        Ok(l.into_iter().zip(r).map(|(l, r)| l + r).collect())
    }
}

fn geometry(shape: &CurveShape, theta: f64) -> Result<(ComplexVector, Multivector)> {
    let z = ComplexVector::new(&shape.point(theta))?;
    let t = shape.tangent(theta);
    Ok((z, ComplexVector::new(&[t[1], -t[0]])?.to_multivector()))
}
