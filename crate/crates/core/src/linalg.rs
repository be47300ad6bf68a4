//! Dense solves with condition estimation, restarted GMRES, and norm estimates.

use nalgebra::{DMatrix, DVector, LU};
use num_complex::Complex64;

use crate::error::{Error, Result};

type CMat = DMatrix<Complex64>;
type CVec = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Systems with more unknowns than this are solved iteratively.
pub const DENSE_LIMIT: usize = 3000 * 16;

pub fn one_norm(a: &CMat) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Dense LU factorization together with a 1-norm condition estimate.
pub struct Factorized {
    lu: LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    lu_adjoint: LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    pub condition: f64,
}

impl Factorized {
    pub fn new(a: &CMat) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(a.nrows(), a.ncols()));
        }
        let lu = a.clone().lu();
        let lu_adjoint = a.adjoint().lu();
        if !lu.is_invertible() {
            return Err(Error::IllConditioned { estimate: f64::INFINITY });
        }
        let mut f = Self {
            lu,
            lu_adjoint,
            condition: f64::INFINITY,
        };
        f.condition = one_norm(a) * f.inverse_one_norm_estimate();
        Ok(f)
    }

    pub fn solve(&self, b: &CVec) -> CVec {
        self.lu.solve(b).expect("factorization checked invertible")
    }

    pub fn solve_matrix(&self, b: &CMat) -> CMat {
        self.lu.solve(b).expect("factorization checked invertible")
    }

    /// Hager's estimate of `||A^{-1}||_1`, refined by Higham's alternating-sign vector.
    fn inverse_one_norm_estimate(&self) -> f64 {
        let n = self.lu.l().nrows();
        let mut x = CVec::from_element(n, Complex64::new(1.0 / n as f64, 0.0));
        let mut est = 0.0;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let y = self.solve(&x);
            est = y.iter().map(|v| v.norm()).sum::<f64>();
            let xi = y.map(|v| if v.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { v / v.norm() });
            let z = self.lu_adjoint.solve(&xi).expect("factorization checked invertible");
            let (j, zmax) = z.iter().enumerate().map(|(j, v)| (j, v.norm())).fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
            let ztx = z.dotc(&x).re;
            if zmax <= ztx || j == last_j {
                break;
            }
            last_j = j;
            x = CVec::from_element(n, ZERO);
            x[j] = Complex64::new(1.0, 0.0);
        }
        let alt = CVec::from_fn(n, |i, _| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(s * (1.0 + i as f64 / (n as f64 - 1.0).max(1.0)), 0.0)
        });
        let y = self.solve(&alt);
        let alt_est = 2.0 * y.iter().map(|v| v.norm()).sum::<f64>() / (3.0 * n as f64);
        est.max(alt_est)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GmresOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub restart: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 500,
            restart: 50,
        }
    }
}

pub struct GmresResult {
    pub x: CVec,
    pub iterations: usize,
    pub residual: f64,
}

/// Restarted GMRES with modified Gram–Schmidt Arnoldi and Givens rotations.
pub fn gmres<F: Fn(&CVec) -> CVec>(apply: F, b: &CVec, opts: GmresOptions) -> Result<GmresResult> {
    let n = b.len();
    let bnorm = b.norm();
    let mut x = CVec::from_element(n, ZERO);
    if bnorm == 0.0 {
        return Ok(GmresResult {
            x,
            iterations: 0,
            residual: 0.0,
        });
    }
    let m = opts.restart.max(1);
    let mut total = 0;
    let mut rel;
    while total < opts.max_iter {
        let r = b - apply(&x);
        let beta = r.norm();
        rel = beta / bnorm;
        if rel <= opts.tol {
            break;
        }
        let mut v: Vec<CVec> = vec![r / Complex64::new(beta, 0.0)];
        let mut h = DMatrix::from_element(m + 1, m, ZERO);
        let mut cs = vec![ZERO; m];
        let mut sn = vec![ZERO; m];
        let mut g = CVec::from_element(m + 1, ZERO);
        g[0] = Complex64::new(beta, 0.0);
        let mut k_used = 0;
        for k in 0..m {
            if total >= opts.max_iter {
                break;
            }
            total += 1;
            let mut w = apply(&v[k]);
            for (i, vi) in v.iter().enumerate() {
                let hik = vi.dotc(&w);
                h[(i, k)] = hik;
                w -= vi * hik;
            }
            let wn = w.norm();
            h[(k + 1, k)] = Complex64::new(wn, 0.0);
            for i in 0..k {
                let t = cs[i].conj() * h[(i, k)] + sn[i].conj() * h[(i + 1, k)];
                h[(i + 1, k)] = -sn[i] * h[(i, k)] + cs[i] * h[(i + 1, k)];
                h[(i, k)] = t;
            }
            let (a, bb) = (h[(k, k)], h[(k + 1, k)]);
            let den = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            let (c, s) = if den == 0.0 {
                (Complex64::new(1.0, 0.0), ZERO)
            } else {
                (a / den, bb / den)
            };
            cs[k] = c;
            sn[k] = s;
            h[(k, k)] = c.conj() * a + s.conj() * bb;
            h[(k + 1, k)] = ZERO;
            g[k + 1] = -s * g[k];
            g[k] = c.conj() * g[k];
            k_used = k + 1;
            rel = g[k + 1].norm() / bnorm;
            if rel <= opts.tol || wn == 0.0 {
                break;
            }
            v.push(w / Complex64::new(wn, 0.0));
        }
        let mut y = CVec::from_element(k_used, ZERO);
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for j in (i + 1)..k_used {
                s -= h[(i, j)] * y[j];
            }
            y[i] = s / h[(i, i)];
        }
        for (i, yi) in y.iter().enumerate() {
            x += &v[i] * *yi;
        }
        if rel <= opts.tol {
            break;
        }
    }
    let residual = (b - apply(&x)).norm() / bnorm;
    if residual > opts.tol * 10.0 {
        return Err(Error::NoConvergence {
            residual,
            iterations: total,
        });
    }
    Ok(GmresResult {
        x,
        iterations: total,
        residual,
    })
}

/// Largest singular value of a linear map by power iteration on `A^H A`.
pub fn spectral_norm<F, G>(apply: F, apply_adjoint: G, dim: usize, iterations: usize) -> f64
where
    F: Fn(&CVec) -> CVec,
    G: Fn(&CVec) -> CVec,
{
    let mut x = CVec::from_fn(dim, |i, _| Complex64::new(1.0 + (i as f64 * 0.7548776662).fract(), (i as f64 * 0.5698402910).fract()));
    x /= Complex64::new(x.norm(), 0.0);
    let mut sigma = 0.0;
    for _ in 0..iterations {
        let y = apply(&x);
        let s = y.norm();
        let z = apply_adjoint(&y);
        let zn = z.norm();
        if zn == 0.0 {
            return 0.0;
        }
        x = z / Complex64::new(zn, 0.0);
        if (s - sigma).abs() <= 1e-10 * s {
            sigma = s;
            break;
        }
        sigma = s;
    }
    sigma
}

/// Singular values in decreasing order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Largest singular value of a (tall) matrix.
pub fn norm2(a: &CMat) -> f64 {
    if a.ncols() == 0 || a.nrows() == 0 {
        return 0.0;
    }
    if a.ncols() <= a.nrows() {
        let g = a.adjoint() * a;
        g.symmetric_eigenvalues().iter().fold(0.0f64, |m, &x| m.max(x)).max(0.0).sqrt()
    } else {
        norm2(&a.adjoint())
    }
}

/// Orthonormal basis of the column span (thin QR).
pub fn orthonormal_columns(a: &CMat) -> CMat {
    a.clone().qr().q()
}
