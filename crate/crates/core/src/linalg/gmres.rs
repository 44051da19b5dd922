use alloc::vec;
use alloc::vec::Vec;



// unused only when a dev-dependency enables num-traits/std
#[allow(unused_imports)]
use num_traits::Float;

use super::{dot, norm2, CsrMatrix, Ilu0};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresConfig {
    /// Target relative residual `||b - Ax|| / ||b||`.
    pub tol: f64,
    pub max_iter: usize,
    pub restart: usize,
}

impl Default for GmresConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 500, restart: 30 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmresOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Relative residual recomputed from the returned iterate.
    pub residual: f64,
    /// Relative residual estimate after every inner iteration.
    pub history: Vec<f64>,
}

/// Restarted GMRES, right-preconditioned with `precond` when given.
pub fn gmres(
    a: &CsrMatrix,
    b: &[f64],
    x0: Option<&[f64]>,
    precond: Option<&Ilu0>,
    cfg: &GmresConfig,
) -> Result<GmresOutcome> {
    let n = a.n();
    let m = cfg.restart.max(1);
    let mut x = x0.map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.0; n]);
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        return Ok(GmresOutcome { x: vec![0.0; n], iterations: 0, residual: 0.0, history: Vec::new() });
    }

    let apply_m = |v: &mut [f64]| {
        if let Some(p) = precond {
            p.solve_in_place(v);
        }
    };

    let mut history = Vec::new();
    let mut basis: Vec<Vec<f64>> = (0..=m).map(|_| vec![0.0; n]).collect();
    let mut h = vec![0.0; (m + 1) * m];
    let (mut cs, mut sn, mut g) = (vec![0.0; m], vec![0.0; m], vec![0.0; m + 1]);
    let mut work = vec![0.0; n];
    let mut iterations = 0;

    loop {
        let r = a.residual(b, &x);
        let beta = norm2(&r);
        let rel = beta / bnorm;
        if rel <= cfg.tol {
            return Ok(GmresOutcome { x, iterations, residual: rel, history });
        }
        if iterations >= cfg.max_iter {
            return Err(Error::SolverFailure { iterations, residual: rel, history });
        }
        for (v, ri) in basis[0].iter_mut().zip(&r) {
            *v = ri / beta;
        }
        g.iter_mut().for_each(|v| *v = 0.0);
        g[0] = beta;

        let mut k = 0;
        while k < m && iterations < cfg.max_iter {
            work.copy_from_slice(&basis[k]);
            apply_m(&mut work);
            let (head, tail) = basis.split_at_mut(k + 1);
            let w = &mut tail[0];
            a.matvec(&work, w);
            // modified Gram-Schmidt
            for (i, vi) in head.iter().enumerate() {
                let hij = dot(w, vi);
                h[i * m + k] = hij;
                for (wv, vv) in w.iter_mut().zip(vi) {
                    *wv -= hij * vv;
                }
            }
            let hn = norm2(w);
            h[(k + 1) * m + k] = hn;
            if hn > 0.0 {
                w.iter_mut().for_each(|v| *v /= hn);
            }
            for i in 0..k {
                let (a0, a1) = (h[i * m + k], h[(i + 1) * m + k]);
                h[i * m + k] = cs[i] * a0 + sn[i] * a1;
                h[(i + 1) * m + k] = -sn[i] * a0 + cs[i] * a1;
            }
            let (a0, a1) = (h[k * m + k], h[(k + 1) * m + k]);
            let d = a0.hypot(a1);
            if d == 0.0 {
                return Err(Error::SolverFailure { iterations, residual: rel, history });
            }
            cs[k] = a0 / d;
            sn[k] = a1 / d;
            h[k * m + k] = d;
            h[(k + 1) * m + k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            iterations += 1;
            k += 1;
            let est = g[k].abs() / bnorm;
            history.push(est);
            if est <= cfg.tol || hn == 0.0 {
                break;
            }
        }

        // y = H^{-1} g, then x += M^{-1} V y
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= h[i * m + j] * y[j];
            }
            y[i] = s / h[i * m + i];
        }
        work.iter_mut().for_each(|v| *v = 0.0);
        for (yi, vi) in y.iter().zip(&basis) {
            for (wv, vv) in work.iter_mut().zip(vi) {
                *wv += yi * vv;
            }
        }
        apply_m(&mut work);
        for (xi, wi) in x.iter_mut().zip(&work) {
            *xi += wi;
        }
    }
}
