//! Jacobi-preconditioned conjugate gradients on the cut-cell 5-point operator.

use crate::geometry::LabeledGrid;

/// Sparse symmetric operator assembled from a labeled grid.
pub(crate) struct Operator<'a> {
    pub neighbors: &'a [[u32; 4]],
    pub weights: &'a [[f64; 4]],
    pub diag: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl<'a> Operator<'a> {
    pub fn new(grid: &'a LabeledGrid) -> Operator<'a> {
        let n = grid.unknowns.len();
        let mut diag: Vec<f64> = grid
            .neighbors
            .iter()
            .zip(&grid.weights)
            .map(|(nb, w)| (0..4).filter(|&s| nb[s] != u32::MAX).map(|s| w[s]).sum())
            .collect();
        let mut rhs = vec![0.0; n];
        for c in &grid.cuts {
            if let Some(g) = c.label.dirichlet_value() {
                let p = grid.unknowns.binary_search(&c.node).expect("cut from an interior node");
                diag[p] += c.w / c.t;
                rhs[p] += c.w * g / c.t;
            }
        }
        Operator { neighbors: &grid.neighbors, weights: &grid.weights, diag, rhs }
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (p, (nb, w)) in self.neighbors.iter().zip(self.weights).enumerate() {
            let mut s = self.diag[p] * x[p];
            for k in 0..4 {
                if nb[k] != u32::MAX {
                    s -= w[k] * x[nb[k] as usize];
                }
            }
            y[p] = s;
        }
    }
}

pub(crate) struct CgOutcome {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    /// Value of `xᵀAx − 2bᵀx` after each iteration, when requested.
    pub functional: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `A x = b` starting from `x`; stops when `‖r‖ ≤ tol·‖b‖`.
pub(crate) fn pcg(op: &Operator, x: &mut [f64], tol: f64, max_iter: usize, record: bool) -> CgOutcome {
    let n = x.len();
    let b = &op.rhs;
    let bnorm = dot(b, b).sqrt().max(f64::MIN_POSITIVE);
    let mut r = vec![0.0; n];
    op.apply(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let inv: Vec<f64> = op.diag.iter().map(|d| 1.0 / d).collect();
    let mut z: Vec<f64> = r.iter().zip(&inv).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut functional = Vec::new();
    let mut j = if record {
        op.apply(x, &mut ap);
        dot(x, &ap) - 2.0 * dot(b, x)
    } else {
        0.0
    };
    let mut res = dot(&r, &r).sqrt() / bnorm;
    let mut it = 0;
    while res > tol && it < max_iter {
        op.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rz / pap;
        let mut rr = 0.0;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            z[i] = r[i] * inv[i];
            rr += r[i] * r[i];
        }
        if record {
            j -= alpha * rz;
            functional.push(j);
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        res = rr.sqrt() / bnorm;
        it += 1;
    }
    CgOutcome { iterations: it, residual: res, converged: res <= tol, functional }
}
