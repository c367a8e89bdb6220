//! Cell-average reconstruction on a (2N+1)-cell stencil.
//!
//! Polynomials are written in monomials of `xi = (x - x_j) / h_j`, so the troubled cell is
//! `[-1/2, 1/2]` and a reference point `r` maps to `xi = r / 2`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Rows mapping the `2N+1` stencil averages to `p_i(x_G)` and `Q(x_G)` at every
/// reconstruction point, the linear weights, and the smoothness-indicator quadratic forms.
#[derive(Debug, Clone)]
pub struct ReconstructionOperator {
    degree: usize,
    points: Vec<f64>,
    // [point][stencil][cell], cells outside the small stencil are zero
    p_rows: Vec<f64>,
    // [point][cell]
    q_rows: Vec<f64>,
    // [point][stencil]
    gammas: Vec<f64>,
    // [stencil][(N+1) x (N+1)] acting on the averages of cells i..=i+N
    beta_forms: Vec<f64>,
}

/// Averages of `xi^m`, m = 0..n, over `[a, b]`.
fn monomial_averages(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|m| {
            let p = (m + 1) as i32;
            (b.powi(p) - a.powi(p)) / ((m + 1) as f64 * (b - a))
        })
        .collect()
}

/// Interval `[a, b]` in `xi` units of every stencil cell.
fn cell_intervals(widths: &[f64], center: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); widths.len()];
    out[center] = (-0.5, 0.5);
    let mut x = -0.5;
    for c in (0..center).rev() {
        out[c] = (x - widths[c], x);
        x -= widths[c];
    }
    let mut x = 0.5;
    for c in center + 1..widths.len() {
        out[c] = (x, x + widths[c]);
        x += widths[c];
    }
    out
}

/// Inverse of the average-interpolation matrix for the given cells; row `m` of the result
/// gives the `xi^m` coefficient as a combination of the cell averages.
fn interpolation_inverse(cells: &[(f64, f64)]) -> Result<DMatrix<f64>> {
    let n = cells.len();
    let mut a = DMatrix::zeros(n, n);
    for (r, &(lo, hi)) in cells.iter().enumerate() {
        for (m, v) in monomial_averages(lo, hi, n).into_iter().enumerate() {
            a[(r, m)] = v;
        }
    }
    a.try_inverse()
        .ok_or_else(|| Error::Internal("singular reconstruction system".into()))
}

/// `∫_{-1/2}^{1/2} Σ_{l=1}^{n-1} (d^l xi^p)(d^l xi^q) dxi` for monomials of degree < n.
fn derivative_gram(n: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(n, n);
    for p in 0..n {
        for q in 0..n {
            let mut s = 0.0;
            for l in 1..n {
                if l > p || l > q {
                    continue;
                }
                let cp: f64 = ((p - l + 1)..=p).map(|v| v as f64).product();
                let cq: f64 = ((q - l + 1)..=q).map(|v| v as f64).product();
                let e = (p - l) + (q - l) + 1;
                let integral = (0.5f64.powi(e as i32) - (-0.5f64).powi(e as i32)) / e as f64;
                s += cp * cq * integral;
            }
            g[(p, q)] = s;
        }
    }
    g
}

impl ReconstructionOperator {
    /// Build the operator for stencil `widths` (length `2N+1`, in units of the troubled
    /// cell's width, troubled cell in the middle) at reference points `points` of `[-1, 1]`.
    pub fn new(widths: &[f64], degree: usize, points: &[f64]) -> Result<Self> {
        let nc = 2 * degree + 1;
        if widths.len() != nc {
            return Err(Error::invalid(format!(
                "stencil needs {nc} widths, got {}",
                widths.len()
            )));
        }
        if widths.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::invalid("stencil widths must be positive"));
        }
        if points.iter().any(|r| !(-1.0..=1.0).contains(r)) {
            return Err(Error::invalid("reconstruction points must lie in [-1, 1]"));
        }
        let np = degree + 1;
        let cells = cell_intervals(widths, degree);
        let large = interpolation_inverse(&cells)?;
        let small: Vec<DMatrix<f64>> = (0..np)
            .map(|i| interpolation_inverse(&cells[i..i + np]))
            .collect::<Result<_>>()?;

        let npts = points.len();
        let mut p_rows = vec![0.0; npts * np * nc];
        let mut q_rows = vec![0.0; npts * nc];
        let mut gammas = vec![0.0; npts * np];
        for (g, &r) in points.iter().enumerate() {
            let xi = 0.5 * r;
            let phi_q: DVector<f64> = DVector::from_fn(nc, |m, _| xi.powi(m as i32));
            let q = large.transpose() * phi_q;
            q_rows[g * nc..(g + 1) * nc].copy_from_slice(q.as_slice());
            let phi_p: DVector<f64> = DVector::from_fn(np, |m, _| xi.powi(m as i32));
            let mut sys = DMatrix::zeros(nc, np);
            for (i, inv) in small.iter().enumerate() {
                let row = inv.transpose() * &phi_p;
                for (c, v) in row.iter().enumerate() {
                    p_rows[(g * np + i) * nc + i + c] = *v;
                    sys[(i + c, i)] = *v;
                }
            }
            // Σ γ_i p_i = Q as a least-squares system over the stencil cells
            let svd = sys.clone().svd(true, true);
            let gamma = svd
                .solve(&q, 1e-13)
                .map_err(|e| Error::Internal(format!("linear weights: {e}")))?;
            let residual = (&sys * &gamma - &q).amax();
            if residual > 1e-10 {
                return Err(Error::Internal(format!(
                    "no linear weights at r = {r}: residual {residual:.3e}"
                )));
            }
            gammas[g * np..(g + 1) * np].copy_from_slice(gamma.as_slice());
        }

        let gram = derivative_gram(np);
        let mut beta_forms = vec![0.0; np * np * np];
        for (i, inv) in small.iter().enumerate() {
            let h = inv.transpose() * &gram * inv;
            beta_forms[i * np * np..(i + 1) * np * np].copy_from_slice(h.transpose().as_slice());
        }

        Ok(Self {
            degree,
            points: points.to_vec(),
            p_rows,
            q_rows,
            gammas,
            beta_forms,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    fn stencil_len(&self) -> usize {
        2 * self.degree + 1
    }

    /// Row of small-stencil polynomial `i` at point `g`, over all `2N+1` cells.
    pub fn p_row(&self, g: usize, i: usize) -> &[f64] {
        let nc = self.stencil_len();
        let np = self.degree + 1;
        &self.p_rows[(g * np + i) * nc..(g * np + i + 1) * nc]
    }

    /// Row of the large-stencil polynomial `Q` at point `g`.
    pub fn q_row(&self, g: usize) -> &[f64] {
        let nc = self.stencil_len();
        &self.q_rows[g * nc..(g + 1) * nc]
    }

    /// Linear weights `γ_0..γ_N` at point `g`.
    pub fn gamma(&self, g: usize) -> &[f64] {
        let np = self.degree + 1;
        &self.gammas[g * np..(g + 1) * np]
    }

    /// Smoothness indicators `β_0..β_N` of the stencil averages.
    pub fn smoothness_indicators(&self, averages: &[f64], out: &mut [f64]) {
        let np = self.degree + 1;
        for (i, beta) in out.iter_mut().enumerate().take(np) {
            let h = &self.beta_forms[i * np * np..(i + 1) * np * np];
            let u = &averages[i..i + np];
            let mut s = 0.0;
            for a in 0..np {
                let row: f64 = (0..np).map(|b| h[a * np + b] * u[b]).sum();
                s += u[a] * row;
            }
            *beta = s.max(0.0);
        }
    }

    /// WENO value at point `g`: `Σ ω_i p_i(x_G)` with the splitting technique when some
    /// linear weight is negative.
    pub fn point_value(&self, g: usize, averages: &[f64], epsilon: f64) -> f64 {
        let np = self.degree + 1;
        let mut beta = [0.0; MAX_STENCILS];
        let mut p = [0.0; MAX_STENCILS];
        self.smoothness_indicators(averages, &mut beta[..np]);
        for (i, pv) in p.iter_mut().enumerate().take(np) {
            *pv = dot(self.p_row(g, i), averages);
        }
        weno_combine(self.gamma(g), &beta[..np], &p[..np], epsilon)
    }
}

pub(crate) const MAX_STENCILS: usize = 4;

/// `ω_i = ω̄_i / Σ ω̄`, `ω̄_i = γ_i / (ε + β_i)^2`; requires `γ_i >= 0`.
pub fn nonlinear_weights(gamma: &[f64], beta: &[f64], epsilon: f64, out: &mut [f64]) {
    let mut total = 0.0;
    for i in 0..gamma.len() {
        let w = gamma[i] / ((epsilon + beta[i]) * (epsilon + beta[i]));
        out[i] = w;
        total += w;
    }
    for w in out.iter_mut().take(gamma.len()) {
        *w /= total;
    }
}

/// Split factor for negative linear weights.
const SPLIT_THETA: f64 = 3.0;

/// Nonlinear combination of the small-stencil values `p`.
pub(crate) fn weno_combine(gamma: &[f64], beta: &[f64], p: &[f64], epsilon: f64) -> f64 {
    let n = gamma.len();
    let mut w = [0.0; MAX_STENCILS];
    if gamma.iter().all(|&g| g >= 0.0) {
        nonlinear_weights(gamma, beta, epsilon, &mut w[..n]);
        return (0..n).map(|i| w[i] * p[i]).sum();
    }
    let mut plus = [0.0; MAX_STENCILS];
    let mut minus = [0.0; MAX_STENCILS];
    for i in 0..n {
        plus[i] = 0.5 * (gamma[i] + SPLIT_THETA * gamma[i].abs());
        minus[i] = plus[i] - gamma[i];
    }
    let sp: f64 = plus[..n].iter().sum();
    let sm: f64 = minus[..n].iter().sum();
    for i in 0..n {
        plus[i] /= sp;
        minus[i] /= sm;
    }
    nonlinear_weights(&plus[..n], beta, epsilon, &mut w[..n]);
    let vp: f64 = (0..n).map(|i| w[i] * p[i]).sum();
    nonlinear_weights(&minus[..n], beta, epsilon, &mut w[..n]);
    let vm: f64 = (0..n).map(|i| w[i] * p[i]).sum();
    sp * vp - sm * vm
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
