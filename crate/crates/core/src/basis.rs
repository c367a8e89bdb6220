//! Orthonormal Legendre modal basis on the reference element, the affine map and
//! per-cell mass/stiffness operators.
//!
//! The reference basis is `psi_n(r) = sqrt((2n+1)/2) P_n(r)`, orthonormal on `[-1, 1]`.
//! On a physical cell of width `h` this gives `M = (h/2) I`, and the cell average of
//! `u_h = sum_n u_n psi_n` is `u_0 / sqrt(2)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_rule, legendre_with_derivative, QuadratureRule};

/// `1 / sqrt(2)`: value of `psi_0`, and the factor between `u_0` and the cell average.
pub const PSI0: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Polynomial degree `N` modal basis; `N + 1` modes per dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisSet {
    degree: usize,
}

impl BasisSet {
    pub fn new(degree: usize) -> Self {
        Self { degree }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_modes(&self) -> usize {
        self.degree + 1
    }

    #[inline]
    pub fn value(&self, n: usize, r: f64) -> f64 {
        let (p, _) = legendre_with_derivative(n, r);
        norm(n) * p
    }

    #[inline]
    pub fn derivative(&self, n: usize, r: f64) -> f64 {
        let (_, dp) = legendre_with_derivative(n, r);
        norm(n) * dp
    }

    /// All modes at `r`.
    pub fn values(&self, r: f64) -> Vec<f64> {
        (0..=self.degree).map(|n| self.value(n, r)).collect()
    }

    /// Evaluate `sum_n coeffs[n] psi_n(r)`.
    pub fn evaluate(&self, coeffs: &[f64], r: f64) -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * self.value(n, r))
            .sum()
    }

    /// Table of `psi_n(r_q)` stored `[q][n]`.
    pub fn table(&self, points: &[f64]) -> Vec<f64> {
        points
            .iter()
            .flat_map(|&r| (0..=self.degree).map(move |n| self.value(n, r)))
            .collect()
    }

    /// Table of `dpsi_n/dr(r_q)` stored `[q][n]`.
    pub fn derivative_table(&self, points: &[f64]) -> Vec<f64> {
        points
            .iter()
            .flat_map(|&r| (0..=self.degree).map(move |n| self.derivative(n, r)))
            .collect()
    }

    /// L2 projection coefficients of `f` on the reference element, using `rule`.
    pub fn project(&self, rule: &QuadratureRule, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let vals: Vec<f64> = rule.points.iter().map(|&r| f(r)).collect();
        (0..=self.degree)
            .map(|n| {
                rule.iter()
                    .zip(&vals)
                    .map(|((r, w), v)| w * v * self.value(n, r))
                    .sum()
            })
            .collect()
    }
}

/// Values of the tensor expansion `c[b * np + a]` on the grid `points x points`, by sum
/// factorisation. `table` is `[q][n]` as from [`BasisSet::table`]; `tmp` holds `np * npts`
/// and `out[qy * npts + qx]` receives the values.
pub(crate) fn tensor_grid_values(c: &[f64], np: usize, table: &[f64], tmp: &mut [f64], out: &mut [f64]) {
    match np {
        1 => grid_fixed::<1>(c, table, tmp, out),
        2 => grid_fixed::<2>(c, table, tmp, out),
        3 => grid_fixed::<3>(c, table, tmp, out),
        4 => grid_fixed::<4>(c, table, tmp, out),
        _ => grid_any(c, np, table, tmp, out),
    }
}

fn grid_fixed<const NP: usize>(c: &[f64], table: &[f64], tmp: &mut [f64], out: &mut [f64]) {
    let npts = table.len() / NP;
    let tmp = &mut tmp[..NP * npts];
    let rows: &[[f64; NP]] = as_rows(table);
    for (b, trow) in tmp.chunks_exact_mut(npts).enumerate() {
        let cb: &[f64; NP] = c[b * NP..(b + 1) * NP].try_into().unwrap();
        for (t, o) in rows.iter().zip(trow.iter_mut()) {
            let mut s = 0.0;
            for a in 0..NP {
                s += cb[a] * t[a];
            }
            *o = s;
        }
    }
    for (t, orow) in rows.iter().zip(out.chunks_exact_mut(npts)) {
        for (p, o) in orow.iter_mut().enumerate() {
            let mut s = 0.0;
            for b in 0..NP {
                s += t[b] * tmp[b * npts + p];
            }
            *o = s;
        }
    }
}

fn as_rows<const NP: usize>(table: &[f64]) -> &[[f64; NP]] {
    let (rows, rest) = table.as_chunks::<NP>();
    debug_assert!(rest.is_empty());
    rows
}

fn grid_any(c: &[f64], np: usize, table: &[f64], tmp: &mut [f64], out: &mut [f64]) {
    let npts = table.len() / np;
    let tmp = &mut tmp[..np * npts];
    for (row, trow) in c.chunks_exact(np).zip(tmp.chunks_exact_mut(npts)) {
        for (t, o) in table.chunks_exact(np).zip(trow.iter_mut()) {
            *o = row.iter().zip(t).map(|(x, y)| x * y).sum();
        }
    }
    for (t, orow) in table.chunks_exact(np).zip(out.chunks_exact_mut(npts)) {
        orow.fill(0.0);
        for (&tb, trow) in t.iter().zip(tmp.chunks_exact(npts)) {
            for (o, x) in orow.iter_mut().zip(trow) {
                *o += tb * x;
            }
        }
    }
}

#[inline]
fn norm(n: usize) -> f64 {
    ((2 * n + 1) as f64 / 2.0).sqrt()
}

/// `x(r) = x_l + (1 + r) h / 2`.
pub fn affine_map(cell: (f64, f64), r: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&r) {
        return Err(Error::invalid(format!("reference coordinate {r} outside [-1, 1]")));
    }
    Ok(to_physical(cell, r))
}

pub fn inverse_affine_map(cell: (f64, f64), x: f64) -> Result<f64> {
    let (xl, xr) = cell;
    if !(xl..=xr).contains(&x) {
        return Err(Error::invalid(format!("{x} outside cell [{xl}, {xr}]")));
    }
    Ok(to_reference(cell, x))
}

#[inline]
pub(crate) fn to_physical(cell: (f64, f64), r: f64) -> f64 {
    cell.0 + 0.5 * (1.0 + r) * (cell.1 - cell.0)
}

#[inline]
pub(crate) fn to_reference(cell: (f64, f64), x: f64) -> f64 {
    2.0 * (x - cell.0) / (cell.1 - cell.0) - 1.0
}

/// Physical mass and stiffness matrices of one cell.
#[derive(Debug, Clone)]
pub struct CellOperators {
    /// `M_ij = int psi_i psi_j dx`
    pub mass: DMatrix<f64>,
    /// `S_ij = int psi_i dpsi_j/dx dx`
    pub stiffness: DMatrix<f64>,
}

pub fn build_cell_operators(cell: (f64, f64), basis: &BasisSet) -> Result<CellOperators> {
    let h = cell.1 - cell.0;
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::invalid(format!("degenerate cell [{}, {}]", cell.0, cell.1)));
    }
    let np = basis.num_modes();
    let rule = gauss_rule(np + 1)?;
    let mut mass = DMatrix::zeros(np, np);
    let mut stiffness = DMatrix::zeros(np, np);
    for (r, w) in rule.iter() {
        for i in 0..np {
            let pi = basis.value(i, r);
            for j in 0..np {
                // dx = h/2 dr, d/dx = 2/h d/dr
                mass[(i, j)] += w * pi * basis.value(j, r) * 0.5 * h;
                stiffness[(i, j)] += w * pi * basis.derivative(j, r);
            }
        }
    }
    Ok(CellOperators { mass, stiffness })
}
