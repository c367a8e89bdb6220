//! Positivity-preserving scaling for Euler solutions.

use crate::basis::{tensor_grid_values, BasisSet};
use crate::dg::{DGSolution1D, DGSolution2D};
use crate::error::{Error, Result};
use crate::physics::{GAMMA, MAX_VARS};
use crate::quadrature::gauss_rule;

/// Lower bound enforced on density and pressure at the check points.
pub const POSITIVITY_EPS: f64 = 1e-13;

/// Pressure of a conserved state `(rho, momentum.., E)` in 1D or 2D.
fn pressure(u: &[f64]) -> f64 {
    let m = u.len();
    let kinetic: f64 = u[1..m - 1].iter().map(|q| q * q).sum::<f64>() / (2.0 * u[0]);
    (GAMMA - 1.0) * (u[m - 1] - kinetic)
}

/// Largest `t` in `[0, 1]` with `p(mean + t (u - mean)) >= eps`; `p(mean) > eps` required.
fn pressure_theta(mean: &[f64], u: &[f64], eps: f64) -> f64 {
    let m = mean.len();
    let mut s = [0.0; MAX_VARS];
    let at = |t: f64, s: &mut [f64; MAX_VARS]| {
        for v in 0..m {
            s[v] = mean[v] + t * (u[v] - mean[v]);
        }
        pressure(&s[..m])
    };
    if at(1.0, &mut s) >= eps {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if at(mid, &mut s) >= eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Scale the non-constant modes of one cell. `values[pt][var]` holds the polynomial at the
/// check points and `mean_scale` turns the constant mode into the cell mean. Returns
/// whether the cell was changed.
fn fix_cell(
    cell: usize,
    coeffs: &mut [f64],
    nvars: usize,
    values: &mut [f64],
    mean_scale: f64,
    eps: f64,
) -> Result<bool> {
    let modes = coeffs.len() / nvars;
    let mut mean = [0.0; MAX_VARS];
    for v in 0..nvars {
        mean[v] = coeffs[v * modes] * mean_scale;
    }
    if !(mean[0] > eps) || !(pressure(&mean[..nvars]) > eps) {
        return Err(Error::state(cell, "inadmissible cell average"));
    }
    let mut changed = false;
    let rho_min = values.chunks_exact(nvars).map(|u| u[0]).fold(f64::INFINITY, f64::min);
    if rho_min < eps {
        let theta = ((mean[0] - eps) / (mean[0] - rho_min)).clamp(0.0, 1.0);
        for c in &mut coeffs[1..modes] {
            *c *= theta;
        }
        // scaling the modes scales the deviation from the mean at every point
        for u in values.chunks_exact_mut(nvars) {
            u[0] = mean[0] + theta * (u[0] - mean[0]);
        }
        changed = true;
    }
    let mut theta = 1.0f64;
    for u in values.chunks_exact(nvars) {
        if pressure(u) < eps {
            theta = theta.min(pressure_theta(&mean[..nvars], u, eps));
        }
    }
    if theta < 1.0 {
        for v in 0..nvars {
            for c in &mut coeffs[v * modes + 1..(v + 1) * modes] {
                *c *= theta;
            }
        }
        changed = true;
    }
    Ok(changed)
}

/// Check points of a 1D cell: `(N+2)` Gauss points and both end points.
fn check_points_1d(degree: usize) -> Result<Vec<f64>> {
    let mut pts = gauss_rule(degree + 2)?.points;
    pts.push(-1.0);
    pts.push(1.0);
    Ok(pts)
}

/// Zhang-Shu scaling on every cell of a 1D Euler solution; returns the number of cells
/// modified.
pub fn positivity_fix_1d(sol: &mut DGSolution1D, eps: f64) -> Result<usize> {
    let basis = BasisSet::new(sol.degree());
    let table = basis.table(&check_points_1d(sol.degree())?);
    let np = sol.degree() + 1;
    let npts = table.len() / np;
    let m = sol.nvars();
    let mut values = vec![0.0; npts * m];
    let mut count = 0;
    for k in 0..sol.num_cells() {
        let c = sol.cell_mut(k);
        for pt in 0..npts {
            let t = &table[pt * np..(pt + 1) * np];
            for v in 0..m {
                values[pt * m + v] = c[v * np..(v + 1) * np].iter().zip(t).map(|(a, b)| a * b).sum();
            }
        }
        if fix_cell(k, c, m, &mut values, crate::basis::PSI0, eps)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Check points of a 2D cell as `(r, s)`: the tensor `(N+2)^2` Gauss points and
/// `(N+2)` Gauss points on each edge.
#[cfg(test)]
pub(crate) fn check_points_2d(degree: usize) -> Result<Vec<(f64, f64)>> {
    let g = gauss_rule(degree + 2)?.points;
    let mut pts = Vec::with_capacity(g.len() * (g.len() + 4));
    for &s in &g {
        for &r in &g {
            pts.push((r, s));
        }
    }
    for &p in &g {
        pts.extend([(-1.0, p), (1.0, p), (p, -1.0), (p, 1.0)]);
    }
    Ok(pts)
}

pub fn positivity_fix_2d(sol: &mut DGSolution2D, eps: f64) -> Result<usize> {
    let degree = sol.degree();
    let np = degree + 1;
    let np2 = np * np;
    let basis = BasisSet::new(degree);
    // Gauss points plus both ends; the tensor grid over them minus its four corners is
    // exactly the set from `check_points_2d`.
    let mut line = gauss_rule(degree + 2)?.points;
    line.extend([-1.0, 1.0]);
    let n = line.len();
    let table = basis.table(&line);
    let keep: Vec<usize> = (0..n * n)
        .filter(|&q| {
            let (qx, qy) = (q % n, q / n);
            !(qx >= n - 2 && qy >= n - 2)
        })
        .collect();
    let m = sol.nvars();
    let mut tmp = vec![0.0; np * n];
    let mut grid = vec![0.0; m * n * n];
    let mut values = vec![0.0; keep.len() * m];
    let mut count = 0;
    for j in 0..sol.mesh.ny() {
        for i in 0..sol.mesh.nx() {
            let cell = sol.mesh.index(i, j);
            let c = sol.cell_mut(i, j);
            for v in 0..m {
                tensor_grid_values(&c[v * np2..(v + 1) * np2], np, &table, &mut tmp, &mut grid[v * n * n..(v + 1) * n * n]);
            }
            for (p, &q) in keep.iter().enumerate() {
                for v in 0..m {
                    values[p * m + v] = grid[v * n * n + q];
                }
            }
            if fix_cell(cell, c, m, &mut values, 0.5, eps)? {
                count += 1;
            }
        }
    }
    Ok(count)
}
