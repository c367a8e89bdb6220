use crate::basis::{to_physical, BasisSet, PSI0};
use crate::error::{Error, Result};
use crate::mesh::{Mesh1D, Mesh2D};
use crate::quadrature::gauss_rule;

/// Modal DG state on a 1D mesh.
///
/// Coefficients are stored `[cell][variable][mode]`. With the orthonormal reference basis
/// the cell average of variable `v` in cell `k` is `coeff(k, v, 0) / sqrt(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DGSolution1D {
    pub mesh: Mesh1D,
    degree: usize,
    nvars: usize,
    coeffs: Vec<f64>,
}

impl DGSolution1D {
    pub fn zeros(mesh: Mesh1D, degree: usize, nvars: usize) -> Self {
        let n = mesh.num_cells() * nvars * (degree + 1);
        Self {
            mesh,
            degree,
            nvars,
            coeffs: vec![0.0; n],
        }
    }

    /// L2 projection of `f(x, out)` with an `(N+2)`-point Gauss rule per cell.
    pub fn project(
        mesh: Mesh1D,
        degree: usize,
        nvars: usize,
        f: impl Fn(f64, &mut [f64]),
    ) -> Result<Self> {
        let mut sol = Self::zeros(mesh, degree, nvars);
        let basis = BasisSet::new(degree);
        let rule = gauss_rule(degree + 2)?;
        let table = basis.table(&rule.points);
        let np = degree + 1;
        let mut val = vec![0.0; nvars];
        for k in 0..sol.mesh.num_cells() {
            let cell = sol.mesh.cell(k);
            for (q, (r, w)) in rule.iter().enumerate() {
                f(to_physical(cell, r), &mut val);
                for v in 0..nvars {
                    let base = (k * nvars + v) * np;
                    for n in 0..np {
                        sol.coeffs[base + n] += w * val[v] * table[q * np + n];
                    }
                }
            }
        }
        Ok(sol)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_modes(&self) -> usize {
        self.degree + 1
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_cells(&self) -> usize {
        self.mesh.num_cells()
    }

    /// Number of coefficients per cell (`nvars * (N+1)`).
    pub fn cell_stride(&self) -> usize {
        self.nvars * (self.degree + 1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn set_coeffs(&mut self, c: &[f64]) -> Result<()> {
        if c.len() != self.coeffs.len() {
            return Err(Error::invalid("coefficient length mismatch"));
        }
        self.coeffs.copy_from_slice(c);
        Ok(())
    }

    pub fn cell(&self, k: usize) -> &[f64] {
        let s = self.cell_stride();
        &self.coeffs[k * s..(k + 1) * s]
    }

    pub fn cell_mut(&mut self, k: usize) -> &mut [f64] {
        let s = self.cell_stride();
        &mut self.coeffs[k * s..(k + 1) * s]
    }

    #[inline]
    pub fn coeff(&self, k: usize, v: usize, n: usize) -> f64 {
        self.coeffs[(k * self.nvars + v) * (self.degree + 1) + n]
    }

    pub fn cell_average(&self, k: usize, v: usize) -> f64 {
        self.coeff(k, v, 0) * PSI0
    }

    pub fn cell_averages(&self, k: usize) -> Vec<f64> {
        (0..self.nvars).map(|v| self.cell_average(k, v)).collect()
    }

    /// Point value at reference coordinate `r` of cell `k`.
    pub fn evaluate(&self, k: usize, r: f64, out: &mut [f64]) {
        let basis = BasisSet::new(self.degree);
        let phi = basis.values(r);
        let np = self.degree + 1;
        for v in 0..self.nvars {
            let c = &self.coeffs[(k * self.nvars + v) * np..(k * self.nvars + v + 1) * np];
            out[v] = c.iter().zip(&phi).map(|(a, b)| a * b).sum();
        }
    }

    /// Value at physical `x`; `None` outside the domain.
    pub fn evaluate_at(&self, x: f64) -> Option<Vec<f64>> {
        let k = self.mesh.locate(x)?;
        let r = crate::basis::to_reference(self.mesh.cell(k), x).clamp(-1.0, 1.0);
        let mut out = vec![0.0; self.nvars];
        self.evaluate(k, r, &mut out);
        Some(out)
    }

    /// `sum_k avg_k(v) h_k`, the discrete integral of variable `v`.
    pub fn total(&self, v: usize) -> f64 {
        (0..self.num_cells())
            .map(|k| self.cell_average(k, v) * self.mesh.width(k))
            .sum()
    }
}

/// Modal tensor-product DG state on a 2D Cartesian mesh.
///
/// Coefficients are stored `[cell][variable][mode_y][mode_x]` with cells row-major (x
/// fastest). The basis is `psi_a(r) psi_b(s)`, `a, b = 0..N`, so the cell average is
/// `coeff(cell, v, 0, 0) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DGSolution2D {
    pub mesh: Mesh2D,
    degree: usize,
    nvars: usize,
    coeffs: Vec<f64>,
}

impl DGSolution2D {
    pub fn zeros(mesh: Mesh2D, degree: usize, nvars: usize) -> Self {
        let np = degree + 1;
        let n = mesh.num_cells() * nvars * np * np;
        Self {
            mesh,
            degree,
            nvars,
            coeffs: vec![0.0; n],
        }
    }

    /// L2 projection with a tensor `(N+2)^2` Gauss rule per cell.
    pub fn project(
        mesh: Mesh2D,
        degree: usize,
        nvars: usize,
        f: impl Fn(f64, f64, &mut [f64]),
    ) -> Result<Self> {
        let mut sol = Self::zeros(mesh, degree, nvars);
        let basis = BasisSet::new(degree);
        let rule = gauss_rule(degree + 2)?;
        let nq = rule.len();
        let table = basis.table(&rule.points);
        let np = degree + 1;
        let np2 = np * np;
        let mut val = vec![0.0; nvars];
        let stride = nvars * np2;
        for j in 0..sol.mesh.ny() {
            let cy = sol.mesh.y.cell(j);
            for i in 0..sol.mesh.nx() {
                let cx = sol.mesh.x.cell(i);
                let base = sol.mesh.index(i, j) * stride;
                for qy in 0..nq {
                    let y = to_physical(cy, rule.points[qy]);
                    for qx in 0..nq {
                        let x = to_physical(cx, rule.points[qx]);
                        f(x, y, &mut val);
                        let w = rule.weights[qx] * rule.weights[qy];
                        for v in 0..nvars {
                            for b in 0..np {
                                let wb = w * val[v] * table[qy * np + b];
                                for a in 0..np {
                                    sol.coeffs[base + v * np2 + b * np + a] +=
                                        wb * table[qx * np + a];
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(sol)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_modes_1d(&self) -> usize {
        self.degree + 1
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_cells(&self) -> usize {
        self.mesh.num_cells()
    }

    pub fn cell_stride(&self) -> usize {
        let np = self.degree + 1;
        self.nvars * np * np
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn set_coeffs(&mut self, c: &[f64]) -> Result<()> {
        if c.len() != self.coeffs.len() {
            return Err(Error::invalid("coefficient length mismatch"));
        }
        self.coeffs.copy_from_slice(c);
        Ok(())
    }

    pub fn cell(&self, i: usize, j: usize) -> &[f64] {
        let s = self.cell_stride();
        let c = self.mesh.index(i, j);
        &self.coeffs[c * s..(c + 1) * s]
    }

    pub fn cell_mut(&mut self, i: usize, j: usize) -> &mut [f64] {
        let s = self.cell_stride();
        let c = self.mesh.index(i, j);
        &mut self.coeffs[c * s..(c + 1) * s]
    }

    pub fn cell_average(&self, i: usize, j: usize, v: usize) -> f64 {
        let np = self.degree + 1;
        self.cell(i, j)[v * np * np] * 0.5
    }

    pub fn cell_averages(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.nvars).map(|v| self.cell_average(i, j, v)).collect()
    }

    /// Point value at reference coordinates `(r, s)` of cell `(i, j)`.
    pub fn evaluate(&self, i: usize, j: usize, r: f64, s: f64, out: &mut [f64]) {
        let basis = BasisSet::new(self.degree);
        let px = basis.values(r);
        let py = basis.values(s);
        let np = self.degree + 1;
        let c = self.cell(i, j);
        for v in 0..self.nvars {
            let mut acc = 0.0;
            for b in 0..np {
                for a in 0..np {
                    acc += c[v * np * np + b * np + a] * px[a] * py[b];
                }
            }
            out[v] = acc;
        }
    }

    pub fn total(&self, v: usize) -> f64 {
        let mut s = 0.0;
        for j in 0..self.mesh.ny() {
            for i in 0..self.mesh.nx() {
                s += self.cell_average(i, j, v) * self.mesh.area(i, j);
            }
        }
        s
    }
}
