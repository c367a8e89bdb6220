//! Compact subcell WENO limiting and the parent five-cell WENO variant.

mod positivity;
mod reconstruction;

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::Arc;

pub use positivity::{positivity_fix_1d, positivity_fix_2d, POSITIVITY_EPS};
#[cfg(test)]
pub(crate) use positivity::check_points_2d;
pub use reconstruction::{nonlinear_weights, ReconstructionOperator};

use crate::basis::{BasisSet, PSI0};
use crate::dg::neighbors::{cell_1d, cell_2d};
use crate::dg::{BoundarySpec1D, BoundarySpec2D, DGSolution1D, DGSolution2D};
use crate::error::{Error, Result};
use crate::indicator::{kxrcf_detect, kxrcf_detect_2d, Mask2D, DEFAULT_THRESHOLD};
use crate::physics::{Axis, FluxModel, MAX_VARS};
use crate::quadrature::{gauss_lobatto_rule, gauss_rule, QuadratureRule};
use reconstruction::dot;

/// Points at which the limiter reconstructs point values: 2-point Gauss for P1,
/// 4-point Gauss-Lobatto for P2 and 4-point Gauss for P3.
pub fn limiter_rule(degree: usize) -> Result<QuadratureRule> {
    match degree {
        1 => gauss_rule(2),
        2 => gauss_lobatto_rule(4),
        3 => gauss_rule(4),
        _ => Err(Error::Unsupported(format!(
            "limiting is implemented for degrees 1 to 3, got {degree}"
        ))),
    }
}

/// Stencil geometry used by the reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimiterVariant {
    /// Immediate neighbours split into `N` equal subcells each (`2N+1` cells).
    Cswen,
    /// `2N+1` full cells centred on the troubled cell.
    Weno,
}

impl LimiterVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            LimiterVariant::Cswen => "cswen",
            LimiterVariant::Weno => "weno",
        }
    }
}

impl FromStr for LimiterVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cswen" => Ok(LimiterVariant::Cswen),
            "weno" => Ok(LimiterVariant::Weno),
            other => Err(Error::invalid(format!("unknown limiter '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimiterConfig {
    pub variant: LimiterVariant,
    pub characteristic: bool,
    pub epsilon: f64,
    pub threshold: f64,
    /// Scale Euler solutions towards their cell means to keep density and pressure positive.
    pub positivity: bool,
}

impl Default for LimiterConfig {
    fn default() -> Self {
        Self {
            variant: LimiterVariant::Cswen,
            characteristic: true,
            epsilon: 1e-6,
            threshold: DEFAULT_THRESHOLD,
            positivity: false,
        }
    }
}

/// Per-call limiter statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LimitReport {
    pub troubled: usize,
    pub positivity_scaled: usize,
}

/// Mean states of the left neighbour, the cell and the right neighbour, used as
/// reference states for the characteristic decomposition.
type Means = [[f64; MAX_VARS]; 3];

pub struct Limiter {
    config: LimiterConfig,
    degree: usize,
    rule: QuadratureRule,
    // [g][n]: psi_n(r_g) and w_g psi_n(r_g)
    weighted: Vec<f64>,
    // [s][n]: average of psi_n over subcell s of [-1, 1]
    subcell: Vec<f64>,
    basis: BasisSet,
    cache: HashMap<Vec<i64>, Arc<ReconstructionOperator>>,
}

impl Limiter {
    pub fn new(degree: usize, config: LimiterConfig) -> Result<Self> {
        let rule = limiter_rule(degree)?;
        if !(config.epsilon > 0.0) {
            return Err(Error::invalid("WENO epsilon must be positive"));
        }
        let basis = BasisSet::new(degree);
        let np = degree + 1;
        let table = basis.table(&rule.points);
        let weighted = table
            .iter()
            .enumerate()
            .map(|(i, v)| v * rule.weights[i / np])
            .collect();
        let sub_rule = gauss_rule(degree + 1)?;
        let mut subcell = vec![0.0; degree * np];
        for s in 0..degree {
            let a = -1.0 + 2.0 * s as f64 / degree as f64;
            let b = a + 2.0 / degree as f64;
            for n in 0..np {
                subcell[s * np + n] = 0.5
                    * sub_rule
                        .iter()
                        .map(|(r, w)| w * basis.value(n, 0.5 * (a + b) + 0.5 * (b - a) * r))
                        .sum::<f64>();
            }
        }
        Ok(Self {
            config,
            degree,
            rule,
            weighted,
            subcell,
            basis,
            cache: HashMap::new(),
        })
    }

    pub fn config(&self) -> &LimiterConfig {
        &self.config
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Reconstruction points on the reference interval.
    pub fn points(&self) -> &[f64] {
        &self.rule.points
    }

    /// Cached reconstruction operator for a stencil geometry (widths relative to the
    /// troubled cell).
    pub fn operator(&mut self, widths: &[f64]) -> Result<Arc<ReconstructionOperator>> {
        let key: Vec<i64> = widths.iter().map(|w| (w * 1e12).round() as i64).collect();
        if let Some(op) = self.cache.get(&key) {
            return Ok(op.clone());
        }
        let op = Arc::new(ReconstructionOperator::new(widths, self.degree, &self.rule.points)?);
        self.cache.insert(key, op.clone());
        Ok(op)
    }

    /// Averages of a 1D cell polynomial over its `N` equal subcells, `[var][subcell]`.
    pub fn subcell_averages(&self, coeffs: &[f64], nvars: usize, out: &mut [f64]) {
        let np = self.degree + 1;
        let ns = self.degree;
        for v in 0..nvars {
            let c = &coeffs[v * np..(v + 1) * np];
            for s in 0..ns {
                out[v * ns + s] = dot(c, &self.subcell[s * np..(s + 1) * np]);
            }
        }
    }

    /// Reconstructed point values `[g][var]` at the limiter points of a 1D cell.
    ///
    /// `center` holds the cell's coefficients `[var][mode]`; `fetch(offset, buf)` copies
    /// the cell at `offset` into `buf` and returns its width. `h` is the cell's width.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn point_values(
        &mut self,
        model: &dyn FluxModel,
        axis: Axis,
        center: &[f64],
        h: f64,
        means: &Means,
        fetch: &mut dyn FnMut(isize, &mut [f64]) -> Result<f64>,
        out: &mut [f64],
    ) -> Result<()> {
        let n = self.degree;
        let np = n + 1;
        let m = center.len() / np;
        let nc = 2 * n + 1;
        let mut averages = vec![0.0; m * nc];
        let mut widths = vec![0.0; nc];
        let mut buf = vec![0.0; m * np];
        for v in 0..m {
            averages[v * nc + n] = center[v * np] * PSI0;
        }
        widths[n] = 1.0;
        match self.config.variant {
            LimiterVariant::Cswen => {
                let mut sub = vec![0.0; m * n];
                for (offset, first) in [(-1isize, 0usize), (1, n + 1)] {
                    let hn = fetch(offset, &mut buf)?;
                    self.subcell_averages(&buf, m, &mut sub);
                    for s in 0..n {
                        widths[first + s] = hn / (n as f64 * h);
                        for v in 0..m {
                            averages[v * nc + first + s] = sub[v * n + s];
                        }
                    }
                }
            }
            LimiterVariant::Weno => {
                for c in 0..nc {
                    if c == n {
                        continue;
                    }
                    let hn = fetch(c as isize - n as isize, &mut buf)?;
                    widths[c] = hn / h;
                    for v in 0..m {
                        averages[v * nc + c] = buf[v * np] * PSI0;
                    }
                }
            }
        }
        let op = self.operator(&widths)?;
        let eps = self.config.epsilon;
        let mut left = [0.0; MAX_VARS * MAX_VARS];
        let mut right = [0.0; MAX_VARS * MAX_VARS];
        let mut reference = [0.0; MAX_VARS];
        let mut chars = vec![0.0; m * nc];
        let mut vals = [0.0; MAX_VARS];
        let mut cached_side = 0i8;
        for (g, &r) in self.rule.points.iter().enumerate() {
            let side: i8 = if r < 0.0 {
                -1
            } else if r > 0.0 {
                1
            } else {
                0
            };
            let mut decomposed = false;
            if self.config.characteristic && m > 1 {
                let nb = &means[(side + 1) as usize];
                for v in 0..m {
                    reference[v] = if side == 0 {
                        means[1][v]
                    } else {
                        0.5 * (means[1][v] + nb[v])
                    };
                }
                if g == 0 || side != cached_side {
                    decomposed = model.characteristics(
                        &reference[..m],
                        axis,
                        &mut left[..m * m],
                        &mut right[..m * m],
                    )?;
                    if decomposed {
                        for c in 0..nc {
                            for k in 0..m {
                                chars[k * nc + c] =
                                    (0..m).map(|v| left[k * m + v] * averages[v * nc + c]).sum();
                            }
                        }
                    }
                    cached_side = side;
                } else {
                    decomposed = true;
                }
            }
            if decomposed {
                for k in 0..m {
                    vals[k] = op.point_value(g, &chars[k * nc..(k + 1) * nc], eps);
                }
                for v in 0..m {
                    out[g * m + v] = (0..m).map(|k| right[v * m + k] * vals[k]).sum();
                }
            } else {
                for v in 0..m {
                    out[g * m + v] = op.point_value(g, &averages[v * nc..(v + 1) * nc], eps);
                }
            }
        }
        Ok(())
    }

    /// Modes `1..=N` from point values `[g][var]` by the limiter quadrature; mode 0 of `out`
    /// is left untouched.
    pub fn recover_moments(&self, values: &[f64], nvars: usize, out: &mut [f64]) {
        let np = self.degree + 1;
        let ng = self.rule.len();
        for v in 0..nvars {
            for n in 1..np {
                out[v * np + n] = (0..ng)
                    .map(|g| self.weighted[g * np + n] * values[g * nvars + v])
                    .sum();
            }
        }
    }

    /// Moment recovery through the general system `A X = B`, with `A` the quadrature mass
    /// matrix of the basis and `B` the projected point values. Agrees with
    /// [`Limiter::recover_moments`] for the orthonormal basis.
    pub fn recover_moments_general(&self, values: &[f64], nvars: usize, out: &mut [f64]) -> Result<()> {
        let np = self.degree + 1;
        let table = self.basis.table(&self.rule.points);
        let a = nalgebra::DMatrix::from_fn(np, np, |p, q| {
            self.rule
                .iter()
                .enumerate()
                .map(|(g, (_, w))| w * table[g * np + p] * table[g * np + q])
                .sum::<f64>()
        });
        let lu = a.lu();
        for v in 0..nvars {
            let b = nalgebra::DVector::from_fn(np, |p, _| {
                self.rule
                    .iter()
                    .enumerate()
                    .map(|(g, (_, w))| w * table[g * np + p] * values[g * nvars + v])
                    .sum::<f64>()
            });
            let x = lu
                .solve(&b)
                .ok_or_else(|| Error::Internal("singular moment system".into()))?;
            for n in 1..np {
                out[v * np + n] = x[n];
            }
        }
        Ok(())
    }

    /// Limited coefficients of cell `j`, reading neighbours through `fetch(offset, buf)`.
    pub(crate) fn limit_cell_with(
        &mut self,
        model: &dyn FluxModel,
        center: &[f64],
        h: f64,
        fetch: &mut dyn FnMut(isize, &mut [f64]) -> Result<f64>,
        out: &mut [f64],
    ) -> Result<()> {
        let np = self.degree + 1;
        let m = center.len() / np;
        let mut means: Means = [[0.0; MAX_VARS]; 3];
        let mut buf = vec![0.0; center.len()];
        for (slot, offset) in [(0usize, -1isize), (2, 1)] {
            fetch(offset, &mut buf)?;
            for v in 0..m {
                means[slot][v] = buf[v * np] * PSI0;
            }
        }
        for v in 0..m {
            means[1][v] = center[v * np] * PSI0;
        }
        let mut values = vec![0.0; self.rule.len() * m];
        self.point_values(model, Axis::X, center, h, &means, fetch, &mut values)?;
        out.copy_from_slice(center);
        self.recover_moments(&values, m, out);
        Ok(())
    }

    /// Limit cell `j` of `snapshot` (whether or not it is flagged) and return its new
    /// coefficients.
    pub fn limit_cell(
        &mut self,
        snapshot: &DGSolution1D,
        model: &dyn FluxModel,
        bc: &BoundarySpec1D,
        j: usize,
        t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.limit_cell_traced(snapshot, model, bc, j, t)?.0)
    }

    /// [`Limiter::limit_cell`], also returning the offsets (relative to `j`) of every
    /// neighbour read, in order.
    pub fn limit_cell_traced(
        &mut self,
        snapshot: &DGSolution1D,
        model: &dyn FluxModel,
        bc: &BoundarySpec1D,
        j: usize,
        t: f64,
    ) -> Result<(Vec<f64>, Vec<isize>)> {
        let mut out = vec![0.0; snapshot.cell_stride()];
        let mut reads = Vec::new();
        let mut fetch = |o: isize, buf: &mut [f64]| {
            reads.push(o);
            cell_1d(snapshot, model, bc, j as isize + o, t, buf)
        };
        self.limit_cell_with(model, snapshot.cell(j), snapshot.mesh.width(j), &mut fetch, &mut out)?;
        Ok((out, reads))
    }

    /// Detect troubled cells, limit them and apply the positivity fix when configured.
    pub fn apply_1d(
        &mut self,
        sol: &mut DGSolution1D,
        model: &dyn FluxModel,
        bc: &BoundarySpec1D,
        t: f64,
    ) -> Result<LimitReport> {
        let mask = kxrcf_detect(sol, model, bc, t, self.config.threshold)?;
        self.apply_mask_1d(sol, model, bc, t, &mask)
    }

    /// Limit the cells flagged in `mask`.
    pub fn apply_mask_1d(
        &mut self,
        sol: &mut DGSolution1D,
        model: &dyn FluxModel,
        bc: &BoundarySpec1D,
        t: f64,
        mask: &[bool],
    ) -> Result<LimitReport> {
        let mut report = LimitReport::default();
        if mask.iter().any(|&f| f) {
            let snapshot = sol.clone();
            for (j, _) in mask.iter().enumerate().filter(|(_, &f)| f) {
                let new = self.limit_cell(&snapshot, model, bc, j, t)?;
                sol.cell_mut(j).copy_from_slice(&new);
                report.troubled += 1;
            }
        }
        if self.config.positivity && model.is_euler() {
            report.positivity_scaled = positivity_fix_1d(sol, POSITIVITY_EPS)?;
        }
        Ok(report)
    }

    /// Dimension-by-dimension limiting of one 2D cell of `snapshot`.
    ///
    /// Along every quadrature line of the troubled cell the DG polynomial restricted to that
    /// line is treated as 1D data; the two directional point-value sets are averaged when the
    /// cell is flagged in both directions.
    #[allow(clippy::too_many_arguments)]
    pub fn limit_cell_2d(
        &mut self,
        snapshot: &DGSolution2D,
        model: &dyn FluxModel,
        bc: &BoundarySpec2D,
        i: usize,
        j: usize,
        sweep_x: bool,
        sweep_y: bool,
        t: f64,
    ) -> Result<Vec<f64>> {
        let n = self.degree;
        let np = n + 1;
        let np2 = np * np;
        let m = snapshot.nvars();
        let ng = self.rule.len();
        let reach = match self.config.variant {
            LimiterVariant::Cswen => 1,
            LimiterVariant::Weno => n as isize,
        };
        let gtable = self.basis.table(&self.rule.points);
        let mut total = vec![0.0; ng * ng * m];
        let mut sweeps = 0.0;
        let mut block = vec![0.0; m * np2];
        let center = snapshot.cell(i, j);
        for axis in [Axis::X, Axis::Y] {
            let active = match axis {
                Axis::X => sweep_x,
                Axis::Y => sweep_y,
            };
            if !active {
                continue;
            }
            sweeps += 1.0;
            // lines[offset][g_transverse][var][mode]
            let span = (2 * reach + 1) as usize;
            let mut lines = vec![0.0; span * ng * m * np];
            let mut widths = vec![0.0; span];
            let mut means: Means = [[0.0; MAX_VARS]; 3];
            for o in -reach..=reach {
                let (ci, cj) = match axis {
                    Axis::X => (i as isize + o, j as isize),
                    Axis::Y => (i as isize, j as isize + o),
                };
                let (hx, hy) = cell_2d(snapshot, model, bc, ci, cj, t, &mut block)?;
                let slot = (o + reach) as usize;
                widths[slot] = match axis {
                    Axis::X => hx,
                    Axis::Y => hy,
                };
                if o.abs() <= 1 {
                    for v in 0..m {
                        means[(o + 1) as usize][v] = 0.5 * block[v * np2];
                    }
                }
                for g in 0..ng {
                    let phi = &gtable[g * np..(g + 1) * np];
                    for v in 0..m {
                        let bv = &block[v * np2..(v + 1) * np2];
                        for k in 0..np {
                            // collapse the transverse direction at ordinate g
                            let s: f64 = match axis {
                                Axis::X => (0..np).map(|b| bv[b * np + k] * phi[b]).sum(),
                                Axis::Y => (0..np).map(|a| bv[k * np + a] * phi[a]).sum(),
                            };
                            lines[((slot * ng + g) * m + v) * np + k] = s;
                        }
                    }
                }
            }
            let h = widths[reach as usize];
            let mut values = vec![0.0; ng * m];
            let line_len = m * np;
            for g in 0..ng {
                let line = |o: isize| {
                    let slot = (o + reach) as usize;
                    &lines[(slot * ng + g) * line_len..(slot * ng + g + 1) * line_len]
                };
                let center_line = line(0).to_vec();
                let mut fetch = |o: isize, buf: &mut [f64]| -> Result<f64> {
                    if o.abs() > reach {
                        return Err(Error::Internal("stencil wider than gathered".into()));
                    }
                    buf.copy_from_slice(line(o));
                    Ok(widths[(o + reach) as usize])
                };
                self.point_values(model, axis, &center_line, h, &means, &mut fetch, &mut values)?;
                for gp in 0..ng {
                    let (gx, gy) = match axis {
                        Axis::X => (gp, g),
                        Axis::Y => (g, gp),
                    };
                    for v in 0..m {
                        total[(gy * ng + gx) * m + v] += values[gp * m + v];
                    }
                }
            }
        }
        let mut out = center.to_vec();
        if sweeps == 0.0 {
            return Ok(out);
        }
        for v in 0..m {
            for b in 0..np {
                for a in 0..np {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let mut s = 0.0;
                    for gy in 0..ng {
                        for gx in 0..ng {
                            s += self.weighted[gx * np + a]
                                * self.weighted[gy * np + b]
                                * total[(gy * ng + gx) * m + v];
                        }
                    }
                    out[v * np2 + b * np + a] = s / sweeps;
                }
            }
        }
        Ok(out)
    }

    pub fn apply_2d(
        &mut self,
        sol: &mut DGSolution2D,
        model: &dyn FluxModel,
        bc: &BoundarySpec2D,
        t: f64,
    ) -> Result<LimitReport> {
        let mask = kxrcf_detect_2d(sol, model, bc, t, self.config.threshold)?;
        self.apply_mask_2d(sol, model, bc, t, &mask)
    }

    pub fn apply_mask_2d(
        &mut self,
        sol: &mut DGSolution2D,
        model: &dyn FluxModel,
        bc: &BoundarySpec2D,
        t: f64,
        mask: &Mask2D,
    ) -> Result<LimitReport> {
        let mut report = LimitReport::default();
        let nx = sol.mesh.nx();
        if mask.count() > 0 {
            let snapshot = sol.clone();
            for cell in 0..mask.x.len() {
                if !mask.any(cell) {
                    continue;
                }
                let (i, j) = (cell % nx, cell / nx);
                let new =
                    self.limit_cell_2d(&snapshot, model, bc, i, j, mask.x[cell], mask.y[cell], t)?;
                sol.cell_mut(i, j).copy_from_slice(&new);
                report.troubled += 1;
            }
        }
        if self.config.positivity && model.is_euler() {
            report.positivity_scaled = positivity_fix_2d(sol, POSITIVITY_EPS)?;
        }
        Ok(report)
    }
}
