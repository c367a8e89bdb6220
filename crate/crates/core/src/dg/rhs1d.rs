use std::sync::Arc;

use super::boundary::{ghost_trace, BoundarySpec1D};
use super::lax_friedrichs;
use super::solution::DGSolution1D;
use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::physics::{Axis, FluxModel, MAX_VARS};
use crate::quadrature::gauss_rule;

/// Semi-discrete DG operator in 1D.
///
/// `du_n/dt = (2/h) [ sum_q w_q f(u(r_q)) psi_n'(r_q) - (F_R psi_n(1) - F_L psi_n(-1)) ]`
/// with a global Lax-Friedrichs flux and an `(N+2)`-point Gauss volume rule.
pub struct Dg1D {
    model: Arc<dyn FluxModel>,
    bc: BoundarySpec1D,
    degree: usize,
    // [q][n] values and weighted derivatives at the volume points
    vol_values: Vec<f64>,
    vol_grad: Vec<f64>,
    nq: usize,
    left_values: Vec<f64>,
    right_values: Vec<f64>,
    // scratch: traces [cell][var]
    trace_l: Vec<f64>,
    trace_r: Vec<f64>,
    face_l: Vec<f64>,
    face_r: Vec<f64>,
    fluxes: Vec<f64>,
}

impl Dg1D {
    pub fn new(model: Arc<dyn FluxModel>, bc: BoundarySpec1D, degree: usize) -> Result<Self> {
        bc.validate()?;
        let basis = BasisSet::new(degree);
        let rule = gauss_rule(degree + 2)?;
        let np = degree + 1;
        let vol_values = basis.table(&rule.points);
        let mut vol_grad = basis.derivative_table(&rule.points);
        for (q, w) in rule.weights.iter().enumerate() {
            for n in 0..np {
                vol_grad[q * np + n] *= w;
            }
        }
        Ok(Self {
            model,
            bc,
            degree,
            vol_values,
            vol_grad,
            nq: rule.len(),
            left_values: basis.values(-1.0),
            right_values: basis.values(1.0),
            trace_l: Vec::new(),
            trace_r: Vec::new(),
            face_l: Vec::new(),
            face_r: Vec::new(),
            fluxes: Vec::new(),
        })
    }

    pub fn model(&self) -> &Arc<dyn FluxModel> {
        &self.model
    }

    pub fn boundary(&self) -> &BoundarySpec1D {
        &self.bc
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Largest wave speed over every interface trace (including boundary ghosts).
    pub fn max_wave_speed(&mut self, sol: &DGSolution1D, t: f64) -> Result<f64> {
        self.traces(sol, t)?;
        self.faces(sol, t);
        Ok(self.alpha())
    }

    /// Evaluate the right-hand side into `rhs` (same layout as the coefficients).
    /// Returns the Lax-Friedrichs speed used.
    pub fn compute_rhs(&mut self, sol: &DGSolution1D, t: f64, rhs: &mut [f64]) -> Result<f64> {
        if sol.degree() != self.degree {
            return Err(Error::invalid("solution degree does not match the operator"));
        }
        let k_cells = sol.num_cells();
        let m = sol.nvars();
        let np = self.degree + 1;
        self.traces(sol, t)?;
        self.faces(sol, t);
        let alpha = self.alpha();

        // interface fluxes, index i = node i
        self.fluxes.resize((k_cells + 1) * m, 0.0);
        let model = self.model.as_ref();
        for i in 0..=k_cells {
            lax_friedrichs(
                model,
                &self.face_l[i * m..(i + 1) * m],
                &self.face_r[i * m..(i + 1) * m],
                Axis::X,
                alpha,
                &mut self.fluxes[i * m..(i + 1) * m],
            );
        }

        let mut u = [0.0; MAX_VARS];
        let mut f = [0.0; MAX_VARS];
        for k in 0..k_cells {
            let c = sol.cell(k);
            let out = &mut rhs[k * m * np..(k + 1) * m * np];
            out.iter_mut().for_each(|v| *v = 0.0);
            for q in 0..self.nq {
                let phi = &self.vol_values[q * np..(q + 1) * np];
                for v in 0..m {
                    u[v] = (0..np).map(|n| c[v * np + n] * phi[n]).sum();
                }
                if let Err(msg) = model.check_state(&u[..m]) {
                    return Err(Error::state(k, msg));
                }
                model.flux(&u[..m], Axis::X, &mut f[..m]);
                let g = &self.vol_grad[q * np..(q + 1) * np];
                for v in 0..m {
                    for n in 0..np {
                        out[v * np + n] += f[v] * g[n];
                    }
                }
            }
            let scale = 2.0 / sol.mesh.width(k);
            let fl = &self.fluxes[k * m..(k + 1) * m];
            let fr = &self.fluxes[(k + 1) * m..(k + 2) * m];
            for v in 0..m {
                for n in 0..np {
                    let s = fr[v] * self.right_values[n] - fl[v] * self.left_values[n];
                    out[v * np + n] = scale * (out[v * np + n] - s);
                }
            }
        }
        Ok(alpha)
    }

    fn traces(&mut self, sol: &DGSolution1D, _t: f64) -> Result<()> {
        let k_cells = sol.num_cells();
        let m = sol.nvars();
        let np = self.degree + 1;
        self.trace_l.resize(k_cells * m, 0.0);
        self.trace_r.resize(k_cells * m, 0.0);
        for k in 0..k_cells {
            let c = sol.cell(k);
            for v in 0..m {
                let coef = &c[v * np..(v + 1) * np];
                self.trace_l[k * m + v] = dot(coef, &self.left_values);
                self.trace_r[k * m + v] = dot(coef, &self.right_values);
            }
            for tr in [&self.trace_l[k * m..(k + 1) * m], &self.trace_r[k * m..(k + 1) * m]] {
                if let Err(msg) = self.model.check_state(tr) {
                    return Err(Error::state(k, msg));
                }
            }
        }
        Ok(())
    }

    /// Left/right states at every node, boundary ghosts included.
    fn faces(&mut self, sol: &DGSolution1D, t: f64) {
        let k_cells = sol.num_cells();
        let m = sol.nvars();
        let model = self.model.as_ref();
        self.face_l.resize((k_cells + 1) * m, 0.0);
        self.face_r.resize((k_cells + 1) * m, 0.0);
        self.face_l[m..].copy_from_slice(&self.trace_r);
        self.face_r[..k_cells * m].copy_from_slice(&self.trace_l);
        let x = sol.mesh.x_left();
        let (inner, partner) = (&self.trace_l[..m], &self.trace_r[(k_cells - 1) * m..]);
        ghost_trace(model, &self.bc.left, Axis::X, x, (x, 0.0), t, inner, partner, &mut self.face_l[..m]);
        let x = sol.mesh.x_right();
        let (inner, partner) = (&self.trace_r[(k_cells - 1) * m..], &self.trace_l[..m]);
        let last = &mut self.face_r[k_cells * m..];
        ghost_trace(model, &self.bc.right, Axis::X, x, (x, 0.0), t, inner, partner, last);
    }

    fn alpha(&self) -> f64 {
        let m = self.model.num_vars();
        let model = self.model.as_ref();
        self.face_l
            .chunks_exact(m)
            .chain(self.face_r.chunks_exact(m))
            .map(|u| model.max_speed(u, Axis::X))
            .fold(model.speed_floor(), f64::max)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
