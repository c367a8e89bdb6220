//! Third-order SSP Runge-Kutta time stepping with a limiter hook after every stage.

use std::sync::Arc;

use crate::basis::{tensor_grid_values, BasisSet};
use crate::dg::{BoundarySpec1D, BoundarySpec2D, DGSolution1D, DGSolution2D, Dg1D, Dg2D};
use crate::error::{Error, Result};
use crate::limiter::{LimitReport, Limiter, LimiterConfig};
use crate::physics::{Axis, FluxModel, MAX_VARS};
use crate::quadrature::gauss_rule;

/// Stage coefficients `(a, b, c)`: `u_stage = a u^n + b (u_prev + c dt L(u_prev))`.
pub const SSP_RK3: [[f64; 3]; 3] = [[0.0, 1.0, 1.0], [0.75, 0.25, 1.0], [1.0 / 3.0, 2.0 / 3.0, 1.0]];

/// Stage end times as fractions of `dt`.
const STAGE_TIMES: [f64; 3] = [1.0, 0.5, 1.0];
/// Times, as fractions of `dt`, at which each stage evaluates its right-hand side.
const RHS_TIMES: [f64; 3] = [0.0, 1.0, 0.5];

/// Default CFL number by polynomial degree.
pub fn default_cfl(degree: usize) -> f64 {
    match degree {
        0 | 1 => 0.3,
        2 => 0.18,
        _ => 0.1,
    }
}

/// Anything with a flat coefficient vector.
pub trait StateVector: Clone {
    fn data(&self) -> &[f64];
    fn data_mut(&mut self) -> &mut [f64];
}

impl StateVector for Vec<f64> {
    fn data(&self) -> &[f64] {
        self
    }
    fn data_mut(&mut self) -> &mut [f64] {
        self
    }
}

impl StateVector for DGSolution1D {
    fn data(&self) -> &[f64] {
        self.coeffs()
    }
    fn data_mut(&mut self) -> &mut [f64] {
        self.coeffs_mut()
    }
}

impl StateVector for DGSolution2D {
    fn data(&self) -> &[f64] {
        self.coeffs()
    }
    fn data_mut(&mut self) -> &mut [f64] {
        self.coeffs_mut()
    }
}

/// One SSP-RK3 step from `t` to `t + dt`. `rhs(u, t, out)` evaluates `L(u)`; `hook(u, t)`
/// runs after every stage with the time the stage represents.
pub fn ssp_rk3_step<S: StateVector>(
    u: &mut S,
    t: f64,
    dt: f64,
    rhs: &mut dyn FnMut(&S, f64, &mut [f64]) -> Result<()>,
    hook: &mut dyn FnMut(&mut S, f64) -> Result<()>,
) -> Result<()> {
    if !(dt > 0.0) {
        return Err(Error::invalid(format!("time step must be positive, got {dt}")));
    }
    let start = u.data().to_vec();
    let mut stage = u.clone();
    let mut l = vec![0.0; start.len()];
    for (s, [_, b, c]) in SSP_RK3.iter().enumerate() {
        rhs(&stage, t + RHS_TIMES[s] * dt, &mut l)?;
        // a = 1 - b; this form leaves a fixed point bitwise unchanged
        for ((x, u0), li) in stage.data_mut().iter_mut().zip(&start).zip(&l) {
            *x = u0 + b * ((*x - u0) + c * dt * li);
        }
        hook(&mut stage, t + STAGE_TIMES[s] * dt)?;
    }
    *u = stage;
    Ok(())
}

/// `CFL min_k h_k / ((2N+1) alpha_k)` with `alpha_k` the largest wave speed at the cell's
/// quadrature points and end points. Returns `max_dt` when every speed is zero.
pub fn compute_dt_1d(sol: &DGSolution1D, model: &dyn FluxModel, cfl: f64, max_dt: f64) -> Result<f64> {
    if !(cfl > 0.0) {
        return Err(Error::invalid("CFL must be positive"));
    }
    let degree = sol.degree();
    let basis = BasisSet::new(degree);
    let mut pts = gauss_rule(degree + 2)?.points;
    pts.extend([-1.0, 1.0]);
    let table = basis.table(&pts);
    let np = degree + 1;
    let m = sol.nvars();
    let mut u = [0.0; MAX_VARS];
    let mut rate = 0.0f64;
    for k in 0..sol.num_cells() {
        let c = sol.cell(k);
        let mut alpha = model.speed_floor();
        for q in 0..pts.len() {
            for v in 0..m {
                u[v] = (0..np).map(|n| c[v * np + n] * table[q * np + n]).sum();
            }
            alpha = alpha.max(model.max_speed(&u[..m], Axis::X));
        }
        rate = rate.max(alpha / sol.mesh.width(k));
    }
    if !rate.is_finite() {
        return Err(Error::state(0, "non-finite wave speed"));
    }
    if rate == 0.0 {
        return Ok(max_dt);
    }
    Ok((cfl / ((2 * degree + 1) as f64 * rate)).min(max_dt))
}

/// 2D analogue: `CFL / ((2N+1) max_k (alpha_x/h_x + alpha_y/h_y))`.
pub fn compute_dt_2d(sol: &DGSolution2D, model: &dyn FluxModel, cfl: f64, max_dt: f64) -> Result<f64> {
    if !(cfl > 0.0) {
        return Err(Error::invalid("CFL must be positive"));
    }
    let degree = sol.degree();
    let basis = BasisSet::new(degree);
    let mut pts = gauss_rule(degree + 2)?.points;
    pts.extend([-1.0, 1.0]);
    let table = basis.table(&pts);
    let np = degree + 1;
    let np2 = np * np;
    let m = sol.nvars();
    let npts = pts.len();
    let mut tmp = vec![0.0; np * npts];
    let mut vals = vec![0.0; m * npts * npts];
    let mut u = [0.0; MAX_VARS];
    let mut rate = 0.0f64;
    for j in 0..sol.mesh.ny() {
        for i in 0..sol.mesh.nx() {
            let c = sol.cell(i, j);
            for v in 0..m {
                let out = &mut vals[v * npts * npts..(v + 1) * npts * npts];
                tensor_grid_values(&c[v * np2..(v + 1) * np2], np, &table, &mut tmp, out);
            }
            let (mut ax, mut ay) = (model.speed_floor(), model.speed_floor());
            for q in 0..npts * npts {
                for v in 0..m {
                    u[v] = vals[v * npts * npts + q];
                }
                ax = ax.max(model.max_speed(&u[..m], Axis::X));
                ay = ay.max(model.max_speed(&u[..m], Axis::Y));
            }
            rate = rate.max(ax / sol.mesh.x.width(i) + ay / sol.mesh.y.width(j));
        }
    }
    if !rate.is_finite() {
        return Err(Error::state(0, "non-finite wave speed"));
    }
    if rate == 0.0 {
        return Ok(max_dt);
    }
    Ok((cfl / ((2 * degree + 1) as f64 * rate)).min(max_dt))
}

/// Accumulated limiter statistics of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunStats {
    pub steps: usize,
    pub limiter_calls: usize,
    pub troubled_total: usize,
    pub troubled_max: usize,
    pub positivity_total: usize,
}

impl RunStats {
    fn record(&mut self, r: LimitReport) {
        self.limiter_calls += 1;
        self.troubled_total += r.troubled;
        self.troubled_max = self.troubled_max.max(r.troubled);
        self.positivity_total += r.positivity_scaled;
    }

    /// Mean number of troubled cells per limiter call.
    pub fn mean_troubled(&self) -> f64 {
        if self.limiter_calls == 0 {
            0.0
        } else {
            self.troubled_total as f64 / self.limiter_calls as f64
        }
    }
}

fn with_step_context(e: Error, time: f64, step: usize) -> Error {
    match e {
        Error::Step { .. } => e,
        e => Error::Step {
            time,
            step,
            source: Box::new(e),
        },
    }
}

/// Time-stepping driver for a 1D problem.
pub struct Solver1D {
    pub sol: DGSolution1D,
    op: Dg1D,
    limiter: Option<Limiter>,
    pub time: f64,
    pub cfl: f64,
    pub max_dt: f64,
    pub stats: RunStats,
}

impl Solver1D {
    /// The limiter (when given) is applied once to the initial data.
    pub fn new(
        sol: DGSolution1D,
        model: Arc<dyn FluxModel>,
        bc: BoundarySpec1D,
        limiter: Option<LimiterConfig>,
        cfl: f64,
        t0: f64,
    ) -> Result<Self> {
        if model.num_vars() != sol.nvars() {
            return Err(Error::invalid("model and solution disagree on the number of variables"));
        }
        let op = Dg1D::new(model, bc, sol.degree())?;
        let limiter = limiter.map(|c| Limiter::new(sol.degree(), c)).transpose()?;
        let mut s = Self {
            sol,
            op,
            limiter,
            time: t0,
            cfl,
            max_dt: f64::INFINITY,
            stats: RunStats::default(),
        };
        if let Some(lim) = s.limiter.as_mut() {
            let r = lim.apply_1d(&mut s.sol, s.op.model().as_ref(), s.op.boundary(), t0)?;
            s.stats.record(r);
        }
        Ok(s)
    }

    pub fn model(&self) -> &Arc<dyn FluxModel> {
        self.op.model()
    }

    pub fn compute_dt(&self) -> Result<f64> {
        compute_dt_1d(&self.sol, self.op.model().as_ref(), self.cfl, self.max_dt)
    }

    /// Advance one step, clipped so that the run lands exactly on `t_end`.
    pub fn step(&mut self, t_end: f64) -> Result<f64> {
        let step = self.stats.steps;
        let t = self.time;
        let mut dt = self
            .compute_dt()
            .map_err(|e| with_step_context(e, t, step))?
            .min(t_end - t);
        if !dt.is_finite() {
            dt = t_end - t;
        }
        let model = Arc::clone(self.op.model());
        let bc = self.op.boundary().clone();
        let op = &mut self.op;
        let limiter = &mut self.limiter;
        let stats = &mut self.stats;
        let mut rhs = |u: &DGSolution1D, t: f64, out: &mut [f64]| op.compute_rhs(u, t, out).map(|_| ());
        let mut hook = |u: &mut DGSolution1D, t: f64| -> Result<()> {
            if let Some(lim) = limiter.as_mut() {
                let r = lim.apply_1d(u, model.as_ref(), &bc, t)?;
                stats.record(r);
            }
            Ok(())
        };
        ssp_rk3_step(&mut self.sol, t, dt, &mut rhs, &mut hook)
            .map_err(|e| with_step_context(e, t, step))?;
        self.stats.steps += 1;
        self.time = if dt == t_end - t { t_end } else { t + dt };
        Ok(dt)
    }

    /// Run to `t_end`; `observer` sees the solver after every step.
    pub fn run(&mut self, t_end: f64, mut observer: Option<&mut dyn FnMut(&Solver1D)>) -> Result<()> {
        while self.time < t_end {
            self.step(t_end)?;
            if let Some(obs) = observer.as_mut() {
                obs(self);
            }
        }
        Ok(())
    }
}

/// Time-stepping driver for a 2D problem.
pub struct Solver2D {
    pub sol: DGSolution2D,
    op: Dg2D,
    limiter: Option<Limiter>,
    pub time: f64,
    pub cfl: f64,
    pub max_dt: f64,
    pub stats: RunStats,
}

impl Solver2D {
    pub fn new(
        sol: DGSolution2D,
        model: Arc<dyn FluxModel>,
        bc: BoundarySpec2D,
        limiter: Option<LimiterConfig>,
        cfl: f64,
        t0: f64,
    ) -> Result<Self> {
        if model.num_vars() != sol.nvars() {
            return Err(Error::invalid("model and solution disagree on the number of variables"));
        }
        let op = Dg2D::new(model, bc, sol.degree())?;
        let limiter = limiter.map(|c| Limiter::new(sol.degree(), c)).transpose()?;
        let mut s = Self {
            sol,
            op,
            limiter,
            time: t0,
            cfl,
            max_dt: f64::INFINITY,
            stats: RunStats::default(),
        };
        if let Some(lim) = s.limiter.as_mut() {
            let r = lim.apply_2d(&mut s.sol, s.op.model().as_ref(), s.op.boundary(), t0)?;
            s.stats.record(r);
        }
        Ok(s)
    }

    pub fn model(&self) -> &Arc<dyn FluxModel> {
        self.op.model()
    }

    pub fn compute_dt(&self) -> Result<f64> {
        compute_dt_2d(&self.sol, self.op.model().as_ref(), self.cfl, self.max_dt)
    }

    pub fn step(&mut self, t_end: f64) -> Result<f64> {
        let step = self.stats.steps;
        let t = self.time;
        let mut dt = self
            .compute_dt()
            .map_err(|e| with_step_context(e, t, step))?
            .min(t_end - t);
        if !dt.is_finite() {
            dt = t_end - t;
        }
        let model = Arc::clone(self.op.model());
        let bc = self.op.boundary().clone();
        let op = &mut self.op;
        let limiter = &mut self.limiter;
        let stats = &mut self.stats;
        let mut rhs = |u: &DGSolution2D, t: f64, out: &mut [f64]| op.compute_rhs(u, t, out).map(|_| ());
        let mut hook = |u: &mut DGSolution2D, t: f64| -> Result<()> {
            if let Some(lim) = limiter.as_mut() {
                let r = lim.apply_2d(u, model.as_ref(), &bc, t)?;
                stats.record(r);
            }
            Ok(())
        };
        ssp_rk3_step(&mut self.sol, t, dt, &mut rhs, &mut hook)
            .map_err(|e| with_step_context(e, t, step))?;
        self.stats.steps += 1;
        self.time = if dt == t_end - t { t_end } else { t + dt };
        Ok(dt)
    }

    pub fn run(&mut self, t_end: f64, mut observer: Option<&mut dyn FnMut(&Solver2D)>) -> Result<()> {
        while self.time < t_end {
            self.step(t_end)?;
            if let Some(obs) = observer.as_mut() {
                obs(self);
            }
        }
        Ok(())
    }
}
