//! Error norms and convergence tables.

use crate::dg::{DGSolution1D, DGSolution2D};
use crate::error::{Error, Result};
use crate::quadrature::gauss_rule;

use super::problems::{Exact1D, Exact2D, ProblemKind, ProblemSpec, Reference1D};
use super::reference::ReferenceData;
use super::run::{run_problem, Cells, RunConfig, RunResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    /// `sum_k int_{I_k} |u_h - u| dx` divided by the domain measure.
    pub l1: f64,
    pub linf: f64,
}

/// Norms of variable `var` against `exact` at time `t`, with `N+3` Gauss points per cell.
pub fn error_norms_1d(sol: &DGSolution1D, exact: &Exact1D, t: f64, var: usize) -> Result<ErrorNorms> {
    let rule = gauss_rule(sol.degree() + 3)?;
    let nv = sol.nvars();
    let (mut uh, mut ue) = (vec![0.0; nv], vec![0.0; nv]);
    let (mut l1, mut linf) = (0.0, 0.0f64);
    for k in 0..sol.num_cells() {
        let (a, b) = sol.mesh.cell(k);
        let h = b - a;
        for (r, w) in rule.iter() {
            sol.evaluate(k, r, &mut uh);
            exact(0.5 * (a + b) + 0.5 * h * r, t, &mut ue)?;
            let e = (uh[var] - ue[var]).abs();
            l1 += 0.5 * h * w * e;
            linf = linf.max(e);
        }
    }
    Ok(ErrorNorms { l1: l1 / sol.mesh.length(), linf })
}

pub fn error_norms_2d(sol: &DGSolution2D, exact: &Exact2D, t: f64, var: usize) -> Result<ErrorNorms> {
    let rule = gauss_rule(sol.degree() + 3)?;
    let nv = sol.nvars();
    let (mut uh, mut ue) = (vec![0.0; nv], vec![0.0; nv]);
    let (mut l1, mut linf) = (0.0, 0.0f64);
    for j in 0..sol.mesh.ny() {
        let (ya, yb) = sol.mesh.y.cell(j);
        for i in 0..sol.mesh.nx() {
            let (xa, xb) = sol.mesh.x.cell(i);
            let jac = 0.25 * (xb - xa) * (yb - ya);
            for (s, ws) in rule.iter() {
                let y = 0.5 * (ya + yb) + 0.5 * (yb - ya) * s;
                for (r, wr) in rule.iter() {
                    let x = 0.5 * (xa + xb) + 0.5 * (xb - xa) * r;
                    sol.evaluate(i, j, r, s, &mut uh);
                    exact(x, y, t, &mut ue)?;
                    let e = (uh[var] - ue[var]).abs();
                    l1 += jac * wr * ws * e;
                    linf = linf.max(e);
                }
            }
        }
    }
    Ok(ErrorNorms { l1: l1 / (sol.mesh.x.length() * sol.mesh.y.length()), linf })
}

/// Norms against piecewise-constant reference data, sampled at the reference cell centres.
pub fn error_vs_reference_1d(sol: &DGSolution1D, reference: &ReferenceData, var: usize) -> Result<ErrorNorms> {
    let mut uh = vec![0.0; sol.nvars()];
    let (mut l1, mut linf) = (0.0, 0.0f64);
    let mut k = 0;
    for (c, (a, b)) in reference.cells().enumerate() {
        let x = 0.5 * (a + b);
        while k + 1 < sol.num_cells() && sol.mesh.cell(k).1 < x {
            k += 1;
        }
        let (xa, xb) = sol.mesh.cell(k);
        let r = ((2.0 * x - xa - xb) / (xb - xa)).clamp(-1.0, 1.0);
        sol.evaluate(k, r, &mut uh);
        let e = (uh[var] - reference.value(c, var)).abs();
        if !e.is_finite() {
            return Err(Error::Oracle(format!("non-finite error at x = {x}")));
        }
        l1 += (b - a) * e;
        linf = linf.max(e);
    }
    let length = reference.nodes[reference.num_cells()] - reference.nodes[0];
    Ok(ErrorNorms { l1: l1 / length, linf })
}

/// First-variable errors of a finished run against the exact solution when there is one,
/// otherwise against `reference`; also names which of the two was used.
pub fn measure_errors(
    spec: &ProblemSpec,
    result: &RunResult,
    reference: Option<&ReferenceData>,
) -> Result<Option<(ErrorNorms, &'static str)>> {
    match &spec.kind {
        ProblemKind::OneD(p) => {
            let sol = result.sim.as_1d().ok_or_else(|| Error::Internal("expected a 1D run".into()))?;
            match (&p.reference, reference) {
                (Reference1D::Exact(f), _) => Ok(Some((error_norms_1d(sol, f, result.t_end, 0)?, "exact"))),
                (_, Some(data)) => Ok(Some((error_vs_reference_1d(sol, data, 0)?, "reference"))),
                _ => Ok(None),
            }
        }
        ProblemKind::TwoD(p) => {
            let sol = result.sim.as_2d().ok_or_else(|| Error::Internal("expected a 2D run".into()))?;
            match &p.exact {
                Some(f) => Ok(Some((error_norms_2d(sol, f, result.t_end, 0)?, "exact"))),
                None => Ok(None),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub cells: Cells,
    pub l1: f64,
    pub l1_order: Option<f64>,
    pub linf: f64,
    pub linf_order: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub problem: String,
    pub degree: usize,
    pub limiter: String,
    pub mesh: String,
    pub seed: u64,
    pub cfl: f64,
    pub rows: Vec<ErrorRow>,
}

fn order(coarse: f64, fine: f64, ratio: f64) -> f64 {
    (coarse / fine).ln() / ratio.ln()
}

impl ErrorReport {
    /// Append a row; orders are computed against the previous row's resolution.
    pub fn push(&mut self, cells: Cells, norms: ErrorNorms) {
        let (l1_order, linf_order) = match self.rows.last() {
            Some(prev) => {
                let ratio = cells.nx as f64 / prev.cells.nx as f64;
                (Some(order(prev.l1, norms.l1, ratio)), Some(order(prev.linf, norms.linf, ratio)))
            }
            None => (None, None),
        };
        self.rows.push(ErrorRow {
            cells,
            l1: norms.l1,
            l1_order,
            linf: norms.linf,
            linf_order,
        });
    }

    pub fn finest_l1_order(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.l1_order)
    }
}

/// Default refinement ladder of the convergence tables.
pub fn default_ladder(dimension: usize) -> Vec<usize> {
    if dimension == 1 {
        vec![20, 40, 80, 160, 320]
    } else {
        vec![20, 40, 80, 160]
    }
}

/// Errors of `cfg` at each resolution of `ladder` (square meshes in 2D); density for Euler.
pub fn convergence_study(spec: &ProblemSpec, cfg: &RunConfig, ladder: &[usize]) -> Result<ErrorReport> {
    let mut report = ErrorReport {
        problem: spec.id.to_string(),
        degree: cfg.degree,
        limiter: cfg.limiter_name().to_string(),
        mesh: cfg.mesh.as_str().to_string(),
        seed: cfg.seed,
        cfl: cfg.cfl(),
        rows: Vec::new(),
    };
    for &k in ladder {
        let cells = Cells::square(k);
        let c = RunConfig { cells: Some(cells), ..cfg.clone() };
        let result = run_problem(spec, &c, None)?;
        let t = result.t_end;
        let norms = match (&spec.kind, &result.sim) {
            (ProblemKind::OneD(p), sim) => match &p.reference {
                Reference1D::Exact(f) => error_norms_1d(sim.as_1d().expect("1D"), f, t, 0)?,
                _ => return Err(no_oracle(spec)),
            },
            (ProblemKind::TwoD(p), sim) => match &p.exact {
                Some(f) => error_norms_2d(sim.as_2d().expect("2D"), f, t, 0)?,
                None => return Err(no_oracle(spec)),
            },
        };
        report.push(cells, norms);
    }
    Ok(report)
}

fn no_oracle(spec: &ProblemSpec) -> Error {
    Error::Config(format!("problem '{}' has no exact solution for a convergence study", spec.id))
}
