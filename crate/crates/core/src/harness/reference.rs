//! Fine-grid reference solutions for problems without a closed form.

use crate::dg::BoundaryCondition;
use crate::error::{Error, Result};
use crate::limiter::LimiterVariant;
use crate::mesh::build_uniform_1d;
use crate::physics::Axis;

use super::problems::{Problem1D, ProblemKind, ProblemSpec, Reference1D};
use super::run::{run_problem, Cells, MeshKind, RunConfig};

/// Piecewise-constant cell averages on a fine mesh.
#[derive(Debug, Clone)]
pub struct ReferenceData {
    pub label: &'static str,
    pub nodes: Vec<f64>,
    pub nvars: usize,
    values: Vec<f64>,
}

impl ReferenceData {
    pub fn num_cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn cells(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn value(&self, cell: usize, var: usize) -> f64 {
        self.values[cell * self.nvars + var]
    }

    /// Mean of variable `var` over `[a, b]`.
    pub fn average(&self, a: f64, b: f64, var: usize) -> f64 {
        let mut sum = 0.0;
        for (c, (l, r)) in self.cells().enumerate() {
            let overlap = r.min(b) - l.max(a);
            if overlap > 0.0 {
                sum += overlap * self.value(c, var);
            }
        }
        sum / (b - a)
    }
}

const SPEED_SAMPLES: usize = 400;

/// First-order Godunov solution of a scalar law on a uniform mesh, CFL 0.9.
///
/// The flux must be nondecreasing over the data range, where Godunov's flux is the upwind flux.
pub fn godunov_scalar(p: &Problem1D, cells: usize, t_end: f64) -> Result<ReferenceData> {
    if p.model.num_vars() != 1 {
        return Err(Error::Unsupported("Godunov reference for systems".into()));
    }
    let ghost = |bc: &BoundaryCondition| match bc {
        BoundaryCondition::Outflow | BoundaryCondition::Periodic => Ok(()),
        other => Err(Error::Unsupported(format!("Godunov reference with {other:?} boundary"))),
    };
    ghost(&p.bc.left)?;
    ghost(&p.bc.right)?;
    let periodic = p.bc.left.is_periodic();
    let mesh = build_uniform_1d(p.domain.0, p.domain.1, cells)?;
    let h = mesh.width(0);
    // Cell averages of the initial data with a 4-point midpoint rule.
    let mut u: Vec<f64> = (0..cells)
        .map(|k| {
            let (a, _) = mesh.cell(k);
            let mut o = [0.0];
            (0..4)
                .map(|q| {
                    (p.initial)(a + (q as f64 + 0.5) * h / 4.0, &mut o);
                    o[0]
                })
                .sum::<f64>()
                / 4.0
        })
        .collect();
    let model = p.model.as_ref();
    let mut flux = vec![0.0; cells + 1];
    let mut t = 0.0;
    while t < t_end {
        // Wave speeds between data values matter too (f' vanishes at both BL states 0 and 1).
        let lo = u.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut speed = 0.0f64;
        for i in 0..=SPEED_SAMPLES {
            let v = lo + (hi - lo) * i as f64 / SPEED_SAMPLES as f64;
            let a = model.advection_speed(&[v], Axis::X);
            if a < -1e-14 {
                return Err(Error::Unsupported("Godunov reference needs a nondecreasing flux".into()));
            }
            speed = speed.max(a);
        }
        speed *= 1.05;
        let dt = if speed > 0.0 { (0.9 * h / speed).min(t_end - t) } else { t_end - t };
        let mut f = [0.0];
        for (i, fl) in flux.iter_mut().enumerate() {
            let upwind = match i {
                0 if periodic => u[cells - 1],
                0 => u[0],
                i => u[i - 1],
            };
            model.flux(&[upwind], Axis::X, &mut f);
            *fl = f[0];
        }
        for k in 0..cells {
            u[k] -= dt / h * (flux[k + 1] - flux[k]);
        }
        t = if dt == t_end - t { t_end } else { t + dt };
    }
    Ok(ReferenceData {
        label: "reference",
        nodes: mesh.nodes().to_vec(),
        nvars: 1,
        values: u,
    })
}

/// P1 DG with the CSWENO limiter on a uniform mesh of `cells` cells.
pub fn fine_grid_dg(spec: &ProblemSpec, cells: usize, t_end: f64) -> Result<ReferenceData> {
    let cfg = RunConfig {
        degree: 1,
        cells: Some(Cells::square(cells)),
        limiter: Some(LimiterVariant::Cswen),
        characteristic: true,
        mesh: MeshKind::Uniform,
        t_end: Some(t_end),
        ..RunConfig::default()
    };
    let result = run_problem(spec, &cfg, None)?;
    let sol = result.sim.as_1d().ok_or_else(|| Error::Unsupported("2D reference".into()))?;
    let nvars = sol.nvars();
    let values = (0..sol.num_cells()).flat_map(|k| sol.cell_averages(k)).collect();
    Ok(ReferenceData {
        label: "reference",
        nodes: sol.mesh.nodes().to_vec(),
        nvars,
        values,
    })
}

/// Reference data for a 1D problem without an exact solution; `cells` overrides the default size.
pub fn reference_1d(spec: &ProblemSpec, t_end: f64, cells: Option<usize>) -> Result<ReferenceData> {
    let ProblemKind::OneD(p) = &spec.kind else {
        return Err(Error::Unsupported(format!("no reference solution for '{}'", spec.id)));
    };
    match p.reference {
        Reference1D::Exact(_) => Err(Error::Config(format!("'{}' has an exact solution", spec.id))),
        Reference1D::Godunov { cells: c } => godunov_scalar(p, cells.unwrap_or(c), t_end),
        Reference1D::FineGrid { cells: c } => fine_grid_dg(spec, cells.unwrap_or(c), t_end),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::problems::problem;
    use crate::physics::exact::exact_burgers;

    #[test]
    fn godunov_buckley_conserves_until_outflow_and_stays_bounded() {
        let spec = problem("buckley").unwrap();
        let ProblemKind::OneD(p) = &spec.kind else { panic!() };
        let r = godunov_scalar(p, 400, 0.4).unwrap();
        assert_eq!(r.num_cells(), 400);
        let mass: f64 = r.cells().enumerate().map(|(c, (a, b))| (b - a) * r.value(c, 0)).sum();
        // Nothing reaches either boundary by t = 0.4; the initial mass is 1/2.
        assert!((mass - 0.5).abs() < 1e-12);
        for c in 0..r.num_cells() {
            assert!((-1e-14..=1.0 + 1e-14).contains(&r.value(c, 0)));
        }
    }

    #[test]
    fn godunov_converges_on_smooth_burgers() {
        // 0.5 + sin x crosses zero, so shift to keep the flux monotone.
        let mut spec = problem("burgers1d").unwrap();
        let ProblemKind::OneD(p) = &mut spec.kind else { panic!() };
        p.initial = std::sync::Arc::new(|x, o| o[0] = 2.0 + x.sin());
        let err = |k| {
            let r = godunov_scalar(p, k, 0.3).unwrap();
            r.cells()
                .enumerate()
                .map(|(c, (a, b))| {
                    let x = 0.5 * (a + b);
                    // Exact solution of 2 + sin x is 0.5 + sin shifted by a Galilean change.
                    let e = 1.5 + exact_burgers(x - 1.5 * 0.3, 0.3).unwrap();
                    (b - a) * (r.value(c, 0) - e).abs()
                })
                .sum::<f64>()
        };
        let (e1, e2) = (err(200), err(400));
        let rate = (e1 / e2).log2();
        assert!(rate > 0.8, "rate {rate}");
    }

    #[test]
    fn average_over_subinterval() {
        let r = ReferenceData {
            label: "reference",
            nodes: vec![0.0, 1.0, 2.0],
            nvars: 1,
            values: vec![1.0, 3.0],
        };
        assert!((r.average(0.5, 1.5, 0) - 2.0).abs() < 1e-15);
        assert_eq!(r.average(0.0, 1.0, 0), 1.0);
    }
}
