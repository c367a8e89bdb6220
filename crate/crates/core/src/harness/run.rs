//! Building and advancing a configured problem.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::dg::{DGSolution1D, DGSolution2D};
use crate::error::{Error, Result};
use crate::indicator::DEFAULT_THRESHOLD;
use crate::basis::{tensor_grid_values, BasisSet};
use crate::limiter::{LimiterConfig, LimiterVariant};
use crate::mesh::{build_uniform_1d, build_uniform_2d, perturb_mesh, perturb_mesh_2d, Mesh1D, Mesh2D};
use crate::physics::{EulerState, FluxModel};
use crate::quadrature::gauss_rule;
use crate::time_integration::{default_cfl, RunStats, Solver1D, Solver2D};

use super::problems::{Problem1D, Problem2D, ProblemKind, ProblemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshKind {
    Uniform,
    /// Interior nodes moved by up to `perturbation` of the local width.
    Perturbed,
}

impl MeshKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MeshKind::Uniform => "uniform",
            MeshKind::Perturbed => "perturbed",
        }
    }
}

impl FromStr for MeshKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(MeshKind::Uniform),
            "perturbed" | "nonuniform" => Ok(MeshKind::Perturbed),
            _ => Err(Error::Config(format!("unknown mesh kind '{s}'"))),
        }
    }
}

/// Cell counts; `ny` is ignored for 1D problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cells {
    pub nx: usize,
    pub ny: usize,
}

impl Cells {
    pub fn square(k: usize) -> Self {
        Cells { nx: k, ny: k }
    }
}

impl fmt::Display for Cells {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nx == self.ny {
            write!(f, "{}", self.nx)
        } else {
            write!(f, "{}x{}", self.nx, self.ny)
        }
    }
}

impl FromStr for Cells {
    type Err = Error;
    /// `K` or `KxK`.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| -> Result<usize> {
            match t.trim().parse::<usize>() {
                Ok(k) if k > 0 => Ok(k),
                _ => Err(Error::Config(format!("bad cell count '{s}'"))),
            }
        };
        match s.split_once(['x', 'X']) {
            Some((a, b)) => Ok(Cells { nx: parse(a)?, ny: parse(b)? }),
            None => Ok(Cells::square(parse(s)?)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub degree: usize,
    /// Problem default when `None`.
    pub cells: Option<Cells>,
    /// `None` runs the unlimited scheme.
    pub limiter: Option<LimiterVariant>,
    pub characteristic: bool,
    pub mesh: MeshKind,
    pub seed: u64,
    pub perturbation: f64,
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    pub indicator_ck: f64,
    /// Problem default when `None`.
    pub positivity: Option<bool>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            degree: 2,
            cells: None,
            limiter: Some(LimiterVariant::Cswen),
            characteristic: true,
            mesh: MeshKind::Uniform,
            seed: 42,
            perturbation: 0.1,
            cfl: None,
            t_end: None,
            indicator_ck: DEFAULT_THRESHOLD,
            positivity: None,
        }
    }
}

impl RunConfig {
    pub fn limiter_name(&self) -> &'static str {
        self.limiter.map_or("none", LimiterVariant::as_str)
    }

    pub fn cfl(&self) -> f64 {
        self.cfl.unwrap_or_else(|| default_cfl(self.degree))
    }

    fn limiter_config(&self, default_positivity: bool) -> Option<LimiterConfig> {
        self.limiter.map(|variant| LimiterConfig {
            variant,
            characteristic: self.characteristic,
            threshold: self.indicator_ck,
            positivity: self.positivity.unwrap_or(default_positivity),
            ..LimiterConfig::default()
        })
    }

    fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.degree) {
            return Err(Error::Config(format!("order must be 1, 2 or 3, got {}", self.degree)));
        }
        if let Some(c) = self.cfl {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Config(format!("cfl must be positive, got {c}")));
            }
        }
        if let Some(t) = self.t_end {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("final time must be non-negative, got {t}")));
            }
        }
        if !(self.indicator_ck > 0.0) {
            return Err(Error::Config("indicator threshold must be positive".into()));
        }
        if !(0.0..0.5).contains(&self.perturbation) {
            return Err(Error::Config("mesh perturbation must lie in [0, 0.5)".into()));
        }
        Ok(())
    }
}

pub fn build_mesh_1d(domain: (f64, f64), k: usize, cfg: &RunConfig) -> Result<Mesh1D> {
    let m = build_uniform_1d(domain.0, domain.1, k)?;
    match cfg.mesh {
        MeshKind::Uniform => Ok(m),
        MeshKind::Perturbed => perturb_mesh(&m, cfg.perturbation, cfg.seed),
    }
}

pub fn build_mesh_2d(dx: (f64, f64), dy: (f64, f64), cells: Cells, cfg: &RunConfig) -> Result<Mesh2D> {
    let m = build_uniform_2d(dx, dy, cells.nx, cells.ny)?;
    match cfg.mesh {
        MeshKind::Uniform => Ok(m),
        MeshKind::Perturbed => perturb_mesh_2d(&m, cfg.perturbation, cfg.seed),
    }
}

pub fn project_initial_1d(p: &Problem1D, mesh: Mesh1D, degree: usize) -> Result<DGSolution1D> {
    let f = Arc::clone(&p.initial);
    DGSolution1D::project(mesh, degree, p.model.num_vars(), |x, o| f(x, o))
}

pub fn project_initial_2d(p: &Problem2D, mesh: Mesh2D, degree: usize) -> Result<DGSolution2D> {
    let f = Arc::clone(&p.initial);
    DGSolution2D::project(mesh, degree, p.model.num_vars(), |x, y, o| f(x, y, o))
}

pub enum Simulation {
    OneD(Solver1D),
    TwoD(Solver2D),
}

impl Simulation {
    pub fn time(&self) -> f64 {
        match self {
            Simulation::OneD(s) => s.time,
            Simulation::TwoD(s) => s.time,
        }
    }

    pub fn stats(&self) -> &RunStats {
        match self {
            Simulation::OneD(s) => &s.stats,
            Simulation::TwoD(s) => &s.stats,
        }
    }

    pub fn model(&self) -> &Arc<dyn FluxModel> {
        match self {
            Simulation::OneD(s) => s.model(),
            Simulation::TwoD(s) => s.model(),
        }
    }

    pub fn step(&mut self, t_end: f64) -> Result<f64> {
        match self {
            Simulation::OneD(s) => s.step(t_end),
            Simulation::TwoD(s) => s.step(t_end),
        }
    }

    /// Domain integrals of all conserved variables.
    pub fn totals(&self) -> Vec<f64> {
        match self {
            Simulation::OneD(s) => (0..s.sol.nvars()).map(|v| s.sol.total(v)).collect(),
            Simulation::TwoD(s) => (0..s.sol.nvars()).map(|v| s.sol.total(v)).collect(),
        }
    }

    pub fn as_1d(&self) -> Option<&DGSolution1D> {
        match self {
            Simulation::OneD(s) => Some(&s.sol),
            Simulation::TwoD(_) => None,
        }
    }

    pub fn as_2d(&self) -> Option<&DGSolution2D> {
        match self {
            Simulation::OneD(_) => None,
            Simulation::TwoD(s) => Some(&s.sol),
        }
    }
}

/// Mesh, initial projection and solver for `spec` under `cfg`, at `t = 0`.
pub fn setup(spec: &ProblemSpec, cfg: &RunConfig) -> Result<Simulation> {
    cfg.validate()?;
    let cfl = cfg.cfl();
    match &spec.kind {
        ProblemKind::OneD(p) => {
            let k = cfg.cells.map_or(p.default_cells, |c| c.nx);
            let mesh = build_mesh_1d(p.domain, k, cfg)?;
            let sol = project_initial_1d(p, mesh, cfg.degree)?;
            let lim = cfg.limiter_config(p.positivity);
            Ok(Simulation::OneD(Solver1D::new(sol, Arc::clone(&p.model), p.bc.clone(), lim, cfl, 0.0)?))
        }
        ProblemKind::TwoD(p) => {
            let cells = cfg.cells.unwrap_or(Cells { nx: p.default_cells.0, ny: p.default_cells.1 });
            let mesh = build_mesh_2d(p.domain_x, p.domain_y, cells, cfg)?;
            let sol = project_initial_2d(p, mesh, cfg.degree)?;
            let lim = cfg.limiter_config(p.positivity);
            Ok(Simulation::TwoD(Solver2D::new(sol, Arc::clone(&p.model), p.bc.clone(), lim, cfl, 0.0)?))
        }
    }
}

pub struct RunResult {
    pub problem: &'static str,
    pub config: RunConfig,
    pub t_end: f64,
    pub sim: Simulation,
    pub initial_totals: Vec<f64>,
}

impl RunResult {
    /// Relative change over the run of the total of the first conserved variable (mass for
    /// Euler).
    pub fn mass_drift(&self) -> f64 {
        let (now, start) = (self.sim.totals()[0], self.initial_totals[0]);
        (now - start).abs() / start.abs().max(f64::MIN_POSITIVE)
    }
}

/// Run `spec` to its final time; `observer` sees the simulation after every step.
pub fn run_problem(
    spec: &ProblemSpec,
    cfg: &RunConfig,
    mut observer: Option<&mut dyn FnMut(&Simulation) -> Result<()>>,
) -> Result<RunResult> {
    let t_end = cfg.t_end.unwrap_or(spec.t_end);
    let mut sim = setup(spec, cfg)?;
    let initial_totals = sim.totals();
    while sim.time() < t_end {
        sim.step(t_end)?;
        if let Some(obs) = observer.as_mut() {
            obs(&sim)?;
        }
    }
    Ok(RunResult {
        problem: spec.id,
        config: cfg.clone(),
        t_end,
        sim,
        initial_totals,
    })
}

/// Minimum density and pressure of a 1D Euler solution over `(N+2)` Gauss points and cell ends.
pub fn min_density_pressure_1d(sol: &DGSolution1D) -> Result<(f64, f64)> {
    let rule = gauss_rule(sol.degree() + 2)?;
    let mut pts = rule.points.clone();
    pts.extend([-1.0, 1.0]);
    let mut u = vec![0.0; sol.nvars()];
    let (mut rho, mut p) = (f64::INFINITY, f64::INFINITY);
    for k in 0..sol.num_cells() {
        for &r in &pts {
            sol.evaluate(k, r, &mut u);
            let s = EulerState::from_conserved_1d(&u);
            rho = rho.min(s.density);
            p = p.min(s.pressure());
        }
    }
    Ok((rho, p))
}

/// 2D counterpart of [`min_density_pressure_1d`], over the tensor grid of `(N+2)` Gauss
/// points and cell edges without its corners.
pub fn min_density_pressure_2d(sol: &DGSolution2D) -> Result<(f64, f64)> {
    let np = sol.degree() + 1;
    let np2 = np * np;
    let mut line = gauss_rule(sol.degree() + 2)?.points;
    line.extend([-1.0, 1.0]);
    let n = line.len();
    let table = BasisSet::new(sol.degree()).table(&line);
    let m = sol.nvars();
    let mut tmp = vec![0.0; np * n];
    let mut grid = vec![0.0; m * n * n];
    let mut u = vec![0.0; m];
    let (mut rho, mut p) = (f64::INFINITY, f64::INFINITY);
    for j in 0..sol.mesh.ny() {
        for i in 0..sol.mesh.nx() {
            let c = sol.cell(i, j);
            for v in 0..m {
                tensor_grid_values(&c[v * np2..(v + 1) * np2], np, &table, &mut tmp, &mut grid[v * n * n..(v + 1) * n * n]);
            }
            for q in 0..n * n {
                if q % n >= n - 2 && q / n >= n - 2 {
                    continue;
                }
                for v in 0..m {
                    u[v] = grid[v * n * n + q];
                }
                let st = EulerState::from_conserved_2d(&u);
                rho = rho.min(st.density);
                p = p.min(st.pressure());
            }
        }
    }
    Ok((rho, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::problems::problem;

    #[test]
    fn min_density_pressure_2d_matches_pointwise() {
        let spec = problem("dmr").unwrap();
        let cfg = RunConfig { degree: 2, cells: Some(Cells { nx: 12, ny: 4 }), ..RunConfig::default() };
        let Simulation::TwoD(s) = setup(&spec, &cfg).unwrap() else { panic!("2D") };
        let (rho, p) = min_density_pressure_2d(&s.sol).unwrap();
        let mut u = [0.0; 4];
        let (mut r0, mut p0) = (f64::INFINITY, f64::INFINITY);
        for j in 0..4 {
            for i in 0..12 {
                for (r, q) in crate::limiter::check_points_2d(2).unwrap() {
                    s.sol.evaluate(i, j, r, q, &mut u);
                    let st = EulerState::from_conserved_2d(&u);
                    r0 = r0.min(st.density);
                    p0 = p0.min(st.pressure());
                }
            }
        }
        assert!((rho - r0).abs() < 1e-12 && (p - p0).abs() < 1e-12, "{rho} {r0} {p} {p0}");
    }

    #[test]
    fn cells_parse() {
        assert_eq!("40".parse::<Cells>().unwrap(), Cells::square(40));
        assert_eq!("480x120".parse::<Cells>().unwrap(), Cells { nx: 480, ny: 120 });
        assert!("0".parse::<Cells>().is_err());
        assert!("ax3".parse::<Cells>().is_err());
        assert_eq!(Cells { nx: 4, ny: 2 }.to_string(), "4x2");
    }

    #[test]
    fn constant_initial_data_projects_to_mean() {
        let p = problem("sod").unwrap();
        let ProblemKind::OneD(d) = p.kind else { panic!() };
        let mesh = build_uniform_1d(0.0, 0.4, 4).unwrap();
        let sol = project_initial_1d(&d, mesh, 2).unwrap();
        for k in 0..4 {
            assert!((sol.cell_average(k, 0) - 1.0).abs() < 1e-14);
            for n in 1..3 {
                assert!(sol.coeff(k, 0, n).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn step_data_mass_is_exact() {
        // Sod data with the jump on a cell face: the projected total is the exact integral.
        let p = problem("sod").unwrap();
        let ProblemKind::OneD(d) = p.kind else { panic!() };
        let sol = project_initial_1d(&d, build_uniform_1d(0.0, 1.0, 10).unwrap(), 3).unwrap();
        assert!((sol.total(0) - (0.5 + 0.0625)).abs() < 1e-14);
    }

    #[test]
    fn bad_config_rejected() {
        let p = problem("burgers1d").unwrap();
        let cfg = RunConfig { degree: 4, ..RunConfig::default() };
        assert!(matches!(setup(&p, &cfg), Err(Error::Config(_))));
        let cfg = RunConfig { cfl: Some(-1.0), ..RunConfig::default() };
        assert!(setup(&p, &cfg).is_err());
    }

    #[test]
    fn zero_final_time_returns_projection() {
        let p = problem("burgers1d").unwrap();
        let cfg = RunConfig { t_end: Some(0.0), cells: Some(Cells::square(8)), ..RunConfig::default() };
        let r = run_problem(&p, &cfg, None).unwrap();
        assert_eq!(r.sim.stats().steps, 0);
        assert_eq!(r.mass_drift(), 0.0);
    }
}
