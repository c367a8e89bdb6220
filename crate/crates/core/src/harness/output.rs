//! Output files: line data, structured grids, error tables and run metadata.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::physics::EulerState;
use crate::quadrature::gauss_rule;

use super::norms::{ErrorNorms, ErrorReport};
use super::problems::{ProblemKind, ProblemSpec, Reference1D};
use super::reference::ReferenceData;
use super::run::{RunResult, Simulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    /// Structured-grid text for 2D fields; 1D data is always CSV.
    Grid,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Grid => "grid",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "grid" => Ok(OutputFormat::Grid),
            _ => Err(Error::Config(format!("unknown output format '{s}'"))),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| io_err(path, e))
}

fn num(v: f64) -> String {
    format!("{v:.12e}")
}

/// Column names of the cell-average output for a model with `nvars` variables.
pub fn variable_names(nvars: usize) -> &'static [&'static str] {
    match nvars {
        1 => &["u"],
        3 => &["rho", "u", "p"],
        _ => &["rho", "u", "v", "p"],
    }
}

/// Cell averages converted to the output variables (primitive for Euler).
fn output_values(avg: &[f64]) -> Vec<f64> {
    match avg.len() {
        1 => avg.to_vec(),
        3 => {
            let s = EulerState::from_conserved_1d(avg);
            vec![s.density, s.velocity()[0], s.pressure()]
        }
        _ => {
            let s = EulerState::from_conserved_2d(avg);
            let v = s.velocity();
            vec![s.density, v[0], v[1], s.pressure()]
        }
    }
}

/// 1D line data: cell centres, averages and, when available, the exact or reference first variable.
pub fn line_csv(spec: &ProblemSpec, result: &RunResult, reference: Option<&ReferenceData>) -> Result<String> {
    let Simulation::OneD(s) = &result.sim else {
        return Err(Error::invalid("line data needs a 1D run"));
    };
    let sol = &s.sol;
    let names = variable_names(sol.nvars());
    let ProblemKind::OneD(p) = &spec.kind else {
        return Err(Error::invalid("problem is not 1D"));
    };
    let exact = match &p.reference {
        Reference1D::Exact(f) => Some(f),
        _ => None,
    };
    let mut out = String::from("x");
    for n in names {
        write!(out, ",{n}").unwrap();
    }
    if exact.is_some() {
        write!(out, ",{}_exact", names[0]).unwrap();
    } else if let Some(r) = reference {
        write!(out, ",{}_{}", names[0], r.label).unwrap();
    }
    out.push('\n');
    let rule = gauss_rule(6)?;
    let mut e = vec![0.0; sol.nvars()];
    for k in 0..sol.num_cells() {
        let (a, b) = sol.mesh.cell(k);
        write!(out, "{}", num(0.5 * (a + b))).unwrap();
        for v in output_values(&sol.cell_averages(k)) {
            write!(out, ",{}", num(v)).unwrap();
        }
        if let Some(f) = exact {
            let mut mean = 0.0;
            for (r, w) in rule.iter() {
                f(0.5 * (a + b) + 0.5 * (b - a) * r, result.t_end, &mut e)?;
                mean += 0.5 * w * e[0];
            }
            write!(out, ",{}", num(mean)).unwrap();
        } else if let Some(r) = reference {
            write!(out, ",{}", num(r.average(a, b, 0))).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// First-variable cell averages of a 2D run: `Kx Ky`, the domain, then one mesh row per line.
pub fn grid_text(result: &RunResult) -> Result<String> {
    let Simulation::TwoD(s) = &result.sim else {
        return Err(Error::invalid("grid output needs a 2D run"));
    };
    let sol = &s.sol;
    let (nx, ny) = (sol.mesh.nx(), sol.mesh.ny());
    let mut out = format!(
        "{nx} {ny}\n{} {} {} {}\n",
        sol.mesh.x.x_left(),
        sol.mesh.x.x_right(),
        sol.mesh.y.x_left(),
        sol.mesh.y.x_right()
    );
    for j in 0..ny {
        let row: Vec<String> = (0..nx).map(|i| num(sol.cell_average(i, j, 0))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out)
}

/// 2D cell averages as CSV with `x, y` cell centres.
pub fn field_csv(spec: &ProblemSpec, result: &RunResult) -> Result<String> {
    let Simulation::TwoD(s) = &result.sim else {
        return Err(Error::invalid("field output needs a 2D run"));
    };
    let sol = &s.sol;
    let names = variable_names(sol.nvars());
    let exact = match &spec.kind {
        ProblemKind::TwoD(p) => p.exact.as_ref(),
        _ => None,
    };
    let mut out = String::from("x,y");
    for n in names {
        write!(out, ",{n}").unwrap();
    }
    if exact.is_some() {
        write!(out, ",{}_exact", names[0]).unwrap();
    }
    out.push('\n');
    let mut e = vec![0.0; sol.nvars()];
    for j in 0..sol.mesh.ny() {
        let y = sol.mesh.y.center(j);
        for i in 0..sol.mesh.nx() {
            let x = sol.mesh.x.center(i);
            write!(out, "{},{}", num(x), num(y)).unwrap();
            for v in output_values(&sol.cell_averages(i, j)) {
                write!(out, ",{}", num(v)).unwrap();
            }
            if let Some(f) = exact {
                f(x, y, result.t_end, &mut e)?;
                write!(out, ",{}", num(e[0])).unwrap();
            }
            out.push('\n');
        }
    }
    Ok(out)
}

pub fn report_csv(report: &ErrorReport) -> String {
    let mut out = String::from("cells,l1,l1_order,linf,linf_order\n");
    let opt = |o: Option<f64>| o.map_or(String::new(), |v| format!("{v:.4}"));
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.cells,
            num(r.l1),
            opt(r.l1_order),
            num(r.linf),
            opt(r.linf_order)
        )
        .unwrap();
    }
    out
}

/// `key=value` lines describing a run; contains nothing machine- or time-dependent.
pub fn run_meta(spec: &ProblemSpec, result: &RunResult, errors: Option<(ErrorNorms, &str)>) -> String {
    let c = &result.config;
    let stats = result.sim.stats();
    let cells = match &result.sim {
        Simulation::OneD(s) => s.sol.num_cells().to_string(),
        Simulation::TwoD(s) => format!("{}x{}", s.sol.mesh.nx(), s.sol.mesh.ny()),
    };
    let positivity = c.positivity.unwrap_or(match &spec.kind {
        ProblemKind::OneD(p) => p.positivity,
        ProblemKind::TwoD(p) => p.positivity,
    }) && c.limiter.is_some();
    let mut out = String::new();
    let mut kv = |k: &str, v: String| writeln!(out, "{k}={v}").unwrap();
    kv("problem", spec.id.to_string());
    kv("dimension", spec.dimension().to_string());
    kv("model", result.sim.model().name().to_string());
    kv("order", c.degree.to_string());
    kv("cells", cells);
    kv("limiter", c.limiter_name().to_string());
    kv("characteristic", if c.characteristic { "on" } else { "off" }.to_string());
    kv("indicator_ck", c.indicator_ck.to_string());
    kv("positivity", positivity.to_string());
    kv("mesh", c.mesh.as_str().to_string());
    kv("seed", c.seed.to_string());
    kv("perturbation", c.perturbation.to_string());
    kv("cfl", c.cfl().to_string());
    kv("t_end", result.t_end.to_string());
    kv("steps", stats.steps.to_string());
    kv("troubled_mean", format!("{:.6}", stats.mean_troubled()));
    kv("troubled_max", stats.troubled_max.to_string());
    kv("positivity_scaled", stats.positivity_total.to_string());
    kv("mass_drift", format!("{:.6e}", result.mass_drift()));
    if let Some((e, against)) = errors {
        kv("error_against", against.to_string());
        kv("l1", num(e.l1));
        kv("linf", num(e.linf));
    }
    out
}

/// Write the solution file and `run.meta` into `dir`, creating it if needed.
pub fn write_outputs(
    dir: &Path,
    spec: &ProblemSpec,
    result: &RunResult,
    reference: Option<&ReferenceData>,
    errors: Option<(ErrorNorms, &str)>,
    format: OutputFormat,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let (name, body) = match (&result.sim, format) {
        (Simulation::OneD(_), _) => (format!("{}.csv", spec.id), line_csv(spec, result, reference)?),
        (Simulation::TwoD(_), OutputFormat::Grid) => (format!("{}.grid", spec.id), grid_text(result)?),
        (Simulation::TwoD(_), OutputFormat::Csv) => (format!("{}.csv", spec.id), field_csv(spec, result)?),
    };
    let data = dir.join(name);
    write_file(&data, &body)?;
    let meta = dir.join("run.meta");
    write_file(&meta, &run_meta(spec, result, errors))?;
    Ok(vec![data, meta])
}

pub fn write_report(path: &Path, report: &ErrorReport) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
        }
    }
    write_file(path, &report_csv(report))
}
