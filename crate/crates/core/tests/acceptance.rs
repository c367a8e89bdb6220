//! Acceptance criteria. Every test prints one `criterion N: PASS|FAIL` line on stdout
//! (written past the test harness capture) and fails when its criterion does.
//!
//! The heavy tests take a shared lock so wall-clock budgets are measured one at a time.

use std::io::Write;
use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};

use cswen_core::dg::{BoundarySpec1D, DGSolution1D};
use cswen_core::harness::{
    convergence_study, measure_errors, min_density_pressure_1d, min_density_pressure_2d, problem, reference_1d,
    registry, run_problem, write_outputs, Cells, ErrorReport, MeshKind, OutputFormat, ProblemKind, Reference1D,
    RunConfig, Simulation,
};
use cswen_core::limiter::{limiter_rule, nonlinear_weights, Limiter, LimiterConfig, LimiterVariant, ReconstructionOperator};
use cswen_core::mesh::{build_uniform_1d, perturb_mesh};
use cswen_core::physics::riemann::{Primitive, RiemannSolution};
use cswen_core::physics::{Euler1D, EulerState};
use cswen_core::Result;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn say(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn verdict(n: u32, pass: bool, summary: &str) {
    say(&format!("criterion {n:>2}: {} {summary}", if pass { "PASS" } else { "FAIL" }));
    assert!(pass, "criterion {n}: {summary}");
}

fn minutes(d: Duration) -> String {
    format!("{:.0} s ({:.1} min)", d.as_secs_f64(), d.as_secs_f64() / 60.0)
}

fn show(tag: &str, report: &ErrorReport) {
    for row in &report.rows {
        let order = row.l1_order.map_or(String::from("-"), |o| format!("{o:.2}"));
        say(&format!(
            "  [{tag}] {} P{} {} K={}: l1={:.3e} order={order}",
            report.problem, report.degree, report.limiter, row.cells, row.l1
        ));
    }
}

// ---------------------------------------------------------------------------------------
// 1. printed P2 tables

#[test]
fn criterion_01_operator_tables() {
    let s = 5f64.sqrt();
    let t3 = [
        [-1.0 / 4.0, 13.0 / 12.0, 1.0 / 6.0, 0.0, 0.0],
        [0.0, 1.0 / 2.0, 2.0 / 3.0, -1.0 / 6.0, 0.0],
        [0.0, 0.0, 13.0 / 6.0, -23.0 / 12.0, -3.0 / 4.0],
        [-1.0 / 10.0, 21.0 / 30.0, 17.0 / 30.0, -13.0 / 60.0, 1.0 / 20.0],
    ];
    let t4 = [
        [-(3.0 + 6.0 * s) / 60.0, (5.0 + 18.0 * s) / 60.0, (58.0 - 12.0 * s) / 60.0, 0.0, 0.0],
        [0.0, (2.0 * s - 1.0) / 30.0, 16.0 / 15.0, -(1.0 + 2.0 * s) / 30.0, 0.0],
        [0.0, 0.0, (58.0 + 12.0 * s) / 60.0, (5.0 - 18.0 * s) / 60.0, (6.0 * s - 3.0) / 60.0],
        [
            (15.0 - 69.0 * s) / 3000.0,
            (63.0 * s - 29.0) / 600.0,
            163.0 / 150.0,
            -(63.0 * s + 29.0) / 600.0,
            (15.0 + 69.0 * s) / 3000.0,
        ],
    ];
    let t5 = [
        [-3.0 / 4.0, -23.0 / 12.0, 13.0 / 6.0, 0.0, 0.0],
        [0.0, -1.0 / 6.0, 2.0 / 3.0, 1.0 / 2.0, 0.0],
        [0.0, 0.0, 1.0 / 6.0, 13.0 / 12.0, -1.0 / 4.0],
        [1.0 / 20.0, -13.0 / 60.0, 17.0 / 30.0, 21.0 / 30.0, -1.0 / 10.0],
    ];
    let t6 = [
        [(6.0 * s - 3.0) / 60.0, (5.0 - 18.0 * s) / 60.0, (58.0 + 12.0 * s) / 60.0, 0.0, 0.0],
        [0.0, -(1.0 + 2.0 * s) / 30.0, 16.0 / 15.0, (2.0 * s - 1.0) / 30.0, 0.0],
        [0.0, 0.0, (58.0 - 12.0 * s) / 60.0, (5.0 + 18.0 * s) / 60.0, -(3.0 + 6.0 * s) / 60.0],
        [
            (15.0 + 69.0 * s) / 3000.0,
            -(63.0 * s + 29.0) / 600.0,
            163.0 / 150.0,
            (63.0 * s - 29.0) / 600.0,
            (15.0 - 69.0 * s) / 3000.0,
        ],
    ];
    let g_lo = [2.0 / 5.0, 24.0 / 45.0, 1.0 / 15.0];
    let g_in = [(235.0 - 33.0 * s) / 950.0, 48.0 / 95.0, (235.0 + 33.0 * s) / 950.0];
    let g_hi = [1.0 / 15.0, 24.0 / 45.0, 2.0 / 5.0];
    let g_in2 = [(235.0 + 33.0 * s) / 950.0, 48.0 / 95.0, (235.0 - 33.0 * s) / 950.0];
    // printed entries whose sign breaks constant reproduction: (table, row, column)
    let misprints = [("T3", 2usize, 4usize), ("T5", 0, 0)];

    let widths = [0.5, 0.5, 1.0, 0.5, 0.5];
    let cases = [
        ("T3", -1.0, &t3, g_lo),
        ("T4", -1.0 / s, &t4, g_in),
        ("T5", 1.0, &t5, g_hi),
        ("T6", 1.0 / s, &t6, g_in2),
    ];
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut problems = Vec::new();
    for (name, r, table, gamma) in cases {
        let op = ReconstructionOperator::new(&widths, 2, &[r]).expect("operator");
        for (row, printed) in table.iter().enumerate() {
            let generated = if row < 3 { op.p_row(0, row) } else { op.q_row(0) };
            for (col, (&g, &p)) in generated.iter().zip(printed).enumerate() {
                if misprints.contains(&(name, row, col)) {
                    let row_sum: f64 = printed.iter().sum();
                    if (g + p).abs() > 1e-12 || (row_sum - 1.0).abs() < 0.25 {
                        problems.push(format!("{name}[{row}][{col}] generated {g}, printed {p}"));
                    } else {
                        say(&format!(
                            "  [c1] {name}[{row}][{col}] printed {p:.4}, generated {g:.4}; printed row sums to {row_sum:.3}, not 1"
                        ));
                    }
                    continue;
                }
                worst = worst.max((g - p).abs());
                checked += 1;
            }
        }
        for (g, p) in op.gamma(0).iter().zip(gamma) {
            worst = worst.max((g - p).abs());
            checked += 1;
        }
    }
    let pass = worst <= 1e-12 && problems.is_empty();
    verdict(
        1,
        pass,
        &format!("{checked} printed entries, max |generated - printed| = {worst:.1e}; two sign misprints confirmed {problems:?}"),
    );
}

// ---------------------------------------------------------------------------------------
// 2. and 4. one-dimensional Burgers

const LADDER_1D: [usize; 5] = [20, 40, 80, 160, 320];
const TABLE1_L1: [[f64; 5]; 3] = [
    [9.16e-3, 2.53e-3, 6.52e-4, 1.67e-4, 4.45e-5],
    [4.89e-4, 6.12e-5, 8.14e-6, 1.15e-6, 2.05e-7],
    [2.05e-5, 1.23e-6, 7.67e-8, 4.92e-9, 3.06e-10],
];
const TABLE1_FINEST_ORDER: [f64; 3] = [1.91, 2.49, 4.01];

fn smooth_config(degree: usize, limiter: Option<LimiterVariant>, cfl: Option<f64>) -> RunConfig {
    RunConfig {
        degree,
        limiter,
        mesh: MeshKind::Perturbed,
        cfl,
        ..RunConfig::default()
    }
}

struct Timed<T> {
    value: T,
    elapsed: Duration,
}

fn burgers1d_limited() -> &'static Timed<Vec<ErrorReport>> {
    static CELL: OnceLock<Timed<Vec<ErrorReport>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let spec = problem("burgers1d").unwrap();
        let value = (1..=3)
            .map(|d| convergence_study(&spec, &smooth_config(d, Some(LimiterVariant::Cswen), None), &LADDER_1D).unwrap())
            .collect();
        Timed { value, elapsed: start.elapsed() }
    })
}

#[test]
fn criterion_02_burgers_1d_convergence() {
    let _g = serial();
    let reports = burgers1d_limited();
    let mut failures = Vec::new();
    for (d, report) in reports.value.iter().enumerate() {
        show("c2", report);
        let order = report.finest_l1_order().unwrap();
        if (order - TABLE1_FINEST_ORDER[d]).abs() > 0.35 {
            failures.push(format!("P{} finest order {order:.3} vs {}", d + 1, TABLE1_FINEST_ORDER[d]));
        }
        for (row, printed) in report.rows.iter().zip(TABLE1_L1[d]) {
            let ratio = row.l1 / printed;
            if !(1.0 / 3.0..=3.0).contains(&ratio) {
                failures.push(format!("P{} K={} l1 ratio {ratio:.3}", d + 1, row.cells));
            }
        }
    }
    if reports.elapsed > Duration::from_secs(300) {
        failures.push(format!("runtime {}", minutes(reports.elapsed)));
    }
    verdict(2, failures.is_empty(), &format!("runtime {}; {failures:?}", minutes(reports.elapsed)));
}

// ---------------------------------------------------------------------------------------
// 3. and 4. two-dimensional smooth problems

const LADDER_2D: [usize; 3] = [20, 40, 80];
/// CFL of the two-dimensional ladders per degree, about 75% of the RK3 limit; the time error
/// stays well below the spatial error.
const CFL_2D: [f64; 3] = [0.9, 0.8, 0.7];
/// Printed with-limiter L1 orders at 40x40 and 80x80 for P1, P2, P3.
const TABLES_2D: [(&str, [[f64; 2]; 3]); 3] = [
    ("burgers2d", [[2.05, 2.08], [2.89, 2.66], [3.99, 4.03]]),
    ("euler2d-densitywave", [[3.18, 3.03], [2.93, 3.02], [3.91, 3.98]]),
    ("vortex", [[2.10, 2.03], [3.24, 2.99], [3.97, 3.89]]),
];

fn two_d_limited() -> &'static Timed<Vec<ErrorReport>> {
    static CELL: OnceLock<Timed<Vec<ErrorReport>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let mut value = Vec::new();
        for (id, _) in TABLES_2D {
            let spec = problem(id).unwrap();
            for d in 1..=3 {
                let cfg = smooth_config(d, Some(LimiterVariant::Cswen), Some(CFL_2D[d - 1]));
                value.push(convergence_study(&spec, &cfg, &LADDER_2D).unwrap());
            }
        }
        Timed { value, elapsed: start.elapsed() }
    })
}

#[test]
fn criterion_03_two_d_convergence() {
    let _g = serial();
    let reports = two_d_limited();
    let mut failures = Vec::new();
    for (p, (id, table)) in TABLES_2D.iter().enumerate() {
        for d in 0..3 {
            let report = &reports.value[p * 3 + d];
            show("c3", report);
            for (row, printed) in report.rows[1..].iter().zip(table[d]) {
                let order = row.l1_order.unwrap();
                if (order - printed).abs() > 0.4 {
                    failures.push(format!("{id} P{} K={} order {order:.2} vs {printed}", d + 1, row.cells));
                }
            }
        }
    }
    if reports.elapsed > Duration::from_secs(20 * 60) {
        failures.push(format!("runtime {}", minutes(reports.elapsed)));
    }
    verdict(3, failures.is_empty(), &format!("runtime {}; {failures:?}", minutes(reports.elapsed)));
}

#[test]
fn criterion_04_limiter_neutral_on_smooth_flow() {
    let _g = serial();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let mut compare = |on: &ErrorReport, off: &ErrorReport| {
        for (a, b) in on.rows.iter().zip(&off.rows) {
            let ratio = a.l1 / b.l1;
            say(&format!(
                "  [c4] {} P{} K={}: on {:.3e} off {:.3e} ratio {ratio:.3}",
                on.problem, on.degree, a.cells, a.l1, b.l1
            ));
            worst = worst.max(ratio);
            if !(ratio <= 3.0) {
                failures.push(format!("{} P{} K={} ratio {ratio:.2}", on.problem, on.degree, a.cells));
            }
        }
    };
    let spec = problem("burgers1d").unwrap();
    for (d, on) in burgers1d_limited().value.iter().enumerate() {
        let off = convergence_study(&spec, &smooth_config(d + 1, None, None), &LADDER_1D).unwrap();
        compare(on, &off);
    }
    // the unlimited 2D runs stop at 40x40
    let limited = two_d_limited();
    for (p, (id, _)) in TABLES_2D.iter().enumerate() {
        let spec = problem(id).unwrap();
        for d in 0..3 {
            let off = convergence_study(&spec, &smooth_config(d + 1, None, Some(CFL_2D[d])), &LADDER_2D[..2]).unwrap();
            compare(&limited.value[p * 3 + d], &off);
        }
    }
    verdict(4, failures.is_empty(), &format!("max on/off L1 ratio {worst:.3}; {failures:?}"));
}

// ---------------------------------------------------------------------------------------
// 5. conservation

#[test]
fn criterion_05_mass_conservation() {
    let _g = serial();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let mut runs = 0;
    for spec in registry().into_iter().filter(|s| s.is_periodic()) {
        for degree in 1..=3 {
            let cells = (spec.dimension() == 2).then(|| Cells::square(20));
            let cfg = RunConfig { degree, cells, ..RunConfig::default() };
            let r = run_problem(&spec, &cfg, None).unwrap();
            let drift = r.mass_drift();
            runs += 1;
            worst = worst.max(drift);
            if !(drift <= 1e-11) {
                failures.push(format!("{} P{degree} drift {drift:.2e}", spec.id));
            }
        }
    }
    verdict(5, failures.is_empty(), &format!("{runs} periodic runs, max relative mass drift {worst:.2e}; {failures:?}"));
}

// ---------------------------------------------------------------------------------------
// 6. Sod

#[test]
fn criterion_06_sod_shock_quality() {
    let _g = serial();
    let spec = problem("sod").unwrap();
    let (left, right) = (Primitive::new(1.0, 0.0, 1.0), Primitive::new(0.125, 0.0, 0.1));
    let waves = RiemannSolution::solve(left, right).unwrap();
    let t = spec.t_end;
    let mut jumps = vec![0.5 + waves.u_star * t];
    let (sl, sr) = waves.shock_speeds();
    jumps.extend(sl.into_iter().chain(sr).map(|s| 0.5 + s * t));
    let tol = 0.005 * (1.0 - 0.125);
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for degree in [2, 3] {
        let cfg = RunConfig { degree, cells: Some(Cells::square(200)), ..RunConfig::default() };
        let r = run_problem(&spec, &cfg, None).unwrap();
        let (e, _) = measure_errors(&spec, &r, None).unwrap().unwrap();
        let sol = r.sim.as_1d().unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 0..sol.num_cells() {
            let (xc, h) = (sol.mesh.center(k), sol.mesh.width(k));
            if jumps.iter().any(|x| (xc - x).abs() <= 3.0 * h) {
                continue;
            }
            let rho = sol.cell_average(k, 0);
            lo = lo.min(rho);
            hi = hi.max(rho);
        }
        summary.push(format!("P{degree} l1 {:.3e} density range away from jumps [{lo:.5}, {hi:.5}]", e.l1));
        if !(e.l1 <= 5e-3) {
            failures.push(format!("P{degree} l1 {:.3e}", e.l1));
        }
        if lo < 0.125 - tol || hi > 1.0 + tol {
            failures.push(format!("P{degree} extrema [{lo}, {hi}]"));
        }
    }
    verdict(6, failures.is_empty(), &format!("{}; {failures:?}", summary.join("; ")));
}

// ---------------------------------------------------------------------------------------
// 7. shock/entropy and blast waves

fn admissible_1d(sol: &DGSolution1D, rho_cap: f64) -> std::result::Result<(), String> {
    if sol.coeffs().iter().any(|c| !c.is_finite()) {
        return Err("non-finite coefficient".into());
    }
    let (rho, p) = min_density_pressure_1d(sol).map_err(|e| e.to_string())?;
    if !(rho > 0.0 && p > 0.0) {
        return Err(format!("min density {rho:.3e}, min pressure {p:.3e}"));
    }
    let top = (0..sol.num_cells()).map(|k| sol.cell_average(k, 0)).fold(0.0, f64::max);
    if top > rho_cap {
        return Err(format!("density average {top} above {rho_cap}"));
    }
    Ok(())
}

#[test]
fn criterion_07_shock_entropy_and_blast() {
    let _g = serial();
    let mut failures = Vec::new();
    let mut runs = 0;
    for id in ["shuosher", "blast"] {
        let spec = problem(id).unwrap();
        for degree in [2, 3] {
            for variant in [LimiterVariant::Cswen, LimiterVariant::Weno] {
                let cfg = RunConfig {
                    degree,
                    limiter: Some(variant),
                    cells: Some(Cells::square(200)),
                    positivity: Some(true),
                    ..RunConfig::default()
                };
                let mut bad: Option<String> = None;
                let mut steps = 0;
                let mut obs = |sim: &Simulation| -> Result<()> {
                    steps += 1;
                    if bad.is_none() {
                        if let Err(e) = admissible_1d(sim.as_1d().unwrap(), 10.0 * 6.0) {
                            bad = Some(format!("step {steps}: {e}"));
                        }
                    }
                    Ok(())
                };
                let outcome = run_problem(&spec, &cfg, Some(&mut obs));
                runs += 1;
                let tag = format!("{id} P{degree} {}", variant.as_str());
                match (outcome, bad) {
                    (Ok(r), None) => say(&format!("  [c7] {tag}: {} steps, admissible throughout", r.sim.stats().steps)),
                    (Ok(_), Some(b)) => failures.push(format!("{tag}: {b}")),
                    (Err(e), _) => failures.push(format!("{tag}: {e}")),
                }
            }
        }
    }
    verdict(7, failures.is_empty(), &format!("{runs} runs at K=200; {failures:?}"));
}

// ---------------------------------------------------------------------------------------
// 8. double Mach reflection

#[test]
fn criterion_08_double_mach_reflection() {
    let _g = serial();
    let spec = problem("dmr").unwrap();
    let cfg = RunConfig {
        degree: 1,
        cells: Some(Cells { nx: 480, ny: 120 }),
        positivity: Some(true),
        ..RunConfig::default()
    };
    let start = Instant::now();
    let (mut min_rho, mut min_p) = (f64::INFINITY, f64::INFINITY);
    let mut obs = |sim: &Simulation| -> Result<()> {
        let (rho, p) = min_density_pressure_2d(sim.as_2d().unwrap())?;
        min_rho = min_rho.min(rho);
        min_p = min_p.min(p);
        Ok(())
    };
    let outcome = run_problem(&spec, &cfg, Some(&mut obs));
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    let mut steps = 0;
    match outcome {
        Ok(r) => {
            steps = r.sim.stats().steps;
            let dir = tempfile::tempdir().unwrap();
            let files = write_outputs(dir.path(), &spec, &r, None, None, OutputFormat::Grid).unwrap();
            let grid = std::fs::read_to_string(dir.path().join("dmr.grid")).unwrap();
            let mut lines = grid.lines();
            if lines.next() != Some("480 120") || grid.lines().count() != 2 + 120 || files.len() != 2 {
                failures.push("contour grid file malformed".to_string());
            }
        }
        Err(e) => failures.push(e.to_string()),
    }
    if !(min_rho > 0.0 && min_p > 0.0) {
        failures.push(format!("min density {min_rho:.3e}, min pressure {min_p:.3e}"));
    }
    if elapsed > Duration::from_secs(3600) {
        failures.push(format!("runtime {}", minutes(elapsed)));
    }
    verdict(
        8,
        failures.is_empty(),
        &format!(
            "P1 480x120, {steps} steps in {}, min density {min_rho:.3e}, min pressure {min_p:.3e}; {failures:?}",
            minutes(elapsed)
        ),
    );
}

// ---------------------------------------------------------------------------------------
// 9. reconstruction kernel properties

fn subcell_widths(degree: usize) -> Vec<f64> {
    let mut w = vec![1.0 / degree as f64; 2 * degree + 1];
    w[degree] = 1.0;
    w
}

/// Exact averages of `sum_m c_m xi^m` over the stencil cells, troubled cell on `[-1/2, 1/2]`.
fn stencil_averages(widths: &[f64], coeffs: &[f64]) -> Vec<f64> {
    let center = widths.len() / 2;
    let mut bounds = vec![(-0.5, 0.5); widths.len()];
    let mut x = -0.5;
    for c in (0..center).rev() {
        bounds[c] = (x - widths[c], x);
        x -= widths[c];
    }
    let mut x = 0.5;
    for c in center + 1..widths.len() {
        bounds[c] = (x, x + widths[c]);
        x += widths[c];
    }
    let antiderivative = |x: f64| -> f64 {
        coeffs.iter().enumerate().map(|(m, c)| c * x.powi(m as i32 + 1) / (m + 1) as f64).sum()
    };
    bounds.iter().map(|&(a, b)| (antiderivative(b) - antiderivative(a)) / (b - a)).collect()
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn kernel_properties(runner: &mut TestRunner) -> std::result::Result<(), String> {
    let deg = 1usize..=3;
    let widths = proptest::collection::vec(0.3f64..2.0, 7);
    let coeffs = proptest::collection::vec(-1.0f64..1.0, 7);

    // Q and the linear-weight blend are exact for degree <= 2N; every WENO value is exact
    // for degree <= N
    runner
        .run(&(deg.clone(), widths.clone(), coeffs.clone(), any::<bool>()), |(d, w, c, subcell)| {
            let nc = 2 * d + 1;
            let w = if subcell { subcell_widths(d) } else { let mut w = w[..nc].to_vec(); w[d] = 1.0; w };
            let pts = limiter_rule(d).unwrap().points;
            let op = ReconstructionOperator::new(&w, d, &pts).unwrap();
            let high = stencil_averages(&w, &c[..nc]);
            let low = stencil_averages(&w, &c[..d + 1]);
            for (g, &r) in pts.iter().enumerate() {
                let q: f64 = op.q_row(g).iter().zip(&high).map(|(a, b)| a * b).sum();
                prop_assert!((q - poly(&c[..nc], 0.5 * r)).abs() < 1e-10);
                let blend: f64 = (0..=d)
                    .map(|i| op.gamma(g)[i] * op.p_row(g, i).iter().zip(&high).map(|(a, b)| a * b).sum::<f64>())
                    .sum();
                prop_assert!((blend - q).abs() < 1e-10);
                prop_assert!((op.point_value(g, &low, 1e-6) - poly(&c[..d + 1], 0.5 * r)).abs() < 1e-10);
            }
            Ok(())
        })
        .map_err(|e| format!("exactness: {e}"))?;

    // beta is a quadratic form that ignores constants
    runner
        .run(&(deg.clone(), coeffs.clone(), -5.0f64..5.0, -3.0f64..3.0), |(d, c, lambda, shift)| {
            let w = subcell_widths(d);
            let op = ReconstructionOperator::new(&w, d, &[0.0]).unwrap();
            let a: Vec<f64> = c[..2 * d + 1].to_vec();
            let mut b0 = [0.0; 4];
            let mut b1 = [0.0; 4];
            let mut b2 = [0.0; 4];
            op.smoothness_indicators(&a, &mut b0);
            op.smoothness_indicators(&a.iter().map(|x| lambda * x).collect::<Vec<_>>(), &mut b1);
            op.smoothness_indicators(&a.iter().map(|x| x + shift).collect::<Vec<_>>(), &mut b2);
            for i in 0..=d {
                prop_assert!(b0[i] >= 0.0);
                prop_assert!((b1[i] - lambda * lambda * b0[i]).abs() <= 1e-9 * (1.0 + b1[i].abs()));
                prop_assert!((b2[i] - b0[i]).abs() <= 1e-9 * (1.0 + b0[i]));
            }
            Ok(())
        })
        .map_err(|e| format!("beta: {e}"))?;

    // nonlinear weights are a partition of unity
    runner
        .run(
            &(proptest::collection::vec(0.01f64..1.0, 4), proptest::collection::vec(0.0f64..100.0, 4), 1e-12f64..1e-2),
            |(g, b, eps)| {
                let mut w = [0.0; 4];
                nonlinear_weights(&g, &b, eps, &mut w);
                prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                prop_assert!(w.iter().all(|&x| (0.0..=1.0).contains(&x)));
                Ok(())
            },
        )
        .map_err(|e| format!("omega: {e}"))?;

    // subcell averages reproduce the exact integrals and the cell mean
    runner
        .run(&(deg.clone(), coeffs.clone(), 0.1f64..2.0), |(d, c, h)| {
            let limiter = Limiter::new(d, LimiterConfig::default()).unwrap();
            let mesh = build_uniform_1d(0.0, h, 1).unwrap();
            let f = |x: f64| poly(&c[..d + 1], x / h - 0.5);
            let sol = DGSolution1D::project(mesh, d, 1, |x, o| o[0] = f(x)).unwrap();
            let mut sub = [0.0; 3];
            limiter.subcell_averages(sol.cell(0), 1, &mut sub[..d]);
            let mean: f64 = sub[..d].iter().sum::<f64>() / d as f64;
            prop_assert!((mean - sol.cell_average(0, 0)).abs() < 1e-12);
            let exact: Vec<f64> = (0..d)
                .map(|s| {
                    let (a, b) = (-0.5 + s as f64 / d as f64, -0.5 + (s + 1) as f64 / d as f64);
                    let anti = |x: f64| -> f64 {
                        c[..d + 1].iter().enumerate().map(|(m, cm)| cm * x.powi(m as i32 + 1) / (m + 1) as f64).sum()
                    };
                    (anti(b) - anti(a)) / (b - a)
                })
                .collect();
            for s in 0..d {
                prop_assert!((sub[s] - exact[s]).abs() < 1e-12);
            }
            Ok(())
        })
        .map_err(|e| format!("subcells: {e}"))?;

    // compact stencil: limiting reads the immediate neighbours only
    runner
        .run(&(deg, proptest::collection::vec(0.2f64..3.0, 9), 0usize..9), |(d, rho, j)| {
            let mesh = perturb_mesh(&build_uniform_1d(0.0, 1.0, 9).unwrap(), 0.1, 3).unwrap();
            let sol = DGSolution1D::project(mesh.clone(), d, 3, |x, o| {
                let k = mesh.locate(x).unwrap_or(8);
                o.copy_from_slice(&EulerState::from_primitive_1d(rho[k], 0.1, 1.0 + rho[k]).to_conserved_1d())
            })
            .unwrap();
            for (variant, reach) in [(LimiterVariant::Cswen, 1isize), (LimiterVariant::Weno, d as isize)] {
                let cfg = LimiterConfig { variant, ..LimiterConfig::default() };
                let mut limiter = Limiter::new(d, cfg).unwrap();
                let bc = BoundarySpec1D::periodic();
                let (_, reads) = limiter.limit_cell_traced(&sol, &Euler1D, &bc, j, 0.0).unwrap();
                prop_assert!(reads.iter().all(|o| o.abs() <= reach), "{variant:?}: {reads:?}");
                prop_assert!(reads.iter().any(|o| o.abs() == reach));
            }
            Ok(())
        })
        .map_err(|e| format!("compactness: {e}"))?;
    Ok(())
}

#[test]
fn criterion_09_kernel_properties() {
    let _g = serial();
    let start = Instant::now();
    let mut runner = TestRunner::new(PropConfig { cases: 256, ..PropConfig::default() });
    let outcome = kernel_properties(&mut runner);
    let elapsed = start.elapsed();
    let pass = outcome.is_ok() && elapsed < Duration::from_secs(60);
    verdict(
        9,
        pass,
        &format!("5 properties x 256 cases in {:.1} s; {}", elapsed.as_secs_f64(), outcome.err().unwrap_or_default()),
    );
}

// ---------------------------------------------------------------------------------------
// 10. CSWENO against the parent WENO limiter

#[test]
fn criterion_10_cswen_versus_weno() {
    let _g = serial();
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("problem,order,cswen_l1,weno_l1,against\n");
    let mut failures = Vec::new();
    let mut better = 0;
    let mut total = 0;
    for id in ["burgers1d-shock", "buckley", "sod", "lax", "shuosher", "blast"] {
        let spec = problem(id).unwrap();
        let ProblemKind::OneD(p) = &spec.kind else { unreachable!() };
        let reference = match p.reference {
            Reference1D::Exact(_) => None,
            Reference1D::Godunov { .. } => Some(reference_1d(&spec, spec.t_end, None).unwrap()),
            // smaller than the CLI default to bound the suite's runtime
            Reference1D::FineGrid { .. } => Some(reference_1d(&spec, spec.t_end, Some(2000)).unwrap()),
        };
        for degree in [2, 3] {
            let mut l1 = [0.0; 2];
            let mut against = "";
            for (slot, variant) in [LimiterVariant::Cswen, LimiterVariant::Weno].into_iter().enumerate() {
                let cfg = RunConfig { degree, limiter: Some(variant), ..RunConfig::default() };
                match run_problem(&spec, &cfg, None).and_then(|r| measure_errors(&spec, &r, reference.as_ref())) {
                    Ok(Some((e, a))) => {
                        l1[slot] = e.l1;
                        against = a;
                    }
                    Ok(None) => failures.push(format!("{id}: nothing to compare against")),
                    Err(e) => failures.push(format!("{id} P{degree} {}: {e}", variant.as_str())),
                }
            }
            total += 1;
            if l1[0] <= l1[1] {
                better += 1;
            }
            if !l1.iter().all(|x| x.is_finite() && *x > 0.0) {
                failures.push(format!("{id} P{degree}: l1 {l1:?}"));
            }
            say(&format!("  [c10] {id:<16} P{degree} cswen {:.4e}  weno {:.4e}  ({against})", l1[0], l1[1]));
            csv.push_str(&format!("{id},{degree},{:.6e},{:.6e},{against}\n", l1[0], l1[1]));
        }
    }
    let path = dir.path().join("compare.csv");
    std::fs::write(&path, &csv).unwrap();
    verdict(
        10,
        failures.is_empty(),
        &format!("side-by-side L1 for 6 problems x 2 orders, CSWENO lower in {better}/{total} (informational); {failures:?}"),
    );
}
