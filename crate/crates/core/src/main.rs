use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use cswen_core::harness::output::report_csv;
use cswen_core::harness::{
    convergence_study, default_ladder, measure_errors, problem, reference_1d, registry, run_problem, write_outputs, write_report,
    Cells, MeshKind, OutputFormat, ProblemKind, ProblemSpec, ReferenceData, RunConfig,
};
use cswen_core::limiter::LimiterVariant;
use cswen_core::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

/// Discontinuous Galerkin solver with compact subcell WENO limiting.
#[derive(Parser, Debug)]
#[command(name = "cswen", version)]
struct Cli {
    /// List the registered problems and exit.
    #[arg(long, global = true)]
    list: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one problem and write its solution and metadata.
    Run(Opts),
    /// Error table over a refinement ladder.
    Convergence {
        #[command(flatten)]
        opts: Opts,
        /// Comma-separated cell counts, e.g. 20,40,80.
        #[arg(long, value_delimiter = ',')]
        ladder: Option<Vec<usize>>,
    },
    /// L1 error of the CSWENO and parent WENO limiters side by side.
    Compare(Opts),
    /// List the registered problems.
    List,
}

#[derive(Args, Debug, Default, Clone)]
struct Opts {
    #[arg(long)]
    problem: Option<String>,
    /// Polynomial degree: 1, 2 or 3.
    #[arg(long)]
    order: Option<usize>,
    /// K or KxK.
    #[arg(long)]
    cells: Option<String>,
    /// cswen, weno or none.
    #[arg(long)]
    limiter: Option<String>,
    /// on or off.
    #[arg(long)]
    characteristic: Option<String>,
    /// uniform or perturbed.
    #[arg(long)]
    mesh: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    tend: Option<f64>,
    #[arg(long = "indicator-ck")]
    indicator_ck: Option<f64>,
    /// on or off; defaults to the problem's setting.
    #[arg(long)]
    positivity: Option<String>,
    /// Cells of the fine-grid reference; 0 skips it.
    #[arg(long = "reference-cells")]
    reference_cells: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or grid.
    #[arg(long)]
    format: Option<String>,
    /// key=value file mirroring the flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
        map.insert(k.trim().trim_start_matches("--").replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

fn on_off(key: &str, v: &str) -> Result<bool, Error> {
    match v {
        "on" | "true" | "yes" => Ok(true),
        "off" | "false" | "no" => Ok(false),
        _ => Err(usage(format!("{key} must be on or off, got '{v}'"))),
    }
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T, Error> {
    v.parse().map_err(|_| usage(format!("bad value for {key}: '{v}'")))
}

/// Flags merged over the config file.
struct Settings {
    spec: ProblemSpec,
    run: RunConfig,
    reference_cells: Option<usize>,
    out: PathBuf,
    format: OutputFormat,
}

fn settings(opts: &Opts) -> Result<Settings, Error> {
    let file = match &opts.config {
        Some(p) => read_config(p)?,
        None => BTreeMap::new(),
    };
    const KNOWN: [&str; 15] = [
        "problem", "order", "cells", "limiter", "characteristic", "mesh", "seed", "cfl", "tend",
        "indicator-ck", "positivity", "reference-cells", "out", "format", "config",
    ];
    if let Some(k) = file.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(usage(format!("unknown config key '{k}'")));
    }
    let get = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.get(key).cloned());
    let num = |flag: Option<String>, key: &str| flag.or_else(|| file.get(key).cloned());

    let id = get(&opts.problem, "problem").ok_or_else(|| usage("--problem is required"))?;
    let spec = problem(&id)?;
    let mut run = RunConfig::default();
    if let Some(v) = num(opts.order.map(|v| v.to_string()), "order") {
        run.degree = parse("order", &v)?;
    }
    if let Some(v) = get(&opts.cells, "cells") {
        run.cells = Some(v.parse::<Cells>()?);
    }
    if let Some(v) = get(&opts.limiter, "limiter") {
        run.limiter = match v.as_str() {
            "none" => None,
            s => Some(s.parse::<LimiterVariant>()?),
        };
    }
    if let Some(v) = get(&opts.characteristic, "characteristic") {
        run.characteristic = on_off("characteristic", &v)?;
    }
    if let Some(v) = get(&opts.mesh, "mesh") {
        run.mesh = v.parse::<MeshKind>()?;
    }
    if let Some(v) = num(opts.seed.map(|v| v.to_string()), "seed") {
        run.seed = parse("seed", &v)?;
    }
    if let Some(v) = num(opts.cfl.map(|v| v.to_string()), "cfl") {
        run.cfl = Some(parse("cfl", &v)?);
    }
    if let Some(v) = num(opts.tend.map(|v| v.to_string()), "tend") {
        run.t_end = Some(parse("tend", &v)?);
    }
    if let Some(v) = num(opts.indicator_ck.map(|v| v.to_string()), "indicator-ck") {
        run.indicator_ck = parse("indicator-ck", &v)?;
    }
    if let Some(v) = get(&opts.positivity, "positivity") {
        run.positivity = Some(on_off("positivity", &v)?);
    }
    let reference_cells = num(opts.reference_cells.map(|v| v.to_string()), "reference-cells")
        .map(|v| parse::<usize>("reference-cells", &v))
        .transpose()?;
    let out = opts
        .out
        .clone()
        .or_else(|| file.get("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("output"));
    let format = match get(&opts.format, "format") {
        Some(v) => v.parse()?,
        None => OutputFormat::Grid,
    };
    Ok(Settings { spec, run, reference_cells, out, format })
}

fn reference_for(s: &Settings, t_end: f64) -> Result<Option<ReferenceData>, Error> {
    match (&s.spec.kind, s.reference_cells) {
        (_, Some(0)) => Ok(None),
        (ProblemKind::OneD(p), cells) if !p.reference.is_exact() => Ok(Some(reference_1d(&s.spec, t_end, cells)?)),
        _ => Ok(None),
    }
}

fn cmd_run(opts: &Opts) -> Result<(), Error> {
    let s = settings(opts)?;
    let result = run_problem(&s.spec, &s.run, None)?;
    let reference = reference_for(&s, result.t_end)?;
    let err = measure_errors(&s.spec, &result, reference.as_ref())?;
    let files = write_outputs(&s.out, &s.spec, &result, reference.as_ref(), err, s.format)?;
    let stats = result.sim.stats();
    print!(
        "{} P{} limiter={} t={} steps={} troubled_mean={:.2}",
        s.spec.id,
        s.run.degree,
        s.run.limiter_name(),
        result.t_end,
        stats.steps,
        stats.mean_troubled()
    );
    if let Some((e, against)) = err {
        print!(" l1={:.3e} linf={:.3e} ({against})", e.l1, e.linf);
    }
    println!();
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn cmd_convergence(opts: &Opts, ladder: Option<&[usize]>) -> Result<(), Error> {
    let s = settings(opts)?;
    let ladder = ladder.map_or_else(|| default_ladder(s.spec.dimension()), <[usize]>::to_vec);
    let report = convergence_study(&s.spec, &s.run, &ladder)?;
    print!("{}", report_csv(&report));
    let path = s.out.join(format!("{}_P{}_{}_convergence.csv", s.spec.id, s.run.degree, s.run.limiter_name()));
    write_report(&path, &report)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_compare(opts: &Opts) -> Result<(), Error> {
    let s = settings(opts)?;
    let t_end = s.run.t_end.unwrap_or(s.spec.t_end);
    let reference = reference_for(&s, t_end)?;
    let mut csv = String::from("problem,order,limiter,l1,linf,against\n");
    println!("{:<18} {:>5} {:>8} {:>12} {:>12}", "problem", "order", "limiter", "l1", "linf");
    for variant in [LimiterVariant::Cswen, LimiterVariant::Weno] {
        let cfg = RunConfig { limiter: Some(variant), ..s.run.clone() };
        let r = run_problem(&s.spec, &cfg, None)?;
        let Some((e, against)) = measure_errors(&s.spec, &r, reference.as_ref())? else {
            return Err(usage(format!("'{}' has no exact or reference solution to compare against", s.spec.id)));
        };
        println!("{:<18} {:>5} {:>8} {:>12.4e} {:>12.4e}", s.spec.id, cfg.degree, variant.as_str(), e.l1, e.linf);
        csv.push_str(&format!(
            "{},{},{},{:.12e},{:.12e},{against}\n",
            s.spec.id,
            cfg.degree,
            variant.as_str(),
            e.l1,
            e.linf
        ));
    }
    std::fs::create_dir_all(&s.out)?;
    let path = s.out.join(format!("{}_compare.csv", s.spec.id));
    std::fs::write(&path, csv)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_list() {
    for p in registry() {
        println!("{:<20} {}D  t={:<8.4} {}", p.id, p.dimension(), p.t_end, p.description);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.list {
        cmd_list();
        return ExitCode::SUCCESS;
    }
    let result = match &cli.command {
        Some(Command::Run(o)) => cmd_run(o),
        Some(Command::Convergence { opts, ladder }) => cmd_convergence(opts, ladder.as_deref()),
        Some(Command::Compare(o)) => cmd_compare(o),
        Some(Command::List) => {
            cmd_list();
            Ok(())
        }
        None => {
            eprintln!("error: no subcommand given (try --help)");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::InvalidArgument(_) => ExitCode::from(EXIT_USAGE),
                _ => ExitCode::from(EXIT_RUNTIME),
            }
        }
    }
}
