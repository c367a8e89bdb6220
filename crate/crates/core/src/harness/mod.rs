//! Problem registry, error norms, references and output files behind the `cswen` binary.

pub mod norms;
pub mod output;
pub mod problems;
pub mod reference;
pub mod run;

pub use norms::{
    convergence_study, default_ladder, error_norms_1d, error_norms_2d, measure_errors, ErrorNorms, ErrorReport, ErrorRow,
};
pub use output::{write_outputs, write_report, OutputFormat};
pub use problems::{problem, registry, ProblemKind, ProblemSpec, Reference1D, PROBLEM_IDS};
pub use reference::{reference_1d, ReferenceData};
pub use run::{
    min_density_pressure_1d, min_density_pressure_2d, run_problem, setup, Cells, MeshKind, RunConfig, RunResult,
    Simulation,
};
