//! Experiment driver: configuration, sweeps, result files, plot scripts and
//! invariant checks.

pub mod check;
pub mod config;
pub mod counting;
pub mod export;
pub mod plot;
pub mod sweep;

pub use check::{check_record, run_checks, validate_sweep, CheckOutcome};
pub use config::ExperimentConfig;
pub use counting::{counting_statistics, CountingReport};
pub use export::{export_results, read_csv, read_json, result_rows, Format, ResultRow, COLUMNS};
pub use plot::emit_plot_script;
pub use sweep::{
    fano_crossing, pair_strokes_for_closure, run_sweep, Pairing, SweepResult, SweepRow, SweepSpec,
    TauGrid,
};
