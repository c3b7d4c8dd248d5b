//! Configuration files, figure sweeps, comparisons and CSV output.

pub mod compare;
pub mod config;
pub mod invariants;
pub mod sweep;
pub mod table;

pub use compare::{compare, z_score, ComparisonRecord};
pub use invariants::{run_invariant_suite, CheckOutcome};
pub use config::{load_config, parse_config, KernelChoice, ScenarioConfig, SchemeChoice, DEFAULT_SEED, DEFAULT_TRIALS};
pub use sweep::{
    figure_preset, linear_grid, load_sweep_spec, log_grid, parse_sweep_spec, run_sweep, scenario_at, InterfererMix,
    Outputs, Series, SweepSpec, SweepVariable,
};
pub use table::{write_commented_csv, SweepRow, SweepTable};
