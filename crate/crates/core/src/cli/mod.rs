//! Run orchestration: configuration files, single runs, sweeps and run
//! comparison.

mod compare;
mod config;
mod output;
pub mod presets;
mod run;

pub use compare::{compare_runs, CompareReport, SnapshotComparison};
pub use config::{
    build_initial_state, parse_config, parse_config_str, GridSection, InitialStateSection,
    OutputSection, PotentialSection, PropagationSection, RunConfig, ScheduleSection,
    SuperpositionTerm, SweepSection,
};
pub use output::{read_snapshot, Snapshot};
pub use run::{run, sweep, RunManifest, RunSummary, SweepManifest, OUTPUT_ROOT_ENV};
