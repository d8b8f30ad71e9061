//! Closed-loop scenario runner, accuracy metrics, parameter sweeps and
//! output files.

mod config;
mod metrics;
pub mod output;
mod run;
mod sweep;

pub use config::{FilterKind, MapSpec, ScenarioConfig, StartPose, TrackPreset};
pub use metrics::{
    classify_divergence, compute_gamma, count_velocity_excursions, final_lap, trace_gamma, TraceSample,
    DIVERGENCE_THRESHOLD, EXCURSION_MARGIN,
};
pub use run::{run_scenario, start_state, AnyFilter, CoreTimes, CorrectionEvent, RunResult};
pub use sweep::{repeat_seed, summarize, sweep, CellSummary, SweepAxis, SweepRecord};
