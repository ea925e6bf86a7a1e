//! Parameter and scenario ingestion, and serialization of completed arcs.

mod doc;
mod output;
mod params;
mod scenario;

pub use doc::ParseError;
pub use output::{
    emit_plot_data, fmt_real, read_events, write_events, write_timeseries, EventRow, EVENTS_HEADER,
};
pub use params::load_params;
pub use scenario::{load_scenario, Scenario, ScenarioError, TherapyEvent};
