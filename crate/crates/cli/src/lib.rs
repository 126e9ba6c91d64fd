//! Verification campaigns over siftlab-core: configuration, execution,
//! CSV/JSON reports and plot tables.

pub mod campaign;
pub mod config;
pub mod error;
pub mod plot;
pub mod report;

pub use campaign::{resolve_workers, run_campaign, run_campaign_to, RunOptions};
pub use config::{Campaign, RunConfig, Tolerances};
pub use error::{CliError, Result};
pub use plot::{emit_plot_data, plot_points, PlotPoint, Selector};
pub use report::{summary_matches_csv, ReportBundle, Status, Summary};
