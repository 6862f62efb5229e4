//! Library side of the experiment driver: per-instance measurement,
//! seeded sweep execution, and the exact small-instance oracle suite.

pub mod measure;
pub mod oracle;
pub mod sweep;

pub use measure::{measure_instance, MeasureOpts, ResultRow};
pub use oracle::{run_oracle_suite, OracleReport};
pub use sweep::{run_sweep, ExperimentConfig, Model, OutputFormat};
