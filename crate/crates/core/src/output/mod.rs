//! CSV tables and SVG plots.

pub mod csv;
pub mod svg;

pub use self::csv::{emit_csv, read_csv, to_csv_string, CsvRow};
pub use self::svg::{emit_plots, error_chart, max_chart, Frame};
