//! Configuration files, canonical JSON artifacts and CSV tables.

pub mod config;
pub mod json;
pub mod table;

pub use config::{BackgroundSpec, PotentialSpec, RunConfig};
pub use json::{data_from_json, data_to_json, format_g17, load_data, report_to_json, save_data, to_canonical_string};
pub use table::{read_columns, write_columns};
