//! File formats: PGM images, map files and histogram CSV.

mod pgm;
mod text;

pub use pgm::{read_pgm, write_pgm, write_pgm_ascii};
pub use text::{hist_csv, parse_map_file, write_map_file};
