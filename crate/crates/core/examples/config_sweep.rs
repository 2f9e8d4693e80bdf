//! Loads a TOML run description and prints the thickness sweep as CSV,
//! exactly as `vdw sweep` would.

use std::path::PathBuf;

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/water_film_sweep.toml")
        });
    let cfg = match lifshitz::cli::parse_config(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            std::process::exit(1);
        }
    };
    match lifshitz::cli::sweep_csv(&cfg) {
        Ok(csv) => print!("{csv}"),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
