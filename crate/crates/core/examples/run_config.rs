//! Runs a TOML experiment file and writes all exports, like `fissure run`.
//!
//! ```text
//! cargo run --release --example run_config -- configs/example1-gravity.toml
//! ```

use std::path::PathBuf;

use fissure::config::ExperimentConfig;
use fissure::pipeline::run_pipeline;

fn main() {
    let path = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "configs/example1-gravity.toml".into()));
    let outcome = ExperimentConfig::load(&path).and_then(|cfg| {
        let res = run_pipeline(&cfg)?;
        Ok((cfg, res))
    });
    match outcome {
        Ok((cfg, res)) => {
            println!("{} -> {}", cfg.name, cfg.output.dir.display());
            println!("{:#?}", res.report.to_cgs());
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
