//! Runs a sweep described by a TOML config and writes the same artifacts as
//! `gelfand sweep`.
//!
//!     cargo run --release --example run_config -- configs/liouville_n2.toml [out_dir]

use std::path::PathBuf;

use gelfand::report::{summary_text, write_sweep_artifacts};
use gelfand::{sweep, RunConfig};

fn main() -> gelfand::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| "configs/liouville_n2.toml".into()));
    let cfg = RunConfig::load(&path)?;
    let out = args.next().map_or_else(|| cfg.output.dir.clone(), PathBuf::from);

    let f = cfg.build_nonlinearity()?;
    let curve = sweep(&f, cfg.dimension, &cfg.a_grid()?, &cfg.sweep_options(None))?;
    for written in write_sweep_artifacts(&curve, &out)? {
        println!("wrote {}", written.display());
    }
    print!("{}", summary_text(&curve));
    Ok(())
}
