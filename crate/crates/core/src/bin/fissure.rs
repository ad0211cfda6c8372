use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fissure::output::{parse_report_csv, report_diff, Tolerance};
use fissure::pipeline::run_config_file;
use fissure::verify::run_invariant_suite;
use fissure::Error;

/// Tangential flow and transport on fissure surfaces.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML configuration.
    Run { config: PathBuf },
    /// Check the invariant suite on small built-in meshes.
    Verify,
    /// Compare two report CSV files within tolerances.
    ReportDiff {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = Tolerance::default().rel)]
        rel: f64,
        #[arg(long, default_value_t = Tolerance::default().abs)]
        abs: f64,
    },
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config } => match run_config_file(&config) {
            Ok(res) => {
                let r = res.report.to_cgs();
                println!("{} triangles", res.t.n_triangles());
                println!("m_u            ({:.6e}, {:.6e}, {:.6e}) cm/s", r.m_u.x, r.m_u.y, r.m_u.z);
                println!("U_curv         {:.6e} erg/s", r.u_curv);
                println!("U_fric         {:.6e} erg/s", r.u_fric);
                println!("U_grav         {:.6e} erg/s", r.u_grav);
                println!("balance        {:.6e} erg/s", r.balance);
                println!("mean exit time {:.6e} s", r.mean_exit_time);
                if r.stranded > 0 {
                    println!("{} triangles never drain", r.stranded);
                }
                if !res.forest.is_forest {
                    println!("flow graph has a cycle through {:?}", res.forest.cycle);
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
        Command::Verify => match run_invariant_suite() {
            Ok(checks) => {
                let mut ok = true;
                for c in &checks {
                    println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                    ok &= c.passed;
                }
                if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(3)
                }
            }
            Err(e) => fail(&e),
        },
        Command::ReportDiff { a, b, rel, abs } => {
            let read = |p: &PathBuf| {
                std::fs::read_to_string(p)
                    .map_err(|e| Error::Io { path: p.clone(), source: e })
                    .and_then(|t| parse_report_csv(&t))
            };
            let (ra, rb) = match (read(&a), read(&b)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(e), _) | (_, Err(e)) => return fail(&e),
            };
            let diffs = report_diff(&ra, &rb, Tolerance { rel, abs });
            for d in &diffs {
                println!("{d}");
            }
            if diffs.is_empty() {
                println!("reports agree");
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
