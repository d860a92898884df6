use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use fracbilevel_cli::commands::EXIT_INPUT;
use fracbilevel_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    }
    let report = run(&cli.command, &cli.global);
    let machine = report.machine();
    // a closed pipe must not change the exit code
    let mut out = std::io::stdout().lock();
    let _ = write!(out, "{}\n-- summary --\n{machine}", report.human());
    let _ = out.flush();
    if let Some(path) = &cli.global.report {
        if let Err(e) = std::fs::write(path, &machine) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    }
    ExitCode::from(report.exit_code as u8)
}
