use std::io::Write;
use std::time::Instant;

use clap::Parser;

use weylglue::cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = execute(cli);
    let elapsed = started.elapsed();

    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stderr.write_all(outcome.stderr.as_bytes());
    // Wall time goes to stderr so stdout stays byte-stable across runs.
    if outcome.show_timing {
        let _ = writeln!(stderr, "elapsed: {:.3}s", elapsed.as_secs_f64());
    }
    std::process::exit(outcome.exit);
}
