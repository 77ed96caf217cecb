use std::io::Write;

use clap::Parser;
use hqds_cli::{run, Cli};

fn main() {
    let outcome = run(Cli::parse());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(outcome.code);
}
