use clap::Parser;

use pulsebloch_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("pulsebloch: {err}");
        std::process::exit(err.exit_code());
    }
}
