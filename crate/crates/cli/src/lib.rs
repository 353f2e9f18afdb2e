//! Command-line harness around the `pulsebloch` core library.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

pub use args::{Cli, Command};
pub use error::{CliError, Result};

pub fn run(mut cli: Cli) -> Result<()> {
    let opts = std::mem::take(cli.command.options_mut()).resolve()?;
    match cli.command {
        Command::Evolve(_) => commands::evolve(&opts),
        Command::Qfi(_) => commands::qfi(&opts),
        Command::Sweep(_) => commands::sweep_cmd(&opts),
        Command::Reproduce { figure, .. } => commands::reproduce(figure, &opts),
        Command::OracleCheck(_) => commands::oracle_check_cmd(&opts),
    }
}
