use clap::{Parser, Subcommand};

use fockbell_cli::{execute, RunArgs};

#[derive(Parser)]
#[command(
    name = "fockbell",
    version,
    about = "Linear-optics Fock simulator and four-party Bell analyzer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scheme or circuit file and print a report.
    Run(RunArgs),
}

fn main() {
    let cli = Cli::parse();
    let Command::Run(args) = cli.command;
    match execute(&args) {
        Ok(out) => print!("{out}"),
        Err((e, code)) => {
            eprintln!("error: {e}");
            std::process::exit(code);
        }
    }
}
