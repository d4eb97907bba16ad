use std::path::PathBuf;
use std::process::ExitCode;

use catbell::describe::describe;
use catbell::{run_file, CliError, Protocol, RunOverrides};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "catbell",
    about = "Cat-state Bell-test simulator",
    disable_version_flag = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Directory for the result file (overrides `output.dir`).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Master seed (overrides `seed`).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the stages of a protocol.
    Describe { protocol: String },
    /// Print the version.
    Version,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run {
            config,
            output,
            seed,
        } => {
            let overrides = RunOverrides {
                output_dir: output,
                seed,
            };
            let (record, path) = run_file(&config, &overrides)?;
            print!("{}", record.summary());
            println!("wrote {}", path.display());
        }
        Command::Describe { protocol } => {
            let p = Protocol::from_name(&protocol).ok_or(CliError::UnknownProtocol(protocol))?;
            print!("{}", describe(p).render());
        }
        Command::Version => println!("catbell {}", env!("CARGO_PKG_VERSION")),
    }
    Ok(())
}
