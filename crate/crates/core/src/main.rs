use std::io::{self, BufReader};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cmlui::harness::{self, Input, LineSource, RunOptions, ScriptDriver, DEMOS};
use cmlui::Error;

#[derive(Parser)]
#[command(name = "cmlui", version, about = "Run the bundled windowing demos headlessly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a demo and write its draw trace.
    Run {
        demo: String,
        /// Input script; without one the demo gets no input.
        #[arg(long)]
        script: Option<PathBuf>,
        /// Read script lines from stdin and print trace lines as they appear.
        #[arg(long, conflicts_with = "script")]
        interactive: bool,
        /// Trace output file; stdout when absent.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Resource manifest; the built-in one when absent.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Virtual time to run to.
        #[arg(long)]
        max_ms: Option<u64>,
    },
    /// List the demos.
    List,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match cli.command {
        Command::List => {
            for d in DEMOS {
                println!("{:<10} {}", d.name, d.about);
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            demo,
            script,
            interactive,
            trace,
            manifest,
            seed,
            max_ms,
        } => match run(&demo, script, interactive, trace, manifest, seed, max_ms) {
            Ok(code) => ExitCode::from(code as u8),
            Err(e) => {
                eprintln!("cmlui: {e}");
                ExitCode::from(harness::exit_status(&e) as u8)
            }
        },
    }
}

fn run(
    demo: &str,
    script: Option<PathBuf>,
    interactive: bool,
    trace: Option<PathBuf>,
    manifest: Option<PathBuf>,
    seed: u64,
    max_ms: Option<u64>,
) -> Result<i32, Error> {
    let demo = harness::find_demo(demo)?;
    let input = if interactive {
        let source = LineSource::new(BufReader::new(io::stdin()))
            .with_prompt(Box::new(io::stderr()));
        let driver = ScriptDriver::new(Box::new(source), max_ms).echo_trace(Box::new(io::stdout()));
        Input::Driver(Box::new(driver))
    } else {
        let text = match &script {
            Some(p) => std::fs::read_to_string(p)?,
            None => String::new(),
        };
        Input::Script(text)
    };
    let outcome = harness::run_demo(
        demo,
        RunOptions {
            input,
            manifest,
            seed,
            max_ms,
        },
    )?;
    match (&trace, interactive) {
        (Some(p), _) => std::fs::write(p, &outcome.trace)?,
        (None, false) => print!("{}", outcome.trace),
        (None, true) => {}
    }
    outcome.result
}
