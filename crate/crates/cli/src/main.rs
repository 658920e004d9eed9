use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ramanpump::{execute, output_dir, parse_config, CliError, Command, GridSpec};

#[derive(Parser)]
#[command(name = "ramanpump", version, about = "IR-pumped coherent Raman model: spectra, susceptibilities, enhancement and master-equation checks")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Sampled emission spectrum and its line model
    Spectrum(RunArgs),
    /// Coherent and thermal vibrational quanta
    Coherence(RunArgs),
    /// χ³ at both coherent lines over a detuning grid
    Chi3(RunArgs),
    /// Stokes cross-section and the χ³ it implies
    Xsection(RunArgs),
    /// Phase matching and ensemble enhancement factor
    Enhance(RunArgs),
    /// Master-equation comparison table (exit 3 on failure)
    Validate(RunArgs),
    /// Parameter sweep as a long-format CSV
    Sweep(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    /// Output directory
    #[arg(long, env = "RAMANPUMP_OUT")]
    out: Option<PathBuf>,
    /// Worker threads for sweeps and scans
    #[arg(long)]
    jobs: Option<usize>,
    /// Spectrum grid as MIN,MAX,POINTS in eV
    #[arg(long, value_parser = GridSpec::parse)]
    grid: Option<GridSpec>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (command, args) = match cli.command {
        Sub::Spectrum(a) => (Command::Spectrum, a),
        Sub::Coherence(a) => (Command::Coherence, a),
        Sub::Chi3(a) => (Command::Chi3, a),
        Sub::Xsection(a) => (Command::Xsection, a),
        Sub::Enhance(a) => (Command::Enhance, a),
        Sub::Validate(a) => (Command::Validate, a),
        Sub::Sweep(a) => (Command::Sweep, a),
    };
    match run(command, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ramanpump {}: {e}", command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command, args: &RunArgs) -> Result<(), CliError> {
    if args.jobs == Some(0) {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    let mut cfg = parse_config(&args.config)?;
    if let Some(g) = args.grid {
        cfg.output.grid = Some(g);
        cfg.check()?;
    }
    let dir = output_dir(args.out.as_deref(), &cfg);
    cfg.output.dir = Some(dir.clone());
    let result = execute(command, &cfg, &dir, args.jobs);
    if command == Command::Validate {
        print_table(&dir);
    }
    for path in result? {
        println!("{}", path.display());
    }
    Ok(())
}

fn print_table(dir: &std::path::Path) {
    if let Ok(text) = std::fs::read_to_string(dir.join("validate.csv")) {
        for line in text.lines() {
            let cells: Vec<&str> = line.split(',').collect();
            println!("{:<20} {:>17} {:>17} {:>17} {:>17} {:>8}", cells[0], cells[1], cells[2], cells[3], cells[4], cells[5]);
        }
    }
}
