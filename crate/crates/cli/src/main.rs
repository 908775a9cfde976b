use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod report;

/// Generate, compile, reduce and check branching-program instances.
#[derive(Debug, Parser)]
#[command(name = "bpreduce", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Direct,
    Framework,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    /// Weighted LCS over weighted sequence files.
    Wlcs,
    /// Plain LCS; sequences are written expanded.
    Lcs,
    /// Weighted LCS of K party gadgets.
    Klcs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a seeded random branching program.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        width: usize,
        /// The program gets 2^t + 1 layers.
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compile a formula into a width-5 branching program.
    CompileFormula {
        /// Formula file, or `-` for standard input.
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Reduce a program to sequence files plus a manifest.
    Reduce {
        program: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::Direct)]
        engine: Engine,
        #[arg(long, value_enum, default_value_t = Measure::Wlcs)]
        measure: Measure,
        /// Number of parties for `--measure klcs`.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Full assignment as a bit string, for `--measure klcs`.
        #[arg(long)]
        assignment: Option<String>,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = bpreduce::measures::DEFAULT_MAX_EXPAND)]
        max_expand: u64,
    },
    /// Compute the measure of sequence files.
    Solve {
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Measure::Wlcs)]
        measure: Measure,
        /// Manifest written by `reduce`; adds the threshold verdict.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compare the threshold test with brute force over a seeded corpus.
    Verify {
        #[arg(long, value_enum, default_value_t = Engine::Direct)]
        engine: Engine,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 1000)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        /// Refuse instances with more variables than this.
        #[arg(long, default_value_t = 24)]
        max_vars: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compare emitted lengths with their closed forms.
    Stats {
        program: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::Direct)]
        engine: Engine,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Exit statuses.
pub mod status {
    pub const DISAGREEMENT: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const REFUSED: u8 = 3;
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { status::USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen { n, width, t, density, seed, out } => commands::gen(n, width, t, density, seed, out.as_deref()),
        Command::CompileFormula { input, out } => commands::compile_formula(&input, out.as_deref()),
        Command::Reduce { program, engine, measure, k, assignment, out_dir, max_expand } => {
            commands::reduce(&commands::ReduceConfig {
                program,
                engine,
                measure,
                parties: k,
                assignment,
                out_dir,
                max_expand,
            })
        }
        Command::Solve { files, measure, manifest, report } => {
            commands::solve(&files, measure, manifest.as_deref(), report.as_deref())
        }
        Command::Verify { engine, count, seed, jobs, max_vars, report } => {
            commands::verify(engine, count, seed, jobs, max_vars, report.as_deref())
        }
        Command::Stats { program, engine, report } => commands::stats(&program, engine, report.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let refused = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<bpreduce::Error>(), Some(bpreduce::Error::Refused(_))));
            ExitCode::from(if refused { status::REFUSED } else { status::USAGE })
        }
    }
}
