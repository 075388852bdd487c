use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use minflow::instance::{exit, exit_code_for_error, parse_instance, render_instance, run, InstanceFile, RunOptions, Solver};
use minflow::num::parse_rational;
use minflow::oracle::{generate_corpus, CorpusSpec};
use minflow::Rational;

#[derive(Parser)]
#[command(name = "minflow", version, about = "Exact minimum-cost flow solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print status, cost and flows.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "ssp")]
        solver: Solver,
        /// Verify the returned flow for optimality.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        check: bool,
        /// Print solver counters as `stat` lines.
        #[arg(long)]
        stats: bool,
        /// Cross-check against exhaustive search (small instances only).
        #[arg(long)]
        oracle: bool,
        /// Slack for Orlin's algorithm, in (0, 1/n].
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: Option<Rational>,
    },
    /// Write seeded random instances to a directory.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_epsilon(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn solve(file: PathBuf, opts: RunOptions, stats: bool) -> i32 {
    let text = match fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return exit::INTERNAL;
        }
    };
    let inst = match parse_instance(&text) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return exit::PARSE;
        }
    };
    match run(&inst, &opts) {
        Ok(report) => {
            print!("{}", report.render(stats));
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for_error(&e)
        }
    }
}

fn generate(seed: u64, count: usize, out: PathBuf) -> i32 {
    if let Err(e) = fs::create_dir_all(&out) {
        eprintln!("error: {}: {e}", out.display());
        return exit::INTERNAL;
    }
    let (corpus, _) = generate_corpus(seed, count, &CorpusSpec::default());
    for (i, inst) in corpus.into_iter().enumerate() {
        let file = InstanceFile {
            net: inst.net,
            balances: inst.balances,
            name: Some(format!("seed {seed} instance {i}")),
            comments: Vec::new(),
        };
        let path = out.join(format!("instance-{i:05}.min"));
        if let Err(e) = fs::write(&path, render_instance(&file)) {
            eprintln!("error: {}: {e}", path.display());
            return exit::INTERNAL;
        }
    }
    exit::SUCCESS
}

fn main() -> ExitCode {
    let code = match Cli::parse().command {
        Command::Solve {
            file,
            solver,
            check,
            stats,
            oracle,
            epsilon,
        } => solve(
            file,
            RunOptions {
                solver,
                check,
                oracle,
                epsilon,
            },
            stats,
        ),
        Command::Generate { seed, count, out } => generate(seed, count, out),
    };
    ExitCode::from(code as u8)
}
