mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, Output, RunConfig};
use commands::{InputError, Session};
use report::{Outcome, Render, Report};

const EXIT_BUDGET: u8 = 2;
const EXIT_CONDITIONS: u8 = 3;
const EXIT_INPUT: u8 = 4;
const EXIT_LOCAL_OPTIMUM: u8 = 5;
const EXIT_DEAD_END: u8 = 6;

fn emit<T: Serialize + Render>(report: &Report<T>) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match report.config.output {
        Output::Json => {
            serde_json::to_writer_pretty(&mut out, report)?;
            writeln!(out)?;
        }
        Output::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(report.result.csv_header())?;
            for row in report.result.csv_rows() {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Output::Table => write!(out, "{}", report.result.table())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve { common, m } => {
            let s = Session::load(&common)?;
            let config = RunConfig { m: Some(m), ..RunConfig::new("solve", &common) };
            emit(&Report::new(config, s.solve(m, common.budget)?))?;
        }
        Command::Greedy { common, m, anchor } => {
            let s = Session::load(&common)?;
            let config = RunConfig {
                m: Some(m),
                start: anchor.map(|a| vec![a]),
                ..RunConfig::new("greedy", &common)
            };
            emit(&Report::new(config, s.greedy(m, anchor, common.budget)?))?;
        }
        Command::Cover { common, seed } => {
            let s = Session::load(&common)?;
            let config = RunConfig { seed, ..RunConfig::new("cover", &common) };
            emit(&Report::new(config, s.cover(seed, common.budget)?))?;
        }
        Command::Family { common, rank, limit } => {
            let s = Session::load(&common)?;
            let config = RunConfig::new("family", &common).with_rank(&rank);
            emit(&Report::new(config, s.family(&rank, common.budget, limit)?))?;
        }
        Command::Greedoid { common, rank, build } => {
            let s = Session::load(&common)?;
            let config = RunConfig::new("greedoid", &common).with_rank(&rank).with_build(&build);
            emit(&Report::new(config, s.greedoid(&rank, &build, common.budget)?))?;
        }
        Command::Search { common, rank, build, m, start, table } => {
            let s = Session::load(&common)?;
            let config = RunConfig { m: Some(m), start: start.clone(), ..RunConfig::new("search", &common) }
                .with_rank(&rank)
                .with_build(&build);
            let result = s.search(&rank, &build, m, start.as_deref(), table, common.budget)?;
            let code = match result.outcome {
                Outcome::Optimal => 0,
                Outcome::LocalOptimum => EXIT_LOCAL_OPTIMUM,
                Outcome::DeadEnd => EXIT_DEAD_END,
            };
            emit(&Report::new(config, result))?;
            return Ok(code);
        }
        Command::Eval { common, set, walks, seed } => {
            let s = Session::load(&common)?;
            let config = RunConfig { start: Some(set.clone()), seed, ..RunConfig::new("eval", &common) };
            emit(&Report::new(config, s.eval(&set, walks, seed)?))?;
        }
    }
    Ok(0)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use consensus_targets::Error as E;
    if err.downcast_ref::<InputError>().is_some() {
        return EXIT_INPUT;
    }
    match err.downcast_ref::<E>() {
        Some(E::BudgetExceeded { .. }) => EXIT_BUDGET,
        Some(E::ConditionsNotMet { .. } | E::Degenerate(_)) => EXIT_CONDITIONS,
        Some(_) => EXIT_INPUT,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
