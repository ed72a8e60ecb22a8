use serde::Serialize;

use crate::artifacts::Run;
use crate::failure::{CliResult, Failure};
use crate::{Cli, Command};

mod inspect;
mod minimize;
mod pipeline;
mod report;
mod search;
mod simulate;

#[derive(Serialize)]
struct Snapshot<'a, T: Serialize> {
    jobs: usize,
    seed: u64,
    args: &'a T,
}

fn start<T: Serialize>(cli: &Cli, name: &str, args: &T) -> CliResult<Run> {
    let config = serde_json::to_value(Snapshot {
        jobs: cli.jobs,
        seed: cli.seed,
        args,
    })
    .map_err(|e| Failure::validation(e.to_string()))?;
    Run::new(cli.out_dir.clone(), cli.seed, name, config)
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Search(args) => {
            let mut run = start(cli, "search", args)?;
            let status = search::run(&mut run, args);
            run.finish()?;
            status
        }
        Command::MinimizeMh(args) => {
            let mut run = start(cli, "minimize-mh", args)?;
            minimize::run(&mut run, args)?;
            run.finish().map(drop)
        }
        Command::Expand(args) => {
            let mut run = start(cli, "expand", args)?;
            inspect::expand(&mut run, args)?;
            run.finish().map(drop)
        }
        Command::Girth(args) => {
            let mut run = start(cli, "girth", args)?;
            inspect::girth(&mut run, args)?;
            run.finish().map(drop)
        }
        Command::Simulate(args) => {
            let mut run = start(cli, "simulate", args)?;
            simulate::run(&mut run, args)?;
            run.finish().map(drop)
        }
        Command::Pipeline(args) => {
            let mut run = start(cli, "pipeline", args)?;
            let status = pipeline::run(&mut run, args);
            run.finish()?;
            status
        }
        Command::Report(args) => report::run(args),
    }
}
