use std::fmt::Write as _;

use girthforge::memory::{minimize_memory, MinimizeOptions};
use girthforge::{
    girth_qc, greedy_search, min_lifting_degree, BaseColumnStrategy, ExponentMatrix, SearchConfig,
    SearchOutcome, SearchStats, SearchStatus, SmcSpec,
};
use serde::Serialize;

use crate::artifacts::Run;
use crate::failure::{CliResult, Failure};
use crate::{SearchArgs, SearchTarget};

#[derive(Debug, Serialize)]
pub struct SearchDoc {
    pub status: SearchStatus,
    pub target_girth: usize,
    pub lifting_degree: Option<u64>,
    pub spec: Option<SmcSpec>,
    pub matrix: Option<ExponentMatrix>,
    /// Girth of the result according to relation enumeration.
    pub girth_qc: Option<String>,
    pub stats: SearchStats,
}

pub fn config(target: &SearchTarget, cols: usize, lifting_degree: u64) -> CliResult<SearchConfig> {
    if !target.girth.is_multiple_of(2) || !(4..=12).contains(&target.girth) {
        return Err(Failure::validation(format!(
            "girth must be even and between 4 and 12, got {}",
            target.girth
        )));
    }
    let mut cfg = SearchConfig::new(target.m, cols, lifting_degree, target.girth / 2);
    cfg.backtrack_base = target.backtrack_base;
    cfg.backtrack_multipliers = target.backtrack_gamma;
    if target.literal {
        cfg = cfg.literal();
    }
    if let Some(p1) = &target.base_column {
        cfg.base_column_strategy = BaseColumnStrategy::Fixed(p1.clone());
    }
    cfg.use_gamma_bound = target.gamma_bound;
    cfg.exhaust_limit = target.exhaust_limit;
    cfg.branch_limit = target.branch_limit;
    if target.min_n.is_none() {
        cfg.validate()?;
    }
    Ok(cfg)
}

/// Runs the search for `cols` columns at the fixed lifting degree or over
/// the `--min-N` range.
pub fn search(target: &SearchTarget, cols: usize) -> CliResult<SearchDoc> {
    let (lifting_degree, outcome): (Option<u64>, SearchOutcome) =
        match (target.lifting_degree, target.min_n) {
            (Some(n), _) => {
                let cfg = config(target, cols, n)?;
                let outcome = greedy_search(&cfg)?;
                (Some(n), outcome)
            }
            (None, Some((lo, hi))) => {
                let cfg = config(target, cols, hi.max(cols as u64))?;
                min_lifting_degree(&cfg, lo..=hi)?
            }
            (None, None) => return Err(Failure::validation("one of --N and --min-N is required")),
        };
    let girth_qc = match &outcome.matrix {
        Some(p) if target.girth >= 6 => Some(girth_qc(p, target.girth / 2 - 1)?.girth.to_string()),
        _ => None,
    };
    Ok(SearchDoc {
        status: outcome.status,
        target_girth: target.girth,
        lifting_degree,
        spec: outcome.spec,
        matrix: outcome.matrix,
        girth_qc,
        stats: outcome.stats,
    })
}

pub fn infeasible(doc: &SearchDoc) -> Failure {
    let degrees = match doc.lifting_degree {
        Some(n) => format!("N={n}"),
        None => "the requested lifting degrees".to_string(),
    };
    Failure::infeasible(format!(
        "no matrix of girth {} at {degrees}",
        doc.target_girth
    ))
}

fn sweep(run: &mut Run, args: &SearchArgs, (lo, hi): (u64, u64)) -> CliResult<()> {
    let target = &args.target;
    let mut csv = String::from("m,n,girth,N,m_h,v_s\n");
    for cols in lo..=hi {
        let doc = search(target, cols as usize)?;
        let (n, memory) = match (&doc.matrix, doc.lifting_degree) {
            (Some(p), Some(n)) => {
                let memory = if target.girth >= 6 {
                    let options = MinimizeOptions {
                        seed: run.seed,
                        ..Default::default()
                    };
                    minimize_memory(p, target.girth / 2 - 1, &options)?.memory_order
                } else {
                    p.max_entry() - p.min_entry()
                };
                (n.to_string(), Some(memory))
            }
            _ => (String::new(), None),
        };
        let (m_h, v_s) = match memory {
            Some(mh) => (mh.to_string(), ((mh + 1) * cols).to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(csv, "{},{cols},{},{n},{m_h},{v_s}", target.m, target.girth)
            .expect("writing to a string");
    }
    let name = if args.out == "spec.json" {
        "sweep.csv"
    } else {
        &args.out
    };
    run.write(name, csv.as_bytes())?;
    Ok(())
}

pub fn run(run: &mut Run, args: &SearchArgs) -> CliResult<()> {
    if let Some(range) = args.sweep_n {
        return sweep(run, args, range);
    }
    let doc = search(&args.target, args.target.n)?;
    run.write_json(&args.out, &doc)?;
    match doc.status {
        SearchStatus::Found => {
            if let Some(spec) = &doc.spec {
                println!(
                    "found N={} base column {:?} multipliers {:?}",
                    spec.lifting_degree(),
                    spec.base_column(),
                    spec.multipliers()
                );
            }
            Ok(())
        }
        SearchStatus::Infeasible => Err(infeasible(&doc)),
    }
}
