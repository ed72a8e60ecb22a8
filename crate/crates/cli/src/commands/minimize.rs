use girthforge::memory::{minimize_memory, minimize_memory_exact, LiftAssignment, MinimizeOptions};
use girthforge::{girth_conv, ConvCodeSpec, ExponentMatrix};
use serde::Serialize;

use crate::artifacts::{code_from_json, relation_bound, LoadedCode, Run};
use crate::failure::{CliResult, Failure};
use crate::MinimizeArgs;

#[derive(Debug, Serialize)]
pub struct MinimizeDoc {
    pub code: ConvCodeSpec,
    pub lifting_degree: u64,
    pub offsets: Vec<Vec<u64>>,
    pub memory_order: u64,
    pub initial_memory_order: u64,
    pub lower_bound: Option<u64>,
    pub constraint_length: u64,
    pub restarts: Option<u64>,
    pub moves: Option<u64>,
    /// Girth of the convolutional code according to relation enumeration.
    pub girth_conv: String,
}

pub struct Settings {
    pub girth: usize,
    pub exact: bool,
    pub options: MinimizeOptions,
}

pub fn minimize(p: &ExponentMatrix, settings: &Settings) -> CliResult<MinimizeDoc> {
    let bound = relation_bound(settings.girth)?;
    let n = p
        .lifting_degree()
        .ok_or_else(|| Failure::validation("matrix has no lifting degree"))?;
    let initial = p.max_entry() - p.min_entry();
    let (lift, lower_bound, restarts, moves): (LiftAssignment, _, _, _) = if settings.exact {
        (minimize_memory_exact(p, bound, 2)?, None, None, None)
    } else {
        let report = minimize_memory(p, bound, &settings.options)?;
        (
            report.best,
            Some(report.lower_bound),
            Some(report.restarts),
            Some(report.moves),
        )
    };
    let code = lift.to_conv_spec();
    let girth = girth_conv(&code, bound)?.girth;
    Ok(MinimizeDoc {
        lifting_degree: n,
        offsets: lift.offset_rows(),
        memory_order: code.memory_order(),
        initial_memory_order: initial,
        lower_bound,
        constraint_length: code.constraint_length(),
        restarts,
        moves,
        girth_conv: girth.to_string(),
        code,
    })
}

pub fn run(run: &mut Run, args: &MinimizeArgs) -> CliResult<()> {
    let value = run.read_json(&args.input)?;
    let p = match code_from_json(&value)? {
        LoadedCode::Qc(p) => p,
        LoadedCode::Conv(_) => {
            return Err(Failure::validation(
                "minimize-mh needs a matrix with a lifting degree",
            ))
        }
    };
    let settings = Settings {
        girth: args.girth,
        exact: args.exact,
        options: MinimizeOptions {
            budget: args.budget,
            patience: args.patience,
            max_start_offset: args.max_start_offset,
            seed: run.seed,
        },
    };
    let doc = minimize(&p, &settings)?;
    println!(
        "m_h {} -> {} (v_s = {})",
        doc.initial_memory_order, doc.memory_order, doc.constraint_length
    );
    run.write_json(&args.out, &doc)?;
    Ok(())
}
