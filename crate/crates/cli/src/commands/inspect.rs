use girthforge::{
    expand_to_binary, girth_conv, girth_oracle, girth_qc, terminated_matrix, window_matrix,
    write_alist, BinaryParityCheck, ConvCodeSpec, Girth, GirthReport,
};
use serde::Serialize;

use crate::artifacts::{code_from_json, LoadedCode, Run};
use crate::failure::{CliResult, Failure};
use crate::{ExpandArgs, GirthArgs};

pub fn binary_matrix(code: &LoadedCode, args: &ExpandArgs) -> CliResult<BinaryParityCheck> {
    let as_conv = |code: &LoadedCode| match code {
        LoadedCode::Qc(p) => ConvCodeSpec::new(p.clone()),
        LoadedCode::Conv(spec) => spec.clone(),
    };
    match (code, args.blocks, args.window) {
        (LoadedCode::Qc(p), None, None) => Ok(expand_to_binary(p)?),
        (code, Some(blocks), _) => Ok(terminated_matrix(&as_conv(code), blocks)),
        (code, None, Some(window)) => Ok(window_matrix(&as_conv(code), window)?),
        (LoadedCode::Conv(_), None, None) => Err(Failure::validation(
            "a convolutional code needs --blocks or --window to expand",
        )),
    }
}

pub fn expand(run: &mut Run, args: &ExpandArgs) -> CliResult<()> {
    let value = run.read_json(&args.input)?;
    let h = binary_matrix(&code_from_json(&value)?, args)?;
    println!(
        "{} x {} parity-check matrix, {} ones",
        h.row_count(),
        h.col_count(),
        h.ones()
    );
    run.write(&args.out, write_alist(&h).as_bytes())?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleDoc {
    /// `None` for an acyclic graph.
    pub girth: Option<usize>,
    /// Columns of the binary matrix searched.
    pub bits: usize,
    /// Whether the oracle agrees with the relation check up to `bound`.
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GirthDoc {
    pub kind: &'static str,
    /// Shortest cycle length, or `bound` when `lower_bound` is set.
    pub girth: usize,
    pub witness: Option<Vec<(usize, usize)>>,
    pub bound: usize,
    /// True when no cycle up to `bound - 2` exists, so `girth` is only a
    /// lower bound.
    pub lower_bound: bool,
    pub oracle: Option<OracleDoc>,
}

fn doc(kind: &'static str, report: &GirthReport, bound: usize) -> GirthDoc {
    let (girth, lower_bound) = match report.girth {
        Girth::Exact(g) => (g, false),
        Girth::AtLeast(g) => (g, true),
        Girth::Acyclic => (bound, true),
    };
    GirthDoc {
        kind,
        girth,
        witness: report.witness.as_ref().map(|r| r.path().to_vec()),
        bound,
        lower_bound,
        oracle: None,
    }
}

fn oracle(h: &BinaryParityCheck, doc: &GirthDoc) -> OracleDoc {
    let found = girth_oracle(h);
    OracleDoc {
        girth: match found {
            Girth::Exact(g) | Girth::AtLeast(g) => Some(g),
            Girth::Acyclic => None,
        },
        bits: h.col_count(),
        agrees: found.capped(doc.bound) == doc.girth.min(doc.bound),
    }
}

/// Certifies `code` up to cycles of length `max_length`.
pub fn certify(
    code: &LoadedCode,
    max_length: usize,
    as_conv: bool,
    with_oracle: bool,
) -> CliResult<GirthDoc> {
    if !max_length.is_multiple_of(2) || !(4..=12).contains(&max_length) {
        return Err(Failure::validation(format!(
            "--max-length must be even and between 4 and 12, got {max_length}"
        )));
    }
    let half = max_length / 2;
    let bound = 2 * half + 2;
    match (code, as_conv) {
        (LoadedCode::Qc(p), false) => {
            let mut d = doc("qc", &girth_qc(p, half)?, bound);
            if with_oracle {
                d.oracle = Some(oracle(&expand_to_binary(p)?, &d));
            }
            Ok(d)
        }
        (code, _) => {
            let spec = match code {
                LoadedCode::Qc(p) => ConvCodeSpec::new(p.clone()),
                LoadedCode::Conv(spec) => spec.clone(),
            };
            let mut d = doc("conv", &girth_conv(&spec, half)?, bound);
            if with_oracle {
                // a cycle through `half` bit nodes spans at most half * m_h blocks
                let blocks = half * spec.memory_order() as usize + 1;
                d.oracle = Some(oracle(&terminated_matrix(&spec, blocks), &d));
            }
            Ok(d)
        }
    }
}

pub fn girth(run: &mut Run, args: &GirthArgs) -> CliResult<()> {
    let value = run.read_json(&args.input)?;
    let code = code_from_json(&value)?;
    let d = certify(&code, args.max_length, args.conv, args.oracle)?;
    let text = serde_json::to_string(&d).map_err(|e| Failure::validation(e.to_string()))?;
    println!("{text}");
    run.write_json(&args.out, &d)?;
    match &d.oracle {
        Some(o) if !o.agrees => Err(Failure::validation(
            "relation check and graph search disagree",
        )),
        _ => Ok(()),
    }
}
