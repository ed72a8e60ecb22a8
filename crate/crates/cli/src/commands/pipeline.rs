use girthforge::memory::{theta_mh, theta_n, MinimizeOptions};
use girthforge::sim::{latency_report, LatencyReport};
use girthforge::{expand_to_binary, write_alist};
use serde::Serialize;

use super::inspect::{certify, GirthDoc};
use super::minimize::{minimize, Settings};
use super::search::{infeasible, search};
use super::simulate::simulate;
use crate::artifacts::{LoadedCode, Run};
use crate::failure::{CliResult, Failure};
use crate::{DecoderArg, PipelineArgs};

#[derive(Debug, Serialize)]
struct GirthBundle {
    qc: GirthDoc,
    conv: GirthDoc,
}

#[derive(Debug, Serialize)]
struct PipelineReport {
    m: usize,
    n: usize,
    girth: usize,
    lifting_degree: u64,
    code_length: u64,
    memory_order: u64,
    constraint_length: u64,
    girth_qc: usize,
    girth_oracle: Option<usize>,
    girth_conv: usize,
    girth_conv_lower_bound: bool,
    theta_n: Option<f64>,
    theta_mh: Option<f64>,
    latency: Option<LatencyReport>,
}

pub fn run(run: &mut Run, args: &PipelineArgs) -> CliResult<()> {
    let target = &args.target;
    if target.girth < 6 {
        return Err(Failure::validation("pipeline needs a girth of at least 6").at("search"));
    }

    let doc = search(target, target.n).map_err(|f| f.at("search"))?;
    run.write_json("spec.json", &doc)
        .map_err(|f| f.at("search"))?;
    let (Some(p), Some(n)) = (doc.matrix.clone(), doc.lifting_degree) else {
        return Err(infeasible(&doc).at("search"));
    };

    let settings = Settings {
        girth: target.girth,
        exact: false,
        options: MinimizeOptions {
            budget: args.budget,
            seed: run.seed,
            ..Default::default()
        },
    };
    let conv = minimize(&p, &settings).map_err(|f| f.at("minimize-mh"))?;
    run.write_json("conv.json", &conv)
        .map_err(|f| f.at("minimize-mh"))?;

    let h = expand_to_binary(&p).map_err(|e| Failure::from(e).at("expand"))?;
    run.write("H.alist", write_alist(&h).as_bytes())
        .map_err(|f| f.at("expand"))?;

    // searching up to the target length reports an exact girth when it is hit
    let max_length = target.girth;
    let qc_code = LoadedCode::Qc(p.clone());
    let conv_code = LoadedCode::Conv(conv.code.clone());
    let qc = certify(&qc_code, max_length, false, true).map_err(|f| f.at("girth"))?;
    let conv_doc = certify(&conv_code, max_length, true, false).map_err(|f| f.at("girth"))?;
    let oracle_girth = qc.oracle.as_ref().and_then(|o| o.girth);
    if qc.oracle.as_ref().is_some_and(|o| !o.agrees) {
        return Err(Failure::validation("relation check and graph search disagree").at("girth"));
    }
    if qc.girth < target.girth {
        return Err(
            Failure::validation(format!("certified girth {} below target", qc.girth)).at("girth"),
        );
    }
    let bundle = GirthBundle { qc, conv: conv_doc };
    run.write_json("girth.json", &bundle)
        .map_err(|f| f.at("girth"))?;

    let mut latency = None;
    if !args.no_sim {
        let code = if args.simulate_conv {
            &conv_code
        } else {
            &qc_code
        };
        let curve = simulate(code, &args.sim, run.seed).map_err(|f| f.at("simulate"))?;
        run.write("curve.csv", curve.to_csv().as_bytes())
            .map_err(|f| f.at("simulate"))?;
        if args.simulate_conv && args.sim.decoder == DecoderArg::Sw {
            let last = curve.points.last().expect("at least one SNR point");
            latency = Some(
                latency_report(&conv.code, args.sim.alpha, last.avg_iterations, 1.0)
                    .map_err(|e| Failure::from(e).at("report"))?,
            );
        }
    }

    let report = PipelineReport {
        m: target.m,
        n: target.n,
        girth: target.girth,
        lifting_degree: n,
        code_length: h.col_count() as u64,
        memory_order: conv.memory_order,
        constraint_length: conv.constraint_length,
        girth_qc: bundle.qc.girth,
        girth_oracle: oracle_girth,
        girth_conv: bundle.conv.girth,
        girth_conv_lower_bound: bundle.conv.lower_bound,
        theta_n: args
            .ref_n
            .map(|r| theta_n(n, r))
            .transpose()
            .map_err(|e| Failure::from(e).at("report"))?,
        theta_mh: args.ref_mh.map(|r| theta_mh(conv.memory_order, r)),
        latency,
    };
    if let Some(theta) = report.theta_mh {
        println!("theta_mh = {theta:.2}");
    }
    run.write_json("report.json", &report)
        .map_err(|f| f.at("report"))?;
    Ok(())
}
