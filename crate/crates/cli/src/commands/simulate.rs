use girthforge::expand_to_binary;
use girthforge::sim::{run_ber, BerCurve, DecoderKind, SimCode, SimConfig, StopRule};

use crate::artifacts::{code_from_json, LoadedCode, Run};
use crate::failure::CliResult;
use crate::{DecoderArg, SimArgs, SimulateArgs};

pub fn sim_code(code: &LoadedCode) -> CliResult<SimCode> {
    Ok(match code {
        LoadedCode::Qc(p) => SimCode::Block {
            h: expand_to_binary(p)?,
            rate: (p.cols() - p.rows()) as f64 / p.cols() as f64,
        },
        LoadedCode::Conv(spec) => SimCode::Conv(spec.clone()),
    })
}

pub fn sim_config(args: &SimArgs, seed: u64) -> SimConfig {
    SimConfig {
        snr_points: args.snr.0.clone(),
        max_iterations: args.max_iter,
        codeword_length_target: args.length,
        window_alpha: args.alpha,
        rng_seed: seed,
        stop_rule: StopRule {
            min_bit_errors: args.min_errors,
            max_frames: args.max_frames,
        },
        decoder: match args.decoder {
            DecoderArg::Full => DecoderKind::FullBp,
            DecoderArg::Sw => DecoderKind::SlidingWindow,
        },
        clip: args.clip,
    }
}

pub fn simulate(code: &LoadedCode, args: &SimArgs, seed: u64) -> CliResult<BerCurve> {
    let curve = run_ber(&sim_code(code)?, &sim_config(args, seed))?;
    for p in &curve.points {
        println!(
            "{:>6} dB  BER {:.3e}  FER {:.3e}  I_avg {:.2}  frames {}",
            p.snr_db, p.ber, p.fer, p.avg_iterations, p.frames
        );
    }
    Ok(curve)
}

pub fn run(run: &mut Run, args: &SimulateArgs) -> CliResult<()> {
    let value = run.read_json(&args.code)?;
    let curve = simulate(&code_from_json(&value)?, &args.sim, run.seed)?;
    run.write(&args.out, curve.to_csv().as_bytes())?;
    Ok(())
}
