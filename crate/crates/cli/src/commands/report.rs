use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::artifacts::{sha256_hex, RunManifest};
use crate::failure::{CliResult, Failure};
use crate::ReportArgs;

fn load(path: &Path) -> CliResult<RunManifest> {
    let text = fs::read(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    serde_json::from_slice(&text)
        .map_err(|e| Failure::validation(format!("{}: not a run manifest: {e}", path.display())))
}

/// Prints `ok` or `changed` per recorded output; returns the number changed.
fn verify(manifest: &RunManifest, dir: &Path) -> usize {
    let mut changed = 0;
    for (name, digest) in &manifest.outputs {
        let status = match fs::read(dir.join(name)) {
            Ok(bytes) if sha256_hex(&bytes) == *digest => "ok",
            Ok(_) => "changed",
            Err(_) => "missing",
        };
        changed += usize::from(status != "ok");
        println!("{status:>8}  {name}");
    }
    changed
}

fn replay(manifest: &RunManifest) -> CliResult<usize> {
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    let dir =
        std::env::temp_dir().join(format!("girthforge-replay-{}-{nanos}", std::process::id()));
    let exe = std::env::current_exe().map_err(|e| Failure::io(e.to_string()))?;
    let args = manifest.argv.get(1..).unwrap_or_default();
    let status = Command::new(exe)
        .args(args)
        .arg("--out-dir")
        .arg(&dir)
        .current_dir(&manifest.cwd)
        .status()
        .map_err(|e| Failure::io(format!("replay: {e}")))?;
    if !status.success() && status.code() != Some(2) {
        return Err(Failure::validation(format!("replay exited with {status}")));
    }
    println!("replayed into {}", dir.display());
    let changed = verify(manifest, &dir);
    let _ = fs::remove_dir_all(&dir);
    Ok(changed)
}

pub fn run(args: &ReportArgs) -> CliResult<()> {
    let manifest = load(&args.manifest)?;
    let dir = args.manifest.parent().unwrap_or(Path::new("."));
    println!(
        "{} {} `{}` seed {} ({:.3} s)",
        manifest.tool,
        manifest.version,
        manifest.argv.get(1..).unwrap_or_default().join(" "),
        manifest.seed,
        manifest.wall_clock_s
    );
    for (input, digest) in &manifest.inputs {
        println!("   input  {input}  {}", &digest[..16.min(digest.len())]);
    }
    let changed = if args.replay {
        replay(&manifest)?
    } else {
        verify(&manifest, dir)
    };
    if changed == 0 {
        Ok(())
    } else {
        Err(Failure::validation(format!(
            "{changed} artifact(s) differ from the manifest"
        )))
    }
}
