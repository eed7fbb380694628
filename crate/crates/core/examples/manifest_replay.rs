//! Batch manifest run and byte-for-byte replay of an emitted report.

use bergman_lab::experiment::{parse_manifest, replay, run};

const MANIFEST: &str = r#"[
  {"command": "threshold", "domain": "disk", "kernel": "planar-pole", "per_shell": 20000, "tolerance": 0.15, "seed": 1},
  {"command": "components", "domain": "horseshoe", "w": [-0.75, 0.0], "delta": 0.6, "seed": 2}
]"#;

fn main() -> bergman_lab::Result<()> {
    for cfg in parse_manifest(MANIFEST)? {
        let out = run(cfg)?;
        let text = out.json();
        let (_, same) = replay(&text)?;
        println!("exit {} replay identical {}", out.exit_code, same);
        println!("{}", text.lines().take(6).collect::<Vec<_>>().join("\n"));
    }
    Ok(())
}
