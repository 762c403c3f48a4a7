//! Drives a run from a TOML scenario, the same path the `axiswirl` binary takes, and
//! reads back the written summary.

use axiswirl::scenario::{parse_config, run, RunSummary};

const SCENARIO: &str = r#"
mode = "integrate"
lambda0 = 2.0
omega0 = 0.0
horizon = 5.0

[forcing]
kind = "sine"
mean = 0.3
amplitude = 0.3

[integrator]
tolerance = 1e-10
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = parse_config(SCENARIO)?;
    let out = std::env::temp_dir().join("axiswirl-scenario-example");
    let summary = run(&config, &out)?;
    println!("{summary:#?}");

    let text = std::fs::read_to_string(out.join("summary.json"))?;
    let back: RunSummary = serde_json::from_str(&text)?;
    assert_eq!(back, summary);
    println!("artifacts in {}", out.display());
    Ok(())
}
