//! Builds a sweep in code and prints it as CSV. `catshield sweep --config`
//! accepts the same structure as JSON; the config is printed to stderr.

use catshield::sweep::{self, Scenario, SweepConfig};

fn main() -> catshield::Result<()> {
    let cfg = SweepConfig {
        eta_grid: sweep::linspace(0.6, 1.0, 9),
        ..SweepConfig::preset(Scenario::Fig3)
    };
    eprintln!("{}", serde_json::to_string_pretty(&cfg)?);
    let out = sweep::run_sweep(&cfg, &mut std::io::stdout())?;
    eprintln!("{}", sweep::summary(&out));
    Ok(())
}
