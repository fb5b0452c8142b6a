//! Running a small seeded self-check programmatically.

use gauge_orbits::cli::harness::{run, HarnessConfig};

fn main() {
    let mut config = HarnessConfig::new(42, 5);
    config.suites = vec!["stabilizer".into(), "orbit-stabilizer".into(), "factorization".into()];
    let report = run(&config).unwrap();
    println!("{}", serde_json::to_string_pretty(&report.to_json()).unwrap());
    std::process::exit(report.exit_code());
}
