//! The fast verification bundle.

use rstre::experiments::verify::{verify_suite, Level};

fn main() -> rstre::Result<()> {
    let report = verify_suite(Level::Fast)?;
    for c in &report.checks {
        println!("{}", c.summary());
    }
    std::process::exit(report.exit_code());
}
