//! Runs the cheap verification suites and prints their reports. Pass a
//! suite name (or `all`) as the first argument to choose.

use lifshitz::verify::{Suite, VerifyOptions};

fn main() -> lifshitz::Result<()> {
    let selection = std::env::args().nth(1).unwrap_or_else(|| "baseline".into());
    let suites = if selection == "quick" {
        vec![
            Suite::Reduction,
            Suite::Dlp,
            Suite::Hamaker,
            Suite::IdealMetal,
            Suite::Baseline,
        ]
    } else {
        Suite::parse_selection(&selection)?
    };
    let options = VerifyOptions {
        count: 3,
        ..VerifyOptions::default()
    };
    let mut ok = true;
    for suite in suites {
        let report = suite.run(&options)?;
        ok &= report.overall;
        println!("{report}");
    }
    println!("overall: {}", if ok { "PASS" } else { "FAIL" });
    Ok(())
}
