//! Sweeps `h = 2^k` on the relay diamond with middle matrix `[[h, -h], [h, h]]`
//! and shows the LD gap growing like `2k`.

use std::error::Error;

use relaygap::experiments::{exp_counterexample, Format};
use relaygap::INF_GAIN;

pub fn main() -> Result<(), Box<dyn Error>> {
    let report = exp_counterexample(1..=14, INF_GAIN, 0)?;
    println!("{}", report.render(Format::Csv)?);
    for c in &report.checks {
        println!("{:<32} {} {}", c.name, if c.passed { "ok " } else { "NO " }, c.detail);
    }
    Ok(())
}
