// Per-node error across the recovery threshold `divergence = c log n`.
//
// Run with `cargo run --release --example phase_sweep`.

use wsbm::recovery::{binary_symmetric_family, phase_csv, phase_sweep, Estimator, GenieOptions};
use wsbm::CommunityModel;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 1000;
    let communities = CommunityModel::new(vec![0.5, 0.5], n)?;
    let opts = GenieOptions {
        estimator: Estimator::Tilted,
        ..Default::default()
    };
    let rows = phase_sweep(
        &communities,
        binary_symmetric_family(n),
        &[0.25, 0.5, 1.0, 2.0, 4.0],
        20_000,
        3,
        opts,
    )?;
    print!("{}", phase_csv(&rows));
    for r in &rows {
        println!("c = {:<4} n * error = {:.3e}", r.c, r.report.union_bound_proxy);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
