// Semi-metrics between community columns and the exact-recovery verdict.
//
// Run with `cargo run --example divergence`.

use wsbm::divergence::{column_divergence, exponential_divergence, recovery_predicate, Regime};
use wsbm::model::{ExponentialEdgeModel, GaussianEdgeModel, SquareMatrix};
use wsbm::CommunityModel;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 1000;
    let communities = CommunityModel::new(vec![0.5, 0.5], n)?;

    // binary symmetric Gaussian: the divergence is n (a - b)^2 / 8
    for gap in [0.1, 0.2, 0.3] {
        let edges = GaussianEdgeModel::planted(2, gap, 0.0, 1.0)?.into();
        let d = column_divergence(&communities, &edges, 0, 1)?;
        let verdict = recovery_predicate(&communities, &edges, Regime::Auto)?;
        println!(
            "gaussian gap {gap:.1}: divergence {:.3} (closed form {:.3}), /log n = {:.3}, recoverable: {}",
            d.value,
            n as f64 * gap * gap / 8.0,
            d.normalized.unwrap_or(f64::NAN),
            verdict.possible
        );
    }

    // exponential weights, one community of one node per hypothesis
    let unit = exponential_divergence(&[1.0], &[2.0], &[1.0])?;
    println!("exponential rates (1, 2): value {:.4} at t* = {:.4}", unit.value, unit.t_star);

    let rates = SquareMatrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 1.5]])?;
    let edges = ExponentialEdgeModel::new(rates)?.into();
    let verdict = recovery_predicate(&communities, &edges, Regime::Auto)?;
    println!(
        "exponential model: min divergence {:.2}, regime {}, recoverable: {}",
        verdict.min_divergence, verdict.regime_used, verdict.possible
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
