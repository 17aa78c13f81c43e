// Checks that the min-of-densities integral tracks exp(-divergence) up to constants.
//
// Run with `cargo run --release --example verify_bounds`.

use wsbm::divergence::gaussian_divergence;
use wsbm::oracle::{
    chernoff_by_quadrature, min_integral, sandwich_families, verify_lemma2, ProductDensity, QuadratureSpec,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = QuadratureSpec::default();
    for (name, s) in sandwich_families(&spec)? {
        println!(
            "{name:<18} divergence {:>7.3}  integral {:.3e}  slack {:+.3}",
            s.divergence, s.min_integral, s.upper_slack
        );
    }

    let a = ProductDensity::gaussian(&[0.0, 1.0], &[1.0, 2.0])?;
    let b = ProductDensity::gaussian(&[1.5, 0.0], &[1.5, 1.0])?;
    let closed = gaussian_divergence(&[0.0, 1.0], &[1.5, 0.0], &[1.0, 2.0], &[1.5, 1.0])?;
    let quad = chernoff_by_quadrature(&a, &b, 1001, &spec)?;
    println!("closed form {:.10} vs quadrature {:.10}", closed.value, quad.value);
    println!("min integral (priors 0.5): {:.6}", min_integral(&a, &b, (0.5, 0.5), &spec)?);

    let t_grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let w_grid: Vec<Vec<f64>> = (0..=40)
        .flat_map(|i| (0..=40).map(move |j| vec![-4.0 + 0.2 * i as f64, -4.0 + 0.2 * j as f64]))
        .collect();
    println!("largest min(g1, g2) over the grid: {} (never above 1)", verify_lemma2(&a, &b, &t_grid, &w_grid)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
