// How well a Gaussian approximates a thinned edge sum, for growing edge means.
//
// Run with `cargo run --release --example gaussian_approximation`.

use wsbm::oracle::{approx_distance_of, mixture_density};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 10_000;
    let theta = (n as f64).ln() / n as f64;
    for mu in [0.0, 4.0, 6.0] {
        let mix = mixture_density(n, theta, mu, 1.0)?;
        let d = approx_distance_of(&mix);
        println!(
            "mu = {mu}: TV {:.4}, sup gap {:.2e}, local maxima {}, atom {:.4e}, N({:.2}, {:.2})",
            d.tv, d.sup, d.local_maxima, d.atom_weight, d.gaussian_mean, d.gaussian_var
        );
    }
    let mix = mixture_density(n, theta, 6.0, 1.0)?;
    for (z, f, g) in mix.density_table(9) {
        println!("z = {z:>8.2}  mixture {f:.3e}  gaussian {g:.3e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
