mod divergence_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/divergence.rs"));
}
mod graph_sampling_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/graph_sampling.rs"));
}
mod simulate_genie_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/simulate_genie.rs"));
}
mod phase_sweep_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/phase_sweep.rs"));
}
mod gaussian_approximation_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/gaussian_approximation.rs"));
}
mod verify_bounds_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verify_bounds.rs"));
}
mod exhaustive_map_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/exhaustive_map.rs"));
}

#[test]
fn divergence_example_runs() {
    divergence_example::run_example().expect("divergence example should run");
}

#[test]
fn graph_sampling_example_runs() {
    graph_sampling_example::run_example().expect("graph sampling example should run");
}

#[test]
fn simulate_genie_example_runs() {
    simulate_genie_example::run_example().expect("genie simulation example should run");
}

#[test]
fn phase_sweep_example_runs() {
    phase_sweep_example::run_example().expect("phase sweep example should run");
}

#[test]
fn gaussian_approximation_example_runs() {
    gaussian_approximation_example::run_example().expect("gaussian approximation example should run");
}

#[test]
fn verify_bounds_example_runs() {
    verify_bounds_example::run_example().expect("verify bounds example should run");
}

#[test]
fn exhaustive_map_example_runs() {
    exhaustive_map_example::run_example().expect("exhaustive MAP example should run");
}
