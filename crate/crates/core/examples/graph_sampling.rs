// Samples a weighted graph, reads off per-node edge sums and dumps an edge list.
//
// Run with `cargo run --example graph_sampling`.

use wsbm::model::{GaussianEdgeModel, SquareMatrix, ThinnedGaussianEdgeModel};
use wsbm::sampler::{edge_sums, sample_edge_sums_direct, sample_graph, GraphOptions, SizeConvention};
use wsbm::CommunityModel;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let communities = CommunityModel::new(vec![0.5, 0.5], 8)?;
    let edges = GaussianEdgeModel::planted(2, 1.0, 0.0, 0.25)?.into();
    let graph = sample_graph(&communities, &edges, 7, GraphOptions::default())?;
    println!("labels: {:?}", graph.labels());
    for node in [0, 5] {
        let w = edge_sums(&graph, node)?;
        println!("node {node} (community {}): W = {:?}", w.truth, w.w);
    }
    let csv = graph.to_edge_list_csv();
    println!("{}", csv.lines().take(4).collect::<Vec<_>>().join("\n"));

    // the direct path draws W without building a graph
    let big = CommunityModel::new(vec![0.5, 0.5], 1000)?;
    let draws: Vec<_> = sample_edge_sums_direct(&big, &edges, 0, 5000, 1, SizeConvention::Full)?.collect();
    let mean = draws.iter().map(|d| d.w[0]).sum::<f64>() / draws.len() as f64;
    println!("direct path: mean W_0 = {mean:.2} (law mean 500)");

    // an incomplete graph: each edge survives with probability c log n / n
    let sparse = CommunityModel::new(vec![0.5, 0.5], 400)?;
    let base = GaussianEdgeModel::planted(2, 1.0, 0.0, 0.25)?;
    let thinned = ThinnedGaussianEdgeModel::new(base, SquareMatrix::filled(2, 2.0))?.into();
    let g = sample_graph(&sparse, &thinned, 3, GraphOptions::default())?;
    let kept = (0..400)
        .flat_map(|u| ((u + 1)..400).map(move |v| (u, v)))
        .filter(|&(u, v)| g.weight(u, v) != 0.0)
        .count();
    let theta = 2.0 * (400f64).ln() / 400.0;
    println!("thinned graph keeps {kept} of {} edges (expected {:.0})", 400 * 399 / 2, theta * 79_800.0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
