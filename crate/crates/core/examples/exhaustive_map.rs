// Full-graph MAP labelling and posterior marginals by enumeration on a tiny
// graph, compared with genie-aided decisions node by node.
//
// Community 1 has no internal signal here; with nearly symmetric means the
// full posterior cannot tell the labels apart and flips them wholesale.
//
// Run with `cargo run --example exhaustive_map`.

use wsbm::model::{GaussianEdgeModel, SquareMatrix};
use wsbm::recovery::{exhaustive_map, exhaustive_marginals, genie_classify_node};
use wsbm::sampler::{sample_graph, GraphOptions};
use wsbm::CommunityModel;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let communities = CommunityModel::new(vec![0.5, 0.5], 8)?;
    let mean = SquareMatrix::from_rows(vec![vec![2.0, 0.0], vec![0.0, 0.0]])?;
    let edges = GaussianEdgeModel::new(mean, SquareMatrix::filled(2, 1.0))?.into();
    let opts = GraphOptions {
        permute: true,
        ..Default::default()
    };
    for seed in 0..3 {
        let graph = sample_graph(&communities, &edges, seed, opts)?;
        let map = exhaustive_map(&graph, &communities, &edges, false)?;
        let marginals = exhaustive_marginals(&graph, &communities, &edges, false)?;
        let p1: Vec<String> = marginals.iter().map(|m| format!("{:.2}", m[1])).collect();
        let genie = (0..8)
            .map(|v| genie_classify_node(&graph, v, &communities, &edges))
            .collect::<Result<Vec<_>, _>>()?;
        println!("seed {seed}: truth {:?}", graph.labels());
        println!("        map   {map:?}");
        println!("        genie {genie:?}");
        println!("        P(x = 1) [{}]", p1.join(", "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
