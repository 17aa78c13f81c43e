//! Weighted stochastic block models: divergences that decide whether node
//! labels can be recovered exactly, samplers for Gaussian, exponential and
//! thinned Gaussian edge weights, the genie-aided MAP test with Monte Carlo
//! error estimates, and quadrature oracles for checking all of the above.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod divergence;
pub mod error;
pub mod model;
pub mod oracle;
pub mod recovery;
pub mod sampler;
pub mod search;

pub use error::{Error, Result};
pub use model::CommunityModel;
