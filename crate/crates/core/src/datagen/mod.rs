//! Synthetic data: AR(1)-correlated two- and four-class scenarios, outlier
//! contamination, and configuration-model graphs.

pub mod ar;
pub mod graph;
pub mod scenario;

pub use ar::{ar_apply, ar_correlation, ar_factor};
pub use graph::{
    configuration_model, degree_sequence, gen_network, vectorize_adjacency, DegreeSequences,
    FrobeniusGraph, GraphSample, NETWORK_VERTICES,
};
pub use scenario::{
    contaminate_outliers, gen_multi_class, gen_two_class, random_unit_direction, Family,
    ScenarioConfig, ScenarioId,
};
