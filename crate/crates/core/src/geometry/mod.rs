mod components;
mod domain;
mod sampling;
mod support;

pub use components::{
    approach_sequence, connected_components, refine_probes, ComponentMap, GraphSpec, Probe,
};
pub use domain::{box_active_faces, Domain, DomainFamily, GraphProfile};
pub use sampling::{
    sample_graph_stratified, sample_near, sample_uniform, NearSample, UniformSample,
    MAX_PROPOSALS,
};
pub use support::{project_to_boundary, supporting_functional, BoundaryPoint, SupportReport};
