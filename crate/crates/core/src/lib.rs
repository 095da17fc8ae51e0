pub mod analysis;
pub mod arrangement;
pub mod audit;
pub mod corpus;
pub mod feasibility;
pub mod generators;
pub mod projective;
pub mod scalar;
pub mod structure;
