pub mod classical;
pub mod correspond;
pub mod decohere;
pub mod graph;
pub mod lattice;
pub mod quantum;
