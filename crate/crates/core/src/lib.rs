//! Random k-XOR-SAT instances and the geometry of their solution spaces.
//!
//! A k-XOR-SAT system is a set of GF(2) equations, each binding exactly k
//! variables, with all right-hand sides zero; it is identified with its
//! underlying k-uniform hypergraph. This crate generates such instances,
//! peels hypergraph r-cores, builds the stripping digraph and its
//! reachability sets, detects flippable cycles and linked sets, constructs
//! the free-variable/cluster decomposition of the solution space, and
//! evaluates the matching asymptotic predictions (core thresholds, core
//! degree profiles, parallel-stripping recursions).
//!
//! All randomness flows through a seeded ChaCha8 stream, so a seed fully
//! determines every generated instance across platforms.

pub mod cluster;
pub mod flip;
pub mod gf2;
pub mod hypergraph;
pub mod peel;
pub mod seed;
pub mod theory;

pub use cluster::ClusterStructure;
pub use flip::{FlippableCycle, GammaStructure};
pub use gf2::{BitAssignment, Gf2System};
pub use hypergraph::{DegreeSequence, Hypergraph};
pub use peel::{StrippingTrace, StripDigraph};
pub use theory::{StripRecursion, ThresholdProfile};
