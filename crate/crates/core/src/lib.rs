//! Negative spectrum of Schrödinger operators `−Δ − V` on regular metric
//! trees with radial potentials, computed through the reduction to weighted
//! half-line Sturm–Liouville problems, together with evaluators for the
//! CLR and Lieb–Thirring type bounds that control it.

pub mod bounds;
pub mod corpus;
pub mod decomposition;
pub mod engine;
pub mod error;
pub mod expr;
pub mod ext;
pub mod homogeneous;
pub mod oracle;
pub mod potential;
pub mod quad;
pub mod sobolev;
pub mod sweep;
pub mod tree;
pub mod trial;
pub mod weight;

pub use bounds::{BoundParams, BoundReport, RhsWeight};
pub use decomposition::{tree_count, tree_eigenvalues, tree_moment};
pub use engine::{
    count_negative, eigenvalues_below, lowest_eigenvalue, moment, propagate, Endpoint,
    HalflineOperator, SolutionState, SolverOptions,
};
pub use error::{Result, SpectralError};
pub use expr::Expr;
pub use ext::ExtReal;
pub use potential::SymmetricPotential;
pub use trial::TrialFunction;
pub use tree::{DimensionBounds, TailRule, TreeDescriptor};
pub use weight::{GroundStateWeight, PowerWeight, StepTail, StepWeight, Weight};
