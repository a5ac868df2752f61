//! Search toolkit for magic, antimagic, and (a,d)-antimagic (v,e,f)-labellings
//! of graphs with faces.
//!
//! A labelling assigns the integers {1..n} bijectively to a chosen union of
//! element classes (vertices, edges, faces). The toolkit provides:
//!
//! - [`graph`]: the graph-with-faces model and its incidence tables;
//! - [`generators`]: the benchmark graph families;
//! - [`labelling`]: labellings, weights, and the exact verifier;
//! - [`objectives`]: the integer objective functions with an incremental
//!   swap-evaluation path;
//! - [`anneal`]: the simulated-annealing search over label permutations;
//! - [`oracle`]: exhaustive backtracking search for small instances;
//! - [`ilp`]: export of the magic-labelling integer program in LP format;
//! - [`io`]: the graph and labelling file formats;
//! - [`bench`]: the iteration-count benchmark harness.

pub mod anneal;
pub mod bench;
pub mod generators;
pub mod graph;
pub mod ilp;
pub mod io;
pub mod labelling;
pub mod objectives;
pub mod oracle;

pub use anneal::{anneal, multi_start, AnnealOutcome, AnnealParams};
pub use graph::{EdgeId, Element, ElementClass, FaceId, Graph, VertexId};
pub use labelling::{
    verify, weights_of, DomainSelector, LabelKind, Labelling, TargetKind, VerifyReport,
};
pub use objectives::{eval, Objective, ObjectiveFamily, SwapCache};
