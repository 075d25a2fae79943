//! Static analysis of Java classes with formal concept analysis.
//!
//! The pipeline parses a subset of Java, extracts which methods use which
//! attributes and which methods call which, builds concept lattices over
//! those relations, classifies the dependencies between entity sets and
//! groups the results into X-Ray views.

pub mod analysis;
pub mod classify;
pub mod cli;
pub mod extract;
pub mod fca;
pub mod java;
pub mod report;
pub mod views;

pub use analysis::{analyze, AnalysisError, AnalysisOptions, SourceFile};
