//! Multi-skill node ranking for multidimensional networks.
//!
//! A multidimensional network carries several kinds of relations at once:
//! each edge is labeled with the dimension (relation type) it belongs to,
//! and each node holds a weighted vector of skills. The engine percolates
//! skill values along edges — scaled by per-dimension relevance, attenuated
//! across degrees of separation, never echoed back to the node that sent
//! them — and produces one ranking per skill plus a combined ranking.
//!
//! The crate also ships the baselines the engine is usually compared
//! against (degree, PageRank), ranking-comparison metrics (q-q series, rank
//! distance, clustering shares), a seeded benchmark generator, and loaders
//! for the TAB-separated file formats used by the `ubik` CLI.

pub mod baselines;
pub mod engine;
mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod oracle;
pub mod query;
pub mod ranking;
pub mod skills;
pub mod synthgen;

pub use engine::{
    rank_by_skill, run_ubik, run_ubik_timed, run_ubik_with, EngineOptions, EngineStats, Semantics,
    SkillScores, COMBINED,
};
pub use error::{Error, Result};
pub use graph::{DimId, GraphBuilder, MultiGraph, NodeId};
pub use query::Query;
pub use ranking::Ranking;
pub use skills::SkillTable;
