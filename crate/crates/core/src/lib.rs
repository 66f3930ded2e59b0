//! Country-level eyeball interconnection analysis.
//!
//! Given per-AS population estimates, a probe inventory, traceroutes between
//! probes and IP-to-AS / IP-to-country tables, the crate decides for every
//! ordered pair of a country's dominant access networks whether traffic stays
//! in the country and whether it crosses a third AS, then aggregates the
//! answers into user-weighted area fractions.
//!
//! The stages are usable on their own:
//!
//! ```text
//! population estimates -> coverage::select_dominant_networks -> EyeballSet
//! EyeballSet + probes  -> selection::select_probes -> plan::build_plan
//! traceroutes          -> path::classify_traceroute -> matrix::build_matrix
//! EyeballMatrix        -> matrix::compute_metrics, render::render_svg
//! ```
//!
//! [`pipeline::Dataset`] wires them together for one country.

pub mod cli;
pub mod config;
pub mod coverage;
pub mod ingest;
pub mod lpm;
pub mod matrix;
pub mod model;
pub mod path;
pub mod pipeline;
pub mod plan;
pub mod render;
pub mod selection;
pub mod synth;

pub use coverage::{select_dominant_networks, Thresholds};
pub use lpm::{GeoLabel, GeoTable, PrefixMap, PrefixTable};
pub use matrix::{build_matrix, compute_metrics};
pub use model::{
    AsNumber, CellVerdict, CountryCode, DirectnessVerdict, EyeballMatrix, EyeballNetwork,
    EyeballSet, GeoPoint, LocalityVerdict, MetricsSummary, Probe, Traceroute,
};
pub use pipeline::{Analysis, Dataset};
pub use render::render_svg;
