//! Bit-exact execution of the coded MapReduce scheme on synthetic jobs.
//!
//! The pipeline is [`build_placement`] (from the full array, before any
//! active set is known), [`plan_active_set`], then [`run_transcript`], which
//! maps, shuffles, decodes and reduces, and finally compares every node's
//! outputs with [`reference_oracle`]. [`measure_loads`] averages transcripts
//! over active sets with exact rational arithmetic.

mod job;
mod measure;
mod placement;
mod plan;
mod transcript;

use thiserror::Error;

use crate::loads::LoadError;
use crate::pda::PdaError;

pub use job::{
    expand, fnv1a64, pack, reference_oracle, to_hex, Bits, IvaTable, JobSpec, FNV_OFFSET_BASIS,
    FNV_PRIME,
};
pub use measure::{
    check_split_divisibility, measure_loads, minimal_v_bits, required_split_parts, ActiveSetResult,
    LoadReport, MeasureMode, MAX_EXHAUSTIVE_SETS,
};
pub use placement::{build_placement, storage_profile, Placement};
pub use plan::{plan_active_set, ActiveSetPlan};
pub use transcript::{run_transcript, Signal, TranscriptReport, Workload};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid job: {0}")]
    InvalidJob(String),
    #[error("{n} files cannot be split into {f} equal batches")]
    BatchDivisibility { f: usize, n: usize },
    #[error("{d} functions cannot be split evenly over {q} active nodes")]
    FunctionDivisibility { q: usize, d: usize },
    #[error("symbol {symbol}: a {block_bits}-bit block cannot be cut into {parts} equal parts")]
    SplitDivisibility {
        symbol: u32,
        parts: usize,
        block_bits: usize,
    },
    #[error("active-set size {q} is outside 1..={k}")]
    ActiveSize { q: usize, k: usize },
    #[error("{count} active sets exceed the exhaustive limit of {limit}")]
    TooManySets { count: u64, limit: u64 },
    #[error(transparent)]
    Pda(#[from] PdaError),
    #[error(transparent)]
    Load(#[from] LoadError),
    /// A node could not rebuild a value it needs. Never expected for a valid
    /// array; indicates a defect in the shuffle.
    #[error("decode failure: {0}")]
    Decode(String),
}
