//! Straggler-tolerant coded MapReduce from placement delivery arrays.
//!
//! * [`pda`]: the array type, its text format, validation and statistics.
//! * [`constructions`]: array families with known parameters.
//! * [`loads`]: exact storage/communication loads and the optimal tradeoff.
//! * [`engine`]: bit-exact execution of the scheme and load measurement.
//! * [`cli`]: the `pda-cdc` command-line front end.

pub mod cli;
pub mod combinatorics;
pub mod constructions;
pub mod engine;
pub mod loads;
pub mod pda;
