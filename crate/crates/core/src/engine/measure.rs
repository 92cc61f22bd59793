//! Load measurement over active sets.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::job::JobSpec;
use super::transcript::Workload;
use super::EngineError;
use crate::combinatorics::{binomial_u64, k_subsets};
use crate::loads::{achieved_load, LoadPair};
use crate::pda::Pda;

/// How active sets are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureMode {
    /// Every size-`Q` subset, in lexicographic order.
    Exhaustive,
    /// `count` uniformly random subsets drawn with a seeded ChaCha8 stream.
    Sample { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveSetResult {
    pub active: Vec<usize>,
    pub total_bits: u64,
    pub reference_match: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadReport {
    pub q_active: usize,
    pub mode: MeasureMode,
    pub r_measured: BigRational,
    /// Mean total bits over the runs, divided by `N * D * V`.
    pub l_measured: BigRational,
    pub per_active_set: Vec<ActiveSetResult>,
    pub closed_form: LoadPair,
    /// `l_measured == closed_form.l`. Only meaningful as a pass/fail signal
    /// in exhaustive mode; a sample average need not hit the mean exactly.
    pub matches: bool,
    pub all_reference_match: bool,
}

/// Largest active-set count enumerated in exhaustive mode.
pub const MAX_EXHAUSTIVE_SETS: u64 = 1 << 20;

/// Run every selected active set (in parallel) and average.
pub fn measure_loads(
    pda: &Pda,
    job: &JobSpec,
    q_active: usize,
    mode: MeasureMode,
) -> Result<LoadReport, EngineError> {
    let k = pda.k();
    if q_active == 0 || q_active > k {
        return Err(EngineError::ActiveSize { q: q_active, k });
    }
    let closed_form = achieved_load(pda, q_active)?;
    let workload = Workload::new(pda, job)?;
    let sets: Vec<Vec<usize>> = match mode {
        MeasureMode::Exhaustive => {
            let count = binomial_u64(k, q_active).unwrap_or(u64::MAX);
            if count > MAX_EXHAUSTIVE_SETS {
                return Err(EngineError::TooManySets {
                    count,
                    limit: MAX_EXHAUSTIVE_SETS,
                });
            }
            k_subsets(k, q_active).collect()
        }
        MeasureMode::Sample { count, seed } => {
            if count == 0 {
                return Err(EngineError::InvalidJob(
                    "sample count must be positive".into(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let mut s = rand::seq::index::sample(&mut rng, k, q_active).into_vec();
                    s.sort_unstable();
                    s
                })
                .collect()
        }
    };

    let per_active_set = sets
        .par_iter()
        .map(|active| {
            workload.run(pda, active).map(|rep| ActiveSetResult {
                active: rep.active,
                total_bits: rep.total_bits,
                reference_match: rep.reference_match,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let bits: BigInt = per_active_set
        .iter()
        .map(|r| BigInt::from(r.total_bits))
        .sum();
    let denom = BigInt::from(per_active_set.len())
        * BigInt::from(job.n_files)
        * BigInt::from(job.d_functions)
        * BigInt::from(job.v_bits);
    let l_measured = BigRational::new(bits, denom);
    Ok(LoadReport {
        q_active,
        mode,
        r_measured: workload.placement().storage_load(),
        matches: l_measured == closed_form.l,
        all_reference_match: per_active_set.iter().all(|r| r.reference_match),
        l_measured,
        per_active_set,
        closed_form,
    })
}

/// Part counts `g - 1 >= 2` produced by some size-`q` active set, per
/// symbol of the full array.
///
/// A symbol with `g` occurrences keeps between `max(0, g - (K - q))` and
/// `min(g, q)` of them, and every value in that range is reachable.
fn split_parts_by_symbol(pda: &Pda, q_active: usize) -> impl Iterator<Item = (u32, usize)> + '_ {
    let k = pda.k();
    pda.occurrences()
        .into_iter()
        .enumerate()
        .flat_map(move |(idx, places)| {
            let g = places.len();
            let lo = g.saturating_sub(k - q_active.min(k)).max(3);
            (lo..=g.min(q_active)).map(move |kept| (idx as u32 + 1, kept - 1))
        })
}

/// Every part count `g - 1 >= 2` that some size-`q` active set produces.
pub fn required_split_parts(pda: &Pda, q_active: usize) -> BTreeSet<usize> {
    split_parts_by_symbol(pda, q_active)
        .map(|(_, p)| p)
        .collect()
}

/// Reject jobs where some size-`q` active set would have to cut a block
/// into unequal parts. Assumes `F | N` and `q | D`.
pub fn check_split_divisibility(
    pda: &Pda,
    job: &JobSpec,
    q_active: usize,
) -> Result<(), EngineError> {
    let block_bits = (job.n_files / pda.f()) * (job.d_functions / q_active.max(1)) * job.v_bits;
    match split_parts_by_symbol(pda, q_active).find(|&(_, p)| !block_bits.is_multiple_of(p)) {
        Some((symbol, parts)) => Err(EngineError::SplitDivisibility {
            symbol,
            parts,
            block_bits,
        }),
        None => Ok(()),
    }
}

/// Smallest `V' >= job.v_bits` for which every split of every size-`q`
/// active set lands on a bit boundary.
pub fn minimal_v_bits(pda: &Pda, job: &JobSpec, q_active: usize) -> usize {
    let lcm = required_split_parts(pda, q_active)
        .into_iter()
        .fold(1usize, |acc, p| acc.lcm(&p));
    let eta = (job.n_files / pda.f()).max(1);
    let per_v = eta * (job.d_functions / q_active.max(1)).max(1);
    let step = lcm / lcm.gcd(&per_v);
    job.v_bits.div_ceil(step).max(1) * step
}
