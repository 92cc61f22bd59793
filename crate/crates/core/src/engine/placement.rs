//! File placement derived from the Star pattern of the full array.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::job::JobSpec;
use super::EngineError;
use crate::pda::Pda;

/// Which batches, and hence which files, each node stores.
///
/// Files are grouped into `F` consecutive batches of `eta` files; batch `i`
/// holds files `i*eta .. (i+1)*eta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    k_nodes: usize,
    n_files: usize,
    eta: usize,
    batches: Vec<Vec<usize>>,
    stored: Vec<Vec<bool>>,
}

impl Placement {
    pub fn k_nodes(&self) -> usize {
        self.k_nodes
    }

    pub fn n_files(&self) -> usize {
        self.n_files
    }

    /// Files per batch.
    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn n_batches(&self) -> usize {
        self.n_files / self.eta
    }

    /// Batch indices stored at `node`, ascending.
    pub fn batches(&self, node: usize) -> &[usize] {
        &self.batches[node]
    }

    pub fn batch_files(&self, batch: usize) -> std::ops::Range<usize> {
        batch * self.eta..(batch + 1) * self.eta
    }

    /// File indices stored at `node`, ascending.
    pub fn files(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.batches[node]
            .iter()
            .flat_map(move |&b| self.batch_files(b))
    }

    pub fn stores_batch(&self, node: usize, batch: usize) -> bool {
        self.stored[node][batch]
    }

    pub fn stores_file(&self, node: usize, file: usize) -> bool {
        self.stored[node][file / self.eta]
    }

    /// Number of nodes holding `file`.
    pub fn replication(&self, file: usize) -> usize {
        (0..self.k_nodes)
            .filter(|&k| self.stores_file(k, file))
            .count()
    }

    /// `sum_k |M_k| / N`.
    pub fn storage_load(&self) -> BigRational {
        let total: usize = (0..self.k_nodes)
            .map(|k| self.batches[k].len() * self.eta)
            .sum();
        BigRational::new(BigInt::from(total), BigInt::from(self.n_files))
    }
}

/// Node `k` stores batch `i` iff `grid[i][k]` is a Star.
pub fn build_placement(pda: &Pda, job: &JobSpec) -> Result<Placement, EngineError> {
    job.validate()?;
    let f = pda.f();
    if !job.n_files.is_multiple_of(f) {
        return Err(EngineError::BatchDivisibility { f, n: job.n_files });
    }
    let k_nodes = pda.k();
    let mut batches = vec![Vec::new(); k_nodes];
    let mut stored = vec![vec![false; f]; k_nodes];
    for (i, row) in pda.rows().enumerate() {
        for (k, e) in row.iter().enumerate() {
            if e.is_star() {
                batches[k].push(i);
                stored[k][i] = true;
            }
        }
    }
    Ok(Placement {
        k_nodes,
        n_files: job.n_files,
        eta: job.n_files / f,
        batches,
        stored,
    })
}

/// `u -> a_u`: how many files are stored at exactly `u` nodes. Only
/// replication counts that occur are listed.
pub fn storage_profile(placement: &Placement) -> BTreeMap<usize, usize> {
    let mut profile = BTreeMap::new();
    for batch in 0..placement.n_batches() {
        let u = (0..placement.k_nodes)
            .filter(|&k| placement.stores_batch(k, batch))
            .count();
        *profile.entry(u).or_insert(0) += placement.eta;
    }
    profile
}
