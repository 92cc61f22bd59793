//! One run of the coded shuffle for a fixed active set.
//!
//! Each node only reads intermediate values of files it stores; everything
//! else it must rebuild from received signals. Any attempt to read an
//! unstored value, or a missing signal, is reported as
//! [`EngineError::Decode`].

use std::collections::BTreeMap;

use bitvec::prelude::*;

use super::job::{fnv1a64, pack, reference_oracle, to_hex, Bits, IvaTable, JobSpec};
use super::placement::{build_placement, Placement};
use super::plan::{plan_active_set, ActiveSetPlan};
use super::EngineError;
use crate::pda::{Pda, PdaEntry};

/// A multicast message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signal {
    pub sender: usize,
    pub symbol: u32,
    pub payload: Bits,
}

/// Outcome of one active set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptReport {
    pub active: Vec<usize>,
    /// Bits sent by each active node.
    pub node_bits: BTreeMap<usize, u64>,
    /// Bits contributed by each symbol present in the subarray.
    pub symbol_bits: BTreeMap<u32, u64>,
    pub total_bits: u64,
    /// Per active node, its reduced outputs as hex, keyed by function index.
    pub outputs: BTreeMap<usize, BTreeMap<usize, String>>,
    pub reference_match: bool,
    /// FNV-1a over every signal (sender, symbol, length, payload) in send
    /// order; equal digests mean bit-identical transcripts.
    pub transcript_digest: String,
}

/// Placement, map output and reference outputs for a job, computed once
/// and shared by every active set.
#[derive(Clone, Debug)]
pub struct Workload {
    job: JobSpec,
    placement: Placement,
    ivas: IvaTable,
    reference: Vec<Bits>,
}

impl Workload {
    pub fn new(pda: &Pda, job: &JobSpec) -> Result<Workload, EngineError> {
        let placement = build_placement(pda, job)?;
        Ok(Workload {
            job: job.clone(),
            placement,
            ivas: IvaTable::compute(job),
            reference: reference_oracle(job),
        })
    }

    pub fn job(&self) -> &JobSpec {
        &self.job
    }

    pub fn placement(&self) -> &Placement {
        &self.placement
    }

    pub fn reference(&self) -> &[Bits] {
        &self.reference
    }

    /// Bit length of one block `U_{i,j}`: `eta * (D/Q) * V`.
    pub fn block_bits(&self, q: usize) -> usize {
        self.placement.eta() * (self.job.d_functions / q) * self.job.v_bits
    }

    /// Plan, shuffle, decode and reduce for `active`.
    pub fn run(&self, pda: &Pda, active: &[usize]) -> Result<TranscriptReport, EngineError> {
        let plan = plan_active_set(pda, active, &self.job)?;
        let block_bits = self.block_bits(plan.q());
        for (&s, places) in &plan.occurrences {
            let parts = places.len() - 1;
            if parts > 1 && !block_bits.is_multiple_of(parts) {
                return Err(EngineError::SplitDivisibility {
                    symbol: s,
                    parts,
                    block_bits,
                });
            }
        }

        let signals = self.shuffle(&plan)?;
        let mut node_bits: BTreeMap<usize, u64> = plan.active.iter().map(|&k| (k, 0)).collect();
        let mut symbol_bits: BTreeMap<u32, u64> =
            plan.occurrences.keys().map(|&s| (s, 0)).collect();
        let mut digest_input = Vec::new();
        for sig in &signals {
            let len = sig.payload.len() as u64;
            *node_bits.get_mut(&sig.sender).expect("active sender") += len;
            *symbol_bits.get_mut(&sig.symbol).expect("present symbol") += len;
            digest_input.extend_from_slice(&(sig.sender as u64).to_le_bytes());
            digest_input.extend_from_slice(&(sig.symbol as u64).to_le_bytes());
            digest_input.extend_from_slice(&len.to_le_bytes());
            digest_input.extend_from_slice(&pack(&sig.payload));
        }
        let received: BTreeMap<(usize, u32), &BitSlice<u8, Msb0>> = signals
            .iter()
            .map(|sig| ((sig.sender, sig.symbol), sig.payload.as_bitslice()))
            .collect();

        let mut outputs = BTreeMap::new();
        let mut reference_match = true;
        for &k in &plan.active {
            let reduced = self.reduce_at(&plan, k, &received)?;
            let mut hex_out = BTreeMap::new();
            for (d, bits) in reduced {
                reference_match &= bits == self.reference[d];
                hex_out.insert(d, to_hex(&bits));
            }
            outputs.insert(k, hex_out);
        }

        Ok(TranscriptReport {
            active: plan.active.clone(),
            total_bits: node_bits.values().sum(),
            node_bits,
            symbol_bits,
            outputs,
            reference_match,
            transcript_digest: format!("{:016x}", fnv1a64(&[&digest_input])),
        })
    }

    fn view(&self, node: usize) -> NodeView<'_> {
        NodeView {
            node,
            placement: &self.placement,
            ivas: &self.ivas,
        }
    }

    /// Every signal, ordered by sender then symbol.
    fn shuffle(&self, plan: &ActiveSetPlan) -> Result<Vec<Signal>, EngineError> {
        let mut signals = Vec::new();
        for &k in &plan.active {
            let view = self.view(k);
            let mut mine: BTreeMap<u32, Bits> = BTreeMap::new();
            for s in plan.singletons_of(k) {
                let (row, node) = plan.occurrences[&s][0];
                mine.insert(s, view.block(plan, row, node)?);
            }
            for &s in &plan.coded_symbols[&k] {
                let places = &plan.occurrences[&s];
                let parts = places.len() - 1;
                let mut payload: Option<Bits> = None;
                for &(row, node) in places.iter().filter(|&&(_, n)| n != k) {
                    let idx = plan
                        .part_index(row, node, k)
                        .ok_or_else(|| missing_label(row, node, k))?;
                    let block = view.block(plan, row, node)?;
                    let part = split(&block, parts, idx);
                    match payload.as_mut() {
                        None => payload = Some(part.to_bitvec()),
                        Some(acc) => xor_into(acc, part),
                    }
                }
                mine.insert(s, payload.expect("coded symbol has another occurrence"));
            }
            signals.extend(mine.into_iter().map(|(symbol, payload)| Signal {
                sender: k,
                symbol,
                payload,
            }));
        }
        Ok(signals)
    }

    /// Rebuild the missing blocks at node `k` and evaluate its functions.
    fn reduce_at(
        &self,
        plan: &ActiveSetPlan,
        k: usize,
        received: &BTreeMap<(usize, u32), &BitSlice<u8, Msb0>>,
    ) -> Result<Vec<(usize, Bits)>, EngineError> {
        let view = self.view(k);
        let fetch = |sender: usize, s: u32| {
            received.get(&(sender, s)).copied().ok_or_else(|| {
                EngineError::Decode(format!(
                    "node {k} expects a signal for symbol {s} from node {sender}"
                ))
            })
        };
        let functions = &plan.reduce_assignment[&k];
        let eta = self.placement.eta();
        let v = self.job.v_bits;
        let mut recovered: BTreeMap<(usize, usize), Bits> = BTreeMap::new();

        for row in 0..self.placement.n_batches() {
            let s = match plan.subarray.get(row, position(plan, k)) {
                PdaEntry::Star => continue,
                PdaEntry::Symbol(s) => s,
            };
            let places = &plan.occurrences[&s];
            let block: Bits = if places.len() == 1 {
                fetch(plan.singleton_assignment[&s], s)?.to_bitvec()
            } else {
                let parts = places.len() - 1;
                let labels = &plan.split_plan[&(row, k)];
                let mut block = Bits::with_capacity(self.block_bits(plan.q()));
                for &sender in labels {
                    let mut piece = fetch(sender, s)?.to_bitvec();
                    // Cancel the other blocks the sender folded in; node k
                    // stores each of their batches.
                    for &(r2, n2) in places.iter().filter(|&&(_, n)| n != k && n != sender) {
                        let idx = plan
                            .part_index(r2, n2, sender)
                            .ok_or_else(|| missing_label(r2, n2, sender))?;
                        let other = view.block(plan, r2, n2)?;
                        xor_into(&mut piece, split(&other, parts, idx));
                    }
                    block.extend_from_bitslice(&piece);
                }
                block
            };
            if block.len() != functions.len() * eta * v {
                return Err(EngineError::Decode(format!(
                    "node {k} rebuilt {} bits for row {row}, expected {}",
                    block.len(),
                    functions.len() * eta * v
                )));
            }
            let mut chunks = block.chunks(v);
            for &d in functions {
                for n in self.placement.batch_files(row) {
                    recovered.insert((d, n), chunks.next().expect("length checked").to_bitvec());
                }
            }
        }

        let mut out = Vec::with_capacity(functions.len());
        for &d in functions {
            let mut values = Vec::with_capacity(self.job.n_files);
            for n in 0..self.job.n_files {
                let value = if self.placement.stores_file(k, n) {
                    view.iva(d, n)?
                } else {
                    recovered
                        .get(&(d, n))
                        .map(|b| b.as_bitslice())
                        .ok_or_else(|| {
                            EngineError::Decode(format!("node {k} lacks value ({d}, {n})"))
                        })?
                };
                values.push(value);
            }
            out.push((d, self.job.reduce(d, values)));
        }
        Ok(out)
    }
}

/// Convenience wrapper: build the workload and run one active set.
pub fn run_transcript(
    pda: &Pda,
    job: &JobSpec,
    active: &[usize],
) -> Result<TranscriptReport, EngineError> {
    Workload::new(pda, job)?.run(pda, active)
}

/// Access-controlled map output of one node.
struct NodeView<'a> {
    node: usize,
    placement: &'a Placement,
    ivas: &'a IvaTable,
}

impl NodeView<'_> {
    fn iva(&self, d: usize, n: usize) -> Result<&BitSlice<u8, Msb0>, EngineError> {
        if !self.placement.stores_file(self.node, n) {
            return Err(EngineError::Decode(format!(
                "node {} read file {n}, which it does not store",
                self.node
            )));
        }
        Ok(self.ivas.get(d, n))
    }

    /// `U_{row,target}`: the values of `target`'s functions on batch `row`,
    /// ordered by function then file.
    fn block(&self, plan: &ActiveSetPlan, row: usize, target: usize) -> Result<Bits, EngineError> {
        let mut out = Bits::new();
        for &d in &plan.reduce_assignment[&target] {
            for n in self.placement.batch_files(row) {
                out.extend_from_bitslice(self.iva(d, n)?);
            }
        }
        Ok(out)
    }
}

fn position(plan: &ActiveSetPlan, node: usize) -> usize {
    plan.active.binary_search(&node).expect("active node")
}

fn split(block: &BitSlice<u8, Msb0>, parts: usize, idx: usize) -> &BitSlice<u8, Msb0> {
    let len = block.len() / parts;
    &block[idx * len..(idx + 1) * len]
}

fn xor_into(acc: &mut BitSlice<u8, Msb0>, other: &BitSlice<u8, Msb0>) {
    debug_assert_eq!(acc.len(), other.len());
    for (mut a, b) in acc.iter_mut().zip(other.iter().by_vals()) {
        *a ^= b;
    }
}

fn missing_label(row: usize, node: usize, label: usize) -> EngineError {
    EngineError::Decode(format!(
        "block ({row}, {node}) has no part labelled {label}"
    ))
}
