//! Per-active-set delivery plan: who sends which symbol, how blocks are
//! split, and which output functions each node reduces.

use std::collections::{BTreeMap, BTreeSet};

use super::job::JobSpec;
use super::EngineError;
use crate::pda::{Pda, PdaEntry, SubArray};

/// Everything the shuffle needs to know about one active set, fixed before
/// any bit moves. Node indices are the parent array's (zero-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveSetPlan {
    /// Active nodes, ascending.
    pub active: Vec<usize>,
    pub subarray: SubArray,
    /// Occurrences `(row, node)` of each present symbol, sorted by node.
    pub occurrences: BTreeMap<u32, Vec<(usize, usize)>>,
    /// Symbols occurring once in the subarray, mapped to their sender.
    pub singleton_assignment: BTreeMap<u32, usize>,
    /// Per active node, the multi-occurrence symbols in its column.
    pub coded_symbols: BTreeMap<usize, BTreeSet<u32>>,
    /// For each block `(row, node)` under a multi-occurrence symbol, the
    /// nodes labelling its `g - 1` parts in order.
    pub split_plan: BTreeMap<(usize, usize), Vec<usize>>,
    /// Output functions reduced by each active node.
    pub reduce_assignment: BTreeMap<usize, Vec<usize>>,
}

impl ActiveSetPlan {
    pub fn q(&self) -> usize {
        self.active.len()
    }

    /// `g_s` within this active set; 0 if the symbol is absent.
    pub fn multiplicity(&self, symbol: u32) -> usize {
        self.occurrences.get(&symbol).map_or(0, Vec::len)
    }

    /// Symbols sent uncoded by `node`, ascending.
    pub fn singletons_of(&self, node: usize) -> impl Iterator<Item = u32> + '_ {
        self.singleton_assignment
            .iter()
            .filter(move |(_, &k)| k == node)
            .map(|(&s, _)| s)
    }

    /// Index of `label` among the part labels of block `(row, node)`.
    pub fn part_index(&self, row: usize, node: usize, label: usize) -> Option<usize> {
        self.split_plan
            .get(&(row, node))?
            .iter()
            .position(|&l| l == label)
    }
}

/// Build the plan for `active` (any order, no duplicates).
pub fn plan_active_set(
    pda: &Pda,
    active: &[usize],
    job: &JobSpec,
) -> Result<ActiveSetPlan, EngineError> {
    job.validate()?;
    let mut active = active.to_vec();
    active.sort_unstable();
    let subarray = pda.column_subarray(&active)?;
    let q = active.len();
    if !job.d_functions.is_multiple_of(q) {
        return Err(EngineError::FunctionDivisibility {
            q,
            d: job.d_functions,
        });
    }

    let occurrences = subarray.occurrences();
    let mut singleton_assignment = BTreeMap::new();
    let mut coded_symbols: BTreeMap<usize, BTreeSet<u32>> =
        active.iter().map(|&k| (k, BTreeSet::new())).collect();
    let mut split_plan = BTreeMap::new();

    for (&s, places) in &occurrences {
        if let [(row, _)] = places.as_slice() {
            // Smallest active node holding the batch; one exists because the
            // subarray has no star-free row.
            let sender = active
                .iter()
                .copied()
                .find(|&k| pda.get(*row, k) == PdaEntry::Star)
                .ok_or_else(|| EngineError::Decode(format!("no active holder for row {row}")))?;
            singleton_assignment.insert(s, sender);
        } else {
            for &(row, node) in places {
                coded_symbols.get_mut(&node).expect("active node").insert(s);
                let labels = places
                    .iter()
                    .map(|&(_, n)| n)
                    .filter(|&n| n != node)
                    .collect();
                split_plan.insert((row, node), labels);
            }
        }
    }

    let reduce_assignment = active
        .iter()
        .enumerate()
        .map(|(p, &k)| (k, (p..job.d_functions).step_by(q).collect()))
        .collect();

    Ok(ActiveSetPlan {
        active,
        subarray,
        occurrences,
        singleton_assignment,
        coded_symbols,
        split_plan,
        reduce_assignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::p1_pda;
    use crate::pda::{PdaError, EXAMPLE_1};

    fn job(d: usize) -> JobSpec {
        JobSpec {
            n_files: 6,
            d_functions: d,
            w_bits: 64,
            v_bits: 8,
            u_bits: 64,
            seed: 1,
        }
    }

    #[test]
    fn example_one_nodes_124() {
        let pda = Pda::parse(EXAMPLE_1.as_bytes()).unwrap();
        let plan = plan_active_set(&pda, &[3, 0, 1], &job(3)).unwrap();
        assert_eq!(plan.active, vec![0, 1, 3]);
        assert_eq!(
            plan.reduce_assignment,
            BTreeMap::from([(0, vec![0]), (1, vec![1]), (3, vec![2])])
        );
        // Symbols 1, 3 and 4 occur twice and symbol 2 three times, so every
        // symbol is coded and nothing is sent uncoded.
        assert!(plan.singleton_assignment.is_empty());
        assert_eq!(
            (1..=4).map(|s| plan.multiplicity(s)).collect::<Vec<_>>(),
            vec![2, 3, 2, 2]
        );
        assert_eq!(plan.coded_symbols[&0], BTreeSet::from([1, 2, 3]));
        assert_eq!(plan.coded_symbols[&1], BTreeSet::from([1, 2, 4]));
        assert_eq!(plan.coded_symbols[&3], BTreeSet::from([2, 3, 4]));
        // Symbol 2 sits at rows 4, 2, 0 (zero-based) of nodes 0, 1, 3.
        assert_eq!(plan.split_plan[&(4, 0)], vec![1, 3]);
        assert_eq!(plan.split_plan[&(2, 1)], vec![0, 3]);
        assert_eq!(plan.split_plan[&(0, 3)], vec![0, 1]);
    }

    #[test]
    fn singletons_go_to_smallest_holder() {
        // [[*,1,*,2],[2,*,1,*]] restricted to nodes 0..3: symbol 2 is left
        // once, at row 1 of node 0, and node 1 is the first holder of row 1.
        let pda = p1_pda(2, 2).unwrap();
        let plan = plan_active_set(&pda, &[2, 1, 0], &job(3)).unwrap();
        assert_eq!(plan.singleton_assignment, BTreeMap::from([(2, 1)]));
        assert_eq!(plan.singletons_of(1).collect::<Vec<_>>(), vec![2]);
        assert_eq!(
            plan.split_plan,
            BTreeMap::from([((0, 1), vec![2]), ((1, 2), vec![1])])
        );
        assert_eq!(plan.part_index(1, 2, 1), Some(0));
        assert_eq!(plan.coded_symbols[&0], BTreeSet::new());
    }

    #[test]
    fn full_active_set_keeps_array() {
        let pda = Pda::parse(EXAMPLE_1.as_bytes()).unwrap();
        let plan = plan_active_set(&pda, &[0, 1, 2, 3], &job(4)).unwrap();
        assert_eq!(plan.subarray.to_rows(), pda.to_rows());
        assert!(plan.singleton_assignment.is_empty());
    }

    #[test]
    fn outage_and_divisibility() {
        let pda = p1_pda(2, 2).unwrap();
        assert!(matches!(
            plan_active_set(&pda, &[1, 3], &job(2)),
            Err(EngineError::Pda(PdaError::EmptyStarRow { .. }))
        ));
        let ex1 = Pda::parse(EXAMPLE_1.as_bytes()).unwrap();
        assert!(matches!(
            plan_active_set(&ex1, &[0, 1, 2], &job(4)),
            Err(EngineError::FunctionDivisibility { q: 3, d: 4 })
        ));
    }
}
