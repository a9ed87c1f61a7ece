//! Full join followed by a sort: the baseline the any-k enumerators beat on
//! small k.

use std::cmp::Ordering;

use super::{require_annotated, EnumError, EnumStats, RankedEnumerator};
use crate::dpgraph::{Solution, StateId, TdpInstance};
use crate::ranking::Dioid;

/// All answers, sorted by weight and then by state ids.
pub struct BatchResult<W> {
    l: usize,
    states: Vec<StateId>,
    weights: Vec<W>,
    order: Vec<u32>,
}

pub fn batch_yannakakis_sort<D: Dioid>(
    inst: &TdpInstance<D>,
    output_cap: u64,
) -> Result<BatchResult<D::Weight>, EnumError> {
    require_annotated(inst)?;
    let total = inst.count_answers();
    if total > output_cap as u128 || total > u32::MAX as u128 {
        return Err(EnumError::OutputBudgetExceeded { cap: output_cap });
    }
    let l = inst.num_positions();
    let d = inst.dioid();
    let n = total as usize;
    let mut states = Vec::with_capacity(n * l);
    let mut weights = Vec::with_capacity(n);

    if n > 0 {
        let mut cur = vec![0 as StateId; l];
        let mut idx = vec![0usize; l + 1];
        let mut acc = vec![d.one(); l + 1];
        let mut j = 1;
        loop {
            let parent = inst.parent_pos(j);
            let ps = if parent == 0 { 0 } else { cur[parent - 1] };
            let members = inst.members(inst.bucket_for(ps, j));
            if idx[j] < members.len() {
                let v = members[idx[j]];
                idx[j] += 1;
                cur[j - 1] = v;
                acc[j] = d.combine(&acc[j - 1], inst.own_weight(v));
                if j == l {
                    states.extend_from_slice(&cur);
                    weights.push(acc[l].clone());
                } else {
                    j += 1;
                    idx[j] = 0;
                }
            } else if j == 1 {
                break;
            } else {
                j -= 1;
            }
        }
    }

    let mut order: Vec<u32> = (0..weights.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        let (a, b) = (a as usize, b as usize);
        match d.compare(&weights[a], &weights[b]) {
            Ordering::Equal => states[a * l..(a + 1) * l].cmp(&states[b * l..(b + 1) * l]),
            o => o,
        }
    });
    Ok(BatchResult {
        l,
        states,
        weights,
        order,
    })
}

impl<W: Clone> BatchResult<W> {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn get(&self, k: usize) -> Solution<W> {
        let i = self.order[k] as usize;
        Solution {
            states: self.states[i * self.l..(i + 1) * self.l].to_vec(),
            weight: self.weights[i].clone(),
        }
    }

    pub fn into_solutions(self) -> BatchSolutions<W> {
        BatchSolutions { result: self, next: 0 }
    }
}

pub struct BatchSolutions<W> {
    result: BatchResult<W>,
    next: usize,
}

impl<W: Clone> Iterator for BatchSolutions<W> {
    type Item = Solution<W>;
    fn next(&mut self) -> Option<Solution<W>> {
        if self.next >= self.result.len() {
            return None;
        }
        self.next += 1;
        Some(self.result.get(self.next - 1))
    }
}

impl<D: Dioid> RankedEnumerator<D> for BatchSolutions<D::Weight> {
    fn stats(&self) -> EnumStats {
        EnumStats::default()
    }
}
