//! Lawler-style partitioning: every output spawns one candidate per
//! position at or after its own deviation point.

use super::heap::Heap;
use super::successor::{Successors, Variant};
use super::{entry_less, expand, require_annotated, EnumError, EnumStats, Entry, Frame, Plan, RankedEnumerator};
use crate::dpgraph::{Solution, StateId, TdpInstance, NIL};
use crate::ranking::Dioid;

/// A candidate: the solution of `parent` up to `pos - 1`, then `state` at
/// `pos` (its bucket's member of rank `rank`), then best members.
struct Node {
    parent: u32,
    pos: u32,
    state: StateId,
    rank: u32,
    origin: u64,
}

/// Where an output came from: the rank of the answer it deviates from and
/// the position of the deviation. The first answer has no origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    pub origin: Option<u64>,
    pub position: usize,
}

pub struct Part<'a, D: Dioid> {
    inst: &'a TdpInstance<D>,
    plan: Plan,
    succ: Successors,
    nodes: Vec<Node>,
    heap: Heap<Entry<D::Weight, u32>>,
    seq: u64,
    started: bool,
    emitted: u64,
    stats: EnumStats,
    last: Option<Provenance>,
    chain: Vec<(usize, StateId)>,
    states: Vec<StateId>,
}

pub fn anyk_part<D: Dioid>(inst: &TdpInstance<D>, variant: Variant) -> Result<Part<'_, D>, EnumError> {
    require_annotated(inst)?;
    Ok(Part {
        inst,
        plan: Plan::new(inst),
        succ: Successors::new(inst, variant),
        nodes: Vec::new(),
        heap: Heap::new(),
        seq: 0,
        started: false,
        emitted: 0,
        stats: EnumStats::default(),
        last: None,
        chain: Vec::new(),
        states: Vec::new(),
    })
}

impl<D: Dioid> Part<'_, D> {
    /// Provenance of the most recent output.
    pub fn provenance(&self) -> Option<Provenance> {
        self.last
    }

    fn push(&mut self, node: Node, w: D::Weight) {
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        let d = self.inst.dioid();
        self.heap.push(
            Entry {
                w,
                seq: self.seq,
                item: id,
            },
            &|a, b| entry_less(d, a, b),
        );
        self.seq += 1;
        self.stats.pq_pushes += 1;
        self.stats.max_pq_size = self.stats.max_pq_size.max(self.heap.len() as u64);
    }
}

impl<D: Dioid> Iterator for Part<'_, D> {
    type Item = Solution<D::Weight>;

    fn next(&mut self) -> Option<Solution<D::Weight>> {
        let inst = self.inst;
        let d = inst.dioid();
        if !self.started {
            self.started = true;
            if let (Some(v), Some(w)) = (inst.best(inst.source_bucket()), inst.top_weight()) {
                self.push(
                    Node {
                        parent: NIL,
                        pos: 1,
                        state: v,
                        rank: 0,
                        origin: u64::MAX,
                    },
                    w,
                );
                self.stats.init_pushes += 1;
            }
        }
        let top = self.heap.pop(&|a, b| entry_less(d, a, b))?;
        self.stats.pq_pops += 1;
        let n = top.item;
        self.emitted += 1;
        let rank = self.emitted;

        self.chain.clear();
        let mut cur = n;
        while cur != NIL {
            let node = &self.nodes[cur as usize];
            self.chain.push((node.pos as usize, node.state));
            cur = node.parent;
        }
        self.chain.reverse();
        let l = self.plan.l;
        expand(inst, &self.chain, l, &mut self.states);

        let (i, own_rank, own_parent, origin) = {
            let node = &self.nodes[n as usize];
            (node.pos as usize, node.rank, node.parent, node.origin)
        };
        self.last = Some(Provenance {
            origin: (origin != u64::MAX).then_some(origin),
            position: i,
        });

        let frame = Frame::new(inst, &self.plan, &self.states);
        for j in i..=l {
            let r = if j == i { own_rank as usize } else { 0 };
            let parent = self.plan.parent[j];
            let ps = if parent == 0 { 0 } else { self.states[parent - 1] };
            let b = inst.bucket_for(ps, j);
            let Some(alt) = self.succ.child_at(inst, b, r + 1) else {
                continue;
            };
            let w = d.combine(
                &d.combine(&frame.prefix[j - 1], inst.beta(alt)),
                &frame.frontier(d, &self.plan, j),
            );
            self.push(
                Node {
                    parent: if j == i { own_parent } else { n },
                    pos: j as u32,
                    state: alt,
                    rank: r as u32 + 1,
                    origin: rank,
                },
                w,
            );
        }

        Some(Solution {
            states: self.states.clone(),
            weight: top.w,
        })
    }
}

impl<D: Dioid> RankedEnumerator<D> for Part<'_, D> {
    fn stats(&self) -> EnumStats {
        EnumStats {
            pq_cmps: self.heap.cmps + self.succ.cmps,
            succ_calls: self.succ.calls,
            ..self.stats
        }
    }
}
