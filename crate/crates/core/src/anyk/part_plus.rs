//! Partitioning with suffix reuse.
//!
//! The stages are cut into consecutive groups. At the end of each group the
//! buckets that the next group hangs from form a key; two prefixes with the
//! same key have exactly the same set of suffixes, and under a strongly
//! monotone ranking the same suffix order too. The first prefix to reach a
//! key (its leader) explores the suffixes with ordinary deviations and
//! records them in rank order. Every later prefix with that key becomes a
//! follower that just walks the recorded list, so the queue holds at most
//! one candidate per key.

use std::collections::HashMap;

use super::heap::Heap;
use super::successor::{Successors, Variant};
use super::{
    entry_less, expand, require_annotated, require_strong, EnumError, EnumStats, Entry, Frame, Plan,
    RankedEnumerator,
};
use crate::dpgraph::{BucketId, Solution, StateId, TdpInstance, NIL};
use crate::query::SerialDecomposition;
use crate::ranking::Dioid;

struct Node {
    parent: u32,
    pos: u32,
    state: StateId,
    rank: u32,
}

enum Cand<W> {
    Prefix(u32),
    Follower(Follower<W>),
}

struct Follower<W> {
    node: u32,
    boundary: usize,
    entry: u32,
    rank: u32,
    prefix_w: W,
}

struct StoreEntry<W> {
    suffixes: Vec<(u32, W)>,
    waiting: Vec<(u32, W)>,
    leader: Box<[StateId]>,
}

pub struct PartPlus<'a, D: Dioid> {
    inst: &'a TdpInstance<D>,
    plan: Plan,
    succ: Successors,
    /// Last position of every group except the final one.
    ends: Vec<usize>,
    /// Positions of the next group whose parents lie in earlier groups.
    key_positions: Vec<Vec<usize>>,
    nodes: Vec<Node>,
    cands: Vec<Option<Cand<D::Weight>>>,
    heap: Heap<Entry<D::Weight, u32>>,
    keys: Vec<HashMap<Box<[BucketId]>, u32>>,
    entries: Vec<StoreEntry<D::Weight>>,
    solutions: Vec<Box<[StateId]>>,
    seq: u64,
    started: bool,
    stats: EnumStats,
    audit_failures: u64,
    chain: Vec<(usize, StateId)>,
    states: Vec<StateId>,
}

/// `decomposition` groups join-tree nodes; `None` uses one group per BFS level.
pub fn anyk_part_plus<'a, D: Dioid>(
    inst: &'a TdpInstance<D>,
    variant: Variant,
    decomposition: Option<&SerialDecomposition>,
) -> Result<PartPlus<'a, D>, EnumError> {
    require_annotated(inst)?;
    require_strong(inst.dioid())?;
    let l = inst.num_positions();
    let groups: Vec<Vec<usize>> = match decomposition {
        None => inst.levels()[1..].iter().map(|r| r.clone().collect()).collect(),
        Some(sd) => {
            let mut pos_of_atom = HashMap::new();
            for p in 1..=l {
                pos_of_atom.insert(inst.position(p).atom, p);
            }
            let mut gs = Vec::new();
            for v in &sd.vertices {
                let mut g = Vec::new();
                for n in v {
                    let p = *pos_of_atom.get(n).ok_or_else(|| {
                        EnumError::Config(format!("decomposition names unknown join-tree node {n}"))
                    })?;
                    g.push(p);
                }
                g.sort_unstable();
                gs.push(g);
            }
            gs
        }
    };
    let mut expected = 1;
    let mut group_of = vec![0; l + 1];
    for (gi, g) in groups.iter().enumerate() {
        for &p in g {
            if p != expected {
                return Err(EnumError::Config(
                    "decomposition groups must cover consecutive stages in BFS order".into(),
                ));
            }
            group_of[p] = gi;
            expected += 1;
        }
    }
    if expected != l + 1 {
        return Err(EnumError::Config("decomposition must cover every stage once".into()));
    }
    for p in 2..=l {
        let pp = inst.parent_pos(p);
        if group_of[pp] + 1 < group_of[p] {
            return Err(EnumError::Config(
                "every stage must share a group with its parent or follow it directly".into(),
            ));
        }
    }
    let mut ends = Vec::new();
    let mut key_positions = Vec::new();
    for gi in 0..groups.len().saturating_sub(1) {
        ends.push(*groups[gi].last().unwrap());
        key_positions.push(
            groups[gi + 1]
                .iter()
                .copied()
                .filter(|&p| group_of[inst.parent_pos(p)] < gi + 1)
                .collect(),
        );
    }
    let nb = ends.len();
    Ok(PartPlus {
        inst,
        plan: Plan::new(inst),
        succ: Successors::new(inst, variant),
        ends,
        key_positions,
        nodes: Vec::new(),
        cands: Vec::new(),
        heap: Heap::new(),
        keys: (0..nb).map(|_| HashMap::new()).collect(),
        entries: Vec::new(),
        solutions: Vec::new(),
        seq: 0,
        started: false,
        stats: EnumStats::default(),
        audit_failures: 0,
        chain: Vec::new(),
        states: Vec::new(),
    })
}

impl<D: Dioid> PartPlus<'_, D> {
    /// Number of times a suffix was recorded under a key by a prefix other
    /// than the key's leader. Always zero for a correct run.
    pub fn audit_failures(&self) -> u64 {
        self.audit_failures
    }

    fn push(&mut self, cand: Cand<D::Weight>, w: D::Weight) {
        let id = self.cands.len() as u32;
        self.cands.push(Some(cand));
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

    fn key(&self, boundary: usize, states: &[StateId]) -> Box<[BucketId]> {
        self.key_positions[boundary]
            .iter()
            .map(|&p| {
                let pp = self.plan.parent[p];
                self.inst.bucket_for(states[pp - 1], p)
            })
            .collect()
    }

    fn follow(&mut self, node: u32, boundary: usize, entry: u32, rank: u32, prefix_w: D::Weight) {
        let e = &mut self.entries[entry as usize];
        if let Some((_, sw)) = e.suffixes.get(rank as usize) {
            let w = self.inst.dioid().combine(&prefix_w, sw);
            self.push(
                Cand::Follower(Follower {
                    node,
                    boundary,
                    entry,
                    rank,
                    prefix_w,
                }),
                w,
            );
        } else {
            debug_assert_eq!(rank as usize, e.suffixes.len());
            let marker = self.cands.len() as u32;
            self.cands.push(Some(Cand::Follower(Follower {
                node,
                boundary,
                entry,
                rank,
                prefix_w: prefix_w.clone(),
            })));
            e.waiting.push((marker, prefix_w));
        }
    }

    /// Records the suffixes of the current solution at every boundary before
    /// `upto`, creating keys where needed.
    fn store(&mut self, upto: usize, sol_id: u32, suffix_w: &[D::Weight]) {
        let d = self.inst.dioid().clone();
        for b in 0..upto {
            let e_l = self.ends[b];
            let key = self.key(b, &self.states);
            let entry = match self.keys[b].get(&key) {
                Some(&e) => e,
                None => {
                    let e = self.entries.len() as u32;
                    self.entries.push(StoreEntry {
                        suffixes: Vec::new(),
                        waiting: Vec::new(),
                        leader: self.states[..e_l].into(),
                    });
                    self.keys[b].insert(key, e);
                    e
                }
            };
            let ent = &mut self.entries[entry as usize];
            if *ent.leader != self.states[..e_l] {
                self.audit_failures += 1;
            }
            let sw = suffix_w[e_l + 1].clone();
            ent.suffixes.push((sol_id, sw.clone()));
            let waiting = std::mem::take(&mut ent.waiting);
            for (marker, pw) in waiting {
                let w = d.combine(&pw, &sw);
                let cand = self.cands[marker as usize].take().expect("waiting follower");
                self.push(cand, w);
            }
        }
    }

    fn suffix_weights(&self) -> Vec<D::Weight> {
        let d = self.inst.dioid();
        let l = self.plan.l;
        let mut s = vec![d.one(); l + 2];
        for k in (1..=l).rev() {
            s[k] = d.combine(self.inst.own_weight(self.states[k - 1]), &s[k + 1]);
        }
        s
    }

    fn load_chain(&mut self, n: u32) {
        self.chain.clear();
        let mut cur = n;
        while cur != NIL {
            let node = &self.nodes[cur as usize];
            self.chain.push((node.pos as usize, node.state));
            cur = node.parent;
        }
        self.chain.reverse();
    }
}

impl<D: Dioid> Iterator for PartPlus<'_, D> {
    type Item = Solution<D::Weight>;

    fn next(&mut self) -> Option<Solution<D::Weight>> {
        let inst = self.inst;
        let d = inst.dioid().clone();
        let l = self.plan.l;
        if !self.started {
            self.started = true;
            if let (Some(v), Some(w)) = (inst.best(inst.source_bucket()), inst.top_weight()) {
                self.nodes.push(Node {
                    parent: NIL,
                    pos: 1,
                    state: v,
                    rank: 0,
                });
                self.push(Cand::Prefix(0), w);
                self.stats.init_pushes += 1;
            }
        }
        let top = self.heap.pop(&|a, b| entry_less(&d, a, b))?;
        self.stats.pq_pops += 1;
        let cand = self.cands[top.item as usize].take().expect("candidate popped once");
        let sol_id = self.solutions.len() as u32;

        match cand {
            Cand::Follower(f) => {
                let e_l = self.ends[f.boundary];
                self.load_chain(f.node);
                let chain = std::mem::take(&mut self.chain);
                expand(inst, &chain, e_l, &mut self.states);
                self.chain = chain;
                let src = self.entries[f.entry as usize].suffixes[f.rank as usize].0;
                let tail: Vec<StateId> = self.solutions[src as usize][e_l..].to_vec();
                self.states.extend(tail);
                self.solutions.push(self.states.as_slice().into());
                self.follow(f.node, f.boundary, f.entry, f.rank + 1, f.prefix_w);
                let sw = self.suffix_weights();
                self.store(f.boundary, sol_id, &sw);
            }
            Cand::Prefix(n) => {
                self.load_chain(n);
                let chain = std::mem::take(&mut self.chain);
                expand(inst, &chain, l, &mut self.states);
                self.chain = chain;
                self.solutions.push(self.states.as_slice().into());
                let (i, own_rank, own_parent) = {
                    let node = &self.nodes[n as usize];
                    (node.pos as usize, node.rank, node.parent)
                };

                let mut found = None;
                for b in 0..self.ends.len() {
                    if self.ends[b] < i {
                        continue;
                    }
                    let key = self.key(b, &self.states);
                    if let Some(&e) = self.keys[b].get(&key) {
                        found = Some((b, e));
                        break;
                    }
                }
                let limit = found.map_or(l, |(b, _)| self.ends[b]);

                let frame = Frame::new(inst, &self.plan, &self.states);
                for j in i..=limit {
                    let r = if j == i { own_rank as usize } else { 0 };
                    let parent = self.plan.parent[j];
                    let ps = if parent == 0 { 0 } else { self.states[parent - 1] };
                    let bk = inst.bucket_for(ps, j);
                    let Some(alt) = self.succ.child_at(inst, bk, r + 1) else {
                        continue;
                    };
                    let w = d.combine(
                        &d.combine(&frame.prefix[j - 1], inst.beta(alt)),
                        &frame.frontier(&d, &self.plan, j),
                    );
                    let id = self.nodes.len() as u32;
                    self.nodes.push(Node {
                        parent: if j == i { own_parent } else { n },
                        pos: j as u32,
                        state: alt,
                        rank: r as u32 + 1,
                    });
                    self.push(Cand::Prefix(id), w);
                }

                let upto = match found {
                    Some((b, e)) => {
                        let pw = frame.prefix[self.ends[b]].clone();
                        self.follow(n, b, e, 1, pw);
                        b
                    }
                    None => self.ends.len(),
                };
                let sw = self.suffix_weights();
                self.store(upto, sol_id, &sw);
            }
        }

        Some(Solution {
            states: self.states.clone(),
            weight: top.w,
        })
    }
}

impl<D: Dioid> RankedEnumerator<D> for PartPlus<'_, D> {
    fn stats(&self) -> EnumStats {
        EnumStats {
            pq_cmps: self.heap.cmps + self.succ.cmps,
            succ_calls: self.succ.calls,
            ..self.stats
        }
    }
}
