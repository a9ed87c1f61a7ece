//! Recursive enumeration.
//!
//! Every bucket keeps the ranked list of the sub-solutions rooted at its
//! members, extended on demand from a queue of choices. A state with several
//! child stages combines the ranked lists of its child buckets by
//! partitioning over rank vectors. Lists are shared by every parent that
//! reaches the same bucket, so each sub-solution is ranked once.

use super::heap::Heap;
use super::{entry_less, require_annotated, EnumError, EnumStats, Entry, RankedEnumerator};
use crate::dpgraph::{BucketId, Solution, StateId, TdpInstance};
use crate::ranking::Dioid;

struct BucketList<W> {
    /// `(member, rank of the member's sub-solution, weight incl. the member)`.
    list: Vec<(StateId, u32, W)>,
    heap: Option<Heap<Entry<W, (StateId, u32)>>>,
}

struct ProductList<W> {
    /// Rank vectors over the child buckets, with the combined weight below
    /// the state (excluding its own tuple weight).
    list: Vec<(Box<[u32]>, W)>,
    heap: Heap<ProductEntry<W>>,
}

/// A rank vector and the list index it will get once popped.
type ProductEntry<W> = Entry<W, (Box<[u32]>, u32)>;

pub struct Rec<'a, D: Dioid> {
    inst: &'a TdpInstance<D>,
    buckets: Vec<BucketList<D::Weight>>,
    products: Vec<Option<ProductList<D::Weight>>>,
    seq: u64,
    emitted: usize,
    stats: EnumStats,
    cmps: u64,
    done: bool,
}

pub fn anyk_rec<D: Dioid>(inst: &TdpInstance<D>) -> Result<Rec<'_, D>, EnumError> {
    require_annotated(inst)?;
    Ok(Rec {
        inst,
        buckets: (0..inst.num_buckets())
            .map(|_| BucketList {
                list: Vec::new(),
                heap: None,
            })
            .collect(),
        products: (0..inst.num_states()).map(|_| None).collect(),
        seq: 0,
        emitted: 0,
        stats: EnumStats::default(),
        cmps: 0,
        done: false,
    })
}

impl<D: Dioid> Rec<'_, D> {
    /// Inserts into the per-bucket choice queues, split into those made while
    /// initializing a queue and all later ones.
    pub fn choice_insertions(&self) -> (u64, u64) {
        (self.stats.init_pushes, self.stats.pq_pushes - self.stats.init_pushes)
    }

    fn track(&mut self, size: usize) {
        self.stats.max_pq_size = self.stats.max_pq_size.max(size as u64);
    }

    /// Weight of the `r`-th best sub-solution below `v` (1-based), excluding
    /// `v`'s own tuple weight but including its terminal edges.
    fn below(&mut self, v: StateId, r: u32) -> Option<D::Weight> {
        let inst = self.inst;
        let d = inst.dioid();
        let cbs = inst.child_buckets_of(v);
        match cbs.len() {
            0 => (r == 1).then(|| inst.leaf_weight(v).clone()),
            1 => {
                let b = cbs[0];
                if self.bucket_get(b, r) {
                    let w = &self.buckets[b as usize].list[r as usize - 1].2;
                    Some(d.combine(inst.leaf_weight(v), w))
                } else {
                    None
                }
            }
            _ => self.product_get(v, r).then(|| {
                let p = self.products[v as usize].as_ref().unwrap();
                p.list[r as usize - 1].1.clone()
            }),
        }
    }

    /// Makes sure the `r`-th entry (1-based) of the bucket's list exists.
    fn bucket_get(&mut self, b: BucketId, r: u32) -> bool {
        let inst = self.inst;
        let d = inst.dioid().clone();
        let less = |a: &Entry<D::Weight, (StateId, u32)>, b: &Entry<D::Weight, (StateId, u32)>| {
            entry_less(&d, a, b)
        };
        if self.buckets[b as usize].heap.is_none() {
            let mut init = Vec::new();
            for &u in inst.members(b) {
                init.push(Entry {
                    w: inst.beta(u).clone(),
                    seq: self.seq,
                    item: (u, 1),
                });
                self.seq += 1;
            }
            self.stats.init_pushes += init.len() as u64;
            self.stats.pq_pushes += init.len() as u64;
            let heap = Heap::from_vec(init, &less);
            self.track(heap.len());
            self.buckets[b as usize].heap = Some(heap);
        }
        while self.buckets[b as usize].list.len() < r as usize {
            let heap = self.buckets[b as usize].heap.as_mut().unwrap();
            let Some(top) = heap.pop(&less) else {
                return false;
            };
            self.stats.pq_pops += 1;
            let (u, k) = top.item;
            self.buckets[b as usize].list.push((u, k, top.w));
            if let Some(w) = self.below(u, k + 1) {
                let entry = Entry {
                    w: d.combine(inst.in_weight(u), &w),
                    seq: self.seq,
                    item: (u, k + 1),
                };
                self.seq += 1;
                let heap = self.buckets[b as usize].heap.as_mut().unwrap();
                heap.push(entry, &less);
                self.stats.pq_pushes += 1;
                let n = heap.len();
                self.track(n);
            }
        }
        true
    }

    /// Makes sure the `r`-th combination (1-based) below a state with
    /// several child stages exists.
    fn product_get(&mut self, v: StateId, r: u32) -> bool {
        let inst = self.inst;
        let d = inst.dioid().clone();
        let less = |a: &Entry<D::Weight, (Box<[u32]>, u32)>, b: &Entry<D::Weight, (Box<[u32]>, u32)>| {
            entry_less(&d, a, b)
        };
        let cbs: Vec<BucketId> = inst.child_buckets_of(v).to_vec();
        if self.products[v as usize].is_none() {
            for &b in &cbs {
                if !self.bucket_get(b, 1) {
                    return false;
                }
            }
            let mut heap = Heap::new();
            let ones: Box<[u32]> = vec![1; cbs.len()].into();
            heap.push(
                Entry {
                    w: inst.pi1(v).clone(),
                    seq: self.seq,
                    item: (ones, 0),
                },
                &less,
            );
            self.seq += 1;
            self.stats.init_pushes += 1;
            self.stats.pq_pushes += 1;
            self.products[v as usize] = Some(ProductList {
                list: Vec::new(),
                heap,
            });
        }
        while self.products[v as usize].as_ref().unwrap().list.len() < r as usize {
            let p = self.products[v as usize].as_mut().unwrap();
            let Some(top) = p.heap.pop(&less) else {
                return false;
            };
            self.stats.pq_pops += 1;
            let (ranks, from) = top.item;
            p.list.push((ranks.clone(), top.w));
            for k in from as usize..cbs.len() {
                let next = ranks[k] + 1;
                if !self.bucket_get(cbs[k], next) {
                    continue;
                }
                let mut nr = ranks.clone();
                nr[k] = next;
                let mut w = inst.leaf_weight(v).clone();
                for (q, &b) in cbs.iter().enumerate() {
                    w = d.combine(&w, &self.buckets[b as usize].list[nr[q] as usize - 1].2);
                }
                let entry = Entry {
                    w,
                    seq: self.seq,
                    item: (nr, k as u32),
                };
                self.seq += 1;
                let p = self.products[v as usize].as_mut().unwrap();
                p.heap.push(entry, &less);
                self.stats.pq_pushes += 1;
                let n = p.heap.len();
                self.track(n);
            }
        }
        true
    }

    /// Writes the sub-solution `(u, r)` into `out`.
    fn materialize(&mut self, u: StateId, r: u32, out: &mut [StateId]) {
        let inst = self.inst;
        out[inst.pos_of(u) - 1] = u;
        let cbs: Vec<BucketId> = inst.child_buckets_of(u).to_vec();
        match cbs.len() {
            0 => {}
            1 => {
                let (c, k, _) = self.buckets[cbs[0] as usize].list[r as usize - 1];
                self.materialize(c, k, out);
            }
            _ => {
                let ranks = self.products[u as usize].as_ref().unwrap().list[r as usize - 1].0.clone();
                for (q, &b) in cbs.iter().enumerate() {
                    let (c, k, _) = self.buckets[b as usize].list[ranks[q] as usize - 1];
                    self.materialize(c, k, out);
                }
            }
        }
    }

    fn heap_cmps(&self) -> u64 {
        let b: u64 = self
            .buckets
            .iter()
            .filter_map(|b| b.heap.as_ref().map(|h| h.cmps))
            .sum();
        let p: u64 = self.products.iter().flatten().map(|p| p.heap.cmps).sum();
        b + p + self.cmps
    }
}

impl<D: Dioid> Iterator for Rec<'_, D> {
    type Item = Solution<D::Weight>;

    fn next(&mut self) -> Option<Solution<D::Weight>> {
        if self.done {
            return None;
        }
        let s = self.inst.source_bucket();
        let r = self.emitted as u32 + 1;
        if !self.bucket_get(s, r) {
            self.done = true;
            return None;
        }
        self.emitted += 1;
        let (u, k, w) = self.buckets[s as usize].list[r as usize - 1].clone();
        let mut states = vec![0; self.inst.num_positions()];
        self.materialize(u, k, &mut states);
        Some(Solution { states, weight: w })
    }
}

impl<D: Dioid> RankedEnumerator<D> for Rec<'_, D> {
    fn stats(&self) -> EnumStats {
        EnumStats {
            pq_cmps: self.heap_cmps(),
            ..self.stats
        }
    }
}
