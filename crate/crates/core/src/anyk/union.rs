//! Merging ranked streams of several instances that together cover a query,
//! for example the trees of a decomposition of a cyclic query.

use std::collections::HashSet;

use super::heap::Heap;
use super::{entry_less, Entry};
use crate::db::Value;
use crate::dpgraph::RankedAnswer;
use crate::ranking::Dioid;

pub type AnswerStream<'a, W> = Box<dyn Iterator<Item = RankedAnswer<W>> + 'a>;

/// Head of one source, tagged with the source index.
type Pending<W> = Entry<W, (usize, RankedAnswer<W>)>;

/// Merges ranked streams and drops repeated assignments, keeping the first
/// (best) occurrence. Ranks are renumbered.
pub struct Union<'a, D: Dioid> {
    dioid: D,
    sources: Vec<AnswerStream<'a, D::Weight>>,
    heap: Heap<Pending<D::Weight>>,
    seen: HashSet<Vec<Value>>,
    seq: u64,
    rank: u64,
    started: bool,
    pub duplicates: u64,
}

pub fn anyk_union<'a, D: Dioid>(dioid: D, sources: Vec<AnswerStream<'a, D::Weight>>) -> Union<'a, D> {
    Union {
        dioid,
        sources,
        heap: Heap::new(),
        seen: HashSet::new(),
        seq: 0,
        rank: 0,
        started: false,
        duplicates: 0,
    }
}

impl<D: Dioid> Union<'_, D> {
    fn pull(&mut self, i: usize) {
        if let Some(a) = self.sources[i].next() {
            let d = &self.dioid;
            self.heap.push(
                Entry {
                    w: a.weight.clone(),
                    seq: self.seq,
                    item: (i, a),
                },
                &|x, y| entry_less(d, x, y),
            );
            self.seq += 1;
        }
    }
}

impl<D: Dioid> Iterator for Union<'_, D> {
    type Item = RankedAnswer<D::Weight>;

    fn next(&mut self) -> Option<RankedAnswer<D::Weight>> {
        if !self.started {
            self.started = true;
            for i in 0..self.sources.len() {
                self.pull(i);
            }
        }
        loop {
            let d = self.dioid.clone();
            let top = self.heap.pop(&|x, y| entry_less(&d, x, y))?;
            let (i, mut a) = top.item;
            self.pull(i);
            if !self.seen.insert(a.assignment.clone()) {
                self.duplicates += 1;
                continue;
            }
            self.rank += 1;
            a.rank = self.rank;
            return Some(a);
        }
    }
}
