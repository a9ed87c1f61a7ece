//! Ordered access to the members of a bucket.
//!
//! Members are ranked by `(β, state id)`. Rank 0 is the bucket's best member
//! as computed bottom-up; higher ranks are produced on demand by one of three
//! strategies.

use std::cmp::Ordering;

use super::heap::Heap;
use crate::dpgraph::{BucketId, StateId, TdpInstance};
use crate::ranking::Dioid;

/// How the members of each bucket are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Sort every bucket up front.
    Eager,
    /// Heapify every bucket up front, pop lazily.
    Lazy,
    /// Incremental quicksort, started on first access to a bucket.
    Quick,
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "eager" => Ok(Variant::Eager),
            "lazy" => Ok(Variant::Lazy),
            "quick" => Ok(Variant::Quick),
            other => Err(format!("unknown variant {other:?} (expected eager, lazy or quick)")),
        }
    }
}

enum Order {
    Untouched,
    Sorted(Vec<StateId>),
    Heap { sorted: Vec<StateId>, heap: Heap<StateId> },
    Quick { arr: Vec<StateId>, stack: Vec<usize>, done: usize },
}

pub(crate) struct Successors {
    variant: Variant,
    orders: Vec<Order>,
    pub calls: u64,
    pub cmps: u64,
}

#[inline]
fn key_less<D: Dioid>(inst: &TdpInstance<D>, a: StateId, b: StateId) -> bool {
    match inst.dioid().compare(inst.beta(a), inst.beta(b)) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => a < b,
    }
}

impl Successors {
    pub fn new<D: Dioid>(inst: &TdpInstance<D>, variant: Variant) -> Self {
        let mut s = Successors {
            variant,
            orders: (0..inst.num_buckets()).map(|_| Order::Untouched).collect(),
            calls: 0,
            cmps: 0,
        };
        if variant != Variant::Quick {
            for b in 0..inst.num_buckets() {
                s.init(inst, b as BucketId);
            }
        }
        s
    }

    fn init<D: Dioid>(&mut self, inst: &TdpInstance<D>, b: BucketId) {
        let members = inst.members(b).to_vec();
        let mut cmps = 0u64;
        let order = match self.variant {
            Variant::Eager => {
                let mut m = members;
                m.sort_by(|&x, &y| {
                    cmps += 1;
                    if key_less(inst, x, y) {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    }
                });
                Order::Sorted(m)
            }
            Variant::Lazy => {
                let less = |x: &StateId, y: &StateId| key_less(inst, *x, *y);
                let mut heap = Heap::from_vec(members, &less);
                let mut sorted = Vec::new();
                if let Some(first) = heap.pop(&less) {
                    sorted.push(first);
                }
                cmps += heap.cmps;
                heap.cmps = 0;
                Order::Heap { sorted, heap }
            }
            Variant::Quick => {
                let n = members.len();
                Order::Quick {
                    arr: members,
                    stack: vec![n],
                    done: 0,
                }
            }
        };
        self.cmps += cmps;
        self.orders[b as usize] = order;
    }

    /// Member of rank `rank` in bucket `b`, if the bucket has that many.
    pub fn child_at<D: Dioid>(
        &mut self,
        inst: &TdpInstance<D>,
        b: BucketId,
        rank: usize,
    ) -> Option<StateId> {
        if rank == 0 {
            return inst.best(b);
        }
        self.calls += 1;
        if matches!(self.orders[b as usize], Order::Untouched) {
            self.init(inst, b);
        }
        let less = |x: &StateId, y: &StateId| key_less(inst, *x, *y);
        match &mut self.orders[b as usize] {
            Order::Untouched => unreachable!(),
            Order::Sorted(m) => m.get(rank).copied(),
            Order::Heap { sorted, heap } => {
                while sorted.len() <= rank {
                    let Some(v) = heap.pop(&less) else { break };
                    sorted.push(v);
                }
                self.cmps += std::mem::take(&mut heap.cmps);
                sorted.get(rank).copied()
            }
            Order::Quick { arr, stack, done } => {
                while *done <= rank {
                    if *done >= arr.len() {
                        return None;
                    }
                    loop {
                        let top = *stack.last().unwrap();
                        if top == *done {
                            stack.pop();
                            *done += 1;
                            break;
                        }
                        let p = partition(arr, *done, top, &less, &mut self.cmps);
                        stack.push(p);
                    }
                }
                Some(arr[rank])
            }
        }
    }

    /// The member ranked right after `current` in bucket `b`.
    pub fn succ_of<D: Dioid>(
        &mut self,
        inst: &TdpInstance<D>,
        b: BucketId,
        current: StateId,
    ) -> Option<StateId> {
        let mut r = 0;
        loop {
            let v = self.child_at(inst, b, r)?;
            if v == current {
                return self.child_at(inst, b, r + 1);
            }
            r += 1;
        }
    }
}

/// Partitions `arr[lo..hi]` around a median-of-three pivot and returns the
/// pivot's final index.
fn partition(
    arr: &mut [StateId],
    lo: usize,
    hi: usize,
    less: &impl Fn(&StateId, &StateId) -> bool,
    cmps: &mut u64,
) -> usize {
    let mid = lo + (hi - lo) / 2;
    let last = hi - 1;
    let mut lt = |a: usize, b: usize, arr: &[StateId]| {
        *cmps += 1;
        less(&arr[a], &arr[b])
    };
    let pivot = if hi - lo < 3 {
        last
    } else {
        let (a, b, c) = (lo, mid, last);
        if lt(a, b, arr) {
            if lt(b, c, arr) {
                b
            } else if lt(a, c, arr) {
                c
            } else {
                a
            }
        } else if lt(a, c, arr) {
            a
        } else if lt(b, c, arr) {
            c
        } else {
            b
        }
    };
    arr.swap(pivot, last);
    let mut store = lo;
    for i in lo..last {
        if lt(i, last, arr) {
            arr.swap(i, store);
            store += 1;
        }
    }
    arr.swap(store, last);
    store
}

/// Ordered successor of `current` among the children at position `j` below
/// `parent` (ignored when `j` is the root position).
pub fn successor<D: Dioid>(
    inst: &TdpInstance<D>,
    variant: Variant,
    parent: StateId,
    j: usize,
    current: StateId,
) -> Option<StateId> {
    let mut s = Successors::new(inst, variant);
    let b = inst.bucket_for(parent, j);
    s.succ_of(inst, b, current)
}
