//! Any-k enumerators over an annotated [`TdpInstance`].
//!
//! All enumerators yield [`Solution`]s in non-decreasing weight order and
//! return `None` forever once exhausted.

mod batch;
pub(crate) mod heap;
mod part;
mod part_plus;
mod rec;
mod successor;
mod union;

use std::cmp::Ordering;

use thiserror::Error;

use crate::dpgraph::{RankedAnswer, Solution, StateId, TdpInstance};
use crate::ranking::{Dioid, Monotonicity};

pub use batch::{batch_yannakakis_sort, BatchResult};
pub use part::{anyk_part, Part, Provenance};
pub use part_plus::{anyk_part_plus, PartPlus};
pub use rec::{anyk_rec, Rec};
pub use successor::{successor, Variant};
pub use union::{anyk_union, AnswerStream, Union};

/// Operation counters. Every field is deterministic for a fixed input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumStats {
    /// Pops from candidate queues.
    pub pq_pops: u64,
    /// Pushes into candidate queues, including queue initialization.
    pub pq_pushes: u64,
    /// Pushes that happened while initializing queues.
    pub init_pushes: u64,
    /// Element comparisons inside all priority queues and member orders.
    pub pq_cmps: u64,
    /// Requests for a next-ranked member of a bucket.
    pub succ_calls: u64,
    /// Largest size reached by the candidate queue.
    pub max_pq_size: u64,
}

impl EnumStats {
    /// Total priority-queue work, measured in element comparisons.
    pub fn pq_ops(&self) -> u64 {
        self.pq_cmps
    }
}

pub trait RankedEnumerator<D: Dioid>: Iterator<Item = Solution<D::Weight>> {
    fn stats(&self) -> EnumStats;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("output has more than {cap} answers; raise the output cap to materialize it")]
    OutputBudgetExceeded { cap: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Part(Variant),
    Rec,
    PartPlus(Variant),
    Batch,
}

impl Algorithm {
    pub fn label(&self) -> String {
        match self {
            Algorithm::Part(v) => format!("part-{}", variant_label(*v)),
            Algorithm::Rec => "rec".into(),
            Algorithm::PartPlus(v) => format!("part+-{}", variant_label(*v)),
            Algorithm::Batch => "batch".into(),
        }
    }
}

fn variant_label(v: Variant) -> &'static str {
    match v {
        Variant::Eager => "eager",
        Variant::Lazy => "lazy",
        Variant::Quick => "quick",
    }
}

pub(crate) fn require_annotated<D: Dioid>(inst: &TdpInstance<D>) -> Result<(), EnumError> {
    if inst.is_annotated() {
        Ok(())
    } else {
        Err(EnumError::Config("run bottom_up before enumerating".into()))
    }
}

pub(crate) fn require_strong<D: Dioid>(d: &D) -> Result<(), EnumError> {
    if d.monotonicity() == Monotonicity::StrongSubsetMonotone {
        Ok(())
    } else {
        Err(EnumError::Config(format!(
            "PART+ needs a strongly subset-monotone ranking; {} is only subset-monotone",
            d.name()
        )))
    }
}

/// Builds an enumerator for `algo`. Batch results are materialized up to
/// `output_cap` answers.
pub fn enumerate<'a, D: Dioid>(
    inst: &'a TdpInstance<D>,
    algo: Algorithm,
    output_cap: u64,
) -> Result<Box<dyn RankedEnumerator<D> + 'a>, EnumError> {
    Ok(match algo {
        Algorithm::Part(v) => Box::new(anyk_part(inst, v)?),
        Algorithm::Rec => Box::new(anyk_rec(inst)?),
        Algorithm::PartPlus(v) => Box::new(anyk_part_plus(inst, v, None)?),
        Algorithm::Batch => Box::new(batch_yannakakis_sort(inst, output_cap)?.into_solutions()),
    })
}

/// Numbers solutions and turns them into answers.
pub struct Answers<'a, D: Dioid, E> {
    inst: &'a TdpInstance<D>,
    inner: E,
    rank: u64,
}

impl<'a, D: Dioid, E> Answers<'a, D, E> {
    pub fn new(inst: &'a TdpInstance<D>, inner: E) -> Self {
        Answers {
            inst,
            inner,
            rank: 0,
        }
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }
}

impl<D: Dioid, E: Iterator<Item = Solution<D::Weight>>> Iterator for Answers<'_, D, E> {
    type Item = RankedAnswer<D::Weight>;
    fn next(&mut self) -> Option<Self::Item> {
        let sol = self.inner.next()?;
        self.rank += 1;
        Some(self.inst.answer(&sol, self.rank))
    }
}

/// Static facts about the stage layout used to price deviations.
pub(crate) struct Plan {
    pub l: usize,
    pub parent: Vec<usize>,
    pub level_of: Vec<usize>,
    pub level_start: Vec<usize>,
    pub level_end: Vec<usize>,
    /// First position whose parent is at or after `j`, or `ℓ + 1`.
    pub first_ge: Vec<usize>,
}

impl Plan {
    pub fn new<D: Dioid>(inst: &TdpInstance<D>) -> Self {
        let l = inst.num_positions();
        let mut parent = vec![0; l + 1];
        let mut level_of = vec![0; l + 2];
        let levels = inst.levels();
        let mut level_start = vec![0; levels.len() + 1];
        let mut level_end = vec![0; levels.len() + 1];
        for (lv, r) in levels.iter().enumerate() {
            level_start[lv] = r.start;
            level_end[lv] = r.end - 1;
            for p in r.clone() {
                level_of[p] = lv;
            }
        }
        level_of[l + 1] = usize::MAX;
        for (p, slot) in parent.iter_mut().enumerate().skip(1) {
            *slot = inst.parent_pos(p);
        }
        let mut first_ge = vec![l + 1; l + 1];
        let mut k = 1;
        for (j, slot) in first_ge.iter_mut().enumerate().skip(1) {
            while k <= l && parent[k] < j {
                k += 1;
            }
            *slot = k;
        }
        Plan {
            l,
            parent,
            level_of,
            level_start,
            level_end,
            first_ge,
        }
    }
}

/// Per-solution products used to weigh deviations without inverses.
pub(crate) struct Frame<W> {
    /// `prefix[k]` is the combined own weight of positions `1..=k`.
    pub prefix: Vec<W>,
    /// Combined β of positions `k..=end of k's level`.
    level_suffix: Vec<W>,
    /// Combined β of positions `start of k's level..=k`.
    level_prefix: Vec<W>,
    beta_one: W,
}

impl<W: Clone> Frame<W> {
    pub fn new<D: Dioid<Weight = W>>(inst: &TdpInstance<D>, plan: &Plan, states: &[StateId]) -> Self {
        let d = inst.dioid();
        let l = plan.l;
        let mut prefix = Vec::with_capacity(l + 1);
        prefix.push(d.one());
        for k in 1..=l {
            let w = d.combine(&prefix[k - 1], inst.own_weight(states[k - 1]));
            prefix.push(w);
        }
        let mut level_prefix = vec![d.one(); l + 2];
        let mut level_suffix = vec![d.one(); l + 2];
        for k in 1..=l {
            let b = inst.beta(states[k - 1]);
            level_prefix[k] = if k == plan.level_start[plan.level_of[k]] {
                b.clone()
            } else {
                d.combine(&level_prefix[k - 1], b)
            };
        }
        for k in (1..=l).rev() {
            let b = inst.beta(states[k - 1]);
            level_suffix[k] = if k == plan.level_end[plan.level_of[k]] {
                b.clone()
            } else {
                d.combine(b, &level_suffix[k + 1])
            };
        }
        Frame {
            prefix,
            level_suffix,
            level_prefix,
            beta_one: d.one(),
        }
    }

    /// Combined best weights of the subtrees rooted after `j` that hang from
    /// positions before `j`.
    pub fn frontier<D: Dioid<Weight = W>>(&self, d: &D, plan: &Plan, j: usize) -> W {
        let lv = plan.level_of[j];
        let mut f = if j < plan.level_end[lv] {
            self.level_suffix[j + 1].clone()
        } else {
            self.beta_one.clone()
        };
        let c = plan.first_ge[j];
        if c >= 2 && plan.level_of[c - 1] == lv + 1 {
            f = d.combine(&f, &self.level_prefix[c - 1]);
        }
        f
    }
}

/// Queue entry ordered by weight, then insertion sequence.
pub(crate) struct Entry<W, P> {
    pub w: W,
    pub seq: u64,
    pub item: P,
}

pub(crate) fn entry_less<D: Dioid, P>(d: &D, a: &Entry<D::Weight, P>, b: &Entry<D::Weight, P>) -> bool {
    match d.compare(&a.w, &b.w) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => a.seq < b.seq,
    }
}

/// Rebuilds a full solution from a chain of deviations. `chain` lists
/// `(position, state)` pairs; every other position takes the best member
/// of its bucket.
pub(crate) fn expand<D: Dioid>(
    inst: &TdpInstance<D>,
    chain: &[(usize, StateId)],
    upto: usize,
    out: &mut Vec<StateId>,
) {
    out.clear();
    let mut c = chain.iter().peekable();
    for j in 1..=upto {
        if let Some(&&(p, v)) = c.peek() {
            if p == j {
                out.push(v);
                c.next();
                continue;
            }
        }
        let parent = inst.parent_pos(j);
        let ps = if parent == 0 { 0 } else { out[parent - 1] };
        let b = inst.bucket_for(ps, j);
        out.push(inst.best(b).expect("live buckets have a best member"));
    }
}
