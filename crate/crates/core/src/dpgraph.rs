//! The staged graph that all enumerators walk.
//!
//! Every atom of the join tree becomes a stage whose states are the atom's
//! tuples. Stage positions follow the BFS order of the tree. Between a
//! parent stage and a child stage sits a layer of buckets: a bucket holds the
//! child states that agree on the join variables with the parent, and every
//! parent state points to exactly one bucket per child stage. This keeps the
//! graph linear in the input, where connecting tuples pairwise would be
//! quadratic.
//!
//! After [`TdpInstance::bottom_up`] every surviving state `v` knows `π1(v)`,
//! the best weight of a completion below it, and `β(v) = w(v) ⊗ π1(v)`.
//! Buckets know their best member under the order `(β, state id)`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::Range;

use thiserror::Error;

use crate::db::{Database, Value};
use crate::query::{ConjunctiveQuery, JoinTree, QueryError, VarId};
use crate::ranking::Dioid;

pub type StateId = u32;
pub type BucketId = u32;
pub(crate) const NIL: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("relation {0} is missing from the database")]
    MissingRelation(String),
    #[error("relation {relation} has arity {found} but atom {atom} expects {expected}")]
    ArityMismatch {
        relation: String,
        atom: String,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Query(#[from] QueryError),
}

/// One tuple per relation stage, indexed by position minus one.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<W> {
    pub states: Vec<StateId>,
    pub weight: W,
}

/// A database tuple contributing to an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WitnessRef {
    pub atom: usize,
    pub row: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedAnswer<W> {
    pub rank: u64,
    pub weight: W,
    /// Values of the head variables, in head order.
    pub assignment: Vec<Value>,
    /// One tuple per atom of the query, in atom order. Absent when answers
    /// aggregate several witnesses.
    pub witness: Option<Vec<WitnessRef>>,
}

/// Tuples of one stage before the graph is wired.
#[derive(Debug, Clone)]
pub(crate) struct StageInput<W> {
    pub atom: usize,
    pub vars: Vec<VarId>,
    pub values: Vec<Value>,
    pub weights: Vec<W>,
    pub source_rows: Vec<u32>,
    /// Weights of extra terminal edges, one vector per terminal stage.
    pub cut_weights: Vec<Vec<W>>,
}

impl<W> StageInput<W> {
    fn len(&self) -> usize {
        self.weights.len()
    }
}

#[derive(Debug, Clone)]
pub struct Position {
    pub atom: usize,
    pub parent: usize,
    pub children: Vec<usize>,
    pub level: usize,
    pub vars: Vec<VarId>,
    states: Range<u32>,
    buckets: Range<u32>,
    /// Index of this position among its parent's children.
    slot: usize,
    terminals: usize,
}

#[derive(Debug, Clone)]
struct Layout {
    head: Vec<String>,
    slots: Vec<(usize, usize)>,
    witness: Option<Vec<(usize, usize)>>,
}

/// One edge of the staged graph, for inspection and debugging.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphEdge<W> {
    pub from_stage: usize,
    pub from: u32,
    pub to_stage: usize,
    pub to: u32,
    pub weight: W,
}

#[derive(Debug, Clone)]
pub struct TdpInstance<D: Dioid> {
    dioid: D,
    /// Index 0 is the source; relation stages are 1..=ℓ.
    positions: Vec<Position>,
    levels: Vec<Range<usize>>,
    stage_values: Vec<Vec<Value>>,
    stage_rows: Vec<Vec<u32>>,
    stage_cuts: Vec<Vec<Vec<D::Weight>>>,
    state_pos: Vec<u32>,
    in_w: Vec<D::Weight>,
    leaf_w: Vec<D::Weight>,
    own_w: Vec<D::Weight>,
    pi1: Vec<D::Weight>,
    beta: Vec<D::Weight>,
    pruned: Vec<bool>,
    child_buckets: Vec<BucketId>,
    cb_base: Vec<usize>,
    bucket_start: Vec<u32>,
    bucket_len: Vec<u32>,
    bucket_best: Vec<StateId>,
    members: Vec<StateId>,
    source_bucket: BucketId,
    annotated: bool,
    layout: Layout,
}

/// Builds the staged graph of an acyclic query over `tree`.
pub fn build_tdp<D: Dioid>(
    q: &ConjunctiveQuery,
    tree: &JoinTree,
    db: &Database<D::Weight>,
    dioid: D,
) -> Result<TdpInstance<D>, BuildError> {
    let inputs = stage_inputs(q, tree, db, &dioid)?;
    let witness = q.atoms.iter().all(|a| a.projection_of.is_none());
    Ok(TdpInstance::assemble(dioid, q, tree, inputs, witness))
}

pub(crate) fn stage_inputs<D: Dioid>(
    q: &ConjunctiveQuery,
    tree: &JoinTree,
    db: &Database<D::Weight>,
    dioid: &D,
) -> Result<Vec<StageInput<D::Weight>>, BuildError> {
    let mut inputs = Vec::with_capacity(tree.len());
    for (i, atom) in q.atoms.iter().enumerate().take(tree.len()) {
        let src_idx = atom.projection_of.unwrap_or(i);
        let src = &q.atoms[src_idx];
        let rel = db
            .get(&src.relation)
            .ok_or_else(|| BuildError::MissingRelation(src.relation.clone()))?;
        if rel.arity() != src.arity() && !(rel.is_empty() && rel.arity() == 0) {
            return Err(BuildError::ArityMismatch {
                relation: src.relation.clone(),
                atom: src.name.clone(),
                expected: src.arity(),
                found: rel.arity(),
            });
        }
        let consts = src.resolve_constants(&db.symbols);
        let cols: Vec<usize> = atom
            .vars
            .iter()
            .map(|v| src.columns[src.vars.iter().position(|x| x == v).expect("projection vars come from the source atom")])
            .collect();
        let mut input = StageInput {
            atom: i,
            vars: atom.vars.clone(),
            values: Vec::new(),
            weights: Vec::new(),
            source_rows: Vec::new(),
            cut_weights: Vec::new(),
        };
        let mut seen: HashMap<Vec<Value>, ()> = HashMap::new();
        for r in 0..rel.len() {
            let row = rel.row(r);
            if !src.accepts(row, &consts) {
                continue;
            }
            let projected: Vec<Value> = cols.iter().map(|&c| row[c]).collect();
            if atom.projection_of.is_some() {
                if seen.insert(projected.clone(), ()).is_some() {
                    continue;
                }
                input.weights.push(dioid.one());
            } else {
                input.weights.push(rel.weight(r).clone());
            }
            input.values.extend(projected);
            input.source_rows.push(r as u32);
        }
        inputs.push(input);
    }
    Ok(inputs)
}

impl<D: Dioid> TdpInstance<D> {
    pub(crate) fn assemble(
        dioid: D,
        q: &ConjunctiveQuery,
        tree: &JoinTree,
        inputs: Vec<StageInput<D::Weight>>,
        witness: bool,
    ) -> Self {
        let order = tree.bfs_order();
        let l = order.len();
        let mut pos_of = vec![0usize; tree.len()];
        for (i, &n) in order.iter().enumerate() {
            pos_of[n] = i + 1;
        }
        let mut inputs: Vec<Option<StageInput<D::Weight>>> = inputs.into_iter().map(Some).collect();
        let mut stage_weights: Vec<Vec<D::Weight>> = vec![Vec::new()];

        let mut positions = Vec::with_capacity(l + 1);
        positions.push(Position {
            atom: usize::MAX,
            parent: 0,
            children: vec![1],
            level: 0,
            vars: Vec::new(),
            states: 0..0,
            buckets: 0..0,
            slot: 0,
            terminals: 0,
        });
        let mut stage_values = vec![Vec::new()];
        let mut stage_rows = vec![Vec::new()];
        let mut stage_cuts = vec![Vec::new()];
        let mut next_state = 0u32;
        let mut level = vec![0usize; tree.len()];
        for &n in &order {
            if let Some(p) = tree.parent[n] {
                level[n] = level[p] + 1;
            }
        }
        for &n in &order {
            let input = inputs[n].take().expect("one stage input per tree node");
            let children: Vec<usize> = tree.children[n].iter().map(|&c| pos_of[c]).collect();
            let parent = tree.parent[n].map_or(0, |p| pos_of[p]);
            let slot = tree.parent[n].map_or(0, |p| {
                tree.children[p].iter().position(|&c| c == n).unwrap()
            });
            let count = input.len() as u32;
            let terminals = if children.is_empty() && input.cut_weights.is_empty() {
                1
            } else {
                input.cut_weights.len()
            };
            positions.push(Position {
                atom: input.atom,
                parent,
                children,
                level: level[n] + 1,
                vars: input.vars.clone(),
                states: next_state..next_state + count,
                buckets: 0..0,
                slot,
                terminals,
            });
            next_state += count;
            stage_values.push(input.values);
            stage_rows.push(input.source_rows);
            stage_cuts.push(input.cut_weights);
            stage_weights.push(input.weights);
        }
        let total = next_state as usize;

        let mut in_w = Vec::with_capacity(total);
        let mut leaf_w = Vec::with_capacity(total);
        for (p, weights) in stage_weights.into_iter().enumerate().skip(1) {
            for (r, w) in weights.into_iter().enumerate() {
                let mut leaf = dioid.one();
                for cut in &stage_cuts[p] {
                    leaf = dioid.combine(&leaf, &cut[r]);
                }
                in_w.push(w);
                leaf_w.push(leaf);
            }
        }
        let own_w: Vec<D::Weight> = in_w
            .iter()
            .zip(&leaf_w)
            .map(|(a, b)| dioid.combine(a, b))
            .collect();

        let mut state_pos = vec![0u32; total];
        for (p, pos) in positions.iter().enumerate().skip(1) {
            for v in pos.states.clone() {
                state_pos[v as usize] = p as u32;
            }
        }

        let mut levels: Vec<Range<usize>> = Vec::new();
        levels.push(0..1);
        for (p, pos) in positions.iter().enumerate().skip(1) {
            let lv = pos.level;
            if levels.len() <= lv {
                levels.push(p..p + 1);
            } else {
                levels[lv].end = p + 1;
            }
        }

        // Wire bottom-up so each child's bucket map exists before its parent.
        let mut pruned = vec![false; total];
        let mut child_buckets = vec![NIL; total_child_slots(&positions)];
        let mut cb_base = vec![0usize; l + 1];
        {
            let mut acc = 0usize;
            for p in 1..=l {
                cb_base[p] = acc;
                acc += positions[p].states.len() * positions[p].children.len();
            }
        }
        let mut bucket_maps: Vec<HashMap<Vec<Value>, BucketId>> = vec![HashMap::new(); l + 1];
        let mut bucket_members: Vec<Vec<StateId>> = Vec::new();
        let mut bucket_ranges = vec![0..0u32; l + 1];
        let mut source_bucket = NIL;
        for p in (1..=l).rev() {
            let pos = &positions[p];
            let arity = pos.vars.len();
            let vals = &stage_values[p];
            let child_keys: Vec<Vec<usize>> = pos
                .children
                .iter()
                .map(|&c| shared_columns(&pos.vars, &positions[c].vars))
                .collect();
            for (local, v) in pos.states.clone().enumerate() {
                let row = &vals[local * arity..(local + 1) * arity];
                for (k, &c) in pos.children.iter().enumerate() {
                    let key: Vec<Value> = child_keys[k].iter().map(|&i| row[i]).collect();
                    match bucket_maps[c].get(&key) {
                        Some(&b) => {
                            child_buckets[cb_base[p] + local * pos.children.len() + k] = b;
                        }
                        None => {
                            pruned[v as usize] = true;
                        }
                    }
                }
            }
            let parent_key: Vec<usize> = if pos.parent == 0 {
                Vec::new()
            } else {
                shared_columns(&pos.vars, &positions[pos.parent].vars)
            };
            let first = bucket_members.len() as u32;
            let map = &mut bucket_maps[p];
            if pos.parent == 0 {
                source_bucket = first;
                bucket_members.push(Vec::new());
                map.insert(Vec::new(), first);
            }
            for (local, v) in pos.states.clone().enumerate() {
                if pruned[v as usize] {
                    continue;
                }
                let row = &vals[local * arity..(local + 1) * arity];
                let key: Vec<Value> = parent_key.iter().map(|&i| row[i]).collect();
                let b = *map.entry(key).or_insert_with(|| {
                    bucket_members.push(Vec::new());
                    (bucket_members.len() - 1) as u32
                });
                bucket_members[b as usize].push(v);
            }
            bucket_ranges[p] = first..bucket_members.len() as u32;
        }
        for p in 1..=l {
            positions[p].buckets = bucket_ranges[p].clone();
        }

        let nb = bucket_members.len();
        let mut bucket_start = Vec::with_capacity(nb);
        let mut bucket_len = Vec::with_capacity(nb);
        let mut members = Vec::new();
        for m in bucket_members {
            bucket_start.push(members.len() as u32);
            bucket_len.push(m.len() as u32);
            members.extend(m);
        }

        let slots = q
            .head
            .iter()
            .map(|&v| {
                (1..=l)
                    .find_map(|p| positions[p].vars.iter().position(|&x| x == v).map(|c| (p, c)))
                    .expect("head variables occur in some stage")
            })
            .collect();
        let witness = witness.then(|| {
            let mut w: Vec<(usize, usize)> = (1..=l).map(|p| (positions[p].atom, p)).collect();
            w.sort_unstable();
            w
        });
        let layout = Layout {
            head: q.head_names(),
            slots,
            witness,
        };

        // The source "state" is represented only through its bucket.
        let zero = dioid.zero();
        TdpInstance {
            pi1: vec![zero.clone(); total],
            beta: vec![zero; total],
            bucket_best: vec![NIL; nb],
            dioid,
            positions,
            levels,
            stage_values,
            stage_rows,
            stage_cuts,
            state_pos,
            in_w,
            leaf_w,
            own_w,
            pruned,
            child_buckets,
            cb_base,
            bucket_start,
            bucket_len,
            members,
            source_bucket,
            annotated: false,
            layout,
        }
    }

    /// Computes `π1` and `β` bottom-up, prunes states that cannot complete
    /// to an answer and finds the best member of every bucket.
    pub fn bottom_up(mut self) -> Self {
        let d = self.dioid.clone();
        let l = self.num_positions();
        for p in (1..=l).rev() {
            let nch = self.positions[p].children.len();
            let states = self.positions[p].states.clone();
            let base = self.cb_base[p];
            for (local, v) in states.enumerate() {
                let vi = v as usize;
                if self.pruned[vi] {
                    continue;
                }
                let mut pi = self.leaf_w[vi].clone();
                for k in 0..nch {
                    let b = self.child_buckets[base + local * nch + k];
                    let best = self.bucket_best[b as usize];
                    if best == NIL {
                        self.pruned[vi] = true;
                        break;
                    }
                    pi = d.combine(&pi, &self.beta[best as usize]);
                }
                if self.pruned[vi] {
                    continue;
                }
                let beta = d.combine(&self.in_w[vi], &pi);
                if d.is_zero(&pi) || d.is_zero(&beta) {
                    self.pruned[vi] = true;
                    continue;
                }
                self.pi1[vi] = pi;
                self.beta[vi] = beta;
            }
            for b in self.positions[p].buckets.clone() {
                let start = self.bucket_start[b as usize] as usize;
                let len = self.bucket_len[b as usize] as usize;
                let mut kept = 0;
                let mut best = NIL;
                for i in start..start + len {
                    let v = self.members[i];
                    if self.pruned[v as usize] {
                        continue;
                    }
                    self.members[start + kept] = v;
                    kept += 1;
                    if best == NIL
                        || d.compare(&self.beta[v as usize], &self.beta[best as usize])
                            == std::cmp::Ordering::Less
                    {
                        best = v;
                    }
                }
                self.bucket_len[b as usize] = kept as u32;
                self.bucket_best[b as usize] = best;
            }
        }
        self.annotated = true;
        self
    }

    pub fn is_annotated(&self) -> bool {
        self.annotated
    }

    pub fn dioid(&self) -> &D {
        &self.dioid
    }

    /// Number of relation stages.
    pub fn num_positions(&self) -> usize {
        self.positions.len() - 1
    }

    pub fn num_states(&self) -> usize {
        self.in_w.len()
    }

    pub fn num_buckets(&self) -> usize {
        self.bucket_start.len()
    }

    pub fn position(&self, p: usize) -> &Position {
        &self.positions[p]
    }

    /// Positions grouped by BFS level; level 0 is the source.
    pub fn levels(&self) -> &[Range<usize>] {
        &self.levels
    }

    pub fn parent_pos(&self, p: usize) -> usize {
        self.positions[p].parent
    }

    pub fn states_of(&self, p: usize) -> Range<StateId> {
        self.positions[p].states.clone()
    }

    pub fn pos_of(&self, v: StateId) -> usize {
        self.state_pos[v as usize] as usize
    }

    pub fn local_id(&self, v: StateId) -> u32 {
        v - self.positions[self.pos_of(v)].states.start
    }

    pub fn is_pruned(&self, v: StateId) -> bool {
        self.pruned[v as usize]
    }

    /// Number of states that survived pruning.
    pub fn live_states(&self) -> usize {
        self.pruned.iter().filter(|&&p| !p).count()
    }

    pub fn in_weight(&self, v: StateId) -> &D::Weight {
        &self.in_w[v as usize]
    }

    pub fn leaf_weight(&self, v: StateId) -> &D::Weight {
        &self.leaf_w[v as usize]
    }

    /// Contribution of the state itself to an answer: its tuple weight and
    /// any terminal edges below it.
    pub fn own_weight(&self, v: StateId) -> &D::Weight {
        &self.own_w[v as usize]
    }

    pub fn pi1(&self, v: StateId) -> &D::Weight {
        &self.pi1[v as usize]
    }

    pub fn beta(&self, v: StateId) -> &D::Weight {
        &self.beta[v as usize]
    }

    /// Values of a state's tuple, one per variable of its stage.
    pub fn state_values(&self, v: StateId) -> &[Value] {
        let p = self.pos_of(v);
        let a = self.positions[p].vars.len();
        let local = self.local_id(v) as usize;
        &self.stage_values[p][local * a..(local + 1) * a]
    }

    pub fn source_bucket(&self) -> BucketId {
        self.source_bucket
    }

    /// Bucket of position `j` below the state chosen for its parent position.
    /// `parent` is ignored for the root position.
    #[inline]
    pub fn bucket_for(&self, parent: StateId, j: usize) -> BucketId {
        let pos = &self.positions[j];
        if pos.parent == 0 {
            return self.source_bucket;
        }
        self.child_bucket(parent, pos.slot)
    }

    #[inline]
    pub fn child_bucket(&self, v: StateId, k: usize) -> BucketId {
        self.child_buckets[self.cb_index(v) + k]
    }

    /// All child buckets of a state, in child position order.
    pub fn child_buckets_of(&self, v: StateId) -> &[BucketId] {
        let p = self.pos_of(v);
        let n = self.positions[p].children.len();
        let i = self.cb_index(v);
        &self.child_buckets[i..i + n]
    }

    #[inline]
    fn cb_index(&self, v: StateId) -> usize {
        let p = self.pos_of(v);
        let pos = &self.positions[p];
        self.cb_base[p] + (v - pos.states.start) as usize * pos.children.len()
    }

    pub fn members(&self, b: BucketId) -> &[StateId] {
        let s = self.bucket_start[b as usize] as usize;
        &self.members[s..s + self.bucket_len[b as usize] as usize]
    }

    /// Best member of a bucket, or `None` if the bucket is empty.
    #[inline]
    pub fn best(&self, b: BucketId) -> Option<StateId> {
        let v = self.bucket_best[b as usize];
        (v != NIL).then_some(v)
    }

    /// Position whose states the bucket holds.
    pub fn bucket_pos(&self, b: BucketId) -> usize {
        (1..=self.num_positions())
            .find(|&p| self.positions[p].buckets.contains(&b))
            .expect("bucket belongs to a position")
    }

    /// Weight of the best answer, `None` if there is none.
    pub fn top_weight(&self) -> Option<D::Weight> {
        self.best(self.source_bucket).map(|v| self.beta[v as usize].clone())
    }

    /// Completes a prefix greedily: every position from `from` on takes the
    /// best member of its bucket.
    pub fn complete_greedy(&self, states: &mut Vec<StateId>, from: usize) {
        for j in from..=self.num_positions() {
            let parent = self.positions[j].parent;
            let pstate = if parent == 0 { NIL } else { states[parent - 1] };
            let b = self.bucket_for(pstate, j);
            states.push(self.best(b).expect("annotated buckets of live states are non-empty"));
        }
    }

    pub fn solution_weight(&self, states: &[StateId]) -> D::Weight {
        self.dioid.combine_all(states.iter().map(|&v| self.own_weight(v)))
    }

    /// Best answer, found by following best children from the source.
    pub fn top1_solution(&self) -> Option<Solution<D::Weight>> {
        assert!(self.annotated, "bottom_up must run before enumeration");
        let w = self.top_weight()?;
        let mut states = Vec::with_capacity(self.num_positions());
        self.complete_greedy(&mut states, 1);
        Some(Solution { states, weight: w })
    }

    pub fn head(&self) -> &[String] {
        &self.layout.head
    }

    pub fn has_witness(&self) -> bool {
        self.layout.witness.is_some()
    }

    pub fn answer(&self, sol: &Solution<D::Weight>, rank: u64) -> RankedAnswer<D::Weight> {
        let assignment = self
            .layout
            .slots
            .iter()
            .map(|&(p, c)| {
                let v = sol.states[p - 1];
                self.state_values(v)[c]
            })
            .collect();
        let witness = self.layout.witness.as_ref().map(|w| {
            w.iter()
                .map(|&(atom, p)| {
                    let v = sol.states[p - 1];
                    WitnessRef {
                        atom,
                        row: self.stage_rows[p][self.local_id(v) as usize],
                    }
                })
                .collect()
        });
        RankedAnswer {
            rank,
            weight: sol.weight.clone(),
            assignment,
            witness,
        }
    }

    /// Number of answers, counted over the pruned graph.
    pub fn count_answers(&self) -> u128 {
        let mut count = vec![0u128; self.num_states()];
        let mut bucket_sum = vec![0u128; self.num_buckets()];
        for p in (1..=self.num_positions()).rev() {
            for v in self.states_of(p) {
                if self.pruned[v as usize] {
                    continue;
                }
                count[v as usize] = self
                    .child_buckets_of(v)
                    .iter()
                    .map(|&b| bucket_sum[b as usize])
                    .product();
            }
            for b in self.positions[p].buckets.clone() {
                bucket_sum[b as usize] = self.members(b).iter().map(|&v| count[v as usize]).sum();
            }
        }
        bucket_sum[self.source_bucket as usize]
    }

    /// Stage numbering used by [`TdpInstance::edges`]: 0 is the source,
    /// `1..=ℓ` the relation stages, then one bucket layer per non-root
    /// position, then terminal stages.
    pub fn bucket_stage(&self, p: usize) -> usize {
        self.num_positions() + p - 1
    }

    /// Edges among live states after pruning.
    pub fn edges(&self) -> Vec<GraphEdge<D::Weight>> {
        let d = &self.dioid;
        let l = self.num_positions();
        let mut out = Vec::new();
        for p in 1..=l {
            let pos = &self.positions[p];
            let first_bucket = pos.buckets.start;
            for b in pos.buckets.clone() {
                for &v in self.members(b) {
                    let (from_stage, from) = if pos.parent == 0 {
                        (0, 0)
                    } else {
                        (self.bucket_stage(p), b - first_bucket)
                    };
                    out.push(GraphEdge {
                        from_stage,
                        from,
                        to_stage: p,
                        to: self.local_id(v),
                        weight: self.in_w[v as usize].clone(),
                    });
                }
            }
        }
        for p in 1..=l {
            for v in self.states_of(p) {
                if self.pruned[v as usize] {
                    continue;
                }
                for (k, &c) in self.positions[p].children.iter().enumerate() {
                    let b = self.child_bucket(v, k);
                    out.push(GraphEdge {
                        from_stage: p,
                        from: self.local_id(v),
                        to_stage: self.bucket_stage(c),
                        to: b - self.positions[c].buckets.start,
                        weight: d.one(),
                    });
                }
            }
        }
        let mut t = 2 * l;
        for p in 1..=l {
            let cuts = &self.stage_cuts[p];
            for k in 0..self.positions[p].terminals {
                for v in self.states_of(p) {
                    if self.pruned[v as usize] {
                        continue;
                    }
                    let local = self.local_id(v);
                    let w = cuts.get(k).map_or(d.one(), |c| c[local as usize].clone());
                    out.push(GraphEdge {
                        from_stage: p,
                        from: local,
                        to_stage: t,
                        to: 0,
                        weight: w,
                    });
                }
                t += 1;
            }
        }
        out
    }

    /// Text dump, one `stage parent child weight` line per edge.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for e in self.edges() {
            let _ = writeln!(
                s,
                "{} {} {} {}",
                e.to_stage,
                e.from,
                e.to,
                self.dioid.format_weight(&e.weight)
            );
        }
        s
    }

    /// Total number of stages including source, bucket layers and terminals.
    pub fn num_stages(&self) -> usize {
        let l = self.num_positions();
        let terminals: usize = (1..=l).map(|p| self.positions[p].terminals).sum();
        1 + l + (l - 1) + terminals
    }
}

fn total_child_slots(positions: &[Position]) -> usize {
    positions
        .iter()
        .skip(1)
        .map(|p| p.states.len() * p.children.len())
        .sum()
}

/// Columns of `a` holding the variables shared with `b`, ordered by variable id.
fn shared_columns(a: &[VarId], b: &[VarId]) -> Vec<usize> {
    let mut shared: Vec<VarId> = a.iter().copied().filter(|v| b.contains(v)).collect();
    shared.sort_unstable();
    shared.iter().map(|v| a.iter().position(|x| x == v).unwrap()).collect()
}
