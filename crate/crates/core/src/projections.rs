//! Queries with existential variables.
//!
//! Under all-weight semantics every witness is an answer, projected onto the
//! head; this is plain enumeration of the full query. Under min-weight
//! semantics every distinct head assignment is one answer weighed by its best
//! witness. For free-connex queries the min-weight answers are the answers of
//! a smaller instance over the top part of the join tree, where every
//! subtree that only carries existential variables is folded into a
//! terminal edge weighted by that subtree's best completion.

use std::collections::HashMap;

use thiserror::Error;

use crate::db::{Database, Value};
use crate::dpgraph::{build_tdp, stage_inputs, BuildError, StageInput, TdpInstance};
use crate::query::{gyo_join_tree, is_free_connex, ConjunctiveQuery, JoinTree, QueryError};
use crate::ranking::Dioid;

#[derive(Debug, Error)]
pub enum ProjectionError {
    #[error("query is cyclic; irreducible atoms: {}", .residue.join(", "))]
    Cyclic { residue: Vec<String> },
    #[error("query is not free-connex; irreducible hyperedges: {}", .residue.join(", "))]
    NotFreeConnex { residue: Vec<String> },
    #[error(transparent)]
    Build(#[from] BuildError),
}

impl From<QueryError> for ProjectionError {
    fn from(e: QueryError) -> Self {
        match e {
            QueryError::Cyclic { residue } => ProjectionError::Cyclic { residue },
            QueryError::NotFreeConnex { residue } => ProjectionError::NotFreeConnex { residue },
            other => ProjectionError::Build(BuildError::Query(other)),
        }
    }
}

/// Annotated instance whose answers, read through the head, are the
/// all-weight answers of `q`: one per witness.
pub fn enumerate_all_weight<D: Dioid>(
    q: &ConjunctiveQuery,
    db: &Database<D::Weight>,
    dioid: D,
) -> Result<TdpInstance<D>, ProjectionError> {
    let tree = gyo_join_tree(q)?;
    Ok(build_tdp(q, &tree, db, dioid)?.bottom_up())
}

/// Annotated instance whose answers are the min-weight answers of `q`.
pub fn rewrite_min_weight<D: Dioid>(
    q: &ConjunctiveQuery,
    db: &Database<D::Weight>,
    dioid: D,
) -> Result<TdpInstance<D>, ProjectionError> {
    let fc = is_free_connex(q)?;
    let full_inputs = stage_inputs(&fc.query, &fc.tree, db, &dioid)?;
    let full = TdpInstance::assemble(dioid.clone(), &fc.query, &fc.tree, full_inputs, false).bottom_up();
    let d = &dioid;

    let u_nodes: Vec<usize> = (0..fc.tree.len()).filter(|&n| fc.in_u[n]).collect();
    let mut new_id = vec![usize::MAX; fc.tree.len()];
    for (i, &n) in u_nodes.iter().enumerate() {
        new_id[n] = i;
    }
    let u_edges: Vec<(usize, usize)> = u_nodes
        .iter()
        .filter_map(|&n| fc.tree.parent[n].map(|p| (new_id[p], new_id[n])))
        .collect();
    let u_tree = JoinTree::from_edges(u_nodes.len(), &u_edges, new_id[fc.tree.root]);
    let mut u_query = fc.query.clone();
    u_query.atoms = u_nodes.iter().map(|&n| fc.query.atoms[n].clone()).collect();

    let mut pos_of_atom = HashMap::new();
    for p in 1..=full.num_positions() {
        pos_of_atom.insert(full.position(p).atom, p);
    }

    let mut inputs = Vec::with_capacity(u_nodes.len());
    for &n in &u_nodes {
        let p = pos_of_atom[&n];
        let pos = full.position(p);
        let cut_slots: Vec<usize> = pos
            .children
            .iter()
            .enumerate()
            .filter(|(_, &c)| !fc.in_u[full.position(c).atom])
            .map(|(k, _)| k)
            .collect();
        let mut input = StageInput {
            atom: n,
            vars: pos.vars.clone(),
            values: Vec::new(),
            weights: Vec::new(),
            source_rows: Vec::new(),
            cut_weights: vec![Vec::new(); cut_slots.len()],
        };
        // Rows with equal values have equal join keys, hence equal cut
        // weights, so they collapse into one state keeping the better weight.
        let mut row_of: HashMap<Vec<Value>, usize> = HashMap::new();
        for v in full.states_of(p) {
            if full.is_pruned(v) {
                continue;
            }
            let vals = full.state_values(v).to_vec();
            if let Some(&r) = row_of.get(&vals) {
                input.weights[r] = d.prefer(&input.weights[r], full.in_weight(v));
                continue;
            }
            row_of.insert(vals.clone(), input.weights.len());
            input.values.extend(vals);
            input.weights.push(full.in_weight(v).clone());
            input.source_rows.push(full.local_id(v));
            for (t, &k) in cut_slots.iter().enumerate() {
                let b = full.child_bucket(v, k);
                let best = full.best(b).expect("live states have non-empty buckets");
                input.cut_weights[t].push(full.beta(best).clone());
            }
        }
        inputs.push(input);
    }
    Ok(TdpInstance::assemble(dioid, &u_query, &u_tree, inputs, false).bottom_up())
}
