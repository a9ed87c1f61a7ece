//! Slow reference implementations used to check the enumerators.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::db::{Database, Value};
use crate::query::{ConjunctiveQuery, Term};
use crate::ranking::Dioid;

/// Default limit on the work an oracle may do before giving up.
pub const DEFAULT_ORACLE_CAP: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle exceeded its budget of {cap} steps")]
    CapExceeded { cap: u64 },
    #[error("relation {0} is missing from the database")]
    MissingRelation(String),
    #[error("graph has a cycle through node {0}")]
    Cycle(u32),
}

/// How answers of a query with existential variables are weighed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semantics {
    /// One answer per witness, projected onto the head.
    AllWeights,
    /// One answer per distinct head assignment, weighed by its best witness.
    MinWeight,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleAnswer<W> {
    pub weight: W,
    pub assignment: Vec<Value>,
    /// Row index per atom. Absent for aggregated answers.
    pub witness: Option<Vec<u32>>,
}

/// Nested-loop join over the atoms in query order, then a full sort.
///
/// Answers whose weight is the dioid's zero are dropped. The result is sorted
/// by weight, then assignment, then witness. `cap` bounds the number of
/// partial bindings explored.
pub fn oracle_join_sort<D: Dioid>(
    q: &ConjunctiveQuery,
    db: &Database<D::Weight>,
    d: &D,
    semantics: Semantics,
    cap: u64,
) -> Result<Vec<OracleAnswer<D::Weight>>, OracleError> {
    let mut rels = Vec::new();
    let mut consts = Vec::new();
    for a in &q.atoms {
        let r = db
            .get(&a.relation)
            .ok_or_else(|| OracleError::MissingRelation(a.relation.clone()))?;
        rels.push(r);
        consts.push(
            a.terms
                .iter()
                .map(|t| match t {
                    Term::Const(c) => Some(db.symbols.lookup(c)),
                    Term::Var(_) => None,
                })
                .collect::<Vec<_>>(),
        );
    }

    let mut out = Vec::new();
    let mut binding: Vec<Option<Value>> = vec![None; q.num_vars()];
    let mut rows = vec![0u32; q.atoms.len()];
    let mut steps = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn go<D: Dioid>(
        k: usize,
        q: &ConjunctiveQuery,
        rels: &[&crate::db::Relation<D::Weight>],
        consts: &[Vec<Option<Option<Value>>>],
        d: &D,
        binding: &mut Vec<Option<Value>>,
        rows: &mut Vec<u32>,
        acc: D::Weight,
        steps: &mut u64,
        cap: u64,
        out: &mut Vec<(D::Weight, Vec<Value>, Vec<u32>)>,
    ) -> Result<(), OracleError> {
        if k == q.atoms.len() {
            if !d.is_zero(&acc) {
                let assignment = q.head.iter().map(|&v| binding[v].unwrap()).collect();
                out.push((acc, assignment, rows.clone()));
            }
            return Ok(());
        }
        let atom = &q.atoms[k];
        let rel = rels[k];
        'rows: for r in 0..rel.len() {
            *steps += 1;
            if *steps > cap {
                return Err(OracleError::CapExceeded { cap });
            }
            let row = rel.row(r);
            if row.len() != atom.terms.len() {
                continue;
            }
            let mut bound_here = Vec::new();
            for (c, t) in atom.terms.iter().enumerate() {
                let ok = match t {
                    Term::Const(_) => consts[k][c].unwrap() == Some(row[c]),
                    Term::Var(v) => match binding[*v] {
                        Some(x) => x == row[c],
                        None => {
                            binding[*v] = Some(row[c]);
                            bound_here.push(*v);
                            true
                        }
                    },
                };
                if !ok {
                    for v in bound_here {
                        binding[v] = None;
                    }
                    continue 'rows;
                }
            }
            rows[k] = r as u32;
            let w = d.combine(&acc, rel.weight(r));
            go(k + 1, q, rels, consts, d, binding, rows, w, steps, cap, out)?;
            for v in bound_here {
                binding[v] = None;
            }
        }
        Ok(())
    }

    go(
        0, q, &rels, &consts, d, &mut binding, &mut rows, d.one(), &mut steps, cap, &mut out,
    )?;

    let mut answers: Vec<OracleAnswer<D::Weight>> = match semantics {
        Semantics::AllWeights => out
            .into_iter()
            .map(|(w, a, r)| OracleAnswer {
                weight: w,
                assignment: a,
                witness: Some(r),
            })
            .collect(),
        Semantics::MinWeight => {
            let mut best: HashMap<Vec<Value>, D::Weight> = HashMap::new();
            for (w, a, _) in out {
                let e = best.entry(a).or_insert_with(|| d.zero());
                *e = d.prefer(e, &w);
            }
            best.into_iter()
                .map(|(a, w)| OracleAnswer {
                    weight: w,
                    assignment: a,
                    witness: None,
                })
                .collect()
        }
    };
    answers.sort_by(|a, b| match d.compare(&a.weight, &b.weight) {
        Ordering::Equal => (&a.assignment, &a.witness).cmp(&(&b.assignment, &b.witness)),
        o => o,
    });
    Ok(answers)
}

/// A path's combined weight and its node sequence.
pub type WeightedPath<W> = (W, Vec<u32>);

/// Every `s`-`t` path of a DAG with its combined edge weight, sorted by
/// weight and then by node sequence.
pub fn oracle_dag_paths<D: Dioid>(
    edges: &[(u32, u32, D::Weight)],
    s: u32,
    t: u32,
    d: &D,
    cap: u64,
) -> Result<Vec<WeightedPath<D::Weight>>, OracleError> {
    let mut adj: HashMap<u32, Vec<(u32, usize)>> = HashMap::new();
    for (i, (a, b, _)) in edges.iter().enumerate() {
        adj.entry(*a).or_default().push((*b, i));
    }
    let mut out = Vec::new();
    let mut path = vec![s];
    let mut on_path: HashMap<u32, bool> = HashMap::from([(s, true)]);
    let mut steps = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn go<D: Dioid>(
        u: u32,
        t: u32,
        acc: D::Weight,
        adj: &HashMap<u32, Vec<(u32, usize)>>,
        edges: &[(u32, u32, D::Weight)],
        d: &D,
        path: &mut Vec<u32>,
        on_path: &mut HashMap<u32, bool>,
        steps: &mut u64,
        cap: u64,
        out: &mut Vec<(D::Weight, Vec<u32>)>,
    ) -> Result<(), OracleError> {
        if u == t {
            out.push((acc, path.clone()));
            return Ok(());
        }
        for &(v, e) in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            *steps += 1;
            if *steps > cap {
                return Err(OracleError::CapExceeded { cap });
            }
            if on_path.get(&v).copied().unwrap_or(false) {
                return Err(OracleError::Cycle(v));
            }
            on_path.insert(v, true);
            path.push(v);
            let w = d.combine(&acc, &edges[e].2);
            go(v, t, w, adj, edges, d, path, on_path, steps, cap, out)?;
            path.pop();
            on_path.insert(v, false);
        }
        Ok(())
    }

    go(
        s, t, d.one(), &adj, edges, d, &mut path, &mut on_path, &mut steps, cap, &mut out,
    )?;
    out.sort_by(|a, b| match d.compare(&a.0, &b.0) {
        Ordering::Equal => a.1.cmp(&b.1),
        o => o,
    });
    Ok(out)
}
