//! Conjunctive queries, their hypergraphs and join trees.

mod freeconnex;
mod jointree;
mod parse;

use thiserror::Error;

use crate::db::{Symbols, Value};

pub use freeconnex::{is_free_connex, FreeConnexTree};
pub use jointree::{gyo_join_tree, gyo_reduce, serial_decomposition, JoinTree, SerialDecomposition};
pub use parse::{parse_query, parse_queries};

pub type VarId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(VarId),
    Const(String),
}

/// Filters applied to a relation before it joins: columns that must hold
/// equal values (a variable repeated inside one atom) and columns fixed to a
/// constant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Selection {
    pub equal: Vec<(usize, usize)>,
    pub constants: Vec<(usize, String)>,
}

impl Selection {
    pub fn is_empty(&self) -> bool {
        self.equal.is_empty() && self.constants.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    /// Unique name within the query. Repeated relations get `<rel>__copy<i>`.
    pub name: String,
    /// The database relation the atom reads.
    pub relation: String,
    pub terms: Vec<Term>,
    /// Distinct variables in order of first appearance.
    pub vars: Vec<VarId>,
    /// Column of the first occurrence of each entry of `vars`.
    pub columns: Vec<usize>,
    pub selection: Selection,
    pub self_join_copy: bool,
    /// For projection atoms built by the free-connex rewriting, the atom
    /// whose tuples are projected.
    pub projection_of: Option<usize>,
}

impl Atom {
    pub fn arity(&self) -> usize {
        self.terms.len()
    }

    /// Resolves constants against the symbol table. `None` entries mean the
    /// constant does not occur in the database, so nothing matches.
    pub fn resolve_constants(&self, symbols: &Symbols) -> Vec<(usize, Option<Value>)> {
        self.selection
            .constants
            .iter()
            .map(|(c, text)| (*c, symbols.lookup(text)))
            .collect()
    }

    pub fn accepts(&self, row: &[Value], constants: &[(usize, Option<Value>)]) -> bool {
        constants.iter().all(|(c, v)| Some(row[*c]) == *v)
            && self.selection.equal.iter().all(|&(a, b)| row[a] == row[b])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjunctiveQuery {
    pub name: String,
    /// Free variables, in head order.
    pub head: Vec<VarId>,
    pub var_names: Vec<String>,
    pub atoms: Vec<Atom>,
}

impl ConjunctiveQuery {
    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    /// True when every body variable appears in the head.
    pub fn is_full(&self) -> bool {
        (0..self.num_vars()).all(|v| self.head.contains(&v))
    }

    pub fn head_names(&self) -> Vec<String> {
        self.head.iter().map(|&v| self.var_names[v].clone()).collect()
    }

    pub fn var(&self, name: &str) -> Option<VarId> {
        self.var_names.iter().position(|n| n == name)
    }

    /// Atoms that read the same relation as an earlier atom.
    pub fn self_join_copies(&self) -> Vec<&Atom> {
        self.atoms.iter().filter(|a| a.self_join_copy).collect()
    }

    pub fn hyperedges(&self) -> Vec<Vec<VarId>> {
        self.atoms.iter().map(|a| a.vars.clone()).collect()
    }
}

impl std::fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({}) :- ", self.name, self.head_names().join(","))?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}(", a.relation)?;
            for (j, t) in a.terms.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                match t {
                    Term::Var(v) => f.write_str(&self.var_names[*v])?,
                    Term::Const(c) if c.parse::<i64>().is_ok() => f.write_str(c)?,
                    Term::Const(c) => write!(f, "\"{c}\"")?,
                }
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("head variable {var} at line {line}, column {col} does not occur in the body")]
    HeadVarNotInBody { var: String, line: usize, col: usize },
    #[error("query is cyclic; irreducible atoms: {}", residue_names(.residue))]
    Cyclic { residue: Vec<String> },
    #[error("query is not free-connex; irreducible hyperedges: {}", residue_names(.residue))]
    NotFreeConnex { residue: Vec<String> },
}

fn residue_names(r: &[String]) -> String {
    r.join(", ")
}
