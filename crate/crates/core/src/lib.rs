//! Ranked enumeration of conjunctive query answers.
//!
//! A query is compiled into a staged graph ([`dpgraph::TdpInstance`]) whose
//! root-to-leaf trees are exactly the query answers. The any-k enumerators in
//! [`anyk`] then return answers in ranking order with small delay, without
//! computing the full result first.
//!
//! ```
//! use anyk::anyk::{anyk_part, Answers};
//! use anyk::{build_tdp, gyo_join_tree, parse_query, Database, Tropical, Variant};
//!
//! # fn main() -> Result<(), anyk::Error> {
//! let q = parse_query("Q(x,y,z) :- R(x,y), S(y,z)")?;
//! let mut db = Database::new();
//! db.insert_ints("R", &[(&[1, 2], 3.0), (&[4, 2], 1.0)]);
//! db.insert_ints("S", &[(&[2, 5], 2.0)]);
//!
//! let inst = build_tdp(&q, &gyo_join_tree(&q)?, &db, Tropical)?.bottom_up();
//! let weights: Vec<f64> = Answers::new(&inst, anyk_part(&inst, Variant::Lazy)?).map(|a| a.weight).collect();
//! assert_eq!(weights, [3.0, 5.0]);
//! # Ok(())
//! # }
//! ```

pub mod anyk;
pub mod bench;
pub mod cli;
pub mod db;
pub mod dpgraph;
pub mod oracle;
pub mod projections;
pub mod query;
pub mod ranking;

use std::path::Path;

pub use anyk::{Algorithm, Answers, EnumError, EnumStats, RankedEnumerator, Variant};
pub use db::{Database, Relation, Value};
pub use dpgraph::{build_tdp, BuildError, RankedAnswer, Solution, StateId, TdpInstance, WitnessRef};
pub use oracle::Semantics;
pub use projections::ProjectionError;
pub use query::{gyo_join_tree, is_free_connex, parse_query, ConjunctiveQuery, JoinTree, QueryError};
pub use ranking::{Dioid, LexWeight, Lexicographic, MinMax, Monotonicity, Product, Tropical};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error(transparent)]
    Weight(#[from] ranking::WeightParseError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(String),
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
