//! Loads CSV relations the way the `anyk` binary does and streams the top
//! answers as NDJSON.
//!
//! ```text
//! cargo run --example ndjson_stream -- crates/core/tests/data/running 5
//! ```

use std::path::PathBuf;

use anyk::anyk::{anyk_part, Answers};
use anyk::cli::{answer_json, ingest_csv, WeightMode};
use anyk::{build_tdp, gyo_join_tree, parse_query, Database, Tropical, Variant};

fn main() -> Result<(), anyk::Error> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/running").to_string()
    }));
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);

    let qpath = dir.join("query.txt");
    let q = parse_query(&std::fs::read_to_string(&qpath).map_err(|e| anyk::Error::io(&qpath, e))?)?;
    let mut db = Database::new();
    for atom in &q.atoms {
        let path = dir.join(format!("{}.csv", atom.relation));
        let rel = ingest_csv(&path, atom.arity(), WeightMode::LastColumn, false, &Tropical, &mut db.symbols)?;
        db.insert(atom.relation.clone(), rel);
    }
    let inst = build_tdp(&q, &gyo_join_tree(&q)?, &db, Tropical)?.bottom_up();
    let head = q.head_names();
    for a in Answers::new(&inst, anyk_part(&inst, Variant::Quick)?).take(k) {
        println!("{}", answer_json(&Tropical, &head, &q, &db, &a));
    }
    Ok(())
}
