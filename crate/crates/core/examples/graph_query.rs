//! Lightest 3-hop walks in an edge list, weighted either by the file or by
//! the PageRank of the endpoints.
//!
//! ```text
//! cargo run --example graph_query -- edges.csv [--pagerank]
//! ```
//!
//! Without a file a small ring with chords is used.

use std::path::PathBuf;

use anyk::anyk::{anyk_rec, Answers};
use anyk::bench::{gen_graph_query, GraphWeights};
use anyk::{build_tdp, gyo_join_tree, Tropical};

fn main() -> Result<(), anyk::Error> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mode = if args.iter().any(|a| a == "--pagerank") {
        GraphWeights::PageRank
    } else {
        GraphWeights::Provided
    };
    let path = match args.iter().find(|a| !a.starts_with("--")) {
        Some(p) => PathBuf::from(p),
        None => {
            let p = std::env::temp_dir().join("anyk-ring.csv");
            let mut text = String::from("src,dst,weight\n");
            for i in 0..12 {
                text.push_str(&format!("{i},{},{}\n", (i + 1) % 12, 1 + i % 4));
                text.push_str(&format!("{i},{},{}\n", (i + 5) % 12, 3 + i % 3));
            }
            std::fs::write(&p, text).map_err(|e| anyk::Error::io(&p, e))?;
            p
        }
    };

    let w = gen_graph_query(&path, 3, mode)?;
    println!("{}: {}", w.name, w.query);
    let inst = build_tdp(&w.query, &gyo_join_tree(&w.query)?, &w.db, Tropical)?.bottom_up();
    println!("{} walks", inst.count_answers());
    for a in Answers::new(&inst, anyk_rec(&inst)?).take(10) {
        let walk: Vec<String> = a.assignment.iter().map(|&v| w.db.symbols.render(v)).collect();
        println!("#{:<2} {:.4} {}", a.rank, a.weight, walk.join(" -> "));
    }
    Ok(())
}
