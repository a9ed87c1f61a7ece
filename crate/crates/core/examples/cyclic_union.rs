//! Ranked 4-cycles of a small graph. The cycle query is cyclic, so it is
//! split into two acyclic queries over two-hop bags: one for cycles whose
//! start node has small out-degree, one for the rest. The union of their
//! ranked streams drops cycles that both members produce.

use std::collections::HashMap;

use anyk::anyk::{anyk_part, anyk_union, AnswerStream, Answers};
use anyk::{build_tdp, gyo_join_tree, parse_query, Database, Relation, Tropical, Value, Variant};

const EDGES: [(i64, i64, f64); 14] = [
    (1, 2, 4.0),
    (2, 3, 1.0),
    (3, 4, 2.0),
    (4, 1, 7.0),
    (1, 3, 3.0),
    (3, 1, 1.0),
    (2, 4, 5.0),
    (4, 2, 2.0),
    (1, 4, 6.0),
    (4, 3, 1.0),
    (3, 2, 8.0),
    (2, 1, 2.0),
    (1, 5, 1.0),
    (5, 3, 1.0),
];

fn main() -> Result<(), anyk::Error> {
    let q = parse_query("Q(a,b,c,d) :- E(a,b), E(b,c), E(c,d), E(d,a)")?;
    if let Err(e) = gyo_join_tree(&q) {
        println!("{e}");
    }

    let mut out_deg: HashMap<i64, usize> = HashMap::new();
    for e in EDGES {
        *out_deg.entry(e.0).or_default() += 1;
    }
    let threshold = 3;
    let light = |v: i64| out_deg[&v] <= threshold;
    let heavy = |v: i64| out_deg[&v] >= threshold;
    // Paths x -> y -> z, kept when `keep` accepts the node at `key`.
    let two_hop = |keep: &dyn Fn(i64) -> bool, key: usize| {
        let mut rel = Relation::new(3);
        for e1 in EDGES {
            for e2 in EDGES.iter().filter(|e2| e2.0 == e1.1) {
                let path = [e1.0, e1.1, e2.1];
                if keep(path[key]) {
                    rel.push(&path.map(Value::Int), e1.2 + e2.2);
                }
            }
        }
        rel
    };
    let mut db: Database<f64> = Database::new();
    db.insert("ABC", two_hop(&light, 0));
    db.insert("CDA", two_hop(&light, 2));
    db.insert("BCD", two_hop(&|_| true, 0));
    db.insert("DAB", two_hop(&heavy, 1));

    let members = [
        parse_query("Q(a,b,c,d) :- ABC(a,b,c), CDA(c,d,a)")?,
        parse_query("Q(a,b,c,d) :- BCD(b,c,d), DAB(d,a,b)")?,
    ];
    let mut insts = Vec::new();
    for m in &members {
        insts.push(build_tdp(m, &gyo_join_tree(m)?, &db, Tropical)?.bottom_up());
    }
    let mut streams: Vec<AnswerStream<'_, f64>> = Vec::new();
    for inst in &insts {
        streams.push(Box::new(Answers::new(inst, anyk_part(inst, Variant::Eager)?)));
    }
    let mut union = anyk_union(Tropical, streams);
    for a in union.by_ref().take(8) {
        println!("#{} {:>3} {}", a.rank, a.weight, db.symbols.render_row(&a.assignment));
    }
    let rest = union.by_ref().count();
    println!("{rest} more; {} duplicates dropped", union.duplicates);
    Ok(())
}
