//! A free-connex query with existential variables under both semantics:
//! one answer per witness, or one per head assignment at its best witness.

use anyk::anyk::{anyk_rec, Answers};
use anyk::bench::{gen_random_instance, WeightDist};
use anyk::projections::{enumerate_all_weight, rewrite_min_weight};
use anyk::{is_free_connex, parse_query, Tropical};

fn main() -> Result<(), anyk::Error> {
    let q = parse_query("Q(y1,y2,y3) :- R1(y1,y2), R2(y2,y3), R3(x1,y1), R4(x2,y3)")?;
    let fc = is_free_connex(&q)?;
    let extra: Vec<&str> = fc.query.atoms[q.atoms.len()..].iter().map(|a| a.name.as_str()).collect();
    println!("free-connex, projection atoms added: {extra:?}");

    let db = gen_random_instance(&q, 30, 5, WeightDist::Integers(0, 20), 7);

    let all = enumerate_all_weight(&q, &db, Tropical)?;
    let min = rewrite_min_weight(&q, &db, Tropical)?;
    println!("{} witnesses, {} distinct answers", all.count_answers(), min.count_answers());

    for a in Answers::new(&min, anyk_rec(&min)?).take(5) {
        println!("#{} {:>3} {}", a.rank, a.weight, db.symbols.render_row(&a.assignment));
    }

    let not_fc = parse_query("Q(x1,x3) :- R1(x1,x2), R2(x2,x3)")?;
    if let Err(e) = rewrite_min_weight(&not_fc, &db, Tropical) {
        println!("{e}");
    }
    Ok(())
}
