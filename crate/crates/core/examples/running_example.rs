//! Three-relation path join, enumerated in weight order by every algorithm.
//!
//! ```text
//! cargo run --example running_example
//! ```

use anyk::anyk::{anyk_part, anyk_part_plus, anyk_rec, Answers};
use anyk::{build_tdp, gyo_join_tree, parse_query, Database, Tropical, Variant};

fn main() -> Result<(), anyk::Error> {
    let q = parse_query("Q(x,y,z,u) :- R1(x,y), R2(y,z), R3(z,u)")?;
    let mut db = Database::new();
    db.insert_ints("R1", &[(&[1, 1], 1.0), (&[2, 1], 2.0), (&[5, 3], 3.0), (&[3, 2], 4.0), (&[4, 2], 5.0)]);
    db.insert_ints(
        "R2",
        &[(&[1, 4], 100.0), (&[1, 5], 200.0), (&[1, 6], 300.0), (&[2, 7], 150.0), (&[3, 8], 250.0), (&[3, 9], 260.0)],
    );
    db.insert_ints(
        "R3",
        &[
            (&[4, 1], 10.0),
            (&[4, 2], 20.0),
            (&[5, 1], 30.0),
            (&[6, 1], 40.0),
            (&[8, 1], 50.0),
            (&[8, 2], 60.0),
            (&[9, 1], 70.0),
            (&[9, 2], 80.0),
        ],
    );

    let tree = gyo_join_tree(&q)?;
    let inst = build_tdp(&q, &tree, &db, Tropical)?.bottom_up();
    println!(
        "{} answers, {} live states of {}, best weight {:?}",
        inst.count_answers(),
        inst.live_states(),
        inst.num_states(),
        inst.top_weight()
    );

    // PART remembers which earlier answer each output deviates from.
    let mut part = anyk_part(&inst, Variant::Lazy)?;
    let mut rank = 0;
    while let Some(sol) = part.next() {
        rank += 1;
        let a = inst.answer(&sol, rank);
        let p = part.provenance().unwrap();
        let from = p.origin.map_or("top-1".to_string(), |o| format!("#{o} at stage {}", p.position));
        println!("#{rank:<2} {:>4} {}  from {from}", a.weight, db.symbols.render_row(&a.assignment));
    }

    let rec: Vec<f64> = Answers::new(&inst, anyk_rec(&inst)?).map(|a| a.weight).collect();
    let plus: Vec<f64> = Answers::new(&inst, anyk_part_plus(&inst, Variant::Quick, None)?).map(|a| a.weight).collect();
    assert_eq!(rec, plus);
    println!("REC and PART+ agree: {rec:?}");
    Ok(())
}
