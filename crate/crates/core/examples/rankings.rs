//! One join ranked four ways, and the law checker catching a ranking
//! function that claims more than it delivers.

use anyk::anyk::{anyk_part, anyk_part_plus, Answers};
use anyk::ranking::{check_dioid_laws, Declared};
use anyk::{build_tdp, gyo_join_tree, parse_query, Database, Dioid, LexWeight, Lexicographic, MinMax, Monotonicity};
use anyk::{Product, Tropical, Variant};

fn top3<D: Dioid>(label: &str, q: &anyk::ConjunctiveQuery, db: &Database<D::Weight>, d: D) -> Result<(), anyk::Error> {
    let tree = gyo_join_tree(q)?;
    let inst = build_tdp(q, &tree, db, d.clone())?.bottom_up();
    let best: Vec<String> = Answers::new(&inst, anyk_part(&inst, Variant::Lazy)?)
        .take(3)
        .map(|a| format!("{}={}", db.symbols.render_row(&a.assignment), d.format_weight(&a.weight)))
        .collect();
    println!("{label:>5}: {}", best.join("  "));
    Ok(())
}

fn main() -> Result<(), anyk::Error> {
    let q = parse_query("Q(a,b,c) :- Hop1(a,b), Hop2(b,c)")?;
    let mut db: Database<f64> = Database::new();
    db.insert_ints("Hop1", &[(&[1, 10], 3.0), (&[2, 10], 1.0), (&[3, 20], 2.0)]);
    db.insert_ints("Hop2", &[(&[10, 7], 5.0), (&[10, 8], 1.0), (&[20, 9], 4.0)]);

    top3("sum", &q, &db, Tropical)?;
    top3("max", &q, &db, MinMax)?;
    let lex = db.map_weights(|&w| LexWeight::new(vec![(w / 2.0).floor(), w]));
    top3("lex", &q, &lex, Lexicographic)?;
    let prob = db.map_weights(|&w| 1.0 / (1.0 + w));
    top3("prod", &q, &prob, Product)?;

    // Products are only subset-monotone, so PART+ refuses them.
    let tree = gyo_join_tree(&q)?;
    let inst = build_tdp(&q, &tree, &prob, Product)?.bottom_up();
    if let Err(e) = anyk_part_plus(&inst, Variant::Lazy, None) {
        println!("PART+: {e}");
    }

    let liar = Declared {
        inner: Product,
        monotonicity: Monotonicity::StrongSubsetMonotone,
    };
    for v in check_dioid_laws(&liar, &[0.0, 0.5, 0.2, 0.1]) {
        println!("violated: {} on {:?}", v.law, v.witness);
    }
    Ok(())
}
