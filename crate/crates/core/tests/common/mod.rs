#![allow(dead_code)]

use anyk::anyk::{anyk_part, anyk_part_plus, anyk_rec, Answers};
use anyk::oracle::{oracle_join_sort, OracleAnswer, Semantics};
use anyk::{
    build_tdp, gyo_join_tree, parse_query, ConjunctiveQuery, Database, Dioid, RankedAnswer,
    TdpInstance, Tropical, Value, Variant,
};

/// Three-relation path with pruned tuples on both sides of the join.
///
/// Twelve answers; the best is (1,1)(1,4)(4,1) with weight 111.
pub fn running_example() -> (ConjunctiveQuery, Database<f64>) {
    let q = parse_query("Q(x,y,z,u) :- R1(x,y), R2(y,z), R3(z,u)").unwrap();
    let mut db = Database::new();
    db.insert_ints(
        "R1",
        &[(&[1, 1], 1.0), (&[2, 1], 2.0), (&[5, 3], 3.0), (&[3, 2], 4.0), (&[4, 2], 5.0)],
    );
    db.insert_ints(
        "R2",
        &[
            (&[1, 4], 100.0),
            (&[1, 5], 200.0),
            (&[1, 6], 300.0),
            (&[2, 7], 150.0),
            (&[3, 8], 250.0),
            (&[3, 9], 260.0),
        ],
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
    (q, db)
}

pub const RUNNING_EXAMPLE_WEIGHTS: [f64; 12] =
    [111.0, 112.0, 121.0, 122.0, 231.0, 232.0, 303.0, 313.0, 333.0, 341.0, 342.0, 343.0];

pub fn instance<D: Dioid>(q: &ConjunctiveQuery, db: &Database<D::Weight>, d: D) -> TdpInstance<D> {
    let tree = gyo_join_tree(q).unwrap();
    build_tdp(q, &tree, db, d).unwrap().bottom_up()
}

pub fn ints(vals: &[i64]) -> Vec<Value> {
    vals.iter().map(|&v| Value::Int(v)).collect()
}

fn answer_key<W>(a: &RankedAnswer<W>) -> (Vec<Value>, Vec<u32>) {
    let mut w = a.witness.clone().unwrap_or_default();
    w.sort();
    (a.assignment.clone(), w.iter().map(|r| r.row).collect())
}

fn oracle_key<W>(a: &OracleAnswer<W>) -> (Vec<Value>, Vec<u32>) {
    (a.assignment.clone(), a.witness.clone().unwrap_or_default())
}

/// Weight sequences must be identical and the answers (with witnesses)
/// must form the same multiset.
pub fn compare<D: Dioid>(
    d: &D,
    got: &[RankedAnswer<D::Weight>],
    want: &[OracleAnswer<D::Weight>],
) -> Result<(), String> {
    if got.len() != want.len() {
        return Err(format!("{} answers, oracle has {}", got.len(), want.len()));
    }
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        if g.weight != w.weight {
            return Err(format!(
                "rank {}: weight {} but oracle has {}",
                i + 1,
                d.format_weight(&g.weight),
                d.format_weight(&w.weight)
            ));
        }
    }
    let mut a: Vec<_> = got.iter().map(answer_key).collect();
    let mut b: Vec<_> = want.iter().map(oracle_key).collect();
    a.sort();
    b.sort();
    if a != b {
        return Err("answer multisets differ".into());
    }
    Ok(())
}

/// Runs every any-k algorithm on `q` and compares each with the oracle.
pub fn check_all_algorithms(q: &ConjunctiveQuery, db: &Database<f64>) -> Result<(), String> {
    let d = Tropical;
    let want = oracle_join_sort(q, db, &d, Semantics::AllWeights, 50_000_000).map_err(|e| e.to_string())?;
    let inst = instance(q, db, d);
    for v in [Variant::Eager, Variant::Lazy, Variant::Quick] {
        let got: Vec<_> = Answers::new(&inst, anyk_part(&inst, v).unwrap()).collect();
        compare(&d, &got, &want).map_err(|e| format!("part {v:?}: {e}"))?;
    }
    let got: Vec<_> = Answers::new(&inst, anyk_rec(&inst).unwrap()).collect();
    compare(&d, &got, &want).map_err(|e| format!("rec: {e}"))?;
    let got: Vec<_> = Answers::new(&inst, anyk_part_plus(&inst, Variant::Quick, None).unwrap()).collect();
    compare(&d, &got, &want).map_err(|e| format!("part+: {e}"))?;
    Ok(())
}
