mod common;

use anyk::anyk::{anyk_part, anyk_part_plus, anyk_rec, Answers};
use anyk::bench::{gen_cartesian, gen_random_instance, WeightDist};
use anyk::oracle::{oracle_dag_paths, oracle_join_sort, OracleError, Semantics};
use anyk::projections::{enumerate_all_weight, rewrite_min_weight};
use anyk::{parse_query, Database, ProjectionError, Tropical, Variant};
use common::*;
use proptest::prelude::*;

#[test]
fn dag_paths_single_edge() {
    let paths = oracle_dag_paths(&[(0, 1, 5.0)], 0, 1, &Tropical, 100).unwrap();
    assert_eq!(paths, vec![(5.0, vec![0, 1])]);
}

#[test]
fn dag_paths_diamond() {
    let edges = [(0, 1, 1.0), (0, 2, 2.0), (1, 3, 0.0), (2, 3, 0.0)];
    let paths = oracle_dag_paths(&edges, 0, 3, &Tropical, 100).unwrap();
    assert_eq!(paths, vec![(1.0, vec![0, 1, 3]), (2.0, vec![0, 2, 3])]);
}

#[test]
fn dag_paths_over_the_running_example_graph() {
    let (q, db) = running_example();
    let inst = instance(&q, &db, Tropical);
    // Node ids: source 0, then every (stage, local id) pair gets a fresh id.
    let mut ids = std::collections::HashMap::new();
    let mut id = |stage: usize, local: u32| {
        let n = ids.len() as u32 + 1;
        *ids.entry((stage, local)).or_insert(n)
    };
    let mut edges = Vec::new();
    for e in inst.edges() {
        let from = if e.from_stage == 0 { 0 } else { id(e.from_stage, e.from) };
        edges.push((from, id(e.to_stage, e.to), e.weight));
    }
    let t = id(2 * inst.num_positions(), 0);
    let paths = oracle_dag_paths(&edges, 0, t, &Tropical, 10_000).unwrap();
    let weights: Vec<f64> = paths.iter().map(|p| p.0).collect();
    assert_eq!(weights, RUNNING_EXAMPLE_WEIGHTS);
}

#[test]
fn dag_paths_reject_cycles() {
    let edges = [(0, 1, 1.0), (1, 2, 1.0), (2, 1, 1.0), (2, 3, 1.0)];
    assert!(matches!(oracle_dag_paths(&edges, 0, 3, &Tropical, 100), Err(OracleError::Cycle(_))));
}

#[test]
fn join_sort_handles_empty_relations() {
    let q = parse_query("Q(x,y) :- R(x), S(x,y)").unwrap();
    let mut db = Database::new();
    db.insert_ints("R", &[(&[1], 1.0)]);
    db.insert_ints("S", &[]);
    assert!(oracle_join_sort(&q, &db, &Tropical, Semantics::AllWeights, 100).unwrap().is_empty());
}

#[test]
fn join_sort_counts_cartesian_products() {
    let w = gen_cartesian(4, 3, WeightDist::Integers(0, 9), 1);
    let all = oracle_join_sort(&w.query, &w.db, &Tropical, Semantics::AllWeights, 10_000).unwrap();
    assert_eq!(all.len(), 64);
    assert!(all.windows(2).all(|p| p[0].weight <= p[1].weight));
}

#[test]
fn join_sort_respects_its_budget() {
    let w = gen_cartesian(10, 3, WeightDist::Integers(0, 9), 1);
    assert_eq!(
        oracle_join_sort(&w.query, &w.db, &Tropical, Semantics::AllWeights, 50),
        Err(OracleError::CapExceeded { cap: 50 })
    );
    let missing = parse_query("Q(x) :- T(x)").unwrap();
    assert_eq!(
        oracle_join_sort(&missing, &w.db, &Tropical, Semantics::AllWeights, 50),
        Err(OracleError::MissingRelation("T".into()))
    );
}

fn projection_example() -> (anyk::ConjunctiveQuery, Database<f64>) {
    let q = parse_query("Q(x1) :- R1(x1,x2), R2(x2,x3)").unwrap();
    let mut db = Database::new();
    db.insert_ints("R1", &[(&[1, 10], 1.0), (&[1, 20], 2.0), (&[2, 10], 5.0)]);
    db.insert_ints("R2", &[(&[10, 0], 3.0), (&[20, 0], 1.0)]);
    (q, db)
}

#[test]
fn all_weight_semantics_keeps_every_witness() {
    let (q, db) = projection_example();
    let inst = enumerate_all_weight(&q, &db, Tropical).unwrap();
    let got: Vec<_> = Answers::new(&inst, anyk_rec(&inst).unwrap()).map(|a| (a.assignment, a.weight)).collect();
    assert_eq!(got, vec![(ints(&[1]), 3.0), (ints(&[1]), 4.0), (ints(&[2]), 8.0)]);
}

#[test]
fn min_weight_semantics_keeps_the_best_witness() {
    let (q, db) = projection_example();
    let inst = rewrite_min_weight(&q, &db, Tropical).unwrap();
    let got: Vec<_> = Answers::new(&inst, anyk_part(&inst, Variant::Lazy).unwrap())
        .map(|a| (a.assignment, a.weight))
        .collect();
    assert_eq!(got, vec![(ints(&[1]), 3.0), (ints(&[2]), 8.0)]);
}

#[test]
fn projected_path_endpoints_are_rejected() {
    let q = parse_query("Q(x1,x3) :- R1(x1,x2), R2(x2,x3)").unwrap();
    let (_, db) = projection_example();
    assert!(matches!(rewrite_min_weight(&q, &db, Tropical), Err(ProjectionError::NotFreeConnex { .. })));
    let cyc = parse_query("Q(a,b,c) :- R1(a,b), R2(b,c), R1(c,a)").unwrap();
    assert!(matches!(rewrite_min_weight(&cyc, &db, Tropical), Err(ProjectionError::Cyclic { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn min_weight_rewrite_matches_the_oracle(n in 1usize..=25, domain in 2i64..6, seed: u64, shape in 0usize..3) {
        let src = [
            "Q(x1) :- R1(x1,x2), R2(x2,x3)",
            "Q(y1,y2) :- R1(y1,y2), R2(y2,x1), R3(x1,x2)",
            "Q(y1,y2,y3) :- R1(y1,y2), R2(y2,y3), R3(x1,y1), R4(x2,y3)",
        ][shape];
        let q = parse_query(src).unwrap();
        let db = gen_random_instance(&q, n, domain, WeightDist::Integers(0, 40), seed);
        let d = Tropical;
        let want = oracle_join_sort(&q, &db, &d, Semantics::MinWeight, 10_000_000).unwrap();
        let inst = rewrite_min_weight(&q, &db, d).unwrap();
        for v in [Variant::Eager, Variant::Quick] {
            let got: Vec<_> = Answers::new(&inst, anyk_part(&inst, v).unwrap()).collect();
            prop_assert_eq!(got.len(), want.len());
            for (g, w) in got.iter().zip(&want) {
                prop_assert_eq!(g.weight, w.weight);
            }
            let mut a: Vec<_> = got.iter().map(|g| g.assignment.clone()).collect();
            let mut b: Vec<_> = want.iter().map(|w| w.assignment.clone()).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
        let plus: Vec<f64> = anyk_part_plus(&inst, Variant::Lazy, None).unwrap().map(|s| s.weight).collect();
        let rec: Vec<f64> = anyk_rec(&inst).unwrap().map(|s| s.weight).collect();
        prop_assert_eq!(plus, rec);
    }
}
