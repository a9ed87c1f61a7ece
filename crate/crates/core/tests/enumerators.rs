mod common;

use anyk::anyk::{
    anyk_part, anyk_part_plus, anyk_rec, anyk_union, batch_yannakakis_sort, enumerate, AnswerStream, Answers,
};
use anyk::bench::{gen_random_instance, path_query, star_query, WeightDist};
use anyk::oracle::{oracle_join_sort, Semantics};
use anyk::{
    parse_query, Algorithm, Database, Dioid, EnumError, LexWeight, Lexicographic, MinMax, Product,
    RankedAnswer, Tropical, Variant,
};
use common::*;
use proptest::prelude::*;

const VARIANTS: [Variant; 3] = [Variant::Eager, Variant::Lazy, Variant::Quick];

/// Three unary relations of four tuples each. Weights are digits in base 10,
/// so an answer's weight spells the ranks of its tuples.
fn digits_cartesian() -> (anyk::ConjunctiveQuery, Database<f64>) {
    let q = parse_query("Q(a,b,c) :- R1(a), R2(b), R3(c)").unwrap();
    let mut db = Database::new();
    for (name, scale) in [("R1", 100.0), ("R2", 10.0), ("R3", 1.0)] {
        let rows: Vec<(&[i64], f64)> = [&[1][..], &[2], &[3], &[4]]
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, i as f64 * scale))
            .collect();
        db.insert_ints(name, &rows);
    }
    (q, db)
}

#[test]
fn cartesian_answers_appear_once_in_order() {
    let (q, db) = digits_cartesian();
    let inst = instance(&q, &db, Tropical);
    for v in VARIANTS {
        let got: Vec<f64> = anyk_part(&inst, v).unwrap().map(|s| s.weight).collect();
        let mut want: Vec<f64> = (0..4)
            .flat_map(|a| (0..4).flat_map(move |b| (0..4).map(move |c| (100 * a + 10 * b + c) as f64)))
            .collect();
        want.sort_by(f64::total_cmp);
        assert_eq!(got, want, "{v:?}");
    }
}

#[test]
fn deviations_bump_one_position() {
    let (q, db) = digits_cartesian();
    let inst = instance(&q, &db, Tropical);
    let r2 = (1..=3).find(|&p| inst.position(p).atom == 1).unwrap();
    for v in VARIANTS {
        let mut part = anyk_part(&inst, v).unwrap();
        let mut weights = Vec::new();
        let mut found = false;
        while let Some(s) = part.next() {
            weights.push(s.weight);
            let prov = part.provenance().unwrap();
            if weights.len() == 1 {
                assert_eq!(prov.origin, None);
                continue;
            }
            let origin = prov.origin.unwrap() as usize;
            assert!(origin < weights.len());
            if s.weight == 110.0 {
                assert_eq!(weights[origin - 1], 100.0, "{v:?}");
                assert_eq!(prov.position, r2, "{v:?}");
                found = true;
            }
        }
        assert!(found);
    }
}

#[test]
fn rec_and_part_agree_on_stars() {
    let q = star_query(3);
    for seed in 0..10 {
        let db = gen_random_instance(&q, 12, 4, WeightDist::Integers(0, 20), seed);
        let inst = instance(&q, &db, Tropical);
        let part: Vec<f64> = anyk_part(&inst, Variant::Lazy).unwrap().map(|s| s.weight).collect();
        let rec: Vec<f64> = anyk_rec(&inst).unwrap().map(|s| s.weight).collect();
        assert_eq!(part, rec, "seed {seed}");
    }
}

#[test]
fn batch_sorts_the_full_result() {
    let (q, db) = running_example();
    let inst = instance(&q, &db, Tropical);
    let all = batch_yannakakis_sort(&inst, 100).unwrap();
    assert_eq!(all.len(), 12);
    assert_eq!(all.get(0).weight, 111.0);
    let w: Vec<f64> = all.into_solutions().map(|s| s.weight).collect();
    assert_eq!(w, RUNNING_EXAMPLE_WEIGHTS);
    assert_eq!(
        batch_yannakakis_sort(&inst, 5).err(),
        Some(EnumError::OutputBudgetExceeded { cap: 5 })
    );
}

#[test]
fn empty_instances_enumerate_nothing() {
    let q = parse_query("Q(x,y) :- R(x), S(x,y)").unwrap();
    let mut db = Database::new();
    db.insert_ints("R", &[(&[1], 0.0)]);
    db.insert_ints("S", &[(&[2, 2], 0.0)]);
    let inst = instance(&q, &db, Tropical);
    for algo in [
        Algorithm::Part(Variant::Eager),
        Algorithm::Rec,
        Algorithm::PartPlus(Variant::Quick),
        Algorithm::Batch,
    ] {
        let mut e = enumerate(&inst, algo, 10).unwrap();
        assert!(e.next().is_none(), "{}", algo.label());
        assert!(e.next().is_none());
    }
}

#[test]
fn part_plus_rejects_product_ranking() {
    let (q, db) = running_example();
    let inst = instance(&q, &db.map_weights(|w| 1.0 / (1.0 + w)), Product);
    match anyk_part_plus(&inst, Variant::Lazy, None) {
        Err(EnumError::Config(msg)) => assert!(msg.contains("strongly subset-monotone"), "{msg}"),
        Err(e) => panic!("{e}"),
        Ok(_) => panic!("PART+ accepted a product ranking"),
    }
    let w: Vec<f64> = anyk_part(&inst, Variant::Lazy).unwrap().map(|s| s.weight).collect();
    assert_eq!(w.len(), 12);
    assert!(w.windows(2).all(|p| p[0] <= p[1]));
}

#[test]
fn stats_are_deterministic() {
    let q = path_query(4);
    let db = gen_random_instance(&q, 40, 6, WeightDist::Integers(0, 9), 3);
    let inst = instance(&q, &db, Tropical);
    let run = |algo| {
        let mut e = enumerate(&inst, algo, u64::MAX).unwrap();
        let n = e.by_ref().take(500).count();
        (n, e.stats())
    };
    for algo in [Algorithm::Part(Variant::Eager), Algorithm::Rec, Algorithm::PartPlus(Variant::Lazy)] {
        let (n, s) = run(algo);
        assert_eq!((n, s), run(algo));
        assert!(s.pq_pops > 0 && s.pq_pushes >= s.init_pushes);
    }
}

#[test]
fn prefixes_match_full_runs() {
    let q = path_query(3);
    let db = gen_random_instance(&q, 25, 5, WeightDist::Integers(0, 30), 8);
    let inst = instance(&q, &db, Tropical);
    let full: Vec<f64> = anyk_rec(&inst).unwrap().map(|s| s.weight).collect();
    for k in [0, 1, 7, full.len()] {
        let got: Vec<f64> = anyk_part(&inst, Variant::Quick).unwrap().take(k).map(|s| s.weight).collect();
        assert_eq!(got, full[..k]);
    }
}

fn stream(weights: &[f64], tag: i64) -> AnswerStream<'static, f64> {
    let answers: Vec<RankedAnswer<f64>> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| RankedAnswer {
            rank: i as u64 + 1,
            weight: w,
            assignment: ints(&[tag + w as i64]),
            witness: None,
        })
        .collect();
    Box::new(answers.into_iter())
}

#[test]
fn union_merges_sorted_streams() {
    let u = anyk_union(Tropical, vec![stream(&[1.0, 3.0, 5.0], 0), stream(&[2.0, 4.0], 0)]);
    let got: Vec<(u64, f64)> = u.map(|a| (a.rank, a.weight)).collect();
    assert_eq!(got, vec![(1, 1.0), (2, 2.0), (3, 3.0), (4, 4.0), (5, 5.0)]);
}

#[test]
fn union_drops_repeated_assignments() {
    let mut u = anyk_union(Tropical, vec![stream(&[1.0], 0), stream(&[1.0], 0), stream(&[2.0], 10)]);
    let got: Vec<f64> = u.by_ref().map(|a| a.weight).collect();
    assert_eq!(got, vec![1.0, 2.0]);
    assert_eq!(u.duplicates, 1);
    assert!(u.next().is_none());
}

fn weights_of<D: Dioid>(e: impl Iterator<Item = anyk::Solution<D::Weight>>) -> Vec<D::Weight> {
    e.map(|s| s.weight).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minmax_rankings_match_the_oracle(n in 1usize..=20, domain in 2i64..6, seed: u64) {
        let q = path_query(3);
        let db = gen_random_instance(&q, n, domain, WeightDist::Integers(0, 9), seed);
        let want: Vec<f64> = oracle_join_sort(&q, &db, &MinMax, Semantics::AllWeights, 1_000_000)
            .unwrap()
            .into_iter()
            .map(|a| a.weight)
            .collect();
        let inst = instance(&q, &db, MinMax);
        for v in VARIANTS {
            prop_assert_eq!(&weights_of::<MinMax>(anyk_part(&inst, v).unwrap()), &want);
            prop_assert_eq!(&weights_of::<MinMax>(anyk_part_plus(&inst, v, None).unwrap()), &want);
        }
        prop_assert_eq!(&weights_of::<MinMax>(anyk_rec(&inst).unwrap()), &want);
    }

    #[test]
    fn lexicographic_rankings_match_the_oracle(n in 1usize..=15, seed: u64) {
        let q = star_query(3);
        let db = gen_random_instance(&q, n, 3, WeightDist::Integers(0, 4), seed);
        let db = db.map_weights(|&w| LexWeight::new(vec![w, (w * 7.0) % 5.0]));
        let d = Lexicographic;
        let want = oracle_join_sort(&q, &db, &d, Semantics::AllWeights, 1_000_000).unwrap();
        let inst = instance(&q, &db, d);
        for algo in [Algorithm::Part(Variant::Lazy), Algorithm::Rec, Algorithm::PartPlus(Variant::Eager)] {
            let got: Vec<_> = Answers::new(&inst, enumerate(&inst, algo, u64::MAX).unwrap()).collect();
            prop_assert!(compare(&d, &got, &want).is_ok(), "{}", algo.label());
        }
    }

    #[test]
    fn every_prefix_is_sorted(n in 1usize..=25, seed: u64, k in 0usize..60) {
        let q = path_query(4);
        let db = gen_random_instance(&q, n, 4, WeightDist::Integers(0, 100), seed);
        let inst = instance(&q, &db, Tropical);
        for algo in [Algorithm::Part(Variant::Eager), Algorithm::Part(Variant::Quick), Algorithm::Rec] {
            let w: Vec<f64> = enumerate(&inst, algo, u64::MAX).unwrap().take(k).map(|s| s.weight).collect();
            prop_assert!(w.windows(2).all(|p| p[0] <= p[1]));
            prop_assert_eq!(w.len() as u128, (k as u128).min(inst.count_answers()));
        }
    }
}
