mod common;

use anyk::bench::{gen_random_instance, path_query, star_query, tree_query, WeightDist};
use common::check_all_algorithms;

fn run_shape(name: &str, q: &anyk::ConjunctiveQuery, instances: u64, max_n: usize) {
    for seed in 0..instances {
        let n = 3 + (seed as usize * 7) % (max_n - 2);
        let domain = 2 + (seed as i64 % 5);
        let db = gen_random_instance(q, n, domain, WeightDist::Integers(0, 20), seed);
        if let Err(e) = check_all_algorithms(q, &db) {
            panic!("{name} seed {seed} (n={n}, domain={domain}): {e}");
        }
    }
}

#[test]
fn paths_match_oracle() {
    for ell in 2..=4 {
        run_shape(&format!("path{ell}"), &path_query(ell), 40, 30);
    }
}

#[test]
fn stars_match_oracle() {
    run_shape("star3", &star_query(3), 40, 20);
}

#[test]
fn tree_matches_oracle() {
    run_shape("tree", &tree_query(), 40, 10);
}
