//! PART+ keeps one candidate per group of join keys instead of one per
//! output, so its queue stays bounded by the instance size. Here the same
//! tree query runs with level groups and with a custom grouping, next to
//! plain PART.

use anyk::anyk::{anyk_part, anyk_part_plus, RankedEnumerator};
use anyk::bench::{gen_random_instance, tree_query, WeightDist};
use anyk::query::serial_decomposition;
use anyk::{build_tdp, gyo_join_tree, Tropical, Variant};

fn report(label: &str, e: &mut dyn RankedEnumerator<Tropical>, k: usize) {
    let n = e.take(k).count();
    let s = e.stats();
    println!(
        "{label:<14} {n} answers, max queue {:>6}, pushes {:>7}, comparisons {:>8}",
        s.max_pq_size,
        s.pq_pushes,
        s.pq_ops()
    );
}

fn main() -> Result<(), anyk::Error> {
    let q = tree_query();
    let tree = gyo_join_tree(&q)?;
    let sd = serial_decomposition(&tree);
    println!("join tree depth {}, decomposition width {}: {:?}", tree.depth(), sd.width(), sd.vertices);

    let db = gen_random_instance(&q, 60, 12, WeightDist::Integers(0, 1000), 3);
    let inst = build_tdp(&q, &tree, &db, Tropical)?.bottom_up();
    println!("{} answers, {} live states", inst.count_answers(), inst.live_states());

    let k = 20_000;
    report("PART", &mut anyk_part(&inst, Variant::Lazy)?, k);
    report("PART+ levels", &mut anyk_part_plus(&inst, Variant::Lazy, None)?, k);
    report("PART+ serial", &mut anyk_part_plus(&inst, Variant::Lazy, Some(&sd))?, k);
    Ok(())
}
