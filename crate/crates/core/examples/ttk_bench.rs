//! Time-to-k of every algorithm on a synthetic 4-path, written as CSV.
//!
//! ```text
//! cargo run --release --example ttk_bench -- 5000
//! ```

use anyk::bench::{gen_synthetic, measure_ttk, write_ttk_csv};
use anyk::{Algorithm, Tropical, Variant};

fn main() -> Result<(), anyk::Error> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let w = gen_synthetic(n, 4, 10, 42);
    let checkpoints = [1, 10, 100, 1000, 10 * n as u64];
    let algos = [
        Algorithm::Part(Variant::Eager),
        Algorithm::Part(Variant::Lazy),
        Algorithm::Part(Variant::Quick),
        Algorithm::Rec,
        Algorithm::PartPlus(Variant::Lazy),
        Algorithm::Batch,
    ];
    let mut rows = Vec::new();
    for algo in algos {
        rows.extend(measure_ttk(algo, &w.name, &w.query, &w.db, Tropical, &checkpoints, 100_000_000)?);
    }
    write_ttk_csv(&rows, &mut std::io::stdout().lock()).map_err(|e| anyk::Error::io("<stdout>".as_ref(), e))?;
    Ok(())
}
