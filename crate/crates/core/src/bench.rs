//! Workload generators and time-to-k measurement.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::anyk::{batch_yannakakis_sort, enumerate, Algorithm, RankedEnumerator};
use crate::db::{Database, Relation, Value};
use crate::dpgraph::build_tdp;
use crate::query::{gyo_join_tree, parse_query, ConjunctiveQuery};
use crate::ranking::Dioid;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightDist {
    /// Real weights drawn uniformly from `[lo, hi]`.
    Uniform(f64, f64),
    /// Integer weights drawn uniformly from `lo..=hi`.
    Integers(i64, i64),
}

impl WeightDist {
    fn sample(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            WeightDist::Uniform(lo, hi) => rng.gen_range(lo..=hi),
            WeightDist::Integers(lo, hi) => rng.gen_range(lo..=hi) as f64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Workload {
    pub name: String,
    pub query: ConjunctiveQuery,
    pub db: Database<f64>,
}

fn vars(prefix: &str, range: std::ops::RangeInclusive<usize>) -> String {
    range.map(|i| format!("{prefix}{i}")).collect::<Vec<_>>().join(",")
}

/// `Q(x0..xℓ) :- R1(x0,x1), ..., Rℓ(xℓ-1,xℓ)`.
pub fn path_query(ell: usize) -> ConjunctiveQuery {
    let body: Vec<String> = (1..=ell).map(|i| format!("R{i}(x{},x{i})", i - 1)).collect();
    parse_query(&format!("Q({}) :- {}", vars("x", 0..=ell), body.join(", "))).unwrap()
}

/// `Q(x0..xℓ) :- R1(x0,x1), ..., Rℓ(x0,xℓ)`.
pub fn star_query(ell: usize) -> ConjunctiveQuery {
    let body: Vec<String> = (1..=ell).map(|i| format!("R{i}(x0,x{i})")).collect();
    parse_query(&format!("Q({}) :- {}", vars("x", 0..=ell), body.join(", "))).unwrap()
}

/// A six-atom tree: `R1(x,y,z)` joins `R2(y,u)` and `R4(y,p)`; `R2` continues
/// to `R3(u,a)`; `R4` branches to `R5(p,f)` and `R6(p,g)`.
pub fn tree_query() -> ConjunctiveQuery {
    parse_query("Q(x,y,z,u,a,p,f,g) :- R1(x,y,z), R2(y,u), R3(u,a), R4(y,p), R5(p,f), R6(p,g)").unwrap()
}

/// `Q(x1..xℓ) :- R1(x1), ..., Rℓ(xℓ)`.
pub fn cartesian_query(ell: usize) -> ConjunctiveQuery {
    let body: Vec<String> = (1..=ell).map(|i| format!("R{i}(x{i})")).collect();
    parse_query(&format!("Q({}) :- {}", vars("x", 1..=ell), body.join(", "))).unwrap()
}

/// `Q(x1..xℓ) :- R1(x1,x2), ..., Rℓ(xℓ,x1)`.
pub fn cycle_query(ell: usize) -> ConjunctiveQuery {
    let body: Vec<String> = (1..=ell)
        .map(|i| format!("R{i}(x{i},x{})", if i == ell { 1 } else { i + 1 }))
        .collect();
    parse_query(&format!("Q({}) :- {}", vars("x", 1..=ell), body.join(", "))).unwrap()
}

/// Fills every relation of `q` with `n` tuples whose values are drawn
/// uniformly from `1..=domain`. Atoms that share a relation share its data.
pub fn gen_random_instance(
    q: &ConjunctiveQuery,
    n: usize,
    domain: i64,
    weights: WeightDist,
    seed: u64,
) -> Database<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut db = Database::new();
    for a in &q.atoms {
        if db.get(&a.relation).is_some() {
            continue;
        }
        let mut rel = Relation::new(a.arity());
        for _ in 0..n {
            let row: Vec<Value> = (0..a.arity())
                .map(|_| Value::Int(rng.gen_range(1..=domain.max(1))))
                .collect();
            let w = weights.sample(&mut rng);
            rel.push(&row, w);
        }
        db.insert(a.relation.clone(), rel);
    }
    db
}

/// `ℓ`-path over `ℓ` binary relations of `n` tuples each. Values are uniform
/// over `1..=n/domain_divisor`, so every value joins with about
/// `domain_divisor` tuples of the next relation. Weights are uniform reals in
/// `[0, 10000]`.
pub fn gen_synthetic(n: usize, ell: usize, domain_divisor: usize, seed: u64) -> Workload {
    gen_synthetic_with(n, ell, domain_divisor, seed, WeightDist::Uniform(0.0, 10_000.0))
}

pub fn gen_synthetic_with(
    n: usize,
    ell: usize,
    domain_divisor: usize,
    seed: u64,
    weights: WeightDist,
) -> Workload {
    let q = path_query(ell);
    let domain = (n / domain_divisor.max(1)).max(1) as i64;
    let db = gen_random_instance(&q, n, domain, weights, seed);
    Workload {
        name: format!("path{ell}-n{n}-d{domain_divisor}-s{seed}"),
        query: q,
        db,
    }
}

/// Cartesian product of `ℓ` unary relations, each holding `1..=n` with
/// random weights.
pub fn gen_cartesian(n: usize, ell: usize, weights: WeightDist, seed: u64) -> Workload {
    let q = cartesian_query(ell);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut db = Database::new();
    for a in &q.atoms {
        let mut rel = Relation::new(1);
        for v in 1..=n as i64 {
            rel.push(&[Value::Int(v)], weights.sample(&mut rng));
        }
        db.insert(a.relation.clone(), rel);
    }
    Workload {
        name: format!("cartesian{ell}-n{n}-s{seed}"),
        query: q,
        db,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphWeights {
    /// Third CSV column.
    Provided,
    /// Sum of the PageRank scores of both endpoints.
    PageRank,
}

/// Power-iteration PageRank with uniform teleport; dangling nodes spread
/// their score evenly.
pub fn pagerank(edges: &[(Value, Value)], damping: f64, iterations: usize) -> HashMap<Value, f64> {
    let mut ids: HashMap<Value, usize> = HashMap::new();
    for &(a, b) in edges {
        let n = ids.len();
        ids.entry(a).or_insert(n);
        let n = ids.len();
        ids.entry(b).or_insert(n);
    }
    let n = ids.len();
    if n == 0 {
        return HashMap::new();
    }
    let mut out_deg = vec![0usize; n];
    let idx: Vec<(usize, usize)> = edges.iter().map(|(a, b)| (ids[a], ids[b])).collect();
    for &(a, _) in &idx {
        out_deg[a] += 1;
    }
    let mut pr = vec![1.0 / n as f64; n];
    for _ in 0..iterations {
        let dangling: f64 = (0..n).filter(|&i| out_deg[i] == 0).map(|i| pr[i]).sum();
        let base = (1.0 - damping) / n as f64 + damping * dangling / n as f64;
        let mut next = vec![base; n];
        for &(a, b) in &idx {
            next[b] += damping * pr[a] / out_deg[a] as f64;
        }
        pr = next;
    }
    ids.into_iter().map(|(v, i)| (v, pr[i])).collect()
}

/// `ℓ`-path query over the edges of a graph read from `src,dst[,weight]`
/// lines. Every atom reads the same relation `E`.
pub fn gen_graph_query(edge_csv: &Path, ell: usize, mode: GraphWeights) -> Result<Workload, Error> {
    let text = std::fs::read_to_string(edge_csv).map_err(|e| Error::io(edge_csv, e))?;
    let mut db: Database<f64> = Database::new();
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = t.split(',').map(str::trim).collect();
        if f.len() < 2 {
            return Err(Error::Input(format!("{}:{}: expected src,dst[,weight]", edge_csv.display(), i + 1)));
        }
        if rows.is_empty() && f.len() >= 2 && f[0].parse::<i64>().is_err() && f[0].eq_ignore_ascii_case("src") {
            continue;
        }
        let w = match mode {
            GraphWeights::Provided => {
                let s = f.get(2).ok_or_else(|| {
                    Error::Input(format!("{}:{}: missing weight column", edge_csv.display(), i + 1))
                })?;
                s.parse::<f64>()
                    .map_err(|_| Error::Input(format!("{}:{}: bad weight {s:?}", edge_csv.display(), i + 1)))?
            }
            GraphWeights::PageRank => 0.0,
        };
        let a = db.symbols.intern(f[0]);
        let b = db.symbols.intern(f[1]);
        rows.push((a, b, w));
    }
    if mode == GraphWeights::PageRank {
        let pairs: Vec<(Value, Value)> = rows.iter().map(|&(a, b, _)| (a, b)).collect();
        let pr = pagerank(&pairs, 0.85, 50);
        for r in &mut rows {
            r.2 = pr[&r.0] + pr[&r.1];
        }
    }
    let rel = Relation::from_rows(2, rows.into_iter().map(|(a, b, w)| (vec![a, b], w)));
    db.insert("E", rel);
    let body: Vec<String> = (1..=ell).map(|i| format!("E(x{},x{i})", i - 1)).collect();
    let query = parse_query(&format!("Q({}) :- {}", vars("x", 0..=ell), body.join(", ")))?;
    let name = edge_csv
        .file_stem()
        .map_or("graph".into(), |s| s.to_string_lossy().into_owned());
    Ok(Workload {
        name: format!("{name}-path{ell}"),
        query,
        db,
    })
}

/// One row of a time-to-k measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TtkRow {
    pub algo: String,
    pub workload: String,
    pub k: u64,
    pub elapsed_ns: u128,
    pub pq_pops: u64,
    pub pq_pushes: u64,
    pub succ_calls: u64,
    pub max_pq_size: u64,
}

pub const TTK_HEADER: &str = "algo,workload,k,elapsed_ns,pq_pops,pq_pushes,succ_calls,max_pq_size";

/// Times the first `k` answers for every checkpoint `k`, including join-tree
/// construction, graph building and the bottom-up pass. Batch reports a
/// single row at the full output size. When the output runs out before a
/// checkpoint, a final row at the output size is reported instead.
pub fn measure_ttk<D: Dioid>(
    algo: Algorithm,
    workload: &str,
    q: &ConjunctiveQuery,
    db: &Database<D::Weight>,
    dioid: D,
    checkpoints: &[u64],
    output_cap: u64,
) -> Result<Vec<TtkRow>, Error> {
    let mut cps: Vec<u64> = checkpoints.to_vec();
    cps.sort_unstable();
    cps.dedup();
    let start = Instant::now();
    let tree = gyo_join_tree(q)?;
    let inst = build_tdp(q, &tree, db, dioid)?.bottom_up();
    if algo == Algorithm::Batch {
        let n = batch_yannakakis_sort(&inst, output_cap)?.len() as u64;
        return Ok(vec![TtkRow {
            algo: algo.label(),
            workload: workload.to_string(),
            k: n,
            elapsed_ns: start.elapsed().as_nanos(),
            pq_pops: 0,
            pq_pushes: 0,
            succ_calls: 0,
            max_pq_size: 0,
        }]);
    }
    let mut e = enumerate(&inst, algo, output_cap)?;
    let row = |k: u64, e: &dyn RankedEnumerator<D>, start: Instant| {
        let s = e.stats();
        TtkRow {
            algo: algo.label(),
            workload: workload.to_string(),
            k,
            elapsed_ns: start.elapsed().as_nanos(),
            pq_pops: s.pq_pops,
            pq_pushes: s.pq_pushes,
            succ_calls: s.succ_calls,
            max_pq_size: s.max_pq_size,
        }
    };
    let mut rows = Vec::new();
    let mut produced = 0u64;
    for &k in &cps {
        while produced < k {
            if e.next().is_none() {
                break;
            }
            produced += 1;
        }
        if produced < k {
            rows.push(row(produced, e.as_ref(), start));
            break;
        }
        rows.push(row(k, e.as_ref(), start));
    }
    Ok(rows)
}

pub fn write_ttk_csv(rows: &[TtkRow], out: &mut (impl Write + ?Sized)) -> std::io::Result<()> {
    writeln!(out, "{TTK_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.algo, r.workload, r.k, r.elapsed_ns, r.pq_pops, r.pq_pushes, r.succ_calls, r.max_pq_size
        )?;
    }
    Ok(())
}
