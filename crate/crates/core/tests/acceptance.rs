//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines are always printed.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use anyk::anyk::{anyk_part, anyk_part_plus, anyk_rec, anyk_union, AnswerStream, Answers};
use anyk::bench::{
    gen_cartesian, gen_random_instance, gen_synthetic, measure_ttk, path_query, star_query,
    tree_query, WeightDist,
};
use anyk::oracle::{oracle_join_sort, Semantics};
use anyk::projections::rewrite_min_weight;
use anyk::ranking::{check_dioid_laws, Declared, Law};
use anyk::{
    is_free_connex, parse_query, Algorithm, ConjunctiveQuery, Database, Dioid, LexWeight, Lexicographic, MinMax,
    Monotonicity, Product, RankedEnumerator, Relation, Tropical, Value, Variant,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn golden_running_example() -> Outcome {
    let start = Instant::now();
    let (q, db) = running_example();
    let inst = instance(&q, &db, Tropical);
    let r1 = inst.states_of(1);
    let s11 = r1
        .clone()
        .find(|&v| inst.state_values(v) == ints(&[1, 1]).as_slice())
        .ok_or("no state (1,1)")?;
    ensure(*inst.pi1(s11) == 110.0, || format!("pi1((1,1)) = {}", inst.pi1(s11)))?;
    ensure(inst.top_weight() == Some(111.0), || format!("pi1(s) = {:?}", inst.top_weight()))?;
    let want = [ints(&[1, 1]), ints(&[1, 4]), ints(&[4, 1])];
    let check = |name: &str, a: Option<anyk::RankedAnswer<f64>>| -> Result<(), String> {
        let a = a.ok_or_else(|| format!("{name}: no answer"))?;
        let tuples: Vec<Vec<Value>> = a
            .witness
            .as_ref()
            .ok_or_else(|| format!("{name}: no witness"))?
            .iter()
            .map(|r| db.get(&q.atoms[r.atom].relation).unwrap().row(r.row as usize).to_vec())
            .collect();
        ensure(a.weight == 111.0 && tuples == want, || {
            format!("{name}: rank 1 is {tuples:?} with weight {}", a.weight)
        })
    };
    for v in [Variant::Eager, Variant::Lazy, Variant::Quick] {
        check(&format!("part-{v:?}"), Answers::new(&inst, anyk_part(&inst, v).unwrap()).next())?;
        check(&format!("part+-{v:?}"), Answers::new(&inst, anyk_part_plus(&inst, v, None).unwrap()).next())?;
    }
    check("rec", Answers::new(&inst, anyk_rec(&inst).unwrap()).next())?;
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("pi1((1,1)) = 110, pi1(s) = 111, rank 1 = ((1,1),(1,4),(4,1)) in {t:.2?}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let shapes: Vec<(&str, ConjunctiveQuery)> = vec![
        ("path2", path_query(2)),
        ("path3", path_query(3)),
        ("path4", path_query(4)),
        ("star3", star_query(3)),
        ("tree", tree_query()),
    ];
    let mut answers = 0usize;
    for (name, q) in &shapes {
        for seed in 0..200u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xacce);
            let n = rng.gen_range(1..=30usize);
            let domain = rng.gen_range((n as i64 / 3).max(2)..=(n as i64).max(2));
            let db = gen_random_instance(q, n, domain, WeightDist::Integers(0, 20), seed);
            check_all_algorithms(q, &db).map_err(|e| format!("{name} seed {seed}: {e}"))?;
            answers += instance(q, &db, Tropical).count_answers() as usize;
        }
    }
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!("1000 instances, {answers} answers, 5 algorithms each, in {t:.2?}"))
}

fn dioid_laws() -> Outcome {
    let reals = vec![0.0, 1.0, 2.5, 3.0, 7.25, 10.0, 42.0, 100.0, 1e6, f64::INFINITY];
    let v = check_dioid_laws(&Tropical, &reals);
    ensure(v.is_empty(), || format!("tropical: {:?}", v[0]))?;
    let mut mm = reals.clone();
    mm[0] = f64::NEG_INFINITY;
    let v = check_dioid_laws(&MinMax, &mm);
    ensure(v.is_empty(), || format!("min-max: {:?}", v[0]))?;
    let lex: Vec<LexWeight> = vec![
        LexWeight::new(vec![]),
        LexWeight::new(vec![1.0]),
        LexWeight::new(vec![1.0, 2.0]),
        LexWeight::new(vec![0.0, 5.0]),
        LexWeight::new(vec![2.0, 0.0, 1.0]),
        LexWeight::new(vec![1.0, 2.0, 3.0]),
        LexWeight::new(vec![3.0]),
        LexWeight::new(vec![0.0, 0.0, 4.0]),
        LexWeight::new(vec![1.0, 1.0]),
        LexWeight::Infinite,
    ];
    let v = check_dioid_laws(&Lexicographic, &lex);
    ensure(v.is_empty(), || format!("lexicographic: {:?}", v[0]))?;
    let claimed = Declared {
        inner: Product,
        monotonicity: Monotonicity::StrongSubsetMonotone,
    };
    let v = check_dioid_laws(&claimed, &[0.0, 0.5, 0.2, 0.1]);
    let strong: Vec<_> = v.iter().filter(|x| x.law == Law::StrongMonotone).collect();
    ensure(!strong.is_empty(), || "product passed the strong monotonicity check".into())?;
    let v = check_dioid_laws(&Product, &[0.0, 0.5, 0.2, 0.1, 1.0, f64::INFINITY]);
    ensure(v.is_empty(), || format!("product violates {:?}", v[0]))?;
    Ok(format!(
        "1000 triples each for sum, max, lex with no violation; product breaks strong monotonicity {} times, e.g. {:?}",
        strong.len(),
        strong[0].witness
    ))
}

fn deviation_audit() -> Outcome {
    let q = path_query(3);
    let mut audited = 0u64;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa0d17);
        let n = rng.gen_range(1..=20usize);
        let domain = rng.gen_range(2..=6i64);
        let db = gen_random_instance(&q, n, domain, WeightDist::Integers(0, 9), seed);
        let inst = instance(&q, &db, Tropical);
        for v in [Variant::Eager, Variant::Lazy, Variant::Quick] {
            let mut part = anyk_part(&inst, v).unwrap();
            let mut out: Vec<anyk::Solution<f64>> = Vec::new();
            while let Some(sol) = part.next() {
                let k = out.len() + 1;
                let p = part.provenance().ok_or("missing provenance")?;
                if k == 1 {
                    ensure(p.origin.is_none(), || format!("seed {seed}: rank 1 has an origin"))?;
                    out.push(sol);
                    continue;
                }
                let o = p.origin.ok_or_else(|| format!("seed {seed}: rank {k} has no origin"))? as usize;
                ensure(o >= 1 && o < k, || format!("seed {seed}: rank {k} deviates from rank {o}"))?;
                let base = &out[o - 1];
                let j = p.position;
                ensure(Tropical.compare(&base.weight, &sol.weight).is_le(), || {
                    format!("seed {seed}: rank {k} is better than its origin {o}")
                })?;
                ensure(base.states[..j - 1] == sol.states[..j - 1], || {
                    format!("seed {seed}: rank {k} does not share the prefix of rank {o} before {j}")
                })?;
                ensure(base.states[j - 1] != sol.states[j - 1], || {
                    format!("seed {seed}: rank {k} does not deviate at position {j}")
                })?;
                let parent = inst.parent_pos(j);
                let ps = if parent == 0 { 0 } else { sol.states[parent - 1] };
                let bucket = inst.bucket_for(ps, j);
                ensure(inst.members(bucket).contains(&sol.states[j - 1]), || {
                    format!("seed {seed}: rank {k} leaves the bucket at position {j}")
                })?;
                audited += 1;
                out.push(sol);
            }
            ensure(out.len() as u128 == inst.count_answers(), || format!("seed {seed}: incomplete"))?;
        }
    }
    Ok(format!("{audited} answers traced to an earlier answer they deviate from"))
}

fn part_plus_queue_bound() -> Outcome {
    let w = gen_synthetic(1000, 4, 10, 7);
    let inst = instance(&w.query, &w.db, Tropical);
    let live = inst.live_states() as u64;
    let mut pp = anyk_part_plus(&inst, Variant::Lazy, None).unwrap();
    let mut k = 0u64;
    let mut worst = 0u64;
    while pp.next().is_some() {
        k += 1;
        worst = worst.max(pp.stats().max_pq_size);
        ensure(worst <= live, || format!("part+ queue reached {worst} > {live} live states at k = {k}"))?;
    }
    ensure(pp.audit_failures() == 0, || format!("{} suffixes stored by followers", pp.audit_failures()))?;
    let mut part = anyk_part(&inst, Variant::Lazy).unwrap();
    let target = 10 * 1000;
    let got = part.by_ref().take(target).count();
    ensure(got == target, || format!("only {got} answers"))?;
    let part_max = part.stats().max_pq_size;
    ensure(part_max > live, || format!("part queue {part_max} stayed within {live} at k = {target}"))?;
    Ok(format!(
        "part+ queue <= {worst} over all {k} answers, live states {live}; part queue {part_max} at k = {target}"
    ))
}

fn rec_memoization() -> Outcome {
    let w = gen_cartesian(20, 3, WeightDist::Integers(0, 100), 3);
    let inst = instance(&w.query, &w.db, Tropical);
    let mut rec = anyk_rec(&inst).unwrap();
    let n = rec.by_ref().count() as u64;
    ensure(n == 8000, || format!("{n} answers"))?;
    let (init, later) = rec.choice_insertions();
    ensure(later <= 2 * n, || format!("{later} insertions after initialization > {}", 2 * n))?;
    Ok(format!("{later} non-initial + {init} initial insertions for {n} answers (bound {} + {init})", 2 * n))
}

fn ttk_separation() -> Outcome {
    let w = gen_synthetic(10_000, 4, 10, 11);
    let cap = u64::MAX;
    let time = |algo: Algorithm, k: u64| -> Result<(u64, u128), String> {
        let rows = measure_ttk(algo, &w.name, &w.query, &w.db, Tropical, &[k], cap).map_err(|e| e.to_string())?;
        let r = rows.last().ok_or("no measurement")?;
        Ok((r.k, r.elapsed_ns))
    };
    let (total, batch_ns) = time(Algorithm::Batch, 0)?;
    let limit = batch_ns / 20;
    let mut report = vec![format!("batch {total} answers in {:.2}s", batch_ns as f64 / 1e9)];
    let algos = [
        Algorithm::Part(Variant::Eager),
        Algorithm::Part(Variant::Lazy),
        Algorithm::Part(Variant::Quick),
        Algorithm::Rec,
        Algorithm::PartPlus(Variant::Lazy),
    ];
    let mut best: HashMap<Algorithm, u128> = HashMap::new();
    for _ in 0..7 {
        for algo in algos {
            let (k, ns) = time(algo, 1000)?;
            ensure(k == 1000, || format!("{}: stopped at {k}", algo.label()))?;
            let t = best.entry(algo).or_insert(u128::MAX);
            *t = (*t).min(ns);
        }
    }
    for algo in algos {
        let t = best[&algo];
        ensure(t < limit, || {
            format!("{} TT(1000) = {:.1}ms, 5% of batch = {:.1}ms", algo.label(), t as f64 / 1e6, limit as f64 / 1e6)
        })?;
        report.push(format!("{} {:.2}ms", algo.label(), t as f64 / 1e6));
    }
    let rec = best[&Algorithm::Rec];
    let part = best[&Algorithm::Part(Variant::Lazy)];
    ensure(part <= rec, || {
        format!(
            "PART TT(1000) {:.2}ms > REC {:.2}ms ({})",
            part as f64 / 1e6,
            rec as f64 / 1e6,
            report.join(", ")
        )
    })?;
    Ok(format!("TT(1000): {}", report.join(", ")))
}

fn ttl_crossover() -> Outcome {
    let w = gen_cartesian(10, 6, WeightDist::Integers(0, 1000), 5);
    let inst = instance(&w.query, &w.db, Tropical);
    let full = |mut e: Box<dyn RankedEnumerator<Tropical> + '_>| {
        let n = e.by_ref().count();
        (n, e.stats().pq_ops())
    };
    let (n1, part) = full(Box::new(anyk_part(&inst, Variant::Lazy).unwrap()));
    let (n2, rec) = full(Box::new(anyk_rec(&inst).unwrap()));
    let (n3, pp) = full(Box::new(anyk_part_plus(&inst, Variant::Lazy, None).unwrap()));
    ensure(n1 == 1_000_000 && n2 == n1 && n3 == n1, || format!("answer counts {n1} {n2} {n3}"))?;
    ensure(rec < part && pp < part, || format!("comparisons: part {part}, rec {rec}, part+ {pp}"))?;
    Ok(format!("priority-queue comparisons over 10^6 answers: part {part}, rec {rec}, part+ {pp}"))
}

/// Random acyclic query: every atom after the first hangs off an earlier one
/// and shares one of its variables.
fn random_acyclic_query(rng: &mut ChaCha8Rng) -> ConjunctiveQuery {
    let atoms = rng.gen_range(2..=5);
    let mut vars_of: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for i in 0..atoms {
        let mut vs = Vec::new();
        if i > 0 {
            let p = rng.gen_range(0..i);
            let pv: &Vec<usize> = &vars_of[p];
            vs.push(pv[rng.gen_range(0..pv.len())]);
        }
        let fresh = rng.gen_range(1..=2) + usize::from(i == 0);
        for _ in 0..fresh {
            vs.push(next);
            next += 1;
        }
        vars_of.push(vs);
    }
    let head: Vec<usize> = loop {
        let h: Vec<usize> = (0..next).filter(|_| rng.gen_bool(0.5)).collect();
        if !h.is_empty() {
            break h;
        }
    };
    let name = |v: &usize| format!("v{v}");
    let body: Vec<String> = vars_of
        .iter()
        .enumerate()
        .map(|(i, vs)| format!("R{}({})", i + 1, vs.iter().map(name).collect::<Vec<_>>().join(",")))
        .collect();
    let head: Vec<String> = head.iter().map(name).collect();
    parse_query(&format!("Q({}) :- {}", head.join(","), body.join(", "))).unwrap()
}

fn min_weight_projections() -> Outcome {
    let d = Tropical;
    let mut rng = ChaCha8Rng::seed_from_u64(0xfc);
    let mut checked = 0;
    let mut projected = 0;
    let mut seed = 0u64;
    while checked < 100 {
        seed += 1;
        let q = random_acyclic_query(&mut rng);
        if is_free_connex(&q).is_err() {
            continue;
        }
        let n = rng.gen_range(1..=20usize);
        let domain = rng.gen_range(2..=5i64);
        let db = gen_random_instance(&q, n, domain, WeightDist::Integers(0, 9), seed);
        let want = oracle_join_sort(&q, &db, &d, Semantics::MinWeight, 10_000_000).map_err(|e| e.to_string())?;
        let inst = rewrite_min_weight(&q, &db, d).map_err(|e| format!("{q}: {e}"))?;
        let runs: Vec<(&str, Box<dyn RankedEnumerator<Tropical> + '_>)> = vec![
            ("part", Box::new(anyk_part(&inst, Variant::Lazy).unwrap())),
            ("rec", Box::new(anyk_rec(&inst).unwrap())),
            ("part+", Box::new(anyk_part_plus(&inst, Variant::Quick, None).unwrap())),
        ];
        for (name, e) in runs {
            let got: Vec<_> = Answers::new(&inst, e).collect();
            let gw: Vec<f64> = got.iter().map(|a| a.weight).collect();
            let ww: Vec<f64> = want.iter().map(|a| a.weight).collect();
            ensure(gw == ww, || format!("{q} seed {seed} {name}: weights {gw:?} vs oracle {ww:?}"))?;
            let mut ga: Vec<Vec<Value>> = got.iter().map(|a| a.assignment.clone()).collect();
            let mut wa: Vec<Vec<Value>> = want.iter().map(|a| a.assignment.clone()).collect();
            ga.sort();
            wa.sort();
            ensure(ga == wa, || format!("{q} seed {seed} {name}: answers differ"))?;
        }
        projected += usize::from(!q.is_full());
        checked += 1;
    }

    let q = parse_query("Q(y1,y2,y3,y4) :- R1(y1,y2), R2(y2,y3), R3(x1,y1,y4), R4(x2,y3)").unwrap();
    let mut db = Database::new();
    db.insert_ints("R1", &[(&[1, 1], 0.0)]);
    db.insert_ints("R2", &[(&[1, 1], 0.0)]);
    db.insert_ints("R3", &[(&[5, 1, 7], 0.0)]);
    db.insert_ints("R4", &[(&[1, 1], 1.0), (&[2, 1], 2.0)]);
    let inst = rewrite_min_weight(&q, &db, d).map_err(|e| e.to_string())?;
    let y3 = q.var("y3").unwrap();
    let proj = (1..=inst.num_positions())
        .find(|&p| inst.position(p).vars == [y3])
        .ok_or("no stage for the projection of R4")?;
    let cut: Vec<f64> = inst
        .states_of(proj)
        .filter(|&v| inst.state_values(v) == ints(&[1]).as_slice())
        .map(|v| *inst.leaf_weight(v))
        .collect();
    ensure(cut == vec![1.0], || format!("cut weights {cut:?}"))?;
    let top: Vec<_> = Answers::new(&inst, anyk_rec(&inst).unwrap()).collect();
    ensure(top.len() == 1 && top[0].weight == 1.0, || format!("{} answers", top.len()))?;
    Ok(format!(
        "100 free-connex instances ({projected} with projections) match the group-by oracle; cut edge weight 1"
    ))
}

fn union_dedup() -> Outcome {
    let d = Tropical;
    let mut rng = ChaCha8Rng::seed_from_u64(0xc4);
    let nodes = 8i64;
    let mut edges: Vec<(i64, i64, f64)> = Vec::new();
    while edges.len() < 30 {
        let (a, b) = (rng.gen_range(1..=nodes), rng.gen_range(1..=nodes));
        if a != b && !edges.iter().any(|e| e.0 == a && e.1 == b) {
            edges.push((a, b, rng.gen_range(0..50) as f64));
        }
    }
    let mut db: Database<f64> = Database::new();
    db.insert(
        "E",
        Relation::from_rows(2, edges.iter().map(|&(a, b, w)| (vec![Value::Int(a), Value::Int(b)], w))),
    );
    let q = parse_query("Q(a,b,c,d) :- E(a,b), E(b,c), E(c,d), E(d,a)").unwrap();
    ensure(anyk::gyo_join_tree(&q).is_err(), || "4-cycle reported acyclic".into())?;

    // Two-hop paths x -> y -> z as bags (x, y, z) weighted by both edges,
    // kept when `keep(x)` holds.
    let mut out_deg: HashMap<i64, usize> = HashMap::new();
    for e in &edges {
        *out_deg.entry(e.0).or_default() += 1;
    }
    let two_hop = |keep: &dyn Fn(i64) -> bool, key: usize| {
        let mut rel = Relation::new(3);
        for e1 in &edges {
            for e2 in &edges {
                if e1.1 == e2.0 && keep([e1.0, e1.1, e2.1][key]) {
                    rel.push(&[Value::Int(e1.0), Value::Int(e1.1), Value::Int(e2.1)], e1.2 + e2.2);
                }
            }
        }
        rel
    };
    let light = |a: i64| out_deg.get(&a).copied().unwrap_or(0) <= 3;
    let heavy = |a: i64| out_deg.get(&a).copied().unwrap_or(0) >= 3;
    db.insert("ABC", two_hop(&light, 0));
    db.insert("CDA", two_hop(&light, 2));
    db.insert("BCD", two_hop(&|_| true, 0));
    db.insert("DAB", two_hop(&heavy, 1));
    let members = [
        parse_query("Q(a,b,c,d) :- ABC(a,b,c), CDA(c,d,a)").unwrap(),
        parse_query("Q(a,b,c,d) :- BCD(b,c,d), DAB(d,a,b)").unwrap(),
    ];
    let insts: Vec<_> = members.iter().map(|m| instance(m, &db, d)).collect();
    let sources: Vec<AnswerStream<'_, f64>> = insts
        .iter()
        .map(|i| Box::new(Answers::new(i, anyk_rec(i).unwrap())) as AnswerStream<'_, f64>)
        .collect();
    let mut union = anyk_union(d, sources);
    let got: Vec<_> = union.by_ref().collect();
    let want = oracle_join_sort(&q, &db, &d, Semantics::AllWeights, 10_000_000).map_err(|e| e.to_string())?;
    ensure(!want.is_empty(), || "graph has no 4-cycles".into())?;
    let gw: Vec<f64> = got.iter().map(|a| a.weight).collect();
    let ww: Vec<f64> = want.iter().map(|a| a.weight).collect();
    ensure(gw == ww, || format!("weights {gw:?} vs oracle {ww:?}"))?;
    ensure(gw.windows(2).all(|p| p[0] <= p[1]), || "weights out of order".into())?;
    let mut ga: Vec<_> = got.iter().map(|a| a.assignment.clone()).collect();
    let mut wa: Vec<_> = want.iter().map(|a| a.assignment.clone()).collect();
    ga.sort();
    wa.sort();
    let distinct = {
        let mut g = ga.clone();
        g.dedup();
        g.len()
    };
    ensure(distinct == ga.len(), || "an answer was emitted twice".into())?;
    ensure(ga == wa, || "answer sets differ".into())?;
    Ok(format!("{} cycles, each once; {} duplicates removed", got.len(), union.duplicates))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("running-example golden test", golden_running_example),
        ("oracle equivalence", oracle_equivalence),
        ("dioid laws", dioid_laws),
        ("deviation audit", deviation_audit),
        ("PART+ queue bound", part_plus_queue_bound),
        ("REC memoization counter", rec_memoization),
        ("TT(k) separation", ttk_separation),
        ("TTL crossover", ttl_crossover),
        ("min-weight projections", min_weight_projections),
        ("union with deduplication", union_dedup),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|x| *x == id || name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id}: PASS ({name}, {secs:.1}s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id}: FAIL ({name}, {secs:.1}s) {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
