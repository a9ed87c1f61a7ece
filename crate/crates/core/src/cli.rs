//! The `anyk` command: `run`, `verify`, `bench` and `gen`.

use std::collections::{BTreeMap, HashMap};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::anyk::{anyk_union, enumerate, require_strong, AnswerStream, Algorithm, Answers, EnumError, Variant};
use crate::bench::{gen_cartesian, gen_graph_query, gen_synthetic, measure_ttk, write_ttk_csv, GraphWeights, WeightDist, Workload};
use crate::db::{Database, Relation, Symbols, Value};
use crate::dpgraph::{BuildError, RankedAnswer, TdpInstance};
use crate::oracle::{oracle_join_sort, OracleAnswer, Semantics};
use crate::projections::{enumerate_all_weight, rewrite_min_weight, ProjectionError};
use crate::query::{parse_queries, parse_query, ConjunctiveQuery, QueryError};
use crate::ranking::{Dioid, Lexicographic, MinMax, Product, RankingKind, Tropical};
use crate::Error;

/// Batch materialization and oracle runs stop past this many answers unless
/// `ANYK_OUTPUT_CAP` says otherwise.
pub const DEFAULT_OUTPUT_CAP: u64 = 100_000_000;

#[derive(Debug, Parser)]
#[command(name = "anyk", version, about = "Ranked enumeration of conjunctive query answers")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stream answers in ranked order as NDJSON.
    Run(RunArgs),
    /// Check an enumerator's output against the brute-force oracle.
    Verify(VerifyArgs),
    /// Measure time-to-k on a generated workload and print CSV.
    Bench(BenchArgs),
    /// Write a synthetic workload as CSV files plus query.txt.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// File holding one conjunctive query, e.g. `Q(x,y) :- R(x,z), S(z,y)`.
    #[arg(long)]
    query: PathBuf,
    /// Directory with one `<relation>.csv` per relation.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "sum")]
    ranking: RankingKind,
    #[arg(long, value_enum, default_value = "allweights")]
    semantics: SemanticsArg,
    /// Acyclic queries whose union is the (cyclic) query, one per line.
    #[arg(long)]
    decomposition: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "last-column")]
    weights: WeightMode,
    /// `var,value,weight` lines, used with `--weights attribute-file`.
    #[arg(long)]
    attr_weights: Option<PathBuf>,
    /// Data files start with a header line.
    #[arg(long)]
    header: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "part")]
    algo: AlgoArg,
    #[arg(long, default_value = "lazy")]
    variant: Variant,
    /// Number of answers to print, or `all`.
    #[arg(long, default_value = "all")]
    k: Limit,
    /// Accepted for reproducible scripts; every enumerator is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the instance as `stage parent child weight` lines.
    #[arg(long)]
    dump_instance: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "part")]
    algo: AlgoArg,
    #[arg(long, default_value = "lazy")]
    variant: Variant,
    #[arg(long, default_value = "all")]
    k: Limit,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "path")]
    workload: WorkloadKind,
    /// Tuples per relation.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Number of atoms.
    #[arg(long, default_value_t = 4)]
    ell: usize,
    /// Expected join fan-out of the path workload.
    #[arg(long, default_value_t = 10)]
    divisor: usize,
    /// Edge list `src,dst[,weight]` for the graph workload.
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Weigh graph edges by the PageRank of their endpoints.
    #[arg(long)]
    pagerank: bool,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "part,rec,part+,batch")]
    algos: Vec<AlgoArg>,
    #[arg(long, default_value = "lazy")]
    variant: Variant,
    #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000")]
    checkpoints: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `sum` or `max`.
    #[arg(long, default_value = "sum")]
    ranking: RankingKind,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "path")]
    shape: Shape,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    ell: usize,
    #[arg(long, default_value_t = 10)]
    divisor: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Part,
    Rec,
    #[value(name = "part+")]
    PartPlus,
    Batch,
}

impl AlgoArg {
    fn with(self, v: Variant) -> Algorithm {
        match self {
            AlgoArg::Part => Algorithm::Part(v),
            AlgoArg::Rec => Algorithm::Rec,
            AlgoArg::PartPlus => Algorithm::PartPlus(v),
            AlgoArg::Batch => Algorithm::Batch,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SemanticsArg {
    #[value(name = "allweights")]
    AllWeights,
    #[value(name = "minweight")]
    MinWeight,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::AllWeights => Semantics::AllWeights,
            SemanticsArg::MinWeight => Semantics::MinWeight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightMode {
    /// The last column holds the tuple weight.
    LastColumn,
    /// Every tuple gets the neutral weight.
    Unit,
    /// Tuples get the combined weights of their attribute values.
    AttributeFile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WorkloadKind {
    Path,
    Cartesian,
    Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Shape {
    Path,
    Cartesian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Limit {
    All,
    First(u64),
}

impl std::str::FromStr for Limit {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(Limit::All);
        }
        s.parse()
            .map(Limit::First)
            .map_err(|_| format!("expected a number or `all`, got {s:?}"))
    }
}

impl Limit {
    fn take(self) -> usize {
        match self {
            Limit::All => usize::MAX,
            Limit::First(k) => usize::try_from(k).unwrap_or(usize::MAX),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Run(a) => run(&a, out),
        Command::Verify(a) => verify(&a, out),
        Command::Bench(a) => bench(&a, out),
        Command::Gen(a) => gen(&a, out),
    };
    match result.and_then(|()| out.flush().map_err(|e| Error::io(Path::new("<stdout>"), e))) {
        Ok(()) => 0,
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "error: {e}");
            if code == 2 {
                let _ = writeln!(err, "hint: pass --decomposition with acyclic queries that cover it");
            }
            code
        }
    }
}

/// 2 for a cyclic query, 3 for a ranking the algorithm cannot handle, 1 for
/// everything else.
pub fn exit_code(e: &Error) -> i32 {
    let cyclic = |q: &QueryError| matches!(q, QueryError::Cyclic { .. });
    match e {
        Error::Query(q) | Error::Build(BuildError::Query(q)) => {
            if cyclic(q) {
                2
            } else {
                1
            }
        }
        Error::Projection(ProjectionError::Cyclic { .. }) => 2,
        Error::Projection(ProjectionError::Build(BuildError::Query(q))) if cyclic(q) => 2,
        Error::Enum(EnumError::Config(_)) => 3,
        _ => 1,
    }
}

fn output_cap() -> Result<u64, Error> {
    match std::env::var("ANYK_OUTPUT_CAP") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("ANYK_OUTPUT_CAP must be a non-negative integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_OUTPUT_CAP),
    }
}

fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Reads a relation of the given arity from a CSV file. Values that are not
/// integers are interned into `symbols`.
pub fn ingest_csv<D: Dioid>(
    path: &Path,
    arity: usize,
    mode: WeightMode,
    header: bool,
    dioid: &D,
    symbols: &mut Symbols,
) -> Result<Relation<D::Weight>, Error> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file);
    let width = if mode == WeightMode::LastColumn { arity + 1 } else { arity };
    let mut rel = Relation::new(arity);
    let mut row = Vec::with_capacity(arity);
    for record in reader.records() {
        let record = record.map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != width {
            return Err(Error::Input(format!(
                "{}:{line}: ragged row: expected {width} fields, found {}",
                path.display(),
                record.len()
            )));
        }
        row.clear();
        row.extend(record.iter().take(arity).map(|f| symbols.intern(f)));
        let w = match mode {
            WeightMode::LastColumn => dioid
                .parse_weight(&record[arity])
                .map_err(|e| Error::Input(format!("{}:{line}: {e}", path.display())))?,
            WeightMode::Unit | WeightMode::AttributeFile => dioid.one(),
        };
        rel.push(&row, w);
    }
    Ok(rel)
}

/// Reads `var,value,weight` lines.
pub fn read_attribute_weights<D: Dioid>(
    path: &Path,
    dioid: &D,
    symbols: &mut Symbols,
) -> Result<HashMap<(String, Value), D::Weight>, Error> {
    let text = read_text(path)?;
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = t.split(',').map(str::trim).collect();
        if f.len() != 3 {
            return Err(Error::Input(format!("{}:{}: expected var,value,weight", path.display(), i + 1)));
        }
        let w = dioid
            .parse_weight(f[2])
            .map_err(|e| Error::Input(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.insert((f[0].to_string(), symbols.intern(f[1])), w);
    }
    Ok(out)
}

/// Moves attribute weights onto tuples. Every weighted variable is charged
/// to the first atom that mentions it; each atom then reads a private copy
/// of its relation, named `<prefix>@<atom>`, whose tuple weights include the
/// charged values.
pub fn apply_attribute_weights<D: Dioid>(
    prefix: &str,
    q: &mut ConjunctiveQuery,
    db: &mut Database<D::Weight>,
    dioid: &D,
    weights: &HashMap<(String, Value), D::Weight>,
) -> Result<(), Error> {
    let mut charged = vec![false; q.num_vars()];
    for i in 0..q.atoms.len() {
        let atom = &q.atoms[i];
        let mine: Vec<(usize, String)> = atom
            .vars
            .iter()
            .zip(&atom.columns)
            .filter(|&(&v, _)| !charged[v])
            .map(|(&v, &c)| (c, q.var_names[v].clone()))
            .collect();
        for &v in &atom.vars {
            charged[v] = true;
        }
        let base = db
            .get(&atom.relation)
            .ok_or_else(|| Error::Build(BuildError::MissingRelation(atom.relation.clone())))?;
        let mut copy = Relation::new(base.arity());
        for (row, w) in base.rows() {
            let mut w = w.clone();
            for (c, name) in &mine {
                if let Some(aw) = weights.get(&(name.clone(), row[*c])) {
                    w = dioid.combine(&w, aw);
                }
            }
            copy.push(row, w);
        }
        let name = format!("{prefix}@{}", atom.name);
        db.insert(name.clone(), copy);
        q.atoms[i].relation = name;
    }
    Ok(())
}

struct Loaded<D: Dioid> {
    query: ConjunctiveQuery,
    members: Option<Vec<ConjunctiveQuery>>,
    db: Database<D::Weight>,
}

fn load<D: Dioid>(dioid: &D, a: &InputArgs) -> Result<Loaded<D>, Error> {
    let mut query = parse_query(&read_text(&a.query)?)?;
    let mut members = match &a.decomposition {
        None => None,
        Some(p) => {
            let ms = parse_queries(&read_text(p)?)?;
            if ms.is_empty() {
                return Err(Error::Input(format!("{}: no queries", p.display())));
            }
            for m in &ms {
                if m.head_names() != query.head_names() {
                    return Err(Error::Input(format!(
                        "{}: member {} has head ({}) but the query has ({})",
                        p.display(),
                        m.name,
                        m.head_names().join(","),
                        query.head_names().join(",")
                    )));
                }
            }
            Some(ms)
        }
    };

    let mut arities: BTreeMap<String, usize> = BTreeMap::new();
    for atom in query.atoms.iter().chain(members.iter().flatten().flat_map(|m| &m.atoms)) {
        let arity = *arities.entry(atom.relation.clone()).or_insert(atom.arity());
        if arity != atom.arity() {
            return Err(Error::Input(format!(
                "relation {} is used with arities {arity} and {}",
                atom.relation,
                atom.arity()
            )));
        }
    }
    if a.weights == WeightMode::AttributeFile && a.attr_weights.is_none() {
        return Err(Error::Input("--weights attribute-file needs --attr-weights".into()));
    }
    let mut db = Database::new();
    for (rel, &arity) in &arities {
        let path = a.data.join(format!("{rel}.csv"));
        let r = ingest_csv(&path, arity, a.weights, a.header, dioid, &mut db.symbols)?;
        db.insert(rel.clone(), r);
    }
    if a.weights == WeightMode::AttributeFile {
        let path = a.attr_weights.as_deref().expect("checked above");
        let w = read_attribute_weights(path, dioid, &mut db.symbols)?;
        let name = query.name.clone();
        apply_attribute_weights(&name, &mut query, &mut db, dioid, &w)?;
        for (i, m) in members.iter_mut().flatten().enumerate() {
            let prefix = format!("{}#{}", m.name, i + 1);
            apply_attribute_weights(&prefix, m, &mut db, dioid, &w)?;
        }
    }
    Ok(Loaded { query, members, db })
}

fn instance<D: Dioid>(
    dioid: &D,
    q: &ConjunctiveQuery,
    db: &Database<D::Weight>,
    semantics: SemanticsArg,
) -> Result<TdpInstance<D>, Error> {
    Ok(match semantics {
        SemanticsArg::AllWeights => enumerate_all_weight(q, db, dioid.clone())?,
        SemanticsArg::MinWeight => rewrite_min_weight(q, db, dioid.clone())?,
    })
}

fn instances<D: Dioid>(
    dioid: &D,
    loaded: &Loaded<D>,
    semantics: SemanticsArg,
) -> Result<Vec<TdpInstance<D>>, Error> {
    match &loaded.members {
        None => Ok(vec![instance(dioid, &loaded.query, &loaded.db, semantics)?]),
        Some(ms) => ms
            .iter()
            .map(|m| instance(dioid, m, &loaded.db, semantics))
            .collect(),
    }
}

/// Ranked answers of the loaded query. Answers of a decomposition carry no
/// witness, since each member has its own atoms.
fn stream<'a, D: Dioid>(
    dioid: &D,
    insts: &'a [TdpInstance<D>],
    decomposed: bool,
    algo: Algorithm,
    cap: u64,
) -> Result<AnswerStream<'a, D::Weight>, Error> {
    if !decomposed {
        let inst = &insts[0];
        return Ok(Box::new(Answers::new(inst, enumerate(inst, algo, cap)?)));
    }
    let mut sources: Vec<AnswerStream<'a, D::Weight>> = Vec::new();
    for inst in insts {
        let e = enumerate(inst, algo, cap)?;
        sources.push(Box::new(Answers::new(inst, e).map(|mut a| {
            a.witness = None;
            a
        })));
    }
    Ok(Box::new(anyk_union(dioid.clone(), sources)))
}

fn with_dioid<R>(kind: RankingKind, f: impl DioidFn<R>) -> R {
    match kind {
        RankingKind::Sum => f.call(Tropical),
        RankingKind::Max => f.call(MinMax),
        RankingKind::Lex => f.call(Lexicographic),
        RankingKind::Prod => f.call(Product),
    }
}

trait DioidFn<R> {
    fn call<D: Dioid>(self, d: D) -> R;
}

struct RunCmd<'a> {
    args: &'a RunArgs,
    out: &'a mut dyn Write,
}

impl DioidFn<Result<(), Error>> for RunCmd<'_> {
    fn call<D: Dioid>(self, d: D) -> Result<(), Error> {
        let a = self.args;
        if a.algo == AlgoArg::PartPlus {
            require_strong(&d)?;
        }
        let cap = output_cap()?;
        let loaded = load(&d, &a.input)?;
        let insts = instances(&d, &loaded, a.input.semantics)?;
        if let Some(p) = &a.dump_instance {
            let mut text = String::new();
            for (i, inst) in insts.iter().enumerate() {
                if insts.len() > 1 {
                    text.push_str(&format!("# member {}\n", i + 1));
                }
                text.push_str(&inst.dump());
            }
            fs::write(p, text).map_err(|e| Error::io(p, e))?;
        }
        if a.k == Limit::First(0) {
            return Ok(());
        }
        let decomposed = loaded.members.is_some();
        let answers = stream(&d, &insts, decomposed, a.algo.with(a.variant), cap)?;
        let head = loaded.query.head_names();
        let stdout = Path::new("<stdout>");
        for ans in answers.take(a.k.take()) {
            let line = answer_json(&d, &head, &loaded.query, &loaded.db, &ans);
            writeln!(self.out, "{line}").map_err(|e| Error::io(stdout, e))?;
        }
        Ok(())
    }
}

/// `{"rank":k,"weight":w,"answer":{...},"witness":[...]}`; the witness lists
/// one `{"atom":..,"tuple":[..]}` per atom and is omitted when absent.
pub fn answer_json<D: Dioid>(
    d: &D,
    head: &[String],
    q: &ConjunctiveQuery,
    db: &Database<D::Weight>,
    a: &RankedAnswer<D::Weight>,
) -> String {
    let json_str = |s: &str| serde_json::Value::from(s).to_string();
    let tuple = |row: &[Value]| {
        let vals: Vec<String> = row.iter().map(|&v| db.symbols.json(v).to_string()).collect();
        format!("[{}]", vals.join(","))
    };
    let fields: Vec<String> = head
        .iter()
        .zip(&a.assignment)
        .map(|(n, &v)| format!("{}:{}", json_str(n), db.symbols.json(v)))
        .collect();
    let mut s = format!(
        "{{\"rank\":{},\"weight\":{},\"answer\":{{{}}}",
        a.rank,
        d.weight_json(&a.weight),
        fields.join(",")
    );
    if let Some(w) = &a.witness {
        let parts: Vec<String> = w
            .iter()
            .map(|r| {
                let atom = &q.atoms[r.atom];
                let rel = db.get(&atom.relation).expect("witness relations exist");
                format!(
                    "{{\"atom\":{},\"tuple\":{}}}",
                    json_str(&atom.name),
                    tuple(rel.row(r.row as usize))
                )
            })
            .collect();
        s.push_str(&format!(",\"witness\":[{}]", parts.join(",")));
    }
    s.push('}');
    s
}

fn run(a: &RunArgs, out: &mut dyn Write) -> Result<(), Error> {
    with_dioid(a.input.ranking, RunCmd { args: a, out })
}

struct VerifyCmd<'a> {
    args: &'a VerifyArgs,
    out: &'a mut dyn Write,
}

type Key = (Vec<Value>, Option<Vec<u32>>);

impl DioidFn<Result<(), Error>> for VerifyCmd<'_> {
    fn call<D: Dioid>(self, d: D) -> Result<(), Error> {
        let a = self.args;
        if a.algo == AlgoArg::PartPlus {
            require_strong(&d)?;
        }
        let cap = output_cap()?;
        let loaded = load(&d, &a.input)?;
        let insts = instances(&d, &loaded, a.input.semantics)?;
        let decomposed = loaded.members.is_some();
        let got: Vec<RankedAnswer<D::Weight>> = stream(&d, &insts, decomposed, a.algo.with(a.variant), cap)?
            .take(a.k.take())
            .collect();
        let expected = oracle_join_sort(&loaded.query, &loaded.db, &d, a.input.semantics.into(), cap)?;
        check_prefix(&d, &got, &expected, a.k == Limit::All).map_err(Error::Input)?;
        writeln!(
            self.out,
            "ok: {} answers of {} match the oracle",
            got.len(),
            expected.len()
        )
        .map_err(|e| Error::io(Path::new("<stdout>"), e))
    }
}

/// Checks that `got` is a valid ranked prefix of the oracle output: equal
/// weight sequences, equal answer multisets below the last weight, and only
/// oracle answers at the last weight. Weights are compared with
/// [`Dioid::same_weight`].
fn check_prefix<D: Dioid>(
    d: &D,
    got: &[RankedAnswer<D::Weight>],
    expected: &[OracleAnswer<D::Weight>],
    complete: bool,
) -> Result<(), String> {
    if got.len() > expected.len() || (complete && got.len() != expected.len()) {
        return Err(format!(
            "enumerator produced {} answers, oracle has {}",
            got.len(),
            expected.len()
        ));
    }
    for (i, (g, e)) in got.iter().zip(expected).enumerate() {
        if !d.same_weight(&g.weight, &e.weight) {
            return Err(format!(
                "rank {}: weight {} but the oracle has {}",
                i + 1,
                d.format_weight(&g.weight),
                d.format_weight(&e.weight)
            ));
        }
    }
    let Some(last) = got.last().map(|g| g.weight.clone()) else {
        return Ok(());
    };
    let with_witness = got.iter().all(|g| g.witness.is_some());
    let key_g = |g: &RankedAnswer<D::Weight>| -> Key {
        let w = g.witness.as_ref().map(|w| w.iter().map(|r| r.row).collect());
        (g.assignment.clone(), w)
    };
    let key_e = |e: &OracleAnswer<D::Weight>| -> Key {
        (e.assignment.clone(), if with_witness { e.witness.clone() } else { None })
    };
    let split = got.iter().position(|g| d.same_weight(&g.weight, &last)).unwrap_or(got.len());
    let mut below_g: Vec<Key> = got[..split].iter().map(key_g).collect();
    let mut below_e: Vec<Key> = expected[..split].iter().map(key_e).collect();
    below_g.sort();
    below_e.sort();
    if below_g != below_e {
        return Err("answers differ from the oracle's above the last weight".into());
    }
    let mut pool: HashMap<Key, usize> = HashMap::new();
    for e in expected[split..].iter().take_while(|e| d.same_weight(&e.weight, &last)) {
        *pool.entry(key_e(e)).or_default() += 1;
    }
    for g in &got[split..] {
        match pool.get_mut(&key_g(g)) {
            Some(c) if *c > 0 => *c -= 1,
            _ => {
                return Err(format!(
                    "rank {}: answer is not an oracle answer of weight {}",
                    g.rank,
                    d.format_weight(&last)
                ))
            }
        }
    }
    Ok(())
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), Error> {
    with_dioid(a.input.ranking, VerifyCmd { args: a, out })
}

fn bench(a: &BenchArgs, out: &mut dyn Write) -> Result<(), Error> {
    let w: Workload = match a.workload {
        WorkloadKind::Path => gen_synthetic(a.n, a.ell, a.divisor, a.seed),
        WorkloadKind::Cartesian => gen_cartesian(a.n, a.ell, WeightDist::Uniform(0.0, 10_000.0), a.seed),
        WorkloadKind::Graph => {
            let p = a
                .edges
                .as_deref()
                .ok_or_else(|| Error::Input("the graph workload needs --edges".into()))?;
            let mode = if a.pagerank { GraphWeights::PageRank } else { GraphWeights::Provided };
            gen_graph_query(p, a.ell, mode)?
        }
    };
    let cap = output_cap()?;
    let mut rows = Vec::new();
    for algo in &a.algos {
        let algo = algo.with(a.variant);
        let r = match a.ranking {
            RankingKind::Sum => measure_ttk(algo, &w.name, &w.query, &w.db, Tropical, &a.checkpoints, cap)?,
            RankingKind::Max => measure_ttk(algo, &w.name, &w.query, &w.db, MinMax, &a.checkpoints, cap)?,
            other => return Err(Error::Input(format!("bench supports sum and max rankings, not {other:?}"))),
        };
        rows.extend(r);
    }
    match &a.out {
        Some(p) => {
            let mut f = fs::File::create(p).map_err(|e| Error::io(p, e))?;
            write_ttk_csv(&rows, &mut f).map_err(|e| Error::io(p, e))
        }
        None => write_ttk_csv(&rows, out).map_err(|e| Error::io(Path::new("<stdout>"), e)),
    }
}

fn gen(a: &GenArgs, out: &mut dyn Write) -> Result<(), Error> {
    if a.n == 0 || a.ell == 0 || a.divisor == 0 {
        return Err(Error::Input("n, ell and divisor must be positive".into()));
    }
    let w = match a.shape {
        Shape::Path => gen_synthetic(a.n, a.ell, a.divisor, a.seed),
        Shape::Cartesian => gen_cartesian(a.n, a.ell, WeightDist::Uniform(0.0, 10_000.0), a.seed),
    };
    fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    for atom in &w.query.atoms {
        let rel = w.db.get(&atom.relation).expect("generated relations exist");
        let mut text = String::new();
        for (row, wt) in rel.rows() {
            for v in row {
                text.push_str(&w.db.symbols.render(*v));
                text.push(',');
            }
            text.push_str(&Tropical.format_weight(wt));
            text.push('\n');
        }
        let p = a.out.join(format!("{}.csv", atom.relation));
        fs::write(&p, text).map_err(|e| Error::io(&p, e))?;
    }
    let p = a.out.join("query.txt");
    fs::write(&p, format!("{}\n", w.query)).map_err(|e| Error::io(&p, e))?;
    writeln!(out, "wrote {} relations to {}", w.query.atoms.len(), a.out.display())
        .map_err(|e| Error::io(Path::new("<stdout>"), e))
}
