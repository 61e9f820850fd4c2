//! `stablehf`: command-line front end. Every command prints one JSON report
//! on stdout. Exit codes: 0 success, 1 negative verdict or failed
//! computation, 2 usage or schema error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use stablehf::complex::{
    differential, graded_homology, homology_of, pi2_classes_with, relative_grading, stable_class, stable_equal,
    verify_d_squared, Generator, StableClass,
};
use stablehf::diagram::{parse, serialize, HeegaardDiagram};
use stablehf::domains::{pi2prime_and_h2_from, DomainSolver};
use stablehf::moves::{apply, fuzz_invariance, MoveSpec};
use stablehf::oracle::{check_polygon_geometry, compare_pair, compare_polygons, maslov_additivity_sample};
use stablehf::twisted::{twisted_complexes, univariate_homology, verify_twisted_d_squared};
use stablehf::HfError;

#[derive(Parser)]
#[command(name = "stablehf", version, about = "Combinatorial Heegaard Floer homology of nice diagrams")]
struct Cli {
    /// Worker threads (falls back to HF_THREADS, then the number of CPUs).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Add wall-clock timing to the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the diagram against the validity clauses.
    Validate { file: PathBuf },
    /// Genus, basepoint counts, faces and niceness.
    Info { file: PathBuf },
    /// List the generators.
    Gens { file: PathBuf },
    /// The differential.
    Diff {
        file: PathBuf,
        /// Include the polygons behind every entry.
        #[arg(long)]
        witnesses: bool,
        /// Also write the matrix in sparse text form.
        #[arg(long, value_name = "OUT")]
        matrix: Option<PathBuf>,
    },
    /// Homology and the stable class.
    Homology {
        file: PathBuf,
        #[arg(long)]
        per_class: bool,
        #[arg(long)]
        graded: bool,
    },
    /// Twisted complex and its homology.
    Twisted {
        file: PathBuf,
        #[arg(long, value_name = "N")]
        class: Option<usize>,
    },
    /// Nice moves.
    Move {
        #[command(subcommand)]
        action: MoveCommand,
    },
    /// Random nice moves with homology checked after each.
    FuzzInvariance {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        moves: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cross-check the polygon search, polygon geometry and Maslov additivity.
    Oracle {
        file: PathBuf,
        /// Only the pair X Y, each given by crossing labels such as 1,3.
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        pair: Option<Vec<String>>,
    },
    /// Compare the stable classes of two diagrams.
    StableEq {
        file1: PathBuf,
        file2: PathBuf,
        /// Extra S¹×S² summands on the first side.
        #[arg(long, default_value_t = 0)]
        summands1: u32,
        #[arg(long, default_value_t = 0)]
        summands2: u32,
    },
}

#[derive(Subcommand)]
enum MoveCommand {
    /// Apply a JSON move script and write the result.
    Apply {
        file: PathBuf,
        #[arg(long)]
        script: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1, with an error payload.
    Computation(HfError),
}

impl From<HfError> for Failure {
    fn from(e: HfError) -> Self {
        match e {
            HfError::SchemaError { .. } => Failure::Usage(e.to_string()),
            e => Failure::Computation(e),
        }
    }
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    digests: Vec<String>,
    ok: bool,
    payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

struct Outcome {
    digests: Vec<String>,
    ok: bool,
    payload: Value,
}

fn digest(d: &HeegaardDiagram) -> String {
    hex::encode(Sha256::digest(serialize(d).as_bytes()))
}

fn load(path: &Path) -> Result<HeegaardDiagram, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse(&text)?)
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn labels(d: &HeegaardDiagram, g: &Generator) -> Vec<u32> {
    let mut l = g.labels(d.map());
    l.sort_unstable();
    l
}

fn find_generator(d: &HeegaardDiagram, gens: &[Generator], text: &str) -> Result<usize, Failure> {
    let mut want: Vec<u32> = text
        .trim_matches(|c| c == '{' || c == '}')
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("generator {text:?} is not a list of crossing labels")))?;
    want.sort_unstable();
    gens.iter()
        .position(|g| labels(d, g) == want)
        .ok_or_else(|| Failure::Usage(format!("{text} is not a generator")))
}

fn stable_json(c: StableClass) -> Value {
    let (reduced, exact) = c.reduced();
    let mut v = json!({ "raw": [c.dim, c.b] });
    if exact {
        v["reduced"] = json!([reduced, 1]);
    } else {
        v["warning"] = json!(format!("dim {} is not divisible by 2^{}", c.dim, c.b.saturating_sub(1)));
    }
    v
}

fn validate(file: &Path) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
    let d = match parse(&text) {
        Ok(d) => d,
        Err(e @ HfError::SchemaError { .. }) => return Err(Failure::Usage(e.to_string())),
        Err(e) => {
            return Ok(Outcome {
                digests: Vec::new(),
                ok: false,
                payload: json!({ "valid": false, "clauses": [e.to_string()], "warnings": [] }),
            })
        }
    };
    let v = d.validate();
    Ok(Outcome { digests: vec![digest(&d)], ok: v.valid, payload: to_json(&v) })
}

fn info(file: &Path) -> Result<Outcome, Failure> {
    let d = load(file)?;
    let v = d.validate();
    let n = d.is_nice();
    let faces = d.surface().faces.len();
    let gens = stablehf::complex::enumerate_generators(&d).len();
    Ok(Outcome {
        digests: vec![digest(&d)],
        ok: v.valid,
        payload: json!({
            "name": d.name(),
            "genus": d.genus(),
            "k": d.k(),
            "b": d.b(),
            "crossings": d.map().crossing_count(),
            "faces": faces,
            "regions": d.region_count(),
            "generators": gens,
            "valid": v.valid,
            "nice": n.is_nice,
            "offenders": to_json(&n.offenders),
        }),
    })
}

fn gens(file: &Path) -> Result<Outcome, Failure> {
    let d = load(file)?;
    let g = stablehf::complex::enumerate_generators(&d);
    let list: Vec<Vec<u32>> = g.iter().map(|x| labels(&d, x)).collect();
    Ok(Outcome { digests: vec![digest(&d)], ok: true, payload: json!({ "count": list.len(), "generators": list }) })
}

fn diff(file: &Path, witnesses: bool, matrix: Option<&Path>) -> Result<Outcome, Failure> {
    let d = load(file)?;
    let diff = differential(&d)?;
    if let Some(out) = matrix {
        std::fs::write(out, diff.export())
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", out.display())))?;
    }
    let square = verify_d_squared(&diff.matrix);
    let gens: Vec<Vec<u32>> = diff.generators.iter().map(|x| labels(&d, x)).collect();
    let mut payload = json!({
        "generators": gens,
        "entries": diff.matrix.entries(),
        "d_squared_zero": square.ok,
    });
    if witnesses {
        let w: Vec<Value> = diff
            .witnesses
            .iter()
            .enumerate()
            .flat_map(|(x, row)| {
                row.iter().map(move |(y, doms)| json!({ "from": x, "to": y, "domains": doms }))
            })
            .collect();
        payload["witnesses"] = json!(w);
    }
    Ok(Outcome { digests: vec![digest(&d)], ok: square.ok, payload })
}

fn homology_cmd(file: &Path, per_class: bool, graded: bool) -> Result<Outcome, Failure> {
    let d = load(file)?;
    let diff = differential(&d)?;
    let solver = DomainSolver::new(&d)?;
    let classes = pi2_classes_with(&solver, &diff.generators)?;
    let h = homology_of(&diff, &classes)?;
    let mut payload = json!({
        "dim": h.total,
        "b": d.b(),
        "stable": stable_json(stable_class(&d, &h)),
    });
    if per_class || graded {
        let mut list = Vec::new();
        for (members, ch) in classes.iter().zip(&h.classes) {
            let gens: Vec<Vec<u32>> = members.iter().map(|&i| labels(&d, &diff.generators[i])).collect();
            let mut entry = json!({ "generators": gens, "dim": ch.dim });
            if graded {
                let gr = relative_grading(&d, &solver, &diff.generators, members)?;
                let pieces = graded_homology(&diff, members, &gr)?;
                entry["gradings"] = json!(gr.values);
                entry["modulus"] = json!(gr.modulus);
                entry["graded_dims"] = json!(pieces);
            }
            list.push(entry);
        }
        payload["classes"] = json!(list);
    }
    Ok(Outcome { digests: vec![digest(&d)], ok: true, payload })
}

fn twisted(file: &Path, class: Option<usize>) -> Result<Outcome, Failure> {
    let d = load(file)?;
    let (diff, complexes) = twisted_complexes(&d)?;
    if let Some(n) = class {
        if n >= complexes.len() {
            return Err(Failure::Usage(format!("class {n} out of range (there are {})", complexes.len())));
        }
    }
    let h2 = pi2prime_and_h2_from(&d, DomainSolver::new(&d)?.kernel())?;
    let mut ok = true;
    let mut out = Vec::new();
    for (i, c) in complexes.iter().enumerate() {
        if class.is_some_and(|n| n != i) {
            continue;
        }
        let square = verify_twisted_d_squared(c);
        ok &= square.ok;
        let entries: Vec<Value> = c
            .matrix
            .iter()
            .enumerate()
            .flat_map(|(a, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_zero())
                    .map(move |(b, e)| json!({ "from": a, "to": b, "coefficient": e.to_string() }))
            })
            .collect();
        let gens: Vec<Vec<u32>> = c.class.iter().map(|&g| labels(&d, &diff.generators[g])).collect();
        let homology = match univariate_homology(c) {
            Ok(h) => to_json(&h),
            Err(e) => json!({ "unavailable": e.to_string() }),
        };
        out.push(json!({
            "class": i,
            "generators": gens,
            "base": c.base,
            "entries": entries,
            "d_squared_zero": square.ok,
            "homology": homology,
        }));
    }
    Ok(Outcome {
        digests: vec![digest(&d)],
        ok,
        payload: json!({ "h2_rank": h2.rank, "h2_basis": h2.periodic.basis(), "classes": out }),
    })
}

fn move_apply(file: &Path, script: &Path, output: &Path) -> Result<Outcome, Failure> {
    let d = load(file)?;
    let text = std::fs::read_to_string(script)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", script.display())))?;
    let moves: Vec<MoveSpec> = serde_json::from_str::<Vec<MoveSpec>>(&text)
        .or_else(|_| serde_json::from_str::<MoveSpec>(&text).map(|m| vec![m]))
        .map_err(|e| Failure::Usage(format!("move script: {e}")))?;
    let mut cur = d.clone();
    let mut steps = Vec::new();
    for (i, m) in moves.iter().enumerate() {
        cur = apply(&cur, m).map_err(|e| {
            Failure::Computation(HfError::PreconditionFailed(format!("move {}: {e}", i + 1)))
        })?;
        steps.push(json!({
            "move": m.name(),
            "crossings": cur.map().crossing_count(),
            "b": cur.b(),
            "genus": cur.genus(),
        }));
    }
    std::fs::write(output, serialize(&cur) + "\n")
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", output.display())))?;
    Ok(Outcome {
        digests: vec![digest(&d), digest(&cur)],
        ok: true,
        payload: json!({ "steps": steps }),
    })
}

fn fuzz(file: &Path, moves: usize, seed: u64) -> Result<Outcome, Failure> {
    let d = load(file)?;
    let r = fuzz_invariance(&d, moves, seed)?;
    Ok(Outcome { digests: vec![digest(&d)], ok: true, payload: to_json(&r) })
}

fn oracle(file: &Path, pair: Option<&[String]>) -> Result<Outcome, Failure> {
    let d = load(file)?;
    if let Some([x, y]) = pair {
        let gens = stablehf::complex::enumerate_generators(&d);
        let xi = find_generator(&d, &gens, x)?;
        let yi = find_generator(&d, &gens, y)?;
        let r = compare_pair(&d, &gens[xi], &gens[yi])?;
        return Ok(Outcome { digests: vec![digest(&d)], ok: r.ok(), payload: json!({ "polygons": to_json(&r) }) });
    }
    let polygons = compare_polygons(&d)?;
    let (witnesses, geometry) = check_polygon_geometry(&d)?;
    let additivity = match maslov_additivity_sample(&d, 1000, 0) {
        Ok(r) => json!({ "ok": true, "report": r }),
        Err(HfError::AdditivityViolation(m)) => json!({ "ok": false, "counterexample": m }),
        Err(e) => return Err(e.into()),
    };
    let ok = polygons.ok() && geometry.is_empty() && additivity["ok"] == json!(true);
    Ok(Outcome {
        digests: vec![digest(&d)],
        ok,
        payload: json!({
            "polygons": to_json(&polygons),
            "geometry": { "witnesses": witnesses, "failures": geometry },
            "additivity": additivity,
        }),
    })
}

fn stable_eq(f1: &Path, f2: &Path, n1: u32, n2: u32) -> Result<Outcome, Failure> {
    let d1 = load(f1)?;
    let d2 = load(f2)?;
    let class_of = |d: &HeegaardDiagram| -> Result<StableClass, Failure> {
        let diff = differential(d)?;
        let solver = DomainSolver::new(d)?;
        let classes = pi2_classes_with(&solver, &diff.generators)?;
        Ok(stable_class(d, &homology_of(&diff, &classes)?))
    };
    let c1 = class_of(&d1)?.with_summands(n1);
    let c2 = class_of(&d2)?.with_summands(n2);
    let equal = stable_equal(c1, c2);
    Ok(Outcome {
        digests: vec![digest(&d1), digest(&d2)],
        ok: equal,
        payload: json!({ "equal": equal, "first": stable_json(c1), "second": stable_json(c2) }),
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Info { .. } => "info",
        Command::Gens { .. } => "gens",
        Command::Diff { .. } => "diff",
        Command::Homology { .. } => "homology",
        Command::Twisted { .. } => "twisted",
        Command::Move { .. } => "move apply",
        Command::FuzzInvariance { .. } => "fuzz-invariance",
        Command::Oracle { .. } => "oracle",
        Command::StableEq { .. } => "stable-eq",
    }
}

fn run(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Validate { file } => validate(file),
        Command::Info { file } => info(file),
        Command::Gens { file } => gens(file),
        Command::Diff { file, witnesses, matrix } => diff(file, *witnesses, matrix.as_deref()),
        Command::Homology { file, per_class, graded } => homology_cmd(file, *per_class, *graded),
        Command::Twisted { file, class } => twisted(file, *class),
        Command::Move { action: MoveCommand::Apply { file, script, output } } => move_apply(file, script, output),
        Command::FuzzInvariance { file, moves, seed } => fuzz(file, *moves, *seed),
        Command::Oracle { file, pair } => oracle(file, pair.as_deref()),
        Command::StableEq { file1, file2, summands1, summands2 } => {
            stable_eq(file1, file2, *summands1, *summands2)
        }
    }
}

fn threads(cli: &Cli) -> Result<Option<usize>, String> {
    if let Some(n) = cli.threads {
        return Ok(Some(n));
    }
    match std::env::var("HF_THREADS") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| format!("HF_THREADS={v:?} is not a number")),
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match threads(&cli) {
        Ok(Some(n)) if n > 0 => {
            stablehf::par::init_threads(n);
        }
        Ok(_) => {}
        Err(m) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let command = command_name(&cli.command);
    let (report, code) = match run(&cli.command) {
        Ok(o) => {
            let code = if o.ok { 0 } else { 1 };
            (Report { command, digests: o.digests, ok: o.ok, payload: o.payload, timing_ms: None }, code)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(Failure::Computation(e)) => (
            Report { command, digests: Vec::new(), ok: false, payload: json!({ "error": e.to_string() }), timing_ms: None },
            1,
        ),
    };
    let report = Report { timing_ms: cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3), ..report };
    println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    ExitCode::from(code)
}
