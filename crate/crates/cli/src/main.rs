use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use qmut::format::{
    export_dot, parse_mutation_script, parse_quiver, serialize_mutation_script, serialize_quiver,
};
use qmut::{
    cartan_matrix, check_gentle, count_3cycles, derived_equivalent, enumerate_mutation_class,
    is_in_qn, normal_form_target, presentation_of, reduce_to_normal_form, verify_sequence, BigCartan,
    ClassSignature, Direction, Enlargement, MutationSequence, Orientation, Quiver,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "qmut", version, about = "Mutation class of type A quivers and their gentle algebras")]
struct Cli {
    /// Emit one JSON object instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for enumeration output.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate at one vertex and print the result.
    Mutate {
        #[arg(short = 'k')]
        vertex: usize,
        file: PathBuf,
    },
    /// Decide membership in the mutation class of A_n.
    Check { file: PathBuf },
    /// List the oriented 3-cycles.
    Tricycles { file: PathBuf },
    /// Print the Cartan matrix of the associated gentle algebra.
    Cartan { file: PathBuf },
    /// Print the Cartan determinant.
    Det { file: PathBuf },
    /// Decide derived equivalence of the two associated algebras.
    Equiv { a: PathBuf, b: PathBuf },
    /// Print a mutation script reducing the quiver to its normal form.
    Normalize { file: PathBuf },
    /// Replay and check a mutation script.
    VerifySeq { script: PathBuf },
    /// Print every member of the mutation class of A_n up to isomorphism.
    Enumerate {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value_t = 1 << 22)]
        limit: usize,
    },
    /// Print the normal form with n vertices and t 3-cycles.
    Target {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 't')]
        t: usize,
    },
    /// Graphviz export.
    Dot { file: PathBuf },
    /// Build a quiver from A_1 by enlargements, e.g.
    /// `pendant:0:out,cycle:1:cw,random:5`.
    Generate {
        #[arg(long)]
        enlargements: String,
    },
}

enum Verdict {
    Yes,
    No,
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> Result<Quiver> {
    parse_quiver(&read_text(path)?).with_context(|| format!("{}", path.display()))
}

fn state_hash(q: &Quiver) -> String {
    let digest = Sha256::digest(serialize_quiver(q).as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn quiver_json(q: &Quiver) -> Value {
    let arrows: Vec<[usize; 2]> = q.arrows().into_iter().map(|(u, v)| [u, v]).collect();
    json!({ "n": q.vertex_count(), "arrows": arrows })
}

fn int_json(x: &impl ToString) -> Value {
    let s = x.to_string();
    s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s))
}

fn oriented(q: &Quiver, [a, b, c]: [usize; 3]) -> [usize; 3] {
    if q.has_arrow(a, b) {
        [a, b, c]
    } else {
        [a, c, b]
    }
}

fn cartan_of(q: &Quiver) -> Result<BigCartan> {
    let p = presentation_of(q)?;
    debug_assert!(check_gentle(&p).gentle);
    Ok(cartan_matrix(&p)?)
}

fn parse_enlargements(spec: &str, rng: &mut ChaCha8Rng) -> Result<Quiver> {
    let mut q = Quiver::empty(1);
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let step = match parts.as_slice() {
            ["pendant", v, d] => {
                let d = match *d {
                    "in" => Direction::In,
                    "out" => Direction::Out,
                    _ => bail!("`{item}`: direction must be `in` or `out`"),
                };
                Enlargement::Pendant(v.parse().with_context(|| format!("`{item}`: bad vertex"))?, d)
            }
            ["cycle", v, o] => {
                let o = match *o {
                    "cw" => Orientation::Clockwise,
                    "ccw" => Orientation::Counterclockwise,
                    _ => bail!("`{item}`: orientation must be `cw` or `ccw`"),
                };
                Enlargement::Cycle(v.parse().with_context(|| format!("`{item}`: bad vertex"))?, o)
            }
            ["random", k] => {
                let k: usize = k.parse().with_context(|| format!("`{item}`: bad count"))?;
                for _ in 0..k {
                    q = random_enlargement(&q, rng)?;
                }
                continue;
            }
            _ => bail!("`{item}`: expected pendant:<v>:in|out, cycle:<v>:cw|ccw or random:<k>"),
        };
        q = step.apply(&q).with_context(|| format!("`{item}`"))?;
    }
    Ok(q)
}

/// One enlargement chosen at random among those that stay in the class.
fn random_enlargement(q: &Quiver, rng: &mut ChaCha8Rng) -> Result<Quiver> {
    for _ in 0..1000 {
        let v = rng.gen_range(0..q.vertex_count());
        let step = if rng.gen() {
            Enlargement::Cycle(v, if rng.gen() { Orientation::Clockwise } else { Orientation::Counterclockwise })
        } else {
            Enlargement::Pendant(v, if rng.gen() { Direction::In } else { Direction::Out })
        };
        if let Ok(next) = step.apply(q) {
            if is_in_qn(&next).member {
                return Ok(next);
            }
        }
    }
    Err(anyhow!("no admissible enlargement found"))
}

fn seed() -> Result<u64> {
    match std::env::var("QMUT_SEED") {
        Ok(s) => s.trim().parse().context("QMUT_SEED must be an unsigned integer"),
        Err(_) => Ok(0),
    }
}

fn verify_script(path: &Path) -> Result<(Verdict, String, Value)> {
    let script = parse_mutation_script(&read_text(path)?).with_context(|| format!("{}", path.display()))?;
    let start_path = {
        let p = PathBuf::from(&script.start);
        match path.parent() {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p,
        }
    };
    let start = load(&start_path)?;
    let fail = |step: Option<usize>, why: String| {
        let line = step.map(|k| script.steps[k].line);
        let text = match (step, line) {
            (Some(k), Some(l)) => format!("invalid step={k} line={l}: {why}\n"),
            _ => format!("invalid start: {why}\n"),
        };
        (Verdict::No, text, json!({ "valid": false, "step": step, "line": line, "reason": why }))
    };
    let n = start.vertex_count();
    if let Some(k) = script.steps.iter().position(|s| s.vertex >= n) {
        return Ok(fail(Some(k), format!("vertex {} out of range", script.steps[k].vertex)));
    }
    let seq = MutationSequence::replay(start, &script.vertex_list())?;
    let hash_failure = script.steps.iter().zip(seq.steps()).enumerate().find_map(|(k, (s, (_, q)))| {
        let h = state_hash(q);
        let note = s.note.as_ref()?;
        (note != &h).then(|| (Some(k), format!("state hash {h} does not match {note}")))
    });
    // report whichever problem comes first
    let failure = match (verify_sequence(&seq).failure, hash_failure) {
        (Some((Some(ka), _)), Some((Some(kb), b))) if kb < ka => Some((Some(kb), b)),
        (a, b) => a.or(b),
    };
    if let Some((step, why)) = failure {
        return Ok(fail(step, why));
    }
    let end = state_hash(seq.end());
    Ok((
        Verdict::Yes,
        format!("valid steps={} end={end}\n", seq.len()),
        json!({ "valid": true, "steps": seq.len(), "end": end }),
    ))
}

fn run(cli: &Cli) -> Result<(Verdict, String, Value)> {
    let yes = |text: String, value: Value| Ok((Verdict::Yes, text, value));
    match &cli.command {
        Command::Mutate { vertex, file } => {
            let q = load(file)?.mutate(*vertex)?;
            yes(serialize_quiver(&q), quiver_json(&q))
        }
        Command::Check { file } => {
            let q = load(file)?;
            let report = is_in_qn(&q);
            if report.member {
                let t = count_3cycles(&q);
                yes(format!("member t={t}\n"), json!({ "member": true, "t": t }))
            } else {
                let names: Vec<&str> = report.violations.iter().map(|v| v.name()).collect();
                eprintln!("{report}");
                Ok((
                    Verdict::No,
                    format!("not-member {}\n", names.join(",")),
                    json!({ "member": false, "violations": names }),
                ))
            }
        }
        Command::Tricycles { file } => {
            let q = load(file)?;
            let cycles: Vec<[usize; 3]> = q.directed_3cycles().into_iter().map(|c| oriented(&q, c)).collect();
            let text: String = cycles.iter().map(|[a, b, c]| format!("{a} -> {b} -> {c}\n")).collect();
            yes(text, json!({ "count": cycles.len(), "cycles": cycles }))
        }
        Command::Cartan { file } => {
            let c = cartan_of(&load(file)?)?;
            let rows: Vec<Vec<Value>> = c.rows().iter().map(|r| r.iter().map(int_json).collect()).collect();
            yes(c.to_text(), json!({ "n": c.dim(), "rows": rows }))
        }
        Command::Det { file } => {
            let d = cartan_of(&load(file)?)?.determinant();
            yes(format!("{d}\n"), json!({ "det": int_json(&d) }))
        }
        Command::Equiv { a, b } => {
            let (qa, qb) = (load(a)?, load(b)?);
            let (pa, pb) = (presentation_of(&qa)?, presentation_of(&qb)?);
            let same = derived_equivalent(&pa, &pb)?;
            let (da, db) = (cartan_of(&qa)?.determinant(), cartan_of(&qb)?.determinant());
            let value = json!({ "equivalent": same, "det": [int_json(&da), int_json(&db)] });
            if same {
                yes(format!("derived-equivalent det {da}\n"), value)
            } else {
                Ok((Verdict::No, format!("not-derived-equivalent det {da} vs {db}\n"), value))
            }
        }
        Command::Normalize { file } => {
            let seq = reduce_to_normal_form(&load(file)?)?;
            let text = serialize_mutation_script(&file.display().to_string(), &seq, |q| Some(state_hash(q)));
            let hashes: Vec<String> = seq.steps().iter().map(|(_, q)| state_hash(q)).collect();
            let value = json!({
                "start": file.display().to_string(),
                "mutations": seq.vertices(),
                "hashes": hashes,
                "end": quiver_json(seq.end()),
            });
            yes(text, value)
        }
        Command::VerifySeq { script } => verify_script(script),
        Command::Enumerate { n, limit } => {
            if *n == 0 {
                bail!("n must be at least 1");
            }
            let class = enumerate_mutation_class(&Quiver::linear_a(*n), *limit)?;
            let mut forms: Vec<_> = class.forms().cloned().collect();
            forms.sort();
            let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build()?;
            let quivers: Vec<Quiver> = pool.install(|| forms.par_iter().map(|f| f.to_quiver()).collect());
            let text = qmut::format::serialize_quiver_stream(&quivers);
            let value = json!({
                "n": n,
                "count": quivers.len(),
                "quivers": quivers.iter().map(quiver_json).collect::<Vec<_>>(),
            });
            yes(text, value)
        }
        Command::Target { n, t } => {
            let q = normal_form_target(ClassSignature { n: *n, t: *t })?;
            yes(serialize_quiver(&q), quiver_json(&q))
        }
        Command::Dot { file } => {
            let dot = export_dot(&load(file)?);
            yes(dot.clone(), json!({ "dot": dot }))
        }
        Command::Generate { enlargements } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed()?);
            let q = parse_enlargements(enlargements, &mut rng)?;
            yes(serialize_quiver(&q), quiver_json(&q))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((verdict, text, value)) => {
            if cli.json {
                println!("{value}");
            } else {
                print!("{text}");
            }
            match verdict {
                Verdict::Yes => ExitCode::SUCCESS,
                Verdict::No => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
