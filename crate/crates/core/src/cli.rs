//! Command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and returns a [`RunReport`] carrying the text
//! to print and the exit status. Exit codes: 0 success or `Popular`, 1 invalid input, 2
//! `NotPopular`, 3 `Inconclusive`, 4 enumeration budget exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::certificate::{self, CloneGraph, DualWitness, Verdict};
use crate::instance::{parse_instance, parse_matching, random_instance, write_instance, write_matching};
use crate::oracle::{self, EnumerationBudget, MatchingSpace};
use crate::solvers::{self, LevelMatching};
use crate::{Instance, Matching};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_POPULAR: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "popmatch", version, about = "Popular matchings in many-to-many instances")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a stable or a max-size popular matching.
    Solve {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check whether a matching is popular using the clone-graph certificate.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        matching: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Enumerate all matchings and report popular and weakly popular sizes.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = EnumerationBudget::default().max_edges)]
        max_edges: usize,
        #[arg(long, default_value_t = EnumerationBudget::default().max_matchings)]
        max_matchings: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write a random instance.
    Gen {
        #[arg(long)]
        students: usize,
        #[arg(long)]
        courses: usize,
        #[arg(long, default_value_t = 1)]
        max_cap: u32,
        #[arg(long)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time the max-size popular solver on complete instances with about the given edge counts.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_cap: u32,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Stable,
    Maxpop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Result of one command.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub digest: Option<String>,
    pub payload: Value,
    pub exit_code: i32,
    /// What the binary prints on stdout.
    #[serde(skip)]
    pub stdout: String,
    /// Diagnostic for stderr, if any.
    #[serde(skip)]
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
    digest: Option<String>,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
            digest: None,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn load_matching(inst: &Instance, path: &Path) -> Result<Matching, Failure> {
    parse_matching(inst, &read(path)?).map_err(|e| Failure {
        code: EXIT_INVALID,
        message: format!("{}: {e}", path.display()),
        digest: Some(inst.digest()),
    })
}

fn matching_json(inst: &Instance, m: &Matching) -> Value {
    Value::Array(
        m.pairs()
            .iter()
            .map(|&(a, b)| json!({"student": inst.students()[a], "course": inst.courses()[b]}))
            .collect(),
    )
}

/// Executes the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> RunReport
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == EXIT_OK {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return RunReport {
                command: echo,
                digest: None,
                payload: Value::Null,
                exit_code: code,
                stdout,
                stderr,
            };
        }
    };
    match execute(&cli.command) {
        Ok((mut report, format)) => {
            report.command = echo;
            report.stdout = with_json(&report, format);
            report
        }
        Err(f) => RunReport {
            command: echo,
            digest: f.digest,
            payload: json!({"error": f.message}),
            exit_code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn ok(digest: Option<String>, payload: Value, exit_code: i32, stdout: String) -> RunReport {
    RunReport {
        command: String::new(),
        digest,
        payload,
        exit_code,
        stdout,
        stderr: String::new(),
    }
}

fn execute(cmd: &Command) -> Result<(RunReport, Format), Failure> {
    match cmd {
        Command::Solve { algo, input, format } => cmd_solve(input, *algo, *format),
        Command::Verify {
            input,
            matching,
            format,
        } => cmd_verify(input, matching, *format),
        Command::Oracle {
            input,
            max_edges,
            max_matchings,
            format,
        } => cmd_oracle(
            input,
            EnumerationBudget {
                max_edges: *max_edges,
                max_matchings: *max_matchings,
            },
            *format,
        ),
        Command::Gen {
            students,
            courses,
            max_cap,
            density,
            seed,
            out,
        } => cmd_gen(*students, *courses, *max_cap, *density, *seed, out),
        Command::Bench {
            sizes,
            seed,
            max_cap,
            repeats,
        } => cmd_bench(sizes, *seed, *max_cap, *repeats),
    }
}

fn with_json(report: &RunReport, format: Format) -> String {
    match format {
        Format::Text => report.stdout.clone(),
        Format::Json => {
            let mut v = json!({"command": report.command, "digest": report.digest, "exit_code": report.exit_code});
            if let (Value::Object(out), Value::Object(extra)) = (&mut v, &report.payload) {
                out.extend(extra.clone());
            }
            serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
        }
    }
}

fn dual_summary(cg: &CloneGraph<'_>, w: &DualWitness) -> Value {
    let check = certificate::check_dual(cg, w).expect("witness built for this graph");
    let alpha: serde_json::Map<String, Value> = (0..cg.num_real()).map(|c| (cg.label(c), json!(w.alpha[c]))).collect();
    let mut v = json!({
        "alpha": alpha,
        "objective": check.objective,
        "feasible": check.feasible,
        "constraints_checked": check.checked,
        "violated": check.violated.len(),
    });
    if let Some(parts) = &w.partition {
        let labels: serde_json::Map<String, Value> = (0..cg.num_real())
            .map(|c| (cg.label(c), json!(format!("{:?}", parts[c]))))
            .collect();
        v["partition"] = Value::Object(labels);
    }
    v
}

fn cmd_solve(input: &Path, algo: Algo, format: Format) -> Result<(RunReport, Format), Failure> {
    let inst = load_instance(input)?;
    let mut text = String::new();
    let payload = match algo {
        Algo::Stable => {
            let m = solvers::stable_matching(&inst);
            text.push_str(&write_matching(&inst, &m));
            json!({"algo": "stable", "size": m.len(), "matching": matching_json(&inst, &m)})
        }
        Algo::Maxpop => {
            let lm = solvers::max_size_popular(&inst);
            maxpop_payload(&inst, &lm, &mut text)
        }
    };
    let report = ok(Some(inst.digest()), payload, EXIT_OK, text);
    Ok((report, format))
}

fn maxpop_payload(inst: &Instance, lm: &LevelMatching, text: &mut String) -> Value {
    let m = lm.projection();
    text.push_str(&write_matching(inst, m));
    let levels: Vec<Value> = lm
        .edges()
        .iter()
        .map(|e| {
            let _ = writeln!(
                text,
                "# level {} {} {}",
                inst.students()[e.student],
                inst.courses()[e.course],
                e.level.as_u8()
            );
            json!({"student": inst.students()[e.student], "course": inst.courses()[e.course], "level": e.level.as_u8()})
        })
        .collect();
    let cg = certificate::build_clone_graph(inst, m).expect("solver output is a matching");
    let witness = certificate::build_dual_witness(inst, lm).expect("solver output is a matching");
    let dual = dual_summary(&cg, &witness);
    let _ = writeln!(
        text,
        "# dual witness: {} clones, objective {}, feasible {}, {} constraints checked",
        cg.num_real(),
        dual["objective"],
        dual["feasible"],
        dual["constraints_checked"]
    );
    json!({"algo": "maxpop", "size": m.len(), "matching": levels, "dual": dual})
}

fn cmd_verify(input: &Path, matching: &Path, format: Format) -> Result<(RunReport, Format), Failure> {
    let inst = load_instance(input)?;
    let n = load_matching(&inst, matching)?;
    let verdict = certificate::verify_popular(&inst, &n).map_err(|e| Failure::invalid(e.to_string()))?;
    let cg = certificate::build_clone_graph(&inst, &n).expect("validated matching");
    let mut text = String::new();
    let (code, payload) = match &verdict {
        Verdict::Popular { optimum, dual } => {
            let summary = dual_summary(&cg, dual);
            let _ = writeln!(text, "verdict: popular\noptimum: {optimum}");
            let _ = writeln!(
                text,
                "dual: objective {}, feasible {}, {} constraints checked",
                summary["objective"], summary["feasible"], summary["constraints_checked"]
            );
            for c in 0..cg.num_real() {
                let _ = writeln!(text, "alpha {} {}", cg.label(c), dual.alpha[c]);
            }
            (
                EXIT_OK,
                json!({"verdict": "popular", "optimum": optimum, "certificate": summary}),
            )
        }
        Verdict::NotPopular {
            optimum,
            witness,
            delta,
        } => {
            let _ = writeln!(
                text,
                "verdict: not popular\noptimum: {optimum}\ndelta: {delta}\n# witness"
            );
            text.push_str(&write_matching(&inst, witness));
            (
                EXIT_NOT_POPULAR,
                json!({"verdict": "not_popular", "optimum": optimum, "delta": delta, "matching": matching_json(&inst, witness)}),
            )
        }
        Verdict::Inconclusive { optimum, clone_witness } => {
            let pairs: Vec<Value> = clone_witness
                .real_pairs()
                .map(|(s, t)| json!([cg.label(s), cg.label(t)]))
                .collect();
            let _ = writeln!(text, "verdict: inconclusive\noptimum: {optimum}");
            for p in &pairs {
                let _ = writeln!(
                    text,
                    "# clone edge {} {}",
                    p[0].as_str().unwrap(),
                    p[1].as_str().unwrap()
                );
            }
            (
                EXIT_INCONCLUSIVE,
                json!({"verdict": "inconclusive", "optimum": optimum, "clone_witness": pairs}),
            )
        }
    };
    let report = ok(Some(inst.digest()), payload, code, text);
    Ok((report, format))
}

fn cmd_oracle(input: &Path, budget: EnumerationBudget, format: Format) -> Result<(RunReport, Format), Failure> {
    let inst = load_instance(input)?;
    let budget_failure = |e: oracle::OracleError| Failure {
        code: EXIT_BUDGET,
        message: e.to_string(),
        digest: Some(inst.digest()),
    };
    let space = MatchingSpace::new(&inst, &budget).map_err(budget_failure)?;
    let spectrum = oracle::spectrum_of(&space).map_err(|e| Failure::invalid(e.to_string()))?;
    let stable = solvers::stable_matching(&inst);
    let maxpop = solvers::max_size_popular(&inst).into_projection();
    let popular = |m: &Matching| {
        space
            .is_popular(space.index_of(m).expect("solver output is enumerated"))
            .holds
    };
    let (stable_popular, maxpop_popular) = (popular(&stable), popular(&maxpop));

    let mut text = String::new();
    let _ = writeln!(text, "matchings: {}", spectrum.num_matchings);
    let _ = writeln!(text, "max matching size: {}", spectrum.max_matching);
    let _ = writeln!(
        text,
        "popular sizes: {}..={}",
        spectrum.min_popular, spectrum.max_popular
    );
    let _ = writeln!(
        text,
        "weakly popular sizes: {}..={}",
        spectrum.min_weakly_popular, spectrum.max_weakly_popular
    );
    let _ = writeln!(text, "stable output: size {}, popular {}", stable.len(), stable_popular);
    let _ = writeln!(text, "maxpop output: size {}, popular {}", maxpop.len(), maxpop_popular);
    let _ = writeln!(text, "max-size popular matchings: {}", spectrum.all_max_popular.len());
    for (i, m) in spectrum.all_max_popular.iter().enumerate() {
        let _ = writeln!(text, "# max-size popular {}", i + 1);
        text.push_str(&write_matching(&inst, m));
    }
    let payload = json!({
        "num_matchings": spectrum.num_matchings,
        "max_matching": spectrum.max_matching,
        "max_popular": spectrum.max_popular,
        "min_popular": spectrum.min_popular,
        "max_weakly_popular": spectrum.max_weakly_popular,
        "min_weakly_popular": spectrum.min_weakly_popular,
        "all_max_popular": spectrum.all_max_popular.iter().map(|m| matching_json(&inst, m)).collect::<Vec<_>>(),
        "stable": {"size": stable.len(), "popular": stable_popular},
        "maxpop": {"size": maxpop.len(), "popular": maxpop_popular},
    });
    let report = ok(Some(inst.digest()), payload, EXIT_OK, text);
    Ok((report, format))
}

fn cmd_gen(
    students: usize,
    courses: usize,
    max_cap: u32,
    density: f64,
    seed: u64,
    out: &Path,
) -> Result<(RunReport, Format), Failure> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Failure::invalid(format!("density {density} is outside [0, 1]")));
    }
    if max_cap == 0 {
        return Err(Failure::invalid("--max-cap must be at least 1"));
    }
    let inst = random_instance(students, courses, max_cap, density, seed);
    std::fs::write(out, write_instance(&inst))
        .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", out.display())))?;
    let text = format!("wrote {} ({})\n", out.display(), inst.digest());
    let payload = json!({"out": out.display().to_string(), "edges": inst.num_edges()});
    Ok((ok(Some(inst.digest()), payload, EXIT_OK, text), Format::Text))
}

/// One row of [`bench_ladder`].
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub target_edges: usize,
    pub edges: usize,
    pub side: usize,
    /// Fastest of the repeats, in seconds.
    pub seconds: f64,
    /// `seconds` over the previous row's, if there is one.
    pub ratio: Option<f64>,
}

/// Times [`solvers::max_size_popular`] on complete instances with about `sizes[i]` edges.
pub fn bench_ladder(sizes: &[usize], seed: u64, max_cap: u32, repeats: usize) -> Vec<BenchRow> {
    let mut rows: Vec<BenchRow> = Vec::new();
    for (i, &target) in sizes.iter().enumerate() {
        let side = ((target as f64).sqrt().ceil() as usize).max(1);
        let inst = random_instance(side, side, max_cap.max(1), 1.0, seed.wrapping_add(i as u64));
        let mut best = f64::INFINITY;
        for _ in 0..repeats.max(1) {
            let start = Instant::now();
            let lm = solvers::max_size_popular(&inst);
            best = best.min(start.elapsed().as_secs_f64());
            std::hint::black_box(lm);
        }
        let ratio = rows.last().map(|p| best / p.seconds);
        rows.push(BenchRow {
            target_edges: target,
            edges: inst.num_edges(),
            side,
            seconds: best,
            ratio,
        });
    }
    rows
}

fn cmd_bench(sizes: &[usize], seed: u64, max_cap: u32, repeats: usize) -> Result<(RunReport, Format), Failure> {
    if sizes.contains(&0) {
        return Err(Failure::invalid("bench sizes must be positive"));
    }
    let rows = bench_ladder(sizes, seed, max_cap, repeats);
    let mut text = String::from("edges\tseconds\tratio\n");
    for r in &rows {
        let ratio = r.ratio.map_or("-".to_string(), |x| format!("{x:.2}"));
        let _ = writeln!(text, "{}\t{:.6}\t{}", r.edges, r.seconds, ratio);
    }
    let near_linear = rows.iter().filter_map(|r| r.ratio).all(|x| x <= 3.0);
    let _ = writeln!(text, "near-linear (ratio <= 3.0 per step): {near_linear}");
    Ok((
        ok(None, json!({"rows": rows, "near_linear": near_linear}), EXIT_OK, text),
        Format::Text,
    ))
}
