use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lcltrees::adversary::{builtin_solver, run_comp_adversary, run_hc_adversary, AdversaryOptions, Outcome};
use lcltrees::classify::{decide_fullness, decide_greediness, DecideOptions};
use lcltrees::homproblems::{build_h_delta, hom_solve_h_delta, lcl_from_graph, SimpleGraph};
use lcltrees::io::{parse_coloring, parse_graph, parse_lcl, parse_value, serialize_coloring, serialize_graph, serialize_lcl, to_canonical, to_canonical_line};
use lcltrees::solve::{greedy_color_traced, toast_color_traced, Commitment};
use lcltrees::toast::build_toast;
use lcltrees::{verify_coloring, ColoringViolation, Error, HalfEdgeGraph, VertexId};

#[derive(Parser)]
#[command(name = "lcltrees", version, about = "Classify and solve LCL problems on regular trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifyMode {
    Full,
    Greedy,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Greedy,
    Toast,
}

#[derive(Clone, Copy, ValueEnum)]
enum AdversaryMode {
    Hc,
    Comp,
}

#[derive(Subcommand)]
enum Command {
    /// Decide fullness and greediness of a problem.
    Classify {
        #[arg(long)]
        lcl: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        mode: ClassifyMode,
        #[arg(long)]
        max_subsets: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Color a graph with a certified strategy.
    Solve {
        #[arg(long)]
        lcl: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        strategy: Strategy,
        /// Comma-separated vertex ids: processing order or toast stream.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<u64>>,
        /// Write one JSON line per committed step.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a coloring; exits 4 when it is not a solution.
    Verify {
        #[arg(long)]
        lcl: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Build a toast online.
    Toast {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        l: usize,
        #[arg(long, value_delimiter = ',')]
        stream: Option<Vec<u64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a construction against a builtin solver; prints a JSON-lines transcript.
    Adversary {
        #[arg(long)]
        lcl: PathBuf,
        #[arg(long, value_enum)]
        mode: AdversaryMode,
        #[arg(long)]
        solver: String,
        #[arg(long, default_value_t = 200)]
        max_stages: usize,
        #[arg(long)]
        n0: Option<u64>,
        #[arg(long, default_value_t = 2_000_000)]
        max_vertices: usize,
        /// Also write the final forest here.
        #[arg(long)]
        emit_graph: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The homomorphism problem of a simple graph.
    Hom {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The graph H_delta.
    Hdelta {
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map a forest into H_delta.
    Homsolve {
        #[arg(long)]
        forest: PathBuf,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with its exit code.
struct Fail {
    code: u8,
    err: anyhow::Error,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. }
            | Error::Semantic(_)
            | Error::DegreeMismatch { .. }
            | Error::MultiEdge(..)
            | Error::BadEndpointCount { .. }
            | Error::DuplicateVertex(_)
            | Error::DuplicateEdge(_) => 1,
            Error::TooManySubsets { .. } => 3,
            _ => 2,
        };
        Fail {
            code,
            err: e.into(),
        }
    }
}

impl From<anyhow::Error> for Fail {
    fn from(err: anyhow::Error) -> Self {
        Fail { code: 1, err }
    }
}

type Run<T> = std::result::Result<T, Fail>;

fn read(path: &Path) -> Run<String> {
    Ok(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn emit(out: Option<&Path>, text: &str) -> Run<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn ids(v: Option<Vec<u64>>) -> Option<Vec<VertexId>> {
    v.map(|v| v.into_iter().map(VertexId).collect())
}

fn run(cli: Cli) -> Run<u8> {
    match cli.command {
        Command::Classify {
            lcl,
            mode,
            max_subsets,
            out,
        } => {
            let lcl = parse_lcl(&read(&lcl)?)?;
            let opts = DecideOptions {
                max_subsets,
                ..Default::default()
            };
            let mut report = serde_json::Map::new();
            let mut full = None;
            let mut greedy = None;
            if matches!(mode, ClassifyMode::Full | ClassifyMode::Both) {
                full = Some(decide_fullness(&lcl, opts)?);
                report.insert(
                    "full".into(),
                    full.as_ref().unwrap().as_ref().map_or(Value::Null, |c| c.to_json(&lcl)),
                );
            }
            if matches!(mode, ClassifyMode::Greedy | ClassifyMode::Both) {
                greedy = Some(decide_greediness(&lcl, opts)?);
                report.insert(
                    "greedy".into(),
                    greedy.as_ref().unwrap().as_ref().map_or(Value::Null, |c| c.to_json(&lcl)),
                );
            }
            let mut classes = serde_json::Map::new();
            if let Some(f) = &full {
                classes.insert("HCOMP".into(), json!(f.is_some()));
                classes.insert("BAIRE".into(), json!(f.is_some()));
            }
            if let Some(g) = &greedy {
                classes.insert("COMPUTABLE".into(), json!(g.is_some()));
            }
            report.insert("classes".into(), Value::Object(classes));
            emit(out.as_deref(), &to_canonical(&Value::Object(report)))?;
            Ok(0)
        }
        Command::Solve {
            lcl,
            graph,
            strategy,
            order,
            trace,
            out,
        } => {
            let lcl = parse_lcl(&read(&lcl)?)?;
            let g = parse_graph(&read(&graph)?)?;
            let order = ids(order);
            let mut lines = String::new();
            let mut sink = |c: &Commitment| {
                lines.push_str(&to_canonical_line(c));
                lines.push('\n');
            };
            let coloring = match strategy {
                Strategy::Greedy => {
                    let cert = decide_greediness(&lcl, DecideOptions::default())?
                        .ok_or_else(|| Error::BadParameter("problem is not greedy".into()))?;
                    greedy_color_traced(&g, &lcl, &cert, order.as_deref(), &mut sink)?
                }
                Strategy::Toast => {
                    let cert = decide_fullness(&lcl, DecideOptions::default())?
                        .ok_or_else(|| Error::BadParameter("problem is not full".into()))?;
                    toast_color_traced(&g, &lcl, &cert, order.as_deref(), &mut sink)?
                }
            };
            if let Some(t) = trace {
                emit(Some(&t), &lines)?;
            }
            emit(out.as_deref(), &serialize_coloring(&g, &lcl, &coloring))?;
            Ok(0)
        }
        Command::Verify {
            lcl,
            graph,
            coloring,
        } => {
            let lcl = parse_lcl(&read(&lcl)?)?;
            let g = parse_graph(&read(&graph)?)?;
            let c = parse_coloring(&read(&coloring)?, &g, &lcl)?;
            let verdict = verify_coloring(&g, &lcl, &c);
            let violations: Vec<Value> = verdict
                .violations
                .iter()
                .map(|v| violation_json(&g, &lcl, v))
                .collect();
            let report = json!({ "ok": verdict.ok(), "violations": violations });
            emit(None, &to_canonical(&report))?;
            Ok(if verdict.ok() { 0 } else { 4 })
        }
        Command::Toast {
            graph,
            l,
            stream,
            out,
        } => {
            let g = parse_graph(&read(&graph)?)?;
            let t = build_toast(&g, l, ids(stream).as_deref())?;
            emit(out.as_deref(), &to_canonical(&t.to_json()))?;
            Ok(0)
        }
        Command::Adversary {
            lcl,
            mode,
            solver,
            max_stages,
            n0,
            max_vertices,
            emit_graph,
            out,
        } => {
            let lcl = parse_lcl(&read(&lcl)?)?;
            let s = builtin_solver(&solver, &lcl)?;
            let opts = AdversaryOptions {
                max_stages,
                n0,
                max_vertices,
            };
            let t = match mode {
                AdversaryMode::Hc => run_hc_adversary(&lcl, s.as_ref(), opts)?,
                AdversaryMode::Comp => run_comp_adversary(&lcl, s.as_ref(), opts)?,
            };
            emit(out.as_deref(), &t.to_jsonl())?;
            if let Some(p) = emit_graph {
                emit(Some(&p), &serialize_graph(&t.final_graph()))?;
            }
            Ok(match t.outcome {
                Outcome::BudgetExhausted { .. } => 3,
                _ => 0,
            })
        }
        Command::Hom { graph, delta, out } => {
            let h = SimpleGraph::from_json(&parse_value(&read(&graph)?)?)?;
            emit(out.as_deref(), &serialize_lcl(&lcl_from_graph(&h, delta)?))?;
            Ok(0)
        }
        Command::Hdelta { delta, out } => {
            emit(out.as_deref(), &to_canonical(&build_h_delta(delta)?.to_json()))?;
            Ok(0)
        }
        Command::Homsolve { forest, delta, out } => {
            let f = SimpleGraph::from_json(&parse_value(&read(&forest)?)?)?;
            let h = build_h_delta(delta)?;
            let map = hom_solve_h_delta(&f, delta)?;
            emit(out.as_deref(), &to_canonical(&map.to_json(&f, &h)))?;
            Ok(0)
        }
    }
}

fn violation_json(g: &HalfEdgeGraph, lcl: &lcltrees::Lcl, v: &ColoringViolation) -> Value {
    let names = |ms: &lcltrees::LabelMultiset| -> Vec<String> {
        ms.labels().iter().map(|&l| lcl.label_name(l).to_string()).collect()
    };
    match v {
        ColoringViolation::Incomplete(missing) => json!({
            "kind": "incomplete",
            "half_edges": missing
                .iter()
                .map(|&(x, e)| json!([x.0, g.edge(e).name]))
                .collect::<Vec<_>>(),
        }),
        ColoringViolation::Edge { edge, observed } => json!({
            "kind": "edge", "edge": g.edge(*edge).name, "observed": names(observed),
        }),
        ColoringViolation::Vertex { vertex, observed } => json!({
            "kind": "vertex", "vertex": vertex.0, "observed": names(observed),
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail { code, err }) => {
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}
