//! Command-line front end: solve, generate, check and model check.
//!
//! Exit codes: 0 for yes/valid/true, 1 for no/invalid/false, 2 for errors.
//! Diagnostics go to standard error; results to standard output.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use discovery_core::instance::{read_instance_str, InstanceError};
use discovery_core::logic::{ClosureChecker, MoveModel};
use discovery_core::nd::{solve_nd, NdOptions};
use discovery_core::oracle::{solve_bfs, solve_enumerate, Limits, DEFAULT_LIMIT};
use discovery_core::reductions::{
    check_conditions, generate, verify_witness, Family, GenOptions, GeneratedInstance, Source,
};
use discovery_core::tw::{read_td, solve_tw, solve_tw_auto, TwOptions};
use discovery_core::{
    apply_sequence, model_check, Configuration, DiscoveryInstance, TransformationSequence, Verdict,
};

#[derive(Parser)]
#[command(
    name = "discovery",
    version,
    about = "Token sliding solution discovery on colored graphs"
)]
struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a discovery instance.
    Solve {
        #[arg(long, value_enum)]
        engine: Engine,
        #[arg(long)]
        instance: PathBuf,
        /// Tree decomposition in PACE `.td` format (tw engine only).
        #[arg(long)]
        td: Option<PathBuf>,
        /// Search-space limit of the exhaustive engines.
        #[arg(long, env = "DISCOVERY_LIMIT", default_value_t = DEFAULT_LIMIT)]
        limit: u64,
    },
    /// Build a hardness construction from a source instance.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        source: PathBuf,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Scale of the arc supply gadgets.
        #[arg(long)]
        sigma: Option<u64>,
        /// Also write the graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Validate an instance, a sequence, family conditions or a parameter witness.
    Check {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long)]
        instance: PathBuf,
        /// JSON array of `[from, to]` slides.
        #[arg(long)]
        sequence: Option<PathBuf>,
        /// Token set to check the conditions on, instead of the start set.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
    },
    /// Evaluate the instance formula on a token set.
    Mc {
        #[arg(long)]
        instance: PathBuf,
        /// Token set; the start set when absent.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Oracle,
    Bfs,
    Nd,
    Tw,
    Closure,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Instance,
    Sequence,
    Conditions,
    Witness,
}

/// Outcome of a command: a printable result and whether it is positive.
struct Report {
    positive: bool,
    text: String,
    value: Value,
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_instance(path: &Path) -> Result<DiscoveryInstance, String> {
    read_instance_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_generated(path: &Path) -> Result<GeneratedInstance, String> {
    GeneratedInstance::from_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_sequence(path: &Path) -> Result<TransformationSequence, String> {
    serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn slides_text(seq: &TransformationSequence) -> String {
    seq.slides
        .iter()
        .map(|s| format!("{}->{}", s.from, s.to))
        .collect::<Vec<_>>()
        .join(" ")
}

fn solve(
    engine: Engine,
    inst: &DiscoveryInstance,
    td: Option<&Path>,
    limit: u64,
) -> Result<Report, String> {
    let limits = Limits::uniform(limit);
    let verdict = match engine {
        Engine::Oracle => solve_enumerate(inst, &limits),
        Engine::Bfs => solve_bfs(inst, &limits),
        Engine::Nd => solve_nd(inst, &NdOptions::default()),
        Engine::Tw => match td {
            Some(p) => {
                let td = read_td(p).map_err(|e| format!("{}: {e}", p.display()))?;
                let nice = td.to_nice(0, false).map_err(|e| e.to_string())?;
                solve_tw(inst, &nice, &TwOptions::default())
            }
            None => solve_tw_auto(inst, &TwOptions::default()),
        },
        Engine::Closure => return solve_closure(inst),
    }
    .map_err(|e| e.to_string())?;
    let mut value = serde_json::to_value(&verdict).expect("serializable");
    let text = match &verdict {
        Verdict::No => "no".to_string(),
        Verdict::Yes(s) => {
            let mut t = format!("yes\ncost {}", s.cost);
            if let Some(target) = &s.target {
                t += &format!("\ntarget {target}");
            }
            if let Some(seq) = &s.sequence {
                t += &format!("\nsequence {}", slides_text(seq));
            }
            t
        }
    };
    value["budget"] = json!(inst.budget);
    Ok(Report {
        positive: verdict.is_yes(),
        text,
        value,
    })
}

/// Budget closure: expanded formula for small budgets, nearest-witness search otherwise.
fn solve_closure(inst: &DiscoveryInstance) -> Result<Report, String> {
    let mut checker = ClosureChecker::auto(
        &inst.graph,
        &inst.formula,
        inst.budget as i64,
        MoveModel::Slide,
    )
    .map_err(|e| e.to_string())?;
    if checker.is_lazy() {
        return Ok(match checker.witness(&inst.start) {
            Some((target, cost)) => Report {
                positive: true,
                text: format!("yes\ncost {cost}\ntarget {target}"),
                value: json!({"verdict": "yes", "cost": cost, "target": target, "budget": inst.budget}),
            },
            None => Report {
                positive: false,
                text: "no".into(),
                value: json!({"verdict": "no", "budget": inst.budget}),
            },
        });
    }
    let yes = checker.check(&inst.start);
    let word = if yes { "yes" } else { "no" };
    Ok(Report {
        positive: yes,
        text: word.into(),
        value: json!({"verdict": word, "budget": inst.budget}),
    })
}

fn generate_cmd(
    family: Family,
    source: &Path,
    out: Option<&Path>,
    sigma: Option<u64>,
    dot: Option<&Path>,
) -> Result<Report, String> {
    let src =
        Source::from_json(&read(source)?).map_err(|e| format!("{}: {e}", source.display()))?;
    let gen = generate(family, &src, &GenOptions { sigma }).map_err(|e| e.to_string())?;
    let text = gen.to_json();
    if let Some(p) = dot {
        fs::write(p, gen.graph().to_dot()).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    let summary = json!({
        "family": family.to_string(),
        "n": gen.graph().n(),
        "edges": gen.graph().edges().len(),
        "tokens": gen.instance.k(),
        "budget": gen.instance.budget,
    });
    match out {
        Some(p) => {
            fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display()))?;
            let line = format!(
                "{family}: {} nodes, {} edges, {} tokens, budget {} -> {}",
                gen.graph().n(),
                gen.graph().edges().len(),
                gen.instance.k(),
                gen.instance.budget,
                p.display()
            );
            Ok(Report {
                positive: true,
                text: line,
                value: summary,
            })
        }
        // Without an output file the instance itself is the result.
        None => Ok(Report {
            positive: true,
            text: text.trim_end().to_string(),
            value: serde_json::from_str(&text).expect("valid JSON"),
        }),
    }
}

fn check_instance(path: &Path) -> Result<Report, String> {
    match read_instance_str(&read(path)?) {
        Ok(inst) => Ok(Report {
            positive: true,
            text: format!(
                "valid: {} nodes, {} edges, {} tokens, budget {}",
                inst.graph.n(),
                inst.graph.edges().len(),
                inst.k(),
                inst.budget
            ),
            value: json!({"valid": true, "n": inst.graph.n(), "edges": inst.graph.edges().len(), "tokens": inst.k(), "budget": inst.budget}),
        }),
        Err(InstanceError::Io(e)) => Err(format!("{}: {e}", path.display())),
        Err(e) => Ok(Report {
            positive: false,
            text: format!("invalid: {e}"),
            value: json!({"valid": false, "violation": e.to_string()}),
        }),
    }
}

fn check_sequence(
    inst: &DiscoveryInstance,
    seq: &TransformationSequence,
) -> Result<Report, String> {
    let target = match apply_sequence(&inst.graph, &inst.start, seq) {
        Ok(t) => t,
        Err(e) => {
            let kind = format!("{e:?}")
                .split([' ', '{', '('])
                .next()
                .unwrap_or_default()
                .to_string();
            return Ok(Report {
                positive: false,
                text: format!("invalid: {kind}: {e}"),
                value: json!({"valid": false, "violation": kind, "detail": e.to_string()}),
            });
        }
    };
    let within = seq.len() <= inst.budget;
    let satisfies =
        model_check(&inst.graph, &inst.formula, &target, &[]).map_err(|e| e.to_string())?;
    let violation = if !within {
        Some(format!(
            "OverBudget: {} slides exceed the budget {}",
            seq.len(),
            inst.budget
        ))
    } else if !satisfies {
        Some("FormulaFalse: the final configuration does not satisfy the formula".to_string())
    } else {
        None
    };
    let value = json!({"valid": violation.is_none(), "length": seq.len(), "budget": inst.budget, "target": target, "satisfies": satisfies, "violation": violation});
    let text = match &violation {
        None => format!(
            "valid: {} slides within budget {}, target {target} satisfies the formula",
            seq.len(),
            inst.budget
        ),
        Some(v) => format!("invalid: {v}"),
    };
    Ok(Report {
        positive: violation.is_none(),
        text,
        value,
    })
}

fn check_conditions_cmd(gen: &GeneratedInstance, config: &Configuration) -> Report {
    let report = check_conditions(gen, config);
    let text = match report.violations.first() {
        None => "all conditions hold".to_string(),
        Some(v) => format!("violated: {} ({})", report.failed().join(", "), v.detail),
    };
    Report {
        positive: report.ok(),
        text,
        value: json!({"ok": report.ok(), "failed": report.failed(), "violations": report.violations}),
    }
}

fn check_witness(gen: &GeneratedInstance) -> Report {
    let w = verify_witness(gen);
    let text = format!(
        "{} {}: value {}, bound {} ({})",
        w.kind,
        if w.ok { "ok" } else { "invalid" },
        w.value,
        w.bound,
        w.detail
    );
    Report {
        positive: w.ok,
        text,
        value: serde_json::to_value(&w).expect("serializable"),
    }
}

fn config_from(set: Option<Vec<usize>>, inst: &DiscoveryInstance) -> Result<Configuration, String> {
    let c = set
        .map(Configuration::new)
        .unwrap_or_else(|| inst.start.clone());
    c.check_range(inst.graph.n()).map_err(|e| e.to_string())?;
    Ok(c)
}

fn run(cli: Cli) -> Result<Report, String> {
    match cli.command {
        Command::Solve {
            engine,
            instance,
            td,
            limit,
        } => solve(engine, &load_instance(&instance)?, td.as_deref(), limit),
        Command::Generate {
            family,
            source,
            out,
            sigma,
            dot,
        } => generate_cmd(family, &source, out.as_deref(), sigma, dot.as_deref()),
        Command::Check {
            what,
            instance,
            sequence,
            set,
        } => match what {
            What::Instance => check_instance(&instance),
            What::Sequence => {
                let path = sequence.ok_or("--what sequence needs --sequence")?;
                check_sequence(&load_instance(&instance)?, &load_sequence(&path)?)
            }
            What::Conditions => {
                let gen = load_generated(&instance)?;
                let config = match sequence {
                    Some(p) => {
                        apply_sequence(gen.graph(), &gen.instance.start, &load_sequence(&p)?)
                            .map_err(|e| e.to_string())?
                    }
                    None => config_from(set, &gen.instance)?,
                };
                Ok(check_conditions_cmd(&gen, &config))
            }
            What::Witness => Ok(check_witness(&load_generated(&instance)?)),
        },
        Command::Mc { instance, set } => {
            let inst = load_instance(&instance)?;
            let config = config_from(set, &inst)?;
            let truth =
                model_check(&inst.graph, &inst.formula, &config, &[]).map_err(|e| e.to_string())?;
            Ok(Report {
                positive: truth,
                text: truth.to_string(),
                value: json!({"value": truth, "set": config}),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let json = cli.json;
    match run(cli) {
        Ok(r) => {
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&r.value).expect("serializable")
                );
            } else {
                println!("{}", r.text);
            }
            ExitCode::from(if r.positive { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
