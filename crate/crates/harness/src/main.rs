use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use secretary_core::agent::BipartiteInstance;
use secretary_core::classes::verify_hierarchy;
use secretary_core::format::{
    parse_assignment, parse_bipartite, parse_combination, parse_weighted, WeightedSystem,
};
use secretary_core::{CombinationSystem, Error, Independence, Result};
use secretary_harness::accept::{self, Options};
use secretary_harness::config::{Algorithm, ExperimentConfig, PRule, PSpec};
use secretary_harness::estimate::{Mode, RatioEstimate, DEFAULT_Z};
use secretary_harness::gen::{self, Params};
use secretary_harness::runs::{
    counting_params, run_assignment, run_edge, write_csv, AgentAlg, AgentSetup, Batch, EdgeAlg, OocsKind,
};

#[derive(Parser)]
#[command(name = "secretary", version, about = "Free-order secretary algorithms and their test harness")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated system or instance file.
    Generate(GenerateArgs),
    /// Minimal k per structural class of a system file.
    Classify(ClassifyArgs),
    /// Edge-arrival algorithms on a weighted system file.
    RunEdge(RunEdgeArgs),
    /// Agent-arrival algorithms on a bipartite instance file.
    RunAgent(RunAgentArgs),
    /// Unrelated-agent assignment on an assignment instance file.
    RunAssignment(RunAssignmentArgs),
    /// Run the acceptance suite; exits nonzero on any failure.
    Accept(AcceptArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// graphic, partition, uniform, laminar, transversal, intersection,
    /// knapsack, interval, bipartite, hypergraph, path, separation,
    /// two-system or v33.
    kind: gen::Kind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long)]
    ratio: Option<u32>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    len: Option<usize>,
    #[arg(long)]
    agents: Option<usize>,
    #[arg(long)]
    items: Option<usize>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    per_agent: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 3)]
    kmax: usize,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Flags shared by the run commands. Command-line values override the
/// config file.
#[derive(Args)]
struct Common {
    /// key = value experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// A number or `paper-optimal`.
    #[arg(long)]
    p: Option<PSpec>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Bound to test the estimate against.
    #[arg(long)]
    bound: Option<f64>,
    /// Probability mode: report per-OPT-element selection frequencies.
    #[arg(long)]
    per_element: bool,
    /// Per-trial CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct RunEdgeArgs {
    #[arg(long)]
    alg: Option<EdgeAlg>,
    #[arg(long)]
    system: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RunAgentArgs {
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Replacement agent-side system file.
    #[arg(long)]
    fa: Option<PathBuf>,
    /// Replacement item-side system file.
    #[arg(long)]
    fb: Option<PathBuf>,
    /// rank1, partition or combine.
    #[arg(long)]
    oocs: Option<OocsKind>,
    /// Run the core simulation instead of the online algorithm.
    #[arg(long)]
    core_sim: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RunAssignmentArgs {
    #[arg(long)]
    instance: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct AcceptArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Trial count for the 10^5-trial criteria; the others scale with it.
    #[arg(long)]
    trials: Option<u64>,
    /// Only this criterion.
    #[arg(long)]
    only: Option<usize>,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Input(e.to_string()))?;
    write(path, text.as_bytes())
}

/// Run settings after merging the config file and the flags.
struct Resolved {
    algorithm: Option<Algorithm>,
    source: Option<PathBuf>,
    oocs: Option<String>,
    p: Option<PSpec>,
    trials: u64,
    seed: u64,
    z: f64,
    bound: Option<f64>,
    mode: Mode,
    out: Option<PathBuf>,
    json: Option<PathBuf>,
}

fn resolve(c: &Common) -> Result<Resolved> {
    let cfg = c.config.as_deref().map(|p| ExperimentConfig::parse(&read(p)?)).transpose()?;
    let trials = c.trials.or(cfg.as_ref().map(|x| x.trials)).unwrap_or(10_000);
    if trials == 0 {
        return Err(Error::Precondition("trials must be positive".into()));
    }
    let mode = if c.per_element {
        Mode::Probability
    } else {
        cfg.as_ref().map_or(Mode::Utility, |x| x.mode)
    };
    Ok(Resolved {
        algorithm: cfg.as_ref().map(|x| x.algorithm),
        source: cfg.as_ref().map(|x| x.source.clone()),
        oocs: cfg.as_ref().map(|x| x.oocs.clone()),
        p: c.p.or(cfg.as_ref().map(|x| x.p)),
        trials,
        seed: c.seed.or(cfg.as_ref().map(|x| x.seed)).unwrap_or(0),
        z: cfg.as_ref().map_or(DEFAULT_Z, |x| x.z),
        bound: c.bound.or(cfg.as_ref().and_then(|x| x.bound)),
        mode,
        out: c.out.clone().or(cfg.as_ref().and_then(|x| x.out_csv.clone())),
        json: c.json.clone().or(cfg.as_ref().and_then(|x| x.out_json.clone())),
    })
}

fn source(flag: &Option<PathBuf>, r: &Resolved, what: &str) -> Result<PathBuf> {
    flag.clone()
        .or_else(|| r.source.clone())
        .ok_or_else(|| Error::Input(format!("no {what} file: pass it or set `source` in the config")))
}

#[derive(Serialize)]
struct Summary<'a> {
    command: &'a str,
    algorithm: String,
    source: String,
    p: f64,
    trials: u64,
    seed: u64,
    w_opt: f64,
    opt: Vec<usize>,
    mean_ratio: f64,
    estimate: RatioEstimate,
}

fn report(command: &str, algorithm: String, src: &Path, p: f64, r: &Resolved, batch: &Batch) -> Result<()> {
    let bound = r.bound.unwrap_or(0.0);
    let est = match r.mode {
        Mode::Utility => batch.utility(bound, r.z),
        Mode::Probability => batch.probability(bound, r.z),
    };
    let mean_ratio = batch.records.iter().map(|x| x.ratio).sum::<f64>() / batch.records.len() as f64;
    println!("{algorithm} on {} with p = {p:.4}", src.display());
    println!("w(OPT) = {:.4}, mean ratio {mean_ratio:.4}", batch.w_opt);
    if r.mode == Mode::Probability {
        for f in &est.per_element {
            println!("  element {:>3}: {:.4} ± {:.4}", f.element, f.frequency, f.half_width);
        }
    }
    if r.bound.is_some() {
        println!("{est}");
    }
    if let Some(path) = &r.out {
        let mut bytes = Vec::new();
        write_csv(&mut bytes, &batch.records)?;
        write(path, &bytes)?;
    }
    if let Some(path) = &r.json {
        write_json(
            path,
            &Summary {
                command,
                algorithm,
                source: src.display().to_string(),
                p,
                trials: r.trials,
                seed: r.seed,
                w_opt: batch.w_opt,
                opt: batch.opt.to_vec(),
                mean_ratio,
                estimate: est,
            },
        )?;
    }
    Ok(())
}

fn need_p(r: &Resolved) -> Result<PSpec> {
    r.p.ok_or_else(|| Error::Input("no p: pass --p or set it in the config".into()))
}

fn combination_rule(c: &CombinationSystem) -> Result<PRule> {
    Ok(if c.all_matroids() { PRule::Matchoid(c.matchoid_k()?) } else { PRule::Growth(c.growth_k()?) })
}

fn run_edge_cmd(a: RunEdgeArgs) -> Result<()> {
    let r = resolve(&a.common)?;
    let alg = match (a.alg, r.algorithm) {
        (Some(x), _) => x,
        (None, Some(Algorithm::Matroid)) => EdgeAlg::Matroid,
        (None, Some(Algorithm::General)) => EdgeAlg::General,
        (None, Some(Algorithm::CoreSim)) => EdgeAlg::CoreSim,
        (None, Some(other)) => return Err(Error::Input(format!("config algorithm {other:?} is not an edge algorithm"))),
        (None, None) => return Err(Error::Input("no algorithm: pass --alg or set it in the config".into())),
    };
    let src = source(&a.system, &r, "system")?;
    let ws = parse_weighted(&read(&src)?)?;
    let rule = match alg {
        EdgeAlg::Matroid => PRule::Matroid,
        _ => combination_rule(&ws.system)?,
    };
    let p = match alg {
        EdgeAlg::Matroid => r.p.unwrap_or(PSpec::PaperOptimal).resolve(rule),
        _ => need_p(&r)?.resolve(rule),
    };
    if alg == EdgeAlg::CoreSim {
        counting_params(&ws)?;
    }
    let batch = run_edge(&ws, alg, p, r.trials, r.seed)?;
    report("run-edge", format!("{alg:?}"), &src, p, &r, &batch)
}

fn run_agent_cmd(a: RunAgentArgs) -> Result<()> {
    let r = resolve(&a.common)?;
    let src = source(&a.instance, &r, "instance")?;
    let mut bi = parse_bipartite(&read(&src)?)?;
    if a.fa.is_some() || a.fb.is_some() {
        let side = |p: &Option<PathBuf>, cur: &CombinationSystem| -> Result<CombinationSystem> {
            match p {
                Some(p) => parse_combination(&read(p)?),
                None => Ok(cur.clone()),
            }
        };
        let (fa, fb) = (side(&a.fa, bi.fa())?, side(&a.fb, bi.fb())?);
        bi = BipartiteInstance::new(bi.ends().to_vec(), bi.weights().clone(), fa, fb)?;
    }
    let core_sim = a.core_sim || r.algorithm == Some(Algorithm::AgentCoreSim);
    let alg = if core_sim {
        AgentAlg::CoreSim
    } else {
        let kind = match (a.oocs, &r.oocs) {
            (Some(k), _) => k,
            (None, Some(s)) => s.parse().map_err(Error::Input)?,
            (None, None) => OocsKind::Partition,
        };
        AgentAlg::Oocs(kind)
    };
    let setup = AgentSetup::new(&bi)?;
    let k = setup.sys.k.ok_or_else(|| Error::Unsupported("unknown growth parameter for the edge system".into()))?;
    let rule = if setup.sys.both.all_matroids() { PRule::Matchoid(k) } else { PRule::Growth(k) };
    let p = need_p(&r)?.resolve(rule);
    let batch = setup.run(alg, p, r.trials, r.seed)?;
    report("run-agent", format!("{alg:?}"), &src, p, &r, &batch)
}

fn run_assignment_cmd(a: RunAssignmentArgs) -> Result<()> {
    let r = resolve(&a.common)?;
    let src = source(&a.instance, &r, "instance")?;
    let inst = parse_assignment(&read(&src)?)?;
    let p = r.p.unwrap_or(PSpec::PaperOptimal).resolve(PRule::Assignment(inst.k()));
    let batch = run_assignment(&inst, p, r.trials, r.seed)?;
    report("run-assignment", "Assignment".into(), &src, p, &r, &batch)
}

fn generate_cmd(a: GenerateArgs) -> Result<()> {
    let d = Params::default();
    let params = Params {
        n: a.n.unwrap_or(d.n),
        k: a.k.unwrap_or(d.k),
        vertices: a.vertices.unwrap_or(d.vertices),
        ratio: a.ratio.unwrap_or(d.ratio),
        a: a.a.unwrap_or(d.a),
        b: a.b.unwrap_or(d.b),
        len: a.len.unwrap_or(d.len),
        agents: a.agents.unwrap_or(d.agents),
        items: a.items.unwrap_or(d.items),
        degree: a.degree.unwrap_or(d.degree),
        per_agent: a.per_agent.unwrap_or(d.per_agent),
    };
    let text = gen::generate(a.kind, &params, a.seed)?;
    match a.out {
        Some(p) => write(&p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn classify_cmd(a: ClassifyArgs) -> Result<()> {
    let text = read(&a.file)?;
    let comb = match parse_weighted(&text) {
        Ok(WeightedSystem { system, .. }) => system,
        Err(_) => parse_combination(&text)?,
    };
    let matchoid = if comb.all_matroids() { comb.matchoid_k().ok() } else { None };
    let h = match comb.components() {
        [c] if c.members.len() == comb.ground_size() => verify_hierarchy(&*c.system, a.kmax, matchoid)?,
        _ => verify_hierarchy(&comb, a.kmax, matchoid)?,
    };
    let show = |v: Option<usize>| v.map_or(format!("> {}", a.kmax), |k| k.to_string());
    println!("{} elements, kmax = {}", comb.ground_size(), a.kmax);
    println!("{:<18} minimal k", "class");
    println!("{:<18} {}", "k-system", show(h.system));
    println!("{:<18} {}", "k-extendible", show(h.extendible));
    println!("{:<18} {}", "k-circuit-bounded", show(h.circuit_bounded));
    println!("{:<18} {}", "k-growth", show(h.growth));
    if let Some(m) = h.matchoid {
        println!("{:<18} {m}", "k-matchoid");
    }
    for v in &h.violations {
        println!("hierarchy violation: {v}");
    }
    if let Some(p) = &a.out {
        write_json(p, &h)?;
    }
    Ok(())
}

fn accept_cmd(a: AcceptArgs) -> Result<bool> {
    let d = Options::default();
    let opts = Options {
        seed: a.seed.unwrap_or(d.seed),
        scale: a.trials.map_or(1.0, |t| t as f64 / 100_000.0),
        ..d
    };
    let ids: Vec<usize> = match a.only {
        Some(i) => vec![i],
        None => (1..=accept::NAMES.len()).collect(),
    };
    let mut outcomes = Vec::new();
    for id in ids {
        let o = accept::run_one(id, &opts);
        println!("{o}");
        outcomes.push(o);
    }
    if let Some(p) = &a.out {
        write_json(p, &outcomes)?;
    }
    Ok(outcomes.iter().all(|o| o.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Generate(a) => generate_cmd(a).map(|_| true),
        Cmd::Classify(a) => classify_cmd(a).map(|_| true),
        Cmd::RunEdge(a) => run_edge_cmd(a).map(|_| true),
        Cmd::RunAgent(a) => run_agent_cmd(a).map(|_| true),
        Cmd::RunAssignment(a) => run_assignment_cmd(a).map(|_| true),
        Cmd::Accept(a) => accept_cmd(a),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
