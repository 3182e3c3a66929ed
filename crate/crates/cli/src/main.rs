//! `recon`: solve, cross-check and generate reconfiguration instances.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use recon::dp::{Answer, SolveOptions};
use recon::dp_ext::solve_any;
use recon::graph::{parse_graph, validate_instance, Graph, Instance};
use recon::hardness::{
    hword_to_vcr, parse_digraph, parse_thue, split_thue_rules, thue_to_hword, triangle_lift, Alphabet,
};
use recon::io::{external_ids, InstanceFile};
use recon::nice::{nicify, NiceTreeDecomposition};
use recon::oracle::{bfs_reconfig, oracle_answer};
use recon::planar::{shift_solve, LayeredInstance};
use recon::td::{min_fill_decompose, parse_td, TreeDecomposition};
use recon::witness::validate_witness;

#[derive(Parser)]
#[command(
    name = "recon",
    version,
    about = "Reconfiguration solvers for bounded-treewidth graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance with the tree decomposition DP or layer shifting.
    Solve(SolveArgs),
    /// Decide an instance by exhaustive search (at most 24 vertices).
    Oracle(OracleArgs),
    /// Generate instances from the hardness constructions.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Compute, nicify or validate tree decompositions.
    #[command(subcommand)]
    Td(TdCommand),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Dp,
    Shift,
}

#[derive(clap::Args)]
struct Output {
    /// Print the reconfiguration sequence, one `step: vertices` line per set.
    #[arg(long)]
    witness: bool,
    /// Print the echoed inputs and solver statistics.
    #[arg(long)]
    stats: bool,
    /// Print one JSON document instead of plain lines.
    #[arg(long)]
    json: bool,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    instance: PathBuf,
    /// PACE .td file; computed with the min-fill heuristic when omitted.
    #[arg(long)]
    td: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Engine::Dp)]
    engine: Engine,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(clap::Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    out: Output,
}

#[derive(Subcommand)]
enum GenCommand {
    /// H-word reachability to vertex cover reconfiguration: writes
    /// PREFIX.gr, PREFIX.json and PREFIX.td.
    Hword {
        #[arg(long)]
        digraph: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        /// Upper limit on the emitted length bound.
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Thue word problem to H-word reachability (splitting rules first when
    /// needed): writes the digraph to OUT and prints both encoded words.
    Thue2h {
        #[arg(long)]
        thue: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Split every rule that changes both positions; prints the new system.
    Splitrules {
        #[arg(long)]
        thue: PathBuf,
    },
    /// Vertex cover to feedback vertex set by replacing edges with
    /// triangles: writes PREFIX.gr and PREFIX.json.
    Trilift {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum TdCommand {
    /// Min-fill tree decomposition in PACE .td format.
    Compute {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Print the nice tree decomposition, one node per line, children first.
    Nicify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: Option<PathBuf>,
    },
    /// Check a decomposition against a graph.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
    },
}

enum Verdict {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Verdict> {
    match cli.command {
        Command::Solve(args) => solve(args),
        Command::Oracle(args) => oracle(args),
        Command::Gen(cmd) => generate(cmd),
        Command::Td(cmd) => td(cmd),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read(path)?).with_context(|| format!("graph file {}", path.display()))
}

fn load_instance(graph_path: &Path, inst_path: &Path) -> Result<(Instance, InstanceFile)> {
    let graph = load_graph(graph_path)?;
    let file = InstanceFile::parse(&read(inst_path)?).with_context(|| format!("{}", inst_path.display()))?;
    let inst = file
        .into_instance(graph)
        .with_context(|| format!("{}", inst_path.display()))?;
    Ok((inst, file))
}

fn load_td(graph: &Graph, path: &Path) -> Result<TreeDecomposition> {
    let (td, n) = parse_td(&read(path)?).with_context(|| format!("td file {}", path.display()))?;
    if n != graph.n() {
        bail!(
            "td file {}: header declares {n} vertices, graph has {}",
            path.display(),
            graph.n()
        );
    }
    Ok(td)
}

fn decomposition(graph: &Graph, td: Option<&Path>) -> Result<TreeDecomposition> {
    match td {
        Some(path) => load_td(graph, path),
        None => Ok(min_fill_decompose(graph)),
    }
}

fn nice(graph: &Graph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    td.validate(graph).context("tree decomposition")?;
    if td.bags.is_empty() {
        bail!("tree decomposition has no bags");
    }
    Ok(nicify(td))
}

/// The answer and witness, then the inputs and statistics when asked for.
struct Report {
    answer: Answer,
    inputs: Vec<(&'static str, Value)>,
    stats: Vec<(&'static str, Value)>,
}

impl Report {
    fn new(inst: &Instance, answer: Answer) -> Self {
        Report {
            answer,
            inputs: vec![
                ("problem", json!(inst.kind.name())),
                ("n", json!(inst.graph.n())),
                ("m", json!(inst.graph.m())),
                ("k", json!(inst.capacity)),
                ("ell", json!(inst.length)),
                ("mode", json!(inst.mode)),
            ],
            stats: Vec::new(),
        }
    }

    fn print(&self, out: &Output) -> Verdict {
        let yes = self.answer.is_yes();
        let word = if yes { "YES" } else { "NO" };
        let witness = self.answer.witness();
        if out.json {
            let mut doc = serde_json::Map::new();
            doc.insert("answer".into(), json!(word));
            if out.witness {
                let sets: Option<Vec<Vec<usize>>> = witness.map(|w| w.sets.iter().map(external_ids).collect());
                doc.insert("witness".into(), json!(sets));
            }
            if out.stats {
                let obj = |pairs: &[(&str, Value)]| {
                    Value::Object(pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect())
                };
                doc.insert("inputs".into(), obj(&self.inputs));
                doc.insert("stats".into(), obj(&self.stats));
            }
            println!("{}", serde_json::to_string_pretty(&Value::Object(doc)).expect("json"));
        } else {
            println!("{word}");
            if let (true, Some(w)) = (out.witness, witness) {
                print!("{}", w.to_lines());
            }
            if out.stats {
                for (k, v) in self.inputs.iter().chain(&self.stats) {
                    match v {
                        Value::String(s) => println!("{k} {s}"),
                        v => println!("{k} {v}"),
                    }
                }
            }
        }
        if yes {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

fn check(inst: &Instance, answer: &Answer) -> Result<()> {
    if let Some(w) = answer.witness() {
        validate_witness(inst, w).map_err(|e| anyhow!("internal error: witness rejected: {e}"))?;
    }
    Ok(())
}

fn solve(args: SolveArgs) -> Result<Verdict> {
    let (inst, file) = load_instance(&args.graph, &args.instance)?;
    let opts = SolveOptions {
        threads: args.threads,
        ..Default::default()
    };
    let start = Instant::now();
    let report = match args.engine {
        Engine::Dp => {
            let td = decomposition(&inst.graph, args.td.as_deref())?;
            let ntd = nice(&inst.graph, &td)?;
            let sol = solve_any(&inst, &ntd, &opts).context("solve")?;
            let s = &sol.stats;
            let stats = vec![
                ("engine", json!("dp")),
                ("sigma_runs", json!(s.sigma_runs)),
                ("lengths_tried", json!(s.lengths_tried)),
                ("max_table", json!(s.max_table)),
                ("max_bag", json!(s.max_bag)),
                ("nice_nodes", json!(s.nodes)),
                ("bound_ok", json!(s.bound_ok)),
            ];
            let answer = sol.answer;
            let mut r = Report::new(&inst, answer);
            r.inputs.push(("td_width", json!(td.width())));
            r.stats = stats;
            r
        }
        Engine::Shift => {
            let layering = file
                .layering(inst.graph.n())
                .context(args.instance.display().to_string())?
                .ok_or_else(|| anyhow!("instance file: field `outer` or `layers` is required by the shift engine"))?;
            let layered = LayeredInstance::from_layering(inst.clone(), &layering).context("layering")?;
            let sol = shift_solve(&layered, &opts).context("solve")?;
            let s = &sol.stats;
            let width = s.widths.iter().map(|&(_, w)| w).max();
            let mut r = Report::new(&inst, sol.answer);
            r.inputs.push(("td_width", json!(width)));
            r.stats = vec![
                ("engine", json!("shift")),
                ("layers", json!(layered.layers.iter().max().map_or(0, |l| l + 1))),
                ("offsets_skipped", json!(s.skipped)),
                (
                    "offsets_solved",
                    json!(s.widths.iter().map(|&(j, _)| j).collect::<Vec<_>>()),
                ),
                ("solved_at", json!(s.solved_at)),
            ];
            r
        }
    };
    check(&inst, &report.answer)?;
    if args.out.stats {
        eprintln!("wall_time {:.3}s", start.elapsed().as_secs_f64());
    }
    Ok(report.print(&args.out))
}

fn oracle(args: OracleArgs) -> Result<Verdict> {
    let (inst, _) = load_instance(&args.graph, &args.instance)?;
    validate_instance(&inst).context("instance")?;
    let start = Instant::now();
    let answer = oracle_answer(&inst)?.map_or(Answer::No, Answer::Yes);
    check(&inst, &answer)?;
    let mut report = Report::new(&inst, answer);
    if args.out.stats {
        let bfs = bfs_reconfig(&inst)?;
        report.stats = vec![("engine", json!("oracle")), ("shortest", json!(bfs.shortest))];
        eprintln!("wall_time {:.3}s", start.elapsed().as_secs_f64());
    }
    Ok(report.print(&args.out))
}

fn parse_word(alphabet: &Alphabet, field: &str, text: &str) -> Result<Vec<usize>> {
    alphabet.parse_word(text).with_context(|| format!("--{field}"))
}

fn generate(cmd: GenCommand) -> Result<Verdict> {
    match cmd {
        GenCommand::Hword {
            digraph,
            source,
            target,
            cap,
            out,
        } => {
            let h = parse_digraph(&read(&digraph)?).with_context(|| format!("digraph file {}", digraph.display()))?;
            let s = parse_word(&h.symbols, "source", &source)?;
            let t = parse_word(&h.symbols, "target", &target)?;
            let (inst, td) = hword_to_vcr(&h, &s, &t, cap)?;
            write(&with_ext(&out, "gr"), &inst.graph.to_pace())?;
            write(&with_ext(&out, "json"), &InstanceFile::from_instance(&inst).to_json())?;
            write(&with_ext(&out, "td"), &td.to_pace(inst.graph.n()))?;
            println!(
                "n {} m {} k {} ell {}",
                inst.graph.n(),
                inst.graph.m(),
                inst.capacity,
                inst.length
            );
        }
        GenCommand::Thue2h {
            thue,
            source,
            target,
            out,
        } => {
            let ts = parse_thue(&read(&thue)?).with_context(|| format!("thue file {}", thue.display()))?;
            let s = parse_word(&ts.symbols, "source", &source)?;
            let t = parse_word(&ts.symbols, "target", &target)?;
            let ts = if ts.is_split() { ts } else { split_thue_rules(&ts)? };
            let (h, ps, pt) = thue_to_hword(&ts, &s, &t)?;
            write(&out, &h.to_text())?;
            println!("source {}", h.format_word(&ps));
            println!("target {}", h.format_word(&pt));
        }
        GenCommand::Splitrules { thue } => {
            let ts = parse_thue(&read(&thue)?).with_context(|| format!("thue file {}", thue.display()))?;
            print!("{}", split_thue_rules(&ts)?.to_text());
        }
        GenCommand::Trilift { graph, instance, out } => {
            let (inst, _) = load_instance(&graph, &instance)?;
            let lifted = triangle_lift(&inst)?;
            write(&with_ext(&out, "gr"), &lifted.graph.to_pace())?;
            write(&with_ext(&out, "json"), &InstanceFile::from_instance(&lifted).to_json())?;
            println!("n {} m {}", lifted.graph.n(), lifted.graph.m());
        }
    }
    Ok(Verdict::Yes)
}

fn td(cmd: TdCommand) -> Result<Verdict> {
    match cmd {
        TdCommand::Compute { graph } => {
            let g = load_graph(&graph)?;
            print!("{}", min_fill_decompose(&g).to_pace(g.n()));
        }
        TdCommand::Nicify { graph, td } => {
            let g = load_graph(&graph)?;
            let ntd = nice(&g, &decomposition(&g, td.as_deref())?)?;
            for (i, node) in ntd.nodes.iter().enumerate() {
                let bag: Vec<String> = node.bag.iter().map(|v| (v + 1).to_string()).collect();
                let children: Vec<String> = node.children.iter().map(usize::to_string).collect();
                println!("{i} {} | {} | {}", node.kind, bag.join(" "), children.join(" "));
            }
        }
        TdCommand::Validate { graph, td } => {
            let g = load_graph(&graph)?;
            let dec = load_td(&g, &td)?;
            if let Err(e) = dec.validate(&g) {
                println!("INVALID {e}");
                return Ok(Verdict::No);
            }
            println!("OK width={}", dec.width());
        }
    }
    Ok(Verdict::Yes)
}
