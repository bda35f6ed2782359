mod output;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use degplanar::appearance::{cutable_count, find_appearances, find_two_appearances};
use degplanar::enumeration::{census_sharded, enumerate_class, growth_ratios, ClassCensus, MAX_ORDER};
use degplanar::graph6;
use degplanar::sampler::{sample_sequence, uniformity_test, ChainConfig, MoveWeights};
use degplanar::surgery::search::complete_to_degrees;
use degplanar::surgery::{
    attach_appearance, detach_appearance, merge_components, replace_edge_with_gadget, two_appearance_detach,
    AttachTarget, MergeArgs, SurgeryTrace,
};
use degplanar::verify::{
    verify_cascade, verify_k5e, verify_lemma1_class, verify_lemma1_sweep, verify_supermultiplicativity,
    verify_table1_row, VerificationReport,
};
use degplanar::{ClassSpec, LabelledGraph};
use num_rational::Ratio;
use output::{json, Sink};
use serde::Serialize;
use serde_json::json as j;

#[derive(Parser)]
#[command(name = "degplanar", version, about = "Labelled planar graphs with a degree window")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output file; a manifest is written beside it. Defaults to stdout, or to a file
    /// under $DEGPLANAR_OUT when that is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    shards: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Graph6,
}

#[derive(Args, Clone, Copy)]
struct Window {
    #[arg(long, default_value_t = 0, global = true)]
    d: usize,
    /// Maximum degree; defaults to n - 1.
    #[arg(long = "D", global = true)]
    max_deg: Option<usize>,
}

#[derive(Args, Clone, Copy)]
struct ClassArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    window: Window,
}

impl ClassArgs {
    fn spec(&self) -> Result<ClassSpec> {
        let max_deg = self.window.max_deg.unwrap_or(self.n.saturating_sub(1));
        Ok(ClassSpec::new(self.n, self.window.d, max_deg)?)
    }
}

impl Window {
    fn spec(&self, n: usize) -> Result<ClassSpec> {
        Ok(ClassSpec::new(n, self.d, self.max_deg.unwrap_or(n.saturating_sub(1)))?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// List every member of P(n, d, D).
    Enumerate(ClassArgs),
    /// Counts of P(n, d, D) by number of components.
    Census(ClassArgs),
    /// (|P(n, d, D)| / n!)^(1/n) over a range of n.
    Growth {
        #[command(flatten)]
        window: Window,
        #[arg(long, default_value_t = 1)]
        nmin: usize,
        #[arg(long, default_value_t = 7)]
        nmax: usize,
    },
    /// Appearances of a pattern in each graph6 line on stdin.
    Appearances {
        /// Pattern in graph6.
        #[arg(long = "H")]
        h: String,
        #[arg(long, default_value_t = 0)]
        d: usize,
        /// Report 2-appearances instead.
        #[arg(long)]
        two: bool,
    },
    /// Apply one rewrite to the graph6 graph on stdin.
    Surgery {
        #[command(subcommand)]
        op: SurgeryOp,
        #[command(flatten)]
        window: Window,
    },
    /// Exhaustive checks of counting inequalities on exact classes.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Run a Metropolis chain with uniform target on the class.
    Sample {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        chain: ChainArgs,
        /// Number of samples after burn-in; without it, one sample after --steps steps.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        /// Start state in graph6 (default: first enumerated member, or a searched one).
        #[arg(long)]
        start: Option<String>,
    },
    /// Chi-square test of chain samples against the exact class.
    Uniformity {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
}

#[derive(Args, Clone)]
struct ChainArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    burn_in: Option<u64>,
    #[arg(long)]
    thinning: Option<u64>,
    /// insert,delete,two-switch
    #[arg(long, default_value = "1,1,1")]
    weights: String,
}

impl ChainArgs {
    fn config(&self, spec: ClassSpec, steps: u64) -> Result<ChainConfig> {
        let w: Vec<f64> = self
            .weights
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .context("--weights takes three numbers")?;
        let [insert, delete, two_switch] = w[..] else {
            bail!("--weights takes three numbers");
        };
        Ok(ChainConfig {
            spec,
            steps,
            seed: self.seed,
            weights: MoveWeights {
                insert,
                delete,
                two_switch,
            },
            burn_in: self.burn_in,
            thinning: self.thinning,
        })
    }
}

#[derive(Subcommand)]
enum SurgeryOp {
    /// Join u and v, in different components and both below D.
    MergeA {
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
    },
    /// Swap the cycle edge uv and the edge wx of another component for uw and xv.
    MergeB {
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        x: usize,
    },
    /// Route the cycle edge uv through the isolated vertex w.
    MergeC {
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        w: usize,
    },
    /// Hang a copy of H off a vertex v below D.
    AttachFree {
        #[arg(long = "H")]
        h: String,
        #[arg(long)]
        v: usize,
    },
    /// Hang a copy of H off v in place of the cycle edge uv.
    AttachCycle {
        #[arg(long = "H")]
        h: String,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
    },
    /// Detach the `index`-th cut-able appearance of H.
    Detach {
        #[arg(long = "H")]
        h: String,
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Pair `a,b` inside the block to insert.
        #[arg(long)]
        complete: Option<String>,
    },
    /// Close off the `index`-th 2-appearance of J (D-regular input).
    TwoDetach {
        #[arg(long = "H")]
        h: String,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Replace edge uv by the gadget for --D.
    Gadget {
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Component-count cascade and connectivity lower bound on one class.
    Cascade(ClassArgs),
    /// Two-component counting identity for component sizes i and j.
    Supermult {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[command(flatten)]
        window: Window,
    },
    /// Short cycles in graphs with few low-degree vertices.
    Lemma1 {
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        window: Window,
        #[arg(long, default_value = "1/43")]
        k: String,
        /// Every class on at most this many vertices (with D as the degree cap).
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Exact appearance and component probabilities of a pattern H.
    Table1 {
        #[command(flatten)]
        window: Window,
        /// Orders, comma separated.
        #[arg(long, default_value = "4,6,8")]
        ns: String,
        #[arg(long = "H")]
        h: String,
    },
    /// K5 minus an edge has no small 4-regular planar supergraph.
    K5e {
        #[arg(long, default_value_t = 11)]
        nmax: usize,
    },
}

/// Usage and engine errors exit 2; a substantive verification failure exits 1.
enum Done {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Done::Ok) => ExitCode::SUCCESS,
        Ok(Done::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn sink(cli: &Cli, command: &str, parameters: serde_json::Value, seed: Option<u64>, extension: &'static str) -> Sink {
    Sink {
        command: command.into(),
        parameters,
        seed,
        out: cli.out.clone(),
        extension,
        started: Instant::now(),
    }
}

fn ext(format: Format) -> &'static str {
    match format {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Graph6 => "g6",
    }
}

fn decode(text: &str) -> Result<LabelledGraph> {
    graph6::decode(text.trim()).with_context(|| format!("bad graph6 {text:?}"))
}

fn encode(g: &LabelledGraph) -> String {
    graph6::encode(g).expect("graph within graph6 range")
}

fn stdin_graphs() -> Result<Vec<LabelledGraph>> {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text)?;
    text.lines().filter(|l| !l.trim().is_empty()).map(decode).collect()
}

fn reject_format(format: Format, allowed: &[Format], command: &str) -> Result<()> {
    if !allowed.contains(&format) {
        bail!("--format {format:?} is not available for {command}");
    }
    Ok(())
}

#[derive(Serialize)]
struct CensusOut {
    #[serde(flatten)]
    census: ClassCensus,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn census_note(spec: &ClassSpec, total: u64) -> Option<String> {
    if spec.parity_obstructed() {
        Some(format!(
            "n*D = {} is odd: no {}-regular graph on {} vertices exists",
            spec.n * spec.max_deg,
            spec.max_deg,
            spec.n
        ))
    } else if total == 0 {
        Some("class is empty".into())
    } else {
        None
    }
}

fn verification(cli: &Cli, name: &str, params: serde_json::Value, report: &VerificationReport) -> Result<Done> {
    reject_format(cli.format.unwrap_or(Format::Json), &[Format::Json], "verify")?;
    sink(cli, &format!("verify {name}"), params, None, "json").emit(&json(report)?)?;
    Ok(if report.passed() { Done::Ok } else { Done::Failed })
}

fn parse_pair(text: &str) -> Result<(usize, usize)> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<Result<_, _>>()
        .with_context(|| format!("expected a,b; got {text:?}"))?;
    match parts[..] {
        [a, b] => Ok((a, b)),
        _ => bail!("expected a,b; got {text:?}"),
    }
}

/// A member of the class to start a chain from.
fn start_state(spec: &ClassSpec) -> Result<LabelledGraph> {
    if spec.n <= MAX_ORDER {
        if let Some(g) = enumerate_class(spec)?.next() {
            return Ok(g);
        }
        bail!("{spec} is empty");
    }
    if spec.min_deg == 0 {
        return Ok(LabelledGraph::empty(spec.n));
    }
    let mut targets = vec![spec.min_deg; spec.n];
    if spec.n * spec.min_deg % 2 == 1 {
        if spec.min_deg == spec.max_deg {
            bail!("{spec} is empty (odd degree sum)");
        }
        targets[0] += 1;
    }
    if spec.n > degplanar::surgery::search::SEARCH_CAP {
        bail!("no default start state above {} vertices; pass --start", degplanar::surgery::search::SEARCH_CAP);
    }
    complete_to_degrees(&LabelledGraph::empty(spec.n), &targets, 1)
        .with_context(|| format!("no start state found for {spec}; pass --start"))
}

fn run(cli: Cli) -> Result<Done> {
    match &cli.command {
        Command::Enumerate(args) => {
            let spec = args.spec()?;
            let format = cli.format.unwrap_or(Format::Graph6);
            let members: Vec<String> = enumerate_class(&spec)?.map(|g| encode(&g)).collect();
            let body = match format {
                Format::Graph6 => members.iter().map(|s| format!("{s}\n")).collect(),
                Format::Csv => std::iter::once("index,graph6\n".to_string())
                    .chain(members.iter().enumerate().map(|(i, s)| format!("{i},{s}\n")))
                    .collect(),
                Format::Json => json(&j!({ "spec": spec, "count": members.len(), "graphs": members }))?,
            };
            sink(&cli, "enumerate", j!({ "spec": spec }), None, ext(format)).emit(&body)?;
        }
        Command::Census(args) => {
            let spec = args.spec()?;
            let format = cli.format.unwrap_or(Format::Json);
            reject_format(format, &[Format::Json, Format::Csv], "census")?;
            let census = census_sharded(&spec, cli.shards)?;
            let body = if format == Format::Csv {
                std::iter::once("components,count\n".to_string())
                    .chain(census.by_components.iter().map(|(k, c)| format!("{k},{c}\n")))
                    .collect()
            } else {
                let note = census_note(&spec, census.total);
                json(&CensusOut { census, note })?
            };
            sink(&cli, "census", j!({ "spec": spec, "shards": cli.shards }), None, ext(format)).emit(&body)?;
        }
        Command::Growth { window, nmin, nmax } => {
            let format = cli.format.unwrap_or(Format::Json);
            reject_format(format, &[Format::Json, Format::Csv], "growth")?;
            let seq = growth_ratios(window.d, window.max_deg, *nmin..=*nmax)?;
            let body = if format == Format::Csv {
                std::iter::once("n,count,ratio\n".to_string())
                    .chain(seq.entries.iter().map(|e| {
                        format!("{},{},{}\n", e.n, e.count, e.ratio.map_or(String::new(), |r| r.to_string()))
                    }))
                    .collect()
            } else {
                json(&seq)?
            };
            let params = j!({ "d": window.d, "D": window.max_deg, "nmin": nmin, "nmax": nmax });
            sink(&cli, "growth", params, None, ext(format)).emit(&body)?;
        }
        Command::Appearances { h, d, two } => {
            reject_format(cli.format.unwrap_or(Format::Json), &[Format::Json], "appearances")?;
            let pattern = decode(h)?;
            let mut results = Vec::new();
            for g in stdin_graphs()? {
                let entry = if *two {
                    j!({ "graph": encode(&g), "two_appearances": find_two_appearances(&g, &pattern)? })
                } else {
                    j!({
                        "graph": encode(&g),
                        "appearances": find_appearances(&g, &pattern, *d)?,
                        "cutable": cutable_count(&g, &pattern, *d)?,
                    })
                };
                results.push(entry);
            }
            sink(&cli, "appearances", j!({ "H": h, "d": d, "two": two }), None, "json").emit(&json(&results)?)?;
        }
        Command::Surgery { op, window } => return surgery(&cli, op, window),
        Command::Verify(cmd) => return verify(&cli, cmd),
        Command::Sample {
            class,
            chain,
            count,
            steps,
            start,
        } => {
            let spec = class.spec()?;
            let cfg = chain.config(spec, *steps)?;
            let start = match start {
                Some(text) => decode(text)?,
                None => start_state(&spec)?,
            };
            let samples: Vec<LabelledGraph> = match count {
                Some(c) => sample_sequence(&cfg, start, *c)?,
                None => vec![degplanar::sampler::mcmc_sample(&cfg, start)?],
            };
            let format = cli.format.unwrap_or(Format::Graph6);
            reject_format(format, &[Format::Json, Format::Graph6], "sample")?;
            let encoded: Vec<String> = samples.iter().map(encode).collect();
            let body = if format == Format::Graph6 {
                encoded.iter().map(|s| format!("{s}\n")).collect()
            } else {
                let coverage = if spec.n <= MAX_ORDER {
                    let class_size = census_sharded(&spec, cli.shards)?.total;
                    let distinct: std::collections::BTreeSet<&String> = encoded.iter().collect();
                    j!({ "class_size": class_size, "distinct_samples": distinct.len() })
                } else {
                    j!({ "unavailable": "class is not enumerable; irreducibility of the move set is not established for this window" })
                };
                json(&j!({ "config": cfg, "samples": encoded, "coverage": coverage }))?
            };
            sink(&cli, "sample", j!({ "config": cfg, "count": count }), Some(chain.seed), ext(format)).emit(&body)?;
        }
        Command::Uniformity { class, chain, samples } => {
            reject_format(cli.format.unwrap_or(Format::Json), &[Format::Json], "uniformity")?;
            let spec = class.spec()?;
            let cfg = chain.config(spec, 0)?;
            let report = uniformity_test(&spec, *samples, &cfg)?;
            let params = j!({ "config": cfg, "samples": samples });
            sink(&cli, "uniformity", params, Some(chain.seed), "json").emit(&json(&report)?)?;
        }
    }
    Ok(Done::Ok)
}

fn surgery(cli: &Cli, op: &SurgeryOp, window: &Window) -> Result<Done> {
    let format = cli.format.unwrap_or(Format::Json);
    reject_format(format, &[Format::Json, Format::Graph6], "surgery")?;
    let graphs = stdin_graphs()?;
    let [g] = &graphs[..] else {
        bail!("surgery reads exactly one graph6 line on stdin, got {}", graphs.len());
    };
    let spec = window.spec(g.order())?;
    let (out, trace): (LabelledGraph, SurgeryTrace) = match op {
        SurgeryOp::MergeA { u, v } => merge_components(g, &spec, MergeArgs::A { u: *u, v: *v })?,
        SurgeryOp::MergeB { u, v, w, x } => merge_components(
            g,
            &spec,
            MergeArgs::B {
                u: *u,
                v: *v,
                w: *w,
                x: *x,
            },
        )?,
        SurgeryOp::MergeC { u, v, w } => merge_components(g, &spec, MergeArgs::C { u: *u, v: *v, w: *w })?,
        SurgeryOp::AttachFree { h, v } => {
            let h = decode(h)?;
            let target = window.spec(g.order() + h.order())?;
            attach_appearance(g, &target, &h, AttachTarget::Free { v: *v })?
        }
        SurgeryOp::AttachCycle { h, u, v } => {
            let h = decode(h)?;
            let target = window.spec(g.order() + h.order())?;
            attach_appearance(g, &target, &h, AttachTarget::Cycle { u: *u, v: *v })?
        }
        SurgeryOp::Detach { h, index, complete } => {
            let h = decode(h)?;
            let apps: Vec<_> = find_appearances(g, &h, spec.min_deg)?
                .into_iter()
                .filter(|a| a.cutable)
                .collect();
            let app = apps
                .get(*index)
                .with_context(|| format!("only {} cut-able appearances", apps.len()))?;
            let completion = complete.as_deref().map(parse_pair).transpose()?;
            detach_appearance(g, &spec, app, completion)?
        }
        SurgeryOp::TwoDetach { h, index } => {
            let h = decode(h)?;
            let recs = find_two_appearances(g, &h)?;
            let rec = recs
                .get(*index)
                .with_context(|| format!("only {} 2-appearances", recs.len()))?;
            two_appearance_detach(g, &spec, rec)?
        }
        SurgeryOp::Gadget { u, v } => {
            let Some(max_deg) = window.max_deg else {
                bail!("gadget needs --D");
            };
            replace_edge_with_gadget(g, (*u, *v), max_deg)?
        }
    };
    let body = if format == Format::Graph6 {
        format!("{}\n", encode(&out))
    } else {
        json(&j!({ "input": encode(g), "output": encode(&out), "trace": trace }))?
    };
    let params = j!({ "input": encode(g), "d": window.d, "D": window.max_deg });
    sink(cli, "surgery", params, None, ext(format)).emit(&body)?;
    Ok(Done::Ok)
}

fn verify(cli: &Cli, cmd: &VerifyCmd) -> Result<Done> {
    match cmd {
        VerifyCmd::Cascade(args) => {
            let spec = args.spec()?;
            verification(cli, "cascade", j!({ "spec": spec }), &verify_cascade(&spec)?)
        }
        VerifyCmd::Supermult { i, j: jj, window } => {
            let Some(max_deg) = window.max_deg else {
                bail!("supermult needs --D");
            };
            let report = verify_supermultiplicativity(*i, *jj, window.d, max_deg)?;
            verification(cli, "supermult", j!({ "i": i, "j": jj, "d": window.d, "D": max_deg }), &report)
        }
        VerifyCmd::Lemma1 { n, window, k, nmax } => {
            let (p, q) = parse_fraction(k)?;
            let k = Ratio::new(p, q);
            let report = match (n, nmax) {
                (Some(n), None) => verify_lemma1_class(&window.spec(*n)?, k)?,
                (None, Some(nmax)) => verify_lemma1_sweep(*nmax, window.max_deg.unwrap_or(7), k)?,
                _ => bail!("lemma1 takes exactly one of --n and --nmax"),
            };
            let params = j!({ "n": n, "nmax": nmax, "d": window.d, "D": window.max_deg, "k": k.to_string() });
            verification(cli, "lemma1", params, &report)
        }
        VerifyCmd::Table1 { window, ns, h } => {
            let Some(max_deg) = window.max_deg else {
                bail!("table1 needs --D");
            };
            let orders: Vec<usize> = ns
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<Result<_, _>>()
                .context("--ns takes comma-separated orders")?;
            let row = verify_table1_row(window.d, max_deg, &orders, &decode(h)?)?;
            reject_format(cli.format.unwrap_or(Format::Json), &[Format::Json], "verify")?;
            let params = j!({ "d": window.d, "D": max_deg, "ns": orders, "H": h });
            sink(cli, "verify table1", params, None, "json").emit(&json(&row)?)?;
            Ok(if row.report.passed() { Done::Ok } else { Done::Failed })
        }
        VerifyCmd::K5e { nmax } => verification(cli, "k5e", j!({ "nmax": nmax }), &verify_k5e(*nmax)?),
    }
}

fn parse_fraction(text: &str) -> Result<(u64, u64)> {
    let (p, q) = text.split_once('/').unwrap_or((text, "1"));
    let (p, q): (u64, u64) = (p.trim().parse()?, q.trim().parse()?);
    if q == 0 {
        bail!("zero denominator in {text:?}");
    }
    Ok((p, q))
}
