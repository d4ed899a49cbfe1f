mod config;
mod describe;
mod output;
mod svg;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use leadlag_core::netbuild::export::{export_aggregated, export_lagged, GraphFormat};
use leadlag_core::{
    aggregate, build_lags, build_lead_lag_graph, parse_csv, rank_sweep, rate_of_change, CsvOptions, ErrorKind,
    LaggedPanel, NodeId, ReturnsTable,
};

use config::{CommonArgs, OutputFormat, RunConfig};
use describe::DescriptiveStats;
use output::Staging;

/// Bad flags, config values or argument combinations. Exit status 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(
    name = "leadlag",
    version,
    about = "Lead-lag networks and PageRank influence rankings for lagged time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print per-variable statistics of the rates of change.
    Describe(CommonArgs),
    /// Build the lead-lag graph per metric and rank variables over the decay grid.
    Analyze(CommonArgs),
    /// Evaluate the metrics on a single pair of lagged variables.
    Metrics(MetricsArgs),
    /// Write the lagged or aggregated graph as DOT, GraphML or JSON.
    Export(ExportArgs),
}

#[derive(clap::Args)]
struct MetricsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Source and target variable, by name or zero-based column index.
    #[arg(long, num_args = 2, value_names = ["FROM", "TO"], required = true)]
    pair: Vec<String>,
    /// Lags of the source and target.
    #[arg(long, num_args = 2, value_names = ["K", "M"], required = true)]
    lags: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Layer {
    Lagged,
    Aggregated,
}

#[derive(clap::Args)]
struct ExportArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value = "aggregated")]
    layer: Layer,
    /// Aggregated layer only: flip links to point at the lagging variable.
    #[arg(long)]
    reverse: bool,
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return 1;
        }
        if let Some(e) = cause.downcast_ref::<leadlag_core::Error>() {
            return match e.kind() {
                ErrorKind::Usage => 1,
                ErrorKind::Data => 2,
                ErrorKind::Numerical => 3,
            };
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let common = match &cli.command {
        Command::Describe(c) | Command::Analyze(c) => c,
        Command::Metrics(m) => &m.common,
        Command::Export(x) => &x.common,
    };
    let cfg = RunConfig::resolve(common)?;
    let explicit_out = common.out.is_some();
    let job = || match &cli.command {
        Command::Describe(_) => describe_cmd(&cfg, explicit_out),
        Command::Analyze(_) => analyze_cmd(&cfg),
        Command::Metrics(m) => metrics_cmd(&cfg, m),
        Command::Export(x) => export_cmd(&cfg, x),
    };
    match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("starting worker pool")?
            .install(job),
        None => job(),
    }
}

struct Loaded {
    path: PathBuf,
    bytes: Vec<u8>,
    returns: ReturnsTable,
}

fn load(cfg: &RunConfig) -> anyhow::Result<Loaded> {
    let path = cfg.input()?.to_owned();
    let bytes = std::fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
    let table = parse_csv(&bytes[..], &CsvOptions::default()).with_context(|| format!("parsing {}", path.display()))?;
    let returns = rate_of_change(&table)?;
    Ok(Loaded { path, bytes, returns })
}

fn lagged_panel(returns: ReturnsTable, max_lag: usize) -> anyhow::Result<LaggedPanel> {
    if max_lag == 0 {
        return Err(usage("--max-lag must be at least 1: a graph needs k > m"));
    }
    Ok(build_lags(returns, max_lag)?)
}

fn describe_cmd(cfg: &RunConfig, write_files: bool) -> anyhow::Result<()> {
    let data = load(cfg)?;
    let stats = DescriptiveStats::from_returns(&data.returns);
    print!("{}", stats.to_table());
    if write_files {
        let mut st = Staging::new(&cfg.out)?;
        st.write("describe.csv", &stats.to_csv())?;
        let mut json = serde_json::to_string_pretty(&stats)?;
        json.push('\n');
        st.write("describe.json", &json)?;
        let manifest = output::manifest("describe", cfg, &data.path, &data.bytes, st.file_names())?;
        st.write("manifest.json", &manifest)?;
        st.commit()?;
    }
    Ok(())
}

fn graph_formats(cfg: &RunConfig) -> Vec<GraphFormat> {
    let mut out = Vec::new();
    for (f, g) in [
        (OutputFormat::Json, GraphFormat::Json),
        (OutputFormat::Dot, GraphFormat::Dot),
        (OutputFormat::Graphml, GraphFormat::GraphMl),
    ] {
        if cfg.wants(f) {
            out.push(g);
        }
    }
    out
}

fn analyze_cmd(cfg: &RunConfig) -> anyhow::Result<()> {
    let data = load(cfg)?;
    let panel = lagged_panel(data.returns, cfg.max_lag)?;
    let mut st = Staging::new(&cfg.out)?;
    let mut summary = Vec::new();
    for metric in cfg.metric_list() {
        let graph = build_lead_lag_graph(&panel, metric, &cfg.estimator)?;
        let report = rank_sweep(&graph, &cfg.a_values, &cfg.pagerank)?;
        let m = metric.as_str();
        if cfg.wants(OutputFormat::Json) {
            st.write(&format!("rankings_{m}.json"), &report.to_json()?)?;
        }
        if cfg.wants(OutputFormat::Csv) {
            st.write(&format!("rankings_{m}.csv"), &report.to_csv())?;
        }
        if cfg.wants(OutputFormat::Svg) {
            st.write(
                &format!("pagerank_{m}_influential.svg"),
                &svg::ranking_chart(&report, &report.influential),
            )?;
            st.write(
                &format!("pagerank_{m}_influenced.svg"),
                &svg::ranking_chart(&report, &report.influenced),
            )?;
        }
        // Graph files are only written for the structural formats; JSON is
        // already taken by the rankings.
        for format in graph_formats(cfg).into_iter().filter(|f| *f != GraphFormat::Json) {
            let ext = format.extension();
            st.write(&format!("lagged_{m}.{ext}"), &export_lagged(&graph, 1.0, format)?)?;
            let agg = aggregate(&graph, 1.0)?;
            st.write(&format!("aggregated_{m}.{ext}"), &export_aggregated(&agg, 1.0, format)?)?;
        }
        summary.push(format!(
            "{m}: {} edges; most influential {}, most influenced {}",
            graph.edge_count(),
            report.most_influential,
            report.most_influenced
        ));
    }
    let manifest = output::manifest("analyze", cfg, &data.path, &data.bytes, st.file_names())?;
    st.write("manifest.json", &manifest)?;
    let written = st.commit()?;
    for line in summary {
        println!("{line}");
    }
    println!("wrote {} files to {}", written.len(), cfg.out.display());
    Ok(())
}

fn resolve_variable(returns: &ReturnsTable, key: &str) -> anyhow::Result<usize> {
    if let Some(i) = returns.variable_index(key) {
        return Ok(i);
    }
    match key.parse::<usize>() {
        Ok(i) if i < returns.n_variables() => Ok(i),
        _ => Err(usage(format!("unknown variable '{key}'"))),
    }
}

fn metrics_cmd(cfg: &RunConfig, args: &MetricsArgs) -> anyhow::Result<()> {
    let data = load(cfg)?;
    let from = resolve_variable(&data.returns, &args.pair[0])?;
    let to = resolve_variable(&data.returns, &args.pair[1])?;
    if from == to {
        return Err(usage("--pair needs two different variables"));
    }
    let names = data.returns.variable_names().to_vec();
    let (k, m) = (args.lags[0], args.lags[1]);
    let panel = build_lags(data.returns, k.max(m))?;
    let pair = panel.align_pair(NodeId::new(from, k), NodeId::new(to, m))?;
    for metric in cfg.metric_list() {
        let value = metric.evaluate(&pair, &cfg.estimator)?;
        println!(
            "{}\t{}@lag{k} -> {}@lag{m}\tn={}\t{value}",
            metric.as_str(),
            names[from],
            names[to],
            pair.n()
        );
    }
    Ok(())
}

fn export_cmd(cfg: &RunConfig, args: &ExportArgs) -> anyhow::Result<()> {
    let a = match (cfg.a_values_explicit, cfg.a_values.as_slice()) {
        (false, _) => 1.0,
        (true, [a]) => *a,
        (true, _) => return Err(usage("export takes a single --a value")),
    };
    if args.reverse && args.layer == Layer::Lagged {
        return Err(usage("--reverse applies to the aggregated layer only"));
    }
    let formats = graph_formats(cfg);
    if formats.is_empty() {
        return Err(usage("export writes dot, graphml or json"));
    }
    let data = load(cfg)?;
    let panel = lagged_panel(data.returns, cfg.max_lag)?;
    let mut st = Staging::new(&cfg.out)?;
    for metric in cfg.metric_list() {
        let graph = build_lead_lag_graph(&panel, metric, &cfg.estimator)?;
        let m = metric.as_str();
        for &format in &formats {
            let ext = format.extension();
            match args.layer {
                Layer::Lagged => st.write(&format!("lagged_{m}_a{a}.{ext}"), &export_lagged(&graph, a, format)?)?,
                Layer::Aggregated => {
                    let mut agg = aggregate(&graph, a)?;
                    if args.reverse {
                        agg = agg.reverse();
                    }
                    let name = format!("aggregated_{m}_a{a}_{}.{ext}", agg.orientation().as_str());
                    st.write(&name, &export_aggregated(&agg, a, format)?)?;
                }
            }
        }
    }
    let manifest = output::manifest("export", cfg, &data.path, &data.bytes, st.file_names())?;
    st.write("manifest.json", &manifest)?;
    let written = st.commit()?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}
