//! Command-line front end.

use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::edmoga::{self, OptimizerConfig};
use crate::error::{Error, Result};
use crate::flightdata::{
    australian_ground_stations, build_snapshot, generate_synthetic_dataset, load_ground_stations,
    parse_flight_records, write_flight_records, FlightRecord, GroundStation, Region, ZeroOccupancy,
    DEFAULT_MIN_ALTITUDE_M, DEFAULT_WINDOW_S,
};
use crate::linkmodel::{AcmTable, LinkBudgetParams};
use crate::oracle::{self, EnumerationLimits};
use crate::pathobjectives::{
    infeasibility_reasons, path_link_metrics, Candidate, Network, PathConstraints,
};
use crate::simharness::{self, SelectionPolicy, SweepConfig};

#[derive(Debug, Parser)]
#[command(name = "aanet", version, about = "Multi-objective route optimization for aeronautical ad-hoc networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one route in a snapshot.
    Evaluate(EvaluateArgs),
    /// Optimize the routes of one source aircraft.
    Optimize(OptimizeArgs),
    /// Run the 24-hour sweep and write hourly metrics as CSV.
    Sweep(SweepArgs),
    /// Exhaustive Pareto front of one source, optionally scored against a result file.
    Oracle(OracleArgs),
    /// Write a synthetic flight-track CSV.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Flight-track CSV.
    #[arg(long)]
    pub flights: PathBuf,
    /// Ground-station CSV (defaults to the five built-in Australian airports).
    #[arg(long)]
    pub gs: Option<PathBuf>,
    /// Alternative ACM table CSV.
    #[arg(long)]
    pub acm: Option<PathBuf>,
    /// Snapshot window in seconds.
    #[arg(long, default_value_t = DEFAULT_WINDOW_S)]
    pub window: f64,
    /// Aircraft below this altitude (m) are treated as on the ground.
    #[arg(long, default_value_t = DEFAULT_MIN_ALTITUDE_M)]
    pub min_altitude: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format; a table on a terminal, CSV otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl OutputArgs {
    fn resolve(&self) -> Format {
        self.format.unwrap_or_else(|| {
            if io::stdout().is_terminal() {
                Format::Table
            } else {
                Format::Csv
            }
        })
    }
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    /// Optimizer settings file (`key = value` lines).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Base seed; all randomness derives from it.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long)]
    pub offspring: Option<usize>,
    #[arg(long)]
    pub generations: Option<usize>,
    #[arg(long)]
    pub p_cm: Option<f64>,
    #[arg(long)]
    pub n_box: Option<u32>,
    /// Hop budgets, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub hops: Option<Vec<usize>>,
}

impl OptimizerArgs {
    fn resolve(&self) -> Result<OptimizerConfig> {
        let mut cfg = match &self.config {
            Some(p) => OptimizerConfig::from_toml(&read_text(p)?)?,
            None => OptimizerConfig::default(),
        };
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.population {
            cfg.population_size = v;
        }
        if let Some(v) = self.offspring {
            cfg.offspring = v;
        }
        if let Some(v) = self.generations {
            cfg.generations = v;
        }
        if let Some(v) = self.p_cm {
            cfg.p_cm = v;
        }
        if let Some(v) = self.n_box {
            cfg.n_box = v;
        }
        if let Some(v) = &self.hops {
            cfg.hop_budgets = v.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Evaluation time, UTC seconds.
    #[arg(long)]
    pub time: f64,
    /// Route as comma-separated node ids, source first, ground station last.
    #[arg(long, value_delimiter = ',', required = true)]
    pub path: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long)]
    pub time: f64,
    /// Source flight id.
    #[arg(long)]
    pub source: String,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Representative route per flight for the averages.
    #[arg(long, value_enum, default_value_t = SelectionPolicy::MaxSe)]
    pub policy: SelectionPolicy,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long)]
    pub time: f64,
    #[arg(long)]
    pub source: String,
    #[arg(long, default_value_t = 3)]
    pub max_hops: usize,
    /// Front CSV written by `optimize --format csv` to score against the exact front.
    #[arg(long)]
    pub result: Option<PathBuf>,
    /// Partitions per objective for the coverage score.
    #[arg(long, default_value_t = 20)]
    pub n_box: u32,
    /// Lift the instance-size guard.
    #[arg(long)]
    pub allow_large: bool,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 50)]
    pub n_flights: usize,
    /// Dataset span in seconds.
    #[arg(long, default_value_t = 86_400.0)]
    pub duration: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn load_records(path: &Path) -> Result<Vec<FlightRecord>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let parsed = parse_flight_records(io::BufReader::new(file))?;
    for e in &parsed.row_errors {
        eprintln!("warning: {}: skipped {e}", path.display());
    }
    Ok(parsed.records)
}

fn load_stations(path: Option<&Path>) -> Result<Vec<GroundStation>> {
    match path {
        Some(p) => load_ground_stations(&read_text(p)?),
        None => Ok(australian_ground_stations()),
    }
}

fn load_table(path: Option<&Path>) -> Result<AcmTable> {
    match path {
        Some(p) => AcmTable::from_csv(&read_text(p)?),
        None => Ok(AcmTable::default()),
    }
}

fn load_network(args: &InstanceArgs, time: f64) -> Result<Network> {
    let records = load_records(&args.flights)?;
    let stations = load_stations(args.gs.as_deref())?;
    let table = load_table(args.acm.as_deref())?;
    let snapshot = build_snapshot(&records, time, args.window, args.min_altitude, &ZeroOccupancy, &stations)?;
    Network::new(snapshot, LinkBudgetParams::default(), table, PathConstraints::default())
}

#[derive(Debug, Serialize)]
struct RouteRow {
    path: String,
    hops: usize,
    se: f64,
    delay_s: f64,
    pet_s: f64,
    feasible: bool,
}

impl RouteRow {
    fn new(c: &Candidate, net: &Network) -> Self {
        RouteRow {
            path: net.render(&c.path).join(">"),
            hops: c.path.hops(),
            se: c.objectives.se,
            delay_s: c.objectives.delay,
            pet_s: c.objectives.pet,
            feasible: c.objectives.feasible,
        }
    }
}

fn csv_string<T: Serialize>(rows: &[T], header_if_empty: &str) -> Result<String> {
    if rows.is_empty() {
        return Ok(format!("{header_if_empty}\n"));
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

const ROUTE_HEADER: &str = "path,hops,se,delay_s,pet_s,feasible";

fn route_table(rows: &[RouteRow]) -> String {
    let width = rows.iter().map(|r| r.path.len()).max().unwrap_or(4).max(4);
    let mut s = format!("{:<width$}  {:>4}  {:>6}  {:>12}  {:>12}  feasible\n", "path", "hops", "se", "delay_s", "pet_s");
    for r in rows {
        s.push_str(&format!(
            "{:<width$}  {:>4}  {:>6.3}  {:>12.9}  {:>12.3}  {}\n",
            r.path, r.hops, r.se, r.delay_s, r.pet_s, r.feasible
        ));
    }
    if rows.is_empty() {
        s.push_str("(no feasible route)\n");
    }
    s
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Format(e.to_string()))
}

fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::io("<stdout>", e))
}

fn evaluate(args: &EvaluateArgs) -> Result<String> {
    let net = load_network(&args.instance, args.time)?;
    let ids: Vec<&str> = args.path.iter().map(|s| s.trim()).collect();
    let path = net.path(&ids)?;
    let candidate = Candidate::evaluate(path.clone(), &net);
    let reasons = infeasibility_reasons(&path, &net)?;
    let links = path_link_metrics(&path, &net)?;
    let row = RouteRow::new(&candidate, &net);

    #[derive(Serialize)]
    struct Evaluation<'a> {
        #[serde(flatten)]
        route: &'a RouteRow,
        violation: f64,
        reasons: &'a [String],
    }
    Ok(match args.output.resolve() {
        Format::Json => {
            #[derive(Serialize)]
            struct Full<'a> {
                #[serde(flatten)]
                eval: Evaluation<'a>,
                links: &'a [crate::linkmodel::LinkMetrics],
            }
            json(&Full {
                eval: Evaluation {
                    route: &row,
                    violation: candidate.objectives.violation,
                    reasons: &reasons,
                },
                links: &links,
            })?
        }
        Format::Csv => {
            let mut s = format!("{ROUTE_HEADER},violation,reasons\n");
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record([
                row.path.clone(),
                row.hops.to_string(),
                row.se.to_string(),
                row.delay_s.to_string(),
                row.pet_s.to_string(),
                row.feasible.to_string(),
                candidate.objectives.violation.to_string(),
                reasons.join("; "),
            ])?;
            s.push_str(&String::from_utf8_lossy(&w.into_inner().map_err(|e| Error::Format(e.to_string()))?));
            s
        }
        Format::Table => {
            let mut s = format!("route {}\n{}\n", row.path, candidate.objectives);
            for (w, m) in path.nodes().windows(2).zip(&links) {
                s.push_str(&format!(
                    "  {} -> {}: {:.3} km, se {}, delay {:.6} s, let {:.1} s{}\n",
                    net.id(w[0]),
                    net.id(w[1]),
                    m.distance_m / 1e3,
                    m.spectral_efficiency,
                    m.delay_s,
                    m.let_s,
                    m.fault.map(|f| format!(" [{f}]")).unwrap_or_default()
                ));
            }
            if candidate.objectives.feasible {
                s.push_str("feasible\n");
            } else {
                s.push_str("infeasible:\n");
                for r in &reasons {
                    s.push_str(&format!("  {r}\n"));
                }
            }
            s
        }
    })
}

fn print_front(front: &[Candidate], net: &Network, format: Format) -> Result<String> {
    let rows: Vec<RouteRow> = front.iter().map(|c| RouteRow::new(c, net)).collect();
    match format {
        Format::Table => Ok(route_table(&rows)),
        Format::Csv => csv_string(&rows, ROUTE_HEADER),
        Format::Json => json(&rows),
    }
}

fn optimize(args: &OptimizeArgs) -> Result<String> {
    let config = args.optimizer.resolve()?;
    let net = load_network(&args.instance, args.time)?;
    let source = net.node(&args.source)?;
    if !net.is_aircraft(source) {
        return Err(Error::Instance(format!("`{}` is a ground station, not a flight", args.source)));
    }
    let config = OptimizerConfig {
        hop_budgets: edmoga::supported_budgets(&net, &config.hop_budgets),
        ..config
    };
    let result = edmoga::run(&net, source, &config)?;
    print_front(&result.front, &net, args.output.resolve())
}

fn sweep(args: &SweepArgs) -> Result<String> {
    let optimizer = args.optimizer.resolve()?;
    let records = load_records(&args.instance.flights)?;
    let stations = load_stations(args.instance.gs.as_deref())?;
    let config = SweepConfig {
        optimizer,
        window_s: args.instance.window,
        min_altitude_m: args.instance.min_altitude,
        policy: args.policy,
        table: load_table(args.instance.acm.as_deref())?,
        jobs: args.jobs,
        ..SweepConfig::default()
    };
    let metrics = simharness::run_hourly_experiment(&records, &stations, &config, &ZeroOccupancy)?;
    simharness::write_results(&metrics, &args.out)?;
    Ok(String::new())
}

fn read_result_front(path: &Path, net: &Network) -> Result<Vec<Candidate>> {
    let text = read_text(path)?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let col = reader
        .headers()?
        .iter()
        .position(|h| h == "path")
        .ok_or_else(|| Error::Format(format!("{}: no `path` column", path.display())))?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record?;
        let ids: Vec<&str> = record.get(col).unwrap_or("").split('>').collect();
        out.push(Candidate::evaluate(net.path(&ids)?, net));
    }
    Ok(out)
}

fn run_oracle(args: &OracleArgs) -> Result<String> {
    let net = load_network(&args.instance, args.time)?;
    let source = net.node(&args.source)?;
    let limits = if args.allow_large {
        EnumerationLimits::unlimited()
    } else {
        EnumerationLimits::default()
    };
    let exact = oracle::exact_pareto_front(&net, source, args.max_hops, limits, args.jobs)?;
    let format = args.output.resolve();
    let coverage = match &args.result {
        Some(p) => {
            let found = read_result_front(p, &net)?;
            Some(oracle::coverage_metrics(&found, &exact, [args.n_box; 3])?)
        }
        None => None,
    };
    if format == Format::Json {
        #[derive(Serialize)]
        struct Out {
            front: Vec<RouteRow>,
            coverage: Option<oracle::CoverageReport>,
        }
        return json(&Out {
            front: exact.iter().map(|c| RouteRow::new(c, &net)).collect(),
            coverage,
        });
    }
    let mut s = print_front(&exact, &net, format)?;
    if let Some(c) = coverage {
        match format {
            Format::Csv => s.push_str(&format!(
                "\nexact_front_size,archive_size,fraction_covered,generational_distance\n{},{},{},{}\n",
                c.exact_front_size, c.archive_size, c.fraction_covered, c.generational_distance
            )),
            _ => s.push_str(&format!(
                "\nexact front {} routes, result {} routes, covered {:.3}, generational distance {:.6}\n",
                c.exact_front_size, c.archive_size, c.fraction_covered, c.generational_distance
            )),
        }
    }
    Ok(s)
}

fn synth(args: &SynthArgs) -> Result<String> {
    let records = generate_synthetic_dataset(args.seed, args.n_flights, args.duration, &Region::australia())?;
    let file = fs::File::create(&args.out).map_err(|e| Error::io(&args.out, e))?;
    write_flight_records(&records, io::BufWriter::new(file))?;
    Ok(String::new())
}

pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Evaluate(a) => evaluate(a),
        Command::Optimize(a) => optimize(a),
        Command::Sweep(a) => sweep(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Synth(a) => synth(a),
    }
}

/// Exit status for an error: 2 for broken invariants, 1 otherwise.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) => 2,
        _ => 1,
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli).and_then(|text| emit(&text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_subcommands() {
        let cli = Cli::try_parse_from([
            "aanet", "evaluate", "--flights", "f.csv", "--time", "3600", "--path", "QF1,BNE",
        ])
        .unwrap();
        match cli.command {
            Command::Evaluate(a) => assert_eq!(a.path, ["QF1", "BNE"]),
            _ => panic!(),
        }
        let cli = Cli::try_parse_from([
            "aanet", "optimize", "--flights", "f.csv", "--time", "0", "--source", "QF1", "--hops", "2,3",
        ])
        .unwrap();
        match cli.command {
            Command::Optimize(a) => {
                let cfg = a.optimizer.resolve().unwrap();
                assert_eq!(cfg.hop_budgets, [2, 3]);
                assert_eq!(cfg.seed, 0);
            }
            _ => panic!(),
        }
        assert!(Cli::try_parse_from(["aanet", "sweep", "--bogus"]).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Invariant("x".into())), 2);
        assert_eq!(exit_code(&Error::UnknownNode("x".into())), 1);
    }
}
