// Copyright 2026 The pauliflow Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Command-line driver.
//!
//! Every subcommand prints one JSON document (or a CSV table with a `#`
//! comment header) that starts with a reproducibility header: tool version,
//! seed, and a SHA-256 over the canonical configuration and the bytes of every
//! input file. Thread count and output path are excluded from the hash, so
//! serial and parallel runs of the same configuration produce identical files.
//! Failures print `{"error": {"kind": .., "message": ..}}` on stderr and exit
//! with status 1 (2 for usage errors).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::circuit::random::policy_by_name;
use crate::circuit::{
    build_qaoa, check_sparseness, qaoa_sparseness_bound, Architecture, Circuit, Embedding, Lattice, Mixer, QaoaParams,
    SparsenessStatus,
};
use crate::counterexample;
use crate::engine::{
    count_paths_with, expectation_truncated, plan_cutoff, random_model_statistics, EngineOptions, WeightPolynomial,
};
use crate::error::{invalid, Error, Result};
use crate::ising::{
    approx_ground_energy, approx_ground_energy_with_side, energy_observable, exact_ground_energy, theorem2_dispatch,
    DispatchOptions, IsingModel,
};
use crate::oracle::{exact_noisy_expectation, MAX_DENSE_QUBITS};
use crate::pauli::{parse_pauli, Observable, ProductState};
use crate::poly::{check_radius_bounds, find_roots, fragility_certificate, l2_norm, FragilityOptions};

#[derive(Debug, Parser, Serialize)]
#[command(name = "pauliflow", version, about = "Truncated Pauli-path estimates for noisy circuits")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalArgs {
    /// Seed for every random choice made by the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 1 forces the serial traversal.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Truncated expectation value of an observable.
    Simulate(SimulateArgs),
    /// Path-count histogram and sparseness report.
    Paths(PathsArgs),
    /// Path-count statistics of the random Clifford+T ensemble.
    RandomModel(RandomModelArgs),
    /// Build a QAOA circuit for an Ising model and dispatch it.
    Qaoa(QaoaArgs),
    /// Exact and block-approximate ground energies.
    Ising(IsingArgs),
    /// Truncation error of the majority-vote construction over a cutoff sweep.
    Counterexample(CounterexampleArgs),
    /// Roots, coefficient bounds and fragility of a weight polynomial.
    Roots(RootsArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Paths(_) => "paths",
            Command::RandomModel(_) => "random-model",
            Command::Qaoa(_) => "qaoa",
            Command::Ising(_) => "ising",
            Command::Counterexample(_) => "counterexample",
            Command::Roots(_) => "roots",
        }
    }

    fn inputs(&self) -> Vec<&Path> {
        match self {
            Command::Simulate(a) => vec![a.circuit.as_path()],
            Command::Paths(a) => vec![a.circuit.as_path()],
            Command::Qaoa(a) => vec![a.model.as_path()],
            Command::Ising(a) => vec![a.model.as_path()],
            Command::Roots(a) => a.circuit.iter().map(PathBuf::as_path).collect(),
            Command::RandomModel(_) | Command::Counterexample(_) => Vec::new(),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Circuit JSON file.
    #[arg(long)]
    pub circuit: PathBuf,
    /// Observable, e.g. `Z0` or `1.0:Z0Z1,-0.5:X2` or a dense `ZZI`.
    #[arg(long)]
    pub observable: String,
    /// `zeros`, `plus`, `basis:0101` or `bloch:x,y,z[;x,y,z...]`.
    #[arg(long, default_value = "zeros")]
    pub state: String,
    /// Depolarizing rate.
    #[arg(long)]
    pub p: f64,
    /// Explicit weight cutoff.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Target precision for the automatic cutoff.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Magic fraction of the circuit, asserted or certified with `--certify-k`.
    #[arg(long = "Q")]
    pub q: Option<f64>,
    /// Constant of the `a·ln n` cutoff floor.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Certify `Q` over connected point sets of at least this size.
    #[arg(long)]
    pub certify_k: Option<usize>,
    /// Largest subset size enumerated while certifying.
    #[arg(long, default_value_t = 10)]
    pub cap: usize,
    /// Compare with the density-matrix oracle.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub light_cone: bool,
    #[arg(long)]
    pub max_paths: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct PathsArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// A single Pauli string.
    #[arg(long)]
    pub observable: String,
    #[arg(long)]
    pub ell: Option<usize>,
    /// Sparseness fraction to check (with `--k`).
    #[arg(long = "Q")]
    pub q: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub cap: usize,
    #[arg(long)]
    pub light_cone: bool,
    #[arg(long)]
    pub max_paths: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct RandomModelArgs {
    /// Lattice as `LXxLY`.
    #[arg(long, default_value = "3x3")]
    pub lattice: String,
    /// Brickwork depth.
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    #[arg(long = "Q")]
    pub q: f64,
    /// `uniform` or `always-t`.
    #[arg(long, default_value = "uniform")]
    pub policy: String,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long)]
    pub ell: usize,
    #[arg(long, default_value = "X0")]
    pub observable: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingKind {
    /// Spins sit on their placement (or site `i`), no SWAPs.
    Native,
    /// Spins along a snake with a full odd-even transposition network.
    SwapNetwork,
}

#[derive(Debug, Args, Serialize)]
pub struct QaoaArgs {
    /// Ising model JSON file.
    #[arg(long)]
    pub model: PathBuf,
    /// Lattice as `LXxLY`; defaults to the placement's bounding box or a near-square.
    #[arg(long)]
    pub lattice: Option<String>,
    /// Cost angles, one per variational layer.
    #[arg(long, value_delimiter = ',', default_value = "0.4")]
    pub gamma: Vec<f64>,
    /// Mixer angles, one per variational layer.
    #[arg(long, value_delimiter = ',', default_value = "0.3")]
    pub alpha: Vec<f64>,
    #[arg(long, value_enum)]
    pub embedding: Option<EmbeddingKind>,
    #[arg(long)]
    pub p: f64,
    /// Accuracy per spin.
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 4)]
    pub lambda_threshold: usize,
    /// Cutoff used below the noise threshold.
    #[arg(long)]
    pub fallback_ell: Option<usize>,
    #[arg(long)]
    pub oracle: bool,
    /// Also write the built circuit as JSON.
    #[arg(long)]
    #[serde(skip)]
    pub circuit_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct IsingArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Exhaustive ground state.
    #[arg(long)]
    pub exact: bool,
    /// Block approximation with accuracy `ε` per spin.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Block approximation with an explicit block side.
    #[arg(long)]
    pub block_side: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct CounterexampleArgs {
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,
    /// Qubit count of the mixed observable (multiple of 3).
    #[arg(long, default_value_t = 3 << 14)]
    pub n: usize,
    /// Terms of the mixed observable; default `⌈(log₂ n)²⌉`.
    #[arg(long)]
    pub g: Option<usize>,
    /// Cutoffs as `A..B` (inclusive), `A..B:STEP` or a single value.
    #[arg(long, default_value = "32..96")]
    pub ell: String,
    /// Sweep a single `O_k` instead of the mixed observable.
    #[arg(long)]
    pub k: Option<usize>,
    /// Also run the property checker for `k = 1..=K`.
    #[arg(long)]
    pub properties: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct RootsArgs {
    /// Circuit whose weight polynomial is analysed (with `--observable`).
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    #[arg(long)]
    pub observable: Option<String>,
    #[arg(long, default_value = "zeros")]
    pub state: String,
    /// Analyse the majority-vote polynomial for `O_k`.
    #[arg(long)]
    pub counterexample_k: Option<usize>,
    /// Explicit coefficients `F_0,F_1,...`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Roots required inside the radius; default is the degree minus one.
    #[arg(long)]
    pub g_threshold: Option<usize>,
    #[arg(long, default_value_t = 200)]
    pub grid_points: usize,
}

/// Parses `args` (including the program name), runs, writes the output and
/// returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{}", error_json("usage", e.to_string().trim_end()));
            return 2;
        }
    };
    let result = execute(&cli).and_then(|body| match &cli.global.out {
        Some(path) => Ok(std::fs::write(path, body)?),
        None => {
            print!("{body}");
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string()));
            1
        }
    }
}

fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}

/// Runs the parsed command and returns the rendered output.
pub fn execute(cli: &Cli) -> Result<String> {
    let header = header(cli)?;
    log::info!("{} config {}", cli.command.name(), header.config_hash);
    let parallel = cli.global.threads != Some(1);
    let engine = EngineOptions { parallel, ..Default::default() };
    let work = || dispatch(cli, &header, engine);
    match cli.global.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| invalid(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub config_hash: String,
}

fn header(cli: &Cli) -> Result<Header> {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(cli)?);
    for path in cli.command.inputs() {
        let bytes = std::fs::read(path)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(&bytes);
    }
    Ok(Header {
        tool: "pauliflow",
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        seed: cli.global.seed,
        config_hash: hex::encode(h.finalize()),
    })
}

/// CSV table with the header as a leading comment line.
struct Table {
    header: String,
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(h: &Header, columns: &[&str]) -> Result<Self> {
        let header = format!(
            "# {} {} command={} seed={} config={}\n",
            h.tool, h.version, h.command, h.seed, h.config_hash
        );
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(columns)?;
        Ok(Self { header, writer })
    }

    fn row(&mut self, fields: &[String]) -> Result<()> {
        Ok(self.writer.write_record(fields)?)
    }

    fn finish(self) -> Result<String> {
        let body = self.writer.into_inner().map_err(|e| invalid(format!("csv: {e}")))?;
        Ok(self.header + &String::from_utf8_lossy(&body))
    }
}

fn render_json(h: &Header, result: Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&json!({ "header": h, "result": result }))?;
    s.push('\n');
    Ok(s)
}

fn num(v: f64) -> String {
    // Shortest round-trip form, stable across platforms.
    let mut s = String::new();
    write!(s, "{v:?}").expect("writing to a String");
    s
}

fn dispatch(cli: &Cli, h: &Header, engine: EngineOptions) -> Result<String> {
    let format = cli.global.format;
    match &cli.command {
        Command::Simulate(a) => simulate(a, h, format, engine),
        Command::Paths(a) => paths(a, h, format, engine),
        Command::RandomModel(a) => random_model(a, h, cli.global.seed, format, engine),
        Command::Qaoa(a) => qaoa(a, h, format, engine),
        Command::Ising(a) => ising(a, h, format),
        Command::Counterexample(a) => counterexample_sweep(a, h, format),
        Command::Roots(a) => roots(a, h, format, engine),
    }
}

/// Parses `zeros`, `plus`, `basis:0101` or `bloch:x,y,z;...` for `n` qubits.
/// A single Bloch triple is repeated on every qubit.
pub fn parse_state(n: usize, s: &str) -> Result<ProductState> {
    let s = s.trim();
    if s == "zeros" {
        return Ok(ProductState::zeros(n));
    }
    if s == "plus" {
        return Ok(ProductState::plus(n));
    }
    if let Some(bits) = s.strip_prefix("basis:") {
        let bits: Vec<bool> = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(invalid(format!("bad basis digit {c:?}"))),
            })
            .collect::<Result<_>>()?;
        if bits.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: bits.len() });
        }
        return Ok(ProductState::basis(&bits));
    }
    if let Some(list) = s.strip_prefix("bloch:") {
        let triples = list
            .split(';')
            .map(|t| {
                let v: Vec<f64> = t
                    .split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|_| invalid(format!("bad Bloch component {x:?}"))))
                    .collect::<Result<_>>()?;
                <[f64; 3]>::try_from(v).map_err(|_| invalid(format!("Bloch vector {t:?} needs three components")))
            })
            .collect::<Result<Vec<_>>>()?;
        let bloch = match triples.len() {
            1 => vec![triples[0]; n],
            m if m == n => triples,
            m => return Err(Error::DimensionMismatch { expected: n, got: m }),
        };
        return ProductState::new(bloch);
    }
    Err(invalid(format!("unknown state {s:?}; expected zeros, plus, basis:.. or bloch:..")))
}

/// Parses `LXxLY`.
pub fn parse_lattice(s: &str) -> Result<Lattice> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| invalid(format!("lattice {s:?} is not of the form LXxLY")))?;
    let lx = a.trim().parse::<usize>().map_err(|_| invalid(format!("bad lattice width in {s:?}")))?;
    let ly = b.trim().parse::<usize>().map_err(|_| invalid(format!("bad lattice height in {s:?}")))?;
    if lx == 0 || ly == 0 {
        return Err(invalid("lattice sides must be positive"));
    }
    Ok(Lattice::new(lx, ly))
}

/// Parses `A..B`, `A..=B`, `A..B:STEP` (all inclusive) or `A`.
pub fn parse_range(s: &str) -> Result<Vec<usize>> {
    let bad = || invalid(format!("bad range {s:?}"));
    let (body, step) = match s.split_once(':') {
        Some((b, st)) => (b, st.trim().parse::<usize>().map_err(|_| bad())?),
        None => (s, 1),
    };
    if step == 0 {
        return Err(bad());
    }
    let (lo, hi) = match body.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (body, body),
    };
    let lo = lo.trim().parse::<usize>().map_err(|_| bad())?;
    let hi = hi.trim().parse::<usize>().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).step_by(step).collect())
}

fn with_limits(engine: EngineOptions, light_cone: bool, max_paths: Option<u64>) -> EngineOptions {
    EngineOptions { light_cone, max_paths, ..engine }
}

fn simulate(a: &SimulateArgs, h: &Header, format: Format, engine: EngineOptions) -> Result<String> {
    let circuit = Circuit::load(&a.circuit)?;
    let n = circuit.num_qubits();
    let obs = Observable::parse(n, &a.observable)?;
    let state = parse_state(n, &a.state)?;
    let opts = with_limits(engine, a.light_cone, a.max_paths);

    let q_status = match (a.q, a.certify_k) {
        (None, _) => None,
        (Some(_), None) => Some("unverified".to_string()),
        (Some(q), Some(k)) => {
            let report = check_sparseness(&circuit, q, k, a.cap)?;
            match report.status {
                SparsenessStatus::Certified => Some("certified".into()),
                SparsenessStatus::Refuted => {
                    let points: Vec<String> = report
                        .witness
                        .iter()
                        .flatten()
                        .map(|(c, t)| format!("({}, {}, {t})", c.x, c.y))
                        .collect();
                    return Err(invalid(format!("circuit is not ({q}, {k})-sparse; witness {}", points.join(" "))));
                }
                SparsenessStatus::Inconclusive { largest_size_checked } => {
                    Some(format!("unverified (checked subsets up to size {largest_size_checked})"))
                }
            }
        }
    };
    let (ell, plan) = match (a.ell, a.epsilon, a.q) {
        (Some(ell), None, _) => (Some(ell), None),
        (None, Some(eps), Some(q)) => {
            let plan = plan_cutoff(n, circuit.depth(), eps, a.p, q, a.a, obs.len())?;
            (Some(plan.ell), Some(plan))
        }
        (None, Some(_), None) => return Err(invalid("automatic cutoff needs --Q")),
        (Some(_), Some(_), _) => return Err(invalid("give either --ell or --epsilon, not both")),
        (None, None, _) => return Err(invalid("give --ell or --epsilon with --Q")),
    };
    let est = expectation_truncated(&circuit, &obs, &state, a.p, ell, a.q, &opts)?;
    let oracle = if a.oracle {
        let exact = exact_noisy_expectation(&circuit, &state, &obs, a.p)?;
        Some(json!({ "value": exact, "delta": est.value - exact }))
    } else {
        None
    };
    match format {
        Format::Json => render_json(
            h,
            json!({
                "value": est.value,
                "ell": est.ell,
                "p": est.p,
                "q": a.q,
                "q_status": q_status,
                "cutoff_plan": plan,
                "bound": est.bound,
                "terms": est.terms,
                "oracle": oracle,
            }),
        ),
        Format::Csv => {
            let mut t = Table::new(h, &["term", "pauli", "coeff", "w", "F_w"])?;
            for (i, term) in est.terms.iter().enumerate() {
                for (w, f) in term.fw.nonzero() {
                    t.row(&[i.to_string(), term.pauli.clone(), num(term.coeff), w.to_string(), num(f)])?;
                }
            }
            t.finish()
        }
    }
}

fn paths(a: &PathsArgs, h: &Header, format: Format, engine: EngineOptions) -> Result<String> {
    let circuit = Circuit::load(&a.circuit)?;
    let obs = parse_pauli(circuit.num_qubits(), &a.observable)?;
    let opts = with_limits(engine, a.light_cone, a.max_paths);
    let stats = count_paths_with(&circuit, &obs, a.ell, &opts)?;
    let sparseness = match (a.q, a.k) {
        (Some(q), Some(k)) => Some(check_sparseness(&circuit, q, k, a.cap)?),
        (None, None) => None,
        _ => return Err(invalid("--Q and --k go together")),
    };
    // Counting bound on certified circuits, for every cutoff up to the one used.
    let counting = sparseness.as_ref().filter(|r| r.status == SparsenessStatus::Certified).map(|r| {
        let top = a.ell.or(stats.max_weight()).unwrap_or(0);
        let rows: Vec<Value> = (r.k..=top)
            .map(|ell| {
                let count = stats.count_between(r.k, ell);
                let bound = (r.q * ell as f64).exp2();
                json!({ "ell": ell, "count": count, "bound": bound, "holds": count as f64 <= bound })
            })
            .collect();
        rows
    });
    match format {
        Format::Json => render_json(
            h,
            json!({
                "total": stats.total(),
                "counts": stats.counts,
                "max_magic": stats.max_magic,
                "pruned": stats.pruned,
                "sparseness": sparseness,
                "counting_bound": counting,
            }),
        ),
        Format::Csv => {
            let mut t = Table::new(h, &["w", "N_w", "max_magic"])?;
            for (w, n) in &stats.counts {
                t.row(&[w.to_string(), n.to_string(), stats.max_magic[w].to_string()])?;
            }
            t.finish()
        }
    }
}

fn random_model(a: &RandomModelArgs, h: &Header, seed: u64, format: Format, engine: EngineOptions) -> Result<String> {
    let lattice = parse_lattice(&a.lattice)?;
    let arch = Architecture::brickwork(lattice, a.depth);
    let policy = policy_by_name(&a.policy)?;
    let obs = parse_pauli(lattice.num_qubits(), &a.observable)?;
    let stats = random_model_statistics(&arch, a.q, policy, &obs, a.trials, a.ell, seed, &engine)?;
    match format {
        Format::Json => render_json(h, serde_json::to_value(&stats)?),
        Format::Csv => {
            let mut t = Table::new(h, &["trial", "paths"])?;
            for (i, s) in stats.samples.iter().enumerate() {
                t.row(&[i.to_string(), s.to_string()])?;
            }
            t.finish()
        }
    }
}

fn default_lattice(model: &IsingModel) -> Lattice {
    match model.placement() {
        Some(p) => Lattice::new(
            p.iter().map(|c| c.x).max().unwrap_or(0) + 1,
            p.iter().map(|c| c.y).max().unwrap_or(0) + 1,
        ),
        None => {
            let n = model.num_spins().max(1);
            let lx = (n as f64).sqrt().ceil() as usize;
            Lattice::new(lx, n.div_ceil(lx))
        }
    }
}

fn qaoa(a: &QaoaArgs, h: &Header, format: Format, engine: EngineOptions) -> Result<String> {
    let model = IsingModel::load(&a.model)?;
    let lattice = match &a.lattice {
        Some(s) => parse_lattice(s)?,
        None => default_lattice(&model),
    };
    if a.gamma.len() != a.alpha.len() {
        return Err(invalid(format!("{} gamma values but {} alpha values", a.gamma.len(), a.alpha.len())));
    }
    let params: Vec<QaoaParams> =
        a.gamma.iter().zip(&a.alpha).map(|(&gamma, &alpha)| QaoaParams { gamma, alpha }).collect();
    let native_fits = model.max_edge_length().is_some_and(|c| c <= 1);
    let kind = a.embedding.unwrap_or(if native_fits { EmbeddingKind::Native } else { EmbeddingKind::SwapNetwork });
    let embedding = match kind {
        EmbeddingKind::Native => match model.placement() {
            Some(p) => Embedding::new(p.to_vec(), Vec::new()),
            None => Embedding::native(lattice, model.num_spins()),
        },
        EmbeddingKind::SwapNetwork => Embedding::linear_swap_network(lattice, model.num_spins())?,
    };
    let (circuit, layout) = build_qaoa(&model, lattice, &params, &embedding, &Mixer::TransverseField)?;
    if let Some(path) = &a.circuit_out {
        circuit.save(path)?;
    }
    let opts = DispatchOptions {
        lambda_threshold: a.lambda_threshold,
        p: a.p,
        epsilon: a.epsilon,
        a: a.a,
        fallback_ell: a.fallback_ell,
        engine,
    };
    let report = theorem2_dispatch(&model, &circuit, &layout, &opts)?;
    let q = qaoa_sparseness_bound(&layout).ok();
    let oracle = if a.oracle {
        if circuit.num_qubits() > MAX_DENSE_QUBITS {
            return Err(Error::TooLarge { what: "oracle qubit count", size: circuit.num_qubits(), limit: MAX_DENSE_QUBITS });
        }
        let obs = layout.physical_observable(&energy_observable(&model)?)?;
        let exact = exact_noisy_expectation(&circuit, &ProductState::plus(circuit.num_qubits()), &obs, a.p)?;
        let ground = exact_ground_energy(&model).ok().map(|g| g.energy);
        Some(json!({ "noisy_energy": exact, "ground_energy": ground }))
    } else {
        None
    };
    match format {
        Format::Json => render_json(
            h,
            json!({
                "embedding": kind,
                "lattice": [lattice.lx, lattice.ly],
                "qubits": circuit.num_qubits(),
                "depth": circuit.depth(),
                "lambda": layout.lambda,
                "max_c": layout.max_c(),
                "q_bound": q,
                "dispatch": report,
                "oracle": oracle,
            }),
        ),
        Format::Csv => {
            let mut t = Table::new(h, &["branch", "lambda", "energy", "bound", "ell", "guaranteed"])?;
            let branch = serde_json::to_value(report.branch)?.as_str().unwrap_or_default().to_string();
            t.row(&[
                branch,
                report.lambda.to_string(),
                num(report.energy),
                num(report.bound),
                report.ell.map(|e| e.to_string()).unwrap_or_default(),
                report.guaranteed.to_string(),
            ])?;
            t.finish()
        }
    }
}

fn ising(a: &IsingArgs, h: &Header, format: Format) -> Result<String> {
    let model = IsingModel::load(&a.model)?;
    let approx_requested = a.epsilon.is_some() || a.block_side.is_some();
    let exact = if a.exact || !approx_requested { Some(exact_ground_energy(&model)?) } else { None };
    let approx = match (a.block_side, a.epsilon) {
        (Some(l), None) => Some(approx_ground_energy_with_side(&model, l)?),
        (None, Some(eps)) => Some(approx_ground_energy(&model, eps)?),
        (None, None) => None,
        (Some(_), Some(_)) => return Err(invalid("give either --epsilon or --block-side, not both")),
    };
    match format {
        Format::Json => render_json(h, json!({ "spins": model.num_spins(), "exact": exact, "approx": approx })),
        Format::Csv => {
            let mut t = Table::new(h, &["method", "energy", "bound"])?;
            if let Some(g) = &exact {
                t.row(&["exact".into(), num(g.energy), num(0.0)])?;
            }
            if let Some(g) = &approx {
                t.row(&[format!("block-{}", g.l), num(g.energy), num(g.bound)])?;
            }
            t.finish()
        }
    }
}

#[derive(Serialize)]
struct SweepRow {
    ell: usize,
    error: f64,
    abs_error: f64,
    /// Even cutoff with at least one `k` in `8k < ℓ < 9k`.
    valid: bool,
    /// `|E|` over the previous valid row.
    ratio: Option<f64>,
    witness_k: Option<usize>,
    witness: Option<f64>,
}

fn counterexample_sweep(a: &CounterexampleArgs, h: &Header, format: Format) -> Result<String> {
    let ells = parse_range(&a.ell)?;
    let mut rows = Vec::with_capacity(ells.len());
    let mut last_valid: Option<f64> = None;
    let g = a.g.unwrap_or_else(|| counterexample::default_g(a.n));
    for &ell in &ells {
        let (error, witness, valid) = match a.k {
            Some(k) => {
                let e = counterexample::truncation_error(k, ell, a.p);
                (e, None, ell % 2 == 0)
            }
            None => {
                let m = counterexample::mixed_observable_error(a.n, g, ell, a.p)?;
                (m.value, m.witness, ell % 2 == 0 && m.witness.is_some())
            }
        };
        let ratio = if valid { last_valid.map(|prev| error.abs() / prev) } else { None };
        if valid {
            last_valid = Some(error.abs());
        }
        rows.push(SweepRow {
            ell,
            error,
            abs_error: error.abs(),
            valid,
            ratio,
            witness_k: witness.map(|w| w.0),
            witness: witness.map(|w| w.1),
        });
    }
    let properties = match a.properties {
        Some(kmax) => Some(
            (1..=kmax)
                .map(|k| {
                    let r = counterexample::verify_properties(k, a.p)?;
                    Ok(json!({ "k": k, "checks": r.checks.len(), "passed": r.all_passed(),
                               "failures": r.failures().collect::<Vec<_>>() }))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    match format {
        Format::Json => render_json(
            h,
            json!({
                "p": a.p,
                "mode": if a.k.is_some() { "single" } else { "mixed" },
                "k": a.k,
                "n": if a.k.is_some() { None } else { Some(a.n) },
                "g": if a.k.is_some() { None } else { Some(g) },
                "rows": rows,
                "properties": properties,
            }),
        ),
        Format::Csv => {
            let mut t = Table::new(h, &["ell", "E", "abs_E", "valid", "ratio", "witness_k", "witness"])?;
            let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
            for r in &rows {
                t.row(&[
                    r.ell.to_string(),
                    num(r.error),
                    num(r.abs_error),
                    r.valid.to_string(),
                    opt(r.ratio),
                    r.witness_k.map(|k| k.to_string()).unwrap_or_default(),
                    opt(r.witness),
                ])?;
            }
            t.finish()
        }
    }
}

fn roots(a: &RootsArgs, h: &Header, format: Format, engine: EngineOptions) -> Result<String> {
    let sources = a.circuit.is_some() as u8 + a.counterexample_k.is_some() as u8 + a.coeffs.is_some() as u8;
    if sources != 1 {
        return Err(invalid("give exactly one of --circuit, --counterexample-k, --coeffs"));
    }
    let poly = if let Some(path) = &a.circuit {
        let circuit = Circuit::load(path)?;
        let n = circuit.num_qubits();
        let obs_text = a.observable.as_deref().ok_or_else(|| invalid("--circuit needs --observable"))?;
        let obs = Observable::parse(n, obs_text)?;
        let state = parse_state(n, &a.state)?;
        let est = expectation_truncated(&circuit, &obs, &state, 0.0, None, None, &engine)?;
        est.terms.iter().fold(WeightPolynomial::zero(), |acc, t| acc.add(&t.fw.scaled(t.coeff)))
    } else if let Some(k) = a.counterexample_k {
        counterexample::analytic_polynomial(k)
    } else {
        WeightPolynomial::new(a.coeffs.clone().unwrap_or_default())
    };
    let profile = find_roots(&poly)?;
    let radius = check_radius_bounds(&poly, &profile)?;
    let m = profile.degree;
    let floor = (-(m as f64) / 2.0).exp2();
    let opts = FragilityOptions {
        radius: a.radius,
        epsilon: a.epsilon,
        g_threshold: a.g_threshold.unwrap_or(m.saturating_sub(1).max(1)),
        grid_points: a.grid_points,
        ..Default::default()
    };
    let fragility = fragility_certificate(&poly, &opts)?;
    match format {
        Format::Json => render_json(
            h,
            json!({
                "coefficients": poly.coeffs(),
                "l2_norm": l2_norm(&poly),
                "degree": m,
                "leading": profile.leading,
                "leading_floor": floor,
                "leading_floor_holds": profile.leading.abs() >= floor,
                "roots": profile.roots,
                "all_real": profile.all_real,
                "radius_checks": radius,
                "fragility": fragility,
            }),
        ),
        Format::Csv => {
            let mut t = Table::new(h, &["index", "re", "im", "abs"])?;
            for (i, z) in profile.roots.iter().enumerate() {
                t.row(&[i.to_string(), num(z.re), num(z.im), num(z.norm())])?;
            }
            t.finish()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3").unwrap(), vec![3]);
        assert_eq!(parse_range("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_range("2..=5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_range("32..40:4").unwrap(), vec![32, 36, 40]);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("1..4:0").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn states_and_lattices() {
        assert_eq!(parse_state(2, "plus").unwrap(), ProductState::plus(2));
        assert_eq!(parse_state(2, "basis:10").unwrap(), ProductState::basis(&[true, false]));
        let s = parse_state(3, "bloch:0.6,0.0,0.8").unwrap();
        assert_eq!(s.bloch()[2], [0.6, 0.0, 0.8]);
        assert!(parse_state(2, "bloch:1,1,1").is_err());
        assert!(parse_state(2, "basis:1").is_err());
        assert!(parse_state(2, "mixed").is_err());
        assert_eq!(parse_lattice("4x3").unwrap(), Lattice::new(4, 3));
        assert!(parse_lattice("4").is_err());
        assert!(parse_lattice("0x2").is_err());
    }

    #[test]
    fn hash_ignores_threads_and_output() {
        let parse = |extra: &[&str]| {
            let mut v = vec!["pauliflow", "counterexample", "--k", "2", "--ell", "0..8"];
            v.extend_from_slice(extra);
            Cli::try_parse_from(v).unwrap()
        };
        let a = header(&parse(&[])).unwrap();
        let b = header(&parse(&["--threads", "1", "--out", "/tmp/x"])).unwrap();
        let c = header(&parse(&["--seed", "1"])).unwrap();
        assert_eq!(a.config_hash, b.config_hash);
        assert_ne!(a.config_hash, c.config_hash);
    }

    #[test]
    fn counterexample_output_is_stable() {
        let cli = Cli::try_parse_from(["pauliflow", "counterexample", "--k", "1", "--ell", "0..6", "--format", "csv"])
            .unwrap();
        let out = execute(&cli).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("# pauliflow "));
        assert_eq!(lines[1], "ell,E,abs_E,valid,ratio,witness_k,witness");
        // E^(2) = −x⁴/2 at x = 0.9.
        assert!(lines[4].starts_with("2,-0.32805"), "{}", lines[4]);
        assert_eq!(out, execute(&cli).unwrap());
    }
}
