use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use isowigner::eigensystem::OscillatorParams;
use isowigner::flow::{classical_orbit, purity_flux, FlowField, FlowState, FluxOptions, FluxSpan, MoyalOrder};
use isowigner::thermal::{
    partition_function, partition_function_spectral, partition_function_phase_space, thermal_purity, PurityMethod,
    ThermalMethod, ThermalParams, ThermalState,
};
use isowigner::validation::{run, ValidationOptions, CRITERIA};
use isowigner::wigner_states::{Eigenstate, GridSpec, PhaseGrid, QuasiGaussian, QuasiGaussianParams};

const BUILD: &str = concat!("isowigner ", env!("CARGO_PKG_VERSION"));

#[derive(Parser, Debug)]
#[command(name = "isowigner", version, about = "Wigner-function numerics for the singular oscillator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Sample W on an (x, k) grid.
    Grid(GridArgs),
    /// W, the Wigner currents and the continuity residual on a grid.
    Flow(FlowArgs),
    /// Points of the classical orbit at a given energy.
    Orbit(OrbitArgs),
    /// Purity flux along the classical orbit, over one period and over 2π.
    Flux(FluxArgs),
    /// Thermal purity against tanh β for a list of β.
    PuritySweep(SweepArgs),
    /// Partition function by closed form, spectral sum and phase-space integral.
    Partition(PartitionArgs),
    /// Run the acceptance suite.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StateKind {
    Eigen,
    QuasiGaussian,
    Thermal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ThermalForm {
    Bessel,
    Series,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PurityForm {
    Reduced,
    Grid,
    Hypergeometric,
}

#[derive(Args, Debug, Clone)]
struct Output {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Destination file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args, Debug, Clone)]
struct StateArgs {
    #[arg(long, value_enum, default_value = "eigen")]
    state: StateKind,
    #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    tau: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, value_enum, default_value = "bessel")]
    thermal_method: ThermalForm,
}

#[derive(Args, Debug, Clone)]
struct GridBounds {
    /// Defaults to x_max/nx, so the nodes are x_max·i/nx for i = 1..=nx.
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, default_value_t = 128)]
    nx: usize,
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    k_min: f64,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    k_max: f64,
    #[arg(long, default_value_t = 128)]
    nk: usize,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    bounds: GridBounds,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct FlowArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    bounds: GridBounds,
    /// Highest Moyal order kept in J_k, or `all` for the resummed current.
    #[arg(long, default_value = "6")]
    eta_max: EtaMax,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long)]
    energy: f64,
    /// Samples over one period, endpoints included.
    #[arg(long, default_value_t = 257)]
    samples: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct FluxArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long)]
    energy: f64,
    #[arg(long, default_value = "6")]
    eta_max: EtaMax,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    tau_start: f64,
    #[arg(long, default_value_t = 64)]
    panels: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2,4")]
    betas: Vec<f64>,
    #[arg(long, value_enum, default_value = "reduced")]
    method: PurityForm,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct PartitionArgs {
    #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2,4")]
    betas: Vec<f64>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Overrides every internal tolerance of the suite.
    #[arg(long)]
    tol: Option<f64>,
    /// Criterion ids to run; all when absent.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u32>,
    /// Structured report instead of the text table.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct EtaMax(MoyalOrder);

impl std::str::FromStr for EtaMax {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(EtaMax(MoyalOrder::Resummed));
        }
        s.parse::<usize>().map(|n| EtaMax(MoyalOrder::Truncated(n))).map_err(|_| format!("expected a nonnegative integer or `all`, got `{s}`"))
    }
}

impl EtaMax {
    fn label(&self) -> String {
        match self.0 {
            MoyalOrder::Truncated(n) => n.to_string(),
            MoyalOrder::Resummed => "all".into(),
        }
    }
}

enum Failure {
    Args(String),
    Numeric(isowigner::Error),
    Io(String),
    Validation,
}

impl From<isowigner::Error> for Failure {
    fn from(e: isowigner::Error) -> Self {
        Failure::Numeric(e)
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Args(msg.into()))
}

fn arg<T>(r: isowigner::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Args(e.to_string()))
}

#[derive(Clone, Debug)]
enum Cell {
    F(f64),
    I(i64),
    S(String),
    B(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::I(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

/// Shortest representation that round-trips; never more than 17 significant digits.
fn float(v: f64) -> String {
    if v == 0.0 {
        // drops the sign of −0 so reruns compare equal textually
        return "0".into();
    }
    format!("{v:e}")
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(v) => float(*v),
            Cell::I(v) => v.to_string(),
            Cell::S(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(v) if *v == 0.0 => Value::from(0.0),
            Cell::F(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::I(v) => Value::from(*v),
            Cell::S(s) => Value::from(s.clone()),
            Cell::B(b) => Value::from(*b),
        }
    }
}

struct Table {
    meta: Vec<(String, Cell)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(command: &str, columns: Vec<&'static str>) -> Self {
        let mut t = Self { meta: Vec::new(), columns, rows: Vec::new() };
        t.meta("command", command);
        t.meta("build", BUILD);
        t
    }

    fn meta(&mut self, key: &str, v: impl Into<Cell>) {
        self.meta.push((key.to_string(), v.into()));
    }

    fn row(&mut self, r: Vec<Cell>) {
        debug_assert_eq!(r.len(), self.columns.len());
        self.rows.push(r);
    }

    fn render(&self, f: Format) -> String {
        match f {
            Format::Csv => {
                let mut s = String::new();
                for (k, v) in &self.meta {
                    let _ = writeln!(s, "# {k}={}", v.csv().trim_matches('"'));
                }
                s.push_str(&self.columns.join(","));
                s.push('\n');
                for r in &self.rows {
                    let line: Vec<String> = r.iter().map(Cell::csv).collect();
                    s.push_str(&line.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), v.json())).collect();
                let data: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Object(self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect()))
                    .collect();
                let mut s = serde_json::to_string_pretty(&serde_json::json!({ "meta": meta, "data": data })).expect("json");
                s.push('\n');
                s
            }
        }
    }
}

/// Writes next to the destination, then renames over it.
fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(e.to_string());
    match out {
        None => {
            let mut h = std::io::stdout().lock();
            h.write_all(text.as_bytes()).map_err(io)?;
            h.flush().map_err(io)
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
            tmp.write_all(text.as_bytes()).map_err(io)?;
            tmp.as_file().sync_all().map_err(io)?;
            tmp.persist(path).map_err(|e| Failure::Io(format!("{}: {}", path.display(), e.error)))?;
            Ok(())
        }
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if !(tol > 0.0 && tol < 1.0) {
        return bad(format!("--tol must lie in (0, 1), got {tol}"));
    }
    Ok(())
}

fn check_betas(betas: &[f64]) -> Result<(), Failure> {
    if betas.is_empty() {
        return bad("--betas needs at least one value");
    }
    if let Some(b) = betas.iter().find(|b| !(**b >= 0.01 && **b <= 50.0)) {
        return bad(format!("beta must lie in [0.01, 50], got {b}"));
    }
    Ok(())
}

enum State {
    Eigen(Eigenstate<f64>),
    Quasi(QuasiGaussian<f64>),
    Thermal(ThermalState<f64>),
}

impl State {
    fn build(a: &StateArgs) -> Result<Self, Failure> {
        let p = arg(OscillatorParams::new(a.alpha))?;
        Ok(match a.state {
            StateKind::Eigen => State::Eigen(Eigenstate::new(p, a.n)),
            StateKind::QuasiGaussian => State::Quasi(QuasiGaussian::new(p, arg(QuasiGaussianParams::new(a.gamma, a.tau))?)),
            StateKind::Thermal => {
                let m = match a.thermal_method {
                    ThermalForm::Bessel => ThermalMethod::Bessel,
                    ThermalForm::Series => ThermalMethod::Series,
                };
                State::Thermal(ThermalState::new(p, arg(ThermalParams::new(a.beta))?, m))
            }
        })
    }

    fn get(&self) -> &(dyn FlowState<f64> + Sync) {
        match self {
            State::Eigen(s) => s,
            State::Quasi(s) => s,
            State::Thermal(s) => s,
        }
    }
}

fn state_meta(t: &mut Table, a: &StateArgs, s: &State) {
    t.meta("state", s.get().descriptor());
    t.meta("alpha", a.alpha);
    match a.state {
        StateKind::Eigen => t.meta("n", a.n),
        StateKind::QuasiGaussian => {
            t.meta("gamma", a.gamma);
            t.meta("tau", a.tau);
        }
        StateKind::Thermal => t.meta("beta", a.beta),
    }
}

fn grid_spec(b: &GridBounds) -> Result<GridSpec<f64>, Failure> {
    if b.nx == 0 || b.nk == 0 {
        return bad("--nx and --nk must be positive");
    }
    let g = GridSpec {
        x_min: b.x_min.unwrap_or(b.x_max / b.nx as f64),
        x_max: b.x_max,
        nx: b.nx,
        k_min: b.k_min,
        k_max: b.k_max,
        nk: b.nk,
    };
    arg(g.validate())?;
    Ok(g)
}

fn grid_meta(t: &mut Table, g: &GridSpec<f64>) {
    t.meta("x_min", g.x_min);
    t.meta("x_max", g.x_max);
    t.meta("nx", g.nx);
    t.meta("k_min", g.k_min);
    t.meta("k_max", g.k_max);
    t.meta("nk", g.nk);
}

/// Evaluates `f` on each x-row of the grid across threads; row order is preserved.
fn by_rows<R: Send>(g: &GridSpec<f64>, f: impl Fn(GridSpec<f64>) -> isowigner::Result<R> + Sync) -> isowigner::Result<Vec<R>> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(g.nx);
    let row = |i: usize| GridSpec { x_min: g.x(i), x_max: g.x(i), nx: 1, ..*g };
    let mut slots: Vec<Option<isowigner::Result<R>>> = (0..g.nx).map(|_| None).collect();
    thread::scope(|sc| {
        let chunk = g.nx.div_ceil(workers);
        for (c, part) in slots.chunks_mut(chunk).enumerate() {
            let f = &f;
            sc.spawn(move || {
                for (o, slot) in part.iter_mut().enumerate() {
                    *slot = Some(f(row(c * chunk + o)));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("row evaluated")).collect()
}

fn cmd_grid(a: &GridArgs) -> Result<Table, Failure> {
    check_tol(a.out.tol)?;
    let s = State::build(&a.state)?;
    let g = grid_spec(&a.bounds)?;
    let st = s.get();
    let rows = by_rows(&g, |r| PhaseGrid::fill(st, r, a.out.tol))?;
    let mut t = Table::new("grid", vec!["x", "k", "W"]);
    state_meta(&mut t, &a.state, &s);
    grid_meta(&mut t, &g);
    t.meta("tol", a.out.tol);
    for (i, r) in rows.iter().enumerate() {
        for j in 0..g.nk {
            t.row(vec![g.x(i).into(), g.k(j).into(), r.values[j].into()]);
        }
    }
    Ok(t)
}

fn cmd_flow(a: &FlowArgs) -> Result<Table, Failure> {
    check_tol(a.out.tol)?;
    let s = State::build(&a.state)?;
    let g = grid_spec(&a.bounds)?;
    let st = s.get();
    let rows = by_rows(&g, |r| FlowField::fill(st, r, a.eta_max.0, a.out.tol))?;
    let mut t = Table::new("flow", vec!["x", "k", "W", "Jx", "Jk", "residual"]);
    state_meta(&mut t, &a.state, &s);
    grid_meta(&mut t, &g);
    t.meta("eta_max", a.eta_max.label());
    t.meta("tol", a.out.tol);
    for (i, f) in rows.iter().enumerate() {
        for j in 0..g.nk {
            t.row(vec![g.x(i).into(), g.k(j).into(), f.w[j].into(), f.jx[j].into(), f.jk[j].into(), f.divergence[j].into()]);
        }
    }
    Ok(t)
}

fn cmd_orbit(a: &OrbitArgs) -> Result<Table, Failure> {
    let p = arg(OscillatorParams::new(a.alpha))?;
    if a.samples < 2 {
        return bad("--samples must be at least 2");
    }
    let o = classical_orbit(&p, a.energy).map_err(|e| Failure::Args(e.to_string()))?;
    let (lo, hi) = o.turning_points();
    let mut t = Table::new("orbit", vec!["tau", "x", "k", "H"]);
    t.meta("alpha", a.alpha);
    t.meta("energy", a.energy);
    t.meta("samples", a.samples);
    t.meta("period", o.period());
    t.meta("x_inner", lo);
    t.meta("x_outer", hi);
    for i in 0..a.samples {
        let tau = o.period() * i as f64 / (a.samples - 1) as f64;
        let (x, k) = o.point(tau);
        t.row(vec![tau.into(), x.into(), k.into(), o.hamiltonian(x, k).into()]);
    }
    Ok(t)
}

fn cmd_flux(a: &FluxArgs) -> Result<Table, Failure> {
    check_tol(a.out.tol)?;
    if a.panels == 0 {
        return bad("--panels must be positive");
    }
    let s = State::build(&a.state)?;
    let p = *s.get().oscillator();
    let o = classical_orbit(&p, a.energy).map_err(|e| Failure::Args(e.to_string()))?;
    let mut t = Table::new("flux", vec!["span", "tau_start", "tau_end", "flux"]);
    state_meta(&mut t, &a.state, &s);
    t.meta("energy", a.energy);
    t.meta("eta_max", a.eta_max.label());
    t.meta("panels", a.panels);
    t.meta("tol", a.out.tol);
    for (name, span, len) in [("orbit", FluxSpan::Orbit, o.period()), ("2pi", FluxSpan::TwoPi, 2.0 * std::f64::consts::PI)] {
        let opts = FluxOptions { span, tau_start: a.tau_start, panels: a.panels };
        let f = purity_flux(s.get(), &o, a.eta_max.0, &opts, a.out.tol)?;
        t.row(vec![name.into(), a.tau_start.into(), (a.tau_start + len).into(), f.into()]);
    }
    Ok(t)
}

fn cmd_purity_sweep(a: &SweepArgs) -> Result<Table, Failure> {
    check_tol(a.out.tol)?;
    check_betas(&a.betas)?;
    let p = arg(OscillatorParams::new(a.alpha))?;
    let (method, label) = match a.method {
        PurityForm::Reduced => (PurityMethod::Reduced, "reduced"),
        PurityForm::Grid => (PurityMethod::Grid, "grid"),
        PurityForm::Hypergeometric => (PurityMethod::Hypergeometric, "hypergeometric"),
    };
    let mut t = Table::new("purity-sweep", vec!["beta", "purity", "tanh_beta", "abs_difference"]);
    t.meta("alpha", a.alpha);
    t.meta("method", label);
    t.meta("betas", a.betas.iter().map(|b| float(*b)).collect::<Vec<_>>().join(";"));
    t.meta("tol", a.out.tol);
    for &b in &a.betas {
        let tp = arg(ThermalParams::new(b))?;
        let pur = match thermal_purity(&p, &tp, method, a.out.tol) {
            Err(isowigner::Error::Unsupported(m)) => return bad(m),
            r => r?,
        };
        t.row(vec![b.into(), pur.into(), b.tanh().into(), (pur - b.tanh()).abs().into()]);
    }
    Ok(t)
}

fn cmd_partition(a: &PartitionArgs) -> Result<Table, Failure> {
    check_tol(a.out.tol)?;
    check_betas(&a.betas)?;
    let p = arg(OscillatorParams::new(a.alpha))?;
    let mut t = Table::new("partition", vec!["beta", "z_closed", "z_spectral", "z_phase_space"]);
    t.meta("alpha", a.alpha);
    t.meta("betas", a.betas.iter().map(|b| float(*b)).collect::<Vec<_>>().join(";"));
    t.meta("tol", a.out.tol);
    for &b in &a.betas {
        let tp = arg(ThermalParams::new(b))?;
        let zs = partition_function_spectral(&tp, a.out.tol.min(1e-12));
        let zp = partition_function_phase_space(&p, &tp, a.out.tol)?;
        t.row(vec![b.into(), partition_function(&tp).into(), zs.into(), zp.into()]);
    }
    Ok(t)
}

fn cmd_validate(a: &ValidateArgs) -> Result<(), Failure> {
    if let Some(tol) = a.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return bad(format!("--tol must be positive, got {tol}"));
        }
    }
    let ids: Vec<u32> = if a.only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { a.only.clone() };
    let opts = ValidationOptions { tol: a.tol };
    let mut reports = Vec::new();
    for id in ids {
        let r = run(id, &opts).ok_or_else(|| Failure::Args(format!("unknown criterion {id}")))?;
        if a.format.is_none() {
            // streamed so long runs show progress
            emit_line(&r.line(), a.out.is_none());
        }
        reports.push(r);
    }
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| format!("[{}] {}", r.id, r.name)).collect();
    let passed = reports.len() - failed.len();
    let text = match a.format {
        None => {
            let mut s: String = reports.iter().map(|r| r.line() + "\n").collect();
            let _ = writeln!(s, "{passed}/{} criteria passed", reports.len());
            s
        }
        Some(f) => {
            let mut t = Table::new("validate", vec!["id", "name", "passed", "measured", "target", "elapsed_s", "detail"]);
            t.meta("tol", a.tol.map_or("default".to_string(), float));
            t.meta("passed", passed);
            t.meta("total", reports.len());
            for r in &reports {
                t.row(vec![
                    (r.id as usize).into(),
                    r.name.into(),
                    r.passed.into(),
                    r.measured.into(),
                    r.target.into(),
                    r.elapsed.as_secs_f64().into(),
                    r.detail.clone().into(),
                ]);
            }
            t.render(f)
        }
    };
    match (&a.out, a.format) {
        (None, None) => println!("{passed}/{} criteria passed", reports.len()),
        (out, _) => emit(&text, out.as_deref())?,
    }
    if failed.is_empty() {
        Ok(())
    } else {
        eprintln!("failing criteria: {}", failed.join(", "));
        Err(Failure::Validation)
    }
}

fn emit_line(line: &str, to_stdout: bool) {
    if to_stdout {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let made: Result<Option<(Table, Output)>, Failure> = match &cli.cmd {
        Cmd::Grid(a) => cmd_grid(a).map(|t| Some((t, a.out.clone()))),
        Cmd::Flow(a) => cmd_flow(a).map(|t| Some((t, a.out.clone()))),
        Cmd::Orbit(a) => cmd_orbit(a).map(|t| Some((t, a.out.clone()))),
        Cmd::Flux(a) => cmd_flux(a).map(|t| Some((t, a.out.clone()))),
        Cmd::PuritySweep(a) => cmd_purity_sweep(a).map(|t| Some((t, a.out.clone()))),
        Cmd::Partition(a) => cmd_partition(a).map(|t| Some((t, a.out.clone()))),
        Cmd::Validate(a) => cmd_validate(a).map(|_| None),
    };
    let r = made.and_then(|m| match m {
        Some((t, o)) => emit(&t.render(o.format), o.out.as_deref()),
        None => Ok(()),
    });
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation) => ExitCode::from(1),
        Err(Failure::Args(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("numerical failure: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("i/o failure: {m}");
            ExitCode::from(3)
        }
    }
}
