//! `helicity` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use helicity::generators::{gn_set, helicity_set, waerden_set, GnRep, OpMap};
use helicity::gy::{classify, eigenvalues, spin_block, verify_invariance, CarrierGenerators, ChainConfig, GyMatrix};
use helicity::hyperspherical::{m_function, z_factorized, z_series, HypersphericalKey};
use helicity::radial::{assemble_rfs, bessel_probe, integrate, residual, SignConvention};
use helicity::verify::{default_radial_init, run_suite, Suite, SuiteOptions};
use helicity::{CMatrix, Complex64, GroupPoint, HalfInt};
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(name = "helicity", version, about = "Lorentz-group helicity-basis tables, checks and solvers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file (a directory for gy-build).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance replacing the default residual bounds.
    #[arg(long, global = true, env = "HELICITY_TOL")]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Tabulate Z^l_mn(θ, τ) by both routes, plus 𝔐^l_mn at the full point.
    Zfun(ZfunArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Build Λ matrices for a chain and write six JSON files.
    GyBuild(ChainArgs),
    /// Integrate the radial system of a chain.
    Radial(RadialArgs),
    /// Dump generator matrices.
    Ops(OpsArgs),
}

fn halfint(s: &str) -> Result<HalfInt, String> {
    s.parse::<HalfInt>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Grid {
    start: f64,
    stop: f64,
    n: usize,
}

impl Grid {
    fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.start];
        }
        (0..self.n).map(|i| self.start + (self.stop - self.start) * i as f64 / (self.n - 1) as f64).collect()
    }
}

fn grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("grid '{s}' is not START:STOP:N"));
    };
    let start: f64 = a.parse().map_err(|_| format!("bad grid start '{a}'"))?;
    let stop: f64 = b.parse().map_err(|_| format!("bad grid stop '{b}'"))?;
    let n: usize = n.parse().map_err(|_| format!("bad grid count '{n}'"))?;
    if n == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(format!("grid '{s}' is empty or not finite"));
    }
    Ok(Grid { start, stop, n })
}

#[derive(Args, Debug)]
struct Point {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    tau: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    psi: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    eps: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    veps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Axis {
    Theta,
    Tau,
}

#[derive(Args, Debug)]
struct ZfunArgs {
    #[arg(long, value_parser = halfint)]
    l: HalfInt,
    /// All projections when omitted.
    #[arg(long, value_parser = halfint, allow_hyphen_values = true)]
    m: Option<HalfInt>,
    #[arg(long, value_parser = halfint, allow_hyphen_values = true)]
    n: Option<HalfInt>,
    #[command(flatten)]
    point: Point,
    /// Sweep START:STOP:N over the chosen axis.
    #[arg(long, value_parser = grid, allow_hyphen_values = true)]
    grid: Option<Grid>,
    #[arg(long, value_enum, default_value_t = Axis::Theta)]
    axis: Axis,
}

#[derive(Args, Debug)]
struct ChainArgs {
    /// Chain file, or the preset name `dirac`.
    #[arg(long, default_value = "dirac")]
    chain: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    /// Chain for the gy and radial suites.
    #[arg(long)]
    chain: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Literal,
    Alternative,
}

#[derive(Args, Debug)]
struct RadialArgs {
    #[command(flatten)]
    chain: ChainArgs,
    /// Radii START:STOP:STEPS (STEPS + 1 samples).
    #[arg(long, value_parser = grid, default_value = "0.5:60:10000")]
    grid: Grid,
    /// Spectator weight l₀ (largest chain spin when omitted).
    #[arg(long, value_parser = halfint)]
    l0: Option<HalfInt>,
    #[arg(long, value_parser = halfint)]
    l0_dot: Option<HalfInt>,
    #[arg(long, value_enum, default_value_t = SignArg::Literal)]
    sign: SignArg,
    /// Integrate the dotted subsystem.
    #[arg(long)]
    dotted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpSet {
    Waerden,
    Helicity,
    Tilde,
    Gn,
}

#[derive(Args, Debug)]
struct OpsArgs {
    #[arg(long, value_enum)]
    set: OpSet,
    /// Spin l (waerden, helicity, tilde) or l0 (gn).
    #[arg(long, value_parser = halfint)]
    l: HalfInt,
    #[arg(long, value_parser = halfint, default_value = "0")]
    ldot: HalfInt,
    /// Width p of a gn representation.
    #[arg(long, default_value_t = 1)]
    p: u32,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<helicity::Error> for Failure {
    fn from(e: helicity::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("io: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn c(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json<L: helicity::matrix::Label + serde::Serialize>(m: &CMatrix<L>) -> Value {
    let data: Vec<Value> = (0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| c(m.data()[(i, j)])).collect())).collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "data": data })
}

fn envelope(command: &str, inputs: Value, results: Value, residuals: Value) -> Value {
    json!({
        "command": command,
        "inputs": inputs,
        "results": results,
        "residuals": residuals,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn emit(cli: &Cli, text: &str) -> Outcome {
    match &cli.out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(cli: &Cli, v: &Value) -> Outcome {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    emit(cli, &s)
}

fn load_chain(arg: &str) -> Result<ChainConfig, Failure> {
    if arg == "dirac" {
        return Ok(ChainConfig::dirac());
    }
    let text = fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("chain file {arg}: {e}")))?;
    let cfg = ChainConfig::from_json(&text)?;
    cfg.chain()?;
    Ok(cfg)
}

fn cmd_zfun(cli: &Cli, a: &ZfunArgs) -> Outcome {
    let keys: Vec<HypersphericalKey> = match (a.m, a.n) {
        (Some(m), Some(n)) => vec![HypersphericalKey::new(a.l, m, n)?],
        (None, None) => HypersphericalKey::all(a.l),
        (Some(m), None) => HypersphericalKey::all(a.l).into_iter().filter(|k| k.m == m).collect(),
        (None, Some(n)) => HypersphericalKey::all(a.l).into_iter().filter(|k| k.n == n).collect(),
    };
    if keys.is_empty() {
        return Err(Failure::Usage(format!("no valid (m, n) for l = {}", a.l)));
    }
    let p = &a.point;
    let sweep = a.grid.map_or_else(|| vec![if a.axis == Axis::Theta { p.theta } else { p.tau }], |g| g.points());
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for &x in &sweep {
        let (theta, tau) = if a.axis == Axis::Theta { (x, p.tau) } else { (p.theta, x) };
        let g = GroupPoint::new(p.phi, p.eps, theta, tau, p.psi, p.veps);
        for &key in &keys {
            let s = z_series(key, theta, tau);
            let f = z_factorized(key, theta, tau);
            let m = m_function(key, &g);
            let d = (s - f).norm();
            worst = worst.max(d);
            rows.push((key, theta, tau, s, f, m, d));
        }
    }
    match cli.format {
        Format::Csv => {
            let mut out = String::from("l,m,n,theta,tau,series_re,series_im,factorized_re,factorized_im,m_re,m_im,discrepancy\n");
            for (k, th, ta, s, f, m, d) in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{th:e},{ta:e},{:e},{:e},{:e},{:e},{:e},{:e},{d:e}",
                    k.l, k.m, k.n, s.re, s.im, f.re, f.im, m.re, m.im
                );
            }
            emit(cli, &out)
        }
        Format::Json => {
            let table: Vec<Value> = rows
                .iter()
                .map(|(k, th, ta, s, f, m, d)| {
                    json!({"l": k.l, "m": k.m, "n": k.n, "theta": th, "tau": ta,
                           "series": c(*s), "factorized": c(*f), "m_function": c(*m), "discrepancy": d})
                })
                .collect();
            let inputs = json!({"l": a.l, "m": a.m, "n": a.n, "theta": p.theta, "tau": p.tau, "phi": p.phi,
                                "psi": p.psi, "eps": p.eps, "veps": p.veps,
                                "grid": a.grid.map(|g| json!([g.start, g.stop, g.n])),
                                "axis": format!("{:?}", a.axis).to_lowercase()});
            emit_json(cli, &envelope("zfun", inputs, Value::Array(table), json!({"max_discrepancy": worst})))
        }
    }
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Outcome {
    let suite: Suite = a.suite.parse().map_err(|e: helicity::Error| {
        Failure::Usage(format!("{e}; expected one of {}", Suite::ALL.map(Suite::name).join(", ")))
    })?;
    let chain = a.chain.as_deref().map(load_chain).transpose()?;
    let report = run_suite(suite, &SuiteOptions { tol: cli.tol, chain })?;
    match cli.format {
        Format::Csv => {
            let mut out = String::from("name,value,tol,min,pass,informational\n");
            for ch in &report.checks {
                let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:e}"));
                let _ = writeln!(out, "\"{}\",{:e},{},{},{},{}", ch.name, ch.value, opt(ch.tol), opt(ch.min), ch.pass, ch.informational);
            }
            emit(cli, &out)?;
        }
        Format::Json => {
            let mut residuals = Map::new();
            for ch in report.checks.iter().filter(|c| c.tol.is_some()) {
                residuals.insert(ch.name.clone(), json!(ch.value));
            }
            let mut results = serde_json::to_value(&report).expect("serializable");
            if let Some(obj) = results.as_object_mut() {
                obj.insert("max_residual".into(), json!(report.max_residual()));
                if let Some(signs) = report.details.get("realized_signs") {
                    obj.insert("realized_signs".into(), signs.clone());
                }
            }
            let inputs = json!({"suite": suite.name(), "chain": a.chain, "tol": cli.tol});
            emit_json(cli, &envelope("verify", inputs, results, Value::Object(residuals)))?;
        }
    }
    if report.pass {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().iter().map(|c| c.name.as_str()).collect();
        Err(Failure::Verification(format!("suite {} failed: {}", suite.name(), names.join(", "))))
    }
}

fn write_matrix_file(dir: &Path, name: &str, m: &GyMatrix) -> Result<String, Failure> {
    let path = dir.join(format!("{name}.json"));
    let mut s = serde_json::to_string_pretty(&matrix_json(m)).expect("serializable");
    s.push('\n');
    fs::write(&path, s)?;
    Ok(path.display().to_string())
}

fn cmd_gy_build(cli: &Cli, a: &ChainArgs) -> Outcome {
    let Some(dir) = &cli.out else {
        return Err(Failure::Usage("gy-build needs --out DIR".into()));
    };
    let cfg = load_chain(&a.chain)?;
    let sys = cfg.build()?;
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for (i, l) in sys.lambdas.iter().enumerate() {
        files.push(write_matrix_file(dir, &format!("lambda{}", i + 1), l)?);
    }
    for (i, l) in sys.lambdas_dot.iter().enumerate() {
        files.push(write_matrix_file(dir, &format!("lambda{}_dot", i + 1), l)?);
    }
    let gens = CarrierGenerators::new(&sys.chain)?;
    let inv = verify_invariance(&sys, &gens)?;
    let mut roots = Map::new();
    let mut spins: Vec<HalfInt> = sys.chain.carrier().iter().map(|x| x.l).collect();
    spins.sort();
    spins.dedup();
    for s in spins {
        let ev = eigenvalues(&spin_block(&sys.lambdas[2], s)?)?;
        roots.insert(s.to_string(), Value::Array(ev.into_iter().map(c).collect()));
    }
    let mut residuals = Map::new();
    for r in &inv.relations {
        residuals.insert(format!("{}/{}", r.table, r.relation), json!(r.residual));
    }
    let results = json!({
        "dim": sys.chain.dim(),
        "files": files,
        "links": sys.chain.links,
        "components": classify(&sys.chain),
        "spin_block_roots": roots,
        "max_invariance_residual": inv.max_residual,
    });
    let inputs = json!({"chain": a.chain, "config": cfg});
    let mut s = serde_json::to_string_pretty(&envelope("gy-build", inputs, results, Value::Object(residuals))).expect("serializable");
    s.push('\n');
    print!("{s}");
    Ok(())
}

fn cmd_radial(cli: &Cli, a: &RadialArgs) -> Outcome {
    let cfg = load_chain(&a.chain.chain)?;
    let sys = cfg.build()?;
    let lmax = sys.chain.carrier().iter().map(|x| x.l).max().unwrap_or(HalfInt::ZERO);
    let sign = match a.sign {
        SignArg::Literal => SignConvention::Literal,
        SignArg::Alternative => SignConvention::Alternative,
    };
    let rs = assemble_rfs(&sys, a.l0.unwrap_or(lmax), a.l0_dot.unwrap_or(lmax), sign)?;
    let sub = if a.dotted { &rs.dotted } else { &rs.undotted };
    let init = default_radial_init(sub.labels().len());
    let sol = integrate(sub, a.grid.start, a.grid.stop, &init, a.grid.n)?;
    let res = residual(sub, &sol)?;
    let probe = bessel_probe(&sol);
    let mut csv = String::from("r");
    for l in &sol.labels {
        let tag = format!("{}_{}_{}", l.k, l.l, l.m);
        let _ = write!(csv, ",re[{tag}],im[{tag}]");
    }
    csv.push('\n');
    for (r, v) in sol.grid.iter().zip(&sol.values) {
        let _ = write!(csv, "{r:e}");
        for z in v {
            let _ = write!(csv, ",{:e},{:e}", z.re, z.im);
        }
        csv.push('\n');
    }
    let inputs = json!({"chain": a.chain.chain, "grid": [a.grid.start, a.grid.stop, a.grid.n],
                        "l0": rs.l0, "l0_dot": rs.l0_dot, "sign": sign, "dotted": a.dotted,
                        "init": init.iter().map(|z| c(*z)).collect::<Vec<_>>()});
    let summary = json!({"rows": sol.grid.len(), "components": sol.labels, "bessel_probe": probe, "output": cli.out});
    let residuals = json!({"residual": res});
    match (&cli.out, cli.format) {
        (Some(p), _) => {
            fs::write(p, &csv)?;
            let mut s = serde_json::to_string_pretty(&envelope("radial", inputs, summary, residuals)).expect("serializable");
            s.push('\n');
            print!("{s}");
        }
        (None, Format::Csv) => print!("{csv}"),
        (None, Format::Json) => {
            let mut results = summary;
            results["samples"] = json!(sol
                .grid
                .iter()
                .zip(&sol.values)
                .map(|(r, v)| json!({"r": r, "values": v.iter().map(|z| c(*z)).collect::<Vec<_>>()}))
                .collect::<Vec<_>>());
            emit_json(cli, &envelope("radial", inputs, results, residuals))?;
        }
    }
    Ok(())
}

fn cmd_ops(cli: &Cli, a: &OpsArgs) -> Outcome {
    let ops: OpMap = match a.set {
        OpSet::Waerden => waerden_set(a.l, a.ldot)?,
        OpSet::Helicity => helicity_set(a.l, false)?,
        OpSet::Tilde => helicity_set(a.l, true)?,
        OpSet::Gn => gn_set(GnRep::new(a.l, a.p)?)?,
    };
    match cli.format {
        Format::Csv => {
            let mut out = String::from("op,row,col,re,im\n");
            for (k, m) in &ops {
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        let z = m.data()[(i, j)];
                        if z.norm() != 0.0 {
                            let _ = writeln!(out, "{k},\"{}\",\"{}\",{:e},{:e}", m.rows()[i], m.cols()[j], z.re, z.im);
                        }
                    }
                }
            }
            emit(cli, &out)
        }
        Format::Json => {
            let mut results = Map::new();
            for (k, m) in &ops {
                let rows: Vec<String> = m.rows().iter().map(ToString::to_string).collect();
                let data: Vec<Value> =
                    (0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| c(m.data()[(i, j)])).collect())).collect();
                results.insert(k.to_string(), json!({"basis": rows, "data": data}));
            }
            let set = format!("{:?}", a.set).to_lowercase();
            let inputs = json!({"set": set, "l": a.l, "ldot": a.ldot, "p": a.p});
            emit_json(cli, &envelope("ops", inputs, Value::Object(results), json!({})))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.cmd {
        Cmd::Zfun(a) => cmd_zfun(&cli, a),
        Cmd::Verify(a) => cmd_verify(&cli, a),
        Cmd::GyBuild(a) => cmd_gy_build(&cli, a),
        Cmd::Radial(a) => cmd_radial(&cli, a),
        Cmd::Ops(a) => cmd_ops(&cli, a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
