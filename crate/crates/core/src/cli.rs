//! Command-line front end.
//!
//! Every subcommand writes CSV (to `--out` or stdout). When `--out` is
//! given, a `<out>.meta.json` sidecar records the full configuration and
//! summary quantities. Exit status is 0 on success, 1 for invalid input and
//! 2 for numerical failures.

use crate::dataio::{self, expand_degree2, parse_libsvm, standardize};
use crate::linalg::{mahalanobis_norm, norm2};
use crate::newton::{
    coherence, error_sweep, run_distributed_newton, run_exact_newton, MachineConfig, Scheme,
    SweepRow,
};
use crate::objective::{Dataset, LossKind, Objective};
use crate::oracle::{
    expect_determinantal_newton_step, expect_uniform_newton_bias, identity_deviations,
    random_model, rank_two_counterexample, OracleError, MAX_COMPONENTS, MAX_OUTCOMES,
};
use crate::uq::{exact_precision_statistic, uq_sweep, Statistic, UqRow};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

/// Tolerance for the exact identities checked by `verify-identities`.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "detavg",
    version,
    about = "Determinant-weighted averaging experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton-step estimation error against the number of machines.
    NewtonSweep(NewtonSweepArgs),
    /// Precision-matrix statistic estimation error against the number of machines.
    UqSweep(UqSweepArgs),
    /// Check the exact expectation identities by enumeration.
    VerifyIdentities(VerifyArgs),
    /// Distance to the optimum along distributed Newton iterations.
    NewtonConverge(ConvergeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SynthSpec {
    pub n: usize,
    pub d: usize,
    pub noise: f64,
}

fn parse_synth(s: &str) -> Result<SynthSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [n, d, noise] = parts[..] else {
        return Err("expected n,d,noise".into());
    };
    Ok(SynthSpec {
        n: n.parse().map_err(|_| format!("invalid n '{n}'"))?,
        d: d.parse().map_err(|_| format!("invalid d '{d}'"))?,
        noise: noise
            .parse()
            .map_err(|_| format!("invalid noise '{noise}'"))?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda {
    /// `1/n`
    Auto,
    Value(f64),
}

fn parse_lambda(s: &str) -> Result<Lambda, String> {
    if s == "auto" {
        return Ok(Lambda::Auto);
    }
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(Lambda::Value(v)),
        _ => Err(format!("expected 'auto' or a positive number, got '{s}'")),
    }
}

fn parse_loss(s: &str) -> Result<LossKind, String> {
    match s {
        "square" => Ok(LossKind::Square),
        "logistic" => Ok(LossKind::Logistic),
        other => Err(format!("unknown loss '{other}' (square|logistic)")),
    }
}

/// `uniform`, `determinantal` or `both`.
#[derive(Debug, Clone, PartialEq)]
pub struct Schemes(pub Vec<Scheme>);

fn parse_schemes(s: &str) -> Result<Schemes, String> {
    match s {
        "both" => Ok(Schemes(vec![Scheme::Uniform, Scheme::Determinantal])),
        other => other
            .parse()
            .map(|s| Schemes(vec![s]))
            .map_err(|e: Error| e.to_string()),
    }
}

fn parse_statistic(s: &str) -> Result<Statistic, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// libsvm-format data file.
    #[arg(long, conflicts_with = "synth", required_unless_present = "synth")]
    pub dataset: Option<PathBuf>,
    /// Synthetic Gaussian data: `n,d,noise`.
    #[arg(long, value_parser = parse_synth)]
    pub synth: Option<SynthSpec>,
    /// Seed for synthetic data (independent of `--seed`).
    #[arg(long, default_value_t = 0)]
    pub data_seed: u64,
    /// Expand features to all degree-2 monomials.
    #[arg(long)]
    pub expand: bool,
    /// Center and scale every feature column.
    #[arg(long)]
    pub standardize: bool,
    #[arg(long, default_value = "square", value_parser = parse_loss)]
    pub loss: LossKind,
    /// Ridge parameter, or `auto` for 1/n.
    #[arg(long, default_value = "auto", value_parser = parse_lambda)]
    pub lambda: Lambda,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Master seed for all sampling.
    #[arg(long, env = "DETAVG_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output CSV path (stdout when omitted, without metadata).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct NewtonSweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Expected local sample size.
    #[arg(long, value_parser = parse_positive)]
    pub k: f64,
    /// Ascending list of machine counts, e.g. `8,16,32`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value = "both", value_parser = parse_schemes)]
    pub scheme: Schemes,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct UqSweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_parser = parse_positive)]
    pub k: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Ridge scale; each machine adds `eta/sqrt(m)`.
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    pub eta: f64,
    #[arg(long, default_value = "trace", value_parser = parse_statistic)]
    pub statistic: Statistic,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_parser = parse_positive)]
    pub k: f64,
    /// Number of machines.
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 10)]
    pub iters: usize,
    #[arg(long, default_value = "determinantal", value_parser = parse_schemes)]
    pub scheme: Schemes,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Number of random models.
    #[arg(long, default_value_t = 60)]
    pub models: usize,
    /// Largest number of random components per model.
    #[arg(long, default_value_t = 8)]
    pub max_n: usize,
    /// Largest matrix dimension.
    #[arg(long, default_value_t = 3)]
    pub max_d: usize,
    /// Deterministic part `B = λI` of every model.
    #[arg(long, default_value_t = 0.1, value_parser = parse_positive)]
    pub lambda: f64,
    #[arg(long, env = "DETAVG_SEED", default_value_t = 0)]
    pub seed: u64,
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.threads {
        Some(0) => Err(Error::Config("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start thread pool: {e}")))
            .and_then(|pool| pool.install(|| dispatch(&cli.command))),
        None => dispatch(&cli.command),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(command: &Command) -> Result<i32> {
    match command {
        Command::NewtonSweep(a) => newton_sweep(a).map(|_| 0),
        Command::UqSweep(a) => uq_sweep_cmd(a).map(|_| 0),
        Command::NewtonConverge(a) => newton_converge(a).map(|_| 0),
        Command::VerifyIdentities(a) => verify_identities(a, &mut io::stdout().lock()),
    }
}

struct Loaded {
    data: Dataset,
    source: Value,
}

fn load_data(args: &DataArgs) -> Result<Loaded> {
    let (mut data, mut source) = match (&args.dataset, args.synth) {
        (Some(path), _) => {
            let file = File::open(path)?;
            let data = parse_libsvm(BufReader::new(file))?;
            (data, json!({ "path": path.display().to_string() }))
        }
        (None, Some(s)) => {
            let data = match args.loss {
                LossKind::Square => dataio::synth_regression(s.n, s.d, s.noise, args.data_seed)?,
                LossKind::Logistic => {
                    dataio::synth_classification(s.n, s.d, s.noise, args.data_seed)?
                }
            };
            (data, json!({ "synth": s, "data_seed": args.data_seed }))
        }
        (None, None) => {
            return Err(Error::Config(
                "one of --dataset or --synth is required".into(),
            ))
        }
    };
    if args.expand {
        let e = expand_degree2(&data)?;
        source["expanded"] = json!({ "removed_columns": e.removed });
        data = e.data;
    }
    if args.standardize {
        data = standardize(&data);
        source["standardized"] = json!(true);
    }
    if args.loss == LossKind::Logistic {
        data = binary_labels(data)?;
    }
    source["n"] = json!(data.n());
    source["d"] = json!(data.d());
    Ok(Loaded { data, source })
}

/// Logistic loss expects labels in {0, 1}; ±1 labels are mapped over.
fn binary_labels(data: Dataset) -> Result<Dataset> {
    let y = data.labels();
    if y.iter().all(|&v| v == 0.0 || v == 1.0) {
        return Ok(data);
    }
    if y.iter().all(|&v| v == -1.0 || v == 1.0) {
        let mapped = y.iter().map(|&v| if v > 0.0 { 1.0 } else { 0.0 }).collect();
        return Ok(Dataset::new(
            data.n(),
            data.d(),
            data.features().to_vec(),
            mapped,
        )?);
    }
    Err(Error::Config(
        "logistic loss needs labels in {0, 1} or {-1, +1}".into(),
    ))
}

fn objective(data: Dataset, args: &DataArgs) -> Result<Objective> {
    Ok(match args.lambda {
        Lambda::Auto => Objective::with_default_lambda(data, args.loss),
        Lambda::Value(l) => Objective::new(data, args.loss, l)?,
    })
}

fn data_config(args: &DataArgs, obj: &Objective) -> Value {
    json!({
        "loss": obj.loss(),
        "lambda": obj.lambda(),
        "lambda_arg": match args.lambda { Lambda::Auto => "auto".to_string(), Lambda::Value(v) => v.to_string() },
        "expand": args.expand,
        "standardize": args.standardize,
    })
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::Config("--trials must be at least 1".into()));
    }
    Ok(())
}

fn write_csv<T: Serialize>(out: Option<&Path>, rows: &[T]) -> Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(io::Error::other(format!("{other:?}"))),
    }
}

/// `<out>.meta.json` next to the CSV.
pub fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn write_meta(out: Option<&Path>, meta: Value) -> Result<()> {
    if let Some(p) = out {
        let text = serde_json::to_string_pretty(&meta).map_err(io::Error::other)?;
        std::fs::write(meta_path(p), text + "\n")?;
    }
    Ok(())
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn newton_sweep(a: &NewtonSweepArgs) -> Result<()> {
    check_trials(a.trials)?;
    let loaded = load_data(&a.data)?;
    let obj = objective(loaded.data, &a.data)?;
    let w = vec![0.0; obj.dim()];
    let rows = error_sweep(&obj, &w, a.k, &a.m, a.trials, &a.scheme.0, a.run.seed)?;
    write_csv(a.run.out.as_deref(), &rows)?;

    let p = obj.exact_newton_step(&w)?;
    let medians: Vec<Value> = a
        .scheme
        .0
        .iter()
        .flat_map(|&s| a.m.iter().map(move |&m| (s, m)))
        .map(|(s, m)| {
            let errs: Vec<&SweepRow> = rows.iter().filter(|r| r.scheme == s && r.m == m).collect();
            json!({
                "scheme": s,
                "m": m,
                "median_err_euclidean": median(errs.iter().map(|r| r.err_euclidean).collect()),
                "median_err_hnorm": median(errs.iter().map(|r| r.err_hnorm).collect()),
            })
        })
        .collect();
    write_meta(
        a.run.out.as_deref(),
        json!({
            "command": "newton-sweep",
            "data": loaded.source,
            "objective": data_config(&a.data, &obj),
            "k": a.k,
            "m": a.m,
            "trials": a.trials,
            "schemes": a.scheme.0,
            "seed": a.run.seed,
            "w": "zero",
            "coherence": coherence(&obj, &w)?,
            "newton_step_norm": norm2(&p),
            "newton_step_hnorm": mahalanobis_norm(&p, &obj.hessian(&w))?,
            "medians": medians,
        }),
    )
}

fn uq_sweep_cmd(a: &UqSweepArgs) -> Result<()> {
    check_trials(a.trials)?;
    let loaded = load_data(&a.data)?;
    let data = loaded.data;
    let rows = uq_sweep(&data, a.k, a.eta, &a.m, a.trials, a.statistic, a.run.seed)?;
    write_csv(a.run.out.as_deref(), &rows)?;

    let medians: Vec<Value> = a
        .m
        .iter()
        .map(|&m| {
            let errs: Vec<&UqRow> = rows.iter().filter(|r| r.m == m).collect();
            json!({ "m": m, "median_abs_err": median(errs.iter().map(|r| r.abs_err).collect()) })
        })
        .collect();
    write_meta(
        a.run.out.as_deref(),
        json!({
            "command": "uq-sweep",
            "data": loaded.source,
            "k": a.k,
            "m": a.m,
            "trials": a.trials,
            "eta": a.eta,
            "statistic": a.statistic,
            "seed": a.run.seed,
            "exact": exact_precision_statistic(&data, a.statistic)?,
            "medians": medians,
        }),
    )
}

#[derive(Debug, Serialize)]
struct ConvergeRow<'a> {
    iter: usize,
    dist_to_opt: f64,
    loss: f64,
    scheme: &'a str,
}

fn newton_converge(a: &ConvergeArgs) -> Result<()> {
    let loaded = load_data(&a.data)?;
    let obj = objective(loaded.data, &a.data)?;
    let w0 = vec![0.0; obj.dim()];
    let mut trajectories = Vec::new();
    for &scheme in &a.scheme.0 {
        let cfg = MachineConfig::new(a.m, a.k, scheme);
        trajectories.push((
            scheme.as_str(),
            run_distributed_newton(&obj, &w0, a.iters, &cfg, a.run.seed)?,
        ));
    }
    trajectories.push(("exact", run_exact_newton(&obj, &w0, a.iters)?));

    let rows: Vec<ConvergeRow> =
        trajectories
            .iter()
            .flat_map(|(scheme, t)| {
                t.dist_to_opt.iter().zip(&t.loss).enumerate().map(
                    |(iter, (&dist_to_opt, &loss))| ConvergeRow {
                        iter,
                        dist_to_opt,
                        loss,
                        scheme,
                    },
                )
            })
            .collect();
    write_csv(a.run.out.as_deref(), &rows)?;

    let optimum = &trajectories[0].1.optimum;
    write_meta(
        a.run.out.as_deref(),
        json!({
            "command": "newton-converge",
            "data": loaded.source,
            "objective": data_config(&a.data, &obj),
            "k": a.k,
            "m": a.m,
            "iters": a.iters,
            "schemes": a.scheme.0,
            "seed": a.run.seed,
            "w0": "zero",
            "coherence_at_w0": coherence(&obj, &w0)?,
            "coherence_at_optimum": coherence(&obj, optimum)?,
            "optimum_norm": norm2(optimum),
            "optimum_loss": obj.loss_value(optimum),
        }),
    )
}

/// Outcome of one line of the identity report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// A case built to violate the identity, and it does.
    ExpectedFail,
    /// A case built to violate the identity that unexpectedly satisfies it.
    UnexpectedPass,
}

impl Verdict {
    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::ExpectedFail => "expected-fail",
            Verdict::UnexpectedPass => "UNEXPECTED-PASS",
        }
    }

    fn ok(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::ExpectedFail)
    }
}

fn must_hold(dev: f64) -> Verdict {
    if dev <= IDENTITY_TOL {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn must_break(dev: f64) -> Verdict {
    if dev > IDENTITY_TOL {
        Verdict::ExpectedFail
    } else {
        Verdict::UnexpectedPass
    }
}

/// Small square-loss problem with every Newton quantity enumerable.
fn enumerable_objective() -> Result<Objective> {
    let data = Dataset::from_rows(
        &[
            vec![1.0, 0.5],
            vec![-0.3, 1.2],
            vec![0.8, -1.0],
            vec![1.5, 0.7],
        ],
        vec![1.0, -0.5, 2.0, 0.3],
    )?;
    Ok(Objective::new(data, LossKind::Square, 0.1)?)
}

pub fn verify_identities<W: Write>(a: &VerifyArgs, out: &mut W) -> Result<i32> {
    if a.max_n > MAX_COMPONENTS {
        return Err(OracleError::EnumerationBudgetExceeded {
            components: a.max_n,
            outcomes: 1u128 << a.max_n.min(127),
        }
        .into());
    }
    if a.max_d == 0 || a.max_d > crate::linalg::COFACTOR_MAX_DIM {
        return Err(OracleError::DimensionTooLarge(a.max_d).into());
    }
    if a.models == 0 {
        return Err(Error::Config("--models must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (mut det, mut adj, mut inv) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..a.models {
        let d = 1 + i % a.max_d;
        let n = i % (a.max_n + 1);
        let model = random_model(&mut rng, d, n, a.lambda)?;
        let dev = identity_deviations(&model)?;
        det = det.max(dev.det);
        adj = adj.max(dev.adjugate);
        inv = inv.max(dev.weighted_inverse);
    }

    let obj = enumerable_objective()?;
    let w = [0.0, 0.0];
    let p = obj.exact_newton_step(&w)?;
    let weighted = expect_determinantal_newton_step(&obj, &w, 2.0)?;
    let newton_dev = norm2(&crate::linalg::sub(&weighted, &p)) / norm2(&p);
    let bias = norm2(&expect_uniform_newton_bias(&obj, &w, 2.0)?) / norm2(&p);
    let rank_two = identity_deviations(&rank_two_counterexample())?.det;

    let lines = [
        ("E[det A] = det E[A]", det, must_hold(det)),
        ("E[adj A] = adj E[A]", adj, must_hold(adj)),
        ("E[det(A) A^-1] / E[det A] = (E A)^-1", inv, must_hold(inv)),
        (
            "determinant-weighted Newton step = exact step",
            newton_dev,
            must_hold(newton_dev),
        ),
        (
            "rank-2 component: E[det A] = det E[A]",
            rank_two,
            must_break(rank_two),
        ),
        (
            "unweighted local Newton step is unbiased",
            bias,
            must_break(bias),
        ),
    ];
    writeln!(
        out,
        "{} random models (d <= {}, n <= {}, B = {}I, max {} outcomes); tolerance {:e}",
        a.models, a.max_d, a.max_n, a.lambda, MAX_OUTCOMES, IDENTITY_TOL
    )?;
    for (name, dev, verdict) in &lines {
        writeln!(
            out,
            "{:<48} max_rel_dev={:<12.3e} {}",
            name,
            dev,
            verdict.as_str()
        )?;
    }
    let ok = lines.iter().all(|l| l.2.ok());
    writeln!(
        out,
        "{}",
        if ok {
            "all identities hold"
        } else {
            "identity check failed"
        }
    )?;
    Ok(if ok { 0 } else { 2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_parsers() {
        assert_eq!(
            parse_synth("2000, 10,0.5").unwrap(),
            SynthSpec {
                n: 2000,
                d: 10,
                noise: 0.5
            }
        );
        assert!(parse_synth("1,2").is_err());
        assert_eq!(parse_lambda("auto").unwrap(), Lambda::Auto);
        assert_eq!(parse_lambda("0.25").unwrap(), Lambda::Value(0.25));
        assert!(parse_lambda("-1").is_err());
        assert_eq!(parse_schemes("both").unwrap().0.len(), 2);
        assert_eq!(parse_schemes("uniform").unwrap().0, vec![Scheme::Uniform]);
        assert!(parse_schemes("mean").is_err());
        assert!(parse_loss("hinge").is_err());
    }

    #[test]
    fn command_line_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from([
            "detavg",
            "newton-sweep",
            "--synth",
            "100,3,0.5",
            "--k",
            "20",
            "--m",
            "2,4,8",
            "--scheme",
            "both",
            "--threads",
            "2",
        ])
        .unwrap();
        let Command::NewtonSweep(a) = cli.command else {
            panic!("wrong subcommand")
        };
        assert_eq!(a.m, vec![2, 4, 8]);
        assert_eq!(a.scheme.0.len(), 2);
        assert_eq!(a.trials, 100);
        assert_eq!(a.data.lambda, Lambda::Auto);
        assert_eq!(cli.threads, Some(2));
        assert!(Cli::try_parse_from(["detavg", "newton-sweep", "--k", "20", "--m", "2"]).is_err());
    }

    #[test]
    fn meta_path_appends_suffix() {
        assert_eq!(
            meta_path(Path::new("out/run.csv")),
            PathBuf::from("out/run.csv.meta.json")
        );
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn pm_one_labels_become_binary() {
        let data = Dataset::from_rows(&[vec![1.0], vec![2.0]], vec![-1.0, 1.0]).unwrap();
        assert_eq!(binary_labels(data).unwrap().labels(), &[0.0, 1.0]);
        let bad = Dataset::from_rows(&[vec![1.0]], vec![0.5]).unwrap();
        assert!(binary_labels(bad).is_err());
    }

    #[test]
    fn default_identity_report_passes() {
        let args = VerifyArgs {
            models: 60,
            max_n: 8,
            max_d: 3,
            lambda: 0.1,
            seed: 0,
        };
        let mut buf = Vec::new();
        assert_eq!(verify_identities(&args, &mut buf).unwrap(), 0);
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.matches(" pass").count(), 4, "{text}");
        assert_eq!(text.matches("expected-fail").count(), 2, "{text}");
    }

    #[test]
    fn over_budget_is_a_clean_error() {
        let args = VerifyArgs {
            models: 1,
            max_n: 21,
            max_d: 3,
            lambda: 0.1,
            seed: 0,
        };
        let err = verify_identities(&args, &mut Vec::new()).unwrap_err();
        assert!(matches!(
            err,
            Error::Oracle(OracleError::EnumerationBudgetExceeded { .. })
        ));
        assert!(!err.is_numerical());
    }
}
