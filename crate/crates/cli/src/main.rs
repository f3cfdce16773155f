//! `mbgame`: command-line driver for biased Maker-Breaker experiments.

mod source;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mbgame::building::{r_density, strictly_balanced_sub};
use mbgame::criteria::{predicted_exponent, CriteriaReport, ExponentSource, PredictedExponent, ReportOptions};
use mbgame::engine::{play, Player, PlayOptions, Transcript};
use mbgame::experiments::{
    binomial_vs_uniform_experiment, count_solutions, estimate_threshold, exponent_regression, stability_experiment,
    ExperimentConfig, FamilySpec, GameFamily, ThresholdEstimate,
};
use mbgame::linear::{
    induced_subsystem, is_abundant, is_positive, is_strictly_balanced, max_one_density, ColumnSelection,
    PairingCertificate, PartitionClassifier, SetPartition,
};
use mbgame::solver::{solve, threshold_bias_exact};
use mbgame::strategies::{StrategyFactory, StrategySpec};
use serde_json::json;

use source::{load_pattern, load_system, BoardArgs};

#[derive(Parser, Debug)]
#[command(name = "mbgame", version, about = "Biased Maker-Breaker games on explicit hypergraphs")]
struct Cli {
    /// directory for output files
    #[arg(long, global = true, env = "MBGAME_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, positivity, abundance and maximum 1-density of a linear system
    AnalyzeMatrix(AnalyzeMatrix),
    /// r-density and strictly balanced subpattern
    AnalyzePattern(AnalyzePattern),
    /// Write a generated board as text
    BuildBoard(BuildBoard),
    /// Play one game and print its transcript
    Play(PlayCmd),
    /// Winner under optimal play on a small board
    Solve(SolveCmd),
    /// Exact threshold bias of a small board
    ThresholdExact(ThresholdExact),
    /// Closed-form criteria and bounds for a board
    Criteria(CriteriaCmd),
    /// Monte Carlo threshold estimate over a grid of n
    EstimateThreshold(EstimateThreshold),
    /// Log-log slope of estimated thresholds
    Exponent(ExponentCmd),
    /// Frequency of sets that are not delta-stable
    Stability(StabilityCmd),
    /// Edge-free frequency of uniform versus binomial random sets
    Binuni(BinuniCmd),
    /// Proper solution counts of a linear system
    CountSolutions(CountSolutions),
}

#[derive(Args, Debug)]
struct AnalyzeMatrix {
    /// system file, `sidon`, `schur` or `ap:<k>`
    system: String,
    /// classify every set partition of the columns (at most 10 columns)
    #[arg(long)]
    partitions: bool,
    /// induced subsystem on these columns
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
struct AnalyzePattern {
    /// pattern file, `triangle` or `complete:<r>:<v>`
    pattern: String,
}

#[derive(Args, Debug)]
struct BuildBoard {
    #[command(flatten)]
    source: BoardArgs,
    #[arg(long)]
    n: Option<usize>,
    /// output file; defaults to stdout, or board.txt in the output directory
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum First {
    Maker,
    Breaker,
}

impl From<First> for Player {
    fn from(f: First) -> Player {
        match f {
            First::Maker => Player::Maker,
            First::Breaker => Player::Breaker,
        }
    }
}

#[derive(Args, Debug)]
struct PlayCmd {
    #[command(flatten)]
    source: BoardArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: usize,
    #[arg(long, default_value = "random-maker")]
    maker: String,
    #[arg(long, default_value = "es-breaker")]
    breaker: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = First::Maker)]
    first: First,
    /// keep playing after Maker completes an edge
    #[arg(long)]
    full: bool,
}

#[derive(Args, Debug)]
struct SolveCmd {
    #[command(flatten)]
    source: BoardArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: usize,
    #[arg(long, value_enum, default_value_t = First::Maker)]
    first: First,
}

#[derive(Args, Debug)]
struct ThresholdExact {
    #[command(flatten)]
    source: BoardArgs,
    /// one or more n values for generated boards
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
}

#[derive(Args, Debug)]
struct CriteriaCmd {
    #[command(flatten)]
    source: BoardArgs,
    #[arg(long)]
    n: Option<usize>,
    /// bias for the Maker potential check
    #[arg(long)]
    q: Option<u64>,
    /// Breaker criterion parameter
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    c_bar: Option<f64>,
    /// edge probability for the pair bound
    #[arg(long)]
    p: Option<f64>,
    /// Maker rounds for the decay bound
    #[arg(long)]
    rounds: Option<u64>,
}

#[derive(Args, Debug)]
struct EstimateThreshold {
    /// JSON config; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    source: BoardArgs,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    maker: Option<String>,
    #[arg(long)]
    breaker: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    target: Option<f64>,
    #[arg(long)]
    q_min: Option<usize>,
    #[arg(long)]
    q_max: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// run directory; overrides the config and the global output directory
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// also write a full transcript of every simulated game
    #[arg(long)]
    keep_transcripts: bool,
}

#[derive(Args, Debug)]
struct ExponentCmd {
    /// CSV with columns n and q_hat (as written by estimate-threshold)
    input: Option<PathBuf>,
    /// extra points as n:q
    #[arg(long = "point", value_parser = parse_point)]
    points: Vec<(f64, f64)>,
}

#[derive(Args, Debug)]
struct StabilityCmd {
    #[command(flatten)]
    source: BoardArgs,
    #[arg(long)]
    n: Option<usize>,
    /// size of the sampled sets
    #[arg(long)]
    m: usize,
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BinuniCmd {
    #[command(flatten)]
    source: BoardArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct CountSolutions {
    /// system file, `sidon`, `schur` or `ap:<k>`
    system: String,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
}

fn parse_point(s: &str) -> std::result::Result<(f64, f64), String> {
    let (n, q) = s.split_once(':').ok_or("expected n:q")?;
    Ok((n.parse().map_err(|e| format!("{e}"))?, q.parse().map_err(|e| format!("{e}"))?))
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let out_dir = cli.out_dir.as_deref();
    match cli.command {
        Command::AnalyzeMatrix(a) => analyze_matrix(a),
        Command::AnalyzePattern(a) => analyze_pattern(a),
        Command::BuildBoard(a) => build_board(a, out_dir),
        Command::Play(a) => play_cmd(a, out_dir),
        Command::Solve(a) => solve_cmd(a),
        Command::ThresholdExact(a) => threshold_exact(a, out_dir),
        Command::Criteria(a) => criteria(a),
        Command::EstimateThreshold(a) => estimate(a, out_dir),
        Command::Exponent(a) => exponent(a),
        Command::Stability(a) => stability(a),
        Command::Binuni(a) => binuni(a, out_dir),
        Command::CountSolutions(a) => count(a, out_dir),
    }
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Writes to `<out_dir>/<name>` when an output directory is set, and always
/// echoes to stdout.
fn emit(out_dir: Option<&Path>, name: &str, text: &str) -> Result<()> {
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(dir.join(name), text)?;
    }
    print!("{text}");
    Ok(())
}

fn exponent_json(e: &PredictedExponent) -> serde_json::Value {
    serde_json::to_value(e).expect("serializable")
}

fn analyze_matrix(a: AnalyzeMatrix) -> Result<()> {
    let sys = load_system(&a.system)?;
    let m = sys.matrix();
    let abundant = is_abundant(m);
    let positive = is_positive(m);
    let mut report = json!({
        "rows": sys.rows(),
        "columns": sys.cols(),
        "rank": m.rank(),
        "homogeneous": sys.is_homogeneous(),
        "positive": positive,
        "abundant": abundant,
        "pairing_certificate": PairingCertificate::for_system(&sys).is_ok(),
    });
    if abundant {
        let d = max_one_density(m)?;
        report["max_one_density"] = json!(d.value.to_string());
        report["densest_columns"] = json!(d.witness.columns());
        report["strictly_balanced"] = json!(is_strictly_balanced(m)?);
    }
    if positive {
        report["predicted_exponent"] = exponent_json(&predicted_exponent(ExponentSource::System(&sys))?);
    }
    if let Some(cols) = a.columns {
        let sub = induced_subsystem(&sys, &ColumnSelection::new(sys.cols(), cols)?)?;
        report["subsystem"] = serde_json::to_value(&sub)?;
    }
    if a.partitions {
        if sys.cols() > 10 {
            bail!("partition listing is limited to 10 columns");
        }
        let classifier = PartitionClassifier::new(&sys)?;
        let mut rows = Vec::new();
        for p in SetPartition::all(sys.cols()) {
            rows.push(json!({ "blocks": p.blocks(), "class": classifier.classify(&p)? }));
        }
        report["partitions"] = json!(rows);
    }
    print_json(&report)
}

fn analyze_pattern(a: AnalyzePattern) -> Result<()> {
    let g = load_pattern(&a.pattern)?;
    let d = r_density(&g)?;
    let balanced = strictly_balanced_sub(&g)?;
    print_json(&json!({
        "r": g.uniformity(),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "matching": g.is_matching(),
        "r_density": d.value.to_string(),
        "densest_subpattern": d.witness.edges(),
        "strictly_balanced_subpattern": balanced.edges(),
        "predicted_exponent": exponent_json(&predicted_exponent(ExponentSource::Pattern(&g))?),
    }))
}

fn build_board(a: BuildBoard, out_dir: Option<&Path>) -> Result<()> {
    let (board, _) = a.source.board(a.n)?;
    let path = a.output.or_else(|| out_dir.map(|d| d.join("board.txt")));
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            board.write_file(&p)?;
            eprintln!(
                "wrote {} ({} vertices, {} edges)",
                p.display(),
                board.vertex_count(),
                board.edge_count()
            );
        }
        None => print!("{}", board.to_text()),
    }
    Ok(())
}

fn play_cmd(a: PlayCmd, out_dir: Option<&Path>) -> Result<()> {
    let (board, family) = a.source.board(a.n)?;
    let maker = StrategyFactory::new(a.maker.parse()?, &board, a.q, family.system())?;
    let breaker = StrategyFactory::new(a.breaker.parse()?, &board, a.q, family.system())?;
    let options = PlayOptions {
        first_player: a.first.into(),
        stop_at_first_edge: !a.full,
        stop_when_decided: false,
    };
    let t = play(
        &board,
        a.q,
        maker.build(&board, a.q)?.as_mut(),
        breaker.build(&board, a.q)?.as_mut(),
        a.seed,
        &options,
    )?;
    emit(out_dir, "transcript.json", &(t.to_json() + "\n"))
}

fn solve_cmd(a: SolveCmd) -> Result<()> {
    let (board, _) = a.source.board(a.n)?;
    let winner = solve(&board, a.q, a.first.into())?;
    println!("{}", player_name(winner));
    Ok(())
}

fn threshold_exact(a: ThresholdExact, out_dir: Option<&Path>) -> Result<()> {
    let family = a.source.family()?;
    let grid: Vec<Option<usize>> = if a.n.is_empty() {
        vec![None]
    } else {
        a.n.iter().copied().map(Some).collect()
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "vertices", "edges", "threshold"])?;
    for n in grid {
        let board = match (&family, n) {
            (GameFamily::Board(h), _) => h.clone(),
            (_, Some(n)) => family.board(n)?,
            (_, None) => bail!("--n is required for a generated board"),
        };
        let q = threshold_bias_exact(&board)?;
        w.write_record([
            n.map(|n| n.to_string()).unwrap_or_default(),
            board.vertex_count().to_string(),
            board.edge_count().to_string(),
            q.map(|q| q.to_string()).unwrap_or_else(|| "inf".into()),
        ])?;
    }
    emit(out_dir, "threshold_exact.csv", &String::from_utf8(w.into_inner()?)?)
}

fn criteria(a: CriteriaCmd) -> Result<()> {
    let (board, family) = a.source.board(a.n)?;
    let opts = ReportOptions {
        q: a.q,
        t: a.t,
        c1: a.c1,
        c: a.c,
        c_bar: a.c_bar,
        p: a.p,
        rounds: a.rounds,
        progression_n: match family {
            GameFamily::Progression(3) => Some(board.vertex_count() as u64),
            _ => None,
        },
    };
    let source = match &family {
        GameFamily::System { sys, .. } if is_positive(sys.matrix()) => Some(ExponentSource::System(sys)),
        GameFamily::Pattern(g) => Some(ExponentSource::Pattern(g)),
        _ => None,
    };
    println!("{}", CriteriaReport::evaluate(&board, &opts, source)?.to_json());
    Ok(())
}

fn player_name(p: Player) -> &'static str {
    match p {
        Player::Maker => "maker",
        Player::Breaker => "breaker",
    }
}

fn resolve_config(a: &EstimateThreshold, out_dir: Option<&Path>) -> Result<(ExperimentConfig, GameFamily)> {
    let (mut cfg, base) = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let cfg: ExperimentConfig = serde_json::from_str(&text).context("parsing the config")?;
            (cfg, path.parent().map(Path::to_path_buf).unwrap_or_default())
        }
        None => {
            if !a.source.is_set() {
                bail!("give --config or a board source");
            }
            (ExperimentConfig::new(FamilySpec::Progression { k: 3 }), PathBuf::new())
        }
    };
    let family = if a.source.is_set() {
        let family = a.source.family()?;
        cfg.family = family_spec(&a.source);
        family
    } else {
        cfg.family.load(&base)?
    };
    if let Some(n) = &a.n {
        cfg.n_grid = n.clone();
    }
    if let Some(m) = &a.maker {
        cfg.maker = m.clone();
    }
    if let Some(b) = &a.breaker {
        cfg.breaker = b.clone();
    }
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    if let Some(t) = a.target {
        cfg.target = t;
    }
    if let Some(q) = a.q_min {
        cfg.q_min = q;
    }
    if a.q_max.is_some() {
        cfg.q_max = a.q_max;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(o) = &a.output {
        cfg.output = Some(o.clone());
    } else if cfg.output.is_none() {
        cfg.output = out_dir.map(Path::to_path_buf);
    } else if let Some(o) = &cfg.output {
        if o.is_relative() {
            cfg.output = Some(base.join(o));
        }
    }
    cfg.validate()?;
    Ok((cfg, family))
}

/// Family description stored in the resolved config; builtin names are kept
/// as given.
fn family_spec(s: &BoardArgs) -> FamilySpec {
    if let Some(p) = &s.board {
        FamilySpec::Board { path: p.clone() }
    } else if let Some(k) = s.progression {
        FamilySpec::Progression { k }
    } else if let Some(sys) = &s.system {
        FamilySpec::System {
            path: sys.into(),
            nondegenerate: s.nondegenerate,
        }
    } else {
        FamilySpec::Pattern {
            path: s.pattern.clone().unwrap_or_default().into(),
        }
    }
}

fn csv_with_header(header: &[String], body: Vec<u8>) -> Result<String> {
    let mut text = String::new();
    for line in header {
        text.push_str("# ");
        text.push_str(line);
        text.push('\n');
    }
    text.push_str(&String::from_utf8(body)?);
    Ok(text)
}

fn estimate(a: EstimateThreshold, out_dir: Option<&Path>) -> Result<()> {
    let (cfg, family) = resolve_config(&a, out_dir)?;
    let maker_spec: StrategySpec = cfg.maker.parse()?;
    let breaker_spec: StrategySpec = cfg.breaker.parse()?;
    let protocol = if cfg.is_half_random() {
        "half-random: uniform random Maker against the chosen Breaker"
    } else {
        "strategy against strategy (non-canonical protocol)"
    };
    let header = vec![
        format!("maker={} breaker={} trials={} target={} seed={}", maker_spec, breaker_spec, cfg.trials, cfg.target, cfg.seed),
        format!("protocol: {protocol}"),
        "q_hat is the smallest sampled bias above which every sampled Maker-win rate is below target;".into(),
        "it is an empirical surrogate for the deterministic threshold bias, with Wilson 95% intervals".into(),
    ];
    let mut estimates: Vec<ThresholdEstimate> = Vec::new();
    for &n in &cfg.n_grid {
        let est = estimate_threshold(&cfg, &family, n)?;
        for w in &est.warnings {
            eprintln!("n = {n}: warning: {w}");
        }
        eprintln!("n = {n}: q_hat = {} (±{:.3})", est.q_hat, est.half_width);
        estimates.push(est);
    }

    let mut curve = csv::Writer::from_writer(Vec::new());
    curve.write_record(["n", "q", "trials", "maker_wins", "win_rate", "ci_lo", "ci_hi"])?;
    for e in &estimates {
        for p in &e.curve {
            curve.write_record([
                e.n.to_string(),
                p.q.to_string(),
                p.trials.to_string(),
                p.maker_wins.to_string(),
                format!("{:.6}", p.win_rate),
                format!("{:.6}", p.ci_lo),
                format!("{:.6}", p.ci_hi),
            ])?;
        }
    }
    let curve_text = csv_with_header(&header, curve.into_inner()?)?;

    let mut summary = csv::Writer::from_writer(Vec::new());
    summary.write_record(["n", "q_hat", "half_width", "unbounded", "q_min", "q_max", "warnings"])?;
    for e in &estimates {
        summary.write_record([
            e.n.to_string(),
            e.q_hat.to_string(),
            format!("{:.6}", e.half_width),
            e.unbounded.to_string(),
            e.q_min.to_string(),
            e.q_max.to_string(),
            e.warnings.len().to_string(),
        ])?;
    }
    let summary_text = csv_with_header(&header, summary.into_inner()?)?;

    if let Some(dir) = &cfg.output {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(dir.join("curve.csv"), &curve_text)?;
        fs::write(dir.join("thresholds.csv"), &summary_text)?;
        fs::write(dir.join("config.json"), serde_json::to_string_pretty(&cfg)? + "\n")?;
        fs::write(dir.join("estimates.json"), serde_json::to_string_pretty(&estimates)? + "\n")?;
        let mut games = csv::Writer::from_path(dir.join("games.csv"))?;
        games.write_record(["n", "q", "trial", "seed", "winner", "rounds"])?;
        for e in &estimates {
            for g in &e.games {
                games.write_record([
                    g.n.to_string(),
                    g.q.to_string(),
                    g.trial.to_string(),
                    g.seed.to_string(),
                    player_name(g.winner).to_string(),
                    g.rounds.to_string(),
                ])?;
            }
        }
        games.flush()?;
        if a.keep_transcripts {
            write_transcripts(&dir.join("transcripts.jsonl"), &cfg, &family, &estimates)?;
        }
    }
    print!("{curve_text}");
    if estimates.len() >= 3 {
        let points: Vec<(f64, f64)> = estimates.iter().map(|e| (e.n as f64, e.q_hat as f64)).collect();
        let r = exponent_regression(&points)?;
        eprintln!("slope of ln q_hat against ln n: {:.4} ± {:.4}", r.slope, r.stderr);
    }
    Ok(())
}

/// Replays every recorded game from its seed and stores the transcripts.
fn write_transcripts(
    path: &Path,
    cfg: &ExperimentConfig,
    family: &GameFamily,
    estimates: &[ThresholdEstimate],
) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    let options = PlayOptions {
        stop_when_decided: true,
        ..PlayOptions::default()
    };
    for e in estimates {
        let board = family.board(e.n)?;
        let mut q_prev = None;
        let mut factories = None;
        for g in &e.games {
            if q_prev != Some(g.q) {
                factories = Some((
                    StrategyFactory::new(cfg.maker.parse()?, &board, g.q, family.system())?,
                    StrategyFactory::new(cfg.breaker.parse()?, &board, g.q, family.system())?,
                ));
                q_prev = Some(g.q);
            }
            let (maker, breaker) = factories.as_ref().expect("set above");
            let t: Transcript = play(
                &board,
                g.q,
                maker.build(&board, g.q)?.as_mut(),
                breaker.build(&board, g.q)?.as_mut(),
                g.seed,
                &options,
            )?;
            let line = json!({ "n": e.n, "trial": g.trial, "transcript": t });
            writeln!(out, "{}", serde_json::to_string(&line)?)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn exponent(a: ExponentCmd) -> Result<()> {
    let mut points = a.points.clone();
    if let Some(path) = &a.input {
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_path(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let headers = r.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h == name).with_context(|| format!("no `{name}` column"));
        let (ni, qi) = (col("n")?, col("q_hat")?);
        for row in r.records() {
            let row = row?;
            points.push((row[ni].parse()?, row[qi].parse()?));
        }
    }
    let r = exponent_regression(&points)?;
    print_json(&serde_json::to_value(r)?)
}

fn stability(a: StabilityCmd) -> Result<()> {
    let (board, _) = a.source.board(a.n)?;
    let f = stability_experiment(&board, a.m, a.delta, a.samples, a.seed)?;
    print_json(&json!({ "m": a.m, "delta": a.delta, "not_stable": f }))
}

fn binuni(a: BinuniCmd, out_dir: Option<&Path>) -> Result<()> {
    if a.p.is_empty() {
        bail!("give at least one --p");
    }
    let (board, _) = a.source.board(a.n)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "p", "m", "samples", "uniform_rate", "uniform_ci_lo", "uniform_ci_hi", "binomial_rate", "binomial_ci_lo",
        "binomial_ci_hi",
    ])?;
    for &p in &a.p {
        let r = binomial_vs_uniform_experiment(&board, p, a.samples, a.seed)?;
        w.write_record([
            p.to_string(),
            r.m.to_string(),
            a.samples.to_string(),
            format!("{:.6}", r.uniform.rate),
            format!("{:.6}", r.uniform.ci_lo),
            format!("{:.6}", r.uniform.ci_hi),
            format!("{:.6}", r.binomial.rate),
            format!("{:.6}", r.binomial.ci_lo),
            format!("{:.6}", r.binomial.ci_hi),
        ])?;
    }
    emit(out_dir, "binuni.csv", &String::from_utf8(w.into_inner()?)?)
}

fn count(a: CountSolutions, out_dir: Option<&Path>) -> Result<()> {
    let sys = load_system(&a.system)?;
    let rows = count_solutions(&sys, &a.n)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "count", "dimension", "ratio", "empty"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.count.to_string(),
            r.dimension.to_string(),
            format!("{:.6}", r.ratio),
            r.empty.to_string(),
        ])?;
    }
    emit(out_dir, "solution_counts.csv", &String::from_utf8(w.into_inner()?)?)
}
