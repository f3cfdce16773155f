//! Monte Carlo experiments: threshold estimation, exponent fits, stability
//! and random-set statistics, and solution counts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::building::{build_building_hypergraph, BuildLimits, Pattern};
use crate::engine::{play, GameRng, Player, PlayOptions};
use crate::error::{Error, Result};
use crate::hypergraph::{sample_binomial_subset, sample_uniform_subset, Hypergraph, STABILITY_CAP};
use crate::linear::{ap_hypergraph, build_rado_hypergraph, for_each_solution, LinearSystem, SolutionMode, DEFAULT_ENUMERATION_BUDGET};
use crate::strategies::{StrategyFactory, StrategySpec};

/// SplitMix64 finalizer applied along a path of indices.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    let mix = |mut z: u64| {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };
    path.iter().fold(mix(base), |acc, &x| mix(acc ^ mix(x)))
}

/// Wilson score interval at 95% confidence.
pub fn wilson(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Where the boards of an experiment come from.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// k-term arithmetic progressions in [n]
    Progression { k: usize },
    /// solutions of a linear system, JSON file
    System {
        path: PathBuf,
        #[serde(default)]
        nondegenerate: bool,
    },
    /// copies of a pattern hypergraph, text file
    Pattern { path: PathBuf },
    /// one fixed board, text file; the grid value is ignored
    Board { path: PathBuf },
}

#[derive(Clone, Debug)]
pub enum GameFamily {
    Progression(usize),
    System { sys: LinearSystem, nondegenerate: bool },
    Pattern(Pattern),
    Board(Hypergraph),
}

impl FamilySpec {
    pub fn load(&self, base: &Path) -> Result<GameFamily> {
        let resolve = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
        Ok(match self {
            FamilySpec::Progression { k } => GameFamily::Progression(*k),
            FamilySpec::System { path, nondegenerate } => GameFamily::System {
                sys: LinearSystem::from_json(&std::fs::read_to_string(resolve(path))?)?,
                nondegenerate: *nondegenerate,
            },
            FamilySpec::Pattern { path } => GameFamily::Pattern(Pattern::from_text(&std::fs::read_to_string(resolve(path))?)?),
            FamilySpec::Board { path } => GameFamily::Board(Hypergraph::read_file(resolve(path))?),
        })
    }
}

impl GameFamily {
    pub fn board(&self, n: usize) -> Result<Hypergraph> {
        match self {
            GameFamily::Progression(k) => ap_hypergraph(n, *k),
            GameFamily::System { sys, nondegenerate } => {
                let mode = if *nondegenerate {
                    SolutionMode::NonDegenerate
                } else {
                    SolutionMode::Proper
                };
                build_rado_hypergraph(sys, n as u64, &mode)
            }
            GameFamily::Pattern(g) => build_building_hypergraph(g, n, BuildLimits::default()),
            GameFamily::Board(h) => Ok(h.clone()),
        }
    }

    pub fn system(&self) -> Option<&LinearSystem> {
        match self {
            GameFamily::System { sys, .. } => Some(sys),
            _ => None,
        }
    }
}

fn default_maker() -> String {
    "random-maker".into()
}
fn default_breaker() -> String {
    "es-breaker".into()
}
fn default_trials() -> usize {
    200
}
fn default_target() -> f64 {
    0.5
}
fn default_q_min() -> usize {
    1
}
fn default_grid() -> Vec<usize> {
    vec![16, 32, 64, 128, 256]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub family: FamilySpec,
    #[serde(default = "default_grid")]
    pub n_grid: Vec<usize>,
    #[serde(default = "default_maker")]
    pub maker: String,
    #[serde(default = "default_breaker")]
    pub breaker: String,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Maker-win rate below which Breaker is taken to win
    #[serde(default = "default_target")]
    pub target: f64,
    #[serde(default = "default_q_min")]
    pub q_min: usize,
    /// defaults to the board's vertex count
    #[serde(default)]
    pub q_max: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(family: FamilySpec) -> Self {
        ExperimentConfig {
            family,
            n_grid: default_grid(),
            maker: default_maker(),
            breaker: default_breaker(),
            trials: default_trials(),
            target: default_target(),
            q_min: default_q_min(),
            q_max: None,
            seed: 0,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::input("trials must be at least 1"));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input("the n grid must be strictly increasing"));
        }
        if !(self.target > 0.0 && self.target <= 1.0) {
            return Err(Error::input("the win-rate target must lie in (0, 1]"));
        }
        if self.q_min == 0 {
            return Err(Error::input("bias search must start at q ≥ 1"));
        }
        Ok(())
    }

    /// Whether the pair is the canonical random Maker against a Breaker strategy.
    pub fn is_half_random(&self) -> bool {
        self.maker == "random-maker"
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CurvePoint {
    pub q: usize,
    pub trials: u64,
    pub maker_wins: u64,
    pub win_rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

/// Outcome of one simulated game, enough to recount every curve point.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GameRecord {
    pub n: usize,
    pub q: usize,
    pub trial: usize,
    pub seed: u64,
    pub winner: Player,
    pub rounds: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub n: usize,
    pub q_hat: usize,
    pub q_min: usize,
    pub q_max: usize,
    /// Maker still wins at the upper end of the search range
    pub unbounded: bool,
    /// Wilson half-width at the crossover point
    pub half_width: f64,
    pub curve: Vec<CurvePoint>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub games: Vec<GameRecord>,
}

/// Plays `trials` games at one bias, in parallel, results in trial order.
pub fn run_point(
    board: &Hypergraph,
    q: usize,
    maker: &StrategyFactory,
    breaker: &StrategyFactory,
    trials: usize,
    seed: u64,
    n: usize,
) -> Result<Vec<GameRecord>> {
    let options = PlayOptions {
        stop_when_decided: true,
        ..PlayOptions::default()
    };
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let game_seed = derive_seed(seed, &[n as u64, q as u64, trial as u64]);
            let mut m = maker.build(board, q)?;
            let mut b = breaker.build(board, q)?;
            let t = play(board, q, m.as_mut(), b.as_mut(), game_seed, &options)?;
            Ok(GameRecord {
                n,
                q,
                trial,
                seed: game_seed,
                winner: t.winner,
                rounds: t.rounds,
            })
        })
        .collect()
}

fn point_from_games(q: usize, games: &[GameRecord]) -> CurvePoint {
    let trials = games.len() as u64;
    let maker_wins = games.iter().filter(|g| g.winner == Player::Maker).count() as u64;
    let (ci_lo, ci_hi) = wilson(maker_wins, trials);
    CurvePoint {
        q,
        trials,
        maker_wins,
        win_rate: maker_wins as f64 / trials as f64,
        ci_lo,
        ci_hi,
    }
}

/// Pairs of neighbouring curve points where the win rate rises by more than two
/// standard errors as q grows.
pub fn monotonicity_violations(curve: &[CurvePoint]) -> Vec<(usize, usize)> {
    curve
        .windows(2)
        .filter(|w| {
            let se = |p: &CurvePoint| p.win_rate * (1.0 - p.win_rate) / p.trials as f64;
            let sigma = (se(&w[0]) + se(&w[1])).sqrt();
            w[1].win_rate - w[0].win_rate > 2.0 * sigma.max(1e-12)
        })
        .map(|w| (w[0].q, w[1].q))
        .collect()
}

/// Bisection on q for the smallest bias whose Maker-win rate falls below the
/// target, over games of `cfg.maker` against `cfg.breaker`.
pub fn estimate_threshold(cfg: &ExperimentConfig, family: &GameFamily, n: usize) -> Result<ThresholdEstimate> {
    cfg.validate()?;
    let board = family.board(n)?;
    let maker_spec: StrategySpec = cfg.maker.parse()?;
    let breaker_spec: StrategySpec = cfg.breaker.parse()?;
    let q_max = cfg.q_max.unwrap_or(board.vertex_count()).max(cfg.q_min);
    let mut points: BTreeMap<usize, Vec<GameRecord>> = BTreeMap::new();
    let rate = |q: usize, points: &mut BTreeMap<usize, Vec<GameRecord>>| -> Result<f64> {
        if !points.contains_key(&q) {
            let maker = StrategyFactory::new(maker_spec.clone(), &board, q, family.system())?;
            let breaker = StrategyFactory::new(breaker_spec.clone(), &board, q, family.system())?;
            points.insert(q, run_point(&board, q, &maker, &breaker, cfg.trials, cfg.seed, n)?);
        }
        Ok(point_from_games(q, &points[&q]).win_rate)
    };
    let mut warnings = Vec::new();
    let (mut lo, mut hi) = (cfg.q_min, q_max);
    let unbounded = rate(hi, &mut points)? >= cfg.target;
    if !unbounded && rate(lo, &mut points)? >= cfg.target {
        // invariant: Maker meets the target at lo, not at hi
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if rate(mid, &mut points)? >= cfg.target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let curve = |points: &BTreeMap<usize, Vec<GameRecord>>| -> Vec<CurvePoint> {
        points.iter().map(|(&q, g)| point_from_games(q, g)).collect()
    };
    let violations = monotonicity_violations(&curve(&points));
    if !violations.is_empty() {
        warnings.push(format!("win rate not monotone in q between {violations:?}; bracket widened"));
        let guess = smallest_stable_crossing(&curve(&points), cfg.target).unwrap_or(q_max);
        for q in [guess.saturating_sub(1), guess + 1] {
            if (cfg.q_min..=q_max).contains(&q) {
                rate(q, &mut points)?;
            }
        }
    }
    let curve = curve(&points);
    let q_hat = if unbounded {
        q_max
    } else {
        smallest_stable_crossing(&curve, cfg.target).unwrap_or(q_max)
    };
    if unbounded {
        warnings.push(format!("Maker still meets the target at q = {q_max}; the threshold lies beyond the search range"));
    }
    let at = curve.iter().find(|p| p.q == q_hat).expect("crossing is a sampled point");
    let half_width = (at.ci_hi - at.ci_lo) / 2.0;
    Ok(ThresholdEstimate {
        n,
        q_hat,
        q_min: cfg.q_min,
        q_max,
        unbounded,
        half_width,
        curve,
        warnings,
        games: points.into_values().flatten().collect(),
    })
}

/// Smallest sampled q such that every sampled bias from q upwards is below target.
fn smallest_stable_crossing(curve: &[CurvePoint], target: f64) -> Option<usize> {
    let mut answer = None;
    for p in curve.iter().rev() {
        if p.win_rate < target {
            answer = Some(p.q);
        } else {
            break;
        }
    }
    answer
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Regression {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub points: usize,
}

/// Least-squares fit of `ln q̂` against `ln n`.
pub fn exponent_regression(points: &[(f64, f64)]) -> Result<Regression> {
    if points.len() < 3 {
        return Err(Error::input("a slope fit needs at least 3 points"));
    }
    if points.iter().any(|&(n, q)| n <= 0.0 || q <= 0.0) {
        return Err(Error::input("n and q must be positive"));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::input("all n values coincide"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (ssr / (m - 2.0) / sxx).sqrt();
    Ok(Regression {
        slope,
        intercept,
        stderr,
        points: points.len(),
    })
}

/// Empirical frequency with a Wilson interval.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Frequency {
    pub hits: u64,
    pub samples: u64,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl Frequency {
    fn new(hits: u64, samples: u64) -> Self {
        let (ci_lo, ci_hi) = wilson(hits, samples);
        Frequency {
            hits,
            samples,
            rate: if samples == 0 { 0.0 } else { hits as f64 / samples as f64 },
            ci_lo,
            ci_hi,
        }
    }

    /// Binomial standard error of the rate.
    pub fn sigma(&self) -> f64 {
        (self.rate * (1.0 - self.rate) / self.samples.max(1) as f64).sqrt()
    }
}

const SAMPLE_CHUNK: u64 = 4096;

/// Counts `hit(rng)` over `samples` draws, chunked for parallelism with a
/// deterministic stream per chunk.
fn count_hits<F>(samples: u64, seed: u64, hit: F) -> Result<u64>
where
    F: Fn(&mut GameRng) -> Result<bool> + Sync,
{
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let counts: Vec<u64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = GameRng::seed_from_u64(derive_seed(seed, &[c]));
            let size = SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK);
            let mut hits = 0;
            for _ in 0..size {
                hits += hit(&mut rng)? as u64;
            }
            Ok(hits)
        })
        .collect::<Result<_>>()?;
    Ok(counts.iter().sum())
}

/// Frequency with which a uniform `m`-subset is not `delta`-stable.
pub fn stability_experiment(board: &Hypergraph, m: usize, delta: f64, samples: u64, seed: u64) -> Result<Frequency> {
    if m > STABILITY_CAP {
        return Err(Error::capacity("sample size for the stability test", STABILITY_CAP as u64));
    }
    if m > board.vertex_count() {
        return Err(Error::input("sample size exceeds the vertex count"));
    }
    let hits = count_hits(samples, seed, |rng| {
        let set = sample_uniform_subset(board.vertex_count(), m, rng)?;
        Ok(!board.is_delta_stable(&set, delta, STABILITY_CAP)?)
    })?;
    Ok(Frequency::new(hits, samples))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BinomialVsUniform {
    pub p: f64,
    /// size of the uniform sets, ⌊n·p⌋
    pub m: usize,
    pub uniform: Frequency,
    pub binomial: Frequency,
}

/// Edge-free frequencies of a uniform ⌊np⌋-set and a p-random set.
pub fn binomial_vs_uniform_experiment(board: &Hypergraph, p: f64, samples: u64, seed: u64) -> Result<BinomialVsUniform> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("p = {p} is not in [0,1]")));
    }
    let n = board.vertex_count();
    let m = (n as f64 * p).floor() as usize;
    let edge_free = |set: &[u32]| {
        let mut mask = vec![false; n];
        for &v in set {
            mask[v as usize] = true;
        }
        !board.contains_edge_masked(&mask, set)
    };
    let uniform = count_hits(samples, derive_seed(seed, &[0]), |rng| {
        Ok(edge_free(&sample_uniform_subset(n, m, rng)?))
    })?;
    let binomial = count_hits(samples, derive_seed(seed, &[1]), |rng| {
        Ok(edge_free(&sample_binomial_subset(n, p, rng)?))
    })?;
    Ok(BinomialVsUniform {
        p,
        m,
        uniform: Frequency::new(uniform, samples),
        binomial: Frequency::new(binomial, samples),
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CountRow {
    pub n: u64,
    pub count: u64,
    /// m − rank(A)
    pub dimension: usize,
    /// count / n^dimension
    pub ratio: f64,
    pub empty: bool,
}

/// Proper solutions in `[n]^m` for each grid value, normalized by `n^{m−rank}`.
pub fn solution_count_experiment(sys: &LinearSystem, grid: &[u64], budget: u64) -> Result<Vec<CountRow>> {
    let dimension = sys.cols() - sys.matrix().rank();
    grid.iter()
        .map(|&n| {
            let count = for_each_solution(sys, n, &SolutionMode::Proper, budget, |_| {})?;
            Ok(CountRow {
                n,
                count,
                dimension,
                ratio: count as f64 / (n as f64).powi(dimension as i32),
                empty: count == 0,
            })
        })
        .collect()
}

/// Same as [`solution_count_experiment`] with the default enumeration budget.
pub fn count_solutions(sys: &LinearSystem, grid: &[u64]) -> Result<Vec<CountRow>> {
    solution_count_experiment(sys, grid, DEFAULT_ENUMERATION_BUDGET)
}
