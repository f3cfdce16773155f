//! Closed-form win criteria and probability bounds evaluated on concrete boards.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};
use serde::Serialize;

use crate::building::{r_density, Pattern};
use crate::error::{Error, Result};
use crate::hypergraph::{for_each_combination, weighted_edge_sum, FValue, Hypergraph, Vertex};
use crate::linear::{is_abundant, is_positive, max_one_density, LinearSystem};
use crate::serde_util::format_ratio;

fn ratio_from_f64(x: f64, what: &str) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::input(format!("{what} = {x} is not finite")))
}

fn uniformity(h: &Hypergraph) -> Result<usize> {
    h.uniformity()
        .ok_or_else(|| Error::precondition("criterion needs a nonempty uniform hypergraph"))
}

/// The three Maker conditions and the suggested Maker-side bias.
#[derive(Clone, Debug, Serialize)]
pub struct MakerReport {
    pub k: usize,
    pub c1: f64,
    pub c: f64,
    pub c_bar: f64,
    /// Δ₁ ≤ c₁·d(H)
    pub degree_condition: bool,
    /// f(H) > 1
    pub f_exceeds_one: bool,
    /// (v/f)(1 − 1/f) ≥ c̄
    pub size_condition: bool,
    pub all_hold: bool,
    /// c·f(H) − 1
    pub bias_suggestion: f64,
    pub f: FValue,
}

/// Evaluates the Maker conditions exactly for supplied constants.
pub fn maker_report(h: &Hypergraph, c1: f64, c: f64, c_bar: f64) -> Result<MakerReport> {
    let k = uniformity(h)?;
    if k < 2 {
        return Err(Error::precondition("Maker conditions need k ≥ 2"));
    }
    let c1_exact = ratio_from_f64(c1, "c1")?;
    let c_bar_exact = ratio_from_f64(c_bar, "c_bar")?;
    if !c_bar_exact.is_positive() {
        return Err(Error::input("c_bar must be positive"));
    }
    let density = h.density()?;
    let delta1 = BigRational::from_integer(BigInt::from(h.max_ell_degree(1)?));
    let degree_condition = delta1 <= c1_exact * density;
    let f = h.maker_f()?;
    let f_exceeds_one = f.exceeds_one();
    let size_condition = size_condition_holds(h.vertex_count() as u64, &f, &c_bar_exact);
    Ok(MakerReport {
        k,
        c1,
        c,
        c_bar,
        degree_condition,
        f_exceeds_one,
        size_condition,
        all_hold: degree_condition && f_exceeds_one && size_condition,
        bias_suggestion: c * f.value - 1.0,
        f,
    })
}

/// Decides `v(f−1)/f² ≥ c̄` where `f^{ℓ−1} = base`, by bisecting on `f` with
/// rational endpoints. Ties that survive 256 halvings count as equality.
fn size_condition_holds(v: u64, f: &FValue, c_bar: &BigRational) -> bool {
    let one = BigRational::one();
    if f.base <= one {
        return false;
    }
    let v = BigRational::from_integer(BigInt::from(v));
    let g = |x: &BigRational| &v * (x - &one) / (x * x);
    let power = (f.ell - 1) as u32;
    let two = BigRational::from_integer(2.into());
    let (mut lo, mut hi) = (one.clone(), f.base.clone());
    for _ in 0..256 {
        if Pow::pow(&lo, power) == f.base {
            return g(&lo) >= *c_bar;
        }
        if Pow::pow(&hi, power) == f.base {
            return g(&hi) >= *c_bar;
        }
        let (glo, ghi) = (g(&lo), g(&hi));
        let min = if glo < ghi { glo.clone() } else { ghi.clone() };
        let max = if lo <= two && two <= hi {
            g(&two)
        } else if glo > ghi {
            glo
        } else {
            ghi
        };
        if min >= *c_bar {
            return true;
        }
        if max < *c_bar {
            return false;
        }
        let mid = (&lo + &hi) / &two;
        if Pow::pow(&mid, power) <= f.base {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    true
}

/// Natural logarithm of the Breaker-side bias bound and its two branches.
#[derive(Clone, Debug, Serialize)]
pub struct BreakerBound {
    pub t: usize,
    pub k: usize,
    /// ln of ((2v)^{1/t}·Δ₁·k·e)^{1/(k−1)}
    pub ln_fan_term: f64,
    /// ln of max over 2 ≤ ℓ ≤ k−1 of (Δ_ℓ((tk)^{tk}k^t v²)^{k/t^{1/k}})^{1/(k−ℓ)}; −∞ when the range is empty or every Δ_ℓ is 0
    pub ln_cluster_term: f64,
    /// ln of 4·max(fan term, 2k²t³(cluster term + 2))
    pub ln_value: f64,
    /// exp(ln_value), infinite once it leaves the float range
    pub value: f64,
}

fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Log-domain evaluation of the Breaker criterion's bias bound.
pub fn breaker_bound(h: &Hypergraph, t: usize) -> Result<BreakerBound> {
    if t == 0 {
        return Err(Error::input("t must be positive"));
    }
    let k = uniformity(h)?;
    if k < 2 {
        return Err(Error::precondition("the Breaker bound needs k ≥ 2"));
    }
    let v = h.vertex_count() as f64;
    let e = h.edge_count() as f64;
    let kf = k as f64;
    let tf = t as f64;
    let delta1 = h.max_ell_degree(1)? as f64;
    let ln_fan_term = ((2.0 * v).ln() / tf + delta1.ln() + kf.ln() + e.ln()) / (kf - 1.0);
    let inner = tf * kf * (tf * kf).ln() + tf * kf.ln() + 2.0 * v.ln();
    let exponent = kf / tf.powf(1.0 / kf);
    let mut ln_cluster_term = f64::NEG_INFINITY;
    for ell in 2..k {
        let d = h.max_ell_degree(ell)? as f64;
        if d == 0.0 {
            continue;
        }
        let term = (d.ln() + exponent * inner) / (kf - ell as f64);
        ln_cluster_term = ln_cluster_term.max(term);
    }
    let ln_second = (2.0 * kf * kf * tf.powi(3)).ln() + ln_add(ln_cluster_term, 2f64.ln());
    let ln_value = 4f64.ln() + ln_fan_term.max(ln_second);
    Ok(BreakerBound {
        t,
        k,
        ln_fan_term,
        ln_cluster_term,
        ln_value,
        value: ln_value.exp(),
    })
}

/// Both sides of the biased Maker criterion, exactly.
#[derive(Clone, Debug, Serialize)]
pub struct BeckCheck {
    pub q: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub rhs: BigRational,
    pub maker_wins: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

/// `Σ (1/(1+q))^{|e|} > q²/(1+q)³ · Δ₂ · v`, compared exactly.
pub fn beck_maker_check(h: &Hypergraph, q: u64) -> Result<BeckCheck> {
    let lhs = weighted_edge_sum(&h.edge_size_histogram(), q);
    let delta2 = if h.vertex_count() >= 2 { h.max_ell_degree(2)? } else { 0 };
    let q_big = BigInt::from(q);
    let q1 = BigInt::from(q + 1);
    let rhs = BigRational::new(&q_big * &q_big, Pow::pow(&q1, 3u32))
        * BigRational::from_integer(BigInt::from(delta2) * BigInt::from(h.vertex_count()));
    Ok(BeckCheck {
        q,
        maker_wins: lhs > rhs,
        lhs,
        rhs,
    })
}

/// Default cap on ordered intersecting edge pairs examined by the sharp bound.
pub const DEFAULT_PAIR_BUDGET: u64 = 500_000_000;

/// Expected edge count `Σ_e p^{|e|}` and the intersecting-pair sum
/// `Σ_{e∩e'≠∅} p^{|e∪e'|}` over ordered pairs, diagonal included.
fn janson_sums(h: &Hypergraph, p: f64, pair_budget: u64) -> Result<(f64, f64)> {
    let pairs: u64 = (0..h.vertex_count() as Vertex)
        .map(|v| (h.incident_edges(v).len() as u64).pow(2))
        .sum();
    if pairs > pair_budget {
        return Err(Error::capacity("intersecting edge pairs for the sharp bound", pair_budget));
    }
    let mean: f64 = h.edges().map(|e| p.powi(e.len() as i32)).sum();
    let mut overlap = vec![0u32; h.edge_count()];
    let mut touched: Vec<u32> = Vec::new();
    let mut sum = 0.0;
    for (i, e) in h.edges().enumerate() {
        for &v in e {
            for &f in h.incident_edges(v) {
                if overlap[f as usize] == 0 {
                    touched.push(f);
                }
                overlap[f as usize] += 1;
            }
        }
        for &f in &touched {
            let s = overlap[f as usize] as i32;
            let union = e.len() as i32 + h.edge(f as usize).len() as i32 - s;
            sum += p.powi(union);
            overlap[f as usize] = 0;
        }
        touched.clear();
        debug_assert!(i < h.edge_count());
    }
    Ok((mean, sum))
}

/// Sharp pairwise upper bound on P(a p-random vertex set contains no edge).
pub fn janson_no_edge_bound(h: &Hypergraph, p: f64, pair_budget: u64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::input(format!("p = {p} is not in (0,1)")));
    }
    let (mean, sum) = janson_sums(h, p, pair_budget)?;
    if sum == 0.0 {
        return Ok(1.0);
    }
    Ok((-mean * mean / sum).exp())
}

/// The intersecting-pair sum and its successive degree-based relaxations.
#[derive(Clone, Debug, Serialize)]
pub struct JansonChain {
    pub p: f64,
    pub mean: f64,
    /// exact ordered pair sum
    pub pair_sum: f64,
    /// Σ_e Σ_{∅≠T⊆e} deg(T) p^{2k−|T|}
    pub subset_sum: f64,
    /// e(H)(2^k − 1) max_ℓ Δ_ℓ p^{2k−ℓ}
    pub max_degree_sum: f64,
    /// 2^k e(H) max_ℓ Δ_ℓ p^{2k−ℓ}
    pub relaxed_sum: f64,
    pub sharp_bound: f64,
    pub relaxed_bound: f64,
}

/// Evaluates each step of the degree-based relaxation of the pair sum.
pub fn janson_chain(h: &Hypergraph, p: f64, pair_budget: u64) -> Result<JansonChain> {
    let k = uniformity(h)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::input(format!("p = {p} is not in (0,1)")));
    }
    let (mean, pair_sum) = janson_sums(h, p, pair_budget)?;
    let mut subset_sum = 0.0;
    for e in h.edges() {
        for size in 1..=k {
            let mut err = None;
            for_each_combination(e, size, |t| match h.degree(t) {
                Ok(d) => subset_sum += d as f64 * p.powi((2 * k - size) as i32),
                Err(x) => err = Some(x),
            });
            if let Some(x) = err {
                return Err(x);
            }
        }
    }
    let mut best = 0.0f64;
    for ell in 1..=k {
        best = best.max(h.max_ell_degree(ell)? as f64 * p.powi((2 * k - ell) as i32));
    }
    let e = h.edge_count() as f64;
    let max_degree_sum = e * (2f64.powi(k as i32) - 1.0) * best;
    let relaxed_sum = e * 2f64.powi(k as i32) * best;
    let bound = |s: f64| if s == 0.0 { 1.0 } else { (-mean * mean / s).exp() };
    Ok(JansonChain {
        p,
        mean,
        pair_sum,
        subset_sum,
        max_degree_sum,
        relaxed_sum,
        sharp_bound: bound(pair_sum),
        relaxed_bound: bound(relaxed_sum),
    })
}

/// `3·exp(−M/(c₁·2^{k+2}))`.
pub fn decay_bound(rounds: u64, c1: f64, k: usize) -> f64 {
    3.0 * (-(rounds as f64) / (c1 * 2f64.powi(k as i32 + 2))).exp()
}

/// `(√(n/12 − 1/6), √(3n))`.
pub fn threeap_bounds(n: u64) -> Result<(f64, f64)> {
    if n < 3 {
        return Err(Error::input("progression bounds need n ≥ 3"));
    }
    let n = n as f64;
    Ok(((n / 12.0 - 1.0 / 6.0).sqrt(), (3.0 * n).sqrt()))
}

pub enum ExponentSource<'a> {
    System(&'a LinearSystem),
    Pattern(&'a Pattern),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredictedExponent {
    /// threshold bias of order n^value
    Exponent {
        #[serde(with = "crate::serde_util::ratio")]
        value: BigRational,
    },
    /// positive but not abundant: Breaker wins with bias at most 2
    BreakerAtMostTwo,
}

pub fn predicted_exponent(source: ExponentSource<'_>) -> Result<PredictedExponent> {
    let density = match source {
        ExponentSource::System(sys) => {
            let a = sys.matrix();
            if !is_positive(a) {
                return Err(Error::precondition("the matrix is not positive"));
            }
            if !is_abundant(a) {
                return Ok(PredictedExponent::BreakerAtMostTwo);
            }
            max_one_density(a)?.value
        }
        ExponentSource::Pattern(g) => r_density(g)?.value,
    };
    Ok(PredictedExponent::Exponent {
        value: density.recip(),
    })
}

/// Inputs of a full report; absent values skip the corresponding section.
#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    pub q: Option<u64>,
    pub t: Option<usize>,
    pub c1: Option<f64>,
    pub c: Option<f64>,
    pub c_bar: Option<f64>,
    pub p: Option<f64>,
    pub rounds: Option<u64>,
    pub progression_n: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriteriaReport {
    pub vertices: usize,
    pub edges: usize,
    pub uniformity: Option<usize>,
    pub density: Option<String>,
    pub max_degrees: Vec<u64>,
    pub f: Option<FValue>,
    pub maker: Option<MakerReport>,
    pub breaker_bound: Option<BreakerBound>,
    pub beck: Option<BeckCheck>,
    pub janson: Option<JansonChain>,
    pub decay_rounds: Option<u64>,
    pub decay_bound: Option<f64>,
    pub threeap_bounds: Option<(f64, f64)>,
    pub predicted_exponent: Option<PredictedExponent>,
    pub notes: Vec<String>,
}

impl CriteriaReport {
    pub fn evaluate(h: &Hypergraph, opts: &ReportOptions, source: Option<ExponentSource<'_>>) -> Result<Self> {
        let mut notes = Vec::new();
        let params = if h.vertex_count() > 0 {
            Some(h.parameters()?)
        } else {
            None
        };
        let k = h.uniformity();
        let f = params.as_ref().and_then(|p| p.f_value.clone());
        if f.is_none() {
            notes.push("f(H) is undefined: the board is empty, not uniform, or has edges of size below 2".into());
        }
        let c1 = opts.c1.unwrap_or(k.unwrap_or(2) as f64);
        let c = opts.c.unwrap_or(0.1);
        let c_bar = opts.c_bar.unwrap_or(1e3);
        if opts.c1.is_none() || opts.c.is_none() || opts.c_bar.is_none() {
            notes.push("defaulted constants c1 = k, c = 0.1, c_bar = 1000 are illustrative only".into());
        }
        let maker = match &f {
            Some(_) => Some(maker_report(h, c1, c, c_bar)?),
            None => None,
        };
        let breaker = match (opts.t, k) {
            (Some(t), Some(k)) if k >= 2 => Some(breaker_bound(h, t)?),
            _ => None,
        };
        let beck = match opts.q {
            Some(q) => Some(beck_maker_check(h, q)?),
            None => None,
        };
        let p = opts.p.or_else(|| f.as_ref().filter(|f| f.exceeds_one()).map(|f| 1.0 / f.value));
        let janson = match (p, k) {
            (Some(p), Some(_)) => match janson_chain(h, p, DEFAULT_PAIR_BUDGET) {
                Ok(chain) => Some(chain),
                Err(Error::Capacity { .. }) => {
                    notes.push("pair sum skipped: too many intersecting edge pairs".into());
                    None
                }
                Err(e) => return Err(e),
            },
            _ => None,
        };
        let decay_rounds = opts.rounds.or_else(|| {
            f.as_ref()
                .filter(|f| f.exceeds_one())
                .map(|f| 2 * (h.vertex_count() as f64 / f.value).floor() as u64)
        });
        let decay = match (decay_rounds, k) {
            (Some(m), Some(k)) => {
                notes.push("the decay bound assumes its hypotheses hold for the supplied c1; they are not certified here".into());
                Some(decay_bound(m, c1, k))
            }
            _ => None,
        };
        let threeap = match opts.progression_n {
            Some(n) => Some(threeap_bounds(n)?),
            None => None,
        };
        let predicted = match source {
            Some(s) => Some(predicted_exponent(s)?),
            None => None,
        };
        Ok(CriteriaReport {
            vertices: h.vertex_count(),
            edges: h.edge_count(),
            uniformity: k,
            density: params.as_ref().map(|p| format_ratio(&p.density)),
            max_degrees: params.map(|p| p.max_degrees).unwrap_or_default(),
            f,
            maker,
            breaker_bound: breaker,
            beck,
            janson,
            decay_rounds,
            decay_bound: decay,
            threeap_bounds: threeap,
            predicted_exponent: predicted,
            notes,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
