//! Estimators and diagnostics on top of the oracle and the chains:
//! influence profiles, threshold curves, decay fits, critical-point
//! bracketing, and the crossing-inequality checks.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::events::{
    count_disjoint_crossings, crossing_pivotal_edges, hamming_to_complement, EventSpec,
    GENERIC_HAMMING_LIMIT,
};
use crate::exact::{
    enumerate_measure, event_vector, Bc, ClusterTable, ExactDistribution, ModelParams,
};
use crate::lattice::{v, Configuration, Edge, EdgeId, Region};
use crate::sampler::{
    estimate_event, estimate_statistic, run_chain, Algorithm, EstimateWithError, Schedule,
    N_BATCHES,
};

/// Mixes a base seed with a task index so parallel grid points get
/// independent, reproducible streams.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Whether exact enumeration or sampling backs a check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckMode {
    Exact,
    Mc,
}

impl std::str::FromStr for CheckMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<CheckMode> {
        match s {
            "exact" => Ok(CheckMode::Exact),
            "mc" => Ok(CheckMode::Mc),
            other => Err(Error::Config(format!("mode must be \"exact\" or \"mc\", got {other:?}"))),
        }
    }
}

/// Two sides of an inequality, lhs >= rhs expected up to noise.
#[derive(Clone, Copy, Debug)]
pub struct InequalityCheck {
    pub lhs: EstimateWithError,
    pub rhs: EstimateWithError,
}

impl InequalityCheck {
    pub fn slack(&self) -> f64 {
        self.lhs.estimate - self.rhs.estimate
    }

    pub fn combined_stderr(&self) -> f64 {
        self.lhs.stderr.hypot(self.rhs.stderr)
    }
}

fn exact_side(value: f64) -> EstimateWithError {
    EstimateWithError { estimate: value, stderr: 0.0, n_samples: 0, seed: 0, burn_in: 0, thin: 0 }
}

/// est^t with the delta-method error on log scale.
fn powered(base: EstimateWithError, t: f64) -> EstimateWithError {
    let value = base.estimate.powf(t);
    let stderr =
        if base.estimate > 0.0 { value * t * base.stderr / base.estimate } else { 0.0 };
    EstimateWithError { estimate: value, stderr, ..base }
}

fn wired(p: f64, q: f64) -> Result<ModelParams> {
    ModelParams::new(p, q, Bc::Wired)
}

fn crossing_sim_region(a: i32, b: i32, margin: i32) -> Result<Region> {
    Region::centered(a, b)?.margin_box(margin)
}

/// One point of a crossing-probability curve.
#[derive(Clone, Copy, Debug)]
pub struct ThresholdPoint {
    pub p: f64,
    pub estimate: EstimateWithError,
}

/// Estimated crossing probabilities of C_h(2n,n) along a p grid.
#[derive(Clone, Debug)]
pub struct ThresholdCurve {
    pub q: f64,
    pub n: i32,
    pub margin: i32,
    pub points: Vec<ThresholdPoint>,
}

/// Crossing probability of C_h(2n,n) at each grid p, wired bc on a margin
/// box, one independent chain per grid point.
pub fn threshold_curve(
    q: f64,
    n: i32,
    p_grid: &[f64],
    margin: i32,
    schedule: Schedule,
    seed: u64,
) -> Result<ThresholdCurve> {
    if n < 1 {
        return Err(Error::Params(format!("threshold curve needs n >= 1, got {n}")));
    }
    if p_grid.is_empty() {
        return Err(Error::Params("p grid is empty".into()));
    }
    for w in p_grid.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Params(format!(
                "p grid must be strictly increasing, got {} before {}",
                w[0], w[1]
            )));
        }
    }
    let ev = EventSpec::Crossing { a: 2 * n, b: n };
    let sim = crossing_sim_region(2 * n, n, margin)?;
    let points: Result<Vec<ThresholdPoint>> = p_grid
        .par_iter()
        .enumerate()
        .map(|(i, &p)| {
            let params = wired(p, q)?;
            let estimate =
                estimate_event(&sim, params, schedule, derive_seed(seed, i as u64), Algorithm::Auto, |c| {
                    ev.detect(c, &sim).unwrap()
                })?;
            Ok(ThresholdPoint { p, estimate })
        })
        .collect();
    Ok(ThresholdCurve { q, n, margin, points: points? })
}

/// One usable distance of a decay fit.
#[derive(Clone, Copy, Debug)]
pub struct DecayPoint {
    pub distance: i32,
    pub probability: EstimateWithError,
    pub log_probability: f64,
    pub successes: u64,
}

/// Least-squares fit of log connection probability against distance.
#[derive(Clone, Debug)]
pub struct DecayFit {
    pub q: f64,
    pub p: f64,
    pub points: Vec<DecayPoint>,
    /// Distances dropped for having fewer than [`MIN_DECAY_SUCCESSES`]
    /// successful samples, with their success counts.
    pub excluded: Vec<(i32, u64)>,
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Success count below which a decay distance is dropped from the fit.
pub const MIN_DECAY_SUCCESSES: u64 = 10;

/// Estimates P[0 joined to (d,0) inside [-d,d]^2] under free bc for each
/// distance and fits log probability against d. The slope estimates -c of
/// an exp(-c d) decay.
pub fn fit_decay(
    q: f64,
    p: f64,
    distances: &[i32],
    schedule: Schedule,
    seed: u64,
) -> Result<DecayFit> {
    if distances.len() < 4 {
        return Err(Error::Params(format!(
            "decay fit needs at least 4 distances, got {}",
            distances.len()
        )));
    }
    for w in distances.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Params("distances must be strictly increasing".into()));
        }
    }
    if distances[0] < 1 {
        return Err(Error::Params(format!("distances must be >= 1, got {}", distances[0])));
    }
    let estimates: Result<Vec<(i32, EstimateWithError)>> = distances
        .par_iter()
        .enumerate()
        .map(|(i, &d)| {
            let r = Region::centered(d, d)?;
            let params = ModelParams::new(p, q, Bc::Free)?;
            let ev = EventSpec::Connection { x: v(d, 0), n: d };
            let est =
                estimate_event(&r, params, schedule, derive_seed(seed, i as u64), Algorithm::Auto, |c| {
                    ev.detect(c, &r).unwrap()
                })?;
            Ok((d, est))
        })
        .collect();
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for (d, est) in estimates? {
        let successes = (est.estimate * est.n_samples as f64).round() as u64;
        if successes < MIN_DECAY_SUCCESSES {
            excluded.push((d, successes));
        } else {
            points.push(DecayPoint {
                distance: d,
                probability: est,
                log_probability: est.estimate.ln(),
                successes,
            });
        }
    }
    if points.len() < 4 {
        return Err(Error::Stat(format!(
            "only {} of {} distances had at least {MIN_DECAY_SUCCESSES} successes; \
             a log-linear fit needs 4",
            points.len(),
            distances.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|pt| pt.distance as f64).collect();
    let ys: Vec<f64> = points.iter().map(|pt| pt.log_probability).collect();
    let (slope, intercept, slope_stderr, r_squared) = ols(&xs, &ys);
    Ok(DecayFit { q, p, points, excluded, slope, slope_stderr, intercept, r_squared })
}

/// Unweighted least squares; returns slope, intercept, slope stderr, R^2.
fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sst: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    if sst == 0.0 {
        return (slope, intercept, 0.0, 1.0);
    }
    let sigma2 = sse / (n - 2.0);
    ((slope), intercept, (sigma2 / sxx).sqrt(), 1.0 - sse / sst)
}

fn probe_event(ev: &EventSpec, r: &Region) -> Result<()> {
    ev.detect(&Configuration::all_closed(r.n_edges()), r)?;
    Ok(())
}

/// Empirical covariance of the event indicator and one edge state, the
/// sampled counterpart of the exact influence.
pub fn influence_mc(
    r: &Region,
    params: ModelParams,
    ev: &EventSpec,
    e: EdgeId,
    schedule: Schedule,
    seed: u64,
) -> Result<EstimateWithError> {
    if e.0 >= r.n_edges() {
        return Err(Error::Params(format!("edge index {} outside region {r}", e.0)));
    }
    probe_event(ev, r)?;
    let m = schedule.n_samples();
    if m < N_BATCHES {
        return Err(Error::Schedule(format!(
            "schedule yields {m} samples; batch-means errors need at least {N_BATCHES}"
        )));
    }
    let b = N_BATCHES as usize;
    let base = m / N_BATCHES;
    let extra = (m % N_BATCHES) as usize;
    let mut sums = vec![[0.0f64; 3]; b];
    let mut batch = 0usize;
    let mut filled = 0u64;
    run_chain(r, params, schedule, seed, Algorithm::Auto, |c| {
        let x = ev.detect(c, r).unwrap() as u64 as f64;
        let w = c.get(e) as u64 as f64;
        sums[batch][0] += x;
        sums[batch][1] += w;
        sums[batch][2] += x * w;
        filled += 1;
        if filled == base + u64::from(batch < extra) && batch + 1 < b {
            batch += 1;
            filled = 0;
        }
    })?;
    let tot: [f64; 3] = sums.iter().fold([0.0; 3], |acc, s| {
        [acc[0] + s[0], acc[1] + s[1], acc[2] + s[2]]
    });
    let mf = m as f64;
    let estimate = tot[2] / mf - (tot[0] / mf) * (tot[1] / mf);
    let covs: Vec<f64> = (0..b)
        .map(|i| {
            let size = (base + u64::from(i < extra)) as f64;
            sums[i][2] / size - (sums[i][0] / size) * (sums[i][1] / size)
        })
        .collect();
    let mean = covs.iter().sum::<f64>() / b as f64;
    let var = covs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (b as f64 - 1.0);
    Ok(EstimateWithError {
        estimate,
        stderr: (var / b as f64).sqrt(),
        n_samples: m,
        seed,
        burn_in: schedule.burn_in,
        thin: schedule.thin,
    })
}

/// Influence estimates for every edge of the region from one chain. A
/// crossing event at q = 1 uses per-sample pivotal edges, which is far less
/// noisy than the covariance; everything else uses the covariance.
pub fn influence_profile_mc(
    r: &Region,
    params: ModelParams,
    ev: &EventSpec,
    schedule: Schedule,
    seed: u64,
) -> Result<Vec<EstimateWithError>> {
    probe_event(ev, r)?;
    let m = schedule.n_samples();
    if m < N_BATCHES {
        return Err(Error::Schedule(format!(
            "schedule yields {m} samples; batch-means errors need at least {N_BATCHES}"
        )));
    }
    let b = N_BATCHES as usize;
    let base = m / N_BATCHES;
    let extra = (m % N_BATCHES) as usize;
    let ne = r.n_edges();
    let pivotal_pair = match (params.q == 1.0, ev) {
        (true, EventSpec::Crossing { a, b }) => Some((*a, *b)),
        _ => None,
    };
    let mut batch = 0usize;
    let mut filled = 0u64;
    let estimates = if let Some((a, bb)) = pivotal_pair {
        let scale = params.p * (1.0 - params.p);
        let mut counts = vec![0u32; b * ne];
        run_chain(r, params, schedule, seed, Algorithm::Auto, |c| {
            let piv = crossing_pivotal_edges(c, r, a, bb).unwrap();
            let row = &mut counts[batch * ne..(batch + 1) * ne];
            for (e, &hit) in piv.iter().enumerate() {
                row[e] += hit as u32;
            }
            filled += 1;
            if filled == base + u64::from(batch < extra) && batch + 1 < b {
                batch += 1;
                filled = 0;
            }
        })?;
        (0..ne)
            .map(|e| {
                let means: Vec<f64> = (0..b)
                    .map(|i| {
                        let size = (base + u64::from(i < extra)) as f64;
                        scale * counts[i * ne + e] as f64 / size
                    })
                    .collect();
                batch_summary(&means, m)
            })
            .collect()
    } else {
        let mut sum_w = vec![0.0f64; b * ne];
        let mut sum_xw = vec![0.0f64; b * ne];
        let mut sum_x = vec![0.0f64; b];
        run_chain(r, params, schedule, seed, Algorithm::Auto, |c| {
            let x = ev.detect(c, r).unwrap();
            sum_x[batch] += x as u64 as f64;
            let (w_row, xw_row) =
                (&mut sum_w[batch * ne..(batch + 1) * ne], batch * ne);
            for e in c.open_edges() {
                w_row[e.0] += 1.0;
                if x {
                    sum_xw[xw_row + e.0] += 1.0;
                }
            }
            filled += 1;
            if filled == base + u64::from(batch < extra) && batch + 1 < b {
                batch += 1;
                filled = 0;
            }
        })?;
        (0..ne)
            .map(|e| {
                let covs: Vec<f64> = (0..b)
                    .map(|i| {
                        let size = (base + u64::from(i < extra)) as f64;
                        sum_xw[i * ne + e] / size
                            - (sum_x[i] / size) * (sum_w[i * ne + e] / size)
                    })
                    .collect();
                batch_summary(&covs, m)
            })
            .collect()
    };
    let mut out: Vec<EstimateWithError> = estimates;
    for est in &mut out {
        est.seed = seed;
        est.burn_in = schedule.burn_in;
        est.thin = schedule.thin;
    }
    Ok(out)
}

fn batch_summary(values: &[f64], n_samples: u64) -> EstimateWithError {
    let b = values.len() as f64;
    let mean = values.iter().sum::<f64>() / b;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (b - 1.0);
    EstimateWithError {
        estimate: mean,
        stderr: (var / b).sqrt(),
        n_samples,
        seed: 0,
        burn_in: 0,
        thin: 0,
    }
}

/// Checks phi[C_h(ln,n)] >= phi[C_h(n+m,n)]^(2kl), both sides sampled under
/// the wired measure on a margin box around the larger event.
#[allow(clippy::too_many_arguments)]
pub fn check_combination(
    q: f64,
    p: f64,
    n: i32,
    m: i32,
    k: i32,
    l: i32,
    margin: i32,
    schedule: Schedule,
    seed: u64,
) -> Result<InequalityCheck> {
    if n < 1 || m < 0 || k < 1 || l < 1 {
        return Err(Error::Params(format!(
            "combination check needs n,k,l >= 1 and m >= 0, got n={n} m={m} k={k} l={l}"
        )));
    }
    if (m as i64) * (k as i64) < n as i64 {
        return Err(Error::Params(format!(
            "combination check requires m >= n/k, got m={m} n={n} k={k}"
        )));
    }
    let params = wired(p, q)?;
    let a_lhs = l * n;
    let a_rhs = n + m;
    let sim = crossing_sim_region(a_lhs.max(a_rhs), n, margin)?;
    let lhs_ev = EventSpec::Crossing { a: a_lhs, b: n };
    let rhs_ev = EventSpec::Crossing { a: a_rhs, b: n };
    let (lhs, rhs_base) = rayon::join(
        || {
            estimate_event(&sim, params, schedule, derive_seed(seed, 0), Algorithm::Auto, |c| {
                lhs_ev.detect(c, &sim).unwrap()
            })
        },
        || {
            estimate_event(&sim, params, schedule, derive_seed(seed, 1), Algorithm::Auto, |c| {
                rhs_ev.detect(c, &sim).unwrap()
            })
        },
    );
    let rhs = powered(rhs_base?, 2.0 * (k as f64) * (l as f64));
    Ok(InequalityCheck { lhs: lhs?, rhs })
}

/// Checks P[N(ln,n) >= u] >= P[N(2n,n) >= u]^(2(l-2)+1) for the maximal
/// number N of edge-disjoint crossings, wired measure on a margin box.
pub fn check_gluing(
    q: f64,
    p: f64,
    n: i32,
    u: u32,
    l: i32,
    margin: i32,
    schedule: Schedule,
    seed: u64,
) -> Result<InequalityCheck> {
    if n < 1 || u < 1 || l < 2 {
        return Err(Error::Params(format!(
            "gluing check needs n >= 1, u >= 1, l >= 2, got n={n} u={u} l={l}"
        )));
    }
    let params = wired(p, q)?;
    let sim = crossing_sim_region(l * n, n, margin)?;
    let (lhs, rhs_base) = rayon::join(
        || {
            estimate_event(&sim, params, schedule, derive_seed(seed, 0), Algorithm::Auto, |c| {
                count_disjoint_crossings(c, &sim, l * n, n).unwrap() >= u
            })
        },
        || {
            estimate_event(&sim, params, schedule, derive_seed(seed, 1), Algorithm::Auto, |c| {
                count_disjoint_crossings(c, &sim, 2 * n, n).unwrap() >= u
            })
        },
    );
    let rhs = powered(rhs_base?, (2 * (l - 2) + 1) as f64);
    Ok(InequalityCheck { lhs: lhs?, rhs })
}

fn trivially_true(ev: &EventSpec) -> bool {
    matches!(
        ev,
        EventSpec::Crossing { a: 0, .. }
            | EventSpec::Connection { x: Vertex { x: 0, y: 0 }, .. }
    ) || matches!(ev, EventSpec::BoxToBoundary { n, m } if n == m)
}

use crate::lattice::Vertex;

/// Exact check of phi_{p+delta}[A] >= 1 - exp(-4 delta E_p[H]), where H is
/// the Hamming distance to the complement of A.
pub fn check_hamming_lemma_exact(
    r: &Region,
    params: ModelParams,
    ev: &EventSpec,
    delta: f64,
) -> Result<InequalityCheck> {
    validate_delta(params.p, delta)?;
    let raised = ModelParams::new(params.p + delta, params.q, params.bc)?;
    let table = ClusterTable::build(r, params.bc)?;
    let hits = event_vector(r, |c| ev.detect(c, r).unwrap())?;
    let lhs = crate::exact::enumerate_with_table(&table, raised)?.event_probability_vec(&hits)?;
    let rhs = if hits.iter().all(|&h| h) {
        // the complement is empty, the distance is infinite
        1.0
    } else {
        let dist = crate::exact::enumerate_with_table(&table, params)?;
        let mut expectation = 0.0;
        for (mask, &pr) in dist.probs().iter().enumerate() {
            if pr == 0.0 || !hits[mask] {
                continue;
            }
            let c = Configuration::from_mask(mask as u64, r.n_edges());
            expectation += pr * hamming_to_complement(&c, ev, r)? as f64;
        }
        1.0 - (-4.0 * delta * expectation).exp()
    };
    Ok(InequalityCheck { lhs: exact_side(lhs), rhs: exact_side(rhs) })
}

/// Sampled version of the Hamming-distance lower bound: the event side runs
/// at p + delta, the distance side at p.
pub fn check_hamming_lemma_mc(
    r: &Region,
    params: ModelParams,
    ev: &EventSpec,
    delta: f64,
    schedule: Schedule,
    seed: u64,
) -> Result<InequalityCheck> {
    validate_delta(params.p, delta)?;
    probe_event(ev, r)?;
    let raised = ModelParams::new(params.p + delta, params.q, params.bc)?;
    let lhs = estimate_event(r, raised, schedule, derive_seed(seed, 0), Algorithm::Auto, |c| {
        ev.detect(c, r).unwrap()
    })?;
    if trivially_true(ev) {
        return Ok(InequalityCheck { lhs, rhs: exact_side(1.0) });
    }
    let flow_backed = matches!(
        ev,
        EventSpec::Crossing { .. } | EventSpec::Strip { .. } | EventSpec::StripDual { .. }
    );
    if !flow_backed && ev.support()?.n_edges() > GENERIC_HAMMING_LIMIT {
        return Err(Error::Event(format!(
            "Hamming sampling supports crossing-type events or supports with at most \
             {GENERIC_HAMMING_LIMIT} edges, not {ev}"
        )));
    }
    let h = estimate_statistic(r, params, schedule, derive_seed(seed, 1), Algorithm::Auto, |c| {
        hamming_to_complement(c, ev, r).unwrap() as f64
    })?;
    let rhs_value = 1.0 - (-4.0 * delta * h.estimate).exp();
    let rhs = EstimateWithError {
        estimate: rhs_value,
        stderr: 4.0 * delta * (-4.0 * delta * h.estimate).exp() * h.stderr,
        ..h
    };
    Ok(InequalityCheck { lhs, rhs })
}

fn validate_delta(p: f64, delta: f64) -> Result<()> {
    if delta < 0.0 || p + delta > 1.0 {
        return Err(Error::Params(format!(
            "need 0 <= delta and p + delta <= 1, got p={p} delta={delta}"
        )));
    }
    Ok(())
}

/// One edge of a translation-difference check: lhs = |J(e) - J(shifted e)|,
/// rhs = P[A_(k-1)] - P[A_(k+1)] for the crossing family A_j = C_h(j,n).
#[derive(Clone, Copy, Debug)]
pub struct TranslationDifferenceCheck {
    pub edge: Edge,
    pub lhs: EstimateWithError,
    pub rhs: EstimateWithError,
}

impl TranslationDifferenceCheck {
    pub fn slack(&self) -> f64 {
        self.rhs.estimate - self.lhs.estimate
    }

    pub fn combined_stderr(&self) -> f64 {
        self.lhs.stderr.hypot(self.rhs.stderr)
    }
}

fn shifted_right(edge: Edge) -> Edge {
    Edge { anchor: v(edge.anchor.x + 1, edge.anchor.y), orientation: edge.orientation }
}

/// Exact translation-difference bound for A_k = C_h(k,n) on region r, at
/// every edge whose (1,0)-shift stays in the region.
pub fn check_translation_difference_exact(
    r: &Region,
    params: ModelParams,
    n: i32,
    k: i32,
) -> Result<Vec<TranslationDifferenceCheck>> {
    if k < 1 || n < 0 {
        return Err(Error::Params(format!("family index k >= 1 and n >= 0 required, got k={k} n={n}")));
    }
    let dist = enumerate_measure(r, params)?;
    let family = |j: i32| EventSpec::Crossing { a: j, b: n };
    let hits_k = event_vector(r, |c| family(k).detect(c, r).unwrap())?;
    let lower = event_vector(r, |c| family(k - 1).detect(c, r).unwrap())?;
    let upper = event_vector(r, |c| family(k + 1).detect(c, r).unwrap())?;
    translation_difference_from_parts(r, &dist, &hits_k, &lower, &upper)
}

/// The exact check's core, split out so callers holding a prebuilt
/// distribution and indicator vectors can reuse them.
pub fn translation_difference_from_parts(
    r: &Region,
    dist: &ExactDistribution,
    hits_k: &[bool],
    hits_lower: &[bool],
    hits_upper: &[bool],
) -> Result<Vec<TranslationDifferenceCheck>> {
    let (_, influences) = dist.influence_profile_vec(hits_k)?;
    let rhs = exact_side(
        dist.event_probability_vec(hits_lower)? - dist.event_probability_vec(hits_upper)?,
    );
    let mut checks = Vec::new();
    for (idx, edge) in r.edges().enumerate() {
        let Some(shifted) = r.edge_index(shifted_right(edge)) else { continue };
        let lhs = exact_side((influences[idx] - influences[shifted.0]).abs());
        checks.push(TranslationDifferenceCheck { edge, lhs, rhs });
    }
    Ok(checks)
}

/// Sampled translation-difference bound for A_k = C_h(k,n) under the wired
/// measure on a margin box around C_h(k+1,n). Influences come from one
/// chain; the right side is the mean of the nested indicator difference
/// from a second chain. Only edges inside the event box are compared.
#[allow(clippy::too_many_arguments)]
pub fn check_translation_difference_mc(
    q: f64,
    p: f64,
    n: i32,
    k: i32,
    margin: i32,
    schedule: Schedule,
    seed: u64,
) -> Result<Vec<TranslationDifferenceCheck>> {
    if k < 1 || n < 1 {
        return Err(Error::Params(format!("family index k >= 1 and n >= 1 required, got k={k} n={n}")));
    }
    let params = wired(p, q)?;
    let sim = crossing_sim_region(k + 1, n, margin)?;
    let family = |j: i32| EventSpec::Crossing { a: j, b: n };
    let (profile, rhs) = rayon::join(
        || influence_profile_mc(&sim, params, &family(k), schedule, derive_seed(seed, 0)),
        || {
            estimate_statistic(&sim, params, schedule, derive_seed(seed, 1), Algorithm::Auto, |c| {
                let low = family(k - 1).detect(c, &sim).unwrap() as u64 as f64;
                let high = family(k + 1).detect(c, &sim).unwrap() as u64 as f64;
                low - high
            })
        },
    );
    let profile = profile?;
    let rhs = rhs?;
    let event_box = Region::centered(k, n)?;
    let mut checks = Vec::new();
    for (idx, edge) in sim.edges().enumerate() {
        let shifted = shifted_right(edge);
        if !edge_in_box(&event_box, edge) || !edge_in_box(&event_box, shifted) {
            continue;
        }
        let t = sim.edge_index(shifted).unwrap();
        let (je, jt) = (profile[idx], profile[t.0]);
        let lhs = EstimateWithError {
            estimate: (je.estimate - jt.estimate).abs(),
            stderr: je.stderr.hypot(jt.stderr),
            ..je
        };
        checks.push(TranslationDifferenceCheck { edge, lhs, rhs });
    }
    Ok(checks)
}

fn edge_in_box(b: &Region, edge: Edge) -> bool {
    let (u, w) = edge.endpoints();
    b.contains(u) && b.contains(w)
}

/// Influence summary of one member of the crossing family.
#[derive(Clone, Debug)]
pub struct SharpThresholdDiagnostic {
    pub k: i32,
    pub influences: Vec<f64>,
    pub sum_j: f64,
    pub max_j: f64,
    /// max{ log(c / max J), sum J }; infinite and flagged degenerate when
    /// every influence is zero.
    pub f_value: f64,
    pub degenerate: bool,
}

/// Family-wide influence diagnostic. The f values are descriptive only:
/// the constant they depend on is supplied by the caller, not derived.
#[derive(Clone, Debug)]
pub struct SharpThresholdReport {
    pub n: i32,
    pub c_user: f64,
    pub diagnostics: Vec<SharpThresholdDiagnostic>,
    pub f_sum: f64,
}

fn diagnostic_from_profile(k: i32, influences: Vec<f64>, c_user: f64) -> SharpThresholdDiagnostic {
    let sum_j: f64 = influences.iter().sum();
    let max_j = influences.iter().cloned().fold(0.0f64, f64::max);
    let (f_value, degenerate) = if max_j > 0.0 {
        ((c_user / max_j).ln().max(sum_j), false)
    } else {
        (f64::INFINITY, true)
    };
    SharpThresholdDiagnostic { k, influences, sum_j, max_j, f_value, degenerate }
}

fn validate_diagnostic_args(ks: &[i32], c_user: f64) -> Result<()> {
    if ks.is_empty() {
        return Err(Error::Params("empty family index list".into()));
    }
    if c_user <= 0.0 {
        return Err(Error::Params(format!("the f constant must be positive, got {c_user}")));
    }
    Ok(())
}

/// Exact influence profiles and f values for the crossing family
/// A_k = C_h(k,n) under the measure on r.
pub fn sharp_threshold_diagnostic_exact(
    r: &Region,
    params: ModelParams,
    n: i32,
    ks: &[i32],
    c_user: f64,
) -> Result<SharpThresholdReport> {
    validate_diagnostic_args(ks, c_user)?;
    let table = ClusterTable::build(r, params.bc)?;
    let dist = crate::exact::enumerate_with_table(&table, params)?;
    let mut diagnostics = Vec::new();
    for &k in ks {
        let ev = EventSpec::Crossing { a: k, b: n };
        let hits = event_vector(r, |c| ev.detect(c, r).unwrap())?;
        // a family member that never or always happens has zero influence
        // everywhere; skip the profile so rounding residue cannot leak in
        let influences = if hits.iter().all(|&h| h) || !hits.iter().any(|&h| h) {
            vec![0.0; r.n_edges()]
        } else {
            dist.influence_profile_vec(&hits)?.1
        };
        diagnostics.push(diagnostic_from_profile(k, influences, c_user));
    }
    let f_sum = diagnostics.iter().map(|d| d.f_value).sum();
    Ok(SharpThresholdReport { n, c_user, diagnostics, f_sum })
}

/// Sampled influence profiles and f values for A_k = C_h(k,n), wired
/// measure on a margin box around the widest family member; one chain per k.
#[allow(clippy::too_many_arguments)]
pub fn sharp_threshold_diagnostic_mc(
    q: f64,
    p: f64,
    n: i32,
    ks: &[i32],
    c_user: f64,
    margin: i32,
    schedule: Schedule,
    seed: u64,
) -> Result<SharpThresholdReport> {
    validate_diagnostic_args(ks, c_user)?;
    let k_max = *ks.iter().max().unwrap();
    if ks.iter().any(|&k| k < 0) {
        return Err(Error::Params("family indices must be >= 0".into()));
    }
    let params = wired(p, q)?;
    let sim = crossing_sim_region(k_max.max(1), n, margin)?;
    let diagnostics: Result<Vec<SharpThresholdDiagnostic>> = ks
        .par_iter()
        .enumerate()
        .map(|(i, &k)| {
            let ev = EventSpec::Crossing { a: k, b: n };
            let profile =
                influence_profile_mc(&sim, params, &ev, schedule, derive_seed(seed, i as u64))?;
            let influences = profile.iter().map(|e| e.estimate).collect();
            Ok(diagnostic_from_profile(k, influences, c_user))
        })
        .collect();
    let diagnostics = diagnostics?;
    let f_sum = diagnostics.iter().map(|d| d.f_value).sum();
    Ok(SharpThresholdReport { n, c_user, diagnostics, f_sum })
}

/// Default bisection bracket for the critical-point search.
pub const DEFAULT_PC_BRACKET: (f64, f64) = (0.3, 0.92);

/// A bracketing interval for the critical point, with the crossing
/// estimates the bisection consumed.
#[derive(Clone, Debug)]
pub struct PcEstimate {
    pub q: f64,
    pub n: i32,
    pub lo: f64,
    pub hi: f64,
    pub evaluations: Vec<ThresholdPoint>,
}

/// Bisects p until the square-crossing probability phi[C_h(n,n)] under the
/// wired margin-box measure passes 1/2, then centers an interval of width
/// tolerance on the estimated root. The square keeps the finite-n bias of
/// the level-1/2 target within a few thousandths for n >= 8.
#[allow(clippy::too_many_arguments)]
pub fn estimate_pc(
    q: f64,
    n: i32,
    tolerance: f64,
    margin: i32,
    bracket: (f64, f64),
    schedule: Schedule,
    seed: u64,
) -> Result<PcEstimate> {
    if n < 8 {
        return Err(Error::Params(format!("critical-point estimation needs n >= 8, got {n}")));
    }
    if tolerance < 0.005 {
        return Err(Error::Params(format!("tolerance must be >= 0.005, got {tolerance}")));
    }
    let (mut lo, mut hi) = bracket;
    if !(0.0 < lo && lo < hi && hi < 1.0) {
        return Err(Error::Params(format!("bad bracket [{lo}, {hi}]")));
    }
    let ev = EventSpec::Crossing { a: n, b: n };
    let sim = crossing_sim_region(n, n, margin)?;
    let mut salt = 0u64;
    let mut evaluations = Vec::new();
    let eval = |p: f64, salt: u64| -> Result<EstimateWithError> {
        let params = wired(p, q)?;
        estimate_event(&sim, params, schedule, derive_seed(seed, salt), Algorithm::Auto, |c| {
            ev.detect(c, &sim).unwrap()
        })
    };
    let at_lo = eval(lo, salt)?;
    salt += 1;
    let at_hi = eval(hi, salt)?;
    salt += 1;
    evaluations.push(ThresholdPoint { p: lo, estimate: at_lo });
    evaluations.push(ThresholdPoint { p: hi, estimate: at_hi });
    if at_lo.estimate >= 0.5 || at_hi.estimate <= 0.5 {
        return Err(Error::Stat(format!(
            "crossing probability does not pass 1/2 inside [{lo}, {hi}] \
             (got {:.3} and {:.3}); increase n or widen the bracket",
            at_lo.estimate, at_hi.estimate
        )));
    }
    // resolve the root to a quarter of the tolerance so the centered
    // interval survives both the bisection grid and the finite-n bias
    while hi - lo > tolerance / 4.0 {
        let mid = 0.5 * (lo + hi);
        let at_mid = eval(mid, salt)?;
        salt += 1;
        evaluations.push(ThresholdPoint { p: mid, estimate: at_mid });
        if at_mid.estimate < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    evaluations.sort_by(|a, b| a.p.total_cmp(&b.p));
    let root = 0.5 * (lo + hi);
    let half = tolerance / 2.0;
    Ok(PcEstimate {
        q,
        n,
        lo: (root - half).max(f64::MIN_POSITIVE),
        hi: (root + half).min(1.0),
        evaluations,
    })
}

/// Locations where the C_h(2n,n) curve passes two probability levels, and
/// the width between them.
#[derive(Clone, Copy, Debug)]
pub struct WindowEstimate {
    pub q: f64,
    pub n: i32,
    pub p_low: f64,
    pub p_low_stderr: f64,
    pub p_high: f64,
    pub p_high_stderr: f64,
    pub width: f64,
    pub width_stderr: f64,
}

/// Lower and upper level of the sharpness window.
pub const WINDOW_LEVELS: (f64, f64) = (0.25, 0.75);

/// Estimates where phi[C_h(2n,n)] rises through 1/4 and 3/4 (wired margin
/// box), by bisection plus a secant refinement at each level.
pub fn estimate_window(
    q: f64,
    n: i32,
    margin: i32,
    schedule: Schedule,
    seed: u64,
) -> Result<WindowEstimate> {
    if n < 1 {
        return Err(Error::Params(format!("window estimation needs n >= 1, got {n}")));
    }
    let ev = EventSpec::Crossing { a: 2 * n, b: n };
    let sim = crossing_sim_region(2 * n, n, margin)?;
    let eval = |p: f64, salt: u64| -> Result<EstimateWithError> {
        let params = wired(p, q)?;
        estimate_event(&sim, params, schedule, derive_seed(seed, salt), Algorithm::Auto, |c| {
            ev.detect(c, &sim).unwrap()
        })
    };
    let (p_low, p_low_stderr) = level_root(&eval, WINDOW_LEVELS.0, 0)?;
    let (p_high, p_high_stderr) = level_root(&eval, WINDOW_LEVELS.1, 1000)?;
    Ok(WindowEstimate {
        q,
        n,
        p_low,
        p_low_stderr,
        p_high,
        p_high_stderr,
        width: p_high - p_low,
        width_stderr: p_low_stderr.hypot(p_high_stderr),
    })
}

fn level_root(
    eval: &dyn Fn(f64, u64) -> Result<EstimateWithError>,
    level: f64,
    salt_base: u64,
) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (0.05, 0.95);
    let mut salt = salt_base;
    let at_lo = eval(lo, salt)?;
    salt += 1;
    let at_hi = eval(hi, salt)?;
    salt += 1;
    if at_lo.estimate >= level || at_hi.estimate <= level {
        return Err(Error::Stat(format!(
            "crossing probability does not pass {level} inside [{lo}, {hi}]"
        )));
    }
    while hi - lo > 0.006 {
        let mid = 0.5 * (lo + hi);
        let at_mid = eval(mid, salt)?;
        salt += 1;
        if at_mid.estimate < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = (lo - 0.002).max(0.01);
    let b = (hi + 0.002).min(0.99);
    let at_a = eval(a, salt)?;
    salt += 1;
    let at_b = eval(b, salt)?;
    let slope = (at_b.estimate - at_a.estimate) / (b - a);
    if slope <= 0.0 {
        return Err(Error::Stat(format!(
            "no rise detected near level {level}; increase the sample count"
        )));
    }
    let root = (a + (level - at_a.estimate) / slope).clamp(a, b);
    let stderr = at_a.stderr.max(at_b.stderr) / slope;
    Ok((root, stderr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::hamming_expectation;

    fn quick(n_samples: u64) -> Schedule {
        Schedule::new(n_samples + 50, 50, 1).unwrap()
    }

    #[test]
    fn seed_derivation_spreads() {
        let a = derive_seed(7, 0);
        let b = derive_seed(7, 1);
        assert_ne!(a, b);
        assert_eq!(a, derive_seed(7, 0));
    }

    #[test]
    fn influence_mc_matches_exact_within_enumeration() {
        let r = Region::centered(1, 1).unwrap();
        let params = ModelParams::new(0.6, 2.0, Bc::Free).unwrap();
        let ev = EventSpec::Connection { x: v(1, 1), n: 1 };
        let e = r.edge_index(Edge::horizontal(0, 0)).unwrap();
        let hits = event_vector(&r, |c| ev.detect(c, &r).unwrap()).unwrap();
        let (_, exact) = enumerate_measure(&r, params).unwrap().influence_profile_vec(&hits).unwrap();
        let mc = influence_mc(&r, params, &ev, e, quick(40_000), 5).unwrap();
        let err = (mc.estimate - exact[e.0]).abs();
        assert!(err < 3.0 * mc.stderr.max(1e-3), "err {err} stderr {}", mc.stderr);
    }

    #[test]
    fn influence_of_single_free_edge() {
        // P(open) = 1/3 at p = 1/2, q = 2, so the self-covariance is 2/9
        let r = Region::new(0, 1, 0, 0).unwrap();
        let params = ModelParams::new(0.5, 2.0, Bc::Free).unwrap();
        let ev = EventSpec::EdgeOpen { edge: Edge::horizontal(0, 0) };
        let mc = influence_mc(&r, params, &ev, EdgeId(0), quick(40_000), 9).unwrap();
        let err = (mc.estimate - 2.0 / 9.0).abs();
        assert!(err < 3.0 * mc.stderr.max(1e-3), "err {err}");
    }

    #[test]
    fn influence_of_unrelated_edge_vanishes() {
        let r = Region::new(0, 2, 0, 0).unwrap();
        let params = ModelParams::new(0.5, 1.0, Bc::Free).unwrap();
        let ev = EventSpec::EdgeOpen { edge: Edge::horizontal(0, 0) };
        let mc = influence_mc(&r, params, &ev, EdgeId(1), quick(20_000), 3).unwrap();
        assert!(mc.estimate.abs() < 3.0 * mc.stderr.max(1e-3), "cov {}", mc.estimate);
    }

    #[test]
    fn influence_profile_pivotal_path_matches_exact() {
        let r = Region::centered(2, 1).unwrap();
        let params = ModelParams::new(0.5, 1.0, Bc::Free).unwrap();
        let ev = EventSpec::Crossing { a: 2, b: 1 };
        let hits = event_vector(&r, |c| ev.detect(c, &r).unwrap()).unwrap();
        let (_, exact) = enumerate_measure(&r, params).unwrap().influence_profile_vec(&hits).unwrap();
        let profile = influence_profile_mc(&r, params, &ev, quick(60_000), 21).unwrap();
        for (e, est) in profile.iter().enumerate() {
            let err = (est.estimate - exact[e]).abs();
            assert!(err < 4.0 * est.stderr.max(1e-3), "edge {e}: err {err}");
        }
    }

    #[test]
    fn influence_profile_covariance_path_matches_exact() {
        let r = Region::centered(1, 1).unwrap();
        let params = ModelParams::new(0.55, 2.0, Bc::Wired).unwrap();
        let ev = EventSpec::Crossing { a: 1, b: 1 };
        let hits = event_vector(&r, |c| ev.detect(c, &r).unwrap()).unwrap();
        let (_, exact) = enumerate_measure(&r, params).unwrap().influence_profile_vec(&hits).unwrap();
        let profile = influence_profile_mc(&r, params, &ev, quick(60_000), 22).unwrap();
        for (e, est) in profile.iter().enumerate() {
            let err = (est.estimate - exact[e]).abs();
            assert!(err < 4.0 * est.stderr.max(2e-3), "edge {e}: err {err}");
        }
    }

    #[test]
    fn threshold_curve_shape() {
        let curve = threshold_curve(1.0, 4, &[0.2, 0.5, 0.8], 2, quick(3000), 11).unwrap();
        assert_eq!(curve.points.len(), 3);
        for pair in curve.points.windows(2) {
            let joint = pair[0].estimate.stderr.hypot(pair[1].estimate.stderr);
            assert!(
                pair[1].estimate.estimate >= pair[0].estimate.estimate - 3.0 * joint,
                "not monotone: {pair:?}"
            );
        }
        assert!(threshold_curve(1.0, 4, &[0.5, 0.2], 2, quick(100), 1).is_err());
        assert!(threshold_curve(1.0, 4, &[], 2, quick(100), 1).is_err());
    }

    #[test]
    fn threshold_curve_extremes_at_n16() {
        let lo = threshold_curve(1.0, 16, &[0.01], 2, quick(2000), 3).unwrap();
        assert!(lo.points[0].estimate.estimate < 0.05);
        let hi = threshold_curve(1.0, 16, &[0.99], 2, quick(2000), 4).unwrap();
        assert!(hi.points[0].estimate.estimate > 0.95);
    }

    #[test]
    fn decay_fit_is_negative_and_log_linear() {
        let schedule = quick(20_000);
        let fit = fit_decay(1.0, 0.4, &[2, 4, 6, 8], schedule, 2).unwrap();
        assert!(fit.slope < 0.0);
        assert!(fit.slope.abs() > 3.0 * fit.slope_stderr, "slope {} se {}", fit.slope, fit.slope_stderr);
        assert!(fit.r_squared > 0.95, "r2 {}", fit.r_squared);
        assert!(fit.excluded.is_empty());
    }

    #[test]
    fn decay_connection_point_matches_enumeration() {
        let r = Region::centered(1, 1).unwrap();
        let params = ModelParams::new(0.25, 1.0, Bc::Free).unwrap();
        let ev = EventSpec::Connection { x: v(1, 0), n: 1 };
        let exact = enumerate_measure(&r, params)
            .unwrap()
            .event_probability(|c| ev.detect(c, &r).unwrap());
        let est = estimate_event(&r, params, quick(40_000), 6, Algorithm::Auto, |c| {
            ev.detect(c, &r).unwrap()
        })
        .unwrap();
        let err = (est.estimate - exact).abs();
        assert!(err < 3.0 * est.stderr.max(1e-3), "err {err}");
    }

    #[test]
    fn decay_error_paths() {
        assert!(fit_decay(1.0, 0.25, &[4, 6, 8], quick(100), 1).is_err());
        assert!(fit_decay(1.0, 0.25, &[4, 4, 6, 8], quick(100), 1).is_err());
        // p = 0 gives zero successes everywhere: every point excluded
        let err = fit_decay(1.0, 0.0, &[1, 2, 3, 4], quick(100), 1).unwrap_err();
        assert!(matches!(err, Error::Stat(_)), "{err}");
    }

    #[test]
    fn combination_trivial_and_error_cases() {
        let s = quick(40);
        let ones = check_combination(1.0, 1.0, 2, 2, 1, 2, 2, s, 1).unwrap();
        assert_eq!((ones.lhs.estimate, ones.rhs.estimate), (1.0, 1.0));
        let zeros = check_combination(1.0, 0.0, 2, 2, 1, 2, 2, s, 1).unwrap();
        assert_eq!((zeros.lhs.estimate, zeros.rhs.estimate), (0.0, 0.0));
        assert!(check_combination(1.0, 0.5, 2, 1, 1, 2, 2, s, 1).is_err());
    }

    #[test]
    fn combination_holds_at_moderate_size() {
        let check = check_combination(1.0, 0.6, 4, 4, 1, 3, 2, quick(4000), 8).unwrap();
        assert!(
            check.slack() >= -3.0 * check.combined_stderr(),
            "lhs {} rhs {}",
            check.lhs.estimate,
            check.rhs.estimate
        );
    }

    #[test]
    fn gluing_trivial_and_mc() {
        let ones = check_gluing(1.0, 1.0, 2, 2, 3, 2, quick(40), 1).unwrap();
        assert_eq!((ones.lhs.estimate, ones.rhs.estimate), (1.0, 1.0));
        assert!(check_gluing(1.0, 0.5, 2, 0, 3, 2, quick(40), 1).is_err());
        assert!(check_gluing(1.0, 0.5, 2, 1, 1, 2, quick(40), 1).is_err());
        let check = check_gluing(1.0, 0.7, 4, 2, 3, 2, quick(3000), 14).unwrap();
        assert!(
            check.slack() >= -3.0 * check.combined_stderr(),
            "lhs {} rhs {}",
            check.lhs.estimate,
            check.rhs.estimate
        );
    }

    #[test]
    fn hamming_lemma_single_edge_closed_form() {
        let r = Region::new(0, 1, 0, 0).unwrap();
        let params = ModelParams::new(0.2, 2.0, Bc::Free).unwrap();
        let ev = EventSpec::EdgeOpen { edge: Edge::horizontal(0, 0) };
        let check = check_hamming_lemma_exact(&r, params, &ev, 0.3).unwrap();
        let lhs = 0.5 / (0.5 + 2.0 * 0.5);
        let expectation: f64 = 0.2 / (0.2 + 2.0 * 0.8);
        let rhs = 1.0 - (-4.0 * 0.3 * expectation).exp();
        assert!((check.lhs.estimate - lhs).abs() < 1e-12);
        assert!((check.rhs.estimate - rhs).abs() < 1e-12);
        assert!(check.slack() >= 0.0);
    }

    #[test]
    fn hamming_lemma_degenerate_cases() {
        let r = Region::centered(1, 1).unwrap();
        let params = ModelParams::new(0.4, 1.5, Bc::Free).unwrap();
        let ev = EventSpec::Crossing { a: 1, b: 1 };
        // delta = 0 makes the bound vacuous but still valid
        let flat = check_hamming_lemma_exact(&r, params, &ev, 0.0).unwrap();
        assert_eq!(flat.rhs.estimate, 0.0);
        assert!(flat.slack() >= 0.0);
        // an event that always holds has an empty complement
        let top = EventSpec::Crossing { a: 0, b: 1 };
        let trivial = check_hamming_lemma_exact(&r, params, &top, 0.2).unwrap();
        assert!((trivial.lhs.estimate - 1.0).abs() < 1e-12);
        assert_eq!(trivial.rhs.estimate, 1.0);
        assert!(check_hamming_lemma_exact(&r, params, &ev, 0.7).is_err());
    }

    #[test]
    fn hamming_lemma_mc_agrees_with_exact() {
        let r = Region::centered(1, 1).unwrap();
        let params = ModelParams::new(0.45, 2.0, Bc::Wired).unwrap();
        let ev = EventSpec::Crossing { a: 1, b: 1 };
        let exact = check_hamming_lemma_exact(&r, params, &ev, 0.1).unwrap();
        let mc = check_hamming_lemma_mc(&r, params, &ev, 0.1, quick(30_000), 4).unwrap();
        assert!((mc.lhs.estimate - exact.lhs.estimate).abs() < 4.0 * mc.lhs.stderr.max(1e-3));
        assert!((mc.rhs.estimate - exact.rhs.estimate).abs() < 4.0 * mc.rhs.stderr.max(1e-3));
        assert!(mc.slack() >= -3.0 * mc.combined_stderr());
    }

    #[test]
    fn translation_difference_exact_on_largest_enumerable_family() {
        let r = Region::centered(2, 1).unwrap();
        for &(p, q, bc) in
            &[(0.5, 2.0, Bc::Wired), (0.7, 1.0, Bc::Free), (0.3, 4.0, Bc::Free)]
        {
            let params = ModelParams::new(p, q, bc).unwrap();
            let checks = check_translation_difference_exact(&r, params, 1, 1).unwrap();
            assert!(!checks.is_empty());
            for check in &checks {
                assert!(
                    check.slack() >= -1e-10,
                    "p={p} q={q} {bc} edge {:?}: lhs {} rhs {}",
                    check.edge,
                    check.lhs.estimate,
                    check.rhs.estimate
                );
            }
            let rhs = checks[0].rhs.estimate;
            assert!(rhs > 0.0 && rhs < 1.0);
        }
    }

    #[test]
    fn translation_difference_mc_q1() {
        let checks =
            check_translation_difference_mc(1.0, 0.5, 2, 4, 2, quick(20_000), 31).unwrap();
        assert!(!checks.is_empty());
        for check in &checks {
            assert!(
                check.slack() >= -3.0 * check.combined_stderr(),
                "edge {:?}: lhs {} rhs {} se {}",
                check.edge,
                check.lhs.estimate,
                check.rhs.estimate,
                check.combined_stderr()
            );
        }
    }

    #[test]
    fn diagnostic_exact_family() {
        let r = Region::centered(2, 1).unwrap();
        let params = ModelParams::new(0.5, 1.0, Bc::Free).unwrap();
        let report = sharp_threshold_diagnostic_exact(&r, params, 1, &[1, 2], 1.0).unwrap();
        assert_eq!(report.diagnostics.len(), 2);
        for d in &report.diagnostics {
            assert!(!d.degenerate);
            assert!(d.max_j > 0.0 && d.max_j <= 0.25 + 1e-12, "k={} max {}", d.k, d.max_j);
            assert!(d.f_value.is_finite());
        }
        assert!(report.f_sum.is_finite());
        // an always-true member has no influences at all
        let degenerate = sharp_threshold_diagnostic_exact(&r, params, 1, &[0], 1.0).unwrap();
        assert!(degenerate.diagnostics[0].degenerate);
        assert!(degenerate.f_sum.is_infinite());
        assert!(sharp_threshold_diagnostic_exact(&r, params, 1, &[], 1.0).is_err());
        assert!(sharp_threshold_diagnostic_exact(&r, params, 1, &[1], 0.0).is_err());
    }

    #[test]
    fn hamming_expectation_consistency() {
        // E_p[H] for the crossing equals the weighted flow count
        let r = Region::centered(1, 1).unwrap();
        let params = ModelParams::new(0.45, 2.0, Bc::Wired).unwrap();
        let ev = EventSpec::Crossing { a: 1, b: 1 };
        let dist = enumerate_measure(&r, params).unwrap();
        let direct = hamming_expectation(&dist, |c| hamming_to_complement(c, &ev, &r).unwrap());
        let check = check_hamming_lemma_exact(&r, params, &ev, 0.1).unwrap();
        let rhs = 1.0 - (-4.0 * 0.1 * direct).exp();
        assert!((check.rhs.estimate - rhs).abs() < 1e-12);
    }

    #[test]
    fn pc_estimate_centers_near_half_for_independent_percolation() {
        let schedule = Schedule::new(1550, 50, 1).unwrap();
        let est = estimate_pc(1.0, 8, 0.02, 2, DEFAULT_PC_BRACKET, schedule, 12).unwrap();
        assert!(est.hi - est.lo <= 0.02 + 1e-12);
        assert!(est.lo < 0.5 && 0.5 < est.hi, "interval [{}, {}]", est.lo, est.hi);
        assert!(est.evaluations.len() >= 7);
    }

    #[test]
    fn pc_estimate_error_paths() {
        let s = quick(100);
        assert!(estimate_pc(1.0, 4, 0.02, 2, DEFAULT_PC_BRACKET, s, 1).is_err());
        assert!(estimate_pc(1.0, 8, 0.001, 2, DEFAULT_PC_BRACKET, s, 1).is_err());
        // a bracket entirely above the transition cannot straddle the level
        let err = estimate_pc(1.0, 8, 0.02, 2, (0.8, 0.92), quick(500), 1).unwrap_err();
        assert!(matches!(err, Error::Stat(_)), "{err}");
    }

    #[test]
    fn window_estimate_small_case() {
        let w = estimate_window(1.0, 4, 2, quick(2500), 77).unwrap();
        assert!(w.width > 0.0, "width {}", w.width);
        assert!(w.p_low < w.p_high);
        assert!(w.width_stderr.is_finite() && w.width_stderr > 0.0);
        assert!(w.p_low > 0.2 && w.p_high < 0.8, "roots {} {}", w.p_low, w.p_high);
    }
}
