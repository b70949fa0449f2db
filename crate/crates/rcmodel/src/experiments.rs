//! Runs a validated config: dispatches to the oracle, the chains, and the
//! analysis layer, and persists one self-describing CSV per experiment.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::analysis::{
    check_combination, check_gluing, check_hamming_lemma_mc, check_translation_difference_mc,
    derive_seed, estimate_pc, fit_decay, influence_profile_mc, threshold_curve,
    DEFAULT_PC_BRACKET,
};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::duality::{self_dual_point, wired_free_duality_tv};
use crate::error::{Error, Result};
use crate::events::{count_disjoint_crossings, EventSpec};
use crate::exact::{enumerate_measure, Bc, ModelParams, ENUMERATION_EDGE_LIMIT};
use crate::lattice::{Configuration, Edge, Orientation, Region};
use crate::records::{write_records, ResultRecord};
use crate::sampler::{estimate_event, Algorithm, EstimateWithError, GENERATOR_NAME};

/// Edge count above which the exhaustive mincut comparison refuses to run.
pub const MENGER_EDGE_LIMIT: usize = 17;

/// Runs the experiment and writes its CSV into `out_dir`. Returns the file
/// path and the records, sorted the same way they were written.
pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<(PathBuf, Vec<ResultRecord>)> {
    let mut records = match config.kind {
        ExperimentKind::ExactCheck => run_exact_check(config)?,
        ExperimentKind::DualityCheck => run_duality_check(config)?,
        ExperimentKind::SelfdualCrossing => run_selfdual_crossing(config)?,
        ExperimentKind::Threshold => run_threshold(config)?,
        ExperimentKind::Decay => run_decay(config)?,
        ExperimentKind::MengerCheck => run_menger_check(config)?,
        ExperimentKind::InfluenceProfile => run_influence_profile(config)?,
        ExperimentKind::InequalitySuite => run_inequality_suite(config)?,
        ExperimentKind::EstimatePc => run_estimate_pc(config)?,
    };
    records.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    let path = out_dir.join(&config.out);
    write_records(&path, &records)?;
    Ok((path, records))
}

fn base_record(config: &ExperimentConfig, metric: &str, value: f64) -> ResultRecord {
    ResultRecord::bare(config.kind.name(), config.seed, metric, value)
}

fn stamp_estimate(r: &mut ResultRecord, est: &EstimateWithError, q: f64) {
    r.kind = Algorithm::Auto.kind_name(q).to_string();
    r.generator = GENERATOR_NAME.to_string();
    r.seed = est.seed;
    r.stderr = Some(est.stderr);
    r.nsamples = Some(est.n_samples);
    r.burnin = Some(est.burn_in);
    r.thin = Some(est.thin);
}

fn schedule_of(config: &ExperimentConfig) -> crate::sampler::Schedule {
    config.schedule.expect("validated config carries a schedule")
}

fn edge_metric(prefix: &str, e: Edge) -> String {
    let o = match e.orientation {
        Orientation::Horizontal => 'h',
        Orientation::Vertical => 'v',
    };
    format!("{prefix}[{o}:{}:{}]", e.anchor.x, e.anchor.y)
}

fn run_exact_check(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let region = Region::new(0, config.a, 0, config.b)?;
    let mut records = Vec::new();
    for &q in &config.q {
        for &p in &config.p {
            for &bc in &config.bc {
                let start = Instant::now();
                let dist = enumerate_measure(&region, ModelParams::new(p, q, bc)?)?;
                let marginals = dist.edge_marginals();
                let mean_open = marginals.iter().sum::<f64>() / marginals.len() as f64;
                let elapsed = start.elapsed().as_secs_f64();
                for (metric, value) in [("log_Z", dist.log_z()), ("P(open)", mean_open)] {
                    let mut r = base_record(config, metric, value);
                    r.p = Some(p);
                    r.q = Some(q);
                    r.bc = Some(bc);
                    r.a = Some(config.a);
                    r.b = Some(config.b);
                    r.wallclock_s = elapsed;
                    records.push(r);
                }
            }
        }
    }
    Ok(records)
}

fn run_duality_check(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let region = Region::new(0, config.a, 0, config.b)?;
    let mut records = Vec::new();
    for &q in &config.q {
        for &p in &config.p {
            let start = Instant::now();
            let tv = wired_free_duality_tv(&region, p, q)?;
            let mut r = base_record(config, "TV(wired-free dual)", tv);
            r.p = Some(p);
            r.q = Some(q);
            r.a = Some(config.a);
            r.b = Some(config.b);
            r.wallclock_s = start.elapsed().as_secs_f64();
            records.push(r);
        }
    }
    Ok(records)
}

fn run_selfdual_crossing(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let schedule = schedule_of(config);
    let ev = EventSpec::Strip { n: config.n };
    let strip = ev.support()?;
    let results: Result<Vec<ResultRecord>> = config
        .q
        .par_iter()
        .enumerate()
        .map(|(i, &q)| {
            let start = Instant::now();
            // q = 1 needs no widening: the strip crossing is exactly
            // balanced there and bc cannot matter
            let (p, bc, sim) = if q == 1.0 {
                (0.5, Bc::Free, strip.clone())
            } else {
                (self_dual_point(q), Bc::Wired, strip.margin_box(config.margin)?)
            };
            let params = ModelParams::new(p, q, bc)?;
            let est = estimate_event(
                &sim,
                params,
                schedule,
                derive_seed(config.seed, i as u64),
                Algorithm::Auto,
                |c| ev.detect(c, &sim).unwrap(),
            )?;
            let mut r = base_record(config, "P(E)", est.estimate);
            r.p = Some(p);
            r.q = Some(q);
            r.bc = Some(bc);
            r.n = Some(config.n);
            r.margin = Some(config.margin);
            r.sweeps = Some(schedule.n_sweeps);
            stamp_estimate(&mut r, &est, q);
            r.wallclock_s = start.elapsed().as_secs_f64();
            Ok(r)
        })
        .collect();
    results
}

fn run_threshold(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let schedule = schedule_of(config);
    let mut records = Vec::new();
    for (qi, &q) in config.q.iter().enumerate() {
        let start = Instant::now();
        let curve = threshold_curve(
            q,
            config.n,
            &config.p,
            config.margin,
            schedule,
            derive_seed(config.seed, qi as u64),
        )?;
        let elapsed = start.elapsed().as_secs_f64();
        for point in &curve.points {
            let mut r = base_record(config, "P(Ch)", point.estimate.estimate);
            r.p = Some(point.p);
            r.q = Some(q);
            r.bc = Some(Bc::Wired);
            r.n = Some(config.n);
            r.a = Some(2 * config.n);
            r.b = Some(config.n);
            r.margin = Some(config.margin);
            r.sweeps = Some(schedule.n_sweeps);
            stamp_estimate(&mut r, &point.estimate, q);
            r.wallclock_s = elapsed;
            records.push(r);
        }
    }
    Ok(records)
}

fn run_decay(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let schedule = schedule_of(config);
    let mut records = Vec::new();
    for (qi, &q) in config.q.iter().enumerate() {
        for (pi, &p) in config.p.iter().enumerate() {
            let start = Instant::now();
            let salt = (qi * config.p.len() + pi) as u64;
            let fit = fit_decay(q, p, &config.distances, schedule, derive_seed(config.seed, salt))?;
            let elapsed = start.elapsed().as_secs_f64();
            let stamp_common = |r: &mut ResultRecord| {
                r.p = Some(p);
                r.q = Some(q);
                r.bc = Some(Bc::Free);
                r.wallclock_s = elapsed;
            };
            for point in &fit.points {
                let mut r = base_record(config, "P(connection)", point.probability.estimate);
                stamp_common(&mut r);
                r.a = Some(point.distance);
                r.b = Some(point.distance);
                r.sweeps = Some(schedule.n_sweeps);
                stamp_estimate(&mut r, &point.probability, q);
                records.push(r);
                let mut s = base_record(config, "successes", point.successes as f64);
                stamp_common(&mut s);
                s.a = Some(point.distance);
                s.b = Some(point.distance);
                s.kind = Algorithm::Auto.kind_name(q).to_string();
                s.generator = GENERATOR_NAME.to_string();
                records.push(s);
            }
            for &(d, successes) in &fit.excluded {
                let mut s = base_record(config, "successes", successes as f64);
                stamp_common(&mut s);
                s.a = Some(d);
                s.b = Some(d);
                s.kind = Algorithm::Auto.kind_name(q).to_string();
                s.generator = GENERATOR_NAME.to_string();
                records.push(s);
            }
            let fit_rows = [
                ("slope", fit.slope, Some(fit.slope_stderr)),
                ("intercept", fit.intercept, None),
                ("r_squared", fit.r_squared, None),
            ];
            for (metric, value, stderr) in fit_rows {
                let mut r = base_record(config, metric, value);
                stamp_common(&mut r);
                r.kind = Algorithm::Auto.kind_name(q).to_string();
                r.generator = GENERATOR_NAME.to_string();
                r.stderr = stderr;
                records.push(r);
            }
        }
    }
    Ok(records)
}

/// Smallest number of open edges whose closure destroys every crossing,
/// found by trying all closure sets in order of size.
pub fn brute_force_min_closure(c: &Configuration, r: &Region, a: i32, b: i32) -> Result<u32> {
    let ev = EventSpec::Crossing { a, b };
    if !ev.detect(c, r)? {
        return Ok(0);
    }
    let open: Vec<usize> = c.open_edges().map(|e| e.0).collect();
    for k in 1..=open.len() {
        let mut found = false;
        crate::events::for_each_combination(open.len(), k, |pick| {
            if found {
                return;
            }
            let mut trial = c.clone();
            for &i in pick {
                trial.set(crate::lattice::EdgeId(open[i]), false);
            }
            if !ev.detect(&trial, r).unwrap() {
                found = true;
            }
        });
        if found {
            return Ok(k as u32);
        }
    }
    unreachable!("closing every open edge removes all open paths");
}

fn run_menger_check(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let (a, b) = (config.a, config.b);
    let region = Region::centered(a, b)?;
    let n_edges = region.n_edges();
    if n_edges > MENGER_EDGE_LIMIT {
        return Err(Error::ResourceBound(format!(
            "exhaustive mincut comparison covers {n_edges} edges; limit {MENGER_EDGE_LIMIT}"
        )));
    }
    let start = Instant::now();
    let mismatches: u64 = (0u64..1 << n_edges)
        .into_par_iter()
        .map(|mask| {
            let c = Configuration::from_mask(mask, n_edges);
            let flow = count_disjoint_crossings(&c, &region, a, b).unwrap();
            let cut = brute_force_min_closure(&c, &region, a, b).unwrap();
            u64::from(flow != cut)
        })
        .sum();
    let elapsed = start.elapsed().as_secs_f64();
    let rows = [
        ("mismatches", mismatches as f64),
        ("configs_checked", (1u64 << n_edges) as f64),
    ];
    Ok(rows
        .into_iter()
        .map(|(metric, value)| {
            let mut r = base_record(config, metric, value);
            r.a = Some(a);
            r.b = Some(b);
            r.wallclock_s = elapsed;
            r
        })
        .collect())
}

fn run_influence_profile(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let (a, b) = (config.a, config.b);
    let support = Region::centered(a, b)?;
    let ev = EventSpec::Crossing { a, b };
    let schedule = schedule_of(config);
    let exact = support.n_edges() <= ENUMERATION_EDGE_LIMIT;
    let mut records = Vec::new();
    for &q in &config.q {
        for &p in &config.p {
            for &bc in &config.bc {
                let start = Instant::now();
                let params = ModelParams::new(p, q, bc)?;
                let profile: Vec<(Edge, f64, Option<f64>)> = if exact {
                    let dist = enumerate_measure(&support, params)?;
                    let (_, js) = dist.influence_profile(|c| ev.detect(c, &support).unwrap());
                    support.edges().zip(js).map(|(e, j)| (e, j, None)).collect()
                } else {
                    let sim = support.margin_box(config.margin)?;
                    let salt = records.len() as u64;
                    let estimates = influence_profile_mc(
                        &sim,
                        params,
                        &ev,
                        schedule,
                        derive_seed(config.seed, salt),
                    )?;
                    sim.edges()
                        .zip(estimates)
                        .filter(|(e, _)| {
                            let (u, w) = e.endpoints();
                            support.contains(u) && support.contains(w)
                        })
                        .map(|(e, est)| (e, est.estimate, Some(est.stderr)))
                        .collect()
                };
                let elapsed = start.elapsed().as_secs_f64();
                let sum_j: f64 = profile.iter().map(|(_, j, _)| j).sum();
                let max_j = profile.iter().map(|(_, j, _)| *j).fold(0.0f64, f64::max);
                let mut push = |metric: String, value: f64, stderr: Option<f64>| {
                    let mut r = base_record(config, &metric, value);
                    r.p = Some(p);
                    r.q = Some(q);
                    r.bc = Some(bc);
                    r.a = Some(a);
                    r.b = Some(b);
                    if !exact {
                        r.kind = Algorithm::Auto.kind_name(q).to_string();
                        r.generator = GENERATOR_NAME.to_string();
                        r.margin = Some(config.margin);
                        r.sweeps = Some(schedule.n_sweeps);
                        r.burnin = Some(schedule.burn_in);
                        r.thin = Some(schedule.thin);
                        r.nsamples = Some(schedule.n_samples());
                    }
                    r.stderr = stderr;
                    r.wallclock_s = elapsed;
                    records.push(r);
                };
                for (e, j, se) in &profile {
                    push(edge_metric("J", *e), *j, *se);
                }
                push("sum_J".to_string(), sum_j, None);
                push("max_J".to_string(), max_j, None);
            }
        }
    }
    Ok(records)
}

fn run_inequality_suite(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let schedule = schedule_of(config);
    let n = config.n;
    let mut records = Vec::new();
    for (qi, &q) in config.q.iter().enumerate() {
        for (pi, &p) in config.p.iter().enumerate() {
            let salt = 10 * (qi * config.p.len() + pi) as u64;
            let seed = |offset: u64| derive_seed(config.seed, salt + offset);
            let start = Instant::now();
            let combination =
                check_combination(q, p, n, n, 1, 3, config.margin, schedule, seed(0))?;
            let gluing = check_gluing(q, p, n, 2, 3, config.margin, schedule, seed(1))?;
            let square = EventSpec::Crossing { a: n, b: n };
            let sim = square.support()?.margin_box(config.margin)?;
            let hamming = check_hamming_lemma_mc(
                &sim,
                ModelParams::new(p, q, Bc::Wired)?,
                &square,
                config.delta,
                schedule,
                seed(2),
            )?;
            let translation =
                check_translation_difference_mc(q, p, n, 2 * n, config.margin, schedule, seed(3))?;
            let elapsed = start.elapsed().as_secs_f64();
            let worst = translation
                .iter()
                .min_by(|x, y| x.slack().total_cmp(&y.slack()))
                .expect("translation comparison covers at least one edge");
            let checks = [
                ("combination", combination.lhs, combination.rhs),
                ("gluing", gluing.lhs, gluing.rhs),
                ("hamming", hamming.lhs, hamming.rhs),
                ("translation", worst.rhs, worst.lhs),
            ];
            for (name, big, small) in checks {
                let rows = [
                    (format!("lhs({name})"), big.estimate, big.stderr),
                    (format!("rhs({name})"), small.estimate, small.stderr),
                    (
                        format!("slack({name})"),
                        big.estimate - small.estimate,
                        big.stderr.hypot(small.stderr),
                    ),
                ];
                for (metric, value, stderr) in rows {
                    let mut r = base_record(config, &metric, value);
                    r.p = Some(p);
                    r.q = Some(q);
                    r.bc = Some(Bc::Wired);
                    r.n = Some(n);
                    r.margin = Some(config.margin);
                    r.kind = Algorithm::Auto.kind_name(q).to_string();
                    r.generator = GENERATOR_NAME.to_string();
                    r.sweeps = Some(schedule.n_sweeps);
                    r.burnin = Some(schedule.burn_in);
                    r.thin = Some(schedule.thin);
                    r.nsamples = Some(schedule.n_samples());
                    r.stderr = Some(stderr);
                    r.wallclock_s = elapsed;
                    records.push(r);
                }
            }
        }
    }
    Ok(records)
}

fn run_estimate_pc(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let schedule = schedule_of(config);
    let results: Result<Vec<Vec<ResultRecord>>> = config
        .q
        .par_iter()
        .enumerate()
        .map(|(qi, &q)| {
            let start = Instant::now();
            let est = estimate_pc(
                q,
                config.n,
                config.tolerance,
                config.margin,
                DEFAULT_PC_BRACKET,
                schedule,
                derive_seed(config.seed, qi as u64),
            )?;
            let elapsed = start.elapsed().as_secs_f64();
            let rows = [
                ("pc_lo", est.lo),
                ("pc_hi", est.hi),
                ("evaluations", est.evaluations.len() as f64),
            ];
            Ok(rows
                .into_iter()
                .map(|(metric, value)| {
                    let mut r = base_record(config, metric, value);
                    r.q = Some(q);
                    r.bc = Some(Bc::Wired);
                    r.n = Some(config.n);
                    r.a = Some(config.n);
                    r.b = Some(config.n);
                    r.margin = Some(config.margin);
                    r.kind = Algorithm::Auto.kind_name(q).to_string();
                    r.generator = GENERATOR_NAME.to_string();
                    r.sweeps = Some(schedule.n_sweeps);
                    r.burnin = Some(schedule.burn_in);
                    r.thin = Some(schedule.thin);
                    r.nsamples = Some(schedule.n_samples());
                    r.wallclock_s = elapsed;
                    r
                })
                .collect())
        })
        .collect();
    Ok(results?.into_iter().flatten().collect())
}
