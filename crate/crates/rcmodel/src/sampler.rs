//! Seeded Monte Carlo chains for regions beyond enumeration: single-edge
//! heat-bath dynamics valid for all real q >= 1, a cluster update for
//! integer q, and batch-means estimators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::exact::{Bc, ModelParams, ENUMERATION_EDGE_LIMIT};
use crate::lattice::{Configuration, EdgeId, Region, Vertex};
use crate::unionfind::DisjointSet;

/// Name of the generator backing every chain, recorded in output files.
pub const GENERATOR_NAME: &str = "chacha12";

/// Sweep counts for a chain: total sweeps, discarded burn-in, and thinning.
/// Configurations are emitted after sweeps burn_in+1, burn_in+1+thin, ...
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Schedule {
    pub n_sweeps: u64,
    pub burn_in: u64,
    pub thin: u64,
}

impl Schedule {
    pub fn new(n_sweeps: u64, burn_in: u64, thin: u64) -> Result<Schedule> {
        if thin == 0 {
            return Err(Error::Schedule("thinning interval must be at least 1".into()));
        }
        if n_sweeps <= burn_in {
            return Err(Error::Schedule(format!(
                "n_sweeps = {n_sweeps} leaves no samples after burn_in = {burn_in}"
            )));
        }
        Ok(Schedule { n_sweeps, burn_in, thin })
    }

    /// Conservative defaults: burn-in of 100 sweeps per lattice column of
    /// the simulation box, thinning 10, sized for the requested samples.
    pub fn default_for(r: &Region, n_samples: u64) -> Result<Schedule> {
        if n_samples == 0 {
            return Err(Error::Schedule("need at least one sample".into()));
        }
        let burn_in = 100 * r.width() as u64;
        let thin = 10;
        Schedule::new(burn_in + 1 + thin * (n_samples - 1), burn_in, thin)
    }

    pub fn n_samples(&self) -> u64 {
        (self.n_sweeps - self.burn_in - 1) / self.thin + 1
    }

    fn emits_after(&self, sweep: u64) -> bool {
        sweep > self.burn_in && (sweep - self.burn_in - 1) % self.thin == 0
    }
}

/// Which Markov kernel advances the chain.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Algorithm {
    /// Single-edge resampling in canonical edge order; valid for all q >= 1.
    HeatBath,
    /// Cluster relabeling and bond refresh; integer q only.
    SwendsenWang,
    /// Heat-bath, except cluster updates for integer q >= 2.
    Auto,
}

impl Algorithm {
    fn resolve(self, q: f64) -> Algorithm {
        match self {
            Algorithm::Auto => {
                if q >= 2.0 && q.fract() == 0.0 {
                    Algorithm::SwendsenWang
                } else {
                    Algorithm::HeatBath
                }
            }
            other => other,
        }
    }

    pub fn kind_name(self, q: f64) -> &'static str {
        match self.resolve(q) {
            Algorithm::HeatBath => "heatbath",
            Algorithm::SwendsenWang => "sw",
            Algorithm::Auto => unreachable!(),
        }
    }
}

// adjacency with optional wired-boundary shortcut, reused across queries
struct NeighborMap {
    offsets: Vec<u32>,
    // (incident edge, vertex across it), grouped per vertex
    arcs: Vec<(u32, u32)>,
    wired: bool,
    is_boundary: Vec<bool>,
    boundary: Vec<u32>,
    visit: Vec<u32>,
    stamp: u32,
    queue: Vec<u32>,
}

impl NeighborMap {
    fn new(r: &Region, bc: Bc) -> NeighborMap {
        let nv = r.n_vertices();
        let mut degree = vec![0u32; nv];
        let ends: Vec<(u32, u32)> = r
            .edges()
            .map(|e| {
                let (a, b) = e.endpoints();
                (r.vertex_index(a).unwrap() as u32, r.vertex_index(b).unwrap() as u32)
            })
            .collect();
        for &(a, b) in &ends {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = vec![0u32; nv + 1];
        for i in 0..nv {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut arcs = vec![(0u32, 0u32); offsets[nv] as usize];
        let mut cursor: Vec<u32> = offsets[..nv].to_vec();
        for (e, &(a, b)) in ends.iter().enumerate() {
            arcs[cursor[a as usize] as usize] = (e as u32, b);
            cursor[a as usize] += 1;
            arcs[cursor[b as usize] as usize] = (e as u32, a);
            cursor[b as usize] += 1;
        }
        let mut is_boundary = vec![false; nv];
        let mut boundary = Vec::new();
        for p in r.boundary_vertices() {
            let i = r.vertex_index(p).unwrap();
            is_boundary[i] = true;
            boundary.push(i as u32);
        }
        NeighborMap {
            offsets,
            arcs,
            wired: bc == Bc::Wired,
            is_boundary,
            boundary,
            visit: vec![0; nv],
            stamp: 0,
            queue: Vec::new(),
        }
    }

    /// Whether a and b are joined by open edges of c, skipping one edge
    /// (pass u32::MAX to skip none); under wired bc the boundary acts as a
    /// single vertex.
    fn connected_without(&mut self, c: &Configuration, a: u32, b: u32, skip: u32) -> bool {
        if a == b {
            return true;
        }
        if self.wired && self.is_boundary[a as usize] && self.is_boundary[b as usize] {
            return true;
        }
        self.stamp += 1;
        let stamp = self.stamp;
        self.queue.clear();
        self.queue.push(a);
        self.visit[a as usize] = stamp;
        let mut boundary_expanded = false;
        let mut head = 0;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            if self.wired && !boundary_expanded && self.is_boundary[x as usize] {
                boundary_expanded = true;
                for i in 0..self.boundary.len() {
                    let y = self.boundary[i];
                    if self.visit[y as usize] != stamp {
                        if y == b {
                            return true;
                        }
                        self.visit[y as usize] = stamp;
                        self.queue.push(y);
                    }
                }
            }
            for k in self.offsets[x as usize]..self.offsets[x as usize + 1] {
                let (e, y) = self.arcs[k as usize];
                if e == skip || !c.get(EdgeId(e as usize)) || self.visit[y as usize] == stamp {
                    continue;
                }
                if y == b {
                    return true;
                }
                self.visit[y as usize] = stamp;
                self.queue.push(y);
            }
        }
        false
    }
}

/// Whether u and v are joined by open edges (wired bc merges the boundary
/// into one class).
pub fn connected(c: &Configuration, u: Vertex, w: Vertex, r: &Region, bc: Bc) -> Result<bool> {
    let iu = r
        .vertex_index(u)
        .ok_or_else(|| Error::Geometry(format!("vertex {u} outside region {r}")))?;
    let iw = r
        .vertex_index(w)
        .ok_or_else(|| Error::Geometry(format!("vertex {w} outside region {r}")))?;
    if c.n_edges() != r.n_edges() {
        return Err(Error::Geometry(format!(
            "configuration has {} edges but region {r} has {}",
            c.n_edges(),
            r.n_edges()
        )));
    }
    let mut map = NeighborMap::new(r, bc);
    Ok(map.connected_without(c, iu as u32, iw as u32, u32::MAX))
}

/// Probability that the heat-bath update opens edge e given the state of
/// every other edge: p when the endpoints are already joined without e,
/// p / (p + q(1-p)) otherwise.
pub fn conditional_open_probability(
    c: &Configuration,
    e: EdgeId,
    r: &Region,
    params: ModelParams,
) -> f64 {
    if params.q == 1.0 {
        return params.p;
    }
    let edge = r.edge_at(e);
    let (a, b) = edge.endpoints();
    let mut map = NeighborMap::new(r, params.bc);
    let joined = map.connected_without(
        c,
        r.vertex_index(a).unwrap() as u32,
        r.vertex_index(b).unwrap() as u32,
        e.0 as u32,
    );
    open_probability(params, joined)
}

fn open_probability(params: ModelParams, joined: bool) -> f64 {
    if joined {
        params.p
    } else {
        params.p / (params.p + params.q * (1.0 - params.p))
    }
}

/// A seeded Markov chain over configurations of one region.
pub struct ChainState {
    region: Region,
    params: ModelParams,
    config: Configuration,
    rng: ChaCha12Rng,
    sweep: u64,
    map: NeighborMap,
    endpoints: Vec<(u32, u32)>,
    cluster: DisjointSet,
    spins: Vec<u64>,
}

impl ChainState {
    /// Fresh chain from the all-closed configuration.
    pub fn new(r: &Region, params: ModelParams, seed: u64) -> ChainState {
        Self::from_configuration(r, params, Configuration::all_closed(r.n_edges()), seed)
    }

    pub fn from_configuration(
        r: &Region,
        params: ModelParams,
        config: Configuration,
        seed: u64,
    ) -> ChainState {
        assert_eq!(config.n_edges(), r.n_edges(), "configuration size mismatch");
        let endpoints = r
            .edges()
            .map(|e| {
                let (a, b) = e.endpoints();
                (r.vertex_index(a).unwrap() as u32, r.vertex_index(b).unwrap() as u32)
            })
            .collect();
        ChainState {
            region: *r,
            params,
            config,
            rng: ChaCha12Rng::seed_from_u64(seed),
            sweep: 0,
            map: NeighborMap::new(r, params.bc),
            endpoints,
            cluster: DisjointSet::new(r.n_vertices()),
            spins: vec![0; r.n_vertices()],
        }
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn configuration(&self) -> &Configuration {
        &self.config
    }

    pub fn sweep_count(&self) -> u64 {
        self.sweep
    }

    /// One heat-bath pass over all edges in canonical order. Exactly one
    /// uniform draw per edge regardless of outcome, so chains with the same
    /// seed stay coupled through shared randomness.
    pub fn heat_bath_sweep(&mut self) {
        let q_is_one = self.params.q == 1.0;
        for e in 0..self.endpoints.len() {
            let u: f64 = self.rng.random();
            let pi = if q_is_one {
                self.params.p
            } else {
                let (a, b) = self.endpoints[e];
                let joined = self.map.connected_without(&self.config, a, b, e as u32);
                open_probability(self.params, joined)
            };
            self.config.set(EdgeId(e), u < pi);
        }
        self.sweep += 1;
    }

    /// One cluster update: spins are drawn per open cluster (the wired
    /// boundary acts as one cluster), then edges between equal spins are
    /// refreshed with probability p and all others closed.
    pub fn cluster_sweep(&mut self) -> Result<()> {
        let q = self.params.q;
        if q.fract() != 0.0 {
            return Err(Error::Params(format!(
                "cluster updates need integer q, got {q}"
            )));
        }
        let q = q as u64;
        let nv = self.region.n_vertices();
        self.cluster.reset(nv);
        if self.params.bc == Bc::Wired {
            let first = self.map.boundary[0];
            for i in 1..self.map.boundary.len() {
                self.cluster.union(first, self.map.boundary[i]);
            }
        }
        for (e, &(a, b)) in self.endpoints.iter().enumerate() {
            if self.config.get(EdgeId(e)) {
                self.cluster.union(a, b);
            }
        }
        // one spin per cluster, drawn at the first vertex that visits it
        const UNSET: u64 = u64::MAX;
        self.spins.iter_mut().for_each(|s| *s = UNSET);
        for i in 0..nv {
            let root = self.cluster.find(i as u32) as usize;
            if self.spins[root] == UNSET {
                self.spins[root] = self.rng.random_range(0..q);
            }
        }
        for (e, &(a, b)) in self.endpoints.iter().enumerate() {
            let same =
                self.spins[self.cluster.find(a) as usize] == self.spins[self.cluster.find(b) as usize];
            let open = same && self.rng.random::<f64>() < self.params.p;
            self.config.set(EdgeId(e), open);
        }
        self.sweep += 1;
        Ok(())
    }

    pub fn sweep_with(&mut self, algorithm: Algorithm) -> Result<()> {
        match algorithm.resolve(self.params.q) {
            Algorithm::HeatBath => {
                self.heat_bath_sweep();
                Ok(())
            }
            Algorithm::SwendsenWang => self.cluster_sweep(),
            Algorithm::Auto => unreachable!(),
        }
    }
}

/// Runs a seeded chain and hands every emitted configuration to the sink.
pub fn run_chain(
    r: &Region,
    params: ModelParams,
    schedule: Schedule,
    seed: u64,
    algorithm: Algorithm,
    mut sink: impl FnMut(&Configuration),
) -> Result<()> {
    let mut chain = ChainState::new(r, params, seed);
    for s in 1..=schedule.n_sweeps {
        chain.sweep_with(algorithm)?;
        if schedule.emits_after(s) {
            sink(&chain.config);
        }
    }
    Ok(())
}

/// Number of batches behind every batch-means standard error.
pub const N_BATCHES: u64 = 20;

/// A Monte Carlo estimate with its batch-means standard error and the
/// schedule that produced it.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct EstimateWithError {
    pub estimate: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub burn_in: u64,
    pub thin: u64,
}

/// Mean of a per-configuration statistic over the emitted samples, with a
/// standard error from 20 batch means.
pub fn estimate_statistic(
    r: &Region,
    params: ModelParams,
    schedule: Schedule,
    seed: u64,
    algorithm: Algorithm,
    stat: impl Fn(&Configuration) -> f64,
) -> Result<EstimateWithError> {
    let m = schedule.n_samples();
    if m < N_BATCHES {
        return Err(Error::Schedule(format!(
            "schedule yields {m} samples; batch-means errors need at least {N_BATCHES}"
        )));
    }
    let base = m / N_BATCHES;
    let extra = m % N_BATCHES;
    let mut batch_sums = [0.0f64; N_BATCHES as usize];
    let mut batch_sizes = [0u64; N_BATCHES as usize];
    for (b, size) in batch_sizes.iter_mut().enumerate() {
        *size = base + u64::from((b as u64) < extra);
    }
    let mut index = 0u64;
    let mut batch = 0usize;
    let mut filled = 0u64;
    run_chain(r, params, schedule, seed, algorithm, |c| {
        batch_sums[batch] += stat(c);
        filled += 1;
        if filled == batch_sizes[batch] && batch + 1 < N_BATCHES as usize {
            batch += 1;
            filled = 0;
        }
        index += 1;
    })?;
    debug_assert_eq!(index, m);
    let means: Vec<f64> = (0..N_BATCHES as usize)
        .map(|b| batch_sums[b] / batch_sizes[b] as f64)
        .collect();
    let grand: f64 =
        batch_sums.iter().sum::<f64>() / m as f64;
    let mean_of_means = means.iter().sum::<f64>() / N_BATCHES as f64;
    let var = means.iter().map(|x| (x - mean_of_means).powi(2)).sum::<f64>()
        / (N_BATCHES as f64 - 1.0);
    Ok(EstimateWithError {
        estimate: grand,
        stderr: (var / N_BATCHES as f64).sqrt(),
        n_samples: m,
        seed,
        burn_in: schedule.burn_in,
        thin: schedule.thin,
    })
}

/// Frequency of an event over the emitted samples.
pub fn estimate_event(
    r: &Region,
    params: ModelParams,
    schedule: Schedule,
    seed: u64,
    algorithm: Algorithm,
    ev: impl Fn(&Configuration) -> bool,
) -> Result<EstimateWithError> {
    estimate_statistic(r, params, schedule, seed, algorithm, |c| f64::from(ev(c)))
}

/// Advances a full distribution over configurations through one heat-bath
/// sweep, exactly. The vector is indexed by edge bitmask and must cover
/// every configuration of r.
pub fn heat_bath_sweep_law(law: &mut [f64], r: &Region, params: ModelParams) -> Result<()> {
    let n = r.n_edges();
    if n > ENUMERATION_EDGE_LIMIT {
        return Err(Error::EnumerationBound { got: n, limit: ENUMERATION_EDGE_LIMIT });
    }
    if law.len() != 1 << n {
        return Err(Error::Params(format!(
            "law covers {} configurations, region {r} has {}",
            law.len(),
            1usize << n
        )));
    }
    let mut map = NeighborMap::new(r, params.bc);
    let endpoints: Vec<(u32, u32)> = r
        .edges()
        .map(|e| {
            let (a, b) = e.endpoints();
            (r.vertex_index(a).unwrap() as u32, r.vertex_index(b).unwrap() as u32)
        })
        .collect();
    let mut c = Configuration::all_closed(n);
    for e in 0..n {
        let bit = 1usize << e;
        let (a, b) = endpoints[e];
        for s0 in 0..law.len() {
            if s0 & bit != 0 {
                continue;
            }
            let s1 = s0 | bit;
            let mass = law[s0] + law[s1];
            if mass == 0.0 {
                continue;
            }
            let pi = if params.q == 1.0 {
                params.p
            } else {
                c.set_from_mask(s0 as u64);
                open_probability(params, map.connected_without(&c, a, b, e as u32))
            };
            law[s1] = mass * pi;
            law[s0] = mass * (1.0 - pi);
        }
    }
    Ok(())
}
