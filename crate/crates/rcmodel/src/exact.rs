//! Exhaustive oracle: exact random-cluster distributions on regions small
//! enough to enumerate every edge configuration.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Configuration, EdgeId, Region};
use crate::unionfind::DisjointSet;

/// Boundary condition: free counts clusters as-is, wired merges all boundary
/// vertices of the region into a single class before counting.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Bc {
    Free,
    Wired,
}

impl std::fmt::Display for Bc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Bc::Free => "free",
            Bc::Wired => "wired",
        })
    }
}

impl std::str::FromStr for Bc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Bc::Free),
            "wired" => Ok(Bc::Wired),
            other => Err(Error::Params(format!("unknown boundary condition {other:?}"))),
        }
    }
}

/// Edge probability p in [0,1], cluster weight q >= 1, and boundary condition.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ModelParams {
    pub p: f64,
    pub q: f64,
    pub bc: Bc,
}

impl ModelParams {
    pub fn new(p: f64, q: f64, bc: Bc) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::Params(format!("p = {p} outside [0,1]")));
        }
        if !q.is_finite() || q < 1.0 {
            return Err(Error::Params(format!("q = {q} below 1")));
        }
        Ok(ModelParams { p, q, bc })
    }
}

/// Largest edge count for which full enumeration is attempted.
pub const ENUMERATION_EDGE_LIMIT: usize = 24;

/// Number of open clusters of a configuration, counting isolated vertices;
/// under wired bc the boundary vertices are pre-merged into one class.
pub fn cluster_count(c: &Configuration, r: &Region, bc: Bc) -> usize {
    let mut ds = DisjointSet::new(r.n_vertices());
    merge_boundary(&mut ds, r, bc);
    for id in c.open_edges() {
        let (a, b) = r.edge_at(id).endpoints();
        ds.union(r.vertex_index(a).unwrap() as u32, r.vertex_index(b).unwrap() as u32);
    }
    ds.n_sets()
}

fn merge_boundary(ds: &mut DisjointSet, r: &Region, bc: Bc) {
    if bc == Bc::Wired {
        let boundary = r.boundary_vertices();
        let first = r.vertex_index(boundary[0]).unwrap() as u32;
        for p in &boundary[1..] {
            ds.union(first, r.vertex_index(*p).unwrap() as u32);
        }
    }
}

/// Cluster counts for every configuration of a region under one boundary
/// condition, reusable across different (p, q).
#[derive(Clone, Debug)]
pub struct ClusterTable {
    region: Region,
    bc: Bc,
    counts: Vec<u8>,
}

impl ClusterTable {
    pub fn build(r: &Region, bc: Bc) -> Result<ClusterTable> {
        let n_edges = r.n_edges();
        if n_edges > ENUMERATION_EDGE_LIMIT {
            return Err(Error::EnumerationBound { got: n_edges, limit: ENUMERATION_EDGE_LIMIT });
        }
        let n_vertices = r.n_vertices();
        let endpoints: Vec<(u32, u32)> = r
            .edges()
            .map(|e| {
                let (a, b) = e.endpoints();
                (r.vertex_index(a).unwrap() as u32, r.vertex_index(b).unwrap() as u32)
            })
            .collect();
        let n_configs = 1usize << n_edges;
        let chunk = 1usize << 14;
        let counts: Vec<u8> = (0..n_configs.div_ceil(chunk))
            .into_par_iter()
            .flat_map_iter(|ci| {
                let lo = ci * chunk;
                let hi = (lo + chunk).min(n_configs);
                let mut ds = DisjointSet::new(n_vertices);
                let endpoints = &endpoints;
                (lo..hi).map(move |mask| {
                    ds.reset(n_vertices);
                    merge_boundary(&mut ds, r, bc);
                    let mut m = mask;
                    while m != 0 {
                        let e = m.trailing_zeros() as usize;
                        m &= m - 1;
                        let (a, b) = endpoints[e];
                        ds.union(a, b);
                    }
                    ds.n_sets() as u8
                })
            })
            .collect();
        Ok(ClusterTable { region: *r, bc, counts })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn bc(&self) -> Bc {
        self.bc
    }

    pub fn counts(&self) -> &[u8] {
        &self.counts
    }
}

/// Exact finite-volume random-cluster distribution: probability of every
/// configuration, indexed by edge bitmask.
#[derive(Clone, Debug)]
pub struct ExactDistribution {
    region: Region,
    params: ModelParams,
    probs: Vec<f64>,
    log_z: f64,
}

fn log_pow(count: u32, log_base: f64) -> f64 {
    // avoids 0 * (-inf) when p is 0 or 1
    if count == 0 {
        0.0
    } else {
        count as f64 * log_base
    }
}

/// Exact distribution by full enumeration; errors above the edge limit.
pub fn enumerate_measure(r: &Region, params: ModelParams) -> Result<ExactDistribution> {
    let table = ClusterTable::build(r, params.bc)?;
    enumerate_with_table(&table, params)
}

/// Same as [`enumerate_measure`] but reusing a precomputed cluster table.
pub fn enumerate_with_table(table: &ClusterTable, params: ModelParams) -> Result<ExactDistribution> {
    if table.bc != params.bc {
        return Err(Error::Params("cluster table built for a different bc".into()));
    }
    let n_edges = table.region.n_edges() as u32;
    let (lp, lomp, lq) = (params.p.ln(), (1.0 - params.p).ln(), params.q.ln());
    let mut logw: Vec<f64> = table
        .counts
        .par_iter()
        .enumerate()
        .map(|(mask, &k)| {
            let o = mask.count_ones();
            log_pow(o, lp) + log_pow(n_edges - o, lomp) + log_pow(k as u32, lq)
        })
        .collect();
    let max = logw.par_iter().cloned().reduce(|| f64::NEG_INFINITY, f64::max);
    let sum: f64 = logw
        .par_iter_mut()
        .map(|w| {
            *w = (*w - max).exp();
            *w
        })
        .sum();
    logw.par_iter_mut().for_each(|w| *w /= sum);
    Ok(ExactDistribution {
        region: table.region,
        params,
        probs: logw,
        log_z: max + sum.ln(),
    })
}

impl ExactDistribution {
    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn n_configs(&self) -> usize {
        self.probs.len()
    }

    /// Probability of each configuration, indexed by edge bitmask.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, mask: usize) -> f64 {
        self.probs[mask]
    }

    /// Log of the partition function.
    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    /// Unnormalized weight p^o (1-p)^c q^k of one configuration.
    pub fn weight(&self, mask: usize) -> f64 {
        (self.probs[mask].ln() + self.log_z).exp()
    }

    pub fn event_probability(&self, ev: impl Fn(&Configuration) -> bool) -> f64 {
        let n = self.region.n_edges();
        let mut scratch = Configuration::all_closed(n);
        let mut acc = 0.0;
        for (mask, &p) in self.probs.iter().enumerate() {
            scratch.set_from_mask(mask as u64);
            if ev(&scratch) {
                acc += p;
            }
        }
        acc
    }

    pub fn expectation(&self, f: impl Fn(&Configuration) -> f64) -> f64 {
        let n = self.region.n_edges();
        let mut scratch = Configuration::all_closed(n);
        let mut acc = 0.0;
        for (mask, &p) in self.probs.iter().enumerate() {
            scratch.set_from_mask(mask as u64);
            acc += p * f(&scratch);
        }
        acc
    }

    /// Marginal open probability of every edge.
    pub fn edge_marginals(&self) -> Vec<f64> {
        let n = self.region.n_edges();
        let mut marg = vec![0.0; n];
        for (mask, &p) in self.probs.iter().enumerate() {
            let mut m = mask;
            while m != 0 {
                let e = m.trailing_zeros() as usize;
                m &= m - 1;
                marg[e] += p;
            }
        }
        marg
    }

    /// Influence J of one edge on an event: cov(1_A, omega_e).
    pub fn influence(&self, ev: impl Fn(&Configuration) -> bool, e: EdgeId) -> f64 {
        let (p_a, j) = self.influence_profile(ev);
        let _ = p_a;
        j[e.0]
    }

    /// Event probability together with the influence of every edge.
    pub fn influence_profile(&self, ev: impl Fn(&Configuration) -> bool) -> (f64, Vec<f64>) {
        let n = self.region.n_edges();
        let mut scratch = Configuration::all_closed(n);
        let mut p_a = 0.0;
        let mut p_aw = vec![0.0; n];
        let mut p_w = vec![0.0; n];
        for (mask, &p) in self.probs.iter().enumerate() {
            scratch.set_from_mask(mask as u64);
            let hit = ev(&scratch);
            if hit {
                p_a += p;
            }
            let mut m = mask;
            while m != 0 {
                let e = m.trailing_zeros() as usize;
                m &= m - 1;
                p_w[e] += p;
                if hit {
                    p_aw[e] += p;
                }
            }
        }
        let j = (0..n).map(|e| p_aw[e] - p_a * p_w[e]).collect();
        (p_a, j)
    }

    /// Total variation distance; both distributions must live on the same
    /// number of edges.
    pub fn tv_distance(&self, other: &ExactDistribution) -> Result<f64> {
        if self.probs.len() != other.probs.len() {
            return Err(Error::Params(format!(
                "distributions on different configuration spaces ({} vs {} configs)",
                self.probs.len(),
                other.probs.len()
            )));
        }
        Ok(tv_distance_vec(&self.probs, &other.probs))
    }

    /// Expectation of a nonnegative integer statistic, e.g. a Hamming
    /// distance evaluator.
    pub fn expectation_u32(&self, f: impl Fn(&Configuration) -> u32) -> f64 {
        self.expectation(|c| f(c) as f64)
    }
}

/// Half L1 distance between two probability vectors of equal length.
pub fn tv_distance_vec(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Event indicator for every configuration of a region, reusable across
/// parameters and distributions on the same region.
pub fn event_vector(r: &Region, ev: impl Fn(&Configuration) -> bool + Sync) -> Result<Vec<bool>> {
    let n_edges = r.n_edges();
    if n_edges > ENUMERATION_EDGE_LIMIT {
        return Err(Error::EnumerationBound { got: n_edges, limit: ENUMERATION_EDGE_LIMIT });
    }
    let n_configs = 1usize << n_edges;
    let chunk = 1usize << 14;
    Ok((0..n_configs.div_ceil(chunk))
        .into_par_iter()
        .flat_map_iter(|ci| {
            let lo = ci * chunk;
            let hi = (lo + chunk).min(n_configs);
            let mut scratch = Configuration::all_closed(n_edges);
            let ev = &ev;
            (lo..hi).map(move |mask| {
                scratch.set_from_mask(mask as u64);
                ev(&scratch)
            })
        })
        .collect())
}

impl ExactDistribution {
    /// Event probability from a precomputed indicator vector.
    pub fn event_probability_vec(&self, hits: &[bool]) -> Result<f64> {
        if hits.len() != self.probs.len() {
            return Err(Error::Params(format!(
                "indicator vector covers {} configurations, distribution has {}",
                hits.len(),
                self.probs.len()
            )));
        }
        Ok(self
            .probs
            .iter()
            .zip(hits)
            .filter_map(|(&p, &h)| h.then_some(p))
            .sum())
    }

    /// Event probability and per-edge influences from a precomputed
    /// indicator vector.
    pub fn influence_profile_vec(&self, hits: &[bool]) -> Result<(f64, Vec<f64>)> {
        if hits.len() != self.probs.len() {
            return Err(Error::Params(format!(
                "indicator vector covers {} configurations, distribution has {}",
                hits.len(),
                self.probs.len()
            )));
        }
        let n = self.region.n_edges();
        let mut p_a = 0.0;
        let mut p_aw = vec![0.0; n];
        let mut p_w = vec![0.0; n];
        for (mask, (&p, &hit)) in self.probs.iter().zip(hits).enumerate() {
            if hit {
                p_a += p;
            }
            let mut m = mask;
            while m != 0 {
                let e = m.trailing_zeros() as usize;
                m &= m - 1;
                p_w[e] += p;
                if hit {
                    p_aw[e] += p;
                }
            }
        }
        let j = (0..n).map(|e| p_aw[e] - p_a * p_w[e]).collect();
        Ok((p_a, j))
    }
}

/// Both sides of the exact derivative identity
/// d/dp P[A] = (1/(p(1-p))) * sum_e J_e(A):
/// left by central finite difference with step h, right by influence sums.
pub fn russo_check(
    r: &Region,
    params: ModelParams,
    ev: impl Fn(&Configuration) -> bool,
    h: f64,
) -> Result<(f64, f64)> {
    if h <= 0.0 || params.p - h <= 0.0 || params.p + h >= 1.0 {
        return Err(Error::Params(format!("step h = {h} leaves (0,1) around p = {}", params.p)));
    }
    let table = ClusterTable::build(r, params.bc)?;
    let lo = enumerate_with_table(&table, ModelParams { p: params.p - h, ..params })?;
    let hi = enumerate_with_table(&table, ModelParams { p: params.p + h, ..params })?;
    let lhs = (hi.event_probability(&ev) - lo.event_probability(&ev)) / (2.0 * h);
    let mid = enumerate_with_table(&table, params)?;
    let (_, j) = mid.influence_profile(&ev);
    let rhs = j.iter().sum::<f64>() / (params.p * (1.0 - params.p));
    Ok((lhs, rhs))
}

/// Expected Hamming distance to the complement of an increasing event:
/// the evaluator must return the minimal number of open edges whose closure
/// makes the event fail (0 where it already fails).
pub fn hamming_expectation(d: &ExactDistribution, h: impl Fn(&Configuration) -> u32) -> f64 {
    d.expectation_u32(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_region, v, Edge};

    fn single_edge_region() -> Region {
        Region::new(0, 1, 0, 0).unwrap()
    }

    #[test]
    fn cluster_count_examples() {
        let r = Region::centered(1, 1).unwrap();
        let closed = Configuration::all_closed(12);
        assert_eq!(cluster_count(&closed, &r, Bc::Free), 9);
        assert_eq!(cluster_count(&closed, &r, Bc::Wired), 2);
        let open = Configuration::all_open(12);
        assert_eq!(cluster_count(&open, &r, Bc::Free), 1);
        assert_eq!(cluster_count(&open, &r, Bc::Wired), 1);
    }

    #[test]
    fn single_edge_free_marginal() {
        // two vertices, one edge: P(open) = p / (p + q(1-p))
        let r = single_edge_region();
        for &(p, q) in &[(0.5, 2.0), (0.3, 1.0), (0.7, 4.0), (0.2, 1.5), (0.9, 3.3)] {
            let d = enumerate_measure(&r, ModelParams::new(p, q, Bc::Free).unwrap()).unwrap();
            let expect = p / (p + q * (1.0 - p));
            assert!((d.prob(1) - expect).abs() < 1e-14, "p={p} q={q}");
            assert!((d.prob(0) - (1.0 - expect)).abs() < 1e-14);
        }
        let d = enumerate_measure(&r, ModelParams::new(0.5, 2.0, Bc::Free).unwrap()).unwrap();
        assert!((d.prob(1) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn single_edge_wired_marginal_is_p() {
        // both endpoints are boundary, so wiring makes the edge irrelevant to
        // the cluster count and its marginal is exactly p
        let r = single_edge_region();
        for &(p, q) in &[(0.5, 2.0), (0.25, 4.0), (0.8, 1.7)] {
            let d = enumerate_measure(&r, ModelParams::new(p, q, Bc::Wired).unwrap()).unwrap();
            assert!((d.prob(1) - p).abs() < 1e-14, "p={p} q={q}");
        }
    }

    #[test]
    fn q_one_is_product_measure() {
        let r = Region::new(0, 1, 0, 1).unwrap(); // 4 edges
        let p = 0.37;
        for bc in [Bc::Free, Bc::Wired] {
            let d = enumerate_measure(&r, ModelParams::new(p, 1.0, bc).unwrap()).unwrap();
            for mask in 0usize..16 {
                let o = mask.count_ones() as f64;
                let expect = p.powf(o) * (1.0 - p).powf(4.0 - o);
                assert!((d.prob(mask) - expect).abs() < 1e-13, "mask={mask} bc={bc}");
            }
        }
    }

    #[test]
    fn normalization_and_weight_consistency() {
        for (r, p, q, bc) in [
            (Region::centered(1, 1).unwrap(), 0.3, 2.0, Bc::Wired),
            (Region::centered(1, 1).unwrap(), 0.7, 4.0, Bc::Free),
            (Region::new(0, 2, 0, 1).unwrap(), 0.5, 1.5, Bc::Wired),
            (Region::new(0, 1, 0, 0).unwrap(), 0.0, 2.0, Bc::Free),
            (Region::new(0, 1, 0, 0).unwrap(), 1.0, 2.0, Bc::Free),
        ] {
            let d = enumerate_measure(&r, ModelParams::new(p, q, bc).unwrap()).unwrap();
            let total: f64 = d.probs().iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "total={total}");
            assert!(d.probs().iter().all(|&x| x >= 0.0));
        }
        // degenerate p: all mass on the empty / full configuration
        let r = Region::centered(1, 1).unwrap();
        let d = enumerate_measure(&r, ModelParams::new(0.0, 2.0, Bc::Free).unwrap()).unwrap();
        assert!((d.prob(0) - 1.0).abs() < 1e-15);
        let d = enumerate_measure(&r, ModelParams::new(1.0, 2.0, Bc::Free).unwrap()).unwrap();
        assert!((d.prob((1 << 12) - 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn enumeration_bound_enforced() {
        let r = Region::centered(2, 2).unwrap(); // 40 edges
        let err = enumerate_measure(&r, ModelParams::new(0.5, 2.0, Bc::Free).unwrap());
        match err {
            Err(Error::EnumerationBound { got, limit }) => {
                assert_eq!(got, 40);
                assert_eq!(limit, ENUMERATION_EDGE_LIMIT);
            }
            other => panic!("expected enumeration bound error, got {other:?}"),
        }
    }

    #[test]
    fn influence_single_edge() {
        let r = single_edge_region();
        let d = enumerate_measure(&r, ModelParams::new(0.5, 2.0, Bc::Free).unwrap()).unwrap();
        let j = d.influence(|c| c.get(EdgeId(0)), EdgeId(0));
        assert!((j - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn russo_single_edge() {
        let r = single_edge_region();
        let params = ModelParams::new(0.5, 2.0, Bc::Free).unwrap();
        let (lhs, rhs) = russo_check(&r, params, |c| c.get(EdgeId(0)), 1e-4).unwrap();
        // exact derivative of p/(p + q(1-p)) is q/(p + q(1-p))^2 = 8/9
        assert!((rhs - 8.0 / 9.0).abs() < 1e-12, "rhs={rhs}");
        assert!((lhs - rhs).abs() <= 1e-6 * rhs.abs(), "lhs={lhs} rhs={rhs}");

        // q = 1: marginal is exactly p, derivative exactly 1
        let params = ModelParams::new(0.5, 1.0, Bc::Free).unwrap();
        let (lhs, rhs) = russo_check(&r, params, |c| c.get(EdgeId(0)), 1e-4).unwrap();
        assert!((lhs - 1.0).abs() < 1e-9);
        assert!((rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn russo_rejects_bad_step() {
        let r = single_edge_region();
        let params = ModelParams::new(0.99999, 2.0, Bc::Free).unwrap();
        assert!(russo_check(&r, params, |c| c.get(EdgeId(0)), 1e-4).is_err());
    }

    #[test]
    fn tv_examples() {
        let r = single_edge_region();
        let d1 = enumerate_measure(&r, ModelParams::new(1.0 / 3.0, 1.0, Bc::Free).unwrap()).unwrap();
        let d2 = enumerate_measure(&r, ModelParams::new(0.5, 1.0, Bc::Free).unwrap()).unwrap();
        let tv = d1.tv_distance(&d2).unwrap();
        assert!((tv - 1.0 / 6.0).abs() < 1e-14);
        assert_eq!(d1.tv_distance(&d1).unwrap(), 0.0);

        let r2 = Region::new(0, 1, 0, 1).unwrap();
        let d3 = enumerate_measure(&r2, ModelParams::new(0.5, 1.0, Bc::Free).unwrap()).unwrap();
        assert!(d1.tv_distance(&d3).is_err());
    }

    #[test]
    fn hamming_single_edge_is_marginal() {
        let r = single_edge_region();
        let d = enumerate_measure(&r, ModelParams::new(0.4, 3.0, Bc::Free).unwrap()).unwrap();
        let h = hamming_expectation(&d, |c| u32::from(c.get(EdgeId(0))));
        let marginal = d.edge_marginals()[0];
        assert!((h - marginal).abs() < 1e-14);
    }

    #[test]
    fn measure_respects_region_symmetry() {
        // reflections map the centered box onto itself, so edge marginals of
        // mirror-image edges coincide
        let r = Region::centered(1, 1).unwrap();
        for bc in [Bc::Free, Bc::Wired] {
            let d = enumerate_measure(&r, ModelParams::new(0.43, 2.5, bc).unwrap()).unwrap();
            let marg = d.edge_marginals();
            for t in [crate::lattice::SymmetryTransform::ReflectX,
                      crate::lattice::SymmetryTransform::ReflectY,
                      crate::lattice::SymmetryTransform::RotateQuarter] {
                for (i, e) in r.edges().enumerate() {
                    let te = t.apply_edge(e);
                    let ti = r.edge_index(te).unwrap();
                    assert!(
                        (marg[i] - marg[ti.0]).abs() < 1e-12,
                        "edge {e:?} vs {te:?} under {t:?} ({bc})"
                    );
                }
            }
        }
    }

    #[test]
    fn wired_dominates_free_on_single_edge_connectivity() {
        // increasing event: the two horizontal neighbors of the center joined
        let r = Region::centered(1, 1).unwrap();
        let ev = |c: &Configuration| {
            let left = r.edge_index(Edge::horizontal(-1, 0)).unwrap();
            let right = r.edge_index(Edge::horizontal(0, 0)).unwrap();
            c.get(left) && c.get(right)
        };
        for &(p, q) in &[(0.4, 2.0), (0.6, 4.0)] {
            let free = enumerate_measure(&r, ModelParams::new(p, q, Bc::Free).unwrap()).unwrap();
            let wired = enumerate_measure(&r, ModelParams::new(p, q, Bc::Wired).unwrap()).unwrap();
            assert!(wired.event_probability(ev) >= free.event_probability(ev) - 1e-12);
        }
    }

    #[test]
    fn indicator_vector_paths_agree_with_closure_paths() {
        let r = Region::centered(1, 1).unwrap();
        let d = enumerate_measure(&r, ModelParams::new(0.55, 2.0, Bc::Wired).unwrap()).unwrap();
        let ev = |c: &Configuration| {
            c.get(r.edge_index(Edge::horizontal(-1, 0)).unwrap())
                && c.get(r.edge_index(Edge::horizontal(0, 0)).unwrap())
        };
        let hits = event_vector(&r, ev).unwrap();
        assert!((d.event_probability_vec(&hits).unwrap() - d.event_probability(ev)).abs() < 1e-15);
        let (pa1, j1) = d.influence_profile(ev);
        let (pa2, j2) = d.influence_profile_vec(&hits).unwrap();
        assert_eq!(pa1, pa2);
        assert_eq!(j1, j2);
        assert!(d.event_probability_vec(&hits[..8]).is_err());
    }

    #[test]
    fn build_region_offsets_do_not_change_measure() {
        let a = Region::centered(1, 1).unwrap();
        let b = build_region(1, 1, v(5, -2)).unwrap();
        let pa = ModelParams::new(0.45, 2.0, Bc::Wired).unwrap();
        let da = enumerate_measure(&a, pa).unwrap();
        let db = enumerate_measure(&b, pa).unwrap();
        assert!(da.tv_distance(&db).unwrap() < 1e-14);
    }
}
