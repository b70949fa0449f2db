//! Planar duality: dual edge parameter, self-dual point, dual configurations
//! on the inner dual graph, and the complementary strip-crossing pair.

use crate::error::{Error, Result};
use crate::events::EventSpec;
use crate::exact::{enumerate_measure, tv_distance_vec, Bc, ModelParams};
use crate::lattice::{dual_graph, Configuration, DualGraph, Edge, EdgeId, Region};

/// The dual edge weight p* solving p p* / ((1-p)(1-p*)) = q, i.e.
/// p* = q(1-p) / (q(1-p) + p); a decreasing involution on (0,1).
pub fn dual_parameter(p: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || p == 0.0 || p == 1.0 {
        return Err(Error::Params(format!("dual parameter undefined at p = {p}")));
    }
    if !q.is_finite() || q < 1.0 {
        return Err(Error::Params(format!("q = {q} below 1")));
    }
    Ok(q * (1.0 - p) / (q * (1.0 - p) + p))
}

/// The fixed point sqrt(q)/(1+sqrt(q)) of the duality map.
pub fn self_dual_point(q: f64) -> f64 {
    assert!(q >= 1.0, "q = {q} below 1");
    let s = q.sqrt();
    s / (1.0 + s)
}

/// Configuration on the inner dual graph of r: each dual edge open exactly
/// when the primal edge it crosses is closed. Primal edges along the
/// boundary have no inner dual partner and are dropped.
pub fn dual_configuration(c: &Configuration, r: &Region) -> Result<(DualGraph, Configuration)> {
    if c.n_edges() != r.n_edges() {
        return Err(Error::Geometry(format!(
            "configuration has {} edges but region {r} has {}",
            c.n_edges(),
            r.n_edges()
        )));
    }
    let dg = dual_graph(r)?;
    let mut out = Configuration::all_closed(dg.n_dual_edges());
    for d in 0..dg.n_dual_edges() {
        if !c.get(dg.dual_to_primal(EdgeId(d))) {
            out.set(EdgeId(d), true);
        }
    }
    Ok((dg, out))
}

/// Exact check of the finite-volume duality pairing: total variation
/// distance between the law of the inner-dual configuration under the wired
/// measure at (p,q) on r and the free measure on the dual graph at (p*,q).
pub fn wired_free_duality_tv(r: &Region, p: f64, q: f64) -> Result<f64> {
    let primal = enumerate_measure(r, ModelParams::new(p, q, Bc::Wired)?)?;
    let dg = dual_graph(r)?;
    let faces = *dg.faces();
    let n_dual = faces.n_edges();
    let flip_bit: Vec<(usize, u64)> = (0..n_dual)
        .map(|d| (dg.dual_to_primal(EdgeId(d)).0, 1u64 << d))
        .collect();
    let mut pushed = vec![0.0f64; 1 << n_dual];
    for (mask, &pr) in primal.probs().iter().enumerate() {
        let mut dual_mask = 0u64;
        for &(pe, bit) in &flip_bit {
            if mask & (1 << pe) == 0 {
                dual_mask |= bit;
            }
        }
        pushed[dual_mask as usize] += pr;
    }
    let p_star = dual_parameter(p, q)?;
    let dual = enumerate_measure(&faces, ModelParams::new(p_star, q, Bc::Free)?)?;
    Ok(tv_distance_vec(&pushed, dual.probs()))
}

/// The two sides of the complementary crossing pair at scale n: the
/// left-right crossing of the strip [0,2n+1] x [0,2n] and the bottom-top
/// crossing of its dual box.
pub fn dual_crossing_event(n: i32) -> (EventSpec, EventSpec) {
    (EventSpec::Strip { n }, EventSpec::StripDual { n })
}

/// Dual configuration of the strip [0,2n+1] x [0,2n] on the face box
/// [0,2n] x [-1,2n]: dual edges crossing a primal strip edge take its
/// flipped state; the horizontal dual edges of the two outer face rows cross
/// nothing and stay closed.
pub fn dual_strip_configuration(
    c: &Configuration,
    r: &Region,
    n: i32,
) -> Result<(Region, Configuration)> {
    if n < 0 {
        return Err(Error::Geometry(format!("strip index must be >= 0, got {n}")));
    }
    let strip = Region::new(0, 2 * n + 1, 0, 2 * n)?;
    if !r.contains_region(&strip) || c.n_edges() != r.n_edges() {
        return Err(Error::Geometry(format!("strip {strip} not carried by region {r}")));
    }
    let faces = Region::new(0, 2 * n, -1, 2 * n)?;
    let mut out = Configuration::all_closed(faces.n_edges());
    for e in faces.edges() {
        let (fx, fy) = (e.anchor.x, e.anchor.y);
        let primal = match e.orientation {
            // face (fx,fy) to face (fx,fy+1): crosses a horizontal strip edge
            crate::lattice::Orientation::Vertical => Some(Edge::horizontal(fx, fy + 1)),
            // face (fx,fy) to face (fx+1,fy): crosses a vertical strip edge,
            // which exists only for the inner face rows
            crate::lattice::Orientation::Horizontal => {
                (0..=2 * n - 1).contains(&fy).then(|| Edge::vertical(fx + 1, fy))
            }
        };
        if let Some(pe) = primal {
            let id = r.edge_index(pe).expect("strip edge inside region");
            if !c.get(id) {
                out.set(faces.edge_index(e).unwrap(), true);
            }
        }
    }
    Ok((faces, out))
}

/// Evaluates the complementary pair on one primal configuration: the strip
/// crossing on c and the dual crossing on the derived dual configuration.
pub fn dual_crossing_pair(c: &Configuration, r: &Region, n: i32) -> Result<(bool, bool)> {
    let (primal_ev, dual_ev) = dual_crossing_event(n);
    let e = primal_ev.detect(c, r)?;
    let (faces, dual_c) = dual_strip_configuration(c, r, n)?;
    let e_star = dual_ev.detect(&dual_c, &faces)?;
    Ok((e, e_star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::v;

    #[test]
    fn dual_parameter_examples() {
        assert!((dual_parameter(0.5, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((dual_parameter(2.0 / 3.0, 4.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((dual_parameter(0.8, 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(dual_parameter(0.0, 2.0).is_err());
        assert!(dual_parameter(1.0, 2.0).is_err());
        assert!(dual_parameter(0.5, 0.5).is_err());
    }

    #[test]
    fn dual_parameter_is_decreasing_involution() {
        for q in [1.0, 1.5, 2.0, 4.0] {
            let mut prev = f64::INFINITY;
            for i in 1..=100 {
                let p = i as f64 / 101.0;
                let star = dual_parameter(p, q).unwrap();
                assert!(star < prev, "not decreasing at p={p} q={q}");
                prev = star;
                let back = dual_parameter(star, q).unwrap();
                assert!((back - p).abs() < 1e-12, "involution broken at p={p} q={q}");
            }
        }
    }

    #[test]
    fn self_dual_point_values() {
        assert!((self_dual_point(1.0) - 0.5).abs() < 1e-15);
        assert!((self_dual_point(4.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((self_dual_point(2.0) - 0.585786).abs() < 1e-6);
        for q in [1.0, 1.5, 2.0, 3.0, 4.0, 10.0] {
            let sd = self_dual_point(q);
            assert!((dual_parameter(sd, q).unwrap() - sd).abs() < 1e-12, "q={q}");
        }
    }

    #[test]
    fn dual_configuration_flips_internal_edges() {
        let r = Region::centered(1, 1).unwrap();
        let open = Configuration::all_open(12);
        let (dg, dual) = dual_configuration(&open, &r).unwrap();
        assert_eq!(dg.n_dual_edges(), 4);
        assert_eq!(dual.open_count(), 0);
        let closed = Configuration::all_closed(12);
        let (_, dual) = dual_configuration(&closed, &r).unwrap();
        assert_eq!(dual.open_count(), 4);
    }

    #[test]
    fn double_dual_recovers_interior_states() {
        // on a 5x5 box the dual of the dual lives on the 3x3 interior; every
        // doubly-dual edge is the (1,1) translate of a primal edge and must
        // carry the primal state again after two flips
        let r = Region::centered(2, 2).unwrap();
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut c = Configuration::all_closed(r.n_edges());
        for i in 0..r.n_edges() {
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            c.set(EdgeId(i), rng_state >> 63 == 1);
        }
        let (dg1, d1) = dual_configuration(&c, &r).unwrap();
        let (dg2, d2) = dual_configuration(&d1, dg1.faces()).unwrap();
        for dd in 0..dg2.n_dual_edges() {
            let dd_edge = dg2.faces().edge_at(EdgeId(dd));
            let primal_edge = Edge {
                anchor: v(dd_edge.anchor.x + 1, dd_edge.anchor.y + 1),
                orientation: dd_edge.orientation,
            };
            let primal_id = r.edge_index(primal_edge).unwrap();
            assert_eq!(d2.get(EdgeId(dd)), c.get(primal_id), "edge {primal_edge:?}");
        }
    }

    #[test]
    fn wired_dual_law_is_free_law_at_dual_parameter() {
        let boxes = [Region::new(0, 2, 0, 1).unwrap(), Region::new(0, 2, 0, 2).unwrap()];
        for r in &boxes {
            for p in [0.3, 0.5, 0.7] {
                for q in [1.0, 2.0, 4.0] {
                    let tv = wired_free_duality_tv(r, p, q).unwrap();
                    assert!(tv < 1e-10, "box {r} p={p} q={q}: tv={tv:e}");
                }
            }
        }
    }

    #[test]
    fn crossing_pair_on_extreme_configurations() {
        let r = Region::new(0, 3, 0, 2).unwrap();
        let (e, estar) = dual_crossing_pair(&Configuration::all_open(17), &r, 1).unwrap();
        assert!(e && !estar);
        let (e, estar) = dual_crossing_pair(&Configuration::all_closed(17), &r, 1).unwrap();
        assert!(!e && estar);
    }

    #[test]
    fn exactly_one_of_the_crossing_pair_holds() {
        let r = Region::new(0, 3, 0, 2).unwrap();
        let mut c = Configuration::all_closed(17);
        for mask in 0u64..(1 << 17) {
            c.set_from_mask(mask);
            let (e, estar) = dual_crossing_pair(&c, &r, 1).unwrap();
            assert!(e ^ estar, "mask {mask}: E={e} E*={estar}");
        }
    }
}
