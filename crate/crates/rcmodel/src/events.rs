//! Crossing, connection, and cluster-shape events on boxes, the maximal
//! number of edge-disjoint open crossings, and Hamming distances to event
//! complements.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::lattice::{v, Configuration, Edge, EdgeId, Orientation, Region, Vertex};
use crate::unionfind::DisjointSet;

/// Open-edge count above which the generic subset search for Hamming
/// distances refuses to run.
pub const GENERIC_HAMMING_LIMIT: usize = 20;

/// An increasing event on configurations, evaluated with open edges strictly
/// inside its own support box (wiring affects the measure, never detection).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EventSpec {
    /// Open left-right crossing of the box [-a,a] x [-b,b]; always true at
    /// a = 0 (a crossing of zero length).
    Crossing { a: i32, b: i32 },
    /// Open path from the full left side of [-n,n]^2 to the part of the right
    /// side with alpha <= y <= beta.
    TargetedCrossing { n: i32, alpha: i32, beta: i32 },
    /// Some open cluster of [-n,n]^2 touches all four side segments
    /// {-n} x [-n,-alpha], {-n} x [alpha,n], {n} x [-n,-alpha], {n} x [alpha,n].
    SegmentTouching { n: i32, alpha: i32 },
    /// The origin is joined to x by an open path inside [-n,n]^2.
    Connection { x: Vertex, n: i32 },
    /// Open left-right crossing of the strip [0,2n+1] x [0,2n].
    Strip { n: i32 },
    /// Open bottom-top crossing of the box [0,2n] x [-1,2n] (the companion
    /// shape the strip crossing is compared against under duality).
    StripDual { n: i32 },
    /// A single named edge is open.
    EdgeOpen { edge: Edge },
    /// Some vertex of [-n,n]^2 is joined to the boundary of [-m,m]^2 by an
    /// open path inside [-m,m]^2.
    BoxToBoundary { n: i32, m: i32 },
}

impl EventSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Event(msg));
        match *self {
            EventSpec::Crossing { a, b } => {
                if a < 0 || b < 0 {
                    return bad(format!("crossing box needs a, b >= 0, got a={a} b={b}"));
                }
            }
            EventSpec::TargetedCrossing { n, alpha, beta } => {
                if n < 0 || alpha < -n || alpha > beta || beta > n {
                    return bad(format!(
                        "targeted crossing needs -n <= alpha <= beta <= n, got n={n} alpha={alpha} beta={beta}"
                    ));
                }
            }
            EventSpec::SegmentTouching { n, alpha } => {
                if n < 0 || alpha < 0 || alpha > n {
                    return bad(format!(
                        "segment touching needs 0 <= alpha <= n, got n={n} alpha={alpha}"
                    ));
                }
            }
            EventSpec::Connection { x, n } => {
                if n < 0 || x.x.abs().max(x.y.abs()) != n {
                    return bad(format!(
                        "connection target must sit on the boundary of its box: max(|{}|,|{}|) != {n}",
                        x.x, x.y
                    ));
                }
            }
            EventSpec::Strip { n } | EventSpec::StripDual { n } => {
                if n < 0 {
                    return bad(format!("strip index must be >= 0, got {n}"));
                }
            }
            EventSpec::EdgeOpen { .. } => {}
            EventSpec::BoxToBoundary { n, m } => {
                if n < 0 || m < n {
                    return bad(format!("box-to-boundary needs 0 <= n <= m, got n={n} m={m}"));
                }
            }
        }
        Ok(())
    }

    /// Smallest box whose edges determine the event.
    pub fn support(&self) -> Result<Region> {
        self.validate()?;
        match *self {
            EventSpec::Crossing { a, b } => Region::centered(a, b),
            EventSpec::TargetedCrossing { n, .. }
            | EventSpec::SegmentTouching { n, .. }
            | EventSpec::Connection { n, .. } => Region::centered(n, n),
            EventSpec::Strip { n } => Region::new(0, 2 * n + 1, 0, 2 * n),
            EventSpec::StripDual { n } => Region::new(0, 2 * n, -1, 2 * n),
            EventSpec::EdgeOpen { edge } => {
                let (p, q) = edge.endpoints();
                Region::new(p.x.min(q.x), p.x.max(q.x), p.y.min(q.y), p.y.max(q.y))
            }
            EventSpec::BoxToBoundary { m, .. } => Region::centered(m, m),
        }
    }

    /// Whether the configuration on r realizes the event.
    pub fn detect(&self, c: &Configuration, r: &Region) -> Result<bool> {
        let s = self.support()?;
        check_embedding(c, r, &s)?;
        if let EventSpec::EdgeOpen { edge } = *self {
            let id = r
                .edge_index(edge)
                .ok_or_else(|| Error::Event(format!("edge {edge:?} not in region {r}")))?;
            return Ok(c.get(id));
        }
        let mut ds = open_components(c, r, &s);
        Ok(match *self {
            EventSpec::Crossing { a, b } => {
                a == 0 || sides_joined(&mut ds, column(&s, -a, -b, b), column(&s, a, -b, b))
            }
            EventSpec::TargetedCrossing { n, alpha, beta } => {
                n == 0 || sides_joined(&mut ds, column(&s, -n, -n, n), column(&s, n, alpha, beta))
            }
            EventSpec::SegmentTouching { n, alpha } => {
                let segments = [
                    column(&s, -n, -n, -alpha),
                    column(&s, -n, alpha, n),
                    column(&s, n, -n, -alpha),
                    column(&s, n, alpha, n),
                ];
                let mut touched = vec![0u8; s.n_vertices()];
                for (bit, seg) in segments.iter().enumerate() {
                    for &i in seg {
                        touched[ds.find(i) as usize] |= 1 << bit;
                    }
                }
                touched.iter().any(|&t| t == 0b1111)
            }
            EventSpec::Connection { x, .. } => {
                let o = s.vertex_index(v(0, 0)).unwrap() as u32;
                let t = s.vertex_index(x).unwrap() as u32;
                ds.same(o, t)
            }
            EventSpec::Strip { n } => {
                sides_joined(&mut ds, column(&s, 0, 0, 2 * n), column(&s, 2 * n + 1, 0, 2 * n))
            }
            EventSpec::StripDual { n } => {
                let bottom: Vec<u32> = (0..=2 * n)
                    .map(|x| s.vertex_index(v(x, -1)).unwrap() as u32)
                    .collect();
                let top: Vec<u32> = (0..=2 * n)
                    .map(|x| s.vertex_index(v(x, 2 * n)).unwrap() as u32)
                    .collect();
                sides_joined(&mut ds, bottom, top)
            }
            EventSpec::EdgeOpen { .. } => unreachable!(),
            EventSpec::BoxToBoundary { n, m } => {
                if n == m {
                    true
                } else {
                    let inner = Region::centered(n, n).unwrap();
                    let boundary: HashSet<u32> = s
                        .boundary_vertices()
                        .into_iter()
                        .map(|p| ds.find(s.vertex_index(p).unwrap() as u32))
                        .collect();
                    let inner_vertices: Vec<Vertex> = inner.vertices().collect();
                    inner_vertices
                        .into_iter()
                        .any(|p| boundary.contains(&ds.find(s.vertex_index(p).unwrap() as u32)))
                }
            }
        })
    }
}

fn check_embedding(c: &Configuration, r: &Region, s: &Region) -> Result<()> {
    if c.n_edges() != r.n_edges() {
        return Err(Error::Event(format!(
            "configuration has {} edges but region {r} has {}",
            c.n_edges(),
            r.n_edges()
        )));
    }
    if !r.contains_region(s) {
        return Err(Error::Event(format!("event support {s} not contained in region {r}")));
    }
    Ok(())
}

/// Union-find over the support's vertices joined across its open edges.
fn open_components(c: &Configuration, r: &Region, s: &Region) -> DisjointSet {
    let mut ds = DisjointSet::new(s.n_vertices());
    for e in s.edges() {
        let id = r.edge_index(e).expect("support contained in region");
        if c.get(id) {
            let (a, b) = e.endpoints();
            ds.union(s.vertex_index(a).unwrap() as u32, s.vertex_index(b).unwrap() as u32);
        }
    }
    ds
}

fn column(s: &Region, x: i32, y_lo: i32, y_hi: i32) -> Vec<u32> {
    (y_lo..=y_hi).map(|y| s.vertex_index(v(x, y)).unwrap() as u32).collect()
}

fn sides_joined(ds: &mut DisjointSet, from: Vec<u32>, to: Vec<u32>) -> bool {
    let roots: HashSet<u32> = from.into_iter().map(|i| ds.find(i)).collect();
    to.into_iter().any(|i| roots.contains(&ds.find(i)))
}

/// Maximum number of edge-disjoint open left-right crossings of
/// [-a,a] x [-b,b], as a unit-capacity max-flow.
pub fn count_disjoint_crossings(c: &Configuration, r: &Region, a: i32, b: i32) -> Result<u32> {
    if a < 1 || b < 0 {
        return Err(Error::Event(format!("crossing count needs a >= 1 and b >= 0, got a={a} b={b}")));
    }
    let s = Region::centered(a, b)?;
    check_embedding(c, r, &s)?;
    let left = column(&s, -a, -b, b);
    let right = column(&s, a, -b, b);
    Ok(side_to_side_flow(c, r, &s, &left, &right) as u32)
}

fn side_to_side_flow(c: &Configuration, r: &Region, s: &Region, from: &[u32], to: &[u32]) -> u64 {
    let nv = s.n_vertices();
    let (source, sink) = (nv, nv + 1);
    let mut g = FlowNetwork::new(nv + 2);
    for e in s.edges() {
        let id = r.edge_index(e).expect("support contained in region");
        if c.get(id) {
            let (a, b) = e.endpoints();
            g.add_undirected_edge(
                s.vertex_index(a).unwrap(),
                s.vertex_index(b).unwrap(),
                1,
            );
        }
    }
    for &i in from {
        g.add_arc(source, i as usize, 1 << 30);
    }
    for &i in to {
        g.add_arc(i as usize, sink, 1 << 30);
    }
    g.max_flow(source, sink)
}

/// Minimal number of currently open edges whose closure falsifies the event;
/// 0 when the event already fails. Crossing-shaped events use max-flow, the
/// rest a subset search bounded by [`GENERIC_HAMMING_LIMIT`] open edges.
pub fn hamming_to_complement(c: &Configuration, ev: &EventSpec, r: &Region) -> Result<u32> {
    if !ev.detect(c, r)? {
        return Ok(0);
    }
    match *ev {
        EventSpec::Crossing { a, b } => {
            if a == 0 {
                Err(always_true(ev))
            } else {
                count_disjoint_crossings(c, r, a, b)
            }
        }
        EventSpec::Strip { n } => {
            let s = ev.support()?;
            let from = column(&s, 0, 0, 2 * n);
            let to = column(&s, 2 * n + 1, 0, 2 * n);
            Ok(side_to_side_flow(c, r, &s, &from, &to) as u32)
        }
        EventSpec::StripDual { n } => {
            let s = ev.support()?;
            let from: Vec<u32> =
                (0..=2 * n).map(|x| s.vertex_index(v(x, -1)).unwrap() as u32).collect();
            let to: Vec<u32> =
                (0..=2 * n).map(|x| s.vertex_index(v(x, 2 * n)).unwrap() as u32).collect();
            Ok(side_to_side_flow(c, r, &s, &from, &to) as u32)
        }
        _ => generic_hamming(c, ev, r),
    }
}

fn always_true(ev: &EventSpec) -> Error {
    Error::Event(format!("event {ev} is always true; no closure set falsifies it"))
}

/// Per-edge pivotality for the left-right crossing of [-a,a] x [-b,b]:
/// out[e] is true when flipping e alone changes the event. When the crossing
/// fails these are the closed edges joining the left side's clusters to the
/// right side's; when it holds, the open bridges every crossing path uses.
pub fn crossing_pivotal_edges(c: &Configuration, r: &Region, a: i32, b: i32) -> Result<Vec<bool>> {
    let ev = EventSpec::Crossing { a, b };
    ev.validate()?;
    let s = ev.support()?;
    check_embedding(c, r, &s)?;
    let mut out = vec![false; r.n_edges()];
    if a == 0 {
        return Ok(out);
    }
    let nv = s.n_vertices();
    let mut edges = Vec::with_capacity(s.n_edges());
    for e in s.edges() {
        let (u, w) = e.endpoints();
        edges.push((
            r.edge_index(e).unwrap(),
            s.vertex_index(u).unwrap() as u32,
            s.vertex_index(w).unwrap() as u32,
        ));
    }
    let mut is_left = vec![false; nv];
    let mut is_right = vec![false; nv];
    for (i, vtx) in s.vertices().enumerate() {
        is_left[i] = vtx.x == -a;
        is_right[i] = vtx.x == a;
    }
    let mut ds = DisjointSet::new(nv);
    for &(eid, u, w) in &edges {
        if c.get(eid) {
            ds.union(u, w);
        }
    }
    let mut touch_l = vec![false; nv];
    let mut touch_r = vec![false; nv];
    for i in 0..nv {
        let root = ds.find(i as u32) as usize;
        touch_l[root] |= is_left[i];
        touch_r[root] |= is_right[i];
    }
    if !(0..nv).any(|i| touch_l[i] && touch_r[i]) {
        // opening a closed edge between a left-wired and a right-wired
        // cluster is the only single flip that creates a crossing
        for &(eid, u, w) in &edges {
            if c.get(eid) {
                continue;
            }
            let (ru, rw) = (ds.find(u) as usize, ds.find(w) as usize);
            if (touch_l[ru] && touch_r[rw]) || (touch_l[rw] && touch_r[ru]) {
                out[eid.0] = true;
            }
        }
        return Ok(out);
    }
    // the crossing holds: only closing an open edge can change the event,
    // and only if it is a bridge separating the two sides
    let open: Vec<(EdgeId, u32, u32)> =
        edges.iter().filter(|&&(eid, _, _)| c.get(eid)).copied().collect();
    let mut deg = vec![0u32; nv];
    for &(_, u, w) in &open {
        deg[u as usize] += 1;
        deg[w as usize] += 1;
    }
    let mut off = vec![0u32; nv + 1];
    for i in 0..nv {
        off[i + 1] = off[i] + deg[i];
    }
    let mut adj = vec![(0u32, 0u32); off[nv] as usize];
    let mut cur: Vec<u32> = off[..nv].to_vec();
    for (oe, &(_, u, w)) in open.iter().enumerate() {
        adj[cur[u as usize] as usize] = (w, oe as u32);
        cur[u as usize] += 1;
        adj[cur[w as usize] as usize] = (u, oe as u32);
        cur[w as usize] += 1;
    }
    let mut disc = vec![0u32; nv];
    let mut low = vec![0u32; nv];
    let mut timer = 0u32;
    let mut is_bridge = vec![false; open.len()];
    let mut stack: Vec<(u32, u32, u32)> = Vec::new();
    for start in 0..nv as u32 {
        if disc[start as usize] != 0 {
            continue;
        }
        timer += 1;
        disc[start as usize] = timer;
        low[start as usize] = timer;
        stack.push((start, off[start as usize], u32::MAX));
        loop {
            let Some(&(x, cursor, pe)) = stack.last() else { break };
            if cursor < off[x as usize + 1] {
                stack.last_mut().unwrap().1 += 1;
                let (y, oe) = adj[cursor as usize];
                if oe == pe {
                    continue;
                }
                if disc[y as usize] == 0 {
                    timer += 1;
                    disc[y as usize] = timer;
                    low[y as usize] = timer;
                    stack.push((y, off[y as usize], oe));
                } else {
                    low[x as usize] = low[x as usize].min(disc[y as usize]);
                }
            } else {
                stack.pop();
                if let Some(&(px, _, _)) = stack.last() {
                    low[px as usize] = low[px as usize].min(low[x as usize]);
                    if low[x as usize] > disc[px as usize] {
                        is_bridge[pe as usize] = true;
                    }
                }
            }
        }
    }
    // if several components cross on their own, no single edge is pivotal
    let mut tot_l = vec![0u32; nv];
    let mut tot_r = vec![0u32; nv];
    for i in 0..nv {
        let root = ds.find(i as u32) as usize;
        tot_l[root] += is_left[i] as u32;
        tot_r[root] += is_right[i] as u32;
    }
    let crossing_roots: Vec<u32> =
        (0..nv as u32).filter(|&i| tot_l[i as usize] > 0 && tot_r[i as usize] > 0).collect();
    if crossing_roots.len() != 1 {
        return Ok(out);
    }
    let rt = crossing_roots[0];
    let (tl, tr) = (tot_l[rt as usize], tot_r[rt as usize]);
    // contract two-edge-connected pieces; bridges form a tree over them
    let mut tec = DisjointSet::new(nv);
    for (oe, &(_, u, w)) in open.iter().enumerate() {
        if !is_bridge[oe] {
            tec.union(u, w);
        }
    }
    let mut piece_l = vec![0u32; nv];
    let mut piece_r = vec![0u32; nv];
    for i in 0..nv {
        let p = tec.find(i as u32) as usize;
        piece_l[p] += is_left[i] as u32;
        piece_r[p] += is_right[i] as u32;
    }
    let mut forest: Vec<Vec<(u32, usize)>> = vec![Vec::new(); nv];
    let mut bridge_ids = Vec::new();
    for (oe, &(eid, u, w)) in open.iter().enumerate() {
        if !is_bridge[oe] || ds.find(u) != rt {
            continue;
        }
        let (cu, cw) = (tec.find(u), tec.find(w));
        let bi = bridge_ids.len();
        bridge_ids.push(eid);
        forest[cu as usize].push((cw, bi));
        forest[cw as usize].push((cu, bi));
    }
    if bridge_ids.is_empty() {
        return Ok(out);
    }
    let mut order = Vec::new();
    let mut dfs = vec![(tec.find(rt), u32::MAX, usize::MAX)];
    while let Some(frame) = dfs.pop() {
        order.push(frame);
        let (x, _, pb) = frame;
        for &(y, bi) in &forest[x as usize] {
            if bi != pb {
                dfs.push((y, x, bi));
            }
        }
    }
    // a bridge is pivotal when neither side of the split spans on its own
    let (mut sub_l, mut sub_r) = (piece_l, piece_r);
    for &(x, px, pb) in order.iter().rev() {
        if pb == usize::MAX {
            continue;
        }
        let (cl, cr) = (sub_l[x as usize], sub_r[x as usize]);
        sub_l[px as usize] += cl;
        sub_r[px as usize] += cr;
        if !(cl > 0 && cr > 0) && !(tl - cl > 0 && tr - cr > 0) {
            out[bridge_ids[pb].0] = true;
        }
    }
    Ok(out)
}

fn generic_hamming(c: &Configuration, ev: &EventSpec, r: &Region) -> Result<u32> {
    let s = ev.support()?;
    let open: Vec<usize> = s
        .edges()
        .filter_map(|e| {
            let id = r.edge_index(e).unwrap();
            c.get(id).then_some(id.0)
        })
        .collect();
    let m = open.len();
    if m > GENERIC_HAMMING_LIMIT {
        return Err(Error::Event(format!(
            "event {ev} has {m} open support edges, above the generic limit of {GENERIC_HAMMING_LIMIT}; \
             only crossing events support larger instances"
        )));
    }
    let mut scratch = c.clone();
    for k in 1..=m {
        let mut found = false;
        for_each_combination(m, k, |chosen| {
            if found {
                return;
            }
            for &j in chosen {
                scratch.set(crate::lattice::EdgeId(open[j]), false);
            }
            if !ev.detect(&scratch, r).unwrap() {
                found = true;
            }
            for &j in chosen {
                scratch.set(crate::lattice::EdgeId(open[j]), true);
            }
        });
        if found {
            return Ok(k as u32);
        }
    }
    Err(always_true(ev))
}

/// Calls f with every k-element index subset of 0..m in lexicographic order.
pub fn for_each_combination(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl fmt::Display for EventSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EventSpec::Crossing { a, b } => write!(f, "Ch(a={a},b={b})"),
            EventSpec::TargetedCrossing { n, alpha, beta } => {
                write!(f, "Hn(n={n},alpha={alpha},beta={beta})")
            }
            EventSpec::SegmentTouching { n, alpha } => write!(f, "Xn(n={n},alpha={alpha})"),
            EventSpec::Connection { x, n } => write!(f, "Ax(x={},y={},n={n})", x.x, x.y),
            EventSpec::Strip { n } => write!(f, "EStrip(n={n})"),
            EventSpec::StripDual { n } => write!(f, "EStripDual(n={n})"),
            EventSpec::EdgeOpen { edge } => {
                let o = match edge.orientation {
                    Orientation::Horizontal => 'h',
                    Orientation::Vertical => 'v',
                };
                write!(f, "EdgeOpen(x={},y={},o={o})", edge.anchor.x, edge.anchor.y)
            }
            EventSpec::BoxToBoundary { n, m } => write!(f, "BoxToBoundary(n={n},m={m})"),
        }
    }
}

impl FromStr for EventSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<EventSpec> {
        let bad = |msg: String| Error::Event(msg);
        let text = text.trim();
        let open = text
            .find('(')
            .ok_or_else(|| bad(format!("event {text:?} missing parameter list")))?;
        if !text.ends_with(')') {
            return Err(bad(format!("event {text:?} missing closing parenthesis")));
        }
        let name = &text[..open];
        let body = &text[open + 1..text.len() - 1];
        let mut fields = std::collections::HashMap::new();
        for part in body.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, val) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("event parameter {part:?} is not key=value")))?;
            if fields.insert(k.trim().to_string(), val.trim().to_string()).is_some() {
                return Err(bad(format!("duplicate event parameter {:?}", k.trim())));
            }
        }
        let mut take = |key: &str| -> Result<String> {
            fields
                .remove(key)
                .ok_or_else(|| bad(format!("event {name} is missing parameter {key:?}")))
        };
        let int = |key: &str, val: String| -> Result<i32> {
            val.parse::<i32>()
                .map_err(|_| bad(format!("event parameter {key}={val:?} is not an integer")))
        };
        let spec = match name {
            "Ch" => EventSpec::Crossing {
                a: int("a", take("a")?)?,
                b: int("b", take("b")?)?,
            },
            "Hn" => EventSpec::TargetedCrossing {
                n: int("n", take("n")?)?,
                alpha: int("alpha", take("alpha")?)?,
                beta: int("beta", take("beta")?)?,
            },
            "Xn" => EventSpec::SegmentTouching {
                n: int("n", take("n")?)?,
                alpha: int("alpha", take("alpha")?)?,
            },
            "Ax" => EventSpec::Connection {
                x: v(int("x", take("x")?)?, int("y", take("y")?)?),
                n: int("n", take("n")?)?,
            },
            "EStrip" => EventSpec::Strip { n: int("n", take("n")?)? },
            "EStripDual" => EventSpec::StripDual { n: int("n", take("n")?)? },
            "EdgeOpen" => {
                let anchor = v(int("x", take("x")?)?, int("y", take("y")?)?);
                let edge = match take("o")?.as_str() {
                    "h" => Edge::horizontal(anchor.x, anchor.y),
                    "v" => Edge::vertical(anchor.x, anchor.y),
                    other => return Err(bad(format!("edge orientation {other:?} is not h or v"))),
                };
                EventSpec::EdgeOpen { edge }
            }
            "BoxToBoundary" => EventSpec::BoxToBoundary {
                n: int("n", take("n")?)?,
                m: int("m", take("m")?)?,
            },
            other => return Err(bad(format!("unknown event kind {other:?}"))),
        };
        if let Some(extra) = fields.keys().next() {
            return Err(bad(format!("event {name} has unexpected parameter {extra:?}")));
        }
        spec.validate()?;
        Ok(spec)
    }
}
