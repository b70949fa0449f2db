//! Rectangular sublattices of Z^2: vertices, canonical edge indexing, edge
//! configurations, lattice symmetries, and the inner dual graph.

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Vertex {
    pub x: i32,
    pub y: i32,
}

impl Vertex {
    pub const fn new(x: i32, y: i32) -> Self {
        Vertex { x, y }
    }
}

/// Shorthand constructor, used heavily in tests.
pub const fn v(x: i32, y: i32) -> Vertex {
    Vertex::new(x, y)
}

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// Nearest-neighbor edge, identified by its lower-left endpoint.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Edge {
    pub anchor: Vertex,
    pub orientation: Orientation,
}

impl Edge {
    pub const fn horizontal(x: i32, y: i32) -> Self {
        Edge { anchor: Vertex::new(x, y), orientation: Orientation::Horizontal }
    }

    pub const fn vertical(x: i32, y: i32) -> Self {
        Edge { anchor: Vertex::new(x, y), orientation: Orientation::Vertical }
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        let a = self.anchor;
        match self.orientation {
            Orientation::Horizontal => (a, v(a.x + 1, a.y)),
            Orientation::Vertical => (a, v(a.x, a.y + 1)),
        }
    }

    /// The edge joining two vertices, in either input order, if they are
    /// nearest neighbors.
    pub fn between(a: Vertex, b: Vertex) -> Option<Edge> {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        match (dx, dy) {
            (1, 0) => Some(Edge::horizontal(a.x, a.y)),
            (-1, 0) => Some(Edge::horizontal(b.x, b.y)),
            (0, 1) => Some(Edge::vertical(a.x, a.y)),
            (0, -1) => Some(Edge::vertical(b.x, b.y)),
            _ => None,
        }
    }
}

/// Canonical index of an edge within a region: row-major by lower-left
/// anchor, horizontal before vertical at the same anchor.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeId(pub usize);

/// Finite sublattice [x_min, x_max] x [y_min, y_max] of Z^2 with all
/// nearest-neighbor edges between contained vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Region {
    x_min: i32,
    x_max: i32,
    y_min: i32,
    y_max: i32,
}

/// Box [-a,a] x [-b,b] translated by `offset`.
pub fn build_region(a: i32, b: i32, offset: Vertex) -> Result<Region> {
    if a < 0 || b < 0 {
        return Err(Error::Geometry(format!("negative half-widths a={a}, b={b}")));
    }
    Region::new(offset.x - a, offset.x + a, offset.y - b, offset.y + b)
}

impl Region {
    pub fn new(x_min: i32, x_max: i32, y_min: i32, y_max: i32) -> Result<Region> {
        if x_min > x_max || y_min > y_max {
            return Err(Error::Geometry(format!(
                "empty region [{x_min},{x_max}] x [{y_min},{y_max}]"
            )));
        }
        let (w, h) = (x_max as i64 - x_min as i64 + 1, y_max as i64 - y_min as i64 + 1);
        if w * h > (1 << 32) {
            return Err(Error::Geometry(format!("region with {} vertices is too large", w * h)));
        }
        Ok(Region { x_min, x_max, y_min, y_max })
    }

    /// Box [-a,a] x [-b,b].
    pub fn centered(a: i32, b: i32) -> Result<Region> {
        build_region(a, b, v(0, 0))
    }

    pub fn x_min(&self) -> i32 {
        self.x_min
    }

    pub fn x_max(&self) -> i32 {
        self.x_max
    }

    pub fn y_min(&self) -> i32 {
        self.y_min
    }

    pub fn y_max(&self) -> i32 {
        self.y_max
    }

    /// Vertex count along x.
    pub fn width(&self) -> i32 {
        self.x_max - self.x_min + 1
    }

    /// Vertex count along y.
    pub fn height(&self) -> i32 {
        self.y_max - self.y_min + 1
    }

    pub fn n_vertices(&self) -> usize {
        self.width() as usize * self.height() as usize
    }

    pub fn n_edges(&self) -> usize {
        let (w, h) = (self.width() as usize, self.height() as usize);
        (w - 1) * h + w * (h - 1)
    }

    pub fn contains(&self, p: Vertex) -> bool {
        self.x_min <= p.x && p.x <= self.x_max && self.y_min <= p.y && p.y <= self.y_max
    }

    /// Region grown around this one by a margin factor: each side is pushed
    /// out by ceil((m-1) * extent / 2), so the result is roughly m times as
    /// wide and tall and still contains the original.
    pub fn margin_box(&self, m: i32) -> Result<Region> {
        if m < 1 {
            return Err(Error::Geometry(format!("margin factor {m} below 1")));
        }
        let pad = |extent: i64| -> i64 { ((m as i64 - 1) * extent + 1) / 2 };
        let px = pad(self.x_max as i64 - self.x_min as i64) as i32;
        let py = pad(self.y_max as i64 - self.y_min as i64) as i32;
        Region::new(self.x_min - px, self.x_max + px, self.y_min - py, self.y_max + py)
    }

    pub fn contains_region(&self, other: &Region) -> bool {
        self.x_min <= other.x_min
            && other.x_max <= self.x_max
            && self.y_min <= other.y_min
            && other.y_max <= self.y_max
    }

    /// Row-major vertex index (y outer, x inner).
    pub fn vertex_index(&self, p: Vertex) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let w = self.width() as usize;
        Some((p.y - self.y_min) as usize * w + (p.x - self.x_min) as usize)
    }

    pub fn vertex_at(&self, i: usize) -> Vertex {
        let w = self.width() as usize;
        debug_assert!(i < self.n_vertices());
        v(self.x_min + (i % w) as i32, self.y_min + (i / w) as i32)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n_vertices()).map(move |i| self.vertex_at(i))
    }

    pub fn edge_index(&self, e: Edge) -> Option<EdgeId> {
        let (a, b) = e.endpoints();
        if !self.contains(a) || !self.contains(b) {
            return None;
        }
        let w = self.width() as usize;
        let rx = (e.anchor.x - self.x_min) as usize;
        let ry = (e.anchor.y - self.y_min) as usize;
        let base = ry * (2 * w - 1);
        let idx = if e.anchor.y < self.y_max {
            match e.orientation {
                Orientation::Horizontal => base + 2 * rx,
                Orientation::Vertical => base + if rx + 1 == w { 2 * rx } else { 2 * rx + 1 },
            }
        } else {
            // top row holds horizontal edges only
            base + rx
        };
        Some(EdgeId(idx))
    }

    pub fn edge_at(&self, id: EdgeId) -> Edge {
        let w = self.width() as usize;
        let full = 2 * w - 1;
        let full_rows = (self.height() - 1) as usize;
        let i = id.0;
        if i < full_rows * full {
            let (ry, r) = (i / full, i % full);
            let rx = r / 2;
            let (x, y) = (self.x_min + rx as i32, self.y_min + ry as i32);
            if rx + 1 == w || r % 2 == 1 {
                Edge::vertical(x, y)
            } else {
                Edge::horizontal(x, y)
            }
        } else {
            let rx = i - full_rows * full;
            assert!(w > 0 && rx < w - 1, "edge id {i} out of range");
            Edge::horizontal(self.x_min + rx as i32, self.y_max)
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n_edges()).map(move |i| self.edge_at(EdgeId(i)))
    }

    /// Vertices with at least one Z^2 neighbor outside the region.
    pub fn is_boundary(&self, p: Vertex) -> bool {
        self.contains(p)
            && (p.x == self.x_min || p.x == self.x_max || p.y == self.y_min || p.y == self.y_max)
    }

    pub fn boundary_vertices(&self) -> Vec<Vertex> {
        self.vertices().filter(|&p| self.is_boundary(p)).collect()
    }

    pub fn translated(&self, dx: i32, dy: i32) -> Region {
        Region {
            x_min: self.x_min + dx,
            x_max: self.x_max + dx,
            y_min: self.y_min + dy,
            y_max: self.y_max + dy,
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{}]x[{},{}]", self.x_min, self.x_max, self.y_min, self.y_max)
    }
}

/// Open/closed edge states over a region's canonically indexed edge set.
///
/// Stored as a packed bitset; unused high bits are kept zero so that
/// equality and hashing are well defined.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Configuration {
    words: Vec<u64>,
    n_edges: usize,
}

impl Configuration {
    pub fn all_closed(n_edges: usize) -> Self {
        Configuration { words: vec![0; n_edges.div_ceil(64).max(1)], n_edges }
    }

    pub fn all_open(n_edges: usize) -> Self {
        let mut c = Self::all_closed(n_edges);
        for i in 0..n_edges {
            c.set(EdgeId(i), true);
        }
        c
    }

    /// Configuration on up to 64 edges from a bitmask (bit i = edge i open).
    pub fn from_mask(mask: u64, n_edges: usize) -> Self {
        assert!(n_edges <= 64);
        assert!(n_edges == 64 || mask < (1u64 << n_edges), "mask has bits beyond edge count");
        Configuration { words: vec![mask], n_edges }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut c = Self::all_closed(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            c.set(EdgeId(i), b);
        }
        c
    }

    #[inline]
    pub fn get(&self, e: EdgeId) -> bool {
        debug_assert!(e.0 < self.n_edges);
        (self.words[e.0 >> 6] >> (e.0 & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, e: EdgeId, open: bool) {
        debug_assert!(e.0 < self.n_edges);
        let (w, b) = (e.0 >> 6, e.0 & 63);
        if open {
            self.words[w] |= 1u64 << b;
        } else {
            self.words[w] &= !(1u64 << b);
        }
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn open_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Bitmask view for configurations on at most 64 edges.
    pub fn as_mask(&self) -> u64 {
        assert!(self.n_edges <= 64);
        self.words[0]
    }

    /// Overwrite all states from a mask; only valid for at most 64 edges.
    #[inline]
    pub fn set_from_mask(&mut self, mask: u64) {
        debug_assert!(self.n_edges <= 64);
        self.words[0] = mask;
    }

    pub fn open_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(EdgeId(wi * 64 + b))
                }
            })
        })
    }
}

/// Lattice symmetries of Z^2 that map rectangular regions onto rectangular
/// regions: translations, reflections in the coordinate axes, and the
/// counterclockwise quarter turn about the origin.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SymmetryTransform {
    Translation { dx: i32, dy: i32 },
    /// (x, y) -> (x, -y)
    ReflectX,
    /// (x, y) -> (-x, y)
    ReflectY,
    /// (x, y) -> (-y, x)
    RotateQuarter,
}

impl SymmetryTransform {
    pub fn apply_vertex(&self, p: Vertex) -> Vertex {
        match *self {
            SymmetryTransform::Translation { dx, dy } => v(p.x + dx, p.y + dy),
            SymmetryTransform::ReflectX => v(p.x, -p.y),
            SymmetryTransform::ReflectY => v(-p.x, p.y),
            SymmetryTransform::RotateQuarter => v(-p.y, p.x),
        }
    }

    pub fn apply_region(&self, r: &Region) -> Region {
        let a = self.apply_vertex(v(r.x_min, r.y_min));
        let b = self.apply_vertex(v(r.x_max, r.y_max));
        Region {
            x_min: a.x.min(b.x),
            x_max: a.x.max(b.x),
            y_min: a.y.min(b.y),
            y_max: a.y.max(b.y),
        }
    }

    pub fn apply_edge(&self, e: Edge) -> Edge {
        let (a, b) = e.endpoints();
        Edge::between(self.apply_vertex(a), self.apply_vertex(b))
            .expect("lattice symmetry preserves adjacency")
    }
}

/// Transport a configuration along a symmetry: the output region is the image
/// of `r`, and the output state at t(e) equals the input state at e.
pub fn apply_symmetry(
    t: SymmetryTransform,
    c: &Configuration,
    r: &Region,
) -> Result<(Region, Configuration)> {
    if c.n_edges() != r.n_edges() {
        return Err(Error::Geometry(format!(
            "configuration has {} edges but region {} has {}",
            c.n_edges(),
            r,
            r.n_edges()
        )));
    }
    let out_region = t.apply_region(r);
    let mut out = Configuration::all_closed(out_region.n_edges());
    for (i, e) in r.edges().enumerate() {
        let te = t.apply_edge(e);
        let tid = out_region.edge_index(te).ok_or_else(|| {
            Error::Geometry(format!("transform does not map {r} onto the target edge set"))
        })?;
        out.set(tid, c.get(EdgeId(i)));
    }
    Ok((out_region, out))
}

/// Bounded unit faces of a region together with their adjacency structure.
///
/// Face (x, y) is the unit square with lower-left corner (x, y); the dual
/// vertex sits at (x + 1/2, y + 1/2). Two faces are adjacent exactly when
/// they share an internal primal edge, so dual edges and internal primal
/// edges are in bijection.
#[derive(Clone, Debug)]
pub struct DualGraph {
    primal: Region,
    faces: Region,
    dual_to_primal: Vec<EdgeId>,
    primal_to_dual: Vec<Option<EdgeId>>,
}

/// Inner dual graph of a region. Errors on degenerate regions (a single row
/// or column of vertices has no bounded face).
pub fn dual_graph(r: &Region) -> Result<DualGraph> {
    if r.width() < 2 || r.height() < 2 {
        return Err(Error::Geometry(format!("region {r} has no bounded faces")));
    }
    let faces = Region::new(r.x_min(), r.x_max() - 1, r.y_min(), r.y_max() - 1)?;
    let mut dual_to_primal = Vec::with_capacity(faces.n_edges());
    let mut primal_to_dual = vec![None; r.n_edges()];
    for (i, de) in faces.edges().enumerate() {
        let a = de.anchor;
        // A dual edge between horizontally adjacent faces crosses the shared
        // vertical primal edge, and vice versa.
        let pe = match de.orientation {
            Orientation::Horizontal => Edge::vertical(a.x + 1, a.y),
            Orientation::Vertical => Edge::horizontal(a.x, a.y + 1),
        };
        let pid = r.edge_index(pe).expect("internal primal edge lies in the region");
        dual_to_primal.push(pid);
        primal_to_dual[pid.0] = Some(EdgeId(i));
    }
    Ok(DualGraph { primal: *r, faces, dual_to_primal, primal_to_dual })
}

impl DualGraph {
    pub fn primal(&self) -> &Region {
        &self.primal
    }

    /// Dual vertices form the rectangle of face anchors; dual edges are
    /// exactly this region's grid edges.
    pub fn faces(&self) -> &Region {
        &self.faces
    }

    pub fn n_dual_vertices(&self) -> usize {
        self.faces.n_vertices()
    }

    pub fn n_dual_edges(&self) -> usize {
        self.faces.n_edges()
    }

    pub fn dual_to_primal(&self, d: EdgeId) -> EdgeId {
        self.dual_to_primal[d.0]
    }

    pub fn primal_to_dual(&self, p: EdgeId) -> Option<EdgeId> {
        self.primal_to_dual[p.0]
    }

    /// Primal edges with a bounded face on both sides.
    pub fn is_internal(&self, p: EdgeId) -> bool {
        self.primal_to_dual[p.0].is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_counts() {
        let r = Region::centered(1, 1).unwrap();
        assert_eq!(r.n_vertices(), 9);
        assert_eq!(r.n_edges(), 12);

        let single = Region::centered(0, 0).unwrap();
        assert_eq!(single.n_vertices(), 1);
        assert_eq!(single.n_edges(), 0);

        let r = Region::centered(2, 1).unwrap();
        assert_eq!(r.n_vertices(), 15);
        assert_eq!(r.n_edges(), 22); // (2a)(2b+1) + (2a+1)(2b)

        let off = build_region(2, 1, v(7, -3)).unwrap();
        assert_eq!(off.n_vertices(), 15);
        assert_eq!(off.n_edges(), 22);
        assert!(off.contains(v(9, -2)));
        assert!(!off.contains(v(10, -3)));

        assert!(build_region(-1, 0, v(0, 0)).is_err());
        assert!(Region::new(3, 2, 0, 0).is_err());
    }

    #[test]
    fn boundary_vertices_counts() {
        assert_eq!(Region::centered(1, 1).unwrap().boundary_vertices().len(), 8);
        let single = Region::centered(0, 0).unwrap();
        assert_eq!(single.boundary_vertices(), vec![v(0, 0)]);
        assert_eq!(Region::centered(2, 1).unwrap().boundary_vertices().len(), 12);
        // degenerate strip: every vertex has a neighbor outside
        assert_eq!(Region::new(0, 0, -2, 2).unwrap().boundary_vertices().len(), 5);
    }

    #[test]
    fn edge_indexing_round_trip_small_regions() {
        for w in 1..=10i32 {
            for h in 1..=10i32 {
                for &(ox, oy) in &[(0, 0), (-3, 5), (17, -29)] {
                    let r = Region::new(ox, ox + w - 1, oy, oy + h - 1).unwrap();
                    let mut seen = std::collections::HashSet::new();
                    for (i, e) in r.edges().enumerate() {
                        assert_eq!(r.edge_index(e), Some(EdgeId(i)));
                        assert!(seen.insert(e), "duplicate edge {e:?}");
                        let (a, b) = e.endpoints();
                        assert!(r.contains(a) && r.contains(b));
                    }
                    assert_eq!(seen.len(), r.n_edges());
                }
            }
        }
    }

    #[test]
    fn canonical_order_is_row_major_horizontal_first() {
        let r = Region::new(0, 2, 0, 1).unwrap();
        let order: Vec<Edge> = r.edges().collect();
        assert_eq!(
            order,
            vec![
                Edge::horizontal(0, 0),
                Edge::vertical(0, 0),
                Edge::horizontal(1, 0),
                Edge::vertical(1, 0),
                Edge::vertical(2, 0),
                Edge::horizontal(0, 1),
                Edge::horizontal(1, 1),
            ]
        );
    }

    #[test]
    fn configuration_bits() {
        let mut c = Configuration::all_closed(70);
        assert_eq!(c.open_count(), 0);
        c.set(EdgeId(0), true);
        c.set(EdgeId(69), true);
        assert!(c.get(EdgeId(0)) && c.get(EdgeId(69)) && !c.get(EdgeId(33)));
        assert_eq!(c.open_count(), 2);
        assert_eq!(c.open_edges().collect::<Vec<_>>(), vec![EdgeId(0), EdgeId(69)]);
        c.set(EdgeId(69), false);
        assert_eq!(c.open_count(), 1);

        let m = Configuration::from_mask(0b1011, 4);
        assert_eq!(m.open_count(), 3);
        assert_eq!(m.as_mask(), 0b1011);
        assert_eq!(Configuration::all_open(4).as_mask(), 0b1111);
    }

    #[test]
    fn symmetry_round_trips() {
        let r = Region::centered(2, 1).unwrap();
        let c = Configuration::from_mask(0b01_1010_1100_0110_0101_0011, 22);

        let t = SymmetryTransform::Translation { dx: 4, dy: -7 };
        let (r1, c1) = apply_symmetry(t, &c, &r).unwrap();
        assert_eq!(r1, r.translated(4, -7));
        let (r2, c2) =
            apply_symmetry(SymmetryTransform::Translation { dx: -4, dy: 7 }, &c1, &r1).unwrap();
        assert_eq!(r2, r);
        assert_eq!(c2, c);

        for refl in [SymmetryTransform::ReflectX, SymmetryTransform::ReflectY] {
            let (r1, c1) = apply_symmetry(refl, &c, &r).unwrap();
            let (r2, c2) = apply_symmetry(refl, &c1, &r1).unwrap();
            assert_eq!(r2, r);
            assert_eq!(c2, c);
        }

        // quarter turn has order four
        let (mut rr, mut cc) = (r, c.clone());
        for _ in 0..4 {
            let (rn, cn) = apply_symmetry(SymmetryTransform::RotateQuarter, &cc, &rr).unwrap();
            rr = rn;
            cc = cn;
        }
        assert_eq!(rr, r);
        assert_eq!(cc, c);
    }

    #[test]
    fn symmetry_maps_single_edge() {
        // open horizontal edge at the origin rotates to the vertical edge there
        let r = Region::new(0, 1, 0, 0).unwrap();
        let c = Configuration::from_mask(1, 1);
        let (r1, c1) = apply_symmetry(SymmetryTransform::RotateQuarter, &c, &r).unwrap();
        assert_eq!(r1, Region::new(0, 0, 0, 1).unwrap());
        assert_eq!(r1.edge_at(EdgeId(0)), Edge::vertical(0, 0));
        assert!(c1.get(EdgeId(0)));
    }

    #[test]
    fn symmetry_exhaustive_on_3x3() {
        // transporting all 2^12 configurations back and forth is the identity
        let r = Region::centered(1, 1).unwrap();
        for mask in 0u64..(1 << 12) {
            let c = Configuration::from_mask(mask, 12);
            let (r1, c1) =
                apply_symmetry(SymmetryTransform::Translation { dx: 3, dy: 1 }, &c, &r).unwrap();
            let (_, c2) =
                apply_symmetry(SymmetryTransform::Translation { dx: -3, dy: -1 }, &c1, &r1)
                    .unwrap();
            assert_eq!(c2.as_mask(), mask);
        }
    }

    #[test]
    fn dual_graph_counts() {
        let dg = dual_graph(&Region::centered(1, 1).unwrap()).unwrap();
        assert_eq!(dg.n_dual_vertices(), 4);
        assert_eq!(dg.n_dual_edges(), 4);

        let dg = dual_graph(&Region::new(0, 1, 0, 1).unwrap()).unwrap();
        assert_eq!(dg.n_dual_vertices(), 1);
        assert_eq!(dg.n_dual_edges(), 0);

        // a 1 x n strip of faces dualizes to a path
        let dg = dual_graph(&Region::new(0, 4, 0, 1).unwrap()).unwrap();
        assert_eq!(dg.n_dual_vertices(), 4);
        assert_eq!(dg.n_dual_edges(), 3);

        assert!(dual_graph(&Region::new(0, 5, 0, 0).unwrap()).is_err());
        assert!(dual_graph(&Region::centered(0, 0).unwrap()).is_err());
    }

    #[test]
    fn dual_correspondence_is_bijective_on_internal_edges() {
        for (w, h) in [(2, 2), (3, 3), (4, 3), (5, 2), (6, 6)] {
            let r = Region::new(0, w - 1, 0, h - 1).unwrap();
            let dg = dual_graph(&r).unwrap();
            let mut hit = vec![false; dg.n_dual_edges()];
            let mut internal = 0;
            for (i, e) in r.edges().enumerate() {
                let id = EdgeId(i);
                // internal = a bounded face on both sides
                let a = e.anchor;
                let expect_internal = match e.orientation {
                    Orientation::Horizontal => a.y > r.y_min() && a.y < r.y_max(),
                    Orientation::Vertical => a.x > r.x_min() && a.x < r.x_max(),
                };
                assert_eq!(dg.is_internal(id), expect_internal, "edge {e:?}");
                if let Some(d) = dg.primal_to_dual(id) {
                    internal += 1;
                    assert!(!hit[d.0], "dual edge hit twice");
                    hit[d.0] = true;
                    assert_eq!(dg.dual_to_primal(d), id);
                }
            }
            assert_eq!(internal, dg.n_dual_edges());
            assert!(hit.iter().all(|&b| b));
        }
    }

    #[test]
    fn dual_of_3x3_is_four_cycle() {
        let dg = dual_graph(&Region::centered(1, 1).unwrap()).unwrap();
        // internal primal edges of the 3x3 box are the four touching the center
        let r = Region::centered(1, 1).unwrap();
        let center_edges: Vec<EdgeId> = r
            .edges()
            .enumerate()
            .filter(|(_, e)| {
                let (a, b) = e.endpoints();
                a == v(0, 0) || b == v(0, 0)
            })
            .map(|(i, _)| EdgeId(i))
            .collect();
        assert_eq!(center_edges.len(), 4);
        for id in center_edges {
            assert!(dg.is_internal(id));
        }
        // each dual vertex of the 2x2 face grid has degree 2
        let faces = *dg.faces();
        for p in faces.vertices() {
            let deg = faces
                .edges()
                .filter(|e| {
                    let (a, b) = e.endpoints();
                    a == p || b == p
                })
                .count();
            assert_eq!(deg, 2);
        }
    }
}
