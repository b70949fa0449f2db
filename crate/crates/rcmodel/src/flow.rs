//! Dinic max-flow on unit-capacity style networks, used to count maximal
//! families of edge-disjoint open crossings.

/// Flow network over nodes 0..n with an adjacency-list residual graph.
pub struct FlowNetwork {
    // arcs stored in pairs: arc i and its reverse i ^ 1
    to: Vec<u32>,
    cap: Vec<u32>,
    head: Vec<Vec<u32>>,
}

impl FlowNetwork {
    pub fn new(n_nodes: usize) -> FlowNetwork {
        FlowNetwork { to: Vec::new(), cap: Vec::new(), head: vec![Vec::new(); n_nodes] }
    }

    pub fn n_nodes(&self) -> usize {
        self.head.len()
    }

    /// Directed arc u -> v with the given capacity.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: u32) {
        let i = self.to.len() as u32;
        self.to.push(v as u32);
        self.cap.push(cap);
        self.to.push(u as u32);
        self.cap.push(0);
        self.head[u].push(i);
        self.head[v].push(i + 1);
    }

    /// Undirected edge with the same capacity in both directions.
    pub fn add_undirected_edge(&mut self, u: usize, v: usize, cap: u32) {
        let i = self.to.len() as u32;
        self.to.push(v as u32);
        self.cap.push(cap);
        self.to.push(u as u32);
        self.cap.push(cap);
        self.head[u].push(i);
        self.head[v].push(i + 1);
    }

    /// Maximum flow from s to t (Dinic: BFS level graph + blocking flow).
    pub fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        assert_ne!(s, t);
        let n = self.head.len();
        let mut level = vec![u32::MAX; n];
        let mut iter = vec![0u32; n];
        let mut queue = Vec::with_capacity(n);
        let mut total = 0u64;
        loop {
            // build level graph
            level.iter_mut().for_each(|l| *l = u32::MAX);
            level[s] = 0;
            queue.clear();
            queue.push(s as u32);
            let mut qi = 0;
            while qi < queue.len() {
                let u = queue[qi] as usize;
                qi += 1;
                for &a in &self.head[u] {
                    let v = self.to[a as usize] as usize;
                    if self.cap[a as usize] > 0 && level[v] == u32::MAX {
                        level[v] = level[u] + 1;
                        queue.push(v as u32);
                    }
                }
            }
            if level[t] == u32::MAX {
                return total;
            }
            iter.iter_mut().for_each(|i| *i = 0);
            while let Some(f) = self.augment(s, t, u32::MAX, &level, &mut iter) {
                total += f as u64;
            }
        }
    }

    // iterative DFS for one augmenting path in the level graph
    fn augment(
        &mut self,
        s: usize,
        t: usize,
        limit: u32,
        level: &[u32],
        iter: &mut [u32],
    ) -> Option<u32> {
        let mut path: Vec<u32> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let f = path
                    .iter()
                    .map(|&a| self.cap[a as usize])
                    .min()
                    .unwrap_or(limit);
                for &a in &path {
                    self.cap[a as usize] -= f;
                    self.cap[(a ^ 1) as usize] += f;
                }
                return Some(f);
            }
            let mut advanced = false;
            while (iter[u] as usize) < self.head[u].len() {
                let a = self.head[u][iter[u] as usize];
                let v = self.to[a as usize] as usize;
                if self.cap[a as usize] > 0 && level[v] == level[u] + 1 {
                    path.push(a);
                    u = v;
                    advanced = true;
                    break;
                }
                iter[u] += 1;
            }
            if advanced {
                continue;
            }
            // dead end: retreat
            match path.pop() {
                Some(a) => {
                    let prev = self.to[(a ^ 1) as usize] as usize;
                    iter[prev] += 1;
                    u = prev;
                }
                None => return None,
            }
        }
    }
}
