//! Left-right planarity test with embedding extraction.
//!
//! Three DFS passes: orientation (lowpoints and nesting depths), testing (conflict
//! pairs of return-edge intervals), and embedding (signs resolved through the `ref`
//! chains, then half-edges inserted around each vertex). Vertices here are 0-based.

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Default, Debug)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy, Default, Debug)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct LrState {
    n: usize,
    adj: Vec<Vec<(usize, usize)>>,
    src: Vec<usize>,
    dst: Vec<usize>,
    oriented: Vec<bool>,
    height: Vec<usize>,
    parent_edge: Vec<Option<usize>>,
    roots: Vec<usize>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<i64>,
    out: Vec<Vec<usize>>,
    refs: Vec<Option<usize>>,
    side: Vec<i64>,
    stack: Vec<ConflictPair>,
    stack_bottom: Vec<usize>,
    lowpt_edge: Vec<usize>,
}

/// Cyclic clockwise neighbour order per vertex (0-based), if the graph is planar.
pub(crate) fn lr_embedding(n: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    let mut st = LrState::new(n, edges)?;
    st.orient();
    if !st.test() {
        return None;
    }
    Some(st.embed())
}

pub(crate) fn lr_is_planar(n: usize, edges: &[(usize, usize)]) -> bool {
    match LrState::new(n, edges) {
        None => false,
        Some(mut st) => {
            st.orient();
            st.test()
        }
    }
}

impl LrState {
    fn new(n: usize, edges: &[(usize, usize)]) -> Option<Self> {
        let m = edges.len();
        if n > 2 && m > 3 * n - 6 {
            return None;
        }
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        Some(LrState {
            n,
            adj,
            src: vec![NONE; m],
            dst: vec![NONE; m],
            oriented: vec![false; m],
            height: vec![NONE; n],
            parent_edge: vec![None; n],
            roots: Vec::new(),
            lowpt: vec![0; m],
            lowpt2: vec![0; m],
            nesting: vec![0; m],
            out: vec![Vec::new(); n],
            refs: vec![None; m],
            side: vec![1; m],
            stack: Vec::new(),
            stack_bottom: vec![0; m],
            lowpt_edge: vec![NONE; m],
        })
    }

    fn orient(&mut self) {
        for v in 0..self.n {
            if self.height[v] == NONE {
                self.height[v] = 0;
                self.roots.push(v);
                self.dfs_orientation(v);
            }
        }
        for v in 0..self.n {
            let nesting = &self.nesting;
            self.out[v].sort_by_key(|&e| nesting[e]);
        }
    }

    fn dfs_orientation(&mut self, v: usize) {
        let parent = self.parent_edge[v];
        for k in 0..self.adj[v].len() {
            let (w, id) = self.adj[v][k];
            if self.oriented[id] {
                continue;
            }
            self.oriented[id] = true;
            self.src[id] = v;
            self.dst[id] = w;
            self.out[v].push(id);
            self.lowpt[id] = self.height[v];
            self.lowpt2[id] = self.height[v];
            if self.height[w] == NONE {
                self.parent_edge[w] = Some(id);
                self.height[w] = self.height[v] + 1;
                self.dfs_orientation(w);
            } else {
                self.lowpt[id] = self.height[w];
            }
            self.nesting[id] = 2 * self.lowpt[id] as i64;
            if self.lowpt2[id] < self.height[v] {
                self.nesting[id] += 1;
            }
            if let Some(e) = parent {
                if self.lowpt[id] < self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[id]);
                    self.lowpt[e] = self.lowpt[id];
                } else if self.lowpt[id] > self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[id]);
                } else {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[id]);
                }
            }
        }
    }

    fn test(&mut self) -> bool {
        for i in 0..self.roots.len() {
            let r = self.roots[i];
            if !self.dfs_testing(r) {
                return false;
            }
        }
        true
    }

    fn dfs_testing(&mut self, v: usize) -> bool {
        let parent = self.parent_edge[v];
        for k in 0..self.out[v].len() {
            let ei = self.out[v][k];
            let w = self.dst[ei];
            self.stack_bottom[ei] = self.stack.len();
            if self.parent_edge[w] == Some(ei) {
                if !self.dfs_testing(w) {
                    return false;
                }
            } else {
                self.lowpt_edge[ei] = ei;
                self.stack.push(ConflictPair {
                    left: Interval::default(),
                    right: Interval {
                        low: Some(ei),
                        high: Some(ei),
                    },
                });
            }
            if self.lowpt[ei] < self.height[v] {
                let e = parent.expect("non-root vertex has a parent edge");
                if k == 0 {
                    self.lowpt_edge[e] = self.lowpt_edge[ei];
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        if let Some(e) = parent {
            self.remove_back_edges(e);
        }
        true
    }

    fn conflicting(&self, iv: Interval, b: usize) -> bool {
        match iv.high {
            Some(h) => self.lowpt[h] > self.lowpt[b],
            None => false,
        }
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        match (p.left.low, p.right.low) {
            (None, Some(r)) => self.lowpt[r],
            (Some(l), None) => self.lowpt[l],
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (None, None) => unreachable!("empty conflict pair on the stack"),
        }
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::default();
        loop {
            let mut q = self.stack.pop().expect("return edges of ei are on the stack");
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let qlow = q.right.low.expect("non-empty right interval");
            if self.lowpt[qlow] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else {
                    let plow = p.right.low.expect("non-empty");
                    self.refs[plow] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.refs[qlow] = Some(self.lowpt_edge[e]);
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(&top) = self.stack.last() {
            if !(self.conflicting(top.left, ei) || self.conflicting(top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().expect("checked non-empty");
            if self.conflicting(q.right, ei) {
                q.swap();
            }
            if self.conflicting(q.right, ei) {
                return false;
            }
            if let Some(plow) = p.right.low {
                self.refs[plow] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else {
                let plow = p.left.low.expect("non-empty");
                self.refs[plow] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.src[e];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            let p = self.stack.pop().expect("checked non-empty");
            if let Some(l) = p.left.low {
                self.side[l] = -1;
            }
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.dst[h] != u {
                    break;
                }
                p.left.high = self.refs[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.refs[l] = p.right.low;
                    self.side[l] = -1;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high {
                if self.dst[h] != u {
                    break;
                }
                p.right.high = self.refs[h];
            }
            if p.right.high.is_none() {
                if let Some(r) = p.right.low {
                    self.refs[r] = p.left.low;
                    self.side[r] = -1;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < self.height[u] {
            let top = self.stack.last().expect("return edge implies a pending pair");
            let (hl, hr) = (top.left.high, top.right.high);
            self.refs[e] = match (hl, hr) {
                (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => hl,
                (Some(_), None) => hl,
                _ => hr,
            };
        }
    }

    fn sign(&mut self, e: usize) -> i64 {
        let mut chain = Vec::new();
        let mut x = e;
        while let Some(r) = self.refs[x] {
            chain.push(x);
            x = r;
        }
        let mut s = self.side[x];
        for &y in chain.iter().rev() {
            self.side[y] *= s;
            self.refs[y] = None;
            s = self.side[y];
        }
        s
    }

    fn embed(&mut self) -> Vec<Vec<usize>> {
        for e in 0..self.src.len() {
            let s = self.sign(e);
            self.nesting[e] *= s;
        }
        let mut rot = Rotation::new(self.n);
        for v in 0..self.n {
            let nesting = &self.nesting;
            self.out[v].sort_by_key(|&e| nesting[e]);
            let mut prev = None;
            for &e in &self.out[v] {
                let w = self.dst[e];
                rot.add_cw(v, w, prev);
                prev = Some(w);
            }
        }
        let mut left_ref = vec![NONE; self.n];
        let mut right_ref = vec![NONE; self.n];
        for i in 0..self.roots.len() {
            let r = self.roots[i];
            self.dfs_embedding(r, &mut rot, &mut left_ref, &mut right_ref);
        }
        rot.cyclic_orders()
    }

    fn dfs_embedding(
        &self,
        v: usize,
        rot: &mut Rotation,
        left_ref: &mut [usize],
        right_ref: &mut [usize],
    ) {
        for &ei in &self.out[v] {
            let w = self.dst[ei];
            if self.parent_edge[w] == Some(ei) {
                rot.add_first(w, v);
                left_ref[v] = w;
                right_ref[v] = w;
                self.dfs_embedding(w, rot, left_ref, right_ref);
            } else if self.side[ei] == 1 {
                rot.add_cw(w, v, Some(right_ref[w]));
            } else {
                rot.add_ccw(w, v, Some(left_ref[w]));
                left_ref[w] = v;
            }
        }
    }
}

/// Doubly linked cyclic neighbour lists, dense `n x n` storage.
struct Rotation {
    n: usize,
    cw: Vec<usize>,
    ccw: Vec<usize>,
    first: Vec<usize>,
}

impl Rotation {
    fn new(n: usize) -> Self {
        Rotation {
            n,
            cw: vec![NONE; n * n],
            ccw: vec![NONE; n * n],
            first: vec![NONE; n],
        }
    }

    fn add_cw(&mut self, start: usize, end: usize, reference: Option<usize>) {
        let n = self.n;
        match reference {
            None => {
                self.cw[start * n + end] = end;
                self.ccw[start * n + end] = end;
                self.first[start] = end;
            }
            Some(r) => {
                let cw_ref = self.cw[start * n + r];
                self.cw[start * n + r] = end;
                self.cw[start * n + end] = cw_ref;
                self.ccw[start * n + cw_ref] = end;
                self.ccw[start * n + end] = r;
            }
        }
    }

    fn add_ccw(&mut self, start: usize, end: usize, reference: Option<usize>) {
        match reference {
            None => self.add_cw(start, end, None),
            Some(r) => {
                let ccw_ref = self.ccw[start * self.n + r];
                self.add_cw(start, end, Some(ccw_ref));
                if self.first[start] == r {
                    self.first[start] = end;
                }
            }
        }
    }

    fn add_first(&mut self, start: usize, end: usize) {
        let reference = match self.first[start] {
            NONE => None,
            f => Some(f),
        };
        self.add_ccw(start, end, reference);
    }

    fn cyclic_orders(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|v| {
                let mut order = Vec::new();
                let f = self.first[v];
                if f == NONE {
                    return order;
                }
                let mut x = f;
                loop {
                    order.push(x);
                    x = self.cw[v * self.n + x];
                    if x == f {
                        break;
                    }
                }
                order
            })
            .collect()
    }
}
