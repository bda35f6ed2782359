//! Bounded search for planar graphs with a prescribed degree for every vertex,
//! grown from a fixed base graph by adding edges only.

use crate::graph::LabelledGraph;
use crate::planarity::lr::lr_is_planar;

/// Largest order the completion search accepts.
pub const SEARCH_CAP: usize = 16;

struct Completion<'a> {
    n: usize,
    targets: &'a [usize],
    /// Vertices at or above this index that are still isolated are interchangeable.
    fresh_start: usize,
    adj: Vec<u32>,
    deg: Vec<usize>,
}

impl Completion<'_> {
    fn planar(&self) -> bool {
        let mut edges = Vec::new();
        for u in 0..self.n {
            let mut higher = self.adj[u] & !((2u32 << u) - 1);
            while higher != 0 {
                let w = higher.trailing_zeros() as usize;
                higher &= higher - 1;
                edges.push((u, w));
            }
        }
        lr_is_planar(self.n, &edges)
    }

    fn link(&mut self, u: usize, w: usize, on: bool) {
        if on {
            self.adj[u] |= 1 << w;
            self.adj[w] |= 1 << u;
            self.deg[u] += 1;
            self.deg[w] += 1;
        } else {
            self.adj[u] &= !(1 << w);
            self.adj[w] &= !(1 << u);
            self.deg[u] -= 1;
            self.deg[w] -= 1;
        }
    }

    fn solve(&mut self) -> bool {
        let Some(v) = (0..self.n).find(|&v| self.deg[v] < self.targets[v]) else {
            return true;
        };
        let need = self.targets[v] - self.deg[v];
        let open = |w: usize| w != v && self.deg[w] < self.targets[w] && self.adj[v] >> w & 1 == 0;
        let mut used: Vec<usize> = Vec::new();
        let mut fresh: Vec<usize> = Vec::new();
        for w in 0..self.n {
            if !open(w) {
                continue;
            }
            if w >= self.fresh_start && self.deg[w] == 0 {
                fresh.push(w);
            } else {
                used.push(w);
            }
        }
        // any `j` fresh vertices are as good as the first `j`
        for j in 0..=need.min(fresh.len()) {
            if need - j > used.len() {
                continue;
            }
            let mut pick = Vec::with_capacity(need);
            pick.extend_from_slice(&fresh[..j]);
            if self.choose(v, &used, 0, need - j, &mut pick) {
                return true;
            }
        }
        false
    }

    fn choose(&mut self, v: usize, pool: &[usize], from: usize, left: usize, pick: &mut Vec<usize>) -> bool {
        if left == 0 {
            for &w in pick.iter() {
                self.link(v, w, true);
            }
            let ok = self.planar() && self.solve();
            if !ok {
                for &w in pick.iter() {
                    self.link(v, w, false);
                }
            }
            return ok;
        }
        for i in from..pool.len() {
            if pool.len() - i < left {
                break;
            }
            pick.push(pool[i]);
            if self.choose(v, pool, i + 1, left - 1, pick) {
                return true;
            }
            pick.pop();
        }
        false
    }
}

/// A planar supergraph of `base` on the same vertices in which vertex `v` has degree
/// `targets[v - 1]`, found by adding edges. Isolated vertices with label at least
/// `fresh_start` must share one target; they are treated as interchangeable.
pub fn complete_to_degrees(base: &LabelledGraph, targets: &[usize], fresh_start: usize) -> Option<LabelledGraph> {
    let n = base.order();
    assert!(n <= SEARCH_CAP && targets.len() == n);
    if (1..=n).any(|v| base.degree(v) > targets[v - 1]) {
        return None;
    }
    let deficit: usize = (1..=n).map(|v| targets[v - 1] - base.degree(v)).sum();
    if deficit % 2 == 1 {
        return None;
    }
    let mut adj = vec![0u32; n];
    for (u, v) in base.edges() {
        adj[u - 1] |= 1 << (v - 1);
        adj[v - 1] |= 1 << (u - 1);
    }
    let mut state = Completion {
        n,
        targets,
        fresh_start: fresh_start.saturating_sub(1),
        adj,
        deg: base.degrees(),
    };
    if !state.planar() || !state.solve() {
        return None;
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for w in u + 1..n {
            if state.adj[u] >> w & 1 == 1 {
                edges.push((u + 1, w + 1));
            }
        }
    }
    Some(LabelledGraph::new(n, edges).expect("search produces a simple graph"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planarity::is_planar;

    #[test]
    fn cubic_completion_of_nothing_is_k4() {
        let g = complete_to_degrees(&LabelledGraph::empty(4), &[3; 4], 1).unwrap();
        assert_eq!(g, LabelledGraph::complete(4));
        assert!(complete_to_degrees(&LabelledGraph::empty(5), &[3; 5], 1).is_none());
    }

    #[test]
    fn quartic_on_six_is_an_octahedron() {
        let g = complete_to_degrees(&LabelledGraph::empty(6), &[4; 6], 1).unwrap();
        assert!(g.degrees().iter().all(|&x| x == 4) && is_planar(&g));
        // K3,3 cannot be completed: it is already nonplanar
        let k33 = crate::graph::named::k33();
        assert!(complete_to_degrees(&k33, &[3; 6], 7).is_none());
    }

    #[test]
    fn near_cubic_needs_five_vertices() {
        let mut t = vec![3; 5];
        t[0] = 2;
        let g = complete_to_degrees(&LabelledGraph::empty(5), &t, 2).unwrap();
        assert_eq!(g.degree(1), 2);
        assert!((2..=5).all(|v| g.degree(v) == 3) && is_planar(&g));
    }
}
