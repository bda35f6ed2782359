use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::PlanarityError;
use crate::graph::LabelledGraph;

pub const MAX_CYCLE_LENGTH: usize = 8;

/// Number of distinct cycles of each length `3..=L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleReport {
    pub by_length: BTreeMap<usize, u64>,
    pub total: u64,
}

impl CycleReport {
    fn from_counts(counts: &[u64], max_len: usize) -> Self {
        let by_length: BTreeMap<usize, u64> = (3..=max_len).map(|l| (l, counts[l])).collect();
        let total = by_length.values().sum();
        CycleReport { by_length, total }
    }
}

fn check_cap(max_len: usize) -> Result<(), PlanarityError> {
    if (3..=MAX_CYCLE_LENGTH).contains(&max_len) {
        Ok(())
    } else {
        Err(PlanarityError::CycleLengthCap(max_len))
    }
}

/// Count cycles of length at most `max_len` (itself at most 8).
///
/// Each cycle is found from its least vertex in both directions, so raw counts are halved.
pub fn count_short_cycles(g: &LabelledGraph, max_len: usize) -> Result<CycleReport, PlanarityError> {
    check_cap(max_len)?;
    let adj: Vec<Vec<usize>> = (1..=g.order())
        .map(|v| g.neighbors(v).map(|w| w - 1).collect())
        .collect();
    let mut counts = vec![0u64; max_len + 1];
    let mut on_path = vec![false; g.order()];
    for s in 0..g.order() {
        on_path[s] = true;
        walk(&adj, s, s, 1, max_len, &mut on_path, &mut |len| counts[len] += 1);
        on_path[s] = false;
    }
    for c in counts.iter_mut() {
        *c /= 2;
    }
    Ok(CycleReport::from_counts(&counts, max_len))
}

fn walk(
    adj: &[Vec<usize>],
    start: usize,
    at: usize,
    len: usize,
    max_len: usize,
    on_path: &mut [bool],
    hit: &mut impl FnMut(usize),
) {
    for &w in &adj[at] {
        if w == start {
            if len >= 3 {
                hit(len);
            }
        } else if w > start && !on_path[w] && len < max_len {
            on_path[w] = true;
            walk(adj, start, w, len + 1, max_len, on_path, hit);
            on_path[w] = false;
        }
    }
}

/// Total cycles of length `3..=max_len` for a graph given by bitset rows (`n <= 64`).
pub(crate) fn count_cycles_rows(rows: &[u64], max_len: usize) -> u64 {
    fn rec(rows: &[u64], start: usize, at: usize, used: u64, len: usize, max_len: usize) -> u64 {
        let mut total = 0;
        if len >= 3 && rows[at] >> start & 1 == 1 {
            total += 1;
        }
        if len == max_len {
            return total;
        }
        // only vertices above `start`, not yet on the path
        let mut cand = rows[at] & !used & (u64::MAX << start << 1);
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            total += rec(rows, start, w, used | 1 << w, len + 1, max_len);
        }
        total
    }
    let mut total = 0;
    for s in 0..rows.len() {
        total += rec(rows, s, s, 1 << s, 1, max_len);
    }
    total / 2
}

/// Every cycle of length `3..=max_len` as a vertex sequence that starts at its least
/// vertex and continues to the smaller of that vertex's two cycle neighbours.
pub fn short_cycles(g: &LabelledGraph, max_len: usize) -> Result<Vec<Vec<usize>>, PlanarityError> {
    check_cap(max_len)?;
    let mut out = Vec::new();
    let mut path = Vec::new();
    for s in 1..=g.order() {
        path.push(s);
        collect(g, s, max_len, &mut path, &mut out);
        path.pop();
    }
    Ok(out)
}

fn collect(g: &LabelledGraph, s: usize, max_len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let at = *path.last().expect("non-empty path");
    for w in g.neighbors(at) {
        if w == s && path.len() >= 3 && path[1] < path[path.len() - 1] {
            out.push(path.clone());
        } else if w > s && !path.contains(&w) && path.len() < max_len {
            path.push(w);
            collect(g, s, max_len, path, out);
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    /// Count cycles by vertex subset: for each subset of size `m`, count Hamiltonian
    /// cycles of the induced subgraph through permutations fixing the least vertex.
    fn subset_oracle(g: &LabelledGraph, max_len: usize) -> BTreeMap<usize, u64> {
        let n = g.order();
        let mut out: BTreeMap<usize, u64> = (3..=max_len).map(|l| (l, 0)).collect();
        for mask in 0u32..1 << n {
            let m = mask.count_ones() as usize;
            if !(3..=max_len).contains(&m) {
                continue;
            }
            let verts: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            let mut rest = verts[1..].to_vec();
            let mut directed = 0u64;
            permute(&mut rest, 0, &mut |p| {
                let mut ok = g.has_edge(verts[0], p[0]) && g.has_edge(p[p.len() - 1], verts[0]);
                ok &= p.windows(2).all(|w| g.has_edge(w[0], w[1]));
                if ok {
                    directed += 1;
                }
            });
            *out.get_mut(&m).unwrap() += directed / 2;
        }
        out
    }

    fn permute(items: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            f(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, f);
            items.swap(k, i);
        }
    }

    fn rows_of(g: &LabelledGraph) -> Vec<u64> {
        (1..=g.order())
            .map(|v| g.neighbors(v).fold(0u64, |acc, w| acc | 1 << (w - 1)))
            .collect()
    }

    #[test]
    fn k4_has_four_triangles_and_three_quadrilaterals() {
        let oracle = subset_oracle(&named::k4(), 6);
        assert_eq!(oracle[&3], 4);
        assert_eq!(oracle[&4], 3);
        let r = count_short_cycles(&named::k4(), 6).unwrap();
        assert_eq!(r.by_length[&3], 4);
        assert_eq!(r.by_length[&4], 3);
        assert_eq!(r.total, 7);
    }

    #[test]
    fn trees_and_single_cycles() {
        let tree = LabelledGraph::new(6, [(1, 2), (1, 3), (3, 4), (3, 5), (5, 6)]).unwrap();
        assert_eq!(count_short_cycles(&tree, 6).unwrap().total, 0);
        assert_eq!(count_short_cycles(&LabelledGraph::cycle(5), 6).unwrap().total, 1);
        assert_eq!(count_short_cycles(&LabelledGraph::cycle(7), 6).unwrap().total, 0);
    }

    #[test]
    fn matches_subset_oracle_on_named_graphs() {
        for g in [named::prism(), named::octahedron(), named::cube(), named::k5_minus_edge(), LabelledGraph::complete(6)] {
            for l in 3..=6 {
                let oracle = subset_oracle(&g, l);
                let r = count_short_cycles(&g, l).unwrap();
                assert_eq!(r.by_length, oracle, "{g:?} L={l}");
                assert_eq!(count_cycles_rows(&rows_of(&g), l), r.total);
                assert_eq!(short_cycles(&g, l).unwrap().len() as u64, r.total);
            }
        }
    }

    #[test]
    fn listed_cycles_are_genuine() {
        let g = named::octahedron();
        for c in short_cycles(&g, 6).unwrap() {
            let mut sorted = c.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), c.len());
            assert_eq!(c[0], sorted[0]);
            for i in 0..c.len() {
                assert!(g.has_edge(c[i], c[(i + 1) % c.len()]));
            }
        }
    }

    #[test]
    fn length_cap_enforced() {
        assert_eq!(
            count_short_cycles(&named::k4(), 9),
            Err(PlanarityError::CycleLengthCap(9))
        );
        assert!(count_short_cycles(&named::k4(), 2).is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = count_short_cycles(&named::k4(), 4).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"by_length":{"3":4,"4":3},"total":7}"#
        );
    }
}
