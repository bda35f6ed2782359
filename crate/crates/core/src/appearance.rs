//! Appearances of a pattern: induced copies hanging off the rest of the graph by a
//! single cut-edge at their least vertex, and 2-appearances attached by two
//! disjoint edges.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{edge, Edge, LabelledGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppearanceError {
    #[error("pattern on {pattern} vertices needs a host with more vertices, got {graph}")]
    PatternTooLarge { pattern: usize, graph: usize },
    #[error("pattern has no vertices")]
    EmptyPattern,
    #[error("2-appearance patterns must be connected")]
    DisconnectedPattern,
}

/// `H` appears at `w`: the increasing map `1..=h -> w` is an isomorphism onto `G[w]`
/// and `cut_edge = (root, v)` is the only edge leaving `w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppearanceRecord {
    #[serde(rename = "W")]
    pub w: Vec<usize>,
    pub root: usize,
    /// Oriented as `(root, outside vertex)`.
    pub cut_edge: (usize, usize),
    pub total_edge_set: Vec<Edge>,
    /// Both cut-edge endpoints have degree above the `d` used in the search.
    pub cutable: bool,
}

impl AppearanceRecord {
    pub fn outside(&self) -> usize {
        self.cut_edge.1
    }
}

/// `J` 2-appears at `w` with boundary edges `e1 = (r1, v1)` and `e2 = (r2, v2)`,
/// `r1 < r2` inside `w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoAppearanceRecord {
    #[serde(rename = "W")]
    pub w: Vec<usize>,
    pub e1: (usize, usize),
    pub e2: (usize, usize),
}

/// Vertices reachable from `s` without using any edge in `skip`, sorted.
fn reach(g: &LabelledGraph, s: usize, skip: &[Edge], limit: usize) -> Vec<usize> {
    let mut seen = vec![false; g.order() + 1];
    seen[s] = true;
    let mut out = vec![s];
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        i += 1;
        for y in g.neighbors(x) {
            if !seen[y] && !skip.contains(&edge(x, y)) {
                seen[y] = true;
                out.push(y);
                if out.len() > limit {
                    return out;
                }
            }
        }
    }
    out.sort_unstable();
    out
}

fn check_sizes(g: &LabelledGraph, h: &LabelledGraph) -> Result<(), AppearanceError> {
    if h.order() == 0 {
        return Err(AppearanceError::EmptyPattern);
    }
    if h.order() >= g.order() {
        return Err(AppearanceError::PatternTooLarge {
            pattern: h.order(),
            graph: g.order(),
        });
    }
    Ok(())
}

/// Every appearance of `h` in `g`, sorted by vertex set, each flagged cut-able against `d`.
pub fn find_appearances(
    g: &LabelledGraph,
    h: &LabelledGraph,
    d: usize,
) -> Result<Vec<AppearanceRecord>, AppearanceError> {
    check_sizes(g, h)?;
    let k = h.order();
    let blocks = g.components().blocks;
    let mut out = Vec::new();
    for r in 1..=g.order() {
        for v in g.neighbors(r) {
            let side = reach(g, r, &[edge(r, v)], k);
            if side.len() > k || side.binary_search(&v).is_ok() || side[0] < r {
                continue;
            }
            // whole components lying above the root may complete W
            let extra: Vec<&Vec<usize>> = blocks
                .iter()
                .filter(|b| b[0] > r && b.len() <= k - side.len())
                .collect();
            let mut chosen = Vec::new();
            choose_blocks(&extra, 0, k - side.len(), &mut chosen, &mut |picked| {
                let mut w = side.clone();
                for b in picked {
                    w.extend_from_slice(b);
                }
                w.sort_unstable();
                if g.induced(&w) == *h {
                    let mut total_edge_set: Vec<Edge> = h
                        .edges()
                        .into_iter()
                        .map(|(a, b)| (w[a - 1], w[b - 1]))
                        .collect();
                    total_edge_set.push(edge(r, v));
                    total_edge_set.sort_unstable();
                    out.push(AppearanceRecord {
                        cutable: g.degree(r).min(g.degree(v)) > d,
                        w,
                        root: r,
                        cut_edge: (r, v),
                        total_edge_set,
                    });
                }
            });
        }
    }
    out.sort_by(|a, b| a.w.cmp(&b.w));
    Ok(out)
}

fn choose_blocks<'a>(
    blocks: &[&'a Vec<usize>],
    from: usize,
    need: usize,
    chosen: &mut Vec<&'a Vec<usize>>,
    f: &mut impl FnMut(&[&Vec<usize>]),
) {
    if need == 0 {
        f(chosen);
        return;
    }
    for i in from..blocks.len() {
        if blocks[i].len() <= need {
            chosen.push(blocks[i]);
            choose_blocks(blocks, i + 1, need - blocks[i].len(), chosen, f);
            chosen.pop();
        }
    }
}

/// `f_H(G)`: the number of cut-able appearances.
pub fn cutable_count(g: &LabelledGraph, h: &LabelledGraph, d: usize) -> Result<usize, AppearanceError> {
    Ok(find_appearances(g, h, d)?.iter().filter(|a| a.cutable).count())
}

/// Every 2-appearance of the connected pattern `j` in `g`, sorted by vertex set.
pub fn find_two_appearances(
    g: &LabelledGraph,
    j: &LabelledGraph,
) -> Result<Vec<TwoAppearanceRecord>, AppearanceError> {
    check_sizes(g, j)?;
    if !j.is_connected() {
        return Err(AppearanceError::DisconnectedPattern);
    }
    let k = j.order();
    let edges = g.edges();
    let mut out = Vec::new();
    for (i, &f1) in edges.iter().enumerate() {
        for &f2 in &edges[i + 1..] {
            if f1.0 == f2.0 || f1.0 == f2.1 || f1.1 == f2.0 || f1.1 == f2.1 {
                continue;
            }
            for (a, b) in [(f1.0, f1.1), (f1.1, f1.0)] {
                let w = reach(g, a, &[f1, f2], k);
                if w.len() != k || w.binary_search(&b).is_ok() {
                    continue;
                }
                let (c, e) = match (w.binary_search(&f2.0).is_ok(), w.binary_search(&f2.1).is_ok()) {
                    (true, false) => (f2.0, f2.1),
                    (false, true) => (f2.1, f2.0),
                    _ => continue,
                };
                if g.has_edge(b, e) || g.induced(&w) != *j {
                    continue;
                }
                let (e1, e2) = if a < c { ((a, b), (c, e)) } else { ((c, e), (a, b)) };
                out.push(TwoAppearanceRecord { w, e1, e2 });
            }
        }
    }
    out.sort_by(|x, y| x.w.cmp(&y.w));
    Ok(out)
}
