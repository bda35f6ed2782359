//! Isomorphism of small labelled graphs by colour refinement plus backtracking.

use std::collections::BTreeMap;

use crate::graph::LabelledGraph;

/// Refine both graphs' vertex colourings together so that colour ids are comparable.
/// Starts from degree classes and splits by multisets of neighbour colours until stable.
fn joint_refinement(g1: &LabelledGraph, g2: &LabelledGraph) -> (Vec<usize>, Vec<usize>) {
    let mut c1: Vec<usize> = g1.degrees();
    let mut c2: Vec<usize> = g2.degrees();
    let mut classes = usize::MAX;
    loop {
        let mut palette: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let sig = |g: &LabelledGraph, c: &[usize], v: usize| {
            let mut around: Vec<usize> = g.neighbors(v).map(|w| c[w - 1]).collect();
            around.sort_unstable();
            (c[v - 1], around)
        };
        let s1: Vec<_> = (1..=g1.order()).map(|v| sig(g1, &c1, v)).collect();
        let s2: Vec<_> = (1..=g2.order()).map(|v| sig(g2, &c2, v)).collect();
        for s in s1.iter().chain(s2.iter()) {
            let next = palette.len();
            palette.entry(s.clone()).or_insert(next);
        }
        c1 = s1.iter().map(|s| palette[s]).collect();
        c2 = s2.iter().map(|s| palette[s]).collect();
        if palette.len() == classes {
            return (c1, c2);
        }
        classes = palette.len();
    }
}

/// True iff some bijection of labels maps the edges of `g1` exactly onto those of `g2`.
///
/// Exponential in the worst case; intended for graphs of a dozen vertices or so.
pub fn is_isomorphic(g1: &LabelledGraph, g2: &LabelledGraph) -> bool {
    find_isomorphism(g1, g2).is_some()
}

/// An isomorphism as `map[v - 1] = image of v`, if one exists.
pub fn find_isomorphism(g1: &LabelledGraph, g2: &LabelledGraph) -> Option<Vec<usize>> {
    let n = g1.order();
    if n != g2.order() || g1.size() != g2.size() {
        return None;
    }
    let (c1, c2) = joint_refinement(g1, g2);
    let mut h1 = c1.clone();
    let mut h2 = c2.clone();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return None;
    }
    // Map rarest colour classes first; ties broken by degree (higher first).
    let mut freq = BTreeMap::new();
    for &c in &c1 {
        *freq.entry(c).or_insert(0usize) += 1;
    }
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&v| (freq[&c1[v - 1]], std::cmp::Reverse(g1.degree(v)), v));

    let mut map = vec![0usize; n];
    let mut used = vec![false; n];
    if extend(g1, g2, &c1, &c2, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g1: &LabelledGraph,
    g2: &LabelledGraph,
    c1: &[usize],
    c2: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 1..=g2.order() {
        if used[w - 1] || c2[w - 1] != c1[v - 1] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| g1.has_edge(u, v) == g2.has_edge(map[u - 1], w));
        if !consistent {
            continue;
        }
        map[v - 1] = w;
        used[w - 1] = true;
        if extend(g1, g2, c1, c2, order, depth + 1, map, used) {
            return true;
        }
        used[w - 1] = false;
    }
    false
}

/// Number of automorphisms, by counting isomorphisms onto itself.
pub fn automorphism_count(g: &LabelledGraph) -> usize {
    let n = g.order();
    let (c, _) = joint_refinement(g, g);
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&v| (c[v - 1], v));
    let mut map = vec![0usize; n];
    let mut used = vec![false; n];
    count_extensions(g, &c, &order, 0, &mut map, &mut used)
}

fn count_extensions(
    g: &LabelledGraph,
    c: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> usize {
    if depth == order.len() {
        return 1;
    }
    let v = order[depth];
    let mut total = 0;
    for w in 1..=g.order() {
        if used[w - 1] || c[w - 1] != c[v - 1] {
            continue;
        }
        if order[..depth].iter().all(|&u| g.has_edge(u, v) == g.has_edge(map[u - 1], w)) {
            map[v - 1] = w;
            used[w - 1] = true;
            total += count_extensions(g, c, order, depth + 1, map, used);
            used[w - 1] = false;
        }
    }
    total
}

/// Injective maps `V(h) -> V(g)` sending edges to edges (copies that need not be induced).
pub fn subgraph_embedding_count(h: &LabelledGraph, g: &LabelledGraph) -> u64 {
    if h.order() > g.order() {
        return 0;
    }
    // place each vertex after as many of its neighbours as possible
    let mut order: Vec<usize> = Vec::with_capacity(h.order());
    let mut placed = vec![false; h.order() + 1];
    while order.len() < h.order() {
        let next = (1..=h.order())
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (h.neighbors(v).filter(|&u| placed[u]).count(), h.degree(v), std::cmp::Reverse(v)))
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
    }
    let mut map = vec![0usize; h.order()];
    let mut used = vec![false; g.order()];
    count_embeddings(h, g, &order, 0, &mut map, &mut used)
}

fn count_embeddings(
    h: &LabelledGraph,
    g: &LabelledGraph,
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> u64 {
    if depth == order.len() {
        return 1;
    }
    let v = order[depth];
    let mut total = 0;
    for w in 1..=g.order() {
        if used[w - 1] || g.degree(w) < h.degree(v) {
            continue;
        }
        if order[..depth].iter().all(|&u| !h.has_edge(u, v) || g.has_edge(map[u - 1], w)) {
            map[v - 1] = w;
            used[w - 1] = true;
            total += count_embeddings(h, g, order, depth + 1, map, used);
            used[w - 1] = false;
        }
    }
    total
}

/// Number of subgraphs of `g` isomorphic to `h`.
pub fn subgraph_copy_count(h: &LabelledGraph, g: &LabelledGraph) -> u64 {
    subgraph_embedding_count(h, g) / automorphism_count(h) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n);
                out.push(q);
            }
        }
        out
    }

    fn brute_force_iso(g1: &LabelledGraph, g2: &LabelledGraph) -> bool {
        g1.order() == g2.order() && permutations(g1.order()).iter().any(|p| g1.relabel(p) == *g2)
    }

    #[test]
    fn relabelled_triangle() {
        let a = LabelledGraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let b = LabelledGraph::new(3, [(1, 3), (3, 2), (2, 1)]).unwrap();
        assert!(is_isomorphic(&a, &b));
    }

    #[test]
    fn path_vs_star() {
        let p4 = LabelledGraph::path(4);
        let star = LabelledGraph::new(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        assert!(!is_isomorphic(&p4, &star));
    }

    #[test]
    fn prism_vs_k33_matches_exhaustive_bijection_search() {
        let prism = named::prism();
        let k33 = named::k33();
        assert_eq!(prism.degrees(), k33.degrees());
        assert_eq!(permutations(6).len(), 720);
        assert!(!brute_force_iso(&prism, &k33));
        assert!(!is_isomorphic(&prism, &k33));
    }

    #[test]
    fn returned_map_is_an_isomorphism() {
        let g = named::cube();
        let h = g.relabel(&[5, 3, 8, 1, 2, 7, 4, 6]);
        let map = find_isomorphism(&g, &h).unwrap();
        assert_eq!(g.relabel(&map), h);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphism_count(&named::k4()), 24);
        assert_eq!(automorphism_count(&named::prism()), 12);
        assert_eq!(automorphism_count(&named::octahedron()), 48);
        assert_eq!(automorphism_count(&named::cube()), 48);
        assert_eq!(automorphism_count(&LabelledGraph::path(4)), 2);
    }

    #[test]
    fn agrees_with_brute_force_on_all_five_vertex_pairs_from_a_sample() {
        // every graph on 5 vertices against a fixed panel
        let panel: Vec<LabelledGraph> = [0u32, 0b1011, 0b1111111, 0b1010101010, 0b0110011001]
            .iter()
            .map(|&m| from_mask(5, m))
            .collect();
        for m in 0..1u32 << 10 {
            let g = from_mask(5, m);
            for h in &panel {
                assert_eq!(is_isomorphic(&g, h), brute_force_iso(&g, h), "{g:?} vs {h:?}");
            }
        }
    }

    fn from_mask(n: usize, mask: u32) -> LabelledGraph {
        let mut edges = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if mask >> k & 1 == 1 {
                    edges.push((i + 1, j + 1));
                }
                k += 1;
            }
        }
        LabelledGraph::new(n, edges).unwrap()
    }

    #[test]
    fn subgraph_copies() {
        let k3 = LabelledGraph::complete(3);
        assert_eq!(subgraph_copy_count(&k3, &named::k4()), 4);
        assert_eq!(subgraph_copy_count(&LabelledGraph::cycle(4), &named::k4()), 3);
        assert_eq!(subgraph_copy_count(&k3, &named::octahedron()), 8);
        assert_eq!(subgraph_copy_count(&named::k4(), &named::octahedron()), 0);
        assert_eq!(subgraph_copy_count(&LabelledGraph::empty(1), &named::prism()), 6);
        let g = named::k5_minus_edge();
        // an injective map of four points extends to exactly one permutation of five
        let brute = permutations(5)
            .iter()
            .filter(|p| (0..4).all(|a| (a + 1..4).all(|b| g.has_edge(p[a], p[b]))))
            .count() as u64;
        assert_eq!(subgraph_embedding_count(&named::k4(), &g), brute);
        assert_eq!(subgraph_copy_count(&named::k4(), &g), 2);
    }
}
