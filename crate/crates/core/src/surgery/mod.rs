//! Graph rewrites between degree-window classes. Every rewrite returns a fresh graph
//! and a [`SurgeryTrace`] that replays or undoes it; planarity of the result is
//! always re-checked.

pub mod closure;
mod gadgets;
pub mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use gadgets::{
    extend_to_regular, four_regular_supergraph_search, gadget_library, near_regular_gadget,
    replace_edge_with_gadget, Gadget, GadgetLibrary, FOUR_REGULAR_SEARCH_CAP,
};

use crate::appearance::{AppearanceRecord, TwoAppearanceRecord};
use crate::graph::{edge, in_class, ClassSpec, Edge, GraphError, LabelledGraph};
use crate::planarity::is_planar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("input graph is not in {0}")]
    InputNotInClass(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("rewrite produced a nonplanar graph")]
    Nonplanar,
    #[error("no gadget for maximum degree {0}")]
    UnsupportedDegree(usize),
    #[error("D = 4 admits no planar graph that is 4-regular except for one vertex of degree 3 (odd degree sum)")]
    ParityObstruction,
    #[error("search cap {cap} exceeded: n_max = {requested}")]
    SearchCap { requested: usize, cap: usize },
}

fn precondition<T>(msg: impl Into<String>) -> Result<T, SurgeryError> {
    Err(SurgeryError::Precondition(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    MergeA,
    MergeB,
    MergeC,
    AttachFree,
    AttachCycle,
    Detach,
    DetachComplete,
    TwoDetach,
    Gadget,
}

/// Edges removed and added by a rewrite, plus any vertices appended (labels above the
/// input order) before the edits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryTrace {
    pub deleted: Vec<Edge>,
    pub inserted: Vec<Edge>,
    pub case: CaseTag,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub added_vertices: usize,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

impl SurgeryTrace {
    fn new(deleted: Vec<Edge>, inserted: Vec<Edge>, case: CaseTag, added_vertices: usize) -> Self {
        let norm = |v: Vec<Edge>| {
            let mut v: Vec<Edge> = v.into_iter().map(|(a, b)| edge(a, b)).collect();
            v.sort_unstable();
            v
        };
        SurgeryTrace {
            deleted: norm(deleted),
            inserted: norm(inserted),
            case,
            added_vertices,
        }
    }

    /// Replay on the input graph.
    pub fn apply(&self, g: &LabelledGraph) -> Result<LabelledGraph, GraphError> {
        g.with_extra_vertices(self.added_vertices)
            .with_edits(&self.deleted, &self.inserted)
    }

    /// Undo on the output graph, recovering the input exactly.
    pub fn invert(&self, out: &LabelledGraph) -> Result<LabelledGraph, GraphError> {
        let back = out.with_edits(&self.inserted, &self.deleted)?;
        let keep = out.order() - self.added_vertices;
        if (keep + 1..=out.order()).any(|v| back.degree(v) > 0) {
            return Err(GraphError::InvalidSpec("appended vertices still carry edges".into()));
        }
        Ok(back.induced(&(1..=keep).collect::<Vec<_>>()))
    }

    /// The trace with the roles of deleted and inserted exchanged.
    pub fn inverse(&self) -> SurgeryTrace {
        SurgeryTrace {
            deleted: self.inserted.clone(),
            inserted: self.deleted.clone(),
            case: self.case,
            added_vertices: 0,
        }
    }
}

fn require_in_class(g: &LabelledGraph, spec: &ClassSpec) -> Result<(), SurgeryError> {
    if in_class(g, spec)? {
        Ok(())
    } else {
        Err(SurgeryError::InputNotInClass(spec.to_string()))
    }
}

fn finish(
    g: &LabelledGraph,
    trace: SurgeryTrace,
    target: &ClassSpec,
) -> Result<(LabelledGraph, SurgeryTrace), SurgeryError> {
    let out = trace.apply(g)?;
    if !is_planar(&out) {
        return Err(SurgeryError::Nonplanar);
    }
    if !target.degrees_fit(&out) {
        return precondition(format!("result leaves the degree window of {target}"));
    }
    Ok((out, trace))
}

/// Whether `uv` lies on a cycle of length at most `max_len` through vertices that all
/// satisfy `allowed`.
pub fn edge_on_short_cycle(
    g: &LabelledGraph,
    u: usize,
    v: usize,
    max_len: usize,
    allowed: impl Fn(usize) -> bool,
) -> bool {
    if !g.has_edge(u, v) || !allowed(u) || !allowed(v) {
        return false;
    }
    let mut dist = vec![usize::MAX; g.order() + 1];
    dist[u] = 0;
    let mut queue = std::collections::VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        if dist[x] + 1 >= max_len {
            continue;
        }
        for y in g.neighbors(x) {
            if dist[y] != usize::MAX || !allowed(y) || (x == u && y == v) {
                continue;
            }
            if y == v {
                return true;
            }
            dist[y] = dist[x] + 1;
            queue.push_back(y);
        }
    }
    false
}

/// Choices for [`merge_components`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum MergeArgs {
    /// Join `u` and `v` (different components, both of degree below `D`).
    A { u: usize, v: usize },
    /// Delete `uv` (on a cycle of length at most 6) and `wx` (another component),
    /// insert `uw` and `xv`.
    B { u: usize, v: usize, w: usize, x: usize },
    /// Isolated `w`: delete `uv` (on a cycle), insert `uw` and `vw`.
    C { u: usize, v: usize, w: usize },
}

/// Merge two components of a graph in `spec`, leaving it in `spec` with one fewer component.
pub fn merge_components(
    g: &LabelledGraph,
    spec: &ClassSpec,
    args: MergeArgs,
) -> Result<(LabelledGraph, SurgeryTrace), SurgeryError> {
    require_in_class(g, spec)?;
    let parts = g.components();
    if parts.count() < 2 {
        return precondition("graph must have at least two components");
    }
    let comp = |v: usize| parts.block_of(v);
    let labels_ok = |vs: &[usize]| vs.iter().all(|&x| (1..=g.order()).contains(&x));
    let trace = match args {
        MergeArgs::A { u, v } => {
            if !labels_ok(&[u, v]) || comp(u) == comp(v) {
                return precondition("endpoints must lie in different components");
            }
            if g.degree(u) >= spec.max_deg || g.degree(v) >= spec.max_deg {
                return precondition("both endpoints need degree below D");
            }
            SurgeryTrace::new(vec![], vec![(u, v)], CaseTag::MergeA, 0)
        }
        MergeArgs::B { u, v, w, x } => {
            if !labels_ok(&[u, v, w, x]) {
                return precondition("label out of range");
            }
            if !edge_on_short_cycle(g, u, v, 6, |_| true) {
                return precondition(format!("{u}-{v} is not on a cycle of length at most 6"));
            }
            if comp(w) == comp(u) {
                return precondition("w must lie in a different component from uv");
            }
            if !g.has_edge(w, x) {
                return precondition(format!("{w}-{x} is not an edge"));
            }
            SurgeryTrace::new(vec![(u, v), (w, x)], vec![(u, w), (x, v)], CaseTag::MergeB, 0)
        }
        MergeArgs::C { u, v, w } => {
            if !labels_ok(&[u, v, w]) {
                return precondition("label out of range");
            }
            if g.degree(w) != 0 {
                return precondition("w must be an isolated vertex");
            }
            if spec.max_deg < 3 {
                return precondition("case (c) needs D >= 3");
            }
            if !edge_on_short_cycle(g, u, v, g.order(), |_| true) {
                return precondition(format!("{u}-{v} is not on a cycle"));
            }
            SurgeryTrace::new(vec![(u, v)], vec![(u, w), (v, w)], CaseTag::MergeC, 0)
        }
    };
    finish(g, trace, spec)
}

/// Where a new block is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum AttachTarget {
    /// Insert `r_B v` for a vertex `v` of degree below `D`.
    Free { v: usize },
    /// Delete the cycle edge `uv` and insert `r_B v`.
    Cycle { u: usize, v: usize },
}

/// Add a copy of `h` on labels `|G|+1..=|G|+|H|` (increasing bijection) and hang it off
/// `g`, creating a cut-able appearance of `h`. `spec` is the class of the output, on
/// `|G| + |H|` vertices; `g` must lie in the same window on its own order.
pub fn attach_appearance(
    g: &LabelledGraph,
    spec: &ClassSpec,
    h: &LabelledGraph,
    target: AttachTarget,
) -> Result<(LabelledGraph, SurgeryTrace), SurgeryError> {
    let (n, k) = (g.order(), h.order());
    if spec.n != n + k {
        return Err(GraphError::OrderMismatch {
            graph: n + k,
            spec: spec.n,
        }
        .into());
    }
    require_in_class(g, &spec.with_order(n))?;
    if k == 0 {
        return precondition("pattern has no vertices");
    }
    if h.max_degree() > spec.max_deg {
        return precondition("pattern has a vertex of degree above D");
    }
    if h.min_degree() < spec.min_deg {
        return precondition("pattern has a vertex of degree below d");
    }
    if h.degree(1) + 1 > spec.max_deg {
        return precondition("root of the pattern has no spare degree");
    }
    let root = n + 1;
    let mut inserted: Vec<Edge> = h.edges().into_iter().map(|(a, b)| (a + n, b + n)).collect();
    let (deleted, case) = match target {
        AttachTarget::Free { v } => {
            if !(1..=n).contains(&v) || g.degree(v) >= spec.max_deg {
                return precondition("v_B needs degree below D");
            }
            inserted.push((root, v));
            (vec![], CaseTag::AttachFree)
        }
        AttachTarget::Cycle { u, v } => {
            if !(1..=n).contains(&u) || !(1..=n).contains(&v) {
                return precondition("label out of range");
            }
            if !edge_on_short_cycle(g, u, v, 6, |x| g.degree(x) > spec.min_deg) {
                return precondition(format!(
                    "{u}-{v} is not on a cycle of length at most 6 through vertices of degree above d"
                ));
            }
            inserted.push((root, v));
            (vec![(u, v)], CaseTag::AttachCycle)
        }
    };
    finish(g, SurgeryTrace::new(deleted, inserted, case, k), spec)
}

fn boundary_edges(g: &LabelledGraph, w: &[usize]) -> Vec<(usize, usize)> {
    w.iter()
        .flat_map(|&x| g.neighbors(x).filter(|y| w.binary_search(y).is_err()).map(move |y| (x, y)))
        .collect()
}

/// Delete the cut-edge of a cut-able appearance, splitting its block off as a component.
/// With `completion`, also insert that pair inside the block.
pub fn detach_appearance(
    g: &LabelledGraph,
    spec: &ClassSpec,
    app: &AppearanceRecord,
    completion: Option<Edge>,
) -> Result<(LabelledGraph, SurgeryTrace), SurgeryError> {
    require_in_class(g, spec)?;
    let mut w = app.w.clone();
    w.sort_unstable();
    if w.is_empty() || w[0] != app.root || app.cut_edge.0 != app.root {
        return precondition("record root must be the least vertex of W and carry the cut-edge");
    }
    if boundary_edges(g, &w) != vec![app.cut_edge] {
        return precondition("the cut-edge must be the only edge leaving W");
    }
    let (r, v) = app.cut_edge;
    if g.degree(r).min(g.degree(v)) <= spec.min_deg {
        return precondition(format!("appearance is not cut-able for d = {}", spec.min_deg));
    }
    let (inserted, case) = match completion {
        None => (vec![], CaseTag::Detach),
        Some((a, b)) => {
            if w.binary_search(&a).is_err() || w.binary_search(&b).is_err() || a == b {
                return precondition("completion edge must join two vertices of W");
            }
            if g.has_edge(a, b) {
                let (a, b) = edge(a, b);
                return Err(GraphError::DuplicateEdge(a, b).into());
            }
            (vec![(a, b)], CaseTag::DetachComplete)
        }
    };
    finish(g, SurgeryTrace::new(vec![(r, v)], inserted, case, 0), spec)
}

/// Replace the boundary edges `r1v1`, `r2v2` of a 2-appearance in a `D`-regular graph by
/// `v1v2` and `r1r2`, closing the block off as a component.
pub fn two_appearance_detach(
    g: &LabelledGraph,
    spec: &ClassSpec,
    rec: &TwoAppearanceRecord,
) -> Result<(LabelledGraph, SurgeryTrace), SurgeryError> {
    if spec.min_deg != spec.max_deg {
        return precondition("the class must be D-regular (d = D)");
    }
    require_in_class(g, spec)?;
    let mut w = rec.w.clone();
    w.sort_unstable();
    let ((r1, v1), (r2, v2)) = (rec.e1, rec.e2);
    let mut boundary = boundary_edges(g, &w);
    boundary.sort_unstable();
    let mut expected = vec![(r1, v1), (r2, v2)];
    expected.sort_unstable();
    if boundary != expected || r1 == r2 || v1 == v2 {
        return precondition("W must have exactly the two disjoint boundary edges of the record");
    }
    if g.has_edge(v1, v2) {
        return precondition(format!("{v1} and {v2} are adjacent"));
    }
    if g.has_edge(r1, r2) {
        return precondition(format!("{r1} and {r2} are adjacent"));
    }
    let trace = SurgeryTrace::new(vec![(r1, v1), (r2, v2)], vec![(v1, v2), (r1, r2)], CaseTag::TwoDetach, 0);
    finish(g, trace, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appearance::{find_appearances, find_two_appearances};
    use crate::graph::named;
    use crate::iso::is_isomorphic;

    fn spec(n: usize, d: usize, max_deg: usize) -> ClassSpec {
        ClassSpec::new(n, d, max_deg).unwrap()
    }

    fn two_triangles() -> LabelledGraph {
        LabelledGraph::complete(3).disjoint_union(&LabelledGraph::complete(3))
    }

    #[test]
    fn merge_case_a() {
        let g = two_triangles();
        let (out, trace) = merge_components(&g, &spec(6, 2, 3), MergeArgs::A { u: 1, v: 4 }).unwrap();
        assert!(out.is_connected());
        assert!(out.degrees().iter().all(|&x| (2..=3).contains(&x)));
        assert_eq!(trace.inserted, vec![(1, 4)]);
        assert_eq!(trace.invert(&out).unwrap(), g);
        assert!(merge_components(&g, &spec(6, 2, 3), MergeArgs::A { u: 1, v: 2 }).is_err());
        assert!(merge_components(&g, &spec(6, 2, 2), MergeArgs::A { u: 1, v: 4 }).is_err());
    }

    #[test]
    fn merge_case_c() {
        let g = LabelledGraph::complete(3).with_extra_vertices(1);
        let (out, trace) = merge_components(&g, &spec(4, 0, 3), MergeArgs::C { u: 1, v: 2, w: 4 }).unwrap();
        assert_eq!(out, LabelledGraph::new(4, [(1, 3), (2, 3), (1, 4), (2, 4)]).unwrap());
        assert!(out.degrees().iter().all(|&x| x == 2));
        assert_eq!(trace.case, CaseTag::MergeC);
        assert_eq!(trace.invert(&out).unwrap(), g);
    }

    #[test]
    fn merge_case_b() {
        let g = named::k4().disjoint_union(&named::k4());
        let s = spec(8, 3, 3);
        let (out, trace) = merge_components(&g, &s, MergeArgs::B { u: 5, v: 6, w: 1, x: 2 }).unwrap();
        assert!(in_class(&out, &s).unwrap());
        assert!(out.is_connected());
        assert_eq!(out.degrees(), g.degrees());
        assert!(out.distance(5, 6).unwrap() <= 5);
        assert_eq!(trace.invert(&out).unwrap(), g);
    }

    #[test]
    fn attach_free_mode() {
        let s = spec(7, 0, 4);
        let (out, trace) = attach_appearance(&named::k4(), &s, &LabelledGraph::complete(3), AttachTarget::Free { v: 1 }).unwrap();
        assert!(in_class(&out, &s).unwrap());
        let apps = find_appearances(&out, &LabelledGraph::complete(3), 0).unwrap();
        assert!(apps.iter().any(|a| a.w == vec![5, 6, 7] && a.cutable));
        assert_eq!(trace.added_vertices, 3);
        assert_eq!(trace.invert(&out).unwrap(), named::k4());

        let err = attach_appearance(
            &named::octahedron(),
            &spec(9, 2, 4),
            &LabelledGraph::complete(3),
            AttachTarget::Free { v: 1 },
        );
        assert!(matches!(err, Err(SurgeryError::Precondition(_))));
    }

    #[test]
    fn attach_cycle_mode() {
        let s = spec(10, 3, 4);
        let oct = named::octahedron();
        let (out, _) = attach_appearance(&oct, &s, &named::k4(), AttachTarget::Cycle { u: 1, v: 3 }).unwrap();
        assert!(in_class(&out, &s).unwrap());
        let apps = find_appearances(&out, &named::k4(), 3).unwrap();
        assert!(apps.iter().any(|a| a.w == vec![7, 8, 9, 10] && a.cutable));

        // a triangle has degree-2 vertices, below d = 3
        let err = attach_appearance(&oct, &spec(9, 3, 4), &LabelledGraph::complete(3), AttachTarget::Cycle { u: 1, v: 3 });
        assert!(err.is_err());
    }

    fn k4_with_pendant_triangle() -> LabelledGraph {
        named::k4()
            .disjoint_union(&LabelledGraph::complete(3))
            .with_edits(&[], &[(1, 5)])
            .unwrap()
    }

    #[test]
    fn detach_examples() {
        let g = k4_with_pendant_triangle();
        let s = spec(7, 0, 4);
        let app = find_appearances(&g, &LabelledGraph::complete(3), 0)
            .unwrap()
            .into_iter()
            .find(|a| a.w == vec![5, 6, 7])
            .unwrap();
        let (out, trace) = detach_appearance(&g, &s, &app, None).unwrap();
        assert_eq!(out, named::k4().disjoint_union(&LabelledGraph::complete(3)));
        assert_eq!(trace.invert(&out).unwrap(), g);

        // d = 3 makes the same appearance non-cut-able (and the graph is not even in the class)
        assert!(detach_appearance(&g, &spec(7, 3, 4), &app, None).is_err());

        // in class, but the outside end of the cut-edge has degree exactly d
        let g = LabelledGraph::new(7, [(1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (5, 7), (6, 7)]).unwrap();
        let s = spec(7, 2, 3);
        let app = find_appearances(&g, &LabelledGraph::complete(3), 2).unwrap().pop().unwrap();
        assert_eq!((app.w.clone(), app.cutable), (vec![5, 6, 7], false));
        assert!(matches!(detach_appearance(&g, &s, &app, None), Err(SurgeryError::Precondition(_))));
    }

    #[test]
    fn detach_with_completion() {
        // K4 minus the edge 6-7 hanging from 1 by its root 5
        let h_prime = named::k4().with_edits(&[(2, 3)], &[]).unwrap();
        let g = named::k4().disjoint_union(&h_prime).with_edits(&[], &[(1, 5)]).unwrap();
        let s = spec(8, 2, 4);
        let app = find_appearances(&g, &h_prime, 2)
            .unwrap()
            .into_iter()
            .find(|a| a.w == vec![5, 6, 7, 8])
            .unwrap();
        let (out, trace) = detach_appearance(&g, &s, &app, Some((6, 7))).unwrap();
        assert_eq!(trace.case, CaseTag::DetachComplete);
        assert!(is_isomorphic(&out.induced(&[5, 6, 7, 8]), &named::k4()));
        assert_eq!(out.component_count(), 2);
        assert!(detach_appearance(&g, &s, &app, Some((5, 6))).is_err());
        assert!(detach_appearance(&g, &s, &app, Some((1, 6))).is_err());
    }

    #[test]
    fn two_detach_on_linked_octahedra() {
        let j = named::octahedron().with_edits(&[(1, 3)], &[]).unwrap();
        let g = j.disjoint_union(&j).with_edits(&[], &[(1, 7), (3, 9)]).unwrap();
        let s = spec(12, 4, 4);
        let found = find_two_appearances(&g, &j).unwrap();
        assert_eq!(found.len(), 2);
        let mut outs = Vec::new();
        for rec in &found {
            let (out, trace) = two_appearance_detach(&g, &s, rec).unwrap();
            assert!(in_class(&out, &s).unwrap());
            assert_eq!(out.component_count(), 2);
            for block in out.components().blocks {
                assert!(is_isomorphic(&out.induced(&block), &named::octahedron()));
            }
            assert_eq!(trace.invert(&out).unwrap(), g);
            assert_eq!(trace.inverse().apply(&out).unwrap(), g);
            outs.push(out);
        }
        assert_eq!(outs[0], outs[1]);
    }

    #[test]
    fn trace_json_shape() {
        let g = two_triangles();
        let (_, trace) = merge_components(&g, &spec(6, 2, 3), MergeArgs::A { u: 1, v: 4 }).unwrap();
        assert_eq!(
            serde_json::to_string(&trace).unwrap(),
            r#"{"deleted":[],"inserted":[[1,4]],"case":"merge_a"}"#
        );
    }

    #[test]
    fn short_cycle_detection() {
        let c7 = LabelledGraph::cycle(7);
        assert!(!edge_on_short_cycle(&c7, 1, 2, 6, |_| true));
        assert!(edge_on_short_cycle(&c7, 1, 2, 7, |_| true));
        let c6 = LabelledGraph::cycle(6);
        assert!(edge_on_short_cycle(&c6, 1, 2, 6, |_| true));
        assert!(!edge_on_short_cycle(&c6, 1, 2, 6, |x| x != 4));
    }
}
