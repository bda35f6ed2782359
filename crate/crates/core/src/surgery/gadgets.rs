//! Edge gadgets for `D = 3, 4, 5`, edge replacement, regular extension and the
//! bounded 4-regular supergraph search.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::search::complete_to_degrees;
use super::{CaseTag, SurgeryError, SurgeryTrace};
use crate::graph::{edge, Edge, LabelledGraph};
use crate::planarity::is_planar;

/// A planar graph whose two attachment vertices have degree `D - 1` and every other
/// vertex degree `D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    pub max_deg: usize,
    pub graph: LabelledGraph,
    /// Attachment vertices: the first joins `u`, the second joins `v`.
    pub attach: (usize, usize),
}

impl Gadget {
    /// Check planarity and the degree profile.
    pub fn audit(&self) -> Result<(), String> {
        let g = &self.graph;
        let (a, b) = self.attach;
        if a == b || a == 0 || b == 0 || a > g.order() || b > g.order() {
            return Err(format!("D={} gadget: bad attachment vertices {a}, {b}", self.max_deg));
        }
        if !is_planar(g) {
            return Err(format!("D={} gadget is not planar", self.max_deg));
        }
        for v in 1..=g.order() {
            let want = if v == a || v == b { self.max_deg - 1 } else { self.max_deg };
            if g.degree(v) != want {
                return Err(format!(
                    "D={} gadget: vertex {v} has degree {}, expected {want}",
                    self.max_deg,
                    g.degree(v)
                ));
            }
        }
        // an edge between the attachments must still be planar, or the splice could fail
        if !is_planar(&g.with_edits(&[], &[(a, b)]).map_err(|e| e.to_string())?) {
            return Err(format!("D={} gadget: attachments do not share a face", self.max_deg));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetLibrary {
    gadgets: BTreeMap<usize, Gadget>,
}

fn cubic_gadget() -> Gadget {
    // K4 without the edge 1-2
    let graph = LabelledGraph::new(4, [(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
    Gadget {
        max_deg: 3,
        graph,
        attach: (1, 2),
    }
}

fn quartic_gadget() -> Gadget {
    // path a-b-c-d = 1-2-3-4, apex t = 5 and nadir s = 6 on all four
    let mut edges = vec![(1, 2), (2, 3), (3, 4)];
    for p in 1..=4 {
        edges.push((p, 5));
        edges.push((p, 6));
    }
    Gadget {
        max_deg: 4,
        graph: LabelledGraph::new(6, edges).unwrap(),
        attach: (1, 4),
    }
}

fn quintic_gadget() -> Gadget {
    // rows T1..T5 = 1..5 and B1..B5 = 6..10, apex t = 11, nadir s = 12
    let top = |i: usize| i;
    let bottom = |i: usize| i + 5;
    let mut edges = Vec::new();
    for i in 1..5 {
        edges.push((top(i), top(i + 1)));
        edges.push((bottom(i), bottom(i + 1)));
        edges.push((top(i), bottom(i + 1)));
    }
    edges.push((top(1), top(5)));
    edges.push((bottom(1), bottom(5)));
    for i in 1..=5 {
        edges.push((top(i), bottom(i)));
        edges.push((top(i), 11));
        edges.push((bottom(i), 12));
    }
    Gadget {
        max_deg: 5,
        graph: LabelledGraph::new(12, edges).unwrap(),
        // u attaches at B1, v at T5
        attach: (bottom(1), top(5)),
    }
}

impl GadgetLibrary {
    pub fn standard() -> Self {
        let gadgets = [cubic_gadget(), quartic_gadget(), quintic_gadget()]
            .into_iter()
            .map(|g| (g.max_deg, g))
            .collect();
        GadgetLibrary { gadgets }
    }

    pub fn get(&self, max_deg: usize) -> Option<&Gadget> {
        self.gadgets.get(&max_deg)
    }

    pub fn audit(&self) -> Result<(), String> {
        self.gadgets.values().try_for_each(Gadget::audit)
    }
}

static LIBRARY: OnceLock<GadgetLibrary> = OnceLock::new();

/// The audited library; panics if a gadget fails its audit.
pub fn gadget_library() -> &'static GadgetLibrary {
    LIBRARY.get_or_init(|| {
        let lib = GadgetLibrary::standard();
        if let Err(e) = lib.audit() {
            panic!("gadget library failed its audit: {e}");
        }
        lib
    })
}

/// Replace the edge `uv` (both ends of degree `D`) by a copy of the `D` gadget on new
/// labels `|G|+1..`, joined to `u` and `v` at its attachment vertices.
pub fn replace_edge_with_gadget(
    g: &LabelledGraph,
    uv: Edge,
    max_deg: usize,
) -> Result<(LabelledGraph, SurgeryTrace), SurgeryError> {
    let gadget = gadget_library()
        .get(max_deg)
        .ok_or(SurgeryError::UnsupportedDegree(max_deg))?;
    let (u, v) = uv;
    if !g.has_edge(u, v) {
        let (a, b) = edge(u, v);
        return Err(SurgeryError::Precondition(format!("edge {a}-{b} is not present")));
    }
    if g.degree(u) != max_deg || g.degree(v) != max_deg {
        return Err(SurgeryError::Precondition(format!(
            "both ends of {u}-{v} must have degree {max_deg}"
        )));
    }
    let shift = g.order();
    let mut inserted: Vec<Edge> = gadget
        .graph
        .edges()
        .into_iter()
        .map(|(a, b)| (a + shift, b + shift))
        .collect();
    inserted.push(edge(u, gadget.attach.0 + shift));
    inserted.push(edge(v, gadget.attach.1 + shift));
    let trace = SurgeryTrace::new(vec![edge(u, v)], inserted, CaseTag::Gadget, gadget.graph.order());
    let out = trace.apply(g)?;
    if !is_planar(&out) {
        return Err(SurgeryError::Nonplanar);
    }
    Ok((out, trace))
}

static NEAR_REGULAR: OnceLock<BTreeMap<usize, LabelledGraph>> = OnceLock::new();

/// Planar graphs with vertex 1 of degree `D - 1` and every other vertex of degree `D`.
///
/// `D = 3` comes from the completion search. For `D = 5` two copies of the quintic edge
/// gadget share one new vertex adjacent to all four attachments.
pub fn near_regular_gadget(max_deg: usize) -> Result<&'static LabelledGraph, SurgeryError> {
    let table = NEAR_REGULAR.get_or_init(|| {
        let mut out = BTreeMap::new();
        for n in (3..=11).step_by(2) {
            let mut targets = vec![3; n];
            targets[0] = 2;
            if let Some(g) = complete_to_degrees(&LabelledGraph::empty(n), &targets, 2) {
                out.insert(3, g);
                break;
            }
        }
        let q = &gadget_library().get(5).expect("quintic gadget").graph;
        let (a, b) = gadget_library().get(5).unwrap().attach;
        let pair = LabelledGraph::empty(1).disjoint_union(q).disjoint_union(q);
        let links = [(1, a + 1), (1, b + 1), (1, a + 13), (1, b + 13)];
        out.insert(5, pair.with_edits(&[], &links).expect("fresh links"));
        out
    });
    match max_deg {
        4 => Err(SurgeryError::ParityObstruction),
        _ => table.get(&max_deg).ok_or(SurgeryError::UnsupportedDegree(max_deg)),
    }
}

/// A `D`-regular planar supergraph of the connected planar `h` (`D` in {3, 5}): every
/// vertex `v` of `h` receives `D - deg(v)` pendant near-regular gadgets.
pub fn extend_to_regular(h: &LabelledGraph, max_deg: usize) -> Result<LabelledGraph, SurgeryError> {
    if max_deg == 4 {
        return Err(SurgeryError::ParityObstruction);
    }
    if max_deg != 3 && max_deg != 5 {
        return Err(SurgeryError::UnsupportedDegree(max_deg));
    }
    if h.max_degree() > max_deg {
        return Err(SurgeryError::Precondition(format!("pattern has a vertex of degree above {max_deg}")));
    }
    if !h.is_connected() || !is_planar(h) {
        return Err(SurgeryError::Precondition("pattern must be connected and planar".into()));
    }
    let gadget = near_regular_gadget(max_deg)?;
    let mut out = h.clone();
    for v in 1..=h.order() {
        for _ in h.degree(v)..max_deg {
            let root = out.order() + 1;
            out = out.disjoint_union(gadget).with_edits(&[], &[(v, root)])?;
        }
    }
    if !is_planar(&out) {
        return Err(SurgeryError::Nonplanar);
    }
    Ok(out)
}

/// Largest order the 4-regular supergraph search accepts.
pub const FOUR_REGULAR_SEARCH_CAP: usize = 12;

/// A 4-regular planar graph on at most `n_max` vertices containing `h` as a subgraph
/// (on the labels `1..=|h|`), or `None` if there is none of that size. `None` is not a
/// proof beyond `n_max`.
pub fn four_regular_supergraph_search(h: &LabelledGraph, n_max: usize) -> Result<Option<LabelledGraph>, SurgeryError> {
    if n_max > FOUR_REGULAR_SEARCH_CAP {
        return Err(SurgeryError::SearchCap {
            requested: n_max,
            cap: FOUR_REGULAR_SEARCH_CAP,
        });
    }
    if h.max_degree() > 4 {
        return Err(SurgeryError::Precondition("pattern has a vertex of degree above 4".into()));
    }
    for n in h.order().max(6)..=n_max {
        let base = h.with_extra_vertices(n - h.order());
        if let Some(g) = complete_to_degrees(&base, &vec![4; n], h.order() + 1) {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use crate::iso::is_isomorphic;

    #[test]
    fn library_passes_audit() {
        let lib = gadget_library();
        for d in 3..=5 {
            let g = lib.get(d).unwrap();
            assert!(g.audit().is_ok());
        }
        assert_eq!(lib.get(5).unwrap().graph.order(), 12);
        assert_eq!(lib.get(5).unwrap().graph.size(), 29);
    }

    #[test]
    fn audit_rejects_broken_gadgets() {
        let mut g = quartic_gadget();
        g.attach = (1, 2);
        assert!(g.audit().is_err());
        let k33 = Gadget {
            max_deg: 3,
            graph: named::k33(),
            attach: (1, 2),
        };
        assert!(k33.audit().is_err());
    }

    #[test]
    fn gadgets_are_platonic_solids_minus_an_edge() {
        let lib = gadget_library();
        for (d, solid) in [(3, named::k4()), (4, named::octahedron()), (5, named::icosahedron())] {
            let gad = lib.get(d).unwrap();
            let closed = gad.graph.with_edits(&[], &[gad.attach]).unwrap();
            assert!(is_isomorphic(&closed, &solid), "D={d}");
        }
    }

    #[test]
    fn splice_examples() {
        let (out, trace) = replace_edge_with_gadget(&named::k4(), (1, 2), 3).unwrap();
        assert_eq!(out.order(), 8);
        assert!(out.degrees().iter().all(|&x| x == 3) && is_planar(&out));
        assert_eq!(trace.invert(&out).unwrap(), named::k4());

        let (out, _) = replace_edge_with_gadget(&named::octahedron(), (1, 3), 4).unwrap();
        assert_eq!(out.order(), 12);
        assert!(out.degrees().iter().all(|&x| x == 4) && is_planar(&out));

        let (out, _) = replace_edge_with_gadget(&named::icosahedron(), (1, 2), 5).unwrap();
        assert_eq!(out.order(), 24);
        assert!(out.degrees().iter().all(|&x| x == 5) && is_planar(&out));

        assert!(replace_edge_with_gadget(&named::octahedron(), (1, 2), 4).is_err());
        assert!(replace_edge_with_gadget(&named::k4(), (1, 2), 6).is_err());
        assert!(replace_edge_with_gadget(&named::k4(), (1, 2), 4).is_err());
    }

    #[test]
    fn near_regular_gadgets() {
        let g3 = near_regular_gadget(3).unwrap();
        assert_eq!(g3.order(), 5);
        assert_eq!(g3.degree(1), 2);
        // K4 with one edge subdivided
        let subdivided = LabelledGraph::new(5, [(1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]).unwrap();
        assert!(is_isomorphic(g3, &subdivided));

        let g5 = near_regular_gadget(5).unwrap();
        assert_eq!(g5.order(), 25);
        assert_eq!(g5.degree(1), 4);
        assert!((2..=25).all(|v| g5.degree(v) == 5) && is_planar(g5));
        assert_eq!(near_regular_gadget(4), Err(SurgeryError::ParityObstruction));
    }

    #[test]
    fn regular_extension() {
        let t = extend_to_regular(&LabelledGraph::complete(3), 3).unwrap();
        assert_eq!(t.order(), 3 + 3 * 5);
        assert!(t.degrees().iter().all(|&x| x == 3) && is_planar(&t));
        assert_eq!(t.induced(&[1, 2, 3]), LabelledGraph::complete(3));

        assert_eq!(extend_to_regular(&named::k4(), 3).unwrap(), named::k4());

        let p = extend_to_regular(&LabelledGraph::path(3), 5).unwrap();
        assert!(p.degrees().iter().all(|&x| x == 5) && is_planar(&p));

        assert_eq!(extend_to_regular(&named::k4(), 4), Err(SurgeryError::ParityObstruction));
        assert!(extend_to_regular(&named::k5_minus_edge(), 3).is_err());
    }

    #[test]
    fn four_regular_search_small_cases() {
        let oct = four_regular_supergraph_search(&LabelledGraph::cycle(4), 6).unwrap().unwrap();
        assert!(is_isomorphic(&oct, &named::octahedron()));
        assert!(oct.has_edge(1, 2) && oct.has_edge(2, 3) && oct.has_edge(3, 4) && oct.has_edge(1, 4));
        let any = four_regular_supergraph_search(&LabelledGraph::empty(1), 6).unwrap().unwrap();
        assert!(is_isomorphic(&any, &named::octahedron()));
        assert!(four_regular_supergraph_search(&LabelledGraph::complete(6), 8).is_err());
        assert!(four_regular_supergraph_search(&LabelledGraph::empty(1), 13).is_err());
    }
}
