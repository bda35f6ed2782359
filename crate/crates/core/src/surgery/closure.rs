//! Randomised closure campaigns. Each operator is applied to instances drawn from
//! enumerated classes (randomly relabelled), and every output is checked for class
//! membership, exact trace inversion, and the degree and component ledgers.

use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    attach_appearance, detach_appearance, edge_on_short_cycle, merge_components, replace_edge_with_gadget,
    two_appearance_detach, AttachTarget, CaseTag, MergeArgs, SurgeryError, SurgeryTrace,
};
use crate::appearance::{find_appearances, find_two_appearances};
use crate::enumeration::{enumerate_class, has_component_isomorphic_to};
use crate::graph::{in_class, named, ClassSpec, LabelledGraph};

/// Every operator a campaign can exercise.
pub const OPERATORS: [CaseTag; 9] = [
    CaseTag::MergeA,
    CaseTag::MergeB,
    CaseTag::MergeC,
    CaseTag::AttachFree,
    CaseTag::AttachCycle,
    CaseTag::Detach,
    CaseTag::DetachComplete,
    CaseTag::TwoDetach,
    CaseTag::Gadget,
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureOutcome {
    pub case: CaseTag,
    pub applied: usize,
    /// Draws discarded before invocation because no valid arguments existed.
    pub redrawn: usize,
    pub failures: Vec<String>,
}

impl ClosureOutcome {
    pub fn passed(&self, trials: usize) -> bool {
        self.failures.is_empty() && self.applied == trials
    }
}

type Rand = ChaCha8Rng;

fn spec(n: usize, d: usize, max_deg: usize) -> ClassSpec {
    ClassSpec::new(n, d, max_deg).expect("valid window")
}

fn members(s: &ClassSpec, keep: impl Fn(&LabelledGraph) -> bool) -> Vec<LabelledGraph> {
    enumerate_class(s).expect("enumerable class").filter(|g| keep(g)).collect()
}

fn shuffled(g: &LabelledGraph, rng: &mut Rand) -> LabelledGraph {
    let mut perm: Vec<usize> = (1..=g.order()).collect();
    perm.shuffle(rng);
    g.relabel(&perm)
}

/// Degree changes on the vertices of `before`, as (vertex, delta) pairs.
fn degree_deltas(before: &LabelledGraph, after: &LabelledGraph) -> BTreeMap<usize, i64> {
    (1..=before.order())
        .filter_map(|v| {
            let delta = after.degree(v) as i64 - before.degree(v) as i64;
            (delta != 0).then_some((v, delta))
        })
        .collect()
}

fn expect_deltas(entries: &[(usize, i64)]) -> BTreeMap<usize, i64> {
    let mut out = BTreeMap::new();
    for &(v, d) in entries {
        *out.entry(v).or_insert(0) += d;
    }
    out.retain(|_, d| *d != 0);
    out
}

struct Check<'a> {
    failures: &'a mut Vec<String>,
    label: String,
}

impl Check<'_> {
    fn fail(&mut self, what: impl std::fmt::Display) {
        self.failures.push(format!("{}: {what}", self.label));
    }

    fn ensure(&mut self, ok: bool, what: &str) {
        if !ok {
            self.fail(what);
        }
    }

    /// Class membership, trace inversion and trace serialisation.
    fn common(&mut self, input: &LabelledGraph, target: &ClassSpec, out: &LabelledGraph, trace: &SurgeryTrace) {
        self.ensure(in_class(out, target).unwrap_or(false), "output outside target class");
        self.ensure(trace.apply(input).as_ref() == Ok(out), "trace replay differs");
        self.ensure(trace.invert(out).as_ref() == Ok(input), "inverse trace does not restore input");
        let json = serde_json::to_string(trace).expect("trace serialises");
        let back: Result<SurgeryTrace, _> = serde_json::from_str(&json);
        self.ensure(back.is_ok_and(|b| b == *trace), "trace JSON round-trip");
        self.ensure(trace.deleted.iter().all(|e| !trace.inserted.contains(e)), "deleted and inserted overlap");
    }

    fn result<T>(&mut self, r: Result<T, SurgeryError>) -> Option<T> {
        r.map_err(|e| self.fail(format!("rejected valid arguments: {e}"))).ok()
    }
}

/// Patterns used for appearances; all connected.
fn small_patterns() -> Vec<LabelledGraph> {
    let mut k4e = LabelledGraph::complete(4);
    k4e = k4e.with_edits(&[(1, 2)], &[]).expect("edge present");
    let star = LabelledGraph::new(4, [(1, 2), (1, 3), (1, 4)]).expect("star");
    let pendant = LabelledGraph::new(4, [(1, 2), (2, 3), (3, 4), (2, 4)]).expect("paw");
    vec![
        LabelledGraph::empty(1),
        LabelledGraph::complete(2),
        LabelledGraph::path(3),
        LabelledGraph::complete(3),
        LabelledGraph::path(4),
        LabelledGraph::cycle(4),
        star,
        pendant,
        k4e,
        named::k4(),
    ]
}

struct Pools {
    /// Disconnected members of windows with `D >= 2`, with their spec.
    split: Vec<(ClassSpec, Vec<LabelledGraph>)>,
}

fn split_pools() -> Pools {
    let split = [spec(8, 2, 3), spec(7, 1, 3), spec(7, 0, 2), spec(6, 1, 4)]
        .into_iter()
        .map(|s| (s, members(&s, |g| g.component_count() >= 2)))
        .collect();
    Pools { split }
}

fn draw<'a>(pools: &'a [(ClassSpec, Vec<LabelledGraph>)], rng: &mut Rand) -> (ClassSpec, &'a LabelledGraph) {
    let (s, gs) = pools.choose(rng).expect("pool list");
    (*s, gs.choose(rng).expect("nonempty pool"))
}

/// Run one operator `trials` times from a fixed seed.
pub fn closure_campaign(case: CaseTag, trials: usize, seed: u64) -> ClosureOutcome {
    let mut rng = Rand::seed_from_u64(seed ^ (case as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut failures = Vec::new();
    let mut applied = 0;
    let mut redrawn = 0;
    let max_draws = trials * 200 + 1000;
    let mut runner: Box<dyn FnMut(&mut Rand, &mut Check) -> bool> = match case {
        CaseTag::MergeA => {
            let pools = split_pools();
            Box::new(move |rng, chk| {
                let (s, g0) = draw(&pools.split, rng);
                let g = shuffled(g0, rng);
                let parts = g.components();
                let open: Vec<usize> = (1..=g.order()).filter(|&v| g.degree(v) < s.max_deg).collect();
                let Some(&u) = open.choose(rng) else { return false };
                let others: Vec<usize> = open.iter().copied().filter(|&v| parts.block_of(v) != parts.block_of(u)).collect();
                let Some(&v) = others.choose(rng) else { return false };
                chk.label = format!("merge_a {g:?} u={u} v={v}");
                if let Some((out, trace)) = chk.result(merge_components(&g, &s, MergeArgs::A { u, v })) {
                    chk.common(&g, &s, &out, &trace);
                    chk.ensure(out.component_count() + 1 == g.component_count(), "component delta");
                    chk.ensure(degree_deltas(&g, &out) == expect_deltas(&[(u, 1), (v, 1)]), "degree ledger");
                }
                true
            })
        }
        CaseTag::MergeB => {
            let pools = split_pools();
            Box::new(move |rng, chk| {
                let (s, g0) = draw(&pools.split, rng);
                let g = shuffled(g0, rng);
                let parts = g.components();
                let mut edges = g.edges();
                if edges.is_empty() {
                    return false;
                }
                let (mut u, mut v) = edges.swap_remove(rng.random_range(0..edges.len()));
                if rng.random_bool(0.5) {
                    std::mem::swap(&mut u, &mut v);
                }
                if !edge_on_short_cycle(&g, u, v, 6, |_| true) {
                    return false;
                }
                let far: Vec<usize> = (1..=g.order())
                    .filter(|&w| parts.block_of(w) != parts.block_of(u) && g.degree(w) > 0)
                    .collect();
                let Some(&w) = far.choose(rng) else { return false };
                let xs: Vec<usize> = g.neighbors(w).collect();
                let x = *xs.choose(rng).expect("w has a neighbour");
                chk.label = format!("merge_b {g:?} u={u} v={v} w={w} x={x}");
                if let Some((out, trace)) = chk.result(merge_components(&g, &s, MergeArgs::B { u, v, w, x })) {
                    chk.common(&g, &s, &out, &trace);
                    chk.ensure(out.component_count() + 1 == g.component_count(), "component delta");
                    chk.ensure(degree_deltas(&g, &out).is_empty(), "degree ledger");
                    chk.ensure(out.distance(u, v).is_some_and(|dist| dist <= 5), "v within distance 5 of u");
                }
                true
            })
        }
        CaseTag::MergeC => {
            let pools: Vec<(ClassSpec, Vec<LabelledGraph>)> = [spec(6, 0, 3), spec(7, 0, 3), spec(6, 0, 4)]
                .into_iter()
                .map(|s| (s, members(&s, |g| g.min_degree() == 0 && g.component_count() >= 2 && g.size() >= 3)))
                .collect();
            Box::new(move |rng, chk| {
                let (s, g0) = draw(&pools, rng);
                let g = shuffled(g0, rng);
                let isolated: Vec<usize> = (1..=g.order()).filter(|&v| g.degree(v) == 0).collect();
                let w = *isolated.choose(rng).expect("filtered for an isolated vertex");
                let cyclic: Vec<(usize, usize)> = g
                    .edges()
                    .into_iter()
                    .filter(|&(a, b)| edge_on_short_cycle(&g, a, b, g.order(), |_| true))
                    .collect();
                let Some(&(u, v)) = cyclic.choose(rng) else { return false };
                chk.label = format!("merge_c {g:?} u={u} v={v} w={w}");
                if let Some((out, trace)) = chk.result(merge_components(&g, &s, MergeArgs::C { u, v, w })) {
                    chk.common(&g, &s, &out, &trace);
                    chk.ensure(out.component_count() + 1 == g.component_count(), "component delta");
                    chk.ensure(degree_deltas(&g, &out) == expect_deltas(&[(w, 2)]), "degree ledger");
                }
                true
            })
        }
        CaseTag::AttachFree | CaseTag::AttachCycle => {
            let cycle_mode = case == CaseTag::AttachCycle;
            let windows: &[(usize, usize)] = if cycle_mode {
                &[(2, 3), (2, 4), (3, 4), (1, 3)]
            } else {
                &[(0, 3), (1, 3), (1, 4), (2, 4), (0, 2)]
            };
            let pools: Vec<((usize, usize), Vec<LabelledGraph>, Vec<LabelledGraph>)> = windows
                .iter()
                .map(|&(d, max_deg)| {
                    let hosts = members(&spec(if cycle_mode { 6 } else { 5 }, d, max_deg), |_| true);
                    let blocks: Vec<LabelledGraph> = (1..=5)
                        .flat_map(|k| members(&spec(k, d, max_deg), |h| h.is_connected() && h.degree(1) < max_deg))
                        .collect();
                    ((d, max_deg), hosts, blocks)
                })
                .collect();
            Box::new(move |rng, chk| {
                let ((d, max_deg), hosts, blocks) = pools.choose(rng).expect("windows");
                let (Some(g0), Some(h)) = (hosts.choose(rng), blocks.choose(rng)) else { return false };
                let g = shuffled(g0, rng);
                let (n, k) = (g.order(), h.order());
                let target_spec = spec(n + k, *d, *max_deg);
                let (target, touched) = if cycle_mode {
                    let mut edges = g.edges();
                    if edges.is_empty() {
                        return false;
                    }
                    let (mut u, mut v) = edges.swap_remove(rng.random_range(0..edges.len()));
                    if rng.random_bool(0.5) {
                        std::mem::swap(&mut u, &mut v);
                    }
                    if !edge_on_short_cycle(&g, u, v, 6, |x| g.degree(x) > *d) {
                        return false;
                    }
                    (AttachTarget::Cycle { u, v }, vec![(u, -1)])
                } else {
                    let open: Vec<usize> = (1..=n).filter(|&v| g.degree(v) < *max_deg).collect();
                    let Some(&v) = open.choose(rng) else { return false };
                    (AttachTarget::Free { v }, vec![(v, 1)])
                };
                chk.label = format!("attach {g:?} H={h:?} {target:?} in {target_spec}");
                if let Some((out, trace)) = chk.result(attach_appearance(&g, &target_spec, h, target)) {
                    chk.common(&g, &target_spec, &out, &trace);
                    chk.ensure(out.component_count() == g.component_count(), "component delta");
                    let old = out.induced(&(1..=n).collect::<Vec<_>>());
                    let mut host_deltas = degree_deltas(&g, &old);
                    if let AttachTarget::Cycle { v, .. } = target {
                        // v loses the cycle edge and gains the root edge
                        *host_deltas.entry(v).or_insert(0) += 1;
                        host_deltas.retain(|_, x| *x != 0);
                    } else if let AttachTarget::Free { v } = target {
                        *host_deltas.entry(v).or_insert(0) += 1;
                    }
                    chk.ensure(host_deltas == expect_deltas(&touched), "degree ledger");
                    let block: Vec<usize> = (n + 1..=n + k).collect();
                    let witnessed = find_appearances(&out, h, *d)
                        .map(|apps| apps.iter().any(|a| a.w == block && a.cutable))
                        .unwrap_or(false);
                    chk.ensure(witnessed, "new block is not a cut-able appearance");
                }
                true
            })
        }
        CaseTag::Detach | CaseTag::DetachComplete => {
            let complete = case == CaseTag::DetachComplete;
            let pools: Vec<(ClassSpec, Vec<LabelledGraph>)> = [spec(7, 0, 3), spec(7, 1, 3), spec(7, 1, 2), spec(6, 0, 4)]
                .into_iter()
                .map(|s| (s, members(&s, |g| g.size() > 0)))
                .collect();
            let patterns = small_patterns();
            Box::new(move |rng, chk| {
                let (s, g0) = draw(&pools, rng);
                let g = shuffled(g0, rng);
                let h = patterns.choose(rng).expect("patterns");
                if h.order() >= g.order() {
                    return false;
                }
                let apps: Vec<_> = find_appearances(&g, h, s.min_deg)
                    .expect("pattern smaller than host")
                    .into_iter()
                    .filter(|a| a.cutable)
                    .collect();
                let Some(app) = apps.choose(rng) else { return false };
                let (r, v) = app.cut_edge;
                let mut expected = vec![(r, -1), (v, -1)];
                let completion = if complete {
                    let mut pairs = Vec::new();
                    for (i, &a) in app.w.iter().enumerate() {
                        for &b in &app.w[i + 1..] {
                            let room = |x: usize| g.degree(x) - usize::from(x == r) < s.max_deg;
                            if !g.has_edge(a, b) && room(a) && room(b) {
                                pairs.push((a, b));
                            }
                        }
                    }
                    let Some(&(a, b)) = pairs.choose(rng) else { return false };
                    expected.extend([(a, 1), (b, 1)]);
                    Some((a, b))
                } else {
                    None
                };
                chk.label = format!("detach {g:?} {app:?} completion={completion:?}");
                if let Some((out, trace)) = chk.result(detach_appearance(&g, &s, app, completion)) {
                    chk.common(&g, &s, &out, &trace);
                    chk.ensure(out.component_count() == g.component_count() + 1, "component delta");
                    chk.ensure(degree_deltas(&g, &out) == expect_deltas(&expected), "degree ledger");
                    let mut block = g.induced(&app.w);
                    if let Some((a, b)) = completion {
                        let pos = |x: usize| app.w.binary_search(&x).expect("inside W") + 1;
                        block = block.with_edits(&[], &[(pos(a), pos(b))]).expect("absent pair");
                    }
                    chk.ensure(has_component_isomorphic_to(&out, &block), "detached component");
                }
                true
            })
        }
        CaseTag::TwoDetach => {
            let regular: Vec<(usize, Vec<LabelledGraph>)> = vec![
                (3, [4, 6, 8].iter().flat_map(|&n| members(&spec(n, 3, 3), |_| true)).collect()),
                (4, [6, 8].iter().flat_map(|&n| members(&spec(n, 4, 4), |_| true)).collect()),
            ];
            Box::new(move |rng, chk| {
                let (max_deg, gs) = regular.choose(rng).expect("degrees");
                let (a, b) = (gs.choose(rng).expect("pool"), gs.choose(rng).expect("pool"));
                if a.order() + b.order() > 14 {
                    return false;
                }
                let ea = *a.edges().choose(rng).expect("edges");
                let eb = *b.edges().choose(rng).expect("edges");
                let shift = a.order();
                let (b1, b2) = if rng.random_bool(0.5) { (eb.0, eb.1) } else { (eb.1, eb.0) };
                let linked = a
                    .disjoint_union(b)
                    .with_edits(&[ea, (b1 + shift, b2 + shift)], &[(ea.0, b1 + shift), (ea.1, b2 + shift)])
                    .expect("linking edits");
                if !a.with_edits(&[ea], &[]).expect("edge present").is_connected() {
                    return false;
                }
                let mut perm: Vec<usize> = (1..=linked.order()).collect();
                perm.shuffle(rng);
                let g = linked.relabel(&perm);
                // the pattern as it appears on the relabelled copy of `a`
                let mut w: Vec<usize> = perm[..shift].to_vec();
                w.sort_unstable();
                let j = g.induced(&w);
                let s = spec(g.order(), *max_deg, *max_deg);
                let recs: Vec<_> = find_two_appearances(&g, &j)
                    .expect("pattern smaller than host")
                    .into_iter()
                    .filter(|rec| !g.has_edge(rec.e1.0, rec.e2.0))
                    .collect();
                let Some(rec) = recs.choose(rng) else { return false };
                chk.label = format!("two_detach {g:?} {rec:?}");
                if let Some((out, trace)) = chk.result(two_appearance_detach(&g, &s, rec)) {
                    chk.common(&g, &s, &out, &trace);
                    chk.ensure(out.component_count() == g.component_count() + 1, "component delta");
                    chk.ensure(degree_deltas(&g, &out).is_empty(), "degree ledger");
                    let closed = g.induced(&rec.w).with_edits(&[], &[{
                        let pos = |x: usize| rec.w.binary_search(&x).expect("inside W") + 1;
                        (pos(rec.e1.0), pos(rec.e2.0))
                    }]);
                    chk.ensure(
                        closed.is_ok_and(|c| has_component_isomorphic_to(&out, &c)),
                        "closed block is a component",
                    );
                }
                true
            })
        }
        CaseTag::Gadget => {
            let regular: Vec<(usize, Vec<LabelledGraph>)> = vec![
                (3, [4, 6, 8].iter().flat_map(|&n| members(&spec(n, 3, 3), |_| true)).collect()),
                (4, [6, 8].iter().flat_map(|&n| members(&spec(n, 4, 4), |_| true)).collect()),
                (5, vec![named::icosahedron()]),
            ];
            Box::new(move |rng, chk| {
                let (max_deg, gs) = regular.choose(rng).expect("degrees");
                let mut g = shuffled(gs.choose(rng).expect("pool"), rng);
                // sometimes splice into an earlier splice
                if rng.random_bool(0.25) {
                    let e = *g.edges().choose(rng).expect("edges");
                    match replace_edge_with_gadget(&g, e, *max_deg) {
                        Ok((out, _)) => g = out,
                        Err(e) => {
                            chk.label = format!("gadget pre-splice {g:?}");
                            chk.fail(e);
                            return true;
                        }
                    }
                }
                let (u, v) = *g.edges().choose(rng).expect("edges");
                chk.label = format!("gadget D={max_deg} {g:?} uv={u}-{v}");
                if let Some((out, trace)) = chk.result(replace_edge_with_gadget(&g, (u, v), *max_deg)) {
                    let s = spec(out.order(), *max_deg, *max_deg);
                    chk.common(&g, &s, &out, &trace);
                    chk.ensure(out.component_count() == g.component_count(), "component delta");
                    let old = out.induced(&(1..=g.order()).collect::<Vec<_>>());
                    chk.ensure(
                        degree_deltas(&g, &old) == expect_deltas(&[(u, -1), (v, -1)]),
                        "degree ledger",
                    );
                }
                true
            })
        }
    };
    while applied < trials && applied + redrawn < max_draws {
        let mut chk = Check {
            failures: &mut failures,
            label: String::new(),
        };
        if runner(&mut rng, &mut chk) {
            applied += 1;
        } else {
            redrawn += 1;
        }
    }
    failures.truncate(20);
    ClosureOutcome {
        case,
        applied,
        redrawn,
        failures,
    }
}
