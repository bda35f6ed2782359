use degplanar::appearance::find_appearances;
use degplanar::enumeration::enumerate_class;
use degplanar::graph6::{decode, encode};
use degplanar::iso::{automorphism_count, find_isomorphism};
use degplanar::{is_isomorphic, ClassSpec, LabelledGraph};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = LabelledGraph> {
    (0..=max_n).prop_flat_map(|n| {
        let slots = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), slots).prop_map(move |bits| {
            let mask = bits.iter().enumerate().fold(0u64, |m, (i, &b)| m | (b as u64) << i);
            LabelledGraph::from_slot_mask(n, mask)
        })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
}

/// Isomorphism by trying every bijection.
fn iso_oracle(a: &LabelledGraph, b: &LabelledGraph) -> bool {
    fn go(a: &LabelledGraph, b: &LabelledGraph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let v = map.len() + 1;
        if v > a.order() {
            return true;
        }
        for img in 1..=b.order() {
            if used[img] || a.degree(v) != b.degree(img) {
                continue;
            }
            if (1..v).all(|u| a.has_edge(u, v) == b.has_edge(map[u - 1], img)) {
                used[img] = true;
                map.push(img);
                if go(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[img] = false;
            }
        }
        false
    }
    a.order() == b.order() && a.size() == b.size() && go(a, b, &mut Vec::new(), &mut vec![false; b.order() + 1])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn graph6_round_trip(g in graph(10)) {
        let text = encode(&g).unwrap();
        prop_assert!(text.bytes().all(|b| (63..=126).contains(&b)));
        prop_assert_eq!(decode(&text).unwrap(), g);
    }

    #[test]
    fn relabelled_copies_are_isomorphic((g, perm) in graph(9).prop_flat_map(|g| { let n = g.order(); (Just(g), permutation(n)) })) {
        let h = g.relabel(&perm);
        prop_assert!(is_isomorphic(&g, &h));
        let map = find_isomorphism(&g, &h).unwrap();
        prop_assert_eq!(g.relabel(&map), h.clone());
        prop_assert_eq!(automorphism_count(&g), automorphism_count(&h));
    }

    #[test]
    fn isomorphism_matches_brute_force(a in graph(6), b in graph(6), c in graph(6)) {
        prop_assert_eq!(is_isomorphic(&a, &b), iso_oracle(&a, &b));
        prop_assert!(is_isomorphic(&a, &a));
        prop_assert_eq!(is_isomorphic(&a, &b), is_isomorphic(&b, &a));
        if is_isomorphic(&a, &b) && is_isomorphic(&b, &c) {
            prop_assert!(is_isomorphic(&a, &c));
        }
    }
}

/// Same-size random graphs rarely collide; pair each with a near relative so the
/// isomorphic branch is exercised too.
#[test]
fn isomorphism_on_degree_matched_pairs() {
    let cubic: Vec<LabelledGraph> = enumerate_class(&ClassSpec::new(8, 3, 3).unwrap()).unwrap().step_by(37).collect();
    for a in &cubic {
        for b in cubic.iter().take(40) {
            assert_eq!(is_isomorphic(a, b), iso_oracle(a, b));
        }
    }
}

/// Appearances of a triangle across every labelled planar graph on seven vertices,
/// against the definition applied to every 3-subset.
#[test]
fn triangle_appearances_over_all_seven_vertex_planar_graphs() {
    let k3 = LabelledGraph::complete(3);
    let mut graphs = 0u64;
    let mut witnesses = 0u64;
    for g in enumerate_class(&ClassSpec::unrestricted(7)).unwrap() {
        graphs += 1;
        let mut expected = Vec::new();
        for a in 1..=7 {
            for b in a + 1..=7 {
                for c in b + 1..=7 {
                    let w = [a, b, c];
                    if !(g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c)) {
                        continue;
                    }
                    let boundary: Vec<(usize, usize)> = w
                        .iter()
                        .flat_map(|&x| g.neighbors(x).filter(|y| !w.contains(y)).map(move |y| (x, y)))
                        .collect();
                    if boundary.len() == 1 && boundary[0].0 == a {
                        expected.push((w.to_vec(), boundary[0]));
                    }
                }
            }
        }
        let found: Vec<(Vec<usize>, (usize, usize))> =
            find_appearances(&g, &k3, 0).unwrap().into_iter().map(|r| (r.w, r.cut_edge)).collect();
        assert_eq!(found, expected, "{g:?}");
        witnesses += expected.len() as u64;
    }
    assert_eq!(graphs, 1823707);
    assert!(witnesses > 0);
}
