use degplanar::enumeration::{census, enumerate_class, GridTally};
use degplanar::{is_planar, ClassSpec, LabelledGraph};

fn spec(n: usize, d: usize, max_deg: usize) -> ClassSpec {
    ClassSpec::new(n, d, max_deg).unwrap()
}

/// Known numbers of labelled planar graphs on `n` vertices.
const LABELLED_PLANAR: [u64; 9] = [1, 1, 2, 8, 64, 1023, 32071, 1823707, 163947848];

#[test]
fn five_vertex_count_from_independent_filter() {
    // only K5 itself is nonplanar on five vertices
    let by_filter = (0u64..1 << 10)
        .filter(|&m| is_planar(&LabelledGraph::from_slot_mask(5, m)))
        .count();
    assert_eq!(by_filter, 1023);
    assert_eq!(census(&ClassSpec::unrestricted(5)).unwrap().total, 1023);
}

#[test]
fn unrestricted_counts_through_seven() {
    for n in 1..=7 {
        assert_eq!(census(&ClassSpec::unrestricted(n)).unwrap().total, LABELLED_PLANAR[n], "n={n}");
    }
}

#[test]
fn regular_classes() {
    assert_eq!(census(&spec(4, 3, 3)).unwrap().total, 1);
    assert_eq!(census(&spec(6, 3, 3)).unwrap().total, 60);
    assert_eq!(census(&spec(6, 4, 4)).unwrap().total, 15);
    assert_eq!(census(&spec(7, 3, 3)).unwrap().total, 0);
}

/// Cubic graphs on six vertices are the prism and `K3,3`; the labelled prisms number
/// 6!/12 = 60. Quartic graphs on six vertices are complements of perfect matchings.
#[test]
fn regular_classes_against_brute_force() {
    let cubic: Vec<LabelledGraph> = (0u64..1 << 15)
        .map(|m| LabelledGraph::from_slot_mask(6, m))
        .filter(|g| g.degrees().iter().all(|&x| x == 3))
        .collect();
    assert_eq!(cubic.len(), 70);
    let planar_cubic = cubic.iter().filter(|g| is_planar(g)).count();
    assert_eq!(planar_cubic, 60);

    let quartic = (0u64..1 << 15)
        .map(|m| LabelledGraph::from_slot_mask(6, m))
        .filter(|g| g.degrees().iter().all(|&x| x == 4) && is_planar(g))
        .count();
    assert_eq!(quartic, 15);
    let from_enum: Vec<LabelledGraph> = enumerate_class(&spec(6, 4, 4)).unwrap().collect();
    assert_eq!(from_enum.len(), 15);
    assert!(from_enum.iter().all(|g| degplanar::is_isomorphic(g, &degplanar::graph::named::octahedron())));
}

#[test]
fn monotone_containment_and_additivity_on_the_seven_vertex_grid() {
    let tally = GridTally::build(7).unwrap();
    for d in 0..=6 {
        for max_deg in d..=7 {
            let c = tally.census(d, max_deg);
            assert_eq!(c.by_components.values().sum::<u64>(), c.total);
            if d > 0 {
                assert!(c.total <= tally.census(d - 1, max_deg).total);
            }
            if max_deg > d {
                assert!(tally.census(d, max_deg - 1).total <= c.total);
            }
        }
    }
    assert_eq!(tally.census(0, 6).total, LABELLED_PLANAR[7]);
    assert_eq!(tally.census(3, 3).total, 0);
}

#[test]
fn eight_vertex_grid() {
    let start = std::time::Instant::now();
    let tally = GridTally::build(8).unwrap();
    eprintln!("n=8 grid in {:?}", start.elapsed());
    assert_eq!(tally.census(0, 7).total, LABELLED_PLANAR[8]);
    assert_eq!(tally.census(3, 3), census(&spec(8, 3, 3)).unwrap());
    assert_eq!(tally.census(4, 4), census(&spec(8, 4, 4)).unwrap());
    assert_eq!(tally.census(2, 3), census(&spec(8, 2, 3)).unwrap());
}
