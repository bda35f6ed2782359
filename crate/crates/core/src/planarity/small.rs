//! Constant-time planarity for graphs on at most eight vertices.
//!
//! A graph on `{0..8}` is encoded as a 28-bit mask over vertex pairs, pair `(i, j)`
//! with `i < j` at slot `j(j-1)/2 + i`. Under this layout a graph on the first `n`
//! vertices occupies the low `n(n-1)/2` bits, so one table serves every `n <= 8`.
//!
//! The table marks a mask nonplanar iff it contains a subdivision of `K5` or
//! `K3,3`: every such subdivision fitting in eight vertices is written in, then
//! the marks are closed upwards over the subset lattice.

use std::sync::OnceLock;

pub const MAX_ORDER: usize = 8;
pub const SLOTS: usize = MAX_ORDER * (MAX_ORDER - 1) / 2;

/// Slot of the pair `{i, j}` (0-based, `i != j`).
#[inline]
pub const fn slot(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    b * (b - 1) / 2 + a
}

/// Number of slots used by graphs on `n` vertices.
pub const fn slots_for(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Inverse of [`slot`].
pub fn pair_of_slot(s: usize) -> (usize, usize) {
    let mut b = 1;
    while slot(0, b + 1) <= s {
        b += 1;
    }
    (s - slot(0, b), b)
}

static NONPLANAR: OnceLock<Vec<u64>> = OnceLock::new();

fn table() -> &'static [u64] {
    NONPLANAR.get_or_init(build)
}

/// Force construction of the lookup table (about 32 MiB).
pub fn warm_up() {
    let _ = table();
}

#[inline]
pub fn is_planar_mask(mask: u32) -> bool {
    let t = table();
    (t[(mask >> 6) as usize] >> (mask & 63)) & 1 == 0
}

fn build() -> Vec<u64> {
    let words = 1usize << (SLOTS - 6);
    let mut t = vec![0u64; words];
    let mut mark = |m: u32| t[(m >> 6) as usize] |= 1u64 << (m & 63);
    for_each_kuratowski_subdivision(&mut mark);

    // Upward closure within each word, then across words.
    const LOW: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0F0F_0F0F_0F0F_0F0F,
        0x00FF_00FF_00FF_00FF,
        0x0000_FFFF_0000_FFFF,
        0x0000_0000_FFFF_FFFF,
    ];
    for x in t.iter_mut() {
        for (b, low) in LOW.iter().enumerate() {
            *x |= (*x & low) << (1 << b);
        }
    }
    for b in 0..SLOTS - 6 {
        let step = 1usize << b;
        for w in 0..words {
            if w & step == 0 {
                t[w | step] |= t[w];
            }
        }
    }
    t
}

fn for_each_kuratowski_subdivision(mark: &mut impl FnMut(u32)) {
    let all: Vec<usize> = (0..MAX_ORDER).collect();
    for branch in combinations(&all, 5) {
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|a| ((a + 1)..5).map(move |b| (a, b)))
            .map(|(a, b)| (branch[a], branch[b]))
            .collect();
        let extras: Vec<usize> = all.iter().copied().filter(|v| !branch.contains(v)).collect();
        subdivide(&pairs, &extras, mark);
    }
    for six in combinations(&all, 6) {
        // side A holds six[0] plus two of the other five
        for others in combinations(&six[1..], 2) {
            let side_a = [six[0], others[0], others[1]];
            let side_b: Vec<usize> = six.iter().copied().filter(|v| !side_a.contains(v)).collect();
            let pairs: Vec<(usize, usize)> = side_a
                .iter()
                .flat_map(|&a| side_b.iter().map(move |&b| (a, b)))
                .collect();
            let extras: Vec<usize> = all.iter().copied().filter(|v| !six.contains(v)).collect();
            subdivide(&pairs, &extras, mark);
        }
    }
}

/// Every way to route the extra vertices (each unused, or placed somewhere along the
/// path replacing one branch edge) and emit the resulting edge mask.
fn subdivide(pairs: &[(usize, usize)], extras: &[usize], mark: &mut impl FnMut(u32)) {
    fn rec(
        pairs: &[(usize, usize)],
        extras: &[usize],
        paths: &mut Vec<Vec<usize>>,
        mark: &mut impl FnMut(u32),
    ) {
        let Some((&x, rest)) = extras.split_first() else {
            let mut mask = 0u32;
            for (k, &(a, b)) in pairs.iter().enumerate() {
                let mut prev = a;
                for &mid in paths[k].iter().chain(std::iter::once(&b)) {
                    mask |= 1 << slot(prev, mid);
                    prev = mid;
                }
            }
            mark(mask);
            return;
        };
        rec(pairs, rest, paths, mark);
        for k in 0..pairs.len() {
            for pos in 0..=paths[k].len() {
                paths[k].insert(pos, x);
                rec(pairs, rest, paths, mark);
                paths[k].remove(pos);
            }
        }
    }
    let mut paths = vec![Vec::new(); pairs.len()];
    rec(pairs, extras, &mut paths, mark);
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}
