use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{count_short_cycles, planar_embedding, PlanarityError};
use crate::graph::LabelledGraph;

/// Outcome of the short-cycle bound for a planar graph with few vertices of degree at most 2.
///
/// With `k < 1/15` and at most `k|S|` such vertices, the graph has at least
/// `(1 - 15k)/28 * |S|` cycles of length at most 6; any fixed embedding has at least
/// `(1 - 15k)/14 * |S|` faces of size at most 6.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Report {
    /// False when a hypothesis fails; `holds` is then absent.
    pub applicable: bool,
    pub reason: Option<String>,
    pub holds: Option<bool>,
    pub low_degree_count: usize,
    pub cycle_count: u64,
    pub bound: f64,
    pub short_face_count: usize,
    pub face_bound: f64,
    pub faces_hold: Option<bool>,
}

/// `(1 - 15k) / denom * n` compared exactly against `count`.
fn meets(count: u64, n: usize, k: Ratio<u64>, denom: u64) -> bool {
    let (p, q) = (*k.numer() as u128, *k.denom() as u128);
    // count >= (q - 15p) n / (denom q)
    (count as u128) * (denom as u128) * q >= (q - 15 * p) * n as u128
}

fn bound_value(n: usize, k: Ratio<u64>, denom: u64) -> f64 {
    let kf = *k.numer() as f64 / *k.denom() as f64;
    (1.0 - 15.0 * kf) / denom as f64 * n as f64
}

pub fn lemma1_check(g: &LabelledGraph, k: Ratio<u64>) -> Result<Lemma1Report, PlanarityError> {
    if *k.denom() == 0 {
        return Err(PlanarityError::BadFraction(format!("{k}")));
    }
    let n = g.order();
    let low_degree_count = (1..=n).filter(|&v| g.degree(v) <= 2).count();
    let mut report = Lemma1Report {
        applicable: false,
        reason: None,
        holds: None,
        low_degree_count,
        cycle_count: 0,
        bound: bound_value(n, k, 28),
        short_face_count: 0,
        face_bound: bound_value(n, k, 14),
        faces_hold: None,
    };
    if k * 15 >= Ratio::from_integer(1) {
        report.reason = Some("k must be below 1/15".into());
        return Ok(report);
    }
    // low_degree_count <= k n
    if (low_degree_count as u128) * (*k.denom() as u128) > (*k.numer() as u128) * n as u128 {
        report.reason = Some("too many vertices of degree at most 2".into());
        return Ok(report);
    }
    let Ok(embedding) = planar_embedding(g) else {
        report.reason = Some("graph is not planar".into());
        return Ok(report);
    };
    report.applicable = true;
    report.cycle_count = count_short_cycles(g, 6)?.total;
    report.short_face_count = embedding.plane_face_sizes().iter().filter(|&&s| s <= 6).count();
    report.holds = Some(meets(report.cycle_count, n, k, 28));
    report.faces_hold = Some(meets(report.short_face_count as u64, n, k, 14));
    Ok(report)
}

/// Cheaper variant for the exhaustive sweeps: cycles only, from bitset rows.
pub(crate) fn lemma1_cycles_hold(rows: &[u64], k: Ratio<u64>) -> (u64, bool) {
    let cycles = super::cycles::count_cycles_rows(rows, 6);
    (cycles, meets(cycles, rows.len(), k, 28))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    fn r(p: u64, q: u64) -> Ratio<u64> {
        Ratio::new(p, q)
    }

    #[test]
    fn k4_at_zero() {
        let rep = lemma1_check(&named::k4(), r(0, 1)).unwrap();
        assert!(rep.applicable);
        assert_eq!(rep.cycle_count, 7);
        assert!((rep.bound - 4.0 / 28.0).abs() < 1e-15);
        assert_eq!(rep.holds, Some(true));
        assert_eq!(rep.short_face_count, 4);
        assert_eq!(rep.faces_hold, Some(true));
    }

    #[test]
    fn octahedron_and_icosahedron() {
        let rep = lemma1_check(&named::octahedron(), r(0, 1)).unwrap();
        assert!(rep.cycle_count >= 8);
        assert!((rep.bound - 6.0 / 28.0).abs() < 1e-15);
        assert_eq!(rep.holds, Some(true));

        let rep = lemma1_check(&named::icosahedron(), r(1, 43)).unwrap();
        assert!((rep.bound - 12.0 / 43.0).abs() < 1e-12);
        assert!(rep.bound < 1.0);
        assert_eq!(rep.holds, Some(true));
        assert_eq!(rep.short_face_count, 20);
    }

    #[test]
    fn preconditions_are_not_failures() {
        let rep = lemma1_check(&LabelledGraph::cycle(5), r(1, 43)).unwrap();
        assert!(!rep.applicable);
        assert_eq!(rep.holds, None);
        assert_eq!(rep.low_degree_count, 5);

        let rep = lemma1_check(&named::k4(), r(1, 15)).unwrap();
        assert!(!rep.applicable);

        let k6 = LabelledGraph::complete(6);
        let rep = lemma1_check(&k6, r(0, 1)).unwrap();
        assert!(!rep.applicable);
        assert_eq!(rep.reason.as_deref(), Some("graph is not planar"));
    }

    #[test]
    fn exact_boundary_comparison() {
        // k = 1/43 makes the bound exactly n/43
        assert!(meets(1, 43, r(1, 43), 28));
        assert!(!meets(1, 44, r(1, 43), 28));
        assert!(meets(2, 44, r(1, 43), 28));
    }
}
