//! Planarity testing, rotation systems and face walks, short cycles, and the
//! low-degree short-cycle bound.

mod cycles;
pub(crate) mod lemma1;
pub(crate) mod lr;
pub mod small;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::LabelledGraph;

pub use cycles::{count_short_cycles, short_cycles, CycleReport, MAX_CYCLE_LENGTH};
pub use lemma1::{lemma1_check, Lemma1Report};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanarityError {
    #[error("graph is not planar")]
    NotPlanar,
    #[error("cycle length cap {0} is outside 3..=8")]
    CycleLengthCap(usize),
    #[error("fraction {0} must be non-negative with a non-zero denominator")]
    BadFraction(String),
}

fn zero_based_edges(g: &LabelledGraph) -> Vec<(usize, usize)> {
    g.edges().into_iter().map(|(u, v)| (u - 1, v - 1)).collect()
}

/// Left-right planarity test.
pub fn is_planar(g: &LabelledGraph) -> bool {
    lr::lr_is_planar(g.order(), &zero_based_edges(g))
}

/// A combinatorial embedding of a planar graph.
pub fn planar_embedding(g: &LabelledGraph) -> Result<RotationSystem, PlanarityError> {
    let orders = lr::lr_embedding(g.order(), &zero_based_edges(g)).ok_or(PlanarityError::NotPlanar)?;
    let rotations = orders
        .into_iter()
        .map(|ns| ns.into_iter().map(|w| w + 1).collect())
        .collect();
    Ok(RotationSystem { rotations })
}

/// Clockwise cyclic order of neighbours around each vertex (1-based labels).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationSystem {
    rotations: Vec<Vec<usize>>,
}

impl RotationSystem {
    pub fn from_rotations(rotations: Vec<Vec<usize>>) -> Self {
        RotationSystem { rotations }
    }

    pub fn order(&self) -> usize {
        self.rotations.len()
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotations[v - 1]
    }

    /// Every edge of `g` appears exactly once around each endpoint, and nothing else does.
    pub fn is_consistent_with(&self, g: &LabelledGraph) -> bool {
        if self.order() != g.order() {
            return false;
        }
        (1..=g.order()).all(|v| {
            let mut around = self.rotation(v).to_vec();
            around.sort_unstable();
            around == g.neighbors(v).collect::<Vec<_>>()
        })
    }

    fn predecessor(&self, at: usize, of: usize) -> usize {
        let rot = self.rotation(at);
        let i = rot.iter().position(|&x| x == of).expect("half-edge present");
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// Boundary walks: the orbits of `(v -> w) |-> (w -> ccw_w(v))`. Each walk lists
    /// its vertices in order; its length is the face size with repeated edges counted
    /// twice. Isolated vertices contribute no walk.
    pub fn face_walks(&self) -> Vec<Vec<usize>> {
        let mut seen: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
        let mut walks = Vec::new();
        for v in 1..=self.order() {
            for &w in self.rotation(v) {
                if seen.contains(&(v, w)) {
                    continue;
                }
                let mut walk = Vec::new();
                let (mut a, mut b) = (v, w);
                while seen.insert((a, b)) {
                    walk.push(a);
                    let c = self.predecessor(b, a);
                    a = b;
                    b = c;
                }
                walks.push(walk);
            }
        }
        walks
    }

    /// Face sizes of the plane embedding: within each component the walks are faces;
    /// across components the largest walk of each is merged into a single outer face.
    pub fn plane_face_sizes(&self) -> Vec<usize> {
        let walks = self.face_walks();
        let comp = self.component_ids();
        let components = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut per_comp: Vec<Vec<usize>> = vec![Vec::new(); components];
        for walk in &walks {
            per_comp[comp[walk[0] - 1]].push(walk.len());
        }
        let mut sizes = Vec::new();
        let mut outer = 0;
        for mut faces in per_comp {
            faces.sort_unstable();
            // an isolated vertex has no walk; it sits in the outer face
            if let Some(largest) = faces.pop() {
                outer += largest;
            }
            sizes.extend(faces);
        }
        sizes.push(outer);
        sizes
    }

    /// Number of faces of the plane embedding, `e - n + k + 1` for a planar rotation.
    pub fn face_count(&self) -> usize {
        if self.order() == 0 {
            return 1;
        }
        self.plane_face_sizes().len()
    }

    fn component_ids(&self) -> Vec<usize> {
        let n = self.order();
        let mut id = vec![usize::MAX; n];
        let mut next = 0;
        for s in 1..=n {
            if id[s - 1] != usize::MAX {
                continue;
            }
            id[s - 1] = next;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in self.rotation(v) {
                    if id[w - 1] == usize::MAX {
                        id[w - 1] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        id
    }
}
