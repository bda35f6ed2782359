//! Metropolis chains with a uniform target on `P(n, d, D)`.
//!
//! Moves are edge insertion, edge deletion (pair chosen uniformly) and the two-switch
//! `ab, cd -> ac, bd`. Proposals leaving the class are rejected; the insert/delete
//! weight ratio is corrected in the acceptance probability.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::enumeration::{enumerate_class, EnumerationError};
use crate::graph::{in_class, ClassSpec, LabelledGraph};
use crate::graph6;
use crate::planarity::is_planar;

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("start graph is not in {0}")]
    StartOutsideClass(String),
    #[error("invalid chain configuration: {0}")]
    BadConfig(String),
    #[error("class is not enumerable: {0}")]
    NotEnumerable(#[from] EnumerationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoveWeights {
    pub insert: f64,
    pub delete: f64,
    pub two_switch: f64,
}

impl Default for MoveWeights {
    fn default() -> Self {
        MoveWeights {
            insert: 1.0,
            delete: 1.0,
            two_switch: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub spec: ClassSpec,
    pub steps: u64,
    pub seed: u64,
    pub weights: MoveWeights,
    /// Defaults to `10 n^2`.
    pub burn_in: Option<u64>,
    /// Defaults to `n^2`.
    pub thinning: Option<u64>,
}

impl ChainConfig {
    pub fn new(spec: ClassSpec, steps: u64, seed: u64) -> Self {
        ChainConfig {
            spec,
            steps,
            seed,
            weights: MoveWeights::default(),
            burn_in: None,
            thinning: None,
        }
    }

    pub fn burn_in_steps(&self) -> u64 {
        self.burn_in.unwrap_or(10 * (self.spec.n as u64).pow(2))
    }

    pub fn thinning_steps(&self) -> u64 {
        self.thinning.unwrap_or((self.spec.n as u64).pow(2)).max(1)
    }

    fn validate(&self) -> Result<(), SamplerError> {
        let w = [self.weights.insert, self.weights.delete, self.weights.two_switch];
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(SamplerError::BadConfig("move weights must be finite and nonnegative".into()));
        }
        if w.iter().all(|&x| x == 0.0) {
            return Err(SamplerError::BadConfig("move weights are all zero".into()));
        }
        Ok(())
    }
}

/// Which move a step proposed and whether it was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Insert(bool),
    Delete(bool),
    TwoSwitch(bool),
}

impl Step {
    pub fn accepted(self) -> bool {
        matches!(self, Step::Insert(true) | Step::Delete(true) | Step::TwoSwitch(true))
    }
}

/// A single chain. Strictly sequential; run several with distinct seeds for parallelism.
pub struct Chain {
    spec: ClassSpec,
    weights: MoveWeights,
    rng: ChaCha8Rng,
    state: LabelledGraph,
}

impl Chain {
    pub fn new(cfg: &ChainConfig, start: LabelledGraph) -> Result<Self, SamplerError> {
        cfg.validate()?;
        if !in_class(&start, &cfg.spec).unwrap_or(false) {
            return Err(SamplerError::StartOutsideClass(cfg.spec.to_string()));
        }
        Ok(Chain {
            spec: cfg.spec,
            weights: cfg.weights,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            state: start,
        })
    }

    pub fn state(&self) -> &LabelledGraph {
        &self.state
    }

    fn random_pair(&mut self) -> Option<(usize, usize)> {
        let n = self.state.order();
        if n < 2 {
            return None;
        }
        let u = self.rng.random_range(1..=n);
        let mut v = self.rng.random_range(1..n);
        if v >= u {
            v += 1;
        }
        Some((u.min(v), u.max(v)))
    }

    fn take(&mut self, candidate: LabelledGraph, touched: &[usize], planarity: bool) -> bool {
        let fits = touched.iter().all(|&v| self.spec.admits_degree(candidate.degree(v)));
        if fits && (!planarity || is_planar(&candidate)) {
            self.state = candidate;
            true
        } else {
            false
        }
    }

    pub fn step(&mut self) -> Step {
        let MoveWeights {
            insert,
            delete,
            two_switch,
        } = self.weights;
        let roll = self.rng.random::<f64>() * (insert + delete + two_switch);
        if roll < insert + delete {
            let inserting = roll < insert;
            let Some((u, v)) = self.random_pair() else {
                return if inserting { Step::Insert(false) } else { Step::Delete(false) };
            };
            if inserting {
                if self.state.has_edge(u, v) || !self.ratio_accepts(delete / insert) {
                    return Step::Insert(false);
                }
                let next = self.state.with_edits(&[], &[(u, v)]).expect("absent edge");
                Step::Insert(self.take(next, &[u, v], true))
            } else {
                if !self.state.has_edge(u, v) || !self.ratio_accepts(insert / delete) {
                    return Step::Delete(false);
                }
                let next = self.state.with_edits(&[(u, v)], &[]).expect("present edge");
                Step::Delete(self.take(next, &[u, v], false))
            }
        } else {
            Step::TwoSwitch(self.two_switch())
        }
    }

    fn ratio_accepts(&mut self, ratio: f64) -> bool {
        ratio >= 1.0 || self.rng.random::<f64>() < ratio
    }

    fn two_switch(&mut self) -> bool {
        let edges = self.state.edges();
        let m = edges.len();
        if m < 2 {
            return false;
        }
        let i = self.rng.random_range(0..m);
        let mut j = self.rng.random_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = edges[i];
        let (mut c, mut d) = edges[j];
        if self.rng.random_bool(0.5) {
            std::mem::swap(&mut c, &mut d);
        }
        let distinct = a != c && a != d && b != c && b != d;
        if !distinct || self.state.has_edge(a, c) || self.state.has_edge(b, d) {
            return false;
        }
        let next = self
            .state
            .with_edits(&[(a, b), (c, d)], &[(a, c), (b, d)])
            .expect("checked edits");
        self.take(next, &[], true)
    }

    pub fn run(&mut self, steps: u64) {
        for _ in 0..steps {
            self.step();
        }
    }
}

/// Run `cfg.steps` steps from `start` and return the final state.
pub fn mcmc_sample(cfg: &ChainConfig, start: LabelledGraph) -> Result<LabelledGraph, SamplerError> {
    let mut chain = Chain::new(cfg, start)?;
    chain.run(cfg.steps);
    Ok(chain.state)
}

/// `count` samples after burn-in, `thinning` steps apart.
pub fn sample_sequence(cfg: &ChainConfig, start: LabelledGraph, count: usize) -> Result<Vec<LabelledGraph>, SamplerError> {
    let mut chain = Chain::new(cfg, start)?;
    chain.run(cfg.burn_in_steps());
    let gap = cfg.thinning_steps();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        chain.run(gap);
        out.push(chain.state.clone());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub spec: ClassSpec,
    pub samples: usize,
    pub burn_in: u64,
    pub thinning: u64,
    /// Size of the class, from enumeration.
    pub states: usize,
    pub visited: usize,
    pub coverage: f64,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// Sample counts keyed by graph6, every class member listed.
    pub frequencies: BTreeMap<String, u64>,
}

/// Chi-square goodness of fit of chain samples against the uniform distribution on the
/// exact class. The chain starts at the first enumerated member.
pub fn uniformity_test(spec: &ClassSpec, samples: usize, cfg: &ChainConfig) -> Result<UniformityReport, SamplerError> {
    let class: Vec<LabelledGraph> = enumerate_class(spec)?.collect();
    let Some(start) = class.first().cloned() else {
        return Err(SamplerError::BadConfig(format!("{spec} is empty")));
    };
    let mut counts: BTreeMap<u64, u64> = class
        .iter()
        .map(|g| (g.slot_mask().expect("enumerable order"), 0))
        .collect();
    let cfg = ChainConfig { spec: *spec, ..cfg.clone() };
    for g in sample_sequence(&cfg, start, samples)? {
        match counts.get_mut(&g.slot_mask().expect("enumerable order")) {
            Some(c) => *c += 1,
            None => return Err(SamplerError::BadConfig("chain left the enumerated class".into())),
        }
    }
    let states = class.len();
    let expected = samples as f64 / states as f64;
    let chi_square: f64 = counts
        .values()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dof = states - 1;
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).expect("positive dof").sf(chi_square)
    };
    let visited = counts.values().filter(|&&c| c > 0).count();
    let frequencies = class
        .iter()
        .map(|g| {
            let key = graph6::encode(g).expect("small graph");
            (key, counts[&g.slot_mask().expect("enumerable order")])
        })
        .collect();
    Ok(UniformityReport {
        spec: *spec,
        samples,
        burn_in: cfg.burn_in_steps(),
        thinning: cfg.thinning_steps(),
        states,
        visited,
        coverage: visited as f64 / states as f64,
        chi_square,
        degrees_of_freedom: dof,
        p_value,
        frequencies,
    })
}
