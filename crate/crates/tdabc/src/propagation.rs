//! Label propagation over a sub-complex.
//!
//! A training label set turns each simplex into a vote vector (one slot per
//! label); a test vertex collects the votes of its link, each simplex weighted
//! by the inverse filtration value of the coface that connects it. The argmax
//! wins, exact ties resolve uniformly at random, and an empty link escalates
//! to coarser filtration levels before falling back to the nearest labeled
//! neighbor.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::complex::{
    ComplexError, DistanceMatrix, FilteredComplex, Simplex, SubComplex, VertexId,
};

#[derive(Debug, Error)]
pub enum PropagationError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("vertex {0} has no labeled point to fall back on")]
    NoLabeledPoint(VertexId),
}

/// Training association: vertex id -> label id for labeled vertices only.
#[derive(Debug, Clone)]
pub struct TrainLabels {
    map: HashMap<VertexId, usize>,
    num_labels: usize,
}

impl TrainLabels {
    pub fn new(map: HashMap<VertexId, usize>, num_labels: usize) -> Self {
        debug_assert!(map.values().all(|&l| l < num_labels));
        Self { map, num_labels }
    }

    pub fn from_pairs(pairs: &[(VertexId, usize)], num_labels: usize) -> Self {
        Self::new(pairs.iter().copied().collect(), num_labels)
    }

    pub fn get(&self, v: VertexId) -> Option<usize> {
        self.map.get(&v).copied()
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn labeled_vertices(&self) -> impl Iterator<Item = (VertexId, usize)> + '_ {
        self.map.iter().map(|(&v, &l)| (v, l))
    }
}

/// Element of the free module over labels: one non-negative contribution per label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelVector(Vec<f64>);

impl LabelVector {
    pub fn zero(num_labels: usize) -> Self {
        Self(vec![0.0; num_labels])
    }

    pub fn indicator(label: usize, num_labels: usize) -> Self {
        let mut v = vec![0.0; num_labels];
        v[label] = 1.0;
        Self(v)
    }

    pub fn contributions(&self) -> &[f64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn add_assign(&mut self, other: &LabelVector) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
    }

    pub fn add_scaled(&mut self, other: &LabelVector, factor: f64) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a += b * factor;
        }
    }

    pub fn bump(&mut self, label: usize, amount: f64) {
        self.0[label] += amount;
    }

    /// Indices attaining the maximum contribution (exact float equality).
    pub fn argmax_set(&self) -> Vec<usize> {
        let max = self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == max)
            .map(|(i, _)| i)
            .collect()
    }

    /// Contributions rescaled to sum to 1; all zeros stay all zeros.
    pub fn normalized(&self) -> Vec<f64> {
        let total: f64 = self.0.iter().sum();
        if total == 0.0 {
            self.0.clone()
        } else {
            self.0.iter().map(|x| x / total).collect()
        }
    }
}

/// Which rescue path produced a label when the link vote came up empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fallback {
    None,
    EscalatedLevel,
    NearestNeighbor,
}

/// Outcome of labeling one vertex.
#[derive(Debug, Clone)]
pub struct LabelAssignment {
    pub label: usize,
    pub scores: LabelVector,
    pub probabilities: Vec<f64>,
    pub was_tie: bool,
    pub fallback_used: Fallback,
    pub link_size: usize,
}

impl LabelAssignment {
    /// Per-point explanation record.
    pub fn explanation(&self, vertex: VertexId) -> serde_json::Value {
        serde_json::json!({
            "vertex": vertex,
            "chosen_label": self.label,
            "scores": self.scores.contributions(),
            "link_size": self.link_size,
            "fallback_used": self.fallback_used,
        })
    }
}

/// Sum of label indicators over the vertices of a simplex; unlabeled vertices
/// contribute nothing.
pub fn association(simplex: &Simplex, labels: &TrainLabels) -> LabelVector {
    let mut out = LabelVector::zero(labels.num_labels());
    for &v in simplex.vertices() {
        if let Some(l) = labels.get(v) {
            out.bump(l, 1.0);
        }
    }
    out
}

/// Link-weighted vote vector of a vertex: each link simplex contributes its
/// association divided by the filtration value of the connecting coface.
/// A zero-distance coface outvotes every finite weight outright.
pub fn extension(
    v: VertexId,
    view: &SubComplex<'_>,
    labels: &TrainLabels,
) -> Result<LabelVector, PropagationError> {
    let link = view.link(&Simplex::vertex(v))?;
    Ok(weighted_vote(&link, labels))
}

fn weighted_vote(link: &[(Simplex, f64)], labels: &TrainLabels) -> LabelVector {
    let mut finite = LabelVector::zero(labels.num_labels());
    let mut coincident = LabelVector::zero(labels.num_labels());
    for (simplex, weight) in link {
        let assoc = association(simplex, labels);
        if assoc.is_zero() {
            continue;
        }
        if *weight == 0.0 {
            coincident.add_assign(&assoc);
        } else {
            finite.add_scaled(&assoc, 1.0 / weight);
        }
    }
    if coincident.is_zero() {
        finite
    } else {
        coincident
    }
}

/// A simplex is useful when it has strictly more training than test vertices.
pub fn is_useful(simplex: &Simplex, train: &[VertexId], test: &[VertexId]) -> bool {
    let in_train = simplex
        .vertices()
        .iter()
        .filter(|v| train.contains(v))
        .count();
    let in_test = simplex
        .vertices()
        .iter()
        .filter(|v| test.contains(v))
        .count();
    in_train > in_test
}

/// Count of useful simplices in a sub-level view, exposed as a diagnostic.
pub fn count_useful(view: &SubComplex<'_>, train: &[VertexId], test: &[VertexId]) -> usize {
    view.simplices()
        .iter()
        .filter(|(s, _)| is_useful(s, train, test))
        .count()
}

/// Everything needed to label vertices of one complex.
pub struct LabelingContext<'a> {
    pub complex: &'a FilteredComplex,
    pub labels: &'a TrainLabels,
    /// Pairwise distances of the underlying points, for the nearest-neighbor
    /// fallback; hand-built complexes may omit it.
    pub distances: Option<&'a DistanceMatrix>,
}

impl<'a> LabelingContext<'a> {
    /// Labels `v` inside the sub-level view at `eps`, escalating through
    /// coarser levels and finally the nearest labeled neighbor when the link
    /// carries no label information.
    pub fn label<R: Rng>(
        &self,
        v: VertexId,
        eps: f64,
        rng: &mut R,
    ) -> Result<LabelAssignment, PropagationError> {
        let view = self.complex.restrict(eps);
        let link = view.link(&Simplex::vertex(v))?;
        let scores = weighted_vote(&link, self.labels);
        if !scores.is_zero() {
            return Ok(self.finish(scores, link.len(), Fallback::None, rng));
        }

        // escalate: the next sub-level whose link sees a labeled vertex is the
        // one admitting the cheapest edge from v to a labeled neighbor
        if let Some(eps_next) = self.cheapest_labeled_edge(v, eps) {
            let link = self.complex.restrict(eps_next).link(&Simplex::vertex(v))?;
            let scores = weighted_vote(&link, self.labels);
            if !scores.is_zero() {
                return Ok(self.finish(scores, link.len(), Fallback::EscalatedLevel, rng));
            }
        }

        // isolated from every labeled vertex inside the complex
        if let Some(dm) = self.distances {
            let mut best: Option<(f64, usize)> = None;
            for (u, l) in self.labels.labeled_vertices() {
                let d = dm.get(v as usize, u as usize);
                let better = match best {
                    None => true,
                    Some((bd, bl)) => d < bd || (d == bd && l < bl),
                };
                if better {
                    best = Some((d, l));
                }
            }
            if let Some((_, l)) = best {
                let scores = LabelVector::indicator(l, self.labels.num_labels());
                return Ok(self.finish(scores, 0, Fallback::NearestNeighbor, rng));
            }
        }
        Err(PropagationError::NoLabeledPoint(v))
    }

    fn finish<R: Rng>(
        &self,
        scores: LabelVector,
        link_size: usize,
        fallback_used: Fallback,
        rng: &mut R,
    ) -> LabelAssignment {
        let argmax = scores.argmax_set();
        let was_tie = argmax.len() > 1;
        let label = if was_tie {
            argmax[rng.gen_range(0..argmax.len())]
        } else {
            argmax[0]
        };
        let probabilities = scores.normalized();
        LabelAssignment {
            label,
            scores,
            probabilities,
            was_tie,
            fallback_used,
            link_size,
        }
    }

    /// Smallest edge value connecting `v` to a labeled vertex, if above `eps`.
    fn cheapest_labeled_edge(&self, v: VertexId, eps: f64) -> Option<f64> {
        let star = self.complex.star(&Simplex::vertex(v)).ok()?;
        let mut best: Option<f64> = None;
        for (coface, value) in star {
            if coface.dim() != 1 {
                continue;
            }
            let other = coface.vertices().iter().find(|&&u| u != v)?;
            if self.labels.get(*other).is_some() && value > eps {
                best = Some(best.map_or(value, |b: f64| b.min(value)));
            }
        }
        best
    }
}
