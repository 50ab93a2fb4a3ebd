//! Persistent homology over Z/2 and persistence-interval selection.
//!
//! Diagrams come from standard boundary-matrix column reduction in canonical
//! filtration order (value, dimension, lexicographic vertices). Infinite bars
//! in the complex's truncation dimension never get the chance to die, so they
//! are dropped as artifacts; everything else is kept, with zero-length pairs
//! flagged rather than discarded.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::complex::FilteredComplex;

#[derive(Debug, Error)]
pub enum PersistenceError {
    #[error("diagram set has no intervals in any dimension")]
    EmptyDiagramSet,
    #[error("no usable interval to select from")]
    EmptySelection,
}

/// One (birth, death) pair of a homology class; `death` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PersistenceInterval {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

impl PersistenceInterval {
    pub fn new(dim: usize, birth: f64, death: f64) -> Self {
        Self { dim, birth, death }
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_infinite()
    }

    /// Zero-length pairs pair a simplex with an immediate killer; they carry
    /// no homology and selection skips them by default.
    pub fn is_zero_life(&self) -> bool {
        self.birth == self.death
    }

    pub fn life(&self) -> f64 {
        self.death - self.birth
    }

    /// Replaces an infinite death by the top of the filtration.
    pub fn theta(&self, max_eps: f64) -> Self {
        if self.is_infinite() {
            Self::new(self.dim, self.birth, max_eps)
        } else {
            *self
        }
    }

    /// Lifetime after the theta transformation.
    pub fn int_value(&self, max_eps: f64) -> f64 {
        self.theta(max_eps).life()
    }
}

/// Replaces an infinite death by `max_eps`, the identity on finite intervals.
pub fn theta_transform(d: &PersistenceInterval, max_eps: f64) -> PersistenceInterval {
    d.theta(max_eps)
}

/// Per-dimension persistence diagrams of one filtered complex.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct DiagramSet {
    /// `diagrams[d]` holds the dimension-d intervals, indices 0..=dimension cap.
    pub diagrams: Vec<Vec<PersistenceInterval>>,
    /// Top of the filtration value collection.
    pub max_eps: f64,
}

impl DiagramSet {
    pub fn dimensions(&self) -> usize {
        self.diagrams.len()
    }

    pub fn diagram(&self, dim: usize) -> &[PersistenceInterval] {
        self.diagrams.get(dim).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn total_intervals(&self) -> usize {
        self.diagrams.iter().map(Vec::len).sum()
    }

    /// Intervals of one dimension with zero-length pairs dropped.
    pub fn positive(&self, dim: usize) -> Vec<PersistenceInterval> {
        self.diagram(dim)
            .iter()
            .copied()
            .filter(|d| !d.is_zero_life())
            .collect()
    }

    /// Number of classes alive at `eps` in the given dimension.
    pub fn betti_at(&self, dim: usize, eps: f64) -> usize {
        self.diagram(dim)
            .iter()
            .filter(|d| d.birth <= eps && eps < d.death)
            .count()
    }

    /// CSV dump: `dim,birth,death` with `inf` for infinite deaths.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,birth,death\n");
        for diagram in &self.diagrams {
            for d in diagram {
                let death = if d.is_infinite() {
                    "inf".to_string()
                } else {
                    format!("{}", d.death)
                };
                out.push_str(&format!("{},{},{}\n", d.dim, d.birth, death));
            }
        }
        out
    }
}

/// Computes persistence diagrams of a filtered complex over Z/2.
pub fn compute_persistence(k: &FilteredComplex) -> DiagramSet {
    let cap = k.dimension_cap();
    let simplices = k.canonical_simplices();
    let mut position: HashMap<crate::complex::Simplex, u32> =
        HashMap::with_capacity(simplices.len());
    for (i, (s, _)) in simplices.iter().enumerate() {
        position.insert(s.clone(), i as u32);
    }

    let n = simplices.len();
    // reduced columns, kept for later additions
    let mut columns: Vec<Vec<u32>> = Vec::with_capacity(n);
    // row -> column that has this pivot
    let mut pivot_owner: Vec<Option<u32>> = vec![None; n];
    let mut killed: Vec<bool> = vec![false; n];
    let mut diagrams: Vec<Vec<PersistenceInterval>> = vec![Vec::new(); cap + 1];

    for (j, (s, value)) in simplices.iter().enumerate() {
        let mut col: Vec<u32> = s.facets().iter().map(|f| position[f]).collect();
        col.sort_unstable();
        while let Some(&low) = col.last() {
            let Some(owner) = pivot_owner[low as usize] else {
                break;
            };
            col = add_z2(&col, &columns[owner as usize]);
        }
        if let Some(&low) = col.last() {
            pivot_owner[low as usize] = Some(j as u32);
            killed[low as usize] = true;
            let (birth_s, birth_v) = &simplices[low as usize];
            diagrams[birth_s.dim()].push(PersistenceInterval::new(birth_s.dim(), *birth_v, *value));
        }
        columns.push(col);
    }

    for (j, (s, value)) in simplices.iter().enumerate() {
        if columns[j].is_empty() && !killed[j] {
            // an essential class; in the truncation dimension it only looks
            // essential because its killers were never built
            if s.dim() < cap || cap == 0 {
                diagrams[s.dim()].push(PersistenceInterval::new(s.dim(), *value, f64::INFINITY));
            }
        }
    }

    for diagram in &mut diagrams {
        diagram.sort_by(|a, b| {
            a.birth
                .partial_cmp(&b.birth)
                .expect("finite birth")
                .then(a.death.partial_cmp(&b.death).expect("death ordered"))
        });
    }

    DiagramSet {
        diagrams,
        max_eps: k.max_filtration_value(),
    }
}

fn add_z2(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// The interval set fed to selection: the non-empty diagram of largest
/// dimension >= 1, falling back to dimension 0 when nothing higher exists.
pub fn get_persistence_interval_set(
    ds: &DiagramSet,
) -> Result<Vec<PersistenceInterval>, PersistenceError> {
    for dim in (1..ds.dimensions()).rev() {
        if !ds.diagram(dim).is_empty() {
            return Ok(ds.diagram(dim).to_vec());
        }
    }
    if !ds.diagram(0).is_empty() {
        return Ok(ds.diagram(0).to_vec());
    }
    Err(PersistenceError::EmptyDiagramSet)
}

/// How a persistence interval is picked from the candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Interval with the longest (theta-transformed) life.
    MaxInt,
    /// Uniformly random interval.
    RandInt,
    /// Interval whose life is closest to the average life.
    AvgInt,
}

/// Picks an interval by strategy and returns it theta-transformed.
/// Zero-length intervals are excluded by default; ties resolve to the
/// smallest birth, then the smallest death.
pub fn select_interval<R: Rng>(
    d: &[PersistenceInterval],
    strategy: Strategy,
    max_eps: f64,
    rng: &mut R,
) -> Result<PersistenceInterval, PersistenceError> {
    select_interval_with(d, strategy, max_eps, rng, false)
}

pub fn select_interval_with<R: Rng>(
    d: &[PersistenceInterval],
    strategy: Strategy,
    max_eps: f64,
    rng: &mut R,
    include_zero_life: bool,
) -> Result<PersistenceInterval, PersistenceError> {
    let usable: Vec<PersistenceInterval> = d
        .iter()
        .copied()
        .filter(|i| include_zero_life || !i.is_zero_life())
        .collect();
    if usable.is_empty() {
        return Err(PersistenceError::EmptySelection);
    }
    let chosen = match strategy {
        Strategy::MaxInt => pick_by(&usable, |i| i.int_value(max_eps), true),
        Strategy::AvgInt => {
            let avg =
                usable.iter().map(|i| i.int_value(max_eps)).sum::<f64>() / usable.len() as f64;
            pick_by(&usable, |i| (i.int_value(max_eps) - avg).abs(), false)
        }
        Strategy::RandInt => usable[rng.gen_range(0..usable.len())],
    };
    Ok(chosen.theta(max_eps))
}

fn pick_by<F: Fn(&PersistenceInterval) -> f64>(
    d: &[PersistenceInterval],
    key: F,
    maximize: bool,
) -> PersistenceInterval {
    let mut best = d[0];
    let mut best_key = key(&best);
    for cand in &d[1..] {
        let k = key(cand);
        let better = if maximize { k > best_key } else { k < best_key };
        let tie = k == best_key
            && (cand.birth < best.birth || (cand.birth == best.birth && cand.death < best.death));
        if better || tie {
            best = *cand;
            best_key = k;
        }
    }
    best
}
