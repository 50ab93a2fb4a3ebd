//! TDA-based classification.
//!
//! Builds a filtered Vietoris-Rips complex over a point cloud, computes persistent
//! homology to pick a sub-complex, and propagates labels from labeled to unlabeled
//! vertices through simplex links. Ships with k-NN / weighted k-NN baselines,
//! synthetic dataset generators, and a repeated cross-validation harness with
//! macro-averaged multi-class metrics.

pub mod classifiers;
pub mod complex;
pub mod dataset;
pub mod evaluation;
pub mod persistence;
pub mod propagation;
