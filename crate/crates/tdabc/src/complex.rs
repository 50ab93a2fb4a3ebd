//! Filtered simplicial complexes stored as a simplex tree.
//!
//! A complex is built either directly from a point cloud (Vietoris-Rips: a simplex
//! enters the filtration at its diameter) or by hand via [`FilteredComplex::insert`].
//! Neighborhood queries (star, closure, link), sub-level restriction, strong edge
//! collapse of 1-skeletons, and clique expansion all live here.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;

use thiserror::Error;

/// Vertex identifier inside a complex.
pub type VertexId = u32;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("simplex {0} is not in the complex")]
    SimplexNotFound(Simplex),
    #[error("max_dim must be at least 1, got {0}")]
    MaxDimTooSmall(usize),
    #[error("max_dim {max_dim} must be smaller than the number of points {points}")]
    MaxDimTooLarge { max_dim: usize, points: usize },
    #[error("max_filtration must be positive, got {0}")]
    InvalidThreshold(f64),
    #[error("grid step must be positive, got {0}")]
    InvalidGridStep(f64),
    #[error("inserting {simplex} at {value} below existing face value {face_value}")]
    MonotonicityViolation {
        simplex: Simplex,
        value: f64,
        face_value: f64,
    },
    #[error("operation requires a 1-skeleton, complex has dimension {0}")]
    NotASkeleton(usize),
}

/// A combinatorial simplex: strictly increasing vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    vertices: Vec<VertexId>,
}

impl Simplex {
    /// Builds a simplex, rejecting unsorted or repeated vertices.
    pub fn new(vertices: Vec<VertexId>) -> Result<Self, ComplexError> {
        if vertices.is_empty() {
            return Err(ComplexError::InvalidSimplex("no vertices".into()));
        }
        if !vertices.windows(2).all(|w| w[0] < w[1]) {
            return Err(ComplexError::InvalidSimplex(format!(
                "vertices {vertices:?} not strictly increasing"
            )));
        }
        Ok(Self { vertices })
    }

    /// Builds a simplex from vertices in any order, sorting them first.
    pub fn from_unsorted(mut vertices: Vec<VertexId>) -> Result<Self, ComplexError> {
        vertices.sort_unstable();
        Self::new(vertices)
    }

    pub fn vertex(v: VertexId) -> Self {
        Self { vertices: vec![v] }
    }

    pub fn edge(u: VertexId, v: VertexId) -> Result<Self, ComplexError> {
        Self::from_unsorted(vec![u, v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.vertices.iter();
        self.vertices.iter().all(|v| it.by_ref().any(|w| w == v))
    }

    /// All non-empty faces, the simplex itself included: 2^(q+1) - 1 of them.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity((1usize << n) - 1);
        for mask in 1u32..(1u32 << n) {
            let vs = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.vertices[i])
                .collect();
            out.push(Simplex { vertices: vs });
        }
        out
    }

    /// Codimension-1 faces (the boundary), empty for a vertex.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.dim() == 0 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|skip| {
                let vs = self
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, v)| *v)
                    .collect();
                Simplex { vertices: vs }
            })
            .collect()
    }

    /// Vertex-set difference `self \ other`; `None` when nothing remains.
    pub fn minus(&self, other: &Simplex) -> Option<Simplex> {
        let vs: Vec<VertexId> = self
            .vertices
            .iter()
            .copied()
            .filter(|v| !other.contains_vertex(*v))
            .collect();
        if vs.is_empty() {
            None
        } else {
            Some(Simplex { vertices: vs })
        }
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Flat lower-triangular Euclidean distance matrix.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self, ComplexError> {
        if points.is_empty() {
            return Err(ComplexError::EmptyPointSet);
        }
        let dim = points[0].len();
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(ComplexError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        let n = points.len();
        let mut entries = Vec::with_capacity(n * (n - 1) / 2);
        for i in 1..n {
            for j in 0..i {
                let d = euclidean(&points[i], &points[j]);
                entries.push(d);
            }
        }
        Ok(Self { n, entries })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (r, c) = if i > j { (i, j) } else { (j, i) };
        self.entries[r * (r - 1) / 2 + c]
    }

    /// Largest pairwise distance; 0 for a single point.
    pub fn max_distance(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Filtration threshold for Rips construction.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Threshold {
    /// Largest pairwise distance: one component at the top of the filtration.
    Auto,
    Value(f64),
}

impl Threshold {
    pub fn resolve(&self, dm: &DistanceMatrix) -> Result<f64, ComplexError> {
        match *self {
            Threshold::Auto => Ok(dm.max_distance()),
            Threshold::Value(v) if v > 0.0 => Ok(v),
            Threshold::Value(v) => Err(ComplexError::InvalidThreshold(v)),
        }
    }
}

/// How many collapse passes to run over the edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollapseRounds {
    Rounds(usize),
    /// Repeat until a pass removes nothing.
    Fixpoint,
}

#[derive(Debug, Clone)]
struct Node {
    vertex: VertexId,
    value: f64,
    children: Vec<Node>,
}

impl Node {
    fn new(vertex: VertexId, value: f64) -> Self {
        Self {
            vertex,
            value,
            children: Vec::new(),
        }
    }

    fn child_index(&self, v: VertexId) -> Result<usize, usize> {
        self.children.binary_search_by_key(&v, |c| c.vertex)
    }
}

/// A filtered simplicial complex: every stored simplex carries the filtration
/// value at which it enters. Face-closure and value monotonicity are maintained
/// on every insert; vertices always sit at value 0.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    roots: Vec<Node>,
    count: usize,
    dim: usize,
    dim_cap: usize,
}

impl Default for FilteredComplex {
    fn default() -> Self {
        Self::new()
    }
}

impl FilteredComplex {
    pub fn new() -> Self {
        Self {
            roots: Vec::new(),
            count: 0,
            dim: 0,
            dim_cap: 0,
        }
    }

    /// Number of stored simplices, vertices included.
    pub fn simplex_count(&self) -> usize {
        self.count
    }

    pub fn vertex_count(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Largest dimension actually present.
    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// The dimension the construction was truncated at (>= `dimension()`).
    /// Homology in this dimension cannot die and is treated as a truncation
    /// artifact by the persistence computation.
    pub fn dimension_cap(&self) -> usize {
        self.dim_cap
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.roots.iter().map(|r| r.vertex)
    }

    pub fn insert_vertex(&mut self, v: VertexId) {
        if let Err(pos) = self.roots.binary_search_by_key(&v, |r| r.vertex) {
            self.roots.insert(pos, Node::new(v, 0.0));
            self.count += 1;
        }
    }

    /// Inserts a simplex at the given filtration value, creating any missing
    /// faces at the same value (missing vertices go in at 0). Errors when an
    /// existing face sits above `value`.
    pub fn insert(&mut self, simplex: &Simplex, value: f64) -> Result<(), ComplexError> {
        if value < 0.0 || !value.is_finite() {
            return Err(ComplexError::InvalidSimplex(format!(
                "filtration value {value} must be finite and non-negative"
            )));
        }
        for face in simplex.facets() {
            if let Some(fv) = self.filtration_value(&face) {
                if fv > value {
                    return Err(ComplexError::MonotonicityViolation {
                        simplex: simplex.clone(),
                        value,
                        face_value: fv,
                    });
                }
            } else {
                self.insert(&face, value)?;
            }
        }
        for &v in simplex.vertices() {
            self.insert_vertex(v);
        }
        if simplex.dim() == 0 {
            return Ok(());
        }
        self.insert_path(simplex.vertices(), value);
        Ok(())
    }

    fn insert_path(&mut self, vertices: &[VertexId], value: f64) {
        let root_pos = self
            .roots
            .binary_search_by_key(&vertices[0], |r| r.vertex)
            .expect("vertex inserted above");
        let mut node = &mut self.roots[root_pos];
        for (depth, &v) in vertices.iter().enumerate().skip(1) {
            let last = depth == vertices.len() - 1;
            match node.child_index(v) {
                Ok(i) => {
                    node = &mut node.children[i];
                    if last {
                        return; // already present, keep the existing value
                    }
                }
                Err(i) => {
                    debug_assert!(last, "faces are inserted before cofaces");
                    node.children.insert(i, Node::new(v, value));
                    self.count += 1;
                    self.dim = self.dim.max(vertices.len() - 1);
                    self.dim_cap = self.dim_cap.max(self.dim);
                    return;
                }
            }
        }
    }

    fn find(&self, simplex: &Simplex) -> Option<&Node> {
        let vs = simplex.vertices();
        let root_pos = self.roots.binary_search_by_key(&vs[0], |r| r.vertex).ok()?;
        let mut node = &self.roots[root_pos];
        for &v in &vs[1..] {
            let i = node.child_index(v).ok()?;
            node = &node.children[i];
        }
        Some(node)
    }

    pub fn contains(&self, simplex: &Simplex) -> bool {
        self.find(simplex).is_some()
    }

    pub fn filtration_value(&self, simplex: &Simplex) -> Option<f64> {
        self.find(simplex).map(|n| n.value)
    }

    /// Visits every simplex as (vertex path, filtration value), depth-first,
    /// children in increasing vertex order.
    pub fn for_each_simplex<F: FnMut(&[VertexId], f64)>(&self, mut f: F) {
        let mut path = Vec::new();
        for root in &self.roots {
            visit(root, &mut path, &mut f);
        }
        fn visit<F: FnMut(&[VertexId], f64)>(node: &Node, path: &mut Vec<VertexId>, f: &mut F) {
            path.push(node.vertex);
            f(path, node.value);
            for c in &node.children {
                visit(c, path, f);
            }
            path.pop();
        }
    }

    pub fn simplices(&self) -> Vec<(Simplex, f64)> {
        let mut out = Vec::with_capacity(self.count);
        self.for_each_simplex(|path, v| {
            out.push((
                Simplex {
                    vertices: path.to_vec(),
                },
                v,
            ))
        });
        out
    }

    /// Simplices in canonical filtration order: (value, dimension, lexicographic).
    pub fn canonical_simplices(&self) -> Vec<(Simplex, f64)> {
        let mut all = self.simplices();
        all.sort_by(|(sa, va), (sb, vb)| {
            va.partial_cmp(vb)
                .expect("filtration values are finite")
                .then(sa.dim().cmp(&sb.dim()))
                .then(sa.cmp(sb))
        });
        all
    }

    /// The filtration value collection: sorted distinct values, 0 included
    /// whenever the complex is non-empty.
    pub fn filtration_values(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = Vec::with_capacity(self.count);
        self.for_each_simplex(|_, v| vals.push(v));
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        vals.dedup();
        vals
    }

    pub fn max_filtration_value(&self) -> f64 {
        let mut max = 0.0f64;
        self.for_each_simplex(|_, v| max = max.max(v));
        max
    }

    /// All cofaces of `simplex` with their filtration values, itself included.
    pub fn star(&self, simplex: &Simplex) -> Result<Vec<(Simplex, f64)>, ComplexError> {
        self.star_at(simplex, f64::INFINITY)
    }

    fn star_at(&self, simplex: &Simplex, eps: f64) -> Result<Vec<(Simplex, f64)>, ComplexError> {
        match self.filtration_value(simplex) {
            Some(v) if v <= eps => {}
            _ => return Err(ComplexError::SimplexNotFound(simplex.clone())),
        }
        let target = simplex.vertices();
        let mut out = Vec::new();
        let mut path = Vec::new();
        for root in &self.roots {
            if root.vertex > target[0] {
                break;
            }
            collect(root, target, 0, &mut path, eps, &mut out);
        }
        return Ok(out);

        fn collect(
            node: &Node,
            target: &[VertexId],
            matched: usize,
            path: &mut Vec<VertexId>,
            eps: f64,
            out: &mut Vec<(Simplex, f64)>,
        ) {
            if node.value > eps {
                return;
            }
            let mut matched = matched;
            if matched < target.len() {
                if node.vertex == target[matched] {
                    matched += 1;
                } else if node.vertex > target[matched] {
                    // vertices only grow along a path; the needed one cannot appear
                    return;
                }
            }
            path.push(node.vertex);
            if matched == target.len() {
                out.push((
                    Simplex {
                        vertices: path.clone(),
                    },
                    node.value,
                ));
            }
            for c in &node.children {
                collect(c, target, matched, path, eps, out);
            }
            path.pop();
        }
    }

    /// Smallest sub-complex containing every simplex of `set`: the union of all faces.
    pub fn closure(&self, set: &[Simplex]) -> Result<Vec<Simplex>, ComplexError> {
        let mut out = BTreeSet::new();
        for s in set {
            if !self.contains(s) {
                return Err(ComplexError::SimplexNotFound(s.clone()));
            }
            for face in s.faces() {
                out.insert(face);
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Link of `simplex`: for each proper coface u, the simplex u minus the
    /// sigma vertices, weighted by the coface's filtration value (minimum over
    /// cofaces producing the same link simplex).
    pub fn link(&self, simplex: &Simplex) -> Result<Vec<(Simplex, f64)>, ComplexError> {
        self.link_at(simplex, f64::INFINITY)
    }

    fn link_at(&self, simplex: &Simplex, eps: f64) -> Result<Vec<(Simplex, f64)>, ComplexError> {
        let star = self.star_at(simplex, eps)?;
        let mut best: BTreeMap<Simplex, f64> = BTreeMap::new();
        for (coface, value) in star {
            if let Some(rest) = coface.minus(simplex) {
                best.entry(rest)
                    .and_modify(|v| *v = v.min(value))
                    .or_insert(value);
            }
        }
        Ok(best.into_iter().collect())
    }

    /// Sub-level view at filtration value `eps`.
    pub fn restrict(&self, eps: f64) -> SubComplex<'_> {
        SubComplex { complex: self, eps }
    }

    /// Copy of the 1-skeleton.
    pub fn one_skeleton(&self) -> FilteredComplex {
        let mut out = FilteredComplex::new();
        // DFS yields a vertex before any edge starting at it, which is what
        // the vertex-skipping insert_path needs
        self.for_each_simplex(|path, v| match path.len() {
            1 => out.insert_vertex(path[0]),
            2 => {
                out.insert_path(path, v);
            }
            _ => {}
        });
        out.dim_cap = out.dim;
        out
    }

    /// Edges as (u, v, value) with u < v.
    pub fn edges(&self) -> Vec<(VertexId, VertexId, f64)> {
        let mut out = Vec::new();
        self.for_each_simplex(|path, v| {
            if path.len() == 2 {
                out.push((path[0], path[1], v));
            }
        });
        out
    }

    /// Rips expansion: inserts every clique of the 1-skeleton up to `max_dim`,
    /// each at the maximum of its edge values.
    pub fn expansion(&self, max_dim: usize) -> Result<FilteredComplex, ComplexError> {
        if self.dim > 1 {
            return Err(ComplexError::NotASkeleton(self.dim));
        }
        if max_dim < 1 {
            return Err(ComplexError::MaxDimTooSmall(max_dim));
        }
        let verts: Vec<VertexId> = self.vertices().collect();
        let index_of: BTreeMap<VertexId, usize> =
            verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        // upper adjacency: for each vertex, neighbors with larger id
        let mut upper: Vec<Vec<(VertexId, f64)>> = vec![Vec::new(); verts.len()];
        for (u, v, val) in self.edges() {
            upper[index_of[&u]].push((v, val));
        }
        for list in &mut upper {
            list.sort_by_key(|(v, _)| *v);
        }

        let mut out = FilteredComplex::new();
        for &v in &verts {
            out.insert_vertex(v);
        }
        let mut path: Vec<VertexId> = Vec::new();
        for (i, &v) in verts.iter().enumerate() {
            path.push(v);
            expand(
                &mut out, &mut path, 0.0, &upper[i], &upper, &index_of, max_dim,
            );
            path.pop();
        }
        out.dim_cap = max_dim;
        return Ok(out);

        fn expand(
            out: &mut FilteredComplex,
            path: &mut Vec<VertexId>,
            path_value: f64,
            candidates: &[(VertexId, f64)],
            upper: &[Vec<(VertexId, f64)>],
            index_of: &BTreeMap<VertexId, usize>,
            max_dim: usize,
        ) {
            if path.len() > max_dim {
                return;
            }
            for (k, &(w, w_value)) in candidates.iter().enumerate() {
                let value = path_value.max(w_value);
                path.push(w);
                out.insert_path(path, value);
                // next candidates: common upper neighbors of the path and w
                let next = intersect(&candidates[k + 1..], &upper[index_of[&w]]);
                expand(out, path, value, &next, upper, index_of, max_dim);
                path.pop();
            }
        }

        fn intersect(a: &[(VertexId, f64)], b: &[(VertexId, f64)]) -> Vec<(VertexId, f64)> {
            let mut out = Vec::new();
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].0.cmp(&b[j].0) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        out.push((a[i].0, a[i].1.max(b[j].1)));
                        i += 1;
                        j += 1;
                    }
                }
            }
            out
        }
    }

    /// Strong edge collapse on a 1-skeleton: removes every edge that stays
    /// dominated by a single vertex from its own filtration value onward.
    /// Persistence diagrams of the Rips expansion are unchanged in every
    /// dimension (up to zero-length pairs, which carry no homology).
    pub fn collapse_edges(&self, rounds: CollapseRounds) -> Result<FilteredComplex, ComplexError> {
        if self.dim > 1 {
            return Err(ComplexError::NotASkeleton(self.dim));
        }
        let verts: Vec<VertexId> = self.vertices().collect();
        let n = verts.len();
        let index_of: BTreeMap<VertexId, usize> =
            verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();

        // dense value matrix, infinity = absent
        let mut m = vec![f64::INFINITY; n * n];
        let mut edge_list: Vec<(usize, usize, f64)> = Vec::new();
        for (u, v, val) in self.edges() {
            let (a, b) = (index_of[&u], index_of[&v]);
            m[a * n + b] = val;
            m[b * n + a] = val;
            edge_list.push((a, b, val));
        }
        // long edges first: their removal cascades down the filtration
        edge_list.sort_by(|x, y| {
            y.2.partial_cmp(&x.2)
                .expect("finite")
                .then(x.0.cmp(&y.0))
                .then(x.1.cmp(&y.1))
        });

        let max_rounds = match rounds {
            CollapseRounds::Rounds(r) => r,
            CollapseRounds::Fixpoint => usize::MAX,
        };
        let mut pass = 0;
        while pass < max_rounds {
            pass += 1;
            let mut removed_any = false;
            edge_list.retain(|&(a, b, f)| {
                if dominated(&m, n, a, b, f) {
                    m[a * n + b] = f64::INFINITY;
                    m[b * n + a] = f64::INFINITY;
                    removed_any = true;
                    false
                } else {
                    true
                }
            });
            if !removed_any {
                break;
            }
        }

        let mut out = FilteredComplex::new();
        for &v in &verts {
            out.insert_vertex(v);
        }
        let mut kept = edge_list;
        kept.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
        for (a, b, val) in kept {
            out.insert_path(&[verts[a], verts[b]], val);
        }
        out.dim_cap = out.dim;
        return Ok(out);

        /// True when some vertex `v` satisfies N_t[a] ∩ N_t[b] ⊆ N_t[v] for
        /// every t >= f: v must reach a and b by f, and every common neighbor
        /// w no later than w joins the common neighborhood.
        fn dominated(m: &[f64], n: usize, a: usize, b: usize, f: f64) -> bool {
            let ra = &m[a * n..(a + 1) * n];
            let rb = &m[b * n..(b + 1) * n];
            let mut common: Vec<usize> = Vec::new();
            let mut candidates: Vec<usize> = Vec::new();
            for w in 0..n {
                if w == a || w == b {
                    continue;
                }
                if ra[w].is_finite() && rb[w].is_finite() {
                    common.push(w);
                    if ra[w] <= f && rb[w] <= f {
                        candidates.push(w);
                    }
                }
            }
            candidates.iter().any(|&v| {
                let rv = &m[v * n..(v + 1) * n];
                common
                    .iter()
                    .all(|&w| w == v || rv[w] <= ra[w].max(rb[w]).max(f))
            })
        }
    }

    /// Canonical dump: one simplex per line, "v0 v1 ... vq value", in
    /// filtration order (value, dimension, lexicographic vertices).
    pub fn write_dump<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        for (s, v) in self.canonical_simplices() {
            let verts: Vec<String> = s.vertices().iter().map(|x| x.to_string()).collect();
            writeln!(w, "{} {}", verts.join(" "), v)?;
        }
        Ok(())
    }

    pub fn dump_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dump(&mut buf).expect("write to Vec");
        String::from_utf8(buf).expect("ascii dump")
    }
}

/// Sub-level view of a complex: exactly the simplices with value <= eps.
#[derive(Debug, Clone, Copy)]
pub struct SubComplex<'a> {
    complex: &'a FilteredComplex,
    eps: f64,
}

impl<'a> SubComplex<'a> {
    pub fn parent(&self) -> &'a FilteredComplex {
        self.complex
    }

    pub fn threshold(&self) -> f64 {
        self.eps
    }

    pub fn contains(&self, simplex: &Simplex) -> bool {
        matches!(self.complex.filtration_value(simplex), Some(v) if v <= self.eps)
    }

    pub fn filtration_value(&self, simplex: &Simplex) -> Option<f64> {
        self.complex
            .filtration_value(simplex)
            .filter(|v| *v <= self.eps)
    }

    pub fn star(&self, simplex: &Simplex) -> Result<Vec<(Simplex, f64)>, ComplexError> {
        self.complex.star_at(simplex, self.eps)
    }

    pub fn link(&self, simplex: &Simplex) -> Result<Vec<(Simplex, f64)>, ComplexError> {
        self.complex.link_at(simplex, self.eps)
    }

    pub fn simplices(&self) -> Vec<(Simplex, f64)> {
        self.complex
            .simplices()
            .into_iter()
            .filter(|(_, v)| *v <= self.eps)
            .collect()
    }

    pub fn simplex_count(&self) -> usize {
        let mut c = 0;
        self.complex.for_each_simplex(|_, v| {
            if v <= self.eps {
                c += 1;
            }
        });
        c
    }
}

/// Builds the Vietoris-Rips complex of a point cloud: a simplex is present iff
/// its dimension is at most `max_dim` and its diameter at most the threshold;
/// the filtration value is the diameter (0 for vertices).
pub fn build_rips(
    points: &[Vec<f64>],
    max_dim: usize,
    threshold: Threshold,
) -> Result<FilteredComplex, ComplexError> {
    let dm = DistanceMatrix::from_points(points)?;
    build_rips_from_distances(&dm, max_dim, threshold, None)
}

/// Rips construction with edge values snapped up to multiples of `step`,
/// mirroring a filtration sampled on a fixed epsilon grid.
pub fn build_rips_grid(
    points: &[Vec<f64>],
    max_dim: usize,
    threshold: Threshold,
    step: f64,
) -> Result<FilteredComplex, ComplexError> {
    if step <= 0.0 || !step.is_finite() {
        return Err(ComplexError::InvalidGridStep(step));
    }
    let dm = DistanceMatrix::from_points(points)?;
    build_rips_from_distances(&dm, max_dim, threshold, Some(step))
}

pub fn build_rips_from_distances(
    dm: &DistanceMatrix,
    max_dim: usize,
    threshold: Threshold,
    grid_step: Option<f64>,
) -> Result<FilteredComplex, ComplexError> {
    if max_dim < 1 {
        return Err(ComplexError::MaxDimTooSmall(max_dim));
    }
    if max_dim >= dm.len() {
        return Err(ComplexError::MaxDimTooLarge {
            max_dim,
            points: dm.len(),
        });
    }
    let eps = threshold.resolve(dm)?;
    let mut skeleton = FilteredComplex::new();
    for v in 0..dm.len() {
        skeleton.insert_vertex(v as VertexId);
    }
    for i in 0..dm.len() {
        for j in (i + 1)..dm.len() {
            let mut d = dm.get(i, j);
            if let Some(step) = grid_step {
                d = (d / step).ceil() * step;
            }
            if d <= eps {
                skeleton.insert_path(&[i as VertexId, j as VertexId], d);
            }
        }
    }
    skeleton.dim_cap = skeleton.dim;
    skeleton.expansion(max_dim)
}
