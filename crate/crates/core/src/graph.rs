//! Weighted graphs, Dirichlet domains and vertex functions.
//!
//! Vertices are kept in lexicographic order of their identifiers so that every
//! iteration (and every serialized output) is deterministic. A
//! [`DirichletDomain`] carries its own local numbering of `Ω ∪ ∂Ω`: interior
//! vertices first, then boundary vertices, each group lexicographic.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Undirected edge stored once with `a < b` (graph vertex indices).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// Finite vertex set with positive measure and symmetric positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    ids: Vec<String>,
    mu: Vec<f64>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
    mu0: f64,
}

/// Collects vertices and edges and validates them into a [`WeightedGraph`].
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: BTreeMap<String, f64>,
    edges: BTreeMap<(String, String), f64>,
    error: Option<Error>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, id: impl Into<String>, mu: f64) -> &mut Self {
        let id = id.into();
        if self.error.is_some() {
            return self;
        }
        if !(mu > 0.0) || !mu.is_finite() {
            self.error = Some(Error::NonpositiveMeasure { id, mu });
        } else if self.vertices.insert(id.clone(), mu).is_some() {
            self.error = Some(Error::DuplicateVertex(id));
        }
        self
    }

    pub fn edge(&mut self, a: impl Into<String>, b: impl Into<String>, weight: f64) -> &mut Self {
        let (a, b) = (a.into(), b.into());
        if self.error.is_some() {
            return self;
        }
        if a == b {
            self.error = Some(Error::SelfLoop(a));
            return self;
        }
        if !(weight > 0.0) || !weight.is_finite() {
            self.error = Some(Error::NonpositiveWeight { a, b, w: weight });
            return self;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&previous) = self.edges.get(&key) {
            let (a, b) = key;
            self.error = Some(if previous == weight {
                Error::DuplicateEdge { a, b }
            } else {
                Error::AsymmetricWeight { a, b, w_ab: previous, w_ba: weight }
            });
            return self;
        }
        self.edges.insert(key, weight);
        self
    }

    pub fn build(&self) -> Result<WeightedGraph> {
        if let Some(e) = &self.error {
            return Err(e.clone());
        }
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let ids: Vec<String> = self.vertices.keys().cloned().collect();
        let mu: Vec<f64> = self.vertices.values().copied().collect();
        let index =
            |id: &String| -> Result<usize> { ids.binary_search(id).map_err(|_| Error::UnknownVertex(id.clone())) };
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut adjacency = vec![Vec::new(); ids.len()];
        for ((a, b), &weight) in &self.edges {
            let (ia, ib) = (index(a)?, index(b)?);
            edges.push(Edge { a: ia, b: ib, weight });
            adjacency[ia].push((ib, weight));
            adjacency[ib].push((ia, weight));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(j, _)| j);
        }
        let mu0 = mu.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(WeightedGraph { ids, mu, edges, adjacency, mu0 })
    }
}

impl WeightedGraph {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.binary_search_by(|x| x.as_str().cmp(id)).ok()
    }

    pub fn mu(&self, v: usize) -> f64 {
        self.mu[v]
    }

    pub fn measures(&self) -> &[f64] {
        &self.mu
    }

    /// Smallest vertex measure.
    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    /// `deg(x) = Σ_{y∼x} w_xy`.
    pub fn degree(&self, v: usize) -> f64 {
        self.adjacency[v].iter().map(|&(_, w)| w).sum()
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<f64> {
        self.adjacency[a].binary_search_by_key(&b, |&(j, _)| j).ok().map(|k| self.adjacency[a][k].1)
    }
}

/// Membership of a graph vertex in a Dirichlet problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Interior,
    Boundary,
    Outside,
}

/// Interior `Ω` and boundary `∂Ω` of a Dirichlet problem, together with the
/// local stencil on `Ω ∪ ∂Ω` used by every operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletDomain {
    n_interior: usize,
    /// Local index to graph vertex index.
    vertices: Vec<usize>,
    ids: Vec<String>,
    mu: Vec<f64>,
    /// Neighbors inside `Ω ∪ ∂Ω`, in local indices.
    adjacency: Vec<Vec<(usize, f64)>>,
    /// Local vertices with at least one neighbor outside `Ω ∪ ∂Ω`.
    open: Vec<bool>,
    omega_measure: f64,
    boundary_adjacency: bool,
    w_min: f64,
}

impl DirichletDomain {
    /// Builds a domain from a role per graph vertex.
    pub fn from_roles(graph: &WeightedGraph, roles: &[Role]) -> Result<Self> {
        if roles.len() != graph.len() {
            return Err(Error::LengthMismatch { expected: graph.len(), got: roles.len() });
        }
        let interior: Vec<usize> = (0..graph.len()).filter(|&v| roles[v] == Role::Interior).collect();
        let boundary: Vec<usize> = (0..graph.len()).filter(|&v| roles[v] == Role::Boundary).collect();
        if interior.is_empty() {
            return Err(Error::EmptyInterior);
        }
        for &v in interior.iter().chain(&boundary) {
            if graph.neighbors(v).is_empty() {
                return Err(Error::IsolatedVertex(graph.id(v).into()));
            }
        }
        for &x in &interior {
            for &(y, _) in graph.neighbors(x) {
                if roles[y] == Role::Outside {
                    return Err(Error::MissingBoundary { interior: graph.id(x).into(), outside: graph.id(y).into() });
                }
            }
        }
        for &y in &boundary {
            if !graph.neighbors(y).iter().any(|&(x, _)| roles[x] == Role::Interior) {
                return Err(Error::DetachedBoundary(graph.id(y).into()));
            }
        }

        let vertices: Vec<usize> = interior.iter().chain(&boundary).copied().collect();
        let mut local = vec![usize::MAX; graph.len()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut adjacency = Vec::with_capacity(vertices.len());
        let mut open = Vec::with_capacity(vertices.len());
        let mut w_min = f64::INFINITY;
        for &v in &vertices {
            let mut list = Vec::new();
            let mut outside = false;
            for &(y, w) in graph.neighbors(v) {
                w_min = w_min.min(w);
                if local[y] == usize::MAX {
                    outside = true;
                } else {
                    list.push((local[y], w));
                }
            }
            adjacency.push(list);
            open.push(outside);
        }
        let n_interior = interior.len();
        let boundary_adjacency =
            interior.iter().all(|&x| graph.neighbors(x).iter().any(|&(y, _)| roles[y] == Role::Boundary));
        Ok(Self {
            n_interior,
            ids: vertices.iter().map(|&v| graph.id(v).into()).collect(),
            mu: vertices.iter().map(|&v| graph.mu(v)).collect(),
            omega_measure: interior.iter().map(|&v| graph.mu(v)).sum(),
            vertices,
            adjacency,
            open,
            boundary_adjacency,
            w_min,
        })
    }

    /// Builds a domain from interior and boundary identifiers; every other
    /// vertex is outside.
    pub fn new<S: AsRef<str>>(graph: &WeightedGraph, interior: &[S], boundary: &[S]) -> Result<Self> {
        let mut roles = vec![Role::Outside; graph.len()];
        for (list, role) in [(interior, Role::Interior), (boundary, Role::Boundary)] {
            for id in list {
                let id = id.as_ref();
                let v = graph.index_of(id).ok_or_else(|| Error::UnknownVertex(id.into()))?;
                if roles[v] != Role::Outside {
                    return Err(Error::OverlappingDomain(id.into()));
                }
                roles[v] = role;
            }
        }
        Self::from_roles(graph, &roles)
    }

    /// The whole vertex set as interior with an empty boundary, for problems
    /// posed on all of a finite graph.
    pub fn whole_graph(graph: &WeightedGraph) -> Result<Self> {
        Self::from_roles(graph, &vec![Role::Interior; graph.len()])
    }

    /// Number of vertices in `Ω ∪ ∂Ω`.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn n_interior(&self) -> usize {
        self.n_interior
    }

    pub fn n_boundary(&self) -> usize {
        self.vertices.len() - self.n_interior
    }

    pub fn is_interior(&self, local: usize) -> bool {
        local < self.n_interior
    }

    /// Graph vertex index of a local vertex.
    pub fn graph_vertex(&self, local: usize) -> usize {
        self.vertices[local]
    }

    pub fn id(&self, local: usize) -> &str {
        &self.ids[local]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn local_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn mu(&self, local: usize) -> f64 {
        self.mu[local]
    }

    pub fn measures(&self) -> &[f64] {
        &self.mu
    }

    pub fn interior_measures(&self) -> &[f64] {
        &self.mu[..self.n_interior]
    }

    /// Neighbors inside `Ω ∪ ∂Ω`.
    pub fn neighbors(&self, local: usize) -> &[(usize, f64)] {
        &self.adjacency[local]
    }

    /// True when some vertex of `Ω ∪ ∂Ω` has a neighbor outside it.
    pub fn is_open(&self, local: usize) -> bool {
        self.open[local]
    }

    /// `Ω ∪ ∂Ω` is closed under adjacency.
    pub fn is_closed(&self) -> bool {
        !self.open.iter().any(|&o| o)
    }

    /// Iterated Laplacians of order `m` stay inside `Ω ∪ ∂Ω`: every vertex
    /// within `⌈m/2⌉` steps of `Ω` lies in `Ω ∪ ∂Ω`.
    pub fn supports_order(&self, m: u32) -> bool {
        m <= 2 || self.is_closed()
    }

    /// `|Ω| = Σ_{x∈Ω} μ(x)`.
    pub fn omega_measure(&self) -> f64 {
        self.omega_measure
    }

    /// Every interior vertex has a boundary neighbor.
    pub fn boundary_adjacency(&self) -> bool {
        self.boundary_adjacency
    }

    pub fn mu_min_interior(&self) -> f64 {
        self.interior_measures().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mu_max(&self) -> f64 {
        self.mu.iter().copied().fold(0.0, f64::max)
    }

    pub fn mu_min(&self) -> f64 {
        self.mu.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Smallest weight over edges incident to `Ω ∪ ∂Ω`.
    pub fn w_min(&self) -> f64 {
        self.w_min
    }
}

/// True iff every interior vertex has at least one boundary neighbor.
pub fn check_boundary_adjacency(domain: &DirichletDomain) -> bool {
    domain.boundary_adjacency()
}

/// Real values on `Ω ∪ ∂Ω` in the local numbering of a [`DirichletDomain`].
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFunction {
    values: Vec<f64>,
    n_interior: usize,
}

impl GraphFunction {
    pub fn zeros(domain: &DirichletDomain) -> Self {
        Self { values: vec![0.0; domain.len()], n_interior: domain.n_interior() }
    }

    pub fn constant(domain: &DirichletDomain, c: f64) -> Self {
        Self { values: vec![c; domain.len()], n_interior: domain.n_interior() }
    }

    pub fn new(domain: &DirichletDomain, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::LengthMismatch { expected: domain.len(), got: values.len() });
        }
        Ok(Self { values, n_interior: domain.n_interior() })
    }

    /// Dirichlet function with the given interior values and zero on `∂Ω`.
    pub fn from_interior(domain: &DirichletDomain, interior: &[f64]) -> Result<Self> {
        if interior.len() != domain.n_interior() {
            return Err(Error::LengthMismatch { expected: domain.n_interior(), got: interior.len() });
        }
        let mut values = vec![0.0; domain.len()];
        values[..interior.len()].copy_from_slice(interior);
        Ok(Self { values, n_interior: domain.n_interior() })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn interior(&self) -> &[f64] {
        &self.values[..self.n_interior]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, local: usize) -> f64 {
        self.values[local]
    }

    /// Vanishes identically on `∂Ω`.
    pub fn is_dirichlet(&self) -> bool {
        self.values[self.n_interior..].iter().all(|&x| x == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0.0)
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self { values: self.values.iter().map(|x| t * x).collect(), n_interior: self.n_interior }
    }

    pub(crate) fn check_len(&self, domain: &DirichletDomain) -> Result<()> {
        if self.values.len() != domain.len() || self.n_interior != domain.n_interior() {
            return Err(Error::LengthMismatch { expected: domain.len(), got: self.values.len() });
        }
        Ok(())
    }

    pub(crate) fn require_dirichlet(&self, domain: &DirichletDomain) -> Result<()> {
        self.check_len(domain)?;
        match (self.n_interior..self.values.len()).find(|&i| self.values[i] != 0.0) {
            Some(i) => Err(Error::NotDirichlet(domain.id(i).into())),
            None => Ok(()),
        }
    }
}
