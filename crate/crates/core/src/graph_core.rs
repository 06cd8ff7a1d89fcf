//! Graph collections, edge profiles, profile hypergraphs and colouring validation.
//!
//! Graph indices are 1-based throughout (`1..=k`). Profiles are bitmasks where
//! bit `i - 1` records membership in `G_i`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = u32;
pub type Colour = u32;

/// Largest supported number of graphs in one collection.
pub const MAX_GRAPHS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("loop edge at vertex {0}")]
    Loop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("graph index {index} outside 1..={k}")]
    GraphIndex { index: usize, k: usize },
    #[error("edge {{{0}, {1}}} has an empty membership set")]
    EmptyMembership(Vertex, Vertex),
    #[error("k = {0} is outside the supported range 1..=64")]
    UnsupportedK(usize),
    #[error("unknown edge {{{0}, {1}}}")]
    UnknownEdge(Vertex, Vertex),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("edge class for profile {0} is empty")]
    EmptyClass(Profile),
    #[error("colouring covers {got} edges but the collection has {expected}")]
    MissingColour { expected: usize, got: usize },
    #[error("hyperedge {0} is empty or leaves the vertex range")]
    BadHyperedge(usize),
}

/// Set of graph indices, stored as a bitmask over `1..=64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Profile(pub u64);

impl Profile {
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut bits = 0u64;
        for i in indices {
            debug_assert!((1..=MAX_GRAPHS).contains(&i));
            bits |= 1u64 << (i - 1);
        }
        Profile(bits)
    }

    /// The full profile `[k]`.
    pub fn full(k: usize) -> Self {
        if k >= 64 {
            Profile(u64::MAX)
        } else {
            Profile((1u64 << k) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_GRAPHS).contains(&i) && self.0 >> (i - 1) & 1 == 1
    }

    pub fn intersects(self, other: Profile) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Lowest graph index in the profile.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |b| bits >> b & 1 == 1).map(|b| b + 1)
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub profile: Profile,
}

impl Edge {
    pub fn other(&self, w: Vertex) -> Vertex {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

fn ordered(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// `k` simple graphs on a shared vertex set. Each unordered pair appears once,
/// with its membership set (the profile) recording which graphs contain it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphCollection {
    k: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    index: HashMap<(Vertex, Vertex), usize>,
    incidence: BTreeMap<Vertex, Vec<usize>>,
}

impl GraphCollection {
    /// Builds a collection from `(u, v, profile)` triples. Edges are stored in
    /// canonical order: sorted by `(min, max)` endpoint.
    pub fn new<I>(k: usize, extra_vertices: &[Vertex], edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Profile)>,
    {
        if k == 0 || k > MAX_GRAPHS {
            return Err(GraphError::UnsupportedK(k));
        }
        let full = Profile::full(k);
        let mut list = Vec::new();
        let mut seen = BTreeSet::new();
        for (u, v, profile) in edges {
            if u == v {
                return Err(GraphError::Loop(u));
            }
            let (a, b) = ordered(u, v);
            if profile.is_empty() {
                return Err(GraphError::EmptyMembership(a, b));
            }
            if profile.0 & !full.0 != 0 {
                let index = (profile.0 & !full.0).trailing_zeros() as usize + 1;
                return Err(GraphError::GraphIndex { index, k });
            }
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            list.push(Edge {
                u: a,
                v: b,
                profile,
            });
        }
        list.sort();
        let mut vertex_set: BTreeSet<Vertex> = extra_vertices.iter().copied().collect();
        for e in &list {
            vertex_set.insert(e.u);
            vertex_set.insert(e.v);
        }
        let mut incidence: BTreeMap<Vertex, Vec<usize>> =
            vertex_set.iter().map(|&v| (v, Vec::new())).collect();
        let mut index = HashMap::with_capacity(list.len());
        for (id, e) in list.iter().enumerate() {
            index.insert((e.u, e.v), id);
            incidence.get_mut(&e.u).unwrap().push(id);
            incidence.get_mut(&e.v).unwrap().push(id);
        }
        Ok(GraphCollection {
            k,
            vertices: vertex_set.into_iter().collect(),
            edges: list,
            index,
            incidence,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.index.get(&ordered(u, v)).copied()
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.incidence.contains_key(&v)
    }

    /// Edge ids incident to `v` (empty for unknown vertices).
    pub fn incident(&self, v: Vertex) -> &[usize] {
        self.incidence.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `deg_{G_i}(v)`.
    pub fn degree_in(&self, i: usize, v: Vertex) -> usize {
        self.incident(v)
            .iter()
            .filter(|&&id| self.edges[id].profile.contains(i))
            .count()
    }

    /// `Δ(G_i)`.
    pub fn max_degree_in(&self, i: usize) -> usize {
        self.vertices
            .iter()
            .map(|&v| self.degree_in(i, v))
            .max()
            .unwrap_or(0)
    }

    /// `max_i Δ(G_i)`.
    pub fn max_degree(&self) -> usize {
        (1..=self.k)
            .map(|i| self.max_degree_in(i))
            .max()
            .unwrap_or(0)
    }

    /// Degree of `v` in the class `G_S`.
    pub fn class_degree(&self, s: Profile, v: Vertex) -> usize {
        self.incident(v)
            .iter()
            .filter(|&&id| self.edges[id].profile == s)
            .count()
    }

    /// Edges of `G_i` as `(u, v)` pairs.
    pub fn graph_edges(&self, i: usize) -> Vec<(Vertex, Vertex)> {
        self.edges
            .iter()
            .filter(|e| e.profile.contains(i))
            .map(|e| (e.u, e.v))
            .collect()
    }

    /// `P(e)` for the edge `{u, v}`.
    pub fn profile(&self, u: Vertex, v: Vertex) -> Result<Profile, GraphError> {
        let (a, b) = ordered(u, v);
        self.edge_id(a, b)
            .map(|id| self.edges[id].profile)
            .ok_or(GraphError::UnknownEdge(a, b))
    }

    /// The classes `G_S` keyed by profile; only nonempty classes appear.
    pub fn partition_by_profile(&self) -> BTreeMap<Profile, Vec<usize>> {
        let mut classes: BTreeMap<Profile, Vec<usize>> = BTreeMap::new();
        for (id, e) in self.edges.iter().enumerate() {
            classes.entry(e.profile).or_default().push(id);
        }
        classes
    }

    /// One hyperedge `P(e)` per edge, on vertex set `[k]`.
    pub fn profile_hypergraph(&self) -> Multihypergraph {
        Multihypergraph::from_profiles(self.k, self.edges.iter().map(|e| e.profile))
    }

    /// Profile hypergraph of the stars `R_1(v), ..., R_k(v)`.
    pub fn local_stars(&self, v: Vertex) -> Result<Multihypergraph, GraphError> {
        if !self.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        Ok(Multihypergraph::from_profiles(
            self.k,
            self.incident(v).iter().map(|&id| self.edges[id].profile),
        ))
    }

    /// Graph on the collection's edges: `e ~ f` iff they share an endpoint and
    /// some graph contains both. Vertex `i` of the result is edge id `i`.
    pub fn conflict_graph(&self) -> SimpleGraph {
        let mut g = SimpleGraph::new(self.edges.len());
        for ids in self.incidence.values() {
            for (a, &e) in ids.iter().enumerate() {
                for &f in &ids[a + 1..] {
                    if self.edges[e].profile.intersects(self.edges[f].profile) {
                        g.add_edge(e, f);
                    }
                }
            }
        }
        g
    }

    /// Minimum positive degree `δ⁺(G_S)`.
    pub fn min_positive_degree(&self, s: Profile) -> Result<usize, GraphError> {
        let mut degree: BTreeMap<Vertex, usize> = BTreeMap::new();
        for e in self.edges.iter().filter(|e| e.profile == s) {
            *degree.entry(e.u).or_default() += 1;
            *degree.entry(e.v).or_default() += 1;
        }
        degree
            .values()
            .copied()
            .min()
            .ok_or(GraphError::EmptyClass(s))
    }

    /// Checks that `assignment` (one colour per edge id) is simultaneously
    /// proper and, when lists are given, respects them.
    pub fn validate(
        &self,
        assignment: &[Colour],
        lists: Option<&ListAssignment>,
    ) -> Result<Verdict, GraphError> {
        if assignment.len() != self.edges.len() {
            return Err(GraphError::MissingColour {
                expected: self.edges.len(),
                got: assignment.len(),
            });
        }
        if let Some(lists) = lists {
            if lists.len() != self.edges.len() {
                return Err(GraphError::Malformed(format!(
                    "list assignment covers {} edges, collection has {}",
                    lists.len(),
                    self.edges.len()
                )));
            }
            for (id, &c) in assignment.iter().enumerate() {
                if !lists.contains(id, c) {
                    let e = self.edges[id];
                    return Ok(Verdict::ListViolation {
                        edge: (e.u, e.v),
                        colour: c,
                    });
                }
            }
        }
        for (&v, ids) in &self.incidence {
            let mut seen: HashMap<(usize, Colour), usize> = HashMap::new();
            for &id in ids {
                let c = assignment[id];
                for i in self.edges[id].profile.indices() {
                    if let Some(&prev) = seen.get(&(i, c)) {
                        let (e, f) = (self.edges[prev], self.edges[id]);
                        return Ok(Verdict::Violation {
                            vertex: v,
                            first: (e.u, e.v),
                            second: (f.u, f.v),
                            graph: i,
                            colour: c,
                        });
                    }
                    seen.insert((i, c), id);
                }
            }
        }
        Ok(Verdict::Valid)
    }

    /// Validates and packages an assignment as a certificate.
    pub fn certify(
        &self,
        assignment: Vec<Colour>,
        lists: Option<&ListAssignment>,
    ) -> Result<ColouringCertificate, GraphError> {
        let verdict = self.validate(&assignment, lists)?;
        Ok(ColouringCertificate::new(assignment, verdict))
    }

    /// Collection restricted to the edges for which `keep` holds; vertices are kept.
    pub fn filter_edges<F: Fn(&Edge) -> bool>(&self, keep: F) -> GraphCollection {
        GraphCollection::new(
            self.k,
            &self.vertices,
            self.edges
                .iter()
                .filter(|e| keep(e))
                .map(|e| (e.u, e.v, e.profile)),
        )
        .expect("subcollection of a valid collection is valid")
    }

    /// Parses the collection JSON format.
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let raw: CollectionJson =
            serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
        if raw.k == 0 || raw.k > MAX_GRAPHS {
            return Err(GraphError::UnsupportedK(raw.k));
        }
        let mut edges = Vec::with_capacity(raw.edges.len());
        for (u, v, members) in raw.edges {
            if u == v {
                return Err(GraphError::Loop(u));
            }
            for &i in &members {
                if i == 0 || i > raw.k {
                    return Err(GraphError::GraphIndex { index: i, k: raw.k });
                }
            }
            let profile = Profile::from_indices(members);
            edges.push((u, v, profile));
        }
        GraphCollection::new(raw.k, &raw.vertices.unwrap_or_default(), edges)
    }

    /// Canonical JSON: edges in stored order, membership ascending. Isolated
    /// vertices are listed under `"vertices"`.
    pub fn to_json(&self) -> String {
        let isolated: Vec<Vertex> = self
            .vertices
            .iter()
            .copied()
            .filter(|&v| self.incident(v).is_empty())
            .collect();
        let raw = CollectionJson {
            k: self.k,
            vertices: (!isolated.is_empty()).then_some(isolated),
            edges: self
                .edges
                .iter()
                .map(|e| (e.u, e.v, e.profile.indices().collect()))
                .collect(),
        };
        serde_json::to_string(&raw).expect("collection serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct CollectionJson {
    k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex, Vec<usize>)>,
}

/// Multiset of nonempty hyperedges over vertex set `0..n`.
///
/// Hyperedges are sorted vertex lists; equal hyperedges are merged by
/// accumulating multiplicity, and edges are kept in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multihypergraph {
    n: usize,
    edges: Vec<(Vec<usize>, usize)>,
}

impl Multihypergraph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vec<usize>, usize)>,
    {
        let mut acc: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (idx, (mut e, mult)) in edges.into_iter().enumerate() {
            e.sort_unstable();
            e.dedup();
            if e.is_empty() || e.iter().any(|&v| v >= n) || mult == 0 {
                return Err(GraphError::BadHyperedge(idx));
            }
            *acc.entry(e).or_default() += mult;
        }
        Ok(Multihypergraph {
            n,
            edges: acc.into_iter().collect(),
        })
    }

    /// Hypergraph on `0..k` with one hyperedge per profile (graph `i` becomes vertex `i - 1`).
    pub fn from_profiles<I: IntoIterator<Item = Profile>>(k: usize, profiles: I) -> Self {
        let edges = profiles
            .into_iter()
            .map(|p| (p.indices().map(|i| i - 1).collect::<Vec<_>>(), 1));
        Multihypergraph::new(k, edges).expect("profiles are nonempty subsets of [k]")
    }

    pub fn empty(n: usize) -> Self {
        Multihypergraph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Distinct hyperedges with their multiplicities.
    pub fn edges(&self) -> &[(Vec<usize>, usize)] {
        &self.edges
    }

    pub fn distinct_edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(|(_, m)| m).sum()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|(e, _)| e.binary_search(&v).is_ok())
            .map(|(_, m)| m)
            .sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Each distinct hyperedge once.
    pub fn simple(&self) -> Multihypergraph {
        Multihypergraph {
            n: self.n,
            edges: self.edges.iter().map(|(e, _)| (e.clone(), 1)).collect(),
        }
    }

    /// Every hyperedge repeated `factor` times.
    pub fn scaled(&self, factor: usize) -> Multihypergraph {
        Multihypergraph {
            n: self.n,
            edges: if factor == 0 {
                Vec::new()
            } else {
                self.edges
                    .iter()
                    .map(|(e, m)| (e.clone(), m * factor))
                    .collect()
            },
        }
    }

    /// Hyperedges listed with multiplicity, in stored order.
    pub fn expanded(&self) -> Vec<&[usize]> {
        self.edges
            .iter()
            .flat_map(|(e, m)| std::iter::repeat_n(e.as_slice(), *m))
            .collect()
    }

    pub fn is_intersecting(&self) -> bool {
        // copies of one nonempty edge always meet each other
        self.edges.iter().enumerate().all(|(a, (e, _))| {
            self.edges[a + 1..]
                .iter()
                .all(|(f, _)| sorted_intersect(e, f))
        })
    }

    pub fn min_edge_size(&self) -> Option<usize> {
        self.edges.iter().map(|(e, _)| e.len()).min()
    }

    /// Line graph of the expanded hypergraph as a simple graph: one vertex per
    /// edge copy, adjacent when the edges meet.
    pub fn conflict_graph(&self) -> SimpleGraph {
        let copies = self.expanded();
        let mut g = SimpleGraph::new(copies.len());
        for a in 0..copies.len() {
            for b in a + 1..copies.len() {
                if sorted_intersect(copies[a], copies[b]) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// Text format: `n m` then `multiplicity v1 v2 ...` per distinct edge, 1-based vertices.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (e, m) in &self.edges {
            out.push_str(&m.to_string());
            for v in e {
                out.push(' ');
                out.push_str(&(v + 1).to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| GraphError::Malformed("missing header line".into()))?;
        let nums = parse_usizes(header)?;
        let [n, m] = nums[..] else {
            return Err(GraphError::Malformed(format!("bad header `{header}`")));
        };
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines.enumerate() {
            let nums = parse_usizes(line)?;
            let (&mult, rest) = nums
                .split_first()
                .ok_or_else(|| GraphError::Malformed(format!("empty edge line {idx}")))?;
            if rest.iter().any(|&v| v == 0 || v > n) {
                return Err(GraphError::BadHyperedge(idx));
            }
            edges.push((rest.iter().map(|v| v - 1).collect(), mult));
        }
        if edges.len() != m {
            return Err(GraphError::Malformed(format!(
                "header announces {m} edges, found {}",
                edges.len()
            )));
        }
        Multihypergraph::new(n, edges)
    }

    /// Stars with a common centre (vertex 0) whose profile hypergraph is this
    /// hypergraph: every edge copy becomes a leaf `1, 2, ...`.
    pub fn to_stars(&self) -> GraphCollection {
        let k = self.n.max(1);
        let mut edges = Vec::new();
        let mut leaf: Vertex = 1;
        for e in self.expanded() {
            edges.push((0, leaf, Profile::from_indices(e.iter().map(|v| v + 1))));
            leaf += 1;
        }
        GraphCollection::new(k, &[0], edges).expect("star edges are distinct")
    }
}

fn parse_usizes(line: &str) -> Result<Vec<usize>, GraphError> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| GraphError::Malformed(format!("not a nonnegative integer: `{t}`")))
        })
        .collect()
}

pub(crate) fn sorted_intersect(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Inverse of [`GraphCollection::profile_hypergraph`] for star collections.
pub fn stars_from_hypergraph(h: &Multihypergraph) -> GraphCollection {
    h.to_stars()
}

/// Undirected simple graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = SimpleGraph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = SimpleGraph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    /// Adds `{a, b}`; loops and repeated edges are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a == b || self.adj[a].contains(&b) {
            return;
        }
        self.adj[a].push(b);
        self.adj[b].push(a);
        self.edge_count += 1;
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (a, nbrs) in self.adj.iter().enumerate() {
            for &b in nbrs {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Ordinary line graph: one vertex per edge (in [`Self::edges`] order).
    pub fn line_graph(&self) -> SimpleGraph {
        let edges = self.edges();
        let mut lg = SimpleGraph::new(edges.len());
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                if a == c || a == d || b == c || b == d {
                    lg.add_edge(i, j);
                }
            }
        }
        lg
    }

    /// First conflicting pair, if `colours` is not proper.
    pub fn find_conflict(&self, colours: &[Colour]) -> Option<(usize, usize)> {
        self.edges()
            .into_iter()
            .find(|&(a, b)| colours[a] == colours[b])
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &a)| vertices[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }

    /// Two-colouring of the vertices when the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n()];
        for start in 0..self.n() {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            let mut stack = vec![start];
            while let Some(a) = stack.pop() {
                let s = side[a].unwrap();
                for &b in &self.adj[a] {
                    match side[b] {
                        None => {
                            side[b] = Some(!s);
                            stack.push(b);
                        }
                        Some(t) if t == s => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(Option::unwrap).collect())
    }
}

/// Finite colour lists, one per item (edge id or graph vertex). Lists are
/// kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ListAssignment {
    lists: Vec<Vec<Colour>>,
}

impl ListAssignment {
    pub fn new(lists: Vec<Vec<Colour>>) -> Self {
        let lists = lists
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        ListAssignment { lists }
    }

    /// Every item gets the palette `colours`.
    pub fn uniform(items: usize, colours: impl IntoIterator<Item = Colour> + Clone) -> Self {
        ListAssignment::new(vec![colours.into_iter().collect(); items])
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn list(&self, item: usize) -> &[Colour] {
        &self.lists[item]
    }

    pub fn lists(&self) -> &[Vec<Colour>] {
        &self.lists
    }

    pub fn contains(&self, item: usize, c: Colour) -> bool {
        self.lists[item].binary_search(&c).is_ok()
    }

    /// Lists file for a collection: `{"lists": [[u, v, [c, ...]], ...]}`.
    pub fn from_json(text: &str, collection: &GraphCollection) -> Result<Self, GraphError> {
        let raw: ListsJson =
            serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
        let mut lists: Vec<Option<Vec<Colour>>> = vec![None; collection.edge_count()];
        for (u, v, colours) in raw.lists {
            let (a, b) = ordered(u, v);
            let id = collection
                .edge_id(a, b)
                .ok_or(GraphError::UnknownEdge(a, b))?;
            if lists[id].replace(colours).is_some() {
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        let mut out = Vec::with_capacity(lists.len());
        for (id, l) in lists.into_iter().enumerate() {
            let e = collection.edges()[id];
            out.push(l.ok_or_else(|| {
                GraphError::Malformed(format!("edge {{{}, {}}} has no list", e.u, e.v))
            })?);
        }
        Ok(ListAssignment::new(out))
    }

    pub fn to_json(&self, collection: &GraphCollection) -> String {
        let raw = ListsJson {
            lists: collection
                .edges()
                .iter()
                .zip(&self.lists)
                .map(|(e, l)| (e.u, e.v, l.clone()))
                .collect(),
        };
        serde_json::to_string(&raw).expect("lists serialize")
    }
}

#[derive(Serialize, Deserialize)]
struct ListsJson {
    lists: Vec<(Vertex, Vertex, Vec<Colour>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    Valid,
    /// Two edges at `vertex`, both in `G_graph`, share `colour`.
    Violation {
        vertex: Vertex,
        first: (Vertex, Vertex),
        second: (Vertex, Vertex),
        graph: usize,
        colour: Colour,
    },
    ListViolation {
        edge: (Vertex, Vertex),
        colour: Colour,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// A colour per item together with the validation verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouringCertificate {
    pub assignment: Vec<Colour>,
    pub colours_used: usize,
    pub verdict: Verdict,
}

impl ColouringCertificate {
    pub fn new(assignment: Vec<Colour>, verdict: Verdict) -> Self {
        let colours_used = assignment.iter().collect::<BTreeSet<_>>().len();
        ColouringCertificate {
            assignment,
            colours_used,
            verdict,
        }
    }

    /// Certificate JSON for a collection: `{"colouring": [[u, v, c], ...]}`.
    pub fn to_json(&self, collection: &GraphCollection) -> String {
        let raw = CertificateJson {
            colouring: collection
                .edges()
                .iter()
                .zip(&self.assignment)
                .map(|(e, &c)| (e.u, e.v, c))
                .collect(),
        };
        serde_json::to_string(&raw).expect("certificate serializes")
    }

    /// Reads a certificate file into a per-edge assignment for `collection`.
    pub fn assignment_from_json(
        text: &str,
        collection: &GraphCollection,
    ) -> Result<Vec<Colour>, GraphError> {
        let raw: CertificateJson =
            serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
        let mut slots: Vec<Option<Colour>> = vec![None; collection.edge_count()];
        for (u, v, c) in raw.colouring {
            let (a, b) = ordered(u, v);
            let id = collection
                .edge_id(a, b)
                .ok_or(GraphError::UnknownEdge(a, b))?;
            if slots[id].replace(c).is_some() {
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        let got = slots.iter().filter(|s| s.is_some()).count();
        if got != slots.len() {
            return Err(GraphError::MissingColour {
                expected: slots.len(),
                got,
            });
        }
        Ok(slots.into_iter().map(Option::unwrap).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    colouring: Vec<(Vertex, Vertex, Colour)>,
}
