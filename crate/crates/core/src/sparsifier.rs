//! Randomized list sparsification.
//!
//! Every vertex `v` gets a proper colouring `ψ_v` of its local star bundle
//! with at most `γΔ` colours, and every colour `c` in a list at `v` is sent
//! to a uniform random slot `σ_v(c)` of the palette `[m]`. An edge `uv` of
//! class `G_S` keeps the colours `c ∈ L(uv)` with `σ_u(c)` and `σ_v(c)` both
//! hit by `ψ` on `G_S`. Incident edges whose profiles meet but differ then
//! have disjoint lists, so the classes can be coloured independently.
//!
//! At the instance sizes this crate handles, the size and load properties of
//! the restricted lists fail often. The pipeline therefore validates every
//! outcome, retries with fresh samples, and finally falls back to exact list
//! colouring of the whole conflict graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exact_color::{hypergraph_index, list_feasible, Budget, ColourError, ListOutcome};
use crate::fraclp::Rational;
use crate::graph_core::{
    Colour, ColouringCertificate, GraphCollection, GraphError, ListAssignment, Multihypergraph,
    Profile, SimpleGraph, Vertex,
};

/// Node budget for the exact fallback inside one class.
const CLASS_BUDGET: u64 = 200_000;
/// Random greedy orders tried per class before the exact fallback.
const GREEDY_ROUNDS: usize = 8;

#[derive(Debug, Error)]
pub enum SparsifyError {
    #[error("epsilon must lie strictly between 0 and 1/10, got {0}")]
    Epsilon(Rational),
    #[error("palette size m = {m} exceeds list floor m' = {m_prime}")]
    Palette { m: usize, m_prime: usize },
    #[error("star bundle at vertex {vertex}: {source}")]
    Gamma { vertex: Vertex, source: ColourError },
    #[error("star bundle at vertex {vertex} needs {needed} colours, palette has {m}")]
    PaletteTooSmall {
        vertex: Vertex,
        needed: usize,
        m: usize,
    },
    #[error("list of edge {edge:?} has {size} colours, at least {needed} required")]
    ListTooShort {
        edge: (Vertex, Vertex),
        size: usize,
        needed: usize,
    },
    #[error("degree gadget is empty: 2εΔ rounds up to {0}")]
    EmptyGadget(usize),
    #[error("all {attempts} samples violated the size or load property")]
    RetriesExhausted {
        attempts: usize,
        best: Box<SparseLists>,
    },
    #[error("class {profile} cannot be coloured from its restricted lists")]
    ClassInfeasible { profile: Profile },
    #[error("no list colouring exists for the collection")]
    Infeasible,
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        source: Box<SparsifyError>,
    },
    #[error(transparent)]
    Colour(#[from] ColourError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsifyParams {
    pub epsilon: Rational,
    pub seed: u64,
    pub max_retries: usize,
    /// Palette size; `⌈(1+ε)γΔ⌉` when unset.
    pub m: Option<usize>,
    /// Minimum list size; `⌈(1+5ε)γΔ⌉` when unset.
    pub m_prime: Option<usize>,
    pub gadgets: bool,
    pub budget: Budget,
}

impl Default for SparsifyParams {
    fn default() -> Self {
        SparsifyParams {
            epsilon: Rational::new(1, 12),
            seed: 0,
            max_retries: 20,
            m: None,
            m_prime: None,
            gadgets: false,
            budget: Budget::default(),
        }
    }
}

impl SparsifyParams {
    fn check(&self) -> Result<(), SparsifyError> {
        if !self.epsilon.is_positive() || self.epsilon >= Rational::new(1, 10) {
            return Err(SparsifyError::Epsilon(self.epsilon.clone()));
        }
        Ok(())
    }

    /// `(m, m')` for a given `γΔ`.
    pub fn palette_sizes(&self, gamma_delta: usize) -> Result<(usize, usize), SparsifyError> {
        let gd = Rational::from(gamma_delta);
        let m = self
            .m
            .unwrap_or_else(|| ceil_usize(&((Rational::one() + self.epsilon.clone()) * gd.clone())))
            .max(1);
        let m_prime = self.m_prime.unwrap_or_else(|| {
            ceil_usize(&((Rational::one() + Rational::integer(5) * self.epsilon.clone()) * gd))
        });
        if m > m_prime.max(1) {
            return Err(SparsifyError::Palette { m, m_prime });
        }
        Ok((m, m_prime))
    }
}

fn ceil_usize(r: &Rational) -> usize {
    usize::try_from(r.ceil()).expect("palette sizes fit in usize")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaReport {
    /// `γΔ`: the largest star-bundle index over all vertices.
    pub gamma_delta: usize,
    pub vertex: Option<Vertex>,
    pub per_vertex: BTreeMap<Vertex, usize>,
}

/// `γΔ = max_v χ'(R_1(v), ..., R_k(v))`, with the colourings that realize it.
pub fn compute_gamma(
    collection: &GraphCollection,
    budget: Budget,
) -> Result<(GammaReport, StarPalettes), SparsifyError> {
    let mut cache: HashMap<Multihypergraph, (usize, Vec<Colour>)> = HashMap::new();
    let mut report = GammaReport {
        gamma_delta: 0,
        vertex: None,
        per_vertex: BTreeMap::new(),
    };
    let mut psi = vec![[0 as Colour; 2]; collection.edge_count()];
    for &v in collection.vertices() {
        let h = collection.local_stars(v)?;
        if !cache.contains_key(&h) {
            let solved = hypergraph_index(&h, budget);
            if !solved.optimal {
                return Err(SparsifyError::Gamma {
                    vertex: v,
                    source: ColourError::BudgetExceeded(budget.nodes),
                });
            }
            cache.insert(h.clone(), (solved.optimum, solved.certificate.assignment));
        }
        let (index, colours) = &cache[&h];
        report.per_vertex.insert(v, *index);
        if report.vertex.is_none() || *index > report.gamma_delta {
            report.gamma_delta = *index;
            report.vertex = Some(v);
        }
        // items of the certificate follow the expanded order of `h`
        let mut by_edge: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for &id in collection.incident(v) {
            let key = collection.edges()[id]
                .profile
                .indices()
                .map(|i| i - 1)
                .collect();
            by_edge.entry(key).or_default().push(id);
        }
        let mut item = 0;
        for (e, mult) in h.edges() {
            for &id in &by_edge[e][..*mult] {
                let side = usize::from(collection.edges()[id].v == v);
                psi[id][side] = colours[item];
                item += 1;
            }
        }
    }
    Ok((report, StarPalettes { psi }))
}

/// The colourings `ψ_v`: for edge `uv` (with `u < v`), `psi[id] = [ψ_u(uv), ψ_v(uv)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarPalettes {
    pub psi: Vec<[Colour; 2]>,
}

impl StarPalettes {
    pub fn at(&self, collection: &GraphCollection, id: usize, v: Vertex) -> Colour {
        self.psi[id][usize::from(collection.edges()[id].v == v)]
    }

    /// Largest colour count used at a vertex.
    pub fn colours_used(&self) -> usize {
        self.psi
            .iter()
            .flat_map(|p| p.iter())
            .map(|&c| c as usize + 1)
            .max()
            .unwrap_or(0)
    }
}

/// Star palettes fitting in `[m]`.
pub fn star_palettes(
    collection: &GraphCollection,
    m: usize,
    budget: Budget,
) -> Result<StarPalettes, SparsifyError> {
    let (gamma, palettes) = compute_gamma(collection, budget)?;
    if gamma.gamma_delta > m {
        return Err(SparsifyError::PaletteTooSmall {
            vertex: gamma.vertex.expect("a vertex attains γΔ"),
            needed: gamma.gamma_delta,
            m,
        });
    }
    Ok(palettes)
}

/// Adds, for every class `G_S` and vertex `v` with `0 < deg_S(v) < t`,
/// `t - deg_S(v)` gadgets in `G_S` hanging from `v`, where `t = ⌈2εΔ⌉`. A
/// gadget is a clique on `t + 1` new vertices joined to `v` by one edge.
pub fn attach_degree_gadgets(
    collection: &GraphCollection,
    epsilon: &Rational,
) -> Result<GraphCollection, SparsifyError> {
    let delta = collection.max_degree();
    let t = ceil_usize(&(Rational::integer(2) * epsilon.clone() * Rational::from(delta)));
    if t < 2 {
        return Err(SparsifyError::EmptyGadget(t));
    }
    let mut next: Vertex = collection.vertices().iter().max().map_or(0, |v| v + 1);
    let mut edges: Vec<(Vertex, Vertex, Profile)> = collection
        .edges()
        .iter()
        .map(|e| (e.u, e.v, e.profile))
        .collect();
    for &s in collection.partition_by_profile().keys() {
        for &v in collection.vertices() {
            let d = collection.class_degree(s, v);
            if d == 0 || d >= t {
                continue;
            }
            for _ in d..t {
                let clique: Vec<Vertex> = (next..next + t as Vertex + 1).collect();
                next += t as Vertex + 1;
                for (a, &x) in clique.iter().enumerate() {
                    for &y in &clique[a + 1..] {
                        edges.push((x, y, s));
                    }
                }
                edges.push((v, clique[0], s));
            }
        }
    }
    Ok(GraphCollection::new(
        collection.k(),
        collection.vertices(),
        edges,
    )?)
}

/// `σ_v` for every vertex: colour to palette slot in `0..m`.
pub type Sigma = BTreeMap<Vertex, BTreeMap<Colour, u32>>;

/// Independent uniform maps `σ_v: universe(v) → [m]`, drawn from the given
/// seed and stream in vertex then colour order.
pub fn sample_sigma(
    universe: &BTreeMap<Vertex, BTreeSet<Colour>>,
    m: usize,
    seed: u64,
    stream: u64,
) -> Sigma {
    assert!(m >= 1, "palette must be nonempty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    universe
        .iter()
        .map(|(&v, colours)| {
            let map = colours
                .iter()
                .map(|&c| (c, rng.gen_range(0..m as u32)))
                .collect();
            (v, map)
        })
        .collect()
}

/// Colours appearing in some list at each vertex.
pub fn colour_universe(
    collection: &GraphCollection,
    lists: &ListAssignment,
) -> BTreeMap<Vertex, BTreeSet<Colour>> {
    collection
        .vertices()
        .iter()
        .map(|&v| {
            let set = collection
                .incident(v)
                .iter()
                .flat_map(|&id| lists.list(id).iter().copied())
                .collect();
            (v, set)
        })
        .collect()
}

/// `L_S(v)`: colours whose slot under `σ_v` is used by `ψ_v` on `G_S`.
pub fn class_list(
    collection: &GraphCollection,
    palettes: &StarPalettes,
    sigma: &Sigma,
    v: Vertex,
    s: Profile,
) -> BTreeSet<Colour> {
    let hit = class_slots(collection, palettes, v, s);
    sigma[&v]
        .iter()
        .filter(|(_, slot)| hit.contains(slot))
        .map(|(&c, _)| c)
        .collect()
}

fn class_slots(
    collection: &GraphCollection,
    palettes: &StarPalettes,
    v: Vertex,
    s: Profile,
) -> BTreeSet<u32> {
    collection
        .incident(v)
        .iter()
        .filter(|&&id| collection.edges()[id].profile == s)
        .map(|&id| palettes.at(collection, id, v))
        .collect()
}

/// `L'(uv) = L(uv) ∩ L_S(u) ∩ L_S(v)` for every edge.
pub fn restrict_lists(
    collection: &GraphCollection,
    lists: &ListAssignment,
    palettes: &StarPalettes,
    sigma: &Sigma,
) -> ListAssignment {
    let mut slots: HashMap<(Vertex, Profile), BTreeSet<u32>> = HashMap::new();
    let mut out = Vec::with_capacity(collection.edge_count());
    for (id, e) in collection.edges().iter().enumerate() {
        for w in [e.u, e.v] {
            slots
                .entry((w, e.profile))
                .or_insert_with(|| class_slots(collection, palettes, w, e.profile));
        }
        let (su, sv) = (&slots[&(e.u, e.profile)], &slots[&(e.v, e.profile)]);
        let kept = lists
            .list(id)
            .iter()
            .copied()
            .filter(|c| su.contains(&sigma[&e.u][c]) && sv.contains(&sigma[&e.v][c]))
            .collect();
        out.push(kept);
    }
    ListAssignment::new(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub holds: bool,
    /// Smallest slack over all constraints; negative when violated.
    pub margin: Option<Rational>,
    pub violations: usize,
    pub witness: Option<String>,
}

impl PropertyCheck {
    fn new() -> Self {
        PropertyCheck {
            holds: true,
            margin: None,
            violations: 0,
            witness: None,
        }
    }

    fn record(&mut self, slack: Rational, witness: impl FnOnce() -> String) {
        if slack.is_negative() {
            self.holds = false;
            self.violations += 1;
        }
        if self.margin.as_ref().is_none_or(|m| slack < *m) {
            if slack.is_negative() || self.witness.is_none() {
                self.witness = Some(witness());
            }
            self.margin = Some(slack);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparseReport {
    /// Incident edges with distinct meeting profiles have disjoint lists.
    pub disjoint: PropertyCheck,
    /// `|L'(uv)| ≥ (1+ε) deg_S(u) deg_S(v) / γΔ`.
    pub size: PropertyCheck,
    /// `Σ γΔ / (deg_S(u) deg_S(v)) ≤ 1` over `uv ∈ G_S` at `v` with `c ∈ L'(uv)`.
    pub load: PropertyCheck,
}

impl SparseReport {
    pub fn holds(&self) -> bool {
        self.disjoint.holds && self.size.holds && self.load.holds
    }

    fn violations(&self) -> usize {
        self.size.violations + self.load.violations
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseLists {
    pub lists: ListAssignment,
    pub report: SparseReport,
    /// Index of the sample that produced these lists.
    pub attempt: usize,
}

/// Checks the three properties of restricted lists `sparse` against `γΔ`.
pub fn check_properties(
    collection: &GraphCollection,
    sparse: &ListAssignment,
    gamma_delta: usize,
    epsilon: &Rational,
) -> SparseReport {
    let edges = collection.edges();
    let gd = Rational::from(gamma_delta.max(1));
    let mut disjoint = PropertyCheck::new();
    for &v in collection.vertices() {
        let ids = collection.incident(v);
        for (a, &e) in ids.iter().enumerate() {
            for &f in &ids[a + 1..] {
                let (p, q) = (edges[e].profile, edges[f].profile);
                if p == q || !p.intersects(q) {
                    continue;
                }
                let shared = sorted_common(sparse.list(e), sparse.list(f));
                let slack = -Rational::from(shared);
                disjoint.record(slack, || {
                    format!(
                        "edges ({},{}) and ({},{}) at {v}",
                        edges[e].u, edges[e].v, edges[f].u, edges[f].v
                    )
                });
            }
        }
    }
    if disjoint.margin.is_none() {
        disjoint.margin = Some(Rational::zero());
    }

    let deg = class_degrees(collection);
    let mut size = PropertyCheck::new();
    for (id, e) in edges.iter().enumerate() {
        let du = deg[&(e.u, e.profile)];
        let dv = deg[&(e.v, e.profile)];
        let need = (Rational::one() + epsilon.clone()) * Rational::from(du * dv) / gd.clone();
        let slack = Rational::from(sparse.list(id).len()) - need;
        size.record(slack, || {
            format!(
                "edge ({},{}) keeps {} colours",
                e.u,
                e.v,
                sparse.list(id).len()
            )
        });
    }

    let mut load = PropertyCheck::new();
    let mut sums: BTreeMap<(Vertex, Profile, Colour), Rational> = BTreeMap::new();
    for (id, e) in edges.iter().enumerate() {
        let w = gd.clone() / Rational::from(deg[&(e.u, e.profile)] * deg[&(e.v, e.profile)]);
        for &c in sparse.list(id) {
            for x in [e.u, e.v] {
                let slot = sums.entry((x, e.profile, c)).or_insert_with(Rational::zero);
                *slot = &*slot + &w;
            }
        }
    }
    for ((v, s, c), total) in &sums {
        load.record(Rational::one() - total.clone(), || {
            format!("vertex {v}, class {s}, colour {c}")
        });
    }
    SparseReport {
        disjoint,
        size,
        load,
    }
}

fn sorted_common(a: &[Colour], b: &[Colour]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn class_degrees(collection: &GraphCollection) -> HashMap<(Vertex, Profile), usize> {
    let mut deg = HashMap::new();
    for e in collection.edges() {
        *deg.entry((e.u, e.profile)).or_insert(0) += 1;
        *deg.entry((e.v, e.profile)).or_insert(0) += 1;
    }
    deg
}

fn check_lists(
    collection: &GraphCollection,
    lists: &ListAssignment,
    m_prime: usize,
) -> Result<(), SparsifyError> {
    if lists.len() != collection.edge_count() {
        return Err(ColourError::ListMismatch {
            expected: collection.edge_count(),
            got: lists.len(),
        }
        .into());
    }
    for (id, e) in collection.edges().iter().enumerate() {
        if lists.list(id).len() < m_prime {
            return Err(SparsifyError::ListTooShort {
                edge: (e.u, e.v),
                size: lists.list(id).len(),
                needed: m_prime,
            });
        }
    }
    Ok(())
}

struct Prepared {
    gamma: GammaReport,
    palettes: StarPalettes,
    m: usize,
    m_prime: usize,
}

fn prepare(
    collection: &GraphCollection,
    params: &SparsifyParams,
) -> Result<Prepared, SparsifyError> {
    params.check()?;
    let (gamma, palettes) = compute_gamma(collection, params.budget)?;
    let (m, m_prime) = params.palette_sizes(gamma.gamma_delta)?;
    if gamma.gamma_delta > m {
        return Err(SparsifyError::PaletteTooSmall {
            vertex: gamma.vertex.expect("a vertex attains γΔ"),
            needed: gamma.gamma_delta,
            m,
        });
    }
    Ok(Prepared {
        gamma,
        palettes,
        m,
        m_prime,
    })
}

/// One sample of restricted lists for attempt `attempt`.
fn sample_once(
    collection: &GraphCollection,
    lists: &ListAssignment,
    prep: &Prepared,
    universe: &BTreeMap<Vertex, BTreeSet<Colour>>,
    params: &SparsifyParams,
    attempt: usize,
) -> SparseLists {
    let sigma = sample_sigma(universe, prep.m, params.seed, attempt as u64);
    let sparse = restrict_lists(collection, lists, &prep.palettes, &sigma);
    let report = check_properties(collection, &sparse, prep.gamma.gamma_delta, &params.epsilon);
    assert!(
        report.disjoint.holds,
        "restricted lists of meeting profiles must be disjoint"
    );
    SparseLists {
        lists: sparse,
        report,
        attempt,
    }
}

/// Samples `σ` until the size and load properties hold, up to
/// `max_retries + 1` samples. On exhaustion the error carries the sample with
/// the fewest violations.
pub fn sparsify(
    collection: &GraphCollection,
    lists: &ListAssignment,
    params: &SparsifyParams,
) -> Result<SparseLists, SparsifyError> {
    let prep = prepare(collection, params)?;
    check_lists(collection, lists, prep.m_prime)?;
    let universe = colour_universe(collection, lists);
    let mut best: Option<SparseLists> = None;
    for attempt in 0..=params.max_retries {
        let s = sample_once(collection, lists, &prep, &universe, params, attempt);
        if s.report.holds() {
            return Ok(s);
        }
        if best
            .as_ref()
            .is_none_or(|b| s.report.violations() < b.report.violations())
        {
            best = Some(s);
        }
    }
    Err(SparsifyError::RetriesExhausted {
        attempts: params.max_retries + 1,
        best: Box::new(best.expect("at least one sample")),
    })
}

/// `μ(uv, c)` for each `c ∈ L'(uv)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedLists {
    pub weights: Vec<Vec<(Colour, Rational)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedReport {
    /// `γΔ̂` used in the weights.
    pub gamma_delta_hat: Rational,
    /// `μ ∈ [δ⁻², δ⁻¹]` with `δ = ε²Δ̂/γ`.
    pub range: PropertyCheck,
    /// `Σ_c μ(uv, c) ≥ 1 + ε`.
    pub mass: PropertyCheck,
    /// `Σ μ(uv, c) ≤ 1` per vertex, class and colour.
    pub load: PropertyCheck,
}

/// Weights `μ(uv, c) = γΔ̂ / (deg_S(u) deg_S(v))` on the restricted lists.
/// `delta_hat` is the maximum degree after gadgets, `Δ` when none were added.
pub fn weighted_lists(
    collection: &GraphCollection,
    sparse: &ListAssignment,
    gamma_delta: usize,
    delta_hat: usize,
) -> WeightedLists {
    let gdh = gamma_delta_hat(collection, gamma_delta, delta_hat);
    let deg = class_degrees(collection);
    let weights = collection
        .edges()
        .iter()
        .enumerate()
        .map(|(id, e)| {
            let mu = gdh.clone() / Rational::from(deg[&(e.u, e.profile)] * deg[&(e.v, e.profile)]);
            sparse.list(id).iter().map(|&c| (c, mu.clone())).collect()
        })
        .collect();
    WeightedLists { weights }
}

fn gamma_delta_hat(collection: &GraphCollection, gamma_delta: usize, delta_hat: usize) -> Rational {
    let delta = collection.max_degree().max(1);
    Rational::from(gamma_delta) * Rational::from(delta_hat.max(1)) / Rational::from(delta)
}

/// Range, mass and load conditions for the weighted lists, with exact margins.
pub fn weighted_list_check(
    collection: &GraphCollection,
    sparse: &ListAssignment,
    gamma_delta: usize,
    delta_hat: usize,
    epsilon: &Rational,
) -> WeightedReport {
    let gdh = gamma_delta_hat(collection, gamma_delta, delta_hat);
    let weighted = weighted_lists(collection, sparse, gamma_delta, delta_hat);
    let edges = collection.edges();
    // δ = ε²Δ̂/γ = ε²Δ̂²/γΔ̂
    let dh = Rational::from(delta_hat.max(1));
    let small = epsilon.clone() * epsilon.clone() * dh.clone() * dh / gdh.clone();
    let upper = Rational::one() / small.clone();
    let lower = upper.clone() * upper.clone();
    let mut range = PropertyCheck::new();
    let mut mass = PropertyCheck::new();
    let mut load = PropertyCheck::new();
    let mut sums: BTreeMap<(Vertex, Profile, Colour), Rational> = BTreeMap::new();
    for (id, e) in edges.iter().enumerate() {
        let ws = &weighted.weights[id];
        let total: Rational = ws.iter().map(|(_, w)| w).sum();
        mass.record(total - (Rational::one() + epsilon.clone()), || {
            format!("edge ({},{})", e.u, e.v)
        });
        for (c, w) in ws {
            let slack = std::cmp::min(w.clone() - lower.clone(), upper.clone() - w.clone());
            range.record(slack, || format!("edge ({},{}), colour {c}", e.u, e.v));
            for x in [e.u, e.v] {
                let slot = sums
                    .entry((x, e.profile, *c))
                    .or_insert_with(Rational::zero);
                *slot = &*slot + w;
            }
        }
    }
    for ((v, s, c), total) in &sums {
        load.record(Rational::one() - total.clone(), || {
            format!("vertex {v}, class {s}, colour {c}")
        });
    }
    WeightedReport {
        gamma_delta_hat: gdh,
        range,
        mass,
        load,
    }
}

/// Colours each class `G_S` from its restricted lists and merges the results.
/// Within a class every pair of adjacent edges conflicts; across classes the
/// restricted lists keep conflicting edges apart.
pub fn colour_by_profile(
    collection: &GraphCollection,
    sparse: &ListAssignment,
    seed: u64,
) -> Result<ColouringCertificate, SparsifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let mut assignment: Vec<Colour> = vec![0; collection.edge_count()];
    for (s, ids) in collection.partition_by_profile() {
        let class = class_graph(collection, &ids);
        let lists = ListAssignment::new(ids.iter().map(|&id| sparse.list(id).to_vec()).collect());
        let colours = colour_class(&class, &lists, &mut rng)
            .ok_or(SparsifyError::ClassInfeasible { profile: s })?;
        for (&id, c) in ids.iter().zip(colours) {
            assignment[id] = c;
        }
    }
    Ok(collection.certify(assignment, Some(sparse))?)
}

/// Line graph of the class with edge ids `ids`; vertex `i` is `ids[i]`.
fn class_graph(collection: &GraphCollection, ids: &[usize]) -> SimpleGraph {
    let pos: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut g = SimpleGraph::new(ids.len());
    for (i, &id) in ids.iter().enumerate() {
        let e = collection.edges()[id];
        for w in [e.u, e.v] {
            for other in collection.incident(w) {
                if let Some(&j) = pos.get(other) {
                    g.add_edge(i, j);
                }
            }
        }
    }
    g
}

fn colour_class(
    g: &SimpleGraph,
    lists: &ListAssignment,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Colour>> {
    let n = g.n();
    if (0..n).any(|i| lists.list(i).is_empty()) {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..GREEDY_ROUNDS {
        order.shuffle(rng);
        let mut colour: Vec<Option<Colour>> = vec![None; n];
        let ok = order.iter().all(|&i| {
            let pick = lists
                .list(i)
                .iter()
                .copied()
                .find(|c| g.neighbours(i).iter().all(|&j| colour[j] != Some(*c)));
            colour[i] = pick;
            pick.is_some()
        });
        if ok {
            return Some(colour.into_iter().map(Option::unwrap).collect());
        }
    }
    match list_feasible(g, lists, Budget::nodes(CLASS_BUDGET)) {
        Ok(ListOutcome::Feasible(cert)) => Some(cert.assignment),
        _ => None,
    }
}

/// How the final colouring was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Restricted lists satisfied every property and coloured class by class.
    Sparsified,
    /// Properties failed on every sample but the best sample still coloured.
    Relaxed,
    /// Exact list colouring of the whole conflict graph from the original lists.
    Direct,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageTimes {
    pub gamma_ms: f64,
    pub gadgets_ms: f64,
    pub sparsify_ms: f64,
    pub colour_ms: f64,
    pub validate_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub seed: u64,
    pub epsilon: Rational,
    pub k: usize,
    pub delta: usize,
    pub gamma_delta: usize,
    pub gamma_vertex: Option<Vertex>,
    pub m: usize,
    pub m_prime: usize,
    pub gadgets: bool,
    /// `max_i Δ(Ĝ_i)`; equals `delta` without gadgets.
    pub delta_hat: usize,
    /// Smallest `δ⁺(G_S)` over the classes.
    pub min_class_degree: usize,
    /// Whether `δ⁺(G_S) ≥ εΔ` holds for every class.
    pub min_degree_ok: bool,
    pub samples: usize,
    pub retries: usize,
    pub route: Route,
    pub properties: Option<SparseReport>,
    pub weighted: Option<WeightedReport>,
    pub colours_used: usize,
    /// `(1 + 2^{k+4} ε) γΔ`.
    pub bound: Rational,
    pub valid: bool,
    pub times: StageTimes,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub certificate: ColouringCertificate,
    pub report: RunReport,
}

// browsers without a monotonic clock report zero timings
#[cfg(not(target_arch = "wasm32"))]
fn now() -> Option<Instant> {
    Some(Instant::now())
}

#[cfg(target_arch = "wasm32")]
fn now() -> Option<Instant> {
    None
}

fn ms(since: Option<Instant>) -> f64 {
    since.map_or(0.0, |t| t.elapsed().as_secs_f64() * 1e3)
}

fn stage(name: &'static str) -> impl Fn(SparsifyError) -> SparsifyError {
    move |e| SparsifyError::Stage {
        stage: name,
        source: Box::new(e),
    }
}

/// Colours `collection` from `lists` (default: the uniform palette
/// `0..m'`) through sparsification, with validation of the result.
pub fn pipeline(
    collection: &GraphCollection,
    lists: Option<&ListAssignment>,
    params: &SparsifyParams,
) -> Result<PipelineOutput, SparsifyError> {
    params.check()?;
    let k = collection.k();
    let delta = collection.max_degree();

    let t = now();
    let (gamma0, _) = compute_gamma(collection, params.budget).map_err(stage("gamma"))?;
    let gamma_ms = ms(t);

    let t = now();
    let working = if params.gadgets {
        attach_degree_gadgets(collection, &params.epsilon).map_err(stage("gadgets"))?
    } else {
        collection.clone()
    };
    let gadgets_ms = ms(t);
    let delta_hat = working.max_degree();

    let t = now();
    let prep = if params.gadgets {
        prepare(&working, params).map_err(stage("gamma"))?
    } else {
        let (m, m_prime) = params.palette_sizes(gamma0.gamma_delta)?;
        let (gamma, palettes) = compute_gamma(&working, params.budget).map_err(stage("gamma"))?;
        Prepared {
            gamma,
            palettes,
            m,
            m_prime,
        }
    };
    let original_lists = match lists {
        Some(l) => l.clone(),
        None => ListAssignment::uniform(collection.edge_count(), 0..prep.m_prime as Colour),
    };
    // gadget edges draw from the full palette of the instance
    let working_lists = if params.gadgets {
        let palette: Vec<Colour> = original_lists
            .lists()
            .iter()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        ListAssignment::new(
            working
                .edges()
                .iter()
                .map(|e| match collection.edge_id(e.u, e.v) {
                    Some(id) => original_lists.list(id).to_vec(),
                    None => palette.clone(),
                })
                .collect(),
        )
    } else {
        original_lists.clone()
    };
    check_lists(&working, &working_lists, prep.m_prime).map_err(stage("sparsify"))?;

    let universe = colour_universe(&working, &working_lists);
    let mut chosen: Option<(SparseLists, ColouringCertificate)> = None;
    let mut best: Option<SparseLists> = None;
    let mut samples = 0;
    let mut colour_ms = 0.0;
    for attempt in 0..=params.max_retries {
        samples += 1;
        let s = sample_once(&working, &working_lists, &prep, &universe, params, attempt);
        if s.report.holds() {
            let tc = now();
            let coloured = colour_by_profile(&working, &s.lists, params.seed ^ attempt as u64);
            colour_ms += ms(tc);
            if let Ok(cert) = coloured {
                if cert.verdict.is_valid() {
                    chosen = Some((s, cert));
                    break;
                }
            }
        }
        if best
            .as_ref()
            .is_none_or(|b| s.report.violations() < b.report.violations())
        {
            best = Some(s);
        }
    }
    let sparsify_ms = ms(t) - colour_ms;

    let tc = now();
    let mut route = Route::Sparsified;
    if chosen.is_none() {
        let b = best.expect("at least one sample");
        if let Ok(cert) = colour_by_profile(&working, &b.lists, params.seed) {
            if cert.verdict.is_valid() {
                route = Route::Relaxed;
                chosen = Some((b, cert));
            }
        }
    }
    let (sparse, working_assignment) = match chosen {
        Some((s, cert)) => (Some(s), Some(cert.assignment)),
        None => (None, None),
    };
    let assignment = match working_assignment {
        Some(a) => collection
            .edges()
            .iter()
            .map(|e| a[working.edge_id(e.u, e.v).expect("original edge kept")])
            .collect(),
        None => {
            route = Route::Direct;
            let g = collection.conflict_graph();
            match list_feasible(&g, &original_lists, params.budget)
                .map_err(|e| stage("colour")(e.into()))?
            {
                ListOutcome::Feasible(cert) => cert.assignment,
                ListOutcome::Infeasible { .. } => {
                    return Err(stage("colour")(SparsifyError::Infeasible))
                }
            }
        }
    };
    colour_ms += ms(tc);

    let t = now();
    let certificate = collection.certify(assignment, Some(&original_lists))?;
    let validate_ms = ms(t);

    let weighted = sparse.as_ref().map(|s| {
        weighted_list_check(
            &working,
            &s.lists,
            prep.gamma.gamma_delta,
            delta_hat,
            &params.epsilon,
        )
    });
    let threshold = params.epsilon.clone() * Rational::from(delta);
    let min_class_degree = collection
        .partition_by_profile()
        .keys()
        .map(|&s| {
            collection
                .min_positive_degree(s)
                .expect("class is nonempty")
        })
        .min()
        .unwrap_or(0);
    let pow = Rational(num_rational::BigRational::from_integer(
        BigInt::from(1) << (k + 4),
    ));
    let bound =
        (Rational::one() + pow * params.epsilon.clone()) * Rational::from(gamma0.gamma_delta);
    let report = RunReport {
        seed: params.seed,
        epsilon: params.epsilon.clone(),
        k,
        delta,
        gamma_delta: gamma0.gamma_delta,
        gamma_vertex: gamma0.vertex,
        m: prep.m,
        m_prime: prep.m_prime,
        gadgets: params.gadgets,
        delta_hat,
        min_class_degree,
        min_degree_ok: Rational::from(min_class_degree) >= threshold,
        samples,
        retries: samples - 1,
        route,
        properties: sparse.as_ref().map(|s| s.report.clone()),
        weighted,
        colours_used: certificate.colours_used,
        bound,
        valid: certificate.verdict.is_valid(),
        times: StageTimes {
            gamma_ms,
            gadgets_ms,
            sparsify_ms,
            colour_ms,
            validate_ms,
        },
    };
    Ok(PipelineOutput {
        certificate,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(k: usize) -> GraphCollection {
        GraphCollection::new(
            k,
            &[],
            [
                (0, 1, Profile::from_indices([1])),
                (1, 2, Profile::from_indices([1])),
            ],
        )
        .unwrap()
    }

    fn triangle_stars(delta: usize) -> GraphCollection {
        let h = Multihypergraph::new(
            3,
            [
                (vec![0, 1], delta / 2),
                (vec![0, 2], delta / 2),
                (vec![1, 2], delta / 2),
            ],
        )
        .unwrap();
        h.to_stars()
    }

    #[test]
    fn gamma_examples() {
        let (g, _) = compute_gamma(&path(1), Budget::default()).unwrap();
        assert_eq!(g.gamma_delta, 2);
        assert_eq!(g.vertex, Some(1));
        let (g, palettes) = compute_gamma(&triangle_stars(6), Budget::default()).unwrap();
        assert_eq!(g.gamma_delta, 9);
        assert_eq!(g.vertex, Some(0));
        assert!(palettes.colours_used() <= 9);
    }

    #[test]
    fn palettes_are_proper_at_each_vertex() {
        let c = triangle_stars(4);
        let (_, p) = compute_gamma(&c, Budget::default()).unwrap();
        let ids = c.incident(0);
        for (a, &e) in ids.iter().enumerate() {
            for &f in &ids[a + 1..] {
                if c.edges()[e].profile.intersects(c.edges()[f].profile) {
                    assert_ne!(p.at(&c, e, 0), p.at(&c, f, 0));
                }
            }
        }
    }

    #[test]
    fn palette_sizes_round_up() {
        let params = SparsifyParams::default();
        assert_eq!(params.palette_sizes(12).unwrap(), (13, 17));
        let bad = SparsifyParams {
            epsilon: Rational::new(1, 10),
            ..SparsifyParams::default()
        };
        assert!(matches!(bad.check(), Err(SparsifyError::Epsilon(_))));
    }

    #[test]
    fn single_edge_gadgets() {
        let c = GraphCollection::new(1, &[], [(0, 1, Profile::from_indices([1]))]).unwrap();
        // Δ = 1, ε = 1/11 gives 2εΔ ≤ 1
        assert!(matches!(
            attach_degree_gadgets(&c, &Rational::new(1, 11)),
            Err(SparsifyError::EmptyGadget(1))
        ));
        // a larger ε is only used to exercise the construction
        let g = attach_degree_gadgets(&c, &Rational::integer(1)).unwrap();
        // each endpoint gains one triangle and its pendant edge
        assert_eq!(g.edge_count(), 1 + 2 * 4);
        assert_eq!(g.class_degree(Profile::from_indices([1]), 0), 2);
        assert_eq!(
            g.min_positive_degree(Profile::from_indices([1])).unwrap(),
            2
        );
    }

    #[test]
    fn sigma_is_reproducible() {
        let mut universe = BTreeMap::new();
        universe.insert(0, (0..10).collect::<BTreeSet<Colour>>());
        let a = sample_sigma(&universe, 4, 7, 0);
        assert_eq!(a, sample_sigma(&universe, 4, 7, 0));
        assert_ne!(a, sample_sigma(&universe, 4, 7, 1));
        let constant = sample_sigma(&universe, 1, 3, 0);
        assert!(constant[&0].values().all(|&s| s == 0));
    }

    #[test]
    fn restricted_lists_are_sublists_and_disjoint() {
        let c = triangle_stars(6);
        let params = SparsifyParams::default();
        let prep = prepare(&c, &params).unwrap();
        let lists = ListAssignment::uniform(c.edge_count(), 0..prep.m_prime as Colour);
        let universe = colour_universe(&c, &lists);
        for attempt in 0..20 {
            let s = sample_once(&c, &lists, &prep, &universe, &params, attempt);
            assert!(s.report.disjoint.holds);
            for id in 0..c.edge_count() {
                assert!(s.lists.list(id).iter().all(|x| lists.contains(id, *x)));
            }
        }
    }

    #[test]
    fn weighted_conditions_restate_properties() {
        let c = triangle_stars(4);
        let params = SparsifyParams::default();
        let prep = prepare(&c, &params).unwrap();
        let lists = ListAssignment::uniform(c.edge_count(), 0..prep.m_prime as Colour);
        let universe = colour_universe(&c, &lists);
        for attempt in 0..20 {
            let s = sample_once(&c, &lists, &prep, &universe, &params, attempt);
            let w = weighted_list_check(
                &c,
                &s.lists,
                prep.gamma.gamma_delta,
                c.max_degree(),
                &params.epsilon,
            );
            assert_eq!(w.mass.holds, s.report.size.holds);
            assert_eq!(w.load.holds, s.report.load.holds);
            assert_eq!(w.load.margin, s.report.load.margin);
        }
    }

    #[test]
    fn overloaded_colour_is_reported() {
        // two edges of one class at vertex 1, both keeping colour 0
        let c = path(1);
        let sparse = ListAssignment::new(vec![vec![0], vec![0]]);
        let w = weighted_list_check(&c, &sparse, 2, 2, &Rational::new(1, 12));
        assert!(!w.load.holds);
        assert_eq!(
            w.load.witness.as_deref(),
            Some("vertex 1, class {1}, colour 0")
        );
    }

    #[test]
    fn matching_classes_colour_greedily() {
        let c = GraphCollection::new(
            2,
            &[],
            [
                (0, 1, Profile::from_indices([1])),
                (2, 3, Profile::from_indices([2])),
            ],
        )
        .unwrap();
        let sparse = ListAssignment::new(vec![vec![5], vec![5]]);
        let cert = colour_by_profile(&c, &sparse, 0).unwrap();
        assert!(cert.verdict.is_valid());
        assert_eq!(cert.assignment, vec![5, 5]);
    }

    #[test]
    fn pipeline_on_a_path() {
        let out = pipeline(&path(1), None, &SparsifyParams::default()).unwrap();
        assert!(out.report.valid);
        assert_eq!(out.certificate.colours_used, 2);
        assert_eq!(out.report.gamma_delta, 2);
    }
}
