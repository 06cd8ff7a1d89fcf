//! Explicit constructions: finite planes over prime fields, extremal
//! multihypergraphs, star collections and the two-graph gadgets.

use thiserror::Error;

use crate::fraclp::{
    nu_search, nu_star, plane_witness, FracError, NuSearchConfig, NuWitness, Rational,
};
use crate::graph_core::{
    Colour, GraphCollection, ListAssignment, Multihypergraph, Profile, SimpleGraph, Vertex,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("order {0} is not prime")]
    NotPrime(usize),
    #[error("{0}")]
    Precondition(String),
    #[error("no fractional-matching witness available for k = {0}")]
    NoWitness(usize),
    #[error(transparent)]
    Frac(#[from] FracError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneKind {
    Projective,
    Affine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlaneSpec {
    pub q: usize,
    pub kind: PlaneKind,
}

impl PlaneSpec {
    pub fn build(&self) -> Result<Multihypergraph, ConstructionError> {
        match self.kind {
            PlaneKind::Projective => projective_plane(self.q),
            PlaneKind::Affine => affine_plane(self.q),
        }
    }
}

pub fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Nonzero vectors of `F_q^3` whose first nonzero coordinate is 1, in
/// lexicographic order.
fn normalized_vectors(q: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(q * q + q + 1);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let v = [a, b, c];
                if v.iter().find(|&&x| x != 0) == Some(&1) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Projective plane `PG(2, q)` for prime `q`: points are 1-dimensional
/// subspaces of `F_q^3`, and each line is the set of points orthogonal to a
/// normalized vector.
pub fn projective_plane(q: usize) -> Result<Multihypergraph, ConstructionError> {
    if !is_prime(q) {
        return Err(ConstructionError::NotPrime(q));
    }
    let points = normalized_vectors(q);
    let lines = points.iter().map(|l| {
        let incident: Vec<usize> = points
            .iter()
            .enumerate()
            .filter(|(_, p)| (l[0] * p[0] + l[1] * p[1] + l[2] * p[2]) % q == 0)
            .map(|(i, _)| i)
            .collect();
        (incident, 1)
    });
    Ok(Multihypergraph::new(points.len(), lines).expect("lines are nonempty point sets"))
}

/// Affine plane `AG(2, q)` for prime `q`: point `(x, y)` has index `x·q + y`;
/// lines are `y = mx + b` and `x = c`.
pub fn affine_plane(q: usize) -> Result<Multihypergraph, ConstructionError> {
    if !is_prime(q) {
        return Err(ConstructionError::NotPrime(q));
    }
    let mut lines = Vec::with_capacity(q * q + q);
    for m in 0..q {
        for b in 0..q {
            lines.push(((0..q).map(|x| x * q + (m * x + b) % q).collect(), 1));
        }
    }
    for c in 0..q {
        lines.push(((0..q).map(|y| c * q + y).collect(), 1));
    }
    Ok(Multihypergraph::new(q * q, lines).expect("lines are nonempty point sets"))
}

/// The order-`(ℓ−1)` projective plane with every line repeated `Δ/ℓ` times:
/// an intersecting multihypergraph of maximum degree `Δ` with
/// `(ℓ − 1 + 1/ℓ)Δ` edges.
pub fn fks_extremal(ell: usize, delta: usize) -> Result<Multihypergraph, ConstructionError> {
    if ell < 2 || (ell > 2 && !is_prime(ell - 1)) {
        return Err(ConstructionError::Precondition(format!(
            "ℓ − 1 must be prime (ℓ = {ell})"
        )));
    }
    if delta == 0 || !delta.is_multiple_of(ell) {
        return Err(ConstructionError::Precondition(format!(
            "ℓ = {ell} must divide Δ = {delta}"
        )));
    }
    let plane = if ell == 2 {
        // the order-1 plane: a triangle
        Multihypergraph::new(3, [(vec![0, 1], 1), (vec![0, 2], 1), (vec![1, 2], 1)])
            .expect("triangle is valid")
    } else {
        projective_plane(ell - 1)?
    };
    Ok(plane.scaled(delta / ell))
}

/// Intersecting family and weights used for the `ν(k)` lower bound: the
/// exhaustive search for `k ≤ 7`, otherwise the best plane-based family.
pub fn witness_for(k: usize) -> Result<NuWitness, ConstructionError> {
    if k == 0 || k > 13 {
        return Err(ConstructionError::NoWitness(k));
    }
    if k <= 7 {
        return Ok(nu_search(k, NuSearchConfig::default())?);
    }
    let family = plane_witness(k).ok_or(ConstructionError::NoWitness(k))?;
    let matching = nu_star(&family);
    Ok(NuWitness {
        k,
        family: Multihypergraph::new(k, family.edges().iter().cloned())
            .expect("plane family fits on k points"),
        matching,
        optimal: false,
        families_explored: 0,
    })
}

/// Multihypergraph with `⌊w(e)Δ⌋` copies of each witness edge: intersecting,
/// maximum degree at most `Δ`, and `χ' = Σ⌊w(e)Δ⌋ ≥ ν(k)Δ − k`.
pub fn nu_lower_bound_hypergraph(
    k: usize,
    delta: usize,
) -> Result<Multihypergraph, ConstructionError> {
    let witness = witness_for(k)?;
    Ok(lower_bound_from_witness(&witness, delta))
}

pub fn lower_bound_from_witness(witness: &NuWitness, delta: usize) -> Multihypergraph {
    let d = Rational::from(delta);
    let edges = witness
        .matching
        .edges
        .iter()
        .zip(&witness.matching.weights)
        .filter_map(|(e, w)| {
            let copies: usize = (w * &d).floor().try_into().expect("copies fit in usize");
            (copies > 0).then(|| (e.clone(), copies))
        });
    Multihypergraph::new(witness.k, edges).expect("witness edges are valid")
}

/// `stars_from_hypergraph(nu_lower_bound_hypergraph(k, Δ))`.
pub fn star_split_lower_bound(
    k: usize,
    delta: usize,
) -> Result<GraphCollection, ConstructionError> {
    Ok(nu_lower_bound_hypergraph(k, delta)?.to_stars())
}

/// `K_{Δ,Δ}` minus one edge, with the two degree-`(Δ−1)` vertices marked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SameSetGadget {
    pub graph: SimpleGraph,
    pub delta: usize,
    pub x: usize,
    pub y: usize,
}

/// Left side `0..Δ`, right side `Δ..2Δ`; the missing edge is `{0, Δ}`, so
/// `x = 0` and `y = Δ`.
pub fn same_set_gadget(delta: usize) -> Result<SameSetGadget, ConstructionError> {
    if delta < 2 {
        return Err(ConstructionError::Precondition(format!("Δ = {delta} < 2")));
    }
    let mut g = SimpleGraph::new(2 * delta);
    for a in 0..delta {
        for b in delta..2 * delta {
            if (a, b) != (0, delta) {
                g.add_edge(a, b);
            }
        }
    }
    Ok(SameSetGadget {
        graph: g,
        delta,
        x: 0,
        y: delta,
    })
}

fn gadget_edges(gadget: &SameSetGadget, offset: Vertex) -> Vec<(Vertex, Vertex)> {
    gadget
        .graph
        .edges()
        .into_iter()
        .map(|(a, b)| (a as Vertex + offset, b as Vertex + offset))
        .collect()
}

/// Two graphs whose union is bipartite, each with maximum degree `Δ`, that
/// need at least `Δ + 1` colours simultaneously.
///
/// `G_1` is the gadget plus `ax` and `by`; `G_2` is `ax`, `xy` and every
/// gadget edge at `y`. Gadget vertices keep their ids; `a = 2Δ`, `b = 2Δ + 1`.
pub fn bipartite_lower_bound(delta: usize) -> Result<GraphCollection, ConstructionError> {
    let gadget = same_set_gadget(delta)?;
    let (x, y) = (gadget.x as Vertex, gadget.y as Vertex);
    let a = 2 * delta as Vertex;
    let b = a + 1;
    let one = Profile::from_indices([1]);
    let two = Profile::from_indices([2]);
    let both = Profile::from_indices([1, 2]);
    let mut edges = Vec::new();
    for (u, v) in gadget_edges(&gadget, 0) {
        let at_y = u == y || v == y;
        edges.push((u, v, if at_y { both } else { one }));
    }
    edges.push((a, x, both));
    edges.push((b, y, one));
    edges.push((x, y, two));
    Ok(GraphCollection::new(2, &[], edges).expect("construction has distinct simple edges"))
}

/// Two graphs with `χ'(G_1, G_2) = Δ` and lists of size `Δ` admitting no
/// simultaneous list colouring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListCounterexample {
    pub collection: GraphCollection,
    pub lists: ListAssignment,
    pub delta: usize,
}

/// `Δ` disjoint copies of `Ĝ` glued at `z_0`. Each copy holds gadgets `H`
/// (vertices `x, y`) and `H'` (vertices `x', y'`); both gadgets and `xz_0`
/// lie in both graphs, `yx'` only in `G_1` and `yy'` only in `G_2`.
///
/// Colours are `1..=2Δ`: `[Δ]` on `H` and at `z_0`, `[Δ+1, 2Δ]` on `H'`,
/// `[Δ−1] ∪ {Δ+1}` on `yx'` and `[Δ−1] ∪ {Δ+2}` on `yy'`.
pub fn list_counterexample(delta: usize) -> Result<ListCounterexample, ConstructionError> {
    let gadget = same_set_gadget(delta)?;
    let d = delta as Colour;
    let one = Profile::from_indices([1]);
    let two = Profile::from_indices([2]);
    let both = Profile::from_indices([1, 2]);
    let z0: Vertex = 0;
    let copy_size = 4 * delta as Vertex;
    let low: Vec<Colour> = (1..=d).collect();
    let high: Vec<Colour> = (d + 1..=2 * d).collect();
    let mut via_x1: Vec<Colour> = (1..d).collect();
    via_x1.push(d + 1);
    let mut via_y1: Vec<Colour> = (1..d).collect();
    via_y1.push(d + 2);

    let mut edges = Vec::new();
    let mut wanted: Vec<((Vertex, Vertex), Vec<Colour>)> = Vec::new();
    for c in 0..delta as Vertex {
        let base = 1 + c * copy_size;
        let h_off = base;
        let h1_off = base + 2 * delta as Vertex;
        let (x, y) = (h_off + gadget.x as Vertex, h_off + gadget.y as Vertex);
        let (x1, y1) = (h1_off + gadget.x as Vertex, h1_off + gadget.y as Vertex);
        for (u, v) in gadget_edges(&gadget, h_off) {
            edges.push((u, v, both));
            wanted.push(((u, v), low.clone()));
        }
        for (u, v) in gadget_edges(&gadget, h1_off) {
            edges.push((u, v, both));
            wanted.push(((u, v), high.clone()));
        }
        edges.push((z0, x, both));
        wanted.push(((z0, x), low.clone()));
        edges.push((y, x1, one));
        wanted.push(((y, x1), via_x1.clone()));
        edges.push((y, y1, two));
        wanted.push(((y, y1), via_y1.clone()));
    }
    let collection =
        GraphCollection::new(2, &[], edges).expect("construction has distinct simple edges");
    let mut lists = vec![Vec::new(); collection.edge_count()];
    for ((u, v), l) in wanted {
        let id = collection.edge_id(u, v).expect("edge was inserted");
        lists[id] = l;
    }
    Ok(ListCounterexample {
        collection,
        lists: ListAssignment::new(lists),
        delta,
    })
}
