//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here calls the solvers under test.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simcol::graph_core::{Colour, GraphCollection, ListAssignment, Multihypergraph, Profile};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Adjacency matrix of the conflict graph, built from the definition.
pub fn conflict_matrix(c: &GraphCollection) -> Vec<Vec<bool>> {
    let e = c.edges();
    let n = e.len();
    let mut adj = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            let share =
                e[a].u == e[b].u || e[a].u == e[b].v || e[a].v == e[b].u || e[a].v == e[b].v;
            adj[a][b] = a != b && share && (e[a].profile.0 & e[b].profile.0) != 0;
        }
    }
    adj
}

/// Edge copies pairwise conflicting when they share a vertex.
pub fn hyper_matrix(h: &Multihypergraph) -> Vec<Vec<bool>> {
    let copies = h.expanded();
    let n = copies.len();
    let mut adj = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            adj[a][b] = a != b && copies[a].iter().any(|x| copies[b].contains(x));
        }
    }
    adj
}

/// Smallest `c` admitting a proper colouring, by exhaustive enumeration.
pub fn brute_chromatic(adj: &[Vec<bool>]) -> usize {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    (1..=n)
        .find(|&c| {
            let lists: Vec<Vec<Colour>> = vec![(0..c as Colour).collect(); n];
            brute_list(adj, &lists).is_some()
        })
        .unwrap()
}

/// Some proper list colouring, found by trying every combination in order.
pub fn brute_list(adj: &[Vec<bool>], lists: &[Vec<Colour>]) -> Option<Vec<Colour>> {
    let n = adj.len();
    let mut idx = vec![0usize; n];
    if lists.iter().any(|l| l.is_empty()) {
        return None;
    }
    loop {
        let colours: Vec<Colour> = (0..n).map(|i| lists[i][idx[i]]).collect();
        let proper = (0..n).all(|a| (a + 1..n).all(|b| !adj[a][b] || colours[a] != colours[b]));
        if proper {
            return Some(colours);
        }
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            idx[i] += 1;
            if idx[i] < lists[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Random collection on `n` vertices with about `edges` candidate pairs and
/// random nonempty profiles over `[k]`.
pub fn random_collection(r: &mut ChaCha8Rng, k: usize, n: u32, edges: usize) -> GraphCollection {
    let mut list = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..edges {
        let u = r.gen_range(0..n);
        let v = r.gen_range(0..n);
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            continue;
        }
        let mask = r.gen_range(1..(1u64 << k));
        list.push((u, v, Profile(mask)));
    }
    GraphCollection::new(k, &[], list).unwrap()
}

/// Random collection with every `G_i` of maximum degree at most `delta`:
/// candidate edges are added to a graph only while both ends have room.
pub fn random_bounded_collection(
    r: &mut ChaCha8Rng,
    k: usize,
    n: u32,
    delta: usize,
    tries: usize,
) -> GraphCollection {
    let mut deg = vec![vec![0usize; n as usize]; k];
    let mut profiles: std::collections::BTreeMap<(u32, u32), u64> = Default::default();
    for _ in 0..tries {
        let u = r.gen_range(0..n);
        let v = r.gen_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        let i = r.gen_range(0..k);
        let bit = 1u64 << i;
        if profiles.get(&key).is_some_and(|m| m & bit != 0) {
            continue;
        }
        if deg[i][u as usize] < delta && deg[i][v as usize] < delta {
            deg[i][u as usize] += 1;
            deg[i][v as usize] += 1;
            *profiles.entry(key).or_default() |= bit;
        }
    }
    GraphCollection::new(
        k,
        &[],
        profiles.into_iter().map(|((u, v), m)| (u, v, Profile(m))),
    )
    .unwrap()
}

/// Random multihypergraph on `n` vertices with `edges` edge copies.
pub fn random_hypergraph(r: &mut ChaCha8Rng, n: usize, edges: usize) -> Multihypergraph {
    let list = (0..edges).map(|_| {
        let mask = r.gen_range(1..(1u32 << n));
        ((0..n).filter(|b| mask >> b & 1 == 1).collect::<Vec<_>>(), 1)
    });
    Multihypergraph::new(n, list).unwrap()
}

/// Random intersecting hypergraph: a random edge is kept when it meets every
/// edge kept before it.
pub fn random_intersecting(r: &mut ChaCha8Rng, n: usize, tries: usize) -> Multihypergraph {
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for _ in 0..tries {
        let mask = r.gen_range(1..(1u32 << n));
        let e: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).collect();
        if kept.iter().all(|f| f.iter().any(|x| e.contains(x))) {
            kept.push(e);
        }
    }
    Multihypergraph::new(n, kept.into_iter().map(|e| (e, 1))).unwrap()
}

pub fn random_lists(
    r: &mut ChaCha8Rng,
    items: usize,
    size: usize,
    palette: Colour,
) -> ListAssignment {
    ListAssignment::new(
        (0..items)
            .map(|_| {
                let mut l: Vec<Colour> = Vec::new();
                while l.len() < size {
                    let c = r.gen_range(0..palette);
                    if !l.contains(&c) {
                        l.push(c);
                    }
                }
                l
            })
            .collect(),
    )
}
