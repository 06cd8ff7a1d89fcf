//! Exact colouring: chromatic number by saturation-degree branch and bound, and
//! list-colouring feasibility by backtracking.
//!
//! Both solvers are deterministic: ties are broken towards the lowest vertex id.

use thiserror::Error;

use crate::graph_core::{
    Colour, ColouringCertificate, GraphCollection, GraphError, ListAssignment, Multihypergraph,
    SimpleGraph, Verdict,
};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColourError {
    #[error("node budget of {0} exhausted")]
    BudgetExceeded(u64),
    #[error("list assignment covers {got} items, graph has {expected}")]
    ListMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            nodes: DEFAULT_NODE_BUDGET,
        }
    }
}

impl Budget {
    pub fn nodes(nodes: u64) -> Self {
        Budget { nodes }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    /// Best colour count found; the chromatic number when `optimal`.
    pub optimum: usize,
    pub lower_bound: usize,
    pub certificate: ColouringCertificate,
    /// Pairwise conflicting items proving `lower_bound`.
    pub lower_bound_witness: Vec<usize>,
    pub nodes_explored: u64,
    pub optimal: bool,
}

/// Exact chromatic number of `g`.
pub fn chromatic_number(g: &SimpleGraph, budget: Budget) -> SolveReport {
    chromatic_number_with_clique(g, budget, None)
}

/// As [`chromatic_number`], seeding the lower bound with `clique` when it is
/// larger than the greedily grown one.
pub fn chromatic_number_with_clique(
    g: &SimpleGraph,
    budget: Budget,
    clique: Option<Vec<usize>>,
) -> SolveReport {
    let mut witness = greedy_clique(g);
    if let Some(c) = clique {
        debug_assert!(g.is_clique(&c));
        if c.len() > witness.len() {
            witness = c;
        }
    }
    let mut solver = Dsatur::new(g, budget.nodes);
    let (colours, optimal) = solver.run(&witness);
    let optimum = count_colours(&colours);
    let verdict = match g.find_conflict(&colours) {
        None => Verdict::Valid,
        Some((a, b)) => Verdict::Violation {
            vertex: a as u32,
            first: (a as u32, b as u32),
            second: (b as u32, a as u32),
            graph: 1,
            colour: colours[a],
        },
    };
    debug_assert!(verdict.is_valid());
    SolveReport {
        optimum,
        lower_bound: if optimal { optimum } else { witness.len() },
        certificate: ColouringCertificate::new(colours, verdict),
        lower_bound_witness: witness,
        nodes_explored: solver.nodes,
        optimal,
    }
}

fn count_colours(colours: &[Colour]) -> usize {
    colours.iter().map(|&c| c as usize + 1).max().unwrap_or(0)
}

/// `χ'(G_1, ..., G_k)`: chromatic number of the conflict graph. The
/// certificate is validated against the collection.
pub fn simultaneous_index(collection: &GraphCollection, budget: Budget) -> SolveReport {
    let g = collection.conflict_graph();
    let mut report = chromatic_number(&g, budget);
    report.certificate.verdict = collection
        .validate(&report.certificate.assignment, None)
        .expect("one colour per edge");
    report
}

/// `χ'(H)` for a multihypergraph, counting multiplicities. Items of the
/// certificate are the edge copies in [`Multihypergraph::expanded`] order.
pub fn hypergraph_index(h: &Multihypergraph, budget: Budget) -> SolveReport {
    let g = h.conflict_graph();
    let clique = heaviest_intersecting_family(h);
    chromatic_number_with_clique(&g, budget, Some(clique))
}

/// Copies of a maximum-multiplicity intersecting subfamily of distinct edges,
/// as item ids of the expanded hypergraph.
fn heaviest_intersecting_family(h: &Multihypergraph) -> Vec<usize> {
    let edges = h.edges();
    let n = edges.len();
    if n == 0 {
        return Vec::new();
    }
    let meets: Vec<Vec<bool>> = edges
        .iter()
        .map(|(e, _)| {
            edges
                .iter()
                .map(|(f, _)| crate::graph_core::sorted_intersect(e, f))
                .collect()
        })
        .collect();
    let weights: Vec<usize> = edges.iter().map(|(_, m)| *m).collect();
    let mut best: (usize, Vec<usize>) = (0, Vec::new());
    let mut steps = 0u64;
    // bounded exhaustive search; the greedy clique covers anything it cuts off
    fn grow(
        chosen: &mut Vec<usize>,
        weight: usize,
        candidates: &[usize],
        meets: &[Vec<bool>],
        weights: &[usize],
        best: &mut (usize, Vec<usize>),
        steps: &mut u64,
    ) {
        *steps += 1;
        if weight > best.0 {
            *best = (weight, chosen.clone());
        }
        let rest: usize = candidates.iter().map(|&c| weights[c]).sum();
        if weight + rest <= best.0 || *steps > 200_000 {
            return;
        }
        for (i, &c) in candidates.iter().enumerate() {
            let next: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&d| meets[c][d])
                .collect();
            chosen.push(c);
            grow(
                chosen,
                weight + weights[c],
                &next,
                meets,
                weights,
                best,
                steps,
            );
            chosen.pop();
        }
    }
    let all: Vec<usize> = (0..n).collect();
    grow(
        &mut Vec::new(),
        0,
        &all,
        &meets,
        &weights,
        &mut best,
        &mut steps,
    );
    let mut offsets = Vec::with_capacity(n);
    let mut acc = 0;
    for w in &weights {
        offsets.push(acc);
        acc += w;
    }
    let mut items = Vec::new();
    for &e in &best.1 {
        items.extend(offsets[e]..offsets[e] + weights[e]);
    }
    items.sort_unstable();
    items
}

/// Largest clique found by growing greedily from every start vertex.
pub fn greedy_clique(g: &SimpleGraph) -> Vec<usize> {
    let n = g.n();
    let mut best: Vec<usize> = Vec::new();
    let mut adj = vec![vec![false; n]; n];
    for v in 0..n {
        for &w in g.neighbours(v) {
            adj[v][w] = true;
        }
    }
    for start in 0..n {
        if g.degree(start) < best.len() {
            continue;
        }
        let mut clique = vec![start];
        let mut candidates: Vec<usize> = g.neighbours(start).to_vec();
        candidates.sort_unstable();
        while !candidates.is_empty() {
            // candidate with most neighbours among the remaining candidates
            let &next = candidates
                .iter()
                .max_by_key(|&&c| {
                    let inner = candidates.iter().filter(|&&d| adj[c][d]).count();
                    (inner, std::cmp::Reverse(c))
                })
                .unwrap();
            clique.push(next);
            candidates.retain(|&d| d != next && adj[next][d]);
        }
        if clique.len() > best.len() {
            clique.sort_unstable();
            best = clique;
        }
    }
    best
}

struct Dsatur<'a> {
    g: &'a SimpleGraph,
    budget: u64,
    nodes: u64,
    colour: Vec<Option<Colour>>,
    /// `conflicts[v][c]`: coloured neighbours of `v` with colour `c`.
    conflicts: Vec<Vec<u32>>,
    saturation: Vec<usize>,
    best: usize,
    best_colouring: Vec<Colour>,
    lower: usize,
    exhausted: bool,
}

impl<'a> Dsatur<'a> {
    fn new(g: &'a SimpleGraph, budget: u64) -> Self {
        let n = g.n();
        Dsatur {
            g,
            budget,
            nodes: 0,
            colour: vec![None; n],
            conflicts: vec![vec![0; n + 1]; n],
            saturation: vec![0; n],
            best: usize::MAX,
            best_colouring: Vec::new(),
            lower: 0,
            exhausted: false,
        }
    }

    fn assign(&mut self, v: usize, c: Colour) {
        self.colour[v] = Some(c);
        for &w in self.g.neighbours(v) {
            let slot = &mut self.conflicts[w][c as usize];
            if *slot == 0 {
                self.saturation[w] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colour[v].take().expect("vertex is coloured");
        for &w in self.g.neighbours(v) {
            let slot = &mut self.conflicts[w][c as usize];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[w] -= 1;
            }
        }
    }

    fn pick(&self) -> Option<usize> {
        let mut choice: Option<(usize, usize, usize)> = None;
        for v in 0..self.g.n() {
            if self.colour[v].is_some() {
                continue;
            }
            let sat = self.saturation[v];
            if let Some((_, s, _)) = choice {
                if sat < s {
                    continue;
                }
            }
            let free_degree = self
                .g
                .neighbours(v)
                .iter()
                .filter(|&&w| self.colour[w].is_none())
                .count();
            let better = match choice {
                None => true,
                Some((_, s, d)) => sat > s || (sat == s && free_degree > d),
            };
            if better {
                choice = Some((v, sat, free_degree));
            }
        }
        choice.map(|(v, _, _)| v)
    }

    /// Returns the best colouring and whether it is proven optimal.
    fn run(&mut self, clique: &[usize]) -> (Vec<Colour>, bool) {
        let n = self.g.n();
        if n == 0 {
            return (Vec::new(), true);
        }
        self.lower = clique.len().max(1);
        for (c, &v) in clique.iter().enumerate() {
            self.assign(v, c as Colour);
        }
        let used = clique.len();
        self.greedy(used);
        if self.best > self.lower {
            self.search(used);
        }
        let optimal = !self.exhausted || self.best == self.lower;
        (self.best_colouring.clone(), optimal)
    }

    fn current(&self) -> Vec<Colour> {
        self.colour.iter().map(|c| c.expect("complete")).collect()
    }

    fn greedy(&mut self, mut used: usize) {
        let mut order = Vec::new();
        while let Some(v) = self.pick() {
            let c = (0..used as Colour)
                .find(|&c| self.conflicts[v][c as usize] == 0)
                .unwrap_or_else(|| {
                    used += 1;
                    (used - 1) as Colour
                });
            self.assign(v, c);
            order.push(v);
        }
        self.best = used;
        self.best_colouring = self.current();
        for v in order.into_iter().rev() {
            self.unassign(v);
        }
    }

    fn search(&mut self, used: usize) {
        if self.exhausted || self.best == self.lower {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let Some(v) = self.pick() else {
            if used < self.best {
                self.best = used;
                self.best_colouring = self.current();
            }
            return;
        };
        for c in 0..used {
            if self.conflicts[v][c] != 0 {
                continue;
            }
            self.assign(v, c as Colour);
            self.search(used);
            self.unassign(v);
            if self.exhausted || self.best == self.lower {
                return;
            }
        }
        if used + 1 < self.best {
            self.assign(v, used as Colour);
            self.search(used + 1);
            self.unassign(v);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ListOutcome {
    Feasible(ColouringCertificate),
    /// The search tree was exhausted without finding a colouring.
    Infeasible {
        nodes_explored: u64,
    },
}

impl ListOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, ListOutcome::Feasible(_))
    }
}

/// Decides whether every vertex of `g` can take a colour from its list with
/// adjacent vertices coloured differently.
pub fn list_feasible(
    g: &SimpleGraph,
    lists: &ListAssignment,
    budget: Budget,
) -> Result<ListOutcome, ColourError> {
    if lists.len() != g.n() {
        return Err(ColourError::ListMismatch {
            expected: g.n(),
            got: lists.len(),
        });
    }
    let mut search = ListSearch::new(g, lists, budget.nodes);
    let all: Vec<usize> = (0..g.n()).collect();
    let found = search.solve(&all);
    if search.exhausted {
        return Err(ColourError::BudgetExceeded(budget.nodes));
    }
    if !found {
        return Ok(ListOutcome::Infeasible {
            nodes_explored: search.nodes,
        });
    }
    let colours: Vec<Colour> = search.colour.iter().map(|c| c.unwrap()).collect();
    let verdict = match g.find_conflict(&colours) {
        None => Verdict::Valid,
        Some((a, b)) => Verdict::Violation {
            vertex: a as u32,
            first: (a as u32, b as u32),
            second: (b as u32, a as u32),
            graph: 1,
            colour: colours[a],
        },
    };
    debug_assert!(verdict.is_valid());
    Ok(ListOutcome::Feasible(ColouringCertificate::new(
        colours, verdict,
    )))
}

/// Simultaneous list colouring of a collection (lists indexed by edge id).
pub fn simultaneous_list_feasible(
    collection: &GraphCollection,
    lists: &ListAssignment,
    budget: Budget,
) -> Result<ListOutcome, ColourError> {
    let g = collection.conflict_graph();
    match list_feasible(&g, lists, budget)? {
        ListOutcome::Feasible(mut cert) => {
            cert.verdict = collection.validate(&cert.assignment, Some(lists))?;
            Ok(ListOutcome::Feasible(cert))
        }
        other => Ok(other),
    }
}

enum Trail {
    Assigned(usize),
    Removed { vertex: usize, slot: usize },
}

struct ListSearch<'a> {
    g: &'a SimpleGraph,
    lists: &'a ListAssignment,
    alive: Vec<Vec<bool>>,
    remaining: Vec<usize>,
    colour: Vec<Option<Colour>>,
    trail: Vec<Trail>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl<'a> ListSearch<'a> {
    fn new(g: &'a SimpleGraph, lists: &'a ListAssignment, budget: u64) -> Self {
        let alive: Vec<Vec<bool>> = lists.lists().iter().map(|l| vec![true; l.len()]).collect();
        let remaining = lists.lists().iter().map(Vec::len).collect();
        ListSearch {
            g,
            lists,
            alive,
            remaining,
            colour: vec![None; g.n()],
            trail: Vec::new(),
            nodes: 0,
            budget,
            exhausted: false,
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Trail::Assigned(v) => self.colour[v] = None,
                Trail::Removed { vertex, slot } => {
                    self.alive[vertex][slot] = true;
                    self.remaining[vertex] += 1;
                }
            }
        }
    }

    /// Assigns and prunes neighbour lists; false if some neighbour runs dry.
    fn assign(&mut self, v: usize, c: Colour) -> bool {
        self.colour[v] = Some(c);
        self.trail.push(Trail::Assigned(v));
        let mut ok = true;
        for &w in self.g.neighbours(v) {
            if self.colour[w].is_some() {
                continue;
            }
            if let Ok(slot) = self.lists.list(w).binary_search(&c) {
                if self.alive[w][slot] {
                    self.alive[w][slot] = false;
                    self.remaining[w] -= 1;
                    self.trail.push(Trail::Removed { vertex: w, slot });
                    if self.remaining[w] == 0 {
                        ok = false;
                    }
                }
            }
        }
        ok
    }

    fn components(&self, vertices: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.g.n()];
        let mut inside = vec![false; self.g.n()];
        for &v in vertices {
            inside[v] = true;
        }
        let mut comps = Vec::new();
        for &start in vertices {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut head = 0;
            while head < comp.len() {
                let a = comp[head];
                head += 1;
                for &b in self.g.neighbours(a) {
                    if inside[b] && !seen[b] {
                        seen[b] = true;
                        comp.push(b);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Colours all of `vertices` (uncoloured, with live lists); on failure
    /// every change made here is undone.
    fn solve(&mut self, vertices: &[usize]) -> bool {
        let comps = self.components(vertices);
        if comps.len() > 1 {
            let mark = self.trail.len();
            // smallest components first: cheap refutations come early
            let mut order: Vec<&Vec<usize>> = comps.iter().collect();
            order.sort_by_key(|c| (c.len(), c[0]));
            for comp in order {
                if !self.solve_connected(comp) {
                    self.undo_to(mark);
                    return false;
                }
            }
            return true;
        }
        match comps.first() {
            None => true,
            Some(comp) => self.solve_connected(comp),
        }
    }

    fn solve_connected(&mut self, vertices: &[usize]) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return false;
        }
        let v = *vertices
            .iter()
            .min_by_key(|&&v| {
                let free = self
                    .g
                    .neighbours(v)
                    .iter()
                    .filter(|&&w| self.colour[w].is_none())
                    .count();
                (self.remaining[v], std::cmp::Reverse(free), v)
            })
            .expect("nonempty component");
        if self.remaining[v] == 0 {
            return false;
        }
        let rest: Vec<usize> = vertices.iter().copied().filter(|&w| w != v).collect();
        let options: Vec<Colour> = self
            .lists
            .list(v)
            .iter()
            .zip(&self.alive[v])
            .filter(|(_, &a)| a)
            .map(|(&c, _)| c)
            .collect();
        for c in options {
            let mark = self.trail.len();
            if self.assign(v, c) && self.solve(&rest) {
                return true;
            }
            self.undo_to(mark);
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::Profile;

    fn petersen() -> SimpleGraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        SimpleGraph::from_edges(10, &edges)
    }

    /// Smallest `q` admitting a proper `q`-colouring, by trying all assignments.
    fn brute_chromatic(g: &SimpleGraph) -> usize {
        let n = g.n();
        if n == 0 {
            return 0;
        }
        for q in 1..=n {
            let mut colours = vec![0u32; n];
            loop {
                if g.find_conflict(&colours).is_none() {
                    return q;
                }
                let mut i = 0;
                while i < n {
                    colours[i] += 1;
                    if (colours[i] as usize) < q {
                        break;
                    }
                    colours[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
        n
    }

    #[test]
    fn small_chromatic_numbers() {
        assert_eq!(
            chromatic_number(&SimpleGraph::new(0), Budget::default()).optimum,
            0
        );
        assert_eq!(
            chromatic_number(&SimpleGraph::new(3), Budget::default()).optimum,
            1
        );
        for n in 1..8 {
            let r = chromatic_number(&SimpleGraph::complete(n), Budget::default());
            assert_eq!(r.optimum, n);
            assert!(r.optimal);
        }
    }

    #[test]
    fn petersen_is_three_chromatic() {
        let g = petersen();
        assert_eq!(brute_chromatic(&g), 3);
        let r = chromatic_number(&g, Budget::default());
        assert_eq!(r.optimum, 3);
        assert!(r.optimal && r.certificate.verdict.is_valid());
        assert!(g.is_clique(&r.lower_bound_witness));
    }

    #[test]
    fn odd_cycle_and_budget_flag() {
        let c7 = SimpleGraph::from_edges(7, &(0..7).map(|i| (i, (i + 1) % 7)).collect::<Vec<_>>());
        let r = chromatic_number(&c7, Budget::default());
        assert_eq!(r.optimum, 3);
        assert!(r.optimal);

        // Petersen's line graph has chromatic number 4 (Petersen is class 2);
        // a one-node budget cannot prove it
        let lg = petersen().line_graph();
        let tiny = chromatic_number(&lg, Budget::nodes(1));
        assert!(tiny.optimum >= 4);
        let full = chromatic_number(&lg, Budget::default());
        assert_eq!(full.optimum, 4);
        assert!(full.optimal);
        if !tiny.optimal {
            assert_eq!(tiny.lower_bound, 3);
        }
    }

    #[test]
    fn hypergraph_index_examples() {
        let matching =
            Multihypergraph::new(6, [(vec![0, 1], 1), (vec![2, 3], 1), (vec![4, 5], 1)]).unwrap();
        assert_eq!(hypergraph_index(&matching, Budget::default()).optimum, 1);
        let triangle =
            Multihypergraph::new(3, [(vec![0, 1], 2), (vec![0, 2], 2), (vec![1, 2], 2)]).unwrap();
        let r = hypergraph_index(&triangle, Budget::default());
        assert_eq!(r.optimum, 6);
        assert_eq!(r.lower_bound_witness.len(), 6);
    }

    #[test]
    fn simultaneous_index_single_graph_is_vizing() {
        // k = 1 triangle: Δ = 2, χ' = 3
        let p1 = Profile::from_indices([1]);
        let c = GraphCollection::new(1, &[], [(0, 1, p1), (1, 2, p1), (0, 2, p1)]).unwrap();
        let r = simultaneous_index(&c, Budget::default());
        assert_eq!(r.optimum, 3);
        assert!(r.certificate.verdict.is_valid());
    }

    #[test]
    fn list_feasibility_examples() {
        let g = petersen();
        let lists = ListAssignment::uniform(10, 0..3);
        let out = list_feasible(&g, &lists, Budget::default()).unwrap();
        let ListOutcome::Feasible(cert) = out else {
            panic!("expected feasible")
        };
        for (v, &c) in cert.assignment.iter().enumerate() {
            assert!(lists.contains(v, c));
        }

        let single = SimpleGraph::new(1);
        let empty = ListAssignment::new(vec![vec![]]);
        assert!(!list_feasible(&single, &empty, Budget::default())
            .unwrap()
            .is_feasible());

        // K_3 with lists {0,1} everywhere
        let tri = SimpleGraph::complete(3);
        let lists = ListAssignment::uniform(3, 0..2);
        assert!(matches!(
            list_feasible(&tri, &lists, Budget::default()).unwrap(),
            ListOutcome::Infeasible { .. }
        ));

        assert!(matches!(
            list_feasible(&tri, &ListAssignment::uniform(2, 0..3), Budget::default()),
            Err(ColourError::ListMismatch {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn list_budget_is_reported() {
        // K_6 with 5 colours: refutation needs more than two nodes
        let g = SimpleGraph::complete(6);
        let lists = ListAssignment::uniform(6, 0..5);
        assert_eq!(
            list_feasible(&g, &lists, Budget::nodes(2)),
            Err(ColourError::BudgetExceeded(2))
        );
    }

    #[test]
    fn components_are_refuted_independently() {
        // many feasible triangles plus one infeasible triangle
        let mut edges = Vec::new();
        for t in 0..12 {
            let b = 3 * t;
            edges.extend([(b, b + 1), (b + 1, b + 2), (b, b + 2)]);
        }
        let g = SimpleGraph::from_edges(36, &edges);
        let mut lists = vec![vec![0, 1, 2]; 36];
        for l in &mut lists[33..] {
            *l = vec![0, 1];
        }
        let out = list_feasible(&g, &ListAssignment::new(lists), Budget::nodes(10_000)).unwrap();
        assert!(!out.is_feasible());
    }
}
