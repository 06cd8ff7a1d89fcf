//! Fractional matchings and covers of hypergraphs, solved exactly, and the
//! search for the largest fractional matching of an intersecting family.

mod rational;
mod search;
mod simplex;

pub use rational::{ParseRationalError, Rational};
pub use search::{nu_search, plane_witness, NuSearchConfig, NuWitness, DEFAULT_FAMILY_BUDGET};
pub use simplex::{lp_solve, Constraint, LinearProgram, LpError, LpSolution, Relation, Sense};

use thiserror::Error;

use crate::graph_core::Multihypergraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FracError {
    #[error("hypergraph is not intersecting")]
    NotIntersecting,
    #[error("hypergraph has no edges")]
    Empty,
    #[error("parameters violate r >= 1 and k >= r(r+1) (k = {k}, r = {r})")]
    BadParameters { k: usize, r: usize },
    #[error("k = {0} is outside the supported range 1..=13")]
    UnsupportedK(usize),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Weights on the distinct edges of a hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalMatching {
    pub edges: Vec<Vec<usize>>,
    pub weights: Vec<Rational>,
    pub size: Rational,
}

impl FractionalMatching {
    /// Checks `w ∈ [0, 1]` and every vertex load `≤ 1` on vertex set `0..n`.
    pub fn is_valid(&self, n: usize) -> bool {
        let one = Rational::one();
        if self.weights.iter().any(|w| w.is_negative() || *w > one) {
            return false;
        }
        let mut load = vec![Rational::zero(); n];
        for (e, w) in self.edges.iter().zip(&self.weights) {
            for &v in e {
                if v >= n {
                    return false;
                }
                load[v] = &load[v] + w;
            }
        }
        load.iter().all(|l| *l <= one) && self.weights.iter().sum::<Rational>() == self.size
    }

    /// Edges with positive weight.
    pub fn support(&self) -> Vec<&[usize]> {
        self.edges
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| w.is_positive())
            .map(|(e, _)| e.as_slice())
            .collect()
    }
}

/// Weights on the vertices of a hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalCover {
    pub weights: Vec<Rational>,
    pub size: Rational,
}

impl FractionalCover {
    pub fn covers(&self, h: &Multihypergraph) -> bool {
        let one = Rational::one();
        self.weights.iter().all(|t| !t.is_negative())
            && h.edges()
                .iter()
                .all(|(e, _)| e.iter().map(|&v| &self.weights[v]).sum::<Rational>() >= one)
    }
}

fn matching_lp(edges: &[Vec<usize>], n: usize) -> LinearProgram {
    let constraints = (0..n)
        .map(|v| Constraint {
            coeffs: edges
                .iter()
                .map(|e| {
                    if e.binary_search(&v).is_ok() {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
            relation: Relation::Le,
            rhs: Rational::one(),
        })
        .collect();
    LinearProgram {
        sense: Sense::Maximize,
        objective: vec![Rational::one(); edges.len()],
        constraints,
    }
}

/// Maximum fractional matching, exact. Repeated edges are merged first.
pub fn nu_star(h: &Multihypergraph) -> FractionalMatching {
    let (matching, _) = solve_matching(h);
    matching
}

fn solve_matching(h: &Multihypergraph) -> (FractionalMatching, Vec<usize>) {
    let edges: Vec<Vec<usize>> = h.edges().iter().map(|(e, _)| e.clone()).collect();
    if edges.is_empty() {
        return (
            FractionalMatching {
                edges,
                weights: Vec::new(),
                size: Rational::zero(),
            },
            Vec::new(),
        );
    }
    let sol = lp_solve(&matching_lp(&edges, h.n()))
        .expect("matching LP is feasible (x = 0) and bounded (x <= 1)");
    (
        FractionalMatching {
            edges,
            weights: sol.x,
            size: sol.value,
        },
        sol.basis,
    )
}

/// `ν*` of a list of vertex sets over `0..n`.
pub(crate) fn nu_star_value(edges: &[Vec<usize>], n: usize) -> Rational {
    if edges.is_empty() {
        return Rational::zero();
    }
    lp_solve(&matching_lp(edges, n))
        .expect("matching LP is feasible and bounded")
        .value
}

/// Minimum fractional vertex cover, exact; solved as its own program so that
/// `τ* = ν*` is an independent check.
pub fn tau_star(h: &Multihypergraph) -> FractionalCover {
    let n = h.n();
    if h.edges().is_empty() {
        return FractionalCover {
            weights: vec![Rational::zero(); n],
            size: Rational::zero(),
        };
    }
    let constraints = h
        .edges()
        .iter()
        .map(|(e, _)| Constraint {
            coeffs: (0..n)
                .map(|v| {
                    if e.binary_search(&v).is_ok() {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
            relation: Relation::Ge,
            rhs: Rational::one(),
        })
        .collect();
    let lp = LinearProgram {
        sense: Sense::Minimize,
        objective: vec![Rational::one(); n],
        constraints,
    };
    let sol = lp_solve(&lp).expect("cover LP is feasible (t = 1) and bounded below");
    FractionalCover {
        weights: sol.x,
        size: sol.value,
    }
}

/// Subhypergraph carried by the support of a basic optimal matching; it has
/// at most `n` edges and the same `ν*`.
pub fn reduce_support(h: &Multihypergraph) -> Multihypergraph {
    let (matching, _) = solve_matching(h);
    let kept: Vec<(Vec<usize>, usize)> = matching
        .edges
        .iter()
        .zip(&matching.weights)
        .filter(|(_, w)| w.is_positive())
        .map(|(e, _)| (e.clone(), 1))
        .collect();
    Multihypergraph::new(h.n(), kept).expect("support edges come from a valid hypergraph")
}

/// Line graph: vertex set is the edge copies of `h`, with one hyperedge
/// `{e : v ∈ e}` for every non-isolated vertex `v` of `h`.
pub fn line_graph(h: &Multihypergraph) -> Multihypergraph {
    let copies = h.expanded();
    let edges: Vec<(Vec<usize>, usize)> = (0..h.n())
        .map(|v| {
            copies
                .iter()
                .enumerate()
                .filter(|(_, e)| e.binary_search(&v).is_ok())
                .map(|(i, _)| i)
                .collect::<Vec<_>>()
        })
        .filter(|e| !e.is_empty())
        .map(|e| (e, 1))
        .collect();
    Multihypergraph::new(copies.len(), edges).expect("line graph edges are in range")
}

/// Size of the smallest edge of an intersecting hypergraph, an upper bound on `ν*`.
pub fn small_edge_bound(h: &Multihypergraph) -> Result<Rational, FracError> {
    if !h.is_intersecting() {
        return Err(FracError::NotIntersecting);
    }
    h.min_edge_size()
        .map(Rational::from)
        .ok_or(FracError::Empty)
}

/// `k / (r + 1)`, valid for `r ≥ 1` and `k ≥ r(r + 1)`.
pub fn nu_upper_bound(k: usize, r: usize) -> Result<Rational, FracError> {
    if r < 1 || k < r * (r + 1) {
        return Err(FracError::BadParameters { k, r });
    }
    Ok(Rational::new(k as i64, r as i64 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{affine_plane, projective_plane};

    fn h(n: usize, edges: &[&[usize]]) -> Multihypergraph {
        Multihypergraph::new(n, edges.iter().map(|e| (e.to_vec(), 1))).unwrap()
    }

    #[test]
    fn nu_star_examples() {
        assert_eq!(nu_star(&h(3, &[&[0, 1, 2]])).size, Rational::one());
        let tri = h(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let m = nu_star(&tri);
        assert_eq!(m.size, Rational::new(3, 2));
        assert!(m.is_valid(3));

        let fano = projective_plane(2).unwrap();
        let m = nu_star(&fano);
        assert_eq!(m.size, Rational::new(7, 3));
        assert!(m.weights.iter().all(|w| *w == Rational::new(1, 3)));

        let l = line_graph(&affine_plane(2).unwrap());
        assert_eq!(nu_star(&l).size, Rational::integer(2));
        assert_eq!(nu_star(&Multihypergraph::empty(4)).size, Rational::zero());
    }

    #[test]
    fn multiplicities_collapse_before_lp() {
        let once = h(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let many = once.scaled(5);
        assert_eq!(nu_star(&many).size, nu_star(&once).size);
    }

    #[test]
    fn tau_star_examples() {
        let single = h(4, &[&[0, 1, 2, 3]]);
        let t = tau_star(&single);
        assert_eq!(t.size, Rational::one());
        assert!(t.covers(&single));
        let fano = projective_plane(2).unwrap();
        let t = tau_star(&fano);
        assert_eq!(t.size, Rational::new(7, 3));
        assert!(t.weights.iter().all(|w| *w == Rational::new(1, 3)));
    }

    #[test]
    fn reduce_support_examples() {
        let small = h(3, &[&[0, 1], &[1, 2]]);
        let r = reduce_support(&small);
        assert!(r.distinct_edge_count() <= 3);
        assert_eq!(nu_star(&r).size, nu_star(&small).size);

        // Fano plus twenty supersets of its lines
        let fano = projective_plane(2).unwrap();
        let mut edges: Vec<Vec<usize>> = fano.edges().iter().map(|(e, _)| e.clone()).collect();
        let mut extra = 0;
        'outer: for (line, _) in fano.edges() {
            for v in 0..7 {
                if line.contains(&v) {
                    continue;
                }
                let mut e = line.clone();
                e.push(v);
                e.sort_unstable();
                if !edges.contains(&e) {
                    edges.push(e);
                    extra += 1;
                    if extra == 20 {
                        break 'outer;
                    }
                }
            }
        }
        let big = Multihypergraph::new(7, edges.into_iter().map(|e| (e, 1))).unwrap();
        assert_eq!(big.distinct_edge_count(), 27);
        let r = reduce_support(&big);
        assert!(r.distinct_edge_count() <= 7);
        assert_eq!(nu_star(&r).size, Rational::new(7, 3));
    }

    #[test]
    fn line_graph_examples() {
        let single = h(2, &[&[0, 1]]);
        let l = line_graph(&single);
        assert_eq!(l.n(), 1);
        assert_eq!(l.edges(), &[(vec![0], 2)]);

        for q in [2, 3] {
            let a = affine_plane(q).unwrap();
            let l = line_graph(&a);
            assert_eq!(l.n(), q * q + q);
            assert!(l.is_intersecting());
            assert!(l.edges().iter().all(|(e, m)| e.len() == q + 1 && *m == 1));
            assert!((0..l.n()).all(|v| l.degree(v) == q));
        }

        let triangle = h(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let l = line_graph(&triangle);
        let stars: Vec<Vec<usize>> = l.edges().iter().map(|(e, _)| e.clone()).collect();
        assert_eq!(stars, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn small_edge_bound_examples() {
        let sunflower = h(4, &[&[0], &[0, 1], &[0, 2, 3]]);
        assert_eq!(small_edge_bound(&sunflower).unwrap(), Rational::one());
        assert_eq!(nu_star(&sunflower).size, Rational::one());
        let fano = projective_plane(2).unwrap();
        assert_eq!(small_edge_bound(&fano).unwrap(), Rational::integer(3));
        assert_eq!(
            small_edge_bound(&h(4, &[&[0, 1], &[2, 3]])),
            Err(FracError::NotIntersecting)
        );
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(nu_upper_bound(7, 2).unwrap(), Rational::new(7, 3));
        assert_eq!(nu_upper_bound(12, 3).unwrap(), Rational::integer(3));
        assert_eq!(nu_upper_bound(4, 1).unwrap(), Rational::integer(2));
        assert_eq!(
            nu_upper_bound(5, 2),
            Err(FracError::BadParameters { k: 5, r: 2 })
        );
        assert!(nu_upper_bound(3, 0).is_err());
        // r = ⌊√k⌋ gives at most √k whenever it applies
        for k in 2..200usize {
            let r = (1..).take_while(|r| r * r <= k).last().unwrap();
            if let Ok(b) = nu_upper_bound(k, r) {
                assert!(b.to_f64() <= (k as f64).sqrt() + 1e-12, "k = {k}");
            }
        }
    }
}
