//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Arithmetic first runs on `i128` fractions with overflow detection; an
//! overflow restarts the solve on arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};
use thiserror::Error;

use super::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("constraint {row} has {got} coefficients, expected {expected}")]
    Shape {
        row: usize,
        expected: usize,
        got: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Optimize `objective · x` subject to the constraints and `x ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
    /// Structural variables that are basic in the final tableau.
    pub basis: Vec<usize>,
    pub pivots: usize,
}

/// Solves `lp` exactly, returning an optimal basic solution.
pub fn lp_solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let n = lp.objective.len();
    for (row, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != n {
            return Err(LpError::Shape {
                row,
                expected: n,
                got: c.coeffs.len(),
            });
        }
    }
    if let Some(small) = small_form(lp) {
        match Tableau::<Ratio<i128>>::solve(&small) {
            Ok(sol) => return Ok(sol),
            Err(Failure::Lp(e)) => return Err(e),
            Err(Failure::Overflow) => {}
        }
    }
    let big = lp.map(|r| r.0.clone());
    match Tableau::<BigRational>::solve(&big) {
        Ok(sol) => Ok(sol),
        Err(Failure::Lp(e)) => Err(e),
        Err(Failure::Overflow) => unreachable!("arbitrary precision cannot overflow"),
    }
}

fn small_form(lp: &LinearProgram) -> Option<Program<Ratio<i128>>> {
    fn narrow(r: &Rational) -> Option<Ratio<i128>> {
        let p: i128 = r.numer().try_into().ok()?;
        let q: i128 = r.denom().try_into().ok()?;
        Some(Ratio::new_raw(p, q))
    }
    let objective = lp
        .objective
        .iter()
        .map(narrow)
        .collect::<Option<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(lp.constraints.len());
    for c in &lp.constraints {
        rows.push((
            c.coeffs.iter().map(narrow).collect::<Option<Vec<_>>>()?,
            c.relation,
            narrow(&c.rhs)?,
        ));
    }
    Some(Program {
        sense: lp.sense,
        objective,
        rows,
    })
}

impl LinearProgram {
    fn map<T, F: Fn(&Rational) -> T>(&self, f: F) -> Program<T> {
        Program {
            sense: self.sense,
            objective: self.objective.iter().map(&f).collect(),
            rows: self
                .constraints
                .iter()
                .map(|c| (c.coeffs.iter().map(&f).collect(), c.relation, f(&c.rhs)))
                .collect(),
        }
    }
}

struct Program<T> {
    sense: Sense,
    objective: Vec<T>,
    rows: Vec<(Vec<T>, Relation, T)>,
}

enum Failure {
    Lp(LpError),
    Overflow,
}

impl From<LpError> for Failure {
    fn from(e: LpError) -> Self {
        Failure::Lp(e)
    }
}

trait Scalar: Clone + Ord + Zero + One {
    fn sub_(&self, o: &Self) -> Result<Self, Failure>;
    fn mul_(&self, o: &Self) -> Result<Self, Failure>;
    fn div_(&self, o: &Self) -> Result<Self, Failure>;
    fn neg_(&self) -> Result<Self, Failure>;
    fn is_pos(&self) -> bool;
    fn to_rational(&self) -> Rational;
}

impl Scalar for Ratio<i128> {
    fn sub_(&self, o: &Self) -> Result<Self, Failure> {
        self.checked_sub(o).ok_or(Failure::Overflow)
    }
    fn mul_(&self, o: &Self) -> Result<Self, Failure> {
        self.checked_mul(o).ok_or(Failure::Overflow)
    }
    fn div_(&self, o: &Self) -> Result<Self, Failure> {
        self.checked_div(o).ok_or(Failure::Overflow)
    }
    fn neg_(&self) -> Result<Self, Failure> {
        let p = self.numer().checked_neg().ok_or(Failure::Overflow)?;
        Ok(Ratio::new_raw(p, *self.denom()))
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn to_rational(&self) -> Rational {
        Rational(BigRational::new(
            BigInt::from(*self.numer()),
            BigInt::from(*self.denom()),
        ))
    }
}

impl Scalar for BigRational {
    fn sub_(&self, o: &Self) -> Result<Self, Failure> {
        Ok(self - o)
    }
    fn mul_(&self, o: &Self) -> Result<Self, Failure> {
        Ok(self * o)
    }
    fn div_(&self, o: &Self) -> Result<Self, Failure> {
        Ok(self / o)
    }
    fn neg_(&self) -> Result<Self, Failure> {
        Ok(-self)
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn to_rational(&self) -> Rational {
        Rational(self.clone())
    }
}

struct Tableau<T> {
    /// `rows[i]` holds the coefficients followed by the right-hand side.
    rows: Vec<Vec<T>>,
    /// Reduced costs followed by minus the objective value.
    cost: Vec<T>,
    basis: Vec<usize>,
    width: usize,
    pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn solve(p: &Program<T>) -> Result<LpSolution, Failure> {
        let n = p.objective.len();
        let m = p.rows.len();
        // normalize to nonnegative right-hand sides
        let mut rows: Vec<(Vec<T>, Relation, T)> = Vec::with_capacity(m);
        for (coeffs, rel, rhs) in &p.rows {
            if *rhs < T::zero() {
                let coeffs = coeffs
                    .iter()
                    .map(|c| c.neg_())
                    .collect::<Result<Vec<_>, _>>()?;
                let rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                rows.push((coeffs, rel, rhs.neg_()?));
            } else {
                rows.push((coeffs.clone(), *rel, rhs.clone()));
            }
        }
        let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let art_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let art_start = n + slack_count;
        let width = art_start + art_count;
        let mut t = Tableau {
            rows: Vec::with_capacity(m),
            cost: vec![T::zero(); width + 1],
            basis: Vec::with_capacity(m),
            width,
            pivots: 0,
        };
        let (mut slack, mut art) = (n, art_start);
        for (coeffs, rel, rhs) in rows {
            let mut row = coeffs;
            row.resize(width + 1, T::zero());
            row[width] = rhs;
            match rel {
                Relation::Le => {
                    row[slack] = T::one();
                    t.basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = T::one().neg_()?;
                    slack += 1;
                    row[art] = T::one();
                    t.basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = T::one();
                    t.basis.push(art);
                    art += 1;
                }
            }
            t.rows.push(row);
        }

        // phase 1: maximize -(sum of artificials)
        if art_count > 0 {
            let mut phase1 = vec![T::zero(); width];
            for c in phase1.iter_mut().skip(art_start) {
                *c = T::one().neg_()?;
            }
            t.set_cost(&phase1)?;
            t.optimize(width)?;
            if t.cost[width] != T::zero() {
                return Err(LpError::Infeasible.into());
            }
            t.evict_artificials(art_start)?;
        }

        // phase 2
        let mut costs = vec![T::zero(); width];
        for (j, c) in p.objective.iter().enumerate() {
            costs[j] = match p.sense {
                Sense::Maximize => c.clone(),
                Sense::Minimize => c.neg_()?,
            };
        }
        t.set_cost(&costs)?;
        t.optimize(art_start)?;

        let mut x = vec![Rational::zero(); n];
        let mut basis = Vec::new();
        for (i, &b) in t.basis.iter().enumerate() {
            if b < n {
                x[b] = t.rows[i][width].to_rational();
                basis.push(b);
            }
        }
        basis.sort_unstable();
        let max_value = t.cost[width].neg_()?.to_rational();
        let value = match p.sense {
            Sense::Maximize => max_value,
            Sense::Minimize => -max_value,
        };
        Ok(LpSolution {
            value,
            x,
            basis,
            pivots: t.pivots,
        })
    }

    fn set_cost(&mut self, costs: &[T]) -> Result<(), Failure> {
        let width = self.width;
        let mut cost: Vec<T> = costs.to_vec();
        cost.push(T::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..=width {
                if !self.rows[i][j].is_zero() {
                    cost[j] = cost[j].sub_(&cb.mul_(&self.rows[i][j])?)?;
                }
            }
        }
        self.cost = cost;
        Ok(())
    }

    fn pivot(&mut self, r: usize, col: usize) -> Result<(), Failure> {
        self.pivots += 1;
        let width = self.width;
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            for j in 0..=width {
                if !self.rows[r][j].is_zero() {
                    self.rows[r][j] = self.rows[r][j].div_(&p)?;
                }
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for j in 0..=width {
                if !pivot_row[j].is_zero() {
                    row[j] = row[j].sub_(&f.mul_(&pivot_row[j])?)?;
                }
            }
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for j in 0..=width {
                if !pivot_row[j].is_zero() {
                    self.cost[j] = self.cost[j].sub_(&f.mul_(&pivot_row[j])?)?;
                }
            }
        }
        self.basis[r] = col;
        Ok(())
    }

    /// Bland's rule: lowest-index improving column, ties in the ratio test go
    /// to the lowest-index basic variable.
    fn optimize(&mut self, eligible: usize) -> Result<(), Failure> {
        let width = self.width;
        loop {
            let Some(col) = (0..eligible).find(|&j| self.cost[j].is_pos()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.rows[i][width].div_(a)?;
                let better = match &leave {
                    None => true,
                    Some((l, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Err(LpError::Unbounded.into());
            };
            self.pivot(r, col)?;
        }
    }

    /// Pivots zero-valued artificials out of the basis, dropping redundant rows.
    fn evict_artificials(&mut self, art_start: usize) -> Result<(), Failure> {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < art_start {
                i += 1;
                continue;
            }
            match (0..art_start).find(|&j| !self.rows[i][j].is_zero()) {
                Some(col) => {
                    self.pivot(i, col)?;
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
        Ok(())
    }
}
