//! Homogeneous linear programs: deciding whether a linear objective is unbounded
//! below on a polyhedral cone, via cone membership of the objective.

use super::matrix::{dot, QMatrix};
use super::rational::{rational_to_f64, Rational};
use super::snf::{solve_left_square, solve_linear};
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `⟨a, x⟩ ≥ 0`
    Ge,
    /// `⟨a, x⟩ = 0`
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
}

#[derive(Clone, Debug)]
pub struct LpProblem {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<Rational>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LpError {
    #[error("vector of length {got} in a problem of dimension {dim}")]
    Dimension { dim: usize, got: usize },
    #[error("the feasible region is empty")]
    Infeasible,
}

impl LpProblem {
    pub fn new(dim: usize, objective: Vec<Rational>) -> Self {
        LpProblem {
            dim,
            constraints: Vec::new(),
            objective,
        }
    }

    pub fn ge(mut self, coeffs: Vec<Rational>) -> Self {
        self.constraints.push(Constraint { coeffs, rel: Relation::Ge });
        self
    }

    pub fn eq(mut self, coeffs: Vec<Rational>) -> Self {
        self.constraints.push(Constraint { coeffs, rel: Relation::Eq });
        self
    }
}

/// True iff `inf ⟨objective, x⟩ = −∞` over `{x : constraints}`.
///
/// The region is a cone, so the infimum is `−∞` exactly when the objective lies
/// outside the dual cone spanned by the `≥` rows plus the span of the `=` rows.
/// Equalities are removed by substituting a kernel basis.
pub fn lp_unbounded(p: &LpProblem) -> Result<bool, LpError> {
    if p.objective.len() != p.dim {
        return Err(LpError::Dimension {
            dim: p.dim,
            got: p.objective.len(),
        });
    }
    for c in &p.constraints {
        if c.coeffs.len() != p.dim {
            return Err(LpError::Dimension {
                dim: p.dim,
                got: c.coeffs.len(),
            });
        }
    }
    let eqs: Vec<Vec<Rational>> = p.constraints.iter().filter(|c| c.rel == Relation::Eq).map(|c| c.coeffs.clone()).collect();
    let basis: Vec<Vec<Rational>> = if eqs.is_empty() {
        (0..p.dim)
            .map(|i| (0..p.dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        let zero = vec![Rational::zero(); eqs.len()];
        solve_linear(&QMatrix::from_rows(&eqs), &zero).map(|(_, k)| k).ok_or(LpError::Infeasible)?
    };
    if basis.is_empty() {
        return Ok(false);
    }
    let restrict = |v: &[Rational]| -> Vec<Rational> { basis.iter().map(|b| dot(b, v)).collect() };
    let target = restrict(&p.objective);
    let gens: Vec<Vec<Rational>> = p.constraints.iter().filter(|c| c.rel == Relation::Ge).map(|c| restrict(&c.coeffs)).collect();
    Ok(!in_cone(&target, &gens))
}

/// Exact test whether `target` is a non-negative combination of `gens`.
pub fn in_cone(target: &[Rational], gens: &[Vec<Rational>]) -> bool {
    cone_separator(target, gens).is_none()
}

/// `None` if `target ∈ cone(gens)`, otherwise a `y` with `y·target > 0` and
/// `y·g ≤ 0` for every generator.
pub fn cone_separator(target: &[Rational], gens: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    if target.iter().all(|x| x.is_zero()) {
        return None;
    }
    let k = target.len();
    let a: Vec<Vec<f64>> = gens.iter().map(|g| g.iter().map(rational_to_f64).collect()).collect();
    let t: Vec<f64> = target.iter().map(rational_to_f64).collect();
    if let Some(basis) = phase_one(&columns_to_rows(&a, k), &t, false).map(|r| r.basis) {
        if let Some(answer) = certify(target, gens, &basis) {
            return answer;
        }
    }
    let rows = columns_to_rows(gens, k);
    let exact = phase_one(&rows, target, true).expect("exact simplex terminates");
    if exact.feasible {
        return None;
    }
    Some(
        certify(target, gens, &exact.basis)
            .flatten()
            .expect("an optimal exact basis certifies infeasibility"),
    )
}

fn columns_to_rows<T: Clone>(cols: &[Vec<T>], k: usize) -> Vec<Vec<T>> {
    (0..k).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Checks a simplex basis exactly, either as a non-negative solution or as a
/// separating functional. `None` when the basis certifies neither.
fn certify(target: &[Rational], gens: &[Vec<Rational>], basis: &[usize]) -> Option<Option<Vec<Rational>>> {
    let k = target.len();
    let m = gens.len();
    let flip: Vec<bool> = target.iter().map(|x| x.is_negative()).collect();
    let column = |j: usize| -> Vec<Rational> {
        if j < m {
            gens[j].clone()
        } else {
            let mut e = vec![Rational::zero(); k];
            e[j - m] = if flip[j - m] { -Rational::one() } else { Rational::one() };
            e
        }
    };
    let real: Vec<usize> = basis.iter().copied().filter(|&j| j < m).collect();
    if !real.is_empty() {
        let mat = QMatrix::from_rows(&real.iter().map(|&j| gens[j].clone()).collect::<Vec<_>>());
        if let Some((lambda, _)) = solve_linear(&mat.transpose(), target) {
            if lambda.iter().all(|x| !x.is_negative()) {
                return Some(None);
            }
        }
    }
    let bmat = QMatrix::from_rows(&basis.iter().map(|&j| column(j)).collect::<Vec<_>>()).transpose();
    let costs: Vec<Rational> = basis.iter().map(|&j| if j < m { Rational::zero() } else { Rational::one() }).collect();
    let y = solve_left_square(&bmat, &costs)?;
    if dot(&y, target).is_positive() && gens.iter().all(|g| !dot(&y, g).is_positive()) {
        return Some(Some(y));
    }
    None
}

pub trait LpNum: Clone + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self> {
    fn lp_zero() -> Self;
    fn lp_one() -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
}

impl LpNum for f64 {
    fn lp_zero() -> Self {
        0.0
    }
    fn lp_one() -> Self {
        1.0
    }
    fn is_pos(&self) -> bool {
        *self > 1e-9
    }
    fn is_neg(&self) -> bool {
        *self < -1e-9
    }
}

impl LpNum for Rational {
    fn lp_zero() -> Self {
        Zero::zero()
    }
    fn lp_one() -> Self {
        One::one()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

pub struct PhaseOne {
    pub feasible: bool,
    /// Basic column per row; indices `≥ m` are artificial.
    pub basis: Vec<usize>,
}

/// Phase-one simplex on `A λ = t, λ ≥ 0` with `A` given by rows (k × m).
/// `bland` selects Bland's rule throughout; otherwise Dantzig pricing with a
/// switch to Bland after a stall. Returns `None` on iteration overflow.
pub fn phase_one<T: LpNum>(a: &[Vec<T>], t: &[T], bland: bool) -> Option<PhaseOne> {
    let k = t.len();
    let m = a.first().map_or(0, |r| r.len());
    let width = m + k + 1;
    let mut tab: Vec<Vec<T>> = Vec::with_capacity(k + 1);
    for i in 0..k {
        let neg = t[i].is_neg() || (!t[i].is_pos() && t[i] < T::lp_zero());
        let mut row = Vec::with_capacity(width);
        for j in 0..m {
            row.push(if neg { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for l in 0..k {
            row.push(if l == i { T::lp_one() } else { T::lp_zero() });
        }
        row.push(if neg { -t[i].clone() } else { t[i].clone() });
        tab.push(row);
    }
    let mut obj = vec![T::lp_zero(); width];
    for row in &tab {
        for j in 0..m {
            obj[j] = obj[j].clone() - row[j].clone();
        }
        obj[width - 1] = obj[width - 1].clone() - row[width - 1].clone();
    }
    tab.push(obj);
    let mut basis: Vec<usize> = (m..m + k).collect();
    let cap = 50 * (m + k) + 1000;
    let mut use_bland = bland;
    for iter in 0..cap {
        if iter > 10 * (m + k) {
            use_bland = true;
        }
        let objrow = &tab[k];
        let enter = if use_bland {
            (0..m + k).find(|&j| objrow[j].is_neg())
        } else {
            let mut best: Option<usize> = None;
            for j in 0..m + k {
                if objrow[j].is_neg() && best.is_none_or(|b| objrow[j] < objrow[b]) {
                    best = Some(j);
                }
            }
            best
        };
        let Some(e) = enter else {
            let feasible = !tab[k][width - 1].is_neg();
            return Some(PhaseOne { feasible, basis });
        };
        let mut leave: Option<usize> = None;
        let mut best_ratio = T::lp_zero();
        for i in 0..k {
            if !tab[i][e].is_pos() {
                continue;
            }
            let ratio = tab[i][width - 1].clone() / tab[i][e].clone();
            let better = match leave {
                None => true,
                Some(l) => {
                    let d = ratio.clone() - best_ratio.clone();
                    d.is_neg() || (!d.is_pos() && basis[i] < basis[l])
                }
            };
            if better {
                leave = Some(i);
                best_ratio = ratio;
            }
        }
        let Some(l) = leave else {
            // Phase one is bounded below by zero; an unbounded ray means numerical trouble.
            return None;
        };
        let piv = tab[l][e].clone();
        for j in 0..width {
            tab[l][j] = tab[l][j].clone() / piv.clone();
        }
        let prow = tab[l].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == l {
                continue;
            }
            let f = row[e].clone();
            if !f.is_pos() && !f.is_neg() {
                continue;
            }
            for j in 0..width {
                row[j] = row[j].clone() - f.clone() * prow[j].clone();
            }
        }
        basis[l] = e;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat_int;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn one_dimensional() {
        let p = LpProblem::new(1, q(&[1])).ge(q(&[1]));
        assert!(!lp_unbounded(&p).unwrap());
        let p = LpProblem::new(1, q(&[-1])).ge(q(&[1]));
        assert!(lp_unbounded(&p).unwrap());
    }

    #[test]
    fn equalities_are_substituted() {
        let p = LpProblem::new(2, q(&[1, -1])).ge(q(&[1, 0])).eq(q(&[1, -1]));
        assert!(!lp_unbounded(&p).unwrap());
        let p = LpProblem::new(2, q(&[1, 0])).ge(q(&[0, 1])).eq(q(&[0, 1]));
        assert!(lp_unbounded(&p).unwrap());
    }

    #[test]
    fn cone_membership() {
        let gens = vec![q(&[1, 0, 0]), q(&[0, 1, 0]), q(&[1, 1, 1])];
        assert!(in_cone(&q(&[2, 3, 1]), &gens));
        assert!(!in_cone(&q(&[0, 0, 1]), &gens));
        assert!(!in_cone(&q(&[-1, 0, 0]), &gens));
        assert!(in_cone(&q(&[0, 0, 0]), &[]));
    }

    #[test]
    fn dimension_errors() {
        let p = LpProblem::new(2, q(&[1])).ge(q(&[1, 0]));
        assert_eq!(lp_unbounded(&p), Err(LpError::Dimension { dim: 2, got: 1 }));
    }
}
