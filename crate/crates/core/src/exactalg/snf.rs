//! Smith and Hermite normal forms and integer linear systems.

use super::matrix::{QMatrix, ZMatrix};
use super::rational::{from_int, Int, Rational};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal form, same shape as the input.
    pub d: ZMatrix,
    pub u: ZMatrix,
    pub v: ZMatrix,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.nrows().min(self.d.ncols()))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

fn row_axpy(m: &mut ZMatrix, dst: usize, q: &Int, src: usize) {
    if q.is_zero() {
        return;
    }
    for k in 0..m.ncols() {
        let t = q * &m[(src, k)];
        m[(dst, k)] -= t;
    }
}

fn col_axpy(m: &mut ZMatrix, dst: usize, q: &Int, src: usize) {
    if q.is_zero() {
        return;
    }
    for k in 0..m.nrows() {
        let t = q * &m[(k, src)];
        m[(k, dst)] -= t;
    }
}

fn negate_row(m: &mut ZMatrix, i: usize) {
    for x in m.row_mut(i) {
        *x = -&*x;
    }
}

/// Computes `U·M·V = D` with `d₁ | d₂ | …` and `U`, `V` unimodular.
pub fn smith_normal_form(m: &ZMatrix) -> Smith {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut a = m.clone();
    let mut u = ZMatrix::identity(rows);
    let mut v = ZMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        'pivot: loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Smith { d: a, u, v };
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            {
                let p = a[(t, t)].clone();
                let mut dirty = false;
                for i in t + 1..rows {
                    if a[(i, t)].is_zero() {
                        continue;
                    }
                    let q = a[(i, t)].div_floor(&p);
                    row_axpy(&mut a, i, &q, t);
                    row_axpy(&mut u, i, &q, t);
                    if !a[(i, t)].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..cols {
                    if a[(t, j)].is_zero() {
                        continue;
                    }
                    let q = a[(t, j)].div_floor(&p);
                    col_axpy(&mut a, j, &q, t);
                    col_axpy(&mut v, j, &q, t);
                    if !a[(t, j)].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    continue 'pivot;
                }
                let mut bad = None;
                'scan: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !a[(i, j)].is_multiple_of(&p) {
                            bad = Some(i);
                            break 'scan;
                        }
                    }
                }
                match bad {
                    Some(i) => {
                        let minus_one = -Int::one();
                        row_axpy(&mut a, t, &minus_one, i);
                        row_axpy(&mut u, t, &minus_one, i);
                        continue 'pivot;
                    }
                    None => break 'pivot,
                }
            }
        }
        if a[(t, t)].is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut u, t);
        }
    }
    Smith { d: a, u, v }
}

/// Row-style Hermite normal form: the nonzero rows of an echelon basis of the
/// row lattice, positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &ZMatrix) -> ZMatrix {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut a = m.clone();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !a[(i, c)].is_zero() && best.is_none_or(|b| a[(i, c)].abs() < a[(b, c)].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(r, b);
            let p = a[(r, c)].clone();
            let mut done = true;
            for i in r + 1..rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let q = a[(i, c)].div_floor(&p);
                row_axpy(&mut a, i, &q, r);
                if !a[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                if a[(r, c)].is_negative() {
                    negate_row(&mut a, r);
                }
                pivots.push((r, c));
                r += 1;
                break;
            }
        }
    }
    for &(pr, pc) in &pivots {
        let p = a[(pr, pc)].clone();
        for i in 0..pr {
            let q = a[(i, pc)].div_floor(&p);
            row_axpy(&mut a, i, &q, pr);
        }
    }
    a.select_rows(&(0..r).collect::<Vec<_>>())
}

/// Integer solutions of `x·A = b`: a particular solution and a basis of the
/// integer left kernel. `None` when no integer solution exists.
pub fn solve_integer_left(a: &ZMatrix, b: &[Int]) -> Option<(Vec<Int>, ZMatrix)> {
    assert_eq!(b.len(), a.ncols());
    let s = smith_normal_form(a);
    let r = s.rank();
    let bv = s.v.left_mul(b);
    let mut y = vec![Int::zero(); a.nrows()];
    for (j, val) in bv.iter().enumerate() {
        if j < r {
            let d = &s.d[(j, j)];
            if !val.is_multiple_of(d) {
                return None;
            }
            y[j] = val / d;
        } else if !val.is_zero() {
            return None;
        }
    }
    let x = s.u.left_mul(&y);
    let kernel = s.u.select_rows(&(r..a.nrows()).collect::<Vec<_>>());
    Some((x, kernel))
}

/// Integer basis of `{x ∈ ℤ^m : x·A = 0}`.
pub fn integer_left_kernel(a: &ZMatrix) -> ZMatrix {
    let s = smith_normal_form(a);
    let r = s.rank();
    s.u.select_rows(&(r..a.nrows()).collect::<Vec<_>>())
}

/// True iff the rows of `m` span a primitive (saturated) sublattice of `ℤ^n`.
pub fn rows_primitive(m: &ZMatrix) -> bool {
    smith_normal_form(m).diagonal().iter().all(|d| d.is_one())
}

/// Rational solutions of `A·x = b`: particular solution plus kernel basis.
pub fn solve_linear(a: &QMatrix, b: &[Rational]) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    assert_eq!(a.nrows(), b.len());
    let n = a.ncols();
    let mut aug = QMatrix::zeros(a.nrows(), n + 1);
    for i in 0..a.nrows() {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let (red, pivots) = aug.rref();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = red[(r, n)].clone();
    }
    let mut kernel = Vec::new();
    for f in (0..n).filter(|c| !pivots.contains(c)) {
        let mut k = vec![Rational::zero(); n];
        k[f] = Rational::one();
        for (r, &c) in pivots.iter().enumerate() {
            k[c] = -red[(r, f)].clone();
        }
        kernel.push(k);
    }
    Some((x, kernel))
}

/// Rational basis of the left kernel `{x : x·A = 0}`.
pub fn rational_left_kernel(a: &QMatrix) -> Vec<Vec<Rational>> {
    let zero = vec![Rational::zero(); a.ncols()];
    solve_linear(&a.transpose(), &zero).map(|(_, k)| k).unwrap_or_default()
}

/// Solves `x·A = b` over the rationals for a square invertible `A`.
pub fn solve_left_square(a: &QMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    solve_linear(&a.transpose(), b).and_then(|(x, k)| k.is_empty().then_some(x))
}

pub fn int_to_q(v: &[Int]) -> Vec<Rational> {
    v.iter().map(from_int).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::matrix::to_rational;
    use crate::exactalg::rational::{int, rat, rat_int};

    fn zm(rows: &[&[i64]]) -> ZMatrix {
        ZMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>())
    }

    fn check(m: &ZMatrix) -> Smith {
        let s = smith_normal_form(m);
        assert_eq!(s.u.matmul(m).matmul(&s.v), s.d);
        assert!(s.u.det().abs().is_one());
        assert!(s.v.det().abs().is_one());
        let d = s.diagonal();
        for w in d.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check(&ZMatrix::identity(3)).diagonal(), vec![int(1); 3]);
        assert_eq!(check(&zm(&[&[0, 1], &[1, 0]])).diagonal(), vec![int(1), int(1)]);
        assert_eq!(check(&zm(&[&[-2]])).diagonal(), vec![int(2)]);
        assert_eq!(
            check(&zm(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])).diagonal(),
            vec![int(2), int(6), int(12)]
        );
        assert_eq!(check(&zm(&[&[2, 0], &[0, 3]])).diagonal(), vec![int(1), int(6)]);
    }

    #[test]
    fn hnf_spans_same_lattice() {
        let m = zm(&[&[2, 4], &[3, 5], &[1, 1]]);
        let h = hermite_normal_form(&m);
        assert_eq!(h, zm(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn integer_solving() {
        let a = zm(&[&[2], &[3]]);
        let (x, k) = solve_integer_left(&a, &[int(1)]).unwrap();
        assert_eq!(a.left_mul(&x), vec![int(1)]);
        assert_eq!(k.nrows(), 1);
        assert!(solve_integer_left(&zm(&[&[2], &[4]]), &[int(1)]).is_none());
        assert!(rows_primitive(&zm(&[&[1, 0, 0], &[0, 1, 0]])));
        assert!(!rows_primitive(&zm(&[&[2, 0, 0]])));
    }

    #[test]
    fn rational_solving() {
        let id = to_rational(&ZMatrix::identity(2));
        let (x, k) = solve_linear(&id, &[rat(1, 2), rat_int(3)]).unwrap();
        assert_eq!(x, vec![rat(1, 2), rat_int(3)]);
        assert!(k.is_empty());
        let a = to_rational(&zm(&[&[1, 1]]));
        let (x, k) = solve_linear(&a, &[rat_int(1)]).unwrap();
        assert_eq!(x, vec![rat_int(1), rat_int(0)]);
        assert_eq!(k, vec![vec![rat_int(-1), rat_int(1)]]);
        assert!(solve_linear(&to_rational(&zm(&[&[0, 0]])), &[rat_int(1)]).is_none());
    }
}
