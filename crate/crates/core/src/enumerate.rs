//! Finite vector sets in definite and hyperbolic lattices.
//!
//! Definite enumeration is Fincke–Pohst on a fraction-free LDLᵀ decomposition:
//! all bounds are integer comparisons, so the enumerated sets are exact.

use crate::exactalg::matrix::{dot, to_rational, vec_to_rational};
use crate::exactalg::rational::{ceil_int, common_denominator, floor_int, from_int, isqrt, rational_to_f64};
use crate::exactalg::snf::{integer_left_kernel, solve_integer_left};
use crate::exactalg::{Int, QMatrix, Rational, ZMatrix};
use crate::lattice::{Lattice, QVector};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EnumError {
    #[error("anchor vector is not in the positive cone")]
    NotPositive,
    #[error("target norm must be negative")]
    NonNegativeNorm,
    #[error("form is not definite on the slice")]
    NotDefinite,
}

/// Which vectors of a definite form to keep relative to the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Le,
    Lt,
    Eq,
}

/// Integral LLL (δ = 3/4) on a positive-definite integer Gram matrix.
/// Returns the unimodular transform `T` whose rows are the reduced basis.
pub fn lll_gram(gram: &ZMatrix) -> ZMatrix {
    let n = gram.nrows();
    let mut a = gram.clone();
    let mut h = ZMatrix::identity(n);
    if n <= 1 {
        return h;
    }
    // 1-indexed integral LLL: d[0] = 1, lam[k][j] for j < k.
    let mut d = vec![Int::zero(); n + 1];
    let mut lam = vec![vec![Int::zero(); n + 1]; n + 1];
    d[0] = Int::one();
    d[1] = a[(0, 0)].clone();
    let mut k = 2;
    let mut kmax = 1;
    let redi = |k: usize, l: usize, a: &mut ZMatrix, h: &mut ZMatrix, lam: &mut Vec<Vec<Int>>, d: &[Int]| {
        let two_l: Int = &lam[k][l] * 2;
        if two_l.abs() <= d[l] {
            return;
        }
        let q = (&two_l + &d[l]).div_floor(&(&d[l] * 2));
        for c in 0..n {
            let t = &q * &h[(l - 1, c)];
            h[(k - 1, c)] -= t;
        }
        for c in 0..n {
            let t = &q * &a[(l - 1, c)];
            a[(k - 1, c)] -= t;
        }
        for r in 0..n {
            let t = &q * &a[(r, l - 1)];
            a[(r, k - 1)] -= t;
        }
        let t = &q * &d[l];
        lam[k][l] -= t;
        for i in 1..l {
            let t = &q * &lam[l][i];
            lam[k][i] -= t;
        }
    };
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = a[(k - 1, j - 1)].clone();
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "LLL input must be positive definite");
                    d[k] = u;
                }
            }
        }
        loop {
            redi(k, k - 1, &mut a, &mut h, &mut lam, &d);
            let lhs: Int = &d[k] * &d[k - 2] * 4;
            let rhs: Int = &d[k - 1] * &d[k - 1] * 3 - &lam[k][k - 1] * &lam[k][k - 1] * 4;
            if lhs < rhs {
                h.swap_rows(k - 1, k - 2);
                a.swap_rows(k - 1, k - 2);
                a.swap_cols(k - 1, k - 2);
                for j in 1..k - 1 {
                    let t = lam[k][j].clone();
                    lam[k][j] = lam[k - 1][j].clone();
                    lam[k - 1][j] = t;
                }
                let l = lam[k][k - 1].clone();
                let b = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                    lam[i][k - 1] = (&b * &t + &l * &lam[i][k]) / &d[k];
                }
                d[k - 1] = b;
                if k > 2 {
                    k -= 1;
                }
            } else {
                for l in (1..k - 1).rev() {
                    redi(k, l, &mut a, &mut h, &mut lam, &d);
                }
                k += 1;
                break;
            }
        }
    }
    h
}

/// LLL-reduces the rows of `basis` (in ambient coordinates) for the ambient
/// Gram `gram`, provided the induced form is definite; otherwise returns the input.
pub fn lll_rows(basis: &ZMatrix, gram: &ZMatrix) -> ZMatrix {
    if basis.nrows() == 0 {
        return basis.clone();
    }
    let g = basis.matmul(gram).matmul(&basis.transpose());
    let sig = crate::lattice::signature_of(&to_rational(&g));
    let g = if sig.0 == g.nrows() {
        g
    } else if sig.1 == g.nrows() {
        -&g
    } else {
        return basis.clone();
    };
    lll_gram(&g).matmul(basis)
}

/// A positive-definite form prepared for repeated Fincke–Pohst enumeration.
#[derive(Clone, Debug)]
pub struct DefiniteEnumerator {
    n: usize,
    /// Denominator clearing the rational form: `A = den · N`.
    den: Int,
    /// Reduced basis: original coordinates = reduced coordinates · `t`.
    t: ZMatrix,
    t_inv: QMatrix,
    /// Bareiss rows: `ell[i][j]` for `j ≥ i`.
    ell: Vec<Vec<Int>>,
    /// Leading principal minors `Δ_0 … Δ_n` of the reduced form.
    delta: Vec<Int>,
    weights: Vec<Int>,
    scale: Int,
    /// Quadratic completion of the reduced form in floating point.
    chol: Vec<Vec<f64>>,
    t64: Option<Vec<Vec<i64>>>,
}

impl DefiniteEnumerator {
    /// Prepares the form `N` (must be positive definite).
    pub fn new(form: &QMatrix) -> Result<Self, EnumError> {
        let n = form.nrows();
        let den = common_denominator(form.data().iter());
        let a: ZMatrix = form.map(|x| (x * from_int(&den)).to_integer());
        if n > 0 && crate::lattice::signature_of(&to_rational(&a)) != (n, 0) {
            return Err(EnumError::NotDefinite);
        }
        let t = lll_gram(&a);
        let red = t.matmul(&a).matmul(&t.transpose());
        let mut m = red.clone();
        let mut ell = vec![vec![Int::zero(); n]; n];
        let mut delta = vec![Int::one(); n + 1];
        let mut prev = Int::one();
        for k in 0..n {
            for j in k..n {
                ell[k][j] = m[(k, j)].clone();
            }
            delta[k + 1] = m[(k, k)].clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        let mut scale = Int::one();
        for i in 0..n {
            scale = scale.lcm(&(&delta[i] * &delta[i + 1]));
        }
        let weights = (0..n).map(|i| &scale / (&delta[i] * &delta[i + 1])).collect();
        let t_inv = to_rational(&t).inverse().expect("unimodular");
        let denf = rational_to_f64(&from_int(&den));
        let mut chol: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| rational_to_f64(&from_int(&red[(i, j)])) / denf).collect())
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                chol[j][i] = chol[i][j];
                chol[i][j] /= chol[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    chol[k][l] -= chol[k][i] * chol[i][l];
                }
            }
        }
        let t64 = (0..n)
            .map(|i| (0..n).map(|j| i64::try_from(&t[(i, j)]).ok()).collect::<Option<Vec<i64>>>())
            .collect();
        Ok(DefiniteEnumerator {
            n,
            den,
            t,
            t_inv,
            ell,
            delta,
            weights,
            scale,
            chol,
            t64,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// All `x ∈ ℤⁿ` (original coordinates) with `N(x − c)` compared to `bound`.
    pub fn enumerate(&self, center: &[Rational], bound: &Rational, mode: Bound) -> Vec<Vec<Int>> {
        let mut out = Vec::new();
        self.for_each(center, bound, mode, |x| out.push(x.to_vec()));
        out.sort();
        out
    }

    pub fn count(&self, center: &[Rational], bound: &Rational, mode: Bound) -> usize {
        let mut c = 0usize;
        self.for_each(center, bound, mode, |_| c += 1);
        c
    }

    /// Visits every solution in original coordinates (unsorted).
    pub fn for_each(&self, center: &[Rational], bound: &Rational, mode: Bound, mut f: impl FnMut(&[Int])) {
        let n = self.n;
        if bound.is_negative() || (mode == Bound::Lt && bound.is_zero()) {
            return;
        }
        if n == 0 {
            if mode != Bound::Eq || bound.is_zero() {
                f(&[]);
            }
            return;
        }
        let c_red = self.t_inv.left_mul(center);
        let cd = common_denominator(c_red.iter());
        let cnum: Vec<Int> = c_red.iter().map(|x| (x * from_int(&cd)).to_integer()).collect();
        // N(y) ≤ Bn/Bd  ⟺  Σ w_i Y_i² ≤ Bn·cd²·scale·den / Bd, with Y_i integer.
        let b_scaled = bound * from_int(&(&cd * &cd * &self.scale * &self.den));
        let (budget, strict_fix) = match mode {
            Bound::Lt => {
                if b_scaled.is_integer() {
                    (b_scaled.to_integer() - 1, false)
                } else {
                    (floor_int(&b_scaled), false)
                }
            }
            Bound::Le => (floor_int(&b_scaled), false),
            Bound::Eq => {
                if !b_scaled.is_integer() {
                    return;
                }
                (b_scaled.to_integer(), true)
            }
        };
        if budget.is_negative() {
            return;
        }
        let mut z = vec![Int::zero(); n];
        let mut u = vec![Int::zero(); n];
        let mut x = vec![Int::zero(); n];
        self.level(n - 1, &budget, strict_fix, &cd, &cnum, &mut z, &mut u, &mut x, &mut f);
    }

    /// Visits a superset of the `x` with `N(x − c) ≤ bound`, found in floating
    /// point with a small slack; callers must verify each candidate exactly.
    /// Returns `false` when the basis does not fit in `i64`.
    pub fn for_each_candidate(&self, center: &[Rational], bound: &Rational, mut f: impl FnMut(&[i64])) -> bool {
        let Some(t64) = &self.t64 else {
            return false;
        };
        let n = self.n;
        let b = rational_to_f64(bound);
        if b < 0.0 {
            return true;
        }
        if n == 0 {
            f(&[]);
            return true;
        }
        let c: Vec<f64> = self.t_inv.left_mul(center).iter().map(rational_to_f64).collect();
        let b = b + 1e-7 * (1.0 + b);
        let mut z = vec![0i64; n];
        let mut x = vec![0i64; n];
        self.level_f64(n - 1, b, &c, t64, &mut z, &mut x, &mut f);
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn level_f64(&self, i: usize, rem: f64, c: &[f64], t64: &[Vec<i64>], z: &mut [i64], x: &mut [i64], f: &mut impl FnMut(&[i64])) {
        let q = &self.chol;
        let mut shift = 0.0;
        for j in i + 1..self.n {
            shift += q[i][j] * (z[j] as f64 - c[j]);
        }
        let mid = c[i] - shift;
        let r = (rem / q[i][i]).max(0.0).sqrt();
        let lo = (mid - r).ceil() as i64;
        let hi = (mid + r).floor() as i64;
        for zi in lo..=hi {
            let u = zi as f64 - mid;
            let left = rem - q[i][i] * u * u;
            if left < 0.0 {
                continue;
            }
            z[i] = zi;
            if i == 0 {
                for (col, xc) in x.iter_mut().enumerate() {
                    *xc = z.iter().zip(t64).map(|(zk, tk)| zk * tk[col]).sum();
                }
                f(x);
            } else {
                self.level_f64(i - 1, left, c, t64, z, x, f);
            }
        }
        z[i] = 0;
    }

    #[allow(clippy::too_many_arguments)]
    fn level(&self, i: usize, rem: &Int, exact: bool, cd: &Int, cnum: &[Int], z: &mut [Int], u: &mut [Int], x: &mut [Int], f: &mut impl FnMut(&[Int])) {
        let mut p = Int::zero();
        for j in i + 1..self.n {
            if !u[j].is_zero() {
                p += &self.ell[i][j] * &u[j];
            }
        }
        let di = &self.delta[i + 1];
        let w = &self.weights[i];
        let kmax = isqrt(&rem.div_floor(w));
        // Y = di·(cd·z − C) + p, |Y| ≤ kmax.
        let base = di * &cnum[i] - &p;
        let step = di * cd;
        let lo = ceil_int(&Rational::new(-&kmax + &base, step.clone()));
        let hi = floor_int(&Rational::new(&kmax + &base, step.clone()));
        let mut zi = lo;
        while zi <= hi {
            let ui = cd * &zi - &cnum[i];
            let y = di * &ui + &p;
            let r = rem - w * &y * &y;
            if !r.is_negative() {
                z[i] = zi.clone();
                u[i] = ui;
                if i == 0 {
                    if !exact || r.is_zero() {
                        for (c, xc) in x.iter_mut().enumerate() {
                            *xc = Int::zero();
                            for (k, zk) in z.iter().enumerate() {
                                if !zk.is_zero() && !self.t[(k, c)].is_zero() {
                                    *xc += zk * &self.t[(k, c)];
                                }
                            }
                        }
                        f(x);
                    }
                } else {
                    self.level(i - 1, &r, exact, cd, cnum, z, u, x, f);
                }
            }
            zi += 1;
        }
        u[i] = Int::zero();
        z[i] = Int::zero();
    }
}

/// An affine lattice `offset + ℤ·basis` inside `L ⊗ ℚ` (rows of `basis` in `L` coordinates).
#[derive(Clone, Debug)]
pub struct Coset {
    pub basis: QMatrix,
    pub offset: QVector,
}

impl Coset {
    pub fn lattice(n: usize) -> Self {
        Coset {
            basis: QMatrix::identity(n),
            offset: vec![Rational::zero(); n],
        }
    }

    pub fn dual(l: &Lattice) -> Self {
        Coset {
            basis: l.gram_q().inverse().expect("nondegenerate"),
            offset: vec![Rational::zero(); l.rank()],
        }
    }

    pub fn shifted(n: usize, offset: QVector) -> Self {
        Coset {
            basis: QMatrix::identity(n),
            offset,
        }
    }

    fn point(&self, z: &[Int]) -> QVector {
        let mut x = self.offset.clone();
        for (zi, row) in z.iter().zip(0..self.basis.nrows()) {
            if zi.is_zero() {
                continue;
            }
            let zq = from_int(zi);
            for (xc, b) in x.iter_mut().zip(self.basis.row(row)) {
                *xc += &zq * b;
            }
        }
        x
    }
}

/// Vectors of a negative-definite lattice (or coset) with norm compared to `a`.
pub struct NegDefEnumerator {
    coset: Coset,
    inner: DefiniteEnumerator,
    /// `−offset` in basis coordinates.
    center: Vec<Rational>,
}

impl NegDefEnumerator {
    pub fn new(l: &Lattice, coset: Coset) -> Result<Self, EnumError> {
        let gram = coset.basis.matmul(l.gram_q()).matmul(&coset.basis.transpose());
        let neg = -&gram;
        let inner = DefiniteEnumerator::new(&neg)?;
        let b_inv = coset.basis.inverse().ok_or(EnumError::NotDefinite)?;
        let center: Vec<Rational> = b_inv.left_mul(&coset.offset).iter().map(|x| -x.clone()).collect();
        Ok(NegDefEnumerator { coset, inner, center })
    }

    /// All `x` in the coset with `⟨x,x⟩` compared against `a` (`a ≤ 0`):
    /// `Bound::Eq` gives norm exactly `a`, `Le` gives `a ≤ ⟨x,x⟩`, `Lt` gives `a < ⟨x,x⟩`.
    pub fn vectors(&self, a: &Rational, mode: Bound) -> Vec<QVector> {
        let mut out: Vec<QVector> = self
            .inner
            .enumerate(&self.center, &(-a.clone()), mode)
            .iter()
            .map(|z| self.coset.point(z))
            .collect();
        out.sort();
        out
    }
}

pub fn enum_negdef(l: &Lattice, a: &Rational) -> Result<Vec<QVector>, EnumError> {
    if !a.is_negative() {
        return Err(EnumError::NonNegativeNorm);
    }
    Ok(NegDefEnumerator::new(l, Coset::lattice(l.rank()))?.vectors(a, Bound::Eq))
}

pub fn enum_negdef_dual(l: &Lattice, a: &Rational) -> Result<Vec<QVector>, EnumError> {
    if !a.is_negative() {
        return Err(EnumError::NonNegativeNorm);
    }
    Ok(NegDefEnumerator::new(l, Coset::dual(l))?.vectors(a, Bound::Eq))
}

/// Prepared slices `{x ∈ coset : ⟨x,v₀⟩ = b}` of a hyperbolic lattice.
pub struct HyperbolicSlicer {
    gram: QMatrix,
    coset: Coset,
    v0: QVector,
    /// `z·h_int = D·(b − ⟨offset, v₀⟩)` is the slice equation in basis coordinates.
    h_den: Int,
    g: Int,
    z0: Vec<Int>,
    /// Kernel directions in ambient coordinates.
    e: QMatrix,
    /// `E·G`, for pairing kernel directions.
    eg: QMatrix,
    inner: Option<DefiniteEnumerator>,
    gk_inv: Option<QMatrix>,
    base: Rational,
}

impl HyperbolicSlicer {
    pub fn new(l: &Lattice, coset: Coset, v0: &[Rational]) -> Result<Self, EnumError> {
        let gram = l.gram_q().clone();
        if !gram.form(v0, v0).is_positive() {
            return Err(EnumError::NotPositive);
        }
        let gv0 = gram.right_mul(v0);
        let h = coset.basis.right_mul(&gv0);
        let h_den = common_denominator(h.iter());
        let h_int: Vec<Int> = h.iter().map(|x| (x * from_int(&h_den)).to_integer()).collect();
        let g = h_int.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
        let col = ZMatrix::from_vec(h_int.len(), 1, h_int.clone());
        let (z0, _) = solve_integer_left(&col, std::slice::from_ref(&g)).expect("gcd is attained");
        let kern = integer_left_kernel(&col);
        let e = to_rational(&kern).matmul(&coset.basis);
        let e = if e.nrows() > 0 {
            let ez = to_integer_rows(&e);
            match ez {
                Some((rows, d)) => {
                    let red = lll_rows(
                        &rows,
                        &ZMatrix::from_vec(
                            gram.nrows(),
                            gram.ncols(),
                            gram.data().iter().map(|x| (x * from_int(&d) * from_int(&d)).to_integer()).collect(),
                        ),
                    );
                    to_rational(&red).scale(&Rational::new(Int::one(), d))
                }
                None => e,
            }
        } else {
            e
        };
        let eg = e.matmul(&gram);
        let gk = eg.matmul(&e.transpose());
        let (inner, gk_inv) = if e.nrows() > 0 {
            (Some(DefiniteEnumerator::new(&-&gk)?), Some(gk.inverse().ok_or(EnumError::NotDefinite)?))
        } else {
            (None, None)
        };
        let base = gram.form(&coset.offset, v0);
        Ok(HyperbolicSlicer {
            gram,
            coset,
            v0: v0.to_vec(),
            h_den,
            g,
            z0,
            e,
            eg,
            inner,
            gk_inv,
            base,
        })
    }

    /// Spacing and one value of the achievable pairings `⟨x, v₀⟩`.
    pub fn pairing_lattice(&self) -> (Rational, Rational) {
        (Rational::new(self.g.clone(), self.h_den.clone()), self.base.clone())
    }

    pub fn v0(&self) -> &[Rational] {
        &self.v0
    }

    /// All `x` with `⟨x,v₀⟩ = b` and `⟨x,x⟩ = a`, sorted.
    pub fn slice(&self, a: &Rational, b: &Rational) -> Vec<QVector> {
        let mut out = Vec::new();
        self.slice_with(a, b, Bound::Eq, |x| out.push(x));
        out.sort();
        out
    }

    /// Visits `x` with `⟨x,v₀⟩ = b` and `⟨x,x⟩ ≥ a` (`Le`), `> a` (`Lt`) or `= a` (`Eq`).
    pub fn slice_with(&self, a: &Rational, b: &Rational, mode: Bound, mut f: impl FnMut(QVector)) {
        let t = (b - &self.base) * from_int(&self.h_den);
        if !t.is_integer() {
            return;
        }
        let t = t.to_integer();
        if !t.is_multiple_of(&self.g) {
            return;
        }
        let k = &t / &self.g;
        let zp: Vec<Int> = self.z0.iter().map(|x| x * &k).collect();
        let q = self.coset.point(&zp);
        let Some(inner) = &self.inner else {
            let n = self.gram.form(&q, &q);
            let keep = match mode {
                Bound::Eq => &n == a,
                Bound::Le => &n >= a,
                Bound::Lt => &n > a,
            };
            if keep {
                f(q);
            }
            return;
        };
        let hp = self.eg.right_mul(&q);
        let gk_inv = self.gk_inv.as_ref().expect("kernel nonempty");
        let c: Vec<Rational> = gk_inv.left_mul(&hp).iter().map(|x| -x.clone()).collect();
        let gk = self.eg.matmul(&self.e.transpose());
        let constant = self.gram.form(&q, &q) - gk.form(&c, &c);
        let bound = constant - a;
        inner.for_each(&c, &bound, mode, |y| {
            let mut x = q.clone();
            for (yi, r) in y.iter().zip(0..self.e.nrows()) {
                if yi.is_zero() {
                    continue;
                }
                let yq = from_int(yi);
                for (xc, ev) in x.iter_mut().zip(self.e.row(r)) {
                    *xc += &yq * ev;
                }
            }
            f(x);
        });
    }
}

impl HyperbolicSlicer {
    /// Integral points of the slice `⟨x,v₀⟩ = b`, `⟨x,x⟩ = a`, visited as `i64`
    /// coordinates. Candidates are located in floating point and each one is
    /// checked exactly. Returns `false` when the data does not fit in `i64`.
    pub fn slice_int(&self, a: &Rational, b: &Rational, mut f: impl FnMut(&[i64])) -> bool {
        let to64 = |x: &Rational| if x.is_integer() { i64::try_from(x.numer()).ok() } else { None };
        let rows64 = |m: &QMatrix| {
            (0..m.nrows())
                .map(|i| m.row(i).iter().map(to64).collect::<Option<Vec<i64>>>())
                .collect::<Option<Vec<_>>>()
        };
        let (Some(gram), Some(e), Some(a64)) = (rows64(&self.gram), rows64(&self.e), to64(a)) else {
            return false;
        };
        let t = (b - &self.base) * from_int(&self.h_den);
        if !t.is_integer() || !t.to_integer().is_multiple_of(&self.g) {
            return true;
        }
        let k = t.to_integer() / &self.g;
        let zp: Vec<Int> = self.z0.iter().map(|x| x * &k).collect();
        let q = self.coset.point(&zp);
        let Some(q64) = q.iter().map(to64).collect::<Option<Vec<i64>>>() else {
            return false;
        };
        let norm = |x: &[i64]| -> i128 {
            gram.iter()
                .zip(x)
                .map(|(row, &xi)| xi as i128 * row.iter().zip(x).map(|(&g, &xj)| g as i128 * xj as i128).sum::<i128>())
                .sum()
        };
        let Some(inner) = &self.inner else {
            if norm(&q64) == a64 as i128 {
                f(&q64);
            }
            return true;
        };
        let hp = self.eg.right_mul(&q);
        let gk_inv = self.gk_inv.as_ref().expect("kernel nonempty");
        let c: Vec<Rational> = gk_inv.left_mul(&hp).iter().map(|x| -x.clone()).collect();
        let gk = self.eg.matmul(&self.e.transpose());
        let bound = self.gram.form(&q, &q) - gk.form(&c, &c) - a;
        let mut x = q64.clone();
        inner.for_each_candidate(&c, &bound, |y| {
            x.copy_from_slice(&q64);
            for (yi, er) in y.iter().zip(&e) {
                if *yi != 0 {
                    for (xc, ev) in x.iter_mut().zip(er) {
                        *xc += yi * ev;
                    }
                }
            }
            if norm(&x) == a64 as i128 {
                f(&x);
            }
        })
    }
}

fn to_integer_rows(m: &QMatrix) -> Option<(ZMatrix, Int)> {
    let d = common_denominator(m.data().iter());
    Some((m.map(|x| (x * from_int(&d)).to_integer()), d))
}

/// `{v ∈ L : ⟨v,v⟩ = a, ⟨v,v₀⟩ = b}` (or in `L∨` when `dual`).
pub fn enum_norm_pairing(l: &Lattice, v0: &[Rational], a: &Rational, b: &Rational, dual: bool) -> Result<Vec<QVector>, EnumError> {
    let coset = if dual { Coset::dual(l) } else { Coset::lattice(l.rank()) };
    Ok(HyperbolicSlicer::new(l, coset, v0)?.slice(a, b))
}

/// `{v : ⟨v,v⟩ = a, ⟨v,v₀⟩ > 0, ⟨v,v₁⟩ < 0}` in `L`.
pub fn enum_separating(l: &Lattice, v0: &[Rational], v1: &[Rational], a: &Rational) -> Result<Vec<QVector>, EnumError> {
    let slicer = HyperbolicSlicer::new(l, Coset::lattice(l.rank()), v0)?;
    separating_with(l, &slicer, v1, a)
}

pub fn separating_with(l: &Lattice, slicer: &HyperbolicSlicer, v1: &[Rational], a: &Rational) -> Result<Vec<QVector>, EnumError> {
    if !a.is_negative() {
        return Err(EnumError::NonNegativeNorm);
    }
    let v0 = slicer.v0();
    let n1 = l.norm(v1);
    let m = l.pair(v0, v1);
    if !n1.is_positive() || !m.is_positive() {
        return Err(EnumError::NotPositive);
    }
    if l.rank() < 3 || QMatrix::from_rows(&[v0.to_vec(), v1.to_vec()]).rank() < 2 {
        return separating_by_slices(l, slicer, v1, a);
    }
    let plane = PlaneSlicer::new(l, &slicer.coset, v0, v1)?;
    let mut out = Vec::new();
    plane.separating(a, |x| out.push(x));
    out.sort();
    Ok(out)
}

/// Slice-by-slice variant, used when the two anchors are proportional or the
/// rank is too small for a plane split.
fn separating_by_slices(l: &Lattice, slicer: &HyperbolicSlicer, v1: &[Rational], a: &Rational) -> Result<Vec<QVector>, EnumError> {
    let v0 = slicer.v0();
    let n0 = l.norm(v0);
    let n1 = l.norm(v1);
    let m = l.pair(v0, v1);
    let limit = -a * (&m * &m - &n0 * &n1) / &n1;
    let f1 = l.functional(v1);
    let mut out = Vec::new();
    for b in pairing_values_below(slicer, &limit) {
        for v in slicer.slice(a, &b) {
            if dot(&f1, &v).is_negative() {
                out.push(v);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Fibres `{x ∈ coset : ⟨x,v₀⟩ = b, ⟨x,v₁⟩ = c}` over a hyperbolic plane
/// spanned by two positive anchors.
pub struct PlaneSlicer {
    gram: QMatrix,
    coset: Coset,
    v0: QVector,
    v1: QVector,
    /// `z·h = D·((b,c) − base)` in coset coordinates.
    h: ZMatrix,
    den: Int,
    base: (Rational, Rational),
    steps: (Rational, Rational),
    e: QMatrix,
    eg: QMatrix,
    gk: QMatrix,
    gk_inv: QMatrix,
    inner: DefiniteEnumerator,
}

impl PlaneSlicer {
    pub fn new(l: &Lattice, coset: &Coset, v0: &[Rational], v1: &[Rational]) -> Result<Self, EnumError> {
        let gram = l.gram_q().clone();
        let g0 = gram.right_mul(v0);
        let g1 = gram.right_mul(v1);
        let h0 = coset.basis.right_mul(&g0);
        let h1 = coset.basis.right_mul(&g1);
        let den = common_denominator(h0.iter().chain(h1.iter()));
        let n = h0.len();
        let mut data = Vec::with_capacity(2 * n);
        for (x, y) in h0.iter().zip(&h1) {
            data.push((x * from_int(&den)).to_integer());
            data.push((y * from_int(&den)).to_integer());
        }
        let h = ZMatrix::from_vec(n, 2, data);
        let gcd_col = |j: usize| (0..n).fold(Int::zero(), |acc, i| acc.gcd(&h[(i, j)]));
        let steps = (Rational::new(gcd_col(0), den.clone()), Rational::new(gcd_col(1), den.clone()));
        let kern = integer_left_kernel(&h);
        let e = to_rational(&kern).matmul(&coset.basis);
        let e = match to_integer_rows(&e) {
            Some((rows, d)) => {
                let scaled = ZMatrix::from_vec(
                    gram.nrows(),
                    gram.ncols(),
                    gram.data().iter().map(|x| (x * from_int(&d) * from_int(&d)).to_integer()).collect(),
                );
                to_rational(&lll_rows(&rows, &scaled)).scale(&Rational::new(Int::one(), d))
            }
            None => e,
        };
        let eg = e.matmul(&gram);
        let gk = eg.matmul(&e.transpose());
        let inner = DefiniteEnumerator::new(&-&gk)?;
        let gk_inv = gk.inverse().ok_or(EnumError::NotDefinite)?;
        let base = (gram.form(&coset.offset, v0), gram.form(&coset.offset, v1));
        Ok(PlaneSlicer {
            gram,
            coset: coset.clone(),
            v0: v0.to_vec(),
            v1: v1.to_vec(),
            h,
            den,
            base,
            steps,
            e,
            eg,
            gk,
            gk_inv,
            inner,
        })
    }

    /// Visits `x` with `⟨x,v₀⟩ = b`, `⟨x,v₁⟩ = c` and `⟨x,x⟩ = a`.
    pub fn fibre(&self, a: &Rational, b: &Rational, c: &Rational, mut f: impl FnMut(QVector)) {
        let t0 = (b - &self.base.0) * from_int(&self.den);
        let t1 = (c - &self.base.1) * from_int(&self.den);
        if !t0.is_integer() || !t1.is_integer() {
            return;
        }
        let Some((z, _)) = solve_integer_left(&self.h, &[t0.to_integer(), t1.to_integer()]) else {
            return;
        };
        let q = self.coset.point(&z);
        let hp = self.eg.right_mul(&q);
        let c0: Vec<Rational> = self.gk_inv.left_mul(&hp).iter().map(|x| -x.clone()).collect();
        let constant = self.gram.form(&q, &q) - self.gk.form(&c0, &c0);
        let bound = constant - a;
        self.inner.for_each(&c0, &bound, Bound::Eq, |y| {
            let mut x = q.clone();
            for (yi, r) in y.iter().zip(0..self.e.nrows()) {
                if yi.is_zero() {
                    continue;
                }
                let yq = from_int(yi);
                for (xc, ev) in x.iter_mut().zip(self.e.row(r)) {
                    *xc += &yq * ev;
                }
            }
            f(x);
        });
    }

    /// Visits all `x` of norm `a < 0` with `⟨x,v₀⟩ > 0 > ⟨x,v₁⟩`.
    pub fn separating(&self, a: &Rational, mut f: impl FnMut(QVector)) {
        let n0 = self.gram.form(&self.v0, &self.v0);
        let n1 = self.gram.form(&self.v1, &self.v1);
        let m = self.gram.form(&self.v0, &self.v1);
        // plane part of norm ≥ a:  n₁b² − 2mbc + n₀c² ≤ −a(m² − n₀n₁)
        let k = -a * (&m * &m - &n0 * &n1);
        let lhs = |b: &Rational, c: &Rational| &n1 * b * b - Rational::from_integer(Int::from(2)) * &m * b * c + &n0 * c * c;
        let first = |step: &Rational, base: &Rational, positive: bool| {
            let r = base - step * from_int(&floor_int(&(base / step)));
            match (positive, r.is_zero()) {
                (true, true) => step.clone(),
                (true, false) => r,
                (false, _) => r - step,
            }
        };
        let mut b = first(&self.steps.0, &self.base.0, true);
        while lhs(&b, &Rational::zero()) <= k {
            let mut c = first(&self.steps.1, &self.base.1, false);
            while lhs(&b, &c) <= k {
                self.fibre(a, &b, &c, &mut f);
                c -= &self.steps.1;
            }
            b += &self.steps.0;
        }
    }
}

/// Positive achievable pairings `b` with `b² < limit`.
pub fn pairing_values_below(slicer: &HyperbolicSlicer, limit: &Rational) -> Vec<Rational> {
    let (step, base) = slicer.pairing_lattice();
    let mut b = &base - &step * from_int(&floor_int(&(&base / &step)));
    if b.is_zero() {
        b = step.clone();
    }
    let mut out = Vec::new();
    while &(&b * &b) < limit {
        out.push(b.clone());
        b += &step;
    }
    out
}

pub fn int_rows(v: &[Vec<i64>]) -> ZMatrix {
    ZMatrix::from_rows(&v.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect::<Vec<_>>())
}

pub fn qv(v: &[i64]) -> QVector {
    vec_to_rational(&v.iter().map(|&x| Int::from(x)).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{rat, rat_int};

    fn u_plane() -> Lattice {
        Lattice::from_i64("U", &[vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn lll_reduces_a_skewed_basis() {
        let g = int_rows(&[vec![1, 0], vec![0, 1]]);
        let basis = int_rows(&[vec![1, 0], vec![7, 1]]);
        let red = lll_rows(&basis, &g);
        let rg = red.matmul(&g).matmul(&red.transpose());
        assert_eq!(rg, int_rows(&[vec![1, 0], vec![0, 1]]));
    }

    #[test]
    fn definite_counts() {
        let e = DefiniteEnumerator::new(&to_rational(&int_rows(&[vec![2, -1], vec![-1, 2]]))).unwrap();
        assert_eq!(e.count(&[rat_int(0), rat_int(0)], &rat_int(2), Bound::Eq), 6);
        assert_eq!(e.count(&[rat_int(0), rat_int(0)], &rat_int(2), Bound::Lt), 1);
        assert_eq!(e.count(&[rat(1, 2), rat_int(0)], &rat(1, 2), Bound::Eq), 2);
    }

    #[test]
    fn hyperbolic_examples() {
        let u = u_plane();
        let v = enum_norm_pairing(&u, &qv(&[1, 1]), &rat_int(0), &rat_int(1), false).unwrap();
        assert_eq!(v, vec![qv(&[0, 1]), qv(&[1, 0])]);
        let v = enum_norm_pairing(&u, &qv(&[1, 1]), &rat_int(-1), &rat_int(1), false).unwrap();
        assert!(v.is_empty());
        let v = enum_separating(&u, &qv(&[2, 1]), &qv(&[1, 2]), &rat_int(-2)).unwrap();
        assert_eq!(v, vec![qv(&[-1, 1])]);
        let v = enum_separating(&u, &qv(&[2, 1]), &qv(&[2, 1]), &rat_int(-2)).unwrap();
        assert!(v.is_empty());
        assert_eq!(enum_separating(&u, &qv(&[2, 1]), &qv(&[1, 2]), &rat_int(0)), Err(EnumError::NonNegativeNorm));
        assert_eq!(
            enum_norm_pairing(&u, &qv(&[1, -1]), &rat_int(0), &rat_int(1), false),
            Err(EnumError::NotPositive)
        );
    }

    #[test]
    fn negative_definite_roots() {
        let a2 = Lattice::from_i64("A2", &[vec![-2, 1], vec![1, -2]]).unwrap();
        assert_eq!(enum_negdef(&a2, &rat_int(-2)).unwrap().len(), 6);
        let d = enum_negdef_dual(&a2, &rat(-2, 3)).unwrap();
        assert_eq!(d.len(), 6);
    }
}
