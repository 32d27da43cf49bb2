//! Integral lattices with a fixed basis, discriminant forms, isometries and embeddings.

use crate::exactalg::matrix::{dot, to_integer, to_rational, vec_to_rational};
use crate::exactalg::rational::{fmt_rational, from_int, parse_rational, rational_mod, serde_rational};
use crate::exactalg::snf::{integer_left_kernel, rows_primitive, smith_normal_form, solve_left_square};
use crate::exactalg::{Int, QMatrix, Rational, ZMatrix};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub type QVector = Vec<Rational>;

#[derive(Debug, thiserror::Error)]
pub enum LatticeError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("lattice flagged even has an odd diagonal entry")]
    NotEven,
    #[error("not an isometry of L")]
    NotIsometry,
    #[error("discriminant form requested on an odd lattice")]
    OddLattice,
    #[error("embedding does not preserve the Gram forms")]
    NotEmbedding,
    #[error("malformed lattice data: {0}")]
    Malformed(String),
}

#[derive(Clone, Debug)]
pub struct Lattice {
    pub name: String,
    gram: ZMatrix,
    gram_q: QMatrix,
    even: bool,
    labels: Vec<String>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl Lattice {
    pub fn new(name: impl Into<String>, gram: ZMatrix) -> Result<Self, LatticeError> {
        let n = gram.nrows();
        if !gram.is_square() || gram.transpose() != gram {
            return Err(LatticeError::NotSymmetric);
        }
        if n > 0 && gram.det().is_zero() {
            return Err(LatticeError::Degenerate);
        }
        let even = (0..n).all(|i| gram[(i, i)].is_even());
        Ok(Lattice {
            name: name.into(),
            gram_q: to_rational(&gram),
            gram,
            even,
            labels: (0..n).map(|i| format!("e{i}")).collect(),
        })
    }

    pub fn from_i64(name: impl Into<String>, rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        let rows: Vec<Vec<Int>> = rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        Lattice::new(name, ZMatrix::from_rows(&rows))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.rank());
        self.labels = labels;
        self
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &ZMatrix {
        &self.gram
    }

    pub fn gram_q(&self) -> &QMatrix {
        &self.gram_q
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn det(&self) -> Int {
        self.gram.det()
    }

    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        self.gram_q.form(x, y)
    }

    pub fn norm(&self, x: &[Rational]) -> Rational {
        self.pair(x, x)
    }

    pub fn pair_int(&self, x: &[Int], y: &[Int]) -> Int {
        self.gram.form(x, y)
    }

    /// `x ↦ x·G`, the coordinates of the functional `⟨x, ·⟩`.
    pub fn functional(&self, x: &[Rational]) -> Vec<Rational> {
        self.gram_q.left_mul(x)
    }

    /// True iff `x ∈ L∨`.
    pub fn in_dual(&self, x: &[Rational]) -> bool {
        self.functional(x).iter().all(|c| c.is_integer())
    }

    /// Sylvester signature (positive, negative) by rational congruence diagonalisation.
    pub fn signature(&self) -> (usize, usize) {
        signature_of(&self.gram_q)
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature() == (0, self.rank())
    }

    pub fn discriminant_group(&self) -> DiscriminantGroup {
        let s = smith_normal_form(&self.gram);
        let mut factors = Vec::new();
        let mut gens = Vec::new();
        let mut positions = Vec::new();
        for i in 0..self.rank() {
            let d = s.d[(i, i)].abs();
            if d > Int::one() {
                let g: QVector = s.u.row(i).iter().map(|x| Rational::new(x.clone(), d.clone())).collect();
                factors.push(d);
                gens.push(g);
                positions.push(i);
            }
        }
        let k = gens.len();
        let mut q = vec![vec![Rational::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                let b = self.pair(&gens[i], &gens[j]);
                q[i][j] = if i == j {
                    rational_mod(&b, &Rational::from_integer(2.into()))
                } else {
                    rational_mod(&b, &Rational::one())
                };
            }
        }
        DiscriminantGroup {
            factors,
            generators: gens,
            q,
            v: s.v,
            positions,
        }
    }

    /// Discriminant-group generators together with the data needed to reduce
    /// arbitrary dual vectors; cached by callers that test many isometries.
    pub fn omega_test(&self) -> OmegaTest {
        OmegaTest {
            generators: self.discriminant_group().generators,
        }
    }

    pub fn reflection(&self, r: &[Rational]) -> Result<Isometry, LatticeError> {
        let rr = self.norm(r);
        if rr.is_zero() {
            return Err(LatticeError::NotIsometry);
        }
        let fr = self.functional(r);
        let n = self.rank();
        let two = Rational::from_integer(2.into());
        let mut m = QMatrix::identity(n);
        for i in 0..n {
            let c = &two * &fr[i] / &rr;
            for j in 0..n {
                m[(i, j)] -= &c * &r[j];
            }
        }
        let m = to_integer(&m).ok_or(LatticeError::NotIsometry)?;
        Ok(Isometry::new(m))
    }

    pub fn is_isometry(&self, g: &Isometry) -> bool {
        let m = &g.matrix;
        m.nrows() == self.rank() && m.matmul(&self.gram).matmul(&m.transpose()) == self.gram && m.det().abs().is_one()
    }

    pub fn to_file(&self) -> LatticeFile {
        LatticeFile {
            rank: self.rank(),
            gram: self
                .gram
                .to_rows()
                .iter()
                .map(|r| r.iter().map(crate::exactalg::rational::to_i64).collect())
                .collect(),
            even: self.even,
            basis_labels: self.labels.clone(),
        }
    }

    pub fn from_file(name: impl Into<String>, f: &LatticeFile) -> Result<Self, LatticeError> {
        if f.gram.len() != f.rank || f.gram.iter().any(|r| r.len() != f.rank) {
            return Err(LatticeError::Malformed("gram shape does not match rank".into()));
        }
        let l = Lattice::from_i64(name, &f.gram)?;
        if f.even && !l.even {
            return Err(LatticeError::NotEven);
        }
        if f.basis_labels.len() == f.rank {
            Ok(l.with_labels(f.basis_labels.clone()))
        } else {
            Ok(l)
        }
    }
}

pub fn signature_of(g: &QMatrix) -> (usize, usize) {
    let n = g.nrows();
    let mut a = g.clone();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(&first) = active.first() {
        let piv = match active.iter().copied().find(|&i| !a[(i, i)].is_zero()) {
            Some(i) => i,
            None => {
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[(i, j)].is_zero());
                let Some((i, j)) = pair else { break };
                // Replace e_i by e_i + e_j: the new diagonal entry is 2 a_ij.
                for k in 0..n {
                    let t = a[(j, k)].clone();
                    a[(i, k)] += t;
                }
                for k in 0..n {
                    let t = a[(k, j)].clone();
                    a[(k, i)] += t;
                }
                i
            }
        };
        let _ = first;
        let p = a[(piv, piv)].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != piv);
        for &i in &active {
            if a[(i, piv)].is_zero() {
                continue;
            }
            let f = &a[(i, piv)] / &p;
            for k in 0..n {
                let t = &f * &a[(piv, k)];
                a[(i, k)] -= t;
            }
            for k in 0..n {
                let t = &f * &a[(k, piv)];
                a[(k, i)] -= t;
            }
        }
    }
    (pos, neg)
}

#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    /// Invariant factors `d₁ | … | d_k` greater than one.
    pub factors: Vec<Int>,
    /// Lifts in `L∨` of generators of the cyclic factors.
    pub generators: Vec<QVector>,
    /// `q(x_i)` mod 2 on the diagonal, `b(x_i, x_j)` mod 1 off it.
    pub q: Vec<Vec<Rational>>,
    v: ZMatrix,
    positions: Vec<usize>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> Int {
        self.factors.iter().fold(Int::one(), |a, b| a * b)
    }

    /// Coordinates of `x ∈ L∨` on the generators, reduced modulo the factors.
    pub fn coordinates(&self, lattice: &Lattice, x: &[Rational]) -> Vec<Int> {
        let y = lattice.functional(x);
        let y: Vec<Int> = y
            .iter()
            .map(|c| {
                assert!(c.is_integer(), "vector is not in the dual lattice");
                c.to_integer()
            })
            .collect();
        let c = self.v.left_mul(&y);
        self.positions.iter().zip(&self.factors).map(|(&p, d)| c[p].mod_floor(d)).collect()
    }

    /// Abelian invariants as a compact string such as `(Z/2)^4+(Z/4)`.
    pub fn describe(&self) -> String {
        if self.factors.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<(Int, usize)> = Vec::new();
        for f in &self.factors {
            match parts.last_mut() {
                Some((g, c)) if g == f => *c += 1,
                _ => parts.push((f.clone(), 1)),
            }
        }
        parts
            .iter()
            .map(|(f, c)| if *c == 1 { format!("(Z/{f})") } else { format!("(Z/{f})^{c}") })
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Test for the subgroup `O(L)^ω` of isometries acting as `±1` on `L∨/L`.
#[derive(Clone, Debug)]
pub struct OmegaTest {
    generators: Vec<QVector>,
}

impl OmegaTest {
    pub fn discriminant_sign(&self, g: &Isometry) -> Option<i8> {
        let m = to_rational(&g.matrix);
        let mut plus = true;
        let mut minus = true;
        for x in &self.generators {
            let y = m.left_mul(x);
            if plus && !y.iter().zip(x).all(|(a, b)| (a - b).is_integer()) {
                plus = false;
            }
            if minus && !y.iter().zip(x).all(|(a, b)| (a + b).is_integer()) {
                minus = false;
            }
        }
        if plus {
            Some(1)
        } else if minus {
            Some(-1)
        } else {
            None
        }
    }

    pub fn contains(&self, g: &Isometry) -> bool {
        self.discriminant_sign(g).is_some()
    }
}

/// An isometry as an integer matrix acting on row vectors from the right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    pub matrix: ZMatrix,
}

impl Isometry {
    pub fn new(matrix: ZMatrix) -> Self {
        assert!(matrix.is_square());
        Isometry { matrix }
    }

    pub fn identity(n: usize) -> Self {
        Isometry { matrix: ZMatrix::identity(n) }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == ZMatrix::identity(self.matrix.nrows())
    }

    /// `x ↦ x·M`.
    pub fn apply(&self, x: &[Rational]) -> QVector {
        let mut out = vec![Rational::zero(); x.len()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (o, m) in out.iter_mut().zip(self.matrix.row(i)) {
                if !m.is_zero() {
                    *o += xi * from_int(m);
                }
            }
        }
        out
    }

    pub fn apply_int(&self, x: &[Int]) -> Vec<Int> {
        self.matrix.left_mul(x)
    }

    /// `self` followed by `other`: `x ↦ (x·A)·B`.
    pub fn then(&self, other: &Isometry) -> Isometry {
        Isometry {
            matrix: self.matrix.matmul(&other.matrix),
        }
    }

    pub fn inverse(&self) -> Isometry {
        let inv = to_rational(&self.matrix).inverse().expect("isometry is invertible");
        Isometry {
            matrix: to_integer(&inv).expect("isometry inverse is integral"),
        }
    }

    pub fn pow(&self, k: i64) -> Isometry {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Isometry::identity(self.matrix.nrows());
        for _ in 0..k.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    pub fn to_file(&self, lattice: &str) -> IsometryFile {
        IsometryFile {
            lattice: lattice.to_string(),
            matrix: self.matrix.to_rows().iter().map(|r| r.iter().map(from_int).collect()).collect(),
        }
    }

    pub fn from_file(f: &IsometryFile) -> Result<Self, LatticeError> {
        let n = f.matrix.len();
        if f.matrix.iter().any(|r| r.len() != n) {
            return Err(LatticeError::Malformed("isometry matrix is not square".into()));
        }
        let q = QMatrix::from_rows(&f.matrix);
        let z = to_integer(&q).ok_or(LatticeError::NotIsometry)?;
        Ok(Isometry::new(z))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LatticeFile {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub even: bool,
    pub basis_labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct IsometryFile {
    pub lattice: String,
    #[serde(with = "serde_rational::mat")]
    pub matrix: Vec<Vec<Rational>>,
}

/// A lattice map given by the images of the source basis in target coordinates.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: Lattice,
    pub target: Lattice,
    pub image: ZMatrix,
}

impl Embedding {
    pub fn new(source: Lattice, target: Lattice, image: ZMatrix) -> Result<Self, LatticeError> {
        if image.nrows() != source.rank() || image.ncols() != target.rank() {
            return Err(LatticeError::NotEmbedding);
        }
        if image.matmul(target.gram()).matmul(&image.transpose()) != *source.gram() {
            return Err(LatticeError::NotEmbedding);
        }
        Ok(Embedding { source, target, image })
    }

    pub fn identity(l: &Lattice) -> Self {
        Embedding {
            source: l.clone(),
            target: l.clone(),
            image: ZMatrix::identity(l.rank()),
        }
    }

    /// Image of a source vector in target coordinates.
    pub fn map(&self, x: &[Rational]) -> QVector {
        to_rational(&self.image).left_mul(x)
    }

    pub fn compose(&self, outer: &Embedding) -> Embedding {
        Embedding {
            source: self.source.clone(),
            target: outer.target.clone(),
            image: self.image.matmul(&outer.image),
        }
    }

    pub fn is_primitive(&self) -> bool {
        rows_primitive(&self.image)
    }

    /// The primitive sublattice of the target orthogonal to the image.
    pub fn orthogonal_complement(&self, name: &str) -> Embedding {
        let m = self.target.gram().matmul(&self.image.transpose());
        let k = integer_left_kernel(&m);
        let k = crate::enumerate::lll_rows(&k, self.target.gram());
        let gram = k.matmul(self.target.gram()).matmul(&k.transpose());
        let source = Lattice::new(name, gram).expect("complement of a nondegenerate sublattice is nondegenerate");
        Embedding {
            source,
            target: self.target.clone(),
            image: k,
        }
    }

    /// `pr_S(v)`: the vector of `S ⊗ ℚ` pairing with `S` like `v` does.
    pub fn project_to_dual(&self, v: &[Rational]) -> QVector {
        let f = self.target.functional(v);
        let rhs = to_rational(&self.image).right_mul(&f);
        solve_left_square(self.source.gram_q(), &rhs).expect("source Gram is invertible")
    }

    /// Preimage of a target vector lying in `S ⊗ ℚ`, or `None` if it does not.
    pub fn preimage(&self, v: &[Rational]) -> Option<QVector> {
        let p = self.project_to_dual(v);
        (self.map(&p) == v).then_some(p)
    }
}

pub fn qvec_to_string(v: &[Rational]) -> String {
    format!("({})", v.iter().map(fmt_rational).collect::<Vec<_>>().join(", "))
}

pub fn qvec_from_strs(v: &[&str]) -> QVector {
    v.iter().map(|s| parse_rational(s).expect("valid rational")).collect()
}

pub fn int_vec(v: &[i64]) -> QVector {
    vec_to_rational(&v.iter().map(|&x| Int::from(x)).collect::<Vec<_>>())
}

/// `⟨x, y⟩` for a functional `f = x·G` already computed.
pub fn pair_with_functional(f: &[Rational], y: &[Rational]) -> Rational {
    dot(f, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat, rat_int};

    fn u_plane() -> Lattice {
        Lattice::from_i64("U", &[vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn signatures() {
        assert_eq!(u_plane().signature(), (1, 1));
        let a2 = Lattice::from_i64("A2", &[vec![-2, 1], vec![1, -2]]).unwrap();
        assert_eq!(a2.signature(), (0, 2));
        let h = Lattice::from_i64("H", &[vec![0, 0, 1], vec![0, -2, 0], vec![1, 0, 0]]).unwrap();
        assert_eq!(h.signature(), (1, 2));
    }

    #[test]
    fn discriminant_groups() {
        assert!(u_plane().discriminant_group().factors.is_empty());
        let a1 = Lattice::from_i64("A1", &[vec![-2]]).unwrap();
        let d = a1.discriminant_group();
        assert_eq!(d.factors, vec![int(2)]);
        assert_eq!(d.q[0][0], rat(3, 2));
        let a2 = Lattice::from_i64("A2", &[vec![-2, 1], vec![1, -2]]).unwrap();
        let d = a2.discriminant_group();
        assert_eq!(d.order(), int(3));
        assert_eq!(d.q[0][0], rat(4, 3));
    }

    #[test]
    fn reflections() {
        let u = u_plane();
        let s = u.reflection(&int_vec(&[1, -1])).unwrap();
        assert_eq!(s.apply(&int_vec(&[1, 0])), int_vec(&[0, 1]));
        assert!(s.then(&s).is_identity());
        assert!(u.is_isometry(&s));
        let l = Lattice::from_i64("L", &[vec![-4, 0], vec![0, 2]]).unwrap();
        assert!(l.reflection(&int_vec(&[0, 1])).is_ok());
        let l = Lattice::from_i64("L", &[vec![-4, 1], vec![1, 2]]).unwrap();
        assert!(matches!(l.reflection(&int_vec(&[1, 0])), Err(LatticeError::NotIsometry)));
    }

    #[test]
    fn embeddings() {
        let u = u_plane();
        let a1 = Lattice::from_i64("A1", &[vec![-2]]).unwrap();
        let e = Embedding::new(a1, u.clone(), ZMatrix::from_rows(&[vec![int(1), int(-1)]])).unwrap();
        assert!(e.is_primitive());
        let c = e.orthogonal_complement("C");
        assert_eq!(c.source.gram()[(0, 0)], int(2));
        assert_eq!(e.project_to_dual(&int_vec(&[1, 0])), vec![rat(1, 2)]);
        assert!(Embedding::identity(&u).is_primitive());
        let v = e.map(&[rat_int(3)]);
        assert_eq!(e.preimage(&v), Some(vec![rat_int(3)]));
    }

    #[test]
    fn omega_membership() {
        let a1 = Lattice::from_i64("A1", &[vec![-2]]).unwrap();
        let t = a1.omega_test();
        assert!(t.contains(&Isometry::new(ZMatrix::from_rows(&[vec![int(-1)]]))));
        let a2 = Lattice::from_i64("A2", &[vec![-2, 1], vec![1, -2]]).unwrap();
        let swap = Isometry::new(ZMatrix::from_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]]));
        assert!(a2.is_isometry(&swap));
        assert_eq!(a2.omega_test().discriminant_sign(&swap), Some(-1));
    }

    #[test]
    fn file_round_trip() {
        let u = u_plane();
        let f = u.to_file();
        let back = Lattice::from_file("U", &serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap()).unwrap();
        assert_eq!(back, u);
        let g = Isometry::new(ZMatrix::from_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]]));
        let json = serde_json::to_string(&g.to_file("U")).unwrap();
        assert!(json.contains("\"1\""));
        assert_eq!(Isometry::from_file(&serde_json::from_str(&json).unwrap()).unwrap(), g);
    }
}
