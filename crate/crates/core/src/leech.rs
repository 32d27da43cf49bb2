//! The Golay code on `Ω = P¹(F₂₃)`, the Leech lattice and `II_{1,25} = U ⊕ Λ`.

use crate::enumerate::{enum_negdef, DefiniteEnumerator};
use crate::exactalg::matrix::{to_rational, vec_to_integer, vec_to_rational};
use crate::exactalg::rational::rat_int;
use crate::exactalg::snf::{hermite_normal_form, rows_primitive, smith_normal_form, solve_integer_left};
use crate::exactalg::{Int, QMatrix, Rational, ZMatrix};
use crate::lattice::{Lattice, QVector};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::sync::OnceLock;

/// Bit position of `∞`; the points `0 … 22` of `F₂₃` use their own positions.
pub const INF: usize = 23;

#[derive(Debug, thiserror::Error)]
pub enum LeechError {
    #[error("Golay code self-check failed: {0}")]
    Golay(String),
    #[error("Leech lattice self-check failed: {0}")]
    Leech(String),
    #[error("cannot parse octad {0:?}")]
    Parse(String),
    #[error("{0:?} is not an octad of the Golay code")]
    NotOctad(String),
}

#[derive(Clone, Debug)]
pub struct GolayCode {
    pub words: Vec<u32>,
    pub octads: Vec<u32>,
}

/// Extended quadratic-residue code: spanned by `{∞} ∪ (N + t)`, `N` the nonresidues mod 23.
pub fn build_golay() -> Result<GolayCode, LeechError> {
    let residues: Vec<u32> = (1..23u32).map(|x| (x * x) % 23).collect();
    let nonres: Vec<u32> = (1..23).filter(|x| !residues.contains(x)).collect();
    let mut basis: Vec<u32> = Vec::new();
    for t in 0..23 {
        let mut w = 1u32 << INF;
        for &n in &nonres {
            w |= 1 << ((n + t) % 23);
        }
        let mut v = w;
        for &b in &basis {
            let hb = 31 - b.leading_zeros();
            if v >> hb & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            let hb = 31 - v.leading_zeros();
            for b in basis.iter_mut() {
                if *b >> hb & 1 == 1 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
    }
    if basis.len() != 12 {
        return Err(LeechError::Golay(format!("dimension {}", basis.len())));
    }
    let mut words = vec![0u32];
    for b in &basis {
        let more: Vec<u32> = words.iter().map(|w| w ^ b).collect();
        words.extend(more);
    }
    words.sort();
    let mut enumerator = [0usize; 25];
    for w in &words {
        enumerator[w.count_ones() as usize] += 1;
    }
    let expected = [(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)];
    for (wt, c) in expected {
        if enumerator[wt] != c {
            return Err(LeechError::Golay(format!("weight {wt} has {} words", enumerator[wt])));
        }
    }
    let octads = words.iter().copied().filter(|w| w.count_ones() == 8).collect();
    Ok(GolayCode { words, octads })
}

impl GolayCode {
    pub fn contains(&self, w: u32) -> bool {
        self.words.binary_search(&w).is_ok()
    }

    pub fn is_octad(&self, w: u32) -> bool {
        w.count_ones() == 8 && self.contains(w)
    }
}

pub fn point_name(p: usize) -> String {
    if p == INF {
        "∞".to_string()
    } else {
        p.to_string()
    }
}

/// Points of a subset of `Ω` in display order (`∞` first).
pub fn subset_points(w: u32) -> Vec<usize> {
    let mut pts: Vec<usize> = Vec::new();
    if w >> INF & 1 == 1 {
        pts.push(INF);
    }
    pts.extend((0..23).filter(|&i| w >> i & 1 == 1));
    pts
}

/// Formats like `{∞, 0, 1, 7, 12, 13, 14, 20}`.
pub fn format_octad(w: u32) -> String {
    let pts: Vec<String> = subset_points(w).into_iter().map(point_name).collect();
    format!("{{{}}}", pts.join(", "))
}

pub fn parse_subset(s: &str) -> Result<u32, LeechError> {
    let err = || LeechError::Parse(s.to_string());
    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
    let mut w = 0u32;
    for tok in inner.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let p = match tok {
            "∞" | "inf" | "\\infty" => INF,
            _ => tok.parse::<usize>().map_err(|_| err())?,
        };
        if p > 23 || w >> p & 1 == 1 {
            return Err(err());
        }
        w |= 1 << p;
    }
    Ok(w)
}

pub fn parse_octad(code: &GolayCode, s: &str) -> Result<u32, LeechError> {
    let w = parse_subset(s)?;
    if code.is_octad(w) {
        Ok(w)
    } else {
        Err(LeechError::NotOctad(s.to_string()))
    }
}

/// `ν_Σ` as a vector of `ℤ^Ω` (position `INF` for `∞`).
pub fn nu(w: u32) -> Vec<Int> {
    (0..24).map(|i| Int::from((w >> i) & 1)).collect()
}

/// The negative-definite Leech lattice with a basis drawn from its standard generators.
#[derive(Clone, Debug)]
pub struct Leech {
    pub golay: GolayCode,
    /// Basis rows in `ℤ^Ω` coordinates.
    pub basis: ZMatrix,
    pub lattice: Lattice,
    basis_inv: QMatrix,
}

fn omega_form(x: &[Int], y: &[Int]) -> Rational {
    let s: Int = x.iter().zip(y).map(|(a, b)| a * b).sum();
    Rational::new(-s, Int::from(8))
}

pub fn build_leech(golay: GolayCode) -> Result<Leech, LeechError> {
    let mut gens: Vec<Vec<Int>> = Vec::new();
    let mut first = vec![Int::one(); 24];
    first[INF] = Int::from(-3);
    gens.push(first);
    for &o in &golay.octads {
        gens.push(nu(o).into_iter().map(|x| x * 2).collect());
    }
    let span = hermite_normal_form(&ZMatrix::from_rows(&gens));
    if span.nrows() != 24 {
        return Err(LeechError::Leech(format!("generators span rank {}", span.nrows())));
    }
    // Greedy choice among the generators, keeping the chosen rows primitive in Λ.
    let span_q = to_rational(&span);
    let span_inv = span_q.inverse().expect("full rank");
    let coords = |v: &[Int]| -> Vec<Int> { vec_to_integer(&span_inv.left_mul(&vec_to_rational(v))).expect("generator lies in the span") };
    let mut chosen: Vec<Vec<Int>> = Vec::new();
    let mut chosen_coords: Vec<Vec<Int>> = Vec::new();
    for g in &gens {
        if chosen.len() == 24 {
            break;
        }
        let c = coords(g);
        let mut trial = chosen_coords.clone();
        trial.push(c);
        let m = ZMatrix::from_rows(&trial);
        let s = smith_normal_form(&m);
        if s.rank() == trial.len() && rows_primitive(&m) {
            chosen.push(g.clone());
            chosen_coords = trial;
        }
    }
    let basis = if chosen.len() == 24 { ZMatrix::from_rows(&chosen) } else { span };
    let n = 24;
    let mut gram = ZMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = omega_form(basis.row(i), basis.row(j));
            if !v.is_integer() {
                return Err(LeechError::Leech("non-integral pairing".into()));
            }
            gram[(i, j)] = v.to_integer();
        }
    }
    let lattice = Lattice::new("Leech", gram).map_err(|e| LeechError::Leech(e.to_string()))?;
    if !lattice.is_even() {
        return Err(LeechError::Leech("not even".into()));
    }
    if !lattice.det().abs().is_one() {
        return Err(LeechError::Leech(format!("determinant {}", lattice.det())));
    }
    if lattice.signature() != (0, 24) {
        return Err(LeechError::Leech("not negative definite".into()));
    }
    let basis_inv = to_rational(&basis).inverse().expect("basis is invertible");
    let leech = Leech {
        golay,
        basis,
        lattice,
        basis_inv,
    };
    if !leech.roots().is_empty() {
        return Err(LeechError::Leech("contains (-2)-vectors".into()));
    }
    Ok(leech)
}

impl Leech {
    /// Basis coordinates of a `ℤ^Ω` vector, or `None` if it is not in `Λ`.
    pub fn coords(&self, v: &[Int]) -> Option<Vec<Int>> {
        vec_to_integer(&self.basis_inv.left_mul(&vec_to_rational(v)))
    }

    pub fn coords_q(&self, v: &[Rational]) -> QVector {
        self.basis_inv.left_mul(v)
    }

    pub fn to_omega(&self, c: &[Int]) -> Vec<Int> {
        self.basis.left_mul(c)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coords(v).is_some()
    }

    pub fn roots(&self) -> Vec<QVector> {
        enum_negdef(&self.lattice, &rat_int(-2)).expect("negative definite")
    }

    /// Fincke–Pohst data for the positive form `−Gram`, built once.
    pub fn enumerator(&self) -> &DefiniteEnumerator {
        static CACHE: OnceLock<DefiniteEnumerator> = OnceLock::new();
        CACHE.get_or_init(|| DefiniteEnumerator::new(&(-self.lattice.gram_q())).expect("definite"))
    }

    pub fn octad_vector(&self, octad: u32) -> Vec<Int> {
        let v: Vec<Int> = nu(octad).into_iter().map(|x| x * 2).collect();
        self.coords(&v).expect("2ν_K lies in Λ")
    }
}

/// `II_{1,25} = U ⊕ Λ` in coordinates `(a, b, λ)` with `λ` in the Leech basis.
#[derive(Clone, Debug)]
pub struct Unimodular26 {
    pub leech: Leech,
    pub lattice: Lattice,
}

pub fn build_ii_1_25(leech: Leech) -> Unimodular26 {
    let mut gram = ZMatrix::zeros(26, 26);
    gram[(0, 1)] = Int::one();
    gram[(1, 0)] = Int::one();
    for i in 0..24 {
        for j in 0..24 {
            gram[(i + 2, j + 2)] = leech.lattice.gram()[(i, j)].clone();
        }
    }
    let mut labels = vec!["a".to_string(), "b".to_string()];
    labels.extend((0..24).map(|i| format!("l{i}")));
    let lattice = Lattice::new("II_1_25", gram).expect("nondegenerate").with_labels(labels);
    Unimodular26 { leech, lattice }
}

/// The shared Golay code, Leech lattice and `II_{1,25}`.
pub fn standard() -> &'static Unimodular26 {
    static CELL: OnceLock<Unimodular26> = OnceLock::new();
    CELL.get_or_init(|| {
        let golay = build_golay().expect("Golay construction");
        build_ii_1_25(build_leech(golay).expect("Leech construction"))
    })
}

impl Unimodular26 {
    pub fn w0(&self) -> QVector {
        let mut w = vec![Rational::zero(); 26];
        w[0] = Rational::one();
        w
    }

    /// `r₀(λ) = (−1 − ⟨λ,λ⟩/2, 1, λ)` for `λ` in Leech-basis coordinates.
    pub fn leech_root(&self, lambda: &[Rational]) -> QVector {
        let n = self.leech.lattice.norm(lambda);
        let mut r = vec![-Rational::one() - n / rat_int(2), Rational::one()];
        r.extend(lambda.iter().cloned());
        r
    }

    pub fn is_weyl(&self, w: &[Rational]) -> bool {
        let Some(wi) = vec_to_integer(w) else { return false };
        let g = wi.iter().fold(Int::zero(), |a, x| a.gcd(x));
        if !g.is_one() {
            return false;
        }
        let l = &self.lattice;
        if !l.norm(w).is_zero() {
            return false;
        }
        let mut interior = vec![Rational::zero(); 26];
        interior[0] = Rational::one();
        interior[1] = Rational::one();
        if !l.pair(w, &interior).is_positive() {
            return false;
        }
        let col = ZMatrix::from_vec(26, 1, l.gram().right_mul(&wi));
        let kern = crate::exactalg::snf::integer_left_kernel(&col);
        let Some((c, _)) = solve_integer_left(&kern, &wi) else { return false };
        let row = ZMatrix::from_vec(1, c.len(), c);
        let s = smith_normal_form(&row);
        let winv = to_rational(&s.v).inverse().expect("unimodular");
        let wmat = crate::exactalg::matrix::to_integer(&winv).expect("unimodular");
        let full = wmat.matmul(&kern);
        let rest = full.select_rows(&(1..25).collect::<Vec<_>>());
        let gram = rest.matmul(l.gram()).matmul(&rest.transpose());
        let Ok(q) = Lattice::new("quotient", gram) else { return false };
        q.rank() == 24
            && q.is_even()
            && q.det().abs().is_one()
            && q.signature() == (0, 24)
            && enum_negdef(&q, &rat_int(-2)).map(|v| v.is_empty()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golay_structure() {
        let g = build_golay().unwrap();
        assert_eq!(g.words.len(), 4096);
        assert_eq!(g.octads.len(), 759);
        assert!(g.contains(0));
        let a = g.octads[0];
        let b = *g.octads.iter().find(|&&o| (o & a).count_ones() == 4).unwrap();
        assert!(g.is_octad(a ^ b));
    }

    #[test]
    fn octad_text_round_trip() {
        let g = build_golay().unwrap();
        let s = "{∞, 0, 1, 7, 12, 13, 14, 20}";
        let w = parse_octad(&g, s).unwrap();
        assert_eq!(format_octad(w), s);
        assert!(parse_octad(&g, "{∞, 0, 1, 2, 3, 4, 5, 6}").is_err());
        assert!(parse_subset("{0, 0}").is_err());
    }

    #[test]
    fn leech_basics() {
        let ii = standard();
        let l = &ii.leech.lattice;
        assert!(l.det().abs().is_one());
        let k = ii.leech.golay.octads[5];
        let v = vec_to_rational(&ii.leech.octad_vector(k));
        assert_eq!(l.norm(&v), rat_int(-4));
        let r = ii.leech_root(&v);
        assert_eq!(ii.lattice.norm(&r), rat_int(-2));
        assert_eq!(ii.lattice.pair(&r, &ii.w0()), rat_int(1));
        let zero = vec![Rational::zero(); 24];
        let r0 = ii.leech_root(&zero);
        assert_eq!(&r0[..2], &[rat_int(-1), rat_int(1)]);
        let k2 = *ii.leech.golay.octads.iter().find(|&&o| (o & k).count_ones() == 2).unwrap();
        let r2 = ii.leech_root(&vec_to_rational(&ii.leech.octad_vector(k2)));
        assert_eq!(ii.lattice.pair(&r, &r2), rat_int(1));
    }

    #[test]
    fn weyl_vectors() {
        let ii = standard();
        assert!(ii.is_weyl(&ii.w0()));
        let mut bad = vec![Rational::zero(); 26];
        bad[2] = Rational::one();
        assert!(!ii.is_weyl(&bad));
        let r = ii.leech_root(&vec![Rational::zero(); 24]);
        let s = ii.lattice.reflection(&r).unwrap();
        assert!(ii.is_weyl(&s.apply(&ii.w0())));
    }
}
