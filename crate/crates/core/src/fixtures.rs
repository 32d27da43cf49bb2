//! The embedded Picard lattices of the Kummer surface (rank 17) and of the
//! 15-nodal quartic (rank 16), with their named classes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exactalg::matrix::{to_rational, vec_add, vec_scale, vec_sub, vec_to_integer, vec_to_rational};
use crate::exactalg::snf::hermite_normal_form;
use crate::exactalg::{rat, rat_int, Int, Rational, ZMatrix};
use crate::k3::combinat::{all_double_trios, all_duads, DoubleTrio, Duad, Trio};
use crate::lattice::{Embedding, Lattice, LatticeError, QVector};
use crate::leech::{standard, Unimodular26, INF};
use crate::roots::{root_system_type, RootType};

/// The five points of each octad beyond `{∞, 0, 1}` (N) or `{∞, 0, 2}` (T).
pub const OCTADS: [(&str, [u8; 5]); 32] = [
    ("N0", [7, 12, 13, 14, 20]),
    ("N12", [13, 15, 17, 18, 19]),
    ("N13", [6, 11, 14, 15, 16]),
    ("N14", [5, 10, 12, 16, 19]),
    ("N15", [7, 10, 11, 17, 22]),
    ("N16", [5, 6, 18, 20, 22]),
    ("N23", [8, 16, 17, 20, 21]),
    ("N24", [3, 7, 9, 16, 18]),
    ("N25", [8, 9, 14, 19, 22]),
    ("N26", [3, 12, 15, 21, 22]),
    ("N34", [5, 9, 11, 13, 21]),
    ("N35", [4, 6, 9, 12, 17]),
    ("N36", [4, 5, 7, 8, 15]),
    ("N45", [3, 4, 11, 19, 20]),
    ("N46", [4, 10, 14, 18, 21]),
    ("N56", [3, 6, 8, 10, 13]),
    ("T1", [3, 4, 8, 9, 21]),
    ("T2", [4, 5, 6, 10, 11]),
    ("T3", [3, 10, 18, 19, 22]),
    ("T4", [6, 8, 15, 17, 22]),
    ("T5", [5, 15, 16, 18, 21]),
    ("T6", [9, 11, 16, 17, 19]),
    ("T12", [7, 8, 10, 14, 16]),
    ("T13", [10, 12, 13, 17, 21]),
    ("T14", [3, 7, 11, 13, 15]),
    ("T15", [4, 12, 14, 15, 19]),
    ("T23", [6, 9, 13, 14, 18]),
    ("T24", [5, 8, 13, 19, 20]),
    ("T25", [4, 7, 17, 18, 20]),
    ("T34", [3, 6, 12, 16, 20]),
    ("T35", [11, 14, 20, 21, 22]),
    ("T45", [5, 7, 9, 12, 22]),
];

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("{0} is not an octad")]
    NotOctad(String),
    #[error("lattice error: {0}")]
    Lattice(#[from] LatticeError),
    #[error("fixture check failed: {0}")]
    Check(String),
}

fn check(ok: bool, what: impl Into<String>) -> Result<(), FixtureError> {
    if ok {
        Ok(())
    } else {
        Err(FixtureError::Check(what.into()))
    }
}

/// An embedded hyperbolic lattice with its complement, interior point and named classes.
#[derive(Clone, Debug)]
pub struct K3Bundle {
    pub name: String,
    pub s: Lattice,
    /// `S ↪ II_{1,25}`.
    pub embedding: Embedding,
    /// `R ↪ II_{1,25}`, the orthogonal complement.
    pub complement: Embedding,
    /// `pr_S(w₀)`, interior to the chamber induced by `w₀`.
    pub alpha: QVector,
    pub classes: BTreeMap<String, QVector>,
    /// `S ↪ S₁₆` for the quartic fixture.
    pub parent: Option<Embedding>,
}

impl K3Bundle {
    pub fn class(&self, name: &str) -> &QVector {
        self.classes.get(name).unwrap_or_else(|| panic!("no class named {name}"))
    }

    pub fn ambient(&self) -> &'static Unimodular26 {
        standard()
    }

    pub fn rank(&self) -> usize {
        self.s.rank()
    }

    /// `E_δ` (quartic fixture).
    pub fn e(&self, d: Duad) -> &QVector {
        self.class(&format!("E{}{}", d.0, d.1))
    }

    /// `σ(E_θ)` (quartic fixture).
    pub fn trope(&self, t: DoubleTrio) -> &QVector {
        self.class(&format!("sE{}", t.0))
    }

    pub fn complement_roots(&self) -> Vec<QVector> {
        crate::enumerate::enum_negdef(&self.complement.source, &rat_int(-2)).expect("complement is negative definite")
    }
}

fn octad_mask(rest: &[u8; 5], third: usize) -> u32 {
    let mut m = 1u32 << INF | 1 | 1 << third;
    for &x in rest {
        m |= 1 << x;
    }
    m
}

fn lattice_from_rows(name: &str, rows: &ZMatrix, ambient: &Lattice) -> Result<Lattice, LatticeError> {
    let gram = rows.matmul(ambient.gram()).matmul(&rows.transpose());
    let labels = (0..rows.nrows()).map(|i| format!("b{i}")).collect();
    Ok(Lattice::new(name, gram)?.with_labels(labels))
}

fn integral(v: &QVector) -> bool {
    vec_to_integer(v).is_some()
}

/// `ε₁₆: S₁₆ ↪ II_{1,25}` spanned by the 32 octad roots.
pub fn build_s16() -> Result<K3Bundle, FixtureError> {
    let u = standard();
    let golay = &u.leech.golay;
    let mut roots = Vec::new();
    for (name, rest) in OCTADS {
        let third = if name.starts_with('N') { 1 } else { 2 };
        let m = octad_mask(&rest, third);
        if !golay.is_octad(m) {
            return Err(FixtureError::NotOctad(name.to_string()));
        }
        let mut r = vec![Int::one(), Int::one()];
        r.extend(u.leech.octad_vector(m));
        roots.push((name, r));
    }
    let rows: Vec<Vec<Int>> = roots.iter().map(|(_, r)| r.clone()).collect();
    let basis = hermite_normal_form(&ZMatrix::from_rows(&rows));
    check(basis.nrows() == 17, format!("S16 rank {}", basis.nrows()))?;
    let s = lattice_from_rows("S16", &basis, &u.lattice)?;
    let embedding = Embedding::new(s.clone(), u.lattice.clone(), basis)?;
    check(embedding.is_primitive(), "S16 embedding primitive")?;
    check(s.signature() == (1, 16), "S16 hyperbolic")?;

    let mut classes = BTreeMap::new();
    for (name, r) in &roots {
        let c = embedding
            .preimage(&vec_to_rational(r))
            .ok_or_else(|| FixtureError::Check(format!("{name} not in S16")))?;
        classes.insert(name.to_string(), c);
    }
    let n = |k: &str| classes[k].clone();
    let mut h4 = vec_scale(&rat_int(2), &n("T1"));
    for k in ["N0", "N12", "N13", "N14", "N15", "N16"] {
        h4 = vec_add(&h4, &n(k));
    }
    check(s.norm(&h4) == rat_int(4), "h4^2 = 4")?;
    for (name, _) in OCTADS {
        let want = if name.starts_with('N') { 0 } else { 2 };
        check(s.pair(&h4, &n(name)) == rat_int(want), format!("<h4,{name}>"))?;
    }
    let mut h4d = vec_scale(&rat_int(3), &h4);
    for (name, _) in OCTADS.iter().filter(|(k, _)| k.starts_with('N')) {
        h4d = vec_sub(&h4d, &n(name));
    }
    check(s.norm(&h4d) == rat_int(4), "h4'^2 = 4")?;
    classes.insert("h4".into(), h4);
    classes.insert("h4'".into(), h4d);
    let alpha = embedding.project_to_dual(&u.w0());
    check(s.norm(&alpha) == rat_int(8) && integral(&alpha), "alpha16 integral of norm 8")?;
    classes.insert("alpha16".into(), alpha.clone());

    let complement = embedding.orthogonal_complement("R16");
    check(
        complement.source.rank() == 9 && complement.source.is_negative_definite(),
        "R16 negative definite of rank 9",
    )?;
    Ok(K3Bundle {
        name: "S16".into(),
        s,
        embedding,
        complement,
        alpha,
        classes,
        parent: None,
    })
}

/// The double trio `(ij6)(klm)` indexing the trope `σ(E_ij)`, `i<j≤5`.
pub fn trope_duad(t: DoubleTrio) -> Duad {
    let tr = t.trios().into_iter().find(|x| x.0.contains(&6)).expect("one trio contains 6");
    Duad::new(tr.0[0], tr.0[1])
}

/// `ε₁₅,₁₆: S₁₅ ↪ S₁₆`, realised as `(ℤN₀)⊥`.
pub fn build_s15(s16: &K3Bundle) -> Result<K3Bundle, FixtureError> {
    let u = standard();
    let p = &s16.s;
    let n = |k: &str| s16.class(k).clone();
    let mut gens: Vec<(String, QVector)> = Vec::new();
    for d in all_duads() {
        gens.push((format!("E{}{}", d.0, d.1), n(&format!("N{}{}", d.0, d.1))));
    }
    for t in all_double_trios() {
        let d = trope_duad(t);
        gens.push((format!("sE{}", t.0), n(&format!("T{}{}", d.0, d.1))));
    }
    let rows: Vec<Vec<Int>> = gens.iter().map(|(_, v)| vec_to_integer(v).expect("octad classes are integral")).collect();
    let basis = hermite_normal_form(&ZMatrix::from_rows(&rows));
    check(basis.nrows() == 16, format!("S15 rank {}", basis.nrows()))?;
    let s = lattice_from_rows("S15", &basis, p)?;
    let parent = Embedding::new(s.clone(), p.clone(), basis)?;
    check(parent.is_primitive(), "S15 embedding primitive")?;

    let n0 = vec_to_integer(&n("N0")).expect("integral");
    let perp = Embedding::new(Lattice::from_i64("N0", &[vec![-2]])?, p.clone(), ZMatrix::from_rows(&[n0]))?.orthogonal_complement("N0perp");
    check(
        hermite_normal_form(&perp.image) == hermite_normal_form(&parent.image),
        "S15 equals the orthogonal complement of N0",
    )?;

    let embedding = parent.compose(&s16.embedding);
    let mut classes = BTreeMap::new();
    let pre = |v: &QVector| parent.preimage(v).expect("class lies in S15");
    for (name, v) in &gens {
        classes.insert(name.clone(), pre(v));
    }
    let h4 = pre(s16.class("h4"));
    for i in 1..=5u8 {
        let v = vec_add(&vec_add(&n(&format!("T{i}")), &n("N0")), &n("T6"));
        check(parent.preimage(&v).is_some(), format!("sigma(E{i}6) in S15"))?;
        classes.insert(format!("sE{i}6"), pre(&v));
    }
    let e = |d: Duad| classes[&format!("E{}{}", d.0, d.1)].clone();
    let mut h6 = vec_scale(&rat_int(3), &h4);
    for d in all_duads() {
        h6 = vec_sub(&h6, &e(d));
    }
    check(s.norm(&h6) == rat_int(6), "h6^2 = 6")?;
    let mut back = vec_scale(&rat_int(2), &h6);
    for t in all_double_trios() {
        back = vec_sub(&back, &classes[&format!("sE{}", t.0)]);
    }
    check(back == h4, "h4 = 2h6 - sum of tropes")?;
    for t in all_double_trios() {
        let mut v = h4.clone();
        for tr in t.trios() {
            let [a, b, c] = tr.0;
            for d in [Duad::new(a, b), Duad::new(b, c), Duad::new(a, c)] {
                v = vec_sub(&v, &e(d));
            }
        }
        let half = vec_scale(&rat(1, 2), &v);
        check(half == classes[&format!("sE{}", t.0)], format!("trope relation for {t}"))?;
        for d in all_duads() {
            let want = if t.splits_not(d) { 1 } else { 0 };
            check(s.pair(&classes[&format!("sE{}", t.0)], &e(d)) == rat_int(want), format!("<sE{t}, E{d}>"))?;
        }
    }
    classes.insert("h4".into(), h4);
    classes.insert("h6".into(), h6);
    let alpha = embedding.project_to_dual(&u.w0());
    let expected = parent.map(&alpha);
    let want = vec_add(s16.class("alpha16"), &vec_scale(&rat(1, 2), &n("N0")));
    check(expected == want, "alpha15 = alpha16 + N0/2")?;
    check(s.norm(&alpha) == rat(17, 2), "alpha15^2 = 17/2")?;
    classes.insert("alpha15".into(), alpha.clone());

    let complement = embedding.orthogonal_complement("R15");
    check(
        complement.source.rank() == 10 && complement.source.is_negative_definite(),
        "R15 negative definite of rank 10",
    )?;
    Ok(K3Bundle {
        name: "S15".into(),
        s,
        embedding,
        complement,
        alpha,
        classes,
        parent: Some(parent),
    })
}

pub fn complement_root_type(b: &K3Bundle) -> RootType {
    root_system_type(&b.complement.source, &b.complement_roots()).expect("complement roots form an ADE system")
}

/// `Σ x` over a list of classes.
pub fn sum(vs: &[&QVector]) -> QVector {
    let n = vs.first().map_or(0, |v| v.len());
    vs.iter().fold(vec![Rational::zero(); n], |acc, v| vec_add(&acc, v))
}

/// The trio of a double trio containing both points of a duad, if any.
pub fn trio_of(t: DoubleTrio, d: Duad) -> Option<Trio> {
    t.trios().into_iter().find(|x| x.contains_duad(d))
}

pub fn to_rational_rows(m: &ZMatrix) -> Vec<QVector> {
    to_rational(m).to_rows()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s16_octads_pair_by_intersection() {
        let b = build_s16().unwrap();
        assert_eq!(b.s.pair(b.class("N0"), b.class("T1")), rat_int(1));
        assert_eq!(b.s.pair(b.class("N0"), b.class("N12")), rat_int(0));
        assert_eq!(b.s.discriminant_group().describe(), "(Z/2)^4+(Z/4)");
        assert_eq!(complement_root_type(&b).to_string(), "6A1+A3");
    }

    #[test]
    fn s15_from_s16() {
        let b16 = build_s16().unwrap();
        let b = build_s15(&b16).unwrap();
        assert_eq!(b.s.signature(), (1, 15));
        assert_eq!(b.s.discriminant_group().describe(), "(Z/2)^5+(Z/4)");
        assert_eq!(complement_root_type(&b).to_string(), "7A1+A3");
    }
}
