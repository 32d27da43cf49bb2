//! Geometric algorithms on K3 Picard lattices and the named involutions of the
//! 15-nodal quartic.

pub mod combinat;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::enumerate::{enum_separating, Coset, EnumError, HyperbolicSlicer};
use crate::exactalg::matrix::{to_integer, vec_add, vec_scale, vec_sub, vec_to_integer};
use crate::exactalg::snf::rational_left_kernel;
use crate::exactalg::{rat_int, QMatrix, Rational};
use crate::fixtures::K3Bundle;
use crate::lattice::{Isometry, Lattice, LatticeError, QVector};
use crate::roots::{ade_type, simple_roots, Ade, RootError, RootType};

use combinat::{DoubleTrio, Duad, GeneratorTag, Trio};

#[derive(Debug, thiserror::Error)]
pub enum K3Error {
    #[error("class is outside the positive cone")]
    NotPositive,
    #[error("class is not nef")]
    NotNef,
    #[error("class does not have square norm 2")]
    NotDegreeTwo,
    #[error("linear system has a fixed component")]
    FixedComponent,
    #[error("double-plane action is not integral")]
    NotIntegral,
    #[error("double-plane action is not an involutive isometry")]
    NotInvolution,
    #[error("root configuration: {0}")]
    Roots(#[from] RootError),
    #[error("lattice: {0}")]
    Lattice(#[from] LatticeError),
    #[error("enumeration: {0}")]
    Enum(#[from] EnumError),
    #[error("cannot construct {0}: {1}")]
    Generator(String, String),
}

fn in_positive_cone(b: &K3Bundle, v: &[Rational]) -> bool {
    b.s.norm(v).is_positive() && b.s.pair(v, &b.alpha).is_positive()
}

/// Nef test: no (−2)-vector separates `α` from `v`.
pub fn is_nef(b: &K3Bundle, v: &[Rational]) -> Result<bool, K3Error> {
    if !in_positive_cone(b, v) {
        return Err(K3Error::NotPositive);
    }
    Ok(enum_separating(&b.s, &b.alpha, v, &rat_int(-2))?.is_empty())
}

/// `|h₂|` is free of fixed components iff no isotropic `v` has `⟨v,h₂⟩ = 1`.
pub fn fixed_component_free(b: &K3Bundle, h2: &[Rational]) -> Result<bool, K3Error> {
    let slicer = HyperbolicSlicer::new(&b.s, Coset::lattice(b.rank()), h2)?;
    Ok(slicer.slice(&Rational::zero(), &Rational::one()).is_empty())
}

/// Classes of smooth rational curves by `α`-degree, for all achievable
/// degrees up to `dmax`.
pub fn rational_curves_up_to(b: &K3Bundle, dmax: &Rational) -> Result<BTreeMap<Rational, Vec<QVector>>, K3Error> {
    let l = &b.s;
    let slicer = HyperbolicSlicer::new(l, Coset::lattice(l.rank()), &b.alpha)?;
    let (step, base) = slicer.pairing_lattice();
    let mut d = &base - &step * Rational::from_integer(crate::exactalg::rational::floor_int(&(&base / &step)));
    if d.is_zero() {
        d = step.clone();
    }
    let mut out: BTreeMap<Rational, Vec<QVector>> = BTreeMap::new();
    let mut found: Vec<Vec<i64>> = Vec::new();
    while &d <= dmax {
        let mut curves = Vec::new();
        // Functionals that reject a candidate drift to the front of `found`.
        let mut keep = |ri: &[i64]| match found.iter().position(|f| f.iter().zip(ri).map(|(a, b)| a * b).sum::<i64>() < 0) {
            Some(i) => {
                found.swap(i, i / 2);
                false
            }
            None => true,
        };
        let fast = slicer.slice_int(&rat_int(-2), &d, |ri| {
            if keep(ri) {
                curves.push(ri.iter().map(|&x| rat_int(x)).collect::<QVector>());
            }
        });
        if !fast {
            slicer.slice_with(&rat_int(-2), &d, crate::enumerate::Bound::Eq, |r| {
                let ri: Vec<i64> = vec_to_integer(&r)
                    .expect("lattice vector")
                    .iter()
                    .map(|x| i64::try_from(x).expect("coordinate fits in i64"))
                    .collect();
                if keep(&ri) {
                    curves.push(r);
                }
            });
        }
        curves.sort();
        for c in &curves {
            let f = vec_to_integer(&l.functional(c)).expect("integral");
            found.push(f.iter().map(|x| i64::try_from(x).expect("fits")).collect());
        }
        out.insert(d.clone(), curves);
        d += &step;
    }
    Ok(out)
}

/// `−w₀` on one connected ADE component, as a permutation of its simple roots
/// (given in chain order for `A`, with the branch node known for `D`/`E`).
fn minus_longest(l: &Lattice, comp: &[QVector], kind: Ade) -> Vec<usize> {
    let n = comp.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && !l.pair(&comp[i], &comp[j]).is_zero()).collect())
        .collect();
    match kind {
        Ade::A(_) if n > 1 => {
            let end = (0..n).find(|&i| adj[i].len() == 1).expect("chain has an end");
            let mut order = vec![end];
            while order.len() < n {
                let last = *order.last().expect("nonempty");
                let next = adj[last].iter().copied().find(|x| !order.contains(x)).expect("chain");
                order.push(next);
            }
            let mut perm = vec![0; n];
            for (k, &i) in order.iter().enumerate() {
                perm[i] = order[n - 1 - k];
            }
            perm
        }
        Ade::D(m) if m % 2 == 1 => {
            let center = (0..n).find(|&i| adj[i].len() == 3).expect("branch node");
            let leaves: Vec<usize> = adj[center].iter().copied().filter(|&x| adj[x].len() == 1).collect();
            let mut perm: Vec<usize> = (0..n).collect();
            if m == 5 || leaves.len() >= 2 {
                let short: Vec<usize> = if leaves.len() == 3 { leaves[..2].to_vec() } else { leaves.clone() };
                perm[short[0]] = short[1];
                perm[short[1]] = short[0];
            }
            perm
        }
        Ade::E(6) => {
            let center = (0..n).find(|&i| adj[i].len() == 3).expect("branch node");
            let arms: Vec<Vec<usize>> = adj[center]
                .iter()
                .map(|&s| {
                    let mut arm = vec![s];
                    let mut prev = center;
                    let mut cur = s;
                    while let Some(&nx) = adj[cur].iter().find(|&&x| x != prev) {
                        arm.push(nx);
                        prev = cur;
                        cur = nx;
                    }
                    arm
                })
                .collect();
            let long: Vec<&Vec<usize>> = arms.iter().filter(|a| a.len() == 2).collect();
            let mut perm: Vec<usize> = (0..n).collect();
            for k in 0..2 {
                perm[long[0][k]] = long[1][k];
                perm[long[1][k]] = long[0][k];
            }
            perm
        }
        _ => (0..n).collect(),
    }
}

/// Connected components of a set of simple roots.
fn components(l: &Lattice, simple: &[QVector]) -> Vec<Vec<usize>> {
    let n = simple.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            for t in 0..n {
                if !seen[t] && !l.pair(&simple[comp[k]], &simple[t]).is_zero() {
                    seen[t] = true;
                    comp.push(t);
                }
            }
            k += 1;
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// The involution of the double plane given by `|h₂|`, with the ADE type of
/// the contracted curves.
pub fn double_plane_involution(b: &K3Bundle, h2: &[Rational]) -> Result<(Isometry, RootType), K3Error> {
    let l = &b.s;
    if l.norm(h2) != rat_int(2) {
        return Err(K3Error::NotDegreeTwo);
    }
    if !is_nef(b, h2)? {
        return Err(K3Error::NotNef);
    }
    if !fixed_component_free(b, h2)? {
        return Err(K3Error::FixedComponent);
    }
    let slicer = HyperbolicSlicer::new(l, Coset::lattice(l.rank()), h2)?;
    let roots = slicer.slice(&rat_int(-2), &Rational::zero());
    let simple = simple_roots(&roots, |r| l.pair(r, &b.alpha).is_positive());
    let ty = ade_type(l, &simple)?;
    let mut src: Vec<QVector> = vec![h2.to_vec()];
    let mut dst: Vec<QVector> = vec![h2.to_vec()];
    for comp in components(l, &simple) {
        let vecs: Vec<QVector> = comp.iter().map(|&i| simple[i].clone()).collect();
        let kind = ade_type(l, &vecs)?.0[0];
        let perm = minus_longest(l, &vecs, kind);
        for (k, v) in vecs.iter().enumerate() {
            src.push(v.clone());
            dst.push(vecs[perm[k]].clone());
        }
    }
    let fixed = QMatrix::from_rows(&src);
    let gf = fixed.matmul(l.gram_q());
    for k in rational_left_kernel(&gf.transpose()) {
        dst.push(k.iter().map(|x| -x.clone()).collect());
        src.push(k);
    }
    let x = QMatrix::from_rows(&src);
    let y = QMatrix::from_rows(&dst);
    let m = x.inverse().expect("h₂, the contracted roots and their complement span S").matmul(&y);
    let m = to_integer(&m).ok_or(K3Error::NotIntegral)?;
    let g = Isometry::new(m);
    if !l.is_isometry(&g) || !g.then(&g).is_identity() {
        return Err(K3Error::NotInvolution);
    }
    Ok((g, ty))
}

/// Linear map determined by images of a spanning family, checked to be an
/// integral isometry.
pub fn map_from_images(l: &Lattice, src: &[QVector], dst: &[QVector]) -> Result<Isometry, K3Error> {
    let mut rows: Vec<usize> = Vec::new();
    let mut basis: Vec<QVector> = Vec::new();
    for (i, v) in src.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if QMatrix::from_rows(&trial).rank() == trial.len() {
            basis = trial;
            rows.push(i);
        }
    }
    if basis.len() != l.rank() {
        return Err(K3Error::Generator("map".into(), "images do not span".into()));
    }
    let x = QMatrix::from_rows(&basis);
    let y = QMatrix::from_rows(&rows.iter().map(|&i| dst[i].clone()).collect::<Vec<_>>());
    let m = x.inverse().expect("independent").matmul(&y);
    for (s, d) in src.iter().zip(dst) {
        if &m.left_mul(s) != d {
            return Err(K3Error::Generator("map".into(), "images are inconsistent".into()));
        }
    }
    let g = Isometry::new(to_integer(&m).ok_or(K3Error::NotIntegral)?);
    if !l.is_isometry(&g) {
        return Err(K3Error::Generator("map".into(), "not an isometry".into()));
    }
    Ok(g)
}

/// `α`-degree `⟨α, α^g⟩`.
pub fn degree(b: &K3Bundle, g: &Isometry) -> Rational {
    b.s.pair(&b.alpha, &g.apply(&b.alpha))
}

fn sum_e(b: &K3Bundle, ds: &[Duad]) -> QVector {
    ds.iter().fold(vec![Rational::zero(); b.rank()], |acc, &d| vec_add(&acc, b.e(d)))
}

fn double_trio_with(nu: u8, d: Duad) -> DoubleTrio {
    DoubleTrio::from_trio(Trio::new([nu, d.0, d.1]))
}

/// The action on `S₁₅` of the extra-automorphism named by `tag`.
pub fn gamma(b: &K3Bundle, tag: GeneratorTag) -> Result<Isometry, K3Error> {
    let wrap = |e: K3Error| K3Error::Generator(tag.to_string(), e.to_string());
    let h4 = b.class("h4").clone();
    let two = rat_int(2);
    match tag {
        GeneratorTag::G5(nu) => {
            let ds: Vec<Duad> = combinat::all_duads().into_iter().filter(|d| !d.contains(nu)).collect();
            let mut src = Vec::new();
            let mut dst = Vec::new();
            for &d in &ds {
                let n = b.e(d).clone();
                let t = b.trope(double_trio_with(nu, d)).clone();
                src.push(n.clone());
                dst.push(t.clone());
                src.push(t);
                dst.push(n);
            }
            let through: Vec<Duad> = (1..=6).filter(|&j| j != nu).map(|j| Duad::new(nu, j)).collect();
            let img = vec_sub(&vec_sub(&vec_scale(&rat_int(4), &h4), &vec_scale(&two, &sum_e(b, &through))), &sum_e(b, &ds));
            src.push(h4);
            dst.push(img);
            map_from_images(&b.s, &src, &dst).map_err(wrap)
        }
        GeneratorTag::G6(t1, t2) => {
            let h2 = vec_sub(&vec_sub(b.class("h6"), b.trope(t1)), b.trope(t2));
            double_plane_involution(b, &h2).map(|x| x.0).map_err(wrap)
        }
        GeneratorTag::G7(nu) => {
            let ds: Vec<Duad> = combinat::all_duads().into_iter().filter(|d| !d.contains(nu)).collect();
            let r = vec_sub(&vec_scale(&two, &h4), &sum_e(b, &ds));
            b.s.reflection(&r).map_err(|e| wrap(e.into()))
        }
        GeneratorTag::G8(d) => {
            let h2 = vec_sub(&h4, b.e(d));
            double_plane_involution(b, &h2).map(|x| x.0).map_err(wrap)
        }
        GeneratorTag::G9(t) => {
            let (g6, kantor) = gamma9_parts(b, t, 0).map_err(wrap)?;
            Ok(g6.then(&kantor))
        }
        GeneratorTag::G10(p) => {
            let ds = p.duads();
            let h2 = vec_add(&vec_sub(&vec_scale(&rat_int(3), &h4), &vec_scale(&two, &sum_e(b, &ds))), b.e(ds[0]));
            double_plane_involution(b, &h2).map(|x| x.0).map_err(wrap)
        }
    }
}

/// `(γ₆({θⱼ,θₖ}), γ₉′(t,θᵢ))` for the `i`-th double trio of `Θ₉(t)`.
pub fn gamma9_parts(b: &K3Bundle, t: combinat::TripodIndex, i: usize) -> Result<(Isometry, Isometry), K3Error> {
    let dts = t.double_trios();
    let others: Vec<DoubleTrio> = dts.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
    let g6 = gamma(b, GeneratorTag::g6(others[0], others[1]))?;
    let h2 = vec_sub(&vec_scale(&rat_int(2), b.class("h4")), &sum_e(b, &t.gamma7_duads(dts[i])));
    let (kantor, _) = double_plane_involution(b, &h2)?;
    Ok((g6, kantor))
}

/// The ten pentagon classes `h₂,ν` all give the same involution.
pub fn pentagon_variants(b: &K3Bundle, p: combinat::PentaIndex) -> Result<Vec<(Isometry, RootType)>, K3Error> {
    let ds = p.duads();
    let base = vec_sub(&vec_scale(&rat_int(3), b.class("h4")), &vec_scale(&rat_int(2), &sum_e(b, &ds)));
    ds.iter().map(|&d| double_plane_involution(b, &vec_add(&base, b.e(d)))).collect()
}

/// Pairings of `v` with the ten trope classes and then the fifteen nodal
/// classes, in the canonical orders of double trios and duads.
pub fn trope_node_fingerprint(b: &K3Bundle, v: &[Rational]) -> Vec<Rational> {
    let tropes = combinat::all_double_trios().into_iter().map(|t| b.s.pair(b.trope(t), v));
    let nodes = combinat::all_duads().into_iter().map(|d| b.s.pair(b.e(d), v));
    tropes.chain(nodes).collect()
}

/// The fingerprint that characterizes the wall indexed by `tag`.
pub fn tag_fingerprint(tag: GeneratorTag) -> Vec<i64> {
    let dts = combinat::all_double_trios();
    let duads = combinat::all_duads();
    let (tf, nf): (Box<dyn Fn(DoubleTrio) -> i64>, Box<dyn Fn(Duad) -> i64>) = match tag {
        GeneratorTag::G5(nu) => (Box::new(|_| 0), Box::new(move |d| i64::from(d.contains(nu)))),
        GeneratorTag::G7(nu) => (Box::new(|_| 0), Box::new(move |d| i64::from(!d.contains(nu)))),
        GeneratorTag::G6(t1, t2) => {
            let mut cross = Vec::new();
            for a in t1.trios() {
                for c in t2.trios() {
                    let m = a.mask() & c.mask();
                    if m.count_ones() == 2 {
                        cross.push(m);
                    }
                }
            }
            let (x, y) = (cross[0], cross[1]);
            (
                Box::new(move |t| i64::from(t == t1 || t == t2)),
                Box::new(move |d| i64::from(d.mask() & x != 0 && d.mask() & y != 0)),
            )
        }
        GeneratorTag::G8(dv) => (Box::new(move |t| i64::from(!t.splits_not(dv))), Box::new(move |d| if d == dv { 2 } else { 0 })),
        GeneratorTag::G9(t) => {
            let (th, de) = (t.double_trios(), t.duads());
            (Box::new(move |x| i64::from(th.contains(&x))), Box::new(move |d| i64::from(de.contains(&d))))
        }
        GeneratorTag::G10(p) => {
            let (th, de) = (p.double_trios(), p.duads());
            (Box::new(move |x| i64::from(th.contains(&x))), Box::new(move |d| i64::from(de.contains(&d))))
        }
    };
    dts.into_iter().map(tf).chain(duads.into_iter().map(nf)).collect()
}

/// Bijection between the inner walls of `D₁₅` and the generator tags.
#[derive(Clone, Debug)]
pub struct WallIndex {
    pub tags: Vec<Option<GeneratorTag>>,
    pub walls: BTreeMap<GeneratorTag, usize>,
}

impl WallIndex {
    pub fn wall_index(&self, wall: usize) -> Option<GeneratorTag> {
        self.tags[wall]
    }

    pub fn index_wall(&self, tag: GeneratorTag) -> Option<usize> {
        self.walls.get(&tag).copied()
    }
}

/// Matches every inner wall with the unique tag whose fingerprint it carries.
pub fn index_walls(b: &K3Bundle, ch: &crate::chambers::Chamber, outer: &[bool]) -> Result<WallIndex, K3Error> {
    let mut by_fp: BTreeMap<Vec<i64>, GeneratorTag> = BTreeMap::new();
    for tag in GeneratorTag::all() {
        if by_fp.insert(tag_fingerprint(tag), tag).is_some() {
            return Err(K3Error::Generator(tag.to_string(), "duplicate fingerprint".into()));
        }
    }
    let mut tags = vec![None; ch.walls.len()];
    let mut walls = BTreeMap::new();
    for (i, w) in ch.walls.iter().enumerate() {
        if outer[i] {
            continue;
        }
        let fp: Option<Vec<i64>> = trope_node_fingerprint(b, &w.v)
            .iter()
            .map(|x| if x.is_integer() { i64::try_from(x.to_integer()).ok() } else { None })
            .collect();
        let tag = fp
            .and_then(|f| by_fp.get(&f).copied())
            .ok_or_else(|| K3Error::Generator(format!("wall {i}"), "fingerprint matches no tag".into()))?;
        if walls.insert(tag, i).is_some() {
            return Err(K3Error::Generator(tag.to_string(), "two walls share the tag".into()));
        }
        tags[i] = Some(tag);
    }
    if walls.len() != by_fp.len() {
        return Err(K3Error::Generator("index".into(), format!("{} of {} tags matched", walls.len(), by_fp.len())));
    }
    Ok(WallIndex { tags, walls })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::fixtures::{build_s15, build_s16};
    use std::collections::BTreeSet;

    fn s15() -> K3Bundle {
        build_s15(&build_s16().unwrap()).unwrap()
    }

    #[test]
    fn fingerprints_are_distinct() {
        let all = GeneratorTag::all();
        assert_eq!(all.len(), 264);
        let fps: BTreeSet<Vec<i64>> = all.iter().map(|&t| tag_fingerprint(t)).collect();
        assert_eq!(fps.len(), all.len());
    }

    #[test]
    fn involution_generators() {
        let b = s15();
        let omega = b.s.omega_test();
        for (tag, d) in [("g5(1)", rat(23, 2)), ("g7(2)", rat(53, 2)), ("g8((12))", rat(53, 2))] {
            let g = gamma(&b, tag.parse().unwrap()).unwrap();
            assert!(b.s.is_isometry(&g), "{tag}");
            assert!(omega.contains(&g), "{tag}");
            assert!(g.then(&g).is_identity(), "{tag}");
            assert_eq!(degree(&b, &g), d, "{tag}");
        }
    }

    #[test]
    fn double_plane_fixes_its_class() {
        let b = s15();
        let tag: GeneratorTag = "g6({(123),(124)})".parse().unwrap();
        let GeneratorTag::G6(t1, t2) = tag else { unreachable!() };
        let h2 = vec_sub(&vec_sub(b.class("h6"), b.trope(t1)), b.trope(t2));
        assert_eq!(b.s.norm(&h2), rat_int(2));
        let (g, _) = double_plane_involution(&b, &h2).unwrap();
        assert_eq!(g.apply(&h2), h2);
        assert_eq!(degree(&b, &g), rat(33, 2));
    }

    #[test]
    fn nef_classes() {
        let b = s15();
        assert!(is_nef(&b, b.class("h4")).unwrap());
        let minus: QVector = b.class("h4").iter().map(|x| -x.clone()).collect();
        assert!(is_nef(&b, &minus).is_err());
        // ⟨2h₄ + 2E₁₂, E₁₂⟩ = −4 while the class has norm 8
        let v = vec_add(&vec_scale(&rat_int(2), b.class("h4")), &vec_scale(&rat_int(2), b.e(Duad::new(1, 2))));
        assert_eq!(b.s.norm(&v), rat_int(8));
        assert!(!is_nef(&b, &v).unwrap());
    }
}
