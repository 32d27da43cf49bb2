//! Chambers induced from Weyl vectors of `II_{1,25}`: walls, adjacency,
//! isometries between chambers and codimension-2 faces.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::{Bound, Coset, HyperbolicSlicer, NegDefEnumerator};
use crate::exactalg::matrix::{dot, vec_add, vec_scale, vec_sub, vec_to_integer, vec_to_rational};
use crate::exactalg::rational::{common_denominator, from_int, serde_rational};
use crate::exactalg::snf::solve_integer_left;
use crate::exactalg::{cone_separator, rat_int, Int, QMatrix, Rational, ZMatrix};
use crate::fixtures::K3Bundle;
use crate::lattice::{Lattice, QVector};
use crate::leech::standard;

#[derive(Debug, thiserror::Error)]
pub enum ChamberError {
    #[error("the induced chamber is degenerate")]
    Degenerate,
    #[error("Weyl vector walk did not terminate")]
    WalkLimit,
    #[error("{0}")]
    Check(String),
}

/// A wall: primitive defining vector `v ∈ S∨` with `n = ⟨v,v⟩`, `a = ⟨v,w_S⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Wall {
    #[serde(with = "serde_rational::vec")]
    pub v: QVector,
    #[serde(with = "serde_rational")]
    pub n: Rational,
    #[serde(with = "serde_rational")]
    pub a: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chamber {
    /// The Weyl vector in `II_{1,25}` coordinates.
    #[serde(with = "serde_rational::vec")]
    pub weyl: QVector,
    /// `pr_S(w)`.
    #[serde(with = "serde_rational::vec")]
    pub ws: QVector,
    pub walls: Vec<Wall>,
}

impl Chamber {
    /// Canonical form used for chamber identity.
    pub fn wall_set(&self) -> BTreeSet<QVector> {
        self.walls.iter().map(|w| w.v.clone()).collect()
    }

    pub fn contains(&self, l: &Lattice, x: &[Rational]) -> bool {
        self.walls.iter().all(|w| !l.pair(&w.v, x).is_negative())
    }

    pub fn interior(&self, l: &Lattice, x: &[Rational]) -> bool {
        self.walls.iter().all(|w| l.pair(&w.v, x).is_positive())
    }
}

/// The primitive vector of `S∨` on the ray of `v`.
pub fn primitive_dual(l: &Lattice, v: &[Rational]) -> QVector {
    let f = l.functional(v);
    let den = f.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Int> = f.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    let f: Vec<Rational> = ints.iter().map(|x| Rational::new(x.clone(), g.clone())).collect();
    crate::exactalg::snf::solve_left_square(l.gram_q(), &f).expect("nondegenerate")
}

/// Integral functional `v·G` of a dual vector.
pub fn functional_int(l: &Lattice, v: &[Rational]) -> Vec<Int> {
    vec_to_integer(&l.functional(v)).expect("dual vector")
}

/// Projections to `S∨` of the Leech roots of `w` with negative-norm projection,
/// as primitive dual vectors.
pub fn wall_candidates(b: &K3Bundle, weyl: &[Rational]) -> Result<Vec<QVector>, ChamberError> {
    let u = standard();
    let s = &b.s;
    let r = &b.complement.source;
    let ws = b.embedding.project_to_dual(weyl);
    let wr = b.complement.project_to_dual(weyl);
    if !s.norm(&ws).is_positive() {
        return Err(ChamberError::Degenerate);
    }
    let rhos = NegDefEnumerator::new(r, Coset::dual(r))
        .map_err(|e| ChamberError::Check(e.to_string()))?
        .vectors(&rat_int(-2), Bound::Lt);
    // x·(G Kᵀ) = ρ·G_R picks x ∈ II with pr_R(x) = ρ.
    let gk = u.lattice.gram().matmul(&b.complement.image.transpose());
    let lifts: Vec<(QVector, QVector)> = rhos
        .iter()
        .map(|rho| {
            let f = vec_to_integer(&r.functional(rho)).expect("dual vector");
            let (x, _) = solve_integer_left(&gk, &f).expect("R is primitive in a unimodular lattice");
            (rho.clone(), b.embedding.project_to_dual(&vec_to_rational(&x)))
        })
        .collect();
    let found: Vec<Vec<QVector>> = lifts
        .par_iter()
        .map(|(rho, sigma0)| {
            let a = rat_int(-2) - r.norm(rho);
            let target = Rational::one() - r.pair(rho, &wr);
            let slicer = HyperbolicSlicer::new(s, Coset::shifted(s.rank(), sigma0.clone()), &ws).expect("w_S is positive");
            let mut out = Vec::new();
            slicer.slice_with(&a, &target, Bound::Eq, |sigma| out.push(primitive_dual(s, &sigma)));
            out
        })
        .collect();
    let set: BTreeSet<QVector> = found.into_iter().flatten().collect();
    Ok(set.into_iter().collect())
}

/// Indices of the candidates that are not implied by the others.
pub fn irredundant(l: &Lattice, cands: &[QVector]) -> Vec<usize> {
    let fs: Vec<QVector> = cands.iter().map(|v| l.functional(v)).collect();
    (0..fs.len())
        .into_par_iter()
        .filter(|&i| {
            let others: Vec<QVector> = fs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, f)| f.clone()).collect();
            cone_separator(&fs[i], &others).is_some()
        })
        .collect()
}

fn sort_walls(walls: &mut [Wall]) {
    walls.sort_by(|x, y| (&x.a, &y.n, &x.v).cmp(&(&y.a, &x.n, &y.v)));
}

/// All walls of the chamber induced by the Weyl vector `weyl`.
pub fn compute_walls(b: &K3Bundle, weyl: &[Rational]) -> Result<Chamber, ChamberError> {
    let s = &b.s;
    let ws = b.embedding.project_to_dual(weyl);
    let cands = wall_candidates(b, weyl)?;
    let keep = irredundant(s, &cands);
    let mut walls: Vec<Wall> = keep
        .into_iter()
        .map(|i| {
            let v = cands[i].clone();
            Wall {
                n: s.norm(&v),
                a: s.pair(&v, &ws),
                v,
            }
        })
        .collect();
    sort_walls(&mut walls);
    if walls.is_empty() {
        return Err(ChamberError::Degenerate);
    }
    Ok(Chamber {
        weyl: weyl.to_vec(),
        ws,
        walls,
    })
}

/// Outer walls are those whose defining vector is a multiple of a (−2)-vector of `S`.
pub fn is_outer(l: &Lattice, wall: &Wall) -> bool {
    let Some(k) = crate::exactalg::rational::rational_sqrt(&(rat_int(-2) / &wall.n)) else {
        return false;
    };
    let r = vec_scale(&k, &wall.v);
    vec_to_integer(&r).is_some() && l.norm(&r) == rat_int(-2)
}

/// `s_r(x) = x + ⟨x,r⟩r` for a (−2)-vector `r` of `II_{1,25}`.
fn reflect(l: &Lattice, r: &[Rational], x: &[Rational]) -> QVector {
    let c = l.pair(x, r);
    vec_add(x, &vec_scale(&c, r))
}

/// The Leech root `r` of `w₀` minimising `⟨r,p⟩`, if that value is negative
/// (or non-positive when `allow_zero`).
fn most_violated_root(p: &[Rational], allow_zero: bool) -> Option<(QVector, Rational)> {
    let u = standard();
    let (a, b) = (&p[0], &p[1]);
    if !b.is_positive() {
        return None;
    }
    let mu = &p[2..];
    let n = u.lattice.norm(p);
    // ⟨r₀(λ),p⟩ < 0  ⟺  |λ − μ/b|² < 2 − ⟨p,p⟩/b².
    let bound = rat_int(2) - &n / (b * b);
    let center: Vec<Rational> = mu.iter().map(|x| x / b).collect();
    let mode = if allow_zero { Bound::Le } else { Bound::Lt };
    let _ = a;
    let mut best: Option<(QVector, Rational)> = None;
    u.leech.enumerator().for_each(&center, &bound, mode, |lam| {
        let r = u.leech_root(&vec_to_rational(lam));
        let val = u.lattice.pair(&r, p);
        if best.as_ref().is_none_or(|(br, bv)| (&val, &r) < (bv, br)) {
            best = Some((r, val));
        }
    });
    best
}

const WALK_LIMIT: usize = 100_000;

/// Reflection walk from `w₀` to the Weyl vector whose Conway chamber contains
/// `p` (in `II_{1,25}` coordinates); returns the Weyl vector and the roots used.
pub fn walk_to(p: &[Rational]) -> Result<(QVector, Vec<QVector>), ChamberError> {
    let l = &standard().lattice;
    let mut cur = p.to_vec();
    let mut roots = Vec::new();
    while let Some((r, _)) = most_violated_root(&cur, false) {
        cur = reflect(l, &r, &cur);
        roots.push(r);
        if roots.len() > WALK_LIMIT {
            return Err(ChamberError::WalkLimit);
        }
    }
    let mut w = standard().w0();
    for r in roots.iter().rev() {
        w = reflect(l, r, &w);
    }
    Ok((w, roots))
}

/// True iff `x` lies in the closed Conway chamber of the Weyl vector reached
/// by the roots of a walk.
fn in_walked_chamber(roots: &[QVector], x: &[Rational]) -> bool {
    let l = &standard().lattice;
    let mut cur = x.to_vec();
    for r in roots {
        cur = reflect(l, r, &cur);
    }
    most_violated_root(&cur, false).is_none()
}

/// A point of the relative interior of wall `idx`, and a point beyond it that
/// violates only that wall.
pub fn wall_points(l: &Lattice, ch: &Chamber, idx: usize, interior: &[Rational]) -> (QVector, QVector) {
    let fs: Vec<QVector> = ch.walls.iter().map(|w| l.functional(&w.v)).collect();
    let others: Vec<QVector> = fs.iter().enumerate().filter(|&(j, _)| j != idx).map(|(_, f)| f.clone()).collect();
    let y = cone_separator(&fs[idx], &others).expect("walls are irredundant");
    let x: QVector = y.iter().map(|c| -c.clone()).collect();
    let v = &ch.walls[idx].v;
    let va = l.pair(v, interior);
    let vx = l.pair(v, &x);
    let t = &va / (&va - &vx);
    let dir = vec_sub(&x, interior);
    let q = vec_add(interior, &vec_scale(&t, &dir));
    (q, dir)
}

/// The Weyl vector of the chamber adjacent to `ch` across wall `idx`.
pub fn adjacent_weyl(b: &K3Bundle, ch: &Chamber, idx: usize, interior: &[Rational]) -> Result<QVector, ChamberError> {
    let l = &b.s;
    let (q, dir) = wall_points(l, ch, idx, interior);
    if !l.norm(&q).is_positive() {
        return Err(ChamberError::Check("wall point outside the positive cone".into()));
    }
    let v = &ch.walls[idx].v;
    // step so that q + s·dir crosses only this wall
    let vd = l.pair(v, &dir);
    let mut s = Rational::one();
    for w in &ch.walls {
        let wd = l.pair(&w.v, &dir);
        if wd.is_negative() {
            let lim = -l.pair(&w.v, &q) / &wd;
            if lim.is_positive() && lim < s {
                s = lim;
            }
        }
    }
    let _ = vd;
    s /= rat_int(2);
    for _ in 0..40 {
        let p = vec_add(&q, &vec_scale(&s, &dir));
        if l.norm(&p).is_positive() {
            let pe = b.embedding.map(&p);
            let (w, roots) = walk_to(&pe)?;
            if in_walked_chamber(&roots, &b.embedding.map(&q)) {
                return Ok(w);
            }
        }
        s /= rat_int(4);
    }
    Err(ChamberError::Check("no admissible point beyond the wall".into()))
}

/// `⟨α, w′⟩` for the Weyl vector `w′` of the adjacent chamber.
pub fn d_invariant(b: &K3Bundle, weyl: &[Rational]) -> Rational {
    standard().lattice.pair(&b.embedding.map(&b.alpha), weyl)
}

fn to_i128(x: &Int) -> i128 {
    i128::try_from(x).expect("entry fits in i128")
}

/// Wall data prepared for isometry search: vectors scaled to integers and the
/// scaled pairing matrix.
struct WallTable {
    scale: Int,
    vs: Vec<Vec<i128>>,
    pairs: Vec<Vec<i128>>,
    fingerprints: Vec<(i128, Vec<i128>)>,
    index: HashMap<Vec<i128>, usize>,
}

impl WallTable {
    fn new(l: &Lattice, ch: &Chamber, scale: &Int, pscale: &Int) -> Self {
        let sq = Rational::from_integer(scale.clone());
        let pq = Rational::from_integer(pscale.clone());
        let vs: Vec<Vec<i128>> = ch
            .walls
            .iter()
            .map(|w| w.v.iter().map(|x| to_i128(&(x * &sq).to_integer())).collect())
            .collect();
        let m = ch.walls.len();
        let mut pairs = vec![vec![0i128; m]; m];
        for i in 0..m {
            let fi = l.functional(&ch.walls[i].v);
            for j in i..m {
                let p = dot(&fi, &ch.walls[j].v) * &pq;
                let p = to_i128(&p.to_integer());
                pairs[i][j] = p;
                pairs[j][i] = p;
            }
        }
        let fingerprints = (0..m)
            .map(|i| {
                let mut row = pairs[i].clone();
                row.sort();
                (pairs[i][i], row)
            })
            .collect();
        let index = vs.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        WallTable {
            scale: scale.clone(),
            vs,
            pairs,
            fingerprints,
            index,
        }
    }
}

fn common_scales(l: &Lattice, chambers: &[&Chamber]) -> (Int, Int) {
    let mut scale = Int::one();
    for c in chambers {
        for w in &c.walls {
            for x in &w.v {
                scale = scale.lcm(x.denom());
            }
        }
    }
    // pairings of dual vectors have denominators dividing |det|
    let pscale = l.det().abs();
    (scale, pscale)
}

/// Every isometry of `S` mapping chamber `c1` onto chamber `c2`.
pub fn isometries_between(l: &Lattice, c1: &Chamber, c2: &Chamber) -> Vec<crate::lattice::Isometry> {
    if c1.walls.len() != c2.walls.len() {
        return Vec::new();
    }
    let n = l.rank();
    let (scale, pscale) = common_scales(l, &[c1, c2]);
    let t1 = WallTable::new(l, c1, &scale, &pscale);
    let t2 = WallTable::new(l, c2, &scale, &pscale);
    let mut fp1: Vec<_> = t1.fingerprints.clone();
    let mut fp2: Vec<_> = t2.fingerprints.clone();
    fp1.sort();
    fp2.sort();
    if fp1 != fp2 {
        return Vec::new();
    }
    // Fingerprint classes as small integer colours shared by both tables.
    let mut colour_of: HashMap<&(i128, Vec<i128>), u32> = HashMap::new();
    for f in &fp1 {
        let c = colour_of.len() as u32;
        colour_of.entry(f).or_insert(c);
    }
    let col1: Vec<u32> = t1.fingerprints.iter().map(|f| colour_of[f]).collect();
    let col2: Vec<u32> = t2.fingerprints.iter().map(|f| colour_of[f]).collect();
    // Base walls chosen greedily: smallest cell of the partition refined by
    // pairings with the walls already chosen, among those raising the rank.
    let m = c1.walls.len();
    let mut base: Vec<usize> = Vec::new();
    let mut rows: Vec<QVector> = Vec::new();
    while base.len() < n {
        let sigs = signatures(&t1, &col1, &base);
        let mut sizes: HashMap<&Vec<i128>, usize> = HashMap::new();
        for s in &sigs {
            *sizes.entry(s).or_default() += 1;
        }
        let mut order: Vec<usize> = (0..m).filter(|i| !base.contains(i)).collect();
        order.sort_by_key(|&i| (sizes[&sigs[i]], i));
        let mut added = false;
        for i in order {
            let mut trial = rows.clone();
            trial.push(c1.walls[i].v.clone());
            if QMatrix::from_rows(&trial).rank() == trial.len() {
                rows = trial;
                base.push(i);
                added = true;
                break;
            }
        }
        assert!(added, "walls span S");
    }
    let bmat = QMatrix::from_rows(&rows);
    let binv = bmat.inverse().expect("independent walls");
    // M = B⁻¹·Img with B⁻¹ = adj/det, Img = V/scale.
    let bden = binv.data().iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let binv_i: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| to_i128(&(&binv[(i, j)] * Rational::from_integer(bden.clone())).to_integer()))
                .collect()
        })
        .collect();
    let denom = to_i128(&(&bden * &t2.scale));

    let mut targets = Vec::with_capacity(n);
    let mut want = Vec::with_capacity(n);
    let mut cells: Vec<u64> = col1.iter().map(|&c| mix(0, c as i128)).collect();
    for &b in &base {
        want.push(cells[b]);
        cells = refine(&t1, &cells, b);
        targets.push(sorted(&cells));
    }
    let ctx = SearchCtx {
        t1: &t1,
        t2: &t2,
        col2: &col2,
        base: &base,
        binv: &binv_i,
        denom,
        targets,
        want,
    };
    let results = ctx.run();
    let mut out: Vec<crate::lattice::Isometry> = results
        .into_iter()
        .map(|m| {
            let z = ZMatrix::from_rows(&m.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect::<Vec<_>>());
            crate::lattice::Isometry::new(z)
        })
        .collect();
    out.sort();
    out
}

fn mix(h: u64, x: i128) -> u64 {
    let mut z = h ^ (x as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((x >> 64) as u64);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Colour of each wall followed by its pairings with the given walls.
fn signatures(t: &WallTable, col: &[u32], with: &[usize]) -> Vec<Vec<i128>> {
    (0..t.vs.len())
        .map(|i| {
            let mut s = Vec::with_capacity(with.len() + 1);
            s.push(col[i] as i128);
            s.extend(with.iter().map(|&b| t.pairs[i][b]));
            s
        })
        .collect()
}

/// Cell hashes refined by pairings with wall `b`.
fn refine(t: &WallTable, cells: &[u64], b: usize) -> Vec<u64> {
    cells.iter().enumerate().map(|(i, &h)| mix(h, t.pairs[i][b])).collect()
}

fn sorted(v: &[u64]) -> Vec<u64> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

struct SearchCtx<'a> {
    t1: &'a WallTable,
    t2: &'a WallTable,
    col2: &'a [u32],
    base: &'a [usize],
    binv: &'a [Vec<i128>],
    denom: i128,
    /// Sorted cell hashes of `c1` after refining by `base[..=k]`.
    targets: Vec<Vec<u64>>,
    /// Cell hash of `base[k]` after refining by `base[..k]`.
    want: Vec<u64>,
}

impl SearchCtx<'_> {
    fn run(&self) -> Vec<Vec<Vec<i128>>> {
        let cells: Vec<u64> = self.col2.iter().map(|&c| mix(0, c as i128)).collect();
        (0..self.t2.vs.len())
            .into_par_iter()
            .filter(|&j| cells[j] == self.want[0])
            .flat_map_iter(|j| {
                let mut out = Vec::new();
                let next = refine(self.t2, &cells, j);
                if sorted(&next) == self.targets[0] {
                    self.search(&mut vec![j], &next, &mut out);
                }
                out
            })
            .collect()
    }

    fn search(&self, img: &mut Vec<usize>, cells: &[u64], out: &mut Vec<Vec<Vec<i128>>>) {
        let k = img.len();
        let n = self.base.len();
        if k == n {
            if let Some(m) = leaf_matrix(self.t1, self.t2, img, self.binv, self.denom) {
                out.push(m);
            }
            return;
        }
        for j in 0..self.t2.vs.len() {
            if cells[j] != self.want[k] || img.contains(&j) {
                continue;
            }
            let next = refine(self.t2, cells, j);
            if sorted(&next) == self.targets[k] {
                img.push(j);
                self.search(img, &next, out);
                img.pop();
            }
        }
    }
}

fn leaf_matrix(t1: &WallTable, t2: &WallTable, img: &[usize], binv: &[Vec<i128>], denom: i128) -> Option<Vec<Vec<i128>>> {
    let n = img.len();
    let mut m = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0i128;
            for k in 0..n {
                s += binv[i][k] * t2.vs[img[k]][j];
            }
            if s % denom != 0 {
                return None;
            }
            m[i][j] = s / denom;
        }
    }
    // every wall must land on a wall
    let mut seen = vec![false; t2.vs.len()];
    for v in &t1.vs {
        let mut w = vec![0i128; n];
        for (i, vi) in v.iter().enumerate() {
            if *vi != 0 {
                for j in 0..n {
                    w[j] += vi * m[i][j];
                }
            }
        }
        match t2.index.get(&w) {
            Some(&j) if !seen[j] => seen[j] = true,
            _ => return None,
        }
    }
    Some(m)
}

/// The permutation of wall indices induced by an isometry of the chamber.
pub fn wall_permutation(ch: &Chamber, g: &crate::lattice::Isometry) -> Vec<usize> {
    wall_permutations(ch, std::slice::from_ref(g)).pop().expect("one isometry")
}

/// Wall permutations of several chamber automorphisms, computed in `i64`
/// when the scaled wall vectors and matrices fit.
pub fn wall_permutations(ch: &Chamber, group: &[crate::lattice::Isometry]) -> Vec<Vec<usize>> {
    let den = common_denominator(ch.walls.iter().flat_map(|w| w.v.iter()));
    let scaled: Option<Vec<Vec<i64>>> = ch
        .walls
        .iter()
        .map(|w| w.v.iter().map(|x| i64::try_from(&(x * from_int(&den)).to_integer()).ok()).collect())
        .collect();
    let Some(scaled) = scaled else {
        let index: HashMap<&QVector, usize> = ch.walls.iter().enumerate().map(|(i, w)| (&w.v, i)).collect();
        return group.par_iter().map(|g| ch.walls.iter().map(|w| index[&g.apply(&w.v)]).collect()).collect();
    };
    let index: HashMap<&[i64], usize> = scaled.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    group
        .par_iter()
        .map(|g| {
            let m = &g.matrix;
            let n = m.nrows();
            let m64: Vec<i64> = m.data().iter().map(|x| i64::try_from(x).expect("isometry entry fits in i64")).collect();
            scaled
                .iter()
                .map(|v| {
                    let mut out = vec![0i64; n];
                    for (i, &vi) in v.iter().enumerate() {
                        if vi != 0 {
                            for (o, &mij) in out.iter_mut().zip(&m64[i * n..(i + 1) * n]) {
                                *o += vi * mij;
                            }
                        }
                    }
                    index[out.as_slice()]
                })
                .collect()
        })
        .collect()
}

/// A codimension-2 face: the two walls containing it and a point in its
/// relative interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face2 {
    pub walls: (usize, usize),
    pub point: QVector,
}

/// Faces of codimension 2 lying on wall `i`.
pub fn faces_on_wall(l: &Lattice, ch: &Chamber, i: usize, interior: &[Rational]) -> Vec<Face2> {
    let fs: Vec<QVector> = ch.walls.iter().map(|w| l.functional(&w.v)).collect();
    let vi = &ch.walls[i].v;
    let ni = &ch.walls[i].n;
    let (q, _) = wall_points(l, ch, i, interior);
    let neg_fi: QVector = fs[i].iter().map(|x| -x.clone()).collect();
    let mut out: Vec<Face2> = (0..ch.walls.len())
        .into_par_iter()
        .filter(|&j| j != i)
        .filter_map(|j| {
            let vj = &ch.walls[j].v;
            let c = l.pair(vj, vi) / ni;
            let u = vec_sub(vj, &vec_scale(&c, vi));
            if !l.norm(&u).is_negative() {
                return None;
            }
            let mut gens: Vec<QVector> = fs.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, f)| f.clone()).collect();
            gens.push(fs[i].clone());
            gens.push(neg_fi.clone());
            let y = cone_separator(&fs[j], &gens)?;
            let x: QVector = y.iter().map(|c| -c.clone()).collect();
            let fq = dot(&fs[j], &q);
            let fx = dot(&fs[j], &x);
            let t = &fq / (&fq - &fx);
            let z = vec_add(&q, &vec_scale(&t, &vec_sub(&x, &q)));
            if !l.norm(&z).is_positive() {
                return None;
            }
            Some(Face2 {
                walls: (i.min(j), i.max(j)),
                point: z,
            })
        })
        .collect();
    out.sort_by_key(|a| a.walls);
    out
}

/// Orbits of `0..n` under permutations generating (or forming) a group.
pub fn perm_orbits(perms: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut orb = vec![s];
        let mut k = 0;
        while k < orb.len() {
            for p in perms {
                let t = p[orb[k]];
                if !seen[t] {
                    seen[t] = true;
                    orb.push(t);
                }
            }
            k += 1;
        }
        orb.sort();
        out.push(orb);
    }
    out
}

/// All codimension-2 faces, computed on one wall per orbit of the group with
/// wall permutations `perms` and transported to the rest. Relative-interior
/// points of transported faces are the images under the matching isometry.
pub fn faces_codim2(l: &Lattice, ch: &Chamber, group: &[crate::lattice::Isometry], interior: &[Rational]) -> Vec<Face2> {
    let perms = wall_permutations(ch, group);
    let mut faces: BTreeMap<(usize, usize), QVector> = BTreeMap::new();
    for orb in perm_orbits(&perms, ch.walls.len()) {
        let r = orb[0];
        let local = faces_on_wall(l, ch, r, interior);
        for (g, p) in group.iter().zip(&perms) {
            for f in &local {
                let (a, b) = (p[f.walls.0], p[f.walls.1]);
                faces.entry((a.min(b), a.max(b))).or_insert_with(|| g.apply(&f.point));
            }
        }
    }
    faces.into_iter().map(|(walls, point)| Face2 { walls, point }).collect()
}

/// One orbit of walls under a group of chamber automorphisms, with the
/// invariants `(n, a, d)` and the outer flag of its walls.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallOrbit {
    pub walls: Vec<usize>,
    #[serde(with = "serde_rational")]
    pub n: Rational,
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub d: Rational,
    pub outer: bool,
}

/// Orbits of walls under `group`, ordered by least wall index.
pub fn wall_orbits(b: &K3Bundle, ch: &Chamber, group: &[crate::lattice::Isometry]) -> Result<Vec<WallOrbit>, ChamberError> {
    let perms = wall_permutations(ch, group);
    let orbits = perm_orbits(&perms, ch.walls.len());
    let data: Vec<Result<WallOrbit, ChamberError>> = orbits
        .into_par_iter()
        .map(|walls| {
            let r = walls[0];
            let w = &ch.walls[r];
            let d = d_invariant(b, &adjacent_weyl(b, ch, r, &b.alpha)?);
            Ok(WallOrbit {
                n: w.n.clone(),
                a: w.a.clone(),
                d,
                outer: is_outer(&b.s, w),
                walls,
            })
        })
        .collect();
    let mut out = data.into_iter().collect::<Result<Vec<_>, _>>()?;
    out.sort_by_key(|o| o.walls[0]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    #[test]
    fn orbits_of_permutations() {
        let p = vec![vec![1, 0, 2, 4, 3], vec![0, 1, 2, 3, 4]];
        assert_eq!(perm_orbits(&p, 5), vec![vec![0, 1], vec![2], vec![3, 4]]);
        let cyc = vec![vec![1, 2, 3, 0]];
        assert_eq!(perm_orbits(&cyc, 4), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn chamber_json_round_trip() {
        let ch = Chamber {
            weyl: vec![rat_int(1), rat_int(0)],
            ws: vec![rat(1, 2), rat(-3, 7)],
            walls: vec![Wall {
                v: vec![rat(1, 4), rat_int(-2)],
                n: rat(-3, 4),
                a: rat_int(3),
            }],
        };
        let s = serde_json::to_string(&ch).unwrap();
        assert!(s.contains("\"-3/4\""));
        let back: Chamber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ch);
    }

    #[test]
    fn interior_versus_closed() {
        let l = Lattice::from_i64("U", &[vec![0, 1], vec![1, 0]]).unwrap();
        // walls x ≥ 0 and y ≥ 0 through the functionals of (0,1) and (1,0)
        let ch = Chamber {
            weyl: vec![],
            ws: vec![],
            walls: vec![
                Wall {
                    v: vec![rat_int(0), rat_int(1)],
                    n: rat_int(0),
                    a: rat_int(0),
                },
                Wall {
                    v: vec![rat_int(1), rat_int(0)],
                    n: rat_int(0),
                    a: rat_int(0),
                },
            ],
        };
        assert!(ch.interior(&l, &[rat_int(1), rat_int(2)]));
        assert!(!ch.interior(&l, &[rat_int(0), rat_int(2)]));
        assert!(ch.contains(&l, &[rat_int(0), rat_int(2)]));
        assert!(!ch.contains(&l, &[rat_int(-1), rat_int(2)]));
    }
}
