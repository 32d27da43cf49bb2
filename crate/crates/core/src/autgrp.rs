//! Generators and defining relations of the automorphism group from the
//! chamber geometry, and decomposition of automorphisms into generators.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chambers::{faces_codim2, is_outer, isometries_between, perm_orbits, wall_permutations, wall_points, Chamber, Face2};
use crate::exactalg::matrix::{vec_add, vec_scale};
use crate::exactalg::rational::common_denominator;
use crate::exactalg::{rat_int, Int, Rational, ZMatrix};
use crate::fixtures::K3Bundle;
use crate::k3::combinat::{GeneratorTag, Word};
use crate::k3::{degree, gamma, index_walls, K3Error, WallIndex};
use crate::lattice::{Isometry, OmegaTest, QVector};

#[derive(Debug, thiserror::Error)]
pub enum AutError {
    #[error("Aut(Y, D0) is nontrivial, of order {0}")]
    NontrivialStabilizer(usize),
    #[error("no valid extra-automorphism for wall {0}")]
    NoGenerator(String),
    #[error("generator construction: {0}")]
    K3(#[from] K3Error),
    #[error("relation bookkeeping: {0}")]
    Relations(String),
    #[error("chamber loop exceeded {0} steps")]
    LoopLimit(usize),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("integer overflow in matrix arithmetic")]
    Overflow,
    #[error("no generic perturbation found in {0} attempts")]
    Degenerate(usize),
}

/// Square integer matrix with checked `i128` arithmetic, acting on rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IMat {
    pub n: usize,
    pub data: Vec<i128>,
}

impl IMat {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IMat { n, data }
    }

    pub fn from_isometry(g: &Isometry) -> Result<Self, AutError> {
        let n = g.matrix.nrows();
        let data = g
            .matrix
            .data()
            .iter()
            .map(|x| x.to_i128().ok_or(AutError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(IMat { n, data })
    }

    pub fn to_isometry(&self) -> Isometry {
        Isometry::new(ZMatrix::from_vec(self.n, self.n, self.data.iter().map(|&x| Int::from(x)).collect()))
    }

    pub fn is_identity(&self) -> bool {
        *self == IMat::identity(self.n)
    }

    /// `self · other`.
    pub fn mul(&self, other: &IMat) -> Result<IMat, AutError> {
        let n = self.n;
        let mut data = vec![0i128; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let p = a.checked_mul(other.data[k * n + j]).ok_or(AutError::Overflow)?;
                    data[i * n + j] = data[i * n + j].checked_add(p).ok_or(AutError::Overflow)?;
                }
            }
        }
        Ok(IMat { n, data })
    }

    /// `x · self`.
    pub fn apply(&self, x: &[i128]) -> Result<Vec<i128>, AutError> {
        let n = self.n;
        let mut out = vec![0i128; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for j in 0..n {
                let p = xi.checked_mul(self.data[i * n + j]).ok_or(AutError::Overflow)?;
                out[j] = out[j].checked_add(p).ok_or(AutError::Overflow)?;
            }
        }
        Ok(out)
    }
}

fn dot_i(a: &[i128], b: &[i128]) -> Result<i128, AutError> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| {
        x.checked_mul(*y).and_then(|p| acc.checked_add(p)).ok_or(AutError::Overflow)
    })
}

/// A rational vector rescaled to a primitive integer vector on the same ray.
fn integral_ray(v: &[Rational]) -> Result<Vec<i128>, AutError> {
    let d = common_denominator(v.iter());
    let ints: Vec<Int> = v.iter().map(|x| (x * Rational::from_integer(d.clone())).to_integer()).collect();
    let g = ints.iter().fold(Int::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    let g = if g.is_zero() { Int::from(1) } else { g };
    ints.iter().map(|x| (x / &g).to_i128().ok_or(AutError::Overflow)).collect()
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub tag: GeneratorTag,
    pub wall: usize,
    pub isometry: Isometry,
    pub matrix: IMat,
    pub degree: Rational,
}

/// Summary of the chamber and its verified generators.
#[derive(Clone, Debug, Default)]
pub struct GeneratorReport {
    pub walls: usize,
    pub outer_walls: usize,
    pub inner_walls: usize,
    pub chamber_group_order: usize,
    pub aut_d0_order: usize,
    pub generators: usize,
    pub degrees: BTreeMap<u8, Vec<Rational>>,
}

/// The chamber `D₀` with its generator map.
pub struct Borcherds {
    pub bundle: K3Bundle,
    pub chamber: Chamber,
    pub outer: Vec<bool>,
    pub index: WallIndex,
    /// `O(S, D₀)`, sorted.
    pub group: Vec<Isometry>,
    pub generators: BTreeMap<GeneratorTag, Generator>,
    /// Wall functionals `x ↦ ⟨v,x⟩`, scaled to primitive integer vectors.
    pub functionals: Vec<Vec<i128>>,
    /// For each inner wall, the wall whose generator is the inverse.
    pub partner: Vec<Option<usize>>,
    pub report: GeneratorReport,
}

/// `|O(S,D₀) ∩ O(S)^ω|`.
pub fn aut_d0_order(omega: &OmegaTest, group: &[Isometry]) -> usize {
    group.iter().filter(|g| omega.contains(g)).count()
}

/// The Borcherds generator loop for the quartic fixture: every inner wall of
/// `D₀` receives a verified `g_w ∈ O(S)^ω` with `D₀^{g_w}` adjacent across it.
pub fn run_borcherds(bundle: &K3Bundle, chamber: &Chamber) -> Result<Borcherds, AutError> {
    let l = &bundle.s;
    let group = isometries_between(l, chamber, chamber);
    let omega = l.omega_test();
    let aut = aut_d0_order(&omega, &group);
    if aut != 1 {
        return Err(AutError::NontrivialStabilizer(aut));
    }
    let outer: Vec<bool> = chamber.walls.iter().map(|w| is_outer(l, w)).collect();
    let index = index_walls(bundle, chamber, &outer)?;
    let functionals: Vec<Vec<i128>> = chamber.walls.iter().map(|w| integral_ray(&l.functional(&w.v))).collect::<Result<_, _>>()?;
    let tags: Vec<(GeneratorTag, usize)> = index.walls.iter().map(|(t, w)| (*t, *w)).collect();
    let built: Vec<Result<Generator, AutError>> = tags
        .par_iter()
        .map(|&(tag, wall)| {
            let g = gamma(bundle, tag)?;
            verify_generator(bundle, chamber, &omega, wall, &g).map_err(|e| AutError::NoGenerator(format!("{tag}: {e}")))?;
            Ok(Generator {
                tag,
                wall,
                matrix: IMat::from_isometry(&g)?,
                degree: degree(bundle, &g),
                isometry: g,
            })
        })
        .collect();
    let mut generators = BTreeMap::new();
    let mut degrees: BTreeMap<u8, Vec<Rational>> = BTreeMap::new();
    for g in built {
        let g = g?;
        let ds = degrees.entry(g.tag.family()).or_default();
        if !ds.contains(&g.degree) {
            ds.push(g.degree.clone());
        }
        generators.insert(g.tag, g);
    }
    let n_outer = outer.iter().filter(|&&o| o).count();
    let report = GeneratorReport {
        walls: chamber.walls.len(),
        outer_walls: n_outer,
        inner_walls: chamber.walls.len() - n_outer,
        chamber_group_order: group.len(),
        aut_d0_order: aut,
        generators: generators.len(),
        degrees,
    };
    if report.generators != report.inner_walls {
        return Err(AutError::NoGenerator(format!(
            "{} generators for {} inner walls",
            report.generators, report.inner_walls
        )));
    }
    let mut b = Borcherds {
        bundle: bundle.clone(),
        chamber: chamber.clone(),
        outer,
        index,
        group,
        generators,
        functionals,
        partner: Vec::new(),
        report,
    };
    b.partner = b.compute_partners()?;
    Ok(b)
}

/// Checks that `g` is an `O^ω` isometry carrying `D₀` onto the chamber
/// adjacent across wall `idx`.
pub fn verify_generator(b: &K3Bundle, ch: &Chamber, omega: &OmegaTest, idx: usize, g: &Isometry) -> Result<(), String> {
    let l = &b.s;
    if !l.is_isometry(g) {
        return Err("does not preserve the form".into());
    }
    if !omega.contains(g) {
        return Err("not in O(S)^ω".into());
    }
    let (q, p) = beyond_wall(b, ch, idx);
    let ginv = g.inverse();
    if !ch.contains(l, &ginv.apply(&q)) {
        return Err("wall point leaves the chamber".into());
    }
    if !ch.interior(l, &ginv.apply(&p)) {
        return Err("image chamber is not adjacent across the wall".into());
    }
    Ok(())
}

/// A relative-interior point `q` of wall `idx` and a point `p` just beyond it,
/// on the far side of no other wall.
pub fn beyond_wall(b: &K3Bundle, ch: &Chamber, idx: usize) -> (QVector, QVector) {
    let l = &b.s;
    let (q, dir) = wall_points(l, ch, idx, &b.alpha);
    let mut s = rat_int(1);
    for (k, w) in ch.walls.iter().enumerate() {
        if k == idx {
            continue;
        }
        let wd = l.pair(&w.v, &dir);
        if wd.is_negative() {
            let lim = -l.pair(&w.v, &q) / &wd;
            if lim < s {
                s = lim;
            }
        }
    }
    s /= rat_int(2);
    let p = vec_add(&q, &vec_scale(&s, &dir));
    (q, p)
}

/// One simple chamber loop around a codimension-2 face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopResult {
    Inner { word: Word, walls: Vec<usize> },
    Outer,
}

/// A face together with its relation.
#[derive(Clone, Debug)]
pub struct FaceRelation {
    pub face: (usize, usize),
    pub word: Word,
}

#[derive(Clone, Debug)]
pub struct FaceOrbit {
    /// Sorted faces of the orbit; the first is the representative.
    pub faces: Vec<(usize, usize)>,
    pub word: Word,
}

/// Generators with the relations ℛ₁ and ℛ₂.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: Vec<GeneratorTag>,
    /// Pairs `(w, w′)` with `g_w g_{w′} = 1`, `w ≤ w′`.
    pub r1: Vec<(GeneratorTag, GeneratorTag)>,
    pub r2: Vec<FaceRelation>,
    pub orbits: Vec<FaceOrbit>,
    pub total_faces: usize,
}

impl Presentation {
    /// Finitely presented group in plain text: a generator line, then one
    /// relator per line.
    pub fn to_gap(&self) -> String {
        let mut out = String::new();
        let names: Vec<String> = self.generators.iter().map(|t| t.to_string()).collect();
        out.push_str(&format!("generators: {}\n", names.join(" ")));
        for (a, b) in &self.r1 {
            out.push_str(&format!("{a} {b}\n"));
        }
        for r in &self.r2 {
            out.push_str(&r.word.to_gap());
            out.push('\n');
        }
        out
    }
}

pub const LOOP_LIMIT: usize = 1000;
pub const WORDIFY_ATTEMPTS: usize = 32;
pub const WORDIFY_LIMIT: usize = 100_000;

impl Borcherds {
    pub fn generator(&self, tag: GeneratorTag) -> &Generator {
        &self.generators[&tag]
    }

    fn wall_tag(&self, w: usize) -> GeneratorTag {
        self.index.tags[w].expect("inner wall")
    }

    fn compute_partners(&self) -> Result<Vec<Option<usize>>, AutError> {
        let mut by_matrix: HashMap<&IMat, usize> = HashMap::new();
        for g in self.generators.values() {
            by_matrix.insert(&g.matrix, g.wall);
        }
        let mut partner = vec![None; self.chamber.walls.len()];
        for g in self.generators.values() {
            let inv = IMat::from_isometry(&g.isometry.inverse())?;
            let w = by_matrix
                .get(&inv)
                .ok_or_else(|| AutError::Relations(format!("{} has no inverse generator", g.tag)))?;
            partner[g.wall] = Some(*w);
        }
        Ok(partner)
    }

    /// ℛ₁: unordered pairs of generators multiplying to the identity.
    pub fn relations_r1(&self) -> Vec<(GeneratorTag, GeneratorTag)> {
        let mut out: Vec<(GeneratorTag, GeneratorTag)> = self
            .generators
            .values()
            .filter_map(|g| {
                let p = self.wall_tag(self.partner[g.wall].expect("inner wall"));
                (g.tag <= p).then_some((g.tag, p))
            })
            .collect();
        out.sort();
        out
    }

    /// Evaluates a word `(g_m, …, g_1)` to the matrix product `g_m ⋯ g_1`.
    pub fn evaluate(&self, word: &Word) -> Result<IMat, AutError> {
        let mut acc = IMat::identity(self.bundle.rank());
        for &(tag, e) in &word.0 {
            let g = self
                .generators
                .get(&tag)
                .ok_or_else(|| AutError::Relations(format!("unknown generator {tag}")))?;
            let m = if e > 0 {
                g.matrix.clone()
            } else {
                self.generators[&self.wall_tag(self.partner[g.wall].expect("inner"))].matrix.clone()
            };
            acc = acc.mul(&m)?;
        }
        Ok(acc)
    }

    fn vanishing(&self, z: &[i128]) -> Result<Vec<usize>, AutError> {
        let mut out = Vec::new();
        for (k, f) in self.functionals.iter().enumerate() {
            if dot_i(f, z)? == 0 {
                out.push(k);
            }
        }
        Ok(out)
    }

    /// The simple chamber loop around the face through `point` on walls
    /// `(w1, w2)`, starting across the first of the two walls.
    pub fn chamber_loop(&self, walls: (usize, usize), point: &[Rational]) -> Result<LoopResult, AutError> {
        let (w1, w2) = (walls.0.min(walls.1), walls.0.max(walls.1));
        if self.outer[w1] || self.outer[w2] {
            return Ok(LoopResult::Outer);
        }
        let n = self.bundle.rank();
        let mut z = integral_ray(point)?;
        let mut tau = IMat::identity(n);
        let mut seen: HashSet<IMat> = HashSet::new();
        let mut crossed: Vec<usize> = Vec::new();
        let mut e = w1;
        for _ in 0..LOOP_LIMIT {
            if self.outer[e] {
                return Ok(LoopResult::Outer);
            }
            crossed.push(e);
            let g = &self.generators[&self.wall_tag(e)];
            tau = g.matrix.mul(&tau)?;
            let back = self.partner[e].expect("inner wall");
            z = self.generators[&self.wall_tag(back)].matrix.apply(&z)?;
            if tau.is_identity() {
                let mut tags: Vec<(GeneratorTag, i8)> = crossed.iter().map(|&w| (self.wall_tag(w), 1)).collect();
                tags.reverse();
                return Ok(LoopResult::Inner {
                    word: Word(tags),
                    walls: crossed,
                });
            }
            if !seen.insert(tau.clone()) {
                return Err(AutError::Relations("chamber loop is not simple".into()));
            }
            let zs = self.vanishing(&z)?;
            if zs.len() != 2 || !zs.contains(&back) {
                return Err(AutError::Relations(format!("face meets {} walls of the chamber", zs.len())));
            }
            e = if zs[0] == back { zs[1] } else { zs[0] };
        }
        Err(AutError::LoopLimit(LOOP_LIMIT))
    }

    /// All codimension-2 faces of `D₀`.
    pub fn faces(&self) -> Vec<Face2> {
        faces_codim2(&self.bundle.s, &self.chamber, &self.group, &self.bundle.alpha)
    }

    /// ℛ₂ from the given faces, grouped into `O(S, D₀)`-orbits.
    pub fn relations_r2(&self, faces: &[Face2]) -> Result<Presentation, AutError> {
        let loops: Vec<Result<Option<FaceRelation>, AutError>> = faces
            .par_iter()
            .map(|f| {
                Ok(match self.chamber_loop(f.walls, &f.point)? {
                    LoopResult::Outer => None,
                    LoopResult::Inner { word, .. } => {
                        if !self.evaluate(&word)?.is_identity() {
                            return Err(AutError::Relations(format!("relation of face {:?} is not the identity", f.walls)));
                        }
                        Some(FaceRelation { face: f.walls, word })
                    }
                })
            })
            .collect();
        let mut r2 = Vec::new();
        for r in loops {
            if let Some(fr) = r? {
                r2.push(fr);
            }
        }
        let perms = wall_permutations(&self.chamber, &self.group);
        let index: BTreeMap<(usize, usize), usize> = r2.iter().enumerate().map(|(i, r)| (r.face, i)).collect();
        let face_perms: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                r2.iter()
                    .map(|r| {
                        let (a, b) = (p[r.face.0], p[r.face.1]);
                        index[&(a.min(b), a.max(b))]
                    })
                    .collect()
            })
            .collect();
        let orbits = perm_orbits(&face_perms, r2.len())
            .into_iter()
            .map(|o| FaceOrbit {
                faces: o.iter().map(|&i| r2[i].face).collect(),
                word: r2[o[0]].word.clone(),
            })
            .collect();
        let r1 = self.relations_r1();
        Ok(Presentation {
            generators: self.generators.keys().copied().collect(),
            r1,
            r2,
            orbits,
            total_faces: faces.len(),
        })
    }

    /// The face `w(t1) ∩ w(t2)` as a wall pair, if both tags index walls.
    pub fn face_of_tags(&self, t1: GeneratorTag, t2: GeneratorTag) -> Option<(usize, usize)> {
        let a = self.index.index_wall(t1)?;
        let b = self.index.index_wall(t2)?;
        Some((a.min(b), a.max(b)))
    }

    fn interior_integral(&self, x: &[i128]) -> Result<bool, AutError> {
        for f in &self.functionals {
            if dot_i(f, x)? <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Writes `g ∈ Aut(Y)` as a word `(g_m, …, g_1)` in the generators by
    /// following the segment from a generic interior point `α′` to `α′^g`
    /// through the chambers it crosses.
    pub fn wordify(&self, g: &IMat, seed: u64) -> Result<Word, AutError> {
        let iso = g.to_isometry();
        if !self.bundle.s.is_isometry(&iso) || !self.bundle.s.omega_test().contains(&iso) {
            return Err(AutError::NotAutomorphism("not an O(S)^ω isometry".into()));
        }
        let base = integral_ray(&self.bundle.alpha)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..WORDIFY_ATTEMPTS {
            let a: Vec<i128> = base.iter().map(|&x| x * 1024 + rng.gen_range(-8..=8)).collect();
            if !self.interior_integral(&a)? {
                continue;
            }
            if let Some(w) = self.walk_segment(&a, g)? {
                return Ok(w);
            }
        }
        Err(AutError::Degenerate(WORDIFY_ATTEMPTS))
    }

    /// Walks from `a` to `a·g`; `None` when the segment meets a face of
    /// codimension ≥ 2.
    fn walk_segment(&self, a: &[i128], g: &IMat) -> Result<Option<Word>, AutError> {
        let mut a = a.to_vec();
        let mut b = g.apply(&a)?;
        let mut crossed: Vec<usize> = Vec::new();
        let mut tau = IMat::identity(self.bundle.rank());
        for _ in 0..WORDIFY_LIMIT {
            // first exit wall: minimal t = fa/(fa − fb) over walls with fb < 0
            let mut best: Option<(i128, i128, usize)> = None;
            let mut tie = false;
            for (k, f) in self.functionals.iter().enumerate() {
                let fb = dot_i(f, &b)?;
                if fb >= 0 {
                    continue;
                }
                let fa = dot_i(f, &a)?;
                let (num, den) = (fa, fa - fb);
                match best {
                    None => best = Some((num, den, k)),
                    Some((bn, bd, _)) => {
                        let lhs = num.checked_mul(bd).ok_or(AutError::Overflow)?;
                        let rhs = bn.checked_mul(den).ok_or(AutError::Overflow)?;
                        if lhs < rhs {
                            best = Some((num, den, k));
                            tie = false;
                        } else if lhs == rhs {
                            tie = true;
                        }
                    }
                }
            }
            let Some((num, _, e)) = best else {
                if tau != *g {
                    return Err(AutError::NotAutomorphism("reaches a different chamber automorphism".into()));
                }
                let mut tags: Vec<(GeneratorTag, i8)> = crossed.iter().map(|&w| (self.wall_tag(w), 1)).collect();
                tags.reverse();
                return Ok(Some(Word(tags)));
            };
            if tie || num == 0 {
                return Ok(None);
            }
            if self.outer[e] {
                return Err(AutError::NotAutomorphism("segment crosses an outer wall".into()));
            }
            crossed.push(e);
            let gen = &self.generators[&self.wall_tag(e)];
            tau = gen.matrix.mul(&tau)?;
            let back = &self.generators[&self.wall_tag(self.partner[e].expect("inner"))].matrix;
            a = back.apply(&a)?;
            b = back.apply(&b)?;
        }
        Err(AutError::LoopLimit(WORDIFY_LIMIT))
    }

    /// Random word of the given length over the generators.
    pub fn random_word(&self, len: usize, rng: &mut impl Rng) -> Word {
        let tags: Vec<GeneratorTag> = self.generators.keys().copied().collect();
        Word(
            (0..len)
                .map(|_| (tags[rng.gen_range(0..tags.len())], if rng.gen_bool(0.5) { 1 } else { -1 }))
                .collect(),
        )
    }
}

/// `⟨α, α^{gⁿ}⟩` for `n = 1..=k`.
pub fn degree_sequence(b: &K3Bundle, g: &Isometry, k: usize) -> Vec<Rational> {
    let mut x = b.alpha.clone();
    (0..k)
        .map(|_| {
            x = g.apply(&x);
            b.s.pair(&b.alpha, &x)
        })
        .collect()
}

/// Check of one published word: its evaluation, whether it is an involution
/// in `O^ω`, and the re-decomposition found by [`Borcherds::wordify`].
#[derive(Clone, Debug)]
pub struct PentadCheck {
    pub word: Word,
    pub involution: bool,
    pub in_omega: bool,
    pub wordified: Option<Word>,
    pub round_trip: bool,
}

impl Borcherds {
    pub fn verify_pentad(&self, word: &Word, seed: u64) -> Result<PentadCheck, AutError> {
        let m = self.evaluate(word)?;
        let involution = m.mul(&m)?.is_identity() && !m.is_identity();
        let in_omega = self.bundle.s.omega_test().contains(&m.to_isometry());
        let wordified = self.wordify(&m, seed).ok();
        let round_trip = match &wordified {
            Some(w) => self.evaluate(w)? == m,
            None => false,
        };
        Ok(PentadCheck {
            word: word.clone(),
            involution,
            in_omega,
            wordified,
            round_trip,
        })
    }
}

/// Comparison of one reference face orbit with the computed presentation.
#[derive(Clone, Debug)]
pub struct OrbitMatch {
    pub face: Option<(usize, usize)>,
    pub expected_size: usize,
    pub computed_size: Option<usize>,
    pub reference_is_identity: bool,
    pub computed_word: Option<Word>,
    pub words_match: bool,
}

impl OrbitMatch {
    pub fn pass(&self) -> bool {
        self.computed_size == Some(self.expected_size) && self.reference_is_identity && self.words_match
    }
}

impl Borcherds {
    /// Rewrites inverse letters `g^{-1}` as the partner generator.
    pub fn positive_form(&self, w: &Word) -> Word {
        Word(
            w.0.iter()
                .map(|&(t, e)| {
                    if e > 0 {
                        (t, 1)
                    } else {
                        (self.wall_tag(self.partner[self.generators[&t].wall].expect("inner")), 1)
                    }
                })
                .collect(),
        )
    }

    /// Relation words equal up to cyclic rotation and inversion.
    pub fn same_relation(&self, a: &Word, b: &Word) -> bool {
        let a = self.positive_form(a);
        let b = self.positive_form(b);
        a.cyclically_equivalent(&b) || a.cyclically_equivalent(&self.positive_form(&b.inverse()))
    }

    /// Locates each reference face `w(t₁) ∩ w(t₂)`, its orbit and its loop
    /// relation, and compares them with the reference orbit size and word.
    pub fn match_face_orbits(&self, pres: &Presentation, reference: &[(GeneratorTag, GeneratorTag, usize, Word)]) -> Result<Vec<OrbitMatch>, AutError> {
        let by_face: HashMap<(usize, usize), &FaceRelation> = pres.r2.iter().map(|r| (r.face, r)).collect();
        let mut out = Vec::new();
        for (t1, t2, size, word) in reference {
            let face = self.face_of_tags(*t1, *t2);
            let rel = face.and_then(|f| by_face.get(&f));
            let computed_size = face.and_then(|f| pres.orbits.iter().find(|o| o.faces.contains(&f)).map(|o| o.faces.len()));
            let reference_is_identity = self.evaluate(word)?.is_identity();
            let words_match = rel.is_some_and(|r| self.same_relation(&r.word, word));
            out.push(OrbitMatch {
                face,
                expected_size: *size,
                computed_size,
                reference_is_identity,
                computed_word: rel.map(|r| r.word.clone()),
                words_match,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn m(n: usize, v: &[i128]) -> IMat {
        IMat { n, data: v.to_vec() }
    }

    #[test]
    fn imat_product_and_action() {
        let a = m(2, &[1, 1, 0, 1]);
        let b = m(2, &[2, 0, 1, 1]);
        assert_eq!(a.mul(&b).unwrap(), m(2, &[3, 1, 1, 1]));
        assert_eq!(a.apply(&[1, 2]).unwrap(), vec![1, 3]);
        // (x·A)·B = x·(A·B)
        let x = [3, -5];
        assert_eq!(b.apply(&a.apply(&x).unwrap()).unwrap(), a.mul(&b).unwrap().apply(&x).unwrap());
        assert!(IMat::identity(3).is_identity());
        assert!(!a.is_identity());
    }

    #[test]
    fn imat_overflow_is_reported() {
        let big = m(1, &[i128::MAX / 2 + 1]);
        assert!(matches!(big.mul(&m(1, &[2])), Err(AutError::Overflow)));
    }

    #[test]
    fn imat_isometry_round_trip() {
        let a = m(2, &[0, 1, 1, 0]);
        assert_eq!(IMat::from_isometry(&a.to_isometry()).unwrap(), a);
    }

    #[test]
    fn order_exponents() {
        assert_eq!(totient(12), 4);
        assert_eq!(totient(17), 16);
        assert_eq!(finite_order_exponent(2), Int::from(12));
        assert_eq!(finite_order_exponent(16), Int::from(24_504_480u64));
    }

    #[test]
    fn order_classes() {
        let iso = |v: &[i64]| m(2, &v.iter().map(|&x| x as i128).collect::<Vec<_>>()).to_isometry();
        // rotation of order 4, a hyperbolic and a parabolic element
        assert_eq!(order_class(&iso(&[0, 1, -1, 0])), Some(OrderClass::Finite));
        assert_eq!(order_class(&iso(&[2, 1, 1, 1])), Some(OrderClass::Infinite));
        assert_eq!(order_class(&iso(&[1, 1, 0, 1])), Some(OrderClass::Infinite));
        assert_eq!(order_class(&iso(&[1, 0, 0, 1])), Some(OrderClass::Finite));
    }

    #[test]
    fn integral_rays_are_primitive() {
        assert_eq!(integral_ray(&[rat(2, 3), rat(-4, 9), rat_int(0)]).unwrap(), vec![3, -2, 0]);
        assert_eq!(integral_ray(&[rat_int(0), rat_int(0)]).unwrap(), vec![0, 0]);
        assert_eq!(dot_i(&[1, 2], &[3, -4]).unwrap(), -5);
    }
}

/// Order class of an integral isometry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderClass {
    Finite,
    Infinite,
}

fn totient(m: u64) -> u64 {
    let (mut n, mut phi, mut p) = (m, m, 2);
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// `lcm{m : φ(m) ≤ n}`; every finite-order element of `GL_n(ℤ)` has order
/// dividing it.
pub fn finite_order_exponent(n: usize) -> Int {
    let n = n as u64;
    // φ(m) ≥ √(m/2), so φ(m) ≤ n forces m ≤ 2n²
    (1..=2 * n * n + 2)
        .filter(|&m| totient(m) <= n)
        .fold(Int::from(1), |acc, m| num_integer::Integer::lcm(&acc, &Int::from(m)))
}

/// Bit size above which powers are abandoned as undecided.
const ORDER_BITS: u64 = 4096;

/// Decides whether `g` has finite order: a power with trace of absolute value
/// above the rank certifies infinite order, and otherwise `g^L` is compared
/// with the identity for the exponent `L` of [`finite_order_exponent`].
/// `None` if the entries of the powers grow beyond the working size.
pub fn order_class(g: &Isometry) -> Option<OrderClass> {
    let n = g.matrix.nrows();
    let rank = Int::from(n);
    let mut p = g.clone();
    for _ in 0..64 {
        let tr: Int = (0..n).map(|i| p.matrix[(i, i)].clone()).sum();
        if tr.abs() > rank {
            return Some(OrderClass::Infinite);
        }
        p = p.then(g);
    }
    let e = finite_order_exponent(n);
    let mut acc = Isometry::identity(n);
    let mut base = g.clone();
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            acc = acc.then(&base);
        }
        if i + 1 < bits {
            base = base.then(&base);
        }
        let big = |m: &Isometry| m.matrix.data().iter().any(|x| x.bits() > ORDER_BITS);
        if big(&acc) || big(&base) {
            return None;
        }
    }
    Some(if acc.is_identity() { OrderClass::Finite } else { OrderClass::Infinite })
}
