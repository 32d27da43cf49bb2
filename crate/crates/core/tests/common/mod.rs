//! Shared fixtures and property checks for the integration tests.

#![allow(dead_code)]

use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use weylwalk::autgrp::{run_borcherds, Borcherds};
use weylwalk::chambers::{adjacent_weyl, compute_walls, isometries_between, wall_points, Chamber};
use weylwalk::enumerate::enum_negdef;
use weylwalk::exactalg::{cone_separator, in_cone, rat_int, solve_linear, Int, QMatrix, Rational, ZMatrix};
use weylwalk::fixtures::{build_s15, build_s16, K3Bundle};
use weylwalk::lattice::{Isometry, Lattice, QVector};
use weylwalk::leech::standard;

pub struct Fixture {
    pub bundle: K3Bundle,
    pub chamber: Chamber,
    pub group: Vec<Isometry>,
}

fn fixture(b: K3Bundle) -> Fixture {
    let chamber = compute_walls(&b, &standard().w0()).expect("walls");
    let group = isometries_between(&b.s, &chamber, &chamber);
    Fixture { bundle: b, chamber, group }
}

pub fn s16() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| fixture(build_s16().expect("S16")))
}

pub fn s15() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| fixture(build_s15(&build_s16().expect("S16")).expect("S15")))
}

pub fn borcherds() -> &'static Borcherds {
    static B: OnceLock<Borcherds> = OnceLock::new();
    B.get_or_init(|| {
        let f = s15();
        run_borcherds(&f.bundle, &f.chamber).expect("generators")
    })
}

/// Negative-definite Gram matrix `−(c·I + B)` with `c` above the Gershgorin
/// radius of the symmetric integer matrix `B`.
pub fn definite_gram(n: usize, off: &[i64], extra: i64) -> (Lattice, i64) {
    let mut g = vec![vec![0i64; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            g[i][j] = off[k % off.len()];
            g[j][i] = g[i][j];
            k += 1;
        }
    }
    let radius = (0..n).map(|i| g[i].iter().map(|x| x.abs()).sum::<i64>()).max().unwrap_or(0);
    let c = radius + 1 + extra;
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = c;
    }
    let neg: Vec<Vec<i64>> = g.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let lambda = c - radius;
    (Lattice::from_i64("random", &neg).expect("nondegenerate"), lambda)
}

fn box_points(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for x in -r..=r {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Fincke–Pohst enumeration of a norm shell agrees with a search over a box
/// containing the whole ellipsoid.
pub fn check_enumeration_vs_box(n: usize, off: &[i64], extra: i64, a: i64) -> Result<(), String> {
    let (l, lambda) = definite_gram(n, off, extra);
    let a_q = rat_int(-a);
    let got = enum_negdef(&l, &a_q).map_err(|e| e.to_string())?;
    // |x|² · λ ≤ −⟨x,x⟩ = a
    let r = ((a as f64 / lambda as f64).sqrt().floor() as i64) + 1;
    let mut want: Vec<QVector> = box_points(n, r)
        .into_iter()
        .map(|p| p.into_iter().map(rat_int).collect::<QVector>())
        .filter(|v| l.norm(v) == a_q)
        .collect();
    want.sort();
    if got != want {
        return Err(format!("enumeration found {} vectors, box search {}", got.len(), want.len()));
    }
    Ok(())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Cone membership by basic solutions: `t ∈ cone(G)` iff `t` is a
/// non-negative combination of a linearly independent subset of `G`.
pub fn in_cone_by_vertices(t: &[Rational], gens: &[Vec<Rational>]) -> bool {
    if t.iter().all(|x| x.is_zero()) {
        return true;
    }
    let d = t.len();
    for k in 1..=d.min(gens.len()) {
        for s in subsets(gens.len(), k) {
            let rows: Vec<Vec<Rational>> = s.iter().map(|&i| gens[i].clone()).collect();
            let m = QMatrix::from_rows(&rows);
            if m.rank() < k {
                continue;
            }
            if let Some((x, _)) = solve_linear(&m.transpose(), t) {
                if x.iter().all(|c| !c.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

/// The simplex-based cone test agrees with basic-solution enumeration, and
/// its separating functional is a valid certificate.
pub fn check_lp_vs_vertices(t: &[i64], gens: &[Vec<i64>]) -> Result<(), String> {
    let tq: QVector = t.iter().map(|&x| rat_int(x)).collect();
    let gq: Vec<QVector> = gens.iter().map(|g| g.iter().map(|&x| rat_int(x)).collect()).collect();
    let lp = in_cone(&tq, &gq);
    let brute = in_cone_by_vertices(&tq, &gq);
    if lp != brute {
        return Err(format!("simplex says {lp}, vertex enumeration says {brute}"));
    }
    if let Some(y) = cone_separator(&tq, &gq) {
        let dot = |a: &[Rational], b: &[Rational]| a.iter().zip(b).map(|(x, y)| x * y).sum::<Rational>();
        if !dot(&y, &tq).is_positive() || gq.iter().any(|g| dot(&y, g).is_positive()) {
            return Err("invalid separating functional".into());
        }
    }
    Ok(())
}

/// A product of chamber automorphisms of `S₁₆` preserves the Gram matrix
/// and permutes the walls.
pub fn check_isometry_product(idx: &[usize]) -> Result<(), String> {
    let f = s16();
    let n = f.bundle.rank();
    let mut g = Isometry::identity(n);
    for &i in idx {
        g = g.then(&f.group[i % f.group.len()]);
    }
    let m: &ZMatrix = &g.matrix;
    if m.matmul(f.bundle.s.gram()).matmul(&m.transpose()) != *f.bundle.s.gram() {
        return Err("Gram matrix not preserved".into());
    }
    let walls = f.chamber.wall_set();
    if f.chamber.walls.iter().any(|w| !walls.contains(&g.apply(&w.v))) {
        return Err("walls not permuted".into());
    }
    Ok(())
}

/// Crossing a wall of `D₀` and crossing back across the same hyperplane
/// returns to `D₀`.
pub fn check_adjacency_involutive(f: &Fixture, wall: usize) -> Result<(), String> {
    let b = &f.bundle;
    let w = wall % f.chamber.walls.len();
    let w1 = adjacent_weyl(b, &f.chamber, w, &b.alpha).map_err(|e| e.to_string())?;
    let c1 = compute_walls(b, &w1).map_err(|e| e.to_string())?;
    let v = &f.chamber.walls[w].v;
    let minus: QVector = v.iter().map(|x| -x.clone()).collect();
    let back = c1.walls.iter().position(|x| x.v == minus).ok_or("adjacent chamber lacks the shared wall")?;
    let interior = interior_point(f, w, &c1).ok_or("no interior point of the adjacent chamber")?;
    let w2 = adjacent_weyl(b, &c1, back, &interior).map_err(|e| e.to_string())?;
    let c2 = compute_walls(b, &w2).map_err(|e| e.to_string())?;
    if c2.wall_set() != f.chamber.wall_set() {
        return Err("crossing back does not return to D0".into());
    }
    Ok(())
}

/// A point just beyond wall `w` of `D₀`, inside the adjacent chamber `c`.
fn interior_point(f: &Fixture, w: usize, c: &Chamber) -> Option<QVector> {
    let l = &f.bundle.s;
    let (q, dir) = wall_points(l, &f.chamber, w, &f.bundle.alpha);
    let mut eps = rat_int(1);
    for _ in 0..60 {
        let p: QVector = q.iter().zip(&dir).map(|(a, b)| a + &eps * b).collect();
        if c.interior(l, &p) && l.norm(&p).is_positive() {
            return Some(p);
        }
        eps /= rat_int(2);
    }
    None
}

pub fn int(x: i64) -> Int {
    Int::from(x)
}
