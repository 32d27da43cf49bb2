mod common;

use std::collections::BTreeSet;

use weylwalk::chambers::{is_outer, perm_orbits, wall_permutations};
use weylwalk::exactalg::rat_int;
use weylwalk::golden::golden;
use weylwalk::lattice::QVector;

#[test]
fn d16_walls_and_group() {
    let f = common::s16();
    let g = &golden().s16;
    assert_eq!(f.chamber.walls.len(), g.walls);
    assert_eq!(f.group.len(), g.chamber_group_order);
    let perms = wall_permutations(&f.chamber, &f.group);
    let mut sizes: Vec<usize> = perm_orbits(&perms, f.chamber.walls.len()).iter().map(|o| o.len()).collect();
    sizes.sort();
    assert_eq!(sizes, g.wall_orbit_sizes());
    // every chamber automorphism fixes the projected Weyl vector
    assert!(f.group.iter().all(|x| x.apply(&f.bundle.alpha) == f.bundle.alpha));
}

/// The outer walls of `D₁₆` are the walls of the 32 lines `Nᵢ`, `Tᵢ`.
#[test]
fn d16_outer_walls_are_lines() {
    let f = common::s16();
    let l = &f.bundle.s;
    let outer: BTreeSet<QVector> = f.chamber.walls.iter().filter(|w| is_outer(l, w)).map(|w| w.v.clone()).collect();
    let lines: BTreeSet<QVector> = f
        .bundle
        .classes
        .iter()
        .filter(|(k, _)| k.starts_with('N') || k.starts_with('T'))
        .map(|(_, v)| v.clone())
        .collect();
    assert_eq!(outer, lines);
    assert!(f.chamber.walls.iter().all(|w| w.n == l.norm(&w.v) && w.a == l.pair(&w.v, &f.bundle.alpha)));
}

#[test]
fn walls_are_irredundant_and_face_outward() {
    let f = common::s16();
    let l = &f.bundle.s;
    assert!(f.chamber.interior(l, &f.bundle.alpha));
    assert!(f.chamber.walls.iter().all(|w| w.n < rat_int(0)));
    let vs: Vec<QVector> = f.chamber.walls.iter().map(|w| w.v.clone()).collect();
    assert_eq!(weylwalk::chambers::irredundant(l, &vs).len(), vs.len());
}

#[test]
fn d15_walls() {
    let f = common::s15();
    let g = &golden().s15;
    assert_eq!(f.chamber.walls.len(), g.walls);
    assert_eq!(f.group.len(), g.chamber_group_order);
    let outer = f.chamber.walls.iter().filter(|w| is_outer(&f.bundle.s, w)).count();
    assert_eq!(outer, g.wall_orbits.iter().filter(|o| o.outer).map(|o| o.size).sum::<usize>());
}
