mod common;

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use weylwalk::enumerate::Bound;
use weylwalk::exactalg::{rat, rat_int, Int};
use weylwalk::fixtures::{build_s15, build_s16, complement_root_type};
use weylwalk::golden::golden;
use weylwalk::k3::rational_curves_up_to;
use weylwalk::lattice::QVector;
use weylwalk::leech::standard;

/// The minimal vectors split by shape in `ℤ^Ω` coordinates (scaled by √8):
/// `(±2⁸)`, `(∓3, ±1²³)` and `(±4², 0²²)`, with 97152 + 98304 + 1104 = 196560.
#[test]
fn minimal_vectors_by_shape() {
    let u = standard();
    let zero = vec![rat_int(0); 24];
    let mut shapes = [0usize; 3];
    u.leech.enumerator().for_each(&zero, &rat_int(4), Bound::Eq, |c| {
        let w = u.leech.to_omega(c);
        let abs: Vec<Int> = w.iter().map(|x| x.abs()).collect();
        let count = |k: i64| abs.iter().filter(|x| **x == Int::from(k)).count();
        if count(2) == 8 && count(0) == 16 {
            shapes[0] += 1;
        } else if count(3) == 1 && count(1) == 23 {
            shapes[1] += 1;
        } else if count(4) == 2 && count(0) == 22 {
            shapes[2] += 1;
        } else {
            panic!("unexpected shape {w:?}");
        }
    });
    assert_eq!(shapes, [759 * 128, 24 * 4096, 276 * 4]);
    assert_eq!(shapes.iter().sum::<usize>(), golden().leech.norm_minus4);
}

#[test]
fn leech_has_no_roots() {
    let u = standard();
    let zero = vec![rat_int(0); 24];
    assert_eq!(u.leech.enumerator().count(&zero, &rat_int(2), Bound::Le), 1);
    assert_eq!(u.leech.lattice.signature(), (0, 24));
    assert!(u.leech.lattice.is_even());
}

#[test]
fn fixture_invariants() {
    let g = golden();
    let b16 = build_s16().unwrap();
    let b15 = build_s15(&b16).unwrap();
    for (b, f) in [(&b16, &g.s16), (&b15, &g.s15)] {
        assert_eq!(b.rank(), f.rank);
        assert_eq!(b.s.signature(), (1, f.rank - 1));
        assert_eq!(b.s.discriminant_group().describe(), f.discriminant);
        assert_eq!(b.complement.source.rank() + b.rank(), 26);
        assert_eq!(complement_root_type(b).to_string(), f.complement_roots);
        assert_eq!(b.s.norm(&b.alpha), f.alpha_norm);
        // discriminant orders agree for S and its orthogonal complement
        assert_eq!(b.s.discriminant_group().order(), b.complement.source.discriminant_group().order());
    }
    assert_eq!(b16.s.norm(&b16.alpha), rat_int(8));
    assert_eq!(b15.s.norm(&b15.alpha), rat(17, 2));
}

/// Degree-1 curves on the Kummer fixture are exactly the sixteen nodes and
/// sixteen tropes.
#[test]
fn lines_are_nodes_and_tropes() {
    let b = build_s16().unwrap();
    let curves = rational_curves_up_to(&b, &rat_int(2)).unwrap();
    let lines: BTreeSet<QVector> = curves[&rat_int(1)].iter().cloned().collect();
    let named: BTreeSet<QVector> = b
        .classes
        .iter()
        .filter(|(k, _)| k.starts_with('N') || k.starts_with('T'))
        .map(|(_, v)| v.clone())
        .collect();
    assert_eq!(named.len(), 32);
    assert_eq!(lines, named);
    assert!(curves.get(&rat_int(2)).is_none_or(|v| v.is_empty()));
    assert!(lines.iter().all(|c| b.s.norm(c) == rat_int(-2) && !b.s.pair(c, &b.alpha).is_zero()));
}
