//! Group-engine and shift-space examples, checked against brute-force
//! oracles that only use the group's multiplication.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use cocycle_core::shift::enumerate_patterns;
use cocycle_core::{
    parse_group, Alphabet, CayleyExplorer, Configuration, Element, Error, Lattice, Path,
    SharedGroup,
};

fn explorer(spec: &str) -> CayleyExplorer {
    CayleyExplorer::new(parse_group(spec).unwrap()).unwrap()
}

fn v(c: &[i64]) -> Element {
    Lattice::vector(c)
}

/// Norms of every element up to `r`, by a BFS that never looks at the explorer.
fn brute_norms(g: &SharedGroup, r: u32) -> BTreeMap<Element, u32> {
    let mut seen = BTreeMap::from([(g.identity(), 0)]);
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(e) = queue.pop_front() {
        let n = seen[&e];
        if n == r {
            continue;
        }
        for s in g.generators() {
            let f = g.multiply(&e, s);
            if !seen.contains_key(&f) {
                seen.insert(f.clone(), n + 1);
                queue.push_back(f);
            }
        }
    }
    seen
}

/// (unbounded, bounded, largest norm in bounded components or B(r)).
fn brute_components(g: &SharedGroup, r: u32, cutoff: u32) -> (usize, usize, u32) {
    let norms = brute_norms(g, cutoff);
    let mut left: BTreeSet<Element> = norms
        .iter()
        .filter(|(_, &n)| n > r)
        .map(|(e, _)| e.clone())
        .collect();
    let (mut unbounded, mut bounded, mut n_of_r) = (0, 0, r);
    while let Some(start) = left.pop_first() {
        let mut comp = vec![start.clone()];
        let mut queue = VecDeque::from([start]);
        while let Some(e) = queue.pop_front() {
            for s in g.generators() {
                let f = g.multiply(&e, s);
                if left.remove(&f) {
                    comp.push(f.clone());
                    queue.push_back(f);
                }
            }
        }
        if comp.iter().any(|e| norms[e] == cutoff) {
            unbounded += 1;
        } else {
            bounded += 1;
            n_of_r = n_of_r.max(comp.iter().map(|e| norms[e]).max().unwrap());
        }
    }
    (unbounded, bounded, n_of_r)
}

#[test]
fn word_norm_examples() {
    let z2 = explorer("Z^2");
    assert_eq!(z2.word_norm(&v(&[3, -4])).unwrap(), 7);
    assert_eq!(z2.word_norm(&v(&[0, 0])).unwrap(), 0);
    let f2 = explorer("F(2)");
    let g = f2.oracle().clone();
    let (a, b) = (g.generators()[0].clone(), g.generators()[1].clone());
    let aba_inv = g.multiply(&g.multiply(&a, &b), &g.inverse(&a));
    assert_eq!(f2.word_norm(&aba_inv).unwrap(), 3);
    // a a^-1 reduces to the identity.
    assert_eq!(f2.word_norm(&g.multiply(&a, &g.inverse(&a))).unwrap(), 0);
}

#[test]
fn ball_sizes_match_brute_force() {
    for (spec, r_max) in [
        ("Z^2", 6),
        ("F(2)", 5),
        ("Z^1 x C(2)", 6),
        ("S(3) x Z^1", 5),
        ("Z^3", 4),
    ] {
        let ex = explorer(spec);
        let norms = brute_norms(ex.oracle(), r_max);
        for r in 0..=r_max {
            let expected = norms.values().filter(|&&n| n <= r).count();
            assert_eq!(ex.ball(r).unwrap().len(), expected, "{spec} B({r})");
        }
    }
    let z2 = explorer("Z^2");
    for r in 0..=6u32 {
        assert_eq!(z2.ball(r).unwrap().len() as u32, 2 * r * r + 2 * r + 1);
    }
    assert_eq!(explorer("F(2)").ball(2).unwrap().len(), 17);
}

#[test]
fn geodesic_segment_is_lexicographically_first() {
    let ex = explorer("Z^2");
    let g = ex.oracle().clone();
    let target = v(&[2, 1]);
    // Oracle: the first length-3 word in generator order that reaches (2,1).
    let n = g.generators().len();
    let first = (0..n.pow(3))
        .map(|i| vec![i / (n * n), (i / n) % n, i % n])
        .find(|w| g.word_product(w) == target)
        .unwrap();
    let expected: Vec<Element> = (0..=3).map(|k| g.word_product(&first[..k])).collect();
    let path = ex.geodesic_segment(&target).unwrap();
    assert_eq!(path.vertices(), &expected[..]);
    assert_eq!(
        path.vertices(),
        &[v(&[0, 0]), v(&[1, 0]), v(&[2, 0]), v(&[2, 1])]
    );
}

#[test]
fn biinfinite_geodesics() {
    let z = explorer("Z^1");
    let path = z.extend_biinfinite_geodesic(3).unwrap();
    let coords: Vec<i64> = (-3..=3)
        .map(|k| match path.get(k).unwrap() {
            Element::Lattice(c) => c[0],
            _ => unreachable!(),
        })
        .collect();
    assert!(coords == [-3, -2, -1, 0, 1, 2, 3] || coords == [3, 2, 1, 0, -1, -2, -3]);

    let z2 = explorer("Z^2");
    let long = z2.extend_biinfinite_geodesic(3).unwrap();
    assert!(z2.is_geodesic(&long).unwrap());
    assert_eq!(
        long.restrict(-2, 2).unwrap(),
        z2.extend_biinfinite_geodesic(2).unwrap()
    );
}

#[test]
fn neighborhoods() {
    let ex = explorer("Z^2");
    let t = vec![v(&[0, 0]), v(&[3, 1])];
    let same: BTreeSet<Element> = ex.l_neighborhood(&t, 0).unwrap().into_iter().collect();
    assert_eq!(same, t.iter().cloned().collect());
    assert_eq!(ex.l_neighborhood(&[v(&[0, 0])], 1).unwrap().len(), 5);
    assert_eq!(ex.l_neighborhood(&[v(&[0, 0])], 2).unwrap().len(), 13);
    // Two points at distance 2 share the midpoint region.
    assert_eq!(
        ex.l_neighborhood(&[v(&[0, 0]), v(&[2, 0])], 1)
            .unwrap()
            .len(),
        9
    );
}

fn axis_path(n: i64) -> Path {
    Path::new(-n, (-n..=n).map(|k| v(&[k, 0])).collect())
}

#[test]
fn half_geodesic_intersection() {
    let ex = explorer("Z^2");
    let check = ex
        .half_geodesic_intersection_check(&axis_path(8), 2)
        .unwrap();
    assert!(check.holds);
    assert!(check.witness.is_none());
    assert!(check
        .intersection
        .iter()
        .all(|g| ex.word_norm(g).unwrap() <= 6));

    let zero = ex
        .half_geodesic_intersection_check(&axis_path(8), 0)
        .unwrap();
    assert_eq!(zero.intersection, vec![v(&[0, 0])]);

    // A folded path: the backward half runs parallel to the forward one.
    let mut verts: Vec<Element> = (1..=8).rev().map(|k| v(&[k - 1, 1])).collect();
    verts.push(v(&[0, 0]));
    verts.extend((1..=8).map(|k| v(&[k, 0])));
    let folded = Path::new(-8, verts);
    let bad = ex.half_geodesic_intersection_check(&folded, 1).unwrap();
    assert!(!bad.holds);
    assert!(ex.word_norm(bad.witness.as_ref().unwrap()).unwrap() > 3);

    assert!(matches!(
        ex.half_geodesic_intersection_check(&axis_path(1), 2),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn component_reports_match_brute_force() {
    for (spec, radii) in [
        ("Z^1", &[0, 1, 2, 3][..]),
        ("Z^2", &[0, 1, 2, 3][..]),
        ("F(2)", &[0, 1, 2][..]),
        ("Z^1 x C(2)", &[0, 1, 2, 3][..]),
        ("Z^1 x C(4)", &[0, 1, 2][..]),
        ("S(3) x Z^1", &[0, 1, 2][..]),
    ] {
        let ex = explorer(spec);
        for &r in radii {
            let cutoff = 2 * r + 4;
            let rep = ex.component_report(r, cutoff).unwrap();
            let (u, b, n) = brute_components(ex.oracle(), r, cutoff);
            assert_eq!(
                (rep.unbounded_components, rep.bounded_components, rep.n_of_r),
                (u, b, n),
                "{spec} r={r}"
            );
            assert_eq!(!rep.bounded_elements.is_empty(), b > 0);
        }
    }

    let z = explorer("Z^1").component_report(2, 10).unwrap();
    assert_eq!(
        (z.unbounded_components, z.bounded_components, z.n_of_r),
        (2, 0, 2)
    );
    let z2 = explorer("Z^2").component_report(3, 12).unwrap();
    assert_eq!(
        (z2.unbounded_components, z2.bounded_components, z2.n_of_r),
        (1, 0, 3)
    );
    assert!(!z2.caveat);
    // Tree: 4 branches at the identity, each splitting into 3 at norm 1.
    let f2 = explorer("F(2)");
    assert_eq!(f2.component_report(0, 4).unwrap().unbounded_components, 4);
    assert_eq!(f2.component_report(1, 6).unwrap().unbounded_components, 12);
    assert_eq!(f2.component_report(2, 8).unwrap().unbounded_components, 36);
}

#[test]
fn finite_groups_have_no_unbounded_components() {
    let ex = explorer("S(3)");
    let rep = ex.component_report(0, 5).unwrap();
    assert_eq!(rep.unbounded_components, 0);
    assert_eq!(rep.bounded_components, 1);
    assert_eq!(rep.n_of_r, 3);
}

#[test]
fn avoiding_paths() {
    let z2 = explorer("Z^2");
    let path = z2
        .path_avoiding_ball(&v(&[5, 0]), &v(&[0, 5]), 3, 10)
        .unwrap()
        .expect("Z^2 is one-ended");
    assert!(z2.is_path(&path).unwrap());
    assert_eq!(path.vertices().first().unwrap(), &v(&[5, 0]));
    assert_eq!(path.vertices().last().unwrap(), &v(&[0, 5]));
    assert!(path
        .vertices()
        .iter()
        .all(|g| z2.word_norm(g).unwrap() >= 4));

    let z = explorer("Z^1");
    assert_eq!(
        z.path_avoiding_ball(&v(&[5]), &v(&[-5]), 2, 12).unwrap(),
        None
    );
    let single = z
        .path_avoiding_ball(&v(&[5]), &v(&[5]), 2, 12)
        .unwrap()
        .unwrap();
    assert_eq!(single.vertices(), &[v(&[5])]);
}

#[test]
fn shift_examples() {
    let ex = explorer("Z^1");
    let g = ex.oracle().clone();
    let a = Alphabet::binary();
    let x = Configuration::new(0, [(v(&[0]), 1)]);
    assert_eq!(x.shift(&g, &v(&[1])), Configuration::new(0, [(v(&[1]), 1)]));
    assert_eq!(x.support_norm(&ex, &a).unwrap(), 0);
    assert_eq!(
        Configuration::new(0, [(v(&[-3]), 1)])
            .support_norm(&ex, &a)
            .unwrap(),
        3
    );
    assert!(matches!(
        Configuration::constant(1).support_norm(&ex, &a),
        Err(Error::NotInDelta(_))
    ));

    let y = Configuration::new(0, [(v(&[1]), 1), (v(&[-3]), 1)]);
    assert_eq!(
        y.truncate(2, &ex, &a).unwrap(),
        Configuration::new(0, [(v(&[1]), 1)])
    );
    assert_eq!(y.truncate(5, &ex, &a).unwrap(), y);

    let z2 = explorer("Z^2");
    let b1 = z2.ball(1).unwrap();
    let zero = Configuration::zero(&a).restrict(&b1);
    assert_eq!(zero.values(), &[0; 5]);

    let patterns: BTreeSet<Vec<u8>> = enumerate_patterns(&a, &b1, 1 << 16)
        .unwrap()
        .map(|p| p.values().to_vec())
        .collect();
    assert_eq!(patterns.len(), 32);
    let unary = Alphabet::new(&["0"], "0").unwrap();
    assert_eq!(enumerate_patterns(&unary, &b1, 1 << 16).unwrap().count(), 1);
    assert!(enumerate_patterns(&a, &z2.ball(3).unwrap(), 1 << 16).is_err());
}

#[test]
fn product_generators() {
    let g = parse_group("Z^2 x C(2)").unwrap();
    assert_eq!(g.generators().len(), 6);
    assert_eq!(parse_group("F(2) x Z^1").unwrap().generators().len(), 6);
    let direct: SharedGroup = Arc::new(Lattice::new(2));
    assert_eq!(
        parse_group("Z^2").unwrap().generators(),
        direct.generators()
    );
}
