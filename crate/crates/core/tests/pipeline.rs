//! Cocycle and rigidification examples on small fixed cocycles.

use std::path::PathBuf;
use std::sync::Arc;

use cocycle_core::families::{random_twisted, z2_hom, z2_twisted, z_counterexample, Twisted};
use cocycle_core::{
    load_cocycle, make_hom_cocycle, parse_group, Alphabet, CayleyExplorer, Configuration, Element,
    Error, Exhaustive, Lattice, ObstructionDetails, ObstructionKind, ResultDocument, Rigidifier,
    RigidityOptions, SweepOptions,
};

fn v(c: &[i64]) -> Element {
    Lattice::vector(c)
}

fn explorer(spec: &str) -> Arc<CayleyExplorer> {
    Arc::new(CayleyExplorer::new(parse_group(spec).unwrap()).unwrap())
}

/// Twisted cocycle on Z with a radius-1 transfer: L = 2, so all 2^13 `B(6)`
/// patterns fit in a complete table.
fn z_twisted() -> Twisted {
    random_twisted(
        explorer("Z^1"),
        parse_group("S(3)").unwrap(),
        Alphabet::binary(),
        1,
        3,
    )
    .unwrap()
}

#[test]
fn homomorphism_with_equal_images_is_a_cocycle() {
    let h = parse_group("S(3)").unwrap();
    let t = h.parse_label("(1 2)").unwrap();
    let c = make_hom_cocycle(explorer("Z^2"), h, Alphabet::binary(), &[t.clone(), t]).unwrap();
    let rep = c.check_identity(2, &SweepOptions::default()).unwrap();
    assert_eq!(rep.failure_count, 0);
}

#[test]
fn dependence_window() {
    let t = z2_twisted().unwrap();
    let c = &t.cocycle;
    let ex = c.explorer();
    let path = ex.geodesic_segment(&v(&[3, 0])).unwrap();
    let x = Configuration::zero(c.alphabet());
    let far = Configuration::new(0, [(v(&[0, 5]), 1), (v(&[-4, 0]), 1)]);
    assert!(c.dependence_window_check(&path, &x, &far).unwrap());
    assert!(c.dependence_window_check(&path, &x, &x).unwrap());
    let near = Configuration::new(0, [(v(&[1, 1]), 1)]);
    assert!(matches!(
        c.dependence_window_check(&path, &x, &near),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn phi_of_hom_and_twisted() {
    let hom = z2_hom().unwrap();
    let rig = Rigidifier::new(&hom, RigidityOptions::default()).unwrap();
    let h = hom.target();
    for g in hom.explorer().ball(3).unwrap() {
        let phi0 = hom
            .evaluate(&g, &Configuration::zero(hom.alphabet()))
            .unwrap();
        assert_eq!(rig.compute_phi(&g).unwrap(), phi0);
    }
    assert!(rig.check_phi_homomorphism(3).unwrap().failures.is_empty());

    let t = z2_twisted().unwrap();
    let c = &t.cocycle;
    let rig = Rigidifier::new(c, RigidityOptions::default()).unwrap();
    let h0 = t.h0();
    for g in c.explorer().ball(3).unwrap() {
        let Element::Lattice(coords) = &g else {
            unreachable!()
        };
        let phi0 = (0..2).fold(h.identity(), |acc, k| {
            h.multiply(&acc, &h.pow(&t.images[k], coords[k]))
        });
        let expected = h.multiply(&h.multiply(h0, &phi0), &h.inverse(h0));
        assert_eq!(
            rig.compute_phi(&g).unwrap(),
            expected,
            "{}",
            c.source().label(&g)
        );
    }
}

#[test]
fn choice_of_gx() {
    let t = z2_twisted().unwrap();
    let rig = Rigidifier::new(&t.cocycle, RigidityOptions::default()).unwrap();
    assert_eq!(
        rig.choose_gx(&Configuration::zero(t.cocycle.alphabet()))
            .unwrap(),
        v(&[2, 0])
    );

    let z = make_hom_cocycle(
        explorer("Z^1"),
        parse_group("C(3)").unwrap(),
        Alphabet::binary(),
        &[parse_group("C(3)").unwrap().generators()[0].clone()],
    )
    .unwrap();
    let rig = Rigidifier::new(&z, RigidityOptions::default()).unwrap();
    let g = rig.choose_gx(&Configuration::zero(z.alphabet())).unwrap();
    assert_eq!(z.explorer().word_norm(&g).unwrap(), 1);
}

#[test]
fn transfer_of_a_homomorphism_is_trivial() {
    let c = z2_hom().unwrap();
    let rig = Rigidifier::new(&c, RigidityOptions::default()).unwrap();
    let h = c.target();
    for x in [
        Configuration::zero(c.alphabet()),
        Configuration::new(0, [(v(&[1, -2]), 1), (v(&[0, 3]), 1)]),
    ] {
        assert_eq!(rig.compute_b(&x).unwrap(), h.identity());
    }
    let table = rig.build_b_table().unwrap();
    assert!(table.complete);
    assert!(table.values.iter().all(|e| h.is_identity(e)));
}

#[test]
fn transfer_of_a_twisted_cocycle() {
    let t = z_twisted();
    let c = &t.cocycle;
    assert_eq!(c.window(), 2);
    let h = c.target();
    let rig = Rigidifier::new(c, RigidityOptions::default()).unwrap();
    let table = rig.build_b_table().unwrap();
    assert!(table.complete);
    assert_eq!(table.values.len(), 1 << 13);
    let h0_inv = h.inverse(t.h0());
    for (i, b) in table.values.iter().enumerate() {
        let p = table.pattern(c.alphabet(), i);
        assert_eq!(
            *b,
            h.multiply(t.transfer.value(c.alphabet(), &p[..3]), &h0_inv),
            "entry {i}"
        );
    }
}

#[test]
fn independence_and_locality_trivial_cases() {
    let t = z2_twisted().unwrap();
    let c = &t.cocycle;
    let rig = Rigidifier::new(c, RigidityOptions::default()).unwrap();
    let x = Configuration::new(0, [(v(&[0, 1]), 1)]);
    let cands = rig.candidates(&x).unwrap();
    assert!(cands.len() > 1);
    assert_eq!(rig.check_independence(&x, &cands[..1]).unwrap(), None);
    assert_eq!(rig.check_independence(&x, &cands).unwrap(), None);
    assert_eq!(rig.check_locality(&x, &x).unwrap(), None);
    let y = Configuration::new(0, [(v(&[0, 1]), 1), (v(&[4, 0]), 1)]);
    assert_eq!(rig.check_locality(&x, &y).unwrap(), None);
    assert!(matches!(
        rig.check_locality(&x, &Configuration::zero(c.alphabet())),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn counterexample_is_obstructed() {
    let c = z_counterexample().unwrap();
    let rig = Rigidifier::new(&c, RigidityOptions::default()).unwrap();
    let zero = Configuration::zero(c.alphabet());
    // b(x) reads the sites between 0 and g_x; g_x always lies on the positive
    // side, so only a difference on the negative side changes b.
    let right = Configuration::new(0, [(v(&[5]), 1)]);
    let left = Configuration::new(0, [(v(&[-5]), 1)]);
    assert_eq!(rig.check_locality(&zero, &right).unwrap(), None);
    let w = rig
        .check_locality(&zero, &left)
        .unwrap()
        .expect("locality fails");
    assert_eq!(w.kind, ObstructionKind::LocalityFailure);

    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/z_counterexample.cocycle.json");
    let loaded = load_cocycle(fixture).unwrap();
    assert_eq!(loaded.rules(), c.rules());
    let result = Rigidifier::new(&loaded, RigidityOptions::default())
        .unwrap()
        .rigidify()
        .unwrap();
    let ob = result.obstruction.as_ref().expect("obstructed");
    assert_eq!(ob.kind, ObstructionKind::IndependenceFailure);
    assert_eq!(ob.x, Configuration::new(0, [(v(&[0]), 1)]));
    let ObstructionDetails::Conflict {
        first_value,
        second_value,
        ..
    } = &ob.details
    else {
        panic!("expected a conflict");
    };
    assert_ne!(first_value, second_value);
    assert!(!result.passed());
}

#[test]
fn tampered_table_fails_exactly_where_it_is_read() {
    let t = z_twisted();
    let c = &t.cocycle;
    let opts = RigidityOptions {
        sweep: SweepOptions {
            exhaustive: Exhaustive::Always,
            max_witnesses: usize::MAX,
            ..SweepOptions::default()
        },
        ..RigidityOptions::default()
    };
    let rig = Rigidifier::new(c, opts).unwrap();
    let phi = rig.phi_table(4).unwrap();
    let mut table = rig.build_b_table().unwrap();
    assert!(rig.check_cohomology(&phi, &table, 1).unwrap().passed());

    let h = c.target();
    let k = 0b1011;
    table.values[k] = h.multiply(&table.values[k], &h.parse_label("(1 2)").unwrap());
    let bad = table.pattern(c.alphabet(), k);
    let rep = rig.check_cohomology(&phi, &table, 1).unwrap();
    assert!(rep.failure_count > 0);
    assert_eq!(rep.failure_count, rep.failures.len() as u64);

    let ex = c.explorer();
    let g = ex.oracle().clone();
    let inner = ex.ball(6).unwrap();
    for f in &rep.failures {
        let window = ex.ball(f.window_radius).unwrap();
        let x = Configuration::new(
            f.default,
            window.iter().cloned().zip(f.window.iter().copied()),
        );
        let here: Vec<u8> = inner.iter().map(|s| x.at(s)).collect();
        let moved = x.shift(&g, &f.g);
        let there: Vec<u8> = inner.iter().map(|s| moved.at(s)).collect();
        assert!(
            here == bad || there == bad,
            "failure at g={} does not read the tampered entry",
            g.label(&f.g)
        );
    }
}

#[test]
fn result_documents_are_lossless() {
    for c in [
        z_twisted().cocycle,
        z_counterexample().unwrap(),
        z2_twisted().unwrap().cocycle,
    ] {
        let result = Rigidifier::new(&c, RigidityOptions::default())
            .unwrap()
            .rigidify()
            .unwrap();
        let json = ResultDocument::from_result(&c, &result)
            .unwrap()
            .to_json()
            .unwrap();
        let doc = ResultDocument::from_json(&json).unwrap();
        assert_eq!(doc.to_result(&c).unwrap(), result);
        assert_eq!(doc.to_json().unwrap(), json);
    }
}
