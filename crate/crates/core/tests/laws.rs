use std::collections::BTreeMap;

use olkit_core::frames::{frame_of, OrthoFrame};
use olkit_core::functional::{FullFunctionalAlgebra, Kind};
use olkit_core::index::{IndexSet, IndexUniverse, Universe};
use olkit_core::monadic::{
    check_family, check_locally_finite_cyl, closed_elements, enumerate_quantifiers, forall_of, DeltaFreeCylindric,
    MonadicOrtholattice, DEFAULT_QUANTIFIER_CAP,
};
use olkit_core::ortho::{enumerate_ortholattices, library};
use olkit_core::polyadic::{
    check_sigma_free, cyl_to_pol, nabla_eval, pol_to_cyl, support_of, SigmaFreePolyadic,
};
use olkit_core::{FiniteOrtholattice, OrthoOps};
use proptest::prelude::*;

const TAIL: u32 = 1_000;

fn small_lattices() -> Vec<FiniteOrtholattice> {
    (2..=6).step_by(2).flat_map(|n| enumerate_ortholattices(n).unwrap()).collect()
}

fn index_set() -> impl Strategy<Value = (bool, Vec<u32>)> {
    (any::<bool>(), prop::collection::vec(0u32..70, 0..6))
}

fn build((cof, v): &(bool, Vec<u32>)) -> IndexSet {
    let u = Universe::Omega;
    if *cof {
        IndexSet::cofin(u, v.iter().copied()).unwrap()
    } else {
        IndexSet::fin(u, v.iter().copied()).unwrap()
    }
}

fn oracle((cof, v): &(bool, Vec<u32>), i: u32) -> bool {
    v.contains(&i) != *cof
}

proptest! {
    #[test]
    fn finite_cofinite_algebra(s in index_set(), t in index_set()) {
        let (a, b) = (build(&s), build(&t));
        prop_assert_eq!(a.complement().complement(), a.clone());
        let u = a.union(&b).unwrap();
        let n = a.intersection(&b).unwrap();
        let d = a.difference(&b).unwrap();
        for i in (0..64).chain([TAIL]) {
            let (x, y) = (oracle(&s, i), oracle(&t, i));
            prop_assert_eq!(a.contains(i), x);
            prop_assert_eq!(u.contains(i), x || y);
            prop_assert_eq!(n.contains(i), x && y);
            prop_assert_eq!(d.contains(i), x && !y);
            prop_assert_eq!(a.complement().contains(i), !x);
        }
    }

    #[test]
    fn galois_laws(k in 1usize..10, edges in prop::collection::vec((0usize..10, 0usize..10), 0..20), u in any::<u64>(), w in any::<u64>()) {
        let names: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
        let mut perp = vec![0u64; k];
        for (x, y) in edges {
            let (x, y) = (x % k, y % k);
            if x != y {
                perp[x] |= 1 << y;
                perp[y] |= 1 << x;
            }
        }
        let f = OrthoFrame::new(names, perp).unwrap();
        let (u, w) = (u & f.all(), w & f.all());
        prop_assert_eq!(f.closure(u) & u, u);
        prop_assert_eq!(f.perp_set(f.closure(u)), f.perp_set(u));
        let v = u | w;
        prop_assert_eq!(f.perp_set(v) & !f.perp_set(u), 0);
    }

    #[test]
    fn nabla_union_on_random_sets(
        gens in prop::collection::btree_map(0u32..6, 0usize..2, 0..4),
        s in index_set(),
        t in index_set(),
    ) {
        let b4 = library::boolean4();
        let maps: Vec<Vec<usize>> = enumerate_quantifiers(&b4, DEFAULT_QUANTIFIER_CAP)
            .unwrap()
            .into_iter()
            .map(|q| q.map().to_vec())
            .collect();
        let g: BTreeMap<u32, Vec<usize>> = gens.into_iter().map(|(i, q)| (i, maps[q].clone())).collect();
        let p = SigmaFreePolyadic::new(b4.clone(), IndexUniverse::omega(), g).unwrap();
        let (j, k) = (build(&s), build(&t));
        let jk = j.union(&k).unwrap();
        for a in b4.elements() {
            let lhs = nabla_eval(&p, &jk, a).unwrap();
            let rhs = nabla_eval(&p, &j, nabla_eval(&p, &k, a).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let (support, r) = support_of(&p, a).unwrap();
            prop_assert!(r.is_pass());
            prop_assert!(support.is_finite());
        }
    }
}

#[test]
fn quantifier_invariants_on_enumerated_carriers() {
    for l in small_lattices() {
        for q in enumerate_quantifiers(&l, DEFAULT_QUANTIFIER_CAP).unwrap() {
            let m = MonadicOrtholattice::from_quantifier(l.clone(), q.clone()).unwrap();
            let (b, incl) = closed_elements(&m).unwrap();
            assert_eq!(b.size(), incl.len());
            let (all, r) = forall_of(&m);
            assert!(r.is_pass());
            for a in l.elements() {
                let least = l.meet_all(incl.iter().copied().filter(|&c| l.leq(a, c)));
                assert_eq!(q.apply(a), least);
                assert_eq!(q.apply(a), l.ortho(all[l.ortho(a)]));
                assert_eq!(all[a], l.ortho(q.apply(l.ortho(a))));
            }
        }
    }
}

#[test]
fn correspondence_is_identity_on_objects() {
    for l in small_lattices() {
        let qs = enumerate_quantifiers(&l, DEFAULT_QUANTIFIER_CAP).unwrap();
        for q in &qs {
            for r in &qs {
                for universe in [IndexUniverse::finite_named(&["i", "k"]).unwrap(), IndexUniverse::omega()] {
                    let mut active = BTreeMap::new();
                    active.insert(0, q.map().to_vec());
                    active.insert(1, r.map().to_vec());
                    let c = DeltaFreeCylindric::new(l.clone(), universe, active).unwrap();
                    let Ok(p) = cyl_to_pol(&c) else {
                        assert!(!check_family(&c).is_pass());
                        continue;
                    };
                    assert!(check_sigma_free(&p).is_pass());
                    let back = pol_to_cyl(&p);
                    assert_eq!(back, c);
                    assert_eq!(cyl_to_pol(&back).unwrap(), p);
                    assert!(check_family(&back).is_pass());
                    assert!(check_locally_finite_cyl(&back).is_pass());
                }
            }
        }
    }
}

#[test]
fn diamond_is_nabla_over_all_indices() {
    for base in small_lattices() {
        let f = FullFunctionalAlgebra::new(base.clone(), 2, Kind::SigmaFreePolyadic, 2).unwrap();
        let all = IndexSet::full(f.index_universe());
        for t in 0..f.carrier_size().unwrap() {
            let table = f.decode(t);
            assert_eq!(f.diamond(&table).unwrap(), f.nabla_hat(&table, &all).unwrap());
        }
    }
}

#[test]
fn frames_of_enumerated_lattices_are_symmetric() {
    for l in small_lattices() {
        let f = frame_of(&l).unwrap();
        for x in 0..f.len() {
            assert!(!f.perp(x, x));
            for y in 0..f.len() {
                assert_eq!(f.perp(x, y), f.perp(y, x));
            }
        }
    }
}
