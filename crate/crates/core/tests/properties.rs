use std::sync::OnceLock;

use pcgroup_core::families;
use pcgroup_core::{Element, OuterWord, PcGroup, WitnessTuple};
use proptest::prelude::*;

const NAMES: &[&str] = &[
    "heis(3)",
    "espm(3)",
    "dihedral(16)",
    "quaternion(16)",
    "semidihedral(32)",
    "wreath(3)",
    "freenilp(3,3)",
    "dihedral(8)xquaternion(8)",
    "heis(5)",
];

fn groups() -> &'static [PcGroup] {
    static GROUPS: OnceLock<Vec<PcGroup>> = OnceLock::new();
    GROUPS.get_or_init(|| NAMES.iter().map(|n| PcGroup::new(families::from_name(n).unwrap()).unwrap()).collect())
}

fn pick(g: &PcGroup, i: u32) -> Element {
    g.element_at(i % g.order()).unwrap()
}

// independent closure by repeated multiplication
fn brute_closure(g: &PcGroup, gens: &[Element]) -> Vec<Element> {
    let mut set = vec![false; g.order() as usize];
    let mut items = vec![g.identity()];
    set[0] = true;
    let mut i = 0;
    while i < items.len() {
        let x = items[i];
        i += 1;
        for &s in gens {
            let y = g.multiply(x, s);
            if !set[y.code() as usize] {
                set[y.code() as usize] = true;
                items.push(y);
            }
        }
    }
    items.sort();
    items
}

fn prime_log(p: u32, mut m: usize) -> u32 {
    let mut k = 0;
    while m > 1 {
        m /= p as usize;
        k += 1;
    }
    k
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn associative(gi in 0..NAMES.len(), a: u32, b: u32, c: u32) {
        let g = &groups()[gi];
        let (x, y, z) = (pick(g, a), pick(g, b), pick(g, c));
        prop_assert_eq!(g.multiply(g.multiply(x, y), z), g.multiply(x, g.multiply(y, z)));
    }

    #[test]
    fn inverses_and_powers(gi in 0..NAMES.len(), a: u32, m in -40i64..40, k in -40i64..40) {
        let g = &groups()[gi];
        let x = pick(g, a);
        prop_assert!(g.multiply(x, g.inverse(x)).is_identity());
        prop_assert_eq!(g.power(x, m + k), g.multiply(g.power(x, m), g.power(x, k)));
        prop_assert!(g.power(x, g.element_order(x) as i64).is_identity());
    }

    #[test]
    fn commutator_identities(gi in 0..NAMES.len(), a: u32, b: u32, c: u32) {
        let g = &groups()[gi];
        let (x, y, z) = (pick(g, a), pick(g, b), pick(g, c));
        let direct = g.multiply(g.multiply(g.inverse(x), g.inverse(y)), g.multiply(x, y));
        prop_assert_eq!(g.commutator(x, y), direct);
        prop_assert_eq!(g.commutator(x, y), g.inverse(g.commutator(y, x)));
        // [xy, z] = [x, z]^y [y, z]
        let lhs = g.commutator(g.multiply(x, y), z);
        let rhs = g.multiply(g.conjugate(g.commutator(x, z), y), g.commutator(y, z));
        prop_assert_eq!(lhs, rhs);
        // Hall-Witt
        let t = |u: Element, v: Element, w: Element| g.conjugate(g.commutator(g.commutator(u, g.inverse(v)), w), v);
        prop_assert!(g.multiply(g.multiply(t(x, y, z), t(y, z, x)), t(z, x, y)).is_identity());
    }

    #[test]
    fn closure_and_rank(gi in 0..NAMES.len(), a: u32, b: u32) {
        let g = &groups()[gi];
        let gens = [pick(g, a), pick(g, b)];
        let h = g.closure(&gens);
        let brute = brute_closure(g, &gens);
        prop_assert_eq!(h.elements(), &brute[..]);
        let mut phi_gens: Vec<Element> = brute.iter().map(|&x| g.power(x, g.p() as i64)).collect();
        for &x in &brute {
            for &y in &brute {
                phi_gens.push(g.commutator(x, y));
            }
        }
        phi_gens.sort();
        phi_gens.dedup();
        let phi = brute_closure(g, &phi_gens);
        prop_assert_eq!(g.rank(&h), prime_log(g.p(), brute.len() / phi.len()));
    }

    #[test]
    fn commutator_subgroup_of_normal_subgroups(gi in 0..NAMES.len(), a: u32, b: u32) {
        let g = &groups()[gi];
        let m = g.normal_closure(&[pick(g, a)]);
        let n = g.normal_closure(&[pick(g, b)]);
        let mut gens = Vec::new();
        for &x in m.elements() {
            for &y in n.elements() {
                gens.push(g.commutator(x, y));
            }
        }
        gens.sort();
        gens.dedup();
        let brute = brute_closure(g, &gens);
        let mn = g.commutator_subgroup(&m, &n);
        prop_assert_eq!(mn.elements(), &brute[..]);
    }

    #[test]
    fn values_are_closed_under_conjugation(gi in 0..NAMES.len(), r in 2usize..4, a: u32) {
        let g = &groups()[gi];
        let values = OuterWord::gamma(r).unwrap().value_set(g).unwrap();
        let h = pick(g, a);
        for x in values.iter() {
            prop_assert!(values.contains(g.conjugate(x, h)));
        }
        if r == 2 {
            for x in values.iter() {
                prop_assert!(values.contains(g.inverse(x)));
            }
        }
    }

    #[test]
    fn verbal_subgroup_of_gamma_is_gamma(gi in 0..NAMES.len(), r in 2usize..5) {
        let g = &groups()[gi];
        let w = OuterWord::gamma(r).unwrap();
        prop_assert_eq!(w.verbal_subgroup(g).unwrap(), g.gamma(r));
    }

    #[test]
    fn slot_values_lie_in_gamma(gi in 0..NAMES.len(), r in 2usize..4, slot in 1usize..4, picks in prop::collection::vec(any::<u32>(), 3)) {
        let g = &groups()[gi];
        let slot = 1 + (slot - 1) % r;
        let fixed: Vec<Element> = picks[..r - 1].iter().map(|&i| pick(g, i)).collect();
        let wt = WitnessTuple::new(slot, fixed).unwrap();
        let vals = pcgroup_core::words::slot_value_set(g, r, &wt).unwrap();
        let gamma = g.gamma(r);
        prop_assert!(vals.iter().all(|x| gamma.contains(x)));
        for x in g.elements().step_by(7) {
            prop_assert!(vals.contains(g.commutator_of(&wt.with_slot(x))));
        }
    }
}

#[test]
fn value_sets_match_tuple_enumeration() {
    for g in groups() {
        let two: std::collections::BTreeSet<Element> =
            g.elements().flat_map(|x| g.elements().map(move |y| g.commutator(x, y))).collect();
        let vs = OuterWord::gamma(2).unwrap().value_set(g).unwrap();
        assert!(vs.iter().eq(two.iter().copied()), "{}", g.id());
        if g.order() <= 81 {
            let mut three = std::collections::BTreeSet::new();
            for &c in &two {
                for z in g.elements() {
                    three.insert(g.commutator(c, z));
                }
            }
            let vs = OuterWord::gamma(3).unwrap().value_set(g).unwrap();
            assert!(vs.iter().eq(three.iter().copied()), "{}", g.id());
        }
    }
}
