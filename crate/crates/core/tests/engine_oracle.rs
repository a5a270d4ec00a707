mod common;

use common::todd_coxeter::enumerate;
use pcgroup_core::families::{self, BUILTIN_CORPUS};
use pcgroup_core::{PcGroup, PcPresentation};

fn exponent_vectors(p: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (0..p).map(move |e| [v.clone(), vec![e]].concat())).collect();
    }
    out
}

fn agrees_with_oracle(pres: &PcPresentation) -> Result<(), String> {
    compare(pres, pres)
}

/// Every product in the engine for `engine` against the coset action of the
/// relators of `oracle`.
fn compare(engine: &PcPresentation, oracle: &PcPresentation) -> Result<(), String> {
    let g = PcGroup::new(engine.clone()).map_err(|e| e.to_string())?;
    let action = enumerate(oracle, 2_000_000).ok_or("coset enumeration overflow")?;
    if action.order != g.order() as usize {
        return Err(format!("oracle order {} vs {}", action.order, g.order()));
    }
    let vecs = exponent_vectors(g.p(), g.n());
    let cosets: Vec<usize> = vecs.iter().map(|v| action.trace(0, v)).collect();
    let mut seen = cosets.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != cosets.len() {
        return Err("normal forms are not distinct in the oracle".into());
    }
    for (a, va) in vecs.iter().enumerate() {
        let x = g.element(va).unwrap();
        for vb in &vecs {
            let y = g.element(vb).unwrap();
            let want = action.trace(cosets[a], vb);
            let got = cosets[g.exponents(g.multiply(x, y)).iter().fold(0usize, |acc, &e| acc * g.p() as usize + e as usize)];
            if want != got {
                return Err(format!("{} * {}", g.format_element(x), g.format_element(y)));
            }
        }
    }
    Ok(())
}

#[test]
fn builtins_up_to_243_agree_with_coset_enumeration() {
    let mut checked = 0;
    for name in BUILTIN_CORPUS {
        let pres = families::from_name(name).unwrap();
        if pres.order() > 243 {
            continue;
        }
        agrees_with_oracle(&pres).unwrap_or_else(|e| panic!("{name}: {e}"));
        checked += 1;
    }
    assert!(checked >= 20);
}

#[test]
fn oracle_tells_groups_apart() {
    let heis = families::heis(3).unwrap();
    let elab = families::elab(3, 3).unwrap();
    assert!(compare(&heis, &elab).is_err());
    assert!(compare(&elab, &heis).is_err());
    let q8 = families::quaternion(8).unwrap();
    let d8 = families::dihedral(8).unwrap();
    assert!(compare(&q8, &d8).is_err());
}

#[test]
fn inconsistent_presentation_collapses_in_the_oracle() {
    let mut pres = PcPresentation::new("bad", 3, 3).unwrap();
    pres.set_power(0, vec![(1, 1)]).unwrap();
    pres.set_commutator(1, 0, vec![(2, 1)]).unwrap();
    let action = enumerate(&pres, 100_000).unwrap();
    assert!(action.order < 27);
    assert!(PcGroup::new(pres).is_err());
}
