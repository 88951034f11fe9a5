use bassfin::arith::ExtNat;
use bassfin::pgroup::{find_monomorphism, FinitePGroup, PGroupElement, PGroupHom};
use bassfin_suites::sample::partitions_up_to;

fn groups(p: u64, total: u32) -> Vec<FinitePGroup> {
    partitions_up_to(total).into_iter().map(|e| FinitePGroup::new(p, e).unwrap()).collect()
}

/// Every homomorphism `A → B`, as all choices of generator images.
fn all_homs(a: &FinitePGroup, b: &FinitePGroup) -> Vec<PGroupHom> {
    let elems = b.elements().unwrap();
    let mut out = vec![PGroupHom { images: vec![] }];
    for &e in a.exponents() {
        let order = a.p().pow(e);
        let ok: Vec<&PGroupElement> = elems.iter().filter(|g| b.scale(order, g) == b.zero()).collect();
        out = out
            .into_iter()
            .flat_map(|h| {
                ok.iter().map(move |g| {
                    let mut images = h.images.clone();
                    images.push((*g).clone());
                    PGroupHom { images }
                })
            })
            .collect();
    }
    out
}

#[test]
fn witnesses_do_not_lower_heights() {
    for p in [2, 3] {
        let gs = groups(p, 4);
        for a in &gs {
            for b in &gs {
                let Some(phi) = find_monomorphism(a, b).unwrap() else { continue };
                for x in a.elements().unwrap() {
                    let before = a.height(&x).unwrap();
                    let after = b.height(&phi.apply(b, &x)).unwrap();
                    assert!(after >= before, "{a} -> {b} at {x:?}: {before} > {after}");
                    if x != a.zero() {
                        assert_ne!(after, ExtNat::Infinity);
                    }
                }
            }
        }
    }
}

#[test]
fn injective_iff_injective_on_socle() {
    for p in [2, 3] {
        let gs = groups(p, 3);
        for a in &gs {
            for b in &gs {
                for phi in all_homs(a, b) {
                    assert!(phi.is_valid(a, b));
                    let on_socle = a
                        .socle()
                        .iter()
                        .all(|x| *x == a.zero() || phi.apply(b, x) != b.zero());
                    assert_eq!(phi.is_injective(a, b).unwrap(), on_socle, "{a} -> {b}: {phi:?}");
                }
            }
        }
    }
}

#[test]
fn heights_match_membership() {
    for p in [2, 3] {
        for g in groups(p, 5) {
            for x in g.elements().unwrap() {
                let h = g.height(&x).unwrap();
                // x ∈ p^m G iff some y has p^m y = x
                let elems = g.elements().unwrap();
                let reach = |m: u32| elems.iter().any(|y| g.scale(p.pow(m), y) == x);
                match h.to_u64() {
                    Some(m) => assert!(reach(m as u32) && !reach(m as u32 + 1), "{g} {x:?}"),
                    None => assert_eq!(x, g.zero()),
                }
            }
        }
    }
}
