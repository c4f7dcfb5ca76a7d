use std::collections::BTreeSet;
use std::sync::Arc;

use alcoves::basering::BaseRing;
use alcoves::ordertopo::{AlcoveSet, Window};
use alcoves::presheaf::{check_support_condition, delta_inclusion, extend_morphism, Presheaf};
use alcoves::rootsys::{build_root_system, CartanType};
use alcoves::structalg::{
    all_labels, delta, eta_s, invariant_part, random_z, satisfies_congruences, z_sections, ZTuple,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn s_ring(ty: CartanType) -> BaseRing {
    BaseRing::structure(Arc::new(build_root_system(ty)), 5).unwrap()
}

fn mul(ring: &BaseRing, a: &ZTuple, b: &ZTuple) -> ZTuple {
    let lr = ring.loc_ring();
    ZTuple { labels: a.labels.clone(), comps: a.comps.iter().zip(&b.comps).map(|(x, y)| lr.mul(x, y)).collect() }
}

#[test]
fn invariants_and_antiinvariants_fill_each_degree() {
    for ty in [CartanType::A1, CartanType::A2] {
        let ring = s_ring(ty);
        let labels = all_labels(&ring);
        let z = z_sections(&ring, &labels, 6);
        for s in 0..=ring.rank() {
            let inv: Vec<usize> = invariant_part(&ring, &z, &labels, s).iter().map(|p| p.dim()).collect();
            for d in 0..=6usize {
                let lower = if d >= 2 { inv[d - 2] } else { 0 };
                assert_eq!(inv[d] + lower, z.pieces[d].dim(), "{ty} s={s} d={d}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn eta_is_an_algebra_involution(seed in any::<u64>(), a2 in any::<bool>(), si in 0usize..3) {
        let ring = s_ring(if a2 { CartanType::A2 } else { CartanType::A1 });
        let s = si % (ring.rank() + 1);
        let basis = z_sections(&ring, &all_labels(&ring), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, _) = random_z(&ring, &basis, 4, &mut rng);
        let (y, _) = random_z(&ring, &basis, 4, &mut rng);
        let ex = eta_s(&ring, &x, s).unwrap();
        prop_assert_eq!(&eta_s(&ring, &ex, s).unwrap(), &x);
        let degs = |t: &ZTuple| t.comps.iter().filter_map(|c| c.degree()).collect::<BTreeSet<_>>();
        prop_assert!(degs(&x).len() <= 1);
        prop_assert_eq!(degs(&ex), degs(&x));
        prop_assert!(satisfies_congruences(&ring, &ex).unwrap());
        let lhs = eta_s(&ring, &mul(&ring, &x, &y), s).unwrap();
        let rhs = mul(&ring, &ex, &eta_s(&ring, &y, s).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_isolates_its_label(seed in any::<u64>(), a2 in any::<bool>(), wi in 0usize..6) {
        let ring = s_ring(if a2 { CartanType::A2 } else { CartanType::A1 });
        let w = wi % ring.rs.weyl.order();
        let basis = z_sections(&ring, &all_labels(&ring), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (z, _) = random_z(&ring, &basis, 4, &mut rng);
        let prod = mul(&ring, &delta(&ring, w), &z);
        prop_assert!(prod.support().iter().all(|&x| x == w));
    }
}

fn window(generic: bool, s: usize) -> Arc<Window> {
    let rs = Arc::new(build_root_system(CartanType::A1));
    let ring = if generic { BaseRing::generic(rs, 5).unwrap() } else { BaseRing::structure(rs, 5).unwrap() };
    Arc::new(Window::s_closed(&ring, 2, 2, s))
}

fn object(w: &Arc<Window>, parts: &[(bool, usize, i32)]) -> Presheaf {
    let leaves: Vec<Presheaf> = parts
        .iter()
        .map(|&(st, x, l)| {
            let base = if st { Presheaf::structure(w) } else { Presheaf::skyscraper(w, x % 2).unwrap() };
            base.shift(-2 * l).unwrap()
        })
        .collect();
    Presheaf::sum(w, leaves).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn theta_commutes_with_sums_and_shifts(
        generic in any::<bool>(), s in 0usize..2,
        a in prop::collection::vec((any::<bool>(), 0usize..2, 0i32..2), 1..3),
        b in prop::collection::vec((any::<bool>(), 0usize..2, 0i32..2), 1..3),
        l in 0i32..2,
    ) {
        let w = window(generic, s);
        let (pa, pb) = (object(&w, &a), object(&w, &b));
        let both = Presheaf::sum(&w, vec![pa.clone(), pb.clone()]).unwrap();
        let (ta, tb, tab) = (pa.theta(s).unwrap(), pb.theta(s).unwrap(), both.theta(s).unwrap());
        let shifted = pa.shift(-2 * l).unwrap().theta(s).unwrap();
        for j in w.canonical_opens(&[s]) {
            let (da, db, dab) = (ta.dims(&j, 4), tb.dims(&j, 4), tab.dims(&j, 4));
            let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| x + y).collect();
            prop_assert_eq!(dab, sum);
            let ds = shifted.dims(&j, 4);
            for d in 0..=4usize {
                let src = d as i32 - 2 * l;
                prop_assert_eq!(ds[d], if src >= 0 { da[src as usize] } else { 0 });
            }
        }
    }
}

#[test]
fn base_change_satisfies_the_support_condition() {
    let w = window(false, 0);
    let g = BaseRing::generic(w.rs.clone(), 5).unwrap();
    for p in [Presheaf::structure(&w), Presheaf::skyscraper(&w, 1).unwrap(), Presheaf::structure(&w).theta(0).unwrap()]
    {
        let b = p.box_change(&g).unwrap();
        let opens = b.window().canonical_opens(&[]);
        assert!(check_support_condition(&b, &opens, 4).passed(), "{}", p.describe());
    }
}

#[test]
fn morphism_extension_is_deterministic() {
    let w = window(false, 0);
    let sky = Presheaf::skyscraper(&w, 1).unwrap().shift(-2).unwrap();
    let st = Presheaf::structure(&w);
    let opens = w.canonical_opens(&[0]);
    let family: Vec<AlcoveSet> = opens.iter().filter(|j| w.is_s_invariant(j, 0).unwrap()).cloned().collect();
    let data = delta_inclusion(&sky, &st, 1, &family, 4).unwrap();
    let a = extend_morphism(&data, &opens).unwrap();
    let b = extend_morphism(&data, &opens).unwrap();
    assert!(a.same_matrices(&b));
    assert!(a.check_naturality().passed());
}
