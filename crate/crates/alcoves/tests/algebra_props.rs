use std::sync::Arc;

use alcoves::basering::{hom_exists, make_base_ring};
use alcoves::polyalg::{graded_solve, monomials, LocElem, Relation, SPoly};
use alcoves::rootsys::{build_root_system, gkm_check, CartanType, RootSystem};
use alcoves::structalg::{all_labels, z_sections};
use proptest::prelude::*;

fn ty() -> impl Strategy<Value = CartanType> {
    prop::sample::select(CartanType::ALL.to_vec())
}

fn homogeneous(p: u32, n: usize, k: u32, coeffs: &[u32]) -> SPoly {
    let mut f = SPoly::zero(p, n);
    for (e, &c) in monomials(n, k).into_iter().zip(coeffs.iter().cycle()) {
        f.add_term(e, c % p);
    }
    f
}

fn dependent_mod(p: i64, a: &[i64], b: &[i64]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] * b[j] - a[j] * b[i]).rem_euclid(p) == 0))
}

proptest! {
    #[test]
    fn conjugate_reflection(ty in ty(), wi in 0usize..1000, ai in 0usize..1000) {
        let rs = build_root_system(ty);
        let w = wi % rs.weyl.order();
        let a = ai % rs.num_pos_roots();
        let wg = &rs.weyl;
        let lhs = wg.mul(wg.mul(w, rs.reflection(a)), wg.inv(w));
        prop_assert_eq!(lhs, rs.reflection(rs.act_on_root(w, a).0));
    }

    #[test]
    fn pairing_is_invariant(ty in ty(), wi in 0usize..1000, lam in prop::collection::vec(-5i64..5, 3), v in prop::collection::vec(-5i64..5, 3)) {
        let rs = build_root_system(ty);
        let w = wi % rs.weyl.order();
        let (lam, v) = (&lam[..rs.rank], &v[..rs.rank]);
        let before = rs.pair_weight(lam, v);
        let after = rs.pair_weight(&rs.weyl.act_weight(w, lam), &rs.weyl.act_coweight(w, v));
        prop_assert_eq!(before, after);
    }

    #[test]
    fn reduce_ignores_coroot_multiples(
        ty in ty(), ai in 0usize..100, k in 0u32..4,
        f in prop::collection::vec(0u32..5, 1..12), g in prop::collection::vec(0u32..5, 1..12),
    ) {
        let rs = Arc::new(build_root_system(ty));
        let p = if ty == CartanType::G2 { 7 } else { 5 };
        let ring = make_base_ring(rs.clone(), p, vec![false; rs.num_pos_roots()]).unwrap();
        let lr = ring.loc_ring();
        let a = ai % rs.num_pos_roots();
        let f = homogeneous(p, rs.rank, k + 1, &f);
        let g = homogeneous(p, rs.rank, k, &g);
        let shifted = f.add(&g.mul(&ring.coroot_poly(a)));
        let r1 = lr.reduce_mod_coroot(&LocElem::from_poly(f), a).unwrap();
        let r2 = lr.reduce_mod_coroot(&LocElem::from_poly(shifted), a).unwrap();
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn exact_division_undoes_product(
        ty in ty(), k in 0u32..4, j in 0u32..3,
        f in prop::collection::vec(0u32..5, 1..12), c in prop::collection::vec(1u32..5, 1..12),
    ) {
        let rs = Arc::new(build_root_system(ty));
        let p = if ty == CartanType::G2 { 7 } else { 5 };
        let ring = make_base_ring(rs.clone(), p, vec![false; rs.num_pos_roots()]).unwrap();
        let lr = ring.loc_ring();
        let f = LocElem::from_poly(homogeneous(p, rs.rank, k, &f));
        let c = LocElem::from_poly(homogeneous(p, rs.rank, j, &c));
        prop_assume!(!c.is_zero());
        let q = lr.exact_divide(&lr.mul(&f, &c), &c).unwrap().expect("divisible");
        prop_assert!(lr.sub(&q, &f).is_zero());
    }

    #[test]
    fn hom_exists_is_a_preorder(ty in ty(), masks in prop::collection::vec(any::<u8>(), 3)) {
        let rs = Arc::new(build_root_system(ty));
        let n = rs.num_pos_roots();
        let p = if ty == CartanType::G2 { 7 } else { 5 };
        let rings: Vec<_> = masks
            .iter()
            .filter_map(|&m| make_base_ring(rs.clone(), p, (0..n).map(|i| m >> (i % 8) & 1 == 1).collect()).ok())
            .collect();
        for t in &rings {
            prop_assert!(hom_exists(t, t));
            // saturated: the non-inverted roots are exactly the reflections of W_T
            prop_assert_eq!(t.i_t(), t.r_t_roots());
            for sp in t.specializations() {
                prop_assert!(hom_exists(t, &sp));
                prop_assert!(sp.is_generic() || sp.subgeneric_root().is_some());
            }
            for u in &rings {
                for v in &rings {
                    if hom_exists(t, u) && hom_exists(u, v) {
                        prop_assert!(hom_exists(t, v));
                    }
                }
            }
        }
    }
}

fn gkm_matches_minors(rs: &RootSystem, p: u32) {
    let rep = gkm_check(rs, p);
    let mut found: Vec<(usize, usize)> = rep.violations.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
    found.sort();
    let mut want = Vec::new();
    for i in 0..rs.num_pos_roots() {
        for j in i + 1..rs.num_pos_roots() {
            if dependent_mod(p as i64, &rs.coroots[i], &rs.coroots[j]) {
                want.push((i, j));
            }
        }
    }
    assert_eq!(found, want, "{} p={p}", rs.cartan_type);
}

#[test]
fn gkm_violations_are_the_dependent_pairs() {
    for ty in CartanType::ALL {
        let rs = build_root_system(ty);
        for p in [2, 3, 5, 7, 11] {
            gkm_matches_minors(&rs, p);
        }
    }
}

#[test]
fn graded_solve_of_a_span_is_stable() {
    for ty in [CartanType::A1, CartanType::A2, CartanType::B2] {
        let rs = Arc::new(build_root_system(ty));
        let ring = make_base_ring(rs.clone(), 5, vec![false; rs.num_pos_roots()]).unwrap();
        let z = z_sections(&ring, &all_labels(&ring), 4);
        let gens: Vec<Vec<SPoly>> = z
            .pieces
            .iter()
            .enumerate()
            .flat_map(|(d, piece)| piece.basis().iter().map(move |v| (d, v.clone())).collect::<Vec<_>>())
            .map(|(d, v)| z.layout.from_vec(&v, d as i32))
            .collect();
        let again = graded_solve(&z.layout, &Relation::Span(gens), 4).unwrap();
        assert_eq!(again.dims(), z.dims(), "{ty}");
    }
}
