//! Base change of presheaves along `T -> T'` and the membership test for
//! root-reflexive sheaves stable under base change.

use crate::basering::{hom_exists, BaseRing};
use crate::error::{Error, Result};
use crate::ordertopo::AlcoveSet;
use crate::presheaf::{check_root_reflexive, check_support_condition, is_sheaf, Presheaf};
use crate::report::Report;
use crate::structalg::{inverted_forms, SAT_STEPS};

pub fn box_change(p: &Presheaf, ring: &BaseRing) -> Result<Presheaf> {
    p.box_change(ring)
}

/// On opens of both topologies, `M(J) (x) T'` maps isomorphically onto the
/// base-changed sections, and the result satisfies the support condition.
pub fn check_box_characterization(p: &Presheaf, boxed: &Presheaf, upto: i32) -> Report {
    let mut r = Report::new();
    let w = p.window();
    let w2 = boxed.window();
    let both: Vec<AlcoveSet> = w2.canonical_opens(&[]).into_iter().filter(|j| w.is_open(j)).collect();
    let forms = inverted_forms(&boxed.ambient().ring);
    let layout = boxed.layout();
    let span = if forms.is_empty() { 0 } else { 2 * SAT_STEPS as i32 };
    let mut bad = Vec::new();
    for j in &both {
        let mask = boxed.mask(j);
        for d in 0..=upto {
            let sec = p.sections(j, d);
            let ker = sec.kernel(sec.ambient_dim(), |v| boxed.ambient().project(v, d, &mask));
            let img: Vec<_> = (0..=span)
                .map(|i| {
                    let s = p.sections(j, d + i);
                    s.image(s.ambient_dim(), |v| boxed.ambient().project(v, d + i, &mask))
                })
                .collect();
            let sat = crate::polyalg::saturate_from(&layout, d, &img, &forms, SAT_STEPS).swap_remove(0);
            if !ker.is_zero() || sat != boxed.sections(j, d) {
                bad.push(format!("{:?} degree {d}", j.ones().map(|a| w.name(a)).collect::<Vec<_>>()));
            }
        }
    }
    r.check(
        format!("base change agrees with scalar extension on {} doubly open sets (degrees <= {upto})", both.len()),
        bad.is_empty(),
        bad.first().cloned().unwrap_or_default(),
    );
    let opens = w2.canonical_opens(&[]);
    r.append(check_support_condition(boxed, &opens, upto).to_report(w2).scoped("after base change"));
    r
}

/// `(M box T') box T''` against `M box T''`, compared as subspaces of the
/// common ambient on every canonical open of the `T''` window.
pub fn box_compose_check(p: &Presheaf, t1: &BaseRing, t2: &BaseRing, upto: i32) -> Result<Report> {
    if !hom_exists(&p.window().ring, t1) || !hom_exists(t1, t2) {
        return Err(Error::Precondition("base rings do not form a chain".into()));
    }
    let two_step = p.box_change(t1)?.box_change(t2)?;
    let direct = p.box_change(t2)?;
    let w = direct.window();
    let mut r = Report::new();
    let mut bad = Vec::new();
    let opens = w.canonical_opens(&[]);
    for j in &opens {
        for d in 0..=upto {
            if two_step.sections(j, d) != direct.sections(j, d) {
                bad.push(format!("{:?} degree {d}", j.ones().map(|a| w.name(a)).collect::<Vec<_>>()));
            }
        }
    }
    r.check(
        format!(
            "base change composes along {} -> {} -> {} on {} opens (degrees <= {upto})",
            p.window().ring,
            t1,
            t2,
            opens.len()
        ),
        bad.is_empty(),
        bad.first().cloned().unwrap_or_default(),
    );
    Ok(r)
}

/// Whether the order on the window is unchanged by passing to `t2`.
pub fn homeomorphic(p: &Presheaf, t2: &BaseRing) -> bool {
    let w = p.window();
    let w2 = w.with_ring(t2);
    (0..w.len()).all(|a| w.down_cone(a) == w2.down_cone(a))
}

/// Sheaf and root reflexivity for `M` and for `M box T'` with `T'` running
/// over the specializations of `T`. The quantifier over all flat base
/// changes is truncated to that family, as stated in the report.
pub fn s_membership(p: &Presheaf, upto: i32) -> Result<Report> {
    let mut r = Report::new();
    let w = p.window();
    let opens = w.canonical_opens(&[]);
    r.check(
        "base changes tested",
        true,
        format!("truncated to the specializations of {} (generic and subgeneric localizations)", w.ring),
    );
    r.append(is_sheaf(p, &opens, upto).to_report(w, "sheaf").scoped(&w.ring.to_string()));
    r.append(check_root_reflexive(p, &opens, upto).scoped(&w.ring.to_string()));
    for t in w.ring.specializations() {
        let b = p.box_change(&t)?;
        let bw = b.window();
        let bopens = bw.canonical_opens(&[]);
        let scope = format!("box {t}");
        r.append(is_sheaf(&b, &bopens, upto).to_report(bw, "sheaf").scoped(&scope));
        r.append(check_root_reflexive(&b, &bopens, upto).scoped(&scope));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordertopo::Window;
    use crate::presheaf::canonical_decomposition;
    use crate::rootsys::{build_root_system, CartanType};
    use std::sync::Arc;

    fn setup() -> (Arc<Window>, BaseRing) {
        let rs = Arc::new(build_root_system(CartanType::A1));
        let s = BaseRing::structure(rs.clone(), 5).unwrap();
        let g = BaseRing::generic(rs, 5).unwrap();
        (Arc::new(Window::s_closed(&s, 3, 2, 0)), g)
    }

    #[test]
    fn identity_base_change() {
        let (w, _) = setup();
        let st = Presheaf::structure(&w);
        let b = st.box_change(&w.ring).unwrap();
        for j in w.canonical_opens(&[]) {
            assert_eq!(b.dims(&j, 4), st.dims(&j, 4));
        }
        assert!(check_box_characterization(&st, &b, 4).passed());
    }

    #[test]
    fn structure_splits_generically() {
        let (w, g) = setup();
        let st = Presheaf::structure(&w);
        let b = st.box_change(&g).unwrap();
        assert!(check_box_characterization(&st, &b, 4).passed());
        assert_eq!(canonical_decomposition(&b).len(), 2);
        assert_eq!(b.dims(&w.full_set(), 4), vec![2, 0, 2, 0, 2]);
        assert!(!homeomorphic(&st, &g));
    }

    #[test]
    fn composition() {
        let (w, g) = setup();
        let st = Presheaf::structure(&w);
        let sub = BaseRing::subgeneric(w.rs.clone(), 5, 0).unwrap();
        assert!(box_compose_check(&st, &sub, &g, 4).unwrap().passed());
        assert!(box_compose_check(&st, &g, &sub, 4).is_err());
    }

    #[test]
    fn membership_of_leaves() {
        let (w, _) = setup();
        assert!(s_membership(&Presheaf::structure(&w), 4).unwrap().passed());
        assert!(s_membership(&Presheaf::skyscraper(&w, 1).unwrap(), 4).unwrap().passed());
    }
}
