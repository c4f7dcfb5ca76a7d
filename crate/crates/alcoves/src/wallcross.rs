//! Wall-crossing functors `theta_s = (eps_s .)^+` on presheaves.

use std::collections::BTreeSet;

use rand::Rng;

use crate::basechange::s_membership;
use crate::basering::BaseRing;
use crate::error::{Error, Result};
use crate::ordertopo::AlcoveSet;
use crate::polyalg::{combine, kernel_mod, solve, Fp, Subspace};
use crate::presheaf::{is_sheaf_with, Presheaf};
use crate::report::Report;
use crate::structalg::{inverted_forms, label_times_s};
use crate::zmod::swap_pairs;

/// `M`, `eps_s M` and `theta_s M` sharing one constructor tree.
#[derive(Clone, Debug)]
pub struct WallCrossing {
    pub s: usize,
    pub source: Presheaf,
    pub eps: Presheaf,
    pub theta: Presheaf,
}

fn names(p: &Presheaf, j: &AlcoveSet) -> String {
    let w = p.window();
    format!("{{{}}}", j.ones().map(|a| w.name(a)).collect::<Vec<_>>().join(", "))
}

impl WallCrossing {
    pub fn new(p: &Presheaf, s: usize) -> Result<WallCrossing> {
        let eps = p.epsilon(s)?;
        let theta = eps.plus();
        Ok(WallCrossing { s, source: p.clone(), eps, theta })
    }

    /// Kernel of the comparison `eps_s M(J) -> theta_s M(J)` in degree `d`.
    pub fn rho_kernel(&self, j: &AlcoveSet, d: i32) -> Subspace {
        let sec = self.eps.sections(j, d);
        let mask = self.theta.mask(j);
        sec.kernel(sec.ambient_dim(), |v| self.theta.ambient().project(v, d, &mask))
    }

    /// The comparison map is injective and its image saturates to the target.
    pub fn rho_is_iso(&self, j: &AlcoveSet, d: i32) -> bool {
        self.rho_kernel(j, d).is_zero() && self.eps.sections(j, d).dim() == self.theta.sections(j, d).dim()
    }

    pub fn sharp(&self, j: &AlcoveSet) -> Result<AlcoveSet> {
        self.source.window().sharp(j, self.s)
    }

    pub fn flat(&self, j: &AlcoveSet) -> Result<AlcoveSet> {
        self.source.window().flat(j, self.s)
    }

    pub fn is_invariant(&self, j: &AlcoveSet) -> bool {
        self.source.window().is_s_invariant(j, self.s).unwrap_or(false)
    }
}

/// Comparison isomorphism on `s`-invariant opens, and injectivity of
/// `eps_s M(J#) -> sum_x eps_s M((J# n x)_<=)^x` for every canonical `J`.
pub fn check_characterization(wc: &WallCrossing, opens: &[AlcoveSet], upto: i32) -> Result<Report> {
    let mut r = Report::new();
    let inv: Vec<&AlcoveSet> = opens.iter().filter(|j| wc.is_invariant(j)).collect();
    let mut bad = Vec::new();
    for j in &inv {
        for d in 0..=upto {
            if !wc.rho_is_iso(j, d) {
                bad.push(format!("{} degree {d}", names(&wc.source, j)));
            }
        }
    }
    r.check(
        format!("comparison map is an isomorphism on {} s-invariant opens (degrees <= {upto})", inv.len()),
        bad.is_empty(),
        bad.first().cloned().unwrap_or_default(),
    );
    let mut bad = Vec::new();
    for j in opens {
        let js = wc.sharp(j)?;
        for d in 0..=upto {
            if !wc.rho_kernel(&js, d).is_zero() {
                bad.push(format!("{} degree {d}", names(&wc.source, &js)));
            }
        }
    }
    r.check(
        format!(
            "injectivity into the orbit stalks over J u Js for {} canonical opens (degrees <= {upto})",
            opens.len()
        ),
        bad.is_empty(),
        bad.first().cloned().unwrap_or_default(),
    );
    Ok(r)
}

/// `eta_s` on a section over an `s`-invariant open of `eps_s M` or
/// `theta_s M`: swaps each summand with its crossed partner.
pub fn eta_on_sections(p: &Presheaf, s: usize, j: &AlcoveSet, v: &[u32], d: i32) -> Result<Vec<u32>> {
    if !p.window().is_s_invariant(j, s)? {
        return Err(Error::Precondition("open is not s-invariant".into()));
    }
    let amb = p.ambient();
    let paired = amb.summands.len().is_multiple_of(2)
        && amb.summands.chunks(2).all(|c| c[1].0 == label_times_s(&amb.ring, c[0].0, s) && c[0].1 == c[1].1);
    if !paired {
        return Err(Error::Precondition("presheaf is not a wall-crossing image".into()));
    }
    let out = swap_pairs(amb, v, d);
    if !p.sections(j, d).contains(&out) {
        return Err(Error::CheckFailed("eta does not preserve the sections".into()));
    }
    Ok(out)
}

/// `eta_s`-fixed part of a subspace of a paired ambient.
fn fixed_space(p: &Presheaf, sec: &Subspace, d: i32) -> Subspace {
    let f = Fp::new(p.ambient().ring.p);
    sec.kernel(sec.ambient_dim(), |v| swap_pairs(p.ambient(), v, d).iter().zip(v).map(|(&a, &b)| f.sub(a, b)).collect())
}

/// `eta_s` is an involution of the sections over each `s`-invariant open,
/// commutes with restriction, and fixes exactly the diagonal copy of `M(J)`.
pub fn check_eta(wc: &WallCrossing, opens: &[AlcoveSet], upto: i32) -> Result<Report> {
    let mut r = Report::new();
    let inv: Vec<&AlcoveSet> = opens.iter().filter(|j| wc.is_invariant(j)).collect();
    let (mut invol, mut compat, mut fixed) = (Vec::new(), Vec::new(), Vec::new());
    for j in &inv {
        for d in 0..=upto {
            let sec = wc.theta.sections(j, d);
            for v in sec.basis() {
                let e = eta_on_sections(&wc.theta, wc.s, j, v, d)?;
                if eta_on_sections(&wc.theta, wc.s, j, &e, d)? != *v {
                    invol.push(names(&wc.source, j));
                }
                for j2 in inv.iter().filter(|j2| j2.is_subset(j)) {
                    let a = wc.theta.restrict(j, j2, &e, d);
                    let b = eta_on_sections(&wc.theta, wc.s, j2, &wc.theta.restrict(j, j2, v, d), d)?;
                    if a != b {
                        compat.push(names(&wc.source, j2));
                    }
                }
            }
            let esec = wc.eps.sections(j, d);
            if fixed_space(&wc.eps, &esec, d).dim() != wc.source.sections(j, d).dim() {
                fixed.push(format!("{} degree {d}", names(&wc.source, j)));
            }
        }
    }
    r.check("eta is an involution on sections", invol.is_empty(), invol.first().cloned().unwrap_or_default());
    r.check("eta commutes with restriction", compat.is_empty(), compat.first().cloned().unwrap_or_default());
    r.check("eta fixes exactly the diagonal copy", fixed.is_empty(), fixed.first().cloned().unwrap_or_default());
    Ok(r)
}

/// A section over `J u Js` restricting to the given one and fixed by `eta_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub open: AlcoveSet,
    /// Inverted coroots the input section was multiplied by before lifting.
    pub units: Vec<usize>,
    pub degree: i32,
    pub section: Vec<u32>,
}

fn restrict_with_eta(wc: &WallCrossing, js: &AlcoveSet, j: &AlcoveSet, b: &[u32], e: i32) -> Vec<u32> {
    let f = Fp::new(wc.theta.ambient().ring.p);
    let mut row = wc.theta.restrict(js, j, b, e);
    row.extend(swap_pairs(wc.theta.ambient(), b, e).iter().zip(b).map(|(&x, &y)| f.sub(x, y)));
    row
}

/// Whether `m` (degree `d`, over `j`) restricts to an `eta_s`-fixed section over `J n Js`.
pub fn is_flat_invariant(wc: &WallCrossing, j: &AlcoveSet, m: &[u32], d: i32) -> Result<bool> {
    let jf = wc.flat(j)?;
    let r = wc.theta.restrict(j, &jf, m, d);
    Ok(eta_on_sections(&wc.theta, wc.s, &jf, &r, d)? == r)
}

/// The unique `eta_s`-fixed extension of `m` to `J u Js`.
///
/// `membership` must be a passing membership report for the source. The
/// extension is found by solving the linear system for fixed lifts; the
/// homogeneous system must have only the zero solution.
pub fn s_invariant_extension(
    wc: &WallCrossing,
    membership: &Report,
    j: &AlcoveSet,
    m: &[u32],
    d: i32,
) -> Result<Extension> {
    if !membership.passed() {
        return Err(Error::Precondition("source did not pass the membership test".into()));
    }
    if !wc.theta.sections(j, d).contains(m) {
        return Err(Error::Precondition("input is not a section".into()));
    }
    if !is_flat_invariant(wc, j, m, d)? {
        return Err(Error::Precondition("restriction to J n Js is not s-invariant".into()));
    }
    let js = wc.sharp(j)?;
    let ring = &wc.theta.ambient().ring;
    let p = ring.p;
    let layout = wc.theta.layout();
    let forms = inverted_forms(ring);
    let inv_roots = ring.inverted_roots();
    // multiply by inverted coroots when the lift needs denominators
    let mut attempts: Vec<Vec<usize>> = vec![Vec::new()];
    for k in 0..forms.len() {
        attempts.push(vec![k]);
        attempts.push(vec![k, k]);
    }
    for units in attempts {
        let e = d + 2 * units.len() as i32;
        let mut target = m.to_vec();
        let mut deg = d;
        for &k in &units {
            target = layout.mul_linear(&target, deg, &forms[k]);
            deg += 2;
        }
        let basis = wc.theta.sections(&js, e);
        let rows: Vec<Vec<u32>> = basis.basis().iter().map(|b| restrict_with_eta(wc, &js, j, b, e)).collect();
        let zero_len = wc.theta.ambient().piece_dim(e);
        let mut want = target.clone();
        want.extend(std::iter::repeat_n(0, zero_len));
        if let Some(c) = solve(p, &rows, &want) {
            let n = rows.first().map_or(0, Vec::len);
            if !kernel_mod(p, &rows, &Subspace::zero(p, n)).is_empty() {
                return Err(Error::CheckFailed("invariant extension is not unique".into()));
            }
            return Ok(Extension {
                open: js,
                units: units.iter().map(|&k| inv_roots[k]).collect(),
                degree: e,
                section: combine(p, basis.ambient_dim(), &c, basis.basis()),
            });
        }
    }
    Err(Error::CheckFailed("no invariant extension exists".into()))
}

/// Sections over `j` obtained by restricting random `eta_s`-fixed sections
/// over `J u Js`; they satisfy the hypothesis of [`s_invariant_extension`].
pub fn sample_flat_invariant_sections<R: Rng>(
    wc: &WallCrossing,
    j: &AlcoveSet,
    d: i32,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Vec<u32>>> {
    let js = wc.sharp(j)?;
    let sec = wc.theta.sections(&js, d);
    let fixed = fixed_space(&wc.theta, &sec, d);
    let p = wc.theta.ambient().ring.p;
    Ok((0..count)
        .map(|_| {
            let c: Vec<u32> = (0..fixed.dim()).map(|_| rng.gen_range(0..p)).collect();
            let v = combine(p, fixed.ambient_dim(), &c, fixed.basis());
            wc.theta.restrict(&js, j, &v, d)
        })
        .collect())
}

/// For a generic base ring and each label `x`: the factor of `theta_s M`
/// at `x` against `M^x + twist(M^{xs})`, dimensionwise on every open.
pub fn check_decgen(p: &Presheaf, s: usize, opens: &[AlcoveSet], upto: i32) -> Result<Report> {
    let w = p.window();
    let ring = &w.ring;
    if !ring.is_generic() {
        return Err(Error::Precondition("base ring is not generic".into()));
    }
    let wc = WallCrossing::new(p, s)?;
    let mut r = Report::new();
    for x in w.all_labels() {
        let xs = label_times_s(ring, x, s);
        let mut lambda = w.empty_set();
        for a in 0..w.len() {
            if w.label(a) == x {
                lambda.insert(a);
            }
        }
        let lhs = wc.theta.component(&BTreeSet::from([x]));
        let twisted = p.component(&BTreeSet::from([xs])).twist(s, &lambda, upto)?;
        let rhs = Presheaf::sum(w, vec![p.component(&BTreeSet::from([x])), twisted])?;
        let bad: Vec<String> =
            opens.iter().filter(|j| lhs.dims(j, upto) != rhs.dims(j, upto)).map(|j| names(p, j)).collect();
        r.check(
            format!("component {} of the wall crossing splits (degrees <= {upto})", w.rs.weyl.name(x)),
            bad.is_empty(),
            bad.first().cloned().unwrap_or_default(),
        );
    }
    Ok(r)
}

/// `theta_s(M) box T'` against `theta_s(M box T')` on the canonical opens
/// of the `T'` window, compared as subspaces of the common ambient.
pub fn check_wallcross_base_change(p: &Presheaf, s: usize, t2: &BaseRing, upto: i32) -> Result<Report> {
    let lhs = p.theta(s)?.box_change(t2)?;
    let rhs = p.box_change(t2)?.theta(s)?;
    let w = lhs.window();
    let opens = w.canonical_opens(&[s]);
    let mut bad = Vec::new();
    for j in &opens {
        for d in 0..=upto {
            if lhs.sections(j, d) != rhs.sections(j, d) {
                bad.push(format!("{} degree {d}", names(&lhs, j)));
            }
        }
    }
    let mut r = Report::new();
    r.check(
        format!(
            "wall crossing commutes with base change {} -> {} on {} opens (degrees <= {upto})",
            p.window().ring,
            t2,
            opens.len()
        ),
        bad.is_empty(),
        bad.first().cloned().unwrap_or_default(),
    );
    Ok(r)
}

/// Covers of an `s`-invariant open by the largest `s`-invariant opens
/// missing one maximal alcove.
pub fn s_invariant_cover(p: &Presheaf, s: usize, j: &AlcoveSet) -> Vec<AlcoveSet> {
    let w = p.window();
    if !w.is_s_invariant(j, s).unwrap_or(false) {
        return Vec::new();
    }
    let mut out: Vec<AlcoveSet> = Vec::new();
    for c in crate::presheaf::maximal_cover(w, j) {
        if let Ok(f) = w.flat(&c, s) {
            if !out.contains(&f) {
                out.push(f);
            }
        }
    }
    let mut union = w.empty_set();
    for c in &out {
        union.union_with(c);
    }
    if out.len() < 2 || union != *j {
        return Vec::new();
    }
    out
}

/// Membership of `theta_s M`, given membership of `M`, plus the sheaf
/// property for `s`-invariant covers.
pub fn check_s_preservation(p: &Presheaf, s: usize, upto: i32) -> Result<Report> {
    let before = s_membership(p, upto)?;
    if !before.passed() {
        return Err(Error::Precondition(format!(
            "{} is not a root-reflexive sheaf stable under base change",
            p.describe()
        )));
    }
    let theta = p.theta(s)?;
    let mut r = s_membership(&theta, upto)?.scoped("wall crossing");
    let opens = theta.window().canonical_opens(&[s]);
    let rep = is_sheaf_with(&theta, &opens, upto, |j| s_invariant_cover(&theta, s, j));
    r.append(rep.to_report(theta.window(), "sheaf for s-invariant covers").scoped("wall crossing"));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordertopo::Window;
    use crate::presheaf::check_support_condition;
    use crate::rootsys::{build_root_system, CartanType};
    use rand::SeedableRng;
    use std::sync::Arc;

    fn window(generic: bool) -> Arc<Window> {
        let rs = Arc::new(build_root_system(CartanType::A1));
        let ring = if generic { BaseRing::generic(rs, 5).unwrap() } else { BaseRing::structure(rs, 5).unwrap() };
        Arc::new(Window::s_closed(&ring, 3, 2, 0))
    }

    #[test]
    fn characterization_on_skyscraper() {
        let w = window(false);
        let opens = w.canonical_opens(&[0]);
        for s in 0..2 {
            let w = Arc::new(Window::s_closed(&w.ring, 3, 2, s));
            let opens = w.canonical_opens(&[s]);
            let wc = WallCrossing::new(&Presheaf::skyscraper(&w, 0).unwrap(), s).unwrap();
            assert!(check_characterization(&wc, &opens, 4).unwrap().passed());
            assert!(check_eta(&wc, &opens, 4).unwrap().passed());
            assert!(check_support_condition(&wc.theta, &opens, 4).passed());
        }
        let wc = WallCrossing::new(&Presheaf::skyscraper(&w, 0).unwrap(), 0).unwrap();
        assert!(!check_support_condition(&wc.eps, &opens, 4).passed());
    }

    #[test]
    fn global_sections_add_shift() {
        let w = window(false);
        let st = Presheaf::structure(&w);
        let th = st.theta(0).unwrap();
        let full = w.full_set();
        let m = st.dims(&full, 6);
        let expect: Vec<usize> = (0..=6).map(|d| m[d] + if d >= 2 { m[d - 2] } else { 0 }).collect();
        assert_eq!(th.dims(&full, 6), expect);
        let zero = Presheaf::zero(&w).theta(0).unwrap();
        assert!(zero.dims(&full, 4).iter().all(|&x| x == 0));
    }

    #[test]
    fn decgen_generic() {
        let w = window(true);
        let opens = w.canonical_opens(&[0]);
        let sky = Presheaf::skyscraper(&w, 0).unwrap();
        assert!(check_decgen(&sky, 0, &opens, 4).unwrap().passed());
        assert!(check_decgen(&Presheaf::structure(&w), 0, &opens, 4).unwrap().passed());
    }

    #[test]
    fn invariant_extension_restricts_to_input() {
        let w = window(false);
        let st = Presheaf::structure(&w);
        let member = s_membership(&st, 4).unwrap();
        let wc = WallCrossing::new(&st, 0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let opens = w.canonical_opens(&[0]);
        let j = opens.iter().find(|j| !wc.is_invariant(j) && !j.is_clear()).unwrap();
        for m in sample_flat_invariant_sections(&wc, j, 2, 5, &mut rng).unwrap() {
            let ext = s_invariant_extension(&wc, &member, j, &m, 2).unwrap();
            assert!(ext.units.is_empty());
            assert_eq!(wc.theta.restrict(&ext.open, j, &ext.section, 2), m);
        }
        let bogus =
            Report { lines: vec![crate::report::Line { property: "x".into(), passed: false, detail: String::new() }] };
        assert!(s_invariant_extension(&wc, &bogus, j, &vec![0; wc.theta.ambient().piece_dim(2)], 2).is_err());
    }

    #[test]
    fn base_change_and_preservation() {
        let w = window(false);
        let g = BaseRing::generic(w.rs.clone(), 5).unwrap();
        let st = Presheaf::structure(&w);
        assert!(check_wallcross_base_change(&st, 0, &g, 4).unwrap().passed());
        assert!(check_wallcross_base_change(&st, 0, &w.ring, 4).unwrap().passed());
        assert!(check_s_preservation(&Presheaf::skyscraper(&w, 0).unwrap(), 0, 4).unwrap().passed());
        let wg = window(true);
        let stg = Presheaf::structure(&wg);
        let j =
            wg.canonical_opens(&[]).into_iter().find(|j| !crate::presheaf::maximal_cover(&wg, j).is_empty()).unwrap();
        let bad = stg.faulty(&j);
        assert!(matches!(check_s_preservation(&bad, 0, 4), Err(Error::Precondition(_))));
    }
}
