//! The structure algebra: tuples over orbit labels subject to the coroot
//! congruences, its projections to label subsets, the involution attached
//! to a simple affine reflection, and the invariant/antiinvariant splitting.
//!
//! Over a localization `T` every module is stored as its lattice of
//! polynomial tuples: the elements of `M` that have no denominators. Such a
//! lattice is closed under division by the inverted coroots.

use std::collections::BTreeMap;

use crate::alcovegeom::affine_simple_root;
use crate::basering::BaseRing;
use crate::error::{Error, Result};
use crate::polyalg::{graded_solve, saturate, FreeLayout, GradedBasis, LocElem, Relation, SPoly, Subspace};
use crate::report::Report;

/// Default number of saturation rounds.
pub const SAT_STEPS: usize = 3;

/// An element of `sum_{x in labels} T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZTuple {
    pub labels: Vec<usize>,
    pub comps: Vec<LocElem>,
}

impl ZTuple {
    pub fn from_polys(labels: &[usize], polys: Vec<SPoly>) -> ZTuple {
        ZTuple { labels: labels.to_vec(), comps: polys.into_iter().map(LocElem::from_poly).collect() }
    }

    pub fn get(&self, x: usize) -> Option<&LocElem> {
        self.labels.iter().position(|&y| y == x).map(|i| &self.comps[i])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(LocElem::is_zero)
    }

    /// Labels carrying a nonzero component.
    pub fn support(&self) -> Vec<usize> {
        self.labels.iter().zip(&self.comps).filter(|(_, c)| !c.is_zero()).map(|(&x, _)| x).collect()
    }

    pub fn render(&self, ring: &BaseRing) -> String {
        let parts: Vec<String> =
            self.labels.iter().zip(&self.comps).map(|(&x, c)| format!("{}: {}", ring.rs.weyl.name(x), c)).collect();
        format!("[{}]", parts.join(", "))
    }
}

/// Graded bases of `Z_T(L)` and of the image `Z^L` of the projection.
#[derive(Clone, Debug)]
pub struct ZAlgebraBasis {
    pub labels: Vec<usize>,
    pub sections: GradedBasis,
    pub image: GradedBasis,
}

impl ZAlgebraBasis {
    /// Per-degree flag: does the image fill the congruence solutions?
    pub fn coincide(&self) -> Vec<bool> {
        self.sections.pieces.iter().zip(&self.image.pieces).map(|(a, b)| a == b).collect()
    }
}

/// Free layout with one degree-0 generator per label.
pub fn tuple_layout(ring: &BaseRing, n: usize) -> FreeLayout {
    FreeLayout::new(ring.p, ring.rank(), vec![0; n])
}

pub fn all_labels(ring: &BaseRing) -> Vec<usize> {
    (0..ring.rs.weyl.order()).collect()
}

/// Forms of the inverted coroots, used for saturation.
pub fn inverted_forms(ring: &BaseRing) -> Vec<Vec<u32>> {
    ring.inverted_roots().into_iter().map(|a| ring.coroot_form(a)).collect()
}

/// Congruences `z_x = z_{s_alpha x} mod alpha^vee` for `alpha` in `I_T`,
/// between positions of `labels`.
pub fn congruence_edges(ring: &BaseRing, labels: &[usize]) -> Vec<(usize, usize, SPoly)> {
    let pos: BTreeMap<usize, usize> = labels.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut edges = Vec::new();
    for (i, &x) in labels.iter().enumerate() {
        for a in ring.i_t() {
            let y = ring.rs.weyl.mul(ring.rs.reflection(a), x);
            if let Some(&j) = pos.get(&y) {
                if i < j {
                    edges.push((i, j, ring.coroot_poly(a)));
                }
            }
        }
    }
    edges
}

/// `Z_T(L)`: solutions of the congruence system on `labels`, degrees `0..=top`.
pub fn z_sections(ring: &BaseRing, labels: &[usize], top: i32) -> GradedBasis {
    let layout = tuple_layout(ring, labels.len());
    graded_solve(&layout, &Relation::Congruence(congruence_edges(ring, labels)), top)
        .expect("coroot congruences are homogeneous")
}

/// Projection of a vector in the layout over `from` to the layout over `to`
/// (a subset of `from`), in degree `d`.
pub fn project_labels(ring: &BaseRing, from: &[usize], to: &[usize], v: &[u32], d: i32) -> Vec<u32> {
    let src = tuple_layout(ring, from.len());
    let dst = tuple_layout(ring, to.len());
    let sb = src.blocks(d);
    let db = dst.blocks(d);
    let mut out = vec![0; dst.piece_dim(d)];
    for (j, x) in to.iter().enumerate() {
        let i = from.iter().position(|y| y == x).expect("target labels are a subset");
        out[db[j].0..db[j].0 + db[j].1].copy_from_slice(&v[sb[i].0..sb[i].0 + sb[i].1]);
    }
    out
}

/// `Z^L`: saturated image of the full structure algebra under projection.
pub fn z_image(ring: &BaseRing, labels: &[usize], top: i32) -> GradedBasis {
    let all = all_labels(ring);
    let full = z_sections(ring, &all, top);
    let layout = tuple_layout(ring, labels.len());
    let pieces: Vec<Subspace> = full
        .pieces
        .iter()
        .enumerate()
        .map(|(d, s)| s.image(layout.piece_dim(d as i32), |v| project_labels(ring, &all, labels, v, d as i32)))
        .collect();
    let pieces = saturate(&layout, &pieces, &inverted_forms(ring), SAT_STEPS);
    GradedBasis { layout, pieces }
}

pub fn z_basis(ring: &BaseRing, labels: &[usize], top: i32) -> ZAlgebraBasis {
    ZAlgebraBasis {
        labels: labels.to_vec(),
        sections: z_sections(ring, labels, top),
        image: z_image(ring, labels, top),
    }
}

/// Label sets of the components: cosets `W_T w`.
pub fn component_labels(ring: &BaseRing) -> Vec<Vec<usize>> {
    let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in all_labels(ring) {
        by.entry(ring.coset_label(x)).or_default().push(x);
    }
    by.into_values().collect()
}

/// Result of comparing `Z_T` with the sum of its component algebras.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub components: Vec<(Vec<usize>, GradedBasis)>,
    pub total_dims: Vec<usize>,
    pub summed_dims: Vec<usize>,
}

impl Decomposition {
    pub fn holds(&self) -> bool {
        self.total_dims == self.summed_dims
    }
}

/// Checks degreewise that `Z_T` is the direct sum of the `Z_T(Lambda)`.
pub fn component_decomposition(ring: &BaseRing, top: i32) -> Result<Decomposition> {
    let all = all_labels(ring);
    let full = z_sections(ring, &all, top);
    let comps: Vec<(Vec<usize>, GradedBasis)> = component_labels(ring)
        .into_iter()
        .map(|l| {
            let b = z_sections(ring, &l, top);
            (l, b)
        })
        .collect();
    let mut summed = vec![0; (top + 1) as usize];
    for (labels, basis) in &comps {
        for (d, s) in basis.pieces.iter().enumerate() {
            summed[d] += s.dim();
            // each component solution, extended by zero, is a global solution
            for v in s.basis() {
                let ext = extend_by_zero(ring, labels, &all, v, d as i32);
                if !full.pieces[d].contains(&ext) {
                    return Err(Error::CheckFailed(format!("component solution not global in degree {d}")));
                }
            }
        }
    }
    Ok(Decomposition { components: comps, total_dims: full.dims(), summed_dims: summed })
}

pub fn extend_by_zero(ring: &BaseRing, from: &[usize], to: &[usize], v: &[u32], d: i32) -> Vec<u32> {
    let src = tuple_layout(ring, from.len());
    let dst = tuple_layout(ring, to.len());
    let sb = src.blocks(d);
    let db = dst.blocks(d);
    let mut out = vec![0; dst.piece_dim(d)];
    for (i, x) in from.iter().enumerate() {
        let j = to.iter().position(|y| y == x).expect("source labels are a subset");
        out[db[j].0..db[j].0 + db[j].1].copy_from_slice(&v[sb[i].0..sb[i].0 + sb[i].1]);
    }
    out
}

/// Finite part of the simple affine reflection `s`, as a Weyl element.
pub fn finite_part(ring: &BaseRing, s: usize) -> usize {
    ring.rs.reflection(affine_simple_root(&ring.rs, s))
}

/// Right multiplication of labels by the finite part of `s`.
pub fn label_times_s(ring: &BaseRing, x: usize, s: usize) -> usize {
    ring.rs.weyl.mul(x, finite_part(ring, s))
}

pub fn is_s_invariant_labels(ring: &BaseRing, labels: &[usize], s: usize) -> bool {
    labels.iter().all(|&x| labels.contains(&label_times_s(ring, x, s)))
}

/// `eta_s(z)_x = z_{x s}`.
pub fn eta_s(ring: &BaseRing, z: &ZTuple, s: usize) -> Result<ZTuple> {
    if !is_s_invariant_labels(ring, &z.labels, s) {
        return Err(Error::NotSInvariant("label set".into()));
    }
    let comps = z.labels.iter().map(|&x| z.get(label_times_s(ring, x, s)).unwrap().clone()).collect();
    Ok(ZTuple { labels: z.labels.clone(), comps })
}

/// `eta_s` on a degree-`d` vector of the tuple layout over `labels`.
pub fn eta_vec(ring: &BaseRing, labels: &[usize], s: usize, v: &[u32], d: i32) -> Vec<u32> {
    let layout = tuple_layout(ring, labels.len());
    let b = layout.blocks(d);
    let mut out = vec![0; v.len()];
    for (i, &x) in labels.iter().enumerate() {
        let j = labels.iter().position(|&y| y == label_times_s(ring, x, s)).expect("s-invariant labels");
        out[b[i].0..b[i].0 + b[i].1].copy_from_slice(&v[b[j].0..b[j].0 + b[j].1]);
    }
    out
}

/// The degree-2 element `c_s` with `c_y = y(beta^vee)`, `s_beta` the finite part of `s`.
pub fn antiinvariant_generator(ring: &BaseRing, s: usize) -> ZTuple {
    let beta = affine_simple_root(&ring.rs, s);
    let labels = all_labels(ring);
    let polys = labels
        .iter()
        .map(|&y| {
            let v = ring.rs.weyl.act_coweight(y, &ring.rs.coroots[beta]);
            SPoly::linear(ring.p, &v)
        })
        .collect();
    ZTuple::from_polys(&labels, polys)
}

/// Restriction of a tuple to a subset of its labels.
pub fn restrict_tuple(z: &ZTuple, labels: &[usize]) -> ZTuple {
    ZTuple {
        labels: labels.to_vec(),
        comps: labels.iter().map(|&x| z.get(x).expect("label present").clone()).collect(),
    }
}

/// `z = a + b c_s` with `a = (z + eta z)/2` and `b = (z - eta z)/(2 c_s)`.
pub fn invariant_split(ring: &BaseRing, z: &ZTuple, s: usize) -> Result<(ZTuple, ZTuple)> {
    let lr = ring.loc_ring();
    let eta = eta_s(ring, z, s)?;
    let c = restrict_tuple(&antiinvariant_generator(ring, s), &z.labels);
    let half = crate::polyalg::Fp::new(ring.p).inv(2);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..z.labels.len() {
        a.push(lr.scale(&lr.add(&z.comps[i], &eta.comps[i]), half));
        let diff = lr.scale(&lr.sub(&z.comps[i], &eta.comps[i]), half);
        let q = lr.exact_divide(&diff, &c.comps[i])?.ok_or_else(|| {
            Error::CheckFailed(format!("antiinvariant part not divisible by c_s at {}", ring.rs.weyl.name(z.labels[i])))
        })?;
        b.push(q);
    }
    Ok((ZTuple { labels: z.labels.clone(), comps: a }, ZTuple { labels: z.labels.clone(), comps: b }))
}

/// `a + b c_s`.
pub fn reconstruct(ring: &BaseRing, a: &ZTuple, b: &ZTuple, s: usize) -> ZTuple {
    let lr = ring.loc_ring();
    let c = restrict_tuple(&antiinvariant_generator(ring, s), &a.labels);
    let comps = (0..a.labels.len()).map(|i| lr.add(&a.comps[i], &lr.mul(&b.comps[i], &c.comps[i]))).collect();
    ZTuple { labels: a.labels.clone(), comps }
}

/// Whether `z` satisfies every congruence defined on its labels.
pub fn satisfies_congruences(ring: &BaseRing, z: &ZTuple) -> Result<bool> {
    let lr = ring.loc_ring();
    for (i, &x) in z.labels.iter().enumerate() {
        for a in ring.i_t() {
            let y = ring.rs.weyl.mul(ring.rs.reflection(a), x);
            if let Some(zy) = z.get(y) {
                if !lr.congruent_mod_coroot(&z.comps[i], zy, a)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `delta_w`: the product of all positive coroots at `w`, zero elsewhere.
pub fn delta(ring: &BaseRing, w: usize) -> ZTuple {
    let labels = all_labels(ring);
    let prod = (0..ring.num_roots()).fold(SPoly::one(ring.p, ring.rank()), |acc, a| acc.mul(&ring.coroot_poly(a)));
    let polys = labels.iter().map(|&x| if x == w { prod.clone() } else { SPoly::zero(ring.p, ring.rank()) }).collect();
    ZTuple::from_polys(&labels, polys)
}

/// Invariant part `Z^{L,s}` of a graded basis over s-invariant `labels`.
pub fn invariant_part(ring: &BaseRing, basis: &GradedBasis, labels: &[usize], s: usize) -> Vec<Subspace> {
    basis
        .pieces
        .iter()
        .enumerate()
        .map(|(d, piece)| {
            let d = d as i32;
            piece.kernel(piece.ambient_dim(), |v| {
                let e = eta_vec(ring, labels, s, v, d);
                v.iter().zip(&e).map(|(&a, &b)| crate::polyalg::Fp::new(ring.p).sub(a, b)).collect()
            })
        })
        .collect()
}

/// A random homogeneous element of `Z_T` of even degree at most `top`.
pub fn random_z<R: rand::Rng>(ring: &BaseRing, basis: &GradedBasis, top: i32, rng: &mut R) -> (ZTuple, i32) {
    let labels = all_labels(ring);
    let d = 2 * rng.gen_range(0..=top / 2);
    let piece = &basis.pieces[d as usize];
    let c: Vec<u32> = (0..piece.dim()).map(|_| rng.gen_range(0..ring.p)).collect();
    let v = crate::polyalg::combine(ring.p, piece.ambient_dim(), &c, piece.basis());
    (ZTuple::from_polys(&labels, basis.layout.from_vec(&v, d)), d)
}

/// Splits each sample into invariant parts and rebuilds it.
pub fn check_split(ring: &BaseRing, s: usize, samples: &[ZTuple]) -> Report {
    let mut r = Report::new();
    let mut bad = Vec::new();
    for (i, z) in samples.iter().enumerate() {
        let ok = match invariant_split(ring, z, s) {
            Ok((a, b)) => {
                reconstruct(ring, &a, &b, s) == *z
                    && eta_s(ring, &a, s).is_ok_and(|e| e == a)
                    && eta_s(ring, &b, s).is_ok_and(|e| e == b)
                    && satisfies_congruences(ring, &a).unwrap_or(false)
                    && satisfies_congruences(ring, &b).unwrap_or(false)
            }
            Err(_) => false,
        };
        if !ok {
            bad.push(i);
        }
    }
    r.check(
        format!(
            "z = a + b c_s with invariant a, b for {} samples, s = {}",
            samples.len(),
            crate::alcovegeom::affine_simple_name(&ring.rs, s)
        ),
        bad.is_empty(),
        bad.first().map(|i| format!("sample {i}")).unwrap_or_default(),
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, CartanType};
    use std::sync::Arc;

    fn ring(ty: CartanType, inv: &str) -> BaseRing {
        let rs = Arc::new(build_root_system(ty));
        let v = crate::basering::parse_inverted(&rs, inv).unwrap();
        crate::basering::make_base_ring(rs, 5, v).unwrap()
    }

    #[test]
    fn a1_dims() {
        let r = ring(CartanType::A1, "none");
        assert_eq!(z_sections(&r, &[0, 1], 4).even_dims(), vec![1, 2, 2]);
        assert_eq!(z_sections(&r, &[0], 4).even_dims(), vec![1, 1, 1]);
    }

    #[test]
    fn a2_free_pattern() {
        let r = ring(CartanType::A2, "none");
        // basis degrees 0,2,2,4,4,6 over S = F_5[h1,h2]
        let s_dims = [1usize, 2, 3, 4];
        let gens = [0, 2, 2, 4, 4, 6];
        let expect: Vec<usize> =
            (0..4).map(|k| gens.iter().filter(|&&g| g <= 2 * k).map(|&g| s_dims[(k - g / 2) as usize]).sum()).collect();
        assert_eq!(z_sections(&r, &all_labels(&r), 6).even_dims(), expect);
        assert_eq!(expect, vec![1, 4, 9, 15]);
    }

    #[test]
    fn pair_image_is_congruence_pair() {
        let r = ring(CartanType::A1, "none");
        let b = z_basis(&r, &[0, 1], 4);
        assert!(b.coincide().iter().all(|&c| c));
        let single = z_image(&r, &[1], 4);
        assert_eq!(single.even_dims(), vec![1, 1, 1]);
    }

    #[test]
    fn eta_and_generator() {
        let r = ring(CartanType::A1, "none");
        let c = antiinvariant_generator(&r, 0);
        let h = SPoly::var(5, 1, 0);
        assert_eq!(c.comps[0].num, h);
        assert_eq!(c.comps[1].num, h.neg());
        let e = eta_s(&r, &c, 0).unwrap();
        assert_eq!(e.comps[0].num, h.neg());
        assert!(satisfies_congruences(&r, &c).unwrap());
        assert!(eta_s(&r, &restrict_tuple(&c, &[0]), 0).is_err());
    }

    #[test]
    fn split_examples_a1() {
        let r = ring(CartanType::A1, "none");
        let h = SPoly::var(5, 1, 0);
        let z = ZTuple::from_polys(&[0, 1], vec![h.clone(), SPoly::zero(5, 1)]);
        let (a, b) = invariant_split(&r, &z, 0).unwrap();
        assert_eq!(a.comps[0].num, h.scale(3));
        assert_eq!(a.comps[1].num, h.scale(3));
        assert_eq!(b.comps[0].num, SPoly::constant(5, 1, 3));
        assert_eq!(b.comps[1].num, SPoly::constant(5, 1, 3));
        assert_eq!(reconstruct(&r, &a, &b, 0), z);
        let c = antiinvariant_generator(&r, 1);
        let (a, b) = invariant_split(&r, &c, 1).unwrap();
        assert!(a.is_zero());
        assert!(b.comps.iter().all(|x| x.num == SPoly::one(5, 1)));
    }

    #[test]
    fn decomposition_generic() {
        let r = ring(CartanType::A1, "all");
        let dec = component_decomposition(&r, 4).unwrap();
        assert!(dec.holds());
        assert_eq!(dec.components.len(), 2);
        assert_eq!(dec.total_dims, vec![2, 0, 2, 0, 2]);
    }

    #[test]
    fn delta_is_supported_at_one_label() {
        let r = ring(CartanType::A2, "none");
        let d = delta(&r, 3);
        assert_eq!(d.support(), vec![3]);
        assert!(satisfies_congruences(&r, &d).unwrap());
    }
}
