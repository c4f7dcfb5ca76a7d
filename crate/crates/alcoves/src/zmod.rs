//! Graded modules over the structure algebra, presented inside free
//! ambients whose summands each carry an orbit label. The algebra acts on
//! a summand labelled `x` through the component `z_x`.

use std::collections::BTreeSet;

use crate::basering::BaseRing;
use crate::error::{Error, Result};
use crate::polyalg::{mask_vec, saturate, Fp, FreeLayout, SPoly, Subspace};
use crate::structalg::{
    all_labels, antiinvariant_generator, component_labels, inverted_forms, label_times_s, z_sections, SAT_STEPS,
};

/// Summands `(label, generator degree)` of a free graded `S`-module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambient {
    pub ring: BaseRing,
    pub summands: Vec<(usize, i32)>,
}

impl Ambient {
    pub fn new(ring: &BaseRing, summands: Vec<(usize, i32)>) -> Ambient {
        Ambient { ring: ring.clone(), summands }
    }

    pub fn layout(&self) -> FreeLayout {
        FreeLayout::new(self.ring.p, self.ring.rank(), self.summands.iter().map(|s| s.1).collect())
    }

    pub fn piece_dim(&self, d: i32) -> usize {
        self.layout().piece_dim(d)
    }

    pub fn labels(&self) -> BTreeSet<usize> {
        self.summands.iter().map(|s| s.0).collect()
    }

    /// Summand mask selecting the given labels.
    pub fn label_mask(&self, labels: &BTreeSet<usize>) -> Vec<bool> {
        self.summands.iter().map(|s| labels.contains(&s.0)).collect()
    }

    /// Coordinate mask in degree `d` from a summand mask.
    pub fn coord_mask(&self, summands: &[bool], d: i32) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.piece_dim(d));
        for ((_, len), &keep) in self.layout().blocks(d).into_iter().zip(summands) {
            out.extend(std::iter::repeat_n(keep, len));
        }
        out
    }

    pub fn project(&self, v: &[u32], d: i32, summands: &[bool]) -> Vec<u32> {
        mask_vec(v, &self.coord_mask(summands, d))
    }

    /// Action of a tuple `z` (indexed by label) of common degree `e`.
    pub fn act(&self, z: &[SPoly], e: i32, v: &[u32], d: i32) -> Vec<u32> {
        let polys: Vec<SPoly> = self.summands.iter().map(|s| z[s.0].clone()).collect();
        self.layout().mul_blockwise(v, d, &polys, e)
    }
}

/// A graded submodule of an ambient, degrees `0..=top`, stored as the lattice
/// of its elements without denominators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZModule {
    pub ambient: Ambient,
    pub pieces: Vec<Subspace>,
}

impl ZModule {
    pub fn zero(ambient: Ambient, top: i32) -> ZModule {
        let pieces = (0..=top).map(|d| Subspace::zero(ambient.ring.p, ambient.piece_dim(d))).collect();
        ZModule { ambient, pieces }
    }

    pub fn free(ambient: Ambient, top: i32) -> ZModule {
        let pieces = (0..=top).map(|d| Subspace::full(ambient.ring.p, ambient.piece_dim(d))).collect();
        ZModule { ambient, pieces }
    }

    /// Saturation of the given pieces with respect to the inverted coroots.
    pub fn from_pieces(ambient: Ambient, pieces: Vec<Subspace>) -> ZModule {
        let pieces = saturate(&ambient.layout(), &pieces, &inverted_forms(&ambient.ring), SAT_STEPS);
        ZModule { ambient, pieces }
    }

    /// Submodule generated over the structure algebra by homogeneous tuples.
    pub fn generated(ambient: Ambient, gens: &[(Vec<SPoly>, i32)], top: i32) -> Result<ZModule> {
        let layout = ambient.layout();
        let ring = ambient.ring.clone();
        let labels = all_labels(&ring);
        let z = z_sections(&ring, &labels, top);
        let zl = crate::structalg::tuple_layout(&ring, labels.len());
        let mut pieces: Vec<Subspace> = (0..=top).map(|d| Subspace::zero(ring.p, layout.piece_dim(d))).collect();
        for (g, gd) in gens {
            let gv = layout.to_vec(g, *gd)?;
            for e in 0..=(top - gd) {
                for zb in z.pieces[e as usize].basis() {
                    let zt = zl.from_vec(zb, e);
                    let w = ambient.act(&zt, e, &gv, *gd);
                    pieces[(gd + e) as usize].insert(&w);
                }
            }
        }
        Ok(ZModule::from_pieces(ambient, pieces))
    }

    pub fn top(&self) -> i32 {
        self.pieces.len() as i32 - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(Subspace::dim).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(Subspace::is_zero)
    }

    fn projected(&self, summands: &[bool]) -> ZModule {
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .map(|(d, s)| {
                let d = d as i32;
                let cm = self.ambient.coord_mask(summands, d);
                s.image(s.ambient_dim(), |v| mask_vec(v, &cm))
            })
            .collect();
        ZModule::from_pieces(self.ambient.clone(), pieces)
    }

    /// `M^x`: projection to the summands labelled `x`.
    pub fn stalk(&self, x: usize) -> ZModule {
        self.restrict_support(&BTreeSet::from([x]))
    }

    /// `M^L`: projection to the summands with labels in `L`.
    pub fn restrict_support(&self, labels: &BTreeSet<usize>) -> ZModule {
        self.projected(&self.ambient.label_mask(labels))
    }

    pub fn z_support(&self) -> BTreeSet<usize> {
        self.ambient.labels().into_iter().filter(|&x| !self.stalk(x).is_zero()).collect()
    }

    /// Labels on which a degree-`d` element has a nonzero component.
    pub fn z_support_elem(&self, v: &[u32], d: i32) -> BTreeSet<usize> {
        let blocks = self.ambient.layout().blocks(d);
        self.ambient
            .summands
            .iter()
            .zip(blocks)
            .filter(|(_, (off, len))| v[*off..off + len].iter().any(|&c| c != 0))
            .map(|(s, _)| s.0)
            .collect()
    }

    /// Factors over the components; errors if the dimensions do not add up.
    pub fn canonical_decomposition(&self) -> Result<Vec<(Vec<usize>, ZModule)>> {
        let mut out = Vec::new();
        let mut summed = vec![0; self.pieces.len()];
        for labels in component_labels(&self.ambient.ring) {
            let set: BTreeSet<usize> = labels.iter().copied().collect();
            if self.ambient.labels().is_disjoint(&set) {
                continue;
            }
            let f = self.restrict_support(&set);
            for (d, s) in f.pieces.iter().enumerate() {
                summed[d] += s.dim();
            }
            out.push((labels, f));
        }
        if summed != self.dims() {
            return Err(Error::CheckFailed(format!(
                "component factors have dims {summed:?}, module has {:?}",
                self.dims()
            )));
        }
        Ok(out)
    }

    /// Whether every structure-algebra element of degree `<= top` maps the
    /// module into itself.
    pub fn is_z_stable(&self) -> bool {
        let ring = &self.ambient.ring;
        let labels = all_labels(ring);
        let top = self.top();
        let z = z_sections(ring, &labels, top);
        let zl = crate::structalg::tuple_layout(ring, labels.len());
        for e in 1..=top {
            for zb in z.pieces[e as usize].basis() {
                let zt = zl.from_vec(zb, e);
                for d in 0..=(top - e) {
                    for v in self.pieces[d as usize].basis() {
                        let w = self.ambient.act(&zt, e, v, d);
                        if !self.pieces[(d + e) as usize].contains(&w) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `M^{s-tw}`: each summand label `y` becomes `y s`.
    pub fn twist(&self, s: usize) -> ZModule {
        let ring = &self.ambient.ring;
        let summands = self.ambient.summands.iter().map(|&(y, g)| (label_times_s(ring, y, s), g)).collect();
        ZModule { ambient: Ambient::new(ring, summands), pieces: self.pieces.clone() }
    }

    /// `Z (x)_{Z^s} M`, embedded summand by summand: each summand `j` with
    /// label `y` yields a direct copy labelled `y` and a crossed copy
    /// labelled `y s`, and `(m, m')` maps to `(m + c m', m - c m')` with
    /// `c = y(beta^vee)`.
    pub fn induce(&self, s: usize) -> Result<ZModule> {
        let ring = &self.ambient.ring;
        let labels = self.z_support();
        if !labels.iter().all(|&x| labels.contains(&label_times_s(ring, x, s))) {
            return Err(Error::NotSInvariant("module support".into()));
        }
        let amb = induced_ambient(&self.ambient, s);
        let pieces = (0..=self.top())
            .map(|d| {
                let lower = if d >= 2 { Some(&self.pieces[(d - 2) as usize]) } else { None };
                induce_piece(&self.ambient, &amb, s, &self.pieces[d as usize], lower, d)
            })
            .collect();
        Ok(ZModule::from_pieces(amb, pieces))
    }

    /// `eta_s^M`: swaps the direct and crossed copy of every summand of an
    /// induced ambient.
    pub fn induced_eta(v: &[u32], amb: &Ambient, d: i32) -> Vec<u32> {
        swap_pairs(amb, v, d)
    }

    /// Degree-bounded root reflexivity: the intersection over positive roots
    /// of the localizations inverting every other coroot equals the module,
    /// in degrees `0..=upto`. Needs `2 * steps` degrees of headroom.
    pub fn is_root_reflexive(&self, upto: i32, steps: usize) -> bool {
        let ring = &self.ambient.ring;
        let layout = self.ambient.layout();
        let n = ring.num_roots();
        let mut inter: Option<Vec<Subspace>> = None;
        for a in 0..n {
            let forms: Vec<Vec<u32>> = (0..n).filter(|&b| b != a).map(|b| ring.coroot_form(b)).collect();
            let sat = saturate(&layout, &self.pieces, &forms, steps);
            inter = Some(match inter {
                None => sat,
                Some(prev) => prev.iter().zip(&sat).map(|(x, y)| x.intersect(y)).collect(),
            });
        }
        let Some(inter) = inter else { return true };
        (0..=upto.min(self.top())).all(|d| inter[d as usize] == self.pieces[d as usize])
    }
}

/// Ambient of `Z (x)_{Z^s} M`: summand `2j` direct, `2j + 1` crossed.
pub fn induced_ambient(amb: &Ambient, s: usize) -> Ambient {
    let ring = &amb.ring;
    let mut summands = Vec::with_capacity(2 * amb.summands.len());
    for &(y, g) in &amb.summands {
        summands.push((y, g));
        summands.push((label_times_s(ring, y, s), g));
    }
    Ambient::new(ring, summands)
}

/// Image of `M_d + M_{d-2}` under the induction embedding, in degree `d`.
pub fn induce_piece(
    amb: &Ambient,
    ind: &Ambient,
    s: usize,
    m: &Subspace,
    lower: Option<&Subspace>,
    d: i32,
) -> Subspace {
    let mut out = Subspace::zero(amb.ring.p, ind.piece_dim(d));
    for v in m.basis() {
        out.insert(&interleave(amb, ind, v, v, d));
    }
    if let Some(lower) = lower {
        let forms = c_forms(amb, s);
        let f = Fp::new(amb.ring.p);
        let layout = amb.layout();
        for v in lower.basis() {
            let cv = layout.mul_linear_blockwise(v, d - 2, &forms);
            let neg: Vec<u32> = cv.iter().map(|&x| f.neg(x)).collect();
            out.insert(&interleave(amb, ind, &cv, &neg, d));
        }
    }
    out
}

/// `y(beta^vee)` per summand, `s_beta` the finite part of `s`.
pub fn c_forms(amb: &Ambient, s: usize) -> Vec<Vec<u32>> {
    let ring = &amb.ring;
    let beta = crate::alcovegeom::affine_simple_root(&ring.rs, s);
    amb.summands.iter().map(|&(y, _)| ring.moved_coroot_form(y, beta)).collect()
}

/// Places `direct` on the even summands and `crossed` on the odd summands.
pub fn interleave(amb: &Ambient, ind: &Ambient, direct: &[u32], crossed: &[u32], d: i32) -> Vec<u32> {
    let src = amb.layout().blocks(d);
    let dst = ind.layout().blocks(d);
    let mut out = vec![0; ind.piece_dim(d)];
    for (j, &(off, len)) in src.iter().enumerate() {
        let (a, _) = dst[2 * j];
        let (b, _) = dst[2 * j + 1];
        out[a..a + len].copy_from_slice(&direct[off..off + len]);
        out[b..b + len].copy_from_slice(&crossed[off..off + len]);
    }
    out
}

/// Swaps summands `2j` and `2j + 1`.
pub fn swap_pairs(ind: &Ambient, v: &[u32], d: i32) -> Vec<u32> {
    let blocks = ind.layout().blocks(d);
    let mut out = vec![0; v.len()];
    for j in 0..blocks.len() / 2 {
        let (a, len) = blocks[2 * j];
        let (b, _) = blocks[2 * j + 1];
        out[a..a + len].copy_from_slice(&v[b..b + len]);
        out[b..b + len].copy_from_slice(&v[a..a + len]);
    }
    out
}

/// The abstract induced action: `z (m, m') = (a m + b c^2 m', a m' + b m)`
/// with `z = a + b c_s`. Used to cross-check the embedding.
pub fn induced_action_abstract(
    amb: &Ambient,
    s: usize,
    a: &[SPoly],
    b: &[SPoly],
    m: &[SPoly],
    m2: &[SPoly],
) -> (Vec<SPoly>, Vec<SPoly>) {
    let ring = &amb.ring;
    let c = antiinvariant_generator(ring, s);
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (j, &(y, _)) in amb.summands.iter().enumerate() {
        let cy = &c.comps[y].num;
        first.push(a[y].mul(&m[j]).add(&b[y].mul(&cy.mul(cy)).mul(&m2[j])));
        second.push(a[y].mul(&m2[j]).add(&b[y].mul(&m[j])));
    }
    (first, second)
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

    fn z_module(r: &BaseRing, top: i32) -> ZModule {
        let labels = all_labels(r);
        let amb = Ambient::new(r, labels.iter().map(|&x| (x, 0)).collect());
        let one: Vec<SPoly> = labels.iter().map(|_| SPoly::one(r.p, r.rank())).collect();
        ZModule::generated(amb, &[(one, 0)], top).unwrap()
    }

    #[test]
    fn structure_module_dims_and_stalks() {
        let r = ring(CartanType::A1, "none");
        let z = z_module(&r, 4);
        assert_eq!(z.dims(), vec![1, 0, 2, 0, 2]);
        assert_eq!(z.stalk(0).dims(), vec![1, 0, 1, 0, 1]);
        assert_eq!(z.z_support(), BTreeSet::from([0, 1]));
        assert!(z.is_z_stable());
        assert!(z.restrict_support(&BTreeSet::new()).is_zero());
        assert_eq!(z.restrict_support(&BTreeSet::from([0, 1])), z);
    }

    #[test]
    fn induce_dims_a1() {
        let r = ring(CartanType::A1, "none");
        let z = z_module(&r, 4);
        let ind = z.induce(0).unwrap();
        assert_eq!(ind.dims(), vec![1, 0, 3, 0, 4]);
        assert!(ind.is_z_stable());
    }

    #[test]
    fn twist_moves_support() {
        let r = ring(CartanType::A1, "none");
        let amb = Ambient::new(&r, vec![(0, 0)]);
        let m = ZModule::free(amb, 2);
        assert_eq!(m.twist(0).z_support(), BTreeSet::from([1]));
        assert_eq!(m.twist(0).twist(0), m);
    }

    #[test]
    fn reflexivity_examples() {
        let r = ring(CartanType::A2, "none");
        let amb = Ambient::new(&r, vec![(0, 0)]);
        assert!(ZModule::free(amb.clone(), 6).is_root_reflexive(2, 2));
        // the maximal homogeneous ideal is not reflexive
        let x = SPoly::var(5, 2, 0);
        let y = SPoly::var(5, 2, 1);
        let ideal = ZModule::generated(amb, &[(vec![x], 2), (vec![y], 2)], 6).unwrap();
        assert!(!ideal.is_root_reflexive(2, 2));
        assert!(z_module(&r, 8).is_root_reflexive(4, 2));
    }

    #[test]
    fn generic_decomposition() {
        let r = ring(CartanType::A2, "all");
        let z = z_module(&r, 4);
        let dec = z.canonical_decomposition().unwrap();
        assert_eq!(dec.len(), 6);
    }
}
