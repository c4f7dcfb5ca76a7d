//! Base rings `T = S[alpha^vee^-1 : alpha in U]` described by the inverted set `U`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polyalg::{LocRing, SPoly};
use crate::rootsys::{is_prime, RootSystem};

#[derive(Clone, Debug)]
pub struct BaseRing {
    pub rs: Arc<RootSystem>,
    pub p: u32,
    /// `inverted[a]` says whether the coroot of positive root `a` is a unit.
    pub inverted: Vec<bool>,
    /// Roots whose reflections lie in the subgroup generated by `I_T`.
    pub r_t: Vec<bool>,
    /// Membership of each finite Weyl element in that reflection subgroup.
    pub w_t: Vec<bool>,
}

impl PartialEq for BaseRing {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.inverted == o.inverted && self.rs.cartan_type == o.rs.cartan_type
    }
}

impl Eq for BaseRing {}

fn reflection_subgroup(rs: &RootSystem, gens: &[usize]) -> Vec<bool> {
    let w = &rs.weyl;
    let mut inside = vec![false; w.order()];
    inside[w.identity()] = true;
    let mut frontier = vec![w.identity()];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = w.mul(rs.reflection(g), x);
            if !inside[y] {
                inside[y] = true;
                frontier.push(y);
            }
        }
    }
    inside
}

/// Validates GKM and saturation and derives `R_T^+`.
pub fn make_base_ring(rs: Arc<RootSystem>, p: u32, inverted: Vec<bool>) -> Result<BaseRing> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let report = rs.gkm_check(p);
    if !report.holds() {
        return Err(Error::Gkm { ty: rs.cartan_type.to_string(), p, detail: report.describe(&rs) });
    }
    assert_eq!(inverted.len(), rs.num_pos_roots());
    let i_t: Vec<usize> = (0..rs.num_pos_roots()).filter(|&a| !inverted[a]).collect();
    let w_t = reflection_subgroup(&rs, &i_t);
    let r_t: Vec<bool> = (0..rs.num_pos_roots()).map(|a| w_t[rs.reflection(a)]).collect();
    if let Some(a) = (0..rs.num_pos_roots()).find(|&a| r_t[a] && inverted[a]) {
        return Err(Error::NotSaturated(format!(
            "reflection s_{} lies in the subgroup generated by the non-inverted roots",
            rs.root_name(a)
        )));
    }
    Ok(BaseRing { rs, p, inverted, r_t, w_t })
}

/// Parses `none`, `all`, or a comma list such as `a1,a1+a2`.
pub fn parse_inverted(rs: &RootSystem, s: &str) -> Result<Vec<bool>> {
    let s = s.trim();
    let n = rs.num_pos_roots();
    match s {
        "" | "none" => Ok(vec![false; n]),
        "all" => Ok(vec![true; n]),
        _ => {
            let mut v = vec![false; n];
            for part in s.split(',') {
                v[rs.parse_root(part)?] = true;
            }
            Ok(v)
        }
    }
}

impl BaseRing {
    pub fn structure(rs: Arc<RootSystem>, p: u32) -> Result<BaseRing> {
        let n = rs.num_pos_roots();
        make_base_ring(rs, p, vec![false; n])
    }

    pub fn generic(rs: Arc<RootSystem>, p: u32) -> Result<BaseRing> {
        let n = rs.num_pos_roots();
        make_base_ring(rs, p, vec![true; n])
    }

    /// `T^alpha`: every coroot except `alpha^vee` inverted.
    pub fn subgeneric(rs: Arc<RootSystem>, p: u32, a: usize) -> Result<BaseRing> {
        let n = rs.num_pos_roots();
        make_base_ring(rs, p, (0..n).map(|b| b != a).collect())
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    pub fn num_roots(&self) -> usize {
        self.rs.num_pos_roots()
    }

    pub fn i_t(&self) -> Vec<usize> {
        (0..self.num_roots()).filter(|&a| !self.inverted[a]).collect()
    }

    pub fn r_t_roots(&self) -> Vec<usize> {
        (0..self.num_roots()).filter(|&a| self.r_t[a]).collect()
    }

    pub fn inverted_roots(&self) -> Vec<usize> {
        (0..self.num_roots()).filter(|&a| self.inverted[a]).collect()
    }

    pub fn is_structure(&self) -> bool {
        self.inverted.iter().all(|&b| !b)
    }

    pub fn is_generic(&self) -> bool {
        self.r_t.iter().all(|&b| !b)
    }

    /// `Some(alpha)` when `R_T^+ = {alpha}`.
    pub fn subgeneric_root(&self) -> Option<usize> {
        let r = self.r_t_roots();
        (r.len() == 1).then(|| r[0])
    }

    pub fn is_saturated(&self) -> bool {
        (0..self.num_roots()).all(|a| self.r_t[a] == !self.inverted[a])
    }

    /// Coset label of `w` in `W_T \ W`: the smallest element of `W_T w`.
    pub fn coset_label(&self, w: usize) -> usize {
        let wg = &self.rs.weyl;
        (0..wg.order()).filter(|&u| self.w_t[u]).map(|u| wg.mul(u, w)).min().unwrap()
    }

    pub fn coroot_poly(&self, a: usize) -> SPoly {
        SPoly::linear(self.p, &self.rs.coroots[a])
    }

    pub fn coroot_form(&self, a: usize) -> Vec<u32> {
        let p = i64::from(self.p);
        self.rs.coroots[a].iter().map(|&c| c.rem_euclid(p) as u32).collect()
    }

    /// Coroot `w(beta^vee)` as a linear form with F_p coefficients.
    pub fn moved_coroot_form(&self, w: usize, a: usize) -> Vec<u32> {
        let p = i64::from(self.p);
        self.rs.weyl.act_coweight(w, &self.rs.coroots[a]).iter().map(|&c| c.rem_euclid(p) as u32).collect()
    }

    pub fn loc_ring(&self) -> LocRing {
        let coroots = (0..self.num_roots()).map(|a| self.coroot_poly(a)).collect();
        LocRing::new(self.p, self.rank(), coroots, self.inverted.clone())
    }

    /// `T^emptyset` and each `T^alpha = T[beta^vee^-1 : beta != alpha]`.
    pub fn specializations(&self) -> Vec<BaseRing> {
        let n = self.num_roots();
        let mut out = vec![make_base_ring(self.rs.clone(), self.p, vec![true; n]).expect("generic is saturated")];
        for a in 0..n {
            let inv: Vec<bool> = (0..n).map(|b| b != a || self.inverted[b]).collect();
            out.push(make_base_ring(self.rs.clone(), self.p, inv).expect("generic or subgeneric is saturated"));
        }
        out
    }

    pub fn describe_inverted(&self) -> String {
        let inv = self.inverted_roots();
        if inv.is_empty() {
            "none".into()
        } else if inv.len() == self.num_roots() {
            "all".into()
        } else {
            inv.iter().map(|&a| self.rs.root_name(a)).collect::<Vec<_>>().join(",")
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_structure() {
            write!(f, "S({}, p={})", self.rs.cartan_type, self.p)
        } else if self.inverted.iter().all(|&b| b) {
            write!(f, "T^0({}, p={})", self.rs.cartan_type, self.p)
        } else {
            write!(f, "S[inv {}]({}, p={})", self.describe_inverted(), self.rs.cartan_type, self.p)
        }
    }
}

/// Whether there is an `S`-algebra map `T -> T'`: every unit of `T` stays a unit.
pub fn hom_exists(t: &BaseRing, t2: &BaseRing) -> bool {
    t.p == t2.p && t.rs.cartan_type == t2.rs.cartan_type && t.inverted.iter().zip(&t2.inverted).all(|(&a, &b)| !a || b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, CartanType};

    fn rs(ty: CartanType) -> Arc<RootSystem> {
        Arc::new(build_root_system(ty))
    }

    #[test]
    fn extremes() {
        let a2 = rs(CartanType::A2);
        let s = BaseRing::structure(a2.clone(), 5).unwrap();
        assert_eq!(s.r_t_roots(), vec![0, 1, 2]);
        assert!(s.is_saturated());
        let g = BaseRing::generic(a2, 5).unwrap();
        assert!(g.is_generic());
    }

    #[test]
    fn subgeneric_and_unsaturated() {
        let a2 = rs(CartanType::A2);
        let sum = a2.parse_root("a1+a2").unwrap();
        let a2root = a2.parse_root("a2").unwrap();
        let mut inv = vec![false; 3];
        inv[sum] = true;
        inv[a2root] = true;
        let t = make_base_ring(a2.clone(), 5, inv).unwrap();
        assert_eq!(t.subgeneric_root(), Some(0));
        let mut bad = vec![false; 3];
        bad[sum] = true;
        assert!(matches!(make_base_ring(a2, 5, bad), Err(Error::NotSaturated(_))));
    }

    #[test]
    fn gkm_gate() {
        assert!(matches!(BaseRing::structure(rs(CartanType::G2), 3), Err(Error::Gkm { .. })));
        assert!(matches!(BaseRing::structure(rs(CartanType::A1), 2), Err(Error::Gkm { .. })));
        assert!(matches!(BaseRing::structure(rs(CartanType::A1), 9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn specialization_counts() {
        let a1 = BaseRing::structure(rs(CartanType::A1), 5).unwrap();
        let sp = a1.specializations();
        assert_eq!(sp.len(), 2);
        assert!(sp[0].is_generic());
        assert_eq!(sp[1].subgeneric_root(), Some(0));
        let a2 = BaseRing::structure(rs(CartanType::A2), 5).unwrap();
        let sp = a2.specializations();
        assert_eq!(sp.iter().filter(|t| t.is_generic()).count(), 1);
        assert_eq!(sp.iter().filter(|t| t.subgeneric_root().is_some()).count(), 3);
        let g = BaseRing::generic(rs(CartanType::A2), 5).unwrap();
        assert!(g.specializations().iter().all(|t| *t == g));
        assert!(sp.iter().all(|t| hom_exists(&a2, t) && t.is_saturated()));
    }

    #[test]
    fn hom_examples() {
        let a2 = rs(CartanType::A2);
        let s = BaseRing::structure(a2.clone(), 5).unwrap();
        let ta = BaseRing::subgeneric(a2.clone(), 5, 0).unwrap();
        let g = BaseRing::generic(a2, 5).unwrap();
        assert!(hom_exists(&s, &ta));
        assert!(!hom_exists(&ta, &s));
        assert!(hom_exists(&ta, &g));
    }

    #[test]
    fn parse_syntax() {
        let a2 = rs(CartanType::A2);
        assert_eq!(parse_inverted(&a2, "none").unwrap(), vec![false; 3]);
        assert_eq!(parse_inverted(&a2, "all").unwrap(), vec![true; 3]);
        let v = parse_inverted(&a2, "a1,a1+a2").unwrap();
        assert_eq!(v.iter().filter(|&&b| b).count(), 2);
        assert!(parse_inverted(&a2, "a3").is_err());
    }
}
