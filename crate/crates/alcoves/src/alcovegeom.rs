//! Alcoves as a principal homogeneous set over the affine Weyl group.
//!
//! An alcove is stored as the affine Weyl element `t_gamma . w` that carries
//! the fundamental alcove onto it, with `gamma` in simple-root coordinates.

use std::fmt;

use num_rational::Ratio;

use crate::rootsys::RootSystem;

pub type Q = Ratio<i64>;

/// `t_gamma . w` with `gamma` in the root lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineElem {
    pub gamma: Vec<i64>,
    pub w: usize,
}

/// An alcove `A = x(A_e)` is identified with `x`.
pub type Alcove = AffineElem;

impl AffineElem {
    pub fn identity(rs: &RootSystem) -> Self {
        AffineElem { gamma: vec![0; rs.rank], w: rs.weyl.identity() }
    }

    pub fn translation(rs: &RootSystem, gamma: &[i64]) -> Self {
        AffineElem { gamma: gamma.to_vec(), w: rs.weyl.identity() }
    }

    pub fn finite(rs: &RootSystem, w: usize) -> Self {
        AffineElem { gamma: vec![0; rs.rank], w }
    }

    /// The reflection `s_{alpha,n}` at the hyperplane `<mu, alpha^vee> = n`.
    pub fn reflection(rs: &RootSystem, a: usize, n: i64) -> Self {
        AffineElem { gamma: rs.roots[a].iter().map(|c| c * n).collect(), w: rs.reflection(a) }
    }

    /// `self . other`.
    pub fn compose(&self, rs: &RootSystem, other: &AffineElem) -> AffineElem {
        let moved = rs.weyl.act_root(self.w, &other.gamma);
        AffineElem {
            gamma: self.gamma.iter().zip(&moved).map(|(a, b)| a + b).collect(),
            w: rs.weyl.mul(self.w, other.w),
        }
    }

    pub fn inverse(&self, rs: &RootSystem) -> AffineElem {
        let wi = rs.weyl.inv(self.w);
        let g = rs.weyl.act_root(wi, &self.gamma);
        AffineElem { gamma: g.iter().map(|x| -x).collect(), w: wi }
    }

    /// Affine action on a weight with rational fundamental-weight coordinates.
    pub fn act_weight(&self, rs: &RootSystem, lambda: &[Q]) -> Vec<Q> {
        let m = rs.weyl.weight_matrix(self.w);
        let shift = rs.root_to_weight(&self.gamma);
        m.iter()
            .zip(&shift)
            .map(|(row, &s)| row.iter().zip(lambda).fold(Q::from_integer(s), |acc, (&a, &l)| acc + l * a))
            .collect()
    }
}

/// The simple affine reflections: index 0 is `s_{alpha_0, 1}` for the root
/// whose coroot is highest, index `i` is the finite simple reflection `s_i`.
pub fn affine_simple(rs: &RootSystem) -> Vec<AffineElem> {
    let mut out = vec![AffineElem::reflection(rs, rs.affine_root, 1)];
    for i in 0..rs.rank {
        out.push(AffineElem::reflection(rs, i, 0));
    }
    out
}

pub fn affine_simple_name(rs: &RootSystem, i: usize) -> String {
    if i == 0 {
        format!("s({},1)", rs.root_name(rs.affine_root))
    } else {
        format!("s({},0)", rs.root_name(i - 1))
    }
}

/// Finite part of a simple affine reflection, as the positive root it reflects in.
pub fn affine_simple_root(rs: &RootSystem, i: usize) -> usize {
    if i == 0 {
        rs.affine_root
    } else {
        i - 1
    }
}

pub fn act_left(rs: &RootSystem, g: &AffineElem, a: &Alcove) -> Alcove {
    g.compose(rs, a)
}

/// Right action `A s`; for `A = x(A_e)` this is `xs(A_e)`.
pub fn act_right(rs: &RootSystem, a: &Alcove, s: &AffineElem) -> Alcove {
    a.compose(rs, s)
}

/// Barycenter of the fundamental alcove.
pub fn fundamental_barycenter(rs: &RootSystem) -> Vec<Q> {
    let top = &rs.coroots[rs.affine_root];
    let r = rs.rank as i64;
    top.iter().map(|&c| Q::new(1, (r + 1) * c)).collect()
}

pub fn barycenter(rs: &RootSystem, a: &Alcove) -> Vec<Q> {
    a.act_weight(rs, &fundamental_barycenter(rs))
}

/// `<lambda_A, alpha^vee>` for the positive root with index `root`.
pub fn coroot_value(rs: &RootSystem, a: &Alcove, root: usize) -> Q {
    pair_coroot(rs, &barycenter(rs, a), root)
}

pub fn pair_coroot(rs: &RootSystem, lambda: &[Q], root: usize) -> Q {
    lambda.iter().zip(&rs.coroots[root]).fold(Q::from_integer(0), |acc, (&l, &c)| acc + l * c)
}

pub fn qabs(x: Q) -> Q {
    if x < Q::from_integer(0) {
        -x
    } else {
        x
    }
}

/// The integer `n` with `n < <lambda_A, alpha^vee> < n + 1`.
pub fn floor(rs: &RootSystem, a: &Alcove, root: usize) -> i64 {
    coroot_value(rs, a, root).floor().to_integer()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Which open half space of `H_{alpha,n}` contains `A`.
pub fn side(rs: &RootSystem, a: &Alcove, root: usize, n: i64) -> Side {
    let v = coroot_value(rs, a, root);
    debug_assert!(v != Q::from_integer(n), "barycenter on a wall");
    if v > Q::from_integer(n) {
        Side::Plus
    } else {
        Side::Minus
    }
}

/// Label of the root-lattice orbit of `A`, an element of the finite Weyl group.
pub fn orbit_map(a: &Alcove) -> usize {
    a.w
}

/// Alcoves whose barycenter satisfies `|<lambda, alpha^vee>| <= radius` for
/// every positive root, sorted by (length, word, gamma).
pub fn enumerate_window(rs: &RootSystem, radius: i64) -> Vec<Alcove> {
    let bound = Q::from_integer(radius);
    let b = 4 * (radius + 1);
    let r = rs.rank;
    let lam_e = fundamental_barycenter(rs);
    let mut out = Vec::new();
    let mut gamma = vec![-b; r];
    loop {
        let shift = rs.root_to_weight(&gamma);
        for w in 0..rs.weyl.order() {
            let m = rs.weyl.weight_matrix(w);
            let lam: Vec<Q> = m
                .iter()
                .zip(&shift)
                .map(|(row, &s)| row.iter().zip(&lam_e).fold(Q::from_integer(s), |acc, (&x, &l)| acc + l * x))
                .collect();
            if (0..rs.num_pos_roots()).all(|i| qabs(pair_coroot(rs, &lam, i)) <= bound) {
                out.push(AffineElem { gamma: gamma.clone(), w });
            }
        }
        // odometer over the gamma box
        let mut k = 0;
        loop {
            if k == r {
                sort_alcoves(rs, &mut out);
                return out;
            }
            gamma[k] += 1;
            if gamma[k] <= b {
                break;
            }
            gamma[k] = -b;
            k += 1;
        }
    }
}

pub fn sort_alcoves(rs: &RootSystem, v: &mut [Alcove]) {
    v.sort_by(|a, b| {
        (rs.weyl.length(a.w), rs.weyl.word(a.w), &a.gamma).cmp(&(rs.weyl.length(b.w), rs.weyl.word(b.w), &b.gamma))
    });
}

/// Name in the scheme `w:(gamma)`, e.g. `s1s2:(1,-1)`.
pub fn alcove_name(rs: &RootSystem, a: &Alcove) -> String {
    let g: Vec<String> = a.gamma.iter().map(i64::to_string).collect();
    format!("{}:({})", rs.weyl.name(a.w), g.join(","))
}

/// Display adapter for an alcove.
pub struct Named<'a>(pub &'a RootSystem, pub &'a Alcove);

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&alcove_name(self.0, self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, CartanType};

    fn a1() -> RootSystem {
        build_root_system(CartanType::A1)
    }

    #[test]
    fn translation_moves_two_floors() {
        let rs = a1();
        let e = AffineElem::identity(&rs);
        let t = AffineElem::translation(&rs, &[1]);
        assert_eq!(floor(&rs, &act_left(&rs, &t, &e), 0), 2);
        let s0 = AffineElem::reflection(&rs, 0, 0);
        assert_eq!(floor(&rs, &act_left(&rs, &s0, &e), 0), -1);
        assert_eq!(act_left(&rs, &e, &t), t);
    }

    #[test]
    fn right_action_examples_a1() {
        let rs = a1();
        let s = &affine_simple(&rs)[0];
        let e = AffineElem::identity(&rs);
        assert_eq!(floor(&rs, &act_right(&rs, &e, s), 0), 1);
        let a = AffineElem::translation(&rs, &[1]);
        assert_eq!(floor(&rs, &a, 0), 2);
        assert_eq!(floor(&rs, &act_right(&rs, &a, s), 0), 3);
        let back = act_right(&rs, &act_right(&rs, &a, s), s);
        assert_eq!(back, a);
    }

    #[test]
    fn sides_of_fundamental_alcove() {
        let rs = a1();
        let e = AffineElem::identity(&rs);
        assert_eq!(side(&rs, &e, 0, 0), Side::Plus);
        assert_eq!(side(&rs, &e, 0, 1), Side::Minus);
        let m = AffineElem::reflection(&rs, 0, 0);
        assert_eq!(side(&rs, &m, 0, 0), Side::Minus);
    }

    #[test]
    fn orbit_labels() {
        let rs = a1();
        let e = AffineElem::identity(&rs);
        let t = AffineElem::translation(&rs, &[1]);
        assert_eq!(orbit_map(&e), orbit_map(&act_left(&rs, &t, &e)));
        let s0 = AffineElem::reflection(&rs, 0, 0);
        assert_ne!(orbit_map(&act_left(&rs, &s0, &e)), orbit_map(&e));
    }

    #[test]
    fn window_counts() {
        let rs = a1();
        let w = enumerate_window(&rs, 3);
        let mut floors: Vec<i64> = w.iter().map(|a| floor(&rs, a, 0)).collect();
        floors.sort();
        assert_eq!(floors, vec![-3, -2, -1, 0, 1, 2]);
        let a2 = build_root_system(CartanType::A2);
        assert_eq!(enumerate_window(&a2, 1).len(), 6);
        let labels: std::collections::BTreeSet<usize> = enumerate_window(&a2, 2).iter().map(orbit_map).collect();
        assert_eq!(labels.len(), 6);
    }

    #[test]
    fn windows_are_nested() {
        for ty in [CartanType::A1, CartanType::A2, CartanType::B2] {
            let rs = build_root_system(ty);
            let small = enumerate_window(&rs, 1);
            let big = enumerate_window(&rs, 2);
            assert!(small.iter().all(|a| big.contains(a)));
        }
    }

    #[test]
    fn barycenter_floors_are_strict() {
        let rs = build_root_system(CartanType::G2);
        for a in enumerate_window(&rs, 2) {
            for i in 0..rs.num_pos_roots() {
                let v = coroot_value(&rs, &a, i);
                assert!(!v.is_integer());
            }
        }
    }
}
