//! Root data for irreducible types of rank at most three, the finite Weyl
//! group, and the GKM condition over a prime field.
//!
//! Weights are written in the fundamental-weight basis, roots in the
//! simple-root basis, and coweights in the simple-coroot basis. Everything
//! is integral; nothing here uses floating point.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type IMat = Vec<Vec<i64>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanType {
    A1,
    A2,
    B2,
    G2,
    A3,
}

impl CartanType {
    pub const ALL: [CartanType; 5] = [CartanType::A1, CartanType::A2, CartanType::B2, CartanType::G2, CartanType::A3];

    /// Cartan matrix with entry (i, j) equal to the pairing of the i-th simple
    /// root with the j-th simple coroot.
    pub fn cartan_matrix(self) -> IMat {
        match self {
            CartanType::A1 => vec![vec![2]],
            CartanType::A2 => vec![vec![2, -1], vec![-1, 2]],
            // first simple root long
            CartanType::B2 => vec![vec![2, -2], vec![-1, 2]],
            // first simple root short
            CartanType::G2 => vec![vec![2, -1], vec![-3, 2]],
            CartanType::A3 => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A1 => "A1",
            CartanType::A2 => "A2",
            CartanType::B2 => "B2",
            CartanType::G2 => "G2",
            CartanType::A3 => "A3",
        };
        f.write_str(s)
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A1" => Ok(CartanType::A1),
            "A2" => Ok(CartanType::A2),
            "B2" => Ok(CartanType::B2),
            "G2" => Ok(CartanType::G2),
            "A3" => Ok(CartanType::A3),
            other => Err(Error::UnsupportedType(other.to_string())),
        }
    }
}

/// The finite Weyl group, enumerated in shortlex order of reduced words.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    rank: usize,
    coweight_mats: Vec<IMat>,
    root_mats: Vec<IMat>,
    weight_mats: Vec<IMat>,
    words: Vec<Vec<usize>>,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
    index: HashMap<IMat, usize>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.words.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of the simple reflection `s_{i+1}`.
    pub fn simple(&self, i: usize) -> usize {
        self.words.iter().position(|w| w.as_slice() == [i]).expect("simple reflection")
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn word(&self, w: usize) -> &[usize] {
        &self.words[w]
    }

    pub fn length(&self, w: usize) -> usize {
        self.words[w].len()
    }

    /// Matrix of `w` on coweights (simple-coroot coordinates, column vectors).
    pub fn coweight_matrix(&self, w: usize) -> &IMat {
        &self.coweight_mats[w]
    }

    /// Matrix of `w` on weights (fundamental-weight coordinates).
    pub fn weight_matrix(&self, w: usize) -> &IMat {
        &self.weight_mats[w]
    }

    pub fn element_of_coweight_matrix(&self, m: &IMat) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn act_coweight(&self, w: usize, v: &[i64]) -> Vec<i64> {
        mat_vec(&self.coweight_mats[w], v)
    }

    pub fn act_root(&self, w: usize, v: &[i64]) -> Vec<i64> {
        mat_vec(&self.root_mats[w], v)
    }

    pub fn act_weight(&self, w: usize, v: &[i64]) -> Vec<i64> {
        mat_vec(&self.weight_mats[w], v)
    }

    /// Reduced word rendered as `s1s2...`, or `e` for the identity.
    pub fn name(&self, w: usize) -> String {
        if self.words[w].is_empty() {
            return "e".to_string();
        }
        self.words[w].iter().map(|i| format!("s{}", i + 1)).collect()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

pub(crate) fn mat_vec(m: &IMat, v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    pub rank: usize,
    pub cartan: IMat,
    /// Positive roots in simple-root coordinates; the first `rank` are simple.
    pub roots: Vec<Vec<i64>>,
    /// Coroots, aligned with `roots`, in simple-coroot coordinates.
    pub coroots: Vec<Vec<i64>>,
    /// Root whose coroot is the highest coroot; it bounds the fundamental alcove.
    pub affine_root: usize,
    pub weyl: WeylGroup,
    reflections: Vec<usize>,
}

pub fn build_root_system(ty: CartanType) -> RootSystem {
    let cartan = ty.cartan_matrix();
    let r = cartan.len();

    // simple reflections on the three lattices
    let mut s_cow = Vec::new();
    let mut s_root = Vec::new();
    let mut s_wt = Vec::new();
    for i in 0..r {
        let mut c = identity(r);
        for j in 0..r {
            c[i][j] -= cartan[i][j];
        }
        s_cow.push(c);
        // s_i(gamma)_i -= sum_j gamma_j a_{ji}
        let mut m = identity(r);
        for j in 0..r {
            m[i][j] -= cartan[j][i];
        }
        s_root.push(m);
        // s_i(lambda)_k = lambda_k - lambda_i a_{ik}
        let mut w = identity(r);
        for k in 0..r {
            w[k][i] -= cartan[i][k];
        }
        s_wt.push(w);
    }

    let mut coweight_mats = vec![identity(r)];
    let mut root_mats = vec![identity(r)];
    let mut weight_mats = vec![identity(r)];
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut index = HashMap::new();
    index.insert(identity(r), 0usize);
    let mut queue = VecDeque::from([0usize]);
    while let Some(w) = queue.pop_front() {
        for i in 0..r {
            let m = mat_mul(&coweight_mats[w], &s_cow[i]);
            if index.contains_key(&m) {
                continue;
            }
            let id = words.len();
            index.insert(m.clone(), id);
            coweight_mats.push(m);
            root_mats.push(mat_mul(&root_mats[w], &s_root[i]));
            weight_mats.push(mat_mul(&weight_mats[w], &s_wt[i]));
            let mut word = words[w].clone();
            word.push(i);
            words.push(word);
            queue.push_back(id);
        }
    }
    let n = words.len();
    let mut mult = vec![vec![0; n]; n];
    let mut inv = vec![0; n];
    for a in 0..n {
        for b in 0..n {
            let m = mat_mul(&coweight_mats[a], &coweight_mats[b]);
            mult[a][b] = index[&m];
            if mult[a][b] == 0 {
                inv[a] = b;
            }
        }
    }
    let weyl = WeylGroup { rank: r, coweight_mats, root_mats, weight_mats, words, mult, inv, index };

    // positive roots with their coroots, by closure of the simple reflections
    let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    let mut seen = HashMap::new();
    let mut queue = VecDeque::new();
    for i in 0..r {
        let mut e = vec![0; r];
        e[i] = 1;
        seen.insert(e.clone(), ());
        pairs.push((e.clone(), e.clone()));
        queue.push_back((e.clone(), e));
    }
    while let Some((a, c)) = queue.pop_front() {
        for i in 0..r {
            let a2 = mat_vec(&s_root[i], &a);
            if a2.iter().any(|&x| x < 0) || seen.contains_key(&a2) {
                continue;
            }
            let c2 = mat_vec(&s_cow[i], &c);
            seen.insert(a2.clone(), ());
            pairs.push((a2.clone(), c2.clone()));
            queue.push_back((a2, c2));
        }
    }
    pairs.sort_by(|x, y| {
        let hx: i64 = x.0.iter().sum();
        let hy: i64 = y.0.iter().sum();
        hx.cmp(&hy).then_with(|| y.0.cmp(&x.0))
    });
    let roots: Vec<Vec<i64>> = pairs.iter().map(|p| p.0.clone()).collect();
    let coroots: Vec<Vec<i64>> = pairs.iter().map(|p| p.1.clone()).collect();
    let affine_root =
        (0..roots.len()).max_by_key(|&i| (coroots[i].iter().sum::<i64>(), std::cmp::Reverse(i))).expect("nonempty");

    let mut rs =
        RootSystem { cartan_type: ty, rank: r, cartan, roots, coroots, affine_root, weyl, reflections: Vec::new() };
    rs.reflections = (0..rs.roots.len())
        .map(|a| {
            let m = rs.reflection_matrix(a);
            rs.weyl.element_of_coweight_matrix(&m).expect("reflection lies in W")
        })
        .collect();
    rs
}

impl RootSystem {
    pub fn num_pos_roots(&self) -> usize {
        self.roots.len()
    }

    /// Pairing of a root (simple-root coordinates) with a coweight.
    pub fn pair_root(&self, gamma: &[i64], h: &[i64]) -> i64 {
        let mut s = 0;
        for j in 0..self.rank {
            for k in 0..self.rank {
                s += gamma[j] * self.cartan[j][k] * h[k];
            }
        }
        s
    }

    /// Pairing of a weight (fundamental-weight coordinates) with a coweight.
    pub fn pair_weight(&self, lambda: &[i64], h: &[i64]) -> i64 {
        lambda.iter().zip(h).map(|(a, b)| a * b).sum()
    }

    pub fn root_to_weight(&self, gamma: &[i64]) -> Vec<i64> {
        (0..self.rank).map(|k| (0..self.rank).map(|j| gamma[j] * self.cartan[j][k]).sum()).collect()
    }

    fn reflection_matrix(&self, a: usize) -> IMat {
        // h -> h - <alpha, h> alpha^vee
        let r = self.rank;
        let mut m = identity(r);
        for k in 0..r {
            let coeff: i64 = (0..r).map(|j| self.roots[a][j] * self.cartan[j][k]).sum();
            for i in 0..r {
                m[i][k] -= self.coroots[a][i] * coeff;
            }
        }
        m
    }

    /// Weyl group element `s_alpha` for the positive root with index `a`.
    pub fn reflection(&self, a: usize) -> usize {
        self.reflections[a]
    }

    /// Positive root index and sign of a root given in simple-root coordinates.
    pub fn root_index(&self, v: &[i64]) -> Option<(usize, i64)> {
        if let Some(i) = self.roots.iter().position(|r| r.as_slice() == v) {
            return Some((i, 1));
        }
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        self.roots.iter().position(|r| *r == neg).map(|i| (i, -1))
    }

    /// `w(alpha)` as (positive root index, sign).
    pub fn act_on_root(&self, w: usize, a: usize) -> (usize, i64) {
        let v = self.weyl.act_root(w, &self.roots[a]);
        self.root_index(&v).expect("W permutes roots")
    }

    /// Index of a positive root from the textual forms `a1`, `a1+a2`, `a1+2a2`.
    pub fn parse_root(&self, s: &str) -> Result<usize> {
        let mut v = vec![0i64; self.rank];
        for part in s.split('+') {
            let part = part.trim();
            let pos = part.find('a').ok_or_else(|| Error::BadInverted(s.to_string()))?;
            let coeff =
                if pos == 0 { 1 } else { part[..pos].parse::<i64>().map_err(|_| Error::BadInverted(s.to_string()))? };
            let idx: usize = part[pos + 1..].parse().map_err(|_| Error::BadInverted(s.to_string()))?;
            if idx == 0 || idx > self.rank {
                return Err(Error::BadInverted(s.to_string()));
            }
            v[idx - 1] += coeff;
        }
        match self.root_index(&v) {
            Some((i, 1)) => Ok(i),
            _ => Err(Error::BadInverted(s.to_string())),
        }
    }

    pub fn root_name(&self, a: usize) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.roots[a].iter().enumerate() {
            match c {
                0 => {}
                1 => parts.push(format!("a{}", i + 1)),
                c => parts.push(format!("{}a{}", c, i + 1)),
            }
        }
        parts.join("+")
    }

    pub fn gkm_check(&self, p: u32) -> GkmReport {
        let p64 = i64::from(p);
        let mut violations = Vec::new();
        let n = self.roots.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if !independent_mod(&self.coroots[i], &self.coroots[j], p64) {
                    violations.push((i, j));
                }
            }
        }
        GkmReport { p, char_two: p == 2, violations }
    }
}

fn independent_mod(u: &[i64], v: &[i64], p: i64) -> bool {
    let n = u.len();
    if n == 1 {
        // two distinct positive coroots never occur in rank one
        return u[0].rem_euclid(p) != 0 && v[0].rem_euclid(p) != 0;
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if (u[a] * v[b] - u[b] * v[a]).rem_euclid(p) != 0 {
                return true;
            }
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmReport {
    pub p: u32,
    pub char_two: bool,
    /// Pairs of positive roots whose coroots are dependent mod p.
    pub violations: Vec<(usize, usize)>,
}

impl GkmReport {
    pub fn holds(&self) -> bool {
        !self.char_two && self.violations.is_empty()
    }

    pub fn describe(&self, rs: &RootSystem) -> String {
        let mut out = Vec::new();
        if self.char_two {
            out.push("characteristic 2".to_string());
        }
        for &(i, j) in &self.violations {
            out.push(format!("coroots of {} and {} dependent", rs.root_name(i), rs.root_name(j)));
        }
        if out.is_empty() {
            "ok".to_string()
        } else {
            out.join("; ")
        }
    }
}

pub fn gkm_check(rs: &RootSystem, p: u32) -> GkmReport {
    rs.gkm_check(p)
}

/// `w` applied to a coweight in simple-coroot coordinates.
pub fn reflect_coweight(rs: &RootSystem, w: usize, v: &[i64]) -> Vec<i64> {
    rs.weyl.act_coweight(w, v)
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_type() {
        let expect = [
            (CartanType::A1, 1, 2),
            (CartanType::A2, 3, 6),
            (CartanType::B2, 4, 8),
            (CartanType::G2, 6, 12),
            (CartanType::A3, 6, 24),
        ];
        for (ty, npos, nw) in expect {
            let rs = build_root_system(ty);
            assert_eq!(rs.num_pos_roots(), npos, "{ty}");
            assert_eq!(rs.weyl.order(), nw, "{ty}");
        }
    }

    #[test]
    fn pairing_on_simple_roots_is_cartan() {
        for ty in CartanType::ALL {
            let rs = build_root_system(ty);
            for i in 0..rs.rank {
                for j in 0..rs.rank {
                    assert_eq!(rs.pair_root(&rs.roots[i], &rs.coroots[j]), rs.cartan[i][j]);
                }
            }
        }
    }

    #[test]
    fn a2_sum_coroot() {
        let rs = build_root_system(CartanType::A2);
        assert_eq!(rs.roots, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(rs.coroots[2], vec![1, 1]);
    }

    #[test]
    fn reflect_examples() {
        let a1 = build_root_system(CartanType::A1);
        let s = a1.reflection(0);
        assert_eq!(reflect_coweight(&a1, s, &[1]), vec![-1]);
        assert_eq!(reflect_coweight(&a1, 0, &[5]), vec![5]);
        let a2 = build_root_system(CartanType::A2);
        assert_eq!(reflect_coweight(&a2, a2.reflection(0), &[0, 1]), vec![1, 1]);
    }

    #[test]
    fn gkm_examples() {
        assert!(!gkm_check(&build_root_system(CartanType::G2), 3).holds());
        assert!(!gkm_check(&build_root_system(CartanType::A2), 2).holds());
        assert!(gkm_check(&build_root_system(CartanType::A2), 5).holds());
    }

    #[test]
    fn simple_reflection_permutes_other_positive_roots() {
        for ty in CartanType::ALL {
            let rs = build_root_system(ty);
            for i in 0..rs.rank {
                let si = rs.reflection(i);
                for a in 0..rs.num_pos_roots() {
                    if a == i {
                        continue;
                    }
                    assert_eq!(rs.act_on_root(si, a).1, 1);
                }
            }
        }
    }

    #[test]
    fn parse_roots() {
        let rs = build_root_system(CartanType::A2);
        assert_eq!(rs.parse_root("a1+a2").unwrap(), 2);
        assert!(rs.parse_root("a3").is_err());
    }
}
