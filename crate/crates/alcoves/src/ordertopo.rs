//! The order generated by dominant translations and by the reflections of
//! `R_T^+`, on a finite window of alcoves, and the topology whose open
//! sets are its down-sets.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::alcovegeom::{
    act_right, affine_simple, alcove_name, coroot_value, enumerate_window, qabs, sort_alcoves, AffineElem, Alcove, Q,
};
use crate::basering::{hom_exists, BaseRing};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::rootsys::RootSystem;

pub type AlcoveSet = FixedBitSet;

/// Up to this many alcoves every down-set is a canonical open.
pub const EXHAUSTIVE_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Open,
    Closed,
    LocallyClosed,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    AllOpens,
    SInvariantOpens(usize),
}

/// A finite set of alcoves with the restriction of the order for a base ring.
#[derive(Clone, Debug)]
pub struct Window {
    pub rs: Arc<RootSystem>,
    pub ring: BaseRing,
    pub alcoves: Vec<Alcove>,
    index: HashMap<Alcove, usize>,
    below: Vec<FixedBitSet>,
    above: Vec<FixedBitSet>,
    pub padding: i64,
    pub stable: bool,
}

/// Relation on `alcoves` induced by reachability inside the box of the given radius.
fn restricted_order(rs: &RootSystem, ring: &BaseRing, alcoves: &[Alcove], radius: i64) -> Vec<FixedBitSet> {
    let mut boxed = enumerate_window(rs, radius);
    for a in alcoves {
        if !boxed.contains(a) {
            boxed.push(a.clone());
        }
    }
    let idx: HashMap<&Alcove, usize> = boxed.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let n = boxed.len();
    let mut down_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    let rad = Q::from_integer(radius);
    for (i, a) in boxed.iter().enumerate() {
        for k in 0..rs.rank {
            let mut g = a.gamma.clone();
            g[k] += 1;
            let up = AffineElem { gamma: g, w: a.w };
            if let Some(&j) = idx.get(&up) {
                down_edges[j].push(i);
            }
        }
        for r in ring.r_t_roots() {
            let v = coroot_value(rs, a, r);
            let mut n_ = v.floor().to_integer() + 1;
            while Q::from_integer(2 * n_) - v <= rad + Q::from_integer(1) {
                let refl = AffineElem::reflection(rs, r, n_);
                let up = refl.compose(rs, a);
                if let Some(&j) = idx.get(&up) {
                    down_edges[j].push(i);
                }
                n_ += 1;
            }
        }
    }
    let pos: HashMap<&Alcove, usize> = alcoves.iter().enumerate().map(|(i, a)| (a, i)).collect();
    alcoves
        .iter()
        .map(|a| {
            let start = idx[a];
            let mut seen = vec![false; n];
            seen[start] = true;
            let mut q = VecDeque::from([start]);
            let mut set = FixedBitSet::with_capacity(alcoves.len());
            while let Some(x) = q.pop_front() {
                if let Some(&p) = pos.get(&boxed[x]) {
                    set.insert(p);
                }
                for &y in &down_edges[x] {
                    if !seen[y] {
                        seen[y] = true;
                        q.push_back(y);
                    }
                }
            }
            set
        })
        .collect()
}

impl Window {
    /// Order on `alcoves` computed in a box padded by `padding` beyond the
    /// extent of the window, certified against `padding + 1`.
    pub fn new(ring: &BaseRing, mut alcoves: Vec<Alcove>, padding: i64) -> Window {
        let rs = ring.rs.clone();
        sort_alcoves(&rs, &mut alcoves);
        alcoves.dedup();
        let extent = alcoves
            .iter()
            .flat_map(|a| (0..rs.num_pos_roots()).map(move |r| (a, r)))
            .map(|(a, r)| qabs(coroot_value(&rs, a, r)).ceil().to_integer())
            .max()
            .unwrap_or(0);
        let below = restricted_order(&rs, ring, &alcoves, extent + padding);
        let check = restricted_order(&rs, ring, &alcoves, extent + padding + 1);
        let stable = below == check;
        let n = alcoves.len();
        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for (a, set) in below.iter().enumerate() {
            for b in set.ones() {
                above[b].insert(a);
            }
        }
        let index = alcoves.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        Window { rs, ring: ring.clone(), alcoves, index, below, above, padding, stable }
    }

    /// Barycenter box of the given radius.
    pub fn radius(ring: &BaseRing, radius: i64, padding: i64) -> Window {
        Window::new(ring, enumerate_window(&ring.rs, radius), padding)
    }

    /// Barycenter box of the given radius together with its right translate by `s`.
    pub fn s_closed(ring: &BaseRing, radius: i64, padding: i64, s: usize) -> Window {
        let base = enumerate_window(&ring.rs, radius);
        let sel = &affine_simple(&ring.rs)[s];
        let mut all = base.clone();
        for a in &base {
            let b = act_right(&ring.rs, a, sel);
            if !all.contains(&b) {
                all.push(b);
            }
        }
        Window::new(ring, all, padding)
    }

    /// Same alcoves, order recomputed for another base ring.
    pub fn with_ring(&self, ring: &BaseRing) -> Window {
        Window::new(ring, self.alcoves.clone(), self.padding)
    }

    pub fn len(&self) -> usize {
        self.alcoves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alcoves.is_empty()
    }

    pub fn index_of(&self, a: &Alcove) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn name(&self, i: usize) -> String {
        alcove_name(&self.rs, &self.alcoves[i])
    }

    pub fn label(&self, i: usize) -> usize {
        self.alcoves[i].w
    }

    /// `b` precedes or equals `a`.
    pub fn leq(&self, b: usize, a: usize) -> bool {
        self.below[a].contains(b)
    }

    pub fn down_cone(&self, a: usize) -> &FixedBitSet {
        &self.below[a]
    }

    pub fn up_cone(&self, a: usize) -> &FixedBitSet {
        &self.above[a]
    }

    pub fn empty_set(&self) -> AlcoveSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> AlcoveSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_of(&self, items: &[usize]) -> AlcoveSet {
        let mut s = self.empty_set();
        for &i in items {
            s.insert(i);
        }
        s
    }

    pub fn is_partial_order(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            if !self.leq(a, a) {
                return false;
            }
            for b in self.below[a].ones() {
                if b != a && self.leq(a, b) {
                    return false;
                }
                if !self.below[b].is_subset(&self.below[a]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_open(&self, s: &AlcoveSet) -> bool {
        s.ones().all(|a| self.below[a].is_subset(s))
    }

    pub fn is_closed(&self, s: &AlcoveSet) -> bool {
        s.ones().all(|a| self.above[a].is_subset(s))
    }

    /// Smallest open set containing `s`.
    pub fn open_hull(&self, s: &AlcoveSet) -> AlcoveSet {
        let mut out = self.empty_set();
        for a in s.ones() {
            out.union_with(&self.below[a]);
        }
        out
    }

    pub fn closed_hull(&self, s: &AlcoveSet) -> AlcoveSet {
        let mut out = self.empty_set();
        for a in s.ones() {
            out.union_with(&self.above[a]);
        }
        out
    }

    /// Locally closed sets are exactly the order-convex ones.
    pub fn is_locally_closed(&self, s: &AlcoveSet) -> bool {
        for a in s.ones() {
            for b in s.ones() {
                if !self.leq(a, b) {
                    continue;
                }
                let mut between = self.above[a].clone();
                between.intersect_with(&self.below[b]);
                if !between.is_subset(s) {
                    return false;
                }
            }
        }
        true
    }

    pub fn classify(&self, s: &AlcoveSet) -> Kind {
        if self.is_open(s) {
            Kind::Open
        } else if self.is_closed(s) {
            Kind::Closed
        } else if self.is_locally_closed(s) {
            Kind::LocallyClosed
        } else {
            Kind::Neither
        }
    }

    /// Orbit labels met by `s`.
    pub fn labels(&self, s: &AlcoveSet) -> BTreeSet<usize> {
        s.ones().map(|a| self.alcoves[a].w).collect()
    }

    pub fn all_labels(&self) -> BTreeSet<usize> {
        self.alcoves.iter().map(|a| a.w).collect()
    }

    /// `s` intersected with the orbit labelled `x`.
    pub fn orbit_part(&self, s: &AlcoveSet, x: usize) -> AlcoveSet {
        let mut out = self.empty_set();
        for a in s.ones() {
            if self.alcoves[a].w == x {
                out.insert(a);
            }
        }
        out
    }

    /// Equivalence classes of the comparability relation, as sorted index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = Vec::new();
            let mut stack = vec![start];
            comp[start] = id;
            while let Some(a) = stack.pop() {
                members.push(a);
                for b in self.below[a].ones().chain(self.above[a].ones()) {
                    if comp[b] == usize::MAX {
                        comp[b] = id;
                        stack.push(b);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Partition by orbits of the group generated by `R_T^+`-reflections and
    /// root-lattice translations, computed from the coset `W_T w`.
    pub fn orbit_partition(&self) -> Vec<Vec<usize>> {
        let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, a) in self.alcoves.iter().enumerate() {
            by.entry(self.ring.coset_label(a.w)).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = by.into_values().collect();
        out.sort();
        out
    }

    /// Checks that components and orbits agree.
    pub fn check_components(&self) -> Result<Vec<Vec<usize>>> {
        let mut c = self.components();
        c.sort();
        let o = self.orbit_partition();
        if c != o {
            return Err(Error::CheckFailed(format!("{} order components but {} orbit classes", c.len(), o.len())));
        }
        Ok(c)
    }

    /// Permutation of the window under the right action of `s`, if closed.
    pub fn right_perm(&self, s: usize) -> Option<Vec<usize>> {
        let sel = &affine_simple(&self.rs)[s];
        self.alcoves.iter().map(|a| self.index_of(&act_right(&self.rs, a, sel))).collect()
    }

    fn right_perm_checked(&self, s: usize) -> Result<Vec<usize>> {
        self.right_perm(s).ok_or_else(|| Error::NotSClosed(crate::alcovegeom::affine_simple_name(&self.rs, s)))
    }

    pub fn translate(&self, set: &AlcoveSet, s: usize) -> Result<AlcoveSet> {
        let perm = self.right_perm_checked(s)?;
        let mut out = self.empty_set();
        for a in set.ones() {
            out.insert(perm[a]);
        }
        Ok(out)
    }

    /// `J u Js`, verified open.
    pub fn sharp(&self, j: &AlcoveSet, s: usize) -> Result<AlcoveSet> {
        let mut out = self.translate(j, s)?;
        out.union_with(j);
        if !self.is_open(&out) {
            return Err(Error::CheckFailed("union with the s-translate is not open".into()));
        }
        Ok(out)
    }

    /// `J n Js`, verified open.
    pub fn flat(&self, j: &AlcoveSet, s: usize) -> Result<AlcoveSet> {
        let mut out = self.translate(j, s)?;
        out.intersect_with(j);
        if !self.is_open(&out) {
            return Err(Error::CheckFailed("intersection with the s-translate is not open".into()));
        }
        Ok(out)
    }

    pub fn is_s_invariant(&self, j: &AlcoveSet, s: usize) -> Result<bool> {
        Ok(self.translate(j, s)? == *j)
    }

    /// Every down-set, by filtering all subsets; only for small windows.
    pub fn all_down_sets(&self) -> Vec<AlcoveSet> {
        let n = self.len();
        assert!(n <= 20, "too many alcoves for exhaustive enumeration");
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << n) {
            let mut s = self.empty_set();
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    s.insert(i);
                }
            }
            if self.is_open(&s) {
                out.push(s);
            }
        }
        out
    }

    /// The opens on which presheaf data is computed and validated.
    ///
    /// Small windows use every down-set. Larger ones use the empty set, the
    /// window, all principal cones, their images under sharp and flat for
    /// each `s` in `s_list` the window is closed under, and pairwise unions
    /// and intersections of those.
    pub fn canonical_opens(&self, s_list: &[usize]) -> Vec<AlcoveSet> {
        if self.len() <= EXHAUSTIVE_LIMIT {
            return self.all_down_sets();
        }
        let mut gens: Vec<AlcoveSet> = (0..self.len()).map(|a| self.below[a].clone()).collect();
        for &s in s_list {
            if self.right_perm(s).is_none() {
                continue;
            }
            let cones = gens.clone();
            for c in cones {
                if let Ok(x) = self.sharp(&c, s) {
                    gens.push(x);
                }
                if let Ok(x) = self.flat(&c, s) {
                    gens.push(x);
                }
            }
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        let mut push = |s: AlcoveSet, out: &mut Vec<AlcoveSet>| {
            if seen.insert(s.ones().collect()) {
                out.push(s);
            }
        };
        push(self.empty_set(), &mut out);
        push(self.full_set(), &mut out);
        for g in &gens {
            push(g.clone(), &mut out);
        }
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                let mut u = gens[i].clone();
                u.union_with(&gens[j]);
                push(u, &mut out);
                let mut x = gens[i].clone();
                x.intersect_with(&gens[j]);
                push(x, &mut out);
            }
        }
        out
    }

    /// Members of the family among the canonical opens of this window.
    pub fn family(&self, kind: FamilyKind) -> Result<Vec<AlcoveSet>> {
        let s_list: Vec<usize> = match kind {
            FamilyKind::AllOpens => Vec::new(),
            FamilyKind::SInvariantOpens(s) => vec![s],
        };
        let opens = self.canonical_opens(&s_list);
        match kind {
            FamilyKind::AllOpens => Ok(opens),
            FamilyKind::SInvariantOpens(s) => {
                let mut out = Vec::new();
                for j in opens {
                    if self.is_s_invariant(&j, s)? {
                        out.push(j);
                    }
                }
                Ok(out)
            }
        }
    }

    /// For every canonical open of `target` (same alcoves, coarser ring) and
    /// every label, a family member with the same trace on that orbit.
    ///
    /// Returns triples `(open of target, label, index into family)`.
    pub fn admissibility_certificate(
        &self,
        family: &[AlcoveSet],
        target: &Window,
    ) -> Result<Vec<(AlcoveSet, usize, usize)>> {
        if !hom_exists(&self.ring, &target.ring) {
            return Err(Error::Precondition("no base ring homomorphism".into()));
        }
        if target.alcoves != self.alcoves {
            return Err(Error::Precondition("windows carry different alcoves".into()));
        }
        let mut cert = Vec::new();
        for j in target.canonical_opens(&[]) {
            for x in self.all_labels() {
                let want = self.orbit_part(&j, x);
                let hit = family.iter().position(|f| self.orbit_part(f, x) == want).ok_or_else(|| {
                    Error::CheckFailed(format!(
                        "no family member matches open {:?} on orbit {}",
                        j.ones().map(|a| self.name(a)).collect::<Vec<_>>(),
                        self.rs.weyl.name(x)
                    ))
                })?;
                cert.push((j.clone(), x, hit));
            }
        }
        Ok(cert)
    }

    /// Hasse diagram in DOT format, nodes coloured by component.
    pub fn to_dot(&self) -> String {
        const COLORS: [&str; 8] =
            ["lightblue", "lightpink", "palegreen", "khaki", "plum", "lightsalmon", "lightcyan", "wheat"];
        let comps = self.components();
        let mut color = vec![0; self.len()];
        for (c, members) in comps.iter().enumerate() {
            for &m in members {
                color[m] = c;
            }
        }
        let mut out = String::from("digraph order {\n  rankdir=BT;\n");
        for i in 0..self.len() {
            let _ = writeln!(
                out,
                "  n{} [label=\"{}\", style=filled, fillcolor={}];",
                i,
                self.name(i),
                COLORS[color[i] % COLORS.len()]
            );
        }
        for a in 0..self.len() {
            for b in self.below[a].ones() {
                if b == a {
                    continue;
                }
                let covered = self.below[a].ones().any(|c| c != a && c != b && self.leq(b, c));
                if !covered {
                    let _ = writeln!(out, "  n{b} -> n{a};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// `A <= A + gamma` exactly when `gamma` is a nonnegative combination of
/// simple roots, over all translation pairs inside the window.
pub fn check_translation_order(w: &Window) -> Report {
    let mut r = Report::new();
    let mut bad = Vec::new();
    let mut pairs = 0;
    for a in 0..w.len() {
        for b in 0..w.len() {
            let (x, y) = (&w.alcoves[a], &w.alcoves[b]);
            if a == b || x.w != y.w {
                continue;
            }
            pairs += 1;
            let nonneg = y.gamma.iter().zip(&x.gamma).all(|(p, q)| p >= q);
            if w.leq(a, b) != nonneg {
                bad.push(format!("{} vs {}", w.name(a), w.name(b)));
            }
        }
    }
    r.check(
        format!("translation pairs are ordered by nonnegative root combinations ({pairs} pairs)"),
        bad.is_empty(),
        bad.first().cloned().unwrap_or_default(),
    );
    r
}

/// Behaviour of `A -> As` inside and across components.
///
/// When a component is `s`-stable, `A` and `As` are comparable, `{A, As}` is
/// an interval, and with `As <= A`: `B <= A` implies `Bs <= A`, and
/// `As <= B` implies `As <= Bs`. Otherwise `A -> As` preserves and reflects
/// the order.
pub fn check_tops(w: &Window, s: usize) -> Result<Report> {
    let perm = w.right_perm(s).ok_or_else(|| Error::NotSClosed(crate::alcovegeom::affine_simple_name(&w.rs, s)))?;
    let comp = |a: usize| w.ring.coset_label(w.label(a));
    let mut r = Report::new();
    let (mut interval, mut one_a, mut one_b, mut iso) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let (mut stable_n, mut moved_n) = (0, 0);
    for a in 0..w.len() {
        let a_s = perm[a];
        if comp(a) == comp(a_s) {
            stable_n += 1;
            let (lo, hi) = if w.leq(a_s, a) { (a_s, a) } else { (a, a_s) };
            let between = (0..w.len()).any(|c| c != lo && c != hi && w.leq(lo, c) && w.leq(c, hi));
            if !w.leq(lo, hi) || between {
                interval.push(w.name(a));
            }
            if !w.leq(a_s, a) {
                continue;
            }
            for b in (0..w.len()).filter(|&b| comp(b) == comp(a)) {
                if w.leq(b, a) && !w.leq(perm[b], a) {
                    one_a.push(format!("{} / {}", w.name(a), w.name(b)));
                }
                if w.leq(a_s, b) && !w.leq(a_s, perm[b]) {
                    one_b.push(format!("{} / {}", w.name(a), w.name(b)));
                }
            }
        } else {
            moved_n += 1;
            for b in (0..w.len()).filter(|&b| comp(b) == comp(a)) {
                if w.leq(a, b) != w.leq(a_s, perm[b]) {
                    iso.push(format!("{} / {}", w.name(a), w.name(b)));
                }
            }
        }
    }
    let first = |v: &Vec<String>| v.first().cloned().unwrap_or_default();
    r.check(format!("A and As form an interval ({stable_n} alcoves)"), interval.is_empty(), first(&interval));
    r.check("As <= A and B <= A imply Bs <= A", one_a.is_empty(), first(&one_a));
    r.check("As <= A and As <= B imply As <= Bs", one_b.is_empty(), first(&one_b));
    r.check(
        format!("A -> As is an order isomorphism across components ({moved_n} alcoves)"),
        iso.is_empty(),
        first(&iso),
    );
    Ok(r)
}

/// Union and intersection with the `s`-translate keep every open open, and
/// commute with unions and intersections on the sampled pairs.
pub fn check_sharp_flat(w: &Window, s: usize, opens: &[AlcoveSet], pairs: &[(usize, usize)]) -> Result<Report> {
    let mut r = Report::new();
    let bad_open: Vec<usize> =
        (0..opens.len()).filter(|&i| w.sharp(&opens[i], s).is_err() || w.flat(&opens[i], s).is_err()).collect();
    r.check(
        format!("J u Js and J n Js are open ({} opens)", opens.len()),
        bad_open.is_empty(),
        bad_open
            .first()
            .map(|&i| format!("{:?}", opens[i].ones().map(|a| w.name(a)).collect::<Vec<_>>()))
            .unwrap_or_default(),
    );
    let mut bad = Vec::new();
    for &(i, k) in pairs {
        let (a, b) = (&opens[i], &opens[k]);
        let mut u = a.clone();
        u.union_with(b);
        let mut n = a.clone();
        n.intersect_with(b);
        let (sa, sb, fa, fb) = (w.sharp(a, s)?, w.sharp(b, s)?, w.flat(a, s)?, w.flat(b, s)?);
        let mut su = sa.clone();
        su.union_with(&sb);
        let mut sn = sa;
        sn.intersect_with(&sb);
        let mut fu = fa.clone();
        fu.union_with(&fb);
        let mut fnn = fa;
        fnn.intersect_with(&fb);
        if w.sharp(&u, s)? != su || w.sharp(&n, s)? != sn || w.flat(&u, s)? != fu || w.flat(&n, s)? != fnn {
            bad.push((i, k));
        }
    }
    r.check(
        format!("both operations commute with union and intersection ({} pairs)", pairs.len()),
        bad.is_empty(),
        bad.first().map(|p| format!("{p:?}")).unwrap_or_default(),
    );
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alcovegeom::floor;
    use crate::rootsys::{build_root_system, CartanType};

    fn ring(ty: CartanType, inverted: &str) -> BaseRing {
        let rs = Arc::new(build_root_system(ty));
        let inv = crate::basering::parse_inverted(&rs, inverted).unwrap();
        crate::basering::make_base_ring(rs, 5, inv).unwrap()
    }

    fn floors(w: &Window) -> Vec<i64> {
        w.alcoves.iter().map(|a| floor(&w.rs, a, 0)).collect()
    }

    #[test]
    fn a1_structure_order_is_total() {
        let w = Window::radius(&ring(CartanType::A1, "none"), 3, 2);
        assert!(w.stable);
        let f = floors(&w);
        for a in 0..w.len() {
            for b in 0..w.len() {
                assert_eq!(w.leq(b, a), f[b] <= f[a]);
            }
        }
        assert_eq!(w.components().len(), 1);
    }

    #[test]
    fn a1_generic_order_is_parity() {
        let w = Window::radius(&ring(CartanType::A1, "all"), 3, 2);
        let f = floors(&w);
        for a in 0..w.len() {
            for b in 0..w.len() {
                let d = f[a] - f[b];
                assert_eq!(w.leq(b, a), d >= 0 && d % 2 == 0);
            }
        }
        assert_eq!(w.check_components().unwrap().len(), 2);
    }

    #[test]
    fn hull_and_classify() {
        let w = Window::radius(&ring(CartanType::A1, "none"), 3, 2);
        let f = floors(&w);
        let pos = |n: i64| f.iter().position(|&x| x == n).unwrap();
        assert_eq!(w.open_hull(&w.empty_set()), w.empty_set());
        let hull = w.open_hull(&w.set_of(&[pos(0)]));
        let expect: Vec<usize> = (0..w.len()).filter(|&i| f[i] <= 0).collect();
        assert_eq!(hull.ones().collect::<Vec<_>>(), expect);
        assert_eq!(w.open_hull(&hull), hull);
        assert_eq!(w.classify(&hull), Kind::Open);
        let mut comp = w.full_set();
        comp.difference_with(&hull);
        assert_eq!(w.classify(&comp), Kind::Closed);
        assert_eq!(w.classify(&w.set_of(&[pos(0), pos(2)])), Kind::Neither);
        assert_eq!(w.classify(&w.set_of(&[pos(0), pos(1)])), Kind::LocallyClosed);
    }

    #[test]
    fn sharp_flat_a1() {
        let w = Window::s_closed(&ring(CartanType::A1, "none"), 3, 2, 0);
        assert_eq!(w.len(), 8);
        let f = floors(&w);
        let j: Vec<usize> = (0..w.len()).filter(|&i| f[i] <= 0).collect();
        let j = w.set_of(&j);
        let sh = w.sharp(&j, 0).unwrap();
        let fl = w.flat(&j, 0).unwrap();
        assert_eq!(sh.ones().map(|i| f[i]).max(), Some(1));
        assert_eq!(fl.ones().map(|i| f[i]).max(), Some(-1));
        let e = w.empty_set();
        assert_eq!(w.sharp(&e, 0).unwrap(), e);
        // this window is not closed under the finite reflection
        assert!(matches!(w.sharp(&j, 1), Err(Error::NotSClosed(_))));
    }

    #[test]
    fn a2_subgeneric_components() {
        let w = Window::radius(&ring(CartanType::A2, "a2,a1+a2"), 2, 2);
        assert_eq!(w.check_components().unwrap().len(), 3);
    }

    #[test]
    fn dot_has_all_nodes() {
        let w = Window::radius(&ring(CartanType::A2, "none"), 1, 2);
        let dot = w.to_dot();
        assert_eq!(dot.matches("label=").count(), 6);
    }

    #[test]
    fn admissible_examples() {
        let t = ring(CartanType::A1, "none");
        let w = Window::s_closed(&t, 3, 2, 0);
        let fam = w.family(FamilyKind::SInvariantOpens(0)).unwrap();
        assert!(w.admissibility_certificate(&fam, &w).is_ok());
        let all = w.family(FamilyKind::AllOpens).unwrap();
        let g = w.with_ring(&ring(CartanType::A1, "all"));
        assert!(w.admissibility_certificate(&all, &g).is_ok());
    }
}
