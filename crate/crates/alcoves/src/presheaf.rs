//! Flabby presheaves of graded structure-algebra modules on a window.
//!
//! A presheaf is a tree of constructors over a fixed window. Sections over an
//! open `J` live in the node's label-diagonal ambient; restriction to a
//! smaller open is the projection onto the summands that survive there.
//! Sections are computed lazily per `(J, degree)` and memoized.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::ordertopo::{AlcoveSet, Window};
use crate::polyalg::{saturate_from, solve, FreeLayout, GradedBasis, SPoly, Subspace};
use crate::report::Report;
use crate::structalg::{all_labels, delta, inverted_forms, label_times_s, z_sections, SAT_STEPS};
use crate::zmod::{induce_piece, induced_ambient, Ambient, ZModule};

pub(crate) fn key(j: &AlcoveSet) -> Vec<usize> {
    j.ones().collect()
}

fn same_window(a: &Window, b: &Window) -> bool {
    a.alcoves == b.alcoves && a.ring == b.ring
}

#[derive(Clone, Debug)]
enum Op {
    Skyscraper(usize),
    Structure,
    Sum(Vec<Presheaf>),
    Shift(Presheaf, i32),
    Twist { inner: Presheaf, s: usize, lambda: AlcoveSet },
    Plus(Presheaf),
    Epsilon(Presheaf, usize),
    BoxChange(Presheaf),
    Component(Presheaf, BTreeSet<usize>),
    Faulty(Presheaf, AlcoveSet),
}

#[derive(Debug)]
struct Node {
    window: Arc<Window>,
    ambient: Ambient,
    op: Op,
    sections: Mutex<HashMap<(AlcoveSet, i32), Subspace>>,
    masks: Mutex<HashMap<AlcoveSet, Vec<bool>>>,
    zcache: Mutex<Option<GradedBasis>>,
}

#[derive(Clone, Debug)]
pub struct Presheaf(Arc<Node>);

impl Presheaf {
    fn make(window: Arc<Window>, ambient: Ambient, op: Op) -> Presheaf {
        Presheaf(Arc::new(Node {
            window,
            ambient,
            op,
            sections: Mutex::new(HashMap::new()),
            masks: Mutex::new(HashMap::new()),
            zcache: Mutex::new(None),
        }))
    }

    /// `J -> T` when `J` meets the orbit `x`, else `0`.
    pub fn skyscraper(window: &Arc<Window>, x: usize) -> Result<Presheaf> {
        if !window.all_labels().contains(&x) {
            return Err(Error::Precondition(format!("orbit {} does not meet the window", window.rs.weyl.name(x))));
        }
        let amb = Ambient::new(&window.ring, vec![(x, 0)]);
        Ok(Presheaf::make(window.clone(), amb, Op::Skyscraper(x)))
    }

    /// `J -> Z^{pi(J)}`.
    pub fn structure(window: &Arc<Window>) -> Presheaf {
        let amb = Ambient::new(&window.ring, all_labels(&window.ring).into_iter().map(|x| (x, 0)).collect());
        Presheaf::make(window.clone(), amb, Op::Structure)
    }

    pub fn zero(window: &Arc<Window>) -> Presheaf {
        Presheaf::make(window.clone(), Ambient::new(&window.ring, Vec::new()), Op::Sum(Vec::new()))
    }

    pub fn sum(window: &Arc<Window>, parts: Vec<Presheaf>) -> Result<Presheaf> {
        if parts.iter().any(|p| !same_window(&p.0.window, window)) {
            return Err(Error::Precondition("summands live on different windows".into()));
        }
        let summands = parts.iter().flat_map(|p| p.0.ambient.summands.clone()).collect();
        Ok(Presheaf::make(window.clone(), Ambient::new(&window.ring, summands), Op::Sum(parts)))
    }

    /// `M[l]`, with `M[l]_n = M_{l+n}`.
    pub fn shift(&self, l: i32) -> Result<Presheaf> {
        let summands: Vec<(usize, i32)> = self.0.ambient.summands.iter().map(|&(x, g)| (x, g - l)).collect();
        if summands.iter().any(|s| s.1 < 0) {
            return Err(Error::Precondition(format!("shift by {l} moves a generator below degree 0")));
        }
        let amb = Ambient::new(&self.0.ambient.ring, summands);
        Ok(Presheaf::make(self.0.window.clone(), amb, Op::Shift(self.clone(), l)))
    }

    /// Image in the sum of the stalks over the orbit traces.
    pub fn plus(&self) -> Presheaf {
        Presheaf::make(self.0.window.clone(), self.0.ambient.clone(), Op::Plus(self.clone()))
    }

    /// `J -> Z (x)_{Z^s} M(J u Js)`, before the plus construction.
    pub fn epsilon(&self, s: usize) -> Result<Presheaf> {
        let w = &self.0.window;
        if w.right_perm(s).is_none() {
            return Err(Error::NotSClosed(crate::alcovegeom::affine_simple_name(&w.rs, s)));
        }
        let amb = induced_ambient(&self.0.ambient, s);
        Ok(Presheaf::make(w.clone(), amb, Op::Epsilon(self.clone(), s)))
    }

    pub fn theta(&self, s: usize) -> Result<Presheaf> {
        Ok(self.epsilon(s)?.plus())
    }

    /// Base change to `ring` on the same alcoves.
    pub fn box_change(&self, ring: &crate::basering::BaseRing) -> Result<Presheaf> {
        let w = &self.0.window;
        if !crate::basering::hom_exists(&w.ring, ring) {
            return Err(Error::Precondition(format!("no homomorphism {} -> {}", w.ring, ring)));
        }
        let w2 = Arc::new(w.with_ring(ring));
        if !w.stable || !w2.stable {
            return Err(Error::Unstable);
        }
        let amb = Ambient::new(ring, self.0.ambient.summands.clone());
        Ok(Presheaf::make(w2, amb, Op::BoxChange(self.clone())))
    }

    /// The factor `M^L` for a set of labels.
    pub fn component(&self, labels: &BTreeSet<usize>) -> Presheaf {
        Presheaf::make(self.0.window.clone(), self.0.ambient.clone(), Op::Component(self.clone(), labels.clone()))
    }

    /// Same sections, but restriction out of `bad` returns zero.
    pub fn faulty(&self, bad: &AlcoveSet) -> Presheaf {
        Presheaf::make(self.0.window.clone(), self.0.ambient.clone(), Op::Faulty(self.clone(), bad.clone()))
    }

    /// `J -> M((J n L) s)` with the action twisted by `eta_s`.
    ///
    /// Requires `L` and `Ls` disjoint and `M` supported on `Ls`; support is
    /// verified on the canonical opens in degrees `0..=upto`.
    pub fn twist(&self, s: usize, lambda: &AlcoveSet, upto: i32) -> Result<Presheaf> {
        let w = &self.0.window;
        let ls = w.translate(lambda, s)?;
        if !ls.is_disjoint(lambda) {
            return Err(Error::Precondition("the set and its s-translate overlap".into()));
        }
        for j in w.canonical_opens(&[s]) {
            let mut jl = j.clone();
            jl.intersect_with(&ls);
            for d in 0..=upto {
                let full = self.sections(&j, d);
                let ker = full.kernel(full.ambient_dim(), |v| self.restrict(&j, &jl, v, d));
                if !ker.is_zero() || full.dim() != self.sections(&jl, d).dim() {
                    return Err(Error::Precondition("presheaf is not supported on the translated set".into()));
                }
            }
        }
        let ring = &self.0.ambient.ring;
        let summands = self.0.ambient.summands.iter().map(|&(y, g)| (label_times_s(ring, y, s), g)).collect();
        let amb = Ambient::new(ring, summands);
        Ok(Presheaf::make(w.clone(), amb, Op::Twist { inner: self.clone(), s, lambda: lambda.clone() }))
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.0.window
    }

    pub fn ambient(&self) -> &Ambient {
        &self.0.ambient
    }

    pub fn layout(&self) -> FreeLayout {
        self.0.ambient.layout()
    }

    /// Constructor tree, for reports.
    pub fn describe(&self) -> String {
        let rs = &self.0.window.rs;
        match &self.0.op {
            Op::Skyscraper(x) => format!("sky({})", rs.weyl.name(*x)),
            Op::Structure => "structure".into(),
            Op::Sum(ps) => format!("sum({})", ps.iter().map(Presheaf::describe).collect::<Vec<_>>().join(",")),
            Op::Shift(p, l) => format!("shift({l},{})", p.describe()),
            Op::Twist { inner, s, .. } => format!("twist({s},{})", inner.describe()),
            Op::Plus(p) => format!("plus({})", p.describe()),
            Op::Epsilon(p, s) => format!("eps({s},{})", p.describe()),
            Op::BoxChange(p) => format!("box({},{})", self.0.window.ring, p.describe()),
            Op::Component(p, l) => {
                format!("part({},{})", l.iter().map(|&x| rs.weyl.name(x)).collect::<Vec<_>>().join("|"), p.describe())
            }
            Op::Faulty(p, _) => format!("faulty({})", p.describe()),
        }
    }

    fn twist_open(&self, j: &AlcoveSet, s: usize, lambda: &AlcoveSet) -> AlcoveSet {
        let mut jl = j.clone();
        jl.intersect_with(lambda);
        self.0.window.translate(&jl, s).expect("window closed under s")
    }

    fn sharp_unchecked(&self, j: &AlcoveSet, s: usize) -> AlcoveSet {
        let mut out = self.0.window.translate(j, s).expect("window closed under s");
        out.union_with(j);
        out
    }

    /// Summands that carry sections over `j`.
    pub fn mask(&self, j: &AlcoveSet) -> Vec<bool> {
        if let Some(m) = self.0.masks.lock().unwrap().get(j) {
            return m.clone();
        }
        let w = &self.0.window;
        let m = match &self.0.op {
            Op::Skyscraper(x) => vec![w.labels(j).contains(x)],
            Op::Structure => self.0.ambient.label_mask(&w.labels(j)),
            Op::Sum(ps) => ps.iter().flat_map(|p| p.mask(j)).collect(),
            Op::Shift(p, _) | Op::Faulty(p, _) => p.mask(j),
            Op::Twist { inner, s, lambda } => inner.mask(&self.twist_open(j, *s, lambda)),
            Op::Plus(p) | Op::BoxChange(p) => {
                let inner_w = &p.0.window;
                let mut per_label: BTreeMap<usize, Vec<bool>> = BTreeMap::new();
                self.0
                    .ambient
                    .summands
                    .iter()
                    .enumerate()
                    .map(|(k, &(x, _))| {
                        per_label.entry(x).or_insert_with(|| p.mask(&inner_w.open_hull(&w.orbit_part(j, x))))[k]
                    })
                    .collect()
            }
            Op::Epsilon(p, s) => p.mask(&self.sharp_unchecked(j, *s)).into_iter().flat_map(|b| [b, b]).collect(),
            Op::Component(p, labels) => {
                p.mask(j).into_iter().zip(&self.0.ambient.summands).map(|(b, s)| b && labels.contains(&s.0)).collect()
            }
        };
        self.0.masks.lock().unwrap().insert(j.clone(), m.clone());
        m
    }

    /// Degree-`d` sections over `j`, as a subspace of the ambient piece.
    pub fn sections(&self, j: &AlcoveSet, d: i32) -> Subspace {
        let n = self.0.ambient.piece_dim(d);
        if d < 0 {
            return Subspace::zero(self.0.ambient.ring.p, n);
        }
        let k = (j.clone(), d);
        if let Some(s) = self.0.sections.lock().unwrap().get(&k) {
            return s.clone();
        }
        let out = self.compute(j, d);
        self.0.sections.lock().unwrap().insert(k, out.clone());
        out
    }

    fn compute(&self, j: &AlcoveSet, d: i32) -> Subspace {
        let amb = &self.0.ambient;
        let p = amb.ring.p;
        let n = amb.piece_dim(d);
        match &self.0.op {
            Op::Skyscraper(_) => {
                if self.mask(j)[0] {
                    Subspace::full(p, n)
                } else {
                    Subspace::zero(p, n)
                }
            }
            Op::Structure => {
                let mask = self.mask(j);
                self.saturated(d, |e| {
                    let z = self.z_piece(e);
                    let cm = amb.coord_mask(&mask, e);
                    z.image(z.ambient_dim(), |v| crate::polyalg::mask_vec(v, &cm))
                })
            }
            Op::Sum(ps) => {
                let mut out = Subspace::zero(p, n);
                let mut off = 0;
                for q in ps {
                    let sec = q.sections(j, d);
                    for v in sec.basis() {
                        let mut w = vec![0; n];
                        w[off..off + v.len()].copy_from_slice(v);
                        out.insert(&w);
                    }
                    off += sec.ambient_dim();
                }
                out
            }
            Op::Shift(q, l) => q.sections(j, d + l),
            Op::Twist { inner, s, lambda } => inner.sections(&self.twist_open(j, *s, lambda), d),
            Op::Faulty(q, _) => q.sections(j, d),
            Op::Plus(q) | Op::Component(q, _) => {
                let mask = self.mask(j);
                self.saturated(d, |e| {
                    let sec = q.sections(j, e);
                    let cm = amb.coord_mask(&mask, e);
                    sec.image(sec.ambient_dim(), |v| crate::polyalg::mask_vec(v, &cm))
                })
            }
            Op::BoxChange(q) => {
                let mask = self.mask(j);
                let jt = q.0.window.open_hull(j);
                self.saturated(d, |e| {
                    let sec = q.sections(&jt, e);
                    let cm = amb.coord_mask(&mask, e);
                    sec.image(sec.ambient_dim(), |v| crate::polyalg::mask_vec(v, &cm))
                })
            }
            Op::Epsilon(q, s) => {
                let js = self.sharp_unchecked(j, *s);
                self.saturated(d, |e| {
                    let lower = q.sections(&js, e - 2);
                    let lower = (e >= 2).then_some(&lower);
                    induce_piece(&q.0.ambient, amb, *s, &q.sections(&js, e), lower, e)
                })
            }
        }
    }

    fn saturated(&self, d: i32, base: impl Fn(i32) -> Subspace) -> Subspace {
        let forms = inverted_forms(&self.0.ambient.ring);
        if forms.is_empty() {
            return base(d);
        }
        let span = 2 * SAT_STEPS as i32;
        let pieces: Vec<Subspace> = (0..=span).map(|i| base(d + i)).collect();
        saturate_from(&self.layout(), d, &pieces, &forms, SAT_STEPS).swap_remove(0)
    }

    fn z_piece(&self, e: i32) -> Subspace {
        let mut cache = self.0.zcache.lock().unwrap();
        let ring = &self.0.ambient.ring;
        if cache.as_ref().is_none_or(|g| g.top() < e) {
            let top = cache.as_ref().map_or(e, |g| e.max(2 * g.top()));
            *cache = Some(z_sections(ring, &all_labels(ring), top));
        }
        cache.as_ref().unwrap().pieces[e as usize].clone()
    }

    /// Restriction of a degree-`d` section over `from` to `to`.
    pub fn restrict(&self, from: &AlcoveSet, to: &AlcoveSet, v: &[u32], d: i32) -> Vec<u32> {
        if let Op::Faulty(_, bad) = &self.0.op {
            if from == bad && to != from {
                return vec![0; v.len()];
            }
        }
        self.0.ambient.project(v, d, &self.mask(to))
    }

    pub fn dims(&self, j: &AlcoveSet, upto: i32) -> Vec<usize> {
        (0..=upto).map(|d| self.sections(j, d).dim()).collect()
    }

    /// Sections over `j` in degrees `0..=top` as a module.
    pub fn module(&self, j: &AlcoveSet, top: i32) -> ZModule {
        ZModule { ambient: self.0.ambient.clone(), pieces: (0..=top).map(|d| self.sections(j, d)).collect() }
    }

    pub fn is_same_node(&self, o: &Presheaf) -> bool {
        Arc::ptr_eq(&self.0, &o.0)
    }
}

fn names(w: &Window, j: &AlcoveSet) -> String {
    format!("{{{}}}", j.ones().map(|a| w.name(a)).collect::<Vec<_>>().join(", "))
}

fn nested_pairs(opens: &[AlcoveSet]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (a, j) in opens.iter().enumerate() {
        for (b, j2) in opens.iter().enumerate() {
            if a != b && j2.is_subset(j) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Restrictions between nested opens are onto after inverting `U`.
pub fn check_flabby(p: &Presheaf, opens: &[AlcoveSet], upto: i32) -> Report {
    let mut r = Report::new();
    let forms = inverted_forms(&p.0.ambient.ring);
    let layout = p.layout();
    let span = if forms.is_empty() { 0 } else { 2 * SAT_STEPS as i32 };
    let mut bad = Vec::new();
    for (a, b) in nested_pairs(opens) {
        let (j, j2) = (&opens[a], &opens[b]);
        for d in 0..=upto {
            let img: Vec<Subspace> = (0..=span)
                .map(|i| {
                    let sec = p.sections(j, d + i);
                    sec.image(sec.ambient_dim(), |v| p.restrict(j, j2, v, d + i))
                })
                .collect();
            let sat = saturate_from(&layout, d, &img, &forms, SAT_STEPS).swap_remove(0);
            if sat != p.sections(j2, d) {
                bad.push(format!("{} -> {} in degree {d}", names(&p.0.window, j), names(&p.0.window, j2)));
            }
        }
    }
    r.check("restrictions are surjective", bad.is_empty(), bad.first().cloned().unwrap_or_default());
    r
}

/// Zero on the empty open.
pub fn check_finitary(p: &Presheaf, upto: i32) -> Report {
    let mut r = Report::new();
    let e = p.0.window.empty_set();
    r.check("no sections over the empty open", (0..=upto).all(|d| p.sections(&e, d).is_zero()), "");
    r
}

/// Sections are modules over the structure algebra.
pub fn check_z_stable(p: &Presheaf, opens: &[AlcoveSet], upto: i32) -> Report {
    let mut r = Report::new();
    let bad: Vec<String> =
        opens.iter().filter(|j| !p.module(j, upto).is_z_stable()).map(|j| names(&p.0.window, j)).collect();
    r.check("sections are structure-algebra modules", bad.is_empty(), bad.first().cloned().unwrap_or_default());
    r
}

/// Both forms of the support condition, degreewise.
#[derive(Clone, Debug, Default)]
pub struct SupportReport {
    pub upto: i32,
    /// `(J, x, d)` where the map to the stalk over the orbit trace is not injective on `x`.
    pub pointwise: Vec<(Vec<usize>, usize, i32)>,
    /// `(J, J', y, d)` where the restriction kernel has a nonzero stalk at `y` outside `pi(J \ J')`.
    pub kernel: Vec<(Vec<usize>, Vec<usize>, usize, i32)>,
}

impl SupportReport {
    pub fn pointwise_ok(&self) -> bool {
        self.pointwise.is_empty()
    }

    pub fn kernel_ok(&self) -> bool {
        self.kernel.is_empty()
    }

    pub fn agree(&self) -> bool {
        self.pointwise_ok() == self.kernel_ok()
    }

    pub fn passed(&self) -> bool {
        self.pointwise_ok() && self.kernel_ok()
    }

    pub fn to_report(&self, w: &Window) -> Report {
        let mut r = Report::new();
        let first = self.pointwise.first().map(|(j, x, d)| {
            format!(
                "open {:?} orbit {} degree {d}",
                j.iter().map(|&a| w.name(a)).collect::<Vec<_>>(),
                w.rs.weyl.name(*x)
            )
        });
        r.check(
            format!("support condition, stalk form (degrees <= {})", self.upto),
            self.pointwise_ok(),
            first.unwrap_or_default(),
        );
        let first = self.kernel.first().map(|(j, j2, y, d)| {
            format!(
                "kernel of {:?} -> {:?} lives at {} in degree {d}",
                j.iter().map(|&a| w.name(a)).collect::<Vec<_>>(),
                j2.iter().map(|&a| w.name(a)).collect::<Vec<_>>(),
                w.rs.weyl.name(*y)
            )
        });
        r.check(
            format!("support condition, kernel form (degrees <= {})", self.upto),
            self.kernel_ok(),
            first.unwrap_or_default(),
        );
        r.check("the two forms agree", self.agree(), "");
        r
    }
}

pub fn check_support_condition(p: &Presheaf, opens: &[AlcoveSet], upto: i32) -> SupportReport {
    let w = &p.0.window;
    let amb = &p.0.ambient;
    let mut rep = SupportReport { upto, ..Default::default() };
    for j in opens {
        for x in w.labels(j) {
            let jx = w.open_hull(&w.orbit_part(j, x));
            let at_x = amb.label_mask(&BTreeSet::from([x]));
            let kept: Vec<bool> = at_x.iter().zip(p.mask(&jx)).map(|(&a, b)| a && b).collect();
            for d in 0..=upto {
                let sec = p.sections(j, d);
                let ker = sec.kernel(sec.ambient_dim(), |v| amb.project(v, d, &kept));
                if ker.basis().iter().any(|v| amb.project(v, d, &at_x).iter().any(|&c| c != 0)) {
                    rep.pointwise.push((key(j), x, d));
                }
            }
        }
    }
    for (a, b) in nested_pairs(opens) {
        let (j, j2) = (&opens[a], &opens[b]);
        let mut diff = j.clone();
        diff.difference_with(j2);
        let allowed = w.labels(&diff);
        for d in 0..=upto {
            let sec = p.sections(j, d);
            let ker = sec.kernel(sec.ambient_dim(), |v| p.restrict(j, j2, v, d));
            let m = ZModule::zero(amb.clone(), 0);
            let labels: BTreeSet<usize> = ker.basis().iter().flat_map(|v| m.z_support_elem(v, d)).collect();
            if let Some(&y) = labels.iter().find(|y| !allowed.contains(y)) {
                rep.kernel.push((key(j), key(j2), y, d));
            }
        }
    }
    rep
}

/// `{J \ {A} : A maximal in J}`, when it has at least two members.
pub fn maximal_cover(w: &Window, j: &AlcoveSet) -> Vec<AlcoveSet> {
    let maxes: Vec<usize> = j.ones().filter(|&a| w.up_cone(a).ones().all(|b| b == a || !j.contains(b))).collect();
    if maxes.len() < 2 {
        return Vec::new();
    }
    maxes
        .into_iter()
        .map(|a| {
            let mut c = j.clone();
            c.set(a, false);
            c
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SheafFailure {
    pub open: Vec<usize>,
    pub cover: Vec<Vec<usize>>,
    pub degree: i32,
    pub kind: &'static str,
}

#[derive(Clone, Debug)]
pub struct SheafReport {
    pub upto: i32,
    pub covers_checked: usize,
    pub failure: Option<SheafFailure>,
}

impl SheafReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn to_report(&self, w: &Window, what: &str) -> Report {
        let mut r = Report::new();
        let detail = match &self.failure {
            None => format!("{} covers", self.covers_checked),
            Some(f) => format!(
                "{} fails over {:?} in degree {} for cover {:?}",
                f.kind,
                f.open.iter().map(|&a| w.name(a)).collect::<Vec<_>>(),
                f.degree,
                f.cover.iter().map(|c| c.iter().map(|&a| w.name(a)).collect::<Vec<_>>()).collect::<Vec<_>>()
            ),
        };
        r.check(format!("{what} (degrees <= {})", self.upto), self.passed(), detail);
        r
    }
}

/// Separation and gluing for covers by maximal proper sub-opens.
pub fn is_sheaf(p: &Presheaf, opens: &[AlcoveSet], upto: i32) -> SheafReport {
    let w = p.0.window.clone();
    is_sheaf_with(p, opens, upto, |j| maximal_cover(&w, j))
}

/// Separation and gluing for the covers produced by `covers`.
pub fn is_sheaf_with(
    p: &Presheaf,
    opens: &[AlcoveSet],
    upto: i32,
    covers: impl Fn(&AlcoveSet) -> Vec<AlcoveSet>,
) -> SheafReport {
    let mut rep = SheafReport { upto, covers_checked: 0, failure: None };
    let amb = &p.0.ambient;
    let pr = amb.ring.p;
    let forms = inverted_forms(&amb.ring);
    let span = if forms.is_empty() { 0 } else { 2 * SAT_STEPS as i32 };
    for j in opens {
        let cover = covers(j);
        if cover.is_empty() {
            continue;
        }
        rep.covers_checked += 1;
        let k = cover.len();
        let gens: Vec<i32> = (0..k).flat_map(|_| amb.summands.iter().map(|s| s.1)).collect();
        let big = FreeLayout::new(pr, amb.ring.rank(), gens);
        let glue = |v: &[u32], e: i32| -> Vec<u32> { cover.iter().flat_map(|c| p.restrict(j, c, v, e)).collect() };
        for d in 0..=upto {
            let n = amb.piece_dim(d);
            let sec = p.sections(j, d);
            let fail = |kind| SheafFailure { open: key(j), cover: cover.iter().map(key).collect(), degree: d, kind };
            if !sec.kernel(k * n, |v| glue(v, d)).is_zero() {
                rep.failure = Some(fail("separation"));
                return rep;
            }
            // compatible families
            let mut family_basis = Vec::new();
            for (i, c) in cover.iter().enumerate() {
                for v in p.sections(c, d).basis() {
                    let mut x = vec![0; k * n];
                    x[i * n..(i + 1) * n].copy_from_slice(v);
                    family_basis.push(x);
                }
            }
            let family = Subspace::from_vectors(pr, k * n, family_basis);
            let pairs: Vec<(usize, usize, AlcoveSet)> = (0..k)
                .flat_map(|a| ((a + 1)..k).map(move |b| (a, b)))
                .map(|(a, b)| {
                    let mut c = cover[a].clone();
                    c.intersect_with(&cover[b]);
                    (a, b, c)
                })
                .collect();
            let f = crate::polyalg::Fp::new(pr);
            let compatible = family.kernel(pairs.len() * n, |x| {
                pairs
                    .iter()
                    .flat_map(|(a, b, c)| {
                        let u = p.restrict(&cover[*a], c, &x[a * n..(a + 1) * n], d);
                        let v = p.restrict(&cover[*b], c, &x[b * n..(b + 1) * n], d);
                        u.iter().zip(&v).map(|(&s, &t)| f.sub(s, t)).collect::<Vec<_>>()
                    })
                    .collect()
            });
            let img: Vec<Subspace> = (0..=span)
                .map(|i| {
                    let s = p.sections(j, d + i);
                    s.image(k * amb.piece_dim(d + i), |v| glue(v, d + i))
                })
                .collect();
            let sat = saturate_from(&big, d, &img, &forms, SAT_STEPS).swap_remove(0);
            if sat != compatible {
                rep.failure = Some(fail("gluing"));
                return rep;
            }
        }
    }
    rep
}

/// Degree-bounded root reflexivity of the sections over every open.
pub fn check_root_reflexive(p: &Presheaf, opens: &[AlcoveSet], upto: i32) -> Report {
    let mut r = Report::new();
    let steps = 2;
    let bad: Vec<String> = opens
        .iter()
        .filter(|j| !p.module(j, upto + 2 * steps as i32).is_root_reflexive(upto, steps))
        .map(|j| names(&p.0.window, j))
        .collect();
    r.check(
        format!("sections are root reflexive (degrees <= {upto})"),
        bad.is_empty(),
        bad.first().cloned().unwrap_or_default(),
    );
    r
}

/// Membership in the category of flabby finitary presheaves with the
/// support condition, plus structure-algebra stability.
pub fn validate(p: &Presheaf, opens: &[AlcoveSet], upto: i32) -> Report {
    let mut r = check_finitary(p, upto);
    r.append(check_flabby(p, opens, upto));
    r.append(check_z_stable(p, opens, upto));
    r.append(check_support_condition(p, opens, upto).to_report(&p.0.window));
    r
}

/// Factors `M^L` over the components of the window's base ring.
pub fn canonical_decomposition(p: &Presheaf) -> Vec<(Vec<usize>, Presheaf)> {
    let present = p.0.ambient.labels();
    crate::structalg::component_labels(&p.0.ambient.ring)
        .into_iter()
        .filter(|c| c.iter().any(|x| present.contains(x)))
        .map(|c| {
            let set: BTreeSet<usize> = c.iter().copied().collect();
            (c, p.component(&set))
        })
        .collect()
}

/// Each factor is supported on its component and the factors add up to `M`.
pub fn check_decomposition(p: &Presheaf, opens: &[AlcoveSet], upto: i32) -> Report {
    let mut r = Report::new();
    let w = &p.0.window;
    let parts = canonical_decomposition(p);
    let mut support_bad = Vec::new();
    let mut sum_bad = Vec::new();
    for j in opens {
        let mut total = vec![0; (upto + 1) as usize];
        for (labels, f) in &parts {
            let mut lam = w.empty_set();
            for a in 0..w.len() {
                if labels.contains(&w.label(a)) {
                    lam.insert(a);
                }
            }
            let mut jl = j.clone();
            jl.intersect_with(&lam);
            for d in 0..=upto {
                let sec = f.sections(j, d);
                total[d as usize] += sec.dim();
                let ker = sec.kernel(sec.ambient_dim(), |v| f.restrict(j, &jl, v, d));
                if !ker.is_zero() || sec.dim() != f.sections(&jl, d).dim() {
                    support_bad.push(format!("{} on {}", names(w, j), labels.len()));
                }
            }
        }
        if total != p.dims(j, upto) {
            sum_bad.push(names(w, j));
        }
    }
    r.check(
        format!("each component factor is supported on its component (degrees <= {upto})"),
        support_bad.is_empty(),
        support_bad.first().cloned().unwrap_or_default(),
    );
    r.check(
        format!("component factors add up (degrees <= {upto})"),
        sum_bad.is_empty(),
        sum_bad.first().cloned().unwrap_or_default(),
    );
    r
}

/// Per-open, per-degree matrices: images of the section basis.
#[derive(Clone, Debug)]
pub struct Morphism {
    pub source: Presheaf,
    pub target: Presheaf,
    pub upto: i32,
    maps: BTreeMap<(Vec<usize>, i32), Vec<Vec<u32>>>,
    opens: Vec<AlcoveSet>,
}

impl Morphism {
    /// Tabulates `f` on the given opens; every image must be a section.
    pub fn from_fn(
        source: &Presheaf,
        target: &Presheaf,
        opens: &[AlcoveSet],
        upto: i32,
        f: impl Fn(&AlcoveSet, i32, &[u32]) -> Vec<u32>,
    ) -> Result<Morphism> {
        let mut maps = BTreeMap::new();
        for j in opens {
            for d in 0..=upto {
                let tgt = target.sections(j, d);
                let imgs: Vec<Vec<u32>> = source.sections(j, d).basis().iter().map(|v| f(j, d, v)).collect();
                if imgs.iter().any(|v| !tgt.contains(v)) {
                    return Err(Error::CheckFailed(format!(
                        "image is not a section over {}",
                        names(&source.0.window, j)
                    )));
                }
                maps.insert((key(j), d), imgs);
            }
        }
        Ok(Morphism { source: source.clone(), target: target.clone(), upto, maps, opens: opens.to_vec() })
    }

    pub fn opens(&self) -> &[AlcoveSet] {
        &self.opens
    }

    pub fn apply(&self, j: &AlcoveSet, d: i32, v: &[u32]) -> Option<Vec<u32>> {
        let imgs = self.maps.get(&(key(j), d))?;
        let c = self.source.sections(j, d).coordinates(v)?;
        let n = self.target.ambient().piece_dim(d);
        Some(crate::polyalg::combine(self.source.ambient().ring.p, n, &c, imgs))
    }

    pub fn matrix(&self, j: &AlcoveSet, d: i32) -> Option<&Vec<Vec<u32>>> {
        self.maps.get(&(key(j), d))
    }

    /// Naturality squares between nested tabulated opens.
    pub fn check_naturality(&self) -> Report {
        let mut r = Report::new();
        let mut bad = Vec::new();
        for (a, b) in nested_pairs(&self.opens) {
            let (j, j2) = (&self.opens[a], &self.opens[b]);
            for d in 0..=self.upto {
                for v in self.source.sections(j, d).basis() {
                    let lhs = self.apply(j2, d, &self.source.restrict(j, j2, v, d));
                    let rhs = self.apply(j, d, v).map(|u| self.target.restrict(j, j2, &u, d));
                    if lhs != rhs {
                        bad.push(format!(
                            "{} -> {}",
                            names(&self.source.0.window, j),
                            names(&self.source.0.window, j2)
                        ));
                    }
                }
            }
        }
        r.check("morphism commutes with restrictions", bad.is_empty(), bad.first().cloned().unwrap_or_default());
        r
    }

    pub fn same_matrices(&self, o: &Morphism) -> bool {
        self.maps == o.maps
    }
}

/// Divides `w` (degree `e`) by the product of linear `forms`, if exact.
fn divide_by_forms(layout: &FreeLayout, w: &[u32], e: i32, forms: &[Vec<u32>]) -> Option<Vec<u32>> {
    let mut cur = w.to_vec();
    let mut deg = e;
    for form in forms {
        let n = layout.piece_dim(deg - 2);
        let imgs: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut u = vec![0; n];
                u[i] = 1;
                layout.mul_linear(&u, deg - 2, form)
            })
            .collect();
        cur = solve(layout.p(), &imgs, &cur)?;
        deg -= 2;
    }
    Some(cur)
}

/// Products of at most `SAT_STEPS` inverted coroots, smallest first.
fn unit_products(ring: &crate::basering::BaseRing) -> Vec<Vec<Vec<u32>>> {
    let forms = inverted_forms(ring);
    let mut out: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    let mut frontier: Vec<(usize, Vec<Vec<u32>>)> = vec![(0, Vec::new())];
    for _ in 0..SAT_STEPS {
        let mut next = Vec::new();
        for (start, prod) in &frontier {
            for (i, f) in forms.iter().enumerate().skip(*start) {
                let mut q = prod.clone();
                q.push(f.clone());
                next.push((i, q));
            }
        }
        out.extend(next.iter().map(|x| x.1.clone()));
        frontier = next;
    }
    out
}

fn mul_forms(layout: &FreeLayout, v: &[u32], d: i32, forms: &[Vec<u32>]) -> Vec<u32> {
    let mut cur = v.to_vec();
    let mut deg = d;
    for f in forms {
        cur = layout.mul_linear(&cur, deg, f);
        deg += 2;
    }
    cur
}

/// Value of the morphism over `jx` on the orbit `x`, read off from a family
/// member with the same trace on that orbit.
fn stalk_value(data: &Morphism, fam: &AlcoveSet, jx: &AlcoveSet, x: usize, rm: &[u32], d: i32) -> Option<Vec<u32>> {
    let src = &data.source;
    let tgt = &data.target;
    let ring = &src.ambient().ring;
    let slay = src.layout();
    let tlay = tgt.layout();
    let at_x = tgt.ambient().label_mask(&BTreeSet::from([x]));
    let kept: Vec<bool> = at_x.iter().zip(tgt.mask(jx)).map(|(&a, b)| a && b).collect();
    for prod in unit_products(ring) {
        let e = d + 2 * prod.len() as i32;
        if e > data.upto {
            continue;
        }
        let target = mul_forms(&slay, rm, d, &prod);
        let basis = src.sections(fam, e);
        let imgs: Vec<Vec<u32>> = basis.basis().iter().map(|v| src.restrict(fam, jx, v, e)).collect();
        let Some(c) = solve(ring.p, &imgs, &target) else { continue };
        let lift = crate::polyalg::combine(ring.p, basis.ambient_dim(), &c, basis.basis());
        let val = tgt.ambient().project(&data.apply(fam, e, &lift)?, e, &kept);
        return divide_by_forms(&tlay, &val, e, &prod);
    }
    None
}

/// Extends a morphism given on an admissible family to the given opens.
///
/// For each orbit `x` the stalk map is read off a family member with the
/// same trace on `x`, through a lift along the restriction; the value over
/// `J` is the unique section with those stalk components. A second pass with
/// a different choice of family members must give the same matrices.
pub fn extend_morphism(data: &Morphism, opens: &[AlcoveSet]) -> Result<Morphism> {
    let nat = data.check_naturality();
    if !nat.passed() {
        return Err(Error::Precondition("family data does not commute with restrictions".into()));
    }
    let first = extend_with(data, opens, false)?;
    let second = extend_with(data, opens, true)?;
    if !first.same_matrices(&second) {
        return Err(Error::CheckFailed("extension depends on the choice of family members".into()));
    }
    Ok(first)
}

fn extend_with(data: &Morphism, opens: &[AlcoveSet], last: bool) -> Result<Morphism> {
    let src = &data.source;
    let tgt = &data.target;
    let w = src.window().clone();
    let family = data.opens();
    let p = src.ambient().ring.p;
    let upto = data.upto;
    let mut maps = BTreeMap::new();
    for j in opens {
        let labels: Vec<usize> = w.labels(j).into_iter().collect();
        let mut pieces: Vec<(AlcoveSet, AlcoveSet, Vec<bool>)> = Vec::new();
        for &x in &labels {
            let trace = w.orbit_part(j, x);
            let mut hits = family.iter().filter(|f| w.orbit_part(f, x) == trace);
            let fam = if last { hits.next_back() } else { hits.next() };
            let fam = fam.ok_or_else(|| {
                Error::Precondition(format!(
                    "family is not admissible at {} on orbit {}",
                    names(&w, j),
                    w.rs.weyl.name(x)
                ))
            })?;
            let jx = w.open_hull(&trace);
            let at_x = tgt.ambient().label_mask(&BTreeSet::from([x]));
            let kept: Vec<bool> = at_x.iter().zip(tgt.mask(&jx)).map(|(&a, b)| a && b).collect();
            pieces.push((fam.clone(), jx, kept));
        }
        for d in 0..=upto {
            let tsec = tgt.sections(j, d);
            let readout = |t: &[u32]| -> Vec<u32> {
                pieces.iter().flat_map(|(_, _, kept)| tgt.ambient().project(t, d, kept)).collect()
            };
            let tb: Vec<Vec<u32>> = tsec.basis().iter().map(|t| readout(t)).collect();
            let mut imgs = Vec::new();
            for m in src.sections(j, d).basis() {
                let mut want = Vec::new();
                for (k, (fam, jx, _)) in pieces.iter().enumerate() {
                    let rm = src.restrict(j, jx, m, d);
                    let v = stalk_value(data, fam, jx, labels[k], &rm, d).ok_or_else(|| {
                        Error::CheckFailed(format!("no lift through the family over {}", names(&w, j)))
                    })?;
                    want.extend(tgt.ambient().project(&v, d, &pieces[k].2));
                }
                let c = solve(p, &tb, &want)
                    .ok_or_else(|| Error::CheckFailed(format!("inconsistent stalk data over {}", names(&w, j))))?;
                imgs.push(crate::polyalg::combine(p, tsec.ambient_dim(), &c, tsec.basis()));
            }
            if !tsec.kernel(tb.first().map_or(0, Vec::len), |t| readout(t)).is_zero() {
                return Err(Error::CheckFailed(format!("target fails the support condition over {}", names(&w, j))));
            }
            maps.insert((key(j), d), imgs);
        }
    }
    Ok(Morphism { source: src.clone(), target: tgt.clone(), upto, maps, opens: opens.to_vec() })
}

/// Multiplication by `delta_x` from `sky(x)` shifted up by twice the number
/// of positive roots into the structure presheaf.
pub fn delta_inclusion(
    sky: &Presheaf,
    structure: &Presheaf,
    x: usize,
    opens: &[AlcoveSet],
    upto: i32,
) -> Result<Morphism> {
    let ring = structure.ambient().ring.clone();
    let dx = delta(&ring, x).comps[x].num.clone();
    let slay = sky.layout();
    let tlay = structure.layout();
    let n = structure.ambient().summands.len();
    Morphism::from_fn(sky, structure, opens, upto, |_, d, v| {
        let f = slay.from_vec(v, d).swap_remove(0);
        let mut tuple = vec![SPoly::zero(ring.p, ring.rank()); n];
        tuple[x] = f.mul(&dx);
        tlay.to_vec(&tuple, d).expect("homogeneous")
    })
}

/// Serializable constructor trees for the leaf and additive constructors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjectSpec {
    Skyscraper(String),
    Structure,
    Sum(Vec<ObjectSpec>),
    Shift(i32, Box<ObjectSpec>),
}

pub const OBJECT_VERSION: &str = "alcoves-object/1";

impl ObjectSpec {
    pub fn build(&self, window: &Arc<Window>) -> Result<Presheaf> {
        match self {
            ObjectSpec::Skyscraper(name) => {
                let wg = &window.rs.weyl;
                let x = (0..wg.order())
                    .find(|&w| wg.name(w) == *name)
                    .ok_or_else(|| Error::Precondition(format!("unknown Weyl group element {name}")))?;
                Presheaf::skyscraper(window, x)
            }
            ObjectSpec::Structure => Ok(Presheaf::structure(window)),
            ObjectSpec::Sum(parts) => {
                let built = parts.iter().map(|p| p.build(window)).collect::<Result<Vec<_>>>()?;
                Presheaf::sum(window, built)
            }
            ObjectSpec::Shift(l, inner) => inner.build(window)?.shift(*l),
        }
    }

    fn write_expr(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectSpec::Skyscraper(n) => write!(f, "sky({n})"),
            ObjectSpec::Structure => write!(f, "structure"),
            ObjectSpec::Sum(ps) => {
                write!(f, "sum(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    p.write_expr(f)?;
                }
                write!(f, ")")
            }
            ObjectSpec::Shift(l, p) => {
                write!(f, "shift({l},")?;
                p.write_expr(f)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for ObjectSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{OBJECT_VERSION} ")?;
        self.write_expr(f)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Precondition(format!("object syntax: {what} at offset {}", self.i))
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn word(&mut self) -> &str {
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'-') {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i]).unwrap_or("")
    }

    fn expr(&mut self) -> Result<ObjectSpec> {
        let head = self.word().to_string();
        match head.as_str() {
            "structure" => Ok(ObjectSpec::Structure),
            "sky" => {
                self.eat(b'(')?;
                let n = self.word().to_string();
                self.eat(b')')?;
                Ok(ObjectSpec::Skyscraper(n))
            }
            "sum" => {
                self.eat(b'(')?;
                let mut parts = Vec::new();
                if self.s.get(self.i) != Some(&b')') {
                    parts.push(self.expr()?);
                    while self.s.get(self.i) == Some(&b',') {
                        self.i += 1;
                        parts.push(self.expr()?);
                    }
                }
                self.eat(b')')?;
                Ok(ObjectSpec::Sum(parts))
            }
            "shift" => {
                self.eat(b'(')?;
                let l: i32 = self.word().parse().map_err(|_| self.err("expected an integer"))?;
                self.eat(b',')?;
                let inner = self.expr()?;
                self.eat(b')')?;
                Ok(ObjectSpec::Shift(l, Box::new(inner)))
            }
            _ => Err(self.err("unknown constructor")),
        }
    }
}

impl FromStr for ObjectSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<ObjectSpec> {
        let s = s.trim();
        let body = s
            .strip_prefix(OBJECT_VERSION)
            .ok_or_else(|| Error::Precondition(format!("object must start with {OBJECT_VERSION}")))?;
        let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { s: compact.as_bytes(), i: 0 };
        let e = p.expr()?;
        if p.i != compact.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basering::BaseRing;
    use crate::rootsys::{build_root_system, CartanType};
    use crate::structalg::z_image;

    fn window(ty: CartanType, generic: bool, radius: i64) -> Arc<Window> {
        let rs = Arc::new(build_root_system(ty));
        let ring = if generic { BaseRing::generic(rs, 5).unwrap() } else { BaseRing::structure(rs, 5).unwrap() };
        Arc::new(Window::s_closed(&ring, radius, 2, 0))
    }

    #[test]
    fn skyscraper_sections() {
        let w = window(CartanType::A1, false, 3);
        let sky = Presheaf::skyscraper(&w, 0).unwrap();
        assert!(sky.sections(&w.empty_set(), 0).is_zero());
        assert_eq!(sky.dims(&w.full_set(), 4), vec![1, 0, 1, 0, 1]);
        let opens = w.canonical_opens(&[0]);
        assert!(validate(&sky, &opens, 4).passed());
        assert!(is_sheaf(&sky, &opens, 4).passed());
    }

    #[test]
    fn structure_matches_z_image() {
        let w = window(CartanType::A1, false, 3);
        let st = Presheaf::structure(&w);
        for j in w.canonical_opens(&[]) {
            let labels: Vec<usize> = w.labels(&j).into_iter().collect();
            assert_eq!(st.dims(&j, 4), z_image(&w.ring, &labels, 4).dims());
        }
        assert_eq!(st.dims(&w.full_set(), 4), vec![1, 0, 2, 0, 2]);
        let opens = w.canonical_opens(&[]);
        assert!(validate(&st, &opens, 4).passed());
        assert!(is_sheaf(&st, &opens, 4).passed());
    }

    #[test]
    fn sum_and_shift_dims() {
        let w = window(CartanType::A1, false, 3);
        let sky = Presheaf::skyscraper(&w, 1).unwrap();
        let st = Presheaf::structure(&w);
        let sum = Presheaf::sum(&w, vec![sky.clone(), st.clone()]).unwrap();
        let full = w.full_set();
        let a = sky.dims(&full, 4);
        let b = st.dims(&full, 4);
        assert_eq!(sum.dims(&full, 4), a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>());
        assert_eq!(sky.shift(-2).unwrap().dims(&full, 4), vec![0, 0, 1, 0, 1]);
        assert!(sky.shift(2).is_err());
    }

    #[test]
    fn fault_injection_breaks_sheaf() {
        let w = window(CartanType::A1, false, 3);
        let st = Presheaf::structure(&w);
        let opens = w.canonical_opens(&[]);
        let generic = Arc::new(w.with_ring(&BaseRing::generic(w.rs.clone(), 5).unwrap()));
        let st_g = Presheaf::structure(&generic);
        let gopens = generic.canonical_opens(&[]);
        let j = gopens.iter().find(|j| !maximal_cover(&generic, j).is_empty()).unwrap().clone();
        let bad = st_g.faulty(&j);
        let rep = is_sheaf(&bad, &gopens, 2);
        assert!(!rep.passed());
        assert!(is_sheaf(&st, &opens, 2).passed());
    }

    #[test]
    fn plus_is_idempotent() {
        let w = window(CartanType::A1, false, 3);
        let opens = w.canonical_opens(&[0]);
        let sky = Presheaf::skyscraper(&w, 0).unwrap();
        let e = sky.epsilon(0).unwrap();
        let once = e.plus();
        let twice = once.plus();
        for j in &opens {
            assert_eq!(once.dims(j, 4), twice.dims(j, 4));
        }
        assert!(check_support_condition(&once, &opens, 4).passed());
    }

    #[test]
    fn delta_morphism_extends() {
        let w = window(CartanType::A1, false, 3);
        let sky = Presheaf::skyscraper(&w, 0).unwrap().shift(-2).unwrap();
        let st = Presheaf::structure(&w);
        let opens = w.canonical_opens(&[0]);
        let family: Vec<AlcoveSet> = opens.iter().filter(|j| w.is_s_invariant(j, 0).unwrap()).cloned().collect();
        let direct = delta_inclusion(&sky, &st, 0, &opens, 4).unwrap();
        assert!(direct.check_naturality().passed());
        let data = delta_inclusion(&sky, &st, 0, &family, 4).unwrap();
        let ext = extend_morphism(&data, &opens).unwrap();
        assert!(ext.same_matrices(&direct));
    }

    #[test]
    fn generic_decomposition_has_one_factor_per_label() {
        let w = window(CartanType::A1, true, 3);
        let st = Presheaf::structure(&w);
        assert_eq!(canonical_decomposition(&st).len(), 2);
        assert!(check_decomposition(&st, &w.canonical_opens(&[]), 4).passed());
        let ws = window(CartanType::A1, false, 3);
        assert_eq!(canonical_decomposition(&Presheaf::structure(&ws)).len(), 1);
    }

    #[test]
    fn twist_moves_skyscraper() {
        let w = window(CartanType::A1, true, 3);
        let opens = w.canonical_opens(&[0]);
        let sky_s = Presheaf::skyscraper(&w, 1).unwrap();
        let mut lambda = w.empty_set();
        for a in 0..w.len() {
            if w.label(a) == 0 {
                lambda.insert(a);
            }
        }
        let tw = sky_s.twist(0, &lambda, 4).unwrap();
        let sky = Presheaf::skyscraper(&w, 0).unwrap();
        for j in &opens {
            assert_eq!(tw.dims(j, 4), sky.dims(j, 4));
        }
        assert_eq!(tw.ambient().labels(), BTreeSet::from([0]));
    }

    #[test]
    fn object_roundtrip() {
        let spec: ObjectSpec = "alcoves-object/1 sum(sky(e), shift(-2, structure))".parse().unwrap();
        assert_eq!(spec.to_string(), "alcoves-object/1 sum(sky(e),shift(-2,structure))");
        assert_eq!(spec.to_string().parse::<ObjectSpec>().unwrap(), spec);
        assert!("sum(sky(e))".parse::<ObjectSpec>().is_err());
        let w = window(CartanType::A1, false, 3);
        assert_eq!(spec.build(&w).unwrap().ambient().summands.len(), 3);
    }
}
