use super::field::Fp;
use super::linalg::Subspace;
use super::poly::{monomial_count, monomial_index, monomials, SPoly};
use crate::error::{Error, Result};

/// Graded free S-module `sum_i S[-g_i]`: generator `i` sits in degree `g_i`.
///
/// The degree-`d` piece is coordinatized generator by generator, each block
/// listing the monomials of polynomial degree `(d - g_i)/2` in descending
/// lex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeLayout {
    p: u32,
    nvars: usize,
    gens: Vec<i32>,
}

impl FreeLayout {
    pub fn new(p: u32, nvars: usize, gens: Vec<i32>) -> Self {
        FreeLayout { p, nvars, gens }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[i32] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Polynomial degree carried by generator `i` in total degree `d`.
    pub fn poly_degree(&self, i: usize, d: i32) -> Option<u32> {
        let e = d - self.gens[i];
        (e >= 0 && e % 2 == 0).then_some((e / 2) as u32)
    }

    /// Start offset of each generator block in degree `d` and the block sizes.
    pub fn blocks(&self, d: i32) -> Vec<(usize, usize)> {
        let mut off = 0;
        self.gens
            .iter()
            .enumerate()
            .map(|(i, _)| {
                let len = self.poly_degree(i, d).map_or(0, |k| monomial_count(self.nvars, k));
                let b = (off, len);
                off += len;
                b
            })
            .collect()
    }

    pub fn piece_dim(&self, d: i32) -> usize {
        self.blocks(d).iter().map(|b| b.1).sum()
    }

    /// Coordinates of a tuple of polynomials in degree `d`.
    pub fn to_vec(&self, elem: &[SPoly], d: i32) -> Result<Vec<u32>> {
        let blocks = self.blocks(d);
        let mut v = vec![0; self.piece_dim(d)];
        for (i, f) in elem.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let k = self
                .poly_degree(i, d)
                .ok_or_else(|| Error::Inhomogeneous(format!("component {i} has no degree {d} piece")))?;
            for (e, &c) in f.terms() {
                if e.iter().sum::<u32>() != k {
                    return Err(Error::Inhomogeneous(format!("component {i}: {f}")));
                }
                v[blocks[i].0 + monomial_index(e)] = c;
            }
        }
        Ok(v)
    }

    pub fn from_vec(&self, v: &[u32], d: i32) -> Vec<SPoly> {
        let blocks = self.blocks(d);
        (0..self.gens.len())
            .map(|i| {
                let mut f = SPoly::zero(self.p, self.nvars);
                if let Some(k) = self.poly_degree(i, d) {
                    for (j, e) in monomials(self.nvars, k).into_iter().enumerate() {
                        let c = v[blocks[i].0 + j];
                        if c != 0 {
                            f.add_term(e, c);
                        }
                    }
                }
                f
            })
            .collect()
    }

    /// Multiply a degree-`d` vector by the linear forms `forms[i]` on
    /// generator block `i` (one form per generator); result lives in degree `d+2`.
    pub fn mul_linear_blockwise(&self, v: &[u32], d: i32, forms: &[Vec<u32>]) -> Vec<u32> {
        let f = Fp::new(self.p);
        let src = self.blocks(d);
        let dst = self.blocks(d + 2);
        let mut out = vec![0; self.piece_dim(d + 2)];
        for i in 0..self.gens.len() {
            let Some(k) = self.poly_degree(i, d) else { continue };
            if src[i].1 == 0 {
                continue;
            }
            for (j, mut e) in monomials(self.nvars, k).into_iter().enumerate() {
                let c = v[src[i].0 + j];
                if c == 0 {
                    continue;
                }
                for (var, &a) in forms[i].iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    e[var] += 1;
                    let idx = dst[i].0 + monomial_index(&e);
                    out[idx] = f.add(out[idx], f.mul(a, c));
                    e[var] -= 1;
                }
            }
        }
        out
    }

    /// Multiply every block by the same linear form.
    pub fn mul_linear(&self, v: &[u32], d: i32, form: &[u32]) -> Vec<u32> {
        let forms = vec![form.to_vec(); self.gens.len()];
        self.mul_linear_blockwise(v, d, &forms)
    }

    /// Multiply block `i` by the polynomial `polys[i]`; all share degree `e`.
    pub fn mul_blockwise(&self, v: &[u32], d: i32, polys: &[SPoly], e: i32) -> Vec<u32> {
        let elem = self.from_vec(v, d);
        let prod: Vec<SPoly> = elem.iter().zip(polys).map(|(a, b)| a.mul(b)).collect();
        self.to_vec(&prod, d + e).expect("homogeneous product")
    }
}

/// Per-degree bases of a graded subobject of a free layout, degrees `0..=top`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    pub layout: FreeLayout,
    pub pieces: Vec<Subspace>,
}

impl GradedBasis {
    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(Subspace::dim).collect()
    }

    /// Dimensions in even degrees only, which is where everything lives when
    /// all generators sit in even degrees.
    pub fn even_dims(&self) -> Vec<usize> {
        self.pieces.iter().step_by(2).map(Subspace::dim).collect()
    }

    pub fn top(&self) -> i32 {
        self.pieces.len() as i32 - 1
    }
}

/// What `graded_solve` should compute.
#[derive(Clone, Debug)]
pub enum Relation {
    /// S-span of the given homogeneous tuples.
    Span(Vec<Vec<SPoly>>),
    /// Kernel of `v -> M v`, with `matrix[row][col]` homogeneous of degree
    /// `target.gens[row] - source.gens[col]`.
    KernelOfMap { target: FreeLayout, matrix: Vec<Vec<SPoly>> },
    /// Tuples with `z_i - z_j` in the ideal of the linear form, per triple.
    Congruence(Vec<(usize, usize, SPoly)>),
}

fn tuple_degree(layout: &FreeLayout, g: &[SPoly]) -> Result<Option<i32>> {
    let mut deg = None;
    for (i, f) in g.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let fd = f.degree().ok_or_else(|| Error::Inhomogeneous(f.to_string()))? as i32;
        let d = fd + layout.gens[i];
        match deg {
            None => deg = Some(d),
            Some(x) if x != d => return Err(Error::Inhomogeneous(format!("tuple mixes degrees {x} and {d}"))),
            _ => {}
        }
    }
    Ok(deg)
}

/// Exact per-degree basis, degrees `0..=top`, of the requested graded space.
pub fn graded_solve(layout: &FreeLayout, rel: &Relation, top: i32) -> Result<GradedBasis> {
    let p = layout.p;
    let n = layout.nvars;
    let mut pieces = Vec::new();
    match rel {
        Relation::Span(gens) => {
            let degs: Vec<Option<i32>> = gens.iter().map(|g| tuple_degree(layout, g)).collect::<Result<_>>()?;
            for d in 0..=top {
                let mut s = Subspace::zero(p, layout.piece_dim(d));
                for (g, gd) in gens.iter().zip(&degs) {
                    let Some(gd) = *gd else { continue };
                    let e = d - gd;
                    if e < 0 || e % 2 != 0 {
                        continue;
                    }
                    for m in monomials(n, (e / 2) as u32) {
                        let mono = SPoly::monomial(p, m, 1);
                        let t: Vec<SPoly> = g.iter().map(|f| f.mul(&mono)).collect();
                        s.insert(&layout.to_vec(&t, d)?);
                    }
                }
                pieces.push(s);
            }
        }
        Relation::KernelOfMap { target, matrix } => {
            for row in matrix {
                for f in row {
                    if !f.is_homogeneous() {
                        return Err(Error::Inhomogeneous(f.to_string()));
                    }
                }
            }
            for d in 0..=top {
                let full = Subspace::full(p, layout.piece_dim(d));
                let ker = full.kernel(target.piece_dim(d), |v| {
                    let src = layout.from_vec(v, d);
                    let img: Vec<SPoly> = matrix
                        .iter()
                        .map(|row| row.iter().zip(&src).fold(SPoly::zero(p, n), |acc, (a, b)| acc.add(&a.mul(b))))
                        .collect();
                    target.to_vec(&img, d).expect("matrix degrees match layouts")
                });
                pieces.push(ker);
            }
        }
        Relation::Congruence(edges) => {
            for (_, _, l) in edges {
                if l.degree() != Some(2) {
                    return Err(Error::Inhomogeneous(format!("congruence modulus {l}")));
                }
            }
            for d in 0..=top {
                let full = Subspace::full(p, layout.piece_dim(d));
                let width = monomial_count(n, (d.max(0) / 2) as u32);
                let ker = full.kernel(edges.len() * width, |v| {
                    let z = layout.from_vec(v, d);
                    let mut out = Vec::with_capacity(edges.len() * width);
                    for (i, j, l) in edges {
                        let r = z[*i].sub(&z[*j]).reduce_mod_linear(l);
                        let mut block = vec![0; width];
                        for (e, &c) in r.terms() {
                            block[monomial_index(e)] = c;
                        }
                        out.extend(block);
                    }
                    out
                });
                pieces.push(ker);
            }
        }
    }
    Ok(GradedBasis { layout: layout.clone(), pieces })
}

/// Saturation with respect to the inverted coroots, bounded by `steps`
/// rounds: each round adds `{v : beta v in N}` for every form `beta`.
///
/// `pieces[d]` is the degree-`d` piece of `N`; pieces near the top of the
/// range see fewer rounds, so callers keep `2 * steps` degrees of headroom.
pub fn saturate(layout: &FreeLayout, pieces: &[Subspace], forms: &[Vec<u32>], steps: usize) -> Vec<Subspace> {
    saturate_from(layout, 0, pieces, forms, steps)
}

/// As [`saturate`], with `pieces[i]` the piece in degree `start + i`.
pub fn saturate_from(
    layout: &FreeLayout,
    start: i32,
    pieces: &[Subspace],
    forms: &[Vec<u32>],
    steps: usize,
) -> Vec<Subspace> {
    let mut cur = pieces.to_vec();
    if forms.is_empty() {
        return cur;
    }
    let top = cur.len() as i32 - 1;
    for _ in 0..steps {
        let mut next = cur.clone();
        let mut grew = false;
        for i in 0..=(top - 2) {
            let d = start + i;
            let upper = &cur[(i + 2) as usize];
            let full = Subspace::full(layout.p(), layout.piece_dim(d));
            for form in forms {
                let colon = full.preimage(upper, |v| layout.mul_linear(v, d, form));
                if !colon.is_subspace_of(&next[i as usize]) {
                    next[i as usize] = next[i as usize].sum(&colon);
                    grew = true;
                }
            }
        }
        cur = next;
        if !grew {
            break;
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> (FreeLayout, SPoly) {
        (FreeLayout::new(5, 1, vec![0, 0]), SPoly::var(5, 1, 0))
    }

    #[test]
    fn span_of_diagonal() {
        let (l, _) = a1();
        let one = SPoly::one(5, 1);
        let b = graded_solve(&l, &Relation::Span(vec![vec![one.clone(), one]]), 0).unwrap();
        assert_eq!(b.dims(), vec![1]);
    }

    #[test]
    fn congruence_pair_a1() {
        let (l, h) = a1();
        let b = graded_solve(&l, &Relation::Congruence(vec![(0, 1, h)]), 2).unwrap();
        assert_eq!(b.even_dims(), vec![1, 2]);
    }

    #[test]
    fn inhomogeneous_span_rejected() {
        let (l, h) = a1();
        let bad = h.add(&SPoly::one(5, 1));
        let r = graded_solve(&l, &Relation::Span(vec![vec![bad, SPoly::zero(5, 1)]]), 2);
        assert!(matches!(r, Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn saturation_recovers_unit_multiple() {
        // span{(h, h)} saturated at h is span{(1, 1)}
        let (l, h) = a1();
        let span = graded_solve(&l, &Relation::Span(vec![vec![h.clone(), h]]), 6).unwrap();
        assert_eq!(span.dims()[0], 0);
        let sat = saturate(&l, &span.pieces, &[vec![1]], 3);
        assert_eq!(sat[0].dim(), 1);
        assert_eq!(sat[2].dim(), 1);
    }

    #[test]
    fn roundtrip_coordinates() {
        let l = FreeLayout::new(7, 2, vec![0, 2]);
        let x = SPoly::var(7, 2, 0);
        let y = SPoly::var(7, 2, 1);
        let elem = vec![x.mul(&y), y.clone()];
        let v = l.to_vec(&elem, 4).unwrap();
        assert_eq!(l.from_vec(&v, 4), elem);
        let w = l.mul_linear(&v, 4, &[1, 0]);
        assert_eq!(l.from_vec(&w, 6), vec![x.mul(&x).mul(&y), x.mul(&y)]);
    }
}
