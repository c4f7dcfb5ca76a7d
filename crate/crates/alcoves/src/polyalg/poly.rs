use std::collections::BTreeMap;
use std::fmt;

use super::field::Fp;

/// Sparse polynomial over F_p in the simple-coroot variables `h1..hr`.
///
/// Each variable has degree 2, so a monomial with exponent vector `e` has
/// degree `2 * sum(e)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SPoly {
    p: u32,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, u32>,
}

impl SPoly {
    pub fn zero(p: u32, nvars: usize) -> Self {
        SPoly { p, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(p: u32, nvars: usize, c: i64) -> Self {
        let mut f = SPoly::zero(p, nvars);
        f.add_term(vec![0; nvars], Fp::new(p).from_i64(c));
        f
    }

    pub fn one(p: u32, nvars: usize) -> Self {
        SPoly::constant(p, nvars, 1)
    }

    pub fn var(p: u32, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        SPoly::monomial(p, e, 1)
    }

    pub fn monomial(p: u32, exps: Vec<u32>, c: u32) -> Self {
        let nvars = exps.len();
        let mut f = SPoly::zero(p, nvars);
        f.add_term(exps, c % p);
        f
    }

    /// Linear form `sum coeffs[i] * h_i`.
    pub fn linear(p: u32, coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        let mut f = SPoly::zero(p, n);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            f.add_term(e, Fp::new(p).from_i64(c));
        }
        f
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Fp {
        Fp::new(self.p)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &u32)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> u32 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: u32) {
        if c == 0 {
            return;
        }
        let f = self.field();
        let v = f.add(self.coeff(&e), c);
        if v == 0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    /// Degree in the doubled grading, `None` for zero or inhomogeneous input.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| 2 * e.iter().sum::<u32>());
        let d = it.next()?;
        if it.all(|x| x == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn add(&self, o: &SPoly) -> SPoly {
        let mut r = self.clone();
        for (e, &c) in &o.terms {
            r.add_term(e.clone(), c);
        }
        r
    }

    pub fn neg(&self) -> SPoly {
        let f = self.field();
        SPoly { p: self.p, nvars: self.nvars, terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.neg(c))).collect() }
    }

    pub fn sub(&self, o: &SPoly) -> SPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: u32) -> SPoly {
        let f = self.field();
        let c = c % self.p;
        if c == 0 {
            return SPoly::zero(self.p, self.nvars);
        }
        SPoly {
            p: self.p,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &x)| (e.clone(), f.mul(x, c))).collect(),
        }
    }

    pub fn mul(&self, o: &SPoly) -> SPoly {
        let f = self.field();
        let mut r = SPoly::zero(self.p, self.nvars);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, f.mul(c1, c2));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> SPoly {
        let mut r = SPoly::one(self.p, self.nvars);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Lex-largest term.
    pub fn leading(&self) -> Option<(&Vec<u32>, u32)> {
        self.terms.iter().next_back().map(|(e, &c)| (e, c))
    }

    /// Exact quotient `self / c`, or `None` when `c` does not divide `self`.
    pub fn div_exact(&self, c: &SPoly) -> Option<SPoly> {
        let (lc_e, lc_c) = c.leading()?;
        let lc_e = lc_e.clone();
        let f = self.field();
        let lc_inv = f.inv(lc_c);
        let mut rem = self.clone();
        let mut q = SPoly::zero(self.p, self.nvars);
        while let Some((e, a)) = rem.leading() {
            if e.iter().zip(&lc_e).any(|(x, y)| x < y) {
                return None;
            }
            let qe: Vec<u32> = e.iter().zip(&lc_e).map(|(x, y)| x - y).collect();
            let t = SPoly::monomial(self.p, qe, f.mul(a, lc_inv));
            rem = rem.sub(&t.mul(c));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Remainder modulo the linear form `l`, computed by eliminating the
    /// lowest-index variable that occurs in `l`.
    pub fn reduce_mod_linear(&self, l: &SPoly) -> SPoly {
        let f = self.field();
        let mut lin = vec![0u32; self.nvars];
        for (e, &c) in &l.terms {
            let i = e.iter().position(|&x| x == 1).expect("linear form");
            lin[i] = c;
        }
        let Some(i) = lin.iter().position(|&c| c != 0) else {
            return self.clone();
        };
        let scale = f.neg(f.inv(lin[i]));
        let mut sub = SPoly::zero(self.p, self.nvars);
        for (j, &c) in lin.iter().enumerate() {
            if j != i && c != 0 {
                let mut e = vec![0; self.nvars];
                e[j] = 1;
                sub.add_term(e, f.mul(c, scale));
            }
        }
        let mut out = SPoly::zero(self.p, self.nvars);
        let mut powers: Vec<SPoly> = vec![SPoly::one(self.p, self.nvars)];
        for (e, &c) in &self.terms {
            let k = e[i] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap().mul(&sub);
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[i] = 0;
            let t = SPoly::monomial(self.p, rest, c).mul(&powers[k]);
            out = out.add(&t);
        }
        out
    }

    /// Substitute the variables by the given linear forms.
    pub fn substitute_linear(&self, images: &[SPoly]) -> SPoly {
        let mut out = SPoly::zero(self.p, images.first().map_or(self.nvars, |g| g.nvars));
        for (e, &c) in &self.terms {
            let mut t = SPoly::constant(self.p, out.nvars, i64::from(c));
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&images[i].pow(k));
                }
            }
            out = out.add(&t);
        }
        out
    }
}

impl fmt::Display for SPoly {
    /// Terms in descending lex order, e.g. `2*h1^2 + h1*h2 - h2^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let fp = self.field();
        let mut first = true;
        for (e, &c) in self.terms.iter().rev() {
            let sc = fp.signed(c);
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("h{}", i + 1) } else { format!("h{}^{}", i + 1, k) })
                .collect();
            let (neg, mag) = if sc < 0 { (true, -sc) } else { (false, sc) };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Number of monomials of polynomial degree `k` in `n` variables.
pub fn monomial_count(n: usize, k: u32) -> usize {
    if n == 0 {
        return usize::from(k == 0);
    }
    binom(k as usize + n - 1, n - 1)
}

/// Monomials of polynomial degree `k`, in descending lex order.
pub fn monomials(n: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(monomial_count(n, k));
    let mut cur = vec![0; n];
    fill(n, k, 0, &mut cur, &mut out);
    out
}

fn fill(n: usize, k: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if i == n - 1 {
        cur[i] = k;
        out.push(cur.clone());
        return;
    }
    for e in (0..=k).rev() {
        cur[i] = e;
        fill(n, k - e, i + 1, cur, out);
    }
}

/// Position of `e` in `monomials(e.len(), sum(e))`.
pub fn monomial_index(e: &[u32]) -> usize {
    let n = e.len();
    let mut k: u32 = e.iter().sum();
    let mut idx = 0;
    for i in 0..n.saturating_sub(1) {
        // monomials with a larger exponent at position i come first
        for bigger in (e[i] + 1)..=k {
            idx += monomial_count(n - i - 1, k - bigger);
        }
        k -= e[i];
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_ranking_matches_enumeration() {
        for n in 1..=3 {
            for k in 0..6 {
                let ms = monomials(n, k);
                assert_eq!(ms.len(), monomial_count(n, k));
                for (i, m) in ms.iter().enumerate() {
                    assert_eq!(monomial_index(m), i);
                }
            }
        }
    }

    #[test]
    fn division_examples() {
        let x = SPoly::var(5, 2, 0);
        let y = SPoly::var(5, 2, 1);
        assert_eq!(x.mul(&y).div_exact(&x), Some(y.clone()));
        assert_eq!(x.add(&y).div_exact(&x), None);
    }

    #[test]
    fn reduce_sum_coroot() {
        // h1*h2 mod (h1 + h2) agrees with -h2^2 mod (h1 + h2)
        let x = SPoly::var(5, 2, 0);
        let y = SPoly::var(5, 2, 1);
        let l = x.add(&y);
        let a = x.mul(&y).reduce_mod_linear(&l);
        let b = y.mul(&y).neg().reduce_mod_linear(&l);
        assert_eq!(a, b);
        assert_eq!(l.reduce_mod_linear(&l), SPoly::zero(5, 2));
    }

    #[test]
    fn render_is_sorted() {
        let x = SPoly::var(5, 2, 0);
        let y = SPoly::var(5, 2, 1);
        let f = y.mul(&y).sub(&x.mul(&y)).add(&x.mul(&x).scale(2));
        assert_eq!(f.to_string(), "2*h1^2 - h1*h2 + h2^2");
    }
}
