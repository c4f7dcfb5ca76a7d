use std::fmt;

use super::poly::SPoly;
use crate::error::{Error, Result};

/// Localization `S[beta^vee^-1 : beta in U]` described by the coroots of
/// the positive roots and a mask of which ones are inverted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocRing {
    p: u32,
    nvars: usize,
    coroots: Vec<SPoly>,
    inverted: Vec<bool>,
}

/// Fraction `num / prod(coroot[i] for i in den)`; `den` is sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocElem {
    pub num: SPoly,
    pub den: Vec<usize>,
}

impl LocElem {
    pub fn from_poly(f: SPoly) -> Self {
        LocElem { num: f, den: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Degree in the doubled grading; `None` for zero or inhomogeneous.
    pub fn degree(&self) -> Option<i64> {
        self.num.degree().map(|d| i64::from(d) - 2 * self.den.len() as i64)
    }
}

impl LocRing {
    pub fn new(p: u32, nvars: usize, coroots: Vec<SPoly>, inverted: Vec<bool>) -> Self {
        assert_eq!(coroots.len(), inverted.len());
        LocRing { p, nvars, coroots, inverted }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coroot(&self, i: usize) -> &SPoly {
        &self.coroots[i]
    }

    pub fn is_inverted(&self, i: usize) -> bool {
        self.inverted[i]
    }

    pub fn zero(&self) -> LocElem {
        LocElem::from_poly(SPoly::zero(self.p, self.nvars))
    }

    pub fn one(&self) -> LocElem {
        LocElem::from_poly(SPoly::one(self.p, self.nvars))
    }

    /// `1 / coroot[i]`; only legal for inverted coroots.
    pub fn inverse_coroot(&self, i: usize) -> Result<LocElem> {
        if !self.inverted[i] {
            return Err(Error::Precondition(format!("coroot {i} is not inverted")));
        }
        Ok(LocElem { num: SPoly::one(self.p, self.nvars), den: vec![i] })
    }

    fn den_product(&self, den: &[usize]) -> SPoly {
        den.iter().fold(SPoly::one(self.p, self.nvars), |acc, &i| acc.mul(&self.coroots[i]))
    }

    /// Cancels every denominator coroot that divides the numerator.
    pub fn canonical(&self, mut e: LocElem) -> LocElem {
        if e.num.is_zero() {
            e.den.clear();
            return e;
        }
        e.den.sort_unstable();
        let mut kept = Vec::with_capacity(e.den.len());
        for &i in &e.den {
            match e.num.div_exact(&self.coroots[i]) {
                Some(q) => e.num = q,
                None => kept.push(i),
            }
        }
        e.den = kept;
        e
    }

    /// Rewrite both operands over the multiset union of their denominators.
    fn common(&self, a: &LocElem, b: &LocElem) -> (SPoly, SPoly, Vec<usize>) {
        let mut den = Vec::new();
        let (mut i, mut j) = (0, 0);
        let mut extra_a = Vec::new();
        let mut extra_b = Vec::new();
        while i < a.den.len() || j < b.den.len() {
            match (a.den.get(i), b.den.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    den.push(x);
                    i += 1;
                    j += 1;
                }
                (Some(&x), Some(&y)) if x < y => {
                    den.push(x);
                    extra_b.push(x);
                    i += 1;
                }
                (Some(&x), None) => {
                    den.push(x);
                    extra_b.push(x);
                    i += 1;
                }
                (_, Some(&y)) => {
                    den.push(y);
                    extra_a.push(y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        let na = a.num.mul(&self.den_product(&extra_a));
        let nb = b.num.mul(&self.den_product(&extra_b));
        (na, nb, den)
    }

    pub fn add(&self, a: &LocElem, b: &LocElem) -> LocElem {
        let (na, nb, den) = self.common(a, b);
        self.canonical(LocElem { num: na.add(&nb), den })
    }

    pub fn sub(&self, a: &LocElem, b: &LocElem) -> LocElem {
        let (na, nb, den) = self.common(a, b);
        self.canonical(LocElem { num: na.sub(&nb), den })
    }

    pub fn mul(&self, a: &LocElem, b: &LocElem) -> LocElem {
        let mut den = a.den.clone();
        den.extend_from_slice(&b.den);
        self.canonical(LocElem { num: a.num.mul(&b.num), den })
    }

    pub fn scale(&self, a: &LocElem, c: u32) -> LocElem {
        self.canonical(LocElem { num: a.num.scale(c), den: a.den.clone() })
    }

    /// `q` with `q * c = f`, or `Ok(None)` when `c` does not divide `f` in
    /// the localization.
    pub fn exact_divide(&self, f: &LocElem, c: &LocElem) -> Result<Option<LocElem>> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut cn = c.num.clone();
        let mut den = f.den.clone();
        // factors of c that are units of the localization move to the denominator
        for i in 0..self.coroots.len() {
            if !self.inverted[i] {
                continue;
            }
            while let Some(q) = cn.div_exact(&self.coroots[i]) {
                if q.is_zero() {
                    break;
                }
                cn = q;
                den.push(i);
            }
        }
        let num = f.num.mul(&self.den_product(&c.den));
        Ok(num.div_exact(&cn).map(|q| self.canonical(LocElem { num: q, den })))
    }

    /// Remainder of the numerator modulo `coroot[a]`.
    pub fn reduce_mod_coroot(&self, f: &LocElem, a: usize) -> Result<SPoly> {
        if f.den.contains(&a) {
            return Err(Error::CorootInDenominator);
        }
        Ok(f.num.reduce_mod_linear(&self.coroots[a]))
    }

    /// Whether `f - g` lies in `coroot[a] * T`; denominators must avoid `a`.
    pub fn congruent_mod_coroot(&self, f: &LocElem, g: &LocElem, a: usize) -> Result<bool> {
        if f.den.contains(&a) || g.den.contains(&a) {
            return Err(Error::CorootInDenominator);
        }
        let (nf, ng, _) = self.common(f, g);
        Ok(nf.sub(&ng).reduce_mod_linear(&self.coroots[a]).is_zero())
    }

    pub fn render(&self, e: &LocElem, names: &[String]) -> String {
        if e.den.is_empty() {
            return e.num.to_string();
        }
        let den: Vec<String> = e.den.iter().map(|&i| format!("c({})", names[i])).collect();
        format!("({}) / ({})", e.num, den.join("*"))
    }
}

impl fmt::Display for LocElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            write!(f, "{}", self.num)
        } else {
            let den: Vec<String> = self.den.iter().map(|i| format!("c{}", i + 1)).collect();
            write!(f, "({}) / ({})", self.num, den.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2(inverted: Vec<bool>) -> LocRing {
        let x = SPoly::var(5, 2, 0);
        let y = SPoly::var(5, 2, 1);
        LocRing::new(5, 2, vec![x.clone(), y.clone(), x.add(&y)], inverted)
    }

    #[test]
    fn divide_examples() {
        let r = a2(vec![false; 3]);
        let a = LocElem::from_poly(r.coroot(0).clone());
        let b = LocElem::from_poly(r.coroot(1).clone());
        let ab = r.mul(&a, &b);
        assert_eq!(r.exact_divide(&ab, &a).unwrap(), Some(b.clone()));
        let sum = r.add(&a, &b);
        assert_eq!(r.exact_divide(&sum, &a).unwrap(), None);
        assert_eq!(r.exact_divide(&a, &r.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn inverse_over_inverse_is_one() {
        let r = a2(vec![true, false, false]);
        let inv = r.inverse_coroot(0).unwrap();
        assert_eq!(r.exact_divide(&inv, &inv).unwrap(), Some(r.one()));
        assert!(r.inverse_coroot(1).is_err());
    }

    #[test]
    fn addition_cancels_denominators() {
        let r = a2(vec![true, true, false]);
        let a = r.inverse_coroot(0).unwrap();
        let b = r.inverse_coroot(1).unwrap();
        // 1/x + 1/y = (x+y)/(xy)
        let s = r.add(&a, &b);
        assert_eq!(s.den, vec![0, 1]);
        assert_eq!(s.num, r.coroot(2).clone());
        assert_eq!(s.degree(), Some(-2));
    }

    #[test]
    fn reduction_rejects_coroot_denominator() {
        let r = a2(vec![true, false, false]);
        let a = r.inverse_coroot(0).unwrap();
        assert_eq!(r.reduce_mod_coroot(&a, 0), Err(Error::CorootInDenominator));
        assert!(r.congruent_mod_coroot(&a, &a, 1).unwrap());
    }
}
