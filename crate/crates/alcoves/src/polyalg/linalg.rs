use super::field::Fp;

/// A subspace of F_p^n held as a reduced row echelon basis.
///
/// The basis is canonical, so two subspaces are equal exactly when their
/// `Subspace` values are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: u32,
    n: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, n: usize) -> Self {
        Subspace { p, n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: u32, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        Subspace { p, n, rows, pivots: (0..n).collect() }
    }

    pub fn from_vectors<I, V>(p: u32, n: usize, vecs: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u32]>,
    {
        let mut s = Subspace::zero(p, n);
        for v in vecs {
            s.insert(v.as_ref());
        }
        s
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn field(&self) -> Fp {
        Fp::new(self.p)
    }

    /// Residual of `v` after clearing every pivot column.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                axpy(f, &mut v, f.neg(c), row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.n, "vector length does not match ambient");
        let f = self.field();
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(r[pc]);
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                axpy(f, row, f.neg(c), &r);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < pc);
        self.rows.insert(pos, r);
        self.pivots.insert(pos, pc);
        true
    }

    pub fn is_subspace_of(&self, o: &Subspace) -> bool {
        self.rows.iter().all(|r| o.contains(r))
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &o.rows {
            s.insert(r);
        }
        s
    }

    pub fn intersect(&self, o: &Subspace) -> Subspace {
        // combinations of our basis that land in `o`
        let coeffs = kernel_mod(self.p, &self.rows, o);
        Subspace::from_vectors(self.p, self.n, coeffs.iter().map(|c| combine(self.p, self.n, c, &self.rows)))
    }

    /// Span of the images of the basis under `f`, inside F_p^m.
    pub fn image<F>(&self, m: usize, f: F) -> Subspace
    where
        F: Fn(&[u32]) -> Vec<u32>,
    {
        Subspace::from_vectors(self.p, m, self.rows.iter().map(|r| f(r)))
    }

    /// `{v in self : f(v) in target}`.
    pub fn preimage<F>(&self, target: &Subspace, f: F) -> Subspace
    where
        F: Fn(&[u32]) -> Vec<u32>,
    {
        let imgs: Vec<Vec<u32>> = self.rows.iter().map(|r| f(r)).collect();
        let coeffs = kernel_mod(self.p, &imgs, target);
        Subspace::from_vectors(self.p, self.n, coeffs.iter().map(|c| combine(self.p, self.n, c, &self.rows)))
    }

    /// `{v in self : f(v) = 0}`.
    pub fn kernel<F>(&self, m: usize, f: F) -> Subspace
    where
        F: Fn(&[u32]) -> Vec<u32>,
    {
        self.preimage(&Subspace::zero(self.p, m), f)
    }

    /// Coordinates of `v` with respect to `basis()`, if `v` lies in the span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    /// Linear combination of the basis with the given coefficients.
    pub fn combine(&self, c: &[u32]) -> Vec<u32> {
        combine(self.p, self.n, c, &self.rows)
    }

    /// Projection onto the coordinates with `keep[i]`; others are zeroed.
    pub fn project(&self, keep: &[bool]) -> Subspace {
        self.image(self.n, |v| mask_vec(v, keep))
    }
}

pub fn mask_vec(v: &[u32], keep: &[bool]) -> Vec<u32> {
    v.iter().zip(keep).map(|(&x, &k)| if k { x } else { 0 }).collect()
}

pub fn axpy(f: Fp, y: &mut [u32], a: u32, x: &[u32]) {
    if a == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = f.add(*yi, f.mul(a, xi));
        }
    }
}

pub fn combine(p: u32, n: usize, c: &[u32], rows: &[Vec<u32>]) -> Vec<u32> {
    let f = Fp::new(p);
    let mut v = vec![0; n];
    for (ci, r) in c.iter().zip(rows) {
        axpy(f, &mut v, *ci, r);
    }
    v
}

/// Coefficient vectors `c` with `sum c_i vecs_i` in `target`, as a basis.
pub fn kernel_mod(p: u32, vecs: &[Vec<u32>], target: &Subspace) -> Vec<Vec<u32>> {
    let k = vecs.len();
    let f = Fp::new(p);
    // eliminate on [residual | identity]
    let reduced: Vec<Vec<u32>> = vecs.iter().map(|v| target.reduce(v)).collect();
    let m = reduced.first().map_or(0, |v| v.len());
    let mut rows: Vec<(Vec<u32>, Vec<u32>)> = reduced
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let mut e = vec![0; k];
            e[i] = 1;
            (v, e)
        })
        .collect();
    let mut done = 0;
    for col in 0..m {
        let Some(piv) = (done..rows.len()).find(|&i| rows[i].0[col] != 0) else {
            continue;
        };
        rows.swap(done, piv);
        let inv = f.inv(rows[done].0[col]);
        let (pv, pe) = rows[done].clone();
        for i in 0..rows.len() {
            if i == done {
                continue;
            }
            let c = rows[i].0[col];
            if c != 0 {
                let a = f.neg(f.mul(c, inv));
                axpy(f, &mut rows[i].0, a, &pv);
                axpy(f, &mut rows[i].1, a, &pe);
            }
        }
        done += 1;
    }
    let out = Subspace::from_vectors(p, k, rows[done..].iter().map(|(_, e)| e.clone()));
    out.basis().to_vec()
}

/// Some `c` with `sum c_i vecs_i = target`, if one exists.
pub fn solve(p: u32, vecs: &[Vec<u32>], target: &[u32]) -> Option<Vec<u32>> {
    let f = Fp::new(p);
    let mut all = vecs.to_vec();
    all.push(target.to_vec());
    let z = Subspace::zero(p, target.len());
    let ker = kernel_mod(p, &all, &z);
    let k = vecs.len();
    let sol = ker.iter().find(|c| c[k] != 0)?;
    let scale = f.neg(f.inv(sol[k]));
    Some(sol[..k].iter().map(|&x| f.mul(x, scale)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_is_canonical() {
        let a = Subspace::from_vectors(5, 3, [[1, 2, 0], [0, 1, 1]]);
        let b = Subspace::from_vectors(5, 3, [[1, 3, 1], [2, 4, 0]]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::from_vectors(5, 3, [[1, 0, 0], [0, 1, 0]]);
        let b = Subspace::from_vectors(5, 3, [[0, 1, 0], [0, 0, 1]]);
        let i = a.intersect(&b);
        assert_eq!(i, Subspace::from_vectors(5, 3, [[0, 1, 0]]));
    }

    #[test]
    fn solve_finds_combination() {
        let vs = vec![vec![1, 0, 1], vec![0, 1, 1]];
        let c = solve(7, &vs, &[2, 3, 5]).unwrap();
        assert_eq!(combine(7, 3, &c, &vs), vec![2, 3, 5]);
        assert!(solve(7, &vs, &[0, 0, 1]).is_none());
    }
}
