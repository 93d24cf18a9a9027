//! Dense linear algebra and univariate polynomial arithmetic over a prime
//! field F_p, sized for blocks of a few hundred: row echelon subspaces,
//! nullspaces, minimal polynomials, and Cantor-Zassenhaus factorization.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpMat {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<u64>,
}

impl FpMat {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        FpMat { p, rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.a[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut a = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            a.extend(row.into_iter().map(|x| x % p));
        }
        FpMat { p, rows: r, cols: c, a }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.a[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &FpMat) -> FpMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        FpMat {
            p,
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().zip(&other.a).map(|(&x, &y)| (x + y) % p).collect(),
        }
    }

    pub fn sub(&self, other: &FpMat) -> FpMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        FpMat {
            p,
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().zip(&other.a).map(|(&x, &y)| (x + p - y) % p).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> FpMat {
        let p = self.p;
        let c = c % p;
        FpMat {
            p,
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().map(|&x| x * c % p).collect(),
        }
    }

    pub fn mul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.cols, other.rows);
        let p = self.p;
        let mut out = FpMat::zero(p, self.rows, other.cols);
        // accumulate in u128-free fashion: p < 2^31 keeps u64 sums safe in chunks
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.at(i, k);
                if aik == 0 {
                    continue;
                }
                let base = k * other.cols;
                let obase = i * other.cols;
                for j in 0..other.cols {
                    out.a[obase + j] = (out.a[obase + j] + aik * other.a[base + j]) % p;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let p = self.p;
        (0..self.rows)
            .map(|i| {
                let mut acc: u64 = 0;
                for j in 0..self.cols {
                    acc = (acc + self.at(i, j) * v[j]) % p;
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> FpMat {
        let mut out = FpMat::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.a[j * self.rows + i] = self.at(i, j);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut sub = Subspace::new(self.p, self.cols);
        for i in 0..self.rows {
            sub.insert(self.row(i).to_vec());
        }
        sub.rank()
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let n = self.cols;
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            let Some(r) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, r);
            let inv = inv_mod(rows[rank][col], p);
            for x in rows[rank].iter_mut() {
                *x = *x * inv % p;
            }
            let pivot_row = rows[rank].clone();
            for (r2, row) in rows.iter_mut().enumerate() {
                if r2 != rank && row[col] != 0 {
                    let c = row[col];
                    for j in 0..n {
                        row[j] = (row[j] + (p - c) * pivot_row[j]) % p;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        let mut basis = Vec::new();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        for free in 0..n {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; n];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - rows[r][free] % p) % p;
            }
            basis.push(v);
        }
        basis
    }

    /// Evaluate a polynomial at the matrix by Horner's rule.
    pub fn poly_eval(&self, poly: &[u64]) -> FpMat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut acc = FpMat::zero(self.p, n, n);
        for &c in poly.iter().rev() {
            acc = acc.mul(self);
            if c != 0 {
                for i in 0..n {
                    acc.a[i * n + i] = (acc.a[i * n + i] + c) % self.p;
                }
            }
        }
        acc
    }

    pub fn trace(&self) -> u64 {
        (0..self.rows.min(self.cols)).map(|i| self.at(i, i)).sum::<u64>() % self.p
    }

    /// Minimal polynomial: lcm of the annihilators of Krylov sequences.
    pub fn minpoly(&self) -> Vec<u64> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let p = self.p;
        let mut min = vec![1u64];
        let mut span = Subspace::new(p, n);
        for start in 0..n {
            let mut v = vec![0u64; n];
            v[start] = 1;
            if span.contains(&v) {
                continue;
            }
            // Krylov echelon with coefficient tracking relative to powers of self.
            let mut kbasis: Vec<Vec<u64>> = Vec::new(); // reduced vectors
            let mut kexpr: Vec<Vec<u64>> = Vec::new(); // their expressions in v, Mv, ...
            let mut cur = v.clone();
            let mut power = 0usize;
            loop {
                let mut expr = vec![0u64; power + 1];
                expr[power] = 1;
                let mut red = cur.clone();
                // reduce against kbasis
                for (b, e) in kbasis.iter().zip(&kexpr) {
                    let lead = b.iter().position(|&x| x != 0).unwrap();
                    if red[lead] != 0 {
                        let c = red[lead] * inv_mod(b[lead], p) % p;
                        for j in 0..n {
                            red[j] = (red[j] + (p - c) * b[j] % p) % p;
                        }
                        for (j, &ej) in e.iter().enumerate() {
                            if j < expr.len() {
                                expr[j] = (expr[j] + (p - c) * ej % p) % p;
                            } else if ej != 0 {
                                unreachable!("expression longer than power");
                            }
                        }
                    }
                }
                if red.iter().all(|&x| x == 0) {
                    // expr is the local annihilator
                    let local = poly_normalize(expr);
                    min = poly_lcm(&min, &local, p);
                    break;
                }
                kbasis.push(red);
                kexpr.push(expr);
                cur = self.apply(&cur);
                power += 1;
            }
            // add the whole Krylov space so later starts skip it
            for b in kbasis {
                span.insert(b);
            }
            if span.rank() == n && poly_deg(&min) == n {
                break;
            }
        }
        min
    }
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p prime.
    pow_mod_u(a % p, p - 2, p)
}

pub fn pow_mod_u(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Row-echelon subspace with pivot bookkeeping; rows kept pivot-normalized.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub p: u64,
    pub ambient: usize,
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(p: u64, ambient: usize) -> Self {
        Subspace { p, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce v against the subspace; the remainder is returned.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut red = v.to_vec();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if red[piv] != 0 {
                let c = red[piv];
                for j in 0..self.ambient {
                    red[j] = (red[j] + (p - c) * row[j]) % p;
                }
            }
        }
        red
    }

    /// Reduce v and record the coefficients used; returns (residual, coeffs).
    pub fn reduce_with_coeffs(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let p = self.p;
        let mut red = v.to_vec();
        let mut coeffs = vec![0u64; self.rows.len()];
        for (k, (row, &piv)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if red[piv] != 0 {
                let c = red[piv];
                coeffs[k] = c;
                for j in 0..self.ambient {
                    red[j] = (red[j] + (p - c) * row[j]) % p;
                }
            }
        }
        (red, coeffs)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Insert v (reduced); true when the rank grew.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let p = self.p;
        let mut red = self.reduce(&v);
        let Some(piv) = red.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(red[piv], p);
        for x in red.iter_mut() {
            *x = *x * inv % p;
        }
        // back-substitute to keep rows fully reduced
        for (row, _) in self.rows.iter_mut().zip(&self.pivots) {
            if row[piv] != 0 {
                let c = row[piv];
                for j in 0..self.ambient {
                    row[j] = (row[j] + (p - c) * red[j]) % p;
                }
            }
        }
        self.rows.push(red);
        self.pivots.push(piv);
        true
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F_p: dense, coefficient i belongs to x^i, no leading zeros.
// ---------------------------------------------------------------------------

pub fn poly_normalize(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn poly_deg(f: &[u64]) -> usize {
    f.len().saturating_sub(1)
}

pub fn poly_is_zero(f: &[u64]) -> bool {
    f.is_empty()
}

pub fn poly_add(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        out[i] = (a + b) % p;
    }
    poly_normalize(out)
}

pub fn poly_sub(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        out[i] = (a + p - b) % p;
    }
    poly_normalize(out)
}

pub fn poly_mul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a * b) % p;
        }
    }
    poly_normalize(out)
}

pub fn poly_scale(f: &[u64], c: u64, p: u64) -> Vec<u64> {
    poly_normalize(f.iter().map(|&x| x * (c % p) % p).collect())
}

/// (quotient, remainder) of f / g.
pub fn poly_divmod(f: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!g.is_empty(), "division by zero polynomial");
    let mut rem = f.to_vec();
    let dg = poly_deg(g);
    let lg_inv = inv_mod(*g.last().unwrap(), p);
    if poly_deg(&rem) < dg || rem.is_empty() {
        return (Vec::new(), poly_normalize(rem));
    }
    let mut quo = vec![0u64; rem.len() - dg];
    while !rem.is_empty() && poly_deg(&rem) >= dg {
        let dr = poly_deg(&rem);
        let c = rem.last().unwrap() * lg_inv % p;
        quo[dr - dg] = c;
        for (i, &gi) in g.iter().enumerate() {
            let idx = dr - dg + i;
            rem[idx] = (rem[idx] + (p - c * gi % p)) % p;
        }
        rem = poly_normalize(rem);
    }
    (poly_normalize(quo), rem)
}

pub fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    poly_divmod(f, g, p).1
}

pub fn poly_monic(f: &[u64], p: u64) -> Vec<u64> {
    match f.last() {
        None => Vec::new(),
        Some(&l) => poly_scale(f, inv_mod(l, p), p),
    }
}

pub fn poly_gcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    poly_monic(&a, p)
}

pub fn poly_lcm(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let gcd = poly_gcd(f, g, p);
    let (q, r) = poly_divmod(f, &gcd, p);
    debug_assert!(r.is_empty());
    poly_monic(&poly_mul(&q, g, p), p)
}

pub fn poly_derivative(f: &[u64], p: u64) -> Vec<u64> {
    if f.len() <= 1 {
        return Vec::new();
    }
    poly_normalize(
        (1..f.len())
            .map(|i| f[i] * ((i as u64) % p) % p)
            .collect(),
    )
}

pub fn poly_pow_mod(f: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(f, m, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &base, p), m, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), m, p);
        e >>= 1;
    }
    acc
}

/// Squarefree decomposition: list of (monic squarefree factor, multiplicity).
pub fn poly_squarefree(f: &[u64], p: u64) -> Vec<(Vec<u64>, u32)> {
    let f = poly_monic(f, p);
    if poly_deg(&f) == 0 {
        return Vec::new();
    }
    let df = poly_derivative(&f, p);
    if poly_is_zero(&df) {
        return poly_squarefree(&poly_pth_root(&f, p), p)
            .into_iter()
            .map(|(h, m)| (h, m * p as u32))
            .collect();
    }
    let mut out: Vec<(Vec<u64>, u32)> = Vec::new();
    let mut c = poly_gcd(&f, &df, p);
    let mut w = poly_divmod(&f, &c, p).0;
    let mut i = 1u32;
    while poly_deg(&w) > 0 {
        let y = poly_gcd(&w, &c, p);
        let fac = poly_divmod(&w, &y, p).0;
        if poly_deg(&fac) > 0 {
            out.push((poly_monic(&fac, p), i));
        }
        w = y.clone();
        c = poly_divmod(&c, &y, p).0;
        i += 1;
    }
    if poly_deg(&c) > 0 {
        // the remaining part is a p-th power
        for (h, m) in poly_squarefree(&poly_pth_root(&c, p), p) {
            out.push((h, m * p as u32));
        }
    }
    out
}

/// The p-th root of a polynomial of the form g(x^p); over F_p coefficients
/// are fixed by Frobenius.
fn poly_pth_root(f: &[u64], p: u64) -> Vec<u64> {
    let mut g = Vec::new();
    for (i, &c) in f.iter().enumerate() {
        if i % (p as usize) == 0 {
            g.push(c);
        } else {
            debug_assert_eq!(c, 0, "not a p-th power");
        }
    }
    poly_normalize(g)
}

/// Full factorization into monic irreducibles with multiplicities.
pub fn poly_factor(f: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Vec<(Vec<u64>, u32)> {
    let mut out = Vec::new();
    for (sq, mult) in poly_squarefree(f, p) {
        for irr in factor_squarefree(&sq, p, rng) {
            out.push((irr, mult));
        }
    }
    out.sort();
    out
}

fn factor_squarefree(f: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    // distinct-degree
    let mut rest = f.to_vec();
    let mut h = vec![0, 1]; // x
    let mut d = 0usize;
    while poly_deg(&rest) > 0 {
        d += 1;
        if 2 * d > poly_deg(&rest) {
            out.push(poly_monic(&rest, p));
            break;
        }
        h = poly_pow_mod(&h, p, &rest, p);
        let diff = poly_sub(&h, &[0, 1], p);
        let g = poly_gcd(&diff, &rest, p);
        if poly_deg(&g) > 0 {
            equal_degree_split(&g, d, p, rng, &mut out);
            rest = poly_divmod(&rest, &g, p).0;
            h = poly_rem(&h, &rest, p);
        }
    }
    out
}

fn equal_degree_split(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Vec<u64>>) {
    if poly_deg(f) == d {
        out.push(poly_monic(f, p));
        return;
    }
    let n = poly_deg(f);
    loop {
        // random polynomial of degree < n
        let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let a = poly_normalize(a);
        if poly_deg(&a) == 0 {
            continue;
        }
        let g = poly_gcd(&a, f, p);
        let split = if poly_deg(&g) > 0 && poly_deg(&g) < n {
            g
        } else if p == 2 {
            // trace map a + a^2 + a^4 + ... + a^{2^{d-1}}
            let mut t = a.clone();
            let mut q = a.clone();
            for _ in 1..d {
                q = poly_rem(&poly_mul(&q, &q, p), f, p);
                t = poly_add(&t, &q, p);
            }
            let g = poly_gcd(&t, f, p);
            if poly_deg(&g) > 0 && poly_deg(&g) < n {
                g
            } else {
                continue;
            }
        } else {
            let e = (pow_u128(p, d as u32) - 1) / 2;
            let b = poly_pow_mod_u128(&a, e, f, p);
            let bm1 = poly_sub(&b, &[1], p);
            let g = poly_gcd(&bm1, f, p);
            if poly_deg(&g) > 0 && poly_deg(&g) < n {
                g
            } else {
                continue;
            }
        };
        let other = poly_divmod(f, &split, p).0;
        equal_degree_split(&split, d, p, rng, out);
        equal_degree_split(&other, d, p, rng, out);
        return;
    }
}

fn pow_u128(p: u64, d: u32) -> u128 {
    (0..d).fold(1u128, |acc, _| acc * p as u128)
}

fn poly_pow_mod_u128(f: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(f, m, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &base, p), m, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), m, p);
        e >>= 1;
    }
    acc
}

/// CRT idempotent polynomials: for the i-th pairwise-coprime factor f_i of
/// the squarefree modulus m, a polynomial g_i with g_i = 1 mod f_i and
/// g_i = 0 mod f_j. Evaluating g_i at an element with minimal polynomial m
/// produces the component idempotents.
pub fn crt_idempotent(factors: &[Vec<u64>], i: usize, p: u64) -> Vec<u64> {
    let mut m = vec![1u64];
    for f in factors {
        m = poly_mul(&m, f, p);
    }
    let fi = &factors[i];
    let rest = poly_divmod(&m, fi, p).0;
    // invert rest modulo fi
    let inv = poly_modular_inverse(&rest, fi, p).expect("coprime factors");
    poly_rem(&poly_mul(&rest, &inv, p), &m, p)
}

pub fn poly_modular_inverse(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    // extended Euclid
    let (mut r0, mut r1) = (m.to_vec(), poly_rem(a, m, p));
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1, p);
        let t = poly_sub(&t0, &poly_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if poly_deg(&r0) != 0 {
        return None;
    }
    let c = inv_mod(r0[0], p);
    Some(poly_scale(&t0, c, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn matrix_basics() {
        let p = 5;
        let m = FpMat::from_rows(p, vec![vec![1, 2], vec![3, 4]]);
        let id = FpMat::identity(p, 2);
        assert_eq!(m.mul(&id), m);
        assert_eq!(m.rank(), 2);
        let sing = FpMat::from_rows(p, vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(sing.rank(), 1);
        let ns = sing.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(sing.apply(&ns[0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn minpoly_examples() {
        let p = 7;
        // diagonal (1, 2): minpoly (x-1)(x-2) = x^2 - 3x + 2
        let m = FpMat::from_rows(p, vec![vec![1, 0], vec![0, 2]]);
        assert_eq!(m.minpoly(), vec![2, 4, 1]);
        // nilpotent Jordan block: x^2
        let n = FpMat::from_rows(p, vec![vec![0, 1], vec![0, 0]]);
        assert_eq!(n.minpoly(), vec![0, 0, 1]);
        // minpoly annihilates
        assert!(m.poly_eval(&m.minpoly()).is_zero());
    }

    #[test]
    fn poly_division_and_gcd() {
        let p = 5;
        let f = vec![4, 0, 1]; // x^2 + 4 = (x-1)(x+1) mod 5... x^2 - 1
        let g = vec![4, 1]; // x + 4 = x - 1
        let (q, r) = poly_divmod(&f, &g, p);
        assert!(r.is_empty());
        assert_eq!(poly_mul(&q, &g, p), f);
        assert_eq!(poly_gcd(&f, &g, p), poly_monic(&g, p));
    }

    #[test]
    fn factorization_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2u64, 3, 5, 7] {
            for _ in 0..20 {
                let deg = rng.gen_range(1..8usize);
                let mut f: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
                *f.last_mut().unwrap() = 1;
                let factors = poly_factor(&f, p, &mut rng);
                let mut prod = vec![1u64];
                for (g, m) in &factors {
                    for _ in 0..*m {
                        prod = poly_mul(&prod, g, p);
                    }
                    // irreducibility spot check: no root splits further for deg <= 3
                    if poly_deg(g) > 1 {
                        for x in 0..p {
                            let val = g
                                .iter()
                                .rev()
                                .fold(0u64, |acc, &c| (acc * x + c) % p);
                            assert_ne!(val, 0, "irreducible factor has a root: {g:?} mod {p}");
                        }
                    }
                }
                assert_eq!(prod, poly_monic(&f, p), "p={p} f={f:?}");
            }
        }
    }

    #[test]
    fn squarefree_multiplicities() {
        let p = 3;
        // (x)^3 (x+1): derivative-zero path exercised
        let f = poly_mul(&[0, 0, 0, 1], &[1, 1], p);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let fac = poly_factor(&f, p, &mut rng);
        assert!(fac.contains(&(vec![0, 1], 3)));
        assert!(fac.contains(&(vec![1, 1], 1)));
    }

    #[test]
    fn crt_idempotents_sum_to_one() {
        let p = 5;
        let factors = vec![vec![4, 1], vec![1, 1], vec![2, 0, 1]];
        let mut m = vec![1u64];
        for f in &factors {
            m = poly_mul(&m, f, p);
        }
        let mut sum = Vec::new();
        for i in 0..factors.len() {
            let e = crt_idempotent(&factors, i, p);
            // e^2 = e mod m
            let sq = poly_rem(&poly_mul(&e, &e, p), &m, p);
            assert_eq!(sq, e);
            sum = poly_add(&sum, &e, p);
        }
        assert_eq!(sum, vec![1]);
    }

    #[test]
    fn subspace_closure() {
        let p = 3;
        let mut s = Subspace::new(p, 3);
        assert!(s.insert(vec![1, 1, 0]));
        assert!(s.insert(vec![0, 1, 1]));
        assert!(!s.insert(vec![1, 2, 1]));
        assert_eq!(s.rank(), 2);
        let (res, coeffs) = s.reduce_with_coeffs(&[1, 2, 1]);
        assert!(res.iter().all(|&x| x == 0));
        // coefficients reconstruct the vector from the echelon rows
        let mut rec = vec![0u64; 3];
        for (c, row) in coeffs.iter().zip(&s.rows) {
            for j in 0..3 {
                rec[j] = (rec[j] + c * row[j]) % p;
            }
        }
        assert_eq!(rec, vec![1, 2, 1]);
    }
}
