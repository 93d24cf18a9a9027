//! Sparse multivariate power series truncated in total degree.
//!
//! A `Series` stores terms of total degree <= `trunc` and carries a
//! `prec` field: every homogeneous component of degree <= `prec` is exactly
//! correct. `PREC_EXACT` marks certified polynomials (no hidden tail), which
//! is what keeps additive/multiplicative computations loss-free.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ring::{Coef, Ring};

/// Packed exponent vector: one byte per variable, at most [`MAX_VARS`] variables.
pub type Exp = u64;

pub const MAX_VARS: usize = 8;

/// Sentinel precision for certified polynomials.
pub const PREC_EXACT: u32 = u32::MAX;

#[inline]
pub fn exp_var(i: usize) -> Exp {
    debug_assert!(i < MAX_VARS);
    1u64 << (8 * i)
}

#[inline]
pub fn exp_get(e: Exp, i: usize) -> u32 {
    ((e >> (8 * i)) & 0xff) as u32
}

#[inline]
pub fn exp_deg(e: Exp) -> u32 {
    let mut d = 0;
    let mut x = e;
    while x != 0 {
        d += (x & 0xff) as u32;
        x >>= 8;
    }
    d
}

#[inline]
fn exp_add(a: Exp, b: Exp) -> Exp {
    // Degrees stay below 256 because trunc does; no per-byte carries occur.
    a + b
}

#[inline]
fn exp_sub(a: Exp, b: Exp) -> Option<Exp> {
    let mut r = 0u64;
    for i in 0..MAX_VARS {
        let ai = (a >> (8 * i)) & 0xff;
        let bi = (b >> (8 * i)) & 0xff;
        if ai < bi {
            return None;
        }
        r |= (ai - bi) << (8 * i);
    }
    Some(r)
}

type Key = (u32, Exp);

#[derive(Clone, Debug)]
pub struct Series {
    pub nvars: usize,
    pub ring: Ring,
    /// Storage truncation: no term of total degree > trunc is kept.
    pub trunc: u32,
    /// Trusted total degree; `PREC_EXACT` means certified polynomial.
    pub prec: u32,
    terms: BTreeMap<Key, Coef>,
}

impl Series {
    pub fn zero(nvars: usize, ring: Ring, trunc: u32) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables supported");
        Series { nvars, ring, trunc, prec: PREC_EXACT, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, ring: Ring, trunc: u32, c: Coef) -> Self {
        let mut s = Self::zero(nvars, ring, trunc);
        let c = ring.normalize(c);
        if c != 0 {
            s.terms.insert((0, 0), c);
        }
        s
    }

    pub fn var(nvars: usize, ring: Ring, trunc: u32, i: usize) -> Self {
        let mut s = Self::zero(nvars, ring, trunc);
        if trunc >= 1 {
            s.terms.insert((1, exp_var(i)), ring.one());
        }
        s
    }

    pub fn from_terms(
        nvars: usize,
        ring: Ring,
        trunc: u32,
        prec: u32,
        it: impl IntoIterator<Item = (Exp, Coef)>,
    ) -> Self {
        let mut s = Self::zero(nvars, ring, trunc);
        s.prec = prec;
        for (e, c) in it {
            s.add_term(e, c);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when this is a certified polynomial equal to a single constant.
    pub fn constant_term(&self) -> Coef {
        self.terms.get(&(0, 0)).copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|(d, _)| *d == 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exp, Coef)> + '_ {
        self.terms.iter().map(|(&(_, e), &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Minimal total degree of a stored term; `None` for the zero series.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(|(d, _)| *d)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().next_back().map(|(d, _)| *d).unwrap_or(0)
    }

    fn add_term(&mut self, e: Exp, c: Coef) {
        let d = exp_deg(e);
        if d > self.trunc {
            return;
        }
        let entry = self.terms.entry((d, e)).or_insert(0);
        *entry = self.ring.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&(d, e));
        }
    }

    fn drop_beyond(&mut self, deg: u32) {
        if deg == PREC_EXACT {
            return;
        }
        self.terms.retain(|(d, _), _| *d <= deg);
    }

    /// Forget everything above `p`; the result is trusted up to `p`.
    pub fn truncate_to(&self, p: u32) -> Series {
        let mut s = self.clone();
        s.drop_beyond(p);
        if s.prec != PREC_EXACT || p < s.max_degree() {
            s.prec = s.prec.min(p);
        }
        s
    }

    fn check_compat(&self, other: &Series) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        assert_eq!(self.ring, other.ring, "ring mismatch");
        assert_eq!(self.trunc, other.trunc, "truncation mismatch");
    }

    pub fn add(&self, other: &Series) -> Series {
        self.check_compat(other);
        let mut s = self.clone();
        s.prec = self.prec.min(other.prec);
        for (&(d, e), &c) in &other.terms {
            let _ = d;
            s.add_term(e, c);
        }
        s.drop_beyond(s.prec);
        s
    }

    pub fn neg(&self) -> Series {
        let mut s = self.clone();
        for (_, c) in s.terms.iter_mut() {
            *c = self.ring.neg(*c);
        }
        s
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Coef) -> Series {
        let c = self.ring.normalize(c);
        if c == 0 {
            let mut z = Series::zero(self.nvars, self.ring, self.trunc);
            z.prec = PREC_EXACT;
            return z;
        }
        let mut s = self.clone();
        let mut dead = Vec::new();
        for (k, v) in s.terms.iter_mut() {
            *v = self.ring.mul(*v, c);
            if *v == 0 {
                dead.push(*k);
            }
        }
        for k in dead {
            s.terms.remove(&k);
        }
        s
    }

    /// Precision of a product with the sharp valuation rule.
    fn mul_prec(&self, other: &Series) -> u32 {
        let va = self.valuation();
        let vb = other.valuation();
        match (self.prec, other.prec) {
            (PREC_EXACT, PREC_EXACT) => PREC_EXACT,
            _ => {
                // prec(ab) = min(pa + val b, pb + val a); a zero factor is exact.
                let pa = self.prec;
                let pb = other.prec;
                let t1 = match vb {
                    None => PREC_EXACT,
                    Some(v) => pa.saturating_add(v),
                };
                let t2 = match va {
                    None => PREC_EXACT,
                    Some(v) => pb.saturating_add(v),
                };
                t1.min(t2)
            }
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        self.check_compat(other);
        let mut out = Series::zero(self.nvars, self.ring, self.trunc);
        let mut prec = self.mul_prec(other);
        let cap = self.trunc;
        for (&(da, ea), &ca) in &self.terms {
            if da > cap {
                break;
            }
            for (&(db, eb), &cb) in &other.terms {
                if da + db > cap {
                    break;
                }
                out.add_term(exp_add(ea, eb), self.ring.mul(ca, cb));
            }
        }
        if prec == PREC_EXACT && self.max_degree() + other.max_degree() > cap {
            // The true polynomial product overflows the storage window.
            prec = cap;
        }
        out.prec = prec;
        out.drop_beyond(prec);
        out
    }

    pub fn mul_all<'a>(factors: impl IntoIterator<Item = &'a Series>, one: Series) -> Series {
        factors.into_iter().fold(one, |acc, f| acc.mul(f))
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::constant(self.nvars, self.ring, self.trunc, 1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact division, checking that `self = q * div` holds on the whole
    /// trusted window. Fails with `NotDivisible` otherwise.
    pub fn div_exact(&self, div: &Series) -> Result<Series> {
        self.check_compat(div);
        if div.is_zero() {
            return Err(Error::NotDivisible("division by zero".into()));
        }
        let vd = div.valuation().unwrap();
        let window = if self.prec == PREC_EXACT && div.prec == PREC_EXACT {
            PREC_EXACT
        } else {
            self.prec.min(div.prec)
        };
        let out_prec = if window == PREC_EXACT { PREC_EXACT } else { (window - vd.min(window)).min(self.trunc) };
        let (&(_, lead_e), &lead_c) = div.terms.iter().next().unwrap();
        let mut rem = self.truncate_to(if window == PREC_EXACT { self.trunc } else { window });
        let mut q = Series::zero(self.nvars, self.ring, self.trunc);
        while let Some((&(dr, er), &cr)) = rem.terms.iter().next() {
            if window != PREC_EXACT && dr > window {
                break;
            }
            let e = exp_sub(er, lead_e).ok_or_else(|| {
                Error::NotDivisible(format!("leading monomial not divisible at degree {dr}"))
            })?;
            let c = self
                .ring
                .div_exact(cr, lead_c)
                .ok_or_else(|| Error::NotDivisible(format!("coefficient not divisible at degree {dr}")))?;
            q.add_term(e, c);
            // rem -= c * x^e * div
            for (&(dd, ed), &cd) in &div.terms {
                if exp_deg(e) + dd > rem.trunc {
                    break;
                }
                rem.add_term(exp_add(e, ed), self.ring.neg(self.ring.mul(c, cd)));
            }
        }
        q.prec = out_prec;
        q.drop_beyond(out_prec);
        Ok(q)
    }

    /// Power-series inverse of a unit (invertible constant term).
    pub fn invert_unit(&self) -> Result<Series> {
        let c0 = self.constant_term();
        let c0i = self.ring.inv(c0).ok_or(Error::NotAUnit)?;
        if self.is_constant() && self.prec == PREC_EXACT {
            return Ok(Series::constant(self.nvars, self.ring, self.trunc, c0i));
        }
        let out_prec = if self.prec == PREC_EXACT { self.trunc } else { self.prec };
        // Newton iteration w <- w(2 - u w), doubling correct degrees.
        let mut w = Series::constant(self.nvars, self.ring, self.trunc, c0i);
        let two = Series::constant(self.nvars, self.ring, self.trunc, 2);
        let mut correct = 0u32;
        while correct < out_prec.min(self.trunc) {
            let uw = self.mul(&w);
            w = w.mul(&two.sub(&uw));
            w.prec = PREC_EXACT; // precision handled by the loop bound
            w.drop_beyond(self.trunc);
            correct = correct.saturating_mul(2).saturating_add(1);
        }
        w.prec = out_prec;
        w.drop_beyond(out_prec);
        Ok(w)
    }

    /// Substitute `targets[i]` for variable i. Every target must have zero
    /// constant term (valuation >= 1) unless the variable does not occur.
    pub fn substitute(&self, targets: &[Series]) -> Result<Series> {
        assert_eq!(targets.len(), self.nvars);
        let mut prec = self.prec;
        for (i, t) in targets.iter().enumerate() {
            let occurs = self.terms.keys().any(|(_, e)| exp_get(*e, i) > 0);
            if occurs {
                if t.constant_term() != 0 {
                    return Err(Error::NonzeroConstantTerm);
                }
                prec = prec.min(t.prec);
            }
        }
        // Memoized powers per variable.
        let mut pows: Vec<Vec<Series>> = targets
            .iter()
            .map(|t| vec![Series::constant(self.nvars, self.ring, self.trunc, 1), t.clone()])
            .collect();
        let mut out = Series::zero(self.nvars, self.ring, self.trunc);
        for (&(_, e), &c) in &self.terms {
            let mut term = Series::constant(self.nvars, self.ring, self.trunc, c);
            for i in 0..self.nvars {
                let k = exp_get(e, i) as usize;
                if k == 0 {
                    continue;
                }
                while pows[i].len() <= k {
                    let next = pows[i].last().unwrap().mul(&targets[i]);
                    pows[i].push(next);
                }
                term = term.mul(&pows[i][k]);
            }
            prec = prec.min(term.prec);
            for (te, tc) in term.terms() {
                out.add_term(te, tc);
            }
        }
        out.prec = prec;
        out.drop_beyond(out.prec);
        Ok(out)
    }

    /// The homogeneous component of total degree `k`.
    pub fn component(&self, k: u32) -> Series {
        let mut s = Series::zero(self.nvars, self.ring, self.trunc);
        s.prec = self.prec;
        for (&(d, e), &c) in &self.terms {
            if d == k {
                s.terms.insert((d, e), c);
            }
        }
        s
    }

    /// Equality of the trusted windows of both operands.
    pub fn eq_to_prec(&self, other: &Series) -> bool {
        let p = self.prec.min(other.prec);
        self.sub(other).truncate_to(p.min(self.trunc)).is_zero()
    }

    /// Sparse term list `[[e_1, ..., e_n], "coef"]` used by CLI dumps and caches.
    pub fn to_term_list(&self) -> Vec<(Vec<u32>, String)> {
        self.terms
            .iter()
            .map(|(&(_, e), &c)| ((0..self.nvars).map(|i| exp_get(e, i)).collect(), c.to_string()))
            .collect()
    }
}

/// Term-wise equality; precision metadata is deliberately ignored so that
/// structurally equal values compare equal regardless of how they were
/// computed. Use `eq_to_prec` for the window-aware comparison.
impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for Series {}

impl std::fmt::Display for Series {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(_, e), &c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for i in 0..self.nvars {
                let k = exp_get(e, i);
                if k == 1 {
                    write!(f, "*x{i}")?;
                } else if k > 1 {
                    write!(f, "*x{i}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(trunc: u32) -> (Series, Series) {
        let x = Series::var(2, Ring::Int, trunc, 0);
        let y = Series::var(2, Ring::Int, trunc, 1);
        (x, y)
    }

    #[test]
    fn arithmetic_basics() {
        let (x, y) = s(6);
        let p = x.add(&y).mul(&x.sub(&y));
        let q = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(p, q);
        assert_eq!(p.prec, PREC_EXACT);
    }

    #[test]
    fn division_exact_and_failing() {
        let (x, y) = s(8);
        let u = x.add(&y.scale(2));
        let p = u.mul(&u).mul(&x);
        let q = p.div_exact(&u).unwrap();
        assert_eq!(q, u.mul(&x));
        assert!(p.add(&y).div_exact(&u).is_err());
        // integer coefficient divisibility
        let two_x = x.scale(2);
        assert!(x.div_exact(&two_x).is_err());
        assert_eq!(two_x.div_exact(&x).unwrap(), Series::constant(2, Ring::Int, 8, 2));
    }

    #[test]
    fn unit_inverse_geometric() {
        let (x, _) = s(5);
        let one = Series::constant(2, Ring::Int, 5, 1);
        let u = one.sub(&x);
        let inv = u.invert_unit().unwrap();
        // 1 + x + x^2 + ... up to trunc
        let mut expect = Series::zero(2, Ring::Int, 5);
        for k in 0..=5u32 {
            expect = expect.add(&x.pow(k));
        }
        assert!(inv.eq_to_prec(&expect));
        assert_eq!(inv.prec, 5);
    }

    #[test]
    fn precision_tracking_through_division() {
        let (x, _) = s(6);
        let mut u = x.mul(&x); // exact
        u.prec = 4; // pretend it is only trusted to degree 4
        let q = u.div_exact(&x).unwrap();
        assert_eq!(q.prec, 3);
        assert!(q.eq_to_prec(&x));
    }

    #[test]
    fn substitution() {
        let (x, y) = s(6);
        let p = x.mul(&x).add(&y);
        let r = p.substitute(&[y.clone(), x.clone()]).unwrap();
        assert_eq!(r, y.mul(&y).add(&x));
    }

    #[test]
    fn modular_ring() {
        let x = Series::var(1, Ring::Mod(2), 4, 0);
        let two_x = x.scale(2);
        assert!(two_x.is_zero());
    }
}
