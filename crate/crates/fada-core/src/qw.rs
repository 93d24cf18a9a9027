//! The twisted group algebra Q_W = Q ⊗ R[W] over the localization
//! Q = S[1/x_alpha], with the push-pull elements Y_i.
//!
//! Coefficients are kept as root fractions: a numerator in S over a multiset
//! of positive roots, negative-root factors being normalized away through
//! the unit x_{-alpha} = x_alpha * (unit).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fga::FgaCtx;
use crate::series::Series;

/// numerator / prod_{beta in den} x_beta, with den a multiset of positive
/// root indices.
#[derive(Clone, Debug)]
pub struct RootFrac {
    pub num: Series,
    pub den: BTreeMap<usize, u32>,
}

impl RootFrac {
    pub fn from_series(num: Series) -> Self {
        RootFrac { num, den: BTreeMap::new() }
    }

    pub fn zero(ctx: &FgaCtx) -> Self {
        RootFrac::from_series(ctx.zero())
    }

    pub fn one(ctx: &FgaCtx) -> Self {
        RootFrac::from_series(ctx.constant(1))
    }

    pub fn is_zero(&self) -> bool {
        let window = self.num.prec.min(self.num.trunc);
        self.num.truncate_to(window).is_zero()
    }

    pub fn den_degree(&self) -> u32 {
        self.den.values().sum()
    }

    fn den_series(ctx: &FgaCtx, den: &BTreeMap<usize, u32>) -> Series {
        let mut s = ctx.constant(1);
        for (&b, &m) in den {
            let xb = ctx.x_lambda(&ctx.weyl.datum.positive_roots[b].lattice_coords);
            for _ in 0..m {
                s = s.mul(&xb);
            }
        }
        s
    }

    pub fn mul(&self, ctx: &FgaCtx, other: &RootFrac) -> RootFrac {
        let mut den = self.den.clone();
        for (&b, &m) in &other.den {
            *den.entry(b).or_insert(0) += m;
        }
        RootFrac { num: self.num.mul(&other.num), den }.reduce(ctx)
    }

    pub fn mul_series(&self, ctx: &FgaCtx, s: &Series) -> RootFrac {
        RootFrac { num: self.num.mul(s), den: self.den.clone() }.reduce(ctx)
    }

    pub fn add(&self, ctx: &FgaCtx, other: &RootFrac) -> RootFrac {
        // common denominator = multiset max
        let mut den = self.den.clone();
        for (&b, &m) in &other.den {
            let e = den.entry(b).or_insert(0);
            *e = (*e).max(m);
        }
        let scale = |f: &RootFrac| -> Series {
            let mut extra = BTreeMap::new();
            for (&b, &m) in &den {
                let have = f.den.get(&b).copied().unwrap_or(0);
                if m > have {
                    extra.insert(b, m - have);
                }
            }
            f.num.mul(&Self::den_series(ctx, &extra))
        };
        let num = scale(self).add(&scale(other));
        RootFrac { num, den }.reduce(ctx)
    }

    pub fn neg(&self) -> RootFrac {
        RootFrac { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, ctx: &FgaCtx, other: &RootFrac) -> RootFrac {
        self.add(ctx, &other.neg())
    }

    /// Cancel denominator factors that divide the numerator exactly.
    pub fn reduce(&self, ctx: &FgaCtx) -> RootFrac {
        if self.is_zero() {
            return RootFrac { num: self.num.truncate_to(self.num.prec.min(self.num.trunc)), den: BTreeMap::new() };
        }
        let mut num = self.num.clone();
        let mut den = BTreeMap::new();
        for (&b, &m) in &self.den {
            let xb = ctx.x_lambda(&ctx.weyl.datum.positive_roots[b].lattice_coords);
            let mut left = m;
            while left > 0 {
                match num.div_exact(&xb) {
                    Ok(q) => {
                        num = q;
                        left -= 1;
                    }
                    Err(_) => break,
                }
            }
            if left > 0 {
                den.insert(b, left);
            }
        }
        RootFrac { num, den }
    }

    /// Weyl action; negative-root images absorb a unit into the numerator.
    pub fn weyl(&self, ctx: &FgaCtx, w: usize) -> RootFrac {
        let mut num = ctx.weyl_act(w, &self.num);
        let mut den = BTreeMap::new();
        for (&b, &m) in &self.den {
            let img = ctx
                .weyl
                .apply(w, &ctx.weyl.datum.positive_roots[b].lattice_coords);
            if let Some(g) = ctx.weyl.datum.find_positive_root(&img) {
                *den.entry(g).or_insert(0) += m;
            } else {
                let neg: Vec<i64> = img.iter().map(|x| -x).collect();
                let g = ctx
                    .weyl
                    .datum
                    .find_positive_root(&neg)
                    .expect("Weyl image of a root is a root");
                *den.entry(g).or_insert(0) += m;
                let ci = ctx.cofactor_inv(g);
                for _ in 0..m {
                    num = num.mul(&ci);
                }
            }
        }
        RootFrac { num, den }
    }

    /// Certify membership in S by clearing every denominator factor.
    pub fn clear_denominators(&self, ctx: &FgaCtx) -> Result<Series> {
        let mut num = self.num.clone();
        for (&b, &m) in &self.den {
            let xb = ctx.x_lambda(&ctx.weyl.datum.positive_roots[b].lattice_coords);
            for _ in 0..m {
                num = num.div_exact(&xb)?;
            }
        }
        Ok(num)
    }

    /// Divide by a fraction whose numerator is a unit of S.
    pub fn div_unit_frac(&self, ctx: &FgaCtx, other: &RootFrac) -> Result<RootFrac> {
        let inv = other.num.invert_unit()?;
        let num = self.num.mul(&inv).mul(&Self::den_series(ctx, &other.den));
        Ok(RootFrac { num, den: self.den.clone() }.reduce(ctx))
    }

    pub fn eq(&self, ctx: &FgaCtx, other: &RootFrac) -> bool {
        self.sub(ctx, other).is_zero()
    }

    /// Precision of the trusted window of the numerator.
    pub fn prec(&self) -> u32 {
        self.num.prec
    }
}

/// Finite sum q_w delta_w with root-fraction coefficients.
#[derive(Clone, Debug)]
pub struct QwElem {
    pub terms: BTreeMap<usize, RootFrac>,
}

impl QwElem {
    pub fn zero() -> Self {
        QwElem { terms: BTreeMap::new() }
    }

    pub fn one(ctx: &FgaCtx) -> Self {
        Self::delta(ctx, ctx.weyl.identity())
    }

    pub fn delta(ctx: &FgaCtx, w: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, RootFrac::one(ctx));
        QwElem { terms }
    }

    pub fn scalar(ctx: &FgaCtx, s: Series) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(ctx.weyl.identity(), RootFrac::from_series(s));
        QwElem { terms }.normalized()
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, f| !f.is_zero());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|f| f.is_zero())
    }

    pub fn add(&self, ctx: &FgaCtx, other: &QwElem) -> QwElem {
        let mut terms = self.terms.clone();
        for (&w, f) in &other.terms {
            let e = terms
                .entry(w)
                .or_insert_with(|| RootFrac::zero(ctx));
            *e = e.add(ctx, f);
        }
        QwElem { terms }.normalized()
    }

    pub fn neg(&self) -> QwElem {
        QwElem { terms: self.terms.iter().map(|(&w, f)| (w, f.neg())).collect() }
    }

    pub fn sub(&self, ctx: &FgaCtx, other: &QwElem) -> QwElem {
        self.add(ctx, &other.neg())
    }

    /// The product rule q delta_v * q' delta_w = q (v q') delta_{vw}.
    pub fn mul(&self, ctx: &FgaCtx, other: &QwElem) -> QwElem {
        let mut terms: BTreeMap<usize, RootFrac> = BTreeMap::new();
        for (&v, qa) in &self.terms {
            for (&w, qb) in &other.terms {
                let vw = ctx.weyl.mul(v, w);
                let f = qa.mul(ctx, &qb.weyl(ctx, v));
                match terms.get_mut(&vw) {
                    Some(e) => *e = e.add(ctx, &f),
                    None => {
                        terms.insert(vw, f);
                    }
                }
            }
        }
        QwElem { terms }.normalized()
    }

    pub fn mul_scalar(&self, ctx: &FgaCtx, s: &Series) -> QwElem {
        QwElem {
            terms: self
                .terms
                .iter()
                .map(|(&w, f)| (w, f.mul_series(ctx, s)))
                .collect(),
        }
        .normalized()
    }

    /// Minimal trusted precision over the coefficients.
    pub fn prec(&self) -> u32 {
        self.terms.values().map(|f| f.prec()).min().unwrap_or(u32::MAX)
    }

    pub fn eq(&self, ctx: &FgaCtx, other: &QwElem) -> bool {
        self.sub(ctx, other).is_zero()
    }
}

/// Y_i = (1 + delta_i) 1/x_{-i} = 1/x_{-i} delta_e + 1/x_i delta_{s_i}.
pub fn y_elem(ctx: &FgaCtx, i: usize) -> QwElem {
    let alpha_idx = ctx
        .weyl
        .datum
        .find_positive_root(&ctx.weyl.datum.simple_root(i))
        .expect("simple root is positive");
    let mut terms = BTreeMap::new();
    // 1/x_{-alpha} = cofactor_inv / x_alpha
    let mut den = BTreeMap::new();
    den.insert(alpha_idx, 1);
    terms.insert(
        ctx.weyl.identity(),
        RootFrac { num: ctx.cofactor_inv(alpha_idx), den: den.clone() },
    );
    terms.insert(
        ctx.simple_index(i),
        RootFrac { num: ctx.constant(1), den },
    );
    QwElem { terms }
}

/// Product Y_{i_1} ... Y_{i_l} for a word.
pub fn y_word(ctx: &FgaCtx, word: &[u8]) -> Result<QwElem> {
    for &i in word {
        if (i as usize) >= ctx.rank() {
            return Err(Error::InvalidInput(format!("letter {} out of range", i + 1)));
        }
    }
    let mut acc = QwElem::one(ctx);
    for &i in word {
        acc = acc.mul(ctx, &y_elem(ctx, i as usize));
    }
    Ok(acc)
}
