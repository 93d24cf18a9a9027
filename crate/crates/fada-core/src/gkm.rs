//! The dual model: Q_W^* as Q-valued functions on W, the characteristic
//! map, Hecke operators, the Schubert dual basis zeta_w, and matrices of
//! right-multiplication operators acting on the zeta-span.
//!
//! Everything here is the operator realization: an element z of Q_W acts on
//! functions by (T_z f)(x) = f(x z), and T is a ring homomorphism, so the
//! matrix of a product is the product of matrices.

use crate::error::{Error, Result};
use crate::fga::FgaCtx;
use crate::qw::{y_elem, QwElem, RootFrac};
use crate::series::Series;

use crate::demazure::{y_basis, YBasis};

/// A function W -> Q, values indexed by Weyl element index.
#[derive(Clone, Debug)]
pub struct GkmFn {
    pub values: Vec<RootFrac>,
}

/// The characteristic map: u |-> (w(u))_w.
pub fn char_map(ctx: &FgaCtx, u: &Series) -> GkmFn {
    let values = (0..ctx.weyl.size())
        .map(|w| RootFrac::from_series(ctx.weyl_act(w, u)))
        .collect();
    GkmFn { values }
}

impl GkmFn {
    pub fn pointwise_mul(&self, ctx: &FgaCtx, other: &GkmFn) -> GkmFn {
        GkmFn {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.mul(ctx, b))
                .collect(),
        }
    }

    pub fn eq(&self, ctx: &FgaCtx, other: &GkmFn) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| a.eq(ctx, b))
    }
}

/// The GKM model: Y-basis expansions plus the dual basis zeta_w with
/// `<zeta_w, Y_{I_u}> = delta_{wu}`, certified to take values in S.
pub struct GkmModel {
    pub basis: YBasis,
    /// zeta[w][v] in S.
    pub zeta: Vec<Vec<Series>>,
}

pub fn gkm_model(ctx: &FgaCtx) -> Result<GkmModel> {
    let basis = y_basis(ctx);
    let n = ctx.weyl.size();
    // Order equations by (length, index): the evaluation matrix
    // E[u][v] = coefficient of delta_v in Y_{I_u} is triangular.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| (ctx.weyl.length(u), u));
    let zeta: Vec<Result<Vec<Series>>> = crate::par::map_indexed(n, |w| {
        let mut vals: Vec<Option<RootFrac>> = vec![None; n];
        for &u in &order {
            // E[u][u] zeta_w(u) = delta_{uw} - sum_{v<u} E[u][v] zeta_w(v)
            let mut rhs = if u == w {
                RootFrac::one(ctx)
            } else {
                RootFrac::zero(ctx)
            };
            for (&v, coeff) in &basis.exp[u].terms {
                if v == u {
                    continue;
                }
                let zv = vals[v].as_ref().expect("triangular order");
                rhs = rhs.sub(ctx, &coeff.mul(ctx, zv));
            }
            let diag = basis.exp[u].terms.get(&u).expect("diagonal");
            vals[u] = Some(rhs.div_unit_frac(ctx, diag)?);
        }
        vals.into_iter()
            .map(|f| {
                f.unwrap()
                    .clear_denominators(ctx)
                    .map_err(|_| Error::RelationFailed("zeta value not in S".into()))
            })
            .collect()
    });
    let zeta = zeta.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(GkmModel { basis, zeta })
}

impl GkmModel {
    pub fn zeta_fn(&self, ctx: &FgaCtx, w: usize) -> GkmFn {
        GkmFn {
            values: self.zeta[w]
                .iter()
                .map(|s| RootFrac::from_series(s.clone()))
                .collect(),
        }
    }

    /// Pairing `<f, Y_{I_u}> = f(Y_{I_u})`.
    pub fn pair(&self, ctx: &FgaCtx, f: &GkmFn, u: usize) -> RootFrac {
        let mut acc = RootFrac::zero(ctx);
        for (&v, coeff) in &self.basis.exp[u].terms {
            acc = acc.add(ctx, &coeff.mul(ctx, &f.values[v]));
        }
        acc
    }

    /// Expansion of f in the zeta basis; the coefficients must clear into S,
    /// which certifies membership in the Schubert span.
    pub fn expand_in_zeta(&self, ctx: &FgaCtx, f: &GkmFn) -> Result<Vec<Series>> {
        (0..ctx.weyl.size())
            .map(|u| {
                self.pair(ctx, f, u)
                    .clear_denominators(ctx)
                    .map_err(|_| Error::DenominatorNotCleared(ctx.weyl.word_string(u)))
            })
            .collect()
    }

    /// Hecke operator A_i(f)(w) = f(w)/w(x_{-i}) + f(w s_i)/w(x_i).
    pub fn hecke_op(&self, ctx: &FgaCtx, i: usize, f: &GkmFn) -> GkmFn {
        let n = ctx.weyl.size();
        let alpha = ctx.weyl.datum.simple_root(i);
        let values = (0..n)
            .map(|w| {
                let wsi = ctx.weyl.right_mul[w][i];
                let inv_w_neg = inverse_of_weight_class(ctx, w, &alpha.iter().map(|c| -c).collect::<Vec<_>>());
                let inv_w_pos = inverse_of_weight_class(ctx, w, &alpha);
                f.values[w]
                    .mul(ctx, &inv_w_neg)
                    .add(ctx, &f.values[wsi].mul(ctx, &inv_w_pos))
            })
            .collect();
        GkmFn { values }
    }

    /// Matrix of the right-multiplication operator T_z on the zeta basis:
    /// column w holds the zeta-expansion of T_z zeta_w, computed through the
    /// pairing `M[u][w] = zeta_w(Y_{I_u} z)`.
    pub fn matrix_of(&self, ctx: &FgaCtx, z: &QwElem) -> Result<Vec<Vec<Series>>> {
        let n = ctx.weyl.size();
        let rows: Vec<Result<Vec<Series>>> = crate::par::map_indexed(n, |u| {
            let p = self.basis.exp[u].mul(ctx, z);
            (0..n)
                .map(|w| {
                    let mut acc = RootFrac::zero(ctx);
                    for (&v, coeff) in &p.terms {
                        acc = acc.add(ctx, &coeff.mul_series(ctx, &self.zeta[w][v]));
                    }
                    acc.clear_denominators(ctx)
                        .map_err(|_| Error::DenominatorNotCleared(ctx.weyl.word_string(u)))
                })
                .collect()
        });
        let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(rows)
    }

    /// Matrix of the Hecke operator A_i = T_{Y_i}.
    pub fn hecke_matrix(&self, ctx: &FgaCtx, i: usize) -> Result<Vec<Vec<Series>>> {
        self.matrix_of(ctx, &y_elem(ctx, i))
    }

    /// Matrix of pointwise multiplication by char_map(u) (= T_u for u in S).
    pub fn charmul_matrix(&self, ctx: &FgaCtx, u: &Series) -> Result<Vec<Vec<Series>>> {
        let n = ctx.weyl.size();
        let rows: Vec<Result<Vec<Series>>> = crate::par::map_indexed(n, |uu| {
            (0..n)
                .map(|w| {
                    let mut acc = RootFrac::zero(ctx);
                    for (&v, coeff) in &self.basis.exp[uu].terms {
                        let vu = ctx.weyl_act(v, u);
                        acc = acc.add(ctx, &coeff.mul_series(ctx, &vu.mul(&self.zeta[w][v])));
                    }
                    acc.clear_denominators(ctx)
                        .map_err(|_| Error::DenominatorNotCleared(ctx.weyl.word_string(uu)))
                })
                .collect()
        });
        rows.into_iter().collect()
    }
}

/// The fraction 1/x_{w(lambda)} where w(lambda) is plus or minus a positive
/// root; a negative image absorbs the inversion unit.
fn inverse_of_weight_class(ctx: &FgaCtx, w: usize, lambda: &[i64]) -> RootFrac {
    let img = ctx.weyl.apply(w, lambda);
    let mut den = std::collections::BTreeMap::new();
    if let Some(g) = ctx.weyl.datum.find_positive_root(&img) {
        den.insert(g, 1);
        RootFrac { num: ctx.constant(1), den }
    } else {
        let neg: Vec<i64> = img.iter().map(|x| -x).collect();
        let g = ctx
            .weyl
            .datum
            .find_positive_root(&neg)
            .expect("weight is plus or minus a root");
        den.insert(g, 1);
        RootFrac { num: ctx.cofactor_inv(g), den }
    }
}

pub fn smat_mul(ctx: &FgaCtx, a: &[Vec<Series>], b: &[Vec<Series>]) -> Vec<Vec<Series>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = ctx.zero();
                    for k in 0..n {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&a[i][k].mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn smat_eq(a: &[Vec<Series>], b: &[Vec<Series>]) -> bool {
    a.iter()
        .zip(b)
        .all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| x.eq_to_prec(y)))
}

pub fn smat_add(a: &[Vec<Series>], b: &[Vec<Series>]) -> Vec<Vec<Series>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.add(y)).collect())
        .collect()
}

/// Entry-wise augmentation (constant terms): the non-equivariant shadow.
pub fn smat_augment(a: &[Vec<Series>]) -> Vec<Vec<i128>> {
    a.iter()
        .map(|r| r.iter().map(|s| s.constant_term()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fga::test_ctx as ctx;
    use crate::fgl::FglKind;
    use crate::ring::Ring;
    use crate::rootdata::LatticeKind;

    #[test]
    fn char_map_examples() {
        let c = ctx('A', 1, LatticeKind::SimplyConnected, FglKind::Additive, Ring::Int, 6);
        let f = char_map(&c, &c.var(0));
        let s = c.simple_index(0);
        assert!(f.values[c.weyl.identity()].num.eq_to_prec(&c.var(0)));
        assert!(f.values[s].num.eq_to_prec(&c.var(0).neg()));
        // constants map to constants
        let g = char_map(&c, &c.constant(1));
        assert!(g.values[s].num.eq_to_prec(&c.constant(1)));
    }

    #[test]
    fn zeta_duality_a1() {
        let c = ctx('A', 1, LatticeKind::SimplyConnected, FglKind::Additive, Ring::Int, 6);
        let m = gkm_model(&c).unwrap();
        let s = c.simple_index(0);
        let e = c.weyl.identity();
        // zeta_e = constant 1, zeta_s = (0, x_alpha)
        assert_eq!(m.zeta[e][e], c.constant(1));
        assert_eq!(m.zeta[e][s], c.constant(1));
        assert_eq!(m.zeta[s][e], c.zero());
        assert_eq!(m.zeta[s][s], c.x_lambda(&[2]));
        // pairing is the identity matrix
        for w in 0..2 {
            for u in 0..2 {
                let p = m
                    .pair(&c, &m.zeta_fn(&c, w), u)
                    .clear_denominators(&c)
                    .unwrap();
                let expect = if u == w { 1 } else { 0 };
                assert!(p.eq_to_prec(&c.constant(expect)));
            }
        }
    }

    #[test]
    fn hecke_additive_examples() {
        let c = ctx('A', 1, LatticeKind::SimplyConnected, FglKind::Additive, Ring::Int, 6);
        let m = gkm_model(&c).unwrap();
        // A(zeta_s) = zeta_e, A(zeta_e) = 0 (kappa = 0)
        let s = c.simple_index(0);
        let a_zs = m.hecke_op(&c, 0, &m.zeta_fn(&c, s));
        assert!(a_zs.eq(&c, &m.zeta_fn(&c, 0)));
        let a_ze = m.hecke_op(&c, 0, &m.zeta_fn(&c, 0));
        let coeffs = m.expand_in_zeta(&c, &a_ze).unwrap();
        assert!(coeffs.iter().all(|x| x.truncate_to(x.prec.min(x.trunc)).is_zero()));
    }

    #[test]
    fn hecke_on_invariant_is_kappa_multiple() {
        // A_i(c(1)) = c(kappa_i): nonzero for multiplicative
        let c = ctx(
            'A',
            1,
            LatticeKind::SimplyConnected,
            FglKind::Multiplicative { beta: 2 },
            Ring::Int,
            6,
        );
        let m = gkm_model(&c).unwrap();
        let one = char_map(&c, &c.constant(1));
        let a1 = m.hecke_op(&c, 0, &one);
        let expect = char_map(&c, &c.kappa(0));
        assert!(a1.eq(&c, &expect));
    }

    #[test]
    fn zeta_products_stay_in_span() {
        let c = ctx('A', 2, LatticeKind::SimplyConnected, FglKind::Additive, Ring::Int, 6);
        let m = gkm_model(&c).unwrap();
        for w in 0..c.weyl.size() {
            for v in 0..c.weyl.size() {
                let prod = m.zeta_fn(&c, w).pointwise_mul(&c, &m.zeta_fn(&c, v));
                assert!(m.expand_in_zeta(&c, &prod).is_ok(), "w={w} v={v}");
            }
        }
    }

    #[test]
    fn operator_matrices_compose() {
        // matrix(Y_i Y_j) = matrix(Y_i) matrix(Y_j)
        let c = ctx('A', 2, LatticeKind::SimplyConnected, FglKind::Additive, Ring::Int, 6);
        let m = gkm_model(&c).unwrap();
        let a1 = m.hecke_matrix(&c, 0).unwrap();
        let a2 = m.hecke_matrix(&c, 1).unwrap();
        let y12 = crate::qw::y_word(&c, &[0, 1]).unwrap();
        let m12 = m.matrix_of(&c, &y12).unwrap();
        assert!(smat_eq(&smat_mul(&c, &a1, &a2), &m12));
    }
}
