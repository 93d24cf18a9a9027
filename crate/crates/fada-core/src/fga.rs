//! The formal group algebra S = R[[T*]]_F: classes x_lambda for lattice
//! weights, the Weyl action by substitution, divided-difference operators
//! and the kappa elements.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::fgl::Fgl;
use crate::ring::Ring;
use crate::rootdata::{Weight, WeylGroup};
use crate::series::Series;

/// Context tying a root datum, a formal group law and a truncation order.
/// Caches are append-only behind mutexes; all produced series are immutable.
pub struct FgaCtx {
    pub weyl: Arc<WeylGroup>,
    pub fgl: Arc<Fgl>,
    pub ring: Ring,
    pub trunc: u32,
    x_cache: Mutex<HashMap<Weight, Series>>,
    cofactor_inv: Mutex<HashMap<usize, Series>>,
    weyl_targets: Mutex<HashMap<usize, Arc<Vec<Series>>>>,
}

impl FgaCtx {
    /// Convenience constructor from raw pieces; the usual entry point for
    /// tests and the CLI.
    pub fn build(
        cartan: crate::rootdata::CartanType,
        lattice: crate::rootdata::LatticeKind,
        kind: crate::fgl::FglKind,
        ring: Ring,
        trunc: u32,
    ) -> crate::error::Result<Self> {
        let datum = crate::rootdata::build_root_datum(cartan, lattice, None)?;
        let weyl = crate::rootdata::enumerate_weyl(datum, crate::rootdata::DEFAULT_WEYL_CAP)?;
        let fgl = crate::fgl::make_fgl(kind, ring, trunc)?;
        Ok(FgaCtx::new(Arc::new(weyl), Arc::new(fgl)))
    }

    pub fn new(weyl: Arc<WeylGroup>, fgl: Arc<Fgl>) -> Self {
        let ring = fgl.ring;
        let trunc = fgl.trunc;
        FgaCtx {
            weyl,
            fgl,
            ring,
            trunc,
            x_cache: Mutex::new(HashMap::new()),
            cofactor_inv: Mutex::new(HashMap::new()),
            weyl_targets: Mutex::new(HashMap::new()),
        }
    }

    pub fn rank(&self) -> usize {
        self.weyl.rank()
    }

    pub fn zero(&self) -> Series {
        Series::zero(self.rank(), self.ring, self.trunc)
    }

    pub fn constant(&self, c: i128) -> Series {
        Series::constant(self.rank(), self.ring, self.trunc, c)
    }

    pub fn var(&self, j: usize) -> Series {
        Series::var(self.rank(), self.ring, self.trunc, j)
    }

    /// x_lambda, built from the basis variables by F-sums and formal
    /// inverses; the association order is fixed by the binary expansion of
    /// the coordinates so cached values are reproducible.
    pub fn x_lambda(&self, lambda: &[i64]) -> Series {
        if let Some(s) = self.x_cache.lock().unwrap().get(lambda) {
            return s.clone();
        }
        let s = self.compute_x(lambda);
        self.x_cache
            .lock()
            .unwrap()
            .insert(lambda.to_vec(), s.clone());
        s
    }

    fn compute_x(&self, lambda: &[i64]) -> Series {
        let n = self.rank();
        let nonzero: Vec<usize> = (0..n).filter(|&j| lambda[j] != 0).collect();
        match nonzero.len() {
            0 => self.zero(),
            1 => {
                let j = nonzero[0];
                let c = lambda[j];
                if c == 1 {
                    return self.var(j);
                }
                if c < 0 {
                    let mut pos = vec![0i64; n];
                    pos[j] = -c;
                    return self.fgl.inverse(&self.x_lambda(&pos)).expect("x has no constant term");
                }
                if c % 2 == 0 {
                    let mut half = vec![0i64; n];
                    half[j] = c / 2;
                    let h = self.x_lambda(&half);
                    self.fgl.sum(&h, &h).expect("x has no constant term")
                } else {
                    let mut rest = vec![0i64; n];
                    rest[j] = c - 1;
                    self.fgl
                        .sum(&self.var(j), &self.x_lambda(&rest))
                        .expect("x has no constant term")
                }
            }
            _ => {
                let j = nonzero[0];
                let mut head = vec![0i64; n];
                head[j] = lambda[j];
                let mut rest = lambda.to_vec();
                rest[j] = 0;
                self.fgl
                    .sum(&self.x_lambda(&head), &self.x_lambda(&rest))
                    .expect("x has no constant term")
            }
        }
    }

    /// The unit u with x_{-beta} = x_beta * u, inverted; cached per root.
    pub fn cofactor_inv(&self, root_idx: usize) -> Series {
        if let Some(s) = self.cofactor_inv.lock().unwrap().get(&root_idx) {
            return s.clone();
        }
        let beta = self.weyl.datum.positive_roots[root_idx].lattice_coords.clone();
        let xb = self.x_lambda(&beta);
        let c = self
            .fgl
            .inverse_cofactor(&xb)
            .expect("roots have no constant term");
        let ci = c.invert_unit().expect("cofactor unit");
        self.cofactor_inv
            .lock()
            .unwrap()
            .insert(root_idx, ci.clone());
        ci
    }

    fn targets_for(&self, w: usize) -> Arc<Vec<Series>> {
        if let Some(t) = self.weyl_targets.lock().unwrap().get(&w) {
            return t.clone();
        }
        let n = self.rank();
        let targets: Vec<Series> = (0..n)
            .map(|j| {
                let mut e = vec![0i64; n];
                e[j] = 1;
                let img = self.weyl.apply(w, &e);
                self.x_lambda(&img)
            })
            .collect();
        let targets = Arc::new(targets);
        self.weyl_targets
            .lock()
            .unwrap()
            .insert(w, targets.clone());
        targets
    }

    /// Weyl action on S: substitute x_{b_j} -> x_{w(b_j)}.
    pub fn weyl_act(&self, w: usize, u: &Series) -> Series {
        if w == self.weyl.identity() {
            return u.clone();
        }
        let targets = self.targets_for(w);
        u.substitute(&targets).expect("weyl targets have no constant term")
    }

    /// Divided difference Delta_{-i}(u) = (u - s_i(u)) / x_{-alpha_i}.
    pub fn divided_difference(&self, i: usize, u: &Series) -> Result<Series> {
        let root_idx = self
            .weyl
            .datum
            .find_positive_root(&self.weyl.datum.simple_root(i))
            .expect("simple root is positive");
        let si = self.simple_index(i);
        let num = u.sub(&self.weyl_act(si, u));
        let xa = self.x_lambda(&self.weyl.datum.simple_root(i));
        let q = num
            .div_exact(&xa)
            .map_err(|e| Error::DivisionFailed(format!("Delta_(-{}): {e}", i + 1)))?;
        Ok(q.mul(&self.cofactor_inv(root_idx)))
    }

    /// kappa_i = 1/x_i + 1/x_{-i}, computed inside S as -G(x_i, x_{-i}).
    pub fn kappa(&self, i: usize) -> Series {
        let alpha = self.weyl.datum.simple_root(i);
        let xa = self.x_lambda(&alpha);
        let neg: Vec<i64> = alpha.iter().map(|c| -c).collect();
        let xna = self.x_lambda(&neg);
        self.fgl
            .g_series(&xa, &xna)
            .expect("kappa")
            .neg()
    }

    /// Group element index of the simple reflection s_i.
    pub fn simple_index(&self, i: usize) -> usize {
        self.weyl.right_mul[self.weyl.identity()][i]
    }

    /// Exact division in S.
    pub fn exact_divide(&self, u: &Series, v: &Series) -> Result<Series> {
        u.div_exact(v)
    }

    /// Power-series inverse of a unit of S.
    pub fn invert_unit(&self, u: &Series) -> Result<Series> {
        u.invert_unit()
    }
}

/// Test helper: build a context from type letter and rank.
#[doc(hidden)]
pub fn test_ctx(
    letter: char,
    rank: usize,
    lat: crate::rootdata::LatticeKind,
    kind: crate::fgl::FglKind,
    ring: Ring,
    trunc: u32,
) -> FgaCtx {
    FgaCtx::build(
        crate::rootdata::CartanType::new(letter, rank).unwrap(),
        lat,
        kind,
        ring,
        trunc,
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::FglKind;
    use crate::rootdata::LatticeKind;

    use super::test_ctx as ctx;

    #[test]
    fn x_alpha_is_2x_omega_additive() {
        let c = ctx('A', 1, LatticeKind::SimplyConnected, FglKind::Additive, Ring::Int, 6);
        let xa = c.x_lambda(&[2]);
        assert_eq!(xa, c.var(0).scale(2));
        assert_eq!(c.x_lambda(&[1]), c.var(0));
    }

    #[test]
    fn x_negative_multiplicative() {
        let c = ctx(
            'A',
            1,
            LatticeKind::SimplyConnected,
            FglKind::Multiplicative { beta: 1 },
            Ring::Int,
            5,
        );
        // x_{-omega} = -x - x^2 - x^3 - ...
        let x = c.var(0);
        let mut expect = c.zero();
        for k in 1..=5u32 {
            expect = expect.add(&x.pow(k).scale(-1));
        }
        assert!(c.x_lambda(&[-1]).eq_to_prec(&expect));
    }

    #[test]
    fn weyl_act_examples() {
        let c = ctx('A', 1, LatticeKind::SimplyConnected, FglKind::Additive, Ring::Int, 6);
        let s = c.simple_index(0);
        assert_eq!(c.weyl_act(s, &c.var(0)), c.var(0).neg());

        let c2 = ctx('A', 2, LatticeKind::SimplyConnected, FglKind::Additive, Ring::Int, 6);
        let s1 = c2.simple_index(0);
        // s_1(x_{omega_1}) = x_{omega_2} - x_{omega_1} for the additive law
        let got = c2.weyl_act(s1, &c2.var(0));
        let expect = c2.var(1).sub(&c2.var(0));
        assert_eq!(got, expect);
        // identity acts trivially
        assert_eq!(c2.weyl_act(c2.weyl.identity(), &c2.var(0)), c2.var(0));
    }

    #[test]
    fn divided_difference_examples() {
        // A_1 sc, additive: Delta(x_alpha) = -2, Delta(x_omega) = -1.
        let c = ctx('A', 1, LatticeKind::SimplyConnected, FglKind::Additive, Ring::Int, 6);
        assert_eq!(c.divided_difference(0, &c.x_lambda(&[2])).unwrap(), c.constant(-2));
        assert_eq!(c.divided_difference(0, &c.var(0)).unwrap(), c.constant(-1));
        // W-invariant input gives zero.
        let inv = c.var(0).mul(&c.var(0)); // x^2 is s-invariant in rank 1
        assert!(c.divided_difference(0, &inv).unwrap().is_zero());
    }

    #[test]
    fn kappa_values() {
        let add = ctx('B', 2, LatticeKind::SimplyConnected, FglKind::Additive, Ring::Int, 6);
        for i in 0..2 {
            assert!(add.kappa(i).is_zero());
        }
        let mult = ctx(
            'A',
            2,
            LatticeKind::Adjoint,
            FglKind::Multiplicative { beta: 7 },
            Ring::Int,
            6,
        );
        for i in 0..2 {
            assert_eq!(mult.kappa(i), mult.constant(7));
        }
        let hyp0 = ctx(
            'A',
            1,
            LatticeKind::SimplyConnected,
            FglKind::Hyperbolic { mu1: 5, mu2: 0 },
            Ring::Int,
            6,
        );
        assert_eq!(hyp0.kappa(0), hyp0.constant(5));
    }

    #[test]
    fn decomposition_identity() {
        // u = s_i(u) + x_{-i} * Delta_{-i}(u), exactly to precision.
        let c = ctx(
            'B',
            2,
            LatticeKind::SimplyConnected,
            FglKind::Hyperbolic { mu1: 1, mu2: 2 },
            Ring::Int,
            6,
        );
        let u = c.var(0).mul(&c.var(1)).add(&c.var(0).pow(2)).add(&c.var(1));
        for i in 0..2 {
            let d = c.divided_difference(i, &u).unwrap();
            let alpha = c.weyl.datum.simple_root(i);
            let neg: Vec<i64> = alpha.iter().map(|x| -x).collect();
            let xni = c.x_lambda(&neg);
            let rhs = c.weyl_act(c.simple_index(i), &u).add(&xni.mul(&d));
            assert!(u.eq_to_prec(&rhs));
        }
    }

    #[test]
    fn weyl_action_is_group_action() {
        use rand::{Rng, SeedableRng};
        let c = ctx('B', 2, LatticeKind::Adjoint, FglKind::Multiplicative { beta: 1 }, Ring::Int, 5);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let mut u = c.zero();
            for _ in 0..4 {
                let e0 = rng.gen_range(0..3u32);
                let e1 = rng.gen_range(0..2u32);
                let coef = rng.gen_range(-2..3i128);
                let term = c.var(0).pow(e0).mul(&c.var(1).pow(e1)).scale(coef);
                u = u.add(&term);
            }
            for a in 0..c.weyl.size() {
                for b in 0..c.weyl.size() {
                    let ab = c.weyl.mul(a, b);
                    let lhs = c.weyl_act(a, &c.weyl_act(b, &u));
                    let rhs = c.weyl_act(ab, &u);
                    assert!(lhs.eq_to_prec(&rhs), "a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn additive_grading_preserved() {
        let c = ctx('A', 2, LatticeKind::SimplyConnected, FglKind::Additive, Ring::Int, 8);
        let u = c.var(0).mul(&c.var(1)); // homogeneous of degree 2
        for i in 0..2 {
            let a = c.weyl_act(c.simple_index(i), &u);
            assert!(a.terms().all(|(e, _)| crate::series::exp_deg(e) == 2));
            let d = c.divided_difference(i, &u).unwrap();
            assert!(d.terms().all(|(e, _)| crate::series::exp_deg(e) == 1));
        }
    }
}
