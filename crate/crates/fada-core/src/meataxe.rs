//! Composition series of modules over a matrix algebra given by generators:
//! randomized chop with Norton's irreducibility certificate, adapted flag
//! bases, and exact Hom-space dimensions between simple modules by the
//! seed-parametrization solve.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fp::{poly_deg, poly_factor, FpMat, Subspace};

#[derive(Clone, Debug)]
pub struct Rep {
    pub p: u64,
    pub dim: usize,
    pub gens: Vec<FpMat>,
}

impl Rep {
    pub fn new(p: u64, dim: usize, gens: Vec<FpMat>) -> Self {
        for g in &gens {
            assert_eq!((g.rows, g.cols), (dim, dim));
        }
        Rep { p, dim, gens }
    }

    fn transpose(&self) -> Rep {
        Rep {
            p: self.p,
            dim: self.dim,
            gens: self.gens.iter().map(|g| g.transpose()).collect(),
        }
    }
}

/// Closure of a vector under the generators.
pub fn spin(rep: &Rep, v: &[u64]) -> Subspace {
    let mut sub = Subspace::new(rep.p, rep.dim);
    if !sub.insert(v.to_vec()) {
        return sub;
    }
    let mut queue = vec![sub.rows.last().unwrap().clone()];
    while let Some(w) = queue.pop() {
        for g in &rep.gens {
            let img = g.apply(&w);
            if sub.insert(img) {
                queue.push(sub.rows.last().unwrap().clone());
            }
        }
    }
    sub
}

/// A random element of the generated algebra: a short word plus a random
/// linear combination of generators.
fn random_element(rep: &Rep, rng: &mut ChaCha8Rng) -> FpMat {
    let p = rep.p;
    let k = rep.gens.len();
    let mut acc = FpMat::zero(p, rep.dim, rep.dim);
    for g in &rep.gens {
        let c = rng.gen_range(0..p);
        if c != 0 {
            acc = acc.add(&g.scale(c));
        }
    }
    for _ in 0..rng.gen_range(0..3) {
        let i = rng.gen_range(0..k);
        let j = rng.gen_range(0..k);
        let c = rng.gen_range(1..p);
        acc = acc.add(&rep.gens[i].mul(&rep.gens[j]).scale(c));
    }
    if rng.gen_bool(0.3) && k > 0 {
        let i = rng.gen_range(0..k);
        acc = acc.mul(&rep.gens[i]);
    }
    acc
}

enum SubmoduleSearch {
    Proper(Vec<Vec<u64>>),
    Irreducible,
}

/// Find a proper nonzero submodule or certify irreducibility.
fn find_submodule(rep: &Rep, rng: &mut ChaCha8Rng) -> Result<SubmoduleSearch> {
    if rep.dim == 1 {
        return Ok(SubmoduleSearch::Irreducible);
    }
    // The zero algebra: every line is a submodule.
    if rep.gens.iter().all(|g| g.is_zero()) {
        let mut v = vec![0u64; rep.dim];
        v[0] = 1;
        return Ok(SubmoduleSearch::Proper(vec![v]));
    }
    const ATTEMPTS: usize = 200;
    for _ in 0..ATTEMPTS {
        let theta = random_element(rep, rng);
        let mu = theta.minpoly();
        if poly_deg(&mu) == 0 {
            continue;
        }
        let mut factors = poly_factor(&mu, rep.p, rng);
        factors.sort_by_key(|(f, _)| poly_deg(f));
        for (f, _) in &factors {
            let z = theta.poly_eval(f);
            let null = z.nullspace();
            if null.is_empty() {
                continue;
            }
            // any proper spin is a submodule, certificate or not
            for v in &null {
                let s = spin(rep, v);
                if s.rank() < rep.dim {
                    return Ok(SubmoduleSearch::Proper(s.rows.clone()));
                }
            }
            if null.len() == poly_deg(f) {
                // Norton: nullity == deg f makes both kernels cyclic, so one
                // vector decides each side.
                let tr = rep.transpose();
                let zt = z.transpose();
                let nt = zt.nullspace();
                let st = spin(&tr, &nt[0]);
                if st.rank() == rep.dim {
                    return Ok(SubmoduleSearch::Irreducible);
                }
                // the annihilator of a transposed submodule is a submodule
                let m = FpMat::from_rows(rep.p, st.rows.clone());
                let perp = m.nullspace();
                let mut sub = Subspace::new(rep.p, rep.dim);
                for v in perp {
                    sub.insert(v);
                }
                if sub.rank() == 0 || sub.rank() == rep.dim {
                    return Err(Error::SplitBudgetExceeded(
                        "inconsistent Norton split".into(),
                    ));
                }
                return Ok(SubmoduleSearch::Proper(sub.rows.clone()));
            }
        }
    }
    Err(Error::SplitBudgetExceeded(format!(
        "no decision after {ATTEMPTS} meataxe rounds (dim {})",
        rep.dim
    )))
}

/// An adapted flag: columns of `basis` list a basis of V compatible with a
/// composition series; factor k acts on the diagonal block at `ranges[k]`.
pub struct Flag {
    pub p: u64,
    pub dim: usize,
    /// columns = adapted basis vectors
    pub basis: FpMat,
    pub basis_inv: FpMat,
    pub ranges: Vec<(usize, usize)>,
    pub factors: Vec<Rep>,
}

impl Flag {
    /// Action induced on factor k by a module endomorphism-compatible matrix
    /// (any element of the generated algebra).
    pub fn action_on_factor(&self, m: &FpMat, k: usize) -> FpMat {
        let conj = self.basis_inv.mul(&m.mul(&self.basis));
        self.diagonal_block(&conj, k)
    }

    pub fn conjugate(&self, m: &FpMat) -> FpMat {
        self.basis_inv.mul(&m.mul(&self.basis))
    }

    pub fn diagonal_block(&self, conj: &FpMat, k: usize) -> FpMat {
        let (off, size) = self.ranges[k];
        let mut out = FpMat::zero(self.p, size, size);
        for i in 0..size {
            for j in 0..size {
                out.set(i, j, conj.at(off + i, off + j));
            }
        }
        out
    }
}

/// Chop a module into composition factors with an adapted flag basis.
pub fn chop(rep: &Rep, rng: &mut ChaCha8Rng) -> Result<Flag> {
    let p = rep.p;
    let dim = rep.dim;
    if dim == 0 {
        return Ok(Flag {
            p,
            dim,
            basis: FpMat::zero(p, 0, 0),
            basis_inv: FpMat::zero(p, 0, 0),
            ranges: Vec::new(),
            factors: Vec::new(),
        });
    }
    let (cols, ranges, factors) = chop_rec(rep, rng)?;
    let mut basis = FpMat::zero(p, dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..dim {
            basis.set(i, j, col[i]);
        }
    }
    let basis_inv = invert(&basis).expect("adapted basis is invertible");
    Ok(Flag { p, dim, basis, basis_inv, ranges, factors })
}

/// Returns adapted basis columns (in the ambient coordinates of `rep`),
/// factor ranges and factor actions.
fn chop_rec(
    rep: &Rep,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<Vec<u64>>, Vec<(usize, usize)>, Vec<Rep>)> {
    match find_submodule(rep, rng)? {
        SubmoduleSearch::Irreducible => {
            let cols: Vec<Vec<u64>> = (0..rep.dim)
                .map(|i| {
                    let mut v = vec![0u64; rep.dim];
                    v[i] = 1;
                    v
                })
                .collect();
            Ok((cols, vec![(0, rep.dim)], vec![rep.clone()]))
        }
        SubmoduleSearch::Proper(w_rows) => {
            let p = rep.p;
            let k = w_rows.len();
            // submodule action: express g . w_i in the echelon rows of W
            let mut wsub = Subspace::new(p, rep.dim);
            for r in &w_rows {
                wsub.insert(r.clone());
            }
            let sub_gens: Vec<FpMat> = rep
                .gens
                .iter()
                .map(|g| {
                    let mut m = FpMat::zero(p, k, k);
                    for (j, w) in wsub.rows.iter().enumerate() {
                        let img = g.apply(w);
                        let (res, coeffs) = wsub.reduce_with_coeffs(&img);
                        debug_assert!(res.iter().all(|&x| x == 0));
                        for (i, &c) in coeffs.iter().enumerate() {
                            m.set(i, j, c);
                        }
                    }
                    m
                })
                .collect();
            let sub_rep = Rep::new(p, k, sub_gens);

            // complement coordinates: standard vectors at non-pivot positions
            let pivot_set: std::collections::HashSet<usize> =
                wsub.pivots.iter().copied().collect();
            let comp: Vec<usize> = (0..rep.dim).filter(|i| !pivot_set.contains(i)).collect();
            // quotient action in complement coordinates
            let q = comp.len();
            let quot_gens: Vec<FpMat> = rep
                .gens
                .iter()
                .map(|g| {
                    let mut m = FpMat::zero(p, q, q);
                    for (j, &cj) in comp.iter().enumerate() {
                        let mut e = vec![0u64; rep.dim];
                        e[cj] = 1;
                        let img = g.apply(&e);
                        let red = wsub.reduce(&img); // kill the W part
                        for (i, &ci) in comp.iter().enumerate() {
                            m.set(i, j, red[ci]);
                        }
                    }
                    m
                })
                .collect();
            let quot_rep = Rep::new(p, q, quot_gens);

            let (sub_cols, sub_ranges, sub_factors) = chop_rec(&sub_rep, rng)?;
            let (quot_cols, quot_ranges, quot_factors) = chop_rec(&quot_rep, rng)?;

            // lift: sub columns through the W rows; quotient columns through
            // the complement standard vectors
            let mut cols: Vec<Vec<u64>> = Vec::with_capacity(rep.dim);
            for c in sub_cols {
                let mut v = vec![0u64; rep.dim];
                for (i, w) in wsub.rows.iter().enumerate() {
                    for (x, &wx) in v.iter_mut().zip(w) {
                        *x = (*x + c[i] * wx) % p;
                    }
                }
                cols.push(v);
            }
            for c in quot_cols {
                let mut v = vec![0u64; rep.dim];
                for (i, &ci) in comp.iter().enumerate() {
                    v[ci] = c[i];
                }
                cols.push(v);
            }
            let mut ranges = sub_ranges;
            for (off, size) in quot_ranges {
                ranges.push((off + k, size));
            }
            let mut factors = sub_factors;
            factors.extend(quot_factors);
            Ok((cols, ranges, factors))
        }
    }
}

fn invert(m: &FpMat) -> Option<FpMat> {
    let n = m.rows;
    let p = m.p;
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            let mut aug = vec![0u64; n];
            aug[i] = 1;
            row.extend(aug);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let inv = crate::fp::inv_mod(a[col][col], p);
        for x in a[col].iter_mut() {
            *x = *x * inv % p;
        }
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && row[col] != 0 {
                let c = row[col];
                for j in 0..2 * n {
                    row[j] = (row[j] + (p - c) * prow[j]) % p;
                }
            }
        }
    }
    let mut out = FpMat::zero(p, n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, a[i][j + n]);
        }
    }
    Some(out)
}

/// dim Hom_A(S_a, S_b) for a SIMPLE source: parametrize a hom by the image
/// u of a generating vector v and collect the linear consistency
/// constraints from the spin tree of v.
pub fn hom_dim(a: &Rep, b: &Rep) -> usize {
    assert!(a.dim > 0);
    let p = a.p;
    let mut v = vec![0u64; a.dim];
    v[0] = 1;
    // structured spin with expressions in the original spin vectors
    let mut sub = Subspace::new(p, a.dim);
    let mut exprs: Vec<Vec<u64>> = Vec::new(); // echelon row -> coords in b_k
    let mut words: Vec<FpMat> = vec![FpMat::identity(p, b.dim)]; // word operators on B
    let mut originals: Vec<Vec<u64>> = vec![v.clone()];
    sub.insert(v.clone());
    exprs.push({
        let mut e = vec![0u64; a.dim];
        e[0] = 1;
        e
    });
    let mut constraints: Vec<(FpMat, Vec<u64>)> = Vec::new(); // lhs word op vs coords
    let mut head = 0;
    while head < originals.len() {
        let parent = originals[head].clone();
        for (gi, g) in a.gens.iter().enumerate() {
            let img = g.apply(&parent);
            let (res, coeffs) = sub.reduce_with_coeffs(&img);
            // coords of img in terms of the original b_k
            let mut coords = vec![0u64; originals.len()];
            for (row_idx, &c) in coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (k, &e) in exprs[row_idx].iter().enumerate() {
                    if e != 0 && k < coords.len() {
                        coords[k] = (coords[k] + c * e) % p;
                    }
                }
            }
            if res.iter().all(|&x| x == 0) {
                // dependent: one constraint block
                constraints.push((b.gens[gi].mul(&words[head]), coords));
            } else {
                // new basis vector b_new = img; its echelon expression:
                // res = img - sum coeffs*rows, so expr(new echelon row) =
                // e_new - sum coeffs*exprs, normalized by the pivot scaling
                let piv = res.iter().position(|&x| x != 0).unwrap();
                let inv = crate::fp::inv_mod(res[piv], p);
                let mut e = vec![0u64; a.dim];
                let idx_new = originals.len();
                e[idx_new] = inv;
                for (row_idx, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for (k, &old) in exprs[row_idx].clone().iter().enumerate() {
                        e[k] = (e[k] + (p - inv * c % p) * old) % p;
                    }
                }
                // back-substitution inside sub.insert also rewrites existing
                // rows; mirror it on the expressions
                let before_rows: Vec<Vec<u64>> = sub.rows.clone();
                assert!(sub.insert(img.clone()));
                for (ri, row) in before_rows.iter().enumerate() {
                    if row != &sub.rows[ri] {
                        // row' = row - c * new_row where c = row[piv]
                        let c = row[piv];
                        for k in 0..a.dim {
                            let delta = (p - c) * e[k] % p;
                            exprs[ri][k] = (exprs[ri][k] + delta) % p;
                        }
                    }
                }
                exprs.push(e);
                originals.push(img);
                words.push(b.gens[gi].mul(&words[head]));
            }
        }
        head += 1;
    }
    let na = originals.len();
    if na < a.dim {
        // v did not generate; caller must pass a simple module
        panic!("hom_dim requires a generating vector (simple source)");
    }
    // assemble constraint matrix over u in F^{b.dim}
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (lhs, coords) in constraints {
        let mut rhs = FpMat::zero(p, b.dim, b.dim);
        for (k, &c) in coords.iter().enumerate() {
            if c != 0 {
                rhs = rhs.add(&words[k].scale(c));
            }
        }
        let diff = lhs.sub(&rhs);
        for i in 0..b.dim {
            rows.push(diff.row(i).to_vec());
        }
    }
    if rows.is_empty() {
        return b.dim;
    }
    let m = FpMat::from_rows(p, rows);
    m.nullspace().len()
}

/// Trace fingerprint under a fixed deterministic word schedule; equal for
/// isomorphic modules, cheap to compare.
pub fn fingerprint(rep: &Rep) -> Vec<u64> {
    let mut out = vec![rep.dim as u64];
    for g in &rep.gens {
        out.push(g.trace());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xFADA);
    let k = rep.gens.len().max(1);
    let mut acc = FpMat::identity(rep.p, rep.dim);
    for _ in 0..6 {
        if rep.gens.is_empty() {
            break;
        }
        let i = rng.gen_range(0..k);
        acc = acc.mul(&rep.gens[i]);
        out.push(acc.trace());
    }
    // minimal polynomial of the sum of generators, as a stable invariant
    let mut s = FpMat::zero(rep.p, rep.dim, rep.dim);
    for g in &rep.gens {
        s = s.add(g);
    }
    out.extend(s.minpoly());
    out
}

/// Are two simple modules isomorphic? Exact: dim Hom > 0.
pub fn simple_iso(a: &Rep, b: &Rep) -> bool {
    if a.dim != b.dim {
        return false;
    }
    if fingerprint(a) != fingerprint(b) {
        return false;
    }
    hom_dim(a, b) > 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(p: u64, gens: Vec<Vec<Vec<u64>>>) -> Rep {
        let dim = gens[0].len();
        Rep::new(p, dim, gens.into_iter().map(|g| FpMat::from_rows(p, g)).collect())
    }

    #[test]
    fn chop_permutation_module() {
        // S_3 permutation module over F_5: trivial + standard (2-dim simple)
        let p = 5;
        let s1 = vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]];
        let s2 = vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]];
        let r = rep(p, vec![s1, s2]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let flag = chop(&r, &mut rng).unwrap();
        let mut dims: Vec<usize> = flag.factors.iter().map(|f| f.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
        // flag basis is invertible and block-triangularizes the generators
        let id = flag.basis.mul(&flag.basis_inv);
        assert_eq!(id, FpMat::identity(p, 3));
    }

    #[test]
    fn chop_permutation_module_mod3() {
        // over F_3 the permutation module of S_3 is uniserial with three
        // 1-dim... actually factors: trivial, sign, trivial
        let p = 3;
        let s1 = vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]];
        let s2 = vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]];
        let r = rep(p, vec![s1, s2]);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let flag = chop(&r, &mut rng).unwrap();
        let dims: Vec<usize> = flag.factors.iter().map(|f| f.dim).collect();
        assert_eq!(dims.iter().sum::<usize>(), 3);
        assert_eq!(dims.len(), 3);
    }

    #[test]
    fn hom_dim_detects_iso_and_non_iso() {
        let p = 3;
        // two copies of the same 2-dim simple (GL_2 generators)
        let a = rep(p, vec![
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![1, 1], vec![0, 1]],
        ]);
        assert_eq!(hom_dim(&a, &a), 1);
        // conjugated copy: still isomorphic
        let t = FpMat::from_rows(p, vec![vec![1, 1], vec![1, 2]]);
        let tinv = invert(&t).unwrap();
        let b = Rep::new(
            p,
            2,
            a.gens.iter().map(|g| tinv.mul(&g.mul(&t))).collect(),
        );
        assert!(simple_iso(&a, &b));
        // different action: swap the generators' roles
        let c = rep(p, vec![
            vec![vec![1, 1], vec![0, 1]],
            vec![vec![0, 1], vec![1, 0]],
        ]);
        assert_eq!(hom_dim(&a, &c), 0);
    }

    #[test]
    fn endo_field_of_f4_style_simple() {
        // companion matrix of x^2+1 over F_3 generates a simple module with
        // End = F_9 (endo dim 2)
        let p = 3;
        let a = rep(p, vec![vec![vec![0, 2], vec![1, 0]]]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let flag = chop(&a, &mut rng).unwrap();
        assert_eq!(flag.factors.len(), 1);
        assert_eq!(hom_dim(&a, &a), 2);
    }

    #[test]
    fn zero_algebra_chops_to_lines() {
        let p = 2;
        let r = rep(p, vec![vec![vec![0, 0], vec![0, 0]]]);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let flag = chop(&r, &mut rng).unwrap();
        assert_eq!(flag.factors.len(), 2);
        assert!(flag.factors.iter().all(|f| f.dim == 1));
    }
}
