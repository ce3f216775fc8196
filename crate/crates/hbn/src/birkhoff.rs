//! Constructive splitting of an invertible Laurent transition matrix:
//! M = L * D * R with L unimodular over F_p[t^-1], R unimodular over F_p[t],
//! and D a diagonal of monomials t^(-e_i).
//!
//! The engine alternates three exact elimination stages:
//!
//! 1. Hermite triangularization by column operations over F_p[t]. When the
//!    determinant is a unit of the Laurent ring the resulting diagonal is
//!    forced to consist of monomials.
//! 2. Window stripping. A monomial diagonal pivot t^d kills, in one shot,
//!    all exponents <= d in its column (row operations over F_p[t^-1]) and
//!    all exponents >= d in its row (column operations over F_p[t]). A
//!    single descending row pass followed by ascending column passes leaves
//!    every below-diagonal entry supported strictly between the two
//!    neighbouring diagonal exponents.
//! 3. Residual resolution. A leftover window entry at (i, j) is removed by
//!    an exact 2x2 Bezout row operation over F_p[t^-1] that replaces the
//!    diagonal exponent pair (d_j, d_i) by a strictly more balanced pair.
//!    Each such step strictly decreases the u-invariant of the candidate
//!    type, which bounds the number of outer iterations.
//!
//! Correctness is not trusted: the factors are remultiplied and compared
//! with the input before returning.

use thiserror::Error;

use crate::field::FieldElem;
use crate::laurent::LaurentPoly;
use crate::matrix::{LaurentMatrix, MatrixError};
use crate::splitting::SplittingType;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BirkhoffError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("internal factorization failure: {0}")]
    Internal(String),
}

/// Exact factorization M = left * diag(t^(-e_i)) * right.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub left: LaurentMatrix,
    pub splitting: SplittingType,
    pub right: LaurentMatrix,
}

impl Factorization {
    pub fn diagonal(&self) -> LaurentMatrix {
        LaurentMatrix::diag_transition(&self.splitting, self.left.prime())
    }

    /// left * D * right; equals the factored matrix entry for entry.
    pub fn reassemble(&self) -> LaurentMatrix {
        self.left.mul(&self.diagonal()).mul(&self.right)
    }
}

pub fn birkhoff_factorize(m: &LaurentMatrix) -> Result<Factorization, BirkhoffError> {
    let k = m.size();
    let prime = m.prime();
    let mut b = m.clone();
    let mut left = LaurentMatrix::identity(k, prime);
    let mut right = LaurentMatrix::identity(k, prime);

    let mut cap: Option<i64> = None;
    loop {
        hermite_triangularize(&mut b, &mut right)?;
        let diag = diagonal_exponents(&b)?;
        strip_low_parts(&mut b, &mut left, &diag);
        strip_high_parts(&mut b, &mut right, &diag);

        let candidate = SplittingType::new(diag.iter().map(|d| -d).collect())
            .expect("diagonal of a nonempty matrix");
        if std::env::var_os("HBN_TRACE_FACTOR").is_some() {
            eprintln!("candidate {candidate} u {}", candidate.u_invariant());
        }
        let budget = cap.get_or_insert(candidate.u_invariant() + 2 * k as i64 + 8);
        if *budget < 0 {
            return Err(BirkhoffError::Internal("iteration budget exhausted".into()));
        }
        *budget -= 1;

        match first_residual(&b) {
            None => break,
            Some((i, j)) => resolve_residual(&mut b, &mut left, i, j, &diag),
        }
    }

    normalize_and_sort(&mut b, &mut left, &mut right);
    let entries: Vec<i64> = (0..k).map(|i| -b.get(i, i).ord().unwrap()).collect();
    let splitting = SplittingType::new(entries).expect("nonempty diagonal");

    let fact = Factorization { left, splitting, right };
    if fact.reassemble() != *m {
        return Err(BirkhoffError::Internal("factors do not reproduce the input".into()));
    }
    if !fact.left.is_antipolynomial() || !fact.right.is_polynomial() {
        return Err(BirkhoffError::Internal("factor left the allowed subring".into()));
    }
    Ok(fact)
}

/// row_i += q * row_j on b, compensated on the left factor.
fn apply_row_op(b: &mut LaurentMatrix, left: &mut LaurentMatrix, i: usize, j: usize, q: &LaurentPoly) {
    b.row_op(i, j, q);
    let neg = q.neg();
    left.col_op(j, i, &neg);
}

/// col_j += q * col_i on b, compensated on the right factor.
fn apply_col_op(b: &mut LaurentMatrix, right: &mut LaurentMatrix, j: usize, i: usize, q: &LaurentPoly) {
    b.col_op(j, i, q);
    let neg = q.neg();
    right.row_op(i, j, &neg);
}

fn apply_col_swap(b: &mut LaurentMatrix, right: &mut LaurentMatrix, a: usize, c: usize) {
    b.swap_cols(a, c);
    right.swap_rows(a, c);
}

/// Lower-triangularization by column operations over F_p[t]. Fails when a
/// pivot row dies (singular matrix) or a diagonal entry refuses to become a
/// monomial (determinant not a unit of the Laurent ring).
fn hermite_triangularize(b: &mut LaurentMatrix, right: &mut LaurentMatrix) -> Result<(), BirkhoffError> {
    let k = b.size();
    for row in 0..k {
        loop {
            let nonzero: Vec<usize> = (row..k).filter(|&j| !b.get(row, j).is_zero()).collect();
            match nonzero.len() {
                0 => return Err(BirkhoffError::Matrix(MatrixError::SingularMatrix)),
                1 => {
                    apply_col_swap(b, right, row, nonzero[0]);
                    break;
                }
                _ => {
                    let pivot = *nonzero
                        .iter()
                        .min_by_key(|&&j| b.get(row, j).max_exp().unwrap())
                        .unwrap();
                    for &j in &nonzero {
                        if j == pivot {
                            continue;
                        }
                        let (q, _rem) = b.get(row, j).div_rem_leading(b.get(row, pivot));
                        let neg = q.neg();
                        apply_col_op(b, right, j, pivot, &neg);
                    }
                }
            }
        }
    }
    Ok(())
}

/// Diagonal exponents of the triangular form; errors unless every diagonal
/// entry is a monomial, which is exactly invertibility over the Laurent ring.
fn diagonal_exponents(b: &LaurentMatrix) -> Result<Vec<i64>, BirkhoffError> {
    let mut out = Vec::with_capacity(b.size());
    for i in 0..b.size() {
        let d = b.get(i, i);
        if !d.is_monomial() {
            return Err(BirkhoffError::Matrix(MatrixError::NotInvertible(b.det().to_string())));
        }
        out.push(d.ord().unwrap());
    }
    Ok(out)
}

/// W1: one descending pass of row operations; afterwards every entry below
/// the diagonal has all exponents > d_j. Side effects flow strictly into
/// columns not yet processed.
fn strip_low_parts(b: &mut LaurentMatrix, left: &mut LaurentMatrix, diag: &[i64]) {
    let k = b.size();
    for j in (0..k).rev() {
        let d_j = diag[j];
        let c_j = b.get(j, j).coeff(d_j);
        for i in j + 1..k {
            let (low, _) = b.get(i, j).split_at(d_j);
            if low.is_zero() {
                continue;
            }
            let q = low.div_monomial(c_j, d_j).neg();
            apply_row_op(b, left, i, j, &q);
        }
    }
}

/// W2: per column, one ascending pass of column operations; afterwards every
/// entry below the diagonal is supported in the open window (d_j, d_i).
/// The stripped material sits above d_j, so the invariant from W1 survives.
fn strip_high_parts(b: &mut LaurentMatrix, right: &mut LaurentMatrix, diag: &[i64]) {
    let k = b.size();
    for j in 0..k {
        for i in j + 1..k {
            let d_i = diag[i];
            let c_i = b.get(i, i).coeff(d_i);
            let (_, high) = b.get(i, j).split_at(d_i - 1);
            if high.is_zero() {
                continue;
            }
            let q = high.div_monomial(c_i, d_i).neg();
            apply_col_op(b, right, j, i, &q);
        }
    }
}

fn first_residual(b: &LaurentMatrix) -> Option<(usize, usize)> {
    let k = b.size();
    for j in 0..k {
        for i in j + 1..k {
            if !b.get(i, j).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Removes the window residual at (i, j) with an exact 2x2 row operation
/// over F_p[t^-1] built from a truncated power-series inverse. The diagonal
/// pair (d_j, d_i) becomes (v, d_i + d_j - v) for v = max_exp of the
/// residual, strictly inside the old gap.
fn resolve_residual(b: &mut LaurentMatrix, left: &mut LaurentMatrix, i: usize, j: usize, diag: &[i64]) {
    let prime = b.prime();
    let res = b.get(i, j).clone();
    let v = res.max_exp().unwrap();
    let d_j = diag[j];
    let c_j = b.get(j, j).coeff(d_j);
    debug_assert!(d_j < v && v < diag[i], "residual outside its window");

    // In s = t^-1: p1 = c_j s^beta, p2 = residual / t^v with p2(s=0) != 0.
    let beta = v - d_j;
    let p1 = LaurentPoly::monomial(c_j, -beta);
    let p2 = res.mul_monomial(FieldElem::one(prime), -v);

    // beta_coef = p2^(-1) mod s^beta, so alpha*p1 + beta_coef*p2 = 1 exactly.
    let beta_coef = series_inverse_mod(&p2, beta as usize);
    let one = LaurentPoly::one(prime);
    let alpha = one.sub(&beta_coef.mul(&p2)).mul_monomial(c_j.inv(), beta);
    debug_assert!(alpha.is_antipolynomial() && beta_coef.is_antipolynomial());
    debug_assert_eq!(alpha.mul(&p1).add(&beta_coef.mul(&p2)), LaurentPoly::one(prime));

    // B rows: [row_j; row_i] <- [[alpha, beta],[-p2, p1]] * [row_j; row_i]
    let k = b.size();
    for c in 0..k {
        let old_j = b.get(j, c).clone();
        let old_i = b.get(i, c).clone();
        b.set(j, c, alpha.mul(&old_j).add(&beta_coef.mul(&old_i)));
        b.set(i, c, p1.mul(&old_i).sub(&p2.mul(&old_j)));
    }
    // L columns: inverse block [[p1, -beta],[p2, alpha]] applied on the right
    for r in 0..k {
        let old_j = left.get(r, j).clone();
        let old_i = left.get(r, i).clone();
        left.set(r, j, old_j.mul(&p1).add(&old_i.mul(&p2)));
        left.set(r, i, old_i.mul(&alpha).sub(&old_j.mul(&beta_coef)));
    }
}

/// Inverse of a power series in s = t^-1 (given as a Laurent polynomial with
/// exponents <= 0 and nonzero constant term), truncated below s^n.
fn series_inverse_mod(p: &LaurentPoly, n: usize) -> LaurentPoly {
    let prime = p.prime();
    let c0 = p.coeff(0);
    debug_assert!(!c0.is_zero());
    let c0_inv = c0.inv();
    let mut inv = vec![FieldElem::zero(prime); n];
    if n > 0 {
        inv[0] = c0_inv;
    }
    for m in 1..n {
        let mut acc = FieldElem::zero(prime);
        for l in 1..=m {
            let pl = p.coeff(-(l as i64));
            if !pl.is_zero() && !inv[m - l].is_zero() {
                acc += pl * inv[m - l];
            }
        }
        inv[m] = -(c0_inv * acc);
    }
    let mut out = LaurentPoly::zero(prime);
    for (m, c) in inv.into_iter().enumerate() {
        out.add_term(-(m as i64), c);
    }
    out
}

/// Scales the diagonal constants to one and sorts the diagonal so the
/// recovered splitting type is weakly increasing.
fn normalize_and_sort(b: &mut LaurentMatrix, left: &mut LaurentMatrix, right: &mut LaurentMatrix) {
    let k = b.size();
    for j in 0..k {
        let d = b.get(j, j).ord().unwrap();
        let c = b.get(j, j).coeff(d);
        if c.value() != 1 {
            b.scale_col(j, c.inv());
            right.scale_row(j, c);
        }
    }
    // order by diagonal exponent descending = splitting entries ascending
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by_key(|&i| -b.get(i, i).ord().unwrap());
    let prime = b.prime();
    let mut nb = LaurentMatrix::identity(k, prime);
    let mut nl = LaurentMatrix::identity(k, prime);
    let mut nr = LaurentMatrix::identity(k, prime);
    for r in 0..k {
        for c in 0..k {
            nb.set(r, c, b.get(idx[r], idx[c]).clone());
            nl.set(r, c, left.get(r, idx[c]).clone());
            nr.set(r, c, right.get(idx[r], c).clone());
        }
    }
    *b = nb;
    *left = nl;
    *right = nr;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Prime;
    use crate::matrix::{random_unimodular_antipoly, random_unimodular_poly};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p101() -> Prime {
        Prime::new(101).unwrap()
    }

    fn st(values: &[i64]) -> SplittingType {
        SplittingType::new(values.to_vec()).unwrap()
    }

    fn matrix(p: Prime, k: usize, entries: &[&[(i64, i64)]]) -> LaurentMatrix {
        let polys: Vec<LaurentPoly> = entries.iter().map(|e| LaurentPoly::from_terms(p, e)).collect();
        LaurentMatrix::new(k, p, polys).unwrap()
    }

    #[test]
    fn worked_two_by_two() {
        let p = p101();
        // hand reduction gives the balanced type (0, 0)
        let m = matrix(p, 2, &[&[(1, 1)], &[(0, 1)], &[], &[(-1, 1)]]);
        let f = birkhoff_factorize(&m).unwrap();
        assert_eq!(f.splitting, st(&[0, 0]));
        assert_eq!(f.reassemble(), m);
    }

    #[test]
    fn worked_two_by_two_unbalanced() {
        let p = p101();
        let m = matrix(p, 2, &[&[(2, 1)], &[(0, 1)], &[], &[(-1, 1)]]);
        let f = birkhoff_factorize(&m).unwrap();
        assert_eq!(f.splitting, st(&[-1, 0]));
        assert_eq!(f.reassemble(), m);
    }

    #[test]
    fn identity_scramble_roundtrip() {
        let p = p101();
        let e = st(&[-2, 0, 3]);
        let d = LaurentMatrix::diag_transition(&e, p);
        let f = birkhoff_factorize(&d).unwrap();
        assert_eq!(f.splitting, e);
        assert_eq!(f.reassemble(), d);
    }

    #[test]
    fn splitting_sum_matches_det_order() {
        let p = p101();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let e = st(&[rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(-3..=3)]);
            let d = LaurentMatrix::diag_transition(&e, p);
            let l = random_unimodular_antipoly(3, p, 10, &mut rng);
            let r = random_unimodular_poly(3, p, 10, &mut rng);
            let m = l.mul(&d).mul(&r);
            let f = birkhoff_factorize(&m).unwrap();
            assert_eq!(f.splitting, e, "scramble changed the type");
            assert_eq!(f.reassemble(), m);
            let det = m.det();
            assert_eq!(f.splitting.total(), -det.ord().unwrap());
            let dl = f.left.det();
            assert!(dl.is_monomial() && dl.ord() == Some(0), "left det {dl}");
            let dr = f.right.det();
            assert!(dr.is_monomial() && dr.ord() == Some(0), "right det {dr}");
        }
    }

    #[test]
    fn rejects_singular() {
        let p = p101();
        let polys = vec![
            LaurentPoly::one(p),
            LaurentPoly::one(p),
            LaurentPoly::one(p),
            LaurentPoly::one(p),
        ];
        let m = LaurentMatrix::from_entries_unchecked(2, p, polys).unwrap();
        assert!(birkhoff_factorize(&m).is_err());
    }
}
