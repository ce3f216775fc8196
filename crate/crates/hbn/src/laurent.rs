//! Laurent polynomials over F_p: finite maps from integer exponents to
//! nonzero coefficients. The zero polynomial is the empty map.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{FieldElem, Prime};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    prime: Prime,
    coeffs: BTreeMap<i64, FieldElem>,
}

impl LaurentPoly {
    pub fn zero(prime: Prime) -> Self {
        LaurentPoly { prime, coeffs: BTreeMap::new() }
    }

    pub fn one(prime: Prime) -> Self {
        Self::monomial(FieldElem::one(prime), 0)
    }

    /// c * t^e; collapses to zero when c = 0.
    pub fn monomial(c: FieldElem, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        LaurentPoly { prime: c.prime(), coeffs }
    }

    pub fn from_terms(prime: Prime, terms: &[(i64, i64)]) -> Self {
        let mut poly = Self::zero(prime);
        for &(e, c) in terms {
            poly.add_term(e, FieldElem::new(c, prime));
        }
        poly
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> FieldElem {
        self.coeffs.get(&e).copied().unwrap_or_else(|| FieldElem::zero(self.prime))
    }

    /// Smallest exponent with nonzero coefficient.
    pub fn ord(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Largest exponent with nonzero coefficient.
    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, FieldElem)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    /// Single-term check; the units of F_p[t, t^-1] are exactly these.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// True when every exponent is >= 0 (lies in F_p[t]).
    pub fn is_polynomial(&self) -> bool {
        self.ord().map_or(true, |o| o >= 0)
    }

    /// True when every exponent is <= 0 (lies in F_p[t^-1]).
    pub fn is_antipolynomial(&self) -> bool {
        self.max_exp().map_or(true, |m| m <= 0)
    }

    pub fn add_term(&mut self, e: i64, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&e) {
            Some(existing) => {
                let sum = *existing + c;
                if sum.is_zero() {
                    self.coeffs.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.prime);
        for (e, c) in self.terms() {
            out.coeffs.insert(e, -c);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.prime);
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, c: FieldElem, e: i64) -> Self {
        if c.is_zero() {
            return Self::zero(self.prime);
        }
        let mut out = Self::zero(self.prime);
        for (e1, c1) in self.terms() {
            out.coeffs.insert(e1 + e, c1 * c);
        }
        out
    }

    pub fn scale(&self, c: FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero(self.prime);
        }
        let mut out = Self::zero(self.prime);
        for (e1, c1) in self.terms() {
            out.coeffs.insert(e1, c1 * c);
        }
        out
    }

    /// Splits into (terms with exponent <= cut, terms with exponent > cut).
    pub fn split_at(&self, cut: i64) -> (Self, Self) {
        let mut low = Self::zero(self.prime);
        let mut high = Self::zero(self.prime);
        for (e, c) in self.terms() {
            if e <= cut {
                low.coeffs.insert(e, c);
            } else {
                high.coeffs.insert(e, c);
            }
        }
        (low, high)
    }

    /// Quotient of self by a monomial divisor c * t^e.
    pub fn div_monomial(&self, c: FieldElem, e: i64) -> Self {
        self.mul_monomial(c.inv(), -e)
    }

    /// Leading-term division: self = q * rhs + rem with
    /// max_exp(rem) < max_exp(rhs). Requires rhs != 0. Every quotient step
    /// shifts by max_exp(self) - max_exp(rhs) >= 0, so q lies in F_p[t].
    pub fn div_rem_leading(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let d_lead = rhs.max_exp().unwrap();
        let d_inv = rhs.coeff(d_lead).inv();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.prime);
        while let Some(r_lead) = rem.max_exp() {
            if r_lead < d_lead {
                break;
            }
            let factor = rem.coeff(r_lead) * d_inv;
            let shift = r_lead - d_lead;
            quot.add_term(shift, factor);
            rem = rem.sub(&rhs.mul_monomial(factor, shift));
        }
        (quot, rem)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*t", c)?,
                _ => write!(f, "{}*t^{}", c, e)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p101() -> Prime {
        Prime::new(101).unwrap()
    }

    #[test]
    fn zero_is_empty_map() {
        let z = LaurentPoly::zero(p101());
        assert!(z.is_zero());
        assert_eq!(z.term_count(), 0);
        assert_eq!(z.ord(), None);
    }

    #[test]
    fn cancellation_removes_entries() {
        let p = p101();
        let a = LaurentPoly::from_terms(p, &[(-2, 5), (0, 1)]);
        let b = LaurentPoly::from_terms(p, &[(-2, -5), (3, 2)]);
        let s = a.add(&b);
        assert_eq!(s.coeff(-2).value(), 0);
        assert_eq!(s.term_count(), 2);
        assert_eq!(s.ord(), Some(0));
        assert_eq!(s.max_exp(), Some(3));
    }

    #[test]
    fn multiplication() {
        let p = p101();
        // (t^-1 + 1)(t - 1) = 1 + t - t^-1 - 1 = t - t^-1
        let a = LaurentPoly::from_terms(p, &[(-1, 1), (0, 1)]);
        let b = LaurentPoly::from_terms(p, &[(1, 1), (0, -1)]);
        let prod = a.mul(&b);
        assert_eq!(prod, LaurentPoly::from_terms(p, &[(1, 1), (-1, -1)]));
    }

    #[test]
    fn leading_division() {
        let p = p101();
        let a = LaurentPoly::from_terms(p, &[(-1, 2), (0, 1), (2, 3)]);
        let b = LaurentPoly::from_terms(p, &[(-1, 1), (1, 1)]);
        let (q, r) = a.div_rem_leading(&b);
        assert_eq!(q.add(&LaurentPoly::zero(p)).mul(&b).add(&r), a);
        assert!(r.max_exp().unwrap_or(i64::MIN) < b.max_exp().unwrap());
        assert!(q.is_polynomial());
    }

    #[test]
    fn split_and_monomial_division() {
        let p = p101();
        let a = LaurentPoly::from_terms(p, &[(-2, 3), (0, 4), (1, 5)]);
        let (low, high) = a.split_at(0);
        assert_eq!(low, LaurentPoly::from_terms(p, &[(-2, 3), (0, 4)]));
        assert_eq!(high, LaurentPoly::from_terms(p, &[(1, 5)]));
        let q = a.div_monomial(FieldElem::new(2, p), -1);
        assert_eq!(q.mul(&LaurentPoly::monomial(FieldElem::new(2, p), -1)), a);
    }
}
