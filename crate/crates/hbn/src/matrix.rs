//! Square matrices over F_p[t, t^-1] used as transition matrices presenting
//! vector bundles on the projective line.
//!
//! Invertibility over the Laurent ring means the determinant is a unit
//! c * t^m with c != 0; the checked constructor enforces this.

use rand::Rng;
use thiserror::Error;

use crate::field::{FieldElem, Prime};
use crate::laurent::LaurentPoly;
use crate::splitting::SplittingType;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix must be square and nonempty, got {0} entries for size {1}")]
    BadShape(usize, usize),
    #[error("determinant {0} is not a unit of F_p[t, t^-1]; matrix is not invertible")]
    NotInvertible(String),
    #[error("determinant is zero; matrix is not invertible")]
    SingularMatrix,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("mixed primes in matrix entries")]
    MixedPrimes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    size: usize,
    prime: Prime,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    /// Checked constructor: verifies the determinant is a unit c * t^m.
    pub fn new(size: usize, prime: Prime, entries: Vec<LaurentPoly>) -> Result<Self, MatrixError> {
        let m = Self::from_entries_unchecked(size, prime, entries)?;
        let det = m.det();
        if det.is_zero() {
            return Err(MatrixError::SingularMatrix);
        }
        if !det.is_monomial() {
            return Err(MatrixError::NotInvertible(det.to_string()));
        }
        Ok(m)
    }

    /// Internal constructor for matrices invertible by construction
    /// (diagonals, products of elementary factors, extension blocks).
    pub(crate) fn from_entries_unchecked(
        size: usize,
        prime: Prime,
        entries: Vec<LaurentPoly>,
    ) -> Result<Self, MatrixError> {
        if size == 0 || entries.len() != size * size {
            return Err(MatrixError::BadShape(entries.len(), size));
        }
        if entries.iter().any(|e| e.prime() != prime) {
            return Err(MatrixError::MixedPrimes);
        }
        Ok(LaurentMatrix { size, prime, entries })
    }

    pub fn identity(size: usize, prime: Prime) -> Self {
        let mut entries = vec![LaurentPoly::zero(prime); size * size];
        for i in 0..size {
            entries[i * size + i] = LaurentPoly::one(prime);
        }
        LaurentMatrix { size, prime, entries }
    }

    /// Diagonal transition matrix for the split bundle with the given type:
    /// the summand of twist e is presented by the 1x1 transition t^(-e).
    pub fn diag_transition(e: &SplittingType, prime: Prime) -> Self {
        let k = e.len();
        let mut m = Self::identity(k, prime);
        for (i, &ei) in e.entries().iter().enumerate() {
            m.entries[i * k + i] = LaurentPoly::monomial(FieldElem::one(prime), -ei);
        }
        m
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.size + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.size + j] = v;
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.max_exp()).max()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.ord()).min()
    }

    pub fn is_polynomial(&self) -> bool {
        self.entries.iter().all(|e| e.is_polynomial())
    }

    pub fn is_antipolynomial(&self) -> bool {
        self.entries.iter().all(|e| e.is_antipolynomial())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.size, rhs.size, "size mismatch in matrix product");
        let k = self.size;
        let mut entries = vec![LaurentPoly::zero(self.prime); k * k];
        for i in 0..k {
            for l in 0..k {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..k {
                    let b = rhs.get(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    entries[i * k + j] = entries[i * k + j].add(&a.mul(b));
                }
            }
        }
        LaurentMatrix { size: k, prime: self.prime, entries }
    }

    /// Determinant by dynamic programming over column subsets (signed
    /// expansion along rows); fine for the sizes this crate handles.
    pub fn det(&self) -> LaurentPoly {
        let k = self.size;
        let full: usize = (1 << k) - 1;
        // state[mask] = signed sum over ways to fill the first popcount(mask)
        // rows using exactly the columns in mask
        let mut state = vec![None::<LaurentPoly>; 1 << k];
        state[0] = Some(LaurentPoly::one(self.prime));
        for mask in 0..full {
            let Some(acc) = state[mask].take() else { continue };
            if acc.is_zero() && mask != 0 {
                continue;
            }
            let row = (mask as u32).count_ones() as usize;
            for j in 0..k {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let entry = self.get(row, j);
                if entry.is_zero() {
                    continue;
                }
                // assigning column j after the columns in mask adds one
                // inversion per already-used column above j
                let sign_neg = ((mask >> (j + 1)).count_ones() % 2) == 1;
                let term = if sign_neg { acc.mul(entry).neg() } else { acc.mul(entry) };
                let slot = &mut state[mask | (1 << j)];
                match slot {
                    Some(existing) => *existing = existing.add(&term),
                    None => *slot = Some(term),
                }
            }
        }
        state[full].take().unwrap_or_else(|| LaurentPoly::zero(self.prime))
    }

    // --- elementary operations (used by the factorization engine) ---

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.size {
            self.entries.swap(a * self.size + j, b * self.size + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.size {
            self.entries.swap(i * self.size + a, i * self.size + b);
        }
    }

    /// row_i += q * row_j
    pub(crate) fn row_op(&mut self, i: usize, j: usize, q: &LaurentPoly) {
        assert_ne!(i, j);
        if q.is_zero() {
            return;
        }
        for c in 0..self.size {
            let add = q.mul(self.get(j, c));
            if !add.is_zero() {
                let v = self.get(i, c).add(&add);
                self.set(i, c, v);
            }
        }
    }

    /// col_j += q * col_i
    pub(crate) fn col_op(&mut self, j: usize, i: usize, q: &LaurentPoly) {
        assert_ne!(i, j);
        if q.is_zero() {
            return;
        }
        for r in 0..self.size {
            let add = q.mul(self.get(r, i));
            if !add.is_zero() {
                let v = self.get(r, j).add(&add);
                self.set(r, j, v);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: FieldElem) {
        for col in 0..self.size {
            let v = self.get(i, col).scale(c);
            self.set(i, col, v);
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, c: FieldElem) {
        for row in 0..self.size {
            let v = self.get(row, j).scale(c);
            self.set(row, j, v);
        }
    }

    // --- text format ---
    //
    // line 1: "p k". Then k^2 lines, row-major; each line is a Laurent
    // polynomial written as space-separated coeff^exponent pairs, e.g.
    // "1^-2 5^0 3^1". An empty line is the zero entry.

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.prime.get(), self.size);
        for entry in &self.entries {
            let line: Vec<String> =
                entry.terms().map(|(e, c)| format!("{}^{}", c.value(), e)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self, MatrixError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| MatrixError::Parse("empty input".into()))?;
        let mut parts = header.split_whitespace();
        let p: u64 = parts
            .next()
            .ok_or_else(|| MatrixError::Parse("missing prime in header".into()))?
            .parse()
            .map_err(|e| MatrixError::Parse(format!("bad prime: {e}")))?;
        let k: usize = parts
            .next()
            .ok_or_else(|| MatrixError::Parse("missing size in header".into()))?
            .parse()
            .map_err(|e| MatrixError::Parse(format!("bad size: {e}")))?;
        if parts.next().is_some() {
            return Err(MatrixError::Parse("trailing tokens in header".into()));
        }
        if k == 0 {
            return Err(MatrixError::Parse("size must be positive".into()));
        }
        let prime = Prime::new(p).map_err(|e| MatrixError::Parse(e.to_string()))?;
        let mut entries = Vec::with_capacity(k * k);
        for idx in 0..k * k {
            let line = lines
                .next()
                .ok_or_else(|| MatrixError::Parse(format!("expected {} entries, got {}", k * k, idx)))?;
            let mut poly = LaurentPoly::zero(prime);
            for token in line.split_whitespace() {
                let (c_str, e_str) = token
                    .split_once('^')
                    .ok_or_else(|| MatrixError::Parse(format!("bad term '{token}'")))?;
                let c: i64 = c_str
                    .parse()
                    .map_err(|e| MatrixError::Parse(format!("bad coefficient '{c_str}': {e}")))?;
                let e: i64 = e_str
                    .parse()
                    .map_err(|e| MatrixError::Parse(format!("bad exponent '{e_str}': {e}")))?;
                poly.add_term(e, FieldElem::new(c, prime));
            }
            entries.push(poly);
        }
        for extra in lines {
            if !extra.trim().is_empty() {
                return Err(MatrixError::Parse("trailing non-empty lines".into()));
            }
        }
        Self::new(k, prime, entries)
    }
}

/// Random unimodular matrix over F_p[t] (unit determinant), built from
/// elementary column operations, swaps and constant scalings.
pub fn random_unimodular_poly<R: Rng>(k: usize, prime: Prime, steps: usize, rng: &mut R) -> LaurentMatrix {
    random_unimodular(k, prime, steps, rng, false)
}

/// Random unimodular matrix over F_p[t^-1].
pub fn random_unimodular_antipoly<R: Rng>(
    k: usize,
    prime: Prime,
    steps: usize,
    rng: &mut R,
) -> LaurentMatrix {
    random_unimodular(k, prime, steps, rng, true)
}

fn random_unimodular<R: Rng>(
    k: usize,
    prime: Prime,
    steps: usize,
    rng: &mut R,
    negative_exponents: bool,
) -> LaurentMatrix {
    let mut m = LaurentMatrix::identity(k, prime);
    for _ in 0..steps {
        match rng.gen_range(0..4u8) {
            0 => {
                let a = rng.gen_range(0..k);
                let b = rng.gen_range(0..k);
                m.swap_rows(a, b.min(k - 1));
            }
            1 => {
                let i = rng.gen_range(0..k);
                let c = FieldElem::new(rng.gen_range(1..i64::from(prime.get())), prime);
                m.scale_row(i, c);
            }
            _ => {
                if k < 2 {
                    continue;
                }
                let i = rng.gen_range(0..k);
                let mut j = rng.gen_range(0..k);
                if i == j {
                    j = (j + 1) % k;
                }
                let mut q = LaurentPoly::zero(prime);
                for _ in 0..rng.gen_range(1..=2) {
                    let e = if negative_exponents {
                        -rng.gen_range(0..=3i64)
                    } else {
                        rng.gen_range(0..=3i64)
                    };
                    q.add_term(e, FieldElem::new(rng.gen_range(0..i64::from(prime.get())), prime));
                }
                if rng.gen_bool(0.5) {
                    m.row_op(i, j, &q);
                } else {
                    m.col_op(i, j, &q);
                }
            }
        }
    }
    m
}
