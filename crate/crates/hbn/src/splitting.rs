//! Splitting types: weakly increasing integer tuples recording the twists of
//! a direct sum of line bundles on the projective line, together with their
//! cohomology profiles, the dominance partial order, the u-invariant and
//! balanced-plus-balanced pattern recognition.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplittingError {
    #[error("a splitting type needs at least one entry")]
    Empty,
    #[error("incomparable splitting types: lengths {0} and {1} differ")]
    LengthMismatch(usize, usize),
    #[error("incomparable splitting types: totals {0} and {1} differ")]
    TotalMismatch(i64, i64),
    #[error("invalid balanced-plus-balanced parameters: {0}")]
    BadPattern(String),
}

/// A weakly increasing tuple e_1 <= ... <= e_k of line-bundle twists.
///
/// The derived `Ord` is lexicographic and exists only so values can live in
/// ordered containers; the geometric dominance order is [`SplittingType::leq`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplittingType {
    entries: Vec<i64>,
}

impl SplittingType {
    /// Sorts the input; rejects only the empty list.
    pub fn new(mut values: Vec<i64>) -> Result<Self, SplittingError> {
        if values.is_empty() {
            return Err(SplittingError::Empty);
        }
        values.sort_unstable();
        Ok(SplittingType { entries: values })
    }

    /// The most balanced type of the given length and total.
    pub fn balanced(k: usize, total: i64) -> Result<Self, SplittingError> {
        if k == 0 {
            return Err(SplittingError::Empty);
        }
        let kk = k as i64;
        let q = total.div_euclid(kk);
        let rem = (total - q * kk) as usize;
        let mut entries = vec![q; k];
        for e in entries.iter_mut().skip(k - rem) {
            *e += 1;
        }
        Ok(SplittingType { entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// The rank k.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total(&self) -> i64 {
        self.entries.iter().sum()
    }

    pub fn min_entry(&self) -> i64 {
        self.entries[0]
    }

    pub fn max_entry(&self) -> i64 {
        *self.entries.last().unwrap()
    }

    /// Entrywise shift by n (tensoring with the n-th power of the pencil).
    pub fn twist(&self, n: i64) -> Self {
        SplittingType { entries: self.entries.iter().map(|e| e + n).collect() }
    }

    /// Global sections of the twist by n: sum of max(0, e_i + n + 1).
    pub fn h0(&self, n: i64) -> i64 {
        self.entries.iter().map(|e| (e + n + 1).max(0)).sum()
    }

    /// First cohomology of the twist by n: sum of max(0, -e_i - n - 1).
    pub fn h1(&self, n: i64) -> i64 {
        self.entries.iter().map(|e| (-e - n - 1).max(0)).sum()
    }

    /// Sum over pairs i < j of max(0, e_j - e_i - 1): the expected
    /// codimension of the stratum and the dimension of Ext^1 of the bundle
    /// with itself.
    pub fn u_invariant(&self) -> i64 {
        let mut u = 0;
        for (i, a) in self.entries.iter().enumerate() {
            for b in &self.entries[i + 1..] {
                u += (b - a - 1).max(0);
            }
        }
        u
    }

    /// Expected stratum dimension g - u, or None when the stratum is empty.
    pub fn expected_dim(&self, g: i64) -> Option<i64> {
        let u = self.u_invariant();
        (u <= g).then_some(g - u)
    }

    /// Dominance order: prefix sums of self bounded by those of other.
    /// Comparison only makes sense inside a fixed (length, total) class.
    pub fn leq(&self, other: &Self) -> Result<bool, SplittingError> {
        if self.len() != other.len() {
            return Err(SplittingError::LengthMismatch(self.len(), other.len()));
        }
        let (ta, tb) = (self.total(), other.total());
        if ta != tb {
            return Err(SplittingError::TotalMismatch(ta, tb));
        }
        let mut pa = 0;
        let mut pb = 0;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            pa += a;
            pb += b;
            if pa > pb {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The cohomological characterization of dominance: h0(self, n) >=
    /// h0(other, n) for every twist n. Outside the scanned window both
    /// profiles are 0 or the full Euler characteristic, so the window
    /// decides.
    pub fn h0_dominates(&self, other: &Self) -> Result<bool, SplittingError> {
        if self.len() != other.len() {
            return Err(SplittingError::LengthMismatch(self.len(), other.len()));
        }
        let (ta, tb) = (self.total(), other.total());
        if ta != tb {
            return Err(SplittingError::TotalMismatch(ta, tb));
        }
        let lo = -self.max_entry().max(other.max_entry()) - 1;
        let hi = -self.min_entry().min(other.min_entry()) + 1;
        for n in lo..=hi {
            if self.h0(n) < other.h0(n) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All types e' <= self with u(e') <= u_max. The u-bound makes the
    /// down-set finite; entries of any member provably lie in
    /// [min - u_max - 1, max + u_max + 1].
    pub fn downward_closure(&self, u_max: i64) -> BTreeSet<SplittingType> {
        let mut out = BTreeSet::new();
        if u_max < self.u_invariant() {
            return out;
        }
        let lo = self.min_entry() - u_max - 1;
        let hi = self.max_entry() + u_max + 1;
        let prefix: Vec<i64> = self
            .entries
            .iter()
            .scan(0, |acc, e| {
                *acc += e;
                Some(*acc)
            })
            .collect();
        let mut current = Vec::with_capacity(self.len());
        enumerate_dominated(self.len(), self.total(), lo, hi, &prefix, &mut current, 0, &mut out, u_max);
        out
    }

    /// Recognizes the balanced-plus-balanced pattern
    /// ((-b-1)^x, (-b)^y, a^u, (a+1)^v) with b >= 1, a >= 0, y > 0, u > 0.
    pub fn detect_bb(&self) -> Option<BBType> {
        let neg: Vec<i64> = self.entries.iter().copied().filter(|&e| e < 0).collect();
        let pos: Vec<i64> = self.entries.iter().copied().filter(|&e| e >= 0).collect();
        if neg.is_empty() || pos.is_empty() {
            return None;
        }
        let b = -neg[neg.len() - 1];
        let a = pos[0];
        let y = neg.iter().filter(|&&e| e == -b).count();
        let x = neg.iter().filter(|&&e| e == -b - 1).count();
        if x + y != neg.len() {
            return None;
        }
        let u = pos.iter().filter(|&&e| e == a).count();
        let v = pos.iter().filter(|&&e| e == a + 1).count();
        if u + v != pos.len() {
            return None;
        }
        BBType::new(a, b, x, y, u, v).ok()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for SplittingType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SplittingType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let values = Vec::<i64>::deserialize(deserializer)?;
        SplittingType::new(values).map_err(D::Error::custom)
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate_dominated(
    k: usize,
    total: i64,
    lo: i64,
    hi: i64,
    prefix: &[i64],
    current: &mut Vec<i64>,
    sum_so_far: i64,
    out: &mut BTreeSet<SplittingType>,
    u_max: i64,
) {
    let pos = current.len();
    if pos == k {
        if sum_so_far == total {
            let candidate = SplittingType { entries: current.clone() };
            if candidate.u_invariant() <= u_max {
                out.insert(candidate);
            }
        }
        return;
    }
    let remaining = (k - pos) as i64;
    let start = current.last().copied().unwrap_or(lo).max(lo);
    for v in start..=hi {
        let s = sum_so_far + v;
        // prefix-sum condition of the dominance order
        if s > prefix[pos] {
            break;
        }
        // the rest are >= v, so the reachable total only grows with v
        if s + (remaining - 1) * v > total {
            break;
        }
        // the rest are <= hi; skip if the total is out of reach
        if s + (remaining - 1) * hi < total {
            continue;
        }
        current.push(v);
        enumerate_dominated(k, total, lo, hi, prefix, current, s, out, u_max);
        current.pop();
    }
}

/// The balanced-plus-balanced pattern B(a, b, y, u, v) with its derived
/// multiplicity x; reconstructs to ((-b-1)^x, (-b)^y, a^u, (a+1)^v).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BBType {
    pub a: i64,
    pub b: i64,
    pub x: usize,
    pub y: usize,
    pub u: usize,
    pub v: usize,
}

impl BBType {
    pub fn new(a: i64, b: i64, x: usize, y: usize, u: usize, v: usize) -> Result<Self, SplittingError> {
        if a < 0 {
            return Err(SplittingError::BadPattern(format!("a = {a} must be >= 0")));
        }
        if b < 1 {
            return Err(SplittingError::BadPattern(format!("b = {b} must be >= 1")));
        }
        if y == 0 {
            return Err(SplittingError::BadPattern("y must be positive".into()));
        }
        if u == 0 {
            return Err(SplittingError::BadPattern("u must be positive".into()));
        }
        Ok(BBType { a, b, x, y, u, v })
    }

    pub fn len(&self) -> usize {
        self.x + self.y + self.u + self.v
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn splitting_type(&self) -> SplittingType {
        let mut entries = Vec::with_capacity(self.len());
        entries.extend(std::iter::repeat(-self.b - 1).take(self.x));
        entries.extend(std::iter::repeat(-self.b).take(self.y));
        entries.extend(std::iter::repeat(self.a).take(self.u));
        entries.extend(std::iter::repeat(self.a + 1).take(self.v));
        SplittingType { entries }
    }

    /// Global sections at twist zero: u(a+1) + v(a+2).
    pub fn h0(&self) -> i64 {
        self.u as i64 * (self.a + 1) + self.v as i64 * (self.a + 2)
    }
}

impl fmt::Display for BBType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B(a={},b={},x={},y={},u={},v={})", self.a, self.b, self.x, self.y, self.u, self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(values: &[i64]) -> SplittingType {
        SplittingType::new(values.to_vec()).unwrap()
    }

    #[test]
    fn construction_sorts() {
        assert_eq!(st(&[0, -2, 1]).entries(), &[-2, 0, 1]);
        assert_eq!(st(&[0]).entries(), &[0]);
        assert_eq!(st(&[3, 3]).entries(), &[3, 3]);
        assert_eq!(SplittingType::new(vec![]), Err(SplittingError::Empty));
    }

    #[test]
    fn twisting() {
        assert_eq!(st(&[-2, 0, 1]).twist(1), st(&[-1, 1, 2]));
        assert_eq!(st(&[0, 0]).twist(0), st(&[0, 0]));
        assert_eq!(st(&[-1, 1]).twist(-3), st(&[-4, -2]));
    }

    #[test]
    fn section_counts() {
        assert_eq!(st(&[-2, -1, 0]).h0(0), 1);
        assert_eq!(st(&[0, 0]).h0(-1), 0);
        // direct summation, and the balanced-plus-balanced count for
        // B(1,2,1,2,1): 2*2 + 1*3
        let e = st(&[-3, -2, 1, 1, 2]);
        assert_eq!(e.h0(0), 7);
        let bb = e.detect_bb().unwrap();
        assert_eq!(bb.h0(), 7);
    }

    #[test]
    fn u_invariant_values() {
        assert_eq!(st(&[0, 0, 0]).u_invariant(), 0);
        assert_eq!(st(&[-2, 0]).u_invariant(), 1);
        // frozen from the pair-by-pair oracle below
        assert_eq!(st(&[-3, -2, 1, 1, 2]).u_invariant(), 17);
    }

    #[test]
    fn u_invariant_matches_pairwise_oracle() {
        let cases = [st(&[-3, -2, 1, 1, 2]), st(&[-4, 0, 0, 1]), st(&[2, 2, 2]), st(&[-1, 3])];
        for e in cases {
            let entries = e.entries();
            let mut expected = 0;
            for i in 0..entries.len() {
                for j in 0..entries.len() {
                    if i < j {
                        let gap = entries[j] - entries[i] - 1;
                        if gap > 0 {
                            expected += gap;
                        }
                    }
                }
            }
            assert_eq!(e.u_invariant(), expected);
        }
    }

    #[test]
    fn dominance_order() {
        assert!(st(&[-1, 1]).leq(&st(&[0, 0])).unwrap());
        assert!(!st(&[0, 0]).leq(&st(&[-1, 1])).unwrap());
        assert!(st(&[-2, 0, 2]).leq(&st(&[-2, 0, 2])).unwrap());
        assert_eq!(
            st(&[0, 0]).leq(&st(&[0, 0, 0])),
            Err(SplittingError::LengthMismatch(2, 3))
        );
        assert_eq!(st(&[0, 0]).leq(&st(&[0, 1])), Err(SplittingError::TotalMismatch(0, 1)));
    }

    #[test]
    fn h0_domination() {
        // checked by hand over n in {-2, ..., 2}
        assert!(st(&[-1, 1]).h0_dominates(&st(&[0, 0])).unwrap());
        assert!(!st(&[0, 0]).h0_dominates(&st(&[-1, 1])).unwrap());
        let e = st(&[-2, 0, 1]);
        assert!(e.h0_dominates(&e).unwrap());
    }

    #[test]
    fn expected_dims() {
        let e = st(&[-3, -2, 1, 1, 2]); // u = 17
        assert_eq!(e.expected_dim(20), Some(3));
        assert_eq!(e.expected_dim(17), Some(0));
        assert_eq!(e.expected_dim(16), None);
    }

    #[test]
    fn downward_closure_small() {
        let closure = st(&[0, 0]).downward_closure(1);
        let expected: BTreeSet<_> = [st(&[0, 0]), st(&[-1, 1])].into_iter().collect();
        assert_eq!(closure, expected);

        let only_self = st(&[0, 0]).downward_closure(0);
        assert_eq!(only_self, [st(&[0, 0])].into_iter().collect());

        let singleton = st(&[0]).downward_closure(5);
        assert_eq!(singleton, [st(&[0])].into_iter().collect());
    }

    #[test]
    fn downward_closure_matches_wider_box() {
        // same enumeration against a deliberately wider search box
        let e = st(&[-1, 0, 1]);
        let u_max = 4;
        let closure = e.downward_closure(u_max);
        let lo = e.min_entry() - u_max - 3;
        let hi = e.max_entry() + u_max + 3;
        let mut wide = BTreeSet::new();
        for a in lo..=hi {
            for b in a..=hi {
                for c in b..=hi {
                    let cand = st(&[a, b, c]);
                    if cand.total() == e.total()
                        && cand.leq(&e).unwrap()
                        && cand.u_invariant() <= u_max
                    {
                        wide.insert(cand);
                    }
                }
            }
        }
        assert_eq!(closure, wide);
    }

    #[test]
    fn bb_detection() {
        let bb = st(&[-3, -2, 1, 1, 2]).detect_bb().unwrap();
        assert_eq!((bb.a, bb.b, bb.x, bb.y, bb.u, bb.v), (1, 2, 1, 1, 2, 1));

        assert_eq!(st(&[0, 0]).detect_bb(), None);

        let bb = st(&[-2, -2, 0, 0]).detect_bb().unwrap();
        assert_eq!((bb.a, bb.b, bb.x, bb.y, bb.u, bb.v), (0, 2, 0, 2, 2, 0));

        // three distinct negative values cannot match
        assert_eq!(st(&[-4, -2, 0]).detect_bb(), None);
        // all negative: u would be zero
        assert_eq!(st(&[-2, -1]).detect_bb(), None);
    }

    #[test]
    fn bb_roundtrip() {
        let bb = BBType::new(1, 2, 1, 1, 2, 1).unwrap();
        let e = bb.splitting_type();
        assert_eq!(e, st(&[-3, -2, 1, 1, 2]));
        assert_eq!(e.detect_bb(), Some(bb));
    }

    #[test]
    fn balanced_types() {
        assert_eq!(SplittingType::balanced(3, 0).unwrap(), st(&[0, 0, 0]));
        assert_eq!(SplittingType::balanced(3, -4).unwrap(), st(&[-2, -1, -1]));
        assert_eq!(SplittingType::balanced(2, 5).unwrap(), st(&[2, 3]));
    }

    #[test]
    fn json_shape() {
        let e = st(&[-2, 0, 1]);
        assert_eq!(serde_json::to_string(&e).unwrap(), "[-2,0,1]");
        let back: SplittingType = serde_json::from_str("[1, 0, -2]").unwrap();
        assert_eq!(back, e);
        let bb = BBType::new(0, 2, 0, 2, 2, 0).unwrap();
        let js = serde_json::to_value(&bb).unwrap();
        assert_eq!(js["a"], 0);
        assert_eq!(js["y"], 2);
    }
}
