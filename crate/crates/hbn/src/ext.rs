//! Extension classes of a split bundle by itself, realized as the strictly
//! upper block of a 2k x 2k transition matrix [[D, G], [0, D]].
//!
//! For the base type e the slot (i, j, m) with i < j is admissible when
//! e_j - e_i >= 2 and -e_j < m < -e_i; the admissible slots form a basis of
//! the space of extension classes, and their number is exactly the
//! u-invariant of the base. Coefficients living outside those windows can be
//! absorbed by a change of charts on one side or the other, which is why the
//! windows are open.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::birkhoff::{birkhoff_factorize, BirkhoffError};
use crate::cohomology::h0_twist;
use crate::field::{FieldElem, Prime};
use crate::laurent::LaurentPoly;
use crate::matrix::LaurentMatrix;
use crate::splitting::SplittingType;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtError {
    #[error("slot ({i}, {j}, {m}) is not admissible for this base type")]
    InadmissibleSlot { i: usize, j: usize, m: i64 },
}

/// Index of a coefficient: summand pair (i, j) with i < j and a twist
/// exponent m strictly between -e_j and -e_i. Zero-based indices into the
/// base type.
pub type Slot = (usize, usize, i64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtClass {
    base: SplittingType,
    prime: Prime,
    coeffs: BTreeMap<Slot, FieldElem>,
}

/// All admissible slots of a base type, in lexicographic order. Their count
/// equals the u-invariant of the base.
pub fn admissible_slots(base: &SplittingType) -> Vec<Slot> {
    let e = base.entries();
    let mut slots = Vec::new();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            if e[j] - e[i] >= 2 {
                for m in (-e[j] + 1)..(-e[i]) {
                    slots.push((i, j, m));
                }
            }
        }
    }
    slots
}

impl ExtClass {
    pub fn zero(base: SplittingType, prime: Prime) -> Self {
        ExtClass { base, prime, coeffs: BTreeMap::new() }
    }

    pub fn base(&self) -> &SplittingType {
        &self.base
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero coefficients, keyed by admissible slot.
    pub fn coeffs(&self) -> impl Iterator<Item = (Slot, FieldElem)> + '_ {
        self.coeffs.iter().map(|(&s, &c)| (s, c))
    }

    pub fn set(&mut self, slot: Slot, value: FieldElem) -> Result<(), ExtError> {
        let (i, j, m) = slot;
        let e = self.base.entries();
        let admissible =
            i < j && j < e.len() && e[j] - e[i] >= 2 && -e[j] < m && m < -e[i];
        if !admissible {
            return Err(ExtError::InadmissibleSlot { i, j, m });
        }
        if value.is_zero() {
            self.coeffs.remove(&slot);
        } else {
            self.coeffs.insert(slot, value);
        }
        Ok(())
    }

    /// Serializable view used in experiment reports.
    pub fn describe(&self) -> ExtClassRepr {
        ExtClassRepr {
            base: self.base.clone(),
            prime: self.prime.get(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&(i, j, m), &c)| SlotRepr { i, j, m, c: c.value() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ExtClassRepr {
    pub base: SplittingType,
    pub prime: u32,
    pub coeffs: Vec<SlotRepr>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SlotRepr {
    pub i: usize,
    pub j: usize,
    pub m: i64,
    pub c: u32,
}

/// Uniform class: every admissible slot receives an independent uniform
/// coefficient (zero draws leave the slot empty). Deterministic in the rng.
pub fn random_ext_class<R: Rng>(base: &SplittingType, prime: Prime, rng: &mut R) -> ExtClass {
    let mut class = ExtClass::zero(base.clone(), prime);
    for slot in admissible_slots(base) {
        let value = FieldElem::new(rng.gen_range(0..i64::from(prime.get())), prime);
        class.set(slot, value).expect("enumerated slot is admissible");
    }
    class
}

/// The 2k x 2k transition block matrix [[D, G], [0, D]] presenting the
/// middle term of the extension; invertible by construction.
pub fn extension_transition(class: &ExtClass) -> LaurentMatrix {
    let base = class.base();
    let prime = class.prime();
    let k = base.len();
    let n = 2 * k;
    let mut entries = vec![LaurentPoly::zero(prime); n * n];
    for (idx, &e) in base.entries().iter().enumerate() {
        let d = LaurentPoly::monomial(FieldElem::one(prime), -e);
        entries[idx * n + idx] = d.clone();
        entries[(k + idx) * n + (k + idx)] = d;
    }
    for ((i, j, m), c) in class.coeffs() {
        entries[i * n + (k + j)].add_term(m, c);
    }
    LaurentMatrix::from_entries_unchecked(n, prime, entries).expect("well-shaped block matrix")
}

/// Whether restriction of sections at twist n is onto: the middle term has
/// the full 2 * h0(base, n) worth of sections there, i.e. the connecting
/// map vanishes at this twist.
pub fn surjective_at(class: &ExtClass, n: i64) -> bool {
    let ev = extension_transition(class);
    h0_twist(&ev, n) == 2 * class.base().h0(n)
}

/// Whether the extension is split: the middle term has the doubled
/// splitting type. Agrees with surjectivity at every twist.
pub fn is_split_extension(class: &ExtClass) -> Result<bool, BirkhoffError> {
    let ev = extension_transition(class);
    let fact = birkhoff_factorize(&ev)?;
    Ok(fact.splitting == doubled(class.base()))
}

/// The splitting type of the split extension: every entry twice.
pub fn doubled(base: &SplittingType) -> SplittingType {
    let mut entries = Vec::with_capacity(base.len() * 2);
    entries.extend_from_slice(base.entries());
    entries.extend_from_slice(base.entries());
    SplittingType::new(entries).expect("nonempty doubling")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p101() -> Prime {
        Prime::new(101).unwrap()
    }

    fn st(values: &[i64]) -> SplittingType {
        SplittingType::new(values.to_vec()).unwrap()
    }

    #[test]
    fn slot_enumeration() {
        // balanced: no admissible slots at all
        assert!(admissible_slots(&st(&[0, 0, 0])).is_empty());
        // the three slots of (-2, 0, 1), count = u = 3
        let slots = admissible_slots(&st(&[-2, 0, 1]));
        assert_eq!(slots, vec![(0, 1, 1), (0, 2, 0), (0, 2, 1)]);
        assert_eq!(slots.len() as i64, st(&[-2, 0, 1]).u_invariant());
    }

    #[test]
    fn slot_count_is_u_invariant() {
        let cases = [st(&[-3, -2, 1, 1, 2]), st(&[-4, 4]), st(&[0]), st(&[-1, 0, 0, 2])];
        for e in cases {
            assert_eq!(admissible_slots(&e).len() as i64, e.u_invariant(), "base {e}");
        }
    }

    #[test]
    fn random_class_is_deterministic() {
        let base = st(&[-2, 0, 1]);
        let a = random_ext_class(&base, p101(), &mut ChaCha8Rng::seed_from_u64(5));
        let b = random_ext_class(&base, p101(), &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
        let zero_base = st(&[0, 0, 0]);
        let z = random_ext_class(&zero_base, p101(), &mut ChaCha8Rng::seed_from_u64(5));
        assert!(z.is_zero());
    }

    #[test]
    fn inadmissible_slots_rejected() {
        let mut class = ExtClass::zero(st(&[-1, 1]), p101());
        let one = FieldElem::one(p101());
        assert!(class.set((0, 1, 0), one).is_ok());
        assert!(class.set((0, 1, 1), one).is_err());
        assert!(class.set((1, 0, 0), one).is_err());
        assert!(class.set((0, 1, -1), one).is_err());
    }

    #[test]
    fn zero_class_splits() {
        let base = st(&[-1, 1]);
        let class = ExtClass::zero(base.clone(), p101());
        let ev = extension_transition(&class);
        let fact = birkhoff_factorize(&ev).unwrap();
        assert_eq!(fact.splitting, doubled(&base));
        assert!(is_split_extension(&class).unwrap());
        for n in -3..=2 {
            assert!(surjective_at(&class, n));
        }
    }

    #[test]
    fn single_slot_class_gives_balanced_middle() {
        // the middle term decouples into [[t, 1], [0, t^-1]] plus split
        // pieces of twists 1 and -1
        let base = st(&[-1, 1]);
        let mut class = ExtClass::zero(base.clone(), p101());
        class.set((0, 1, 0), FieldElem::one(p101())).unwrap();
        let ev = extension_transition(&class);
        let fact = birkhoff_factorize(&ev).unwrap();
        assert_eq!(fact.splitting, st(&[-1, 0, 0, 1]));
        assert!(!is_split_extension(&class).unwrap());
        assert!(surjective_at(&class, 0));
        assert!(!surjective_at(&class, -1));
    }

    #[test]
    fn fully_loaded_class_does_not_split() {
        let base = st(&[-3, 0, 0]);
        let mut class = ExtClass::zero(base.clone(), p101());
        for slot in admissible_slots(&base) {
            class.set(slot, FieldElem::one(p101())).unwrap();
        }
        assert!(!is_split_extension(&class).unwrap());
    }

    #[test]
    fn degree_additivity() {
        let base = st(&[-2, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let class = random_ext_class(&base, p101(), &mut rng);
            let fact = birkhoff_factorize(&extension_transition(&class)).unwrap();
            assert_eq!(fact.splitting.total(), 2 * base.total());
        }
    }
}
