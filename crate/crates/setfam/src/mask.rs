//! Subsets of a small ground set as machine words.
//!
//! The ground set is `[n] = {1, .., n}` with `n <= 32`; element `i` lives in
//! bit `i - 1`. Masks built over the same `n` compare by their bit pattern,
//! so sorting a list of masks sorts it in ascending integer order, which the
//! chain detector and the search tree both rely on.

use std::fmt;

use crate::error::{Error, Result};

/// One machine word per set.
pub const MAX_GROUND: u32 = 32;

/// A subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetMask {
    bits: u32,
    n: u8,
}

impl SetMask {
    pub fn empty(n: u32) -> Result<Self> {
        check_ground(n)?;
        Ok(SetMask { bits: 0, n: n as u8 })
    }

    pub fn full(n: u32) -> Result<Self> {
        check_ground(n)?;
        Ok(SetMask {
            bits: low_bits(n),
            n: n as u8,
        })
    }

    /// Builds a mask from 1-based elements. Duplicates are rejected.
    pub fn from_elements(n: u32, elements: &[u32]) -> Result<Self> {
        check_ground(n)?;
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            let b = 1u32 << (e - 1);
            if bits & b != 0 {
                return Err(Error::DuplicateElement { element: e });
            }
            bits |= b;
        }
        Ok(SetMask { bits, n: n as u8 })
    }

    pub fn from_bits(n: u32, bits: u32) -> Result<Self> {
        check_ground(n)?;
        if bits & !low_bits(n) != 0 {
            return Err(Error::BitsOutOfRange { bits, n });
        }
        Ok(SetMask { bits, n: n as u8 })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn ground_size(self) -> u32 {
        self.n as u32
    }

    pub fn len(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, element: u32) -> bool {
        element >= 1 && element <= self.n as u32 && self.bits & (1 << (element - 1)) != 0
    }

    pub fn is_subset_of(self, other: SetMask) -> bool {
        self.assert_same_ground(other);
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: SetMask) -> bool {
        self.assert_same_ground(other);
        self.bits & other.bits == 0
    }

    pub fn intersection(self, other: SetMask) -> SetMask {
        self.assert_same_ground(other);
        SetMask {
            bits: self.bits & other.bits,
            n: self.n,
        }
    }

    pub fn union(self, other: SetMask) -> SetMask {
        self.assert_same_ground(other);
        SetMask {
            bits: self.bits | other.bits,
            n: self.n,
        }
    }

    pub fn minus(self, other: SetMask) -> SetMask {
        self.assert_same_ground(other);
        SetMask {
            bits: self.bits & !other.bits,
            n: self.n,
        }
    }

    pub fn complement(self) -> SetMask {
        SetMask {
            bits: low_bits(self.n as u32) & !self.bits,
            n: self.n,
        }
    }

    pub fn with(self, element: u32) -> Result<SetMask> {
        let n = self.n as u32;
        if element == 0 || element > n {
            return Err(Error::ElementOutOfRange { element, n });
        }
        Ok(SetMask {
            bits: self.bits | 1 << (element - 1),
            n: self.n,
        })
    }

    /// 1-based elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let tz = bits.trailing_zeros();
            bits &= bits - 1;
            Some(tz + 1)
        })
    }

    /// All subsets of this mask, ascending by bit pattern, `{}` first and
    /// the mask itself last.
    pub fn subsets(self) -> impl Iterator<Item = SetMask> {
        let x = self.bits;
        let n = self.n;
        let mut cur = Some(0u32);
        std::iter::from_fn(move || {
            let s = cur?;
            cur = if s == x {
                None
            } else {
                Some(s.wrapping_sub(x) & x)
            };
            Some(SetMask { bits: s, n })
        })
    }

    /// Renders a mask over a different (larger or smaller) ground set.
    pub fn over_ground(self, n: u32) -> Result<SetMask> {
        SetMask::from_bits(n, self.bits)
    }

    fn assert_same_ground(self, other: SetMask) {
        assert_eq!(
            self.n, other.n,
            "set operation across different ground sets"
        );
    }
}

impl fmt::Display for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over [{}]", self, self.n)
    }
}

fn check_ground(n: u32) -> Result<()> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::GroundSize { n });
    }
    Ok(())
}

fn low_bits(n: u32) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// All `k`-element subsets of `[n]` in ascending bit-pattern order
/// (Gosper's hack). Empty for `k > n`; the single empty mask for `k = 0`.
pub fn k_subsets(n: u32, k: u32) -> impl Iterator<Item = SetMask> {
    assert!(
        (1..=MAX_GROUND).contains(&n),
        "ground size {n} out of range"
    );
    let limit = 1u64 << n;
    let mut cur: Option<u64> = if k > n {
        None
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let c = cur?;
        cur = if c == 0 {
            None
        } else {
            let u = c & c.wrapping_neg();
            let v = c + u;
            let next = v | (((v ^ c) / u) >> 2);
            (next < limit).then_some(next)
        };
        Some(SetMask {
            bits: c as u32,
            n: n as u8,
        })
    })
}

/// Exact binomial coefficient. Callers stay at desk scale (`n <= 64`), where
/// every value fits in a `u64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    assert!(n <= 64, "binomial arguments out of the exact range");
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) as u128 / i as u128;
    }
    acc as u64
}

/// Packs the bits of `sub` (which must satisfy `sub ⊆ x`) into the low
/// `|x|` positions, in the order the elements of `x` appear.
pub(crate) fn compress_within(x: u32, sub: u32) -> u32 {
    debug_assert_eq!(sub & !x, 0);
    let mut out = 0u32;
    let mut rest = x;
    let mut pos = 0;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        if sub & low != 0 {
            out |= 1 << pos;
        }
        rest ^= low;
        pos += 1;
    }
    out
}

/// Inverse of [`compress_within`]: spreads the low `|x|` bits of `packed`
/// back onto the positions of `x`. Only the round-trip test needs it.
#[cfg(test)]
pub(crate) fn expand_within(x: u32, packed: u32) -> u32 {
    let mut out = 0u32;
    let mut rest = x;
    let mut pos = 0;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        if packed & (1 << pos) != 0 {
            out |= low;
        }
        rest ^= low;
        pos += 1;
    }
    out
}

/// A permutation of `[n]`, stored as the image of each element.
#[derive(Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(n: u32, images: &[u32]) -> Result<Self> {
        check_ground(n)?;
        if images.len() != n as usize {
            return Err(Error::NotAPermutation { n });
        }
        let mut seen = 0u32;
        for &im in images {
            if im == 0 || im > n {
                return Err(Error::NotAPermutation { n });
            }
            let b = 1u32 << (im - 1);
            if seen & b != 0 {
                return Err(Error::NotAPermutation { n });
            }
            seen |= b;
        }
        Ok(Permutation {
            images: images.iter().map(|&im| im as u8).collect(),
        })
    }

    pub fn identity(n: u32) -> Result<Self> {
        check_ground(n)?;
        Ok(Permutation {
            images: (1..=n as u8).collect(),
        })
    }

    pub fn ground_size(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn image_of(&self, element: u32) -> u32 {
        self.images[element as usize - 1] as u32
    }

    pub fn apply(&self, m: SetMask) -> SetMask {
        assert_eq!(
            m.ground_size(),
            self.ground_size(),
            "permutation applied across different ground sets"
        );
        let mut bits = 0u32;
        for e in m.elements() {
            bits |= 1 << (self.image_of(e) - 1);
        }
        SetMask { bits, n: m.n }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im as usize - 1] = i as u8 + 1;
        }
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &im) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{im}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_round_trip() {
        let m = SetMask::from_elements(6, &[2, 5, 3]).unwrap();
        assert_eq!(m.elements().collect::<Vec<_>>(), vec![2, 3, 5]);
        assert_eq!(m.len(), 3);
        assert_eq!(m.to_string(), "{2,3,5}");
        assert!(m.contains(5));
        assert!(!m.contains(4));
    }

    #[test]
    fn constructors_validate() {
        assert!(SetMask::empty(0).is_err());
        assert!(SetMask::empty(33).is_err());
        assert!(SetMask::from_elements(4, &[5]).is_err());
        assert!(SetMask::from_elements(4, &[0]).is_err());
        assert!(SetMask::from_elements(4, &[2, 2]).is_err());
        assert!(SetMask::from_bits(4, 0x10).is_err());
        assert!(SetMask::from_bits(32, u32::MAX).is_ok());
    }

    #[test]
    fn algebra() {
        let a = SetMask::from_elements(5, &[1, 2, 4]).unwrap();
        let b = SetMask::from_elements(5, &[2, 4, 5]).unwrap();
        assert_eq!(a.intersection(b).to_string(), "{2,4}");
        assert_eq!(a.union(b).to_string(), "{1,2,4,5}");
        assert_eq!(a.minus(b).to_string(), "{1}");
        assert_eq!(a.complement().to_string(), "{3,5}");
        assert!(a.intersection(b).is_subset_of(a));
        assert!(!a.is_subset_of(b));
    }

    #[test]
    fn subsets_ascend_and_cover() {
        let x = SetMask::from_elements(6, &[1, 3, 6]).unwrap();
        let subs: Vec<u32> = x.subsets().map(|s| s.bits()).collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        assert!(subs.iter().all(|&s| s & !x.bits() == 0));
        let empty = SetMask::empty(3).unwrap();
        assert_eq!(empty.subsets().count(), 1);
    }

    #[test]
    fn k_subsets_match_binomial() {
        for n in 1..=8 {
            for k in 0..=n + 1 {
                let got: Vec<u32> = k_subsets(n, k).map(|m| m.bits()).collect();
                assert_eq!(got.len() as u64, binomial(n as u64, k as u64));
                assert!(got.windows(2).all(|w| w[0] < w[1]));
                assert!(got.iter().all(|b| b.count_ones() == k));
            }
        }
    }

    #[test]
    fn k_subsets_full_word() {
        assert_eq!(k_subsets(32, 1).count(), 32);
        assert_eq!(k_subsets(32, 31).count(), 32);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(12, 6), 924);
        assert_eq!(binomial(32, 16), 601080390);
        assert_eq!(binomial(4, 7), 0);
        assert_eq!(binomial(64, 32), 1832624140942590534);
    }

    #[test]
    fn compress_expand_round_trip() {
        let x = 0b101101u32;
        for s in SetMask::from_bits(6, x).unwrap().subsets() {
            let packed = compress_within(x, s.bits());
            assert!(packed < 1 << x.count_ones());
            assert_eq!(expand_within(x, packed), s.bits());
        }
        assert_eq!(compress_within(0b1010, 0b1000), 0b10);
    }

    #[test]
    fn permutation_apply_and_inverse() {
        let p = Permutation::new(4, &[3, 1, 4, 2]).unwrap();
        let m = SetMask::from_elements(4, &[1, 3]).unwrap();
        assert_eq!(p.apply(m).to_string(), "{3,4}");
        let q = p.inverse();
        assert_eq!(q.apply(p.apply(m)), m);
        assert!(Permutation::new(3, &[1, 1, 2]).is_err());
        assert!(Permutation::new(3, &[1, 2]).is_err());
        assert!(Permutation::new(3, &[0, 1, 2]).is_err());
    }
}
