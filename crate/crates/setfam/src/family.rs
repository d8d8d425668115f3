//! Uniform set families.

use std::fmt;

use crate::error::{Error, Result};
use crate::mask::{k_subsets, Permutation, SetMask, MAX_GROUND};

/// A family of distinct `k`-element subsets of `[n]`, kept sorted in
/// ascending bit-pattern order. Sorted order is part of the contract:
/// two families over the same ground compare equal iff they have the same
/// members, and display/serialization order is reproducible.
#[derive(Clone, PartialEq, Eq)]
pub struct KFamily {
    n: u32,
    k: u32,
    members: Vec<SetMask>,
}

impl KFamily {
    pub fn new(n: u32, k: u32, mut members: Vec<SetMask>) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundSize { n });
        }
        if k == 0 || k > n {
            return Err(Error::Uniformity { k, n });
        }
        for m in &members {
            if m.ground_size() != n {
                return Err(Error::GroundMismatch {
                    expected: n,
                    got: m.ground_size(),
                });
            }
            if m.len() != k {
                return Err(Error::MemberSize {
                    member: m.to_string(),
                    expected: k,
                    got: m.len(),
                });
            }
        }
        members.sort();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateMember {
                member: w[0].to_string(),
            });
        }
        Ok(KFamily { n, k, members })
    }

    pub fn empty(n: u32, k: u32) -> Result<Self> {
        KFamily::new(n, k, Vec::new())
    }

    /// The complete family of all `k`-subsets of `[n]`.
    pub fn full(n: u32, k: u32) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundSize { n });
        }
        if k == 0 || k > n {
            return Err(Error::Uniformity { k, n });
        }
        Ok(KFamily {
            n,
            k,
            members: k_subsets(n, k).collect(),
        })
    }

    pub fn from_element_lists(n: u32, k: u32, lists: &[Vec<u32>]) -> Result<Self> {
        let members = lists
            .iter()
            .map(|l| SetMask::from_elements(n, l))
            .collect::<Result<Vec<_>>>()?;
        KFamily::new(n, k, members)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[SetMask] {
        &self.members
    }

    pub fn contains(&self, m: SetMask) -> bool {
        m.ground_size() == self.n && self.members.binary_search(&m).is_ok()
    }

    /// Applies a relabeling of the ground set to every member.
    pub fn relabel(&self, p: &Permutation) -> Result<KFamily> {
        if p.ground_size() != self.n {
            return Err(Error::GroundMismatch {
                expected: self.n,
                got: p.ground_size(),
            });
        }
        let mut members: Vec<SetMask> = self.members.iter().map(|&m| p.apply(m)).collect();
        members.sort();
        Ok(KFamily {
            n: self.n,
            k: self.k,
            members,
        })
    }

    /// The same members read over a larger ground set.
    pub fn over_ground(&self, n: u32) -> Result<KFamily> {
        if n < self.n {
            return Err(Error::GroundMismatch {
                expected: self.n,
                got: n,
            });
        }
        let members = self
            .members
            .iter()
            .map(|m| m.over_ground(n))
            .collect::<Result<Vec<_>>>()?;
        KFamily::new(n, self.k, members)
    }

    /// Smallest `|A ∩ B|` over distinct member pairs.
    pub fn min_pairwise_intersection(&self) -> Result<u32> {
        if self.members.len() < 2 {
            return Err(Error::NeedTwoMembers {
                got: self.members.len(),
            });
        }
        let mut best = self.k;
        for (i, &a) in self.members.iter().enumerate() {
            for &b in &self.members[i + 1..] {
                best = best.min(a.intersection(b).len());
                if best == 0 {
                    return Ok(0);
                }
            }
        }
        Ok(best)
    }

    pub fn is_intersecting(&self) -> Result<bool> {
        Ok(self.min_pairwise_intersection()? >= 1)
    }
}

impl fmt::Display for KFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.members.is_empty() {
            return write!(f, "(empty)");
        }
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for KFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KFamily(n={}, k={}, {})", self.n, self.k, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, k: u32, lists: &[&[u32]]) -> KFamily {
        let lists: Vec<Vec<u32>> = lists.iter().map(|l| l.to_vec()).collect();
        KFamily::from_element_lists(n, k, &lists).unwrap()
    }

    #[test]
    fn members_sort_ascending() {
        let f = fam(4, 2, &[&[3, 4], &[1, 2], &[1, 3]]);
        let shown: Vec<String> = f.members().iter().map(|m| m.to_string()).collect();
        assert_eq!(shown, vec!["{1,2}", "{1,3}", "{3,4}"]);
        assert_eq!(f.to_string(), "{1,2} {1,3} {3,4}");
    }

    #[test]
    fn construction_validates() {
        assert!(KFamily::from_element_lists(4, 2, &[vec![1, 2, 3]]).is_err());
        assert!(KFamily::from_element_lists(4, 2, &[vec![1, 2], vec![2, 1]]).is_err());
        assert!(KFamily::empty(4, 0).is_err());
        assert!(KFamily::empty(4, 5).is_err());
        assert!(KFamily::empty(0, 1).is_err());
        let m = SetMask::from_elements(5, &[1, 2]).unwrap();
        assert!(KFamily::new(4, 2, vec![m]).is_err());
    }

    #[test]
    fn full_family_size() {
        assert_eq!(KFamily::full(5, 2).unwrap().len(), 10);
        assert_eq!(KFamily::full(6, 3).unwrap().len(), 20);
        assert_eq!(KFamily::full(4, 4).unwrap().len(), 1);
    }

    #[test]
    fn relabel_keeps_shape() {
        let f = fam(4, 2, &[&[1, 2], &[1, 3]]);
        let p = Permutation::new(4, &[4, 3, 2, 1]).unwrap();
        let g = f.relabel(&p).unwrap();
        assert_eq!(g.to_string(), "{2,4} {3,4}");
        assert_eq!(g.relabel(&p.inverse()).unwrap(), f);
    }

    #[test]
    fn min_intersection_over_distinct_pairs() {
        let f = fam(6, 3, &[&[1, 2, 3], &[1, 2, 4], &[1, 5, 6]]);
        assert_eq!(f.min_pairwise_intersection().unwrap(), 1);
        assert!(f.is_intersecting().unwrap());
        let g = fam(6, 3, &[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(g.min_pairwise_intersection().unwrap(), 0);
        assert!(!g.is_intersecting().unwrap());
        let single = fam(6, 3, &[&[1, 2, 3]]);
        assert!(single.min_pairwise_intersection().is_err());
    }

    #[test]
    fn ground_extension() {
        let f = fam(4, 2, &[&[1, 2], &[3, 4]]);
        let g = f.over_ground(6).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.len(), 2);
        assert!(f.over_ground(3).is_err());
    }
}
