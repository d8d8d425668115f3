//! Incremental admissibility bookkeeping.
//!
//! For every `r`-subset `x` of `[n]` the state records how many chosen
//! members realize each intersection pattern on `x`. Adding a member
//! touches every `x` once; chain-freeness only needs re-checking on
//! traces where a pattern count would move from zero, and the candidate
//! check runs read-only against the counts plus one virtual pattern.
//! The state is admissible at all times: an add that would create a chain
//! is refused before anything is written.

use crate::chain::ChainMode;
use crate::error::{Error, Result};
use crate::family::KFamily;
use crate::mask::{binomial, compress_within, k_subsets, SetMask, MAX_GROUND};

/// Cap on the pattern table, in `u32` cells. `C(n,r) * 2^r` must fit.
const CELL_CAP: u64 = 1 << 24;

/// No virtual pattern.
const NO_EXTRA: u32 = u32::MAX;

#[derive(Clone)]
pub struct TraceState {
    n: u32,
    k: u32,
    r: u32,
    mode: ChainMode,
    /// All `r`-subset bitmasks, ascending.
    xs: Vec<u32>,
    /// Flat table, row `xi` holding `2^r` pattern counts.
    counts: Vec<u32>,
    /// Chosen member bitmasks, ascending.
    chosen: Vec<u32>,
    /// Chain-DP scratch, one bit per local pattern.
    reach: Vec<u64>,
}

impl TraceState {
    pub fn new(n: u32, k: u32, r: u32, mode: ChainMode) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundSize { n });
        }
        if k == 0 || k > n {
            return Err(Error::Uniformity { k, n });
        }
        if r == 0 || r > n {
            return Err(Error::RankRange { r, n });
        }
        if r < mode.min_rank() {
            return Err(Error::AlmostRank { r });
        }
        let rows = binomial(n as u64, r as u64);
        let cells = rows << r;
        if cells > CELL_CAP {
            return Err(Error::StateSize {
                cells,
                limit: CELL_CAP,
            });
        }
        let xs: Vec<u32> = k_subsets(n, r).map(|m| m.bits()).collect();
        let words = (1usize << r).div_ceil(64);
        Ok(TraceState {
            n,
            k,
            r,
            mode,
            xs,
            counts: vec![0; cells as usize],
            chosen: Vec::new(),
            reach: vec![0; words],
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn mode(&self) -> ChainMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    /// Chosen member bitmasks, ascending.
    pub fn chosen_bits(&self) -> &[u32] {
        &self.chosen
    }

    pub fn chosen_family(&self) -> KFamily {
        let members = self
            .chosen
            .iter()
            .map(|&b| SetMask::from_bits(self.n, b).expect("chosen member in range"))
            .collect();
        KFamily::new(self.n, self.k, members).expect("state members stay valid")
    }

    /// How many chosen members leave pattern `s` on the trace of `x`.
    pub fn multiplicity(&self, x: SetMask, s: SetMask) -> Result<u32> {
        if x.ground_size() != self.n {
            return Err(Error::GroundMismatch {
                expected: self.n,
                got: x.ground_size(),
            });
        }
        if x.len() != self.r {
            return Err(Error::RankRange {
                r: x.len(),
                n: self.n,
            });
        }
        if s.ground_size() != self.n || !s.is_subset_of(x) {
            return Err(Error::PatternNotInside {
                pattern: s.to_string(),
                x: x.to_string(),
            });
        }
        let xi = self
            .xs
            .binary_search(&x.bits())
            .expect("every r-subset has a row");
        let p = compress_within(x.bits(), s.bits()) as usize;
        Ok(self.counts[(xi << self.r) + p])
    }

    /// Whether `m` could join without creating a chain. Read-only.
    pub fn can_add(&mut self, m: SetMask) -> Result<bool> {
        let bits = self.check_shape(m)?;
        if self.chosen.binary_search(&bits).is_ok() {
            return Err(Error::AlreadyChosen {
                member: m.to_string(),
            });
        }
        Ok(self.can_add_bits(bits))
    }

    /// Adds `m` if the state stays admissible; reports whether it joined.
    pub fn try_add(&mut self, m: SetMask) -> Result<bool> {
        let bits = self.check_shape(m)?;
        if self.chosen.binary_search(&bits).is_ok() {
            return Err(Error::AlreadyChosen {
                member: m.to_string(),
            });
        }
        if !self.can_add_bits(bits) {
            return Ok(false);
        }
        self.shift_counts(bits, 1);
        let pos = self.chosen.binary_search(&bits).unwrap_err();
        self.chosen.insert(pos, bits);
        Ok(true)
    }

    /// Removes a chosen member. Removal never creates a chain.
    pub fn remove(&mut self, m: SetMask) -> Result<()> {
        let bits = self.check_shape(m)?;
        let Ok(pos) = self.chosen.binary_search(&bits) else {
            return Err(Error::NotChosen {
                member: m.to_string(),
            });
        };
        self.shift_counts(bits, -1);
        self.chosen.remove(pos);
        Ok(())
    }

    fn check_shape(&self, m: SetMask) -> Result<u32> {
        if m.ground_size() != self.n {
            return Err(Error::GroundMismatch {
                expected: self.n,
                got: m.ground_size(),
            });
        }
        if m.len() != self.k {
            return Err(Error::MemberSize {
                member: m.to_string(),
                expected: self.k,
                got: m.len(),
            });
        }
        Ok(m.bits())
    }

    /// Raw-bits variant for the search hot path; `bits` must be a valid
    /// `k`-subset of `[n]` that is not yet chosen.
    pub(crate) fn can_add_bits(&mut self, bits: u32) -> bool {
        for xi in 0..self.xs.len() {
            let x = self.xs[xi];
            let p = compress_within(x, bits & x);
            if self.counts[(xi << self.r) + p as usize] == 0 && self.chain_with(xi, p) {
                return false;
            }
        }
        true
    }

    pub(crate) fn try_add_bits(&mut self, bits: u32) -> bool {
        debug_assert_eq!(bits.count_ones(), self.k);
        if !self.can_add_bits(bits) {
            return false;
        }
        self.shift_counts(bits, 1);
        let pos = self
            .chosen
            .binary_search(&bits)
            .expect_err("member already chosen");
        self.chosen.insert(pos, bits);
        true
    }

    pub(crate) fn remove_bits(&mut self, bits: u32) {
        let pos = self
            .chosen
            .binary_search(&bits)
            .expect("removing a member that is chosen");
        self.shift_counts(bits, -1);
        self.chosen.remove(pos);
    }

    fn shift_counts(&mut self, bits: u32, delta: i32) {
        let r = self.r;
        for (xi, &x) in self.xs.iter().enumerate() {
            let p = compress_within(x, bits & x) as usize;
            let cell = &mut self.counts[(xi << r) + p];
            *cell = cell.checked_add_signed(delta).expect("count stays in range");
        }
    }

    /// Chain DP on row `xi` treating local pattern `extra` as realized in
    /// addition to the recorded counts. Pass [`NO_EXTRA`] to test the
    /// stored state alone.
    fn chain_with(&mut self, xi: usize, extra: u32) -> bool {
        let r = self.r;
        let full: u32 = (1u32 << r) - 1;
        let base = xi << r;
        let counts = &self.counts[base..base + (full as usize) + 1];
        let present = |q: u32| counts[q as usize] > 0 || q == extra;
        if !present(full) {
            return false;
        }
        let mode = self.mode;
        let words = ((full as usize) + 64) >> 6;
        let reach = &mut self.reach;
        reach[..words].fill(0);
        for p in 0..=full {
            if !present(p) {
                continue;
            }
            let ok = match (mode, p.count_ones()) {
                (ChainMode::Maximal, 0) => true,
                (ChainMode::Almost, 0) => false,
                (ChainMode::Almost, 1) => true,
                _ => {
                    let mut rest = p;
                    let mut found = false;
                    while rest != 0 {
                        let b = rest & rest.wrapping_neg();
                        let q = p ^ b;
                        if reach[(q >> 6) as usize] & (1u64 << (q & 63)) != 0 {
                            found = true;
                            break;
                        }
                        rest ^= b;
                    }
                    found
                }
            };
            if ok {
                if p == full {
                    return true;
                }
                reach[(p >> 6) as usize] |= 1u64 << (p & 63);
            }
        }
        false
    }

    /// Re-runs the chain DP on every row. The stored state never contains
    /// a chain; exposed so tests can assert the invariant cheaply.
    pub fn audit_chain_free(&mut self) -> bool {
        (0..self.xs.len()).all(|xi| !self.chain_with(xi, NO_EXTRA))
    }
}

impl std::fmt::Debug for TraceState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "TraceState(n={}, k={}, r={}, {} mode, {} chosen)",
            self.n,
            self.k,
            self.r,
            self.mode,
            self.chosen.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::is_admissible;

    fn set(n: u32, elems: &[u32]) -> SetMask {
        SetMask::from_elements(n, elems).unwrap()
    }

    #[test]
    fn refuses_member_that_completes_a_tower() {
        let mut st = TraceState::new(4, 2, 2, ChainMode::Maximal).unwrap();
        assert!(st.try_add(set(4, &[1, 2])).unwrap());
        assert!(st.try_add(set(4, &[1, 3])).unwrap());
        // {3,4} leaves {} on the trace of {1,2}, completing {} {1} {1,2}.
        assert!(!st.try_add(set(4, &[3, 4])).unwrap());
        assert_eq!(st.len(), 2);
        // The refused member left no residue.
        assert_eq!(
            st.multiplicity(set(4, &[1, 2]), SetMask::empty(4).unwrap())
                .unwrap(),
            0
        );
        assert!(st.audit_chain_free());
    }

    #[test]
    fn add_remove_restores_counts() {
        let mut st = TraceState::new(5, 2, 2, ChainMode::Maximal).unwrap();
        let a = set(5, &[1, 2]);
        let b = set(5, &[2, 3]);
        assert!(st.try_add(a).unwrap());
        assert!(st.try_add(b).unwrap());
        st.remove(b).unwrap();
        assert_eq!(st.len(), 1);
        assert_eq!(st.chosen_bits(), &[a.bits()]);
        let x = set(5, &[2, 3]);
        assert_eq!(st.multiplicity(x, set(5, &[2])).unwrap(), 1);
        assert_eq!(st.multiplicity(x, set(5, &[3])).unwrap(), 0);
    }

    #[test]
    fn can_add_matches_try_add_and_writes_nothing() {
        let mut st = TraceState::new(4, 2, 2, ChainMode::Almost).unwrap();
        assert!(st.try_add(set(4, &[1, 2])).unwrap());
        // {1,3} leaves {1} on the trace of {1,2}: singleton then top.
        assert!(!st.can_add(set(4, &[1, 3])).unwrap());
        assert!(!st.try_add(set(4, &[1, 3])).unwrap());
        assert!(st.can_add(set(4, &[3, 4])).unwrap());
        assert!(st.try_add(set(4, &[3, 4])).unwrap());
        assert_eq!(st.len(), 2);
    }

    #[test]
    fn chosen_family_is_always_admissible() {
        let mut st = TraceState::new(5, 3, 2, ChainMode::Maximal).unwrap();
        for x in k_subsets(5, 3) {
            let _ = st.try_add(x).unwrap();
            assert!(is_admissible(&st.chosen_family(), 2, ChainMode::Maximal).unwrap());
        }
        // Greedy in ascending mask order keeps exactly the k-sets inside [4].
        assert_eq!(st.chosen_family().to_string(), "{1,2,3} {1,2,4} {1,3,4} {2,3,4}");
    }

    #[test]
    fn membership_errors() {
        let mut st = TraceState::new(4, 2, 2, ChainMode::Maximal).unwrap();
        let a = set(4, &[1, 2]);
        assert!(st.remove(a).is_err());
        assert!(st.try_add(a).unwrap());
        assert!(st.try_add(a).is_err());
        assert!(st.try_add(set(4, &[1, 2, 3])).is_err());
        assert!(st.try_add(set(5, &[1, 2])).is_err());
    }

    #[test]
    fn parameter_guards() {
        assert!(TraceState::new(4, 2, 0, ChainMode::Maximal).is_err());
        assert!(TraceState::new(4, 2, 5, ChainMode::Maximal).is_err());
        assert!(TraceState::new(4, 2, 1, ChainMode::Almost).is_err());
        assert!(TraceState::new(4, 0, 2, ChainMode::Maximal).is_err());
        assert!(TraceState::new(33, 2, 2, ChainMode::Maximal).is_err());
        // C(28,14) * 2^14 cells is far over the table cap.
        assert!(TraceState::new(28, 14, 14, ChainMode::Maximal).is_err());
    }
}
