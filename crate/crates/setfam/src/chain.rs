//! Traces and chain detection.
//!
//! The trace of a family on a set `X` is the collection of distinct
//! patterns `A ∩ X` over the members `A`. For `|X| = r`, a maximal chain
//! in the trace is a tower of realized patterns
//! `∅ = S_0 ⊂ S_1 ⊂ .. ⊂ S_r = X` with `|S_i| = i`; the almost-maximal
//! variant drops the empty level and starts at a singleton, so it only
//! makes sense for `r >= 2`.
//!
//! Detection walks realized patterns in ascending bit order. Every proper
//! subpattern of `p` is numerically smaller than `p`, so a single pass
//! suffices: a pattern is reachable when some one-element-smaller
//! subpattern is realized and reachable, seeded at the bottom level of the
//! chain shape. This costs `O(|patterns| * r * log)` per trace instead of
//! enumerating the `r!` towers.

use crate::error::{Error, Result};
use crate::family::KFamily;
use crate::mask::{k_subsets, SetMask};

/// Which chain shape disqualifies a trace.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ChainMode {
    /// Full towers from `∅` up to `X`.
    Maximal,
    /// Towers from a singleton up to `X`.
    Almost,
}

impl ChainMode {
    /// Number of levels in a chain over an `r`-set.
    pub fn levels(self, r: u32) -> u32 {
        match self {
            ChainMode::Maximal => r + 1,
            ChainMode::Almost => r,
        }
    }

    /// Size of the bottom level.
    pub fn start_size(self) -> u32 {
        match self {
            ChainMode::Maximal => 0,
            ChainMode::Almost => 1,
        }
    }

    /// Smallest rank the shape is defined for.
    pub fn min_rank(self) -> u32 {
        match self {
            ChainMode::Maximal => 1,
            ChainMode::Almost => 2,
        }
    }
}

impl std::fmt::Display for ChainMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChainMode::Maximal => write!(f, "maximal"),
            ChainMode::Almost => write!(f, "almost-maximal"),
        }
    }
}

/// The trace of a family on a fixed set: the realized intersection
/// patterns, sorted ascending by bit pattern and deduplicated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Trace {
    x: SetMask,
    patterns: Vec<SetMask>,
}

impl Trace {
    /// Builds a trace from explicit patterns. Patterns must live inside
    /// `x`; duplicates collapse.
    pub fn new(x: SetMask, mut patterns: Vec<SetMask>) -> Result<Self> {
        for p in &patterns {
            if p.ground_size() != x.ground_size() {
                return Err(Error::GroundMismatch {
                    expected: x.ground_size(),
                    got: p.ground_size(),
                });
            }
            if !p.is_subset_of(x) {
                return Err(Error::PatternNotInside {
                    pattern: p.to_string(),
                    x: x.to_string(),
                });
            }
        }
        patterns.sort();
        patterns.dedup();
        Ok(Trace { x, patterns })
    }

    /// The trace of `fam` on `x`.
    pub fn of_family(fam: &KFamily, x: SetMask) -> Result<Self> {
        if x.ground_size() != fam.n() {
            return Err(Error::GroundMismatch {
                expected: fam.n(),
                got: x.ground_size(),
            });
        }
        let mut patterns: Vec<SetMask> = fam.members().iter().map(|&m| m.intersection(x)).collect();
        patterns.sort();
        patterns.dedup();
        Ok(Trace { x, patterns })
    }

    pub fn x(&self) -> SetMask {
        self.x
    }

    pub fn patterns(&self) -> &[SetMask] {
        &self.patterns
    }

    pub fn contains_pattern(&self, p: SetMask) -> bool {
        self.patterns.binary_search(&p).is_ok()
    }

    fn index_of_bits(&self, bits: u32) -> Option<usize> {
        self.patterns.binary_search_by_key(&bits, |m| m.bits()).ok()
    }

    /// Whether the realized patterns contain a chain of the given shape.
    pub fn has_chain(&self, mode: ChainMode) -> Result<bool> {
        let r = self.x.len();
        if r == 0 {
            return Err(Error::RankRange {
                r: 0,
                n: self.x.ground_size(),
            });
        }
        if r < mode.min_rank() {
            return Err(Error::AlmostRank { r });
        }
        let Some(top) = self.index_of_bits(self.x.bits()) else {
            return Ok(false);
        };
        let mut reach = vec![false; self.patterns.len()];
        for i in 0..self.patterns.len() {
            let p = self.patterns[i].bits();
            reach[i] = match (mode, self.patterns[i].len()) {
                (ChainMode::Maximal, 0) => true,
                (ChainMode::Almost, 0) => false,
                (ChainMode::Almost, 1) => true,
                _ => {
                    let mut rest = p;
                    let mut found = false;
                    while rest != 0 {
                        let b = rest & rest.wrapping_neg();
                        if let Some(j) = self.index_of_bits(p ^ b) {
                            if reach[j] {
                                found = true;
                                break;
                            }
                        }
                        rest ^= b;
                    }
                    found
                }
            };
        }
        Ok(reach[top])
    }
}

/// Whether a trace over an `r`-set contains a maximal chain.
pub fn has_maximal_chain(tr: &Trace, r: u32) -> Result<bool> {
    check_trace_rank(tr, r)?;
    tr.has_chain(ChainMode::Maximal)
}

/// Whether a trace over an `r`-set contains an almost-maximal chain.
pub fn has_almost_maximal_chain(tr: &Trace, r: u32) -> Result<bool> {
    check_trace_rank(tr, r)?;
    tr.has_chain(ChainMode::Almost)
}

fn check_trace_rank(tr: &Trace, r: u32) -> Result<()> {
    if r == 0 || tr.x().len() != r {
        return Err(Error::RankRange {
            r,
            n: tr.x().ground_size(),
        });
    }
    Ok(())
}

fn check_rank(n: u32, r: u32, mode: ChainMode) -> Result<()> {
    if r == 0 || r > n {
        return Err(Error::RankRange { r, n });
    }
    if r < mode.min_rank() {
        return Err(Error::AlmostRank { r });
    }
    Ok(())
}

/// No trace on an `r`-subset contains a chain of the given shape.
pub fn is_admissible(fam: &KFamily, r: u32, mode: ChainMode) -> Result<bool> {
    check_rank(fam.n(), r, mode)?;
    for x in k_subsets(fam.n(), r) {
        if Trace::of_family(fam, x)?.has_chain(mode)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// No trace on an `r`-subset contains a maximal chain.
pub fn is_w_admissible(fam: &KFamily, r: u32) -> Result<bool> {
    is_admissible(fam, r, ChainMode::Maximal)
}

/// No trace on an `r`-subset contains an almost-maximal chain (`r >= 2`).
pub fn is_u_admissible(fam: &KFamily, r: u32) -> Result<bool> {
    is_admissible(fam, r, ChainMode::Almost)
}

/// A concrete chain found in some trace, with one realizing member per
/// level. Evidence for inadmissibility that can be checked independently.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainWitness {
    pub x: SetMask,
    pub mode: ChainMode,
    /// Chain levels, ascending; `levels[i]` has `start_size + i` elements.
    pub levels: Vec<SetMask>,
    /// `realizers[i]` is a member with `realizers[i] ∩ x = levels[i]`.
    pub realizers: Vec<SetMask>,
}

impl ChainWitness {
    /// Re-checks every claim the witness makes against `fam`.
    pub fn verify_against(&self, fam: &KFamily) -> bool {
        let r = self.x.len();
        if self.x.ground_size() != fam.n() || r < self.mode.min_rank() {
            return false;
        }
        if self.levels.len() != self.mode.levels(r) as usize
            || self.realizers.len() != self.levels.len()
        {
            return false;
        }
        if self.levels[0].len() != self.mode.start_size()
            || *self.levels.last().unwrap() != self.x
        {
            return false;
        }
        for w in self.levels.windows(2) {
            if !w[0].is_subset_of(w[1]) || w[1].len() != w[0].len() + 1 {
                return false;
            }
        }
        self.levels
            .iter()
            .zip(&self.realizers)
            .all(|(&lvl, &m)| fam.contains(m) && m.intersection(self.x) == lvl)
    }
}

impl std::fmt::Display for ChainWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "trace on X = {} contains a {} chain:",
            self.x, self.mode
        )?;
        for (i, (lvl, m)) in self.levels.iter().zip(&self.realizers).enumerate() {
            let size = self.mode.start_size() as usize + i;
            writeln!(f, "  level {size}: {lvl} realized by {m}")?;
        }
        Ok(())
    }
}

/// Scans traces in ascending `x` order and extracts a chain from the first
/// one that has one. `None` means the family is admissible for this shape.
pub fn find_chain_witness(
    fam: &KFamily,
    r: u32,
    mode: ChainMode,
) -> Result<Option<ChainWitness>> {
    check_rank(fam.n(), r, mode)?;
    for x in k_subsets(fam.n(), r) {
        let tr = Trace::of_family(fam, x)?;
        if tr.has_chain(mode)? {
            let w = extract_witness(fam, &tr, mode)
                .expect("chain reported but not reconstructible");
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Rebuilds one concrete chain from a trace known to contain one. Walks
/// patterns in descending order marking those that extend to `x` one
/// element at a time, then greedily builds the lexicographically least
/// tower and picks the least realizer per level.
fn extract_witness(fam: &KFamily, tr: &Trace, mode: ChainMode) -> Option<ChainWitness> {
    let x = tr.x();
    let xbits = x.bits();
    let pats = tr.patterns();
    let mut up = vec![false; pats.len()];
    for i in (0..pats.len()).rev() {
        let p = pats[i].bits();
        up[i] = p == xbits || {
            let mut rest = xbits & !p;
            let mut found = false;
            while rest != 0 {
                let b = rest & rest.wrapping_neg();
                if let Some(j) = tr.index_of_bits(p | b) {
                    if up[j] {
                        found = true;
                        break;
                    }
                }
                rest ^= b;
            }
            found
        };
    }
    let start = (0..pats.len())
        .find(|&i| pats[i].len() == mode.start_size() && up[i])?;
    let mut levels = vec![pats[start]];
    while levels.last().unwrap().bits() != xbits {
        let cur = levels.last().unwrap().bits();
        let next = (0..pats.len()).find(|&j| {
            up[j] && pats[j].len() == cur.count_ones() + 1 && cur & !pats[j].bits() == 0
        })?;
        levels.push(pats[next]);
    }
    let realizers = levels
        .iter()
        .map(|&lvl| {
            fam.members()
                .iter()
                .copied()
                .find(|&m| m.intersection(x) == lvl)
        })
        .collect::<Option<Vec<_>>>()?;
    Some(ChainWitness {
        x,
        mode,
        levels,
        realizers,
    })
}
