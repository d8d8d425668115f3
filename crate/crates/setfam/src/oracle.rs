//! Exhaustive cross-check, deliberately naive.
//!
//! Scans every subfamily of the k-subsets and tests each one from
//! scratch through the public admissibility predicates. No incremental
//! state, no bounds beyond a popcount skip, no symmetry: an independent
//! implementation path for validating the optimized search on small
//! instances.

use crate::chain::{is_u_admissible, is_w_admissible};
use crate::error::{Error, Result};
use crate::family::KFamily;
use crate::mask::{binomial, k_subsets, SetMask};
use crate::search::Mode;

/// Largest candidate count the scan will accept; `2^20` subfamilies.
pub const ORACLE_MAX_SUBSETS: u64 = 20;

#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub optimum: usize,
    pub witness: KFamily,
    /// Admissibility checks performed.
    pub nodes: u64,
}

/// Optimum by brute force over all `2^C(n,k)` subfamilies.
pub fn exhaustive_optimum(n: u32, k: u32, r: u32, mode: Mode) -> Result<OracleOutcome> {
    if r == 0 || r > n {
        return Err(Error::RankRange { r, n });
    }
    if mode == Mode::U && r < 2 {
        return Err(Error::AlmostRank { r });
    }
    let total = binomial(n as u64, k as u64);
    if total > ORACLE_MAX_SUBSETS {
        return Err(Error::OracleGuard {
            subsets: total,
            limit: ORACLE_MAX_SUBSETS,
        });
    }
    let admissible = |fam: &KFamily| match mode {
        Mode::W => is_w_admissible(fam, r),
        Mode::U => is_u_admissible(fam, r),
    };
    let candidates: Vec<SetMask> = k_subsets(n, k).collect();
    let t = candidates.len();
    let mut best = 0usize;
    let mut witness = KFamily::empty(n, k)?;
    let mut nodes = 0u64;
    for m in 1u64..(1u64 << t) {
        if (m.count_ones() as usize) <= best {
            continue;
        }
        let members: Vec<SetMask> = (0..t)
            .filter(|&i| m >> i & 1 == 1)
            .map(|i| candidates[i])
            .collect();
        let fam = KFamily::new(n, k, members)?;
        nodes += 1;
        if admissible(&fam)? {
            best = fam.len();
            witness = fam;
        }
    }
    Ok(OracleOutcome {
        optimum: best,
        witness,
        nodes,
    })
}
