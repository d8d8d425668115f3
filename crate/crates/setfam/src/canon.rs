//! Canonical forms under ground-set relabeling.
//!
//! The canonical form of a family is the lexicographically least member
//! list (as sorted bit patterns) over all `n!` relabelings. Labels are
//! assigned one at a time; after `t` labels, members contained in the
//! assigned support have final values below `2^t` while every other member
//! ends up at `2^t` or more, so the sorted finished values form a decided
//! prefix of the final sorted list. A branch whose decided prefix already
//! beats the incumbent must win, one that loses must be pruned, and ties
//! keep searching. Small ground sets only; the guard keeps the factorial
//! honest.

use crate::error::{Error, Result};
use crate::family::KFamily;
use crate::mask::Permutation;

/// Largest ground set `canonical_form` accepts.
pub const CANON_MAX_GROUND: u32 = 10;

/// A family in canonical form, with one relabeling that produced it.
///
/// The certificate maps the input family onto `family`; several
/// relabelings may do so, and the first one found in assignment order is
/// kept, so equal inputs yield equal certificates.
#[derive(Clone, Debug)]
pub struct CanonicalFamily {
    pub family: KFamily,
    pub certificate: Permutation,
}

pub fn canonical_form(fam: &KFamily) -> Result<CanonicalFamily> {
    let n = fam.n();
    if n > CANON_MAX_GROUND {
        return Err(Error::CanonGuard {
            n,
            limit: CANON_MAX_GROUND,
        });
    }
    let identity = Permutation::identity(n)?;
    if fam.is_empty() {
        return Ok(CanonicalFamily {
            family: fam.clone(),
            certificate: identity,
        });
    }
    let members: Vec<u32> = fam.members().iter().map(|m| m.bits()).collect();
    let mut best: Vec<u32> = members.clone();
    let mut best_assign: Vec<u32> = (0..n).collect();
    let mut assign: Vec<u32> = Vec::with_capacity(n as usize);
    descend(
        &members,
        n,
        0,
        &mut assign,
        &mut best,
        &mut best_assign,
    );
    // assign[t] = old 0-based element receiving new label t + 1
    let mut images = vec![0u32; n as usize];
    for (t, &old) in best_assign.iter().enumerate() {
        images[old as usize] = t as u32 + 1;
    }
    let certificate = Permutation::new(n, &images)?;
    let canon = fam.relabel(&certificate)?;
    debug_assert_eq!(
        canon.members().iter().map(|m| m.bits()).collect::<Vec<_>>(),
        best
    );
    Ok(CanonicalFamily {
        family: canon,
        certificate,
    })
}

fn descend(
    members: &[u32],
    n: u32,
    used: u32,
    assign: &mut Vec<u32>,
    best: &mut Vec<u32>,
    best_assign: &mut Vec<u32>,
) {
    let t = assign.len() as u32;
    if t == n {
        let full = relabeled_values(members, assign, used);
        if full < *best {
            *best = full;
            *best_assign = assign.clone();
        }
        return;
    }
    for old in 0..n {
        if used & (1 << old) != 0 {
            continue;
        }
        assign.push(old);
        let used2 = used | (1 << old);
        let decided = decided_prefix(members, assign, used2);
        // Compare the decided prefix against the incumbent. A strictly
        // smaller prefix wins no matter how the branch finishes; a
        // strictly larger one cannot recover.
        let verdict = decided.iter().zip(best.iter()).find_map(|(d, b)| {
            (d != b).then_some(d < b)
        });
        if decided.len() == members.len() {
            // Every member is decided: later labels touch no member, so
            // finish the assignment in ascending order.
            if verdict == Some(true) {
                *best = decided;
                *best_assign = assign.clone();
                for rest in 0..n {
                    if used2 & (1 << rest) == 0 {
                        best_assign.push(rest);
                    }
                }
            }
        } else if verdict != Some(false) {
            descend(members, n, used2, assign, best, best_assign);
        }
        assign.pop();
    }
}

/// Sorted final values of the members fully inside the assigned support.
fn decided_prefix(members: &[u32], assign: &[u32], used: u32) -> Vec<u32> {
    let mut vals: Vec<u32> = members
        .iter()
        .filter(|&&m| m & !used == 0)
        .map(|&m| relabel_bits(m, assign))
        .collect();
    vals.sort_unstable();
    vals
}

/// Sorted final values of all members (assignment complete).
fn relabeled_values(members: &[u32], assign: &[u32], used: u32) -> Vec<u32> {
    debug_assert_eq!(used.count_ones() as usize, assign.len());
    let mut vals: Vec<u32> = members
        .iter()
        .map(|&m| relabel_bits(m, assign))
        .collect();
    vals.sort_unstable();
    vals
}

fn relabel_bits(m: u32, assign: &[u32]) -> u32 {
    let mut out = 0u32;
    for (t, &old) in assign.iter().enumerate() {
        if m & (1 << old) != 0 {
            out |= 1 << t;
        }
    }
    out
}
