//! Shared test helpers: a permutation-scan chain oracle and seeded
//! random generators. The oracle tries every element order of the
//! window explicitly, so it shares no logic with the reachability DP
//! it cross-checks.
//!
//! Each integration test target compiles its own copy and uses a
//! different subset of the helpers.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use setfam::{k_subsets, ChainMode, KFamily, SetMask, Trace};

/// Does the trace contain a full tower for this mode? Decided by trying
/// all |x|! element orders and testing every prefix level for presence.
pub fn brute_trace_has_chain(tr: &Trace, mode: ChainMode) -> bool {
    let n = tr.x().ground_size();
    let elems: Vec<u32> = tr.x().elements().collect();
    let r = elems.len();
    let start = mode.start_size() as usize;
    let mut order: Vec<u32> = Vec::with_capacity(r);
    let mut pool = elems;
    tower_order_exists(tr, n, &mut order, &mut pool, start)
}

fn tower_order_exists(
    tr: &Trace,
    n: u32,
    order: &mut Vec<u32>,
    pool: &mut Vec<u32>,
    start: usize,
) -> bool {
    if pool.is_empty() {
        return (start..=order.len()).all(|len| {
            let lvl = SetMask::from_elements(n, &order[..len]).unwrap();
            tr.contains_pattern(lvl)
        });
    }
    for i in 0..pool.len() {
        let e = pool.remove(i);
        order.push(e);
        let found = tower_order_exists(tr, n, order, pool, start);
        order.pop();
        pool.insert(i, e);
        if found {
            return true;
        }
    }
    false
}

/// Admissibility decided entirely by the permutation-scan oracle.
pub fn brute_is_admissible(fam: &KFamily, r: u32, mode: ChainMode) -> bool {
    k_subsets(fam.n(), r).all(|x| {
        let tr = Trace::of_family(fam, x).unwrap();
        !brute_trace_has_chain(&tr, mode)
    })
}

/// A uniformly chosen k-subset of [n].
pub fn random_k_set(rng: &mut ChaCha8Rng, n: u32, k: u32) -> SetMask {
    let mut elems: Vec<u32> = (1..=n).collect();
    for i in 0..k as usize {
        let j = rng.random_range(i..elems.len());
        elems.swap(i, j);
    }
    SetMask::from_elements(n, &elems[..k as usize]).unwrap()
}

/// A random family of distinct k-subsets, any admissibility. The size
/// request is clamped to the number of k-subsets that exist.
pub fn random_family(rng: &mut ChaCha8Rng, n: u32, k: u32, size: usize) -> KFamily {
    let size = size.min(setfam::binomial(n as u64, k as u64) as usize);
    let mut members = Vec::new();
    while members.len() < size {
        let m = random_k_set(rng, n, k);
        if !members.contains(&m) {
            members.push(m);
        }
    }
    KFamily::new(n, k, members).unwrap()
}

/// Random valid shape: n in 3..=8, k in 1..=min(4,n), r in lo..=min(3,n).
pub fn random_shape(rng: &mut ChaCha8Rng, mode: ChainMode) -> (u32, u32, u32) {
    let n = rng.random_range(3..=8);
    let k = rng.random_range(1..=n.min(4));
    let r = rng.random_range(mode.min_rank()..=n.min(3));
    (n, k, r)
}

/// A uniformly chosen permutation of [n].
pub fn random_permutation(rng: &mut ChaCha8Rng, n: u32) -> setfam::Permutation {
    let mut images: Vec<u32> = (1..=n).collect();
    for i in (1..images.len()).rev() {
        let j = rng.random_range(0..=i);
        images.swap(i, j);
    }
    setfam::Permutation::new(n, &images).unwrap()
}
