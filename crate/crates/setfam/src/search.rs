//! Branch-and-bound over the set-enumeration tree of admissible families.
//!
//! Members are candidates in ascending bit order; each tree node extends
//! the chosen family with one candidate larger than everything chosen so
//! far. Admissibility is hereditary, so a candidate refused at a node
//! stays refused below it and candidate lists only shrink down a branch.
//! The bound at a node is `chosen + individually addable candidates`.
//!
//! Symmetry breaking roots the tree at `{1, .., k}`: relabeling maps any
//! nonempty admissible family onto one containing the least `k`-set, so
//! both the optimum and the set of extremal classes survive the
//! restriction. In maximal mode the incumbent is seeded with the larger
//! classical construction after re-checking its admissibility.
//!
//! Worker counts never change the optimum: the shared incumbent size only
//! grows, and a stale read merely prunes less. Witness identity and node
//! counts are reproducible in single-worker runs only.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::canon::{canonical_form, CANON_MAX_GROUND};
use crate::chain::{is_w_admissible, ChainMode};
use crate::constructions::lower_bound_construction;
use crate::error::{Error, Result};
use crate::family::KFamily;
use crate::mask::{k_subsets, SetMask};
use crate::state::TraceState;

/// Ground sets above this need an explicit override.
pub const SEARCH_MAX_GROUND: u32 = 12;

/// Which chain shape the searched families must avoid.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Mode {
    /// Maximal chains forbidden.
    W,
    /// Almost-maximal chains forbidden (`r >= 2`).
    U,
}

impl Mode {
    pub fn chain_mode(self) -> ChainMode {
        match self {
            Mode::W => ChainMode::Maximal,
            Mode::U => ChainMode::Almost,
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::W => write!(f, "W"),
            Mode::U => write!(f, "U"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "W" | "w" => Ok(Mode::W),
            "U" | "u" => Ok(Mode::U),
            other => Err(format!("unknown mode {other:?}, expected W or U")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchParams {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub mode: Mode,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Root the tree at `{1, .., k}`. Sound for values and classes alike;
    /// turning it off is mainly useful for cross-checking.
    pub symmetry_break: bool,
    /// Worker threads. Enumeration and deterministic-witness runs always
    /// explore single-worker.
    pub threads: usize,
    /// Stop after this many tree nodes and report a lower bound.
    pub node_limit: Option<u64>,
    /// Stop after this much wall time and report a lower bound.
    pub time_limit: Option<Duration>,
    /// Collect every extremal family up to relabeling.
    pub enumerate_all: bool,
    /// Force bit-reproducible witnesses by exploring single-worker.
    pub deterministic_witness: bool,
    /// Accept ground sets above [`SEARCH_MAX_GROUND`] (still capped by the
    /// trace-table size).
    pub override_size_guard: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            symmetry_break: true,
            threads: 1,
            node_limit: None,
            time_limit: None,
            enumerate_all: false,
            deterministic_witness: false,
            override_size_guard: false,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SearchStatus {
    /// The search ran to completion; the optimum is exact.
    Optimal,
    /// A limit stopped the search; the value is only a lower bound.
    LowerBoundOnly,
}

impl std::fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchStatus::Optimal => write!(f, "optimal"),
            SearchStatus::LowerBoundOnly => write!(f, "lower-bound-only"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub params: SearchParams,
    pub optimum: usize,
    pub status: SearchStatus,
    /// An admissible family of size `optimum`.
    pub witness: KFamily,
    /// Canonical forms of every extremal family, ascending; present only
    /// for completed enumeration runs.
    pub extremal_classes: Option<Vec<KFamily>>,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Largest family over `[n]` whose traces on `r`-sets avoid maximal
/// chains.
pub fn compute_w(n: u32, k: u32, r: u32, opts: &SearchOptions) -> Result<SearchResult> {
    search(
        SearchParams {
            n,
            k,
            r,
            mode: Mode::W,
        },
        opts,
    )
}

/// Largest family over `[n]` whose traces on `r`-sets avoid
/// almost-maximal chains (`r >= 2`).
pub fn compute_u(n: u32, k: u32, r: u32, opts: &SearchOptions) -> Result<SearchResult> {
    search(
        SearchParams {
            n,
            k,
            r,
            mode: Mode::U,
        },
        opts,
    )
}

/// All extremal families up to relabeling, as canonical forms.
pub fn enumerate_extremal(
    n: u32,
    k: u32,
    r: u32,
    mode: Mode,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    let mut opts = opts.clone();
    opts.enumerate_all = true;
    search(SearchParams { n, k, r, mode }, &opts)
}

pub fn search(params: SearchParams, opts: &SearchOptions) -> Result<SearchResult> {
    let SearchParams { n, k, r, mode } = params;
    if n > SEARCH_MAX_GROUND && !opts.override_size_guard {
        return Err(Error::SearchGuard {
            n,
            limit: SEARCH_MAX_GROUND,
        });
    }
    if opts.enumerate_all && n > CANON_MAX_GROUND {
        return Err(Error::CanonGuard {
            n,
            limit: CANON_MAX_GROUND,
        });
    }
    if opts.threads == 0 {
        return Err(Error::ZeroOption {
            what: "thread count",
        });
    }
    if opts.node_limit == Some(0) {
        return Err(Error::ZeroOption { what: "node limit" });
    }
    if opts.time_limit == Some(Duration::ZERO) {
        return Err(Error::ZeroOption { what: "time limit" });
    }
    let start = Instant::now();
    let mut root = TraceState::new(n, k, r, mode.chain_mode())?;

    let shared = Shared {
        best: AtomicUsize::new(0),
        incumbent: Mutex::new(Vec::new()),
        stop: AtomicBool::new(false),
        nodes: AtomicU64::new(0),
        node_limit: opts.node_limit,
        deadline: opts.time_limit.map(|d| start + d),
    };

    // Seed the incumbent in maximal mode. The construction is known
    // admissible; the cheap re-check keeps a defect there from silently
    // corrupting the search.
    if mode == Mode::W && k >= r {
        if let Ok(c) = lower_bound_construction(n, k, r) {
            if is_w_admissible(&c, r)? {
                let bits: Vec<u32> = c.members().iter().map(|m| m.bits()).collect();
                shared.offer(&bits);
            }
        }
    }

    let universe: Vec<u32> = k_subsets(n, k).map(|m| m.bits()).collect();
    let (prefix, root_cands) = if opts.symmetry_break {
        universe.split_at(1)
    } else {
        universe.split_at(0)
    };
    for &m in prefix {
        let joined = root.try_add_bits(m);
        debug_assert!(joined, "least k-set joins an empty state");
    }

    let enumerate = opts.enumerate_all;
    let workers = if enumerate || opts.deterministic_witness {
        1
    } else {
        opts.threads
    };

    let mut extremal_classes = None;
    if workers <= 1 {
        let mut dfs = Dfs {
            state: root,
            shared: &shared,
            enumerate,
            class_size: 0,
            raw_classes: Vec::new(),
        };
        dfs.run(root_cands);
        if enumerate && !shared.stop.load(Ordering::Relaxed) {
            extremal_classes = Some(canonical_classes(n, k, &dfs.raw_classes)?);
        }
    } else {
        // Depth-one task split: the root is handled here, each first
        // branch becomes a job, workers claim jobs in ascending order.
        if !shared.register_node() {
            shared.offer(root.chosen_bits());
            let root_size = root.len();
            let addable = filter_addable(&mut root, root_cands);
            if root_size + addable.len() > shared.best() {
                let next = AtomicUsize::new(0);
                let next_ref = &next;
                let root_ref = &root;
                let shared_ref = &shared;
                let addable_ref = &addable;
                std::thread::scope(|scope| {
                    for _ in 0..workers {
                        scope.spawn(move || loop {
                            if shared_ref.stop.load(Ordering::Relaxed) {
                                break;
                            }
                            let i = next_ref.fetch_add(1, Ordering::Relaxed);
                            if i >= addable_ref.len() {
                                break;
                            }
                            if root_size + (addable_ref.len() - i) <= shared_ref.best() {
                                break;
                            }
                            let mut st = root_ref.clone();
                            let joined = st.try_add_bits(addable_ref[i]);
                            assert!(joined, "addable candidate rejoins the root state");
                            let mut dfs = Dfs {
                                state: st,
                                shared: shared_ref,
                                enumerate: false,
                                class_size: 0,
                                raw_classes: Vec::new(),
                            };
                            dfs.run(&addable_ref[i + 1..]);
                        });
                    }
                });
            }
        }
    }

    let status = if shared.stop.load(Ordering::Relaxed) {
        SearchStatus::LowerBoundOnly
    } else {
        SearchStatus::Optimal
    };
    let witness_bits = shared.incumbent.into_inner().expect("search workers joined");
    let witness = family_from_bits(n, k, &witness_bits)?;
    Ok(SearchResult {
        params,
        optimum: witness_bits.len(),
        status,
        witness,
        extremal_classes,
        nodes: shared.nodes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    })
}

struct Shared {
    /// Mirror of the incumbent size for cheap bound checks. May lag the
    /// mutex-held truth, only ever downward, which merely weakens pruning.
    best: AtomicUsize,
    incumbent: Mutex<Vec<u32>>,
    stop: AtomicBool,
    nodes: AtomicU64,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
}

impl Shared {
    fn best(&self) -> usize {
        self.best.load(Ordering::Relaxed)
    }

    /// Counts a node against the limits. Returns true when the caller
    /// must stop instead of processing it.
    fn register_node(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return true;
        }
        let count = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(limit) = self.node_limit {
            if count > limit {
                self.nodes.fetch_sub(1, Ordering::Relaxed);
                self.stop.store(true, Ordering::Relaxed);
                return true;
            }
        }
        if let Some(deadline) = self.deadline {
            if count & 0x3F == 0 && Instant::now() >= deadline {
                self.stop.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    }

    fn offer(&self, chosen: &[u32]) {
        if chosen.len() <= self.best() {
            return;
        }
        let mut incumbent = self.incumbent.lock().expect("incumbent lock");
        if chosen.len() > incumbent.len() {
            *incumbent = chosen.to_vec();
            self.best.store(incumbent.len(), Ordering::Relaxed);
        }
    }
}

struct Dfs<'a> {
    state: TraceState,
    shared: &'a Shared,
    enumerate: bool,
    class_size: usize,
    raw_classes: Vec<Vec<u32>>,
}

impl Dfs<'_> {
    fn run(&mut self, cands: &[u32]) {
        if self.shared.register_node() {
            return;
        }
        let size = self.state.len();
        self.shared.offer(self.state.chosen_bits());
        if self.enumerate && size == self.shared.best() {
            if size > self.class_size {
                self.raw_classes.clear();
                self.class_size = size;
            }
            self.raw_classes.push(self.state.chosen_bits().to_vec());
        }
        let addable = filter_addable(&mut self.state, cands);
        for i in 0..addable.len() {
            let best = self.shared.best();
            let ceiling = size + (addable.len() - i);
            let hopeless = if self.enumerate {
                ceiling < best
            } else {
                ceiling <= best
            };
            if hopeless {
                break;
            }
            let bits = addable[i];
            let joined = self.state.try_add_bits(bits);
            debug_assert!(joined, "filtered candidate still joins");
            self.run(&addable[i + 1..]);
            self.state.remove_bits(bits);
            if self.shared.stop.load(Ordering::Relaxed) {
                return;
            }
        }
    }
}

fn filter_addable(state: &mut TraceState, cands: &[u32]) -> Vec<u32> {
    cands
        .iter()
        .copied()
        .filter(|&c| state.can_add_bits(c))
        .collect()
}

fn family_from_bits(n: u32, k: u32, bits: &[u32]) -> Result<KFamily> {
    let members = bits
        .iter()
        .map(|&b| SetMask::from_bits(n, b))
        .collect::<Result<Vec<_>>>()?;
    KFamily::new(n, k, members)
}

/// Deduplicates raw extremal families up to relabeling; ascending by
/// canonical member list.
fn canonical_classes(n: u32, k: u32, raw: &[Vec<u32>]) -> Result<Vec<KFamily>> {
    let mut seen = std::collections::BTreeSet::new();
    for bits in raw {
        let fam = family_from_bits(n, k, bits)?;
        let canon = canonical_form(&fam)?.family;
        let key: Vec<u32> = canon.members().iter().map(|m| m.bits()).collect();
        seen.insert(key);
    }
    seen.iter()
        .map(|key| family_from_bits(n, k, key))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{is_admissible, is_u_admissible};
    use crate::constructions::{small_ground_family, star_family, w_formula};

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(compute_w(13, 2, 2, &opts()).is_err());
        assert!(compute_w(0, 1, 1, &opts()).is_err());
        assert!(compute_w(4, 5, 2, &opts()).is_err());
        assert!(compute_w(4, 2, 0, &opts()).is_err());
        assert!(compute_u(4, 2, 1, &opts()).is_err());
        let zero_threads = SearchOptions {
            threads: 0,
            ..opts()
        };
        assert!(compute_w(4, 2, 2, &zero_threads).is_err());
        let zero_nodes = SearchOptions {
            node_limit: Some(0),
            ..opts()
        };
        assert!(compute_w(4, 2, 2, &zero_nodes).is_err());
    }

    #[test]
    fn rank_one_forces_single_member() {
        for (n, k) in [(3, 1), (5, 2), (6, 4)] {
            let res = compute_w(n, k, 1, &opts()).unwrap();
            assert_eq!(res.optimum, 1, "W({n},{k},1)");
            assert_eq!(res.status, SearchStatus::Optimal);
            assert_eq!(res.witness.len(), 1);
        }
    }

    #[test]
    fn uniformity_below_rank_gives_everything() {
        // k < r: no r-set can be covered, every family qualifies.
        let res = compute_w(4, 2, 3, &opts()).unwrap();
        assert_eq!(res.optimum, 6);
        let res = compute_u(4, 2, 3, &opts()).unwrap();
        assert_eq!(res.optimum, 6);
    }

    #[test]
    fn small_maximal_mode_values() {
        for (n, k, r, want) in [
            (3, 2, 2, 3),
            (4, 2, 2, 3),
            (5, 2, 2, 4),
            (6, 2, 2, 5),
            (4, 3, 2, 4),
            (5, 3, 2, 4),
            (6, 3, 2, 4),
            (7, 3, 2, 5),
            (5, 3, 3, 10),
        ] {
            let res = compute_w(n, k, r, &opts()).unwrap();
            assert_eq!(res.optimum, want, "W({n},{k},{r})");
            assert_eq!(res.status, SearchStatus::Optimal);
            assert_eq!(res.witness.len(), want);
            assert!(is_admissible(&res.witness, r, ChainMode::Maximal).unwrap());
        }
    }

    #[test]
    fn small_almost_mode_values() {
        for (n, k, r, want) in [
            (3, 2, 2, 1),
            (4, 2, 2, 2),
            (5, 2, 2, 2),
            (6, 2, 2, 3),
            (4, 3, 2, 1),
            (5, 3, 2, 1),
            (6, 3, 2, 2),
        ] {
            let res = compute_u(n, k, r, &opts()).unwrap();
            assert_eq!(res.optimum, want, "U({n},{k},{r})");
            assert!(is_u_admissible(&res.witness, r).unwrap());
        }
    }

    #[test]
    fn symmetry_break_does_not_change_values() {
        let plain = SearchOptions {
            symmetry_break: false,
            ..opts()
        };
        for (n, k, r) in [(5, 2, 2), (5, 3, 2), (4, 2, 2), (5, 3, 3)] {
            let a = compute_w(n, k, r, &opts()).unwrap().optimum;
            let b = compute_w(n, k, r, &plain).unwrap().optimum;
            assert_eq!(a, b, "W({n},{k},{r}) with and without symmetry");
        }
        for (n, k, r) in [(5, 2, 2), (6, 3, 2)] {
            let a = compute_u(n, k, r, &opts()).unwrap().optimum;
            let b = compute_u(n, k, r, &plain).unwrap().optimum;
            assert_eq!(a, b, "U({n},{k},{r}) with and without symmetry");
        }
    }

    #[test]
    fn node_limit_degrades_to_lower_bound() {
        let limited = SearchOptions {
            node_limit: Some(1),
            ..opts()
        };
        let res = compute_w(7, 3, 2, &limited).unwrap();
        assert_eq!(res.status, SearchStatus::LowerBoundOnly);
        assert!(res.nodes <= 1);
        // The seeded construction keeps the bound honest even at one node.
        assert_eq!(res.optimum, 5);
    }

    #[test]
    fn enumerate_finds_both_ties_at_the_threshold() {
        // At n = 2k the star and the small-ground family tie; both
        // classes must surface.
        let res = enumerate_extremal(4, 2, 2, Mode::W, &opts()).unwrap();
        let classes = res.extremal_classes.as_ref().unwrap();
        assert_eq!(res.optimum, 3);
        assert_eq!(classes.len(), 2);
        let star = canonical_form(&star_family(4, 2, 2).unwrap()).unwrap().family;
        let small = canonical_form(&small_ground_family(4, 2, 2).unwrap())
            .unwrap()
            .family;
        assert!(classes.contains(&star));
        assert!(classes.contains(&small));
    }

    #[test]
    fn enumerate_unique_star_past_the_threshold() {
        let res = enumerate_extremal(5, 2, 2, Mode::W, &opts()).unwrap();
        let classes = res.extremal_classes.unwrap();
        assert_eq!(classes.len(), 1);
        let star = canonical_form(&star_family(5, 2, 2).unwrap()).unwrap().family;
        assert_eq!(classes[0], star);
    }

    #[test]
    fn enumerate_matches_unrestricted_tree() {
        let plain = SearchOptions {
            symmetry_break: false,
            ..opts()
        };
        for (n, k, r) in [(4, 2, 2), (5, 2, 2), (4, 3, 2)] {
            let a = enumerate_extremal(n, k, r, Mode::W, &opts()).unwrap();
            let b = enumerate_extremal(n, k, r, Mode::W, &plain).unwrap();
            let ca = a.extremal_classes.unwrap();
            let cb = b.extremal_classes.unwrap();
            assert_eq!(ca.len(), cb.len(), "class count at ({n},{k},{r})");
            for (x, y) in ca.iter().zip(&cb) {
                assert_eq!(x, y, "classes at ({n},{k},{r})");
            }
        }
    }

    #[test]
    fn multi_worker_value_matches_single() {
        for threads in [2, 4] {
            let par = SearchOptions {
                threads,
                ..opts()
            };
            for (n, k, r) in [(6, 2, 2), (6, 3, 2), (5, 3, 3)] {
                let a = compute_w(n, k, r, &opts()).unwrap();
                let b = compute_w(n, k, r, &par).unwrap();
                assert_eq!(a.optimum, b.optimum, "threads={threads} at ({n},{k},{r})");
                assert_eq!(b.status, SearchStatus::Optimal);
                assert!(is_admissible(&b.witness, r, ChainMode::Maximal).unwrap());
            }
        }
    }

    #[test]
    fn single_worker_reruns_are_identical() {
        let a = compute_w(6, 3, 2, &opts()).unwrap();
        let b = compute_w(6, 3, 2, &opts()).unwrap();
        assert_eq!(a.optimum, b.optimum);
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn witness_meets_formula_at_the_threshold() {
        for (n, k, r) in [(5, 2, 2), (6, 2, 2), (7, 3, 2)] {
            let res = compute_w(n, k, r, &opts()).unwrap();
            assert_eq!(res.optimum as u64, w_formula(n, k, r).unwrap());
        }
    }
}
