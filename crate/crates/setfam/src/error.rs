use thiserror::Error;

/// Everything that can go wrong at an API boundary.
///
/// Mismatched ground sets inside a single operation (for example
/// intersecting masks built over different `n`) are programmer errors and
/// panic instead; the variants here cover invalid caller input, guard
/// violations, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ground-set size {n} out of range (need 1 <= n <= 32)")]
    GroundSize { n: u32 },

    #[error("element {element} out of range for ground set [{n}]")]
    ElementOutOfRange { element: u32, n: u32 },

    #[error("bit pattern {bits:#x} has bits above ground set [{n}]")]
    BitsOutOfRange { bits: u32, n: u32 },

    #[error("duplicate element {element}")]
    DuplicateElement { element: u32 },

    #[error("images do not form a permutation of [{n}]")]
    NotAPermutation { n: u32 },

    #[error("ground-set mismatch: expected [{expected}], got [{got}]")]
    GroundMismatch { expected: u32, got: u32 },

    #[error("uniformity {k} out of range for ground set [{n}] (need 1 <= k <= n)")]
    Uniformity { k: u32, n: u32 },

    #[error("member {member} has {got} elements, expected {expected}")]
    MemberSize {
        member: String,
        expected: u32,
        got: u32,
    },

    #[error("duplicate member {member}")]
    DuplicateMember { member: String },

    #[error("rank {r} out of range for ground set [{n}] (need 1 <= r <= n)")]
    RankRange { r: u32, n: u32 },

    #[error("almost-maximal chains need rank >= 2, got {r}")]
    AlmostRank { r: u32 },

    #[error("pattern {pattern} is not contained in {x}")]
    PatternNotInside { pattern: String, x: String },

    #[error("need at least two members, family has {got}")]
    NeedTwoMembers { got: usize },

    #[error("member {member} is not in the current state")]
    NotChosen { member: String },

    #[error("member {member} is already in the current state")]
    AlreadyChosen { member: String },

    #[error("trace table would need {cells} cells, over the {limit} cap")]
    StateSize { cells: u64, limit: u64 },

    #[error("ground set [{n}] is over the search guard of {limit}; raise SearchOptions::override_size_guard to proceed")]
    SearchGuard { n: u32, limit: u32 },

    #[error("ground set [{n}] is over the canonicalization guard of {limit}")]
    CanonGuard { n: u32, limit: u32 },

    #[error("universe of {subsets} sets is over the exhaustive-oracle cap of {limit}")]
    OracleGuard { subsets: u64, limit: u64 },

    #[error("{what} must be positive")]
    ZeroOption { what: &'static str },

    #[error("invalid claim parameters: {msg}")]
    ClaimParams { msg: String },

    #[error("model would need {rows} chain rows, over the {limit} cap")]
    ModelSize { rows: u64, limit: u64 },

    #[error("cache line {line}: {msg}")]
    Cache { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
