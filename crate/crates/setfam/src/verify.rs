//! Claim suites: named, mechanically checkable statements with evidence.
//!
//! Every suite runs against an [`Engine`] and produces a [`Report`] whose
//! cells carry the parameters, the computed and expected numbers, and a
//! per-cell status. Outcomes below a known or conjectured validity
//! threshold are marked expected-fail rather than fail; anything the
//! engine could not decide exactly (limits, guards) is unknown, never
//! guessed. Suites check finite samples and do not extrapolate.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::canon::canonical_form;
use crate::chain::is_w_admissible;
use crate::constructions::{small_ground_family, star_family, w_formula};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::family::KFamily;
use crate::mask::binomial;
use crate::search::{Mode, SearchStatus};

/// The checkable claims, one stable tag each.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClaimId {
    /// Closed form for the maximal-mode optimum from the threshold on.
    Theorem1,
    /// Cross-multiplied divisibility bound linking the two modes.
    Lemma1,
    /// Rank-one optimum is a single set.
    BaseR1,
    /// Uniformity below the rank makes every family admissible.
    BaseKLtR,
    /// The rank-two threshold is exactly twice the uniformity.
    N0K2,
    /// The (3,3) threshold is 7.
    N033,
    /// Threshold at 2k+1 for ranks three and up, sharp at 2k.
    Conj1,
    /// Small-ground optimum and extremal family below 2k.
    Conj2,
    /// The star is the only extremal class past the threshold.
    UniqueStar,
}

impl ClaimId {
    pub const ALL: [ClaimId; 9] = [
        ClaimId::Theorem1,
        ClaimId::Lemma1,
        ClaimId::BaseR1,
        ClaimId::BaseKLtR,
        ClaimId::N0K2,
        ClaimId::N033,
        ClaimId::Conj1,
        ClaimId::Conj2,
        ClaimId::UniqueStar,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ClaimId::Theorem1 => "THEOREM1",
            ClaimId::Lemma1 => "LEMMA1",
            ClaimId::BaseR1 => "BASE_R1",
            ClaimId::BaseKLtR => "BASE_KLTR",
            ClaimId::N0K2 => "N0_K2",
            ClaimId::N033 => "N0_33",
            ClaimId::Conj1 => "CONJ1",
            ClaimId::Conj2 => "CONJ2",
            ClaimId::UniqueStar => "UNIQUE_STAR",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            ClaimId::Theorem1 => {
                "maximal-mode optimum equals C(n-k+r-1, r-1) from the validity threshold on"
            }
            ClaimId::Lemma1 => "k * U(n,k,r) <= n * W(n-1,k-1,r-1)",
            ClaimId::BaseR1 => "W(n,k,1) = 1",
            ClaimId::BaseKLtR => "k < r makes every family admissible: both optima equal C(n,k)",
            ClaimId::N0K2 => "rank-two threshold: equality from n = 2k, strict excess at 2k-1",
            ClaimId::N033 => "W(7,3,3) = 15 and W(6,3,3) > 10",
            ClaimId::Conj1 => "rank >= 3: equality at n = 2k+1, with the n = 2k value as evidence",
            ClaimId::Conj2 => {
                "k+r-1 <= n <= 2k-1: optimum C(k+r-1,k) with the small-ground family as the only class"
            }
            ClaimId::UniqueStar => "the star is the only extremal class",
        }
    }
}

impl std::fmt::Display for ClaimId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CellStatus {
    Pass,
    Fail,
    /// The statement does not hold here and is not expected to: the cell
    /// sits below the claim's validity threshold.
    ExpectedFail,
    /// The engine could not decide (limit hit or parameters infeasible).
    Unknown,
}

impl std::fmt::Display for CellStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CellStatus::Pass => write!(f, "pass"),
            CellStatus::Fail => write!(f, "fail"),
            CellStatus::ExpectedFail => write!(f, "expected-fail"),
            CellStatus::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub label: String,
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub mode: Mode,
    pub computed: Option<u64>,
    pub expected: Option<u64>,
    pub status: CellStatus,
    /// Compact evidence (semicolon members, `|` between families).
    pub witness: Option<String>,
    pub note: Option<String>,
}

impl Cell {
    fn new(label: String, n: u32, k: u32, r: u32, mode: Mode) -> Self {
        Cell {
            label,
            n,
            k,
            r,
            mode,
            computed: None,
            expected: None,
            status: CellStatus::Unknown,
            witness: None,
            note: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub claim: ClaimId,
    pub status: CellStatus,
    pub cells: Vec<Cell>,
    pub elapsed: Duration,
}

impl Report {
    fn from_cells(claim: ClaimId, cells: Vec<Cell>, elapsed: Duration) -> Self {
        let status = aggregate(&cells);
        Report {
            claim,
            status,
            cells,
            elapsed,
        }
    }

    /// Pass and expected-fail both count as a non-failing outcome.
    pub fn acceptable(&self) -> bool {
        matches!(self.status, CellStatus::Pass | CellStatus::ExpectedFail)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}: {} ({} cells, {:.2}s)",
            self.claim,
            self.status,
            self.cells.len(),
            self.elapsed.as_secs_f64()
        );
        for cell in &self.cells {
            let _ = write!(out, "  {}:", cell.label);
            if let Some(c) = cell.computed {
                let _ = write!(out, " computed {c},");
            }
            if let Some(e) = cell.expected {
                let _ = write!(out, " expected {e},");
            }
            let _ = write!(out, " {}", cell.status);
            if let Some(w) = &cell.witness {
                let _ = write!(out, " [{w}]");
            }
            if let Some(nte) = &cell.note {
                let _ = write!(out, " ({nte})");
            }
            let _ = writeln!(out);
        }
        out
    }

    pub fn render_records(&self) -> String {
        let mut out = String::new();
        for cell in &self.cells {
            let _ = write!(
                out,
                "claim={} cell={} n={} k={} r={} mode={} status={}",
                self.claim,
                cell.label.replace(' ', "").replace("<=", "le").replace('>', "gt"),
                cell.n,
                cell.k,
                cell.r,
                cell.mode,
                cell.status
            );
            if let Some(c) = cell.computed {
                let _ = write!(out, " computed={c}");
            }
            if let Some(e) = cell.expected {
                let _ = write!(out, " expected={e}");
            }
            if let Some(w) = &cell.witness {
                let _ = write!(out, " witness={w}");
            }
            let _ = writeln!(out);
        }
        let _ = writeln!(
            out,
            "claim={} status={} cells={} elapsed_ms={}",
            self.claim,
            self.status,
            self.cells.len(),
            self.elapsed.as_millis()
        );
        out
    }
}

fn aggregate(cells: &[Cell]) -> CellStatus {
    if cells.iter().any(|c| c.status == CellStatus::Fail) {
        CellStatus::Fail
    } else if cells.iter().any(|c| c.status == CellStatus::Unknown) {
        CellStatus::Unknown
    } else if cells.iter().any(|c| c.status == CellStatus::Pass) {
        CellStatus::Pass
    } else if cells.iter().any(|c| c.status == CellStatus::ExpectedFail) {
        CellStatus::ExpectedFail
    } else {
        CellStatus::Pass
    }
}

/// Least `n` from which the closed form is known to hold, where a
/// threshold has been established.
pub fn known_threshold(k: u32, r: u32) -> Option<u32> {
    match (k, r) {
        (_, 1) => Some(k),
        (_, 2) => Some(2 * k),
        (3, 3) => Some(7),
        _ => None,
    }
}

/// Known threshold, or the conjectured `2k + 1` with a flag saying which.
fn assumed_threshold(k: u32, r: u32) -> (u32, bool) {
    match known_threshold(k, r) {
        Some(t) => (t, true),
        None => (2 * k + 1, false),
    }
}

/// Below this, more than one extremal class is the normal situation.
fn uniqueness_threshold(k: u32, r: u32) -> (u32, bool) {
    if r == 1 {
        (k, true)
    } else {
        (2 * k + 1, false)
    }
}

enum Outcome {
    Exact(u64),
    Bound(u64),
    Infeasible(String),
}

/// Runs a cached value search, folding guards into an infeasible outcome
/// instead of failing the whole suite.
fn try_value(engine: &mut Engine, mode: Mode, n: u32, k: u32, r: u32) -> Result<Outcome> {
    match engine.value(mode, n, k, r) {
        Ok(res) => Ok(match res.status {
            SearchStatus::Optimal => Outcome::Exact(res.optimum as u64),
            SearchStatus::LowerBoundOnly => Outcome::Bound(res.optimum as u64),
        }),
        Err(
            e @ (Error::SearchGuard { .. } | Error::CanonGuard { .. } | Error::StateSize { .. }),
        ) => Ok(Outcome::Infeasible(e.to_string())),
        Err(e) => Err(e),
    }
}

enum ClassOutcome {
    Classes(Vec<KFamily>),
    Stopped,
    Infeasible(String),
}

fn try_classes(engine: &mut Engine, mode: Mode, n: u32, k: u32, r: u32) -> Result<ClassOutcome> {
    match engine.enumerate(mode, n, k, r) {
        Ok(res) => Ok(match res.extremal_classes {
            Some(classes) => ClassOutcome::Classes(classes),
            None => ClassOutcome::Stopped,
        }),
        Err(
            e @ (Error::SearchGuard { .. } | Error::CanonGuard { .. } | Error::StateSize { .. }),
        ) => Ok(ClassOutcome::Infeasible(e.to_string())),
        Err(e) => Err(e),
    }
}

/// Compact one-line form of a family: members joined by `;`.
fn compact(fam: &KFamily) -> String {
    if fam.is_empty() {
        return String::from("-");
    }
    fam.members()
        .iter()
        .map(|m| {
            m.elements()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn fill_value_cell(cell: &mut Cell, outcome: Outcome, expected: u64, below: Option<(u32, bool)>) {
    cell.expected = Some(expected);
    match outcome {
        Outcome::Exact(v) => {
            cell.computed = Some(v);
            if v == expected {
                cell.status = CellStatus::Pass;
            } else if let Some((threshold, proven)) = below {
                cell.status = CellStatus::ExpectedFail;
                cell.note = Some(if proven {
                    format!("below threshold {threshold}")
                } else {
                    format!("below conjectured threshold {threshold}")
                });
            } else {
                cell.status = CellStatus::Fail;
            }
        }
        Outcome::Bound(v) => {
            cell.computed = Some(v);
            cell.status = CellStatus::Unknown;
            cell.note = Some(String::from("search stopped at a limit"));
        }
        Outcome::Infeasible(msg) => {
            cell.status = CellStatus::Unknown;
            cell.note = Some(msg);
        }
    }
}

/// Closed-form check for `W` over a range of ground sizes. Cells below
/// the (known or conjectured) threshold may fail expectedly; the star is
/// re-validated alongside each cell.
pub fn verify_formula(
    engine: &mut Engine,
    k: u32,
    r: u32,
    n_lo: u32,
    n_hi: u32,
) -> Result<Report> {
    if r == 0 || k < r {
        return Err(Error::ClaimParams {
            msg: format!("need k >= r >= 1, got k={k} r={r}"),
        });
    }
    if n_lo < k || n_hi < n_lo {
        return Err(Error::ClaimParams {
            msg: format!("need k <= n_lo <= n_hi, got {n_lo}..{n_hi} with k={k}"),
        });
    }
    let start = Instant::now();
    let (threshold, proven) = assumed_threshold(k, r);
    let mut cells = Vec::new();
    for n in n_lo..=n_hi {
        let formula = w_formula(n, k, r)?;
        let mut cell = Cell::new(format!("W({n},{k},{r})"), n, k, r, Mode::W);
        let star = star_family(n, k, r)?;
        if star.len() as u64 != formula || !is_w_admissible(&star, r)? {
            cell.status = CellStatus::Fail;
            cell.note = Some(String::from("star construction failed its re-check"));
            cells.push(cell);
            continue;
        }
        let below = (n < threshold).then_some((threshold, proven));
        fill_value_cell(&mut cell, try_value(engine, Mode::W, n, k, r)?, formula, below);
        cells.push(cell);
    }
    Ok(Report::from_cells(ClaimId::Theorem1, cells, start.elapsed()))
}

/// Rank-one and low-uniformity base cases over every feasible parameter
/// choice up to `n_max`. Returns one report per claim.
pub fn verify_base_cases(engine: &mut Engine, n_max: u32) -> Result<Vec<Report>> {
    if n_max == 0 || n_max > 32 {
        return Err(Error::ClaimParams {
            msg: format!("need 1 <= n_max <= 32, got {n_max}"),
        });
    }
    let start = Instant::now();
    let mut r1_cells = Vec::new();
    for n in 1..=n_max {
        for k in 1..=n {
            let mut cell = Cell::new(format!("W({n},{k},1)"), n, k, 1, Mode::W);
            fill_value_cell(&mut cell, try_value(engine, Mode::W, n, k, 1)?, 1, None);
            r1_cells.push(cell);
        }
    }
    let r1 = Report::from_cells(ClaimId::BaseR1, r1_cells, start.elapsed());

    let start2 = Instant::now();
    let mut lt_cells = Vec::new();
    for n in 2..=n_max {
        for k in 1..n {
            for r in k + 1..=n {
                let everything = binomial(n as u64, k as u64);
                for mode in [Mode::W, Mode::U] {
                    let mut cell =
                        Cell::new(format!("{mode}({n},{k},{r})"), n, k, r, mode);
                    fill_value_cell(
                        &mut cell,
                        try_value(engine, mode, n, k, r)?,
                        everything,
                        None,
                    );
                    lt_cells.push(cell);
                }
            }
        }
    }
    let lt = Report::from_cells(ClaimId::BaseKLtR, lt_cells, start2.elapsed());
    Ok(vec![r1, lt])
}

/// Cross-multiplied bound between the two modes at one parameter point.
pub fn verify_lemma1(engine: &mut Engine, n: u32, k: u32, r: u32) -> Result<Report> {
    if k < 2 || r < 2 || n < k || r > n {
        return Err(Error::ClaimParams {
            msg: format!("need n >= k >= 2 and 2 <= r <= n, got n={n} k={k} r={r}"),
        });
    }
    let start = Instant::now();
    let u_out = try_value(engine, Mode::U, n, k, r)?;
    let w_out = try_value(engine, Mode::W, n - 1, k - 1, r - 1)?;
    let mut u_cell = Cell::new(format!("U({n},{k},{r})"), n, k, r, Mode::U);
    let mut w_cell = Cell::new(
        format!("W({},{},{})", n - 1, k - 1, r - 1),
        n - 1,
        k - 1,
        r - 1,
        Mode::W,
    );
    let u_val = match u_out {
        Outcome::Exact(v) => {
            u_cell.computed = Some(v);
            u_cell.status = CellStatus::Pass;
            Some(v)
        }
        Outcome::Bound(v) => {
            u_cell.computed = Some(v);
            u_cell.note = Some(String::from("search stopped at a limit"));
            None
        }
        Outcome::Infeasible(msg) => {
            u_cell.note = Some(msg);
            None
        }
    };
    let w_val = match w_out {
        Outcome::Exact(v) => {
            w_cell.computed = Some(v);
            w_cell.status = CellStatus::Pass;
            Some(v)
        }
        Outcome::Bound(v) => {
            w_cell.computed = Some(v);
            w_cell.note = Some(String::from("search stopped at a limit"));
            None
        }
        Outcome::Infeasible(msg) => {
            w_cell.note = Some(msg);
            None
        }
    };
    let mut ineq = Cell::new(
        format!("{k}*U({n},{k},{r}) <= {n}*W({},{},{})", n - 1, k - 1, r - 1),
        n,
        k,
        r,
        Mode::U,
    );
    if let (Some(u), Some(w)) = (u_val, w_val) {
        let lhs = k as u64 * u;
        let rhs = n as u64 * w;
        ineq.computed = Some(lhs);
        ineq.expected = Some(rhs);
        ineq.status = if lhs <= rhs {
            CellStatus::Pass
        } else {
            CellStatus::Fail
        };
        if lhs == rhs {
            ineq.note = Some(String::from("tight"));
        }
    } else {
        ineq.note = Some(String::from("one side is not exact"));
    }
    let cells = vec![u_cell, w_cell, ineq];
    Ok(Report::from_cells(ClaimId::Lemma1, cells, start.elapsed()))
}

/// Enumerates extremal classes and compares against the single star
/// class. Below the uniqueness threshold extra classes are expected.
pub fn verify_uniqueness(engine: &mut Engine, n: u32, k: u32, r: u32) -> Result<Report> {
    if r == 0 || k < r || n < k {
        return Err(Error::ClaimParams {
            msg: format!("need n >= k >= r >= 1, got n={n} k={k} r={r}"),
        });
    }
    let start = Instant::now();
    let mut cell = Cell::new(format!("classes(W,{n},{k},{r})"), n, k, r, Mode::W);
    cell.expected = Some(1);
    match try_classes(engine, Mode::W, n, k, r)? {
        ClassOutcome::Classes(classes) => {
            let star = canonical_form(&star_family(n, k, r)?)?.family;
            cell.computed = Some(classes.len() as u64);
            cell.witness = Some(
                classes
                    .iter()
                    .map(compact)
                    .collect::<Vec<_>>()
                    .join("|"),
            );
            let is_star_only = classes.len() == 1 && classes[0] == star;
            if is_star_only {
                cell.status = CellStatus::Pass;
            } else {
                let (threshold, proven) = uniqueness_threshold(k, r);
                if n < threshold {
                    cell.status = CellStatus::ExpectedFail;
                    cell.note = Some(if proven {
                        format!("below uniqueness threshold {threshold}")
                    } else {
                        format!("below conjectured uniqueness threshold {threshold}")
                    });
                } else {
                    cell.status = CellStatus::Fail;
                }
            }
        }
        ClassOutcome::Stopped => {
            cell.note = Some(String::from("enumeration stopped at a limit"));
        }
        ClassOutcome::Infeasible(msg) => {
            cell.note = Some(msg);
        }
    }
    Ok(Report::from_cells(
        ClaimId::UniqueStar,
        vec![cell],
        start.elapsed(),
    ))
}

/// Rank >= 3 threshold claim: equality at `2k + 1`, with the `2k` value
/// recorded as sharpness evidence.
pub fn verify_conjecture1(engine: &mut Engine, k: u32, r: u32) -> Result<Report> {
    if r < 3 || k < r {
        return Err(Error::ClaimParams {
            msg: format!("need k >= r >= 3, got k={k} r={r}"),
        });
    }
    let start = Instant::now();
    let mut cells = Vec::new();

    let n1 = 2 * k + 1;
    let formula1 = w_formula(n1, k, r)?;
    let mut main = Cell::new(format!("W({n1},{k},{r})"), n1, k, r, Mode::W);
    fill_value_cell(&mut main, try_value(engine, Mode::W, n1, k, r)?, formula1, None);
    cells.push(main);

    let n0 = 2 * k;
    let formula0 = w_formula(n0, k, r)?;
    let mut evidence = Cell::new(format!("W({n0},{k},{r})"), n0, k, r, Mode::W);
    evidence.expected = Some(formula0);
    match try_value(engine, Mode::W, n0, k, r)? {
        Outcome::Exact(v) => {
            evidence.computed = Some(v);
            evidence.status = CellStatus::Pass;
            evidence.note = Some(if v > formula0 {
                String::from("strictly above the closed form: the threshold is sharp here")
            } else {
                String::from("already matches the closed form at 2k")
            });
        }
        Outcome::Bound(v) => {
            evidence.computed = Some(v);
            evidence.note = Some(String::from("search stopped at a limit"));
        }
        Outcome::Infeasible(msg) => {
            evidence.note = Some(msg);
        }
    }
    cells.push(evidence);
    Ok(Report::from_cells(ClaimId::Conj1, cells, start.elapsed()))
}

/// Small-ground regime: for `k+r-1 <= n <= 2k-1` the optimum is
/// `C(k+r-1, k)` with the small-ground family as the only class, and past
/// `2k` the star takes over.
pub fn verify_conjecture2(engine: &mut Engine, k: u32, r: u32) -> Result<Report> {
    if r < 2 || k < r {
        return Err(Error::ClaimParams {
            msg: format!("need k >= r >= 2, got k={k} r={r}"),
        });
    }
    let start = Instant::now();
    let mut cells = Vec::new();
    let small_value = binomial((k + r - 1) as u64, k as u64);
    for n in (k + r - 1)..=(2 * k - 1) {
        let mut value_cell = Cell::new(format!("W({n},{k},{r})"), n, k, r, Mode::W);
        fill_value_cell(
            &mut value_cell,
            try_value(engine, Mode::W, n, k, r)?,
            small_value,
            None,
        );
        cells.push(value_cell);

        let mut class_cell = Cell::new(format!("classes(W,{n},{k},{r})"), n, k, r, Mode::W);
        class_cell.expected = Some(1);
        match try_classes(engine, Mode::W, n, k, r)? {
            ClassOutcome::Classes(classes) => {
                let small = canonical_form(&small_ground_family(n, k, r)?)?.family;
                class_cell.computed = Some(classes.len() as u64);
                class_cell.witness = Some(
                    classes
                        .iter()
                        .map(compact)
                        .collect::<Vec<_>>()
                        .join("|"),
                );
                class_cell.status = if classes.len() == 1 && classes[0] == small {
                    CellStatus::Pass
                } else {
                    CellStatus::Fail
                };
            }
            ClassOutcome::Stopped => {
                class_cell.note = Some(String::from("enumeration stopped at a limit"));
            }
            ClassOutcome::Infeasible(msg) => {
                class_cell.note = Some(msg);
            }
        }
        cells.push(class_cell);
    }

    // The regime flips past 2k: the formula value with only the star.
    let n2 = 2 * k + 1;
    let formula2 = w_formula(n2, k, r)?;
    let mut flip_value = Cell::new(format!("W({n2},{k},{r})"), n2, k, r, Mode::W);
    fill_value_cell(
        &mut flip_value,
        try_value(engine, Mode::W, n2, k, r)?,
        formula2,
        None,
    );
    cells.push(flip_value);
    let mut flip_class = Cell::new(format!("classes(W,{n2},{k},{r})"), n2, k, r, Mode::W);
    flip_class.expected = Some(1);
    match try_classes(engine, Mode::W, n2, k, r)? {
        ClassOutcome::Classes(classes) => {
            let star = canonical_form(&star_family(n2, k, r)?)?.family;
            flip_class.computed = Some(classes.len() as u64);
            flip_class.witness = Some(
                classes
                    .iter()
                    .map(compact)
                    .collect::<Vec<_>>()
                    .join("|"),
            );
            flip_class.status = if classes.len() == 1 && classes[0] == star {
                CellStatus::Pass
            } else {
                CellStatus::Fail
            };
        }
        ClassOutcome::Stopped => {
            flip_class.note = Some(String::from("enumeration stopped at a limit"));
        }
        ClassOutcome::Infeasible(msg) => {
            flip_class.note = Some(msg);
        }
    }
    cells.push(flip_class);
    Ok(Report::from_cells(ClaimId::Conj2, cells, start.elapsed()))
}

/// Rank-two threshold: strict excess at `2k - 1`, equality on a finite
/// sample from `2k` up. No extrapolation beyond the sampled cells.
pub fn verify_n0_k2(engine: &mut Engine, k: u32) -> Result<Report> {
    if k < 2 {
        return Err(Error::ClaimParams {
            msg: format!("need k >= 2, got k={k}"),
        });
    }
    let start = Instant::now();
    let mut cells = Vec::new();

    let below = 2 * k - 1;
    let formula_below = w_formula(below, k, 2)?;
    let mut sharp = Cell::new(format!("W({below},{k},2) > {formula_below}"), below, k, 2, Mode::W);
    sharp.expected = Some(formula_below);
    match try_value(engine, Mode::W, below, k, 2)? {
        Outcome::Exact(v) => {
            sharp.computed = Some(v);
            sharp.status = if v > formula_below {
                CellStatus::Pass
            } else {
                CellStatus::Fail
            };
            sharp.note = Some(String::from("strict excess below the threshold"));
        }
        Outcome::Bound(v) => {
            sharp.computed = Some(v);
            sharp.note = Some(String::from("search stopped at a limit"));
        }
        Outcome::Infeasible(msg) => {
            sharp.note = Some(msg);
        }
    }
    cells.push(sharp);

    for n in 2 * k..=2 * k + 2 {
        let formula = w_formula(n, k, 2)?;
        let mut cell = Cell::new(format!("W({n},{k},2)"), n, k, 2, Mode::W);
        fill_value_cell(&mut cell, try_value(engine, Mode::W, n, k, 2)?, formula, None);
        cells.push(cell);
    }
    Ok(Report::from_cells(ClaimId::N0K2, cells, start.elapsed()))
}

/// The two cells pinning the (3,3) threshold at 7.
pub fn verify_n0_33(engine: &mut Engine) -> Result<Report> {
    let start = Instant::now();
    let mut cells = Vec::new();

    let mut at7 = Cell::new(String::from("W(7,3,3)"), 7, 3, 3, Mode::W);
    fill_value_cell(&mut at7, try_value(engine, Mode::W, 7, 3, 3)?, 15, None);
    cells.push(at7);

    let mut at6 = Cell::new(String::from("W(6,3,3) > 10"), 6, 3, 3, Mode::W);
    at6.expected = Some(10);
    match try_value(engine, Mode::W, 6, 3, 3)? {
        Outcome::Exact(v) => {
            at6.computed = Some(v);
            at6.status = if v > 10 {
                CellStatus::Pass
            } else {
                CellStatus::Fail
            };
            at6.note = Some(String::from("strict excess keeps 6 below the threshold"));
        }
        Outcome::Bound(v) => {
            at6.computed = Some(v);
            at6.note = Some(String::from("search stopped at a limit"));
        }
        Outcome::Infeasible(msg) => {
            at6.note = Some(msg);
        }
    }
    cells.push(at6);
    Ok(Report::from_cells(ClaimId::N033, cells, start.elapsed()))
}

/// One computed row of a value table.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub mode: Mode,
    pub computed: u64,
    pub exact: bool,
    pub formula: Option<u64>,
    pub construction: Option<u64>,
}

impl TableRow {
    /// Computed minus formula value, when the formula applies.
    pub fn delta(&self) -> Option<i64> {
        self.formula.map(|f| self.computed as i64 - f as i64)
    }
}

#[derive(Clone, Debug)]
pub struct ValueTable {
    pub rows: Vec<TableRow>,
    pub elapsed: Duration,
}

impl ValueTable {
    pub fn render_text(&self) -> String {
        let mut out = String::from(
            "   n   k   r mode      value status   formula  delta constr\n",
        );
        for row in &self.rows {
            let status = if row.exact { "exact" } else { "bound" };
            let formula = row
                .formula
                .map(|v| v.to_string())
                .unwrap_or_else(|| String::from("-"));
            let delta = row
                .delta()
                .map(|d| d.to_string())
                .unwrap_or_else(|| String::from("-"));
            let constr = row
                .construction
                .map(|v| v.to_string())
                .unwrap_or_else(|| String::from("-"));
            let _ = writeln!(
                out,
                "{:4}{:4}{:4} {:>4} {:10} {:8} {:>7} {:>6} {:>6}",
                row.n,
                row.k,
                row.r,
                row.mode.to_string(),
                row.computed,
                status,
                formula,
                delta,
                constr
            );
        }
        out
    }

    pub fn render_records(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let _ = write!(
                out,
                "mode={} n={} k={} r={} computed={} status={}",
                row.mode,
                row.n,
                row.k,
                row.r,
                row.computed,
                if row.exact { "optimal" } else { "lower-bound-only" }
            );
            if let Some(v) = row.formula {
                let _ = write!(out, " formula={v}");
            }
            if let Some(d) = row.delta() {
                let _ = write!(out, " delta={d}");
            }
            if let Some(v) = row.construction {
                let _ = write!(out, " construction={v}");
            }
            let _ = writeln!(out);
        }
        out
    }
}

/// Computes one row per `(n, k, r)` triple in the given mode.
pub fn build_value_table(
    engine: &mut Engine,
    mode: Mode,
    triples: &[(u32, u32, u32)],
) -> Result<ValueTable> {
    let start = Instant::now();
    let mut rows = Vec::new();
    for &(n, k, r) in triples {
        let res = engine.value(mode, n, k, r)?;
        let formula = (mode == Mode::W && k + 1 >= r)
            .then(|| w_formula(n, k, r))
            .transpose()?;
        let construction = if mode == Mode::W && k >= r {
            Some(crate::constructions::lower_bound_construction(n, k, r)?.len() as u64)
        } else {
            None
        };
        rows.push(TableRow {
            n,
            k,
            r,
            mode,
            computed: res.optimum as u64,
            exact: res.status == SearchStatus::Optimal,
            formula,
            construction,
        });
    }
    Ok(ValueTable {
        rows,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::SearchOptions;

    fn engine() -> Engine {
        Engine::new(SearchOptions::default())
    }

    #[test]
    fn formula_suite_passes_with_expected_fail_below_threshold() {
        let mut e = engine();
        let report = verify_formula(&mut e, 2, 2, 3, 8).unwrap();
        assert_eq!(report.status, CellStatus::Pass);
        assert_eq!(report.cells.len(), 6);
        assert_eq!(report.cells[0].status, CellStatus::ExpectedFail);
        for cell in &report.cells[1..] {
            assert_eq!(cell.status, CellStatus::Pass, "cell {}", cell.label);
        }
    }

    #[test]
    fn base_cases_all_pass() {
        let mut e = engine();
        let reports = verify_base_cases(&mut e, 5).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].claim, ClaimId::BaseR1);
        assert_eq!(reports[1].claim, ClaimId::BaseKLtR);
        for report in &reports {
            assert_eq!(report.status, CellStatus::Pass, "{}", report.render_text());
        }
    }

    #[test]
    fn lemma1_holds_and_is_tight_at_the_threshold() {
        let mut e = engine();
        let report = verify_lemma1(&mut e, 4, 2, 2).unwrap();
        assert_eq!(report.status, CellStatus::Pass);
        let ineq = &report.cells[2];
        assert_eq!(ineq.computed, Some(4));
        assert_eq!(ineq.expected, Some(4));
        assert_eq!(ineq.note.as_deref(), Some("tight"));
        let loose = verify_lemma1(&mut e, 5, 3, 2).unwrap();
        assert_eq!(loose.status, CellStatus::Pass);
        assert!(verify_lemma1(&mut e, 4, 1, 2).is_err());
    }

    #[test]
    fn uniqueness_pass_fail_and_expected_fail() {
        let mut e = engine();
        let past = verify_uniqueness(&mut e, 5, 2, 2).unwrap();
        assert_eq!(past.status, CellStatus::Pass);
        // At n = 2k the star ties with the small-ground family.
        let at_tie = verify_uniqueness(&mut e, 4, 2, 2).unwrap();
        assert_eq!(at_tie.status, CellStatus::ExpectedFail);
        assert_eq!(at_tie.cells[0].computed, Some(2));
        // Below the star regime entirely.
        let below = verify_uniqueness(&mut e, 3, 2, 2).unwrap();
        assert_eq!(below.status, CellStatus::ExpectedFail);
    }

    #[test]
    fn n0_k2_suite_for_small_k() {
        let mut e = engine();
        let report = verify_n0_k2(&mut e, 2).unwrap();
        assert_eq!(report.status, CellStatus::Pass, "{}", report.render_text());
        assert_eq!(report.cells.len(), 4);
    }

    #[test]
    fn conjecture2_small_ground_regime() {
        let mut e = engine();
        let report = verify_conjecture2(&mut e, 2, 2).unwrap();
        assert_eq!(report.status, CellStatus::Pass, "{}", report.render_text());
    }

    #[test]
    fn unknown_on_limits_not_fail() {
        let mut e = Engine::new(SearchOptions {
            node_limit: Some(1),
            ..SearchOptions::default()
        });
        let report = verify_formula(&mut e, 2, 2, 5, 5).unwrap();
        assert_eq!(report.status, CellStatus::Unknown);
    }

    #[test]
    fn renderings_cover_every_cell() {
        let mut e = engine();
        let report = verify_lemma1(&mut e, 4, 2, 2).unwrap();
        let text = report.render_text();
        assert!(text.starts_with("LEMMA1: pass"));
        assert_eq!(text.lines().count(), 1 + report.cells.len());
        let records = report.render_records();
        assert_eq!(records.lines().count(), report.cells.len() + 1);
        assert!(records.contains("claim=LEMMA1"));
        assert!(records.lines().last().unwrap().contains("status=pass"));
    }

    #[test]
    fn value_table_columns() {
        let mut e = engine();
        let table =
            build_value_table(&mut e, Mode::W, &[(4, 2, 2), (5, 2, 2), (4, 2, 3)]).unwrap();
        assert_eq!(table.rows.len(), 3);
        assert_eq!(table.rows[0].computed, 3);
        assert_eq!(table.rows[0].formula, Some(3));
        assert_eq!(table.rows[0].construction, Some(3));
        // k < r: formula defined only down to k = r - 1, construction not.
        assert_eq!(table.rows[2].computed, 6);
        assert_eq!(table.rows[2].formula, Some(6));
        assert_eq!(table.rows[2].construction, None);
        let text = table.render_text();
        assert_eq!(text.lines().count(), 4);
    }
}
