//! 0/1 linear-model export.
//!
//! Writes the optimum as an integer program over membership variables,
//! one `x` per k-subset, plus trace indicators `y` linking selections to
//! the patterns they realize. One row per forbidden tower keeps every
//! trace chain-free. The output is plain text with deterministic
//! ordering, meant for external solvers or for eyeballing.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mask::{binomial, k_subsets, SetMask, MAX_GROUND};
use crate::search::Mode;

/// Forbidden-tower row cap: `C(n,r) * r!` rows above this refuse to
/// render.
pub const MODEL_MAX_ROWS: u64 = 1_000_000;

fn x_name(a: SetMask) -> String {
    let elems: Vec<String> = a.elements().map(|e| e.to_string()).collect();
    format!("x_{}", elems.join("."))
}

fn pattern_name(p: SetMask) -> String {
    if p.is_empty() {
        return String::from("e");
    }
    p.elements()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

fn y_name(x: SetMask, p: SetMask) -> String {
    format!("y_{}_{}", pattern_name(x), pattern_name(p))
}

fn factorial(r: u64) -> u64 {
    (2..=r).product::<u64>().max(1)
}

/// Lexicographic permutations of `elems` (which is ascending), fed to
/// `emit` one at a time.
fn for_each_permutation(elems: &[u32], emit: &mut impl FnMut(&[u32])) {
    fn rec(pool: &mut Vec<u32>, prefix: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
        if pool.is_empty() {
            emit(prefix);
            return;
        }
        for i in 0..pool.len() {
            let chosen = pool.remove(i);
            prefix.push(chosen);
            rec(pool, prefix, emit);
            prefix.pop();
            pool.insert(i, chosen);
        }
    }
    let mut pool = elems.to_vec();
    let mut prefix = Vec::with_capacity(elems.len());
    rec(&mut pool, &mut prefix, emit);
}

/// Renders the search at `(n, k, r)` in the given mode as a 0/1 program.
pub fn export_linear_model(n: u32, k: u32, r: u32, mode: Mode) -> Result<String> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::GroundSize { n });
    }
    if k == 0 || k > n {
        return Err(Error::Uniformity { k, n });
    }
    if r == 0 || r > n {
        return Err(Error::RankRange { r, n });
    }
    if mode == Mode::U && r < 2 {
        return Err(Error::AlmostRank { r });
    }
    let rows = binomial(n as u64, r as u64).saturating_mul(factorial(r as u64));
    if rows > MODEL_MAX_ROWS {
        return Err(Error::ModelSize {
            rows,
            limit: MODEL_MAX_ROWS,
        });
    }

    let members: Vec<SetMask> = k_subsets(n, k).collect();
    let windows: Vec<SetMask> = k_subsets(n, r).collect();

    let mut out = String::new();
    let _ = writeln!(out, "# 0/1 model: mode={mode} n={n} k={k} r={r}");
    let _ = writeln!(out, "# x_A = 1 iff the k-subset A is in the family");
    let _ = writeln!(
        out,
        "# y_X_p = 1 iff pattern p occurs in the trace on X ('e' is the empty pattern)"
    );
    let objective: Vec<String> = members.iter().map(|&a| x_name(a)).collect();
    let _ = writeln!(out, "maximize {}", objective.join(" + "));
    let _ = writeln!(out, "subject to");

    // Almost-maximal towers skip the empty pattern; the auxiliaries still
    // cover every pattern in both modes.
    let min_level = match mode {
        Mode::W => 0,
        Mode::U => 1,
    };
    let bound = match mode {
        Mode::W => r,
        Mode::U => r - 1,
    };

    for &x in &windows {
        for p in x.subsets() {
            let realizers: Vec<String> = members
                .iter()
                .filter(|&&a| a.intersection(x) == p)
                .map(|&a| x_name(a))
                .collect();
            let y = y_name(x, p);
            for xa in &realizers {
                let _ = writeln!(out, "{y} >= {xa}");
            }
            if realizers.is_empty() {
                let _ = writeln!(out, "{y} <= 0");
            } else {
                let _ = writeln!(out, "{y} <= {}", realizers.join(" + "));
            }
        }
        let elems: Vec<u32> = x.elements().collect();
        for_each_permutation(&elems, &mut |order| {
            let mut tower: Vec<String> = Vec::with_capacity((r + 1 - min_level) as usize);
            let mut cur = SetMask::empty(n).expect("validated ground");
            if min_level == 0 {
                tower.push(y_name(x, cur));
            }
            for &e in order {
                cur = cur.with(e).expect("elements come from the window");
                tower.push(y_name(x, cur));
            }
            let _ = writeln!(out, "{} <= {bound}", tower.join(" + "));
        });
    }

    for &a in &members {
        let _ = writeln!(out, "binary {}", x_name(a));
    }
    for &x in &windows {
        for p in x.subsets() {
            let _ = writeln!(out, "binary {}", y_name(x, p));
        }
    }
    let _ = writeln!(out, "end");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_model_shape() {
        let text = export_linear_model(3, 2, 2, Mode::W).unwrap();
        assert!(text.starts_with("# 0/1 model: mode=W n=3 k=2 r=2\n"));
        assert!(text.contains("maximize x_1.2 + x_1.3 + x_2.3\n"));
        // Window {1,2}: pattern {2} is realized only by {2,3}.
        assert!(text.contains("y_1.2_2 >= x_2.3\n"));
        assert!(text.contains("y_1.2_2 <= x_2.3\n"));
        // Both towers of the window {1,2}, each capped one below full.
        assert!(text.contains("y_1.2_e + y_1.2_1 + y_1.2_1.2 <= 2\n"));
        assert!(text.contains("y_1.2_e + y_1.2_2 + y_1.2_1.2 <= 2\n"));
        assert!(text.ends_with("end\n"));
    }

    #[test]
    fn almost_mode_towers_skip_the_empty_pattern() {
        let text = export_linear_model(3, 2, 2, Mode::U).unwrap();
        // The auxiliary still exists; the towers never mention it.
        assert!(text.contains("binary y_1.2_e\n"));
        assert!(!text.contains("y_1.2_e +"));
        assert!(text.contains("y_1.2_1 + y_1.2_1.2 <= 1\n"));
    }

    #[test]
    fn aux_and_tower_counts_match_the_contract() {
        // 3 members, 3 windows x 4 patterns = 12 auxiliaries, 3 x 2! = 6
        // towers.
        let text = export_linear_model(3, 2, 2, Mode::W).unwrap();
        let binaries_y = text
            .lines()
            .filter(|l| l.starts_with("binary y_"))
            .count();
        assert_eq!(binaries_y, 12);
        let binaries_x = text
            .lines()
            .filter(|l| l.starts_with("binary x_"))
            .count();
        assert_eq!(binaries_x, 3);
        let towers = text
            .lines()
            .filter(|l| l.contains(" <= 2"))
            .count();
        assert_eq!(towers, 6);
    }

    #[test]
    fn unrealizable_patterns_are_pinned_to_zero() {
        // k = 1 on X of size 2: the full pattern has no realizer.
        let text = export_linear_model(3, 1, 2, Mode::W).unwrap();
        assert!(text.contains("y_1.2_1.2 <= 0\n"));
    }

    #[test]
    fn deterministic_output() {
        let a = export_linear_model(5, 3, 2, Mode::W).unwrap();
        let b = export_linear_model(5, 3, 2, Mode::W).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            export_linear_model(0, 1, 1, Mode::W),
            Err(Error::GroundSize { .. })
        ));
        assert!(matches!(
            export_linear_model(4, 5, 2, Mode::W),
            Err(Error::Uniformity { .. })
        ));
        assert!(matches!(
            export_linear_model(4, 2, 5, Mode::W),
            Err(Error::RankRange { .. })
        ));
        assert!(matches!(
            export_linear_model(4, 2, 1, Mode::U),
            Err(Error::AlmostRank { .. })
        ));
        assert!(matches!(
            export_linear_model(24, 12, 12, Mode::W),
            Err(Error::ModelSize { .. })
        ));
    }
}
