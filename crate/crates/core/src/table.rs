//! Outcome sequences for the eight training modules.
//!
//! Row `i` fixes the robot failure cost and the human cost so that the
//! indifference point links `Q(delta_from)` to `Q(delta_to)`. Consecutive
//! rows walk the chain -0.5, -0.4, -0.6, -0.3, -0.7, -0.2, -0.8, -0.1, -0.9
//! while the robot cost stays at -0.9 or -1.0.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainRow {
    pub index: usize,
    /// `delta_i = xh`
    pub delta_from: f64,
    /// `delta_{i+1} = xr - xh`
    pub delta_to: f64,
    pub xr_norm: f64,
    pub xh_norm: f64,
}

const fn row(index: usize, delta_from: f64, delta_to: f64, xr_norm: f64, xh_norm: f64) -> ChainRow {
    ChainRow {
        index,
        delta_from,
        delta_to,
        xr_norm,
        xh_norm,
    }
}

pub const CHAIN_ROWS: [ChainRow; 8] = [
    row(0, -0.5, -0.4, -0.9, -0.5),
    row(1, -0.4, -0.6, -1.0, -0.4),
    row(2, -0.6, -0.3, -0.9, -0.6),
    row(3, -0.3, -0.7, -1.0, -0.3),
    row(4, -0.7, -0.2, -0.9, -0.7),
    row(5, -0.2, -0.8, -1.0, -0.2),
    row(6, -0.8, -0.1, -0.9, -0.8),
    row(7, -0.1, -0.9, -1.0, -0.1),
];

pub const TRAINING_ROWS: usize = CHAIN_ROWS.len();

/// Plain-text rendering with one line per row.
pub fn render_table() -> String {
    let mut out = String::from("i\tdelta_i\tdelta_i+1\txr_norm\txh_norm\n");
    for r in &CHAIN_ROWS {
        writeln!(
            out,
            "{}\t{:.1}\t{:.1}\t{:.1}\t{:.1}",
            r.index, r.delta_from, r.delta_to, r.xr_norm, r.xh_norm
        )
        .expect("writing to a String cannot fail");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regret::grid_index;

    #[test]
    fn deltas_follow_from_outcomes() {
        for r in &CHAIN_ROWS {
            assert!((r.delta_from - r.xh_norm).abs() < 1e-12);
            assert!((r.delta_to - (r.xr_norm - r.xh_norm)).abs() < 1e-12);
        }
    }

    #[test]
    fn rows_form_a_connected_chain_over_the_grid() {
        assert_eq!(CHAIN_ROWS[0].delta_from, -0.5);
        for pair in CHAIN_ROWS.windows(2) {
            assert_eq!(pair[0].delta_to, pair[1].delta_from);
        }
        let mut seen = [false; 9];
        seen[grid_index(-0.5).unwrap()] = true;
        for r in &CHAIN_ROWS {
            let k = grid_index(r.delta_to).unwrap();
            assert!(!seen[k], "delta {} visited twice", r.delta_to);
            seen[k] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn robot_cost_stays_near_minus_one() {
        for r in &CHAIN_ROWS {
            assert!(r.xr_norm == -0.9 || r.xr_norm == -1.0);
        }
    }

    #[test]
    fn rendering() {
        let text = render_table();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[1], "0\t-0.5\t-0.4\t-0.9\t-0.5");
        assert_eq!(lines[8], "7\t-0.1\t-0.9\t-1.0\t-0.1");
    }
}
