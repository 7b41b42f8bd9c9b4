//! Reference checks written against plain nested vectors, independent of the
//! library's verifier.

#![allow(dead_code, clippy::needless_range_loop)]

pub fn naive_step(a: u64, b: u64) -> bool {
    b == 0 || b == a + 1
}

pub fn naive_valid(rows: &[Vec<u64>]) -> bool {
    for i in 1..rows.len() {
        for l in 0..rows[i].len() {
            if !naive_step(rows[i - 1][l], rows[i][l]) {
                return false;
            }
        }
    }
    true
}

pub fn naive_cyclic(rows: &[Vec<u64>]) -> bool {
    if !naive_valid(rows) {
        return false;
    }
    match (rows.first(), rows.last()) {
        (Some(first), Some(last)) => (0..first.len()).all(|l| naive_step(last[l], first[l])),
        _ => true,
    }
}

/// First dominated pair in (i, j) order.
pub fn naive_dominated_pair(rows: &[Vec<u64>]) -> Option<(usize, usize)> {
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let mut all = true;
            for l in 0..rows[i].len() {
                if rows[i][l] > rows[j][l] {
                    all = false;
                }
            }
            if all {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn naive_conforming(rows: &[Vec<u64>], cyclic: bool) -> bool {
    let steps = if cyclic {
        naive_cyclic(rows)
    } else {
        naive_valid(rows)
    };
    steps && naive_dominated_pair(rows).is_none()
}
