//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resetseq::construction::{
    base_sequence, binary_counter, closed_form_bound, construct, extend, length_of, make_spec,
    DEFAULT_CELL_BUDGET,
};
use resetseq::search::{
    collect_sequences, max_cyclic_length, max_valid_length, EnumerateOptions, SearchOptions,
};
use resetseq::verifier::{
    check_cyclic, check_cyclic_streaming, check_non_dominating_full, check_non_dominating_sampled,
    check_valid, FullCheck,
};
use resetseq::Exec;

type Check = fn() -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    ensure!(e <= limit, "{what} took {e:?}, limit {limit:?}");
    Ok(())
}

fn c1_base_case() -> Result<(), String> {
    let got = make_spec(2)
        .unwrap()
        .materialize(DEFAULT_CELL_BUDGET)
        .unwrap();
    let want = vec![vec![1, 1], vec![0, 2], vec![1, 0], vec![0, 0]];
    ensure!(got.to_rows() == want, "construct(2) = {:?}", got.to_rows());
    ensure!(base_sequence().to_rows() == want, "base_sequence differs");
    Ok(())
}

/// Recurrence evaluated in u128, independent of the library's BigUint code.
fn oracle_length(d: usize) -> u128 {
    let mut n: u128 = 4;
    for _ in 1..d / 2 {
        n = n * (2 * n + 1);
    }
    n
}

fn c2_recurrence_table() -> Result<(), String> {
    let t = Instant::now();
    let lengths = [(2, 4u128), (4, 36), (6, 2628), (8, 13_815_396)];
    for (d, want) in lengths {
        ensure!(oracle_length(d) == want, "oracle disagrees at d={d}");
        let got = length_of(d).unwrap();
        ensure!(got == BigUint::from(want), "length_of({d}) = {got}");
    }
    for (d, want) in [(2, 4u64), (4, 32), (6, 2048), (8, 1 << 23)] {
        let got = closed_form_bound(d).unwrap();
        ensure!(got == BigUint::from(want), "closed_form_bound({d}) = {got}");
    }
    for d in 2..=40usize {
        let c = d / 2;
        let independent = BigUint::from(2u32).pow(3 * 2u32.pow(c as u32 - 1) - 1);
        let bound = closed_form_bound(d).unwrap();
        ensure!(bound == independent, "bound formula mismatch at d={d}");
        let len = length_of(d).unwrap();
        ensure!(bound <= len, "bound exceeds length at d={d}");
        if d <= 12 {
            ensure!(
                len == BigUint::from(oracle_length(d)),
                "length mismatch at d={d}"
            );
        }
    }
    within(t, Duration::from_secs(1), "recurrence table")
}

fn c3_full_conformance() -> Result<(), String> {
    let t = Instant::now();
    for d in 2..=6 {
        let seq = construct(d).unwrap();
        ensure!(seq.len() as u128 == oracle_length(d), "length at d={d}");
        ensure!(check_valid(&seq).is_none(), "d={d} invalid");
        ensure!(check_cyclic(&seq).is_none(), "d={d} not cyclic");
        let full = check_non_dominating_full(&seq, &FullCheck::default()).unwrap();
        ensure!(full.is_none(), "d={d}: {}", full.unwrap());
    }
    within(t, Duration::from_secs(10), "full conformance")
}

fn c4_large_scale() -> Result<(), String> {
    let t = Instant::now();
    let spec = make_spec(8).unwrap();
    ensure!(spec.length_u64() == Some(13_815_396), "length");
    let scan = check_cyclic_streaming(&spec).unwrap();
    ensure!(scan.is_none(), "streaming scan: {}", scan.unwrap());
    let r = check_non_dominating_sampled(&spec, 1_000_000, 7, Exec::Parallel).unwrap();
    ensure!(
        r.pairs_checked == 1_000_000 && !r.exhaustive,
        "pairs checked {}",
        r.pairs_checked
    );
    ensure!(
        r.violations.is_empty(),
        "{} dominating pairs",
        r.violations.len()
    );
    ensure!(
        r.witness_failures.is_empty(),
        "{} witness failures",
        r.witness_failures.len()
    );
    within(t, Duration::from_secs(60), "large-scale check")
}

fn c5_random_access() -> Result<(), String> {
    for d in 2..=6 {
        let spec = make_spec(d).unwrap();
        let streamed: Vec<Vec<u64>> = spec
            .stream::<u64>(&BigUint::ZERO, spec.length_u64().unwrap())
            .unwrap()
            .collect();
        ensure!(
            streamed == spec.materialize(DEFAULT_CELL_BUDGET).unwrap().to_rows(),
            "d={d} stream"
        );
        for (k, row) in streamed.iter().enumerate() {
            let v = spec.index_at(&BigUint::from(k)).unwrap().to_u64s().unwrap();
            ensure!(&v == row, "d={d} k={k}");
        }
    }
    let spec = make_spec(8).unwrap();
    let len = spec.length_u64().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut picks: Vec<u64> = (0..10_000).map(|_| rng.random_range(0..len)).collect();
    picks.sort_unstable();
    let mut next = picks.iter().peekable();
    for (k, streamed) in spec.stream::<u64>(&BigUint::ZERO, len).unwrap().enumerate() {
        let k = k as u64;
        while next.peek() == Some(&&k) {
            let direct = spec.index_at(&BigUint::from(k)).unwrap().to_u64s().unwrap();
            ensure!(direct == streamed, "d=8 k={k}");
            next.next();
        }
        if next.peek().is_none() {
            break;
        }
    }
    ensure!(next.peek().is_none(), "stream ended before all picks");
    Ok(())
}

/// Rows of the X/Y evolution table for n = 4, block by block.
fn c6_table() -> Result<(), String> {
    let e = extend(&base_sequence(), true).unwrap();
    let (x, y) = (e.column(2), e.column(3));
    let n = 4usize;
    let rows: [(&str, usize, &[u64], &[u64]); 3] = [
        (
            "block 0",
            0,
            &[0, 1, 2, 3, 4, 5, 6, 7],
            &[4, 5, 6, 7, 0, 0, 1, 2],
        ),
        (
            "block 1",
            2 * n,
            &[0, 0, 1, 2, 3, 4, 5, 6],
            &[3, 4, 5, 6, 0, 0, 0, 1],
        ),
        ("final block", 2 * n * n, &[0, 0, 0, 0], &[0, 1, 2, 3]),
    ];
    for (name, start, want_x, want_y) in rows {
        let got_x = &x[start..start + want_x.len()];
        let got_y = &y[start..start + want_y.len()];
        ensure!(got_x == want_x, "{name} X: {got_x:?}");
        ensure!(got_y == want_y, "{name} Y: {got_y:?}");
    }
    ensure!(e.len() == 36, "length {}", e.len());
    Ok(())
}

fn c7_binary_counter() -> Result<(), String> {
    let c = binary_counter(3).unwrap();
    let matrix: [&[u64]; 3] = [
        &[1, 2, 3, 4, 0, 0, 0, 0],
        &[1, 2, 0, 0, 1, 2, 0, 0],
        &[1, 0, 1, 0, 1, 0, 1, 0],
    ];
    for (row, want) in matrix.iter().enumerate() {
        let got = c.column(2 - row);
        ensure!(got == *want, "matrix row {row}: {got:?}");
    }
    let opts = FullCheck {
        max_comparisons: 200_000_000,
        exec: Exec::Parallel,
    };
    for k in 1..=12 {
        let c = binary_counter(k).unwrap();
        ensure!(c.len() == 1 << k, "length at k={k}");
        ensure!(check_valid(&c).is_none(), "k={k} invalid");
        ensure!(
            check_non_dominating_full(&c, &opts).unwrap().is_none(),
            "k={k} dominated"
        );
    }
    Ok(())
}

fn c8_oracle() -> Result<(), String> {
    let o = SearchOptions::new(12);
    let v1 = max_valid_length(1, &o).unwrap();
    ensure!(
        v1.is_exact() && v1.max_length == 2,
        "L_1 = {}",
        v1.max_length
    );
    let c2 = max_cyclic_length(2, &o).unwrap();
    ensure!(
        c2.is_exact() && c2.max_length >= 4,
        "L°_2 = {}",
        c2.max_length
    );
    let mut e = EnumerateOptions::new(2, 4, 3);
    e.cyclic = true;
    ensure!(
        collect_sequences(&e).unwrap().contains(&base_sequence()),
        "base sequence not enumerated"
    );
    for d in [1usize, 2, 3] {
        for cyclic in [false, true] {
            let mut o = SearchOptions::new(if d == 3 { 6 } else { 12 });
            o.node_budget = Some(20_000_000);
            let r = if cyclic {
                max_cyclic_length(d, &o)
            } else {
                max_valid_length(d, &o)
            }
            .unwrap();
            let rows = r.witness.to_rows();
            ensure!(
                common::naive_conforming(&rows, cyclic),
                "d={d} cyclic={cyclic} witness rejected"
            );
            ensure!(check_valid(&r.witness).is_none(), "witness invalid");
            ensure!(
                !cyclic || check_cyclic(&r.witness).is_none(),
                "witness not cyclic"
            );
            ensure!(
                check_non_dominating_full(&r.witness, &FullCheck::default())
                    .unwrap()
                    .is_none(),
                "witness dominated"
            );
        }
    }
    for (d, max_len) in [(1usize, 4usize), (2, 7)] {
        for cap in 0..=4 {
            for len in 1..=max_len {
                for cyclic in [false, true] {
                    let mut e = EnumerateOptions::new(d, len, cap);
                    e.cyclic = cyclic;
                    let pruned = collect_sequences(&e).unwrap();
                    e.prune = false;
                    ensure!(
                        pruned == collect_sequences(&e).unwrap(),
                        "pruned/unpruned differ d={d} cap={cap} len={len}"
                    );
                }
            }
        }
    }
    Ok(())
}

fn c9_mutations() -> Result<(), String> {
    let base = base_sequence();
    for cell in 0..base.cells().len() {
        let mut m = base.clone();
        m.cells_mut()[cell] += 1;
        let caught = check_valid(&m).is_some()
            || check_cyclic(&m).is_some()
            || check_non_dominating_full(&m, &FullCheck::default())
                .unwrap()
                .is_some();
        let conforming = common::naive_conforming(&m.to_rows(), true);
        ensure!(
            caught != conforming,
            "cell {cell}: caught={caught} conforming={conforming}"
        );
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("corrupted.csv");
    std::fs::write(&path, "1,1\n0,2\n1,0\n1,1\n").map_err(|e| e.to_string())?;
    let o = Command::new(env!("CARGO_BIN_EXE_resetseq"))
        .args(["verify", "--file", path.to_str().unwrap(), "--mode", "full"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(o.status.code() == Some(1), "exit {:?}", o.status.code());
    let out = String::from_utf8_lossy(&o.stdout);
    ensure!(
        out.lines().any(|l| l == "dominating-pair 0 3"),
        "stdout: {out}"
    );
    Ok(())
}

/// Dimension 20 is far beyond materialization; check it through the
/// bound arithmetic, random access and sampled witnesses instead.
fn c10_high_dimension_properties() -> Result<(), String> {
    let spec = make_spec(20).unwrap();
    ensure!(closed_form_bound(20).unwrap() <= *spec.length(), "bound");
    let r = check_non_dominating_sampled(&spec, 2_000, 20, Exec::Parallel).unwrap();
    ensure!(r.is_clean(), "{} violations", r.violations.len());
    let last = spec.length() - 1u32;
    let v = spec.index_at(&last).unwrap();
    let w = spec.index_at(&BigUint::ZERO).unwrap();
    ensure!(resetseq::vec_step_ok(&v, &w).unwrap(), "wrap step at d=20");
    Ok(())
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("1 base case exactness", c1_base_case),
        (
            "2 recurrence table and closed-form bound",
            c2_recurrence_table,
        ),
        ("3 full conformance d=2..6", c3_full_conformance),
        ("4 large-scale spot conformance d=8", c4_large_scale),
        ("5 random-access consistency", c5_random_access),
        ("6 evolution table reproduction", c6_table),
        ("7 binary counter reproduction", c7_binary_counter),
        ("8 oracle cross-validation", c8_oracle),
        ("9 mutation sensitivity", c9_mutations),
        (
            "10 high-dimension claim covered property-wise",
            c10_high_dimension_properties,
        ),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("PASS criterion {name} ({secs:.2}s)"),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.2}s): {e}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
