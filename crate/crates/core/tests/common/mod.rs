//! Brute-force reference implementations shared by the integration tests.
//! They work on plain `Vec<bool>` rows and truth tables written out by hand,
//! and share no code with the crate's engine.

#![allow(dead_code)]

use std::collections::HashMap;

/// Truth table of a gate name, indexed by `2a + b`.
pub fn table(name: &str) -> [bool; 4] {
    match name {
        "AND" => [false, false, false, true],
        "OR" => [false, true, true, true],
        "XOR" => [false, true, true, false],
        "NAND" => [true, true, true, false],
        "NOR" => [true, false, false, false],
        _ => panic!("no table for {name}"),
    }
}

/// Rule number by enumerating the eight (l, c, r) triples.
pub fn rule_by_enumeration(name: &str) -> u8 {
    let t = table(name);
    let mut rule = 0u8;
    for l in 0..2usize {
        for c in 0..2usize {
            for r in 0..2usize {
                if t[2 * l + r] {
                    rule |= 1 << (4 * l + 2 * c + r);
                }
            }
        }
    }
    rule
}

pub fn ring_step(row: &[bool], name: &str) -> Vec<bool> {
    let t = table(name);
    let n = row.len();
    (0..n)
        .map(|i| {
            let l = row[(i + n - 1) % n] as usize;
            let r = row[(i + 1) % n] as usize;
            t[2 * l + r]
        })
        .collect()
}

/// Stores every configuration of the orbit and returns (transient, period).
pub fn orbit_oracle(initial: &[bool], name: &str) -> (u64, u64) {
    let mut seen: HashMap<Vec<bool>, u64> = HashMap::new();
    let mut row = initial.to_vec();
    let mut t = 0u64;
    loop {
        if let Some(&first) = seen.get(&row) {
            return (first, t - first);
        }
        let next = ring_step(&row, name);
        seen.insert(row, t);
        row = next;
        t += 1;
    }
}

/// All rows of the orbit up to and including the first repeat.
pub fn orbit_rows(initial: &[bool], name: &str, steps: usize) -> Vec<Vec<bool>> {
    let mut rows = vec![initial.to_vec()];
    for _ in 0..steps {
        let next = ring_step(rows.last().unwrap(), name);
        rows.push(next);
    }
    rows
}

/// Renders rows as a P1 bitmap, digits without separators.
pub fn render_pbm(rows: &[Vec<bool>]) -> String {
    let mut s = format!("P1\n{} {}\n", rows[0].len(), rows.len());
    for r in rows {
        for &b in r {
            s.push(if b { '1' } else { '0' });
        }
        s.push('\n');
    }
    s
}

/// Plain Greenberg-Hastings run on a `side x side` grid with no
/// illumination. States: 0 rest, 1 excited, 2..=1+refractory recovering.
/// Returns the excited-cell count after each step.
pub fn gh_excited_counts(side: usize, refractory: u8, seeds: &[(usize, usize)], steps: usize) -> Vec<u64> {
    let mut grid = vec![vec![0u8; side]; side];
    for &(r, c) in seeds {
        grid[r][c] = 1;
    }
    let mut counts = Vec::new();
    for _ in 0..steps {
        let mut next = grid.clone();
        for r in 0..side {
            for c in 0..side {
                next[r][c] = match grid[r][c] {
                    0 => {
                        let mut excited = false;
                        for dr in -1i64..=1 {
                            for dc in -1i64..=1 {
                                let (nr, nc) = (r as i64 + dr, c as i64 + dc);
                                if (dr, dc) != (0, 0)
                                    && nr >= 0
                                    && nc >= 0
                                    && (nr as usize) < side
                                    && (nc as usize) < side
                                    && grid[nr as usize][nc as usize] == 1
                                {
                                    excited = true;
                                }
                            }
                        }
                        excited as u8
                    }
                    s if s == 1 + refractory => 0,
                    s => s + 1,
                };
            }
        }
        grid = next;
        counts.push(grid.iter().flatten().filter(|&&s| s == 1).count() as u64);
    }
    counts
}

/// Deterministic xorshift generator for oracle-side random rows.
pub fn random_row(n: usize, seed: u64) -> Vec<bool> {
    let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    (0..n)
        .map(|_| {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            x & 1 == 1
        })
        .collect()
}
