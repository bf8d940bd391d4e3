#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Digits in the row/column order of the published confusion tables.
pub const DISPLAY_ORDER: [usize; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 0];

/// Clean-condition confusion counts, rows and columns in `DISPLAY_ORDER`.
pub const TABLE4: [[usize; 10]; 10] = [
    [45, 0, 0, 0, 0, 0, 1, 0, 3, 0],
    [0, 50, 3, 0, 0, 2, 0, 2, 0, 1],
    [1, 2, 45, 1, 0, 1, 1, 0, 2, 0],
    [1, 0, 0, 47, 0, 2, 4, 0, 0, 0],
    [0, 0, 0, 0, 48, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 42, 0, 2, 0, 1],
    [1, 1, 2, 1, 0, 0, 39, 1, 0, 0],
    [0, 1, 0, 0, 0, 2, 0, 52, 0, 0],
    [1, 0, 0, 0, 1, 0, 0, 0, 41, 2],
    [1, 0, 0, 2, 0, 0, 0, 0, 0, 45],
];
pub const TABLE4_HIT: [f64; 10] = [91.8, 86.2, 84.9, 87.0, 100.0, 93.3, 86.7, 94.5, 91.1, 93.8];
pub const TABLE4_MISS: [f64; 10] = [10.0, 7.4, 10.0, 7.8, 2.0, 14.3, 13.3, 8.8, 10.9, 8.2];

/// Noisy-condition counts, same layout.
pub const TABLE5: [[usize; 10]; 10] = [
    [38, 0, 1, 3, 2, 1, 3, 0, 8, 3],
    [1, 35, 10, 1, 0, 5, 2, 2, 1, 2],
    [2, 6, 34, 0, 0, 2, 3, 5, 3, 1],
    [2, 1, 2, 39, 0, 8, 4, 3, 0, 2],
    [1, 0, 0, 0, 45, 0, 1, 0, 5, 0],
    [0, 3, 2, 2, 0, 25, 0, 2, 0, 1],
    [4, 3, 3, 1, 0, 0, 28, 0, 2, 0],
    [0, 2, 2, 1, 0, 5, 1, 35, 0, 0],
    [4, 0, 0, 0, 2, 0, 1, 0, 32, 1],
    [2, 1, 0, 3, 1, 2, 1, 1, 0, 40],
];
pub const TABLE5_HIT: [f64; 10] = [64.4, 59.3, 60.7, 63.9, 86.5, 71.4, 68.3, 76.1, 80.0, 78.4];
pub const TABLE5_MISS: [f64; 10] = [29.6, 31.4, 37.0, 22.0, 10.0, 47.9, 36.4, 27.1, 37.3, 20.0];

/// Re-indexes a displayed table by digit: `out[desired][recognized]`.
pub fn by_digit(table: &[[usize; 10]; 10]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; 10]; 10];
    for (r, row) in table.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            out[DISPLAY_ORDER[r]][DISPLAY_ORDER[c]] = v;
        }
    }
    out
}

/// Cheapest edit sequence found by trying every partial matching of the
/// spikes of `a` to distinct spikes of `b`: matched pairs cost `q |Δt|`,
/// every unmatched spike costs 1.
pub fn vp_oracle(a: &[f64], b: &[f64], q: f64) -> f64 {
    fn go(i: usize, a: &[f64], b: &[f64], used: &mut Vec<bool>, q: f64, matched: usize, shift: f64, best: &mut f64) {
        if i == a.len() {
            let unmatched = (a.len() - matched) + (b.len() - matched);
            let cost = unmatched as f64 + shift;
            if cost < *best {
                *best = cost;
            }
            return;
        }
        go(i + 1, a, b, used, q, matched, shift, best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, a, b, used, q, matched + 1, shift + q * (a[i] - b[j]).abs(), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(0, a, b, &mut vec![false; b.len()], q, 0, 0.0, &mut best);
    best
}

/// Sorted distinct spike times on a 1/8 ms grid within [0, 200) ms, so
/// that every sum and difference is exact in binary floating point.
pub fn dyadic_train(rng: &mut ChaCha8Rng, max_spikes: usize) -> Vec<f64> {
    let n = rng.random_range(0..=max_spikes);
    let mut ticks: Vec<u32> = Vec::with_capacity(n);
    while ticks.len() < n {
        let t = rng.random_range(0..1600u32);
        if !ticks.contains(&t) {
            ticks.push(t);
        }
    }
    ticks.sort_unstable();
    ticks.into_iter().map(|t| t as f64 / 8.0).collect()
}

/// Dyadic shift costs.
pub const DYADIC_Q: [f64; 5] = [0.0, 0.0625, 0.125, 0.5, 2.0];
