//! Shared inputs for the benchmarks.

use cocycle_core::cocycle::{random_dense, sweep_rng};
use cocycle_core::{Alphabet, Ball, Dense};

/// Deterministic random configurations on `B(r)` with zero default.
pub fn configurations(ball: &Ball, r: u32, alphabet: &Alphabet, count: usize) -> Vec<Dense> {
    let len = ball.ball_len(r);
    (0..count as u64)
        .map(|i| {
            let d = random_dense(&mut sweep_rng(0xbe7c, i), alphabet, len);
            Dense::new(d.values().to_vec(), alphabet.zero())
        })
        .collect()
}
