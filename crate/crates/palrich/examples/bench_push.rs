//! Quick throughput probe: pushes a long pseudo-random binary word.

use std::time::Instant;

use palrich::eertree::Eertree;

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(20_000_000);
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut tree = Eertree::new(2).unwrap();
    let start = Instant::now();
    for _ in 0..n {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let symbol = (state >> 63) as u8;
        tree.push(symbol).unwrap();
    }
    let dt = start.elapsed().as_secs_f64();
    println!(
        "n={} richness={} time={:.3}s rate={:.1}M/s",
        n,
        tree.richness(),
        dt,
        n as f64 / dt / 1e6
    );
}
