//! Shared sampling helpers for the verification suites.
#![allow(dead_code)] // each suite uses a different subset

use grwlab_core::catalog::CatalogEntry;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic grid over the entry's chart box, `per_axis^m` points
/// shrunk away from the boundary.
pub fn grid_sample(entry: &CatalogEntry, per_axis: usize) -> Vec<Vec<f64>> {
    let m = entry.spacetime.m();
    let axes: Vec<Vec<f64>> = entry
        .chart_box
        .iter()
        .map(|&(lo, hi)| {
            let pad = 0.05 * (hi - lo);
            (0..per_axis)
                .map(|k| lo + pad + (hi - lo - 2.0 * pad) * k as f64 / (per_axis - 1) as f64)
                .collect()
        })
        .collect();
    let mut out = vec![vec![]];
    for axis in &axes[..m] {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for partial in &out {
            for &v in axis {
                let mut p = partial.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Seeded random points in the entry's chart box.
pub fn random_sample(entry: &CatalogEntry, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let m = entry.spacetime.m();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            entry
                .chart_box
                .iter()
                .take(m)
                .map(|&(lo, hi)| {
                    let pad = 0.05 * (hi - lo);
                    rng.random_range(lo + pad..hi - pad)
                })
                .collect()
        })
        .collect()
}

/// Seeded random times inside the entry's sampling range.
pub fn random_times(entry: &CatalogEntry, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = entry.t_range;
    (0..count).map(|_| rng.random_range(lo..hi)).collect()
}
