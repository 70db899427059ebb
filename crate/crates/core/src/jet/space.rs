//! Multi-index enumeration and cached operation tables for truncated
//! Taylor expansions.
//!
//! Coefficients are laid out in graded order: degree 0 first, then all
//! degree-1 indices, and so on. Within a degree, indices are ordered with
//! the first exponent descending, so the degree-1 block lists the
//! variables in their natural order. Because the layout is graded, the
//! coefficient block of a lower-order space is a prefix of every
//! higher-order space over the same variables.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 3;

/// A multi-index of partial-derivative exponents.
pub type MultiIndex = Vec<u8>;

/// Total degree of a multi-index.
pub fn degree(idx: &[u8]) -> usize {
    idx.iter().map(|&e| e as usize).sum()
}

/// Number of multi-indices of degree <= `order` in `nvars` variables,
/// i.e. C(nvars + order, order).
pub fn coeff_count(nvars: usize, order: usize) -> usize {
    let mut n = 1usize;
    for k in 1..=order {
        n = n * (nvars + k) / k;
    }
    n
}

/// Shared tables for one `(nvars, order)` pair.
#[derive(Debug)]
pub struct JetSpace {
    pub nvars: usize,
    pub order: usize,
    /// All multi-indices of degree <= order, graded layout.
    pub indices: Vec<MultiIndex>,
    /// Position of each multi-index in `indices`.
    pub position: HashMap<MultiIndex, usize>,
    /// Degree of the index at each position.
    pub degrees: Vec<u8>,
    /// Truncated-convolution table: `(i, j, k)` means
    /// `product[k] += a[i] * b[j]`.
    pub mul_pairs: Vec<(u32, u32, u32)>,
    /// Per-variable derivative shift: `(src, dst, factor)` means the jet of
    /// the partial derivative gets `dst += factor * src` in the space one
    /// order down.
    pub deriv: Vec<Vec<(u32, u32, f64)>>,
}

/// All multi-indices of degree <= `order` in graded layout. Unlike jet
/// spaces this has no order cap; the corpus and fixture generators use it
/// to enumerate monomials of higher degree.
pub fn multi_indices(nvars: usize, order: usize) -> Vec<MultiIndex> {
    enumerate(nvars, order)
}

fn enumerate(nvars: usize, order: usize) -> Vec<MultiIndex> {
    fn fill(out: &mut Vec<MultiIndex>, idx: &mut MultiIndex, pos: usize, rem: u8) {
        if pos + 1 == idx.len() {
            idx[pos] = rem;
            out.push(idx.clone());
            idx[pos] = 0;
            return;
        }
        let mut e = rem;
        loop {
            idx[pos] = e;
            fill(out, idx, pos + 1, rem - e);
            idx[pos] = 0;
            if e == 0 {
                break;
            }
            e -= 1;
        }
    }
    let mut out = Vec::new();
    for d in 0..=order {
        let mut idx = vec![0u8; nvars];
        fill(&mut out, &mut idx, 0, d as u8);
    }
    out
}

impl JetSpace {
    fn build(nvars: usize, order: usize) -> Self {
        assert!(nvars >= 1, "jet space needs at least one variable");
        assert!(order <= MAX_ORDER, "jet order limited to {MAX_ORDER}");
        let indices = enumerate(nvars, order);
        let position: HashMap<MultiIndex, usize> = indices
            .iter()
            .enumerate()
            .map(|(p, idx)| (idx.clone(), p))
            .collect();
        let degrees: Vec<u8> = indices.iter().map(|idx| degree(idx) as u8).collect();

        let mut mul_pairs = Vec::new();
        for (i, a) in indices.iter().enumerate() {
            let da = degrees[i] as usize;
            for (j, b) in indices.iter().enumerate() {
                if da + degrees[j] as usize > order {
                    continue;
                }
                let sum: MultiIndex = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let k = position[&sum];
                mul_pairs.push((i as u32, j as u32, k as u32));
            }
        }

        // Derivative shift tables target the layout of the space one order
        // down; by the graded-prefix property the positions coincide with
        // the leading block of this space.
        let lower = if order > 0 {
            enumerate(nvars, order - 1)
        } else {
            Vec::new()
        };
        let lower_pos: HashMap<MultiIndex, usize> = lower
            .iter()
            .enumerate()
            .map(|(p, idx)| (idx.clone(), p))
            .collect();
        let mut deriv = vec![Vec::new(); nvars];
        if order > 0 {
            for (src, idx) in indices.iter().enumerate() {
                for (v, table) in deriv.iter_mut().enumerate() {
                    if idx[v] == 0 {
                        continue;
                    }
                    let mut shifted = idx.clone();
                    shifted[v] -= 1;
                    let dst = lower_pos[&shifted];
                    table.push((src as u32, dst as u32, idx[v] as f64));
                }
            }
        }

        JetSpace {
            nvars,
            order,
            indices,
            position,
            degrees,
            mul_pairs,
            deriv,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

type SpaceCache = Mutex<HashMap<(usize, usize), Arc<JetSpace>>>;

static CACHE: OnceLock<SpaceCache> = OnceLock::new();

/// Fetch (building on first use) the shared tables for `(nvars, order)`.
pub fn space(nvars: usize, order: usize) -> Arc<JetSpace> {
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    // A panic inside `build` (bad arguments) never leaves the map half
    // written, so recovering from poisoning is sound.
    let mut map = cache.lock().unwrap_or_else(|p| p.into_inner());
    map.entry((nvars, order))
        .or_insert_with(|| Arc::new(JetSpace::build(nvars, order)))
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_prefix_property() {
        for nvars in 1..=5 {
            for order in 1..=3 {
                let hi = space(nvars, order);
                let lo = space(nvars, order - 1);
                assert_eq!(&hi.indices[..lo.len()], &lo.indices[..]);
            }
        }
    }

    #[test]
    fn counts_match_binomial() {
        // C(m + k, k) by direct enumeration.
        assert_eq!(space(3, 3).len(), 20);
        assert_eq!(space(2, 2).len(), 6);
        assert_eq!(space(4, 3).len(), 35);
        assert_eq!(space(5, 3).len(), 56);
        assert_eq!(space(1, 0).len(), 1);
    }

    #[test]
    fn degree_one_block_orders_variables() {
        let s = space(3, 2);
        assert_eq!(s.indices[0], vec![0, 0, 0]);
        assert_eq!(s.indices[1], vec![1, 0, 0]);
        assert_eq!(s.indices[2], vec![0, 1, 0]);
        assert_eq!(s.indices[3], vec![0, 0, 1]);
    }
}
