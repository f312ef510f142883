//! Exact brute-force solvers for small graphs.
//!
//! [`solve_exact`] is the ground-truth oracle used to validate the structured
//! solvers: it maximizes over all partitions into connected blocks, which is
//! lossless because splitting a disconnected coalition into components never
//! reduces welfare. [`solve_exact_allow_disconnected_blocks`] drops even that
//! restriction (by brute force over all set partitions) and exists to test
//! exactly that claim.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{CoalitionSet, Graph};
use crate::rational::Rational;
use crate::welfare::Partition;

/// Vertex limit for [`solve_exact`]; the subset tables grow as `2^n`.
pub const EXACT_LIMIT: usize = 20;

/// Vertex limit for [`solve_exact_allow_disconnected_blocks`] (Bell-number search).
pub const UNRESTRICTED_LIMIT: usize = 12;

/// Maximum-welfare partition of a connected graph with at most
/// [`EXACT_LIMIT`] vertices, over partitions into connected blocks.
pub fn solve_exact(g: &Graph) -> Result<(Partition, Rational)> {
    let n = g.n();
    if n == 0 || n > EXACT_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXACT_LIMIT,
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let adj = adjacency_masks(g);
    let connected = mark_connected_subsets(&adj);
    let size = 1usize << n;

    // Weight of every connected block; pure per-mask work, filled in parallel.
    let weights: Vec<Option<Rational>> = (0..size)
        .into_par_iter()
        .map(|mask| connected[mask].then(|| mask_weight(&adj, mask as u32)))
        .collect();

    // dp[s] = best welfare over partitions of the vertex set s; the block
    // containing the lowest vertex of s is enumerated to avoid counting a
    // partition once per block ordering.
    let mut dp = vec![Rational::ZERO; size];
    let mut choice = vec![0u32; size];
    for mask in 1..size {
        let low = 1u32 << (mask as u32).trailing_zeros();
        let rest = mask as u32 & !low;
        let mut best: Option<(Rational, u32)> = None;
        let mut sub = rest;
        loop {
            let block = sub | low;
            if connected[block as usize] {
                let cand =
                    weights[block as usize].as_ref().unwrap() + &dp[(mask as u32 ^ block) as usize];
                if best.as_ref().is_none_or(|(b, _)| cand > *b) {
                    best = Some((cand, block));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        let (value, block) = best.expect("singleton block is always connected");
        dp[mask] = value;
        choice[mask] = block;
    }

    let full = (size - 1) as u32;
    let mut blocks = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let block = choice[mask as usize];
        blocks.push(CoalitionSet::from_mask(block as u64));
        mask ^= block;
    }
    Ok((Partition::new(blocks), dp[full as usize].clone()))
}

/// Maximum welfare over all set partitions, connected or not.
///
/// Exhaustive search over Bell(n) partitions with memoized block weights;
/// limited to [`UNRESTRICTED_LIMIT`] vertices.
pub fn solve_exact_allow_disconnected_blocks(g: &Graph) -> Result<(Partition, Rational)> {
    let n = g.n();
    if n == 0 || n > UNRESTRICTED_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: UNRESTRICTED_LIMIT,
        });
    }
    let adj = adjacency_masks(g);
    let size = 1usize << n;
    let weights: Vec<Rational> = (0..size)
        .into_par_iter()
        .map(|mask| mask_weight(&adj, mask as u32))
        .collect();

    fn search(
        v: usize,
        n: usize,
        blocks: &mut Vec<u32>,
        weights: &[Rational],
        best: &mut Option<(Rational, Vec<u32>)>,
    ) {
        if v == n {
            let total: Rational = blocks.iter().map(|&b| &weights[b as usize]).sum();
            if best.as_ref().is_none_or(|(b, _)| total > *b) {
                *best = Some((total, blocks.clone()));
            }
            return;
        }
        let bit = 1u32 << v;
        for i in 0..blocks.len() {
            blocks[i] |= bit;
            search(v + 1, n, blocks, weights, best);
            blocks[i] &= !bit;
        }
        blocks.push(bit);
        search(v + 1, n, blocks, weights, best);
        blocks.pop();
    }

    let mut best = None;
    search(0, n, &mut Vec::new(), &weights, &mut best);
    let (value, masks) = best.expect("n >= 1 yields at least one partition");
    let blocks = masks
        .into_iter()
        .map(|m| CoalitionSet::from_mask(m as u64))
        .collect();
    Ok((Partition::new(blocks), value))
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.n() as u32)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect()
}

/// Marks every vertex subset whose induced subgraph is connected.
///
/// Subsets are grown from each seed vertex through neighbors above the seed,
/// so each connected subset is visited exactly once (from its minimum vertex)
/// and no per-mask connectivity recheck is needed.
fn mark_connected_subsets(adj: &[u32]) -> Vec<bool> {
    fn grow(adj: &[u32], universe: u32, connected: &mut [bool], cur: u32, nbr: u32, banned: u32) {
        connected[cur as usize] = true;
        let mut banned = banned;
        let mut cand = nbr & universe & !cur & !banned;
        while cand != 0 {
            let u = cand.trailing_zeros();
            let bit = 1u32 << u;
            cand &= cand - 1;
            grow(adj, universe, connected, cur | bit, nbr | adj[u as usize], banned);
            banned |= bit;
        }
    }

    let n = adj.len();
    let mut connected = vec![false; 1usize << n];
    let all = ((1u64 << n) - 1) as u32;
    for seed in 0..n as u32 {
        let universe = all & !((1u32 << seed) - 1);
        grow(
            adj,
            universe,
            &mut connected,
            1 << seed,
            adj[seed as usize],
            0,
        );
    }
    connected
}

/// Welfare of the coalition given by `mask`, distances inside the induced
/// subgraph; pairs in different components contribute nothing.
fn mask_weight(adj: &[u32], mask: u32) -> Rational {
    let k = mask.count_ones() as i64;
    if k <= 1 {
        return Rational::ZERO;
    }
    // counts[d] = number of ordered pairs at induced distance d (d < 32).
    let mut counts = [0u64; 32];
    let mut members = mask;
    while members != 0 {
        let v = members.trailing_zeros();
        members &= members - 1;
        let mut seen = 1u32 << v;
        let mut frontier = seen;
        let mut d = 0usize;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let u = f.trailing_zeros();
                f &= f - 1;
                next |= adj[u as usize];
            }
            next &= mask & !seen;
            d += 1;
            counts[d] += next.count_ones() as u64;
            seen |= next;
            frontier = next;
        }
    }
    let sum: Rational = counts
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, &c)| c > 0)
        .map(|(d, &c)| Rational::from_i128(c as i128, d as i128))
        .sum();
    sum / Rational::from_int(k)
}
