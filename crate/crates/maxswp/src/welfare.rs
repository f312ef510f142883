//! Utilities, social welfare, and closed-form welfare formulas.
//!
//! A member of coalition `C` gets utility `(1/|C|) * sum 1/dist(v, u)` over
//! its coalition mates, distances taken in the induced subgraph; unreachable
//! mates contribute nothing and a singleton coalition is worth 0. The social
//! welfare of a partition is the sum of all member utilities.
//!
//! Everything here is exact: several downstream decisions (diameter lemmas,
//! optimality ties) sit precisely on rational boundaries.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::check_diam4_shape;
use crate::graph::{CoalitionSet, Graph, Tree};
use crate::rational::Rational;

/// A disjoint cover of the vertex set by nonempty coalitions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<CoalitionSet>,
}

impl Partition {
    /// Wraps blocks without validating; call [`Partition::validate`] against
    /// the target graph before trusting the result.
    pub fn new(blocks: Vec<CoalitionSet>) -> Self {
        Partition { blocks }
    }

    /// The single-block partition of `0..n`.
    pub fn grand(n: usize) -> Self {
        Partition {
            blocks: vec![CoalitionSet::full(n)],
        }
    }

    pub fn blocks(&self) -> &[CoalitionSet] {
        &self.blocks
    }

    /// Checks the partition covers `0..n` disjointly with no empty block.
    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        let mut total = 0usize;
        for block in &self.blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for v in block.iter() {
                if v as usize >= n {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} out of range for n = {n}"
                    )));
                }
                if seen[v as usize] {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} appears in two blocks"
                    )));
                }
                seen[v as usize] = true;
            }
            total += block.len();
        }
        if total != n {
            return Err(Error::InvalidPartition(format!(
                "blocks cover {total} of {n} vertices"
            )));
        }
        Ok(())
    }
}

/// Utility of vertex `v` inside coalition `c`.
pub fn utility(g: &Graph, v: u32, c: &CoalitionSet) -> Result<Rational> {
    if !c.contains(v) {
        return Err(Error::NotInCoalition { vertex: v });
    }
    let dist = g.bfs_distances(v, c)?;
    let sum: Rational = dist
        .iter()
        .filter(|&(&u, _)| u != v)
        .map(|(_, &d)| Rational::recip_of(d as u64))
        .sum();
    Ok(sum / Rational::from_int(c.len() as i64))
}

/// Welfare contributed by a single coalition: `sum_{v in c} U(v, c)`.
///
/// Panics on an empty coalition.
pub fn block_welfare(g: &Graph, c: &CoalitionSet) -> Rational {
    assert!(!c.is_empty(), "welfare of an empty coalition");
    // Tally ordered reachable pairs by distance so the rational work is one
    // term per distinct distance rather than one per pair.
    let mut pair_counts: Vec<u64> = Vec::new();
    for v in c.iter() {
        let dist = g.bfs_distances(v, c).expect("v drawn from c");
        for (&u, &d) in &dist {
            if u != v {
                let d = d as usize;
                if pair_counts.len() <= d {
                    pair_counts.resize(d + 1, 0);
                }
                pair_counts[d] += 1;
            }
        }
    }
    let sum: Rational = pair_counts
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, &cnt)| cnt > 0)
        .map(|(d, &cnt)| Rational::from_i128(cnt as i128, d as i128))
        .sum();
    sum / Rational::from_int(c.len() as i64)
}

/// Social welfare of a partition; validates the partition first.
pub fn welfare(g: &Graph, p: &Partition) -> Result<Rational> {
    p.validate(g.n())?;
    Ok(p.blocks().iter().map(|c| block_welfare(g, c)).sum())
}

/// Average social welfare: welfare divided by the vertex count.
pub fn avg_welfare(g: &Graph, p: &Partition) -> Result<Rational> {
    Ok(welfare(g, p)? / Rational::from_int(g.n() as i64))
}

fn big_int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn big_frac(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Grand-coalition welfare of the star with `leaves` leaves:
/// `(n-1)(n+2) / (2n)` with `n = leaves + 1`.
pub fn star_welfare(leaves: u64) -> Rational {
    if leaves == 0 {
        return Rational::ZERO;
    }
    let n = big_int(leaves + 1);
    let one = big_int(1);
    let value = (&n - &one) * (&n + big_int(2)) / (big_int(2) * &n);
    Rational::from(value)
}

/// `h(k) = sum_{i=1..k} 1/i`, summed pairwise to keep the big factors balanced.
fn harmonic(k: u64) -> BigRational {
    fn range_sum(lo: u64, hi: u64) -> BigRational {
        if lo == hi {
            return big_frac(1, lo);
        }
        let mid = lo + (hi - lo) / 2;
        range_sum(lo, mid) + range_sum(mid + 1, hi)
    }
    if k == 0 {
        BigRational::from_integer(BigInt::from(0))
    } else {
        range_sum(1, k)
    }
}

/// Grand-coalition welfare of the path `P_n`: `(2 sum_{k<n} h(k)) / n`.
pub fn path_welfare(n: u64) -> Rational {
    if n <= 1 {
        return Rational::ZERO;
    }
    // sum_{k=1}^{n-1} h(k) = n*h(n-1) - (n-1)
    let h = harmonic(n - 1);
    let n_big = big_int(n);
    let value = big_int(2) * (&n_big * h - (&n_big - big_int(1))) / &n_big;
    Rational::from(value)
}

/// Grand-coalition welfare of the diameter-3 tree with `k` and `l` leaves on
/// the two centers. Requires `k, l >= 1`.
pub fn diam3_grand_welfare(k: u64, l: u64) -> Rational {
    assert!(k >= 1 && l >= 1, "diameter-3 shape needs k, l >= 1");
    let (kb, lb) = (big_int(k), big_int(l));
    let numer = (&kb * &kb + &lb * &lb) / big_int(2)
        + big_frac(5, 2) * (&kb + &lb)
        + big_frac(2, 3) * &kb * &lb
        + big_int(2);
    Rational::from(numer / big_int(k + l + 2))
}

/// Grand-coalition welfare of the diameter-4 tree whose spoke `i` carries
/// `leaf_counts[i]` leaves. Shape rules as in [`crate::generate::diam4_tree`].
pub fn diam4_grand_welfare(leaf_counts: &[usize]) -> Result<Rational> {
    check_diam4_shape(leaf_counts)?;
    let k = leaf_counts.len() as u64;
    let alpha: u64 = leaf_counts.iter().map(|&l| l as u64).sum();
    let beta: u64 = leaf_counts.iter().map(|&l| (l * l) as u64).sum();
    let (kb, ab) = (big_int(k), big_int(alpha));
    let numer = (&ab * &ab + big_int(beta)) / big_int(4)
        + big_frac(2, 3) * &kb * &ab
        + big_frac(11, 6) * &ab
        + &kb * &kb / big_int(2)
        + big_frac(3, 2) * &kb;
    Ok(Rational::from(numer / big_int(k + alpha + 1)))
}

/// Grand-coalition welfare of a tree and whether it reaches `n/2`.
pub fn grand_meets_half(t: &Tree) -> (Rational, bool) {
    let g = t.graph();
    let phi = block_welfare(g, &CoalitionSet::full(g.n()));
    let half_n = Rational::new(g.n() as i64, 2);
    let meets = phi >= half_n;
    (phi, meets)
}
