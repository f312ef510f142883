//! Closed-form optimal partition of the path `P_n`.
//!
//! An optimal partition of a path uses only `P_2`, `P_3` and `P_4` blocks:
//! all `P_3`s when `n` is divisible by 3, one leading `P_4` when `n = 3t+1`,
//! and one leading `P_2` when `n = 3t+2` (the two-`P_4` family has the same
//! value; this solver deterministically emits the `P_2`-first one).

use crate::error::{Error, Result};
use crate::graph::CoalitionSet;
use crate::rational::Rational;
use crate::welfare::Partition;

/// Optimal partition and welfare for the path on vertices `0..n` in order.
pub fn solve_path(n: usize) -> Result<(Partition, Rational)> {
    if n == 0 {
        return Err(Error::InvalidGraph("path solver needs n >= 1".into()));
    }
    if n == 1 {
        return Ok((Partition::grand(1), Rational::ZERO));
    }
    let phi_p2 = Rational::ONE;
    let phi_p3 = Rational::new(5, 3);
    let phi_p4 = Rational::new(13, 6);

    let mut blocks = Vec::new();
    let mut welfare = Rational::ZERO;
    let mut next = 0u32;
    let take = |len: u32, next: &mut u32, blocks: &mut Vec<CoalitionSet>| {
        blocks.push(CoalitionSet::new((*next..*next + len).collect()));
        *next += len;
    };
    match n % 3 {
        1 => {
            take(4, &mut next, &mut blocks);
            welfare += &phi_p4;
        }
        2 => {
            take(2, &mut next, &mut blocks);
            welfare += &phi_p2;
        }
        _ => {}
    }
    while (next as usize) < n {
        take(3, &mut next, &mut blocks);
        welfare += &phi_p3;
    }
    Ok((Partition::new(blocks), welfare))
}
