//! Graph and tree generators for solvers and test corpora.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Tree};

/// Largest `n` accepted by [`enumerate_labeled_trees`]; `n^(n-2)` grows too
/// fast to enumerate beyond this.
pub const MAX_ENUMERATION: usize = 9;

/// The path `P_n` on vertices `0..n` in order.
pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n as u32).map(|v| (v - 1, v)).collect();
    Graph::new(n, &edges).expect("path edges are simple")
}

/// The star `K_{1,leaves}` with center 0.
pub fn star_graph(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves as u32).map(|v| (0, v)).collect();
    Graph::new(leaves + 1, &edges).expect("star edges are simple")
}

/// The diameter-3 tree with centers `u1 = 0`, `u2 = 1`, `k` leaves on `u1`
/// and `l` leaves on `u2`. Requires `k, l >= 1`.
pub fn diam3_tree(k: usize, l: usize) -> Tree {
    assert!(k >= 1 && l >= 1, "diameter-3 tree needs k, l >= 1");
    let mut edges = vec![(0u32, 1u32)];
    for i in 0..k as u32 {
        edges.push((0, 2 + i));
    }
    for j in 0..l as u32 {
        edges.push((1, 2 + k as u32 + j));
    }
    let g = Graph::new(k + l + 2, &edges).expect("diam3 edges are simple");
    Tree::new(g).expect("diam3 construction is a tree")
}

/// The diameter-4 tree with center `v = 0`, spokes `u_1..u_k = 1..=k`, and
/// `leaf_counts[i]` leaves hanging off `u_{i+1}`.
///
/// The shape requires `k >= 2` spokes with `leaf_counts[0], leaf_counts[1] >= 1`;
/// later entries may be zero (those spokes are bare leaves of the center).
pub fn diam4_tree(leaf_counts: &[usize]) -> Result<Tree> {
    check_diam4_shape(leaf_counts)?;
    let k = leaf_counts.len();
    let mut edges: Vec<(u32, u32)> = (1..=k as u32).map(|u| (0, u)).collect();
    let mut next = k as u32 + 1;
    for (i, &cnt) in leaf_counts.iter().enumerate() {
        for _ in 0..cnt {
            edges.push((1 + i as u32, next));
            next += 1;
        }
    }
    let g = Graph::new(next as usize, &edges).expect("diam4 edges are simple");
    Ok(Tree::new(g).expect("diam4 construction is a tree"))
}

pub(crate) fn check_diam4_shape(leaf_counts: &[usize]) -> Result<()> {
    if leaf_counts.len() < 2 || leaf_counts[0] == 0 || leaf_counts[1] == 0 {
        return Err(Error::BadShape(
            "diameter-4 shape needs k >= 2 spokes with the first two carrying a leaf".into(),
        ));
    }
    Ok(())
}

/// A 3-cycle.
pub fn triangle_graph() -> Graph {
    Graph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
}

/// Two triangles sharing the edge (0, 1).
pub fn double_triangle_graph() -> Graph {
    Graph::new(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]).unwrap()
}

/// Three triangles sharing the edge (0, 1).
pub fn triple_triangle_graph() -> Graph {
    Graph::new(
        5,
        &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)],
    )
    .unwrap()
}

/// Decodes a Prufer sequence over `0..n` into the edges of a labeled tree.
fn prufer_decode(n: usize, seq: &[u32]) -> Vec<(u32, u32)> {
    debug_assert_eq!(seq.len(), n.saturating_sub(2));
    if n <= 1 {
        return Vec::new();
    }
    let mut degree = vec![1u32; n];
    for &x in seq {
        degree[x as usize] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &v in seq {
        edges.push((leaf as u32, v));
        degree[v as usize] -= 1;
        if degree[v as usize] == 1 && (v as usize) < ptr {
            // v just became the smallest available leaf.
            leaf = v as usize;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf as u32, n as u32 - 1));
    edges
}

/// A uniformly random labeled tree on `n >= 1` vertices, drawn by decoding a
/// uniformly random Prufer sequence. Equal seeds give equal trees.
pub fn random_tree(n: usize, seed: u64) -> Tree {
    assert!(n >= 1, "random_tree needs n >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq: Vec<u32> = (0..n.saturating_sub(2))
        .map(|_| rng.random_range(0..n as u32))
        .collect();
    let edges = prufer_decode(n, &seq);
    Tree::new(Graph::new(n, &edges).expect("decoded edges are simple"))
        .expect("Prufer decode yields a tree")
}

/// All `n^(n-2)` labeled trees on `n` vertices, via Prufer decoding.
///
/// Refused for `n > MAX_ENUMERATION`.
pub fn enumerate_labeled_trees(n: usize) -> Result<impl Iterator<Item = Tree>> {
    if n == 0 {
        return Err(Error::InvalidGraph("cannot enumerate trees on 0 vertices".into()));
    }
    if n > MAX_ENUMERATION {
        return Err(Error::TooLarge {
            n,
            limit: MAX_ENUMERATION,
        });
    }
    let digits = n.saturating_sub(2);
    let mut seq = vec![0u32; digits];
    let mut done = false;
    Ok(std::iter::from_fn(move || {
        if done {
            return None;
        }
        let edges = prufer_decode(n, &seq);
        let tree = Tree::new(Graph::new(n, &edges).unwrap()).unwrap();
        // Advance the base-n counter.
        done = true;
        for digit in seq.iter_mut().rev() {
            *digit += 1;
            if *digit < n as u32 {
                done = false;
                break;
            }
            *digit = 0;
        }
        Some(tree)
    }))
}
