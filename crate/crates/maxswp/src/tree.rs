//! Near-linear optimal partition of a tree.
//!
//! Every block of an optimal tree partition induces a star `K_{1,|C|-1}`, a
//! path `P_4`, or the five-vertex diameter-3 tree `T35` (two adjacent centers,
//! one carrying one leaf and the other two). The solver roots the tree and
//! runs a bottom-up DP whose states track the coalition containing the current
//! vertex together with the vertex's position inside it:
//!
//! 1. isolated vertex,
//! 2. star `K_{1,f}` with the vertex at the center (`StarMid`) or at a leaf
//!    (`StarLeaf`),
//! 3. `P_4` with the vertex at a leaf (`P4Leaf`) or inside (`P4Mid`),
//! 4. `T35` with the vertex at each of its four distinct positions: the
//!    lone leaf `s1`, a paired leaf `t`, the center `u1` above the lone leaf,
//!    or the center `u2` above the pair.
//!
//! `rho(v, H)` is the best welfare of a partition of the subtree at `v` whose
//! coalition containing `v` has shape/position `H`, and `rho(v)` is the best
//! over all states. Star-center states are optimized by sorting children on
//! `delta = rho(w) - rho(w, isolated)` (the cost of freezing `w` as a
//! singleton in its own subtree) and taking prefixes; the multi-child states
//! combine per-child excesses through top-k candidate lists, so the whole
//! solve costs `O(n log max_degree)`.
//!
//! Internally each state is stored as its excess `rho(v, H) - rho(v)`: those
//! differences telescope away the subtree welfare, so their numerators and
//! denominators are bounded by the offset table (a function of the maximum
//! degree only) instead of growing with the subtree. Only `rho(v)` itself is
//! materialized, with one addition per vertex.

use crate::error::{Error, Result};
use crate::graph::{CoalitionSet, Tree};
use crate::rational::Rational;
use crate::welfare::Partition;

/// Shape of the coalition containing a vertex, with the vertex's position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoalitionState {
    /// Singleton coalition.
    Isolated,
    /// Center of a star with `f >= 1` leaves, all of them children.
    StarMid(u32),
    /// Leaf of a star `K_{1,f}` whose center is a child.
    StarLeaf(u32),
    /// Leaf end of a `P_4` descending through one child.
    P4Leaf,
    /// Interior vertex of a `P_4` built from two children.
    P4Mid,
    /// `T35` lone leaf.
    T35S1,
    /// `T35` paired leaf.
    T35T,
    /// `T35` center adjacent to the lone leaf.
    T35U1,
    /// `T35` center adjacent to the paired leaves.
    T35U2,
}

/// Children used by a state, as positions into the vertex's child list.
#[derive(Debug, Clone, Copy)]
enum Pick {
    One(u32),
    Two(u32, u32),
    Three(u32, u32, u32),
}

#[derive(Debug, Clone)]
struct Entry {
    /// `rho(v, H) - rho(v)`, always <= 0.
    exc: Rational,
    pick: Pick,
}

/// Per-vertex state excesses for an internal vertex with `c` children.
///
/// The two pools keep the whole record in three heap blocks: `excs` holds the
/// `StarMid` excesses (length `c`) followed by the `StarLeaf` excesses
/// (length `cap`), and `indices` holds the children sorted by delta (length
/// `c`) followed by the chosen child of each `StarLeaf(f)` (length `cap`).
#[derive(Debug)]
struct InnerStates {
    child_count: u32,
    excs: Vec<Rational>,
    indices: Vec<u32>,
    p4_leaf: Option<Entry>,
    p4_mid: Option<Entry>,
    t35_s1: Option<Entry>,
    t35_t: Option<Entry>,
    t35_u1: Option<Entry>,
    t35_u2: Option<Entry>,
}

impl InnerStates {
    fn star_mid(&self) -> &[Rational] {
        &self.excs[..self.child_count as usize]
    }

    fn star_leaf(&self) -> &[Rational] {
        &self.excs[self.child_count as usize..]
    }

    fn by_delta(&self) -> &[u32] {
        &self.indices[..self.child_count as usize]
    }

    fn leaf_pick(&self, f: u32) -> u32 {
        self.indices[(self.child_count + f - 1) as usize]
    }
}

#[derive(Debug)]
struct VertexStates {
    /// `rho(v)`: optimum over the subtree.
    rho: Rational,
    /// `rho(v) - rho(v, Isolated)`, the cost the parent pays to absorb `v`
    /// as a star leaf; by construction `delta >= 0`.
    delta: Rational,
    best_state: CoalitionState,
    inner: Option<Box<InnerStates>>,
}

/// Rooted view of the tree in CSR form. `order` is the BFS order from the
/// root, so children of any vertex sit consecutively in `child_pool` and the
/// children of the vertex at BFS position `i` are
/// `child_pool[child_start[i]..child_start[i + 1]]`.
struct Rooted {
    root: u32,
    pos_of: Vec<u32>,
    child_start: Vec<u32>,
    child_pool: Vec<u32>,
}

impl Rooted {
    fn children_at(&self, pos: usize) -> &[u32] {
        &self.child_pool[self.child_start[pos] as usize..self.child_start[pos + 1] as usize]
    }

    fn children_of(&self, v: u32) -> &[u32] {
        self.children_at(self.pos_of[v as usize] as usize)
    }
}

fn root_at(tree: &Tree, root: u32) -> Rooted {
    let g = tree.graph();
    let n = g.n();
    let mut pos_of = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut child_start = Vec::with_capacity(n + 1);
    let mut child_pool = Vec::with_capacity(n.saturating_sub(1));
    order.push(root);
    pos_of[root as usize] = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        child_start.push(child_pool.len() as u32);
        for &w in g.neighbors(v) {
            if pos_of[w as usize] == u32::MAX {
                pos_of[w as usize] = order.len() as u32;
                order.push(w);
                child_pool.push(w);
            }
        }
    }
    child_start.push(child_pool.len() as u32);
    Rooted {
        root,
        pos_of,
        child_start,
        child_pool,
    }
}

/// Grand welfare of `K_{1,f}`: `f(f+3) / (2(f+1))`.
pub(crate) fn star_phi(f: u64) -> Rational {
    if f == 0 {
        Rational::ZERO
    } else {
        let f = f as i128;
        Rational::from_i128(f * (f + 3), 2 * (f + 1))
    }
}

struct PhiTable {
    p2: Rational,
    p3: Rational,
    p4: Rational,
    k13: Rational,
    t35: Rational,
}

impl PhiTable {
    fn new() -> Self {
        PhiTable {
            p2: star_phi(1),
            p3: star_phi(2),
            p4: crate::welfare::path_welfare(4),
            k13: star_phi(3),
            t35: crate::welfare::diam3_grand_welfare(2, 1),
        }
    }
}

/// Keeps the `k` strictly-largest `(value, position)` candidates, earliest
/// position first among equals.
struct TopK {
    k: usize,
    items: Vec<(Rational, u32)>,
}

impl TopK {
    fn new(k: usize) -> Self {
        TopK {
            k,
            items: Vec::with_capacity(k + 1),
        }
    }

    fn clear(&mut self) {
        self.items.clear();
    }

    fn push(&mut self, value: Rational, pos: u32) {
        let at = self
            .items
            .iter()
            .position(|(v, _)| value > *v)
            .unwrap_or(self.items.len());
        if at < self.k {
            self.items.insert(at, (value, pos));
            self.items.truncate(self.k);
        }
    }
}

/// Buffers reused across vertices to keep the DP allocation-light.
struct Scratch {
    /// `phi(K_{1,f})` indexed by `f`.
    star: Vec<Rational>,
    /// `phi(K_{1,f}) - phi(K_{1,f-1})` indexed by `f - 1`.
    star_step: Vec<Rational>,
    leaf_slots: Vec<Option<(Rational, u32)>>,
    top_iso: TopK,
    top_leaf1: TopK,
    top_mid2: TopK,
}

impl Scratch {
    /// `max_f` bounds the star sizes any vertex can use (its child count).
    fn new(max_f: usize) -> Self {
        let star: Vec<Rational> = (0..=max_f as u64 + 1).map(star_phi).collect();
        let star_step = star.windows(2).map(|w| &w[1] - &w[0]).collect();
        Scratch {
            star,
            star_step,
            leaf_slots: Vec::new(),
            top_iso: TopK::new(3),
            top_leaf1: TopK::new(3),
            top_mid2: TopK::new(2),
        }
    }
}

fn best_pair(a: &[(Rational, u32)], b: &[(Rational, u32)]) -> Option<Entry> {
    let mut best: Option<(Rational, u32, u32)> = None;
    for (av, ap) in a {
        for (bv, bp) in b {
            if ap == bp {
                continue;
            }
            let value = av + bv;
            if best.as_ref().is_none_or(|(v, _, _)| value > *v) {
                best = Some((value, *ap, *bp));
            }
        }
    }
    best.map(|(value, ap, bp)| Entry {
        exc: value,
        pick: Pick::Two(ap, bp),
    })
}

/// Best `a + b1 + b2` over distinct positions, `b1, b2` drawn from `b`.
fn best_triple(a: &[(Rational, u32)], b: &[(Rational, u32)]) -> Option<Entry> {
    let mut best: Option<(Rational, u32, u32, u32)> = None;
    for (av, ap) in a {
        for (i, (b1v, b1p)) in b.iter().enumerate() {
            if b1p == ap {
                continue;
            }
            for (b2v, b2p) in &b[i + 1..] {
                if b2p == ap || b2p == b1p {
                    continue;
                }
                let value = av + b1v + b2v;
                if best.as_ref().is_none_or(|(v, ..)| value > *v) {
                    best = Some((value, *ap, *b1p, *b2p));
                }
            }
        }
    }
    best.map(|(value, ap, b1p, b2p)| Entry {
        exc: value,
        pick: Pick::Three(ap, b1p, b2p),
    })
}

/// The per-vertex DP table of a solved tree.
pub struct StateTable {
    rooted: Rooted,
    /// Indexed by BFS position, so a vertex's children are contiguous.
    states: Vec<VertexStates>,
}

impl StateTable {
    pub fn root(&self) -> u32 {
        self.rooted.root
    }

    pub fn children(&self, v: u32) -> &[u32] {
        self.rooted.children_of(v)
    }

    fn at(&self, v: u32) -> &VertexStates {
        &self.states[self.rooted.pos_of[v as usize] as usize]
    }

    /// `rho(v, H)`, or `None` when the state needs more children than `v` has.
    pub fn rho(&self, v: u32, h: CoalitionState) -> Option<Rational> {
        self.excess(v, h).map(|e| self.rho_best(v) + e)
    }

    /// `rho(v, H) - rho(v)`.
    fn excess(&self, v: u32, h: CoalitionState) -> Option<Rational> {
        let s = self.at(v);
        if let CoalitionState::Isolated = h {
            return Some(-&s.delta);
        }
        let inner = s.inner.as_deref()?;
        let entry = match h {
            CoalitionState::Isolated => unreachable!(),
            CoalitionState::StarMid(f) => return inner.star_mid().get(f as usize - 1).cloned(),
            CoalitionState::StarLeaf(f) => {
                return inner.star_leaf().get(f as usize - 1).cloned()
            }
            CoalitionState::P4Leaf => inner.p4_leaf.as_ref(),
            CoalitionState::P4Mid => inner.p4_mid.as_ref(),
            CoalitionState::T35S1 => inner.t35_s1.as_ref(),
            CoalitionState::T35T => inner.t35_t.as_ref(),
            CoalitionState::T35U1 => inner.t35_u1.as_ref(),
            CoalitionState::T35U2 => inner.t35_u2.as_ref(),
        };
        entry.map(|e| e.exc.clone())
    }

    /// `rho(v)`: the optimum over the subtree rooted at `v`.
    pub fn rho_best(&self, v: u32) -> &Rational {
        &self.at(v).rho
    }

    pub fn best_state(&self, v: u32) -> CoalitionState {
        self.at(v).best_state
    }
}

/// Runs the DP from `root` and returns the filled state table.
pub fn compute_states(tree: &Tree, root: u32) -> Result<StateTable> {
    let g = tree.graph();
    if root as usize >= g.n() {
        return Err(Error::InvalidGraph(format!("root {root} out of range")));
    }
    let rooted = root_at(tree, root);
    let n = g.n();
    let phi = PhiTable::new();
    let max_children = (0..n)
        .map(|p| (rooted.child_start[p + 1] - rooted.child_start[p]) as usize)
        .max()
        .unwrap_or(0);
    let mut scratch = Scratch::new(max_children);

    // Leaf states are the defaults; internal vertices get overwritten in
    // reverse BFS order, by which time their children (at higher positions,
    // contiguous in BFS) are final.
    let mut states: Vec<VertexStates> = (0..n)
        .map(|_| VertexStates {
            rho: Rational::ZERO,
            delta: Rational::ZERO,
            best_state: CoalitionState::Isolated,
            inner: None,
        })
        .collect();
    for pos in (0..n).rev() {
        let c = (rooted.child_start[pos + 1] - rooted.child_start[pos]) as usize;
        if c == 0 {
            continue;
        }
        // The vertex at BFS position p has its k-th child at position
        // child_start[p] + 1 + k (every non-root vertex enters the pool once,
        // in discovery order, one step behind `order`).
        let first_child_pos = rooted.child_start[pos] as usize + 1;
        let (head, tail) = states.split_at_mut(pos + 1);
        let kids = &tail[first_child_pos - pos - 1..first_child_pos - pos - 1 + c];
        head[pos] = compute_vertex(kids, &phi, &mut scratch);
    }
    Ok(StateTable { rooted, states })
}

/// Computes the states of one vertex from its children's states.
fn compute_vertex(
    child_states: &[VertexStates],
    phi: &PhiTable,
    scratch: &mut Scratch,
) -> VertexStates {
    let c = child_states.len();
    let child = |pos: usize| &child_states[pos];
    let Scratch {
        star,
        star_step,
        leaf_slots,
        top_iso,
        top_leaf1,
        top_mid2,
    } = scratch;

    // Everything below works with increments over rho(v, Isolated): the
    // isolated state contributes 0, each candidate state contributes
    // `inc(H) = rho(v, H) - rho(v, Isolated)`, and the final excesses are
    // `inc(H) - max_inc`. The per-child cost of freezing w as a singleton is
    // its stored delta.
    let cap = 1 + (0..c)
        .map(|p| child(p).inner.as_ref().map_or(0, |i| i.star_mid().len()))
        .max()
        .unwrap();
    let mut indices = Vec::with_capacity(c + cap);
    indices.extend(0..c as u32);
    indices.sort_unstable_by(|&a, &b| {
        child(a as usize)
            .delta
            .cmp(&child(b as usize).delta)
            .then(a.cmp(&b))
    });

    // inc(StarMid(f)) = phi(K_{1,f}) - sum of the f smallest deltas.
    let mut excs: Vec<Rational> = Vec::with_capacity(c + cap);
    let mut freeze_cost = Rational::ZERO;
    for (rank, &pos) in indices.iter().enumerate() {
        freeze_cost += &child(pos as usize).delta;
        excs.push(&star[rank + 1] - &freeze_cost);
    }

    // One pass over the children collects everything the upper states need:
    // the best excess(w, StarMid(f-1)) per star-leaf size f (StarMid(0)
    // meaning the child stays isolated), and the top-k candidate lists for
    // the P4 / T35 states.
    leaf_slots.clear();
    leaf_slots.resize(cap, None);
    top_iso.clear();
    top_leaf1.clear();
    top_mid2.clear();
    let mut best_leaf2: Option<(Rational, u32)> = None;
    let mut best_leaf3: Option<(Rational, u32)> = None;
    let mut best_p4mid: Option<(Rational, u32)> = None;
    for pos in 0..c {
        let s = child(pos);
        let update = |slot: &mut Option<(Rational, u32)>, e: &Rational| {
            if slot.as_ref().is_none_or(|(v, _)| e > v) {
                *slot = Some((e.clone(), pos as u32));
            }
        };
        update(&mut leaf_slots[0], &-&s.delta);
        top_iso.push(-&s.delta, pos as u32);
        let Some(ci) = s.inner.as_ref() else {
            continue;
        };
        for (fm1, exc_mid) in ci.star_mid().iter().enumerate() {
            update(&mut leaf_slots[fm1 + 1], exc_mid);
        }
        let leaves = ci.star_leaf();
        if let Some(e) = leaves.first() {
            top_leaf1.push(e.clone(), pos as u32);
        }
        if let Some(e) = leaves.get(1) {
            update(&mut best_leaf2, e);
        }
        if let Some(e) = leaves.get(2) {
            update(&mut best_leaf3, e);
        }
        if let Some(exc) = ci.star_mid().get(1) {
            top_mid2.push(exc.clone(), pos as u32);
        }
        if let Some(e) = ci.p4_mid.as_ref() {
            update(&mut best_p4mid, &e.exc);
        }
    }

    // inc(StarLeaf(f)) = phi(K_{1,f}) - phi(K_{1,f-1}) + best slot excess.
    for (idx, slot) in leaf_slots.iter_mut().enumerate() {
        let (e, pos) = slot
            .take()
            .expect("slot f is fed by every child with f-1 star leaves");
        excs.push(&star_step[idx] + e);
        indices.push(pos);
    }

    let single_state = |offset: Rational, found: &Option<(Rational, u32)>| {
        found.as_ref().map(|(e, pos)| Entry {
            exc: offset + e,
            pick: Pick::One(*pos),
        })
    };
    let shift = |entry: Option<Entry>, offset: Rational| {
        entry.map(|e| Entry {
            exc: offset + e.exc,
            pick: e.pick,
        })
    };
    let p4_leaf_inc = single_state(&phi.p4 - &phi.p3, &best_leaf2);
    let t35_s1_inc = single_state(&phi.t35 - &phi.k13, &best_leaf3);
    let t35_t_inc = single_state(&phi.t35 - &phi.p4, &best_p4mid);
    let p4_mid_inc = shift(
        best_pair(&top_leaf1.items, &top_iso.items),
        &phi.p4 - &phi.p2,
    );
    let t35_u1_inc = shift(
        best_pair(&top_mid2.items, &top_iso.items),
        &phi.t35 - &phi.p3,
    );
    let t35_u2_inc = shift(
        best_triple(&top_leaf1.items, &top_iso.items),
        &phi.t35 - &phi.p2,
    );

    // delta = max(0, incs): fold in a fixed order with strict improvement,
    // so ties resolve to Isolated first, then the earliest state / lowest f.
    let mut delta = Rational::ZERO;
    let mut best_state = CoalitionState::Isolated;
    {
        let mut consider = |inc: &Rational, state: CoalitionState| {
            if *inc > delta {
                delta = inc.clone();
                best_state = state;
            }
        };
        for (i, inc) in excs[..c].iter().enumerate() {
            consider(inc, CoalitionState::StarMid(i as u32 + 1));
        }
        for (i, inc) in excs[c..].iter().enumerate() {
            consider(inc, CoalitionState::StarLeaf(i as u32 + 1));
        }
        let fixed = [
            (&p4_leaf_inc, CoalitionState::P4Leaf),
            (&p4_mid_inc, CoalitionState::P4Mid),
            (&t35_s1_inc, CoalitionState::T35S1),
            (&t35_t_inc, CoalitionState::T35T),
            (&t35_u1_inc, CoalitionState::T35U1),
            (&t35_u2_inc, CoalitionState::T35U2),
        ];
        for (entry, state) in fixed {
            if let Some(e) = entry {
                consider(&e.exc, state);
            }
        }
    }

    // Store excesses relative to rho(v) = rho(v, Isolated) + delta.
    if !delta.is_zero() {
        for exc in &mut excs {
            *exc -= &delta;
        }
    }
    let demote = |e: Entry| Entry {
        exc: e.exc - &delta,
        pick: e.pick,
    };
    let inner = InnerStates {
        child_count: c as u32,
        excs,
        indices,
        p4_leaf: p4_leaf_inc.map(demote),
        p4_mid: p4_mid_inc.map(demote),
        t35_s1: t35_s1_inc.map(demote),
        t35_t: t35_t_inc.map(demote),
        t35_u1: t35_u1_inc.map(demote),
        t35_u2: t35_u2_inc.map(demote),
    };

    // rho(v) = sum of child optima + delta; the only size-n-bearing values.
    let mut rho = delta.clone();
    for pos in 0..c {
        rho += &child(pos).rho;
    }

    VertexStates {
        rho,
        delta,
        best_state,
        inner: Some(Box::new(inner)),
    }
}

/// Optimal partition of a tree, rooted at its stored root (default 0).
pub fn solve_tree(tree: &Tree) -> (Partition, Rational) {
    let root = tree.root().unwrap_or(0);
    solve_tree_rooted(tree, root).expect("stored root is in range")
}

/// Optimal partition of a tree, rooted at `root`.
pub fn solve_tree_rooted(tree: &Tree, root: u32) -> Result<(Partition, Rational)> {
    let table = compute_states(tree, root)?;
    let partition = reconstruct(&table);
    debug_assert!(partition.validate(tree.n()).is_ok());
    let value = table.rho_best(root).clone();
    Ok((partition, value))
}

fn reconstruct(table: &StateTable) -> Partition {
    let root = table.root();
    let mut blocks: Vec<Vec<u32>> = vec![Vec::new()];
    let mut stack = vec![(root, table.best_state(root), 0usize)];
    let mut merged: Vec<Option<CoalitionState>> = Vec::new();
    while let Some((v, state, block)) = stack.pop() {
        blocks[block].push(v);
        let kids = table.children(v);
        merged.clear();
        merged.resize(kids.len(), None);
        if state != CoalitionState::Isolated {
            let inner = table
                .at(v)
                .inner
                .as_deref()
                .expect("non-isolated states require children");
            match state {
                CoalitionState::Isolated => unreachable!(),
                CoalitionState::StarMid(f) => {
                    for &pos in &inner.by_delta()[..f as usize] {
                        merged[pos as usize] = Some(CoalitionState::Isolated);
                    }
                }
                CoalitionState::StarLeaf(f) => {
                    let pos = inner.leaf_pick(f);
                    let child_state = if f == 1 {
                        CoalitionState::Isolated
                    } else {
                        CoalitionState::StarMid(f - 1)
                    };
                    merged[pos as usize] = Some(child_state);
                }
                CoalitionState::P4Leaf => {
                    let Pick::One(pos) = inner.p4_leaf.as_ref().unwrap().pick else {
                        unreachable!()
                    };
                    merged[pos as usize] = Some(CoalitionState::StarLeaf(2));
                }
                CoalitionState::P4Mid => {
                    let Pick::Two(a, b) = inner.p4_mid.as_ref().unwrap().pick else {
                        unreachable!()
                    };
                    merged[a as usize] = Some(CoalitionState::StarLeaf(1));
                    merged[b as usize] = Some(CoalitionState::Isolated);
                }
                CoalitionState::T35S1 => {
                    let Pick::One(pos) = inner.t35_s1.as_ref().unwrap().pick else {
                        unreachable!()
                    };
                    merged[pos as usize] = Some(CoalitionState::StarLeaf(3));
                }
                CoalitionState::T35T => {
                    let Pick::One(pos) = inner.t35_t.as_ref().unwrap().pick else {
                        unreachable!()
                    };
                    merged[pos as usize] = Some(CoalitionState::P4Mid);
                }
                CoalitionState::T35U1 => {
                    let Pick::Two(a, b) = inner.t35_u1.as_ref().unwrap().pick else {
                        unreachable!()
                    };
                    merged[a as usize] = Some(CoalitionState::StarMid(2));
                    merged[b as usize] = Some(CoalitionState::Isolated);
                }
                CoalitionState::T35U2 => {
                    let Pick::Three(a, b, c) = inner.t35_u2.as_ref().unwrap().pick else {
                        unreachable!()
                    };
                    merged[a as usize] = Some(CoalitionState::StarLeaf(1));
                    merged[b as usize] = Some(CoalitionState::Isolated);
                    merged[c as usize] = Some(CoalitionState::Isolated);
                }
            }
        }
        for (pos, &w) in kids.iter().enumerate() {
            match merged[pos] {
                Some(child_state) => stack.push((w, child_state, block)),
                None => {
                    blocks.push(Vec::new());
                    stack.push((w, table.best_state(w), blocks.len() - 1));
                }
            }
        }
    }
    Partition::new(blocks.into_iter().map(CoalitionSet::new).collect())
}
