//! Hull tree over all points `(k, c[k])`, `k = 1..=R`, with polylogarithmic
//! structural work per update.
//!
//! A complete binary tree spans positions `1..=capacity`. Every node owns the
//! part of its interval's upper hull that its parent does not use, stored as
//! a concatenable chain of x-coordinates, plus the split index that tells how
//! many leading vertices of its own hull come from its left child. The root's
//! chain is therefore the full hull. The y-coordinates are never stored in
//! the chains; they are read from a separate [`LazyCountTree`].
//!
//! A suffix increment shifts every point in `[alpha..R]` up by one. Only the
//! nodes whose interval straddles `alpha - 1 | alpha` can change their hull,
//! and those are exactly the common ancestors of the two leaves, i.e. the
//! path from the root down to their lowest common ancestor. Appending a
//! position rebuilds the path to the new leaf. Both rebuilds open the path
//! top-down (split each hull back into its children) and close it bottom-up
//! (recompute bridges).
//!
//! Growth doubles the capacity and rebuilds everything; those events are
//! counted separately and excluded from the per-call locality counters.

mod chain;
mod count_tree;

pub use count_tree::LazyCountTree;

use chain::{Chain, ChainArena, NIL};

use crate::hull_engine::{cross, slope_from, tangent_index, HullPoint};
use crate::rational::Rational;

/// Largest supported position: chain keys are `u32`.
pub const MAX_POSITIONS: usize = u32::MAX as usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("position capacity {0} exhausted")]
    Capacity(usize),
    #[error("alpha={alpha} outside 1..={r}")]
    AlphaOutOfRange { alpha: usize, r: usize },
    #[error("position {k} outside 1..={r}")]
    PositionOutOfRange { k: usize, r: usize },
}

/// Structural work counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct WorstCaseCounters {
    pub suffix_increments: u64,
    pub appends: u64,
    pub rebuilds: u64,
    /// Hull-tree nodes whose chains the last update rewrote.
    pub nodes_touched_last: usize,
    pub max_nodes_touched: usize,
    /// Chain tree nodes visited by split/join during the last update.
    pub chain_steps_last: u64,
    pub max_chain_steps: u64,
}

#[derive(Debug, Clone)]
pub struct WorstCaseEngine {
    r: usize,
    capacity: usize,
    max_positions: usize,
    counts: LazyCountTree,
    arena: ChainArena,
    chain: Vec<Chain>,
    take: Vec<u32>,
    touched: Vec<usize>,
    counters: WorstCaseCounters,
}

impl Default for WorstCaseEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl WorstCaseEngine {
    /// The state after one symbol: `c = [1]`.
    pub fn new() -> Self {
        Self::from_counts(&[1]).expect("one position")
    }

    pub fn with_max_positions(max_positions: usize) -> Self {
        let mut e = Self::new();
        e.max_positions = max_positions.clamp(1, MAX_POSITIONS);
        e
    }

    /// Builds the structure over an explicit count prefix `c[1..=R]`.
    pub fn from_counts(values: &[i64]) -> Result<Self, EngineError> {
        if values.is_empty() || values.len() > MAX_POSITIONS {
            return Err(EngineError::Capacity(MAX_POSITIONS));
        }
        let mut e = WorstCaseEngine {
            r: 0,
            capacity: 1,
            max_positions: MAX_POSITIONS,
            counts: LazyCountTree::new(1),
            arena: ChainArena::new(),
            chain: Vec::new(),
            take: Vec::new(),
            touched: Vec::new(),
            counters: WorstCaseCounters::default(),
        };
        e.rebuild(values.len().next_power_of_two(), values);
        Ok(e)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn counters(&self) -> WorstCaseCounters {
        self.counters
    }

    pub fn value_at(&self, k: usize) -> Result<i64, EngineError> {
        if k == 0 || k > self.r {
            return Err(EngineError::PositionOutOfRange { k, r: self.r });
        }
        Ok(self.counts.value_at(k))
    }

    pub fn values(&self) -> Vec<i64> {
        (1..=self.r).map(|k| self.counts.value_at(k)).collect()
    }

    fn point(&self, c: Chain, idx: usize) -> HullPoint {
        let x = self.arena.get(c, idx) as usize;
        HullPoint::new(x as i64, self.counts.value_at(x))
    }

    fn leaf(&self, k: usize) -> usize {
        self.capacity + k - 1
    }

    fn rebuild(&mut self, capacity: usize, values: &[i64]) {
        self.capacity = capacity;
        self.r = values.len();
        self.counts = LazyCountTree::from_values(capacity, values);
        self.arena = ChainArena::new();
        self.chain = vec![NIL; 2 * capacity];
        self.take = vec![0; 2 * capacity];
        for k in 1..=self.r {
            let leaf = self.leaf(k);
            self.chain[leaf] = self.arena.singleton(k as u32);
        }
        for v in (1..capacity).rev() {
            self.close(v);
        }
        self.counters.rebuilds += 1;
    }

    /// Upper bridge between the full hulls of two children, as indices
    /// `(last vertex kept from the left, first vertex kept from the right)`.
    ///
    /// Simultaneous binary search on both chains. Among collinear choices the
    /// leftmost left vertex and the rightmost right vertex are returned, so
    /// the merged chain stays strictly convex.
    fn bridge(&self, lc: Chain, rc: Chain) -> (usize, usize) {
        let (a, b) = (self.arena.len(lc), self.arena.len(rc));
        let sep2 = self.point(lc, a - 1).x + self.point(rc, 0).x;
        let (mut la, mut lb, mut ra, mut rb) = (0usize, a - 1, 0usize, b - 1);
        loop {
            debug_assert!(la <= lb && ra <= rb, "bridge search lost its range");
            let i = la + (lb - la) / 2;
            let j = ra + (rb - ra) / 2;
            let (li, rj) = (self.point(lc, i), self.point(rc, j));
            let above = |p: HullPoint| cross(li, rj, p) > 0;
            let l_next = (i + 1 < a).then(|| self.point(lc, i + 1));
            let l_prev = (i > 0).then(|| self.point(lc, i - 1));
            let r_prev = (j > 0).then(|| self.point(rc, j - 1));
            let r_next = (j + 1 < b).then(|| self.point(rc, j + 1));
            let l_wants_right = l_next.is_some_and(above);
            let l_wants_left = l_prev.is_some_and(above);
            let r_wants_left = r_prev.is_some_and(above);
            let r_wants_right = r_next.is_some_and(above);
            let l_supported = !l_wants_right && !l_wants_left;
            let r_supported = !r_wants_left && !r_wants_right;

            if l_supported && r_supported {
                let on_line = |p: Option<HullPoint>| p.is_some_and(|p| cross(li, rj, p) == 0);
                let left = if on_line(l_prev) { i - 1 } else { i };
                let right = if on_line(r_next) { j + 1 } else { j };
                return (left, right);
            }
            if l_wants_left {
                lb = i - 1;
            }
            if r_wants_right {
                ra = j + 1;
            }
            if l_supported {
                lb = i;
                if r_wants_left {
                    rb = j - 1;
                }
            }
            if r_supported {
                ra = j;
                if l_wants_right {
                    la = i + 1;
                }
            }
            if l_wants_right && r_wants_left {
                // Both candidates must move inward: decide by where the two
                // edge lines cross relative to the vertical separator.
                let (p1, p2) = (li, l_next.expect("checked"));
                let (p3, p4) = (r_prev.expect("checked"), rj);
                let (dxl, dyl) = ((p2.x - p1.x) as i128, (p2.y - p1.y) as i128);
                let (dxr, dyr) = ((p4.x - p3.x) as i128, (p4.y - p3.y) as i128);
                let s = sep2 as i128;
                let left_line = (2 * p1.y as i128 * dxl + dyl * (s - 2 * p1.x as i128)) * dxr;
                let right_line = (2 * p3.y as i128 * dxr + dyr * (s - 2 * p3.x as i128)) * dxl;
                if left_line >= right_line {
                    la = i + 1;
                } else {
                    rb = j - 1;
                }
            }
        }
    }

    fn touch(&mut self, v: usize) {
        self.touched.extend_from_slice(&[v, 2 * v, 2 * v + 1]);
    }

    /// Hands a node's full hull back to its children.
    fn open(&mut self, v: usize) {
        self.touch(v);
        let (a, b) = self.arena.split_at(self.chain[v], self.take[v] as usize);
        self.chain[2 * v] = self.arena.concat(a, self.chain[2 * v]);
        self.chain[2 * v + 1] = self.arena.concat(self.chain[2 * v + 1], b);
        self.chain[v] = NIL;
    }

    /// Merges two full child hulls into the node, leaving the unused
    /// fragments behind in the children.
    fn close(&mut self, v: usize) {
        let (lc, rc) = (self.chain[2 * v], self.chain[2 * v + 1]);
        if rc == NIL {
            self.take[v] = self.arena.len(lc) as u32;
            self.chain[v] = lc;
            self.chain[2 * v] = NIL;
            return;
        }
        if lc == NIL {
            self.take[v] = 0;
            self.chain[v] = rc;
            self.chain[2 * v + 1] = NIL;
            return;
        }
        let (i, j) = self.bridge(lc, rc);
        let (a, left_rest) = self.arena.split_at(lc, i + 1);
        let (right_rest, b) = self.arena.split_at(rc, j);
        self.chain[2 * v] = left_rest;
        self.chain[2 * v + 1] = right_rest;
        self.chain[v] = self.arena.concat(a, b);
        self.take[v] = (i + 1) as u32;
    }

    /// Opens every node from the root down to `target`, lets `at_target`
    /// adjust the target, then closes the path back up.
    fn rebuild_path(&mut self, target: usize, at_target: impl FnOnce(&mut Self)) {
        self.touched.clear();
        self.arena.steps = 0;
        let depth = usize::BITS - 1 - target.leading_zeros();
        for d in 0..=depth {
            let v = target >> (depth - d);
            if v < self.capacity {
                self.open(v);
            }
        }
        at_target(self);
        let mut v = if target < self.capacity { target } else { target >> 1 };
        while v >= 1 {
            self.touch(v);
            self.close(v);
            v >>= 1;
        }
        self.touched.sort_unstable();
        self.touched.dedup();
        self.record(self.touched.len());
    }

    fn record(&mut self, touched: usize) {
        let c = &mut self.counters;
        c.nodes_touched_last = touched;
        c.max_nodes_touched = c.max_nodes_touched.max(touched);
        c.chain_steps_last = self.arena.steps;
        c.max_chain_steps = c.max_chain_steps.max(self.arena.steps);
    }

    /// Adds one to every count in `[alpha..=R]`.
    pub fn suffix_increment(&mut self, alpha: usize) -> Result<(), EngineError> {
        if alpha == 0 || alpha > self.r {
            return Err(EngineError::AlphaOutOfRange { alpha, r: self.r });
        }
        self.counters.suffix_increments += 1;
        self.counts.range_add(alpha, self.r, 1);
        if alpha == 1 {
            // uniform shift of every point: no hull changes
            self.arena.steps = 0;
            self.record(0);
            return Ok(());
        }
        let (mut a, mut b) = (self.leaf(alpha - 1), self.leaf(alpha));
        while a != b {
            a >>= 1;
            b >>= 1;
        }
        self.rebuild_path(a, |_| {});
        Ok(())
    }

    /// Extends the array by one position holding a copy of the last count.
    pub fn append_position(&mut self) -> Result<usize, EngineError> {
        if self.r >= self.max_positions {
            return Err(EngineError::Capacity(self.max_positions));
        }
        let last = self.counts.value_at(self.r);
        if self.r == self.capacity {
            let values = self.values();
            self.rebuild(self.capacity * 2, &values);
        }
        self.r += 1;
        let k = self.r;
        self.counts.set(k, last);
        self.counters.appends += 1;
        let leaf = self.leaf(k);
        self.rebuild_path(leaf, |e| {
            debug_assert_eq!(e.chain[leaf], NIL);
            e.chain[leaf] = e.arena.singleton(k as u32);
        });
        Ok(self.r)
    }

    /// Position of maximum `c[k] / k` (largest k among hull-vertex ties),
    /// its count and the exact ratio.
    pub fn leader(&self) -> (usize, i64, Rational) {
        let root = self.chain[1];
        let origin = HullPoint::new(0, 0);
        let idx = tangent_index(self.arena.len(root), origin, |i| self.point(root, i));
        let p = self.point(root, idx);
        (p.x as usize, p.y, slope_from(origin, p))
    }

    /// x-coordinates of the full upper hull of `[1..=R]`.
    pub fn hull_vertices(&self) -> Vec<usize> {
        self.arena.to_vec(self.chain[1]).into_iter().map(|x| x as usize).collect()
    }

    /// Total number of x-coordinates held across all node chains.
    pub fn stored_elements(&self) -> usize {
        self.arena.live()
    }

    /// Full hull of heap node `v`, reconstructed by descending splits.
    pub fn node_hull(&self, v: usize) -> Vec<usize> {
        let own: Vec<usize> = self.arena.to_vec(self.chain[v]).into_iter().map(|x| x as usize).collect();
        if v == 1 {
            return own;
        }
        let parent = self.node_hull(v / 2);
        let cut = self.take[v / 2] as usize;
        if v.is_multiple_of(2) {
            [&parent[..cut], &own[..]].concat()
        } else {
            [&own[..], &parent[cut..]].concat()
        }
    }

    /// Active positions covered by heap node `v`.
    pub fn node_interval(&self, v: usize) -> Option<(usize, usize)> {
        let level = usize::BITS - 1 - v.leading_zeros();
        let span = self.capacity >> level;
        let lo = (v - (1 << level)) * span + 1;
        let hi = (lo + span - 1).min(self.r);
        (lo <= hi).then_some((lo, hi))
    }

    pub fn node_count(&self) -> usize {
        2 * self.capacity - 1
    }
}
