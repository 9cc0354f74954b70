//! Upper-hull point containers for the active interval.
//!
//! Points live on a contiguous run of x-coordinates that only grows or
//! shrinks at its ends. The contract is [`HullEngine`]; [`ScanHull`] answers
//! every query by brute force and [`TwoStackHull`] is the production engine.

mod scan;
mod two_stack;

pub use scan::ScanHull;
pub use two_stack::TwoStackHull;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// One stored point `(k, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HullPoint {
    pub x: i64,
    pub y: i64,
}

impl HullPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        HullPoint { x, y }
    }
}

impl From<(i64, i64)> for HullPoint {
    fn from((x, y): (i64, i64)) -> Self {
        HullPoint { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TangentAnswer {
    pub vertex: HullPoint,
    pub slope: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HullError {
    #[error("hull engine is empty")]
    Underflow,
    #[error("point x={x} is not adjacent to the stored run {min}..={max}")]
    NotExtreme { x: i64, min: i64, max: i64 },
    #[error("query x={query_x} must lie left of every stored point (min x={min})")]
    QueryNotLeft { query_x: i64, min: i64 },
}

/// Operation counters reported by the benches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct HullCounters {
    pub inserts: u64,
    pub deletes: u64,
    /// Vertices popped off a chain by an insertion.
    pub pops: u64,
    /// Vertices pushed back when an insertion is undone.
    pub restores: u64,
    /// Points moved from the right chain into the left chain.
    pub transfers: u64,
}

/// Extreme-end point container with maximum-slope queries.
pub trait HullEngine {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Inserts at `min x - 1` (any x >= 1 when empty).
    fn insert_left(&mut self, p: HullPoint) -> Result<(), HullError>;

    /// Inserts at `max x + 1` (any x >= 1 when empty).
    fn insert_right(&mut self, p: HullPoint) -> Result<(), HullError>;

    fn delete_left(&mut self) -> Result<HullPoint, HullError>;

    fn peek_left(&self) -> Result<HullPoint, HullError>;

    fn peek_right(&self) -> Result<HullPoint, HullError>;

    /// Stored point of maximum slope seen from `q`; the largest x among ties.
    fn tangent_max_slope(&self, q: HullPoint) -> Result<TangentAnswer, HullError>;

    /// Every stored point in increasing x.
    fn points(&self) -> Vec<HullPoint>;

    fn counters(&self) -> HullCounters;
}

/// Cross product of `(a - o)` and `(b - o)`.
pub(crate) fn cross(o: HullPoint, a: HullPoint, b: HullPoint) -> i128 {
    let (ax, ay) = ((a.x - o.x) as i128, (a.y - o.y) as i128);
    let (bx, by) = ((b.x - o.x) as i128, (b.y - o.y) as i128);
    ax * by - ay * bx
}

/// Compares the slopes of `q -> a` and `q -> b`; both must lie right of `q`.
pub(crate) fn cmp_slope_from(q: HullPoint, a: HullPoint, b: HullPoint) -> Ordering {
    debug_assert!(a.x > q.x && b.x > q.x);
    let lhs = (a.y - q.y) as i128 * (b.x - q.x) as i128;
    let rhs = (b.y - q.y) as i128 * (a.x - q.x) as i128;
    lhs.cmp(&rhs)
}

pub(crate) fn slope_from(q: HullPoint, p: HullPoint) -> Rational {
    Rational::new(p.y - q.y, p.x - q.x)
}

/// Index of the largest-x maximum-slope vertex on an upper hull given in
/// increasing x, seen from a point left of the chain.
///
/// Along such a chain the slope from `q` rises strictly, may repeat once at
/// the tangent edge, then falls strictly; this finds the first strict fall.
pub(crate) fn tangent_index(len: usize, q: HullPoint, mut at: impl FnMut(usize) -> HullPoint) -> usize {
    debug_assert!(len > 0);
    let (mut lo, mut hi) = (0usize, len - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if cmp_slope_from(q, at(mid), at(mid + 1)) == Ordering::Greater {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Strict upper hull (collinear interior points dropped) of points sorted by
/// strictly increasing x.
pub fn upper_hull(points: &[HullPoint]) -> Vec<HullPoint> {
    let mut hull: Vec<HullPoint> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}
