use std::cmp::Ordering;
use std::collections::VecDeque;

use super::scan::{check_left, check_right};
use super::{cmp_slope_from, cross, slope_from, tangent_index, HullCounters, HullEngine, HullError, HullPoint, TangentAnswer};

/// Production engine: the stored run is split into a left part and a right
/// part, each carrying its own strictly convex upper hull.
///
/// The right hull only ever grows at its right end, so popped vertices are
/// gone for good. The left hull grows and shrinks at its left end in stack
/// order; every insertion records the vertices it popped so the matching
/// deletion can put them back. When a deletion finds the left part empty the
/// whole right part is rebuilt as a left part, one point at a time.
///
/// The maximum slope over the union is the larger of the two per-part
/// answers, so the parts never need to be merged.
#[derive(Debug, Clone, Default)]
pub struct TwoStackHull {
    points: VecDeque<HullPoint>,
    /// Number of leading points that belong to the left part.
    left_count: usize,
    /// Left hull, leftmost vertex last.
    left: Vec<HullPoint>,
    /// Vertices popped by each left insertion, in pop order.
    undo: Vec<HullPoint>,
    /// Number of popped vertices per left insertion.
    frames: Vec<u32>,
    /// Right hull, rightmost vertex last.
    right: Vec<HullPoint>,
    counters: HullCounters,
}

impl TwoStackHull {
    pub fn new() -> Self {
        Self::default()
    }

    fn bounds(&self) -> Option<(i64, i64)> {
        Some((self.points.front()?.x, self.points.back()?.x))
    }

    fn push_left_hull(&mut self, p: HullPoint) {
        let mut popped = 0u32;
        while self.left.len() >= 2 {
            let top = self.left[self.left.len() - 1];
            let next = self.left[self.left.len() - 2];
            if cross(p, top, next) >= 0 {
                self.left.pop();
                self.undo.push(top);
                popped += 1;
            } else {
                break;
            }
        }
        self.counters.pops += popped as u64;
        self.frames.push(popped);
        self.left.push(p);
    }

    fn pop_left_hull(&mut self) -> HullPoint {
        let p = self.left.pop().expect("left hull out of sync");
        let popped = self.frames.pop().expect("undo frame missing") as usize;
        for _ in 0..popped {
            let v = self.undo.pop().expect("undo log out of sync");
            self.left.push(v);
        }
        self.counters.restores += popped as u64;
        p
    }

    fn transfer(&mut self) {
        self.right.clear();
        for idx in (0..self.points.len()).rev() {
            let p = self.points[idx];
            self.push_left_hull(p);
        }
        self.counters.transfers += self.points.len() as u64;
        self.left_count = self.points.len();
    }

    /// Vertices of the left and right hulls, each in increasing x.
    pub fn hull_chains(&self) -> (Vec<HullPoint>, Vec<HullPoint>) {
        (self.left.iter().rev().copied().collect(), self.right.clone())
    }
}

impl HullEngine for TwoStackHull {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn insert_left(&mut self, p: HullPoint) -> Result<(), HullError> {
        check_left(self.bounds(), p)?;
        self.counters.inserts += 1;
        self.points.push_front(p);
        self.left_count += 1;
        self.push_left_hull(p);
        Ok(())
    }

    fn insert_right(&mut self, p: HullPoint) -> Result<(), HullError> {
        check_right(self.bounds(), p)?;
        self.counters.inserts += 1;
        self.points.push_back(p);
        while self.right.len() >= 2
            && cross(self.right[self.right.len() - 2], self.right[self.right.len() - 1], p) >= 0
        {
            self.right.pop();
            self.counters.pops += 1;
        }
        self.right.push(p);
        Ok(())
    }

    fn delete_left(&mut self) -> Result<HullPoint, HullError> {
        if self.points.is_empty() {
            return Err(HullError::Underflow);
        }
        if self.left_count == 0 {
            self.transfer();
        }
        let p = self.pop_left_hull();
        let front = self.points.pop_front().expect("nonempty");
        debug_assert_eq!(p, front);
        self.left_count -= 1;
        self.counters.deletes += 1;
        Ok(front)
    }

    fn peek_left(&self) -> Result<HullPoint, HullError> {
        self.points.front().copied().ok_or(HullError::Underflow)
    }

    fn peek_right(&self) -> Result<HullPoint, HullError> {
        self.points.back().copied().ok_or(HullError::Underflow)
    }

    fn tangent_max_slope(&self, q: HullPoint) -> Result<TangentAnswer, HullError> {
        let first = self.peek_left()?;
        if q.x >= first.x {
            return Err(HullError::QueryNotLeft {
                query_x: q.x,
                min: first.x,
            });
        }
        let left_best = (!self.left.is_empty()).then(|| {
            let n = self.left.len();
            self.left[n - 1 - tangent_index(n, q, |i| self.left[n - 1 - i])]
        });
        let right_best = (!self.right.is_empty()).then(|| self.right[tangent_index(self.right.len(), q, |i| self.right[i])]);
        let vertex = match (left_best, right_best) {
            (Some(l), Some(r)) => {
                if cmp_slope_from(q, l, r) == Ordering::Greater {
                    l
                } else {
                    r
                }
            }
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => unreachable!("nonempty engine without hull vertices"),
        };
        Ok(TangentAnswer {
            vertex,
            slope: slope_from(q, vertex),
        })
    }

    fn points(&self) -> Vec<HullPoint> {
        self.points.iter().copied().collect()
    }

    fn counters(&self) -> HullCounters {
        self.counters
    }
}
