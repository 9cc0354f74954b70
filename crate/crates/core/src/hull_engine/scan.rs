use std::cmp::Ordering;
use std::collections::VecDeque;

use super::{cmp_slope_from, slope_from, HullCounters, HullEngine, HullError, HullPoint, TangentAnswer};

/// Reference engine: stores the raw points and scans them on every query.
#[derive(Debug, Clone, Default)]
pub struct ScanHull {
    points: VecDeque<HullPoint>,
    counters: HullCounters,
}

impl ScanHull {
    pub fn new() -> Self {
        Self::default()
    }

    fn bounds(&self) -> Option<(i64, i64)> {
        Some((self.points.front()?.x, self.points.back()?.x))
    }
}

pub(super) fn check_left(bounds: Option<(i64, i64)>, p: HullPoint) -> Result<(), HullError> {
    match bounds {
        None if p.x >= 1 => Ok(()),
        Some((min, _)) if p.x == min - 1 => Ok(()),
        _ => {
            let (min, max) = bounds.unwrap_or((0, 0));
            Err(HullError::NotExtreme { x: p.x, min, max })
        }
    }
}

pub(super) fn check_right(bounds: Option<(i64, i64)>, p: HullPoint) -> Result<(), HullError> {
    match bounds {
        None if p.x >= 1 => Ok(()),
        Some((_, max)) if p.x == max + 1 => Ok(()),
        _ => {
            let (min, max) = bounds.unwrap_or((0, 0));
            Err(HullError::NotExtreme { x: p.x, min, max })
        }
    }
}

impl HullEngine for ScanHull {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn insert_left(&mut self, p: HullPoint) -> Result<(), HullError> {
        check_left(self.bounds(), p)?;
        self.counters.inserts += 1;
        self.points.push_front(p);
        Ok(())
    }

    fn insert_right(&mut self, p: HullPoint) -> Result<(), HullError> {
        check_right(self.bounds(), p)?;
        self.counters.inserts += 1;
        self.points.push_back(p);
        Ok(())
    }

    fn delete_left(&mut self) -> Result<HullPoint, HullError> {
        let p = self.points.pop_front().ok_or(HullError::Underflow)?;
        self.counters.deletes += 1;
        Ok(p)
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
        let vertex = self.points.iter().copied().fold(first, |best, p| {
            if cmp_slope_from(q, p, best) != Ordering::Less {
                p
            } else {
                best
            }
        });
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
