//! One δ stream: feeds every byte through the alpha tracker and keeps the
//! count-array geometry current with one of three engines.
//!
//! The amortized engine keeps only the active interval `[alpha..R]` as points
//! in a [`TwoStackHull`], all shifted down by a common offset, and freezes
//! everything left of it together with running ratio maxima. The worst-case
//! engine keeps every position in a [`WorstCaseEngine`]. The oracle engine
//! keeps a plain count array and rescans it after each byte.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alpha_tracker::{SuffixTreeState, TrackerCounters, TrackerError, DEFAULT_CAPACITY};
use crate::count_oracle;
use crate::hull_engine::{upper_hull, HullCounters, HullEngine, HullError, HullPoint, TwoStackHull};
use crate::rational::Rational;
use crate::worstcase_engine::{EngineError, WorstCaseCounters, WorstCaseEngine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Amortized,
    Worstcase,
    Oracle,
}

impl EngineKind {
    pub const ALL: [EngineKind; 3] = [EngineKind::Amortized, EngineKind::Worstcase, EngineKind::Oracle];

    pub fn name(&self) -> &'static str {
        match self {
            EngineKind::Amortized => "amortized",
            EngineKind::Worstcase => "worstcase",
            EngineKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EngineKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown engine {s:?}"))
    }
}

/// How the count array changed at one position.
///
/// `Extend` covers both the very first byte and every step that appends a
/// new rightmost position; among the others, `Increment` means alpha grew by
/// one and `Pullback` means it did not grow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Increment,
    Pullback,
    Extend,
}

impl StepKind {
    pub fn name(&self) -> &'static str {
        match self {
            StepKind::Increment => "increment",
            StepKind::Pullback => "pullback",
            StepKind::Extend => "extend",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StepKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [StepKind::Increment, StepKind::Pullback, StepKind::Extend]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown step kind {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaReport {
    pub position: usize,
    pub delta: Rational,
    pub delta_float: f64,
    /// A length attaining `delta`.
    pub maximizing_length: usize,
    pub alpha: usize,
    pub step_kind: StepKind,
}

/// Count-array picture of a prefix. Serializes with the field order below.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullSnapshot {
    pub n: usize,
    #[serde(rename = "R")]
    pub r: usize,
    pub delta: Rational,
    pub tangency_k: usize,
    /// `[k, c[k]]` for `k = 1..=R`.
    pub points: Vec<[u64; 2]>,
    /// x-coordinates of the upper hull vertices.
    pub hull: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PullbackStats {
    pub positions: usize,
    pub pullbacks: u64,
    /// Sum of `alpha_{i-1} - alpha_i` over pullback steps.
    pub total_distance: u64,
    /// Sum of `alpha_i` over pullback steps.
    pub alpha_sum: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StreamCounters {
    pub tracker: TrackerCounters,
    pub hull: Option<HullCounters>,
    pub tree: Option<WorstCaseCounters>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StreamError {
    #[error("stream capacity of {0} symbols reached")]
    Capacity(usize),
    /// A consistency check failed; the reported value would be wrong.
    #[error("internal fault: {0}")]
    Internal(String),
}

impl From<TrackerError> for StreamError {
    fn from(e: TrackerError) -> Self {
        match e {
            TrackerError::StreamTooLong { capacity } => StreamError::Capacity(capacity),
        }
    }
}

impl From<HullError> for StreamError {
    fn from(e: HullError) -> Self {
        StreamError::Internal(e.to_string())
    }
}

impl From<EngineError> for StreamError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Capacity(c) => StreamError::Capacity(c),
            other => StreamError::Internal(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Amortized {
    hull: TwoStackHull,
    shift: i64,
    frozen: Vec<u64>,
    val: Vec<Rational>,
    /// Running maximum of `val` and the largest index attaining it.
    maxval: Vec<(Rational, usize)>,
}

impl Amortized {
    fn freeze_leftmost(&mut self) -> Result<(), StreamError> {
        let p = self.hull.delete_left()?;
        let k = self.frozen.len() + 1;
        if p.x as usize != k {
            return Err(StreamError::Internal(format!("froze x={} at slot {k}", p.x)));
        }
        let c = p.y + self.shift;
        let val = Rational::new(c, k as i64);
        let best = match self.maxval.last() {
            Some(&(m, j)) if m > val => (m, j),
            _ => (val, k),
        };
        self.frozen.push(c as u64);
        self.val.push(val);
        self.maxval.push(best);
        Ok(())
    }

    fn step(&mut self, kind: StepKind, alpha: usize, prev_alpha: usize) -> Result<(), StreamError> {
        match kind {
            StepKind::Extend => {
                let last = self.hull.peek_right()?;
                let c = last.y + self.shift;
                self.hull.insert_right(HullPoint::new(last.x + 1, c - (self.shift + 1)))?;
                self.freeze_leftmost()?;
                self.shift += 1;
            }
            StepKind::Increment => {
                self.freeze_leftmost()?;
                self.shift += 1;
            }
            StepKind::Pullback => {
                self.shift += 1;
                for k in (alpha..prev_alpha).rev() {
                    let frozen = self.frozen[k - 1] as i64;
                    let y = frozen + 1 - self.shift;
                    debug_assert_eq!(y, frozen - (self.shift - 1));
                    self.hull.insert_left(HullPoint::new(k as i64, y))?;
                }
                self.frozen.truncate(alpha - 1);
                self.val.truncate(alpha - 1);
                self.maxval.truncate(alpha - 1);
            }
        }
        Ok(())
    }

    fn leader(&self) -> Result<(Rational, usize), StreamError> {
        let t = self.hull.tangent_max_slope(HullPoint::new(0, -self.shift))?;
        let active = (t.slope, t.vertex.x as usize);
        Ok(match self.maxval.last() {
            Some(&frozen) if frozen.0 > active.0 => frozen,
            _ => active,
        })
    }

    fn counts(&self) -> Vec<u64> {
        let active = self.hull.points().into_iter().map(|p| (p.y + self.shift) as u64);
        self.frozen.iter().copied().chain(active).collect()
    }
}

#[derive(Debug, Clone)]
enum Engine {
    Amortized(Box<Amortized>),
    Worstcase(Option<Box<WorstCaseEngine>>),
    Oracle(Vec<u64>),
}

/// Online δ over a byte stream.
#[derive(Debug, Clone)]
pub struct DeltaStream {
    kind: EngineKind,
    capacity: usize,
    tracker: SuffixTreeState,
    /// Used by the oracle engine instead of the tracker.
    text: Vec<u8>,
    engine: Engine,
    alpha: usize,
    r: usize,
    last: Option<DeltaReport>,
    stats: PullbackStats,
}

impl DeltaStream {
    pub fn new(kind: EngineKind) -> Self {
        Self::with_capacity(kind, DEFAULT_CAPACITY)
    }

    pub fn with_capacity(kind: EngineKind, capacity: usize) -> Self {
        let capacity = capacity.clamp(1, DEFAULT_CAPACITY);
        let engine = match kind {
            EngineKind::Amortized => Engine::Amortized(Box::default()),
            EngineKind::Worstcase => Engine::Worstcase(None),
            EngineKind::Oracle => Engine::Oracle(Vec::new()),
        };
        DeltaStream {
            kind,
            capacity,
            tracker: SuffixTreeState::with_capacity(2, capacity),
            text: Vec::new(),
            engine,
            alpha: 0,
            r: 0,
            last: None,
            stats: PullbackStats::default(),
        }
    }

    pub fn kind(&self) -> EngineKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.stats.positions
    }

    pub fn is_empty(&self) -> bool {
        self.stats.positions == 0
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    /// Largest length with a positive count increment so far.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Current active shift (amortized engine only).
    pub fn shift(&self) -> Option<i64> {
        match &self.engine {
            Engine::Amortized(a) => Some(a.shift),
            _ => None,
        }
    }

    pub fn last_report(&self) -> Option<DeltaReport> {
        self.last
    }

    pub fn stats(&self) -> PullbackStats {
        self.stats
    }

    pub fn counters(&self) -> StreamCounters {
        StreamCounters {
            tracker: self.tracker.counters(),
            hull: match &self.engine {
                Engine::Amortized(a) => Some(a.hull.counters()),
                _ => None,
            },
            tree: match &self.engine {
                Engine::Worstcase(Some(w)) => Some(w.counters()),
                _ => None,
            },
        }
    }

    pub fn push(&mut self, symbol: u8) -> Result<DeltaReport, StreamError> {
        let position = self.stats.positions + 1;
        if position > self.capacity {
            return Err(StreamError::Capacity(self.capacity));
        }
        let alpha = match self.engine {
            Engine::Oracle(_) => {
                self.text.push(symbol);
                count_oracle::longest_repeated_suffix(&self.text) + 1
            }
            _ => self.tracker.push(symbol)?,
        };
        let prev_alpha = self.alpha;
        let kind = if position == 1 || alpha == self.r + 1 {
            StepKind::Extend
        } else if alpha == prev_alpha + 1 {
            StepKind::Increment
        } else {
            StepKind::Pullback
        };
        if position > 1 && alpha > prev_alpha + 1 {
            return Err(StreamError::Internal(format!("alpha jumped {prev_alpha} -> {alpha}")));
        }

        let (delta, k) = if position == 1 {
            self.init()?
        } else {
            self.step(kind, alpha, prev_alpha)?
        };
        if kind == StepKind::Extend {
            self.r += 1;
        }
        if kind == StepKind::Pullback {
            self.stats.pullbacks += 1;
            self.stats.total_distance += (prev_alpha - alpha) as u64;
            self.stats.alpha_sum += alpha as u64;
        }
        self.alpha = alpha;
        self.stats.positions = position;
        if let Some(prev) = self.last {
            if delta < prev.delta {
                return Err(StreamError::Internal(format!("delta fell from {} to {delta}", prev.delta)));
            }
        }
        let report = DeltaReport {
            position,
            delta,
            delta_float: delta.to_f64(),
            maximizing_length: k,
            alpha,
            step_kind: kind,
        };
        self.last = Some(report);
        Ok(report)
    }

    pub fn extend_from(&mut self, bytes: &[u8]) -> Result<Vec<DeltaReport>, StreamError> {
        bytes.iter().map(|&b| self.push(b)).collect()
    }

    fn init(&mut self) -> Result<(Rational, usize), StreamError> {
        match &mut self.engine {
            Engine::Amortized(a) => a.hull.insert_right(HullPoint::new(1, 1))?,
            Engine::Worstcase(w) => {
                *w = Some(Box::new(WorstCaseEngine::with_max_positions(self.capacity)));
            }
            Engine::Oracle(c) => c.push(1),
        }
        Ok((Rational::ONE, 1))
    }

    fn step(&mut self, kind: StepKind, alpha: usize, prev_alpha: usize) -> Result<(Rational, usize), StreamError> {
        match &mut self.engine {
            Engine::Amortized(a) => {
                a.step(kind, alpha, prev_alpha)?;
                a.leader()
            }
            Engine::Worstcase(w) => {
                let w = w.as_mut().expect("initialized on the first byte");
                if kind == StepKind::Extend {
                    w.append_position()?;
                } else {
                    w.suffix_increment(alpha)?;
                }
                let (k, _, slope) = w.leader();
                Ok((slope, k))
            }
            Engine::Oracle(c) => {
                if kind == StepKind::Extend {
                    let last = *c.last().expect("nonempty");
                    c.push(last);
                } else {
                    c[alpha - 1..].iter_mut().for_each(|v| *v += 1);
                }
                Ok(count_oracle::max_ratio(c))
            }
        }
    }

    /// `c[1..=R]` as the engine currently represents it.
    pub fn reconstructed_counts(&self) -> Vec<u64> {
        match &self.engine {
            Engine::Amortized(a) => a.counts(),
            Engine::Worstcase(Some(w)) => w.values().into_iter().map(|v| v as u64).collect(),
            Engine::Worstcase(None) => Vec::new(),
            Engine::Oracle(c) => c.clone(),
        }
    }

    /// Checks the engine's internal state against an independently computed
    /// count array `c[1..=R]`.
    ///
    /// For the amortized engine this means: the hull stores exactly the
    /// points `(k, c[k] - shift)` for `k` in `[alpha..R]`, and for every
    /// frozen `k < alpha` the stored count, `val[k] = c[k]/k` and
    /// `maxval[k] = max_{j<=k} c[j]/j` are correct.
    pub fn verify_invariants(&self, expected: &[u64]) -> Result<(), String> {
        if expected.len() != self.r {
            return Err(format!("R={} but reference has {} counts", self.r, expected.len()));
        }
        let Engine::Amortized(a) = &self.engine else {
            let got = self.reconstructed_counts();
            return if got == expected { Ok(()) } else { Err(format!("counts {got:?} != {expected:?}")) };
        };
        let points = a.hull.points();
        let xs: Vec<usize> = points.iter().map(|p| p.x as usize).collect();
        let want: Vec<usize> = (self.alpha..=self.r).collect();
        if xs != want {
            return Err(format!("active x-range {xs:?}, expected {}..={}", self.alpha, self.r));
        }
        for p in &points {
            let k = p.x as usize;
            if p.y + a.shift != expected[k - 1] as i64 {
                return Err(format!("active k={k}: y={} shift={} but c={}", p.y, a.shift, expected[k - 1]));
            }
        }
        if a.frozen.len() != self.alpha - 1 {
            return Err(format!("{} frozen counts for alpha={}", a.frozen.len(), self.alpha));
        }
        let mut best: Option<(Rational, usize)> = None;
        for k in 1..self.alpha {
            let c = expected[k - 1];
            let val = Rational::new(c as i64, k as i64);
            if best.is_none_or(|(m, _)| val >= m) {
                best = Some((val, k));
            }
            if a.frozen[k - 1] != c || a.val[k - 1] != val || Some(a.maxval[k - 1]) != best {
                return Err(format!(
                    "frozen k={k}: stored c={} val={} maxval={:?}, expected c={c} val={val} maxval={best:?}",
                    a.frozen[k - 1],
                    a.val[k - 1],
                    a.maxval[k - 1]
                ));
            }
        }
        Ok(())
    }

    /// Every point `(k, c[k])`, its upper hull, and the current leader.
    pub fn snapshot(&self) -> Option<HullSnapshot> {
        let report = self.last?;
        let counts = self.reconstructed_counts();
        let hull = match &self.engine {
            Engine::Worstcase(Some(w)) => w.hull_vertices(),
            _ => {
                let pts: Vec<HullPoint> = counts
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| HullPoint::new(i as i64 + 1, c as i64))
                    .collect();
                upper_hull(&pts).into_iter().map(|p| p.x as usize).collect()
            }
        };
        Some(HullSnapshot {
            n: report.position,
            r: self.r,
            delta: report.delta,
            tangency_k: report.maximizing_length,
            points: counts.iter().enumerate().map(|(i, &c)| [i as u64 + 1, c]).collect(),
            hull,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_byte_initializes() {
        for kind in EngineKind::ALL {
            let mut s = DeltaStream::new(kind);
            let r = s.push(b'x').unwrap();
            assert_eq!((r.delta, r.alpha, r.position, r.step_kind), (Rational::ONE, 1, 1, StepKind::Extend));
            assert_eq!(s.r(), 1);
            let snap = s.snapshot().unwrap();
            assert_eq!((snap.points.clone(), snap.hull.clone(), snap.tangency_k), (vec![[1, 1]], vec![1], 1));
        }
    }

    #[test]
    fn two_distinct_bytes() {
        let mut s = DeltaStream::new(EngineKind::Worstcase);
        let reports = s.extend_from(b"ab").unwrap();
        assert_eq!(reports[1].delta, Rational::new(2, 1));
        assert_eq!(s.reconstructed_counts(), vec![2]);
    }

    #[test]
    fn example_word_then_c() {
        for kind in EngineKind::ALL {
            let mut s = DeltaStream::new(kind);
            let reports = s.extend_from(b"abaabbabbab").unwrap();
            let alphas: Vec<usize> = reports.iter().map(|r| r.alpha).collect();
            assert_eq!(alphas, [1, 1, 2, 2, 3, 2, 3, 3, 4, 5, 6]);
            assert_eq!(reports[5].step_kind, StepKind::Pullback);
            assert_eq!(reports[10].delta, Rational::new(2, 1));
            assert_eq!(s.reconstructed_counts(), [2, 4, 6, 6, 6, 6]);
            let r = s.push(b'c').unwrap();
            assert_eq!((r.delta, r.maximizing_length), (Rational::new(3, 1), 1));
        }
    }

    #[test]
    fn unary_stream_never_pulls_back() {
        let mut s = DeltaStream::new(EngineKind::Amortized);
        s.extend_from(&[b'a'; 50]).unwrap();
        assert_eq!(s.stats().pullbacks, 0);
        assert_eq!(s.last_report().unwrap().delta, Rational::ONE);
    }

    #[test]
    fn capacity_is_enforced() {
        let mut s = DeltaStream::with_capacity(EngineKind::Amortized, 3);
        s.extend_from(b"abc").unwrap();
        assert_eq!(s.push(b'd'), Err(StreamError::Capacity(3)));
    }

    #[test]
    fn snapshot_serializes_in_field_order() {
        let mut s = DeltaStream::new(EngineKind::Amortized);
        s.extend_from(b"ab").unwrap();
        let json = serde_json::to_string(&s.snapshot().unwrap()).unwrap();
        assert_eq!(json, r#"{"n":2,"R":1,"delta":"2/1","tangency_k":1,"points":[[1,2]],"hull":[1]}"#);
    }
}
