//! Online suffix tree (Ukkonen) reporting, after every byte, the length of the
//! shortest suffix that has no earlier occurrence.
//!
//! The tree is the implicit suffix tree of the text read so far: no terminator
//! is appended, leaves have an open end, and the active point always addresses
//! the longest suffix that also occurs earlier (overlaps allowed). Its string
//! depth is exactly the number of pending suffixes, so the reported length is
//! `remainder + 1`.

/// Default maximum stream length: positions must fit in `u32`.
pub const DEFAULT_CAPACITY: usize = u32::MAX as usize;

const ROOT: u32 = 0;
const NONE: u32 = u32::MAX;
const OPEN_END: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrackerError {
    #[error("stream too long: capacity is {capacity} symbols")]
    StreamTooLong { capacity: usize },
}

#[derive(Debug, Clone)]
struct Node {
    start: u32,
    end: u32,
    link: u32,
    // sorted by symbol; tiny for the alphabets seen in practice
    children: Vec<(u8, u32)>,
}

impl Node {
    fn new(start: u32, end: u32) -> Self {
        Node {
            start,
            end,
            link: NONE,
            children: Vec::new(),
        }
    }

    fn child(&self, symbol: u8) -> Option<u32> {
        self.children
            .binary_search_by_key(&symbol, |&(s, _)| s)
            .ok()
            .map(|i| self.children[i].1)
    }

    fn set_child(&mut self, symbol: u8, node: u32) {
        match self.children.binary_search_by_key(&symbol, |&(s, _)| s) {
            Ok(i) => self.children[i].1 = node,
            Err(i) => self.children.insert(i, (symbol, node)),
        }
    }
}

/// Work counters, in node/edge operations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct TrackerCounters {
    pub walk_downs: u64,
    pub splits: u64,
    pub leaves: u64,
    pub suffix_link_hops: u64,
}

impl TrackerCounters {
    pub fn total(&self) -> u64 {
        self.walk_downs + self.splits + self.leaves + self.suffix_link_hops
    }
}

/// Ukkonen tree state for one stream.
#[derive(Debug, Clone)]
pub struct SuffixTreeState {
    text: Vec<u8>,
    nodes: Vec<Node>,
    active_node: u32,
    active_edge: usize,
    active_len: usize,
    remainder: usize,
    capacity: usize,
    last_alpha: Option<usize>,
    counters: TrackerCounters,
}

impl SuffixTreeState {
    /// `alphabet_hint` only sizes the root's child table.
    pub fn new(alphabet_hint: usize) -> Self {
        Self::with_capacity(alphabet_hint, DEFAULT_CAPACITY)
    }

    pub fn with_capacity(alphabet_hint: usize, capacity: usize) -> Self {
        let mut root = Node::new(0, 0);
        root.children.reserve(alphabet_hint.min(256));
        SuffixTreeState {
            text: Vec::new(),
            nodes: vec![root],
            active_node: ROOT,
            active_edge: 0,
            active_len: 0,
            remainder: 0,
            capacity: capacity.min(DEFAULT_CAPACITY),
            last_alpha: None,
            counters: TrackerCounters::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    /// Length of the shortest suffix with no earlier occurrence, if any
    /// symbol has been pushed.
    pub fn alpha(&self) -> Option<usize> {
        self.last_alpha
    }

    /// String depth of the active point: the longest suffix occurring earlier.
    pub fn active_depth(&self) -> usize {
        self.remainder
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn counters(&self) -> TrackerCounters {
        self.counters
    }

    fn edge_len(&self, node: u32, pos: usize) -> usize {
        let n = &self.nodes[node as usize];
        let end = if n.end == OPEN_END {
            pos + 1
        } else {
            n.end as usize
        };
        end - n.start as usize
    }

    fn alloc(&mut self, start: u32, end: u32) -> Result<u32, TrackerError> {
        if self.nodes.len() >= NONE as usize {
            return Err(TrackerError::StreamTooLong {
                capacity: self.capacity,
            });
        }
        self.nodes.push(Node::new(start, end));
        Ok((self.nodes.len() - 1) as u32)
    }

    /// Appends one byte and returns the new alpha.
    pub fn push(&mut self, symbol: u8) -> Result<usize, TrackerError> {
        if self.text.len() >= self.capacity {
            return Err(TrackerError::StreamTooLong {
                capacity: self.capacity,
            });
        }
        let pos = self.text.len();
        self.text.push(symbol);
        self.remainder += 1;
        let mut last_internal = NONE;

        while self.remainder > 0 {
            if self.active_len == 0 {
                self.active_edge = pos;
            }
            let edge_symbol = self.text[self.active_edge];
            match self.nodes[self.active_node as usize].child(edge_symbol) {
                None => {
                    let leaf = self.alloc(pos as u32, OPEN_END)?;
                    self.counters.leaves += 1;
                    self.nodes[self.active_node as usize].set_child(edge_symbol, leaf);
                    if last_internal != NONE {
                        self.nodes[last_internal as usize].link = self.active_node;
                        last_internal = NONE;
                    }
                }
                Some(next) => {
                    let edge_len = self.edge_len(next, pos);
                    if self.active_len >= edge_len {
                        self.counters.walk_downs += 1;
                        self.active_edge += edge_len;
                        self.active_len -= edge_len;
                        self.active_node = next;
                        continue;
                    }
                    let next_start = self.nodes[next as usize].start as usize;
                    if self.text[next_start + self.active_len] == symbol {
                        if last_internal != NONE && self.active_node != ROOT {
                            self.nodes[last_internal as usize].link = self.active_node;
                        }
                        self.active_len += 1;
                        break;
                    }
                    let split_end = (next_start + self.active_len) as u32;
                    let mid = self.alloc(next_start as u32, split_end)?;
                    let leaf = self.alloc(pos as u32, OPEN_END)?;
                    self.counters.splits += 1;
                    self.counters.leaves += 1;
                    self.nodes[self.active_node as usize].set_child(edge_symbol, mid);
                    let old_symbol = self.text[split_end as usize];
                    self.nodes[next as usize].start = split_end;
                    let mid_node = &mut self.nodes[mid as usize];
                    mid_node.set_child(symbol, leaf);
                    mid_node.set_child(old_symbol, next);
                    if last_internal != NONE {
                        self.nodes[last_internal as usize].link = mid;
                    }
                    last_internal = mid;
                }
            }
            self.remainder -= 1;
            if self.active_node == ROOT && self.active_len > 0 {
                self.active_len -= 1;
                self.active_edge = pos + 1 - self.remainder;
            } else if self.active_node != ROOT {
                self.counters.suffix_link_hops += 1;
                let link = self.nodes[self.active_node as usize].link;
                self.active_node = if link == NONE { ROOT } else { link };
            }
        }

        let alpha = self.remainder + 1;
        debug_assert!(alpha <= self.text.len());
        debug_assert!(self.last_alpha.map_or(alpha == 1, |prev| alpha <= prev + 1));
        self.last_alpha = Some(alpha);
        Ok(alpha)
    }

    /// Pushes every byte of `bytes`, returning the alpha sequence.
    pub fn extend_from(&mut self, bytes: &[u8]) -> Result<Vec<usize>, TrackerError> {
        bytes.iter().map(|&b| self.push(b)).collect()
    }

    /// True when `pattern` labels a path from the root (i.e. occurs in the text).
    pub fn contains(&self, pattern: &[u8]) -> bool {
        let mut node = ROOT;
        let mut i = 0;
        let pos = self.text.len().saturating_sub(1);
        while i < pattern.len() {
            let Some(next) = self.nodes[node as usize].child(pattern[i]) else {
                return false;
            };
            let start = self.nodes[next as usize].start as usize;
            let len = self.edge_len(next, pos);
            for j in 0..len {
                if i == pattern.len() {
                    return true;
                }
                if self.text[start + j] != pattern[i] {
                    return false;
                }
                i += 1;
            }
            node = next;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count_oracle;

    fn alphas(text: &[u8]) -> Vec<usize> {
        SuffixTreeState::new(256).extend_from(text).unwrap()
    }

    #[test]
    fn fresh_state_has_no_alpha() {
        let t = SuffixTreeState::new(256);
        assert_eq!(t.alpha(), None);
        assert!(t.is_empty());
    }

    #[test]
    fn single_symbol_is_unique() {
        let mut t = SuffixTreeState::new(2);
        assert_eq!(t.push(b'a').unwrap(), 1);
    }

    #[test]
    fn example_word_alpha_sequence() {
        assert_eq!(alphas(b"abaabbabbab"), vec![1, 1, 2, 2, 3, 2, 3, 3, 4, 5, 6]);
    }

    #[test]
    fn example_word_one_step_extensions() {
        let mut t = SuffixTreeState::new(256);
        t.extend_from(b"abaabbabbab").unwrap();
        let mut with_a = t.clone();
        assert_eq!(with_a.push(b'a').unwrap(), 4);
        let mut with_b = t.clone();
        assert_eq!(with_b.push(b'b').unwrap(), 7);
        assert_eq!(t.push(b'c').unwrap(), 1);
    }

    #[test]
    fn unary_text_alpha_is_position() {
        assert_eq!(alphas(b"aaaa"), vec![1, 2, 3, 4]);
    }

    #[test]
    fn capacity_is_enforced() {
        let mut t = SuffixTreeState::with_capacity(2, 3);
        t.extend_from(b"abc").unwrap();
        assert_eq!(
            t.push(b'd'),
            Err(TrackerError::StreamTooLong { capacity: 3 })
        );
    }

    #[test]
    fn tree_contains_every_substring() {
        let text = b"mississippi";
        let mut t = SuffixTreeState::new(256);
        t.extend_from(text).unwrap();
        for i in 0..text.len() {
            for j in i + 1..=text.len() {
                assert!(t.contains(&text[i..j]));
            }
        }
        assert!(!t.contains(b"ssm"));
        assert!(!t.contains(b"ippii"));
    }

    #[test]
    fn matches_oracle_on_generated_words() {
        use crate::textgen::{generate, GenKind, GenSpec};
        for seed in 0..60u64 {
            let sigma = [1, 2, 3, 4, 26][seed as usize % 5];
            let text = generate(&GenSpec::random(120, sigma, seed)).unwrap();
            let got = alphas(&text);
            for i in 1..=text.len() {
                assert_eq!(got[i - 1], count_oracle::alpha(&text[..i]).unwrap(), "seed {seed} prefix {i}");
            }
        }
        for kind in [GenKind::Fibonacci, GenKind::ThueMorse, GenKind::DeBruijn] {
            let text = generate(&GenSpec::new(kind, 200, 3, 0)).unwrap();
            let got = alphas(&text);
            for i in 1..=text.len() {
                assert_eq!(got[i - 1], count_oracle::alpha(&text[..i]).unwrap());
            }
        }
    }

    #[test]
    fn work_grows_linearly() {
        use crate::textgen::{generate, GenSpec};
        let mut per_char = Vec::new();
        for n in [10_000usize, 40_000, 160_000] {
            let text = generate(&GenSpec::random(n, 4, 7)).unwrap();
            let mut t = SuffixTreeState::new(4);
            t.extend_from(&text).unwrap();
            per_char.push(t.counters().total() as f64 / n as f64);
        }
        let (lo, hi) = per_char
            .iter()
            .fold((f64::MAX, 0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        assert!(hi / lo < 1.5, "per-char work drifted: {per_char:?}");
    }
}
