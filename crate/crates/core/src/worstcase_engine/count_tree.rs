/// Range-add / point-query tree over positions `1..=capacity`.
///
/// Leaves hold base counts, internal nodes hold uniform-add tags; a value is
/// the sum of tags on its root-to-leaf path.
#[derive(Debug, Clone)]
pub struct LazyCountTree {
    capacity: usize,
    tag: Vec<i64>,
}

impl LazyCountTree {
    /// `capacity` must be a power of two.
    pub fn new(capacity: usize) -> Self {
        debug_assert!(capacity.is_power_of_two());
        LazyCountTree {
            capacity,
            tag: vec![0; 2 * capacity],
        }
    }

    pub fn from_values(capacity: usize, values: &[i64]) -> Self {
        let mut t = Self::new(capacity);
        for (i, &v) in values.iter().enumerate() {
            t.tag[capacity + i] = v;
        }
        t
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    fn leaf(&self, k: usize) -> usize {
        debug_assert!((1..=self.capacity).contains(&k));
        self.capacity + k - 1
    }

    pub fn value_at(&self, k: usize) -> i64 {
        let mut v = self.leaf(k);
        let mut sum = 0;
        while v >= 1 {
            sum += self.tag[v];
            v >>= 1;
        }
        sum
    }

    /// Adds `delta` to every position in `lo..=hi`.
    pub fn range_add(&mut self, lo: usize, hi: usize, delta: i64) {
        let (mut l, mut r) = (self.leaf(lo), self.leaf(hi) + 1);
        while l < r {
            if l & 1 == 1 {
                self.tag[l] += delta;
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                self.tag[r] += delta;
            }
            l >>= 1;
            r >>= 1;
        }
    }

    /// Makes `value_at(k) == value` by adjusting the leaf alone.
    pub fn set(&mut self, k: usize, value: i64) {
        let leaf = self.leaf(k);
        let current = self.value_at(k);
        self.tag[leaf] += value - current;
    }
}
