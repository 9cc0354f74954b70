//! Concatenable queues of x-coordinates: join-based AVL trees keyed by
//! position, stored in one arena. Split and concatenate are O(log n).

pub(crate) const NIL: u32 = u32::MAX;

/// Root handle of one chain (`NIL` for the empty chain).
pub(crate) type Chain = u32;

#[derive(Debug, Clone, Copy)]
struct ChainNode {
    key: u32,
    left: u32,
    right: u32,
    height: u8,
    size: u32,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct ChainArena {
    nodes: Vec<ChainNode>,
    free: Vec<u32>,
    /// Tree nodes visited by split/join since the last reset.
    pub(crate) steps: u64,
}

impl ChainArena {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn live(&self) -> usize {
        self.nodes.len() - self.free.len()
    }

    fn height(&self, t: u32) -> u8 {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].height
        }
    }

    pub(crate) fn len(&self, t: Chain) -> usize {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].size as usize
        }
    }

    fn update(&mut self, t: u32) {
        let (l, r) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        let h = self.height(l).max(self.height(r)) + 1;
        let s = self.len(l) + self.len(r) + 1;
        let n = &mut self.nodes[t as usize];
        n.height = h;
        n.size = s as u32;
    }

    fn attach(&mut self, l: u32, t: u32, r: u32) -> u32 {
        self.nodes[t as usize].left = l;
        self.nodes[t as usize].right = r;
        self.update(t);
        t
    }

    pub(crate) fn singleton(&mut self, key: u32) -> Chain {
        let node = ChainNode {
            key,
            left: NIL,
            right: NIL,
            height: 1,
            size: 1,
        };
        if let Some(i) = self.free.pop() {
            self.nodes[i as usize] = node;
            i
        } else {
            self.nodes.push(node);
            (self.nodes.len() - 1) as u32
        }
    }

    fn rotate_left(&mut self, t: u32) -> u32 {
        let r = self.nodes[t as usize].right;
        let rl = self.nodes[r as usize].left;
        self.nodes[t as usize].right = rl;
        self.update(t);
        self.nodes[r as usize].left = t;
        self.update(r);
        r
    }

    fn rotate_right(&mut self, t: u32) -> u32 {
        let l = self.nodes[t as usize].left;
        let lr = self.nodes[l as usize].right;
        self.nodes[t as usize].left = lr;
        self.update(t);
        self.nodes[l as usize].right = t;
        self.update(l);
        l
    }

    fn join_right(&mut self, tl: u32, m: u32, tr: u32) -> u32 {
        self.steps += 1;
        let (l, c) = (self.nodes[tl as usize].left, self.nodes[tl as usize].right);
        if self.height(c) <= self.height(tr) + 1 {
            let t = self.attach(c, m, tr);
            if self.height(t) <= self.height(l) + 1 {
                self.attach(l, tl, t)
            } else {
                let t = self.rotate_right(t);
                let top = self.attach(l, tl, t);
                self.rotate_left(top)
            }
        } else {
            let t = self.join_right(c, m, tr);
            let top = self.attach(l, tl, t);
            if self.height(t) <= self.height(l) + 1 {
                top
            } else {
                self.rotate_left(top)
            }
        }
    }

    fn join_left(&mut self, tl: u32, m: u32, tr: u32) -> u32 {
        self.steps += 1;
        let (c, r) = (self.nodes[tr as usize].left, self.nodes[tr as usize].right);
        if self.height(c) <= self.height(tl) + 1 {
            let t = self.attach(tl, m, c);
            if self.height(t) <= self.height(r) + 1 {
                self.attach(t, tr, r)
            } else {
                let t = self.rotate_left(t);
                let top = self.attach(t, tr, r);
                self.rotate_right(top)
            }
        } else {
            let t = self.join_left(tl, m, c);
            let top = self.attach(t, tr, r);
            if self.height(t) <= self.height(r) + 1 {
                top
            } else {
                self.rotate_right(top)
            }
        }
    }

    /// `tl ++ [m] ++ tr` where `m` is a detached single node.
    fn join(&mut self, tl: u32, m: u32, tr: u32) -> u32 {
        let (hl, hr) = (self.height(tl), self.height(tr));
        if hl > hr + 1 {
            self.join_right(tl, m, tr)
        } else if hr > hl + 1 {
            self.join_left(tl, m, tr)
        } else {
            self.steps += 1;
            self.attach(tl, m, tr)
        }
    }

    /// First `k` elements and the rest.
    pub(crate) fn split_at(&mut self, t: Chain, k: usize) -> (Chain, Chain) {
        if t == NIL {
            return (NIL, NIL);
        }
        self.steps += 1;
        let ChainNode { left, right, .. } = self.nodes[t as usize];
        let ls = self.len(left);
        if k <= ls {
            let (a, b) = self.split_at(left, k);
            (a, self.join(b, t, right))
        } else {
            let (a, b) = self.split_at(right, k - ls - 1);
            (self.join(left, t, a), b)
        }
    }

    pub(crate) fn concat(&mut self, a: Chain, b: Chain) -> Chain {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let n = self.len(a);
        let (rest, last) = self.split_at(a, n - 1);
        self.nodes[last as usize].left = NIL;
        self.nodes[last as usize].right = NIL;
        self.join(rest, last, b)
    }

    pub(crate) fn get(&self, mut t: Chain, mut idx: usize) -> u32 {
        loop {
            let n = &self.nodes[t as usize];
            let ls = self.len(n.left);
            match idx.cmp(&ls) {
                std::cmp::Ordering::Less => t = n.left,
                std::cmp::Ordering::Equal => return n.key,
                std::cmp::Ordering::Greater => {
                    idx -= ls + 1;
                    t = n.right;
                }
            }
        }
    }

    pub(crate) fn to_vec(&self, t: Chain) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len(t));
        let mut stack = Vec::new();
        let mut cur = t;
        while cur != NIL || !stack.is_empty() {
            while cur != NIL {
                stack.push(cur);
                cur = self.nodes[cur as usize].left;
            }
            let n = stack.pop().expect("nonempty");
            out.push(self.nodes[n as usize].key);
            cur = self.nodes[n as usize].right;
        }
        out
    }

    #[cfg(test)]
    pub(crate) fn chain_of(&mut self, keys: &[u32]) -> Chain {
        keys.iter().fold(NIL, |acc, &k| {
            let s = self.singleton(k);
            self.concat(acc, s)
        })
    }

    #[cfg(test)]
    fn check_balanced(&self, t: Chain) -> u8 {
        if t == NIL {
            return 0;
        }
        let n = self.nodes[t as usize];
        let (hl, hr) = (self.check_balanced(n.left), self.check_balanced(n.right));
        assert!(hl.abs_diff(hr) <= 1, "unbalanced node");
        assert_eq!(n.height, hl.max(hr) + 1);
        assert_eq!(n.size as usize, self.len(n.left) + self.len(n.right) + 1);
        n.height
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn split_and_concat_preserve_order() {
        let mut a = ChainArena::new();
        let keys: Vec<u32> = (0..100).collect();
        let t = a.chain_of(&keys);
        a.check_balanced(t);
        for k in [0, 1, 37, 99, 100] {
            let mut b = a.clone();
            let (x, y) = b.split_at(t, k);
            assert_eq!(b.to_vec(x), keys[..k]);
            assert_eq!(b.to_vec(y), keys[k..]);
            b.check_balanced(x);
            b.check_balanced(y);
            let z = b.concat(x, y);
            assert_eq!(b.to_vec(z), keys);
            b.check_balanced(z);
        }
        assert_eq!(a.get(t, 42), 42);
        assert_eq!(a.live(), 100);
    }

    proptest! {
        #[test]
        fn random_cut_and_paste(ops in proptest::collection::vec((0usize..200, 0usize..200), 1..30)) {
            let mut arena = ChainArena::new();
            let mut model: Vec<u32> = (0..200).collect();
            let mut t = arena.chain_of(&model);
            for (cut, paste) in ops {
                let cut = cut % (model.len() + 1);
                let (a, b) = arena.split_at(t, cut);
                let tail: Vec<u32> = model.split_off(cut);
                let paste = paste % (model.len() + 1);
                let (a1, a2) = arena.split_at(a, paste);
                let mid = arena.concat(b, a2);
                t = arena.concat(a1, mid);
                let head2 = model.split_off(paste);
                model.extend(tail);
                model.extend(head2);
                prop_assert_eq!(arena.to_vec(t), model.clone());
                arena.check_balanced(t);
            }
        }
    }
}
