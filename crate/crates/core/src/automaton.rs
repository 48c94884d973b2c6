//! Partial inverse automata with coincidence processing: the common core of
//! coset enumeration and Stallings folding.

use std::collections::{HashMap, VecDeque};

pub(crate) const NONE: usize = usize::MAX;

/// Column of a signed 1-based letter: `2i` for `x_{i+1}`, `2i + 1` for its
/// inverse.
pub(crate) fn column(l: i32) -> usize {
    2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0)
}

pub(crate) struct InverseAutomaton {
    pub cols: usize,
    pub table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    pub live: usize,
    cap: usize,
}

impl InverseAutomaton {
    pub fn new(rank: usize, cap: usize) -> Self {
        let cols = 2 * rank;
        InverseAutomaton {
            cols,
            table: vec![vec![NONE; cols]],
            parent: vec![0],
            live: 1,
            cap: cap.max(1),
        }
    }

    pub fn at_cap(&self) -> bool {
        self.live >= self.cap
    }

    pub fn rep(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    pub fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    pub fn define(&mut self, c: usize, x: usize) -> Option<usize> {
        if self.live >= self.cap {
            return None;
        }
        let n = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.parent.push(n);
        self.live += 1;
        self.table[c][x] = n;
        self.table[n][x ^ 1] = c;
        Some(n)
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut VecDeque<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        self.live -= 1;
        queue.push_back(hi);
    }

    pub fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = VecDeque::new();
        self.merge(a, b, &mut queue);
        while let Some(e) = queue.pop_front() {
            for x in 0..self.cols {
                let f = self.table[e][x];
                if f == NONE {
                    continue;
                }
                if self.table[f][x ^ 1] == e {
                    self.table[f][x ^ 1] = NONE;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if self.table[e1][x] != NONE {
                    let t = self.table[e1][x];
                    self.merge(f1, t, &mut queue);
                } else if self.table[f1][x ^ 1] != NONE {
                    let t = self.table[f1][x ^ 1];
                    self.merge(e1, t, &mut queue);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][x ^ 1] = e1;
                }
            }
        }
    }

    /// Scans the closed path `word` from `c`, deducing or identifying when
    /// the unread gap has length one or zero; with `fill` longer gaps are
    /// closed by new definitions. Returns false when the cap blocks one.
    pub fn scan(&mut self, c: usize, word: &[usize], fill: bool) -> bool {
        if word.is_empty() {
            return true;
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0isize;
        let mut j = word.len() as isize - 1;
        loop {
            while i <= j && self.table[f][word[i as usize]] != NONE {
                f = self.table[f][word[i as usize]];
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            while j >= i && self.table[b][word[j as usize] ^ 1] != NONE {
                b = self.table[b][word[j as usize] ^ 1];
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return true;
            }
            let x = word[i as usize];
            if i == j {
                self.table[f][x] = b;
                self.table[b][x ^ 1] = f;
                return true;
            }
            if !fill {
                return true;
            }
            if self.define(f, x).is_none() {
                return false;
            }
        }
    }

    pub fn lookahead(&mut self, relators: &[Vec<usize>]) {
        let mut c = 0;
        while c < self.table.len() {
            for r in relators {
                if !self.is_live(c) {
                    break;
                }
                self.scan(c, r, false);
            }
            c += 1;
        }
    }

    /// Removes live states other than the start with at most one edge,
    /// repeatedly.
    pub fn trim(&mut self) {
        let start = self.rep(0);
        loop {
            let mut changed = false;
            for c in 0..self.table.len() {
                if c == start || !self.is_live(c) {
                    continue;
                }
                let edges: Vec<usize> = (0..self.cols).filter(|&x| self.table[c][x] != NONE).collect();
                if edges.len() <= 1 {
                    for x in edges {
                        let t = self.table[c][x];
                        self.table[t][x ^ 1] = NONE;
                        self.table[c][x] = NONE;
                    }
                    // detach without merging
                    self.parent[c] = start;
                    self.live -= 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Live states renumbered breadth-first from the start state; missing
    /// edges stay `NONE`. States unreachable from the start are dropped.
    pub fn compact(&mut self) -> Vec<Vec<usize>> {
        let start = self.rep(0);
        let mut index = HashMap::new();
        let mut order = vec![start];
        index.insert(start, 0usize);
        let mut k = 0;
        while k < order.len() {
            let c = order[k];
            for x in 0..self.cols {
                let t = self.table[c][x];
                if t == NONE {
                    continue;
                }
                let t = self.rep(t);
                if let std::collections::hash_map::Entry::Vacant(v) = index.entry(t) {
                    v.insert(order.len());
                    order.push(t);
                }
            }
            k += 1;
        }
        order
            .iter()
            .map(|&c| {
                (0..self.cols)
                    .map(|x| match self.table[c][x] {
                        NONE => NONE,
                        t => {
                            let t = self.rep(t);
                            index[&t]
                        }
                    })
                    .collect()
            })
            .collect()
    }
}
