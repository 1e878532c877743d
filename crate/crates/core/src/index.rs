//! First-occurrence indices from a reduced fraction to the row that introduced it.

use std::collections::HashMap;

use crate::ratio::{IntPair, Ratio};

/// Where a fraction was first seen: the global row and the pair that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Occurrence {
    pub row: usize,
    pub pair: IntPair,
}

/// Maps each fraction to its first occurrence.
///
/// `observe` checks before it inserts: it returns the earlier occurrence if the
/// key is already present (leaving it untouched), otherwise records `at` and
/// returns `None`. A lookup can therefore never see the row being built.
pub trait CollisionIndex {
    fn observe(&mut self, key: Ratio, at: Occurrence) -> Option<Occurrence>;

    fn first_occurrence(&self, key: Ratio) -> Option<Occurrence>;

    /// Number of distinct keys stored.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of structural nodes held (equals `len` for flat maps).
    fn node_count(&self) -> usize {
        self.len()
    }
}

#[derive(Debug, Default)]
pub struct HashIndex {
    map: HashMap<Ratio, Occurrence>,
}

impl HashIndex {
    pub fn new() -> Self {
        Self::default()
    }
}

impl CollisionIndex for HashIndex {
    fn observe(&mut self, key: Ratio, at: Occurrence) -> Option<Occurrence> {
        use std::collections::hash_map::Entry;
        match self.map.entry(key) {
            Entry::Occupied(e) => Some(*e.get()),
            Entry::Vacant(e) => {
                e.insert(at);
                None
            }
        }
    }

    fn first_occurrence(&self, key: Ratio) -> Option<Occurrence> {
        self.map.get(&key).copied()
    }

    fn len(&self) -> usize {
        self.map.len()
    }
}

const NIL: usize = 0;

#[derive(Debug, Clone, Copy)]
struct Node {
    left: usize,
    right: usize,
    occurrence: Option<Occurrence>,
}

impl Node {
    const EMPTY: Node = Node {
        left: NIL,
        right: NIL,
        occurrence: None,
    };
}

/// A lazily materialized Stern–Brocot tree.
///
/// Every positive reduced fraction owns exactly one node, reached from the root
/// `1/1` by repeatedly comparing the key with the mediant of the current
/// bounds (starting from `0/1` and `1/0`) and descending left or right. A key is
/// stored by marking the node its path terminates at; a collision is a path
/// that terminates at an already marked node. Zero sits outside the tree and
/// has its own slot.
#[derive(Debug)]
pub struct FareyTrie {
    // nodes[0] is the root; child index 0 therefore doubles as "absent"
    nodes: Vec<Node>,
    zero: Option<Occurrence>,
    len: usize,
}

impl Default for FareyTrie {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    Here,
    Left,
    Right,
}

/// Compares `key` against the mediant of `lo` and `hi`, narrowing the bounds.
fn step(key: Ratio, lo: &mut (i64, i64), hi: &mut (i64, i64)) -> Step {
    let mediant = (lo.0 + hi.0, lo.1 + hi.1);
    let lhs = key.numer() as i128 * mediant.1 as i128;
    let rhs = mediant.0 as i128 * key.denom() as i128;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Equal => Step::Here,
        std::cmp::Ordering::Less => {
            *hi = mediant;
            Step::Left
        }
        std::cmp::Ordering::Greater => {
            *lo = mediant;
            Step::Right
        }
    }
}

impl FareyTrie {
    pub fn new() -> Self {
        FareyTrie {
            nodes: vec![Node::EMPTY],
            zero: None,
            len: 0,
        }
    }

    /// Length of the root-to-node path for `key` (root has depth 0).
    pub fn depth(key: Ratio) -> Option<usize> {
        if key.is_zero() {
            return None;
        }
        let (mut lo, mut hi) = ((0, 1), (1, 0));
        let mut depth = 0;
        while step(key, &mut lo, &mut hi) != Step::Here {
            depth += 1;
        }
        Some(depth)
    }
}

impl CollisionIndex for FareyTrie {
    fn observe(&mut self, key: Ratio, at: Occurrence) -> Option<Occurrence> {
        let slot = if key.is_zero() {
            &mut self.zero
        } else {
            let (mut lo, mut hi) = ((0, 1), (1, 0));
            let mut node = 0;
            loop {
                let dir = step(key, &mut lo, &mut hi);
                let child = match dir {
                    Step::Here => break,
                    Step::Left => self.nodes[node].left,
                    Step::Right => self.nodes[node].right,
                };
                node = if child == NIL {
                    let fresh = self.nodes.len();
                    self.nodes.push(Node::EMPTY);
                    match dir {
                        Step::Left => self.nodes[node].left = fresh,
                        _ => self.nodes[node].right = fresh,
                    }
                    fresh
                } else {
                    child
                };
            }
            &mut self.nodes[node].occurrence
        };
        match slot {
            Some(earlier) => return Some(*earlier),
            None => *slot = Some(at),
        }
        self.len += 1;
        None
    }

    fn first_occurrence(&self, key: Ratio) -> Option<Occurrence> {
        if key.is_zero() {
            return self.zero;
        }
        let (mut lo, mut hi) = ((0, 1), (1, 0));
        let mut node = 0;
        loop {
            node = match step(key, &mut lo, &mut hi) {
                Step::Here => return self.nodes[node].occurrence,
                Step::Left => self.nodes[node].left,
                Step::Right => self.nodes[node].right,
            };
            if node == NIL {
                return None;
            }
        }
    }

    fn len(&self) -> usize {
        self.len
    }

    fn node_count(&self) -> usize {
        self.nodes.len()
    }
}
