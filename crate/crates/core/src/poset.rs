//! Finite strict partial orders over dense integer element ids.
//!
//! A [`Poset`] stores the *full* comparability relation as one bit row per
//! element, so membership tests are O(1) and row-level set operations are
//! word-parallel. Construction always validates the strict-order axioms
//! (irreflexive, antisymmetric, transitive) and reports a witness on failure.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A finite poset on elements `0..n`.
///
/// `rows[x]` holds every `y` with `x < y`; `m` caches the number of
/// relations, i.e. the number of comparable ordered pairs.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    rows: Vec<FixedBitSet>,
    m: usize,
}

/// The cover pairs (Hasse diagram edges) of a poset, sorted lexicographically.
///
/// A pair `(x, y)` is a cover when `x < y` and no `z` satisfies `x < z < y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSet {
    pairs: Vec<(usize, usize)>,
}

impl CoverSet {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.binary_search(&(x, y)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }
}

/// A chain listed top-down: `elements[0] > elements[1] > ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    elements: Vec<usize>,
}

impl Chain {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The maximal element of the chain.
    pub fn top(&self) -> usize {
        self.elements[0]
    }

    /// The minimal element of the chain.
    pub fn bottom(&self) -> usize {
        self.elements[self.elements.len() - 1]
    }
}

impl Poset {
    /// Builds a poset from an explicit list of relations `x < y`.
    ///
    /// The pair set must already be transitively closed; duplicates are
    /// collapsed. Fails with a witness if any strict-order axiom is broken.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Poset> {
        let mut rows = empty_rows(n);
        for &(x, y) in pairs {
            check_id(x, n)?;
            check_id(y, n)?;
            if x == y {
                return Err(Error::ReflexivePair { x });
            }
            rows[x].insert(y);
        }
        Self::from_rows(rows)
    }

    /// Builds a poset as the transitive closure of candidate cover pairs.
    ///
    /// The pairs may be any acyclic relation (they need not be actual covers
    /// of the result); a cycle is reported with a witness.
    pub fn from_covers(n: usize, pairs: &[(usize, usize)]) -> Result<Poset> {
        let mut adjacency = vec![Vec::new(); n];
        for &(x, y) in pairs {
            check_id(x, n)?;
            check_id(y, n)?;
            adjacency[x].push(y);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let rows = close_dag(n, &adjacency)?;
        let poset = Self::from_rows(rows)?;
        Ok(poset)
    }

    /// Validates `rows` as a strict order and wraps it.
    pub(crate) fn from_rows(rows: Vec<FixedBitSet>) -> Result<Poset> {
        validate_rows(&rows)?;
        let n = rows.len();
        let m = rows.iter().map(|r| r.count_ones(..)).sum();
        Ok(Poset { n, rows, m })
    }

    /// Number of elements.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of relations, `e(P, P)`.
    pub fn relation_count(&self) -> usize {
        self.m
    }

    pub fn is_antichain(&self) -> bool {
        self.m == 0
    }

    /// Whether `x < y`. Panics if an id is out of range.
    pub fn lt(&self, x: usize, y: usize) -> bool {
        assert!(x < self.n && y < self.n, "element id out of range");
        self.rows[x].contains(y)
    }

    /// All relations `(x, y)` with `x < y`, in lexicographic order.
    pub fn relations(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.ones().map(move |y| (x, y)))
    }

    pub(crate) fn up_row(&self, x: usize) -> &FixedBitSet {
        &self.rows[x]
    }

    /// Counts pairs `(x, y)` with `x` in `xs`, `y` in `ys` and `x < y`.
    /// The two sets need not be disjoint; duplicate ids are collapsed.
    pub fn e_count(&self, xs: &[usize], ys: &[usize]) -> Result<usize> {
        let xm = self.subset_from_ids(xs)?;
        let ym = self.subset_from_ids(ys)?;
        Ok(self.e_count_bits(&xm, &ym))
    }

    pub(crate) fn e_count_bits(&self, xs: &FixedBitSet, ys: &FixedBitSet) -> usize {
        xs.ones()
            .map(|x| self.rows[x].intersection(ys).count())
            .sum()
    }

    /// Number of elements strictly above `v`.
    pub fn up_degree(&self, v: usize) -> Result<usize> {
        check_id(v, self.n)?;
        Ok(self.rows[v].count_ones(..))
    }

    /// Number of elements strictly below `v`.
    pub fn down_degree(&self, v: usize) -> Result<usize> {
        check_id(v, self.n)?;
        Ok((0..self.n).filter(|&x| self.rows[x].contains(v)).count())
    }

    /// The cover pairs of the poset: the unique minimal relation whose
    /// transitive closure is the full order.
    pub fn transitive_reduction(&self) -> CoverSet {
        let down = self.transpose_rows();
        let mut pairs = Vec::new();
        for x in 0..self.n {
            for y in self.rows[x].ones() {
                if self.rows[x].is_disjoint(&down[y]) {
                    pairs.push((x, y));
                }
            }
        }
        CoverSet { pairs }
    }

    /// Whether `x < y` with nothing strictly between.
    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        assert!(x < self.n && y < self.n, "element id out of range");
        self.rows[x].contains(y) && self.rows[x].ones().all(|z| !self.rows[z].contains(y))
    }

    /// Removes the single relation `x < y`, which must be a cover pair;
    /// removing any other relation would break transitivity.
    pub fn remove_relation(&self, x: usize, y: usize) -> Result<Poset> {
        check_id(x, self.n)?;
        check_id(y, self.n)?;
        if !self.rows[x].contains(y) {
            return Err(Error::NotARelation { x, y });
        }
        if let Some(z) = self.rows[x].ones().find(|&z| self.rows[z].contains(y)) {
            return Err(Error::NotACover { x, y, z });
        }
        let mut rows = self.rows.clone();
        rows[x].remove(y);
        debug_assert!(validate_rows(&rows).is_ok());
        Ok(Poset {
            n: self.n,
            rows,
            m: self.m - 1,
        })
    }

    /// Re-inserts a relation known to keep the order valid (trace replay).
    pub(crate) fn insert_relation_unchecked(&mut self, x: usize, y: usize) {
        debug_assert!(!self.rows[x].contains(y));
        self.rows[x].insert(y);
        self.m += 1;
    }

    /// A longest chain, listed top-down, computed over the cover DAG.
    /// Ties are broken by the smallest element id at each step.
    pub fn longest_chain(&self) -> Result<Chain> {
        if self.n == 0 {
            return Err(Error::EmptyPoset);
        }
        let covers = self.transitive_reduction();
        let mut down_covers = vec![Vec::new(); self.n];
        let mut up_covers = vec![Vec::new(); self.n];
        for (x, y) in covers.iter() {
            down_covers[y].push(x);
            up_covers[x].push(y);
        }

        // Longest downward cover path ending at each element, bottom-up.
        let mut depth = vec![0usize; self.n];
        let mut pending: Vec<usize> = (0..self.n).map(|v| down_covers[v].len()).collect();
        let mut queue: Vec<usize> = (0..self.n).filter(|&v| pending[v] == 0).collect();
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            depth[v] = 1 + down_covers[v].iter().map(|&x| depth[x]).max().unwrap_or(0);
            for &w in &up_covers[v] {
                pending[w] -= 1;
                if pending[w] == 0 {
                    queue.push(w);
                }
            }
        }
        debug_assert_eq!(head, self.n, "cover DAG of a valid poset is acyclic");

        let t = depth.iter().copied().max().expect("n >= 1");
        let top = (0..self.n)
            .find(|&v| depth[v] == t)
            .expect("some element attains the maximum depth");
        let mut elements = vec![top];
        let mut current = top;
        for remaining in (1..t).rev() {
            let next = down_covers[current]
                .iter()
                .copied()
                .filter(|&x| depth[x] == remaining)
                .min()
                .expect("a deepest path continues downward");
            elements.push(next);
            current = next;
        }
        Ok(Chain { elements })
    }

    /// Whether every element above a member of `set` is also a member.
    pub fn is_upward_closed(&self, set: &[usize]) -> Result<bool> {
        let bits = self.subset_from_ids(set)?;
        Ok(bits.ones().all(|x| self.rows[x].is_subset(&bits)))
    }

    /// Whether every element below a member of `set` is also a member.
    pub fn is_downward_closed(&self, set: &[usize]) -> Result<bool> {
        let bits = self.subset_from_ids(set)?;
        Ok((0..self.n).all(|x| bits.contains(x) || self.rows[x].is_disjoint(&bits)))
    }

    pub(crate) fn subset_from_ids(&self, ids: &[usize]) -> Result<FixedBitSet> {
        let mut bits = FixedBitSet::with_capacity(self.n);
        for &id in ids {
            check_id(id, self.n)?;
            bits.insert(id);
        }
        Ok(bits)
    }

    /// `down[y]` = every `x` with `x < y`.
    pub(crate) fn transpose_rows(&self) -> Vec<FixedBitSet> {
        let mut down = empty_rows(self.n);
        for x in 0..self.n {
            for y in self.rows[x].ones() {
                down[y].insert(x);
            }
        }
        down
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset {{ n: {}, m: {}, rel: [", self.n, self.m)?;
        for (i, (x, y)) in self.relations().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        write!(f, "] }}")
    }
}

fn empty_rows(n: usize) -> Vec<FixedBitSet> {
    (0..n).map(|_| FixedBitSet::with_capacity(n)).collect()
}

fn check_id(id: usize, n: usize) -> Result<()> {
    if id < n {
        Ok(())
    } else {
        Err(Error::IdOutOfRange { id, n })
    }
}

/// Checks the strict-order axioms, returning the first violation found
/// (scanning elements in increasing id order).
fn validate_rows(rows: &[FixedBitSet]) -> Result<()> {
    for (x, row) in rows.iter().enumerate() {
        if row.contains(x) {
            return Err(Error::ReflexivePair { x });
        }
    }
    for (x, row) in rows.iter().enumerate() {
        for y in row.ones() {
            if rows[y].contains(x) {
                return Err(Error::AntisymmetryViolation { x, y });
            }
            if !rows[y].is_subset(row) {
                let z = rows[y]
                    .difference(row)
                    .next()
                    .expect("a non-subset has a witness");
                return Err(Error::TransitivityViolation { x, y, z });
            }
        }
    }
    Ok(())
}

/// Transitive closure of a DAG given by sorted adjacency lists.
/// Nodes are processed in DFS post-order so every successor row is complete
/// before it is merged; a back edge yields a `CycleDetected` witness.
fn close_dag(n: usize, adjacency: &[Vec<usize>]) -> Result<Vec<FixedBitSet>> {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;

    let mut rows = empty_rows(n);
    let mut color = vec![WHITE; n];
    let mut order = Vec::with_capacity(n);

    for start in 0..n {
        if color[start] != WHITE {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = GRAY;
        while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
            if *idx < adjacency[v].len() {
                let w = adjacency[v][*idx];
                *idx += 1;
                match color[w] {
                    WHITE => {
                        color[w] = GRAY;
                        stack.push((w, 0));
                    }
                    GRAY => {
                        let from = stack
                            .iter()
                            .position(|&(u, _)| u == w)
                            .expect("gray node is on the stack");
                        let cycle = stack[from..].iter().map(|&(u, _)| u).collect();
                        return Err(Error::CycleDetected { cycle });
                    }
                    _ => {}
                }
            } else {
                color[v] = BLACK;
                order.push(v);
                stack.pop();
            }
        }
    }

    for &v in &order {
        // successors finished earlier, so their rows are already closed
        let mut row = std::mem::take(&mut rows[v]);
        for &w in &adjacency[v] {
            row.insert(w);
            row.union_with(&rows[w]);
        }
        rows[v] = row;
    }
    Ok(rows)
}
