//! Finite graded posets stored as labeled Hasse diagrams.
//!
//! Elements are addressed by index. Every cover edge carries an optional
//! [`EdgeLabel`]; chain queries (lex-first chain, increasing and decreasing
//! chain counts, chain enumeration) need labels, order queries and the
//! Möbius function do not.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::hash::Hash;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::rook::EdgeLabel;

/// Default memo budget for reachability sets and Möbius rows.
pub const DEFAULT_MEMO_BUDGET_BYTES: usize = 512 << 20;

/// Default cap on the number of chains `all_maximal_chains` will produce.
pub const DEFAULT_CHAIN_CUTOFF: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub target: usize,
    pub label: Option<EdgeLabel>,
}

/// Raw parts of a poset before validation.
#[derive(Clone, Debug)]
pub struct PosetParts<T> {
    pub elements: Vec<T>,
    pub ranks: Vec<u32>,
    /// Upper covers of each element.
    pub up: Vec<Vec<Edge>>,
    pub graded: bool,
}

#[derive(Debug)]
pub struct GradedPoset<T> {
    elements: Vec<T>,
    ranks: Vec<u32>,
    up: Vec<Vec<Edge>>,
    /// Lower covers; `Edge::target` is the element below.
    down: Vec<Vec<Edge>>,
    graded: bool,
    index: HashMap<T, usize>,
    memo: Memo,
}

#[derive(Debug)]
struct Memo {
    budget_bytes: usize,
    cache_reach: bool,
    cache_mobius: bool,
    up_sets: Vec<OnceLock<FixedBitSet>>,
    down_sets: Vec<OnceLock<FixedBitSet>>,
    mobius_rows: Vec<OnceLock<Vec<i64>>>,
}

impl Memo {
    fn new(len: usize, budget_bytes: usize) -> Self {
        let reach_bytes = 2 * len * len.div_ceil(8);
        let mobius_bytes = len * len * std::mem::size_of::<i64>();
        let cache_reach = reach_bytes <= budget_bytes;
        let cache_mobius = cache_reach && reach_bytes + mobius_bytes <= budget_bytes;
        let lazy = |on: bool| if on { len } else { 0 };
        Memo {
            budget_bytes,
            cache_reach,
            cache_mobius,
            up_sets: (0..lazy(cache_reach)).map(|_| OnceLock::new()).collect(),
            down_sets: (0..lazy(cache_reach)).map(|_| OnceLock::new()).collect(),
            mobius_rows: (0..lazy(cache_mobius)).map(|_| OnceLock::new()).collect(),
        }
    }
}

/// The closed interval `[bottom, top]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    bottom: usize,
    top: usize,
    /// Sorted by `(rank, index)`.
    members: Vec<usize>,
    mask: FixedBitSet,
}

impl Interval {
    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, element: usize) -> bool {
        self.mask.contains(element)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A maximal chain together with its label sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    pub vertices: Vec<usize>,
    pub labels: Vec<EdgeLabel>,
}

impl Chain {
    pub fn is_weakly_increasing(&self) -> bool {
        self.labels.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.labels.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.labels.windows(2).all(|w| w[0] > w[1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Length2Shape {
    Chain,
    Diamond,
}

/// Möbius values `mu(x, y)` for every comparable pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusTable {
    /// `rows[x]` lists `(y, mu(x, y))` for `y >= x`, ascending in `y`.
    rows: Vec<Vec<(usize, i64)>>,
}

impl MobiusTable {
    pub fn get(&self, x: usize, y: usize) -> Option<i64> {
        let row = self.rows.get(x)?;
        row.binary_search_by_key(&y, |&(t, _)| t)
            .ok()
            .map(|pos| row[pos].1)
    }

    /// `(x, y, mu)` for all comparable pairs, ordered by `x` then `y`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter().map(move |&(y, mu)| (x, y, mu)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<T: Clone + Eq + Hash> GradedPoset<T> {
    /// Builds a labeled graded poset. `rank_fn` assigns ranks and `cover_fn`
    /// lists each element's upper covers with labels; every cover must raise
    /// the rank by exactly one.
    pub fn build<R, C>(elements: Vec<T>, mut rank_fn: R, mut cover_fn: C) -> Result<Self>
    where
        R: FnMut(&T) -> u32,
        C: FnMut(&T) -> Vec<(T, EdgeLabel)>,
    {
        let index = index_elements(&elements)?;
        let ranks: Vec<u32> = elements.iter().map(&mut rank_fn).collect();
        let mut up = Vec::with_capacity(elements.len());
        for element in &elements {
            let mut edges = Vec::new();
            for (target, label) in cover_fn(element) {
                let &t = index.get(&target).ok_or(Error::UnknownIndex(usize::MAX))?;
                edges.push(Edge {
                    target: t,
                    label: Some(label),
                });
            }
            up.push(edges);
        }
        Self::from_parts(PosetParts {
            elements,
            ranks,
            up,
            graded: true,
        })
    }

    /// Validates the parts: unique elements, known edge targets, no
    /// duplicate edges, and (when graded) rank rising by one along covers.
    pub fn from_parts(parts: PosetParts<T>) -> Result<Self> {
        Self::from_parts_with_budget(parts, DEFAULT_MEMO_BUDGET_BYTES)
    }

    pub fn from_parts_with_budget(mut parts: PosetParts<T>, budget_bytes: usize) -> Result<Self> {
        let len = parts.elements.len();
        if parts.ranks.len() != len || parts.up.len() != len {
            return Err(Error::DimensionMismatch {
                left: len,
                right: parts.ranks.len().min(parts.up.len()),
            });
        }
        let index = index_elements(&parts.elements)?;
        for (from, edges) in parts.up.iter_mut().enumerate() {
            sort_edges(edges);
            let mut targets: Vec<usize> = edges.iter().map(|e| e.target).collect();
            targets.sort_unstable();
            if let Some(w) = targets.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateCover { from, to: w[0] });
            }
            for edge in edges.iter() {
                if edge.target >= len {
                    return Err(Error::UnknownIndex(edge.target));
                }
                let (from_rank, to_rank) = (parts.ranks[from], parts.ranks[edge.target]);
                let ok = if parts.graded {
                    to_rank == from_rank + 1
                } else {
                    to_rank > from_rank
                };
                if !ok {
                    return Err(Error::RankGap {
                        from,
                        to: edge.target,
                        from_rank,
                        to_rank,
                    });
                }
            }
        }
        Ok(Self::assemble(parts, index, budget_bytes))
    }

    /// Assembles a poset without checking ranks or edges. Duplicate elements
    /// are still rejected, since lookups depend on them being unique. Used to
    /// build deliberately corrupted posets for mutation testing.
    pub fn from_parts_unchecked(mut parts: PosetParts<T>) -> Result<Self> {
        let index = index_elements(&parts.elements)?;
        for edges in parts.up.iter_mut() {
            sort_edges(edges);
        }
        Ok(Self::assemble(parts, index, DEFAULT_MEMO_BUDGET_BYTES))
    }

    fn assemble(parts: PosetParts<T>, index: HashMap<T, usize>, budget_bytes: usize) -> Self {
        let len = parts.elements.len();
        let mut down: Vec<Vec<Edge>> = vec![Vec::new(); len];
        for (from, edges) in parts.up.iter().enumerate() {
            for edge in edges {
                down[edge.target].push(Edge {
                    target: from,
                    label: edge.label,
                });
            }
        }
        for edges in down.iter_mut() {
            sort_edges(edges);
        }
        GradedPoset {
            elements: parts.elements,
            ranks: parts.ranks,
            up: parts.up,
            down,
            graded: parts.graded,
            index,
            memo: Memo::new(len, budget_bytes),
        }
    }

    pub fn to_parts(&self) -> PosetParts<T> {
        PosetParts {
            elements: self.elements.clone(),
            ranks: self.ranks.clone(),
            up: self.up.clone(),
            graded: self.graded,
        }
    }

    pub fn index_of(&self, element: &T) -> Option<usize> {
        self.index.get(element).copied()
    }

    /// Induced subposet on the elements selected by `predicate`. Covers are
    /// recomputed inside the selection, so an induced cover may be a longer
    /// relation in `self`; such edges are unlabeled, while edges that are
    /// covers of `self` keep their label. Ranks are lengths of longest chains
    /// from a minimal element, and the result is marked ungraded when some
    /// induced cover does not raise that rank by exactly one.
    pub fn subposet<P>(&self, mut predicate: P) -> Result<Self>
    where
        P: FnMut(&T) -> bool,
    {
        let selected: Vec<usize> = (0..self.len())
            .filter(|&i| predicate(&self.elements[i]))
            .collect();
        if selected.is_empty() {
            return Err(Error::EmptySelection);
        }
        let mut in_selection = FixedBitSet::with_capacity(self.len());
        let mut local = vec![usize::MAX; self.len()];
        for (pos, &i) in selected.iter().enumerate() {
            in_selection.insert(i);
            local[i] = pos;
        }

        let mut up: Vec<Vec<Edge>> = vec![Vec::new(); selected.len()];
        for (pos, &x) in selected.iter().enumerate() {
            let mut above = self.up_set(x);
            above.intersect_with(&in_selection);
            above.set(x, false);
            for y in above.ones() {
                let mut between = self.down_set(y);
                between.intersect_with(&above);
                if between.count_ones(..) == 1 {
                    let label = self.up[x]
                        .iter()
                        .find(|e| e.target == y)
                        .and_then(|e| e.label);
                    up[pos].push(Edge {
                        target: local[y],
                        label,
                    });
                }
            }
        }

        // Parent ranks strictly increase along the order, so visiting in
        // parent-rank order is a topological order.
        let mut order: Vec<usize> = (0..selected.len()).collect();
        order.sort_by_key(|&pos| (self.ranks[selected[pos]], pos));
        let mut ranks = vec![0u32; selected.len()];
        for &pos in &order {
            for edge in &up[pos] {
                ranks[edge.target] = ranks[edge.target].max(ranks[pos] + 1);
            }
        }
        let graded = up
            .iter()
            .enumerate()
            .all(|(pos, edges)| edges.iter().all(|e| ranks[e.target] == ranks[pos] + 1));

        Self::from_parts_with_budget(
            PosetParts {
                elements: selected.iter().map(|&i| self.elements[i].clone()).collect(),
                ranks,
                up,
                graded,
            },
            self.memo.budget_bytes,
        )
    }
}

fn index_elements<T: Clone + Eq + Hash>(elements: &[T]) -> Result<HashMap<T, usize>> {
    let mut index = HashMap::with_capacity(elements.len());
    for (i, element) in elements.iter().enumerate() {
        if let Some(first) = index.insert(element.clone(), i) {
            return Err(Error::DuplicateElement { first, second: i });
        }
    }
    Ok(index)
}

fn sort_edges(edges: &mut [Edge]) {
    edges.sort_by_key(|a| (a.label, a.target));
}

impl<T> GradedPoset<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &T {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn rank(&self, i: usize) -> u32 {
        self.ranks[i]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn up_covers(&self, i: usize) -> &[Edge] {
        &self.up[i]
    }

    pub fn down_covers(&self, i: usize) -> &[Edge] {
        &self.down[i]
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn edge_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    /// Label of the cover `from -> to`, if that edge exists and is labeled.
    pub fn edge_label(&self, from: usize, to: usize) -> Option<EdgeLabel> {
        self.up[from]
            .iter()
            .find(|e| e.target == to)
            .and_then(|e| e.label)
    }

    /// The unique element with no lower covers, if there is exactly one.
    pub fn bottom(&self) -> Option<usize> {
        unique(0..self.len(), |i| self.down[i].is_empty())
    }

    pub fn top(&self) -> Option<usize> {
        unique(0..self.len(), |i| self.up[i].is_empty())
    }

    /// Elements `>= x`.
    pub fn up_set(&self, x: usize) -> FixedBitSet {
        if self.memo.cache_reach {
            self.cached_up(x).clone()
        } else {
            self.search(x, &self.up)
        }
    }

    /// Elements `<= y`.
    pub fn down_set(&self, y: usize) -> FixedBitSet {
        if self.memo.cache_reach {
            self.cached_down(y).clone()
        } else {
            self.search(y, &self.down)
        }
    }

    fn cached_up(&self, x: usize) -> &FixedBitSet {
        self.memo.up_sets[x].get_or_init(|| {
            let mut set = FixedBitSet::with_capacity(self.len());
            set.insert(x);
            for edge in &self.up[x] {
                set.union_with(self.cached_up(edge.target));
            }
            set
        })
    }

    fn cached_down(&self, y: usize) -> &FixedBitSet {
        self.memo.down_sets[y].get_or_init(|| {
            let mut set = FixedBitSet::with_capacity(self.len());
            set.insert(y);
            for edge in &self.down[y] {
                set.union_with(self.cached_down(edge.target));
            }
            set
        })
    }

    fn search(&self, start: usize, adjacency: &[Vec<Edge>]) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(u) = stack.pop() {
            for edge in &adjacency[u] {
                if !seen.put(edge.target) {
                    stack.push(edge.target);
                }
            }
        }
        seen
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        if x == y {
            return true;
        }
        if self.ranks[x] >= self.ranks[y] {
            return false;
        }
        if self.memo.cache_reach {
            self.cached_up(x).contains(y)
        } else {
            self.search(x, &self.up).contains(y)
        }
    }

    /// Number of pairs `x < y`.
    pub fn count_strict_pairs(&self) -> u64 {
        (0..self.len())
            .map(|x| self.up_set(x).count_ones(..) as u64 - 1)
            .sum()
    }

    pub fn interval(&self, x: usize, y: usize) -> Result<Interval> {
        if !self.leq(x, y) {
            return Err(Error::Incomparable { bottom: x, top: y });
        }
        let mut mask = self.up_set(x);
        mask.intersect_with(&self.down_set(y));
        let mut members: Vec<usize> = mask.ones().collect();
        members.sort_by_key(|&m| (self.ranks[m], m));
        Ok(Interval {
            bottom: x,
            top: y,
            members,
            mask,
        })
    }

    /// Rank difference between the endpoints of `iv`.
    pub fn interval_length(&self, iv: &Interval) -> u32 {
        self.ranks[iv.top] - self.ranks[iv.bottom]
    }

    fn require_graded(&self) -> Result<()> {
        if self.graded {
            Ok(())
        } else {
            Err(Error::Ungraded)
        }
    }

    /// Labeled up-edges of `u` that stay inside `iv`.
    fn inner_edges<'a>(
        &'a self,
        iv: &'a Interval,
        u: usize,
    ) -> impl Iterator<Item = Result<(usize, EdgeLabel)>> + 'a {
        self.up[u]
            .iter()
            .filter(move |e| iv.contains(e.target))
            .map(move |e| {
                e.label.map(|l| (e.target, l)).ok_or(Error::Unlabeled {
                    from: u,
                    to: e.target,
                })
            })
    }

    /// The maximal chain of `iv` whose label sequence is lexicographically
    /// smallest. Each member remembers its best first step; ties between
    /// equal labels are broken by comparing the remembered suffixes in full.
    pub fn lex_first_chain(&self, iv: &Interval) -> Result<Chain> {
        self.require_graded()?;
        let mut best: HashMap<usize, (EdgeLabel, usize)> = HashMap::with_capacity(iv.len());
        for &u in iv.members.iter().rev() {
            if u == iv.top {
                continue;
            }
            let mut choice: Option<(EdgeLabel, usize)> = None;
            for edge in self.inner_edges(iv, u) {
                let candidate = edge.map(|(v, l)| (l, v))?;
                let better = match choice {
                    None => true,
                    Some(current) => {
                        compare_steps(candidate, current, &best, iv.top) == Ordering::Less
                    }
                };
                if better {
                    choice = Some(candidate);
                }
            }
            if let Some(c) = choice {
                best.insert(u, c);
            }
        }
        let mut chain = Chain {
            vertices: vec![iv.bottom],
            labels: Vec::new(),
        };
        let mut u = iv.bottom;
        while u != iv.top {
            let &(label, v) = best.get(&u).ok_or(Error::Incomparable {
                bottom: iv.bottom,
                top: iv.top,
            })?;
            chain.labels.push(label);
            chain.vertices.push(v);
            u = v;
        }
        Ok(chain)
    }

    /// Counts maximal chains of `iv` whose consecutive labels `(l, l')`
    /// all satisfy `accept(l, l')`, without enumerating chains.
    pub fn count_chains_by<F>(&self, iv: &Interval, accept: F) -> Result<u128>
    where
        F: Fn(EdgeLabel, EdgeLabel) -> bool,
    {
        self.require_graded()?;
        if iv.bottom == iv.top {
            return Ok(1);
        }
        // For each member: accepted chains up to the top, bucketed by first label.
        let mut tables: HashMap<usize, Vec<(EdgeLabel, u128)>> = HashMap::with_capacity(iv.len());
        for &u in iv.members.iter().rev() {
            if u == iv.top {
                continue;
            }
            let mut table: Vec<(EdgeLabel, u128)> = Vec::new();
            for edge in self.inner_edges(iv, u) {
                let (v, label) = edge?;
                let count = if v == iv.top {
                    1
                } else {
                    tables.get(&v).map_or(0, |t| {
                        t.iter()
                            .filter(|(next, _)| accept(label, *next))
                            .fold(0u128, |acc, (_, c)| acc.saturating_add(*c))
                    })
                };
                if count == 0 {
                    continue;
                }
                match table.iter_mut().find(|(l, _)| *l == label) {
                    Some(slot) => slot.1 = slot.1.saturating_add(count),
                    None => table.push((label, count)),
                }
            }
            tables.insert(u, table);
        }
        Ok(tables
            .get(&iv.bottom)
            .map_or(0, |t| t.iter().fold(0u128, |acc, (_, c)| acc.saturating_add(*c))))
    }

    /// Maximal chains with weakly increasing labels.
    pub fn count_increasing_chains(&self, iv: &Interval) -> Result<u128> {
        self.count_chains_by(iv, |a, b| a <= b)
    }

    /// Maximal chains with strictly decreasing labels.
    pub fn count_strictly_decreasing_chains(&self, iv: &Interval) -> Result<u128> {
        self.count_chains_by(iv, |a, b| a > b)
    }

    /// Number of maximal chains of `iv`, saturating at `u128::MAX`.
    pub fn count_maximal_chains(&self, iv: &Interval) -> u128 {
        let mut paths: HashMap<usize, u128> = HashMap::with_capacity(iv.len());
        for &u in iv.members.iter().rev() {
            let count = if u == iv.top {
                1
            } else {
                self.up[u]
                    .iter()
                    .filter(|e| iv.contains(e.target))
                    .fold(0u128, |acc, e| {
                        acc.saturating_add(paths.get(&e.target).copied().unwrap_or(0))
                    })
            };
            paths.insert(u, count);
        }
        paths.get(&iv.bottom).copied().unwrap_or(0)
    }

    /// Every maximal chain of `iv`, in lexicographic order of label
    /// sequences. Fails when there are more than `cutoff` chains.
    pub fn all_maximal_chains(&self, iv: &Interval, cutoff: u64) -> Result<Vec<Chain>> {
        self.require_graded()?;
        let total = self.count_maximal_chains(iv);
        if total > u128::from(cutoff) {
            return Err(Error::CutoffExceeded { cutoff });
        }
        let mut out = Vec::with_capacity(total as usize);
        let mut current = Chain {
            vertices: vec![iv.bottom],
            labels: Vec::new(),
        };
        self.extend_chains(iv, &mut current, &mut out)?;
        // Equal labels out of one vertex are ordered by target index, which
        // need not agree with the order of their suffixes.
        out.sort_by(|a, b| a.labels.cmp(&b.labels).then_with(|| a.vertices.cmp(&b.vertices)));
        Ok(out)
    }

    fn extend_chains(&self, iv: &Interval, current: &mut Chain, out: &mut Vec<Chain>) -> Result<()> {
        let u = *current.vertices.last().expect("chain is never empty");
        if u == iv.top {
            out.push(current.clone());
            return Ok(());
        }
        for edge in self.inner_edges(iv, u) {
            let (v, label) = edge?;
            current.vertices.push(v);
            current.labels.push(label);
            self.extend_chains(iv, current, out)?;
            current.vertices.pop();
            current.labels.pop();
        }
        Ok(())
    }

    /// `mu(bottom, z)` for each member `z` of `iv`, in member order.
    pub fn mobius_over(&self, iv: &Interval) -> Vec<(usize, i64)> {
        let mut values: HashMap<usize, i64> = HashMap::with_capacity(iv.len());
        let mut out = Vec::with_capacity(iv.len());
        for &z in &iv.members {
            let mu = if z == iv.bottom {
                1
            } else {
                let mut below = self.down_set(z);
                below.intersect_with(&iv.mask);
                -below
                    .ones()
                    .filter(|&w| w != z)
                    .map(|w| values.get(&w).copied().unwrap_or(0))
                    .sum::<i64>()
            };
            values.insert(z, mu);
            out.push((z, mu));
        }
        out
    }

    /// The Möbius function `mu(x, y)`.
    pub fn mobius(&self, x: usize, y: usize) -> Result<i64> {
        if !self.leq(x, y) {
            return Err(Error::Incomparable { bottom: x, top: y });
        }
        if self.memo.cache_mobius {
            return Ok(self.mobius_row(x)[y]);
        }
        let iv = self.interval(x, y)?;
        Ok(self
            .mobius_over(&iv)
            .last()
            .map(|&(_, mu)| mu)
            .expect("interval contains its top"))
    }

    fn mobius_row(&self, x: usize) -> &[i64] {
        self.memo.mobius_rows[x].get_or_init(|| {
            let above = self.cached_up(x);
            let mut order: Vec<usize> = above.ones().collect();
            order.sort_by_key(|&z| (self.ranks[z], z));
            let mut row = vec![0i64; self.len()];
            for z in order {
                row[z] = if z == x {
                    1
                } else {
                    let mut between = self.cached_down(z).clone();
                    between.intersect_with(above);
                    -between.ones().filter(|&w| w != z).map(|w| row[w]).sum::<i64>()
                };
            }
            row
        })
    }

    /// Möbius values of every comparable pair.
    pub fn mobius_table(&self) -> MobiusTable {
        let rows = (0..self.len())
            .map(|x| {
                if self.memo.cache_mobius {
                    let row = self.mobius_row(x);
                    self.up_set(x).ones().map(|y| (y, row[y])).collect()
                } else {
                    let top_free = self.up_set(x);
                    let mut row: Vec<(usize, i64)> = top_free
                        .ones()
                        .map(|y| (y, self.mobius(x, y).expect("y is above x")))
                        .collect();
                    row.sort_unstable();
                    row
                }
            })
            .collect();
        MobiusTable { rows }
    }

    /// Whether a length-2 interval is a 3-element chain or a 4-element
    /// diamond. Any other size is reported as an error.
    pub fn classify_length2(&self, iv: &Interval) -> Result<Length2Shape> {
        let length = self.interval_length(iv);
        if length != 2 {
            return Err(Error::NotLength2(length));
        }
        match iv.len() {
            3 => Ok(Length2Shape::Chain),
            4 => Ok(Length2Shape::Diamond),
            members => Err(Error::NotChainOrDiamond {
                bottom: iv.bottom,
                top: iv.top,
                members,
            }),
        }
    }

    /// Reduced Euler characteristic of the order complex of the proper part,
    /// i.e. `mu(bottom, top)`.
    pub fn euler_characteristic_reduced(&self) -> Result<i64> {
        let (bottom, top) = self.bottom().zip(self.top()).ok_or(Error::Unbounded)?;
        self.mobius(bottom, top)
    }
}

fn unique(range: std::ops::Range<usize>, mut pred: impl FnMut(usize) -> bool) -> Option<usize> {
    let mut found = None;
    for i in range {
        if pred(i) {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    found
}

/// Compares two first steps `(label, next)` by their full label sequences
/// up to `top`, following the remembered best steps.
fn compare_steps(
    a: (EdgeLabel, usize),
    b: (EdgeLabel, usize),
    best: &HashMap<usize, (EdgeLabel, usize)>,
    top: usize,
) -> Ordering {
    let (mut la, mut ua) = a;
    let (mut lb, mut ub) = b;
    loop {
        match la.cmp(&lb) {
            Ordering::Equal => {}
            other => return other,
        }
        if ua == ub || ua == top || ub == top {
            return Ordering::Equal;
        }
        match (best.get(&ua), best.get(&ub)) {
            (Some(&na), Some(&nb)) => {
                (la, ua) = na;
                (lb, ub) = nb;
            }
            _ => return Ordering::Equal,
        }
    }
}
