//! Rook placements in one-line notation and the combinatorics of the
//! Bruhat-Chevalley-Renner order on them.
//!
//! An `n x n` partial permutation matrix is stored column-wise: entry `j` of
//! the one-line sequence is the row of the 1 in column `j` (1-based), or `0`
//! when column `j` is empty. So the matrix with 1s at `(3,1)` and `(4,3)` is
//! `(3,0,4,0)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard ceiling on `n`; one-line entries are stored as `u8`.
pub const MAX_DIMENSION: usize = 12;

/// An element of the rook monoid `R_n` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct RookElement {
    entries: Box<[u8]>,
}

/// A cover label `(a, b)`, ordered lexicographically. The second coordinate
/// is never zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[u8; 2]", into = "[u8; 2]")]
pub struct EdgeLabel {
    first: u8,
    second: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverType {
    /// One entry is raised, everything else fixed.
    Type1,
    /// Two entries are swapped into decreasing position.
    Type2,
}

/// An upper cover of some element together with its label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub target: RookElement,
    pub label: EdgeLabel,
    pub kind: CoverType,
}

impl EdgeLabel {
    pub fn new(first: u8, second: u8) -> Result<Self> {
        if second == 0 {
            return Err(Error::ZeroLabelSecond { first, second });
        }
        Ok(EdgeLabel { first, second })
    }

    pub fn first(self) -> u8 {
        self.first
    }

    pub fn second(self) -> u8 {
        self.second
    }
}

impl TryFrom<[u8; 2]> for EdgeLabel {
    type Error = Error;

    fn try_from(pair: [u8; 2]) -> Result<Self> {
        EdgeLabel::new(pair[0], pair[1])
    }
}

impl From<EdgeLabel> for [u8; 2] {
    fn from(label: EdgeLabel) -> Self {
        [label.first, label.second]
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

impl fmt::Display for CoverType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverType::Type1 => f.write_str("type1"),
            CoverType::Type2 => f.write_str("type2"),
        }
    }
}

impl RookElement {
    /// Validates a one-line sequence: values in `0..=n`, nonzero values
    /// pairwise distinct.
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        let n = entries.len();
        let invalid = |reason: String| Error::InvalidElement {
            entries: entries.iter().map(|&v| u32::from(v)).collect(),
            reason,
        };
        if n == 0 {
            return Err(invalid("empty sequence".into()));
        }
        if n > MAX_DIMENSION {
            return Err(invalid(format!("n = {n} exceeds {MAX_DIMENSION}")));
        }
        let mut seen = [false; MAX_DIMENSION + 1];
        for &v in &entries {
            let v = usize::from(v);
            if v > n {
                return Err(invalid(format!("value {v} is larger than n = {n}")));
            }
            if v != 0 {
                if seen[v] {
                    return Err(invalid(format!("value {v} appears twice")));
                }
                seen[v] = true;
            }
        }
        Ok(RookElement {
            entries: entries.into_boxed_slice(),
        })
    }

    fn from_raw(entries: Vec<u8>) -> Self {
        debug_assert!(RookElement::new(entries.clone()).is_ok());
        RookElement {
            entries: entries.into_boxed_slice(),
        }
    }

    /// The empty placement `(0,...,0)`, bottom of `R_n`.
    pub fn zero(n: usize) -> Result<Self> {
        RookElement::new(vec![0; n])
    }

    pub fn identity(n: usize) -> Result<Self> {
        RookElement::new((1..=n).map(|v| v as u8).collect())
    }

    /// `(n, n-1, ..., 1)`, top of `R_n`.
    pub fn longest(n: usize) -> Result<Self> {
        RookElement::new((1..=n).rev().map(|v| v as u8).collect())
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Reads the one-line sequence off a 0/1 matrix given as rows.
    pub fn from_matrix(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("matrix is empty".into()));
        }
        let mut entries = vec![0u8; n];
        let mut row_used = vec![false; n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &cell) in row.iter().enumerate() {
                match cell {
                    0 => {}
                    1 => {
                        if row_used[i] {
                            return Err(Error::InvalidMatrix(format!(
                                "row {} has more than one 1",
                                i + 1
                            )));
                        }
                        if entries[j] != 0 {
                            return Err(Error::InvalidMatrix(format!(
                                "column {} has more than one 1",
                                j + 1
                            )));
                        }
                        row_used[i] = true;
                        entries[j] = (i + 1) as u8;
                    }
                    other => {
                        return Err(Error::InvalidMatrix(format!(
                            "entry ({},{}) is {other}, expected 0 or 1",
                            i + 1,
                            j + 1
                        )))
                    }
                }
            }
        }
        RookElement::new(entries)
    }

    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.n();
        let mut rows = vec![vec![0u8; n]; n];
        for (j, &a) in self.entries.iter().enumerate() {
            if a != 0 {
                rows[usize::from(a) - 1][j] = 1;
            }
        }
        rows
    }

    /// Number of rooks on the board.
    pub fn matrix_rank(&self) -> usize {
        self.entries.iter().filter(|&&a| a != 0).count()
    }

    pub fn is_permutation(&self) -> bool {
        self.matrix_rank() == self.n()
    }

    /// Pairs `i < j` with `a_i > a_j` (zeros included).
    pub fn inv(&self) -> usize {
        let a = &self.entries;
        (0..a.len())
            .map(|i| a[i + 1..].iter().filter(|&&b| a[i] > b).count())
            .sum()
    }

    /// Coinversion pairs `(i, j)`, 1-based, with `i < j` and `0 < a_i < a_j`.
    pub fn coinversion_pairs(&self) -> Vec<(usize, usize)> {
        let a = &self.entries;
        let mut pairs = Vec::new();
        for i in 0..a.len() {
            if a[i] == 0 {
                continue;
            }
            for j in i + 1..a.len() {
                if a[i] < a[j] {
                    pairs.push((i + 1, j + 1));
                }
            }
        }
        pairs
    }

    pub fn coinv(&self) -> usize {
        self.coinversion_pairs().len()
    }

    /// `sum a_i* - coinv`, where `a_i* = a_i + n - i` for nonzero `a_i`.
    pub fn length_by_coinversions(&self) -> usize {
        let n = self.n();
        let starred: usize = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(idx, &a)| usize::from(a) + n - (idx + 1))
            .sum();
        starred - self.coinv()
    }

    /// `sum a_i + inv`.
    pub fn length_by_inversions(&self) -> usize {
        self.entries.iter().map(|&a| usize::from(a)).sum::<usize>() + self.inv()
    }

    /// The rank `l(x)` of `x` in `R_n`. Both closed forms are evaluated and
    /// must agree.
    pub fn length(&self) -> usize {
        let by_coinv = self.length_by_coinversions();
        let by_inv = self.length_by_inversions();
        assert_eq!(
            by_coinv, by_inv,
            "length formulas disagree on {self}: {by_coinv} vs {by_inv}"
        );
        by_inv
    }

    fn check_same_n(&self, other: &RookElement) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// Decides whether `y` covers `x`, and by which type.
    pub fn is_cover(&self, y: &RookElement) -> Result<Option<CoverType>> {
        self.check_same_n(y)?;
        let a = &self.entries;
        let b = &y.entries;
        let diff: Vec<usize> = (0..a.len()).filter(|&k| a[k] != b[k]).collect();
        let verdict = match *diff.as_slice() {
            [i] => (a[i] < b[i] && raise_is_cover(a, i, b[i])).then_some(CoverType::Type1),
            [i, j] => (a[i] == b[j] && a[j] == b[i] && a[i] < a[j] && swap_is_cover(a, i, j))
                .then_some(CoverType::Type2),
            _ => None,
        };
        Ok(verdict)
    }

    /// The label of the cover `x < y`: `(a_i, b_i)` for type 1 and
    /// `(a_i, a_j)` for type 2.
    pub fn label(&self, y: &RookElement) -> Result<EdgeLabel> {
        let not_cover = || Error::NotACover {
            from: self.to_string(),
            to: y.to_string(),
        };
        let kind = self.is_cover(y)?.ok_or_else(not_cover)?;
        let a = &self.entries;
        let b = &y.entries;
        let mut diff = (0..a.len()).filter(|&k| a[k] != b[k]);
        let i = diff.next().ok_or_else(not_cover)?;
        match kind {
            CoverType::Type1 => EdgeLabel::new(a[i], b[i]),
            CoverType::Type2 => {
                let j = diff.next().ok_or_else(not_cover)?;
                EdgeLabel::new(a[i], a[j])
            }
        }
    }

    /// All upper covers, sorted by label and then by one-line sequence.
    pub fn covers_of(&self) -> Vec<Cover> {
        let a = &self.entries;
        let n = a.len();
        let mut used = [false; MAX_DIMENSION + 1];
        for &v in a.iter() {
            used[usize::from(v)] = true;
        }
        let mut out = Vec::new();
        for i in 0..n {
            for value in a[i] + 1..=n as u8 {
                if used[usize::from(value)] || !raise_is_cover(a, i, value) {
                    continue;
                }
                let mut next = a.to_vec();
                next[i] = value;
                out.push(Cover {
                    target: RookElement::from_raw(next),
                    label: EdgeLabel {
                        first: a[i],
                        second: value,
                    },
                    kind: CoverType::Type1,
                });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if a[i] < a[j] && swap_is_cover(a, i, j) {
                    let mut next = a.to_vec();
                    next.swap(i, j);
                    out.push(Cover {
                        target: RookElement::from_raw(next),
                        label: EdgeLabel {
                            first: a[i],
                            second: a[j],
                        },
                        kind: CoverType::Type2,
                    });
                }
            }
        }
        out.sort_by(|l, r| (l.label, &l.target).cmp(&(r.label, &r.target)));
        out
    }

    /// Elements reachable by one generating move of the order: raise one
    /// entry to any unused larger value, or swap an ascending pair
    /// `a_i < a_j` (`i < j`) into descending position. Not necessarily covers.
    pub fn generator_relations(&self) -> Vec<RookElement> {
        let a = &self.entries;
        let n = a.len();
        let mut used = [false; MAX_DIMENSION + 1];
        for &v in a.iter() {
            used[usize::from(v)] = true;
        }
        let mut out = Vec::new();
        for i in 0..n {
            for value in a[i] + 1..=n as u8 {
                if !used[usize::from(value)] {
                    let mut next = a.to_vec();
                    next[i] = value;
                    out.push(RookElement::from_raw(next));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if a[i] < a[j] {
                    let mut next = a.to_vec();
                    next.swap(i, j);
                    out.push(RookElement::from_raw(next));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Raising `a[i]` to `value` adds exactly one to the length iff every value
/// strictly between `a[i]` and `value` already sits left of `i`. When
/// `a[i] == 0` every position right of `i` must also be occupied, since each
/// empty column to the right turns into a new inversion.
fn raise_is_cover(a: &[u8], i: usize, value: u8) -> bool {
    let old = a[i];
    let left = &a[..i];
    let between_left = (old + 1..value).all(|v| left.contains(&v));
    between_left && (old != 0 || a[i + 1..].iter().all(|&v| v != 0))
}

/// Swapping an ascending pair `a[i] < a[j]` adds exactly one to the length
/// iff every entry strictly between positions `i` and `j` is below `a[i]` or
/// above `a[j]`.
fn swap_is_cover(a: &[u8], i: usize, j: usize) -> bool {
    a[i + 1..j].iter().all(|&s| s < a[i] || s > a[j])
}

/// `|R_n| = sum_k C(n,k)^2 k!`.
pub fn rook_count(n: usize) -> u128 {
    let mut total = 0u128;
    for k in 0..=n {
        let mut binom = 1u128;
        for t in 0..k {
            binom = binom * (n - t) as u128 / (t + 1) as u128;
        }
        let fact: u128 = (1..=k as u128).product();
        total += binom * binom * fact;
    }
    total
}

/// Every element of `R_n`, sorted by `(length, one-line sequence)`.
pub fn enumerate(n: usize, bound: usize) -> Result<Vec<RookElement>> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if n > bound || n > MAX_DIMENSION {
        return Err(Error::BoundExceeded {
            n,
            bound: bound.min(MAX_DIMENSION),
        });
    }
    let mut out = Vec::with_capacity(rook_count(n) as usize);
    let mut current = vec![0u8; n];
    let mut used = vec![false; n + 1];
    fill(0, &mut current, &mut used, &mut out);
    sort_canonical(&mut out);
    Ok(out)
}

fn fill(pos: usize, current: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<RookElement>) {
    if pos == current.len() {
        out.push(RookElement::from_raw(current.clone()));
        return;
    }
    current[pos] = 0;
    fill(pos + 1, current, used, out);
    for v in 1..used.len() {
        if !used[v] {
            used[v] = true;
            current[pos] = v as u8;
            fill(pos + 1, current, used, out);
            used[v] = false;
        }
    }
    current[pos] = 0;
}

/// Sorts by `(length, one-line sequence)`.
pub fn sort_canonical(elements: &mut [RookElement]) {
    elements.sort_by_cached_key(|x| (x.length(), x.clone()));
}

impl TryFrom<Vec<u32>> for RookElement {
    type Error = Error;

    fn try_from(values: Vec<u32>) -> Result<Self> {
        let entries = values
            .iter()
            .map(|&v| u8::try_from(v))
            .collect::<Result<Vec<u8>, _>>()
            .map_err(|_| Error::InvalidElement {
                entries: values.clone(),
                reason: "value out of range".into(),
            })?;
        RookElement::new(entries)
    }
}

impl From<RookElement> for Vec<u32> {
    fn from(x: RookElement) -> Self {
        x.entries.iter().map(|&v| u32::from(v)).collect()
    }
}

/// Parses `"3,0,4,0"` (parentheses and whitespace tolerated).
impl FromStr for RookElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let values = trimmed
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad entry {part:?} in {s:?}: {e}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        RookElement::try_from(values)
    }
}

impl fmt::Display for RookElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, v) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for RookElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
