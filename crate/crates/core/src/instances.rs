//! Concrete posets: the rook monoid `R_n`, the symmetric group `S_n`, and
//! the rank-level slices `R_{n,k}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::GradedPoset;
use crate::rook::{self, EdgeLabel, RookElement};

pub type RookPoset = GradedPoset<RookElement>;

/// Largest `n` built without an explicit override. `|R_6| = 13327`.
pub const DEFAULT_BOUND: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Rook,
    Symmetric,
    RookRankLevel,
}

/// Which poset to build; parses from `rook:n`, `sym:n` or `rook:n:k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InstanceSpec {
    family: Family,
    n: usize,
    k: Option<usize>,
}

impl InstanceSpec {
    pub fn rook(n: usize) -> Result<Self> {
        Self::new(Family::Rook, n, None)
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        Self::new(Family::Symmetric, n, None)
    }

    pub fn rook_rank_level(n: usize, k: usize) -> Result<Self> {
        Self::new(Family::RookRankLevel, n, Some(k))
    }

    pub fn new(family: Family, n: usize, k: Option<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if n > rook::MAX_DIMENSION {
            return Err(Error::BoundExceeded {
                n,
                bound: rook::MAX_DIMENSION,
            });
        }
        match (family, k) {
            (Family::RookRankLevel, Some(k)) if k <= n => {}
            (Family::RookRankLevel, Some(k)) => {
                return Err(Error::Parse(format!("rank level k = {k} is above n = {n}")))
            }
            (Family::RookRankLevel, None) => {
                return Err(Error::Parse("rank level needs k".into()))
            }
            (_, Some(_)) => return Err(Error::Parse("only rank levels take k".into())),
            (_, None) => {}
        }
        Ok(InstanceSpec { family, n, k })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn build(&self, bound: usize) -> Result<RookPoset> {
        match (self.family, self.k) {
            (Family::Rook, _) => build_rook(self.n, bound),
            (Family::Symmetric, _) => build_symmetric(self.n, bound),
            (Family::RookRankLevel, Some(k)) => build_rook_rank_level(self.n, k, bound),
            (Family::RookRankLevel, None) => unreachable!("validated in InstanceSpec::new"),
        }
    }
}

impl FromStr for InstanceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad instance {s:?}; expected rook:n, sym:n or rook:n:k"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["rook", n] => InstanceSpec::rook(num(n)?),
            ["sym", n] => InstanceSpec::symmetric(num(n)?),
            ["rook", n, k] => InstanceSpec::rook_rank_level(num(n)?, num(k)?),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.family, self.k) {
            (Family::Rook, _) => write!(f, "rook:{}", self.n),
            (Family::Symmetric, _) => write!(f, "sym:{}", self.n),
            (Family::RookRankLevel, k) => write!(f, "rook:{}:{}", self.n, k.unwrap_or(0)),
        }
    }
}

impl Serialize for InstanceSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for InstanceSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `R_n` under the Bruhat-Chevalley-Renner order, graded by length and
/// labeled by `(a_i, b_i)` / `(a_i, a_j)`.
pub fn build_rook(n: usize, bound: usize) -> Result<RookPoset> {
    let elements = rook::enumerate(n, bound)?;
    let poset = GradedPoset::build(
        elements,
        |x| x.length() as u32,
        |x| {
            x.covers_of()
                .into_iter()
                .map(|c| (c.target, c.label))
                .collect()
        },
    )?;
    let bottom = poset.bottom().ok_or(Error::Unbounded)?;
    let top = poset.top().ok_or(Error::Unbounded)?;
    assert_eq!(poset.element(bottom), &RookElement::zero(n)?);
    assert_eq!(poset.element(top), &RookElement::longest(n)?);
    assert_eq!(poset.rank(bottom), 0);
    assert_eq!(poset.rank(top) as usize, n * n);
    Ok(poset)
}

/// `S_n` under Bruhat order, graded by inversions (identity at rank 0),
/// with the transposition label `(a_i, a_j)`.
pub fn build_symmetric(n: usize, bound: usize) -> Result<RookPoset> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if n > bound || n > rook::MAX_DIMENSION {
        return Err(Error::BoundExceeded { n, bound });
    }
    let mut elements = Vec::new();
    let mut values: Vec<u8> = (1..=n as u8).collect();
    permutations(&mut values, 0, &mut elements);
    elements.sort_by_cached_key(|w: &RookElement| (w.inv(), w.clone()));
    GradedPoset::build(elements, |w| w.inv() as u32, bruhat_covers)
}

fn permutations(values: &mut Vec<u8>, start: usize, out: &mut Vec<RookElement>) {
    if start == values.len() {
        out.push(RookElement::new(values.clone()).expect("a permutation is a rook element"));
        return;
    }
    for i in start..values.len() {
        values.swap(start, i);
        permutations(values, start + 1, out);
        values.swap(start, i);
    }
}

/// Transpositions of an ascending pair `w_i < w_j` with no value of
/// `(w_i, w_j)` strictly between positions `i` and `j`.
fn bruhat_covers(w: &RookElement) -> Vec<(RookElement, EdgeLabel)> {
    let a = w.entries();
    let mut out = Vec::new();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] < a[j] && a[i + 1..j].iter().all(|&s| s < a[i] || s > a[j]) {
                let mut next = a.to_vec();
                next.swap(i, j);
                let target = RookElement::new(next).expect("swap keeps a permutation");
                out.push((target, EdgeLabel::new(a[i], a[j]).expect("a[j] > 0")));
            }
        }
    }
    out
}

/// The induced subposet of `R_n` on elements with exactly `k` rooks.
pub fn build_rook_rank_level(n: usize, k: usize, bound: usize) -> Result<RookPoset> {
    if k > n {
        return Err(Error::Parse(format!("rank level k = {k} is above n = {n}")));
    }
    build_rook(n, bound)?.subposet(|x| x.matrix_rank() == k)
}
