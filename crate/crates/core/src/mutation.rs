//! Seeded corruptions of a correct poset, used to show that each
//! verification check can actually fail.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{GradedPoset, PosetParts};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutationKind {
    /// Exchange the labels of two edges that carry different labels.
    SwapLabels,
    /// Remove one cover edge.
    DeleteCover,
    /// Raise the rank of one non-bottom element by one.
    PerturbRank,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mutation {
    pub kind: MutationKind,
    pub seed: u64,
}

impl Mutation {
    pub fn new(kind: MutationKind, seed: u64) -> Self {
        Mutation { kind, seed }
    }

    /// Applies the corruption. The result skips rank validation, so a
    /// perturbed rank survives construction.
    pub fn apply<T: Clone + Eq + std::hash::Hash>(&self, poset: &GradedPoset<T>) -> Result<GradedPoset<T>> {
        let mut parts: PosetParts<T> = poset.to_parts();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let edges: Vec<(usize, usize)> = parts
            .up
            .iter()
            .enumerate()
            .flat_map(|(from, list)| (0..list.len()).map(move |slot| (from, slot)))
            .collect();
        match self.kind {
            MutationKind::SwapLabels => {
                let &(f1, s1) = edges.choose(&mut rng).ok_or(Error::EmptySelection)?;
                let l1 = parts.up[f1][s1].label;
                let others: Vec<(usize, usize)> = edges
                    .iter()
                    .copied()
                    .filter(|&(f, s)| parts.up[f][s].label != l1)
                    .collect();
                let &(f2, s2) = others.choose(&mut rng).ok_or(Error::EmptySelection)?;
                let l2 = parts.up[f2][s2].label;
                parts.up[f1][s1].label = l2;
                parts.up[f2][s2].label = l1;
            }
            MutationKind::DeleteCover => {
                let &(from, slot) = edges.choose(&mut rng).ok_or(Error::EmptySelection)?;
                parts.up[from].remove(slot);
            }
            MutationKind::PerturbRank => {
                let bottom = poset.bottom();
                let candidates: Vec<usize> =
                    (0..parts.elements.len()).filter(|&i| Some(i) != bottom).collect();
                if candidates.is_empty() {
                    return Err(Error::EmptySelection);
                }
                let target = candidates[rng.gen_range(0..candidates.len())];
                parts.ranks[target] += 1;
            }
        }
        GradedPoset::from_parts_unchecked(parts)
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MutationKind::SwapLabels => "swap-labels",
            MutationKind::DeleteCover => "delete-cover",
            MutationKind::PerturbRank => "perturb-rank",
        })
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.seed)
    }
}

/// Parses `swap-labels:7`, `delete-cover:0`, `perturb-rank:3`.
impl FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, seed) = s.split_once(':').unwrap_or((s, "0"));
        let kind = match kind {
            "swap-labels" => MutationKind::SwapLabels,
            "delete-cover" => MutationKind::DeleteCover,
            "perturb-rank" => MutationKind::PerturbRank,
            other => return Err(Error::Parse(format!("unknown mutation {other:?}"))),
        };
        let seed = seed
            .parse()
            .map_err(|_| Error::Parse(format!("bad mutation seed {seed:?}")))?;
        Ok(Mutation { kind, seed })
    }
}
