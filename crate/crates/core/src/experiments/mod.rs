//! Witness searches and range sweeps.
//!
//! Every run is a deterministic function of the base seed and the swept
//! parameters: each cell draws from its own ChaCha stream, seeded by mixing
//! the base seed with a hash of the cell, and cells run in parallel.

use std::fmt;
use std::ops::RangeInclusive;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::gallery::truncated_inductive_tree;
use crate::geometry::Hypersurface;
use crate::hilbert::{ConditionSystem, IntersectionProfile, Verdict};
use crate::trees::{random_tree, Curve, TreeConstraints, TreeCurve, TreeType};

pub mod bigraded;
pub mod certificate;
pub mod cubic;
pub mod oracle;
pub mod quadric;
pub mod ranges;
pub mod report;

pub use bigraded::verify_prop_be1;
pub use certificate::{CurveRecord, LinkingRecord, WitnessCertificate, SCHEMA_VERSION};
pub use cubic::{
    check_assertion_h, exception_table, matches_exception_table, question_qbe2_evidence,
    verify_theorem_be2, EvidenceOptions,
};
pub use oracle::oracle_check;
pub use quadric::{check_assertion_r, verify_theorem_eb1, AssertionROptions};
pub use ranges::{fe_bounds, fe_default_degrees, verify_prop_fe1, verify_prop_fe2_genus0};
pub use report::{CellOutcome, CellRow, CellStatus, ExperimentReport, Summary, WITNESS_SEMANTICS};

pub const DEFAULT_PRIME: u64 = 32003;
pub const DEFAULT_ATTEMPTS: usize = 100;

/// Settings shared by every driver.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub field: PrimeField,
    pub seed: u64,
    /// Attempt budget per cell.
    pub attempts: usize,
    /// Overrides a driver's default twist range.
    pub t_range: Option<(u32, u32)>,
    /// Extra primes for cross-prime reproduction; empty means just `field`.
    pub primes: Vec<u64>,
}

impl ExperimentConfig {
    pub fn new(field: PrimeField, seed: u64) -> Self {
        ExperimentConfig {
            field,
            seed,
            attempts: DEFAULT_ATTEMPTS,
            t_range: None,
            primes: Vec::new(),
        }
    }

    /// The random stream of one cell.
    pub fn cell_rng(&self, tag: &str, cell: &[u64]) -> (u64, ChaCha8Rng) {
        let s = cell_seed(self.seed, tag, cell);
        (s, ChaCha8Rng::seed_from_u64(s))
    }

    pub fn range_or(&self, default: RangeInclusive<u32>) -> RangeInclusive<u32> {
        match self.t_range {
            Some((a, b)) => a..=b,
            None => default,
        }
    }

    pub fn fields(&self) -> Result<Vec<PrimeField>> {
        if self.primes.is_empty() {
            return Ok(vec![self.field]);
        }
        self.primes.iter().map(|&p| PrimeField::new(p)).collect()
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `seed ⊕ hash(tag, cell)`, stable across platforms and releases.
pub fn cell_seed(seed: u64, tag: &str, cell: &[u64]) -> u64 {
    let mut h = splitmix(tag.len() as u64);
    for b in tag.bytes() {
        h = splitmix(h ^ b as u64);
    }
    for &c in cell {
        h = splitmix(h ^ c);
    }
    seed ^ h
}

/// Where the search takes its types from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeFamily {
    Bamboo,
    /// Prefixes of the inductive chain of quadric-ruling constructions.
    Gallery,
    Random,
}

impl fmt::Display for TypeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeFamily::Bamboo => "bamboo",
            TypeFamily::Gallery => "gallery",
            TypeFamily::Random => "random",
        })
    }
}

impl TypeFamily {
    /// One sample transversal to `w`.
    pub fn sample(self, w: &Hypersurface, d: usize, rng: &mut ChaCha8Rng) -> Result<TreeCurve> {
        let field = w.field();
        let n = w.ambient_dim();
        match self {
            TypeFamily::Bamboo => random_tree(
                &TreeType::bamboo(d),
                field,
                n,
                rng,
                &TreeConstraints::transversal(w),
            ),
            TypeFamily::Random => {
                let ttype = TreeType::random(d, rng);
                random_tree(&ttype, field, n, rng, &TreeConstraints::transversal(w))
            }
            TypeFamily::Gallery => {
                if n != 3 {
                    return Err(Error::Precondition("gallery types live in P^3".into()));
                }
                truncated_inductive_tree(field, d, std::slice::from_ref(w), rng)
            }
        }
    }
}

/// A tree that passed a search, with the profile that certified it.
#[derive(Clone, Debug)]
pub struct Found {
    pub tree: TreeCurve,
    pub profile: IntersectionProfile,
    pub family: TypeFamily,
    pub attempts: usize,
}

/// Tries each family in turn with an equal share of `attempts`, computing
/// the profile over `range` and stopping at the first defective twist.
/// Returns the first tree whose profile is maximal rank throughout.
pub fn search_maximal_rank(
    w: &Hypersurface,
    d: usize,
    families: &[TypeFamily],
    range: RangeInclusive<u32>,
    attempts: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Outcome> {
    search(w, d, families, attempts, rng, |sys| {
        let profile = sys.profile(Some(range.clone()), true)?;
        Ok((profile.verdict == Verdict::MaximalRank).then_some(profile))
    })
}

/// A search either finds a tree or spends its budget.
pub type Outcome = std::result::Result<Found, usize>;

/// General search loop: `accept` returns the profile to record on success.
/// Consistency violations abort the search; other errors count as a failed
/// attempt.
pub fn search(
    w: &Hypersurface,
    d: usize,
    families: &[TypeFamily],
    attempts: usize,
    rng: &mut ChaCha8Rng,
    mut accept: impl FnMut(&ConditionSystem) -> Result<Option<IntersectionProfile>>,
) -> Result<Outcome> {
    let share = attempts.div_ceil(families.len().max(1));
    let mut used = 0;
    for &family in families {
        for _ in 0..share {
            if used == attempts {
                return Ok(Err(used));
            }
            used += 1;
            let Ok(tree) = family.sample(w, d, rng) else {
                continue;
            };
            let Ok(sys) = ConditionSystem::new(w, &Curve::Tree(tree.clone())) else {
                continue;
            };
            match accept(&sys) {
                Ok(Some(profile)) => {
                    return Ok(Ok(Found {
                        tree,
                        profile,
                        family,
                        attempts: used,
                    }))
                }
                Ok(None) => {}
                Err(e @ Error::InvariantViolation(_)) => return Err(e),
                Err(_) => {}
            }
        }
    }
    Ok(Err(used))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_seeds_separate_cells_and_tags() {
        let a = cell_seed(7, "be2", &[5]);
        assert_ne!(a, cell_seed(7, "be2", &[6]));
        assert_ne!(a, cell_seed(7, "qbe2", &[5]));
        assert_ne!(a, cell_seed(8, "be2", &[5]));
        assert_eq!(a, cell_seed(7, "be2", &[5]));
    }

    #[test]
    fn shares_split_the_budget() {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = crate::geometry::random_hypersurface(f, 3, 3, &mut rng);
        let fams = [TypeFamily::Bamboo, TypeFamily::Random];
        let spent = search(&w, 3, &fams, 5, &mut rng, |_| Ok(None))
            .unwrap()
            .unwrap_err();
        assert_eq!(spent, 5);
    }
}
