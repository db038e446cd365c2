//! Bamboo witnesses on quadrics of prescribed rank, and the half-degree
//! assertion with its linking-point analysis.

use crate::error::{Error, Result};
use crate::geometry::{line_section, quadric_normal_form, Hypersurface};
use crate::hilbert::{sections_of_ow, ConditionSystem, Verdict};
use crate::poly::P1Point;
use crate::trees::{
    random_tree, Curve, RationalConstraint, RationalScope, TreeConstraints, TreeCurve, TreeType,
};

use super::certificate::{LinkingRecord, WitnessCertificate};
use super::{search_maximal_rank, ExperimentConfig, TypeFamily};

/// A degree-`d` bamboo transversal to the rank-`rho` normal-form quadric in
/// P^n, maximal rank over `t in [1, 2d - 1]`.
pub fn verify_theorem_eb1(
    cfg: &ExperimentConfig,
    n: usize,
    rho: usize,
    d: usize,
) -> Result<WitnessCertificate> {
    if n < 3 || d < n {
        return Err(Error::Precondition(format!(
            "need d >= n >= 3, got n = {n}, d = {d}"
        )));
    }
    if !(4..=n + 1).contains(&rho) {
        return Err(Error::Precondition(format!(
            "need 4 <= rank <= n + 1, got {rho}"
        )));
    }
    let (seed, mut rng) = cfg.cell_rng("eb1", &[n as u64, rho as u64, d as u64]);
    let w = quadric_normal_form(cfg.field, n, rho)?.hypersurface;
    let range = cfg.range_or(1..=2 * d as u32 - 1);
    match search_maximal_rank(
        &w,
        d,
        &[TypeFamily::Bamboo],
        range.clone(),
        cfg.attempts,
        &mut rng,
    )? {
        Ok(found) => WitnessCertificate::new(
            format!("eb1 n={n} rank={rho} d={d}"),
            seed,
            &w,
            &Curve::Tree(found.tree),
            range,
            found.profile,
        ),
        Err(spent) => Err(Error::SearchExhausted {
            what: format!("a maximal-rank degree-{d} bamboo on a rank-{rho} quadric in P^{n}"),
            attempts: spent,
        }),
    }
}

#[derive(Clone, Debug)]
pub struct AssertionROptions {
    /// Accept `n = 3`.
    pub allow_n3: bool,
    /// Regenerations when no final line meets the quadric rationally.
    pub regenerations: usize,
}

impl Default for AssertionROptions {
    fn default() -> Self {
        AssertionROptions {
            allow_n3: false,
            regenerations: 20,
        }
    }
}

/// First point `o` of `T ∩ W` on a final line, scanning final lines in
/// increasing index and points in root order, whose removal leaves
/// `(h0, h1) = (0, 0)` in degree `t`.
fn find_linking_point(
    w: &Hypersurface,
    tree: &TreeCurve,
    sys: &ConditionSystem,
    t: u32,
) -> Result<Option<LinkingRecord>> {
    let before = sys.cohomology(t)?;
    let mut any_rational = false;
    for i in tree.tree_type().final_lines() {
        let section = line_section(&tree.lines()[i - 1], w, true);
        let roots = crate::poly::binary_roots(&section.restriction)?;
        for (root, mult) in roots.roots {
            let Some(a) = root.affine(w.field()) else {
                continue;
            };
            if mult != 1 {
                continue;
            }
            any_rational = true;
            let mut dropped = sys.clone();
            dropped.drop_point(i - 1, a)?;
            let after = dropped.cohomology(t)?;
            if after.pair() == (0, 0) {
                let point = section.point_at(P1Point { u: a, v: 1 });
                return Ok(Some(LinkingRecord {
                    line: i,
                    point: point.coords().to_vec(),
                    parameter: a,
                    t,
                    before,
                    after,
                }));
            }
        }
    }
    if any_rational {
        Ok(None)
    } else {
        Err(Error::NoRationalLinkingCandidate)
    }
}

/// A bamboo of degree `x = ceil(h0(O_W(t)) / 2)` transversal to the smooth
/// normal-form quadric `W` in P^n with `h0(I(t)) = 0`. When `h0(O_W(t))` is
/// odd the certificate also carries a linking point.
pub fn check_assertion_r(
    cfg: &ExperimentConfig,
    n: usize,
    t: u32,
    opts: &AssertionROptions,
) -> Result<WitnessCertificate> {
    if t < 2 {
        return Err(Error::Precondition(
            "the half-degree assertion fails for t = 1".into(),
        ));
    }
    if n < 4 && !(n == 3 && opts.allow_n3) {
        return Err(Error::Precondition(format!(
            "needs n >= 4 (n = 3 behind a flag), got {n}"
        )));
    }
    let (seed, mut rng) = cfg.cell_rng("assert-r", &[n as u64, t as u64]);
    let w = quadric_normal_form(cfg.field, n, n + 1)?.hypersurface;
    let h = sections_of_ow(n, 2, t) as usize;
    let x = h.div_ceil(2);
    let odd = h % 2 == 1;
    let range = cfg.range_or(t..=t);
    let constraints = TreeConstraints {
        transversal_to: vec![w.clone()],
        rational_on: odd.then(|| RationalConstraint {
            surface: w.clone(),
            scope: RationalScope::FinalLines,
        }),
        ..Default::default()
    };
    let mut regenerations = 0;
    let mut spent = 0;
    while spent < cfg.attempts {
        spent += 1;
        let Ok(tree) = random_tree(&TreeType::bamboo(x), cfg.field, n, &mut rng, &constraints)
        else {
            continue;
        };
        let curve = Curve::Tree(tree.clone());
        let sys = ConditionSystem::new(&w, &curve)?;
        if sys.cohomology(t)?.h0 != 0 {
            continue;
        }
        let linking = if odd {
            match find_linking_point(&w, &tree, &sys, t) {
                Ok(Some(link)) => Some(link),
                Ok(None) => continue,
                Err(Error::NoRationalLinkingCandidate) => {
                    regenerations += 1;
                    if regenerations >= opts.regenerations {
                        return Err(Error::NoRationalLinkingCandidate);
                    }
                    spent -= 1;
                    continue;
                }
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        let profile = sys.profile(Some(range.clone()), false)?;
        let label = format!("assert-r n={n} t={t} x={x}");
        let cert = WitnessCertificate::new(label, seed, &w, &curve, range, profile)?;
        return Ok(match linking {
            Some(l) => cert.with_linking(l),
            None => cert,
        });
    }
    Err(Error::SearchExhausted {
        what: format!("a degree-{x} bamboo with h0(I({t})) = 0 on a smooth quadric in P^{n}"),
        attempts: spent,
    })
}

/// Whether every row of a profile is maximal rank.
pub fn all_maximal(cert: &WitnessCertificate) -> bool {
    cert.profile
        .rows
        .iter()
        .all(|r| r.verdict == Verdict::MaximalRank)
}
