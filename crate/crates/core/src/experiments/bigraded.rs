//! Trees meeting a smooth quadric surface in rational points, checked
//! against forms of bidegree `(a, b)` on P^1 x P^1.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::geometry::{line_section, segre_coords, segre_quadric, Hypersurface};
use crate::hilbert::{bigraded_cohomology, CohomologyPair, Verdict};
use crate::poly::P1Point;
use crate::trees::{random_tree, RationalConstraint, RationalScope, TreeConstraints, TreeType};

use super::report::{CellOutcome, CellRow, CellStatus, ExperimentReport};
use super::ExperimentConfig;

/// The one box cell where every tree is defective: two meeting lines give
/// four points on a conic, which is a `(1, 1)` curve.
pub const BIGRADED_EXCEPTION: (u32, u32, usize) = (1, 1, 2);

/// Types tried per degree: bamboo, spreading, then random ones.
fn sample_types(d: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<TreeType> {
    let mut out = vec![TreeType::bamboo(d), TreeType::spreading(d)];
    while out.len() < count {
        out.push(TreeType::random(d, rng));
    }
    out.truncate(count);
    out
}

/// The points of `T ∩ Q` in Segre coordinates, for a tree whose lines all
/// pass through rational points of `Q`.
fn segre_points(
    ttype: &TreeType,
    q: &Hypersurface,
    rng: &mut ChaCha8Rng,
    attempts: usize,
) -> Option<Vec<(P1Point, P1Point)>> {
    let constraints = TreeConstraints {
        transversal_to: vec![q.clone()],
        rational_on: Some(RationalConstraint {
            surface: q.clone(),
            scope: RationalScope::All,
        }),
        attempts,
        ..Default::default()
    };
    let tree = random_tree(ttype, q.field(), 3, rng, &constraints).ok()?;
    let mut pts = Vec::with_capacity(2 * ttype.degree());
    for l in tree.lines() {
        for (p, _) in line_section(l, q, true).rational_points? {
            pts.push(segre_coords(&p).ok()?);
        }
    }
    (pts.len() == 2 * ttype.degree()).then_some(pts)
}

struct Sample {
    ttype: TreeType,
    pair: CohomologyPair,
    tries: usize,
}

fn be1_cell(cfg: &ExperimentConfig, a: u32, b: u32, d: usize, types: usize) -> CellOutcome {
    let (_, mut rng) = cfg.cell_rng("be1", &[a as u64, b as u64, d as u64]);
    let q = segre_quadric(cfg.field).hypersurface;
    let exceptional = (a, b, d) == BIGRADED_EXCEPTION;
    let mut samples = Vec::new();
    let mut exhausted = false;
    for ttype in sample_types(d, types, &mut rng) {
        let mut last = None;
        let mut tries = 0;
        while tries < cfg.attempts {
            tries += 1;
            let Some(pts) = segre_points(&ttype, &q, &mut rng, cfg.attempts) else {
                continue;
            };
            let Ok(pair) = bigraded_cohomology(cfg.field, &pts, a, b) else {
                continue;
            };
            last = Some(pair);
            // the exception is a property of every tree; elsewhere a
            // single maximal-rank tree is the witness
            if exceptional || pair.is_maximal_rank() {
                break;
            }
        }
        match last {
            Some(pair) => samples.push(Sample { ttype, pair, tries }),
            None => exhausted = true,
        }
    }
    let params = [("a", a as u64), ("b", b as u64), ("d", d as u64)];
    let ok = |s: &Sample| {
        if exceptional {
            s.pair.pair() == (1, 1)
        } else {
            s.pair.is_maximal_rank()
        }
    };
    let status = if exhausted {
        CellStatus::AttemptsExhausted
    } else if samples.iter().all(ok) {
        if exceptional {
            CellStatus::DefectPattern
        } else {
            CellStatus::WitnessFound
        }
    } else if exceptional {
        CellStatus::Violation
    } else {
        CellStatus::AttemptsExhausted
    };
    let mut cell = CellOutcome::new(&params, status);
    cell.attempts = samples.iter().map(|s| s.tries).sum();
    cell.rows = samples
        .iter()
        .map(|s| CellRow {
            t: None,
            h0: s.pair.h0,
            h1: s.pair.h1,
            verdict: s.pair.verdict(),
            rate: None,
        })
        .collect();
    let types: Vec<String> = samples
        .iter()
        .map(|s| format!("{:?}", s.ttype.tau()))
        .collect();
    cell.note = Some(format!("types {}", types.join(" ")));
    if exceptional && status == CellStatus::Violation {
        cell.note = Some("expected (h0, h1) = (1, 1) for every tree".into());
    }
    cell
}

/// Sweeps `a <= a_max`, `b <= b_max`, `d <= d_max` with `types` tree types
/// per cell. A cell passes when every type has a maximal-rank tree, except
/// `(1, 1, 2)`, which must give `(1, 1)` for every tree.
pub fn verify_prop_be1(
    cfg: &ExperimentConfig,
    a_max: u32,
    b_max: u32,
    d_max: usize,
    types: usize,
) -> Result<ExperimentReport> {
    let cells: Vec<(u32, u32, usize)> = (1..=d_max)
        .flat_map(|d| (1..=a_max).flat_map(move |a| (1..=b_max).map(move |b| (a, b, d))))
        .collect();
    let outcomes: Vec<CellOutcome> = cells
        .par_iter()
        .map(|&(a, b, d)| be1_cell(cfg, a, b, d, types))
        .collect();
    let mut report = ExperimentReport::new("be1-bigraded", cfg.seed, vec![cfg.field.p()]);
    report
        .parameter("a_max", a_max)
        .parameter("b_max", b_max)
        .parameter("d_max", d_max)
        .parameter("types_per_cell", types)
        .parameter("attempts", cfg.attempts);
    for c in outcomes {
        report.push(c, None);
    }
    report.finish(true);
    Ok(report)
}

/// Verdicts other than the exception that came out defective.
pub fn unexpected_defects(report: &ExperimentReport) -> Vec<(u64, u64, u64)> {
    report
        .cells
        .iter()
        .filter(|c| {
            let key = (c.param("a"), c.param("b"), c.param("d"));
            let exc = BIGRADED_EXCEPTION;
            key != (Some(exc.0 as u64), Some(exc.1 as u64), Some(exc.2 as u64))
                && c.rows.iter().any(|r| r.verdict == Verdict::Defective)
        })
        .map(|c| {
            (
                c.param("a").unwrap_or(0),
                c.param("b").unwrap_or(0),
                c.param("d").unwrap_or(0),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn small_box() {
        let cfg = ExperimentConfig::new(PrimeField::new(32003).unwrap(), 4);
        let r = verify_prop_be1(&cfg, 1, 1, 2, 2).unwrap();
        assert!(r.is_clean(), "{}", r.render_summary());
        let exc = r
            .cells
            .iter()
            .find(|c| c.param("a") == Some(1) && c.param("b") == Some(1) && c.param("d") == Some(2))
            .unwrap();
        assert!(exc.rows.iter().all(|r| (r.h0, r.h1) == (1, 1)));
        let single = r
            .cells
            .iter()
            .find(|c| c.param("a") == Some(1) && c.param("b") == Some(1) && c.param("d") == Some(1))
            .unwrap();
        assert_eq!(single.status, CellStatus::WitnessFound);
        assert!(unexpected_defects(&r).is_empty());
    }
}
