//! Cross-check of the divisibility route against direct evaluation at the
//! intersection points, on configurations whose sections split over F_p.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{line_section, random_hypersurface, Hypersurface, ProjPoint};
use crate::hilbert::{intersection_cohomology, point_evaluation_oracle};
use crate::trees::{
    random_tree, Curve, RationalConstraint, RationalScope, TreeConstraints, TreeCurve, TreeType,
};

use super::report::{CellOutcome, CellRow, CellStatus, ExperimentReport};
use super::ExperimentConfig;

/// The `k d` points of `T ∩ W` when every section splits into distinct
/// rational points.
pub fn split_points(tree: &TreeCurve, w: &Hypersurface) -> Option<Vec<ProjPoint>> {
    let mut pts = Vec::new();
    for l in tree.lines() {
        let s = line_section(l, w, true);
        for (p, m) in s.rational_points? {
            if m != 1 {
                return None;
            }
            pts.push(p);
        }
    }
    (pts.len() == w.degree() as usize * tree.degree()).then_some(pts)
}

struct Config {
    n: usize,
    k: u32,
    d: usize,
    w: Hypersurface,
    tree: TreeCurve,
    points: Vec<ProjPoint>,
}

fn draw(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<Config> {
    let n = rng.gen_range(3..=4);
    let k = rng.gen_range(2..=3);
    let d = rng.gen_range(1..=4);
    let w = random_hypersurface(cfg.field, n, k, rng);
    let constraints = TreeConstraints {
        transversal_to: vec![w.clone()],
        rational_on: Some(RationalConstraint {
            surface: w.clone(),
            scope: RationalScope::All,
        }),
        attempts: 5,
        ..Default::default()
    };
    for _ in 0..cfg.attempts {
        let ttype = TreeType::random(d, rng);
        let Ok(tree) = random_tree(&ttype, cfg.field, n, rng, &constraints) else {
            continue;
        };
        if let Some(points) = split_points(&tree, &w) {
            return Ok(Config {
                n,
                k,
                d,
                w,
                tree,
                points,
            });
        }
    }
    Err(Error::RetryExhausted {
        what: "drawing a configuration with split sections".into(),
        attempts: cfg.attempts,
    })
}

/// `count` random configurations; in each, both routes must give the same
/// `(h0, h1)` for every `t` in `[1, k d]`.
pub fn oracle_check(cfg: &ExperimentConfig, count: usize) -> Result<ExperimentReport> {
    let outcomes: Vec<CellOutcome> = (0..count)
        .into_par_iter()
        .map(|i| -> Result<CellOutcome> {
            let (_, mut rng) = cfg.cell_rng("oracle", &[i as u64]);
            let c = match draw(cfg, &mut rng) {
                Ok(c) => c,
                Err(Error::RetryExhausted { attempts, .. }) => {
                    let mut cell =
                        CellOutcome::new(&[("sample", i as u64)], CellStatus::AttemptsExhausted);
                    cell.attempts = attempts;
                    return Ok(cell);
                }
                Err(e) => return Err(e),
            };
            let params = [
                ("sample", i as u64),
                ("n", c.n as u64),
                ("k", c.k as u64),
                ("d", c.d as u64),
            ];
            let curve = Curve::Tree(c.tree);
            let mut rows = Vec::new();
            let mut mismatches = Vec::new();
            for t in 1..=(c.k * c.d as u32) {
                let fast = intersection_cohomology(&c.w, &curve, t)?;
                let slow = point_evaluation_oracle(&c.w, &c.points, t)?;
                if fast.pair() != slow.pair() {
                    mismatches.push(format!("t={t}: {:?} vs {:?}", fast.pair(), slow.pair()));
                }
                rows.push(CellRow {
                    t: Some(t),
                    h0: fast.h0,
                    h1: fast.h1,
                    verdict: fast.verdict(),
                    rate: None,
                });
            }
            let status = if mismatches.is_empty() {
                CellStatus::Holds
            } else {
                CellStatus::Violation
            };
            let mut cell = CellOutcome::new(&params, status);
            cell.rows = rows;
            cell.attempts = 1;
            if !mismatches.is_empty() {
                cell.note = Some(mismatches.join("; "));
            }
            Ok(cell)
        })
        .collect::<Result<_>>()?;
    let mut report = ExperimentReport::new("oracle-check", cfg.seed, vec![cfg.field.p()]);
    report.parameter("configurations", count);
    for c in outcomes {
        report.push(c, None);
    }
    report.finish(false);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn a_few_configurations_agree() {
        let cfg = ExperimentConfig::new(PrimeField::new(32003).unwrap(), 9);
        let r = oracle_check(&cfg, 8).unwrap();
        assert_eq!(r.summary.holds, 8, "{}", r.render_summary());
    }
}
