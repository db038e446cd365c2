//! Self-describing JSON witnesses that replay bit-exactly.

use std::fs;
use std::ops::RangeInclusive;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::geometry::{Hypersurface, Line, ProjPoint};
use crate::hilbert::{CohomologyPair, ConditionSystem, IntersectionProfile, Verdict};
use crate::poly::{BinaryForm, Form};
use crate::trees::{Curve, Forest, RationalCurveParam, TreeCurve, TreeType};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypersurfaceRecord {
    pub degree: u32,
    /// Graded-lex order, as in [`crate::poly::MonomialBasis`].
    pub coeffs: Vec<u64>,
}

/// A tree as its type and, per line, the two rows of its reduced basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeRecord {
    #[serde(rename = "type")]
    pub ttype: TreeType,
    pub lines: Vec<[Vec<u64>; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveRecord {
    Tree(TreeRecord),
    Forest {
        components: Vec<TreeRecord>,
    },
    /// Per coordinate, the coefficients of `u^j v^(d-j)` for `j = 0..=d`.
    Rational {
        coords: Vec<Vec<u64>>,
    },
}

/// A point of `T ∩ W` on a final line whose removal leaves no sections and
/// no obstruction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingRecord {
    /// 1-based index of the linking line.
    pub line: usize,
    pub point: Vec<u64>,
    /// Affine parameter `a` of the point `a A + B` in that line's block.
    pub parameter: u64,
    pub t: u32,
    pub before: CohomologyPair,
    pub after: CohomologyPair,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub schema_version: u32,
    /// Which driver produced it and for what cell.
    pub label: String,
    pub prime: u64,
    pub seed: u64,
    pub n: usize,
    pub hypersurface: HypersurfaceRecord,
    pub curve: CurveRecord,
    pub t_min: u32,
    pub t_max: u32,
    pub profile: IntersectionProfile,
    pub verdict: Verdict,
    /// SHA-256 of every condition matrix in the range.
    pub condition_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linking: Option<LinkingRecord>,
    /// Not part of the replay check.
    pub created_unix: u64,
}

fn tree_record(t: &TreeCurve) -> TreeRecord {
    TreeRecord {
        ttype: t.tree_type().clone(),
        lines: t.lines().iter().map(|l| l.basis_rows().clone()).collect(),
    }
}

impl CurveRecord {
    pub fn from_curve(curve: &Curve) -> Self {
        match curve {
            Curve::Tree(t) => CurveRecord::Tree(tree_record(t)),
            Curve::Forest(f) => CurveRecord::Forest {
                components: f.components().iter().map(tree_record).collect(),
            },
            Curve::Rational(phi) => CurveRecord::Rational {
                coords: phi.coords().iter().map(|c| c.coeffs.clone()).collect(),
            },
        }
    }

    pub fn to_curve(&self, field: PrimeField) -> Result<Curve> {
        let tree = |r: &TreeRecord| -> Result<TreeCurve> {
            let lines = r
                .lines
                .iter()
                .map(|[a, b]| {
                    Line::through(
                        &ProjPoint::new(field, a.clone())?,
                        &ProjPoint::new(field, b.clone())?,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            TreeCurve::new(r.ttype.clone(), lines)
        };
        Ok(match self {
            CurveRecord::Tree(r) => Curve::Tree(tree(r)?),
            CurveRecord::Forest { components } => Curve::Forest(Forest::new(
                components.iter().map(tree).collect::<Result<_>>()?,
            )?),
            CurveRecord::Rational { coords } => Curve::Rational(RationalCurveParam::new(
                coords
                    .iter()
                    .map(|c| BinaryForm::from_raw(field, c.clone()))
                    .collect(),
            )?),
        })
    }
}

/// Hash of the condition matrices over `range`, row-major, entries as
/// little-endian `u64`, each preceded by its `t` and shape.
pub fn condition_digest(sys: &ConditionSystem, range: RangeInclusive<u32>) -> String {
    let mut hasher = Sha256::new();
    sys.for_each_degree(range, |t, m| {
        hasher.update(t.to_le_bytes());
        hasher.update((m.rows() as u64).to_le_bytes());
        hasher.update((m.cols() as u64).to_le_bytes());
        for r in 0..m.rows() {
            for &x in m.row(r) {
                hasher.update(x.to_le_bytes());
            }
        }
    });
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl WitnessCertificate {
    /// Records a witness; `profile` must cover `range` in full.
    pub fn new(
        label: impl Into<String>,
        seed: u64,
        w: &Hypersurface,
        curve: &Curve,
        range: RangeInclusive<u32>,
        profile: IntersectionProfile,
    ) -> Result<Self> {
        let sys = ConditionSystem::new(w, curve)?;
        let created_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Ok(WitnessCertificate {
            schema_version: SCHEMA_VERSION,
            label: label.into(),
            prime: w.field().p(),
            seed,
            n: w.ambient_dim(),
            hypersurface: HypersurfaceRecord {
                degree: w.degree(),
                coeffs: w.form().coeffs().to_vec(),
            },
            curve: CurveRecord::from_curve(curve),
            t_min: *range.start(),
            t_max: *range.end(),
            verdict: profile.verdict,
            profile,
            condition_digest: condition_digest(&sys, range),
            linking: None,
            created_unix,
        })
    }

    pub fn with_linking(mut self, linking: LinkingRecord) -> Self {
        self.linking = Some(linking);
        self
    }

    pub fn field(&self) -> Result<PrimeField> {
        PrimeField::new(self.prime)
    }

    pub fn hypersurface(&self) -> Result<Hypersurface> {
        let f = self.field()?;
        Hypersurface::new(Form::from_coeffs(
            f,
            self.n,
            self.hypersurface.degree,
            self.hypersurface.coeffs.clone(),
        )?)
    }

    pub fn curve(&self) -> Result<Curve> {
        self.curve.to_curve(self.field()?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses a certificate, checking the schema version before anything
    /// else so old documents fail with a clear message.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let found = value
            .get("schema_version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Serde("missing schema_version".into()))?
            as u32;
        if found != SCHEMA_VERSION {
            return Err(Error::SchemaMismatch {
                found,
                expected: SCHEMA_VERSION,
            });
        }
        Ok(serde_json::from_value(value)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Recomputes everything from the stored data and compares it with the
    /// stored results. Any difference is a [`Error::ReplayDivergence`].
    pub fn replay(&self) -> Result<Verdict> {
        let diverged = |what: &str| Error::ReplayDivergence(what.to_string());
        let w = self
            .hypersurface()
            .map_err(|e| diverged(&format!("hypersurface no longer valid: {e}")))?;
        let curve = self
            .curve()
            .map_err(|e| diverged(&format!("curve no longer valid: {e}")))?;
        let sys = ConditionSystem::new(&w, &curve).map_err(|e| diverged(&e.to_string()))?;
        let range = self.t_min..=self.t_max;
        if condition_digest(&sys, range.clone()) != self.condition_digest {
            return Err(diverged(
                "condition matrices differ from the recorded digest",
            ));
        }
        let profile = sys.profile(Some(range), false)?;
        if profile != self.profile {
            return Err(diverged("recomputed profile differs"));
        }
        if profile.verdict != self.verdict {
            return Err(diverged("recorded verdict disagrees with the profile"));
        }
        if let Some(link) = &self.linking {
            replay_linking(&sys, link, &diverged)?;
        }
        Ok(self.verdict)
    }
}

fn replay_linking(
    sys: &ConditionSystem,
    link: &LinkingRecord,
    diverged: &dyn Fn(&str) -> Error,
) -> Result<()> {
    let block = link
        .line
        .checked_sub(1)
        .filter(|&b| b < sys.sources().len())
        .ok_or_else(|| diverged("linking line out of range"))?;
    let (a, b) = sys.sources()[block]
        .param
        .clone()
        .ok_or_else(|| diverged("linking block has no line parametrization"))?;
    let at = a
        .combine(link.parameter, &b, 1)
        .ok_or_else(|| diverged("linking parameter degenerate"))?;
    if at.coords() != link.point.as_slice() {
        return Err(diverged("linking point does not match its parameter"));
    }
    if sys.cohomology(link.t)? != link.before {
        return Err(diverged(
            "cohomology before removing the linking point differs",
        ));
    }
    let mut dropped = sys.clone();
    dropped
        .drop_point(block, link.parameter)
        .map_err(|_| diverged("linking point is not on the scheme"))?;
    if dropped.cohomology(link.t)? != link.after {
        return Err(diverged(
            "cohomology after removing the linking point differs",
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{verify_theorem_be2, ExperimentConfig};

    fn witness() -> WitnessCertificate {
        let cfg = ExperimentConfig::new(PrimeField::new(32003).unwrap(), 11);
        let mut r = verify_theorem_be2(&cfg, &[5]).unwrap();
        r.certificates.remove(0)
    }

    #[test]
    fn save_load_replay() {
        let cert = witness();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.json");
        cert.save(&path).unwrap();
        let back = WitnessCertificate::load(&path).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.replay().unwrap(), Verdict::MaximalRank);
    }

    #[test]
    fn tampered_coefficient_diverges() {
        let mut cert = witness();
        let c = &mut cert.hypersurface.coeffs[3];
        *c = (*c + 1) % cert.prime;
        assert!(matches!(cert.replay(), Err(Error::ReplayDivergence(_))));
    }

    #[test]
    fn tampered_profile_diverges() {
        let mut cert = witness();
        cert.profile.rows[0].rank += 1;
        assert!(matches!(cert.replay(), Err(Error::ReplayDivergence(_))));
    }

    #[test]
    fn old_schema_is_rejected() {
        let cert = witness();
        let mut v: serde_json::Value = serde_json::from_str(&cert.to_json().unwrap()).unwrap();
        v["schema_version"] = 0.into();
        let err = WitnessCertificate::from_json(&v.to_string()).unwrap_err();
        assert!(matches!(
            err,
            Error::SchemaMismatch {
                found: 0,
                expected: 1
            }
        ));
        assert!(err.to_string().contains("version 0"));
    }

    #[test]
    fn forest_and_rational_records_round_trip() {
        use crate::trees::RationalCurveParam;
        use rand::SeedableRng;
        let f = PrimeField::new(32003).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let phi = RationalCurveParam::random(f, 3, 3, &mut rng);
        let curve = Curve::Rational(phi);
        let rec = CurveRecord::from_curve(&curve);
        let again = CurveRecord::from_curve(&rec.to_curve(f).unwrap());
        assert_eq!(rec, again);
        let forest = crate::gallery::named_construction(
            "three_skew_lines",
            &crate::gallery::GalleryParams::new(f, 2),
        )
        .unwrap();
        let rec = CurveRecord::from_curve(&forest);
        assert_eq!(CurveRecord::from_curve(&rec.to_curve(f).unwrap()), rec);
    }
}
