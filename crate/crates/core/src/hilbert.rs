//! h^0 and h^1 of twisted ideal sheaves of `Y ∩ W` on `W`, of line
//! configurations in P^n, and of point sets on P^1 x P^1.
//!
//! A form `g` of degree `t` vanishes on the scheme `Y ∩ W` iff on every
//! component `C` of `Y` the restriction `f|_C` divides `g|_C`. Each component
//! therefore contributes the coefficients of `g|_C mod f|_C` as linear
//! conditions on `g`, and
//!
//! * `h0 = h0(O_W(t)) - rank`, the forms vanishing on the scheme modulo `f`;
//! * `h1 = deg(Y ∩ W) - rank`, the cokernel of restriction to the scheme.
//!
//! The second is the sheaf `h^1` because `h^1(O_W(t)) = 0` on a hypersurface.

use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::geometry::{line_section, Hypersurface, Line, ProjPoint};
use crate::matrix::DenseMatrix;
use crate::poly::{
    bimonomial_values, binomial, restrict_form_to_line, restrict_form_to_param_curve,
    MonomialBasis, P1Point,
};
use crate::trees::{Curve, RationalCurveParam};

/// `N_t = C(n+t, n)`, the number of degree-`t` monomials on P^n.
pub fn forms_count(n: usize, t: i64) -> u64 {
    binomial(n as i64 + t, n as i64)
}

/// `h^0(O_W(t)) = N_t - N_{t-k}` for a degree-`k` hypersurface `W`.
pub fn sections_of_ow(n: usize, k: u32, t: u32) -> u64 {
    forms_count(n, t as i64) - forms_count(n, t as i64 - k as i64)
}

/// The critical degree `floor(h^0(O_W(t)) / 3)` for a cubic surface.
pub fn x_t(t: u32) -> u64 {
    sections_of_ow(3, 3, t) / 3
}

/// One component's worth of conditions: the images of the coordinates in
/// `F_p[u] / (h)` under a parametrization `u -> phi(u, 1)` of the component,
/// with `h` monic.
#[derive(Clone, Debug)]
struct Block {
    /// Per variable, the dehomogenized coordinate (little-endian).
    coords: Vec<Vec<u64>>,
    /// Monic modulus of degree `m`.
    modulus: Vec<u64>,
    /// Degree of the parametrization (1 for lines).
    e: usize,
}

impl Block {
    fn m(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Number of independent coefficients in degree `t`: the remainder has
    /// `m`, but below that the image is the unreduced `g(phi)`.
    fn rows(&self, t: u32) -> usize {
        self.m().min(t as usize * self.e + 1)
    }

    /// `a * c mod h` for `a` of length `m` and `c` of degree `e`.
    fn mulmod(&self, f: PrimeField, a: &[u64], c: &[u64], out: &mut [u64], scratch: &mut Vec<u64>) {
        let m = self.m();
        scratch.clear();
        scratch.resize(m + c.len() - 1, 0);
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in c.iter().enumerate() {
                scratch[i + j] = f.mul_add(scratch[i + j], x, y);
            }
        }
        for top in (m..scratch.len()).rev() {
            let lead = scratch[top];
            if lead == 0 {
                continue;
            }
            let neg = f.neg(lead);
            for (j, &hj) in self.modulus[..m].iter().enumerate() {
                let idx = top - m + j;
                scratch[idx] = f.mul_add(scratch[idx], neg, hj);
            }
            scratch[top] = 0;
        }
        out.copy_from_slice(&scratch[..m]);
    }
}

/// The conditions imposed by a curve on forms of every degree. Degrees are
/// produced in increasing order so a whole profile costs one pass over the
/// monomial bases.
#[derive(Clone, Debug)]
pub struct ConditionSystem {
    field: PrimeField,
    n: usize,
    k: u32,
    blocks: Vec<Block>,
    /// Per block, a description of the component it came from.
    sources: Vec<BlockSource>,
}

/// Where a block came from; used by the linking-point analysis.
#[derive(Clone, Debug)]
pub struct BlockSource {
    pub line: Option<Line>,
    /// The points `A`, `B` with the component parametrized as `u A + v B`.
    pub param: Option<(ProjPoint, ProjPoint)>,
}

impl ConditionSystem {
    /// Conditions for `Y ∩ W`.
    pub fn new(w: &Hypersurface, curve: &Curve) -> Result<Self> {
        let field = w.field();
        if curve.ambient_dim() != w.ambient_dim() {
            return Err(Error::DimensionMismatch(
                "curve and hypersurface in different spaces".into(),
            ));
        }
        let mut sys = ConditionSystem {
            field,
            n: w.ambient_dim(),
            k: w.degree(),
            blocks: Vec::new(),
            sources: Vec::new(),
        };
        match curve {
            Curve::Tree(t) => {
                for (i, l) in t.lines().iter().enumerate() {
                    sys.push_line(w, l, i)?;
                }
            }
            Curve::Forest(f) => {
                for (i, l) in f.lines().iter().enumerate() {
                    sys.push_line(w, l, i)?;
                }
            }
            Curve::Rational(phi) => sys.push_rational(w, phi)?,
        }
        Ok(sys)
    }

    /// Conditions for lines given by explicit parametrizations `u A + v B`;
    /// each `A` must lie off `W`.
    pub fn from_line_params(w: &Hypersurface, params: &[(ProjPoint, ProjPoint)]) -> Result<Self> {
        let field = w.field();
        let mut sys = ConditionSystem {
            field,
            n: w.ambient_dim(),
            k: w.degree(),
            blocks: Vec::new(),
            sources: Vec::new(),
        };
        for (i, (a, b)) in params.iter().enumerate() {
            let h = restrict_form_to_line(w.form(), a, b)?;
            let line = Line::through(a, b)?;
            if h.is_zero() {
                return Err(Error::ComponentContained(i));
            }
            if h.leading_u() == 0 {
                return Err(Error::Precondition(format!(
                    "the first point of line {i} lies on W"
                )));
            }
            let inv = field.inv(h.leading_u())?;
            sys.blocks.push(Block {
                coords: line_coords(a, b),
                modulus: h.coeffs.iter().map(|&c| field.mul(c, inv)).collect(),
                e: 1,
            });
            sys.sources.push(BlockSource {
                line: Some(line),
                param: Some((a.clone(), b.clone())),
            });
        }
        Ok(sys)
    }

    /// Conditions `g|_L = 0` on each line, for the ideal of the lines in P^n.
    fn for_lines_in_ambient(lines: &[Line], t: u32) -> Self {
        let field = lines[0].field();
        let mut modulus = vec![0; t as usize + 2];
        modulus[t as usize + 1] = 1;
        let mut sys = ConditionSystem {
            field,
            n: lines[0].ambient_dim(),
            k: t + 1,
            blocks: Vec::new(),
            sources: Vec::new(),
        };
        for l in lines {
            let [a, b] = l.basis();
            sys.blocks.push(Block {
                coords: line_coords(&a, &b),
                modulus: modulus.clone(),
                e: 1,
            });
            sys.sources.push(BlockSource {
                line: Some(l.clone()),
                param: Some((a, b)),
            });
        }
        sys
    }

    fn push_line(&mut self, w: &Hypersurface, l: &Line, index: usize) -> Result<()> {
        let s = line_section(l, w, false);
        if s.contained {
            return Err(Error::ComponentContained(index));
        }
        let f = self.field;
        let lead = s.restriction.leading_u();
        let inv = f.inv(lead)?;
        let modulus = s
            .restriction
            .coeffs
            .iter()
            .map(|&c| f.mul(c, inv))
            .collect();
        self.blocks.push(Block {
            coords: line_coords(&s.a, &s.b),
            modulus,
            e: 1,
        });
        self.sources.push(BlockSource {
            line: Some(l.clone()),
            param: Some((s.a, s.b)),
        });
        Ok(())
    }

    fn push_rational(&mut self, w: &Hypersurface, phi: &RationalCurveParam) -> Result<()> {
        let f = self.field;
        let mut h = restrict_form_to_param_curve(w.form(), phi)?;
        if h.is_zero() {
            return Err(Error::ComponentContained(0));
        }
        let mut phi = phi.clone();
        if h.leading_u() == 0 {
            // v -> v + c u moves the root at (1:0) away
            let c = (0..f.p())
                .find(|&c| h.eval(1, c) != 0)
                .ok_or(Error::LeadingZero)?;
            phi = phi.reparametrized(c);
            h = h.substitute(1, 0, c, 1);
        }
        let inv = f.inv(h.leading_u())?;
        self.blocks.push(Block {
            coords: phi.coords().iter().map(|c| c.coeffs.clone()).collect(),
            modulus: h.coeffs.iter().map(|&c| f.mul(c, inv)).collect(),
            e: phi.degree() as usize,
        });
        self.sources.push(BlockSource {
            line: None,
            param: None,
        });
        Ok(())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// The length of the scheme: `k * deg Y` until points are dropped.
    pub fn scheme_degree(&self) -> usize {
        self.blocks.iter().map(Block::m).sum()
    }

    pub fn sources(&self) -> &[BlockSource] {
        &self.sources
    }

    /// Removes the reduced point with parameter `(a : 1)` from block `b`,
    /// dividing its modulus by `u - a`.
    pub fn drop_point(&mut self, block: usize, a: u64) -> Result<()> {
        let f = self.field;
        let blk = &mut self.blocks[block];
        let m = blk.modulus.len() - 1;
        // synthetic division by (u - a)
        let mut q = vec![0; m];
        let mut carry = 0;
        for j in (0..=m).rev() {
            let c = f.add(blk.modulus[j], f.mul(carry, a));
            if j == 0 {
                if c != 0 {
                    return Err(Error::Precondition(
                        "the point is not on this component of the scheme".into(),
                    ));
                }
            } else {
                q[j - 1] = c;
                carry = c;
            }
        }
        blk.modulus = q;
        Ok(())
    }

    /// The condition matrix in degree `t`: one row per remainder
    /// coefficient, one column per degree-`t` monomial.
    pub fn matrix(&self, t: u32) -> DenseMatrix {
        let mut out = None;
        self.for_each_degree(t..=t, |_, m| out = Some(m));
        out.expect("one degree requested")
    }

    /// Calls `visit(t, matrix)` for each `t` in the range, in increasing
    /// order; stops early when `visit` returns `false`.
    pub fn for_each_degree(
        &self,
        range: RangeInclusive<u32>,
        mut visit: impl FnMut(u32, DenseMatrix),
    ) {
        self.try_for_each_degree(range, |t, m| {
            visit(t, m);
            true
        });
    }

    pub fn try_for_each_degree(
        &self,
        range: RangeInclusive<u32>,
        mut visit: impl FnMut(u32, DenseMatrix) -> bool,
    ) {
        let f = self.field;
        let (t_min, t_max) = (*range.start(), *range.end());
        // images[b] holds, for the current degree, m_b coefficients per monomial
        let mut images: Vec<Vec<u64>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut one = vec![0; b.m()];
                if b.m() > 0 {
                    one[0] = 1;
                }
                one
            })
            .collect();
        let mut basis = MonomialBasis::new(self.n, 0);
        let mut scratch = Vec::new();
        for t in 0..=t_max {
            if t > 0 {
                let next = MonomialBasis::new(self.n, t);
                let parents = next.parents(&basis);
                for (blk, img) in self.blocks.iter().zip(images.iter_mut()) {
                    let m = blk.m();
                    let mut fresh = vec![0; next.len() * m];
                    if m > 0 {
                        for (c, &(var, parent)) in parents.iter().enumerate() {
                            blk.mulmod(
                                f,
                                &img[parent * m..(parent + 1) * m],
                                &blk.coords[var],
                                &mut fresh[c * m..(c + 1) * m],
                                &mut scratch,
                            );
                        }
                    }
                    *img = fresh;
                }
                basis = next;
            }
            if t < t_min {
                continue;
            }
            let cols = basis.len();
            let total_rows: usize = self.blocks.iter().map(|b| b.rows(t)).sum();
            let mut mat = DenseMatrix::zeros(f, total_rows, cols);
            let mut r0 = 0;
            for (blk, img) in self.blocks.iter().zip(&images) {
                let m = blk.m();
                for j in 0..blk.rows(t) {
                    let row = mat.row_mut(r0 + j);
                    for (c, slot) in row.iter_mut().enumerate() {
                        *slot = img[c * m + j];
                    }
                }
                r0 += blk.rows(t);
            }
            if !visit(t, mat) {
                return;
            }
        }
    }

    /// Cohomology in degree `t`, with the hard consistency checks.
    pub fn cohomology(&self, t: u32) -> Result<CohomologyPair> {
        self.pair_from_rank(t, self.matrix(t).rank())
    }

    fn pair_from_rank(&self, t: u32, rank: usize) -> Result<CohomologyPair> {
        let h0_ow = sections_of_ow(self.n, self.k, t) as usize;
        let len = self.scheme_degree();
        if rank > h0_ow || rank > len {
            return Err(Error::InvariantViolation(format!(
                "rank {rank} exceeds min(h0(O_W({t})) = {h0_ow}, deg = {len}); multiples of f must lie in the kernel"
            )));
        }
        let pair = CohomologyPair {
            h0: h0_ow - rank,
            h1: len - rank,
            rank,
            h0_sheaf_of_ow: h0_ow,
        };
        if pair.h0 as i64 - pair.h1 as i64 != h0_ow as i64 - len as i64 {
            return Err(Error::InvariantViolation("Euler characteristic".into()));
        }
        Ok(pair)
    }
}

fn line_coords(a: &ProjPoint, b: &ProjPoint) -> Vec<Vec<u64>> {
    // u*A + v*B at v = 1
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(&x, &y)| vec![y, x])
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomologyPair {
    pub h0: usize,
    pub h1: usize,
    pub rank: usize,
    pub h0_sheaf_of_ow: usize,
}

impl CohomologyPair {
    pub fn is_maximal_rank(&self) -> bool {
        self.h0 == 0 || self.h1 == 0
    }

    pub fn verdict(&self) -> Verdict {
        if self.is_maximal_rank() {
            Verdict::MaximalRank
        } else {
            Verdict::Defective
        }
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.h0, self.h1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    MaximalRank,
    Defective,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::MaximalRank => "maximal-rank",
            Verdict::Defective => "defective",
        })
    }
}

/// The restriction map in degree `t` for `Y ∩ W`.
pub fn condition_matrix(w: &Hypersurface, curve: &Curve, t: u32) -> Result<DenseMatrix> {
    Ok(ConditionSystem::new(w, curve)?.matrix(t))
}

pub fn intersection_cohomology(w: &Hypersurface, curve: &Curve, t: u32) -> Result<CohomologyPair> {
    ConditionSystem::new(w, curve)?.cohomology(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub t: u32,
    pub n_t: u64,
    pub h0_sheaf_of_ow: usize,
    pub expected_h0: usize,
    pub expected_h1: usize,
    pub h0: usize,
    pub h1: usize,
    pub rank: usize,
    pub verdict: Verdict,
}

impl ProfileRow {
    pub fn pair(&self) -> (usize, usize) {
        (self.h0, self.h1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionProfile {
    pub n: usize,
    pub k: u32,
    pub scheme_degree: usize,
    /// Past this twist `h1` vanishes for any scheme of this length.
    pub t_cap: u32,
    pub rows: Vec<ProfileRow>,
    pub verdict: Verdict,
    /// Set when a search stopped at the first defective twist.
    pub truncated: bool,
}

impl IntersectionProfile {
    pub fn row(&self, t: u32) -> Option<&ProfileRow> {
        self.rows.iter().find(|r| r.t == t)
    }

    pub fn defective_twists(&self) -> Vec<u32> {
        self.rows
            .iter()
            .filter(|r| r.verdict == Verdict::Defective)
            .map(|r| r.t)
            .collect()
    }
}

impl ConditionSystem {
    /// Profile over `range` (default `[1, len - 1]`). With `stop_at_defect`
    /// the table ends at the first defective twist.
    pub fn profile(
        &self,
        range: Option<RangeInclusive<u32>>,
        stop_at_defect: bool,
    ) -> Result<IntersectionProfile> {
        let len = self.scheme_degree();
        let t_cap = len.saturating_sub(1) as u32;
        let range = range.unwrap_or(1..=t_cap.max(1));
        let mut rows = Vec::new();
        let mut failure = None;
        let mut truncated = false;
        self.try_for_each_degree(range, |t, m| {
            let pair = match self.pair_from_rank(t, m.rank()) {
                Ok(p) => p,
                Err(e) => {
                    failure = Some(e);
                    return false;
                }
            };
            if t >= t_cap && pair.h1 != 0 {
                failure = Some(Error::InvariantViolation(format!(
                    "h1 = {} at t = {t} past the cap",
                    pair.h1
                )));
                return false;
            }
            let h0_ow = pair.h0_sheaf_of_ow;
            rows.push(ProfileRow {
                t,
                n_t: forms_count(self.n, t as i64),
                h0_sheaf_of_ow: h0_ow,
                expected_h0: h0_ow.saturating_sub(len),
                expected_h1: len.saturating_sub(h0_ow),
                h0: pair.h0,
                h1: pair.h1,
                rank: pair.rank,
                verdict: pair.verdict(),
            });
            if stop_at_defect && pair.verdict() == Verdict::Defective {
                truncated = true;
                return false;
            }
            true
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let verdict = if rows.iter().all(|r| r.verdict == Verdict::MaximalRank) {
            Verdict::MaximalRank
        } else {
            Verdict::Defective
        };
        Ok(IntersectionProfile {
            n: self.n,
            k: self.k,
            scheme_degree: len,
            t_cap,
            rows,
            verdict,
            truncated,
        })
    }
}

/// Per-twist table over `range`, by default `[1, k d - 1]`.
pub fn profile(
    w: &Hypersurface,
    curve: &Curve,
    range: Option<RangeInclusive<u32>>,
) -> Result<IntersectionProfile> {
    ConditionSystem::new(w, curve)?.profile(range, false)
}

/// Cohomology of the ideal of a union of lines in P^n with `components`
/// connected components, each a tree: `h0 = N_t - rank` and
/// `h1 = (d t + components) - rank`.
pub fn lines_ideal_cohomology(lines: &[Line], components: usize, t: u32) -> Result<CohomologyPair> {
    if lines.is_empty() {
        return Err(Error::Precondition("no lines".into()));
    }
    let sys = ConditionSystem::for_lines_in_ambient(lines, t);
    let rank = sys.matrix(t).rank();
    let n_t = forms_count(sys.n, t as i64) as usize;
    let h0_curve = lines.len() * t as usize + components;
    if rank > h0_curve {
        return Err(Error::InvariantViolation(format!(
            "rank {rank} above h0(O_Y({t})) = {h0_curve}"
        )));
    }
    Ok(CohomologyPair {
        h0: n_t - rank,
        h1: h0_curve - rank,
        rank,
        h0_sheaf_of_ow: n_t,
    })
}

/// [`lines_ideal_cohomology`] for a tree or forest.
pub fn curve_ideal_cohomology(curve: &Curve, t: u32) -> Result<CohomologyPair> {
    match curve {
        Curve::Tree(tree) => lines_ideal_cohomology(tree.lines(), 1, t),
        Curve::Forest(f) => lines_ideal_cohomology(&f.lines(), f.components().len(), t),
        Curve::Rational(_) => Err(Error::Precondition(
            "ideal cohomology in P^n is for line configurations".into(),
        )),
    }
}

/// Evaluation of the `(a+1)(b+1)` bidegree-`(a,b)` monomials at points of
/// P^1 x P^1: `h0 = (a+1)(b+1) - rank`, `h1 = #S - rank`.
pub fn bigraded_cohomology(
    field: PrimeField,
    points: &[(P1Point, P1Point)],
    a: u32,
    b: u32,
) -> Result<CohomologyPair> {
    let mut seen = std::collections::HashSet::new();
    if !points.iter().all(|p| seen.insert(*p)) {
        return Err(Error::DuplicatePoint);
    }
    let cols = ((a + 1) * (b + 1)) as usize;
    let data = points
        .iter()
        .flat_map(|&p| bimonomial_values(field, a, b, p))
        .collect();
    let rank = DenseMatrix::from_raw(field, points.len(), cols, data)?.rank();
    Ok(CohomologyPair {
        h0: cols - rank,
        h1: points.len() - rank,
        rank,
        h0_sheaf_of_ow: cols,
    })
}

/// Independent route for reduced schemes of rational points: evaluate every
/// degree-`t` monomial at the points directly.
pub fn point_evaluation_oracle(
    w: &Hypersurface,
    points: &[ProjPoint],
    t: u32,
) -> Result<CohomologyPair> {
    let mut seen = std::collections::HashSet::new();
    for p in points {
        if !w.contains(p) {
            return Err(Error::PointNotOnW);
        }
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint);
        }
    }
    let f = w.field();
    let n = w.ambient_dim();
    let basis = MonomialBasis::new(n, t);
    let mut data = Vec::with_capacity(points.len() * basis.len());
    for p in points {
        for m in basis.monomials() {
            let v = p
                .coords()
                .iter()
                .zip(&m.exponents)
                .fold(1, |acc, (&x, &e)| f.mul(acc, f.pow(x, e as u64)));
            data.push(v);
        }
    }
    let rank = DenseMatrix::from_raw(f, points.len(), basis.len(), data)?.rank();
    let n_t = basis.len();
    let multiples = forms_count(n, t as i64 - w.degree() as i64) as usize;
    Ok(CohomologyPair {
        h0: n_t - rank - multiples,
        h1: points.len() - rank,
        rank,
        h0_sheaf_of_ow: n_t - multiples,
    })
}
