//! Homogeneous forms: on P^n, on P^1 (binary forms) and on P^1 x P^1.
//!
//! Monomials of a fixed degree are always listed in graded-lex order with
//! `x0 > x1 > ... > xn`, so `x0^t` comes first and `xn^t` last. Coefficient
//! vectors in certificates use this order.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::geometry::ProjPoint;
use crate::matrix::DenseMatrix;
use crate::trees::RationalCurveParam;

/// `C(m, r)`, zero when `m < r`. Exact for every size used here.
pub fn binomial(m: i64, r: i64) -> u64 {
    if r < 0 || m < r {
        return 0;
    }
    let r = r.min(m - r) as u128;
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (m as u128 - i) / (i + 1);
    }
    acc as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// The degree-`t` monomials in `n + 1` variables plus, for `t > 0`, a
/// factorization `m = x_var * parent` of each one through the degree `t - 1`
/// basis. The factorization drives incremental evaluation of whole bases.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: usize,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, degree: u32) -> Self {
        let mut monomials =
            Vec::with_capacity(binomial(n as i64 + degree as i64, n as i64) as usize);
        let mut current = vec![0u32; n + 1];
        fill_graded_lex(0, degree, &mut current, &mut monomials);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.exponents.clone(), i))
            .collect();
        MonomialBasis {
            n,
            degree,
            monomials,
            index,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, exponents: &[u32]) -> Option<usize> {
        self.index.get(exponents).copied()
    }

    /// For every monomial of this (positive) degree: the first variable it
    /// contains and the index of the quotient in `lower`.
    pub fn parents(&self, lower: &MonomialBasis) -> Vec<(usize, usize)> {
        assert_eq!(lower.degree + 1, self.degree);
        self.monomials
            .iter()
            .map(|m| {
                let var = m
                    .exponents
                    .iter()
                    .position(|&e| e > 0)
                    .expect("positive degree");
                let mut e = m.exponents.clone();
                e[var] -= 1;
                (var, lower.index_of(&e).expect("parent in lower basis"))
            })
            .collect()
    }
}

fn fill_graded_lex(pos: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(Monomial {
            exponents: current.clone(),
        });
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill_graded_lex(pos + 1, remaining - e, current, out);
    }
    current[pos] = 0;
}

pub fn monomial_basis(n: usize, t: u32) -> Vec<Monomial> {
    MonomialBasis::new(n, t).monomials
}

/// A degree-`t` form on P^n; `coeffs[i]` multiplies the `i`-th graded-lex
/// monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    field: PrimeField,
    n: usize,
    degree: u32,
    coeffs: Vec<u64>,
}

impl Form {
    pub fn zero(field: PrimeField, n: usize, degree: u32) -> Self {
        let len = binomial(n as i64 + degree as i64, n as i64) as usize;
        Form {
            field,
            n,
            degree,
            coeffs: vec![0; len],
        }
    }

    pub fn from_coeffs(field: PrimeField, n: usize, degree: u32, coeffs: Vec<u64>) -> Result<Self> {
        let len = binomial(n as i64 + degree as i64, n as i64) as usize;
        if coeffs.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "degree {degree} forms on P^{n} have {len} coefficients, got {}",
                coeffs.len()
            )));
        }
        let p = field.p();
        Ok(Form {
            field,
            n,
            degree,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        })
    }

    /// Sum of `c * x^e` terms; all exponent vectors must have the same degree.
    pub fn from_terms(field: PrimeField, n: usize, terms: &[(i64, &[u32])]) -> Result<Self> {
        let degree = terms
            .first()
            .map(|(_, e)| e.iter().sum())
            .ok_or_else(|| Error::DimensionMismatch("no terms".into()))?;
        let basis = MonomialBasis::new(n, degree);
        let mut form = Form::zero(field, n, degree);
        for (c, e) in terms {
            let i = basis.index_of(e).ok_or_else(|| {
                Error::DimensionMismatch(format!(
                    "monomial {e:?} not of degree {degree} in {} vars",
                    n + 1
                ))
            })?;
            form.coeffs[i] = field.add(form.coeffs[i], field.from_i64(*c));
        }
        Ok(form)
    }

    pub fn linear(field: PrimeField, coeffs: &[i64]) -> Self {
        Form {
            field,
            n: coeffs.len() - 1,
            degree: 1,
            coeffs: coeffs.iter().map(|&c| field.from_i64(c)).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, n: usize, degree: u32, rng: &mut R) -> Self {
        let mut f = Form::zero(field, n, degree);
        for c in f.coeffs.iter_mut() {
            *c = field.random(rng);
        }
        f
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn evaluate(&self, point: &[u64]) -> u64 {
        let f = self.field;
        let basis = MonomialBasis::new(self.n, self.degree);
        let mut acc = 0;
        for (m, &c) in basis.monomials().iter().zip(&self.coeffs) {
            if c == 0 {
                continue;
            }
            let mut term = c;
            for (&x, &e) in point.iter().zip(&m.exponents) {
                term = f.mul(term, f.pow(x, e as u64));
            }
            acc = f.add(acc, term);
        }
        acc
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.same_space(other)?;
        let f = self.field;
        Ok(Form {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, c: u64) -> Form {
        let f = self.field;
        Form {
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Form) -> Result<Form> {
        if self.n != other.n || self.field != other.field {
            return Err(Error::DimensionMismatch("forms on different spaces".into()));
        }
        let f = self.field;
        let (ba, bb) = (
            MonomialBasis::new(self.n, self.degree),
            MonomialBasis::new(self.n, other.degree),
        );
        let target = MonomialBasis::new(self.n, self.degree + other.degree);
        let mut out = Form::zero(f, self.n, self.degree + other.degree);
        let mut e = vec![0u32; self.n + 1];
        for (ma, &ca) in ba.monomials().iter().zip(&self.coeffs) {
            if ca == 0 {
                continue;
            }
            for (mb, &cb) in bb.monomials().iter().zip(&other.coeffs) {
                if cb == 0 {
                    continue;
                }
                for (slot, (x, y)) in e.iter_mut().zip(ma.exponents.iter().zip(&mb.exponents)) {
                    *slot = x + y;
                }
                let i = target.index_of(&e).expect("product degree");
                out.coeffs[i] = f.mul_add(out.coeffs[i], ca, cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Form> {
        let mut acc = Form::from_terms(self.field, self.n, &[(1, &vec![0u32; self.n + 1])])?;
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The form `x -> g(M x)` for an `(n+1) x (n+1)` matrix `M`.
    pub fn compose_linear(&self, m: &DenseMatrix) -> Result<Form> {
        if m.rows() != self.n + 1 || m.cols() != self.n + 1 {
            return Err(Error::DimensionMismatch("substitution matrix size".into()));
        }
        let f = self.field;
        // y_i = sum_j M_ij x_j as linear forms
        let ys: Vec<Form> = (0..=self.n)
            .map(|i| Form {
                field: f,
                n: self.n,
                degree: 1,
                coeffs: m.row(i).to_vec(),
            })
            .collect();
        let basis = MonomialBasis::new(self.n, self.degree);
        let mut out = Form::zero(f, self.n, self.degree);
        for (mono, &c) in basis.monomials().iter().zip(&self.coeffs) {
            if c == 0 {
                continue;
            }
            let mut term = Form::from_terms(f, self.n, &[(1, &vec![0u32; self.n + 1])])?;
            for (i, &e) in mono.exponents.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&ys[i])?;
                }
            }
            out = out.add(&term.scale(c))?;
        }
        Ok(out)
    }

    fn same_space(&self, other: &Form) -> Result<()> {
        if self.n != other.n || self.degree != other.degree || self.field != other.field {
            return Err(Error::DimensionMismatch("forms of different shape".into()));
        }
        Ok(())
    }
}

/// `sum_j coeffs[j] * u^j * v^(t-j)`. The degree is formal: leading
/// coefficients may vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    field: PrimeField,
    pub degree: u32,
    pub coeffs: Vec<u64>,
}

impl BinaryForm {
    pub fn zero(field: PrimeField, degree: u32) -> Self {
        BinaryForm {
            field,
            degree,
            coeffs: vec![0; degree as usize + 1],
        }
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        BinaryForm {
            field,
            degree: 0,
            coeffs: vec![c % field.p()],
        }
    }

    /// Coefficients listed from `v^t` up to `u^t`.
    pub fn from_coeffs(field: PrimeField, coeffs: &[i64]) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a binary form needs at least one coefficient"
        );
        BinaryForm {
            field,
            degree: coeffs.len() as u32 - 1,
            coeffs: coeffs.iter().map(|&c| field.from_i64(c)).collect(),
        }
    }

    pub fn from_raw(field: PrimeField, coeffs: Vec<u64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a binary form needs at least one coefficient"
        );
        let p = field.p();
        BinaryForm {
            field,
            degree: coeffs.len() as u32 - 1,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        }
    }

    /// `a*u + b*v`.
    pub fn linear(field: PrimeField, a: u64, b: u64) -> Self {
        BinaryForm::from_raw(field, vec![b, a])
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, degree: u32, rng: &mut R) -> Self {
        BinaryForm::from_raw(field, (0..=degree).map(|_| field.random(rng)).collect())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeff(&self, j: u32) -> FieldElement {
        self.field.elem(self.coeffs[j as usize] as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Degree in `u` of the dehomogenization `f(u, 1)`; `None` for zero.
    pub fn u_degree(&self) -> Option<u32> {
        self.coeffs.iter().rposition(|&c| c != 0).map(|d| d as u32)
    }

    /// Multiplicity of the root `(1:0)`, i.e. the power of `v` dividing it.
    pub fn multiplicity_at_infinity(&self) -> u32 {
        self.u_degree().map_or(0, |d| self.degree - d)
    }

    pub fn leading_u(&self) -> u64 {
        self.coeffs[self.degree as usize]
    }

    pub fn eval(&self, u: u64, v: u64) -> u64 {
        let f = self.field;
        let mut acc = 0;
        for (j, &c) in self.coeffs.iter().enumerate() {
            let term = f.mul(
                c,
                f.mul(
                    f.pow(u, j as u64),
                    f.pow(v, (self.degree as usize - j) as u64),
                ),
            );
            acc = f.add(acc, term);
        }
        acc
    }

    pub fn add(&self, other: &BinaryForm) -> Result<BinaryForm> {
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch(
                "binary forms of different degree".into(),
            ));
        }
        let f = self.field;
        Ok(BinaryForm {
            field: f,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &BinaryForm) -> Result<BinaryForm> {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, c: u64) -> BinaryForm {
        let f = self.field;
        BinaryForm {
            field: f,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let f = self.field;
        BinaryForm {
            field: f,
            degree: self.degree + other.degree,
            coeffs: upoly::mul(f, &self.coeffs, &other.coeffs),
        }
    }

    pub fn pow(&self, k: u32) -> BinaryForm {
        let mut acc = BinaryForm::constant(self.field, 1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative_u(&self) -> BinaryForm {
        let f = self.field;
        if self.degree == 0 {
            return BinaryForm::zero(f, 0);
        }
        let coeffs = (1..=self.degree as usize)
            .map(|j| f.mul(self.coeffs[j], j as u64 % f.p()))
            .collect();
        BinaryForm::from_raw(f, coeffs)
    }

    pub fn derivative_v(&self) -> BinaryForm {
        let f = self.field;
        if self.degree == 0 {
            return BinaryForm::zero(f, 0);
        }
        let t = self.degree as usize;
        let coeffs = (0..t)
            .map(|j| f.mul(self.coeffs[j], (t - j) as u64 % f.p()))
            .collect();
        BinaryForm::from_raw(f, coeffs)
    }

    /// `f(a u + b v, c u + d v)`.
    pub fn substitute(&self, a: u64, b: u64, c: u64, d: u64) -> BinaryForm {
        let f = self.field;
        let x = BinaryForm::linear(f, a, b);
        let y = BinaryForm::linear(f, c, d);
        let mut out = BinaryForm::zero(f, self.degree);
        for (j, &coef) in self.coeffs.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            let term = x
                .pow(j as u32)
                .mul(&y.pow(self.degree - j as u32))
                .scale(coef);
            out = out.add(&term).expect("same degree");
        }
        out
    }
}

/// Dense univariate polynomials over F_p as little-endian coefficient
/// vectors; `trim` keeps the zero polynomial as an empty vector.
pub(crate) mod upoly {
    use crate::field::PrimeField;

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.mul_add(out[i + j], x, y);
            }
        }
        out
    }

    /// Quotient and remainder; `b` must have a nonzero top coefficient.
    pub fn divrem(f: PrimeField, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let b = trim(b.to_vec());
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead_inv = f.inv(*b.last().unwrap()).expect("nonzero lead");
        let mut q = vec![0; r.len() - b.len() + 1];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + b.len() - 1], lead_inv);
            q[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(c, bj));
            }
        }
        r.truncate(b.len() - 1);
        (q, trim(r))
    }

    pub fn rem(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        divrem(f, a, b).1
    }

    pub fn monic(f: PrimeField, a: Vec<u64>) -> Vec<u64> {
        match a.last() {
            None => a,
            Some(&lead) => {
                let inv = f.inv(lead).expect("nonzero lead");
                a.into_iter().map(|c| f.mul(c, inv)).collect()
            }
        }
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    pub fn gcd(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
        while !y.is_empty() {
            let r = rem(f, &x, &y);
            x = y;
            y = r;
        }
        monic(f, x)
    }

    pub fn sub(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                f.sub(
                    a.get(i).copied().unwrap_or(0),
                    b.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        trim(out)
    }

    /// `base^e mod m`.
    pub fn powmod(f: PrimeField, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
        let mut acc = rem(f, &[1], m);
        let mut b = rem(f, base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(f, &mul(f, &acc, &b), m);
            }
            b = rem(f, &mul(f, &b, &b), m);
            e >>= 1;
        }
        acc
    }
}

/// `g = q f + r` with `r` of `u`-degree below `deg f`.
///
/// Works on the dehomogenizations `g(u,1)`, `f(u,1)`; because the `u^k`
/// coefficient of `f` is nonzero this is exact as forms, `q` has degree
/// `deg g - deg f` and `r` has the formal degree of `g`.
pub fn binary_divrem(g: &BinaryForm, f: &BinaryForm) -> Result<(BinaryForm, BinaryForm)> {
    if g.degree < f.degree {
        return Err(Error::DegreeTooLow {
            dividend: g.degree,
            divisor: f.degree,
        });
    }
    if f.leading_u() == 0 {
        return Err(Error::LeadingZero);
    }
    let field = g.field;
    let (q, r) = upoly::divrem(field, &g.coeffs, &f.coeffs);
    let mut quotient = BinaryForm::zero(field, g.degree - f.degree);
    quotient.coeffs[..q.len()].copy_from_slice(&q);
    let mut remainder = BinaryForm::zero(field, g.degree);
    remainder.coeffs[..r.len()].copy_from_slice(&r);
    Ok((quotient, remainder))
}

/// Gcd as binary forms, normalized so its dehomogenization is monic.
pub fn binary_gcd(a: &BinaryForm, b: &BinaryForm) -> BinaryForm {
    let field = a.field;
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let g = upoly::gcd(field, &a.coeffs, &b.coeffs);
    let inf = a
        .multiplicity_at_infinity()
        .min(b.multiplicity_at_infinity());
    let mut coeffs = g;
    // homogenize with v^inf: the coefficient list already encodes u^j v^(deg-j)
    let degree = coeffs.len() as u32 - 1 + inf;
    coeffs.resize(degree as usize + 1, 0);
    BinaryForm {
        field,
        degree,
        coeffs,
    }
}

/// A point of P^1, scaled so the first nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct P1Point {
    pub u: u64,
    pub v: u64,
}

impl P1Point {
    pub fn new(field: PrimeField, u: u64, v: u64) -> Result<Self> {
        let (u, v) = (u % field.p(), v % field.p());
        if u != 0 {
            let inv = field.inv(u)?;
            Ok(P1Point {
                u: 1,
                v: field.mul(v, inv),
            })
        } else if v != 0 {
            Ok(P1Point { u: 0, v: 1 })
        } else {
            Err(Error::ZeroPoint)
        }
    }

    pub const INFINITY: P1Point = P1Point { u: 1, v: 0 };

    /// The affine coordinate `u / v`, `None` at `(1:0)`.
    pub fn affine(&self, field: PrimeField) -> Option<u64> {
        (self.v != 0).then(|| field.mul(self.u, field.inv(self.v).expect("nonzero")))
    }

    /// Enumerates all `p + 1` points.
    pub fn all(field: PrimeField) -> impl Iterator<Item = P1Point> {
        std::iter::once(P1Point { u: 0, v: 1 }).chain((0..field.p()).map(|v| P1Point { u: 1, v }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    /// Rational roots with multiplicity; finite roots `(a:1)` by increasing
    /// `a`, then `(1:0)`.
    pub roots: Vec<(P1Point, u32)>,
    /// Squarefree over the algebraic closure (valid while `p > deg f`).
    pub squarefree: bool,
}

impl RootReport {
    pub fn rational_degree(&self) -> u32 {
        self.roots.iter().map(|(_, m)| m).sum()
    }
}

/// Rational roots of a binary form, with multiplicities, plus a
/// squarefreeness verdict over the algebraic closure.
pub fn binary_roots(f: &BinaryForm) -> Result<RootReport> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let field = f.field;
    let h = upoly::trim(f.coeffs.clone());
    let mut finite = Vec::new();
    if h.len() > 1 {
        let x = vec![0, 1];
        let frob = upoly::powmod(field, &x, field.p(), &h);
        let rational_part = upoly::gcd(field, &h, &upoly::sub(field, &frob, &x));
        split_linear(field, rational_part, &mut finite);
        finite.sort_unstable();
    }
    let mut roots = Vec::with_capacity(finite.len() + 1);
    for a in finite {
        let mut mult = 0;
        let mut rest = h.clone();
        let lin = vec![field.neg(a), 1];
        loop {
            let (q, r) = upoly::divrem(field, &rest, &lin);
            if !r.is_empty() {
                break;
            }
            mult += 1;
            rest = q;
        }
        roots.push((P1Point::new(field, a, 1)?, mult));
    }
    let at_inf = f.multiplicity_at_infinity();
    if at_inf > 0 {
        roots.push((P1Point::INFINITY, at_inf));
    }
    Ok(RootReport {
        roots,
        squarefree: is_squarefree(f),
    })
}

/// Squarefree over the algebraic closure: the partial derivatives have no
/// common root. Relies on Euler's identity, so it needs `p > deg f`.
pub fn is_squarefree(f: &BinaryForm) -> bool {
    !f.is_zero() && (f.degree == 0 || binary_gcd(&f.derivative_u(), &f.derivative_v()).degree == 0)
}

/// Splits a monic product of distinct linear factors into its roots.
fn split_linear(field: PrimeField, g: Vec<u64>, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(field.neg(g[0])),
        _ => {
            let half = (field.p() - 1) / 2;
            for shift in 0..field.p() {
                let base = vec![shift, 1];
                let pw = upoly::powmod(field, &base, half, &g);
                let s = upoly::gcd(field, &g, &upoly::sub(field, &pw, &[1]));
                if s.len() > 1 && s.len() < g.len() {
                    let (other, _) = upoly::divrem(field, &g, &s);
                    split_linear(field, s, out);
                    split_linear(field, upoly::monic(field, other), out);
                    return;
                }
            }
            unreachable!("distinct linear factors always split for some shift");
        }
    }
}

/// `g(u A + v B)`.
pub fn restrict_form_to_line(g: &Form, a: &ProjPoint, b: &ProjPoint) -> Result<BinaryForm> {
    if a.coords().len() != g.n + 1 || b.coords().len() != g.n + 1 {
        return Err(Error::DimensionMismatch(
            "points and form live in different spaces".into(),
        ));
    }
    if a.is_proportional(b) {
        return Err(Error::DegenerateSpan);
    }
    let field = g.field;
    let coords: Vec<BinaryForm> = a
        .coords()
        .iter()
        .zip(b.coords())
        .map(|(&x, &y)| BinaryForm::linear(field, x, y))
        .collect();
    Ok(substitute_binary_forms(g, &coords))
}

/// `g(phi_0, ..., phi_n)` for the coordinate forms of a rational curve.
pub fn restrict_form_to_param_curve(g: &Form, phi: &RationalCurveParam) -> Result<BinaryForm> {
    if phi.coords().len() != g.n + 1 {
        return Err(Error::DimensionMismatch(
            "curve and form live in different spaces".into(),
        ));
    }
    phi.check_base_point_free()?;
    Ok(substitute_binary_forms(g, phi.coords()))
}

fn substitute_binary_forms(g: &Form, coords: &[BinaryForm]) -> BinaryForm {
    let field = g.field;
    let d = coords[0].degree;
    let t = g.degree;
    let mut powers: Vec<Vec<BinaryForm>> = Vec::with_capacity(coords.len());
    for c in coords {
        let mut row = vec![BinaryForm::constant(field, 1)];
        for e in 1..=t {
            let next = row[e as usize - 1].mul(c);
            row.push(next);
        }
        powers.push(row);
    }
    let basis = MonomialBasis::new(g.n, t);
    let mut out = BinaryForm::zero(field, t * d);
    for (m, &c) in basis.monomials().iter().zip(&g.coeffs) {
        if c == 0 {
            continue;
        }
        let mut term = BinaryForm::constant(field, c);
        for (i, &e) in m.exponents.iter().enumerate() {
            term = term.mul(&powers[i][e as usize]);
        }
        out = out.add(&term).expect("degree t*d");
    }
    out
}

/// A section of O(a,b) on P^1 x P^1, over the basis
/// `u0^i u1^(a-i) v0^j v1^(b-j)` stored at index `i*(b+1) + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiDegreeForm {
    field: PrimeField,
    pub a: u32,
    pub b: u32,
    pub coeffs: Vec<u64>,
}

impl BiDegreeForm {
    pub fn zero(field: PrimeField, a: u32, b: u32) -> Self {
        BiDegreeForm {
            field,
            a,
            b,
            coeffs: vec![0; ((a + 1) * (b + 1)) as usize],
        }
    }

    pub fn index(&self, i: u32, j: u32) -> usize {
        (i * (self.b + 1) + j) as usize
    }

    /// Adds `c * u0^i u1^(a-i) v0^j v1^(b-j)`.
    pub fn with_term(mut self, c: i64, i: u32, j: u32) -> Self {
        let idx = self.index(i, j);
        self.coeffs[idx] = self.field.add(self.coeffs[idx], self.field.from_i64(c));
        self
    }
}

/// Values of all bidegree-(a,b) basis monomials at a point, in
/// [`BiDegreeForm`] index order.
pub fn bimonomial_values(field: PrimeField, a: u32, b: u32, pt: (P1Point, P1Point)) -> Vec<u64> {
    let (u, v) = pt;
    let mut out = Vec::with_capacity(((a + 1) * (b + 1)) as usize);
    for i in 0..=a {
        let ui = field.mul(field.pow(u.u, i as u64), field.pow(u.v, (a - i) as u64));
        for j in 0..=b {
            let vj = field.mul(field.pow(v.u, j as u64), field.pow(v.v, (b - j) as u64));
            out.push(field.mul(ui, vj));
        }
    }
    out
}

pub fn evaluate_biform(form: &BiDegreeForm, pt: (P1Point, P1Point)) -> FieldElement {
    let f = form.field;
    let vals = bimonomial_values(f, form.a, form.b, pt);
    let v = vals
        .iter()
        .zip(&form.coeffs)
        .fold(0, |acc, (&x, &c)| f.mul_add(acc, x, c));
    f.elem(v as i64)
}
