//! Points, lines and hypersurfaces of P^n over F_p, quadric normal forms,
//! Segre coordinates on the quadric `x0 x3 = x1 x2`, and line sections.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::DenseMatrix;
use crate::poly::{binary_roots, is_squarefree, restrict_form_to_line, BinaryForm, Form, P1Point};

/// A point of P^n, scaled so that its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    field: PrimeField,
    coords: Vec<u64>,
}

impl ProjPoint {
    pub fn new(field: PrimeField, coords: Vec<u64>) -> Result<Self> {
        let p = field.p();
        let mut coords: Vec<u64> = coords.into_iter().map(|c| c % p).collect();
        let lead = coords
            .iter()
            .copied()
            .find(|&c| c != 0)
            .ok_or(Error::ZeroPoint)?;
        let inv = field.inv(lead)?;
        for c in coords.iter_mut() {
            *c = field.mul(*c, inv);
        }
        Ok(ProjPoint { field, coords })
    }

    pub fn from_i64(field: PrimeField, coords: &[i64]) -> Result<Self> {
        ProjPoint::new(field, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut R) -> Self {
        loop {
            let coords = (0..=n).map(|_| field.random(rng)).collect();
            if let Ok(p) = ProjPoint::new(field, coords) {
                return p;
            }
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Points are canonical, so proportional means equal.
    pub fn is_proportional(&self, other: &ProjPoint) -> bool {
        self == other
    }

    /// `a*self + b*other`, `None` if that vanishes.
    pub fn combine(&self, a: u64, other: &ProjPoint, b: u64) -> Option<ProjPoint> {
        let f = self.field;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&x, &y)| f.add(f.mul(a, x), f.mul(b, y)))
            .collect();
        ProjPoint::new(f, coords).ok()
    }

    /// Image under `x -> M x`.
    pub fn transform(&self, m: &DenseMatrix) -> Result<ProjPoint> {
        ProjPoint::new(self.field, m.mul_vec(&self.coords)?)
    }
}

/// A line of P^n stored by the reduced row-echelon basis of its 2-plane, so
/// equal lines compare equal. Points are `u*rows[0] + v*rows[1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line {
    field: PrimeField,
    rows: [Vec<u64>; 2],
    pivots: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineMeet {
    Disjoint,
    Point(ProjPoint),
    Same,
}

impl Line {
    pub fn through(a: &ProjPoint, b: &ProjPoint) -> Result<Line> {
        if a.coords.len() != b.coords.len() {
            return Err(Error::DimensionMismatch(
                "points in different spaces".into(),
            ));
        }
        let field = a.field;
        let n1 = a.coords.len();
        let mut m =
            DenseMatrix::from_raw(field, 2, n1, [a.coords.clone(), b.coords.clone()].concat())?;
        let pivots = m.echelon(true);
        if pivots.len() < 2 {
            return Err(Error::DegenerateSpan);
        }
        Ok(Line {
            field,
            rows: [m.row(0).to_vec(), m.row(1).to_vec()],
            pivots: [pivots[0], pivots[1]],
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.rows[0].len() - 1
    }

    pub fn basis(&self) -> [ProjPoint; 2] {
        [
            ProjPoint::new(self.field, self.rows[0].clone()).expect("basis row"),
            ProjPoint::new(self.field, self.rows[1].clone()).expect("basis row"),
        ]
    }

    pub fn basis_rows(&self) -> &[Vec<u64>; 2] {
        &self.rows
    }

    pub fn point_at(&self, t: P1Point) -> ProjPoint {
        let f = self.field;
        let coords = self.rows[0]
            .iter()
            .zip(&self.rows[1])
            .map(|(&x, &y)| f.add(f.mul(t.u, x), f.mul(t.v, y)))
            .collect();
        ProjPoint::new(f, coords).expect("rows are independent")
    }

    /// Parameter of a point in the RREF basis; `None` if it is off the line.
    pub fn parameter_of(&self, pt: &ProjPoint) -> Option<P1Point> {
        let (u, v) = (pt.coords[self.pivots[0]], pt.coords[self.pivots[1]]);
        let t = P1Point::new(self.field, u, v).ok()?;
        (self.point_at(t) == *pt).then_some(t)
    }

    pub fn contains(&self, pt: &ProjPoint) -> bool {
        self.parameter_of(pt).is_some()
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> ProjPoint {
        self.point_at(random_p1(self.field, rng))
    }

    pub fn meet(&self, other: &Line) -> LineMeet {
        if self == other {
            return LineMeet::Same;
        }
        let f = self.field;
        let n1 = self.rows[0].len();
        // columns r0, r1, s0, s1: a kernel vector gives a*r0 + b*r1 = -(c*s0 + d*s1)
        let mut data = Vec::with_capacity(n1 * 4);
        for i in 0..n1 {
            data.extend_from_slice(&[
                self.rows[0][i],
                self.rows[1][i],
                other.rows[0][i],
                other.rows[1][i],
            ]);
        }
        let m = DenseMatrix::from_raw(f, n1, 4, data).expect("shape");
        let kernel = m.kernel_basis();
        match kernel.len() {
            0 => LineMeet::Disjoint,
            1 => {
                let k = &kernel[0];
                LineMeet::Point(self.point_at(P1Point::new(f, k[0], k[1]).expect("nonzero kernel")))
            }
            _ => LineMeet::Same,
        }
    }

    pub fn transform(&self, m: &DenseMatrix) -> Result<Line> {
        let [a, b] = self.basis();
        Line::through(&a.transform(m)?, &b.transform(m)?)
    }
}

/// Uniform over the `p + 1` points of P^1(F_p).
pub fn random_p1<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> P1Point {
    let r = rng.gen_range(0..=field.p());
    if r == field.p() {
        P1Point { u: 0, v: 1 }
    } else {
        P1Point { u: 1, v: r }
    }
}

pub fn line_through(a: &ProjPoint, b: &ProjPoint) -> Result<Line> {
    Line::through(a, b)
}

/// The zero locus of a nonzero form. Multiple structures such as `l^k` are
/// allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypersurface {
    form: Form,
}

impl Hypersurface {
    pub fn new(form: Form) -> Result<Self> {
        if form.is_zero() {
            return Err(Error::ZeroForm);
        }
        Ok(Hypersurface { form })
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn degree(&self) -> u32 {
        self.form.degree()
    }

    pub fn ambient_dim(&self) -> usize {
        self.form.ambient_dim()
    }

    pub fn field(&self) -> PrimeField {
        self.form.field()
    }

    pub fn contains(&self, pt: &ProjPoint) -> bool {
        self.form.evaluate(pt.coords()) == 0
    }

    /// Pull-back along `x -> M x`; a point `q` lies on the result iff `M q`
    /// lies on `self`.
    pub fn pull_back(&self, m: &DenseMatrix) -> Result<Hypersurface> {
        Hypersurface::new(self.form.compose_linear(m)?)
    }

    /// A rational point found by intersecting random lines with the
    /// hypersurface.
    pub fn random_rational_point<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        budget: usize,
    ) -> Result<ProjPoint> {
        let f = self.field();
        let n = self.ambient_dim();
        for _ in 0..budget {
            let a = ProjPoint::random(f, n, rng);
            let b = ProjPoint::random(f, n, rng);
            let Ok(line) = Line::through(&a, &b) else {
                continue;
            };
            let section = line_section(&line, self, true);
            if section.contained {
                return Ok(line.random_point(rng));
            }
            let pts = section.rational_points.unwrap_or_default();
            if !pts.is_empty() {
                let pick = rng.gen_range(0..pts.len());
                return Ok(pts[pick].0.clone());
            }
        }
        Err(Error::RetryExhausted {
            what: "looking for a rational point on a hypersurface".into(),
            attempts: budget,
        })
    }
}

/// Uniformly random nonzero coefficient vector of degree `k`.
pub fn random_hypersurface<R: Rng + ?Sized>(
    field: PrimeField,
    n: usize,
    k: u32,
    rng: &mut R,
) -> Hypersurface {
    loop {
        if let Ok(h) = Hypersurface::new(Form::random(field, n, k, rng)) {
            return h;
        }
    }
}

/// The hyperplane `l = 0` counted `k` times.
pub fn multiple_hyperplane(l: &Form, k: u32) -> Result<Hypersurface> {
    if l.degree() != 1 {
        return Err(Error::DimensionMismatch("expected a linear form".into()));
    }
    Hypersurface::new(l.pow(k)?)
}

/// A quadric in a fixed normal form of prescribed rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricSpec {
    pub rank: usize,
    pub hypersurface: Hypersurface,
    /// A coordinate the form is linear in, used to solve for rational points.
    solve_var: usize,
}

impl QuadricSpec {
    pub fn ambient_dim(&self) -> usize {
        self.hypersurface.ambient_dim()
    }

    pub fn is_segre(&self) -> bool {
        self.rank == 4 && self.ambient_dim() == 3
    }
}

/// Normal forms: rank 3 is `x0 x2 - x1^2`; rank at least 4 starts with the
/// Segre form `x0 x3 - x1 x2` and continues with hyperbolic pairs
/// `x4 x5 + x6 x7 + ...`, ending with a square when the rank is odd.
pub fn quadric_normal_form(field: PrimeField, n: usize, rank: usize) -> Result<QuadricSpec> {
    if rank < 3 || rank > n + 1 {
        return Err(Error::BadRank { rank, max: n + 1 });
    }
    let e = |idx: &[usize]| {
        let mut v = vec![0u32; n + 1];
        for &i in idx {
            v[i] += 1;
        }
        v
    };
    let mut terms: Vec<(i64, Vec<u32>)> = Vec::new();
    let solve_var;
    if rank == 3 {
        terms.push((1, e(&[0, 2])));
        terms.push((-1, e(&[1, 1])));
        solve_var = 2;
    } else {
        terms.push((1, e(&[0, 3])));
        terms.push((-1, e(&[1, 2])));
        solve_var = 3;
        let mut next = 4;
        while next + 1 < rank {
            terms.push((1, e(&[next, next + 1])));
            next += 2;
        }
        if next < rank {
            terms.push((1, e(&[next, next])));
        }
    }
    let refs: Vec<(i64, &[u32])> = terms.iter().map(|(c, v)| (*c, v.as_slice())).collect();
    Ok(QuadricSpec {
        rank,
        hypersurface: Hypersurface::new(Form::from_terms(field, n, &refs)?)?,
        solve_var,
    })
}

/// Symmetric matrix `B` with `q(x) = x^T B x / 2`; needs `p` odd.
pub fn gram_matrix(q: &Form) -> Result<DenseMatrix> {
    if q.degree() != 2 {
        return Err(Error::DimensionMismatch(
            "Gram matrix of a non-quadratic form".into(),
        ));
    }
    let f = q.field();
    let n1 = q.ambient_dim() + 1;
    let mut g = DenseMatrix::zeros(f, n1, n1);
    let basis = crate::poly::MonomialBasis::new(n1 - 1, 2);
    for (m, &c) in basis.monomials().iter().zip(q.coeffs()) {
        let vars: Vec<usize> = m
            .exponents
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        let (i, j) = (vars[0], vars[1]);
        if i == j {
            g.set(i, i, f.mul(2, c));
        } else {
            g.set(i, j, c);
            g.set(j, i, c);
        }
    }
    Ok(g)
}

/// A rational point of a normal-form quadric: random values everywhere but
/// one coordinate the form is linear in, which is then solved for.
pub fn rational_point_on_quadric<R: Rng + ?Sized>(
    q: &QuadricSpec,
    rng: &mut R,
) -> Result<ProjPoint> {
    let form = q.hypersurface.form();
    let f = form.field();
    let n = q.ambient_dim();
    const BUDGET: usize = 100;
    for _ in 0..BUDGET {
        let mut x: Vec<u64> = (0..=n).map(|_| f.random(rng)).collect();
        x[q.solve_var] = 0;
        let beta = form.evaluate(&x);
        x[q.solve_var] = 1;
        let alpha = f.sub(form.evaluate(&x), beta);
        if alpha == 0 {
            continue;
        }
        x[q.solve_var] = f.mul(f.neg(beta), f.inv(alpha)?);
        if let Ok(pt) = ProjPoint::new(f, x) {
            return Ok(pt);
        }
    }
    Err(Error::RetryExhausted {
        what: "sampling a rational point on a quadric".into(),
        attempts: BUDGET,
    })
}

/// The Segre quadric `x0 x3 - x1 x2` of P^3.
pub fn segre_quadric(field: PrimeField) -> QuadricSpec {
    quadric_normal_form(field, 3, 4).expect("rank 4 in P^3")
}

/// `(u, v) -> (u0 v0 : u0 v1 : u1 v0 : u1 v1)`.
pub fn segre_point(field: PrimeField, u: P1Point, v: P1Point) -> ProjPoint {
    ProjPoint::new(
        field,
        vec![
            field.mul(u.u, v.u),
            field.mul(u.u, v.v),
            field.mul(u.v, v.u),
            field.mul(u.v, v.v),
        ],
    )
    .expect("product of nonzero points")
}

/// Inverse of [`segre_point`].
pub fn segre_coords(pt: &ProjPoint) -> Result<(P1Point, P1Point)> {
    let f = pt.field();
    let x = pt.coords();
    if x.len() != 4 || f.mul(x[0], x[3]) != f.mul(x[1], x[2]) {
        return Err(Error::NotOnQuadric);
    }
    let u = if x[0] != 0 || x[2] != 0 {
        P1Point::new(f, x[0], x[2])?
    } else {
        P1Point::new(f, x[1], x[3])?
    };
    let v = if x[0] != 0 || x[1] != 0 {
        P1Point::new(f, x[0], x[1])?
    } else {
        P1Point::new(f, x[2], x[3])?
    };
    Ok((u, v))
}

/// The ruling line `{u} x P^1`, of class (1,0).
pub fn segre_line_fixed_u(field: PrimeField, u: P1Point) -> Line {
    let a = segre_point(field, u, P1Point::INFINITY);
    let b = segre_point(field, u, P1Point { u: 0, v: 1 });
    Line::through(&a, &b).expect("distinct points")
}

/// The ruling line `P^1 x {v}`, of class (0,1).
pub fn segre_line_fixed_v(field: PrimeField, v: P1Point) -> Line {
    let a = segre_point(field, P1Point::INFINITY, v);
    let b = segre_point(field, P1Point { u: 0, v: 1 }, v);
    Line::through(&a, &b).expect("distinct points")
}

/// `W` restricted to a line, with the parametrization that produced it.
#[derive(Clone, Debug)]
pub struct LineSection {
    pub line: Line,
    /// `A` and `B` with the line parametrized as `u*A + v*B` and `f(A) != 0`
    /// whenever the line is not contained in `W`.
    pub a: ProjPoint,
    pub b: ProjPoint,
    pub restriction: BinaryForm,
    pub contained: bool,
    pub transversal: bool,
    pub rational_points: Option<Vec<(ProjPoint, u32)>>,
}

impl LineSection {
    pub fn point_at(&self, t: P1Point) -> ProjPoint {
        self.a
            .combine(t.u, &self.b, t.v)
            .expect("parametrization points are independent")
    }
}

/// Candidate parametrizations: `A = r0 + c r1` for `c = 0..=k`, then `A = r1`;
/// these are `k + 2` distinct points, so one is off `W` unless `L` lies in it.
pub fn line_section(line: &Line, w: &Hypersurface, want_points: bool) -> LineSection {
    let f = line.field();
    let [r0, r1] = line.basis();
    let k = w.degree() as u64;
    let mut choice = None;
    for c in 0..=k.min(f.p() - 1) {
        let a = r0.combine(1, &r1, c).expect("independent rows");
        if !w.contains(&a) {
            choice = Some((a, r1.clone()));
            break;
        }
    }
    if choice.is_none() && !w.contains(&r1) {
        choice = Some((r1.clone(), r0.clone()));
    }
    let (a, b, contained) = match choice {
        Some((a, b)) => (a, b, false),
        None => (r0, r1, true),
    };
    let restriction = restrict_form_to_line(w.form(), &a, &b).expect("independent points");
    let contained = contained || restriction.is_zero();
    let transversal = !contained && is_squarefree(&restriction);
    let rational_points = (want_points && !contained).then(|| {
        binary_roots(&restriction)
            .expect("nonzero restriction")
            .roots
            .into_iter()
            .map(|(t, m)| (a.combine(t.u, &b, t.v).expect("independent"), m))
            .collect()
    });
    LineSection {
        line: line.clone(),
        a,
        b,
        restriction,
        contained,
        transversal,
        rational_points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn big() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(big(), c).unwrap()
    }

    #[test]
    fn line_examples() {
        let l = line_through(&pt(&[1, 0, 0, 0]), &pt(&[0, 1, 0, 0])).unwrap();
        assert_eq!(l.basis_rows()[0], vec![1, 0, 0, 0]);
        assert_eq!(l.basis_rows()[1], vec![0, 1, 0, 0]);
        assert!(!l.contains(&pt(&[0, 0, 1, 0])));
        assert_eq!(
            line_through(&pt(&[1, 2, 3, 4]), &pt(&[2, 4, 6, 8])),
            Err(Error::DegenerateSpan)
        );

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = ProjPoint::random(big(), 3, &mut rng);
            let b = ProjPoint::random(big(), 3, &mut rng);
            let l = line_through(&a, &b).unwrap();
            assert!(l.contains(&a) && l.contains(&b));
            assert_eq!(l, line_through(&b, &a).unwrap());
            assert_eq!(l, line_through(&a, &a.combine(1, &b, 1).unwrap()).unwrap());
        }
    }

    #[test]
    fn meeting_lines() {
        let l = line_through(&pt(&[1, 0, 0, 0]), &pt(&[0, 1, 0, 0])).unwrap();
        let m = line_through(&pt(&[1, 1, 0, 0]), &pt(&[0, 0, 1, 0])).unwrap();
        let skew = line_through(&pt(&[0, 0, 1, 0]), &pt(&[0, 0, 0, 1])).unwrap();
        assert_eq!(l.meet(&m), LineMeet::Point(pt(&[1, 1, 0, 0])));
        assert_eq!(l.meet(&skew), LineMeet::Disjoint);
        assert_eq!(l.meet(&l.clone()), LineMeet::Same);
    }

    #[test]
    fn quadric_normal_forms() {
        let f = big();
        let q = quadric_normal_form(f, 3, 4).unwrap();
        let expect = Form::from_terms(f, 3, &[(1, &[1, 0, 0, 1]), (-1, &[0, 1, 1, 0])]).unwrap();
        assert_eq!(q.hypersurface.form(), &expect);
        assert_eq!(gram_matrix(q.hypersurface.form()).unwrap().rank(), 4);

        let q = quadric_normal_form(f, 4, 4).unwrap();
        assert_eq!(gram_matrix(q.hypersurface.form()).unwrap().rank(), 4);
        let q = quadric_normal_form(f, 4, 5).unwrap();
        let expect = Form::from_terms(
            f,
            4,
            &[
                (1, &[1, 0, 0, 1, 0]),
                (-1, &[0, 1, 1, 0, 0]),
                (1, &[0, 0, 0, 0, 2]),
            ],
        )
        .unwrap();
        assert_eq!(q.hypersurface.form(), &expect);
        for n in 3..7 {
            for rank in 3..=n + 1 {
                let q = quadric_normal_form(f, n, rank).unwrap();
                assert_eq!(
                    gram_matrix(q.hypersurface.form()).unwrap().rank(),
                    rank,
                    "n={n} rank={rank}"
                );
            }
        }
        assert!(matches!(
            quadric_normal_form(f, 3, 5),
            Err(Error::BadRank { .. })
        ));
        assert!(matches!(
            quadric_normal_form(f, 3, 2),
            Err(Error::BadRank { .. })
        ));
    }

    #[test]
    fn segre_examples() {
        let f = big();
        let inf = P1Point::INFINITY;
        let one = P1Point { u: 1, v: 1 };
        let zero = P1Point { u: 0, v: 1 };
        assert_eq!(segre_coords(&pt(&[1, 0, 0, 0])).unwrap(), (inf, inf));
        assert_eq!(segre_coords(&pt(&[1, 1, 1, 1])).unwrap(), (one, one));
        assert_eq!(segre_coords(&pt(&[0, 0, 0, 1])).unwrap(), (zero, zero));
        assert_eq!(segre_coords(&pt(&[1, 0, 0, 1])), Err(Error::NotOnQuadric));

        let q = segre_quadric(f);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = rational_point_on_quadric(&q, &mut rng).unwrap();
            let (u, v) = segre_coords(&x).unwrap();
            assert_eq!(segre_point(f, u, v), x);
        }
    }

    #[test]
    fn ruling_lines_lie_on_segre() {
        let f = big();
        let q = segre_quadric(f);
        let u = P1Point { u: 1, v: 7 };
        for line in [segre_line_fixed_u(f, u), segre_line_fixed_v(f, u)] {
            assert!(line_section(&line, &q.hypersurface, false).contained);
        }
        assert!(matches!(
            segre_line_fixed_u(f, u).meet(&segre_line_fixed_v(f, P1Point::INFINITY)),
            LineMeet::Point(_)
        ));
        assert_eq!(
            segre_line_fixed_u(f, u).meet(&segre_line_fixed_u(f, P1Point::INFINITY)),
            LineMeet::Disjoint
        );
    }

    #[test]
    fn section_examples() {
        let f = big();
        let q = segre_quadric(f);
        let l = line_through(&pt(&[1, 0, 0, 0]), &pt(&[0, 1, 0, 0])).unwrap();
        let s = line_section(&l, &q.hypersurface, true);
        assert!(s.contained && !s.transversal);

        let l = line_through(&pt(&[1, 0, 0, 0]), &pt(&[0, 0, 0, 1])).unwrap();
        let s = line_section(&l, &q.hypersurface, true);
        assert!(!s.contained && s.transversal);
        let pts = s.rational_points.unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts
            .iter()
            .all(|(x, m)| q.hypersurface.contains(x) && *m == 1));
        let found: Vec<ProjPoint> = pts.into_iter().map(|(x, _)| x).collect();
        assert!(found.contains(&pt(&[1, 0, 0, 0])) && found.contains(&pt(&[0, 0, 0, 1])));
        assert_ne!(s.restriction.leading_u(), 0);
    }

    #[test]
    fn tangent_line_is_not_transversal() {
        let f = big();
        let q = quadric_normal_form(f, 3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = rational_point_on_quadric(&q, &mut rng).unwrap();
        let x = p.coords();
        // gradient of x0x3 - x1x2
        let grad = [x[3], f.neg(x[2]), f.neg(x[1]), x[0]];
        // a direction with grad . d = 0, solved for the last pivot coordinate
        let mut d: Vec<u64> = (0..4).map(|_| f.random(&mut rng)).collect();
        let j = (0..4).rev().find(|&i| grad[i] != 0).unwrap();
        d[j] = 0;
        let dot = (0..4).fold(0, |acc, i| f.mul_add(acc, grad[i], d[i]));
        d[j] = f.mul(f.neg(dot), f.inv(grad[j]).unwrap());
        let dir = ProjPoint::new(f, d).unwrap();
        let l = line_through(&p, &dir).unwrap();
        let s = line_section(&l, &q.hypersurface, true);
        assert!(!s.contained);
        assert!(!s.transversal);
        let pts = s.rational_points.unwrap();
        assert_eq!(pts, vec![(p, 2)]);
    }

    #[test]
    fn hypersurface_constructors() {
        let f = big();
        let x0 = Form::linear(f, &[1, 0, 0, 0]);
        let h = multiple_hyperplane(&x0, 3).unwrap();
        assert_eq!(
            h.form(),
            &Form::from_terms(f, 3, &[(1, &[3, 0, 0, 0])]).unwrap()
        );
        let l = Form::linear(f, &[1, 1, 0, 0]);
        let h = multiple_hyperplane(&l, 2).unwrap();
        let expect = Form::from_terms(
            f,
            3,
            &[(1, &[2, 0, 0, 0]), (2, &[1, 1, 0, 0]), (1, &[0, 2, 0, 0])],
        )
        .unwrap();
        assert_eq!(h.form(), &expect);

        let a = random_hypersurface(f, 3, 3, &mut ChaCha8Rng::seed_from_u64(42));
        let b = random_hypersurface(f, 3, 3, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }

    #[test]
    fn quadric_points_spread() {
        let f = big();
        let q = quadric_normal_form(f, 4, 5).unwrap();
        let mut seen = std::collections::HashSet::new();
        for seed in 0..100 {
            let x = rational_point_on_quadric(&q, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert!(q.hypersurface.contains(&x));
            seen.insert(x);
        }
        assert_eq!(seen.len(), 100);
    }
}
