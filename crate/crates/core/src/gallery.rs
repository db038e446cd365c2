//! Fixed degenerate configurations with known postulation, and the
//! inductive chain of trees on a cubic surface built from ruling lines of
//! smooth quadrics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::geometry::{
    line_section, random_p1, segre_coords, segre_point, segre_quadric, Hypersurface, Line,
    LineMeet, ProjPoint,
};
use crate::matrix::DenseMatrix;
use crate::poly::P1Point;
use crate::trees::{
    random_tree, tree_from_lines, Curve, Forest, TreeConstraints, TreeCurve, TreeType,
};

const BUDGET: usize = 200;

/// A smooth quadric of P^3 given as the image of the Segre quadric
/// `x0 x3 = x1 x2` under an invertible linear map, with its two rulings.
/// Lines with fixed `u` have class (1,0), lines with fixed `v` class (0,1).
#[derive(Clone, Debug)]
pub struct SegreFrame {
    field: PrimeField,
    /// `q` lies on the quadric iff `to_segre * q` lies on the Segre quadric.
    to_segre: DenseMatrix,
    from_segre: DenseMatrix,
    surface: Hypersurface,
}

impl SegreFrame {
    pub fn standard(field: PrimeField) -> Self {
        SegreFrame {
            field,
            to_segre: DenseMatrix::identity(field, 4),
            from_segre: DenseMatrix::identity(field, 4),
            surface: segre_quadric(field).hypersurface,
        }
    }

    /// The Segre quadric moved by a random projectivity.
    pub fn random<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> Self {
        loop {
            let m = DenseMatrix::random(field, 4, 4, rng);
            if let Ok(inv) = m.inverse() {
                let surface = segre_quadric(field)
                    .hypersurface
                    .pull_back(&m)
                    .expect("invertible");
                return SegreFrame {
                    field,
                    to_segre: m,
                    from_segre: inv,
                    surface,
                };
            }
        }
    }

    pub fn surface(&self) -> &Hypersurface {
        &self.surface
    }

    pub fn coords(&self, pt: &ProjPoint) -> Result<(P1Point, P1Point)> {
        segre_coords(&pt.transform(&self.to_segre)?)
    }

    pub fn point(&self, u: P1Point, v: P1Point) -> ProjPoint {
        segre_point(self.field, u, v)
            .transform(&self.from_segre)
            .expect("invertible")
    }

    /// The (1,0) line through all points with first coordinate `u`.
    pub fn line_u(&self, u: P1Point) -> Line {
        let a = self.point(u, P1Point::INFINITY);
        let b = self.point(u, P1Point { u: 0, v: 1 });
        Line::through(&a, &b).expect("distinct points")
    }

    /// The (0,1) line through all points with second coordinate `v`.
    pub fn line_v(&self, v: P1Point) -> Line {
        let a = self.point(P1Point::INFINITY, v);
        let b = self.point(P1Point { u: 0, v: 1 }, v);
        Line::through(&a, &b).expect("distinct points")
    }

    /// Rational points of `line ∩ Q` when the line is not in `Q`.
    pub fn rational_meets(&self, line: &Line) -> Vec<ProjPoint> {
        let s = line_section(line, &self.surface, true);
        s.rational_points
            .unwrap_or_default()
            .into_iter()
            .map(|(p, _)| p)
            .collect()
    }
}

fn random_plane_point<R: Rng + ?Sized>(plane: &[ProjPoint; 3], rng: &mut R) -> ProjPoint {
    let f = plane[0].field();
    loop {
        let (a, b, c) = (f.random(rng), f.random(rng), f.random(rng));
        let Some(ab) = plane[0].combine(a, &plane[1], b) else {
            continue;
        };
        if let Some(p) = ab.combine(1, &plane[2], c) {
            return p;
        }
    }
}

fn random_plane<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> [ProjPoint; 3] {
    loop {
        let pts = [0, 1, 2].map(|_| ProjPoint::random(field, 3, rng));
        let rows: Vec<u64> = pts.iter().flat_map(|p| p.coords().to_vec()).collect();
        if DenseMatrix::from_raw(field, 3, 4, rows)
            .expect("shape")
            .rank()
            == 3
        {
            return pts;
        }
    }
}

fn random_line_in_plane<R: Rng + ?Sized>(plane: &[ProjPoint; 3], rng: &mut R) -> Line {
    loop {
        let a = random_plane_point(plane, rng);
        let b = random_plane_point(plane, rng);
        if let Ok(l) = Line::through(&a, &b) {
            return l;
        }
    }
}

/// A line through `p` and a fresh random point.
fn random_line_through<R: Rng + ?Sized>(p: &ProjPoint, rng: &mut R) -> Line {
    loop {
        let q = ProjPoint::random(p.field(), p.ambient_dim(), rng);
        if let Ok(l) = Line::through(p, &q) {
            return l;
        }
    }
}

/// Every line meets each surface transversally and no node lies on it.
pub fn is_transversal(tree: &TreeCurve, surfaces: &[Hypersurface]) -> bool {
    surfaces.iter().all(|w| {
        tree.lines()
            .iter()
            .all(|l| line_section(l, w, false).transversal)
            && tree.nodes().iter().all(|p| !w.contains(p))
    })
}

fn retry<T>(what: &str, mut f: impl FnMut() -> Option<T>) -> Result<T> {
    for _ in 0..BUDGET {
        if let Some(x) = f() {
            return Ok(x);
        }
    }
    Err(Error::RetryExhausted {
        what: what.into(),
        attempts: BUDGET,
    })
}

/// One (1,0) line and three (0,1) lines of the Segre quadric: a spreading
/// tree of degree 4 lying on exactly one quadric.
pub fn quadric_spreading4<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> Result<TreeCurve> {
    let frame = SegreFrame::standard(field);
    retry("building a spreading tree on the quadric", || {
        let mut lines = vec![frame.line_u(random_p1(field, rng))];
        let mut vs = Vec::new();
        while vs.len() < 3 {
            let v = random_p1(field, rng);
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        lines.extend(vs.into_iter().map(|v| frame.line_v(v)));
        TreeCurve::new(TreeType::spreading(4), lines).ok()
    })
}

/// A bamboo of degree 4 in the union of two planes `H` and `M`: `L1, L2`
/// general in `H`, `L3` in `M` through `L2 ∩ M`, `L4` general in `M`. The
/// only quadric containing it is `H ∪ M`.
pub fn two_plane_bamboo4<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> Result<TreeCurve> {
    retry("building a bamboo in two planes", || {
        let h = random_plane(field, rng);
        let m = random_plane(field, rng);
        let l1 = random_line_in_plane(&h, rng);
        let l2 = random_line_in_plane(&h, rng);
        let o = plane_meet(&m, &l2)?;
        let q = random_plane_point(&m, rng);
        let l3 = Line::through(&o, &q).ok()?;
        let l4 = random_line_in_plane(&m, rng);
        TreeCurve::new(TreeType::bamboo(4), vec![l1, l2, l3, l4]).ok()
    })
}

/// The point where a line meets a plane, `None` if it lies in it.
fn plane_meet(plane: &[ProjPoint; 3], line: &Line) -> Option<ProjPoint> {
    let f = line.field();
    let [a, b] = line.basis();
    // find (s, t) with s a + t b in the plane: the 5 x 4 system has a kernel
    let mut data = Vec::with_capacity(20);
    for i in 0..4 {
        data.extend_from_slice(&[
            plane[0].coords()[i],
            plane[1].coords()[i],
            plane[2].coords()[i],
            a.coords()[i],
            b.coords()[i],
        ]);
    }
    let mat = DenseMatrix::from_raw(f, 4, 5, data).ok()?;
    let ker = mat.kernel_basis();
    if ker.len() != 1 {
        return None;
    }
    let k = &ker[0];
    a.combine(k[3], &b, k[4])
}

/// Three (1,0) lines `L1, L3, L5` of the Segre quadric joined by general
/// lines `L2` (meeting `L1`, `L3`) and `L4` (meeting `L3`, `L5`).
pub fn alternating_ruling_bamboo5<R: Rng + ?Sized>(
    field: PrimeField,
    rng: &mut R,
) -> Result<TreeCurve> {
    let frame = SegreFrame::standard(field);
    retry("building a bamboo across three ruling lines", || {
        let us = [0, 1, 2].map(|_| random_p1(field, rng));
        if us[0] == us[1] || us[1] == us[2] || us[0] == us[2] {
            return None;
        }
        let [l1, l3, l5] = us.map(|u| frame.line_u(u));
        let l2 = Line::through(&l1.random_point(rng), &l3.random_point(rng)).ok()?;
        let l4 = Line::through(&l3.random_point(rng), &l5.random_point(rng)).ok()?;
        TreeCurve::new(TreeType::bamboo(5), vec![l1, l2, l3, l4, l5]).ok()
    })
}

/// A general bamboo `L1..L4` whose last line meets a reducible plane conic
/// `L5 ∪ L6` at a general point of `L5`.
pub fn plane_conic_bamboo6<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> Result<TreeCurve> {
    retry("building a bamboo ending in a plane conic", || {
        let h = random_plane(field, rng);
        let l5 = random_line_in_plane(&h, rng);
        let l6 = random_line_in_plane(&h, rng);
        let o = l5.random_point(rng);
        let l4 = random_line_through(&o, rng);
        let l3 = random_line_through(&l4.random_point(rng), rng);
        let l2 = random_line_through(&l3.random_point(rng), rng);
        let l1 = random_line_through(&l2.random_point(rng), rng);
        TreeCurve::new(TreeType::bamboo(6), vec![l1, l2, l3, l4, l5, l6]).ok()
    })
}

/// Three pairwise skew lines, each through a fresh rational point of the
/// quadric so that they meet it in rational points only.
pub fn three_skew_lines<R: Rng + ?Sized>(
    frame: &SegreFrame,
    transversal_to: &[Hypersurface],
    rng: &mut R,
) -> Result<Forest> {
    let field = frame.field;
    let mut surfaces = transversal_to.to_vec();
    surfaces.push(frame.surface.clone());
    retry("choosing three skew lines", || {
        let mut comps = Vec::new();
        for _ in 0..3 {
            let p = frame.point(random_p1(field, rng), random_p1(field, rng));
            let l = random_line_through(&p, rng);
            let tree = TreeCurve::new(TreeType::bamboo(1), vec![l]).ok()?;
            if !is_transversal(&tree, &surfaces) {
                return None;
            }
            comps.push(tree);
        }
        Forest::new(comps).ok()
    })
}

/// Joins three skew lines `E` by a curve of class (1,6) on the quadric: one
/// (1,0) line `M` and six (0,1) lines, three of them through points of
/// distinct lines of `E`. The result is a tree of degree 10.
pub fn ruling_forest_join<R: Rng + ?Sized>(
    e: &Forest,
    frame: &SegreFrame,
    transversal_to: &[Hypersurface],
    rng: &mut R,
) -> Result<TreeCurve> {
    let field = frame.field;
    if e.components().len() != 3 || e.degree() != 3 {
        return Err(Error::Precondition("expected three lines".into()));
    }
    let e_lines = e.lines();
    let mut meets = Vec::new();
    for l in &e_lines {
        let pts = frame.rational_meets(l);
        if pts.len() != 2 {
            return Err(Error::Precondition(
                "each line must meet the quadric in two rational points".into(),
            ));
        }
        meets.push(
            pts.iter()
                .map(|p| frame.coords(p))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let taken_u: Vec<P1Point> = meets.iter().flatten().map(|c| c.0).collect();
    let taken_v: Vec<P1Point> = meets.iter().flatten().map(|c| c.1).collect();
    retry("joining three lines through the quadric", || {
        let u_m = random_p1(field, rng);
        if taken_u.contains(&u_m) {
            return None;
        }
        let mut vs: Vec<P1Point> = meets.iter().map(|m| m[rng.gen_range(0..2)].1).collect();
        while vs.len() < 6 {
            let v = random_p1(field, rng);
            if !taken_v.contains(&v) && !vs.contains(&v) {
                vs.push(v);
            }
        }
        let mut lines = e_lines.clone();
        lines.push(frame.line_u(u_m));
        lines.extend(vs.iter().map(|&v| frame.line_v(v)));
        let tree = tree_from_lines(&lines).ok()?;
        is_transversal(&tree, transversal_to).then_some(tree)
    })
}

/// Adds `2t - 1` lines of the quadric to `y`: the (1,0) line through a
/// rational point `o` of `y ∩ Q` and `2t - 2` (0,1) lines missing `y`.
/// The new lines come last in the ordering, the (1,0) line first among them.
pub fn ruling_extension<R: Rng + ?Sized>(
    y: &TreeCurve,
    frame: &SegreFrame,
    t: u32,
    transversal_to: &[Hypersurface],
    rng: &mut R,
) -> Result<TreeCurve> {
    let field = frame.field;
    let mut candidates = Vec::new();
    for (i, l) in y.lines().iter().enumerate() {
        let s = line_section(l, &frame.surface, true);
        if s.contained {
            return Err(Error::Precondition(
                "a line of the tree lies on the quadric".into(),
            ));
        }
        for (p, _) in s.rational_points.unwrap_or_default() {
            candidates.push((i, frame.coords(&p)?));
        }
    }
    if candidates.is_empty() {
        return Err(Error::NoRationalLinkingCandidate);
    }
    let taken_v: Vec<P1Point> = candidates.iter().map(|c| c.1 .1).collect();
    let count = 2 * t as usize - 2;
    retry("extending a tree by ruling lines", || {
        let (i, (u_o, _)) = candidates[rng.gen_range(0..candidates.len())];
        let mut vs: Vec<P1Point> = Vec::with_capacity(count);
        while vs.len() < count {
            let v = random_p1(field, rng);
            if !taken_v.contains(&v) && !vs.contains(&v) {
                vs.push(v);
            }
        }
        let d = y.degree();
        let mut lines = y.lines().to_vec();
        lines.push(frame.line_u(u_o));
        lines.extend(vs.iter().map(|&v| frame.line_v(v)));
        let mut tau = y.tree_type().tau().to_vec();
        tau.push(i + 1);
        tau.extend(std::iter::repeat_n(d + 1, count));
        let ttype = TreeType::new(d + 1 + count, tau).ok()?;
        let tree = TreeCurve::new(ttype, lines).ok()?;
        is_transversal(&tree, transversal_to).then_some(tree)
    })
}

/// A tree of degree `x_t` built inductively: a general bamboo of degree 6
/// for `t = 3`, three skew lines joined through a quadric for `t = 4`, and
/// [`ruling_extension`] of the tree for `t - 2` on a freshly moved quadric
/// after that. All lines meet the given surfaces transversally.
pub fn inductive_tree<R: Rng + ?Sized>(
    field: PrimeField,
    t: u32,
    transversal_to: &[Hypersurface],
    rng: &mut R,
) -> Result<TreeCurve> {
    match t {
        0..=2 => Err(Error::Precondition(
            "the inductive chain starts at t = 3".into(),
        )),
        3 => {
            let frame = SegreFrame::random(field, rng);
            let mut surfaces = transversal_to.to_vec();
            surfaces.push(frame.surface.clone());
            let c = TreeConstraints {
                transversal_to: surfaces,
                ..Default::default()
            };
            random_tree(&TreeType::bamboo(6), field, 3, rng, &c)
        }
        4 => {
            let frame = SegreFrame::random(field, rng);
            let e = three_skew_lines(&frame, transversal_to, rng)?;
            ruling_forest_join(&e, &frame, transversal_to, rng)
        }
        _ => {
            let base = inductive_tree(field, t - 2, transversal_to, rng)?;
            retry("moving the quadric for the next step", || {
                let frame = SegreFrame::random(field, rng);
                if base.nodes().iter().any(|p| frame.surface.contains(p))
                    || base
                        .lines()
                        .iter()
                        .any(|l| !line_section(l, &frame.surface, false).transversal)
                {
                    return None;
                }
                ruling_extension(&base, &frame, t, transversal_to, rng).ok()
            })
        }
    }
}

/// The first `d` lines of [`inductive_tree`] for the least `t` with
/// `x_t >= d`; initial segments of an admissible ordering stay connected.
pub fn truncated_inductive_tree<R: Rng + ?Sized>(
    field: PrimeField,
    d: usize,
    transversal_to: &[Hypersurface],
    rng: &mut R,
) -> Result<TreeCurve> {
    let t = (3..)
        .find(|&t| crate::hilbert::x_t(t) as usize >= d)
        .expect("x_t is unbounded");
    let full = inductive_tree(field, t, transversal_to, rng)?;
    let ttype = TreeType::new(d, full.tree_type().tau()[..d - 1].to_vec())?;
    TreeCurve::new(ttype, full.lines()[..d].to_vec())
}

/// Names accepted by [`named_construction`].
pub const GALLERY: &[&str] = &[
    "quadric_spreading4",
    "two_plane_bamboo4",
    "alternating_ruling_bamboo5",
    "plane_conic_bamboo6",
    "three_skew_lines",
    "ruling_forest_join",
    "ruling_extension",
    "inductive_tree",
];

#[derive(Clone, Debug)]
pub struct GalleryParams {
    pub field: PrimeField,
    pub seed: u64,
    /// Twist for the inductive constructions.
    pub t: u32,
    pub transversal_to: Vec<Hypersurface>,
}

impl GalleryParams {
    pub fn new(field: PrimeField, seed: u64) -> Self {
        GalleryParams {
            field,
            seed,
            t: 3,
            transversal_to: Vec::new(),
        }
    }
}

/// Builds a gallery configuration by name. `ruling_extension` extends the
/// inductive tree for `t - 2` (so it needs `t >= 5`).
pub fn named_construction(name: &str, params: &GalleryParams) -> Result<Curve> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let f = params.field;
    let ws = &params.transversal_to;
    Ok(match name {
        "quadric_spreading4" => quadric_spreading4(f, &mut rng)?.into(),
        "two_plane_bamboo4" => two_plane_bamboo4(f, &mut rng)?.into(),
        "alternating_ruling_bamboo5" => alternating_ruling_bamboo5(f, &mut rng)?.into(),
        "plane_conic_bamboo6" => plane_conic_bamboo6(f, &mut rng)?.into(),
        "three_skew_lines" => three_skew_lines(&SegreFrame::standard(f), ws, &mut rng)?.into(),
        "ruling_forest_join" => {
            let frame = SegreFrame::standard(f);
            let e = three_skew_lines(&frame, ws, &mut rng)?;
            ruling_forest_join(&e, &frame, ws, &mut rng)?.into()
        }
        "ruling_extension" => {
            if params.t < 5 {
                return Err(Error::Precondition("ruling_extension needs t >= 5".into()));
            }
            inductive_tree(f, params.t, ws, &mut rng)?.into()
        }
        "inductive_tree" => inductive_tree(f, params.t, ws, &mut rng)?.into(),
        other => return Err(Error::UnknownConstruction(other.into())),
    })
}

/// Lines of `a` meeting some line of `b`.
pub fn lines_meeting(a: &[Line], b: &[Line]) -> usize {
    a.iter()
        .filter(|l| b.iter().any(|m| !matches!(l.meet(m), LineMeet::Disjoint)))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::random_hypersurface;
    use crate::hilbert::{curve_ideal_cohomology, intersection_cohomology, x_t};

    fn big() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    #[test]
    fn frame_round_trip() {
        let f = big();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let frame = SegreFrame::random(f, &mut rng);
        for _ in 0..20 {
            let (u, v) = (random_p1(f, &mut rng), random_p1(f, &mut rng));
            let p = frame.point(u, v);
            assert!(frame.surface().contains(&p));
            assert_eq!(frame.coords(&p).unwrap(), (u, v));
            assert!(frame.line_u(u).contains(&p) && frame.line_v(v).contains(&p));
            assert!(line_section(&frame.line_u(u), frame.surface(), false).contained);
        }
    }

    #[test]
    fn four_line_configurations_lie_on_one_quadric() {
        let f = big();
        for seed in 0..3 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = quadric_spreading4(f, &mut rng).unwrap();
            assert!(a.tree_type().is_spreading());
            assert_eq!(curve_ideal_cohomology(&a.into(), 2).unwrap().h0, 1);
            let b = two_plane_bamboo4(f, &mut rng).unwrap();
            assert_eq!(curve_ideal_cohomology(&b.into(), 2).unwrap().h0, 1);
        }
    }

    #[test]
    fn five_and_six_line_bamboos() {
        let f = big();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = alternating_ruling_bamboo5(f, &mut rng).unwrap();
        assert_eq!(curve_ideal_cohomology(&c.into(), 3).unwrap().pair(), (4, 0));
        let c = plane_conic_bamboo6(f, &mut rng).unwrap();
        assert_eq!(curve_ideal_cohomology(&c.into(), 3).unwrap().pair(), (1, 0));
    }

    #[test]
    fn skew_lines_on_one_quadric() {
        let f = big();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e = three_skew_lines(&SegreFrame::standard(f), &[], &mut rng).unwrap();
        assert_eq!(curve_ideal_cohomology(&e.into(), 2).unwrap().pair(), (1, 0));
    }

    #[test]
    fn inductive_chain_degrees_and_cohomology() {
        let f = big();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let w = random_hypersurface(f, 3, 3, &mut rng);
        for t in 3..=5 {
            let tree = inductive_tree(f, t, std::slice::from_ref(&w), &mut rng).unwrap();
            assert_eq!(tree.degree() as u64, x_t(t));
            let c = intersection_cohomology(&w, &tree.into(), t).unwrap();
            assert_eq!(c.pair(), (1, 0), "t={t}");
        }
    }

    #[test]
    fn extension_adds_one_line_meeting_the_base() {
        let f = big();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let base = inductive_tree(f, 3, &[], &mut rng).unwrap();
        let frame = SegreFrame::random(f, &mut rng);
        let ext = ruling_extension(&base, &frame, 5, &[], &mut rng).unwrap();
        assert_eq!(ext.degree(), 15);
        assert_eq!(lines_meeting(&ext.lines()[6..], base.lines()), 1);
    }

    #[test]
    fn unknown_name() {
        let p = GalleryParams::new(big(), 0);
        assert_eq!(
            named_construction("nope", &p).err(),
            Some(Error::UnknownConstruction("nope".into()))
        );
        for name in GALLERY {
            let mut p = GalleryParams::new(big(), 1);
            p.t = 5;
            assert!(named_construction(name, &p).is_ok(), "{name}");
        }
    }
}
