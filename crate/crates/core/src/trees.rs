//! Combinatorial types of trees of lines, realized trees and forests,
//! parametrized rational curves, and constrained random generation.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::geometry::{line_section, random_p1, Hypersurface, Line, LineMeet, ProjPoint};
use crate::poly::{binary_gcd, BinaryForm, P1Point};

/// The type `tau` of an ordered tree `L_1, ..., L_d`: `tau(i) < i` is the
/// unique earlier line meeting `L_i`. Indices are 1-based throughout.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawType", into = "RawType")]
pub struct TreeType {
    d: usize,
    tau: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawType {
    d: usize,
    tau: Vec<usize>,
}

impl TryFrom<RawType> for TreeType {
    type Error = Error;
    fn try_from(raw: RawType) -> Result<Self> {
        TreeType::new(raw.d, raw.tau)
    }
}

impl From<TreeType> for RawType {
    fn from(t: TreeType) -> Self {
        RawType { d: t.d, tau: t.tau }
    }
}

impl TreeType {
    /// `tau` lists `tau(2), ..., tau(d)`.
    pub fn new(d: usize, tau: Vec<usize>) -> Result<Self> {
        if d == 0 {
            return Err(Error::NotATree("degree 0".into()));
        }
        if tau.len() != d - 1 {
            return Err(Error::NotATree(format!(
                "degree {d} needs {} parent entries",
                d - 1
            )));
        }
        for (k, &t) in tau.iter().enumerate() {
            let i = k + 2;
            if t < 1 || t >= i {
                return Err(Error::NotATree(format!("tau({i}) = {t} is not in 1..{i}")));
            }
        }
        Ok(TreeType { d, tau })
    }

    pub fn bamboo(d: usize) -> Self {
        TreeType {
            d,
            tau: (1..d.max(1)).collect(),
        }
    }

    pub fn spreading(d: usize) -> Self {
        TreeType {
            d,
            tau: vec![1; d.saturating_sub(1)],
        }
    }

    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        TreeType {
            d,
            tau: (2..=d).map(|i| rng.gen_range(1..i)).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `tau(i)` for `2 <= i <= d`.
    pub fn parent(&self, i: usize) -> usize {
        self.tau[i - 2]
    }

    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    pub fn is_bamboo(&self) -> bool {
        self.tau.iter().enumerate().all(|(k, &t)| t == k + 1)
    }

    pub fn is_spreading(&self) -> bool {
        self.tau.iter().all(|&t| t == 1)
    }

    /// Neighbour lists of the dual graph, 0-based.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.d];
        for i in 2..=self.d {
            let j = self.parent(i);
            adj[i - 1].push(j - 1);
            adj[j - 1].push(i - 1);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        adj
    }

    pub fn vertex_degrees(&self) -> Vec<usize> {
        self.adjacency().iter().map(Vec::len).collect()
    }

    /// Whether the dual graph is a path, which is weaker than
    /// [`is_bamboo`](Self::is_bamboo): that also fixes the ordering.
    pub fn is_path_shape(&self) -> bool {
        self.vertex_degrees().iter().all(|&k| k <= 2)
    }

    /// Lines meeting exactly one other line (1-based). A single line counts
    /// as final.
    pub fn final_lines(&self) -> Vec<usize> {
        if self.d == 1 {
            return vec![1];
        }
        self.vertex_degrees()
            .iter()
            .enumerate()
            .filter(|(_, &k)| k == 1)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// A maximum matching of the dual tree, as the children `i` whose edge
    /// `{i, tau(i)}` is matched. Greedy from the leaves is optimal on trees.
    pub fn max_matching(&self) -> Vec<usize> {
        let mut used = vec![false; self.d + 1];
        let mut edges = Vec::new();
        for i in (2..=self.d).rev() {
            let j = self.parent(i);
            if !used[i] && !used[j] {
                used[i] = true;
                used[j] = true;
                edges.push(i);
            }
        }
        edges.reverse();
        edges
    }

    /// AHU encoding of the unrooted dual tree, minimized over its centers.
    pub fn shape_code(&self) -> String {
        let adj = self.adjacency();
        tree_centers(&adj)
            .into_iter()
            .map(|c| ahu(&adj, c, usize::MAX))
            .min()
            .expect("a tree has a center")
    }

    /// Whether two types have isomorphic dual graphs. Types are labels: the
    /// same family of curves may carry several of them.
    pub fn same_shape(&self, other: &TreeType) -> bool {
        self.d == other.d && self.shape_code() == other.shape_code()
    }
}

fn tree_centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                if deg[w] > 1 {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
            deg[v] = 0;
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

fn ahu(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| ahu(adj, w, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// All `(d-1)!` types of degree `d`, `tau` in lexicographic order.
pub fn enumerate_types(d: usize) -> impl Iterator<Item = TreeType> {
    let mut next = (d >= 1).then(|| vec![1usize; d.saturating_sub(1)]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        // odometer: position k holds tau(k+2) in 1..=k+1
        let mut k = succ.len();
        while k > 0 {
            k -= 1;
            if succ[k] < k + 1 {
                succ[k] += 1;
                next = Some(succ);
                break;
            }
            succ[k] = 1;
        }
        Some(TreeType { d, tau: current })
    })
}

pub fn bamboo_type(d: usize) -> TreeType {
    TreeType::bamboo(d)
}

pub fn spreading_type(d: usize) -> TreeType {
    TreeType::spreading(d)
}

/// A nodal tree of lines `L_1, ..., L_d` with `L_i` meeting `L_tau(i)` at
/// `nodes[i - 2]` and no other incidences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeCurve {
    ttype: TreeType,
    lines: Vec<Line>,
    nodes: Vec<ProjPoint>,
}

impl TreeCurve {
    /// Validates the incidences required by `ttype` and computes the nodes.
    pub fn new(ttype: TreeType, lines: Vec<Line>) -> Result<Self> {
        if lines.len() != ttype.degree() {
            return Err(Error::DimensionMismatch(format!(
                "type of degree {} with {} lines",
                ttype.degree(),
                lines.len()
            )));
        }
        let d = lines.len();
        let mut nodes = Vec::with_capacity(d.saturating_sub(1));
        for i in 2..=d {
            let j = ttype.parent(i);
            match lines[i - 1].meet(&lines[j - 1]) {
                LineMeet::Point(p) => nodes.push(p),
                LineMeet::Same => return Err(Error::NotATree(format!("L{i} = L{j}"))),
                LineMeet::Disjoint => return Err(Error::NotATree(format!("L{i} misses L{j}"))),
            }
        }
        for i in 1..=d {
            for j in i + 1..=d {
                if ttype.parent(j) == i {
                    continue;
                }
                if lines[i - 1].meet(&lines[j - 1]) != LineMeet::Disjoint {
                    return Err(Error::NotATree(format!(
                        "unexpected incidence of L{i} and L{j}"
                    )));
                }
            }
        }
        let distinct: HashSet<&ProjPoint> = nodes.iter().collect();
        if distinct.len() != nodes.len() {
            return Err(Error::NotATree("two nodes coincide".into()));
        }
        Ok(TreeCurve {
            ttype,
            lines,
            nodes,
        })
    }

    pub fn tree_type(&self) -> &TreeType {
        &self.ttype
    }

    pub fn degree(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn nodes(&self) -> &[ProjPoint] {
        &self.nodes
    }

    pub fn ambient_dim(&self) -> usize {
        self.lines[0].ambient_dim()
    }

    /// Re-runs the validation performed by [`TreeCurve::new`].
    pub fn validate(&self) -> Result<()> {
        TreeCurve::new(self.ttype.clone(), self.lines.clone()).map(|_| ())
    }
}

/// Pairwise disjoint trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    components: Vec<TreeCurve>,
}

impl Forest {
    pub fn new(components: Vec<TreeCurve>) -> Result<Self> {
        for (a, ta) in components.iter().enumerate() {
            for tb in &components[a + 1..] {
                for la in ta.lines() {
                    if tb
                        .lines()
                        .iter()
                        .any(|lb| la.meet(lb) != LineMeet::Disjoint)
                    {
                        return Err(Error::NotATree("forest components meet".into()));
                    }
                }
            }
        }
        Ok(Forest { components })
    }

    pub fn components(&self) -> &[TreeCurve] {
        &self.components
    }

    pub fn degree(&self) -> usize {
        self.components.iter().map(TreeCurve::degree).sum()
    }

    pub fn lines(&self) -> Vec<Line> {
        self.components
            .iter()
            .flat_map(|c| c.lines().iter().cloned())
            .collect()
    }
}

/// `phi = (phi_0 : ... : phi_n)`, binary forms of a common degree with no
/// common zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCurveParam {
    coords: Vec<BinaryForm>,
}

impl RationalCurveParam {
    pub fn new(coords: Vec<BinaryForm>) -> Result<Self> {
        let Some(first) = coords.first() else {
            return Err(Error::DimensionMismatch("no coordinates".into()));
        };
        if coords
            .iter()
            .any(|c| c.degree != first.degree || c.field() != first.field())
        {
            return Err(Error::DimensionMismatch(
                "coordinate forms differ in degree".into(),
            ));
        }
        let phi = RationalCurveParam { coords };
        phi.check_base_point_free()?;
        Ok(phi)
    }

    /// Random base-point-free parametrization of degree `d` in P^n.
    pub fn random<R: Rng + ?Sized>(field: PrimeField, n: usize, d: u32, rng: &mut R) -> Self {
        loop {
            let coords = (0..=n).map(|_| BinaryForm::random(field, d, rng)).collect();
            if let Ok(phi) = RationalCurveParam::new(coords) {
                return phi;
            }
        }
    }

    pub fn coords(&self) -> &[BinaryForm] {
        &self.coords
    }

    pub fn degree(&self) -> u32 {
        self.coords[0].degree
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn field(&self) -> PrimeField {
        self.coords[0].field()
    }

    /// The iterated gcd of the coordinates must be constant.
    pub fn check_base_point_free(&self) -> Result<()> {
        let g = self
            .coords
            .iter()
            .skip(1)
            .fold(self.coords[0].clone(), |g, c| binary_gcd(&g, c));
        if g.is_zero() || g.degree > 0 {
            return Err(Error::BasePoint);
        }
        Ok(())
    }

    /// Substitutes `v -> v + c u` in every coordinate.
    pub fn reparametrized(&self, c: u64) -> Self {
        RationalCurveParam {
            coords: self
                .coords
                .iter()
                .map(|f| f.substitute(1, 0, c, 1))
                .collect(),
        }
    }

    pub fn point_at(&self, t: P1Point) -> ProjPoint {
        ProjPoint::new(
            self.field(),
            self.coords.iter().map(|f| f.eval(t.u, t.v)).collect(),
        )
        .expect("base-point-free")
    }
}

/// Anything the cohomology core can take apart line by line.
#[derive(Clone, Debug)]
pub enum Curve {
    Tree(TreeCurve),
    Forest(Forest),
    Rational(RationalCurveParam),
}

impl Curve {
    pub fn degree(&self) -> usize {
        match self {
            Curve::Tree(t) => t.degree(),
            Curve::Forest(f) => f.degree(),
            Curve::Rational(r) => r.degree() as usize,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Curve::Tree(t) => t.ambient_dim(),
            Curve::Forest(f) => f.components()[0].ambient_dim(),
            Curve::Rational(r) => r.ambient_dim(),
        }
    }

    pub fn connected_components(&self) -> usize {
        match self {
            Curve::Forest(f) => f.components().len(),
            _ => 1,
        }
    }
}

impl From<TreeCurve> for Curve {
    fn from(t: TreeCurve) -> Self {
        Curve::Tree(t)
    }
}

impl From<Forest> for Curve {
    fn from(f: Forest) -> Self {
        Curve::Forest(f)
    }
}

impl From<RationalCurveParam> for Curve {
    fn from(r: RationalCurveParam) -> Self {
        Curve::Rational(r)
    }
}

/// Recovers an admissible ordering and its type from unordered lines.
///
/// The ordering is a depth-first preorder of the dual graph, visiting
/// neighbours by input index. It starts at the lowest-index line of maximal
/// valence, or at the lowest-index final line when the dual graph is a
/// path; this makes paths come out as bamboos and stars as spreading
/// types. `order[k]` is the input index of the `(k+1)`-th line.
pub fn type_of(lines: &[Line]) -> Result<(Vec<usize>, TreeType)> {
    let d = lines.len();
    if d == 0 {
        return Err(Error::NotATree("no lines".into()));
    }
    let mut adj = vec![Vec::new(); d];
    let mut meet_points: Vec<BTreeMap<usize, ProjPoint>> = vec![BTreeMap::new(); d];
    let mut edges = 0;
    for i in 0..d {
        for j in i + 1..d {
            match lines[i].meet(&lines[j]) {
                LineMeet::Disjoint => {}
                LineMeet::Same => {
                    return Err(Error::NotATree(format!("lines {i} and {j} coincide")))
                }
                LineMeet::Point(p) => {
                    adj[i].push(j);
                    adj[j].push(i);
                    meet_points[i].insert(j, p.clone());
                    meet_points[j].insert(i, p);
                    edges += 1;
                }
            }
        }
    }
    for pts in &meet_points {
        let distinct: HashSet<&ProjPoint> = pts.values().collect();
        if distinct.len() != pts.len() {
            return Err(Error::NotATree("three lines through one point".into()));
        }
    }
    if edges != d - 1 {
        return Err(Error::NotATree(format!(
            "{edges} incidences among {d} lines"
        )));
    }
    let max_deg = adj.iter().map(Vec::len).max().unwrap_or(0);
    let root = if max_deg <= 2 {
        (0..d)
            .find(|&v| adj[v].len() <= 1)
            .expect("a path has an end")
    } else {
        (0..d)
            .find(|&v| adj[v].len() == max_deg)
            .expect("max is attained")
    };
    let mut order = Vec::with_capacity(d);
    let mut position = vec![usize::MAX; d];
    let mut parent_pos = vec![0usize; d];
    let mut stack = vec![(root, usize::MAX)];
    while let Some((v, from)) = stack.pop() {
        if position[v] != usize::MAX {
            continue;
        }
        position[v] = order.len();
        if from != usize::MAX {
            parent_pos[v] = position[from] + 1;
        }
        order.push(v);
        for &w in adj[v].iter().rev() {
            if position[w] == usize::MAX {
                stack.push((w, v));
            }
        }
    }
    if order.len() != d {
        return Err(Error::NotATree("the lines are not connected".into()));
    }
    let tau = order[1..].iter().map(|&v| parent_pos[v]).collect();
    Ok((order, TreeType::new(d, tau)?))
}

/// [`type_of`] followed by reordering the lines.
pub fn tree_from_lines(lines: &[Line]) -> Result<TreeCurve> {
    let (order, ttype) = type_of(lines)?;
    TreeCurve::new(ttype, order.iter().map(|&i| lines[i].clone()).collect())
}

/// Which lines of a generated tree must pass through a rational point of a
/// given hypersurface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RationalScope {
    All,
    FinalLines,
}

#[derive(Clone, Debug)]
pub struct RationalConstraint {
    pub surface: Hypersurface,
    pub scope: RationalScope,
}

#[derive(Clone, Debug)]
pub struct TreeConstraints {
    /// Every line meets each of these transversally, away from the nodes.
    pub transversal_to: Vec<Hypersurface>,
    /// Prescribed nodes. They are placed on the edges of a maximum matching
    /// of the dual tree, so no line carries two of them.
    pub node_points: Vec<ProjPoint>,
    /// Lines in scope pass through a fresh rational point of the surface; on
    /// a quadric this makes the whole line section rational.
    pub rational_on: Option<RationalConstraint>,
    /// Full-tree attempts before giving up.
    pub attempts: usize,
}

impl Default for TreeConstraints {
    fn default() -> Self {
        TreeConstraints {
            transversal_to: Vec::new(),
            node_points: Vec::new(),
            rational_on: None,
            attempts: 100,
        }
    }
}

impl TreeConstraints {
    pub fn transversal(w: &Hypersurface) -> Self {
        TreeConstraints {
            transversal_to: vec![w.clone()],
            ..Default::default()
        }
    }
}

const LINE_RETRIES: usize = 20;

/// Generates a tree of the given type: `L_1` through two fresh points and
/// each later `L_i` through a random point of `L_tau(i)` and a fresh point,
/// subject to the constraints.
pub fn random_tree<R: Rng + ?Sized>(
    ttype: &TreeType,
    field: PrimeField,
    n: usize,
    rng: &mut R,
    constraints: &TreeConstraints,
) -> Result<TreeCurve> {
    let d = ttype.degree();
    let matched = ttype.max_matching();
    if constraints.node_points.len() > matched.len() {
        return Err(Error::Infeasible(format!(
            "{} prescribed nodes but the largest set of pairwise non-collinear nodes on this type has {}",
            constraints.node_points.len(),
            matched.len()
        )));
    }
    // prescribed point per line: as the node with its parent, or as a point
    // the line must contain for a child
    let mut as_child: Vec<Option<ProjPoint>> = vec![None; d + 1];
    let mut as_parent: Vec<Option<ProjPoint>> = vec![None; d + 1];
    for (a, &i) in constraints.node_points.iter().zip(&matched) {
        as_child[i] = Some(a.clone());
        as_parent[ttype.parent(i)] = Some(a.clone());
    }
    let finals: HashSet<usize> = ttype.final_lines().into_iter().collect();
    let in_scope = |i: usize| match &constraints.rational_on {
        None => false,
        Some(rc) => rc.scope == RationalScope::All || finals.contains(&i),
    };

    'attempt: for _ in 0..constraints.attempts {
        let mut used: HashSet<ProjPoint> = constraints.node_points.iter().cloned().collect();
        let mut lines: Vec<Line> = Vec::with_capacity(d);
        let mut nodes: Vec<ProjPoint> = Vec::new();
        for i in 1..=d {
            let mut built = None;
            for _ in 0..LINE_RETRIES {
                let node = if i == 1 {
                    None
                } else if let Some(a) = &as_child[i] {
                    Some(a.clone())
                } else {
                    let parent = &lines[ttype.parent(i) - 1];
                    let p = parent.point_at(random_p1(field, rng));
                    if used.contains(&p) {
                        continue;
                    }
                    Some(p)
                };
                let anchor = match (&node, &as_parent[i]) {
                    (Some(p), _) => p.clone(),
                    (None, Some(a)) => a.clone(),
                    (None, None) => ProjPoint::random(field, n, rng),
                };
                let second = if let Some(a) = as_parent[i].as_ref().filter(|_| node.is_some()) {
                    a.clone()
                } else if in_scope(i) {
                    let rc = constraints
                        .rational_on
                        .as_ref()
                        .expect("scope implies constraint");
                    match rc.surface.random_rational_point(rng, 50) {
                        Ok(q) => q,
                        Err(_) => continue,
                    }
                } else {
                    ProjPoint::random(field, n, rng)
                };
                if used.contains(&second) && Some(&second) != as_parent[i].as_ref() {
                    continue;
                }
                let Ok(line) = Line::through(&anchor, &second) else {
                    continue;
                };
                if !line_is_acceptable(&line, i, ttype, &lines, &node, constraints) {
                    continue;
                }
                built = Some((line, node, anchor, second));
                break;
            }
            let Some((line, node, anchor, second)) = built else {
                continue 'attempt;
            };
            used.insert(anchor);
            used.insert(second);
            if let Some(p) = node {
                nodes.push(p);
            }
            lines.push(line);
        }
        if let Ok(tree) = TreeCurve::new(ttype.clone(), lines) {
            if tree.nodes() == nodes.as_slice() {
                return Ok(tree);
            }
        }
    }
    Err(Error::RetryExhausted {
        what: format!("generating a tree of type {:?}", ttype.tau()),
        attempts: constraints.attempts,
    })
}

fn line_is_acceptable(
    line: &Line,
    i: usize,
    ttype: &TreeType,
    earlier: &[Line],
    node: &Option<ProjPoint>,
    constraints: &TreeConstraints,
) -> bool {
    for w in &constraints.transversal_to {
        if !line_section(line, w, false).transversal {
            return false;
        }
        if node.as_ref().is_some_and(|p| w.contains(p)) {
            return false;
        }
    }
    // the only earlier line it may meet is its parent
    let parent = if i > 1 { ttype.parent(i) } else { 0 };
    earlier.iter().enumerate().all(|(j, other)| {
        let m = line.meet(other);
        if j + 1 == parent {
            matches!(m, LineMeet::Point(_))
        } else {
            m == LineMeet::Disjoint
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{line_through, random_hypersurface};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn big() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(big(), c).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        let three: Vec<_> = enumerate_types(3).collect();
        assert_eq!(three, vec![TreeType::spreading(3), TreeType::bamboo(3)]);
        assert_eq!(enumerate_types(4).count(), 6);
        assert_eq!(enumerate_types(6).count(), 120);
        assert_eq!(enumerate_types(1).count(), 1);
        assert_eq!(bamboo_type(5).tau(), &[1, 2, 3, 4]);
        assert_eq!(spreading_type(4).tau(), &[1, 1, 1]);
    }

    #[test]
    fn final_lines_count() {
        for d in 2..=6 {
            for t in enumerate_types(d) {
                let f = t.final_lines().len();
                assert!(f >= 2);
                assert_eq!(f == 2, t.is_path_shape(), "{t:?}");
            }
        }
        for d in 1..=3 {
            assert!(enumerate_types(d).all(|t| t.is_path_shape()));
        }
    }

    #[test]
    fn matching_sizes() {
        for d in 1..=8 {
            assert_eq!(TreeType::bamboo(d).max_matching().len(), d / 2);
            assert_eq!(
                TreeType::spreading(d).max_matching().len(),
                usize::from(d > 1)
            );
        }
    }

    #[test]
    fn bad_types_rejected() {
        assert!(TreeType::new(3, vec![1, 3]).is_err());
        assert!(TreeType::new(3, vec![1]).is_err());
        assert!(TreeType::new(0, vec![]).is_err());
        let json = serde_json::to_string(&TreeType::bamboo(3)).unwrap();
        assert_eq!(
            serde_json::from_str::<TreeType>(&json).unwrap(),
            TreeType::bamboo(3)
        );
        assert!(serde_json::from_str::<TreeType>(r#"{"d":3,"tau":[1,5]}"#).is_err());
    }

    #[test]
    fn shapes() {
        // a path ordered from its middle is still a path
        let middle_first = TreeType::new(3, vec![1, 1]).unwrap();
        assert!(middle_first.same_shape(&TreeType::bamboo(3)));
        let t1 = TreeType::new(5, vec![1, 2, 2, 1]).unwrap();
        let t2 = TreeType::new(5, vec![1, 1, 3, 3]).unwrap();
        assert!(t1.same_shape(&t2));
        assert!(!t1.same_shape(&TreeType::bamboo(5)));
        assert!(!TreeType::spreading(5).same_shape(&TreeType::bamboo(5)));
    }

    #[test]
    fn type_of_examples() {
        let a = line_through(&pt(&[1, 0, 0, 0]), &pt(&[0, 1, 0, 0])).unwrap();
        let b = line_through(&pt(&[1, 0, 0, 0]), &pt(&[0, 0, 1, 0])).unwrap();
        let (_, t) = type_of(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(t.tau(), &[1]);

        // chain a - b - c given as (b, a, c)
        let c = line_through(&pt(&[0, 0, 1, 0]), &pt(&[0, 0, 0, 1])).unwrap();
        let (order, t) = type_of(&[b.clone(), a.clone(), c.clone()]).unwrap();
        assert!(t.is_bamboo());
        assert_eq!(order, vec![1, 0, 2]);

        let concurrent = line_through(&pt(&[1, 0, 0, 0]), &pt(&[0, 0, 0, 1])).unwrap();
        assert!(matches!(
            type_of(&[a.clone(), b.clone(), concurrent]),
            Err(Error::NotATree(_))
        ));
        let skew = line_through(&pt(&[0, 0, 1, 0]), &pt(&[0, 1, 0, 1])).unwrap();
        assert!(matches!(
            type_of(&[a.clone(), skew]),
            Err(Error::NotATree(_))
        ));
        // a triangle has as many incidences as lines
        let ab = line_through(&pt(&[0, 1, 0, 0]), &pt(&[0, 0, 1, 0])).unwrap();
        assert!(matches!(type_of(&[a, b, ab]), Err(Error::NotATree(_))));
    }

    #[test]
    fn generated_trees_round_trip_through_type_of() {
        let f = big();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let w = random_hypersurface(f, 3, 3, &mut rng);
        for d in 1..=6 {
            for ttype in [
                TreeType::bamboo(d),
                TreeType::spreading(d),
                TreeType::random(d, &mut rng),
            ] {
                let tree =
                    random_tree(&ttype, f, 3, &mut rng, &TreeConstraints::transversal(&w)).unwrap();
                assert_eq!(tree.nodes().len(), d - 1);
                let (_, found) = type_of(tree.lines()).unwrap();
                assert!(found.same_shape(&ttype));
                if ttype.is_bamboo() || (ttype.is_spreading() && d != 3) {
                    assert_eq!(found, ttype);
                }
                for l in tree.lines() {
                    let s = line_section(l, &w, false);
                    assert!(s.transversal);
                }
                assert!(tree.nodes().iter().all(|p| !w.contains(p)));
            }
        }
    }

    #[test]
    fn spreading_nodes_on_first_line() {
        let f = big();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let tree = random_tree(
            &TreeType::spreading(4),
            f,
            3,
            &mut rng,
            &TreeConstraints::default(),
        )
        .unwrap();
        assert!(tree.nodes().iter().all(|p| tree.lines()[0].contains(p)));
    }

    #[test]
    fn prescribed_nodes() {
        let f = big();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = ProjPoint::random(f, 3, &mut rng);
        let b = ProjPoint::random(f, 3, &mut rng);
        let c = TreeConstraints {
            node_points: vec![a.clone(), b.clone()],
            ..Default::default()
        };
        let tree = random_tree(&TreeType::bamboo(4), f, 3, &mut rng, &c).unwrap();
        assert!(tree.nodes().contains(&a) && tree.nodes().contains(&b));
        for l in tree.lines() {
            assert!(!(l.contains(&a) && l.contains(&b)));
        }

        let c3 = TreeConstraints {
            node_points: vec![a.clone(), b, ProjPoint::random(f, 3, &mut rng)],
            ..Default::default()
        };
        assert!(matches!(
            random_tree(&TreeType::bamboo(5), f, 3, &mut rng, &c3),
            Err(Error::Infeasible(_))
        ));
        let c1 = TreeConstraints {
            node_points: vec![a.clone()],
            ..Default::default()
        };
        let star = random_tree(&TreeType::spreading(5), f, 3, &mut rng, &c1).unwrap();
        assert!(star.nodes().contains(&a));
    }

    #[test]
    fn rational_final_lines() {
        let f = big();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let q = crate::geometry::quadric_normal_form(f, 4, 5)
            .unwrap()
            .hypersurface;
        let c = TreeConstraints {
            transversal_to: vec![q.clone()],
            rational_on: Some(RationalConstraint {
                surface: q.clone(),
                scope: RationalScope::FinalLines,
            }),
            ..Default::default()
        };
        let tree = random_tree(&TreeType::bamboo(5), f, 4, &mut rng, &c).unwrap();
        for i in tree.tree_type().final_lines() {
            let s = line_section(&tree.lines()[i - 1], &q, true);
            assert_eq!(s.rational_points.unwrap().len(), 2);
        }
    }

    #[test]
    fn rational_curves() {
        let f = big();
        let twisted = RationalCurveParam::new(vec![
            BinaryForm::from_coeffs(f, &[0, 0, 0, 1]),
            BinaryForm::from_coeffs(f, &[0, 0, 1, 0]),
            BinaryForm::from_coeffs(f, &[0, 1, 0, 0]),
            BinaryForm::from_coeffs(f, &[1, 0, 0, 0]),
        ])
        .unwrap();
        assert_eq!(twisted.degree(), 3);
        let with_base = RationalCurveParam::new(vec![
            BinaryForm::from_coeffs(f, &[0, 0, 1]),
            BinaryForm::from_coeffs(f, &[0, 1, 0]),
            BinaryForm::from_coeffs(f, &[0, 1, 1]),
        ]);
        assert_eq!(with_base, Err(Error::BasePoint));
        let shifted = twisted.reparametrized(5);
        assert!(shifted.check_base_point_free().is_ok());
        assert_eq!(
            shifted.point_at(P1Point { u: 0, v: 1 }),
            twisted.point_at(P1Point { u: 0, v: 1 })
        );
    }
}
