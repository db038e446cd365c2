//! Helpers shared by the invariant tests and the acceptance suite.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use treerank::field::PrimeField;
use treerank::geometry::{Hypersurface, ProjPoint};
use treerank::matrix::DenseMatrix;
use treerank::trees::{random_tree, TreeConstraints, TreeCurve, TreeType};

pub fn field() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

pub fn tree_on(w: &Hypersurface, d: usize, rng: &mut ChaCha8Rng) -> TreeCurve {
    let ttype = TreeType::random(d, rng);
    random_tree(
        &ttype,
        w.field(),
        w.ambient_dim(),
        rng,
        &TreeConstraints::transversal(w),
    )
    .unwrap()
}

/// A random parametrization `u A + v B` of line `i` with `A` off `W`.
pub fn random_param(
    w: &Hypersurface,
    tree: &TreeCurve,
    i: usize,
    rng: &mut ChaCha8Rng,
) -> (ProjPoint, ProjPoint) {
    let f = w.field();
    let [p, q] = tree.lines()[i].basis();
    loop {
        let (a, b, c, d) = (
            rng.gen_range(0..f.p()),
            rng.gen_range(0..f.p()),
            rng.gen_range(0..f.p()),
            rng.gen_range(0..f.p()),
        );
        if f.sub(f.mul(a, d), f.mul(b, c)) == 0 {
            continue;
        }
        let (Some(x), Some(y)) = (p.combine(a, &q, b), p.combine(c, &q, d)) else {
            continue;
        };
        if !w.contains(&x) {
            return (x, y);
        }
    }
}

/// `W' = W∘M` together with the tree moved by `M^-1`, so `T' ∩ W'` is the
/// preimage of `T ∩ W`.
pub fn change_coordinates(
    w: &Hypersurface,
    tree: &TreeCurve,
    rng: &mut ChaCha8Rng,
) -> (Hypersurface, TreeCurve) {
    let n = w.ambient_dim();
    let m = loop {
        let m = DenseMatrix::random(w.field(), n + 1, n + 1, rng);
        if m.rank() == n + 1 {
            break m;
        }
    };
    let inv = m.inverse().unwrap();
    let lines = tree
        .lines()
        .iter()
        .map(|l| l.transform(&inv).unwrap())
        .collect();
    (
        w.pull_back(&m).unwrap(),
        TreeCurve::new(tree.tree_type().clone(), lines).unwrap(),
    )
}
