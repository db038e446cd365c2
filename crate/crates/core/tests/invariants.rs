mod common;

use common::{change_coordinates, field, random_param, tree_on};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use treerank::geometry::{random_hypersurface, ProjPoint};
use treerank::hilbert::{profile, ConditionSystem};
use treerank::matrix::DenseMatrix;
use treerank::poly::{binary_divrem, restrict_form_to_line, BinaryForm, Form};
use treerank::trees::Curve;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_of_transpose(seed: u64, r in 1usize..9, c in 1usize..9, sparse in 0u32..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = DenseMatrix::random(field(), r, c, &mut rng);
        // zero out some rows so ranks below min(r, c) occur
        for i in 0..r {
            if rng.gen_ratio(sparse, 4) {
                m.row_mut(i).fill(0);
            }
        }
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.rank() + m.kernel_dim(), c);
    }

    #[test]
    fn rank_of_product(seed: u64, r in 1usize..7, k in 1usize..5, c in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DenseMatrix::random(field(), r, k, &mut rng);
        let b = DenseMatrix::random(field(), k, c, &mut rng);
        let ab = a.mul(&b).unwrap();
        prop_assert!(ab.rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn kernel_vectors_are_killed(seed: u64, r in 1usize..6, c in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = DenseMatrix::random(field(), r, c, &mut rng);
        for v in m.kernel_basis() {
            prop_assert!(m.mul_vec(&v).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn restriction_is_linear(seed: u64, n in 2usize..5, deg in 1u32..5, c in 0u64..32003) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g1 = Form::random(f, n, deg, &mut rng);
        let g2 = Form::random(f, n, deg, &mut rng);
        let a = ProjPoint::random(f, n, &mut rng);
        let b = ProjPoint::random(f, n, &mut rng);
        prop_assume!(!a.is_proportional(&b));
        let lhs = restrict_form_to_line(&g1.add(&g2.scale(c)).unwrap(), &a, &b).unwrap();
        let rhs = restrict_form_to_line(&g1, &a, &b).unwrap()
            .add(&restrict_form_to_line(&g2, &a, &b).unwrap().scale(c)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn divrem_reconstructs(seed: u64, dg in 0u32..12, df in 0u32..8) {
        prop_assume!(dg >= df);
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = BinaryForm::random(f, dg, &mut rng);
        let div = BinaryForm::random(f, df, &mut rng);
        prop_assume!(div.leading_u() != 0);
        let (q, r) = binary_divrem(&g, &div).unwrap();
        prop_assert_eq!(q.mul(&div).add(&r).unwrap(), g);
        if let Some(e) = r.u_degree() {
            prop_assert!(e < df);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn profiles_satisfy_euler_and_vanish_at_the_cap(seed: u64, n in 3usize..5, k in 2u32..4, d in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_hypersurface(field(), n, k, &mut rng);
        let tree = tree_on(&w, d, &mut rng);
        let prof = profile(&w, &Curve::Tree(tree), None).unwrap();
        prop_assert_eq!(prof.t_cap as usize, k as usize * d - 1);
        let mut last_h1 = usize::MAX;
        for row in &prof.rows {
            prop_assert_eq!(row.h0 as i64 - row.h1 as i64, row.h0_sheaf_of_ow as i64 - (k as usize * d) as i64);
            prop_assert!(row.h1 <= last_h1);
            last_h1 = row.h1;
        }
        prop_assert_eq!(prof.row(prof.t_cap.max(1)).unwrap().h1, 0);
    }

    #[test]
    fn reparametrizing_lines_keeps_the_profile(seed: u64, k in 2u32..4, d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_hypersurface(field(), 3, k, &mut rng);
        let tree = tree_on(&w, d, &mut rng);
        let base = ConditionSystem::new(&w, &Curve::Tree(tree.clone())).unwrap();
        let params: Vec<_> = (0..d).map(|i| random_param(&w, &tree, i, &mut rng)).collect();
        let moved = ConditionSystem::from_line_params(&w, &params).unwrap();
        for t in 1..=k * d as u32 {
            prop_assert_eq!(base.cohomology(t).unwrap().pair(), moved.cohomology(t).unwrap().pair());
        }
    }

    #[test]
    fn coordinate_changes_keep_the_profile(seed: u64, n in 3usize..5, k in 2u32..4, d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_hypersurface(field(), n, k, &mut rng);
        let tree = tree_on(&w, d, &mut rng);
        let (w2, tree2) = change_coordinates(&w, &tree, &mut rng);
        let a = profile(&w, &Curve::Tree(tree), None).unwrap();
        let b = profile(&w2, &Curve::Tree(tree2), None).unwrap();
        let pairs = |p: &treerank::hilbert::IntersectionProfile| p.rows.iter().map(|r| r.pair()).collect::<Vec<_>>();
        prop_assert_eq!(pairs(&a), pairs(&b));
    }
}
