mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tac_core::*;

#[test]
fn left_approximation_of_example_one() {
    let bc = base_change();
    let left = left_approximation(&bc, &example_one(), -3, 3).unwrap();
    let expected = [(2, "[[y, 0, 0], [0, 0, 0]]"), (1, "[[y, 0], [0, 0]]"), (0, "[[y], [0]]"), (-1, "[[1], [0]]")];
    for (n, m) in expected {
        assert_eq!(left.map.component(n).to_text(), m, "degree {n}");
    }
    // identity up to the sign of the second basis vector
    let m = left.map.component(-2);
    assert!(m.entry(0, 0).terms().len() == 1 && m.entry(1, 1).terms().len() == 1);
    assert!(m.entry(0, 1).is_zero() && m.entry(1, 0).is_zero());
    for n in [-2, 0, 2] {
        assert_eq!(text(&left.target, n), "[[x, 0], [y, x]]");
        assert_eq!(text(&left.target, n + 1), "[[x, 0], [-y, x]]");
    }
    assert!(left.dual_iso.composites_are_identities());
}

#[test]
fn left_approximation_of_self_dual_example_is_dual_of_right() {
    let bc = base_change();
    let c = example_one();
    let right = right_approximation(&bc, &c, -3, 3).unwrap();
    let left = left_approximation(&bc, &c, -3, 3).unwrap();
    let dual_src = right.stc.dualize();
    for n in -2..=2 {
        assert_eq!(left.target.rank(n), dual_src.rank(n));
    }
    let z = left_approximation(&bc, &example_two(), -2, 2).unwrap();
    assert!(z.target.is_zero());
}

#[test]
fn right_approximation_factors_test_morphisms() {
    let bc = base_change();
    let (q, r) = rings();
    let c = example_one();
    let counit = right_approximation(&bc, &c, -6, 6).unwrap();
    let d = periodic(&q, "x");
    let sd = bc.apply_s(&d, -5, 5).unwrap();
    let cw = c.extend_to(-5, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let f = random_chain_map(&sd, &cw, -4, 4, &mut rng).unwrap();
        let h = factor_through_right(&bc, &counit, &d, &f, -3, 3).unwrap();
        assert!(h.is_some());
    }
    assert_eq!(sd.ring(), &r);
}

#[test]
fn left_approximation_factors_test_morphisms() {
    let bc = base_change();
    let q = rings().0;
    let c = example_one();
    let left = left_approximation(&bc, &c, -6, 6).unwrap();
    let e = periodic(&q, "x");
    let se = bc.apply_s(&e, -5, 5).unwrap();
    let cw = c.extend_to(-5, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = random_chain_map(&cw, &se, -4, 4, &mut rng).unwrap();
    assert!(factor_through_left(&bc, &left, &e, &g, -3, 3).unwrap().is_some());
}

#[test]
fn example_three_is_not_right_minimal() {
    let bc = base_change();
    let r = rings().1;
    let eps = right_approximation(&bc, &example_three(), -4, 4).unwrap();
    let p = mat(&r, &[&["1", "0"], &["0", "0"]]);
    let f = ChainMap::new(&eps.stc, &eps.stc, -4, vec![p; 9]).unwrap();
    assert!(minimality_witness(&eps.map, &f).unwrap().is_witness());
    let id = ChainMap::identity(&eps.stc, -4, 4).unwrap();
    assert!(matches!(minimality_witness(&eps.map, &id).unwrap(), MinimalityVerdict::Equivalence(_)));
}

#[test]
fn counit_of_a_base_change_is_not_right_minimal() {
    let bc = base_change();
    let d = bc.apply_t(&example_one()).unwrap().complex;
    let sd = bc.apply_s(&d, -6, 6).unwrap();
    let tk = bc.tensor_resolution(&d, -5, 5).unwrap();
    let eps = bc.counit_with(&sd, &tk, &FreeMap::identity(&bc.q, sd.rank(0)), -3, 3).unwrap();
    let x = eps.source().clone();
    // keep the D_n (x) K_0 block, kill the rest
    let comps = (-3..=3)
        .map(|n| {
            let keep = d.rank(n);
            FreeMap::identity(&bc.r, keep).block_diag(&FreeMap::zero(&bc.r, x.rank(n) - keep, x.rank(n) - keep))
        })
        .collect();
    let f = ChainMap::new(&x, &x, -3, comps).unwrap();
    assert!(minimality_witness(&eps, &f).unwrap().is_witness());
}

#[test]
fn cone_of_counit_is_double_shift() {
    let bc = base_change();
    for c in [example_one(), example_two(), example_three()] {
        let co = cone_of_counit(&bc, &c, -2, 2).unwrap();
        assert!(co.attempted);
        assert!(co.equivalence.expect("cone equivalent to the double shift").verify());
    }
}

#[test]
fn towers_have_null_homotopic_composites() {
    let bc = base_change();
    let c = example_one();
    let tower = triangle_resolution(&bc, &c, 2, -2, 2).unwrap();
    assert_eq!(tower.levels.len(), 3);
    assert!(tower.null_homotopies.iter().all(Option::is_some));
    for e in &tower.equivalences {
        assert!(e.as_ref().expect("B_i is a shift of STC").verify());
    }
    let zero = triangle_resolution(&bc, &example_two(), 2, -2, 2).unwrap();
    assert!(zero.levels.iter().all(|l| l.complex().extend_to(-2, 2).unwrap().window_ranks().iter().all(|&r| r == 0)));
    let single = triangle_resolution(&bc, &c, 0, -2, 2).unwrap();
    assert_eq!(single.levels.len(), 1);
    assert!(single.null_homotopies.is_empty());
}
