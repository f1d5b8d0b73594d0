//! Gröbner bases checked against the naive reference engine.

mod naive;

use naive::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tac_core::*;

#[test]
fn worked_example_matches_oracle() {
    let k = QuotientRing::polynomial(PrimeField::default(), &["x", "y"]).unwrap();
    let gens = vec![k.parse("x^2 - y").unwrap(), k.parse("y^2").unwrap()];
    let ours = engine_basis(&gens, &k);
    let oracle = naive_buchberger(&gens.iter().map(to_naive).collect::<Vec<_>>());
    assert_eq!(canonical(ours), canonical(oracle.clone()));
    // sanity on the oracle itself: the basis is {x^2 - y, y^2}
    assert_eq!(oracle.len(), 2);
}

#[test]
fn random_ideals_match_oracle() {
    let k = QuotientRing::polynomial(PrimeField::default(), &["x", "y", "z"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for case in 0..30 {
        let g = rng.gen_range(1..=3);
        let gens: Vec<Poly> = (0..g).map(|_| random_poly(&k, &mut rng)).collect();
        let ours = engine_basis(&gens, &k);
        let oracle = naive_buchberger(&gens.iter().map(to_naive).collect::<Vec<_>>());
        assert_eq!(canonical(ours), canonical(oracle), "case {case}");
    }
}

#[test]
fn quotient_normal_forms_match_ambient_oracle() {
    let f = PrimeField::default();
    let k = QuotientRing::polynomial(f, &["x", "y", "z"]).unwrap();
    let q = QuotientRing::new(f, &["x", "y", "z"], &["x^2", "y^3 - x*z"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for case in 0..15 {
        let gens: Vec<Poly> = (0..2).map(|_| random_poly(&k, &mut rng)).collect();
        let mut ambient: Vec<NPoly> = gens.iter().map(to_naive).collect();
        ambient.extend(q.ideal_generators().iter().map(to_naive));
        let oracle = naive_buchberger(&ambient);
        let qgens: Vec<Poly> = gens.iter().map(|p| q.reduce(p)).collect();
        let vs: Vec<VectorElement> = qgens.iter().map(|p| VectorElement::new(vec![p.clone()])).collect();
        let basis = buchberger(&vs, &q).unwrap();
        for _ in 0..5 {
            let p = random_poly(&k, &mut rng);
            let ours = normal_form(&VectorElement::new(vec![q.reduce(&p)]), &basis, &q).unwrap();
            assert_eq!(to_naive(&ours.components[0]), reduce(&to_naive(&p), &oracle), "case {case}");
        }
    }
}

#[test]
fn random_submodules_match_oracle() {
    let k = QuotientRing::polynomial(PrimeField::default(), &["x", "y"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for case in 0..20 {
        let rank = rng.gen_range(2..=3);
        let gens: Vec<VectorElement> = (0..rng.gen_range(1..=3)).map(|_| random_vector(&k, rank, &mut rng)).collect();
        let ours = engine_module_basis(&gens, &k);
        let oracle = naive_buchberger(&gens.iter().map(to_naive_vec).collect::<Vec<_>>());
        assert_eq!(canonical(ours), canonical(oracle), "case {case}");
    }
}
