use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tac_core::*;

fn residue_field(ring: &QuotientRing) -> ModulePresentation {
    let vars: Vec<Poly> = (0..ring.nvars()).map(|i| ring.var(i)).collect();
    ModulePresentation::new(FreeMap::from_rows(ring, 1, vars.len(), vec![vars]).unwrap())
}

fn groebner(c: &mut Criterion) {
    let k = QuotientRing::polynomial(PrimeField::default(), &["x", "y", "z"]).unwrap();
    let gens: Vec<VectorElement> = ["x^2 - y*z", "y^3 - x*z^2", "x*y*z - z^3"]
        .iter()
        .map(|g| VectorElement::new(vec![k.parse(g).unwrap()]))
        .collect();
    c.bench_function("buchberger/3 cubics in 3 variables", |b| b.iter(|| buchberger(black_box(&gens), &k).unwrap()));
}

fn resolutions(c: &mut Criterion) {
    let f = PrimeField::default();
    let q = QuotientRing::new(f, &["x", "y"], &["x^2", "y^2"]).unwrap();
    let m = residue_field(&q);
    c.bench_function("minimal resolution/k over k[x,y]/(x^2,y^2), length 8", |b| {
        b.iter(|| minimal_free_resolution(black_box(&m), 8).unwrap())
    });
    let h = QuotientRing::new(f, &["x", "y", "z"], &["x^2"]).unwrap();
    let mh = residue_field(&h);
    c.bench_function("complete resolution/k over k[x,y,z]/(x^2)", |b| {
        b.iter(|| complete_resolution(black_box(&mh)).unwrap())
    });
}

fn counit(c: &mut Criterion) {
    let q = QuotientRing::new(PrimeField::default(), &["x", "y"], &["x^2"]).unwrap();
    let r = q.quotient_str(&["y^2"]).unwrap();
    let bc = BaseChange::new(&q, &r).unwrap();
    let cx = complete_resolution(&residue_field(&r)).unwrap().complex;
    c.bench_function("counit/complete resolution of k on [-6, 6]", |b| {
        b.iter(|| bc.counit(black_box(&cx), -6, 6).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = groebner, resolutions, counit
}
criterion_main!(benches);
