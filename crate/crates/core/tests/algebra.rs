use proptest::prelude::*;
use tac_core::*;

fn k2() -> QuotientRing {
    QuotientRing::polynomial(PrimeField::default(), &["x", "y"]).unwrap()
}

fn vec1(r: &QuotientRing, s: &str) -> VectorElement {
    VectorElement::new(vec![r.parse(s).unwrap()])
}

fn fmt(r: &QuotientRing, v: &VectorElement) -> Vec<String> {
    v.components.iter().map(|p| r.format(p)).collect()
}

#[test]
fn buchberger_keeps_reduced_inputs() {
    let k = k2();
    let gb = buchberger(&[vec1(&k, "x^2"), vec1(&k, "y^2")], &k).unwrap();
    let mut out: Vec<String> = gb.iter().map(|v| k.format(&v.components[0])).collect();
    out.sort();
    assert_eq!(out, vec!["x^2", "y^2"]);
    let gb = buchberger(&[vec1(&k, "x^2")], &k).unwrap();
    assert_eq!(gb.len(), 1);
}

#[test]
fn buchberger_rejects_mixed_ranks() {
    let k = k2();
    let v2 = VectorElement::new(vec![k.parse("x").unwrap(), k.zero()]);
    assert!(matches!(buchberger(&[vec1(&k, "x"), v2], &k), Err(Error::RankMismatch { .. })));
}

#[test]
fn normal_form_examples() {
    let k = k2();
    let b = buchberger(&[vec1(&k, "x^2")], &k).unwrap();
    assert!(normal_form(&vec1(&k, "x^2*y"), &b, &k).unwrap().is_zero());
    let b = buchberger(&[vec1(&k, "y^2")], &k).unwrap();
    assert_eq!(fmt(&k, &normal_form(&vec1(&k, "x*y + y^3"), &b, &k).unwrap()), vec!["x*y"]);
    let b = buchberger(&[vec1(&k, "x^2 - y")], &k).unwrap();
    assert_eq!(fmt(&k, &normal_form(&vec1(&k, "x^2 + x"), &b, &k).unwrap()), vec!["x + y"]);
}

#[test]
fn membership_examples() {
    let k = k2();
    let w = membership_with_witness(&vec1(&k, "x*y"), &[vec1(&k, "x")], &k).unwrap();
    assert_eq!(k.format(&w[0]), "y");
    let gens = [vec1(&k, "x^2"), vec1(&k, "y^2")];
    assert!(matches!(membership_with_witness(&vec1(&k, "y"), &gens, &k), Err(Error::NotMember)));
    let q = k.quotient_str(&["x^2"]).unwrap();
    let w = membership_with_witness(&vec1(&q, "x*y"), &[vec1(&q, "x")], &q).unwrap();
    assert_eq!(q.format(&w[0]), "y");
}

fn row(r: &QuotientRing, e: &[&str]) -> FreeMap {
    FreeMap::parse_rows(r, 1, e.len(), &[e.to_vec()]).unwrap()
}

#[test]
fn syzygy_examples() {
    let k = k2();
    let s = syzygies(&row(&k, &["x", "y"]));
    assert_eq!(s.cols(), 1);
    let col: Vec<String> = s.column(0).iter().map(|p| k.format(p)).collect();
    assert!(col == ["-y", "x"] || col == ["y", "-x"]);
    let q = k.quotient_str(&["x^2"]).unwrap();
    assert_eq!(syzygies(&row(&q, &["x"])).to_text(), "[[x]]");
    let r = q.quotient_str(&["y^2"]).unwrap();
    let s = syzygies(&row(&r, &["x", "y"]));
    let shown = FreeMap::parse_rows(&r, 2, 3, &[vec!["x", "0", "-y"], vec!["0", "y", "x"]]).unwrap();
    // same column span
    assert!(solve_right(&s, &shown).is_some());
    assert!(solve_right(&shown, &s).is_some());
}

fn ring_choices() -> Vec<QuotientRing> {
    let f = PrimeField::default();
    vec![
        QuotientRing::polynomial(f, &["x", "y"]).unwrap(),
        QuotientRing::new(f, &["x", "y"], &["x^2"]).unwrap(),
        QuotientRing::new(f, &["x", "y"], &["x^2", "y^2"]).unwrap(),
        QuotientRing::new(f, &["x", "y"], &["x^2 - y^3"]).unwrap(),
    ]
}

fn poly_strategy() -> impl Strategy<Value = Vec<(i64, u16, u16)>> {
    prop::collection::vec((-3i64..=3, 0u16..3, 0u16..3), 0..4)
}

fn build(r: &QuotientRing, t: &[(i64, u16, u16)]) -> Poly {
    let mut p = r.zero();
    for &(c, a, b) in t {
        let m = Poly::term(r.field().from_i64(c), Monomial::from_exponents(&[a, b]));
        p = r.add(&p, &m);
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn normal_form_is_idempotent_and_decides_membership(
        ri in 0usize..4,
        gens in prop::collection::vec((poly_strategy(), poly_strategy()), 1..3),
        v in (poly_strategy(), poly_strategy()),
    ) {
        let r = &ring_choices()[ri];
        let gens: Vec<VectorElement> =
            gens.iter().map(|(a, b)| VectorElement::new(vec![build(r, a), build(r, b)])).collect();
        let v = VectorElement::new(vec![build(r, &v.0), build(r, &v.1)]);
        let basis = buchberger(&gens, r).unwrap();
        let nf = normal_form(&v, &basis, r).unwrap();
        prop_assert_eq!(&normal_form(&nf, &basis, r).unwrap(), &nf);
        let member = membership_with_witness(&v, &gens, r);
        prop_assert_eq!(nf.is_zero(), member.is_ok());
        // an element built from the generators is always a member
        let mut w = vec![r.zero(), r.zero()];
        for (i, g) in gens.iter().enumerate() {
            let c = r.var(i % 2);
            for j in 0..2 {
                w[j] = r.add(&w[j], &r.mul(&c, &g.components[j]));
            }
        }
        prop_assert!(normal_form(&VectorElement::new(w), &basis, r).unwrap().is_zero());
    }

    #[test]
    fn syzygies_are_complete(
        ri in 0usize..4,
        entries in prop::collection::vec(poly_strategy(), 3),
        coeffs in prop::collection::vec(poly_strategy(), 3),
    ) {
        let r = &ring_choices()[ri];
        let m = FreeMap::from_rows(r, 1, 3, vec![entries.iter().map(|e| build(r, e)).collect()]).unwrap();
        let s = syzygies(&m);
        prop_assert!(m.mul(&s).is_zero());
        // any kernel vector built from the Koszul-style relations lies in the span
        let c: Vec<Poly> = coeffs.iter().map(|e| build(r, e)).collect();
        let (a, b, d) = (m.entry(0, 0), m.entry(0, 1), m.entry(0, 2));
        let mut v = vec![r.zero(), r.zero(), r.zero()];
        let koszul = [
            (0usize, 1usize, &c[0], a, b),
            (0, 2, &c[1], a, d),
            (1, 2, &c[2], b, d),
        ];
        for (i, j, k, p, q) in koszul {
            v[i] = r.add(&v[i], &r.mul(k, q));
            v[j] = r.sub(&v[j], &r.mul(k, p));
        }
        prop_assert!(m.apply(&v).iter().all(|p| p.is_zero()));
        if s.cols() > 0 {
            prop_assert!(Solver::new(&s).contains(&v));
        } else {
            prop_assert!(v.iter().all(|p| p.is_zero()));
        }
    }
}
